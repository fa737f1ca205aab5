//! Characteristic functions with the structural metadata the Fourier-side
//! routines rely on, and the symmetrization of the error law.

use std::fmt;
use std::sync::Arc;

use num_complex::Complex;
use serde::{Deserialize, Serialize};

use crate::distributions::DistributionSpec;
use crate::error::{DeconError, Result};
use crate::scalar::Real;

/// Zeros of a c.f. on `t > 0` (c.f.s of real laws are Hermitian, so the
/// negative half-line mirrors this).
#[derive(Clone, Debug, PartialEq)]
pub enum ZeroSet<T> {
    Empty,
    /// Isolated zeros at `first + k·period`, `k = 0, 1, ...`.
    Periodic { first: T, period: T },
    /// Finitely many closed intervals; degenerate `(τ, τ)` entries are
    /// isolated zeros and an infinite right end is allowed.
    Intervals(Vec<(T, T)>),
    /// Identically zero on `[bound, ∞)`.
    Beyond(T),
    Unknown,
}

impl<T: Real> ZeroSet<T> {
    /// Zero locations in `(lo, hi)` usable as quadrature breakpoints, at most
    /// `cap` of them.
    pub fn points_in(&self, lo: T, hi: T, cap: usize) -> Vec<T> {
        let inside = |x: T| x > lo && x < hi;
        match self {
            ZeroSet::Empty | ZeroSet::Unknown => Vec::new(),
            ZeroSet::Periodic { first, period } => {
                let mut out = Vec::new();
                let mut k = 0usize;
                loop {
                    let x = *first + *period * T::of_usize(k);
                    if x >= hi || out.len() >= cap {
                        break;
                    }
                    if inside(x) {
                        out.push(x);
                    }
                    k += 1;
                }
                out
            }
            ZeroSet::Intervals(iv) => iv
                .iter()
                .flat_map(|&(a, b)| [a, b])
                .filter(|&x| x.is_finite() && inside(x))
                .take(cap)
                .collect(),
            ZeroSet::Beyond(b) => {
                if inside(*b) {
                    vec![*b]
                } else {
                    Vec::new()
                }
            }
        }
    }

    /// Whether the zero set has Lebesgue measure zero; `None` when unknown.
    pub fn is_null(&self) -> Option<bool> {
        match self {
            ZeroSet::Empty | ZeroSet::Periodic { .. } => Some(true),
            ZeroSet::Intervals(iv) => Some(iv.iter().all(|(a, b)| a == b)),
            ZeroSet::Beyond(_) => Some(false),
            ZeroSet::Unknown => None,
        }
    }

    /// Zero set of a product.
    pub fn union(&self, other: &Self) -> Self {
        use ZeroSet::*;
        match (self, other) {
            (Empty, z) | (z, Empty) => z.clone(),
            (Unknown, _) | (_, Unknown) => Unknown,
            (Beyond(a), Beyond(b)) => Beyond(a.min(*b)),
            (Periodic { first: f1, period: p1 }, Periodic { first: f2, period: p2 }) if f1 == f2 && p1 == p2 => {
                self.clone()
            }
            (Intervals(a), Intervals(b)) => {
                let mut v = a.clone();
                v.extend(b.iter().copied());
                Intervals(v)
            }
            (Intervals(a), Beyond(b)) | (Beyond(b), Intervals(a)) => {
                let mut v: Vec<(T, T)> = a.iter().copied().filter(|&(lo, _)| lo < *b).collect();
                v.push((*b, T::infinity()));
                Intervals(v)
            }
            _ => Unknown,
        }
    }

    /// Finite list of zero intervals on `[0, ∞]` when available.
    pub fn intervals(&self) -> Option<Vec<(T, T)>> {
        match self {
            ZeroSet::Empty => Some(Vec::new()),
            ZeroSet::Intervals(iv) => Some(iv.clone()),
            ZeroSet::Beyond(b) => Some(vec![(*b, T::infinity())]),
            ZeroSet::Periodic { .. } | ZeroSet::Unknown => None,
        }
    }
}

/// Rate at which `|Φ(t)|` vanishes as `|t| → ∞`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Decay<T> {
    None,
    /// `|Φ(t)| = O(|t|^-ν)`.
    Algebraic(T),
    Exponential,
    Compact,
}

impl<T: Real> Decay<T> {
    fn rank(&self) -> (u8, T) {
        match self {
            Decay::None => (0, T::zero()),
            Decay::Algebraic(v) => (1, *v),
            Decay::Exponential => (2, T::zero()),
            Decay::Compact => (3, T::zero()),
        }
    }

    pub fn stronger(self, other: Self) -> Self {
        let (a, b) = (self.rank(), other.rank());
        if a.0 > b.0 || (a.0 == b.0 && a.1 >= b.1) {
            self
        } else {
            other
        }
    }

    pub fn weaker(self, other: Self) -> Self {
        if self.stronger(other) == self {
            other
        } else {
            self
        }
    }

    /// Product of two c.f.s decays at least as fast as either factor, and
    /// algebraic rates add.
    fn product(self, other: Self) -> Self {
        match (self, other) {
            (Decay::Algebraic(a), Decay::Algebraic(b)) => Decay::Algebraic(a + b),
            (a, b) => a.stronger(b),
        }
    }
}

type Eval<T> = Arc<dyn Fn(T) -> Complex<T> + Send + Sync>;

/// A characteristic function (or, for the deconvolution transform, any
/// Hermitian spectral function) with structural metadata.
#[derive(Clone)]
pub struct CharFn<T> {
    eval: Eval<T>,
    real_symmetric: bool,
    unit_interval: bool,
    zero_set: ZeroSet<T>,
    support_bound: Option<T>,
    decay: Decay<T>,
    atoms: Option<Vec<T>>,
    frequency: T,
    origin: Option<DistributionSpec<T>>,
}

impl<T: fmt::Debug> fmt::Debug for CharFn<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("CharFn")
            .field("real_symmetric", &self.real_symmetric)
            .field("unit_interval", &self.unit_interval)
            .field("zero_set", &self.zero_set)
            .field("support_bound", &self.support_bound)
            .field("decay", &self.decay)
            .field("origin", &self.origin)
            .finish_non_exhaustive()
    }
}

/// The fixed log-spaced sample on which claimed flags are verified.
fn flag_sample<T: Real>() -> impl Iterator<Item = T> {
    const N: usize = 4096;
    (0..N).map(|i| T::of(10f64.powf(-4.0 + 8.0 * i as f64 / (N - 1) as f64)))
}

impl<T: Real> CharFn<T> {
    /// Wraps an arbitrary function. No structure is assumed: flags are off,
    /// the zero set is unknown and no decay is claimed.
    pub fn from_fn<F>(f: F) -> Self
    where
        F: Fn(T) -> Complex<T> + Send + Sync + 'static,
    {
        Self {
            eval: Arc::new(f),
            real_symmetric: false,
            unit_interval: false,
            zero_set: ZeroSet::Unknown,
            support_bound: None,
            decay: Decay::None,
            atoms: None,
            frequency: T::zero(),
            origin: None,
        }
    }

    /// C.f. of a catalog distribution.
    pub fn of(spec: &DistributionSpec<T>) -> Self {
        let s = spec.clone();
        let mut cf = Self::from_fn(move |t| s.cf(t))
            .with_zero_set(spec.cf_zero_set())
            .with_decay(spec.cf_decay())
            .with_frequency(spec.frequency())
            .with_atoms(spec.atoms().into_iter().map(|(x, _)| x).collect());
        cf.support_bound = spec.cf_support_bound();
        cf.origin = Some(spec.clone());
        cf.real_symmetric = cf.sampled_real_symmetric();
        cf.unit_interval = cf.real_symmetric && cf.sampled_unit_interval();
        cf
    }

    pub fn with_zero_set(mut self, z: ZeroSet<T>) -> Self {
        if let ZeroSet::Beyond(b) = z {
            self.support_bound = Some(self.support_bound.map_or(b, |s| s.min(b)));
        }
        self.zero_set = z;
        self
    }
    pub fn with_decay(mut self, d: Decay<T>) -> Self {
        self.decay = d;
        self
    }
    pub fn with_support_bound(mut self, b: T) -> Self {
        self.support_bound = Some(b);
        self.decay = Decay::Compact;
        self
    }
    pub fn with_frequency(mut self, w: T) -> Self {
        self.frequency = w.abs();
        self
    }
    pub fn with_atoms(mut self, atoms: Vec<T>) -> Self {
        self.atoms = Some(atoms);
        self
    }

    /// Claims the values are real (hence even) and checks the claim.
    pub fn claim_real_symmetric(mut self) -> Result<Self> {
        if !self.sampled_real_symmetric() {
            return Err(DeconError::Precondition("function is not real-valued on the check sample".into()));
        }
        self.real_symmetric = true;
        Ok(self)
    }

    /// Claims values in `[0, 1]` and checks the claim.
    pub fn claim_unit_interval(mut self) -> Result<Self> {
        if !(self.sampled_real_symmetric() && self.sampled_unit_interval()) {
            return Err(DeconError::Precondition("function leaves [0, 1] on the check sample".into()));
        }
        self.real_symmetric = true;
        self.unit_interval = true;
        Ok(self)
    }

    fn sampled_real_symmetric(&self) -> bool {
        let tol = T::flag_tol();
        flag_sample::<T>().all(|t| {
            let v = self.eval(t);
            v.im.abs() <= tol * v.re.abs().max(T::one())
        })
    }

    fn sampled_unit_interval(&self) -> bool {
        let tol = T::flag_tol();
        flag_sample::<T>().all(|t| {
            let v = self.eval(t).re;
            v >= -tol && v <= T::one() + tol
        })
    }

    #[inline]
    pub fn eval(&self, t: T) -> Complex<T> {
        (self.eval)(t)
    }

    pub fn as_fn(&self) -> &(dyn Fn(T) -> Complex<T> + Send + Sync) {
        &*self.eval
    }

    pub fn is_real_symmetric(&self) -> bool {
        self.real_symmetric
    }
    pub fn is_unit_interval(&self) -> bool {
        self.unit_interval
    }
    pub fn zero_set(&self) -> &ZeroSet<T> {
        &self.zero_set
    }
    pub fn support_bound(&self) -> Option<T> {
        self.support_bound
    }
    pub fn decay(&self) -> Decay<T> {
        self.decay
    }
    /// Known atom locations of the underlying law, `None` if not known.
    pub fn atoms(&self) -> Option<&[T]> {
        self.atoms.as_deref()
    }
    pub fn frequency(&self) -> T {
        self.frequency
    }
    pub fn origin(&self) -> Option<&DistributionSpec<T>> {
        self.origin.as_ref()
    }

    /// `Φ(t)·Ψ(t)`, the c.f. of the independent sum.
    pub fn product(&self, other: &Self) -> Self {
        let (f, g) = (self.eval.clone(), other.eval.clone());
        let atoms = match (&self.atoms, &other.atoms) {
            (Some(a), Some(b)) => Some(a.iter().flat_map(|&x| b.iter().map(move |&y| x + y)).collect()),
            _ => None,
        };
        let support_bound = match (self.support_bound, other.support_bound) {
            (Some(a), Some(b)) => Some(a.min(b)),
            (a, b) => a.or(b),
        };
        Self {
            eval: Arc::new(move |t| f(t) * g(t)),
            real_symmetric: self.real_symmetric && other.real_symmetric,
            unit_interval: self.unit_interval && other.unit_interval,
            zero_set: self.zero_set.union(&other.zero_set),
            support_bound,
            decay: self.decay.product(other.decay),
            atoms,
            frequency: self.frequency + other.frequency,
            origin: None,
        }
    }

    /// `t ↦ conj(Φ(t)) = Φ(-t)`, the c.f. of the reflected law.
    pub fn reflect(&self) -> Self {
        let f = self.eval.clone();
        Self {
            eval: Arc::new(move |t| f(t).conj()),
            atoms: self.atoms.as_ref().map(|a| a.iter().map(|&x| -x).collect()),
            origin: None,
            ..self.clone()
        }
    }

    /// `Φ(t)·exp(-itτ)`, the c.f. of the law shifted by `-τ`.
    pub fn shift(&self, tau: T) -> Self {
        let f = self.eval.clone();
        Self {
            eval: Arc::new(move |t| f(t) * Complex::new((t * tau).cos(), -(t * tau).sin())),
            atoms: self.atoms.as_ref().map(|a| a.iter().map(|&x| x - tau).collect()),
            frequency: self.frequency + tau.abs(),
            origin: None,
            real_symmetric: false,
            unit_interval: false,
            ..self.clone()
        }
    }
}

/// How the symmetrizing law `η` is chosen.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SymmetrizationMode<T> {
    /// `η` an independent copy of the error.
    Conjugate,
    /// `η = δ_τ`; valid when the error c.f. times `exp(-itτ)` is real and
    /// non-negative.
    Shift(T),
    /// User-supplied `η` given by its c.f.
    Custom,
}

/// The symmetrized error `ε̄ = ε - η'` together with the laws that define it.
#[derive(Clone, Debug)]
pub struct Symmetrization<T> {
    mode: SymmetrizationMode<T>,
    phi_eps: CharFn<T>,
    phi_eta: CharFn<T>,
    phi_eps_bar: CharFn<T>,
}

impl<T: Real> Symmetrization<T> {
    pub fn conjugate(phi_eps: CharFn<T>) -> Result<Self> {
        let eps_bar = phi_eps.product(&phi_eps.reflect());
        let f = phi_eps.clone();
        let eps_bar = CharFn {
            eval: Arc::new(move |t| Complex::new(f.eval(t).norm_sqr(), T::zero())),
            zero_set: phi_eps.zero_set.clone(),
            ..eps_bar
        };
        Self::build(SymmetrizationMode::Conjugate, phi_eps.clone(), phi_eps, eps_bar)
    }

    pub fn shift(phi_eps: CharFn<T>, tau: T) -> Result<Self> {
        if !tau.is_finite() {
            return Err(DeconError::SymmetrizationInvalid(format!("shift {tau} is not finite")));
        }
        let spec = DistributionSpec::dirac(tau)?;
        let eta = CharFn::of(&spec);
        let shifted = phi_eps.shift(tau);
        let f = shifted.eval.clone();
        let eps_bar = CharFn { eval: Arc::new(move |t| Complex::new(f(t).re, T::zero())), ..shifted.clone() };
        if !shifted.sampled_real_symmetric() {
            return Err(DeconError::SymmetrizationInvalid(format!(
                "error c.f. times exp(-it·{tau}) is not real-valued"
            )));
        }
        Self::build(SymmetrizationMode::Shift(tau), phi_eps, eta, eps_bar)
    }

    pub fn custom(phi_eps: CharFn<T>, phi_eta: CharFn<T>) -> Result<Self> {
        let eps_bar = phi_eps.product(&phi_eta.reflect());
        if !eps_bar.sampled_real_symmetric() {
            return Err(DeconError::SymmetrizationInvalid("Φ_ε·conj(Φ_η) is not real-valued".into()));
        }
        let f = eps_bar.eval.clone();
        let eps_bar = CharFn { eval: Arc::new(move |t| Complex::new(f(t).re, T::zero())), ..eps_bar };
        Self::build(SymmetrizationMode::Custom, phi_eps, phi_eta, eps_bar)
    }

    pub fn from_mode(phi_eps: CharFn<T>, mode: &SymmetrizationMode<T>) -> Result<Self> {
        match mode {
            SymmetrizationMode::Conjugate => Self::conjugate(phi_eps),
            SymmetrizationMode::Shift(tau) => Self::shift(phi_eps, *tau),
            SymmetrizationMode::Custom => Err(DeconError::SymmetrizationInvalid(
                "custom symmetrization needs the c.f. of η; use Symmetrization::custom".into(),
            )),
        }
    }

    fn build(mode: SymmetrizationMode<T>, phi_eps: CharFn<T>, phi_eta: CharFn<T>, eps_bar: CharFn<T>) -> Result<Self> {
        let phi_eps_bar = eps_bar
            .claim_unit_interval()
            .map_err(|_| DeconError::SymmetrizationInvalid("symmetrized error c.f. leaves [0, 1]".into()))?;
        Ok(Self { mode, phi_eps, phi_eta, phi_eps_bar })
    }

    pub fn mode(&self) -> &SymmetrizationMode<T> {
        &self.mode
    }
    pub fn phi_eps(&self) -> &CharFn<T> {
        &self.phi_eps
    }
    pub fn phi_eta(&self) -> &CharFn<T> {
        &self.phi_eta
    }
    pub fn phi_eps_bar(&self) -> &CharFn<T> {
        &self.phi_eps_bar
    }

    /// `Φ_ε̄(t)` clamped to `[0, 1]`.
    #[inline]
    pub fn eps_bar(&self, t: T) -> T {
        self.phi_eps_bar.eval(t).re.max(T::zero()).min(T::one())
    }

    /// `Φ_Ÿ = Φ_Y·conj(Φ_η)`, the c.f. of the symmetrized observations.
    pub fn compose_y_dotdot(&self, phi_y: &CharFn<T>) -> CharFn<T> {
        phi_y.product(&self.phi_eta.reflect())
    }

    /// `P(t, m) = (1 - Φ_ε̄(t))^(m+1)`.
    pub fn m_power(&self, t: T, m: usize) -> T {
        let p = self.eps_bar(t);
        if p >= T::one() {
            return T::zero();
        }
        (T::of_usize(m + 1) * (-p).ln_1p()).exp()
    }

    /// `G(t, m) = Σ_{ℓ=0}^{m} (1 - Φ_ε̄(t))^ℓ`, evaluated as
    /// `(1 - P(t, m))/Φ_ε̄(t)` and as `m + 1` where `Φ_ε̄` is below
    /// `zero_threshold`.
    pub fn geometric_sum(&self, t: T, m: usize, zero_threshold: T) -> T {
        let p = self.eps_bar(t);
        let n = T::of_usize(m + 1);
        if p < zero_threshold {
            return n;
        }
        if p >= T::one() {
            return T::one();
        }
        -(n * (-p).ln_1p()).exp_m1() / p
    }
}
