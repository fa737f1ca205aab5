//! Catalog of closed-form distributions used as targets and errors.

use std::sync::Arc;

use num_complex::Complex;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::charfn::{Decay, ZeroSet};
use crate::error::{DeconError, Result};
use crate::scalar::Real;
use crate::special::si;

/// Parameterised family, as written in configuration files:
/// `{"family": "gaussian", "params": {"mean": 0, "sd": 1}}`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(
    tag = "family",
    content = "params",
    rename_all = "snake_case",
    bound(serialize = "T: Real + Serialize", deserialize = "T: Real + Deserialize<'de>")
)]
pub enum Family<T> {
    Dirac { location: T },
    Gaussian { mean: T, sd: T },
    Laplace { location: T, scale: T },
    Uniform { lo: T, hi: T },
    /// Difference of two independent uniforms on `[-half_width, half_width]`;
    /// c.f. `(sin(at)/(at))^2`.
    TriangularDiff { half_width: T },
    /// Fejér-type law with c.f. `(1 - |t|/bound)_+`.
    PolyaTriangle { bound: T },
    Mixture { weights: Vec<T>, components: Vec<DistributionSpec<T>> },
}

/// A validated member of [`Family`].
#[derive(Clone, Debug, PartialEq)]
pub struct DistributionSpec<T> {
    family: Family<T>,
}

impl<T: Real + Serialize> Serialize for DistributionSpec<T> {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.family.serialize(s)
    }
}

impl<'de, T: Real + Deserialize<'de>> Deserialize<'de> for DistributionSpec<T> {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let family = Family::deserialize(d)?;
        Self::new(family).map_err(serde::de::Error::custom)
    }
}

/// One term `γ(t)·φ(t)` of a decomposition of a c.f. valid for `t ≥ t0`, where
/// `γ` is the transform of a finite signed point measure and `φ` is of
/// bounded variation.
#[derive(Clone)]
pub struct FactorTerm<T> {
    /// Locations and signed weights of the point measure.
    pub atoms: Vec<(T, T)>,
    pub envelope: Arc<dyn Fn(T) -> Complex<T> + Send + Sync>,
    pub envelope_deriv: Arc<dyn Fn(T) -> Complex<T> + Send + Sync>,
    /// Limit of the envelope as `t → ∞`.
    pub envelope_limit: T,
    pub envelope_decay: Decay<T>,
    pub t0: T,
}

impl<T> std::fmt::Debug for FactorTerm<T>
where
    T: std::fmt::Debug,
{
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("FactorTerm").field("atoms", &self.atoms).field("t0", &self.t0).finish_non_exhaustive()
    }
}

fn sinc<T: Real>(x: T) -> T {
    if x.abs() < T::of(1e-4) {
        T::one() - x * x / T::of(6.0)
    } else {
        x.sin() / x
    }
}

fn erfc<T: Real>(x: T) -> T {
    T::of(libm::erfc(x.to_f64_lossy()))
}

fn cis<T: Real>(theta: T) -> Complex<T> {
    Complex::new(theta.cos(), theta.sin())
}

fn positive_finite<T: Real>(x: T, what: &str) -> Result<()> {
    if x > T::zero() && x.is_finite() {
        Ok(())
    } else {
        Err(DeconError::ParameterDomain(format!("{what} must be positive and finite, got {x}")))
    }
}

fn finite<T: Real>(x: T, what: &str) -> Result<()> {
    if x.is_finite() {
        Ok(())
    } else {
        Err(DeconError::ParameterDomain(format!("{what} must be finite, got {x}")))
    }
}

impl<T: Real> DistributionSpec<T> {
    pub fn new(family: Family<T>) -> Result<Self> {
        match &family {
            Family::Dirac { location } => finite(*location, "dirac location")?,
            Family::Gaussian { mean, sd } => {
                finite(*mean, "gaussian mean")?;
                positive_finite(*sd, "gaussian sd")?;
            }
            Family::Laplace { location, scale } => {
                finite(*location, "laplace location")?;
                positive_finite(*scale, "laplace scale")?;
            }
            Family::Uniform { lo, hi } => {
                finite(*lo, "uniform lo")?;
                finite(*hi, "uniform hi")?;
                if !(lo < hi) {
                    return Err(DeconError::ParameterDomain(format!("uniform needs lo < hi, got [{lo}, {hi}]")));
                }
            }
            Family::TriangularDiff { half_width } => positive_finite(*half_width, "triangular_diff half_width")?,
            Family::PolyaTriangle { bound } => positive_finite(*bound, "polya_triangle bound")?,
            Family::Mixture { weights, components } => {
                if weights.is_empty() || weights.len() != components.len() {
                    return Err(DeconError::ParameterDomain(
                        "mixture needs as many weights as components, at least one".into(),
                    ));
                }
                if weights.iter().any(|w| !(*w >= T::zero() && w.is_finite())) {
                    return Err(DeconError::ParameterDomain("mixture weights must be non-negative".into()));
                }
                let total: T = weights.iter().copied().sum();
                if (total - T::one()).abs() > T::of(1e-12).max(T::epsilon() * T::of(16.0)) {
                    return Err(DeconError::ParameterDomain(format!("mixture weights sum to {total}, not 1")));
                }
            }
        }
        Ok(Self { family })
    }

    pub fn family(&self) -> &Family<T> {
        &self.family
    }

    pub fn dirac(location: T) -> Result<Self> {
        Self::new(Family::Dirac { location })
    }
    pub fn gaussian(mean: T, sd: T) -> Result<Self> {
        Self::new(Family::Gaussian { mean, sd })
    }
    pub fn laplace(location: T, scale: T) -> Result<Self> {
        Self::new(Family::Laplace { location, scale })
    }
    pub fn uniform(lo: T, hi: T) -> Result<Self> {
        Self::new(Family::Uniform { lo, hi })
    }
    pub fn triangular_diff(half_width: T) -> Result<Self> {
        Self::new(Family::TriangularDiff { half_width })
    }
    pub fn polya_triangle(bound: T) -> Result<Self> {
        Self::new(Family::PolyaTriangle { bound })
    }
    pub fn mixture(weights: Vec<T>, components: Vec<Self>) -> Result<Self> {
        Self::new(Family::Mixture { weights, components })
    }

    fn mix<F: Fn(&Self) -> T>(weights: &[T], comps: &[Self], f: F) -> T {
        weights.iter().zip(comps).map(|(&w, c)| w * f(c)).sum()
    }

    /// Right-continuous distribution function `F(x)`.
    pub fn cdf(&self, x: T) -> T {
        let half = T::of(0.5);
        match &self.family {
            Family::Dirac { location } => {
                if x >= *location {
                    T::one()
                } else {
                    T::zero()
                }
            }
            Family::Gaussian { mean, sd } => half * erfc(-(x - *mean) / (*sd * T::SQRT_2())),
            Family::Laplace { location, scale } => {
                let z = (x - *location) / *scale;
                if z < T::zero() {
                    half * z.exp()
                } else {
                    T::one() - half * (-z).exp()
                }
            }
            Family::Uniform { lo, hi } => ((x - *lo) / (*hi - *lo)).max(T::zero()).min(T::one()),
            Family::TriangularDiff { .. } | Family::PolyaTriangle { .. } => {
                if x <= T::zero() {
                    self.sf(-x)
                } else {
                    T::one() - self.sf(x)
                }
            }
            Family::Mixture { weights, components } => Self::mix(weights, components, |c| c.cdf(x)),
        }
    }

    /// Left limit `F(x-)`.
    pub fn cdf_left(&self, x: T) -> T {
        match &self.family {
            Family::Dirac { location } => {
                if x > *location {
                    T::one()
                } else {
                    T::zero()
                }
            }
            Family::Mixture { weights, components } => Self::mix(weights, components, |c| c.cdf_left(x)),
            _ => self.cdf(x),
        }
    }

    /// Midpoint of the jump, `(F(x) + F(x-))/2`.
    pub fn cdf_mid(&self, x: T) -> T {
        T::of(0.5) * (self.cdf(x) + self.cdf_left(x))
    }

    /// Survival function `1 - F(x)`, accurate in the upper tail.
    pub fn sf(&self, x: T) -> T {
        let half = T::of(0.5);
        match &self.family {
            Family::Dirac { location } => {
                if x >= *location {
                    T::zero()
                } else {
                    T::one()
                }
            }
            Family::Gaussian { mean, sd } => half * erfc((x - *mean) / (*sd * T::SQRT_2())),
            Family::Laplace { location, scale } => {
                let z = (x - *location) / *scale;
                if z < T::zero() {
                    T::one() - half * z.exp()
                } else {
                    half * (-z).exp()
                }
            }
            Family::Uniform { lo, hi } => ((*hi - x) / (*hi - *lo)).max(T::zero()).min(T::one()),
            Family::TriangularDiff { half_width } => {
                let w = T::of(2.0) * *half_width;
                if x >= w {
                    T::zero()
                } else if x >= T::zero() {
                    let r = w - x;
                    r * r / (T::of(2.0) * w * w)
                } else if x > -w {
                    let r = w + x;
                    T::one() - r * r / (T::of(2.0) * w * w)
                } else {
                    T::one()
                }
            }
            Family::PolyaTriangle { bound } => {
                let y = *bound * x;
                if y == T::zero() {
                    return half;
                }
                // 1 - F = 1/2 - (Si(y) - (1 - cos y)/y)/π
                let s = T::of(2.0) * (y * half).sin().powi(2) / y;
                half - (si(y) - s) / T::PI()
            }
            Family::Mixture { weights, components } => Self::mix(weights, components, |c| c.sf(x)),
        }
    }

    /// Lebesgue density, `None` when the law has atoms.
    pub fn pdf(&self, x: T) -> Option<T> {
        let half = T::of(0.5);
        Some(match &self.family {
            Family::Dirac { .. } => return None,
            Family::Gaussian { mean, sd } => {
                let z = (x - *mean) / *sd;
                (-half * z * z).exp() / (*sd * (T::TAU()).sqrt())
            }
            Family::Laplace { location, scale } => (-(x - *location).abs() / *scale).exp() / (T::of(2.0) * *scale),
            Family::Uniform { lo, hi } => {
                if x >= *lo && x <= *hi {
                    T::one() / (*hi - *lo)
                } else {
                    T::zero()
                }
            }
            Family::TriangularDiff { half_width } => {
                let w = T::of(2.0) * *half_width;
                ((w - x.abs()) / (w * w)).max(T::zero())
            }
            Family::PolyaTriangle { bound } => {
                let y = half * *bound * x;
                *bound * sinc(y).powi(2) / T::TAU()
            }
            Family::Mixture { weights, components } => {
                let mut acc = T::zero();
                for (&w, c) in weights.iter().zip(components) {
                    acc += w * c.pdf(x)?;
                }
                acc
            }
        })
    }

    /// Average of the one-sided density limits `(f(x+) + f(x-))/2`.
    pub fn pdf_mid(&self, x: T) -> Option<T> {
        match &self.family {
            Family::Uniform { lo, hi } if x == *lo || x == *hi => Some(T::of(0.5) / (*hi - *lo)),
            Family::Mixture { weights, components } => {
                let mut acc = T::zero();
                for (&w, c) in weights.iter().zip(components) {
                    acc += w * c.pdf_mid(x)?;
                }
                Some(acc)
            }
            _ => self.pdf(x),
        }
    }

    /// Characteristic function `E[exp(itX)]`.
    pub fn cf(&self, t: T) -> Complex<T> {
        let real = |v: T| Complex::new(v, T::zero());
        match &self.family {
            Family::Dirac { location } => cis(t * *location),
            Family::Gaussian { mean, sd } => cis(t * *mean) * (-T::of(0.5) * (*sd * t).powi(2)).exp(),
            Family::Laplace { location, scale } => cis(t * *location) / (T::one() + (*scale * t).powi(2)),
            Family::Uniform { lo, hi } => cis(t * T::of(0.5) * (*lo + *hi)) * sinc(t * T::of(0.5) * (*hi - *lo)),
            Family::TriangularDiff { half_width } => real(sinc(*half_width * t).powi(2)),
            Family::PolyaTriangle { bound } => real((T::one() - t.abs() / *bound).max(T::zero())),
            Family::Mixture { weights, components } => weights
                .iter()
                .zip(components)
                .fold(Complex::new(T::zero(), T::zero()), |acc, (&w, c)| acc + c.cf(t) * w),
        }
    }

    /// Raw moment `E[X^k]`, `None` when it does not exist.
    pub fn moment(&self, k: u32) -> Option<T> {
        if k == 0 {
            return Some(T::one());
        }
        match &self.family {
            Family::Dirac { location } => Some(location.powi(k as i32)),
            Family::Gaussian { mean, sd } => {
                let (mut prev, mut cur) = (T::one(), *mean);
                for j in 2..=k {
                    let next = *mean * cur + T::of_usize(j as usize - 1) * *sd * *sd * prev;
                    prev = cur;
                    cur = next;
                }
                Some(cur)
            }
            Family::Laplace { location, scale } => {
                let central = |j: u32| {
                    if j % 2 == 1 {
                        T::zero()
                    } else {
                        factorial::<T>(j) * scale.powi(j as i32)
                    }
                };
                Some(shifted_moment(*location, k, central))
            }
            Family::Uniform { lo, hi } => {
                let k1 = T::of_usize(k as usize + 1);
                Some((hi.powi(k as i32 + 1) - lo.powi(k as i32 + 1)) / (k1 * (*hi - *lo)))
            }
            Family::TriangularDiff { half_width } => {
                let u = |j: u32| {
                    if j % 2 == 1 {
                        T::zero()
                    } else {
                        half_width.powi(j as i32) / T::of_usize(j as usize + 1)
                    }
                };
                let mut acc = T::zero();
                for j in 0..=k {
                    acc += binomial::<T>(k, j) * u(j) * u(k - j);
                }
                Some(acc)
            }
            Family::PolyaTriangle { .. } => None,
            Family::Mixture { weights, components } => {
                let mut acc = T::zero();
                for (&w, c) in weights.iter().zip(components) {
                    acc += w * c.moment(k)?;
                }
                Some(acc)
            }
        }
    }

    /// Point masses as `(location, mass)` pairs.
    pub fn atoms(&self) -> Vec<(T, T)> {
        match &self.family {
            Family::Dirac { location } => vec![(*location, T::one())],
            Family::Mixture { weights, components } => {
                let mut out: Vec<(T, T)> = Vec::new();
                for (&w, c) in weights.iter().zip(components) {
                    for (x, p) in c.atoms() {
                        match out.iter_mut().find(|(y, _)| *y == x) {
                            Some(slot) => slot.1 += w * p,
                            None => out.push((x, w * p)),
                        }
                    }
                }
                out.retain(|&(_, p)| p > T::zero());
                out
            }
            _ => Vec::new(),
        }
    }

    pub fn is_continuous(&self) -> bool {
        self.atoms().is_empty()
    }

    /// Zeros of the c.f. on `t > 0`.
    pub fn cf_zero_set(&self) -> ZeroSet<T> {
        match &self.family {
            Family::Dirac { .. } | Family::Gaussian { .. } | Family::Laplace { .. } => ZeroSet::Empty,
            Family::Uniform { lo, hi } => {
                let p = T::TAU() / (*hi - *lo);
                ZeroSet::Periodic { first: p, period: p }
            }
            Family::TriangularDiff { half_width } => {
                let p = T::PI() / *half_width;
                ZeroSet::Periodic { first: p, period: p }
            }
            Family::PolyaTriangle { bound } => ZeroSet::Beyond(*bound),
            Family::Mixture { components, .. } if components.len() == 1 => components[0].cf_zero_set(),
            Family::Mixture { .. } => ZeroSet::Unknown,
        }
    }

    pub fn cf_decay(&self) -> Decay<T> {
        match &self.family {
            Family::Dirac { .. } => Decay::None,
            Family::Gaussian { .. } => Decay::Exponential,
            Family::Laplace { .. } | Family::TriangularDiff { .. } => Decay::Algebraic(T::of(2.0)),
            Family::Uniform { .. } => Decay::Algebraic(T::one()),
            Family::PolyaTriangle { .. } => Decay::Compact,
            Family::Mixture { components, .. } => {
                components.iter().map(|c| c.cf_decay()).reduce(Decay::weaker).unwrap_or(Decay::None)
            }
        }
    }

    pub fn cf_support_bound(&self) -> Option<T> {
        match &self.family {
            Family::PolyaTriangle { bound } => Some(*bound),
            Family::Mixture { components, .. } => {
                let mut b = T::zero();
                for c in components {
                    b = b.max(c.cf_support_bound()?);
                }
                Some(b)
            }
            _ => None,
        }
    }

    /// Largest |x| at which the law puts structure; the c.f. oscillates at
    /// angular frequencies up to about this value.
    pub fn frequency(&self) -> T {
        match &self.family {
            Family::Dirac { location } => location.abs(),
            Family::Gaussian { mean, .. } => mean.abs(),
            Family::Laplace { location, .. } => location.abs(),
            Family::Uniform { lo, hi } => lo.abs().max(hi.abs()),
            Family::TriangularDiff { half_width } => T::of(2.0) * *half_width,
            Family::PolyaTriangle { .. } => T::zero(),
            Family::Mixture { components, .. } => {
                components.iter().map(|c| c.frequency()).fold(T::zero(), T::max)
            }
        }
    }

    /// Decomposition of the c.f. into terms `γ·φ` on `t ≥ t0`.
    pub fn factorization(&self) -> Vec<FactorTerm<T>> {
        let one = |_t: T| Complex::new(T::one(), T::zero());
        let zero = |_t: T| Complex::new(T::zero(), T::zero());
        match &self.family {
            Family::Dirac { location } => vec![FactorTerm {
                atoms: vec![(*location, T::one())],
                envelope: Arc::new(one),
                envelope_deriv: Arc::new(zero),
                envelope_limit: T::one(),
                envelope_decay: Decay::None,
                t0: T::zero(),
            }],
            Family::Gaussian { mean, sd } => {
                let s2 = *sd * *sd;
                vec![FactorTerm {
                    atoms: vec![(*mean, T::one())],
                    envelope: Arc::new(move |t: T| Complex::new((-T::of(0.5) * s2 * t * t).exp(), T::zero())),
                    envelope_deriv: Arc::new(move |t: T| {
                        Complex::new(-s2 * t * (-T::of(0.5) * s2 * t * t).exp(), T::zero())
                    }),
                    envelope_limit: T::zero(),
                    envelope_decay: Decay::Exponential,
                    t0: T::zero(),
                }]
            }
            Family::Laplace { location, scale } => {
                let b2 = *scale * *scale;
                vec![FactorTerm {
                    atoms: vec![(*location, T::one())],
                    envelope: Arc::new(move |t: T| Complex::new(T::one() / (T::one() + b2 * t * t), T::zero())),
                    envelope_deriv: Arc::new(move |t: T| {
                        let q = T::one() + b2 * t * t;
                        Complex::new(-T::of(2.0) * b2 * t / (q * q), T::zero())
                    }),
                    envelope_limit: T::zero(),
                    envelope_decay: Decay::Algebraic(T::of(2.0)),
                    t0: T::zero(),
                }]
            }
            Family::Uniform { lo, hi } => {
                let w = *hi - *lo;
                vec![FactorTerm {
                    atoms: vec![(*hi, T::one()), (*lo, -T::one())],
                    envelope: Arc::new(move |t: T| Complex::new(T::zero(), -T::one() / (t * w))),
                    envelope_deriv: Arc::new(move |t: T| Complex::new(T::zero(), T::one() / (t * t * w))),
                    envelope_limit: T::zero(),
                    envelope_decay: Decay::Algebraic(T::one()),
                    t0: T::one(),
                }]
            }
            Family::TriangularDiff { half_width } => {
                let a = *half_width;
                let c = T::one() / (T::of(4.0) * a * a);
                vec![FactorTerm {
                    atoms: vec![(T::zero(), T::of(2.0)), (T::of(2.0) * a, -T::one()), (-T::of(2.0) * a, -T::one())],
                    envelope: Arc::new(move |t: T| Complex::new(c / (t * t), T::zero())),
                    envelope_deriv: Arc::new(move |t: T| Complex::new(-T::of(2.0) * c / (t * t * t), T::zero())),
                    envelope_limit: T::zero(),
                    envelope_decay: Decay::Algebraic(T::of(2.0)),
                    t0: T::one(),
                }]
            }
            Family::PolyaTriangle { bound } => {
                let b = *bound;
                vec![FactorTerm {
                    atoms: vec![(T::zero(), T::one())],
                    envelope: Arc::new(move |t: T| Complex::new((T::one() - t.abs() / b).max(T::zero()), T::zero())),
                    envelope_deriv: Arc::new(move |t: T| {
                        Complex::new(if t.abs() < b { -T::one() / b } else { T::zero() }, T::zero())
                    }),
                    envelope_limit: T::zero(),
                    envelope_decay: Decay::Compact,
                    t0: T::zero(),
                }]
            }
            Family::Mixture { weights, components } => {
                let mut out = Vec::new();
                for (&w, c) in weights.iter().zip(components) {
                    for mut term in c.factorization() {
                        for atom in &mut term.atoms {
                            atom.1 *= w;
                        }
                        out.push(term);
                    }
                }
                out
            }
        }
    }

    /// Draws `n` values with a ChaCha generator seeded from `seed`.
    pub fn sample(&self, n: usize, seed: u64) -> Vec<T> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        (0..n).map(|_| self.draw(&mut rng)).collect()
    }

    pub fn draw<R: Rng + ?Sized>(&self, rng: &mut R) -> T {
        let f = |x: f64| T::of(x);
        match &self.family {
            Family::Dirac { location } => *location,
            Family::Gaussian { mean, sd } => *mean + *sd * f(rng.sample::<f64, _>(StandardNormal)),
            Family::Laplace { location, scale } => {
                let u = rng.random::<f64>() - 0.5;
                *location - *scale * f(u.signum() * (-2.0 * u.abs()).ln_1p())
            }
            Family::Uniform { lo, hi } => *lo + (*hi - *lo) * f(rng.random::<f64>()),
            Family::TriangularDiff { half_width } => {
                let u1 = 2.0 * rng.random::<f64>() - 1.0;
                let u2 = 2.0 * rng.random::<f64>() - 1.0;
                *half_width * f(u1 - u2)
            }
            Family::PolyaTriangle { bound } => {
                // sin²(y)/(πy²) by rejection from a standard Cauchy; the
                // density ratio is bounded by 2.
                loop {
                    let y = (std::f64::consts::PI * (rng.random::<f64>() - 0.5)).tan();
                    let s = if y == 0.0 { 1.0 } else { (y.sin() / y).powi(2) };
                    let ratio = s * (1.0 + y * y);
                    if 2.0 * rng.random::<f64>() < ratio {
                        return f(2.0 * y) / *bound;
                    }
                }
            }
            Family::Mixture { weights, components } => {
                let u = f(rng.random::<f64>());
                let mut acc = T::zero();
                for (&w, c) in weights.iter().zip(components) {
                    acc += w;
                    if u < acc {
                        return c.draw(rng);
                    }
                }
                components.last().expect("validated non-empty").draw(rng)
            }
        }
    }

    /// Quantile by bisection. With `upper` set, returns the point whose
    /// upper-tail mass is `q`, which stays accurate for tiny `q`.
    pub fn quantile(&self, q: T, upper: bool) -> T {
        let below = |x: T| if upper { self.sf(x) > q } else { self.cdf(x) < q };
        let (mut lo, mut hi) = (-T::one(), T::one());
        while !below(lo) {
            lo *= T::of(2.0);
        }
        while below(hi) {
            hi *= T::of(2.0);
        }
        for _ in 0..200 {
            let mid = T::of(0.5) * (lo + hi);
            if mid <= lo || mid >= hi {
                break;
            }
            if below(mid) {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        T::of(0.5) * (lo + hi)
    }
}

fn factorial<T: Real>(k: u32) -> T {
    (1..=k).fold(T::one(), |acc, j| acc * T::of_usize(j as usize))
}

pub(crate) fn binomial<T: Real>(n: u32, k: u32) -> T {
    if k > n {
        return T::zero();
    }
    let k = k.min(n - k);
    (0..k).fold(T::one(), |acc, j| acc * T::of_usize((n - j) as usize) / T::of_usize(j as usize + 1))
}

fn shifted_moment<T: Real, F: Fn(u32) -> T>(shift: T, k: u32, central: F) -> T {
    (0..=k).map(|j| binomial::<T>(k, j) * shift.powi((k - j) as i32) * central(j)).sum()
}
