//! The deconvolution function `𝔇(ξ, m)`, its density, their biases and
//! their large-`m` limits, all evaluated on the Fourier side.

use num_complex::Complex;
use rayon::prelude::*;

use crate::charfn::{CharFn, Decay, Symmetrization, SymmetrizationMode};
use crate::distributions::{DistributionSpec, FactorTerm};
use crate::error::{DeconError, Result};
use crate::quad::{self, QuadSpec};
use crate::scalar::Real;
use crate::special::{self, psi_cap_transform, structural_breaks, SmoothingKernel, Spectrum};

/// What the values of a [`SignedGridFn`] represent.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum GridKind {
    Cumulative,
    Density,
    Increment,
    Bias,
}

/// Values of a signed function on a strictly increasing grid.
#[derive(Clone, Debug, PartialEq)]
pub struct SignedGridFn<T> {
    pub grid: Vec<T>,
    pub values: Vec<T>,
    pub kind: GridKind,
}

/// Deconvolution values together with the grid points that sit on a possible
/// discontinuity of `𝔇(·, m)`.
#[derive(Clone, Debug)]
pub struct DeconCurve<T> {
    pub curve: SignedGridFn<T>,
    /// Indices into the grid of points within `1e-6` of an atom.
    pub near_atoms: Vec<usize>,
}

pub(crate) fn check_grid<T: Real>(grid: &[T]) -> Result<()> {
    if grid.is_empty() {
        return Err(DeconError::ParameterDomain("grid is empty".into()));
    }
    if grid.iter().any(|x| !x.is_finite()) {
        return Err(DeconError::ParameterDomain("grid contains non-finite points".into()));
    }
    if grid.windows(2).any(|w| !(w[0] < w[1])) {
        return Err(DeconError::ParameterDomain("grid must be strictly increasing".into()));
    }
    Ok(())
}

/// A deconvolution problem: the symmetrized observation c.f. `Φ_Ÿ`, the
/// symmetrization that produced it, the order `m` and, when known, the
/// target c.f. `Φ_X`.
#[derive(Clone, Debug)]
pub struct DeconProblem<T> {
    phi_x: Option<CharFn<T>>,
    sym: Symmetrization<T>,
    phi_y_dotdot: CharFn<T>,
    m: usize,
    quad: QuadSpec<T>,
}

impl<T: Real> DeconProblem<T> {
    /// Builds a problem from the observation c.f. `Φ_Y`, or from `Φ_X` when
    /// `phi_y` is omitted (then `Φ_Y = Φ_X·Φ_ε`).
    pub fn new(
        phi_x: Option<CharFn<T>>,
        phi_y: Option<CharFn<T>>,
        sym: Symmetrization<T>,
        m: usize,
        quad: QuadSpec<T>,
    ) -> Result<Self> {
        quad.validate()?;
        let phi_y = match (phi_y, &phi_x) {
            (Some(y), _) => y,
            (None, Some(x)) => x.product(sym.phi_eps()),
            (None, None) => {
                return Err(DeconError::ParameterDomain("need the target or the observation c.f.".into()))
            }
        };
        let phi_y_dotdot = sym.compose_y_dotdot(&phi_y);
        Ok(Self { phi_x, sym, phi_y_dotdot, m, quad })
    }

    /// Problem with catalog target and error laws.
    pub fn analytic(
        target: &DistributionSpec<T>,
        error: &DistributionSpec<T>,
        mode: &SymmetrizationMode<T>,
        m: usize,
        quad: QuadSpec<T>,
    ) -> Result<Self> {
        let sym = Symmetrization::from_mode(CharFn::of(error), mode)?;
        Self::new(Some(CharFn::of(target)), None, sym, m, quad)
    }

    pub fn with_m(&self, m: usize) -> Self {
        Self { m, ..self.clone() }
    }

    pub fn with_quad(&self, quad: QuadSpec<T>) -> Result<Self> {
        quad.validate()?;
        Ok(Self { quad, ..self.clone() })
    }

    pub fn m(&self) -> usize {
        self.m
    }
    pub fn quad(&self) -> &QuadSpec<T> {
        &self.quad
    }
    pub fn sym(&self) -> &Symmetrization<T> {
        &self.sym
    }
    pub fn phi_x(&self) -> Option<&CharFn<T>> {
        self.phi_x.as_ref()
    }
    pub fn phi_y_dotdot(&self) -> &CharFn<T> {
        &self.phi_y_dotdot
    }

    /// `P(t, m) = (1 - Φ_ε̄(t))^(m+1)`.
    pub fn m_power(&self, t: T) -> T {
        self.sym.m_power(t, self.m)
    }

    /// `G(t, m) = Σ_{ℓ≤m} (1 - Φ_ε̄(t))^ℓ`.
    pub fn geometric_sum(&self, t: T) -> T {
        self.sym.geometric_sum(t, self.m, self.quad.zero_threshold)
    }

    /// `Φ_𝔇(t, m) = Φ_Ÿ(t)·G(t, m)`, computed from observable quantities only.
    pub fn phi_decon(&self, t: T) -> Complex<T> {
        self.phi_y_dotdot.eval(t) * self.geometric_sum(t)
    }

    /// `Φ_X(t)·(1 - P(t, m))`, the same transform written through the target.
    pub fn phi_decon_via_target(&self, t: T) -> Option<Complex<T>> {
        let x = self.phi_x.as_ref()?.eval(t);
        Some(x * (T::one() - self.m_power(t)))
    }

    fn require_target(&self) -> Result<&CharFn<T>> {
        self.phi_x
            .as_ref()
            .ok_or_else(|| DeconError::Precondition("the target characteristic function is required".into()))
    }

    fn decon_breaks(&self, t_max: T) -> Vec<T> {
        let mut b = structural_breaks(&self.phi_y_dotdot, t_max);
        b.extend(structural_breaks(self.sym.phi_eps_bar(), t_max));
        b
    }

    fn spectral_support(&self) -> Option<T> {
        self.phi_y_dotdot.support_bound()
    }

    fn spectrum<'a>(&self, f: &'a (dyn Fn(T) -> Complex<T> + Sync), support: Option<T>) -> Spectrum<'a, T> {
        let t_max = self.quad.truncation(|t| f(t).norm(), support);
        Spectrum {
            f,
            t_max,
            frequency: self.phi_y_dotdot.frequency(),
            breaks: self.decon_breaks(t_max),
            t_min: T::zero(),
        }
    }

    /// `𝔇(ξ, m)` on `grid`: the first point by the unilateral formula, the
    /// others by bilateral increments from it.
    pub fn eval_decon(&self, grid: &[T]) -> Result<DeconCurve<T>> {
        check_grid(grid)?;
        let f = |t: T| self.phi_decon(t);
        let sp = self.spectrum(&f, self.spectral_support());
        let x0 = grid[0];
        let anchor = sp.gil_pelaez(x0, &self.quad)?;
        let values = grid
            .par_iter()
            .map(|&x| if x == x0 { Ok(anchor) } else { Ok(anchor + sp.increment(x0, x, &self.quad)?) })
            .collect::<Result<Vec<T>>>()?;
        Ok(DeconCurve {
            curve: SignedGridFn { grid: grid.to_vec(), values, kind: GridKind::Cumulative },
            near_atoms: self.points_near_atoms(grid),
        })
    }

    /// `𝔇(ξ, m) - (F_X(ξ) + F_X(ξ-))/2 = (1/π) ∫_0^∞ P(t, m) Im(e^{-iξt}Φ_X(t))/t dt`.
    pub fn eval_decon_bias(&self, xi: T) -> Result<T> {
        let phi_x = self.require_target()?;
        self.check_eps_bar_regular()?;
        let f = |t: T| phi_x.eval(t) * self.m_power(t);
        let mut sp = self.spectrum(&f, phi_x.support_bound());
        sp.frequency = sp.frequency.max(phi_x.frequency());
        sp.band(xi, T::zero(), sp.t_max, &self.quad)
    }

    /// Smoothed-inversion density `𝔡(ξ, m)` on `grid`.
    pub fn eval_density(&self, kernel: &SmoothingKernel<T>, grid: &[T]) -> Result<SignedGridFn<T>> {
        check_grid(grid)?;
        if self.phi_y_dotdot.decay() == Decay::None {
            return Err(DeconError::Precondition(
                "the symmetrized observations need an absolutely continuous law".into(),
            ));
        }
        let f = |t: T| self.phi_decon(t);
        let mut sp = self.spectrum(&f, self.spectral_support());
        sp.t_max = self.spectral_support().unwrap_or(self.quad.t_max.unwrap_or(self.quad.t_max_cap));
        let values = grid
            .par_iter()
            .map(|&x| sp.smoothed_tail(kernel, x, T::zero(), &self.quad))
            .collect::<Result<Vec<T>>>()?;
        Ok(SignedGridFn { grid: grid.to_vec(), values, kind: GridKind::Density })
    }

    /// Density bias `-(1/2π) lim_δ ∫ e^{-iξt} Φ_I(δt) Φ_X(t) P(t, m) dt`.
    pub fn eval_density_bias(&self, kernel: &SmoothingKernel<T>, xi: T) -> Result<T> {
        let phi_x = self.require_target()?;
        let f = |t: T| phi_x.eval(t) * self.m_power(t);
        let mut sp = self.spectrum(&f, phi_x.support_bound());
        sp.t_max = phi_x.support_bound().unwrap_or(self.quad.t_max.unwrap_or(self.quad.t_max_cap));
        sp.frequency = sp.frequency.max(phi_x.frequency());
        Ok(-sp.smoothed_tail(kernel, xi, T::zero(), &self.quad)?)
    }

    /// `∫_0^τ (1 - Φ_ε̄(t))/t dt < ∞`, checked on a logarithmic scale near 0.
    fn check_eps_bar_regular(&self) -> Result<()> {
        let sym = &self.sym;
        let g = |u: T| T::one() - sym.eps_bar(u.exp());
        let lo = T::of(1e-12).ln();
        let hi = T::of(1e-6).ln();
        let br = quad::breakpoints(lo, hi, None, &[], 0);
        let tail = quad::integrate_real(g, &br, self.quad.tolerance(), self.quad.max_panels)?;
        if tail > T::of(1e-3) {
            return Err(DeconError::Precondition(format!(
                "1 - Φ_ε̄(t) is not integrable against dt/t near 0 (mass {tail:.3e} on [1e-12, 1e-6])"
            )));
        }
        Ok(())
    }

    fn target_mid_cdf(&self, xi: T) -> Result<T> {
        let phi_x = self.require_target()?;
        match phi_x.origin() {
            Some(spec) => Ok(spec.cdf_mid(xi)),
            None => special::invert_cdf_gilpelaez(phi_x, xi, &self.quad),
        }
    }

    fn target_mid_pdf(&self, kernel: &SmoothingKernel<T>, xi: T) -> Result<T> {
        let phi_x = self.require_target()?;
        match phi_x.origin().and_then(|s| s.pdf_mid(xi)) {
            Some(v) => Ok(v),
            None => special::invert_pdf(phi_x, kernel, xi, &self.quad),
        }
    }

    /// `lim_{m→∞} 𝔇(ξ, m)` from the zero structure of `Φ_ε̄`.
    ///
    /// With `Φ_ε̄` supported in `[-T, T]` this is `(F + F_-)/2 + F{Θ}(-ξ) +
    /// F{Ψ_{T,∞}}(-ξ)`; with finitely many zero intervals it adds one band
    /// term per interval.
    pub fn eval_decon_limit_oracle(&self, xi: T) -> Result<T> {
        let phi_x = self.require_target()?;
        let eps_bar = self.sym.phi_eps_bar();
        let mid = self.target_mid_cdf(xi)?;
        let zero = eps_bar.zero_set();
        if let Some(bound) = eps_bar.support_bound() {
            self.check_eps_bar_regular()?;
            let mut acc = mid + psi_cap_transform(phi_x, bound, None, xi, &self.quad)?;
            for (a, b) in inner_intervals(zero, bound)? {
                acc += psi_cap_transform(phi_x, a, Some(b), xi, &self.quad)?;
            }
            return Ok(acc);
        }
        let Some(intervals) = zero.intervals() else {
            return Err(DeconError::UnsupportedStructure(format!(
                "no closed-form limit for zero set {zero:?}; finitely many zero intervals are needed"
            )));
        };
        let mut acc = mid;
        for (a, b) in intervals {
            if a == b {
                continue;
            }
            let upper = if b.is_finite() { Some(b) } else { None };
            acc += psi_cap_transform(phi_x, a, upper, xi, &self.quad)?;
        }
        Ok(acc)
    }

    /// `lim_{m→∞} 𝔡(ξ, m)`: `(f(ξ+) + f(ξ-))/2` minus the transforms of `Φ_X`
    /// restricted to the zero bands of `Φ_ε̄`.
    pub fn eval_density_limit_oracle(&self, kernel: &SmoothingKernel<T>, xi: T) -> Result<T> {
        let phi_x = self.require_target()?;
        let eps_bar = self.sym.phi_eps_bar();
        let mid = self.target_mid_pdf(kernel, xi)?;
        let zero = eps_bar.zero_set();
        let mut bands: Vec<(T, T)> = Vec::new();
        if let Some(bound) = eps_bar.support_bound() {
            bands.extend(inner_intervals(zero, bound)?);
            bands.push((bound, T::infinity()));
        } else {
            let Some(iv) = zero.intervals() else {
                return Err(DeconError::UnsupportedStructure(format!(
                    "no closed-form density limit for zero set {zero:?}"
                )));
            };
            bands.extend(iv.into_iter().filter(|(a, b)| a != b));
        }
        let mut acc = mid;
        for (a, b) in bands {
            acc -= if b.is_finite() {
                let f = |t: T| phi_x.eval(t);
                let sp = Spectrum { f: &f, t_max: b, frequency: phi_x.frequency(), breaks: Vec::new(), t_min: T::zero() };
                sp.density_band(xi, a, b, |_| T::one(), &self.quad)?
            } else {
                self.density_tail_transform(phi_x, a, xi)?
            };
        }
        Ok(acc)
    }

    /// `F{ψ_{τ,0}}(-ξ) = lim_δ (1/π) ∫_τ^∞ Re(e^{-iξt} Φ_I(δt) Φ_X(t)) dt`.
    ///
    /// Integrable pieces of `Φ_X` are integrated directly; pieces `γ·φ` with
    /// `φ` of bounded variation but not integrable are integrated by parts
    /// against `dφ`, which removes the smoothing limit.
    fn density_tail_transform(&self, phi_x: &CharFn<T>, tau: T, xi: T) -> Result<T> {
        let terms = phi_x.origin().map(|s| s.factorization());
        let Some(terms) = terms else {
            return match phi_x.decay() {
                Decay::Exponential | Decay::Compact => self.direct_tail(&|t| phi_x.eval(t), phi_x.frequency(), tau, xi),
                Decay::Algebraic(r) if r > T::one() => self.direct_tail(&|t| phi_x.eval(t), phi_x.frequency(), tau, xi),
                _ => Err(DeconError::UnsupportedStructure(
                    "target c.f. is not integrable and has no known factorization".into(),
                )),
            };
        };
        let mut acc = T::zero();
        for term in &terms {
            acc += self.term_tail(term, tau, xi)?;
        }
        Ok(acc)
    }

    fn direct_tail(&self, f: &(dyn Fn(T) -> Complex<T> + Sync), freq: T, tau: T, xi: T) -> Result<T> {
        let t_max = self.quad.truncation(|t| f(t).norm(), None).max(tau);
        let sp = Spectrum { f, t_max, frequency: freq, breaks: Vec::new(), t_min: T::zero() };
        sp.density_band(xi, tau, t_max, |_| T::one(), &self.quad)
    }

    fn term_tail(&self, term: &FactorTerm<T>, tau: T, xi: T) -> Result<T> {
        let gamma = |t: T| -> Complex<T> {
            term.atoms.iter().fold(Complex::new(T::zero(), T::zero()), |acc, &(x, w)| {
                acc + Complex::new((t * x).cos(), (t * x).sin()) * w
            })
        };
        let freq = term.atoms.iter().fold(T::zero(), |m, &(x, _)| m.max(x.abs()));
        let full = |t: T| gamma(t) * (term.envelope)(t);
        let integrable = match term.envelope_decay {
            Decay::Exponential | Decay::Compact => true,
            Decay::Algebraic(r) => r > T::one(),
            Decay::None => false,
        };
        if integrable {
            return self.direct_tail(&full, freq, tau, xi);
        }
        let start = tau.max(term.t0);
        let mut acc = T::zero();
        if tau < term.t0 {
            let sp = Spectrum { f: &full, t_max: term.t0, frequency: freq, breaks: Vec::new(), t_min: T::zero() };
            acc += sp.density_band(xi, tau, term.t0, |_| T::one(), &self.quad)?;
        }
        let deriv = |u: T| (term.envelope_deriv)(u);
        let t_end = self.quad.truncation(|u| deriv(u).norm(), None).max(start);
        let phi_start = (term.envelope)(start);
        for &(x, w) in &term.atoms {
            let a = x - xi;
            if a.abs() < T::of(1e-9) {
                return Err(DeconError::Precondition(format!(
                    "ξ = {xi} coincides with an atom of the factorization at {x}"
                )));
            }
            let br = self.quad.breakpoints(start, t_end, a, &[]);
            let osc = quad::integrate(
                |u| Complex::new((a * u).cos(), (a * u).sin()) * deriv(u),
                &br,
                self.quad.tolerance(),
                self.quad.max_panels,
            )?
            .value;
            let e = Complex::new((a * start).cos(), (a * start).sin());
            let bracket = e * (Complex::new(term.envelope_limit, T::zero()) - phi_start) - osc;
            let theta = bracket / Complex::new(T::zero(), T::PI() * a);
            acc += w * theta.re;
        }
        Ok(acc)
    }

    /// Grid indices that lie within `1e-6` of a point where `𝔇(·, m)` may
    /// jump, i.e. an atom of `F_X ∗ F_ε̄^{∗j}` for some `1 ≤ j ≤ m + 1`.
    fn points_near_atoms(&self, grid: &[T]) -> Vec<usize> {
        let (Some(xa), Some(ea)) = (self.phi_x.as_ref().and_then(|p| p.atoms()), self.sym.phi_eps_bar().atoms())
        else {
            return Vec::new();
        };
        flag_near(grid, &atom_sums(xa, ea, 1, self.m + 1))
    }
}

const ATOM_CAP: usize = 4096;
const ATOM_TOL: f64 = 1e-6;

/// Points `b + s_1 + ... + s_j` with `b ∈ base`, `s_i ∈ steps` and
/// `lo ≤ j ≤ hi`, stopping early once more than 4096 points are collected.
pub(crate) fn atom_sums<T: Real>(base: &[T], steps: &[T], lo: usize, hi: usize) -> Vec<T> {
    if base.is_empty() || (steps.is_empty() && lo > 0) {
        return Vec::new();
    }
    let tol = T::of(ATOM_TOL);
    let mut level: Vec<T> = vec![T::zero()];
    let mut all: Vec<T> = Vec::new();
    for j in 0..=hi {
        if j >= lo {
            all.extend(base.iter().flat_map(|&x| level.iter().map(move |&s| x + s)));
        }
        if all.len() > ATOM_CAP || steps.is_empty() {
            break;
        }
        let mut next: Vec<T> = level.iter().flat_map(|&s| steps.iter().map(move |&e| s + e)).collect();
        next.sort_by(|a, b| a.partial_cmp(b).unwrap_or(std::cmp::Ordering::Equal));
        next.dedup_by(|a, b| (*a - *b).abs() < tol);
        if next.len() > ATOM_CAP {
            break;
        }
        level = next;
    }
    all
}

/// Indices of grid points within `1e-6` of one of `atoms`.
pub(crate) fn flag_near<T: Real>(grid: &[T], atoms: &[T]) -> Vec<usize> {
    let tol = T::of(ATOM_TOL);
    let mut sorted = atoms.to_vec();
    sorted.sort_by(|a, b| a.partial_cmp(b).unwrap_or(std::cmp::Ordering::Equal));
    grid.iter()
        .enumerate()
        .filter(|(_, &g)| {
            let i = sorted.partition_point(|&a| a < g - tol);
            sorted.get(i).is_some_and(|&a| (a - g).abs() <= tol)
        })
        .map(|(i, _)| i)
        .collect()
}

/// Zero intervals of `Φ_ε̄` inside `[0, bound]`.
fn inner_intervals<T: Real>(zero: &crate::charfn::ZeroSet<T>, bound: T) -> Result<Vec<(T, T)>> {
    use crate::charfn::ZeroSet;
    match zero {
        ZeroSet::Beyond(_) | ZeroSet::Empty | ZeroSet::Periodic { .. } => Ok(Vec::new()),
        ZeroSet::Intervals(iv) => Ok(iv
            .iter()
            .filter(|(a, b)| a < b && *a < bound)
            .map(|&(a, b)| (a, b.min(bound)))
            .collect()),
        ZeroSet::Unknown => Err(DeconError::UnsupportedStructure("zero set of Φ_ε̄ is unknown".into())),
    }
}
