//! Sine integral, Fourier inversion formulas and the truncated-band
//! transforms that describe the large-`m` limits.

mod si;

pub use si::{si, si_max};

use num_complex::Complex;

use crate::charfn::{CharFn, Decay};
use crate::distributions::{DistributionSpec, Family};
use crate::error::{DeconError, Result};
use crate::quad::{self, QuadSpec};
use crate::scalar::Real;

/// `φ_{a,b}(t) = (e^{itb} - e^{ita})/(it)`, the transform of `1_{(a,b]}`;
/// equals `b - a` at `t = 0`.
pub fn phi_ab<T: Real>(a: T, b: T, t: T) -> Result<Complex<T>> {
    if !(a < b) {
        return Err(DeconError::ParameterDomain(format!("interval needs a < b, got [{a}, {b}]")));
    }
    Ok(interval_transform(a, b, t))
}

#[inline]
pub(crate) fn interval_transform<T: Real>(a: T, b: T, t: T) -> Complex<T> {
    let half = T::of(0.5);
    let w = half * t * (b - a);
    let sinc = if w.abs() < T::of(1e-4) { T::one() - w * w / T::of(6.0) } else { w.sin() / w };
    let c = half * t * (a + b);
    Complex::new(c.cos(), c.sin()) * ((b - a) * sinc)
}

/// Kernel `Φ_I` used to regularise density inversion.
#[derive(Clone, Debug)]
pub struct SmoothingKernel<T> {
    phi: CharFn<T>,
    /// Exponent bounding the derivative decay, `|Φ_I'(t)| ≤ C|t|^-ν`.
    nu: T,
}

impl<T: Real> SmoothingKernel<T> {
    /// `Φ_I(t) = exp(-t²/2)`.
    pub fn gaussian() -> Self {
        let phi = CharFn::of(&DistributionSpec::gaussian(T::zero(), T::one()).expect("standard normal"));
        Self { phi, nu: T::of(4.0) }
    }

    pub fn new(phi: CharFn<T>, nu: T) -> Result<Self> {
        if !(nu > T::of(2.0)) {
            return Err(DeconError::ParameterDomain(format!("kernel exponent must exceed 2, got {nu}")));
        }
        if !phi.is_real_symmetric() {
            return Err(DeconError::ParameterDomain("kernel must be real and even".into()));
        }
        if (phi.eval(T::zero()).re - T::one()).abs() > T::flag_tol() {
            return Err(DeconError::ParameterDomain("kernel must equal 1 at the origin".into()));
        }
        match phi.decay() {
            Decay::Exponential | Decay::Compact => {}
            Decay::Algebraic(r) if r > T::one() => {}
            _ => return Err(DeconError::ParameterDomain("kernel must be absolutely integrable".into())),
        }
        Ok(Self { phi, nu })
    }

    #[inline]
    pub fn eval(&self, t: T) -> T {
        self.phi.eval(t).re
    }

    pub fn nu(&self) -> T {
        self.nu
    }

    pub fn charfn(&self) -> &CharFn<T> {
        &self.phi
    }
}

/// A Hermitian spectral function, `f(-t) = conj(f(t))`, together with the
/// integration hints needed to invert it from the half-line `t ≥ 0`.
pub struct Spectrum<'a, T> {
    pub f: &'a (dyn Fn(T) -> Complex<T> + Sync),
    /// Truncation point of the half-line integrals.
    pub t_max: T,
    /// Angular frequency bound of the oscillation of `f`.
    pub frequency: T,
    /// Structural points (zeros, support edges) where panels must break.
    pub breaks: Vec<T>,
    /// Lower integration limit for the `1/t`-weighted integrals; zero when
    /// the integrand has a finite limit at the origin.
    pub t_min: T,
}

impl<'a, T: Real> Spectrum<'a, T> {
    /// Spectrum of a c.f. with the truncation chosen from `|Φ|`.
    pub fn of_charfn(phi: &'a CharFn<T>, quad: &QuadSpec<T>) -> Spectrum<'a, T> {
        let t_max = quad.truncation(|t| phi.eval(t).norm(), phi.support_bound());
        let regular = phi.origin().is_none_or(|s| s.moment(1).is_some() || s.cf_support_bound().is_some());
        Spectrum {
            f: phi.as_fn(),
            t_max,
            frequency: phi.frequency(),
            breaks: structural_breaks(phi, t_max),
            t_min: if regular { T::zero() } else { T::of(1e-8) },
        }
    }

    fn panels(&self, lo: T, hi: T, freq: T, quad: &QuadSpec<T>) -> Vec<T> {
        quad.breakpoints(lo, hi, freq.abs().max(self.frequency), &self.breaks)
    }

    /// `(1/π) ∫_lo^hi Im(e^{-iξt} f(t))/t dt`.
    pub fn band(&self, xi: T, lo: T, hi: T, quad: &QuadSpec<T>) -> Result<T> {
        if !(hi > lo) {
            return Ok(T::zero());
        }
        let br = self.panels(lo, hi, xi, quad);
        let f = self.f;
        let v = quad::integrate_real(
            |t| {
                let z = f(t) * Complex::new((xi * t).cos(), -(xi * t).sin());
                z.im / t
            },
            &br,
            quad.tolerance(),
            quad.max_panels,
        )?;
        Ok(v / T::PI())
    }

    /// Gil-Pelaez value `1/2 - (1/π) ∫_0^∞ Im(e^{-iξt} f(t))/t dt`.
    pub fn gil_pelaez(&self, xi: T, quad: &QuadSpec<T>) -> Result<T> {
        Ok(T::of(0.5) - self.band(xi, self.t_min, self.t_max, quad)?)
    }

    /// Bilateral increment `(1/2π) ∫ φ_{a,b}(-t) f(t) dt`.
    pub fn increment(&self, a: T, b: T, quad: &QuadSpec<T>) -> Result<T> {
        if a == b {
            return Ok(T::zero());
        }
        let br = self.panels(T::zero(), self.t_max, a.abs().max(b.abs()), quad);
        let f = self.f;
        let v = quad::integrate_real(|t| (interval_transform(a, b, t).conj() * f(t)).re, &br, quad.tolerance(), quad.max_panels)?;
        Ok(v / T::PI())
    }

    /// `(1/π) ∫_lo^hi Re(e^{-iξt} w(t) f(t)) dt` for a real weight `w`.
    pub fn density_band<W: Fn(T) -> T>(&self, xi: T, lo: T, hi: T, w: W, quad: &QuadSpec<T>) -> Result<T> {
        if !(hi > lo) {
            return Ok(T::zero());
        }
        let br = self.panels(lo, hi, xi, quad);
        let f = self.f;
        let v = quad::integrate_real(
            |t| w(t) * (f(t) * Complex::new((xi * t).cos(), -(xi * t).sin())).re,
            &br,
            quad.tolerance(),
            quad.max_panels,
        )?;
        Ok(v / T::PI())
    }

    /// `lim_{δ↓0} (1/π) ∫_lo^∞ Re(e^{-iξt} Φ_I(δt) f(t)) dt` along the halving
    /// schedule `δ_k = δ_0 2^-k`, stopping once successive values agree to
    /// `quad.delta_tol`.
    pub fn smoothed_tail(&self, kernel: &SmoothingKernel<T>, xi: T, lo: T, quad: &QuadSpec<T>) -> Result<T> {
        let mut prev: Option<T> = None;
        let mut last_change = T::infinity();
        for k in 0..=quad.max_halvings {
            let delta = quad.delta_start * T::of(0.5).powi(k as i32);
            let t_max = quad
                .truncation(|t| kernel.eval(delta * t).abs() * self.f_abs(t), None)
                .min(self.t_max.max(lo));
            let v = self.density_band(xi, lo, t_max, |t| kernel.eval(delta * t), quad)?;
            if let Some(p) = prev {
                last_change = (v - p).abs();
                if last_change < quad.delta_tol {
                    return Ok(v);
                }
            }
            prev = Some(v);
        }
        Err(DeconError::SmoothingLimit { halvings: quad.max_halvings, last_change: last_change.to_f64_lossy() })
    }

    fn f_abs(&self, t: T) -> T {
        (self.f)(t).norm()
    }
}

/// Zeros and support edges of `phi` inside `(0, t_max)`.
pub(crate) fn structural_breaks<T: Real>(phi: &CharFn<T>, t_max: T) -> Vec<T> {
    let mut b = phi.zero_set().points_in(T::zero(), t_max, 100_000);
    if let Some(s) = phi.support_bound() {
        if s < t_max {
            b.push(s);
        }
    }
    b
}

/// `(F(ξ) + F(ξ-))/2` from the c.f. by the Gil-Pelaez formula.
pub fn invert_cdf_gilpelaez<T: Real>(phi: &CharFn<T>, xi: T, quad: &QuadSpec<T>) -> Result<T> {
    quad.validate()?;
    Spectrum::of_charfn(phi, quad).gil_pelaez(xi, quad)
}

/// `F(b) - F(a) + (F{a} - F{b})/2` from the c.f. by bilateral inversion.
pub fn invert_cdf_bilateral<T: Real>(phi: &CharFn<T>, a: T, b: T, quad: &QuadSpec<T>) -> Result<T> {
    quad.validate()?;
    if a > b {
        return Ok(-invert_cdf_bilateral(phi, b, a, quad)?);
    }
    Spectrum::of_charfn(phi, quad).increment(a, b, quad)
}

/// Density `(f(ξ+) + f(ξ-))/2` as the smoothing limit of the inversion
/// integral.
pub fn invert_pdf<T: Real>(phi: &CharFn<T>, kernel: &SmoothingKernel<T>, xi: T, quad: &QuadSpec<T>) -> Result<T> {
    quad.validate()?;
    let mut sp = Spectrum::of_charfn(phi, quad);
    sp.t_max = quad.t_max.unwrap_or(quad.t_max_cap);
    if let Some(s) = phi.support_bound() {
        sp.t_max = sp.t_max.min(s);
    }
    sp.smoothed_tail(kernel, xi, T::zero(), quad)
}

/// `F{Ψ_{S,T}}(-ξ)` where `Ψ_{S,T}(t) = Φ_X(t)/(2πit)·1{S ≤ |t| ≤ T}`;
/// `upper = None` means `T = ∞`.
///
/// With a catalog law behind `phi_x` this integrates sine-integral
/// differences against `F_X`; otherwise, or when `Φ_X` has compact support,
/// it integrates the band directly.
pub fn psi_cap_transform<T: Real>(
    phi_x: &CharFn<T>,
    lower: T,
    upper: Option<T>,
    xi: T,
    quad: &QuadSpec<T>,
) -> Result<T> {
    quad.validate()?;
    if lower < T::zero() || upper.is_some_and(|u| u < lower) {
        return Err(DeconError::ParameterDomain(format!("band limits need 0 ≤ S ≤ T, got {lower}, {upper:?}")));
    }
    if let Some(spec) = phi_x.origin().filter(|_| phi_x.support_bound().is_none()) {
        let half = T::of(0.5);
        return match upper {
            Some(u) => {
                let e = expectation(spec, |x| si((xi - x) * u) - si((xi - x) * lower), xi, quad)?;
                Ok(-e / T::PI())
            }
            None => {
                let e = expectation(spec, |x| si((xi - x) * lower), xi, quad)?;
                Ok(half * (T::one() - spec.cdf(xi) - spec.cdf_left(xi)) + e / T::PI())
            }
        };
    }
    let sp = Spectrum::of_charfn(phi_x, quad);
    let hi = upper.map_or(sp.t_max, |u| u.min(sp.t_max));
    sp.band(xi, lower, hi, quad)
}

/// `E[g(X)]` for a catalog law; `focus` marks where `g` varies fastest.
pub fn expectation<T, G>(spec: &DistributionSpec<T>, g: G, focus: T, quad: &QuadSpec<T>) -> Result<T>
where
    T: Real,
    G: Fn(T) -> T + Copy,
{
    let tol = quad.tolerance();
    match spec.family() {
        Family::Dirac { location } => Ok(g(*location)),
        Family::Mixture { weights, components } => {
            let mut acc = T::zero();
            for (&w, c) in weights.iter().zip(components) {
                if w > T::zero() {
                    acc += w * expectation(c, g, focus, quad)?;
                }
            }
            Ok(acc)
        }
        Family::Uniform { lo, hi } => {
            let br = quad::breakpoints(*lo, *hi, None, &[focus], 0);
            let v = quad::integrate_real(g, &br, tol, quad.max_panels)?;
            Ok(v / (*hi - *lo))
        }
        Family::TriangularDiff { half_width } => {
            let w = T::of(2.0) * *half_width;
            let br = quad::breakpoints(-w, w, None, &[focus, T::zero()], 0);
            quad::integrate_real(|x| g(x) * spec.pdf(x).unwrap_or(T::zero()), &br, tol, quad.max_panels)
        }
        Family::Gaussian { mean, sd } => infinite_expectation(spec, g, focus, *mean, *sd, quad),
        Family::Laplace { location, scale } => infinite_expectation(spec, g, focus, *location, *scale, quad),
        Family::PolyaTriangle { bound } => {
            infinite_expectation(spec, g, focus, T::zero(), T::one() / *bound, quad)
        }
    }
}

/// Integrates over the real line through `x = focus + s·tan(θ)`.
fn infinite_expectation<T, G>(spec: &DistributionSpec<T>, g: G, focus: T, center: T, s: T, quad: &QuadSpec<T>) -> Result<T>
where
    T: Real,
    G: Fn(T) -> T,
{
    let h = T::FRAC_PI_2();
    let theta_c = ((center - focus) / s).atan();
    let mut extra = vec![T::zero(), theta_c];
    for k in [-8.0, -4.0, -2.0, -1.0, 1.0, 2.0, 4.0, 8.0] {
        extra.push(((center - focus) / s + T::of(k)).atan());
    }
    let br = quad::breakpoints(-h, h, None, &extra, 0);
    quad::integrate_real(
        |th| {
            let c = th.cos();
            if c <= T::zero() {
                return T::zero();
            }
            let x = focus + s * th.tan();
            let d = spec.pdf(x).unwrap_or(T::zero());
            if d == T::zero() {
                return T::zero();
            }
            g(x) * d * s / (c * c)
        },
        &br,
        quad.tolerance(),
        quad.max_panels,
    )
}
