//! Plug-in estimation of the deconvolution function from a sample of the
//! contaminated observations.

use std::path::Path;

use num_complex::Complex;
use rayon::prelude::*;

use crate::charfn::Symmetrization;
use crate::decon::{atom_sums, check_grid, flag_near, DeconCurve, GridKind, SignedGridFn};
use crate::error::{DeconError, Result};
use crate::quad::{self, QuadSpec};
use crate::scalar::{Compensated, Real};
use crate::special::interval_transform;

/// Observations `Y_1, ..., Y_n`.
#[derive(Clone, Debug, PartialEq)]
pub struct Sample<T> {
    values: Vec<T>,
    /// Where the values came from (file name, generator and seed, ...).
    pub note: String,
}

impl<T: Real> Sample<T> {
    pub fn new(values: Vec<T>, note: impl Into<String>) -> Result<Self> {
        if values.is_empty() {
            return Err(DeconError::InvalidSample("sample is empty".into()));
        }
        if let Some(i) = values.iter().position(|v| !v.is_finite()) {
            return Err(DeconError::InvalidSample(format!("value {} is not finite", i + 1)));
        }
        Ok(Self { values, note: note.into() })
    }

    /// One number per line; blank lines and `#` comments are skipped.
    pub fn parse(text: &str, note: impl Into<String>) -> Result<Self> {
        let mut values = Vec::new();
        for (i, line) in text.lines().enumerate() {
            let body = line.split('#').next().unwrap_or("").trim();
            if body.is_empty() {
                continue;
            }
            let v: f64 = body
                .parse()
                .map_err(|_| DeconError::InvalidSample(format!("line {}: cannot parse {body:?}", i + 1)))?;
            if !v.is_finite() {
                return Err(DeconError::InvalidSample(format!("line {}: value is not finite", i + 1)));
            }
            values.push(T::of(v));
        }
        Self::new(values, note)
    }

    pub fn from_file(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path)
            .map_err(|e| DeconError::InvalidSample(format!("{}: {e}", path.display())))?;
        Self::parse(&text, path.display().to_string())
    }

    pub fn values(&self) -> &[T] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    fn max_abs(&self) -> T {
        self.values.iter().fold(T::zero(), |m, v| m.max(v.abs()))
    }
}

/// Empirical characteristic function `(1/n) Σ e^{itY_k}`.
pub fn ecf<T: Real>(sample: &Sample<T>, t: T) -> Complex<T> {
    let (mut re, mut im) = (Compensated::new(), Compensated::new());
    for &y in &sample.values {
        let (s, c) = (t * y).sin_cos();
        re.add(c);
        im.add(s);
    }
    let n = T::of_usize(sample.len());
    Complex::new(re.value() / n, im.value() / n)
}

/// `K(t, m) = Φ_η(-t)·G(t, m)`, so that `Φ_𝔇(t, m) = Φ_Y(t)·K(t, m)`.
pub fn kernel_k<T: Real>(sym: &Symmetrization<T>, t: T, m: usize, zero_threshold: T) -> Complex<T> {
    sym.phi_eta().eval(-t) * sym.geometric_sum(t, m, zero_threshold)
}

/// An increment estimate with its optional jackknife standard error.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct IncrementEstimate<T> {
    pub value: T,
    pub se: Option<T>,
}

/// The empirical deconvolution estimator for a fixed sample, error model
/// and order `m`.
#[derive(Clone, Debug)]
pub struct EmpiricalDecon<T> {
    sample: Sample<T>,
    sym: Symmetrization<T>,
    m: usize,
    quad: QuadSpec<T>,
}

impl<T: Real> EmpiricalDecon<T> {
    pub fn new(sample: Sample<T>, sym: Symmetrization<T>, m: usize, quad: QuadSpec<T>) -> Result<Self> {
        quad.validate()?;
        Ok(Self { sample, sym, m, quad })
    }

    pub fn sample(&self) -> &Sample<T> {
        &self.sample
    }
    pub fn m(&self) -> usize {
        self.m
    }

    pub fn kernel(&self, t: T) -> Complex<T> {
        kernel_k(&self.sym, t, self.m, self.quad.zero_threshold)
    }

    /// `Φ_𝔇(t, m, n) = Φ_Y(t, n)·K(t, m)`.
    pub fn phi_decon_empirical(&self, t: T) -> Complex<T> {
        ecf(&self.sample, t) * self.kernel(t)
    }

    /// The e.c.f. never decays, so truncation follows `|K|` alone.
    fn t_max(&self) -> T {
        self.quad.truncation(|t| self.kernel(t).norm(), self.sym.phi_eta().support_bound())
    }

    fn breaks(&self, t_max: T, freq: T) -> Vec<T> {
        let mut extra = self.sym.phi_eps_bar().zero_set().points_in(T::zero(), t_max, 100_000);
        extra.extend(self.sym.phi_eta().zero_set().points_in(T::zero(), t_max, 100_000));
        self.quad.breakpoints(T::zero(), t_max, freq, &extra)
    }

    /// Increment `(1/2π) ∫_{-T}^{T} φ_{a,b}(-t) Φ_𝔇(t, m, n) dt` of the
    /// estimator over `(a, b]`; with `with_se` each observation's
    /// contribution is integrated separately for a jackknife error.
    pub fn empirical_increment(&self, a: T, b: T, with_se: bool) -> Result<IncrementEstimate<T>> {
        if !(a < b) {
            return Err(DeconError::ParameterDomain(format!("increment needs a < b, got {a}, {b}")));
        }
        let t_max = self.t_max();
        let freq = a.abs().max(b.abs()) + self.sample.max_abs() + self.sym.phi_eta().frequency();
        let br = self.breaks(t_max, freq);
        let tol = self.quad.tolerance();
        if !with_se {
            let v = quad::integrate_real(
                |t| (interval_transform(a, b, t).conj() * self.phi_decon_empirical(t)).re,
                &br,
                tol,
                self.quad.max_panels,
            )?;
            return Ok(IncrementEstimate { value: v / T::PI(), se: None });
        }
        let per: Vec<T> = self
            .sample
            .values
            .par_iter()
            .map(|&y| {
                let v = quad::integrate_real(
                    |t| {
                        let e = Complex::new((t * y).cos(), (t * y).sin());
                        (interval_transform(a, b, t).conj() * e * self.kernel(t)).re
                    },
                    &br,
                    tol,
                    self.quad.max_panels,
                )?;
                Ok(v / T::PI())
            })
            .collect::<Result<Vec<T>>>()?;
        let (value, se) = jackknife_mean(&per);
        Ok(IncrementEstimate { value, se: Some(se) })
    }

    /// Unilateral value `1/2 - (1/π) ∫_0^T Im(e^{-iξt} Φ_𝔇(t, m, n))/t dt`.
    pub fn empirical_anchor(&self, xi: T) -> Result<T> {
        let t_max = self.t_max();
        let freq = xi.abs() + self.sample.max_abs() + self.sym.phi_eta().frequency();
        let br = self.breaks(t_max, freq);
        let v = quad::integrate_real(
            |t| {
                let z = self.phi_decon_empirical(t) * Complex::new((xi * t).cos(), -(xi * t).sin());
                z.im / t
            },
            &br,
            self.quad.tolerance(),
            self.quad.max_panels,
        )?;
        Ok(T::of(0.5) - v / T::PI())
    }

    /// Estimated deconvolution function on `grid` (anchored at the first
    /// point) together with the increments over consecutive grid cells.
    pub fn estimate_curve(&self, grid: &[T], with_se: bool) -> Result<(DeconCurve<T>, Vec<IncrementEstimate<T>>)> {
        check_grid(grid)?;
        let anchor = self.empirical_anchor(grid[0])?;
        let incs = grid
            .par_windows(2)
            .map(|w| self.empirical_increment(w[0], w[1], with_se))
            .collect::<Result<Vec<_>>>()?;
        let mut values = Vec::with_capacity(grid.len());
        let mut acc = Compensated::new();
        acc.add(anchor);
        values.push(anchor);
        for inc in &incs {
            acc.add(inc.value);
            values.push(acc.value());
        }
        let curve = SignedGridFn { grid: grid.to_vec(), values, kind: GridKind::Cumulative };
        Ok((DeconCurve { curve, near_atoms: self.points_near_atoms(grid) }, incs))
    }

    /// Grid indices near a jump of the estimator. Jumps exist only when
    /// `η` has atoms; they sit at `Y_k - η_j` plus sums of up to `m` atoms
    /// of `ε̄`.
    pub fn points_near_atoms(&self, grid: &[T]) -> Vec<usize> {
        let Some(eta) = self.sym.phi_eta().atoms() else {
            return Vec::new();
        };
        let base: Vec<T> = self.sample.values.iter().flat_map(|&y| eta.iter().map(move |&e| y - e)).collect();
        let steps = self.sym.phi_eps_bar().atoms().unwrap_or(&[]);
        flag_near(grid, &atom_sums(&base, steps, 0, self.m))
    }
}

/// Mean of `xs` and its jackknife standard error. For a mean the
/// leave-one-out estimates reduce this to `sd/√n`.
fn jackknife_mean<T: Real>(xs: &[T]) -> (T, T) {
    let n = T::of_usize(xs.len());
    let mut s = Compensated::new();
    for &x in xs {
        s.add(x);
    }
    let mean = s.value() / n;
    if xs.len() < 2 {
        return (mean, T::nan());
    }
    let mut ss = Compensated::new();
    for &x in xs {
        ss.add((x - mean) * (x - mean));
    }
    let var = ss.value() / (n - T::one());
    (mean, (var / n).sqrt())
}
