//! Brute-force reference computations on a uniform lattice: discretized
//! laws, direct convolution powers, the deconvolution sum `S^m` in its
//! binomial and Neumann forms, and signed moments.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::charfn::SymmetrizationMode;
use crate::decon::{check_grid, GridKind, SignedGridFn};
use crate::distributions::{binomial, DistributionSpec, Family};
use crate::error::{DeconError, Result};
use crate::scalar::{compensated_sum, Compensated, Real};

/// Largest `m` accepted by [`decon_sum`].
pub const MAX_ORDER: usize = 24;
/// Largest `m` for which [`SumPath::Auto`] picks the binomial form.
pub const BINOMIAL_AUTO_LIMIT: usize = 12;
const TRIM: f64 = 1e-20;
const MAX_CELLS: usize = 20_000_000;

/// A finite signed measure carried by the points `origin + j·step`.
///
/// The masses include the atoms; `atoms` records which cells hold a genuine
/// point mass (and how much of the cell it is) so cumulative values can
/// treat jumps separately from the smooth part.
#[derive(Clone, Debug, PartialEq)]
pub struct LatticeMeasure<T> {
    step: T,
    phase: T,
    offset: i64,
    masses: Vec<T>,
    atoms: Vec<(i64, T)>,
}

/// How a cumulative value treats an atom sitting exactly at the query point.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum JumpRule {
    /// Right-continuous: the atom is included.
    Right,
    /// Half the atom, the value returned by Fourier inversion.
    Mid,
    /// Left limit: the atom is excluded.
    Left,
}

/// Evaluation route for the deconvolution sum.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SumPath {
    /// `Σ_{ℓ≤m} Σ_{k≤ℓ} C(ℓ,k)(-1)^k F^{∗k}`, term by term.
    Binomial,
    /// `Σ_{ℓ≤m} Δ^{∗ℓ}` with `Δ = δ_0 - F`.
    Neumann,
    /// Binomial up to `m = 12`, Neumann beyond.
    #[default]
    Auto,
}

impl<T: Real> LatticeMeasure<T> {
    fn check_step(step: T) -> Result<()> {
        if !(step > T::zero()) || !step.is_finite() {
            return Err(DeconError::ParameterDomain(format!("lattice step must be positive, got {step}")));
        }
        Ok(())
    }

    /// Untrimmed measure whose first cell sits at `origin`; atoms are added
    /// by the caller relative to the returned offset.
    fn raw(step: T, origin: T, masses: Vec<T>) -> Self {
        let k = (origin / step).floor();
        let phase = origin - k * step;
        Self { step, phase, offset: k.to_i64().unwrap_or(0), masses, atoms: Vec::new() }
    }

    /// Unit point mass at zero.
    pub fn unit(step: T) -> Result<Self> {
        Self::check_step(step)?;
        Ok(Self { step, phase: T::zero(), offset: 0, masses: vec![T::one()], atoms: vec![(0, T::one())] })
    }

    /// Cell masses of `spec` on a lattice of spacing `step` covering a window
    /// of width `span` around its centre. Cells are centred on lattice
    /// points; atoms must fall on lattice points.
    pub fn discretize(spec: &DistributionSpec<T>, span: T, step: T) -> Result<Self> {
        Self::check_step(step)?;
        if !(span > T::zero()) || !span.is_finite() {
            return Err(DeconError::ParameterDomain(format!("lattice span must be positive, got {span}")));
        }
        let anchor = lattice_anchor(spec, step);
        let atoms_x = spec.atoms();
        let mut atom_cells = Vec::with_capacity(atoms_x.len());
        for &(x, p) in &atoms_x {
            let u = (x - anchor) / step;
            if (u - u.round()).abs() > T::of(1e-9) * u.abs().max(T::one()) {
                return Err(DeconError::AtomNotRepresentable(x.to_f64_lossy()));
            }
            atom_cells.push((u.round().to_i64().unwrap_or(0), p));
        }
        let centre = spec.moment(1).unwrap_or(T::zero());
        let half = T::of(0.5) * span;
        let mut k_lo = ((centre - half - anchor) / step).floor().to_i64().unwrap_or(0);
        let mut k_hi = ((centre + half - anchor) / step).ceil().to_i64().unwrap_or(0);
        for &(k, _) in &atom_cells {
            k_lo = k_lo.min(k);
            k_hi = k_hi.max(k);
        }
        let count = (k_hi - k_lo + 1) as usize;
        if count > MAX_CELLS {
            return Err(DeconError::Range(format!("lattice would need {count} cells")));
        }
        let hh = T::of(0.5) * step;
        let median = centre;
        let masses: Vec<T> = (k_lo..=k_hi)
            .into_par_iter()
            .map(|k| {
                let x = anchor + T::of(k as f64) * step;
                if x > median {
                    spec.sf(x - hh) - spec.sf(x + hh)
                } else {
                    spec.cdf(x + hh) - spec.cdf(x - hh)
                }
            })
            .collect();
        let origin = anchor + T::of(k_lo as f64) * step;
        let mut lat = Self::raw(step, origin, masses);
        let shift = lat.offset - k_lo;
        lat.atoms = merge_atoms(atom_cells.into_iter().map(|(k, p)| (k + shift, p)).collect());
        lat.trim();
        Ok(lat)
    }

    pub fn step(&self) -> T {
        self.step
    }

    /// Position of the first cell.
    pub fn origin(&self) -> T {
        self.index_position(self.offset)
    }

    fn index_position(&self, k: i64) -> T {
        self.phase + T::of(k as f64) * self.step
    }

    /// Position of the `j`-th stored cell.
    pub fn position(&self, j: usize) -> T {
        self.index_position(self.offset + j as i64)
    }

    pub fn masses(&self) -> &[T] {
        &self.masses
    }

    /// Point masses as `(position, mass)` pairs.
    pub fn atoms(&self) -> Vec<(T, T)> {
        self.atoms.iter().map(|&(k, p)| (self.index_position(k), p)).collect()
    }

    pub fn len(&self) -> usize {
        self.masses.len()
    }

    pub fn is_empty(&self) -> bool {
        self.masses.is_empty()
    }

    pub fn total_mass(&self) -> T {
        compensated_sum(self.masses.iter().copied())
    }

    fn trim(&mut self) {
        let tiny = T::of(TRIM);
        let first_atom = self.atoms.first().map(|a| a.0);
        let last_atom = self.atoms.last().map(|a| a.0);
        let mut lo = 0usize;
        while lo + 1 < self.masses.len()
            && self.masses[lo].abs() < tiny
            && first_atom.is_none_or(|k| k > self.offset + lo as i64)
        {
            lo += 1;
        }
        let mut hi = self.masses.len();
        while hi > lo + 1 && self.masses[hi - 1].abs() < tiny && last_atom.is_none_or(|k| k < self.offset + hi as i64 - 1)
        {
            hi -= 1;
        }
        if lo > 0 || hi < self.masses.len() {
            self.masses = self.masses[lo..hi].to_vec();
            self.offset += lo as i64;
        }
    }

    /// Law of `-X`.
    pub fn reflect(&self) -> Self {
        let n = self.masses.len() as i64;
        let last = self.index_position(self.offset + n - 1);
        let masses: Vec<T> = self.masses.iter().rev().copied().collect();
        let mut out = Self::raw(self.step, -last, masses);
        let atoms = self.atoms.iter().map(|&(k, p)| (out.offset + (n - 1 - (k - self.offset)), p)).collect();
        out.atoms = merge_atoms(atoms);
        out
    }

    /// Law of `X + by`.
    pub fn shift(&self, by: T) -> Self {
        let mut out = Self::raw(self.step, self.origin() + by, self.masses.clone());
        out.atoms = self.atoms.iter().map(|&(k, p)| (k - self.offset + out.offset, p)).collect();
        out
    }

    fn same_step(&self, other: &Self) -> Result<()> {
        if (self.step - other.step).abs() > T::of(1e-12) * self.step {
            return Err(DeconError::StepMismatch(self.step.to_f64_lossy(), other.step.to_f64_lossy()));
        }
        Ok(())
    }

    /// Offset, in cells, of `other`'s index scale relative to `self`'s.
    fn alignment(&self, other: &Self) -> Result<i64> {
        self.same_step(other)?;
        let u = (other.phase - self.phase) / self.step;
        if (u - u.round()).abs() > T::of(1e-7) {
            return Err(DeconError::StepMismatch(self.phase.to_f64_lossy(), other.phase.to_f64_lossy()));
        }
        Ok(u.round().to_i64().unwrap_or(0))
    }

    /// Convolution `self ∗ other`, summed directly cell by cell.
    pub fn convolve(&self, other: &Self) -> Result<Self> {
        self.same_step(other)?;
        let (a, b) = (&self.masses, &other.masses);
        let n = a.len() + b.len() - 1;
        let masses: Vec<T> = (0..n)
            .into_par_iter()
            .map(|k| {
                let lo = k.saturating_sub(b.len() - 1);
                let hi = k.min(a.len() - 1);
                let mut acc = Compensated::new();
                for i in lo..=hi {
                    acc.add(a[i] * b[k - i]);
                }
                acc.value()
            })
            .collect();
        let origin = self.origin() + other.origin();
        let mut out = Self::raw(self.step, origin, masses);
        let mut atoms: Vec<(i64, T)> = Vec::new();
        for &(i, p) in &self.atoms {
            for &(j, q) in &other.atoms {
                atoms.push(((i - self.offset) + (j - other.offset) + out.offset, p * q));
            }
        }
        out.atoms = merge_atoms(atoms);
        out.trim();
        Ok(out)
    }

    /// `Σ_i c_i μ_i` over measures on a common lattice.
    pub fn combine(terms: &[(&Self, T)]) -> Result<Self> {
        let Some(&(head, _)) = terms.first() else {
            return Err(DeconError::ParameterDomain("no measures to combine".into()));
        };
        let mut shifts = Vec::with_capacity(terms.len());
        let (mut lo, mut hi) = (i64::MAX, i64::MIN);
        for &(m, _) in terms {
            let s = head.alignment(m)?;
            lo = lo.min(m.offset + s);
            hi = hi.max(m.offset + s + m.masses.len() as i64 - 1);
            shifts.push(s);
        }
        let len = (hi - lo + 1) as usize;
        let mut acc: Vec<Compensated<T>> = vec![Compensated::new(); len];
        let mut atoms = Vec::new();
        for (&(m, c), &s) in terms.iter().zip(&shifts) {
            let start = (m.offset + s - lo) as usize;
            for (j, &v) in m.masses.iter().enumerate() {
                acc[start + j].add(c * v);
            }
            atoms.extend(m.atoms.iter().map(|&(k, p)| (k + s, c * p)));
        }
        let masses = acc.iter().map(|c| c.value()).collect();
        let mut out = Self { step: head.step, phase: head.phase, offset: lo, masses, atoms: merge_atoms(atoms) };
        out.trim();
        Ok(out)
    }

    /// Cumulative value `μ((-∞, x])` with the smooth part read at cell
    /// midpoints and interpolated linearly between lattice points.
    pub fn cdf_at(&self, x: T, rule: JumpRule) -> T {
        self.cdf_on(&[x], rule)[0]
    }

    fn smooth_masses(&self) -> Vec<T> {
        let mut c = self.masses.clone();
        for &(k, p) in &self.atoms {
            let j = k - self.offset;
            if j >= 0 && (j as usize) < c.len() {
                c[j as usize] -= p;
            }
        }
        c
    }

    /// [`cdf_at`](Self::cdf_at) for many points.
    pub fn cdf_on(&self, xs: &[T], rule: JumpRule) -> Vec<T> {
        let c = self.smooth_masses();
        let n = c.len();
        // at[j] = Σ_{i<j} c_i + c_j/2, the smooth cumulative at lattice point j.
        let mut at = Vec::with_capacity(n);
        let mut run = Compensated::new();
        for &v in &c {
            let mut here = run;
            here.add(T::of(0.5) * v);
            at.push(here.value());
            run.add(v);
        }
        let total = run.value();
        let smooth_at = |j: i64| -> T {
            if j < 0 {
                T::zero()
            } else if j as usize >= n {
                total
            } else {
                at[j as usize]
            }
        };
        let tol = T::of(1e-9);
        xs.iter()
            .map(|&x| {
                let u = (x - self.origin()) / self.step;
                let k = u.floor();
                let k = k.to_i64().unwrap_or(if u < T::zero() { -1 } else { n as i64 });
                let (k, w) = if k < -1 {
                    (-1, T::zero())
                } else if k >= n as i64 {
                    (n as i64, T::zero())
                } else {
                    (k, u - T::of(k as f64))
                };
                let smooth = smooth_at(k) * (T::one() - w) + smooth_at(k + 1) * w;
                let mut acc = Compensated::new();
                acc.add(smooth);
                for &(ka, p) in &self.atoms {
                    let d = (self.index_position(ka) - x) / self.step;
                    if d < -tol {
                        acc.add(p);
                    } else if d.abs() <= tol {
                        match rule {
                            JumpRule::Right => acc.add(p),
                            JumpRule::Mid => acc.add(T::of(0.5) * p),
                            JumpRule::Left => {}
                        }
                    }
                }
                acc.value()
            })
            .collect()
    }

    /// Cumulative values on `grid`.
    pub fn cdf_grid(&self, grid: &[T], rule: JumpRule) -> Result<SignedGridFn<T>> {
        check_grid(grid)?;
        Ok(SignedGridFn { grid: grid.to_vec(), values: self.cdf_on(grid, rule), kind: GridKind::Cumulative })
    }

    /// Density of the smooth part (cell mass over step), interpolated
    /// linearly between lattice points.
    pub fn density_grid(&self, grid: &[T]) -> Result<SignedGridFn<T>> {
        check_grid(grid)?;
        let c = self.smooth_masses();
        let n = c.len() as i64;
        let at = |j: i64| if j < 0 || j >= n { T::zero() } else { c[j as usize] / self.step };
        let values = grid
            .iter()
            .map(|&x| {
                let u = (x - self.origin()) / self.step;
                let k = u.floor();
                let w = u - k;
                let k = k.to_i64().unwrap_or(-2).clamp(-2, n + 1);
                at(k) * (T::one() - w) + at(k + 1) * w
            })
            .collect();
        Ok(SignedGridFn { grid: grid.to_vec(), values, kind: GridKind::Density })
    }

    /// `Σ_j x_j^k μ_j`, summed with compensation.
    pub fn signed_moment(&self, k: u32) -> T {
        compensated_sum(self.masses.iter().enumerate().map(|(j, &p)| {
            let x = self.position(j);
            p * x.powi(k as i32)
        }))
    }
}

fn merge_atoms<T: Real>(mut atoms: Vec<(i64, T)>) -> Vec<(i64, T)> {
    atoms.sort_by_key(|a| a.0);
    let mut out: Vec<(i64, T)> = Vec::with_capacity(atoms.len());
    for (k, p) in atoms {
        match out.last_mut() {
            Some(last) if last.0 == k => last.1 += p,
            _ => out.push((k, p)),
        }
    }
    out.retain(|a| a.1 != T::zero());
    out
}

/// A point the lattice must pass through: an atom when there is one, the
/// left edge of a bounded support (so cells tile it), else the location.
fn lattice_anchor<T: Real>(spec: &DistributionSpec<T>, step: T) -> T {
    if let Some(&(x, _)) = spec.atoms().first() {
        return x;
    }
    let half = T::of(0.5) * step;
    match spec.family() {
        Family::Dirac { location } => *location,
        Family::Gaussian { mean, .. } => *mean,
        Family::Laplace { location, .. } => *location,
        Family::Uniform { lo, .. } => *lo + half,
        Family::TriangularDiff { half_width } => -T::of(2.0) * *half_width + half,
        Family::PolyaTriangle { .. } => T::zero(),
        Family::Mixture { components, .. } => lattice_anchor(&components[0], step),
    }
}

/// Lattice of the symmetrized error `ε̄ = ε - η`.
pub fn symmetrized_error_lattice<T: Real>(eps: &LatticeMeasure<T>, mode: &SymmetrizationMode<T>) -> Result<LatticeMeasure<T>> {
    match mode {
        SymmetrizationMode::Conjugate => eps.convolve(&eps.reflect()),
        SymmetrizationMode::Shift(tau) => Ok(eps.shift(-*tau)),
        SymmetrizationMode::Custom => {
            Err(DeconError::Precondition("custom symmetrization has no lattice form".into()))
        }
    }
}

/// Lattices of `Ÿ = X + ε̄` and `ε̄` for catalog target and error laws.
pub fn observation_lattices<T: Real>(
    target: &DistributionSpec<T>,
    error: &DistributionSpec<T>,
    mode: &SymmetrizationMode<T>,
    span: T,
    step: T,
) -> Result<(LatticeMeasure<T>, LatticeMeasure<T>)> {
    let x = LatticeMeasure::discretize(target, span, step)?;
    let e = LatticeMeasure::discretize(error, span, step)?;
    let eps_bar = symmetrized_error_lattice(&e, mode)?;
    let y = x.convolve(&eps_bar)?;
    Ok((y, eps_bar))
}

fn check_order(m: usize) -> Result<()> {
    if m > MAX_ORDER {
        return Err(DeconError::Range(format!(
            "order m = {m} exceeds {MAX_ORDER}; the alternating sums lose all precision"
        )));
    }
    Ok(())
}

/// Deconvolution sum `S^m = Σ_{ℓ≤m} (δ_0 - F_ε̄)^{∗ℓ}` on the lattice of
/// `eps_bar`, which must contain the origin.
pub fn decon_sum<T: Real>(eps_bar: &LatticeMeasure<T>, m: usize, path: SumPath) -> Result<LatticeMeasure<T>> {
    check_order(m)?;
    let unit = LatticeMeasure::unit(eps_bar.step)?;
    unit.alignment(eps_bar)?;
    let path = match path {
        SumPath::Auto if m <= BINOMIAL_AUTO_LIMIT => SumPath::Binomial,
        SumPath::Auto => SumPath::Neumann,
        p => p,
    };
    match path {
        SumPath::Binomial => {
            let mut powers = vec![unit];
            for k in 1..=m {
                let next = powers[k - 1].convolve(eps_bar)?;
                powers.push(next);
            }
            let mut terms: Vec<(&LatticeMeasure<T>, T)> = Vec::with_capacity((m + 1) * (m + 2) / 2);
            for l in 0..=m {
                for (k, pk) in powers.iter().enumerate().take(l + 1) {
                    let sign = if k % 2 == 0 { T::one() } else { -T::one() };
                    terms.push((pk, sign * binomial::<T>(l as u32, k as u32)));
                }
            }
            LatticeMeasure::combine(&terms)
        }
        _ => {
            let delta = LatticeMeasure::combine(&[(&unit, T::one()), (eps_bar, -T::one())])?;
            let mut powers = vec![unit];
            for l in 1..=m {
                let next = powers[l - 1].convolve(&delta)?;
                powers.push(next);
            }
            let terms: Vec<(&LatticeMeasure<T>, T)> = powers.iter().map(|p| (p, T::one())).collect();
            LatticeMeasure::combine(&terms)
        }
    }
}

/// `Δ^{∗ℓ}` with `Δ = δ_0 - F_ε̄`.
pub fn delta_power<T: Real>(eps_bar: &LatticeMeasure<T>, l: usize) -> Result<LatticeMeasure<T>> {
    let unit = LatticeMeasure::unit(eps_bar.step)?;
    let delta = LatticeMeasure::combine(&[(&unit, T::one()), (eps_bar, -T::one())])?;
    let mut acc = unit;
    for _ in 0..l {
        acc = acc.convolve(&delta)?;
    }
    Ok(acc)
}

/// Lattice of the deconvolution function `F_Ÿ ∗ S^m`.
pub fn decon_lattice<T: Real>(
    y_dotdot: &LatticeMeasure<T>,
    eps_bar: &LatticeMeasure<T>,
    m: usize,
    path: SumPath,
) -> Result<LatticeMeasure<T>> {
    y_dotdot.same_step(eps_bar)?;
    y_dotdot.convolve(&decon_sum(eps_bar, m, path)?)
}

/// Deconvolution function on `grid`, atoms counted at half weight.
pub fn decon_binomial<T: Real>(
    y_dotdot: &LatticeMeasure<T>,
    eps_bar: &LatticeMeasure<T>,
    m: usize,
    grid: &[T],
) -> Result<SignedGridFn<T>> {
    check_grid(grid)?;
    decon_lattice(y_dotdot, eps_bar, m, SumPath::Auto)?.cdf_grid(grid, JumpRule::Mid)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn gauss(mu: f64, s: f64) -> DistributionSpec<f64> {
        DistributionSpec::gaussian(mu, s).unwrap()
    }

    #[test]
    fn discretize_examples() {
        let d = LatticeMeasure::discretize(&DistributionSpec::dirac(0.0).unwrap(), 1.0, 0.1).unwrap();
        assert_eq!(d.masses(), &[1.0]);
        assert_eq!(d.atoms(), vec![(0.0, 1.0)]);
        let g = LatticeMeasure::discretize(&gauss(0.0, 1.0), 16.0, 0.01).unwrap();
        assert!((g.total_mass() - 1.0).abs() < 1e-10);
        let u = LatticeMeasure::discretize(&DistributionSpec::uniform(0.0_f64, 1.0).unwrap(), 2.0, 0.1).unwrap();
        assert_eq!(u.len(), 10);
        assert!(u.masses().iter().all(|&p| (p - 0.1).abs() < 1e-12));
        assert!((u.origin() - 0.05).abs() < 1e-12);
    }

    #[test]
    fn off_lattice_atom_is_rejected() {
        let w = vec![0.5, 0.5];
        let mix = DistributionSpec::mixture(w, vec![DistributionSpec::dirac(0.0).unwrap(), DistributionSpec::dirac(0.123).unwrap()])
            .unwrap();
        assert!(matches!(LatticeMeasure::discretize(&mix, 1.0, 0.1), Err(DeconError::AtomNotRepresentable(_))));
    }

    #[test]
    fn convolution_basics() {
        let h = 0.1;
        let a = LatticeMeasure::discretize(&gauss(0.3, 1.0), 12.0, h).unwrap();
        let unit = LatticeMeasure::unit(h).unwrap();
        let same = a.convolve(&unit).unwrap();
        assert!((same.origin() - a.origin()).abs() < 1e-12);
        assert_eq!(same.masses(), a.masses());

        let x = LatticeMeasure::discretize(&DistributionSpec::dirac(0.5).unwrap(), 1.0, h).unwrap();
        let y = LatticeMeasure::discretize(&DistributionSpec::dirac(-0.2).unwrap(), 1.0, h).unwrap();
        let xy = x.convolve(&y).unwrap();
        assert_eq!(xy.len(), 1);
        assert!((xy.atoms()[0].0 - 0.3).abs() < 1e-12);

        // uniform ⊗ uniform: the triangle, checked by the direct double sum
        let u = LatticeMeasure::discretize(&DistributionSpec::uniform(0.0_f64, 1.0).unwrap(), 2.0, h).unwrap();
        let uu = u.convolve(&u).unwrap();
        assert_eq!(uu.len(), 19);
        for (j, want) in [(0usize, 0.01), (9, 0.1), (18, 0.01)] {
            assert!((uu.masses()[j] - want).abs() < 1e-12);
        }
        assert!((uu.position(9) - 1.0).abs() < 1e-12);
        let bad = LatticeMeasure::unit(0.2).unwrap();
        assert!(matches!(u.convolve(&bad), Err(DeconError::StepMismatch(..))));
    }

    #[test]
    fn reflect_and_shift() {
        let mix = DistributionSpec::mixture(vec![0.3, 0.7], vec![DistributionSpec::dirac(0.4).unwrap(), gauss(0.4, 0.2)]).unwrap();
        let a = LatticeMeasure::discretize(&mix, 4.0, 0.05).unwrap();
        let r = a.reflect();
        assert!((r.signed_moment(1) + a.signed_moment(1)).abs() < 1e-12);
        assert!((r.atoms()[0].0 + 0.4).abs() < 1e-12);
        let s = a.shift(-0.4);
        assert!(s.signed_moment(1).abs() < 1e-9);
        assert!(s.atoms()[0].0.abs() < 1e-12);
    }

    #[test]
    fn unit_sum_at_order_zero() {
        let e = LatticeMeasure::discretize(&gauss(0.0, 0.5), 8.0, 0.05).unwrap();
        let eb = symmetrized_error_lattice(&e, &SymmetrizationMode::Conjugate).unwrap();
        let s0 = decon_sum(&eb, 0, SumPath::Binomial).unwrap();
        assert_eq!(s0.masses(), &[1.0]);
        assert!(matches!(decon_sum(&eb, 25, SumPath::Auto), Err(DeconError::Range(_))));
    }

    #[test]
    fn jump_rules() {
        let d = LatticeMeasure::discretize(&DistributionSpec::dirac(1.0).unwrap(), 1.0, 0.5).unwrap();
        assert_eq!(d.cdf_at(1.0, JumpRule::Right), 1.0);
        assert_eq!(d.cdf_at(1.0, JumpRule::Mid), 0.5);
        assert_eq!(d.cdf_at(1.0, JumpRule::Left), 0.0);
        assert_eq!(d.cdf_at(0.99, JumpRule::Right), 0.0);
        assert_eq!(d.cdf_at(1.01, JumpRule::Left), 1.0);
    }

    #[test]
    fn cdf_and_density_track_the_law() {
        let g = gauss(0.2, 1.0);
        let lat = LatticeMeasure::discretize(&g, 20.0, 0.01).unwrap();
        for &x in &[-1.3, 0.0, 0.2049, 1.7] {
            assert!((lat.cdf_at(x, JumpRule::Mid) - g.cdf(x)).abs() < 1e-5);
        }
        let d = lat.density_grid(&[0.2, 1.0]).unwrap().values;
        assert!((d[0] - g.pdf(0.2).unwrap()).abs() < 1e-5);
        assert!((d[1] - g.pdf(1.0).unwrap()).abs() < 1e-5);
    }
}
