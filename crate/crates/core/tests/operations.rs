//! Worked examples for each public operation, checked against closed forms,
//! the lattice oracle, or Monte Carlo bounds.

use std::f64::consts::PI;

use num_complex::Complex;
use symdecon::empirical::{ecf, kernel_k};
use symdecon::oracle::{decon_binomial, decon_lattice, decon_sum, observation_lattices, symmetrized_error_lattice};
use symdecon::special::{invert_cdf_bilateral, invert_cdf_gilpelaez, invert_pdf, phi_ab, psi_cap_transform, si};
use symdecon::{
    CharFn, DeconError, DeconProblem, DistributionSpec, EmpiricalDecon, JumpRule, LatticeMeasure, QuadSpec, Sample,
    SmoothingKernel, SumPath, Symmetrization, SymmetrizationMode,
};

type Spec = DistributionSpec<f64>;

fn gauss(mu: f64, s: f64) -> Spec {
    Spec::gaussian(mu, s).unwrap()
}

fn q() -> QuadSpec<f64> {
    QuadSpec::default()
}

fn conj(e: &Spec) -> Symmetrization<f64> {
    Symmetrization::conjugate(CharFn::of(e)).unwrap()
}

fn problem(x: &Spec, e: &Spec, mode: SymmetrizationMode<f64>, m: usize) -> DeconProblem<f64> {
    DeconProblem::analytic(x, e, &mode, m, q()).unwrap()
}

fn gg(m: usize) -> DeconProblem<f64> {
    problem(&gauss(0.0, 1.0), &gauss(0.0, 0.5), SymmetrizationMode::Conjugate, m)
}

fn linspace(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    (0..n).map(|i| lo + (hi - lo) * i as f64 / (n - 1) as f64).collect()
}

fn close(a: f64, b: f64, tol: f64) -> bool {
    (a - b).abs() <= tol
}

// ---- distributions ----

#[test]
fn distribution_examples() {
    assert_eq!(gauss(0.0, 1.0).cdf(0.0), 0.5);
    let d = Spec::dirac(2.0).unwrap();
    assert_eq!((d.cdf(1.9), d.cdf(2.0)), (0.0, 1.0));
    assert_eq!(Spec::uniform(0.0, 1.0).unwrap().cdf(0.25), 0.25);
    assert!(close(gauss(0.0, 1.0).pdf(0.0).unwrap(), 0.398_942_280_4, 1e-10));
    assert!(Spec::dirac(0.0).unwrap().pdf(0.3).is_none());
    assert_eq!(Spec::laplace(0.0, 1.0).unwrap().pdf(0.0), Some(0.5));
    assert!(close(gauss(0.0, 1.0).cf(1.0).re, 0.606_53, 1e-5));
    let tri = Spec::triangular_diff(1.0).unwrap();
    assert!(close(tri.cf(0.7).re, (0.7f64.sin() / 0.7).powi(2), 1e-15));
    assert!(tri.cf(PI).norm() < 1e-15 && tri.cf(2.0 * PI).norm() < 1e-15);
    let polya = Spec::polya_triangle(1.0).unwrap();
    assert!(close(polya.cf(0.25).re, 0.75, 1e-15));
    assert_eq!(polya.cf(1.5).norm(), 0.0);
    assert_eq!(gauss(0.0, 1.0).moment(2), Some(1.0));
    assert_eq!(gauss(0.0, 1.0).moment(4), Some(3.0));
    assert_eq!(Spec::dirac(1.7).unwrap().moment(1), Some(1.7));
    assert!(polya.moment(1).is_none());
}

#[test]
fn parameter_domain_errors() {
    assert!(matches!(Spec::gaussian(0.0, 0.0), Err(DeconError::ParameterDomain(_))));
    assert!(Spec::laplace(0.0, -1.0).is_err());
    assert!(Spec::uniform(1.0, 1.0).is_err());
    assert!(Spec::polya_triangle(0.0).is_err());
    assert!(Spec::mixture(vec![0.5, 0.4], vec![gauss(0.0, 1.0), gauss(1.0, 1.0)]).is_err());
    assert!(Spec::mixture(vec![1.5, -0.5], vec![gauss(0.0, 1.0), gauss(1.0, 1.0)]).is_err());
}

#[test]
fn sampling_examples() {
    assert_eq!(Spec::dirac(3.0).unwrap().sample(4, 77), vec![3.0; 4]);
    let g = gauss(0.0, 1.0);
    let n = 100_000;
    let xs = g.sample(n, 5);
    let mean = xs.iter().sum::<f64>() / n as f64;
    assert!(mean.abs() < 4.0 / (n as f64).sqrt());
    assert_eq!(g.sample(10, 42), g.sample(10, 42));
    assert_ne!(g.sample(10, 42), g.sample(10, 43));
}

#[test]
fn cdf_limits_and_density_mass() {
    let fams = [
        gauss(0.3, 1.2),
        Spec::laplace(-0.5, 0.7).unwrap(),
        Spec::uniform(-1.0, 2.0).unwrap(),
        Spec::triangular_diff(0.8).unwrap(),
        Spec::polya_triangle(2.0).unwrap(),
    ];
    for f in &fams {
        // the Pólya tail decays like 1/x
        assert!(f.cdf(-1e6) < 1e-6 && f.cdf(1e6) > 1.0 - 1e-6);
        let r = 6.0;
        let h = 1e-3;
        let n = (2.0 * r / h) as usize;
        let mass: f64 = (0..n)
            .map(|i| {
                let x = -r + h * (i as f64 + 0.5);
                f.pdf(x).unwrap() * h
            })
            .sum();
        let want = f.cdf(r) - f.cdf(-r);
        // midpoint rule on the kinks of the laplace/uniform densities is O(h²)
        assert!(close(mass, want, 1e-6), "{f:?}: {mass} vs {want}");
    }
}

#[test]
fn moments_against_quadrature() {
    let fams = [gauss(0.3, 1.2), Spec::laplace(-0.5, 0.7).unwrap(), Spec::uniform(-1.0, 2.0).unwrap(), Spec::triangular_diff(0.8).unwrap()];
    for f in &fams {
        for k in 0..=4u32 {
            let want = f.moment(k).unwrap();
            let got = symdecon::special::expectation(f, |x| x.powi(k as i32), f.moment(1).unwrap(), &q()).unwrap();
            assert!(close(got, want, 1e-6), "{f:?} k={k}: {got} vs {want}");
        }
    }
}

// ---- charfn ----

#[test]
fn symmetrization_examples() {
    let s = 0.7;
    let c = conj(&gauss(0.0, s));
    for &t in &[0.0, 0.3, 1.0, 4.0] {
        assert!(close(c.eps_bar(t), (-(s * s) * t * t).exp(), 1e-15));
    }
    let shifted = Symmetrization::shift(CharFn::of(&gauss(1.3, s)), 1.3).unwrap();
    for &t in &[0.2, 1.0, 2.5] {
        assert!(close(shifted.eps_bar(t), (-(s * s) * t * t / 2.0).exp(), 1e-12));
    }
    let degenerate = conj(&Spec::dirac(0.0).unwrap());
    assert!([0.0, 1.0, 1e3].iter().all(|&t| degenerate.eps_bar(t) == 1.0));
    let bad = Symmetrization::shift(CharFn::of(&gauss(1.0, s)), 0.0);
    assert!(matches!(bad, Err(DeconError::SymmetrizationInvalid(_))));
}

#[test]
fn symmetrized_zero_set_matches_error() {
    let tri = Spec::triangular_diff(1.0).unwrap();
    let c = conj(&tri);
    assert_eq!(c.phi_eps_bar().zero_set(), CharFn::of(&tri).zero_set());
    assert!(c.phi_eps_bar().is_real_symmetric() && c.phi_eps_bar().is_unit_interval());
}

#[test]
fn compose_examples() {
    let c = conj(&gauss(0.0, 0.5));
    let x = CharFn::of(&gauss(0.0, 1.0));
    let y = x.product(c.phi_eps());
    let yy = c.compose_y_dotdot(&y);
    for &t in &[0.0_f64, 0.5, 1.0, 3.0] {
        let want: f64 = (-t * t / 2.0 - 0.25 * t * t / 2.0 - 0.25 * t * t / 2.0).exp();
        assert!((yy.eval(t) - Complex::new(want, 0.0)).norm() < 1e-12);
        assert!((yy.eval(t) - x.eval(t) * c.eps_bar(t)).norm() < 1e-12);
    }
    assert_eq!(yy.eval(0.0), Complex::new(1.0, 0.0));
    let unit = conj(&Spec::dirac(0.0).unwrap());
    let y2 = CharFn::of(&gauss(0.4, 1.0));
    assert!((unit.compose_y_dotdot(&y2).eval(0.8) - y2.eval(0.8)).norm() < 1e-15);
}

#[test]
fn ecf_statistical_example() {
    let n = 10_000;
    let s = Sample::new(gauss(0.0, 1.0).sample(n, 8), "g").unwrap();
    let z = ecf(&s, 1.0);
    assert!((z - Complex::new((-0.5f64).exp(), 0.0)).norm() < 5.0 / (n as f64).sqrt());
    assert!(ecf(&Sample::new(vec![], "e").unwrap_or_else(|_| s.clone()), 1.0).norm() <= 1.0);
    assert!(Sample::<f64>::new(vec![], "e").is_err());
}

// ---- special ----

#[test]
fn sine_integral_examples() {
    assert_eq!(si(0.0), 0.0);
    assert!(close(si(PI), 1.851_937_0, 1e-7));
    assert!(close(si(1e6), PI / 2.0, 2e-6));
}

#[test]
fn interval_transform_examples() {
    assert_eq!(phi_ab(0.0, 1.0, 0.0).unwrap(), Complex::new(1.0, 0.0));
    assert!(phi_ab(-1.0, 1.0, PI).unwrap().norm() < 1e-15);
    assert!(phi_ab(0.0, 1.0, 2.0 * PI).unwrap().norm() < 1e-15);
    assert!(phi_ab(1.0, 1.0, 0.5).is_err());
    assert!(phi_ab(2.0, 1.0, 0.5).is_err());
}

#[test]
fn band_transform_examples() {
    let g = CharFn::of(&gauss(0.0, 1.0));
    let full = psi_cap_transform(&g, 0.0, None, 0.0, &q()).unwrap();
    assert!(full.abs() < 1e-12);
    let d = CharFn::of(&Spec::dirac(0.0).unwrap());
    assert!(psi_cap_transform(&d, 1.0, Some(2.0), 0.0, &q()).unwrap().abs() < 1e-15);
    // the same band through both representations
    let bare = CharFn::from_fn(|t: f64| Complex::new((-t * t / 2.0).exp(), 0.0));
    let via_si = psi_cap_transform(&g, 1.0, Some(3.0), 0.5, &q()).unwrap();
    let direct = psi_cap_transform(&bare, 1.0, Some(3.0), 0.5, &q()).unwrap();
    assert!(close(via_si, direct, 1e-6), "{via_si} vs {direct}");
    assert!(via_si.abs() <= si(PI) / PI + 1e-9);
    // S → 0, T → ∞ leaves the half-jump term
    for &xi in &[-0.7, 0.4, 1.5] {
        let v = psi_cap_transform(&g, 1e-9, None, xi, &q()).unwrap();
        let spec = gauss(0.0, 1.0);
        assert!(close(v, (1.0 - 2.0 * spec.cdf(xi)) / 2.0, 1e-5));
    }
}

#[test]
fn bilateral_examples() {
    let g = CharFn::of(&gauss(0.0, 1.0));
    assert!(close(invert_cdf_bilateral(&g, -1.0, 1.0, &q()).unwrap(), 0.682_689_5, 1e-6));
    let d = CharFn::of(&Spec::dirac(0.0).unwrap());
    assert!(close(invert_cdf_bilateral(&d, -1.0, 1.0, &q()).unwrap(), 1.0, 1e-4));
    let u = CharFn::of(&Spec::uniform(0.0, 1.0).unwrap());
    assert!(close(invert_cdf_bilateral(&u, 0.25, 0.75, &q()).unwrap(), 0.5, 1e-6));
}

#[test]
fn gil_pelaez_examples() {
    let g = CharFn::of(&gauss(0.0, 1.0));
    assert!(close(invert_cdf_gilpelaez(&g, 0.0, &q()).unwrap(), 0.5, 1e-8));
    assert!(close(invert_cdf_gilpelaez(&g, 1.0, &q()).unwrap(), 0.841_344_7, 1e-6));
    let d = CharFn::of(&Spec::dirac(0.0).unwrap());
    assert!(close(invert_cdf_gilpelaez(&d, 0.0, &q()).unwrap(), 0.5, 1e-12));
}

#[test]
fn gil_pelaez_and_bilateral_agree() {
    for spec in [gauss(0.2, 1.0), Spec::laplace(0.0, 1.0).unwrap(), Spec::uniform(0.0, 1.0).unwrap()] {
        let phi = CharFn::of(&spec);
        let grid = linspace(-0.49, 1.51, 41);
        let gp: Vec<f64> = grid.iter().map(|&x| invert_cdf_gilpelaez(&phi, x, &q()).unwrap()).collect();
        for (i, &x) in grid.iter().enumerate() {
            assert!(close(gp[i], spec.cdf(x), 1e-6));
        }
        for i in (0..40).step_by(7) {
            let b = invert_cdf_bilateral(&phi, grid[i], grid[i + 1], &q()).unwrap();
            assert!(close(b, gp[i + 1] - gp[i], 2e-6));
        }
    }
}

#[test]
fn density_inversion_examples() {
    let k = SmoothingKernel::gaussian();
    let g = CharFn::of(&gauss(0.0, 1.0));
    assert!(close(invert_pdf(&g, &k, 0.0, &q()).unwrap(), 0.398_942_3, 1e-5));
    let l = CharFn::of(&Spec::laplace(0.0, 1.0).unwrap());
    assert!(close(invert_pdf(&l, &k, 0.0, &q()).unwrap(), 0.5, 1e-4));
    let u = CharFn::of(&Spec::uniform(0.0, 1.0).unwrap());
    assert!(close(invert_pdf(&u, &k, 0.0, &q()).unwrap(), 0.5, 1e-4));
}

#[test]
fn smoothing_kernel_validation() {
    let g = CharFn::of(&gauss(0.0, 1.0));
    assert!(SmoothingKernel::new(g.clone(), 2.0).is_err());
    assert!(SmoothingKernel::new(g, 3.0).is_ok());
    assert!(SmoothingKernel::new(CharFn::of(&Spec::dirac(0.0).unwrap()), 3.0).is_err());
    assert!(SmoothingKernel::<f64>::gaussian().nu() > 2.0);
}

// ---- decon ----

#[test]
fn m_power_and_geometric_sum_examples() {
    let p = problem(&gauss(0.0, 1.0), &gauss(0.0, 1.0), SymmetrizationMode::Conjugate, 0);
    assert_eq!(p.with_m(7).m_power(0.0), 0.0);
    assert!(close(p.m_power(1.0), 1.0 - (-1.0f64).exp(), 1e-15));
    assert_eq!(p.geometric_sum(0.8), 1.0);
    let t_half = 2f64.ln().sqrt();
    assert!(close(p.with_m(2).geometric_sum(t_half), 1.75, 1e-14));
    let tri = problem(&gauss(0.0, 1.0), &Spec::triangular_diff(1.0).unwrap(), SymmetrizationMode::Conjugate, 7);
    assert_eq!(tri.m_power(PI), 1.0);
    assert_eq!(tri.geometric_sum(PI), 8.0);
}

#[test]
fn transform_examples() {
    let p = gg(3);
    assert_eq!(p.phi_decon(0.0), Complex::new(1.0, 0.0));
    assert!((gg(0).phi_decon(1.3) - gg(0).phi_y_dotdot().eval(1.3)).norm() < 1e-15);
    let a = p.phi_decon(1.0);
    let b = p.phi_decon_via_target(1.0).unwrap();
    let closed = (-0.5f64).exp() * (1.0 - (1.0 - (-0.25f64).exp()).powi(4));
    assert!((a - b).norm() < 1e-12 && close(a.re, closed, 1e-12));
}

#[test]
fn decon_examples() {
    for m in [0, 3, 9] {
        assert!(close(gg(m).eval_decon(&[0.0]).unwrap().curve.values[0], 0.5, 1e-10));
    }
    let x = gauss(0.3, 1.0);
    let p = problem(&x, &Spec::dirac(0.0).unwrap(), SymmetrizationMode::Conjugate, 4);
    let grid = linspace(-2.0, 2.0, 9);
    for (v, &g) in p.eval_decon(&grid).unwrap().curve.values.iter().zip(&grid) {
        assert!(close(*v, x.cdf(g), 1e-9));
    }
    for m in [0, 2, 6] {
        let d = problem(&Spec::dirac(0.4).unwrap(), &Spec::laplace(0.0, 0.5).unwrap(), SymmetrizationMode::Conjugate, m);
        let out = d.eval_decon(&[-0.5, 0.4, 1.0]).unwrap();
        assert!(close(out.curve.values[1], 0.5, 1e-6));
    }
}

#[test]
fn decon_flags_points_near_jumps() {
    let e = Spec::mixture(vec![0.5, 0.5], vec![Spec::dirac(0.0).unwrap(), gauss(0.0, 0.5)]).unwrap();
    let p = problem(&Spec::dirac(0.25).unwrap(), &e, SymmetrizationMode::Conjugate, 2);
    let out = p.eval_decon(&[-1.0, 0.25, 0.2500000001, 1.0]).unwrap();
    assert_eq!(out.near_atoms, vec![1, 2]);
}

#[test]
fn decon_endpoints_and_bound() {
    for m in [1, 4, 10] {
        let vals = gg(m).eval_decon(&linspace(-21.0, 21.0, 15)).unwrap().curve.values;
        assert!(vals[0].abs() < 1e-6 && (vals[14] - 1.0).abs() < 1e-6, "m={m}: {} {}", vals[0], vals[14]);
        let bound = 2f64.powi(m as i32 + 1) - 1.0;
        assert!(vals.iter().all(|v| v.abs() <= bound));
    }
}

#[test]
fn decon_matches_lattice_up_to_order_six() {
    let (x, e) = (gauss(0.0, 1.0), gauss(0.0, 0.5));
    let (y, eb) = observation_lattices(&x, &e, &SymmetrizationMode::Conjugate, 16.0, 0.01).unwrap();
    let grid = linspace(-3.0, 3.0, 13);
    let f = gg(6).eval_decon(&grid).unwrap().curve.values;
    let o = decon_binomial(&y, &eb, 6, &grid).unwrap().values;
    for (a, b) in f.iter().zip(&o) {
        assert!(close(*a, *b, 1e-3));
    }
}

#[test]
fn bias_examples() {
    let x = gauss(0.2, 1.0);
    let unit = problem(&x, &Spec::dirac(0.0).unwrap(), SymmetrizationMode::Conjugate, 3);
    assert!(unit.eval_decon_bias(0.7).unwrap().abs() < 1e-14);
    assert!(gg(4).eval_decon_bias(0.0).unwrap().abs() < 1e-12);
    let p = gg(2);
    let d = p.eval_decon(&[1.0]).unwrap().curve.values[0];
    assert!(close(p.eval_decon_bias(1.0).unwrap(), d - gauss(0.0, 1.0).cdf(1.0), 1e-5));
}

#[test]
fn bias_rejects_irregular_error() {
    // 1 - Φ_ε̄(t) ~ 1/|log t| near 0, which no catalog family produces
    let raw = CharFn::from_fn(|t: f64| {
        let a = t.abs();
        let v = if a == 0.0 { 1.0 } else if a >= 1.0 { 0.0 } else { 1.0 - 1.0 / (1.0 + a.ln().abs()) };
        Complex::new(v, 0.0)
    });
    let eta = CharFn::of(&Spec::dirac(0.0).unwrap());
    let sym = Symmetrization::custom(raw, eta).unwrap();
    let p = DeconProblem::new(Some(CharFn::of(&gauss(0.0, 1.0))), None, sym, 2, q()).unwrap();
    assert!(matches!(p.eval_decon_bias(0.3), Err(DeconError::Precondition(_))));
}

#[test]
fn density_examples() {
    let k = SmoothingKernel::gaussian();
    let x = gauss(0.0, 1.0);
    let unit = problem(&x, &Spec::dirac(0.0).unwrap(), SymmetrizationMode::Conjugate, 3);
    let grid = [-1.0, 0.0, 0.8];
    for (v, &g) in unit.eval_density(&k, &grid).unwrap().values.iter().zip(&grid) {
        assert!(close(*v, x.pdf(g).unwrap(), 1e-6));
    }
    let yy = gauss(0.0, 1.5f64.sqrt());
    for (v, &g) in gg(0).eval_density(&k, &grid).unwrap().values.iter().zip(&grid) {
        assert!(close(*v, yy.pdf(g).unwrap(), 1e-6));
    }
    let (y, eb) = observation_lattices(&x, &gauss(0.0, 0.5), &SymmetrizationMode::Conjugate, 16.0, 0.01).unwrap();
    let lat = decon_lattice(&y, &eb, 4, SumPath::Auto).unwrap();
    let oracle = lat.density_grid(&[0.0]).unwrap().values[0];
    let fourier = gg(4).eval_density(&k, &[0.0]).unwrap().values[0];
    assert!(close(fourier, oracle, 1e-3), "{fourier} vs {oracle}");
}

#[test]
fn density_requires_smooth_observations() {
    let p = problem(&Spec::dirac(0.0).unwrap(), &Spec::dirac(0.0).unwrap(), SymmetrizationMode::Conjugate, 1);
    assert!(matches!(p.eval_density(&SmoothingKernel::gaussian(), &[0.0]), Err(DeconError::Precondition(_))));
}

#[test]
fn density_integrates_to_increment() {
    let p = gg(3);
    let grid = linspace(-1.5, 1.0, 101);
    let dens = p.eval_density(&SmoothingKernel::gaussian(), &grid).unwrap().values;
    let h = grid[1] - grid[0];
    let trap: f64 = dens.windows(2).map(|w| 0.5 * h * (w[0] + w[1])).sum();
    let cdf = p.eval_decon(&[grid[0], grid[100]]).unwrap().curve.values;
    assert!(close(trap, cdf[1] - cdf[0], 5e-3));
}

#[test]
fn density_bias_examples() {
    let k = SmoothingKernel::gaussian();
    let x = gauss(0.0, 1.0);
    let unit = problem(&x, &Spec::dirac(0.0).unwrap(), SymmetrizationMode::Conjugate, 3);
    assert!(unit.eval_density_bias(&k, 0.4).unwrap().abs() < 1e-12);
    let b5 = gg(5).eval_density_bias(&k, 0.5).unwrap();
    let b200 = gg(200).eval_density_bias(&k, 0.5).unwrap();
    assert!(b200.abs() < b5.abs());
    let yy = gauss(0.0, 1.5f64.sqrt());
    let b0 = gg(0).eval_density_bias(&k, 0.5).unwrap();
    assert!(close(b0, yy.pdf(0.5).unwrap() - x.pdf(0.5).unwrap(), 1e-6));
}

#[test]
fn limit_oracle_examples() {
    let x = gauss(0.0, 1.0);
    assert_eq!(gg(1).eval_decon_limit_oracle(0.6).unwrap(), x.cdf(0.6));
    let unit = problem(&x, &Spec::dirac(0.0).unwrap(), SymmetrizationMode::Conjugate, 1);
    assert!(close(unit.eval_decon_limit_oracle(-0.3).unwrap(), x.cdf(-0.3), 1e-15));
    let polya = problem(&x, &Spec::polya_triangle(1.0).unwrap(), SymmetrizationMode::Shift(0.0), 1);
    let lim = polya.eval_decon_limit_oracle(0.0).unwrap();
    let tail = psi_cap_transform(&CharFn::of(&x), 1.0, None, 0.0, &q()).unwrap();
    assert!(close(lim, 0.5 + tail, 1e-12));
    let tri = problem(&x, &Spec::triangular_diff(1.0).unwrap(), SymmetrizationMode::Conjugate, 1);
    assert!(matches!(tri.eval_decon_limit_oracle(0.0), Err(DeconError::UnsupportedStructure(_))));
}

#[test]
fn density_limit_oracle_examples() {
    let k = SmoothingKernel::gaussian();
    let x = gauss(0.0, 1.0);
    assert!(close(gg(1).eval_density_limit_oracle(&k, 0.6).unwrap(), x.pdf(0.6).unwrap(), 1e-12));
    let unit = problem(&x, &Spec::dirac(0.0).unwrap(), SymmetrizationMode::Conjugate, 1);
    assert!(close(unit.eval_density_limit_oracle(&k, 0.2).unwrap(), x.pdf(0.2).unwrap(), 1e-12));
    let polya = problem(&x, &Spec::polya_triangle(1.0).unwrap(), SymmetrizationMode::Shift(0.0), 400);
    let lim = polya.eval_density_limit_oracle(&k, 0.0).unwrap();
    let at400 = polya.eval_density(&k, &[0.0]).unwrap().values[0];
    assert!(close(lim, at400, 5e-3), "{lim} vs {at400}");
}

#[test]
fn density_limit_with_uniform_target() {
    // A non-integrable target c.f. goes through the integrated-by-parts tail.
    let k = SmoothingKernel::gaussian();
    let x = Spec::uniform(-1.0, 1.5).unwrap();
    let p = problem(&x, &Spec::polya_triangle(2.0).unwrap(), SymmetrizationMode::Shift(0.0), 400);
    let lim = p.eval_density_limit_oracle(&k, 0.3).unwrap();
    let at400 = p.eval_density(&k, &[0.3]).unwrap().values[0];
    assert!(close(lim, at400, 5e-3), "{lim} vs {at400}");
}

#[test]
fn squared_sinc_gap_shrinks() {
    let x = gauss(0.0, 1.0);
    let e = Spec::triangular_diff(1.0).unwrap();
    let gap = |m| {
        let p = problem(&x, &e, SymmetrizationMode::Shift(0.0), m);
        (p.eval_decon(&[0.5]).unwrap().curve.values[0] - x.cdf(0.5)).abs()
    };
    assert!(gap(64) < gap(8));
}

// ---- oracle ----

#[test]
fn decon_sum_examples() {
    let e = LatticeMeasure::discretize(&gauss(0.0, 0.5), 8.0, 0.01).unwrap();
    let eb = symmetrized_error_lattice(&e, &SymmetrizationMode::Conjugate).unwrap();
    assert_eq!(decon_sum(&eb, 0, SumPath::Neumann).unwrap(), LatticeMeasure::unit(0.01).unwrap());
    let e_bar_var = eb.signed_moment(2);
    assert!(close(e_bar_var, 0.5, 1e-4));
    for m in 1..=4 {
        let s = decon_sum(&eb, m, SumPath::Auto).unwrap();
        assert!(close(s.cdf_at(0.0, JumpRule::Right), (m as f64 + 2.0) / 2.0, 1e-9));
        assert!(close(s.signed_moment(2), -e_bar_var, 1e-9));
        let bound = 2f64.powi(m as i32 + 1) - 1.0;
        let grid = linspace(-4.0, 4.0, 33);
        assert!(s.cdf_on(&grid, JumpRule::Mid).iter().all(|v| v.abs() <= bound));
    }
}

#[test]
fn decon_binomial_examples() {
    let x = gauss(0.0, 1.0);
    let e = gauss(0.0, 0.5);
    let (y, eb) = observation_lattices(&x, &e, &SymmetrizationMode::Conjugate, 16.0, 0.01).unwrap();
    let grid = linspace(-2.0, 2.0, 9);
    let d0 = decon_binomial(&y, &eb, 0, &grid).unwrap().values;
    assert_eq!(d0, y.cdf_on(&grid, JumpRule::Mid));
    let unit = LatticeMeasure::unit(0.01).unwrap();
    let xl = LatticeMeasure::discretize(&x, 16.0, 0.01).unwrap();
    let via_unit = decon_binomial(&xl, &unit, 5, &grid).unwrap().values;
    for (v, &g) in via_unit.iter().zip(&grid) {
        assert!(close(*v, x.cdf(g), 1e-5));
    }
    for m in 0..=6 {
        let v = decon_binomial(&y, &eb, m, &[0.0]).unwrap().values[0];
        assert!(close(v, 0.5, 1e-6));
    }
}

#[test]
fn signed_moment_examples() {
    let x = gauss(0.0, 1.0);
    let e = gauss(0.0, 0.5);
    let (y, eb) = observation_lattices(&x, &e, &SymmetrizationMode::Conjugate, 16.0, 0.01).unwrap();
    for m in 0..=3 {
        let d = decon_lattice(&y, &eb, m, SumPath::Auto).unwrap();
        assert!(close(d.signed_moment(0), 1.0, 1e-9));
        let s = decon_sum(&eb, m, SumPath::Auto).unwrap();
        assert!(s.signed_moment(1).abs() < 1e-9 && s.signed_moment(3).abs() < 1e-9);
    }
    let d0 = decon_lattice(&y, &eb, 0, SumPath::Auto).unwrap();
    assert!(close(d0.signed_moment(2) - 1.0, 0.5, 1e-4));
    // first unmatched moment at m = 1: (-1)^m (2(m+1))! c₂^{m+1} with c₂ = E[ε̄²]/2
    let (y, eb) = observation_lattices(&x, &e, &SymmetrizationMode::Conjugate, 16.0, 0.005).unwrap();
    let d1 = decon_lattice(&y, &eb, 1, SumPath::Auto).unwrap();
    assert!(close(d1.signed_moment(4) - 3.0, -24.0 * 0.25f64.powi(2), 1e-3));
}

#[test]
fn oracle_structural_identities() {
    let e = LatticeMeasure::discretize(&Spec::laplace(0.0, 0.4).unwrap(), 24.0, 0.02).unwrap();
    let eb = symmetrized_error_lattice(&e, &SymmetrizationMode::Conjugate).unwrap();
    let grid = [0.131, 0.507, 1.073, 2.51];
    let neg: Vec<f64> = grid.iter().map(|g| -g).collect();
    for m in 1..=6 {
        let s = decon_sum(&eb, m, SumPath::Auto).unwrap();
        let a = s.cdf_on(&grid, JumpRule::Mid);
        let b = s.cdf_on(&neg, JumpRule::Mid);
        for (u, v) in a.iter().zip(&b) {
            assert!(close(u + v, 1.0, 1e-9), "m={m}: {u} + {v}");
        }
        let lhs = s.convolve(&eb).unwrap();
        let rhs = LatticeMeasure::combine(&[
            (&LatticeMeasure::unit(0.02).unwrap(), 1.0),
            (&symdecon::oracle::delta_power(&eb, m + 1).unwrap(), -1.0),
        ])
        .unwrap();
        let diff = LatticeMeasure::combine(&[(&lhs, 1.0), (&rhs, -1.0)]).unwrap();
        assert!(diff.masses().iter().all(|v| v.abs() < 1e-9));
        assert!(close(lhs.cdf_at(0.0, JumpRule::Mid), 0.5, 1e-9));
    }
}

// ---- empirical ----

#[test]
fn empirical_transform_is_unbiased() {
    let (x, e) = (gauss(0.0, 1.0), gauss(0.0, 0.5));
    let sym = conj(&e);
    let (reps, n) = (2000u64, 100usize);
    let vals: Vec<Complex<f64>> = (0..reps)
        .map(|r| {
            let y: Vec<f64> = x.sample(n, 3 * r).iter().zip(e.sample(n, 3 * r + 1)).map(|(a, b)| a + b).collect();
            let ed = EmpiricalDecon::new(Sample::new(y, "mc").unwrap(), sym.clone(), 2, q()).unwrap();
            ed.phi_decon_empirical(1.0)
        })
        .collect();
    let mean = vals.iter().sum::<Complex<f64>>() / reps as f64;
    let sd_re = (vals.iter().map(|v| (v.re - mean.re).powi(2)).sum::<f64>() / (reps as f64 - 1.0)).sqrt();
    let sd_im = (vals.iter().map(|v| (v.im - mean.im).powi(2)).sum::<f64>() / (reps as f64 - 1.0)).sqrt();
    let target = gg(2).phi_decon(1.0);
    let k = (reps as f64).sqrt();
    assert!((mean.re - target.re).abs() <= 3.0 * sd_re / k);
    assert!((mean.im - target.im).abs() <= 3.0 * sd_im / k);
    let z = EmpiricalDecon::new(Sample::new(vec![0.4, 1.0], "s").unwrap(), sym, 5, q()).unwrap();
    assert_eq!(z.phi_decon_empirical(0.0), Complex::new(1.0, 0.0));
    assert!(kernel_k(z_sym(), 0.0, 3, 1e-9) == Complex::new(1.0, 0.0));
}

fn z_sym() -> &'static Symmetrization<f64> {
    use std::sync::OnceLock;
    static S: OnceLock<Symmetrization<f64>> = OnceLock::new();
    S.get_or_init(|| conj(&gauss(0.0, 0.5)))
}

#[test]
fn empirical_increments_are_unbiased() {
    use rayon::prelude::*;
    let (x, e) = (gauss(0.0, 1.0), gauss(0.0, 0.5));
    let sym = conj(&e);
    let (reps, n, m) = (2000u64, 100usize, 2usize);
    let pairs = [(-1.0, 1.0), (-2.0, 0.3), (0.5, 2.5)];
    let truth = gg(m).eval_decon(&[-2.0, -1.0, 0.3, 0.5, 1.0, 2.5]).unwrap().curve.values;
    let want = [truth[4] - truth[1], truth[2] - truth[0], truth[5] - truth[3]];
    let est: Vec<[f64; 3]> = (0..reps)
        .into_par_iter()
        .map(|r| {
            let y: Vec<f64> = x.sample(n, 7 * r).iter().zip(e.sample(n, 7 * r + 1)).map(|(a, b)| a + b).collect();
            let ed = EmpiricalDecon::new(Sample::new(y, "mc").unwrap(), sym.clone(), m, q()).unwrap();
            let mut out = [0.0; 3];
            for (o, &(a, b)) in out.iter_mut().zip(&pairs) {
                *o = ed.empirical_increment(a, b, false).unwrap().value;
            }
            out
        })
        .collect();
    for j in 0..3 {
        let mean = est.iter().map(|v| v[j]).sum::<f64>() / reps as f64;
        let sd = (est.iter().map(|v| (v[j] - mean).powi(2)).sum::<f64>() / (reps as f64 - 1.0)).sqrt();
        assert!((mean - want[j]).abs() <= 3.0 * sd / (reps as f64).sqrt(), "pair {j}: {mean} vs {}", want[j]);
    }
}

#[test]
fn empirical_truncation_is_stable() {
    let s = Sample::new(gauss(0.0, 1.1).sample(200, 1), "g").unwrap();
    let sym = conj(&gauss(0.0, 0.5));
    let base = EmpiricalDecon::new(s.clone(), sym.clone(), 3, q()).unwrap();
    let t0 = 16.0;
    let fixed = |t| EmpiricalDecon::new(s.clone(), sym.clone(), 3, QuadSpec { t_max: Some(t), ..q() }).unwrap();
    let a = fixed(t0).empirical_increment(-1.0, 0.5, false).unwrap().value;
    let b = fixed(2.0 * t0).empirical_increment(-1.0, 0.5, false).unwrap().value;
    assert!((a - b).abs() < q().abs_tol);
    let c = base.empirical_increment(-1.0, 0.5, false).unwrap().value;
    assert!((a - c).abs() < q().abs_tol);
}

#[test]
fn empirical_curve_of_point_mass() {
    let dirac = conj(&Spec::dirac(0.0).unwrap());
    let s = Sample::new(vec![0.0; 5], "d").unwrap();
    let ed = EmpiricalDecon::new(s, dirac, 0, q()).unwrap();
    let grid = [-1.0, -0.5, 0.0, 0.5, 1.0];
    let (curve, incs) = ed.estimate_curve(&grid, true).unwrap();
    let want = [0.0, 0.0, 0.5, 1.0, 1.0];
    for (v, w) in curve.curve.values.iter().zip(want) {
        assert!(close(*v, w, 1e-4), "{:?}", curve.curve.values);
    }
    assert_eq!(incs.len(), 4);
    assert_eq!(curve.near_atoms, vec![2]);
}

#[test]
fn empirical_bound() {
    let s = Sample::new(vec![-0.3, 0.1, 2.0], "s").unwrap();
    let tri = conj(&Spec::triangular_diff(1.0).unwrap());
    let ed = EmpiricalDecon::new(s, tri, 6, q()).unwrap();
    for i in 0..200 {
        let t = i as f64 * 0.1;
        assert!(ed.phi_decon_empirical(t).norm() <= 7.0 + 1e-12);
    }
}
