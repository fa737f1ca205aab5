use std::io::Write;

use rayon::prelude::*;
use symdecon::oracle::{
    decon_binomial, decon_lattice, decon_sum, observation_lattices, BINOMIAL_AUTO_LIMIT, MAX_ORDER,
};
use symdecon::special::{invert_cdf_bilateral, invert_cdf_gilpelaez, invert_pdf};
use symdecon::{
    CharFn64, Decay, DeconProblem64, DistributionSpec64, EmpiricalDecon64, JumpRule, LatticeMeasure64, SumPath,
    Symmetrization64,
};

use crate::config::{InvertWhich, RunConfig};
use crate::error::{CliError, CliResult};
use crate::table::{format_number, Table};

fn problem(cfg: &RunConfig, target: &DistributionSpec64, m: usize) -> CliResult<DeconProblem64> {
    Ok(DeconProblem64::analytic(target, &cfg.error, &cfg.symmetrization, m, cfg.quad.clone())?)
}

fn warn_near_atoms(grid: &[f64], idx: &[usize], m: usize) {
    if idx.is_empty() {
        return;
    }
    let pts: Vec<String> = idx.iter().map(|&i| format_number(grid[i])).collect();
    eprintln!("warning: m={m}: grid points within 1e-6 of a jump, values are jump midpoints: {}", pts.join(" "));
}

/// Deconvolution function per order, with optional bias columns and the
/// target distribution function for reference.
pub fn eval(cfg: &RunConfig) -> CliResult<Table> {
    let target = cfg.require_target("eval")?;
    let grid = cfg.grid.points()?;
    let mut table = Table::new(&grid);
    for m in cfg.orders() {
        let p = problem(cfg, target, m)?;
        let out = p.eval_decon(&grid)?;
        warn_near_atoms(&grid, &out.near_atoms, m);
        table.push(format!("m={m}"), out.curve.values);
        if cfg.bias {
            let b = grid.par_iter().map(|&x| p.eval_decon_bias(x)).collect::<Result<Vec<_>, _>>()?;
            table.push(format!("bias m={m}"), b);
        }
    }
    table.push("target", grid.iter().map(|&x| target.cdf_mid(x)).collect());
    Ok(table)
}

pub fn density(cfg: &RunConfig) -> CliResult<Table> {
    let target = cfg.require_target("density")?;
    let grid = cfg.grid.points()?;
    let kernel = cfg.kernel.build()?;
    let mut table = Table::new(&grid);
    for m in cfg.orders() {
        let p = problem(cfg, target, m)?;
        table.push(format!("m={m}"), p.eval_density(&kernel, &grid)?.values);
        if cfg.bias {
            let b = grid
                .par_iter()
                .map(|&x| p.eval_density_bias(&kernel, x))
                .collect::<Result<Vec<_>, _>>()?;
            table.push(format!("bias m={m}"), b);
        }
    }
    table.push_sparse("target", grid.iter().map(|&x| target.pdf_mid(x)).collect());
    Ok(table)
}

/// Empirical estimate from a sample. Row `i` of `increment m=<k>` is the
/// estimated mass of `(xi[i-1], xi[i]]`; row 0 holds the mass of
/// `(-∞, xi[0]]`, which has no standard error.
pub fn estimate(cfg: &RunConfig) -> CliResult<Table> {
    let grid = cfg.grid.points()?;
    let sample = cfg.observations()?;
    if cfg.standard_error && sample.len() < 2 {
        return Err(CliError::Config("standard errors need at least two observations".into()));
    }
    let sym = Symmetrization64::from_mode(CharFn64::of(&cfg.error), &cfg.symmetrization)?;
    let mut table = Table::new(&grid);
    for m in cfg.orders() {
        let ed = EmpiricalDecon64::new(sample.clone(), sym.clone(), m, cfg.quad.clone())?;
        let (curve, incs) = ed.estimate_curve(&grid, cfg.standard_error)?;
        warn_near_atoms(&grid, &curve.near_atoms, m);
        let mut inc = vec![curve.curve.values[0]];
        inc.extend(incs.iter().map(|e| e.value));
        table.push(format!("m={m}"), curve.curve.values);
        table.push(format!("increment m={m}"), inc);
        if cfg.standard_error {
            let mut se = vec![None];
            se.extend(incs.iter().map(|e| e.se));
            table.push_sparse(format!("se m={m}"), se);
        }
    }
    Ok(table)
}

/// Direct inversion of a c.f.: unilateral distribution function, bilateral
/// increments over consecutive grid cells and, where a density exists, the
/// smoothed density.
pub fn invert(cfg: &RunConfig) -> CliResult<Table> {
    let grid = cfg.grid.points()?;
    let (phi, exact) = match cfg.invert.distribution {
        InvertWhich::Target => {
            let t = cfg.require_target("invert")?;
            (CharFn64::of(t), Some(t))
        }
        InvertWhich::Error => (CharFn64::of(&cfg.error), Some(&cfg.error)),
        InvertWhich::Observation => {
            let t = cfg.require_target("invert")?;
            (CharFn64::of(t).product(&CharFn64::of(&cfg.error)), None)
        }
    };
    let q = &cfg.quad;
    let cdf = grid.par_iter().map(|&x| invert_cdf_gilpelaez(&phi, x, q)).collect::<Result<Vec<_>, _>>()?;
    let inc = grid
        .par_windows(2)
        .map(|w| invert_cdf_bilateral(&phi, w[0], w[1], q))
        .collect::<Result<Vec<_>, _>>()?;
    let mut table = Table::new(&grid);
    table.push("cdf", cdf);
    table.push_sparse("increment", std::iter::once(None).chain(inc.into_iter().map(Some)).collect());
    if cfg.invert.density && phi.decay() != Decay::None {
        let kernel = cfg.kernel.build()?;
        let pdf = grid.par_iter().map(|&x| invert_pdf(&phi, &kernel, x, q)).collect::<Result<Vec<_>, _>>()?;
        table.push("pdf", pdf);
    }
    if let Some(spec) = exact {
        table.push("exact cdf", grid.iter().map(|&x| spec.cdf_mid(x)).collect());
    }
    Ok(table)
}

/// One line of the validation report.
#[derive(Debug, Clone)]
pub struct Check {
    pub name: String,
    pub measured: Option<f64>,
    pub deviation: f64,
    pub tolerance: f64,
}

impl Check {
    pub fn passed(&self) -> bool {
        self.deviation <= self.tolerance
    }

    pub fn line(&self) -> String {
        let status = if self.passed() { "PASS" } else { "FAIL" };
        let measured = self.measured.map(|v| format!("  measured {}", format_number(v))).unwrap_or_default();
        format!(
            "{status}  {}{measured}  max deviation {}  tolerance {}",
            self.name,
            format_number(self.deviation),
            format_number(self.tolerance)
        )
    }
}

fn max_abs_diff(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max)
}

fn lattice_gap(a: &LatticeMeasure64, b: &LatticeMeasure64) -> CliResult<f64> {
    let d = LatticeMeasure64::combine(&[(a, 1.0), (b, -1.0)])?;
    Ok(d.masses().iter().fold(0.0, |acc: f64, v| acc.max(v.abs())))
}

/// Fourier evaluation against the lattice oracle, plus structural identities
/// of the lattice sum and the transform.
pub fn validate(cfg: &RunConfig) -> CliResult<Vec<Check>> {
    let target = cfg.require_target("validate")?;
    let orders = cfg.orders();
    if let Some(&m) = orders.iter().find(|&&m| m > MAX_ORDER) {
        return Err(CliError::Config(format!("validate runs the lattice oracle, which needs m <= {MAX_ORDER}; got {m}")));
    }
    let grid = cfg.grid.points()?;
    let v = &cfg.validate;
    let (y, eb) = observation_lattices(target, &cfg.error, &cfg.symmetrization, v.lattice_span, v.lattice_step)?;
    let t_hi = cfg.quad.t_max.unwrap_or(50.0);
    let ts: Vec<f64> = (0..v.frequency_points.max(2))
        .map(|i| t_hi * i as f64 / (v.frequency_points.max(2) - 1) as f64)
        .collect();

    let per_order = orders
        .par_iter()
        .map(|&m| -> CliResult<Vec<Check>> {
            let mut out = Vec::new();
            let p = problem(cfg, target, m)?;

            let fourier = p.eval_decon(&grid)?.curve.values;
            let lattice = decon_binomial(&y, &eb, m, &grid)?.values;
            out.push(Check {
                name: format!("oracle equivalence m={m}"),
                measured: None,
                deviation: max_abs_diff(&fourier, &lattice),
                tolerance: v.oracle_tolerance,
            });

            let s = decon_sum(&eb, m, SumPath::Auto)?;
            if m <= BINOMIAL_AUTO_LIMIT {
                let bin = decon_sum(&eb, m, SumPath::Binomial)?;
                let neu = decon_sum(&eb, m, SumPath::Neumann)?;
                out.push(Check {
                    name: format!("binomial = neumann m={m}"),
                    measured: None,
                    deviation: lattice_gap(&bin, &neu)?,
                    tolerance: v.sum_tolerance,
                });
            }

            let at0 = s.cdf_at(0.0, JumpRule::Right);
            out.push(Check {
                name: format!("S^m(0)=(m+2)/2 m={m}"),
                measured: Some(at0),
                deviation: (at0 - (m as f64 + 2.0) / 2.0).abs(),
                tolerance: v.lattice_step,
            });

            let d = decon_lattice(&y, &eb, m, SumPath::Auto)?;
            let ks = 0..(2 * (m as u32 + 1)).min(5);
            let gaps: Vec<f64> = ks.filter_map(|k| target.moment(k).map(|mx| (d.signed_moment(k) - mx).abs())).collect();
            if !gaps.is_empty() {
                out.push(Check {
                    name: format!("moment matching m={m}"),
                    measured: None,
                    deviation: gaps.iter().copied().fold(0.0, f64::max),
                    tolerance: v.moment_tolerance,
                });
            }

            let sym = p.sym();
            let geo = ts
                .iter()
                .map(|&t| {
                    let q = 1.0 - sym.eps_bar(t);
                    let direct: f64 = (0..=m).map(|l| q.powi(l as i32)).sum();
                    (p.geometric_sum(t) - direct).abs()
                })
                .fold(0.0, f64::max);
            out.push(Check {
                name: format!("geometric sum consistency m={m}"),
                measured: None,
                deviation: geo,
                tolerance: v.geometric_tolerance,
            });

            let bound = ts.iter().map(|&t| p.phi_decon(t).norm() - 1.0).fold(0.0, f64::max);
            out.push(Check {
                name: format!("|transform| <= 1 m={m}"),
                measured: None,
                deviation: bound,
                tolerance: 1e-10,
            });

            let ident = ts
                .iter()
                .filter_map(|&t| p.phi_decon_via_target(t).map(|z| (z - p.phi_decon(t)).norm()))
                .fold(0.0, f64::max);
            out.push(Check {
                name: format!("transform identity m={m}"),
                measured: None,
                deviation: ident,
                tolerance: 1e-10,
            });
            Ok(out)
        })
        .collect::<CliResult<Vec<_>>>()?;
    Ok(per_order.into_iter().flatten().collect())
}

pub fn write_report<W: Write>(checks: &[Check], mut out: W) -> CliResult<()> {
    for c in checks {
        writeln!(out, "{}", c.line())?;
    }
    let failed = checks.iter().filter(|c| !c.passed()).count();
    writeln!(out, "{} of {} checks passed", checks.len() - failed, checks.len())?;
    out.flush()?;
    Ok(())
}
