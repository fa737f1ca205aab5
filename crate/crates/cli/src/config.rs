//! JSON run configuration.
//!
//! ```json
//! {
//!   "target": {"family": "gaussian", "params": {"mean": 0, "sd": 1}},
//!   "error": {"family": "gaussian", "params": {"mean": 0, "sd": 0.5}},
//!   "symmetrization": "conjugate",
//!   "m": [0, 5, 50],
//!   "grid": {"min": -3, "max": 3, "count": 25}
//! }
//! ```

use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use symdecon::{DistributionSpec64, QuadSpec64, Sample64, SmoothingKernel64, SymmetrizationMode};

use crate::error::{CliError, CliResult};

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    #[serde(default)]
    pub target: Option<DistributionSpec64>,
    pub error: DistributionSpec64,
    #[serde(default = "conjugate")]
    pub symmetrization: SymmetrizationMode<f64>,
    pub m: Orders,
    pub grid: GridSpec,
    /// Any subset of the quadrature settings; the rest take their defaults.
    #[serde(default)]
    pub quad: QuadSpec64,
    #[serde(default)]
    pub kernel: KernelChoice,
    /// Sample file, resolved against the config file's directory when relative.
    #[serde(default)]
    pub sample_path: Option<PathBuf>,
    #[serde(default)]
    pub sample: Option<Vec<f64>>,
    /// Draw `Y = X + ε` from `target` and `error` instead of reading a sample.
    #[serde(default)]
    pub simulate: Option<Simulate>,
    #[serde(default)]
    pub output_path: Option<PathBuf>,
    #[serde(default)]
    pub bias: bool,
    #[serde(default)]
    pub standard_error: bool,
    #[serde(default)]
    pub invert: InvertOptions,
    #[serde(default)]
    pub validate: ValidateOptions,
}

fn conjugate() -> SymmetrizationMode<f64> {
    SymmetrizationMode::Conjugate
}

/// A single order or a list of them.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
#[serde(untagged)]
pub enum Orders {
    One(usize),
    Many(Vec<usize>),
}

impl Orders {
    pub fn to_vec(&self) -> Vec<usize> {
        match self {
            Orders::One(m) => vec![*m],
            Orders::Many(v) => v.clone(),
        }
    }
}

#[derive(Clone, Copy, Debug, Serialize, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct GridSpec {
    pub min: f64,
    pub max: f64,
    pub count: usize,
}

impl GridSpec {
    pub fn points(&self) -> CliResult<Vec<f64>> {
        if self.count < 2 {
            return Err(CliError::Config(format!("grid.count must be at least 2, got {}", self.count)));
        }
        if !(self.min.is_finite() && self.max.is_finite() && self.min < self.max) {
            return Err(CliError::Config(format!("grid needs finite min < max, got {} and {}", self.min, self.max)));
        }
        let span = self.max - self.min;
        let last = (self.count - 1) as f64;
        let mut pts: Vec<f64> = (0..self.count).map(|i| self.min + span * i as f64 / last).collect();
        pts[self.count - 1] = self.max;
        Ok(pts)
    }
}

#[derive(Clone, Copy, Debug, Default, Serialize, Deserialize, PartialEq, Eq)]
#[serde(rename_all = "snake_case")]
pub enum KernelChoice {
    /// `Φ_I(t) = exp(-t²/2)`.
    #[default]
    Gaussian,
    /// `Φ_I(t) = 1/(1 + t²)`.
    Laplace,
}

impl KernelChoice {
    pub fn build(self) -> CliResult<SmoothingKernel64> {
        match self {
            KernelChoice::Gaussian => Ok(SmoothingKernel64::gaussian()),
            KernelChoice::Laplace => {
                let lap = DistributionSpec64::laplace(0.0, 1.0)?;
                Ok(SmoothingKernel64::new(symdecon::CharFn::of(&lap), 3.0)?)
            }
        }
    }
}

#[derive(Clone, Copy, Debug, Serialize, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct Simulate {
    pub n: usize,
    #[serde(default)]
    pub seed: u64,
}

#[derive(Clone, Copy, Debug, Default, Serialize, Deserialize, PartialEq, Eq)]
#[serde(rename_all = "snake_case")]
pub enum InvertWhich {
    #[default]
    Target,
    Error,
    /// `Y = X + ε`.
    Observation,
}

#[derive(Clone, Copy, Debug, Serialize, Deserialize, PartialEq)]
#[serde(default, deny_unknown_fields)]
pub struct InvertOptions {
    pub distribution: InvertWhich,
    /// Also invert the density (only for laws with one).
    pub density: bool,
}

impl Default for InvertOptions {
    fn default() -> Self {
        Self { distribution: InvertWhich::Target, density: true }
    }
}

#[derive(Clone, Copy, Debug, Serialize, Deserialize, PartialEq)]
#[serde(default, deny_unknown_fields)]
pub struct ValidateOptions {
    pub lattice_step: f64,
    pub lattice_span: f64,
    /// Fourier path against the lattice oracle.
    pub oracle_tolerance: f64,
    /// Binomial against Neumann form of the lattice sum, per cell.
    pub sum_tolerance: f64,
    /// Signed moments of the lattice curve against the target moments.
    pub moment_tolerance: f64,
    /// Library geometric sum against its defining finite series.
    pub geometric_tolerance: f64,
    /// Points in `[0, t_max]` where transform identities are sampled.
    pub frequency_points: usize,
}

impl Default for ValidateOptions {
    fn default() -> Self {
        Self {
            lattice_step: 0.01,
            lattice_span: 16.0,
            oracle_tolerance: 1e-3,
            sum_tolerance: 1e-9,
            moment_tolerance: 1e-3,
            geometric_tolerance: 1e-6,
            frequency_points: 2001,
        }
    }
}

/// Every numeric default in one place, for `--show-defaults`.
#[derive(Serialize)]
pub struct Defaults {
    pub symmetrization: SymmetrizationMode<f64>,
    pub quad: QuadSpec64,
    pub kernel: KernelChoice,
    pub invert: InvertOptions,
    pub validate: ValidateOptions,
    pub simulate_seed: u64,
}

impl Default for Defaults {
    fn default() -> Self {
        Self {
            symmetrization: conjugate(),
            quad: QuadSpec64::default(),
            kernel: KernelChoice::default(),
            invert: InvertOptions::default(),
            validate: ValidateOptions::default(),
            simulate_seed: 0,
        }
    }
}

/// Overrides taken from the command line.
#[derive(Clone, Debug, Default)]
pub struct Overrides {
    pub output: Option<PathBuf>,
    pub m: Option<Vec<usize>>,
    pub seed: Option<u64>,
}

impl RunConfig {
    pub fn load(path: &Path, overrides: &Overrides) -> CliResult<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Config(format!("cannot read {}: {e}", path.display())))?;
        let mut cfg: RunConfig = serde_json::from_str(&text)
            .map_err(|e| CliError::Config(format!("{}: {e}", path.display())))?;
        if let Some(p) = &cfg.sample_path {
            if p.is_relative() {
                let base = path.parent().unwrap_or(Path::new("."));
                cfg.sample_path = Some(base.join(p));
            }
        }
        cfg.apply(overrides);
        cfg.check()?;
        Ok(cfg)
    }

    pub fn apply(&mut self, o: &Overrides) {
        if let Some(p) = &o.output {
            self.output_path = Some(p.clone());
        }
        if let Some(m) = &o.m {
            self.m = Orders::Many(m.clone());
        }
        if let (Some(seed), Some(sim)) = (o.seed, self.simulate.as_mut()) {
            sim.seed = seed;
        }
    }

    pub fn check(&self) -> CliResult<()> {
        self.grid.points()?;
        if self.m.to_vec().is_empty() {
            return Err(CliError::Config("m must list at least one order".into()));
        }
        self.quad.validate()?;
        Ok(())
    }

    pub fn orders(&self) -> Vec<usize> {
        self.m.to_vec()
    }

    pub fn require_target(&self, command: &str) -> CliResult<&DistributionSpec64> {
        self.target
            .as_ref()
            .ok_or_else(|| CliError::Config(format!("`{command}` needs an analytic `target`")))
    }

    /// The observations for `estimate`, from exactly one of `sample_path`,
    /// `sample` or `simulate`.
    pub fn observations(&self) -> CliResult<Sample64> {
        let given = [self.sample_path.is_some(), self.sample.is_some(), self.simulate.is_some()];
        if given.iter().filter(|&&g| g).count() != 1 {
            return Err(CliError::Config("give exactly one of `sample_path`, `sample`, `simulate`".into()));
        }
        if let Some(p) = &self.sample_path {
            let text = std::fs::read_to_string(p)
                .map_err(|e| CliError::Input(format!("cannot read sample {}: {e}", p.display())))?;
            return Sample64::parse(&text, p.display().to_string()).map_err(|e| CliError::Input(e.to_string()));
        }
        if let Some(v) = &self.sample {
            return Sample64::new(v.clone(), "inline").map_err(|e| CliError::Input(e.to_string()));
        }
        let sim = self.simulate.expect("checked above");
        let target = self.require_target("simulate")?;
        let x = target.sample(sim.n, sim.seed);
        let e = self.error.sample(sim.n, sim.seed.wrapping_add(0x9e37_79b9_7f4a_7c15));
        let y = x.iter().zip(&e).map(|(a, b)| a + b).collect();
        Sample64::new(y, format!("simulated n={} seed={}", sim.n, sim.seed)).map_err(|e| CliError::Input(e.to_string()))
    }
}
