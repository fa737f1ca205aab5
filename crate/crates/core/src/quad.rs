//! Adaptive Gauss-Kronrod quadrature over panelled intervals, plus the
//! integration settings shared by the Fourier-side routines.

use std::cmp::Ordering;
use std::collections::BinaryHeap;

use num_complex::Complex;
use serde::{Deserialize, Serialize};

use crate::error::{DeconError, Result};
use crate::scalar::{Compensated, Real};

/// How the integration range is cut into panels before adaptive refinement.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PanelRule {
    /// Panels at multiples of half the shortest oscillation period.
    OscillationAligned,
    /// Only structural breakpoints; refinement is left to bisection.
    AdaptiveBisection,
}

/// Integration settings for every Fourier-side evaluation.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct QuadSpec<T> {
    /// Fixed truncation point. `None` selects it from the integrand's decay.
    pub t_max: Option<T>,
    /// Upper limit for the automatic truncation point.
    pub t_max_cap: T,
    pub abs_tol: T,
    pub rel_tol: T,
    /// Below this value the symmetrized error c.f. is treated as zero.
    pub zero_threshold: T,
    pub max_panels: usize,
    pub panel_rule: PanelRule,
    /// Stopping tolerance for the smoothing-parameter halving schedule.
    pub delta_tol: T,
    /// Largest smoothing parameter of the halving schedule.
    pub delta_start: T,
    pub max_halvings: usize,
}

impl<T: Real> Default for QuadSpec<T> {
    fn default() -> Self {
        Self {
            t_max: None,
            t_max_cap: T::of(1e5),
            abs_tol: T::of(1e-10),
            rel_tol: T::of(1e-10),
            zero_threshold: T::of(1e-9),
            max_panels: 500_000,
            panel_rule: PanelRule::OscillationAligned,
            delta_tol: T::of(1e-6),
            delta_start: T::of(0.5),
            max_halvings: 20,
        }
    }
}

impl<T: Real> QuadSpec<T> {
    pub fn validate(&self) -> Result<()> {
        let bad = |what: &str| Err(DeconError::ParameterDomain(format!("quadrature setting {what}")));
        if let Some(t) = self.t_max {
            if !(t > T::zero() && t.is_finite()) {
                return bad("t_max must be positive and finite");
            }
        }
        if !(self.t_max_cap > T::zero() && self.t_max_cap.is_finite()) {
            return bad("t_max_cap must be positive and finite");
        }
        if !(self.abs_tol > T::zero() && self.rel_tol > T::zero()) {
            return bad("abs_tol and rel_tol must be positive");
        }
        if !(self.zero_threshold > T::zero() && self.zero_threshold < T::of(0.5)) {
            return bad("zero_threshold must lie in (0, 0.5)");
        }
        if self.max_panels == 0 {
            return bad("max_panels must be at least 1");
        }
        if !(self.delta_tol > T::zero() && self.delta_start > T::zero()) {
            return bad("delta_tol and delta_start must be positive");
        }
        Ok(())
    }

    pub fn tolerance(&self) -> Tolerance<T> {
        Tolerance { abs: self.abs_tol, rel: self.rel_tol }
    }

    /// Truncation point for an integrand whose magnitude is bounded by
    /// `envelope`, honouring a fixed `t_max` and a compact support bound.
    pub fn truncation<F: Fn(T) -> T>(&self, envelope: F, support: Option<T>) -> T {
        if let Some(t) = self.t_max {
            return support.map_or(t, |s| t.min(s));
        }
        let cap = support.map_or(self.t_max_cap, |s| s.min(self.t_max_cap));
        auto_t_max(envelope, self.abs_tol / T::of(10.0), cap)
    }

    /// Breakpoints covering `[lo, hi]` for an integrand oscillating at angular
    /// frequency up to `freq`, including the structural points `extra`.
    pub fn breakpoints(&self, lo: T, hi: T, freq: T, extra: &[T]) -> Vec<T> {
        let width = match self.panel_rule {
            PanelRule::OscillationAligned => Some(T::PI() / freq.abs().max(T::one())),
            PanelRule::AdaptiveBisection => None,
        };
        breakpoints(lo, hi, width, extra, self.max_panels / 4)
    }
}

#[derive(Clone, Copy, Debug)]
pub struct Tolerance<T> {
    pub abs: T,
    pub rel: T,
}

impl<T: Real> Tolerance<T> {
    fn target(&self, value: T) -> T {
        self.abs.max(self.rel * value)
    }
}

/// Outcome of an adaptive integration.
#[derive(Clone, Copy, Debug)]
pub struct Integral<T> {
    pub value: Complex<T>,
    pub error: T,
    pub evaluations: usize,
    pub panels: usize,
}

/// Smallest point of a log-spaced grid on `[1e-3, cap]` beyond which
/// `envelope` stays below `threshold`.
pub fn auto_t_max<T: Real, F: Fn(T) -> T>(envelope: F, threshold: T, cap: T) -> T {
    const PER_DECADE: f64 = 40.0;
    let lo = 1e-3_f64;
    let hi = cap.to_f64_lossy();
    if hi <= lo {
        return cap;
    }
    let n = ((hi / lo).log10() * PER_DECADE).ceil() as usize;
    let grid: Vec<T> = (0..=n)
        .map(|i| T::of((lo * 10f64.powf(i as f64 / PER_DECADE)).min(hi)))
        .collect();
    match grid.iter().rposition(|&t| !(envelope(t) < threshold)) {
        Some(i) if i + 1 < grid.len() => grid[i + 1],
        Some(_) => cap,
        None => grid[0],
    }
}

/// Sorted, de-duplicated breakpoints spanning `[lo, hi]`.
pub fn breakpoints<T: Real>(lo: T, hi: T, width: Option<T>, extra: &[T], max_count: usize) -> Vec<T> {
    let mut pts = vec![lo, hi];
    pts.extend(extra.iter().copied().filter(|&x| x > lo && x < hi));
    if let Some(mut w) = width {
        let span = hi - lo;
        let cap = T::of_usize(max_count.max(1));
        if span / w > cap {
            w = span / cap;
        }
        let count = (span / w).floor().to_usize().unwrap_or(0);
        for k in 1..=count {
            let x = lo + w * T::of_usize(k);
            if x < hi {
                pts.push(x);
            }
        }
    }
    pts.sort_by(|a, b| a.partial_cmp(b).unwrap_or(Ordering::Equal));
    let scale = lo.abs().max(hi.abs()).max(T::one());
    let mut out: Vec<T> = Vec::with_capacity(pts.len());
    for x in pts {
        if out.last().is_none_or(|&p| x - p > T::epsilon() * T::of(64.0) * scale) {
            out.push(x);
        }
    }
    if out.len() == 1 {
        out.push(hi);
    }
    out
}

const XGK: [f64; 11] = [
    0.995_657_163_025_808_080_735_527_280_689_003,
    0.973_906_528_517_171_720_077_964_012_084_452,
    0.930_157_491_355_708_226_001_207_180_059_508,
    0.865_063_366_688_984_510_732_096_688_423_493,
    0.780_817_726_586_416_897_063_717_578_345_042,
    0.679_409_568_299_024_406_234_327_365_114_874,
    0.562_757_134_668_604_683_339_000_099_272_694,
    0.433_395_394_129_247_190_799_265_943_165_784,
    0.294_392_862_701_460_198_131_126_603_103_866,
    0.148_874_338_981_631_210_884_826_001_129_720,
    0.0,
];

const WGK: [f64; 11] = [
    0.011_694_638_867_371_874_278_064_396_062_192,
    0.032_558_162_307_964_727_478_818_972_459_390,
    0.054_755_896_574_351_996_031_381_300_244_580,
    0.075_039_674_810_919_952_767_043_140_916_190,
    0.093_125_454_583_697_605_535_065_465_083_366,
    0.109_387_158_802_297_641_899_210_590_325_805,
    0.123_491_976_262_065_851_077_208_931_966_234,
    0.134_709_217_311_473_325_928_054_001_771_707,
    0.142_775_938_577_060_080_797_094_273_138_717,
    0.147_739_104_901_338_491_374_841_515_972_068,
    0.149_445_554_002_916_905_664_936_468_389_821,
];

const WG: [f64; 5] = [
    0.066_671_344_308_688_137_593_568_809_893_332,
    0.149_451_349_150_580_593_145_776_339_657_697,
    0.219_086_362_515_982_043_995_534_934_228_163,
    0.269_266_719_309_996_355_091_226_921_569_469,
    0.295_524_224_714_752_870_173_892_994_651_338,
];

#[derive(Clone, Copy, Debug)]
struct Panel<T> {
    a: T,
    b: T,
    value: Complex<T>,
    error: T,
}

impl<T: Real> PartialEq for Panel<T> {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}
impl<T: Real> Eq for Panel<T> {}
impl<T: Real> PartialOrd for Panel<T> {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl<T: Real> Ord for Panel<T> {
    fn cmp(&self, other: &Self) -> Ordering {
        self.error.to_f64_lossy().total_cmp(&other.error.to_f64_lossy())
    }
}

fn gk21<T: Real, F: Fn(T) -> Complex<T>>(f: &F, a: T, b: T) -> Panel<T> {
    let half = T::of(0.5);
    let center = half * (a + b);
    let h = half * (b - a);
    let fc = f(center);
    let mut resk = fc * T::of(WGK[10]);
    let mut resg = Complex::new(T::zero(), T::zero());
    let mut resabs = fc.norm() * T::of(WGK[10]);
    let mut fv = [(Complex::new(T::zero(), T::zero()), Complex::new(T::zero(), T::zero())); 10];
    for j in 0..10 {
        let dx = h * T::of(XGK[j]);
        let f1 = f(center - dx);
        let f2 = f(center + dx);
        fv[j] = (f1, f2);
        let w = T::of(WGK[j]);
        resk = resk + (f1 + f2) * w;
        resabs += w * (f1.norm() + f2.norm());
        if j % 2 == 1 {
            resg = resg + (f1 + f2) * T::of(WG[j / 2]);
        }
    }
    let mean = resk * half;
    let mut resasc = T::of(WGK[10]) * (fc - mean).norm();
    for j in 0..10 {
        resasc += T::of(WGK[j]) * ((fv[j].0 - mean).norm() + (fv[j].1 - mean).norm());
    }
    let habs = h.abs();
    resabs *= habs;
    resasc *= habs;
    let mut err = ((resk - resg) * h).norm();
    if resasc != T::zero() && err != T::zero() {
        err = resasc * T::one().min((T::of(200.0) * err / resasc).powf(T::of(1.5)));
    }
    let floor = T::of(50.0) * T::epsilon() * resabs;
    if floor > T::min_positive_value() {
        err = err.max(floor);
    }
    Panel { a, b, value: resk * h, error: err }
}

/// Integrates `f` over `[breaks[0], breaks[last]]`, starting from one panel
/// per pair of consecutive breakpoints and bisecting the worst panel until
/// the summed error estimate meets `tol`.
pub fn integrate<T, F>(f: F, breaks: &[T], tol: Tolerance<T>, max_panels: usize) -> Result<Integral<T>>
where
    T: Real,
    F: Fn(T) -> Complex<T>,
{
    if breaks.len() < 2 {
        return Ok(Integral { value: Complex::new(T::zero(), T::zero()), error: T::zero(), evaluations: 0, panels: 0 });
    }
    let mut heap = BinaryHeap::with_capacity(breaks.len());
    let mut settled: Vec<Panel<T>> = Vec::new();
    for w in breaks.windows(2) {
        heap.push(gk21(&f, w[0], w[1]));
    }
    let mut evaluations = 21 * heap.len();
    let totals = |heap: &BinaryHeap<Panel<T>>, settled: &[Panel<T>]| {
        let mut v_re = Compensated::new();
        let mut v_im = Compensated::new();
        let mut e = Compensated::new();
        for p in heap.iter().chain(settled.iter()) {
            v_re.add(p.value.re);
            v_im.add(p.value.im);
            e.add(p.error);
        }
        (Complex::new(v_re.value(), v_im.value()), e.value())
    };
    let (mut value, mut error) = totals(&heap, &settled);
    let mut since_refresh = 0usize;
    while error > tol.target(value.norm()) {
        let Some(worst) = heap.pop() else { break };
        let mid = T::of(0.5) * (worst.a + worst.b);
        let tiny = T::epsilon() * T::of(128.0) * worst.a.abs().max(worst.b.abs()).max(T::min_positive_value());
        if !(mid - worst.a > tiny && worst.b - mid > tiny) {
            settled.push(worst);
            continue;
        }
        if heap.len() + settled.len() + 2 > max_panels {
            heap.push(worst);
            break;
        }
        let left = gk21(&f, worst.a, mid);
        let right = gk21(&f, mid, worst.b);
        evaluations += 42;
        value = value + left.value + right.value - worst.value;
        error = error + left.error + right.error - worst.error;
        heap.push(left);
        heap.push(right);
        since_refresh += 1;
        if since_refresh == 512 {
            (value, error) = totals(&heap, &settled);
            since_refresh = 0;
        }
    }
    (value, error) = totals(&heap, &settled);
    let requested = tol.target(value.norm());
    if error > requested || !error.is_finite() || !value.re.is_finite() || !value.im.is_finite() {
        return Err(DeconError::Quadrature { achieved: error.to_f64_lossy(), requested: requested.to_f64_lossy() });
    }
    Ok(Integral { value, error, evaluations, panels: heap.len() + settled.len() })
}

/// Real-valued convenience wrapper around [`integrate`].
pub fn integrate_real<T, F>(f: F, breaks: &[T], tol: Tolerance<T>, max_panels: usize) -> Result<T>
where
    T: Real,
    F: Fn(T) -> T,
{
    integrate(|x| Complex::new(f(x), T::zero()), breaks, tol, max_panels).map(|r| r.value.re)
}
