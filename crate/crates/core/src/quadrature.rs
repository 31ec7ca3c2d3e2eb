//! Adaptive Gauss–Kronrod (10/21) integration on finite intervals, on
//! `[0, ∞)` via `x = s·t/(1-t)`, and over the half-strip
//! `(p, θ) ∈ [0, ∞) × [0, π]` as a nested tensor-product rule.
//!
//! Every routine has a vector-valued form: the integrand fills a slice and
//! all components share the same subdivision. Bisection always splits the
//! panel with the largest scaled error and results are summed in a fixed
//! order, so output is deterministic for a given configuration.

use crate::error::{Error, Result};

#[allow(clippy::excessive_precision)]
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

#[allow(clippy::excessive_precision)]
const WGK: [f64; 11] = [
    0.011_694_638_867_371_874_278_064_396_062_192,
    0.032_558_162_307_964_727_478_818_972_459_390,
    0.054_755_896_574_351_996_031_381_300_244_580,
    0.075_039_674_810_919_952_767_043_140_916_190,
    0.093_125_454_583_697_605_535_065_465_083_366,
    0.109_387_158_802_297_641_899_210_590_325_805,
    0.123_491_976_262_065_851_077_208_323_294_000,
    0.134_709_217_311_473_325_928_054_001_771_707,
    0.142_775_938_577_060_080_797_094_273_138_717,
    0.147_739_104_901_338_491_374_841_515_972_068,
    0.149_445_554_002_916_905_664_936_468_389_821,
];

// Gauss weights for XGK[1], XGK[3], ..., XGK[9]
#[allow(clippy::excessive_precision)]
const WG: [f64; 5] = [
    0.066_671_344_308_688_137_593_568_809_893_332,
    0.149_451_349_150_580_593_145_776_339_657_697,
    0.219_086_362_515_982_043_995_534_934_228_163,
    0.269_266_719_309_996_355_091_226_921_569_469,
    0.295_524_224_714_752_870_173_892_994_651_146,
];

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadConfig {
    pub abs_tol: f64,
    pub rel_tol: f64,
    pub max_subdivisions: usize,
    /// Length over which the integrand decays appreciably, in units of the
    /// integration variable. Sets the `[0, ∞)` mapping.
    pub decay_scale: f64,
}

impl Default for QuadConfig {
    fn default() -> Self {
        Self {
            abs_tol: 1e-10,
            rel_tol: 1e-9,
            max_subdivisions: 2000,
            decay_scale: 1.0,
        }
    }
}

impl QuadConfig {
    pub fn with_decay_scale(mut self, decay_scale: f64) -> Self {
        self.decay_scale = decay_scale;
        self
    }

    pub fn with_tolerances(mut self, abs_tol: f64, rel_tol: f64) -> Self {
        self.abs_tol = abs_tol;
        self.rel_tol = rel_tol;
        self
    }

    pub fn validate(&self) -> Result<()> {
        let ok = self.abs_tol > 0.0
            && self.rel_tol > 0.0
            && self.max_subdivisions >= 1
            && self.decay_scale > 0.0
            && self.decay_scale.is_finite();
        if ok {
            Ok(())
        } else {
            Err(Error::InvalidInput(format!("bad quadrature configuration {self:?}")))
        }
    }

    fn tolerance(&self, value: f64) -> f64 {
        self.abs_tol.max(self.rel_tol * value.abs())
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadResult {
    pub value: f64,
    pub est_abs_error: f64,
    pub evaluations: usize,
}

struct Panel {
    a: f64,
    b: f64,
    value: Vec<f64>,
    error: Vec<f64>,
}

fn rescale_error(err: f64, res_abs: f64, res_asc: f64) -> f64 {
    let mut err = err.abs();
    if res_asc != 0.0 && err != 0.0 {
        let scale = (200.0 * err / res_asc).powf(1.5);
        err = if scale < 1.0 { res_asc * scale } else { res_asc };
    }
    if res_abs > f64::MIN_POSITIVE / (50.0 * f64::EPSILON) {
        err = err.max(50.0 * f64::EPSILON * res_abs);
    }
    err
}

/// One 21-point Kronrod panel with the embedded 10-point Gauss estimate.
fn gk21<F>(f: &F, a: f64, b: f64, dim: usize, scratch: &mut Vec<f64>) -> Panel
where
    F: Fn(f64, &mut [f64]) + ?Sized,
{
    let center = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let abs_half = half.abs();

    // node values: scratch holds 21 rows of `dim`
    scratch.clear();
    scratch.resize(21 * dim, 0.0);
    f(center, &mut scratch[20 * dim..21 * dim]);
    for j in 0..10 {
        let dx = half * XGK[j];
        let (lo, hi) = scratch.split_at_mut((2 * j + 1) * dim);
        f(center - dx, &mut lo[2 * j * dim..]);
        f(center + dx, &mut hi[..dim]);
    }

    let mut value = vec![0.0; dim];
    let mut error = vec![0.0; dim];
    for c in 0..dim {
        let fc = scratch[20 * dim + c];
        let mut kron = fc * WGK[10];
        let mut gauss = 0.0;
        let mut res_abs = kron.abs();
        for j in 0..10 {
            let f1 = scratch[2 * j * dim + c];
            let f2 = scratch[(2 * j + 1) * dim + c];
            kron += WGK[j] * (f1 + f2);
            res_abs += WGK[j] * (f1.abs() + f2.abs());
            if j % 2 == 1 {
                gauss += WG[j / 2] * (f1 + f2);
            }
        }
        let mean = 0.5 * kron;
        let mut res_asc = WGK[10] * (fc - mean).abs();
        for j in 0..10 {
            let f1 = scratch[2 * j * dim + c];
            let f2 = scratch[(2 * j + 1) * dim + c];
            res_asc += WGK[j] * ((f1 - mean).abs() + (f2 - mean).abs());
        }
        value[c] = kron * half;
        error[c] = rescale_error((kron - gauss) * half, res_abs * abs_half, res_asc * abs_half);
    }
    Panel { a, b, value, error }
}

fn adaptive<F>(what: &'static str, f: &F, a: f64, b: f64, dim: usize, cfg: &QuadConfig) -> Result<Vec<QuadResult>>
where
    F: Fn(f64, &mut [f64]) + ?Sized,
{
    cfg.validate()?;
    let mut scratch = Vec::new();
    let mut panels = vec![gk21(f, a, b, dim, &mut scratch)];
    let mut evaluations = 21;

    loop {
        let mut total = vec![0.0; dim];
        let mut total_err = vec![0.0; dim];
        for p in &panels {
            for c in 0..dim {
                total[c] += p.value[c];
                total_err[c] += p.error[c];
            }
        }
        let tol: Vec<f64> = total.iter().map(|&v| cfg.tolerance(v)).collect();
        let converged = (0..dim).all(|c| total_err[c] <= tol[c]);
        if converged || dim == 0 {
            return Ok((0..dim)
                .map(|c| QuadResult {
                    value: total[c],
                    est_abs_error: total_err[c],
                    evaluations,
                })
                .collect());
        }

        // worst panel by error relative to each component's tolerance
        let worst = panels
            .iter()
            .enumerate()
            .map(|(i, p)| {
                let score: f64 = (0..dim).map(|c| p.error[c] / tol[c]).fold(0.0, f64::max);
                (i, score)
            })
            .fold((0, f64::NEG_INFINITY), |acc, x| if x.1 > acc.1 { x } else { acc })
            .0;

        let p = &panels[worst];
        let mid = 0.5 * (p.a + p.b);
        let exhausted = panels.len() >= cfg.max_subdivisions;
        let unsplittable = !(mid > p.a && mid < p.b) || (p.b - p.a).abs() < 1e-15 * p.a.abs().max(p.b.abs());
        if exhausted || unsplittable {
            let c = (0..dim)
                .max_by(|&i, &j| (total_err[i] / tol[i]).total_cmp(&(total_err[j] / tol[j])))
                .unwrap_or(0);
            return Err(Error::NonConvergence {
                what,
                estimate: total[c],
                error: total_err[c],
                tolerance: tol[c],
            });
        }
        let (pa, pb) = (p.a, p.b);
        let left = gk21(f, pa, mid, dim, &mut scratch);
        let right = gk21(f, mid, pb, dim, &mut scratch);
        evaluations += 42;
        panels[worst] = left;
        panels.insert(worst + 1, right);
    }
}

/// Vector form of [`integrate_interval`].
pub fn integrate_interval_vec<F>(f: F, a: f64, b: f64, dim: usize, cfg: &QuadConfig) -> Result<Vec<QuadResult>>
where
    F: Fn(f64, &mut [f64]),
{
    adaptive("quadrature (finite interval)", &f, a, b, dim, cfg)
}

/// ∫ₐᵇ f(x) dx.
pub fn integrate_interval<F>(f: F, a: f64, b: f64, cfg: &QuadConfig) -> Result<QuadResult>
where
    F: Fn(f64) -> f64,
{
    let r = integrate_interval_vec(|x, out: &mut [f64]| out[0] = f(x), a, b, 1, cfg)?;
    Ok(r[0])
}

fn map_semi_infinite<F>(f: &F, scale: f64, t: f64, out: &mut [f64])
where
    F: Fn(f64, &mut [f64]) + ?Sized,
{
    let one_minus = 1.0 - t;
    let x = scale * t / one_minus;
    if !x.is_finite() {
        out.fill(0.0);
        return;
    }
    f(x, out);
    let jac = scale / (one_minus * one_minus);
    for v in out.iter_mut() {
        // the integrand is assumed to have decayed wherever it underflows
        *v = if *v == 0.0 { 0.0 } else { *v * jac };
    }
}

/// Vector form of [`integrate_semi_infinite`].
pub fn integrate_semi_infinite_vec<F>(f: F, dim: usize, cfg: &QuadConfig) -> Result<Vec<QuadResult>>
where
    F: Fn(f64, &mut [f64]),
{
    let scale = cfg.decay_scale;
    let mapped = |t: f64, out: &mut [f64]| map_semi_infinite(&f, scale, t, out);
    adaptive("quadrature (semi-infinite)", &mapped, 0.0, 1.0, dim, cfg)
}

/// ∫₀^∞ f(x) dx for integrands that decay at least exponentially beyond
/// `cfg.decay_scale`; integrable endpoint singularities at 0 are handled by
/// repeated bisection.
pub fn integrate_semi_infinite<F>(f: F, cfg: &QuadConfig) -> Result<QuadResult>
where
    F: Fn(f64) -> f64,
{
    let r = integrate_semi_infinite_vec(|x, out: &mut [f64]| out[0] = f(x), 1, cfg)?;
    Ok(r[0])
}

/// Vector form of [`integrate_2d`]: ∫₀^π dθ ∫₀^∞ dp f(p, θ).
///
/// The inner `p` integrals run with tolerances ten times tighter than the
/// outer `θ` integral so that their noise does not drive outer refinement.
pub fn integrate_2d_vec<F>(f: F, dim: usize, cfg: &QuadConfig) -> Result<Vec<QuadResult>>
where
    F: Fn(f64, f64, &mut [f64]),
{
    cfg.validate()?;
    let inner_cfg = QuadConfig {
        abs_tol: cfg.abs_tol * 0.1,
        rel_tol: cfg.rel_tol * 0.1,
        ..*cfg
    };
    let failure = std::sync::Mutex::new(None::<Error>);
    let evaluations = std::sync::atomic::AtomicUsize::new(0);
    let outer = |theta: f64, out: &mut [f64]| match integrate_semi_infinite_vec(
        |p, o: &mut [f64]| f(p, theta, o),
        dim,
        &inner_cfg,
    ) {
        Ok(rows) => {
            evaluations.fetch_add(
                rows.first().map_or(0, |r| r.evaluations),
                std::sync::atomic::Ordering::Relaxed,
            );
            for (o, r) in out.iter_mut().zip(rows) {
                *o = r.value;
            }
        }
        Err(e) => {
            out.fill(0.0);
            let mut slot = failure.lock().unwrap();
            if slot.is_none() {
                *slot = Some(e);
            }
        }
    };
    let result = adaptive("quadrature (2d)", &outer, 0.0, std::f64::consts::PI, dim, cfg);
    if let Some(e) = failure.into_inner().unwrap() {
        return Err(e);
    }
    let total_evals = evaluations.into_inner();
    result.map(|rows| {
        rows.into_iter()
            .map(|r| QuadResult {
                evaluations: total_evals,
                ..r
            })
            .collect()
    })
}

/// ∫₀^π dθ ∫₀^∞ dp f(p, θ). The measure is plain `dp dθ`; callers supply any
/// `p² sin θ` weight themselves.
pub fn integrate_2d<F>(f: F, cfg: &QuadConfig) -> Result<QuadResult>
where
    F: Fn(f64, f64) -> f64,
{
    let r = integrate_2d_vec(|p, t, out: &mut [f64]| out[0] = f(p, t), 1, cfg)?;
    Ok(r[0])
}
