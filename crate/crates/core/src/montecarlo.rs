//! Seeded Monte-Carlo ensembles over network realizations.
//!
//! Trial `i` draws all of its randomness from `TrialStreams::new(seed, i)`, so
//! the samples do not depend on the thread count. Statistics are accumulated
//! in trial order.

use crate::params::ValidatedParams;
use crate::rng::TrialStreams;
use crate::scenario::Scenario;
use rayon::prelude::*;

pub use crate::scenario::PowerSample;

/// 97.5% standard normal quantile.
pub const Z95: f64 = 1.959_963_984_540_054;

/// One point of an empirical survival curve.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TailPoint {
    pub t: f64,
    /// Fraction of samples strictly above `t`.
    pub prob: f64,
    /// 95% Wilson interval.
    pub lo: f64,
    pub hi: f64,
}

/// 95% Wilson score interval for `k` successes in `n` trials.
pub fn wilson(k: usize, n: usize) -> (f64, f64) {
    if n == 0 {
        return (0.0, 1.0);
    }
    let n = n as f64;
    let ph = k as f64 / n;
    let z2 = Z95 * Z95;
    let den = 1.0 + z2 / n;
    let center = (ph + z2 / (2.0 * n)) / den;
    let half = Z95 * (ph * (1.0 - ph) / n + z2 / (4.0 * n * n)).sqrt() / den;
    let lo = if k == 0 { 0.0 } else { (center - half).max(0.0) };
    let hi = if k as f64 == n { 1.0 } else { (center + half).min(1.0) };
    (lo, hi)
}

/// Empirical Pr{X > t} for each threshold, with Wilson intervals.
pub fn empirical_tail(samples: &[f64], thresholds: &[f64]) -> Vec<TailPoint> {
    let mut sorted = samples.to_vec();
    sorted.sort_by(f64::total_cmp);
    let n = sorted.len();
    thresholds
        .iter()
        .map(|&t| {
            let above = n - sorted.partition_point(|&x| x <= t);
            let (lo, hi) = wilson(above, n);
            TailPoint { t, prob: if n == 0 { 0.0 } else { above as f64 / n as f64 }, lo, hi }
        })
        .collect()
}

/// Sample mean with a 95% normal-approximation half-width (infinite for n < 2).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MeanCi {
    pub mean: f64,
    pub half_width: f64,
    pub std_dev: f64,
}

pub fn mean_ci(xs: &[f64]) -> MeanCi {
    let n = xs.len();
    if n == 0 {
        return MeanCi { mean: f64::NAN, half_width: f64::INFINITY, std_dev: f64::NAN };
    }
    let mean = xs.iter().sum::<f64>() / n as f64;
    if n < 2 {
        return MeanCi { mean, half_width: f64::INFINITY, std_dev: f64::NAN };
    }
    let var = xs.iter().map(|x| (x - mean) * (x - mean)).sum::<f64>() / (n - 1) as f64;
    let sd = var.sqrt();
    MeanCi { mean, half_width: Z95 * sd / (n as f64).sqrt(), std_dev: sd }
}

/// Mean of the paired differences `b[i] − a[i]` with its 95% half-width.
pub fn paired_difference(a: &[f64], b: &[f64]) -> MeanCi {
    assert_eq!(a.len(), b.len(), "paired samples must have equal length");
    let d: Vec<f64> = a.iter().zip(b).map(|(x, y)| y - x).collect();
    mean_ci(&d)
}

/// `n` log-spaced thresholds spanning the positive samples.
pub fn log_grid_over(samples: &[f64], n: usize) -> Vec<f64> {
    let pos = samples.iter().copied().filter(|&x| x > 0.0 && x.is_finite());
    let (lo, hi) = pos.fold((f64::INFINITY, 0.0f64), |(lo, hi), x| (lo.min(x), hi.max(x)));
    if !(lo < hi) || n < 2 {
        return if lo.is_finite() { vec![lo] } else { vec![] };
    }
    log_grid(lo, hi, n)
}

/// `n` log-spaced points from `lo` to `hi` inclusive.
pub fn log_grid(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    if n == 0 {
        return vec![];
    }
    if n == 1 {
        return vec![lo];
    }
    let (a, b) = (lo.ln(), hi.ln());
    let mut g: Vec<f64> = (0..n).map(|i| (a + (b - a) * i as f64 / (n - 1) as f64).exp()).collect();
    // exp(ln(x)) need not return x
    g[0] = lo;
    g[n - 1] = hi;
    g
}

/// Summary of an ensemble.
#[derive(Debug, Clone, PartialEq)]
pub struct EnsembleStats {
    pub n_trials: usize,
    pub mean_ps: MeanCi,
    pub mean_pi: MeanCi,
    pub mean_cap: MeanCi,
    pub survival_s: Vec<TailPoint>,
    pub survival_i: Vec<TailPoint>,
    /// Pr{ℂ > α} on the α grid.
    pub outage: Vec<TailPoint>,
    /// E{ℙ(𝕀)^p} for p = 1, 2, 3.
    pub moments_pi: [f64; 3],
    pub samples: Vec<PowerSample>,
}

/// Number of points on the automatic survival grids.
pub const SURVIVAL_POINTS: usize = 20;

impl EnsembleStats {
    /// Summarizes samples; survival grids span the positive samples, `alphas` sets the outage grid.
    pub fn from_samples(samples: Vec<PowerSample>, alphas: &[f64]) -> Self {
        let ps: Vec<f64> = samples.iter().map(|s| s.p_s).collect();
        let pi: Vec<f64> = samples.iter().map(|s| s.p_i).collect();
        let cap: Vec<f64> = samples.iter().map(|s| s.cap).collect();
        let n = samples.len().max(1) as f64;
        let moment = |k: i32| pi.iter().map(|x| x.powi(k)).sum::<f64>() / n;
        EnsembleStats {
            n_trials: samples.len(),
            mean_ps: mean_ci(&ps),
            mean_pi: mean_ci(&pi),
            mean_cap: mean_ci(&cap),
            survival_s: empirical_tail(&ps, &log_grid_over(&ps, SURVIVAL_POINTS)),
            survival_i: empirical_tail(&pi, &log_grid_over(&pi, SURVIVAL_POINTS)),
            outage: empirical_tail(&cap, alphas),
            moments_pi: [moment(1), moment(2), moment(3)],
            samples,
        }
    }

    pub fn ps(&self) -> Vec<f64> {
        self.samples.iter().map(|s| s.p_s).collect()
    }

    pub fn pi(&self) -> Vec<f64> {
        self.samples.iter().map(|s| s.p_i).collect()
    }

    pub fn cap(&self) -> Vec<f64> {
        self.samples.iter().map(|s| s.cap).collect()
    }
}

/// Conditional powers of trials `0..n`, in trial order.
pub fn run_trials(p: &ValidatedParams, n: usize, master_seed: u64, threads: usize) -> Vec<PowerSample> {
    let work = || {
        (0..n as u64)
            .into_par_iter()
            .map(|i| Scenario::build(p, &TrialStreams::new(master_seed, i)).conditional_powers())
            .collect()
    };
    match rayon::ThreadPoolBuilder::new().num_threads(threads.max(1)).build() {
        Ok(pool) => pool.install(work),
        Err(e) => {
            log::warn!("could not build a thread pool ({e}); using the global pool");
            work()
        }
    }
}

/// Default outage grid: 20 log-spaced capacities from 1e-4 to 1 nat.
pub fn default_alpha_grid() -> Vec<f64> {
    log_grid(1e-4, 1.0, 20)
}

/// Runs `n` trials and summarizes them.
pub fn run_ensemble(p: &ValidatedParams, n: usize, master_seed: u64, threads: usize) -> EnsembleStats {
    EnsembleStats::from_samples(run_trials(p, n, master_seed, threads), &default_alpha_grid())
}

/// One row of a λ_IRS sweep.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepRow {
    pub lambda_irs: f64,
    pub stats: EnsembleStats,
}

/// Runs one ensemble per λ_IRS with the same seed.
///
/// Because IRS sets are nested in the density and every other draw is keyed
/// independently of λ_IRS, rows share common random numbers.
pub fn sweep_lambda_irs(p: &ValidatedParams, grid: &[f64], n: usize, seed: u64, threads: usize) -> Result<Vec<SweepRow>, crate::ParamError> {
    grid.iter()
        .map(|&l| {
            let q = crate::params::validate(p.with_lambda_irs(l))?;
            Ok(SweepRow { lambda_irs: l, stats: run_ensemble(&q, n, seed, threads) })
        })
        .collect()
}
