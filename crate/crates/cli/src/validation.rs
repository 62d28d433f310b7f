//! Property checks run by `validate_all` and by the acceptance tests.
//!
//! Each check returns a [`CheckOutcome`]; none of them panics on failure.

use crate::config::{Config, ExperimentName};
use crate::experiments::{outage_curve, run, RunError};
use crate::output::{header_comment, Table};
use irsnet_core::bounds::{self, optimize_tau, tail_bound_i, tail_bound_s, BoundSet, TauTarget};
use irsnet_core::geometry::{campbell_check, sample_ppp, Disk, NodeKind, Point2};
use irsnet_core::montecarlo::{paired_difference, run_trials, sweep_lambda_irs, EnsembleStats, SweepRow};
use irsnet_core::params::{validate, BoundParams, SystemParams, ValidatedParams};
use irsnet_core::rng::{StreamTag, TrialStreams};
use std::fmt;
use std::path::Path;

#[derive(Debug, Clone, PartialEq)]
pub struct CheckOutcome {
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
}

impl fmt::Display for CheckOutcome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} {}: {}", if self.passed { "PASS" } else { "FAIL" }, self.name, self.detail)
    }
}

fn outcome(name: &'static str, passed: bool, detail: String) -> CheckOutcome {
    CheckOutcome { name, passed, detail }
}

/// Ensembles and bounds along a λ_IRS grid.
pub struct SweepData {
    pub bound_params: BoundParams,
    pub params: Vec<ValidatedParams>,
    pub rows: Vec<SweepRow>,
    pub bounds: Vec<BoundSet>,
}

pub fn sweep_with_bounds(p: &ValidatedParams, bp: &BoundParams, grid: &[f64], n: usize, seed: u64, threads: usize) -> Result<SweepData, RunError> {
    let rows = sweep_lambda_irs(p, grid, n, seed, threads)?;
    let params = grid.iter().map(|&l| validate(p.with_lambda_irs(l))).collect::<Result<Vec<_>, _>>()?;
    let bounds = params.iter().map(|q| BoundSet::evaluate(q, bp)).collect::<Result<Vec<_>, _>>()?;
    Ok(SweepData { bound_params: bp.clone(), params, rows, bounds })
}

/// Series and closed forms of the two root-of-unity functions agree; h_fn(1) matches its known value.
pub fn check_roots() -> CheckOutcome {
    let mut worst: f64 = 0.0;
    for k in -2..=6 {
        let x = 10f64.powi(k);
        for n in [11u32, 9] {
            let s = bounds::root_series(x, n);
            let c = bounds::root_closed_form(x, n).re;
            worst = worst.max((s - c).abs() / s.abs());
        }
    }
    let h1 = bounds::h_fn(1.0).unwrap_or(f64::NAN);
    let err = (h1 - 1.00000275574).abs();
    outcome("root_identity", worst < 1e-9 && err <= 1e-10, format!("max relative gap {worst:.2e}; h(1) = {h1:.13}"))
}

/// Means lie inside their bounds within the 95% CI, and the signal mean sits closer to the lower bound on a log scale.
pub fn check_sandwich(d: &SweepData) -> CheckOutcome {
    let mut ok = true;
    let mut parts = Vec::new();
    for (row, b) in d.rows.iter().zip(&d.bounds) {
        let s = &row.stats.mean_ps;
        let i = &row.stats.mean_pi;
        let ps_in = s.mean + s.half_width >= b.ps_min.total && s.mean - s.half_width <= b.ps_max.total;
        let pi_in = i.mean + i.half_width >= b.pi_min.total && i.mean - i.half_width <= b.pi_max.total;
        let near = (s.mean / b.ps_min.total).ln() < (b.ps_max.total / s.mean).ln();
        let literal = s.mean / b.ps_min.total < s.mean / b.ps_max.total * 10.0;
        ok &= ps_in && pi_in && near;
        parts.push(format!(
            "λ={:e}: ps {:.4e}±{:.1e} in [{:.4e}, {:.4e}] {}; pi {:.4e}±{:.1e} in [{:.3e}, {:.3e}] {}; log-closer-to-min {}; ratio form {}",
            row.lambda_irs,
            s.mean,
            s.half_width,
            b.ps_min.total,
            b.ps_max.total,
            ps_in,
            i.mean,
            i.half_width,
            b.pi_min.total,
            b.pi_max.total,
            pi_in,
            near,
            literal
        ));
    }
    outcome("sandwich", ok, parts.join(" | "))
}

/// Paired differences between neighbouring grid points are positive beyond their 95% CI.
pub fn check_monotone(d: &SweepData) -> CheckOutcome {
    let mut ok = true;
    let mut parts = Vec::new();
    for w in d.rows.windows(2) {
        let (a, b) = (&w[0].stats, &w[1].stats);
        for (label, xa, xb, ma, mb) in [
            ("ps", a.ps(), b.ps(), a.mean_ps, b.mean_ps),
            ("pi", a.pi(), b.pi(), a.mean_pi, b.mean_pi),
            ("cap", a.cap(), b.cap(), a.mean_cap, b.mean_cap),
        ] {
            let diff = paired_difference(&xa, &xb);
            let up = diff.mean - diff.half_width > 0.0;
            let marginal = ma.mean + ma.half_width < mb.mean - mb.half_width;
            ok &= up;
            parts.push(format!(
                "{label} {:e}→{:e}: Δ={:.3e}±{:.2e} {} (marginal CIs disjoint: {marginal})",
                w[0].lambda_irs,
                w[1].lambda_irs,
                diff.mean,
                diff.half_width,
                if up { "up" } else { "not separated" }
            ));
        }
    }
    outcome("monotonicity", ok, parts.join(" | "))
}

/// Empirical survival functions never exceed the optimized tail bounds.
pub fn check_tails(d: &SweepData) -> Result<CheckOutcome, RunError> {
    let bp = &d.bound_params;
    let (mut points, mut violations, mut informative) = (0usize, 0usize, 0usize);
    let mut worst = Vec::new();
    for (q, row) in d.params.iter().zip(&d.rows) {
        for (signal, curve) in [(true, &row.stats.survival_s), (false, &row.stats.survival_i)] {
            for tp in curve.iter().filter(|tp| tp.t > 0.0) {
                let bound = match (signal, bp.tau_s, bp.tau_i) {
                    (true, Some(tau), _) => tail_bound_s(tp.t, tau, q)?,
                    (false, _, Some(tau)) => tail_bound_i(tp.t, tau, q)?,
                    (true, None, _) => optimize_tau(TauTarget::SignalTail { t: tp.t }, q)?.bound,
                    (false, _, None) => optimize_tau(TauTarget::InterferenceTail { t: tp.t }, q)?.bound,
                };
                points += 1;
                if bound < 1.0 {
                    informative += 1;
                }
                if tp.prob > bound {
                    violations += 1;
                    worst.push(format!("{} t={:e}: {:.3e} > {:.3e}", if signal { "S" } else { "I" }, tp.t, tp.prob, bound));
                }
            }
        }
    }
    Ok(outcome(
        "tail_domination",
        violations == 0 && points > 0,
        format!("{points} thresholds, {violations} violations, {informative} with a bound below 1 {}", worst.join("; ")),
    ))
}

/// Outage bounds dominate empirical outage, and grow with λ_IRS and κ.
#[allow(clippy::too_many_arguments)]
pub fn check_outage(
    p: &ValidatedParams,
    bp: &BoundParams,
    lambda_grid: &[f64],
    kappa_grid: &[f64],
    alphas: &[f64],
    n: usize,
    seed: u64,
    threads: usize,
) -> Result<CheckOutcome, RunError> {
    let mut violations = Vec::new();
    let mut ordering = Vec::new();
    for (what, grid) in [("λ_IRS", lambda_grid), ("κ", kappa_grid)] {
        let mut prev: Option<(f64, Vec<f64>)> = None;
        for &g in grid {
            let q = validate(if what == "κ" { p.with_kappa(g) } else { p.with_lambda_irs(g) })?;
            let stats = EnsembleStats::from_samples(run_trials(&q, n, seed, threads), alphas);
            let curve = outage_curve(&q, bp, &stats)?;
            for c in curve.iter().filter(|c| c.prob > c.bound) {
                violations.push(format!("{what}={g} α={:e}: {:.3e} > {:.3e}", c.alpha, c.prob, c.bound));
            }
            let bounds: Vec<f64> = curve.iter().map(|c| c.bound).collect();
            if let Some((pg, pb)) = &prev {
                if let Some(k) = (0..bounds.len()).find(|&k| bounds[k] < pb[k]) {
                    ordering.push(format!("{what} {pg}→{g} at α={:e}: {:.3e} < {:.3e}", alphas[k], bounds[k], pb[k]));
                }
            }
            prev = Some((g, bounds));
        }
    }
    let detail = format!(
        "{} domination violations, {} ordering violations {}",
        violations.len(),
        ordering.len(),
        violations.iter().chain(&ordering).cloned().collect::<Vec<_>>().join("; ")
    );
    Ok(outcome("outage_domination", violations.is_empty() && ordering.is_empty(), detail))
}

/// Log-log slopes of the bounds in λ_IRS at the reference point with Q = 1000.
pub fn check_slopes() -> Result<CheckOutcome, RunError> {
    let p = validate(SystemParams::reference())?;
    let (lo, hi) = (3e-2, 1e-1);
    let s1 = bounds::loglog_slope(&p, lo, hi, |q| bounds::ps_max(q).map(|b| b.total))?;
    let s2 = bounds::loglog_slope(&p, lo, hi, |q| bounds::ps_min(q).map(|b| b.irs_part))?;
    let s3 = bounds::loglog_slope(&p, lo, hi, |q| bounds::pi_max(q).map(|b| b.total))?;
    let ok1 = (s1 - 4.0).abs() <= 0.2;
    let ok2 = (s2 - 1.0).abs() <= 0.05;
    let ok3 = (s3 - 3.0).abs() <= 0.2;
    Ok(outcome(
        "slopes",
        ok1 && ok2 && ok3,
        format!("ps_max {s1:.3} (4.0±0.2) {ok1}; ps_min irs {s2:.3} (1.0±0.05) {ok2}; pi_max {s3:.3} (3.0±0.2) {ok3}"),
    ))
}

/// (E{P_I^p})^{1/p} ≤ K·p¹¹ for p = 1, 2, 3.
pub fn check_moments(d: &SweepData) -> CheckOutcome {
    let mut ok = true;
    let mut parts = Vec::new();
    for (row, b) in d.rows.iter().zip(&d.bounds) {
        for (i, m) in row.stats.moments_pi.iter().enumerate() {
            let order = (i + 1) as f64;
            let lhs = m.powf(1.0 / order);
            let rhs = b.k_coef * order.powi(11);
            ok &= lhs <= rhs;
            parts.push(format!("λ={:e} p={}: {lhs:.3e} ≤ {rhs:.3e}", row.lambda_irs, i + 1));
        }
    }
    outcome("moment_bound", ok, parts.join("; "))
}

/// Poisson dispersion of the sampler and Campbell's formula for a path-loss kernel.
pub fn check_ppp_campbell(seed: u64) -> CheckOutcome {
    let streams = TrialStreams::new(seed, 0);
    let mut rng = streams.stream(StreamTag::Auxiliary, 0, 0);
    let n = 100_000;
    let counts: Vec<f64> = (0..n).map(|_| sample_ppp(NodeKind::Bs, 1e-3, Point2::ORIGIN, 60.0, &mut rng).len() as f64).collect();
    let m = counts.iter().sum::<f64>() / n as f64;
    let var = counts.iter().map(|c| (c - m).powi(2)).sum::<f64>() / (n - 1) as f64;
    let dispersion = var / m;
    let (h, r) = (10.0f64, 15.0);
    let mut rng = streams.stream(StreamTag::Auxiliary, 1, 0);
    let rep = campbell_check(1e-3, &|x| 1.0 / (h * h + x.norm().powi(2)), Disk::new(Point2::ORIGIN, r), 200_000, &mut rng);
    outcome(
        "ppp_campbell",
        (0.95..=1.05).contains(&dispersion) && rep.relative_error < 0.02,
        format!("dispersion {dispersion:.4}; Campbell {:.5e} vs {:.5e} ({:.2}%)", rep.empirical, rep.expected, 100.0 * rep.relative_error),
    )
}

/// fig3_powers gives identical CSV bytes with 1 and 8 threads.
pub fn check_determinism(cfg: &Config, dir: &Path) -> Result<CheckOutcome, RunError> {
    let mut bytes = Vec::new();
    for threads in [1usize, 8] {
        let mut c = cfg.clone();
        c.experiment.name = ExperimentName::Fig3Powers;
        c.experiment.threads = threads;
        c.experiment.out_dir = dir.join(format!("threads_{threads}"));
        let a = run(&c)?;
        bytes.push(std::fs::read(&a.csv).map_err(|source| RunError::Io { path: a.csv.clone(), source })?);
    }
    let same = bytes[0] == bytes[1];
    Ok(outcome("determinism", same, format!("{} bytes, identical: {same}", bytes[0].len())))
}

/// The in-binary suite at the config's trial count.
pub fn run_suite(cfg: &Config, p: &ValidatedParams) -> Result<Vec<CheckOutcome>, RunError> {
    let e = &cfg.experiment;
    let grid = if e.grid.is_empty() { ExperimentName::ValidateAll.default_grid() } else { e.grid.clone() };
    let mut out = vec![check_roots()];
    log::info!("sweep over {} densities, {} trials each", grid.len(), e.trials);
    let d = sweep_with_bounds(p, &cfg.bound_params, &grid, e.trials, e.seed, e.threads)?;
    out.push(check_sandwich(&d));
    out.push(check_monotone(&d));
    out.push(check_tails(&d)?);
    out.push(check_outage(
        p,
        &cfg.bound_params,
        &ExperimentName::Fig5OutageLambda.default_grid(),
        &ExperimentName::Fig6OutageKappa.default_grid(),
        &cfg.alphas(),
        e.trials,
        e.seed,
        e.threads,
    )?);
    out.push(check_slopes()?);
    out.push(check_moments(&d));
    out.push(check_ppp_campbell(e.seed));
    let mut small = cfg.clone();
    small.experiment.grid = grid;
    small.experiment.trials = e.trials.min(2000);
    out.push(check_determinism(&small, &e.out_dir.join("determinism"))?);
    Ok(out)
}

pub fn report_table(cfg: &Config, checks: &[CheckOutcome]) -> Table {
    Table {
        comment: header_comment(cfg),
        columns: vec!["check", "passed", "detail"],
        rows: checks.iter().map(|c| vec![c.name.to_string(), c.passed.to_string(), c.detail.clone()]).collect(),
    }
}
