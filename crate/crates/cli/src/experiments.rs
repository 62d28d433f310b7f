//! The named experiments and their CSV and SVG artifacts.

use crate::config::{Config, ConfigError, ExperimentName};
use crate::output::{fmt_f, header_comment, Table};
use crate::svg::{Plot, Series};
use crate::validation::{self, CheckOutcome};
use irsnet_core::bounds::{optimize_tau, outage_bound, BoundError, BoundSet, TauTarget};
use irsnet_core::montecarlo::{run_trials, sweep_lambda_irs, EnsembleStats};
use irsnet_core::params::{validate, BoundParams, ParamError, ValidatedParams};
use std::path::{Path, PathBuf};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum RunError {
    #[error(transparent)]
    Config(#[from] ConfigError),
    #[error(transparent)]
    Bound(#[from] BoundError),
    #[error("cannot write {path}: {source}")]
    Io { path: PathBuf, source: std::io::Error },
    #[error("validation failed; first failing invariant: {0}")]
    ValidationFailed(String),
}

impl From<ParamError> for RunError {
    fn from(e: ParamError) -> Self {
        RunError::Config(ConfigError::Invalid(e))
    }
}

impl RunError {
    /// Process exit status for this error.
    pub fn exit_code(&self) -> i32 {
        match self {
            RunError::Config(_) => 2,
            RunError::Bound(BoundError::NonFinite(_)) => 3,
            // a τ or α outside its domain comes from the config
            RunError::Bound(_) => 2,
            RunError::Io { .. } | RunError::ValidationFailed(_) => 1,
        }
    }
}

/// Files written by [`run`].
#[derive(Debug, Clone, PartialEq)]
pub struct Artifacts {
    pub csv: PathBuf,
    pub svg: Option<PathBuf>,
    /// Check results of `validate_all`; empty for the figure experiments.
    pub checks: Vec<CheckOutcome>,
}

fn io_err(path: &Path) -> impl FnOnce(std::io::Error) -> RunError + '_ {
    move |source| RunError::Io { path: path.to_path_buf(), source }
}

/// Validates `cfg`, runs its experiment and writes `<name>.csv` and `<name>.svg` into `out_dir`.
///
/// `validate_all` writes its report even when a check fails, then returns
/// [`RunError::ValidationFailed`] naming the first failure.
pub fn run(cfg: &Config) -> Result<Artifacts, RunError> {
    let p = cfg.validate()?;
    let dir = &cfg.experiment.out_dir;
    std::fs::create_dir_all(dir).map_err(io_err(dir))?;
    let name = cfg.experiment.name;
    let csv = dir.join(format!("{name}.csv"));
    if name == ExperimentName::ValidateAll {
        let checks = validation::run_suite(cfg, &p)?;
        let table = validation::report_table(cfg, &checks);
        table.write(&csv).map_err(io_err(&csv))?;
        if let Some(first) = checks.iter().find(|c| !c.passed) {
            return Err(RunError::ValidationFailed(first.name.to_string()));
        }
        return Ok(Artifacts { csv, svg: None, checks });
    }
    let (table, plot) = build(cfg, &p)?;
    table.write(&csv).map_err(io_err(&csv))?;
    let svg = dir.join(format!("{name}.svg"));
    std::fs::write(&svg, plot.render()).map_err(io_err(&svg))?;
    Ok(Artifacts { csv, svg: Some(svg), checks: Vec::new() })
}

/// Computes the table and plot of a figure experiment without touching the file system.
pub fn build(cfg: &Config, p: &ValidatedParams) -> Result<(Table, Plot), RunError> {
    match cfg.experiment.name {
        ExperimentName::Fig3Powers => fig3(cfg, p),
        ExperimentName::Fig4Capacity => fig4(cfg, p),
        ExperimentName::Fig5OutageLambda => outage_sweep(cfg, p, false),
        ExperimentName::Fig6OutageKappa => outage_sweep(cfg, p, true),
        ExperimentName::ValidateAll => Err(ConfigError::Spec("validate_all has no figure".into()).into()),
    }
}

fn fig3(cfg: &Config, p: &ValidatedParams) -> Result<(Table, Plot), RunError> {
    let e = &cfg.experiment;
    let sweep = sweep_lambda_irs(p, &e.grid, e.trials, e.seed, e.threads)?;
    let mut rows = Vec::new();
    let mut series: Vec<Vec<(f64, f64)>> = vec![Vec::new(); 6];
    for row in &sweep {
        let q = validate(p.with_lambda_irs(row.lambda_irs))?;
        let b = BoundSet::evaluate(&q, &cfg.bound_params)?;
        let s = &row.stats;
        let l = row.lambda_irs;
        rows.push(vec![
            fmt_f(l),
            fmt_f(s.mean_ps.mean),
            fmt_f(s.mean_ps.half_width),
            fmt_f(s.mean_pi.mean),
            fmt_f(s.mean_pi.half_width),
            fmt_f(b.ps_min.total),
            fmt_f(b.ps_max.total),
            fmt_f(b.pi_min.total),
            fmt_f(b.pi_max.total),
        ]);
        for (k, v) in [s.mean_ps.mean, b.ps_min.total, b.ps_max.total, s.mean_pi.mean, b.pi_min.total, b.pi_max.total]
            .into_iter()
            .enumerate()
        {
            series[k].push((l, v));
        }
    }
    let table = Table {
        comment: header_comment(cfg),
        columns: vec!["lambda_irs", "mean_ps", "ci_ps", "mean_pi", "ci_pi", "ps_min", "ps_max", "pi_min", "pi_max"],
        rows,
    };
    let names = ["mean P_S", "P_S min", "P_S max", "mean P_I", "P_I min", "P_I max"];
    let plot = Plot {
        title: "Signal and interference power".into(),
        x_label: "IRS density [1/m²]".into(),
        y_label: "power [W]".into(),
        x_log: true,
        y_log: true,
        series: names
            .iter()
            .zip(series)
            .enumerate()
            .map(|(k, (n, pts))| {
                let s = Series::new(*n, pts);
                if k % 3 == 0 { s } else { s.dashed() }
            })
            .collect(),
    };
    Ok((table, plot))
}

fn fig4(cfg: &Config, p: &ValidatedParams) -> Result<(Table, Plot), RunError> {
    let e = &cfg.experiment;
    let sweep = sweep_lambda_irs(p, &e.grid, e.trials, e.seed, e.threads)?;
    let ln2 = std::f64::consts::LN_2;
    let rows = sweep
        .iter()
        .map(|r| {
            let c = &r.stats.mean_cap;
            vec![fmt_f(r.lambda_irs), fmt_f(c.mean), fmt_f(c.half_width), fmt_f(c.mean / ln2), fmt_f(c.half_width / ln2)]
        })
        .collect();
    let mean: Vec<(f64, f64)> = sweep.iter().map(|r| (r.lambda_irs, r.stats.mean_cap.mean / ln2)).collect();
    let band = |sign: f64| -> Vec<(f64, f64)> {
        sweep.iter().map(|r| (r.lambda_irs, (r.stats.mean_cap.mean + sign * r.stats.mean_cap.half_width) / ln2)).collect()
    };
    let table = Table {
        comment: header_comment(cfg),
        columns: vec!["lambda_irs", "mean_cap_nats", "ci_cap_nats", "mean_cap_bits", "ci_cap_bits"],
        rows,
    };
    let plot = Plot {
        title: "Mean capacity".into(),
        x_label: "IRS density [1/m²]".into(),
        y_label: "capacity [bit/s/Hz]".into(),
        x_log: true,
        y_log: false,
        series: vec![Series::new("mean", mean), Series::new("95% lower", band(-1.0)).dashed(), Series::new("95% upper", band(1.0)).dashed()],
    };
    Ok((table, plot))
}

/// One (α, empirical, bound, τ*) set for a realized ensemble.
#[derive(Debug, Clone, PartialEq)]
pub struct OutagePoint {
    pub alpha: f64,
    pub prob: f64,
    pub lo: f64,
    pub hi: f64,
    pub bound: f64,
    pub tau_star: f64,
}

/// Outage bound at each α, with τ fixed by `bp.tau_s` or optimized per α.
pub fn outage_curve(q: &ValidatedParams, bp: &BoundParams, stats: &EnsembleStats) -> Result<Vec<OutagePoint>, RunError> {
    stats
        .outage
        .iter()
        .map(|tp| {
            let tau = match bp.tau_s {
                Some(t) => t,
                None => optimize_tau(TauTarget::Outage { alpha: tp.t }, q)?.tau,
            };
            let b = outage_bound(tp.t, tau, q)?;
            Ok(OutagePoint { alpha: tp.t, prob: tp.prob, lo: tp.lo, hi: tp.hi, bound: b.value, tau_star: tau })
        })
        .collect()
}

fn outage_sweep(cfg: &Config, p: &ValidatedParams, kappa: bool) -> Result<(Table, Plot), RunError> {
    let e = &cfg.experiment;
    let alphas = cfg.alphas();
    let mut rows = Vec::new();
    let mut series = Vec::new();
    for &g in &e.grid {
        let q = validate(if kappa { p.with_kappa(g) } else { p.with_lambda_irs(g) })?;
        let stats = EnsembleStats::from_samples(run_trials(&q, e.trials, e.seed, e.threads), &alphas);
        let curve = outage_curve(&q, &cfg.bound_params, &stats)?;
        for pt in &curve {
            rows.push(vec![
                fmt_f(g),
                fmt_f(pt.alpha),
                fmt_f(pt.prob),
                fmt_f(pt.lo),
                fmt_f(pt.hi),
                fmt_f(pt.bound),
                fmt_f(pt.tau_star),
            ]);
        }
        let label = if kappa { format!("κ={g}") } else { format!("λ_IRS={g:e}") };
        series.push(Series::new(format!("{label} MC"), curve.iter().map(|c| (c.alpha, c.prob)).collect()));
        series.push(Series::new(format!("{label} bound"), curve.iter().map(|c| (c.alpha, c.bound)).collect()).dashed());
    }
    let table = Table {
        comment: header_comment(cfg),
        columns: vec![if kappa { "kappa" } else { "lambda_irs" }, "alpha", "emp_pr_c_gt_alpha", "ci_lo", "ci_hi", "bound", "tau_star"],
        rows,
    };
    let plot = Plot {
        title: if kappa { "Outage vs Rician factor".into() } else { "Outage vs IRS density".into() },
        x_label: "α [nats]".into(),
        y_label: "Pr{C > α}".into(),
        x_log: true,
        y_log: true,
        series,
    };
    Ok((table, plot))
}
