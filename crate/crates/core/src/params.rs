//! Model parameters.
//!
//! [`SystemParams`] holds every scalar of the network model. It is plain data;
//! [`validate`] turns it into a [`ValidatedParams`], which is what the rest of
//! the crate accepts. In JSON the symbol power is written as the amplitude
//! `sigma_d` and stored internally as its square.

use serde::{Deserialize, Serialize};
use std::ops::Deref;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParamError {
    #[error("ViolatedInvariant({name}): {detail}")]
    ViolatedInvariant { name: &'static str, detail: String },
}

impl ParamError {
    fn new(name: &'static str, detail: impl Into<String>) -> Self {
        ParamError::ViolatedInvariant { name, detail: detail.into() }
    }

    /// Name of the failing constraint.
    pub fn name(&self) -> &'static str {
        match self {
            ParamError::ViolatedInvariant { name, .. } => name,
        }
    }
}

/// Every scalar parameter of the homogeneous network model.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(from = "RawSystemParams", into = "RawSystemParams")]
pub struct SystemParams {
    /// BS density [1/m²].
    pub lambda_bs: f64,
    /// User density [1/m²].
    pub lambda_u: f64,
    /// IRS density [1/m²].
    pub lambda_irs: f64,
    /// Coverage radius [m].
    pub r_co: f64,
    /// Elements per IRS.
    pub q_elems: u32,
    /// Rician factor; `f64::INFINITY` gives a purely specular channel.
    pub kappa: f64,
    /// Carrier wavelength [m].
    pub lambda_wave: f64,
    pub h_bs: f64,
    pub h_irs: f64,
    /// Main-lobe width: gain 1 when the direction cosine is at least `1 - epsilon`.
    pub epsilon: f64,
    /// Side-lobe gain.
    pub delta: f64,
    /// Blockage probability of a direct BS-user link.
    pub p_b: f64,
    /// Power attenuation of a blocked link.
    pub h_hat: f64,
    /// Symbol variance σ_d² [W].
    pub sigma_d_sq: f64,
    /// Noise power [W].
    pub n0: f64,
}

/// Wire format of [`SystemParams`]: same fields, but the symbol amplitude.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawSystemParams {
    lambda_bs: f64,
    lambda_u: f64,
    lambda_irs: f64,
    r_co: f64,
    q_elems: u32,
    kappa: f64,
    lambda_wave: f64,
    h_bs: f64,
    h_irs: f64,
    epsilon: f64,
    delta: f64,
    p_b: f64,
    h_hat: f64,
    sigma_d: f64,
    n0: f64,
}

impl From<RawSystemParams> for SystemParams {
    fn from(r: RawSystemParams) -> Self {
        SystemParams {
            lambda_bs: r.lambda_bs,
            lambda_u: r.lambda_u,
            lambda_irs: r.lambda_irs,
            r_co: r.r_co,
            q_elems: r.q_elems,
            kappa: r.kappa,
            lambda_wave: r.lambda_wave,
            h_bs: r.h_bs,
            h_irs: r.h_irs,
            epsilon: r.epsilon,
            delta: r.delta,
            p_b: r.p_b,
            h_hat: r.h_hat,
            // a negative amplitude is kept visible to validate() through the sign
            sigma_d_sq: r.sigma_d.signum() * r.sigma_d * r.sigma_d,
            n0: r.n0,
        }
    }
}

impl From<SystemParams> for RawSystemParams {
    fn from(p: SystemParams) -> Self {
        RawSystemParams {
            lambda_bs: p.lambda_bs,
            lambda_u: p.lambda_u,
            lambda_irs: p.lambda_irs,
            r_co: p.r_co,
            q_elems: p.q_elems,
            kappa: p.kappa,
            lambda_wave: p.lambda_wave,
            h_bs: p.h_bs,
            h_irs: p.h_irs,
            epsilon: p.epsilon,
            delta: p.delta,
            p_b: p.p_b,
            h_hat: p.h_hat,
            sigma_d: p.sigma_d_sq.signum() * p.sigma_d_sq.abs().sqrt(),
            n0: p.n0,
        }
    }
}

/// Noise power used by the default parameter sets [W].
///
/// No value is fixed by the model description. 0.1 W keeps the noise
/// dominant over the aggregate interference at the default densities, which
/// is the regime where capacity grows with IRS density.
pub const DEFAULT_N0: f64 = 0.1;

impl SystemParams {
    /// Reference deployment: 15 m coverage, 1 cm wavelength, Q = 1000.
    pub fn reference() -> Self {
        SystemParams {
            lambda_bs: 1e-3,
            lambda_u: 1e-2,
            lambda_irs: 1e-3,
            r_co: 15.0,
            q_elems: 1000,
            kappa: 1.0,
            lambda_wave: 0.01,
            h_bs: 10.0,
            h_irs: 11.0,
            epsilon: 0.01,
            delta: 0.01,
            p_b: 0.5,
            h_hat: 1e-4,
            sigma_d_sq: 1e6,
            n0: DEFAULT_N0,
        }
    }

    /// [`SystemParams::reference`] with Q = 50, the size used by the default experiments.
    pub fn desk() -> Self {
        SystemParams { q_elems: 50, ..Self::reference() }
    }

    pub fn with_lambda_irs(&self, lambda_irs: f64) -> Self {
        SystemParams { lambda_irs, ..self.clone() }
    }

    pub fn with_kappa(&self, kappa: f64) -> Self {
        SystemParams { kappa, ..self.clone() }
    }

    /// Sample standard deviation of a symbol, σ_d.
    pub fn sigma_d(&self) -> f64 {
        self.sigma_d_sq.sqrt()
    }
}

fn check(cond: bool, name: &'static str, detail: impl FnOnce() -> String) -> Result<(), ParamError> {
    if cond {
        Ok(())
    } else {
        Err(ParamError::new(name, detail()))
    }
}

fn density(v: f64, name: &'static str) -> Result<(), ParamError> {
    check(v.is_finite() && v >= 0.0, name, || format!("density must be finite and >= 0, got {v}"))
}

/// Checks every invariant and wraps the parameters on success.
///
/// Constraints are checked in field order and the first failure is reported.
pub fn validate(p: SystemParams) -> Result<ValidatedParams, ParamError> {
    density(p.lambda_bs, "lambda_bs")?;
    density(p.lambda_u, "lambda_u")?;
    density(p.lambda_irs, "lambda_irs")?;
    check(p.r_co.is_finite() && p.r_co > 0.0, "r_co", || format!("must be > 0, got {}", p.r_co))?;
    check(p.q_elems >= 1, "q_elems", || "must be >= 1".to_string())?;
    check(!p.kappa.is_nan() && p.kappa >= 0.0, "kappa", || format!("must be >= 0, got {}", p.kappa))?;
    check(p.lambda_wave.is_finite() && p.lambda_wave > 0.0, "lambda_wave", || {
        format!("must be > 0, got {}", p.lambda_wave)
    })?;
    check(p.h_bs.is_finite() && p.h_bs > 0.0, "h_bs", || format!("must be > 0, got {}", p.h_bs))?;
    check(p.h_irs.is_finite() && p.h_irs > 0.0, "h_irs", || format!("must be > 0, got {}", p.h_irs))?;
    check(p.h_bs != p.h_irs, "heights", || format!("h_bs and h_irs must differ, both are {}", p.h_bs))?;
    check(p.epsilon > 0.0 && p.epsilon < 1.0, "epsilon", || format!("must lie in (0,1), got {}", p.epsilon))?;
    check(p.delta > 0.0 && p.delta <= 1.0, "delta", || format!("must lie in (0,1], got {}", p.delta))?;
    check((0.0..=1.0).contains(&p.p_b), "p_b", || format!("must lie in [0,1], got {}", p.p_b))?;
    check(p.h_hat > 0.0 && p.h_hat < 1.0, "h_hat", || format!("must lie in (0,1), got {}", p.h_hat))?;
    check(p.sigma_d_sq.is_finite() && p.sigma_d_sq >= 0.0, "sigma_d_sq", || {
        format!("must be finite and >= 0, got {}", p.sigma_d_sq)
    })?;
    check(p.n0.is_finite() && p.n0 > 0.0, "n0", || format!("must be > 0, got {}", p.n0))?;
    Ok(ValidatedParams(p))
}

/// Parameters that passed [`validate`]. Dereferences to [`SystemParams`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "SystemParams", into = "SystemParams")]
pub struct ValidatedParams(SystemParams);

impl ValidatedParams {
    pub fn into_inner(self) -> SystemParams {
        self.0
    }

    pub fn as_params(&self) -> &SystemParams {
        &self.0
    }

    /// Height offset between BS and IRS, h_BS − h_IRS.
    pub fn dh(&self) -> f64 {
        self.0.h_bs - self.0.h_irs
    }
}

impl Deref for ValidatedParams {
    type Target = SystemParams;
    fn deref(&self) -> &SystemParams {
        &self.0
    }
}

impl TryFrom<SystemParams> for ValidatedParams {
    type Error = ParamError;
    fn try_from(p: SystemParams) -> Result<Self, ParamError> {
        validate(p)
    }
}

impl From<ValidatedParams> for SystemParams {
    fn from(v: ValidatedParams) -> Self {
        v.0
    }
}

/// Free radii and τ choices used by the interference lower bound and the tail bounds.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BoundParams {
    pub b: f64,
    pub d: f64,
    /// τ for the interference tail; `None` means optimize per threshold.
    #[serde(default)]
    pub tau_i: Option<f64>,
    /// τ for the signal tail; `None` means optimize per threshold.
    #[serde(default)]
    pub tau_s: Option<f64>,
}

impl Default for BoundParams {
    fn default() -> Self {
        BoundParams { b: 7.5, d: 3.0, tau_i: None, tau_s: None }
    }
}

impl BoundParams {
    /// Checks `0 < b < r_co` and `0 < d < r_co / 2`. τ values are checked where used.
    pub fn validate(&self, p: &SystemParams) -> Result<(), ParamError> {
        check(self.b > 0.0 && self.b < p.r_co, "b", || format!("must lie in (0, r_co={}), got {}", p.r_co, self.b))?;
        check(self.d > 0.0 && self.d < p.r_co / 2.0, "d", || {
            format!("must lie in (0, r_co/2={}), got {}", p.r_co / 2.0, self.d)
        })?;
        for (name, tau) in [("tau_i", self.tau_i), ("tau_s", self.tau_s)] {
            if let Some(t) = tau {
                check(t.is_finite() && t > 0.0, name, || format!("must be > 0, got {t}"))?;
            }
        }
        Ok(())
    }

    /// The area S entering the interference lower bound, taken from the lens-area expression.
    pub fn lens_area_s(&self, p: &SystemParams) -> Result<f64, crate::geometry::GeometryError> {
        crate::geometry::lens_area_formula(self.b, p.r_co)
    }
}
