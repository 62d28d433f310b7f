//! Closed-form bounds on the mean powers, their moments and tails, and the outage probability.
//!
//! Each bound is a sum of named blocks. Blocks are products of many factors,
//! some of them exponentials of large arguments, so every block is evaluated
//! as a signed logarithm and exponentiated once at the end. A block that does
//! not fit in an `f64` is reported as [`BoundError::NonFinite`] with its name.
//!
//! The constants K and L carry a `^{2p}` exponent on a product of
//! `max{1, ·}` factors although they are used as p-independent constants;
//! the exponent is evaluated as 2 ([`KL_EXPONENT_NOTE`]).

use crate::geometry::{lens_area_formula, GeometryError};
use crate::params::{BoundParams, SystemParams};
use num_complex::Complex64;
use std::f64::consts::PI;
use thiserror::Error;

/// Metadata flag describing how the exponent inside K and L is evaluated.
pub const KL_EXPONENT_NOTE: &str = "kl_max_factor_exponent=2";

#[derive(Debug, Clone, PartialEq, Error)]
pub enum BoundError {
    #[error("NonFinite: block `{0}` is not representable as a finite f64")]
    NonFinite(String),
    #[error("DomainError: {0}")]
    Domain(String),
    #[error("TauOutOfDomain: tau={tau} must lie in (0, {tau_max})")]
    TauOutOfDomain { tau: f64, tau_max: f64 },
}

impl From<GeometryError> for BoundError {
    fn from(e: GeometryError) -> Self {
        BoundError::Domain(e.to_string())
    }
}

// ------------------------------------------------------------------ signed logs

/// A real number stored as sign and log-magnitude.
#[derive(Debug, Clone, Copy, PartialEq)]
struct SLog {
    sign: f64,
    log: f64,
}

impl SLog {
    const ZERO: SLog = SLog { sign: 0.0, log: f64::NEG_INFINITY };
    const ONE: SLog = SLog { sign: 1.0, log: 0.0 };

    fn of(v: f64) -> SLog {
        if v == 0.0 {
            SLog::ZERO
        } else {
            SLog { sign: v.signum(), log: v.abs().ln() }
        }
    }

    /// e^a.
    fn exp(a: f64) -> SLog {
        SLog { sign: 1.0, log: a }
    }

    fn is_zero(self) -> bool {
        self.sign == 0.0
    }

    fn mul(self, o: SLog) -> SLog {
        if self.is_zero() || o.is_zero() {
            // 0·∞ stays undefined
            if self.log == f64::INFINITY || o.log == f64::INFINITY {
                return SLog { sign: f64::NAN, log: f64::NAN };
            }
            return SLog::ZERO;
        }
        SLog { sign: self.sign * o.sign, log: self.log + o.log }
    }

    fn times(self, v: f64) -> SLog {
        self.mul(SLog::of(v))
    }

    fn powi(self, k: i32) -> SLog {
        if self.is_zero() {
            return SLog::ZERO;
        }
        SLog { sign: if k % 2 == 0 { 1.0 } else { self.sign }, log: self.log * k as f64 }
    }

    fn add(self, o: SLog) -> SLog {
        if self.is_zero() {
            return o;
        }
        if o.is_zero() {
            return self;
        }
        let (big, small) = if self.log >= o.log { (self, o) } else { (o, self) };
        if big.log == f64::INFINITY {
            if small.log == f64::INFINITY && small.sign != big.sign {
                return SLog { sign: f64::NAN, log: f64::NAN };
            }
            return big;
        }
        let r = (small.log - big.log).exp();
        if big.sign == small.sign {
            SLog { sign: big.sign, log: big.log + r.ln_1p() }
        } else if r == 1.0 {
            SLog::ZERO
        } else {
            SLog { sign: big.sign, log: big.log + (-r).ln_1p() }
        }
    }

    fn sub(self, o: SLog) -> SLog {
        self.add(SLog { sign: -o.sign, log: o.log })
    }

    fn value(self, name: &str) -> Result<f64, BoundError> {
        if self.sign.is_nan() || self.log.is_nan() {
            return Err(BoundError::NonFinite(name.to_string()));
        }
        if self.is_zero() {
            return Ok(0.0);
        }
        let v = self.sign * self.log.exp();
        if v.is_finite() {
            Ok(v)
        } else {
            Err(BoundError::NonFinite(name.to_string()))
        }
    }
}

fn sum(terms: &[SLog]) -> SLog {
    terms.iter().fold(SLog::ZERO, |a, &b| a.add(b))
}

fn prod(factors: &[f64]) -> SLog {
    factors.iter().fold(SLog::ONE, |a, &v| a.times(v))
}

// ------------------------------------------------------------------ shared pieces

/// 1 − e^{−m}.
fn one_minus_exp(m: f64) -> f64 {
    -(-m).exp_m1()
}

/// m + e^{−m} − 1, accurate for small m.
fn poisson_excess(m: f64) -> f64 {
    if m.abs() < 1e-3 {
        m * m / 2.0 - m * m * m / 6.0 + m * m * m * m / 24.0
    } else {
        m + (-m).exp_m1()
    }
}

/// κ/(κ+1), equal to 1 at κ = ∞.
fn specular_fraction(kappa: f64) -> f64 {
    1.0 / (1.0 + 1.0 / kappa)
}

/// Quantities shared by several bounds.
struct Common {
    r: f64,
    q: f64,
    s2: f64,
    lw: f64,
    dh: f64,
    /// λ_IRS π R².
    a: f64,
    /// λ_IRS π (2R)².
    x: f64,
    /// λ_IRS (2R)².
    y: f64,
    /// Average blockage factor 1 + (ĥ − 1) p_b.
    blk: f64,
    /// 1 − exp(−λ_BS π R²).
    e_bs: f64,
    /// λ_U π R².
    mu: f64,
    /// 1 − exp(−λ_U π R²).
    e_u: f64,
    /// λ_U π R² + exp(−λ_U π R²) − 1.
    ex_u: f64,
}

impl Common {
    fn new(p: &SystemParams) -> Common {
        let r = p.r_co;
        let mu = p.lambda_u * PI * r * r;
        Common {
            r,
            q: p.q_elems as f64,
            s2: p.sigma_d_sq,
            lw: p.lambda_wave,
            dh: p.h_bs - p.h_irs,
            a: p.lambda_irs * PI * r * r,
            x: p.lambda_irs * PI * 4.0 * r * r,
            y: p.lambda_irs * 4.0 * r * r,
            blk: 1.0 + (p.h_hat - 1.0) * p.p_b,
            e_bs: one_minus_exp(p.lambda_bs * PI * r * r),
            mu,
            e_u: one_minus_exp(mu),
            ex_u: poisson_excess(mu),
        }
    }

    /// z^k · exp(c / z) for the IRS-count moment factors.
    fn pow_exp(z: f64, k: i32, c: f64) -> SLog {
        SLog::of(z).powi(k).mul(SLog::exp(c / z))
    }

    /// √((2R)²/((h_IRS² + (2R)²) h_IRS²)) · √((3R)²/((Δh² + (3R)²) Δh²)).
    fn sqrt_geometry(&self, p: &SystemParams) -> f64 {
        let (r2, r3) = (2.0 * self.r, 3.0 * self.r);
        let hi = p.h_irs;
        let dh = self.dh;
        (r2 * r2 / ((hi * hi + r2 * r2) * hi * hi)).sqrt() * (r3 * r3 / ((dh * dh + r3 * r3) * dh * dh)).sqrt()
    }
}

// ------------------------------------------------------------------ breakdowns

/// One named additive block of a bound.
#[derive(Debug, Clone, PartialEq)]
pub struct Term {
    pub name: &'static str,
    pub value: f64,
}

/// A bound split into its BS-caused and IRS-caused parts, with every block listed.
#[derive(Debug, Clone, PartialEq)]
pub struct BoundBreakdown {
    pub total: f64,
    pub bs_part: f64,
    pub irs_part: f64,
    pub terms: Vec<Term>,
}

impl BoundBreakdown {
    fn assemble(bs: Vec<(&'static str, SLog)>, irs: Vec<(&'static str, SLog)>) -> Result<Self, BoundError> {
        let mut terms = Vec::new();
        let mut part = |blocks: Vec<(&'static str, SLog)>| -> Result<f64, BoundError> {
            let mut s = 0.0;
            for (name, v) in blocks {
                let value = v.value(name)?;
                terms.push(Term { name, value });
                s += value;
            }
            Ok(s)
        };
        let bs_part = part(bs)?;
        let irs_part = part(irs)?;
        let total = bs_part + irs_part;
        if !total.is_finite() {
            return Err(BoundError::NonFinite("total".into()));
        }
        Ok(BoundBreakdown { total, bs_part, irs_part, terms })
    }

    pub fn term(&self, name: &str) -> Option<f64> {
        self.terms.iter().find(|t| t.name == name).map(|t| t.value)
    }
}

/// Upper bound on the mean desired-signal power.
pub fn ps_max(p: &SystemParams) -> Result<BoundBreakdown, BoundError> {
    let c = Common::new(p);
    let (r, x, y, dh, q, lw4) = (c.r, c.x, c.y, c.dh, c.q, c.lw.powi(4));
    let lobe = ((1.0 - p.delta) * (1.0 - p.epsilon).acos() + p.delta * PI) / PI;
    let bs = SLog::of(1.0 + (3.0 * c.a + c.a * c.a) * lobe).mul(prod(&[
        c.blk,
        c.lw * c.lw,
        c.s2,
        1.0 / (r * r * (4.0 * PI).powi(2)),
        (r / p.h_bs).powi(2).ln_1p(),
        c.e_bs,
    ]));

    let fp4 = (4.0 * PI).powi(4);
    let moderate = sum(&[SLog::of((3.0 * x + x * x) / fp4), Common::pow_exp(x, 3, 4.5).times(1.0 / fp4)]).mul(prod(&[
        3.0 * q,
        lw4,
        c.e_bs,
        c.s2,
        1.0 / (4.0 * (dh * dh + 9.0 * r * r) * (p.h_irs * p.h_irs + 4.0 * r * r)).sqrt(),
        1.0 / (dh.abs() * p.h_irs),
    ]));

    let den = 4f64.powi(8) * PI * PI * r.powi(4);
    let coherent = sum(&[Common::pow_exp(x, 4, 8.0), Common::pow_exp(x, 3, 4.5), SLog::of(-(x * x + 2.0 * x))])
        .times(1.0 / den)
        .mul(prod(&[
            c.e_bs,
            q * (q - 1.0),
            lw4,
            specular_fraction(p.kappa),
            (3.0 * r / dh).powi(2).ln_1p(),
            (2.0 * r / p.h_irs).powi(2).ln_1p(),
            c.s2,
        ]));

    let cross = prod(&[c.e_bs, q, lw4, c.s2, 1.0 / (4f64.powi(5) * PI.powi(4) * r * r), c.sqrt_geometry(p)]).mul(sum(&[
        SLog::of(3.0 * y + 2.0 * y * y),
        Common::pow_exp(y, 3, 4.5),
    ]));

    BoundBreakdown::assemble(
        vec![("ps_max.bs", bs)],
        vec![("ps_max.irs.incoherent", moderate), ("ps_max.irs.coherent", coherent), ("ps_max.irs.cross", cross)],
    )
}

/// Lower bound on the mean desired-signal power.
pub fn ps_min(p: &SystemParams) -> Result<BoundBreakdown, BoundError> {
    let c = Common::new(p);
    let r = c.r;
    let bs = prod(&[c.e_bs, c.lw * c.lw, c.blk, c.s2, 1.0 / ((4.0 * PI).powi(2) * r * r), (r / p.h_bs).powi(2).ln_1p()]);
    let mh = (c.dh * c.dh).max(p.h_irs * p.h_irs);
    let den = p.lambda_u * r * r * c.e_u;
    let em = (-c.mu).exp();
    let inv_w = SLog::of((1.0 - c.mu * em) / den).sub(SLog::of(em / den));
    let irs = prod(&[
        p.lambda_irs,
        c.e_bs,
        p.delta * p.delta,
        c.q,
        c.lw.powi(4),
        c.s2,
        1.0 / (4.0 * PI).powi(4),
        r * r / (mh + 3.0 * r * r),
        1.0 / (mh + 4.0 * r * r),
    ])
    .mul(inv_w);
    BoundBreakdown::assemble(vec![("ps_min.bs", bs)], vec![("ps_min.irs", irs)])
}

/// Upper bound on the mean interference power.
pub fn pi_max(p: &SystemParams) -> Result<BoundBreakdown, BoundError> {
    let c = Common::new(p);
    let (r, x, q, lw4) = (c.r, c.x, c.q, c.lw.powi(4));
    let bs = prod(&[
        p.lambda_bs,
        1.0 + 3.0 * c.a + c.a * c.a,
        c.blk,
        c.lw * c.lw,
        c.s2,
        1.0 / (c.e_u * 16.0 * PI),
        c.ex_u,
        (r / p.h_bs).powi(2).ln_1p(),
    ]);

    let sq = c.sqrt_geometry(p);
    let ll = PI * (2.0 * r / p.h_irs).powi(2).ln_1p() * (3.0 * r / c.dh).powi(2).ln_1p();
    let r2 = 4.0 * r * r;
    let r4 = 4.0 * r.powi(4);
    let bracket = sum(&[
        Common::pow_exp(x, 3, 4.5).times(sq / r2),
        SLog::of((2.0 * x * x + 3.0 * x) / r2 * sq),
        Common::pow_exp(x, 4, 8.0).times(ll / r4),
        Common::pow_exp(x, 3, 4.5).times(ll / r4),
        SLog::of(-(x * x + 2.0 * x) / r4 * ll),
    ]);
    let via_users = prod(&[lw4, c.ex_u, q * q, c.e_bs, c.s2, 1.0 / (c.e_u * (4.0 * PI).powi(4))]).mul(bracket);

    let via_bs = prod(&[
        c.ex_u,
        p.lambda_bs,
        1.0 / (4f64.powi(5) * PI.powi(3) * c.e_u),
        q * lw4 * c.s2 / (r * r),
        (r / c.dh).powi(2).ln_1p(),
        (2.0 * r / p.h_irs).powi(2).ln_1p(),
    ])
    .mul(sum(&[Common::pow_exp(x, 3, 4.5), SLog::of(2.0 * x * x + 3.0 * x)]));

    BoundBreakdown::assemble(
        vec![("pi_max.bs", bs)],
        vec![("pi_max.irs.users", via_users), ("pi_max.irs.bs_density", via_bs)],
    )
}

/// (λ_U S + e^{−λ_U S} − 1)/(1 − e^{−λ_U S}), the user-count factor of the interference lower bound.
fn lens_user_factor(lambda_u: f64, s: f64) -> f64 {
    let m = lambda_u * s;
    poisson_excess(m) / one_minus_exp(m)
}

/// Lower bound on the mean interference power for radii `b` and `d`.
///
/// The area S is bound to [`lens_area_formula`]`(b, r_co)`. That expression is
/// negative for mid-range `b` (for example b = 7.5, R = 15), which makes the
/// blocks that carry S negative as well; the value is reported as evaluated.
pub fn pi_min(p: &SystemParams, bp: &BoundParams) -> Result<BoundBreakdown, BoundError> {
    bp.validate(p).map_err(|e| BoundError::Domain(e.to_string()))?;
    let c = Common::new(p);
    let (r, b, d, q, lw4) = (c.r, bp.b, bp.d, c.q, c.lw.powi(4));
    let s = lens_area_formula(b, r)?;
    let us = lens_user_factor(p.lambda_u, s);
    let area = 4.0 * r * r - b * b;
    let e_far = one_minus_exp(p.lambda_bs * PI * area);
    let e_near = one_minus_exp(p.lambda_bs * PI * b * b);
    let d2 = p.delta * p.delta;

    let bs = prod(&[
        e_far,
        d2,
        c.s2,
        e_near,
        c.blk,
        c.lw * c.lw,
        1.0 / (p.lambda_bs * PI * area * (4.0 * PI).powi(2) * (p.h_bs * p.h_bs + r * r)),
        us,
    ]);

    let mh = (p.h_irs * p.h_irs).max(c.dh * c.dh);
    let lu = p.lambda_u;
    let guard1 = (lu * PI * (r / 2.0 - d).powi(2) + (-lu * PI * (r / 2.0 + d).powi(2)).exp() - 1.0).max(0.0);
    let e3 = (-lu * PI * 3.0 * r * r).exp();
    let guard2 = ((1.0 - e3 - lu * PI * 4.0 * r * r * e3) / (lu * PI * 4.0 * r * r).powi(2)).max(0.0);
    let pair = prod(&[
        specular_fraction(p.kappa),
        c.e_bs,
        q * (q - 1.0),
        c.a * c.a,
        lw4,
        d2,
        c.s2,
        1.0 / (4f64.powi(6) * PI * PI * r.powi(4)),
        guard1,
        2.0 * d * one_minus_exp(p.lambda_bs * 3.0 * PI * r * r),
        1.0 / (one_minus_exp(lu * PI * (r / 2.0 + d).powi(2)) * p.lambda_bs * 3.0 * PI * r.powi(3)),
        guard2,
        ((mh + 4.0 * r * r) / (mh + 3.0 * r * r)).ln().powi(2),
    ]);

    let single = prod(&[
        us,
        (b / p.h_irs).powi(2).ln_1p(),
        q,
        lw4,
        d2,
        p.lambda_irs,
        e_far,
        e_near,
        c.s2,
        1.0 / (p.lambda_bs * PI * area * 4f64.powi(4) * PI.powi(3) * (c.dh * c.dh + r * r)),
    ]);

    BoundBreakdown::assemble(vec![("pi_min.bs", bs)], vec![("pi_min.irs.pair", pair), ("pi_min.irs.single", single)])
}

// ------------------------------------------------------------------ moment constants

fn kl_common(p: &SystemParams) -> SLog {
    let r = p.r_co;
    let m = |h: f64| (p.lambda_wave / (4.0 * PI * h)).max(1.0);
    let heights = m(p.h_bs) * m((p.h_bs - p.h_irs).abs()) * m(p.h_irs);
    let area = 4.0 * PI * r * r;
    let irs = (8.0 * (1.0 / (1.0 / (p.lambda_irs * area)).ln_1p()).max(1.0)).powi(4);
    let bs = (2.0 / (1.0 / (p.lambda_bs * area)).ln_1p()).powi(2);
    prod(&[
        (p.q_elems as f64).powi(2),
        64.0,
        p.sigma_d_sq,
        heights * heights,
        2f64.powi(11) * PI.powi(5) * 3f64.powf(1.5) * (35.0f64 / 12.0).exp(),
        18.0 / 3f64.exp(),
        irs,
        bs,
    ])
}

/// Constant K of the interference-power moment bound (E{ℙ(𝕀)^p})^{1/p} ≤ K p¹¹.
pub fn k_coef(p: &SystemParams) -> Result<f64, BoundError> {
    let area = 4.0 * PI * p.r_co * p.r_co;
    let users = (2.0 / (1.0 / (p.lambda_u * area)).ln_1p()).powi(2);
    kl_common(p).times(1.0 / one_minus_exp(p.lambda_u * area)).times(users).value("k_coef")
}

/// Constant L of the signal-power moment bound (E{ℙ(𝕊)^p})^{1/p} ≤ L p⁹.
pub fn l_coef(p: &SystemParams) -> Result<f64, BoundError> {
    kl_common(p).value("l_coef")
}

pub fn tau_max_i(p: &SystemParams) -> Result<f64, BoundError> {
    let k = k_coef(p)?;
    SLog::exp(11.0 * 11f64.ln() - 11.0).times(1.0 / k).value("tau_max_i")
}

pub fn tau_max_s(p: &SystemParams) -> Result<f64, BoundError> {
    let l = l_coef(p)?;
    SLog::exp(9.0 * 9f64.ln() - 9.0).times(1.0 / l).value("tau_max_s")
}

// ------------------------------------------------------------------ root-of-unity functions

/// Σ_p x^p / (n p)!, summed until terms stop contributing.
pub fn root_series(x: f64, n: u32) -> f64 {
    let mut total = 1.0;
    let mut term = 1.0;
    let mut p = 0u64;
    loop {
        p += 1;
        let mut t = term * x;
        for i in (n as u64 * (p - 1) + 1)..=(n as u64 * p) {
            t /= i as f64;
        }
        term = t;
        total += term;
        if term <= total * 1e-18 || p > 100_000 {
            return total;
        }
    }
}

/// (1/n) Σ_k exp(x^{1/n} e^{j2πk/n}) as a complex number; real in exact arithmetic.
pub fn root_closed_form(x: f64, n: u32) -> Complex64 {
    let r = x.powf(1.0 / n as f64);
    let s: Complex64 =
        (0..n).map(|k| (Complex64::from_polar(r, 2.0 * PI * k as f64 / n as f64)).exp()).sum();
    s / n as f64
}

/// ln of the closed form, stable for large arguments.
pub fn ln_root_fn(x: f64, n: u32) -> f64 {
    if x == f64::INFINITY {
        return f64::INFINITY;
    }
    let r = x.powf(1.0 / n as f64);
    // factor out e^r: every other root contributes exp(r(ω−1)) with Re(ω−1) < 0
    let s: f64 = (0..n).map(|k| (Complex64::from_polar(r, 2.0 * PI * k as f64 / n as f64) - r).exp().re).sum();
    r + (s / n as f64).ln()
}

fn root_fn(x: f64, n: u32) -> Result<f64, BoundError> {
    if !(x >= 0.0) {
        return Err(BoundError::Domain(format!("argument must be >= 0, got {x}")));
    }
    Ok(root_closed_form(x, n).re)
}

/// 𝔾(x) = Σ x^p/(11p)!, via the 11th-roots-of-unity closed form.
pub fn g_fn(x: f64) -> Result<f64, BoundError> {
    root_fn(x, 11)
}

/// ℍ(x) = Σ x^p/(9p)!, via the 9th-roots-of-unity closed form.
pub fn h_fn(x: f64) -> Result<f64, BoundError> {
    root_fn(x, 9)
}

// ------------------------------------------------------------------ tails and outage

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TailKind {
    /// Interference power, 𝔾 and K.
    Interference,
    /// Desired-signal power, ℍ and L.
    Signal,
}

impl TailKind {
    fn order(self) -> u32 {
        match self {
            TailKind::Interference => 11,
            TailKind::Signal => 9,
        }
    }

    pub fn tau_max(self, p: &SystemParams) -> Result<f64, BoundError> {
        match self {
            TailKind::Interference => tau_max_i(p),
            TailKind::Signal => tau_max_s(p),
        }
    }
}

/// ln of the unclamped tail ratio 1/((1 − τ/τ_max)·F(τ t)) at u = τ/τ_max.
fn ln_tail(kind: TailKind, u: f64, tau: f64, t: f64) -> f64 {
    -(-u).ln_1p() - ln_root_fn(tau * t, kind.order())
}

fn check_tau(tau: f64, tau_max: f64) -> Result<(), BoundError> {
    if tau > 0.0 && tau < tau_max {
        Ok(())
    } else {
        Err(BoundError::TauOutOfDomain { tau, tau_max })
    }
}

/// The tail ratio before clamping; can exceed 1.
pub fn tail_bound_unclamped(kind: TailKind, t: f64, tau: f64, p: &SystemParams) -> Result<f64, BoundError> {
    if !(t >= 0.0) {
        return Err(BoundError::Domain(format!("threshold must be >= 0, got {t}")));
    }
    let tau_max = kind.tau_max(p)?;
    check_tau(tau, tau_max)?;
    Ok(ln_tail(kind, tau / tau_max, tau, t).exp())
}

/// Bound on Pr{ℙ(𝕀) > t}, clamped to at most 1.
pub fn tail_bound_i(t: f64, tau: f64, p: &SystemParams) -> Result<f64, BoundError> {
    tail_bound_unclamped(TailKind::Interference, t, tau, p).map(|v| v.min(1.0))
}

/// Bound on Pr{ℙ(𝕊) > t}, clamped to at most 1.
pub fn tail_bound_s(t: f64, tau: f64, p: &SystemParams) -> Result<f64, BoundError> {
    tail_bound_unclamped(TailKind::Signal, t, tau, p).map(|v| v.min(1.0))
}

/// The outage bound and the two candidate terms it is the minimum of.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OutageBound {
    pub value: f64,
    /// P^𝕊_max / (N₀(e^α − 1)).
    pub markov: f64,
    /// Signal tail bound at t = N₀(e^α − 1).
    pub tail: f64,
}

/// Signal-power threshold N₀(e^α − 1) equivalent to capacity α.
pub fn outage_threshold(alpha: f64, p: &SystemParams) -> f64 {
    p.n0 * alpha.exp_m1()
}

/// Bound on Pr{ℂ > α}.
pub fn outage_bound(alpha: f64, tau: f64, p: &SystemParams) -> Result<OutageBound, BoundError> {
    if !(alpha > 0.0) {
        return Err(BoundError::Domain(format!("alpha must be > 0, got {alpha}")));
    }
    let t = outage_threshold(alpha, p);
    let markov = ps_max(p)?.total / t;
    let tail = tail_bound_s(t, tau, p)?;
    Ok(OutageBound { value: 1f64.min(markov).min(tail), markov, tail })
}

/// What [`optimize_tau`] minimizes.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum TauTarget {
    InterferenceTail { t: f64 },
    SignalTail { t: f64 },
    Outage { alpha: f64 },
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TauChoice {
    pub tau: f64,
    /// Clamped bound at `tau`.
    pub bound: f64,
    /// True when the bound was flat and the midpoint was returned.
    pub flat: bool,
}

/// Minimizes a tail (or outage) bound over τ in its open domain.
///
/// τ = τ_max·u with u = 1/(1 + e^{−z}); a grid in z brackets the minimum of the
/// log bound and golden-section search refines it. If the clamped bound is 1
/// across the whole grid, the midpoint τ_max/2 is returned.
pub fn optimize_tau(target: TauTarget, p: &SystemParams) -> Result<TauChoice, BoundError> {
    let (kind, t) = match target {
        TauTarget::InterferenceTail { t } => (TailKind::Interference, t),
        TauTarget::SignalTail { t } => (TailKind::Signal, t),
        TauTarget::Outage { alpha } => (TailKind::Signal, outage_threshold(alpha, p)),
    };
    if !(t > 0.0) {
        return Err(BoundError::Domain(format!("target must be > 0, got {t}")));
    }
    let tau_max = kind.tau_max(p)?;
    let u_of = |z: f64| 1.0 / (1.0 + (-z).exp());
    let f = |z: f64| {
        let u = u_of(z);
        ln_tail(kind, u, tau_max * u, t)
    };
    const Z_LO: f64 = -36.0;
    const Z_HI: f64 = 36.0;
    const N: usize = 289;
    let zs: Vec<f64> = (0..N).map(|i| Z_LO + (Z_HI - Z_LO) * i as f64 / (N - 1) as f64).collect();
    let fs: Vec<f64> = zs.iter().map(|&z| f(z)).collect();
    let (best, &fbest) = fs.iter().enumerate().min_by(|a, b| a.1.total_cmp(b.1)).expect("grid is nonempty");

    let outcome = |z: f64, flat: bool| {
        let u = u_of(z);
        // |z| <= 36 keeps u within [2e-16, 1 - 2e-16], so tau stays strictly inside the domain
        let tau = tau_max * u;
        let bound = if flat { 1.0 } else { ln_tail(kind, tau / tau_max, tau, t).exp().min(1.0) };
        TauChoice { tau, bound, flat }
    };
    if fbest >= 0.0 {
        return Ok(outcome(0.0, true));
    }
    let mut a = zs[best.saturating_sub(1)];
    let mut b = zs[(best + 1).min(N - 1)];
    let g = (5f64.sqrt() - 1.0) / 2.0;
    let mut c = b - g * (b - a);
    let mut d = a + g * (b - a);
    let (mut fc, mut fd) = (f(c), f(d));
    for _ in 0..200 {
        if (b - a).abs() < 1e-13 * (1.0 + a.abs()) {
            break;
        }
        if fc < fd {
            b = d;
            d = c;
            fd = fc;
            c = b - g * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + g * (b - a);
            fd = f(d);
        }
    }
    let z = if fc < fd { c } else { d };
    let z = if f(z) <= fbest { z } else { zs[best] };
    Ok(outcome(z, false))
}

// ------------------------------------------------------------------ bound set

/// Every closed form evaluated for one parameter point.
#[derive(Debug, Clone, PartialEq)]
pub struct BoundSet {
    pub ps_max: BoundBreakdown,
    pub ps_min: BoundBreakdown,
    pub pi_max: BoundBreakdown,
    pub pi_min: BoundBreakdown,
    pub k_coef: f64,
    pub l_coef: f64,
    pub tau_max_i: f64,
    pub tau_max_s: f64,
    /// Area bound to S in the interference lower bound.
    pub lens_area_s: f64,
    /// Consistency problems found while evaluating, such as a lower bound above its upper bound.
    pub findings: Vec<String>,
}

impl BoundSet {
    pub fn evaluate(p: &SystemParams, bp: &BoundParams) -> Result<BoundSet, BoundError> {
        let set = BoundSet {
            ps_max: ps_max(p)?,
            ps_min: ps_min(p)?,
            pi_max: pi_max(p)?,
            pi_min: pi_min(p, bp)?,
            k_coef: k_coef(p)?,
            l_coef: l_coef(p)?,
            tau_max_i: tau_max_i(p)?,
            tau_max_s: tau_max_s(p)?,
            lens_area_s: lens_area_formula(bp.b, p.r_co)?,
            findings: Vec::new(),
        };
        let mut findings = Vec::new();
        if set.ps_min.total > set.ps_max.total {
            findings.push(format!("ps_min {} exceeds ps_max {}", set.ps_min.total, set.ps_max.total));
        }
        if set.pi_min.total > set.pi_max.total {
            findings.push(format!("pi_min {} exceeds pi_max {}", set.pi_min.total, set.pi_max.total));
        }
        for b in [&set.ps_max, &set.ps_min, &set.pi_max, &set.pi_min] {
            for t in &b.terms {
                if t.value < 0.0 {
                    findings.push(format!("block {} is negative ({})", t.name, t.value));
                }
            }
        }
        if set.lens_area_s < 0.0 {
            findings.push(format!("lens area S = {} is negative", set.lens_area_s));
        }
        for f in &findings {
            log::warn!("{f}");
        }
        Ok(BoundSet { findings, ..set })
    }
}

/// Secant slope of ln f against ln λ_IRS between `lo` and `hi`.
pub fn loglog_slope(
    p: &SystemParams,
    lo: f64,
    hi: f64,
    f: impl Fn(&SystemParams) -> Result<f64, BoundError>,
) -> Result<f64, BoundError> {
    let a = f(&p.with_lambda_irs(lo))?;
    let b = f(&p.with_lambda_irs(hi))?;
    Ok((b.ln() - a.ln()) / (hi.ln() - lo.ln()))
}
