//! Second, independent transcription of the closed-form bounds.
//!
//! Plain f64 arithmetic, written term by term from the closed-form expressions and
//! sharing no code with the library. Only valid where nothing overflows.
#![allow(dead_code)]

use irsnet_core::params::SystemParams;
use std::f64::consts::PI;

pub struct Sym {
    pub lbs: f64,
    pub lu: f64,
    pub li: f64,
    pub r: f64,
    pub q: f64,
    pub k: f64,
    pub lw: f64,
    pub hb: f64,
    pub hi: f64,
    pub eps: f64,
    pub dl: f64,
    pub pb: f64,
    pub hh: f64,
    pub s2: f64,
}

impl Sym {
    pub fn of(p: &SystemParams) -> Sym {
        Sym {
            lbs: p.lambda_bs,
            lu: p.lambda_u,
            li: p.lambda_irs,
            r: p.r_co,
            q: p.q_elems as f64,
            k: p.kappa,
            lw: p.lambda_wave,
            hb: p.h_bs,
            hi: p.h_irs,
            eps: p.epsilon,
            dl: p.delta,
            pb: p.p_b,
            hh: p.h_hat,
            s2: p.sigma_d_sq,
        }
    }
}

/// (total, bs, irs)
pub fn ps_max(p: &SystemParams) -> (f64, f64, f64) {
    let Sym { lbs, li, r, q, k, lw, hb, hi, eps, dl, pb, hh, s2, .. } = Sym::of(p);
    let a = li * PI * r * r;
    let bl = 1.0 + (hh - 1.0) * pb;
    let ebs = 1.0 - (-lbs * PI * r * r).exp();
    let bs = (PI + (3.0 * a + a * a) * ((1.0 - dl) * (1.0 - eps).acos() + dl * PI)) / PI * bl * lw * lw * s2
        / (r * r * (4.0 * PI).powi(2))
        * (1.0 + (r / hb).powi(2)).ln()
        * ebs;
    let x = li * PI * (2.0 * r).powi(2);
    let dh = hb - hi;
    let t1 = ((3.0 * x + x * x) / (4.0 * PI).powi(4) + x.powi(3) * (9.0 / (2.0 * x)).exp() / (4.0 * PI).powi(4))
        * 3.0
        * q
        * lw.powi(4)
        * ebs
        * s2
        / (4.0 * (dh * dh + 9.0 * r * r) * (hi * hi + 4.0 * r * r)).sqrt()
        / (dh.abs() * hi);
    let den = 4f64.powi(8) * PI * PI * r.powi(4);
    let t2 = (x.powi(4) * (16.0 / (2.0 * x)).exp() / den + x.powi(3) * (9.0 / (2.0 * x)).exp() / den
        - (x * x + 2.0 * x) / den)
        * ebs
        * q
        * (q - 1.0)
        * lw.powi(4)
        * (k / (k + 1.0))
        * (1.0 + (3.0 * r / dh).powi(2)).ln()
        * (1.0 + (2.0 * r / hi).powi(2)).ln()
        * s2;
    let y = li * (2.0 * r).powi(2);
    let t3 = ebs * q * lw.powi(4) * s2 / (4f64.powi(5) * PI.powi(4) * r * r)
        * ((2.0 * r).powi(2) / ((hi * hi + (2.0 * r).powi(2)) * hi * hi)).sqrt()
        * ((3.0 * r).powi(2) / ((dh * dh + (3.0 * r).powi(2)) * dh * dh)).sqrt()
        * (3.0 * y + 2.0 * y * y + y.powi(3) * (9.0 / (2.0 * y)).exp());
    (bs + t1 + t2 + t3, bs, t1 + t2 + t3)
}

pub fn ps_min(p: &SystemParams) -> (f64, f64, f64) {
    let Sym { lbs, lu, li, r, q, lw, hb, hi, dl, pb, hh, s2, .. } = Sym::of(p);
    let bl = 1.0 + (hh - 1.0) * pb;
    let ebs = 1.0 - (-lbs * PI * r * r).exp();
    let mu = lu * PI * r * r;
    let eu = 1.0 - (-mu).exp();
    let bs = ebs * lw * lw * bl * s2 / ((4.0 * PI).powi(2) * r * r) * (1.0 + (r / hb).powi(2)).ln();
    let mh = ((hb - hi) * (hb - hi)).max(hi * hi);
    let irs = li * ebs * dl * dl * q * lw.powi(4) * s2 / (4.0 * PI).powi(4)
        * ((1.0 - mu * (-mu).exp()) / (lu * r * r * eu) - (-mu).exp() / (lu * r * r * eu))
        * r
        * r
        / (mh + 3.0 * r * r)
        / (mh + 4.0 * r * r);
    (bs + irs, bs, irs)
}

pub fn pi_max(p: &SystemParams) -> (f64, f64, f64) {
    let Sym { lbs, lu, li, r, q, lw, hb, hi, pb, hh, s2, .. } = Sym::of(p);
    let a = li * PI * r * r;
    let bl = 1.0 + (hh - 1.0) * pb;
    let ebs = 1.0 - (-lbs * PI * r * r).exp();
    let mu = lu * PI * r * r;
    let eu = 1.0 - (-mu).exp();
    let uf = mu + (-mu).exp() - 1.0;
    let bs = lbs * (1.0 + 3.0 * a + a * a) * bl * lw * lw * s2 / (eu * 16.0 * PI) * uf * (1.0 + (r / hb).powi(2)).ln();
    let x = li * PI * (2.0 * r).powi(2);
    let dh = hb - hi;
    let sq = ((2.0 * r).powi(2) / ((hi * hi + (2.0 * r).powi(2)) * hi * hi)).sqrt()
        * ((3.0 * r).powi(2) / ((dh * dh + (3.0 * r).powi(2)) * dh * dh)).sqrt();
    let ll = PI * (1.0 + (2.0 * r / hi).powi(2)).ln() * (1.0 + (3.0 * r / dh).powi(2)).ln();
    let e9 = (9.0 / (2.0 * x)).exp();
    let e16 = (16.0 / (2.0 * x)).exp();
    let irs1 = lw.powi(4) * uf * q * q * ebs * s2 / (eu * (4.0 * PI).powi(4))
        * (x.powi(3) * e9 / (4.0 * r * r) * sq + (2.0 * x * x + 3.0 * x) / (4.0 * r * r) * sq
            + x.powi(4) * e16 / (4.0 * r.powi(4)) * ll
            + x.powi(3) * e9 / (4.0 * r.powi(4)) * ll
            - (x * x + 2.0 * x) / (4.0 * r.powi(4)) * ll);
    let irs2 = uf * lbs / (4f64.powi(5) * PI.powi(3) * eu) * q * lw.powi(4) * s2 / (r * r)
        * (1.0 + (r / dh).powi(2)).ln()
        * (1.0 + (2.0 * r / hi).powi(2)).ln()
        * (x.powi(3) * e9 + 2.0 * x * x + 3.0 * x);
    (bs + irs1 + irs2, bs, irs1 + irs2)
}

/// Lens-area expression, written out independently.
pub fn lens(b: f64, r: f64) -> f64 {
    let t = (b / (2.0 * r)).asin();
    (2.0 * r * r / PI - b * b / PI) * t - r * r / 2.0 * (4.0 * t).sin() + b * b / 2.0 * (1.0 - (PI - 2.0 * t).sin())
}

/// (total, bs, irs pair block, irs single block)
pub fn pi_min(p: &SystemParams, b: f64, d: f64) -> (f64, f64, f64, f64) {
    let Sym { lbs, lu, li, r, q, k, lw, hb, hi, dl, pb, hh, s2, .. } = Sym::of(p);
    let bl = 1.0 + (hh - 1.0) * pb;
    let s = lens(b, r);
    let us = (lu * s + (-lu * s).exp() - 1.0) / (1.0 - (-lu * s).exp());
    let area = 4.0 * r * r - b * b;
    let bs = (1.0 - (-lbs * PI * area).exp()) * dl * dl * s2 * (1.0 - (-lbs * PI * b * b).exp()) * bl * lw * lw
        / (lbs * PI * area * (4.0 * PI).powi(2) * (hb * hb + r * r))
        * us;
    let mh = (hi * hi).max((hb - hi) * (hb - hi));
    let g1 = (lu * PI * (r / 2.0 - d).powi(2) + (-lu * PI * (r / 2.0 + d).powi(2)).exp() - 1.0).max(0.0);
    let g2 = ((1.0 - (-lu * PI * 3.0 * r * r).exp() - lu * PI * 4.0 * r * r * (-lu * PI * 3.0 * r * r).exp())
        / (lu * PI * 4.0 * r * r).powi(2))
    .max(0.0);
    let i1 = k / (k + 1.0) * (1.0 - (-lbs * PI * r * r).exp()) * q * (q - 1.0) * (li * PI * r * r).powi(2)
        * lw.powi(4)
        * dl
        * dl
        * s2
        / (4f64.powi(6) * PI * PI * r.powi(4))
        * g1
        * 2.0
        * d
        * (1.0 - (-lbs * 3.0 * PI * r * r).exp())
        / ((1.0 - (-lu * PI * (r / 2.0 + d).powi(2)).exp()) * lbs * 3.0 * PI * r.powi(3))
        * g2
        * ((mh + 4.0 * r * r) / (mh + 3.0 * r * r)).ln().powi(2);
    let i2 = us * (1.0 + (b / hi).powi(2)).ln() * q * lw.powi(4) * dl * dl * li
        * (1.0 - (-lbs * PI * area).exp())
        * (1.0 - (-lbs * PI * b * b).exp())
        * s2
        / (lbs * PI * area * 4f64.powi(4) * PI.powi(3) * ((hb - hi).powi(2) + r * r));
    (bs + i1 + i2, bs, i1, i2)
}

fn kl_shared(p: &SystemParams) -> f64 {
    let Sym { lbs, li, r, q, lw, hb, hi, s2, .. } = Sym::of(p);
    let m = 1f64.max(lw / (4.0 * PI * hb)) * 1f64.max(lw / (4.0 * PI * (hb - hi).abs())) * 1f64.max(lw / (4.0 * PI * hi));
    q * q * 2f64.powi(6) * s2
        * m.powi(2)
        * (2f64.powi(11) * PI.powi(5) * 3f64.powf(1.5) * (35.0 / 12.0f64).exp())
        * (18.0 / 3f64.exp())
        * (8.0 * 1f64.max(1.0 / (1.0 + 1.0 / (li * 4.0 * PI * r * r)).ln())).powi(4)
        * (2.0 / (1.0 + 1.0 / (lbs * 4.0 * PI * r * r)).ln()).powi(2)
}

pub fn k_coef(p: &SystemParams) -> f64 {
    let Sym { lu, r, .. } = Sym::of(p);
    kl_shared(p) / (1.0 - (-lu * 4.0 * PI * r * r).exp()) * (2.0 / (1.0 + 1.0 / (lu * 4.0 * PI * r * r)).ln()).powi(2)
}

pub fn l_coef(p: &SystemParams) -> f64 {
    kl_shared(p)
}

/// Partial sums of Σ x^p/(np)! with exact small factorials.
pub fn root_series_partial(x: f64, n: u32, terms: u32) -> f64 {
    let mut s = 0.0;
    for p in 0..terms {
        let mut f = 1.0f64;
        for i in 1..=(n * p) {
            f *= i as f64;
        }
        s += x.powi(p as i32) / f;
    }
    s
}
