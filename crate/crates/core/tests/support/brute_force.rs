//! Symbol-averaging oracle for the conditional powers of a realized scenario.
//!
//! Enumerates every BS→user and BS→IRS→user path from node positions, looks
//! the stored channel draws up by index, and estimates ℙ(𝕊) and ℙ(𝕀) by
//! averaging |y|² over random QPSK symbols with power σ².
#![allow(dead_code)]

use irsnet_core::scenario::Scenario;
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn dist(a: (f64, f64), b: (f64, f64)) -> f64 {
    ((a.0 - b.0).powi(2) + (a.1 - b.1).powi(2)).sqrt()
}

fn gain(eps: f64, delta: f64, xb: (f64, f64), target: (f64, f64), x: (f64, f64)) -> f64 {
    let (ax, ay) = (target.0 - xb.0, target.1 - xb.1);
    let (bx, by) = (x.0 - xb.0, x.1 - xb.1);
    let na = (ax * ax + ay * ay).sqrt();
    let nb = (bx * bx + by * by).sqrt();
    if na == 0.0 || nb == 0.0 {
        return 1.0;
    }
    if (ax * bx + ay * by) / (na * nb) >= 1.0 - eps {
        1.0
    } else {
        delta
    }
}

/// Every path reaching the typical user, as (symbol owner, complex coefficient).
pub fn paths(sc: &Scenario) -> Vec<(usize, Complex64)> {
    let p = &sc.params;
    let r = p.r_co;
    let pos = |v: &[irsnet_core::Point2], i: usize| (v[i].x, v[i].y);
    let bs = &sc.bs_set.points;
    let us = &sc.u_set.points;
    let irs = &sc.irs_set.points;
    let xt = pos(us, sc.typical);

    // gain of BS b's beams for user u, seen at x
    let user_gain = |b: usize, u: usize, x: (f64, f64)| {
        let xb = pos(bs, b);
        let mut g = gain(p.epsilon, p.delta, xb, pos(us, u), x);
        for s in 0..irs.len() {
            if sc.user_of_irs[s] == Some(u) && dist(pos(irs, s), xb) <= r {
                g += gain(p.epsilon, p.delta, xb, pos(irs, s), x);
            }
        }
        g
    };

    let mut out = Vec::new();
    for b in 0..bs.len() {
        let served: Vec<usize> = (0..us.len()).filter(|&u| sc.bs_of_user[u] == Some(b)).collect();
        if dist(pos(bs, b), xt) <= r {
            let h = sc.direct.iter().find(|d| d.bs == b).expect("direct link stored").link.coeff;
            for &u in &served {
                out.push((u, h * user_gain(b, u, xt)));
            }
        }
        for s in 0..irs.len() {
            if dist(pos(irs, s), xt) > r || dist(pos(irs, s), pos(bs, b)) > r {
                continue;
            }
            let view = sc.irs_views.iter().find(|v| v.irs == s).expect("IRS view stored");
            let down = &view.from_bs.iter().find(|l| l.bs == b).expect("BS-IRS link stored").elements;
            let mut through = Complex64::new(0.0, 0.0);
            for q in 0..p.q_elems as usize {
                through += view.to_typical[q].coeff * Complex64::from_polar(1.0, view.phases[q]) * down[q].coeff;
            }
            for &u in &served {
                out.push((u, through * user_gain(b, u, pos(irs, s))));
            }
        }
    }
    out
}

/// Exact symbol average of the path list: (ℙ(𝕊), ℙ(𝕀)).
pub fn exact_powers(sc: &Scenario) -> (f64, f64) {
    let s2 = sc.params.sigma_d_sq;
    let mut per_user = std::collections::BTreeMap::<usize, Complex64>::new();
    for (u, c) in paths(sc) {
        *per_user.entry(u).or_insert(Complex64::new(0.0, 0.0)) += c;
    }
    let ps = per_user.get(&sc.typical).map_or(0.0, |c| s2 * c.norm_sqr());
    let pi = per_user.iter().filter(|(u, _)| **u != sc.typical).map(|(_, c)| s2 * c.norm_sqr()).sum();
    (ps, pi)
}

/// Monte-Carlo symbol average over `draws` independent QPSK symbol vectors.
pub fn symbol_averaged_powers(sc: &Scenario, draws: usize, seed: u64) -> (f64, f64) {
    let sd = sc.params.sigma_d_sq.sqrt();
    let paths = paths(sc);
    let n_users = sc.u_set.points.len();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut x = vec![Complex64::new(0.0, 0.0); n_users];
    let (mut acc_s, mut acc_i) = (0.0, 0.0);
    for _ in 0..draws {
        for xi in x.iter_mut() {
            let k: u8 = rng.gen_range(0..4);
            *xi = Complex64::from_polar(sd, std::f64::consts::FRAC_PI_4 + k as f64 * std::f64::consts::FRAC_PI_2);
        }
        let mut ys = Complex64::new(0.0, 0.0);
        let mut yi = Complex64::new(0.0, 0.0);
        for &(u, c) in &paths {
            if u == sc.typical {
                ys += c * x[u];
            } else {
                yi += c * x[u];
            }
        }
        acc_s += ys.norm_sqr();
        acc_i += yi.norm_sqr();
    }
    (acc_s / draws as f64, acc_i / draws as f64)
}
