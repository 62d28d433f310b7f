//! Link-level randomness: Rician fading, blockage, directivity and IRS phases.

use crate::geometry::{link_distance, Point2};
use crate::params::SystemParams;
use num_complex::Complex64;
use rand::Rng;
use rand_distr::{Distribution, StandardNormal};
use serde::{Deserialize, Serialize};
use std::f64::consts::{PI, TAU};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ChannelError {
    #[error("DegenerateDirection: {0}")]
    DegenerateDirection(&'static str),
}

/// One realized link: complex coefficient plus the phase of its specular part.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LinkDraw {
    pub coeff: Complex64,
    pub specular_phase: f64,
}

/// Power factor of a direct BS-user link: 1, or ĥ when blocked.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BlockageDraw {
    pub factor: f64,
}

impl BlockageDraw {
    pub const CLEAR: BlockageDraw = BlockageDraw { factor: 1.0 };

    pub fn draw<R: Rng + ?Sized>(p: &SystemParams, rng: &mut R) -> Self {
        if rng.gen::<f64>() < p.p_b {
            BlockageDraw { factor: p.h_hat }
        } else {
            BlockageDraw::CLEAR
        }
    }

    pub fn is_blocked(&self) -> bool {
        self.factor != 1.0
    }
}

/// Weights of the specular and scattered components, √(κ/(κ+1)) and √(1/(κ+1)).
pub fn rician_weights(kappa: f64) -> (f64, f64) {
    if kappa.is_infinite() {
        (1.0, 0.0)
    } else {
        ((1.0 / (1.0 + 1.0 / kappa)).sqrt(), (1.0 / (kappa + 1.0)).sqrt())
    }
}

/// Free-space amplitude λ_wave / (4π d).
pub fn path_amplitude(lambda_wave: f64, d: f64) -> f64 {
    lambda_wave / (4.0 * PI * d)
}

/// Rician draw with mean-power `amp² · factor`.
fn rician<R: Rng + ?Sized>(kappa: f64, amp: f64, factor: f64, rng: &mut R) -> LinkDraw {
    let theta = TAU * rng.gen::<f64>();
    let (ws, wd) = rician_weights(kappa);
    let scale = amp * factor.sqrt();
    // CN(0, scale²): each quadrature has variance scale²/2
    let sd = scale * std::f64::consts::FRAC_1_SQRT_2;
    let re: f64 = StandardNormal.sample(rng);
    let im: f64 = StandardNormal.sample(rng);
    let coeff = Complex64::from_polar(ws * scale, theta) + Complex64::new(re * sd, im * sd) * wd;
    LinkDraw { coeff, specular_phase: theta }
}

/// Direct BS-user channel including blockage.
pub fn bs_user_channel<R: Rng + ?Sized>(
    p: &SystemParams,
    x_bs: Point2,
    x_u: Point2,
    blockage: BlockageDraw,
    rng: &mut R,
) -> LinkDraw {
    let amp = path_amplitude(p.lambda_wave, link_distance(p.h_bs, x_bs, x_u));
    rician(p.kappa, amp, blockage.factor, rng)
}

/// Channel of one IRS element between `x_a` and `x_b` at vertical offset `height`.
///
/// Use `h_bs − h_irs` for BS→IRS and `h_irs` for IRS→user. These links are never blocked.
pub fn irs_element_channel<R: Rng + ?Sized>(p: &SystemParams, x_a: Point2, x_b: Point2, height: f64, rng: &mut R) -> LinkDraw {
    let amp = path_amplitude(p.lambda_wave, link_distance(height, x_a, x_b));
    rician(p.kappa, amp, 1.0, rng)
}

/// All Q element channels of one IRS link, element q at index q.
pub fn irs_element_channels<R: Rng + ?Sized>(
    p: &SystemParams,
    x_a: Point2,
    x_b: Point2,
    height: f64,
    rng: &mut R,
) -> Vec<LinkDraw> {
    let amp = path_amplitude(p.lambda_wave, link_distance(height, x_a, x_b));
    (0..p.q_elems).map(|_| rician(p.kappa, amp, 1.0, rng)).collect()
}

/// Sector gain of the BS at `x_bs` beaming toward `x_0`, seen from `x`.
///
/// 1 when the cosine between the two directions is at least `1 − ε`, else δ.
pub fn try_directivity_gain(epsilon: f64, delta: f64, x_bs: Point2, x_0: Point2, x: Point2) -> Result<f64, ChannelError> {
    let a = x_0.sub(x_bs);
    let b = x.sub(x_bs);
    let na = a.norm();
    let nb = b.norm();
    if na == 0.0 {
        return Err(ChannelError::DegenerateDirection("beam target coincides with the BS"));
    }
    if nb == 0.0 {
        return Err(ChannelError::DegenerateDirection("observation point coincides with the BS"));
    }
    let cos = a.dot(b) / (na * nb);
    Ok(if cos >= 1.0 - epsilon { 1.0 } else { delta })
}

/// [`try_directivity_gain`] with degenerate geometry mapped to gain 1 and a warning.
pub fn directivity_gain(epsilon: f64, delta: f64, x_bs: Point2, x_0: Point2, x: Point2) -> f64 {
    try_directivity_gain(epsilon, delta, x_bs, x_0, x).unwrap_or_else(|e| {
        log::warn!("{e}; using unit gain");
        1.0
    })
}

/// Reduces an angle to [0, 2π).
pub fn wrap_phase(theta: f64) -> f64 {
    let r = theta.rem_euclid(TAU);
    if r >= TAU { 0.0 } else { r }
}

/// Element phase that cancels the specular phases of the BS→IRS and IRS→user links.
pub fn irs_phase(specular_bs_irs: f64, specular_irs_u: f64) -> f64 {
    wrap_phase(-(specular_bs_irs + specular_irs_u))
}
