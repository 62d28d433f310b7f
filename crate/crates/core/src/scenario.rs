//! One network realization and the typical user's conditional powers.
//!
//! The typical user sits at the origin. Every other node is drawn on the disk
//! of radius [`WINDOW_FACTOR`]·R_co, which holds every node whose position or
//! association can change the signal reaching the origin:
//!
//! * BSs within R_co of the user feed it directly; BSs within R_co of an IRS
//!   near the user reach it by reflection, so transmitting BSs lie within 2R_co.
//! * Those BSs serve users within 3R_co and steer extra lobes toward IRSs
//!   within 3R_co; deciding which user each such IRS or user is attached to
//!   needs nodes out to 4R_co.
//!
//! Only links that reach the typical user are realized, each from its own
//! keyed stream, so the same link gets the same draw no matter which other
//! links exist.

use crate::channel::{self, BlockageDraw, LinkDraw};
use crate::geometry::{sample_ppp, Disk, NodeKind, Point2, PointSet};
use crate::params::ValidatedParams;
use crate::rng::{StreamTag, TrialStreams};
use num_complex::Complex64;
use rand::Rng;
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;

/// Simulation window radius in units of R_co.
pub const WINDOW_FACTOR: f64 = 4.0;

/// Conditional powers of one realization.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PowerSample {
    pub p_s: f64,
    pub p_i: f64,
    /// Capacity [nats].
    pub cap: f64,
}

/// Capacity ln(1 + p_s / (p_i + n0)) in nats.
pub fn capacity(p_s: f64, p_i: f64, n0: f64) -> f64 {
    (p_s / (p_i + n0)).ln_1p()
}

/// Direct link from a BS in range of the typical user.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DirectLink {
    pub bs: usize,
    pub blockage: BlockageDraw,
    pub link: LinkDraw,
}

/// Per-element channels from one BS to one IRS.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BsIrsLink {
    pub bs: usize,
    pub elements: Vec<LinkDraw>,
}

/// An IRS in range of the typical user with every link that passes through it.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IrsView {
    pub irs: usize,
    /// IRS→typical-user channel per element.
    pub to_typical: Vec<LinkDraw>,
    /// BS→IRS channels for every BS within R_co of the IRS.
    pub from_bs: Vec<BsIrsLink>,
    /// Element phases θ_q, in [0, 2π).
    pub phases: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Scenario {
    #[serde(with = "exact_params")]
    pub params: ValidatedParams,
    pub bs_set: PointSet,
    /// Users; the typical user is the last entry.
    pub u_set: PointSet,
    pub irs_set: PointSet,
    pub typical: usize,
    pub bs_of_user: Vec<Option<usize>>,
    pub user_of_irs: Vec<Option<usize>>,
    /// One entry per BS within R_co of the typical user, ascending BS index.
    pub direct: Vec<DirectLink>,
    /// One entry per IRS within R_co of the typical user, ascending IRS index.
    pub irs_views: Vec<IrsView>,
}

fn pick<R: Rng + ?Sized>(candidates: &[usize], rng: &mut R) -> Option<usize> {
    if candidates.is_empty() {
        None
    } else {
        Some(candidates[rng.gen_range(0..candidates.len())])
    }
}

impl Scenario {
    /// Samples the three processes on the window and realizes the scenario.
    pub fn build(p: &ValidatedParams, streams: &TrialStreams) -> Scenario {
        let w = WINDOW_FACTOR * p.r_co;
        let o = Point2::ORIGIN;
        let bs = sample_ppp(NodeKind::Bs, p.lambda_bs, o, w, &mut streams.stream(StreamTag::BsProcess, 0, 0));
        let us = sample_ppp(NodeKind::User, p.lambda_u, o, w, &mut streams.stream(StreamTag::UserProcess, 0, 0));
        let irs = sample_ppp(NodeKind::Irs, p.lambda_irs, o, w, &mut streams.stream(StreamTag::IrsProcess, 0, 0));
        Self::from_points(p, bs.points, us.points, irs.points, streams)
    }

    /// Realizes a scenario on given node positions. The typical user is
    /// appended to `users` at the origin.
    pub fn from_points(
        p: &ValidatedParams,
        bs: Vec<Point2>,
        mut users: Vec<Point2>,
        irs: Vec<Point2>,
        streams: &TrialStreams,
    ) -> Scenario {
        let window = Disk::new(Point2::ORIGIN, WINDOW_FACTOR * p.r_co);
        let r = p.r_co;
        let typical = users.len();
        users.push(Point2::ORIGIN);
        let bs_set = PointSet { kind: NodeKind::Bs, points: bs, window };
        let u_set = PointSet { kind: NodeKind::User, points: users, window };
        let irs_set = PointSet { kind: NodeKind::Irs, points: irs, window };

        let bs_of_user: Vec<Option<usize>> = u_set
            .points
            .iter()
            .enumerate()
            .map(|(u, &x)| pick(&bs_set.within(x, r), &mut streams.stream(StreamTag::UserAssociation, u as u64, 0)))
            .collect();
        let user_of_irs: Vec<Option<usize>> = irs_set
            .points
            .iter()
            .enumerate()
            .map(|(s, &x)| pick(&u_set.within(x, r), &mut streams.stream(StreamTag::IrsAssociation, s as u64, 0)))
            .collect();

        let x_u = u_set.points[typical];
        let direct = bs_set
            .within(x_u, r)
            .into_iter()
            .map(|b| {
                let blockage = BlockageDraw::draw(p, &mut streams.stream(StreamTag::Blockage, b as u64, typical as u64));
                let link = channel::bs_user_channel(
                    p,
                    bs_set.points[b],
                    x_u,
                    blockage,
                    &mut streams.stream(StreamTag::DirectLink, b as u64, typical as u64),
                );
                DirectLink { bs: b, blockage, link }
            })
            .collect();

        let bs_irs = |b: usize, s: usize| {
            channel::irs_element_channels(
                p,
                bs_set.points[b],
                irs_set.points[s],
                p.h_bs - p.h_irs,
                &mut streams.stream(StreamTag::BsIrsLink, b as u64, s as u64),
            )
        };
        let irs_user = |s: usize, u: usize| {
            channel::irs_element_channels(
                p,
                irs_set.points[s],
                u_set.points[u],
                p.h_irs,
                &mut streams.stream(StreamTag::IrsUserLink, s as u64, u as u64),
            )
        };

        let irs_views = irs_set
            .within(x_u, r)
            .into_iter()
            .map(|s| {
                let to_typical = irs_user(s, typical);
                let from_bs: Vec<BsIrsLink> = bs_set
                    .within(irs_set.points[s], r)
                    .into_iter()
                    .map(|b| BsIrsLink { bs: b, elements: bs_irs(b, s) })
                    .collect();
                let q = p.q_elems as usize;
                let phases = match user_of_irs[s].and_then(|u| bs_of_user[u].map(|b| (u, b))) {
                    // alignment target: the served user and the BS serving it
                    Some((u, b)) => {
                        let up = if u == typical { to_typical.clone() } else { irs_user(s, u) };
                        let down = match from_bs.iter().find(|l| l.bs == b) {
                            Some(l) => l.elements.clone(),
                            None => bs_irs(b, s),
                        };
                        down.iter().zip(up.iter()).map(|(d, u)| channel::irs_phase(d.specular_phase, u.specular_phase)).collect()
                    }
                    None => vec![0.0; q],
                };
                IrsView { irs: s, to_typical, from_bs, phases }
            })
            .collect();

        Scenario { params: p.clone(), bs_set, u_set, irs_set, typical, bs_of_user, user_of_irs, direct, irs_views }
    }

    pub fn typical_position(&self) -> Point2 {
        self.u_set.points[self.typical]
    }

    /// Users whose serving BS is `b`, ascending.
    pub fn served_by(&self, b: usize) -> Vec<usize> {
        (0..self.bs_of_user.len()).filter(|&u| self.bs_of_user[u] == Some(b)).collect()
    }

    /// Lobe directions BS `b` uses for the symbol of user `u`: the user itself
    /// plus every IRS within R_co of `b` that serves `u`.
    pub fn lobe_targets(&self, b: usize, u: usize) -> Vec<Point2> {
        let xb = self.bs_set.points[b];
        let mut t = vec![self.u_set.points[u]];
        for s in self.irs_set.within(xb, self.params.r_co) {
            if self.user_of_irs[s] == Some(u) {
                t.push(self.irs_set.points[s]);
            }
        }
        t
    }

    fn gain(&self, xb: Point2, targets: &[Point2], x: Point2) -> f64 {
        targets.iter().map(|&t| channel::directivity_gain(self.params.epsilon, self.params.delta, xb, t, x)).sum()
    }

    /// Total complex coefficient multiplying each user's symbol in the
    /// typical user's received signal (noise excluded).
    pub fn symbol_coefficients(&self) -> BTreeMap<usize, Complex64> {
        let mut transmitting: Vec<usize> = self.direct.iter().map(|d| d.bs).collect();
        for v in &self.irs_views {
            transmitting.extend(v.from_bs.iter().map(|l| l.bs));
        }
        transmitting.sort_unstable();
        transmitting.dedup();
        let lobes: BTreeMap<usize, Vec<(usize, Vec<Point2>)>> = transmitting
            .iter()
            .map(|&b| (b, self.served_by(b).into_iter().map(|u| (u, self.lobe_targets(b, u))).collect()))
            .collect();

        let x_u = self.typical_position();
        let mut acc: BTreeMap<usize, Vec<Complex64>> = BTreeMap::new();
        for d in &self.direct {
            let xb = self.bs_set.points[d.bs];
            for (u, targets) in &lobes[&d.bs] {
                acc.entry(*u).or_default().push(d.link.coeff * self.gain(xb, targets, x_u));
            }
        }
        let mut terms = Vec::with_capacity(self.params.q_elems as usize);
        for v in &self.irs_views {
            let xs = self.irs_set.points[v.irs];
            let rot: Vec<Complex64> = v
                .to_typical
                .iter()
                .zip(&v.phases)
                .map(|(h, &th)| h.coeff * Complex64::from_polar(1.0, th))
                .collect();
            for l in &v.from_bs {
                let served = &lobes[&l.bs];
                if served.is_empty() {
                    continue;
                }
                terms.clear();
                terms.extend(rot.iter().zip(&l.elements).map(|(a, h)| a * h.coeff));
                let through = sum_sorted(&mut terms);
                let xb = self.bs_set.points[l.bs];
                for (u, targets) in served {
                    acc.entry(*u).or_default().push(through * self.gain(xb, targets, xs));
                }
            }
        }
        acc.into_iter().map(|(u, mut t)| (u, sum_sorted(&mut t))).collect()
    }

    /// ℙ(𝕊), ℙ(𝕀) and capacity given this realization, averaging over symbols only.
    ///
    /// Every path carrying the typical user's own symbol contributes to the
    /// signal; the symbols of all other users are interference.
    pub fn conditional_powers(&self) -> PowerSample {
        let c = self.symbol_coefficients();
        let s2 = self.params.sigma_d_sq;
        let p_s = c.get(&self.typical).map_or(0.0, |v| s2 * v.norm_sqr());
        let mut others: Vec<f64> = c.iter().filter(|(u, _)| **u != self.typical).map(|(_, v)| s2 * v.norm_sqr()).collect();
        others.sort_by(f64::total_cmp);
        let p_i = neumaier(others.iter().copied());
        PowerSample { p_s, p_i, cap: capacity(p_s, p_i, self.params.n0) }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("scenario serializes")
    }

    pub fn from_json(s: &str) -> Result<Scenario, serde_json::Error> {
        serde_json::from_str(s)
    }
}

fn neumaier(it: impl Iterator<Item = f64>) -> f64 {
    let mut sum = 0.0f64;
    let mut comp = 0.0f64;
    for x in it {
        let t = sum + x;
        if sum.abs() >= x.abs() {
            comp += (sum - t) + x;
        } else {
            comp += (x - t) + sum;
        }
        sum = t;
    }
    sum + comp
}

/// Compensated sum that depends only on the multiset of terms.
///
/// Terms are sorted first, so relabeling the summands cannot change a single
/// bit of the result.
pub fn sum_sorted(terms: &mut [Complex64]) -> Complex64 {
    terms.sort_by(|a, b| a.re.total_cmp(&b.re).then(a.im.total_cmp(&b.im)));
    Complex64::new(neumaier(terms.iter().map(|z| z.re)), neumaier(terms.iter().map(|z| z.im)))
}

/// Keeps σ_d² bit-exact in snapshots: the config format stores σ_d, whose
/// square is not always the original value.
mod exact_params {
    use crate::params::{validate, SystemParams, ValidatedParams};
    use serde::{de::Error, Deserialize, Deserializer, Serialize, Serializer};

    #[derive(Serialize, Deserialize)]
    #[serde(deny_unknown_fields)]
    struct Wire {
        config: SystemParams,
        sigma_d_sq: f64,
    }

    pub fn serialize<S: Serializer>(p: &ValidatedParams, s: S) -> Result<S::Ok, S::Error> {
        Wire { config: p.as_params().clone(), sigma_d_sq: p.sigma_d_sq }.serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<ValidatedParams, D::Error> {
        let mut w = Wire::deserialize(d)?;
        w.config.sigma_d_sq = w.sigma_d_sq;
        validate(w.config).map_err(D::Error::custom)
    }
}
