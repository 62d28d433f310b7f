mod support;

use irsnet_core::channel::{self, irs_element_channels, path_amplitude};
use irsnet_core::geometry::{link_distance, uniform_in_disk, Disk};
use irsnet_core::params::{validate, SystemParams, ValidatedParams};
use irsnet_core::rng::{StreamTag, TrialStreams};
use irsnet_core::scenario::{Scenario, WINDOW_FACTOR};
use irsnet_core::Point2;
use num_complex::Complex64;
use proptest::prelude::*;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::f64::consts::PI;
use support::brute_force;

fn small_params() -> ValidatedParams {
    validate(SystemParams { q_elems: 8, p_b: 0.3, h_hat: 0.05, ..SystemParams::desk().with_kappa(2.0) }).unwrap()
}

fn pts(rng: &mut ChaCha8Rng, n: usize, radius: f64) -> Vec<Point2> {
    (0..n).map(|_| uniform_in_disk(Disk::new(Point2::ORIGIN, radius), rng)).collect()
}

/// Small frozen scenario number `i`: a few nodes around the typical user.
fn frozen(p: &ValidatedParams, i: u64) -> Scenario {
    let mut rng = ChaCha8Rng::seed_from_u64(1000 + i);
    let nb = rng.gen_range(1..=4);
    let nu = rng.gen_range(0..=5);
    let ns = rng.gen_range(0..=5);
    let bs = pts(&mut rng, nb, 20.0);
    let us = pts(&mut rng, nu, 25.0);
    let irs = pts(&mut rng, ns, 20.0);
    Scenario::from_points(p, bs, us, irs, &TrialStreams::new(77, i))
}

fn rel(a: f64, b: f64) -> f64 {
    if a == b {
        0.0
    } else {
        (a - b).abs() / a.abs().max(b.abs())
    }
}

#[test]
fn empty_network_is_silent() {
    let p = small_params();
    let sc = Scenario::from_points(&p, vec![], vec![], vec![], &TrialStreams::new(1, 0));
    let s = sc.conditional_powers();
    assert_eq!((s.p_s, s.p_i, s.cap), (0.0, 0.0, 0.0));
    assert_eq!(sc.typical, 0);
    assert_eq!(sc.bs_of_user, vec![None]);
}

#[test]
fn irs_without_bs_is_silent() {
    let p = small_params();
    let sc = Scenario::from_points(&p, vec![], vec![Point2::new(3.0, 0.0)], vec![Point2::new(1.0, 1.0)], &TrialStreams::new(1, 0));
    let s = sc.conditional_powers();
    assert_eq!((s.p_s, s.p_i), (0.0, 0.0));
    assert_eq!(sc.irs_views.len(), 1);
    assert!(sc.irs_views[0].phases.iter().all(|&t| t == 0.0));
}

#[test]
fn lone_user_sees_no_interference() {
    let p = small_params();
    let sc = Scenario::from_points(&p, vec![Point2::new(4.0, 5.0)], vec![], vec![], &TrialStreams::new(2, 0));
    let s = sc.conditional_powers();
    assert_eq!(s.p_i, 0.0);
    let h = sc.direct[0].link.coeff;
    assert!(rel(s.p_s, p.sigma_d_sq * h.norm_sqr()) < 1e-15);
    assert!(rel(s.cap, (s.p_s / p.n0).ln_1p()) < 1e-15);
}

#[test]
fn out_of_range_bs_is_ignored() {
    let p = small_params();
    let sc = Scenario::from_points(&p, vec![Point2::new(20.0, 0.0)], vec![], vec![], &TrialStreams::new(2, 0));
    assert!(sc.direct.is_empty());
    assert_eq!(sc.bs_of_user[sc.typical], None);
    assert_eq!(sc.conditional_powers().p_s, 0.0);
}

#[test]
fn mean_bs_count_on_the_window() {
    let p = validate(SystemParams::desk()).unwrap();
    let n = 20_000;
    let total: usize = (0..n).map(|t| Scenario::build(&p, &TrialStreams::new(5, t)).bs_set.len()).sum();
    let mean = total as f64 / n as f64;
    let want = p.lambda_bs * PI * (WINDOW_FACTOR * p.r_co).powi(2);
    assert!((want - 11.31).abs() < 0.01);
    assert!((mean - want).abs() < 4.0 * (want / n as f64).sqrt(), "{mean} vs {want}");
}

#[test]
fn two_path_coefficient_at_pure_specular() {
    let p = validate(SystemParams { q_elems: 16, ..SystemParams::desk().with_kappa(f64::INFINITY) }).unwrap();
    let xb = Point2::new(-8.0, 0.0);
    let xs = Point2::new(-2.0, 6.0);
    let sc = Scenario::from_points(&p, vec![xb], vec![], vec![xs], &TrialStreams::new(3, 0));
    assert_eq!(sc.user_of_irs[0], Some(sc.typical));
    assert_eq!(sc.bs_of_user[sc.typical], Some(0));
    let g = |t: Point2, x: Point2| channel::directivity_gain(p.epsilon, p.delta, xb, t, x);
    let o = Point2::ORIGIN;
    let a_dir = path_amplitude(p.lambda_wave, link_distance(p.h_bs, xb, o));
    let a_down = path_amplitude(p.lambda_wave, link_distance(p.h_bs - p.h_irs, xb, xs));
    let a_up = path_amplitude(p.lambda_wave, link_distance(p.h_irs, xs, o));
    let d = &sc.direct[0];
    let h = Complex64::from_polar(a_dir * d.blockage.factor.sqrt(), d.link.specular_phase);
    let want = h * (g(o, o) + g(xs, o)) + 16.0 * a_down * a_up * (g(o, xs) + g(xs, xs));
    let got = sc.symbol_coefficients()[&sc.typical];
    assert!((got - want).norm() / want.norm() < 1e-12, "{got} vs {want}");
}

#[test]
fn phases_align_with_regenerated_links() {
    let p = small_params();
    for i in 0..20 {
        let sc = frozen(&p, i);
        let streams = TrialStreams::new(77, i);
        for v in &sc.irs_views {
            let Some(u) = sc.user_of_irs[v.irs] else {
                assert!(v.phases.iter().all(|&t| t == 0.0));
                continue;
            };
            let Some(b) = sc.bs_of_user[u] else {
                assert!(v.phases.iter().all(|&t| t == 0.0));
                continue;
            };
            let xs = sc.irs_set.points[v.irs];
            let down = irs_element_channels(&p, sc.bs_set.points[b], xs, p.h_bs - p.h_irs, &mut streams.stream(StreamTag::BsIrsLink, b as u64, v.irs as u64));
            let up = irs_element_channels(&p, xs, sc.u_set.points[u], p.h_irs, &mut streams.stream(StreamTag::IrsUserLink, v.irs as u64, u as u64));
            for q in 0..p.q_elems as usize {
                assert_eq!(v.phases[q], channel::irs_phase(down[q].specular_phase, up[q].specular_phase));
            }
        }
    }
}

#[test]
fn association_is_uniform_over_candidates() {
    let p = small_params();
    let bs = vec![Point2::new(5.0, 0.0), Point2::new(0.0, -7.0), Point2::new(-3.0, 3.0)];
    let n = 30_000;
    let mut counts = [0usize; 3];
    for t in 0..n {
        let sc = Scenario::from_points(&p, bs.clone(), vec![], vec![], &TrialStreams::new(8, t));
        counts[sc.bs_of_user[sc.typical].unwrap()] += 1;
    }
    let sd = (n as f64 * (1.0 / 3.0) * (2.0 / 3.0)).sqrt();
    for c in counts {
        assert!((c as f64 - n as f64 / 3.0).abs() < 4.0 * sd, "{counts:?}");
    }
}

#[test]
fn associations_stay_within_coverage() {
    let p = validate(SystemParams::desk()).unwrap();
    for t in 0..200 {
        let sc = Scenario::build(&p, &TrialStreams::new(9, t));
        for (u, b) in sc.bs_of_user.iter().enumerate() {
            if let Some(b) = b {
                assert!(sc.u_set.points[u].dist(sc.bs_set.points[*b]) <= p.r_co);
            } else {
                assert!(sc.bs_set.within(sc.u_set.points[u], p.r_co).is_empty());
            }
        }
        for (s, u) in sc.user_of_irs.iter().enumerate() {
            if let Some(u) = u {
                assert!(sc.irs_set.points[s].dist(sc.u_set.points[*u]) <= p.r_co);
            }
        }
    }
}

#[test]
fn powers_are_invariant_to_storage_order() {
    let p = validate(SystemParams::desk()).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(10);
    for t in 0..30 {
        let sc = Scenario::build(&p, &TrialStreams::new(10, t));
        let base = sc.conditional_powers();
        let mut sh = sc.clone();
        sh.direct.shuffle(&mut rng);
        sh.irs_views.shuffle(&mut rng);
        for v in &mut sh.irs_views {
            v.from_bs.shuffle(&mut rng);
        }
        let s = sh.conditional_powers();
        assert_eq!(s.p_s.to_bits(), base.p_s.to_bits());
        assert_eq!(s.p_i.to_bits(), base.p_i.to_bits());
    }
}

#[test]
fn powers_scale_with_symbol_power() {
    let p = validate(SystemParams::desk()).unwrap();
    let p4 = validate(SystemParams { sigma_d_sq: 4.0 * p.sigma_d_sq, ..p.as_params().clone() }).unwrap();
    for t in 0..30 {
        let a = Scenario::build(&p, &TrialStreams::new(11, t)).conditional_powers();
        let b = Scenario::build(&p4, &TrialStreams::new(11, t)).conditional_powers();
        assert!(rel(b.p_s, 4.0 * a.p_s) < 1e-12);
        assert!(rel(b.p_i, 4.0 * a.p_i) < 1e-12);
    }
}

#[test]
fn snapshot_round_trip_is_bit_exact() {
    let p = validate(SystemParams { sigma_d_sq: 1.0 / 3.0, ..SystemParams::desk() }).unwrap();
    for t in 0..10 {
        let sc = Scenario::build(&p, &TrialStreams::new(12, t));
        let back = Scenario::from_json(&sc.to_json()).unwrap();
        assert_eq!(back, sc);
        assert_eq!(back.to_json(), sc.to_json());
        let (a, b) = (sc.conditional_powers(), back.conditional_powers());
        assert_eq!(a.p_s.to_bits(), b.p_s.to_bits());
        assert_eq!(a.p_i.to_bits(), b.p_i.to_bits());
    }
}

#[test]
fn conditional_powers_match_symbol_averaging() {
    let p = small_params();
    let mut nontrivial = 0;
    for i in 0..20 {
        let sc = frozen(&p, i);
        let got = sc.conditional_powers();
        let (es, ei) = brute_force::exact_powers(&sc);
        assert!(rel(got.p_s, es) < 1e-9, "scenario {i}: p_s {} vs {es}", got.p_s);
        assert!(rel(got.p_i, ei) < 1e-9, "scenario {i}: p_i {} vs {ei}", got.p_i);
        let (ms, mi) = brute_force::symbol_averaged_powers(&sc, 400_000, i);
        assert!(rel(got.p_s, ms) < 0.01, "scenario {i}: p_s {} vs {ms}", got.p_s);
        assert!(rel(got.p_i, mi) < 0.01, "scenario {i}: p_i {} vs {mi}", got.p_i);
        if got.p_s > 0.0 && got.p_i > 0.0 {
            nontrivial += 1;
        }
    }
    assert!(nontrivial >= 5, "only {nontrivial} scenarios carry both signal and interference");
}

#[test]
fn larger_irs_density_extends_the_same_network() {
    let p = validate(SystemParams::desk().with_lambda_irs(1e-3)).unwrap();
    let q = validate(SystemParams::desk().with_lambda_irs(1e-2)).unwrap();
    for t in 0..50 {
        let s = TrialStreams::new(13, t);
        let a = Scenario::build(&p, &s);
        let b = Scenario::build(&q, &s);
        assert_eq!(a.bs_set.points, b.bs_set.points);
        assert_eq!(a.u_set.points, b.u_set.points);
        assert_eq!(a.bs_of_user, b.bs_of_user);
        assert!(a.irs_set.len() <= b.irs_set.len());
        assert_eq!(a.irs_set.points[..], b.irs_set.points[..a.irs_set.len()]);
        assert_eq!(a.user_of_irs[..], b.user_of_irs[..a.irs_set.len()]);
        assert_eq!(a.direct, b.direct);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn powers_are_finite_and_nonnegative(master in any::<u64>(), trial in 0u64..1000, li in 1e-4f64..2e-2) {
        let p = validate(SystemParams::desk().with_lambda_irs(li)).unwrap();
        let s = Scenario::build(&p, &TrialStreams::new(master, trial)).conditional_powers();
        prop_assert!(s.p_s.is_finite() && s.p_s >= 0.0);
        prop_assert!(s.p_i.is_finite() && s.p_i >= 0.0);
        prop_assert!(s.cap.is_finite() && s.cap >= 0.0);
    }

    #[test]
    fn build_is_deterministic(master in any::<u64>(), trial in any::<u64>()) {
        let p = validate(SystemParams::desk()).unwrap();
        let a = Scenario::build(&p, &TrialStreams::new(master, trial));
        let b = Scenario::build(&p, &TrialStreams::new(master, trial));
        prop_assert_eq!(a, b);
    }
}
