mod common;

use common::{c, half_integers, paired_lattice};
use proptest::prelude::*;
use pwtrace_core::clustering::{
    adapted_partition, density_radius, halfplane_partition, log_carleson_constant, neighbor_groups,
};
use pwtrace_core::divided::{dd_bound, divided_difference, newton_coefficients, newton_eval};
use pwtrace_core::generating::{d_n_eval, eval_s, s_over_dn, strip_blaschke};
use pwtrace_core::geometry::pseudo_distance;
use pwtrace_core::muckenhoupt::{continuous_ap, discrete_ap, discrete_hilbert, hilbert_pv};
use pwtrace_core::trace::{
    cardinal_interpolant, pointwise_bound_ratio, pw_lp_norm, restrict, sinc_kernel, trace_norm_halfplane,
    trace_norm_partition,
};
use pwtrace_core::{
    check_hn, check_ls, CheckOptions, Cluster, Complex, Error, HalfPlane, NodeSequence, Partition,
    SpaceParams, TraceData,
};

fn upper_point() -> impl Strategy<Value = Complex> {
    (-5.0..5.0f64, 0.05..5.0f64).prop_map(|(x, y)| c(x, y))
}

/// Between 1 and 5 distinct points of a unit box, at mutual distance >= 0.05.
fn separated_points() -> impl Strategy<Value = Vec<Complex>> {
    prop::collection::vec((-1.0..1.0f64, -1.0..1.0f64), 1..6).prop_filter_map("points too close", |v| {
        let pts: Vec<Complex> = v.into_iter().map(|(x, y)| c(x, y)).collect();
        for i in 0..pts.len() {
            for j in 0..i {
                if (pts[i] - pts[j]).norm() < 0.05 {
                    return None;
                }
            }
        }
        Some(pts)
    })
}

fn values(n: usize) -> impl Strategy<Value = Vec<Complex>> {
    prop::collection::vec((-3.0..3.0f64, -3.0..3.0f64).prop_map(|(a, b)| c(a, b)), n)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn rho_is_symmetric_and_translation_invariant(z in upper_point(), w in upper_point(), t in -10.0..10.0f64) {
        let hp = HalfPlane::UPPER;
        let d = pseudo_distance(z, w, hp).unwrap();
        prop_assert!((0.0..1.0).contains(&d));
        prop_assert!((d - pseudo_distance(w, z, hp).unwrap()).abs() < 1e-12);
        let shifted = pseudo_distance(z + t, w + t, hp).unwrap();
        prop_assert!((d - shifted).abs() < 1e-10);
    }

    #[test]
    fn newton_form_interpolates((pts, vals) in separated_points().prop_flat_map(|p| {
        let n = p.len();
        (Just(p), values(n))
    })) {
        let cl = Cluster::euclidean(pts).unwrap();
        // values are matched to the cluster's sorted order
        for (&z, &v) in cl.points().iter().zip(&vals) {
            let got = newton_eval(&cl, &vals, z).unwrap();
            prop_assert!((got - v).norm() < 1e-9 * (1.0 + v.norm()));
        }
        let coeffs = newton_coefficients(&cl, &vals).unwrap();
        prop_assert_eq!(coeffs.len(), cl.len());
    }

    #[test]
    fn top_difference_annihilates_lower_degree(pts in separated_points(), a0 in -2.0..2.0f64, a1 in -2.0..2.0f64) {
        prop_assume!(pts.len() >= 3);
        let cl = Cluster::euclidean(pts).unwrap();
        let vals: Vec<Complex> = cl.points().iter().map(|&z| a0 + z * a1).collect();
        let top = divided_difference(&cl, &vals, cl.len() - 1).unwrap();
        prop_assert!(top.norm() < 1e-8, "{top}");
    }

    #[test]
    fn dd_bound_holds_for_exponentials(x0 in -3.0..3.0f64, h in 0.05..0.2f64, m in 2usize..5, s in -1.0..1.0f64) {
        // m equispaced real points of spacing h; f(z) = e^(i s z) on |Im z| <= eta
        let pts: Vec<Complex> = (0..m).map(|k| c(x0 + k as f64 * h, 0.0)).collect();
        let cl = Cluster::euclidean(pts).unwrap();
        let eta = 0.5;
        let sup = (s.abs() * eta).exp();
        let vals: Vec<Complex> = cl.points().iter().map(|&z| (Complex::i() * s * z).exp()).collect();
        for j in 0..m {
            let d = divided_difference(&cl, &vals[..=j], j).unwrap().norm();
            prop_assert!(d <= dd_bound(&cl, eta, sup, j).unwrap() * (1.0 + 1e-9));
        }
    }

    #[test]
    fn discrete_ap_is_reversal_invariant(w in prop::collection::vec(0.1..10.0f64, 8..40), p in 1.5..4.0f64) {
        let a = discrete_ap(&w, p, 8).unwrap();
        let rev: Vec<f64> = w.iter().rev().copied().collect();
        let b = discrete_ap(&rev, p, 8).unwrap();
        prop_assert!((a.estimate - b.estimate).abs() < 1e-9 * a.estimate);
    }

    #[test]
    fn ap_estimate_is_scale_invariant(e in -3i32..=3, p in 1.5..4.0f64, k in 0.1..0.9f64) {
        let xs: Vec<f64> = (-512..=512).map(|j| j as f64 / 64.0).collect();
        let w: Vec<f64> = xs.iter().map(|x| x.abs().powf(k * (p - 1.0)).max(1e-3)).collect();
        let scales = [0.25, 1.0, 4.0];
        let a = continuous_ap(&xs, &w, p, &scales, (-8.0, 8.0)).unwrap().estimate;
        let cw: Vec<f64> = w.iter().map(|x| x * 10f64.powi(e)).collect();
        let b = continuous_ap(&xs, &cw, p, &scales, (-8.0, 8.0)).unwrap().estimate;
        prop_assert!((a - b).abs() < 1e-9 * a, "{a} vs {b}");
    }

    #[test]
    fn hilbert_is_linear(a in -2.0..2.0f64, b in -2.0..2.0f64, x in -2.0..2.0f64, y in 0.2..2.0f64) {
        let f = |t: f64| Complex::new(1.0 / (1.0 + t * t), 0.0);
        let g = |t: f64| Complex::new(t / (1.0 + t * t), 0.0);
        let z = c(x, y);
        let hf = hilbert_pv(f, z).unwrap();
        let hg = hilbert_pv(g, z).unwrap();
        let h = hilbert_pv(|t| f(t) * a + g(t) * b, z).unwrap();
        prop_assert!((h - (hf * a + hg * b)).norm() < 1e-8 * (1.0 + h.norm()));
    }
}

#[test]
fn carleson_constant_shrinks_when_nodes_are_added() {
    let hp = HalfPlane::UPPER;
    let base: Vec<Complex> = (-20..=20).map(|k| c(k as f64, 1.0)).collect();
    let small = NodeSequence::new(base.clone()).unwrap();
    let mut more = base;
    more.extend((-20..=20).map(|k| c(k as f64 + 0.3, 1.2)));
    let big = NodeSequence::new(more).unwrap();
    let a = log_carleson_constant(&small, hp).unwrap();
    let b = log_carleson_constant(&big, hp).unwrap();
    assert!(b <= a + 1e-12, "{b} > {a}");
}

#[test]
fn adapted_partition_covers_every_node_once() {
    let seq = paired_lattice(40);
    let part = adapted_partition(&seq, 1.0, 2).unwrap();
    let mut seen = vec![0usize; seq.len()];
    for ci in 0..part.len() {
        for &i in part.members(ci) {
            seen[i] += 1;
            assert_eq!(part.cluster_of(i), ci);
        }
        assert!(part.members(ci).len() <= 2);
    }
    assert!(seen.iter().all(|&n| n == 1));
}

#[test]
fn capacity_one_gives_singletons_on_separated_nodes() {
    let seq = half_integers(30);
    let part = adapted_partition(&seq, 1.0, 1).unwrap();
    assert_eq!(part.len(), seq.len());
}

#[test]
fn three_close_nodes_overflow_capacity_two() {
    let seq = NodeSequence::from_reals(&[0.5, 0.52, 0.54, 3.5]).unwrap();
    let err = adapted_partition(&seq, 1.0, 2).unwrap_err();
    assert!(err.is_partition_failure(), "{err:?}");
    assert!(matches!(err, Error::CapacityExceeded { ref group, .. } if group.len() == 3));
}

#[test]
fn strip_blaschke_is_bounded_below_off_the_strip() {
    let seq = paired_lattice(20);
    let eps = 0.4;
    for k in -40..=40 {
        for y in [3.0 * eps, 4.0 * eps, 2.0] {
            let z = c(k as f64 * 0.25, y);
            let b = strip_blaschke(&seq, eps, z).norm();
            assert!(b > 0.0 && b <= 1.0 + 1e-12, "{b} at {z}");
        }
    }
}

#[test]
fn s_vanishes_at_nodes_and_settles_with_radius() {
    let seq = half_integers(4000);
    for &lam in &seq.nodes()[..20] {
        assert_eq!(eval_s(&seq, lam, 1e4).norm(), 0.0);
    }
    let z = c(0.3, 0.4);
    let exact = (std::f64::consts::PI * z).cos();
    let errs: Vec<f64> = [250.0, 1000.0, 4000.0]
        .iter()
        .map(|&r| (eval_s(&seq, z, r) - exact).norm())
        .collect();
    assert!(errs[0] > errs[1] && errs[1] > errs[2], "{errs:?}");
}

#[test]
fn d_n_is_between_zero_and_distance_to_nearest_cluster() {
    let seq = paired_lattice(20);
    let part = adapted_partition(&seq, 1.0, 2).unwrap();
    for j in -80..=80 {
        let x = j as f64 * 0.1 + 0.013;
        let (d, ci) = d_n_eval(&part, x).unwrap();
        let nearest = part.clusters()[ci]
            .points()
            .iter()
            .map(|p| (p - x).norm())
            .fold(f64::INFINITY, f64::min);
        assert!(d >= 0.0 && d <= nearest.max(1.0) + 1e-12, "{d} at {x}");
    }
}

#[test]
fn s_over_dn_stays_in_a_band_on_the_paired_lattice() {
    let seq = paired_lattice(400);
    let part = adapted_partition(&seq, 1.0, 2).unwrap();
    let r = seq.max_modulus() + 1.0;
    let (mut lo, mut hi) = (f64::INFINITY, 0.0f64);
    for j in -200..=200 {
        let x = j as f64 * 0.05 + 0.0071;
        let v = s_over_dn(&seq, &part, x, r).unwrap();
        lo = lo.min(v);
        hi = hi.max(v);
    }
    assert!(lo > 0.0 && hi / lo < 50.0, "[{lo}, {hi}]");
}

#[test]
fn partition_norm_reduces_to_weighted_lp_for_singletons() {
    let seq = NodeSequence::new(vec![c(0.5, 0.0), c(1.5, 2.0), c(-2.5, -1.0)]).unwrap();
    let part = Partition::singletons(&seq).unwrap();
    let a = TraceData::new(vec![c(1.0, 0.0), c(0.0, 2.0), c(-3.0, 0.0)]);
    let params = SpaceParams::default();
    let got = trace_norm_partition(&a, &part, &params).unwrap();
    // |e^(+-i pi lambda)| = e^(-pi |Im lambda|) with the sign of the half-plane
    let pi = std::f64::consts::PI;
    let expected = (1.0 + 3.0 * 4.0 * (-4.0 * pi).exp() + 2.0 * 9.0 * (-2.0 * pi).exp()).sqrt();
    assert!((got - expected).abs() < 1e-12, "{got} vs {expected}");
}

#[test]
fn halfplane_norm_of_two_point_cluster() {
    let seq = NodeSequence::new(vec![c(0.0, 1.0), c(0.0, 2.0)]).unwrap();
    let hp = HalfPlane::UPPER;
    let part = halfplane_partition(&seq, hp, 2.0, 2).unwrap();
    assert_eq!(part.len(), 1);
    let a = TraceData::new(vec![c(1.0, 0.0), c(1.0, 0.0)]);
    let n = trace_norm_halfplane(&a, &part, hp, 2.0).unwrap();
    assert!((n * n - 2.0).abs() < 1e-12, "{}", n * n);
}

#[test]
fn pointwise_bound_ratio_is_capped_for_sinc() {
    let f = sinc_kernel(0.0, std::f64::consts::PI).unwrap();
    let norm = pw_lp_norm(&f, 2.0, 400.0, 0.01).unwrap();
    for &(x, y) in &[(0.0, 0.0), (0.3, 0.5), (-2.0, 1.5), (5.0, 3.0), (0.0, 8.0)] {
        let r = pointwise_bound_ratio(&f, 2.0, std::f64::consts::PI, c(x, y), norm).unwrap();
        assert!(r <= 2.0, "{r} at {x}+{y}i");
    }
}

#[test]
fn cardinal_interpolant_restricts_back_to_the_trace() {
    let seq = half_integers(60);
    let vals: Vec<Complex> = (0..seq.len())
        .map(|i| if seq.nodes()[i].re.abs() < 5.0 { c(1.0 / (1.0 + i as f64), 0.0) } else { c(0.0, 0.0) })
        .collect();
    let a = TraceData::new(vals);
    let f = cardinal_interpolant(&a, &seq, seq.max_modulus() + 1.0).unwrap();
    let back = restrict(&f, &seq);
    for (u, v) in back.values.iter().zip(&a.values) {
        assert!((u - v).norm() < 1e-10);
    }
}

#[test]
fn discrete_hilbert_operator_norm_is_at_most_pi() {
    for n in [64usize, 128, 256] {
        let gamma: Vec<Complex> = (0..n).map(|k| c(k as f64, 0.0)).collect();
        let sigma: Vec<Complex> = (0..n).map(|k| c(k as f64 + 0.5, 0.0)).collect();
        let mut v: Vec<Complex> = (0..n).map(|k| c(1.0 + (k % 7) as f64, 0.0)).collect();
        let mut lambda = 0.0;
        for _ in 0..200 {
            let w = discrete_hilbert(&gamma, &sigma, &v).unwrap();
            let nw = w.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
            let nv = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
            lambda = nw / nv;
            // the transpose is minus the operator with the roles swapped
            let back = discrete_hilbert(&sigma, &gamma, &w).unwrap();
            let nb = back.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
            v = back.iter().map(|z| z / nb).collect();
        }
        assert!(lambda <= std::f64::consts::PI + 0.1, "n = {n}: {lambda}");
    }
}

#[test]
fn paired_lattice_hn_report_has_every_entry() {
    let seq = paired_lattice(60);
    let params = SpaceParams::new(std::f64::consts::PI, 2.0, Some(1.0), 2).unwrap();
    let report = check_hn(&seq, &params, &CheckOptions::default()).unwrap();
    assert_eq!(report.entries.len(), 5);
    let ls = check_ls(&seq, &params, &CheckOptions::default());
    assert_eq!(ls.entries.len(), 5);
}

#[test]
fn neighbor_groups_have_bounded_size() {
    let seq = paired_lattice(30);
    let groups = neighbor_groups(&seq, 2, 0.25).unwrap();
    assert_eq!(groups.len(), seq.len());
    for g in &groups {
        assert!(g.members.len() <= 2 && g.members.contains(&g.center));
    }
}

#[test]
fn density_radius_is_about_one_on_the_lattice() {
    let r = density_radius(&half_integers(200));
    assert!(r > 0.4 && r < 1.1, "{r}");
}
