mod common;

use std::collections::BTreeSet;

use common::*;
use toric_core::gstable::is_g_stable;
use toric_core::nash::{
    compare_characteristics, log_jacobian_points, nash_blowup_fan, relevant_primes,
    AffineToricVariety,
};
use toric_core::polytopes::product_of_simplices;
use toric_core::{Cone, IntVector};

fn g_stable_duals() -> Vec<(String, AffineToricVariety)> {
    let mut out = Vec::new();
    for (name, c) in g_stable_cones() {
        if c.is_full_dimensional() && c.is_pointed() {
            out.push((name, AffineToricVariety::from_dual(&c).unwrap()));
        }
    }
    for (m, n) in [(2, 2), (2, 3), (3, 3)] {
        let ps = product_of_simplices(m, n).unwrap();
        out.push((
            format!("product-{m}-{n}"),
            AffineToricVariety::from_dual(&ps.cone).unwrap(),
        ));
    }
    out
}

#[test]
fn jacobian_sets_shrink_in_positive_characteristic() {
    for (name, x) in g_stable_duals() {
        let j0: BTreeSet<IntVector> = log_jacobian_points(&x, 0)
            .unwrap()
            .points
            .into_iter()
            .collect();
        let primes = relevant_primes(&x).unwrap();
        for p in primes.iter().copied().chain([2, 3, 5, 7]) {
            let jp = log_jacobian_points(&x, p).unwrap();
            assert!(jp.points.iter().all(|v| j0.contains(v)), "{name} p={p}");
            if !primes.contains(&p) {
                assert_eq!(jp.points.len(), j0.len(), "{name} p={p}");
            }
        }
    }
}

#[test]
fn newton_vertices_come_from_the_jacobian_set() {
    for (name, x) in g_stable_duals() {
        for p in [0, 2, 3] {
            let r = nash_blowup_fan(&x, p).unwrap();
            for c in &r.charts {
                assert!(r.jacobian.points.contains(&c.vertex), "{name} p={p}");
                assert!(x.sigma.contains_cone(&c.cone), "{name} p={p}");
            }
            r.fan.validate().unwrap();
        }
    }
}

#[test]
fn newton_polyhedra_agree_across_characteristics() {
    for (name, x) in g_stable_duals() {
        assert!(is_g_stable(&x.dual).unwrap().is_g_stable, "{name}");
        let cmp = compare_characteristics(&x).unwrap();
        assert!(cmp.equal_for_all, "{name}: {:?}", cmp.disagreements);
    }
}

#[test]
fn random_surface_cones() {
    let mut r = rng(23);
    for _ in 0..40 {
        let sigma = random_2d_cone(&mut r, 30);
        let x = AffineToricVariety::from_sigma(&sigma).unwrap();
        let cmp = compare_characteristics(&x).unwrap();
        assert!(cmp.equal_for_all, "{sigma}: {:?}", cmp.disagreements);
        let smooth0 = nash_blowup_fan(&x, 0).unwrap().smooth;
        for &p in &cmp.relevant_primes {
            assert_eq!(
                nash_blowup_fan(&x, p).unwrap().smooth,
                smooth0,
                "{sigma} p={p}"
            );
        }
    }
}

#[test]
fn products_of_simplices_have_normal_hilbert_bases() {
    for (m, n) in [(2, 2), (2, 3), (3, 3)] {
        let ps = product_of_simplices(m, n).unwrap();
        let x = AffineToricVariety::from_dual(&ps.cone).unwrap();
        let mut hb = x.dual_hilbert_basis().unwrap().elements;
        let mut a = ps.coordinates.clone();
        hb.sort();
        a.sort();
        assert_eq!(hb, a, "{m}x{n}");
        assert_eq!(x.rank(), m + n - 1);
    }
}

#[test]
fn prime_outside_the_determinants_changes_nothing() {
    let x = AffineToricVariety::from_dual(&Cone::from_i64(&[&[1, 0, 0], &[0, 1, 0], &[2, 2, 3]]))
        .unwrap();
    let j0 = log_jacobian_points(&x, 0).unwrap();
    for p in [2, 5, 7, 11] {
        assert_eq!(
            log_jacobian_points(&x, p).unwrap().points,
            j0.points,
            "p={p}"
        );
    }
    assert_ne!(log_jacobian_points(&x, 3).unwrap().points, j0.points);
}
