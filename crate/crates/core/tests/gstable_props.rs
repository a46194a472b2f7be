mod common;

use common::*;
use num_bigint::BigInt;
use rand::seq::{IndexedRandom, SliceRandom};
use rand::Rng;
use toric_core::desing::fan_hilbert_union;
use toric_core::gstable::{
    gamma_plus, gamma_plus_matches_enumeration, is_g_stable, is_g_stable_fan, is_g_stable_with_cap,
};
use toric_core::hilbert::{default_bound, hilbert_basis};
use toric_core::{IntMatrix, IntVector};

/// Hilbert basis of a 2D cone in angular order.
fn angular(mut hb: Vec<IntVector>) -> Vec<IntVector> {
    let cross = |a: &IntVector, b: &IntVector| &a[0] * &b[1] - &a[1] * &b[0];
    hb.sort_by(|a, b| BigInt::from(0).cmp(&cross(a, b)));
    hb
}

#[test]
fn two_dimensional_cones() {
    let mut r = rng(7);
    for _ in 0..60 {
        let c = random_2d_cone(&mut r, 20);
        let report = is_g_stable_with_cap(&c, 128).unwrap();
        assert!(report.is_g_stable, "{c}");
        let hb = angular(hilbert_basis(&c).unwrap().elements);
        for w in hb.windows(2) {
            let det = IntMatrix::from_columns(w).unwrap().det().unwrap();
            assert_eq!(det, BigInt::from(1), "{c}");
        }
    }
}

#[test]
fn subsets_of_g_stable_cones() {
    let mut r = rng(11);
    for (name, c) in g_stable_cones() {
        assert!(is_g_stable(&c).unwrap().is_g_stable, "{name}");
        let g = hilbert_basis(&c).unwrap().elements;
        let big = gamma_plus(&c).unwrap().gamma_plus;
        for _ in 0..6 {
            let k = r.random_range(1..=g.len());
            let a: Vec<IntVector> = g.choose_multiple(&mut r, k).cloned().collect();
            let sub = c.sibling(a).unwrap();
            let restricted = big.intersect_cone(&sub).unwrap();
            let own = gamma_plus(&sub).unwrap().gamma_plus;
            assert!(own.same_as(&restricted), "{name}: {sub}");
            assert!(is_g_stable(&sub).unwrap().is_g_stable, "{name}: {sub}");
        }
    }
}

#[test]
fn faces_of_g_stable_cones() {
    for (name, c) in g_stable_cones() {
        for f in c.faces().unwrap() {
            if f.dim() > 0 {
                assert!(is_g_stable(&f).unwrap().is_g_stable, "{name}: {f}");
            }
        }
    }
}

#[test]
fn refinements_inside_the_hilbert_union() {
    let mut r = rng(13);
    for (name, f) in g_stable_fans() {
        let target = fan_hilbert_union(&f).unwrap().elements;
        let mut cur = f.clone();
        let mut order = target.clone();
        order.shuffle(&mut r);
        for gamma in order.into_iter().take(3) {
            cur = cur.star_subdivision(&gamma).unwrap();
            assert!(cur.is_refinement_of(&f), "{name}");
            assert!(is_g_stable_fan(&cur).unwrap().is_g_stable, "{name}");
            assert_eq!(fan_hilbert_union(&cur).unwrap().elements, target, "{name}");
        }
    }
}

#[test]
fn gamma_plus_oracle() {
    for (name, c) in g_stable_cones() {
        let hb = hilbert_basis(&c).unwrap();
        assert!(
            gamma_plus_matches_enumeration(&c, &default_bound(&hb)).unwrap(),
            "{name}"
        );
    }
}
