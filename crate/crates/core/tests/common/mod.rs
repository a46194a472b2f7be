#![allow(dead_code)]

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use toric_core::polytopes::{
    hexagon, k_simplex, omega_cone, rhombus, triangle, unit_cube, LatticePolytope,
};
use toric_core::{Cone, Fan, IntVector};

pub fn iv(x: &[i64]) -> IntVector {
    IntVector::from(x)
}

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Full-dimensional 2D cone with entries in `[-bound, bound]`.
pub fn random_2d_cone(r: &mut ChaCha8Rng, bound: i64) -> Cone {
    loop {
        let a = [
            r.random_range(-bound..=bound),
            r.random_range(-bound..=bound),
        ];
        let b = [
            r.random_range(-bound..=bound),
            r.random_range(-bound..=bound),
        ];
        if a[0] * b[1] - a[1] * b[0] != 0 {
            return Cone::from_i64(&[&a, &b]);
        }
    }
}

/// Pointed full-dimensional 3D cone on `k` random generators.
pub fn random_3d_cone(r: &mut ChaCha8Rng, k: usize, bound: i64) -> Cone {
    loop {
        let gens: Vec<IntVector> = (0..k)
            .map(|_| {
                IntVector::from(vec![
                    r.random_range(-bound..=bound),
                    r.random_range(-bound..=bound),
                    r.random_range(-bound..=bound),
                ])
            })
            .collect();
        let Ok(c) = Cone::from_generators(3, gens) else {
            continue;
        };
        if c.is_pointed() && c.is_full_dimensional() {
            return c;
        }
    }
}

/// Random lattice polygon: hull of a few points in a small box.
pub fn random_polygon(r: &mut ChaCha8Rng, bound: i64) -> LatticePolytope {
    loop {
        let pts: Vec<IntVector> = (0..5)
            .map(|_| IntVector::from(vec![r.random_range(0..=bound), r.random_range(0..=bound)]))
            .collect();
        let p = LatticePolytope::new(&pts).unwrap();
        if p.is_full_dimensional() {
            return p;
        }
    }
}

/// G-stable cones from the examples: 2D cones, the dual-223 dual, cones over
/// polygons.
pub fn g_stable_cones() -> Vec<(String, Cone)> {
    let mut out = vec![
        ("segment-3".into(), Cone::from_i64(&[&[1, 0], &[1, 3]])),
        ("segment-5".into(), Cone::from_i64(&[&[1, 0], &[1, 5]])),
        ("plane-7-3".into(), Cone::from_i64(&[&[1, 0], &[3, 7]])),
        (
            "dual-223".into(),
            Cone::from_i64(&[&[1, 0, 0], &[0, 1, 0], &[2, 2, 3]]),
        ),
        (
            "regular-3".into(),
            Cone::from_i64(&[&[1, 0, 0], &[0, 1, 0], &[0, 0, 1]]),
        ),
    ];
    for (name, p) in [
        ("rhombus", rhombus()),
        ("hexagon", hexagon()),
        ("triangle-3", triangle(3).unwrap()),
        ("2-simplex-2", k_simplex(2, 2).unwrap()),
        ("square", unit_cube(2).unwrap()),
    ] {
        out.push((format!("omega-{name}"), omega_cone(&p)));
    }
    out
}

/// G-stable fans with more than one maximal cone.
pub fn g_stable_fans() -> Vec<(String, Fan)> {
    let complete_2d = Fan::new(
        toric_core::AmbientLattice::standard(2),
        vec![
            Cone::from_i64(&[&[1, 0], &[1, 3]]),
            Cone::from_i64(&[&[1, 3], &[-2, 1]]),
            Cone::from_i64(&[&[-2, 1], &[-1, -4]]),
            Cone::from_i64(&[&[-1, -4], &[1, 0]]),
        ],
    )
    .unwrap();
    // cones over two polygons sharing the edge (2,0)-(0,1)
    let pair = Fan::new(
        toric_core::AmbientLattice::standard(3),
        vec![
            Cone::from_i64(&[&[0, 0, 1], &[2, 0, 1], &[0, 1, 1]]),
            Cone::from_i64(&[&[2, 0, 1], &[0, 1, 1], &[2, 2, 1], &[1, 2, 1]]),
        ],
    )
    .unwrap();
    let mut out = vec![
        ("complete-2d".into(), complete_2d),
        ("polygon-pair".into(), pair),
    ];
    for (name, c) in g_stable_cones() {
        out.push((name, Fan::from_cone(&c).unwrap()));
    }
    out
}
