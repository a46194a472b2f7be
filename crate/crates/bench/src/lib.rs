//! Shared inputs for the kernel benchmarks.

use toric_core::polytopes::{hexagon, omega_cone, triangle};
use toric_core::{Cone, Fan};

/// Cones of increasing size used across the benchmarks.
pub fn cones() -> Vec<(&'static str, Cone)> {
    vec![
        ("plane-7-3", Cone::from_i64(&[&[1, 0], &[3, 7]])),
        (
            "dual-223",
            Cone::from_i64(&[&[1, 0, 0], &[0, 1, 0], &[2, 2, 3]]),
        ),
        ("omega-hexagon", omega_cone(&hexagon())),
        (
            "omega-triangle-5",
            omega_cone(&triangle(5).expect("dilated triangle")),
        ),
    ]
}

pub fn fans() -> Vec<(&'static str, Fan)> {
    cones()
        .into_iter()
        .map(|(n, c)| (n, Fan::from_cone(&c).expect("single-cone fan")))
        .collect()
}
