//! Lattice polytopes, the height-one cone `ω_P`, G-flatness and smoothness.

mod baryhull;
mod families;

use std::sync::OnceLock;

use num_bigint::BigInt;
use num_traits::One;

use crate::error::{Error, Result};
use crate::hilbert::hilbert_basis;
use crate::linalg::{IntMatrix, IntVector, QVector};
use crate::polyhedra::{Cone, RationalPolyhedron};

pub use baryhull::{
    barycentric_hull, corners, one_step_resolution, verify_baryhull_theorem, BaryHull,
    BaryhullReport, Corner, OneStepReport, BARY_POINT_CAP, BARY_SIMPLEX_CAP,
};
pub use families::{
    apply_unimodular_map, cube_staircase_triangulation, hexagon, hunt_candidates, k_simplex,
    minkowski_sum, omega_map_check, product, product_of_simplices, rhombus, smooth_corpus,
    standard_simplex, triangle, unit_cube, ProductOfSimplices, StaircaseTriangulation,
};

/// Convex hull of finitely many points of `Z^n`.
#[derive(Clone, Debug)]
pub struct LatticePolytope {
    poly: RationalPolyhedron,
    vertices: Vec<IntVector>,
    points: OnceLock<Result<Vec<IntVector>>>,
}

impl PartialEq for LatticePolytope {
    fn eq(&self, other: &Self) -> bool {
        self.vertices == other.vertices
    }
}

impl Eq for LatticePolytope {}

impl LatticePolytope {
    pub fn new(points: &[IntVector]) -> Result<Self> {
        let first = points
            .first()
            .ok_or_else(|| Error::InvalidInput("empty point set".into()))?;
        let poly = RationalPolyhedron::polytope(first.dim(), points)?;
        let vertices = poly
            .vertices()
            .iter()
            .map(|v| v.to_int().expect("vertices of integer points are integral"))
            .collect();
        Ok(LatticePolytope {
            poly,
            vertices,
            points: OnceLock::new(),
        })
    }

    pub fn from_i64(points: &[&[i64]]) -> Self {
        let pts: Vec<IntVector> = points.iter().map(|p| IntVector::from(*p)).collect();
        Self::new(&pts).expect("points of equal length")
    }

    pub fn ambient_dim(&self) -> usize {
        self.poly.ambient_rank()
    }

    pub fn dim(&self) -> usize {
        self.poly.dim()
    }

    pub fn is_full_dimensional(&self) -> bool {
        self.dim() == self.ambient_dim()
    }

    /// Vertices in lexicographic order.
    pub fn vertices(&self) -> &[IntVector] {
        &self.vertices
    }

    pub fn polyhedron(&self) -> &RationalPolyhedron {
        &self.poly
    }

    pub fn lattice_points(&self) -> Result<&[IntVector]> {
        match self.points.get_or_init(|| self.poly.lattice_points()) {
            Ok(p) => Ok(p),
            Err(e) => Err(e.clone()),
        }
    }

    pub fn contains(&self, x: &IntVector) -> bool {
        self.poly.contains_int(x)
    }

    /// Edges as pairs of vertex indices.
    pub fn edges(&self) -> Vec<(usize, usize)> {
        self.poly.edges()
    }

    /// Vertices joined to vertex `i` by an edge.
    pub fn neighbors(&self, i: usize) -> Vec<usize> {
        let mut out: Vec<usize> = self
            .edges()
            .into_iter()
            .filter_map(|(a, b)| {
                if a == i {
                    Some(b)
                } else if b == i {
                    Some(a)
                } else {
                    None
                }
            })
            .collect();
        out.sort();
        out
    }

    /// Primitive edge directions leaving vertex `i`.
    pub fn edge_directions(&self, i: usize) -> Vec<IntVector> {
        let v = &self.vertices[i];
        self.neighbors(i)
            .into_iter()
            .map(|j| {
                (&self.vertices[j] - v)
                    .primitive()
                    .expect("distinct vertices")
            })
            .collect()
    }

    pub fn feasible_cone(&self, i: usize) -> Result<Cone> {
        self.poly.feasible_cone(&self.vertices[i].to_q())
    }

    pub fn translated(&self, t: &IntVector) -> Result<Self> {
        let pts: Vec<IntVector> = self.vertices.iter().map(|v| v + t).collect();
        Self::new(&pts)
    }

    pub fn dilated(&self, k: i64) -> Result<Self> {
        let k = BigInt::from(k);
        let pts: Vec<IntVector> = self.vertices.iter().map(|v| v.scaled(&k)).collect();
        Self::new(&pts)
    }

    /// Barycenter of the vertices.
    pub fn barycenter(&self) -> QVector {
        average(&self.vertices)
    }

    /// `d + 1` vertices whose edge vectors from the first form a lattice
    /// basis.
    pub fn is_unimodular_simplex(&self) -> bool {
        let d = self.ambient_dim();
        if !self.is_full_dimensional() || self.vertices.len() != d + 1 {
            return false;
        }
        let v0 = &self.vertices[0];
        let cols: Vec<IntVector> = self.vertices[1..].iter().map(|v| v - v0).collect();
        IntMatrix::from_columns(&cols)
            .and_then(|m| m.det())
            .is_ok_and(|det| det.magnitude().is_one())
    }
}

pub(crate) fn average(points: &[IntVector]) -> QVector {
    let d = points[0].dim();
    let sum = points.iter().fold(IntVector::zeros(d), |acc, p| &acc + p);
    sum.to_q().scaled(&num_rational::BigRational::new(
        BigInt::one(),
        BigInt::from(points.len()),
    ))
}

/// `ω_P`: the cone over the vertices of `P` placed at height one.
pub fn omega_cone(p: &LatticePolytope) -> Cone {
    let gens = p.vertices().iter().map(|v| v.lifted(1));
    Cone::from_generators(p.ambient_dim() + 1, gens).expect("lifted vertices have equal length")
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GFlatReport {
    pub is_g_flat: bool,
    /// Hilbert basis elements of `ω_P` above height one.
    pub offending: Vec<IntVector>,
    /// When G-flat: the basis is exactly `P ∩ M` at height one.
    pub basis_matches_lattice_points: bool,
}

pub fn is_g_flat(p: &LatticePolytope) -> Result<GFlatReport> {
    let w = omega_cone(p);
    let hb = hilbert_basis(&w)?;
    let last = p.ambient_dim();
    let offending: Vec<IntVector> = hb
        .elements
        .iter()
        .filter(|h| !h[last].is_one())
        .cloned()
        .collect();
    let is_g_flat = offending.is_empty();
    let basis_matches_lattice_points = if is_g_flat {
        let mut lifted: Vec<IntVector> = p.lattice_points()?.iter().map(|m| m.lifted(1)).collect();
        lifted.sort();
        lifted == hb.elements
    } else {
        false
    };
    Ok(GFlatReport {
        is_g_flat,
        offending,
        basis_matches_lattice_points,
    })
}

/// Every vertex has exactly `d` edges whose primitive directions form a
/// lattice basis.
pub fn is_smooth(p: &LatticePolytope) -> Result<bool> {
    if !p.is_full_dimensional() {
        return Err(Error::NotFullDimensional);
    }
    let d = p.ambient_dim();
    for i in 0..p.vertices().len() {
        if !is_basis(&p.edge_directions(i), d)? {
            return Ok(false);
        }
    }
    Ok(true)
}

#[derive(Clone, Debug)]
pub struct HuntReport {
    /// Smooth candidates that were checked.
    pub scanned: Vec<String>,
    /// Smooth candidates whose `ω_P` has Hilbert elements above height one.
    pub smooth_not_g_flat: Vec<(String, GFlatReport)>,
    /// Candidates skipped because they are not smooth.
    pub not_smooth: Vec<String>,
}

/// Searches `candidates` for a smooth polytope that is not G-flat. Whether
/// one exists is open; the scan only reports what it finds.
pub fn hunt(candidates: &[(String, LatticePolytope)]) -> Result<HuntReport> {
    let mut report = HuntReport {
        scanned: Vec::new(),
        smooth_not_g_flat: Vec::new(),
        not_smooth: Vec::new(),
    };
    for (name, p) in candidates {
        if !p.is_full_dimensional() || !is_smooth(p)? {
            report.not_smooth.push(name.clone());
            continue;
        }
        report.scanned.push(name.clone());
        let g = is_g_flat(p)?;
        if !g.is_g_flat {
            report.smooth_not_g_flat.push((name.clone(), g));
        }
    }
    Ok(report)
}

/// `d` vectors forming a basis of `Z^d`, by Smith normal form.
pub(crate) fn is_basis(vectors: &[IntVector], d: usize) -> Result<bool> {
    if vectors.len() != d {
        return Ok(false);
    }
    let divisors = IntMatrix::from_rows(vectors)?.elementary_divisors();
    Ok(divisors.len() == d && divisors.iter().all(|e| e.is_one()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gstable::is_g_stable;

    fn iv(x: &[i64]) -> IntVector {
        IntVector::from(x)
    }

    #[test]
    fn omega_cones() {
        let seg = LatticePolytope::from_i64(&[&[0], &[1]]);
        assert_eq!(omega_cone(&seg), Cone::from_i64(&[&[0, 1], &[1, 1]]));
        let cube = unit_cube(3).unwrap();
        assert_eq!(omega_cone(&cube).rays().unwrap().len(), 8);
        let t = LatticePolytope::from_i64(&[&[1, 0, 0], &[0, 1, 0], &[0, 0, 1], &[1, 1, 1]]);
        let w = omega_cone(&t);
        assert_eq!(w.rays().unwrap().len(), 4);
        assert!(!w.is_regular());
    }

    #[test]
    fn g_flatness() {
        for p in [
            rhombus(),
            hexagon(),
            triangle(3).unwrap(),
            unit_cube(2).unwrap(),
        ] {
            let r = is_g_flat(&p).unwrap();
            assert!(r.is_g_flat && r.basis_matches_lattice_points);
        }
        let t = LatticePolytope::from_i64(&[&[1, 0, 0], &[0, 1, 0], &[0, 0, 1], &[1, 1, 1]]);
        let r = is_g_flat(&t).unwrap();
        assert!(!r.is_g_flat);
        assert_eq!(r.offending, vec![iv(&[1, 1, 1, 2])]);
        assert!(is_g_flat(&unit_cube(3).unwrap()).unwrap().is_g_flat);
    }

    #[test]
    fn smoothness() {
        assert!(!is_smooth(&rhombus()).unwrap());
        assert!(is_smooth(&hexagon()).unwrap());
        for d in 1..=4 {
            assert!(is_smooth(&standard_simplex(d).unwrap()).unwrap());
        }
        assert!(!is_smooth(&triangle(3).unwrap()).unwrap());
        let flat = LatticePolytope::from_i64(&[&[0, 0], &[1, 1]]);
        assert_eq!(is_smooth(&flat), Err(Error::NotFullDimensional));
    }

    #[test]
    fn cube_omega_not_g_stable() {
        let sub = Cone::from_i64(&[&[1, 0, 0, 1], &[0, 1, 0, 1], &[0, 0, 1, 1], &[1, 1, 1, 1]]);
        let hb = hilbert_basis(&sub).unwrap();
        assert!(hb.contains(&iv(&[1, 1, 1, 2])));
        let w = omega_cone(&unit_cube(3).unwrap());
        assert!(!hilbert_basis(&w).unwrap().contains(&iv(&[1, 1, 1, 2])));
        let r = is_g_stable(&w).unwrap();
        assert!(r.condition_i.holds);
        assert!(!r.is_g_stable);
    }

    #[test]
    fn unimodular_simplices() {
        assert!(standard_simplex(3).unwrap().is_unimodular_simplex());
        assert!(!k_simplex(2, 2).unwrap().is_unimodular_simplex());
        assert!(!unit_cube(2).unwrap().is_unimodular_simplex());
    }
}
