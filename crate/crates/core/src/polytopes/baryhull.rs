//! Corners, barycentric hulls, and the one-step resolution pipeline for
//! `X(ω_P)`.

use std::collections::{BTreeMap, BTreeSet};

use itertools::Itertools;
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;
use rayon::prelude::*;

use super::{average, is_g_flat, is_smooth, omega_cone, LatticePolytope};
use crate::error::{Error, Result};
use crate::linalg::{IntMatrix, IntVector, QVector};
use crate::nash::{compare_characteristics, nash_blowup_fan, AffineToricVariety};
use crate::polyhedra::{AmbientLattice, Cone, RationalPolyhedron};

/// Cap on `|P ∩ M|` for barycentric hulls.
pub const BARY_POINT_CAP: usize = 40;

/// Cap on the number of `(d+1)`-subsets of `P ∩ M`.
pub const BARY_SIMPLEX_CAP: u128 = 1_000_000;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Corner {
    pub vertex: IntVector,
    /// `vertex + primitive direction` for each edge at `vertex`.
    pub neighbors: Vec<IntVector>,
    pub barycenter: QVector,
}

impl Corner {
    pub fn points(&self) -> Vec<IntVector> {
        let mut pts = vec![self.vertex.clone()];
        pts.extend(self.neighbors.iter().cloned());
        pts
    }
}

/// One corner per vertex, or the polytope itself when it is a unimodular
/// simplex.
pub fn corners(p: &LatticePolytope) -> Result<Vec<Corner>> {
    if !is_smooth(p)? {
        return Err(Error::NotSmooth);
    }
    if p.is_unimodular_simplex() {
        let v = p.vertices();
        return Ok(vec![Corner {
            vertex: v[0].clone(),
            neighbors: v[1..].to_vec(),
            barycenter: average(v),
        }]);
    }
    Ok((0..p.vertices().len())
        .map(|i| {
            let vertex = p.vertices()[i].clone();
            let neighbors: Vec<IntVector> =
                p.edge_directions(i).iter().map(|e| &vertex + e).collect();
            let mut pts = vec![vertex.clone()];
            pts.extend(neighbors.iter().cloned());
            Corner {
                barycenter: average(&pts),
                vertex,
                neighbors,
            }
        })
        .collect())
}

#[derive(Clone, Debug)]
pub struct BaryHull {
    /// Number of affinely independent `(d+1)`-subsets of `P ∩ M`.
    pub simplex_count: usize,
    /// Distinct barycenters, sorted.
    pub barycenters: Vec<QVector>,
    /// How many simplices share each barycenter.
    pub multiplicities: Vec<usize>,
    pub hull: RationalPolyhedron,
    pub hull_vertices: Vec<QVector>,
}

impl BaryHull {
    /// The hull scaled by the common denominator of its vertices.
    pub fn scaled_hull(&self) -> Option<LatticePolytope> {
        scaled_to_lattice(&self.hull_vertices)
    }
}

fn binomial(n: usize, k: usize) -> u128 {
    if k > n {
        return 0;
    }
    (0..k as u128).fold(1u128, |acc, i| acc.saturating_mul(n as u128 - i) / (i + 1))
}

pub fn barycentric_hull(p: &LatticePolytope) -> Result<BaryHull> {
    if !p.is_full_dimensional() {
        return Err(Error::NotFullDimensional);
    }
    let d = p.ambient_dim();
    let pts = p.lattice_points()?;
    if pts.len() > BARY_POINT_CAP {
        return Err(Error::cap(
            "lattice points for barycentric hull",
            BARY_POINT_CAP as u128,
            pts.len() as u128,
        ));
    }
    let n = binomial(pts.len(), d + 1);
    if n > BARY_SIMPLEX_CAP {
        return Err(Error::cap(
            "simplices for barycentric hull",
            BARY_SIMPLEX_CAP,
            n,
        ));
    }
    let subsets: Vec<Vec<usize>> = (0..pts.len()).combinations(d + 1).collect();
    let found: Vec<Option<QVector>> = subsets
        .par_iter()
        .map(|s| {
            let v0 = &pts[s[0]];
            let cols: Vec<IntVector> = s[1..].iter().map(|&i| &pts[i] - v0).collect();
            let det = IntMatrix::from_columns(&cols)?.det()?;
            if det.is_zero() {
                return Ok(None);
            }
            let verts: Vec<IntVector> = s.iter().map(|&i| pts[i].clone()).collect();
            Ok(Some(average(&verts)))
        })
        .collect::<Result<_>>()?;
    let simplex_count = found.iter().filter(|b| b.is_some()).count();
    let mut counts: BTreeMap<QVector, usize> = BTreeMap::new();
    for b in found.into_iter().flatten() {
        *counts.entry(b).or_default() += 1;
    }
    let (barycenters, multiplicities): (Vec<QVector>, Vec<usize>) = counts.into_iter().unzip();
    let hull = RationalPolyhedron::new(&barycenters, &Cone::zero(AmbientLattice::standard(d)))?;
    let hull_vertices = hull.vertices().to_vec();
    Ok(BaryHull {
        simplex_count,
        barycenters,
        multiplicities,
        hull,
        hull_vertices,
    })
}

/// One flag per clause of the barycentric hull theorem. Clauses 2 to 5 are
/// vacuous for a unimodular simplex, whose hull must be a point.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BaryhullReport {
    pub simplex_case: bool,
    pub hull_equals_corner_barycenters: bool,
    pub bijection: bool,
    pub edges_parallel: bool,
    pub fcones_match: bool,
    pub hull_smooth: bool,
    pub corner_count: usize,
    pub hull_vertex_count: usize,
}

impl BaryhullReport {
    pub fn all_pass(&self) -> bool {
        self.failures().is_empty()
    }

    pub fn failures(&self) -> Vec<&'static str> {
        let mut out = Vec::new();
        if !self.hull_equals_corner_barycenters {
            out.push("hull vertices differ from corner barycenters");
        }
        if !self.bijection {
            out.push("vertex to corner barycenter map is not a bijection");
        }
        if !self.edges_parallel {
            out.push("edge of P without a parallel hull edge");
        }
        if !self.fcones_match {
            out.push("feasible cones differ");
        }
        if !self.hull_smooth {
            out.push("barycentric hull is not smooth");
        }
        out
    }
}

pub fn verify_baryhull_theorem(p: &LatticePolytope) -> Result<BaryhullReport> {
    let cs = corners(p)?;
    let bh = barycentric_hull(p)?;
    let hull_set: BTreeSet<&QVector> = bh.hull_vertices.iter().collect();
    let corner_set: BTreeSet<&QVector> = cs.iter().map(|c| &c.barycenter).collect();
    let hull_equals_corner_barycenters = hull_set == corner_set;
    let mut report = BaryhullReport {
        simplex_case: p.is_unimodular_simplex(),
        hull_equals_corner_barycenters,
        bijection: true,
        edges_parallel: true,
        fcones_match: true,
        hull_smooth: true,
        corner_count: cs.len(),
        hull_vertex_count: bh.hull_vertices.len(),
    };
    if report.simplex_case {
        report.bijection = bh.hull_vertices.len() == 1;
        return Ok(report);
    }

    let image: Vec<&QVector> = cs.iter().map(|c| &c.barycenter).collect();
    let distinct: BTreeSet<&QVector> = image.iter().copied().collect();
    report.bijection = distinct.len() == image.len() && distinct == hull_set;

    let index_of = |x: &QVector| bh.hull_vertices.iter().position(|v| v == x);
    let hull_edges: BTreeSet<(usize, usize)> = bh
        .hull
        .edges()
        .into_iter()
        .map(|(a, b)| (a.min(b), a.max(b)))
        .collect();
    let verts = p.vertices();
    for (i, j) in p.edges() {
        let (Some(a), Some(b)) = (index_of(image[i]), index_of(image[j])) else {
            report.edges_parallel = false;
            continue;
        };
        let is_edge = hull_edges.contains(&(a.min(b), a.max(b)));
        let parallel = (image[j] - image[i])
            .direction()
            .is_ok_and(|dir| Ok(dir) == (&verts[j] - &verts[i]).primitive());
        report.edges_parallel &= is_edge && parallel;
    }

    for (i, c) in cs.iter().enumerate() {
        let f_p = p.feasible_cone(i)?;
        let same = bh
            .hull
            .feasible_cone(&c.barycenter)
            .is_ok_and(|f_b| f_b == f_p);
        report.fcones_match &= same;
    }

    report.hull_smooth = match scaled_to_lattice(&bh.hull_vertices) {
        Some(q) => is_smooth(&q)?,
        None => false,
    };
    Ok(report)
}

/// The polytope with vertices `L · x`, `L` the common denominator.
fn scaled_to_lattice(points: &[QVector]) -> Option<LatticePolytope> {
    let l = points.iter().fold(BigInt::from(1), |acc, v| {
        num_integer::Integer::lcm(&acc, &v.denominator_lcm())
    });
    let l = BigRational::from_integer(l);
    let pts: Vec<IntVector> = points
        .iter()
        .map(|v| v.scaled(&l).to_int())
        .collect::<Option<_>>()?;
    LatticePolytope::new(&pts).ok()
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OneStepReport {
    pub smooth: bool,
    pub g_flat: bool,
    pub relevant_primes: BTreeSet<u64>,
    /// Whether every chart of the blowup is regular, per characteristic.
    pub smooth_by_char: Vec<(u64, bool)>,
    /// Vertex sets of `N_0` and `N_p` agree for every relevant prime.
    pub char_independent: bool,
    /// When `P` is smooth and G-flat: the vertices of `N_0(ω_P)` are those of
    /// `(d+1)(B(P), 1)`.
    pub newton_matches_baryhull: Option<bool>,
}

impl OneStepReport {
    pub fn hypotheses_hold(&self) -> bool {
        self.smooth && self.g_flat
    }

    pub fn resolved(&self) -> bool {
        self.smooth_by_char.iter().all(|(_, s)| *s)
    }

    pub fn verdict(&self) -> &'static str {
        match (self.resolved(), self.char_independent) {
            (true, true) => "resolved, characteristic-independent",
            (true, false) => "resolved, characteristic-dependent",
            (false, true) => "not resolved, characteristic-independent",
            (false, false) => "not resolved, characteristic-dependent",
        }
    }
}

/// Normalized Nash blowup of `X(ω_P)` in characteristic 0 and in every
/// relevant prime.
pub fn one_step_resolution(p: &LatticePolytope) -> Result<OneStepReport> {
    if !p.is_full_dimensional() {
        return Err(Error::NotFullDimensional);
    }
    let smooth = is_smooth(p)?;
    let g_flat = is_g_flat(p)?.is_g_flat;
    let x = AffineToricVariety::from_dual(&omega_cone(p))?;
    let cmp = compare_characteristics(&x)?;
    let mut smooth_by_char = Vec::new();
    for ch in std::iter::once(0).chain(cmp.relevant_primes.iter().copied()) {
        smooth_by_char.push((ch, nash_blowup_fan(&x, ch)?.smooth));
    }
    let newton_matches_baryhull = if smooth && g_flat {
        match barycentric_hull(p) {
            Ok(bh) => {
                let k = BigRational::from_integer(BigInt::from(p.ambient_dim() + 1));
                let mut expected: Vec<QVector> = bh
                    .hull_vertices
                    .iter()
                    .map(|b| b.scaled(&k).lifted(k.clone()))
                    .collect();
                expected.sort();
                Some(expected == cmp.vertices_zero)
            }
            Err(e) if e.is_resource_cap() => None,
            Err(e) => return Err(e),
        }
    } else {
        None
    };
    Ok(OneStepReport {
        smooth,
        g_flat,
        relevant_primes: cmp.relevant_primes,
        smooth_by_char,
        char_independent: cmp.equal_for_all,
        newton_matches_baryhull,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::rat;
    use crate::polytopes::{hexagon, k_simplex, rhombus, standard_simplex, triangle, unit_cube};

    fn qv(x: &[(i64, i64)]) -> QVector {
        QVector::new(x.iter().map(|&(n, d)| rat(n, d)).collect())
    }

    fn iv(x: &[i64]) -> IntVector {
        IntVector::from(x)
    }

    #[test]
    fn square_corners() {
        let sq = unit_cube(2).unwrap();
        let cs = corners(&sq).unwrap();
        assert_eq!(cs.len(), 4);
        let c0 = cs.iter().find(|c| c.vertex == iv(&[0, 0])).unwrap();
        assert_eq!(c0.neighbors, vec![iv(&[0, 1]), iv(&[1, 0])]);
        assert_eq!(c0.barycenter, qv(&[(1, 3), (1, 3)]));
        assert_eq!(corners(&rhombus()), Err(Error::NotSmooth));
    }

    #[test]
    fn simplex_corners() {
        for d in 2..=4 {
            let s = standard_simplex(d).unwrap();
            let cs = corners(&s).unwrap();
            assert_eq!(cs.len(), 1);
            let bary = QVector::new(vec![rat(1, d as i64 + 1); d]);
            assert_eq!(cs[0].barycenter, bary);
        }
        assert_eq!(corners(&k_simplex(2, 2).unwrap()).unwrap().len(), 3);
    }

    #[test]
    fn rhombus_hull() {
        let bh = barycentric_hull(&rhombus()).unwrap();
        assert_eq!(bh.simplex_count, 8);
        assert_eq!(
            bh.hull_vertices,
            vec![
                qv(&[(-1, 3), (-1, 3)]),
                qv(&[(-1, 3), (1, 3)]),
                qv(&[(1, 3), (-1, 3)]),
                qv(&[(1, 3), (1, 3)]),
            ]
        );
        assert!(!bh.barycenters.contains(&qv(&[(0, 1), (0, 1)])));
        assert!(is_smooth(&bh.scaled_hull().unwrap()).unwrap());
    }

    #[test]
    fn hexagon_hull() {
        let bh = barycentric_hull(&hexagon()).unwrap();
        assert_eq!(bh.simplex_count, 32);
        let origin = bh.barycenters.iter().position(|b| b.is_zero()).unwrap();
        assert_eq!(bh.multiplicities[origin], 2);
        assert_eq!(bh.multiplicities.iter().sum::<usize>(), 32);
        let r = verify_baryhull_theorem(&hexagon()).unwrap();
        assert!(r.all_pass(), "{:?}", r.failures());
        assert_eq!((r.corner_count, r.hull_vertex_count), (6, 6));
    }

    #[test]
    fn square_theorem() {
        let r = verify_baryhull_theorem(&unit_cube(2).unwrap()).unwrap();
        assert!(r.all_pass());
        let bh = barycentric_hull(&unit_cube(2).unwrap()).unwrap();
        assert_eq!(
            bh.hull_vertices,
            vec![
                qv(&[(1, 3), (1, 3)]),
                qv(&[(1, 3), (2, 3)]),
                qv(&[(2, 3), (1, 3)]),
                qv(&[(2, 3), (2, 3)]),
            ]
        );
    }

    #[test]
    fn simplex_theorem() {
        let r = verify_baryhull_theorem(&standard_simplex(2).unwrap()).unwrap();
        assert!(r.simplex_case && r.all_pass());
        assert_eq!(r.hull_vertex_count, 1);
    }

    #[test]
    fn one_step() {
        let sq = one_step_resolution(&unit_cube(2).unwrap()).unwrap();
        assert!(sq.hypotheses_hold() && sq.resolved() && sq.char_independent);
        assert_eq!(sq.newton_matches_baryhull, Some(true));
        let t = one_step_resolution(&triangle(3).unwrap()).unwrap();
        assert!(!t.smooth && t.g_flat);
        assert!(t.resolved());
        let rh = one_step_resolution(&rhombus()).unwrap();
        assert!(!rh.hypotheses_hold());
        assert_eq!(rh.newton_matches_baryhull, None);
    }
}
