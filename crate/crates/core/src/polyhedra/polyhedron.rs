use std::collections::BTreeSet;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive, Zero};

use super::cone::{rank_of, Cone};
use super::dd::double_description;
use super::lattice::AmbientLattice;
use crate::error::{Error, Result};
use crate::fans::Fan;
use crate::linalg::{IntVector, QVector};

/// Largest bounding box scanned by [`RationalPolyhedron::lattice_points`].
pub const LATTICE_BOX_CAP: u128 = 20_000_000;

/// `Conv(points) + recession`, kept both as vertices and as inequalities.
///
/// Internally the polyhedron is the height-one slice of its homogenization,
/// the cone over `(p, 1)` for points and `(r, 0)` for recession rays.
#[derive(Clone, Debug)]
pub struct RationalPolyhedron {
    recession: Cone,
    vertices: Vec<QVector>,
    recession_rays: Vec<IntVector>,
    /// `(a, c)` meaning `<a, x> >= c`.
    inequalities: Vec<(IntVector, BigInt)>,
    /// `(a, c)` meaning `<a, x> = c`.
    equations: Vec<(IntVector, BigInt)>,
    homogenized: Cone,
}

/// A nonempty face, described by the inequalities tight on it.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct FaceDescriptor {
    pub tight_inequality_indices: BTreeSet<usize>,
    pub dim: usize,
    pub is_compact: bool,
    pub vertex_indices: BTreeSet<usize>,
    /// Indices into the recession rays contained in the face.
    pub ray_indices: BTreeSet<usize>,
}

fn homogenize_point(p: &QVector) -> IntVector {
    let (v, den) = p.clear_denominators();
    v.lifted(den)
}

impl RationalPolyhedron {
    /// Builds `Conv(points) + rec`. The recession cone must be pointed.
    pub fn new(points: &[QVector], rec: &Cone) -> Result<Self> {
        if points.is_empty() {
            return Err(Error::InvalidInput(
                "polyhedron needs at least one point".into(),
            ));
        }
        let r = rec.ambient_rank();
        for p in points {
            if p.dim() != r {
                return Err(Error::DimensionMismatch {
                    expected: r,
                    found: p.dim(),
                });
            }
        }
        let recession_rays = rec.rays()?.to_vec();
        let mut gens: Vec<IntVector> = points.iter().map(homogenize_point).collect();
        gens.extend(recession_rays.iter().map(|ray| ray.lifted(0)));
        let homogenized = Cone::from_generators(r + 1, gens)?;

        let mut vertices: Vec<QVector> = homogenized
            .rays()?
            .iter()
            .filter(|g| g[r].is_positive())
            .map(|g| {
                let den = g[r].clone();
                QVector::new(
                    g.coords()[..r]
                        .iter()
                        .map(|x| BigRational::new(x.clone(), den.clone()))
                        .collect(),
                )
            })
            .collect();
        vertices.sort();

        let point_rays: Vec<&IntVector> = homogenized
            .rays()?
            .iter()
            .filter(|g| g[r].is_positive())
            .collect();
        let mut inequalities: Vec<(IntVector, BigInt)> = homogenized
            .facets()
            .iter()
            .filter(|f| point_rays.iter().any(|g| f.dot(g).is_zero()))
            .map(|f| (f.truncated(), -f[r].clone()))
            .collect();
        inequalities.sort();
        let equations = homogenized
            .equations()
            .iter()
            .map(|e| (e.truncated(), -e[r].clone()))
            .collect();
        Ok(RationalPolyhedron {
            recession: rec.clone(),
            vertices,
            recession_rays,
            inequalities,
            equations,
            homogenized,
        })
    }

    /// The polyhedron `{x : <a, x> >= c}` given by inequalities, which must
    /// describe a nonempty pointed polyhedron.
    pub fn from_inequalities(
        lattice: AmbientLattice,
        ineqs: &[(IntVector, BigInt)],
    ) -> Result<Self> {
        let r = lattice.rank();
        let mut cons: Vec<IntVector> = ineqs.iter().map(|(a, c)| a.lifted(-c)).collect();
        cons.push(IntVector::unit(r + 1, r));
        let out = double_description(r + 1, &cons);
        if !out.lineality.is_empty() {
            return Err(Error::NotPointed);
        }
        let mut points = Vec::new();
        let mut rec = Vec::new();
        for g in out.rays {
            if g[r].is_positive() {
                let den = g[r].clone();
                points.push(QVector::new(
                    g.coords()[..r]
                        .iter()
                        .map(|x| BigRational::new(x.clone(), den.clone()))
                        .collect(),
                ));
            } else {
                rec.push(g.truncated());
            }
        }
        if points.is_empty() {
            return Err(Error::InvalidInput(
                "inequalities define an empty polyhedron".into(),
            ));
        }
        Self::new(&points, &Cone::new(lattice, rec)?)
    }

    /// Intersection with a cone of the same lattice.
    pub fn intersect_cone(&self, c: &Cone) -> Result<Self> {
        let zero = BigInt::zero();
        let mut ineqs: Vec<(IntVector, BigInt)> = self.inequalities.clone();
        for (a, k) in &self.equations {
            ineqs.push((a.clone(), k.clone()));
            ineqs.push((-a, -k));
        }
        for f in c.facets() {
            ineqs.push((f.clone(), zero.clone()));
        }
        for e in c.equations() {
            ineqs.push((e.clone(), zero.clone()));
            ineqs.push((-e, zero.clone()));
        }
        Self::from_inequalities(self.lattice().clone(), &ineqs)
    }

    /// Same vertices and same recession cone.
    pub fn same_as(&self, other: &RationalPolyhedron) -> bool {
        self.vertices == other.vertices && self.recession == other.recession
    }

    /// Convex hull of integer points in `Z^dim`.
    pub fn polytope(dim: usize, points: &[IntVector]) -> Result<Self> {
        let pts: Vec<QVector> = points.iter().map(IntVector::to_q).collect();
        Self::new(&pts, &Cone::zero(AmbientLattice::standard(dim)))
    }

    pub fn lattice(&self) -> &AmbientLattice {
        self.recession.lattice()
    }

    pub fn ambient_rank(&self) -> usize {
        self.recession.ambient_rank()
    }

    pub fn dim(&self) -> usize {
        self.homogenized.dim() - 1
    }

    /// Vertices in increasing lexicographic order.
    pub fn vertices(&self) -> &[QVector] {
        &self.vertices
    }

    pub fn recession(&self) -> &Cone {
        &self.recession
    }

    pub fn recession_rays(&self) -> &[IntVector] {
        &self.recession_rays
    }

    pub fn inequalities(&self) -> &[(IntVector, BigInt)] {
        &self.inequalities
    }

    pub fn equations(&self) -> &[(IntVector, BigInt)] {
        &self.equations
    }

    pub fn is_bounded(&self) -> bool {
        self.recession_rays.is_empty()
    }

    pub fn is_vertex(&self, x: &QVector) -> bool {
        self.vertices.binary_search(x).is_ok()
    }

    pub fn contains(&self, x: &QVector) -> bool {
        let c = |k: &BigInt| BigRational::from_integer(k.clone());
        self.equations.iter().all(|(a, k)| a.dot_q(x) == c(k))
            && self.inequalities.iter().all(|(a, k)| a.dot_q(x) >= c(k))
    }

    pub fn contains_int(&self, x: &IntVector) -> bool {
        self.equations.iter().all(|(a, k)| &a.dot(x) == k)
            && self.inequalities.iter().all(|(a, k)| &a.dot(x) >= k)
    }

    fn descriptor(
        &self,
        vertex_indices: BTreeSet<usize>,
        ray_indices: BTreeSet<usize>,
    ) -> FaceDescriptor {
        let r = self.ambient_rank();
        let mut gens: Vec<IntVector> = vertex_indices
            .iter()
            .map(|&i| homogenize_point(&self.vertices[i]))
            .collect();
        gens.extend(
            ray_indices
                .iter()
                .map(|&i| self.recession_rays[i].lifted(0)),
        );
        let tight = (0..self.inequalities.len())
            .filter(|&k| {
                let (a, c) = &self.inequalities[k];
                let h = a.lifted(-c);
                gens.iter().all(|g| h.dot(g).is_zero())
            })
            .collect();
        debug_assert!(gens.iter().all(|g| g.dim() == r + 1));
        FaceDescriptor {
            tight_inequality_indices: tight,
            dim: rank_of(&gens) - 1,
            is_compact: ray_indices.is_empty(),
            vertex_indices,
            ray_indices,
        }
    }

    /// All nonempty faces, the polyhedron itself included.
    pub fn faces(&self) -> Vec<FaceDescriptor> {
        let r = self.ambient_rank();
        let sets = self
            .homogenized
            .face_ray_sets()
            .expect("homogenization of a pointed polyhedron is pointed");
        let mut out: Vec<FaceDescriptor> = sets
            .into_iter()
            .filter_map(|set| {
                let mut vs = BTreeSet::new();
                let mut rs = BTreeSet::new();
                for g in &set {
                    if g[r].is_positive() {
                        let den = g[r].clone();
                        let q = QVector::new(
                            g.coords()[..r]
                                .iter()
                                .map(|x| BigRational::new(x.clone(), den.clone()))
                                .collect(),
                        );
                        vs.insert(self.vertices.binary_search(&q).expect("vertex"));
                    } else {
                        let ray = g.truncated();
                        rs.insert(
                            self.recession_rays
                                .iter()
                                .position(|x| *x == ray)
                                .expect("recession ray"),
                        );
                    }
                }
                (!vs.is_empty()).then(|| self.descriptor(vs, rs))
            })
            .collect();
        out.sort_by(|a, b| a.dim.cmp(&b.dim).then_with(|| a.cmp(b)));
        out
    }

    pub fn compact_faces(&self) -> Vec<FaceDescriptor> {
        self.faces().into_iter().filter(|f| f.is_compact).collect()
    }

    /// Bounded edges as pairs of vertex indices.
    pub fn edges(&self) -> Vec<(usize, usize)> {
        self.faces()
            .into_iter()
            .filter(|f| f.dim == 1 && f.is_compact)
            .map(|f| {
                let v: Vec<usize> = f.vertex_indices.into_iter().collect();
                (v[0], v[1])
            })
            .collect()
    }

    /// The smallest face containing `x`.
    pub fn minimal_face_at(&self, x: &QVector) -> Result<FaceDescriptor> {
        if !self.contains(x) {
            return Err(Error::NotInPolyhedron);
        }
        let tight: Vec<&(IntVector, BigInt)> = self
            .inequalities
            .iter()
            .filter(|(a, c)| a.dot_q(x) == BigRational::from_integer(c.clone()))
            .collect();
        let vs = (0..self.vertices.len())
            .filter(|&i| {
                tight.iter().all(|(a, c)| {
                    a.dot_q(&self.vertices[i]) == BigRational::from_integer(c.clone())
                })
            })
            .collect();
        let rs = (0..self.recession_rays.len())
            .filter(|&i| {
                tight
                    .iter()
                    .all(|(a, _)| a.dot(&self.recession_rays[i]).is_zero())
            })
            .collect();
        Ok(self.descriptor(vs, rs))
    }

    /// The polytope spanned by the vertices of a face.
    pub fn face_polytope(&self, face: &FaceDescriptor) -> Result<RationalPolyhedron> {
        let pts: Vec<QVector> = face
            .vertex_indices
            .iter()
            .map(|&i| self.vertices[i].clone())
            .collect();
        RationalPolyhedron::new(&pts, &Cone::zero(self.lattice().clone()))
    }

    /// Cone of directions from the vertex `v` into the polyhedron, recession
    /// included.
    pub fn feasible_cone(&self, v: &QVector) -> Result<Cone> {
        if !self.is_vertex(v) {
            return Err(Error::NotAVertex);
        }
        let mut gens = Vec::new();
        for w in &self.vertices {
            if w != v {
                gens.push((w - v).direction()?);
            }
        }
        gens.extend(self.recession_rays.iter().cloned());
        Cone::new(self.lattice().clone(), gens)
    }

    /// Fan of duals of the feasible cones, one maximal cone per vertex.
    pub fn normal_fan(&self) -> Result<Fan> {
        let cones = self
            .vertices
            .iter()
            .map(|v| Ok(self.feasible_cone(v)?.dual()))
            .collect::<Result<Vec<_>>>()?;
        Fan::new(self.lattice().clone(), cones)
    }

    /// Integer points of a bounded polyhedron, in lexicographic order.
    pub fn lattice_points(&self) -> Result<Vec<IntVector>> {
        if !self.is_bounded() {
            return Err(Error::Unbounded);
        }
        let r = self.ambient_rank();
        let mut lo = Vec::with_capacity(r);
        let mut hi = Vec::with_capacity(r);
        let mut size: u128 = 1;
        for i in 0..r {
            let (mut a, mut b) = (None::<BigInt>, None::<BigInt>);
            for v in &self.vertices {
                let c = v[i].ceil().to_integer();
                let f = v[i].floor().to_integer();
                a = Some(a.map_or(c.clone(), |x| x.min(c)));
                b = Some(b.map_or(f.clone(), |x| x.max(f)));
            }
            let (a, b) = (a.expect("vertex"), b.expect("vertex"));
            if a > b {
                return Ok(Vec::new());
            }
            let width = (&b - &a + 1u32).to_u128().unwrap_or(u128::MAX);
            size = size.saturating_mul(width);
            lo.push(a);
            hi.push(b);
        }
        if size > LATTICE_BOX_CAP {
            return Err(Error::cap("lattice point box", LATTICE_BOX_CAP, size));
        }
        let mut out = Vec::new();
        let mut cur = lo.clone();
        loop {
            let p = IntVector::new(cur.clone());
            if self.contains_int(&p) {
                out.push(p);
            }
            // odometer, last coordinate fastest
            let mut i = r;
            loop {
                if i == 0 {
                    return Ok(out);
                }
                i -= 1;
                if cur[i] < hi[i] {
                    cur[i] += 1u32;
                    cur[i + 1..r].clone_from_slice(&lo[i + 1..r]);
                    break;
                }
            }
        }
    }

    /// Least common multiple of the vertex denominators.
    pub fn vertex_denominator(&self) -> BigInt {
        self.vertices
            .iter()
            .fold(BigInt::from(1), |l, v| l.lcm(&v.denominator_lcm()))
    }
}

/// `Conv(points) + rec` with redundant points dropped.
pub fn minkowski_polyhedron(points: &[QVector], rec: &Cone) -> Result<RationalPolyhedron> {
    RationalPolyhedron::new(points, rec)
}

impl FaceDescriptor {
    pub fn contains_vertex(&self, i: usize) -> bool {
        self.vertex_indices.contains(&i)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::rat;

    fn q(x: &[i64]) -> QVector {
        IntVector::from(x).to_q()
    }

    fn iv(x: &[i64]) -> IntVector {
        IntVector::from(x)
    }

    fn unit_square() -> RationalPolyhedron {
        RationalPolyhedron::polytope(2, &[iv(&[0, 0]), iv(&[1, 0]), iv(&[0, 1]), iv(&[1, 1])])
            .unwrap()
    }

    #[test]
    fn single_point() {
        let p = RationalPolyhedron::new(&[q(&[2, -1])], &Cone::zero(AmbientLattice::standard(2)))
            .unwrap();
        assert_eq!(p.vertices(), &[q(&[2, -1])]);
        assert_eq!(p.dim(), 0);
        assert_eq!(p.faces().len(), 1);
    }

    #[test]
    fn bounded_faces_are_compact() {
        let p = unit_square();
        let faces = p.faces();
        assert_eq!(faces.len(), 4 + 4 + 1);
        assert!(faces.iter().all(|f| f.is_compact));
        assert_eq!(p.edges().len(), 4);
    }

    #[test]
    fn triangle_family_vertices() {
        for n in [2i64, 3, 5] {
            let rec = Cone::from_i64(&[&[0, 0, 1], &[n, 0, 1], &[0, 1, 0]]);
            let p = minkowski_polyhedron(&[q(&[1, 1, 3]), q(&[2 * n - 1, 1, 3])], &rec).unwrap();
            assert_eq!(p.vertices(), &[q(&[1, 1, 3]), q(&[2 * n - 1, 1, 3])]);
            let fc = p.feasible_cone(&q(&[1, 1, 3])).unwrap();
            assert_eq!(fc, Cone::from_i64(&[&[1, 0, 0], &[0, 1, 0], &[0, 0, 1]]));
        }
    }

    #[test]
    fn redundant_points_are_dropped() {
        let sigma_dual = Cone::from_i64(&[&[1, 0, 0], &[0, 1, 0], &[2, 2, 3]]);
        let pts = [q(&[3, 4, 4]), q(&[4, 3, 4]), q(&[2, 2, 1]), q(&[3, 3, 3])];
        let n0 = minkowski_polyhedron(&pts, &sigma_dual).unwrap();
        assert_eq!(
            n0.vertices(),
            &[q(&[2, 2, 1]), q(&[3, 4, 4]), q(&[4, 3, 4])]
        );
        assert!(!n0.is_vertex(&q(&[3, 3, 3])));
        assert!(n0.contains(&q(&[3, 3, 3])));
        assert_eq!(n0.recession(), &sigma_dual);
    }

    #[test]
    fn segment_is_the_compact_face() {
        // Gamma_+ of Cone((1,0),(1,3)) is Conv of its Hilbert basis plus the cone
        let rec = Cone::from_i64(&[&[1, 0], &[1, 3]]);
        let pts: Vec<QVector> = (0..=3).map(|k| q(&[1, k])).collect();
        let g = minkowski_polyhedron(&pts, &rec).unwrap();
        let compact: Vec<FaceDescriptor> = g
            .compact_faces()
            .into_iter()
            .filter(|f| f.dim == 1)
            .collect();
        assert_eq!(compact.len(), 1);
        let verts: Vec<&QVector> = compact[0]
            .vertex_indices
            .iter()
            .map(|&i| &g.vertices()[i])
            .collect();
        assert_eq!(verts, vec![&q(&[1, 0]), &q(&[1, 3])]);
    }

    #[test]
    fn minimal_faces() {
        let p = unit_square();
        assert_eq!(p.minimal_face_at(&q(&[0, 0])).unwrap().dim, 0);
        let interior = QVector::new(vec![rat(1, 2), rat(1, 3)]);
        assert_eq!(p.minimal_face_at(&interior).unwrap().dim, 2);
        let mid = QVector::new(vec![rat(1, 2), rat(0, 1)]);
        let e = p.minimal_face_at(&mid).unwrap();
        assert_eq!(e.dim, 1);
        assert_eq!(e.vertex_indices.len(), 2);
        assert!(p.faces().contains(&e));
        assert_eq!(p.minimal_face_at(&q(&[2, 0])), Err(Error::NotInPolyhedron));
    }

    #[test]
    fn feasible_cone_at_square_corner() {
        let p = unit_square();
        assert_eq!(
            p.feasible_cone(&q(&[0, 0])).unwrap(),
            Cone::from_i64(&[&[1, 0], &[0, 1]])
        );
        assert_eq!(
            p.feasible_cone(&QVector::new(vec![rat(1, 2), rat(0, 1)]))
                .unwrap_err(),
            Error::NotAVertex
        );
    }

    #[test]
    fn lattice_point_counts() {
        assert_eq!(unit_square().lattice_points().unwrap().len(), 4);
        let hexagon = RationalPolyhedron::polytope(
            2,
            &[
                iv(&[1, 0]),
                iv(&[1, 1]),
                iv(&[0, 1]),
                iv(&[-1, 0]),
                iv(&[-1, -1]),
                iv(&[0, -1]),
            ],
        )
        .unwrap();
        assert_eq!(hexagon.lattice_points().unwrap().len(), 7);
        let tri =
            RationalPolyhedron::polytope(2, &[iv(&[0, 0]), iv(&[3, 0]), iv(&[0, 1])]).unwrap();
        assert_eq!(tri.lattice_points().unwrap().len(), 5);
        let rec = Cone::from_i64(&[&[1, 0], &[0, 1]]);
        let unbounded = RationalPolyhedron::new(&[q(&[0, 0])], &rec).unwrap();
        assert_eq!(unbounded.lattice_points(), Err(Error::Unbounded));
    }

    #[test]
    fn normal_fans() {
        let simplex = RationalPolyhedron::polytope(
            3,
            &[
                iv(&[0, 0, 0]),
                iv(&[1, 0, 0]),
                iv(&[0, 1, 0]),
                iv(&[0, 0, 1]),
            ],
        )
        .unwrap();
        let fan = simplex.normal_fan().unwrap();
        assert_eq!(fan.maximal_cones().len(), 4);
        assert!(fan.is_complete_by_sampling(3, 2));

        let sigma = Cone::from_i64(&[&[1, 0, 0], &[0, 1, 0], &[1, 1, 3]]);
        let single = RationalPolyhedron::new(&[q(&[1, 2, 3])], &sigma.dual()).unwrap();
        let fan = single.normal_fan().unwrap();
        assert_eq!(fan.maximal_cones(), &[sigma]);
    }
}
