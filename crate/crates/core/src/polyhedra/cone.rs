use std::collections::BTreeSet;
use std::fmt;
use std::sync::OnceLock;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use super::dd::double_description;
use super::lattice::AmbientLattice;
use crate::error::{Error, Result};
use crate::linalg::{IntMatrix, IntVector, QVector};

/// Rational polyhedral cone given by integer generators in lattice
/// coordinates.
///
/// Generators are stored primitive, deduplicated and sorted. Rays, facets and
/// flags are computed on first use and cached.
#[derive(Clone)]
pub struct Cone {
    lattice: AmbientLattice,
    generators: Vec<IntVector>,
    data: OnceLock<ConeData>,
}

#[derive(Clone, Debug)]
struct ConeData {
    dim: usize,
    /// Basis of the orthogonal complement of the span.
    equations: Vec<IntVector>,
    /// Inward facet normals, projected into the span so they are canonical.
    facets: Vec<IntVector>,
    /// Extreme rays; `None` when the cone contains a line.
    rays: Option<Vec<IntVector>>,
}

pub(crate) fn rank_of(vectors: &[IntVector]) -> usize {
    if vectors.is_empty() {
        return 0;
    }
    IntMatrix::from_rows(vectors)
        .expect("vectors of equal length")
        .rank()
}

/// Orthogonal projection of `y` onto the complement of `span(eqs)`, scaled to a
/// primitive integer vector.
fn project_out(y: &IntVector, eqs: &[IntVector]) -> IntVector {
    if eqs.is_empty() {
        return y.clone();
    }
    let k = eqs.len();
    let mut gram = Vec::with_capacity(k);
    for a in eqs {
        gram.push(IntVector::new(eqs.iter().map(|b| a.dot(b)).collect()));
    }
    let rhs = IntVector::new(eqs.iter().map(|a| a.dot(y)).collect());
    let c = IntMatrix::from_rows(&gram)
        .expect("square gram matrix")
        .solve_rational(&rhs)
        .expect("gram matrix of a basis is invertible");
    let mut out = y.to_q();
    for (ci, e) in c.iter().zip(eqs) {
        out = &out - &e.to_q().scaled(ci);
    }
    out.direction()
        .expect("facet normal outside the equation span")
}

impl Cone {
    /// Cone generated by `gens` in the given lattice. Zero generators are
    /// dropped.
    pub fn new(lattice: AmbientLattice, gens: impl IntoIterator<Item = IntVector>) -> Result<Self> {
        let r = lattice.rank();
        let mut generators = Vec::new();
        for g in gens {
            if g.dim() != r {
                return Err(Error::DimensionMismatch {
                    expected: r,
                    found: g.dim(),
                });
            }
            if !g.is_zero() {
                generators.push(g.primitive()?);
            }
        }
        generators.sort();
        generators.dedup();
        Ok(Cone {
            lattice,
            generators,
            data: OnceLock::new(),
        })
    }

    /// Cone in the standard lattice `Z^dim`.
    pub fn from_generators(dim: usize, gens: impl IntoIterator<Item = IntVector>) -> Result<Self> {
        Self::new(AmbientLattice::standard(dim), gens)
    }

    /// Convenience constructor from small integer rows; panics on bad input.
    pub fn from_i64(gens: &[&[i64]]) -> Self {
        let dim = gens.first().expect("at least one generator").len();
        Self::from_generators(dim, gens.iter().map(|g| IntVector::from(*g)))
            .expect("generators of equal length")
    }

    pub fn zero(lattice: AmbientLattice) -> Self {
        Cone {
            lattice,
            generators: Vec::new(),
            data: OnceLock::new(),
        }
    }

    /// The same lattice, new generators.
    pub fn sibling(&self, gens: impl IntoIterator<Item = IntVector>) -> Result<Cone> {
        Cone::new(self.lattice.clone(), gens)
    }

    fn data(&self) -> &ConeData {
        self.data.get_or_init(|| self.compute())
    }

    fn compute(&self) -> ConeData {
        let d = self.lattice.rank();
        let dual = double_description(d, &self.generators);
        let equations = dual.lineality;
        let dim = d - equations.len();
        let mut facets: Vec<IntVector> = dual
            .rays
            .iter()
            .map(|y| project_out(y, &equations))
            .collect();
        facets.sort();
        facets.dedup();
        let pointed = rank_of(&facets) == dim;
        let rays = pointed.then(|| {
            self.generators
                .iter()
                .filter(|g| {
                    let tight: Vec<IntVector> = facets
                        .iter()
                        .filter(|f| f.dot(g).is_zero())
                        .cloned()
                        .collect();
                    rank_of(&tight) + 1 == dim
                })
                .cloned()
                .collect()
        });
        ConeData {
            dim,
            equations,
            facets,
            rays,
        }
    }

    pub fn lattice(&self) -> &AmbientLattice {
        &self.lattice
    }

    /// Rank of the lattice the cone lives in.
    pub fn ambient_rank(&self) -> usize {
        self.lattice.rank()
    }

    pub fn generators(&self) -> &[IntVector] {
        &self.generators
    }

    /// Dimension of the linear span.
    pub fn dim(&self) -> usize {
        self.data().dim
    }

    pub fn equations(&self) -> &[IntVector] {
        &self.data().equations
    }

    /// Primitive inward facet normals, sorted.
    pub fn facets(&self) -> &[IntVector] {
        &self.data().facets
    }

    /// Primitive extreme rays, sorted.
    pub fn rays(&self) -> Result<&[IntVector]> {
        self.data().rays.as_deref().ok_or(Error::NotPointed)
    }

    pub fn is_pointed(&self) -> bool {
        self.data().rays.is_some()
    }

    pub fn is_full_dimensional(&self) -> bool {
        self.dim() == self.ambient_rank()
    }

    pub fn is_simplicial(&self) -> bool {
        matches!(self.rays(), Ok(r) if r.len() == self.dim())
    }

    /// Simplicial with rays extending to a basis of the lattice.
    pub fn is_regular(&self) -> bool {
        self.is_simplicial() && self.multiplicity().is_some_and(|m| m.is_one())
    }

    /// Index of the sublattice spanned by the rays inside the saturated
    /// lattice of their span; defined for simplicial cones.
    pub fn multiplicity(&self) -> Option<BigInt> {
        if !self.is_simplicial() {
            return None;
        }
        let rays = self.rays().ok()?;
        if rays.is_empty() {
            return Some(BigInt::one());
        }
        let m = IntMatrix::from_columns(rays).ok()?;
        Some(m.elementary_divisors().iter().product())
    }

    pub fn contains(&self, v: &IntVector) -> bool {
        assert_eq!(v.dim(), self.ambient_rank(), "vector dimension");
        self.equations().iter().all(|e| e.dot(v).is_zero())
            && self.facets().iter().all(|f| !f.dot(v).is_negative())
    }

    pub fn contains_q(&self, v: &QVector) -> bool {
        self.equations().iter().all(|e| e.dot_q(v).is_zero())
            && self.facets().iter().all(|f| !f.dot_q(v).is_negative())
    }

    /// Point of the cone strictly inside every facet.
    pub fn relative_interior_contains(&self, v: &IntVector) -> bool {
        self.equations().iter().all(|e| e.dot(v).is_zero())
            && self.facets().iter().all(|f| f.dot(v).is_positive())
    }

    pub fn contains_cone(&self, other: &Cone) -> bool {
        other.generators.iter().all(|g| self.contains(g))
    }

    /// Sum of the generators; lies in the relative interior.
    pub fn interior_point(&self) -> IntVector {
        self.generators
            .iter()
            .fold(IntVector::zeros(self.ambient_rank()), |acc, g| &acc + g)
    }

    /// The dual cone, expressed in the dual coordinates of the same lattice.
    pub fn dual(&self) -> Cone {
        let mut gens: Vec<IntVector> = self.facets().to_vec();
        for e in self.equations() {
            gens.push(e.clone());
            gens.push(-e);
        }
        Cone::new(self.lattice.clone(), gens).expect("dual generators have lattice rank")
    }

    /// Intersection with another cone of the same lattice.
    pub fn intersection(&self, other: &Cone) -> Cone {
        let mut cons: Vec<IntVector> = Vec::new();
        for c in [self, other] {
            cons.extend(c.facets().iter().cloned());
            for e in c.equations() {
                cons.push(e.clone());
                cons.push(-e);
            }
        }
        let out = double_description(self.ambient_rank(), &cons);
        let mut gens = out.rays;
        for l in out.lineality {
            gens.push(-&l);
            gens.push(l);
        }
        Cone::new(self.lattice.clone(), gens).expect("same lattice")
    }

    /// Rays of the smallest face containing `v`; `v` must lie in the cone.
    pub fn minimal_face_rays(&self, v: &IntVector) -> Result<Vec<IntVector>> {
        if !self.contains(v) {
            return Err(Error::OutsideSupport);
        }
        let tight: Vec<&IntVector> = self
            .facets()
            .iter()
            .filter(|f| f.dot(v).is_zero())
            .collect();
        Ok(self
            .rays()?
            .iter()
            .filter(|r| tight.iter().all(|f| f.dot(r).is_zero()))
            .cloned()
            .collect())
    }

    /// Whether `sub` is a face of this cone.
    pub fn is_face(&self, sub: &Cone) -> bool {
        if !self.contains_cone(sub) {
            return false;
        }
        match self.minimal_face_rays(&sub.interior_point()) {
            Ok(rays) => {
                let face = self.sibling(rays).expect("same lattice");
                face == *sub
            }
            Err(_) => false,
        }
    }

    /// Ray sets of all faces, from the zero face up to the cone itself.
    pub fn face_ray_sets(&self) -> Result<Vec<Vec<IntVector>>> {
        let rays = self.rays()?;
        let full: BTreeSet<usize> = (0..rays.len()).collect();
        let facet_sets: Vec<BTreeSet<usize>> = self
            .facets()
            .iter()
            .map(|f| {
                (0..rays.len())
                    .filter(|&i| f.dot(&rays[i]).is_zero())
                    .collect()
            })
            .collect();
        let mut seen: BTreeSet<BTreeSet<usize>> = BTreeSet::new();
        seen.insert(full.clone());
        let mut stack = vec![full];
        while let Some(s) = stack.pop() {
            for t in &facet_sets {
                let i: BTreeSet<usize> = s.intersection(t).copied().collect();
                if seen.insert(i.clone()) {
                    stack.push(i);
                }
            }
        }
        let mut out: Vec<Vec<IntVector>> = seen
            .into_iter()
            .map(|s| s.into_iter().map(|i| rays[i].clone()).collect())
            .collect();
        out.sort_by(|a, b| a.len().cmp(&b.len()).then_with(|| a.cmp(b)));
        Ok(out)
    }

    /// All faces, including the zero cone and the cone itself.
    pub fn faces(&self) -> Result<Vec<Cone>> {
        let mut faces: Vec<Cone> = self
            .face_ray_sets()?
            .into_iter()
            .map(|rs| self.sibling(rs).expect("same lattice"))
            .collect();
        faces.sort_by(|a, b| a.dim().cmp(&b.dim()).then_with(|| a.key().cmp(&b.key())));
        Ok(faces)
    }

    /// Canonical description: sorted rays for pointed cones, sorted
    /// generators otherwise.
    pub fn key(&self) -> Vec<IntVector> {
        match self.rays() {
            Ok(r) => r.to_vec(),
            Err(_) => self.generators.clone(),
        }
    }

    /// Evaluates `<f, v>` for the rational functional `f` on each ray.
    pub fn ray_values(&self, f: &QVector) -> Result<Vec<BigRational>> {
        Ok(self.rays()?.iter().map(|r| r.dot_q(f)).collect())
    }
}

impl PartialEq for Cone {
    fn eq(&self, other: &Self) -> bool {
        self.lattice == other.lattice && self.contains_cone(other) && other.contains_cone(self)
    }
}

impl Eq for Cone {}

impl fmt::Debug for Cone {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Cone{self}")
    }
}

impl fmt::Display for Cone {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, g) in self.generators.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{g}")?;
        }
        write!(f, ")")
    }
}

/// A rational functional equal to 1 on each of the given vectors, if any.
pub(crate) fn hyperplane_through(rays: &[IntVector]) -> Option<QVector> {
    let m = IntMatrix::from_rows(rays).ok()?;
    let ones = IntVector::new(vec![BigInt::one(); rays.len()]);
    m.solve_rational(&ones)
}
