//! Fans: validation, skeleta, refinement, star subdivision and
//! simplicialization.

use std::collections::{BTreeMap, BTreeSet};

use crate::error::{Error, Result};
use crate::linalg::IntVector;
use crate::polyhedra::{triangulate, AmbientLattice, Cone};
use num_traits::Zero;

/// A fan, stored by its maximal cones.
#[derive(Clone, Debug)]
pub struct Fan {
    lattice: AmbientLattice,
    maximal: Vec<Cone>,
}

fn sort_cones(cones: &mut Vec<Cone>) {
    cones.sort_by_key(|a| a.key());
    cones.dedup_by(|a, b| a.key() == b.key());
}

/// Drops cones that are faces of other cones in the list.
fn keep_maximal(mut cones: Vec<Cone>) -> Vec<Cone> {
    sort_cones(&mut cones);
    let keep: Vec<bool> = (0..cones.len())
        .map(|i| {
            !cones
                .iter()
                .enumerate()
                .any(|(j, c)| j != i && c.dim() > cones[i].dim() && c.contains_cone(&cones[i]))
        })
        .collect();
    cones
        .into_iter()
        .zip(keep)
        .filter_map(|(c, k)| k.then_some(c))
        .collect()
}

impl Fan {
    /// Builds and validates a fan from cones that may include non-maximal
    /// ones. Every pairwise intersection must be a face of both cones.
    pub fn new(lattice: AmbientLattice, cones: Vec<Cone>) -> Result<Fan> {
        let fan = Self::new_unchecked(lattice, cones)?;
        fan.validate()?;
        Ok(fan)
    }

    /// Builds a fan without checking the intersection property.
    pub fn new_unchecked(lattice: AmbientLattice, cones: Vec<Cone>) -> Result<Fan> {
        for c in &cones {
            if c.lattice() != &lattice {
                return Err(Error::InvalidFan("cones live in different lattices".into()));
            }
            if !c.is_pointed() {
                return Err(Error::NotPointed);
            }
        }
        let maximal = if cones.is_empty() {
            vec![Cone::zero(lattice.clone())]
        } else {
            keep_maximal(cones)
        };
        Ok(Fan { lattice, maximal })
    }

    /// The fan of all faces of a pointed cone.
    pub fn from_cone(c: &Cone) -> Result<Fan> {
        if !c.is_pointed() {
            return Err(Error::NotPointed);
        }
        Ok(Fan {
            lattice: c.lattice().clone(),
            maximal: vec![c.clone()],
        })
    }

    /// Checks that maximal cones meet along common faces.
    pub fn validate(&self) -> Result<()> {
        for (i, a) in self.maximal.iter().enumerate() {
            for b in &self.maximal[i + 1..] {
                let meet = a.intersection(b);
                if !a.is_face(&meet) || !b.is_face(&meet) {
                    return Err(Error::InvalidFan(format!(
                        "cones {a} and {b} do not meet in a common face"
                    )));
                }
            }
        }
        Ok(())
    }

    pub fn lattice(&self) -> &AmbientLattice {
        &self.lattice
    }

    /// Maximal cones, sorted by their ray sets.
    pub fn maximal_cones(&self) -> &[Cone] {
        &self.maximal
    }

    pub fn dim(&self) -> usize {
        self.maximal.iter().map(Cone::dim).max().unwrap_or(0)
    }

    /// Every cone of the fan, sorted by dimension and then ray set.
    pub fn cones(&self) -> Vec<Cone> {
        let mut by_key: BTreeMap<(usize, Vec<IntVector>), Cone> = BTreeMap::new();
        for m in &self.maximal {
            for f in m.faces().expect("fan cones are pointed") {
                by_key.entry((f.dim(), f.key())).or_insert(f);
            }
        }
        by_key.into_values().collect()
    }

    /// Cones of dimension exactly `i`.
    pub fn cones_of_dim(&self, i: usize) -> Vec<Cone> {
        self.cones().into_iter().filter(|c| c.dim() == i).collect()
    }

    /// Cones of dimension at most `i`.
    pub fn skeleton(&self, i: usize) -> Vec<Cone> {
        self.cones().into_iter().filter(|c| c.dim() <= i).collect()
    }

    /// Union of the ray sets, sorted.
    pub fn rays(&self) -> Vec<IntVector> {
        let set: BTreeSet<IntVector> = self
            .maximal
            .iter()
            .flat_map(|c| c.rays().expect("pointed").iter().cloned())
            .collect();
        set.into_iter().collect()
    }

    /// Whether `v` lies in the support.
    pub fn contains(&self, v: &IntVector) -> bool {
        self.maximal.iter().any(|c| c.contains(v))
    }

    pub fn is_simplicial(&self) -> bool {
        self.maximal.iter().all(Cone::is_simplicial)
    }

    pub fn is_regular(&self) -> bool {
        self.maximal.iter().all(Cone::is_regular)
    }

    /// Same maximal cones (as ray sets) and same lattice.
    pub fn same_as(&self, other: &Fan) -> bool {
        self.lattice == other.lattice
            && self.maximal.len() == other.maximal.len()
            && self
                .maximal
                .iter()
                .zip(&other.maximal)
                .all(|(a, b)| a.key() == b.key())
    }

    /// Whether this fan refines `coarse`: every cone lies in a cone of
    /// `coarse`, and the supports agree.
    pub fn is_refinement_of(&self, coarse: &Fan) -> bool {
        if self.lattice != coarse.lattice {
            return false;
        }
        let inside = self
            .maximal
            .iter()
            .all(|t| coarse.maximal.iter().any(|s| s.contains_cone(t)));
        inside && self.covers(coarse) && self.agrees_on_samples(coarse)
    }

    /// Exact coverage: the full-dimensional pieces inside each cone of
    /// `coarse` form a pseudo-manifold whose boundary lies on the cone's
    /// boundary.
    fn covers(&self, coarse: &Fan) -> bool {
        for s in &coarse.maximal {
            let pieces: Vec<&Cone> = self
                .maximal
                .iter()
                .filter(|t| t.dim() == s.dim() && s.contains_cone(t))
                .collect();
            if pieces.is_empty() {
                return false;
            }
            if s.dim() == 0 {
                continue;
            }
            let mut count: BTreeMap<Vec<IntVector>, usize> = BTreeMap::new();
            for t in &pieces {
                for f in t.faces().expect("pointed") {
                    if f.dim() + 1 == t.dim() {
                        *count.entry(f.key()).or_default() += 1;
                    }
                }
            }
            for (rays, n) in count {
                let on_boundary = s
                    .facets()
                    .iter()
                    .any(|a| rays.iter().all(|r| a.dot(r).is_zero()));
                let ok = if on_boundary { n == 1 } else { n == 2 };
                if !ok {
                    return false;
                }
            }
        }
        true
    }

    fn agrees_on_samples(&self, coarse: &Fan) -> bool {
        let d = self.lattice.rank();
        let radius = if d <= 3 { 3 } else { 2 };
        sample_box(d, radius)
            .iter()
            .all(|v| self.contains(v) == coarse.contains(v))
    }

    /// Support is the whole space, checked on all integer vectors with
    /// entries in `[-radius, radius]`.
    pub fn is_complete_by_sampling(&self, dim: usize, radius: i64) -> bool {
        sample_box(dim, radius).iter().all(|v| self.contains(v))
    }

    /// Star subdivision at a primitive vector of the support.
    pub fn star_subdivision(&self, gamma: &IntVector) -> Result<Fan> {
        let gamma = gamma.primitive()?;
        if gamma.dim() != self.lattice.rank() {
            return Err(Error::DimensionMismatch {
                expected: self.lattice.rank(),
                found: gamma.dim(),
            });
        }
        if !self.contains(&gamma) {
            return Err(Error::OutsideSupport);
        }
        if self.rays().contains(&gamma) {
            return Ok(self.clone());
        }
        let mut out = Vec::new();
        for s in &self.maximal {
            if !s.contains(&gamma) {
                out.push(s.clone());
                continue;
            }
            for tau in s.faces()? {
                if tau.dim() + 1 == s.dim() && !tau.contains(&gamma) {
                    let mut gens = tau.rays()?.to_vec();
                    gens.push(gamma.clone());
                    out.push(s.sibling(gens)?);
                }
            }
        }
        Fan::new_unchecked(self.lattice.clone(), out)
    }

    /// Simplicial refinement with the same rays, by placing triangulations
    /// in the global lexicographic ray order.
    pub fn simplicialize(&self) -> Result<Fan> {
        if self.is_simplicial() {
            return Ok(self.clone());
        }
        let mut out = Vec::new();
        for s in &self.maximal {
            if s.is_simplicial() {
                out.push(s.clone());
            } else {
                out.extend(triangulate(s)?);
            }
        }
        Fan::new_unchecked(self.lattice.clone(), out)
    }
}

fn sample_box(dim: usize, radius: i64) -> Vec<IntVector> {
    let mut out = Vec::new();
    let mut cur = vec![-radius; dim];
    loop {
        let v = IntVector::from(cur.clone());
        if !v.is_zero() {
            out.push(v);
        }
        let mut i = dim;
        loop {
            if i == 0 {
                return out;
            }
            i -= 1;
            if cur[i] < radius {
                cur[i] += 1;
                for c in cur.iter_mut().skip(i + 1) {
                    *c = -radius;
                }
                break;
            }
        }
    }
}

impl PartialEq for Fan {
    fn eq(&self, other: &Self) -> bool {
        self.same_as(other)
    }
}
