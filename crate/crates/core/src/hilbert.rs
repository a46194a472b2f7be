//! Hilbert bases of pointed rational cones.
//!
//! The cone is triangulated with its own rays; every Hilbert basis element
//! is a ray or a lattice point of the half-open fundamental parallelepiped of
//! some simplicial piece. Those candidates are then reduced in increasing
//! degree: a candidate is dropped when subtracting an already kept element
//! leaves a point of the cone.

use std::collections::{BTreeSet, HashSet};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::linalg::{IntMatrix, IntVector};
use crate::polyhedra::{placing_triangulation, Cone};

/// Default cap on the total number of parallelepiped points.
pub const VOLUME_CAP: u128 = 1_000_000;

/// Default cap on the bounding box scanned by the brute-force oracle.
pub const BRUTE_FORCE_BOX_CAP: u128 = 5_000_000;

#[derive(Clone, Debug)]
pub struct HilbertBasis {
    pub cone: Cone,
    /// Elements in lexicographic order.
    pub elements: Vec<IntVector>,
    /// Integer functional positive on every nonzero point of the cone.
    pub grading: IntVector,
}

impl HilbertBasis {
    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn contains(&self, v: &IntVector) -> bool {
        self.elements.binary_search(v).is_ok()
    }

    pub fn degree(&self, v: &IntVector) -> BigInt {
        self.grading.dot(v)
    }

    pub fn max_degree(&self) -> BigInt {
        self.elements
            .iter()
            .map(|h| self.degree(h))
            .max()
            .unwrap_or_else(BigInt::zero)
    }

    /// Elements sorted by degree, then lexicographically.
    pub fn by_degree(&self) -> Vec<IntVector> {
        let mut v = self.elements.clone();
        v.sort_by(|a, b| self.degree(a).cmp(&self.degree(b)).then_with(|| a.cmp(b)));
        v
    }
}

/// Sum of the facet normals, made primitive. Positive on every ray because a
/// ray of a pointed cone cannot be tight on every facet.
pub fn grading_functional(c: &Cone) -> Result<IntVector> {
    c.rays()?;
    let sum = c
        .facets()
        .iter()
        .fold(IntVector::zeros(c.ambient_rank()), |acc, f| &acc + f);
    if sum.is_zero() {
        return Ok(sum);
    }
    sum.primitive()
}

/// Lattice points of `{ sum l_i w_i : 0 <= l_i < 1 }` other than the origin,
/// where `w` are the columns of a full column rank matrix.
pub fn parallelepiped_points(w: &[IntVector]) -> Result<Vec<IntVector>> {
    let m = IntMatrix::from_columns(w)?;
    let k = w.len();
    let (s, _u, v) = m.smith_normal_form();
    let divisors: Vec<BigInt> = (0..k).map(|i| s.get(i, i).clone()).collect();
    if divisors.iter().any(Zero::is_zero) {
        return Err(Error::NotSimplicial);
    }
    let volume: BigInt = divisors.iter().product();
    let vol = volume.to_u128().unwrap_or(u128::MAX);
    if vol > VOLUME_CAP {
        return Err(Error::cap("fundamental parallelepiped", VOLUME_CAP, vol));
    }
    let big_d = divisors.last().cloned().unwrap_or_else(BigInt::one);
    let steps: Vec<BigInt> = divisors.iter().map(|d| &big_d / d).collect();
    let mut out = Vec::new();
    let mut j = vec![BigInt::zero(); k];
    loop {
        if j.iter().any(|x| !x.is_zero()) {
            // lambda * D = V * (j_i * D / d_i), reduced into [0, D)
            let mu = IntVector::new(j.iter().zip(&steps).map(|(a, b)| a * b).collect());
            let lam = v.mul_vec(&mu)?;
            let lam = IntVector::new(lam.iter().map(|x| x.mod_floor(&big_d)).collect());
            let x = m.mul_vec(&lam)?;
            out.push(IntVector::new(x.iter().map(|c| c / &big_d).collect()));
        }
        let mut i = k;
        loop {
            if i == 0 {
                return Ok(out);
            }
            i -= 1;
            j[i] += 1u32;
            if j[i] < divisors[i] {
                break;
            }
            j[i] = BigInt::zero();
        }
    }
}

/// Hilbert basis of a pointed cone.
pub fn hilbert_basis(c: &Cone) -> Result<HilbertBasis> {
    let rays = c.rays()?.to_vec();
    let grading = grading_functional(c)?;
    let simplices = placing_triangulation(c)?;

    let mut total: u128 = 0;
    for s in &simplices {
        let cols: Vec<IntVector> = s.iter().map(|&i| rays[i].clone()).collect();
        let vol: BigInt = IntMatrix::from_columns(&cols)?
            .elementary_divisors()
            .iter()
            .product();
        total = total.saturating_add(vol.to_u128().unwrap_or(u128::MAX));
    }
    if total > VOLUME_CAP {
        return Err(Error::cap("fundamental parallelepiped", VOLUME_CAP, total));
    }

    let pieces: Vec<Vec<IntVector>> = simplices
        .par_iter()
        .map(|s| {
            let cols: Vec<IntVector> = s.iter().map(|&i| rays[i].clone()).collect();
            parallelepiped_points(&cols)
        })
        .collect::<Result<_>>()?;

    let mut candidates: BTreeSet<IntVector> = rays.iter().cloned().collect();
    for p in pieces {
        candidates.extend(p);
    }
    let mut ordered: Vec<(BigInt, IntVector)> = candidates
        .into_iter()
        .map(|v| (grading.dot(&v), v))
        .collect();
    ordered.sort();

    let mut kept: Vec<(BigInt, IntVector)> = Vec::new();
    for (deg, cand) in ordered {
        let reducible = kept
            .iter()
            .take_while(|(d, _)| d < &deg)
            .any(|(_, k)| c.contains(&(&cand - k)));
        if !reducible {
            kept.push((deg, cand));
        }
    }
    let mut elements: Vec<IntVector> = kept.into_iter().map(|(_, v)| v).collect();
    elements.sort();
    Ok(HilbertBasis {
        cone: c.clone(),
        elements,
        grading,
    })
}

/// Lattice points of the cone with degree at most `bound`, by scanning a
/// bounding box. Sorted by degree, then lexicographically.
pub fn bounded_cone_points(
    c: &Cone,
    grading: &IntVector,
    bound: &BigInt,
) -> Result<Vec<IntVector>> {
    let rays = c.rays()?;
    let d = c.ambient_rank();
    // the region is Conv(0, bound / deg(r) * r)
    let mut lo = vec![BigInt::zero(); d];
    let mut hi = vec![BigInt::zero(); d];
    for r in rays {
        let deg = grading.dot(r);
        if !deg.is_positive() {
            return Err(Error::Invariant("grading not positive on a ray".into()));
        }
        for i in 0..d {
            let t = &r[i] * bound;
            let (fl, ce) = (t.div_floor(&deg), t.div_ceil(&deg));
            if fl < lo[i] {
                lo[i] = fl;
            }
            if ce > hi[i] {
                hi[i] = ce;
            }
        }
    }
    let size = lo
        .iter()
        .zip(&hi)
        .map(|(a, b)| (b - a + 1u32).to_u128().unwrap_or(u128::MAX))
        .fold(1u128, |acc, w| acc.saturating_mul(w));
    if size > BRUTE_FORCE_BOX_CAP {
        return Err(Error::cap("brute-force box", BRUTE_FORCE_BOX_CAP, size));
    }
    let mut out = Vec::new();
    let mut cur = lo.clone();
    'scan: loop {
        let v = IntVector::new(cur.clone());
        if &grading.dot(&v) <= bound && c.contains(&v) {
            out.push(v);
        }
        let mut i = d;
        loop {
            if i == 0 {
                break 'scan;
            }
            i -= 1;
            if cur[i] < hi[i] {
                cur[i] += 1u32;
                cur[i + 1..d].clone_from_slice(&lo[i + 1..d]);
                break;
            }
        }
    }
    out.sort_by(|a, b| grading.dot(a).cmp(&grading.dot(b)).then_with(|| a.cmp(b)));
    Ok(out)
}

/// Independent oracle: irreducible points among all lattice points of degree
/// at most `bound`, in lexicographic order.
pub fn brute_force_hilbert(c: &Cone, bound: &BigInt) -> Result<Vec<IntVector>> {
    let grading = grading_functional(c)?;
    let pts = bounded_cone_points(c, &grading, bound)?;
    let nonzero: Vec<&IntVector> = pts.iter().filter(|p| !p.is_zero()).collect();
    let degrees: Vec<BigInt> = nonzero.iter().map(|p| grading.dot(p)).collect();
    let set: HashSet<&IntVector> = nonzero.iter().copied().collect();
    // a decomposition x = y + z has a summand of at most half the degree
    let mut out: Vec<IntVector> = (0..nonzero.len())
        .into_par_iter()
        .filter(|&i| {
            let x = nonzero[i];
            !nonzero
                .iter()
                .zip(&degrees)
                .take_while(|(_, dy)| *dy * 2u32 <= degrees[i])
                .any(|(y, _)| set.contains(&(x - *y)))
        })
        .map(|i| nonzero[i].clone())
        .collect();
    out.sort();
    Ok(out)
}

/// Checks that every lattice point of degree at most `bound` is a
/// nonnegative integer combination of the basis, by dynamic programming over
/// degree.
pub fn verify_generation(basis: &HilbertBasis, bound: &BigInt) -> Result<bool> {
    let pts = bounded_cone_points(&basis.cone, &basis.grading, bound)?;
    let mut reachable: HashSet<IntVector> = HashSet::new();
    for p in pts {
        let ok = p.is_zero() || basis.elements.iter().any(|h| reachable.contains(&(&p - h)));
        if !ok {
            return Ok(false);
        }
        reachable.insert(p);
    }
    Ok(true)
}

/// Default oracle bound: three times the largest basis degree.
pub fn default_bound(basis: &HilbertBasis) -> BigInt {
    basis.max_degree() * 3
}

#[cfg(test)]
mod tests {
    use super::*;

    fn iv(x: &[i64]) -> IntVector {
        IntVector::from(x)
    }

    fn sorted(xs: &[&[i64]]) -> Vec<IntVector> {
        let mut v: Vec<IntVector> = xs.iter().map(|x| iv(x)).collect();
        v.sort();
        v
    }

    #[test]
    fn segment_cone() {
        for n in 1..=5i64 {
            let c = Cone::from_i64(&[&[1, 0], &[1, n]]);
            let hb = hilbert_basis(&c).unwrap();
            let expected: Vec<IntVector> = (0..=n).map(|k| iv(&[1, k])).collect();
            assert_eq!(hb.elements, expected);
        }
    }

    #[test]
    fn fails_condition_i_cone() {
        let c = Cone::from_i64(&[&[1, 0, 0], &[0, 1, 0], &[1, 1, 2]]);
        let hb = hilbert_basis(&c).unwrap();
        assert_eq!(
            hb.elements,
            sorted(&[&[1, 0, 0], &[0, 1, 0], &[1, 1, 2], &[1, 1, 1]])
        );
    }

    #[test]
    fn regular_cone_basis_is_rays() {
        let c = Cone::from_i64(&[&[1, 0, 0], &[1, 1, 0], &[1, 1, 1]]);
        assert!(c.is_regular());
        assert_eq!(hilbert_basis(&c).unwrap().elements, c.rays().unwrap());
    }

    #[test]
    fn empty_simplex_cone() {
        let c = Cone::from_i64(&[&[1, 0, 0, 1], &[0, 1, 0, 1], &[0, 0, 1, 1], &[1, 1, 1, 1]]);
        let hb = hilbert_basis(&c).unwrap();
        assert_eq!(hb.len(), 5);
        assert!(hb.contains(&iv(&[1, 1, 1, 2])));
    }

    #[test]
    fn gradings() {
        let orthant = Cone::from_i64(&[&[1, 0, 0], &[0, 1, 0], &[0, 0, 1]]);
        assert_eq!(grading_functional(&orthant).unwrap(), iv(&[1, 1, 1]));
        let c = Cone::from_i64(&[&[1, 0], &[1, 5]]);
        let g = grading_functional(&c).unwrap();
        for r in c.rays().unwrap() {
            assert!(g.dot(r).is_positive());
        }
        let dual223 = Cone::from_i64(&[&[1, 0, 0], &[0, 1, 0], &[2, 2, 3]]);
        let g = grading_functional(&dual223).unwrap();
        for r in dual223.rays().unwrap() {
            assert!(g.dot(r).is_positive());
        }
    }

    #[test]
    fn brute_force_examples() {
        let c = Cone::from_i64(&[&[1, 0], &[1, 2]]);
        assert_eq!(
            brute_force_hilbert(&c, &BigInt::from(12)).unwrap(),
            sorted(&[&[1, 0], &[1, 1], &[1, 2]])
        );
        let reg = Cone::from_i64(&[&[1, 0, 0], &[0, 1, 0], &[0, 0, 1]]);
        assert_eq!(
            brute_force_hilbert(&reg, &BigInt::from(3)).unwrap(),
            reg.rays().unwrap()
        );
    }

    #[test]
    fn lower_dimensional_cone() {
        let c = Cone::from_i64(&[&[1, 0, 0], &[1, 2, 0]]);
        let hb = hilbert_basis(&c).unwrap();
        assert_eq!(hb.elements, sorted(&[&[1, 0, 0], &[1, 1, 0], &[1, 2, 0]]));
    }

    #[test]
    fn non_pointed_is_rejected() {
        let c = Cone::from_i64(&[&[1, 0], &[-1, 0], &[0, 1]]);
        assert_eq!(hilbert_basis(&c).unwrap_err(), Error::NotPointed);
    }

    #[test]
    fn volume_cap() {
        let c = Cone::from_i64(&[&[1, 0], &[1, 2_000_000]]);
        assert!(hilbert_basis(&c).unwrap_err().is_resource_cap());
    }

    #[test]
    fn parallelepiped_of_index_two() {
        let pts = parallelepiped_points(&[iv(&[1, 0]), iv(&[1, 2])]).unwrap();
        assert_eq!(pts, vec![iv(&[1, 1])]);
    }
}
