//! Placing triangulation of a pointed cone using only its rays.
//!
//! Rays are placed in lexicographic order. Because the order is global, the
//! triangulation restricted to any face is the placing triangulation of that
//! face, so neighbouring cones triangulate compatibly.

use num_traits::{Signed, Zero};

use super::cone::{rank_of, Cone};
use crate::error::Result;
use crate::linalg::IntVector;

/// Simplices of the placing triangulation, as sorted index lists into the
/// sorted ray list of `cone`.
pub fn placing_triangulation(cone: &Cone) -> Result<Vec<Vec<usize>>> {
    let rays = cone.rays()?;
    let mut simplices: Vec<Vec<usize>> = Vec::new();
    let mut placed: Vec<IntVector> = Vec::new();
    for (k, v) in rays.iter().enumerate() {
        if placed.is_empty() {
            simplices.push(vec![k]);
            placed.push(v.clone());
            continue;
        }
        let rank_before = rank_of(&placed);
        let mut with_v = placed.clone();
        with_v.push(v.clone());
        if rank_of(&with_v) > rank_before {
            for s in simplices.iter_mut() {
                s.push(k);
            }
            placed.push(v.clone());
            continue;
        }
        let current = cone.sibling(placed.iter().cloned())?;
        let visible: Vec<&IntVector> = current
            .facets()
            .iter()
            .filter(|f| f.dot(v).is_negative())
            .collect();
        let mut fresh = Vec::new();
        for s in &simplices {
            for drop in 0..s.len() {
                let face: Vec<usize> = s
                    .iter()
                    .enumerate()
                    .filter(|&(j, _)| j != drop)
                    .map(|(_, &i)| i)
                    .collect();
                let on_visible = visible
                    .iter()
                    .any(|f| face.iter().all(|&i| f.dot(&rays[i]).is_zero()));
                if on_visible {
                    let mut t = face;
                    t.push(k);
                    fresh.push(t);
                }
            }
        }
        simplices.extend(fresh);
        placed.push(v.clone());
    }
    for s in simplices.iter_mut() {
        s.sort_unstable();
    }
    simplices.sort();
    Ok(simplices)
}

/// The simplicial cones of the placing triangulation.
pub fn triangulate(cone: &Cone) -> Result<Vec<Cone>> {
    let rays = cone.rays()?;
    placing_triangulation(cone)?
        .into_iter()
        .map(|s| cone.sibling(s.into_iter().map(|i| rays[i].clone())))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn simplicial_cone_is_its_own_triangulation() {
        let c = Cone::from_i64(&[&[1, 0, 0], &[0, 1, 0], &[1, 1, 2]]);
        assert_eq!(placing_triangulation(&c).unwrap(), vec![vec![0, 1, 2]]);
    }

    #[test]
    fn square_base_gives_two_simplices() {
        let c = Cone::from_i64(&[&[1, 0, 0], &[0, 1, 0], &[1, 1, 2], &[0, 0, -1]]);
        let t = triangulate(&c).unwrap();
        assert_eq!(t.len(), 2);
        let cube = Cone::from_i64(&[&[0, 0, 1], &[1, 0, 1], &[0, 1, 1], &[1, 1, 1]]);
        assert_eq!(triangulate(&cube).unwrap().len(), 2);
    }

    #[test]
    fn simplices_cover_and_do_not_overlap() {
        // pentagon base: interior point of each simplex lies in no other simplex interior
        let c = Cone::from_i64(&[&[0, 0, 1], &[2, 0, 1], &[3, 2, 1], &[1, 3, 1], &[-1, 2, 1]]);
        let t = triangulate(&c).unwrap();
        assert_eq!(t.len(), 3);
        for (i, a) in t.iter().enumerate() {
            assert!(a.is_simplicial() && a.is_full_dimensional());
            let p = a.interior_point();
            for (j, b) in t.iter().enumerate() {
                if i != j {
                    assert!(!b.relative_interior_contains(&p));
                }
            }
        }
        for g in c.generators() {
            assert!(t.iter().any(|s| s.contains(g)));
        }
    }

    #[test]
    fn two_dimensional_cone() {
        let c = Cone::from_i64(&[&[1, 0], &[1, 3]]);
        assert_eq!(triangulate(&c).unwrap(), vec![c.clone()]);
    }

    #[test]
    fn zero_cone_has_no_simplices() {
        let c = Cone::zero(crate::polyhedra::AmbientLattice::standard(2));
        assert!(placing_triangulation(&c).unwrap().is_empty());
    }
}
