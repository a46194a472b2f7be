//! Double description: generators of `{y : <a_i, y> >= 0 for all i}`.
//!
//! Constraints are inserted in lexicographic order. The state is a basis of
//! the lineality space plus a list of extreme rays (modulo lineality), each
//! carrying the set of constraints it makes tight. Adjacency of two rays is
//! decided combinatorially from those sets.

use num_bigint::BigInt;
use num_traits::{Signed, Zero};

use crate::linalg::IntVector;

/// Output of [`double_description`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DdOutput {
    /// Basis of the lineality space, primitive vectors.
    pub lineality: Vec<IntVector>,
    /// Extreme rays modulo lineality, primitive and sorted.
    pub rays: Vec<IntVector>,
}

#[derive(Clone, Debug)]
struct Bits(Vec<u64>);

impl Bits {
    fn new(n: usize) -> Self {
        Bits(vec![0; n.div_ceil(64).max(1)])
    }

    fn set(&mut self, i: usize) {
        self.0[i / 64] |= 1 << (i % 64);
    }

    fn and(&self, other: &Bits) -> Bits {
        Bits(self.0.iter().zip(&other.0).map(|(a, b)| a & b).collect())
    }

    fn subset_of(&self, other: &Bits) -> bool {
        self.0.iter().zip(&other.0).all(|(a, b)| a & !b == 0)
    }
}

struct Ray {
    v: IntVector,
    zeros: Bits,
}

fn primitive(v: IntVector) -> IntVector {
    v.primitive()
        .expect("double description never produces zero vectors")
}

/// Runs the double description method in dimension `dim`.
pub fn double_description(dim: usize, constraints: &[IntVector]) -> DdOutput {
    let mut cons: Vec<IntVector> = constraints
        .iter()
        .filter(|a| !a.is_zero())
        .map(|a| primitive(a.clone()))
        .collect();
    cons.sort();
    cons.dedup();
    let m = cons.len();

    let mut lineality: Vec<IntVector> = (0..dim).map(|i| IntVector::unit(dim, i)).collect();
    let mut rays: Vec<Ray> = Vec::new();

    for (k, a) in cons.iter().enumerate() {
        if let Some(pos) = lineality.iter().position(|l| !a.dot(l).is_zero()) {
            let mut l0 = lineality.remove(pos);
            let mut s = a.dot(&l0);
            if s.is_negative() {
                l0 = -&l0;
                s = -s;
            }
            for l in lineality.iter_mut() {
                let t = a.dot(l);
                if !t.is_zero() {
                    *l = primitive(l.combine(&s, &l0, &-t));
                }
            }
            for r in rays.iter_mut() {
                let t = a.dot(&r.v);
                if !t.is_zero() {
                    r.v = primitive(r.v.combine(&s, &l0, &-t));
                }
                r.zeros.set(k);
            }
            // l0 is tight on every earlier constraint
            let mut zeros = Bits::new(m);
            for i in 0..k {
                zeros.set(i);
            }
            rays.push(Ray { v: l0, zeros });
            continue;
        }

        let vals: Vec<BigInt> = rays.iter().map(|r| a.dot(&r.v)).collect();
        let pos: Vec<usize> = (0..rays.len()).filter(|&i| vals[i].is_positive()).collect();
        let neg: Vec<usize> = (0..rays.len()).filter(|&i| vals[i].is_negative()).collect();
        if neg.is_empty() {
            for (i, r) in rays.iter_mut().enumerate() {
                if vals[i].is_zero() {
                    r.zeros.set(k);
                }
            }
            continue;
        }

        let mut new_rays = Vec::new();
        for &p in &pos {
            for &n in &neg {
                let common = rays[p].zeros.and(&rays[n].zeros);
                let adjacent = rays
                    .iter()
                    .enumerate()
                    .all(|(i, r)| i == p || i == n || !common.subset_of(&r.zeros));
                if !adjacent {
                    continue;
                }
                let v = rays[n].v.combine(&vals[p], &rays[p].v, &-&vals[n]);
                let mut zeros = common;
                zeros.set(k);
                new_rays.push(Ray {
                    v: primitive(v),
                    zeros,
                });
            }
        }
        let mut kept: Vec<Ray> = Vec::with_capacity(rays.len() + new_rays.len());
        for (i, mut r) in rays.into_iter().enumerate() {
            if vals[i].is_negative() {
                continue;
            }
            if vals[i].is_zero() {
                r.zeros.set(k);
            }
            kept.push(r);
        }
        kept.extend(new_rays);
        rays = kept;
    }

    let mut out: Vec<IntVector> = rays.into_iter().map(|r| r.v).collect();
    out.sort();
    out.dedup();
    DdOutput {
        lineality,
        rays: out,
    }
}
