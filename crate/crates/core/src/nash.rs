//! Logarithmic Jacobian sets, the polyhedra `N_p(σ)`, and normalized Nash
//! blowups of affine toric varieties in characteristic `p` (0 or a prime).

use std::collections::{BTreeMap, BTreeSet};

use itertools::Itertools;
use num_bigint::BigInt;
use num_traits::{Signed, Zero};
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::fans::Fan;
use crate::hilbert::{hilbert_basis, HilbertBasis};
use crate::linalg::{is_prime, prime_factors, IntMatrix, IntVector, QVector};
use crate::polyhedra::{minkowski_polyhedron, Cone, RationalPolyhedron};

/// Default cap on the number of `d`-subsets of `G(σ∨)`.
pub const TUPLE_CAP: u128 = 1_000_000;

/// Default cap on the number of blowups performed by [`nash_iterate`].
pub const NODE_CAP: usize = 2_000;

/// `X(σ)` with both `σ` and `σ∨` at hand, in lattice coordinates.
#[derive(Clone, Debug)]
pub struct AffineToricVariety {
    pub sigma: Cone,
    pub dual: Cone,
}

impl AffineToricVariety {
    pub fn from_sigma(sigma: &Cone) -> Result<Self> {
        Self::check(sigma)?;
        let dual = sigma.dual();
        Ok(AffineToricVariety {
            sigma: sigma.clone(),
            dual,
        })
    }

    pub fn from_dual(dual: &Cone) -> Result<Self> {
        Self::check(dual)?;
        Ok(AffineToricVariety {
            sigma: dual.dual(),
            dual: dual.clone(),
        })
    }

    fn check(c: &Cone) -> Result<()> {
        if !c.is_pointed() {
            return Err(Error::NotPointed);
        }
        if !c.is_full_dimensional() {
            return Err(Error::NotFullDimensional);
        }
        Ok(())
    }

    pub fn rank(&self) -> usize {
        self.sigma.ambient_rank()
    }

    pub fn dual_hilbert_basis(&self) -> Result<HilbertBasis> {
        hilbert_basis(&self.dual)
    }
}

/// One `d`-subset of `G(σ∨)` and its determinant.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Tuple {
    pub elements: Vec<IntVector>,
    pub det: BigInt,
}

impl Tuple {
    pub fn sum(&self) -> IntVector {
        let d = self.elements[0].dim();
        self.elements
            .iter()
            .fold(IntVector::zeros(d), |acc, h| &acc + h)
    }

    pub fn survives(&self, p: u64) -> bool {
        if p == 0 {
            !self.det.is_zero()
        } else {
            !(&self.det % BigInt::from(p)).is_zero()
        }
    }
}

#[derive(Clone, Debug)]
pub struct LogJacobianSet {
    pub char: u64,
    /// Points in lexicographic order.
    pub points: Vec<IntVector>,
    /// For each point, the witnessing tuple of least `|det|`.
    pub witnesses: Vec<Tuple>,
}

fn check_char(p: u64) -> Result<()> {
    if p != 0 && !is_prime(p) {
        return Err(Error::NotPrime(p));
    }
    Ok(())
}

fn binomial(n: usize, k: usize) -> u128 {
    if k > n {
        return 0;
    }
    (0..k as u128).fold(1u128, |acc, i| acc.saturating_mul(n as u128 - i) / (i + 1))
}

/// Every `d`-subset of `G(σ∨)` with its determinant, subsets in
/// lexicographic order of positions.
pub fn subset_determinants(x: &AffineToricVariety) -> Result<Vec<Tuple>> {
    let hb = x.dual_hilbert_basis()?;
    let d = x.rank();
    let n = binomial(hb.len(), d);
    if n > TUPLE_CAP {
        return Err(Error::cap("d-subsets of the Hilbert basis", TUPLE_CAP, n));
    }
    let subsets: Vec<Vec<usize>> = (0..hb.len()).combinations(d).collect();
    subsets
        .par_iter()
        .map(|s| {
            let elements: Vec<IntVector> = s.iter().map(|&i| hb.elements[i].clone()).collect();
            let det = IntMatrix::from_columns(&elements)?.det()?;
            Ok(Tuple { elements, det })
        })
        .collect()
}

pub fn log_jacobian_points(x: &AffineToricVariety, p: u64) -> Result<LogJacobianSet> {
    check_char(p)?;
    let tuples = subset_determinants(x)?;
    Ok(jacobian_from_tuples(&tuples, p))
}

fn jacobian_from_tuples(tuples: &[Tuple], p: u64) -> LogJacobianSet {
    let mut best: BTreeMap<IntVector, &Tuple> = BTreeMap::new();
    for t in tuples.iter().filter(|t| t.survives(p)) {
        best.entry(t.sum())
            .and_modify(|w| {
                if t.det.abs() < w.det.abs() {
                    *w = t;
                }
            })
            .or_insert(t);
    }
    let (points, witnesses) = best.into_iter().map(|(k, t)| (k, t.clone())).unzip();
    LogJacobianSet {
        char: p,
        points,
        witnesses,
    }
}

/// `N_p(σ) = Conv(J_p(σ)) + σ∨`.
pub fn newton_polyhedron(x: &AffineToricVariety, p: u64) -> Result<RationalPolyhedron> {
    let j = log_jacobian_points(x, p)?;
    newton_from_points(x, &j)
}

fn newton_from_points(x: &AffineToricVariety, j: &LogJacobianSet) -> Result<RationalPolyhedron> {
    let pts: Vec<QVector> = j.points.iter().map(IntVector::to_q).collect();
    minkowski_polyhedron(&pts, &x.dual)
}

/// Primes dividing some nonzero `d × d` determinant of `G(σ∨)`. For every
/// other prime `J_p = J_0`.
pub fn relevant_primes(x: &AffineToricVariety) -> Result<BTreeSet<u64>> {
    let tuples = subset_determinants(x)?;
    Ok(primes_of(&tuples))
}

fn primes_of(tuples: &[Tuple]) -> BTreeSet<u64> {
    let dets: BTreeSet<BigInt> = tuples
        .iter()
        .filter(|t| !t.det.is_zero())
        .map(|t| t.det.abs())
        .collect();
    dets.iter().flat_map(prime_factors).collect()
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CharDisagreement {
    pub prime: u64,
    /// Vertices of `N_0` that are not vertices of `N_p`.
    pub only_in_zero: Vec<QVector>,
    /// Vertices of `N_p` that are not vertices of `N_0`.
    pub only_in_p: Vec<QVector>,
}

#[derive(Clone, Debug)]
pub struct CharComparison {
    pub relevant_primes: BTreeSet<u64>,
    pub vertices_zero: Vec<QVector>,
    pub equal_for_all: bool,
    pub disagreements: Vec<CharDisagreement>,
}

pub fn compare_characteristics(x: &AffineToricVariety) -> Result<CharComparison> {
    let tuples = subset_determinants(x)?;
    let primes = primes_of(&tuples);
    let n0 = newton_from_points(x, &jacobian_from_tuples(&tuples, 0))?;
    let mut disagreements = Vec::new();
    for &p in &primes {
        let np = newton_from_points(x, &jacobian_from_tuples(&tuples, p))?;
        let a: BTreeSet<&QVector> = n0.vertices().iter().collect();
        let b: BTreeSet<&QVector> = np.vertices().iter().collect();
        if a != b {
            disagreements.push(CharDisagreement {
                prime: p,
                only_in_zero: a.difference(&b).map(|v| (*v).clone()).collect(),
                only_in_p: b.difference(&a).map(|v| (*v).clone()).collect(),
            });
        }
    }
    Ok(CharComparison {
        relevant_primes: primes,
        vertices_zero: n0.vertices().to_vec(),
        equal_for_all: disagreements.is_empty(),
        disagreements,
    })
}

/// A maximal cone of the blowup fan and the vertex of `N_p` it belongs to.
#[derive(Clone, Debug)]
pub struct Chart {
    pub vertex: IntVector,
    pub cone: Cone,
}

#[derive(Clone, Debug)]
pub struct NashResult {
    pub sigma: Cone,
    pub char: u64,
    pub jacobian: LogJacobianSet,
    pub newton: RationalPolyhedron,
    pub fan: Fan,
    pub charts: Vec<Chart>,
    pub smooth: bool,
    pub singular_charts: Vec<Chart>,
}

/// Normal fan of `N_p(σ)`, one chart per vertex.
pub fn nash_blowup_fan(x: &AffineToricVariety, p: u64) -> Result<NashResult> {
    let jacobian = log_jacobian_points(x, p)?;
    let newton = newton_from_points(x, &jacobian)?;
    let mut charts = Vec::new();
    for v in newton.vertices() {
        let vertex = v
            .to_int()
            .ok_or_else(|| Error::Invariant(format!("non-integral vertex {v}")))?;
        let cone = newton.feasible_cone(v)?.dual();
        charts.push(Chart { vertex, cone });
    }
    let fan = Fan::new_unchecked(
        x.sigma.lattice().clone(),
        charts.iter().map(|c| c.cone.clone()).collect(),
    )?;
    let singular_charts: Vec<Chart> = charts
        .iter()
        .filter(|c| !c.cone.is_regular())
        .cloned()
        .collect();
    Ok(NashResult {
        sigma: x.sigma.clone(),
        char: p,
        jacobian,
        newton,
        fan,
        smooth: singular_charts.is_empty(),
        charts,
        singular_charts,
    })
}

/// One node of the blowup tree: the blowup of `sigma` and the trees of its
/// singular charts.
#[derive(Clone, Debug)]
pub struct NashNode {
    pub result: NashResult,
    pub children: Vec<NashNode>,
    /// Singular charts whose ray set equals the parent cone's.
    pub fixed_charts: Vec<Chart>,
    /// The depth budget ran out below this node.
    pub depth_cap_hit: bool,
}

#[derive(Clone, Debug)]
pub struct NashIteration {
    /// `None` when the input cone is already regular.
    pub root: Option<NashNode>,
    pub resolved: bool,
    /// Blowups needed along the longest branch (meaningful when resolved).
    pub depth: usize,
    pub depth_cap_hit: bool,
    pub nodes: usize,
}

/// Blows up each singular chart again until every chart is regular or the
/// depth budget runs out. The ambient lattice is kept fixed throughout.
pub fn nash_iterate(sigma: &Cone, p: u64, max_depth: usize) -> Result<NashIteration> {
    check_char(p)?;
    if sigma.is_regular() {
        return Ok(NashIteration {
            root: None,
            resolved: true,
            depth: 0,
            depth_cap_hit: false,
            nodes: 0,
        });
    }
    if max_depth == 0 {
        return Ok(NashIteration {
            root: None,
            resolved: false,
            depth: 0,
            depth_cap_hit: true,
            nodes: 0,
        });
    }
    let mut nodes = 0;
    let root = grow(sigma, p, max_depth, &mut nodes)?;
    let (resolved, depth) = summarize(&root);
    let depth_cap_hit = any_cap(&root);
    Ok(NashIteration {
        root: Some(root),
        resolved,
        depth,
        depth_cap_hit,
        nodes,
    })
}

fn grow(sigma: &Cone, p: u64, budget: usize, nodes: &mut usize) -> Result<NashNode> {
    *nodes += 1;
    if *nodes > NODE_CAP {
        return Err(Error::cap(
            "Nash blowup tree nodes",
            NODE_CAP as u128,
            *nodes as u128,
        ));
    }
    let result = nash_blowup_fan(&AffineToricVariety::from_sigma(sigma)?, p)?;
    let key = sigma.key();
    let mut children = Vec::new();
    let mut fixed_charts = Vec::new();
    let mut depth_cap_hit = false;
    for chart in &result.singular_charts {
        if chart.cone.key() == key {
            fixed_charts.push(chart.clone());
        }
        if budget <= 1 {
            depth_cap_hit = true;
        } else {
            children.push(grow(&chart.cone, p, budget - 1, nodes)?);
        }
    }
    Ok(NashNode {
        result,
        children,
        fixed_charts,
        depth_cap_hit,
    })
}

fn summarize(node: &NashNode) -> (bool, usize) {
    let mut resolved = !node.depth_cap_hit;
    let mut depth = 0;
    for c in &node.children {
        let (r, d) = summarize(c);
        resolved &= r;
        depth = depth.max(d);
    }
    (resolved, depth + 1)
}

fn any_cap(node: &NashNode) -> bool {
    node.depth_cap_hit || node.children.iter().any(any_cap)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gstable::{check_condition_i, is_g_stable};

    fn iv(x: &[i64]) -> IntVector {
        IntVector::from(x)
    }

    fn q(x: &[i64]) -> QVector {
        iv(x).to_q()
    }

    fn dual_223() -> AffineToricVariety {
        AffineToricVariety::from_dual(&Cone::from_i64(&[&[1, 0, 0], &[0, 1, 0], &[2, 2, 3]]))
            .unwrap()
    }

    fn triangle_omega(n: i64) -> Cone {
        Cone::from_i64(&[&[0, 0, 1], &[n, 0, 1], &[0, 1, 1]])
    }

    #[test]
    fn dual_223_determinants() {
        let x = dual_223();
        let hb = x.dual_hilbert_basis().unwrap();
        assert_eq!(
            hb.elements,
            vec![
                iv(&[0, 1, 0]),
                iv(&[1, 0, 0]),
                iv(&[1, 1, 1]),
                iv(&[2, 2, 3])
            ]
        );
        let mut dets: Vec<BigInt> = subset_determinants(&x)
            .unwrap()
            .iter()
            .map(|t| t.det.abs())
            .collect();
        dets.sort();
        assert_eq!(dets, vec![1.into(), 1.into(), 1.into(), 3.into()]);
        assert_eq!(relevant_primes(&x).unwrap(), BTreeSet::from([3]));
    }

    #[test]
    fn dual_223_jacobian_sets() {
        let x = dual_223();
        let j0 = log_jacobian_points(&x, 0).unwrap();
        assert_eq!(
            j0.points,
            vec![
                iv(&[2, 2, 1]),
                iv(&[3, 3, 3]),
                iv(&[3, 4, 4]),
                iv(&[4, 3, 4])
            ]
        );
        assert_eq!(j0.witnesses[1].det.abs(), BigInt::from(3));
        let j3 = log_jacobian_points(&x, 3).unwrap();
        assert_eq!(
            j3.points,
            vec![iv(&[2, 2, 1]), iv(&[3, 4, 4]), iv(&[4, 3, 4])]
        );
        assert_eq!(log_jacobian_points(&x, 4).unwrap_err(), Error::NotPrime(4));
    }

    #[test]
    fn dual_223_newton_and_chart() {
        let x = dual_223();
        let n0 = newton_polyhedron(&x, 0).unwrap();
        assert_eq!(
            n0.vertices(),
            &[q(&[2, 2, 1]), q(&[3, 4, 4]), q(&[4, 3, 4])]
        );
        assert!(!n0.is_vertex(&q(&[3, 3, 3])));
        assert!(n0.contains(&q(&[3, 3, 3])));
        let cmp = compare_characteristics(&x).unwrap();
        assert!(cmp.equal_for_all);

        let r = nash_blowup_fan(&x, 0).unwrap();
        assert!(!r.smooth);
        let chart = r
            .charts
            .iter()
            .find(|c| c.vertex == iv(&[2, 2, 1]))
            .unwrap();
        let b1 = Cone::from_i64(&[&[1, 0, 0], &[0, 1, 0], &[1, 2, 3], &[2, 1, 3]]);
        assert_eq!(chart.cone.dual(), b1);
        assert!(!chart.cone.is_regular());
        let hb = hilbert_basis(&b1).unwrap();
        assert_eq!(hb.len(), 6);
        assert!(hb.contains(&iv(&[1, 1, 1])) && hb.contains(&iv(&[1, 1, 2])));
        let ci = check_condition_i(&b1).unwrap();
        assert!(!ci.holds);
        assert_eq!(ci.missing_from_gamma, vec![iv(&[1, 1, 1])]);
    }

    #[test]
    fn chart_duality_round_trip() {
        let x = dual_223();
        let r = nash_blowup_fan(&x, 0).unwrap();
        for c in &r.charts {
            let v = c.vertex.to_q();
            assert_eq!(c.cone.dual(), r.newton.feasible_cone(&v).unwrap());
            assert!(r.jacobian.points.contains(&c.vertex));
        }
        assert!(r.fan.is_refinement_of(&Fan::from_cone(&x.sigma).unwrap()));
    }

    #[test]
    fn triangle_family() {
        for n in [2, 3, 5] {
            let x = AffineToricVariety::from_dual(&triangle_omega(n)).unwrap();
            let r = nash_blowup_fan(&x, 0).unwrap();
            assert_eq!(r.newton.vertices(), &[q(&[1, 1, 3]), q(&[2 * n - 1, 1, 3])]);
            assert!(r.smooth);
            assert_eq!(r.charts.len(), 2);
            assert!(compare_characteristics(&x).unwrap().equal_for_all);
        }
    }

    #[test]
    fn unit_square() {
        let w = Cone::from_i64(&[&[0, 0, 1], &[1, 0, 1], &[0, 1, 1], &[1, 1, 1]]);
        let x = AffineToricVariety::from_dual(&w).unwrap();
        let n0 = newton_polyhedron(&x, 0).unwrap();
        assert_eq!(
            n0.vertices(),
            &[q(&[1, 1, 3]), q(&[1, 2, 3]), q(&[2, 1, 3]), q(&[2, 2, 3])]
        );
        assert!(nash_blowup_fan(&x, 0).unwrap().smooth);
    }

    #[test]
    fn regular_cone() {
        let c = Cone::from_i64(&[&[1, 0, 0], &[0, 1, 0], &[0, 0, 1]]);
        let x = AffineToricVariety::from_sigma(&c).unwrap();
        let j = log_jacobian_points(&x, 0).unwrap();
        assert_eq!(j.points, vec![iv(&[1, 1, 1])]);
        assert!(relevant_primes(&x).unwrap().is_empty());
        let r = nash_blowup_fan(&x, 0).unwrap();
        assert!(r.smooth);
        assert_eq!(r.fan, Fan::from_cone(&c).unwrap());
        let it = nash_iterate(&c, 0, 5).unwrap();
        assert!(it.resolved);
        assert_eq!(it.depth, 0);
    }

    #[test]
    fn surface_iteration() {
        let c = Cone::from_i64(&[&[1, 0], &[1, 3]]);
        let it = nash_iterate(&c, 5, 10).unwrap();
        assert!(it.resolved);
        assert!(it.depth >= 1);
        assert!(!it.depth_cap_hit);
    }

    #[test]
    fn dual_223_iteration() {
        let x = dual_223();
        let it = nash_iterate(&x.sigma, 0, 3).unwrap();
        assert!(!it.root.as_ref().unwrap().result.smooth);
        assert!(it.depth >= 2 || it.depth_cap_hit);
    }

    #[test]
    fn rejects_bad_input() {
        let flat = Cone::from_i64(&[&[1, 0, 0], &[0, 1, 0]]);
        assert_eq!(
            AffineToricVariety::from_sigma(&flat).unwrap_err(),
            Error::NotFullDimensional
        );
        let x = dual_223();
        assert!(is_g_stable(&x.dual).unwrap().is_g_stable);
    }
}
