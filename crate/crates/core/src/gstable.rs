//! G-stability of cones and fans, the polyhedron `Gamma_+` and the supporting
//! form of a G-stable simplicial cone.

use std::collections::BTreeSet;

use num_bigint::BigInt;
use num_traits::Signed;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::fans::Fan;
use crate::hilbert::{bounded_cone_points, hilbert_basis, HilbertBasis};
use crate::linalg::{IntVector, QVector};
use crate::polyhedra::{
    hyperplane_through, minkowski_polyhedron, Cone, FaceDescriptor, RationalPolyhedron,
};

/// Default cap on `|G(sigma)|` for the subset check.
pub const SUBSET_CAP: usize = 16;

/// `Gamma_+(sigma) = Conv(G(sigma)) + sigma` with its compact part.
#[derive(Clone, Debug)]
pub struct GammaData {
    pub cone: Cone,
    pub hilbert: HilbertBasis,
    pub gamma_plus: RationalPolyhedron,
    pub compact_faces: Vec<FaceDescriptor>,
    /// Lattice points on the union of the compact faces, sorted.
    pub compact_lattice_points: Vec<IntVector>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConditionI {
    pub holds: bool,
    /// Hilbert basis elements off the compact faces.
    pub missing_from_gamma: Vec<IntVector>,
    /// Lattice points of the compact faces that are not Hilbert elements.
    pub extra_in_gamma: Vec<IntVector>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SubsetViolation {
    /// The subset `A`, sorted.
    pub subset: Vec<IntVector>,
    /// Smallest element of the symmetric difference of `G(Cone(A))` and
    /// `G(sigma) ∩ Cone(A)`.
    pub witness: IntVector,
    /// Whether the witness belongs to `G(Cone(A))` (otherwise it is an
    /// element of `G(sigma) ∩ Cone(A)` missing from `G(Cone(A))`).
    pub witness_in_subcone_basis: bool,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConditionII {
    pub holds: bool,
    pub violation: Option<SubsetViolation>,
    /// Number of distinct subcones examined.
    pub subcones_checked: usize,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GStabilityReport {
    pub condition_i: ConditionI,
    pub condition_ii: ConditionII,
    pub is_g_stable: bool,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SupportingForm {
    pub gamma0: IntVector,
    pub ell0: BigInt,
}

/// `Gamma_+` for a nonzero pointed cone.
pub fn gamma_plus(c: &Cone) -> Result<GammaData> {
    let hilbert = hilbert_basis(c)?;
    gamma_plus_from(c, hilbert)
}

fn gamma_plus_from(c: &Cone, hilbert: HilbertBasis) -> Result<GammaData> {
    if hilbert.is_empty() {
        return Err(Error::InvalidInput("the zero cone has no Gamma_+".into()));
    }
    let pts: Vec<QVector> = hilbert.elements.iter().map(IntVector::to_q).collect();
    let gamma_plus = minkowski_polyhedron(&pts, c)?;
    let compact_faces = gamma_plus.compact_faces();
    let mut points = BTreeSet::new();
    for f in &compact_faces {
        let maximal = !compact_faces
            .iter()
            .any(|g| g.dim > f.dim && f.vertex_indices.is_subset(&g.vertex_indices));
        if maximal {
            points.extend(gamma_plus.face_polytope(f)?.lattice_points()?);
        }
    }
    Ok(GammaData {
        cone: c.clone(),
        hilbert,
        gamma_plus,
        compact_faces,
        compact_lattice_points: points.into_iter().collect(),
    })
}

/// `G(sigma) = Gamma(sigma) ∩ N`.
pub fn check_condition_i(c: &Cone) -> Result<ConditionI> {
    Ok(condition_i_from(&gamma_plus(c)?))
}

fn condition_i_from(g: &GammaData) -> ConditionI {
    let basis: BTreeSet<&IntVector> = g.hilbert.elements.iter().collect();
    let gamma: BTreeSet<&IntVector> = g.compact_lattice_points.iter().collect();
    let missing: Vec<IntVector> = basis.difference(&gamma).map(|v| (*v).clone()).collect();
    let extra: Vec<IntVector> = gamma.difference(&basis).map(|v| (*v).clone()).collect();
    ConditionI {
        holds: missing.is_empty() && extra.is_empty(),
        missing_from_gamma: missing,
        extra_in_gamma: extra,
    }
}

/// `G(Cone(A)) = G(sigma) ∩ Cone(A)` for every `A ⊆ G(sigma)`.
///
/// Every subcone is visited once, through the subset of `G(sigma)` equal to
/// its ray set. Such subsets are closed under taking subsets, so they are
/// grown one element at a time. The first violation in (size,
/// lexicographic) order is reported.
pub fn check_condition_ii(c: &Cone, cap: usize) -> Result<ConditionII> {
    let hb = hilbert_basis(c)?;
    condition_ii_from(c, &hb, cap)
}

fn check_subcone(
    c: &Cone,
    g: &[IntVector],
    idx: &[usize],
) -> Result<Option<Option<SubsetViolation>>> {
    let a: Vec<IntVector> = idx.iter().map(|&i| g[i].clone()).collect();
    let sub = c.sibling(a.clone())?;
    if sub.rays()?.len() != a.len() {
        return Ok(None);
    }
    let own = hilbert_basis(&sub)?;
    let expected: BTreeSet<&IntVector> = g.iter().filter(|h| sub.contains(h)).collect();
    let actual: BTreeSet<&IntVector> = own.elements.iter().collect();
    let witness = expected
        .symmetric_difference(&actual)
        .min()
        .map(|w| (*w).clone());
    Ok(Some(witness.map(|w| SubsetViolation {
        witness_in_subcone_basis: actual.contains(&w),
        subset: a,
        witness: w,
    })))
}

fn condition_ii_from(c: &Cone, hb: &HilbertBasis, cap: usize) -> Result<ConditionII> {
    let g = &hb.elements;
    if g.len() > cap {
        return Err(Error::cap("subset check |G|", cap as u128, g.len() as u128));
    }
    let mut checked = 0;
    let mut level: Vec<Vec<usize>> = vec![Vec::new()];
    while !level.is_empty() {
        let candidates: Vec<Vec<usize>> = level
            .iter()
            .flat_map(|s| {
                let start = s.last().map_or(0, |&l| l + 1);
                (start..g.len()).map(move |j| {
                    let mut t = s.clone();
                    t.push(j);
                    t
                })
            })
            .collect();
        let outcomes: Vec<Result<Option<Option<SubsetViolation>>>> = candidates
            .par_iter()
            .map(|idx| check_subcone(c, g, idx))
            .collect();
        let mut next = Vec::new();
        for (idx, o) in candidates.into_iter().zip(outcomes) {
            match o? {
                None => {}
                Some(None) => {
                    checked += 1;
                    next.push(idx);
                }
                Some(Some(v)) => {
                    checked += 1;
                    return Ok(ConditionII {
                        holds: false,
                        violation: Some(v),
                        subcones_checked: checked,
                    });
                }
            }
        }
        level = next;
    }
    Ok(ConditionII {
        holds: true,
        violation: None,
        subcones_checked: checked,
    })
}

/// Both conditions, with witnesses.
pub fn is_g_stable(c: &Cone) -> Result<GStabilityReport> {
    is_g_stable_with_cap(c, SUBSET_CAP)
}

pub fn is_g_stable_with_cap(c: &Cone, cap: usize) -> Result<GStabilityReport> {
    let data = gamma_plus(c)?;
    let condition_i = condition_i_from(&data);
    let condition_ii = condition_ii_from(c, &data.hilbert, cap)?;
    Ok(GStabilityReport {
        is_g_stable: condition_i.holds && condition_ii.holds,
        condition_i,
        condition_ii,
    })
}

/// The primitive `gamma_0` and `ell_0 > 0` with `<h, gamma_0> = ell_0` on the
/// rays of a G-stable simplicial full-dimensional cone.
pub fn supporting_form(c: &Cone, report: &GStabilityReport) -> Result<SupportingForm> {
    if !c.is_full_dimensional() {
        return Err(Error::NotFullDimensional);
    }
    if !c.is_simplicial() {
        return Err(Error::NotSimplicial);
    }
    if !report.is_g_stable {
        return Err(Error::NotGStable);
    }
    let rays = c.rays()?;
    let q = hyperplane_through(rays)
        .ok_or_else(|| Error::Invariant("no hyperplane through simplicial rays".into()))?;
    let gamma0 = q.direction()?;
    let ell0 = gamma0.dot(&rays[0]);
    if !ell0.is_positive() || rays.iter().any(|r| gamma0.dot(r) != ell0) {
        return Err(Error::Invariant(
            "supporting form is not constant on rays".into(),
        ));
    }
    let hb = hilbert_basis(c)?;
    if let Some(h) = hb.elements.iter().find(|h| gamma0.dot(h) > ell0) {
        return Err(Error::Invariant(format!(
            "Hilbert element {h} lies beyond the supporting hyperplane"
        )));
    }
    Ok(SupportingForm { gamma0, ell0 })
}

/// Compares `Conv(G) + sigma` with the hull of all nonzero lattice points of
/// degree at most `bound`, on vertices and compact faces.
pub fn gamma_plus_matches_enumeration(c: &Cone, bound: &BigInt) -> Result<bool> {
    let data = gamma_plus(c)?;
    let pts: Vec<QVector> = bounded_cone_points(c, &data.hilbert.grading, bound)?
        .into_iter()
        .filter(|p| !p.is_zero())
        .map(|p| p.to_q())
        .collect();
    let enumerated = minkowski_polyhedron(&pts, c)?;
    if enumerated.vertices() != data.gamma_plus.vertices() {
        return Ok(false);
    }
    let faces = |p: &RationalPolyhedron| -> BTreeSet<Vec<QVector>> {
        p.compact_faces()
            .iter()
            .map(|f| {
                f.vertex_indices
                    .iter()
                    .map(|&i| p.vertices()[i].clone())
                    .collect()
            })
            .collect()
    };
    Ok(faces(&enumerated) == faces(&data.gamma_plus))
}

#[derive(Clone, Debug)]
pub struct FanGStability {
    pub is_g_stable: bool,
    /// Ray set and verdict for every cone of the fan.
    pub cones: Vec<(Vec<IntVector>, bool)>,
    /// First failing cone in (dimension, ray set) order.
    pub first_failure: Option<(Vec<IntVector>, GStabilityReport)>,
    /// Whether "all maximal cones G-stable" agreed with "all faces
    /// G-stable".
    pub faces_agree_with_maximal: bool,
}

/// Checks every cone of the fan.
pub fn is_g_stable_fan(f: &Fan) -> Result<FanGStability> {
    let cones: Vec<Cone> = f.cones().into_iter().filter(|c| c.dim() > 0).collect();
    let reports: Vec<GStabilityReport> =
        cones.par_iter().map(is_g_stable).collect::<Result<_>>()?;
    let mut first_failure = None;
    let mut verdicts = Vec::new();
    for (c, r) in cones.iter().zip(&reports) {
        verdicts.push((c.key(), r.is_g_stable));
        if !r.is_g_stable && first_failure.is_none() {
            first_failure = Some((c.key(), r.clone()));
        }
    }
    let maximal_ok = f
        .maximal_cones()
        .iter()
        .all(|m| m.dim() == 0 || verdicts.iter().any(|(k, ok)| *ok && *k == m.key()));
    let all_ok = verdicts.iter().all(|(_, ok)| *ok);
    Ok(FanGStability {
        is_g_stable: all_ok,
        cones: verdicts,
        first_failure,
        faces_agree_with_maximal: !maximal_ok || all_ok,
    })
}

/// `<h, gamma_0>` for each Hilbert element, for inspecting the lemma on
/// convex functions.
pub fn supporting_values(hb: &HilbertBasis, form: &SupportingForm) -> Vec<BigInt> {
    hb.elements.iter().map(|h| form.gamma0.dot(h)).collect()
}
