//! G-desingularization by repeated star subdivision, the measures
//! `M(i, Σ)` and `N(i, Σ)`, and the moderate-resolution check.

use std::collections::{BTreeSet, HashMap};
use std::sync::{Arc, Mutex};

use num_traits::Signed;

use crate::error::{Error, Result};
use crate::fans::Fan;
use crate::gstable::is_g_stable_fan;
use crate::hilbert::{hilbert_basis, HilbertBasis};
use crate::linalg::IntVector;
use crate::polyhedra::{hyperplane_through, Cone};

/// Default cap on star subdivisions.
pub const STEP_CAP: usize = 10_000;

/// Hilbert bases memoized by ray set. All cones must share one lattice.
#[derive(Default)]
pub struct HilbertCache {
    map: Mutex<HashMap<Vec<IntVector>, Arc<HilbertBasis>>>,
}

impl HilbertCache {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn get(&self, c: &Cone) -> Result<Arc<HilbertBasis>> {
        let key = c.key();
        if let Some(hb) = self.map.lock().expect("cache lock").get(&key) {
            return Ok(hb.clone());
        }
        let hb = Arc::new(hilbert_basis(c)?);
        self.map.lock().expect("cache lock").insert(key, hb.clone());
        Ok(hb)
    }
}

/// `G(Σ)` computed over every cone, next to the union over maximal cones.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HilbertUnion {
    pub elements: Vec<IntVector>,
    pub from_maximal: Vec<IntVector>,
    /// Elements present in one union but not the other.
    pub discrepancies: Vec<IntVector>,
}

pub fn fan_hilbert_union(f: &Fan) -> Result<HilbertUnion> {
    fan_hilbert_union_cached(f, &HilbertCache::new())
}

fn fan_hilbert_union_cached(f: &Fan, cache: &HilbertCache) -> Result<HilbertUnion> {
    let mut all = BTreeSet::new();
    for c in f.cones() {
        all.extend(cache.get(&c)?.elements.iter().cloned());
    }
    let mut maximal = BTreeSet::new();
    for c in f.maximal_cones() {
        maximal.extend(cache.get(c)?.elements.iter().cloned());
    }
    let discrepancies = all.symmetric_difference(&maximal).cloned().collect();
    Ok(HilbertUnion {
        elements: all.into_iter().collect(),
        from_maximal: maximal.into_iter().collect(),
        discrepancies,
    })
}

/// `M(i, Σ) = max #G(σ) - i` over the `i`-dimensional cones (0 when there
/// are none).
pub fn measure_m(f: &Fan, i: usize) -> Result<usize> {
    Ok(measures(f, i, &HilbertCache::new())?.0)
}

/// `N(i, Σ)`: number of `i`-cones with `#G(σ) - i >= max(M(i, Σ), 1)`.
pub fn measure_n(f: &Fan, i: usize) -> Result<usize> {
    Ok(measures(f, i, &HilbertCache::new())?.1)
}

fn measures(f: &Fan, i: usize, cache: &HilbertCache) -> Result<(usize, usize)> {
    if !f.is_simplicial() {
        return Err(Error::NotSimplicial);
    }
    let excess: Vec<usize> = f
        .cones_of_dim(i)
        .iter()
        .map(|c| Ok(cache.get(c)?.len() - i))
        .collect::<Result<_>>()?;
    let m = excess.iter().copied().max().unwrap_or(0);
    let n = excess.iter().filter(|&&e| e >= m.max(1)).count();
    Ok((m, n))
}

#[derive(Clone, Debug)]
pub struct DesingStep {
    /// Dimension of the subdivided cone.
    pub dim: usize,
    pub cone_rays: Vec<IntVector>,
    pub gamma: IntVector,
    /// `(M, N)` at `dim` before and after the subdivision.
    pub before: (usize, usize),
    pub after: (usize, usize),
    pub fan_after: Fan,
}

impl DesingStep {
    /// Strict lexicographic decrease of `(M, N)`.
    pub fn descends(&self) -> bool {
        self.after < self.before
    }
}

#[derive(Clone, Debug)]
pub struct DesingTrace {
    pub initial: Fan,
    pub simplicial: Fan,
    pub steps: Vec<DesingStep>,
    pub final_fan: Fan,
    /// `G(Σ)` of the input.
    pub target_rays: Vec<IntVector>,
}

#[derive(Clone, Copy, Debug)]
pub struct DesingOptions {
    pub check_g_stable: bool,
    pub step_cap: usize,
    /// Among the cones realizing `M` and their candidate elements, take the
    /// first pair whose subdivision lowers `(M, N)`. A single star
    /// subdivision of a non-maximal cone also cuts the cones containing it
    /// and can create new cones of the same dimension and size, so the plain
    /// first choice does not always descend.
    pub seek_descent: bool,
}

impl Default for DesingOptions {
    fn default() -> Self {
        DesingOptions {
            check_g_stable: true,
            step_cap: STEP_CAP,
            seek_descent: true,
        }
    }
}

/// Regular refinement whose rays are `G(Σ)`, by star subdivisions at Hilbert
/// basis elements, lowest non-regular dimension first.
pub fn g_desingularize(f: &Fan, opts: DesingOptions) -> Result<(Fan, DesingTrace)> {
    if opts.check_g_stable && !is_g_stable_fan(f)?.is_g_stable {
        return Err(Error::NotGStable);
    }
    let cache = HilbertCache::new();
    let target = fan_hilbert_union_cached(f, &cache)?.elements;
    let simplicial = f.simplicialize()?;
    let mut cur = simplicial.clone();
    let mut steps = Vec::new();
    loop {
        let Some((i, realizers)) = pick_cones(&cur, &cache)? else {
            break;
        };
        if steps.len() >= opts.step_cap {
            return Err(Error::StepCapExceeded(opts.step_cap));
        }
        let before = measures(&cur, i, &cache)?;
        let mut choice = None;
        'search: for sigma in &realizers {
            for gamma in candidates(sigma, &cache)? {
                if target.binary_search(&gamma).is_err() {
                    return Err(Error::RayOutsideHilbertUnion(gamma.to_string()));
                }
                let next = cur.star_subdivision(&gamma)?;
                let after = measures(&next, i, &cache)?;
                let descends = after < before;
                if choice.is_none() || descends {
                    choice = Some((sigma, gamma, next, after));
                }
                if descends || !opts.seek_descent {
                    break 'search;
                }
            }
        }
        let (sigma, gamma, next, after) =
            choice.ok_or_else(|| Error::Invariant("non-regular cone with G(σ) = σ(1)".into()))?;
        cur = next;
        steps.push(DesingStep {
            dim: i,
            cone_rays: sigma.rays()?.to_vec(),
            gamma,
            before,
            after,
            fan_after: cur.clone(),
        });
    }
    let trace = DesingTrace {
        initial: f.clone(),
        simplicial,
        steps,
        final_fan: cur.clone(),
        target_rays: target,
    };
    Ok((cur, trace))
}

/// Lowest dimension with a non-regular cone, and the cones there with the
/// most Hilbert elements, by ray set.
fn pick_cones(f: &Fan, cache: &HilbertCache) -> Result<Option<(usize, Vec<Cone>)>> {
    for i in 2..=f.dim() {
        let mut best = 0;
        let mut realizers = Vec::new();
        for c in f.cones_of_dim(i) {
            if c.is_regular() {
                continue;
            }
            let n = cache.get(&c)?.len();
            if n > best {
                best = n;
                realizers.clear();
            }
            if n == best {
                realizers.push(c);
            }
        }
        if !realizers.is_empty() {
            return Ok(Some((i, realizers)));
        }
    }
    Ok(None)
}

/// `G(σ) ∖ σ(1)` by degree, then lexicographically.
fn candidates(sigma: &Cone, cache: &HilbertCache) -> Result<Vec<IntVector>> {
    let rays = sigma.rays()?;
    Ok(cache
        .get(sigma)?
        .by_degree()
        .into_iter()
        .filter(|h| !rays.contains(h))
        .collect())
}

/// Every maximal cone's ray hyperplane meets every ray of `c` at a positive
/// parameter.
pub fn is_moderate_resolution(resolution: &Fan, c: &Cone) -> Result<bool> {
    let base = Fan::from_cone(c)?;
    if !resolution.is_regular() || !resolution.is_refinement_of(&base) {
        return Err(Error::NotRefinement);
    }
    let rays = c.rays()?;
    for tau in resolution.maximal_cones() {
        let gamma = hyperplane_through(tau.rays()?)
            .ok_or_else(|| Error::Invariant("regular cone without ray hyperplane".into()))?;
        if rays.iter().any(|r| !r.dot_q(&gamma).is_positive()) {
            return Ok(false);
        }
    }
    Ok(true)
}
