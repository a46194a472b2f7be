//! Computations behind the subcommands and corpus checks, as JSON.

use num_bigint::BigInt;
use serde_json::{json, Map, Value};
use toric_core::desing::{
    fan_hilbert_union, g_desingularize, is_moderate_resolution, DesingOptions,
};
use toric_core::gstable::{
    gamma_plus, gamma_plus_matches_enumeration, is_g_stable_fan, is_g_stable_with_cap,
    GStabilityReport,
};
use toric_core::hilbert::{brute_force_hilbert, default_bound, hilbert_basis};
use toric_core::nash::{
    compare_characteristics, nash_blowup_fan, nash_iterate, subset_determinants,
    AffineToricVariety, NashNode,
};
use toric_core::polytopes::{
    barycentric_hull, cube_staircase_triangulation, hunt, hunt_candidates, is_g_flat, is_smooth,
    omega_cone, one_step_resolution, product_of_simplices, verify_baryhull_theorem,
    LatticePolytope,
};
use toric_core::{Cone, Error, IntVector};

use crate::encode::{cone, count, fan, int, ivec, ivecs, qvec, qvecs};
use crate::input::Input;
use crate::CliError;

/// A result payload and, where the command decides something, its verdict.
#[derive(Clone, Debug)]
pub struct Computed {
    pub result: Value,
    pub verdict: Option<bool>,
}

impl Computed {
    fn info(result: Value) -> Self {
        Computed {
            result,
            verdict: None,
        }
    }

    fn decide(result: Value, verdict: bool) -> Self {
        Computed {
            result,
            verdict: Some(verdict),
        }
    }
}

fn primes(ps: impl IntoIterator<Item = u64>) -> Value {
    Value::Array(
        ps.into_iter()
            .map(|p| Value::String(p.to_string()))
            .collect(),
    )
}

pub fn hilbert(input: &Input) -> Result<Computed, CliError> {
    let c = input.cone()?;
    let hb = hilbert_basis(&c)?;
    Ok(Computed::info(json!({
        "cone": cone(&c),
        "basis": ivecs(&hb.elements),
        "size": count(hb.len()),
        "grading": ivec(&hb.grading),
    })))
}

fn gstability_fields(r: &GStabilityReport) -> Map<String, Value> {
    let v = r.condition_ii.violation.as_ref();
    let Value::Object(m) = json!({
        "is_g_stable": r.is_g_stable,
        "condition_i": r.condition_i.holds,
        "missing_from_gamma": ivecs(&r.condition_i.missing_from_gamma),
        "extra_in_gamma": ivecs(&r.condition_i.extra_in_gamma),
        "condition_ii": r.condition_ii.holds,
        "violation_subset": v.map(|v| ivecs(&v.subset)),
        "witness": v.map(|v| ivec(&v.witness)),
        "witness_in_subcone_basis": v.map(|v| v.witness_in_subcone_basis),
        "subcones_checked": count(r.condition_ii.subcones_checked),
    }) else {
        unreachable!()
    };
    m
}

pub fn gstable(input: &Input, cap: usize) -> Result<Computed, CliError> {
    if let Input::Fan(f) = input {
        let r = is_g_stable_fan(f)?;
        let cones: Vec<Value> = r
            .cones
            .iter()
            .map(|(rays, ok)| json!({ "rays": ivecs(rays), "g_stable": ok }))
            .collect();
        let first = r.first_failure.as_ref().map(|(rays, rep)| {
            let mut m = gstability_fields(rep);
            m.insert("rays".into(), ivecs(rays));
            Value::Object(m)
        });
        return Ok(Computed::decide(
            json!({
                "is_g_stable": r.is_g_stable,
                "cones": cones,
                "first_failure": first,
                "faces_agree_with_maximal": r.faces_agree_with_maximal,
            }),
            r.is_g_stable,
        ));
    }
    let c = input.cone()?;
    let r = is_g_stable_with_cap(&c, cap)?;
    let mut m = gstability_fields(&r);
    let g = gamma_plus(&c)?;
    let mut by_dim = vec![0usize; c.dim()];
    for f in &g.compact_faces {
        by_dim[f.dim] += 1;
    }
    m.insert(
        "compact_faces_by_dim".into(),
        Value::Array(by_dim.into_iter().map(count).collect()),
    );
    m.insert("hilbert_basis".into(), ivecs(&g.hilbert.elements));
    m.insert("cone".into(), cone(&c));
    Ok(Computed::decide(Value::Object(m), r.is_g_stable))
}

pub fn desing(input: &Input, opts: DesingOptions) -> Result<Computed, CliError> {
    let f = input.fan()?;
    let (out, trace) = match g_desingularize(&f, opts) {
        Ok(x) => x,
        Err(Error::NotGStable) => {
            return Ok(Computed::decide(
                json!({ "is_g_stable": false, "fan": Value::Null }),
                false,
            ));
        }
        Err(e) => return Err(e.into()),
    };
    let union = fan_hilbert_union(&f)?;
    let regular = out.is_regular();
    let refines = out.is_refinement_of(&f);
    let rays_equal = out.rays() == union.elements;
    if !(regular && refines && rays_equal) {
        return Err(CliError::invariant(format!(
            "desingularization output: regular={regular} refines={refines} rays_equal_hilbert_union={rays_equal}"
        )));
    }
    let moderate = match input {
        Input::Fan(_) => None,
        _ => Some(is_moderate_resolution(&out, &input.cone()?)?),
    };
    let steps: Vec<Value> = trace
        .steps
        .iter()
        .map(|s| {
            json!({
                "dim": count(s.dim),
                "cone_rays": ivecs(&s.cone_rays),
                "gamma": ivec(&s.gamma),
                "before": [count(s.before.0), count(s.before.1)],
                "after": [count(s.after.0), count(s.after.1)],
                "descends": s.descends(),
            })
        })
        .collect();
    let non_descending = trace.steps.iter().filter(|s| !s.descends()).count();
    Ok(Computed::info(json!({
        "is_g_stable": opts.check_g_stable.then_some(true),
        "fan": fan(&out),
        "regular": regular,
        "refines": refines,
        "rays_equal_hilbert_union": rays_equal,
        "hilbert_union": ivecs(&union.elements),
        "moderate": moderate,
        "step_count": count(trace.steps.len()),
        "all_steps_descend": non_descending == 0,
        "non_descending_steps": count(non_descending),
        "steps": steps,
    })))
}

fn chart_json(vertex: &IntVector, c: &Cone) -> Value {
    let dual = c.dual();
    json!({
        "vertex": ivec(vertex),
        "rays": ivecs(&c.key()),
        "dual_rays": ivecs(&dual.key()),
        "regular": c.is_regular(),
    })
}

pub fn nash(x: &AffineToricVariety, p: u64) -> Result<Computed, CliError> {
    let r = nash_blowup_fan(x, p)?;
    let mut dets: Vec<BigInt> = subset_determinants(x)?
        .into_iter()
        .map(|t| t.det.magnitude().clone().into())
        .collect();
    dets.sort();
    let charts: Vec<Value> = r
        .charts
        .iter()
        .map(|c| chart_json(&c.vertex, &c.cone))
        .collect();
    let by_vertex: Map<String, Value> = r
        .charts
        .iter()
        .map(|c| {
            let key = c
                .vertex
                .iter()
                .map(|x| x.to_string())
                .collect::<Vec<_>>()
                .join(",");
            (key, chart_json(&c.vertex, &c.cone))
        })
        .collect();
    Ok(Computed::decide(
        json!({
            "char": p.to_string(),
            "sigma": cone(&x.sigma),
            "dual": cone(&x.dual),
            "dual_hilbert": ivecs(&x.dual_hilbert_basis()?.elements),
            "abs_determinants": dets.iter().map(int).collect::<Vec<_>>(),
            "jacobian_points": ivecs(&r.jacobian.points),
            "vertices": qvecs(r.newton.vertices()),
            "charts": charts,
            "charts_by_vertex": by_vertex,
            "smooth": r.smooth,
        }),
        r.smooth,
    ))
}

pub fn compare(x: &AffineToricVariety) -> Result<Computed, CliError> {
    let c = compare_characteristics(x)?;
    let dis: Vec<Value> = c
        .disagreements
        .iter()
        .map(|d| {
            json!({
                "prime": d.prime.to_string(),
                "only_in_zero": qvecs(&d.only_in_zero),
                "only_in_p": qvecs(&d.only_in_p),
            })
        })
        .collect();
    Ok(Computed::decide(
        json!({
            "relevant_primes": primes(c.relevant_primes.iter().copied()),
            "vertices_zero": qvecs(&c.vertices_zero),
            "equal_for_all": c.equal_for_all,
            "disagreements": dis,
        }),
        c.equal_for_all,
    ))
}

/// Characteristic 0 blowup and the comparison with every relevant prime.
pub fn nash_full(x: &AffineToricVariety) -> Result<Computed, CliError> {
    let a = nash(x, 0)?;
    let b = compare(x)?;
    let (Value::Object(mut m), Value::Object(n)) = (a.result, b.result) else {
        unreachable!()
    };
    m.extend(n);
    Ok(Computed::info(Value::Object(m)))
}

fn node_json(n: &NashNode) -> Value {
    json!({
        "sigma": ivecs(&n.result.sigma.key()),
        "smooth": n.result.smooth,
        "charts": count(n.result.charts.len()),
        "singular_charts": count(n.result.singular_charts.len()),
        "fixed_charts": count(n.fixed_charts.len()),
        "depth_cap_hit": n.depth_cap_hit,
        "children": n.children.iter().map(node_json).collect::<Vec<_>>(),
    })
}

/// `Ok(None)` in the verdict slot means the depth budget ran out.
pub fn iterate(x: &AffineToricVariety, p: u64, max_depth: usize) -> Result<Computed, CliError> {
    let it = nash_iterate(&x.sigma, p, max_depth)?;
    let result = json!({
        "char": p.to_string(),
        "max_depth": count(max_depth),
        "resolved": it.resolved,
        "depth": count(it.depth),
        "depth_cap_hit": it.depth_cap_hit,
        "nodes": count(it.nodes),
        "tree": it.root.as_ref().map(node_json),
    });
    Ok(Computed {
        result,
        verdict: (!it.depth_cap_hit).then_some(it.resolved),
    })
}

pub fn gflat(p: &LatticePolytope) -> Result<Computed, CliError> {
    let g = is_g_flat(p)?;
    Ok(Computed::decide(
        json!({
            "is_g_flat": g.is_g_flat,
            "offending": ivecs(&g.offending),
            "basis_matches_lattice_points": g.basis_matches_lattice_points,
            "lattice_point_count": count(p.lattice_points()?.len()),
            "vertices": ivecs(p.vertices()),
        }),
        g.is_g_flat,
    ))
}

pub fn smooth(p: &LatticePolytope) -> Result<Computed, CliError> {
    let s = is_smooth(p)?;
    Ok(Computed::decide(
        json!({ "smooth": s, "vertices": ivecs(p.vertices()) }),
        s,
    ))
}

pub fn baryhull(p: &LatticePolytope) -> Result<Computed, CliError> {
    let bh = barycentric_hull(p)?;
    let origin = bh
        .barycenters
        .iter()
        .position(|b| b.is_zero())
        .map_or(0, |i| bh.multiplicities[i]);
    let hull_smooth = match bh.scaled_hull() {
        Some(q) if q.is_full_dimensional() => Some(is_smooth(&q)?),
        _ => None,
    };
    let barycenters: Vec<Value> = bh
        .barycenters
        .iter()
        .zip(&bh.multiplicities)
        .map(|(b, m)| json!({ "point": qvec(b), "multiplicity": count(*m) }))
        .collect();
    Ok(Computed::info(json!({
        "lattice_point_count": count(p.lattice_points()?.len()),
        "simplex_count": count(bh.simplex_count),
        "barycenter_count": count(bh.barycenters.len()),
        "origin_multiplicity": count(origin),
        "hull_vertices": qvecs(&bh.hull_vertices),
        "hull_smooth": hull_smooth,
        "barycenters": barycenters,
    })))
}

pub fn verify_baryhull(p: &LatticePolytope) -> Result<Computed, CliError> {
    let r = verify_baryhull_theorem(p)?;
    Ok(Computed::decide(
        json!({
            "simplex_case": r.simplex_case,
            "hull_equals_corner_barycenters": r.hull_equals_corner_barycenters,
            "bijection": r.bijection,
            "edges_parallel": r.edges_parallel,
            "fcones_match": r.fcones_match,
            "hull_smooth": r.hull_smooth,
            "corner_count": count(r.corner_count),
            "hull_vertex_count": count(r.hull_vertex_count),
            "all_pass": r.all_pass(),
            "failures": r.failures(),
        }),
        r.all_pass(),
    ))
}

pub fn onestep(p: &LatticePolytope) -> Result<Computed, CliError> {
    let r = one_step_resolution(p)?;
    let by_char: Vec<Value> = r
        .smooth_by_char
        .iter()
        .map(|(c, s)| json!({ "char": c.to_string(), "smooth": s }))
        .collect();
    Ok(Computed::decide(
        json!({
            "smooth": r.smooth,
            "g_flat": r.g_flat,
            "hypotheses_hold": r.hypotheses_hold(),
            "relevant_primes": primes(r.relevant_primes.iter().copied()),
            "smooth_by_char": by_char,
            "char_independent": r.char_independent,
            "newton_matches_baryhull": r.newton_matches_baryhull,
            "resolved": r.resolved(),
            "verdict": r.verdict(),
        }),
        r.resolved(),
    ))
}

/// Smoothness, G-flatness and G-stability of `ω_P` side by side.
pub fn relations(p: &LatticePolytope) -> Result<Computed, CliError> {
    let w = omega_cone(p);
    let g = is_g_stable_with_cap(&w, toric_core::gstable::SUBSET_CAP)?;
    let v = g.condition_ii.violation.as_ref();
    Ok(Computed::info(json!({
        "smooth": is_smooth(p)?,
        "g_flat": is_g_flat(p)?.is_g_flat,
        "omega_g_stable": g.is_g_stable,
        "omega_condition_i": g.condition_i.holds,
        "violation_subset": v.map(|v| ivecs(&v.subset)),
        "witness": v.map(|v| ivec(&v.witness)),
    })))
}

pub fn staircase(d: usize) -> Result<Computed, CliError> {
    let t = cube_staircase_triangulation(d)?;
    Ok(Computed::decide(
        json!({
            "simplex_count": count(t.simplices.len()),
            "all_unimodular": t.all_unimodular,
            "total_volume": t.total_volume.to_string(),
            "inside_cube": t.inside_cube,
            "interiors_disjoint": t.interiors_disjoint,
        }),
        t.all_unimodular,
    ))
}

pub fn product(m: usize, n: usize) -> Result<Computed, CliError> {
    let ps = product_of_simplices(m, n)?;
    let mut hb = hilbert_basis(&ps.cone)?.elements;
    let mut a = ps.coordinates.clone();
    hb.sort();
    a.sort();
    let g = is_g_stable_with_cap(&ps.cone, toric_core::gstable::SUBSET_CAP)?;
    let x = AffineToricVariety::from_dual(&ps.cone)?;
    let c = compare_characteristics(&x)?;
    Ok(Computed::info(json!({
        "point_count": count(ps.points.len()),
        "rank": count(ps.lattice.rank()),
        "hilbert_is_points": hb == a,
        "g_stable": g.is_g_stable,
        "relevant_primes": primes(c.relevant_primes.iter().copied()),
        "equal_for_all": c.equal_for_all,
    })))
}

pub fn hunt_report() -> Result<Computed, CliError> {
    let r = hunt(&hunt_candidates()?)?;
    let found: Vec<Value> = r
        .smooth_not_g_flat
        .iter()
        .map(|(name, g)| json!({ "name": name, "offending": ivecs(&g.offending) }))
        .collect();
    Ok(Computed::info(json!({
        "scanned": r.scanned,
        "not_smooth": r.not_smooth,
        "smooth_not_g_flat": found,
    })))
}

/// Fast Hilbert basis against brute force, and `Γ_+` against enumeration.
pub fn oracle(c: &Cone) -> Result<Computed, CliError> {
    let hb = hilbert_basis(c)?;
    let bound = default_bound(&hb);
    let brute = brute_force_hilbert(c, &bound)?;
    let hilbert_ok = brute == hb.elements;
    let gamma_ok = gamma_plus_matches_enumeration(c, &bound)?;
    Ok(Computed::decide(
        json!({
            "cone": cone(c),
            "bound": int(&bound),
            "hilbert_basis": ivecs(&hb.elements),
            "brute_force": ivecs(&brute),
            "hilbert_agrees": hilbert_ok,
            "gamma_plus_agrees": gamma_ok,
        }),
        hilbert_ok && gamma_ok,
    ))
}

/// The computation a corpus row names.
pub fn check(name: &str, input: &Input) -> Result<Computed, CliError> {
    match name {
        "hilbert" => hilbert(input),
        "gstable" => gstable(input, toric_core::gstable::SUBSET_CAP),
        "desing" => desing(input, DesingOptions::default()),
        "nash" => nash_full(&input.variety()?),
        "gflat" => gflat(&input.polytope()?),
        "smooth" => smooth(&input.polytope()?),
        "baryhull" => baryhull(&input.polytope()?),
        "verify-baryhull" => verify_baryhull(&input.polytope()?),
        "onestep" => onestep(&input.polytope()?),
        "relations" => relations(&input.polytope()?),
        "oracle" => oracle(&input.cone()?),
        "staircase" => match input {
            Input::Staircase { d } => staircase(*d),
            other => Err(CliError::usage(format!(
                "staircase check needs a staircase input, got {}",
                other.kind()
            ))),
        },
        "product" => match input {
            Input::Product { m, n } => product(*m, *n),
            other => Err(CliError::usage(format!(
                "product check needs a simplex-product input, got {}",
                other.kind()
            ))),
        },
        other => Err(CliError::usage(format!("unknown check {other:?}"))),
    }
}
