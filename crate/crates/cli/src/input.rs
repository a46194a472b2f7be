//! Input objects shared by the subcommands and the corpus.
//!
//! An input is one of
//! `{"cone": [...], "role": "sigma" | "dual"}`, `{"fan": [[...], ...]}`,
//! `{"polytope": [...]}` or `{"family": name, "args": [...]}`.
//! A file may also hold a corpus document, in which case its first row's
//! input is used.

use std::path::Path;

use serde_json::Value;
use toric_core::nash::AffineToricVariety;
use toric_core::polytopes::{
    hexagon, k_simplex, omega_cone, rhombus, standard_simplex, triangle, unit_cube, LatticePolytope,
};
use toric_core::{AmbientLattice, Cone, Fan};

use crate::encode::{parse_int, parse_ivecs, parse_usize};
use crate::CliError;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Role {
    Sigma,
    Dual,
}

// Parsed once per run; boxing the large variants buys nothing.
#[allow(clippy::large_enum_variant)]
#[derive(Clone, Debug)]
pub enum Input {
    Cone {
        cone: Cone,
        role: Role,
    },
    Fan(Fan),
    Polytope(LatticePolytope),
    /// Cone over the product of simplices `Δ_{m-1} × Δ_{n-1}`.
    Product {
        m: usize,
        n: usize,
    },
    /// Staircase triangulation of the unit `d`-cube.
    Staircase {
        d: usize,
    },
}

impl Input {
    pub fn kind(&self) -> &'static str {
        match self {
            Input::Cone { .. } => "cone",
            Input::Fan(_) => "fan",
            Input::Polytope(_) => "polytope",
            Input::Product { .. } => "simplex-product",
            Input::Staircase { .. } => "staircase",
        }
    }

    /// The cone itself, `ω_P` for a polytope, the cone over `A` for a
    /// product of simplices.
    pub fn cone(&self) -> Result<Cone, CliError> {
        match self {
            Input::Cone { cone, .. } => Ok(cone.clone()),
            Input::Polytope(p) => Ok(omega_cone(p)),
            Input::Product { m, n } => {
                Ok(toric_core::polytopes::product_of_simplices(*m, *n)?.cone)
            }
            other => Err(CliError::usage(format!(
                "expected a cone, got a {}",
                other.kind()
            ))),
        }
    }

    pub fn fan(&self) -> Result<Fan, CliError> {
        match self {
            Input::Fan(f) => Ok(f.clone()),
            other => Ok(Fan::from_cone(&other.cone()?)?),
        }
    }

    pub fn polytope(&self) -> Result<LatticePolytope, CliError> {
        match self {
            Input::Polytope(p) => Ok(p.clone()),
            other => Err(CliError::usage(format!(
                "expected a polytope, got a {}",
                other.kind()
            ))),
        }
    }

    /// `X(σ)`; polytopes and products of simplices give `σ∨`.
    pub fn variety(&self) -> Result<AffineToricVariety, CliError> {
        Ok(match self {
            Input::Cone {
                cone,
                role: Role::Sigma,
            } => AffineToricVariety::from_sigma(cone)?,
            other => AffineToricVariety::from_dual(&other.cone()?)?,
        })
    }
}

pub fn family(name: &str, args: &[i64]) -> Result<Input, CliError> {
    let arg = |i: usize| -> Result<i64, CliError> {
        args.get(i)
            .copied()
            .ok_or_else(|| CliError::usage(format!("family {name} needs {} argument(s)", i + 1)))
    };
    let size = |i: usize| -> Result<usize, CliError> {
        usize::try_from(arg(i)?)
            .map_err(|_| CliError::usage(format!("family {name}: argument must be non-negative")))
    };
    Ok(match name {
        "simplex-product" => Input::Product {
            m: size(0)?,
            n: size(1)?,
        },
        "staircase" => Input::Staircase { d: size(0)? },
        "cube" => Input::Polytope(unit_cube(size(0)?)?),
        "simplex" => Input::Polytope(standard_simplex(size(0)?)?),
        "triangle" => Input::Polytope(triangle(arg(0)?)?),
        "rhombus" => Input::Polytope(rhombus()),
        "hexagon" => Input::Polytope(hexagon()),
        "ksimplex" => Input::Polytope(k_simplex(arg(0)?, size(1)?)?),
        other => return Err(CliError::usage(format!("unknown family {other:?}"))),
    })
}

pub fn parse_input(v: &Value) -> Result<Input, CliError> {
    let obj = v
        .as_object()
        .ok_or_else(|| CliError::usage("input must be a JSON object"))?;
    if let Some(gens) = obj.get("cone") {
        let gens = parse_ivecs(gens)?;
        let dim = gens
            .first()
            .map(|g| g.dim())
            .ok_or_else(|| CliError::usage("cone needs generators"))?;
        let role = match obj.get("role").and_then(Value::as_str).unwrap_or("sigma") {
            "sigma" => Role::Sigma,
            "dual" => Role::Dual,
            other => return Err(CliError::usage(format!("unknown role {other:?}"))),
        };
        return Ok(Input::Cone {
            cone: Cone::from_generators(dim, gens)?,
            role,
        });
    }
    if let Some(cones) = obj.get("fan") {
        let cones = cones
            .as_array()
            .ok_or_else(|| CliError::usage("fan must be a list of cones"))?
            .iter()
            .map(parse_ivecs)
            .collect::<Result<Vec<_>, _>>()?;
        let dim = cones
            .first()
            .and_then(|c| c.first())
            .map(|g| g.dim())
            .ok_or_else(|| CliError::usage("fan needs a nonempty cone"))?;
        let cones = cones
            .into_iter()
            .map(|gens| Cone::from_generators(dim, gens))
            .collect::<Result<Vec<_>, _>>()?;
        return Ok(Input::Fan(Fan::new(AmbientLattice::standard(dim), cones)?));
    }
    if let Some(pts) = obj.get("polytope") {
        return Ok(Input::Polytope(LatticePolytope::new(&parse_ivecs(pts)?)?));
    }
    if let Some(name) = obj.get("family") {
        let name = name
            .as_str()
            .ok_or_else(|| CliError::usage("family must be a string"))?;
        let args = match obj.get("args") {
            Some(Value::Array(a)) => a
                .iter()
                .map(|x| {
                    let n = parse_int(x)?;
                    i64::try_from(n).map_err(|_| CliError::usage("family argument out of range"))
                })
                .collect::<Result<Vec<_>, _>>()?,
            None => Vec::new(),
            Some(other) => {
                return Err(CliError::usage(format!("args must be a list, got {other}")))
            }
        };
        return family(name, &args);
    }
    if let (Some(m), Some(n)) = (obj.get("m"), obj.get("n")) {
        return Ok(Input::Product {
            m: parse_usize(m)?,
            n: parse_usize(n)?,
        });
    }
    Err(CliError::usage(
        "input needs one of: cone, fan, polytope, family",
    ))
}

/// Reads an input file; returns its bytes (for the digest) and the input.
pub fn load(path: &Path) -> Result<(Vec<u8>, Input), CliError> {
    let bytes =
        std::fs::read(path).map_err(|e| CliError::usage(format!("{}: {e}", path.display())))?;
    let v: Value = serde_json::from_slice(&bytes)
        .map_err(|e| CliError::usage(format!("{}: invalid JSON: {e}", path.display())))?;
    let inner = if let Some(rows) = v.get("rows") {
        rows.get(0).and_then(|r| r.get("input")).ok_or_else(|| {
            CliError::usage(format!("{}: corpus file without rows", path.display()))
        })?
    } else if let Some(i) = v.get("input") {
        i
    } else {
        &v
    };
    Ok((bytes, parse_input(inner)?))
}
