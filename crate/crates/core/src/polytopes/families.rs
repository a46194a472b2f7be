//! Generators for the polytope families used in the examples and the smooth
//! test corpus.

use itertools::Itertools;
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, Zero};

use super::{average, omega_cone, LatticePolytope};
use crate::error::{Error, Result};
use crate::linalg::{IntMatrix, IntVector};
use crate::polyhedra::{AmbientLattice, Cone, RationalPolyhedron};

fn iv(x: &[i64]) -> IntVector {
    IntVector::from(x)
}

/// `S_d = Conv(0, e_1, ..., e_d)`.
pub fn standard_simplex(d: usize) -> Result<LatticePolytope> {
    k_simplex(1, d)
}

/// `k · S_d`.
pub fn k_simplex(k: i64, d: usize) -> Result<LatticePolytope> {
    if d == 0 || k < 1 {
        return Err(Error::InvalidInput(format!(
            "k-simplex needs k >= 1, d >= 1 (got {k}, {d})"
        )));
    }
    let k = BigInt::from(k);
    let mut pts = vec![IntVector::zeros(d)];
    pts.extend((0..d).map(|i| IntVector::unit(d, i).scaled(&k)));
    LatticePolytope::new(&pts)
}

/// `[0, 1]^d`.
pub fn unit_cube(d: usize) -> Result<LatticePolytope> {
    if d == 0 || d > 8 {
        return Err(Error::InvalidInput(format!(
            "cube dimension {d} outside 1..=8"
        )));
    }
    let pts: Vec<IntVector> = (0..1u32 << d)
        .map(|mask| IntVector::new((0..d).map(|i| BigInt::from((mask >> i) & 1)).collect()))
        .collect();
    LatticePolytope::new(&pts)
}

/// `Conv((0,0), (n,0), (0,1))`.
pub fn triangle(n: i64) -> Result<LatticePolytope> {
    if n < 1 {
        return Err(Error::InvalidInput(format!(
            "triangle needs n >= 1 (got {n})"
        )));
    }
    LatticePolytope::new(&[iv(&[0, 0]), iv(&[n, 0]), iv(&[0, 1])])
}

pub fn rhombus() -> LatticePolytope {
    LatticePolytope::from_i64(&[&[1, 0], &[-1, 0], &[0, 1], &[0, -1]])
}

/// The smooth hexagon with seven lattice points.
pub fn hexagon() -> LatticePolytope {
    LatticePolytope::from_i64(&[&[1, 0], &[1, 1], &[0, 1], &[-1, 0], &[-1, -1], &[0, -1]])
}

pub fn minkowski_sum(p: &LatticePolytope, q: &LatticePolytope) -> Result<LatticePolytope> {
    let pts: Vec<IntVector> = p
        .vertices()
        .iter()
        .cartesian_product(q.vertices())
        .map(|(a, b)| a + b)
        .collect();
    LatticePolytope::new(&pts)
}

/// `P × Q`.
pub fn product(p: &LatticePolytope, q: &LatticePolytope) -> Result<LatticePolytope> {
    let pts: Vec<IntVector> = p
        .vertices()
        .iter()
        .cartesian_product(q.vertices())
        .map(|(a, b)| {
            let mut c = a.coords().to_vec();
            c.extend(b.coords().iter().cloned());
            IntVector::new(c)
        })
        .collect();
    LatticePolytope::new(&pts)
}

/// The point set `A = {(e_i, f_j)}` of `Δ_{m-1} × Δ_{n-1}`, the lattice
/// `ZA`, and `Cone(A)` written in `ZA` coordinates.
#[derive(Clone, Debug)]
pub struct ProductOfSimplices {
    pub m: usize,
    pub n: usize,
    pub points: Vec<IntVector>,
    pub lattice: AmbientLattice,
    /// `A` in lattice coordinates.
    pub coordinates: Vec<IntVector>,
    pub cone: Cone,
}

pub fn product_of_simplices(m: usize, n: usize) -> Result<ProductOfSimplices> {
    if m < 2 || n < 2 {
        return Err(Error::InvalidInput(format!(
            "product of simplices needs m, n >= 2 (got {m}, {n})"
        )));
    }
    if m * n > 20 {
        return Err(Error::cap(
            "m * n for products of simplices",
            20,
            (m * n) as u128,
        ));
    }
    let points: Vec<IntVector> = (0..m)
        .cartesian_product(0..n)
        .map(|(i, j)| &IntVector::unit(m + n, i) + &IntVector::unit(m + n, m + j))
        .collect();
    let lattice = AmbientLattice::generated_by(&points)?;
    let coordinates: Vec<IntVector> = points
        .iter()
        .map(|p| {
            lattice
                .coordinates(p)
                .expect("generators lie in the lattice they span")
        })
        .collect();
    let cone = Cone::from_generators(lattice.rank(), coordinates.iter().cloned())?;
    Ok(ProductOfSimplices {
        m,
        n,
        points,
        lattice,
        coordinates,
        cone,
    })
}

fn check_unimodular(p: &LatticePolytope, a: &IntMatrix, b: &IntVector) -> Result<()> {
    let d = p.ambient_dim();
    if a.rows() != d || a.cols() != d || b.dim() != d {
        return Err(Error::DimensionMismatch {
            expected: d,
            found: if a.rows() != d {
                a.rows()
            } else if a.cols() != d {
                a.cols()
            } else {
                b.dim()
            },
        });
    }
    if a.det()?.abs() != BigInt::from(1) {
        return Err(Error::NotUnimodular);
    }
    Ok(())
}

/// Image of `P` under `x ↦ Ax + b` with `|det A| = 1`.
pub fn apply_unimodular_map(
    p: &LatticePolytope,
    a: &IntMatrix,
    b: &IntVector,
) -> Result<LatticePolytope> {
    check_unimodular(p, a, b)?;
    let pts = p
        .vertices()
        .iter()
        .map(|v| Ok(&a.mul_vec(v)? + b))
        .collect::<Result<Vec<_>>>()?;
    LatticePolytope::new(&pts)
}

/// `ω_{T(P)}` equals the image of `ω_P` under `(x,0) ↦ (Ax,0)`,
/// `(0,1) ↦ (b,1)`.
pub fn omega_map_check(p: &LatticePolytope, a: &IntMatrix, b: &IntVector) -> Result<bool> {
    check_unimodular(p, a, b)?;
    let d = p.ambient_dim();
    let mut rows = Vec::with_capacity(d + 1);
    for i in 0..d {
        rows.push(a.row(i).lifted(b[i].clone()));
    }
    rows.push(IntVector::unit(d + 1, d));
    let block = IntMatrix::from_rows(&rows)?;
    let w = omega_cone(p);
    let image = w
        .generators()
        .iter()
        .map(|g| block.mul_vec(g))
        .collect::<Result<Vec<_>>>()?;
    let image = Cone::from_generators(d + 1, image)?;
    Ok(image == omega_cone(&apply_unimodular_map(p, a, b)?))
}

/// The `d!` simplices `T_π = {0 <= x_π(1) <= ... <= x_π(d) <= 1}` with the
/// checks that they triangulate `[0,1]^d` unimodularly.
#[derive(Clone, Debug)]
pub struct StaircaseTriangulation {
    /// Vertex lists, `0` first.
    pub simplices: Vec<Vec<IntVector>>,
    pub all_unimodular: bool,
    pub total_volume: BigRational,
    pub inside_cube: bool,
    /// No simplex contains the barycenter of another.
    pub interiors_disjoint: bool,
}

pub fn cube_staircase_triangulation(d: usize) -> Result<StaircaseTriangulation> {
    if !(2..=5).contains(&d) {
        return Err(Error::InvalidInput(format!(
            "staircase triangulation needs 2 <= d <= 5 (got {d})"
        )));
    }
    let simplices: Vec<Vec<IntVector>> = (0..d)
        .permutations(d)
        .map(|pi| {
            let mut verts = vec![IntVector::zeros(d)];
            let mut cur = IntVector::zeros(d);
            for &i in pi.iter().rev() {
                cur = &cur + &IntVector::unit(d, i);
                verts.push(cur.clone());
            }
            verts
        })
        .collect();
    let factorial: BigInt = (1..=d).map(BigInt::from).product();
    let mut all_unimodular = true;
    let mut total_volume = BigRational::zero();
    let cube = unit_cube(d)?;
    let mut inside_cube = true;
    let mut polys = Vec::with_capacity(simplices.len());
    for s in &simplices {
        let cols: Vec<IntVector> = s[1..].to_vec();
        let det = IntMatrix::from_columns(&cols)?.det()?.abs();
        all_unimodular &= det == BigInt::from(1);
        total_volume += BigRational::new(det, factorial.clone());
        inside_cube &= s.iter().all(|v| cube.contains(v));
        polys.push(RationalPolyhedron::polytope(d, s)?);
    }
    let mut interiors_disjoint = true;
    for (i, s) in simplices.iter().enumerate() {
        let c = average(s);
        for (j, p) in polys.iter().enumerate() {
            if i != j && p.contains(&c) {
                interiors_disjoint = false;
            }
        }
    }
    Ok(StaircaseTriangulation {
        simplices,
        all_unimodular,
        total_volume,
        inside_cube,
        interiors_disjoint,
    })
}

/// Curated smooth polytopes: cubes, dilated simplices, the hexagon,
/// zonotopes with pairwise unimodular directions, products, and
/// unimodular images of these.
pub fn smooth_corpus() -> Result<Vec<(String, LatticePolytope)>> {
    let seg = |v: &[i64]| LatticePolytope::new(&[IntVector::zeros(v.len()), iv(v)]);
    let zono = |gens: &[&[i64]]| -> Result<LatticePolytope> {
        let mut p = seg(gens[0])?;
        for g in &gens[1..] {
            p = minkowski_sum(&p, &seg(g)?)?;
        }
        Ok(p)
    };
    let shear = IntMatrix::from_i64_rows(&[&[1, 1], &[0, 1]])?;
    let skew = IntMatrix::from_i64_rows(&[&[2, 1], &[1, 1]])?;
    let mut out = vec![
        ("unit-square".to_string(), unit_cube(2)?),
        ("unit-cube".to_string(), unit_cube(3)?),
        ("simplex-2".to_string(), standard_simplex(2)?),
        ("2-simplex-2".to_string(), k_simplex(2, 2)?),
        ("3-simplex-2".to_string(), k_simplex(3, 2)?),
        ("simplex-3".to_string(), standard_simplex(3)?),
        ("2-simplex-3".to_string(), k_simplex(2, 3)?),
        ("hexagon".to_string(), hexagon()),
        ("rectangle-2x3".to_string(), zono(&[&[2, 0], &[0, 3]])?),
        (
            "zonotope-2-1-1".to_string(),
            zono(&[&[2, 0], &[0, 1], &[1, 1]])?,
        ),
        (
            "zonotope-1-1-1m".to_string(),
            zono(&[&[1, 0], &[0, 1], &[1, -1]])?,
        ),
        (
            "zonotope-1-2-3".to_string(),
            zono(&[&[1, 0], &[0, 2], &[3, 3]])?,
        ),
        (
            "prism-1x2s2".to_string(),
            product(&seg(&[1])?, &k_simplex(2, 2)?)?,
        ),
    ];
    out.push((
        "shear-square".to_string(),
        apply_unimodular_map(&unit_cube(2)?, &shear, &iv(&[0, 0]))?,
    ));
    out.push((
        "skew-hexagon".to_string(),
        apply_unimodular_map(&hexagon(), &skew, &iv(&[1, -1]))?,
    ));
    out.push((
        "shear-2-simplex-2".to_string(),
        apply_unimodular_map(&k_simplex(2, 2)?, &shear, &iv(&[3, 0]))?,
    ));
    Ok(out)
}

/// The smooth corpus, its dilations by 2 and 3, the 3-dimensional products
/// of corpus polygons with a segment, and a few larger simplices and cubes.
pub fn hunt_candidates() -> Result<Vec<(String, LatticePolytope)>> {
    let corpus = smooth_corpus()?;
    let mut out = corpus.clone();
    for (name, p) in &corpus {
        for k in [2, 3] {
            out.push((format!("{k}*{name}"), p.dilated(k)?));
        }
    }
    let seg = LatticePolytope::new(&[iv(&[0]), iv(&[2])])?;
    for (name, p) in corpus.iter().filter(|(_, p)| p.ambient_dim() == 2) {
        out.push((format!("{name}x2seg"), product(p, &seg)?));
    }
    for k in 1..=4 {
        out.push((format!("{k}-simplex-4"), k_simplex(k, 4)?));
    }
    out.push(("unit-cube-4".to_string(), unit_cube(4)?));
    Ok(out)
}
