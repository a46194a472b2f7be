use crate::error::{Error, Result};
use crate::linalg::{IntMatrix, IntVector};

/// A free abelian group of finite rank sitting inside `Z^ambient_dim`.
///
/// Cones and polytopes store their vectors in the coordinates of this basis,
/// so every regularity or Hilbert-basis question is answered relative to the
/// lattice and not to the coordinate lattice around it.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct AmbientLattice {
    /// `ambient_dim x rank`; columns are the basis vectors.
    basis: IntMatrix,
    standard: bool,
}

impl AmbientLattice {
    pub fn standard(dim: usize) -> Self {
        AmbientLattice {
            basis: IntMatrix::identity(dim),
            standard: true,
        }
    }

    /// Lattice spanned by the columns of `basis`, which must be independent.
    pub fn from_basis(basis: IntMatrix) -> Result<Self> {
        if basis.cols() == 0 || basis.rank() != basis.cols() {
            return Err(Error::InvalidInput(
                "lattice basis columns must be linearly independent".into(),
            ));
        }
        let standard = basis == IntMatrix::identity(basis.rows());
        Ok(AmbientLattice { basis, standard })
    }

    /// The lattice generated by `vectors`, with an HNF basis.
    pub fn generated_by(vectors: &[IntVector]) -> Result<Self> {
        let m = IntMatrix::from_rows(vectors)?;
        let (h, _) = m.hermite_normal_form();
        let rows: Vec<IntVector> = h
            .row_vectors()
            .into_iter()
            .filter(|r| !r.is_zero())
            .collect();
        if rows.is_empty() {
            return Err(Error::InvalidInput(
                "lattice generated by zero vectors".into(),
            ));
        }
        Self::from_basis(IntMatrix::from_columns(&rows)?)
    }

    pub fn ambient_dim(&self) -> usize {
        self.basis.rows()
    }

    pub fn rank(&self) -> usize {
        self.basis.cols()
    }

    pub fn basis(&self) -> &IntMatrix {
        &self.basis
    }

    pub fn is_standard(&self) -> bool {
        self.standard
    }

    /// Lattice coordinates of an ambient vector, or `None` if it is not a
    /// lattice vector.
    pub fn coordinates(&self, v: &IntVector) -> Option<IntVector> {
        if v.dim() != self.ambient_dim() {
            return None;
        }
        if self.standard {
            return Some(v.clone());
        }
        self.basis.solve_rational(v)?.to_int()
    }

    /// Ambient vector with the given lattice coordinates.
    pub fn embed(&self, coords: &IntVector) -> IntVector {
        if self.standard {
            return coords.clone();
        }
        self.basis
            .mul_vec(coords)
            .expect("coordinate length equals rank")
    }
}
