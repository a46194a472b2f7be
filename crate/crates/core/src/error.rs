use thiserror::Error;

/// Errors produced by the kernel.
///
/// Resource-cap and invariant errors are kept distinct from input errors so
/// callers (the CLI in particular) can map them onto different exit codes.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("matrix is not square ({rows}x{cols})")]
    NotSquare { rows: usize, cols: usize },

    #[error("{0} is not a prime")]
    NotPrime(u64),

    #[error("zero vector has no primitive representative")]
    ZeroVector,

    #[error("cone is not pointed")]
    NotPointed,

    #[error("object is not full-dimensional in its lattice")]
    NotFullDimensional,

    #[error("cone is not simplicial")]
    NotSimplicial,

    #[error("point is not a vertex")]
    NotAVertex,

    #[error("point does not lie in the polyhedron")]
    NotInPolyhedron,

    #[error("region is unbounded")]
    Unbounded,

    #[error("matrix is not unimodular")]
    NotUnimodular,

    #[error("polytope is not smooth")]
    NotSmooth,

    #[error("fan is not G-stable")]
    NotGStable,

    #[error("vector lies outside the support of the fan")]
    OutsideSupport,

    #[error("fan is not a refinement of the given cone")]
    NotRefinement,

    #[error("invalid fan: {0}")]
    InvalidFan(String),

    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("resource cap exceeded for {what}: {requested} > {limit}")]
    ResourceCap {
        what: &'static str,
        limit: u128,
        requested: u128,
    },

    #[error("desingularization step cap of {0} reached")]
    StepCapExceeded(usize),

    #[error("desingularization introduced ray {0} outside the Hilbert union")]
    RayOutsideHilbertUnion(String),

    #[error("internal invariant violated: {0}")]
    Invariant(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

impl Error {
    pub(crate) fn cap(what: &'static str, limit: u128, requested: u128) -> Self {
        Error::ResourceCap {
            what,
            limit,
            requested,
        }
    }

    pub fn is_resource_cap(&self) -> bool {
        matches!(self, Error::ResourceCap { .. } | Error::StepCapExceeded(_))
    }

    pub fn is_invariant(&self) -> bool {
        matches!(self, Error::Invariant(_))
    }
}
