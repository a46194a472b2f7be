//! Exact cones and rational polyhedra.

mod cone;
mod dd;
mod lattice;
mod polyhedron;
mod triangulate;

pub use cone::Cone;
pub use dd::{double_description, DdOutput};
pub use lattice::AmbientLattice;
pub use polyhedron::{minkowski_polyhedron, FaceDescriptor, RationalPolyhedron, LATTICE_BOX_CAP};
pub use triangulate::{placing_triangulation, triangulate};

pub(crate) use cone::hyperplane_through;

/// The cone generated by `gens` in the standard lattice of dimension `dim`.
pub fn cone_from_generators(
    gens: impl IntoIterator<Item = crate::linalg::IntVector>,
    lattice: AmbientLattice,
) -> crate::Result<Cone> {
    Cone::new(lattice, gens)
}
