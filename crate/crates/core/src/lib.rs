pub mod desing;
pub mod error;
pub mod fans;
pub mod gstable;
pub mod hilbert;
pub mod linalg;
pub mod nash;
pub mod polyhedra;
pub mod polytopes;

pub use error::{Error, Result};
pub use fans::Fan;
pub use linalg::{IntMatrix, IntVector, QVector};
pub use polyhedra::{AmbientLattice, Cone, FaceDescriptor, RationalPolyhedron};
