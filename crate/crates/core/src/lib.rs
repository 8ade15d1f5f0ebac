//! Exact closed and open genus-zero Gromov-Witten invariants for odd projective
//! spaces and quadric hypersurfaces with their real Lagrangian spheres, plus the
//! absolute and relative quantum cohomology rings they determine.
//!
//! Every value is an exact rational. Closed invariants are computed by axiom
//! normalization followed by WDVV reconstruction; open invariants by
//! normalization, wall-crossing, the open-closed relation, and the open WDVV
//! recursion on odd quadrics.

pub mod closed;
pub mod error;
pub mod geometry;
pub mod key;
pub mod linalg;
pub mod multiset;
pub mod open;
pub mod rational;
pub mod reduction;
pub mod rings;
pub mod store;

pub use closed::{ClosedEngine, EngineConfig};
pub use error::{Error, Result};
pub use geometry::{AbsClass, AbsCurve, Family, Geometry, RelClass, Space};
pub use key::{ClosedKey, CoreKey, Insertion, OpenKey};
pub use open::{OpenEngine, OwdvvKind, SignConvention};
pub use rational::Rational;
pub use store::{Provenance, Store};

/// Bumped whenever a change could alter a cached value.
pub const ENGINE_VERSION: &str = "relqh-1";
