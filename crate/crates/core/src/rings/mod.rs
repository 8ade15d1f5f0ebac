//! Small absolute and relative quantum products, their presentations, and
//! the checks tying them together.

mod novikov;
mod presentation;
mod table;
mod verify;

pub use novikov::NovikovPoly;
pub use presentation::{ci_presentation, stated_presentations, Poly, RingPresentation, StatedPresentation, Variable};
pub use table::{relative_quantum_table, small_quantum_table, Element, StructureConstants};
pub use verify::{verify_associativity, verify_grading, verify_homomorphism, verify_presentation, verify_unit, Report};
