pub mod ansatz;
pub mod catalog;
pub mod cli;
pub mod equivalence;
pub mod jets;
pub mod numsolve;
pub mod region;
pub mod verify;

pub use jets::{EvalError, Jet3, Point, ScalarField};
pub use region::Region;
