//! Exact rectangle decomposition of finite two-parameter persistence
//! modules over prime fields.

pub mod bimodule;
pub mod decomposer;
pub mod exactfield;
pub mod filtration;
pub mod gallery;
pub mod report;
pub mod shapes;
pub mod suites;

pub use bimodule::{GridModule, GridPoint, GridShape, Square};
pub use decomposer::{Decomposition, ExactnessWitness, LocalClass, Morphism};
pub use exactfield::{FieldSpec, Matrix, Subspace};
pub use filtration::{FiltSpaces, Skeleton, SubmoduleFamily};
pub use report::Report;
pub use shapes::{Cut, IntervalShape, RectangleShape};
