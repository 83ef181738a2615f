//! Interchange formats: TCT ADS text with symbol tables, JSON problem files
//! and artifacts, and Graphviz DOT export.

mod ads;
mod artifact;
mod dot;
mod problem;

pub use ads::{read_ads, write_ads, AdsDocument, AdsError, EncodeError, SymbolTable};
pub use artifact::{read_cg, read_fragment, write_cg, write_fragment, ArtifactError};
pub use dot::{cg_to_dot, fragment_to_dot, generator_to_dot};
pub use problem::{parse_problem, serialize_problem, BehaviorSpec, ConstraintFile, Mode, Problem, ProblemError, ProblemFile};
