//! Behavior composition by supervisory control of discrete event systems.
//!
//! A composition problem (a target behavior to be realized by delegating its
//! requests to a set of available, possibly nondeterministic, behaviors) is
//! turned into a generator plant whose controllable events are delegations.
//! The supremal controllable sublanguage of the plant's marked language is
//! computed by [`supcon::supcon`], and the universal solution, the controller
//! generator, is read off the resulting supervisor by [`cg::extract_cg`].
//!
//! The same machinery handles constrained composition ([`constraints`]) and,
//! for deterministic systems, the supremal realizable target fragment
//! ([`srtf`]). [`ndsim`] implements the greatest ND-simulation as an
//! independent referee for the whole pipeline.

pub mod automata;
pub mod cg;
pub mod constraints;
pub mod fixtures;
pub mod io;
pub mod lts;
pub mod model;
pub mod ndsim;
pub mod plant;
pub mod srtf;
pub mod supcon;

pub use automata::{Event, EventKind, Generator, GeneratorBuilder, StateId, Word};
pub use cg::{CgKind, ControllerGenerator, RunState};
pub use model::{Action, Behavior, EnactedSystem, History, System, Target, TargetTrace};
pub use supcon::{supcon, SupervisorGenerator};
