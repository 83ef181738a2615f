//! Composition under prefix-closed constraints over plant events.

use crate::automata::{AutomataError, Event, Generator, GeneratorBuilder};
use crate::cg::{extract_memory_cg, CgError, ControllerGenerator};
use crate::model::{System, Target};
use crate::plant::{build_composition_plant, PlantError};
use crate::supcon::{supcon, SupconError};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ConstraintError {
    #[error("constraint state {0} is unmarked; constraint languages must be prefix-closed")]
    NotPrefixClosed(usize),
    #[error("constraint mentions `{0}`, which is not a plant event")]
    UnknownEvent(Event),
    #[error(transparent)]
    Automata(#[from] AutomataError),
    #[error(transparent)]
    Plant(#[from] PlantError),
    #[error(transparent)]
    Supcon(#[from] SupconError),
    #[error(transparent)]
    Cg(#[from] CgError),
}

/// A constraint language given by a recognizer whose states are all marked.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConstraintSpec {
    recognizer: Generator,
    description: String,
}

impl ConstraintSpec {
    pub fn new(recognizer: Generator, description: impl Into<String>) -> Result<Self, ConstraintError> {
        if let Some(s) = recognizer.states().find(|&s| !recognizer.is_marked(s)) {
            return Err(ConstraintError::NotPrefixClosed(s));
        }
        Ok(ConstraintSpec {
            recognizer,
            description: description.into(),
        })
    }

    /// The constraint that allows everything.
    pub fn universal() -> Self {
        ConstraintSpec {
            recognizer: {
                let mut b = Generator::builder();
                b.add_state(true);
                b.build(0).expect("one state")
            },
            description: "no constraint".into(),
        }
    }

    pub fn recognizer(&self) -> &Generator {
        &self.recognizer
    }

    pub fn description(&self) -> &str {
        &self.description
    }
}

/// The specification recognizer for `K_C` over the plant alphabet: the
/// constraint's own events as given, every other plant event self-looped.
pub fn compile_constraint(c: &ConstraintSpec, plant: &Generator) -> Result<Generator, ConstraintError> {
    let r = &c.recognizer;
    if let Some(e) = r.alphabet().iter().find(|e| plant.event_index(e).is_none()) {
        return Err(ConstraintError::UnknownEvent(e.clone()));
    }
    let free: Vec<&Event> = plant.alphabet().iter().filter(|e| r.event_index(e).is_none()).collect();
    let mut b = GeneratorBuilder::new();
    b.extend_alphabet(plant.alphabet().iter().cloned());
    for s in r.states() {
        b.add_annotated_state(true, r.annotation(s).cloned());
    }
    for (s, e, t) in r.all_transitions() {
        b.add_transition(s, e.clone(), t)?;
    }
    for s in r.states() {
        for e in &free {
            b.add_transition(s, (*e).clone(), s)?;
        }
    }
    Ok(b.build(r.initial())?)
}

/// Plant, compiled constraint, supervisor and memory controller generator.
pub fn synthesize_constrained(system: &System, target: &Target, c: &ConstraintSpec) -> Result<ControllerGenerator, ConstraintError> {
    let plant = build_composition_plant(system, target)?;
    let spec = compile_constraint(c, &plant)?;
    let r = supcon(&plant, &spec)?;
    Ok(extract_memory_cg(&r)?)
}
