//! Deterministic generators and the language-level operations synthesis is
//! built from.

mod event;
mod generator;
mod ops;

pub use event::{Event, EventKind, EventParseError, TargetTransition};
pub use generator::{Annotation, Generator, GeneratorBuilder, StateId};
pub use ops::{coreachable, is_controllable, language_equivalent, reachable, sync_product, trim, ControllabilityReport};

/// A finite sequence of events.
pub type Word = Vec<Event>;

/// Renders a word as space-separated events.
pub fn format_word(word: &[Event]) -> String {
    let parts: Vec<String> = word.iter().map(ToString::to_string).collect();
    if parts.is_empty() {
        "ε".to_string()
    } else {
        parts.join(" ")
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum AutomataError {
    #[error("state {state} does not exist (generator has {count} states)")]
    UnknownState { state: StateId, count: usize },
    #[error("state {state} already has a transition on {event} (to {existing}); refusing second successor {new}")]
    Nondeterministic {
        state: StateId,
        event: Event,
        existing: StateId,
        new: StateId,
    },
    #[error("event {first} and {second} share a kind but disagree on controllability")]
    AlphabetMismatch { first: Event, second: Event },
    #[error("candidate is not a sublanguage of the plant: `{}` diverges", format_word(.word))]
    NotSublanguage { word: Word },
}

/// Shared kinds must agree on the controllability flag. `events` is sorted,
/// so equal kinds are adjacent.
pub(crate) fn check_alphabet(events: &[Event]) -> Result<(), AutomataError> {
    for pair in events.windows(2) {
        if pair[0].kind() == pair[1].kind() {
            return Err(AutomataError::AlphabetMismatch {
                first: pair[0].clone(),
                second: pair[1].clone(),
            });
        }
    }
    Ok(())
}
