use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::model::Action;

/// A target transition `⟨from, action, to⟩`, used as a request in the
/// maximal composition plant.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct TargetTransition {
    pub from: String,
    pub action: Action,
    pub to: String,
}

impl TargetTransition {
    pub fn new(from: impl Into<String>, action: impl Into<Action>, to: impl Into<String>) -> Self {
        TargetTransition {
            from: from.into(),
            action: action.into(),
            to: to.into(),
        }
    }
}

impl fmt::Display for TargetTransition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{},{},{}", self.from, self.action, self.to)
    }
}

/// What a plant event stands for.
///
/// Behavior indexes are 1-based, as delegation targets are.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum EventKind {
    /// A target action request.
    Request(Action),
    /// Delegation of the pending request to behavior `j`.
    Delegate(usize),
    /// Behavior `behavior` evolved into its local state `state`.
    Evolve { behavior: usize, state: String },
    /// A requested target transition (maximal plant only).
    TransReq(TargetTransition),
    /// An opaque integer event, as found in TCT files.
    Raw(u32),
}

impl EventKind {
    /// The controllability this kind carries in the constructions of this
    /// crate: delegations and transition requests are controllable, action
    /// requests and evolutions are not, raw events follow TCT parity (odd
    /// codes are controllable).
    pub fn default_controllable(&self) -> bool {
        match self {
            EventKind::Request(_) | EventKind::Evolve { .. } => false,
            EventKind::Delegate(_) | EventKind::TransReq(_) => true,
            EventKind::Raw(code) => code % 2 == 1,
        }
    }
}

/// A generator event: a tagged kind plus its controllability flag.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Event {
    kind: EventKind,
    controllable: bool,
}

impl Event {
    pub fn new(kind: EventKind) -> Self {
        let controllable = kind.default_controllable();
        Event { kind, controllable }
    }

    /// An event whose controllability differs from the default of its kind.
    pub fn with_controllability(kind: EventKind, controllable: bool) -> Self {
        Event { kind, controllable }
    }

    pub fn request(action: impl Into<Action>) -> Self {
        Event::new(EventKind::Request(action.into()))
    }

    pub fn delegate(index: usize) -> Self {
        Event::new(EventKind::Delegate(index))
    }

    pub fn evolve(behavior: usize, state: impl Into<String>) -> Self {
        Event::new(EventKind::Evolve {
            behavior,
            state: state.into(),
        })
    }

    pub fn trans_req(transition: TargetTransition) -> Self {
        Event::new(EventKind::TransReq(transition))
    }

    pub fn raw(code: u32) -> Self {
        Event::new(EventKind::Raw(code))
    }

    pub fn kind(&self) -> &EventKind {
        &self.kind
    }

    pub fn is_controllable(&self) -> bool {
        self.controllable
    }
}

impl From<EventKind> for Event {
    fn from(kind: EventKind) -> Self {
        Event::new(kind)
    }
}

impl fmt::Display for Event {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.kind {
            EventKind::Request(a) => write!(f, "req({a})")?,
            EventKind::Delegate(j) => write!(f, "del({j})")?,
            EventKind::Evolve { behavior, state } => write!(f, "evo({behavior},{state})")?,
            EventKind::TransReq(t) => write!(f, "treq({t})")?,
            EventKind::Raw(code) => write!(f, "raw({code})")?,
        }
        if self.controllable != self.kind.default_controllable() {
            f.write_str(if self.controllable { "/c" } else { "/u" })?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("malformed event `{text}`: {reason}")]
pub struct EventParseError {
    pub text: String,
    pub reason: &'static str,
}

impl FromStr for Event {
    type Err = EventParseError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let err = |reason| EventParseError {
            text: s.to_string(),
            reason,
        };
        let trimmed = s.trim();
        let (body, flag) = match trimmed.rsplit_once('/') {
            Some((body, "c")) => (body, Some(true)),
            Some((body, "u")) => (body, Some(false)),
            Some(_) => return Err(err("unknown controllability suffix")),
            None => (trimmed, None),
        };
        let open = body.find('(').ok_or_else(|| err("expected `kind(args)`"))?;
        if !body.ends_with(')') {
            return Err(err("missing closing parenthesis"));
        }
        let tag = &body[..open];
        let args: Vec<&str> = body[open + 1..body.len() - 1].split(',').map(str::trim).collect();
        let name = |s: &str| -> Result<String, EventParseError> {
            if crate::model::is_valid_name(s) {
                Ok(s.to_string())
            } else {
                Err(err("invalid name"))
            }
        };
        let index = |s: &str| -> Result<usize, EventParseError> {
            match s.parse::<usize>() {
                Ok(j) if j >= 1 => Ok(j),
                _ => Err(err("behavior index must be a positive integer")),
            }
        };
        let kind = match (tag, args.as_slice()) {
            ("req", [a]) => EventKind::Request(Action::new(name(a)?)),
            ("del", [j]) => EventKind::Delegate(index(j)?),
            ("evo", [j, st]) => EventKind::Evolve {
                behavior: index(j)?,
                state: name(st)?,
            },
            ("treq", [from, a, to]) => {
                EventKind::TransReq(TargetTransition::new(name(from)?, Action::new(name(a)?), name(to)?))
            }
            ("raw", [code]) => EventKind::Raw(code.parse().map_err(|_| err("raw code must be an integer"))?),
            _ => return Err(err("unknown event kind or wrong arity")),
        };
        Ok(match flag {
            Some(c) => Event::with_controllability(kind, c),
            None => Event::new(kind),
        })
    }
}

impl Serialize for Event {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Event {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let text = String::deserialize(deserializer)?;
        text.parse().map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn default_controllability_follows_kind() {
        assert!(!Event::request("dig").is_controllable());
        assert!(Event::delegate(2).is_controllable());
        assert!(!Event::evolve(3, "c0").is_controllable());
        assert!(Event::trans_req(TargetTransition::new("t0", "dig", "t0")).is_controllable());
        assert!(!Event::raw(0).is_controllable());
        assert!(Event::raw(9).is_controllable());
    }

    #[test]
    fn text_form_round_trips() {
        let events = [
            Event::request("GoMine"),
            Event::delegate(3),
            Event::evolve(1, "a3"),
            Event::trans_req(TargetTransition::new("t1", "load", "t2")),
            Event::raw(7),
            Event::with_controllability(EventKind::Request(Action::new("x")), true),
        ];
        for e in events {
            let text = e.to_string();
            assert_eq!(text.parse::<Event>().unwrap(), e, "{text}");
        }
        assert_eq!(Event::evolve(3, "c0").to_string(), "evo(3,c0)");
    }

    #[test]
    fn rejects_garbage() {
        for bad in ["", "req", "req(a", "del(0)", "del(x)", "foo(1)", "evo(1)", "req(a b)", "raw(1)/x"] {
            assert!(bad.parse::<Event>().is_err(), "{bad}");
        }
    }
}
