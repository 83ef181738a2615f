//! JSON problem files: available behaviors, a target, an optional
//! constraint recognizer over plant events, and the pipeline to run.

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use crate::automata::{Event, GeneratorBuilder};
use crate::constraints::{ConstraintError, ConstraintSpec};
use crate::model::{Behavior, ModelError, System, Target};

pub const PROBLEM_FORMAT: &str = "descomp-problem";
pub const PROBLEM_VERSION: u32 = 1;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    #[default]
    Compose,
    Constrained,
    Srtf,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BehaviorSpec {
    pub name: String,
    pub states: Vec<String>,
    pub initial: String,
    /// `[from, action, to]`.
    pub transitions: Vec<[String; 3]>,
}

impl BehaviorSpec {
    pub fn from_behavior(b: &Behavior) -> Self {
        BehaviorSpec {
            name: b.name().to_string(),
            states: b.state_names().to_vec(),
            initial: b.state_name(b.initial()).to_string(),
            transitions: b
                .transitions()
                .map(|(s, a, t)| [b.state_name(s).to_string(), a.to_string(), b.state_name(t).to_string()])
                .collect(),
        }
    }

    pub fn to_behavior(&self) -> Result<Behavior, ModelError> {
        Behavior::new(
            self.name.clone(),
            self.states.iter().map(String::as_str),
            &self.initial,
            self.transitions.iter().map(|[s, a, t]| (s.as_str(), a.as_str(), t.as_str())),
        )
    }
}

/// A constraint recognizer. Transitions are `[from, event, to]` with events
/// in their text form, e.g. `del(3)` or `evo(3,c1)`. All states are marked
/// unless `marked` says otherwise.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConstraintFile {
    #[serde(default)]
    pub description: String,
    pub states: Vec<String>,
    pub initial: String,
    pub transitions: Vec<[String; 3]>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub marked: Option<Vec<String>>,
}

impl ConstraintFile {
    pub fn to_spec(&self) -> Result<ConstraintSpec, ProblemError> {
        let index: BTreeMap<&str, usize> = self.states.iter().enumerate().map(|(i, s)| (s.as_str(), i)).collect();
        if index.len() != self.states.len() {
            return Err(ProblemError::Invalid("constraint has duplicate state names".into()));
        }
        let state = |s: &str| {
            index
                .get(s)
                .copied()
                .ok_or_else(|| ProblemError::Invalid(format!("constraint state `{s}` is not declared")))
        };
        let marked: BTreeSet<usize> = match &self.marked {
            None => (0..self.states.len()).collect(),
            Some(m) => m.iter().map(|s| state(s)).collect::<Result<_, _>>()?,
        };
        let mut b = GeneratorBuilder::new();
        b.add_states(self.states.len(), |s| marked.contains(&s));
        for [s, e, t] in &self.transitions {
            let event: Event = e
                .parse()
                .map_err(|err| ProblemError::Invalid(format!("constraint transition {s} {e} {t}: {err}")))?;
            b.add_transition(state(s)?, event, state(t)?)
                .map_err(|err| ProblemError::Invalid(format!("constraint: {err}")))?;
        }
        let g = b
            .build(state(&self.initial)?)
            .map_err(|err| ProblemError::Invalid(format!("constraint: {err}")))?;
        Ok(ConstraintSpec::new(g, self.description.clone())?)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ProblemFile {
    pub format: String,
    pub version: u32,
    #[serde(default)]
    pub mode: Mode,
    pub behaviors: Vec<BehaviorSpec>,
    pub target: BehaviorSpec,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub constraint: Option<ConstraintFile>,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ProblemError {
    #[error("malformed problem file: {0}")]
    Syntax(String),
    #[error("expected format `{PROBLEM_FORMAT}` version {PROBLEM_VERSION}, found `{format}` version {version}")]
    Format { format: String, version: u32 },
    #[error("behavior `{behavior}`: {source}")]
    Model { behavior: String, source: ModelError },
    #[error("{0}")]
    Invalid(String),
    #[error(transparent)]
    Constraint(#[from] ConstraintError),
}

/// A validated problem, ready for the pipelines.
#[derive(Clone, Debug)]
pub struct Problem {
    pub mode: Mode,
    pub system: System,
    pub target: Target,
    pub constraint: Option<ConstraintSpec>,
    /// Non-fatal findings, e.g. target actions no behavior performs.
    pub warnings: Vec<String>,
}

impl ProblemFile {
    pub fn new(mode: Mode, system: &System, target: &Target, constraint: Option<ConstraintFile>) -> Self {
        ProblemFile {
            format: PROBLEM_FORMAT.into(),
            version: PROBLEM_VERSION,
            mode,
            behaviors: system.behaviors().iter().map(BehaviorSpec::from_behavior).collect(),
            target: BehaviorSpec::from_behavior(target.behavior()),
            constraint,
        }
    }

    pub fn validate(&self) -> Result<Problem, ProblemError> {
        let model = |spec: &BehaviorSpec| {
            spec.to_behavior().map_err(|source| ProblemError::Model {
                behavior: spec.name.clone(),
                source,
            })
        };
        let behaviors = self.behaviors.iter().map(model).collect::<Result<Vec<_>, _>>()?;
        let system = System::new(behaviors).map_err(|source| ProblemError::Model {
            behavior: "system".into(),
            source,
        })?;
        let tb = model(&self.target)?;
        let target = if tb.is_deterministic() {
            Target::new(tb).expect("deterministic")
        } else {
            Target::nondeterministic(tb)
        };
        let available = system.actions();
        let warnings = target
            .behavior()
            .actions()
            .into_iter()
            .filter(|a| !available.contains(a))
            .map(|a| format!("target action `{a}` is not performed by any behavior"))
            .collect();
        let constraint = self.constraint.as_ref().map(ConstraintFile::to_spec).transpose()?;
        if self.mode == Mode::Constrained && constraint.is_none() {
            return Err(ProblemError::Invalid("constrained mode needs a `constraint` section".into()));
        }
        Ok(Problem {
            mode: self.mode,
            system,
            target,
            constraint,
            warnings,
        })
    }
}

pub fn parse_problem(text: &str) -> Result<ProblemFile, ProblemError> {
    let p: ProblemFile = serde_json::from_str(text).map_err(|e| ProblemError::Syntax(e.to_string()))?;
    if p.format != PROBLEM_FORMAT || p.version != PROBLEM_VERSION {
        return Err(ProblemError::Format {
            format: p.format,
            version: p.version,
        });
    }
    Ok(p)
}

pub fn serialize_problem(p: &ProblemFile) -> String {
    let mut s = serde_json::to_string_pretty(p).expect("problem files serialize");
    s.push('\n');
    s
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    #[test]
    fn mining_file_matches_the_builtin_instance() {
        let p = parse_problem(fixtures::MINING_PROBLEM).unwrap().validate().unwrap();
        let (sys, target) = fixtures::mining();
        assert_eq!(p.system.len(), 3);
        assert_eq!(p.target.behavior().state_count(), 5);
        assert_eq!(p.system, sys);
        assert_eq!(p.target, target);
        assert!(p.warnings.is_empty());
        assert_eq!(p.mode, Mode::Compose);
    }

    #[test]
    fn constrained_file_carries_the_constraint() {
        let p = parse_problem(fixtures::MINING_CONSTRAINED_PROBLEM).unwrap().validate().unwrap();
        assert_eq!(p.mode, Mode::Constrained);
        let c = p.constraint.unwrap();
        assert_eq!(c.recognizer(), fixtures::excavator_repair_constraint().recognizer());
    }

    #[test]
    fn deterministic_file_is_srtf_mode() {
        let p = parse_problem(fixtures::MINING_DETERMINISTIC_PROBLEM).unwrap().validate().unwrap();
        assert_eq!(p.mode, Mode::Srtf);
        assert_eq!((p.system, p.target), fixtures::deterministic_mining());
    }

    #[test]
    fn duplicate_behavior_names_are_rejected() {
        let (sys, target) = fixtures::mining();
        let mut f = ProblemFile::new(Mode::Compose, &sys, &target, None);
        f.behaviors[1].name = f.behaviors[0].name.clone();
        assert!(matches!(f.validate(), Err(ProblemError::Model { .. })));
    }

    #[test]
    fn unknown_target_action_is_a_warning() {
        let (sys, _) = fixtures::mining();
        let t = Target::new(Behavior::new("t", ["s"], "s", [("s", "fly", "s")]).unwrap()).unwrap();
        let p = ProblemFile::new(Mode::Compose, &sys, &t, None).validate().unwrap();
        assert_eq!(p.warnings.len(), 1);
        assert!(p.warnings[0].contains("fly"));
    }

    #[test]
    fn wrong_format_is_rejected() {
        let text = fixtures::MINING_PROBLEM.replace(PROBLEM_FORMAT, "other");
        assert!(matches!(parse_problem(&text), Err(ProblemError::Format { .. })));
        assert!(matches!(parse_problem("{"), Err(ProblemError::Syntax(_))));
    }

    #[test]
    fn validation_names_the_behavior() {
        let (sys, target) = fixtures::mining();
        let mut f = ProblemFile::new(Mode::Compose, &sys, &target, None);
        f.behaviors[2].transitions.push(["c0".into(), "dig".into(), "c9".into()]);
        let err = f.validate().unwrap_err().to_string();
        assert!(err.contains("excavator"), "{err}");
    }
}
