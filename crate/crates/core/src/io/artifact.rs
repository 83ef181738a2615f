//! Controller generator and target fragment artifacts as versioned JSON.

use serde::{Deserialize, Serialize};

use crate::automata::StateId;
use crate::cg::ControllerGenerator;
use crate::io::problem::BehaviorSpec;
use crate::model::Target;
use crate::srtf::{FragmentEdge, TargetFragment};

pub const CG_FORMAT: &str = "descomp-cg";
pub const CG_VERSION: u32 = 1;
pub const FRAGMENT_FORMAT: &str = "descomp-srtf";
pub const FRAGMENT_VERSION: u32 = 1;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ArtifactError {
    #[error("malformed controller generator artifact: {0}")]
    Syntax(String),
    #[error("expected format `{expected}` version 1, found `{format}` version {version}")]
    Format {
        expected: &'static str,
        format: String,
        version: u32,
    },
    #[error("invalid target fragment: {0}")]
    Fragment(String),
}

#[derive(Serialize, Deserialize)]
struct CgFile {
    format: String,
    version: u32,
    #[serde(flatten)]
    cg: ControllerGenerator,
}

pub fn write_cg(cg: &ControllerGenerator) -> String {
    let file = CgFile {
        format: CG_FORMAT.into(),
        version: CG_VERSION,
        cg: cg.clone(),
    };
    let mut s = serde_json::to_string_pretty(&file).expect("controller generators serialize");
    s.push('\n');
    s
}

pub fn read_cg(text: &str) -> Result<ControllerGenerator, ArtifactError> {
    let file: CgFile = serde_json::from_str(text).map_err(|e| ArtifactError::Syntax(e.to_string()))?;
    if file.format != CG_FORMAT || file.version != CG_VERSION {
        return Err(ArtifactError::Format {
            expected: CG_FORMAT,
            format: file.format,
            version: file.version,
        });
    }
    Ok(file.cg)
}

#[derive(Serialize, Deserialize)]
struct FragmentFile {
    format: String,
    version: u32,
    target: BehaviorSpec,
    origin: Vec<StateId>,
    edges: Vec<FragmentEdge>,
}

pub fn write_fragment(f: &TargetFragment) -> String {
    let file = FragmentFile {
        format: FRAGMENT_FORMAT.into(),
        version: FRAGMENT_VERSION,
        target: BehaviorSpec::from_behavior(f.target.behavior()),
        origin: f.origin.clone(),
        edges: f.edges.clone(),
    };
    let mut s = serde_json::to_string_pretty(&file).expect("fragments serialize");
    s.push('\n');
    s
}

pub fn read_fragment(text: &str) -> Result<TargetFragment, ArtifactError> {
    let file: FragmentFile = serde_json::from_str(text).map_err(|e| ArtifactError::Syntax(e.to_string()))?;
    if file.format != FRAGMENT_FORMAT || file.version != FRAGMENT_VERSION {
        return Err(ArtifactError::Format {
            expected: FRAGMENT_FORMAT,
            format: file.format,
            version: file.version,
        });
    }
    let behavior = file.target.to_behavior().map_err(|e| ArtifactError::Fragment(e.to_string()))?;
    let n = behavior.state_count();
    if file.origin.len() != n || file.edges.iter().any(|e| e.from >= n || e.to >= n) {
        return Err(ArtifactError::Fragment("edge or origin refers to a missing state".into()));
    }
    Ok(TargetFragment {
        target: Target::nondeterministic(behavior),
        origin: file.origin,
        edges: file.edges,
    })
}
