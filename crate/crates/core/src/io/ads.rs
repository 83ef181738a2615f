//! TCT ADS text: a title line, `State size:`, `Marker states:`,
//! `Vocal states:` and `Transitions:` sections, with events as integers.
//!
//! Odd integers are controllable, even ones uncontrollable, which is how TCT
//! itself reads them. The initial state is always 0. Transitions are written
//! sorted by source state, then event code.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::automata::{AutomataError, Event, EventKind, Generator, GeneratorBuilder, StateId};

const SYMBOLS_FORMAT: &str = "descomp-symbols";
const SYMBOLS_VERSION: u32 = 1;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum EncodeError {
    #[error("event {event} is {} but code {code} is {}", kind(.event.is_controllable()), kind(.code % 2 == 1))]
    Parity { event: Event, code: u32 },
    #[error("event {0} has no code in the symbol table")]
    Unmapped(Event),
    #[error("code {0} is assigned twice")]
    DuplicateCode(u32),
    #[error("event {0} is assigned two codes")]
    DuplicateEvent(Event),
}

fn kind(controllable: bool) -> &'static str {
    if controllable {
        "controllable"
    } else {
        "uncontrollable"
    }
}

/// A bidirectional map between events and TCT integer codes, with optional
/// human labels.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct SymbolTable {
    by_code: BTreeMap<u32, Event>,
    by_event: BTreeMap<Event, u32>,
    labels: BTreeMap<u32, String>,
}

#[derive(Serialize, Deserialize)]
struct SymbolsJson {
    format: String,
    version: u32,
    symbols: Vec<SymbolJson>,
}

#[derive(Serialize, Deserialize)]
struct SymbolJson {
    code: u32,
    event: Event,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    label: Option<String>,
}

impl SymbolTable {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn insert(&mut self, code: u32, event: Event) -> Result<(), EncodeError> {
        if (code % 2 == 1) != event.is_controllable() {
            return Err(EncodeError::Parity { event, code });
        }
        if self.by_code.contains_key(&code) {
            return Err(EncodeError::DuplicateCode(code));
        }
        if self.by_event.contains_key(&event) {
            return Err(EncodeError::DuplicateEvent(event));
        }
        self.by_code.insert(code, event.clone());
        self.by_event.insert(event, code);
        Ok(())
    }

    pub fn set_label(&mut self, code: u32, label: impl Into<String>) {
        self.labels.insert(code, label.into());
    }

    pub fn label(&self, code: u32) -> Option<&str> {
        self.labels.get(&code).map(String::as_str)
    }

    pub fn code(&self, event: &Event) -> Result<u32, EncodeError> {
        self.by_event.get(event).copied().ok_or_else(|| EncodeError::Unmapped(event.clone()))
    }

    pub fn event(&self, code: u32) -> Option<&Event> {
        self.by_code.get(&code)
    }

    pub fn len(&self) -> usize {
        self.by_code.len()
    }

    pub fn is_empty(&self) -> bool {
        self.by_code.is_empty()
    }

    pub fn entries(&self) -> impl Iterator<Item = (u32, &Event)> + '_ {
        self.by_code.iter().map(|(c, e)| (*c, e))
    }

    /// Codes for `events` in their given order: controllable ones get the
    /// odd integers 1, 3, 5, …, uncontrollable ones 0, 2, 4, …. Raw events
    /// keep their own code. Events already present are left alone.
    pub fn assign<'a>(&mut self, events: impl IntoIterator<Item = &'a Event>) -> Result<(), EncodeError> {
        for e in events {
            if self.by_event.contains_key(e) {
                continue;
            }
            let code = match e.kind() {
                EventKind::Raw(c) => *c,
                _ => {
                    let mut c = if e.is_controllable() { 1 } else { 0 };
                    while self.by_code.contains_key(&c) {
                        c += 2;
                    }
                    c
                }
            };
            self.insert(code, e.clone())?;
        }
        Ok(())
    }

    /// A fresh table covering the alphabet of `g`.
    pub fn for_generator(g: &Generator) -> Result<Self, EncodeError> {
        let mut t = SymbolTable::new();
        t.assign(g.alphabet())?;
        Ok(t)
    }

    pub fn to_json(&self) -> String {
        let doc = SymbolsJson {
            format: SYMBOLS_FORMAT.into(),
            version: SYMBOLS_VERSION,
            symbols: self
                .by_code
                .iter()
                .map(|(c, e)| SymbolJson {
                    code: *c,
                    event: e.clone(),
                    label: self.labels.get(c).cloned(),
                })
                .collect(),
        };
        let mut s = serde_json::to_string_pretty(&doc).expect("symbol tables serialize");
        s.push('\n');
        s
    }

    pub fn from_json(text: &str) -> Result<Self, AdsError> {
        let doc: SymbolsJson = serde_json::from_str(text).map_err(|e| AdsError::Json(e.to_string()))?;
        if doc.format != SYMBOLS_FORMAT || doc.version != SYMBOLS_VERSION {
            return Err(AdsError::Json(format!(
                "expected format `{SYMBOLS_FORMAT}` version {SYMBOLS_VERSION}, found `{}` version {}",
                doc.format, doc.version
            )));
        }
        let mut t = SymbolTable::new();
        for s in doc.symbols {
            t.insert(s.code, s.event)?;
            if let Some(l) = s.label {
                t.set_label(s.code, l);
            }
        }
        Ok(t)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum AdsError {
    #[error("line {line}: expected `{expected}`")]
    MissingHeader { line: usize, expected: &'static str },
    #[error("line {line}: `{text}` is not a number")]
    BadNumber { line: usize, text: String },
    #[error("line {line}: a transition is `from event to`")]
    BadTransition { line: usize },
    #[error("line {line}: state {state} is outside 0..{size}")]
    StateOutOfRange { line: usize, state: usize, size: usize },
    #[error("line {line}: code {code} is not in the symbol table")]
    UnknownCode { line: usize, code: u32 },
    #[error("line {line}: {source}")]
    Automata { line: usize, source: AutomataError },
    #[error("a generator needs at least one state")]
    NoStates,
    #[error(transparent)]
    Encode(#[from] EncodeError),
    #[error("symbol table: {0}")]
    Json(String),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AdsDocument {
    pub title: String,
    pub generator: Generator,
}

struct Lines<'a> {
    inner: std::iter::Peekable<std::iter::Enumerate<std::str::Lines<'a>>>,
}

impl<'a> Lines<'a> {
    fn next_nonblank(&mut self) -> Option<(usize, &'a str)> {
        self.inner.by_ref().map(|(i, l)| (i + 1, l.trim())).find(|(_, l)| !l.is_empty())
    }

    fn header(&mut self, expected: &'static str, last_line: usize) -> Result<(usize, &'a str), AdsError> {
        match self.next_nonblank() {
            Some((n, l)) if l.starts_with(expected) => Ok((n, l[expected.len()..].trim())),
            Some((n, _)) => Err(AdsError::MissingHeader { line: n, expected }),
            None => Err(AdsError::MissingHeader {
                line: last_line + 1,
                expected,
            }),
        }
    }

    /// Numbers after a header, possibly continued on following lines, up to
    /// the next header.
    fn list(&mut self, first: (usize, &str), next_header: &str) -> Result<Vec<(usize, usize)>, AdsError> {
        let mut out = Vec::new();
        let mut push = |n: usize, l: &str| -> Result<(), AdsError> {
            for w in l.split_whitespace() {
                out.push((n, number(n, w)?));
            }
            Ok(())
        };
        push(first.0, first.1)?;
        while let Some((_, l)) = self.inner.peek() {
            if l.trim().starts_with(next_header) {
                break;
            }
            let (i, l) = self.inner.next().expect("peeked");
            push(i + 1, l)?;
        }
        Ok(out)
    }
}

fn number(line: usize, w: &str) -> Result<usize, AdsError> {
    w.parse().map_err(|_| AdsError::BadNumber { line, text: w.to_string() })
}

/// Parses ADS text. With a table, codes are mapped through it; without
/// one, codes become raw events whose controllability follows the parity.
/// The alphabet is the set of events used by transitions. Vocal states are
/// read and ignored.
pub fn read_ads(text: &str, table: Option<&SymbolTable>) -> Result<AdsDocument, AdsError> {
    let total = text.lines().count();
    let mut lines = Lines {
        inner: text.lines().enumerate().peekable(),
    };
    let (_, title) = lines.next_nonblank().ok_or(AdsError::MissingHeader {
        line: 1,
        expected: "<title>",
    })?;
    let (n, size) = lines.header("State size:", total)?;
    let size = number(n, size)?;
    if size == 0 {
        return Err(AdsError::NoStates);
    }
    let first = lines.header("Marker states:", total)?;
    let markers = lines.list(first, "Vocal states:")?;
    let first = lines.header("Vocal states:", total)?;
    let _vocal = lines.list(first, "Transitions:")?;
    let (n, rest) = lines.header("Transitions:", total)?;
    if !rest.is_empty() {
        return Err(AdsError::BadTransition { line: n });
    }

    let mut b = GeneratorBuilder::new();
    b.add_states(size, |_| false);
    for (line, m) in markers {
        if m >= size {
            return Err(AdsError::StateOutOfRange { line, state: m, size });
        }
        b.set_marked(m, true);
    }
    for (i, l) in lines.inner {
        let line = i + 1;
        let l = l.trim();
        if l.is_empty() {
            continue;
        }
        let parts: Vec<&str> = l.split_whitespace().collect();
        let [from, code, to] = parts[..] else {
            return Err(AdsError::BadTransition { line });
        };
        let (from, code, to) = (number(line, from)?, number(line, code)?, number(line, to)?);
        for s in [from, to] {
            if s >= size {
                return Err(AdsError::StateOutOfRange { line, state: s, size });
            }
        }
        let code = u32::try_from(code).map_err(|_| AdsError::BadNumber {
            line,
            text: code.to_string(),
        })?;
        let event = match table {
            Some(t) => t.event(code).cloned().ok_or(AdsError::UnknownCode { line, code })?,
            None => Event::raw(code),
        };
        b.add_transition(from, event, to)
            .map_err(|source| AdsError::Automata { line, source })?;
    }
    let generator = b.build(0).map_err(|source| AdsError::Automata { line: 0, source })?;
    Ok(AdsDocument {
        title: title.to_string(),
        generator,
    })
}

/// Writes `g` as ADS text. A non-zero initial state is swapped with state 0.
pub fn write_ads(g: &Generator, title: &str, table: &SymbolTable) -> Result<String, EncodeError> {
    let init = g.initial();
    let rename = |s: StateId| {
        if s == init {
            0
        } else if s == 0 {
            init
        } else {
            s
        }
    };
    let mut markers: Vec<StateId> = g.marked_states().map(rename).collect();
    markers.sort_unstable();
    let mut transitions = Vec::with_capacity(g.transition_count());
    for (s, e, t) in g.all_transitions() {
        let code = table.code(e)?;
        if (code % 2 == 1) != e.is_controllable() {
            return Err(EncodeError::Parity { event: e.clone(), code });
        }
        transitions.push((rename(s), code, rename(t)));
    }
    transitions.sort_unstable();

    let mut out = String::new();
    out.push_str(title);
    out.push('\n');
    out.push_str(&format!("State size: {}\n", g.state_count()));
    let markers: Vec<String> = markers.iter().map(ToString::to_string).collect();
    out.push_str(&format!("Marker states: {}\n", markers.join(" ")).replace(" \n", "\n"));
    out.push_str("Vocal states:\n\n");
    out.push_str("Transitions:\n");
    for (s, c, t) in transitions {
        out.push_str(&format!("{s} {c} {t}\n"));
    }
    Ok(out)
}
