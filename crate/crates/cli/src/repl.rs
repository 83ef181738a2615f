//! `run`: a line-oriented session over a controller generator.
//!
//! Each input line is `action`, `action,j` or `action,j,observed`; missing
//! parts are asked for on the following lines unless `--auto` or `--seed`
//! decides them. `quit` or end of input ends the session.

use std::collections::BTreeSet;
use std::io::{BufRead, BufReader, IsTerminal, Write};
use std::path::Path;

use anyhow::Context;
use descomp::io::read_cg;
use descomp::{Action, ControllerGenerator, RunState};
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

use crate::{CommandOutcome, Flags};

struct Session<'a> {
    cg: &'a ControllerGenerator,
    input: Box<dyn BufRead + 'a>,
    out: &'a mut dyn Write,
    auto: bool,
    rng: Option<StdRng>,
    /// Echo input lines, so non-interactive sessions read like a dialogue.
    echo: bool,
}

fn list(set: &BTreeSet<usize>) -> String {
    let v: Vec<String> = set.iter().map(usize::to_string).collect();
    format!("{{{}}}", v.join(","))
}

impl Session<'_> {
    /// The next non-empty, trimmed input line, or `None` at end of input.
    fn line(&mut self, prompt: &str) -> anyhow::Result<Option<String>> {
        loop {
            write!(self.out, "{prompt}> ")?;
            self.out.flush()?;
            let mut s = String::new();
            if self.input.read_line(&mut s)? == 0 {
                writeln!(self.out)?;
                return Ok(None);
            }
            let s = s.trim();
            if self.echo {
                writeln!(self.out, "{s}")?;
            }
            if !s.is_empty() && !s.starts_with('#') {
                return Ok(Some(s.to_string()));
            }
        }
    }

    fn index(&mut self, given: Option<&str>, omega: &BTreeSet<usize>) -> anyhow::Result<Option<usize>> {
        let mut given = given.map(str::to_string);
        if given.is_none() && self.auto {
            let j = *omega.first().expect("nonempty selection");
            writeln!(self.out, "auto: delegating to {j}")?;
            return Ok(Some(j));
        }
        loop {
            let text = match given.take() {
                Some(t) => t,
                None => match self.line("behavior")? {
                    Some(t) => t,
                    None => return Ok(None),
                },
            };
            match text.parse::<usize>() {
                Ok(j) if omega.contains(&j) => return Ok(Some(j)),
                Ok(j) => writeln!(self.out, "behavior {j} may not be delegated this request; choose from {}", list(omega))?,
                Err(_) => writeln!(self.out, "`{text}` is not a behavior index; choose from {}", list(omega))?,
            }
        }
    }

    fn outcome(&mut self, given: Option<&str>, options: &[String]) -> anyhow::Result<Option<String>> {
        let mut given = given.map(str::to_string);
        if given.is_none() {
            if let [only] = options {
                return Ok(Some(only.clone()));
            }
            if let Some(rng) = &mut self.rng {
                let pick = options[rng.gen_range(0..options.len())].clone();
                writeln!(self.out, "environment: behavior evolves into {pick}")?;
                return Ok(Some(pick));
            }
        }
        loop {
            let text = match given.take() {
                Some(t) => t,
                None => match self.line(&format!("outcome [{}]", options.join("|")))? {
                    Some(t) => t,
                    None => return Ok(None),
                },
            };
            if options.contains(&text) {
                return Ok(Some(text));
            }
            writeln!(self.out, "`{text}` is not a possible outcome; choose from {}", options.join(", "))?;
        }
    }

    fn show(&mut self, run: &RunState) -> anyhow::Result<()> {
        let q = run.state();
        let requests: Vec<String> = self.cg.requests(q)?.iter().map(ToString::to_string).collect();
        writeln!(self.out, "state q{q} {}", self.cg.tuple(q)?)?;
        writeln!(self.out, "requests: {}", requests.join(" "))?;
        Ok(())
    }

    fn session(&mut self, run: &mut RunState) -> anyhow::Result<()> {
        self.show(run)?;
        while let Some(line) = self.line("request")? {
            if line == "quit" || line == "exit" {
                break;
            }
            let parts: Vec<&str> = line.split(',').map(str::trim).collect();
            if parts.len() > 3 {
                writeln!(self.out, "expected `action[,behavior[,outcome]]`")?;
                continue;
            }
            let action = Action::from(parts[0]);
            let q = run.state();
            if !self.cg.requests(q)?.contains(&action) {
                writeln!(self.out, "`{action}` is not a target action here")?;
                continue;
            }
            let omega = self.cg.select(q, &action)?;
            writeln!(self.out, "ω = {}", list(&omega))?;
            let Some(j) = self.index(parts.get(1).copied(), &omega)? else { break };
            let options: Vec<String> = self.cg.outcomes(q, &action, j).iter().map(|e| e.observed.clone()).collect();
            let Some(observed) = self.outcome(parts.get(2).copied(), &options)? else { break };
            run.step(self.cg, &action, j, &observed)?;
            self.show(run)?;
        }
        Ok(())
    }
}

pub fn run(
    flags: &Flags,
    path: &Path,
    script: Option<&Path>,
    auto: bool,
    transcript: Option<&Path>,
    out: &mut dyn Write,
) -> anyhow::Result<CommandOutcome> {
    let text = std::fs::read_to_string(path).with_context(|| format!("cannot read {}", path.display()))?;
    let cg = read_cg(&text).with_context(|| format!("in {}", path.display()))?;
    let mut run = RunState::new(&cg).context("nothing to run")?;
    let input: Box<dyn BufRead> = match script {
        Some(p) => Box::new(BufReader::new(
            std::fs::File::open(p).with_context(|| format!("cannot read {}", p.display()))?,
        )),
        None => Box::new(BufReader::new(std::io::stdin())),
    };
    let mut session = Session {
        cg: &cg,
        input,
        out,
        auto,
        rng: flags.seed.map(StdRng::seed_from_u64),
        echo: script.is_some() || !std::io::stdin().is_terminal(),
    };
    session.session(&mut run)?;
    let q = run.state();
    writeln!(
        session.out,
        "session ended after {} steps in state q{q} {}",
        run.transcript().len(),
        cg.tuple(q)?
    )?;
    let mut outcome = CommandOutcome::default();
    let json = serde_json::json!({
        "format": "descomp-transcript",
        "version": 1,
        "steps": run.transcript(),
        "final": q,
    });
    let mut json = serde_json::to_string_pretty(&json)?;
    json.push('\n');
    match transcript {
        Some(p) => {
            std::fs::write(p, json).with_context(|| format!("cannot write {}", p.display()))?;
            outcome.artifacts.push(p.to_path_buf());
        }
        None => crate::write_artifact(flags, &mut outcome, "transcript.json", &json)?,
    }
    Ok(outcome)
}
