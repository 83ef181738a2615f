//! `synthesize`, `check` and `crosscheck`.

use std::io::Write;
use std::path::Path;

use anyhow::{bail, Context};
use descomp::cg::{extract_cg, extract_memory_cg, CgError};
use descomp::constraints::compile_constraint;
use descomp::io::{cg_to_dot, fragment_to_dot, parse_problem, write_cg, write_fragment, Mode, Problem};
use descomp::model::build_enacted_system;
use descomp::ndsim::{crosscheck_cg, greatest_nd_simulation};
use descomp::plant::{build_composition_plant, build_maximal_plant};
use descomp::srtf::{extract_fragment, simulation_difference};
use descomp::{supcon, ControllerGenerator, Generator, SupervisorGenerator};

use crate::{write_artifact, CommandOutcome, Flags};

/// Reads and validates a problem file; warnings go to standard error.
pub fn load_problem(flags: &Flags, path: &Path) -> anyhow::Result<Problem> {
    let text = std::fs::read_to_string(path).with_context(|| format!("cannot read {}", path.display()))?;
    let mut file = parse_problem(&text).with_context(|| format!("in {}", path.display()))?;
    if let Some(mode) = flags.mode {
        file.mode = mode;
    }
    let problem = file.validate().with_context(|| format!("in {}", path.display()))?;
    for w in &problem.warnings {
        eprintln!("warning: {w}");
    }
    Ok(problem)
}

fn size(g: &Generator) -> String {
    format!("{} states, {} transitions", g.state_count(), g.transition_count())
}

/// Plant and supervisor for the compose or constrained pipelines.
fn supervise(problem: &Problem) -> anyhow::Result<(Generator, SupervisorGenerator)> {
    let plant = build_composition_plant(&problem.system, &problem.target)?;
    let r = match (problem.mode, &problem.constraint) {
        (Mode::Constrained, Some(c)) => supcon(&plant, &compile_constraint(c, &plant)?)?,
        (Mode::Constrained, None) => bail!("constrained mode needs a constraint"),
        _ => supcon(&plant, &plant)?,
    };
    Ok((plant, r))
}

/// The tuple controller generator where it suffices, else the memory one.
fn controller_generator(problem: &Problem, r: &SupervisorGenerator) -> anyhow::Result<ControllerGenerator> {
    if problem.mode == Mode::Constrained {
        return Ok(extract_memory_cg(r)?);
    }
    match extract_cg(r) {
        Err(CgError::MemoryRequired { .. }) => Ok(extract_memory_cg(r)?),
        other => Ok(other?),
    }
}

fn verdict(exists: bool) -> &'static str {
    if exists {
        "composition exists"
    } else {
        "no composition exists"
    }
}

fn omega_table(cg: &ControllerGenerator, out: &mut dyn Write) -> anyhow::Result<()> {
    writeln!(out, "selection function:")?;
    for q in 0..cg.state_count() {
        let cells: Vec<String> = cg
            .requests(q)?
            .iter()
            .map(|a| {
                let js: Vec<String> = cg.select(q, a).expect("known state").iter().map(usize::to_string).collect();
                format!("{a} {{{}}}", js.join(","))
            })
            .collect();
        writeln!(out, "  q{q} {}: {}", cg.tuple(q)?, cells.join(", "))?;
    }
    Ok(())
}

pub fn synthesize(flags: &Flags, path: &Path, omega: bool, out: &mut dyn Write) -> anyhow::Result<CommandOutcome> {
    let problem = load_problem(flags, path)?;
    writeln!(out, "mode: {}", mode_name(problem.mode))?;
    if problem.mode == Mode::Srtf {
        return fragment(flags, &problem, out);
    }
    let (plant, r) = supervise(&problem)?;
    writeln!(out, "plant: {}", size(&plant))?;
    writeln!(out, "supervisor: {}", size(&r.automaton))?;
    let exists = !r.is_empty();
    writeln!(out, "verdict: {}", verdict(exists))?;
    let mut cg = controller_generator(&problem, &r)?;
    if flags.quotient {
        cg = cg.quotient();
    }
    if exists {
        let kind = match cg.kind {
            descomp::CgKind::Tuples => "composition tuples",
            descomp::CgKind::Memory => "supervisor memory",
        };
        writeln!(out, "controller generator: {} states, {} edges ({kind})", cg.state_count(), cg.edges.len())?;
        if omega {
            omega_table(&cg, out)?;
        }
    }
    let mut outcome = CommandOutcome::verdict(exists || !flags.require_solution);
    write_artifact(flags, &mut outcome, "cg.json", &write_cg(&cg))?;
    write_artifact(flags, &mut outcome, "cg.dot", &cg_to_dot(&cg, "cg"))?;
    Ok(outcome)
}

fn mode_name(mode: Mode) -> &'static str {
    match mode {
        Mode::Compose => "compose",
        Mode::Constrained => "constrained",
        Mode::Srtf => "srtf",
    }
}

fn fragment(flags: &Flags, problem: &Problem, out: &mut dyn Write) -> anyhow::Result<CommandOutcome> {
    let plant = build_maximal_plant(&problem.system, &problem.target)?;
    writeln!(out, "plant: {}", size(&plant))?;
    let r = supcon(&plant, &plant)?;
    writeln!(out, "supervisor: {}", size(&r.automaton))?;
    let mut f = extract_fragment(&problem.target, &r);
    if flags.quotient {
        f = f.quotient();
    }
    let b = f.target.behavior();
    writeln!(out, "target fragment: {} states, {} transitions", b.state_count(), b.transition_count())?;
    let complete = match simulation_difference(&f.target, &problem.target) {
        None => {
            writeln!(out, "verdict: the whole target is realizable")?;
            true
        }
        Some((_, trace)) => {
            let trace: Vec<String> = trace.iter().map(ToString::to_string).collect();
            writeln!(out, "verdict: only a fragment is realizable; lost trace: {}", trace.join(" "))?;
            false
        }
    };
    // requests here are whole target transitions, not bare actions
    writeln!(out, "fragment transitions (requested target transition / behavior):")?;
    for e in &f.edges {
        writeln!(out, "  {} --[{}]/{}--> {}", b.state_name(e.from), e.transition, e.index, b.state_name(e.to))?;
    }
    let mut outcome = CommandOutcome::verdict(complete || !f.is_trivial() || !flags.require_solution);
    write_artifact(flags, &mut outcome, "srtf.json", &write_fragment(&f))?;
    write_artifact(flags, &mut outcome, "srtf.dot", &fragment_to_dot(&f, b.name()))?;
    Ok(outcome)
}

pub fn check(flags: &Flags, path: &Path, out: &mut dyn Write) -> anyhow::Result<CommandOutcome> {
    let mut problem = load_problem(flags, path)?;
    if problem.mode == Mode::Srtf {
        // existence of a composition for the whole target
        problem.mode = Mode::Compose;
    }
    let (_, r) = supervise(&problem)?;
    let exists = !r.is_empty();
    writeln!(out, "{}", verdict(exists))?;
    Ok(CommandOutcome::verdict(exists))
}

pub fn crosscheck(flags: &Flags, path: &Path, out: &mut dyn Write) -> anyhow::Result<CommandOutcome> {
    let problem = load_problem(flags, path)?;
    if problem.mode != Mode::Compose {
        bail!("crosscheck compares unconstrained compositions; use --mode compose");
    }
    let sim = greatest_nd_simulation(&problem.target, &build_enacted_system(&problem.system));
    let (_, r) = supervise(&problem)?;
    let cg = controller_generator(&problem, &r)?;
    writeln!(
        out,
        "ND-simulation: {} ({} pairs, {} reachable tuples)",
        verdict(sim.holds_initially()),
        sim.pairs.len(),
        sim.reachable.len()
    )?;
    writeln!(out, "supervisor: {} ({} controller generator states)", verdict(!cg.is_empty()), cg.state_count())?;
    let report = crosscheck_cg(&cg, &sim);
    for t in &report.missing {
        writeln!(out, "  missing from the controller generator: {t}")?;
    }
    for t in &report.extra {
        writeln!(out, "  not reached by the simulation: {t}")?;
    }
    let agree = report.ok && sim.holds_initially() == !cg.is_empty();
    writeln!(out, "{}", if agree { "agreement" } else { "DISAGREEMENT" })?;
    Ok(CommandOutcome::verdict(agree))
}
