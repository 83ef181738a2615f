//! `export`: format conversion for problems, controller generators and ADS
//! files. The converted text goes to standard output; with `--out` it is
//! also written there, together with any symbol table it needs.

use std::io::Write;
use std::path::Path;

use anyhow::{bail, Context};
use descomp::io::{
    cg_to_dot, generator_to_dot, read_ads, read_cg, serialize_problem, write_ads, Mode, ProblemFile, SymbolTable,
};
use descomp::plant::{build_composition_plant, build_maximal_plant};

use crate::pipeline::load_problem;
use crate::{write_artifact, CommandOutcome, Flags, Format};

enum Input {
    Ads(String),
    Problem,
    Cg(String),
}

fn sniff(text: &str) -> anyhow::Result<Input> {
    if !text.trim_start().starts_with('{') {
        return Ok(Input::Ads(text.to_string()));
    }
    let v: serde_json::Value = serde_json::from_str(text).context("malformed JSON")?;
    match v.get("format").and_then(|f| f.as_str()) {
        Some("descomp-problem") => Ok(Input::Problem),
        Some("descomp-cg") => Ok(Input::Cg(text.to_string())),
        Some(other) => bail!("cannot export files of format `{other}`"),
        None => bail!("JSON input lacks a `format` field"),
    }
}

fn emit(flags: &Flags, outcome: &mut CommandOutcome, name: &str, text: &str, out: &mut dyn Write) -> anyhow::Result<()> {
    out.write_all(text.as_bytes())?;
    write_artifact(flags, outcome, name, text)
}

pub fn export(flags: &Flags, path: &Path, format: Format, symbols: Option<&Path>, out: &mut dyn Write) -> anyhow::Result<CommandOutcome> {
    let text = std::fs::read_to_string(path).with_context(|| format!("cannot read {}", path.display()))?;
    let table = symbols
        .map(|p| -> anyhow::Result<SymbolTable> {
            let t = std::fs::read_to_string(p).with_context(|| format!("cannot read {}", p.display()))?;
            Ok(SymbolTable::from_json(&t)?)
        })
        .transpose()?;
    let stem = path.file_stem().and_then(|s| s.to_str()).unwrap_or("export").to_string();
    let mut outcome = CommandOutcome::default();
    match (sniff(&text)?, format) {
        (Input::Ads(ads), Format::Ads) => {
            let doc = read_ads(&ads, table.as_ref())?;
            let table = match table {
                Some(t) => t,
                None => SymbolTable::for_generator(&doc.generator)?,
            };
            emit(flags, &mut outcome, &format!("{stem}.ads"), &write_ads(&doc.generator, &doc.title, &table)?, out)?;
        }
        (Input::Ads(ads), Format::Dot) => {
            let doc = read_ads(&ads, table.as_ref())?;
            emit(flags, &mut outcome, &format!("{stem}.dot"), &generator_to_dot(&doc.generator, &doc.title), out)?;
        }
        (Input::Problem, format) => {
            let problem = load_problem(flags, path)?;
            let plant = match problem.mode {
                Mode::Srtf => build_maximal_plant(&problem.system, &problem.target)?,
                _ => build_composition_plant(&problem.system, &problem.target)?,
            };
            match format {
                Format::Ads => {
                    let table = SymbolTable::for_generator(&plant)?;
                    emit(flags, &mut outcome, "plant.ads", &write_ads(&plant, "PLANT", &table)?, out)?;
                    write_artifact(flags, &mut outcome, "plant.symbols.json", &table.to_json())?;
                }
                Format::Dot => emit(flags, &mut outcome, "plant.dot", &generator_to_dot(&plant, "plant"), out)?,
                Format::Problem => {
                    let file = ProblemFile::new(
                        problem.mode,
                        &problem.system,
                        &problem.target,
                        descomp::io::parse_problem(&text)?.constraint,
                    );
                    emit(flags, &mut outcome, &format!("{stem}.json"), &serialize_problem(&file), out)?;
                }
            }
        }
        (Input::Cg(cg), Format::Dot) => {
            let mut cg = read_cg(&cg)?;
            if flags.quotient {
                cg = cg.quotient();
            }
            emit(flags, &mut outcome, "cg.dot", &cg_to_dot(&cg, "cg"), out)?;
        }
        (Input::Ads(_), Format::Problem) => bail!("an ADS file has no composition problem to export"),
        (Input::Cg(_), _) => bail!("controller generators export only to dot"),
    }
    Ok(outcome)
}
