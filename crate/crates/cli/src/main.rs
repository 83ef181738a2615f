//! `descomp`: synthesize, inspect and exercise behavior compositions.

mod export;
mod pipeline;
mod repl;

use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

/// Behavior composition via supervisory control.
#[derive(Parser, Debug)]
#[command(name = "descomp", version, about)]
struct Cli {
    /// Pipeline to run; defaults to the mode named in the problem file.
    #[arg(long, global = true, value_enum)]
    mode: Option<ModeArg>,
    /// Exit with status 1 when no solution exists.
    #[arg(long, global = true)]
    require_solution: bool,
    /// Directory for written artifacts.
    #[arg(long, global = true, value_name = "DIR")]
    out: Option<PathBuf>,
    /// Minimize outputs up to bisimulation.
    #[arg(long, global = true)]
    quotient: bool,
    /// Seed for random choices of nondeterministic outcomes in `run`.
    #[arg(long, global = true, value_name = "N")]
    seed: Option<u64>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum ModeArg {
    Compose,
    Constrained,
    Srtf,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Ads,
    Dot,
    Problem,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Synthesize the controller generator or target fragment of a problem.
    Synthesize {
        problem: PathBuf,
        /// Print the selection function of every state.
        #[arg(long)]
        omega: bool,
    },
    /// Step through a controller generator interactively.
    Run {
        cg: PathBuf,
        /// Read input lines from a file instead of standard input.
        #[arg(long, value_name = "FILE")]
        script: Option<PathBuf>,
        /// Delegate every request to the lowest allowed behavior.
        #[arg(long)]
        auto: bool,
        /// Where to save the transcript; defaults to `transcript.json` in
        /// the output directory.
        #[arg(long, value_name = "FILE")]
        transcript: Option<PathBuf>,
    },
    /// Convert a problem, controller generator or ADS file.
    Export {
        input: PathBuf,
        #[arg(long, value_enum)]
        format: Format,
        /// Symbol table for ADS codes.
        #[arg(long, value_name = "FILE")]
        symbols: Option<PathBuf>,
    },
    /// Report whether a composition exists.
    Check { problem: PathBuf },
    /// Compare the synthesized controller generator with the ND-simulation.
    Crosscheck { problem: PathBuf },
}

/// Global flags shared by the commands.
#[derive(Clone, Debug)]
pub struct Flags {
    pub mode: Option<descomp::io::Mode>,
    pub require_solution: bool,
    pub out: Option<PathBuf>,
    pub quotient: bool,
    pub seed: Option<u64>,
}

/// What a command produced: its exit status and the files it wrote.
#[derive(Debug, Default)]
pub struct CommandOutcome {
    pub code: u8,
    pub artifacts: Vec<PathBuf>,
}

impl CommandOutcome {
    pub fn verdict(ok: bool) -> Self {
        CommandOutcome {
            code: u8::from(!ok),
            artifacts: Vec::new(),
        }
    }
}

/// Writes `contents` to `name` inside the output directory, if any.
pub fn write_artifact(flags: &Flags, outcome: &mut CommandOutcome, name: &str, contents: &str) -> anyhow::Result<()> {
    if let Some(dir) = &flags.out {
        std::fs::create_dir_all(dir)?;
        let path = dir.join(name);
        std::fs::write(&path, contents).map_err(|e| anyhow::anyhow!("cannot write {}: {e}", path.display()))?;
        outcome.artifacts.push(path);
    }
    Ok(())
}

fn dispatch(cli: Cli, out: &mut dyn Write) -> anyhow::Result<CommandOutcome> {
    let flags = Flags {
        mode: cli.mode.map(|m| match m {
            ModeArg::Compose => descomp::io::Mode::Compose,
            ModeArg::Constrained => descomp::io::Mode::Constrained,
            ModeArg::Srtf => descomp::io::Mode::Srtf,
        }),
        require_solution: cli.require_solution,
        out: cli.out,
        quotient: cli.quotient,
        seed: cli.seed,
    };
    match cli.command {
        Command::Synthesize { problem, omega } => pipeline::synthesize(&flags, &problem, omega, out),
        Command::Check { problem } => pipeline::check(&flags, &problem, out),
        Command::Crosscheck { problem } => pipeline::crosscheck(&flags, &problem, out),
        Command::Export { input, format, symbols } => export::export(&flags, &input, format, symbols.as_deref(), out),
        Command::Run {
            cg,
            script,
            auto,
            transcript,
        } => repl::run(&flags, &cg, script.as_deref(), auto, transcript.as_deref(), out),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let stdout = std::io::stdout();
    let mut out = stdout.lock();
    match dispatch(cli, &mut out) {
        Ok(outcome) => {
            for path in &outcome.artifacts {
                let _ = writeln!(out, "wrote {}", path.display());
            }
            ExitCode::from(outcome.code)
        }
        Err(e) => {
            let _ = out.flush();
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
