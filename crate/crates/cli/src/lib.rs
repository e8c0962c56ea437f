//! Command-line driver for `galmod`. [`run`] takes the argument vector and
//! output streams so the binary and the test suites share one entry point.

pub mod input;
mod report;

use std::io::Write;
use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};
use galmod::{Error, DEFAULT_ELEMENT_CAP, DEFAULT_ISO_BOUND};
use serde::Serialize;

use crate::input::{load_preset, select_subgroup, ActionFile, Loaded, Preset};

pub use report::REPORT_SCHEMA;

/// Exit status for invalid input (bad files, flags or generator names).
pub const EXIT_INVALID_INPUT: i32 = 1;
/// Exit status when group enumeration passes `--element-cap`.
pub const EXIT_CAP_EXCEEDED: i32 = 2;
/// Exit status for a violated internal invariant.
pub const EXIT_INTERNAL: i32 = 3;

#[derive(Debug, Parser)]
#[command(
    name = "galmod",
    version,
    about = "Permutation, invertibility and motive checks for Galois lattices"
)]
pub struct Cli {
    /// Action file in the galmod-action/1 format.
    #[arg(long, global = true, value_name = "PATH")]
    input: Option<PathBuf>,

    /// Built-in Del Pezzo Picard lattice with its full Weyl group.
    #[arg(long, global = true, value_enum)]
    preset: Option<PresetArg>,

    /// Comma-separated generator names; restricts to the subgroup they generate.
    #[arg(long, global = true, value_name = "NAMES")]
    subgroup: Option<String>,

    #[arg(long, global = true, value_enum, default_value_t = FormatArg::Text)]
    format: FormatArg,

    /// Maximal group order accepted during enumeration.
    #[arg(long, global = true, value_name = "N", default_value_t = DEFAULT_ELEMENT_CAP)]
    element_cap: usize,

    /// Coefficient bound for isomorphism searches.
    #[arg(long, global = true, value_name = "B", default_value_t = DEFAULT_ISO_BOUND)]
    iso_bound: u32,

    /// Assert that the surface has a zero-cycle of degree one.
    #[arg(long, global = true)]
    assume_zero_cycle: bool,

    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum PresetArg {
    Dp5,
    Dp6,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum FormatArg {
    Text,
    Json,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Subcommand)]
pub enum Analysis {
    /// Group order and subgroup classes.
    Info,
    /// H^1 for every subgroup class.
    H1,
    /// Whether H^1 vanishes on every subgroup class.
    Coflabby,
    /// A coflasque resolution 0 -> C -> P -> M -> 0.
    Coflasque,
    /// Whether M is a direct summand of a permutation lattice.
    Invertible,
    /// Whether M is a permutation lattice.
    Permutation,
    /// The zero-dimensional motive decomposition report.
    Motive,
}

impl Analysis {
    fn name(self) -> &'static str {
        match self {
            Analysis::Info => "info",
            Analysis::H1 => "h1",
            Analysis::Coflabby => "coflabby",
            Analysis::Coflasque => "coflasque",
            Analysis::Invertible => "invertible",
            Analysis::Permutation => "permutation",
            Analysis::Motive => "motive",
        }
    }
}

#[derive(Debug, Subcommand)]
enum Command {
    #[command(flatten)]
    Analysis(Analysis),
    /// Degree-5 preset; without a subcommand, checks the explicit resolution.
    Dp5 {
        #[command(subcommand)]
        command: Option<Analysis>,
    },
    /// Degree-6 preset; without a subcommand, decides invertibility.
    Dp6 {
        #[command(subcommand)]
        command: Option<Analysis>,
    },
}

/// What a run computes once the source is fixed.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Task {
    Analysis(Analysis),
    Dp5Explicit,
}

impl Task {
    fn name(self) -> &'static str {
        match self {
            Task::Analysis(a) => a.name(),
            Task::Dp5Explicit => "dp5",
        }
    }
}

#[derive(Serialize)]
struct Envelope<'a> {
    schema: &'static str,
    command: &'static str,
    source: &'a report::Source,
    result: serde_json::Value,
}

/// Exit status for a library error.
pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::CapExceeded { .. } => EXIT_CAP_EXCEEDED,
        Error::Internal(_) | Error::CoflasquenessViolated(_) => EXIT_INTERNAL,
        _ => EXIT_INVALID_INPUT,
    }
}

/// Parses `args` (including the program name), writes the report to `out`
/// and diagnostics to `err`, and returns the exit status.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let text = e.render().to_string();
            return if e.use_stderr() {
                let _ = write!(err, "{text}");
                EXIT_INVALID_INPUT
            } else {
                let _ = write!(out, "{text}");
                0
            };
        }
    };
    match execute(&cli) {
        Ok(text) => {
            let _ = out.write_all(text.as_bytes());
            0
        }
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            exit_code(&e)
        }
    }
}

fn execute(cli: &Cli) -> Result<String, Error> {
    let (forced, task) = match cli.command {
        Command::Analysis(a) => (None, Task::Analysis(a)),
        Command::Dp5 { command } => (Some(Preset::Dp5), command.map_or(Task::Dp5Explicit, Task::Analysis)),
        Command::Dp6 { command } => (
            Some(Preset::Dp6),
            Task::Analysis(command.unwrap_or(Analysis::Invertible)),
        ),
    };
    let loaded = load(cli, forced)?;
    let (text, result) = report::compute(task, &loaded, cli.assume_zero_cycle, cli.iso_bound)?;
    let source = report::Source::of(&loaded);
    Ok(match cli.format {
        FormatArg::Text => format!("{}\n{text}", source.describe()),
        FormatArg::Json => {
            let envelope = Envelope {
                schema: REPORT_SCHEMA,
                command: task.name(),
                source: &source,
                result,
            };
            let mut s = serde_json::to_string_pretty(&envelope).map_err(|e| Error::Internal(e.to_string()))?;
            s.push('\n');
            s
        }
    })
}

fn load(cli: &Cli, forced: Option<Preset>) -> Result<Loaded, Error> {
    let flag_preset = cli.preset.map(|p| match p {
        PresetArg::Dp5 => Preset::Dp5,
        PresetArg::Dp6 => Preset::Dp6,
    });
    let preset = match (forced, flag_preset) {
        (Some(a), Some(b)) if a != b => {
            return Err(Error::InvalidInput(format!(
                "subcommand {} conflicts with --preset {}",
                a.name(),
                b.name()
            )))
        }
        (a, b) => a.or(b),
    };
    let (lattice, origin, file_zero_cycle) = match (preset, &cli.input) {
        (Some(p), Some(_)) => {
            return Err(Error::InvalidInput(format!(
                "--input conflicts with the {} preset",
                p.name()
            )))
        }
        (Some(p), None) => (load_preset(p, cli.element_cap)?, p.name().to_string(), false),
        (None, Some(path)) => {
            let file = ActionFile::read(path)?;
            (
                file.to_lattice(cli.element_cap)?,
                path.display().to_string(),
                file.zero_cycle_degree_one,
            )
        }
        (None, None) => return Err(Error::InvalidInput("no lattice given, use --input or --preset".into())),
    };
    let parent = lattice.group_arc().clone();
    let (lattice, subgroup, subgroup_names) = select_subgroup(lattice, cli.subgroup.as_deref())?;
    Ok(Loaded {
        lattice,
        parent,
        subgroup,
        subgroup_names,
        preset,
        origin,
        file_zero_cycle,
    })
}
