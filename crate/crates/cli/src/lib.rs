//! Command-line front end for `volog-core`: JSON jobs in, JSON results out.
//!
//! Every subcommand reads one job file (or `-` for stdin) except
//! `padic-log`, which takes its number on the command line. Output keys are
//! sorted so identical inputs give byte-identical output.

pub mod commands;
pub mod error;
pub mod format;
pub mod schema;

use std::ffi::OsString;
use std::io::{Read, Write};
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use num_bigint::BigInt;
use serde_json::Value;

use commands::Settings;
use error::CliError;

#[derive(Debug, Parser)]
#[command(name = "volog", version, about = "Branch derivatives of p-adic integrals from local data")]
pub struct Cli {
    /// Relative p-adic precision N.
    #[arg(long, global = true, env = "VOLOG_PRECISION", default_value_t = 20)]
    pub precision: u32,
    /// Maximal Λ-degree of universal scalars.
    #[arg(long, global = true, default_value_t = volog_core::padic::DEFAULT_LAMBDA_CAP)]
    pub lambda_cap: usize,
    /// Write the result here instead of stdout.
    #[arg(long, short, global = true)]
    pub output: Option<PathBuf>,
    /// Print the JSON schema of the subcommand's job and result and exit.
    #[arg(long, global = true)]
    pub schema: bool,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args)]
pub struct JobArgs {
    /// Job file, or `-` for stdin.
    pub input: Option<PathBuf>,
    /// Anchor vertex label; overrides the job's `anchor`.
    #[arg(long)]
    pub anchor: Option<String>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Iwasawa-normalized universal logarithm of a rational number.
    PadicLog {
        #[arg(long)]
        p: Option<u32>,
        #[arg(long, allow_hyphen_values = true)]
        num: Option<BigInt>,
        #[arg(long, allow_hyphen_values = true, default_value = "1")]
        den: BigInt,
    },
    /// Harmonic projection of a rational cochain.
    GraphProject(JobArgs),
    /// Assemble local Coleman data into a global integral.
    VologAssemble(JobArgs),
    /// Branch derivative of log-type integrals from residues.
    VologDdlog(JobArgs),
    /// Branch derivative of an iterated integral.
    VologIterated(JobArgs),
    /// Intersection-theoretic local height of two divisors.
    HeightLocal(JobArgs),
    /// Canonical splitting of an extension class of filtered (φ, N)-modules.
    FpnSplit(JobArgs),
}

pub const SUBCOMMANDS: [&str; 7] =
    ["padic-log", "graph-project", "volog-assemble", "volog-ddlog", "volog-iterated", "height-local", "fpn-split"];

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::PadicLog { .. } => "padic-log",
            Command::GraphProject(_) => "graph-project",
            Command::VologAssemble(_) => "volog-assemble",
            Command::VologDdlog(_) => "volog-ddlog",
            Command::VologIterated(_) => "volog-iterated",
            Command::HeightLocal(_) => "height-local",
            Command::FpnSplit(_) => "fpn-split",
        }
    }
}

const VALUE_FLAGS: [&str; 4] = ["--precision", "--lambda-cap", "--output", "-o"];

/// Accepts `volog padic log …` for `volog padic-log …`.
fn join_two_word_subcommand(mut args: Vec<OsString>) -> Vec<OsString> {
    let mut i = 1;
    while i < args.len() {
        let a = args[i].to_string_lossy();
        if VALUE_FLAGS.contains(&a.as_ref()) {
            i += 2;
            continue;
        }
        if a.starts_with('-') {
            i += 1;
            continue;
        }
        if !SUBCOMMANDS.contains(&a.as_ref()) && i + 1 < args.len() {
            let joined = format!("{a}-{}", args[i + 1].to_string_lossy());
            if SUBCOMMANDS.contains(&joined.as_str()) {
                args.splice(i..i + 2, [OsString::from(joined)]);
            }
        }
        break;
    }
    args
}

fn read_job(path: Option<&Path>) -> Result<Value, CliError> {
    let path = path.ok_or_else(|| CliError::parse("a job file is required (use - for stdin)"))?;
    let text = if path == Path::new("-") {
        let mut s = String::new();
        std::io::stdin().read_to_string(&mut s)?;
        s
    } else {
        std::fs::read_to_string(path).map_err(|e| CliError::parse(format!("{}: {e}", path.display())))?
    };
    serde_json::from_str(&text).map_err(|e| CliError::parse(format!("{}: {e}", path.display())))
}

/// Runs a parsed command and returns the result document.
pub fn execute(cli: &Cli) -> Result<Value, CliError> {
    if cli.schema {
        return Ok(schema::for_subcommand(cli.command.name()));
    }
    let settings = |anchor: &Option<String>| Settings {
        precision: cli.precision,
        lambda_cap: cli.lambda_cap,
        anchor: anchor.clone(),
    };
    let job = |a: &JobArgs| read_job(a.input.as_deref());
    match &cli.command {
        Command::PadicLog { p, num, den } => {
            let p = p.ok_or_else(|| CliError::parse("--p is required"))?;
            let num = num.as_ref().ok_or_else(|| CliError::parse("--num is required"))?;
            commands::padic_log(p, num, den, &settings(&None))
        }
        Command::GraphProject(a) => commands::graph_project(&job(a)?, &settings(&a.anchor)),
        Command::VologAssemble(a) => commands::volog_assemble(&job(a)?, &settings(&a.anchor)),
        Command::VologDdlog(a) => commands::volog_ddlog(&job(a)?, &settings(&a.anchor)),
        Command::VologIterated(a) => commands::volog_iterated(&job(a)?, &settings(&a.anchor)),
        Command::HeightLocal(a) => commands::height_local(&job(a)?, &settings(&a.anchor)),
        Command::FpnSplit(a) => commands::fpn_split(&job(a)?, &settings(&a.anchor)),
    }
}

fn render(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("JSON values serialize");
    s.push('\n');
    s
}

/// Parses `args`, runs the job and writes the result (or a structured error)
/// to `out`; returns the process exit code.
pub fn run<I, T>(args: I, out: &mut impl Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString>,
{
    let args = join_two_word_subcommand(args.into_iter().map(Into::into).collect());
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) if !e.use_stderr() => {
            let _ = write!(out, "{e}");
            return 0;
        }
        Err(e) => {
            let err = CliError::parse(e.to_string().trim_end());
            let _ = out.write_all(render(&err.to_json()).as_bytes());
            return err.exit_code();
        }
    };
    let result = execute(&cli).and_then(|v| {
        let text = render(&v);
        match &cli.output {
            Some(path) => std::fs::write(path, text).map_err(CliError::from),
            None => out.write_all(text.as_bytes()).map_err(CliError::from),
        }
    });
    match result {
        Ok(()) => 0,
        Err(err) => {
            let _ = out.write_all(render(&err.to_json()).as_bytes());
            err.exit_code()
        }
    }
}
