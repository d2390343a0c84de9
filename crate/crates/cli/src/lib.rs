//! Command-line front end: manifests in, versioned JSON result documents out.

pub mod commands;
pub mod document;
pub mod error;
pub mod manifest;

use std::ffi::OsString;
use std::path::PathBuf;

use clap::Parser;

use commands::{command, commands, Context, Flags};
use document::{ErrorBody, ErrorDocument, Invocation, ResultDocument, SCHEMA};
use error::CliError;
use manifest::load_manifest;

pub const VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Debug, Parser)]
#[command(name = "lgpair", version, about = "Residue pairings on matrix factorisations", after_help = command_list())]
pub struct Args {
    /// One of the commands listed below.
    pub command: String,
    #[arg(long)]
    pub manifest: PathBuf,
    #[arg(long)]
    pub object: Option<String>,
    /// Second object for `ext` and `gram`; defaults to --object.
    #[arg(long)]
    pub target: Option<String>,
    #[arg(long)]
    pub morphism: Option<String>,
    #[arg(long)]
    pub morphism2: Option<String>,
    #[arg(long)]
    pub seed: Option<u64>,
    /// First truncation degree for Ext computations.
    #[arg(long)]
    pub truncation: Option<u32>,
    /// Trace formula: kapustin-li (default) or pretrace.
    #[arg(long)]
    pub formula: Option<String>,
    /// Restrict `selfcheck` to the named checks.
    #[arg(long = "check")]
    pub checks: Vec<String>,
    /// Randomized cases per object for `selfcheck`.
    #[arg(long)]
    pub trials: Option<usize>,
    /// Compact output (the default).
    #[arg(long, conflicts_with = "pretty")]
    pub json: bool,
    #[arg(long)]
    pub pretty: bool,
}

fn command_list() -> String {
    let mut out = String::from("Commands:\n");
    for c in commands() {
        out.push_str(&format!("  {:<10} {}\n", c.name(), c.about()));
    }
    out
}

/// Exit code and text produced by one invocation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

impl Args {
    fn invocation(&self) -> Invocation {
        Invocation {
            name: self.command.clone(),
            manifest: self.manifest.display().to_string(),
            object: self.object.clone(),
            target: self.target.clone(),
            morphism: self.morphism.clone(),
            morphism2: self.morphism2.clone(),
            seed: self.seed,
            truncation: self.truncation,
            formula: self.formula.clone(),
        }
    }

    fn flags(&self) -> Flags {
        Flags {
            object: self.object.clone(),
            target: self.target.clone(),
            morphism: self.morphism.clone(),
            morphism2: self.morphism2.clone(),
            seed: self.seed,
            truncation: self.truncation,
            formula: self.formula.clone(),
            checks: self.checks.clone(),
            trials: self.trials,
        }
    }
}

fn render<T: serde::Serialize>(value: &T, pretty: bool) -> String {
    let mut s = if pretty {
        serde_json::to_string_pretty(value)
    } else {
        serde_json::to_string(value)
    }
    .expect("documents serialise");
    s.push('\n');
    s
}

/// Runs one command for parsed arguments.
pub fn execute(args: &Args) -> Result<ResultDocument, (CliError, Option<ResultDocument>)> {
    let cmd = command(&args.command).ok_or_else(|| (CliError::Usage(format!("unknown command '{}'", args.command)), None))?;
    let manifest = load_manifest(&args.manifest).map_err(|e| (e.into(), None))?;
    let flags = args.flags();
    let ctx = Context {
        manifest: &manifest,
        flags: &flags,
    };
    let out = cmd.run(&ctx).map_err(|e| (e, None))?;
    let doc = ResultDocument {
        schema: SCHEMA,
        version: VERSION,
        command: args.invocation(),
        outputs: out.outputs,
        provenance: out.provenance,
    };
    match out.failures {
        Some((failed, total)) if failed > 0 => Err((CliError::ChecksFailed { failed, total }, Some(doc))),
        _ => Ok(doc),
    }
}

/// Parses `argv` (including the program name) and runs the command.
pub fn run<I, T>(argv: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let args = match Args::try_parse_from(argv) {
        Ok(a) => a,
        Err(e) => {
            let code = match e.kind() {
                clap::error::ErrorKind::DisplayHelp | clap::error::ErrorKind::DisplayVersion => 0,
                _ => 4,
            };
            let text = e.render().to_string();
            return if code == 0 {
                Outcome { code, stdout: text, stderr: String::new() }
            } else {
                Outcome { code, stdout: String::new(), stderr: text }
            };
        }
    };
    match execute(&args) {
        Ok(doc) => Outcome {
            code: 0,
            stdout: render(&doc, args.pretty),
            stderr: String::new(),
        },
        Err((err, Some(doc))) => Outcome {
            code: err.exit_code(),
            stdout: render(&doc, args.pretty),
            stderr: format!("error: {err}\n"),
        },
        Err((err, None)) => {
            let doc = ErrorDocument {
                schema: SCHEMA,
                version: VERSION,
                command: args.invocation(),
                error: ErrorBody {
                    kind: err.kind(),
                    message: err.to_string(),
                },
            };
            Outcome {
                code: err.exit_code(),
                stdout: render(&doc, args.pretty),
                stderr: format!("error: {err}\n"),
            }
        }
    }
}
