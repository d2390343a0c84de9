//! Named commands, looked up at runtime from a static registry.

mod compute;
mod inspect;

use lgpair::mf::{random_sop, ExtOptions};
use lgpair::pairing::{formula, FormulaInput, TraceFormula};
use lgpair::Rational;
use serde_json::Value;

use crate::document::Provenance;
use crate::error::CliError;
use crate::manifest::{Manifest, NamedMorphism, NamedObject};

/// Flags shared by all commands; each command reads the ones it needs.
#[derive(Clone, Debug, Default)]
pub struct Flags {
    pub object: Option<String>,
    pub target: Option<String>,
    pub morphism: Option<String>,
    pub morphism2: Option<String>,
    pub seed: Option<u64>,
    pub truncation: Option<u32>,
    pub formula: Option<String>,
    pub checks: Vec<String>,
    pub trials: Option<usize>,
}

pub struct Context<'a> {
    pub manifest: &'a Manifest,
    pub flags: &'a Flags,
}

impl Context<'_> {
    /// `--object`, or the only object of the manifest.
    pub fn object(&self) -> Result<&NamedObject, CliError> {
        match &self.flags.object {
            Some(name) => Ok(self.manifest.object(name)?),
            None => match self.manifest.objects.as_slice() {
                [only] => Ok(only),
                [] => Err(CliError::Usage("the manifest defines no objects".into())),
                _ => Err(CliError::Usage("--object is required when the manifest defines several objects".into())),
            },
        }
    }

    /// `--target`, defaulting to the source object.
    pub fn target(&self) -> Result<&NamedObject, CliError> {
        match &self.flags.target {
            Some(name) => Ok(self.manifest.object(name)?),
            None => self.object(),
        }
    }

    pub fn morphism(&self, second: bool) -> Result<&NamedMorphism, CliError> {
        let (flag, value) = if second {
            ("--morphism2", &self.flags.morphism2)
        } else {
            ("--morphism", &self.flags.morphism)
        };
        let name = value.as_ref().ok_or_else(|| CliError::Usage(format!("{flag} is required")))?;
        let m = self.manifest.morphism(name)?;
        if let Some(obj) = &self.flags.object {
            if !second && &m.source != obj {
                return Err(CliError::Usage(format!("morphism '{name}' starts at '{}', not '{obj}'", m.source)));
            }
        }
        Ok(m)
    }

    pub fn seed(&self) -> Result<u64, CliError> {
        self.flags
            .seed
            .ok_or_else(|| CliError::Usage("--seed is required for commands that sample a system of parameters".into()))
    }

    pub fn ext_options(&self) -> ExtOptions {
        self.manifest.bounds.ext_options(self.flags.truncation)
    }

    pub fn formula(&self) -> Result<&'static dyn TraceFormula, CliError> {
        let name = self.flags.formula.as_deref().unwrap_or("kapustin-li");
        formula(name).map_err(|e| CliError::Usage(e.to_string()))
    }

    /// A seeded parameter matrix for the manifest potential.
    pub fn sop(&self) -> Result<(u64, Vec<Vec<Rational>>), CliError> {
        let seed = self.seed()?;
        let c = random_sop(&self.manifest.potential, seed, self.manifest.bounds.sop_attempts)?;
        Ok((seed, c))
    }

    /// Formula input, sampling parameters only when the formula needs them.
    pub fn formula_input(&self, f: &dyn TraceFormula, provenance: &mut Provenance) -> Result<FormulaInput, CliError> {
        if !f.needs_parameters() {
            return Ok(FormulaInput::default());
        }
        let (seed, c) = self.sop()?;
        provenance.seed = Some(seed);
        provenance.c = Some(crate::document::rational_rows(&c));
        Ok(FormulaInput { sop: Some(c) })
    }
}

#[derive(Clone, Debug)]
pub struct CommandOutput {
    pub outputs: Value,
    pub provenance: Provenance,
    /// `(failed, total)` when the command reports pass/fail results.
    pub failures: Option<(usize, usize)>,
}

impl CommandOutput {
    pub fn new(outputs: Value) -> Self {
        CommandOutput {
            outputs,
            provenance: Provenance::default(),
            failures: None,
        }
    }

    pub fn with_provenance(outputs: Value, provenance: Provenance) -> Self {
        CommandOutput {
            outputs,
            provenance,
            failures: None,
        }
    }
}

pub trait Command: Send + Sync {
    fn name(&self) -> &'static str;
    fn about(&self) -> &'static str;
    fn run(&self, ctx: &Context<'_>) -> Result<CommandOutput, CliError>;
}

static COMMANDS: &[&dyn Command] = &[
    &inspect::Validate,
    &inspect::Jacobi,
    &inspect::Residue,
    &compute::Trace,
    &compute::Pair,
    &compute::Pretrace,
    &compute::Ext,
    &compute::Gram,
    &compute::Bulk,
    &compute::Selfcheck,
];

pub fn command(name: &str) -> Option<&'static dyn Command> {
    COMMANDS.iter().copied().find(|c| c.name() == name)
}

pub fn commands() -> impl Iterator<Item = &'static dyn Command> {
    COMMANDS.iter().copied()
}
