//! Interchangeable trace formulas, selected by name at runtime.

use crate::mf::MFMorphism;
use crate::rational::Rational;

use super::{kl_trace, pretrace, PairingError};

/// Extra data a formula may need beyond the endomorphism itself.
#[derive(Clone, Debug, Default)]
pub struct FormulaInput {
    /// Rotation of the partial derivatives defining the system of parameters.
    pub sop: Option<Vec<Vec<Rational>>>,
}

pub trait TraceFormula: Send + Sync {
    fn name(&self) -> &'static str;

    /// Whether [`FormulaInput::sop`] must be set.
    fn needs_parameters(&self) -> bool {
        false
    }

    fn trace(&self, alpha: &MFMorphism, input: &FormulaInput) -> Result<Rational, PairingError>;
}

/// Residue over the Jacobian ideal of the supertrace against the wedge power.
pub struct KapustinLi;

impl TraceFormula for KapustinLi {
    fn name(&self) -> &'static str {
        "kapustin-li"
    }

    fn trace(&self, alpha: &MFMorphism, _input: &FormulaInput) -> Result<Rational, PairingError> {
        kl_trace(alpha)
    }
}

/// `ζ` of the generalised fraction built from a system of parameters.
pub struct Pretrace;

impl TraceFormula for Pretrace {
    fn name(&self) -> &'static str {
        "pretrace"
    }

    fn needs_parameters(&self) -> bool {
        true
    }

    fn trace(&self, alpha: &MFMorphism, input: &FormulaInput) -> Result<Rational, PairingError> {
        let c = input
            .sop
            .as_ref()
            .ok_or_else(|| PairingError::InvalidParameters("the pretrace formula needs a parameter matrix".into()))?;
        Ok(pretrace(alpha, c)?.scalar)
    }
}

static FORMULAS: &[&dyn TraceFormula] = &[&KapustinLi, &Pretrace];

pub fn formula(name: &str) -> Result<&'static dyn TraceFormula, PairingError> {
    FORMULAS
        .iter()
        .copied()
        .find(|f| f.name() == name)
        .ok_or_else(|| PairingError::UnknownFormula(name.to_string()))
}

pub fn formula_names() -> impl Iterator<Item = &'static str> {
    FORMULAS.iter().map(|f| f.name())
}
