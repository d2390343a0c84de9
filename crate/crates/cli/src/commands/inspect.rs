//! Commands that read the manifest without sampling.

use lgpair::pairing::jacobi_algebra;
use lgpair::random::monomials_up_to;
use lgpair::residues::residue_symbol;
use lgpair::{Polynomial, Rational};
use num_traits::One;
use serde_json::{json, Map, Value};

use super::{Command, CommandOutput, Context};
use crate::document::{polynomial, rational};
use crate::error::CliError;

pub struct Validate;

impl Command for Validate {
    fn name(&self) -> &'static str {
        "validate"
    }

    fn about(&self) -> &'static str {
        "check every object factorises the potential and report shapes"
    }

    fn run(&self, ctx: &Context<'_>) -> Result<CommandOutput, CliError> {
        let m = ctx.manifest;
        let objects: Vec<Value> = m
            .objects
            .iter()
            .map(|o| {
                json!({
                    "name": o.name,
                    "ranks": [o.object.rank(0), o.object.rank(1)],
                    "max_degree": o.object.max_degree(),
                })
            })
            .collect();
        let morphisms: Vec<Value> = m
            .morphisms
            .iter()
            .map(|f| {
                json!({
                    "name": f.name,
                    "source": f.source,
                    "target": f.target,
                    "parity": f.morphism.parity(),
                    "closed": f.morphism.is_closed(),
                })
            })
            .collect();
        Ok(CommandOutput::new(json!({
            "valid": true,
            "ring": m.ring.names(),
            "potential": polynomial(&m.potential),
            "objects": objects,
            "morphisms": morphisms,
        })))
    }
}

pub struct Jacobi;

impl Command for Jacobi {
    fn name(&self) -> &'static str {
        "jacobi"
    }

    fn about(&self) -> &'static str {
        "Milnor number, monomial basis and residue functional of the Jacobi algebra"
    }

    fn run(&self, ctx: &Context<'_>) -> Result<CommandOutput, CliError> {
        let ja = jacobi_algebra(&ctx.manifest.potential)?;
        let ring = ctx.manifest.ring.clone();
        let names: Vec<String> = ja
            .monomials()
            .iter()
            .map(|m| Polynomial::term(&ring, Rational::one(), m.clone()).to_string())
            .collect();
        // every monomial up to one degree above the top of the basis
        let top = ja.quotient.top_degree() + 1;
        let gamma: Map<String, Value> = monomials_up_to(ring.nvars(), top)
            .into_iter()
            .map(|m| {
                let p = Polynomial::term(&ring, Rational::one(), m);
                (p.to_string(), rational(&ja.gamma_of(&p)))
            })
            .collect();
        Ok(CommandOutput::new(json!({
            "milnor": ja.dimension(),
            "basis": names,
            "gamma": gamma,
            "gram_rank": ja.rank,
            "frobenius": ja.is_frobenius(),
        })))
    }
}

pub struct Residue;

impl Command for Residue {
    fn name(&self) -> &'static str {
        "residue"
    }

    fn about(&self) -> &'static str {
        "evaluate the residue symbols listed in the manifest"
    }

    fn run(&self, ctx: &Context<'_>) -> Result<CommandOutput, CliError> {
        if ctx.manifest.residues.is_empty() {
            return Err(CliError::Usage("the manifest lists no residues".into()));
        }
        let mut out = Vec::with_capacity(ctx.manifest.residues.len());
        for q in &ctx.manifest.residues {
            let value = residue_symbol(&q.numerator, &q.denominators)?;
            out.push(json!({
                "numerator": polynomial(&q.numerator),
                "denominators": q.denominators.iter().map(polynomial).collect::<Vec<_>>(),
                "value": rational(&value),
            }));
        }
        Ok(CommandOutput::new(json!({ "residues": out })))
    }
}
