//! Commands that evaluate traces and Ext bases, plus the selfcheck suite.

use lgpair::checks::{run_selfcheck, SelfcheckInput};
use lgpair::mf::{compose, ext_basis};
use lgpair::pairing::{boundary_bulk, gram_matrix, jacobi_algebra, kl_trace, pretrace};
use serde_json::{json, Value};

use super::{Command, CommandOutput, Context};
use crate::document::{fraction, morphism, polynomial, rational, rational_matrix, rational_rows, Provenance};
use crate::error::CliError;

pub struct Trace;

impl Command for Trace {
    fn name(&self) -> &'static str {
        "trace"
    }

    fn about(&self) -> &'static str {
        "trace of a closed endomorphism (--morphism, optional --formula)"
    }

    fn run(&self, ctx: &Context<'_>) -> Result<CommandOutput, CliError> {
        let m = ctx.morphism(false)?;
        let f = ctx.formula()?;
        let mut provenance = Provenance::default();
        let input = ctx.formula_input(f, &mut provenance)?;
        let value = f.trace(&m.morphism, &input)?;
        Ok(CommandOutput::with_provenance(
            json!({ "value": rational(&value), "formula": f.name() }),
            provenance,
        ))
    }
}

pub struct Pair;

impl Command for Pair {
    fn name(&self) -> &'static str {
        "pair"
    }

    fn about(&self) -> &'static str {
        "pairing <psi, phi> = trace(psi phi) of --morphism and --morphism2"
    }

    fn run(&self, ctx: &Context<'_>) -> Result<CommandOutput, CliError> {
        let psi = ctx.morphism(false)?;
        let phi = ctx.morphism(true)?;
        let f = ctx.formula()?;
        let mut provenance = Provenance::default();
        let input = ctx.formula_input(f, &mut provenance)?;
        let value = f.trace(&compose(&psi.morphism, &phi.morphism)?, &input)?;
        Ok(CommandOutput::with_provenance(
            json!({ "value": rational(&value), "formula": f.name() }),
            provenance,
        ))
    }
}

pub struct Pretrace;

impl Command for Pretrace {
    fn name(&self) -> &'static str {
        "pretrace"
    }

    fn about(&self) -> &'static str {
        "generalised fraction and scalar of the pretrace (--morphism, --seed)"
    }

    fn run(&self, ctx: &Context<'_>) -> Result<CommandOutput, CliError> {
        let m = ctx.morphism(false)?;
        let (seed, c) = ctx.sop()?;
        let pt = pretrace(&m.morphism, &c)?;
        let provenance = Provenance {
            seed: Some(seed),
            c: Some(rational_rows(&c)),
            ..Provenance::default()
        };
        Ok(CommandOutput::with_provenance(
            json!({
                "fraction": fraction(&pt.fraction),
                "value": rational(&pt.scalar),
                "block_traces": [polynomial(&pt.block_traces[0]), polynomial(&pt.block_traces[1])],
            }),
            provenance,
        ))
    }
}

pub struct Ext;

impl Command for Ext {
    fn name(&self) -> &'static str {
        "ext"
    }

    fn about(&self) -> &'static str {
        "bases of both Ext parities from --object to --target"
    }

    fn run(&self, ctx: &Context<'_>) -> Result<CommandOutput, CliError> {
        let (x, y) = (ctx.object()?, ctx.target()?);
        let opts = ctx.ext_options();
        let mut provenance = Provenance::default();
        let mut parts = Vec::with_capacity(2);
        for p in 0..2u8 {
            let basis = ext_basis(&x.object, &y.object, p, &opts)?;
            provenance.truncation_degrees.push(basis.truncation_degree);
            provenance.ext_history.push(basis.history.clone());
            parts.push(json!({
                "dimension": basis.dimension(),
                "representatives": basis.representatives.iter().map(morphism).collect::<Vec<_>>(),
            }));
        }
        let [even, odd]: [Value; 2] = parts.try_into().expect("two parities");
        Ok(CommandOutput::with_provenance(json!({ "even": even, "odd": odd }), provenance))
    }
}

pub struct Gram;

impl Command for Gram {
    fn name(&self) -> &'static str {
        "gram"
    }

    fn about(&self) -> &'static str {
        "Gram matrices of the pairing between complementary Ext spaces"
    }

    fn run(&self, ctx: &Context<'_>) -> Result<CommandOutput, CliError> {
        let (x, y) = (ctx.object()?, ctx.target()?);
        let opts = ctx.ext_options();
        let f = ctx.formula()?;
        let mut provenance = Provenance::default();
        let input = ctx.formula_input(f, &mut provenance)?;
        let mut parts = Vec::with_capacity(2);
        for p in 0..2u8 {
            let g = gram_matrix(&x.object, &y.object, p, &opts, f, &input)?;
            provenance.truncation_degrees.extend(g.truncation_degrees);
            parts.push(json!({
                "parity": p,
                "dimension": g.dimension(),
                "matrix": rational_matrix(&g.matrix),
                "rank": g.rank,
                "nondegenerate": g.is_nondegenerate(),
            }));
        }
        Ok(CommandOutput::with_provenance(
            json!({ "formula": f.name(), "pairings": parts }),
            provenance,
        ))
    }
}

pub struct Bulk;

impl Command for Bulk {
    fn name(&self) -> &'static str {
        "bulk"
    }

    fn about(&self) -> &'static str {
        "boundary-bulk image of --morphism in the Jacobi algebra"
    }

    fn run(&self, ctx: &Context<'_>) -> Result<CommandOutput, CliError> {
        let m = ctx.morphism(false)?;
        let beta = boundary_bulk(&m.morphism)?;
        let ja = jacobi_algebra(&ctx.manifest.potential)?;
        let trace = if m.morphism.parity() as usize == m.morphism.source().nvars() % 2 {
            Some(rational(&kl_trace(&m.morphism)?))
        } else {
            None
        };
        Ok(CommandOutput::new(json!({
            "bulk": polynomial(&beta),
            "gamma": rational(&ja.gamma_of(&beta)),
            "trace": trace,
        })))
    }
}

pub struct Selfcheck;

impl Command for Selfcheck {
    fn name(&self) -> &'static str {
        "selfcheck"
    }

    fn about(&self) -> &'static str {
        "run the invariant suite on every object (--seed, optional --check)"
    }

    fn run(&self, ctx: &Context<'_>) -> Result<CommandOutput, CliError> {
        let seed = ctx.seed()?;
        let input = SelfcheckInput {
            objects: ctx.manifest.objects.iter().map(|o| o.object.clone()).collect(),
            seed,
            trials: ctx.flags.trials.unwrap_or(ctx.manifest.bounds.selfcheck_trials),
            ext: ctx.ext_options(),
        };
        let names: Vec<&str> = ctx.flags.checks.iter().map(String::as_str).collect();
        let reports = run_selfcheck(&input, &names)?;
        let failed = reports.iter().filter(|r| !r.passed()).count();
        let checks: Vec<Value> = reports
            .iter()
            .map(|r| {
                json!({
                    "name": r.name,
                    "description": r.description,
                    "passed": r.passed(),
                    "cases": r.cases,
                    "failures": r.failures,
                })
            })
            .collect();
        Ok(CommandOutput {
            outputs: json!({ "passed": failed == 0, "checks": checks }),
            provenance: Provenance {
                seed: Some(seed),
                ..Provenance::default()
            },
            failures: Some((failed, reports.len())),
        })
    }
}
