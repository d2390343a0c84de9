//! The selfcheck suite: named invariant checks run on randomized inputs
//! built from a set of matrix factorisations.

use std::sync::Arc;

use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::mf::{compose, ext_basis, hom_differential, partial_d, random_sop, sop_parameters, ExtBasis, ExtOptions, MFMorphism, MatrixFactorisation};
use crate::pairing::{
    boundary_bulk, jacobi_algebra, kl_pair, kl_trace, pretrace, pretrace_permuted, pretrace_with, sop_homotopies, PairingError,
};
use crate::random::{random_combination, random_morphism};
use crate::rational::Rational;
use crate::residues::{fraction_equal, fraction_is_zero};
use crate::signs;

/// Inputs shared by every check.
#[derive(Clone, Debug)]
pub struct SelfcheckInput {
    pub objects: Vec<Arc<MatrixFactorisation>>,
    pub seed: u64,
    /// Randomized cases per object.
    pub trials: usize,
    pub ext: ExtOptions,
}

/// One object with its endomorphism Ext bases and two parameter choices.
#[derive(Clone, Debug)]
pub struct Prepared {
    pub object: Arc<MatrixFactorisation>,
    pub ext: [ExtBasis; 2],
    pub sop: [Vec<Vec<Rational>>; 2],
}

impl Prepared {
    pub fn nvars(&self) -> usize {
        self.object.nvars()
    }

    /// Parity of the classes `kl_trace` accepts.
    pub fn trace_parity(&self) -> u8 {
        (self.nvars() % 2) as u8
    }

    /// A random class of the given parity plus a random boundary.
    pub fn random_closed(&self, parity: u8, rng: &mut ChaCha8Rng) -> MFMorphism {
        let x = &self.object;
        let zero = MFMorphism::zero(x, x, parity);
        let class = random_combination(&self.ext[parity as usize % 2].representatives, &zero, rng);
        let h = random_morphism(x, x, parity + 1, 1, rng);
        class.add(&hom_differential(&h))
    }
}

#[derive(Clone, Debug)]
pub struct SelfcheckData {
    pub seed: u64,
    pub trials: usize,
    pub objects: Vec<Prepared>,
}

impl SelfcheckData {
    pub fn prepare(input: &SelfcheckInput) -> Result<Self, PairingError> {
        let mut objects = Vec::with_capacity(input.objects.len());
        for (k, x) in input.objects.iter().enumerate() {
            let ext = [ext_basis(x, x, 0, &input.ext)?, ext_basis(x, x, 1, &input.ext)?];
            let base = input.seed.wrapping_mul(0x9e37_79b9).wrapping_add(k as u64);
            let first = random_sop(x.potential(), base, 200)?;
            let second = random_sop(x.potential(), base ^ 0x5bd1_e995, 200)?;
            objects.push(Prepared {
                object: x.clone(),
                ext,
                sop: [first, second],
            });
        }
        Ok(SelfcheckData {
            seed: input.seed,
            trials: input.trials,
            objects,
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CheckReport {
    pub name: &'static str,
    pub description: &'static str,
    pub cases: usize,
    pub failures: Vec<String>,
}

impl CheckReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

/// Collects cases and failures for one check.
pub struct Tally {
    cases: usize,
    failures: Vec<String>,
}

impl Tally {
    fn new() -> Self {
        Tally { cases: 0, failures: Vec::new() }
    }

    pub fn case(&mut self, label: impl FnOnce() -> String, outcome: Result<bool, PairingError>) {
        self.cases += 1;
        match outcome {
            Ok(true) => {}
            Ok(false) => self.failures.push(label()),
            Err(e) => self.failures.push(format!("{}: {e}", label())),
        }
    }
}

pub trait Check: Send + Sync {
    fn name(&self) -> &'static str;
    fn description(&self) -> &'static str;
    fn run_on(&self, obj: &Prepared, index: usize, trials: usize, rng: &mut ChaCha8Rng, tally: &mut Tally);

    fn run(&self, data: &SelfcheckData) -> CheckReport {
        let mut tally = Tally::new();
        for (k, obj) in data.objects.iter().enumerate() {
            let mut rng = ChaCha8Rng::seed_from_u64(data.seed ^ name_hash(self.name()) ^ ((k as u64) << 32));
            self.run_on(obj, k, data.trials, &mut rng, &mut tally);
        }
        CheckReport {
            name: self.name(),
            description: self.description(),
            cases: tally.cases,
            failures: tally.failures,
        }
    }
}

fn name_hash(name: &str) -> u64 {
    name.bytes().fold(0xcbf2_9ce4_8422_2325u64, |h, b| (h ^ b as u64).wrapping_mul(0x100_0000_01b3))
}

fn signed(sign: i8, r: Rational) -> Rational {
    if sign < 0 {
        -r
    } else {
        r
    }
}

struct Cyclicity;

impl Check for Cyclicity {
    fn name(&self) -> &'static str {
        "cyclicity"
    }

    fn description(&self) -> &'static str {
        "<psi, phi> = (-1)^{|psi||phi|} <phi, psi>"
    }

    fn run_on(&self, obj: &Prepared, k: usize, trials: usize, rng: &mut ChaCha8Rng, tally: &mut Tally) {
        let n = obj.nvars() as u8;
        for trial in 0..trials {
            let p: u8 = rng.gen_range(0..2);
            let q = (n + 2 - p) % 2;
            let psi = obj.random_closed(p, rng);
            let phi = obj.random_closed(q, rng);
            let outcome = (|| {
                let lhs = kl_pair(&psi, &phi)?;
                let rhs = kl_pair(&phi, &psi)?;
                Ok(lhs == signed(signs::parity_sign((p * q) as usize), rhs))
            })();
            tally.case(|| format!("object {k}, trial {trial}, parities ({p}, {q})"), outcome);
        }
    }
}

struct ShiftSign;

impl Check for ShiftSign {
    fn name(&self) -> &'static str {
        "shift-sign"
    }

    fn description(&self) -> &'static str {
        "<psi>_X = (-1)^(n-1) <psi>_X[1]"
    }

    fn run_on(&self, obj: &Prepared, k: usize, trials: usize, rng: &mut ChaCha8Rng, tally: &mut Tally) {
        let sign = signs::parity_sign(obj.nvars() - 1);
        for trial in 0..trials {
            let psi = obj.random_closed(obj.trace_parity(), rng);
            let outcome = (|| Ok(kl_trace(&psi)? == signed(sign, kl_trace(&psi.shift_endomorphism())?)))();
            tally.case(|| format!("object {k}, trial {trial}"), outcome);
        }
    }
}

struct HomotopyInvariance;

impl Check for HomotopyInvariance {
    fn name(&self) -> &'static str {
        "homotopy-invariance"
    }

    fn description(&self) -> &'static str {
        "<D(h)> = 0 and the pretrace fraction of D(h) vanishes"
    }

    fn run_on(&self, obj: &Prepared, k: usize, trials: usize, rng: &mut ChaCha8Rng, tally: &mut Tally) {
        let x = &obj.object;
        for trial in 0..trials {
            let h = random_morphism(x, x, obj.trace_parity() + 1, 2, rng);
            let b = hom_differential(&h);
            let outcome = (|| {
                let kl = kl_trace(&b)?;
                let pt = pretrace(&b, &obj.sop[0])?;
                Ok(kl == Rational::from_integer(0.into()) && fraction_is_zero(&pt.fraction))
            })();
            tally.case(|| format!("object {k}, trial {trial}"), outcome);
        }
    }
}

struct LambdaPermutation;

impl Check for LambdaPermutation {
    fn name(&self) -> &'static str {
        "lambda-permutation"
    }

    fn description(&self) -> &'static str {
        "reordering the null-homotopies multiplies the pretrace fraction by the sign of the permutation"
    }

    fn run_on(&self, obj: &Prepared, k: usize, trials: usize, rng: &mut ChaCha8Rng, tally: &mut Tally) {
        let x = &obj.object;
        let c = &obj.sop[0];
        let t = sop_parameters(x.potential(), c);
        let lambdas = sop_homotopies(x, c);
        for trial in 0..trials {
            let alpha = obj.random_closed(obj.trace_parity(), rng);
            for (perm, sign) in signs::signed_permutations(t.len()) {
                let outcome = (|| {
                    let base = pretrace_with(&alpha, &t, &lambdas)?.fraction;
                    let moved = pretrace_permuted(&alpha, &t, &lambdas, &perm)?.fraction;
                    let expected = base.with_numerator(signed_poly(sign, base.numerator()));
                    Ok(fraction_equal(&moved, &expected)?)
                })();
                tally.case(|| format!("object {k}, trial {trial}, order {perm:?}"), outcome);
            }
        }
    }
}

fn signed_poly(sign: i8, p: &crate::poly::Polynomial) -> crate::poly::Polynomial {
    if sign < 0 {
        -p
    } else {
        p.clone()
    }
}

struct ChoiceIndependence;

impl Check for ChoiceIndependence {
    fn name(&self) -> &'static str {
        "choice-independence"
    }

    fn description(&self) -> &'static str {
        "pretrace scalars agree for two seeded parameter matrices and under lambda_i -> lambda_i + D(eta)"
    }

    fn run_on(&self, obj: &Prepared, k: usize, trials: usize, rng: &mut ChaCha8Rng, tally: &mut Tally) {
        let x = &obj.object;
        let c = &obj.sop[0];
        let t = sop_parameters(x.potential(), c);
        let lambdas = sop_homotopies(x, c);
        for trial in 0..trials {
            let alpha = obj.random_closed(obj.trace_parity(), rng);
            let moved: Vec<MFMorphism> = lambdas
                .iter()
                .map(|l| l.add(&hom_differential(&random_morphism(x, x, 0, 1, rng))))
                .collect();
            let outcome = (|| {
                let first = pretrace(&alpha, &obj.sop[0])?;
                let second = pretrace(&alpha, &obj.sop[1])?;
                let shifted = pretrace_with(&alpha, &t, &moved)?;
                Ok(first.scalar == second.scalar && fraction_equal(&first.fraction, &shifted.fraction)?)
            })();
            tally.case(|| format!("object {k}, trial {trial}"), outcome);
        }
    }
}

struct DegreeIndependence;

impl Check for DegreeIndependence {
    fn name(&self) -> &'static str {
        "degree-independence"
    }

    fn description(&self) -> &'static str {
        "the two block traces of the pretrace operator agree up to the grading sign modulo (W, t)"
    }

    fn run_on(&self, obj: &Prepared, k: usize, trials: usize, rng: &mut ChaCha8Rng, tally: &mut Tally) {
        for trial in 0..trials {
            let alpha = obj.random_closed(obj.trace_parity(), rng);
            let outcome = (|| {
                let pt = pretrace(&alpha, &obj.sop[0])?;
                let [b0, b1] = &pt.block_traces;
                let frac = pt.fraction.with_numerator(b0 + b1);
                Ok(fraction_is_zero(&frac))
            })();
            tally.case(|| format!("object {k}, trial {trial}"), outcome);
        }
    }
}

struct FormulaEquivalence;

impl Check for FormulaEquivalence {
    fn name(&self) -> &'static str {
        "formula-equivalence"
    }

    fn description(&self) -> &'static str {
        "zeta of the pretrace equals the Kapustin-Li trace"
    }

    fn run_on(&self, obj: &Prepared, k: usize, trials: usize, rng: &mut ChaCha8Rng, tally: &mut Tally) {
        let p = obj.trace_parity();
        let mut inputs: Vec<MFMorphism> = obj.ext[p as usize].representatives.clone();
        inputs.extend((0..trials).map(|_| obj.random_closed(p, rng)));
        for (i, alpha) in inputs.iter().enumerate() {
            for (s, c) in obj.sop.iter().enumerate() {
                let outcome = (|| Ok(pretrace(alpha, c)?.scalar == kl_trace(alpha)?))();
                tally.case(|| format!("object {k}, input {i}, parameters {s}"), outcome);
            }
        }
    }
}

struct BulkFactorisation;

impl Check for BulkFactorisation {
    fn name(&self) -> &'static str {
        "bulk-factorisation"
    }

    fn description(&self) -> &'static str {
        "<psi> = gamma(boundary_bulk(psi))"
    }

    fn run_on(&self, obj: &Prepared, k: usize, trials: usize, rng: &mut ChaCha8Rng, tally: &mut Tally) {
        let p = obj.trace_parity();
        let mut inputs: Vec<MFMorphism> = obj.ext[p as usize].representatives.clone();
        inputs.extend((0..trials).map(|_| obj.random_closed(p, rng)));
        let ja = match jacobi_algebra(obj.object.potential()) {
            Ok(ja) => ja,
            Err(e) => {
                tally.case(|| format!("object {k}: Jacobi algebra"), Err(e));
                return;
            }
        };
        for (i, psi) in inputs.iter().enumerate() {
            let outcome = (|| Ok(kl_trace(psi)? == ja.gamma_of(&boundary_bulk(psi)?)))();
            tally.case(|| format!("object {k}, input {i}"), outcome);
        }
    }
}

struct Frobenius;

impl Check for Frobenius {
    fn name(&self) -> &'static str {
        "frobenius"
    }

    fn description(&self) -> &'static str {
        "the residue pairing on the Jacobi algebra has full rank"
    }

    fn run_on(&self, obj: &Prepared, k: usize, _trials: usize, _rng: &mut ChaCha8Rng, tally: &mut Tally) {
        let outcome = jacobi_algebra(obj.object.potential()).map(|ja| ja.is_frobenius());
        tally.case(|| format!("object {k}"), outcome);
    }
}

struct Leibniz;

impl Check for Leibniz {
    fn name(&self) -> &'static str {
        "leibniz"
    }

    fn description(&self) -> &'static str {
        "D is a graded derivation and d(d_i) + (d_i)d = (d_i W) id"
    }

    fn run_on(&self, obj: &Prepared, k: usize, trials: usize, rng: &mut ChaCha8Rng, tally: &mut Tally) {
        let x = &obj.object;
        let d = MFMorphism::differential(x);
        for i in 0..x.nvars() {
            let li = partial_d(x, i);
            let outcome = (|| {
                let comm = compose(&li, &d)?.add(&compose(&d, &li)?);
                let di = x.potential().diff(i).expect("index in range");
                Ok(comm == MFMorphism::identity(x).scale_poly(&di))
            })();
            tally.case(|| format!("object {k}, variable {i}"), outcome);
        }
        for trial in 0..trials {
            let (p, q): (u8, u8) = (rng.gen_range(0..2), rng.gen_range(0..2));
            let f = random_morphism(x, x, p, 2, rng);
            let g = random_morphism(x, x, q, 2, rng);
            let outcome = (|| {
                let lhs = hom_differential(&compose(&g, &f)?);
                let right = compose(&g, &hom_differential(&f))?;
                let right = if q == 1 { right.neg() } else { right };
                Ok(lhs == compose(&hom_differential(&g), &f)?.add(&right))
            })();
            tally.case(|| format!("object {k}, trial {trial}, parities ({q}, {p})"), outcome);
        }
    }
}

static CHECKS: &[&dyn Check] = &[
    &Cyclicity,
    &ShiftSign,
    &HomotopyInvariance,
    &LambdaPermutation,
    &ChoiceIndependence,
    &DegreeIndependence,
    &FormulaEquivalence,
    &BulkFactorisation,
    &Frobenius,
    &Leibniz,
];

pub fn check_names() -> impl Iterator<Item = &'static str> {
    CHECKS.iter().map(|c| c.name())
}

pub fn check(name: &str) -> Option<&'static dyn Check> {
    CHECKS.iter().copied().find(|c| c.name() == name)
}

/// Runs the named checks (all of them when `names` is empty).
pub fn run_selfcheck(input: &SelfcheckInput, names: &[&str]) -> Result<Vec<CheckReport>, SelfcheckError> {
    let chosen: Vec<&dyn Check> = if names.is_empty() {
        CHECKS.to_vec()
    } else {
        names
            .iter()
            .map(|n| check(n).ok_or_else(|| SelfcheckError::UnknownCheck(n.to_string())))
            .collect::<Result<_, _>>()?
    };
    let data = SelfcheckData::prepare(input)?;
    Ok(chosen.iter().map(|c| c.run(&data)).collect())
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum SelfcheckError {
    #[error("unknown check '{0}'")]
    UnknownCheck(String),
    #[error(transparent)]
    Pairing(#[from] PairingError),
}
