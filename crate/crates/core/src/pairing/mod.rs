//! Residue pairings on matrix factorisations: supertraces, the
//! Kapustin-Li trace, the pretrace built from a system of parameters, the
//! boundary-bulk map and Gram matrices.

mod formula;
mod jacobi;

use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

use crate::ideals::IdealError;
use crate::linalg::dense_rank;
use crate::mf::{compose, ext_basis, hom_differential, partial_d, sop_is_valid, sop_parameters, ExtOptions, MFMorphism, MatrixFactorisation, MfError};
use crate::poly::Polynomial;
use crate::rational::{factorial, Rational};
use crate::residues::{make_fraction, zeta, DenominatorData, GeneralisedFraction, ResidueContext, ResidueError};
use crate::signs;

pub use formula::{formula, formula_names, FormulaInput, KapustinLi, Pretrace, TraceFormula};
pub use jacobi::{jacobi_algebra, JacobiAlgebra};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum PairingError {
    #[error("expected an endomorphism")]
    NotEndomorphism,
    #[error("expected parity {expected}, found {found}")]
    ParityMismatch { expected: u8, found: u8 },
    #[error("morphism is not closed")]
    NotClosed,
    #[error("invalid system of parameters: {0}")]
    InvalidParameters(String),
    #[error("paired Ext spaces have dimensions {left} and {right}")]
    DimensionMismatch { left: usize, right: usize },
    #[error("unknown trace formula '{0}'")]
    UnknownFormula(String),
    #[error(transparent)]
    Mf(#[from] MfError),
    #[error(transparent)]
    Residue(#[from] ResidueError),
    #[error(transparent)]
    Ideal(#[from] IdealError),
}

/// `tr(block0) - tr(block1)` for even endomorphisms, `0` for odd ones.
pub fn supertrace(f: &MFMorphism) -> Result<Polynomial, PairingError> {
    if !f.is_endomorphism() {
        return Err(PairingError::NotEndomorphism);
    }
    if f.parity() == 1 {
        return Ok(Polynomial::zero(f.ring()));
    }
    Ok(&f.block(0).trace() - &f.block(1).trace())
}

/// `sum_σ sgn(σ) ∂_{σ(1)}(d) ⋯ ∂_{σ(n)}(d)`.
pub fn wedge_power(x: &Arc<MatrixFactorisation>) -> MFMorphism {
    let n = x.nvars();
    let partials: Vec<MFMorphism> = (0..n).map(|i| partial_d(x, i)).collect();
    let mut acc = MFMorphism::zero(x, x, (n % 2) as u8);
    for (perm, sign) in signs::signed_permutations(n) {
        let mut prod = MFMorphism::identity(x);
        for &i in &perm {
            prod = compose(&prod, &partials[i]).expect("endomorphisms compose");
        }
        acc = if sign > 0 { acc.add(&prod) } else { acc.sub(&prod) };
    }
    acc
}

fn jacobian_data(w: &Polynomial) -> Result<Arc<DenominatorData>, PairingError> {
    static CACHE: OnceLock<Mutex<HashMap<Polynomial, Arc<DenominatorData>>>> = OnceLock::new();
    let cache = CACHE.get_or_init(Default::default);
    if let Some(hit) = cache.lock().expect("cache lock").get(w) {
        return Ok(hit.clone());
    }
    let partials: Vec<Polynomial> = (0..w.ring().nvars()).map(|i| w.diff(i).expect("index in range")).collect();
    let data = Arc::new(DenominatorData::new(&partials)?);
    cache.lock().expect("cache lock").insert(w.clone(), data.clone());
    Ok(data)
}

/// Shared `R = S / (W)` context, so denominator caches persist across calls.
pub fn hypersurface_context(w: &Polynomial) -> Arc<ResidueContext> {
    static CACHE: OnceLock<Mutex<HashMap<Polynomial, Arc<ResidueContext>>>> = OnceLock::new();
    let cache = CACHE.get_or_init(Default::default);
    let mut guard = cache.lock().expect("cache lock");
    guard.entry(w.clone()).or_insert_with(|| ResidueContext::hypersurface(w)).clone()
}

fn check_trace_input(psi: &MFMorphism) -> Result<usize, PairingError> {
    if !psi.is_endomorphism() {
        return Err(PairingError::NotEndomorphism);
    }
    let n = psi.source().nvars();
    let expected = (n % 2) as u8;
    if psi.parity() != expected {
        return Err(PairingError::ParityMismatch {
            expected,
            found: psi.parity(),
        });
    }
    if !psi.is_closed() {
        return Err(PairingError::NotClosed);
    }
    Ok(n)
}

/// `(1/n!) (-1)^{(n-1)(n-2)/2} str(ψ ∘ wedge)` before reduction.
fn bulk_polynomial(psi: &MFMorphism, n: usize) -> Result<Polynomial, PairingError> {
    let wedge = wedge_power(psi.source());
    let str = supertrace(&compose(psi, &wedge)?)?;
    let scale = Rational::from_integer(signs::kl_sign(n).into()) / factorial(n);
    Ok(str.scale(&scale))
}

/// `⟨ψ⟩ = (1/n!) (-1)^{(n-1)(n-2)/2} Res[str(ψ ∘ wedge) / ∂_1 W, ..., ∂_n W]`.
pub fn kl_trace(psi: &MFMorphism) -> Result<Rational, PairingError> {
    let n = check_trace_input(psi)?;
    let data = jacobian_data(psi.source().potential())?;
    Ok(data.residue(&bulk_polynomial(psi, n)?))
}

/// `⟨ψ, φ⟩ = ⟨ψ ∘ φ⟩`.
pub fn kl_pair(psi: &MFMorphism, phi: &MFMorphism) -> Result<Rational, PairingError> {
    kl_trace(&compose(psi, phi)?)
}

/// The boundary-bulk image of `ψ`, in normal form modulo the Jacobian ideal.
pub fn boundary_bulk(psi: &MFMorphism) -> Result<Polynomial, PairingError> {
    if !psi.is_endomorphism() {
        return Err(PairingError::NotEndomorphism);
    }
    let n = psi.source().nvars();
    let data = jacobian_data(psi.source().potential())?;
    if psi.parity() as usize != n % 2 {
        return Ok(Polynomial::zero(psi.ring()));
    }
    Ok(data.groebner().normal_form(&bulk_polynomial(psi, n)?))
}

#[derive(Clone, Debug)]
pub struct PretraceResult {
    pub fraction: GeneralisedFraction,
    pub scalar: Rational,
    /// The matrix whose rows rotate the partial derivatives.
    pub c: Vec<Vec<Rational>>,
    /// Block traces of `α λ_1 ⋯ λ_d ∂` on `X^0` and `X^1`.
    pub block_traces: [Polynomial; 2],
}

/// Null-homotopies `λ_i = sum_j C_ij ∂_j(d_X)` for `i < n - 1`.
pub fn sop_homotopies(x: &Arc<MatrixFactorisation>, c: &[Vec<Rational>]) -> Vec<MFMorphism> {
    let n = x.nvars();
    let partials: Vec<MFMorphism> = (0..n).map(|j| partial_d(x, j)).collect();
    c.iter()
        .take(n.saturating_sub(1))
        .map(|row| {
            row.iter()
                .zip(&partials)
                .fold(MFMorphism::zero(x, x, 1), |acc, (cij, l)| acc.add(&l.scale(cij)))
        })
        .collect()
}

/// `⟨⟨α⟩⟩` from the system of parameters given by `C`.
pub fn pretrace(alpha: &MFMorphism, c: &[Vec<Rational>]) -> Result<PretraceResult, PairingError> {
    let x = alpha.source();
    let w = x.potential();
    if !sop_is_valid(w, c) {
        return Err(PairingError::InvalidParameters(
            "C must be invertible and the rotated partials must form a system of parameters together with W".into(),
        ));
    }
    let t = sop_parameters(w, c);
    let lambdas = sop_homotopies(x, c);
    let mut out = pretrace_with(alpha, &t, &lambdas)?;
    out.c = c.to_vec();
    Ok(out)
}

/// `⟨⟨α⟩⟩` with explicit parameters `t` and null-homotopies `λ_i` satisfying
/// `λ_i ∂ + ∂ λ_i = t_i`.
pub fn pretrace_with(alpha: &MFMorphism, t: &[Polynomial], lambdas: &[MFMorphism]) -> Result<PretraceResult, PairingError> {
    let order: Vec<usize> = (0..lambdas.len()).collect();
    pretrace_permuted(alpha, t, lambdas, &order)
}

/// As [`pretrace_with`], but composing `λ_{order[0]} ⋯ λ_{order[d-1]}` while
/// keeping the denominators `t` in their given order.
pub fn pretrace_permuted(
    alpha: &MFMorphism,
    t: &[Polynomial],
    lambdas: &[MFMorphism],
    order: &[usize],
) -> Result<PretraceResult, PairingError> {
    check_trace_input(alpha)?;
    let x = alpha.source();
    let d = t.len();
    if lambdas.len() != d || d + 1 != x.nvars() {
        return Err(PairingError::InvalidParameters(format!(
            "need {} parameters and homotopies, got {} and {}",
            x.nvars() - 1,
            d,
            lambdas.len()
        )));
    }
    let dx = MFMorphism::differential(x);
    for (ti, li) in t.iter().zip(lambdas) {
        let comm = compose(li, &dx)?.add(&compose(&dx, li)?);
        if li.parity() != 1 || comm != MFMorphism::identity(x).scale_poly(ti) {
            return Err(PairingError::InvalidParameters(format!("a homotopy does not contract {ti}")));
        }
    }
    let mut seen = vec![false; d];
    if order.len() != d || order.iter().any(|&i| i >= d || std::mem::replace(&mut seen[i], true)) {
        return Err(PairingError::InvalidParameters(format!("{order:?} is not a permutation of 0..{d}")));
    }
    let mut op = alpha.clone();
    for &i in order {
        op = compose(&op, &lambdas[i])?;
    }
    op = compose(&op, &dx)?;
    let block_traces = [op.block(0).trace(), op.block(1).trace()];
    let numerator = if signs::pretrace_sign(d) < 0 {
        -&block_traces[0]
    } else {
        block_traces[0].clone()
    };
    let ctx = hypersurface_context(x.potential());
    let fraction = make_fraction(&ctx, numerator, t.to_vec())?;
    let scalar = zeta(&fraction);
    Ok(PretraceResult {
        fraction,
        scalar,
        c: Vec::new(),
        block_traces,
    })
}

#[derive(Clone, Debug)]
pub struct GramReport {
    /// `matrix[i][j] = ⟨ψ_i, φ_j⟩` for `ψ_i` in `Ext^{n-p}(Y, X)` and
    /// `φ_j` in `Ext^p(X, Y)`.
    pub matrix: Vec<Vec<Rational>>,
    pub rank: usize,
    pub left: Vec<MFMorphism>,
    pub right: Vec<MFMorphism>,
    pub truncation_degrees: [u32; 2],
}

impl GramReport {
    pub fn dimension(&self) -> usize {
        self.right.len()
    }

    pub fn is_nondegenerate(&self) -> bool {
        self.left.len() == self.right.len() && self.rank == self.right.len()
    }
}

/// Gram matrix of the pairing between `Ext^{n-p}(Y, X)` and `Ext^p(X, Y)`.
pub fn gram_matrix(
    x: &Arc<MatrixFactorisation>,
    y: &Arc<MatrixFactorisation>,
    parity: u8,
    options: &ExtOptions,
    formula: &dyn TraceFormula,
    input: &FormulaInput,
) -> Result<GramReport, PairingError> {
    let n = x.nvars();
    let right = ext_basis(x, y, parity, options)?;
    let left = ext_basis(y, x, ((n as u8 + 2) - parity % 2) % 2, options)?;
    if left.dimension() != right.dimension() {
        return Err(PairingError::DimensionMismatch {
            left: left.dimension(),
            right: right.dimension(),
        });
    }
    let mut matrix = Vec::with_capacity(left.dimension());
    for psi in &left.representatives {
        let mut row = Vec::with_capacity(right.dimension());
        for phi in &right.representatives {
            row.push(formula.trace(&compose(psi, phi)?, input)?);
        }
        matrix.push(row);
    }
    let rank = dense_rank(&matrix);
    Ok(GramReport {
        matrix,
        rank,
        left: left.representatives,
        right: right.representatives,
        truncation_degrees: [left.truncation_degree, right.truncation_degree],
    })
}

/// `D(h)` for use in homotopy-invariance checks.
pub fn boundary_of(h: &MFMorphism) -> MFMorphism {
    hom_differential(h)
}
