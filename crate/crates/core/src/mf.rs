//! Matrix factorisations and their graded morphisms.
//!
//! A factorisation `X = (X^0 ⊕ X^1, d)` is stored by its two blocks
//! `d0: X^0 -> X^1` and `d1: X^1 -> X^0`. A morphism of parity `p` from `X`
//! to `Y` has `block[i]: X^i -> Y^{i + p}`, so even morphisms are
//! `(X^0 -> Y^0, X^1 -> Y^1)` and odd ones `(X^0 -> Y^1, X^1 -> Y^0)`.

use std::collections::HashMap;
use std::sync::Arc;

use num_traits::Zero;
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::ideals::{groebner_basis, quotient_basis, IdealError};
use crate::linalg::{determinant, Echelon, Insertion, SparseVec};
use crate::matrix::PolyMatrix;
use crate::poly::{monomials_up_to, Monomial, Polynomial, Ring};
use crate::rational::{int, Rational};
use crate::residues::DenominatorData;
use crate::signs;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum MfError {
    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),
    #[error("{identity} fails at entry ({row}, {col})")]
    NotAFactorisation { identity: &'static str, row: usize, col: usize },
    #[error("morphisms do not compose: {0}")]
    ObjectMismatch(String),
    #[error("expected parity {expected}, found {found}")]
    ParityMismatch { expected: u8, found: u8 },
    #[error("Ext dimension did not stabilise up to truncation {last_truncation} (dimensions {history:?})")]
    NoStabilization { last_truncation: u32, history: Vec<(u32, usize)> },
    #[error("no valid system of parameters in {attempts} samples (entry bound reached {bound})")]
    SearchExhausted { attempts: usize, bound: i64 },
    #[error("the Jacobian ideal is not zero-dimensional: {0}")]
    Jacobian(#[from] IdealError),
}

#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct MatrixFactorisation {
    w: Polynomial,
    d: [PolyMatrix; 2],
}

impl MatrixFactorisation {
    /// Validates `d1 d0 = W` and `d0 d1 = W`, naming the first failing entry.
    pub fn new(w: Polynomial, d0: PolyMatrix, d1: PolyMatrix) -> Result<Self, MfError> {
        let x = MatrixFactorisation { w, d: [d0, d1] };
        x.check()?;
        Ok(x)
    }

    fn check(&self) -> Result<(), MfError> {
        let [d0, d1] = &self.d;
        if d0.rows() != d1.cols() || d0.cols() != d1.rows() {
            return Err(MfError::ShapeMismatch(format!(
                "d0 is {:?} but d1 is {:?}",
                d0.shape(),
                d1.shape()
            )));
        }
        for (identity, prod) in [("d1*d0 = W*I", d1.mul(d0)), ("d0*d1 = W*I", d0.mul(d1))] {
            for r in 0..prod.rows() {
                for c in 0..prod.cols() {
                    let want = if r == c { self.w.clone() } else { Polynomial::zero(self.ring()) };
                    if prod.get(r, c) != &want {
                        return Err(MfError::NotAFactorisation { identity, row: r, col: c });
                    }
                }
            }
        }
        Ok(())
    }

    pub fn ring(&self) -> &Arc<Ring> {
        self.w.ring()
    }

    pub fn potential(&self) -> &Polynomial {
        &self.w
    }

    /// `d0` for `i = 0` and `d1` for `i = 1`.
    pub fn d(&self, i: usize) -> &PolyMatrix {
        &self.d[i % 2]
    }

    pub fn rank(&self, i: usize) -> usize {
        self.d[i % 2].cols()
    }

    pub fn nvars(&self) -> usize {
        self.ring().nvars()
    }

    pub fn max_degree(&self) -> u32 {
        self.d[0].max_degree().max(self.d[1].max_degree())
    }
}

/// True iff both composites equal `W` times the identity.
pub fn validate_mf(x: &MatrixFactorisation) -> Result<bool, MfError> {
    match x.check() {
        Ok(()) => Ok(true),
        Err(MfError::NotAFactorisation { .. }) => Ok(false),
        Err(e) => Err(e),
    }
}

/// `X[1]`: gradings swapped and the differential negated.
pub fn shift_mf(x: &MatrixFactorisation) -> MatrixFactorisation {
    MatrixFactorisation {
        w: x.w.clone(),
        d: [x.d[1].neg(), x.d[0].neg()],
    }
}

pub fn direct_sum(x: &MatrixFactorisation, y: &MatrixFactorisation) -> Result<MatrixFactorisation, MfError> {
    if x.w != y.w {
        return Err(MfError::ObjectMismatch("direct sum of factorisations of different potentials".into()));
    }
    let ring = x.ring();
    let block = |a: &PolyMatrix, b: &PolyMatrix| {
        PolyMatrix::block2(
            a,
            &PolyMatrix::zero(ring, a.rows(), b.cols()),
            &PolyMatrix::zero(ring, b.rows(), a.cols()),
            b,
        )
    };
    Ok(MatrixFactorisation {
        w: x.w.clone(),
        d: [block(&x.d[0], &y.d[0]), block(&x.d[1], &y.d[1])],
    })
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct MFMorphism {
    source: Arc<MatrixFactorisation>,
    target: Arc<MatrixFactorisation>,
    parity: u8,
    blocks: [PolyMatrix; 2],
}

fn same_object(a: &Arc<MatrixFactorisation>, b: &Arc<MatrixFactorisation>) -> bool {
    Arc::ptr_eq(a, b) || a == b
}

impl MFMorphism {
    pub fn new(
        source: &Arc<MatrixFactorisation>,
        target: &Arc<MatrixFactorisation>,
        parity: u8,
        blocks: [PolyMatrix; 2],
    ) -> Result<Self, MfError> {
        let parity = parity % 2;
        for (i, b) in blocks.iter().enumerate() {
            let want = (target.rank(i + parity as usize), source.rank(i));
            if b.shape() != want {
                return Err(MfError::ShapeMismatch(format!(
                    "block {i} of a parity {parity} morphism has shape {:?}, expected {want:?}",
                    b.shape()
                )));
            }
        }
        Ok(MFMorphism {
            source: source.clone(),
            target: target.clone(),
            parity,
            blocks,
        })
    }

    pub fn zero(source: &Arc<MatrixFactorisation>, target: &Arc<MatrixFactorisation>, parity: u8) -> Self {
        let ring = source.ring();
        let p = (parity % 2) as usize;
        let blocks = [0, 1].map(|i| PolyMatrix::zero(ring, target.rank(i + p), source.rank(i)));
        MFMorphism {
            source: source.clone(),
            target: target.clone(),
            parity: parity % 2,
            blocks,
        }
    }

    pub fn identity(x: &Arc<MatrixFactorisation>) -> Self {
        let ring = x.ring();
        MFMorphism {
            source: x.clone(),
            target: x.clone(),
            parity: 0,
            blocks: [0, 1].map(|i| PolyMatrix::identity(ring, x.rank(i))),
        }
    }

    /// The differential `d_X` as an odd endomorphism.
    pub fn differential(x: &Arc<MatrixFactorisation>) -> Self {
        MFMorphism {
            source: x.clone(),
            target: x.clone(),
            parity: 1,
            blocks: [x.d(0).clone(), x.d(1).clone()],
        }
    }

    pub fn source(&self) -> &Arc<MatrixFactorisation> {
        &self.source
    }

    pub fn target(&self) -> &Arc<MatrixFactorisation> {
        &self.target
    }

    pub fn parity(&self) -> u8 {
        self.parity
    }

    pub fn block(&self, i: usize) -> &PolyMatrix {
        &self.blocks[i % 2]
    }

    pub fn blocks(&self) -> &[PolyMatrix; 2] {
        &self.blocks
    }

    pub fn ring(&self) -> &Arc<Ring> {
        self.source.ring()
    }

    pub fn is_zero(&self) -> bool {
        self.blocks.iter().all(PolyMatrix::is_zero)
    }

    pub fn is_endomorphism(&self) -> bool {
        same_object(&self.source, &self.target)
    }

    pub fn max_degree(&self) -> u32 {
        self.blocks[0].max_degree().max(self.blocks[1].max_degree())
    }

    fn map_blocks(&self, f: impl Fn(&PolyMatrix) -> PolyMatrix) -> Self {
        MFMorphism {
            blocks: [f(&self.blocks[0]), f(&self.blocks[1])],
            ..self.clone()
        }
    }

    pub fn scale(&self, c: &Rational) -> Self {
        self.map_blocks(|b| b.scale(c))
    }

    /// Multiplication by a ring element.
    pub fn scale_poly(&self, g: &Polynomial) -> Self {
        self.map_blocks(|b| b.scale_poly(g))
    }

    pub fn neg(&self) -> Self {
        self.map_blocks(PolyMatrix::neg)
    }

    pub fn try_add(&self, other: &MFMorphism) -> Result<Self, MfError> {
        if !same_object(&self.source, &other.source) || !same_object(&self.target, &other.target) {
            return Err(MfError::ObjectMismatch("sum of morphisms between different objects".into()));
        }
        if self.parity != other.parity {
            return Err(MfError::ParityMismatch {
                expected: self.parity,
                found: other.parity,
            });
        }
        Ok(MFMorphism {
            blocks: [self.blocks[0].add(&other.blocks[0]), self.blocks[1].add(&other.blocks[1])],
            ..self.clone()
        })
    }

    pub fn add(&self, other: &MFMorphism) -> Self {
        self.try_add(other).expect("morphisms of equal type")
    }

    pub fn sub(&self, other: &MFMorphism) -> Self {
        self.add(&other.neg())
    }

    pub fn is_closed(&self) -> bool {
        hom_differential(self).is_zero()
    }

    /// The same map regarded as an endomorphism of `X[1]`.
    pub fn shift_endomorphism(&self) -> Self {
        let s = Arc::new(shift_mf(&self.source));
        let t = if self.is_endomorphism() { s.clone() } else { Arc::new(shift_mf(&self.target)) };
        MFMorphism {
            source: s,
            target: t,
            parity: self.parity,
            blocks: [self.blocks[1].clone(), self.blocks[0].clone()],
        }
    }
}

/// `g ∘ f`, with parities adding.
pub fn compose(g: &MFMorphism, f: &MFMorphism) -> Result<MFMorphism, MfError> {
    if !same_object(&g.source, &f.target) {
        return Err(MfError::ObjectMismatch("source of the outer map is not the target of the inner map".into()));
    }
    let pf = f.parity as usize;
    Ok(MFMorphism {
        source: f.source.clone(),
        target: g.target.clone(),
        parity: (g.parity + f.parity) % 2,
        blocks: [0, 1].map(|i| g.blocks[(i + pf) % 2].mul(&f.blocks[i])),
    })
}

fn comp(g: &MFMorphism, f: &MFMorphism) -> MFMorphism {
    compose(g, f).expect("composable morphisms")
}

/// `D(f) = d_Y ∘ f - (-1)^{|f|} f ∘ d_X`
pub fn hom_differential(f: &MFMorphism) -> MFMorphism {
    let dy = MFMorphism::differential(&f.target);
    let dx = MFMorphism::differential(&f.source);
    let sign = signs::hom_differential_sign(f.parity);
    let right = comp(f, &dx);
    let right = if sign < 0 { right.neg() } else { right };
    comp(&dy, f).add(&right)
}

/// `∂_i(d_X)` as an odd endomorphism.
pub fn partial_d(x: &Arc<MatrixFactorisation>, i: usize) -> MFMorphism {
    MFMorphism {
        source: x.clone(),
        target: x.clone(),
        parity: 1,
        blocks: [0, 1].map(|k| x.d(k).diff(i).expect("variable index in range")),
    }
}

/// Morphisms of one parity with entries truncated in degree, encoded as
/// sparse coordinate vectors over `(entry, monomial)` pairs.
struct Coordinates {
    source: Arc<MatrixFactorisation>,
    target: Arc<MatrixFactorisation>,
    parity: u8,
    /// `(block, row, col)` for every matrix entry, in a fixed order.
    entries: Vec<(usize, usize, usize)>,
    index: HashMap<(usize, Monomial), usize>,
    keys: Vec<(usize, Monomial)>,
}

impl Coordinates {
    fn new(source: &Arc<MatrixFactorisation>, target: &Arc<MatrixFactorisation>, parity: u8) -> Self {
        let mut entries = Vec::new();
        for b in 0..2 {
            for r in 0..target.rank(b + parity as usize) {
                for c in 0..source.rank(b) {
                    entries.push((b, r, c));
                }
            }
        }
        Coordinates {
            source: source.clone(),
            target: target.clone(),
            parity,
            entries,
            index: HashMap::new(),
            keys: Vec::new(),
        }
    }

    fn slot(&mut self, entry: usize, m: &Monomial) -> usize {
        if let Some(&k) = self.index.get(&(entry, m.clone())) {
            return k;
        }
        let k = self.keys.len();
        self.keys.push((entry, m.clone()));
        self.index.insert((entry, m.clone()), k);
        k
    }

    fn encode(&mut self, f: &MFMorphism) -> SparseVec {
        let mut out = std::collections::BTreeMap::new();
        for e in 0..self.entries.len() {
            let (b, r, c) = self.entries[e];
            for (m, coef) in f.blocks[b].get(r, c).terms() {
                out.insert(self.slot(e, m), coef.clone());
            }
        }
        SparseVec::from_map(out)
    }

    /// Elementary morphism with a single entry `m` at `entry`.
    fn elementary(&self, entry: usize, m: &Monomial) -> MFMorphism {
        let (b, r, c) = self.entries[entry];
        let mut f = MFMorphism::zero(&self.source, &self.target, self.parity);
        f.blocks[b].set(r, c, Polynomial::term(self.source.ring(), Rational::from_integer(1.into()), m.clone()));
        f
    }
}

/// A linear space of morphisms with entries of degree at most `bound`,
/// listed low degree first, and their images under `D`.
fn truncated_images(
    domain: &Coordinates,
    codomain: &mut Coordinates,
    bound: u32,
) -> (Vec<(usize, Monomial)>, Vec<SparseVec>) {
    let n = domain.source.nvars();
    let monomials = monomials_up_to(n, bound);
    let unit = Monomial::one(n);
    // D is S-linear, so the image of m * E is m times the image of E
    let base: Vec<MFMorphism> = (0..domain.entries.len())
        .map(|e| hom_differential(&domain.elementary(e, &unit)))
        .collect();
    let mut keys = Vec::new();
    let mut images = Vec::new();
    for m in &monomials {
        for (e, img) in base.iter().enumerate() {
            let shifted = img.map_blocks(|b| b.map(|p| p.mul_monomial(m)));
            images.push(codomain.encode(&shifted));
            keys.push((e, m.clone()));
        }
    }
    (keys, images)
}

/// Searches for `h` with `D(h) = f` and entries of degree at most `degree_bound`.
pub fn null_homotopy_witness(f: &MFMorphism, degree_bound: u32) -> Option<MFMorphism> {
    let hp = (f.parity + 1) % 2;
    let domain = Coordinates::new(&f.source, &f.target, hp);
    let mut codomain = Coordinates::new(&f.source, &f.target, f.parity);
    let (keys, images) = truncated_images(&domain, &mut codomain, degree_bound);
    let mut ech = Echelon::new();
    for (j, img) in images.into_iter().enumerate() {
        ech.insert_tracked(img, SparseVec::unit(j));
    }
    let target = codomain.encode(f);
    let combo = ech.solve(&target)?;
    let mut h = MFMorphism::zero(&f.source, &f.target, hp);
    for (j, c) in combo.entries() {
        let (e, m) = &keys[*j];
        h = h.add(&domain.elementary(*e, m).scale(c));
    }
    debug_assert_eq!(hom_differential(&h), *f);
    Some(h)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExtOptions {
    /// First truncation degree; defaults to the top degree of the Jacobi
    /// algebra plus the largest entry degree of the differentials.
    pub start: Option<u32>,
    /// How many truncation degrees beyond the start to try.
    pub max_steps: u32,
}

impl Default for ExtOptions {
    fn default() -> Self {
        ExtOptions { start: None, max_steps: 6 }
    }
}

#[derive(Clone, Debug)]
pub struct ExtBasis {
    pub source: Arc<MatrixFactorisation>,
    pub target: Arc<MatrixFactorisation>,
    pub parity: u8,
    pub representatives: Vec<MFMorphism>,
    pub truncation_degree: u32,
    pub boundary_degree: u32,
    /// `(truncation, dimension)` for every degree tried.
    pub history: Vec<(u32, usize)>,
}

impl ExtBasis {
    pub fn dimension(&self) -> usize {
        self.representatives.len()
    }
}

struct Truncation {
    reps: Vec<MFMorphism>,
}

fn ext_at(
    x: &Arc<MatrixFactorisation>,
    y: &Arc<MatrixFactorisation>,
    parity: u8,
    n_trunc: u32,
    m_trunc: u32,
    coords: &mut Coordinates,
) -> Truncation {
    let hp = (parity + 1) % 2;
    let cocycle_domain = Coordinates::new(x, y, parity);
    let mut cocycle_target = Coordinates::new(x, y, hp);
    let (keys, images) = truncated_images(&cocycle_domain, &mut cocycle_target, n_trunc);
    let mut closed = Vec::new();
    let mut ech = Echelon::new();
    for (j, img) in images.into_iter().enumerate() {
        if let Insertion::Dependent(combo) = ech.insert_tracked(img, SparseVec::unit(j)) {
            let mut f = MFMorphism::zero(x, y, parity);
            for (k, c) in combo.entries() {
                let (e, m) = &keys[*k];
                f = f.add(&cocycle_domain.elementary(*e, m).scale(c));
            }
            closed.push(f);
        }
    }
    let boundary_domain = Coordinates::new(x, y, hp);
    let (_, boundaries) = truncated_images(&boundary_domain, coords, m_trunc);
    let mut span = Echelon::new();
    for b in boundaries {
        span.insert(b);
    }
    let mut reps = Vec::new();
    for f in closed {
        let v = coords.encode(&f);
        if let Insertion::Independent(_) = span.insert(v) {
            reps.push(f);
        }
    }
    Truncation { reps }
}

fn independent_modulo(reps: &[MFMorphism], boundaries: Vec<SparseVec>, coords: &mut Coordinates) -> bool {
    let mut span = Echelon::new();
    for b in boundaries {
        span.insert(b);
    }
    reps.iter().all(|f| {
        let v = coords.encode(f);
        matches!(span.insert(v), Insertion::Independent(_))
    })
}

/// Top degree of the standard monomials of the Jacobian ideal.
pub fn jacobi_top_degree(w: &Polynomial) -> Result<u32, MfError> {
    let n = w.ring().nvars();
    let partials: Vec<Polynomial> = (0..n).map(|i| w.diff(i).expect("index in range")).collect();
    let gb = groebner_basis(&partials)?;
    Ok(quotient_basis(&gb)?.top_degree())
}

/// Basis of closed morphisms modulo null-homotopic ones, by raising a
/// truncation degree until the dimension is stable for two consecutive
/// degrees and the representatives stay independent one degree later.
pub fn ext_basis(
    x: &Arc<MatrixFactorisation>,
    y: &Arc<MatrixFactorisation>,
    parity: u8,
    options: &ExtOptions,
) -> Result<ExtBasis, MfError> {
    if x.potential() != y.potential() {
        return Err(MfError::ObjectMismatch("Ext between factorisations of different potentials".into()));
    }
    let parity = parity % 2;
    let dmax = x.max_degree().max(y.max_degree());
    let start = match options.start {
        Some(s) => s,
        None => (jacobi_top_degree(x.potential())? + dmax).max(1),
    };
    let mut history = Vec::new();
    let mut prev: Option<(u32, Truncation)> = None;
    for n_trunc in start..=start + options.max_steps {
        let m_trunc = n_trunc + dmax;
        let mut coords = Coordinates::new(x, y, parity);
        let here = ext_at(x, y, parity, n_trunc, m_trunc, &mut coords);
        history.push((n_trunc, here.reps.len()));
        if let Some((n_prev, before)) = prev.take() {
            if before.reps.len() == here.reps.len() {
                let boundary_domain = Coordinates::new(x, y, (parity + 1) % 2);
                let (_, boundaries) = truncated_images(&boundary_domain, &mut coords, m_trunc);
                if independent_modulo(&before.reps, boundaries, &mut coords) {
                    return Ok(ExtBasis {
                        source: x.clone(),
                        target: y.clone(),
                        parity,
                        representatives: before.reps,
                        truncation_degree: n_prev,
                        boundary_degree: n_prev + dmax,
                        history,
                    });
                }
            }
        }
        prev = Some((n_trunc, here));
    }
    Err(MfError::NoStabilization {
        last_truncation: start + options.max_steps,
        history,
    })
}

/// Whether `t_i = sum_j C_ij ∂_j W` for `i < n - 1` together with `W`
/// is zero-dimensional at the origin, and `C` is invertible.
pub fn sop_is_valid(w: &Polynomial, c: &[Vec<Rational>]) -> bool {
    let n = w.ring().nvars();
    if c.len() != n || c.iter().any(|row| row.len() != n) || determinant(c).is_zero() {
        return false;
    }
    let t = sop_parameters(w, c);
    let mut gens = vec![w.clone()];
    gens.extend(t);
    DenominatorData::new(&gens).is_ok()
}

/// The first `n - 1` rotated partials `t_i = sum_j C_ij ∂_j W`.
pub fn sop_parameters(w: &Polynomial, c: &[Vec<Rational>]) -> Vec<Polynomial> {
    let n = w.ring().nvars();
    let partials: Vec<Polynomial> = (0..n).map(|j| w.diff(j).expect("index in range")).collect();
    c.iter()
        .take(n.saturating_sub(1))
        .map(|row| {
            row.iter()
                .zip(&partials)
                .fold(Polynomial::zero(w.ring()), |acc, (cij, dj)| &acc + &dj.scale(cij))
        })
        .collect()
}

/// Seeded search for an invertible integer matrix whose rotated partials
/// form a system of parameters of `S / (W)`. Entries are drawn from
/// `[-B, B]` with `B` doubling after each failed sample.
pub fn random_sop(w: &Polynomial, seed: u64, attempts: usize) -> Result<Vec<Vec<Rational>>, MfError> {
    let n = w.ring().nvars();
    let partials: Vec<Polynomial> = (0..n).map(|j| w.diff(j).expect("index in range")).collect();
    groebner_basis(&partials).and_then(|gb| quotient_basis(&gb))?;
    if n == 1 {
        return Ok(vec![vec![int(1)]]);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut bound: i64 = 1;
    for _ in 0..attempts {
        let c: Vec<Vec<Rational>> = (0..n)
            .map(|_| (0..n).map(|_| int(rng.gen_range(-bound..=bound))).collect())
            .collect();
        if sop_is_valid(w, &c) {
            return Ok(c);
        }
        bound = (bound * 2).min(1 << 20);
    }
    Err(MfError::SearchExhausted { attempts, bound })
}
