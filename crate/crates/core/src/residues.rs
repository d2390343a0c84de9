//! Grothendieck residue symbols and generalised fractions over complete
//! intersections.
//!
//! A residue `Res[g / f_1, ..., f_n]` is computed with the transformation
//! rule: find `x_i^{e_i} = sum_j a_ij f_j`, then read off the coefficient of
//! `x^{e - 1}` in `g * det(a_ij)`. Everything is local at the origin, so
//! common zeros elsewhere are harmless as long as they are isolated.

use std::collections::HashMap;
use std::sync::{Arc, Mutex};

use num_traits::Zero;

use crate::ideals::{eliminant, groebner_basis, quotient_basis, GroebnerBasis, IdealError, QuotientBasis};
use crate::linalg::{Echelon, SparseVec};
use crate::matrix::PolyMatrix;
use crate::poly::{Monomial, Polynomial, Ring};
use crate::rational::Rational;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ResidueError {
    #[error("denominators ({denominators}) do not cut out the origin: {source}")]
    NotZeroDimensional {
        denominators: String,
        #[source]
        source: IdealError,
    },
    #[error("denominators ({0}) do not all vanish at the origin")]
    OriginNotAZero(String),
    #[error("expected {expected} denominators, found {found}")]
    WrongDenominatorCount { expected: usize, found: usize },
    #[error("fractions live over different rings or relations")]
    ContextMismatch,
    #[error("polynomial does not belong to the ambient ring {0:?}")]
    AmbientMismatch(Vec<String>),
}

fn join(polys: &[Polynomial]) -> String {
    polys.iter().map(ToString::to_string).collect::<Vec<_>>().join(", ")
}

/// Everything needed to evaluate local residues and memberships at the
/// origin for one ordered tuple of denominators.
///
/// For each variable the eliminant `h_i = x_i^{e_i} u_i(x_i)` with
/// `u_i(0) != 0` lies in the ideal `I`. Locally `I` equals
/// `Q = I + (x_1^{e_1}, ..., x_n^{e_n})`, and the transformation rule applied
/// to `h_i = sum_j a_ij f_j` gives
/// `Res[g / f] = coeff of x^{e - 1} in g det(a) prod u_i^{-1}`.
#[derive(Debug)]
pub struct DenominatorData {
    denominators: Vec<Polynomial>,
    global: GroebnerBasis,
    local: GroebnerBasis,
    exponents: Vec<u32>,
    lift_det: Polynomial,
}

/// `u^{-1} mod x^cap` for a univariate series given by its coefficients.
fn series_inverse(u: &[Rational], cap: usize) -> Vec<Rational> {
    let u0 = u[0].clone();
    let mut v: Vec<Rational> = Vec::with_capacity(cap);
    for k in 0..cap {
        let mut acc = if k == 0 { Rational::from_integer(1.into()) } else { Rational::zero() };
        for j in 1..=k.min(u.len() - 1) {
            acc -= &u[j] * &v[k - j];
        }
        v.push(acc / &u0);
    }
    v
}

impl DenominatorData {
    pub fn new(denominators: &[Polynomial]) -> Result<Self, ResidueError> {
        let wrap = |source: IdealError| ResidueError::NotZeroDimensional {
            denominators: join(denominators),
            source,
        };
        let global = groebner_basis(denominators).map_err(wrap)?;
        let ring = global.ring().clone();
        let n = ring.nvars();
        let mut exponents = Vec::with_capacity(n);
        let mut lifts = PolyMatrix::zero(&ring, n, denominators.len());
        let mut units = Vec::with_capacity(n);
        for i in 0..n {
            let h = eliminant(i, &global).map_err(wrap)?;
            let e = h.order_at_zero();
            if e == 0 {
                return Err(ResidueError::OriginNotAZero(join(denominators)));
            }
            exponents.push(e);
            units.push(h.coefficients[e as usize..].to_vec());
            for (j, a) in h.cofactors.into_iter().enumerate() {
                lifts.set(i, j, a);
            }
        }
        let local = if units.iter().all(|u| u.len() == 1) {
            global.clone()
        } else {
            let gens: Vec<Polynomial> = denominators
                .iter()
                .cloned()
                .chain((0..n).map(|i| Polynomial::var(&ring, i).pow(exponents[i])))
                .collect();
            groebner_basis(&gens).map_err(wrap)?
        };
        let lift_det = if denominators.len() == n {
            let mut acc = lifts.determinant().truncate_box(&exponents);
            for (i, u) in units.iter().enumerate() {
                if u.len() == 1 && u[0] == Rational::from_integer(1.into()) {
                    continue;
                }
                let v = series_inverse(u, exponents[i] as usize);
                let inv = Polynomial::from_terms(
                    &ring,
                    v.into_iter().enumerate().map(|(k, c)| (Monomial::var(n, i, k as u32), c)),
                );
                acc = (&acc * &inv).truncate_box(&exponents);
            }
            acc
        } else {
            Polynomial::zero(&ring)
        };
        Ok(DenominatorData {
            denominators: denominators.to_vec(),
            global,
            local,
            exponents,
            lift_det,
        })
    }

    pub fn denominators(&self) -> &[Polynomial] {
        &self.denominators
    }

    /// Basis of the ideal generated in the local ring at the origin,
    /// intersected back with the polynomial ring.
    pub fn groebner(&self) -> &GroebnerBasis {
        &self.local
    }

    /// Basis of the ideal the denominators generate in the polynomial ring.
    pub fn global_groebner(&self) -> &GroebnerBasis {
        &self.global
    }

    pub fn exponents(&self) -> &[u32] {
        &self.exponents
    }

    /// `det(a_ij) prod u_i^{-1}` truncated below `x^e`.
    pub fn lift_determinant(&self) -> &Polynomial {
        &self.lift_det
    }

    pub fn contains(&self, p: &Polynomial) -> bool {
        self.local.contains(p)
    }

    /// `Res[g / denominators]`; only meaningful for `n` denominators.
    pub fn residue(&self, g: &Polynomial) -> Rational {
        let target: Vec<u32> = self.exponents.iter().map(|e| e - 1).collect();
        let mut acc = Rational::zero();
        for (mg, cg) in g.terms() {
            if mg.exponents().iter().zip(&target).any(|(a, t)| a > t) {
                continue;
            }
            let rest: Vec<u32> = target.iter().zip(mg.exponents()).map(|(t, a)| t - a).collect();
            let c = self.lift_det.coefficient(&Monomial::new(rest));
            if !c.is_zero() {
                acc += cg * c;
            }
        }
        acc
    }
}

/// `Res[g / denoms]` over the power series ring, with exactly `n` denominators.
pub fn residue_symbol(g: &Polynomial, denoms: &[Polynomial]) -> Result<Rational, ResidueError> {
    let n = g.ring().nvars();
    if denoms.len() != n {
        return Err(ResidueError::WrongDenominatorCount {
            expected: n,
            found: denoms.len(),
        });
    }
    if let Some(bad) = denoms.iter().find(|d| !d.same_ring(g)) {
        return Err(ResidueError::AmbientMismatch(bad.ring().names().to_vec()));
    }
    Ok(DenominatorData::new(denoms)?.residue(g))
}

/// The ring `R = S / (f_1, ..., f_c)` with caches for every denominator
/// tuple seen so far.
#[derive(Debug)]
pub struct ResidueContext {
    ring: Arc<Ring>,
    relations: Vec<Polynomial>,
    cache: Mutex<HashMap<Vec<Polynomial>, Arc<DenominatorData>>>,
}

impl ResidueContext {
    pub fn new(ring: &Arc<Ring>, relations: Vec<Polynomial>) -> Result<Arc<Self>, ResidueError> {
        if relations.len() > ring.nvars() {
            return Err(ResidueError::WrongDenominatorCount {
                expected: ring.nvars(),
                found: relations.len(),
            });
        }
        if let Some(bad) = relations.iter().find(|f| f.ring().as_ref() != ring.as_ref()) {
            return Err(ResidueError::AmbientMismatch(bad.ring().names().to_vec()));
        }
        Ok(Arc::new(ResidueContext {
            ring: ring.clone(),
            relations,
            cache: Mutex::new(HashMap::new()),
        }))
    }

    /// `R = S / (W)`.
    pub fn hypersurface(w: &Polynomial) -> Arc<Self> {
        Self::new(w.ring(), vec![w.clone()]).expect("a single relation always fits")
    }

    pub fn ring(&self) -> &Arc<Ring> {
        &self.ring
    }

    pub fn relations(&self) -> &[Polynomial] {
        &self.relations
    }

    /// Krull dimension `d = n - c` of `R`, the number of denominators.
    pub fn dim(&self) -> usize {
        self.ring.nvars() - self.relations.len()
    }

    /// Cached data for the ideal `(f, t)` in `S`.
    pub fn data_for(&self, denoms: &[Polynomial]) -> Result<Arc<DenominatorData>, ResidueError> {
        let key: Vec<Polynomial> = self.relations.iter().chain(denoms).cloned().collect();
        if let Some(hit) = self.cache.lock().expect("cache lock").get(&key) {
            return Ok(hit.clone());
        }
        let data = Arc::new(DenominatorData::new(&key)?);
        self.cache.lock().expect("cache lock").insert(key, data.clone());
        Ok(data)
    }

    fn same_as(&self, other: &ResidueContext) -> bool {
        std::ptr::eq(self, other) || (self.ring == other.ring && self.relations == other.relations)
    }
}

/// The symbol `[r / t_1, ..., t_d]` in top local cohomology of `R`.
#[derive(Clone, Debug)]
pub struct GeneralisedFraction {
    context: Arc<ResidueContext>,
    numerator: Polynomial,
    denominators: Vec<Polynomial>,
    data: Arc<DenominatorData>,
}

impl GeneralisedFraction {
    pub fn context(&self) -> &Arc<ResidueContext> {
        &self.context
    }

    pub fn numerator(&self) -> &Polynomial {
        &self.numerator
    }

    pub fn denominators(&self) -> &[Polynomial] {
        &self.denominators
    }

    /// The same denominators with another numerator.
    pub fn with_numerator(&self, numerator: Polynomial) -> GeneralisedFraction {
        GeneralisedFraction {
            numerator,
            ..self.clone()
        }
    }

    /// The numerator reduced modulo `(f, t)`, a canonical representative.
    pub fn normal_numerator(&self) -> Polynomial {
        self.data.groebner().normal_form(&self.numerator)
    }
}

pub fn make_fraction(
    ctx: &Arc<ResidueContext>,
    numerator: Polynomial,
    denoms: Vec<Polynomial>,
) -> Result<GeneralisedFraction, ResidueError> {
    if denoms.len() != ctx.dim() {
        return Err(ResidueError::WrongDenominatorCount {
            expected: ctx.dim(),
            found: denoms.len(),
        });
    }
    if let Some(bad) = std::iter::once(&numerator)
        .chain(&denoms)
        .find(|p| p.ring().as_ref() != ctx.ring().as_ref())
    {
        return Err(ResidueError::AmbientMismatch(bad.ring().names().to_vec()));
    }
    let data = ctx.data_for(&denoms)?;
    Ok(GeneralisedFraction {
        context: ctx.clone(),
        numerator,
        denominators: denoms,
        data,
    })
}

/// `[r / t] = 0` exactly when `r` lies in `(f, t) S`.
pub fn fraction_is_zero(fr: &GeneralisedFraction) -> bool {
    fr.data.contains(&fr.numerator)
}

/// Semantic equality of two fractions with the same number of denominators.
///
/// If one tuple of denominators lies in the ideal of the other, the
/// transformation rule moves the first fraction onto the second tuple and
/// the numerators are compared there. Otherwise both are rewritten over
/// `u_i = t_i t'_i`. The numerators pick up the complementary products
/// and are compared modulo `(f, u)`.
pub fn fraction_equal(a: &GeneralisedFraction, b: &GeneralisedFraction) -> Result<bool, ResidueError> {
    if !a.context.same_as(&b.context) || a.denominators.len() != b.denominators.len() {
        return Err(ResidueError::ContextMismatch);
    }
    let ring = a.context.ring().clone();
    if a.denominators == b.denominators {
        return Ok(a.data.contains(&(&a.numerator - &b.numerator)));
    }
    if let Some(moved) = transport(a, &b.denominators) {
        return Ok(b.data.contains(&(&moved - &b.numerator)));
    }
    if let Some(moved) = transport(b, &a.denominators) {
        return Ok(a.data.contains(&(&moved - &a.numerator)));
    }
    let prod = |ts: &[Polynomial]| ts.iter().fold(Polynomial::one(&ring), |acc, t| &acc * t);
    let u: Vec<Polynomial> = a.denominators.iter().zip(&b.denominators).map(|(t, s)| t * s).collect();
    let data = a.context.data_for(&u)?;
    let lhs = &a.numerator * &prod(&b.denominators);
    let rhs = &b.numerator * &prod(&a.denominators);
    Ok(data.contains(&(&lhs - &rhs)))
}

/// If `target_i = sum_j m_ij t_j` in `R`, the numerator `det(m) r` of the
/// same class over `target`.
fn transport(fr: &GeneralisedFraction, target: &[Polynomial]) -> Option<Polynomial> {
    let ctx = &fr.context;
    let c = ctx.relations().len();
    let gens: Vec<Polynomial> = ctx.relations().iter().chain(&fr.denominators).cloned().collect();
    let gb = fr.data.global_groebner();
    let d = target.len();
    let mut m = PolyMatrix::zero(ctx.ring(), d, d);
    for (i, s) in target.iter().enumerate() {
        let (rem, cof) = crate::ideals::reduce_with_cofactors(s, gb);
        if !rem.is_zero() {
            return None;
        }
        debug_assert_eq!(cof.len(), gens.len());
        for j in 0..d {
            m.set(i, j, cof[c + j].clone());
        }
    }
    Some(&m.determinant() * &fr.numerator)
}

/// `zeta[r / t] = Res[r / f_1, ..., f_c, t_1, ..., t_d]`.
pub fn zeta(fr: &GeneralisedFraction) -> Rational {
    fr.data.residue(&fr.numerator)
}

/// Basis of the socle of `S / (f, t)`, as polynomials in normal form.
pub fn socle(ctx: &ResidueContext, denoms: &[Polynomial]) -> Result<Vec<Polynomial>, ResidueError> {
    let data = ctx.data_for(denoms)?;
    let qb = quotient_basis(data.groebner()).map_err(|source| ResidueError::NotZeroDimensional {
        denominators: join(data.denominators()),
        source,
    })?;
    Ok(socle_of_quotient(&qb))
}

pub fn socle_of_quotient(qb: &QuotientBasis) -> Vec<Polynomial> {
    let ring = qb.ideal().ring().clone();
    let dim = qb.dimension();
    let n = ring.nvars();
    // the socle is the kernel of v -> (x_1 v, ..., x_n v) stacked
    let mut images = Vec::with_capacity(dim);
    for m in qb.monomials() {
        let mut stacked = Vec::new();
        for i in 0..n {
            let xm = Polynomial::term(&ring, Rational::from_integer(1.into()), m.mul(&Monomial::var(n, i, 1)));
            for (k, c) in qb.coordinates(&xm).into_iter().enumerate() {
                if !c.is_zero() {
                    stacked.push((i * dim + k, c));
                }
            }
        }
        images.push(SparseVec::from_map(stacked.into_iter().collect()));
    }
    let mut ech = Echelon::new();
    let mut out = Vec::new();
    for (j, img) in images.into_iter().enumerate() {
        if let crate::linalg::Insertion::Dependent(combo) = ech.insert_tracked(img, SparseVec::unit(j)) {
            out.push(Polynomial::from_terms(
                &ring,
                combo.entries().iter().map(|(k, c)| (qb.monomials()[*k].clone(), c.clone())),
            ));
        }
    }
    out
}
