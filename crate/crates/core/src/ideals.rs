//! Gröbner bases with cofactor tracking, and monomial bases of
//! zero-dimensional quotients.
//!
//! All bases are reduced with respect to degrevlex. Every basis element keeps
//! its expression in terms of the generators it was computed from, so
//! division results can always be reported against those original
//! generators.

use std::sync::Arc;

use num_traits::{One, Zero};

use crate::poly::{Monomial, PolyError, Polynomial, Ring};
use crate::rational::Rational;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum IdealError {
    #[error("ideal is not zero-dimensional (no pure power of {missing} among the leading terms)")]
    NotZeroDimensional { missing: String },
    #[error("ideal has zeros away from the origin: no power of {variable} up to {bound} lies in it")]
    ZerosAwayFromOrigin { variable: String, bound: usize },
    #[error("generator list is empty")]
    NoGenerators,
    #[error(transparent)]
    Poly(#[from] PolyError),
}

#[derive(Clone, Debug)]
pub struct GroebnerBasis {
    ring: Arc<Ring>,
    generators: Vec<Polynomial>,
    /// Reduced and monic, sorted by leading monomial.
    basis: Vec<Polynomial>,
    /// `basis[k] == sum_j cofactor_log[k][j] * generators[j]`
    cofactor_log: Vec<Vec<Polynomial>>,
}

struct Tracked {
    poly: Polynomial,
    cofactors: Vec<Polynomial>,
}

fn zero_vec(ring: &Arc<Ring>, len: usize) -> Vec<Polynomial> {
    vec![Polynomial::zero(ring); len]
}

fn add_scaled(acc: &mut [Polynomial], c: &Rational, m: &Monomial, other: &[Polynomial]) {
    for (a, o) in acc.iter_mut().zip(other) {
        a.add_scaled_shifted(c, m, o);
    }
}

/// Full reduction of `p` by `basis`; returns the remainder and, when
/// `logs` is given, the accumulated cofactors over the logged origins.
fn reduce_tracked(
    p: &Polynomial,
    basis: &[Polynomial],
    logs: Option<&[Vec<Polynomial>]>,
    ngens: usize,
) -> (Polynomial, Vec<Polynomial>) {
    let ring = p.ring().clone();
    let mut work = p.clone();
    let mut rem = Polynomial::zero(&ring);
    let mut cof = if logs.is_some() { zero_vec(&ring, ngens) } else { Vec::new() };
    while let Some((lm, lc)) = work.leading_term().map(|(m, c)| (m.clone(), c.clone())) {
        let hit = basis.iter().enumerate().find_map(|(k, g)| {
            let glm = g.leading_monomial()?;
            glm.quotient_of(&lm).map(|q| (k, q))
        });
        match hit {
            Some((k, q)) => {
                // basis elements are monic
                let c = -lc.clone();
                work.add_scaled_shifted(&c, &q, &basis[k]);
                if let Some(logs) = logs {
                    add_scaled(&mut cof, &lc, &q, &logs[k]);
                }
            }
            None => {
                work.add_term(lm.clone(), -lc.clone());
                rem.add_term(lm, lc);
            }
        }
    }
    (rem, cof)
}

fn make_monic(t: Tracked) -> Tracked {
    let lc = t.poly.leading_term().map(|(_, c)| c.clone()).expect("nonzero");
    if lc.is_one() {
        return t;
    }
    let inv = Rational::one() / lc;
    Tracked {
        poly: t.poly.scale(&inv),
        cofactors: t.cofactors.iter().map(|c| c.scale(&inv)).collect(),
    }
}

impl GroebnerBasis {
    pub fn ring(&self) -> &Arc<Ring> {
        &self.ring
    }

    pub fn generators(&self) -> &[Polynomial] {
        &self.generators
    }

    pub fn basis(&self) -> &[Polynomial] {
        &self.basis
    }

    pub fn cofactor_log(&self) -> &[Vec<Polynomial>] {
        &self.cofactor_log
    }

    pub fn is_zero_ideal(&self) -> bool {
        self.basis.is_empty()
    }

    pub fn is_unit_ideal(&self) -> bool {
        self.basis.iter().any(Polynomial::is_constant)
    }

    pub fn leading_monomials(&self) -> impl Iterator<Item = &Monomial> {
        self.basis.iter().filter_map(Polynomial::leading_monomial)
    }

    pub fn normal_form(&self, p: &Polynomial) -> Polynomial {
        reduce_tracked(p, &self.basis, None, 0).0
    }

    pub fn contains(&self, p: &Polynomial) -> bool {
        self.normal_form(p).is_zero()
    }

    /// Checks every logged combination against its basis element.
    pub fn verify_log(&self) -> bool {
        self.basis.iter().zip(&self.cofactor_log).all(|(g, cofs)| {
            let mut acc = Polynomial::zero(&self.ring);
            for (c, f) in cofs.iter().zip(&self.generators) {
                acc = &acc + &(c * f);
            }
            &acc == g
        })
    }
}

/// Buchberger's algorithm with the product criterion, followed by
/// inter-reduction. Cofactors are tracked throughout.
pub fn groebner_basis(gens: &[Polynomial]) -> Result<GroebnerBasis, IdealError> {
    let first = gens.first().ok_or(IdealError::NoGenerators)?;
    let ring = first.ring().clone();
    for g in gens {
        if !g.same_ring(first) {
            return Err(PolyError::AmbientMismatch {
                left: ring.names().to_vec(),
                right: g.ring().names().to_vec(),
            }
            .into());
        }
    }
    let ngens = gens.len();
    let mut work: Vec<Tracked> = Vec::new();
    for (j, g) in gens.iter().enumerate() {
        if g.is_zero() {
            continue;
        }
        let mut cof = zero_vec(&ring, ngens);
        cof[j] = Polynomial::one(&ring);
        work.push(make_monic(Tracked {
            poly: g.clone(),
            cofactors: cof,
        }));
    }

    let mut pairs: Vec<(usize, usize)> = Vec::new();
    for j in 0..work.len() {
        for i in 0..j {
            pairs.push((i, j));
        }
    }
    while let Some((i, j)) = pick_pair(&mut pairs, &work) {
        let (lmi, lmj) = (
            work[i].poly.leading_monomial().unwrap().clone(),
            work[j].poly.leading_monomial().unwrap().clone(),
        );
        if lmi.coprime(&lmj) {
            continue;
        }
        let lcm = lmi.lcm(&lmj);
        let qi = lmi.quotient_of(&lcm).unwrap();
        let qj = lmj.quotient_of(&lcm).unwrap();
        let mut s = Polynomial::zero(&ring);
        s.add_scaled_shifted(&Rational::one(), &qi, &work[i].poly);
        s.add_scaled_shifted(&-Rational::one(), &qj, &work[j].poly);
        let mut scof = zero_vec(&ring, ngens);
        add_scaled(&mut scof, &Rational::one(), &qi, &work[i].cofactors);
        add_scaled(&mut scof, &-Rational::one(), &qj, &work[j].cofactors);

        let polys: Vec<Polynomial> = work.iter().map(|t| t.poly.clone()).collect();
        let logs: Vec<Vec<Polynomial>> = work.iter().map(|t| t.cofactors.clone()).collect();
        let (rem, q) = reduce_tracked(&s, &polys, Some(&logs), ngens);
        if rem.is_zero() {
            continue;
        }
        // rem = s - sum q_k work_k, so its cofactors are scof - q
        let cof: Vec<Polynomial> = scof.iter().zip(&q).map(|(a, b)| a - b).collect();
        let k = work.len();
        work.push(make_monic(Tracked { poly: rem, cofactors: cof }));
        for i in 0..k {
            pairs.push((i, k));
        }
    }

    // minimalise: drop elements whose leading monomial is divisible by another's
    let mut keep: Vec<usize> = Vec::new();
    for (a, t) in work.iter().enumerate() {
        let lm = t.poly.leading_monomial().unwrap();
        let redundant = work.iter().enumerate().any(|(b, u)| {
            if a == b {
                return false;
            }
            let other = u.poly.leading_monomial().unwrap();
            other.divides(lm) && (other != lm || b < a)
        });
        if !redundant {
            keep.push(a);
        }
    }
    let mut minimal: Vec<Tracked> = keep
        .into_iter()
        .map(|a| Tracked {
            poly: work[a].poly.clone(),
            cofactors: work[a].cofactors.clone(),
        })
        .collect();
    minimal.sort_by(|a, b| a.poly.leading_monomial().cmp(&b.poly.leading_monomial()));

    // inter-reduce tails
    for k in 0..minimal.len() {
        let others: Vec<Polynomial> = minimal
            .iter()
            .enumerate()
            .filter(|(b, _)| *b != k)
            .map(|(_, t)| t.poly.clone())
            .collect();
        let other_logs: Vec<Vec<Polynomial>> = minimal
            .iter()
            .enumerate()
            .filter(|(b, _)| *b != k)
            .map(|(_, t)| t.cofactors.clone())
            .collect();
        let (rem, q) = reduce_tracked(&minimal[k].poly, &others, Some(&other_logs), ngens);
        let cof: Vec<Polynomial> = minimal[k].cofactors.iter().zip(&q).map(|(a, b)| a - b).collect();
        minimal[k] = Tracked { poly: rem, cofactors: cof };
    }

    Ok(GroebnerBasis {
        ring,
        generators: gens.to_vec(),
        basis: minimal.iter().map(|t| t.poly.clone()).collect(),
        cofactor_log: minimal.into_iter().map(|t| t.cofactors).collect(),
    })
}

/// Pops the pair with the smallest lcm degree (normal selection strategy).
fn pick_pair(pairs: &mut Vec<(usize, usize)>, work: &[Tracked]) -> Option<(usize, usize)> {
    if pairs.is_empty() {
        return None;
    }
    let lcm_key = |&(i, j): &(usize, usize)| {
        let a = work[i].poly.leading_monomial().unwrap();
        let b = work[j].poly.leading_monomial().unwrap();
        a.lcm(b)
    };
    let (best, _) = pairs
        .iter()
        .enumerate()
        .min_by(|(_, p), (_, q)| lcm_key(p).cmp(&lcm_key(q)))
        .unwrap();
    Some(pairs.swap_remove(best))
}

/// Division by the basis with quotients expressed against the original
/// generators: `p == sum_j cofactors[j] * generators[j] + remainder`.
pub fn reduce_with_cofactors(p: &Polynomial, gb: &GroebnerBasis) -> (Polynomial, Vec<Polynomial>) {
    let (rem, q) = reduce_tracked(p, &gb.basis, Some(&gb.cofactor_log), gb.generators.len());
    (rem, q)
}

#[derive(Clone, Debug)]
pub struct QuotientBasis {
    ideal: GroebnerBasis,
    monomials: Vec<Monomial>,
    /// Exponent caps `x_i^{caps_i}` that are leading monomials.
    caps: Vec<u32>,
}

impl QuotientBasis {
    pub fn ideal(&self) -> &GroebnerBasis {
        &self.ideal
    }

    pub fn monomials(&self) -> &[Monomial] {
        &self.monomials
    }

    pub fn dimension(&self) -> usize {
        self.monomials.len()
    }

    pub fn caps(&self) -> &[u32] {
        &self.caps
    }

    /// Highest total degree of a standard monomial.
    pub fn top_degree(&self) -> u32 {
        self.monomials.iter().map(Monomial::degree).max().unwrap_or(0)
    }

    pub fn index_of(&self, m: &Monomial) -> Option<usize> {
        self.monomials.binary_search(m).ok()
    }

    /// Normal-form coordinates of `p` on the standard monomials.
    pub fn coordinates(&self, p: &Polynomial) -> Vec<Rational> {
        let nf = self.ideal.normal_form(p);
        let mut out = vec![Rational::zero(); self.monomials.len()];
        for (m, c) in nf.terms() {
            let i = self.index_of(m).expect("normal form is supported on standard monomials");
            out[i] = c.clone();
        }
        out
    }
}

pub fn quotient_basis(gb: &GroebnerBasis) -> Result<QuotientBasis, IdealError> {
    let ring = gb.ring().clone();
    let n = ring.nvars();
    let mut caps = vec![u32::MAX; n];
    if gb.is_unit_ideal() {
        return Ok(QuotientBasis {
            ideal: gb.clone(),
            monomials: Vec::new(),
            caps: vec![0; n],
        });
    }
    for lm in gb.leading_monomials() {
        if let Some((i, e)) = lm.pure_power() {
            caps[i] = caps[i].min(e);
        }
    }
    if let Some(i) = caps.iter().position(|&c| c == u32::MAX) {
        return Err(IdealError::NotZeroDimensional {
            missing: ring.names()[i].clone(),
        });
    }
    let lms: Vec<Monomial> = gb.leading_monomials().cloned().collect();
    let mut monomials = Vec::new();
    let mut exps = vec![0u32; n];
    loop {
        let m = Monomial::new(exps.clone());
        if !lms.iter().any(|lm| lm.divides(&m)) {
            monomials.push(m);
        }
        // odometer over the box
        let mut k = 0;
        loop {
            if k == n {
                monomials.sort();
                return Ok(QuotientBasis {
                    ideal: gb.clone(),
                    monomials,
                    caps,
                });
            }
            exps[k] += 1;
            if exps[k] < caps[k] {
                break;
            }
            exps[k] = 0;
            k += 1;
        }
    }
}

/// Lift of a variable power into the ideal.
#[derive(Clone, Debug)]
pub struct PowerLift {
    pub exponent: u32,
    /// `x_i^exponent == sum_j cofactors[j] * generators[j]`
    pub cofactors: Vec<Polynomial>,
}

/// Smallest `e` with `x_i^e` in the ideal, with cofactors against the
/// original generators.
pub fn power_in_ideal(index: usize, gb: &GroebnerBasis) -> Result<PowerLift, IdealError> {
    let ring = gb.ring().clone();
    if index >= ring.nvars() {
        return Err(PolyError::VariableOutOfRange {
            index,
            nvars: ring.nvars(),
        }
        .into());
    }
    let qb = quotient_basis(gb)?;
    let bound = qb.dimension().max(1);
    let x = Polynomial::var(&ring, index);
    let mut power = Polynomial::one(&ring);
    let mut nf = gb.normal_form(&power);
    for e in 1..=bound as u32 {
        power = &power * &x;
        nf = gb.normal_form(&(&nf * &x));
        if nf.is_zero() {
            let (rem, cofactors) = reduce_with_cofactors(&power, gb);
            debug_assert!(rem.is_zero());
            return Ok(PowerLift { exponent: e, cofactors });
        }
    }
    Err(IdealError::ZerosAwayFromOrigin {
        variable: ring.names()[index].clone(),
        bound,
    })
}

/// Monic univariate polynomial `h(x_i)` of least degree in the ideal.
#[derive(Clone, Debug)]
pub struct Eliminant {
    /// `coefficients[k]` multiplies `x_i^k`.
    pub coefficients: Vec<Rational>,
    /// `h == sum_j cofactors[j] * generators[j]`
    pub cofactors: Vec<Polynomial>,
}

impl Eliminant {
    pub fn polynomial(&self, ring: &Arc<Ring>, index: usize) -> Polynomial {
        let n = ring.nvars();
        Polynomial::from_terms(
            ring,
            self.coefficients
                .iter()
                .enumerate()
                .filter(|(_, c)| !c.is_zero())
                .map(|(k, c)| (Monomial::var(n, index, k as u32), c.clone())),
        )
    }

    /// Multiplicity of `0` as a root.
    pub fn order_at_zero(&self) -> u32 {
        self.coefficients.iter().position(|c| !c.is_zero()).unwrap_or(0) as u32
    }
}

/// The minimal polynomial of multiplication by `x_i` on a zero-dimensional
/// quotient, with cofactors against the original generators.
pub fn eliminant(index: usize, gb: &GroebnerBasis) -> Result<Eliminant, IdealError> {
    let ring = gb.ring().clone();
    if index >= ring.nvars() {
        return Err(PolyError::VariableOutOfRange {
            index,
            nvars: ring.nvars(),
        }
        .into());
    }
    let qb = quotient_basis(gb)?;
    let x = Polynomial::var(&ring, index);
    let mut ech = crate::linalg::Echelon::new();
    let mut nf = gb.normal_form(&Polynomial::one(&ring));
    for k in 0..=qb.dimension() {
        let coords = crate::linalg::SparseVec::from_dense(&qb.coordinates(&nf));
        if let crate::linalg::Insertion::Dependent(combo) = ech.insert_tracked(coords, crate::linalg::SparseVec::unit(k)) {
            let coefficients = combo.to_dense(k + 1);
            let lead = coefficients[k].clone();
            let coefficients: Vec<Rational> = coefficients.into_iter().map(|c| c / &lead).collect();
            let h = Eliminant {
                coefficients,
                cofactors: Vec::new(),
            };
            let (rem, cofactors) = reduce_with_cofactors(&h.polynomial(&ring, index), gb);
            debug_assert!(rem.is_zero());
            return Ok(Eliminant { cofactors, ..h });
        }
        nf = gb.normal_form(&(&nf * &x));
    }
    unreachable!("more powers than the quotient dimension are always dependent")
}
