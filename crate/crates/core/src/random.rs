//! Seeded random polynomials and morphisms for property checks.

use std::sync::Arc;

use rand::Rng;

use crate::matrix::PolyMatrix;
use crate::mf::{MFMorphism, MatrixFactorisation};
use crate::poly::{Monomial, Polynomial, Ring};
use crate::rational::{int, Rational};

/// All exponent vectors of total degree at most `max_degree`.
pub fn monomials_up_to(nvars: usize, max_degree: u32) -> Vec<Monomial> {
    fn go(prefix: &mut Vec<u32>, left: usize, budget: u32, out: &mut Vec<Monomial>) {
        if left == 0 {
            out.push(Monomial::new(prefix.clone()));
            return;
        }
        for e in 0..=budget {
            prefix.push(e);
            go(prefix, left - 1, budget - e, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    go(&mut Vec::with_capacity(nvars), nvars, max_degree, &mut out);
    out.sort();
    out
}

/// Each monomial of degree `<= max_degree` appears with probability
/// `density`, with a nonzero integer coefficient in `[-bound, bound]`.
pub fn random_polynomial<R: Rng>(ring: &Arc<Ring>, max_degree: u32, density: f64, bound: i64, rng: &mut R) -> Polynomial {
    let mut terms = Vec::new();
    for m in monomials_up_to(ring.nvars(), max_degree) {
        if rng.gen_bool(density) {
            terms.push((m, random_nonzero(bound, rng)));
        }
    }
    Polynomial::from_terms(ring, terms)
}

pub fn random_nonzero<R: Rng>(bound: i64, rng: &mut R) -> Rational {
    let bound = bound.max(1);
    let mut v = 0;
    while v == 0 {
        v = rng.gen_range(-bound..=bound);
    }
    int(v)
}

pub fn random_integer<R: Rng>(bound: i64, rng: &mut R) -> Rational {
    int(rng.gen_range(-bound..=bound))
}

pub fn random_matrix<R: Rng>(ring: &Arc<Ring>, rows: usize, cols: usize, max_degree: u32, density: f64, rng: &mut R) -> PolyMatrix {
    PolyMatrix::from_fn(ring, rows, cols, |_, _| random_polynomial(ring, max_degree, density, 3, rng))
}

/// A random (usually not closed) morphism of the given parity.
pub fn random_morphism<R: Rng>(
    source: &Arc<MatrixFactorisation>,
    target: &Arc<MatrixFactorisation>,
    parity: u8,
    max_degree: u32,
    rng: &mut R,
) -> MFMorphism {
    let p = (parity % 2) as usize;
    let ring = source.ring();
    let blocks = [0, 1].map(|i| random_matrix(ring, target.rank((i + p) % 2), source.rank(i), max_degree, 0.4, rng));
    MFMorphism::new(source, target, parity, blocks).expect("shapes follow the ranks")
}

/// `sum_i c_i v_i` with random small integer coefficients, not all zero.
pub fn random_combination<R: Rng>(basis: &[MFMorphism], zero: &MFMorphism, rng: &mut R) -> MFMorphism {
    if basis.is_empty() {
        return zero.clone();
    }
    loop {
        let coeffs: Vec<Rational> = basis.iter().map(|_| random_integer(3, rng)).collect();
        if coeffs.iter().all(|c| *c == int(0)) {
            continue;
        }
        return basis.iter().zip(&coeffs).fold(zero.clone(), |acc, (b, c)| acc.add(&b.scale(c)));
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand_chacha::rand_core::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn monomial_counts() {
        assert_eq!(monomials_up_to(2, 2).len(), 6);
        assert_eq!(monomials_up_to(3, 1).len(), 4);
        assert_eq!(monomials_up_to(1, 0), vec![Monomial::new(vec![0])]);
    }

    #[test]
    fn seeded_polynomials_repeat() {
        let r = Ring::new(["x", "y"]);
        let a = random_polynomial(&r, 4, 0.5, 5, &mut ChaCha8Rng::seed_from_u64(3));
        let b = random_polynomial(&r, 4, 0.5, 5, &mut ChaCha8Rng::seed_from_u64(3));
        assert_eq!(a, b);
        assert!(a.degree().unwrap_or(0) <= 4);
    }
}
