//! The Jacobi algebra `S / (∂_1 W, ..., ∂_n W)` and its residue functional.

use crate::ideals::{groebner_basis, quotient_basis, QuotientBasis};
use crate::linalg::dense_rank;
use crate::poly::{Monomial, Polynomial};
use crate::rational::Rational;

use super::{jacobian_data, PairingError};

#[derive(Clone, Debug)]
pub struct JacobiAlgebra {
    pub w: Polynomial,
    pub quotient: QuotientBasis,
    /// `γ(m) = Res[m / ∂W]` on each standard monomial.
    pub gamma: Vec<Rational>,
    /// `γ(m_i m_j)`.
    pub gram: Vec<Vec<Rational>>,
    pub rank: usize,
}

impl JacobiAlgebra {
    /// The Milnor number.
    pub fn dimension(&self) -> usize {
        self.quotient.dimension()
    }

    pub fn monomials(&self) -> &[Monomial] {
        self.quotient.monomials()
    }

    pub fn is_frobenius(&self) -> bool {
        self.rank == self.dimension()
    }

    /// `γ` on an arbitrary polynomial.
    pub fn gamma_of(&self, s: &Polynomial) -> Rational {
        let coords = self.quotient.coordinates(s);
        coords.iter().zip(&self.gamma).map(|(a, g)| a * g).sum()
    }
}

pub fn jacobi_algebra(w: &Polynomial) -> Result<JacobiAlgebra, PairingError> {
    let ring = w.ring().clone();
    let partials: Vec<Polynomial> = (0..ring.nvars()).map(|i| w.diff(i).expect("index in range")).collect();
    let quotient = quotient_basis(&groebner_basis(&partials)?)?;
    let data = jacobian_data(w)?;
    let one = Rational::from_integer(1.into());
    let mono = |m: &Monomial| Polynomial::term(&ring, one.clone(), m.clone());
    let gamma: Vec<Rational> = quotient.monomials().iter().map(|m| data.residue(&mono(m))).collect();
    let gram: Vec<Vec<Rational>> = quotient
        .monomials()
        .iter()
        .map(|a| quotient.monomials().iter().map(|b| data.residue(&mono(&a.mul(b)))).collect())
        .collect();
    let rank = dense_rank(&gram);
    Ok(JacobiAlgebra {
        w: w.clone(),
        quotient,
        gamma,
        gram,
        rank,
    })
}
