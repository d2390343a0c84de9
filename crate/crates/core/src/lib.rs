//! Exact computation of residue pairings on categories of matrix
//! factorisations.
//!
//! The crate is layered bottom-up. Rational polynomials live in [`poly`]
//! and Gröbner bases in [`ideals`]. Residue symbols sit on top of them in
//! [`residues`]. Matrix factorisations ([`mf`]) use the perturbation
//! machinery of [`homotopy`], and the trace formulas live in [`pairing`].

pub mod checks;
pub mod homotopy;
pub mod ideals;
pub mod linalg;
pub mod matrix;
pub mod mf;
pub mod pairing;
pub mod poly;
pub mod random;
pub mod rational;
pub mod residues;
pub mod signs;

pub use matrix::PolyMatrix;
pub use poly::{parse_poly, Monomial, Polynomial, Ring};
pub use rational::Rational;
