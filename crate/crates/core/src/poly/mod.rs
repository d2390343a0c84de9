//! Sparse multivariate polynomials over the rationals.

mod monomial;
mod parse;
mod polynomial;

pub use monomial::{monomials_of_degree, monomials_up_to, Monomial};
pub use parse::parse_poly;
pub use polynomial::{Polynomial, Ring};

use crate::rational::Rational;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum PolyError {
    #[error("syntax error at offset {position}: {message}")]
    Syntax { position: usize, message: String },
    #[error("unknown variable '{name}' at offset {position}")]
    UnknownVariable { name: String, position: usize },
    #[error("ambient rings differ: {left:?} vs {right:?}")]
    AmbientMismatch { left: Vec<String>, right: Vec<String> },
    #[error("variable index {index} out of range for {nvars} variables")]
    VariableOutOfRange { index: usize, nvars: usize },
}

pub fn poly_mul(a: &Polynomial, b: &Polynomial) -> Result<Polynomial, PolyError> {
    a.try_mul(b)
}

pub fn poly_diff(p: &Polynomial, index: usize) -> Result<Polynomial, PolyError> {
    p.diff(index)
}

pub fn coefficient_of(p: &Polynomial, m: &Monomial) -> Rational {
    p.coefficient(m)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{int, rat};
    use proptest::prelude::*;
    use std::sync::Arc;

    fn xy() -> Arc<Ring> {
        Ring::new(["x", "y"])
    }

    fn p(text: &str, ring: &Arc<Ring>) -> Polynomial {
        parse_poly(text, ring).unwrap()
    }

    #[test]
    fn parse_d5_potential() {
        let r = xy();
        let w = p("x^2*y + y^4", &r);
        assert_eq!(w.num_terms(), 2);
        assert_eq!(w.coefficient(&Monomial::new(vec![2, 1])), int(1));
        assert_eq!(w.coefficient(&Monomial::new(vec![0, 4])), int(1));
    }

    #[test]
    fn parse_zero_and_binomial() {
        let r = xy();
        assert!(p("0", &r).is_zero());
        assert_eq!(p("(x+y)^2", &r), p("x^2 + 2*x*y + y^2", &r));
        assert_eq!(p("-x^2", &r), p("-(x^2)", &r));
        assert_eq!(p("3/4*x - 1/2", &r).coefficient(&Monomial::new(vec![1, 0])), rat(3, 4));
        assert_eq!(p("x/2", &r), p("1/2*x", &r));
    }

    #[test]
    fn parse_errors_carry_position() {
        let r = xy();
        match parse_poly("x + z", &r) {
            Err(PolyError::UnknownVariable { name, position }) => {
                assert_eq!(name, "z");
                assert_eq!(position, 4);
            }
            other => panic!("unexpected {other:?}"),
        }
        assert!(matches!(parse_poly("x +", &r), Err(PolyError::Syntax { position: 3, .. })));
        assert!(matches!(parse_poly("x / y", &r), Err(PolyError::Syntax { .. })));
        assert!(matches!(parse_poly("2x", &r), Err(PolyError::Syntax { .. })));
        assert!(matches!(parse_poly("", &r), Err(PolyError::Syntax { .. })));
    }

    #[test]
    fn multiplication_examples() {
        let r = xy();
        assert_eq!(poly_mul(&p("x", &r), &p("x", &r)).unwrap(), p("x^2", &r));
        let w = p("x^2*y + y^4", &r);
        assert_eq!(poly_mul(&w, &Polynomial::one(&r)).unwrap(), w);
        assert_eq!(poly_mul(&p("x+y", &r), &p("x-y", &r)).unwrap(), p("x^2 - y^2", &r));
        let other = Ring::new(["u"]);
        assert!(matches!(
            poly_mul(&w, &Polynomial::var(&other, 0)),
            Err(PolyError::AmbientMismatch { .. })
        ));
    }

    #[test]
    fn derivative_examples() {
        let r = xy();
        let w = p("x^2*y + y^4", &r);
        assert_eq!(poly_diff(&w, 0).unwrap(), p("2*x*y", &r));
        assert_eq!(poly_diff(&w, 1).unwrap(), p("x^2 + 4*y^3", &r));
        assert!(poly_diff(&p("7", &r), 0).unwrap().is_zero());
        assert!(matches!(poly_diff(&w, 2), Err(PolyError::VariableOutOfRange { .. })));
    }

    #[test]
    fn coefficient_examples() {
        let r = xy();
        assert_eq!(coefficient_of(&p("x^2 + 3*x*y", &r), &Monomial::new(vec![2, 0])), int(1));
        assert_eq!(coefficient_of(&p("x^2*y + y^4", &r), &Monomial::new(vec![0, 3])), int(0));
        assert_eq!(coefficient_of(&p("2*x*y", &r), &Monomial::new(vec![1, 1])), int(2));
    }

    #[test]
    fn degree_is_additive() {
        let r = xy();
        let a = p("x^3 + y", &r);
        let b = p("x*y^2 - 1", &r);
        assert_eq!((&a * &b).degree(), Some(6));
    }

    fn arb_poly() -> impl Strategy<Value = Polynomial> {
        prop::collection::vec(((0u32..4, 0u32..4), -5i64..=5, 1i64..4), 0..6).prop_map(|terms| {
            let r = Ring::new(["x", "y"]);
            Polynomial::from_terms(
                &r,
                terms.into_iter().map(|((a, b), n, d)| (Monomial::new(vec![a, b]), rat(n, d))),
            )
        })
    }

    proptest! {
        #[test]
        fn ring_axioms(a in arb_poly(), b in arb_poly(), c in arb_poly()) {
            prop_assert_eq!(&(&a + &b) * &c, &(&a * &c) + &(&b * &c));
            prop_assert_eq!(&a * &b, &b * &a);
            prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
        }

        #[test]
        fn leibniz_rule(a in arb_poly(), b in arb_poly(), i in 0usize..2) {
            let lhs = (&a * &b).diff(i).unwrap();
            let rhs = &(&a.diff(i).unwrap() * &b) + &(&a * &b.diff(i).unwrap());
            prop_assert_eq!(lhs, rhs);
        }

        #[test]
        fn print_then_parse_is_identity(a in arb_poly()) {
            let text = a.to_string();
            let back = parse_poly(&text, a.ring()).unwrap();
            prop_assert_eq!(back, a);
        }
    }
}
