//! Residue symbols against oracles that do not go through Gröbner bases.

use std::sync::Arc;

use lgpair::rational::{int, rat};
use lgpair::residues::residue_symbol;
use lgpair::{parse_poly, Monomial, PolyMatrix, Polynomial, Rational, Ring};
use num_traits::{One, Zero};
use proptest::prelude::*;

fn ring(n: usize) -> Arc<Ring> {
    Ring::new((0..n).map(|i| format!("x{i}")))
}

fn mono(r: &Arc<Ring>, exps: &[u32]) -> Polynomial {
    Polynomial::term(r, Rational::one(), Monomial::new(exps.to_vec()))
}

fn coeffs_1d(p: &Polynomial) -> Vec<Rational> {
    let deg = p.degree().unwrap_or(0) as usize;
    let mut out = vec![Rational::zero(); deg + 1];
    for (m, c) in p.terms() {
        out[m.exponents()[0] as usize] = c.clone();
    }
    out
}

/// Coefficient of `x^{-1}` in the Laurent expansion of `g / f` at `0`,
/// by long division of power series.
fn laurent_residue(g: &Polynomial, f: &Polynomial) -> Rational {
    let fc = coeffs_1d(f);
    let gc = coeffs_1d(g);
    let e = fc.iter().position(|c| !c.is_zero()).expect("nonzero denominator");
    // g / f = x^{-e} (g / u) with u = f / x^e
    let u: Vec<Rational> = fc[e..].to_vec();
    let mut q: Vec<Rational> = Vec::new();
    for k in 0..e {
        let mut acc = gc.get(k).cloned().unwrap_or_else(Rational::zero);
        for j in 1..=k.min(u.len() - 1) {
            acc -= &u[j] * &q[k - j];
        }
        q.push(acc / &u[0]);
    }
    q.get(e - 1).cloned().unwrap_or_else(Rational::zero)
}

fn poly_1d(r: &Arc<Ring>, coeffs: &[i64]) -> Polynomial {
    Polynomial::from_terms(r, coeffs.iter().enumerate().map(|(k, &c)| (Monomial::new(vec![k as u32]), int(c))))
}

#[test]
fn normalisation_on_exhaustive_small_exponents() {
    for n in 1..=3usize {
        let r = ring(n);
        let xs: Vec<Polynomial> = (0..n).map(|i| Polynomial::var(&r, i)).collect();
        assert_eq!(residue_symbol(&Polynomial::one(&r), &xs).unwrap(), int(1));
        let cap = if n == 3 { 3 } else { 4 };
        let boxes: Vec<Vec<u32>> = lgpair::random::monomials_up_to(n, 3 * cap)
            .into_iter()
            .map(|m| m.exponents().to_vec())
            .filter(|v| v.iter().all(|&e| e < cap))
            .collect();
        for e in boxes.iter().filter(|v| v.iter().all(|&e| e >= 1)) {
            let denoms: Vec<Polynomial> = (0..n).map(|i| xs[i].pow(e[i])).collect();
            for a in &boxes {
                let expected = if a.iter().zip(e).all(|(a, e)| a + 1 == *e) { int(1) } else { int(0) };
                assert_eq!(residue_symbol(&mono(&r, a), &denoms).unwrap(), expected, "a = {a:?}, e = {e:?}");
            }
        }
    }
}

#[test]
fn d5_functional_on_basis_monomials() {
    let r = Ring::new(["x", "y"]);
    let den = [parse_poly("2*x*y", &r).unwrap(), parse_poly("x^2 + 4*y^3", &r).unwrap()];
    let expected = [("1", int(0)), ("x", int(0)), ("y", int(0)), ("y^2", int(0)), ("y^3", rat(1, 8)), ("x^2", rat(-1, 2))];
    for (m, v) in expected {
        assert_eq!(residue_symbol(&parse_poly(m, &r).unwrap(), &den).unwrap(), v, "{m}");
    }
}

fn small_poly(n: usize, max_degree: u32) -> impl Strategy<Value = Vec<(Vec<u32>, i64)>> {
    prop::collection::vec((prop::collection::vec(0..=max_degree, n), -4i64..=4), 0..8)
}

fn build(r: &Arc<Ring>, terms: &[(Vec<u32>, i64)], max_degree: u32) -> Polynomial {
    Polynomial::from_terms(
        r,
        terms
            .iter()
            .filter(|(e, _)| e.iter().sum::<u32>() <= max_degree)
            .map(|(e, c)| (Monomial::new(e.clone()), int(*c))),
    )
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    /// One variable: the transformation rule against Laurent expansion.
    #[test]
    fn one_variable_matches_laurent_series(
        e in 1usize..4,
        tail in prop::collection::vec(-3i64..=3, 0..4),
        lead in prop::sample::select(vec![-3i64, -2, -1, 1, 2, 3]),
        g in prop::collection::vec(-5i64..=5, 0..7),
    ) {
        let r = ring(1);
        let mut fc = vec![0i64; e];
        fc.push(lead);
        fc.extend(tail);
        let f = poly_1d(&r, &fc);
        let g = poly_1d(&r, &g);
        prop_assert_eq!(residue_symbol(&g, &[f.clone()]).unwrap(), laurent_residue(&g, &f));
    }

    /// D5: the closed formula on raw coefficients for any `f` of degree <= 6.
    #[test]
    fn d5_functional_on_random_polynomials(terms in small_poly(2, 6)) {
        let r = Ring::new(["x", "y"]);
        let f = build(&r, &terms, 6);
        let den = [parse_poly("2*x*y", &r).unwrap(), parse_poly("x^2 + 4*y^3", &r).unwrap()];
        let cx2 = f.coefficient(&Monomial::new(vec![2, 0]));
        let cy3 = f.coefficient(&Monomial::new(vec![0, 3]));
        let expected = rat(-1, 2) * cx2 + rat(1, 8) * cy3;
        prop_assert_eq!(residue_symbol(&f, &den).unwrap(), expected);
    }

    /// For `f = M x^e` with `M(0)` invertible, `Res[g det M / f] = coeff of x^{e-1} in g`.
    #[test]
    fn monomial_transformation_oracle(
        e in prop::collection::vec(1u32..3, 2),
        shift in prop::collection::vec(small_poly(2, 2), 4),
        g in small_poly(2, 4),
    ) {
        let r = ring(2);
        let g = build(&r, &g, 4);
        // constant part [[1, 1], [0, 1]] plus terms vanishing at the origin
        let base = [[1i64, 1], [0, 1]];
        let m = PolyMatrix::from_fn(&r, 2, 2, |i, j| {
            let extra = build(&r, &shift[2 * i + j], 2);
            let extra = Polynomial::from_terms(&r, extra.terms().filter(|(m, _)| m.degree() > 0).map(|(m, c)| (m.clone(), c.clone())));
            &Polynomial::constant(&r, int(base[i][j])) + &extra
        });
        let powers: Vec<Polynomial> = (0..2).map(|i| Polynomial::var(&r, i).pow(e[i])).collect();
        let f: Vec<Polynomial> = (0..2).map(|i| &(m.get(i, 0) * &powers[0]) + &(m.get(i, 1) * &powers[1])).collect();
        let target = Monomial::new(e.iter().map(|k| k - 1).collect());
        match residue_symbol(&(&g * &m.determinant()), &f) {
            Ok(v) => prop_assert_eq!(v, g.coefficient(&target)),
            // a positive-dimensional component elsewhere; not a counterexample
            Err(lgpair::residues::ResidueError::NotZeroDimensional { .. }) => {}
            Err(other) => prop_assert!(false, "{other}"),
        }
    }

    #[test]
    fn residue_is_linear_in_the_numerator(a in small_poly(2, 5), b in small_poly(2, 5), c in -5i64..=5) {
        let r = Ring::new(["x", "y"]);
        let den = [parse_poly("x^2 + y^3", &r).unwrap(), parse_poly("x*y - y^2", &r).unwrap()];
        let (a, b) = (build(&r, &a, 5), build(&r, &b, 5));
        let lhs = residue_symbol(&(&a + &b.scale(&int(c))), &den).unwrap();
        let rhs = residue_symbol(&a, &den).unwrap() + int(c) * residue_symbol(&b, &den).unwrap();
        prop_assert_eq!(lhs, rhs);
    }
}
