//! Dense matrices with polynomial entries.

use std::fmt;
use std::sync::Arc;

use crate::poly::{PolyError, Polynomial, Ring};
use crate::rational::Rational;

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct PolyMatrix {
    ring: Arc<Ring>,
    rows: usize,
    cols: usize,
    data: Vec<Polynomial>,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("matrix shapes {left:?} and {right:?} are incompatible for {op}")]
pub struct ShapeError {
    pub op: &'static str,
    pub left: (usize, usize),
    pub right: (usize, usize),
}

impl PolyMatrix {
    pub fn zero(ring: &Arc<Ring>, rows: usize, cols: usize) -> Self {
        PolyMatrix {
            ring: ring.clone(),
            rows,
            cols,
            data: vec![Polynomial::zero(ring); rows * cols],
        }
    }

    pub fn identity(ring: &Arc<Ring>, n: usize) -> Self {
        Self::scalar(ring, n, &Polynomial::one(ring))
    }

    pub fn scalar(ring: &Arc<Ring>, n: usize, value: &Polynomial) -> Self {
        let mut m = Self::zero(ring, n, n);
        for i in 0..n {
            m.set(i, i, value.clone());
        }
        m
    }

    /// Row-major construction; panics on ragged input.
    pub fn from_rows(ring: &Arc<Ring>, rows: Vec<Vec<Polynomial>>) -> Self {
        let nrows = rows.len();
        let ncols = rows.first().map(Vec::len).unwrap_or(0);
        assert!(rows.iter().all(|r| r.len() == ncols), "ragged matrix");
        PolyMatrix {
            ring: ring.clone(),
            rows: nrows,
            cols: ncols,
            data: rows.into_iter().flatten().collect(),
        }
    }

    pub fn from_fn(ring: &Arc<Ring>, rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> Polynomial) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for r in 0..rows {
            for c in 0..cols {
                data.push(f(r, c));
            }
        }
        PolyMatrix {
            ring: ring.clone(),
            rows,
            cols,
            data,
        }
    }

    pub fn ring(&self) -> &Arc<Ring> {
        &self.ring
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn shape(&self) -> (usize, usize) {
        (self.rows, self.cols)
    }

    pub fn get(&self, r: usize, c: usize) -> &Polynomial {
        &self.data[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, value: Polynomial) {
        self.data[r * self.cols + c] = value;
    }

    pub fn entries(&self) -> impl Iterator<Item = &Polynomial> {
        self.data.iter()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Polynomial::is_zero)
    }

    /// Largest total degree among the entries (0 for the zero matrix).
    pub fn max_degree(&self) -> u32 {
        self.data.iter().filter_map(Polynomial::degree).max().unwrap_or(0)
    }

    pub fn try_mul(&self, other: &PolyMatrix) -> Result<PolyMatrix, ShapeError> {
        if self.cols != other.rows {
            return Err(ShapeError {
                op: "product",
                left: self.shape(),
                right: other.shape(),
            });
        }
        let mut out = PolyMatrix::zero(&self.ring, self.rows, other.cols);
        for r in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(r, k);
                if a.is_zero() {
                    continue;
                }
                for c in 0..other.cols {
                    let b = other.get(k, c);
                    if b.is_zero() {
                        continue;
                    }
                    let idx = r * out.cols + c;
                    out.data[idx] = &out.data[idx] + &(a * b);
                }
            }
        }
        Ok(out)
    }

    pub fn try_add(&self, other: &PolyMatrix) -> Result<PolyMatrix, ShapeError> {
        if self.shape() != other.shape() {
            return Err(ShapeError {
                op: "sum",
                left: self.shape(),
                right: other.shape(),
            });
        }
        Ok(PolyMatrix {
            ring: self.ring.clone(),
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&other.data).map(|(a, b)| a + b).collect(),
        })
    }

    pub fn try_sub(&self, other: &PolyMatrix) -> Result<PolyMatrix, ShapeError> {
        self.try_add(&other.neg())
    }

    pub fn mul(&self, other: &PolyMatrix) -> PolyMatrix {
        self.try_mul(other).expect("matrix product shape")
    }

    pub fn add(&self, other: &PolyMatrix) -> PolyMatrix {
        self.try_add(other).expect("matrix sum shape")
    }

    pub fn sub(&self, other: &PolyMatrix) -> PolyMatrix {
        self.try_sub(other).expect("matrix difference shape")
    }

    pub fn neg(&self) -> PolyMatrix {
        self.map(|p| -p)
    }

    pub fn scale(&self, c: &Rational) -> PolyMatrix {
        self.map(|p| p.scale(c))
    }

    pub fn scale_poly(&self, f: &Polynomial) -> PolyMatrix {
        self.map(|p| p * f)
    }

    pub fn map(&self, f: impl Fn(&Polynomial) -> Polynomial) -> PolyMatrix {
        PolyMatrix {
            ring: self.ring.clone(),
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(f).collect(),
        }
    }

    pub fn diff(&self, index: usize) -> Result<PolyMatrix, PolyError> {
        let data = self.data.iter().map(|p| p.diff(index)).collect::<Result<Vec<_>, _>>()?;
        Ok(PolyMatrix {
            ring: self.ring.clone(),
            rows: self.rows,
            cols: self.cols,
            data,
        })
    }

    pub fn trace(&self) -> Polynomial {
        let mut acc = Polynomial::zero(&self.ring);
        for i in 0..self.rows.min(self.cols) {
            acc = &acc + self.get(i, i);
        }
        acc
    }

    /// Block matrix `[[a, b], [c, d]]`.
    pub fn block2(a: &PolyMatrix, b: &PolyMatrix, c: &PolyMatrix, d: &PolyMatrix) -> PolyMatrix {
        assert_eq!(a.rows, b.rows);
        assert_eq!(c.rows, d.rows);
        assert_eq!(a.cols, c.cols);
        assert_eq!(b.cols, d.cols);
        let rows = a.rows + c.rows;
        let cols = a.cols + b.cols;
        PolyMatrix::from_fn(&a.ring, rows, cols, |r, col| {
            let (top, left) = (r < a.rows, col < a.cols);
            match (top, left) {
                (true, true) => a.get(r, col).clone(),
                (true, false) => b.get(r, col - a.cols).clone(),
                (false, true) => c.get(r - a.rows, col).clone(),
                (false, false) => d.get(r - a.rows, col - a.cols).clone(),
            }
        })
    }

    /// Leibniz expansion; intended for the small square matrices of lifts.
    pub fn determinant(&self) -> Polynomial {
        assert_eq!(self.rows, self.cols, "determinant of a non-square matrix");
        let mut acc = Polynomial::zero(&self.ring);
        for (perm, sign) in crate::signs::signed_permutations(self.rows) {
            let mut term = Polynomial::one(&self.ring);
            for (r, &c) in perm.iter().enumerate() {
                term = &term * self.get(r, c);
                if term.is_zero() {
                    break;
                }
            }
            acc = if sign > 0 { &acc + &term } else { &acc - &term };
        }
        acc
    }

    pub fn transpose(&self) -> PolyMatrix {
        PolyMatrix::from_fn(&self.ring, self.cols, self.rows, |r, c| self.get(c, r).clone())
    }

    pub fn submatrix(&self, row0: usize, rows: usize, col0: usize, cols: usize) -> PolyMatrix {
        PolyMatrix::from_fn(&self.ring, rows, cols, |r, c| self.get(row0 + r, col0 + c).clone())
    }
}

impl fmt::Debug for PolyMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for r in 0..self.rows {
            if r > 0 {
                write!(f, "; ")?;
            }
            for c in 0..self.cols {
                if c > 0 {
                    write!(f, ", ")?;
                }
                write!(f, "{}", self.get(r, c))?;
            }
        }
        write!(f, "]")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::parse_poly;

    #[test]
    fn product_trace_and_blocks() {
        let r = Ring::new(["x", "y"]);
        let p = |s: &str| parse_poly(s, &r).unwrap();
        let a = PolyMatrix::from_rows(&r, vec![vec![p("x"), p("1")], vec![p("0"), p("y")]]);
        let b = PolyMatrix::from_rows(&r, vec![vec![p("y"), p("0")], vec![p("1"), p("x")]]);
        let ab = a.mul(&b);
        assert_eq!(ab.get(0, 0), &p("x*y + 1"));
        assert_eq!(ab.trace(), p("x*y + 1 + x*y"));
        let blk = PolyMatrix::block2(&a, &b, &b, &a);
        assert_eq!(blk.shape(), (4, 4));
        assert_eq!(blk.submatrix(2, 2, 0, 2), b);
        assert!(a.try_mul(&PolyMatrix::zero(&r, 3, 1)).is_err());
        assert_eq!(a.determinant(), p("x*y"));
        assert_eq!(PolyMatrix::identity(&r, 3).determinant(), p("1"));
    }
}
