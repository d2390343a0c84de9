//! Exact sparse linear algebra over the rationals.
//!
//! Everything is built on [`Echelon`], an incrementally grown row-echelon
//! basis. Inserting the images of basis vectors with their origin tracked
//! yields kernels and solutions of linear systems without ever
//! materialising a dense matrix.

use std::collections::BTreeMap;

use num_traits::{One, Zero};

use crate::rational::Rational;

/// Sorted `(index, value)` pairs with no zero values.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct SparseVec {
    entries: Vec<(usize, Rational)>,
}

impl SparseVec {
    pub fn new() -> Self {
        SparseVec { entries: Vec::new() }
    }

    pub fn unit(index: usize) -> Self {
        SparseVec {
            entries: vec![(index, Rational::one())],
        }
    }

    pub fn from_map(map: BTreeMap<usize, Rational>) -> Self {
        SparseVec {
            entries: map.into_iter().filter(|(_, v)| !v.is_zero()).collect(),
        }
    }

    pub fn from_dense(values: &[Rational]) -> Self {
        SparseVec {
            entries: values
                .iter()
                .enumerate()
                .filter(|(_, v)| !v.is_zero())
                .map(|(i, v)| (i, v.clone()))
                .collect(),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn entries(&self) -> &[(usize, Rational)] {
        &self.entries
    }

    pub fn get(&self, index: usize) -> Rational {
        match self.entries.binary_search_by_key(&index, |(i, _)| *i) {
            Ok(pos) => self.entries[pos].1.clone(),
            Err(_) => Rational::zero(),
        }
    }

    pub fn leading(&self) -> Option<&(usize, Rational)> {
        self.entries.first()
    }

    pub fn scale(&self, c: &Rational) -> SparseVec {
        if c.is_zero() {
            return SparseVec::new();
        }
        SparseVec {
            entries: self.entries.iter().map(|(i, v)| (*i, v * c)).collect(),
        }
    }

    /// `self + c * other`
    pub fn axpy(&self, c: &Rational, other: &SparseVec) -> SparseVec {
        if c.is_zero() || other.is_zero() {
            return self.clone();
        }
        let mut out = Vec::with_capacity(self.entries.len() + other.entries.len());
        let (mut a, mut b) = (0, 0);
        while a < self.entries.len() || b < other.entries.len() {
            let ia = self.entries.get(a).map(|e| e.0);
            let ib = other.entries.get(b).map(|e| e.0);
            match (ia, ib) {
                (Some(i), Some(j)) if i == j => {
                    let v = &self.entries[a].1 + c * &other.entries[b].1;
                    if !v.is_zero() {
                        out.push((i, v));
                    }
                    a += 1;
                    b += 1;
                }
                (Some(i), Some(j)) if i < j => {
                    out.push(self.entries[a].clone());
                    a += 1;
                }
                (Some(_), None) => {
                    out.push(self.entries[a].clone());
                    a += 1;
                }
                (_, Some(j)) => {
                    out.push((j, c * &other.entries[b].1));
                    b += 1;
                }
                (None, None) => unreachable!(),
            }
        }
        SparseVec { entries: out }
    }

    pub fn to_dense(&self, len: usize) -> Vec<Rational> {
        let mut out = vec![Rational::zero(); len];
        for (i, v) in &self.entries {
            out[*i] = v.clone();
        }
        out
    }
}

struct Row {
    vec: SparseVec,
    combo: SparseVec,
}

/// Row-echelon basis of a subspace, with optional bookkeeping of how each
/// stored row was built from inserted vectors.
#[derive(Default)]
pub struct Echelon {
    rows: BTreeMap<usize, Row>,
}

pub enum Insertion {
    /// The vector was independent; its pivot column.
    Independent(usize),
    /// The vector was dependent; the tracked combination that reduces to zero.
    Dependent(SparseVec),
}

impl Echelon {
    pub fn new() -> Self {
        Echelon { rows: BTreeMap::new() }
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    /// Reduces `vec` against the stored rows, applying the same operations
    /// to `combo`.
    pub fn reduce(&self, vec: SparseVec, combo: SparseVec) -> (SparseVec, SparseVec) {
        let (mut vec, mut combo) = (vec, combo);
        let mut cursor = 0usize;
        loop {
            let hit = vec
                .entries
                .iter()
                .find(|(i, _)| *i >= cursor && self.rows.contains_key(i))
                .map(|(i, v)| (*i, v.clone()));
            let Some((pivot, value)) = hit else {
                return (vec, combo);
            };
            let row = &self.rows[&pivot];
            let c = -value;
            vec = vec.axpy(&c, &row.vec);
            if !row.combo.is_zero() {
                combo = combo.axpy(&c, &row.combo);
            }
            cursor = pivot + 1;
        }
    }

    pub fn contains(&self, vec: &SparseVec) -> bool {
        self.reduce(vec.clone(), SparseVec::new()).0.is_zero()
    }

    pub fn insert(&mut self, vec: SparseVec) -> Insertion {
        self.insert_tracked(vec, SparseVec::new())
    }

    pub fn insert_tracked(&mut self, vec: SparseVec, combo: SparseVec) -> Insertion {
        let (vec, combo) = self.reduce(vec, combo);
        match vec.leading().cloned() {
            None => Insertion::Dependent(combo),
            Some((pivot, lead)) => {
                let inv = Rational::one() / lead;
                self.rows.insert(
                    pivot,
                    Row {
                        vec: vec.scale(&inv),
                        combo: combo.scale(&inv),
                    },
                );
                Insertion::Independent(pivot)
            }
        }
    }

    /// If `target` lies in the span, returns coefficients over the tracked
    /// origins expressing it.
    pub fn solve(&self, target: &SparseVec) -> Option<SparseVec> {
        let (rest, combo) = self.reduce(target.clone(), SparseVec::new());
        if rest.is_zero() {
            Some(combo.scale(&-Rational::one()))
        } else {
            None
        }
    }
}

/// Kernel of the linear map sending basis vector `j` to `images[j]`.
pub fn kernel(images: &[SparseVec]) -> Vec<SparseVec> {
    let mut ech = Echelon::new();
    let mut out = Vec::new();
    for (j, img) in images.iter().enumerate() {
        if let Insertion::Dependent(combo) = ech.insert_tracked(img.clone(), SparseVec::unit(j)) {
            out.push(combo);
        }
    }
    out
}

pub fn rank(rows: &[SparseVec]) -> usize {
    let mut ech = Echelon::new();
    for r in rows {
        ech.insert(r.clone());
    }
    ech.rank()
}

pub fn dense_rank(rows: &[Vec<Rational>]) -> usize {
    let sparse: Vec<SparseVec> = rows.iter().map(|r| SparseVec::from_dense(r)).collect();
    rank(&sparse)
}

/// Determinant by Gaussian elimination over Q.
pub fn determinant(matrix: &[Vec<Rational>]) -> Rational {
    let n = matrix.len();
    let mut a: Vec<Vec<Rational>> = matrix.to_vec();
    let mut det = Rational::one();
    for col in 0..n {
        let Some(piv) = (col..n).find(|&r| !a[r][col].is_zero()) else {
            return Rational::zero();
        };
        if piv != col {
            a.swap(piv, col);
            det = -det;
        }
        let p = a[col][col].clone();
        det *= &p;
        for r in col + 1..n {
            if a[r][col].is_zero() {
                continue;
            }
            let f = &a[r][col] / &p;
            for c in col..n {
                let delta = &f * &a[col][c];
                a[r][c] -= delta;
            }
        }
    }
    det
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::int;

    fn sv(v: &[i64]) -> SparseVec {
        SparseVec::from_dense(&v.iter().map(|&x| int(x)).collect::<Vec<_>>())
    }

    #[test]
    fn kernel_of_rank_one_map() {
        // columns (1,2), (2,4), (0,1)
        let images = vec![sv(&[1, 2]), sv(&[2, 4]), sv(&[0, 1])];
        let ker = kernel(&images);
        assert_eq!(ker.len(), 1);
        let k = &ker[0];
        assert!(k.get(2).is_zero());
        let check = images
            .iter()
            .enumerate()
            .fold(SparseVec::new(), |acc, (j, img)| acc.axpy(&k.get(j), img));
        assert!(check.is_zero());
    }

    #[test]
    fn solve_recovers_combination() {
        let mut ech = Echelon::new();
        ech.insert_tracked(sv(&[1, 1, 0]), SparseVec::unit(0));
        ech.insert_tracked(sv(&[0, 1, 1]), SparseVec::unit(1));
        let target = sv(&[2, 5, 3]);
        let coeffs = ech.solve(&target).unwrap();
        assert_eq!(coeffs.get(0), int(2));
        assert_eq!(coeffs.get(1), int(3));
        assert!(ech.solve(&sv(&[1, 0, 0])).is_none());
    }

    #[test]
    fn determinant_and_rank() {
        let m = vec![vec![int(2), int(1)], vec![int(4), int(3)]];
        assert_eq!(determinant(&m), int(2));
        let s = vec![vec![int(1), int(2)], vec![int(2), int(4)]];
        assert_eq!(determinant(&s), int(0));
        assert_eq!(dense_rank(&s), 1);
        assert_eq!(dense_rank(&m), 2);
    }
}
