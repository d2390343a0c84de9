//! Deformation retracts of finite complexes of free modules and the
//! homological perturbation lemma.
//!
//! A graded map is stored as one total matrix over the direct sum of all
//! degrees. It also records its own degree and the gradings on both ends. Constructors reject entries outside the allowed blocks, so all
//! identities can be checked with plain matrix arithmetic.

use std::sync::Arc;

use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::matrix::PolyMatrix;
use crate::poly::{Monomial, Polynomial, Ring};
use crate::rational::rat;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum HomotopyError {
    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),
    #[error("map has entries outside degree {degree} blocks")]
    NotHomogeneous { degree: i32 },
    #[error("perturbation hypothesis violated: {0}")]
    HypothesisViolated(&'static str),
    #[error("perturbation is not small: (mu h)^{bound} is nonzero")]
    NotSmall { bound: usize },
}

/// Ranks of a free graded module concentrated in `lo..lo + ranks.len()`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Grading {
    lo: i32,
    ranks: Vec<usize>,
}

impl Grading {
    pub fn new(lo: i32, ranks: Vec<usize>) -> Self {
        Grading { lo, ranks }
    }

    pub fn lo(&self) -> i32 {
        self.lo
    }

    pub fn hi(&self) -> i32 {
        self.lo + self.ranks.len() as i32 - 1
    }

    pub fn ranks(&self) -> &[usize] {
        &self.ranks
    }

    pub fn total(&self) -> usize {
        self.ranks.iter().sum()
    }

    pub fn rank(&self, degree: i32) -> usize {
        self.slot(degree).map(|k| self.ranks[k]).unwrap_or(0)
    }

    fn slot(&self, degree: i32) -> Option<usize> {
        let k = degree - self.lo;
        (k >= 0 && (k as usize) < self.ranks.len()).then_some(k as usize)
    }

    /// Offset of the first basis vector in `degree`.
    pub fn offset(&self, degree: i32) -> usize {
        let k = (degree - self.lo).clamp(0, self.ranks.len() as i32) as usize;
        self.ranks[..k].iter().sum()
    }

    /// Degree of the basis vector at `index` in the total module.
    pub fn degree_of(&self, index: usize) -> i32 {
        let mut acc = 0;
        for (k, r) in self.ranks.iter().enumerate() {
            acc += r;
            if index < acc {
                return self.lo + k as i32;
            }
        }
        panic!("index {index} outside grading");
    }

    pub fn degrees(&self) -> impl Iterator<Item = i32> + '_ {
        self.lo..=self.hi()
    }
}

/// Homogeneous map of a fixed degree between graded free modules.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GradedMap {
    source: Grading,
    target: Grading,
    degree: i32,
    total: PolyMatrix,
}

impl GradedMap {
    pub fn new(source: Grading, target: Grading, degree: i32, total: PolyMatrix) -> Result<Self, HomotopyError> {
        if total.shape() != (target.total(), source.total()) {
            return Err(HomotopyError::ShapeMismatch(format!(
                "matrix {:?} for modules of rank {} -> {}",
                total.shape(),
                source.total(),
                target.total()
            )));
        }
        for r in 0..total.rows() {
            for c in 0..total.cols() {
                if !total.get(r, c).is_zero() && target.degree_of(r) != source.degree_of(c) + degree {
                    return Err(HomotopyError::NotHomogeneous { degree });
                }
            }
        }
        Ok(GradedMap {
            source,
            target,
            degree,
            total,
        })
    }

    pub fn zero(ring: &Arc<Ring>, source: Grading, target: Grading, degree: i32) -> Self {
        let total = PolyMatrix::zero(ring, target.total(), source.total());
        GradedMap {
            source,
            target,
            degree,
            total,
        }
    }

    pub fn identity(ring: &Arc<Ring>, grading: Grading) -> Self {
        let total = PolyMatrix::identity(ring, grading.total());
        GradedMap {
            source: grading.clone(),
            target: grading,
            degree: 0,
            total,
        }
    }

    /// Builds a map from its blocks `source degree i -> target degree i + degree`.
    pub fn from_blocks(
        ring: &Arc<Ring>,
        source: Grading,
        target: Grading,
        degree: i32,
        mut block: impl FnMut(i32) -> Option<PolyMatrix>,
    ) -> Result<Self, HomotopyError> {
        let mut total = PolyMatrix::zero(ring, target.total(), source.total());
        for i in source.degrees() {
            let j = i + degree;
            let Some(b) = block(i) else { continue };
            if b.shape() != (target.rank(j), source.rank(i)) {
                return Err(HomotopyError::ShapeMismatch(format!(
                    "block {i} -> {j} has shape {:?}, expected {:?}",
                    b.shape(),
                    (target.rank(j), source.rank(i))
                )));
            }
            let (r0, c0) = (target.offset(j), source.offset(i));
            for r in 0..b.rows() {
                for c in 0..b.cols() {
                    total.set(r0 + r, c0 + c, b.get(r, c).clone());
                }
            }
        }
        Ok(GradedMap {
            source,
            target,
            degree,
            total,
        })
    }

    pub fn source(&self) -> &Grading {
        &self.source
    }

    pub fn target(&self) -> &Grading {
        &self.target
    }

    pub fn degree(&self) -> i32 {
        self.degree
    }

    pub fn total(&self) -> &PolyMatrix {
        &self.total
    }

    pub fn is_zero(&self) -> bool {
        self.total.is_zero()
    }

    /// Block from source degree `i` to target degree `i + degree`.
    pub fn block(&self, i: i32) -> PolyMatrix {
        let j = i + self.degree;
        self.total.submatrix(
            self.target.offset(j),
            self.target.rank(j),
            self.source.offset(i),
            self.source.rank(i),
        )
    }

    /// `self ∘ other`
    pub fn compose(&self, other: &GradedMap) -> Result<GradedMap, HomotopyError> {
        if self.source != other.target {
            return Err(HomotopyError::ShapeMismatch("composition of incompatible gradings".into()));
        }
        Ok(GradedMap {
            source: other.source.clone(),
            target: self.target.clone(),
            degree: self.degree + other.degree,
            total: self.total.mul(&other.total),
        })
    }

    pub fn add(&self, other: &GradedMap) -> Result<GradedMap, HomotopyError> {
        if self.source != other.source || self.target != other.target || self.degree != other.degree {
            return Err(HomotopyError::ShapeMismatch("sum of maps of different type".into()));
        }
        Ok(GradedMap {
            total: self.total.add(&other.total),
            ..self.clone()
        })
    }

    pub fn neg(&self) -> GradedMap {
        GradedMap {
            total: self.total.neg(),
            ..self.clone()
        }
    }

    fn sum(&self, other: &GradedMap) -> GradedMap {
        self.add(other).expect("maps of equal type")
    }

    fn then(&self, other: &GradedMap) -> GradedMap {
        self.compose(other).expect("composable maps")
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FiniteComplex {
    differential: GradedMap,
}

impl FiniteComplex {
    /// Checks that `b` is an endomorphism of degree one with `b∘b = 0`.
    pub fn new(differential: GradedMap) -> Result<Self, HomotopyError> {
        if differential.degree != 1 || differential.source != differential.target {
            return Err(HomotopyError::ShapeMismatch("differential must be a degree one endomorphism".into()));
        }
        if !differential.then(&differential).is_zero() {
            return Err(HomotopyError::HypothesisViolated("b∘b != 0"));
        }
        Ok(FiniteComplex { differential })
    }

    pub fn zero(ring: &Arc<Ring>, grading: Grading) -> Self {
        FiniteComplex {
            differential: GradedMap::zero(ring, grading.clone(), grading, 1),
        }
    }

    pub fn grading(&self) -> &Grading {
        &self.differential.source
    }

    pub fn differential(&self) -> &GradedMap {
        &self.differential
    }

    pub fn ring(&self) -> &Arc<Ring> {
        self.differential.total.ring()
    }
}

/// `(L, b) <-> (M, b)` with `p ι = 1` and `ι p = 1 + b h + h b`.
#[derive(Clone, Debug)]
pub struct DeformationRetractDatum {
    pub small: FiniteComplex,
    pub big: FiniteComplex,
    pub iota: GradedMap,
    pub p: GradedMap,
    pub h: GradedMap,
}

fn check_type(map: &GradedMap, source: &Grading, target: &Grading, degree: i32, what: &str) -> Result<(), HomotopyError> {
    if map.source != *source || map.target != *target || map.degree != degree {
        return Err(HomotopyError::ShapeMismatch(format!("{what} has the wrong source, target or degree")));
    }
    Ok(())
}

fn check_shapes(d: &DeformationRetractDatum) -> Result<(), HomotopyError> {
    let (l, m) = (d.small.grading(), d.big.grading());
    check_type(&d.iota, l, m, 0, "iota")?;
    check_type(&d.p, m, l, 0, "p")?;
    check_type(&d.h, m, m, -1, "h")
}

/// True iff `ι`, `p` are chain maps, `p ι = 1` and `ι p = 1 + b h + h b`.
pub fn verify_drd(d: &DeformationRetractDatum) -> Result<bool, HomotopyError> {
    check_shapes(d)?;
    let ring = d.big.ring();
    let (bl, bm) = (d.small.differential(), d.big.differential());
    let squares_vanish = bl.then(bl).is_zero() && bm.then(bm).is_zero();
    let iota_chain = bm.then(&d.iota) == d.iota.then(bl);
    let p_chain = bl.then(&d.p) == d.p.then(bm);
    let retract = d.p.then(&d.iota) == GradedMap::identity(ring, d.small.grading().clone());
    let homotopy = d.iota.then(&d.p)
        == GradedMap::identity(ring, d.big.grading().clone())
            .sum(&bm.then(&d.h))
            .sum(&d.h.then(bm));
    Ok(squares_vanish && iota_chain && p_chain && retract && homotopy)
}

/// Transfers the retract along the perturbation `b -> b + mu`.
///
/// With `A = sum_k (mu h)^k mu` the new datum has `ι∞ = ι + h A ι`,
/// `h∞ = h + h A h` and unchanged `p` and small complex.
pub fn perturb_drd(
    d: &DeformationRetractDatum,
    mu: &GradedMap,
    bound: Option<usize>,
) -> Result<DeformationRetractDatum, HomotopyError> {
    check_shapes(d)?;
    let m = d.big.grading();
    check_type(mu, m, m, 1, "mu")?;
    let b_new = d.big.differential().sum(mu);
    if !b_new.then(&b_new).is_zero() {
        return Err(HomotopyError::HypothesisViolated("(b + mu)^2 != 0"));
    }
    if !d.p.then(&d.h).is_zero() {
        return Err(HomotopyError::HypothesisViolated("p h != 0"));
    }
    if !d.p.then(mu).is_zero() {
        return Err(HomotopyError::HypothesisViolated("p mu != 0"));
    }
    let bound = bound.unwrap_or_else(|| m.total().max(1));
    let muh = mu.then(&d.h);
    let mut power = muh.clone();
    let mut acc = mu.clone();
    let mut term = mu.clone();
    let mut steps = 0;
    while !power.is_zero() {
        steps += 1;
        if steps >= bound {
            return Err(HomotopyError::NotSmall { bound });
        }
        term = muh.then(&term);
        acc = acc.sum(&term);
        power = muh.then(&power);
    }
    let hah = d.h.then(&acc);
    Ok(DeformationRetractDatum {
        small: d.small.clone(),
        big: FiniteComplex { differential: b_new },
        iota: d.iota.sum(&hah.then(&d.iota)),
        p: d.p.clone(),
        h: d.h.sum(&hah.then(&d.h)),
    })
}

/// A retract together with a perturbation satisfying the lemma's
/// hypotheses, for randomized testing.
#[derive(Clone, Debug)]
pub struct PerturbationInstance {
    pub datum: DeformationRetractDatum,
    pub mu: GradedMap,
}

/// Random instance over `Q[x]`: `M = L ⊕ C` with `C` a sum of cones on
/// identity maps and `h = -1` across each cone. The perturbation `mu` comes
/// from a strictly triangular map between the cones, so `mu h` is nilpotent.
pub fn random_perturbation_instance(seed: u64) -> PerturbationInstance {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let ring = Ring::new(["x"]);
    let levels = 3usize;
    let l_ranks: Vec<usize> = (0..levels).map(|_| rng.gen_range(0..=2)).collect();
    // cones[k] = ranks of the cones sitting in degrees (k, k + 1)
    let cones: Vec<Vec<usize>> = (0..levels - 1)
        .map(|_| (0..rng.gen_range(1..=2)).map(|_| rng.gen_range(1..=2)).collect())
        .collect();
    let poly = |rng: &mut ChaCha8Rng| {
        let terms: Vec<(Monomial, crate::rational::Rational)> = (0..rng.gen_range(0..=2))
            .map(|_| (Monomial::new(vec![rng.gen_range(0..=2)]), rat(rng.gen_range(-3..=3), 1)))
            .collect();
        Polynomial::from_terms(&ring, terms)
    };

    // layout of M in each degree: L part, then tops of cones from level k-1,
    // then bottoms of cones at level k
    let top_rank = |k: usize| -> usize { if k == 0 { 0 } else { cones[k - 1].iter().sum() } };
    let bottom_rank = |k: usize| -> usize { if k + 1 < levels { cones[k].iter().sum() } else { 0 } };
    let m_ranks: Vec<usize> = (0..levels).map(|k| l_ranks[k] + top_rank(k) + bottom_rank(k)).collect();
    let lg = Grading::new(0, l_ranks.clone());
    let mg = Grading::new(0, m_ranks.clone());

    let bl_blocks: Vec<PolyMatrix> = (0..levels - 1)
        .map(|k| {
            if k == 0 {
                PolyMatrix::from_fn(&ring, l_ranks[1], l_ranks[0], |_, _| poly(&mut rng))
            } else {
                PolyMatrix::zero(&ring, l_ranks[k + 1], l_ranks[k])
            }
        })
        .collect();
    let bl = GradedMap::from_blocks(&ring, lg.clone(), lg.clone(), 1, |i| {
        bl_blocks.get(i as usize).cloned()
    })
    .unwrap();

    let top_off = |k: usize| l_ranks[k];
    let bottom_off = |k: usize| l_ranks[k] + top_rank(k);

    let mut b_c = vec![PolyMatrix::zero(&ring, 0, 0); levels - 1];
    let mut v = vec![PolyMatrix::zero(&ring, 0, 0); levels - 1];
    let mut w = vec![PolyMatrix::zero(&ring, 0, 0); levels];
    for k in 0..levels {
        w[k] = PolyMatrix::zero(&ring, m_ranks[k], l_ranks[k]);
        for r in l_ranks[k]..m_ranks[k] {
            for c in 0..l_ranks[k] {
                w[k].set(r, c, poly(&mut rng));
            }
        }
    }
    for k in 0..levels - 1 {
        let mut bc = PolyMatrix::zero(&ring, m_ranks[k + 1], m_ranks[k]);
        let mut vk = PolyMatrix::zero(&ring, m_ranks[k + 1], m_ranks[k]);
        let mut starts = Vec::new();
        let mut acc = 0;
        for &r in &cones[k] {
            starts.push(acc);
            acc += r;
        }
        for (ci, &r) in cones[k].iter().enumerate() {
            for e in 0..r {
                bc.set(top_off(k + 1) + starts[ci] + e, bottom_off(k) + starts[ci] + e, Polynomial::one(&ring));
            }
            for (cj, &rj) in cones[k].iter().enumerate().skip(ci + 1) {
                for a in 0..rj {
                    for e in 0..r {
                        vk.set(top_off(k + 1) + starts[cj] + a, bottom_off(k) + starts[ci] + e, poly(&mut rng));
                    }
                }
            }
        }
        b_c[k] = bc;
        v[k] = vk;
    }

    // b_M = b_L ⊕ b_C
    let bm = GradedMap::from_blocks(&ring, mg.clone(), mg.clone(), 1, |i| {
        let k = i as usize;
        if k + 1 >= levels {
            return None;
        }
        let mut blk = b_c[k].clone();
        for r in 0..l_ranks[k + 1] {
            for c in 0..l_ranks[k] {
                blk.set(r, c, bl_blocks[k].get(r, c).clone());
            }
        }
        Some(blk)
    })
    .unwrap();
    let h = GradedMap::from_blocks(&ring, mg.clone(), mg.clone(), -1, |i| {
        let k = i as usize;
        if k == 0 {
            return None;
        }
        Some(b_c[k - 1].neg().transpose())
    })
    .unwrap();
    let iota = GradedMap::from_blocks(&ring, lg.clone(), mg.clone(), 0, |i| {
        let k = i as usize;
        Some(PolyMatrix::from_fn(&ring, m_ranks[k], l_ranks[k], |r, c| {
            if r == c { Polynomial::one(&ring) } else { Polynomial::zero(&ring) }
        }))
    })
    .unwrap();
    let p = GradedMap::from_blocks(&ring, mg.clone(), lg.clone(), 0, |i| {
        let k = i as usize;
        Some(PolyMatrix::from_fn(&ring, l_ranks[k], m_ranks[k], |r, c| {
            if r == c { Polynomial::one(&ring) } else { Polynomial::zero(&ring) }
        }))
    })
    .unwrap();
    let vmap = GradedMap::from_blocks(&ring, mg.clone(), mg.clone(), 1, |i| v.get(i as usize).cloned()).unwrap();
    let wmap = GradedMap::from_blocks(&ring, lg.clone(), mg.clone(), 0, |i| Some(w[i as usize].clone())).unwrap();
    let bcmap = GradedMap::from_blocks(&ring, mg.clone(), mg.clone(), 1, |i| b_c.get(i as usize).cloned()).unwrap();
    // u = (b_C + v) w - w b_L, placed in the L columns of mu
    let u = bcmap.sum(&vmap).then(&wmap).sum(&wmap.then(&bl).neg());
    let mu = vmap.sum(&u.then(&p));

    let mut datum = DeformationRetractDatum {
        small: FiniteComplex::new(bl).unwrap(),
        big: FiniteComplex::new(bm).unwrap(),
        iota,
        p,
        h,
    };
    let mut mu = mu;
    if rng.gen_bool(0.5) {
        // conjugate by a unipotent automorphism that preserves L-rows being killed by p
        let n = PolyMatrix::from_fn(&ring, mg.total(), mg.total(), |r, c| {
            let same_degree = mg.degree_of(r) == mg.degree_of(c);
            let in_c = r >= mg.offset(mg.degree_of(r)) + l_ranks[mg.degree_of(r) as usize];
            if same_degree && r < c && in_c && rng.gen_bool(0.4) {
                poly(&mut rng)
            } else {
                Polynomial::zero(&ring)
            }
        });
        let g = GradedMap::new(mg.clone(), mg.clone(), 0, PolyMatrix::identity(&ring, mg.total()).add(&n)).unwrap();
        let mut inv_total = PolyMatrix::identity(&ring, mg.total());
        let mut term = PolyMatrix::identity(&ring, mg.total());
        loop {
            term = term.mul(&n).neg();
            if term.is_zero() {
                break;
            }
            inv_total = inv_total.add(&term);
        }
        let ginv = GradedMap::new(mg.clone(), mg.clone(), 0, inv_total).unwrap();
        let conj = |f: &GradedMap| g.then(f).then(&ginv);
        datum = DeformationRetractDatum {
            big: FiniteComplex::new(conj(datum.big.differential())).unwrap(),
            iota: g.then(&datum.iota),
            p: datum.p.then(&ginv),
            h: conj(&datum.h),
            small: datum.small,
        };
        mu = conj(&mu);
    }
    PerturbationInstance { datum, mu }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::parse_poly;

    fn one_by_one(ring: &Arc<Ring>, s: &str) -> PolyMatrix {
        PolyMatrix::from_rows(ring, vec![vec![parse_poly(s, ring).unwrap()]])
    }

    fn cone(ring: &Arc<Ring>, hsign: &str) -> DeformationRetractDatum {
        let mg = Grading::new(0, vec![1, 1]);
        let lg = Grading::new(0, vec![0, 0]);
        let b = GradedMap::from_blocks(ring, mg.clone(), mg.clone(), 1, |i| (i == 0).then(|| one_by_one(ring, "1"))).unwrap();
        let h = GradedMap::from_blocks(ring, mg.clone(), mg.clone(), -1, |i| (i == 1).then(|| one_by_one(ring, hsign))).unwrap();
        DeformationRetractDatum {
            small: FiniteComplex::zero(ring, lg.clone()),
            big: FiniteComplex::new(b).unwrap(),
            iota: GradedMap::zero(ring, lg.clone(), mg.clone(), 0),
            p: GradedMap::zero(ring, mg.clone(), lg, 0),
            h,
        }
    }

    #[test]
    fn identity_retract() {
        let ring = Ring::new(["x"]);
        let g = Grading::new(0, vec![1, 2]);
        let b = GradedMap::from_blocks(&ring, g.clone(), g.clone(), 1, |i| {
            (i == 0).then(|| PolyMatrix::from_rows(&ring, vec![vec![parse_poly("x", &ring).unwrap()], vec![Polynomial::zero(&ring)]]))
        })
        .unwrap();
        let c = FiniteComplex::new(b).unwrap();
        let d = DeformationRetractDatum {
            small: c.clone(),
            big: c,
            iota: GradedMap::identity(&ring, g.clone()),
            p: GradedMap::identity(&ring, g.clone()),
            h: GradedMap::zero(&ring, g.clone(), g, -1),
        };
        assert!(verify_drd(&d).unwrap());
    }

    #[test]
    fn contractible_cone_needs_negative_inverse() {
        let ring = Ring::new(["x"]);
        assert!(verify_drd(&cone(&ring, "-1")).unwrap());
        assert!(!verify_drd(&cone(&ring, "1")).unwrap());
        assert!(!verify_drd(&cone(&ring, "-1 + x")).unwrap());
    }

    #[test]
    fn zero_perturbation_is_identity() {
        let ring = Ring::new(["x"]);
        let d = cone(&ring, "-1");
        let g = d.big.grading().clone();
        let out = perturb_drd(&d, &GradedMap::zero(&ring, g.clone(), g, 1), None).unwrap();
        assert_eq!(out.h, d.h);
        assert_eq!(out.iota, d.iota);
        assert_eq!(out.big, d.big);
    }

    #[test]
    fn two_cone_perturbation() {
        // two cones in degrees (0, 1); mu sends the first bottom to the second top
        let ring = Ring::new(["x"]);
        let mg = Grading::new(0, vec![2, 2]);
        let lg = Grading::new(0, vec![0, 0]);
        let p = |s: &str| parse_poly(s, &ring).unwrap();
        let b = GradedMap::from_blocks(&ring, mg.clone(), mg.clone(), 1, |i| (i == 0).then(|| PolyMatrix::identity(&ring, 2))).unwrap();
        let h = GradedMap::from_blocks(&ring, mg.clone(), mg.clone(), -1, |i| {
            (i == 1).then(|| PolyMatrix::identity(&ring, 2).neg())
        })
        .unwrap();
        let d = DeformationRetractDatum {
            small: FiniteComplex::zero(&ring, lg.clone()),
            big: FiniteComplex::new(b).unwrap(),
            iota: GradedMap::zero(&ring, lg.clone(), mg.clone(), 0),
            p: GradedMap::zero(&ring, mg.clone(), lg, 0),
            h,
        };
        let mu = GradedMap::from_blocks(&ring, mg.clone(), mg.clone(), 1, |i| {
            (i == 0).then(|| PolyMatrix::from_rows(&ring, vec![vec![p("0"), p("0")], vec![p("x"), p("0")]]))
        })
        .unwrap();
        let out = perturb_drd(&d, &mu, None).unwrap();
        assert!(verify_drd(&out).unwrap());
        assert_ne!(out.h, d.h);

        let bad = GradedMap::from_blocks(&ring, mg.clone(), mg.clone(), 1, |i| {
            (i == 0).then(|| PolyMatrix::identity(&ring, 2).neg())
        })
        .unwrap();
        assert!(matches!(perturb_drd(&d, &bad, None), Err(HomotopyError::NotSmall { .. })));
    }

    #[test]
    fn hypothesis_violations() {
        let ring = Ring::new(["x"]);
        let g = Grading::new(0, vec![1, 1, 1]);
        let one = |i: i32, at: i32| (i == at).then(|| one_by_one(&ring, "1"));
        let b = GradedMap::from_blocks(&ring, g.clone(), g.clone(), 1, |i| one(i, 0)).unwrap();
        let c = FiniteComplex::new(b).unwrap();
        let d = DeformationRetractDatum {
            small: c.clone(),
            big: c,
            iota: GradedMap::identity(&ring, g.clone()),
            p: GradedMap::identity(&ring, g.clone()),
            h: GradedMap::zero(&ring, g.clone(), g.clone(), -1),
        };
        let mu = GradedMap::from_blocks(&ring, g.clone(), g.clone(), 1, |i| one(i, 1)).unwrap();
        assert!(matches!(perturb_drd(&d, &mu, None), Err(HomotopyError::HypothesisViolated(_))));
    }

    #[test]
    fn random_instances_transfer() {
        for seed in 0..10 {
            let inst = random_perturbation_instance(seed);
            assert!(verify_drd(&inst.datum).unwrap(), "seed {seed} input");
            let out = perturb_drd(&inst.datum, &inst.mu, None).unwrap();
            assert!(verify_drd(&out).unwrap(), "seed {seed} output");
        }
    }

    #[test]
    fn random_h_perturbation_is_detected() {
        let inst = random_perturbation_instance(3);
        let ring = inst.datum.big.ring().clone();
        let g = inst.datum.big.grading().clone();
        let mut bumped = inst.datum.clone();
        let bump = GradedMap::from_blocks(&ring, g.clone(), g.clone(), -1, |i| {
            let (r, c) = (g.rank(i - 1), g.rank(i));
            (r > 0 && c > 0).then(|| PolyMatrix::from_fn(&ring, r, c, |_, _| Polynomial::one(&ring)))
        })
        .unwrap();
        if bump.is_zero() {
            return;
        }
        bumped.h = bumped.h.sum(&bump);
        assert!(!verify_drd(&bumped).unwrap());
    }
}
