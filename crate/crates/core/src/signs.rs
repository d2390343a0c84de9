//! Every sign convention used by the pairings lives here.
//!
//! Signs are returned as `i8` values in `{-1, 1}` so callers can multiply
//! them into rationals with [`apply`].

use crate::rational::Rational;

/// `(-1)^k`
pub fn parity_sign(k: usize) -> i8 {
    if k % 2 == 0 {
        1
    } else {
        -1
    }
}

/// `(-1)^{m(m-1)/2}`, the sign of reversing `m` odd symbols.
pub fn binomial2_sign(m: usize) -> i8 {
    parity_sign(m * m.saturating_sub(1) / 2)
}

/// Sign in front of the Kapustin-Li residue for `n` variables:
/// `(-1)^{(n-1)(n-2)/2}`.
pub fn kl_sign(n: usize) -> i8 {
    binomial2_sign(n.saturating_sub(1))
}

/// Sign in front of the pretrace fraction with `d` denominators:
/// `(-1)^{(d+1)d/2}`.
pub fn pretrace_sign(d: usize) -> i8 {
    binomial2_sign(d + 1)
}

/// Sign of the Hom differential: `D(f) = d f - (-1)^{|f|} f d`.
pub fn hom_differential_sign(parity: u8) -> i8 {
    -parity_sign(parity as usize)
}

/// Koszul sign `(-1)^{|a||b|}` for passing `a` past `b`.
pub fn koszul_sign(a: u8, b: u8) -> i8 {
    parity_sign((a as usize) * (b as usize))
}

/// Sign of a permutation given as images of `0..n`.
pub fn permutation_sign(perm: &[usize]) -> i8 {
    let mut seen = vec![false; perm.len()];
    let mut sign = 1i8;
    for start in 0..perm.len() {
        if seen[start] {
            continue;
        }
        let mut len = 0;
        let mut k = start;
        while !seen[k] {
            seen[k] = true;
            k = perm[k];
            len += 1;
        }
        if len % 2 == 0 {
            sign = -sign;
        }
    }
    sign
}

/// All permutations of `0..n` in lexicographic order, with their signs.
pub fn signed_permutations(n: usize) -> Vec<(Vec<usize>, i8)> {
    let mut out = Vec::new();
    let mut perm: Vec<usize> = (0..n).collect();
    loop {
        out.push((perm.clone(), permutation_sign(&perm)));
        let Some(i) = (1..n).rev().find(|&i| perm[i - 1] < perm[i]) else {
            return out;
        };
        let j = (i..n).rev().find(|&j| perm[j] > perm[i - 1]).unwrap();
        perm.swap(i - 1, j);
        perm[i..].reverse();
    }
}

pub fn apply(sign: i8, value: Rational) -> Rational {
    if sign < 0 {
        -value
    } else {
        value
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_values() {
        assert_eq!(kl_sign(1), 1);
        assert_eq!(kl_sign(2), 1);
        assert_eq!(kl_sign(3), -1);
        assert_eq!(pretrace_sign(0), 1);
        assert_eq!(pretrace_sign(1), -1);
        assert_eq!(pretrace_sign(2), -1);
        assert_eq!(pretrace_sign(3), 1);
        assert_eq!(hom_differential_sign(0), -1);
        assert_eq!(hom_differential_sign(1), 1);
    }

    #[test]
    fn permutations_are_signed() {
        let perms = signed_permutations(3);
        assert_eq!(perms.len(), 6);
        assert_eq!(perms.iter().map(|p| p.1 as i32).sum::<i32>(), 0);
        assert_eq!(permutation_sign(&[1, 0, 2]), -1);
        assert_eq!(permutation_sign(&[1, 2, 0]), 1);
        assert_eq!(signed_permutations(0).len(), 1);
    }
}
