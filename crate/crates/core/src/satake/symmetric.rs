use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;

use super::laurent::HalfPowerLaurent;
use crate::error::{Error, Result};

/// An element of `Z[Q^{±1}][X_1^{±1}, ..., X_n^{±1}]^{S_n}`, stored as a sum
/// of monomial orbit sums. Each key is the weakly decreasing exponent vector
/// representing its orbit.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SymmetricMonomialSum {
    rank: usize,
    terms: BTreeMap<Vec<i64>, HalfPowerLaurent>,
}

impl SymmetricMonomialSum {
    pub fn zero(rank: usize) -> Self {
        SymmetricMonomialSum { rank, terms: BTreeMap::new() }
    }

    pub fn constant(rank: usize, c: HalfPowerLaurent) -> Self {
        let mut out = Self::zero(rank);
        out.add_orbit(vec![0; rank], c);
        out
    }

    /// `coeff * m_key`, where `m_key` is the orbit sum of `X^key`.
    pub fn orbit(rank: usize, key: Vec<i64>, coeff: HalfPowerLaurent) -> Result<Self> {
        if key.len() != rank {
            return Err(Error::DimensionMismatch { expected: rank, got: key.len() });
        }
        let mut out = Self::zero(rank);
        out.add_orbit(key, coeff);
        Ok(out)
    }

    fn add_orbit(&mut self, mut key: Vec<i64>, coeff: HalfPowerLaurent) {
        key.sort_unstable_by(|a, b| b.cmp(a));
        let slot = self.terms.entry(key.clone()).or_default();
        *slot = &*slot + &coeff;
        if slot.is_zero() {
            self.terms.remove(&key);
        }
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn terms(&self) -> impl Iterator<Item = (&[i64], &HalfPowerLaurent)> {
        self.terms.iter().map(|(k, c)| (k.as_slice(), c))
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check_rank(other)?;
        let mut out = self.clone();
        for (k, c) in &other.terms {
            out.add_orbit(k.clone(), c.clone());
        }
        Ok(out)
    }

    /// Product in the invariant ring. The coefficient of orbit `c` in
    /// `m_a * m_b` counts pairs of monomials of the two orbits summing to the
    /// representative `c`.
    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.check_rank(other)?;
        let mut out = Self::zero(self.rank);
        for (ka, ca) in &self.terms {
            let perms_a = distinct_permutations(ka);
            for (kb, cb) in &other.terms {
                let coeff = ca * cb;
                let mut counts: BTreeMap<Vec<i64>, i64> = BTreeMap::new();
                for sb in distinct_permutations(kb) {
                    for sa in &perms_a {
                        let sum: Vec<i64> = sa.iter().zip(&sb).map(|(x, y)| x + y).collect();
                        if sum.windows(2).all(|w| w[0] >= w[1]) {
                            *counts.entry(sum).or_default() += 1;
                        }
                    }
                }
                for (key, cnt) in counts {
                    out.add_orbit(key, &coeff * &HalfPowerLaurent::constant(cnt));
                }
            }
        }
        Ok(out)
    }

    /// Sum of the absolute values of all monomial coefficients (each orbit
    /// contributes its size times its coefficient).
    pub fn norm(&self) -> Result<HalfPowerLaurent> {
        let mut acc = HalfPowerLaurent::zero();
        for (k, c) in &self.terms {
            let size = BigInt::from(orbit_size(k));
            acc = &acc + &(&c.abs()? * &HalfPowerLaurent::constant(size));
        }
        Ok(acc)
    }

    /// Evaluation at `X_i = eigenvalues[i]`.
    pub fn evaluate_at(&self, eigenvalues: &[HalfPowerLaurent]) -> Result<HalfPowerLaurent> {
        if eigenvalues.len() != self.rank {
            return Err(Error::DimensionMismatch { expected: self.rank, got: eigenvalues.len() });
        }
        let mut acc = HalfPowerLaurent::zero();
        for (key, coeff) in &self.terms {
            let mut orbit_value = HalfPowerLaurent::zero();
            for perm in distinct_permutations(key) {
                let mut term = HalfPowerLaurent::one();
                for (x, &e) in eigenvalues.iter().zip(&perm) {
                    if e != 0 {
                        term = &term * &x.pow(e)?;
                    }
                }
                orbit_value = &orbit_value + &term;
            }
            acc = &acc + &(coeff * &orbit_value);
        }
        Ok(acc)
    }

    fn check_rank(&self, other: &Self) -> Result<()> {
        if self.rank == other.rank {
            Ok(())
        } else {
            Err(Error::DimensionMismatch { expected: self.rank, got: other.rank })
        }
    }
}

/// Number of distinct permutations of `key`.
pub fn orbit_size(key: &[i64]) -> u128 {
    let mut sorted = key.to_vec();
    sorted.sort_unstable();
    let mut size: u128 = 1;
    let mut run = 0u128;
    for (i, v) in sorted.iter().enumerate() {
        run = if i > 0 && sorted[i - 1] == *v { run + 1 } else { 1 };
        // running multinomial: size *= (i + 1) / run
        size = size * (i as u128 + 1) / run;
    }
    size
}

/// All distinct permutations of `key`, in lexicographic order.
pub fn distinct_permutations(key: &[i64]) -> Vec<Vec<i64>> {
    let mut cur = key.to_vec();
    cur.sort_unstable();
    let mut out = vec![cur.clone()];
    // next_permutation
    loop {
        let n = cur.len();
        let Some(i) = (0..n.saturating_sub(1)).rev().find(|&i| cur[i] < cur[i + 1]) else {
            return out;
        };
        let j = (i + 1..n).rev().find(|&j| cur[j] > cur[i]).expect("successor exists");
        cur.swap(i, j);
        cur[i + 1..].reverse();
        out.push(cur.clone());
    }
}

impl fmt::Display for SymmetricMonomialSum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self.terms.iter().rev().map(|(k, c)| format!("({c}) m{k:?}")).collect();
        write!(f, "{}", parts.join(" + "))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn orbit_sizes() {
        assert_eq!(orbit_size(&[1, 1, 0, 0]), 6);
        assert_eq!(orbit_size(&[2, 1, 0]), 6);
        assert_eq!(orbit_size(&[0, 0, 0]), 1);
        assert_eq!(distinct_permutations(&[1, 0, 0]).len(), 3);
        assert_eq!(distinct_permutations(&[2, 1, 1, 0]).len() as u128, orbit_size(&[2, 1, 1, 0]));
    }

    #[test]
    fn square_of_elementary_symmetric() {
        // (X1 + X2)^2 = m(2,0) + 2 m(1,1)
        let e1 = SymmetricMonomialSum::orbit(2, vec![1, 0], HalfPowerLaurent::one()).unwrap();
        let sq = e1.mul(&e1).unwrap();
        let expect = SymmetricMonomialSum::orbit(2, vec![2, 0], HalfPowerLaurent::one())
            .unwrap()
            .add(&SymmetricMonomialSum::orbit(2, vec![1, 1], HalfPowerLaurent::constant(2)).unwrap())
            .unwrap();
        assert_eq!(sq, expect);
    }

    #[test]
    fn product_matches_evaluation() {
        // evaluation is a ring map: check on e1 * e2 in rank 3 at X = (2, 3, 5)
        let e1 = SymmetricMonomialSum::orbit(3, vec![1, 0, 0], HalfPowerLaurent::one()).unwrap();
        let e2 = SymmetricMonomialSum::orbit(3, vec![1, 1, 0], HalfPowerLaurent::one()).unwrap();
        let pt: Vec<HalfPowerLaurent> = [2, 3, 5].iter().map(|&v| HalfPowerLaurent::constant(v)).collect();
        let lhs = e1.mul(&e2).unwrap().evaluate_at(&pt).unwrap();
        let rhs = &e1.evaluate_at(&pt).unwrap() * &e2.evaluate_at(&pt).unwrap();
        assert_eq!(lhs, rhs);
        assert_eq!(rhs, HalfPowerLaurent::constant(10 * 31));
    }
}
