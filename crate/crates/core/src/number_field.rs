//! Totally real number fields given by a monic integer defining polynomial:
//! residue degrees and residue-field sizes at unramified primes.

use std::fmt;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::arith::{factorize, is_prime, primes_up_to, squarefree_primes};
use crate::error::{Error, Result};
use crate::ffpoly::{distinct_degree_factorize, DensePoly, FiniteField};

/// `F = Q[x] / (g)`. Primes dividing `disc(g)` are excluded from every
/// operation, which over-approximates the ramified set.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct NumberFieldSpec {
    coeffs: Vec<BigInt>,
    discriminant: BigInt,
    irreducibility_certified: bool,
}

/// How a rational prime decomposes in `F`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SplittingData {
    pub prime: u64,
    /// Residue degrees `f_lambda`, ascending.
    pub residue_degrees: Vec<u32>,
    /// `q_lambda = prime^f_lambda`, in the same order.
    pub cardinalities: Vec<BigUint>,
}

impl SplittingData {
    /// Number of places of `F` above `prime`.
    pub fn place_count(&self) -> usize {
        self.residue_degrees.len()
    }
}

impl NumberFieldSpec {
    /// `coeffs` is constant term first and must describe a monic polynomial
    /// of degree at least one.
    pub fn new(coeffs: Vec<BigInt>) -> Result<Self> {
        let mut coeffs = coeffs;
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        if coeffs.len() < 2 {
            return Err(Error::InvalidInput("defining polynomial must have degree >= 1".into()));
        }
        if !coeffs.last().is_some_and(|c| c.is_one()) {
            return Err(Error::InvalidInput("defining polynomial must be monic".into()));
        }
        let discriminant = discriminant(&coeffs);
        if discriminant.is_zero() {
            return Err(Error::InvalidInput("defining polynomial has a repeated root".into()));
        }
        let mut spec = NumberFieldSpec { coeffs, discriminant, irreducibility_certified: false };
        spec.irreducibility_certified = spec.check_irreducible()?;
        Ok(spec)
    }

    pub fn from_i64s(coeffs: &[i64]) -> Result<Self> {
        Self::new(coeffs.iter().map(|&c| BigInt::from(c)).collect())
    }

    /// `F = Q`, defined by `x`.
    pub fn rationals() -> Self {
        Self::from_i64s(&[0, 1]).expect("x defines Q")
    }

    /// Parses a comma-separated integer list, constant term first. A list
    /// that is only monic when read leading-coefficient-first is accepted in
    /// that order.
    pub fn parse(text: &str) -> Result<Self> {
        let coeffs: Vec<BigInt> = text
            .split(',')
            .map(|t| t.trim().parse::<BigInt>())
            .collect::<std::result::Result<_, _>>()
            .map_err(|e| Error::InvalidInput(format!("bad field polynomial {text:?}: {e}")))?;
        let monic_as_given = coeffs.iter().rev().find(|c| !c.is_zero()).is_some_and(|c| c.is_one());
        if !monic_as_given && coeffs.first().is_some_and(|c| c.is_one()) {
            let mut rev = coeffs;
            rev.reverse();
            return Self::new(rev);
        }
        Self::new(coeffs)
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    /// Coefficients, constant term first.
    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    pub fn discriminant(&self) -> &BigInt {
        &self.discriminant
    }

    /// Whether some small prime certified irreducibility over `Q`.
    pub fn irreducibility_certified(&self) -> bool {
        self.irreducibility_certified
    }

    pub fn is_excluded(&self, ell: u64) -> bool {
        (&self.discriminant % BigInt::from(ell)).is_zero()
    }

    /// The defining polynomial reduced mod `ell`.
    pub fn reduce_mod(&self, ell: u64) -> Result<DensePoly> {
        let f = FiniteField::prime(ell)?;
        Ok(DensePoly::new(f, self.coeffs.iter().map(|c| f.from_bigint(c)).collect()))
    }

    pub fn splitting_data(&self, ell: u64) -> Result<SplittingData> {
        if !is_prime(ell) {
            return Err(Error::NotPrime(ell));
        }
        if self.is_excluded(ell) {
            return Err(Error::Ramified(ell));
        }
        let mut residue_degrees = Vec::new();
        if self.degree() == 1 {
            residue_degrees.push(1);
        } else {
            for (d, g) in distinct_degree_factorize(&self.reduce_mod(ell)?)? {
                let copies = g.degree().unwrap_or(0) / d;
                residue_degrees.extend(std::iter::repeat_n(d as u32, copies));
            }
        }
        residue_degrees.sort_unstable();
        let cardinalities = residue_degrees.iter().map(|&f| BigUint::from(ell).pow(f)).collect();
        Ok(SplittingData { prime: ell, residue_degrees, cardinalities })
    }

    fn prime_divisors(&self, m: u64) -> Result<Vec<u64>> {
        if m == 0 {
            return Err(Error::InvalidInput("m must be positive".into()));
        }
        let primes = squarefree_primes(m).map_err(Error::NotSquarefreeInteger)?;
        if let Some(&ell) = primes.iter().find(|&&ell| self.is_excluded(ell)) {
            return Err(Error::Ramified(ell));
        }
        Ok(primes)
    }

    /// Number of prime ideals of `O_F` containing the squarefree `m`.
    pub fn omega(&self, m: u64) -> Result<usize> {
        self.prime_divisors(m)?
            .into_iter()
            .map(|ell| self.splitting_data(ell).map(|s| s.place_count()))
            .sum()
    }

    /// `(ell, [q_lambda])` for every prime `ell | m`, ascending in `ell`.
    pub fn residue_cardinalities(&self, m: u64) -> Result<Vec<(u64, Vec<BigUint>)>> {
        self.prime_divisors(m)?
            .into_iter()
            .map(|ell| self.splitting_data(ell).map(|s| (ell, s.cardinalities)))
            .collect()
    }

    // Irreducible mod some unramified prime certifies irreducibility. Failing
    // that, an integer root (rational root theorem) proves reducibility;
    // otherwise the polynomial is accepted uncertified.
    fn check_irreducible(&self) -> Result<bool> {
        let d = self.degree();
        if d == 1 {
            return Ok(true);
        }
        for ell in primes_up_to(200) {
            if self.is_excluded(ell) {
                continue;
            }
            let ddf = distinct_degree_factorize(&self.reduce_mod(ell)?)?;
            if ddf.len() == 1 && ddf[0].0 == d {
                return Ok(true);
            }
        }
        if self.has_integer_root() {
            return Err(Error::Reducible);
        }
        Ok(false)
    }

    fn has_integer_root(&self) -> bool {
        let a0 = &self.coeffs[0];
        if a0.is_zero() {
            return true;
        }
        let Some(a0) = a0.abs().to_u64() else { return false };
        let mut divisors = vec![1u64];
        for (q, e) in factorize(a0) {
            let base = divisors.clone();
            let mut pw = 1u64;
            for _ in 0..e {
                pw *= q;
                divisors.extend(base.iter().map(|&d| d * pw));
            }
        }
        divisors.into_iter().any(|d| {
            [BigInt::from(d), -BigInt::from(d)].iter().any(|x| {
                self.coeffs.iter().rev().fold(BigInt::zero(), |acc, c| acc * x + c).is_zero()
            })
        })
    }
}

impl fmt::Display for NumberFieldSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.coeffs.iter().map(|c| c.to_string()).collect();
        write!(f, "{}", parts.join(","))
    }
}

/// Discriminant of a monic polynomial: `(-1)^(d(d-1)/2) Res(g, g')`. Degree
/// one gives 1.
pub fn discriminant(coeffs: &[BigInt]) -> BigInt {
    let d = coeffs.len() - 1;
    if d == 1 {
        return BigInt::one();
    }
    let deriv: Vec<BigInt> = coeffs.iter().enumerate().skip(1).map(|(i, c)| c * BigInt::from(i)).collect();
    let res = resultant(coeffs, &deriv);
    if (d * (d - 1) / 2) % 2 == 1 {
        -res
    } else {
        res
    }
}

/// Resultant via the Sylvester matrix and fraction-free (Bareiss) elimination.
/// Coefficients are constant term first.
pub fn resultant(a: &[BigInt], b: &[BigInt]) -> BigInt {
    let (m, n) = (a.len() - 1, b.len() - 1);
    let size = m + n;
    if size == 0 {
        return BigInt::one();
    }
    let mut mat = vec![vec![BigInt::zero(); size]; size];
    for row in 0..n {
        for (k, c) in a.iter().rev().enumerate() {
            mat[row][row + k] = c.clone();
        }
    }
    for row in 0..m {
        for (k, c) in b.iter().rev().enumerate() {
            mat[n + row][row + k] = c.clone();
        }
    }
    bareiss_determinant(mat)
}

fn bareiss_determinant(mut mat: Vec<Vec<BigInt>>) -> BigInt {
    let n = mat.len();
    let mut sign = BigInt::one();
    let mut prev = BigInt::one();
    for k in 0..n {
        if mat[k][k].is_zero() {
            match (k + 1..n).find(|&r| !mat[r][k].is_zero()) {
                Some(r) => {
                    mat.swap(k, r);
                    sign = -sign;
                }
                None => return BigInt::zero(),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let v = &mat[i][j] * &mat[k][k] - &mat[i][k] * &mat[k][j];
                mat[i][j] = v.div_floor(&prev);
            }
        }
        prev = mat[k][k].clone();
    }
    sign * &mat[n - 1][n - 1]
}
