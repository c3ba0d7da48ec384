use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::{BigInt, BigUint, Sign};
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// Laurent polynomial `sum c_k Q^k` in `Q = q^(1/2)` with big-integer
/// coefficients. Zero coefficients are never stored.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct HalfPowerLaurent {
    terms: BTreeMap<i64, BigInt>,
}

impl HalfPowerLaurent {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::monomial(0, BigInt::one())
    }

    pub fn constant(c: impl Into<BigInt>) -> Self {
        Self::monomial(0, c.into())
    }

    /// `c * Q^k`.
    pub fn monomial(k: i64, c: impl Into<BigInt>) -> Self {
        let c = c.into();
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(k, c);
        }
        HalfPowerLaurent { terms }
    }

    /// `Q^k`.
    pub fn q_power(k: i64) -> Self {
        Self::monomial(k, BigInt::one())
    }

    pub fn from_terms(terms: impl IntoIterator<Item = (i64, BigInt)>) -> Self {
        let mut out = Self::zero();
        for (k, c) in terms {
            out.add_term(k, c);
        }
        out
    }

    fn add_term(&mut self, k: i64, c: BigInt) {
        if c.is_zero() {
            return;
        }
        let slot = self.terms.entry(k).or_insert_with(BigInt::zero);
        *slot += c;
        if slot.is_zero() {
            self.terms.remove(&k);
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (i64, &BigInt)> {
        self.terms.iter().map(|(&k, c)| (k, c))
    }

    pub fn coeff(&self, k: i64) -> BigInt {
        self.terms.get(&k).cloned().unwrap_or_default()
    }

    pub fn min_exponent(&self) -> Option<i64> {
        self.terms.keys().next().copied()
    }

    pub fn max_exponent(&self) -> Option<i64> {
        self.terms.keys().next_back().copied()
    }

    /// `(k, c)` if this is the single term `c Q^k`.
    pub fn as_monomial(&self) -> Option<(i64, &BigInt)> {
        if self.terms.len() == 1 {
            self.terms.iter().next().map(|(&k, c)| (k, c))
        } else {
            None
        }
    }

    pub fn has_only_even_exponents(&self) -> bool {
        self.terms.keys().all(|k| k % 2 == 0)
    }

    /// Inverse of a unit monomial `±Q^k`.
    pub fn inverse(&self) -> Result<Self> {
        match self.as_monomial() {
            Some((k, c)) if c.abs().is_one() => Ok(Self::monomial(-k, c.clone())),
            _ => Err(Error::InvalidInput("only unit monomials are invertible".into())),
        }
    }

    pub fn pow(&self, e: i64) -> Result<Self> {
        if e < 0 {
            return self.inverse()?.pow(-e);
        }
        let mut acc = Self::one();
        for _ in 0..e {
            acc = &acc * self;
        }
        Ok(acc)
    }

    /// Absolute value for positive `Q`, defined when all coefficients share a sign.
    pub fn abs(&self) -> Result<Self> {
        let signs: Vec<Sign> = self.terms.values().map(|c| c.sign()).collect();
        if signs.iter().all(|&s| s == Sign::Plus) {
            Ok(self.clone())
        } else if signs.iter().all(|&s| s == Sign::Minus) {
            Ok(-self)
        } else {
            Err(Error::InvalidInput("coefficient changes sign; no symbolic absolute value".into()))
        }
    }

    /// Value at `Q = sqrt(q)`. Only even powers of `Q` are allowed.
    pub fn specialize(&self, q: &BigUint) -> Result<BigRational> {
        if !self.has_only_even_exponents() {
            return Err(Error::OddHalfPower);
        }
        let q = BigInt::from(q.clone());
        let mut acc = BigRational::zero();
        for (&k, c) in &self.terms {
            let e = (k / 2).unsigned_abs() as u32;
            let pw = q.pow(e);
            let term = if k >= 0 {
                BigRational::from_integer(c * pw)
            } else {
                BigRational::new(c.clone(), pw)
            };
            acc += term;
        }
        Ok(acc)
    }

    /// `specialize` for values known to be nonnegative integers.
    pub fn specialize_natural(&self, q: &BigUint) -> Result<BigUint> {
        let v = self.specialize(q)?;
        if !v.is_integer() || v.is_negative() {
            return Err(Error::InvalidInput(format!("{self} is not a natural number at q = {q}")));
        }
        Ok(v.to_integer().to_biguint().expect("nonnegative"))
    }

    pub fn to_f64(&self, q: f64) -> f64 {
        let root = q.sqrt();
        self.terms.iter().map(|(&k, c)| c.to_f64().unwrap_or(f64::NAN) * root.powi(k as i32)).sum()
    }
}

impl Add for &HalfPowerLaurent {
    type Output = HalfPowerLaurent;
    fn add(self, rhs: &HalfPowerLaurent) -> HalfPowerLaurent {
        let mut out = self.clone();
        for (&k, c) in &rhs.terms {
            out.add_term(k, c.clone());
        }
        out
    }
}

impl Sub for &HalfPowerLaurent {
    type Output = HalfPowerLaurent;
    fn sub(self, rhs: &HalfPowerLaurent) -> HalfPowerLaurent {
        self + &(-rhs)
    }
}

impl Neg for &HalfPowerLaurent {
    type Output = HalfPowerLaurent;
    fn neg(self) -> HalfPowerLaurent {
        HalfPowerLaurent { terms: self.terms.iter().map(|(&k, c)| (k, -c)).collect() }
    }
}

impl Mul for &HalfPowerLaurent {
    type Output = HalfPowerLaurent;
    fn mul(self, rhs: &HalfPowerLaurent) -> HalfPowerLaurent {
        let mut out = HalfPowerLaurent::zero();
        for (&a, x) in &self.terms {
            for (&b, y) in &rhs.terms {
                out.add_term(a + b, x * y);
            }
        }
        out
    }
}

impl fmt::Display for HalfPowerLaurent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        for (i, (&k, c)) in self.terms.iter().rev().enumerate() {
            let (neg, mag) = (c.is_negative(), c.abs());
            match (i, neg) {
                (0, true) => write!(f, "-")?,
                (0, false) => {}
                (_, true) => write!(f, " - ")?,
                (_, false) => write!(f, " + ")?,
            }
            match k {
                0 => write!(f, "{mag}")?,
                _ if mag.is_one() => write!(f, "Q^{k}")?,
                _ => write!(f, "{mag}*Q^{k}")?,
            }
        }
        Ok(())
    }
}
