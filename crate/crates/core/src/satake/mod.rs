//! Exact Satake-transform calculus for the minuscule operators `T_{r,m}` of
//! `GL_n` over a totally real field: degrees, norms, and the norm/degree
//! bound.
//!
//! Half-integral powers of `q` are written as integer powers of `Q = q^(1/2)`.
//! Every comparison involving them is made between squares, in exact integer
//! or rational arithmetic. The similitude factor contributes 1 everywhere and
//! is not modelled.

mod laurent;
mod stirling;
mod symmetric;

pub use laurent::HalfPowerLaurent;
pub use stirling::{stirling_failures, stirling_threshold, StirlingResult};
pub use symmetric::{distinct_permutations, orbit_size, SymmetricMonomialSum};

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, ToPrimitive};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::number_field::NumberFieldSpec;

pub fn binomial(n: usize, r: usize) -> BigUint {
    if r > n {
        return BigUint::from(0u32);
    }
    (0..r).fold(BigUint::one(), |acc, i| acc * BigUint::from(n - i) / BigUint::from(i + 1))
}

fn check_index(n: usize, r: usize) -> Result<()> {
    if n == 0 || r > n {
        Err(Error::IndexOutOfRange { n, r })
    } else {
        Ok(())
    }
}

/// Satake transform of the characteristic function of
/// `GL_n(O) diag(l, ..., l, 1, ..., 1) GL_n(O)` with `r` entries equal to `l`:
/// `Q^{r(n-r)} e_r(X_1, ..., X_n)`.
pub fn satake_minuscule(n: usize, r: usize) -> Result<SymmetricMonomialSum> {
    check_index(n, r)?;
    let mut key = vec![1i64; r];
    key.resize(n, 0);
    SymmetricMonomialSum::orbit(n, key, HalfPowerLaurent::q_power((r * (n - r)) as i64))
}

/// Satake parameters of the trivial representation: `Q^{n+1-2i}`, `i = 1..n`.
pub fn trivial_eigenvalues(n: usize) -> Vec<HalfPowerLaurent> {
    (1..=n as i64).map(|i| HalfPowerLaurent::q_power(n as i64 + 1 - 2 * i)).collect()
}

pub fn evaluate_at(s: &SymmetricMonomialSum, eigenvalues: &[HalfPowerLaurent]) -> Result<HalfPowerLaurent> {
    s.evaluate_at(eigenvalues)
}

/// `deg T_r` at one place as a Laurent polynomial in `Q`; only even powers occur.
pub fn degree_polynomial(n: usize, r: usize) -> Result<HalfPowerLaurent> {
    let deg = satake_minuscule(n, r)?.evaluate_at(&trivial_eigenvalues(n))?;
    if !deg.has_only_even_exponents() {
        return Err(Error::OddHalfPower);
    }
    Ok(deg)
}

/// `deg T_r` at a place with residue field of size `q`.
pub fn degree_local(n: usize, r: usize, q: &BigUint) -> Result<BigUint> {
    if q < &BigUint::from(2u32) {
        return Err(Error::InvalidInput(format!("residue field size {q} < 2")));
    }
    degree_polynomial(n, r)?.specialize_natural(q)
}

/// Local norm `binom(n, r) * Q^{r(n-r)}`, split into its integer count and
/// its half-power part.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LocalNorm {
    pub count: BigUint,
    pub half_power: HalfPowerLaurent,
}

impl LocalNorm {
    pub fn squared_at(&self, q: &BigUint) -> Result<BigUint> {
        let sq = &self.half_power * &self.half_power;
        Ok(&self.count * &self.count * sq.specialize_natural(q)?)
    }

    pub fn to_f64(&self, q: f64) -> f64 {
        self.count.to_f64().unwrap_or(f64::NAN) * self.half_power.to_f64(q)
    }
}

/// Sum of the absolute values of the coefficients of the local Satake transform.
pub fn norm_local(n: usize, r: usize) -> Result<LocalNorm> {
    let norm = satake_minuscule(n, r)?.norm()?;
    match norm.as_monomial() {
        Some((k, c)) => Ok(LocalNorm {
            count: c.to_biguint().expect("norm is positive"),
            half_power: HalfPowerLaurent::q_power(k),
        }),
        None => Err(Error::InvalidInput("minuscule norm is a single monomial".into())),
    }
}

/// `T_{r,m}` for `GL_n` over `field`, with `m` squarefree and unramified.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GlobalOperatorSpec {
    pub n: usize,
    pub r: usize,
    pub m: u64,
    pub field: NumberFieldSpec,
}

impl GlobalOperatorSpec {
    pub fn new(n: usize, r: usize, m: u64, field: NumberFieldSpec) -> Result<Self> {
        check_index(n, r)?;
        // validates squarefreeness and ramification
        field.omega(m)?;
        Ok(GlobalOperatorSpec { n, r, m, field })
    }
}

/// `binomial * prod q^(k/2)` over the listed `(q, k)` factors.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GlobalNorm {
    pub binomial_part: BigUint,
    pub half_powers: Vec<(BigUint, u32)>,
}

impl GlobalNorm {
    pub fn squared(&self) -> BigUint {
        self.half_powers
            .iter()
            .fold(&self.binomial_part * &self.binomial_part, |acc, (q, k)| acc * q.pow(*k))
    }

    pub fn to_f64(&self) -> f64 {
        let mut v = self.binomial_part.to_f64().unwrap_or(f64::NAN);
        for (q, k) in &self.half_powers {
            v *= q.to_f64().unwrap_or(f64::NAN).powf(*k as f64 / 2.0);
        }
        v
    }
}

/// Product of `degree_local` over all places above all primes dividing `m`.
pub fn degree_global(spec: &GlobalOperatorSpec) -> Result<BigUint> {
    let poly = degree_polynomial(spec.n, spec.r)?;
    let mut acc = BigUint::one();
    for (_, qs) in spec.field.residue_cardinalities(spec.m)? {
        for q in qs {
            acc *= poly.specialize_natural(&q)?;
        }
    }
    Ok(acc)
}

/// Product of the local norms; one binomial factor per place.
pub fn norm_global(spec: &GlobalOperatorSpec) -> Result<GlobalNorm> {
    let local = norm_local(spec.n, spec.r)?;
    let k = local.half_power.max_exponent().unwrap_or(0) as u32;
    let mut binomial_part = BigUint::one();
    let mut half_powers = Vec::new();
    for (_, qs) in spec.field.residue_cardinalities(spec.m)? {
        for q in qs {
            binomial_part *= &local.count;
            if k > 0 {
                half_powers.push((q, k));
            }
        }
    }
    Ok(GlobalNorm { binomial_part, half_powers })
}

/// `N/deg` against `binom(n,r)^{c_F(m)} m^{-[F:Q] r(n-r)/2}`, both squared.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RatioBound {
    pub ratio_squared: BigRational,
    pub bound_squared: BigRational,
    pub satisfied: bool,
}

impl RatioBound {
    pub fn ratio_f64(&self) -> f64 {
        self.ratio_squared.to_f64().unwrap_or(f64::NAN).sqrt()
    }

    pub fn bound_f64(&self) -> f64 {
        self.bound_squared.to_f64().unwrap_or(f64::NAN).sqrt()
    }
}

pub fn ratio_and_bound(spec: &GlobalOperatorSpec) -> Result<RatioBound> {
    let (n, r) = (spec.n, spec.r);
    if r == 0 || r >= n {
        return Err(Error::IndexOutOfRange { n, r });
    }
    if spec.m <= 1 {
        return Err(Error::InvalidInput("the bound needs m > 1".into()));
    }
    let deg = BigInt::from(degree_global(spec)?);
    let norm_sq = BigInt::from(norm_global(spec)?.squared());
    let ratio_squared = BigRational::new(norm_sq, &deg * &deg);

    let c = spec.field.omega(spec.m)? as u32;
    let binom_sq = BigInt::from(binomial(n, r).pow(2 * c));
    let exp = (spec.field.degree() * r * (n - r)) as u32;
    let bound_squared = BigRational::new(binom_sq, BigInt::from(spec.m).pow(exp));
    let satisfied = ratio_squared <= bound_squared;
    Ok(RatioBound { ratio_squared, bound_squared, satisfied })
}

/// One line of the satake report; big numbers as decimal strings.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct SatakeRow {
    pub n: usize,
    pub r: usize,
    pub m: u64,
    pub field_polynomial: String,
    pub degree: String,
    pub norm_squared: String,
    pub ratio_squared: String,
    pub bound_squared: String,
    pub satisfied: bool,
}

pub fn satake_row(spec: &GlobalOperatorSpec) -> Result<SatakeRow> {
    let rb = ratio_and_bound(spec)?;
    Ok(SatakeRow {
        n: spec.n,
        r: spec.r,
        m: spec.m,
        field_polynomial: spec.field.to_string(),
        degree: degree_global(spec)?.to_string(),
        norm_squared: norm_global(spec)?.squared().to_string(),
        ratio_squared: rational_string(&rb.ratio_squared),
        bound_squared: rational_string(&rb.bound_squared),
        satisfied: rb.satisfied,
    })
}

/// `p/q` in lowest terms (always with a denominator).
pub fn rational_string(x: &BigRational) -> String {
    format!("{}/{}", x.numer(), x.denom())
}
