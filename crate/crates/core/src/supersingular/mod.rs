//! Supersingular j-invariants in characteristic `p >= 5`, their automorphism
//! weights, and the Hecke correspondences `T_l`, `T_m` acting on them.

mod cache;
mod hecke;
mod modpoly;

pub use cache::LocusCache;
pub use hecke::{hecke_matrix, hecke_squarefree, HeckeMatrix};
pub use modpoly::{ModularPolynomial, ModularPolynomialLibrary};

use num_rational::Ratio;
use serde::Serialize;

use crate::arith::is_prime;
use crate::error::{Error, Result};
use crate::ffpoly::{roots_in_field, DensePoly, FiniteField, Fq};

/// The supersingular j-invariants over `F_{p^2}`, sorted by coordinates.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SupersingularLocus {
    p: u64,
    #[serde(skip)]
    field: FiniteField,
    points: Vec<Fq>,
    weights: Vec<u8>,
}

impl SupersingularLocus {
    /// Checks ordering, distinctness, weights and the mass formula.
    pub fn from_parts(p: u64, points: Vec<Fq>, weights: Vec<u8>) -> Result<Self> {
        check_prime(p)?;
        let field = FiniteField::quadratic(p)?;
        if points.len() != weights.len() {
            return Err(Error::DimensionMismatch { expected: points.len(), got: weights.len() });
        }
        if !points.windows(2).all(|w| w[0] < w[1]) || !points.iter().all(|&x| field.contains(x)) {
            return Err(Error::InvalidInput("points must be distinct field elements in sorted order".into()));
        }
        for (&j, &w) in points.iter().zip(&weights) {
            if w != weight_of(&field, j) {
                return Err(Error::InvalidInput(format!("wrong weight {w} for j = {j}")));
            }
        }
        let locus = SupersingularLocus { p, field, points, weights };
        let got = locus.total_mass();
        let expected = Ratio::new(p - 1, 24);
        if got != expected {
            return Err(Error::MassFormula { p, got: got.to_string(), expected: expected.to_string() });
        }
        Ok(locus)
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn field(&self) -> &FiniteField {
        &self.field
    }

    pub fn points(&self) -> &[Fq] {
        &self.points
    }

    pub fn weights(&self) -> &[u8] {
        &self.weights
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    /// `1 / (2 w_j)`, i.e. `1 / #Aut(E_j)`.
    pub fn masses(&self) -> Vec<Ratio<u64>> {
        self.weights.iter().map(|&w| Ratio::new(1, 2 * w as u64)).collect()
    }

    pub fn masses_f64(&self) -> Vec<f64> {
        self.weights.iter().map(|&w| 0.5 / w as f64).collect()
    }

    pub fn total_mass(&self) -> Ratio<u64> {
        self.masses().into_iter().sum()
    }

    pub fn index_of(&self, j: Fq) -> Option<usize> {
        self.points.binary_search(&j).ok()
    }
}

fn check_prime(p: u64) -> Result<()> {
    if !is_prime(p) {
        return Err(Error::NotPrime(p));
    }
    if p < 5 {
        return Err(Error::UnsupportedCharacteristic(p));
    }
    Ok(())
}

fn weight_of(field: &FiniteField, j: Fq) -> u8 {
    if j == field.zero() {
        3
    } else if j == field.from_u64(1728) {
        2
    } else {
        1
    }
}

/// `H(t) = sum_{k <= (p-1)/2} binom((p-1)/2, k)^2 t^k` over `F_p`.
pub fn hasse_polynomial(p: u64) -> Result<DensePoly> {
    check_prime(p)?;
    let field = FiniteField::prime(p)?;
    let m = (p - 1) / 2;
    let mut coeffs = Vec::with_capacity(m as usize + 1);
    let mut binom = field.one();
    for k in 0..=m {
        coeffs.push(field.square(binom));
        // binom(m, k+1) = binom(m, k) (m - k) / (k + 1)
        if k < m {
            binom = field.div(field.scale(binom, m - k), field.from_u64(k + 1))?;
        }
    }
    Ok(DensePoly::new(field, coeffs))
}

/// `256 (t^2 - t + 1)^3 / (t^2 (t - 1)^2)`.
pub fn legendre_j(field: &FiniteField, t: Fq) -> Result<Fq> {
    let one = field.one();
    let t2 = field.square(t);
    let a = field.add(field.sub(t2, t), one);
    let num = field.scale(field.mul(field.square(a), a), 256);
    let den = field.mul(t2, field.square(field.sub(t, one)));
    field.div(num, den)
}

/// Supersingular j-invariants from the roots of the Hasse polynomial,
/// certified by the mass formula.
pub fn enumerate_locus(p: u64) -> Result<SupersingularLocus> {
    let h = hasse_polynomial(p)?;
    let field = FiniteField::quadratic(p)?;
    let mut points = roots_in_field(&h, field)?
        .into_iter()
        .map(|t| legendre_j(&field, t))
        .collect::<Result<Vec<_>>>()?;
    points.sort();
    points.dedup();
    let weights = points.iter().map(|&j| weight_of(&field, j)).collect();
    SupersingularLocus::from_parts(p, points, weights)
}
