use serde::Serialize;

use super::modpoly::{ModularPolynomial, ModularPolynomialLibrary};
use super::SupersingularLocus;
use crate::arith::squarefree_primes;
use crate::error::{Error, Result};
use crate::ffpoly::{roots_in_field, DensePoly};

/// Integer matrix of a Hecke operator `T_m` on the supersingular locus.
/// Row `i` lists, with multiplicity, the targets of the correspondence from `j_i`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct HeckeMatrix {
    level: u64,
    degree: u64,
    dim: usize,
    entries: Vec<u64>,
}

impl HeckeMatrix {
    pub fn identity(dim: usize) -> Self {
        let mut entries = vec![0; dim * dim];
        for i in 0..dim {
            entries[i * dim + i] = 1;
        }
        HeckeMatrix { level: 1, degree: 1, dim, entries }
    }

    /// Builds a matrix from rows; every row must sum to `degree`.
    pub fn from_rows(level: u64, degree: u64, rows: Vec<Vec<u64>>) -> Result<Self> {
        let dim = rows.len();
        let mut entries = Vec::with_capacity(dim * dim);
        for row in rows {
            if row.len() != dim {
                return Err(Error::DimensionMismatch { expected: dim, got: row.len() });
            }
            entries.extend(row);
        }
        let m = HeckeMatrix { level, degree, dim, entries };
        if !m.has_constant_row_sums() {
            return Err(Error::InvalidInput(format!("rows of T_{level} must sum to {degree}")));
        }
        Ok(m)
    }

    pub fn level(&self) -> u64 {
        self.level
    }

    pub fn degree(&self) -> u64 {
        self.degree
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn get(&self, i: usize, j: usize) -> u64 {
        self.entries[i * self.dim + j]
    }

    pub fn row(&self, i: usize) -> &[u64] {
        &self.entries[i * self.dim..(i + 1) * self.dim]
    }

    pub fn rows(&self) -> Vec<Vec<u64>> {
        (0..self.dim).map(|i| self.row(i).to_vec()).collect()
    }

    /// Composition `T_a T_b`.
    pub fn mul(&self, other: &HeckeMatrix) -> Result<HeckeMatrix> {
        if self.dim != other.dim {
            return Err(Error::DimensionMismatch { expected: self.dim, got: other.dim });
        }
        let n = self.dim;
        let mut entries = vec![0u64; n * n];
        for i in 0..n {
            let out = &mut entries[i * n..(i + 1) * n];
            for (k, &a) in self.row(i).iter().enumerate() {
                if a != 0 {
                    for (o, &b) in out.iter_mut().zip(other.row(k)) {
                        *o += a * b;
                    }
                }
            }
        }
        Ok(HeckeMatrix { level: self.level * other.level, degree: self.degree * other.degree, dim: n, entries })
    }

    pub fn row_sums(&self) -> Vec<u64> {
        (0..self.dim).map(|i| self.row(i).iter().sum()).collect()
    }

    pub fn has_constant_row_sums(&self) -> bool {
        self.row_sums().iter().all(|&s| s == self.degree)
    }

    /// `w_j M[i][j] = w_i M[j][i]` for all `i, j`.
    pub fn is_weighted_symmetric(&self, weights: &[u8]) -> bool {
        weights.len() == self.dim
            && (0..self.dim).all(|i| {
                (0..i).all(|j| weights[j] as u64 * self.get(i, j) == weights[i] as u64 * self.get(j, i))
            })
    }

    /// The mass vector `1/(2w)` is a left eigenvector with eigenvalue `degree`.
    pub fn preserves_mass(&self, weights: &[u8]) -> bool {
        // scaled by 6 to stay in integers
        weights.len() == self.dim
            && (0..self.dim).all(|j| {
                let lhs: u64 = (0..self.dim).map(|i| self.get(i, j) * (6 / weights[i] as u64)).sum();
                lhs == self.degree * (6 / weights[j] as u64)
            })
    }

    /// `(T f)(j_i) = sum_k M[i][k] f(j_k)`.
    pub fn apply(&self, f: &[f64]) -> Result<Vec<f64>> {
        if f.len() != self.dim {
            return Err(Error::DimensionMismatch { expected: self.dim, got: f.len() });
        }
        Ok((0..self.dim)
            .map(|i| self.row(i).iter().zip(f).map(|(&a, &x)| a as f64 * x).sum())
            .collect())
    }
}

/// `M[i][k]` = multiplicity of `j_k` among the roots of `Phi_l(j_i, Y)` over `F_{p^2}`.
pub fn hecke_matrix(locus: &SupersingularLocus, phi: &ModularPolynomial) -> Result<HeckeMatrix> {
    let ell = phi.level();
    if ell == locus.p() {
        return Err(Error::InvalidInput(format!("level {ell} equals the characteristic")));
    }
    let field = *locus.field();
    let table = phi.reduce(&field);
    let deg = phi.degree() as usize;
    let n = locus.len();
    let mut entries = vec![0u64; n * n];
    for (i, &j) in locus.points().iter().enumerate() {
        let mut powers = Vec::with_capacity(deg + 1);
        let mut acc = field.one();
        for _ in 0..=deg {
            powers.push(acc);
            acc = field.mul(acc, j);
        }
        let coeffs = (0..=deg)
            .map(|k| (0..=deg).fold(field.zero(), |s, a| field.add(s, field.mul(table[a][k], powers[a]))))
            .collect();
        let roots = roots_in_field(&DensePoly::new(field, coeffs), field)?;
        if roots.len() != deg {
            return Err(Error::RootOutsideLocus(format!(
                "Phi_{ell}({j}, Y) has only {} roots in F_p^2",
                roots.len()
            )));
        }
        for r in roots {
            let k = locus.index_of(r).ok_or_else(|| Error::RootOutsideLocus(r.to_string()))?;
            entries[i * n + k] += 1;
        }
    }
    Ok(HeckeMatrix { level: ell, degree: ell + 1, dim: n, entries })
}

/// `T_m = prod_{l | m} T_l` for squarefree `m` prime to `p`.
pub fn hecke_squarefree(locus: &SupersingularLocus, m: u64, library: &ModularPolynomialLibrary) -> Result<HeckeMatrix> {
    if m == 0 {
        return Err(Error::InvalidInput("m must be positive".into()));
    }
    let primes = squarefree_primes(m).map_err(|_| Error::NotSquarefreeInteger(m))?;
    if m.is_multiple_of(locus.p()) {
        return Err(Error::InvalidInput(format!("m = {m} is divisible by p = {}", locus.p())));
    }
    let mut acc = HeckeMatrix::identity(locus.len());
    for ell in primes {
        acc = acc.mul(&hecke_matrix(locus, library.get(ell)?)?)?;
    }
    Ok(acc)
}

#[cfg(test)]
mod tests {
    use super::super::enumerate_locus;
    use super::*;

    fn lib() -> ModularPolynomialLibrary {
        ModularPolynomialLibrary::builtin().unwrap()
    }

    #[test]
    fn p11_level2() {
        let locus = enumerate_locus(11).unwrap();
        let t2 = hecke_matrix(&locus, lib().get(2).unwrap()).unwrap();
        assert_eq!(t2.rows(), vec![vec![0, 3], vec![2, 1]]);
        assert!(t2.is_weighted_symmetric(locus.weights()));
        assert!(t2.preserves_mass(locus.weights()));
    }

    #[test]
    fn p13_single_point() {
        let locus = enumerate_locus(13).unwrap();
        let t2 = hecke_matrix(&locus, lib().get(2).unwrap()).unwrap();
        assert_eq!(t2.rows(), vec![vec![3]]);
        assert!(hecke_matrix(&locus, lib().get(13).unwrap()).is_err());
    }

    #[test]
    fn squarefree_products() {
        let lib = lib();
        let locus = enumerate_locus(11).unwrap();
        assert_eq!(hecke_squarefree(&locus, 1, &lib).unwrap(), HeckeMatrix::identity(2));
        let t6 = hecke_squarefree(&locus, 6, &lib).unwrap();
        assert_eq!((t6.degree(), t6.row_sums()), (12, vec![12, 12]));
        assert_eq!(hecke_squarefree(&locus, 4, &lib), Err(Error::NotSquarefreeInteger(4)));
        assert!(hecke_squarefree(&locus, 22, &lib).is_err());
        assert_eq!(hecke_squarefree(&locus, 34, &lib), Err(Error::MissingModularPolynomial(17)));
    }

    #[test]
    fn p1009_level2_and_commutation() {
        let lib = lib();
        let locus = enumerate_locus(1009).unwrap();
        assert_eq!(locus.len(), 84);
        let t2 = hecke_matrix(&locus, lib.get(2).unwrap()).unwrap();
        let t3 = hecke_matrix(&locus, lib.get(3).unwrap()).unwrap();
        assert!(t2.has_constant_row_sums() && t2.is_weighted_symmetric(locus.weights()));
        assert!((0..84).all(|i| (0..84).all(|j| t2.get(i, j) == t2.get(j, i))));
        assert_eq!(t2.mul(&t3).unwrap(), t3.mul(&t2).unwrap());
        assert_eq!(t2.mul(&t3).unwrap().degree(), 12);
    }
}
