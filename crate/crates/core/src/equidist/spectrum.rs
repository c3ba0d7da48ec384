use nalgebra::{DMatrix, SymmetricEigen};
use serde::Serialize;

use super::{decimal, decimal_opt, decimal_vec};
use crate::arith::is_prime;
use crate::error::{Error, Result};
use crate::supersingular::{HeckeMatrix, SupersingularLocus};

const SYMMETRY_TOLERANCE: f64 = 1e-10;

/// Eigenvalues of `D M D^{-1}`, `D = diag(w^{-1/2})`, against `2 sqrt(l)`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SpectrumReport {
    pub p: u64,
    pub level: u64,
    /// Descending.
    #[serde(serialize_with = "decimal_vec")]
    pub eigenvalues: Vec<f64>,
    #[serde(serialize_with = "decimal")]
    pub trivial_eigenvalue: f64,
    #[serde(serialize_with = "decimal_opt")]
    pub max_nontrivial: Option<f64>,
    #[serde(serialize_with = "decimal")]
    pub ramanujan_bound: f64,
    /// `bound - max_nontrivial`; infinite when there is no nontrivial eigenvalue.
    #[serde(serialize_with = "decimal")]
    pub margin: f64,
    #[serde(serialize_with = "decimal")]
    pub symmetrization_residual: f64,
}

impl SpectrumReport {
    pub fn within_bound(&self, slack: f64) -> bool {
        self.max_nontrivial.is_none_or(|x| x <= self.ramanujan_bound + slack)
    }

    pub fn to_csv(&self) -> Result<String> {
        #[derive(Serialize)]
        struct Row {
            index: usize,
            #[serde(serialize_with = "decimal")]
            eigenvalue: f64,
        }
        let mut w = csv::Writer::from_writer(Vec::new());
        for (index, &eigenvalue) in self.eigenvalues.iter().enumerate() {
            w.serialize(Row { index, eigenvalue }).map_err(|e| Error::Io(e.to_string()))?;
        }
        let bytes = w.into_inner().map_err(|e| Error::Io(e.to_string()))?;
        Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
    }
}

/// Symmetric matrix `D M D^{-1}` and its largest asymmetry before averaging.
pub fn symmetrize(locus: &SupersingularLocus, t: &HeckeMatrix) -> Result<(DMatrix<f64>, f64)> {
    let n = locus.len();
    if t.dim() != n {
        return Err(Error::DimensionMismatch { expected: n, got: t.dim() });
    }
    let root: Vec<f64> = locus.weights().iter().map(|&w| (w as f64).sqrt()).collect();
    let s = DMatrix::from_fn(n, n, |i, j| t.get(i, j) as f64 * root[j] / root[i]);
    let residual = (&s - s.transpose()).amax();
    Ok(((&s + s.transpose()) * 0.5, residual))
}

pub fn spectrum(locus: &SupersingularLocus, t: &HeckeMatrix) -> Result<SpectrumReport> {
    let level = t.level();
    if !is_prime(level) {
        return Err(Error::InvalidInput(format!("spectrum needs a prime level, got {level}")));
    }
    let (s, residual) = symmetrize(locus, t)?;
    if residual > SYMMETRY_TOLERANCE {
        return Err(Error::SymmetrizationResidual(residual));
    }
    let mut eigenvalues: Vec<f64> = SymmetricEigen::new(s).eigenvalues.iter().copied().collect();
    eigenvalues.sort_by(|a, b| b.total_cmp(a));
    let max_nontrivial = eigenvalues.iter().skip(1).map(|x| x.abs()).reduce(f64::max);
    let ramanujan_bound = 2.0 * (level as f64).sqrt();
    Ok(SpectrumReport {
        p: locus.p(),
        level,
        trivial_eigenvalue: eigenvalues[0],
        max_nontrivial,
        ramanujan_bound,
        margin: max_nontrivial.map_or(f64::INFINITY, |x| ramanujan_bound - x),
        symmetrization_residual: residual,
        eigenvalues,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::supersingular::{enumerate_locus, hecke_matrix, ModularPolynomial};

    fn t2(p: u64) -> (SupersingularLocus, HeckeMatrix) {
        let locus = enumerate_locus(p).unwrap();
        let t = hecke_matrix(&locus, &ModularPolynomial::builtin(2).unwrap()).unwrap();
        (locus, t)
    }

    #[test]
    fn single_point() {
        let (locus, t) = t2(13);
        let rep = spectrum(&locus, &t).unwrap();
        assert_eq!(rep.eigenvalues, vec![3.0]);
        assert_eq!(rep.max_nontrivial, None);
        assert_eq!(rep.margin, f64::INFINITY);
    }

    #[test]
    fn two_points_trace_identity() {
        let (locus, t) = t2(11);
        let rep = spectrum(&locus, &t).unwrap();
        let trace = (t.get(0, 0) + t.get(1, 1)) as f64;
        assert!((rep.eigenvalues[0] - 3.0).abs() < 1e-12);
        assert!((rep.eigenvalues[1] - (trace - 3.0)).abs() < 1e-12);
        assert!(rep.within_bound(1e-9));
    }

    #[test]
    fn p1009_is_ramanujan() {
        let (locus, t) = t2(1009);
        let rep = spectrum(&locus, &t).unwrap();
        assert_eq!(rep.eigenvalues.len(), 84);
        assert!((rep.trivial_eigenvalue - 3.0).abs() < 1e-9);
        assert!(rep.within_bound(1e-9));
        let csv = rep.to_csv().unwrap();
        assert!(csv.starts_with("index,eigenvalue\n0,"));
        assert_eq!(csv.lines().count(), 85);
    }

    #[test]
    fn rejects_composite_level() {
        let (locus, t) = t2(1009);
        assert!(spectrum(&locus, &t.mul(&t).unwrap()).is_err());
    }
}
