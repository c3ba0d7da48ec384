use std::collections::BTreeMap;
use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};

use super::hecke::HeckeMatrix;
use super::SupersingularLocus;
use crate::error::{Error, Result};
use crate::ffpoly::{FiniteField, Fq};

/// JSON cache of a locus and any Hecke matrices built on it.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LocusCache {
    pub p: u64,
    pub basis_ns: u64,
    pub points: Vec<[u64; 2]>,
    pub weights: Vec<u8>,
    #[serde(default)]
    pub matrices: BTreeMap<String, Vec<Vec<u64>>>,
}

impl LocusCache {
    pub fn new(locus: &SupersingularLocus) -> Self {
        LocusCache {
            p: locus.p(),
            basis_ns: locus.field().nonresidue(),
            points: locus.points().iter().map(|x| [x.re, x.im]).collect(),
            weights: locus.weights().to_vec(),
            matrices: BTreeMap::new(),
        }
    }

    pub fn insert_matrix(&mut self, t: &HeckeMatrix) {
        self.matrices.insert(t.level().to_string(), t.rows());
    }

    /// Rebuilds and revalidates the locus.
    pub fn locus(&self) -> Result<SupersingularLocus> {
        let field = FiniteField::quadratic(self.p)?;
        if field.nonresidue() != self.basis_ns {
            return Err(Error::InvalidInput(format!(
                "cache uses basis t^2 = {}, expected {}",
                self.basis_ns,
                field.nonresidue()
            )));
        }
        let points = self.points.iter().map(|&[re, im]| Fq { re, im }).collect();
        SupersingularLocus::from_parts(self.p, points, self.weights.clone())
    }

    /// A cached matrix for squarefree level `m`, if present.
    pub fn matrix(&self, m: u64) -> Result<Option<HeckeMatrix>> {
        let Some(rows) = self.matrices.get(&m.to_string()) else {
            return Ok(None);
        };
        let degree = crate::arith::factorize(m).iter().map(|&(l, _)| l + 1).product();
        HeckeMatrix::from_rows(m, degree, rows.clone()).map(Some)
    }

    pub fn load(path: &Path) -> Result<Self> {
        serde_json::from_str(&fs::read_to_string(path)?).map_err(|e| Error::Io(format!("{}: {e}", path.display())))
    }

    pub fn save(&self, path: &Path) -> Result<()> {
        let text = serde_json::to_string(self).map_err(|e| Error::Io(e.to_string()))?;
        fs::write(path, text)?;
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::super::{enumerate_locus, hecke_matrix, ModularPolynomial};
    use super::*;

    #[test]
    fn json_round_trip() {
        let locus = enumerate_locus(23).unwrap();
        let t2 = hecke_matrix(&locus, &ModularPolynomial::builtin(2).unwrap()).unwrap();
        let mut cache = LocusCache::new(&locus);
        cache.insert_matrix(&t2);
        let json = serde_json::to_string(&cache).unwrap();
        let back: LocusCache = serde_json::from_str(&json).unwrap();
        assert_eq!(back.locus().unwrap(), locus);
        assert_eq!(back.matrix(2).unwrap(), Some(t2));
        assert_eq!(back.matrix(3).unwrap(), None);

        let value: serde_json::Value = serde_json::from_str(&json).unwrap();
        assert_eq!(value["p"], 23);
        assert_eq!(value["basis_ns"], 5);
        assert!(value["matrices"]["2"].is_array());
    }
}
