//! Normalized Hecke operators acting on functions on the supersingular
//! locus: the mass projection, error norms, the Ramanujan spectrum check and
//! the convergence experiments.

mod experiment;
mod fit;
mod spectrum;

pub use experiment::{run_power_experiment, run_squarefree_experiment, ConvergenceReport, ConvergenceRow};
pub use fit::{fit_linear, fit_rate};
pub use spectrum::{spectrum, SpectrumReport};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serializer;

use crate::error::{Error, Result};
use crate::supersingular::{HeckeMatrix, SupersingularLocus};

/// Relative slack for inequalities checked in floating point.
pub const RELATIVE_SLACK: f64 = 1e-9;

/// A real-valued function on the locus, indexed like its points.
#[derive(Clone, Debug, PartialEq)]
pub struct StratumFunction {
    values: Vec<f64>,
}

impl StratumFunction {
    pub fn new(locus: &SupersingularLocus, values: Vec<f64>) -> Result<Self> {
        if values.len() != locus.len() {
            return Err(Error::DimensionMismatch { expected: locus.len(), got: values.len() });
        }
        Ok(StratumFunction { values })
    }

    pub fn constant(locus: &SupersingularLocus, c: f64) -> Self {
        StratumFunction { values: vec![c; locus.len()] }
    }

    pub fn indicator(locus: &SupersingularLocus, index: usize) -> Result<Self> {
        if index >= locus.len() {
            return Err(Error::InvalidInput(format!("index {index} outside a locus of size {}", locus.len())));
        }
        let mut values = vec![0.0; locus.len()];
        values[index] = 1.0;
        Ok(StratumFunction { values })
    }

    /// Uniform entries in `[-1, 1]`, scaled to Euclidean length 1.
    pub fn random_unit(locus: &SupersingularLocus, seed: u64) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut values: Vec<f64> = (0..locus.len()).map(|_| rng.gen_range(-1.0..=1.0)).collect();
        let len = values.iter().map(|x| x * x).sum::<f64>().sqrt();
        if len > 0.0 {
            values.iter_mut().for_each(|x| *x /= len);
        }
        StratumFunction { values }
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.values.windows(2).all(|w| w[0] == w[1])
    }

    fn sub(&self, other: &Self) -> Self {
        StratumFunction { values: self.values.iter().zip(&other.values).map(|(a, b)| a - b).collect() }
    }
}

fn check_len(locus: &SupersingularLocus, v: &StratumFunction) -> Result<()> {
    if v.len() != locus.len() {
        return Err(Error::DimensionMismatch { expected: locus.len(), got: v.len() });
    }
    Ok(())
}

/// Connected-component label of each point. At level one every point lies in
/// the same fibre.
pub fn component_labels(locus: &SupersingularLocus) -> Vec<usize> {
    vec![0; locus.len()]
}

/// Mass-weighted average over each fibre of [`component_labels`].
pub fn mass_average(locus: &SupersingularLocus, v: &StratumFunction) -> Result<StratumFunction> {
    check_len(locus, v)?;
    let labels = component_labels(locus);
    let masses = locus.masses_f64();
    let fibres = labels.iter().max().map_or(0, |m| m + 1);
    let mut total = vec![0.0; fibres];
    let mut weight = vec![0.0; fibres];
    for ((&c, &m), &x) in labels.iter().zip(&masses).zip(&v.values) {
        total[c] += m * x;
        weight[c] += m;
    }
    Ok(StratumFunction { values: labels.iter().map(|&c| total[c] / weight[c]).collect() })
}

/// `T_m v / deg T_m`.
pub fn apply_normalized(locus: &SupersingularLocus, t: &HeckeMatrix, v: &StratumFunction) -> Result<StratumFunction> {
    check_len(locus, v)?;
    let deg = t.degree() as f64;
    let mut values = t.apply(&v.values)?;
    values.iter_mut().for_each(|x| *x /= deg);
    Ok(StratumFunction { values })
}

/// Sup norm and weighted 2-norm (weights `1/w_j`) of `v - w`.
pub fn error_norms(locus: &SupersingularLocus, v: &StratumFunction, w: &StratumFunction) -> Result<(f64, f64)> {
    check_len(locus, v)?;
    check_len(locus, w)?;
    let d = v.sub(w);
    Ok(norms(locus, &d))
}

fn norms(locus: &SupersingularLocus, d: &StratumFunction) -> (f64, f64) {
    let sup = d.values.iter().fold(0.0f64, |acc, x| acc.max(x.abs()));
    let sq: f64 = d.values.iter().zip(locus.weights()).map(|(x, &w)| x * x / w as f64).sum();
    (sup, sq.sqrt())
}

/// `v - Avg v`.
fn deviation(locus: &SupersingularLocus, v: &StratumFunction) -> Result<StratumFunction> {
    if v.is_constant() {
        return Ok(StratumFunction::constant(locus, 0.0));
    }
    Ok(v.sub(&mass_average(locus, v)?))
}

pub(crate) fn decimal<S: Serializer>(x: &f64, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&x.to_string())
}

pub(crate) fn decimal_opt<S: Serializer>(x: &Option<f64>, s: S) -> std::result::Result<S::Ok, S::Error> {
    match x {
        Some(x) => s.serialize_str(&x.to_string()),
        None => s.serialize_str(""),
    }
}

pub(crate) fn decimal_vec<S: Serializer>(xs: &[f64], s: S) -> std::result::Result<S::Ok, S::Error> {
    s.collect_seq(xs.iter().map(|x| x.to_string()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::supersingular::{enumerate_locus, hecke_matrix, ModularPolynomial};

    #[test]
    fn average_examples() {
        let l11 = enumerate_locus(11).unwrap();
        let v = StratumFunction::indicator(&l11, 0).unwrap();
        let avg = mass_average(&l11, &v).unwrap();
        assert!(avg.values().iter().all(|&x| (x - 0.4).abs() < 1e-15));
        let again = mass_average(&l11, &avg).unwrap();
        assert!(again.values().iter().zip(avg.values()).all(|(a, b)| (a - b).abs() < 1e-12));

        let l = enumerate_locus(1009).unwrap();
        let v = StratumFunction::random_unit(&l, 3);
        let mean = v.values().iter().sum::<f64>() / 84.0;
        assert!((mass_average(&l, &v).unwrap().values()[17] - mean).abs() < 1e-15);
    }

    #[test]
    fn normalized_application() {
        let l11 = enumerate_locus(11).unwrap();
        let t2 = hecke_matrix(&l11, &ModularPolynomial::builtin(2).unwrap()).unwrap();
        let c = StratumFunction::constant(&l11, 2.5);
        assert_eq!(apply_normalized(&l11, &t2, &c).unwrap(), c);
        let v = StratumFunction::indicator(&l11, 0).unwrap();
        let out = apply_normalized(&l11, &t2, &v).unwrap();
        assert_eq!(out.values(), &[t2.get(0, 0) as f64 / 3.0, t2.get(1, 0) as f64 / 3.0]);
        let bad = StratumFunction { values: vec![1.0] };
        assert!(apply_normalized(&l11, &t2, &bad).is_err());
    }

    #[test]
    fn norm_examples() {
        let l11 = enumerate_locus(11).unwrap();
        let v = StratumFunction::indicator(&l11, 0).unwrap();
        let z = StratumFunction::constant(&l11, 0.0);
        let (sup, w2) = error_norms(&l11, &v, &z).unwrap();
        assert_eq!(sup, 1.0);
        assert!((w2 - (1.0f64 / 3.0).sqrt()).abs() < 1e-15);
        assert_eq!(error_norms(&l11, &v, &v).unwrap(), (0.0, 0.0));
    }
}
