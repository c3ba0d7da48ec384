use std::collections::HashMap;

use num_bigint::BigUint;
use serde::Serialize;

use super::{decimal, decimal_opt, deviation, fit_linear, fit_rate, mass_average, norms, StratumFunction, RELATIVE_SLACK};
use crate::arith::is_prime;
use crate::error::{Error, Result};
use crate::supersingular::{hecke_matrix, HeckeMatrix, ModularPolynomial, ModularPolynomialLibrary, SupersingularLocus};

/// Errors below this are treated as numerically zero.
pub const ERROR_FLOOR: f64 = 1e-14;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ConvergenceRow {
    /// The operator index: `m` for `T_m`, or the exponent of `T_l^m`.
    pub m: u64,
    pub degree: String,
    #[serde(serialize_with = "decimal")]
    pub error_sup: f64,
    #[serde(serialize_with = "decimal")]
    pub error_weighted2: f64,
    /// `N(T_m)/deg(T_m)`.
    #[serde(serialize_with = "decimal")]
    pub bound: f64,
    /// `bound * |v - Avg v|_{2,mu}`.
    #[serde(serialize_with = "decimal")]
    pub allowed: f64,
    pub satisfied: bool,
    /// Ratio of consecutive weighted errors (power sequences only).
    #[serde(serialize_with = "decimal_opt")]
    pub contraction: Option<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ConvergenceReport {
    pub kind: String,
    pub p: u64,
    pub levels: Vec<u64>,
    pub initial: String,
    #[serde(serialize_with = "decimal")]
    pub initial_sup: f64,
    #[serde(serialize_with = "decimal")]
    pub initial_weighted2: f64,
    pub rows: Vec<ConvergenceRow>,
    /// Log-log slope of `error_sup` against `m`, or log-error per step for powers.
    #[serde(serialize_with = "decimal_opt")]
    pub slope: Option<f64>,
    #[serde(serialize_with = "decimal_opt")]
    pub intercept: Option<f64>,
    pub degenerate: bool,
    pub all_satisfied: bool,
}

impl ConvergenceReport {
    pub fn to_csv(&self) -> Result<String> {
        let mut w = csv::Writer::from_writer(Vec::new());
        for row in &self.rows {
            w.serialize(row).map_err(|e| Error::Io(e.to_string()))?;
        }
        let bytes = w.into_inner().map_err(|e| Error::Io(e.to_string()))?;
        Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
    }

    /// Largest per-step contraction among rows whose previous error was above the floor.
    pub fn max_contraction(&self) -> Option<f64> {
        self.rows.iter().filter_map(|r| r.contraction).reduce(f64::max)
    }
}

fn check_levels(locus: &SupersingularLocus, levels: &[u64]) -> Result<()> {
    for (i, &ell) in levels.iter().enumerate() {
        if !is_prime(ell) {
            return Err(Error::NotPrime(ell));
        }
        if ell == locus.p() {
            return Err(Error::InvalidInput(format!("level {ell} equals the characteristic")));
        }
        if levels[..i].contains(&ell) {
            return Err(Error::InvalidInput(format!("level {ell} listed twice")));
        }
    }
    Ok(())
}

fn mean_free(locus: &SupersingularLocus, u: Vec<f64>) -> Result<StratumFunction> {
    let u = StratumFunction::new(locus, u)?;
    let avg = mass_average(locus, &u)?;
    Ok(u.sub(&avg))
}

fn step(locus: &SupersingularLocus, t: &HeckeMatrix, u: &StratumFunction) -> Result<StratumFunction> {
    let deg = t.degree() as f64;
    let mut next = t.apply(u.values())?;
    next.iter_mut().for_each(|x| *x /= deg);
    // removes rounding drift along the constants
    mean_free(locus, next)
}

/// `T_m v / deg - Avg v` for every squarefree `m > 1` built from `levels`,
/// checked against `prod_{l | m} 2 sqrt(l) / (l + 1)`.
///
/// Errors are propagated on the deviation `v - Avg v`, which `T_m / deg`
/// maps to `T_m v / deg - Avg v`.
pub fn run_squarefree_experiment(
    locus: &SupersingularLocus,
    levels: &[u64],
    v: &StratumFunction,
    initial: &str,
    library: &ModularPolynomialLibrary,
) -> Result<ConvergenceReport> {
    check_levels(locus, levels)?;
    let mut levels = levels.to_vec();
    levels.sort_unstable();
    let mats = levels
        .iter()
        .map(|&ell| Ok((ell, hecke_matrix(locus, library.get(ell)?)?)))
        .collect::<Result<HashMap<u64, HeckeMatrix>>>()?;

    let u0 = deviation(locus, v)?;
    let (initial_sup, initial_weighted2) = norms(locus, &u0);
    let degenerate = initial_weighted2 == 0.0;

    let mut ms: Vec<(u64, u64)> = (1u64..1 << levels.len())
        .map(|mask| {
            let chosen = levels.iter().enumerate().filter(|(i, _)| mask >> i & 1 == 1).map(|(_, &l)| l);
            chosen.fold((1, 0), |(m, _), l| (m * l, l))
        })
        .collect();
    ms.sort_unstable();

    let mut cache: HashMap<u64, StratumFunction> = HashMap::from([(1, u0)]);
    let mut rows = Vec::with_capacity(ms.len());
    for (m, top) in ms {
        let parent = &cache[&(m / top)];
        let u = step(locus, &mats[&top], parent)?;
        let (error_sup, error_weighted2) = norms(locus, &u);
        cache.insert(m, u);

        let primes: Vec<u64> = levels.iter().copied().filter(|l| m % l == 0).collect();
        let bound: f64 = primes.iter().map(|&l| 2.0 * (l as f64).sqrt() / (l as f64 + 1.0)).product();
        let degree: u64 = primes.iter().map(|l| l + 1).product();
        let allowed = bound * initial_weighted2;
        rows.push(ConvergenceRow {
            m,
            degree: degree.to_string(),
            error_sup,
            error_weighted2,
            bound,
            allowed,
            satisfied: error_weighted2 <= allowed * (1.0 + RELATIVE_SLACK),
            contraction: None,
        });
    }

    let fit = if degenerate {
        None
    } else {
        let samples: Vec<(f64, f64)> = rows.iter().map(|r| (r.m as f64, r.error_sup)).collect();
        fit_rate(&samples).ok()
    };
    Ok(ConvergenceReport {
        kind: "squarefree".into(),
        p: locus.p(),
        levels,
        initial: initial.to_string(),
        initial_sup,
        initial_weighted2,
        all_satisfied: rows.iter().all(|r| r.satisfied),
        rows,
        slope: fit.map(|f| f.0),
        intercept: fit.map(|f| f.1),
        degenerate,
    })
}

/// Iterates `w <- T_l w / (l + 1)` and compares with `(2 sqrt(l) / (l + 1))^k`.
/// The slope is the least-squares log-error per step over errors above
/// [`ERROR_FLOOR`].
pub fn run_power_experiment(
    locus: &SupersingularLocus,
    phi: &ModularPolynomial,
    v: &StratumFunction,
    count: usize,
    initial: &str,
) -> Result<ConvergenceReport> {
    if count == 0 {
        return Err(Error::InvalidInput("count must be at least 1".into()));
    }
    let ell = phi.level();
    check_levels(locus, &[ell])?;
    let t = hecke_matrix(locus, phi)?;
    let factor = 2.0 * (ell as f64).sqrt() / (ell as f64 + 1.0);

    let mut u = deviation(locus, v)?;
    let (initial_sup, initial_weighted2) = norms(locus, &u);
    let degenerate = initial_weighted2 == 0.0;
    let mut prev = initial_weighted2;
    let mut degree = BigUint::from(1u32);
    let mut rows = Vec::with_capacity(count);
    for k in 1..=count {
        u = step(locus, &t, &u)?;
        degree *= ell + 1;
        let (error_sup, error_weighted2) = norms(locus, &u);
        let bound = factor.powi(k as i32);
        let allowed = bound * initial_weighted2;
        rows.push(ConvergenceRow {
            m: k as u64,
            degree: degree.to_string(),
            error_sup,
            error_weighted2,
            bound,
            allowed,
            satisfied: error_weighted2 <= allowed * (1.0 + RELATIVE_SLACK),
            contraction: (prev > ERROR_FLOOR).then(|| error_weighted2 / prev),
        });
        prev = error_weighted2;
    }

    let above: Vec<(f64, f64)> = rows
        .iter()
        .filter(|r| r.error_weighted2 > ERROR_FLOOR)
        .map(|r| (r.m as f64, r.error_weighted2.ln()))
        .collect();
    let fit = if degenerate { None } else { fit_linear(&above).ok() };
    Ok(ConvergenceReport {
        kind: "power".into(),
        p: locus.p(),
        levels: vec![ell],
        initial: initial.to_string(),
        initial_sup,
        initial_weighted2,
        all_satisfied: rows.iter().all(|r| r.satisfied),
        rows,
        slope: fit.map(|f| f.0),
        intercept: fit.map(|f| f.1),
        degenerate,
    })
}
