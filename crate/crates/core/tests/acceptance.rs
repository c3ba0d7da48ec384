//! Acceptance checks, one line per criterion. Runs without the libtest
//! harness so the PASS/FAIL lines always reach stdout.

use std::collections::BTreeSet;
use std::process::ExitCode;
use std::time::{Duration, Instant};

use hecke_core::equidist::{run_power_experiment, run_squarefree_experiment, ConvergenceReport, StratumFunction};
use hecke_core::number_field::NumberFieldSpec;
use hecke_core::satake::{
    binomial, degree_global, degree_local, norm_global, ratio_and_bound, stirling_failures, stirling_threshold,
    GlobalOperatorSpec,
};
use hecke_core::supersingular::{
    enumerate_locus, hecke_matrix, hecke_squarefree, HeckeMatrix, ModularPolynomialLibrary, SupersingularLocus,
};
use hecke_core::{equidist, Error};
use num_bigint::{BigInt, BigUint};
use num_rational::{BigRational, Ratio};
use num_traits::{One, Zero};

const LEVELS: [u64; 6] = [2, 3, 5, 7, 11, 13];

/// Fixed 30-prime sample below 3000.
const SAMPLE: [u64; 30] = [
    5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 101, 103, 163, 229, 331, 433, 541, 661, 769, 877, 1009, 1201, 1423, 1601,
    1811, 2003, 2281, 2503, 2719, 2999,
];

const SPECTRAL_TOL: f64 = 1e-9;
const RELATIVE_SLACK: f64 = 1e-9;
const IDENTITY_TOL: f64 = 1e-12;
const SLOPE_MAX: f64 = -0.45;
const ERROR_FLOOR: f64 = 1e-14;
const RANDOM_VECTORS: u64 = 100;
const POWER_STEPS: usize = 400;
const STIRLING_SCAN: u64 = 10_000_000;

struct Outcome {
    ok: bool,
    detail: String,
}

fn outcome(ok: bool, detail: impl Into<String>) -> Outcome {
    Outcome { ok, detail: detail.into() }
}

fn is_prime_naive(n: u64) -> bool {
    n >= 2 && (2..).take_while(|d| d * d <= n).all(|d| !n.is_multiple_of(d))
}

fn library() -> ModularPolynomialLibrary {
    ModularPolynomialLibrary::builtin().expect("bundled modular polynomials")
}

fn c1_mass_formula() -> Outcome {
    let primes: Vec<u64> = (5..=2000).filter(|&p| is_prime_naive(p)).collect();
    let mut bad = Vec::new();
    for &p in &primes {
        let Ok(locus) = enumerate_locus(p) else {
            bad.push(p);
            continue;
        };
        let mass: Ratio<u64> = locus.weights().iter().map(|&w| Ratio::new(1, 2 * w as u64)).sum();
        let eps = [0, 1, 1, 2][[1, 5, 7, 11].iter().position(|&r| p % 12 == r).unwrap()];
        let count_ok = locus.len() as u64 == (p - 1) / 12 + eps;
        if mass != Ratio::new(p - 1, 24) || locus.total_mass() != mass || !count_ok {
            bad.push(p);
        }
    }
    outcome(bad.is_empty(), format!("{} primes in [5, 2000], exact; failures {bad:?}", primes.len()))
}

fn prime_matrices(locus: &SupersingularLocus, lib: &ModularPolynomialLibrary) -> Vec<HeckeMatrix> {
    LEVELS
        .iter()
        .filter(|&&l| l != locus.p())
        .map(|&l| hecke_matrix(locus, lib.get(l).unwrap()).unwrap())
        .collect()
}

fn c2_structure(lib: &ModularPolynomialLibrary) -> Outcome {
    let mut bad = Vec::new();
    let mut checked = 0;
    for &p in &SAMPLE {
        let locus = enumerate_locus(p).unwrap();
        let w = locus.weights();
        let mats = prime_matrices(&locus, lib);
        for t in &mats {
            let n = t.dim();
            let rows_ok = (0..n).all(|i| t.row(i).iter().sum::<u64>() == t.level() + 1);
            let sym_ok = (0..n).all(|i| (0..n).all(|j| w[j] as u64 * t.get(i, j) == w[i] as u64 * t.get(j, i)));
            if !rows_ok || !sym_ok {
                bad.push(format!("p={p} l={}", t.level()));
            }
            checked += 1;
        }
        for (a, s) in mats.iter().enumerate() {
            for t in &mats[a + 1..] {
                if s.mul(t).unwrap() != t.mul(s).unwrap() {
                    bad.push(format!("p={p} [T{}, T{}] != 0", s.level(), t.level()));
                }
            }
        }
    }
    outcome(bad.is_empty(), format!("{checked} matrices over 30 primes, exact; failures {bad:?}"))
}

fn c3_ramanujan(lib: &ModularPolynomialLibrary) -> Outcome {
    let mut worst = f64::NEG_INFINITY;
    let mut bad = Vec::new();
    for &p in &SAMPLE {
        let locus = enumerate_locus(p).unwrap();
        for t in prime_matrices(&locus, lib) {
            let ell = t.level() as f64;
            let rep = equidist::spectrum(&locus, &t).unwrap();
            let top_ok = (rep.eigenvalues[0] - (ell + 1.0)).abs() <= SPECTRAL_TOL;
            let bound = 2.0 * ell.sqrt();
            let nontrivial = rep.eigenvalues[1..].iter().fold(0.0f64, |a, x| a.max(x.abs()));
            worst = worst.max(nontrivial - bound);
            if !top_ok || nontrivial > bound + SPECTRAL_TOL {
                bad.push(format!("p={p} l={}", t.level()));
            }
        }
    }
    outcome(
        bad.is_empty(),
        format!("max(|lambda| - 2 sqrt(l)) = {worst:.3e}, tolerance {SPECTRAL_TOL:e}; failures {bad:?}"),
    )
}

/// Mass-weighted mean, recomputed from the weights.
fn mean(locus: &SupersingularLocus, v: &[f64]) -> f64 {
    let (num, den) = v.iter().zip(locus.weights()).fold((0.0, 0.0), |(a, b), (x, &w)| (a + x / w as f64, b + 1.0 / w as f64));
    num / den
}

fn weighted2(locus: &SupersingularLocus, v: &[f64], c: f64) -> f64 {
    v.iter().zip(locus.weights()).map(|(x, &w)| (x - c).powi(2) / w as f64).sum::<f64>().sqrt()
}

fn c4_main_inequality(lib: &ModularPolynomialLibrary) -> Outcome {
    let locus = enumerate_locus(1009).unwrap();
    let mut failures = 0;
    let mut rows = 0;
    let mut worst = 0.0f64;
    let mut first: Option<ConvergenceReport> = None;
    for seed in 0..RANDOM_VECTORS {
        let v = StratumFunction::random_unit(&locus, seed);
        let rep = run_squarefree_experiment(&locus, &LEVELS, &v, "random", lib).unwrap();
        for r in &rep.rows {
            rows += 1;
            worst = worst.max(r.error_weighted2 / r.allowed);
            if r.error_weighted2 > r.allowed * (1.0 + RELATIVE_SLACK) {
                failures += 1;
            }
        }
        first.get_or_insert(rep);
    }
    // direct T_m for seed 0 as an oracle for the experiment's propagation
    let first = first.unwrap();
    let v = StratumFunction::random_unit(&locus, 0);
    let avg = mean(&locus, v.values());
    let init = weighted2(&locus, v.values(), avg);
    let mut oracle_ok = (init - first.initial_weighted2).abs() <= IDENTITY_TOL;
    let ms: Vec<u64> = first.rows.iter().map(|r| r.m).collect();
    for (row, &m) in first.rows.iter().zip(&ms) {
        let t = hecke_squarefree(&locus, m, lib).unwrap();
        let tv: Vec<f64> = t.apply(v.values()).unwrap().iter().map(|x| x / t.degree() as f64).collect();
        let direct = weighted2(&locus, &tv, avg);
        let bound: f64 = LEVELS.iter().filter(|&&l| m % l == 0).map(|&l| 2.0 * (l as f64).sqrt() / (l as f64 + 1.0)).product();
        oracle_ok &= (direct - row.error_weighted2).abs() <= IDENTITY_TOL * init.max(1.0);
        oracle_ok &= (bound - row.bound).abs() <= IDENTITY_TOL;
        oracle_ok &= direct <= bound * init * (1.0 + RELATIVE_SLACK);
    }
    let distinct: BTreeSet<u64> = ms.iter().copied().collect();
    outcome(
        failures == 0 && rows == 63 * RANDOM_VECTORS as usize && distinct.len() == 63 && oracle_ok,
        format!(
            "p=1009, 63 m x {RANDOM_VECTORS} vectors, max error/allowed = {worst:.4}, slack {RELATIVE_SLACK:e}; direct T_m oracle {}",
            if oracle_ok { "agrees" } else { "DISAGREES" }
        ),
    )
}

/// Ordinary least squares slope of `ln y` against `ln x`.
fn loglog_slope(points: &[(f64, f64)]) -> f64 {
    let pts: Vec<(f64, f64)> = points.iter().filter(|p| p.1 > 0.0).map(|&(x, y)| (x.ln(), y.ln())).collect();
    let n = pts.len() as f64;
    let (mx, my) = (pts.iter().map(|p| p.0).sum::<f64>() / n, pts.iter().map(|p| p.1).sum::<f64>() / n);
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
    sxy / sxx
}

fn c5_rate(lib: &ModularPolynomialLibrary) -> Outcome {
    let mut ok = true;
    let mut parts = Vec::new();
    for p in [1009, 2003, 2999] {
        let locus = enumerate_locus(p).unwrap();
        let inputs = [
            ("indicator", StratumFunction::indicator(&locus, 0).unwrap()),
            ("random", StratumFunction::random_unit(&locus, 0)),
        ];
        for (name, v) in inputs {
            let rep = run_squarefree_experiment(&locus, &LEVELS, &v, name, lib).unwrap();
            let pts: Vec<(f64, f64)> = rep.rows.iter().map(|r| (r.m as f64, r.error_sup)).collect();
            let slope = loglog_slope(&pts);
            let agrees = rep.slope.is_some_and(|s| (s - slope).abs() <= 1e-9);
            ok &= pts.len() == 63 && slope <= SLOPE_MAX && agrees;
            parts.push(format!("{p}/{name} {slope:.3}"));
        }
    }
    outcome(ok, format!("slopes {} (threshold {SLOPE_MAX})", parts.join(", ")))
}

fn c6_power(lib: &ModularPolynomialLibrary) -> Outcome {
    let locus = enumerate_locus(1009).unwrap();
    let phi = lib.get(2).unwrap();
    let factor = 2.0 * 2f64.sqrt() / 3.0;
    let mut ok = true;
    let mut worst = 0.0f64;
    let mut steps = 0;
    let inputs = [
        ("indicator", StratumFunction::indicator(&locus, 0).unwrap()),
        ("random", StratumFunction::random_unit(&locus, 0)),
    ];
    for (name, v) in inputs {
        let rep = run_power_experiment(&locus, phi, &v, POWER_STEPS, name).unwrap();
        ok &= rep.rows.len() == POWER_STEPS;
        let mut prev = rep.initial_weighted2;
        for r in &rep.rows {
            if prev > ERROR_FLOOR {
                let c = r.error_weighted2 / prev;
                worst = worst.max(c);
                ok &= c <= factor + 1e-9;
                steps += 1;
            }
            prev = r.error_weighted2;
        }
    }
    outcome(ok, format!("p=1009, l=2, {POWER_STEPS} steps, {steps} above floor {ERROR_FLOOR:e}, max factor {worst:.6} <= {factor:.6} + 1e-9"))
}

/// Sum over r-subsets S of {1..n} of q^{r(n-r)/2} prod_{i in S} q^{(n+1-2i)/2}.
fn subset_sum_degree(n: usize, r: usize, q: u64) -> BigUint {
    let mut total = BigUint::zero();
    for mask in 0u32..1 << n {
        if mask.count_ones() as usize != r {
            continue;
        }
        let twice: i64 = (r * (n - r)) as i64 + (1..=n as i64).filter(|i| mask >> (i - 1) & 1 == 1).map(|i| n as i64 + 1 - 2 * i).sum::<i64>();
        assert!(twice >= 0 && twice % 2 == 0);
        total += BigUint::from(q).pow((twice / 2) as u32);
    }
    total
}

fn c7_satake_exact() -> Outcome {
    let mut bad = Vec::new();
    for ell in (2..=100).filter(|&l| is_prime_naive(l)) {
        if degree_local(2, 1, &BigUint::from(ell)).unwrap() != BigUint::from(ell + 1) {
            bad.push(format!("deg(2,1,{ell})"));
        }
    }
    let mut cases = 0;
    for n in 1..=8usize {
        for r in 0..=n {
            let top = |q: u64| BigUint::from(q).pow((r * (n - r)) as u32);
            for q in [2u64, 3, 4, 5, 9] {
                cases += 1;
                let deg = degree_local(n, r, &BigUint::from(q)).unwrap();
                if deg != subset_sum_degree(n, r, q) {
                    bad.push(format!("oracle n={n} r={r} q={q}"));
                }
                if deg < top(q) || deg > binomial(n, r) * top(q) {
                    bad.push(format!("dominance n={n} r={r} q={q}"));
                }
            }
        }
    }
    outcome(bad.is_empty(), format!("{cases} (n, r, q) cases plus 25 primes, exact; failures {bad:?}"))
}

/// Places of `x^2 - d` above an odd prime not dividing `d`, via Euler's criterion.
fn quadratic_places(d: i64, ell: u64) -> Vec<u64> {
    let a = d.rem_euclid(ell as i64) as u64;
    let e = BigUint::from(a).modpow(&BigUint::from((ell - 1) / 2), &BigUint::from(ell));
    if e.is_one() {
        vec![ell, ell]
    } else {
        vec![ell * ell]
    }
}

fn c8_bound() -> Outcome {
    let fields: [(&str, Option<i64>); 3] = [("Q", None), ("Q(sqrt 5)", Some(5)), ("Q(sqrt 13)", Some(13))];
    let mut bad = Vec::new();
    let mut checked = 0;
    for (name, d) in fields {
        let field = match d {
            None => NumberFieldSpec::rationals(),
            Some(d) => NumberFieldSpec::from_i64s(&[-d, 0, 1]).unwrap(),
        };
        let deg_f = if d.is_some() { 2 } else { 1 };
        for m in 2..=1000u64 {
            let primes: Vec<u64> = (2..=m).filter(|&l| m % l == 0 && is_prime_naive(l)).collect();
            if primes.iter().product::<u64>() != m {
                continue;
            }
            if let Some(d) = d {
                if primes.iter().any(|&l| l == 2 || d % l as i64 == 0) {
                    continue;
                }
            }
            let places: Vec<u64> = primes
                .iter()
                .flat_map(|&l| match d {
                    None => vec![l],
                    Some(d) => quadratic_places(d, l),
                })
                .collect();
            for n in 2..=6usize {
                for r in 1..n {
                    checked += 1;
                    let spec = GlobalOperatorSpec::new(n, r, m, field.clone()).unwrap();
                    let rb = ratio_and_bound(&spec).unwrap();
                    let b = binomial(n, r);
                    let k = (r * (n - r)) as u32;
                    let mut norm_sq = BigUint::one();
                    let mut deg = BigUint::one();
                    for &q in &places {
                        norm_sq *= &b * &b * BigUint::from(q).pow(k);
                        deg *= subset_sum_degree(n, r, q);
                    }
                    let ratio_sq = BigRational::new(BigInt::from(norm_sq.clone()), BigInt::from(&deg * &deg));
                    let bound_sq = BigRational::new(
                        BigInt::from(b.pow(2 * places.len() as u32)),
                        BigInt::from(m).pow(deg_f * k),
                    );
                    let agrees = rb.ratio_squared == ratio_sq
                        && rb.bound_squared == bound_sq
                        && degree_global(&spec).unwrap() == deg
                        && norm_global(&spec).unwrap().squared() == norm_sq;
                    if !agrees || !rb.satisfied || ratio_sq > bound_sq {
                        bad.push(format!("{name} n={n} r={r} m={m}"));
                    }
                }
            }
        }
    }
    outcome(bad.is_empty(), format!("{checked} (F, n, r, m) cases, exact squares; failures {:?}", &bad[..bad.len().min(10)]))
}

/// `omega(m)` for squarefree `m <= limit`, `None` otherwise.
fn omega_sieve(limit: usize) -> Vec<Option<u8>> {
    let mut omega = vec![Some(0u8); limit + 1];
    let mut composite = vec![false; limit + 1];
    for p in 2..=limit {
        if composite[p] {
            continue;
        }
        for k in (p..=limit).step_by(p) {
            if k > p {
                composite[k] = true;
            }
            if let Some(w) = &mut omega[k] {
                *w += 1;
            }
        }
        if let Some(pp) = p.checked_mul(p).filter(|&pp| pp <= limit) {
            for k in (pp..=limit).step_by(pp) {
                omega[k] = None;
            }
        }
    }
    omega
}

/// Squarefree `1 < m <= limit` with `binom^{omega b} > m^a`.
fn brute_failures(omega: &[Option<u8>], binom: u128, eps: Ratio<u64>) -> Vec<u64> {
    let (a, b) = (*eps.numer() as u32, *eps.denom() as u32);
    (2..omega.len())
        .filter_map(|m| {
            let w = omega[m]?;
            let lhs = binom.checked_pow(w as u32 * b).expect("fits in u128");
            let rhs = (m as u128).checked_pow(a).expect("fits in u128");
            (lhs > rhs).then_some(m as u64)
        })
        .collect()
}

fn c9_stirling() -> Outcome {
    let mut ok = stirling_threshold(2, 1, Ratio::new(1, 2)).ok() == Some(210);
    let mut parts = vec![format!("(2,1,1/2) -> {}", stirling_threshold(2, 1, Ratio::new(1, 2)).map_or("error".into(), |m| m.to_string()))];
    let omega = omega_sieve(STIRLING_SCAN as usize);
    // eps values whose threshold lies inside the scan
    let full: [(usize, usize, (u64, u64)); 7] =
        [(3, 1, (2, 3)), (3, 1, (3, 4)), (3, 1, (4, 5)), (3, 1, (1, 1)), (4, 2, (1, 1)), (4, 2, (5, 4)), (4, 2, (3, 2))];
    for (n, r, (a, b)) in full {
        let eps = Ratio::new(a, b);
        let brute = brute_failures(&omega, binomial(n, r).try_into().unwrap(), eps);
        let expected = brute.last().copied().unwrap_or(1);
        let res = stirling_failures(n, r, eps, None).unwrap();
        let agree = res.failures == brute && res.threshold == expected && expected < STIRLING_SCAN / 10;
        ok &= agree;
        parts.push(format!("({n},{r},{a}/{b}) -> {}{}", res.threshold, if agree { "" } else { " MISMATCH" }));
    }
    // eps = 1/2: the threshold exceeds the scan (3,1) or 64 bits (4,2); compare below the scan
    for (n, r) in [(3usize, 1usize), (4, 2)] {
        let eps = Ratio::new(1, 2);
        let brute = brute_failures(&omega, binomial(n, r).try_into().unwrap(), eps);
        let limited = stirling_failures(n, r, eps, Some(STIRLING_SCAN)).unwrap();
        let agree = limited.failures == brute;
        ok &= agree;
        let full = match stirling_threshold(n, r, eps) {
            Ok(m) => m.to_string(),
            Err(Error::Intractable(_)) => "beyond 64 bits".to_string(),
            Err(e) => format!("error {e}"),
        };
        parts.push(format!(
            "({n},{r},1/2) {} failures <= 1e7 {}, full M {full}",
            brute.len(),
            if agree { "agree" } else { "MISMATCH" }
        ));
    }
    outcome(ok, parts.join("; "))
}

fn main() -> ExitCode {
    let lib = library();
    let criteria: Vec<(&str, Duration, Box<dyn Fn() -> Outcome + '_>)> = vec![
        ("mass formula", Duration::from_secs(60), Box::new(c1_mass_formula)),
        ("structural matrix identities", Duration::from_secs(300), Box::new(|| c2_structure(&lib))),
        ("Ramanujan spectral bound", Duration::from_secs(300), Box::new(|| c3_ramanujan(&lib))),
        ("main inequality with explicit constant", Duration::from_secs(60), Box::new(|| c4_main_inequality(&lib))),
        ("rate reproduction", Duration::from_secs(120), Box::new(|| c5_rate(&lib))),
        ("power-sequence contraction", Duration::from_secs(60), Box::new(|| c6_power(&lib))),
        ("Satake exactness", Duration::from_secs(60), Box::new(c7_satake_exact)),
        ("norm/degree bound", Duration::from_secs(120), Box::new(c8_bound)),
        ("Stirling threshold", Duration::from_secs(120), Box::new(c9_stirling)),
    ];
    let mut all = true;
    for (i, (name, budget, run)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let res = run();
        let took = start.elapsed();
        let ok = res.ok && took <= *budget;
        all &= ok;
        println!(
            "{} [{}] {name}: {} ({:.1}s, budget {}s)",
            if ok { "PASS" } else { "FAIL" },
            i + 1,
            res.detail,
            took.as_secs_f64(),
            budget.as_secs()
        );
    }
    println!("acceptance: {}", if all { "all criteria pass" } else { "FAILURES" });
    if all {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
