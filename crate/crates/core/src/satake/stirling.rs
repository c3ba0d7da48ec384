use num_bigint::BigUint;
use num_rational::Ratio;
use num_traits::{One, ToPrimitive};
use serde::{Deserialize, Serialize};

use super::binomial;
use crate::arith::primes_up_to;
use crate::error::{Error, Result};

const MAX_OMEGA: usize = 2000;
const MAX_SIEVE: u64 = 50_000_000;
const MAX_NODES: u64 = 50_000_000;

/// Failures of `binom(n,r)^{omega(m)} <= m^eps` over squarefree `m > 1`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct StirlingResult {
    pub n: usize,
    pub r: usize,
    pub eps: String,
    /// Smallest `M >= 1` such that every squarefree `m > M` satisfies the inequality.
    pub threshold: u64,
    /// Every failing squarefree `m`, ascending.
    pub failures: Vec<u64>,
    /// Beyond this many prime factors no squarefree integer fails.
    pub omega_cutoff: usize,
}

fn validate(n: usize, r: usize, eps: Ratio<u64>) -> Result<(BigUint, u32, u32)> {
    if r == 0 || r >= n {
        return Err(Error::IndexOutOfRange { n, r });
    }
    if *eps.numer() == 0 {
        return Err(Error::InvalidInput("eps must be positive".into()));
    }
    let a = eps.numer().to_u32().ok_or_else(|| Error::InvalidInput("eps numerator too large".into()))?;
    let b = eps.denom().to_u32().ok_or_else(|| Error::InvalidInput("eps denominator too large".into()))?;
    Ok((binomial(n, r), a, b))
}

/// Smallest `K >= 1` with `P_K^a >= C^{Kb}` and `p_{K+1}^a >= C^b`, where `P_K`
/// is the `K`-th primorial. No squarefree `m` with `omega(m) >= K` fails.
fn omega_cutoff(c: &BigUint, a: u32, b: u32, primes: &[u64]) -> Result<usize> {
    let cb = c.pow(b);
    let mut primorial_a = BigUint::one();
    let mut c_kb = BigUint::one();
    for k in 1..=MAX_OMEGA.min(primes.len() - 1) {
        primorial_a *= BigUint::from(primes[k - 1]).pow(a);
        c_kb *= &cb;
        if primorial_a >= c_kb && BigUint::from(primes[k]).pow(a) >= cb {
            return Ok(k);
        }
    }
    Err(Error::Intractable(format!("no omega cutoff below {MAX_OMEGA}")))
}

/// Exclusive upper bound on failing `m` with `omega(m) = k`: `m^a < C^{kb}`.
fn failure_bound(c: &BigUint, a: u32, b: u32, k: usize) -> BigUint {
    let target = c.pow(b * k as u32);
    let root = target.nth_root(a);
    if root.pow(a) == target {
        root
    } else {
        root + 1u32
    }
}

struct Search<'a> {
    primes: &'a [u64],
    bound: u128,
    nodes: u64,
    out: Vec<u64>,
}

impl Search<'_> {
    fn run(&mut self, start: usize, remaining: u32, prod: u128) -> Result<()> {
        self.nodes += 1;
        if self.nodes > MAX_NODES {
            return Err(Error::Intractable(format!("more than {MAX_NODES} candidates")));
        }
        if remaining == 0 {
            self.out.push(prod as u64);
            return Ok(());
        }
        for i in start..self.primes.len() {
            let p = self.primes[i] as u128;
            // remaining primes are all >= p
            let least = p.checked_pow(remaining).and_then(|v| v.checked_mul(prod));
            match least {
                Some(v) if v < self.bound => self.run(i + 1, remaining - 1, prod * p)?,
                _ => break,
            }
        }
        Ok(())
    }
}

fn enumerate(n: usize, r: usize, eps: Ratio<u64>, limit: Option<u64>) -> Result<StirlingResult> {
    let (c, a, b) = validate(n, r, eps)?;
    let small = primes_up_to(20_000);
    let cutoff = omega_cutoff(&c, a, b, &small)?;

    let mut bounds = Vec::with_capacity(cutoff);
    let mut sieve_limit = 1u64;
    let mut primorial = BigUint::one();
    for k in 1..cutoff {
        let mut bound = failure_bound(&c, a, b, k);
        if let Some(lim) = limit {
            bound = bound.min(BigUint::from(lim) + 1u32);
        }
        let bound = bound
            .to_u64()
            .ok_or_else(|| Error::Intractable(format!("failing m with {k} prime factors exceed 64 bits")))?;
        // largest prime that can still complete a product below the bound
        let top = (BigUint::from(bound) / &primorial).to_u64().unwrap_or(u64::MAX);
        sieve_limit = sieve_limit.max(top);
        primorial *= BigUint::from(small[k - 1]);
        bounds.push(bound);
    }
    if sieve_limit > MAX_SIEVE {
        return Err(Error::Intractable(format!("prime factors up to {sieve_limit} would be needed")));
    }
    let primes = primes_up_to(sieve_limit);

    let mut search = Search { primes: &primes, bound: 0, nodes: 0, out: Vec::new() };
    for (k, &bound) in (1..cutoff).zip(&bounds) {
        search.bound = bound as u128;
        search.run(0, k as u32, 1)?;
    }
    let mut failures = search.out;
    failures.sort_unstable();
    Ok(StirlingResult {
        n,
        r,
        eps: eps.to_string(),
        threshold: failures.last().copied().unwrap_or(1).max(1),
        failures,
        omega_cutoff: cutoff,
    })
}

/// All failing squarefree `m`, or only those `m <= limit` when a limit is given.
pub fn stirling_failures(n: usize, r: usize, eps: Ratio<u64>, limit: Option<u64>) -> Result<StirlingResult> {
    enumerate(n, r, eps, limit)
}

/// Smallest `M >= 1` with `binom(n,r)^{omega(m)} <= m^eps` for every
/// squarefree `m > M`, over `F = Q`.
pub fn stirling_threshold(n: usize, r: usize, eps: Ratio<u64>) -> Result<u64> {
    Ok(enumerate(n, r, eps, None)?.threshold)
}
