//! Distinct-degree and equal-degree (Cantor-Zassenhaus) factorization, and
//! root finding with multiplicities.

use std::collections::hash_map::DefaultHasher;
use std::hash::{Hash, Hasher};

use num_bigint::BigUint;
use num_traits::One;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::field::{FiniteField, Fq};
use super::poly::{poly_gcd, poly_powmod, DensePoly};
use crate::error::{Error, Result};

const MAX_SPLIT_ATTEMPTS: usize = 128;

fn require_squarefree(f: &DensePoly) -> Result<()> {
    let g = poly_gcd(f, &f.derivative())?;
    if g.degree() == Some(0) {
        Ok(())
    } else {
        Err(Error::NotSquarefree)
    }
}

/// `x^(q^k) mod f` for the field order `q`.
fn frobenius_power(x_q: &DensePoly, f: &DensePoly, q: &BigUint) -> Result<DensePoly> {
    poly_powmod(x_q, q, f)
}

/// Splits a squarefree, nonconstant `f` into `(d, g_d)` where `g_d` is the
/// product of all monic irreducible factors of degree `d`.
pub fn distinct_degree_factorize(f: &DensePoly) -> Result<Vec<(usize, DensePoly)>> {
    let field = f.field();
    let deg = f.degree().ok_or_else(|| Error::InvalidInput("zero polynomial".into()))?;
    if deg == 0 {
        return Err(Error::InvalidInput("constant polynomial".into()));
    }
    let f = f.monic();
    require_squarefree(&f)?;

    let q = field.order_big();
    let x = DensePoly::x(field);
    let mut rest = f;
    let mut h = x.rem(&rest)?;
    let mut out = Vec::new();
    let mut d = 0;
    while let Some(rd) = rest.degree() {
        d += 1;
        if 2 * d > rd {
            if rd > 0 {
                out.push((rd, rest.clone()));
            }
            break;
        }
        h = frobenius_power(&h, &rest, &q)?;
        let g = poly_gcd(&rest, &(&h - &x))?;
        if g.degree() != Some(0) {
            rest = rest.exact_div(&g)?;
            h = h.rem(&rest)?;
            out.push((d, g));
        }
    }
    Ok(out)
}

/// Default Cantor-Zassenhaus seed: a function of the field and the input.
pub fn default_seed(g: &DensePoly) -> u64 {
    let mut hasher = DefaultHasher::new();
    g.field().characteristic().hash(&mut hasher);
    g.field().degree().hash(&mut hasher);
    g.coeffs().hash(&mut hasher);
    hasher.finish()
}

pub fn equal_degree_factorize(g: &DensePoly, d: usize) -> Result<Vec<DensePoly>> {
    equal_degree_factorize_seeded(g, d, default_seed(g))
}

/// Cantor-Zassenhaus splitting of a squarefree monic `g` whose irreducible
/// factors all have degree `d`. Output is sorted.
pub fn equal_degree_factorize_seeded(g: &DensePoly, d: usize, seed: u64) -> Result<Vec<DensePoly>> {
    let field = g.field();
    if field.characteristic() == 2 {
        return Err(Error::UnsupportedCharacteristic(2));
    }
    let deg = g.degree().ok_or_else(|| Error::InvalidInput("zero polynomial".into()))?;
    if d == 0 || deg == 0 || deg % d != 0 {
        return Err(Error::Precondition(format!("degree {deg} is not a positive multiple of {d}")));
    }
    let g = g.monic();
    require_squarefree(&g)?;

    let q = field.order_big();
    let exponent: BigUint = (q.pow(d as u32) - BigUint::one()) >> 1;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut pending = vec![g];
    let mut done = Vec::new();
    while let Some(piece) = pending.pop() {
        let pd = piece.degree().unwrap_or(0);
        if pd == d {
            if !is_irreducible(&piece)? {
                return Err(Error::Precondition(format!("factor of degree {d} is reducible")));
            }
            done.push(piece);
            continue;
        }
        if pd % d != 0 {
            return Err(Error::Precondition(format!("split produced a factor of degree {pd}")));
        }
        let mut split = None;
        for _ in 0..MAX_SPLIT_ATTEMPTS {
            let a = DensePoly::new(field, (0..pd).map(|_| field.random(&mut rng)).collect());
            if a.degree().is_none_or(|k| k == 0) {
                continue;
            }
            let b = poly_powmod(&a, &exponent, &piece)?;
            let h = poly_gcd(&piece, &(&b - &DensePoly::one(field)))?;
            if let Some(hd) = h.degree() {
                if hd > 0 && hd < pd {
                    split = Some(h);
                    break;
                }
            }
        }
        let h = split.ok_or_else(|| Error::Precondition(format!("no split of a degree-{pd} factor")))?;
        let other = piece.exact_div(&h)?.monic();
        pending.push(h);
        pending.push(other);
    }
    done.sort_by(|a, b| a.coeffs().cmp(b.coeffs()));
    Ok(done)
}

/// Rabin's irreducibility test: `x^(q^n) = x mod f` and
/// `gcd(f, x^(q^(n/k)) - x) = 1` for every prime `k | n`.
pub fn is_irreducible(f: &DensePoly) -> Result<bool> {
    let field = f.field();
    let n = match f.degree() {
        None | Some(0) => return Ok(false),
        Some(1) => return Ok(true),
        Some(n) => n,
    };
    let f = f.monic();
    let q = field.order_big();
    let x = DensePoly::x(field);
    let mut powers = Vec::with_capacity(n + 1);
    let mut h = x.rem(&f)?;
    powers.push(h.clone());
    for _ in 0..n {
        h = poly_powmod(&h, &q, &f)?;
        powers.push(h.clone());
    }
    if powers[n] != x.rem(&f)? {
        return Ok(false);
    }
    for (k, _) in crate::arith::factorize(n as u64) {
        let m = n / k as usize;
        if poly_gcd(&f, &(&powers[m] - &x))?.degree() != Some(0) {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Complete factorization of a squarefree polynomial into sorted monic irreducibles.
pub fn factor_squarefree(f: &DensePoly) -> Result<Vec<DensePoly>> {
    let mut out = Vec::new();
    for (d, g) in distinct_degree_factorize(f)? {
        out.extend(equal_degree_factorize(&g, d)?);
    }
    out.sort_by(|a, b| (a.degree(), a.coeffs()).cmp(&(b.degree(), b.coeffs())));
    Ok(out)
}

fn distinct_roots_same_field(f: &DensePoly) -> Result<Vec<Fq>> {
    let field = f.field();
    let x = DensePoly::x(field);
    let xq = poly_powmod(&x, &field.order_big(), f)?;
    let g = poly_gcd(f, &(&xq - &x))?;
    linear_factor_roots(&g)
}

fn linear_factor_roots(g: &DensePoly) -> Result<Vec<Fq>> {
    let field = g.field();
    match g.degree() {
        None | Some(0) => Ok(Vec::new()),
        _ => Ok(equal_degree_factorize(g, 1)?.iter().map(|l| field.neg(l.coeff(0))).collect()),
    }
}

// f over F_p, roots wanted in F_{p^2}: split off the linear and quadratic
// irreducible factors over F_p and solve the quadratics directly.
fn distinct_roots_prime_to_quadratic(f: &DensePoly, target: FiniteField) -> Result<Vec<Fq>> {
    let base = f.field();
    let p = BigUint::from(base.characteristic());
    let x = DensePoly::x(base);
    let h1 = poly_powmod(&x, &p, f)?;
    let g1 = poly_gcd(f, &(&h1 - &x))?;
    let h2 = poly_powmod(&h1, &p, f)?;
    let g12 = poly_gcd(f, &(&h2 - &x))?;
    let g2 = g12.exact_div(&g1)?;
    let mut roots = linear_factor_roots(&g1)?;
    if g2.degree().is_some_and(|d| d > 0) {
        let two_inv = target.inv(target.from_u64(2))?;
        for quad in equal_degree_factorize(&g2, 2)? {
            let (c, b) = (quad.coeff(0), quad.coeff(1));
            let disc = target.sub(target.square(b), target.scale(c, 4));
            let s = target.sqrt_base(disc).expect("F_{p^2} contains square roots of F_p");
            let nb = target.neg(b);
            roots.push(target.mul(target.add(nb, s), two_inv));
            roots.push(target.mul(target.sub(nb, s), two_inv));
        }
    }
    Ok(roots)
}

/// All roots of `f` in `target`, with multiplicity, sorted.
pub fn roots_in_field(f: &DensePoly, target: FiniteField) -> Result<Vec<Fq>> {
    let src = f.field();
    if src.characteristic() != target.characteristic() {
        return Err(Error::FieldMismatch);
    }
    let deg = f.degree().ok_or_else(|| Error::InvalidInput("zero polynomial".into()))?;
    if deg == 0 {
        return Ok(Vec::new());
    }
    let f = f.monic();
    let distinct: Vec<Fq> = match (src.degree(), target.degree()) {
        (a, b) if a == b => distinct_roots_same_field(&f)?,
        (1, 2) => distinct_roots_prime_to_quadratic(&f, target)?,
        _ => distinct_roots_same_field(&f)?.into_iter().filter(|r| r.in_prime_field()).collect(),
    };
    let work_field = if target.degree() >= src.degree() { target } else { src };
    let lifted = f.lift(work_field)?;
    let mut out = Vec::new();
    for r in distinct {
        let mut cur = lifted.clone();
        loop {
            let (q, rem) = cur.div_linear(r);
            if !rem.is_zero() {
                break;
            }
            out.push(r);
            cur = q;
        }
    }
    out.sort();
    Ok(out)
}
