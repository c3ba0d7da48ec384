use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigUint;

use super::field::{FiniteField, Fq};
use crate::error::{Error, Result};

/// Dense univariate polynomial over `F_p` or `F_{p^2}`, coefficients in
/// ascending degree. The zero polynomial has no coefficients.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct DensePoly {
    field: FiniteField,
    coeffs: Vec<Fq>,
}

impl DensePoly {
    pub fn new(field: FiniteField, mut coeffs: Vec<Fq>) -> Self {
        debug_assert!(coeffs.iter().all(|&c| field.contains(c)));
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        DensePoly { field, coeffs }
    }

    pub fn from_u64s(field: FiniteField, coeffs: &[u64]) -> Self {
        Self::new(field, coeffs.iter().map(|&c| field.from_u64(c)).collect())
    }

    pub fn from_i64s(field: FiniteField, coeffs: &[i64]) -> Self {
        Self::new(field, coeffs.iter().map(|&c| field.from_i64(c)).collect())
    }

    pub fn zero(field: FiniteField) -> Self {
        DensePoly { field, coeffs: Vec::new() }
    }

    pub fn one(field: FiniteField) -> Self {
        Self::constant(field, field.one())
    }

    pub fn constant(field: FiniteField, c: Fq) -> Self {
        Self::new(field, vec![c])
    }

    /// The polynomial `x`.
    pub fn x(field: FiniteField) -> Self {
        Self::new(field, vec![field.zero(), field.one()])
    }

    /// `x - r`.
    pub fn linear(field: FiniteField, r: Fq) -> Self {
        Self::new(field, vec![field.neg(r), field.one()])
    }

    pub fn field(&self) -> FiniteField {
        self.field
    }

    pub fn coeffs(&self) -> &[Fq] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize) -> Fq {
        self.coeffs.get(i).copied().unwrap_or(Fq::ZERO)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn leading(&self) -> Option<Fq> {
        self.coeffs.last().copied()
    }

    pub fn is_monic(&self) -> bool {
        self.leading() == Some(self.field.one())
    }

    pub fn monic(&self) -> Self {
        match self.leading() {
            None => self.clone(),
            Some(lc) => {
                let inv = self.field.inv(lc).expect("leading coefficient is nonzero");
                self.scale(inv)
            }
        }
    }

    pub fn scale(&self, c: Fq) -> Self {
        let f = self.field;
        Self::new(f, self.coeffs.iter().map(|&a| f.mul(a, c)).collect())
    }

    /// Same coordinates viewed in another field of the same characteristic
    /// that contains this one.
    pub fn lift(&self, target: FiniteField) -> Result<Self> {
        if target.characteristic() != self.field.characteristic() {
            return Err(Error::FieldMismatch);
        }
        if target.degree() < self.field.degree() && self.coeffs.iter().any(|c| !c.in_prime_field()) {
            return Err(Error::FieldMismatch);
        }
        Ok(DensePoly { field: target, coeffs: self.coeffs.clone() })
    }

    pub fn eval(&self, x: Fq) -> Fq {
        let f = self.field;
        self.coeffs.iter().rev().fold(f.zero(), |acc, &c| f.add(f.mul(acc, x), c))
    }

    pub fn derivative(&self) -> Self {
        let f = self.field;
        let coeffs = self.coeffs.iter().enumerate().skip(1).map(|(i, &c)| f.scale(c, i as u64)).collect();
        Self::new(f, coeffs)
    }

    fn check_same_field(&self, other: &Self) -> Result<()> {
        if self.field == other.field {
            Ok(())
        } else {
            Err(Error::FieldMismatch)
        }
    }

    pub fn div_rem(&self, divisor: &Self) -> Result<(Self, Self)> {
        self.check_same_field(divisor)?;
        let f = self.field;
        let dg = divisor.degree().ok_or(Error::DivisionByZero)?;
        if self.coeffs.len() <= dg {
            return Ok((Self::zero(f), self.clone()));
        }
        let lc_inv = f.inv(divisor.coeffs[dg])?;
        let mut rem = self.coeffs.clone();
        let mut quot = vec![Fq::ZERO; self.coeffs.len() - dg];
        for i in (dg..rem.len()).rev() {
            let c = f.mul(rem[i], lc_inv);
            quot[i - dg] = c;
            if c.is_zero() {
                continue;
            }
            for (k, &g) in divisor.coeffs.iter().enumerate() {
                let idx = i - dg + k;
                rem[idx] = f.sub(rem[idx], f.mul(c, g));
            }
        }
        rem.truncate(dg);
        Ok((Self::new(f, quot), Self::new(f, rem)))
    }

    pub fn rem(&self, modulus: &Self) -> Result<Self> {
        self.check_same_field(modulus)?;
        if modulus.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(Self::new(self.field, rem_coeffs(self.field, &self.coeffs, &modulus.coeffs)))
    }

    /// Exact quotient; errors if `divisor` does not divide `self`.
    pub fn exact_div(&self, divisor: &Self) -> Result<Self> {
        let (q, r) = self.div_rem(divisor)?;
        if !r.is_zero() {
            return Err(Error::Precondition("inexact polynomial division".into()));
        }
        Ok(q)
    }

    pub fn mul_mod(&self, other: &Self, modulus: &Self) -> Result<Self> {
        (self * other).rem(modulus)
    }

    /// Division by `x - r`: quotient and remainder `f(r)`.
    pub fn div_linear(&self, r: Fq) -> (Self, Fq) {
        let f = self.field;
        if self.coeffs.is_empty() {
            return (self.clone(), Fq::ZERO);
        }
        let mut quot = vec![Fq::ZERO; self.coeffs.len() - 1];
        let mut carry = Fq::ZERO;
        for i in (0..self.coeffs.len()).rev() {
            let v = f.add(self.coeffs[i], f.mul(carry, r));
            if i == 0 {
                return (Self::new(f, quot), v);
            }
            quot[i - 1] = v;
            carry = v;
        }
        unreachable!()
    }
}

/// Monic greatest common divisor; `gcd(0, 0) = 0`.
pub fn poly_gcd(a: &DensePoly, b: &DensePoly) -> Result<DensePoly> {
    a.check_same_field(b)?;
    let (mut a, mut b) = (a.clone(), b.clone());
    while !b.is_zero() {
        let r = a.rem(&b)?;
        a = b;
        b = r;
    }
    Ok(a.monic())
}

/// `base^exponent mod modulus` by left-to-right square-and-multiply.
pub fn poly_powmod(base: &DensePoly, exponent: &BigUint, modulus: &DensePoly) -> Result<DensePoly> {
    base.check_same_field(modulus)?;
    if modulus.is_zero() {
        return Err(Error::DivisionByZero);
    }
    let f = base.field;
    let base = base.rem(modulus)?;
    let mut acc = DensePoly::one(f).rem(modulus)?;
    for i in (0..exponent.bits()).rev() {
        acc = acc.mul_mod(&acc, modulus)?;
        if exponent.bit(i) {
            acc = acc.mul_mod(&base, modulus)?;
        }
    }
    Ok(acc)
}

// Convolution with delayed reduction: products are summed in u128 and reduced
// once per output coefficient whenever the sum cannot overflow.
fn mul_coeffs(f: FiniteField, a: &[Fq], b: &[Fq]) -> Vec<Fq> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let n = a.len() + b.len() - 1;
    let p = f.characteristic();
    let bound = (p - 1) as u128 * (p - 1) as u128;
    let terms = 2 * a.len().min(b.len()) as u128 + 1;
    let lazy = bound == 0 || terms <= u128::MAX / bound;
    let mut out = Vec::with_capacity(n);
    for k in 0..n {
        let lo = k.saturating_sub(b.len() - 1);
        let hi = k.min(a.len() - 1);
        if !lazy {
            let mut acc = Fq::ZERO;
            for i in lo..=hi {
                acc = f.add(acc, f.mul(a[i], b[k - i]));
            }
            out.push(acc);
            continue;
        }
        if f.degree() == 1 {
            let mut acc = 0u128;
            for i in lo..=hi {
                acc += a[i].re as u128 * b[k - i].re as u128;
            }
            out.push(Fq { re: f.reduce_wide(acc), im: 0 });
        } else {
            let (mut ac, mut bd, mut im) = (0u128, 0u128, 0u128);
            for i in lo..=hi {
                let (x, y) = (a[i], b[k - i]);
                ac += x.re as u128 * y.re as u128;
                bd += x.im as u128 * y.im as u128;
                im += x.re as u128 * y.im as u128 + x.im as u128 * y.re as u128;
            }
            let bd = f.mulp(f.reduce_wide(bd), f.nonresidue());
            out.push(Fq { re: f.addp(f.reduce_wide(ac), bd), im: f.reduce_wide(im) });
        }
    }
    out
}

// Remainder with delayed reduction of the running remainder.
fn rem_coeffs(f: FiniteField, a: &[Fq], g: &[Fq]) -> Vec<Fq> {
    let dg = g.len() - 1;
    if a.len() <= dg {
        return a.to_vec();
    }
    let lc_inv = f.inv(g[dg]).expect("nonzero modulus");
    let p = f.characteristic();
    let bound = (p - 1) as u128 * (p - 1) as u128;
    let lazy = bound == 0 || (2 * a.len() as u128 + 1) <= u128::MAX / bound;
    if !lazy {
        let mut rem = a.to_vec();
        for i in (dg..rem.len()).rev() {
            let c = f.mul(rem[i], lc_inv);
            if c.is_zero() {
                continue;
            }
            for (k, &gk) in g.iter().enumerate() {
                let idx = i - dg + k;
                rem[idx] = f.sub(rem[idx], f.mul(c, gk));
            }
        }
        rem.truncate(dg);
        return rem;
    }
    let mut re: Vec<u128> = a.iter().map(|c| c.re as u128).collect();
    let mut im: Vec<u128> = a.iter().map(|c| c.im as u128).collect();
    let quadratic = f.degree() == 2;
    for i in (dg..a.len()).rev() {
        let top = Fq { re: f.reduce_wide(re[i]), im: f.reduce_wide(im[i]) };
        let c = f.neg(f.mul(top, lc_inv));
        if c.is_zero() {
            continue;
        }
        let base = i - dg;
        if quadratic {
            let ns_im = f.mulp(c.im, f.nonresidue()) as u128;
            let (cre, cim) = (c.re as u128, c.im as u128);
            for (k, gk) in g[..dg].iter().enumerate() {
                re[base + k] += cre * gk.re as u128 + ns_im * gk.im as u128;
                im[base + k] += cre * gk.im as u128 + cim * gk.re as u128;
            }
        } else {
            let cre = c.re as u128;
            for (k, gk) in g[..dg].iter().enumerate() {
                re[base + k] += cre * gk.re as u128;
            }
        }
    }
    (0..dg).map(|k| Fq { re: f.reduce_wide(re[k]), im: f.reduce_wide(im[k]) }).collect()
}

impl Add for &DensePoly {
    type Output = DensePoly;
    fn add(self, rhs: &DensePoly) -> DensePoly {
        assert_eq!(self.field, rhs.field, "field mismatch");
        let f = self.field;
        let n = self.coeffs.len().max(rhs.coeffs.len());
        DensePoly::new(f, (0..n).map(|i| f.add(self.coeff(i), rhs.coeff(i))).collect())
    }
}

impl Sub for &DensePoly {
    type Output = DensePoly;
    fn sub(self, rhs: &DensePoly) -> DensePoly {
        assert_eq!(self.field, rhs.field, "field mismatch");
        let f = self.field;
        let n = self.coeffs.len().max(rhs.coeffs.len());
        DensePoly::new(f, (0..n).map(|i| f.sub(self.coeff(i), rhs.coeff(i))).collect())
    }
}

impl Mul for &DensePoly {
    type Output = DensePoly;
    fn mul(self, rhs: &DensePoly) -> DensePoly {
        assert_eq!(self.field, rhs.field, "field mismatch");
        DensePoly::new(self.field, mul_coeffs(self.field, &self.coeffs, &rhs.coeffs))
    }
}

impl Neg for &DensePoly {
    type Output = DensePoly;
    fn neg(self) -> DensePoly {
        let f = self.field;
        DensePoly::new(f, self.coeffs.iter().map(|&c| f.neg(c)).collect())
    }
}

impl fmt::Display for DensePoly {
    fn fmt(&self, out: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(out, "0");
        }
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            if !first {
                write!(out, " + ")?;
            }
            first = false;
            let coeff = if c.im != 0 { format!("({c})") } else { c.to_string() };
            match i {
                0 => write!(out, "{coeff}")?,
                1 if c.re == 1 && c.im == 0 => write!(out, "x")?,
                1 => write!(out, "{coeff}x")?,
                _ if c.re == 1 && c.im == 0 => write!(out, "x^{i}")?,
                _ => write!(out, "{coeff}x^{i}")?,
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn fp(p: u64) -> FiniteField {
        FiniteField::prime(p).unwrap()
    }

    #[test]
    fn gcd_examples() {
        let f5 = fp(5);
        let a = DensePoly::from_i64s(f5, &[-1, 0, 1]);
        let b = DensePoly::from_i64s(f5, &[1, 2, 1]);
        assert_eq!(poly_gcd(&a, &b).unwrap(), DensePoly::from_i64s(f5, &[1, 1]));

        let g = DensePoly::from_i64s(f5, &[3, 0, 2]);
        assert_eq!(poly_gcd(&g, &DensePoly::zero(f5)).unwrap(), g.monic());
        assert!(poly_gcd(&DensePoly::zero(f5), &DensePoly::zero(f5)).unwrap().is_zero());

        let f11 = fp(11);
        let a = DensePoly::from_i64s(f11, &[-5, 0, 1]);
        let b = DensePoly::from_i64s(f11, &[-4, 1]);
        let g = poly_gcd(&a, &b).unwrap();
        assert_eq!(g, DensePoly::from_i64s(f11, &[7, 1]));
        assert!(g.eval(f11.from_u64(4)).is_zero());
    }

    #[test]
    fn gcd_field_mismatch() {
        let a = DensePoly::x(fp(5));
        let b = DensePoly::x(fp(7));
        assert_eq!(poly_gcd(&a, &b), Err(Error::FieldMismatch));
    }

    #[test]
    fn powmod_examples() {
        let f3 = fp(3);
        let x = DensePoly::x(f3);
        let m = DensePoly::from_i64s(f3, &[1, 0, 1]);
        assert_eq!(poly_powmod(&x, &BigUint::from(0u32), &m).unwrap(), DensePoly::one(f3));
        assert_eq!(poly_powmod(&x, &BigUint::from(3u32), &m).unwrap(), DensePoly::from_i64s(f3, &[0, 2]));
        assert_eq!(poly_powmod(&x, &BigUint::from(3u32), &DensePoly::zero(f3)), Err(Error::DivisionByZero));
    }

    #[test]
    fn frobenius_order_two_on_irreducible_quadratic() {
        // x^2 - 2 is irreducible over F_11 (2 is a non-residue)
        let f = fp(11);
        let m = DensePoly::from_i64s(f, &[-2, 0, 1]);
        let x = DensePoly::x(f);
        let frob = poly_powmod(&x, &BigUint::from(11u32), &m).unwrap();
        assert_ne!(frob, x);
        assert_eq!(frob, DensePoly::from_i64s(f, &[0, -1]));
        assert_eq!(poly_powmod(&x, &BigUint::from(121u32), &m).unwrap(), x);
    }

    #[test]
    fn lazy_and_eager_remainders_agree() {
        // large characteristic forces the eager path
        let big = fp((1 << 61) - 1);
        let small = fp(1009);
        for f in [big, small, FiniteField::quadratic(1009).unwrap(), FiniteField::quadratic((1 << 61) - 1).unwrap()] {
            let mut rng = rand::thread_rng();
            let a = DensePoly::new(f, (0..40).map(|_| f.random(&mut rng)).collect());
            let g = DensePoly::new(f, (0..9).map(|_| f.random(&mut rng)).collect());
            let (q, r) = a.div_rem(&g).unwrap();
            assert_eq!(&(&q * &g) + &r, a);
            assert_eq!(a.rem(&g).unwrap(), r);
        }
    }

    #[test]
    fn div_linear_is_synthetic_division() {
        let f = fp(7);
        let a = DensePoly::from_i64s(f, &[3, 1, 4, 1, 5]);
        let r = f.from_u64(2);
        let (q, rem) = a.div_linear(r);
        assert_eq!(rem, a.eval(r));
        assert_eq!(&(&q * &DensePoly::linear(f, r)) + &DensePoly::constant(f, rem), a);
    }

    #[test]
    fn display() {
        let f = fp(7);
        assert_eq!(DensePoly::from_i64s(f, &[1, 0, 3, 1]).to_string(), "x^3 + 3x^2 + 1");
    }
}
