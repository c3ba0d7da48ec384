use std::fmt;

use num_bigint::{BigInt, BigUint};
use num_traits::Zero;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::arith::{is_prime, pow_mod};
use crate::error::{Error, Result};

const MAX_CHARACTERISTIC: u64 = 1 << 62;

/// An element `re + im * t` of `F_p` (where `im == 0`) or of
/// `F_{p^2} = F_p[t] / (t^2 - ns)`. Coordinates are always canonical in `[0, p)`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Fq {
    pub re: u64,
    pub im: u64,
}

impl Fq {
    pub const ZERO: Fq = Fq { re: 0, im: 0 };

    pub fn is_zero(&self) -> bool {
        self.re == 0 && self.im == 0
    }

    pub fn in_prime_field(&self) -> bool {
        self.im == 0
    }
}

impl fmt::Display for Fq {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match (self.re, self.im) {
            (a, 0) => write!(f, "{a}"),
            (0, b) => write!(f, "{b}t"),
            (a, b) => write!(f, "{a}+{b}t"),
        }
    }
}

/// `F_p` or `F_{p^2}` with the deterministic basis `t^2 = ns`, `ns` the smallest
/// quadratic non-residue mod `p`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct FiniteField {
    p: u64,
    degree: u8,
    ns: u64,
    // Montgomery constants (odd p only): -p^{-1} mod 2^64 and 2^128 mod p.
    mont_neg_inv: u64,
    mont_r2: u64,
}

impl FiniteField {
    /// The prime field `F_p`. `p = 2` is allowed here (degree bookkeeping only).
    pub fn prime(p: u64) -> Result<Self> {
        if p >= MAX_CHARACTERISTIC || !is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        Ok(Self::build(p, 1, 0))
    }

    /// `F_{p^2}` for odd `p`.
    pub fn quadratic(p: u64) -> Result<Self> {
        if p >= MAX_CHARACTERISTIC || !is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        if p == 2 {
            return Err(Error::UnsupportedCharacteristic(2));
        }
        let ns = smallest_nonresidue(p);
        Ok(Self::build(p, 2, ns))
    }

    pub fn with_degree(p: u64, degree: u8) -> Result<Self> {
        match degree {
            1 => Self::prime(p),
            2 => Self::quadratic(p),
            _ => Err(Error::InvalidInput(format!("extension degree {degree} not supported"))),
        }
    }

    fn build(p: u64, degree: u8, ns: u64) -> Self {
        let (mont_neg_inv, mont_r2) = if p % 2 == 1 {
            let mut inv = p;
            for _ in 0..6 {
                inv = inv.wrapping_mul(2u64.wrapping_sub(p.wrapping_mul(inv)));
            }
            let r = ((1u128 << 64) % p as u128) as u64;
            (inv.wrapping_neg(), ((r as u128 * r as u128) % p as u128) as u64)
        } else {
            (0, 0)
        };
        FiniteField { p, degree, ns, mont_neg_inv, mont_r2 }
    }

    pub fn characteristic(&self) -> u64 {
        self.p
    }

    pub fn degree(&self) -> u8 {
        self.degree
    }

    /// The non-residue `ns` with `t^2 = ns`; 0 for prime fields.
    pub fn nonresidue(&self) -> u64 {
        self.ns
    }

    pub fn order(&self) -> u128 {
        (self.p as u128).pow(self.degree as u32)
    }

    pub fn order_big(&self) -> BigUint {
        BigUint::from(self.p).pow(self.degree as u32)
    }

    /// The prime subfield.
    pub fn base(&self) -> FiniteField {
        Self::build(self.p, 1, 0)
    }

    /// `F_{p^2}` over the same characteristic.
    pub fn quadratic_extension(&self) -> Result<FiniteField> {
        Self::quadratic(self.p)
    }

    pub fn contains(&self, x: Fq) -> bool {
        x.re < self.p && x.im < self.p && (self.degree == 2 || x.im == 0)
    }

    pub fn zero(&self) -> Fq {
        Fq::ZERO
    }

    pub fn one(&self) -> Fq {
        Fq { re: 1 % self.p, im: 0 }
    }

    /// The generator `t` of `F_{p^2}`.
    pub fn gen(&self) -> Fq {
        debug_assert_eq!(self.degree, 2);
        Fq { re: 0, im: 1 }
    }

    pub fn elem(&self, re: u64, im: u64) -> Fq {
        debug_assert!(self.degree == 2 || im.is_multiple_of(self.p));
        Fq { re: re % self.p, im: im % self.p }
    }

    pub fn from_u64(&self, a: u64) -> Fq {
        Fq { re: a % self.p, im: 0 }
    }

    pub fn from_i64(&self, a: i64) -> Fq {
        Fq { re: a.rem_euclid(self.p as i64) as u64, im: 0 }
    }

    pub fn from_bigint(&self, a: &BigInt) -> Fq {
        let r = a.mod_floor_u64(self.p);
        Fq { re: r, im: 0 }
    }

    #[inline]
    pub(crate) fn redc(&self, t: u128) -> u64 {
        let m = (t as u64).wrapping_mul(self.mont_neg_inv);
        let u = ((t + m as u128 * self.p as u128) >> 64) as u64;
        if u >= self.p {
            u - self.p
        } else {
            u
        }
    }

    /// Product of two canonical residues mod `p`.
    #[inline]
    pub(crate) fn mulp(&self, a: u64, b: u64) -> u64 {
        if self.mont_neg_inv == 0 {
            return ((a as u128 * b as u128) % self.p as u128) as u64;
        }
        let t = self.redc(a as u128 * b as u128);
        self.redc(t as u128 * self.mont_r2 as u128)
    }

    #[inline]
    pub(crate) fn addp(&self, a: u64, b: u64) -> u64 {
        let s = a + b;
        if s >= self.p {
            s - self.p
        } else {
            s
        }
    }

    #[inline]
    pub(crate) fn subp(&self, a: u64, b: u64) -> u64 {
        if a >= b {
            a - b
        } else {
            a + self.p - b
        }
    }

    #[inline]
    pub(crate) fn reduce_wide(&self, x: u128) -> u64 {
        (x % self.p as u128) as u64
    }

    #[inline]
    pub fn add(&self, x: Fq, y: Fq) -> Fq {
        Fq { re: self.addp(x.re, y.re), im: self.addp(x.im, y.im) }
    }

    #[inline]
    pub fn sub(&self, x: Fq, y: Fq) -> Fq {
        Fq { re: self.subp(x.re, y.re), im: self.subp(x.im, y.im) }
    }

    #[inline]
    pub fn neg(&self, x: Fq) -> Fq {
        self.sub(Fq::ZERO, x)
    }

    #[inline]
    pub fn mul(&self, x: Fq, y: Fq) -> Fq {
        if self.degree == 1 {
            return Fq { re: self.mulp(x.re, y.re), im: 0 };
        }
        let ac = self.mulp(x.re, y.re);
        let bd = self.mulp(x.im, y.im);
        let ad = self.mulp(x.re, y.im);
        let bc = self.mulp(x.im, y.re);
        Fq { re: self.addp(ac, self.mulp(self.ns, bd)), im: self.addp(ad, bc) }
    }

    pub fn square(&self, x: Fq) -> Fq {
        self.mul(x, x)
    }

    pub fn scale(&self, x: Fq, k: u64) -> Fq {
        let k = k % self.p;
        Fq { re: self.mulp(x.re, k), im: self.mulp(x.im, k) }
    }

    pub fn pow(&self, x: Fq, exp: &BigUint) -> Fq {
        let mut acc = self.one();
        for i in (0..exp.bits()).rev() {
            acc = self.square(acc);
            if exp.bit(i) {
                acc = self.mul(acc, x);
            }
        }
        acc
    }

    pub fn pow_u128(&self, x: Fq, mut exp: u128) -> Fq {
        let mut acc = self.one();
        let mut base = x;
        while exp > 0 {
            if exp & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.square(base);
            exp >>= 1;
        }
        acc
    }

    /// `x^p`, i.e. conjugation `a + bt -> a - bt` on `F_{p^2}`.
    pub fn frobenius(&self, x: Fq) -> Fq {
        Fq { re: x.re, im: self.subp(0, x.im) }
    }

    /// Norm to `F_p`: `a^2 - ns b^2`.
    pub fn norm(&self, x: Fq) -> u64 {
        self.subp(self.mulp(x.re, x.re), self.mulp(self.ns, self.mulp(x.im, x.im)))
    }

    pub fn inv(&self, x: Fq) -> Result<Fq> {
        if x.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let n = if self.degree == 1 { x.re } else { self.norm(x) };
        let n_inv = pow_mod(n, self.p - 2, self.p);
        if self.degree == 1 {
            Ok(Fq { re: n_inv, im: 0 })
        } else {
            let c = self.frobenius(x);
            Ok(Fq { re: self.mulp(c.re, n_inv), im: self.mulp(c.im, n_inv) })
        }
    }

    pub fn div(&self, x: Fq, y: Fq) -> Result<Fq> {
        Ok(self.mul(x, self.inv(y)?))
    }

    /// Legendre symbol of a prime-field scalar: 0, 1 or -1.
    pub fn legendre(&self, a: u64) -> i8 {
        let a = a % self.p;
        if a == 0 {
            0
        } else if self.p == 2 || pow_mod(a, (self.p - 1) / 2, self.p) == 1 {
            1
        } else {
            -1
        }
    }

    /// Square root in this field of an element of the prime subfield.
    /// Over `F_p` this is `None` for non-residues; over `F_{p^2}` every
    /// prime-field element has a root.
    pub fn sqrt_base(&self, x: Fq) -> Option<Fq> {
        debug_assert!(x.in_prime_field());
        if x.re == 0 {
            return Some(Fq::ZERO);
        }
        if self.legendre(x.re) == 1 {
            return Some(Fq { re: tonelli_shanks(x.re, self.p), im: 0 });
        }
        if self.degree == 1 {
            return None;
        }
        // x = ns * y with y a residue; sqrt(x) = sqrt(y) * t
        let ns_inv = pow_mod(self.ns, self.p - 2, self.p);
        let y = self.mulp(x.re, ns_inv);
        Some(Fq { re: 0, im: tonelli_shanks(y, self.p) })
    }

    pub fn random<R: Rng + ?Sized>(&self, rng: &mut R) -> Fq {
        let re = rng.gen_range(0..self.p);
        let im = if self.degree == 2 { rng.gen_range(0..self.p) } else { 0 };
        Fq { re, im }
    }
}

fn smallest_nonresidue(p: u64) -> u64 {
    (2..p).find(|&a| pow_mod(a, (p - 1) / 2, p) == p - 1).expect("odd prime has a non-residue")
}

fn tonelli_shanks(a: u64, p: u64) -> u64 {
    use crate::arith::mul_mod;
    if p == 2 {
        return a % 2;
    }
    let mut q = p - 1;
    let mut s = 0;
    while q.is_multiple_of(2) {
        q /= 2;
        s += 1;
    }
    let z = smallest_nonresidue(p);
    let mut m = s;
    let mut c = pow_mod(z, q, p);
    let mut t = pow_mod(a, q, p);
    let mut r = pow_mod(a, q.div_ceil(2), p);
    while t != 1 {
        let mut i = 0;
        let mut tt = t;
        while tt != 1 {
            tt = mul_mod(tt, tt, p);
            i += 1;
        }
        let b = pow_mod(c, 1 << (m - i - 1), p);
        m = i;
        c = mul_mod(b, b, p);
        t = mul_mod(t, c, p);
        r = mul_mod(r, b, p);
    }
    r
}

trait ModFloorU64 {
    fn mod_floor_u64(&self, m: u64) -> u64;
}

impl ModFloorU64 for BigInt {
    fn mod_floor_u64(&self, m: u64) -> u64 {
        let mb = BigInt::from(m);
        let mut r = self % &mb;
        if r < BigInt::zero() {
            r += &mb;
        }
        let (_, digits) = r.to_u64_digits();
        digits.first().copied().unwrap_or(0)
    }
}
