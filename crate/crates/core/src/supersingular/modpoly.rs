use std::collections::BTreeMap;
use std::fs;
use std::path::Path;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};

use crate::arith::is_prime;
use crate::error::{Error, Result};
use crate::ffpoly::{FiniteField, Fq};

const BUILTIN: [(u64, &str); 6] = [
    (2, include_str!("../../data/modpoly/phi_2.txt")),
    (3, include_str!("../../data/modpoly/phi_3.txt")),
    (5, include_str!("../../data/modpoly/phi_5.txt")),
    (7, include_str!("../../data/modpoly/phi_7.txt")),
    (11, include_str!("../../data/modpoly/phi_11.txt")),
    (13, include_str!("../../data/modpoly/phi_13.txt")),
];

/// The classical modular polynomial `Phi_l(X, Y)`, stored on pairs `i >= j`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ModularPolynomial {
    level: u64,
    coeffs: BTreeMap<(u32, u32), BigInt>,
}

impl ModularPolynomial {
    /// Parses and validates the text format:
    /// `MODPOLY ell=<l>` followed by `i j c` lines; `#` starts a comment.
    pub fn parse(text: &str) -> Result<Self> {
        let mut level = None;
        let mut entries: BTreeMap<(u32, u32), BigInt> = BTreeMap::new();
        for (idx, raw) in text.lines().enumerate() {
            let line_no = idx + 1;
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let parse_err = |msg: &str| Error::Parse { line: line_no, msg: msg.to_string() };
            let Some(ell) = level else {
                let rest = line.strip_prefix("MODPOLY").ok_or_else(|| parse_err("expected MODPOLY header"))?;
                let value = rest.trim().strip_prefix("ell=").ok_or_else(|| parse_err("expected ell=<level>"))?;
                level = Some(value.trim().parse::<u64>().map_err(|_| parse_err("bad level"))?);
                continue;
            };
            let fields: Vec<&str> = line.split_whitespace().collect();
            let [i, j, c] = fields[..] else {
                return Err(parse_err("expected three fields `i j coefficient`"));
            };
            let i: u32 = i.parse().map_err(|_| parse_err("bad exponent"))?;
            let j: u32 = j.parse().map_err(|_| parse_err("bad exponent"))?;
            let c: BigInt = c.parse().map_err(|_| parse_err("bad coefficient"))?;
            let key = (i.max(j), i.min(j));
            match entries.get(&key) {
                Some(prev) if *prev != c => {
                    return Err(if i < j {
                        Error::Asymmetric { level: ell, i, j }
                    } else {
                        parse_err("conflicting duplicate entry")
                    });
                }
                _ => {
                    entries.insert(key, c);
                }
            }
        }
        let level = level.ok_or(Error::Parse { line: 0, msg: "missing MODPOLY header".into() })?;
        entries.retain(|_, c| !c.is_zero());
        Self::from_entries(level, entries)
    }

    pub fn load(path: &Path) -> Result<Self> {
        Self::parse(&fs::read_to_string(path)?)
    }

    /// Bundled data for `l` in {2, 3, 5, 7, 11, 13}.
    pub fn builtin(level: u64) -> Result<Self> {
        let (_, text) = BUILTIN
            .iter()
            .find(|(l, _)| *l == level)
            .ok_or(Error::MissingModularPolynomial(level))?;
        Self::parse(text)
    }

    /// Validates symmetry, shape and the Kronecker congruence
    /// `Phi_l = (X^l - Y)(X - Y^l) mod l`.
    pub fn from_entries(level: u64, coeffs: BTreeMap<(u32, u32), BigInt>) -> Result<Self> {
        if !is_prime(level) {
            return Err(Error::BadShape { level, msg: "level is not prime".into() });
        }
        let top = level as u32 + 1;
        for &(i, j) in coeffs.keys() {
            if i < j {
                return Err(Error::Asymmetric { level, i, j });
            }
            if i > top {
                return Err(Error::BadShape { level, msg: format!("exponent {i} exceeds {top}") });
            }
        }
        if !coeffs.contains_key(&(top, 0)) {
            return Err(Error::BadShape { level, msg: format!("missing X^{top} term") });
        }
        let l = BigInt::from(level);
        for i in 0..=top {
            for j in 0..=i {
                let expected = if (i, j) == (top, 0) {
                    BigInt::one()
                } else if (i, j) == (level as u32, level as u32) || (i, j) == (1, 1) {
                    -BigInt::one()
                } else {
                    BigInt::zero()
                };
                let c = coeffs.get(&(i, j)).cloned().unwrap_or_default();
                if !(c - expected).is_multiple_of(&l) {
                    return Err(Error::KroneckerViolation { level, i, j });
                }
            }
        }
        Ok(ModularPolynomial { level, coeffs })
    }

    pub fn level(&self) -> u64 {
        self.level
    }

    /// Degree in each variable.
    pub fn degree(&self) -> u32 {
        self.level as u32 + 1
    }

    /// Coefficient of `X^i Y^j`.
    pub fn coeff(&self, i: u32, j: u32) -> BigInt {
        self.coeffs.get(&(i.max(j), i.min(j))).cloned().unwrap_or_default()
    }

    /// Stored entries `(i, j, c)` with `i >= j`.
    pub fn entries(&self) -> impl Iterator<Item = (u32, u32, &BigInt)> {
        self.coeffs.iter().map(|(&(i, j), c)| (i, j, c))
    }

    /// Dense coefficient table `t[i][j]` of `X^i Y^j`, reduced into `field`.
    pub fn reduce(&self, field: &FiniteField) -> Vec<Vec<Fq>> {
        let d = self.degree() as usize + 1;
        let mut t = vec![vec![field.zero(); d]; d];
        for (&(i, j), c) in &self.coeffs {
            let v = field.from_bigint(c);
            t[i as usize][j as usize] = v;
            t[j as usize][i as usize] = v;
        }
        t
    }

    /// Renders the file format accepted by [`ModularPolynomial::parse`].
    pub fn to_text(&self) -> String {
        let mut out = format!("MODPOLY ell={}\n", self.level);
        for (&(i, j), c) in self.coeffs.iter().rev() {
            out.push_str(&format!("{i} {j} {c}\n"));
        }
        out
    }
}

/// Validated modular polynomials keyed by level.
#[derive(Clone, Debug, Default)]
pub struct ModularPolynomialLibrary {
    polys: BTreeMap<u64, ModularPolynomial>,
}

impl ModularPolynomialLibrary {
    pub fn builtin() -> Result<Self> {
        let mut lib = Self::default();
        for (level, _) in BUILTIN {
            lib.insert(ModularPolynomial::builtin(level)?);
        }
        Ok(lib)
    }

    /// Loads every `*.txt` file in `dir`.
    pub fn from_dir(dir: &Path) -> Result<Self> {
        let mut lib = Self::default();
        let mut paths: Vec<_> = fs::read_dir(dir)?
            .filter_map(|e| e.ok().map(|e| e.path()))
            .filter(|p| p.extension().is_some_and(|x| x == "txt"))
            .collect();
        paths.sort();
        for path in paths {
            lib.insert(ModularPolynomial::load(&path)?);
        }
        Ok(lib)
    }

    pub fn insert(&mut self, phi: ModularPolynomial) {
        self.polys.insert(phi.level, phi);
    }

    pub fn get(&self, level: u64) -> Result<&ModularPolynomial> {
        self.polys.get(&level).ok_or(Error::MissingModularPolynomial(level))
    }

    pub fn levels(&self) -> Vec<u64> {
        self.polys.keys().copied().collect()
    }
}
