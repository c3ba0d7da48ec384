//! Arithmetic in `F_p` / `F_{p^2}` and dense univariate polynomials over them.

mod factor;
mod field;
mod poly;

pub use factor::{
    default_seed, distinct_degree_factorize, equal_degree_factorize, equal_degree_factorize_seeded,
    factor_squarefree, is_irreducible, roots_in_field,
};
pub use field::{FiniteField, Fq};
pub use poly::{poly_gcd, poly_powmod, DensePoly};
