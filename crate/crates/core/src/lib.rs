//! Hecke operators on the supersingular locus of the level-one modular curve,
//! their equidistribution rate, and the exact Satake-transform bookkeeping
//! for minuscule operators on `GL_n` over totally real fields.

pub mod arith;
pub mod equidist;
pub mod error;
pub mod ffpoly;
pub mod number_field;
pub mod satake;
pub mod supersingular;

pub use error::{Error, Result};
