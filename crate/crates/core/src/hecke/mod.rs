//! The Hecke algebra over `Z[v, v^-1]` with standard basis `T_x`, the
//! canonical basis `c_x`, its twisted version `c_x^#`, and structure constants.
//!
//! Quadratic relation: `T_s^2 = T_e + (v^L(s) - v^-L(s)) T_s`, so that
//! `c_s = T_s + v^-L(s) T_e`.

mod algebra;
mod element;
mod kl;
mod structure;

use thiserror::Error;

use crate::coxeter::Elem;
use crate::laurent::Laurent;

pub use algebra::{bar_table, HeckeAlgebra};
pub use element::{Basis, HeckeElement};
pub use kl::{default_kl_strategy, kl_strategies, kl_strategy, IntervalBarSolve, KlStrategy, KlTable, RecursiveStep};
pub use structure::StructureTable;

/// Sparse coordinates sorted by element.
pub type Row = Vec<(Elem, Laurent)>;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum HeckeError {
    #[error("basis mismatch: expected {expected}, found {found}")]
    BasisMismatch { expected: Basis, found: Basis },
}
