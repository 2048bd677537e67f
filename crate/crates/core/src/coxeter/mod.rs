//! Finite Coxeter groups with a weight function.

mod field;
mod group;
mod types;

use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use field::CosineRing;
pub use group::CoxeterGroup;
pub use types::{classify, matrix_for_type_name, CoxeterType};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CoxeterError {
    #[error("invalid Coxeter matrix: {0}")]
    InvalidMatrix(String),
    #[error("Coxeter group is infinite: {0}")]
    InfiniteGroup(String),
    #[error("invalid weights: {0}")]
    InvalidWeights(String),
    #[error("unknown Coxeter type {0:?}")]
    UnknownType(String),
    #[error("group of order {0} is too large to enumerate")]
    TooLarge(u64),
    #[error("invalid element: {0}")]
    InvalidElement(String),
}

/// Opaque index of a group element. Elements are numbered by increasing
/// length, ties broken by the lexicographic order of canonical reduced words,
/// so `Elem(0)` is the identity.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Default, Serialize, Deserialize)]
pub struct Elem(pub u32);

impl Elem {
    pub const IDENTITY: Elem = Elem(0);

    #[inline]
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

impl fmt::Debug for Elem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "#{}", self.0)
    }
}

/// Coxeter matrix plus a positive weight per generator.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CoxeterDatum {
    pub matrix: Vec<Vec<usize>>,
    pub weights: Vec<u32>,
}

impl CoxeterDatum {
    pub fn new(matrix: Vec<Vec<usize>>, weights: Vec<u32>) -> Result<Self, CoxeterError> {
        let datum = Self { matrix, weights };
        datum.validate()?;
        Ok(datum)
    }

    /// Named type (`A3`, `B2`, `I2(5)`, `A1xA2`, ...) with the given weights.
    pub fn from_type(name: &str, weights: Vec<u32>) -> Result<Self, CoxeterError> {
        Self::new(matrix_for_type_name(name)?, weights)
    }

    /// Named type with `L = l`.
    pub fn equal_parameters(name: &str) -> Result<Self, CoxeterError> {
        let matrix = matrix_for_type_name(name)?;
        let rank = matrix.len();
        Self::new(matrix, vec![1; rank])
    }

    pub fn rank(&self) -> usize {
        self.matrix.len()
    }

    pub fn is_equal_parameter(&self) -> bool {
        self.weights.iter().all(|&w| w == 1)
    }

    pub fn validate(&self) -> Result<Vec<CoxeterType>, CoxeterError> {
        let n = self.matrix.len();
        if n == 0 {
            return Err(CoxeterError::InvalidMatrix("rank must be positive".into()));
        }
        if n > 32 {
            return Err(CoxeterError::InvalidMatrix("rank above 32 is not supported".into()));
        }
        for (i, row) in self.matrix.iter().enumerate() {
            if row.len() != n {
                return Err(CoxeterError::InvalidMatrix(format!("row {} has length {}", i + 1, row.len())));
            }
            for (j, &m) in row.iter().enumerate() {
                if m != self.matrix[j][i] {
                    return Err(CoxeterError::InvalidMatrix(format!("not symmetric at ({}, {})", i + 1, j + 1)));
                }
                if i == j && m != 1 {
                    return Err(CoxeterError::InvalidMatrix(format!("diagonal entry {} is {m}", i + 1)));
                }
                if i != j && m < 2 {
                    return Err(CoxeterError::InvalidMatrix(format!("entry ({}, {}) is {m} < 2", i + 1, j + 1)));
                }
            }
        }
        if self.weights.len() != n {
            return Err(CoxeterError::InvalidWeights(format!("expected {n} weights, got {}", self.weights.len())));
        }
        if let Some(i) = self.weights.iter().position(|&w| w == 0) {
            return Err(CoxeterError::InvalidWeights(format!("weight of generator {} must be positive", i + 1)));
        }
        for i in 0..n {
            for j in i + 1..n {
                if self.matrix[i][j] % 2 == 1 && self.weights[i] != self.weights[j] {
                    return Err(CoxeterError::InvalidWeights(format!(
                        "generators {} and {} are conjugate (m = {}) but have weights {} and {}",
                        i + 1,
                        j + 1,
                        self.matrix[i][j],
                        self.weights[i],
                        self.weights[j]
                    )));
                }
            }
        }
        classify(&self.matrix)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn weight_validation() {
        assert!(CoxeterDatum::from_type("B2", vec![2, 1]).is_ok());
        assert!(matches!(CoxeterDatum::from_type("A2", vec![2, 1]), Err(CoxeterError::InvalidWeights(_))));
        assert!(matches!(CoxeterDatum::from_type("A2", vec![1, 0]), Err(CoxeterError::InvalidWeights(_))));
        assert!(matches!(CoxeterDatum::from_type("A2", vec![1]), Err(CoxeterError::InvalidWeights(_))));
        assert!(CoxeterDatum::from_type("B3", vec![2, 2, 3]).is_ok());
        assert!(CoxeterDatum::from_type("B3", vec![2, 1, 3]).is_err());
    }

    #[test]
    fn matrix_validation() {
        let asym = vec![vec![1, 3], vec![4, 1]];
        assert!(matches!(CoxeterDatum::new(asym, vec![1, 1]), Err(CoxeterError::InvalidMatrix(_))));
        let diag = vec![vec![2, 3], vec![3, 1]];
        assert!(matches!(CoxeterDatum::new(diag, vec![1, 1]), Err(CoxeterError::InvalidMatrix(_))));
        let tri = vec![vec![1, 3, 3], vec![3, 1, 3], vec![3, 3, 1]];
        assert!(matches!(CoxeterDatum::new(tri, vec![1, 1, 1]), Err(CoxeterError::InfiniteGroup(_))));
    }
}
