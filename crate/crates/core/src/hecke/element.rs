use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use super::HeckeError;
use crate::coxeter::Elem;
use crate::laurent::Laurent;

/// Which basis the coordinates of a [`HeckeElement`] refer to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Basis {
    /// Standard basis `T_x`.
    T,
    /// Canonical basis `c_x`.
    C,
    /// Twisted canonical basis `c_x^#`, the image of `c_x` under the sign automorphism.
    CSharp,
}

impl fmt::Display for Basis {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Basis::T => "T",
            Basis::C => "c",
            Basis::CSharp => "c#",
        })
    }
}

/// Element of the Hecke algebra as coordinates in one tagged basis.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HeckeElement {
    basis: Basis,
    coords: BTreeMap<Elem, Laurent>,
}

impl HeckeElement {
    pub fn zero(basis: Basis) -> Self {
        Self { basis, coords: BTreeMap::new() }
    }

    pub fn basis_element(basis: Basis, x: Elem) -> Self {
        Self::monomial(basis, x, Laurent::one())
    }

    pub fn monomial(basis: Basis, x: Elem, coeff: Laurent) -> Self {
        let mut h = Self::zero(basis);
        h.add_term(x, &coeff);
        h
    }

    pub fn from_terms<I: IntoIterator<Item = (Elem, Laurent)>>(basis: Basis, terms: I) -> Self {
        let mut h = Self::zero(basis);
        for (x, c) in terms {
            h.add_term(x, &c);
        }
        h
    }

    /// Builds from a dense coordinate vector indexed by element.
    pub fn from_dense(basis: Basis, dense: Vec<Laurent>) -> Self {
        let coords =
            dense.into_iter().enumerate().filter(|(_, c)| !c.is_zero()).map(|(i, c)| (Elem(i as u32), c)).collect();
        Self { basis, coords }
    }

    pub fn to_dense(&self, n: usize) -> Vec<Laurent> {
        let mut out = vec![Laurent::zero(); n];
        for (x, c) in &self.coords {
            out[x.index()] = c.clone();
        }
        out
    }

    pub fn basis(&self) -> Basis {
        self.basis
    }

    pub fn coeff(&self, x: Elem) -> Laurent {
        self.coords.get(&x).cloned().unwrap_or_default()
    }

    pub fn coords(&self) -> &BTreeMap<Elem, Laurent> {
        &self.coords
    }

    pub fn terms(&self) -> impl Iterator<Item = (Elem, &Laurent)> {
        self.coords.iter().map(|(&x, c)| (x, c))
    }

    pub fn support(&self) -> impl Iterator<Item = Elem> + '_ {
        self.coords.keys().copied()
    }

    pub fn is_zero(&self) -> bool {
        self.coords.is_empty()
    }

    pub fn add_term(&mut self, x: Elem, c: &Laurent) {
        if c.is_zero() {
            return;
        }
        let slot = self.coords.entry(x).or_default();
        *slot += c;
        if slot.is_zero() {
            self.coords.remove(&x);
        }
    }

    pub fn expect_basis(&self, basis: Basis) -> Result<(), HeckeError> {
        if self.basis == basis {
            Ok(())
        } else {
            Err(HeckeError::BasisMismatch { expected: basis, found: self.basis })
        }
    }

    pub fn try_add(&self, other: &HeckeElement) -> Result<HeckeElement, HeckeError> {
        other.expect_basis(self.basis)?;
        let mut out = self.clone();
        for (x, c) in other.terms() {
            out.add_term(x, c);
        }
        Ok(out)
    }

    pub fn try_sub(&self, other: &HeckeElement) -> Result<HeckeElement, HeckeError> {
        self.try_add(&other.scale(&Laurent::constant(-1)))
    }

    pub fn scale(&self, f: &Laurent) -> HeckeElement {
        HeckeElement::from_terms(self.basis, self.terms().map(|(x, c)| (x, c * f)))
    }

    /// Keeps only the coordinates at elements satisfying `keep`.
    pub fn restrict(&self, keep: impl Fn(Elem) -> bool) -> HeckeElement {
        Self {
            basis: self.basis,
            coords: self.coords.iter().filter(|(x, _)| keep(**x)).map(|(&x, c)| (x, c.clone())).collect(),
        }
    }
}
