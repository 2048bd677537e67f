//! The asymptotic ring J with basis `t_w` and the homomorphism `phi: H -> J_A`.

use std::collections::BTreeMap;

use thiserror::Error;

use crate::cells::{AsymptoticTables, CellId, CellsError};
use crate::coxeter::{CoxeterGroup, Elem};
use crate::hecke::{Basis, HeckeElement};
use crate::laurent::Laurent;
use crate::theorems::{StarData, ThetaData};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum JringError {
    #[error("sum of n_d t_d is not a unit: {0}")]
    UnitFailure(String),
    #[error(transparent)]
    Cells(#[from] CellsError),
}

/// An element of `J_A = A (x) J`. Zero coordinates are never stored.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct JElement {
    coords: BTreeMap<Elem, Laurent>,
}

impl JElement {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn basis(x: Elem) -> Self {
        Self::monomial(x, Laurent::one())
    }

    pub fn monomial(x: Elem, c: Laurent) -> Self {
        let mut j = Self::zero();
        j.add_term(x, &c);
        j
    }

    pub fn from_terms<I: IntoIterator<Item = (Elem, Laurent)>>(terms: I) -> Self {
        let mut j = Self::zero();
        for (x, c) in terms {
            j.add_term(x, &c);
        }
        j
    }

    pub fn coeff(&self, x: Elem) -> Laurent {
        self.coords.get(&x).cloned().unwrap_or_default()
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

    pub fn add(&self, other: &JElement) -> JElement {
        let mut out = self.clone();
        for (x, c) in other.terms() {
            out.add_term(x, c);
        }
        out
    }

    pub fn sub(&self, other: &JElement) -> JElement {
        self.add(&other.scale(&Laurent::constant(-1)))
    }

    pub fn scale(&self, f: &Laurent) -> JElement {
        JElement::from_terms(self.terms().map(|(x, c)| (x, c * f)))
    }

    pub fn restrict(&self, keep: impl Fn(Elem) -> bool) -> JElement {
        JElement { coords: self.coords.iter().filter(|(x, _)| keep(**x)).map(|(&x, c)| (x, c.clone())).collect() }
    }

    /// Human-readable form such as `v t[] - v^-1 t[1]`.
    pub fn display(&self, g: &CoxeterGroup) -> String {
        if self.is_zero() {
            return "0".into();
        }
        self.terms().map(|(x, c)| format!("({c}) t[{}]", g.name(x))).collect::<Vec<_>>().join(" + ")
    }
}

/// `a * b` using `t_x t_y = sum_z gamma_{x,y,z^-1} t_z`.
pub fn j_multiply(t: &AsymptoticTables, a: &JElement, b: &JElement) -> JElement {
    let mut out = JElement::zero();
    for (x, f) in a.terms() {
        for (y, g) in b.terms() {
            let row = t.j_row(x, y);
            if row.is_empty() {
                continue;
            }
            let fg = f * g;
            for &(z, c) in row.iter() {
                out.add_term(z, &fg.scale(c));
            }
        }
    }
    out
}

/// `sum_{d in D} n_d t_d`, after checking that it is a two-sided identity on every `t_x`.
pub fn j_unit(t: &AsymptoticTables) -> Result<JElement, JringError> {
    let unit = JElement::from_terms(t.distinguished().iter().map(|&(d, n)| (d, Laurent::constant(n))));
    let g = t.group();
    for x in g.elements() {
        let tx = JElement::basis(x);
        if j_multiply(t, &unit, &tx) != tx {
            return Err(JringError::UnitFailure(format!("1 * t[{}] != t[{}]", g.name(x), g.name(x))));
        }
        if j_multiply(t, &tx, &unit) != tx {
            return Err(JringError::UnitFailure(format!("t[{}] * 1 != t[{}]", g.name(x), g.name(x))));
        }
    }
    Ok(unit)
}

/// `phi(c_x^#) = sum_{z} h_{x,d_z,z} n_{d_z} t_z`, extended A-linearly; the
/// argument is first expanded in the `c^#` basis.
pub fn phi(t: &AsymptoticTables, h: &HeckeElement) -> Result<JElement, JringError> {
    let hecke = t.structure().hecke();
    let h = hecke.convert(h, Basis::CSharp);
    let mut out = JElement::zero();
    for (x, f) in h.terms() {
        out = out.add(&phi_basis(t, x)?.scale(f));
    }
    Ok(out)
}

/// `phi(c_x^#)`.
pub fn phi_basis(t: &AsymptoticTables, x: Elem) -> Result<JElement, JringError> {
    let mut out = JElement::zero();
    for &(d, n) in t.distinguished() {
        for (z, h) in t.structure().product(x, d).iter() {
            if t.d_of(*z)? == d {
                out.add_term(*z, &h.scale(n));
            }
        }
    }
    Ok(out)
}

/// `T_c = sum_{d in D, d in c} theta(d) eps_d t_{d*}`.
pub fn t_frak(t: &AsymptoticTables, cell: CellId, star: &StarData, theta: &ThetaData) -> JElement {
    let ts = &t.cells().two_sided;
    JElement::from_terms(
        t.distinguished()
            .iter()
            .filter(|(d, _)| ts.cell_of(*d) == cell)
            .map(|&(d, _)| (star.star(d), Laurent::constant(theta.theta(d) * star.sign(d)))),
    )
}

/// The two-sided ideal `J^c` as a support test.
pub fn in_cell_ideal(t: &AsymptoticTables, j: &JElement, cell: CellId) -> bool {
    j.support().all(|x| t.cells().two_sided.cell_of(x) == cell)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hecke::HeckeElement;

    fn tables(name: &str, w: &[u32]) -> std::sync::Arc<AsymptoticTables> {
        crate::analysis::Analysis::for_type(name, w).unwrap().tables
    }

    #[test]
    fn a1_products_and_unit() {
        let t = tables("A1", &[1]);
        let s = t.group().generator(0);
        let e = Elem::IDENTITY;
        assert_eq!(j_multiply(&t, &JElement::basis(s), &JElement::basis(s)), JElement::basis(s));
        assert!(j_multiply(&t, &JElement::basis(e), &JElement::basis(s)).is_zero());
        let unit = j_unit(&t).unwrap();
        assert_eq!(unit, JElement::basis(e).add(&JElement::basis(s)));
        assert_eq!(j_multiply(&t, &unit, &unit), unit);
    }

    #[test]
    fn a2_unit() {
        let t = tables("A2", &[1, 1]);
        let g = t.group().clone();
        let expected =
            JElement::from_terms(["", "1", "2", "1.2.1"].map(|w| (g.parse_name(w).unwrap(), Laurent::one())));
        assert_eq!(j_unit(&t).unwrap(), expected);
    }

    #[test]
    fn a1_phi() {
        let t = tables("A1", &[1]);
        let s = t.group().generator(0);
        let e = Elem::IDENTITY;
        let ce = HeckeElement::basis_element(Basis::CSharp, e);
        assert_eq!(phi(&t, &ce).unwrap(), JElement::basis(e).add(&JElement::basis(s)));
        let ts = HeckeElement::basis_element(Basis::T, s);
        let expected = JElement::from_terms([(e, Laurent::v_pow(1)), (s, Laurent::v_pow(-1).scale(-1))]);
        assert_eq!(phi(&t, &ts).unwrap(), expected);
    }

    #[test]
    fn phi_is_multiplicative_on_generators() {
        let t = tables("B2", &[2, 1]);
        let hecke = t.structure().hecke().clone();
        let g = t.group().clone();
        for x in g.elements() {
            for y in g.elements() {
                let tx = HeckeElement::basis_element(Basis::T, x);
                let ty = HeckeElement::basis_element(Basis::T, y);
                let lhs = phi(&t, &hecke.t_multiply(&tx, &ty).unwrap()).unwrap();
                let rhs = j_multiply(&t, &phi(&t, &tx).unwrap(), &phi(&t, &ty).unwrap());
                assert_eq!(lhs, rhs);
            }
        }
    }
}
