use std::sync::{Arc, OnceLock};

use super::element::{Basis, HeckeElement};
use super::kl::{KlStrategy, KlTable};
use super::{HeckeError, Row};
use crate::coxeter::{CoxeterGroup, Elem};
use crate::laurent::Laurent;

/// `v^L(s) - v^-L(s)`, the coefficient in the quadratic relation.
pub(crate) fn xi(group: &CoxeterGroup, s: usize) -> Laurent {
    let l = group.generator_weight(s) as i32;
    Laurent::v_pow(l) - Laurent::v_pow(-l)
}

/// `T_s * h` on dense T-coordinates, using `T_s T_w = T_sw` if `sw > w` and
/// `T_sw + xi_s T_w` otherwise.
pub(crate) fn t_left_gen(group: &CoxeterGroup, s: usize, h: &[Laurent]) -> Vec<Laurent> {
    let xi = xi(group, s);
    let mut out = vec![Laurent::zero(); h.len()];
    for (w, c) in h.iter().enumerate() {
        if c.is_zero() {
            continue;
        }
        let w = Elem(w as u32);
        out[group.left_mul(s, w).index()] += c;
        if group.is_left_descent(s, w) {
            out[w.index()].add_mul(&xi, c);
        }
    }
    out
}

/// `h * T_s` on dense T-coordinates.
pub(crate) fn t_right_gen(group: &CoxeterGroup, h: &[Laurent], s: usize) -> Vec<Laurent> {
    let xi = xi(group, s);
    let mut out = vec![Laurent::zero(); h.len()];
    for (w, c) in h.iter().enumerate() {
        if c.is_zero() {
            continue;
        }
        let w = Elem(w as u32);
        out[group.right_mul(w, s).index()] += c;
        if group.is_right_descent(w, s) {
            out[w.index()].add_mul(&xi, c);
        }
    }
    out
}

/// `T_s^-1 * h` with `T_s^-1 = T_s - xi_s`.
pub(crate) fn t_left_gen_inv(group: &CoxeterGroup, s: usize, h: &[Laurent]) -> Vec<Laurent> {
    let xi = xi(group, s);
    let mut out = vec![Laurent::zero(); h.len()];
    for (w, c) in h.iter().enumerate() {
        if c.is_zero() {
            continue;
        }
        let w = Elem(w as u32);
        out[group.left_mul(s, w).index()] += c;
        if !group.is_left_descent(s, w) {
            out[w.index()].add_scaled_shifted(&(&xi * c), -1, 0);
        }
    }
    out
}

pub(crate) fn dense_to_row(dense: Vec<Laurent>) -> Row {
    dense.into_iter().enumerate().filter(|(_, c)| !c.is_zero()).map(|(i, c)| (Elem(i as u32), c)).collect()
}

pub(crate) fn row_lookup(row: &Row, x: Elem) -> Option<&Laurent> {
    row.binary_search_by_key(&x, |(y, _)| *y).ok().map(|i| &row[i].1)
}

/// `bar(T_x) = (T_{x^-1})^-1` in the T-basis for every `x`, built as
/// `bar(T_{sx'}) = T_s^-1 bar(T_{x'})`.
pub fn bar_table(group: &CoxeterGroup) -> Vec<Row> {
    let n = group.size();
    let mut dense_rows: Vec<Row> = Vec::with_capacity(n);
    for x in group.elements() {
        if x == Elem::IDENTITY {
            dense_rows.push(vec![(Elem::IDENTITY, Laurent::one())]);
            continue;
        }
        let s = group.word(x)[0] as usize;
        let rest = group.left_mul(s, x);
        let mut dense = vec![Laurent::zero(); n];
        for (y, c) in &dense_rows[rest.index()] {
            dense[y.index()] = c.clone();
        }
        dense_rows.push(dense_to_row(t_left_gen_inv(group, s, &dense)));
    }
    dense_rows
}

/// The Hecke algebra of a weighted Coxeter group together with its
/// canonical basis.
#[derive(Debug)]
pub struct HeckeAlgebra {
    group: Arc<CoxeterGroup>,
    kl: KlTable,
    bar_t: Vec<Row>,
    csharp_t: Vec<OnceLock<Row>>,
}

impl HeckeAlgebra {
    pub fn new(group: Arc<CoxeterGroup>, strategy: &dyn KlStrategy) -> Self {
        let bar_t = bar_table(&group);
        let kl = strategy.compute(&group, &bar_t);
        Self::assemble(group, kl, bar_t)
    }

    /// Uses a precomputed KL table (e.g. loaded from a cache).
    pub fn with_kl_table(group: Arc<CoxeterGroup>, kl: KlTable) -> Self {
        let bar_t = bar_table(&group);
        Self::assemble(group, kl, bar_t)
    }

    fn assemble(group: Arc<CoxeterGroup>, kl: KlTable, bar_t: Vec<Row>) -> Self {
        let csharp_t = (0..group.size()).map(|_| OnceLock::new()).collect();
        Self { group, kl, bar_t, csharp_t }
    }

    pub fn group(&self) -> &Arc<CoxeterGroup> {
        &self.group
    }

    pub fn kl(&self) -> &KlTable {
        &self.kl
    }

    fn n(&self) -> usize {
        self.group.size()
    }

    fn sign(&self, x: Elem) -> i64 {
        if self.group.length(x).is_multiple_of(2) {
            1
        } else {
            -1
        }
    }

    /// `bar(T_x)` in the T-basis.
    pub fn bar_t_row(&self, x: Elem) -> &Row {
        &self.bar_t[x.index()]
    }

    /// `c_x` in the T-basis.
    pub fn c_row(&self, x: Elem) -> &Row {
        self.kl.column(x)
    }

    /// `c_x^#` in the T-basis: `sum_y p_{y,x} (-1)^l(y) bar(T_y)`.
    pub fn csharp_row(&self, x: Elem) -> &Row {
        self.csharp_t[x.index()].get_or_init(|| {
            let mut dense = vec![Laurent::zero(); self.n()];
            for (y, p) in self.kl.column(x) {
                let sign = self.sign(*y);
                for (z, r) in &self.bar_t[y.index()] {
                    dense[z.index()].add_mul(p, &r.scale(sign));
                }
            }
            dense_to_row(dense)
        })
    }

    fn row_for(&self, basis: Basis, x: Elem) -> &Row {
        match basis {
            Basis::T => unreachable!("T rows are trivial"),
            Basis::C => self.c_row(x),
            Basis::CSharp => self.csharp_row(x),
        }
    }

    pub fn kl_element(&self, x: Elem) -> HeckeElement {
        HeckeElement::from_terms(Basis::T, self.c_row(x).iter().cloned())
    }

    pub fn csharp_element(&self, x: Elem) -> HeckeElement {
        HeckeElement::from_terms(Basis::T, self.csharp_row(x).iter().cloned())
    }

    /// Re-expresses any element in the T-basis.
    pub fn to_t(&self, h: &HeckeElement) -> HeckeElement {
        HeckeElement::from_dense(Basis::T, self.to_t_dense(h))
    }

    pub(crate) fn to_t_dense(&self, h: &HeckeElement) -> Vec<Laurent> {
        match h.basis() {
            Basis::T => h.to_dense(self.n()),
            b => {
                let mut dense = vec![Laurent::zero(); self.n()];
                for (x, f) in h.terms() {
                    for (y, p) in self.row_for(b, x) {
                        dense[y.index()].add_mul(f, p);
                    }
                }
                dense
            }
        }
    }

    /// Top-down triangular solve: both `c_z` and `(-1)^l(z) c_z^#` are `T_z`
    /// plus Bruhat-lower terms, and element ids increase with length.
    pub(crate) fn expand_dense(&self, mut dense: Vec<Laurent>, basis: Basis) -> Vec<Laurent> {
        if basis == Basis::T {
            return dense;
        }
        let mut out = vec![Laurent::zero(); self.n()];
        for z in (0..self.n()).rev() {
            if dense[z].is_zero() {
                continue;
            }
            let z_el = Elem(z as u32);
            let coeff = match basis {
                Basis::C => std::mem::take(&mut dense[z]),
                _ => std::mem::take(&mut dense[z]).scale(self.sign(z_el)),
            };
            for (y, p) in self.row_for(basis, z_el) {
                if *y != z_el {
                    dense[y.index()].add_scaled_shifted(&(p * &coeff), -1, 0);
                }
            }
            out[z] = coeff;
        }
        out
    }

    pub fn expand_in_c(&self, h: &HeckeElement) -> Result<HeckeElement, HeckeError> {
        h.expect_basis(Basis::T)?;
        Ok(HeckeElement::from_dense(Basis::C, self.expand_dense(h.to_dense(self.n()), Basis::C)))
    }

    pub fn expand_in_cdagger(&self, h: &HeckeElement) -> Result<HeckeElement, HeckeError> {
        h.expect_basis(Basis::T)?;
        Ok(HeckeElement::from_dense(Basis::CSharp, self.expand_dense(h.to_dense(self.n()), Basis::CSharp)))
    }

    /// Converts between any two bases.
    pub fn convert(&self, h: &HeckeElement, basis: Basis) -> HeckeElement {
        if h.basis() == basis {
            return h.clone();
        }
        HeckeElement::from_dense(basis, self.expand_dense(self.to_t_dense(h), basis))
    }

    pub fn t_multiply(&self, a: &HeckeElement, b: &HeckeElement) -> Result<HeckeElement, HeckeError> {
        a.expect_basis(Basis::T)?;
        b.expect_basis(Basis::T)?;
        Ok(HeckeElement::from_dense(Basis::T, self.t_multiply_dense(&a.to_dense(self.n()), b)))
    }

    fn t_multiply_dense(&self, a: &[Laurent], b: &HeckeElement) -> Vec<Laurent> {
        let mut out = vec![Laurent::zero(); self.n()];
        for (y, g) in b.terms() {
            let mut cur = a.to_vec();
            for &s in self.group.word(y) {
                cur = t_right_gen(&self.group, &cur, s as usize);
            }
            for (z, c) in cur.iter().enumerate() {
                out[z].add_mul(c, g);
            }
        }
        out
    }

    /// `T_x * h` for `h` in the T-basis.
    pub fn t_left_multiply(&self, x: Elem, h: &HeckeElement) -> Result<HeckeElement, HeckeError> {
        h.expect_basis(Basis::T)?;
        Ok(HeckeElement::from_dense(Basis::T, self.t_left_multiply_dense(x, h.to_dense(self.n()))))
    }

    pub(crate) fn t_left_multiply_dense(&self, x: Elem, mut dense: Vec<Laurent>) -> Vec<Laurent> {
        for &s in self.group.word(x).iter().rev() {
            dense = t_left_gen(&self.group, s as usize, &dense);
        }
        dense
    }

    /// `T_x^-1` in the T-basis.
    pub fn t_inverse(&self, x: Elem) -> HeckeElement {
        // T_x^-1 = bar(T_{x^-1}) with unit coefficient
        HeckeElement::from_terms(Basis::T, self.bar_t[self.group.inverse(x).index()].iter().cloned())
    }

    /// The bar involution `sum f_x T_x -> sum bar(f_x) (T_{x^-1})^-1`.
    pub fn bar_involution(&self, h: &HeckeElement) -> Result<HeckeElement, HeckeError> {
        h.expect_basis(Basis::T)?;
        let mut dense = vec![Laurent::zero(); self.n()];
        for (x, f) in h.terms() {
            let fb = f.bar();
            for (y, r) in &self.bar_t[x.index()] {
                dense[y.index()].add_mul(&fb, r);
            }
        }
        Ok(HeckeElement::from_dense(Basis::T, dense))
    }

    /// The algebra automorphism `T_x -> (-1)^l(x) (T_{x^-1})^-1`, returned in the basis of `h`.
    pub fn dagger(&self, h: &HeckeElement) -> HeckeElement {
        let t = self.to_t(h);
        let mut dense = vec![Laurent::zero(); self.n()];
        for (x, f) in t.terms() {
            let f = f.scale(self.sign(x));
            for (y, r) in &self.bar_t[x.index()] {
                dense[y.index()].add_mul(&f, r);
            }
        }
        self.convert(&HeckeElement::from_dense(Basis::T, dense), h.basis())
    }

    /// The algebra antiautomorphism `T_x -> T_{x^-1}`, returned in the basis of `h`.
    pub fn flat(&self, h: &HeckeElement) -> HeckeElement {
        let t = self.to_t(h);
        let flipped = HeckeElement::from_terms(Basis::T, t.terms().map(|(x, f)| (self.group.inverse(x), f.clone())));
        self.convert(&flipped, h.basis())
    }

    /// The automorphism `T_w -> T_{w0 w w0}`, returned in the basis of `h`.
    pub fn sigma(&self, h: &HeckeElement) -> HeckeElement {
        let t = self.to_t(h);
        let moved = HeckeElement::from_terms(Basis::T, t.terms().map(|(x, f)| (self.group.sigma(x), f.clone())));
        self.convert(&moved, h.basis())
    }

    /// `c_x c_y` in the c-basis, computed directly through the T-basis.
    pub fn c_product_direct(&self, x: Elem, y: Elem) -> HeckeElement {
        let a = self.to_t_dense(&HeckeElement::basis_element(Basis::C, x));
        let prod = self.t_multiply_dense(&a, &self.kl_element(y));
        HeckeElement::from_dense(Basis::C, self.expand_dense(prod, Basis::C))
    }
}
