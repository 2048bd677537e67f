//! Structure constants `h_{x,y,z}` of the canonical basis: `c_x c_y = sum_z h_{x,y,z} c_z`.

use std::sync::{Arc, OnceLock};

use rayon::prelude::*;

use super::algebra::{dense_to_row, row_lookup, t_left_gen, HeckeAlgebra};
use super::element::{Basis, HeckeElement};
use super::Row;
use crate::coxeter::Elem;
use crate::laurent::Laurent;

/// Lazily filled table of products `c_x c_y` in the c-basis. Entries are
/// computed once; concurrent fills of the same entry store identical values.
#[derive(Debug)]
pub struct StructureTable {
    hecke: Arc<HeckeAlgebra>,
    /// `left_cs[w * rank + s]` is `c_s c_w` in the c-basis.
    left_cs: Vec<Row>,
    products: Vec<OnceLock<Arc<Row>>>,
}

impl StructureTable {
    pub fn new(hecke: Arc<HeckeAlgebra>) -> Self {
        let g = hecke.group().clone();
        let n = g.size();
        let rank = g.rank();
        let left_cs: Vec<Row> = (0..n * rank)
            .into_par_iter()
            .map(|i| {
                let (w, s) = (Elem((i / rank) as u32), i % rank);
                let cw = hecke.to_t_dense(&HeckeElement::basis_element(Basis::C, w));
                let mut prod = t_left_gen(&g, s, &cw);
                let shift = -(g.generator_weight(s) as i32);
                for (y, p) in cw.iter().enumerate() {
                    prod[y].add_scaled_shifted(p, 1, shift);
                }
                dense_to_row(hecke.expand_dense(prod, Basis::C))
            })
            .collect();
        let products = (0..n * n).map(|_| OnceLock::new()).collect();
        Self { hecke, left_cs, products }
    }

    pub fn hecke(&self) -> &Arc<HeckeAlgebra> {
        &self.hecke
    }

    fn n(&self) -> usize {
        self.hecke.group().size()
    }

    /// `c_s c_w` in the c-basis.
    pub fn left_cs(&self, s: usize, w: Elem) -> &Row {
        &self.left_cs[w.index() * self.hecke.group().rank() + s]
    }

    /// `c_x c_y` in the c-basis, computed on first use. When `c_{y^-1} c_{x^-1}`
    /// is already known the result is read off from `h_{x,y,z} = h_{y^-1,x^-1,z^-1}`.
    pub fn product(&self, x: Elem, y: Elem) -> Arc<Row> {
        let n = self.n();
        let slot = &self.products[x.index() * n + y.index()];
        if let Some(row) = slot.get() {
            return row.clone();
        }
        let g = self.hecke.group();
        let (xf, yf) = (g.inverse(y), g.inverse(x));
        if let Some(flipped) = self.products[xf.index() * n + yf.index()].get() {
            let mut row: Row = flipped.iter().map(|(z, c)| (g.inverse(*z), c.clone())).collect();
            row.sort_by_key(|(z, _)| *z);
            return slot.get_or_init(|| Arc::new(row)).clone();
        }
        slot.get_or_init(|| {
            let h = self.hecke.c_product_direct(x, y);
            Arc::new(h.terms().map(|(z, c)| (z, c.clone())).collect())
        })
        .clone()
    }

    pub fn is_filled(&self, x: Elem, y: Elem) -> bool {
        self.products[x.index() * self.n() + y.index()].get().is_some()
    }

    /// `h_{x,y,z}`.
    pub fn h(&self, x: Elem, y: Elem, z: Elem) -> Laurent {
        row_lookup(&self.product(x, y), z).cloned().unwrap_or_default()
    }

    /// Fills `c_x c_y` for every `x` and every `y` in `ys`, storing only the
    /// pairs accepted by `keep`. Uses `c_x = c_s c_{sx} - sum_z mu_z c_z`
    /// to build the products column by column.
    pub fn prefill<F>(&self, ys: &[Elem], keep: F)
    where
        F: Fn(Elem, Elem) -> bool + Sync,
    {
        let g = self.hecke.group();
        let n = self.n();
        ys.par_iter().for_each(|&y| {
            let mut cols: Vec<Vec<Laurent>> = Vec::with_capacity(n);
            for x in g.elements() {
                let col = if x == Elem::IDENTITY {
                    let mut d = vec![Laurent::zero(); n];
                    d[y.index()] = Laurent::one();
                    d
                } else {
                    let s = g.word(x)[0] as usize;
                    let xp = g.left_mul(s, x);
                    let mut out = self.left_mul_cs_dense(s, &cols[xp.index()]);
                    for (z, mu) in self.left_cs(s, xp) {
                        if *z == x {
                            continue;
                        }
                        for (w, c) in cols[z.index()].iter().enumerate() {
                            if !c.is_zero() {
                                out[w].add_scaled_shifted(&(mu * c), -1, 0);
                            }
                        }
                    }
                    out
                };
                if keep(x, y) {
                    let slot = &self.products[x.index() * n + y.index()];
                    let row = Arc::new(dense_to_row(col.clone()));
                    let _ = slot.set(row);
                }
                cols.push(col);
            }
        });
    }

    fn left_mul_cs_dense(&self, s: usize, h: &[Laurent]) -> Vec<Laurent> {
        let mut out = vec![Laurent::zero(); h.len()];
        for (w, c) in h.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            for (z, m) in self.left_cs(s, Elem(w as u32)) {
                out[z.index()].add_mul(c, m);
            }
        }
        out
    }
}
