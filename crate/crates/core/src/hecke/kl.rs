//! Kazhdan-Lusztig polynomials `p_{y,x}`, with interchangeable algorithms
//! selected by name.

use super::algebra::{dense_to_row, row_lookup, t_left_gen};
use super::Row;
use crate::coxeter::{CoxeterGroup, Elem};
use crate::laurent::Laurent;

/// For each `x`, the nonzero `p_{y,x}` sorted by `y`; so column `x` is `c_x`
/// in the T-basis.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct KlTable {
    columns: Vec<Row>,
}

impl KlTable {
    pub fn from_columns(columns: Vec<Row>) -> Self {
        Self { columns }
    }

    pub fn column(&self, x: Elem) -> &Row {
        &self.columns[x.index()]
    }

    pub fn columns(&self) -> &[Row] {
        &self.columns
    }

    /// `p_{y,x}`, zero when absent.
    pub fn p(&self, y: Elem, x: Elem) -> Laurent {
        row_lookup(&self.columns[x.index()], y).cloned().unwrap_or_default()
    }
}

/// An algorithm producing the KL table of a group.
pub trait KlStrategy: Send + Sync {
    fn name(&self) -> &'static str;
    fn description(&self) -> &'static str;
    /// `bar_t[x]` is `bar(T_x)` in the T-basis.
    fn compute(&self, group: &CoxeterGroup, bar_t: &[Row]) -> KlTable;
}

/// Solves `bar(c_x) = c_x` on the lower Bruhat interval of `x` by descending
/// induction: `p_z - bar(p_z) = sum_{y > z} bar(p_y) r_{z,y}` determines `p_z`
/// as the negative-exponent part of the right-hand side.
pub struct IntervalBarSolve;

impl KlStrategy for IntervalBarSolve {
    fn name(&self) -> &'static str {
        "interval"
    }

    fn description(&self) -> &'static str {
        "bar-invariance solve over each lower Bruhat interval"
    }

    fn compute(&self, group: &CoxeterGroup, bar_t: &[Row]) -> KlTable {
        use rayon::prelude::*;
        let n = group.size();
        let columns = (0..n as u32)
            .into_par_iter()
            .map(|x| {
                let x = Elem(x);
                let interval = group.lower_interval(x);
                let mut rhs = vec![Laurent::zero(); n];
                let mut col: Row = Vec::with_capacity(interval.len());
                for &y in interval.iter().rev() {
                    let p = if y == x {
                        Laurent::one()
                    } else {
                        let q = std::mem::take(&mut rhs[y.index()]);
                        debug_assert!((&q + &q.bar()).is_zero(), "bar-solve consistency");
                        q.negative_part()
                    };
                    if p.is_zero() {
                        continue;
                    }
                    let pb = p.bar();
                    for (z, r) in &bar_t[y.index()] {
                        if *z != y {
                            rhs[z.index()].add_mul(&pb, r);
                        }
                    }
                    col.push((y, p));
                }
                col.reverse();
                col
            })
            .collect();
        KlTable { columns }
    }
}

/// Builds `c_{sw}` from `(T_s + v^-L(s)) c_w` by subtracting bar-invariant
/// multiples of lower `c_z` until every non-leading coefficient lies in
/// `v^-1 Z[v^-1]`.
pub struct RecursiveStep;

impl KlStrategy for RecursiveStep {
    fn name(&self) -> &'static str {
        "recursive"
    }

    fn description(&self) -> &'static str {
        "left multiplication by c_s with positive-part correction"
    }

    fn compute(&self, group: &CoxeterGroup, _bar_t: &[Row]) -> KlTable {
        let n = group.size();
        let mut columns: Vec<Row> = Vec::with_capacity(n);
        for x in group.elements() {
            if x == Elem::IDENTITY {
                columns.push(vec![(Elem::IDENTITY, Laurent::one())]);
                continue;
            }
            let s = group.word(x)[0] as usize;
            let w = group.left_mul(s, x);
            let mut dense = vec![Laurent::zero(); n];
            for (y, p) in &columns[w.index()] {
                dense[y.index()] = p.clone();
            }
            let mut prod = t_left_gen(group, s, &dense);
            let shift = -(group.generator_weight(s) as i32);
            for (y, p) in dense.iter().enumerate() {
                prod[y].add_scaled_shifted(p, 1, shift);
            }
            for z in (0..x.index()).rev() {
                let nonneg = prod[z].nonnegative_part();
                if nonneg.is_zero() {
                    continue;
                }
                let mu = &nonneg + &nonneg.bar() - Laurent::constant(nonneg.coeff(0));
                for (y, p) in &columns[z] {
                    prod[y.index()].add_scaled_shifted(&(&mu * p), -1, 0);
                }
            }
            columns.push(dense_to_row(prod));
        }
        KlTable { columns }
    }
}

static STRATEGIES: [&dyn KlStrategy; 2] = [&IntervalBarSolve, &RecursiveStep];

/// All registered KL algorithms; the first is the default.
pub fn kl_strategies() -> &'static [&'static dyn KlStrategy] {
    &STRATEGIES
}

pub fn kl_strategy(name: &str) -> Option<&'static dyn KlStrategy> {
    STRATEGIES.iter().copied().find(|s| s.name() == name)
}

pub fn default_kl_strategy() -> &'static dyn KlStrategy {
    STRATEGIES[0]
}
