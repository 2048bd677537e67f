use std::sync::{Arc, OnceLock};

use rayon::prelude::*;

use super::{CellDecomposition, CellId, CellsError};
use crate::coxeter::{CoxeterGroup, Elem};
use crate::hecke::StructureTable;
use crate::laurent::Laurent;

/// Groups up to this order get every product `c_x c_y` and a full scan for `a`.
pub const DEFAULT_FULL_TABLE_LIMIT: usize = 120;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct AsymptoticOptions {
    pub full_table_limit: usize,
}

impl Default for AsymptoticOptions {
    fn default() -> Self {
        Self { full_table_limit: DEFAULT_FULL_TABLE_LIMIT }
    }
}

/// `t_x t_y` in J: pairs `(z, gamma_{x,y,z^-1})` with nonzero coefficient, sorted by `z`.
pub type JRow = Vec<(Elem, i64)>;

/// The a-function, `Delta`, the distinguished involutions with their signs,
/// `x -> d_x`, and lazily computed rows of `gamma`.
#[derive(Debug)]
pub struct AsymptoticTables {
    structure: Arc<StructureTable>,
    cells: Arc<CellDecomposition>,
    full: bool,
    a: Vec<u32>,
    delta: Vec<u32>,
    p1_top: Vec<i64>,
    n: Vec<Option<i64>>,
    distinguished: Vec<(Elem, i64)>,
    d_of: Vec<Result<Elem, CellsError>>,
    jrows: Vec<OnceLock<Arc<JRow>>>,
}

impl AsymptoticTables {
    /// Fills the products needed downstream, then computes `a`. Products kept:
    /// all of them when `|W|` is within the limit, otherwise pairs inside one
    /// two-sided cell and pairs whose right factor is an involution.
    pub fn build(structure: Arc<StructureTable>, cells: Arc<CellDecomposition>, options: AsymptoticOptions) -> Self {
        let full = structure.hecke().group().size() <= options.full_table_limit;
        prefill(&structure, &cells, full);
        let a = a_values(&structure, &cells, full);
        Self::assemble(structure, cells, full, a, None)
    }

    /// Rebuilds from stored `a`-values and, optionally, stored distinguished
    /// involutions. Products are still filled, since `phi` needs them.
    pub fn from_parts(
        structure: Arc<StructureTable>,
        cells: Arc<CellDecomposition>,
        options: AsymptoticOptions,
        a: Vec<u32>,
        distinguished: Option<Vec<(Elem, i64)>>,
    ) -> Self {
        let full = structure.hecke().group().size() <= options.full_table_limit;
        prefill(&structure, &cells, full);
        Self::assemble(structure, cells, full, a, distinguished)
    }

    fn assemble(
        structure: Arc<StructureTable>,
        cells: Arc<CellDecomposition>,
        full: bool,
        a: Vec<u32>,
        distinguished: Option<Vec<(Elem, i64)>>,
    ) -> Self {
        let g = structure.hecke().group().clone();
        let n_el = g.size();
        let mut delta = vec![0; n_el];
        let mut p1_top = vec![0; n_el];
        for z in g.elements() {
            let p = structure.hecke().kl().p(Elem::IDENTITY, z);
            let deg = p.degree().expect("p_{1,z} is nonzero");
            delta[z.index()] = (-deg).max(0) as u32;
            p1_top[z.index()] = p.coeff(deg);
        }
        let distinguished = distinguished.unwrap_or_else(|| {
            g.elements().filter(|z| a[z.index()] == delta[z.index()]).map(|z| (z, p1_top[z.index()])).collect()
        });
        let mut n = vec![None; n_el];
        for &(d, nd) in &distinguished {
            n[d.index()] = Some(nd);
        }
        let mut d_of = Vec::with_capacity(n_el);
        for x in g.elements() {
            let found: Vec<Elem> =
                cells.left.members(cells.left.cell_of(x)).iter().copied().filter(|y| n[y.index()].is_some()).collect();
            d_of.push(match found.len() {
                1 => Ok(found[0]),
                0 => Err(CellsError::NotFound(g.name(x))),
                k => Err(CellsError::NotUnique(g.name(x), k)),
            });
        }
        let jrows = (0..n_el * n_el).map(|_| OnceLock::new()).collect();
        Self { structure, cells, full, a, delta, p1_top, n, distinguished, d_of, jrows }
    }

    pub fn structure(&self) -> &Arc<StructureTable> {
        &self.structure
    }

    pub fn cells(&self) -> &Arc<CellDecomposition> {
        &self.cells
    }

    pub fn group(&self) -> &Arc<CoxeterGroup> {
        self.structure.hecke().group()
    }

    /// Whether every product was tabulated (small groups).
    pub fn is_full(&self) -> bool {
        self.full
    }

    pub fn a(&self, z: Elem) -> u32 {
        self.a[z.index()]
    }

    pub fn a_values(&self) -> &[u32] {
        &self.a
    }

    /// The a-value of a two-sided cell (taken at its representative).
    pub fn a_of_cell(&self, c: CellId) -> u32 {
        self.a(self.cells.two_sided.representative(c))
    }

    /// `-deg p_{1,z}`.
    pub fn delta(&self, z: Elem) -> u32 {
        self.delta[z.index()]
    }

    /// Coefficient of the top power of `p_{1,z}`.
    pub fn p1_top(&self, z: Elem) -> i64 {
        self.p1_top[z.index()]
    }

    /// `n_d` if `d` is a distinguished involution.
    pub fn n(&self, d: Elem) -> Option<i64> {
        self.n[d.index()]
    }

    pub fn is_distinguished(&self, z: Elem) -> bool {
        self.n[z.index()].is_some()
    }

    pub fn distinguished(&self) -> &[(Elem, i64)] {
        &self.distinguished
    }

    /// The distinguished involution in the left cell of `x`.
    pub fn d_of(&self, x: Elem) -> Result<Elem, CellsError> {
        self.d_of[x.index()].clone()
    }

    pub fn h(&self, x: Elem, y: Elem, z: Elem) -> Laurent {
        self.structure.h(x, y, z)
    }

    /// `t_x t_y`. For groups above the table limit, products of elements from
    /// different two-sided cells are taken to be zero.
    pub fn j_row(&self, x: Elem, y: Elem) -> Arc<JRow> {
        let n = self.a.len();
        self.jrows[x.index() * n + y.index()]
            .get_or_init(|| {
                if !self.full && !self.cells.two_sided.same(x, y) {
                    return Arc::new(Vec::new());
                }
                let prod = self.structure.product(x, y);
                Arc::new(
                    prod.iter()
                        .map(|(z, h)| (*z, h.coeff(self.a[z.index()] as i32)))
                        .filter(|(_, c)| *c != 0)
                        .collect(),
                )
            })
            .clone()
    }

    /// Stores a row read back from a cache.
    pub fn preload_j_row(&self, x: Elem, y: Elem, row: JRow) {
        let _ = self.jrows[x.index() * self.a.len() + y.index()].set(Arc::new(row));
    }

    /// `gamma_{x,y,z}`: the coefficient of `v^a(z^-1)` in `h_{x,y,z^-1}`.
    pub fn gamma(&self, x: Elem, y: Elem, z: Elem) -> i64 {
        let zi = self.group().inverse(z);
        let row = self.j_row(x, y);
        row.binary_search_by_key(&zi, |(w, _)| *w).map(|i| row[i].1).unwrap_or(0)
    }

    /// Pairs `(x, y)` over which `gamma` is scanned: all pairs for small
    /// groups, otherwise pairs inside one two-sided cell.
    pub fn scan_pairs(&self) -> Vec<(Elem, Elem)> {
        let g = self.group();
        if self.full {
            g.elements().flat_map(|x| g.elements().map(move |y| (x, y))).collect()
        } else {
            let ts = &self.cells.two_sided;
            ts.cells()
                .flat_map(|c| {
                    let m = ts.members(c);
                    m.iter().flat_map(move |&x| m.iter().map(move |&y| (x, y)))
                })
                .collect()
        }
    }

    /// Computes the J-rows of the given pairs in parallel.
    pub fn warm(&self, pairs: &[(Elem, Elem)]) {
        pairs.par_iter().for_each(|&(x, y)| {
            self.j_row(x, y);
        });
    }

    /// Every nonzero `gamma_{x,y,z^-1}` over the scan pairs, as `(x, y, z, value)`.
    pub fn nonzero_gammas(&self) -> Vec<(Elem, Elem, Elem, i64)> {
        let pairs = self.scan_pairs();
        self.warm(&pairs);
        pairs
            .iter()
            .flat_map(|&(x, y)| self.j_row(x, y).iter().map(move |&(z, c)| (x, y, z, c)).collect::<Vec<_>>())
            .collect()
    }
}

fn prefill(structure: &StructureTable, cells: &CellDecomposition, full: bool) {
    let g = structure.hecke().group();
    let ys: Vec<Elem> = g.elements().collect();
    if full {
        structure.prefill(&ys, |_, _| true);
    } else {
        let ts = &cells.two_sided;
        structure.prefill(&ys, |x, y| ts.same(x, y) || g.is_involution(y));
    }
}

fn a_values(structure: &StructureTable, cells: &CellDecomposition, full: bool) -> Vec<u32> {
    let g = structure.hecke().group();
    let n = g.size();
    let update = |acc: &mut Vec<u32>, x: Elem, y: Elem, only: Option<CellId>| {
        for (z, h) in structure.product(x, y).iter() {
            if only.is_some_and(|c| cells.two_sided.cell_of(*z) != c) {
                continue;
            }
            let d = h.degree().unwrap_or(0).max(0) as u32;
            let slot = &mut acc[z.index()];
            *slot = (*slot).max(d);
        }
    };
    let merge = |mut a: Vec<u32>, b: Vec<u32>| {
        for (x, y) in a.iter_mut().zip(b) {
            *x = (*x).max(y);
        }
        a
    };
    if full {
        (0..n as u32)
            .into_par_iter()
            .fold(
                || vec![0u32; n],
                |mut acc, x| {
                    for y in g.elements() {
                        update(&mut acc, Elem(x), y, None);
                    }
                    acc
                },
            )
            .reduce(|| vec![0u32; n], merge)
    } else {
        // each two-sided cell together with all involutions, which contain
        // the distinguished ones
        let involutions: Vec<Elem> = g.elements().filter(|&x| g.is_involution(x)).collect();
        let ts = &cells.two_sided;
        ts.cells()
            .collect::<Vec<_>>()
            .into_par_iter()
            .fold(
                || vec![0u32; n],
                |mut acc, c| {
                    let mut search: Vec<Elem> = ts.members(c).to_vec();
                    search.extend(involutions.iter().copied());
                    search.sort();
                    search.dedup();
                    for &x in &search {
                        for &y in &search {
                            update(&mut acc, x, y, Some(c));
                        }
                    }
                    acc
                },
            )
            .reduce(|| vec![0u32; n], merge)
    }
}

#[cfg(test)]
pub(crate) mod tests {
    use super::*;
    use crate::coxeter::CoxeterDatum;
    use crate::hecke::{default_kl_strategy, HeckeAlgebra};

    pub(crate) fn tables(name: &str, weights: &[u32], options: AsymptoticOptions) -> AsymptoticTables {
        let g = Arc::new(CoxeterGroup::new(CoxeterDatum::from_type(name, weights.to_vec()).unwrap()).unwrap());
        let h = Arc::new(HeckeAlgebra::new(g, default_kl_strategy()));
        let st = Arc::new(StructureTable::new(h));
        let cells = Arc::new(CellDecomposition::compute(&st));
        AsymptoticTables::build(st, cells, options)
    }

    #[test]
    fn a1_tables() {
        for l in [1, 2] {
            let t = tables("A1", &[l], AsymptoticOptions::default());
            let s = t.group().generator(0);
            assert_eq!(t.a(Elem::IDENTITY), 0);
            assert_eq!(t.a(s), l);
            assert_eq!(t.distinguished(), [(Elem::IDENTITY, 1), (s, 1)]);
            assert_eq!(t.gamma(Elem::IDENTITY, Elem::IDENTITY, Elem::IDENTITY), 1);
            assert_eq!(t.gamma(s, s, s), 1);
            assert_eq!(t.gamma(Elem::IDENTITY, s, s), 0);
            assert_eq!(t.d_of(s), Ok(s));
        }
    }

    #[test]
    fn a2_tables() {
        let t = tables("A2", &[1, 1], AsymptoticOptions::default());
        let g = t.group().clone();
        let e = |w: &str| g.parse_name(w).unwrap();
        assert_eq!(t.a(Elem::IDENTITY), 0);
        assert_eq!(t.a(g.w0()), 3);
        for w in ["1", "2", "1.2", "2.1"] {
            assert_eq!(t.a(e(w)), 1);
        }
        let d: Vec<_> = t.distinguished().iter().map(|&(d, n)| (g.name(d), n)).collect();
        assert_eq!(d, [("".to_string(), 1), ("1".into(), 1), ("2".into(), 1), ("1.2.1".into(), 1)]);
        assert_eq!(t.d_of(e("2.1")), Ok(e("1")));
        assert_eq!(t.d_of(g.w0()), Ok(g.w0()));
        assert_eq!(t.gamma(e("2.1"), e("1"), e("1.2")), 1);
    }

    #[test]
    fn b2_longest_element() {
        let t = tables("B2", &[2, 1], AsymptoticOptions::default());
        let g = t.group();
        assert_eq!(t.a(g.w0()), g.weight(g.w0()));
    }

    #[test]
    fn a3_delta_uses_top_exponent() {
        // p_{1,w} = v^-4 + v^-2 for w = s2 s1 s3 s2, which is distinguished with a = 2
        let t = tables("A3", &[1, 1, 1], AsymptoticOptions::default());
        let w = t.group().parse_name("2.1.3.2").unwrap();
        assert_eq!(t.delta(w), 2);
        assert_eq!(t.a(w), 2);
        assert_eq!(t.n(w), Some(1));
    }

    #[test]
    fn restricted_scan_agrees_with_full_scan() {
        for (name, w) in [("A3", vec![1, 1, 1]), ("B3", vec![2, 2, 1]), ("G2", vec![3, 1])] {
            let full = tables(name, &w, AsymptoticOptions::default());
            let part = tables(name, &w, AsymptoticOptions { full_table_limit: 0 });
            assert!(!part.is_full());
            assert_eq!(full.a_values(), part.a_values(), "{name}");
            assert_eq!(full.distinguished(), part.distinguished());
            for (x, y) in part.scan_pairs() {
                assert_eq!(full.j_row(x, y), part.j_row(x, y));
            }
        }
    }
}
