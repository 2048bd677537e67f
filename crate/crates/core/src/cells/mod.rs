//! Left, right and two-sided cells, the a-function, the constants `gamma`,
//! and the distinguished involutions.

mod asymptotic;
mod checks;

use fixedbitset::FixedBitSet;
use petgraph::algo::tarjan_scc;
use petgraph::graph::{DiGraph, NodeIndex};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::coxeter::{CoxeterGroup, Elem};
use crate::hecke::StructureTable;

pub use asymptotic::{AsymptoticOptions, AsymptoticTables, JRow, DEFAULT_FULL_TABLE_LIMIT};
pub use checks::check_p_consequences;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CellsError {
    #[error("inconsistent asymptotic data: {0}")]
    InconsistentAsymptotics(String),
    #[error("the left cell of {0} contains no distinguished involution")]
    NotFound(String),
    #[error("the left cell of {0} contains {1} distinguished involutions")]
    NotUnique(String, usize),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct CellId(pub u32);

impl CellId {
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

/// A partition of W into the classes of a preorder, with the induced order
/// on classes. Cells are numbered by their least element, so the canonical
/// representative of a cell is its first member.
#[derive(Debug, Clone)]
pub struct Partition {
    cell_of: Vec<CellId>,
    members: Vec<Vec<Elem>>,
    /// Edges `c -> c'` with `c' < c` coming from single generator steps.
    dag: Vec<Vec<CellId>>,
    /// `below[c]` holds every `c'` with `c' <= c`.
    below: Vec<FixedBitSet>,
}

impl Partition {
    /// `lower(x)` lists elements `z` with `z <= x` in one step.
    fn from_edges(n: usize, lower: impl Fn(Elem) -> Vec<Elem>) -> Self {
        let mut graph = DiGraph::<(), ()>::with_capacity(n, n * 4);
        for _ in 0..n {
            graph.add_node(());
        }
        for x in 0..n {
            for z in lower(Elem(x as u32)) {
                if z.index() != x {
                    graph.update_edge(NodeIndex::new(x), NodeIndex::new(z.index()), ());
                }
            }
        }
        let mut sccs = tarjan_scc(&graph);
        for scc in &mut sccs {
            scc.sort();
        }
        // sccs come lowest first (reverse topological order); renumber by least member
        let mut order: Vec<usize> = (0..sccs.len()).collect();
        order.sort_by_key(|&i| sccs[i][0]);
        let mut rank = vec![0; sccs.len()];
        for (new, &old) in order.iter().enumerate() {
            rank[old] = new;
        }
        let mut cell_of = vec![CellId(0); n];
        let mut members = vec![Vec::new(); sccs.len()];
        for (old, scc) in sccs.iter().enumerate() {
            let id = CellId(rank[old] as u32);
            for v in scc {
                cell_of[v.index()] = id;
            }
            members[id.index()] = scc.iter().map(|v| Elem(v.index() as u32)).collect();
        }
        let mut dag: Vec<Vec<CellId>> = vec![Vec::new(); sccs.len()];
        for e in graph.raw_edges() {
            let (a, b) = (cell_of[e.source().index()], cell_of[e.target().index()]);
            if a != b {
                dag[a.index()].push(b);
            }
        }
        for d in &mut dag {
            d.sort();
            d.dedup();
        }
        let mut below = vec![FixedBitSet::with_capacity(sccs.len()); sccs.len()];
        for &c in &rank {
            let mut set = FixedBitSet::with_capacity(sccs.len());
            set.insert(c);
            for &b in &dag[c] {
                set.union_with(&below[b.index()]);
            }
            below[c] = set;
        }
        Self { cell_of, members, dag, below }
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn cell_of(&self, x: Elem) -> CellId {
        self.cell_of[x.index()]
    }

    pub fn members(&self, c: CellId) -> &[Elem] {
        &self.members[c.index()]
    }

    pub fn representative(&self, c: CellId) -> Elem {
        self.members[c.index()][0]
    }

    pub fn cells(&self) -> impl Iterator<Item = CellId> {
        (0..self.members.len() as u32).map(CellId)
    }

    pub fn same(&self, x: Elem, y: Elem) -> bool {
        self.cell_of(x) == self.cell_of(y)
    }

    /// Cells directly below `c` in the preorder graph.
    pub fn dag_edges(&self, c: CellId) -> &[CellId] {
        &self.dag[c.index()]
    }

    /// `c <= d` in the induced order on cells.
    pub fn cell_leq(&self, c: CellId, d: CellId) -> bool {
        self.below[d.index()].contains(c.index())
    }

    /// `x <= y` in the preorder.
    pub fn leq(&self, x: Elem, y: Elem) -> bool {
        self.cell_leq(self.cell_of(x), self.cell_of(y))
    }
}

/// The three cell partitions of W.
#[derive(Debug, Clone)]
pub struct CellDecomposition {
    pub left: Partition,
    pub right: Partition,
    pub two_sided: Partition,
}

impl CellDecomposition {
    /// `z <=_L x` is generated by `h_{s,x,z} != 0`; right cells come from
    /// inverses, two-sided cells from both.
    pub fn compute(table: &StructureTable) -> Self {
        let g = table.hecke().group();
        let n = g.size();
        let left_lower = |x: Elem| -> Vec<Elem> {
            (0..g.rank()).flat_map(|s| table.left_cs(s, x).iter().map(|(z, _)| *z)).collect()
        };
        let right_lower =
            |x: Elem| -> Vec<Elem> { left_lower(g.inverse(x)).into_iter().map(|z| g.inverse(z)).collect() };
        let left = Partition::from_edges(n, left_lower);
        let right = Partition::from_edges(n, right_lower);
        let two_sided = Partition::from_edges(n, |x| {
            let mut v = left_lower(x);
            v.extend(right_lower(x));
            v
        });
        Self { left, right, two_sided }
    }

    /// Checks the structural invariants of the decomposition: right cells are
    /// inverses of left cells, two-sided cells are unions of one-sided ones,
    /// `sigma` and `x -> w0 x` permute two-sided cells, and `c` and `w0 c`
    /// contain the same number of left cells.
    pub fn check_invariants(&self, g: &CoxeterGroup) -> crate::report::Findings {
        let mut f = crate::report::Findings::new("cell invariants");
        for x in g.elements() {
            for y in g.elements() {
                let (xi, yi) = (g.inverse(x), g.inverse(y));
                f.check(self.right.same(x, y) == self.left.same(xi, yi), || {
                    format!("right cells of {} and {} disagree with left cells of inverses", g.name(x), g.name(y))
                });
                if self.left.same(x, y) || self.right.same(x, y) {
                    f.check(self.two_sided.same(x, y), || {
                        format!("{} and {} share a one-sided cell but not a two-sided one", g.name(x), g.name(y))
                    });
                }
            }
        }
        let w0 = g.w0();
        for c in self.two_sided.cells() {
            let members = self.two_sided.members(c);
            let rep = members[0];
            for &x in members {
                f.check(self.two_sided.same(g.sigma(x), rep), || format!("sigma moves {} out of its cell", g.name(x)));
            }
            let image = self.two_sided.cell_of(g.product(w0, rep));
            let image_members = self.two_sided.members(image);
            f.check(image_members.len() == members.len(), || {
                format!("w0 times the cell of {} is not a cell", g.name(rep))
            });
            for &x in members {
                f.check(self.two_sided.cell_of(g.product(w0, x)) == image, || {
                    format!("w0 times the cell of {} is not a cell", g.name(rep))
                });
            }
            let count = |cell: CellId| {
                let mut ids: Vec<CellId> = self.two_sided.members(cell).iter().map(|&x| self.left.cell_of(x)).collect();
                ids.sort();
                ids.dedup();
                ids.len()
            };
            f.check(count(c) == count(image), || {
                format!("the cell of {} and its w0-translate have different numbers of left cells", g.name(rep))
            });
        }
        f
    }
}

#[cfg(test)]
mod tests {
    use std::sync::Arc;

    use super::*;
    use crate::coxeter::CoxeterDatum;
    use crate::hecke::{default_kl_strategy, HeckeAlgebra};

    fn cells(name: &str, weights: &[u32]) -> (Arc<CoxeterGroup>, CellDecomposition) {
        let g = Arc::new(CoxeterGroup::new(CoxeterDatum::from_type(name, weights.to_vec()).unwrap()).unwrap());
        let h = Arc::new(HeckeAlgebra::new(g.clone(), default_kl_strategy()));
        let st = StructureTable::new(h);
        (g, CellDecomposition::compute(&st))
    }

    fn names(g: &CoxeterGroup, xs: &[Elem]) -> Vec<String> {
        xs.iter().map(|&x| g.name(x)).collect()
    }

    #[test]
    fn a1_cells() {
        let (g, c) = cells("A1", &[1]);
        assert_eq!(c.two_sided.len(), 2);
        assert_eq!(names(&g, c.two_sided.members(CellId(0))), [""]);
        assert_eq!(names(&g, c.two_sided.members(CellId(1))), ["1"]);
        // e is the top of the order
        assert!(c.two_sided.cell_leq(CellId(1), CellId(0)));
        assert!(!c.two_sided.cell_leq(CellId(0), CellId(1)));
    }

    #[test]
    fn a2_cells() {
        let (g, c) = cells("A2", &[1, 1]);
        let sizes: Vec<_> = c.two_sided.cells().map(|id| c.two_sided.members(id).len()).collect();
        assert_eq!(sizes, [1, 4, 1]);
        let left: Vec<_> = c.left.cells().map(|id| names(&g, c.left.members(id))).collect();
        assert_eq!(left, vec![vec![""], vec!["1", "2.1"], vec!["2", "1.2"], vec!["1.2.1"]]);
        let right: Vec<_> = c.right.cells().map(|id| names(&g, c.right.members(id))).collect();
        assert_eq!(right, vec![vec![""], vec!["1", "1.2"], vec!["2", "2.1"], vec!["1.2.1"]]);
        assert!(c.two_sided.leq(g.w0(), Elem::IDENTITY));
        assert_eq!(c.two_sided.dag_edges(CellId(0)), [CellId(1)]);
        assert!(c.check_invariants(&g).passed());
    }

    #[test]
    fn b2_unequal_cells() {
        let (g, c) = cells("B2", &[2, 1]);
        let two: Vec<_> = c.two_sided.cells().map(|id| names(&g, c.two_sided.members(id))).collect();
        assert_eq!(two, vec![vec![""], vec!["1", "1.2", "2.1", "2.1.2"], vec!["2"], vec!["1.2.1"], vec!["1.2.1.2"]]);
        assert!(c.check_invariants(&g).passed());
    }
}
