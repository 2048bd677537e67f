use std::collections::BTreeSet;

use cell_lab_core::analysis::{Analysis, AnalysisOptions, Precomputed};
use cell_lab_core::cells::AsymptoticOptions;
use cell_lab_core::coxeter::Elem;

fn cell_sizes(an: &Analysis) -> (Vec<usize>, Vec<usize>) {
    let mut left: Vec<usize> = an.cells.left.cells().map(|c| an.cells.left.members(c).len()).collect();
    let mut two: Vec<usize> = an.cells.two_sided.cells().map(|c| an.cells.two_sided.members(c).len()).collect();
    left.sort_unstable();
    two.sort_unstable();
    (left, two)
}

#[test]
fn known_cell_counts() {
    // (left cells, two-sided cell sizes)
    let cases: &[(&str, &[u32], usize, &[usize])] = &[
        ("A3", &[1, 1, 1], 10, &[1, 1, 4, 9, 9]),
        ("B2", &[1, 1], 4, &[1, 1, 6]),
        ("B2", &[2, 1], 6, &[1, 1, 1, 1, 4]),
        ("G2", &[1, 1], 4, &[1, 1, 10]),
        ("B3", &[1, 1, 1], 14, &[1, 1, 9, 9, 14, 14]),
        ("H3", &[1, 1, 1], 22, &[1, 1, 18, 18, 25, 25, 32]),
        ("D4", &[1, 1, 1, 1], 36, &[1, 1, 9, 9, 9, 9, 9, 9, 16, 16, 104]),
    ];
    for &(name, w, n_left, two) in cases {
        let an = Analysis::for_type(name, w).unwrap();
        let (left, sizes) = cell_sizes(&an);
        assert_eq!(left.len(), n_left, "{name} {w:?}");
        assert_eq!(sizes, two, "{name} {w:?}");
        assert!(an.cells.check_invariants(&an.group).passed());
    }
}

#[test]
fn right_cells_are_inverses_of_left_cells() {
    let an = Analysis::for_type("B3", &[2, 2, 1]).unwrap();
    let g = &an.group;
    for x in g.elements() {
        let left: BTreeSet<Elem> =
            an.cells.left.members(an.cells.left.cell_of(x)).iter().map(|&y| g.inverse(y)).collect();
        let right: BTreeSet<Elem> =
            an.cells.right.members(an.cells.right.cell_of(g.inverse(x))).iter().copied().collect();
        assert_eq!(left, right);
    }
}

#[test]
fn identity_and_w0_are_extreme() {
    for (name, w) in [("A3", vec![1, 1, 1]), ("B2", vec![1, 3]), ("D4", vec![1, 1, 1, 1])] {
        let an = Analysis::for_type(name, &w).unwrap();
        let ts = &an.cells.two_sided;
        let (e, w0) = (Elem::IDENTITY, an.group.w0());
        assert_eq!(ts.members(ts.cell_of(e)), [e]);
        assert_eq!(ts.members(ts.cell_of(w0)), [w0]);
        for x in an.group.elements() {
            assert!(ts.leq(w0, x) && ts.leq(x, e), "{name}");
        }
        assert_eq!(an.tables.a(e), 0);
        let l0: u32 = an.group.word(w0).iter().map(|&s| w[s as usize]).sum();
        assert_eq!(an.tables.a(w0), l0);
    }
}

#[test]
fn restricted_tables_match_full_tables() {
    let full = Analysis::for_type("B3", &[1, 1, 1]).unwrap();
    let opts = AnalysisOptions { asymptotic: AsymptoticOptions { full_table_limit: 10 }, ..Default::default() };
    let restricted = Analysis::from_group(full.group.clone(), opts, Precomputed::default());
    assert!(full.tables.is_full() && !restricted.tables.is_full());
    assert_eq!(full.tables.a_values(), restricted.tables.a_values());
    assert_eq!(full.tables.distinguished(), restricted.tables.distinguished());
    let ts = &full.cells.two_sided;
    for x in full.group.elements() {
        for y in full.group.elements().filter(|&y| ts.same(x, y)) {
            assert_eq!(full.tables.j_row(x, y), restricted.tables.j_row(x, y));
        }
    }
}
