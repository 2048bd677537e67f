use super::AsymptoticTables;
use crate::coxeter::Elem;
use crate::report::Findings;

/// Empirical checks of the consequences of P1-P15 used later, plus the
/// consistency of the asymptotic data itself. One entry per property.
pub fn check_p_consequences(t: &AsymptoticTables) -> Vec<Findings> {
    let g = t.group().clone();
    let cells = t.cells().clone();
    let name = |x: Elem| format!("[{}]", g.name(x));
    let pairs = t.scan_pairs();
    t.warm(&pairs);

    let mut bound = Findings::new("a-bound");
    for x in g.elements() {
        for y in g.elements() {
            if !t.structure().is_filled(x, y) {
                continue;
            }
            for (z, h) in t.structure().product(x, y).iter() {
                let deg = h.degree().unwrap_or(0);
                bound.check(deg <= t.a(*z) as i32, || {
                    format!("deg h({}, {}, {}) = {deg} exceeds a = {}", name(x), name(y), name(*z), t.a(*z))
                });
            }
        }
    }
    for c in cells.two_sided.cells() {
        let a = t.a_of_cell(c);
        for &x in cells.two_sided.members(c) {
            bound.check(t.a(x) == a, || format!("a is not constant on the cell of {}", name(x)));
        }
    }

    let mut p1 = Findings::new("P1");
    for z in g.elements() {
        p1.check(t.a(z) <= t.delta(z), || format!("a({}) = {} > Delta = {}", name(z), t.a(z), t.delta(z)));
    }

    let mut p2 = Findings::new("P2");
    let mut p7 = Findings::new("P7");
    let mut p8 = Findings::new("P8");
    let left = &cells.left;
    for &(x, y) in &pairs {
        for &(w, c) in t.j_row(x, y).iter() {
            // c = gamma_{x,y,z} with z = w^-1
            let z = g.inverse(w);
            if t.is_distinguished(z) {
                p2.check(x == g.inverse(y), || {
                    format!("gamma({}, {}, {}) = {c} with {} distinguished", name(x), name(y), name(z), name(z))
                });
            }
            p7.check(t.gamma(y, z, x) == c, || {
                format!(
                    "gamma({}, {}, {}) = {c} but gamma({}, {}, {}) = {}",
                    name(x),
                    name(y),
                    name(z),
                    name(y),
                    name(z),
                    name(x),
                    t.gamma(y, z, x)
                )
            });
            let ok = left.same(x, g.inverse(y)) && left.same(y, g.inverse(z)) && left.same(z, g.inverse(x));
            p8.check(ok, || format!("gamma({}, {}, {}) = {c} across left cells", name(x), name(y), name(z)));
        }
    }

    let mut p4 = Findings::new("P4");
    let ts = &cells.two_sided;
    for c in ts.cells() {
        for d in ts.cells() {
            if ts.cell_leq(c, d) {
                p4.check(t.a_of_cell(c) >= t.a_of_cell(d), || {
                    format!(
                        "cell of {} lies below cell of {} but a = {} < {}",
                        name(ts.representative(c)),
                        name(ts.representative(d)),
                        t.a_of_cell(c),
                        t.a_of_cell(d)
                    )
                });
            }
        }
    }

    let mut p13 = Findings::new("P13");
    for c in left.cells() {
        let rep = left.representative(c);
        p13.check(t.d_of(rep).is_ok(), || t.d_of(rep).unwrap_err().to_string());
    }

    let mut signs = Findings::new("n_d = gamma_ddd");
    for &(d, n) in t.distinguished() {
        signs.check(n == 1 || n == -1, || format!("n({}) = {n} is not a sign", name(d)));
        signs.check(t.gamma(d, d, d) == n, || format!("n({}) = {n} but gamma_ddd = {}", name(d), t.gamma(d, d, d)));
    }

    vec![bound, p1, p2, p4, p7, p8, p13, signs]
}
