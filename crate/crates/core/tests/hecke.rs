use std::sync::Arc;

use cell_lab_core::coxeter::{CoxeterDatum, CoxeterGroup, Elem};
use cell_lab_core::hecke::{default_kl_strategy, kl_strategies, Basis, HeckeAlgebra, HeckeElement, StructureTable};
use cell_lab_core::laurent::Laurent;
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

fn algebra(name: &str, weights: &[u32]) -> HeckeAlgebra {
    let g = CoxeterGroup::new(CoxeterDatum::from_type(name, weights.to_vec()).unwrap()).unwrap();
    HeckeAlgebra::new(Arc::new(g), default_kl_strategy())
}

const SMALL: &[(&str, &[u32])] = &[
    ("A1", &[2]),
    ("A2", &[1, 1]),
    ("A3", &[1, 1, 1]),
    ("B2", &[1, 1]),
    ("B2", &[2, 1]),
    ("B2", &[1, 3]),
    ("G2", &[1, 2]),
    ("B3", &[2, 2, 1]),
    ("H3", &[1, 1, 1]),
    ("I2(5)", &[1, 1]),
];

fn random_laurent(rng: &mut StdRng) -> Laurent {
    Laurent::from_terms((0..rng.gen_range(1..3)).map(|_| (rng.gen_range(-3..=3), rng.gen_range(-3..=3))))
}

fn random_element(rng: &mut StdRng, g: &CoxeterGroup, basis: Basis) -> HeckeElement {
    let n = g.size() as u32;
    HeckeElement::from_terms(basis, (0..3).map(|_| (Elem(rng.gen_range(0..n)), random_laurent(rng))))
}

#[test]
fn canonical_basis_is_bar_invariant_and_unitriangular() {
    for &(name, w) in SMALL {
        let h = algebra(name, w);
        let g = h.group();
        for x in g.elements() {
            let c = h.kl_element(x);
            assert_eq!(h.bar_involution(&c).unwrap(), c, "{name} {x:?}");
            assert!(c.coeff(x).is_one());
            for (y, p) in c.terms() {
                assert!(g.bruhat_leq(y, x));
                if y != x {
                    assert!(p.in_negative_ideal(), "{name} p_{y:?},{x:?} = {p}");
                }
            }
        }
    }
}

#[test]
fn kl_strategies_agree() {
    for &(name, w) in SMALL {
        let g = Arc::new(CoxeterGroup::new(CoxeterDatum::from_type(name, w.to_vec()).unwrap()).unwrap());
        let bar = cell_lab_core::hecke::bar_table(&g);
        let tables: Vec<_> = kl_strategies().iter().map(|s| s.compute(&g, &bar)).collect();
        for t in &tables[1..] {
            assert_eq!(t, &tables[0], "{name} {w:?}");
        }
    }
}

#[test]
fn dihedral_polynomials_are_monomials() {
    // in a finite dihedral group with equal parameters p_{y,w} = v^{l(y)-l(w)} for y <= w
    for m in 3..=8 {
        let h = algebra(&format!("I2({m})"), &[1, 1]);
        let g = h.group();
        for x in g.elements() {
            for y in g.elements() {
                let expected = if g.bruhat_leq(y, x) {
                    Laurent::v_pow(g.length(y) as i32 - g.length(x) as i32)
                } else {
                    Laurent::zero()
                };
                assert_eq!(h.kl().p(y, x), expected, "I2({m})");
            }
        }
    }
}

#[test]
fn a3_singular_polynomial() {
    let h = algebra("A3", &[1, 1, 1]);
    let g = h.group();
    let x = g.parse_name("2.1.3.2").unwrap();
    assert_eq!(h.kl().p(Elem::IDENTITY, x), Laurent::from_terms([(-4, 1), (-2, 1)]));
    let y = g.parse_name("2").unwrap();
    assert_eq!(h.kl().p(y, x), Laurent::from_terms([(-3, 1), (-1, 1)]));
}

#[test]
fn t_basis_in_terms_of_canonical_basis() {
    // T_x = sum_y (-1)^{l(x)+l(y)} p_{w0 x, w0 y} c_y
    for &(name, w) in SMALL {
        let h = algebra(name, w);
        let g = h.group();
        let w0 = g.w0();
        for x in g.elements() {
            let tx = HeckeElement::basis_element(Basis::T, x);
            let expected = HeckeElement::from_terms(
                Basis::C,
                g.elements().map(|y| {
                    let sign = if (g.length(x) + g.length(y)) % 2 == 0 { 1 } else { -1 };
                    (y, h.kl().p(g.product(w0, x), g.product(w0, y)).scale(sign))
                }),
            );
            assert_eq!(h.expand_in_c(&tx).unwrap(), expected, "{name} {w:?} {x:?}");
        }
    }
}

#[test]
fn conversions_round_trip() {
    let mut rng = StdRng::seed_from_u64(7);
    for &(name, w) in SMALL {
        let h = algebra(name, w);
        let g = h.group();
        for _ in 0..20 {
            for basis in [Basis::T, Basis::C, Basis::CSharp] {
                let a = random_element(&mut rng, g, basis);
                for other in [Basis::T, Basis::C, Basis::CSharp] {
                    assert_eq!(h.convert(&h.convert(&a, other), basis), a);
                }
            }
        }
    }
}

#[test]
fn multiplication_is_associative_and_maps_are_compatible() {
    let mut rng = StdRng::seed_from_u64(11);
    for &(name, w) in SMALL {
        let h = algebra(name, w);
        let g = h.group();
        let w0 = HeckeElement::basis_element(Basis::T, g.w0());
        let w0_inv = h.t_inverse(g.w0());
        for _ in 0..10 {
            let a = random_element(&mut rng, g, Basis::T);
            let b = random_element(&mut rng, g, Basis::T);
            let c = random_element(&mut rng, g, Basis::T);
            let ab = h.t_multiply(&a, &b).unwrap();
            let bc = h.t_multiply(&b, &c).unwrap();
            assert_eq!(h.t_multiply(&ab, &c).unwrap(), h.t_multiply(&a, &bc).unwrap());

            let bar = |x: &HeckeElement| h.bar_involution(x).unwrap();
            assert_eq!(bar(&ab), h.t_multiply(&bar(&a), &bar(&b)).unwrap());
            assert_eq!(bar(&bar(&a)), a);
            assert_eq!(h.dagger(&ab), h.t_multiply(&h.dagger(&a), &h.dagger(&b)).unwrap());
            assert_eq!(h.dagger(&h.dagger(&a)), a);
            assert_eq!(h.flat(&ab), h.t_multiply(&h.flat(&b), &h.flat(&a)).unwrap());

            let conj = h.t_multiply(&h.t_multiply(&w0, &a).unwrap(), &w0_inv).unwrap();
            assert_eq!(h.sigma(&a), conj);
            assert_eq!(h.t_left_multiply(g.w0(), &a).unwrap(), h.t_multiply(&w0, &a).unwrap());
        }
    }
}

#[test]
fn twisted_basis_is_signed_unitriangular() {
    for &(name, w) in SMALL {
        let h = algebra(name, w);
        let g = h.group();
        for x in g.elements() {
            let c = h.csharp_element(x);
            let sign = if g.length(x) % 2 == 0 { 1 } else { -1 };
            assert_eq!(c.coeff(x), Laurent::constant(sign));
            assert!(c.support().all(|y| g.bruhat_leq(y, x)));
            assert_eq!(c, h.dagger(&h.kl_element(x)));
            assert_eq!(h.bar_involution(&c).unwrap(), c);
        }
    }
}

#[test]
fn twisted_products_share_structure_constants() {
    let h = Arc::new(algebra("B2", &[2, 1]));
    let st = StructureTable::new(h.clone());
    let g = h.group();
    for x in g.elements() {
        for y in g.elements() {
            let prod = h
                .t_multiply(&h.csharp_element(x), &h.csharp_element(y))
                .map(|p| h.expand_in_cdagger(&p).unwrap())
                .unwrap();
            for z in g.elements() {
                assert_eq!(prod.coeff(z), st.h(x, y, z));
            }
        }
    }
}

#[test]
fn prefilled_products_match_direct_products() {
    for &(name, w) in SMALL {
        let h = Arc::new(algebra(name, w));
        let g = h.group().clone();
        let st = StructureTable::new(h.clone());
        let ys: Vec<Elem> = g.elements().collect();
        st.prefill(&ys, |x, y| (x.0 + y.0) % 2 == 0);
        for x in g.elements() {
            for y in g.elements() {
                assert_eq!(st.is_filled(x, y), (x.0 + y.0) % 2 == 0);
                let direct = h.c_product_direct(x, y);
                let stored = st.product(x, y);
                let got = HeckeElement::from_terms(Basis::C, stored.iter().cloned());
                assert_eq!(got, direct, "{name} {w:?}");
            }
        }
    }
}

#[test]
fn structure_constants_are_sigma_and_flat_symmetric() {
    for &(name, w) in &SMALL[..7] {
        let h = Arc::new(algebra(name, w));
        let st = StructureTable::new(h.clone());
        let g = h.group();
        for x in g.elements() {
            for y in g.elements() {
                for z in g.elements() {
                    let v = st.h(x, y, z);
                    assert_eq!(v, st.h(g.sigma(x), g.sigma(y), g.sigma(z)));
                    assert_eq!(v, st.h(g.inverse(y), g.inverse(x), g.inverse(z)));
                    assert!(v.is_bar_invariant());
                }
            }
        }
    }
}
