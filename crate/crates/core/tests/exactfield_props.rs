//! Lattice operations checked against explicit enumeration of subspace
//! elements over tiny fields.

use std::collections::BTreeSet;

use proptest::prelude::*;
use rectdec_core::exactfield::{
    complement_within, preimage, pushforward, FieldSpec, Matrix, Subspace,
};

type Elems = BTreeSet<Vec<u32>>;

fn all_vectors(p: u32, n: usize) -> Vec<Vec<u32>> {
    let mut out = vec![vec![]];
    for _ in 0..n {
        out = out
            .into_iter()
            .flat_map(|v| {
                (0..p).map(move |x| {
                    let mut w = v.clone();
                    w.push(x);
                    w
                })
            })
            .collect();
    }
    out
}

fn elements(s: &Subspace) -> Elems {
    let f = s.field();
    let n = s.ambient_dim();
    all_vectors(f.p(), s.dim())
        .into_iter()
        .map(|c| {
            s.basis().iter().zip(&c).fold(vec![0; n], |acc, (b, &k)| {
                acc.iter().zip(b).map(|(&a, &x)| f.add(a, f.mul(k, x))).collect()
            })
        })
        .collect()
}

fn from_elements(f: FieldSpec, n: usize, e: &Elems) -> Subspace {
    Subspace::span(f, n, e.iter().cloned())
}

fn field() -> impl Strategy<Value = FieldSpec> {
    prop::sample::select(vec![2u32, 3, 5]).prop_map(|p| FieldSpec::new(p).unwrap())
}

fn gens(p: u32, n: usize) -> impl Strategy<Value = Vec<Vec<u32>>> {
    prop::collection::vec(prop::collection::vec(0..p, n), 0..=n)
}

fn setup() -> impl Strategy<Value = (FieldSpec, usize, Vec<Vec<u32>>, Vec<Vec<u32>>)> {
    (field(), 1usize..=4).prop_flat_map(|(f, n)| {
        (Just(f), Just(n), gens(f.p(), n), gens(f.p(), n))
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn sum_and_intersection_match_enumeration((f, n, a, b) in setup()) {
        let sa = Subspace::span(f, n, a);
        let sb = Subspace::span(f, n, b);
        let ea = elements(&sa);
        let eb = elements(&sb);
        let sum: Elems = ea.iter().flat_map(|x| eb.iter().map(move |y| {
            x.iter().zip(y).map(|(&u, &v)| f.add(u, v)).collect::<Vec<_>>()
        })).collect();
        let cap: Elems = ea.intersection(&eb).cloned().collect();
        prop_assert_eq!(elements(&sa.sum(&sb).unwrap()), sum);
        prop_assert_eq!(elements(&sa.intersection(&sb).unwrap()), cap.clone());
        prop_assert_eq!(sa.contains(&sb).unwrap(), eb.is_subset(&ea));
        // canonicity: rebuilding from the full element set gives the same basis
        prop_assert_eq!(from_elements(f, n, &cap), sa.intersection(&sb).unwrap());
    }

    #[test]
    fn modular_dimension_formula((f, n, a, b) in setup()) {
        let sa = Subspace::span(f, n, a);
        let sb = Subspace::span(f, n, b);
        let s = sa.sum(&sb).unwrap().dim();
        let c = sa.intersection(&sb).unwrap().dim();
        prop_assert_eq!(s + c, sa.dim() + sb.dim());
    }

    #[test]
    fn canonical_form_is_basis_independent((f, n, a, _b) in setup(), seed in 1u32..50) {
        let s = Subspace::span(f, n, a.clone());
        // recombine generators: v_i + seed·v_{i+1}
        let mixed: Vec<Vec<u32>> = (0..a.len()).map(|i| {
            let next = &a[(i + 1) % a.len()];
            a[i].iter().zip(next).map(|(&u, &v)| f.add(u, f.mul(seed % f.p(), v))).collect()
        }).collect();
        let t = Subspace::span(f, n, mixed.into_iter().chain(s.basis().iter().cloned()));
        prop_assert_eq!(s, t);
    }

    #[test]
    fn preimage_and_pushforward_match_enumeration(
        (f, n, m_rows, s, d) in (field(), 1usize..=3, 1usize..=3).prop_flat_map(|(f, n, r)| {
            (Just(f), Just(n), prop::collection::vec(prop::collection::vec(0..f.p(), n), r), gens(f.p(), r), gens(f.p(), n))
        })
    ) {
        let r = m_rows.len();
        let m = Matrix::from_fn(f, r, n, |i, j| m_rows[i][j]);
        let target = Subspace::span(f, r, s);
        let et = elements(&target);
        let pre: Elems = all_vectors(f.p(), n).into_iter().filter(|v| et.contains(&m.apply(v))).collect();
        prop_assert_eq!(elements(&preimage(&m, &target).unwrap()), pre);
        let domain = Subspace::span(f, n, d);
        let push: Elems = elements(&domain).iter().map(|v| m.apply(v)).collect();
        prop_assert_eq!(elements(&pushforward(&m, &domain).unwrap()), push);
    }

    #[test]
    fn complement_postconditions((f, n, a, b) in setup(), c in prop::collection::vec(prop::collection::vec(0u32..5, 4), 0..=4)) {
        let outer = Subspace::span(f, n, a.iter().chain(&b).cloned());
        let inner = Subspace::span(f, n, a);
        let constraint = Subspace::span(f, n, c.into_iter().map(|v| v[..n].iter().map(|x| x % f.p()).collect()));
        let cand = outer.intersection(&constraint).unwrap();
        let ok = inner.sum(&cand).unwrap() == outer;
        match complement_within(&inner, &outer, &constraint) {
            Ok(w) => {
                prop_assert!(ok);
                prop_assert!(cand.contains(&w).unwrap());
                prop_assert!(w.intersection(&inner).unwrap().is_zero());
                prop_assert_eq!(w.sum(&inner).unwrap(), outer);
            }
            Err(_) => prop_assert!(!ok),
        }
    }

    #[test]
    fn intersection_distributes_over_direct_sums(
        (f, n1, n2, a1, b1, a2, b2) in (field(), 1usize..=3, 1usize..=3).prop_flat_map(|(f, n1, n2)| {
            (Just(f), Just(n1), Just(n2), gens(f.p(), n1), gens(f.p(), n1), gens(f.p(), n2), gens(f.p(), n2))
        })
    ) {
        let s = |n, g| Subspace::span(f, n, g);
        let (a1, b1, a2, b2) = (s(n1, a1), s(n1, b1), s(n2, a2), s(n2, b2));
        let lhs = a1.direct_sum(&a2).intersection(&b1.direct_sum(&b2)).unwrap();
        let rhs = a1.intersection(&b1).unwrap().direct_sum(&a2.intersection(&b2).unwrap());
        prop_assert_eq!(lhs, rhs);
    }
}

#[test]
fn full_and_zero_spaces() {
    let f = FieldSpec::new(3).unwrap();
    assert_eq!(elements(&Subspace::full(f, 2)).len(), 9);
    assert_eq!(elements(&Subspace::zero(f, 2)).len(), 1);
}
