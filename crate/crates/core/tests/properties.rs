use proptest::prelude::*;

use motivic_core::finset::{are_isomorphic, automorphism_group, canonical_form, enumerate_diagrams};
use motivic_core::galois::verify_descent;
use motivic_core::monad::{assemble, disassemble};
use motivic_core::resolution::Tower;
use motivic_core::{ChainComplex, FinDiagram, FiniteGroup, GSet, MultisetOfDiagrams, QMatrix, Rational, SetMap};

fn arb_diagram(k: usize, max: usize) -> impl Strategy<Value = FinDiagram> {
    proptest::collection::vec(1..=max, k)
        .prop_flat_map(|sizes| {
            let maps: Vec<_> = sizes
                .windows(2)
                .map(|w| proptest::collection::vec(0..w[1], w[0]))
                .collect();
            (Just(sizes), maps)
        })
        .prop_map(|(sizes, maps)| FinDiagram::block(&sizes, &maps).unwrap())
}

fn relabel(d: &FinDiagram, seeds: &[usize]) -> FinDiagram {
    let sizes = d.sizes();
    let perms: Vec<SetMap> = sizes
        .iter()
        .zip(seeds)
        .map(|(&n, &s)| {
            let all = SetMap::permutations(n);
            all[s % all.len()].clone()
        })
        .collect();
    let maps: Vec<Vec<usize>> = d
        .maps()
        .iter()
        .enumerate()
        .map(|(i, f)| {
            let inv = perms[i].inverse().unwrap();
            (0..f.dom()).map(|x| perms[i + 1].apply(f.apply(inv.apply(x)))).collect()
        })
        .collect();
    FinDiagram::block(&sizes, &maps).unwrap()
}

fn arb_matrix(max: usize) -> impl Strategy<Value = QMatrix> {
    (1..=max, 1..=max).prop_flat_map(|(r, c)| {
        proptest::collection::vec((-4i64..=4, 1i64..=3), r * c).prop_map(move |v| {
            let mut it = v.into_iter();
            QMatrix::from_fn(r, c, |_, _| {
                let (p, q) = it.next().unwrap();
                Rational::new(p.into(), q.into())
            })
        })
    })
}

fn factorial(n: usize) -> u64 {
    (1..=n as u64).product()
}

#[test]
fn orbit_counting_recovers_all_maps() {
    for a in 1..=3 {
        for b in 1..=3 {
            let total: u64 = enumerate_diagrams(2, &[a, b])
                .iter()
                .filter(|d| d.sizes() == vec![a, b])
                .map(|d| factorial(a) * factorial(b) / automorphism_group(d).order)
                .sum();
            assert_eq!(total, (b as u64).pow(a as u32), "a={a} b={b}");
        }
    }
}

#[test]
fn descent_on_four_point_carriers() {
    for g in [FiniteGroup::cyclic(2), FiniteGroup::klein_four()] {
        let four = GSet::all_actions(&g, 4).unwrap();
        let small: Vec<GSet> = (1..=2).flat_map(|n| GSet::all_actions(&g, n).unwrap()).collect();
        for a in &four {
            for b in &small {
                assert!(verify_descent(a, b).unwrap().pass);
                assert!(verify_descent(b, a).unwrap().pass);
            }
        }
    }
}

#[test]
fn equalizer_is_stable_in_the_bound() {
    for x in 1..=3 {
        for y in 1..=3 {
            let two = Tower::artin(x, y, 2).unwrap().equalizer().unwrap();
            let three = Tower::artin(x, y, 3).unwrap().equalizer().unwrap();
            assert_eq!(two, three);
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn iso_witness_iff_same_canonical_form(d1 in arb_diagram(3, 3), d2 in arb_diagram(3, 3), seeds in proptest::collection::vec(0usize..720, 3)) {
        let same = canonical_form(&d1) == canonical_form(&d2);
        match are_isomorphic(&d1, &d2) {
            Some(w) => {
                prop_assert!(same);
                prop_assert!(w.is_iso_between(&d1, &d2));
            }
            None => prop_assert!(!same),
        }
        let r = relabel(&d1, &seeds);
        let w = are_isomorphic(&d1, &r);
        prop_assert!(w.is_some_and(|w| w.is_iso_between(&d1, &r)));
    }

    #[test]
    fn aut_order_divides_factorials(d in arb_diagram(3, 4)) {
        let bound: u64 = d.sizes().iter().map(|&n| factorial(n)).product();
        prop_assert_eq!(bound % automorphism_group(&d).order, 0);
    }

    #[test]
    fn kron_is_associative(a in arb_matrix(3), b in arb_matrix(3), c in arb_matrix(2)) {
        prop_assert_eq!(a.kron(&b).kron(&c), a.kron(&b.kron(&c)));
    }

    #[test]
    fn euler_characteristic_of_homology(m in arb_matrix(4), k in arb_matrix(3)) {
        // d1 = m, d2 spans part of ker m, so d1 d2 = 0
        let basis = m.kernel_basis();
        let d2 = if basis.cols() == 0 {
            QMatrix::zeros(m.cols(), 1)
        } else {
            let mut coeff = QMatrix::zeros(basis.cols(), k.cols());
            for i in 0..basis.cols().min(k.rows()) {
                for j in 0..k.cols() {
                    coeff.set(i, j, k.get(i, j).clone());
                }
            }
            &basis * &coeff
        };
        let c = ChainComplex::new(0, vec![m.rows(), m.cols(), d2.cols()], vec![(1, m.clone()), (2, d2)]).unwrap();
        prop_assert!(c.is_valid());
        let from_homology: i64 = c
            .homology_dims()
            .iter()
            .map(|(&n, &h)| if n % 2 == 0 { h as i64 } else { -(h as i64) })
            .sum();
        prop_assert_eq!(c.euler_characteristic(), from_homology);
    }

    #[test]
    fn assembly_respects_isomorphism(blocks in proptest::collection::vec(arb_diagram(2, 2), 1..=3), seeds in proptest::collection::vec(0usize..6, 2), flip in any::<bool>()) {
        let m = MultisetOfDiagrams::new(2, blocks.clone()).unwrap();
        let mut moved: Vec<FinDiagram> = blocks.iter().map(|b| relabel(b, &seeds)).collect();
        if flip {
            moved.reverse();
        }
        let m2 = MultisetOfDiagrams::new(2, moved).unwrap();
        let (d1, d2) = (assemble(&m).unwrap(), assemble(&m2).unwrap());
        prop_assert!(are_isomorphic(&d1, &d2).is_some());
        prop_assert_eq!(assemble(&disassemble(&d1).unwrap()).unwrap(), d1);
    }

    #[test]
    fn cofaces_are_fixed_and_cosimplicial(x in 1usize..=2, y in 1usize..=2, v in proptest::collection::vec(-3i64..=3, 4)) {
        let t = Tower::artin(x, y, 2).unwrap();
        let f = QMatrix::from_ints(x, y, &v[..x * y]).unwrap();
        let d: Vec<Vec<QMatrix>> = (0..2).map(|i| t.coface0(i, &f).unwrap()).collect();
        for g in &d {
            for (m, c) in g.iter().zip(&t.level(1).components) {
                prop_assert!(c.is_fixed(m));
            }
            prop_assert_eq!(&t.codegeneracy1(g).unwrap(), &f);
        }
        let dd = |j: usize, i: usize| t.coface1(j, &d[i]).unwrap();
        for (j, i) in [(0, 0), (1, 0), (2, 0), (0, 1), (1, 1), (2, 1)] {
            for (m, c) in dd(j, i).iter().zip(&t.level(2).components) {
                prop_assert!(c.is_fixed(m));
            }
        }
        prop_assert_eq!(dd(1, 0), dd(0, 0));
        prop_assert_eq!(dd(2, 0), dd(0, 1));
        prop_assert_eq!(dd(2, 1), dd(1, 1));
        // f equalizes exactly when it is a transposed graph
        let equal = d[0] == d[1];
        let graph = v[..x * y].chunks(y).all(|r| r.iter().filter(|&&e| e == 1).count() == 1 && r.iter().all(|&e| e == 0 || e == 1));
        prop_assert_eq!(equal, graph);
    }
}
