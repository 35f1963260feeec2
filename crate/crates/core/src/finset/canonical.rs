//! Canonical labelings of diagrams.
//!
//! A diagram `S1 -> ... -> Sk` is a forest of rooted trees: roots are the
//! elements of `Sk`, and the children of `x ∈ S_{i+1}` are its preimages in
//! `S_i`. Each element gets an isomorphism-invariant code (the sorted codes
//! of its children, ranked per level), and elements are relabeled by
//! `(parent label, code)` from the top level down.

use std::collections::BTreeMap;

use super::diagram::{DiagramIso, FinDiagram};
use super::set::SetMap;

/// Per level, the code of every element. Equal codes at one level mean
/// isomorphic subtrees.
pub(crate) fn subtree_codes(d: &FinDiagram) -> Vec<Vec<usize>> {
    let sizes = d.sizes();
    let mut codes: Vec<Vec<usize>> = Vec::with_capacity(sizes.len());
    for (level, &n) in sizes.iter().enumerate() {
        if level == 0 {
            codes.push(vec![0; n]);
            continue;
        }
        let below = &codes[level - 1];
        let mut keys: Vec<Vec<usize>> = vec![Vec::new(); n];
        for (c, &p) in d.maps()[level - 1].values().iter().enumerate() {
            keys[p].push(below[c]);
        }
        for k in &mut keys {
            k.sort_unstable();
        }
        let mut ranks: BTreeMap<&Vec<usize>, usize> = keys.iter().map(|k| (k, 0)).collect();
        for (i, r) in ranks.values_mut().enumerate() {
            *r = i;
        }
        codes.push(keys.iter().map(|k| ranks[k]).collect());
    }
    codes
}

/// Canonical labels: `labels[level][old] = new`.
pub(crate) fn canonical_labels(d: &FinDiagram) -> Vec<Vec<usize>> {
    let k = d.k();
    if k == 0 {
        return vec![];
    }
    let codes = subtree_codes(d);
    let mut labels: Vec<Vec<usize>> = vec![Vec::new(); k];
    for level in (0..k).rev() {
        let n = codes[level].len();
        let mut order: Vec<usize> = (0..n).collect();
        if level == k - 1 {
            order.sort_by_key(|&e| (codes[level][e], e));
        } else {
            let parent = d.maps()[level].values();
            let up = &labels[level + 1];
            order.sort_by_key(|&e| (up[parent[e]], codes[level][e], e));
        }
        let mut lab = vec![0; n];
        for (new, &old) in order.iter().enumerate() {
            lab[old] = new;
        }
        labels[level] = lab;
    }
    labels
}

/// The canonical representative of the isomorphism class of `d`, together
/// with an isomorphism from `d` to it.
pub fn canonical_labeling(d: &FinDiagram) -> (FinDiagram, DiagramIso) {
    let labels = canonical_labels(d);
    let sizes = d.sizes();
    let values: Vec<Vec<usize>> = d
        .maps()
        .iter()
        .enumerate()
        .map(|(level, m)| {
            let mut v = vec![0; m.dom()];
            for (e, &p) in m.values().iter().enumerate() {
                v[labels[level][e]] = labels[level + 1][p];
            }
            v
        })
        .collect();
    let canon = FinDiagram::from_parts_unchecked(&sizes, values);
    let iso = DiagramIso::from_components(
        labels
            .into_iter()
            .zip(&sizes)
            .map(|(l, &n)| SetMap::new(n, n, l).expect("labels form a bijection"))
            .collect(),
    );
    (canon, iso)
}

/// Isomorphic diagrams have identical canonical forms; the result is
/// idempotent and carries no labels.
pub fn canonical_form(d: &FinDiagram) -> FinDiagram {
    canonical_labeling(d).0
}

/// A witness isomorphism `d1 -> d2`, if one exists.
pub fn are_isomorphic(d1: &FinDiagram, d2: &FinDiagram) -> Option<DiagramIso> {
    if d1.k() != d2.k() {
        return None;
    }
    let (c1, s1) = canonical_labeling(d1);
    let (c2, s2) = canonical_labeling(d2);
    if c1 != c2 {
        return None;
    }
    Some(s1.then(&s2.inverse()).expect("same length"))
}

#[cfg(test)]
mod tests {
    use std::collections::BTreeSet;

    use proptest::prelude::*;

    use super::*;
    use crate::finset::FinSet;

    fn diag(sizes: &[usize], values: &[&[usize]]) -> FinDiagram {
        FinDiagram::from_values(sizes, values).unwrap()
    }

    /// Relabel `d` by the bijections `perms` (one per level).
    fn relabel(d: &FinDiagram, perms: &[SetMap]) -> FinDiagram {
        let sizes = d.sizes();
        let values = d
            .maps()
            .iter()
            .enumerate()
            .map(|(i, m)| {
                let mut v = vec![0; m.dom()];
                for (e, &p) in m.values().iter().enumerate() {
                    v[perms[i].apply(e)] = perms[i + 1].apply(p);
                }
                v
            })
            .collect();
        FinDiagram::from_parts_unchecked(&sizes, values)
    }

    /// The full orbit of `d` under relabeling, by brute force.
    fn orbit(d: &FinDiagram) -> BTreeSet<Vec<Vec<usize>>> {
        let perms: Vec<Vec<SetMap>> = d.sizes().iter().map(|&n| SetMap::permutations(n)).collect();
        let mut out = BTreeSet::new();
        let mut idx = vec![0; perms.len()];
        loop {
            let choice: Vec<SetMap> = idx.iter().zip(&perms).map(|(&i, p)| p[i].clone()).collect();
            out.insert(relabel(d, &choice).sort_key().1);
            let mut level = 0;
            loop {
                if level == idx.len() {
                    return out;
                }
                idx[level] += 1;
                if idx[level] < perms[level].len() {
                    break;
                }
                idx[level] = 0;
                level += 1;
            }
        }
    }

    #[test]
    fn single_set_is_its_own_form() {
        for n in 1..5 {
            let d = FinDiagram::new(
                vec![FinSet::with_labels((0..n).map(|i| format!("e{i}")).collect()).unwrap()],
                vec![],
            )
            .unwrap();
            assert_eq!(canonical_form(&d), FinDiagram::single(n).unwrap());
        }
    }

    #[test]
    fn constant_maps_share_a_form() {
        let a = diag(&[2, 2], &[&[0, 0]]);
        let b = diag(&[2, 2], &[&[1, 1]]);
        assert_eq!(canonical_form(&a), canonical_form(&b));
        assert_eq!(orbit(&a), orbit(&b));
    }

    #[test]
    fn bijections_share_a_form() {
        let a = diag(&[2, 2], &[&[0, 1]]);
        let b = diag(&[2, 2], &[&[1, 0]]);
        assert_eq!(canonical_form(&a), canonical_form(&b));
        assert_ne!(canonical_form(&a), canonical_form(&diag(&[2, 2], &[&[0, 0]])));
    }

    #[test]
    fn iso_witnesses() {
        let a = diag(&[2, 2], &[&[0, 0]]);
        let b = diag(&[2, 2], &[&[1, 1]]);
        assert!(are_isomorphic(&a, &a).unwrap().is_identity());
        let w = are_isomorphic(&a, &b).unwrap();
        assert!(w.is_iso_between(&a, &b));
        assert!(are_isomorphic(&a, &diag(&[2, 2], &[&[0, 1]])).is_none());
        assert!(are_isomorphic(&a, &FinDiagram::single(2).unwrap()).is_none());
    }

    #[test]
    fn canonical_form_agrees_with_orbits_exhaustively() {
        // Two diagrams are in the same relabeling orbit iff their canonical
        // forms agree.
        for (a, b) in [(2, 2), (3, 2), (2, 3), (3, 3)] {
            let all: Vec<FinDiagram> = SetMap::all(a, b)
                .map(|m| diag(&[a, b], &[m.values()]))
                .collect();
            for x in &all {
                let ox = orbit(x);
                for y in &all {
                    let same_orbit = ox.contains(&y.sort_key().1);
                    assert_eq!(same_orbit, canonical_form(x) == canonical_form(y));
                }
            }
        }
    }

    fn arb_diagram() -> impl Strategy<Value = FinDiagram> {
        proptest::collection::vec(1usize..5, 1..4).prop_flat_map(|sizes| {
            let maps: Vec<_> = sizes
                .windows(2)
                .map(|w| proptest::collection::vec(0..w[1], w[0]))
                .collect();
            (Just(sizes), maps)
        })
        .prop_map(|(sizes, maps)| {
            let refs: Vec<&[usize]> = maps.iter().map(Vec::as_slice).collect();
            FinDiagram::from_values(&sizes, &refs).unwrap()
        })
    }

    fn arb_relabeling(d: &FinDiagram) -> impl Strategy<Value = Vec<SetMap>> {
        let strategies: Vec<_> = d
            .sizes()
            .into_iter()
            .map(|n| Just((0..n).collect::<Vec<_>>()).prop_shuffle())
            .collect();
        strategies.prop_map(|vs| {
            vs.into_iter()
                .map(|v| SetMap::new(v.len(), v.len(), v).unwrap())
                .collect()
        })
    }

    proptest! {
        #[test]
        fn invariant_under_relabeling((d, perms) in arb_diagram().prop_flat_map(|d| {
            let r = arb_relabeling(&d);
            (Just(d), r)
        })) {
            let e = relabel(&d, &perms);
            prop_assert_eq!(canonical_form(&d), canonical_form(&e));
            let w = are_isomorphic(&d, &e).unwrap();
            prop_assert!(w.is_iso_between(&d, &e));
        }

        #[test]
        fn idempotent(d in arb_diagram()) {
            let c = canonical_form(&d);
            prop_assert_eq!(canonical_form(&c), c.clone());
            let (_, iso) = canonical_labeling(&d);
            prop_assert!(iso.is_iso_between(&d, &c));
        }
    }
}
