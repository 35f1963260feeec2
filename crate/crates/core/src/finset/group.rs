use std::collections::{HashSet, VecDeque};

use serde::{Deserialize, Serialize};

use super::canonical::subtree_codes;
use super::diagram::{DiagramIso, FinDiagram};
use super::set::SetMap;

/// Automorphism group of one diagram, given by generators. `order` is the
/// size of the generated group, computed by closure.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PermGroup {
    pub order: u64,
    pub degrees: Vec<usize>,
    pub generators: Vec<DiagramIso>,
}

impl PermGroup {
    /// All group elements, by breadth-first closure over the generators.
    pub fn elements(&self) -> Vec<DiagramIso> {
        closure(&self.degrees, &self.generators)
    }
}

fn closure(degrees: &[usize], generators: &[DiagramIso]) -> Vec<DiagramIso> {
    let identity: Vec<Vec<usize>> = degrees.iter().map(|&n| (0..n).collect()).collect();
    let gens: Vec<Vec<Vec<usize>>> = generators
        .iter()
        .map(|g| g.components().iter().map(|c| c.values().to_vec()).collect())
        .collect();
    let mut seen: HashSet<Vec<Vec<usize>>> = HashSet::from([identity.clone()]);
    let mut order = vec![identity.clone()];
    let mut queue = VecDeque::from([identity]);
    while let Some(x) = queue.pop_front() {
        for g in &gens {
            // g ∘ x, levelwise
            let y: Vec<Vec<usize>> = x
                .iter()
                .zip(g)
                .map(|(xs, gs)| xs.iter().map(|&v| gs[v]).collect())
                .collect();
            if seen.insert(y.clone()) {
                order.push(y.clone());
                queue.push_back(y);
            }
        }
    }
    order
        .into_iter()
        .map(|levels| {
            DiagramIso::from_components(
                levels
                    .into_iter()
                    .map(|v| SetMap::new(v.len(), v.len(), v).expect("permutation"))
                    .collect(),
            )
        })
        .collect()
}

/// Children of `x` at `level`, sorted by (code, index).
fn children(d: &FinDiagram, codes: &[Vec<usize>], level: usize, x: usize) -> Vec<usize> {
    let mut c: Vec<usize> = d.maps()[level - 1]
        .values()
        .iter()
        .enumerate()
        .filter(|&(_, &p)| p == x)
        .map(|(i, _)| i)
        .collect();
    c.sort_by_key(|&i| (codes[level - 1][i], i));
    c
}

/// Descendants of `x` level by level (`out[j]` for `j <= level`), in an order
/// that lines up position by position for isomorphic subtrees.
fn descendants(d: &FinDiagram, codes: &[Vec<usize>], level: usize, x: usize) -> Vec<Vec<usize>> {
    let mut out = vec![Vec::new(); level + 1];
    out[level] = vec![x];
    for j in (1..=level).rev() {
        let next: Vec<usize> = out[j]
            .iter()
            .flat_map(|&y| children(d, codes, j, y))
            .collect();
        out[j - 1] = next;
    }
    out
}

fn swap_subtrees(d: &FinDiagram, codes: &[Vec<usize>], level: usize, a: usize, b: usize) -> DiagramIso {
    let da = descendants(d, codes, level, a);
    let db = descendants(d, codes, level, b);
    let mut perms: Vec<Vec<usize>> = d.sizes().iter().map(|&n| (0..n).collect()).collect();
    for j in 0..=level {
        for (&x, &y) in da[j].iter().zip(&db[j]) {
            perms[j][x] = y;
            perms[j][y] = x;
        }
    }
    DiagramIso::from_components(
        perms
            .into_iter()
            .map(|v| SetMap::new(v.len(), v.len(), v).expect("permutation"))
            .collect(),
    )
}

/// Generators are transpositions of adjacent isomorphic sibling subtrees
/// (roots of `Sk` count as siblings); the order comes from closure.
pub fn automorphism_group(d: &FinDiagram) -> PermGroup {
    let k = d.k();
    let degrees = d.sizes();
    let mut generators = Vec::new();
    if k > 0 {
        let codes = subtree_codes(d);
        let top = k - 1;
        let mut sibling_groups: Vec<(usize, Vec<usize>)> = Vec::new();
        let mut roots: Vec<usize> = (0..degrees[top]).collect();
        roots.sort_by_key(|&i| (codes[top][i], i));
        sibling_groups.push((top, roots));
        for (level, &deg) in degrees.iter().enumerate().take(k).skip(1) {
            for x in 0..deg {
                sibling_groups.push((level - 1, children(d, &codes, level, x)));
            }
        }
        for (level, sibs) in sibling_groups {
            for w in sibs.windows(2) {
                if codes[level][w[0]] == codes[level][w[1]] {
                    generators.push(swap_subtrees(d, &codes, level, w[0], w[1]));
                }
            }
        }
    }
    let order = closure(&degrees, &generators).len() as u64;
    PermGroup {
        order,
        degrees,
        generators,
    }
}

/// Number of self-isomorphisms of `d`, by exhaustive search over
/// componentwise bijections constrained only by the naturality squares.
pub fn count_automorphisms_by_search(d: &FinDiagram) -> u64 {
    let sizes = d.sizes();
    let k = sizes.len();
    if k == 0 {
        return 1;
    }
    let mut sigma: Vec<Vec<Option<usize>>> = sizes.iter().map(|&n| vec![None; n]).collect();
    search(d, &sizes, k - 1, 0, &mut sigma)
}

fn search(
    d: &FinDiagram,
    sizes: &[usize],
    level: usize,
    elem: usize,
    sigma: &mut Vec<Vec<Option<usize>>>,
) -> u64 {
    if elem == sizes[level] {
        return if level == 0 {
            1
        } else {
            search(d, sizes, level - 1, 0, sigma)
        };
    }
    let mut total = 0;
    for t in 0..sizes[level] {
        if sigma[level].contains(&Some(t)) {
            continue;
        }
        if level + 1 < sizes.len() {
            let f = d.maps()[level].values();
            if Some(f[t]) != sigma[level + 1][f[elem]] {
                continue;
            }
        }
        sigma[level][elem] = Some(t);
        total += search(d, sizes, level, elem + 1, sigma);
        sigma[level][elem] = None;
    }
    total
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::finset::enumerate_diagrams;

    fn diag(sizes: &[usize], values: &[&[usize]]) -> FinDiagram {
        FinDiagram::from_values(sizes, values).unwrap()
    }

    fn factorial(n: usize) -> u64 {
        (1..=n as u64).product()
    }

    #[test]
    fn bare_set() {
        for n in 1..=5 {
            assert_eq!(automorphism_group(&FinDiagram::single(n).unwrap()).order, factorial(n));
        }
    }

    #[test]
    fn identity_on_two() {
        let d = diag(&[2, 2], &[&[0, 1]]);
        assert_eq!(automorphism_group(&d).order, 2);
        assert_eq!(count_automorphisms_by_search(&d), 2);
    }

    #[test]
    fn fibres_two_and_one() {
        let d = diag(&[3, 2], &[&[0, 0, 1]]);
        assert_eq!(automorphism_group(&d).order, 2);
        // brute force over all 3! * 2! = 12 pairs
        let mut n = 0;
        for s1 in SetMap::permutations(3) {
            for s2 in SetMap::permutations(2) {
                if DiagramIso::from_components(vec![s1.clone(), s2]).is_iso_between(&d, &d) {
                    n += 1;
                }
            }
        }
        assert_eq!(n, 2);
    }

    #[test]
    fn empty_diagram_has_trivial_group() {
        let g = automorphism_group(&FinDiagram::empty());
        assert_eq!(g.order, 1);
        assert!(g.generators.is_empty());
    }

    #[test]
    fn generators_are_automorphisms_and_order_matches_search() {
        for k in 1..=3 {
            for d in enumerate_diagrams(k, &vec![3; k]) {
                let g = automorphism_group(&d);
                assert!(g.generators.iter().all(|s| s.is_iso_between(&d, &d)));
                assert_eq!(g.order, count_automorphisms_by_search(&d), "{d:?}");
                let bound: u64 = d.sizes().iter().map(|&n| factorial(n)).product();
                assert_eq!(bound % g.order, 0);
            }
        }
    }

    #[test]
    fn orbit_counting() {
        // sum over classes of |S_a x S_b| / |Aut| recovers b^a
        for a in 1..=3 {
            for b in 1..=3 {
                let classes: Vec<_> = enumerate_diagrams(2, &[a, b])
                    .into_iter()
                    .filter(|d| d.sizes() == vec![a, b])
                    .collect();
                let total: u64 = classes
                    .iter()
                    .map(|d| factorial(a) * factorial(b) / automorphism_group(d).order)
                    .sum();
                assert_eq!(total, (b as u64).pow(a as u32));
            }
        }
    }

    #[test]
    fn json_shape() {
        let g = automorphism_group(&diag(&[2, 2], &[&[0, 1]]));
        let v: serde_json::Value = serde_json::to_value(&g).unwrap();
        assert_eq!(v["order"], 2);
        assert_eq!(v["generators"].as_array().unwrap().len(), 1);
    }
}
