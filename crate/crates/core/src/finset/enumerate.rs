use std::collections::BTreeMap;

use super::canonical::canonical_form;
use super::diagram::FinDiagram;
use super::set::SetMap;

/// One canonical representative per isomorphism class of diagrams
/// `S1 -> ... -> Sk` of nonempty sets with `|S_i| <= max_sizes[i]`, ordered by
/// `(sizes, value lists)`.
pub fn enumerate_diagrams(k: usize, max_sizes: &[usize]) -> Vec<FinDiagram> {
    enumerate(k, max_sizes, 1)
}

/// As [`enumerate_diagrams`], but sets may be empty.
pub fn enumerate_blocks(k: usize, max_sizes: &[usize]) -> Vec<FinDiagram> {
    enumerate(k, max_sizes, 0)
}

fn enumerate(k: usize, max_sizes: &[usize], min_size: usize) -> Vec<FinDiagram> {
    assert!(max_sizes.len() >= k, "need a bound for each of the {k} sets");
    if k == 0 {
        return vec![FinDiagram::empty()];
    }
    // Grow diagrams one set at a time, deduplicating canonical forms.
    let mut layer: BTreeMap<_, FinDiagram> = (min_size..=max_sizes[0])
        .map(|n| {
            let d = FinDiagram::from_parts_unchecked(&[n], vec![]);
            (d.sort_key(), d)
        })
        .collect();
    for &bound in &max_sizes[1..k] {
        let mut next = BTreeMap::new();
        for d in layer.values() {
            let last = *d.sizes().last().expect("nonempty layer");
            for m in min_size..=bound {
                if m == 0 && last > 0 {
                    continue;
                }
                for f in SetMap::all(last, m) {
                    let mut sizes = d.sizes();
                    sizes.push(m);
                    let mut values: Vec<Vec<usize>> =
                        d.maps().iter().map(|x| x.values().to_vec()).collect();
                    values.push(f.values().to_vec());
                    let c = canonical_form(&FinDiagram::from_parts_unchecked(&sizes, values));
                    next.entry(c.sort_key()).or_insert(c);
                }
            }
        }
        layer = next;
    }
    layer.into_values().collect()
}
