//! The free commutative monoid construction `M` on diagram groupoids, on
//! objects, isomorphism classes and automorphism orders.
//!
//! A multiset of `k`-diagrams `(S^1, ..., S^n)` assembles to the
//! `(k+1)`-diagram `⨿ S^j_1 -> ... -> ⨿ S^j_k -> {0..n}` sending block `j` to
//! `j`. Blocks may have empty sets: the fibre of the last map over a point
//! outside the image is an empty block, so non-surjective maps need them.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::Serialize;

use crate::artin::ArtinComonoid;
use crate::error::{Error, Result};
use crate::finset::{
    automorphism_group, canonical_form, count_automorphisms_by_search, enumerate_blocks,
    enumerate_diagrams, DiagramIso, FinDiagram, SetMap,
};
use crate::qlinalg::QMatrix;

type SortKey = (Vec<usize>, Vec<Vec<usize>>);

/// A diagram with possibly empty sets, in JSON as `{"sizes", "maps"}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BlockRepr {
    pub sizes: Vec<usize>,
    pub maps: Vec<Vec<usize>>,
}

impl From<&FinDiagram> for BlockRepr {
    fn from(d: &FinDiagram) -> Self {
        let (sizes, maps) = d.sort_key();
        BlockRepr { sizes, maps }
    }
}

/// Blocks sorted by canonical class, then by their own encoding.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MultisetOfDiagrams {
    k: usize,
    entries: Vec<FinDiagram>,
}

impl Serialize for MultisetOfDiagrams {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_seq(self.entries.iter().map(BlockRepr::from))
    }
}

impl MultisetOfDiagrams {
    pub fn new(k: usize, mut entries: Vec<FinDiagram>) -> Result<Self> {
        if let Some(d) = entries.iter().find(|d| d.k() != k) {
            return Err(Error::Multiset(format!("block of length {} in a multiset of {k}-diagrams", d.k())));
        }
        entries.sort_by_cached_key(|d| (canonical_form(d).sort_key(), d.sort_key()));
        Ok(MultisetOfDiagrams { k, entries })
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn entries(&self) -> &[FinDiagram] {
        &self.entries
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Canonical classes with multiplicities, in class order.
    pub fn class_counts(&self) -> Vec<(FinDiagram, usize)> {
        let mut out: BTreeMap<SortKey, (FinDiagram, usize)> = BTreeMap::new();
        for d in &self.entries {
            let c = canonical_form(d);
            out.entry(c.sort_key()).or_insert((c, 0)).1 += 1;
        }
        out.into_values().collect()
    }
}

/// `(S^1, ..., S^n) ↦ (⨿ S^j_1 -> ... -> ⨿ S^j_k -> {0..n})`.
pub fn assemble(m: &MultisetOfDiagrams) -> Result<FinDiagram> {
    let n = m.len();
    if n == 0 {
        return Err(Error::Multiset("cannot assemble the empty multiset".into()));
    }
    let k = m.k;
    let mut sizes = vec![0usize; k];
    // offsets[j][i]: start of block j inside level i
    let mut offsets = Vec::with_capacity(n);
    for d in &m.entries {
        offsets.push(sizes.clone());
        for (s, t) in sizes.iter_mut().zip(d.sizes()) {
            *s += t;
        }
    }
    if let Some(i) = sizes.iter().position(|&s| s == 0) {
        return Err(Error::Multiset(format!("level {} of the assembled diagram is empty", i + 1)));
    }
    let mut values: Vec<Vec<usize>> = vec![Vec::new(); k];
    for (j, d) in m.entries.iter().enumerate() {
        for (i, f) in d.maps().iter().enumerate() {
            values[i].extend(f.values().iter().map(|&v| v + offsets[j][i + 1]));
        }
        if k > 0 {
            values[k - 1].extend(std::iter::repeat_n(j, d.sizes()[k - 1]));
        }
    }
    let mut all_sizes = sizes;
    all_sizes.push(n);
    FinDiagram::block(&all_sizes, &values)
}

/// Splits a `(k+1)`-diagram into the fibres of its last map, elements
/// relabeled in increasing order.
pub fn disassemble(d: &FinDiagram) -> Result<MultisetOfDiagrams> {
    let kk = d.k();
    if kk == 0 {
        return Err(Error::Multiset("the empty diagram has no last set".into()));
    }
    let k = kk - 1;
    let sizes = d.sizes();
    // owner[i][x]: the point of the last set below which x lies
    let mut owner: Vec<Vec<usize>> = vec![Vec::new(); kk];
    owner[k] = (0..sizes[k]).collect();
    for i in (0..k).rev() {
        let f = d.maps()[i].values();
        owner[i] = f.iter().map(|&y| owner[i + 1][y]).collect();
    }
    let mut blocks = Vec::with_capacity(sizes[k]);
    for j in 0..sizes[k] {
        let members: Vec<Vec<usize>> = (0..k)
            .map(|i| (0..sizes[i]).filter(|&x| owner[i][x] == j).collect())
            .collect();
        let bsizes: Vec<usize> = members.iter().map(Vec::len).collect();
        let bvalues: Vec<Vec<usize>> = (0..k.saturating_sub(1))
            .map(|i| {
                let f = d.maps()[i].values();
                members[i]
                    .iter()
                    .map(|&x| members[i + 1].binary_search(&f[x]).expect("same fibre"))
                    .collect()
            })
            .collect();
        blocks.push(FinDiagram::block(&bsizes, &bvalues)?);
    }
    MultisetOfDiagrams::new(k, blocks)
}

/// `∏_c mult_c! · |Aut c|^{mult_c}`, the order of the wreath-type group
/// permuting isomorphic blocks.
pub fn wreath_order(m: &MultisetOfDiagrams) -> u64 {
    m.class_counts()
        .iter()
        .map(|(c, mult)| {
            let aut = count_automorphisms_by_search(c);
            (1..=*mult as u64).product::<u64>() * aut.pow(*mult as u32)
        })
        .product()
}

/// One census class of `(k+1)`-diagrams.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct MonadRow {
    pub class: BlockRepr,
    pub aut_order: u64,
    pub aut_search: u64,
    pub wreath_order: u64,
    pub preimage: MultisetOfDiagrams,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct MonadReport {
    pub k: usize,
    pub bounds: Vec<usize>,
    pub census: usize,
    pub assembled_classes: usize,
    pub census_matches: bool,
    pub round_trips: bool,
    pub aut_orders_match: bool,
    pub rows: Vec<MonadRow>,
    pub pass: bool,
}

impl fmt::Display for MonadReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "{:<28} {:>6} {:>6}  preimage", "class", "|Aut|", "wreath")?;
        for r in &self.rows {
            let class = format!("{:?} {:?}", r.class.sizes, r.class.maps);
            let pre: Vec<String> = r
                .preimage
                .entries()
                .iter()
                .map(|b| {
                    let b = BlockRepr::from(b);
                    format!("{:?}{:?}", b.sizes, b.maps)
                })
                .collect();
            writeln!(f, "{class:<28} {:>6} {:>6}  {{{}}}", r.aut_order, r.wreath_order, pre.join(", "))?;
        }
        write!(
            f,
            "k={} bounds={:?}: census {} = assembled {}, {}",
            self.k,
            self.bounds,
            self.census,
            self.assembled_classes,
            if self.pass { "PASS" } else { "FAIL" }
        )
    }
}

/// Every multiset of `n` items from `0..count`, as nondecreasing index lists.
fn multisets(count: usize, n: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = Vec::with_capacity(n);
    fn rec(count: usize, n: usize, start: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == n {
            out.push(cur.clone());
            return;
        }
        for i in start..count {
            cur.push(i);
            rec(count, n, i, cur, out);
            cur.pop();
        }
    }
    rec(count, n, 0, &mut cur, &mut out);
    out
}

/// Compares `M(Fin^k_gr)` with `Fin^{k+1}_gr` inside the box `bounds`
/// (length `k + 1`; the last entry bounds the multiset size).
pub fn verify_m_identity(k: usize, bounds: &[usize]) -> Result<MonadReport> {
    if bounds.len() != k + 1 {
        return Err(Error::Multiset(format!("need {} bounds, got {}", k + 1, bounds.len())));
    }
    let census = enumerate_diagrams(k + 1, bounds);
    let blocks = enumerate_blocks(k, &bounds[..k]);

    let mut assembled: BTreeMap<SortKey, (FinDiagram, MultisetOfDiagrams)> = BTreeMap::new();
    for n in 1..=bounds[k] {
        for pick in multisets(blocks.len(), n) {
            let m = MultisetOfDiagrams::new(k, pick.iter().map(|&i| blocks[i].clone()).collect())?;
            let Ok(d) = assemble(&m) else { continue };
            if d.sizes().iter().zip(bounds).any(|(s, b)| s > b) {
                continue;
            }
            let c = canonical_form(&d);
            assembled.entry(c.sort_key()).or_insert((c, m));
        }
    }

    let census_keys: BTreeSet<_> = census.iter().map(FinDiagram::sort_key).collect();
    let assembled_keys: BTreeSet<_> = assembled.keys().cloned().collect();
    let census_matches = census_keys == assembled_keys;

    let mut round_trips = true;
    let mut aut_orders_match = true;
    let mut rows = Vec::with_capacity(census.len());
    for d in &census {
        let pre = disassemble(d)?;
        round_trips &= pre.entries().iter().all(|b| blocks.contains(&canonical_form(b)))
            && canonical_form(&assemble(&pre)?) == *d;
        let aut_order = automorphism_group(d).order;
        let aut_search = count_automorphisms_by_search(d);
        let wreath = wreath_order(&pre);
        aut_orders_match &= aut_order == aut_search && aut_search == wreath;
        let preimage = assembled.get(&d.sort_key()).map_or(pre, |(_, m)| m.clone());
        rows.push(MonadRow {
            class: BlockRepr::from(d),
            aut_order,
            aut_search,
            wreath_order: wreath,
            preimage,
        });
    }
    Ok(MonadReport {
        k,
        bounds: bounds.to_vec(),
        census: census.len(),
        assembled_classes: assembled.len(),
        census_matches,
        round_trips,
        aut_orders_match,
        rows,
        pass: census_matches && round_trips && aut_orders_match,
    })
}

/// `Ω_E(S) = E^{⊗S₁}`.
pub fn omega_power(e: &ArtinComonoid, d: &FinDiagram) -> Result<ArtinComonoid> {
    if d.k() == 0 {
        return Err(Error::Unsupported("Ω_E needs a diagram with a first set".into()));
    }
    Ok(e.tensor_power(d.first_size()))
}

/// Where the basis tuple at index `col` of `E^{⊗s}` goes when factor `t`
/// moves to position `σ(t)`: `out[col]` is the index of `e'` with
/// `e'_{σ(t)} = e_t`. Tuples are flattened with the first factor most
/// significant, as in [`QMatrix::kron`].
pub fn tuple_permutation(sigma: &SetMap, n: usize) -> Vec<usize> {
    let s = sigma.dom();
    let dim = n.pow(s as u32);
    let mut digits = vec![0usize; s];
    let mut image = vec![0usize; s];
    (0..dim)
        .map(|col| {
            let mut rest = col;
            for t in (0..s).rev() {
                digits[t] = rest % n;
                rest /= n;
            }
            for (t, &v) in digits.iter().enumerate() {
                image[sigma.apply(t)] = v;
            }
            image.iter().fold(0, |acc, &v| acc * n + v)
        })
        .collect()
}

/// The permutation matrix of [`tuple_permutation`].
pub fn tensor_permutation(sigma: &SetMap, n: usize) -> QMatrix {
    let perm = tuple_permutation(sigma, n);
    QMatrix::graph(&perm, perm.len())
}

/// The permutation of `E^{⊗S₁}` induced by the first component `σ` of an
/// isomorphism.
pub fn functoriality_on_iso(iso: &DiagramIso, e: &ArtinComonoid) -> Result<QMatrix> {
    let sigma = iso
        .first()
        .ok_or_else(|| Error::Unsupported("the empty diagram has no first set".into()))?;
    Ok(tensor_permutation(sigma, e.size()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::artin::{is_coalgebra_morphism, swap_matrix};
    use crate::finset::are_isomorphic;

    fn diag(sizes: &[usize], values: &[&[usize]]) -> FinDiagram {
        FinDiagram::from_values(sizes, values).unwrap()
    }

    fn sets(sizes: &[usize]) -> MultisetOfDiagrams {
        MultisetOfDiagrams::new(
            1,
            sizes.iter().map(|&n| FinDiagram::block(&[n], &[]).unwrap()).collect(),
        )
        .unwrap()
    }

    #[test]
    fn one_set_maps_to_a_point() {
        let d = assemble(&sets(&[3])).unwrap();
        assert_eq!(d, diag(&[3, 1], &[&[0, 0, 0]]));
    }

    #[test]
    fn two_singletons_give_the_identity() {
        assert_eq!(assemble(&sets(&[1, 1])).unwrap(), diag(&[2, 2], &[&[0, 1]]));
    }

    #[test]
    fn fibres_two_and_one() {
        let d = assemble(&sets(&[2, 1])).unwrap();
        assert_eq!(d.sizes(), vec![3, 2]);
        let mut fibres = d.maps()[0].fiber_sizes();
        fibres.sort_unstable();
        assert_eq!(fibres, vec![1, 2]);
        assert_eq!(automorphism_group(&d).order, 2);
        assert_eq!(wreath_order(&sets(&[2, 1])), 2);
    }

    #[test]
    fn empty_inputs_rejected() {
        assert!(assemble(&sets(&[])).is_err());
        assert!(assemble(&sets(&[0, 0])).is_err());
        // an empty block next to a nonempty one is fine
        assert_eq!(assemble(&sets(&[0, 1])).unwrap().sizes(), vec![1, 2]);
        assert!(MultisetOfDiagrams::new(2, vec![FinDiagram::single(1).unwrap()]).is_err());
    }

    #[test]
    fn zero_diagrams_assemble_to_bare_sets() {
        let m = MultisetOfDiagrams::new(0, vec![FinDiagram::empty(); 3]).unwrap();
        assert_eq!(assemble(&m).unwrap(), FinDiagram::single(3).unwrap());
    }

    #[test]
    fn disassemble_inverts_assemble() {
        for d in enumerate_diagrams(3, &[3, 2, 2]) {
            let m = disassemble(&d).unwrap();
            assert_eq!(canonical_form(&assemble(&m).unwrap()), d);
        }
    }

    #[test]
    fn assemble_respects_isomorphism() {
        let a = diag(&[3, 2], &[&[0, 0, 1]]);
        let b = diag(&[3, 2], &[&[1, 0, 1]]);
        let c = diag(&[1, 1], &[&[0]]);
        let m1 = MultisetOfDiagrams::new(2, vec![a, c.clone()]).unwrap();
        let m2 = MultisetOfDiagrams::new(2, vec![c, b]).unwrap();
        let (d1, d2) = (assemble(&m1).unwrap(), assemble(&m2).unwrap());
        let w = are_isomorphic(&d1, &d2).unwrap();
        assert!(w.is_iso_between(&d1, &d2));
    }

    #[test]
    fn census_k1_bounds_22() {
        let r = verify_m_identity(1, &[2, 2]).unwrap();
        assert_eq!((r.census, r.assembled_classes), (5, 5));
        assert!(r.pass);
    }

    #[test]
    fn census_small_boxes() {
        for (k, b) in [(0, vec![4]), (1, vec![3, 3]), (1, vec![3, 2]), (2, vec![2, 2, 2])] {
            let r = verify_m_identity(k, &b).unwrap();
            assert!(r.pass, "k={k} bounds={b:?}");
        }
    }

    #[test]
    fn report_table() {
        let s = verify_m_identity(1, &[2, 2]).unwrap().to_string();
        assert_eq!(s.lines().count(), 7);
        assert!(s.ends_with("census 5 = assembled 5, PASS"));
    }

    #[test]
    fn omega_examples() {
        let e = ArtinComonoid::canonical_of_size(2).unwrap();
        assert_eq!(omega_power(&e, &FinDiagram::single(1).unwrap()).unwrap(), e);
        let w = omega_power(&e, &diag(&[2, 1], &[&[0, 0]])).unwrap();
        assert_eq!(w.size(), 4);
        assert_eq!(w.counit(), &QMatrix::from_ints(1, 4, &[1, 1, 1, 1]).unwrap());
        for s in 1..=3 {
            for n in 1..=2 {
                let e = ArtinComonoid::canonical_of_size(n).unwrap();
                assert!(omega_power(&e, &FinDiagram::single(s).unwrap()).unwrap().satisfies_axioms());
            }
        }
        assert!(omega_power(&e, &FinDiagram::empty()).is_err());
    }

    #[test]
    fn iso_action_examples() {
        let e = ArtinComonoid::canonical_of_size(2).unwrap();
        let d = FinDiagram::single(2).unwrap();
        assert_eq!(functoriality_on_iso(&DiagramIso::identity(&d), &e).unwrap(), QMatrix::identity(4));
        let swap = DiagramIso::new(vec![SetMap::new(2, 2, vec![1, 0]).unwrap()], &d, &d).unwrap();
        assert_eq!(functoriality_on_iso(&swap, &e).unwrap(), swap_matrix(2, 2));
    }

    #[test]
    fn iso_action_is_functorial_and_comonoidal() {
        let e = ArtinComonoid::canonical_of_size(2).unwrap();
        let d = FinDiagram::single(3).unwrap();
        let isos: Vec<DiagramIso> = SetMap::permutations(3)
            .into_iter()
            .map(|p| DiagramIso::new(vec![p], &d, &d).unwrap())
            .collect();
        let power = e.tensor_power(3);
        for a in &isos {
            let pa = functoriality_on_iso(a, &e).unwrap();
            assert!(is_coalgebra_morphism(&pa, &power, &power).unwrap().holds());
            for b in &isos {
                let pb = functoriality_on_iso(b, &e).unwrap();
                let pab = functoriality_on_iso(&a.then(b).unwrap(), &e).unwrap();
                assert_eq!(pab, &pb * &pa);
            }
        }
    }

    #[test]
    fn multiset_json() {
        let m = sets(&[2, 0]);
        assert_eq!(serde_json::to_string(&m).unwrap(), r#"[{"sizes":[0],"maps":[]},{"sizes":[2],"maps":[]}]"#);
    }

    #[test]
    fn multiset_enumeration() {
        assert_eq!(multisets(3, 2).len(), 6);
        assert_eq!(multisets(4, 3).len(), 20);
    }
}
