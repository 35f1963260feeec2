use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::cube::CubeDiagram;
use super::psi::mask_elements;
use crate::error::{Error, Result};
use crate::qlinalg::{ChainComplex, ChainMap, QMatrix, Rational};

/// Components `W_s` of a finite set of points, each a sorted list of point
/// indices. `D(S)` is the set of points of `∩_{s∈S} W_s`, except that a
/// component may carry a quotient: `quotients[s][k]` labels the `k`-th point
/// of `W_s`, and `D({s})` is then the set of labels. Quotients make `D` a
/// genuine diagram of sets rather than a diagram of inclusions, which lets
/// the hocolim have nonzero `H₁`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "CoverRepr")]
pub struct Cover {
    pub points: usize,
    pub components: Vec<Vec<usize>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub quotients: Option<Vec<Vec<usize>>>,
}

#[derive(Deserialize)]
struct CoverRepr {
    points: usize,
    components: Vec<Vec<usize>>,
    #[serde(default)]
    quotients: Option<Vec<Vec<usize>>>,
}

impl TryFrom<CoverRepr> for Cover {
    type Error = Error;

    fn try_from(r: CoverRepr) -> Result<Self> {
        match r.quotients {
            None => Cover::literal(r.points, r.components),
            Some(q) => Cover::with_quotients(r.points, r.components, q),
        }
    }
}

impl Cover {
    /// Components as subsets of `{0..points}`; duplicates are removed.
    pub fn literal(points: usize, components: Vec<Vec<usize>>) -> Result<Self> {
        let mut comps = Vec::with_capacity(components.len());
        for (s, mut w) in components.into_iter().enumerate() {
            w.sort_unstable();
            w.dedup();
            if let Some(&p) = w.iter().find(|&&p| p >= points) {
                return Err(Error::Cube(format!("component {s} contains point {p} of {points}")));
            }
            comps.push(w);
        }
        if comps.len() > 16 {
            return Err(Error::Cube("at most 16 components".into()));
        }
        Ok(Cover {
            points,
            components: comps,
            quotients: None,
        })
    }

    /// Labels of each component must be exactly `0..L_s` for some `L_s`.
    pub fn with_quotients(points: usize, components: Vec<Vec<usize>>, quotients: Vec<Vec<usize>>) -> Result<Self> {
        let mut c = Self::literal(points, components)?;
        if quotients.len() != c.components.len() {
            return Err(Error::Cube("one quotient per component".into()));
        }
        for (s, (w, q)) in c.components.iter().zip(&quotients).enumerate() {
            if q.len() != w.len() {
                return Err(Error::Cube(format!("quotient {s} labels {} of {} points", q.len(), w.len())));
            }
            let max = q.iter().max().map_or(0, |&m| m + 1);
            if (0..max).any(|l| !q.contains(&l)) {
                return Err(Error::Cube(format!("quotient {s} skips a label")));
            }
        }
        c.quotients = Some(quotients);
        Ok(c)
    }

    pub fn n(&self) -> usize {
        self.components.len()
    }

    /// Sorted points of `∩_{s∈S} W_s`.
    pub fn intersection(&self, mask: u32) -> Vec<usize> {
        let elems = mask_elements(mask);
        let Some((&first, rest)) = elems.split_first() else {
            return (0..self.points).collect();
        };
        self.components[first]
            .iter()
            .copied()
            .filter(|p| rest.iter().all(|&s| self.components[s].binary_search(p).is_ok()))
            .collect()
    }

    /// Label of the point `p ∈ W_s` in `D({s})`.
    fn label(&self, s: usize, p: usize) -> usize {
        let k = self.components[s].binary_search(&p).expect("point of the component");
        self.quotients.as_ref().map_or(k, |q| q[s][k])
    }

    /// `|D(S)|`.
    pub fn vertex_size(&self, mask: u32) -> usize {
        if mask.count_ones() == 1 {
            let s = mask.trailing_zeros() as usize;
            return match &self.quotients {
                Some(q) => q[s].iter().max().map_or(0, |&m| m + 1),
                None => self.components[s].len(),
            };
        }
        self.intersection(mask).len()
    }

    /// Image of `x ∈ D(T)` in `D(S)` for nonempty `S ⊆ T`.
    pub fn restrict(&self, t: u32, x: usize, s: u32) -> usize {
        if t == s {
            return x;
        }
        let p = self.intersection(t)[x];
        if s.count_ones() == 1 {
            self.label(s.trailing_zeros() as usize, p)
        } else {
            self.intersection(s).binary_search(&p).expect("smaller intersection")
        }
    }

    /// Each `D(S)` as a complex concentrated in degree 0.
    pub fn to_cube(&self) -> Result<CubeDiagram> {
        let n = self.n();
        let mut vertices = BTreeMap::new();
        let mut edges = BTreeMap::new();
        for t in 1u32..1 << n {
            let size = self.vertex_size(t);
            vertices.insert(t, ChainComplex::concentrated(0, size));
            if t.count_ones() < 2 {
                continue;
            }
            for i in mask_elements(t) {
                let s = t & !(1 << i);
                let values: Vec<usize> = (0..size).map(|x| self.restrict(t, x, s)).collect();
                let m = QMatrix::graph(&values, self.vertex_size(s));
                edges.insert((t, i), BTreeMap::from([(0, m)]));
            }
        }
        CubeDiagram::new(n, vertices, edges)
    }

    /// Inclusions `D({s}) -> points`, for literal covers only.
    pub fn ambient_maps(&self, ambient: &ChainComplex) -> Result<Vec<ChainMap>> {
        if self.quotients.is_some() {
            return Err(Error::Cube("a quotient cover has no map to the ambient set".into()));
        }
        self.components
            .iter()
            .map(|w| {
                let m = QMatrix::graph(w, self.points);
                ChainMap::new(ChainComplex::concentrated(0, w.len()), ambient.clone(), BTreeMap::from([(0, m)]))
            })
            .collect()
    }

    /// Points lying in some component.
    pub fn union_size(&self) -> usize {
        let mut seen = vec![false; self.points];
        for w in &self.components {
            for &p in w {
                seen[p] = true;
            }
        }
        seen.iter().filter(|&&b| b).count()
    }
}

/// Answers computed without the total complex, from the poset of elements
/// `(S, x)`, `x ∈ D(S)`, with `(T, y) ≤ (S, x)` when `S ⊆ T` and `y ↦ x`.
/// Its nerve is a model of the homotopy colimit.
pub struct CoverOracle {
    elements: Vec<(u32, usize)>,
    relations: Vec<(usize, usize)>,
}

impl CoverOracle {
    pub fn new(cover: &Cover) -> Self {
        let n = cover.n();
        let mut elements = Vec::new();
        let mut index = BTreeMap::new();
        for s in 1u32..1 << n {
            for x in 0..cover.vertex_size(s) {
                index.insert((s, x), elements.len());
                elements.push((s, x));
            }
        }
        let mut relations = Vec::new();
        for (a, &(t, y)) in elements.iter().enumerate() {
            for s in 1u32..1 << n {
                if s != t && s & !t == 0 {
                    relations.push((a, index[&(s, cover.restrict(t, y, s))]));
                }
            }
        }
        CoverOracle { elements, relations }
    }

    /// Connected components by union-find.
    pub fn components(&self) -> usize {
        let mut parent: Vec<usize> = (0..self.elements.len()).collect();
        fn find(parent: &mut [usize], mut x: usize) -> usize {
            while parent[x] != x {
                parent[x] = parent[parent[x]];
                x = parent[x];
            }
            x
        }
        for &(a, b) in &self.relations {
            let (ra, rb) = (find(&mut parent, a), find(&mut parent, b));
            if ra != rb {
                parent[ra] = rb;
            }
        }
        (0..parent.len()).filter(|&x| find(&mut parent, x) == x).count()
    }

    /// `(dim H₀, dim H₁)` of the order complex, from its 2-skeleton.
    pub fn h0_h1(&self) -> (usize, usize) {
        let v = self.elements.len();
        let edges = &self.relations;
        let edge_index: BTreeMap<(usize, usize), usize> = edges.iter().enumerate().map(|(i, &e)| (e, i)).collect();
        let mut triangles = Vec::new();
        for &(a, b) in edges {
            for &(b2, c) in edges {
                if b2 == b {
                    triangles.push((a, b, c));
                }
            }
        }
        let one = Rational::from_integer(1.into());
        let mut d1 = QMatrix::zeros(v, edges.len());
        for (i, &(a, b)) in edges.iter().enumerate() {
            d1.set(b, i, one.clone());
            d1.set(a, i, -one.clone());
        }
        let mut d2 = QMatrix::zeros(edges.len(), triangles.len());
        for (i, &(a, b, c)) in triangles.iter().enumerate() {
            d2.set(edge_index[&(b, c)], i, one.clone());
            d2.set(edge_index[&(a, c)], i, -one.clone());
            d2.set(edge_index[&(a, b)], i, one.clone());
        }
        let (r1, r2) = (d1.rank(), d2.rank());
        (v - r1, edges.len() - r1 - r2)
    }
}

/// `Σ_{S ≠ ∅} (-1)^{|S|-1} χ(D(S))`.
pub fn inclusion_exclusion_euler(d: &CubeDiagram) -> i64 {
    d.subsets()
        .iter()
        .map(|&s| {
            let chi = d.vertex(s).euler_characteristic();
            if s.count_ones() % 2 == 1 {
                chi
            } else {
                -chi
            }
        })
        .sum()
}

#[cfg(test)]
mod tests {
    use proptest::prelude::*;

    use super::*;
    use crate::hypercube::{ks_hocolim, punctured_cube_hocolim};

    #[test]
    fn two_component_cover() {
        let c = Cover::literal(3, vec![vec![0, 1], vec![1, 2]]).unwrap();
        let tot = punctured_cube_hocolim(&c.to_cube().unwrap()).unwrap();
        assert_eq!(tot.homology_dim(0), 3);
        assert_eq!(tot.homology_dim(1), 0);
        let o = CoverOracle::new(&c);
        assert_eq!(o.components(), 3);
        assert_eq!(o.h0_h1(), (3, 0));
    }

    #[test]
    fn ambient_with_an_uncovered_point() {
        let c = Cover::literal(4, vec![vec![0, 1], vec![1, 2]]).unwrap();
        let ambient = ChainComplex::concentrated(0, 4);
        let cone = ks_hocolim(&ambient, &c.to_cube().unwrap(), &c.ambient_maps(&ambient).unwrap()).unwrap();
        assert_eq!(cone.homology_dim(0), 1);
        assert_eq!(cone.homology_dim(1), 0);
    }

    #[test]
    fn quotient_cover_with_a_loop() {
        // two points each collapsed in both components: a circle
        let c = Cover::with_quotients(2, vec![vec![0, 1], vec![0, 1]], vec![vec![0, 0], vec![0, 0]]).unwrap();
        let tot = punctured_cube_hocolim(&c.to_cube().unwrap()).unwrap();
        assert_eq!((tot.homology_dim(0), tot.homology_dim(1)), (1, 1));
        assert_eq!(CoverOracle::new(&c).h0_h1(), (1, 1));
        assert!(c.ambient_maps(&ChainComplex::concentrated(0, 2)).is_err());
    }

    #[test]
    fn invalid_covers() {
        assert!(Cover::literal(2, vec![vec![0, 2]]).is_err());
        assert!(Cover::with_quotients(2, vec![vec![0, 1]], vec![vec![0, 2]]).is_err());
        assert!(Cover::with_quotients(2, vec![vec![0, 1]], vec![vec![0]]).is_err());
    }

    #[test]
    fn json_forms() {
        let c = Cover::literal(3, vec![vec![1, 0], vec![1, 2]]).unwrap();
        let s = serde_json::to_string(&c).unwrap();
        assert_eq!(s, r#"{"points":3,"components":[[0,1],[1,2]]}"#);
        assert_eq!(serde_json::from_str::<Cover>(&s).unwrap(), c);
        assert!(serde_json::from_str::<Cover>(r#"{"points":1,"components":[[3]]}"#).is_err());
    }

    fn arb_cover() -> impl Strategy<Value = Cover> {
        (1usize..=4, 1usize..=6).prop_flat_map(|(n, points)| {
            let comps = proptest::collection::vec(proptest::collection::btree_set(0..points, 1..=points.min(5)), n);
            (Just(points), comps, proptest::collection::vec(proptest::collection::vec(0usize..2, 5), n), any::<bool>())
        })
        .prop_map(|(points, comps, labels, quotient)| {
            let comps: Vec<Vec<usize>> = comps.into_iter().map(|w| w.into_iter().collect()).collect();
            if !quotient {
                return Cover::literal(points, comps).unwrap();
            }
            // relabel each component's labels densely
            let q: Vec<Vec<usize>> = comps
                .iter()
                .zip(&labels)
                .map(|(w, l)| {
                    let raw: Vec<usize> = l[..w.len()].to_vec();
                    let mut seen: Vec<usize> = raw.clone();
                    seen.sort_unstable();
                    seen.dedup();
                    raw.iter().map(|x| seen.binary_search(x).unwrap()).collect()
                })
                .collect();
            Cover::with_quotients(points, comps, q).unwrap()
        })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(48))]
        #[test]
        fn hocolim_matches_oracles(c in arb_cover()) {
            let cube = c.to_cube().unwrap();
            let tot = punctured_cube_hocolim(&cube).unwrap();
            prop_assert!(tot.is_valid());
            let oracle = CoverOracle::new(&c);
            let (h0, h1) = oracle.h0_h1();
            prop_assert_eq!(tot.homology_dim(0), oracle.components());
            prop_assert_eq!(tot.homology_dim(0), h0);
            prop_assert_eq!(tot.homology_dim(1), h1);
            prop_assert_eq!(tot.euler_characteristic(), inclusion_exclusion_euler(&cube));
            if c.quotients.is_none() {
                prop_assert_eq!(h0, c.union_size());
                prop_assert_eq!(h1, 0);
            }
        }
    }
}
