use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::psi::{mask_elements, subset_mask};
use crate::error::{Error, Result};
use crate::qlinalg::{ChainComplex, ChainMap, QMatrix};

/// A functor on the nonempty subsets of `{0..n}`, with `edge(T, i)` the map
/// `D(T) -> D(T \ {i})`. Only these generating edges are stored; every square
/// of them commutes.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "CubeRepr", into = "CubeRepr")]
pub struct CubeDiagram {
    n: usize,
    vertices: BTreeMap<u32, ChainComplex>,
    edges: BTreeMap<(u32, usize), ChainMap>,
}

#[derive(Serialize, Deserialize)]
struct VertexRepr {
    subset: Vec<usize>,
    complex: ChainComplex,
}

#[derive(Serialize, Deserialize)]
struct EdgeRepr {
    source: Vec<usize>,
    omit: usize,
    maps: BTreeMap<i64, QMatrix>,
}

#[derive(Serialize, Deserialize)]
struct CubeRepr {
    n: usize,
    vertices: Vec<VertexRepr>,
    edges: Vec<EdgeRepr>,
}

impl TryFrom<CubeRepr> for CubeDiagram {
    type Error = Error;

    fn try_from(r: CubeRepr) -> Result<Self> {
        let vertices = r
            .vertices
            .into_iter()
            .map(|v| (subset_mask(&v.subset), v.complex))
            .collect();
        let edges = r
            .edges
            .into_iter()
            .map(|e| ((subset_mask(&e.source), e.omit), e.maps))
            .collect();
        CubeDiagram::new(r.n, vertices, edges)
    }
}

impl From<CubeDiagram> for CubeRepr {
    fn from(d: CubeDiagram) -> Self {
        CubeRepr {
            n: d.n,
            vertices: d
                .vertices
                .iter()
                .map(|(&m, c)| VertexRepr {
                    subset: mask_elements(m),
                    complex: c.clone(),
                })
                .collect(),
            edges: d
                .edges
                .iter()
                .map(|(&(m, i), f)| EdgeRepr {
                    source: mask_elements(m),
                    omit: i,
                    maps: f.components().clone(),
                })
                .collect(),
        }
    }
}

/// Nonempty subsets ordered by size, then mask.
fn nonempty_subsets(n: usize) -> Vec<u32> {
    let mut v: Vec<u32> = (1..1u32 << n).collect();
    v.sort_by_key(|&m| (m.count_ones(), m));
    v
}

impl CubeDiagram {
    pub fn new(
        n: usize,
        vertices: BTreeMap<u32, ChainComplex>,
        edges: BTreeMap<(u32, usize), BTreeMap<i64, QMatrix>>,
    ) -> Result<Self> {
        if n > 16 {
            return Err(Error::Cube(format!("{n} indices is beyond the supported size")));
        }
        let subsets = nonempty_subsets(n);
        if vertices.len() != subsets.len() || subsets.iter().any(|m| !vertices.contains_key(m)) {
            return Err(Error::Cube("need exactly one complex per nonempty subset".into()));
        }
        let mut maps = BTreeMap::new();
        let mut edges = edges;
        for &t in subsets.iter().filter(|t| t.count_ones() >= 2) {
            for i in mask_elements(t) {
                let comps = edges.remove(&(t, i)).ok_or_else(|| {
                    Error::Cube(format!("missing edge {:?} minus {i}", mask_elements(t)))
                })?;
                let f = ChainMap::new(vertices[&t].clone(), vertices[&(t & !(1 << i))].clone(), comps)
                    .map_err(|e| Error::Cube(format!("edge {:?} minus {i}: {e}", mask_elements(t))))?;
                maps.insert((t, i), f);
            }
        }
        if let Some(&(t, i)) = edges.keys().next() {
            return Err(Error::Cube(format!("unexpected edge {:?} minus {i}", mask_elements(t))));
        }
        let d = CubeDiagram {
            n,
            vertices,
            edges: maps,
        };
        d.check_squares()?;
        Ok(d)
    }

    fn check_squares(&self) -> Result<()> {
        for (&t, c) in &self.vertices {
            if t.count_ones() < 3 {
                continue;
            }
            let elems = mask_elements(t);
            for &i in &elems {
                for &j in elems.iter().filter(|&&j| j > i) {
                    let via_i = (t, i, t & !(1 << i), j);
                    let via_j = (t, j, t & !(1 << j), i);
                    for q in c.degrees() {
                        let a = &self.edges[&(via_i.2, via_i.3)].component(q) * &self.edges[&(via_i.0, via_i.1)].component(q);
                        let b = &self.edges[&(via_j.2, via_j.3)].component(q) * &self.edges[&(via_j.0, via_j.1)].component(q);
                        if a != b {
                            return Err(Error::Cube(format!(
                                "square at {elems:?} removing {i} and {j} does not commute"
                            )));
                        }
                    }
                }
            }
        }
        Ok(())
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn vertex(&self, mask: u32) -> &ChainComplex {
        &self.vertices[&mask]
    }

    /// `D(T) -> D(T \ {i})`.
    pub fn edge(&self, t: u32, i: usize) -> &ChainMap {
        &self.edges[&(t, i)]
    }

    pub fn subsets(&self) -> Vec<u32> {
        nonempty_subsets(self.n)
    }
}

fn sign(k: i64) -> i64 {
    if k.rem_euclid(2) == 0 {
        1
    } else {
        -1
    }
}

/// Summand offsets in `Tot_n = ⊕ D(S)_{n-p}`, `p = |S| - 1`.
struct TotLayout {
    order: Vec<u32>,
}

impl TotLayout {
    fn dims(&self, d: &CubeDiagram, n: i64) -> Vec<usize> {
        self.order
            .iter()
            .map(|&s| d.vertex(s).dim(n - (s.count_ones() as i64 - 1)))
            .collect()
    }

    fn offsets(&self, d: &CubeDiagram, n: i64) -> (BTreeMap<u32, usize>, usize) {
        let mut off = BTreeMap::new();
        let mut acc = 0;
        for (&s, dim) in self.order.iter().zip(self.dims(d, n)) {
            off.insert(s, acc);
            acc += dim;
        }
        (off, acc)
    }
}

/// The total complex of the punctured cube: column `p` is `⊕_{|S|=p+1} D(S)`
/// shifted up by `p`, the differential is `(-1)^p d_{D(S)}` plus the Čech
/// maps `Σ_j (-1)^j D(S -> S \ {s_j})`.
pub fn punctured_cube_hocolim(d: &CubeDiagram) -> Result<ChainComplex> {
    let layout = TotLayout { order: d.subsets() };
    let ranges: Vec<(i64, i64)> = layout
        .order
        .iter()
        .filter_map(|&s| {
            let c = d.vertex(s);
            let p = s.count_ones() as i64 - 1;
            (c.hi() >= c.lo()).then(|| (c.lo() + p, c.hi() + p))
        })
        .collect();
    let (Some(lo), Some(hi)) = (ranges.iter().map(|r| r.0).min(), ranges.iter().map(|r| r.1).max()) else {
        return Ok(ChainComplex::zero());
    };
    let dims: Vec<usize> = (lo..=hi).map(|n| layout.offsets(d, n).1).collect();
    let mut diffs = Vec::new();
    for n in lo + 1..=hi {
        let (cols, ncols) = layout.offsets(d, n);
        let (rows, nrows) = layout.offsets(d, n - 1);
        let mut m = QMatrix::zeros(nrows, ncols);
        for &s in &layout.order {
            let p = s.count_ones() as i64 - 1;
            let q = n - p;
            let c = d.vertex(s);
            if c.dim(q) == 0 {
                continue;
            }
            let internal = c.differential(q);
            if internal.rows() > 0 {
                let block = if p % 2 == 0 { internal } else { -&internal };
                m.set_block(rows[&s], cols[&s], &block);
            }
            if p >= 1 {
                for (j, i) in mask_elements(s).into_iter().enumerate() {
                    let t = s & !(1 << i);
                    let f = d.edge(s, i).component(q);
                    if f.rows() == 0 {
                        continue;
                    }
                    let block = if sign(j as i64) == 1 { f } else { -&f };
                    m.set_block(rows[&t], cols[&s], &block);
                }
            }
        }
        diffs.push((n, m));
    }
    ChainComplex::new(lo, dims, diffs)
}

/// The cone of `hocolim D -> ambient`, the map given on the singletons by
/// `maps[i] : D({i}) -> ambient`. The maps must agree on every `D({i, j})`.
pub fn ks_hocolim(ambient: &ChainComplex, d: &CubeDiagram, maps: &[ChainMap]) -> Result<ChainComplex> {
    if maps.len() != d.n() {
        return Err(Error::Cube(format!("{} maps for {} components", maps.len(), d.n())));
    }
    for (i, g) in maps.iter().enumerate() {
        if g.source() != d.vertex(1 << i) || g.target() != ambient {
            return Err(Error::Cube(format!("map {i} does not go from D({{{i}}}) to the ambient complex")));
        }
    }
    for i in 0..d.n() {
        for j in i + 1..d.n() {
            let t = (1 << i) | (1 << j);
            for q in d.vertex(t).degrees() {
                let a = &maps[i].component(q) * &d.edge(t, j).component(q);
                let b = &maps[j].component(q) * &d.edge(t, i).component(q);
                if a != b {
                    return Err(Error::Cube(format!("maps {i} and {j} disagree on D({{{i}, {j}}})")));
                }
            }
        }
    }
    let tot = punctured_cube_hocolim(d)?;
    let layout = TotLayout { order: d.subsets() };
    let mut comps = BTreeMap::new();
    for n in tot.degrees() {
        let (cols, ncols) = layout.offsets(d, n);
        let mut m = QMatrix::zeros(ambient.dim(n), ncols);
        for (i, g) in maps.iter().enumerate() {
            let block = g.component(n);
            if block.rows() > 0 && block.cols() > 0 {
                m.set_block(0, cols[&(1 << i)], &block);
            }
        }
        comps.insert(n, m);
    }
    let phi = ChainMap::new(tot, ambient.clone(), comps)?;
    ChainComplex::mapping_cone(&phi)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pt_complex(dim: usize) -> ChainComplex {
        ChainComplex::concentrated(0, dim)
    }

    fn deg0(m: QMatrix) -> BTreeMap<i64, QMatrix> {
        BTreeMap::from([(0, m)])
    }

    /// The cover {a,b}, {b,c} of {a,b,c}.
    fn two_cover() -> CubeDiagram {
        let vertices = BTreeMap::from([(0b01, pt_complex(2)), (0b10, pt_complex(2)), (0b11, pt_complex(1))]);
        // b is index 1 in W1 = {a,b} and index 0 in W2 = {b,c}
        let edges = BTreeMap::from([
            ((0b11, 1), deg0(QMatrix::from_ints(2, 1, &[0, 1]).unwrap())),
            ((0b11, 0), deg0(QMatrix::from_ints(2, 1, &[1, 0]).unwrap())),
        ]);
        CubeDiagram::new(2, vertices, edges).unwrap()
    }

    #[test]
    fn single_index_is_identity() {
        let c = ChainComplex::new(0, vec![1, 1], vec![(1, QMatrix::from_ints(1, 1, &[1]).unwrap())]).unwrap();
        let d = CubeDiagram::new(1, BTreeMap::from([(1, c.clone())]), BTreeMap::new()).unwrap();
        assert_eq!(punctured_cube_hocolim(&d).unwrap(), c);
    }

    #[test]
    fn two_cover_homology() {
        let tot = punctured_cube_hocolim(&two_cover()).unwrap();
        assert_eq!(tot.homology_dims(), BTreeMap::from([(0, 3), (1, 0)]));
        assert_eq!(tot.euler_characteristic(), 2 + 2 - 1);
    }

    #[test]
    fn matches_hand_built_pushout_cone() {
        let d = two_cover();
        let b = ChainComplex::concentrated(0, 4);
        let a = d.vertex(0b11).clone();
        // D({0,1}) -> D({0}) ⊕ D({1}) with the Čech signs
        let to0 = d.edge(0b11, 1).component(0);
        let to1 = d.edge(0b11, 0).component(0);
        let f = (-&to0).vstack(&to1).unwrap();
        let cone = ChainComplex::mapping_cone(&ChainMap::new(a, b, deg0(f)).unwrap()).unwrap();
        assert_eq!(punctured_cube_hocolim(&d).unwrap(), cone);
    }

    #[test]
    fn ks_examples() {
        let d = two_cover();
        let ambient = pt_complex(4);
        // a,b,c,d = 0,1,2,3
        let g0 = ChainMap::new(d.vertex(1).clone(), ambient.clone(), deg0(QMatrix::graph(&[0, 1], 4))).unwrap();
        let g1 = ChainMap::new(d.vertex(2).clone(), ambient.clone(), deg0(QMatrix::graph(&[1, 2], 4))).unwrap();
        let cone = ks_hocolim(&ambient, &d, &[g0.clone(), g1]).unwrap();
        assert_eq!(cone.homology_dim(0), 1);
        assert_eq!(cone.homology_dim(1), 0);
        // disagreeing maps are rejected
        let bad = ChainMap::new(d.vertex(2).clone(), ambient.clone(), deg0(QMatrix::graph(&[3, 2], 4))).unwrap();
        assert!(ks_hocolim(&ambient, &d, &[g0, bad]).is_err());
    }

    #[test]
    fn ks_without_components_is_the_ambient() {
        let ambient = ChainComplex::new(0, vec![2, 1], vec![(1, QMatrix::from_ints(2, 1, &[1, 1]).unwrap())]).unwrap();
        let d = CubeDiagram::new(0, BTreeMap::new(), BTreeMap::new()).unwrap();
        let cone = ks_hocolim(&ambient, &d, &[]).unwrap();
        assert_eq!(cone.homology_dims(), ambient.homology_dims());
    }

    #[test]
    fn ks_identity_cover_is_acyclic() {
        let ambient = pt_complex(3);
        let d = CubeDiagram::new(1, BTreeMap::from([(1, ambient.clone())]), BTreeMap::new()).unwrap();
        let id = ChainMap::new(ambient.clone(), ambient.clone(), deg0(QMatrix::identity(3))).unwrap();
        let cone = ks_hocolim(&ambient, &d, &[id]).unwrap();
        assert!(cone.homology_dims().values().all(|&h| h == 0));
    }

    #[test]
    fn non_commuting_square_rejected() {
        // three copies of a point, with one edge replaced by zero
        let one = pt_complex(1);
        let vertices: BTreeMap<u32, ChainComplex> = (1..8).map(|m| (m, one.clone())).collect();
        let mut edges = BTreeMap::new();
        for t in 1u32..8 {
            if t.count_ones() >= 2 {
                for i in mask_elements(t) {
                    edges.insert((t, i), deg0(QMatrix::identity(1)));
                }
            }
        }
        assert!(CubeDiagram::new(3, vertices.clone(), edges.clone()).is_ok());
        edges.insert((0b111, 0), deg0(QMatrix::zeros(1, 1)));
        assert!(CubeDiagram::new(3, vertices, edges).is_err());
    }

    #[test]
    fn contractible_cube_of_points() {
        // constant diagram of points over three indices: a 2-simplex
        let one = pt_complex(1);
        let vertices: BTreeMap<u32, ChainComplex> = (1..8).map(|m| (m, one.clone())).collect();
        let mut edges = BTreeMap::new();
        for t in 1u32..8 {
            if t.count_ones() >= 2 {
                for i in mask_elements(t) {
                    edges.insert((t, i), deg0(QMatrix::identity(1)));
                }
            }
        }
        let tot = punctured_cube_hocolim(&CubeDiagram::new(3, vertices, edges).unwrap()).unwrap();
        assert_eq!(tot.homology_dims(), BTreeMap::from([(0, 1), (1, 0), (2, 0)]));
        assert_eq!(tot.dim(0), 3);
        assert_eq!(tot.dim(2), 1);
    }

    #[test]
    fn internal_differentials_with_signs() {
        // two copies of the interval complex glued along a copy of itself
        let c = ChainComplex::new(0, vec![1, 1], vec![(1, QMatrix::from_ints(1, 1, &[1]).unwrap())]).unwrap();
        let id = BTreeMap::from([(0, QMatrix::identity(1)), (1, QMatrix::identity(1))]);
        let d = CubeDiagram::new(
            2,
            BTreeMap::from([(1, c.clone()), (2, c.clone()), (3, c)]),
            BTreeMap::from([((3, 0), id.clone()), ((3, 1), id)]),
        )
        .unwrap();
        let tot = punctured_cube_hocolim(&d).unwrap();
        assert!(tot.is_valid());
        assert!(tot.homology_dims().values().all(|&h| h == 0));
        assert_eq!(tot.euler_characteristic(), 0);
    }

    #[test]
    fn json_round_trip() {
        let d = two_cover();
        let s = serde_json::to_string(&d).unwrap();
        assert_eq!(serde_json::from_str::<CubeDiagram>(&s).unwrap(), d);
        let broken = s.replace(r#""omit":1"#, r#""omit":5"#);
        assert!(serde_json::from_str::<CubeDiagram>(&broken).is_err());
    }
}
