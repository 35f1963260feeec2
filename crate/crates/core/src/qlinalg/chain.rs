use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::matrix::QMatrix;
use crate::error::{Error, Result};

/// Bounded chain complex of finite-dimensional `Q`-vector spaces with
/// differentials `d_n : C_n -> C_{n-1}` lowering degree.
///
/// Degrees outside `[lo, hi]` are zero. `hi = lo - 1` is the zero complex.
/// `d_n` is stored for `lo < n <= hi`; the construction rejects complexes
/// with `d_{n} d_{n+1} != 0`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "ComplexRepr", into = "ComplexRepr")]
pub struct ChainComplex {
    lo: i64,
    hi: i64,
    dims: BTreeMap<i64, usize>,
    differentials: BTreeMap<i64, QMatrix>,
}

#[derive(Serialize, Deserialize)]
struct ComplexRepr {
    lo: i64,
    hi: i64,
    dims: BTreeMap<i64, usize>,
    #[serde(default)]
    differentials: BTreeMap<i64, QMatrix>,
}

impl TryFrom<ComplexRepr> for ChainComplex {
    type Error = Error;

    fn try_from(r: ComplexRepr) -> Result<Self> {
        ChainComplex::from_parts(r.lo, r.hi, r.dims, r.differentials)
    }
}

impl From<ChainComplex> for ComplexRepr {
    fn from(c: ChainComplex) -> Self {
        ComplexRepr {
            lo: c.lo,
            hi: c.hi,
            dims: c.dims,
            differentials: c.differentials,
        }
    }
}

impl ChainComplex {
    /// `dims[i]` is the dimension in degree `lo + i`; `differentials` lists
    /// `(n, d_n)` pairs. Missing differentials are zero.
    pub fn new(lo: i64, dims: Vec<usize>, differentials: Vec<(i64, QMatrix)>) -> Result<Self> {
        let hi = lo + dims.len() as i64 - 1;
        let dims = dims
            .into_iter()
            .enumerate()
            .map(|(i, d)| (lo + i as i64, d))
            .collect();
        Self::from_parts(lo, hi, dims, differentials.into_iter().collect())
    }

    pub fn zero() -> Self {
        ChainComplex {
            lo: 0,
            hi: -1,
            dims: BTreeMap::new(),
            differentials: BTreeMap::new(),
        }
    }

    /// `Q^dim` in a single degree.
    pub fn concentrated(degree: i64, dim: usize) -> Self {
        Self::new(degree, vec![dim], vec![]).expect("single degree complex")
    }

    fn from_parts(
        lo: i64,
        hi: i64,
        dims: BTreeMap<i64, usize>,
        mut differentials: BTreeMap<i64, QMatrix>,
    ) -> Result<Self> {
        if hi < lo - 1 {
            return Err(Error::ChainComplex(format!("degree range [{lo}, {hi}] is invalid")));
        }
        for n in lo..=hi {
            if !dims.contains_key(&n) {
                return Err(Error::ChainComplex(format!("missing dimension in degree {n}")));
            }
        }
        if let Some(n) = dims.keys().find(|&&n| n < lo || n > hi) {
            return Err(Error::ChainComplex(format!("dimension given outside range at degree {n}")));
        }
        for (&n, d) in &differentials {
            if n <= lo || n > hi {
                return Err(Error::ChainComplex(format!("differential d_{n} outside range")));
            }
            let want = (dims[&(n - 1)], dims[&n]);
            if d.shape() != want {
                return Err(Error::ChainComplex(format!(
                    "d_{n} has shape {:?}, expected {:?}",
                    d.shape(),
                    want
                )));
            }
        }
        for n in lo + 1..=hi {
            differentials
                .entry(n)
                .or_insert_with(|| QMatrix::zeros(dims[&(n - 1)], dims[&n]));
        }
        let c = ChainComplex {
            lo,
            hi,
            dims,
            differentials,
        };
        for n in lo + 1..hi {
            if !(&c.differentials[&n] * &c.differentials[&(n + 1)]).is_zero() {
                return Err(Error::ChainComplex(format!("d_{n} d_{} is not zero", n + 1)));
            }
        }
        Ok(c)
    }

    pub fn lo(&self) -> i64 {
        self.lo
    }

    pub fn hi(&self) -> i64 {
        self.hi
    }

    fn is_empty_range(&self) -> bool {
        self.hi < self.lo
    }

    pub fn degrees(&self) -> std::ops::RangeInclusive<i64> {
        self.lo..=self.hi
    }

    pub fn dim(&self, n: i64) -> usize {
        self.dims.get(&n).copied().unwrap_or(0)
    }

    /// `d_n : C_n -> C_{n-1}`, zero outside the stored range.
    pub fn differential(&self, n: i64) -> QMatrix {
        self.differentials
            .get(&n)
            .cloned()
            .unwrap_or_else(|| QMatrix::zeros(self.dim(n - 1), self.dim(n)))
    }

    /// `dim H_n = nullity(d_n) - rank(d_{n+1})` for every degree in range.
    pub fn homology_dims(&self) -> BTreeMap<i64, usize> {
        self.degrees()
            .map(|n| {
                let z = self.differential(n).nullity();
                let b = self.differential(n + 1).rank();
                (n, z - b)
            })
            .collect()
    }

    pub fn homology_dim(&self, n: i64) -> usize {
        if n < self.lo || n > self.hi {
            return 0;
        }
        self.differential(n).nullity() - self.differential(n + 1).rank()
    }

    pub fn euler_characteristic(&self) -> i64 {
        self.degrees()
            .map(|n| sign(n) * self.dim(n) as i64)
            .sum()
    }

    pub fn homology_euler_characteristic(&self) -> i64 {
        self.homology_dims()
            .into_iter()
            .map(|(n, h)| sign(n) * h as i64)
            .sum()
    }

    /// True when every `d_n d_{n+1}` vanishes; always holds for a constructed
    /// complex, exposed for checks on assembled complexes.
    pub fn is_valid(&self) -> bool {
        (self.lo + 1..self.hi)
            .all(|n| (&self.differential(n) * &self.differential(n + 1)).is_zero())
    }

    /// Mapping cone of `f : A -> B`: `Cone_n = B_n (+) A_{n-1}` with
    /// differential `[[d_B, f], [0, -d_A]]`.
    pub fn mapping_cone(f: &ChainMap) -> Result<ChainComplex> {
        let (a, b) = (&f.source, &f.target);
        let mut ranges = Vec::new();
        if !b.is_empty_range() {
            ranges.push((b.lo, b.hi));
        }
        if !a.is_empty_range() {
            ranges.push((a.lo + 1, a.hi + 1));
        }
        let Some(lo) = ranges.iter().map(|r| r.0).min() else {
            return Ok(ChainComplex::zero());
        };
        let hi = ranges.iter().map(|r| r.1).max().unwrap_or(lo);
        let dims: Vec<usize> = (lo..=hi).map(|n| b.dim(n) + a.dim(n - 1)).collect();
        let mut diffs = Vec::new();
        for n in lo + 1..=hi {
            let (bn, an1) = (b.dim(n), a.dim(n - 1));
            let (bn1, an2) = (b.dim(n - 1), a.dim(n - 2));
            let mut d = QMatrix::zeros(bn1 + an2, bn + an1);
            d.set_block(0, 0, &b.differential(n));
            d.set_block(0, bn, &f.component(n - 1));
            d.set_block(bn1, bn, &-&a.differential(n - 1));
            diffs.push((n, d));
        }
        ChainComplex::new(lo, dims, diffs)
    }
}

fn sign(n: i64) -> i64 {
    if n.rem_euclid(2) == 0 {
        1
    } else {
        -1
    }
}

/// Degreewise matrices `f_n : A_n -> B_n` commuting with the differentials.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ChainMap {
    source: ChainComplex,
    target: ChainComplex,
    components: BTreeMap<i64, QMatrix>,
}

impl ChainMap {
    /// Missing components are zero. Fails unless `d_B f_n = f_{n-1} d_A`.
    pub fn new(
        source: ChainComplex,
        target: ChainComplex,
        components: BTreeMap<i64, QMatrix>,
    ) -> Result<Self> {
        for (&n, m) in &components {
            if m.shape() != (target.dim(n), source.dim(n)) {
                return Err(Error::ChainMap(format!(
                    "component {n} has shape {:?}, expected {:?}",
                    m.shape(),
                    (target.dim(n), source.dim(n))
                )));
            }
        }
        let f = ChainMap {
            source,
            target,
            components,
        };
        let lo = f.source.lo.min(f.target.lo);
        let hi = f.source.hi.max(f.target.hi);
        for n in lo..=hi + 1 {
            let left = &f.target.differential(n) * &f.component(n);
            let right = &f.component(n - 1) * &f.source.differential(n);
            if left != right {
                return Err(Error::ChainMap(format!(
                    "does not commute with the differential in degree {n}"
                )));
            }
        }
        Ok(f)
    }

    pub fn source(&self) -> &ChainComplex {
        &self.source
    }

    pub fn target(&self) -> &ChainComplex {
        &self.target
    }

    /// The stored components; degrees not listed are zero.
    pub fn components(&self) -> &BTreeMap<i64, QMatrix> {
        &self.components
    }

    pub fn component(&self, n: i64) -> QMatrix {
        self.components
            .get(&n)
            .cloned()
            .unwrap_or_else(|| QMatrix::zeros(self.target.dim(n), self.source.dim(n)))
    }
}
