use serde::{Deserialize, Serialize};

use super::set::{compose, FinSet, SetMap};
use crate::error::{Error, Result};

/// A chain of set maps `S1 -> S2 -> ... -> Sk`, an object of `Fin^k_gr`.
///
/// `k = 0` is the unique object of `Fin^0_gr`. Sets are nonempty unless the
/// diagram was built with [`FinDiagram::block`].
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "DiagramRepr")]
pub struct FinDiagram {
    sets: Vec<FinSet>,
    maps: Vec<SetMap>,
}

#[derive(Deserialize)]
struct DiagramRepr {
    sets: Vec<FinSet>,
    #[serde(default)]
    maps: Vec<SetMap>,
}

impl TryFrom<DiagramRepr> for FinDiagram {
    type Error = Error;

    fn try_from(r: DiagramRepr) -> Result<Self> {
        FinDiagram::new(r.sets, r.maps)
    }
}

impl FinDiagram {
    pub fn new(sets: Vec<FinSet>, maps: Vec<SetMap>) -> Result<Self> {
        if sets.iter().any(|s| s.size() == 0) {
            return Err(Error::EmptySet);
        }
        Self::checked(sets, maps)
    }

    fn checked(sets: Vec<FinSet>, maps: Vec<SetMap>) -> Result<Self> {
        let expected = sets.len().saturating_sub(1);
        if maps.len() != expected {
            return Err(Error::Shape(format!(
                "{} sets need {expected} maps, got {}",
                sets.len(),
                maps.len()
            )));
        }
        for (i, m) in maps.iter().enumerate() {
            if m.dom() != sets[i].size() || m.cod() != sets[i + 1].size() {
                return Err(Error::DiagramChain { index: i });
            }
        }
        Ok(FinDiagram { sets, maps })
    }

    /// Diagram from sizes and value lists, e.g. `from_values(&[3, 2], &[&[0, 0, 1]])`.
    pub fn from_values(sizes: &[usize], values: &[&[usize]]) -> Result<Self> {
        let sets = sizes.iter().map(|&n| FinSet::new(n)).collect::<Result<Vec<_>>>()?;
        let maps = values
            .iter()
            .enumerate()
            .map(|(i, v)| SetMap::new(sizes[i], *sizes.get(i + 1).unwrap_or(&0), v.to_vec()))
            .collect::<Result<Vec<_>>>()?;
        Self::new(sets, maps)
    }

    /// Like [`FinDiagram::from_values`] but empty sets are allowed.
    pub fn block(sizes: &[usize], values: &[Vec<usize>]) -> Result<Self> {
        let sets = sizes.iter().map(|&n| FinSet::possibly_empty(n)).collect();
        let maps = values
            .iter()
            .enumerate()
            .map(|(i, v)| SetMap::new(sizes[i], *sizes.get(i + 1).unwrap_or(&0), v.clone()))
            .collect::<Result<Vec<_>>>()?;
        Self::checked(sets, maps)
    }

    /// The empty diagram, unique object of `Fin^0_gr`.
    pub fn empty() -> Self {
        FinDiagram {
            sets: vec![],
            maps: vec![],
        }
    }

    /// A bare set as an object of `Fin^1_gr`.
    pub fn single(n: usize) -> Result<Self> {
        Self::new(vec![FinSet::new(n)?], vec![])
    }

    pub fn k(&self) -> usize {
        self.sets.len()
    }

    pub fn sets(&self) -> &[FinSet] {
        &self.sets
    }

    pub fn maps(&self) -> &[SetMap] {
        &self.maps
    }

    pub fn sizes(&self) -> Vec<usize> {
        self.sets.iter().map(FinSet::size).collect()
    }

    /// `|S1|`, zero for the empty diagram.
    pub fn first_size(&self) -> usize {
        self.sets.first().map_or(0, FinSet::size)
    }

    pub fn is_nonempty(&self) -> bool {
        self.sets.iter().all(|s| s.size() > 0)
    }

    /// Copy with labels dropped.
    pub fn unlabeled(&self) -> Self {
        FinDiagram {
            sets: self.sets.iter().map(FinSet::unlabeled).collect(),
            maps: self.maps.clone(),
        }
    }

    /// `(sizes, value lists)`, the key canonical representatives are ordered by.
    pub fn sort_key(&self) -> (Vec<usize>, Vec<Vec<usize>>) {
        (
            self.sizes(),
            self.maps.iter().map(|m| m.values().to_vec()).collect(),
        )
    }

    pub(crate) fn from_parts_unchecked(sizes: &[usize], values: Vec<Vec<usize>>) -> Self {
        let sets = sizes.iter().map(|&n| FinSet::possibly_empty(n)).collect();
        let maps = values
            .into_iter()
            .enumerate()
            .map(|(i, v)| SetMap::new(sizes[i], sizes[i + 1], v).expect("valid chain"))
            .collect();
        FinDiagram { sets, maps }
    }
}

/// Componentwise bijections `σ_i : S_i -> S'_i` with `σ_{i+1} f_i = f'_i σ_i`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct DiagramIso {
    components: Vec<SetMap>,
}

impl DiagramIso {
    /// Validates bijectivity and naturality against `source` and `target`.
    pub fn new(components: Vec<SetMap>, source: &FinDiagram, target: &FinDiagram) -> Result<Self> {
        let iso = DiagramIso { components };
        iso.check(source, target)?;
        Ok(iso)
    }

    pub(crate) fn from_components(components: Vec<SetMap>) -> Self {
        DiagramIso { components }
    }

    pub fn identity(d: &FinDiagram) -> Self {
        DiagramIso {
            components: d.sets.iter().map(|s| SetMap::identity(s.size())).collect(),
        }
    }

    pub fn components(&self) -> &[SetMap] {
        &self.components
    }

    /// The bijection on the first set, through which `Aut S` acts on tensor
    /// powers indexed by `S1`.
    pub fn first(&self) -> Option<&SetMap> {
        self.components.first()
    }

    pub fn check(&self, source: &FinDiagram, target: &FinDiagram) -> Result<()> {
        if source.k() != target.k() || self.components.len() != source.k() {
            return Err(Error::BadIso(format!(
                "{} components between diagrams of length {} and {}",
                self.components.len(),
                source.k(),
                target.k()
            )));
        }
        for (i, c) in self.components.iter().enumerate() {
            if c.dom() != source.sets[i].size() || c.cod() != target.sets[i].size() {
                return Err(Error::BadIso(format!("component {i} has the wrong shape")));
            }
            if !c.is_bijective() {
                return Err(Error::BadIso(format!("component {i} is not bijective")));
            }
        }
        for i in 0..source.maps.len() {
            let left = compose(&source.maps[i], &self.components[i + 1])?;
            let right = compose(&self.components[i], &target.maps[i])?;
            if left != right {
                return Err(Error::BadIso(format!("naturality square {i} does not commute")));
            }
        }
        Ok(())
    }

    pub fn is_iso_between(&self, source: &FinDiagram, target: &FinDiagram) -> bool {
        self.check(source, target).is_ok()
    }

    /// `then ∘ self`.
    pub fn then(&self, then: &DiagramIso) -> Result<DiagramIso> {
        if self.components.len() != then.components.len() {
            return Err(Error::BadIso("composing isos of different length".into()));
        }
        let components = self
            .components
            .iter()
            .zip(&then.components)
            .map(|(a, b)| compose(a, b))
            .collect::<Result<Vec<_>>>()?;
        Ok(DiagramIso { components })
    }

    pub fn inverse(&self) -> DiagramIso {
        DiagramIso {
            components: self
                .components
                .iter()
                .map(|c| c.inverse().expect("iso components are bijective"))
                .collect(),
        }
    }

    pub fn is_identity(&self) -> bool {
        self.components
            .iter()
            .all(|c| c.values().iter().enumerate().all(|(i, &v)| i == v))
    }
}
