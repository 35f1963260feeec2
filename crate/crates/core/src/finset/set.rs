use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// The set `{0, ..., size - 1}`, optionally with display labels.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "FinSetRepr")]
pub struct FinSet {
    size: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    labels: Option<Vec<String>>,
}

#[derive(Deserialize)]
struct FinSetRepr {
    size: usize,
    labels: Option<Vec<String>>,
}

impl TryFrom<FinSetRepr> for FinSet {
    type Error = Error;

    fn try_from(r: FinSetRepr) -> Result<Self> {
        match r.labels {
            Some(l) => FinSet::with_labels(l),
            None => FinSet::new(r.size),
        }
        .and_then(|s| {
            if s.size == r.size {
                Ok(s)
            } else {
                Err(Error::BadLabels {
                    expected: r.size,
                    got: s.size,
                })
            }
        })
    }
}

impl FinSet {
    pub fn new(size: usize) -> Result<Self> {
        if size == 0 {
            return Err(Error::EmptySet);
        }
        Ok(FinSet { size, labels: None })
    }

    /// Labels must be distinct; their count is the size.
    pub fn with_labels(labels: Vec<String>) -> Result<Self> {
        if labels.is_empty() {
            return Err(Error::EmptySet);
        }
        let distinct: BTreeSet<&String> = labels.iter().collect();
        if distinct.len() != labels.len() {
            return Err(Error::BadLabels {
                expected: labels.len(),
                got: distinct.len(),
            });
        }
        Ok(FinSet {
            size: labels.len(),
            labels: Some(labels),
        })
    }

    /// A set that may be empty. Only the free commutative monoid construction
    /// needs these, as fibres of non-surjective maps.
    pub(crate) fn possibly_empty(size: usize) -> Self {
        FinSet { size, labels: None }
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn labels(&self) -> Option<&[String]> {
        self.labels.as_deref()
    }

    pub fn label(&self, i: usize) -> String {
        match &self.labels {
            Some(l) => l[i].clone(),
            None => i.to_string(),
        }
    }

    pub fn unlabeled(&self) -> Self {
        FinSet {
            size: self.size,
            labels: None,
        }
    }
}

/// A map `{0..dom} -> {0..cod}` given by its list of values.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "SetMapRepr")]
pub struct SetMap {
    dom: usize,
    cod: usize,
    values: Vec<usize>,
}

#[derive(Deserialize)]
struct SetMapRepr {
    dom: usize,
    cod: usize,
    values: Vec<usize>,
}

impl TryFrom<SetMapRepr> for SetMap {
    type Error = Error;

    fn try_from(r: SetMapRepr) -> Result<Self> {
        SetMap::new(r.dom, r.cod, r.values)
    }
}

impl SetMap {
    pub fn new(dom: usize, cod: usize, values: Vec<usize>) -> Result<Self> {
        if values.len() != dom {
            return Err(Error::MapLength {
                dom,
                values: values.len(),
            });
        }
        if let Some((index, &value)) = values.iter().enumerate().find(|(_, &v)| v >= cod) {
            return Err(Error::MapOutOfRange { index, value, cod });
        }
        Ok(SetMap { dom, cod, values })
    }

    pub fn identity(n: usize) -> Self {
        SetMap {
            dom: n,
            cod: n,
            values: (0..n).collect(),
        }
    }

    pub fn constant(dom: usize, cod: usize, value: usize) -> Result<Self> {
        Self::new(dom, cod, vec![value; dom])
    }

    pub fn dom(&self) -> usize {
        self.dom
    }

    pub fn cod(&self) -> usize {
        self.cod
    }

    pub fn values(&self) -> &[usize] {
        &self.values
    }

    pub fn apply(&self, i: usize) -> usize {
        self.values[i]
    }

    /// `then ∘ self`: first apply `self`, then `then`.
    pub fn then(&self, then: &SetMap) -> Result<SetMap> {
        compose(self, then)
    }

    pub fn is_bijective(&self) -> bool {
        if self.dom != self.cod {
            return false;
        }
        let mut seen = vec![false; self.cod];
        for &v in &self.values {
            if seen[v] {
                return false;
            }
            seen[v] = true;
        }
        true
    }

    pub fn inverse(&self) -> Option<SetMap> {
        if !self.is_bijective() {
            return None;
        }
        let mut inv = vec![0; self.dom];
        for (i, &v) in self.values.iter().enumerate() {
            inv[v] = i;
        }
        Some(SetMap {
            dom: self.cod,
            cod: self.dom,
            values: inv,
        })
    }

    /// Fibre sizes indexed by codomain element.
    pub fn fiber_sizes(&self) -> Vec<usize> {
        let mut sizes = vec![0; self.cod];
        for &v in &self.values {
            sizes[v] += 1;
        }
        sizes
    }

    /// Every map `{0..dom} -> {0..cod}` in lexicographic order of values.
    pub fn all(dom: usize, cod: usize) -> impl Iterator<Item = SetMap> {
        let total = if dom == 0 { 1 } else { cod.checked_pow(dom as u32).unwrap_or(0) };
        (0..total).map(move |mut n| {
            let mut values = vec![0; dom];
            for slot in values.iter_mut().rev() {
                *slot = n % cod;
                n /= cod;
            }
            SetMap { dom, cod, values }
        })
    }

    /// Every bijection of `{0..n}` in lexicographic order.
    pub fn permutations(n: usize) -> Vec<SetMap> {
        let mut out = Vec::new();
        let mut current = Vec::with_capacity(n);
        let mut used = vec![false; n];
        fn go(n: usize, current: &mut Vec<usize>, used: &mut [bool], out: &mut Vec<SetMap>) {
            if current.len() == n {
                out.push(SetMap {
                    dom: n,
                    cod: n,
                    values: current.clone(),
                });
                return;
            }
            for v in 0..n {
                if !used[v] {
                    used[v] = true;
                    current.push(v);
                    go(n, current, used, out);
                    current.pop();
                    used[v] = false;
                }
            }
        }
        go(n, &mut current, &mut used, &mut out);
        out
    }
}

/// `g ∘ f`, defined when the codomain of `f` is the domain of `g`.
pub fn compose(f: &SetMap, g: &SetMap) -> Result<SetMap> {
    if f.cod != g.dom {
        return Err(Error::ComposeMismatch {
            left: f.cod,
            right: g.dom,
        });
    }
    Ok(SetMap {
        dom: f.dom,
        cod: g.cod,
        values: f.values.iter().map(|&v| g.values[v]).collect(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn empty_sets_are_rejected() {
        assert_eq!(FinSet::new(0), Err(Error::EmptySet));
        assert!(FinSet::with_labels(vec![]).is_err());
        assert!(serde_json::from_str::<FinSet>(r#"{"size":0}"#).is_err());
    }

    #[test]
    fn labels_must_be_distinct_and_sized() {
        assert!(FinSet::with_labels(vec!["a".into(), "a".into()]).is_err());
        assert!(serde_json::from_str::<FinSet>(r#"{"size":3,"labels":["a","b"]}"#).is_err());
        let s: FinSet = serde_json::from_str(r#"{"size":2,"labels":["a","b"]}"#).unwrap();
        assert_eq!(s.label(1), "b");
    }

    #[test]
    fn map_validation() {
        assert!(SetMap::new(2, 2, vec![0, 2]).is_err());
        assert!(SetMap::new(2, 2, vec![0]).is_err());
        assert!(serde_json::from_str::<SetMap>(r#"{"dom":2,"cod":1,"values":[0,1]}"#).is_err());
    }

    #[test]
    fn compose_examples() {
        let id3 = SetMap::identity(3);
        assert_eq!(compose(&id3, &id3).unwrap(), id3);

        let f = SetMap::new(2, 1, vec![0, 0]).unwrap();
        let g = SetMap::new(1, 2, vec![1]).unwrap();
        assert_eq!(compose(&f, &g).unwrap(), SetMap::new(2, 2, vec![1, 1]).unwrap());
        assert!(compose(&g, &g).is_err());
    }

    #[test]
    fn compose_is_associative_and_unital_exhaustively() {
        for a in 1..=3 {
            for b in 1..=3 {
                for f in SetMap::all(a, b) {
                    assert_eq!(compose(&SetMap::identity(a), &f).unwrap(), f);
                    assert_eq!(compose(&f, &SetMap::identity(b)).unwrap(), f);
                    for c in 1..=3 {
                        for g in SetMap::all(b, c) {
                            let gf = compose(&f, &g).unwrap();
                            for d in 1..=3 {
                                for h in SetMap::all(c, d) {
                                    let left = compose(&gf, &h).unwrap();
                                    let right = compose(&f, &compose(&g, &h).unwrap()).unwrap();
                                    assert_eq!(left, right);
                                }
                            }
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn enumeration_counts() {
        assert_eq!(SetMap::all(3, 2).count(), 8);
        assert_eq!(SetMap::all(0, 2).count(), 1);
        assert_eq!(SetMap::permutations(4).len(), 24);
        assert!(SetMap::permutations(3).iter().all(SetMap::is_bijective));
    }

    #[test]
    fn inverse_round_trip() {
        let p = SetMap::new(3, 3, vec![2, 0, 1]).unwrap();
        let q = p.inverse().unwrap();
        assert_eq!(compose(&p, &q).unwrap(), SetMap::identity(3));
        assert!(SetMap::new(2, 2, vec![0, 0]).unwrap().inverse().is_none());
    }
}
