//! Finite groups acting on finite sets, the combinatorial model of finite
//! étale schemes over a field, and Galois descent for coalgebra morphisms.
//!
//! Groups are given by full multiplication tables, `table[a][b] = a·b`. An
//! action is a homomorphism `ρ` into permutations with `ρ(ab) = ρ(a) ∘ ρ(b)`.
//! `G` acts on matrices `C : X -> Y` by `g·C = P_Y(g) C P_X(g)⁻¹`.

use std::collections::{BTreeSet, VecDeque};

use serde::{Deserialize, Serialize};

use crate::artin::{morphism_from_setmap, solve_coalgebra_morphisms, ArtinComonoid, CoalgMorphism};
use crate::error::{Error, Result};
use crate::finset::{compose, FinSet, SetMap};
use crate::qlinalg::QMatrix;

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "GroupRepr")]
pub struct FiniteGroup {
    order: usize,
    table: Vec<Vec<usize>>,
    #[serde(skip)]
    identity: usize,
    #[serde(skip)]
    inverses: Vec<usize>,
}

#[derive(Deserialize)]
struct GroupRepr {
    order: usize,
    table: Vec<Vec<usize>>,
}

impl TryFrom<GroupRepr> for FiniteGroup {
    type Error = Error;

    fn try_from(r: GroupRepr) -> Result<Self> {
        if r.table.len() != r.order {
            return Err(Error::GroupTable(format!(
                "order {} but {} rows",
                r.order,
                r.table.len()
            )));
        }
        FiniteGroup::from_table(r.table)
    }
}

impl FiniteGroup {
    /// Validates closure, identity, inverses and associativity.
    pub fn from_table(table: Vec<Vec<usize>>) -> Result<Self> {
        let n = table.len();
        if n == 0 {
            return Err(Error::GroupTable("a group has at least one element".into()));
        }
        for (a, row) in table.iter().enumerate() {
            if row.len() != n {
                return Err(Error::GroupTable(format!("row {a} has length {}", row.len())));
            }
            if let Some(&v) = row.iter().find(|&&v| v >= n) {
                return Err(Error::GroupTable(format!("entry {v} in row {a} is out of range")));
            }
        }
        let identity = (0..n)
            .find(|&e| (0..n).all(|g| table[e][g] == g && table[g][e] == g))
            .ok_or_else(|| Error::GroupTable("no identity element".into()))?;
        let mut inverses = Vec::with_capacity(n);
        for (a, row) in table.iter().enumerate() {
            let inv = (0..n)
                .find(|&b| row[b] == identity && table[b][a] == identity)
                .ok_or_else(|| Error::GroupTable(format!("element {a} has no inverse")))?;
            inverses.push(inv);
        }
        for a in 0..n {
            for b in 0..n {
                for c in 0..n {
                    if table[table[a][b]][c] != table[a][table[b][c]] {
                        return Err(Error::GroupTable(format!(
                            "not associative at ({a}, {b}, {c})"
                        )));
                    }
                }
            }
        }
        Ok(FiniteGroup {
            order: n,
            table,
            identity,
            inverses,
        })
    }

    pub fn trivial() -> Self {
        Self::cyclic(1)
    }

    /// `Z/n` with `a·b = a + b mod n`.
    pub fn cyclic(n: usize) -> Self {
        assert!(n >= 1, "cyclic group of order 0");
        let table = (0..n).map(|a| (0..n).map(|b| (a + b) % n).collect()).collect();
        Self::from_table(table).expect("cyclic table")
    }

    /// `Z/2 x Z/2` with elements encoded as bit pairs.
    pub fn klein_four() -> Self {
        let table = (0..4).map(|a| (0..4).map(|b| a ^ b).collect()).collect();
        Self::from_table(table).expect("Klein table")
    }

    /// Permutations of three points in [`SetMap::permutations`] order,
    /// `a·b = a ∘ b`.
    pub fn symmetric3() -> Self {
        let perms = SetMap::permutations(3);
        let index = |p: &SetMap| perms.iter().position(|q| q == p).expect("closed");
        let table = perms
            .iter()
            .map(|a| {
                perms
                    .iter()
                    .map(|b| index(&compose(b, a).expect("same size")))
                    .collect()
            })
            .collect();
        Self::from_table(table).expect("S3 table")
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn table(&self) -> &[Vec<usize>] {
        &self.table
    }

    pub fn identity(&self) -> usize {
        self.identity
    }

    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.table[a][b]
    }

    pub fn inverse(&self, a: usize) -> usize {
        self.inverses[a]
    }

    pub fn is_abelian(&self) -> bool {
        (0..self.order).all(|a| (0..a).all(|b| self.table[a][b] == self.table[b][a]))
    }

    /// Elements of the subgroup generated by `gens`, sorted.
    pub fn generated(&self, gens: &[usize]) -> Vec<usize> {
        let mut seen = BTreeSet::from([self.identity]);
        let mut queue = VecDeque::from([self.identity]);
        while let Some(x) = queue.pop_front() {
            for &g in gens {
                let y = self.mul(x, g);
                if seen.insert(y) {
                    queue.push_back(y);
                }
            }
        }
        seen.into_iter().collect()
    }

    /// A small generating set, chosen greedily in element order.
    pub fn generators(&self) -> Vec<usize> {
        let mut gens = Vec::new();
        let mut span = self.generated(&gens);
        for g in 0..self.order {
            if span.binary_search(&g).is_err() {
                gens.push(g);
                span = self.generated(&gens);
            }
        }
        gens
    }

    /// The subgroup on `elements` (which must be closed under products),
    /// relabeled `0..len` in the given order, with the inclusion map.
    pub fn subgroup(&self, elements: &[usize]) -> Result<(FiniteGroup, Vec<usize>)> {
        let pos = |g: usize| elements.iter().position(|&h| h == g);
        let mut table = Vec::with_capacity(elements.len());
        for &a in elements {
            let mut row = Vec::with_capacity(elements.len());
            for &b in elements {
                let p = pos(self.mul(a, b))
                    .ok_or_else(|| Error::GroupTable(format!("subset not closed at ({a}, {b})")))?;
                row.push(p);
            }
            table.push(row);
        }
        Ok((FiniteGroup::from_table(table)?, elements.to_vec()))
    }

    /// Cyclic subgroups and the whole group, deduplicated and sorted.
    pub fn cyclic_subgroups(&self) -> Vec<Vec<usize>> {
        let mut out: BTreeSet<Vec<usize>> = (0..self.order).map(|g| self.generated(&[g])).collect();
        out.insert((0..self.order).collect());
        out.into_iter().collect()
    }
}

/// A finite set with a group action, `action[g]` the permutation of `g`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "GSetRepr")]
pub struct GSet {
    group: FiniteGroup,
    carrier: FinSet,
    #[serde(serialize_with = "ser_action")]
    action: Vec<SetMap>,
}

fn ser_action<S: serde::Serializer>(action: &[SetMap], s: S) -> std::result::Result<S::Ok, S::Error> {
    s.collect_seq(action.iter().map(SetMap::values))
}

#[derive(Deserialize)]
struct GSetRepr {
    group: FiniteGroup,
    carrier: FinSet,
    action: Vec<Vec<usize>>,
}

impl TryFrom<GSetRepr> for GSet {
    type Error = Error;

    fn try_from(r: GSetRepr) -> Result<Self> {
        GSet::from_perms(r.group, r.carrier, r.action)
    }
}

impl GSet {
    /// Checks `ρ(e) = id` and `ρ(gh) = ρ(g) ∘ ρ(h)`.
    pub fn new(group: FiniteGroup, carrier: FinSet, action: Vec<SetMap>) -> Result<Self> {
        let n = carrier.size();
        if action.len() != group.order() {
            return Err(Error::Action(format!(
                "{} permutations for a group of order {}",
                action.len(),
                group.order()
            )));
        }
        for (g, p) in action.iter().enumerate() {
            if p.dom() != n || p.cod() != n || !p.is_bijective() {
                return Err(Error::Action(format!("element {g} does not act by a bijection")));
            }
        }
        if action[group.identity()] != SetMap::identity(n) {
            return Err(Error::Action("the identity does not act trivially".into()));
        }
        for g in 0..group.order() {
            for h in 0..group.order() {
                let gh = group.mul(g, h);
                if (0..n).any(|x| action[gh].apply(x) != action[g].apply(action[h].apply(x))) {
                    return Err(Error::Action(format!("ρ({g}·{h}) ≠ ρ({g}) ∘ ρ({h})")));
                }
            }
        }
        Ok(GSet {
            group,
            carrier,
            action,
        })
    }

    pub fn from_perms(group: FiniteGroup, carrier: FinSet, perms: Vec<Vec<usize>>) -> Result<Self> {
        let n = carrier.size();
        let action = perms
            .into_iter()
            .map(|p| SetMap::new(n, n, p))
            .collect::<Result<Vec<_>>>()?;
        Self::new(group, carrier, action)
    }

    pub fn trivial(group: &FiniteGroup, n: usize) -> Result<Self> {
        let action = vec![SetMap::identity(n); group.order()];
        Self::new(group.clone(), FinSet::new(n)?, action)
    }

    /// `G` acting on itself by left multiplication.
    pub fn regular(group: &FiniteGroup) -> Self {
        let n = group.order();
        let action = (0..n)
            .map(|g| SetMap::new(n, n, (0..n).map(|x| group.mul(g, x)).collect()).expect("row"))
            .collect();
        Self::new(group.clone(), FinSet::new(n).expect("nonempty"), action).expect("regular action")
    }

    /// Every action of `group` on `{0..n}`: generators are sent to arbitrary
    /// permutations and the assignment is extended along the Cayley graph,
    /// keeping only consistent extensions.
    pub fn all_actions(group: &FiniteGroup, n: usize) -> Result<Vec<GSet>> {
        let carrier = FinSet::new(n)?;
        let gens = group.generators();
        let perms = SetMap::permutations(n);
        let mut out = Vec::new();
        let mut choice = vec![0usize; gens.len()];
        loop {
            if let Some(action) = extend_action(group, n, &gens, &choice.iter().map(|&i| &perms[i]).collect::<Vec<_>>()) {
                out.push(GSet::new(group.clone(), carrier.clone(), action)?);
            }
            let mut j = gens.len();
            loop {
                if j == 0 {
                    return Ok(out);
                }
                j -= 1;
                choice[j] += 1;
                if choice[j] < perms.len() {
                    break;
                }
                choice[j] = 0;
            }
        }
    }

    pub fn group(&self) -> &FiniteGroup {
        &self.group
    }

    pub fn carrier(&self) -> &FinSet {
        &self.carrier
    }

    pub fn size(&self) -> usize {
        self.carrier.size()
    }

    pub fn action(&self, g: usize) -> &SetMap {
        &self.action[g]
    }

    /// `P(g)` with `P[ρ(g)x][x] = 1`.
    pub fn permutation_matrix(&self, g: usize) -> QMatrix {
        QMatrix::graph(self.action[g].values(), self.size())
    }

    /// The same set with the action restricted along a subgroup inclusion.
    pub fn restrict(&self, subgroup: &FiniteGroup, inclusion: &[usize]) -> Result<GSet> {
        if inclusion.len() != subgroup.order() {
            return Err(Error::Action("inclusion does not match the subgroup order".into()));
        }
        let action = inclusion.iter().map(|&g| self.action[g].clone()).collect();
        GSet::new(subgroup.clone(), self.carrier.clone(), action)
    }
}

fn extend_action(group: &FiniteGroup, n: usize, gens: &[usize], images: &[&SetMap]) -> Option<Vec<SetMap>> {
    let mut action: Vec<Option<SetMap>> = vec![None; group.order()];
    let e = group.identity();
    action[e] = Some(SetMap::identity(n));
    let mut queue = VecDeque::from([e]);
    while let Some(x) = queue.pop_front() {
        let px = action[x].clone().expect("assigned");
        for (&s, ps) in gens.iter().zip(images) {
            let y = group.mul(x, s);
            let py = compose(ps, &px).expect("same size");
            match &action[y] {
                Some(existing) if *existing != py => return None,
                Some(_) => {}
                None => {
                    action[y] = Some(py);
                    queue.push_back(y);
                }
            }
        }
    }
    action.into_iter().collect()
}

fn same_group(x: &GSet, y: &GSet) -> Result<()> {
    if x.group.table != y.group.table {
        return Err(Error::GroupMismatch);
    }
    Ok(())
}

/// Set maps with `f ∘ ρ_X(g) = ρ_Y(g) ∘ f` for every `g`, in [`SetMap::all`]
/// order.
pub fn equivariant_set_maps(x: &GSet, y: &GSet) -> Result<Vec<SetMap>> {
    same_group(x, y)?;
    let order = x.group.order();
    Ok(SetMap::all(x.size(), y.size())
        .filter(|f| {
            (0..order).all(|g| {
                (0..x.size()).all(|p| f.apply(x.action[g].apply(p)) == y.action[g].apply(f.apply(p)))
            })
        })
        .collect())
}

/// `g·C = P_Y(g) C P_X(g)⁻¹`.
pub fn act_on_matrix(x: &GSet, y: &GSet, g: usize, c: &QMatrix) -> QMatrix {
    &(&y.permutation_matrix(g) * c) * &x.permutation_matrix(g).transpose()
}

/// Solver output between the canonical comonoids, filtered by invariance
/// under the group action on matrices.
pub fn fixed_coalgebra_morphisms(x: &GSet, y: &GSet) -> Result<Vec<CoalgMorphism>> {
    same_group(x, y)?;
    let cx = ArtinComonoid::canonical(&x.carrier);
    let cy = ArtinComonoid::canonical(&y.carrier);
    let order = x.group.order();
    Ok(solve_coalgebra_morphisms(&cx, &cy)?
        .into_iter()
        .filter(|c| (0..order).all(|g| act_on_matrix(x, y, g, &c.matrix) == c.matrix))
        .collect())
}

/// Both sides of the descent bijection for one pair of G-sets.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DescentReport {
    pub x: usize,
    pub y: usize,
    pub equivariant_maps: usize,
    pub fixed_morphisms: usize,
    pub pass: bool,
}

pub fn verify_descent(x: &GSet, y: &GSet) -> Result<DescentReport> {
    let maps = equivariant_set_maps(x, y)?;
    let fixed = fixed_coalgebra_morphisms(x, y)?;
    let graphs: BTreeSet<QMatrix> = maps
        .iter()
        .map(|f| morphism_from_setmap(f).map(|c| c.matrix))
        .collect::<Result<_>>()?;
    let fixed_set: BTreeSet<QMatrix> = fixed.iter().map(|c| c.matrix.clone()).collect();
    Ok(DescentReport {
        x: x.size(),
        y: y.size(),
        equivariant_maps: maps.len(),
        fixed_morphisms: fixed.len(),
        pass: graphs == fixed_set && graphs.len() == fixed.len(),
    })
}
