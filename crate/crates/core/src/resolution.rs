//! The truncated cosimplicial tower computing algebra maps `A -> B` between
//! commutative monoids of the matrix category, and its equalizer.
//!
//! Level 0 is `Hom(A, B)`. Level 1 has one component per finite set `S`
//! (`|S| <= bound`), holding the `Aut S`-fixed maps `A^{⊗S} -> B`; level 2
//! has one per class of maps `S₁ -> S₂`. The empty set is included at both
//! levels: it carries the unit condition. Cofaces:
//!
//! * level 0 to 1: `d⁰f = m_B^{(s)} f^{⊗s}`, `d¹f = f m_A^{(s)}`;
//! * level 1 to 2 at `p : S₁ -> S₂` with fibres `F_j`:
//!   `d⁰g = m_B^{(|S₂|)} (⊗_j g_{F_j})`, `d¹g = g_{S₁}`,
//!   `d²g = g_{S₂} (⊗_j m_A^{(|F_j|)})`, after regrouping `A^{⊗S₁}` by fibre.
//!
//! Codegeneracies: `s⁰g = g_{pt}`, and from level 2, `s⁰h_S = h_{S -> pt}`,
//! `s¹h_S = h_{S = S}`.
//!
//! For finite sets `X`, `Y` the relevant instance is `A = C*Y`, `B = C*X`
//! (dual monoids), so level-0 elements are `|X| x |Y|` matrices and the
//! equalizer consists of the transposed graphs of maps `X -> Y`.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use num_traits::{One, Zero};
use serde::Serialize;

use crate::artin::{is_algebra_morphism, solve_coalgebra_morphisms, ArtinComonoid, ArtinMonoid};
use crate::error::{Error, Result};
use crate::finset::{
    automorphism_group, canonical_labeling, enumerate_blocks, FinDiagram, FinSet, SetMap,
};
use crate::monad::{tensor_permutation, tuple_permutation};

type SortKey = (Vec<usize>, Vec<Vec<usize>>);
use crate::qlinalg::{QMatrix, Rational};

/// One component of a level: maps `A^{⊗S₁} -> B` fixed by `Aut S` acting
/// through its first component.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LevelComponent {
    pub class: FinDiagram,
    pub rows: usize,
    pub cols: usize,
    /// Column permutations of the automorphism generators.
    generators: Vec<Vec<usize>>,
    /// Orbits of columns; fixed matrices are constant on each orbit.
    pub orbits: Vec<Vec<usize>>,
}

impl LevelComponent {
    fn new(class: FinDiagram, a: usize, b: usize) -> Self {
        let cols = a.pow(class.first_size() as u32);
        let generators: Vec<Vec<usize>> = automorphism_group(&class)
            .generators
            .iter()
            .filter_map(|g| g.first().map(|s| tuple_permutation(s, a)))
            .collect();
        let orbits = orbits(cols, &generators);
        LevelComponent {
            class,
            rows: b,
            cols,
            generators,
            orbits,
        }
    }

    fn plain(rows: usize, cols: usize) -> Self {
        LevelComponent {
            class: FinDiagram::empty(),
            rows,
            cols,
            generators: vec![],
            orbits: (0..cols).map(|c| vec![c]).collect(),
        }
    }

    /// Dimension of the fixed subspace.
    pub fn dim(&self) -> usize {
        self.rows * self.orbits.len()
    }

    pub fn is_fixed(&self, m: &QMatrix) -> bool {
        m.shape() == (self.rows, self.cols)
            && self.generators.iter().all(|p| {
                (0..self.rows).all(|r| (0..self.cols).all(|c| m.get(r, p[c]) == m.get(r, c)))
            })
    }

    /// The fixed subspace of one row as a kernel: `v (P - I) = 0` for every
    /// generator. Its dimension must equal the number of orbits.
    pub fn fixed_dim_by_kernel(&self) -> usize {
        let n = self.cols;
        let mut stacked = QMatrix::zeros(0, n);
        for p in &self.generators {
            let mut m = QMatrix::zeros(n, n);
            for (c, &pc) in p.iter().enumerate() {
                // (v P)_c = v_{p(c)}
                m.set(c, pc, m.get(c, pc) + Rational::one());
                m.set(c, c, m.get(c, c) - Rational::one());
            }
            stacked = stacked.vstack(&m).expect("same width");
        }
        n - stacked.rank()
    }

    /// The basis matrix with ones on orbit `o` of row `r`.
    pub fn basis_element(&self, r: usize, o: usize) -> QMatrix {
        let mut m = QMatrix::zeros(self.rows, self.cols);
        for &c in &self.orbits[o] {
            m.set(r, c, Rational::one());
        }
        m
    }
}

fn orbits(n: usize, generators: &[Vec<usize>]) -> Vec<Vec<usize>> {
    let mut label: Vec<Option<usize>> = vec![None; n];
    let mut out = Vec::new();
    for start in 0..n {
        if label[start].is_some() {
            continue;
        }
        let id = out.len();
        let mut orbit = vec![start];
        label[start] = Some(id);
        let mut i = 0;
        while i < orbit.len() {
            let x = orbit[i];
            for p in generators {
                let y = p[x];
                if label[y].is_none() {
                    label[y] = Some(id);
                    orbit.push(y);
                }
            }
            i += 1;
        }
        orbit.sort_unstable();
        out.push(orbit);
    }
    out
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TowerLevel {
    pub k: usize,
    pub components: Vec<LevelComponent>,
}

impl TowerLevel {
    /// Dimension of the product of fixed subspaces.
    pub fn dim(&self) -> usize {
        self.components.iter().map(LevelComponent::dim).sum()
    }
}

/// Levels 0, 1 and 2 of the tower for algebra maps `source -> target`.
#[derive(Clone, Debug)]
pub struct Tower {
    source: ArtinMonoid,
    target: ArtinMonoid,
    bound: usize,
    levels: [TowerLevel; 3],
    level2_index: BTreeMap<SortKey, usize>,
}

impl Tower {
    pub fn new(source: ArtinMonoid, target: ArtinMonoid, bound: usize) -> Result<Self> {
        if bound < 2 {
            return Err(Error::Unsupported("the tower needs bound >= 2".into()));
        }
        let (a, b) = (source.size(), target.size());
        let level0 = TowerLevel {
            k: 0,
            components: vec![LevelComponent::plain(b, a)],
        };
        let level1 = TowerLevel {
            k: 1,
            components: (0..=bound)
                .map(|s| LevelComponent::new(FinDiagram::block(&[s], &[]).expect("bare set"), a, b))
                .collect(),
        };
        let level2 = TowerLevel {
            k: 2,
            components: enumerate_blocks(2, &[bound, bound])
                .into_iter()
                .map(|d| LevelComponent::new(d, a, b))
                .collect(),
        };
        let level2_index = level2
            .components
            .iter()
            .enumerate()
            .map(|(i, c)| (c.class.sort_key(), i))
            .collect();
        Ok(Tower {
            source,
            target,
            bound,
            levels: [level0, level1, level2],
            level2_index,
        })
    }

    /// The instance for finite sets: `A = C*Y`, `B = C*X`.
    pub fn artin(x: usize, y: usize, bound: usize) -> Result<Self> {
        let cx = ArtinMonoid::canonical(&FinSet::new(x)?);
        let cy = ArtinMonoid::canonical(&FinSet::new(y)?);
        Self::new(cy, cx, bound)
    }

    pub fn source(&self) -> &ArtinMonoid {
        &self.source
    }

    pub fn target(&self) -> &ArtinMonoid {
        &self.target
    }

    pub fn bound(&self) -> usize {
        self.bound
    }

    pub fn level(&self, k: usize) -> &TowerLevel {
        &self.levels[k]
    }

    fn check_level0(&self, f: &QMatrix) -> Result<()> {
        let want = (self.target.size(), self.source.size());
        if f.shape() != want {
            return Err(Error::Shape(format!("level-0 element must be {want:?}, got {:?}", f.shape())));
        }
        Ok(())
    }

    fn check_family(&self, k: usize, g: &[QMatrix]) -> Result<()> {
        let comps = &self.levels[k].components;
        if g.len() != comps.len() || g.iter().zip(comps).any(|(m, c)| m.shape() != (c.rows, c.cols)) {
            return Err(Error::Shape(format!("not a level-{k} family")));
        }
        Ok(())
    }

    /// `m_B^{(s)} f^{⊗s}` at the component of a set of size `s`.
    pub fn coface_d0(&self, f: &QMatrix, s: usize) -> Result<QMatrix> {
        self.check_level0(f)?;
        let power = QMatrix::kron_all(std::iter::repeat_n(f, s));
        Ok(&self.target.iterated_mult(s) * &power)
    }

    /// `f m_A^{(s)}`.
    pub fn coface_d1(&self, f: &QMatrix, s: usize) -> Result<QMatrix> {
        self.check_level0(f)?;
        Ok(f * &self.source.iterated_mult(s))
    }

    /// Coface `d^i` from level 0 to level 1, `i ∈ {0, 1}`.
    pub fn coface0(&self, i: usize, f: &QMatrix) -> Result<Vec<QMatrix>> {
        (0..=self.bound)
            .map(|s| match i {
                0 => self.coface_d0(f, s),
                1 => self.coface_d1(f, s),
                _ => Err(Error::Unsupported(format!("no coface d{i} out of level 0"))),
            })
            .collect()
    }

    /// Coface `d^i` from level 1 to level 2, `i ∈ {0, 1, 2}`.
    pub fn coface1(&self, i: usize, g: &[QMatrix]) -> Result<Vec<QMatrix>> {
        self.check_family(1, g)?;
        let a = self.source.size();
        self.levels[2]
            .components
            .iter()
            .map(|c| {
                let p = &c.class.maps()[0];
                let (s1, m) = (p.dom(), p.cod());
                let fibres = p.fiber_sizes();
                // regroup A^{⊗S₁} fibre by fibre
                let mut order: Vec<usize> = (0..s1).collect();
                order.sort_by_key(|&x| (p.apply(x), x));
                let mut pos = vec![0; s1];
                for (k, &x) in order.iter().enumerate() {
                    pos[x] = k;
                }
                let regroup = tensor_permutation(&SetMap::new(s1, s1, pos).expect("bijection"), a);
                match i {
                    0 => {
                        let inner = QMatrix::kron_all(fibres.iter().map(|&n| &g[n]));
                        Ok(&(&self.target.iterated_mult(m) * &inner) * &regroup)
                    }
                    1 => Ok(g[s1].clone()),
                    2 => {
                        let mults: Vec<QMatrix> = fibres.iter().map(|&n| self.source.iterated_mult(n)).collect();
                        Ok(&(&g[m] * &QMatrix::kron_all(&mults)) * &regroup)
                    }
                    _ => Err(Error::Unsupported(format!("no coface d{i} out of level 1"))),
                }
            })
            .collect()
    }

    /// The value of a level-2 family on any diagram `S₁ -> S₂` in range,
    /// transported from its canonical representative.
    pub fn level2_value(&self, h: &[QMatrix], d: &FinDiagram) -> Result<QMatrix> {
        self.check_family(2, h)?;
        let (canon, iso) = canonical_labeling(d);
        let idx = *self
            .level2_index
            .get(&canon.sort_key())
            .ok_or_else(|| Error::Unsupported("diagram outside the tower's range".into()))?;
        let sigma = iso.first().expect("two sets");
        Ok(&h[idx] * &tensor_permutation(sigma, self.source.size()))
    }

    /// `s⁰ g = g_{pt}`.
    pub fn codegeneracy1(&self, g: &[QMatrix]) -> Result<QMatrix> {
        self.check_family(1, g)?;
        Ok(g[1].clone())
    }

    /// `s⁰ h_S = h_{S -> pt}`, `s¹ h_S = h_{S = S}`.
    pub fn codegeneracy2(&self, j: usize, h: &[QMatrix]) -> Result<Vec<QMatrix>> {
        (0..=self.bound)
            .map(|s| {
                let d = match j {
                    0 => FinDiagram::block(&[s, 1], &[vec![0; s]])?,
                    1 => FinDiagram::block(&[s, s], &[(0..s).collect()])?,
                    _ => return Err(Error::Unsupported(format!("no codegeneracy s{j} out of level 2"))),
                };
                self.level2_value(h, &d)
            })
            .collect()
    }

    /// The fixed family at level `k` whose entry at component `c`, row `r`
    /// and column orbit `o` is `coeffs(c, r, o)`.
    pub fn fixed_family(&self, k: usize, coeffs: impl Fn(usize, usize, usize) -> Rational) -> Vec<QMatrix> {
        self.levels[k]
            .components
            .iter()
            .enumerate()
            .map(|(ci, c)| {
                let mut m = QMatrix::zeros(c.rows, c.cols);
                for (o, orbit) in c.orbits.iter().enumerate() {
                    for r in 0..c.rows {
                        let v = coeffs(ci, r, o);
                        for &col in orbit {
                            m.set(r, col, v.clone());
                        }
                    }
                }
                m
            })
            .collect()
    }

    fn row_solutions(&self, with_unit: bool) -> Vec<Vec<Rational>> {
        // With a canonical target, row x of d⁰f - d¹f only involves row x of
        // f: it reads r^{⊗s} = r m_A^{(s)}. The s = 2 diagonal entries say
        // r_y² = r_y, so every entry is 0 or 1.
        let a = self.source.size();
        let point = ArtinMonoid::canonical(&FinSet::new(1).expect("point"));
        let row_tower = Tower {
            source: self.source.clone(),
            target: point,
            bound: self.bound,
            levels: [
                TowerLevel { k: 0, components: vec![] },
                TowerLevel { k: 1, components: vec![] },
                TowerLevel { k: 2, components: vec![] },
            ],
            level2_index: BTreeMap::new(),
        };
        let first = if with_unit { 0 } else { 1 };
        (0u32..1 << a)
            .map(|bits| {
                (0..a)
                    .map(|y| if bits >> (a - 1 - y) & 1 == 1 { Rational::one() } else { Rational::zero() })
                    .collect::<Vec<_>>()
            })
            .filter(|r| {
                let f = QMatrix::from_vec(1, a, r.clone()).expect("row");
                (first..=self.bound).all(|s| {
                    row_tower.coface_d0(&f, s).expect("shape") == row_tower.coface_d1(&f, s).expect("shape")
                })
            })
            .collect()
    }

    fn assemble_rows(&self, rows: &[Vec<Rational>], with_unit: bool) -> Result<Vec<QMatrix>> {
        let (a, b) = (self.source.size(), self.target.size());
        let mut out = Vec::new();
        if rows.is_empty() {
            return Ok(out);
        }
        let first = if with_unit { 0 } else { 1 };
        let mut idx = vec![0usize; b];
        loop {
            let f = QMatrix::from_fn(b, a, |i, j| rows[idx[i]][j].clone());
            for s in first..=self.bound {
                if self.coface_d0(&f, s)? != self.coface_d1(&f, s)? {
                    return Err(Error::Unsupported("row decomposition failed on a full solution".into()));
                }
            }
            out.push(f);
            let mut j = b;
            loop {
                if j == 0 {
                    return Ok(out);
                }
                j -= 1;
                idx[j] += 1;
                if idx[j] < rows.len() {
                    break;
                }
                idx[j] = 0;
            }
        }
    }

    fn require_canonical_target(&self) -> Result<()> {
        if self.target != ArtinMonoid::canonical(self.target.carrier()) {
            return Err(Error::Unsupported("the equalizer solver needs a canonical target".into()));
        }
        Ok(())
    }

    /// All `f` with `d⁰f = d¹f` at every set of size `0..=bound`.
    pub fn equalizer(&self) -> Result<Vec<QMatrix>> {
        self.require_canonical_target()?;
        self.assemble_rows(&self.row_solutions(true), true)
    }

    /// As [`Tower::equalizer`] but without the empty set, so without the
    /// unit condition.
    pub fn equalizer_without_unit(&self) -> Result<Vec<QMatrix>> {
        self.require_canonical_target()?;
        self.assemble_rows(&self.row_solutions(false), false)
    }

    /// Dimension of the limit of `S ↦ Hom(A^{⊗S₁}, B)` over the groupoid of
    /// all concrete diagrams at level `k` (every set `{0..s}`, every map
    /// between them), with isomorphisms found by brute force. Must equal
    /// the dimension of the product of fixed subspaces.
    pub fn groupoid_limit_dim(&self, k: usize) -> usize {
        let (a, b) = (self.source.size(), self.target.size());
        let objects: Vec<FinDiagram> = match k {
            0 => return a * b,
            1 => (0..=self.bound).map(|s| FinDiagram::block(&[s], &[]).expect("set")).collect(),
            _ => {
                let mut v = Vec::new();
                for s1 in 0..=self.bound {
                    for s2 in 0..=self.bound {
                        if s1 > 0 && s2 == 0 {
                            continue;
                        }
                        for f in SetMap::all(s1, s2) {
                            v.push(FinDiagram::block(&[s1, s2], &[f.values().to_vec()]).expect("map"));
                        }
                    }
                }
                v
            }
        };
        // group objects into connected components: a reference object and
        // the others, each with an iso to the reference
        type Members = Vec<(usize, Vec<SetMap>)>;
        let mut classes: Vec<(usize, Members)> = Vec::new();
        for (i, d) in objects.iter().enumerate() {
            let found = classes
                .iter_mut()
                .find_map(|(r, members)| brute_iso(&objects[*r], d).map(|iso| (members, iso)));
            match found {
                Some((members, iso)) => members.push((i, iso)),
                None => classes.push((i, vec![])),
            }
        }
        let mut total = 0;
        for (r, members) in &classes {
            let reference = &objects[*r];
            let cols = a.pow(reference.first_size() as u32);
            // unknowns: the reference block, then one block per member
            let nvars = cols * (1 + members.len());
            let mut eqs: Vec<Vec<(usize, i64)>> = Vec::new();
            for aut in brute_isos(reference, reference) {
                let p = tuple_permutation(&aut[0], a);
                for (c, &pc) in p.iter().enumerate() {
                    if pc != c {
                        eqs.push(vec![(pc, 1), (c, -1)]);
                    }
                }
            }
            for (m, (_, iso)) in members.iter().enumerate() {
                // iso : member -> reference, h_member = h_reference P(σ)
                let p = tuple_permutation(&iso[0], a);
                let off = cols * (m + 1);
                for (c, &pc) in p.iter().enumerate() {
                    eqs.push(vec![(pc, 1), (off + c, -1)]);
                }
            }
            let mut mat = QMatrix::zeros(eqs.len(), nvars);
            for (row, eq) in eqs.iter().enumerate() {
                for &(v, coef) in eq {
                    mat.set(row, v, mat.get(row, v) + Rational::from_integer(coef.into()));
                }
            }
            // each row of B contributes one copy of the per-row solution space
            total += b * (nvars - mat.rank());
        }
        total
    }
}

/// Componentwise bijections `d -> e` commuting with the maps, by search.
fn brute_isos(d: &FinDiagram, e: &FinDiagram) -> Vec<Vec<SetMap>> {
    if d.sizes() != e.sizes() {
        return vec![];
    }
    let perms: Vec<Vec<SetMap>> = d.sizes().iter().map(|&n| SetMap::permutations(n)).collect();
    let mut out = Vec::new();
    let mut idx = vec![0usize; perms.len()];
    loop {
        let choice: Vec<SetMap> = idx.iter().zip(&perms).map(|(&i, p)| p[i].clone()).collect();
        let natural = (0..d.maps().len()).all(|i| {
            let (f, g) = (&d.maps()[i], &e.maps()[i]);
            (0..f.dom()).all(|x| choice[i + 1].apply(f.apply(x)) == g.apply(choice[i].apply(x)))
        });
        if natural {
            out.push(choice);
        }
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

fn brute_iso(d: &FinDiagram, e: &FinDiagram) -> Option<Vec<SetMap>> {
    brute_isos(d, e).into_iter().next()
}

/// All `{0,1}` matrices `f : C*Y -> C*X` passing the algebra-map check.
pub fn algebra_morphisms_by_search(x: usize, y: usize) -> Result<Vec<QMatrix>> {
    let cx = ArtinMonoid::canonical(&FinSet::new(x)?);
    let cy = ArtinMonoid::canonical(&FinSet::new(y)?);
    let cells = x * y;
    if cells > 20 {
        return Err(Error::Unsupported("search space too large".into()));
    }
    let mut out = Vec::new();
    for bits in 0u32..1 << cells {
        let f = QMatrix::from_fn(x, y, |i, j| {
            if bits >> (cells - 1 - (i * y + j)) & 1 == 1 {
                Rational::one()
            } else {
                Rational::zero()
            }
        });
        if is_algebra_morphism(&f, &cy, &cx)?.holds() {
            out.push(f);
        }
    }
    Ok(out)
}

/// The four-way comparison for one pair of sizes.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct MdffeReport {
    pub x: usize,
    pub y: usize,
    pub bound: usize,
    pub equalizer: usize,
    pub algebra_morphisms: usize,
    pub transposed_comonoid_morphisms: usize,
    pub set_maps: usize,
    pub sets_equal: bool,
    pub stable_at_next_bound: bool,
    pub pass: bool,
}

impl fmt::Display for MdffeReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "{:<32} {:>6}", "source", "count")?;
        writeln!(f, "{:<32} {:>6}", format!("equalizer (bound {})", self.bound), self.equalizer)?;
        writeln!(f, "{:<32} {:>6}", "algebra morphisms", self.algebra_morphisms)?;
        writeln!(f, "{:<32} {:>6}", "transposed comonoid morphisms", self.transposed_comonoid_morphisms)?;
        writeln!(f, "{:<32} {:>6}", "set maps X -> Y", self.set_maps)?;
        write!(
            f,
            "|X|={} |Y|={}: {} = {} = {} = {}, {}",
            self.x,
            self.y,
            self.equalizer,
            self.algebra_morphisms,
            self.transposed_comonoid_morphisms,
            self.set_maps,
            if self.pass { "PASS" } else { "FAIL" }
        )
    }
}

pub fn verify_mdffe(x: usize, y: usize, bound: usize) -> Result<MdffeReport> {
    let eq: BTreeSet<QMatrix> = Tower::artin(x, y, bound)?.equalizer()?.into_iter().collect();
    let eq_next: BTreeSet<QMatrix> = Tower::artin(x, y, bound + 1)?.equalizer()?.into_iter().collect();
    let alg: BTreeSet<QMatrix> = algebra_morphisms_by_search(x, y)?.into_iter().collect();
    let cx = ArtinComonoid::canonical_of_size(x)?;
    let cy = ArtinComonoid::canonical_of_size(y)?;
    let co: BTreeSet<QMatrix> = solve_coalgebra_morphisms(&cx, &cy)?
        .iter()
        .map(|c| c.dual())
        .collect();
    let maps: BTreeSet<QMatrix> = SetMap::all(x, y)
        .map(|f| QMatrix::graph(f.values(), y).transpose())
        .collect();
    let sets_equal = eq == alg && alg == co && co == maps;
    let stable = eq == eq_next;
    Ok(MdffeReport {
        x,
        y,
        bound,
        equalizer: eq.len(),
        algebra_morphisms: alg.len(),
        transposed_comonoid_morphisms: co.len(),
        set_maps: maps.len(),
        sets_equal,
        stable_at_next_bound: stable,
        pass: sets_equal && stable && maps.len() == y.pow(x as u32),
    })
}
