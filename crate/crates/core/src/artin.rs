//! The matrix category of finite sets (Artin Chow motives over an
//! algebraically closed field) with its canonical comonoid structures.
//!
//! A morphism from the set `X` to the set `Y` is a `|Y| x |X|` rational matrix
//! `C = (c_{y,x})`. The counit of `X` is the all-ones row, the comultiplication
//! is the diagonal indicator `δ_{(x',x''),x} = [x' = x'' = x]`. Comonoid
//! morphisms are exactly the graphs of set maps; the solver derives this from
//! the three equation families
//!
//! * `(ε)`  `Σ_y c_{y,x} = 1`,
//! * `(δ₁)` `c_{y,x}² = c_{y,x}`,
//! * `(δ₂)` `c_{y,x} c_{y',x} = 0` for `y ≠ y'`.

use std::collections::BTreeSet;
use std::fmt;

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::finset::{FinSet, SetMap};
use crate::qlinalg::{QMatrix, Rational};

/// Permutation `E ⊗ F -> F ⊗ E` for `|E| = n`, `|F| = m`.
pub fn swap_matrix(n: usize, m: usize) -> QMatrix {
    let mut p = QMatrix::zeros(n * m, n * m);
    for i in 0..n {
        for j in 0..m {
            p.set(j * n + i, i * m + j, Rational::one());
        }
    }
    p
}

/// Comonoid axioms.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub enum Axiom {
    Counitality,
    Coassociativity,
    Cocommutativity,
    Unitality,
    Associativity,
    Commutativity,
}

/// A finite set with counit `ε : X -> 1` (`1 x |X|`) and comultiplication
/// `δ : X -> X ⊗ X` (`|X|² x |X|`).
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "ComonoidRepr")]
pub struct ArtinComonoid {
    carrier: FinSet,
    counit: QMatrix,
    comult: QMatrix,
}

#[derive(Deserialize)]
struct ComonoidRepr {
    carrier: FinSet,
    counit: QMatrix,
    comult: QMatrix,
}

impl TryFrom<ComonoidRepr> for ArtinComonoid {
    type Error = Error;

    fn try_from(r: ComonoidRepr) -> Result<Self> {
        ArtinComonoid::new(r.carrier, r.counit, r.comult)
    }
}

impl ArtinComonoid {
    /// Any structure of the right shape; the axioms are checked separately by
    /// [`ArtinComonoid::axiom_failures`].
    pub fn new(carrier: FinSet, counit: QMatrix, comult: QMatrix) -> Result<Self> {
        let n = carrier.size();
        if counit.shape() != (1, n) {
            return Err(Error::Comonoid(format!("counit must be 1x{n}, got {:?}", counit.shape())));
        }
        if comult.shape() != (n * n, n) {
            return Err(Error::Comonoid(format!(
                "comultiplication must be {}x{n}, got {:?}",
                n * n,
                comult.shape()
            )));
        }
        Ok(ArtinComonoid {
            carrier,
            counit,
            comult,
        })
    }

    /// Counit induced by `X -> pt`, comultiplication by the diagonal.
    pub fn canonical(carrier: &FinSet) -> Self {
        let n = carrier.size();
        let counit = QMatrix::filled(1, n, Rational::one());
        let mut comult = QMatrix::zeros(n * n, n);
        for x in 0..n {
            comult.set(x * n + x, x, Rational::one());
        }
        ArtinComonoid {
            carrier: carrier.clone(),
            counit,
            comult,
        }
    }

    pub fn canonical_of_size(n: usize) -> Result<Self> {
        Ok(Self::canonical(&FinSet::new(n)?))
    }

    pub fn carrier(&self) -> &FinSet {
        &self.carrier
    }

    pub fn size(&self) -> usize {
        self.carrier.size()
    }

    pub fn counit(&self) -> &QMatrix {
        &self.counit
    }

    pub fn comult(&self) -> &QMatrix {
        &self.comult
    }

    pub fn is_canonical(&self) -> bool {
        let c = Self::canonical(&self.carrier);
        c.counit == self.counit && c.comult == self.comult
    }

    pub fn axiom_failures(&self) -> Vec<Axiom> {
        let n = self.size();
        let id = QMatrix::identity(n);
        let (e, d) = (&self.counit, &self.comult);
        let mut out = Vec::new();
        let left = &e.kron(&id) * d;
        let right = &id.kron(e) * d;
        if left != id || right != id {
            out.push(Axiom::Counitality);
        }
        if &d.kron(&id) * d != &id.kron(d) * d {
            out.push(Axiom::Coassociativity);
        }
        if &swap_matrix(n, n) * d != *d {
            out.push(Axiom::Cocommutativity);
        }
        out
    }

    pub fn satisfies_axioms(&self) -> bool {
        self.axiom_failures().is_empty()
    }

    /// `E ⊗ F` with `δ = (id ⊗ swap ⊗ id)(δ_E ⊗ δ_F)`.
    pub fn tensor(&self, other: &ArtinComonoid) -> ArtinComonoid {
        let (n, m) = (self.size(), other.size());
        let mid = QMatrix::identity(n)
            .kron(&swap_matrix(n, m))
            .kron(&QMatrix::identity(m));
        ArtinComonoid {
            carrier: FinSet::new(n * m).expect("nonempty"),
            counit: self.counit.kron(&other.counit),
            comult: &mid * &self.comult.kron(&other.comult),
        }
    }

    /// `E^{⊗n}`; `n = 0` gives the unit object.
    pub fn tensor_power(&self, n: usize) -> ArtinComonoid {
        let unit = ArtinComonoid::canonical(&FinSet::new(1).expect("nonempty"));
        (0..n).fold(unit, |acc, _| acc.tensor(self))
    }

    /// The dual monoid: unit and multiplication are the transposes.
    pub fn dual(&self) -> ArtinMonoid {
        ArtinMonoid {
            carrier: self.carrier.clone(),
            unit: self.counit.transpose(),
            mult: self.comult.transpose(),
        }
    }
}

/// A finite set with unit `u : 1 -> X` (`|X| x 1`) and multiplication
/// `m : X ⊗ X -> X` (`|X| x |X|²`).
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ArtinMonoid {
    carrier: FinSet,
    unit: QMatrix,
    mult: QMatrix,
}

impl ArtinMonoid {
    pub fn new(carrier: FinSet, unit: QMatrix, mult: QMatrix) -> Result<Self> {
        let n = carrier.size();
        if unit.shape() != (n, 1) || mult.shape() != (n, n * n) {
            return Err(Error::Comonoid(format!(
                "monoid on {n} points needs {n}x1 unit and {n}x{} multiplication",
                n * n
            )));
        }
        Ok(ArtinMonoid { carrier, unit, mult })
    }

    pub fn canonical(carrier: &FinSet) -> Self {
        ArtinComonoid::canonical(carrier).dual()
    }

    pub fn carrier(&self) -> &FinSet {
        &self.carrier
    }

    pub fn size(&self) -> usize {
        self.carrier.size()
    }

    pub fn unit(&self) -> &QMatrix {
        &self.unit
    }

    pub fn mult(&self) -> &QMatrix {
        &self.mult
    }

    pub fn axiom_failures(&self) -> Vec<Axiom> {
        let n = self.size();
        let id = QMatrix::identity(n);
        let (u, m) = (&self.unit, &self.mult);
        let mut out = Vec::new();
        if m * &u.kron(&id) != id || m * &id.kron(u) != id {
            out.push(Axiom::Unitality);
        }
        if m * &m.kron(&id) != m * &id.kron(m) {
            out.push(Axiom::Associativity);
        }
        if m * &swap_matrix(n, n) != *m {
            out.push(Axiom::Commutativity);
        }
        out
    }

    /// Iterated multiplication `X^{⊗n} -> X`: the unit for `n = 0`, the
    /// identity for `n = 1`, then `m ∘ (m^{(n-1)} ⊗ id)`.
    pub fn iterated_mult(&self, n: usize) -> QMatrix {
        let id = QMatrix::identity(self.size());
        match n {
            0 => self.unit.clone(),
            1 => id,
            _ => &self.mult * &self.iterated_mult(n - 1).kron(&id),
        }
    }

    /// The dual comonoid.
    pub fn dual(&self) -> ArtinComonoid {
        ArtinComonoid {
            carrier: self.carrier.clone(),
            counit: self.unit.transpose(),
            comult: self.mult.transpose(),
        }
    }
}

/// An equation family a candidate morphism can violate. For algebra maps the
/// names refer to the dual equation (unit for counit, multiplicativity split
/// the same way).
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Equation {
    /// `(ε)`: compatibility with counits.
    Counit,
    /// `(δ₁)`: the diagonal components of the comultiplication square.
    Idempotent,
    /// `(δ₂)`: the off-diagonal components.
    Orthogonal,
}

impl fmt::Display for Equation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Equation::Counit => "(ε)",
            Equation::Idempotent => "(δ₁)",
            Equation::Orthogonal => "(δ₂)",
        })
    }
}

/// Outcome of a morphism check: the violated equations, empty if the
/// diagrams commute.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct MorphismCheck {
    pub failures: BTreeSet<Equation>,
}

impl MorphismCheck {
    pub fn holds(&self) -> bool {
        self.failures.is_empty()
    }
}

impl fmt::Display for MorphismCheck {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.holds() {
            return f.write_str("ok");
        }
        let names: Vec<String> = self.failures.iter().map(ToString::to_string).collect();
        write!(f, "fails {}", names.join(", "))
    }
}

/// Whether `c : X -> Y` satisfies `ε_Y c = ε_X` and `(c ⊗ c) δ_X = δ_Y c`.
pub fn is_coalgebra_morphism(c: &QMatrix, x: &ArtinComonoid, y: &ArtinComonoid) -> Result<MorphismCheck> {
    let (nx, ny) = (x.size(), y.size());
    if c.shape() != (ny, nx) {
        return Err(Error::Shape(format!(
            "a morphism from {nx} to {ny} points is {ny}x{nx}, got {:?}",
            c.shape()
        )));
    }
    let mut check = MorphismCheck::default();
    if &y.counit * c != x.counit {
        check.failures.insert(Equation::Counit);
    }
    let diff = &(&c.kron(c) * &x.comult) - &(&y.comult * c);
    for yy in 0..ny * ny {
        for xx in 0..nx {
            if !diff.get(yy, xx).is_zero() {
                let (a, b) = (yy / ny, yy % ny);
                check.failures.insert(if a == b {
                    Equation::Idempotent
                } else {
                    Equation::Orthogonal
                });
            }
        }
    }
    Ok(check)
}

/// Whether `a : S -> T` satisfies `a u_S = u_T` and `a m_S = m_T (a ⊗ a)`.
pub fn is_algebra_morphism(a: &QMatrix, s: &ArtinMonoid, t: &ArtinMonoid) -> Result<MorphismCheck> {
    let (ns, nt) = (s.size(), t.size());
    if a.shape() != (nt, ns) {
        return Err(Error::Shape(format!(
            "an algebra map from {ns} to {nt} points is {nt}x{ns}, got {:?}",
            a.shape()
        )));
    }
    let mut check = MorphismCheck::default();
    if a * &s.unit != t.unit {
        check.failures.insert(Equation::Counit);
    }
    let diff = &(a * &s.mult) - &(&t.mult * &a.kron(a));
    for r in 0..nt {
        for col in 0..ns * ns {
            if !diff.get(r, col).is_zero() {
                let (i, j) = (col / ns, col % ns);
                check.failures.insert(if i == j {
                    Equation::Idempotent
                } else {
                    Equation::Orthogonal
                });
            }
        }
    }
    Ok(check)
}

/// Checks `cᵀ : D(Y) -> D(X)` against the dual monoids, directly in terms of
/// units and multiplications.
pub fn dual_check(c: &QMatrix, x: &ArtinComonoid, y: &ArtinComonoid) -> Result<MorphismCheck> {
    is_algebra_morphism(&c.transpose(), &y.dual(), &x.dual())
}

/// A matrix `C : X -> Y` commuting with counits and comultiplications.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "MorphismRepr")]
pub struct CoalgMorphism {
    pub source: ArtinComonoid,
    pub target: ArtinComonoid,
    pub matrix: QMatrix,
}

#[derive(Deserialize)]
struct MorphismRepr {
    source: ArtinComonoid,
    target: ArtinComonoid,
    matrix: QMatrix,
}

impl TryFrom<MorphismRepr> for CoalgMorphism {
    type Error = Error;

    fn try_from(r: MorphismRepr) -> Result<Self> {
        CoalgMorphism::new(r.matrix, r.source, r.target)
    }
}

impl CoalgMorphism {
    pub fn new(matrix: QMatrix, source: ArtinComonoid, target: ArtinComonoid) -> Result<Self> {
        let check = is_coalgebra_morphism(&matrix, &source, &target)?;
        if !check.holds() {
            return Err(Error::Comonoid(format!("not a coalgebra morphism: {check}")));
        }
        Ok(CoalgMorphism {
            source,
            target,
            matrix,
        })
    }

    /// The transpose, an algebra map between the dual monoids.
    pub fn dual(&self) -> QMatrix {
        self.matrix.transpose()
    }
}

/// Rational solutions of `t² = t`. `t(t - 1) = 0` in a field.
fn idempotent_rationals() -> [Rational; 2] {
    [Rational::zero(), Rational::one()]
}

/// Every comonoid morphism between canonical structures.
///
/// `(ε)`, `(δ₁)` and `(δ₂)` only involve one column at a time, so each column
/// is solved on its own: entries range over the idempotents, `(δ₂)` prunes
/// columns with two nonzero entries and `(ε)` fixes the column sum. Results
/// are ordered like [`SetMap::all`].
pub fn solve_coalgebra_morphisms(x: &ArtinComonoid, y: &ArtinComonoid) -> Result<Vec<CoalgMorphism>> {
    if !x.is_canonical() || !y.is_canonical() {
        return Err(Error::Unsupported(
            "the solver handles canonical comonoid structures only".into(),
        ));
    }
    let ny = y.size();
    let mut columns: Vec<Vec<Rational>> = Vec::new();
    let mut partial: Vec<Rational> = Vec::with_capacity(ny);
    solve_column(ny, &mut partial, &mut columns);

    let nx = x.size();
    let mut out = Vec::new();
    let mut idx = vec![0usize; nx];
    if columns.is_empty() {
        return Ok(out);
    }
    loop {
        let matrix = QMatrix::from_fn(ny, nx, |i, j| columns[idx[j]][i].clone());
        let check = is_coalgebra_morphism(&matrix, x, y)?;
        if !check.holds() {
            return Err(Error::Comonoid(format!("solver produced a non-morphism: {check}")));
        }
        out.push(CoalgMorphism {
            source: x.clone(),
            target: y.clone(),
            matrix,
        });
        // odometer, last column fastest
        let mut j = nx;
        loop {
            if j == 0 {
                return Ok(out);
            }
            j -= 1;
            idx[j] += 1;
            if idx[j] < columns.len() {
                break;
            }
            idx[j] = 0;
        }
    }
}

/// Columns `v` in idempotents^ny with at most one nonzero entry and sum 1.
/// Columns are emitted in order of the position of their nonzero entry.
fn solve_column(ny: usize, partial: &mut Vec<Rational>, out: &mut Vec<Vec<Rational>>) {
    let nonzero = partial.iter().filter(|v| !v.is_zero()).count();
    if nonzero > 1 {
        return; // (δ₂)
    }
    if partial.len() == ny {
        let sum: Rational = partial.iter().cloned().sum();
        if sum.is_one() {
            out.push(partial.clone()); // (ε)
        }
        return;
    }
    // Larger values first so that e_0 precedes e_1 and so on.
    for v in idempotent_rationals().into_iter().rev() {
        partial.push(v);
        solve_column(ny, partial, out);
        partial.pop();
    }
}

/// The graph of `f` as a coalgebra morphism between canonical structures.
pub fn morphism_from_setmap(f: &SetMap) -> Result<CoalgMorphism> {
    let x = ArtinComonoid::canonical_of_size(f.dom())?;
    let y = ArtinComonoid::canonical_of_size(f.cod())?;
    Ok(CoalgMorphism {
        source: x,
        target: y,
        matrix: QMatrix::graph(f.values(), f.cod()),
    })
}

/// Inverse of [`morphism_from_setmap`]: every column must be a unit vector.
pub fn setmap_from_morphism(c: &QMatrix) -> Result<SetMap> {
    let mut values = Vec::with_capacity(c.cols());
    for j in 0..c.cols() {
        let col = c.column(j);
        let ones: Vec<usize> = (0..col.len()).filter(|&i| col[i].is_one()).collect();
        let zeros = col.iter().filter(|v| v.is_zero()).count();
        if ones.len() != 1 || zeros + 1 != col.len() {
            return Err(Error::NotAGraph { column: j });
        }
        values.push(ones[0]);
    }
    SetMap::new(c.cols(), c.rows(), values)
}

/// Counts behind `Hom_MChC(C_*X, C_*Y) = Hom(X, Y)` for finite sets.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct McffeReport {
    pub x: usize,
    pub y: usize,
    pub coalgebra_morphisms: usize,
    pub set_maps: usize,
    pub all_graphs: bool,
    pub bijective: bool,
    pub pass: bool,
}

impl fmt::Display for McffeReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "|X|={} |Y|={}: {} = {}, {}",
            self.x,
            self.y,
            self.coalgebra_morphisms,
            self.set_maps,
            if self.pass { "PASS" } else { "FAIL" }
        )
    }
}

/// Solves for all comonoid morphisms and matches them against set maps.
pub fn verify_mcffe(x: usize, y: usize) -> Result<McffeReport> {
    let cx = ArtinComonoid::canonical_of_size(x)?;
    let cy = ArtinComonoid::canonical_of_size(y)?;
    let solved = solve_coalgebra_morphisms(&cx, &cy)?;
    let maps: Vec<SetMap> = SetMap::all(x, y).collect();

    let recovered: Vec<Option<SetMap>> = solved
        .iter()
        .map(|c| setmap_from_morphism(&c.matrix).ok())
        .collect();
    let all_graphs = recovered.iter().all(Option::is_some);
    let recovered: BTreeSet<SetMap> = recovered.into_iter().flatten().collect();
    let from_maps: BTreeSet<QMatrix> = maps
        .iter()
        .map(|f| morphism_from_setmap(f).map(|c| c.matrix))
        .collect::<Result<_>>()?;
    let solved_set: BTreeSet<QMatrix> = solved.iter().map(|c| c.matrix.clone()).collect();
    let bijective = all_graphs
        && recovered.len() == solved.len()
        && recovered == maps.iter().cloned().collect()
        && from_maps == solved_set;
    let pass = bijective && solved.len() == y.pow(x as u32);
    Ok(McffeReport {
        x,
        y,
        coalgebra_morphisms: solved.len(),
        set_maps: maps.len(),
        all_graphs,
        bijective,
        pass,
    })
}
