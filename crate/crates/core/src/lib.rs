//! Exact computations around motivic Chow coalgebras of zero-dimensional
//! schemes and the combinatorics of the monadic (cobar) resolution.
//!
//! Everything here works over `Q` with exact arithmetic. The modules map onto
//! the following layers:
//!
//! * [`finset`] finite sets, set maps and the groupoids of diagrams
//!   `S1 -> ... -> Sk`, with canonical forms, automorphism groups and
//!   bounded enumeration of isomorphism classes;
//! * [`qlinalg`] rationals, dense matrices, Kronecker products, kernels and
//!   bounded chain complexes;
//! * [`artin`] the matrix category of finite sets with its canonical
//!   comonoid and monoid structures and the comonoid-morphism solver;
//! * [`galois`] finite groups acting on finite sets and Galois descent for
//!   coalgebra morphisms;
//! * [`monad`] the free commutative monoid construction on diagram groupoids;
//! * [`hypercube`] punctured hypercubes, compactification diagrams and
//!   homotopy colimits of cube-shaped diagrams of chain complexes;
//! * [`resolution`] the truncated cosimplicial tower and its equalizer.

pub mod artin;
pub mod error;
pub mod finset;
pub mod galois;
pub mod hypercube;
pub mod monad;
pub mod qlinalg;
pub mod resolution;

pub use artin::{ArtinComonoid, ArtinMonoid, CoalgMorphism, Equation, MorphismCheck};
pub use galois::{FiniteGroup, GSet};
pub use error::{Error, Result};
pub use finset::{DiagramIso, FinDiagram, FinSet, PermGroup, SetMap};
pub use hypercube::{Cover, CubeDiagram};
pub use monad::MultisetOfDiagrams;
pub use qlinalg::{ChainComplex, ChainMap, QMatrix, Rational};
pub use resolution::{Tower, TowerLevel};
