//! Power-set cubes, punctured cubes and their homotopy colimits.
//!
//! Punctured cubes are indexed by the nonempty subsets of `I = {0..n}` with
//! a map `D(T) -> D(S)` for `S ⊆ T`; the `|I| = 2` case is the pushout
//! `D({0}) ⊔_{D({0,1})} D({1})`. Subsets are bitmasks.

mod cover;
mod cube;
mod kappa;
mod psi;

pub use cover::{inclusion_exclusion_euler, Cover, CoverOracle};
pub use cube::{ks_hocolim, punctured_cube_hocolim, CubeDiagram};
pub use kappa::{build_kappa, CubeVertex, FormalMotive, KappaDiagram, KappaVertex};
pub use psi::{mask_elements, psi, psi_inverse, psi_morphism, subset_mask, Arrow};
