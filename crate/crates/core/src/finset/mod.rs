//! Finite nonempty sets, set maps, and the groupoids `Fin^k_gr` of diagrams
//! `S1 -> ... -> Sk` with isomorphisms of diagrams as morphisms.

mod canonical;
mod diagram;
mod enumerate;
mod group;
mod set;

pub use canonical::{are_isomorphic, canonical_form, canonical_labeling};
pub use diagram::{DiagramIso, FinDiagram};
pub use enumerate::{enumerate_blocks, enumerate_diagrams};
pub use group::{automorphism_group, count_automorphisms_by_search, PermGroup};
pub use set::{compose, FinSet, SetMap};
