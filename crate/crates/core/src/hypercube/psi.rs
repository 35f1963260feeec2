use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Morphisms of `Δ¹ = {0 -> 1}`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Arrow {
    Id0,
    Tau,
    Id1,
}

impl Arrow {
    pub fn source(self) -> u8 {
        match self {
            Arrow::Id0 | Arrow::Tau => 0,
            Arrow::Id1 => 1,
        }
    }

    pub fn target(self) -> u8 {
        match self {
            Arrow::Id0 => 0,
            Arrow::Tau | Arrow::Id1 => 1,
        }
    }

    /// `next ∘ self`, if composable.
    pub fn then(self, next: Arrow) -> Option<Arrow> {
        if self.target() != next.source() {
            return None;
        }
        Some(match (self.source(), next.target()) {
            (0, 0) => Arrow::Id0,
            (0, 1) => Arrow::Tau,
            _ => Arrow::Id1,
        })
    }
}

pub fn subset_mask(elements: &[usize]) -> u32 {
    elements.iter().fold(0, |m, &i| m | 1 << i)
}

pub fn mask_elements(mask: u32) -> Vec<usize> {
    (0..32).filter(|&i| mask >> i & 1 == 1).collect()
}

fn check_subset(n: usize, mask: u32) -> Result<()> {
    if n > 31 || mask >> n != 0 {
        return Err(Error::Cube(format!("{:?} is not a subset of {{0..{n}}}", mask_elements(mask))));
    }
    Ok(())
}

/// The characteristic function `1_S` as a vertex of `(Δ¹)^I`.
pub fn psi(n: usize, subset: u32) -> Result<Vec<u8>> {
    check_subset(n, subset)?;
    Ok((0..n).map(|i| (subset >> i & 1) as u8).collect())
}

pub fn psi_inverse(vertex: &[u8]) -> Result<u32> {
    let mut mask = 0;
    for (i, &b) in vertex.iter().enumerate() {
        match b {
            0 => {}
            1 => mask |= 1 << i,
            _ => return Err(Error::Cube(format!("coordinate {i} is {b}, not 0 or 1"))),
        }
    }
    Ok(mask)
}

/// The image of the inclusion `S ⊆ T`: coordinate `i` is `id_1` for `i ∈ S`,
/// the arrow `0 -> 1` for `i ∈ T \ S` and `id_0` outside `T`.
pub fn psi_morphism(n: usize, s: u32, t: u32) -> Result<Vec<Arrow>> {
    check_subset(n, t)?;
    if s & !t != 0 {
        return Err(Error::Cube("not an inclusion".into()));
    }
    Ok((0..n)
        .map(|i| match (s >> i & 1, t >> i & 1) {
            (1, _) => Arrow::Id1,
            (0, 1) => Arrow::Tau,
            _ => Arrow::Id0,
        })
        .collect())
}
