use std::fmt;

use serde::{Deserialize, Serialize};

use super::psi::mask_elements;
use crate::error::{Error, Result};

/// Symbolic motives with Tate twists and shifts, `C_*(X)(q)[m]`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FormalMotive {
    Motive(String),
    Zero,
    Twist(Box<FormalMotive>, i64),
    Shift(Box<FormalMotive>, i64),
    Product(Box<FormalMotive>, String),
}

impl FormalMotive {
    pub fn motive(label: &str) -> Self {
        FormalMotive::Motive(label.to_string())
    }

    pub fn twist(self, q: i64) -> Self {
        FormalMotive::Twist(Box::new(self), q)
    }

    pub fn shift(self, m: i64) -> Self {
        FormalMotive::Shift(Box::new(self), m)
    }

    pub fn times(self, label: &str) -> Self {
        FormalMotive::Product(Box::new(self), label.to_string())
    }

    /// `(core, total twist, total shift)`, twists and shifts pulled outside
    /// products; `None` for zero.
    fn collect(&self) -> Option<(FormalMotive, i64, i64)> {
        match self {
            FormalMotive::Zero => None,
            FormalMotive::Motive(_) => Some((self.clone(), 0, 0)),
            FormalMotive::Twist(e, q) => e.collect().map(|(c, a, b)| (c, a + q, b)),
            FormalMotive::Shift(e, m) => e.collect().map(|(c, a, b)| (c, a, b + m)),
            FormalMotive::Product(e, y) => e.collect().map(|(c, a, b)| (c.times(y), a, b)),
        }
    }

    /// `Shift(Twist(core, q), m)` with zero annotations dropped.
    pub fn normalize(&self) -> FormalMotive {
        match self.collect() {
            None => FormalMotive::Zero,
            Some((core, q, m)) => {
                let e = if q != 0 { core.twist(q) } else { core };
                if m != 0 {
                    e.shift(m)
                } else {
                    e
                }
            }
        }
    }

    /// Every label `L` becomes `L×Y`.
    pub fn cross_with(&self, y: &str) -> FormalMotive {
        match self {
            FormalMotive::Motive(l) => FormalMotive::Motive(format!("{l}×{y}")),
            FormalMotive::Zero => FormalMotive::Zero,
            FormalMotive::Twist(e, q) => e.cross_with(y).twist(*q),
            FormalMotive::Shift(e, m) => e.cross_with(y).shift(*m),
            FormalMotive::Product(e, l) => e.cross_with(y).times(&format!("{l}×{y}")),
        }
    }
}

impl fmt::Display for FormalMotive {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FormalMotive::Motive(l) => write!(f, "C_*({l})"),
            FormalMotive::Zero => f.write_str("0"),
            FormalMotive::Twist(e, q) => write!(f, "{e}({q})"),
            FormalMotive::Shift(e, m) => write!(f, "{e}[{m}]"),
            FormalMotive::Product(e, y) => write!(f, "{e}×{y}"),
        }
    }
}

/// Objects of the augmented cube: nonempty subsets plus `l` and `u`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CubeVertex {
    Subset(Vec<usize>),
    L,
    U,
}

impl fmt::Display for CubeVertex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CubeVertex::Subset(s) => {
                let s: Vec<String> = s.iter().map(ToString::to_string).collect();
                write!(f, "{{{}}}", s.join(","))
            }
            CubeVertex::L => f.write_str("l"),
            CubeVertex::U => f.write_str("u"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct KappaVertex {
    pub vertex: CubeVertex,
    pub motive: FormalMotive,
}

/// The labeled compactification diagram: `S' ↦ C_*(∩_{s∈S'} W_s)`,
/// `l ↦ C_*(ambient)`, `u ↦ 0`, with the colimit carrying `(-d)[-2d]`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct KappaDiagram {
    pub components: Vec<String>,
    pub ambient: String,
    pub dim: i64,
    pub vertices: Vec<KappaVertex>,
    pub edges: Vec<(CubeVertex, CubeVertex)>,
    pub twist: i64,
    pub shift: i64,
}

pub fn build_kappa(components: &[String], ambient: &str, dim: i64) -> Result<KappaDiagram> {
    let n = components.len();
    if n > 16 {
        return Err(Error::Cube("at most 16 components".into()));
    }
    for (i, a) in components.iter().enumerate() {
        if components[..i].contains(a) {
            return Err(Error::Cube(format!("component label {a} repeated")));
        }
    }
    let mut subsets: Vec<u32> = (1..1u32 << n).collect();
    subsets.sort_by_key(|&m| (m.count_ones(), m));
    let mut vertices = Vec::with_capacity(subsets.len() + 2);
    let mut edges = Vec::new();
    for &t in &subsets {
        let elems = mask_elements(t);
        let label: Vec<&str> = elems.iter().map(|&i| components[i].as_str()).collect();
        let v = CubeVertex::Subset(elems.clone());
        vertices.push(KappaVertex {
            vertex: v.clone(),
            motive: FormalMotive::motive(&label.join("∩")),
        });
        if elems.len() >= 2 {
            for &i in &elems {
                edges.push((v.clone(), CubeVertex::Subset(mask_elements(t & !(1 << i)))));
            }
        }
        edges.push((v.clone(), CubeVertex::L));
        edges.push((v, CubeVertex::U));
    }
    vertices.push(KappaVertex {
        vertex: CubeVertex::L,
        motive: FormalMotive::motive(ambient),
    });
    vertices.push(KappaVertex {
        vertex: CubeVertex::U,
        motive: FormalMotive::Zero,
    });
    Ok(KappaDiagram {
        components: components.to_vec(),
        ambient: ambient.to_string(),
        dim,
        vertices,
        edges,
        twist: -dim,
        shift: -2 * dim,
    })
}

impl KappaDiagram {
    pub fn motive(&self, v: &CubeVertex) -> Option<&FormalMotive> {
        self.vertices.iter().find(|x| &x.vertex == v).map(|x| &x.motive)
    }

    /// The inner vertices, one per nonempty set of components.
    pub fn inner_count(&self) -> usize {
        self.vertices
            .iter()
            .filter(|v| matches!(v.vertex, CubeVertex::Subset(_)))
            .count()
    }

    /// `m(-d)[-2d]`, normalized.
    pub fn annotated(&self, m: &FormalMotive) -> FormalMotive {
        m.clone().twist(self.twist).shift(self.shift).normalize()
    }

    /// The diagram for `X×Y ⊂ X̄×Y`, whose components are `W_s×Y`; the
    /// dimension grows by `dim_y`.
    pub fn cross_with(&self, y: &str, dim_y: i64) -> KappaDiagram {
        let dim = self.dim + dim_y;
        KappaDiagram {
            components: self.components.iter().map(|c| format!("{c}×{y}")).collect(),
            ambient: format!("{}×{y}", self.ambient),
            dim,
            vertices: self
                .vertices
                .iter()
                .map(|v| KappaVertex {
                    vertex: v.vertex.clone(),
                    motive: v.motive.cross_with(y),
                })
                .collect(),
            edges: self.edges.clone(),
            twist: -dim,
            shift: -2 * dim,
        }
    }
}

impl fmt::Display for KappaDiagram {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for v in &self.vertices {
            writeln!(f, "{:<10} {}", v.vertex.to_string(), v.motive)?;
        }
        for (a, b) in &self.edges {
            writeln!(f, "{a} -> {b}")?;
        }
        write!(f, "colim twisted by ({})[{}]", self.twist, self.shift)
    }
}
