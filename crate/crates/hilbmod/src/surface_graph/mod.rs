//! Intersection graph of cusp, elliptic and Hirzebruch-Zagier curves on the
//! resolved surface, its blow-down to the minimal model, and comparison with
//! the reference diagrams.

mod assemble;
mod compare;
mod contract;
pub mod linalg;

use std::fmt;

use serde::Serialize;

use crate::field_arith::Q;

pub use assemble::*;
pub use compare::*;
pub use contract::*;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum VertexKind {
    /// Curve `index` (in displayed order) of the cycle of cusp `cusp`.
    Cusp { cusp: usize, index: usize },
    /// `point` indexes the stabilizers of its own type.
    Elliptic2 { point: usize },
    Elliptic3Plus { point: usize },
    Elliptic3MinusHalf { point: usize, half: usize },
    Hz { level: u32, component: usize },
}

/// Vertices that an isomorphism may exchange share a class.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum VertexClass {
    Cusp,
    Elliptic2,
    Elliptic3Plus,
    Elliptic3Minus,
    Hz(u32),
}

impl VertexKind {
    pub fn class(&self) -> VertexClass {
        match *self {
            VertexKind::Cusp { .. } => VertexClass::Cusp,
            VertexKind::Elliptic2 { .. } => VertexClass::Elliptic2,
            VertexKind::Elliptic3Plus { .. } => VertexClass::Elliptic3Plus,
            VertexKind::Elliptic3MinusHalf { .. } => VertexClass::Elliptic3Minus,
            VertexKind::Hz { level, .. } => VertexClass::Hz(level),
        }
    }

    pub fn is_elliptic(&self) -> bool {
        matches!(self.class(), VertexClass::Elliptic2 | VertexClass::Elliptic3Plus | VertexClass::Elliptic3Minus)
    }
}

impl VertexKind {
    /// Kind named by a reference label such as `C3'`, `E2-'`, `E4+` or `F51`.
    pub fn of_label(label: &str) -> Option<VertexKind> {
        let rest = label.get(1..)?;
        let digits: String = rest.chars().take_while(char::is_ascii_digit).collect();
        let tail = &rest[digits.len()..];
        let n: usize = digits.parse().ok()?;
        let index = n.checked_sub(1)?;
        match (label.chars().next()?, tail) {
            ('C', "") => Some(VertexKind::Cusp { cusp: 0, index }),
            ('C', "'") => Some(VertexKind::Cusp { cusp: 1, index }),
            ('E', "") => Some(VertexKind::Elliptic2 { point: index }),
            ('E', "+") => Some(VertexKind::Elliptic3Plus { point: index }),
            ('E', "-") => Some(VertexKind::Elliptic3MinusHalf { point: index, half: 0 }),
            ('E', "-'") => Some(VertexKind::Elliptic3MinusHalf { point: index, half: 1 }),
            ('F', "") => {
                let (level, component) = match digits.as_str() {
                    d if d.starts_with("10") => (10, d[2..].parse::<usize>().map_or(0, |c| c - 1)),
                    d => (d[..1].parse().ok()?, d[1..].parse::<usize>().map_or(0, |c| c - 1)),
                };
                Some(VertexKind::Hz { level, component })
            }
            _ => None,
        }
    }
}

impl VertexClass {
    /// Class of a reference label such as `C3'`, `E2-'`, `E4+` or `F51`.
    pub fn of_label(label: &str) -> Option<VertexClass> {
        let rest = &label[1..];
        match label.chars().next()? {
            'C' => Some(VertexClass::Cusp),
            'E' if rest.contains('-') => Some(VertexClass::Elliptic3Minus),
            'E' if rest.ends_with('+') => Some(VertexClass::Elliptic3Plus),
            'E' => Some(VertexClass::Elliptic2),
            'F' => {
                // levels stop at 10, and multi-component levels append a 1-based index
                let level = if rest.starts_with("10") { 10 } else { rest.get(..1)?.parse().ok()? };
                Some(VertexClass::Hz(level))
            }
            _ => None,
        }
    }
}

/// Rationals serialize as their exact `p/q` strings.
pub(crate) mod ser {
    use serde::Serializer;

    use crate::field_arith::Q;

    pub fn q_opt<S: Serializer>(x: &Option<Q>, s: S) -> Result<S::Ok, S::Error> {
        match x {
            Some(v) => s.serialize_some(&v.to_string()),
            None => s.serialize_none(),
        }
    }

    pub fn q_matrix<S: Serializer>(m: &[Vec<Q>], s: S) -> Result<S::Ok, S::Error> {
        s.collect_seq(m.iter().map(|row| row.iter().map(|x| x.to_string()).collect::<Vec<_>>()))
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct DivisorVertex {
    pub kind: VertexKind,
    pub label: String,
    /// `None` until fixed by the solver or by adjunction.
    #[serde(serialize_with = "ser::q_opt")]
    pub self_int: Option<Q>,
    /// Number of nodes of the curve.
    pub nodes: i128,
    pub boxed: bool,
}

/// Symmetric intersection matrix; the diagonal mirrors `self_int` and is zero
/// where that is unknown.
#[derive(Clone, Debug, Serialize)]
pub struct IntersectionGraph {
    pub vertices: Vec<DivisorVertex>,
    #[serde(serialize_with = "ser::q_matrix")]
    pub matrix: Vec<Vec<Q>>,
}

impl IntersectionGraph {
    pub fn new(vertices: Vec<DivisorVertex>) -> Self {
        let n = vertices.len();
        let mut g = IntersectionGraph { vertices, matrix: vec![vec![Q::from_integer(0); n]; n] };
        for i in 0..n {
            if let Some(s) = g.vertices[i].self_int {
                g.matrix[i][i] = s;
            }
        }
        g
    }

    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    pub fn add_intersection(&mut self, i: usize, j: usize, m: i128) {
        assert_ne!(i, j, "use nodes for self-contacts");
        self.matrix[i][j] += Q::from_integer(m);
        self.matrix[j][i] += Q::from_integer(m);
    }

    pub fn set_self_int(&mut self, i: usize, s: Q) {
        self.vertices[i].self_int = Some(s);
        self.matrix[i][i] = s;
    }

    pub fn index_of(&self, label: &str) -> Option<usize> {
        self.vertices.iter().position(|v| v.label == label)
    }

    /// Off-diagonal entry as an integer, for graphs where it is one.
    pub fn edge(&self, i: usize, j: usize) -> i128 {
        let x = self.matrix[i][j];
        assert!(x.is_integer(), "non-integral intersection {x}");
        x.to_integer()
    }

    /// The drawn reference diagram as a graph on the minimal model: boxed curves
    /// have self-intersection 0, all others -2, and drawn multiplicities are taken
    /// literally.
    pub fn from_reference(g: &crate::golden::GoldenGraph) -> crate::Result<IntersectionGraph> {
        let bad = |l: &str| crate::HilbError::Golden(format!("unrecognized reference label {l}"));
        let vertices = g
            .vertices
            .iter()
            .map(|v| {
                Ok(DivisorVertex {
                    kind: VertexKind::of_label(&v.label).ok_or_else(|| bad(&v.label))?,
                    label: v.label.clone(),
                    self_int: Some(Q::from_integer(if v.boxed { 0 } else { -2 })),
                    nodes: 0,
                    boxed: v.boxed,
                })
            })
            .collect::<crate::Result<Vec<_>>>()?;
        let mut graph = IntersectionGraph::new(vertices);
        for e in &g.edges {
            let (a, b) = (graph.index_of(&e.a).ok_or_else(|| bad(&e.a))?, graph.index_of(&e.b).ok_or_else(|| bad(&e.b))?);
            graph.add_intersection(a, b, i128::from(e.mult));
        }
        Ok(graph)
    }

    /// Renames vertices through `names` (old label to new label); others keep theirs.
    pub fn relabeled(&self, names: &std::collections::BTreeMap<String, String>) -> IntersectionGraph {
        let mut g = self.clone();
        for v in &mut g.vertices {
            if let Some(n) = names.get(&v.label) {
                v.label = n.clone();
            }
        }
        g
    }

    pub fn neighbours(&self, i: usize) -> impl Iterator<Item = usize> + '_ {
        (0..self.len()).filter(move |&j| j != i && self.matrix[i][j] != Q::from_integer(0))
    }
}

impl fmt::Display for IntersectionGraph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, v) in self.vertices.iter().enumerate() {
            let s = v.self_int.map_or("?".to_string(), |x| x.to_string());
            write!(f, "{}{} ({s}):", v.label, if v.boxed { " [boxed]" } else { "" })?;
            for j in self.neighbours(i) {
                write!(f, " {}x{}", self.vertices[j].label, self.matrix[i][j])?;
            }
            writeln!(f)?;
        }
        Ok(())
    }
}
