use std::collections::BTreeMap;
use std::fmt::Write;

use serde::Serialize;

use super::linalg::submatrix;
use super::{IntersectionGraph, VertexClass, VertexKind};
use crate::golden::GoldenGraph;

/// Outcome of matching a computed minimal-model graph against a reference diagram.
#[derive(Clone, Debug, Serialize)]
pub struct GraphComparison {
    pub isomorphic: bool,
    /// Reference label to computed label, when an isomorphism exists.
    pub mapping: BTreeMap<String, String>,
    /// Why no isomorphism exists, when none does.
    pub obstruction: Option<String>,
}

struct Reference {
    labels: Vec<String>,
    class: Vec<VertexClass>,
    boxed: Vec<bool>,
    /// `(multiplicity, multiplicity is a lower bound)`.
    edges: Vec<Vec<(i128, bool)>>,
}

impl Reference {
    fn new(g: &GoldenGraph) -> Result<Reference, String> {
        let labels: Vec<String> = g.vertices.iter().map(|v| v.label.clone()).collect();
        let class = labels
            .iter()
            .map(|l| VertexClass::of_label(l).ok_or_else(|| format!("unrecognized reference label {l}")))
            .collect::<Result<Vec<_>, _>>()?;
        let n = labels.len();
        let mut edges = vec![vec![(0, false); n]; n];
        for e in &g.edges {
            let pos = |l: &str| labels.iter().position(|x| x == l).ok_or_else(|| format!("edge to unknown vertex {l}"));
            let (a, b) = (pos(&e.a)?, pos(&e.b)?);
            let m = (i128::from(e.mult), e.encoded_as_double);
            edges[a][b] = m;
            edges[b][a] = m;
        }
        Ok(Reference { labels, class, boxed: g.vertices.iter().map(|v| v.boxed).collect(), edges })
    }

    fn accepts(&self, a: usize, b: usize, ours: i128) -> bool {
        match self.edges[a][b] {
            // a doubled drawing fixes only that the curves meet more than once
            (_, true) => ours >= 2,
            (m, false) => ours == m,
        }
    }
}

/// Drops elliptic curves that meet nothing besides the other half of their own
/// type 3- resolution; the reference diagrams leave those out.
pub fn displayed_subgraph(g: &IntersectionGraph) -> (IntersectionGraph, Vec<usize>) {
    let same_point = |a: &VertexKind, b: &VertexKind| match (a, b) {
        (VertexKind::Elliptic3MinusHalf { point: p, .. }, VertexKind::Elliptic3MinusHalf { point: q, .. }) => p == q,
        _ => false,
    };
    let keep: Vec<usize> = (0..g.len())
        .filter(|&i| {
            let k = &g.vertices[i].kind;
            !k.is_elliptic() || g.neighbours(i).any(|j| !same_point(k, &g.vertices[j].kind))
        })
        .collect();
    let vertices = keep.iter().map(|&i| g.vertices[i].clone()).collect();
    let matrix = submatrix(&g.matrix, &keep, &keep);
    (IntersectionGraph { vertices, matrix }, keep)
}

/// Searches for an isomorphism respecting vertex classes, boxed flags and
/// every unambiguous multiplicity. Candidates with equal labels are tried first.
pub fn compare_with_reference(ours: &IntersectionGraph, reference: &GoldenGraph) -> GraphComparison {
    let fail = |why: String| GraphComparison { isomorphic: false, mapping: BTreeMap::new(), obstruction: Some(why) };
    let r = match Reference::new(reference) {
        Ok(r) => r,
        Err(e) => return fail(e),
    };
    let n = r.labels.len();
    if ours.len() != n {
        let mut theirs: Vec<&str> = r.labels.iter().map(String::as_str).collect();
        let mut mine: Vec<&str> = ours.vertices.iter().map(|v| v.label.as_str()).collect();
        theirs.sort_unstable();
        mine.sort_unstable();
        return fail(format!("{} computed vertices {mine:?} for {} reference vertices {theirs:?}", ours.len(), n));
    }
    let mut census: BTreeMap<(VertexClass, bool), i64> = BTreeMap::new();
    for i in 0..n {
        *census.entry((r.class[i], r.boxed[i])).or_default() += 1;
        *census.entry((ours.vertices[i].kind.class(), ours.vertices[i].boxed)).or_default() -= 1;
    }
    if let Some(((c, b), d)) = census.iter().find(|(_, &d)| d != 0) {
        return fail(format!("class {c:?} (boxed {b}) differs by {d} vertices"));
    }
    let edge: Vec<Vec<i128>> = (0..n).map(|i| (0..n).map(|j| if i == j { 0 } else { ours.edge(i, j) }).collect()).collect();
    // most constrained reference vertices first
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by_key(|&i| {
        let deg = (0..n).filter(|&j| r.edges[i][j].0 > 0).count();
        std::cmp::Reverse(deg)
    });
    let mut image = vec![usize::MAX; n];
    let mut used = vec![false; n];
    if search(&r, ours, &edge, &order, 0, &mut image, &mut used) {
        let mapping = (0..n).map(|i| (r.labels[i].clone(), ours.vertices[image[i]].label.clone())).collect();
        GraphComparison { isomorphic: true, mapping, obstruction: None }
    } else {
        fail("no class-preserving bijection matches every edge".into())
    }
}

fn search(
    r: &Reference,
    ours: &IntersectionGraph,
    edge: &[Vec<i128>],
    order: &[usize],
    depth: usize,
    image: &mut [usize],
    used: &mut [bool],
) -> bool {
    if depth == order.len() {
        return true;
    }
    let a = order[depth];
    let mut cands: Vec<usize> = (0..ours.len())
        .filter(|&x| !used[x] && ours.vertices[x].kind.class() == r.class[a] && ours.vertices[x].boxed == r.boxed[a])
        .collect();
    cands.sort_by_key(|&x| ours.vertices[x].label != r.labels[a]);
    for x in cands {
        let consistent = order[..depth].iter().all(|&b| r.accepts(a, b, edge[x][image[b]]));
        if !consistent {
            continue;
        }
        image[a] = x;
        used[x] = true;
        if search(r, ours, edge, order, depth + 1, image, used) {
            return true;
        }
        used[x] = false;
    }
    image[a] = usize::MAX;
    false
}

/// DOT rendering: boxed vertices bold, multiplicities as parallel edges.
pub fn to_dot(g: &IntersectionGraph, name: &str) -> String {
    let mut s = String::new();
    writeln!(s, "graph \"{name}\" {{").unwrap();
    writeln!(s, "  node [shape=ellipse];").unwrap();
    for v in &g.vertices {
        let self_int = v.self_int.map_or("?".to_string(), |x| x.to_string());
        let style = if v.boxed { ", style=bold" } else { "" };
        writeln!(s, "  \"{}\" [xlabel=\"{self_int}\"{style}];", v.label).unwrap();
    }
    for i in 0..g.len() {
        for j in (i + 1)..g.len() {
            for _ in 0..g.edge(i, j) {
                writeln!(s, "  \"{}\" -- \"{}\";", g.vertices[i].label, g.vertices[j].label).unwrap();
            }
        }
    }
    s.push_str("}\n");
    s
}
