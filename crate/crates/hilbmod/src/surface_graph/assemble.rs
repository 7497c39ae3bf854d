use std::collections::BTreeMap;

use super::{DivisorVertex, IntersectionGraph, VertexKind};
use crate::elliptic_points::EllipticType;
use super::contract::{solve_exceptional_selfints, Solution};
use crate::error::{HilbError, Result};
use crate::field_arith::Q;
use crate::hz_divisors::ComponentId;
use crate::pipeline::SurfaceModel;

/// Levels whose components are blown down first: all of `F_1, ..., F_4`, and
/// `F_9` when `3 | D`.
pub fn contracted_levels(d: i64) -> Vec<u32> {
    let mut v = vec![1, 2, 3, 4];
    if d % 3 == 0 {
        v.push(9);
    }
    v
}

pub fn elliptic_label(kind: EllipticType, index: usize, half: usize) -> String {
    let i = index + 1;
    match (kind, half) {
        (EllipticType::Two, _) => format!("E{i}"),
        (EllipticType::ThreePlus, _) => format!("E{i}+"),
        (EllipticType::ThreeMinus, 0) => format!("E{i}-"),
        (EllipticType::ThreeMinus, _) => format!("E{i}-'"),
    }
}

/// The graph on the minimal resolution, with `F_N` self-intersections unknown.
pub struct TildeGraph {
    pub graph: IntersectionGraph,
    pub hz_index: BTreeMap<ComponentId, usize>,
    /// Unknown self-intersections to solve for: the components of contracted levels.
    pub exceptional_hz: Vec<usize>,
}

pub fn assemble_tilde_graph(model: &SurfaceModel) -> Result<TildeGraph> {
    let mut vertices = Vec::new();
    let mut cusp_index: Vec<Vec<usize>> = Vec::new();
    for (ci, frame) in model.frames.iter().enumerate() {
        let len = frame.full_length;
        if len < 2 {
            return Err(HilbError::Verification(format!("cusp {ci} resolves to a nodal curve")));
        }
        let period = frame.cycle.period();
        let mut idx = vec![0; len];
        let mut by_pos: Vec<(usize, usize)> = (0..len).map(|k| (model.cusp_position(ci, k), k)).collect();
        by_pos.sort_unstable();
        for (pos, k) in by_pos {
            idx[k] = vertices.len();
            let prime = if ci == 0 { "" } else { "'" };
            vertices.push(DivisorVertex {
                kind: VertexKind::Cusp { cusp: ci, index: pos },
                label: format!("C{}{prime}", pos + 1),
                self_int: Some(Q::from_integer(-frame.cycle.b_list[k % period])),
                nodes: 0,
                boxed: false,
            });
        }
        cusp_index.push(idx);
    }
    let mut ell_index: Vec<Vec<usize>> = Vec::new();
    for (i, p) in model.points.iter().enumerate() {
        let t = model.index_within_type(i);
        let res = p.local_resolution();
        let mut idx = Vec::new();
        for (half, &s) in res.components.iter().enumerate() {
            let kind = match p.kind {
                EllipticType::Two => VertexKind::Elliptic2 { point: t },
                EllipticType::ThreePlus => VertexKind::Elliptic3Plus { point: t },
                EllipticType::ThreeMinus => VertexKind::Elliptic3MinusHalf { point: t, half },
            };
            idx.push(vertices.len());
            vertices.push(DivisorVertex {
                kind,
                label: elliptic_label(p.kind, t, half),
                self_int: Some(Q::from_integer(i128::from(s))),
                nodes: 0,
                boxed: false,
            });
        }
        ell_index.push(idx);
    }
    let mut hz_index = BTreeMap::new();
    let contracted = contracted_levels(model.record.d);
    let mut exceptional_hz = Vec::new();
    for (id, comp) in &model.hz.components {
        hz_index.insert(*id, vertices.len());
        if contracted.contains(&id.level) {
            exceptional_hz.push(vertices.len());
        }
        vertices.push(DivisorVertex {
            kind: VertexKind::Hz { level: id.level, component: id.index },
            label: comp.label.clone(),
            self_int: None,
            nodes: 0,
            boxed: false,
        });
    }

    let mut g = IntersectionGraph::new(vertices);
    for (ci, frame) in model.frames.iter().enumerate() {
        let len = frame.full_length;
        for k in 0..len {
            g.add_intersection(cusp_index[ci][k], cusp_index[ci][(k + 1) % len], 1);
        }
    }
    for (i, p) in model.points.iter().enumerate() {
        for &(a, b) in &p.local_resolution().internal_edges {
            g.add_intersection(ell_index[i][a], ell_index[i][b], 1);
        }
    }
    for (id, comp) in &model.hz.components {
        let v = hz_index[id];
        for br in &comp.cusp_branches {
            let len = model.frames[br.cusp].full_length;
            for (curve, mult) in br.multiplicities(len) {
                if mult > 0 {
                    g.add_intersection(v, cusp_index[br.cusp][curve], mult);
                }
            }
        }
        for inc in &comp.elliptic {
            g.add_intersection(v, ell_index[inc.point][inc.curve], inc.multiplicity);
        }
    }
    for c in &model.hz.contacts {
        let (a, b) = (hz_index[&c.a], hz_index[&c.b]);
        if a == b {
            g.vertices[a].nodes += c.count;
        } else {
            g.add_intersection(a, b, c.count);
        }
    }
    Ok(TildeGraph { graph: g, hz_index, exceptional_hz })
}

/// The resolution graph and its solved blow-down to the minimal model.
pub fn minimal_model(model: &SurfaceModel) -> Result<(TildeGraph, Solution)> {
    let tilde = assemble_tilde_graph(model)?;
    let sol = solve_exceptional_selfints(&tilde.graph, &tilde.exceptional_hz)?;
    Ok((tilde, sol))
}
