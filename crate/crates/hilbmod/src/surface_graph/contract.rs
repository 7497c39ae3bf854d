use num_traits::{One, Signed, Zero};
use serde::Serialize;

use super::linalg::{determinant, dot, inverse, is_negative_definite, mul_vec, submatrix, QMatrix};
use super::IntersectionGraph;
use crate::error::{HilbError, Result};
use crate::field_arith::Q;

/// Smallest and largest self-intersection tried for an unknown exceptional curve.
pub const SELF_INT_RANGE: (i128, i128) = (-6, -1);

#[derive(Clone, Debug, Serialize)]
pub struct ContractionPlan {
    pub exceptional_set: Vec<usize>,
    #[serde(serialize_with = "super::ser::q_matrix")]
    pub m: QMatrix,
}

impl ContractionPlan {
    /// Checks that `set` is negative definite with `|det| = 1`, so that it
    /// contracts to smooth points.
    pub fn new(graph: &IntersectionGraph, set: &[usize]) -> Result<ContractionPlan> {
        let labels = || set.iter().map(|&i| graph.vertices[i].label.as_str()).collect::<Vec<_>>().join(", ");
        if let Some(&i) = set.iter().find(|&&i| graph.vertices[i].self_int.is_none()) {
            return Err(HilbError::NotSmoothContraction(format!(
                "{} has unknown self-intersection",
                graph.vertices[i].label
            )));
        }
        let m = submatrix(&graph.matrix, set, set);
        if !is_negative_definite(&m) {
            return Err(HilbError::NotSmoothContraction(format!("{{{}}} is not negative definite", labels())));
        }
        if determinant(&m).abs() != Q::one() {
            return Err(HilbError::NotSmoothContraction(format!("{{{}}} has |det| = {}", labels(), determinant(&m).abs())));
        }
        Ok(ContractionPlan { exceptional_set: set.to_vec(), m })
    }
}

/// Mumford correction `C.C' - v_C^t M^{-1} v_C'` on the surviving vertices.
/// Returns the new graph and, for each of its vertices, the index in `graph`.
pub fn contract(graph: &IntersectionGraph, plan: &ContractionPlan) -> Result<(IntersectionGraph, Vec<usize>)> {
    let minv = inverse(&plan.m).ok_or_else(|| HilbError::NotSmoothContraction("singular".into()))?;
    let survivors: Vec<usize> = (0..graph.len()).filter(|i| !plan.exceptional_set.contains(i)).collect();
    let v: Vec<Vec<Q>> = survivors
        .iter()
        .map(|&s| plan.exceptional_set.iter().map(|&e| graph.matrix[s][e]).collect())
        .collect();
    let w: Vec<Vec<Q>> = v.iter().map(|x| mul_vec(&minv, x)).collect();
    let mut vertices = Vec::with_capacity(survivors.len());
    let n = survivors.len();
    let mut matrix = vec![vec![Q::zero(); n]; n];
    for (a, &s) in survivors.iter().enumerate() {
        let mut vert = graph.vertices[s].clone();
        for (b, &t) in survivors.iter().enumerate() {
            matrix[a][b] = graph.matrix[s][t] - dot(&v[a], &w[b]);
        }
        if vert.self_int.is_some() {
            vert.self_int = Some(matrix[a][a]);
        } else {
            matrix[a][a] = Q::zero();
        }
        vertices.push(vert);
    }
    Ok((IntersectionGraph { vertices, matrix }, survivors))
}

#[derive(Clone, Debug, Serialize)]
pub struct Blowdown {
    pub minimal: IntersectionGraph,
    /// Original index of each vertex of `minimal`.
    pub survivors: Vec<usize>,
    /// Original indices contracted in each pass.
    pub passes: Vec<Vec<usize>>,
}

impl Blowdown {
    pub fn exceptional(&self) -> Vec<usize> {
        self.passes.iter().flatten().copied().collect()
    }
}

/// Contracts `initial`, then repeatedly every elliptic curve whose
/// self-intersection has become `-1`.
pub fn blow_down(tilde: &IntersectionGraph, initial: &[usize]) -> Result<Blowdown> {
    let mut current = tilde.clone();
    let mut orig: Vec<usize> = (0..tilde.len()).collect();
    let mut set: Vec<usize> = initial.to_vec();
    let mut passes = Vec::new();
    while !set.is_empty() {
        let plan = ContractionPlan::new(&current, &set)?;
        passes.push(set.iter().map(|&i| orig[i]).collect());
        let (next, surv) = contract(&current, &plan)?;
        orig = surv.iter().map(|&i| orig[i]).collect();
        current = next;
        set = (0..current.len())
            .filter(|&i| current.vertices[i].kind.is_elliptic() && current.vertices[i].self_int == Some(-Q::one()))
            .collect();
    }
    Ok(Blowdown { minimal: current, survivors: orig, passes })
}

/// Fills unknown self-intersections of surviving curves from adjunction on
/// the resolution: with `K = sum k_i E_i` over the exceptional curves `E_i`
/// of a blow-down to a surface with trivial canonical class, a rational curve
/// with `d` nodes has `C^2 = -2 + 2d - K.C`.
pub fn complete_by_adjunction(tilde: &IntersectionGraph, exceptional: &[usize]) -> Result<IntersectionGraph> {
    let mut g = tilde.clone();
    let m = submatrix(&tilde.matrix, exceptional, exceptional);
    let minv = inverse(&m).ok_or_else(|| HilbError::NotSmoothContraction("singular exceptional set".into()))?;
    let rhs: Vec<Q> = exceptional
        .iter()
        .map(|&e| {
            let v = &tilde.vertices[e];
            Q::from_integer(-2 + 2 * v.nodes) - v.self_int.expect("exceptional self-intersection")
        })
        .collect();
    let k = mul_vec(&minv, &rhs);
    for i in 0..g.len() {
        if g.vertices[i].self_int.is_some() || exceptional.contains(&i) {
            continue;
        }
        let kc: Q = exceptional.iter().zip(&k).map(|(&e, ke)| ke * tilde.matrix[i][e]).sum();
        let s = Q::from_integer(-2 + 2 * g.vertices[i].nodes) - kc;
        g.set_self_int(i, s);
    }
    Ok(g)
}

/// Surviving curves whose final self-intersection is neither `-2` nor `0`.
pub fn adjunction_violations(minimal: &IntersectionGraph) -> Vec<(String, Option<Q>)> {
    let ok = |s: &Option<Q>| matches!(s, Some(x) if *x == Q::from_integer(-2) || x.is_zero());
    minimal
        .vertices
        .iter()
        .filter(|v| !ok(&v.self_int))
        .map(|v| (v.label.clone(), v.self_int))
        .collect()
}

#[derive(Clone, Debug, Serialize)]
pub struct Solution {
    /// `(vertex, self-intersection)` for every solved unknown.
    pub assignment: Vec<(usize, i128)>,
    /// The resolution with every self-intersection known.
    pub tilde: IntersectionGraph,
    pub blowdown: Blowdown,
}

/// Connected clusters of `set` in `graph`.
pub fn clusters(graph: &IntersectionGraph, set: &[usize]) -> Vec<Vec<usize>> {
    let mut seen = vec![false; graph.len()];
    let mut out = Vec::new();
    for &s in set {
        if seen[s] {
            continue;
        }
        let mut comp = vec![s];
        seen[s] = true;
        let mut i = 0;
        while i < comp.len() {
            let c = comp[i];
            for &t in set {
                if !seen[t] && !graph.matrix[c][t].is_zero() {
                    seen[t] = true;
                    comp.push(t);
                }
            }
            i += 1;
        }
        out.push(comp);
    }
    out
}

/// Diagonals in range making `cluster` negative definite with `|det| = 1`.
fn cluster_candidates(graph: &IntersectionGraph, cluster: &[usize]) -> Vec<Vec<i128>> {
    let mut out = Vec::new();
    let mut diag = Vec::new();
    extend_candidates(graph, cluster, &mut diag, &mut out);
    out
}

fn extend_candidates(graph: &IntersectionGraph, cluster: &[usize], diag: &mut Vec<i128>, out: &mut Vec<Vec<i128>>) {
    let k = diag.len();
    if k == cluster.len() {
        out.push(diag.clone());
        return;
    }
    for x in SELF_INT_RANGE.0..=SELF_INT_RANGE.1 {
        diag.push(x);
        let idx = &cluster[..=k];
        let mut m = submatrix(&graph.matrix, idx, idx);
        for (i, &d) in diag.iter().enumerate() {
            m[i][i] = Q::from_integer(d);
        }
        // Sylvester: every leading minor of -m positive; the full one equal to 1
        let minor = determinant(&m);
        let signed = if (k + 1).is_multiple_of(2) { minor } else { -minor };
        let last = k + 1 == cluster.len();
        if signed.is_positive() && (!last || signed == Q::one()) {
            extend_candidates(graph, cluster, diag, out);
        }
        diag.pop();
    }
}

/// The unique assignment of the unknown self-intersections of `unknown` for
/// which every cluster contracts smoothly and every surviving curve ends at
/// `-2` or `0`.
pub fn solve_exceptional_selfints(tilde: &IntersectionGraph, unknown: &[usize]) -> Result<Solution> {
    let cl = clusters(tilde, unknown);
    let names = |c: &[usize]| c.iter().map(|&i| tilde.vertices[i].label.as_str()).collect::<Vec<_>>().join(", ");
    let mut per_cluster = Vec::new();
    for c in &cl {
        let cands = cluster_candidates(tilde, c);
        if cands.is_empty() {
            return Err(HilbError::Infeasible(format!("{{{}}}", names(c))));
        }
        per_cluster.push(cands);
    }
    let mut solutions: Vec<Solution> = Vec::new();
    let mut choice = vec![0usize; cl.len()];
    loop {
        let mut g = tilde.clone();
        let mut assignment = Vec::new();
        for (ci, c) in cl.iter().enumerate() {
            for (&v, &s) in c.iter().zip(&per_cluster[ci][choice[ci]]) {
                g.set_self_int(v, Q::from_integer(s));
                assignment.push((v, s));
            }
        }
        if let Ok(sol) = evaluate(&g, unknown, assignment) {
            solutions.push(sol);
        }
        // odometer over the cluster candidate lists
        let mut i = 0;
        loop {
            if i == cl.len() {
                return match solutions.len() {
                    0 => Err(HilbError::Infeasible(format!("{{{}}}", names(unknown)))),
                    1 => Ok(solutions.pop().expect("one solution")),
                    n => Err(HilbError::Ambiguous(format!("{{{}}}: {n} assignments", names(unknown)))),
                };
            }
            choice[i] += 1;
            if choice[i] < per_cluster[i].len() {
                break;
            }
            choice[i] = 0;
            i += 1;
        }
    }
}

fn evaluate(g: &IntersectionGraph, unknown: &[usize], assignment: Vec<(usize, i128)>) -> Result<Solution> {
    let first = blow_down(g, unknown)?;
    let full = complete_by_adjunction(g, &first.exceptional())?;
    let mut bd = blow_down(&full, unknown)?;
    let bad = adjunction_violations(&bd.minimal);
    if !bad.is_empty() {
        return Err(HilbError::Verification(format!("final self-intersections {bad:?}")));
    }
    for v in &mut bd.minimal.vertices {
        v.boxed = v.self_int.is_some_and(|s| s.is_zero());
    }
    Ok(Solution { assignment, tilde: full, blowdown: bd })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::surface_graph::{DivisorVertex, VertexKind};

    fn vertex(label: &str, s: Option<i128>, elliptic: bool) -> DivisorVertex {
        DivisorVertex {
            kind: if elliptic {
                VertexKind::Elliptic2 { point: 0 }
            } else {
                VertexKind::Cusp { cusp: 0, index: 0 }
            },
            label: label.into(),
            self_int: s.map(Q::from_integer),
            nodes: 0,
            boxed: false,
        }
    }

    #[test]
    fn one_blow_down_joins_neighbours() {
        let mut g = IntersectionGraph::new(vec![
            vertex("C", Some(-2), false),
            vertex("E", Some(-1), false),
            vertex("D", Some(-2), false),
        ]);
        g.add_intersection(0, 1, 1);
        g.add_intersection(1, 2, 1);
        let plan = ContractionPlan::new(&g, &[1]).unwrap();
        let (h, surv) = contract(&g, &plan).unwrap();
        assert_eq!(surv, vec![0, 2]);
        assert_eq!(h.matrix[0][1], Q::one());
        assert_eq!(h.vertices[0].self_int, Some(-Q::one()));
    }

    #[test]
    fn tangency_raises_self_intersection_by_four() {
        let mut g = IntersectionGraph::new(vec![vertex("C", Some(-4), false), vertex("E", Some(-1), false)]);
        g.add_intersection(0, 1, 2);
        let (h, _) = contract(&g, &ContractionPlan::new(&g, &[1]).unwrap()).unwrap();
        assert_eq!(h.vertices[0].self_int, Some(Q::zero()));
    }

    #[test]
    fn non_unimodular_plan_rejected() {
        let g = IntersectionGraph::new(vec![vertex("E", Some(-2), false)]);
        assert!(matches!(ContractionPlan::new(&g, &[0]), Err(HilbError::NotSmoothContraction(_))));
    }

    #[test]
    fn elliptic_minus_one_contracted_in_later_pass() {
        // F (-1) meets E (-2), which becomes -1 and is contracted next
        let mut g = IntersectionGraph::new(vec![
            vertex("F", Some(-1), false),
            vertex("E", Some(-2), true),
            vertex("C", Some(-3), false),
        ]);
        g.add_intersection(0, 1, 1);
        g.add_intersection(1, 2, 1);
        let bd = blow_down(&g, &[0]).unwrap();
        assert_eq!(bd.passes, vec![vec![0], vec![1]]);
        assert_eq!(bd.minimal.vertices[0].self_int, Some(Q::from_integer(-2)));
    }

    #[test]
    fn isolated_unknown_forced_to_minus_one() {
        let mut g = IntersectionGraph::new(vec![vertex("F", None, false)]);
        g.vertices[0].kind = VertexKind::Hz { level: 1, component: 0 };
        assert_eq!(cluster_candidates(&g, &[0]), vec![vec![-1]]);
    }

    #[test]
    fn chain_of_two_unknowns() {
        let mut g = IntersectionGraph::new(vec![vertex("F", None, false), vertex("G", None, false)]);
        g.add_intersection(0, 1, 1);
        let mut c = cluster_candidates(&g, &[0, 1]);
        c.sort();
        assert_eq!(c, vec![vec![-2, -1], vec![-1, -2]]);
    }
}
