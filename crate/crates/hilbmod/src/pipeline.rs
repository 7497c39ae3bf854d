//! Everything computed for one surface, in dependency order.

use std::collections::{BTreeMap, BTreeSet};

use crate::cusp_resolution::{enumerate_cusps, Cusp};
use crate::elliptic_points::{points_in_reference_order, EllipticPoint, EllipticType};
use crate::error::{HilbError, Result};
use crate::fibration_analysis::{classify_and_check, FibrationRow, HilbertCheckReport};
use crate::field_arith::{Field, Form, GenusKind};
use crate::golden::{is_k3, GoldenRecord};
use crate::hz_divisors::{CuspFrame, HzSurface};
use crate::surface_graph::{
    compare_with_reference, displayed_subgraph, minimal_model, GraphComparison, IntersectionGraph, Solution, TildeGraph,
};

/// The minimal-model graph of a surface and how it compares with the reference diagram.
pub struct GraphOutcome {
    pub tilde: TildeGraph,
    pub solution: Solution,
    /// The minimal model without the elliptic curves the reference omits.
    pub displayed: IntersectionGraph,
    pub comparison: GraphComparison,
    /// `displayed` with reference names, when an isomorphism was found.
    pub named: IntersectionGraph,
}

pub struct SurfaceModel {
    pub field: Field,
    pub record: GoldenRecord,
    pub cusps: Vec<Cusp>,
    pub frames: Vec<CuspFrame>,
    /// `(start, reversed)` presenting each cusp cycle in reference order.
    pub orientations: Vec<(usize, bool)>,
    pub points: Vec<EllipticPoint>,
    pub hz: HzSurface,
}

impl SurfaceModel {
    pub fn build(d: i64, genus: GenusKind) -> Result<SurfaceModel> {
        if !is_k3(d, genus) {
            return Err(HilbError::NotK3 { d, genus: genus.to_string() });
        }
        let record = GoldenRecord::load(d, genus)?;
        let field = Field::new(d, genus)?;
        let cusps = enumerate_cusps(&field)?;
        let frames = cusps.iter().enumerate().map(|(i, c)| CuspFrame::new(&field, i, c)).collect::<Result<Vec<_>>>()?;
        let [a, b, c] = record.cusps.forms[0];
        let first = Form { a, b, c };
        let orientations = frames
            .iter()
            .map(|f| {
                f.cycle.align_to(&first).ok_or_else(|| {
                    HilbError::Verification(format!("D={d} {genus}: cusp {} has no rotation starting at {first:?}", f.cusp_index))
                })
            })
            .collect::<Result<Vec<_>>>()?;
        let points = points_in_reference_order(&field, &record)?;
        let hz = HzSurface::compute(&field, &record, &points, &frames)?;
        Ok(SurfaceModel { field, record, cusps, frames, orientations, points, hz })
    }

    /// Index of point `i` among the points of its own type.
    pub fn index_within_type(&self, i: usize) -> usize {
        let kind: EllipticType = self.points[i].kind;
        self.points[..i].iter().filter(|p| p.kind == kind).count()
    }

    /// Displayed position of curve `k` (relative to `A_0`) of cusp `cusp`.
    pub fn cusp_position(&self, cusp: usize, k: usize) -> usize {
        let len = self.frames[cusp].full_length as i64;
        let (s, reversed) = self.orientations[cusp];
        let j = if reversed { s as i64 - k as i64 } else { k as i64 - s as i64 };
        j.rem_euclid(len) as usize
    }
}

impl SurfaceModel {
    pub fn graph(&self) -> Result<GraphOutcome> {
        let (tilde, solution) = minimal_model(self)?;
        let (displayed, _) = displayed_subgraph(&solution.blowdown.minimal);
        let comparison = compare_with_reference(&displayed, &self.record.graph);
        let inverse: BTreeMap<String, String> = comparison.mapping.iter().map(|(r, c)| (c.clone(), r.clone())).collect();
        let named = displayed.relabeled(&inverse);
        Ok(GraphOutcome { tilde, solution, displayed, comparison, named })
    }

    /// Reference vertices drawn in bold.
    pub fn bold_labels(&self) -> BTreeSet<String> {
        self.record.graph.vertices.iter().filter(|v| v.bold).map(|v| v.label.clone()).collect()
    }

    pub fn fibration_row(&self) -> Result<FibrationRow> {
        FibrationRow::from_golden(self.record.d, self.record.genus, &self.record.fibrations)
    }

    /// Checks the surface's fibration row on the computed graph.
    pub fn verify_fibrations(&self, outcome: &GraphOutcome) -> Result<HilbertCheckReport> {
        classify_and_check(&outcome.named, &self.fibration_row()?, &self.bold_labels())
    }
}
