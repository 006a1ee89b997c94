//! Boundary condition tags described by arc length along the polygon.

use super::DiscretizeError;
use crate::geom::ConvexPolygon;
use serde::{Deserialize, Serialize};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum BoundaryTag {
    Neumann,
    Dirichlet,
}

/// Which part of the boundary carries the Neumann condition. Arc length
/// runs counterclockwise from polygon vertex 0; everything outside the
/// listed half-open intervals is Dirichlet.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum BoundarySpec {
    AllNeumann,
    AllDirichlet,
    Neumann(Vec<[f64; 2]>),
}

impl BoundarySpec {
    /// Intervals checked to be disjoint and inside `[0, perimeter]`.
    pub fn neumann_intervals(
        mut intervals: Vec<[f64; 2]>,
        perimeter: f64,
    ) -> Result<Self, DiscretizeError> {
        intervals.sort_by(|a, b| a[0].total_cmp(&b[0]));
        let tol = 1e-12 * perimeter;
        for iv in &intervals {
            if !(iv[0] >= -tol && iv[0] < iv[1] && iv[1] <= perimeter + tol) {
                return Err(DiscretizeError::InvalidArgument(format!(
                    "interval {iv:?} not inside [0, {perimeter})"
                )));
            }
        }
        if intervals.windows(2).any(|w| w[1][0] < w[0][1] - tol) {
            return Err(DiscretizeError::InvalidArgument("overlapping intervals".into()));
        }
        Ok(BoundarySpec::Neumann(intervals))
    }

    /// Neumann on the listed polygon edges (edge `i` runs from vertex `i`
    /// to vertex `i + 1`), Dirichlet elsewhere.
    pub fn neumann_edges(poly: &ConvexPolygon, edges: &[usize]) -> Result<Self, DiscretizeError> {
        let mut starts = vec![0.0];
        for (a, b) in poly.edges() {
            starts.push(starts.last().unwrap() + a.dist(b));
        }
        let intervals = edges
            .iter()
            .map(|&i| {
                if i >= poly.len() {
                    Err(DiscretizeError::InvalidArgument(format!("no edge {i}")))
                } else {
                    Ok([starts[i], starts[i + 1]])
                }
            })
            .collect::<Result<Vec<_>, _>>()?;
        Self::neumann_intervals(intervals, poly.perimeter())
    }

    pub fn tag_at(&self, s: f64) -> BoundaryTag {
        match self {
            BoundarySpec::AllNeumann => BoundaryTag::Neumann,
            BoundarySpec::AllDirichlet => BoundaryTag::Dirichlet,
            BoundarySpec::Neumann(ivs) => {
                if ivs.iter().any(|iv| iv[0] <= s && s < iv[1]) {
                    BoundaryTag::Neumann
                } else {
                    BoundaryTag::Dirichlet
                }
            }
        }
    }
}
