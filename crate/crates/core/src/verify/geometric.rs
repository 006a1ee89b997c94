//! Bishop–Gromov and Brunn–Minkowski inequalities on planar convex sets.

use super::{CheckReport, CheckRow, VerifyError};
use crate::geom::{ConvexPolygon, Point};
use serde_json::json;
use std::f64::consts::PI;

/// `area(B(x,r)∩P)/area(B(x,R)∩P) ≥ (r/R)²` and `area(B(x,R)∩P) ≤ πR²`.
pub fn bishop_gromov_check(p: &ConvexPolygon, x: Point, r: f64, big_r: f64) -> Result<CheckReport, VerifyError> {
    if !(r > 0.0 && r < big_r) {
        return Err(VerifyError::InvalidArgument(format!("need 0 < r < R, got r = {r}, R = {big_r}")));
    }
    if !p.contains(x, p.eps()) {
        return Err(VerifyError::PointOutside(x.x, x.y));
    }
    let small = p.disk_intersection_area(x, r);
    let large = p.disk_intersection_area(x, big_r);
    let ratio = small / large;
    let rows = vec![
        CheckRow::le((r / big_r).powi(2), ratio, 1e-12).with_label("volume_ratio"),
        CheckRow::le(large, PI * big_r * big_r, 1e-12).with_label("ball_volume"),
    ];
    Ok(CheckReport::from_rows(
        "bishop_gromov",
        json!({"polygon": p, "x": x, "r": r, "R": big_r}),
        rows,
        true,
    ))
}

/// `area((1-t)A + tB)^{1/2} ≥ (1-t) area(A)^{1/2} + t area(B)^{1/2}`.
pub fn brunn_minkowski_check(a: &ConvexPolygon, b: &ConvexPolygon, t: f64) -> Result<CheckReport, VerifyError> {
    let mix = ConvexPolygon::minkowski_combination(a, b, t)?;
    let lhs = (1.0 - t) * a.area().sqrt() + t * b.area().sqrt();
    let rhs = mix.area().sqrt();
    let rows = vec![CheckRow::le(lhs, rhs, 1e-10 * rhs)];
    Ok(CheckReport::from_rows("brunn_minkowski", json!({"A": a, "B": b, "t": t}), rows, true))
}
