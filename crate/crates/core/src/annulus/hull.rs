//! Convex hulls of lattice sets and the vertex bound for convex lattice
//! chains.

use crate::error::{invalid, Result};
use crate::numeric::LatticePoint;
use serde::Serialize;
use std::f64::consts::TAU;

fn cross(o: LatticePoint, a: LatticePoint, b: LatticePoint) -> i128 {
    let (ax, ay) = ((a.x - o.x) as i128, (a.y - o.y) as i128);
    let (bx, by) = ((b.x - o.x) as i128, (b.y - o.y) as i128);
    ax * by - ay * bx
}

/// Extreme points of the convex hull, counterclockwise from the
/// lexicographically smallest point. Points on hull edges that are not
/// vertices are dropped.
pub fn hull_extreme_points(points: &[LatticePoint]) -> Vec<LatticePoint> {
    let mut pts = points.to_vec();
    pts.sort();
    pts.dedup();
    if pts.len() <= 2 {
        return pts;
    }
    let mut hull: Vec<LatticePoint> = Vec::with_capacity(2 * pts.len());
    for &p in &pts {
        while hull.len() >= 2 && cross(hull[hull.len() - 2], hull[hull.len() - 1], p) <= 0 {
            hull.pop();
        }
        hull.push(p);
    }
    let lower = hull.len() + 1;
    for &p in pts.iter().rev().skip(1) {
        while hull.len() >= lower && cross(hull[hull.len() - 2], hull[hull.len() - 1], p) <= 0 {
            hull.pop();
        }
        hull.push(p);
    }
    hull.pop();
    hull
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ChainBound {
    /// Number of vertices.
    pub j: usize,
    /// Total edge length.
    pub length: f64,
    /// Angle between the first and the last edge.
    pub delta_beta: f64,
    /// `2 + delta_beta^(1/3) length^(2/3)`.
    pub bound: f64,
    pub ok: bool,
}

/// Checks `J <= 2 + (beta_{J-1} - beta_1)^(1/3) L^(2/3)` for a convex
/// lattice chain with strictly increasing edge angles.
pub fn chain_vertex_bound_check(vertices: &[LatticePoint]) -> Result<ChainBound> {
    let j = vertices.len();
    let mut length = 0.0;
    let mut delta_beta = 0.0;
    for i in 0..j.saturating_sub(1) {
        let (a, b) = (vertices[i], vertices[i + 1]);
        if a == b {
            return invalid(format!("chain has a repeated vertex at index {}", i + 1));
        }
        length += LatticePoint::new(b.x - a.x, b.y - a.y).norm();
        if i + 2 < j {
            let c = vertices[i + 2];
            let turn = cross(a, b, c);
            if turn <= 0 {
                return invalid(format!("chain is not strictly convex at index {}", i + 1));
            }
            let (ux, uy) = ((b.x - a.x) as f64, (b.y - a.y) as f64);
            let (vx, vy) = ((c.x - b.x) as f64, (c.y - b.y) as f64);
            delta_beta += (ux * vy - uy * vx).atan2(ux * vx + uy * vy);
        }
    }
    if delta_beta > TAU {
        return invalid(format!("chain turns by {delta_beta} > 2 pi"));
    }
    let bound = 2.0 + delta_beta.cbrt() * length.powf(2.0 / 3.0);
    Ok(ChainBound {
        j,
        length,
        delta_beta,
        bound,
        ok: j as f64 <= bound,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn lp(v: &[(i64, i64)]) -> Vec<LatticePoint> {
        v.iter().map(|&(x, y)| LatticePoint::new(x, y)).collect()
    }

    #[test]
    fn square_with_interior_point() {
        let h = hull_extreme_points(&lp(&[(2, 2), (0, 0), (4, 0), (0, 4), (4, 4)]));
        assert_eq!(h, lp(&[(0, 0), (4, 0), (4, 4), (0, 4)]));
    }

    #[test]
    fn collinear_points() {
        assert_eq!(
            hull_extreme_points(&lp(&[(0, 0), (1, 0), (2, 0)])),
            lp(&[(0, 0), (2, 0)])
        );
        assert_eq!(hull_extreme_points(&lp(&[(3, 3)])), lp(&[(3, 3)]));
    }

    #[test]
    fn three_point_chain() {
        let c = chain_vertex_bound_check(&lp(&[(0, 0), (1, 0), (2, 1)])).unwrap();
        let l = 1.0 + 2f64.sqrt();
        let expect = 2.0 + (std::f64::consts::FRAC_PI_4).cbrt() * l.powf(2.0 / 3.0);
        assert_eq!(c.j, 3);
        assert!((c.bound - expect).abs() < 1e-12);
        assert!((c.bound - 3.66).abs() < 0.01);
        assert!(c.ok);
    }

    #[test]
    fn rejects_reflex_chain() {
        let e = chain_vertex_bound_check(&lp(&[(0, 0), (1, 0), (2, -1)])).unwrap_err();
        assert!(e.to_string().contains("index 1"));
        assert!(chain_vertex_bound_check(&lp(&[(0, 0), (1, 0), (2, 0)])).is_err());
    }
}
