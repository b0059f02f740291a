//! Convex boundaries assembled from straight faces and circular arcs.
//!
//! Gauge, support function, support point and gauge gradient are all
//! evaluated exactly from the piece list; no iterative solves.

use crate::numeric::Vec2;
use serde::{Deserialize, Serialize};
use std::f64::consts::{PI, TAU};

/// One boundary piece, traversed counterclockwise.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum Piece {
    Segment {
        a: Vec2,
        b: Vec2,
    },
    /// Arc of the circle `center + radius * (cos t, sin t)` for `t` running
    /// from `start` to `end` (`end > start`).
    Arc {
        center: Vec2,
        radius: f64,
        start: f64,
        end: f64,
    },
}

impl Piece {
    pub fn start_point(&self) -> Vec2 {
        match *self {
            Piece::Segment { a, .. } => a,
            Piece::Arc {
                center,
                radius,
                start,
                ..
            } => center + Vec2::from_angle(start) * radius,
        }
    }

    pub fn end_point(&self) -> Vec2 {
        match *self {
            Piece::Segment { b, .. } => b,
            Piece::Arc {
                center,
                radius,
                end,
                ..
            } => center + Vec2::from_angle(end) * radius,
        }
    }

    /// Outward normal angle range covered by the piece.
    fn normal_range(&self) -> (f64, f64) {
        match *self {
            Piece::Segment { a, b } => {
                let d = b - a;
                let n = Vec2::new(d.y, -d.x).angle();
                (n, n)
            }
            Piece::Arc { start, end, .. } => (start, end),
        }
    }
}

fn angle_in_range(phi: f64, start: f64, end: f64) -> bool {
    let off = (phi - start).rem_euclid(TAU);
    off <= end - start
}

/// Closed convex curve around the origin made of segments and arcs.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PiecewiseBoundary {
    pieces: Vec<Piece>,
    /// Polar angle of each piece's start point, unwrapped to increase.
    start_angles: Vec<f64>,
}

impl PiecewiseBoundary {
    /// Builds the boundary; pieces must be contiguous and counterclockwise
    /// around the origin.
    pub fn new(pieces: Vec<Piece>) -> Self {
        let mut start_angles = Vec::with_capacity(pieces.len());
        let base = pieces[0].start_point().angle();
        for p in &pieces {
            let a = p.start_point().angle();
            start_angles.push(base + (a - base).rem_euclid(TAU));
        }
        PiecewiseBoundary {
            pieces,
            start_angles,
        }
    }

    pub fn pieces(&self) -> &[Piece] {
        &self.pieces
    }

    fn locate(&self, dir: Vec2) -> usize {
        let base = self.start_angles[0];
        let phi = base + (dir.angle() - base).rem_euclid(TAU);
        match self
            .start_angles
            .binary_search_by(|a| a.partial_cmp(&phi).unwrap())
        {
            Ok(i) => i,
            Err(0) => self.pieces.len() - 1,
            Err(i) => i - 1,
        }
    }

    /// Distance from the origin to the boundary along the unit ray `u`,
    /// through piece `i`.
    fn ray_hit(&self, i: usize, u: Vec2) -> Option<f64> {
        match self.pieces[i] {
            Piece::Segment { a, b } => {
                let d = b - a;
                let den = u.cross(d);
                if den <= 0.0 {
                    return None;
                }
                let s = a.cross(d) / den;
                (s > 0.0).then_some(s)
            }
            Piece::Arc { center, radius, .. } => {
                let p = u.dot(center);
                let q = center.dot(center) - radius * radius;
                let disc = p * p - q;
                if disc < 0.0 {
                    return None;
                }
                let sq = disc.sqrt();
                let s = if p >= 0.0 { p + sq } else { -q / (sq - p) };
                (s > 0.0).then_some(s)
            }
        }
    }

    /// Boundary point on the ray through `dir`, with the index of its piece.
    pub fn ray_point(&self, dir: Vec2) -> (Vec2, usize) {
        let u = dir.normalized();
        let n = self.pieces.len();
        let i = self.locate(u);
        // Rounding can put the direction a hair outside the located piece;
        // the neighbours resolve that.
        for k in [i, (i + 1) % n, (i + n - 1) % n] {
            if let Some(s) = self.ray_hit(k, u) {
                let y = u * s;
                if self.piece_contains_direction(k, u) {
                    return (y, k);
                }
            }
        }
        let s = self.ray_hit(i, u).unwrap_or(f64::NAN);
        (u * s, i)
    }

    fn piece_contains_direction(&self, k: usize, u: Vec2) -> bool {
        let a = self.pieces[k].start_point();
        let b = self.pieces[k].end_point();
        let eps = 1e-12;
        a.cross(u) >= -eps * a.norm() && u.cross(b) >= -eps * b.norm()
    }

    pub fn gauge(&self, x: Vec2) -> f64 {
        if x.x == 0.0 && x.y == 0.0 {
            return 0.0;
        }
        let (y, _) = self.ray_point(x);
        x.norm() / y.norm()
    }

    pub fn support(&self, xi: Vec2) -> f64 {
        let phi = xi.angle();
        let r = xi.norm();
        let mut best = f64::NEG_INFINITY;
        for p in &self.pieces {
            let v = match *p {
                Piece::Segment { a, b } => a.dot(xi).max(b.dot(xi)),
                Piece::Arc {
                    center,
                    radius,
                    start,
                    end,
                } => {
                    if angle_in_range(phi, start, end) {
                        center.dot(xi) + radius * r
                    } else {
                        p.start_point().dot(xi).max(p.end_point().dot(xi))
                    }
                }
            };
            best = best.max(v);
        }
        best
    }

    /// Boundary point with outward normal `theta`; the midpoint of a face
    /// when `theta` is normal to it.
    pub fn support_point(&self, theta: Vec2) -> Vec2 {
        let phi = theta.angle();
        for p in &self.pieces {
            let (lo, hi) = p.normal_range();
            match *p {
                Piece::Segment { a, b } => {
                    let off = (phi - lo + PI).rem_euclid(TAU) - PI;
                    if off.abs() <= 1e-12 {
                        return (a + b) * 0.5;
                    }
                }
                Piece::Arc { center, radius, .. } => {
                    if angle_in_range(phi, lo, hi) {
                        return center + Vec2::from_angle(phi) * radius;
                    }
                }
            }
        }
        // Normal falls between pieces: the maximizing junction point.
        let mut best = self.pieces[0].start_point();
        let mut best_v = best.dot(theta);
        for p in &self.pieces {
            let v = p.start_point();
            let d = v.dot(theta);
            if d > best_v {
                best = v;
                best_v = d;
            }
        }
        best
    }

    /// Gradient of the gauge at `x != 0`.
    pub fn gauge_gradient(&self, x: Vec2) -> Vec2 {
        let (y, k) = self.ray_point(x);
        let nu = match self.pieces[k] {
            Piece::Segment { a, b } => {
                let d = b - a;
                Vec2::new(d.y, -d.x).normalized()
            }
            Piece::Arc { center, radius, .. } => (y - center) * (1.0 / radius),
        };
        nu * (1.0 / nu.dot(y))
    }

    /// Enclosed area (exact).
    pub fn area(&self) -> f64 {
        let mut twice = 0.0;
        for p in &self.pieces {
            twice += match *p {
                Piece::Segment { a, b } => a.cross(b),
                Piece::Arc {
                    center,
                    radius,
                    start,
                    end,
                } => {
                    let r = radius;
                    r * center.x * (end.sin() - start.sin())
                        - r * center.y * (end.cos() - start.cos())
                        + r * r * (end - start)
                }
            };
        }
        0.5 * twice
    }
}
