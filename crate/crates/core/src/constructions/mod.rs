//! The smoothed Farey polygon: a polygon inscribed in a huge circle along
//! the Farey ray fan, corners rounded by unit arcs, closed by a stadium
//! outside the sector `|y| <= x`; and the checks run on its polar domain.

use crate::annulus::{bilinear_k, bilinear_setup_points, windowed_sum, Bilinear};
use crate::error::{invalid, LdlError, Result};
use crate::geometry::piecewise::{Piece, PiecewiseBoundary};
use crate::geometry::{cap, ConvexDomain};
use crate::numeric::{LatticePoint, Vec2};
use rayon::prelude::*;
use serde::Serialize;
use std::f64::consts::{PI, TAU};

pub const DEFAULT_C0: f64 = 10.0;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct FareyDomainParams {
    #[serde(rename = "R")]
    pub big_r: f64,
    pub eps: f64,
    pub r: u32,
    #[serde(rename = "C0")]
    pub c0: f64,
    /// `R^(1/2) (log R)^(-eps)`.
    pub h: f64,
}

/// Largest admissible Farey order, `ceil((log R)^(eps/3))`.
pub fn max_order(big_r: f64, eps: f64) -> u32 {
    big_r.ln().powf(eps / 3.0).ceil().max(1.0) as u32
}

impl FareyDomainParams {
    /// `r` defaults to the largest admissible order.
    pub fn new(big_r: f64, eps: f64, r: Option<u32>, c0: f64) -> Result<Self> {
        if !(big_r > std::f64::consts::E && big_r.is_finite()) {
            return invalid(format!("R must exceed e, got {big_r}"));
        }
        if !(eps > 0.0 && eps.is_finite()) {
            return invalid(format!("eps must be positive, got {eps}"));
        }
        if !(c0 > 0.0 && c0.is_finite()) {
            return invalid(format!("C0 must be positive, got {c0}"));
        }
        if big_r < c0 {
            return invalid(format!("R = {big_r} is below C0 = {c0}"));
        }
        let r_max = max_order(big_r, eps);
        let r = r.unwrap_or(r_max);
        if r == 0 || r > r_max {
            return invalid(format!(
                "Farey order must lie in 1..={r_max} at R = {big_r}, eps = {eps}; got {r}"
            ));
        }
        let h = big_r.sqrt() * big_r.ln().powf(-eps);
        if h < c0 {
            return invalid(format!(
                "h = {h} is below C0 = {c0}; smoothing is not guaranteed"
            ));
        }
        Ok(FareyDomainParams {
            big_r,
            eps,
            r,
            c0,
            h,
        })
    }

    /// Radius `h r^2` of the circle carrying the polygon.
    pub fn circle_radius(&self) -> f64 {
        self.h * (self.r as f64).powi(2)
    }
}

/// Primitive directions `(m, n)` with `|n| <= m <= r`, by increasing slope.
pub fn farey_rays(r: u32) -> Vec<(i64, i64)> {
    let r = r.max(1) as i64;
    // Farey sequence of order r on [0, 1] by the next-term recurrence.
    let mut pos = vec![(1i64, 0i64)];
    let (mut a, mut b, mut c, mut d) = (0i64, 1i64, 1i64, r);
    while (c, d) != (1, 1) {
        pos.push((d, c));
        let k = (r + b) / d;
        (a, b, c, d) = (c, d, k * c - a, k * d - b);
    }
    pos.push((1, 1));
    let mut rays: Vec<(i64, i64)> = pos
        .iter()
        .rev()
        .filter(|p| p.1 != 0)
        .map(|&(m, n)| (m, -n))
        .collect();
    rays.extend(pos);
    rays
}

/// One polygon vertex and its rounded corner.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct FareyCorner {
    pub m: i64,
    pub n: i64,
    pub vertex: Vec2,
    /// Angle of the vertex seen from the circle's center.
    pub alpha: f64,
    /// Exterior angle at the vertex; zero at the two sector ends.
    pub turn: f64,
    /// Diameter of the unit arc rounding the corner; `None` at the ends.
    pub delta: Option<f64>,
}

#[derive(Debug, Clone, Serialize)]
pub struct FareyDomain {
    pub params: FareyDomainParams,
    pub corners: Vec<FareyCorner>,
    /// The smoothed polygon.
    #[serde(skip_serializing)]
    pub d_domain: ConvexDomain,
    /// Its polar domain, the one the lattice checks run on.
    #[serde(skip_serializing)]
    pub omega: ConvexDomain,
}

fn gap_name(a: (i64, i64), b: (i64, i64)) -> String {
    format!("{}/{} .. {}/{}", a.1, a.0, b.1, b.0)
}

pub fn build_farey_domain(params: &FareyDomainParams) -> Result<FareyDomain> {
    let rays = farey_rays(params.r);
    let big_h = params.circle_radius();
    let center = Vec2::new(1.0 - big_h, 0.0);
    let verts: Vec<Vec2> = rays
        .iter()
        .map(|&(m, n)| {
            let u = Vec2::new(m as f64, n as f64).normalized();
            let b = u.x * (big_h - 1.0);
            let t = (2.0 * big_h - 1.0) / ((b * b + 2.0 * big_h - 1.0).sqrt() + b);
            u * t
        })
        .collect();
    let alpha: Vec<f64> = verts.iter().map(|p| (*p - center).angle()).collect();
    let k = verts.len();
    let normals: Vec<f64> = (0..k - 1)
        .map(|i| 0.5 * (alpha[i] + alpha[i + 1]))
        .collect();

    let mut corners = Vec::with_capacity(k);
    let mut arcs: Vec<Option<(Vec2, f64, f64, f64)>> = vec![None; k];
    for i in 0..k {
        let (turn, delta) = if i == 0 || i == k - 1 {
            (0.0, None)
        } else {
            let turn = normals[i] - normals[i - 1];
            let bis = Vec2::from_angle(0.5 * (normals[i] + normals[i - 1]));
            let c = verts[i] - bis * (1.0 / (0.5 * turn).cos());
            arcs[i] = Some((c, normals[i - 1], normals[i], (0.5 * turn).tan()));
            (turn, Some(2.0 * (0.5 * turn).sin()))
        };
        corners.push(FareyCorner {
            m: rays[i].0,
            n: rays[i].1,
            vertex: verts[i],
            alpha: alpha[i],
            turn,
            delta,
        });
    }
    for i in 0..k - 1 {
        let used = arcs[i].map_or(0.0, |a| a.3) + arcs[i + 1].map_or(0.0, |a| a.3);
        let len = verts[i].dist(verts[i + 1]);
        if used > len {
            return Err(LdlError::Construction(format!(
                "smoothing infeasible in Farey gap {}: tangent lengths {used} exceed edge {len}",
                gap_name(rays[i], rays[i + 1])
            )));
        }
    }

    let mut pieces = Vec::with_capacity(2 * k + 2);
    let arc_point = |i: usize, at_end: bool| -> Vec2 {
        match arcs[i] {
            Some((c, s, e, _)) => c + Vec2::from_angle(if at_end { e } else { s }),
            None => verts[i],
        }
    };
    for i in 0..k {
        if let Some((c, s, e, _)) = arcs[i] {
            pieces.push(Piece::Arc {
                center: c,
                radius: 1.0,
                start: s,
                end: e,
            });
        }
        if i + 1 < k {
            pieces.push(Piece::Segment {
                a: arc_point(i, true),
                b: arc_point(i + 1, false),
            });
        }
    }
    let top_normal = normals[k - 2];
    let c_top = verts[k - 1] - Vec2::from_angle(top_normal);
    let c_bottom = Vec2::new(c_top.x, -c_top.y);
    pieces.push(Piece::Arc {
        center: c_top,
        radius: 1.0,
        start: top_normal,
        end: PI,
    });
    pieces.push(Piece::Segment {
        a: Vec2::new(c_top.x - 1.0, c_top.y),
        b: Vec2::new(c_bottom.x - 1.0, c_bottom.y),
    });
    pieces.push(Piece::Arc {
        center: c_bottom,
        radius: 1.0,
        start: PI,
        end: TAU - top_normal,
    });

    let d_domain = ConvexDomain::farey(*params, PiecewiseBoundary::new(pieces));
    let omega = ConvexDomain::polar_dual(d_domain.clone()).with_label(format!(
        "farey:{},{},{}",
        params.big_r, params.eps, params.r
    ));
    Ok(FareyDomain {
        params: *params,
        corners,
        d_domain,
        omega,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PythRow {
    pub m: i64,
    pub n: i64,
    pub x: f64,
    pub lower: f64,
    pub ok: bool,
}

/// `1 - 1/(2 h r^2) <= x_j <= 1` for every vertex.
pub fn verify_pyth(fd: &FareyDomain) -> (Vec<PythRow>, bool) {
    let lower = 1.0 - 0.5 / fd.params.circle_radius();
    let rows: Vec<PythRow> = fd
        .corners
        .iter()
        .map(|c| PythRow {
            m: c.m,
            n: c.n,
            x: c.vertex.x,
            lower,
            ok: c.vertex.x >= lower && c.vertex.x <= 1.0,
        })
        .collect();
    let ok = rows.iter().all(|r| r.ok);
    (rows, ok)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SlimRow {
    pub m: i64,
    /// `max_n rho - min_n rho` over `|n| <= m`.
    pub deviation: f64,
    /// `2m/(h r^2)`.
    pub row_bound: f64,
    pub ok: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SlimCheck {
    pub rows: Vec<SlimRow>,
    pub max_deviation: f64,
    /// `2/(h r)`.
    pub bound: f64,
    pub ok: bool,
}

/// Spread of the gauge of the polygon (the polar functional of the
/// experiment domain) along each lattice column `m`.
pub fn verify_slim(fd: &FareyDomain) -> SlimCheck {
    let p = &fd.params;
    let r = p.r as i64;
    let bound = 2.0 / (p.h * p.r as f64);
    let rows: Vec<SlimRow> = (1..=r)
        .map(|m| {
            let vals: Vec<f64> = (-m..=m)
                .map(|n| fd.omega.support(Vec2::new(m as f64, n as f64)))
                .collect();
            let hi = vals.iter().cloned().fold(f64::MIN, f64::max);
            let lo = vals.iter().cloned().fold(f64::MAX, f64::min);
            let deviation = hi - lo;
            SlimRow {
                m,
                deviation,
                row_bound: 2.0 * m as f64 / (p.h * (p.r as f64).powi(2)),
                ok: deviation <= bound,
            }
        })
        .collect();
    let max_deviation = rows.iter().map(|r| r.deviation).fold(0.0, f64::max);
    SlimCheck {
        ok: rows.iter().all(|r| r.ok),
        rows,
        max_deviation,
        bound,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CapRow {
    pub m: i64,
    pub n: i64,
    pub delta: f64,
    pub mu: f64,
    /// `sqrt(R|k|) mu(k/|k|, 1/(R|k|))`.
    pub ratio: f64,
    /// Diameter of the rounded corner on the ray through `k`, if any.
    pub corner_delta: Option<f64>,
    /// Whether the cap stays inside the rounded corner
    /// (`2 sqrt(2 delta) <= corner_delta`).
    pub in_regime: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CapCheck {
    #[serde(rename = "R")]
    pub big_r: f64,
    pub rows: Vec<CapRow>,
    pub min: f64,
    pub max: f64,
    /// `R >= h^2 r^6`.
    pub precondition_holds: bool,
    pub bracket: [f64; 2],
    pub within_bracket: bool,
}

pub fn verify_cap_condition(fd: &FareyDomain, big_r: f64, bracket: [f64; 2]) -> Result<CapCheck> {
    let p = &fd.params;
    let r = p.r as i64;
    let ks: Vec<(i64, i64)> = (1..=r)
        .flat_map(|m| (-m..=m).filter(|n| *n != 0).map(move |n| (m, n)))
        .collect();
    let rows = ks
        .par_iter()
        .map(|&(m, n)| {
            let v = Vec2::new(m as f64, n as f64);
            let len = v.norm();
            let delta = 1.0 / (big_r * len);
            let mu = cap(&fd.omega, v * (1.0 / len), delta)?.mu;
            let g = crate::numeric::gcd(m, n);
            let corner_delta = fd
                .corners
                .iter()
                .find(|c| (c.m, c.n) == (m / g, n / g))
                .and_then(|c| c.delta);
            Ok(CapRow {
                m,
                n,
                delta,
                mu,
                ratio: (big_r * len).sqrt() * mu,
                corner_delta,
                in_regime: corner_delta.is_some_and(|d| 2.0 * (2.0 * delta).sqrt() <= d),
            })
        })
        .collect::<Result<Vec<CapRow>>>()?;
    let min = rows.iter().map(|r| r.ratio).fold(f64::INFINITY, f64::min);
    let max = rows.iter().map(|r| r.ratio).fold(0.0, f64::max);
    Ok(CapCheck {
        big_r,
        precondition_holds: big_r >= p.h * p.h * (p.r as f64).powi(6),
        within_bracket: min >= bracket[0] && max <= bracket[1],
        bracket,
        rows,
        min,
        max,
    })
}

/// Lattice points `(m, n)` with `|n| <= m <= r`, `m >= 1`.
pub fn triangle_points(r: u32) -> Vec<LatticePoint> {
    let r = r as i64;
    (1..=r)
        .flat_map(|m| (-m..=m).map(move |n| LatticePoint::new(m, n)))
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct KLowerBound {
    #[serde(rename = "R")]
    pub big_r: f64,
    pub h: f64,
    /// The bilinear sum restricted to the lattice triangle.
    pub k_restricted: f64,
    /// The full bilinear sum, when small enough to enumerate.
    pub k_unrestricted: Option<f64>,
    /// `R^-1 sum over the triangle of m^-2`.
    pub lower_chain: f64,
    /// `K R / (eps log log R)` with the restricted sum.
    pub ratio: f64,
}

/// Points in the full bilinear sum above which it is skipped.
pub const UNRESTRICTED_POINT_LIMIT: f64 = 1e6;

pub fn verify_k_lower_bound(fd: &FareyDomain) -> Result<KLowerBound> {
    let p = &fd.params;
    let pts = triangle_points(p.r);
    let setup = bilinear_setup_points(&fd.omega, &pts, p.big_r);
    let (k_restricted, _) = windowed_sum(&setup, 1.0 / p.h, true);
    let k_unrestricted = if PI * p.big_r * p.big_r <= UNRESTRICTED_POINT_LIMIT {
        let Bilinear { value, .. } = bilinear_k(&fd.omega, p.big_r, p.h, true)?;
        Some(value)
    } else {
        None
    };
    let lower_chain = pts.iter().map(|k| (k.x as f64).powi(-2)).sum::<f64>() / p.big_r;
    Ok(KLowerBound {
        big_r: p.big_r,
        h: p.h,
        k_restricted,
        k_unrestricted,
        lower_chain,
        ratio: k_restricted * p.big_r / (p.eps * p.big_r.ln().ln()),
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct FareyConstants {
    /// `min corner_delta * h r^3`.
    pub c: f64,
    /// `max corner_delta * h r^2`.
    pub big_c: f64,
}

/// Fitted constants for `c/(h r^3) <= corner_delta <= C/(h r^2)`.
pub fn farey_constants(fd: &FareyDomain) -> Option<FareyConstants> {
    let p = &fd.params;
    let ds: Vec<f64> = fd.corners.iter().filter_map(|c| c.delta).collect();
    if ds.is_empty() {
        return None;
    }
    let r = p.r as f64;
    let lo = ds.iter().cloned().fold(f64::INFINITY, f64::min);
    let hi = ds.iter().cloned().fold(0.0, f64::max);
    Some(FareyConstants {
        c: lo * p.h * r.powi(3),
        big_c: hi * p.h * r * r,
    })
}
