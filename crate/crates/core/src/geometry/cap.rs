use super::ConvexDomain;
use crate::error::{invalid, LdlError, Result};
use crate::numeric::{bracketed_root, log_space, Vec2};
use rayon::prelude::*;
use serde::Serialize;
use std::f64::consts::TAU;

/// Boundary slice at depth `delta` below the supporting line with outer
/// normal `theta`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Cap {
    pub theta: Vec2,
    pub delta: f64,
    /// Counterclockwise endpoint first.
    pub endpoints: [Vec2; 2],
    pub mu: f64,
}

/// Computes the cap of `domain` in direction `theta` at depth `delta`.
///
/// The slice exists as long as `delta` is below the width of the domain in
/// direction `theta`; deeper requests fail with [`LdlError::CapTooDeep`].
pub fn cap(domain: &ConvexDomain, theta: Vec2, delta: f64) -> Result<Cap> {
    if !theta.is_finite() || (theta.norm() - 1.0).abs() > 1e-12 {
        return invalid(format!(
            "direction ({}, {}) is not a unit vector",
            theta.x, theta.y
        ));
    }
    if !(delta > 0.0) || !delta.is_finite() {
        return invalid(format!("cap depth must be positive, got {delta}"));
    }
    let h = domain.support(theta);
    let width = h + domain.support(-theta);
    if delta >= width {
        return Err(LdlError::CapTooDeep {
            delta,
            width,
            theta_x: theta.x,
            theta_y: theta.y,
        });
    }
    Ok(cap_unchecked(domain, theta, delta, h))
}

fn cap_unchecked(domain: &ConvexDomain, theta: Vec2, delta: f64, h: f64) -> Cap {
    let phi0 = domain.support_point_raw(theta).angle();
    let phi1 = domain.support_point_raw(-theta).angle();
    let span = (phi1 - phi0).rem_euclid(TAU);
    let level = h - delta;
    let f = |phi: f64| domain.boundary_point(phi).dot(theta) - level;
    let tol = 1e-15;
    let a = bracketed_root(f, phi0, phi0 + span, tol);
    let b = bracketed_root(f, phi0 - (TAU - span), phi0, tol);
    let pa = domain.boundary_point(a);
    let pb = domain.boundary_point(b);
    Cap {
        theta,
        delta,
        endpoints: [pa, pb],
        mu: pa.dist(pb),
    }
}

/// Cap diameter with the slab convention beyond the width: once `delta`
/// reaches the width of the domain the slab is the whole domain, whose
/// diameter is bounded by `2 r2`.
pub fn cap_mu_or_diameter(domain: &ConvexDomain, theta: Vec2, delta: f64) -> f64 {
    let h = domain.support(theta);
    let width = h + domain.support(-theta);
    if delta >= width {
        2.0 * domain.r2()
    } else {
        cap_unchecked(domain, theta, delta, h).mu
    }
}

/// Grid approximation of `sup delta^{-1/2} mu(theta, delta)` and of its
/// per-direction maximum.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CurvatureProfile {
    pub sup: f64,
    /// `(angle of theta, max over the delta grid)` for each grid direction.
    pub per_theta: Vec<(f64, f64)>,
}

/// Default depth grid: 50 points per decade over `[1e-8, 1e-1] * r1`.
pub fn default_delta_grid(domain: &ConvexDomain) -> Vec<f64> {
    log_space(1e-8 * domain.r1(), 1e-1 * domain.r1(), 7 * 50 + 1)
}

pub fn curvature_ratio_sup(
    domain: &ConvexDomain,
    theta_grid_size: usize,
    deltas: &[f64],
) -> Result<CurvatureProfile> {
    if theta_grid_size == 0 || deltas.is_empty() {
        return invalid("curvature grids must be nonempty");
    }
    let limit = 0.5 * domain.r1();
    if let Some(bad) = deltas.iter().find(|d| !(**d > 0.0 && **d < limit)) {
        return invalid(format!("depth {bad} outside (0, r1/2)"));
    }
    let per_theta: Vec<(f64, f64)> = (0..theta_grid_size)
        .into_par_iter()
        .map(|i| {
            let angle = i as f64 * TAU / theta_grid_size as f64;
            let theta = Vec2::from_angle(angle);
            let h = domain.support(theta);
            let best = deltas
                .iter()
                .map(|&d| cap_unchecked(domain, theta, d, h).mu / d.sqrt())
                .fold(0.0, f64::max);
            (angle, best)
        })
        .collect();
    let sup = per_theta.iter().map(|p| p.1).fold(0.0, f64::max);
    Ok(CurvatureProfile { sup, per_theta })
}
