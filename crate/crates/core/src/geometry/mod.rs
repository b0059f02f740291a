//! Convex domains containing the origin: gauge (Minkowski functional),
//! support function, support points, caps and curvature diagnostics.
//!
//! Every domain is a [`ConvexDomain`]. The gauge `rho` and the support
//! function `rho_star` are dual to each other: wrapping a domain in
//! [`DomainKind::PolarDual`] swaps them, so the polar of any supported kind
//! is evaluated as cheaply and as accurately as the kind itself.

mod cap;
pub mod piecewise;
mod spec;

pub use cap::{
    cap, cap_mu_or_diameter, curvature_ratio_sup, default_delta_grid, Cap, CurvatureProfile,
};
pub use spec::{parse_domain, parse_domain_with_c0};

use crate::constructions::FareyDomainParams;
use crate::error::{invalid, Result};
use crate::numeric::{adaptive_simpson, golden_section_max, golden_section_min, Vec2};
use piecewise::PiecewiseBoundary;
use std::f64::consts::{PI, TAU};
use std::sync::Arc;

/// The shape variants the laboratory knows how to evaluate.
#[derive(Debug, Clone, PartialEq)]
pub enum DomainKind {
    Disk {
        radius: f64,
    },
    Ellipse {
        a: f64,
        b: f64,
    },
    /// `|x1/scale|^a1 + |x2/scale|^a2 <= 1`.
    Superellipse {
        a1: f64,
        a2: f64,
        scale: f64,
    },
    /// The inner domain rotated counterclockwise by `angle`.
    Rotated {
        inner: Arc<ConvexDomain>,
        angle: f64,
    },
    /// The polar set `{x : rho_star_inner(x) <= 1}`.
    PolarDual {
        inner: Arc<ConvexDomain>,
    },
    /// Farey polygon on a large circle with rounded corners and a
    /// stadium-like closure outside the sector `|y| <= x`.
    SmoothedFareyPolygon {
        params: FareyDomainParams,
        boundary: Arc<PiecewiseBoundary>,
    },
}

/// A convex domain with the origin in its interior.
#[derive(Debug, Clone, PartialEq)]
pub struct ConvexDomain {
    kind: DomainKind,
    label: String,
    r1: f64,
    r2: f64,
    area: f64,
    /// Support values in the directions +x, -x, +y, -y.
    extent: [f64; 4],
    /// Gauge values in the same directions (extents of the polar set).
    polar_extent: [f64; 4],
}

const AXES: [Vec2; 4] = [
    Vec2::new(1.0, 0.0),
    Vec2::new(-1.0, 0.0),
    Vec2::new(0.0, 1.0),
    Vec2::new(0.0, -1.0),
];

impl ConvexDomain {
    pub fn disk(radius: f64) -> Result<Self> {
        if !(radius > 0.0 && radius.is_finite()) {
            return invalid(format!("disk radius must be positive, got {radius}"));
        }
        Ok(Self::finish(
            DomainKind::Disk { radius },
            format!("disk:{radius}"),
        ))
    }

    pub fn ellipse(a: f64, b: f64) -> Result<Self> {
        if !(a > 0.0 && b > 0.0 && a.is_finite() && b.is_finite()) {
            return invalid(format!("ellipse axes must be positive, got {a},{b}"));
        }
        Ok(Self::finish(
            DomainKind::Ellipse { a, b },
            format!("ellipse:{a},{b}"),
        ))
    }

    pub fn superellipse(a1: f64, a2: f64, scale: f64) -> Result<Self> {
        // Exponents above 2 are accepted (their curvature vanishes on the
        // axes); the curvature-bounded family is (1,2].
        let ok = |p: f64| p > 1.0 && p.is_finite();
        if !(ok(a1) && ok(a2)) {
            return invalid(format!(
                "superellipse exponents must exceed 1, got {a1},{a2}"
            ));
        }
        if !(scale > 0.0 && scale.is_finite()) {
            return invalid(format!("superellipse scale must be positive, got {scale}"));
        }
        Ok(Self::finish(
            DomainKind::Superellipse { a1, a2, scale },
            format!("superellipse:{a1},{a2},{scale}"),
        ))
    }

    pub fn rotated(inner: ConvexDomain, angle: f64) -> Result<Self> {
        if !angle.is_finite() {
            return invalid("rotation angle must be finite");
        }
        let label = format!("rot:{}:{angle}", inner.label);
        Ok(Self::finish(
            DomainKind::Rotated {
                inner: Arc::new(inner),
                angle,
            },
            label,
        ))
    }

    pub fn polar_dual(inner: ConvexDomain) -> Self {
        let label = format!("polar:{}", inner.label);
        Self::finish(
            DomainKind::PolarDual {
                inner: Arc::new(inner),
            },
            label,
        )
    }

    /// The smoothed Farey polygon. Its label is that of the polar of the
    /// `farey:` spec, which names the dual domain used in the experiments.
    pub(crate) fn farey(params: FareyDomainParams, boundary: PiecewiseBoundary) -> Self {
        let label = format!("polar:farey:{},{},{}", params.big_r, params.eps, params.r);
        Self::finish(
            DomainKind::SmoothedFareyPolygon {
                params,
                boundary: Arc::new(boundary),
            },
            label,
        )
    }

    pub(crate) fn with_label(mut self, label: String) -> Self {
        self.label = label;
        self
    }

    fn finish(kind: DomainKind, label: String) -> Self {
        let mut d = ConvexDomain {
            kind,
            label,
            r1: 0.0,
            r2: 0.0,
            area: 0.0,
            extent: [0.0; 4],
            polar_extent: [0.0; 4],
        };
        for (i, e) in AXES.iter().enumerate() {
            d.extent[i] = d.support(*e);
            d.polar_extent[i] = d.gauge(*e);
        }
        let (r1, r2) = d.compute_radii();
        d.r1 = r1;
        d.r2 = r2;
        d.area = d.compute_area();
        d
    }

    pub fn kind(&self) -> &DomainKind {
        &self.kind
    }

    /// Domain-string label, e.g. `superellipse:1.5,1.5,1`.
    pub fn label(&self) -> &str {
        &self.label
    }

    /// Inradius of the largest origin-centred disk inside the domain.
    pub fn r1(&self) -> f64 {
        self.r1
    }

    /// Radius of the smallest origin-centred disk containing the domain.
    pub fn r2(&self) -> f64 {
        self.r2
    }

    pub fn area(&self) -> f64 {
        self.area
    }

    /// Support values in the directions +x, -x, +y, -y.
    pub fn extent(&self) -> [f64; 4] {
        self.extent
    }

    /// Extents of the polar set (gauge values on the axes).
    pub fn polar_extent(&self) -> [f64; 4] {
        self.polar_extent
    }

    /// The gauge `rho(x)`, validated.
    pub fn rho(&self, x: Vec2) -> Result<f64> {
        if !x.is_finite() {
            return invalid(format!("non-finite point ({}, {})", x.x, x.y));
        }
        Ok(self.gauge(x))
    }

    /// The support function `rho_star(xi) = sup{<x, xi> : x in domain}`,
    /// validated.
    pub fn rho_star(&self, xi: Vec2) -> Result<f64> {
        if !xi.is_finite() {
            return invalid(format!("non-finite point ({}, {})", xi.x, xi.y));
        }
        Ok(self.support(xi))
    }

    /// Unchecked gauge; the hot path for counting.
    pub fn gauge(&self, x: Vec2) -> f64 {
        if x.x == 0.0 && x.y == 0.0 {
            return 0.0;
        }
        match &self.kind {
            DomainKind::Disk { radius } => x.norm() / radius,
            DomainKind::Ellipse { a, b } => (x.x / a).hypot(x.y / b),
            DomainKind::Superellipse { a1, a2, scale } => superellipse_gauge(*a1, *a2, *scale, x),
            DomainKind::Rotated { inner, angle } => inner.gauge(x.rotate(-angle)),
            DomainKind::PolarDual { inner } => inner.support(x),
            DomainKind::SmoothedFareyPolygon { boundary, .. } => boundary.gauge(x),
        }
    }

    /// Unchecked support function.
    pub fn support(&self, xi: Vec2) -> f64 {
        if xi.x == 0.0 && xi.y == 0.0 {
            return 0.0;
        }
        match &self.kind {
            DomainKind::Disk { radius } => radius * xi.norm(),
            DomainKind::Ellipse { a, b } => (a * xi.x).hypot(b * xi.y),
            DomainKind::Superellipse { a1, a2, scale } => {
                superellipse_support(*a1, *a2, *scale, xi).0
            }
            DomainKind::Rotated { inner, angle } => inner.support(xi.rotate(-angle)),
            DomainKind::PolarDual { inner } => inner.gauge(xi),
            DomainKind::SmoothedFareyPolygon { boundary, .. } => boundary.support(xi),
        }
    }

    /// Boundary point with outward normal `theta` (a unit vector).
    pub fn support_point(&self, theta: Vec2) -> Result<Vec2> {
        if !theta.is_finite() || (theta.norm() - 1.0).abs() > 1e-12 {
            return invalid(format!(
                "direction ({}, {}) is not a unit vector",
                theta.x, theta.y
            ));
        }
        Ok(self.support_point_raw(theta))
    }

    pub(crate) fn support_point_raw(&self, theta: Vec2) -> Vec2 {
        match &self.kind {
            DomainKind::Disk { radius } => theta.normalized() * *radius,
            DomainKind::Ellipse { a, b } => {
                let v = Vec2::new(a * a * theta.x, b * b * theta.y);
                v * (1.0 / self.support(theta))
            }
            DomainKind::Superellipse { a1, a2, scale } => {
                superellipse_support(*a1, *a2, *scale, theta).1
            }
            DomainKind::Rotated { inner, angle } => {
                inner.support_point_raw(theta.rotate(-angle)).rotate(*angle)
            }
            // The maximizer of <x, theta> over the polar set is the gradient
            // of the inner gauge at theta.
            DomainKind::PolarDual { inner } => inner.gauge_gradient(theta),
            DomainKind::SmoothedFareyPolygon { boundary, .. } => boundary.support_point(theta),
        }
    }

    /// Gradient of the gauge at `x != 0`; equals the support point of the
    /// polar set in the direction of `x`.
    pub fn gauge_gradient(&self, x: Vec2) -> Vec2 {
        match &self.kind {
            DomainKind::Disk { radius } => x.normalized() * (1.0 / radius),
            DomainKind::Ellipse { a, b } => {
                let g = Vec2::new(x.x / (a * a), x.y / (b * b));
                g * (1.0 / self.gauge(x))
            }
            DomainKind::Superellipse { a1, a2, scale } => {
                let y = x * (1.0 / self.gauge(x));
                let nu = Vec2::new(
                    a1 * (y.x / scale).abs().powf(a1 - 1.0) * y.x.signum() / scale,
                    a2 * (y.y / scale).abs().powf(a2 - 1.0) * y.y.signum() / scale,
                );
                nu * (1.0 / nu.dot(y))
            }
            DomainKind::Rotated { inner, angle } => {
                inner.gauge_gradient(x.rotate(-angle)).rotate(*angle)
            }
            DomainKind::PolarDual { inner } => inner.support_point_raw(x.normalized()),
            DomainKind::SmoothedFareyPolygon { boundary, .. } => boundary.gauge_gradient(x),
        }
    }

    /// Boundary point on the ray at polar angle `phi`.
    pub fn boundary_point(&self, phi: f64) -> Vec2 {
        let u = Vec2::from_angle(phi);
        u * (1.0 / self.gauge(u))
    }

    /// Exact integer grouping key for lattice points with equal gauge, when
    /// the kind admits one (disks, and ellipses with integer semi-axes).
    pub fn lattice_key(&self, x: i64, y: i64) -> Option<i128> {
        match &self.kind {
            DomainKind::Disk { .. } => Some(x as i128 * x as i128 + y as i128 * y as i128),
            DomainKind::Ellipse { a, b }
                if a.fract() == 0.0 && b.fract() == 0.0 && *a < 1e6 && *b < 1e6 =>
            {
                let (a, b) = (*a as i128, *b as i128);
                Some(b * b * (x as i128 * x as i128) + a * a * (y as i128 * y as i128))
            }
            _ => None,
        }
    }

    fn compute_radii(&self) -> (f64, f64) {
        match &self.kind {
            DomainKind::Disk { radius } => (*radius, *radius),
            DomainKind::Ellipse { a, b } => (a.min(*b), a.max(*b)),
            DomainKind::Rotated { inner, .. } => (inner.r1, inner.r2),
            _ => {
                const N: usize = 2048;
                let step = TAU / N as f64;
                let h = |phi: f64| self.support(Vec2::from_angle(phi));
                let (mut imin, mut imax) = (0, 0);
                let (mut vmin, mut vmax) = (f64::INFINITY, f64::NEG_INFINITY);
                for i in 0..N {
                    let v = h(i as f64 * step);
                    if v < vmin {
                        vmin = v;
                        imin = i;
                    }
                    if v > vmax {
                        vmax = v;
                        imax = i;
                    }
                }
                let c = imin as f64 * step;
                let (_, r1) = golden_section_min(h, c - step, c + step, 1e-12);
                let c = imax as f64 * step;
                let (_, r2) = golden_section_max(h, c - step, c + step, 1e-12);
                (r1.min(vmin), r2.max(vmax))
            }
        }
    }

    fn compute_area(&self) -> f64 {
        match &self.kind {
            DomainKind::Disk { radius } => PI * radius * radius,
            DomainKind::Ellipse { a, b } => PI * a * b,
            DomainKind::Rotated { inner, .. } => inner.area,
            DomainKind::SmoothedFareyPolygon { boundary, .. } => boundary.area(),
            _ => polar_area(|u| self.gauge(u), self.r2 * self.r2 * PI),
        }
    }
}

/// `1/2 * integral of rho(u(phi))^-2 dphi`, split into pieces so that
/// kinks of the integrand stay local.
fn polar_area<F: Fn(Vec2) -> f64>(gauge: F, scale: f64) -> f64 {
    const PIECES: usize = 64;
    let f = |phi: f64| {
        let g = gauge(Vec2::from_angle(phi));
        0.5 / (g * g)
    };
    let w = TAU / PIECES as f64;
    let tol = 1e-14 * scale / PIECES as f64;
    let parts: Vec<f64> = (0..PIECES)
        .map(|i| adaptive_simpson(&f, i as f64 * w, (i + 1) as f64 * w, tol))
        .collect();
    crate::numeric::pairwise_sum(&parts)
}

fn superellipse_gauge(a1: f64, a2: f64, s: f64, x: Vec2) -> f64 {
    let u = x.x.abs() / s;
    let v = x.y.abs() / s;
    if a1 == a2 {
        return (u.powf(a1) + v.powf(a1)).powf(1.0 / a1);
    }
    if u == 0.0 {
        return v;
    }
    if v == 0.0 {
        return u;
    }
    // g(t) = (u/t)^a1 + (v/t)^a2 - 1 is convex and decreasing in t, so
    // Newton started left of the root climbs monotonically onto it.
    let g = |t: f64| (u / t).powf(a1) + (v / t).powf(a2) - 1.0;
    let mut lo = u.max(v);
    let mut hi = u + v;
    for _ in 0..8 {
        let mid = 0.5 * (lo + hi);
        if g(mid) > 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let mut t = lo;
    for _ in 0..60 {
        let pu = (u / t).powf(a1);
        let pv = (v / t).powf(a2);
        let val = pu + pv - 1.0;
        let der = -(a1 * pu + a2 * pv) / t;
        let next = t - val / der;
        if !(next > t) || next > hi {
            break;
        }
        if next - t <= 1e-16 * t {
            t = next;
            break;
        }
        t = next;
    }
    t
}

/// Support value and support point of the superellipse in direction `xi`.
fn superellipse_support(a1: f64, a2: f64, s: f64, xi: Vec2) -> (f64, Vec2) {
    let (p, q) = (xi.x.abs(), xi.y.abs());
    let (sx, sy) = (sign(xi.x), sign(xi.y));
    if q == 0.0 {
        return (s * p, Vec2::new(s * sx, 0.0));
    }
    if p == 0.0 {
        return (s * q, Vec2::new(0.0, s * sy));
    }
    if a1 == a2 {
        // Dual exponent norm; maximizer from Hoelder equality.
        let e = a1 / (a1 - 1.0);
        let norm = (p.powf(e) + q.powf(e)).powf(1.0 / e);
        let x = (p / norm).powf(e - 1.0);
        let y = (q / norm).powf(e - 1.0);
        return (s * norm, Vec2::new(s * sx * x, s * sy * y));
    }
    // Boundary point (w^(1/a1), (1-w)^(1/a2)); the objective is concave in
    // w, so bisect on the sign of its derivative.
    let (b1, b2) = (1.0 / a1, 1.0 / a2);
    let deriv = |w: f64| p * b1 * w.powf(b1 - 1.0) - q * b2 * (1.0 - w).powf(b2 - 1.0);
    let (mut lo, mut hi) = (0.0f64, 1.0f64);
    for _ in 0..80 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if deriv(mid) > 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let w = 0.5 * (lo + hi);
    let x = w.powf(b1);
    let y = (1.0 - w).powf(b2);
    (s * (p * x + q * y), Vec2::new(s * sx * x, s * sy * y))
}

fn sign(v: f64) -> f64 {
    if v < 0.0 {
        -1.0
    } else {
        1.0
    }
}

/// Support point by direct golden-section search over the boundary
/// parametrisation. Independent of the per-kind closed forms; used as a
/// cross-check.
pub fn support_point_by_search(domain: &ConvexDomain, theta: Vec2) -> Vec2 {
    let base = theta.angle();
    let (phi, _) = golden_section_max(
        |phi| domain.boundary_point(phi).dot(theta),
        base - 0.5 * PI,
        base + 0.5 * PI,
        1e-13,
    );
    domain.boundary_point(phi)
}

/// Support value by dense sampling plus golden-section refinement; the
/// oracle route for `rho_star`.
pub fn support_by_search(domain: &ConvexDomain, xi: Vec2) -> f64 {
    let r = xi.norm();
    if r == 0.0 {
        return 0.0;
    }
    let theta = xi * (1.0 / r);
    const N: usize = 720;
    let f = |phi: f64| domain.boundary_point(phi).dot(theta);
    let mut best = 0;
    let mut bv = f64::NEG_INFINITY;
    for i in 0..N {
        let v = f(i as f64 * TAU / N as f64);
        if v > bv {
            bv = v;
            best = i;
        }
    }
    let c = best as f64 * TAU / N as f64;
    let (_, v) = golden_section_max(f, c - TAU / N as f64, c + TAU / N as f64, 1e-13);
    r * v.max(bv)
}
