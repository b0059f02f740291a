//! Lattice points in thin annuli of the polar functional, the weighted cap
//! sums built on them, and the hull/segment combinatorics of those sets.

pub mod hull;
mod kernel;
mod segments;
mod sums;

pub use hull::{chain_vertex_bound_check, hull_extreme_points, ChainBound};
pub use kernel::{bilinear_k, bilinear_k_direct, bilinear_timing, Bilinear, ExpSumKernel};
pub(crate) use kernel::{bilinear_setup_points, windowed_sum};
pub use segments::{
    central_subsegment, critical_parameter, lemma61_check, lemma61_rhs, segment_decomposition,
    Lemma61, LemmaBranch, Sector, Segment, SegmentDecomposition, Side,
};
pub use sums::{
    frakb_n, frakb_n_direct, gamma_n, prop24_rhs, Prop24, Prop24Term, SumConfig, SumValue, Variant,
};

use crate::counting::rowscan::{Bound, Scanner};
use crate::error::{invalid, LdlError, Result};
use crate::geometry::{cap, ConvexDomain};
use crate::numeric::{pairwise_sum, LatticePoint, Vec2};
use rayon::prelude::*;
use serde::Serialize;

/// Which of `rho_star(k)` and `rho_star(-k)` defines the annulus.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Sign {
    #[serde(rename = "+")]
    Plus,
    #[serde(rename = "-")]
    Minus,
}

impl Sign {
    pub fn factor(self) -> f64 {
        match self {
            Sign::Plus => 1.0,
            Sign::Minus => -1.0,
        }
    }
}

impl std::str::FromStr for Sign {
    type Err = LdlError;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "+" | "plus" => Ok(Sign::Plus),
            "-" | "minus" => Ok(Sign::Minus),
            _ => Err(LdlError::Parse(format!("sign must be + or -, got '{s}'"))),
        }
    }
}

/// `Centered`: `|rho_star - r| <= 1/h`. `Onesided`: `r <= rho_star <= r + 1/h`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum IntervalKind {
    Centered,
    Onesided,
}

impl std::str::FromStr for IntervalKind {
    type Err = LdlError;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "centered" => Ok(IntervalKind::Centered),
            "onesided" => Ok(IntervalKind::Onesided),
            _ => Err(LdlError::Parse(format!(
                "interval must be centered or onesided, got '{s}'"
            ))),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AnnulusLatticeSet {
    pub domain: String,
    pub r: f64,
    pub h: f64,
    pub sign: Sign,
    pub interval_kind: IntervalKind,
    /// Sorted by polar angle, then by `rho_star`.
    pub points: Vec<LatticePoint>,
    pub rho_star_values: Vec<f64>,
}

impl AnnulusLatticeSet {
    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }
}

/// The thresholds `(excluded below, admitted up to)` of an annulus.
pub(crate) fn annulus_bounds(r: f64, h: f64, kind: IntervalKind) -> (Bound, Bound) {
    let outer = Bound::Closed(r + 1.0 / h);
    let inner = match kind {
        IntervalKind::Centered => Bound::Open(r - 1.0 / h),
        IntervalKind::Onesided => Bound::Open(r),
    };
    (inner, outer)
}

/// Extents of the unit sublevel set of `xi -> rho_star(sign xi)`.
pub(crate) fn polar_extent(domain: &ConvexDomain, sign: Sign) -> [f64; 4] {
    let e = domain.polar_extent();
    match sign {
        Sign::Plus => e,
        Sign::Minus => [e[1], e[0], e[3], e[2]],
    }
}

pub fn enumerate_annulus(
    domain: &ConvexDomain,
    r: f64,
    h: f64,
    sign: Sign,
    kind: IntervalKind,
) -> Result<AnnulusLatticeSet> {
    if !(r > 0.0 && r.is_finite()) {
        return invalid(format!("annulus radius must be positive, got {r}"));
    }
    if !(h >= 1.0 && h.is_finite()) {
        return invalid(format!("annulus parameter h must be at least 1, got {h}"));
    }
    if (r + 1.0 / h) * domain.polar_extent().iter().fold(0.0f64, |a, b| a.max(*b)) > 1e8 {
        return Err(LdlError::Resource(format!(
            "annulus at r = {r} is too large to scan"
        )));
    }
    let s = sign.factor();
    let f = move |v: Vec2| domain.support(v * s);
    let scanner = Scanner::new(f, polar_extent(domain, sign));
    let (inner, outer) = annulus_bounds(r, h, kind);
    let raw = scanner.shell(inner, outer);
    let mut keyed: Vec<(f64, f64, LatticePoint)> = raw
        .par_iter()
        .map(|k| {
            let v = k.to_vec2();
            (v.angle(), f(v), *k)
        })
        .collect();
    keyed.sort_by(|a, b| {
        a.0.total_cmp(&b.0)
            .then(a.1.total_cmp(&b.1))
            .then(a.2.cmp(&b.2))
    });
    Ok(AnnulusLatticeSet {
        domain: domain.label().to_string(),
        r,
        h,
        sign,
        interval_kind: kind,
        points: keyed.iter().map(|k| k.2).collect(),
        rho_star_values: keyed.iter().map(|k| k.1).collect(),
    })
}

/// Number of lattice points in the centered annulus.
pub fn s_count(domain: &ConvexDomain, r: f64, h: f64, sign: Sign) -> Result<usize> {
    Ok(enumerate_annulus(domain, r, h, sign, IntervalKind::Centered)?.len())
}

/// `sum over the centered annulus of mu(l/|l|, delta) / sqrt(delta)`.
pub fn weighted_s(domain: &ConvexDomain, r: f64, delta: f64, h: f64, sign: Sign) -> Result<f64> {
    let set = enumerate_annulus(domain, r, h, sign, IntervalKind::Centered)?;
    weighted_sum_over(domain, &set.points, delta)
}

pub(crate) fn weighted_sum_over(
    domain: &ConvexDomain,
    points: &[LatticePoint],
    delta: f64,
) -> Result<f64> {
    let terms = points
        .par_iter()
        .map(|k| Ok(cap(domain, k.to_vec2().normalized(), delta)?.mu / delta.sqrt()))
        .collect::<Result<Vec<f64>>>()?;
    Ok(pairwise_sum(&terms))
}

/// `S(r,h) / (r (1/h + log(2+r)^(-1-eps/2)))`.
pub fn prop32_ratio(domain: &ConvexDomain, r: f64, h: f64, eps: f64) -> Result<f64> {
    let s = s_count(domain, r, h, Sign::Plus)? as f64;
    Ok(s / (r * (1.0 / h + (2.0 + r).ln().powf(-1.0 - eps / 2.0))))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Prop33 {
    pub r: f64,
    #[serde(rename = "R")]
    pub big_r: f64,
    pub h: f64,
    /// `S(r, 1/(Rr), h)`.
    pub weighted_s: f64,
    /// `weighted_s / r^(17/18)`.
    pub ratio: f64,
    /// Whether `10 <= r <= R` and `sqrt(R) <= h <= R` hold.
    pub hypotheses_hold: bool,
}

/// Normalized weighted sum at depth `1/(Rr)`. Since `1/sqrt(delta)` is
/// already `sqrt(Rr)`, the weighted sum itself is the quantity bounded by
/// `r^(17/18)`.
pub fn prop33_ratio(domain: &ConvexDomain, r: f64, big_r: f64, h: f64) -> Result<Prop33> {
    let ws = weighted_s(domain, r, 1.0 / (big_r * r), h, Sign::Plus)?;
    Ok(Prop33 {
        r,
        big_r,
        h,
        weighted_s: ws,
        ratio: ws / r.powf(17.0 / 18.0),
        hypotheses_hold: (10.0..=big_r).contains(&r) && big_r.sqrt() <= h && h <= big_r,
    })
}
