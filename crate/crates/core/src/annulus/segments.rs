//! Hull sectors of an annulus lattice set and the maximal lattice segments
//! anchored at hull vertices that cover it.

use super::hull::hull_extreme_points;
use super::{enumerate_annulus, IntervalKind, Sign};
use crate::error::{LdlError, Result};
use crate::geometry::{cap, ConvexDomain};
use crate::numeric::{adaptive_simpson, gcd, golden_section_min, LatticePoint, Vec2};
use serde::Serialize;
use std::collections::{BTreeMap, BTreeSet};
use std::f64::consts::TAU;

/// Which end of its sector a segment is anchored at.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Side {
    /// Anchored at `E_j`.
    #[serde(rename = "-")]
    Minus,
    /// Anchored at `E_{j+1}`.
    #[serde(rename = "+")]
    Plus,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Segment {
    pub sector: usize,
    pub side: Side,
    pub anchor: LatticePoint,
    /// Primitive lattice direction from the anchor.
    pub direction: (i64, i64),
    /// Lattice points from the anchor outwards.
    pub lattice_points: Vec<LatticePoint>,
    /// Spacing of consecutive lattice points.
    pub d: f64,
    pub card: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Sector {
    pub start: LatticePoint,
    pub end: LatticePoint,
    /// Annulus lattice points in the closed triangle `(0, E_j, E_{j+1})`.
    pub points: usize,
    pub n_minus: usize,
    pub n_plus: usize,
    /// `|E_{j+1} - E_j|`.
    pub length: f64,
    /// Turn of the outer normal of the polar body across the sector.
    pub theta: f64,
    /// Area of the annulus inside the triangle.
    pub area: f64,
    /// `(n_minus + n_plus) / (1 + area + length^(2/3) theta^(1/3))`.
    pub segment_ratio: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SegmentDecomposition {
    pub domain: String,
    pub r: f64,
    pub h: f64,
    pub annulus_points: usize,
    pub extreme_points: Vec<LatticePoint>,
    pub sectors: Vec<Sector>,
    pub segments: Vec<Segment>,
    /// Number of geometrically distinct segments over all sectors.
    pub distinct_segments: usize,
    /// Annulus points verified to lie on a segment (or to be hull vertices).
    pub covered_points: usize,
}

fn cross_i(a: (i64, i64), b: (i64, i64)) -> i128 {
    a.0 as i128 * b.1 as i128 - a.1 as i128 * b.0 as i128
}

fn sub(a: LatticePoint, b: LatticePoint) -> (i64, i64) {
    (a.x - b.x, a.y - b.y)
}

/// Whether the closed segment `[a, b]` lies in `{r <= rho_star <= r + 1/h}`,
/// given that `a` does.
fn segment_in_annulus(domain: &ConvexDomain, a: Vec2, b: Vec2, r: f64, h: f64) -> bool {
    if domain.support(b) > r + 1.0 / h || domain.support(b) < r {
        return false;
    }
    let f = |s: f64| domain.support(a + (b - a) * s);
    let (_, m) = golden_section_min(f, 0.0, 1.0, 1e-12);
    m >= r
}

/// Covers the one-sided annulus `r <= rho_star <= r + 1/h` by maximal
/// lattice segments anchored at the extreme points of its hull, and checks
/// that every annulus lattice point is covered.
pub fn segment_decomposition(
    domain: &ConvexDomain,
    r: f64,
    h: f64,
) -> Result<SegmentDecomposition> {
    let set = enumerate_annulus(domain, r, h, Sign::Plus, IntervalKind::Onesided)?;
    if set.len() < 3 {
        return Err(LdlError::Precondition(format!(
            "annulus at r = {r}, h = {h} has fewer than 3 lattice points"
        )));
    }
    let ext = hull_extreme_points(&set.points);
    let j_count = ext.len();
    let origin_inside = j_count >= 3
        && (0..j_count).all(|j| {
            let (a, b) = (ext[j], ext[(j + 1) % j_count]);
            cross_i(sub(b, a), (-a.x, -a.y)) > 0
        });
    if !origin_inside {
        return Err(LdlError::Precondition(
            "origin is not interior to the hull of the annulus".into(),
        ));
    }

    let mut sectors = Vec::with_capacity(j_count);
    let mut segments = Vec::new();
    let mut distinct: BTreeSet<(LatticePoint, LatticePoint)> = BTreeSet::new();
    let mut covered: BTreeSet<LatticePoint> = ext.iter().copied().collect();
    let top = r + 1.0 / h;

    for j in 0..j_count {
        let (ea, eb) = (ext[j], ext[(j + 1) % j_count]);
        let edge = sub(eb, ea);
        let in_sector = |p: LatticePoint| {
            cross_i((ea.x, ea.y), (p.x, p.y)) >= 0
                && cross_i((p.x, p.y), (eb.x, eb.y)) >= 0
                && cross_i(edge, sub(p, ea)) >= 0
        };
        let members: Vec<LatticePoint> = set
            .points
            .iter()
            .copied()
            .filter(|p| in_sector(*p))
            .collect();

        let mut reach: [BTreeMap<(i64, i64), i64>; 2] = [BTreeMap::new(), BTreeMap::new()];
        for (slot, anchor) in [ea, eb].into_iter().enumerate() {
            for &p in &members {
                if p == anchor {
                    continue;
                }
                let dv = sub(p, anchor);
                let g = gcd(dv.0, dv.1);
                let v = (dv.0 / g, dv.1 / g);
                if reach[slot].contains_key(&v) {
                    continue;
                }
                let mut t = 0i64;
                loop {
                    let cur = LatticePoint::new(anchor.x + t * v.0, anchor.y + t * v.1);
                    let next = LatticePoint::new(cur.x + v.0, cur.y + v.1);
                    if !in_sector(next)
                        || !segment_in_annulus(domain, cur.to_vec2(), next.to_vec2(), r, h)
                    {
                        break;
                    }
                    t += 1;
                }
                reach[slot].insert(v, t);
            }
        }

        for p in &members {
            let hit = [ea, eb].iter().enumerate().any(|(slot, anchor)| {
                if p == anchor {
                    return true;
                }
                let dv = sub(*p, *anchor);
                let g = gcd(dv.0, dv.1);
                reach[slot]
                    .get(&(dv.0 / g, dv.1 / g))
                    .is_some_and(|t| g <= *t)
            });
            if !hit {
                return Err(LdlError::InternalConsistency(format!(
                    "annulus point ({}, {}) in sector {j} lies on no anchored segment",
                    p.x, p.y
                )));
            }
            covered.insert(*p);
        }

        let mut counts = [0usize; 2];
        for (slot, (anchor, side)) in [(ea, Side::Minus), (eb, Side::Plus)]
            .into_iter()
            .enumerate()
        {
            let mut found: Vec<Segment> = reach[slot]
                .iter()
                .filter(|(_, t)| **t >= 1)
                .map(|(&v, &t)| {
                    let pts: Vec<LatticePoint> = (0..=t)
                        .map(|s| LatticePoint::new(anchor.x + s * v.0, anchor.y + s * v.1))
                        .collect();
                    Segment {
                        sector: j,
                        side,
                        anchor,
                        direction: v,
                        d: (v.0 as f64).hypot(v.1 as f64),
                        card: pts.len(),
                        lattice_points: pts,
                    }
                })
                .collect();
            // Clockwise about E_j, counterclockwise about E_{j+1}.
            found.sort_by(|a, b| {
                let (pa, pb) = (
                    Vec2::new(a.direction.0 as f64, a.direction.1 as f64).angle(),
                    Vec2::new(b.direction.0 as f64, b.direction.1 as f64).angle(),
                );
                match side {
                    Side::Minus => pb.total_cmp(&pa),
                    Side::Plus => pa.total_cmp(&pb),
                }
            });
            counts[slot] = found.len();
            for s in &found {
                let (a, b) = (s.lattice_points[0], *s.lattice_points.last().unwrap());
                distinct.insert(if a <= b { (a, b) } else { (b, a) });
            }
            segments.extend(found);
        }

        let (va, vb) = (ea.to_vec2(), eb.to_vec2());
        let na = domain.support_point_raw(va.normalized()).angle();
        let nb = domain.support_point_raw(vb.normalized()).angle();
        let theta = (nb - na).rem_euclid(TAU);
        let length = (vb - va).norm();
        let area = sector_area(domain, va, vb, r, top);
        sectors.push(Sector {
            start: ea,
            end: eb,
            points: members.len(),
            n_minus: counts[0],
            n_plus: counts[1],
            length,
            theta,
            area,
            segment_ratio: (counts[0] + counts[1]) as f64
                / (1.0 + area + length.powf(2.0 / 3.0) * theta.cbrt()),
        });
    }

    if covered.len() != set.len() {
        return Err(LdlError::InternalConsistency(format!(
            "{} of {} annulus points were covered",
            covered.len(),
            set.len()
        )));
    }
    Ok(SegmentDecomposition {
        domain: domain.label().to_string(),
        r,
        h,
        annulus_points: set.len(),
        extreme_points: ext,
        sectors,
        segments,
        distinct_segments: distinct.len(),
        covered_points: covered.len(),
    })
}

/// Area of `{r <= rho_star <= top}` inside the triangle `(0, a, b)`.
fn sector_area(domain: &ConvexDomain, a: Vec2, b: Vec2, r: f64, top: f64) -> f64 {
    let phi0 = a.angle();
    let span = (b.angle() - phi0).rem_euclid(TAU);
    let d = b - a;
    let f = |phi: f64| {
        let u = Vec2::from_angle(phi);
        let g = domain.support(u);
        let edge = d.cross(a) / d.cross(u);
        let outer = (top / g).min(edge);
        let inner = (r / g).min(edge);
        0.5 * (outer * outer - inner * inner)
    };
    let scale = top * top * span.max(1e-300);
    adaptive_simpson(&f, phi0, phi0 + span, 1e-11 * scale)
}

/// The centred run of a segment's lattice points whose ninefold dilate
/// fits inside the segment; `None` if it would have fewer than 10 points.
pub fn central_subsegment(points: &[LatticePoint]) -> Option<Vec<LatticePoint>> {
    let card = points.len();
    if card < 2 {
        return None;
    }
    let m = (card - 1) / 9 + 1;
    if m < 10 {
        return None;
    }
    let start = (card - m) / 2;
    Some(points[start..start + m].to_vec())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum LemmaBranch {
    /// `card <= T`: bound `(Rr/(h^2 d^2))^(1/4)`.
    Small,
    /// `card > T`: bound `(r card/(h d^2))^(1/3)`.
    Large,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Lemma61 {
    pub card: usize,
    pub d: f64,
    /// `R^(3/4) d^(1/2) h^(-1/2) r^(-1/4)`.
    pub t_param: f64,
    pub branch: LemmaBranch,
    /// `sqrt(Rr) sum mu(l/|l|, 1/(R|l|))` over the segment.
    pub lhs: f64,
    pub rhs: f64,
    pub ratio: f64,
}

/// The threshold `R^(3/4) d^(1/2) h^(-1/2) r^(-1/4)`.
pub fn critical_parameter(big_r: f64, d: f64, h: f64, r: f64) -> f64 {
    big_r.powf(0.75) * d.sqrt() / h.sqrt() / r.powf(0.25)
}

/// Right side of the segment bound, selected by the threshold.
pub fn lemma61_rhs(big_r: f64, r: f64, h: f64, d: f64, card: usize) -> (f64, LemmaBranch, f64) {
    let t = critical_parameter(big_r, d, h, r);
    if card as f64 <= t {
        (
            (big_r * r / (h * h * d * d)).powf(0.25),
            LemmaBranch::Small,
            t,
        )
    } else {
        (
            (r * card as f64 / (h * d * d)).cbrt(),
            LemmaBranch::Large,
            t,
        )
    }
}

/// Evaluates both sides of the segment bound for the equispaced collinear
/// lattice points `segment`, after checking the hypotheses.
pub fn lemma61_check(
    domain: &ConvexDomain,
    segment: &[LatticePoint],
    big_r: f64,
    r: f64,
    h: f64,
) -> Result<Lemma61> {
    let card = segment.len();
    if card < 10 {
        return Err(LdlError::Precondition(format!(
            "card(J) >= 10 fails: card(J) = {card}"
        )));
    }
    if h < big_r.sqrt() {
        return Err(LdlError::Precondition(format!(
            "h >= sqrt(R) fails: h = {h}, R = {big_r}"
        )));
    }
    if !(10.0 <= r && r <= big_r) {
        return Err(LdlError::Precondition(format!(
            "10 <= r <= R fails: r = {r}, R = {big_r}"
        )));
    }
    let (first, last) = (segment[0].to_vec2(), segment[card - 1].to_vec2());
    let step = segment[1].to_vec2() - first;
    let d = step.norm();
    if segment
        .windows(2)
        .any(|w| w[1].to_vec2() - w[0].to_vec2() != step)
    {
        return Err(LdlError::InvalidArgument(
            "segment points are not equispaced and collinear".into(),
        ));
    }
    let mid = (first + last) * 0.5;
    let half = (last - first) * 4.5;
    let (a, b) = (mid - half, mid + half);
    let inside = domain.support(a) >= r
        && domain.support(a) <= r + 1.0 / h
        && segment_in_annulus(domain, a, b, r, h);
    if !inside {
        return Err(LdlError::Precondition("9J inside the annulus fails".into()));
    }
    let mut terms = Vec::with_capacity(card);
    for l in segment {
        let v = l.to_vec2();
        let n = v.norm();
        terms.push(cap(domain, v * (1.0 / n), 1.0 / (big_r * n))?.mu);
    }
    let lhs = (big_r * r).sqrt() * crate::numeric::pairwise_sum(&terms);
    let (rhs, branch, t_param) = lemma61_rhs(big_r, r, h, d, card);
    Ok(Lemma61 {
        card,
        d,
        t_param,
        branch,
        lhs,
        rhs,
        ratio: lhs / rhs,
    })
}
