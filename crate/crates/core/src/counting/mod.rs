//! Exact lattice counts in dilates, the lattice rest, and the mean-square
//! discrepancy over a radius window.

mod rotation;
pub mod rowscan;

pub use rotation::{rotation_study, RotationRow, RotationStudy};

use crate::error::{invalid, LdlError, Result};
use crate::geometry::ConvexDomain;
use crate::numeric::{log_log_slope, pairwise_sum, LatticePoint};
use rayon::prelude::*;
use rowscan::{Bound, Scanner};
use serde::Serialize;

/// Largest dilation factor (times the circumradius) accepted by the row
/// scanner; beyond this the row loop alone is too long to be useful.
const MAX_ROWS: f64 = 2e8;

fn scanner(domain: &ConvexDomain) -> Scanner<impl Fn(crate::numeric::Vec2) -> f64 + Sync + '_> {
    Scanner::new(move |v| domain.gauge(v), domain.extent())
}

fn check_t(domain: &ConvexDomain, t: f64) -> Result<()> {
    if !(t > 0.0) || !t.is_finite() {
        return invalid(format!("dilation t must be positive, got {t}"));
    }
    if t * domain.r2() > MAX_ROWS {
        return Err(LdlError::Resource(format!(
            "dilation {t} needs more than {MAX_ROWS} rows"
        )));
    }
    Ok(())
}

/// `card{k in Z^2 : rho(k) <= t}`.
pub fn count_lattice_points(domain: &ConvexDomain, t: f64) -> Result<u64> {
    check_t(domain, t)?;
    Ok(scanner(domain).count(Bound::Closed(t)))
}

/// `N(t) - t^2 area`.
pub fn lattice_error(domain: &ConvexDomain, t: f64) -> Result<f64> {
    let n = count_lattice_points(domain, t)?;
    Ok(n as f64 - t * t * domain.area())
}

/// Lattice points with `lo < rho(k) <= hi`, in row order.
pub fn lattice_shell(domain: &ConvexDomain, lo: f64, hi: f64) -> Result<Vec<LatticePoint>> {
    check_t(domain, hi)?;
    Ok(scanner(domain).shell(Bound::Closed(lo), Bound::Closed(hi)))
}

/// A jump of the counting function.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CriticalRadius {
    pub t: f64,
    /// Number of lattice points with gauge exactly `t` (after grouping).
    pub multiplicity: u64,
    /// `N(s)` for `s` in `[t, next critical radius)`.
    pub count: u64,
}

/// Step data of `N(t)` on `[R, R+h]`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DiscrepancyProfile {
    pub domain: String,
    #[serde(rename = "R")]
    pub big_r: f64,
    pub h: f64,
    pub area: f64,
    /// `N(R)`.
    pub anchor: u64,
    pub critical_radii: Vec<CriticalRadius>,
    /// Ungrouped gauge values of the window's lattice points, sorted.
    #[serde(skip)]
    pub raw_values: Vec<f64>,
}

fn check_window(big_r: f64, h: f64) -> Result<()> {
    if !(big_r > 0.0 && big_r.is_finite()) {
        return invalid(format!("R must be positive, got {big_r}"));
    }
    if !(h > 0.0 && h.is_finite()) {
        return invalid(format!("h must be positive, got {h}"));
    }
    Ok(())
}

/// Critical radii in `(R, R+h]` with cumulative counts anchored at `N(R)`.
pub fn critical_radii(domain: &ConvexDomain, big_r: f64, h: f64) -> Result<DiscrepancyProfile> {
    check_window(big_r, h)?;
    let anchor = count_lattice_points(domain, big_r)?;
    let points = lattice_shell(domain, big_r, big_r + h)?;
    let mut valued: Vec<(f64, Option<i128>)> = points
        .par_iter()
        .map(|k| (domain.gauge(k.to_vec2()), domain.lattice_key(k.x, k.y)))
        .collect();
    valued.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)));
    let raw_values: Vec<f64> = valued.iter().map(|v| v.0).collect();

    let mut groups: Vec<(f64, u64)> = Vec::new();
    if valued.iter().all(|v| v.1.is_some()) {
        let mut keyed: Vec<(i128, f64)> = valued.iter().map(|v| (v.1.unwrap(), v.0)).collect();
        keyed.sort_by(|a, b| a.0.cmp(&b.0).then(a.1.total_cmp(&b.1)));
        let mut i = 0;
        while i < keyed.len() {
            let mut j = i;
            while j < keyed.len() && keyed[j].0 == keyed[i].0 {
                j += 1;
            }
            groups.push((keyed[i].1, (j - i) as u64));
            i = j;
        }
    } else {
        let mut i = 0;
        while i < raw_values.len() {
            let mut j = i + 1;
            while j < raw_values.len() && raw_values[j] - raw_values[j - 1] <= 1e-9 {
                j += 1;
            }
            groups.push((raw_values[i], (j - i) as u64));
            i = j;
        }
    }
    let mut count = anchor;
    let critical_radii = groups
        .into_iter()
        .map(|(t, m)| {
            count += m;
            CriticalRadius {
                t,
                multiplicity: m,
                count,
            }
        })
        .collect();
    Ok(DiscrepancyProfile {
        domain: domain.label().to_string(),
        big_r,
        h,
        area: domain.area(),
        anchor,
        critical_radii,
        raw_values,
    })
}

/// `integral_0^w (p + q s + r s^2)^2 ds`.
fn quadratic_square_integral(p: f64, q: f64, r: f64, w: f64) -> f64 {
    let w2 = w * w;
    let w3 = w2 * w;
    p * p * w
        + p * q * w2
        + (q * q + 2.0 * p * r) * w3 / 3.0
        + q * r * w2 * w2 / 2.0
        + r * r * w3 * w2 / 5.0
}

impl DiscrepancyProfile {
    /// Pieces `(a, b, N)` on which `N(t)` is constant.
    pub fn pieces(&self) -> Vec<(f64, f64, u64)> {
        let end = self.big_r + self.h;
        let mut out = Vec::with_capacity(self.critical_radii.len() + 1);
        let mut a = self.big_r;
        let mut n = self.anchor;
        for c in &self.critical_radii {
            let t = c.t.clamp(self.big_r, end);
            out.push((a, t, n));
            a = t;
            n = c.count;
        }
        out.push((a, end, n));
        out
    }

    /// `integral (N - A t^2)^2 dt` over the window, piece by piece in a
    /// form expanded around each piece's left end.
    pub fn integral_e2(&self) -> f64 {
        let area = self.area;
        let parts: Vec<f64> = self
            .pieces()
            .iter()
            .map(|&(a, b, n)| {
                let p = n as f64 - area * a * a;
                quadratic_square_integral(p, -2.0 * area * a, -area, b - a)
            })
            .collect();
        pairwise_sum(&parts)
    }

    pub fn g_exact(&self) -> f64 {
        (self.integral_e2().max(0.0) / self.h).sqrt()
    }

    /// `N(t)` for `t` in the window.
    pub fn count_at(&self, t: f64) -> u64 {
        self.anchor + self.raw_values.partition_point(|v| *v <= t) as u64
    }

    /// Composite midpoint rule for the mean of `E(t)^2`.
    pub fn g_sampled(&self, n_samples: usize) -> f64 {
        let step = self.h / n_samples as f64;
        let sq: Vec<f64> = (0..n_samples)
            .map(|i| {
                let t = self.big_r + (i as f64 + 0.5) * step;
                let e = self.count_at(t) as f64 - self.area * t * t;
                e * e
            })
            .collect();
        (pairwise_sum(&sq) / n_samples as f64).sqrt()
    }

    /// Exact `sup |E(t)|` over the window; `E` is monotone on each piece.
    pub fn max_abs_error(&self) -> f64 {
        self.pieces()
            .iter()
            .map(|&(a, b, n)| {
                let n = n as f64;
                (n - self.area * a * a)
                    .abs()
                    .max((n - self.area * b * b).abs())
            })
            .fold(0.0, f64::max)
    }
}

pub fn mean_square_discrepancy_exact(domain: &ConvexDomain, big_r: f64, h: f64) -> Result<f64> {
    Ok(critical_radii(domain, big_r, h)?.g_exact())
}

pub fn mean_square_discrepancy_sampled(
    domain: &ConvexDomain,
    big_r: f64,
    h: f64,
    n_samples: usize,
) -> Result<f64> {
    if n_samples < 2 {
        return invalid("at least two samples are required");
    }
    Ok(critical_radii(domain, big_r, h)?.g_sampled(n_samples))
}

/// How the window length follows `R` in a scaling study.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub enum HRule {
    EqualR,
    SqrtR,
    LogR,
    Const(f64),
}

impl HRule {
    pub fn h(self, big_r: f64) -> f64 {
        match self {
            HRule::EqualR => big_r,
            HRule::SqrtR => big_r.sqrt(),
            HRule::LogR => big_r.ln(),
            HRule::Const(c) => c,
        }
    }
}

impl std::str::FromStr for HRule {
    type Err = LdlError;

    /// `R`, `sqrt`, `log` or `const:<c>`.
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "R" | "r" => Ok(HRule::EqualR),
            "sqrt" | "sqrtR" => Ok(HRule::SqrtR),
            "log" | "logR" => Ok(HRule::LogR),
            _ => match s.strip_prefix("const:").map(str::parse::<f64>) {
                Some(Ok(c)) if c > 0.0 => Ok(HRule::Const(c)),
                _ => Err(LdlError::Parse(format!("unknown h rule '{s}'"))),
            },
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ScalingRow {
    pub domain: String,
    #[serde(rename = "R")]
    pub big_r: f64,
    pub h: f64,
    #[serde(rename = "G")]
    pub g: f64,
    #[serde(rename = "G_over_sqrtR")]
    pub g_over_sqrt_r: f64,
    #[serde(rename = "G_over_sqrtRlogR")]
    pub g_over_sqrt_r_log_r: f64,
    pub max_abs_e: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ScalingStudy {
    pub rows: Vec<ScalingRow>,
    /// Least-squares slope of `log G` against `log R`; absent for fewer
    /// than two rows.
    pub slope: Option<f64>,
}

pub fn scaling_study(domain: &ConvexDomain, r_list: &[f64], rule: HRule) -> Result<ScalingStudy> {
    if r_list.windows(2).any(|w| w[1] <= w[0]) {
        return invalid("R list must be strictly increasing");
    }
    let mut rows = Vec::with_capacity(r_list.len());
    for &big_r in r_list {
        let h = rule.h(big_r);
        let p = critical_radii(domain, big_r, h)?;
        let g = p.g_exact();
        rows.push(ScalingRow {
            domain: domain.label().to_string(),
            big_r,
            h,
            g,
            g_over_sqrt_r: g / big_r.sqrt(),
            g_over_sqrt_r_log_r: g / (big_r * big_r.ln()).sqrt(),
            max_abs_e: p.max_abs_error(),
        });
    }
    let xs: Vec<f64> = rows.iter().map(|r| r.big_r).collect();
    let ys: Vec<f64> = rows.iter().map(|r| r.g).collect();
    let slope = if rows.len() >= 2 {
        log_log_slope(&xs, &ys)
    } else {
        None
    };
    Ok(ScalingStudy { rows, slope })
}
