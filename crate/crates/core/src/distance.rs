//! Distinct-value statistics of a norm on lattice shells in dimension
//! `d >= 3`, and the counting inequality `card(A)^2 <= 3 m sigma`.

use crate::error::{invalid, LdlError, Result};
use rayon::prelude::*;
use serde::Serialize;

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum NormKind {
    Euclidean,
    Ellipsoid {
        axes: Vec<f64>,
    },
    #[serde(rename = "pnorm")]
    PNorm {
        p: f64,
    },
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct NormSpec {
    pub dim: usize,
    pub kind: NormKind,
}

impl NormSpec {
    pub fn new(dim: usize, kind: NormKind) -> Result<Self> {
        if dim < 2 {
            return invalid(format!("dimension must be at least 2, got {dim}"));
        }
        match &kind {
            NormKind::Euclidean => {}
            NormKind::Ellipsoid { axes } => {
                if axes.len() != dim {
                    return invalid(format!(
                        "ellipsoid needs {dim} semi-axes, got {}",
                        axes.len()
                    ));
                }
                if axes.iter().any(|a| !(*a > 0.0 && a.is_finite())) {
                    return invalid("ellipsoid semi-axes must be positive");
                }
            }
            NormKind::PNorm { p } => {
                if !(*p > 1.0 && *p <= 2.0) {
                    return invalid(format!("p must lie in (1, 2], got {p}"));
                }
            }
        }
        Ok(NormSpec { dim, kind })
    }

    /// Parses `euclidean`, `ellipsoid:a1,..,ad` or `pnorm:p`.
    pub fn parse(dim: usize, s: &str) -> Result<Self> {
        let bad = |why: &str| LdlError::Parse(format!("norm spec '{s}': {why}"));
        let nums = |rest: &str| -> Result<Vec<f64>> {
            rest.split(',')
                .map(|t| t.trim().parse::<f64>().map_err(|_| bad("expected numbers")))
                .collect()
        };
        let kind = match s.trim().split_once(':') {
            None if s.trim() == "euclidean" => NormKind::Euclidean,
            Some(("ellipsoid", rest)) => NormKind::Ellipsoid { axes: nums(rest)? },
            Some(("pnorm", rest)) => {
                let v = nums(rest)?;
                if v.len() != 1 {
                    return Err(bad("expected pnorm:p"));
                }
                NormKind::PNorm { p: v[0] }
            }
            _ => return Err(bad("expected euclidean, ellipsoid:a1,..,ad or pnorm:p")),
        };
        Self::new(dim, kind)
    }

    pub fn label(&self) -> String {
        match &self.kind {
            NormKind::Euclidean => "euclidean".into(),
            NormKind::Ellipsoid { axes } => {
                let a: Vec<String> = axes.iter().map(|x| x.to_string()).collect();
                format!("ellipsoid:{}", a.join(","))
            }
            NormKind::PNorm { p } => format!("pnorm:{p}"),
        }
    }

    pub fn rho(&self, k: &[i64]) -> f64 {
        match &self.kind {
            NormKind::Euclidean => (k.iter().map(|x| x * x).sum::<i64>() as f64).sqrt(),
            NormKind::Ellipsoid { axes } => k
                .iter()
                .zip(axes)
                .map(|(x, a)| (*x as f64 / a).powi(2))
                .sum::<f64>()
                .sqrt(),
            NormKind::PNorm { p } => k
                .iter()
                .map(|x| (x.abs() as f64).powf(*p))
                .sum::<f64>()
                .powf(1.0 / p),
        }
    }
}

/// Guard on the number of candidate points `(2R+1)^d`.
pub const CANDIDATE_LIMIT: f64 = 1e9;

fn enumerate(dim: usize, big_r: f64, lower_sq: f64) -> Result<Vec<Vec<i64>>> {
    if !(big_r > 0.0 && big_r.is_finite()) {
        return invalid(format!("R must be positive, got {big_r}"));
    }
    if dim < 2 {
        return invalid(format!("dimension must be at least 2, got {dim}"));
    }
    let candidates = (2.0 * big_r.floor() + 1.0).powi(dim as i32);
    if candidates > CANDIDATE_LIMIT {
        return Err(LdlError::Resource(format!(
            "{candidates:.3e} candidate points in dimension {dim} at R = {big_r}; the limit is {CANDIDATE_LIMIT:e}"
        )));
    }
    let top = big_r.floor() as i64;
    let r_sq = big_r * big_r;

    fn rec(
        k: &mut Vec<i64>,
        dim: usize,
        partial: i64,
        top: i64,
        r_sq: f64,
        lower_sq: f64,
        out: &mut Vec<Vec<i64>>,
    ) {
        let left = dim - k.len();
        if left == 0 {
            if partial as f64 >= lower_sq {
                out.push(k.clone());
            }
            return;
        }
        let room = r_sq - partial as f64;
        if ((partial + left as i64 * top * top) as f64) < lower_sq {
            return;
        }
        let bound = (room.max(0.0).sqrt().floor() as i64).min(top);
        for x in -bound..=bound {
            if (partial + x * x) as f64 > r_sq {
                continue;
            }
            k.push(x);
            rec(k, dim, partial + x * x, top, r_sq, lower_sq, out);
            k.pop();
        }
    }

    let chunks: Vec<Vec<Vec<i64>>> = (-top..=top)
        .into_par_iter()
        .map(|x0| {
            let mut out = Vec::new();
            if (x0 * x0) as f64 <= r_sq {
                let mut k = vec![x0];
                rec(&mut k, dim, x0 * x0, top, r_sq, lower_sq, &mut out);
            }
            out
        })
        .collect();
    Ok(chunks.into_iter().flatten().collect())
}

/// Integer points with `R/2 <= |k| <= R`.
pub fn shell_points(dim: usize, big_r: f64) -> Result<Vec<Vec<i64>>> {
    enumerate(dim, big_r, big_r * big_r / 4.0)
}

/// Integer points with `0 < |k| <= R`.
pub fn ball_points(dim: usize, big_r: f64) -> Result<Vec<Vec<i64>>> {
    enumerate(dim, big_r, 1.0)
}

/// Largest number of values pairwise more than `eps` apart; `values` sorted.
pub fn m_eps(values: &[f64], eps: f64) -> usize {
    let mut count = 0;
    let mut last = f64::NEG_INFINITY;
    for &v in values {
        if count == 0 || v - last > eps {
            count += 1;
            last = v;
        }
    }
    count
}

/// `sum over k of card{l : |rho(l) - rho(k)| <= 2 eps}`; `values` sorted.
pub fn sigma_sum(values: &[f64], eps: f64) -> u64 {
    values
        .iter()
        .map(|&v| {
            let lo = values.partition_point(|x| *x < v - 2.0 * eps);
            let hi = values.partition_point(|x| *x <= v + 2.0 * eps);
            (hi - lo) as u64
        })
        .sum()
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DistanceSetStats {
    pub norm: String,
    pub dim: usize,
    #[serde(rename = "R")]
    pub big_r: f64,
    pub card_e: usize,
    pub eps: f64,
    pub m_eps: usize,
    /// Number of distinct values, `m_0`.
    pub distinct_values: usize,
    pub sigma: u64,
    /// `card(A)`.
    pub lhs_cs: f64,
    /// `sqrt(m_eps) sqrt(3 sigma)`.
    pub rhs_cs: f64,
    /// `distinct_values log R / R^2` for `d = 3`, `distinct_values / R^2` otherwise.
    pub diagnostic: f64,
}

/// Statistics of the shell `R/2 <= |k| <= R`; `eps` defaults to `1/(2R)`.
pub fn verify_cs_inequality(
    norm: &NormSpec,
    big_r: f64,
    eps: Option<f64>,
) -> Result<DistanceSetStats> {
    let eps = eps.unwrap_or(0.5 / big_r);
    if !(eps >= 0.0 && eps.is_finite()) {
        return invalid(format!("eps must be nonnegative, got {eps}"));
    }
    let pts = shell_points(norm.dim, big_r)?;
    let mut values: Vec<f64> = pts.par_iter().map(|k| norm.rho(k)).collect();
    values.sort_by(f64::total_cmp);
    let card = values.len();
    let m = m_eps(&values, eps);
    let sigma = sigma_sum(&values, eps);
    if (card as u128).pow(2) > 3 * m as u128 * sigma as u128 {
        return Err(LdlError::InternalConsistency(format!(
            "card(A)^2 = {} exceeds 3 m sigma = {}",
            (card as u128).pow(2),
            3 * m as u128 * sigma as u128
        )));
    }
    let distinct = m_eps(&values, 0.0);
    let r2 = big_r * big_r;
    Ok(DistanceSetStats {
        norm: norm.label(),
        dim: norm.dim,
        big_r,
        card_e: card,
        eps,
        m_eps: m,
        distinct_values: distinct,
        sigma,
        lhs_cs: card as f64,
        rhs_cs: (m as f64).sqrt() * (3.0 * sigma as f64).sqrt(),
        diagnostic: if norm.dim == 3 {
            distinct as f64 * big_r.ln() / r2
        } else {
            distinct as f64 / r2
        },
    })
}
