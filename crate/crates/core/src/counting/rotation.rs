use super::critical_radii;
use crate::error::{invalid, Result};
use crate::geometry::ConvexDomain;
use crate::numeric::quantile_sorted;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;
use std::f64::consts::PI;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RotationRow {
    pub sample: usize,
    pub theta: f64,
    #[serde(rename = "R")]
    pub big_r: f64,
    #[serde(rename = "G")]
    pub g: f64,
    pub normalized: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RotationStudy {
    pub rows: Vec<RotationRow>,
    /// Per `R`: the 0, 1/4, 1/2, 3/4 and 1 quantiles of the normalized
    /// values across rotations.
    pub quantiles: Vec<(f64, [f64; 5])>,
}

/// Mean-square discrepancy `G(R, 1)` of randomly rotated copies of
/// `domain`, normalized by `sqrt(R) (log R)^(1+eps)`.
pub fn rotation_study(
    domain: &ConvexDomain,
    samples: usize,
    r_list: &[f64],
    seed: u64,
    eps: f64,
) -> Result<RotationStudy> {
    if samples == 0 || r_list.is_empty() {
        return invalid("rotation study needs at least one sample and one R");
    }
    if r_list.iter().any(|r| !(*r > 1.0)) {
        return invalid("rotation study needs R > 1");
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let thetas: Vec<f64> = (0..samples).map(|_| rng.gen_range(-PI..=PI)).collect();
    let per_sample: Vec<Vec<RotationRow>> = thetas
        .par_iter()
        .enumerate()
        .map(|(i, &theta)| {
            let rotated = ConvexDomain::rotated(domain.clone(), theta)?;
            r_list
                .iter()
                .map(|&big_r| {
                    let g = critical_radii(&rotated, big_r, 1.0)?.g_exact();
                    Ok(RotationRow {
                        sample: i,
                        theta,
                        big_r,
                        g,
                        normalized: g / (big_r.sqrt() * big_r.ln().powf(1.0 + eps)),
                    })
                })
                .collect::<Result<Vec<_>>>()
        })
        .collect::<Result<Vec<_>>>()?;
    let rows: Vec<RotationRow> = per_sample.concat();
    let quantiles = r_list
        .iter()
        .map(|&big_r| {
            let mut v: Vec<f64> = rows
                .iter()
                .filter(|r| r.big_r == big_r)
                .map(|r| r.normalized)
                .collect();
            v.sort_by(f64::total_cmp);
            let q = [0.0, 0.25, 0.5, 0.75, 1.0].map(|p| quantile_sorted(&v, p));
            (big_r, q)
        })
        .collect();
    Ok(RotationStudy { rows, quantiles })
}
