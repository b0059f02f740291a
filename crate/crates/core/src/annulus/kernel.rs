//! Pair sums over lattice points ordered by `rho_star`: the windowed
//! bilinear sum and the long-range kernel `(1 + a|s - t|)^(-N)`.

use crate::counting::rowscan::{Bound, Scanner};
use crate::error::{invalid, LdlError, Result};
use crate::geometry::{cap_mu_or_diameter, ConvexDomain};
use crate::numeric::{pairwise_sum, LatticePoint, Vec2};
use rayon::prelude::*;
use serde::Serialize;

/// Lattice points with `lo < |k| <= hi` (Euclidean), in row order.
pub(crate) fn euclidean_shell(lo: f64, hi: f64) -> Vec<LatticePoint> {
    let s = Scanner::new(|v: Vec2| v.norm(), [1.0; 4]);
    s.shell(Bound::Closed(lo), Bound::Closed(hi))
}

pub(crate) fn check_point_budget(radius: f64) -> Result<()> {
    let n = std::f64::consts::PI * radius * radius;
    if n > 6e7 {
        return Err(LdlError::Resource(format!(
            "about {n:.3e} lattice points within radius {radius}; the limit is 6e7"
        )));
    }
    Ok(())
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Bilinear {
    pub value: f64,
    /// Lattice points with `0 < |k| <= R`.
    pub points: usize,
    /// Ordered pairs satisfying the `rho_star` window condition.
    pub pairs: u64,
}

/// Points sorted by `rho_star`, with the two weight sequences of the
/// bilinear sum.
pub(crate) struct BilinearSetup {
    pub values: Vec<f64>,
    pub a: Vec<f64>,
    pub b: Vec<f64>,
}

pub(crate) fn bilinear_setup_points(
    domain: &ConvexDomain,
    points: &[LatticePoint],
    big_r: f64,
) -> BilinearSetup {
    let mut rows: Vec<(f64, LatticePoint, f64, f64)> = points
        .par_iter()
        .map(|k| {
            let v = k.to_vec2();
            let n = v.norm();
            let mu = cap_mu_or_diameter(domain, v * (1.0 / n), 1.0 / (n * big_r));
            (domain.support(v), *k, mu / (n * n), mu)
        })
        .collect();
    rows.sort_by(|x, y| x.0.total_cmp(&y.0).then(x.1.cmp(&y.1)));
    BilinearSetup {
        values: rows.iter().map(|r| r.0).collect(),
        a: rows.iter().map(|r| r.2).collect(),
        b: rows.iter().map(|r| r.3).collect(),
    }
}

fn bilinear_setup(domain: &ConvexDomain, big_r: f64, h: f64) -> Result<BilinearSetup> {
    if !(big_r >= 1.0 && big_r.is_finite()) {
        return invalid(format!("R must be at least 1, got {big_r}"));
    }
    if !(h > 0.0 && h.is_finite()) {
        return invalid(format!("h must be positive, got {h}"));
    }
    check_point_budget(big_r)?;
    Ok(bilinear_setup_points(
        domain,
        &euclidean_shell(0.0, big_r),
        big_r,
    ))
}

/// Windowed evaluation: each point pairs with the contiguous run of
/// points whose `rho_star` lies within `1/h` of its own. Inner sums run in
/// index order, so the result is bit-identical to [`bilinear_k_direct`].
pub(crate) fn windowed_sum(s: &BilinearSetup, width: f64, include_diagonal: bool) -> (f64, u64) {
    let v = &s.values;
    let rows: Vec<(f64, u64)> = (0..v.len())
        .into_par_iter()
        .map(|k| {
            let vk = v[k];
            let lo = v.partition_point(|x| vk - x > width);
            let hi = v.partition_point(|x| x - vk <= width);
            let mut acc = 0.0;
            let mut pairs = 0u64;
            for l in lo..hi {
                if l == k && !include_diagonal {
                    continue;
                }
                acc += s.b[l];
                pairs += 1;
            }
            (s.a[k] * acc, pairs)
        })
        .collect();
    let terms: Vec<f64> = rows.iter().map(|r| r.0).collect();
    (pairwise_sum(&terms), rows.iter().map(|r| r.1).sum())
}

pub(crate) fn direct_sum(
    s: &BilinearSetup,
    width: f64,
    include_diagonal: bool,
    rows: Option<&[usize]>,
) -> (f64, u64) {
    let v = &s.values;
    let all: Vec<usize>;
    let rows = match rows {
        Some(r) => r,
        None => {
            all = (0..v.len()).collect();
            &all
        }
    };
    let out: Vec<(f64, u64)> = rows
        .par_iter()
        .map(|&k| {
            let vk = v[k];
            let mut acc = 0.0;
            let mut pairs = 0u64;
            for l in 0..v.len() {
                if (vk - v[l]).abs() <= width && (include_diagonal || l != k) {
                    acc += s.b[l];
                    pairs += 1;
                }
            }
            (s.a[k] * acc, pairs)
        })
        .collect();
    let terms: Vec<f64> = out.iter().map(|r| r.0).collect();
    (pairwise_sum(&terms), out.iter().map(|r| r.1).sum())
}

/// `sum over |k|,|l| <= R with |rho_star(k) - rho_star(l)| <= 1/h of
/// |k|^-2 mu(k/|k|, 1/(|k|R)) mu(l/|l|, 1/(|l|R))`.
pub fn bilinear_k(
    domain: &ConvexDomain,
    big_r: f64,
    h: f64,
    include_diagonal: bool,
) -> Result<Bilinear> {
    let s = bilinear_setup(domain, big_r, h)?;
    let (value, pairs) = windowed_sum(&s, 1.0 / h, include_diagonal);
    Ok(Bilinear {
        value,
        points: s.values.len(),
        pairs,
    })
}

/// The same sum by testing every pair.
pub fn bilinear_k_direct(
    domain: &ConvexDomain,
    big_r: f64,
    h: f64,
    include_diagonal: bool,
) -> Result<Bilinear> {
    let s = bilinear_setup(domain, big_r, h)?;
    let (value, pairs) = direct_sum(&s, 1.0 / h, include_diagonal, None);
    Ok(Bilinear {
        value,
        points: s.values.len(),
        pairs,
    })
}

/// Times the direct pair loop on `sample` rows and the windowed method on
/// all rows; returns `(windowed seconds, extrapolated direct seconds,
/// points)`.
pub fn bilinear_timing(
    domain: &ConvexDomain,
    big_r: f64,
    h: f64,
    sample: usize,
) -> Result<(f64, f64, usize)> {
    let s = bilinear_setup(domain, big_r, h)?;
    let n = s.values.len();
    let t0 = std::time::Instant::now();
    let _ = windowed_sum(&s, 1.0 / h, true);
    let windowed = t0.elapsed().as_secs_f64();
    let step = (n / sample.max(1)).max(1);
    let rows: Vec<usize> = (0..n).step_by(step).collect();
    let t1 = std::time::Instant::now();
    let _ = direct_sum(&s, 1.0 / h, true, Some(&rows));
    let direct = t1.elapsed().as_secs_f64() * n as f64 / rows.len() as f64;
    Ok((windowed, direct, n))
}

/// Exponential-sum approximation `y^(-N) ~ sum_q c_q exp(-lambda_q y)` on
/// `[1, y_max]`, from the trapezoid rule applied to
/// `y^(-N) = Gamma(N)^(-1) integral exp(N t - y e^t) dt`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ExpSumKernel {
    pub n_exp: u32,
    pub y_max: f64,
    pub lambdas: Vec<f64>,
    pub coefs: Vec<f64>,
    /// Largest relative error over a logarithmic grid of `[1, y_max]`.
    pub fit_error: f64,
}

impl ExpSumKernel {
    pub fn new(n_exp: u32, y_max: f64) -> Self {
        let n = n_exp as f64;
        let y_max = y_max.max(1.0);
        let step = 0.2;
        let mut t_max = n.ln();
        while n * t_max - t_max.exp() > -42.0 {
            t_max += 0.05;
        }
        let t_min = -y_max.ln() - 42.0 / n;
        let gamma: f64 = (1..n_exp).map(|k| k as f64).product();
        let count = ((t_max - t_min) / step).ceil() as usize + 1;
        let mut lambdas = Vec::with_capacity(count);
        let mut coefs = Vec::with_capacity(count);
        for q in 0..count {
            let t = t_max - q as f64 * step;
            lambdas.push(t.exp());
            coefs.push(step * (n * t).exp() / gamma);
        }
        let mut k = ExpSumKernel {
            n_exp,
            y_max,
            lambdas,
            coefs,
            fit_error: 0.0,
        };
        let grid = 400;
        k.fit_error = (0..=grid)
            .map(|i| {
                let y = y_max.powf(i as f64 / grid as f64);
                (k.eval(y) * y.powi(n_exp as i32) - 1.0).abs()
            })
            .fold(0.0, f64::max);
        k
    }

    pub fn eval(&self, y: f64) -> f64 {
        let terms: Vec<f64> = self
            .lambdas
            .iter()
            .zip(&self.coefs)
            .map(|(l, c)| c * (-l * y).exp())
            .collect();
        pairwise_sum(&terms)
    }

    /// `sum_{i,j} w_i w_j (1 + a|v_i - v_j|)^(-N)` for ascending `values`,
    /// in `O(n)` per exponential term.
    pub fn pair_sum(&self, values: &[f64], weights: &[f64], a: f64) -> f64 {
        let diag: f64 = pairwise_sum(&weights.iter().map(|w| w * w).collect::<Vec<_>>());
        let per_term: Vec<f64> = self
            .lambdas
            .par_iter()
            .zip(self.coefs.par_iter())
            .map(|(&lambda, &c)| {
                let c = c * (-lambda).exp();
                if c < 1e-300 {
                    return 0.0;
                }
                let beta = lambda * a;
                let mut acc = 0.0;
                let mut total = 0.0;
                for i in 0..values.len() {
                    if i > 0 {
                        acc *= (-beta * (values[i] - values[i - 1])).exp();
                    }
                    acc += weights[i];
                    total += weights[i] * acc;
                }
                c * (2.0 * total - diag)
            })
            .collect();
        pairwise_sum(&per_term)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn unit_disk_at_r_one() {
        // Four points, all with rho_star 1; every term is mu(., 1)^2 = 4.
        let d = ConvexDomain::disk(1.0).unwrap();
        let b = bilinear_k(&d, 1.0, 1.0, true).unwrap();
        assert_eq!(b.points, 4);
        assert_eq!(b.pairs, 16);
        assert!((b.value - 64.0).abs() < 1e-9, "{}", b.value);
        let off = bilinear_k(&d, 1.0, 1.0, false).unwrap();
        assert!((off.value - 48.0).abs() < 1e-9);
    }

    #[test]
    fn windowed_equals_direct_bitwise() {
        let d = ConvexDomain::ellipse(1.5, 1.0).unwrap();
        for (r, h) in [(20.0, 3.0), (35.0, 7.5)] {
            let a = bilinear_k(&d, r, h, true).unwrap();
            let b = bilinear_k_direct(&d, r, h, true).unwrap();
            assert_eq!(a.value.to_bits(), b.value.to_bits());
            assert_eq!(a.pairs, b.pairs);
        }
    }

    #[test]
    fn exp_sum_kernel_fit() {
        for n in [2, 4, 8] {
            let k = ExpSumKernel::new(n, 1e6);
            assert!(k.fit_error < 1e-10, "N = {n}: {}", k.fit_error);
        }
    }

    #[test]
    fn exp_sum_pair_sum_matches_direct() {
        let values: Vec<f64> = (0..300)
            .map(|i| (i as f64 * 0.37).sin().abs() * 50.0)
            .collect();
        let mut sorted = values.clone();
        sorted.sort_by(f64::total_cmp);
        let weights: Vec<f64> = (0..300).map(|i| 1.0 + (i % 7) as f64).collect();
        let a = 3.0;
        let k = ExpSumKernel::new(4, 1.0 + a * 50.0);
        let fast = k.pair_sum(&sorted, &weights, a);
        let mut direct = 0.0;
        for i in 0..300 {
            for j in 0..300 {
                direct +=
                    weights[i] * weights[j] * (1.0 + a * (sorted[i] - sorted[j]).abs()).powi(-4);
            }
        }
        assert!((fast - direct).abs() < 1e-10 * direct);
    }
}
