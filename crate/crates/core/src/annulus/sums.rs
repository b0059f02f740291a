//! The dyadic pieces `Gamma_n`, `B_n` and `B~_n` and their assembly into
//! the bound for the mean-square discrepancy.

use super::kernel::{check_point_budget, euclidean_shell, ExpSumKernel};
use super::Sign;
use crate::counting::mean_square_discrepancy_exact;
use crate::error::{invalid, Result};
use crate::geometry::{cap_mu_or_diameter, ConvexDomain};
use crate::numeric::{pairwise_sum, LatticePoint};
use rayon::prelude::*;
use serde::Serialize;
use std::f64::consts::{FRAC_1_SQRT_2, PI};

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SumConfig {
    /// Decay exponent `N` of the weight `(1 + |k|/R)^(-N)` and the kernels.
    pub n_exp: u32,
    /// Sums over `k` are truncated at `|k| <= k_cutoff * R`.
    pub k_cutoff: f64,
}

impl Default for SumConfig {
    fn default() -> Self {
        SumConfig {
            n_exp: 4,
            k_cutoff: 8.0,
        }
    }
}

impl SumConfig {
    pub fn validate(&self) -> Result<()> {
        if self.n_exp < 2 {
            return invalid(format!(
                "decay exponent must be at least 2, got {}",
                self.n_exp
            ));
        }
        if !(self.k_cutoff >= 1.0) {
            return invalid(format!(
                "cutoff multiple must be at least 1, got {}",
                self.k_cutoff
            ));
        }
        Ok(())
    }
}

/// A truncated sum with a certified bound on what the truncation dropped.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SumValue {
    pub value: f64,
    pub tail_bound: f64,
    /// Lattice points in the summation range.
    pub points: usize,
}

fn omega(big_r: f64, n_exp: u32, norm: f64) -> f64 {
    (1.0 + norm / big_r).powi(-(n_exp as i32))
}

/// Upper bound for `sum_{|k| > m} omega_R(k) |k|^-1` by comparison with
/// the integral over `|x| > m - 1/sqrt(2)`.
fn omega_tail(big_r: f64, n_exp: u32, m: f64) -> f64 {
    let c = FRAC_1_SQRT_2;
    let a = m - 2.0 * c;
    if a <= 0.0 {
        return f64::INFINITY;
    }
    let n = n_exp as f64;
    2.0 * PI * (1.0 + c / a) * big_r / (n - 1.0) * (1.0 + a / big_r).powf(1.0 - n)
}

/// Lattice points with `lo < |k| <= hi`, their norms, and the weights
/// `omega_R(k) |k|^-1 mu(k/|k|, 2^n/(|k|R))`.
struct Weighted {
    points: Vec<LatticePoint>,
    weights: Vec<f64>,
}

fn weighted_points(
    domain: &ConvexDomain,
    big_r: f64,
    n: u32,
    lo: f64,
    hi: f64,
    n_exp: u32,
) -> Weighted {
    let points = euclidean_shell(lo, hi);
    let scale = 2f64.powi(n as i32) / big_r;
    let weights = points
        .par_iter()
        .map(|k| {
            let v = k.to_vec2();
            let m = v.norm();
            omega(big_r, n_exp, m) / m * cap_mu_or_diameter(domain, v * (1.0 / m), scale / m)
        })
        .collect();
    Weighted { points, weights }
}

fn check_common(big_r: f64, config: &SumConfig) -> Result<()> {
    config.validate()?;
    if !(big_r >= 2.0 && big_r.is_finite()) {
        return invalid(format!("R must be at least 2, got {big_r}"));
    }
    check_point_budget(config.k_cutoff * big_r)
}

/// `Gamma_n = R sum_{|k| > 2^n/R} omega_R(k) |k|^-1 mu(k/|k|, 2^n/(|k|R))`,
/// truncated at the cutoff. The sum is invariant under `k -> -k`, so both
/// signs give the same value.
pub fn gamma_n(
    domain: &ConvexDomain,
    big_r: f64,
    _h: f64,
    n: u32,
    _sign: Sign,
    config: &SumConfig,
) -> Result<SumValue> {
    check_common(big_r, config)?;
    let lo = 2f64.powi(n as i32) / big_r;
    let hi = config.k_cutoff * big_r;
    if lo >= hi {
        return Ok(SumValue {
            value: 0.0,
            tail_bound: big_r * 2.0 * domain.r2() * omega_tail(big_r, config.n_exp, lo),
            points: 0,
        });
    }
    let w = weighted_points(domain, big_r, n, lo, hi, config.n_exp);
    Ok(SumValue {
        value: big_r * pairwise_sum(&w.weights),
        tail_bound: big_r * 2.0 * domain.r2() * omega_tail(big_r, config.n_exp, hi),
        points: w.points.len(),
    })
}

/// Kernel scale of the two pair-sum variants.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Variant {
    /// `(1 + h |rho_star(k) - rho_star(l)|)^(-N)`.
    Plain,
    /// `(1 + R 2^-n |rho_star(k) - rho_star(l)|)^(-N)`.
    Tilde,
}

fn frakb_setup(
    domain: &ConvexDomain,
    big_r: f64,
    h: f64,
    n: u32,
    sign: Sign,
    variant: Variant,
    config: &SumConfig,
) -> Result<Option<(Vec<f64>, Vec<f64>, f64, f64, f64)>> {
    check_common(big_r, config)?;
    let lo = 2f64.powi(n as i32) / big_r;
    let upper = big_r * big_r;
    let hi = (config.k_cutoff * big_r).min(upper);
    if lo >= hi {
        return Ok(None);
    }
    let w = weighted_points(domain, big_r, n, lo, hi, config.n_exp);
    let s = sign.factor();
    let mut rows: Vec<(f64, LatticePoint, f64)> = w
        .points
        .iter()
        .zip(&w.weights)
        .map(|(k, &wt)| (domain.support(k.to_vec2() * s), *k, wt))
        .collect();
    rows.sort_by(|x, y| x.0.total_cmp(&y.0).then(x.1.cmp(&y.1)));
    let a = match variant {
        Variant::Plain => h,
        Variant::Tilde => big_r / 2f64.powi(n as i32),
    };
    let w_in = pairwise_sum(&w.weights);
    let w_tail = if hi < upper {
        2.0 * domain.r2() * omega_tail(big_r, config.n_exp, hi)
    } else {
        0.0
    };
    let tail_sq = 2.0 * w_in * w_tail + w_tail * w_tail;
    Ok(Some((
        rows.iter().map(|r| r.0).collect(),
        rows.iter().map(|r| r.2).collect(),
        a,
        tail_sq,
        w_in,
    )))
}

/// `B_n` (plain) or `B~_n` (tilde): `2^-n R (double sum)^(1/2)`, with the
/// double sum evaluated through an exponential-sum expansion of the
/// kernel. The tail bound covers the points beyond the cutoff.
pub fn frakb_n(
    domain: &ConvexDomain,
    big_r: f64,
    h: f64,
    n: u32,
    sign: Sign,
    variant: Variant,
    config: &SumConfig,
) -> Result<SumValue> {
    let Some((values, weights, a, tail_sq, _)) =
        frakb_setup(domain, big_r, h, n, sign, variant, config)?
    else {
        return Ok(SumValue {
            value: 0.0,
            tail_bound: 0.0,
            points: 0,
        });
    };
    let spread = values.last().unwrap() - values[0];
    let kernel = ExpSumKernel::new(config.n_exp, 1.0 + a * spread);
    let s = kernel.pair_sum(&values, &weights, a).max(0.0);
    let scale = big_r / 2f64.powi(n as i32);
    Ok(SumValue {
        value: scale * s.sqrt(),
        tail_bound: scale * tail_sq.sqrt(),
        points: values.len(),
    })
}

/// The same double sum evaluated pair by pair.
pub fn frakb_n_direct(
    domain: &ConvexDomain,
    big_r: f64,
    h: f64,
    n: u32,
    sign: Sign,
    variant: Variant,
    config: &SumConfig,
) -> Result<SumValue> {
    let Some((values, weights, a, tail_sq, _)) =
        frakb_setup(domain, big_r, h, n, sign, variant, config)?
    else {
        return Ok(SumValue {
            value: 0.0,
            tail_bound: 0.0,
            points: 0,
        });
    };
    let p = -(config.n_exp as i32);
    let rows: Vec<f64> = (0..values.len())
        .into_par_iter()
        .map(|i| {
            let mut acc = 0.0;
            for j in 0..values.len() {
                acc += weights[j] * (1.0 + a * (values[i] - values[j]).abs()).powi(p);
            }
            weights[i] * acc
        })
        .collect();
    let scale = big_r / 2f64.powi(n as i32);
    Ok(SumValue {
        value: scale * pairwise_sum(&rows).sqrt(),
        tail_bound: scale * tail_sq.sqrt(),
        points: values.len(),
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Prop24Term {
    /// `b`, `btilde` or `gamma`.
    pub which: &'static str,
    pub n: u32,
    pub sign: Sign,
    pub value: f64,
    pub tail_bound: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Prop24 {
    #[serde(rename = "R")]
    pub big_r: f64,
    pub h: f64,
    pub config: SumConfig,
    pub terms: Vec<Prop24Term>,
    /// `log R + sqrt(R/h)`.
    pub elementary: f64,
    /// Sum of all terms plus `elementary`, with unit constant.
    pub rhs: f64,
    pub tail_total: f64,
    pub g_exact: f64,
    /// `rhs / g_exact`.
    pub ratio: f64,
}

/// Assembles the right-hand side: `B_n` for `2^n <= R/h`, `B~_n` for
/// `R/h < 2^n <= R` and `Gamma_n` for `2^n > R`, over both signs, plus
/// `log R + sqrt(R/h)`. `Gamma_n` terms run until the inner radius
/// `2^n/R` passes the cutoff, after which they vanish identically.
pub fn prop24_rhs(domain: &ConvexDomain, big_r: f64, h: f64, config: &SumConfig) -> Result<Prop24> {
    check_common(big_r, config)?;
    if !(h >= 1.0 && h <= big_r) {
        return invalid(format!("need 1 <= h <= R, got h = {h}, R = {big_r}"));
    }
    let mut terms = Vec::new();
    let mut n = 0u32;
    loop {
        let two_n = 2f64.powi(n as i32);
        if two_n / big_r >= config.k_cutoff * big_r {
            break;
        }
        for sign in [Sign::Plus, Sign::Minus] {
            let (which, v) = if two_n <= big_r / h {
                (
                    "b",
                    frakb_n(domain, big_r, h, n, sign, Variant::Plain, config)?,
                )
            } else if two_n <= big_r {
                (
                    "btilde",
                    frakb_n(domain, big_r, h, n, sign, Variant::Tilde, config)?,
                )
            } else {
                ("gamma", gamma_n(domain, big_r, h, n, sign, config)?)
            };
            terms.push(Prop24Term {
                which,
                n,
                sign,
                value: v.value,
                tail_bound: v.tail_bound,
            });
        }
        n += 1;
    }
    let elementary = big_r.ln() + (big_r / h).sqrt();
    let rhs = pairwise_sum(&terms.iter().map(|t| t.value).collect::<Vec<_>>()) + elementary;
    let tail_total = terms.iter().map(|t| t.tail_bound).sum();
    let g_exact = mean_square_discrepancy_exact(domain, big_r, h)?;
    Ok(Prop24 {
        big_r,
        h,
        config: *config,
        terms,
        elementary,
        rhs,
        tail_total,
        g_exact,
        ratio: rhs / g_exact,
    })
}
