//! Row-by-row lattice scanning of sublevel sets of convex, positively
//! homogeneous functions (gauges and support functions).

use crate::numeric::{golden_section_min, LatticePoint, Vec2};
use rayon::prelude::*;

/// Membership threshold for `f(k)`: `f <= t` or `f < t`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Bound {
    Closed(f64),
    Open(f64),
}

impl Bound {
    pub fn admits(self, v: f64) -> bool {
        match self {
            Bound::Closed(t) => v <= t,
            Bound::Open(t) => v < t,
        }
    }

    pub fn level(self) -> f64 {
        match self {
            Bound::Closed(t) | Bound::Open(t) => t,
        }
    }
}

/// A convex function together with the extents of its unit sublevel set
/// in the directions +x, -x, +y, -y.
pub struct Scanner<F> {
    f: F,
    extent: [f64; 4],
}

impl<F: Fn(Vec2) -> f64 + Sync> Scanner<F> {
    pub fn new(f: F, extent: [f64; 4]) -> Self {
        Scanner { f, extent }
    }

    /// Rows that can meet the sublevel set `{f <= level}`.
    pub fn rows(&self, level: f64) -> std::ops::RangeInclusive<i64> {
        let lo = -(level * self.extent[3]).ceil() as i64 - 1;
        let hi = (level * self.extent[2]).ceil() as i64 + 1;
        lo..=hi
    }

    /// Smallest and largest admitted integer abscissa on row `y`.
    pub fn row_range(&self, y: i64, bound: Bound) -> Option<(i64, i64)> {
        let t = bound.level();
        let yf = y as f64;
        let g = |x: f64| (self.f)(Vec2::new(x, yf));
        let gi = |k: i64| bound.admits(g(k as f64));
        if !(t > 0.0) {
            return (y == 0 && gi(0)).then_some((0, 0));
        }
        let xl = -t * self.extent[1] - 2.0;
        let xr = t * self.extent[0] + 2.0;
        let x0 = if bound.admits(g(0.0)) {
            0.0
        } else {
            let (xm, vm) = golden_section_min(g, xl, xr, 1e-10 * (xr - xl));
            let (fl, cl) = (xm.floor(), xm.ceil());
            if bound.admits(g(fl)) {
                fl
            } else if bound.admits(g(cl)) {
                cl
            } else if bound.admits(vm) {
                xm
            } else {
                return None;
            }
        };
        let b = edge(|x| bound.admits(g(x)), x0, xr);
        let a = edge(|x| bound.admits(g(x)), x0, xl);
        let kr = settle(&gi, b.floor() as i64, 1)?;
        let kl = settle(&gi, a.ceil() as i64, -1)?;
        (kl <= kr).then_some((kl, kr))
    }

    /// Number of lattice points in `{f admitted by bound}`.
    pub fn count(&self, bound: Bound) -> u64 {
        self.rows(bound.level())
            .into_par_iter()
            .map(|y| {
                self.row_range(y, bound)
                    .map_or(0, |(a, b)| (b - a + 1) as u64)
            })
            .sum()
    }

    /// Lattice points admitted by `outer` and not admitted by `inner`, in
    /// row order (y ascending, then x ascending).
    pub fn shell(&self, inner: Bound, outer: Bound) -> Vec<LatticePoint> {
        let rows: Vec<Vec<LatticePoint>> = self
            .rows(outer.level())
            .into_par_iter()
            .map(|y| {
                let Some((a, b)) = self.row_range(y, outer) else {
                    return Vec::new();
                };
                let hole = self.row_range(y, inner);
                (a..=b)
                    .filter(|x| !matches!(hole, Some((c, d)) if *x >= c && *x <= d))
                    .map(|x| LatticePoint::new(x, y))
                    .collect()
            })
            .collect();
        rows.concat()
    }
}

/// Bisects the boundary of the admitted interval between the admitted
/// point `inside` and the rejected point `outside` to width 1/4.
fn edge<P: Fn(f64) -> bool>(pred: P, mut inside: f64, mut outside: f64) -> f64 {
    while (outside - inside).abs() > 0.25 {
        let mid = 0.5 * (inside + outside);
        if pred(mid) {
            inside = mid;
        } else {
            outside = mid;
        }
    }
    inside
}

/// Moves from a candidate endpoint `k` to the true extreme admitted
/// integer in direction `dir`; `None` if no admitted integer is nearby,
/// which for a bisection error below one means the row is empty.
fn settle<G: Fn(i64) -> bool>(gi: &G, mut k: i64, dir: i64) -> Option<i64> {
    if gi(k) {
        while gi(k + dir) {
            k += dir;
        }
        return Some(k);
    }
    for _ in 0..3 {
        k -= dir;
        if gi(k) {
            return Some(k);
        }
    }
    None
}
