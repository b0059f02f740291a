//! Acceptance suite. Prints one PASS/FAIL line per criterion and exits
//! nonzero if any criterion outside `KNOWN_UNATTAINABLE` fails.

use ldl_core::annulus::{
    bilinear_k, bilinear_k_direct, bilinear_timing, central_subsegment, chain_vertex_bound_check,
    enumerate_annulus, lemma61_check, prop33_ratio, segment_decomposition, IntervalKind, Sign,
};
use ldl_core::constructions::{
    build_farey_domain, verify_cap_condition, verify_k_lower_bound, verify_pyth, verify_slim,
    FareyDomainParams, DEFAULT_C0,
};
use ldl_core::counting::{count_lattice_points, critical_radii, scaling_study, HRule};
use ldl_core::distance::{m_eps, shell_points, sigma_sum, verify_cs_inequality, NormSpec};
use ldl_core::geometry::{cap, curvature_ratio_sup, default_delta_grid};
use ldl_core::numeric::{gcd, log_log_slope, log_space};
use ldl_core::{ConvexDomain, LatticePoint, Vec2};
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};
use std::collections::BTreeSet;
use std::path::Path;
use std::process::Command;
use std::time::Instant;

/// Criteria whose statement cannot hold at the prescribed scale. The line
/// is still printed and the evaluation is still faithful.
///
/// 9: for a domain with curvature bounded below, a lattice segment inside
/// the annulus `r <= rho* <= r + 1/h` has length at most about
/// `2 sqrt(2 r / h)`, i.e. `2 sqrt(2) R^(1/4)` when `h = sqrt(R)` and
/// `r <= R`. Its ninefold dilate must hold at least 10 points spaced `>= 1`,
/// so it needs length `>= 81`; that forces `R >= 10^6`, far outside
/// `r <= 1024`. The per-segment ratios therefore do not exist there; the
/// weighted-sum ratios and a supplementary `R = 10^6` instance are checked.
const KNOWN_UNATTAINABLE: &[u32] = &[9];

/// Lower bound recorded for `K R / (eps log log R)` on the Farey domains.
const K_RATIO_FLOOR: f64 = 10.0;
/// Lower bound recorded for `m_0 log R / R^2` in dimension 3.
const DIAGNOSTIC_FLOOR: f64 = 1.5;

struct Outcome {
    ok: bool,
    detail: String,
}

fn outcome(ok: bool, detail: impl Into<String>) -> Outcome {
    Outcome {
        ok,
        detail: detail.into(),
    }
}

fn farey(big_r: f64) -> ldl_core::constructions::FareyDomain {
    let p = FareyDomainParams::new(big_r, 0.5, None, DEFAULT_C0).unwrap();
    build_farey_domain(&p).unwrap()
}

/// Independent membership and polar-functional oracles for the test domains.
struct Oracle {
    name: &'static str,
    domain: ConvexDomain,
    inside: Box<dyn Fn(i64, i64, f64) -> bool + Sync>,
    polar: Box<dyn Fn(f64, f64) -> f64 + Sync>,
}

fn oracles() -> Vec<Oracle> {
    let fd = farey(1e6);
    let d_support = fd.d_domain.clone();
    let d_gauge = fd.d_domain.clone();
    vec![
        Oracle {
            name: "disk:1",
            domain: ConvexDomain::disk(1.0).unwrap(),
            inside: Box::new(|x, y, t| ((x * x + y * y) as f64) <= t * t),
            polar: Box::new(|a, b| a.hypot(b)),
        },
        Oracle {
            name: "ellipse:2,1",
            domain: ConvexDomain::ellipse(2.0, 1.0).unwrap(),
            inside: Box::new(|x, y, t| ((x * x + 4 * y * y) as f64) <= 4.0 * t * t),
            polar: Box::new(|a, b| (4.0 * a * a + b * b).sqrt()),
        },
        Oracle {
            name: "superellipse:1.5,1.5",
            domain: ConvexDomain::superellipse(1.5, 1.5, 1.0).unwrap(),
            inside: Box::new(|x, y, t| {
                (x.abs() as f64).powf(1.5) + (y.abs() as f64).powf(1.5) <= t.powf(1.5)
            }),
            polar: Box::new(|a, b| (a.abs().powi(3) + b.abs().powi(3)).cbrt()),
        },
        Oracle {
            name: "farey:1e6,0.5",
            domain: fd.omega.clone(),
            inside: Box::new(move |x, y, t| d_support.support(Vec2::new(x as f64, y as f64)) <= t),
            polar: Box::new(move |a, b| d_gauge.gauge(Vec2::new(a, b))),
        },
    ]
}

fn criterion_1(rng: &mut StdRng, os: &[Oracle]) -> Outcome {
    let start = Instant::now();
    let mut bad = Vec::new();
    for o in os {
        for _ in 0..50 {
            let t: f64 = 200.0 * (1.0 - rng.gen::<f64>());
            let n = (t * o.domain.r2()).ceil() as i64 + 1;
            let brute: u64 = (-n..=n)
                .map(|x| (-n..=n).filter(|&y| (o.inside)(x, y, t)).count() as u64)
                .sum();
            let fast = count_lattice_points(&o.domain, t).unwrap();
            if brute != fast {
                bad.push(format!("{} t={t}: {fast} vs {brute}", o.name));
            }
        }
    }
    let secs = start.elapsed().as_secs_f64();
    outcome(
        bad.is_empty() && secs < 60.0,
        format!(
            "200 counts vs grid enumeration, {} mismatches, {secs:.1}s {}",
            bad.len(),
            bad.join("; ")
        ),
    )
}

fn criterion_2(rng: &mut StdRng, os: &[Oracle]) -> Outcome {
    let mut bad = Vec::new();
    let mut total = 0;
    for o in os {
        for _ in 0..20 {
            let r: f64 = 300.0 * (1.0 - rng.gen::<f64>());
            let h: f64 = rng.gen_range(1.0..50.0);
            let sign = if rng.gen_bool(0.5) {
                Sign::Plus
            } else {
                Sign::Minus
            };
            let kind = if rng.gen_bool(0.5) {
                IntervalKind::Centered
            } else {
                IntervalKind::Onesided
            };
            let lo = match kind {
                IntervalKind::Centered => r - 1.0 / h,
                IntervalKind::Onesided => r,
            };
            let hi = r + 1.0 / h;
            let s = sign.factor();
            let n = (hi / o.domain.r1()).ceil() as i64 + 1;
            let mut brute = BTreeSet::new();
            for x in -n..=n {
                for y in -n..=n {
                    let v = (o.polar)(s * x as f64, s * y as f64);
                    if v > lo && v <= hi {
                        brute.insert(LatticePoint::new(x, y));
                    }
                }
            }
            let fast: BTreeSet<LatticePoint> = enumerate_annulus(&o.domain, r, h, sign, kind)
                .unwrap()
                .points
                .into_iter()
                .collect();
            total += brute.len();
            if fast != brute {
                bad.push(format!(
                    "{} r={r} h={h}: {} vs {}",
                    o.name,
                    fast.len(),
                    brute.len()
                ));
            }
        }
    }
    outcome(
        bad.is_empty(),
        format!(
            "80 annuli ({total} points) vs box enumeration, {} mismatches {}",
            bad.len(),
            bad.join("; ")
        ),
    )
}

fn criterion_3() -> Outcome {
    let d = ConvexDomain::disk(1.0).unwrap();
    let deltas = log_space(1e-10, 1.5, 40);
    let mut worst: f64 = 0.0;
    for i in 0..360 {
        let theta = Vec2::from_angle(i as f64 * std::f64::consts::TAU / 360.0);
        for &delta in &deltas {
            let mu = cap(&d, theta, delta).unwrap().mu;
            worst = worst.max((mu - 2.0 * (2.0 * delta - delta * delta).sqrt()).abs());
        }
    }
    let sup = curvature_ratio_sup(&d, 360, &default_delta_grid(&d))
        .unwrap()
        .sup;
    let err = (sup - 2.0 * 2f64.sqrt()).abs();
    outcome(
        worst <= 1e-8 && err <= 1e-6,
        format!("max |mu - closed form| = {worst:.2e}, |sup - 2 sqrt 2| = {err:.2e}"),
    )
}

fn criterion_4(rng: &mut StdRng, os: &[Oracle]) -> Outcome {
    let mut worst: f64 = 0.0;
    for o in os {
        for _ in 0..10 {
            let big_r: f64 = rng.gen_range(5.0..500.0);
            let h: f64 = rng.gen_range(1.0..50.0);
            let p = critical_radii(&o.domain, big_r, h).unwrap();
            let (exact, sampled) = (p.g_exact(), p.g_sampled((1e4 * h).ceil() as usize));
            worst = worst.max((sampled / exact - 1.0).abs());
        }
    }
    outcome(
        worst <= 0.01,
        format!("40 windows, max relative gap {worst:.2e}"),
    )
}

fn criterion_5() -> Outcome {
    let start = Instant::now();
    let r_list = [64.0, 128.0, 256.0, 512.0, 1024.0];
    let mut ok = true;
    let mut parts = Vec::new();
    for d in [
        ConvexDomain::disk(1.0).unwrap(),
        ConvexDomain::superellipse(1.5, 1.5, 1.0).unwrap(),
    ] {
        let s = scaling_study(&d, &r_list, HRule::SqrtR).unwrap();
        let slope = s.slope.unwrap();
        let norm: Vec<f64> = s.rows.iter().map(|r| r.g_over_sqrt_r).collect();
        let spread = norm.iter().cloned().fold(0.0, f64::max)
            / norm.iter().cloned().fold(f64::INFINITY, f64::min);
        ok &= slope <= 0.60 && spread < 4.0;
        parts.push(format!("{} slope {slope:.3} spread {spread:.2}", d.label()));
    }
    let secs = start.elapsed().as_secs_f64();
    outcome(
        ok && secs < 600.0,
        format!("{}, {secs:.1}s", parts.join(", ")),
    )
}

fn criteria_6_7() -> (Outcome, Outcome) {
    let d = ConvexDomain::disk(1.0).unwrap();
    let rs = [100.0, 200.0, 400.0, 800.0];
    let mut counts = Vec::new();
    let mut uncovered = 0;
    let mut points = 0;
    for &r in &rs {
        let s = segment_decomposition(&d, r, f64::sqrt(r)).unwrap();
        counts.push(s.extreme_points.len() as f64);
        uncovered += s.annulus_points - s.covered_points;
        points += s.annulus_points;
    }
    let slope = log_log_slope(&rs, &counts).unwrap();
    (
        outcome(
            slope <= 0.72,
            format!("extreme points {counts:?}, fitted exponent {slope:.3}"),
        ),
        outcome(
            uncovered == 0,
            format!("{points} annulus points, {uncovered} uncovered"),
        ),
    )
}

fn random_chain(rng: &mut StdRng) -> Vec<LatticePoint> {
    loop {
        let k = rng.gen_range(1..40);
        let mut dirs = BTreeSet::new();
        while dirs.len() < k {
            let (a, b) = (rng.gen_range(-12i64..=12), rng.gen_range(-12i64..=12));
            if (a, b) != (0, 0) && gcd(a, b) == 1 {
                dirs.insert((a, b));
            }
        }
        let mut dirs: Vec<(i64, i64)> = dirs.into_iter().collect();
        dirs.sort_by(|p, q| {
            (p.1 as f64)
                .atan2(p.0 as f64)
                .total_cmp(&(q.1 as f64).atan2(q.0 as f64))
        });
        let start = rng.gen_range(0..dirs.len());
        dirs.rotate_left(start);
        let convex = dirs
            .windows(2)
            .all(|w| w[0].0 * w[1].1 - w[0].1 * w[1].0 > 0);
        if !convex {
            continue;
        }
        let mut p = LatticePoint::new(rng.gen_range(-100..100), rng.gen_range(-100..100));
        let mut chain = vec![p];
        for (a, b) in dirs {
            let m = rng.gen_range(1..4);
            p = LatticePoint::new(p.x + m * a, p.y + m * b);
            chain.push(p);
        }
        return chain;
    }
}

fn criterion_8(rng: &mut StdRng) -> Outcome {
    let start = Instant::now();
    let mut fails = 0;
    let mut tightest = f64::INFINITY;
    for _ in 0..10_000 {
        let chain = random_chain(rng);
        match chain_vertex_bound_check(&chain) {
            Ok(c) if c.ok => tightest = tightest.min(c.bound - c.j as f64),
            _ => fails += 1,
        }
    }
    let secs = start.elapsed().as_secs_f64();
    outcome(
        fails == 0 && secs < 10.0,
        format!("10000 chains, {fails} failures, min slack {tightest:.3}, {secs:.2}s"),
    )
}

fn weighted_ratio_series() -> Vec<(String, Vec<f64>)> {
    let rs = [32.0, 64.0, 128.0, 256.0, 512.0, 1024.0];
    [
        ConvexDomain::disk(1.0).unwrap(),
        ConvexDomain::ellipse(2.0, 1.0).unwrap(),
    ]
    .iter()
    .map(|d| {
        let ratios = rs
            .iter()
            .map(|&r| prop33_ratio(d, r, 1024.0, 32.0).unwrap().ratio)
            .collect();
        (d.label().to_string(), ratios)
    })
    .collect()
}

/// Largest relative deviation from the mean, and from the median.
fn deviations(xs: &[f64]) -> (f64, f64) {
    let mut s = xs.to_vec();
    s.sort_by(f64::total_cmp);
    let n = s.len();
    let med = if n % 2 == 1 {
        s[n / 2]
    } else {
        0.5 * (s[n / 2 - 1] + s[n / 2])
    };
    let mean = s.iter().sum::<f64>() / n as f64;
    let dev = |c: f64| s.iter().map(|x| (x / c - 1.0).abs()).fold(0.0, f64::max);
    (dev(mean), dev(med))
}

/// Segment-bound ratios on the row `x = r` of the disk annulus at `R = 10^6`,
/// `h = 10^3`, where the central run of the segment is long enough.
fn supplementary_segment_ratios() -> Vec<f64> {
    let d = ConvexDomain::disk(1.0).unwrap();
    let (big_r, h) = (1e6, 1e3);
    [1e6, 9e5]
        .iter()
        .map(|&r: &f64| {
            let top = (((r + 1.0 / h).powi(2) - r * r).sqrt()).floor() as i64;
            let seg: Vec<LatticePoint> = (-top..=top)
                .map(|y| LatticePoint::new(r as i64, y))
                .collect();
            let sub = central_subsegment(&seg).unwrap();
            lemma61_check(&d, &sub, big_r, r, h).unwrap().ratio
        })
        .collect()
}

fn criterion_9() -> (Outcome, bool) {
    let (a, b) = (weighted_ratio_series(), weighted_ratio_series());
    let repeat = a == b;
    let devs: Vec<(f64, f64)> = a.iter().map(|(_, xs)| deviations(xs)).collect();
    let stable = devs.iter().all(|d| d.0 <= 0.5);
    let mut qualifying = 0;
    let mut segments = 0;
    let mut longest = 0;
    for d in [
        ConvexDomain::disk(1.0).unwrap(),
        ConvexDomain::ellipse(2.0, 1.0).unwrap(),
    ] {
        for r in [32.0, 64.0, 128.0, 256.0, 512.0, 1024.0] {
            let s = segment_decomposition(&d, r, 32.0).unwrap();
            for seg in &s.segments {
                segments += 1;
                longest = longest.max(seg.card);
                if let Some(sub) = central_subsegment(&seg.lattice_points) {
                    if lemma61_check(&d, &sub, 1024.0, r, 32.0).is_ok() {
                        qualifying += 1;
                    }
                }
            }
        }
    }
    let (s1, s2) = (
        supplementary_segment_ratios(),
        supplementary_segment_ratios(),
    );
    let supplementary_ok = s1 == s2 && deviations(&s1).0 <= 0.5;
    let regression_ok = repeat && stable && supplementary_ok;
    let fmt = |xs: &[f64]| {
        xs.iter()
            .map(|x| format!("{x:.3}"))
            .collect::<Vec<_>>()
            .join(",")
    };
    let series: Vec<String> = a
        .iter()
        .zip(&devs)
        .map(|((n, xs), d)| {
            format!(
                "{n} [{}] dev from mean {:.2} (median {:.2})",
                fmt(xs),
                d.0,
                d.1
            )
        })
        .collect();
    let detail = format!(
        "weighted-sum ratios {} (repeat identical: {repeat}, within 50% of the mean: {stable}); \
         per-segment ratios: {qualifying} of {segments} segments satisfy the hypotheses for r <= 1024 \
         (longest segment {longest} points, 91 needed); supplementary R=1e6 ratios [{}] repeat identical: {}",
        series.join(" "),
        fmt(&s1),
        s1 == s2
    );
    (
        outcome(regression_ok && qualifying > 0, detail),
        regression_ok,
    )
}

fn criterion_10() -> Outcome {
    let start = Instant::now();
    let mut ok = true;
    let mut parts = Vec::new();
    for big_r in [1e4, 1e5, 1e6] {
        let fd = farey(big_r);
        let (_, pyth) = verify_pyth(&fd);
        let slim = verify_slim(&fd);
        let k = verify_k_lower_bound(&fd).unwrap();
        ok &= pyth && slim.ok && k.ratio >= K_RATIO_FLOOR;
        parts.push(format!(
            "R={big_r:e}: pyth {pyth}, slim {:.2e}<={:.2e}, K ratio {:.2}",
            slim.max_deviation, slim.bound, k.ratio
        ));
        if big_r == 1e6 {
            let c = verify_cap_condition(&fd, big_r, [0.25, 4.0]).unwrap();
            ok &= c.within_bracket;
            parts.push(format!("cap ratios in [{:.3}, {:.3}]", c.min, c.max));
        }
    }
    let secs = start.elapsed().as_secs_f64();
    outcome(
        ok && secs < 300.0,
        format!("{}, {secs:.1}s", parts.join("; ")),
    )
}

/// Number of `n` in `[lo, hi]` that are sums of three squares.
fn three_square_values(lo: i64, hi: i64) -> usize {
    (lo..=hi)
        .filter(|&n| {
            let mut m = n;
            while m > 0 && m % 4 == 0 {
                m /= 4;
            }
            m % 8 != 7
        })
        .count()
}

fn criterion_11() -> Outcome {
    let mut ok = true;
    let mut checks = 0;
    let norms = [
        (3, "euclidean"),
        (4, "euclidean"),
        (3, "ellipsoid:1,1.3,1.7"),
        (3, "pnorm:1.5"),
        (4, "pnorm:1.25"),
    ];
    for (dim, norm) in norms {
        let spec = NormSpec::parse(dim, norm).unwrap();
        for big_r in [8.0, 20.0, 40.0] {
            ok &= verify_cs_inequality(&spec, big_r, None).is_ok();
            checks += 1;
            let mut values: Vec<f64> = shell_points(dim, big_r)
                .unwrap()
                .iter()
                .map(|k| spec.rho(k))
                .collect();
            values.sort_by(f64::total_cmp);
            let card = values.len() as u128;
            for eps in [0.0, 0.25 / big_r, 1.0 / big_r, 0.1, 0.5] {
                ok &= card * card
                    <= 3 * m_eps(&values, eps) as u128 * sigma_sum(&values, eps) as u128;
                checks += 1;
            }
        }
    }
    let euclid = NormSpec::parse(3, "euclidean").unwrap();
    let mut oracle_ok = true;
    for big_r in (4..=60).step_by(4) {
        let r = big_r as f64;
        let s = verify_cs_inequality(&euclid, r, None).unwrap();
        oracle_ok &=
            s.distinct_values == three_square_values((big_r * big_r + 3) / 4, big_r * big_r);
    }
    let diag: Vec<f64> = [20.0, 30.0, 40.0, 60.0]
        .iter()
        .map(|&r| verify_cs_inequality(&euclid, r, None).unwrap().diagnostic)
        .collect();
    let monotone = diag.windows(2).all(|w| w[1] >= w[0]);
    let floor = diag.iter().all(|&x| x >= DIAGNOSTIC_FLOOR);
    outcome(
        ok && oracle_ok && monotone && floor,
        format!(
            "{checks} inequality checks hold: {ok}; m_0 equals the three-squares count: {oracle_ok}; \
             diagnostic {diag:.3?} nondecreasing: {monotone}, >= {DIAGNOSTIC_FLOOR}: {floor}"
        ),
    )
}

fn criterion_12() -> Outcome {
    let d = ConvexDomain::disk(1.0).unwrap();
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(1)
        .build()
        .unwrap();
    let (count, secs) = pool.install(|| {
        let t = Instant::now();
        (
            count_lattice_points(&d, 1e5).unwrap(),
            t.elapsed().as_secs_f64(),
        )
    });
    let fast = bilinear_k(&d, 200.0, 14.0, true).unwrap();
    let slow = bilinear_k_direct(&d, 200.0, 14.0, true).unwrap();
    let rel = (fast.value / slow.value - 1.0).abs();
    let (windowed, direct, n) = bilinear_timing(&d, 1e3, 1e3f64.sqrt(), 256).unwrap();
    let speedup = direct / windowed;
    outcome(
        secs < 1.0 && rel <= 1e-6 && fast.pairs == slow.pairs && speedup >= 10.0,
        format!(
            "N(1e5) = {count} in {secs:.3}s on one thread; windowed vs direct K at R=200 rel {rel:.1e}; \
             speedup {speedup:.0}x at R=1000 ({n} points)"
        ),
    )
}

fn run_cli(args: &[&str], out: &Path) -> bool {
    Command::new(env!("CARGO_BIN_EXE_ldl"))
        .args(["--seed", "7", "--threads", "2", "--output"])
        .arg(out)
        .args(args)
        .status()
        .map(|s| s.success())
        .unwrap_or(false)
}

fn criterion_13() -> Outcome {
    let dir = tempfile::tempdir().unwrap();
    let runs: &[&[&str]] = &[
        &[
            "count",
            "--domain",
            "ellipse:2,1",
            "--t",
            "37.5",
            "--out",
            "json",
        ],
        &[
            "discrepancy",
            "--domain",
            "disk:1",
            "--R",
            "100",
            "--h",
            "10",
        ],
        &[
            "study",
            "--domains",
            "disk:1;superellipse:1.5,1.5",
            "--R",
            "64,128,256",
        ],
        &[
            "caps",
            "--domain",
            "superellipse:1.5,1.5",
            "--n-theta",
            "24",
        ],
        &[
            "annulus",
            "--domain",
            "ellipse:2,1",
            "--r",
            "60",
            "--h",
            "8",
            "--segments",
            "--hull",
        ],
        &["bilinear", "--domain", "disk:1", "--R", "60", "--h", "8"],
        &[
            "sums", "--domain", "disk:1", "--R", "40", "--h", "6", "--n", "1", "--which", "btilde",
        ],
        &["farey", "--R", "1e4", "--eps", "0.5"],
        &["distance", "--dim", "3", "--R", "20"],
        &[
            "rotation-study",
            "--domain",
            "superellipse:1.5,1.5",
            "--samples",
            "8",
            "--R",
            "64,128",
        ],
    ];
    let mut bad = Vec::new();
    for (i, args) in runs.iter().enumerate() {
        let (a, b) = (
            dir.path().join(format!("{i}a")),
            dir.path().join(format!("{i}b")),
        );
        let same = run_cli(args, &a)
            && run_cli(args, &b)
            && std::fs::read(&a).unwrap() == std::fs::read(&b).unwrap();
        if !same {
            bad.push(args[0]);
        }
    }
    outcome(
        bad.is_empty(),
        format!("{} subcommands run twice, differing: {bad:?}", runs.len()),
    )
}

fn main() {
    let mut rng = StdRng::seed_from_u64(20240611);
    let os = oracles();
    let mut results: Vec<(u32, Outcome)> = Vec::new();
    let mut hard_fail = false;
    let mut clock = Instant::now();
    let mut report = |n: u32, o: Outcome, results: &mut Vec<(u32, Outcome)>| {
        let status = if o.ok { "PASS" } else { "FAIL" };
        let note = if !o.ok && KNOWN_UNATTAINABLE.contains(&n) {
            " (known unattainable)"
        } else {
            ""
        };
        println!(
            "criterion {n:>2}: {status}{note}  [{:.1}s] {}",
            clock.elapsed().as_secs_f64(),
            o.detail
        );
        clock = Instant::now();
        results.push((n, o));
    };
    report(1, criterion_1(&mut rng, &os), &mut results);
    report(2, criterion_2(&mut rng, &os), &mut results);
    report(3, criterion_3(), &mut results);
    report(4, criterion_4(&mut rng, &os), &mut results);
    report(5, criterion_5(), &mut results);
    let (c6, c7) = criteria_6_7();
    report(6, c6, &mut results);
    report(7, c7, &mut results);
    report(8, criterion_8(&mut rng), &mut results);
    let (c9, regression_ok) = criterion_9();
    hard_fail |= !regression_ok;
    report(9, c9, &mut results);
    report(10, criterion_10(), &mut results);
    report(11, criterion_11(), &mut results);
    report(12, criterion_12(), &mut results);
    report(13, criterion_13(), &mut results);
    let passed = results.iter().filter(|r| r.1.ok).count();
    println!("{passed}/{} criteria pass", results.len());
    hard_fail |= results
        .iter()
        .any(|(n, o)| !o.ok && !KNOWN_UNATTAINABLE.contains(n));
    if hard_fail {
        std::process::exit(1);
    }
}
