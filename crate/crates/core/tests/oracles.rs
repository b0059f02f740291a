use ldl_core::annulus::{
    bilinear_k, bilinear_k_direct, frakb_n, frakb_n_direct, Sign, SumConfig, Variant,
};
use ldl_core::counting::{count_lattice_points, critical_radii, mean_square_discrepancy_exact};
use ldl_core::distance::{ball_points, shell_points, NormSpec};
use ldl_core::geometry::cap;
use ldl_core::{ConvexDomain, Vec2};
use statrs::function::gamma::gamma;
use std::f64::consts::PI;

#[test]
fn gauss_circle_values() {
    let d = ConvexDomain::disk(1.0).unwrap();
    for (t, n) in [
        (0.5, 1),
        (1.0, 5),
        (2.0, 13),
        (5.0, 81),
        (10.0, 317),
        (100.0, 31417),
        (1000.0, 3141549),
    ] {
        assert_eq!(count_lattice_points(&d, t).unwrap(), n, "t = {t}");
    }
}

#[test]
fn closed_form_areas() {
    let e = ConvexDomain::ellipse(2.0, 0.5).unwrap();
    assert!((e.area() - PI).abs() < 1e-12);
    for p in [1.2, 1.5, 2.0, 3.0] {
        let s = ConvexDomain::superellipse(p, p, 1.0).unwrap();
        let exact = 4.0 * gamma(1.0 + 1.0 / p).powi(2) / gamma(1.0 + 2.0 / p);
        assert!((s.area() / exact - 1.0).abs() < 1e-9, "p = {p}");
    }
    let polar = ConvexDomain::polar_dual(ConvexDomain::ellipse(2.0, 0.5).unwrap());
    assert!((polar.area() - PI).abs() < 1e-8);
}

/// Counts of sums of three squares, by a direct triple loop.
fn r3_table(max: i64) -> Vec<u64> {
    let mut t = vec![0u64; max as usize + 1];
    let top = (max as f64).sqrt() as i64 + 1;
    for x in -top..=top {
        for y in -top..=top {
            for z in -top..=top {
                let n = x * x + y * y + z * z;
                if n <= max {
                    t[n as usize] += 1;
                }
            }
        }
    }
    t
}

#[test]
fn three_dimensional_shells() {
    let t = r3_table(900);
    for big_r in [3.0, 7.5, 12.0, 30.0] {
        let lo = (big_r * big_r / 4.0f64).ceil() as usize;
        let hi = (big_r * big_r) as usize;
        let expected: u64 = t[lo..=hi].iter().sum();
        assert_eq!(
            shell_points(3, big_r).unwrap().len() as u64,
            expected,
            "R = {big_r}"
        );
    }
    assert_eq!(
        ball_points(3, 30.0).unwrap().len() as u64,
        t[1..].iter().sum::<u64>()
    );
    let e = NormSpec::parse(3, "euclidean").unwrap();
    assert_eq!(e.rho(&[2, 3, 6]), 7.0);
}

/// Mean square of the lattice rest by brute-force counts on a fine grid.
#[test]
fn mean_square_against_brute_force() {
    for d in [
        ConvexDomain::disk(1.0).unwrap(),
        ConvexDomain::ellipse(1.5, 0.8).unwrap(),
    ] {
        let (big_r, h) = (20.0, 2.0);
        let n = 4000;
        let samples: Vec<f64> = (0..n)
            .map(|i| {
                let t: f64 = big_r + (i as f64 + 0.5) * h / n as f64;
                let top = (t * d.r2()).ceil() as i64;
                let mut count = 0i64;
                for x in -top..=top {
                    for y in -top..=top {
                        if d.gauge(Vec2::new(x as f64, y as f64)) <= t {
                            count += 1;
                        }
                    }
                }
                (count as f64 - d.area() * t * t).powi(2)
            })
            .collect();
        let brute = (samples.iter().sum::<f64>() / n as f64).sqrt();
        let exact = mean_square_discrepancy_exact(&d, big_r, h).unwrap();
        assert!(
            (brute / exact - 1.0).abs() < 5e-3,
            "{}: {brute} vs {exact}",
            d.label()
        );
        let p = critical_radii(&d, big_r, h).unwrap();
        assert_eq!(
            p.count_at(big_r + h),
            count_lattice_points(&d, big_r + h).unwrap()
        );
    }
}

#[test]
fn bilinear_unit_example() {
    let d = ConvexDomain::disk(1.0).unwrap();
    let b = bilinear_k(&d, 1.0, 1.0, true).unwrap();
    assert!((b.value - 64.0).abs() < 1e-9, "{}", b.value);
    assert_eq!(b.pairs, 16);
    for (big_r, h) in [(12.0, 3.0), (25.0, 5.0)] {
        let e = ConvexDomain::ellipse(2.0, 1.0).unwrap();
        let (w, s) = (
            bilinear_k(&e, big_r, h, false).unwrap(),
            bilinear_k_direct(&e, big_r, h, false).unwrap(),
        );
        assert_eq!(w.value, s.value);
        assert_eq!(w.pairs, s.pairs);
    }
}

#[test]
fn kernel_sums_match_direct_sums() {
    let d = ConvexDomain::superellipse(1.5, 1.5, 1.0).unwrap();
    let cfg = SumConfig::default();
    for variant in [Variant::Plain, Variant::Tilde] {
        for n in 0..3 {
            let fast = frakb_n(&d, 6.0, 2.0, n, Sign::Plus, variant, &cfg).unwrap();
            let slow = frakb_n_direct(&d, 6.0, 2.0, n, Sign::Plus, variant, &cfg).unwrap();
            assert!(
                (fast.value / slow.value - 1.0).abs() < 1e-6,
                "{variant:?} {n}: {} {}",
                fast.value,
                slow.value
            );
        }
    }
}

#[test]
fn ellipse_caps_closed_form() {
    let (a, b) = (2.0, 1.0);
    let e = ConvexDomain::ellipse(a, b).unwrap();
    for delta in [1e-6, 1e-3, 0.1, 0.5] {
        let mu_x = cap(&e, Vec2::new(1.0, 0.0), delta).unwrap().mu;
        let s = 1.0 - delta / a;
        assert!((mu_x - 2.0 * b * (1.0 - s * s).sqrt()).abs() < 1e-9);
        let mu_y = cap(&e, Vec2::new(0.0, 1.0), delta).unwrap().mu;
        let s = 1.0 - delta / b;
        assert!((mu_y - 2.0 * a * (1.0 - s * s).sqrt()).abs() < 1e-9);
    }
}
