use crate::output::{csv_table, emit, json, Format};
use crate::settings::{number_list, Settings};
use crate::{Cli, Command, Fail};
use ldl_core::annulus::{
    self, chain_vertex_bound_check, frakb_n, gamma_n, hull_extreme_points, prop24_rhs,
    segment_decomposition, IntervalKind, Sign, SumConfig, Variant,
};
use ldl_core::constructions::{self, FareyDomainParams, DEFAULT_C0};
use ldl_core::counting::{self, HRule};
use ldl_core::distance::{verify_cs_inequality, NormSpec};
use ldl_core::geometry::{cap, curvature_ratio_sup};
use ldl_core::numeric::log_space;
use ldl_core::{parse_domain_with_c0, ConvexDomain, Vec2};
use serde::Serialize;
use std::f64::consts::TAU;
use std::path::Path;

struct Ctx {
    cfg: Settings,
    seed: u64,
    c0: f64,
}

impl Ctx {
    fn domain(&self, flag: Option<String>) -> Result<ConvexDomain, Fail> {
        let spec: String = self.cfg.req(flag, "domain")?;
        Ok(parse_domain_with_c0(&spec, self.c0)?)
    }
}

fn parsed<T: std::str::FromStr<Err = ldl_core::LdlError>>(s: &str) -> Result<T, Fail> {
    Ok(s.parse::<T>()?)
}

pub fn run(cli: Cli) -> Result<(), Fail> {
    let cfg = Settings::load(cli.config.as_deref())?;
    let threads = cfg.opt(cli.threads, "threads")?;
    let seed = cfg.or(cli.seed, "seed", 0)?;
    let output: Option<std::path::PathBuf> = cfg.opt(cli.output, "output")?;
    let c0 = cfg.or(None, "C0", DEFAULT_C0)?;
    let ctx = Ctx { cfg, seed, c0 };
    let mut pool = rayon::ThreadPoolBuilder::new();
    if let Some(n) = threads {
        if n == 0 {
            return Err(Fail::Usage("--threads must be positive".into()));
        }
        pool = pool.num_threads(n);
    }
    let pool = pool.build().map_err(|e| Fail::Io(e.to_string()))?;
    let text = pool.install(|| dispatch(&ctx, cli.command))?;
    emit(output.as_deref().map(Path::new), &text)
}

fn dispatch(ctx: &Ctx, command: Command) -> Result<String, Fail> {
    match command {
        Command::Count(a) => count(ctx, a),
        Command::Discrepancy(a) => discrepancy(ctx, a),
        Command::Study(a) => study(ctx, a),
        Command::Caps(a) => caps(ctx, a),
        Command::Annulus(a) => annulus_cmd(ctx, a),
        Command::Bilinear(a) => bilinear(ctx, a),
        Command::Sums(a) => sums(ctx, a),
        Command::Farey(a) => farey(ctx, a),
        Command::Distance(a) => distance(ctx, a),
        Command::RotationStudy(a) => rotation(ctx, a),
    }
}

fn format(
    ctx: &Ctx,
    flag: Option<Format>,
    default: Format,
    allowed: &[Format],
) -> Result<Format, Fail> {
    let f = ctx.cfg.or(flag, "out", default)?;
    if !allowed.contains(&f) {
        return Err(Fail::Usage(format!(
            "output format {f:?} is not available here"
        )));
    }
    Ok(f)
}

fn count(ctx: &Ctx, a: crate::CountArgs) -> Result<String, Fail> {
    let d = ctx.domain(a.domain)?;
    let t: f64 = ctx.cfg.req(a.t, "t")?;
    let n = counting::count_lattice_points(&d, t)?;
    let rest = n as f64 - t * t * d.area();
    #[derive(Serialize)]
    struct Row<'a> {
        domain: &'a str,
        t: f64,
        count: u64,
        area: f64,
        lattice_rest: f64,
    }
    let row = Row {
        domain: d.label(),
        t,
        count: n,
        area: d.area(),
        lattice_rest: rest,
    };
    match format(
        ctx,
        a.out,
        Format::Text,
        &[Format::Text, Format::Csv, Format::Json],
    )? {
        Format::Text => Ok(format!("{n}\n")),
        Format::Json => json(&row),
        Format::Csv => csv_table(
            &["domain", "t", "count", "area", "lattice_rest"],
            &[vec![
                row.domain.to_string(),
                t.to_string(),
                n.to_string(),
                row.area.to_string(),
                rest.to_string(),
            ]],
        ),
    }
}

fn discrepancy(ctx: &Ctx, a: crate::DiscrepancyArgs) -> Result<String, Fail> {
    let d = ctx.domain(a.domain)?;
    let big_r: f64 = ctx.cfg.req(a.big_r, "R")?;
    let h: f64 = ctx.cfg.req(a.h, "h")?;
    let method: String = ctx.cfg.or(a.method, "method", "exact".to_string())?;
    let samples: usize = ctx.cfg.or(a.samples, "samples", 10_000)?;
    let profile = counting::critical_radii(&d, big_r, h)?;
    let g = match method.as_str() {
        "exact" => profile.g_exact(),
        "sampled" => {
            if samples < 2 {
                return Err(Fail::Usage("--samples must be at least 2".into()));
            }
            profile.g_sampled(samples)
        }
        _ => return Err(Fail::Usage(format!("unknown method '{method}'"))),
    };
    #[derive(Serialize)]
    struct Out<'a> {
        domain: &'a str,
        #[serde(rename = "R")]
        big_r: f64,
        h: f64,
        method: &'a str,
        #[serde(rename = "G")]
        g: f64,
        max_abs_e: f64,
        anchor: u64,
        critical_radii: &'a [counting::CriticalRadius],
    }
    let out = Out {
        domain: d.label(),
        big_r,
        h,
        method: &method,
        g,
        max_abs_e: profile.max_abs_error(),
        anchor: profile.anchor,
        critical_radii: &profile.critical_radii,
    };
    match format(ctx, a.out, Format::Json, &[Format::Csv, Format::Json])? {
        Format::Csv => csv_table(
            &[
                "domain",
                "R",
                "h",
                "method",
                "G",
                "max_abs_e",
                "critical_radii",
            ],
            &[vec![
                out.domain.to_string(),
                big_r.to_string(),
                h.to_string(),
                method.clone(),
                g.to_string(),
                out.max_abs_e.to_string(),
                profile.critical_radii.len().to_string(),
            ]],
        ),
        _ => json(&out),
    }
}

fn study(ctx: &Ctx, a: crate::StudyArgs) -> Result<String, Fail> {
    let domains: Vec<String> = if a.domains.is_empty() {
        let raw: String = ctx.cfg.req(None, "domains")?;
        raw.split(';').map(|s| s.trim().to_string()).collect()
    } else {
        a.domains
    };
    let r_list = number_list(&ctx.cfg.req::<String>(a.big_r, "R")?)?;
    let rule: HRule = parsed(&ctx.cfg.or(a.h_rule, "h-rule", "sqrtR".to_string())?)?;
    let mut studies = Vec::new();
    for spec in &domains {
        let d = parse_domain_with_c0(spec, ctx.c0)?;
        studies.push((
            d.label().to_string(),
            counting::scaling_study(&d, &r_list, rule)?,
        ));
    }
    match format(ctx, a.out, Format::Csv, &[Format::Csv, Format::Json])? {
        Format::Json => {
            #[derive(Serialize)]
            struct Entry<'a> {
                domain: &'a str,
                rows: &'a [counting::ScalingRow],
                slope: Option<f64>,
            }
            let e: Vec<Entry> = studies
                .iter()
                .map(|(l, s)| Entry {
                    domain: l,
                    rows: &s.rows,
                    slope: s.slope,
                })
                .collect();
            json(&e)
        }
        _ => {
            let mut rows = Vec::new();
            for (_, s) in &studies {
                let slope = s.slope.map(|x| x.to_string()).unwrap_or_default();
                for r in &s.rows {
                    rows.push(vec![
                        r.domain.clone(),
                        r.big_r.to_string(),
                        r.h.to_string(),
                        r.g.to_string(),
                        r.g_over_sqrt_r.to_string(),
                        r.g_over_sqrt_r_log_r.to_string(),
                        slope.clone(),
                    ]);
                }
            }
            csv_table(
                &[
                    "domain",
                    "R",
                    "h",
                    "G",
                    "G_over_sqrtR",
                    "G_over_sqrtRlogR",
                    "slope",
                ],
                &rows,
            )
        }
    }
}

fn caps(ctx: &Ctx, a: crate::CapsArgs) -> Result<String, Fail> {
    let d = ctx.domain(a.domain)?;
    let n_theta: usize = ctx.cfg.or(a.n_theta, "n-theta", 72)?;
    let deltas = match ctx.cfg.opt::<String>(a.deltas, "deltas")? {
        Some(s) => number_list(&s)?,
        None => log_space(1e-8 * d.r1(), 1e-1 * d.r1(), 8),
    };
    if n_theta == 0 {
        return Err(Fail::Usage("--n-theta must be positive".into()));
    }
    let profile = curvature_ratio_sup(&d, n_theta, &deltas)?;
    #[derive(Serialize)]
    struct Cell {
        theta: f64,
        delta: f64,
        mu: f64,
        mu_over_sqrt_delta: f64,
    }
    let mut grid = Vec::with_capacity(n_theta * deltas.len());
    for i in 0..n_theta {
        let angle = i as f64 * TAU / n_theta as f64;
        for &delta in &deltas {
            let mu = cap(&d, Vec2::from_angle(angle), delta)?.mu;
            grid.push(Cell {
                theta: angle,
                delta,
                mu,
                mu_over_sqrt_delta: mu / delta.sqrt(),
            });
        }
    }
    match format(ctx, a.out, Format::Csv, &[Format::Csv, Format::Json])? {
        Format::Json => {
            #[derive(Serialize)]
            struct Out<'a> {
                domain: &'a str,
                sup: f64,
                mu_star: &'a [(f64, f64)],
                grid: &'a [Cell],
            }
            json(&Out {
                domain: d.label(),
                sup: profile.sup,
                mu_star: &profile.per_theta,
                grid: &grid,
            })
        }
        _ => {
            let rows: Vec<Vec<String>> = grid
                .iter()
                .enumerate()
                .map(|(i, c)| {
                    vec![
                        c.theta.to_string(),
                        c.delta.to_string(),
                        c.mu.to_string(),
                        c.mu_over_sqrt_delta.to_string(),
                        profile.per_theta[i / deltas.len()].1.to_string(),
                    ]
                })
                .collect();
            csv_table(
                &["theta", "delta", "mu", "mu_over_sqrt_delta", "mu_star"],
                &rows,
            )
        }
    }
}

fn annulus_cmd(ctx: &Ctx, a: crate::AnnulusArgs) -> Result<String, Fail> {
    let d = ctx.domain(a.domain)?;
    let r: f64 = ctx.cfg.req(a.r, "r")?;
    let h: f64 = ctx.cfg.req(a.h, "h")?;
    let sign: Sign = parsed(&ctx.cfg.or(a.sign, "sign", "+".to_string())?)?;
    let kind: IntervalKind =
        parsed(&ctx.cfg.or(a.interval, "interval", "centered".to_string())?)?;
    let want_segments = ctx.cfg.flag(a.segments, "segments")?;
    let want_hull = ctx.cfg.flag(a.hull, "hull")?;
    let set = annulus::enumerate_annulus(&d, r, h, sign, kind)?;
    let fmt = format(ctx, a.out, Format::Json, &[Format::Csv, Format::Json])?;
    if fmt == Format::Csv {
        let rows: Vec<Vec<String>> = set
            .points
            .iter()
            .zip(&set.rho_star_values)
            .map(|(p, v)| vec![p.x.to_string(), p.y.to_string(), v.to_string()])
            .collect();
        return csv_table(&["x", "y", "rho_star"], &rows);
    }
    #[derive(Serialize)]
    struct Hull {
        extreme_points: Vec<ldl_core::LatticePoint>,
        chain: Option<annulus::ChainBound>,
    }
    #[derive(Serialize)]
    struct Out<'a> {
        set: &'a annulus::AnnulusLatticeSet,
        count: usize,
        #[serde(skip_serializing_if = "Option::is_none")]
        hull: Option<Hull>,
        #[serde(skip_serializing_if = "Option::is_none")]
        segments: Option<annulus::SegmentDecomposition>,
    }
    let hull = if want_hull {
        let ext = hull_extreme_points(&set.points);
        let chain = if ext.len() >= 3 {
            let mut closed = ext.clone();
            closed.push(ext[0]);
            Some(chain_vertex_bound_check(&closed[..closed.len() - 1])?)
        } else {
            None
        };
        Some(Hull {
            extreme_points: ext,
            chain,
        })
    } else {
        None
    };
    let segments = if want_segments {
        Some(segment_decomposition(&d, r, h)?)
    } else {
        None
    };
    json(&Out {
        count: set.len(),
        set: &set,
        hull,
        segments,
    })
}

fn bilinear(ctx: &Ctx, a: crate::BilinearArgs) -> Result<String, Fail> {
    let d = ctx.domain(a.domain)?;
    let big_r: f64 = ctx.cfg.req(a.big_r, "R")?;
    let h: f64 = ctx.cfg.req(a.h, "h")?;
    let diag = !ctx.cfg.flag(a.no_diagonal, "no-diagonal")?;
    let b = annulus::bilinear_k(&d, big_r, h, diag)?;
    #[derive(Serialize)]
    struct Out<'a> {
        domain: &'a str,
        #[serde(rename = "R")]
        big_r: f64,
        h: f64,
        include_diagonal: bool,
        #[serde(rename = "K")]
        k: annulus::Bilinear,
    }
    json(&Out {
        domain: d.label(),
        big_r,
        h,
        include_diagonal: diag,
        k: b,
    })
}

fn sums(ctx: &Ctx, a: crate::SumsArgs) -> Result<String, Fail> {
    let d = ctx.domain(a.domain)?;
    let big_r: f64 = ctx.cfg.req(a.big_r, "R")?;
    let h: f64 = ctx.cfg.req(a.h, "h")?;
    let which: String = ctx.cfg.req(a.which, "which")?;
    let sign: Sign = parsed(&ctx.cfg.or(a.sign, "sign", "+".to_string())?)?;
    let defaults = SumConfig::default();
    let config = SumConfig {
        n_exp: ctx.cfg.or(a.n_exp, "n-exp", defaults.n_exp)?,
        k_cutoff: ctx.cfg.or(a.k_cutoff, "k-cutoff", defaults.k_cutoff)?,
    };
    config.validate()?;
    #[derive(Serialize)]
    struct Out<'a> {
        domain: &'a str,
        which: &'a str,
        #[serde(rename = "R")]
        big_r: f64,
        h: f64,
        n: u32,
        sign: Sign,
        config: SumConfig,
        result: annulus::SumValue,
    }
    if which == "rhs24" {
        return json(&prop24_rhs(&d, big_r, h, &config)?);
    }
    let n: u32 = ctx.cfg.req(a.n, "n")?;
    let result = match which.as_str() {
        "gamma" => gamma_n(&d, big_r, h, n, sign, &config)?,
        "b" => frakb_n(&d, big_r, h, n, sign, Variant::Plain, &config)?,
        "btilde" => frakb_n(&d, big_r, h, n, sign, Variant::Tilde, &config)?,
        _ => return Err(Fail::Usage(format!("unknown sum '{which}'"))),
    };
    json(&Out {
        domain: d.label(),
        which: &which,
        big_r,
        h,
        n,
        sign,
        config,
        result,
    })
}

fn farey(ctx: &Ctx, a: crate::FareyArgs) -> Result<String, Fail> {
    let big_r: f64 = ctx.cfg.req(a.big_r, "R")?;
    let eps: f64 = ctx.cfg.req(a.eps, "eps")?;
    let r: Option<u32> = ctx.cfg.opt(a.r, "r")?;
    let c0: f64 = ctx.cfg.or(a.c0, "C0", ctx.c0)?;
    let verify: String = ctx.cfg.or(a.verify, "verify", "all".to_string())?;
    let bracket = match ctx.cfg.opt::<String>(a.bracket, "bracket")? {
        Some(s) => {
            let v = number_list(&s)?;
            if v.len() != 2 || !(v[0] < v[1]) {
                return Err(Fail::Usage("--bracket expects lo,hi with lo < hi".into()));
            }
            [v[0], v[1]]
        }
        None => [0.25, 4.0],
    };
    format(ctx, a.out, Format::Json, &[Format::Json])?;
    let (slim, caps, kbound) = match verify.as_str() {
        "slim" => (true, false, false),
        "caps" => (false, true, false),
        "kbound" => (false, false, true),
        "all" => (true, true, true),
        _ => return Err(Fail::Usage(format!("unknown check '{verify}'"))),
    };
    let params = FareyDomainParams::new(big_r, eps, r, c0)?;
    let fd = constructions::build_farey_domain(&params)?;
    let (pyth_rows, pyth_ok) = constructions::verify_pyth(&fd);
    #[derive(Serialize)]
    struct Out {
        params: FareyDomainParams,
        corners: Vec<constructions::FareyCorner>,
        constants: Option<constructions::FareyConstants>,
        pyth_ok: bool,
        pyth: Vec<constructions::PythRow>,
        #[serde(skip_serializing_if = "Option::is_none")]
        slim: Option<constructions::SlimCheck>,
        #[serde(skip_serializing_if = "Option::is_none")]
        caps: Option<constructions::CapCheck>,
        #[serde(skip_serializing_if = "Option::is_none")]
        kbound: Option<constructions::KLowerBound>,
    }
    json(&Out {
        params,
        constants: constructions::farey_constants(&fd),
        corners: fd.corners.clone(),
        pyth_ok,
        pyth: pyth_rows,
        slim: slim.then(|| constructions::verify_slim(&fd)),
        caps: if caps {
            Some(constructions::verify_cap_condition(&fd, big_r, bracket)?)
        } else {
            None
        },
        kbound: if kbound {
            Some(constructions::verify_k_lower_bound(&fd)?)
        } else {
            None
        },
    })
}

fn distance(ctx: &Ctx, a: crate::DistanceArgs) -> Result<String, Fail> {
    let dim: usize = ctx.cfg.req(a.dim, "dim")?;
    let big_r: f64 = ctx.cfg.req(a.big_r, "R")?;
    let norm: String = ctx.cfg.or(a.norm, "norm", "euclidean".to_string())?;
    let eps: Option<f64> = ctx.cfg.opt(a.eps, "eps")?;
    format(ctx, a.out, Format::Json, &[Format::Json])?;
    let spec = NormSpec::parse(dim, &norm)?;
    json(&verify_cs_inequality(&spec, big_r, eps)?)
}

fn rotation(ctx: &Ctx, a: crate::RotationArgs) -> Result<String, Fail> {
    let d = ctx.domain(a.domain)?;
    let samples: usize = ctx.cfg.or(a.samples, "samples", 32)?;
    let r_list = number_list(&ctx.cfg.req::<String>(a.big_r, "R")?)?;
    let eps: f64 = ctx.cfg.or(a.eps, "eps", 0.5)?;
    let s = counting::rotation_study(&d, samples, &r_list, ctx.seed, eps)?;
    match format(ctx, a.out, Format::Csv, &[Format::Csv, Format::Json])? {
        Format::Json => {
            #[derive(Serialize)]
            struct Out<'a> {
                domain: &'a str,
                seed: u64,
                eps: f64,
                study: &'a counting::RotationStudy,
            }
            json(&Out {
                domain: d.label(),
                seed: ctx.seed,
                eps,
                study: &s,
            })
        }
        _ => {
            let rows: Vec<Vec<String>> = s
                .rows
                .iter()
                .map(|r| {
                    vec![
                        r.sample.to_string(),
                        r.theta.to_string(),
                        r.big_r.to_string(),
                        r.g.to_string(),
                        r.normalized.to_string(),
                    ]
                })
                .collect();
            csv_table(&["sample", "theta", "R", "G", "normalized"], &rows)
        }
    }
}
