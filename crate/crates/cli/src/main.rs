use clap::{Args, Parser, Subcommand, ValueEnum};
use gtkit::complexfield::quad::{GVal, QuadConfig};
use gtkit::complexfield::suites::{
    barnes_sample, check_4g4_relations, check_barnes_instance, check_contiguous, check_gamma_properties, gl4_sample,
    random_hyp_params,
};
use gtkit::complexfield::{gamma_c, hyp_g, HypParams};
use gtkit::eigenfun::suites::{
    b_action_residual, b_action_suite, b_commutation_residual, eigen_residual, eigen_suite, homogeneity_suite,
    random_point, BCase, EigenConfig,
};
use gtkit::eigenfun::{Gl4Grid, PointZ, PsiEval};
use gtkit::kernels::suites::{c_conditions_suite, kernel_suite_for};
use gtkit::report::ResidualReport;
use gtkit::schemes::{DoubleIndex, GTScheme, Sector};
use gtkit::yangian::{
    check_antisymmetry, check_gt_commutative, check_minor_commutation, check_quantum_determinant, check_recurrences,
    check_rtt, CommRegime,
};
use num_complex::Complex64 as C;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};
use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

const SUITE_MAP: &str = include_str!("../suite_map.json");

#[derive(Parser, Debug)]
#[command(name = "gtkit", version, about = "Verification suites for Gelfand–Tsetlin bases of gl_n(C) principal series")]
struct Cli {
    #[command(flatten)]
    run: RunFlags,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Args, Debug, Clone, serde::Serialize)]
struct RunFlags {
    /// Scheme file (JSON: n, kappa, sigma {s, eta}, levels [{ints, reals}]).
    #[arg(long, global = true)]
    scheme: Option<PathBuf>,
    /// Integer-part cutoff of the Mellin–Barnes quadrature.
    #[arg(long, global = true)]
    kmax: Option<i64>,
    /// Nodes per imaginary direction of the Mellin–Barnes quadrature.
    #[arg(long, global = true)]
    vnodes: Option<usize>,
    /// Regulator schedule, comma separated and decreasing.
    #[arg(long, global = true, value_delimiter = ',')]
    eps: Option<Vec<f64>>,
    /// Seed of the ChaCha8 stream that draws samples and points
    #[arg(long, global = true, default_value_t = 1)]
    seed: u64,
    /// Tolerance: replaces the gate of a single suite; under `all` it only loosens.
    #[arg(long, global = true)]
    tol: Option<f64>,
    /// Add the n = 4 commutation suite
    #[arg(long, global = true)]
    deep: bool,
    /// Allow the gl_4 eigen-equations above level 1
    #[arg(long, global = true)]
    slow: bool,
    /// Write the JSON output here as well as to stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
}

#[derive(Copy, Clone, Debug, ValueEnum, serde::Serialize)]
enum IdSuite {
    Rtt,
    Recurrence,
    Commutation,
    Qdet,
    Antisym,
    Commutative,
}

#[derive(Args, Debug, Clone, Copy, serde::Serialize)]
struct GridFlags {
    /// Integer cutoff of the gl_4 eigenfunction grid.
    #[arg(long, default_value_t = 0)]
    grid_kmax: i64,
    /// Nodes per imaginary direction of the gl_4 eigenfunction grid.
    #[arg(long, default_value_t = 4)]
    grid_vnodes: usize,
}

#[derive(Subcommand, Debug)]
enum Cmd {
    /// Exact Weyl-algebra identity suites.
    Identities {
        #[arg(long)]
        rank: usize,
        #[arg(long, value_enum)]
        suite: IdSuite,
    },
    /// Γ^C at one point (`--mu a,abar`) or the property suite.
    GammaC {
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
        mu: Option<Vec<String>>,
        #[arg(long, default_value_t = 1000)]
        points: usize,
    },
    /// pGp(z) for `--a hol/anti` and `--b hol/anti`, each repeated p times.
    HypG {
        #[arg(long, required = true, allow_hyphen_values = true)]
        a: Vec<String>,
        #[arg(long, required = true, allow_hyphen_values = true)]
        b: Vec<String>,
        #[arg(long, allow_hyphen_values = true)]
        z: String,
    },
    /// Contiguous relations at random parameters; at p = 4, z = 1 also the 4G4 relations.
    Contiguous {
        #[arg(long, default_value_t = 4)]
        p: usize,
        #[arg(long, default_value = "1", allow_hyphen_values = true)]
        z: String,
    },
    /// The finite-ε Barnes-type instance at ε and ε/2; ε is the first `--eps` value (default 0.25).
    Barnes,
    /// Kernel difference equations at random lattice samples.
    Kernel {
        #[arg(long)]
        rank: usize,
        #[arg(long)]
        samples: Option<usize>,
    },
    /// Evaluate the eigenfunction of `--scheme` at one point.
    Psi {
        #[arg(long)]
        rank: usize,
        #[arg(long, allow_hyphen_values = true)]
        point: String,
        #[command(flatten)]
        grid: GridFlags,
    },
    /// Eigen-equation `A_m(u)Ψ = Π(u − λ_mk)Ψ` at random points, both sectors.
    Eigen {
        #[arg(long)]
        rank: usize,
        #[arg(long)]
        level: usize,
        #[arg(long, default_value_t = 10)]
        points: usize,
        #[command(flatten)]
        grid: GridFlags,
    },
    /// B-operator actions on the eigenfunctions (ranks 2 and 3).
    BAction {
        #[arg(long)]
        rank: usize,
        /// all | B1 | B2:1 | B2:2 | B113 | B213 | B223 | B2B2
        #[arg(long, default_value = "all")]
        case: String,
        #[arg(long, default_value_t = 3)]
        points: usize,
    },
    /// Every default suite in a fixed order.
    All,
    /// Print the suite-to-relation manifest.
    Manifest,
}

enum Output {
    Report(ResidualReport),
    Value(Value, bool),
}

fn quad_config(f: &RunFlags) -> Result<QuadConfig, String> {
    let mut q = QuadConfig::default();
    if let Some(k) = f.kmax {
        q.k_max = k;
    }
    if let Some(v) = f.vnodes {
        q.v_nodes = v;
    }
    if let Some(e) = &f.eps {
        q.eps_schedule = e.clone();
    }
    q.validate().map_err(|e| e.to_string())?;
    Ok(q)
}

fn eigen_config(f: &RunFlags, g: GridFlags) -> Result<EigenConfig, String> {
    let mut cfg = EigenConfig { quad: quad_config(f)?, ..EigenConfig::default() };
    cfg.grid = Gl4Grid {
        k_max: g.grid_kmax,
        v_nodes: g.grid_vnodes,
        eps_schedule: f.eps.clone().unwrap_or_default(),
        ..Gl4Grid::default()
    };
    Ok(cfg)
}

fn load_scheme(f: &RunFlags) -> Result<Option<GTScheme>, String> {
    match &f.scheme {
        None => Ok(None),
        Some(p) => {
            let text =
                std::fs::read_to_string(p).map_err(|e| format!("cannot read scheme file {}: {e}", p.display()))?;
            GTScheme::from_json(&text).map(Some).map_err(|e| format!("bad scheme file {}: {e}", p.display()))
        }
    }
}

fn parse_c(s: &str) -> Result<C, String> {
    s.trim().replace(' ', "").parse::<C>().map_err(|_| format!("bad complex number {s:?}"))
}

fn parse_di(s: &str) -> Result<DoubleIndex, String> {
    match s.split_once('/') {
        Some((h, a)) => Ok(DoubleIndex::new(parse_c(h)?, parse_c(a)?)),
        None => Ok(DoubleIndex::diag(parse_c(s)?)),
    }
}

fn gval_json(g: &GVal) -> Value {
    json!({ "re": g.value.re, "im": g.value.im, "abs_err": g.abs_err, "flags": g.flags })
}

fn tol_or(f: &RunFlags, default: f64) -> f64 {
    f.tol.unwrap_or(default)
}

fn identities(rank: usize, suite: IdSuite) -> ResidualReport {
    match suite {
        IdSuite::Rtt => check_rtt(rank),
        IdSuite::Recurrence => check_recurrences(rank),
        IdSuite::Commutation => {
            let mut regimes = vec![CommRegime::Below, CommRegime::Above, CommRegime::Disjoint];
            if rank >= 4 {
                regimes.push(CommRegime::LengthTwo);
            }
            check_minor_commutation(rank, &regimes)
        }
        IdSuite::Qdet => check_quantum_determinant(rank),
        IdSuite::Antisym => check_antisymmetry(rank, rank),
        IdSuite::Commutative => check_gt_commutative(rank),
    }
}

fn parse_case(s: &str) -> Result<Vec<BCaseOrComm>, String> {
    let root = |r, i| BCaseOrComm::Case(BCase::Root { r, i });
    let comp = |r, a, b| BCaseOrComm::Case(BCase::Composite { r, a, b });
    Ok(match s {
        "B1" => vec![root(1, 1)],
        "B2:1" => vec![root(2, 1)],
        "B2:2" => vec![root(2, 2)],
        "B113" => vec![comp(1, 1, 3)],
        "B213" => vec![comp(2, 1, 3)],
        "B223" => vec![comp(2, 2, 3)],
        "B2B2" => vec![BCaseOrComm::Comm],
        other => return Err(format!("unknown B case {other:?}")),
    })
}

enum BCaseOrComm {
    Case(BCase),
    Comm,
}

fn sample_scheme_and_points(
    f: &RunFlags,
    rank: usize,
    points: usize,
    cfg: &EigenConfig,
) -> Result<(GTScheme, Vec<PointZ>), String> {
    let mut rng = ChaCha8Rng::seed_from_u64(f.seed);
    let s = match load_scheme(f)? {
        Some(s) if s.n() == rank => s,
        Some(s) => return Err(format!("scheme file has rank {}, expected {rank}", s.n())),
        None => gtkit::kernels::suites::random_scheme(&mut rng, rank, 2, 2.0),
    };
    let pts = (0..points).map(|_| random_point(&mut rng, rank, cfg)).collect();
    Ok((s, pts))
}

fn run(cli: &Cli) -> Result<Output, String> {
    let f = &cli.run;
    let out = match &cli.cmd {
        Cmd::Manifest => Output::Value(serde_json::from_str(SUITE_MAP).map_err(|e| e.to_string())?, false),
        Cmd::Identities { rank, suite } => {
            if !(2..=6).contains(rank) {
                return Err(format!("rank {rank} outside 2..=6"));
            }
            Output::Report(identities(*rank, *suite))
        }
        Cmd::GammaC { mu, points } => match mu {
            Some(v) => {
                if v.len() != 2 {
                    return Err("--mu takes a,abar".into());
                }
                let d = DoubleIndex::checked(parse_c(&v[0])?, parse_c(&v[1])?).map_err(|e| e.to_string())?;
                let g = gamma_c(d).map_err(|e| e.to_string())?;
                Output::Value(gval_json(&GVal::exact(g)), false)
            }
            None => Output::Report(check_gamma_properties(*points, f.seed, tol_or(f, 1e-12))),
        },
        Cmd::HypG { a, b, z } => {
            let pa = a.iter().map(|s| parse_di(s)).collect::<Result<Vec<_>, _>>()?;
            let pb = b.iter().map(|s| parse_di(s)).collect::<Result<Vec<_>, _>>()?;
            let p = HypParams::new(pa, pb).map_err(|e| e.to_string())?;
            let g = hyp_g(&p, parse_c(z)?, &quad_config(f)?).map_err(|e| e.to_string())?;
            let warn = !g.flags.is_empty();
            Output::Value(gval_json(&g), warn)
        }
        Cmd::Contiguous { p, z } => {
            let cfg = quad_config(f)?;
            let z = parse_c(z)?;
            let tol = tol_or(f, 1e-6);
            let (params, _) = random_hyp_params(*p, z, f.seed, &cfg).map_err(|e| e.to_string())?;
            let mut rep = ResidualReport::new("contiguous");
            rep.extend(check_contiguous(&params, z, &cfg, tol));
            if *p == 4 && (z - 1.0).norm() == 0.0 {
                rep.extend(check_4g4_relations(&gl4_sample(), &cfg, tol));
            }
            Output::Report(rep)
        }
        Cmd::Barnes => {
            let (lams, lamps) = barnes_sample();
            let eps = f.eps.as_ref().and_then(|e| e.first().copied()).unwrap_or(0.25);
            Output::Report(check_barnes_instance(lams, lamps, eps, &quad_config(f)?, tol_or(f, 1e-6), 1e-4))
        }
        Cmd::Kernel { rank, samples } => {
            let cfg = quad_config(f)?;
            let s = load_scheme(f)?;
            let (n, tol) = if *rank == 3 { (20, 1e-10) } else { (5, 1e-6) };
            let mut rep = kernel_suite_for(*rank, s.as_ref(), samples.unwrap_or(n), f.seed, &cfg, tol_or(f, tol));
            if *rank == 4 {
                let c = match &s {
                    Some(s) => gtkit::kernels::suites::residual_c_conditions(s, 1e-10),
                    None => c_conditions_suite(10, f.seed, 1e-10),
                };
                rep.extend(c);
            }
            Output::Report(rep)
        }
        Cmd::Psi { rank, point, grid } => {
            let s = load_scheme(f)?.ok_or("psi needs --scheme")?;
            if s.n() != *rank {
                return Err(format!("scheme file has rank {}, expected {rank}", s.n()));
            }
            let p = PointZ::parse(*rank, point)?;
            let cfg = eigen_config(f, *grid)?;
            let ev = PsiEval::new(&s, &cfg.grid, &cfg.quad).map_err(|e| e.to_string())?;
            let g = ev.eval(&p).map_err(|e| e.to_string())?;
            let warn = !g.flags.is_empty() || ev.skipped_nodes() > 0;
            Output::Value(json!({ "value": gval_json(&g), "skipped_nodes": ev.skipped_nodes(), "point": p }), warn)
        }
        Cmd::Eigen { rank, level, points, grid } => {
            if *rank == 4 && (2..4).contains(level) && !f.slow {
                return Err(format!("rank-4 level {level} needs --slow"));
            }
            let cfg = eigen_config(f, *grid)?;
            let tol = tol_or(f, eigen_tol(*rank, *level));
            let (s, pts) = sample_scheme_and_points(f, *rank, *points, &cfg)?;
            let mut rep = ResidualReport::new(format!("eigen-gl{rank}"));
            for sector in Sector::BOTH {
                rep.extend(eigen_residual(&s, *level, sector, &pts, &cfg, tol));
            }
            Output::Report(rep)
        }
        Cmd::BAction { rank, case, points } => {
            let cfg = eigen_config(f, GridFlags { grid_kmax: 0, grid_vnodes: 4 })?;
            let tol = tol_or(f, 1e-5);
            if case == "all" {
                if f.scheme.is_none() {
                    Output::Report(b_action_suite(*rank, 1, *points, f.seed, &cfg, tol))
                } else {
                    let (s, pts) = sample_scheme_and_points(f, *rank, *points, &cfg)?;
                    let mut rep = ResidualReport::new(format!("b-action-gl{rank}"));
                    for sector in Sector::BOTH {
                        for c in BCase::all(*rank) {
                            rep.extend(b_action_residual(&s, c, sector, &pts, &cfg, tol));
                        }
                        if *rank == 3 {
                            rep.extend(b_commutation_residual(&s, sector, &pts, &cfg, tol));
                        }
                    }
                    Output::Report(rep)
                }
            } else {
                let (s, pts) = sample_scheme_and_points(f, *rank, *points, &cfg)?;
                let mut rep = ResidualReport::new(format!("b-action-gl{rank}"));
                for c in parse_case(case)? {
                    for sector in Sector::BOTH {
                        rep.extend(match c {
                            BCaseOrComm::Case(c) => b_action_residual(&s, c, sector, &pts, &cfg, tol),
                            BCaseOrComm::Comm => b_commutation_residual(&s, sector, &pts, &cfg, tol),
                        });
                    }
                }
                Output::Report(rep)
            }
        }
        Cmd::All => Output::Report(run_all(f)?),
    };
    Ok(out)
}

fn eigen_tol(rank: usize, level: usize) -> f64 {
    match (rank, level) {
        (2, _) => 1e-8,
        (3, _) => 1e-5,
        (_, 1) => 1e-4,
        _ => 1e-3,
    }
}

fn run_all(f: &RunFlags) -> Result<ResidualReport, String> {
    let quad = quad_config(f)?;
    let cfg = eigen_config(f, GridFlags { grid_kmax: 0, grid_vnodes: 4 })?;
    let seed = f.seed;
    type Job<'a> = Box<dyn Fn() -> ResidualReport + 'a>;
    let mut jobs: Vec<Job> = vec![
        Box::new(|| check_rtt(2)),
        Box::new(|| check_rtt(3)),
        Box::new(|| check_recurrences(3)),
        Box::new(|| check_recurrences(4)),
        Box::new(|| check_quantum_determinant(2)),
        Box::new(|| check_quantum_determinant(3)),
        Box::new(|| check_quantum_determinant(4)),
        Box::new(|| check_minor_commutation(3, &[CommRegime::Below, CommRegime::Above, CommRegime::Disjoint])),
        Box::new(|| check_gamma_properties(1000, seed, 1e-12)),
        Box::new(|| kernel_suite_for(3, None, 100, seed, &quad, 1e-10)),
        Box::new(|| kernel_suite_for(4, None, 5, seed, &quad, 1e-6)),
        Box::new(|| c_conditions_suite(10, seed, 1e-10)),
        Box::new(|| {
            let (p, _) = match random_hyp_params(4, C::new(1.0, 0.0), seed, &quad) {
                Ok(x) => x,
                Err(e) => {
                    let mut r = ResidualReport::new("contiguous-p4");
                    r.push_error("params", e);
                    return r;
                }
            };
            check_contiguous(&p, C::new(1.0, 0.0), &quad, 1e-6)
        }),
        Box::new(|| check_4g4_relations(&gl4_sample(), &quad, 1e-6)),
        Box::new(|| eigen_suite(2, &[1, 2], 1, 10, seed, &cfg, 1e-8)),
        Box::new(|| eigen_suite(3, &[1, 2, 3], 1, 10, seed, &cfg, 1e-5)),
        Box::new(|| eigen_suite(4, &[1, 4], 1, 2, seed, &cfg, 1e-4)),
        Box::new(|| homogeneity_suite(4, 1, seed, &cfg, 1e-4)),
        Box::new(|| b_action_suite(2, 1, 5, seed, &cfg, 1e-5)),
        Box::new(|| b_action_suite(3, 1, 3, seed, &cfg, 1e-5)),
        Box::new(|| {
            let (l, lp) = barnes_sample();
            check_barnes_instance(l, lp, 0.25, &quad, 1e-6, 1e-4)
        }),
    ];
    if f.deep {
        jobs.push(Box::new(|| {
            check_minor_commutation(
                4,
                &[CommRegime::Below, CommRegime::Above, CommRegime::Disjoint, CommRegime::LengthTwo],
            )
        }));
    }
    if f.slow {
        jobs.push(Box::new(|| eigen_suite(4, &[2], 1, 1, seed, &cfg, 1e-3)));
    }
    let mut rep = ResidualReport::new("all");
    for job in jobs {
        let mut sub = job();
        if let Some(t) = f.tol {
            for c in sub.cases.iter_mut().filter(|c| c.tol > 0.0 && t > c.tol) {
                c.tol = t;
                c.pass = c.residual <= c.tol;
            }
        }
        let hard = sub.cases.iter().any(|c| c.residual.is_infinite());
        rep.extend(sub);
        if hard {
            rep.warnings.push("aborted after a hard error; report is partial".into());
            break;
        }
    }
    Ok(rep)
}

fn emit(v: &Value, out: &Option<PathBuf>) -> Result<(), String> {
    let text = serde_json::to_string_pretty(v).map_err(|e| e.to_string())?;
    // A closed stdout (e.g. piped into `head`) is not an error of the run.
    let _ = writeln!(std::io::stdout(), "{text}");
    if let Some(p) = out {
        std::fs::write(p, text + "\n").map_err(|e| format!("cannot write {}: {e}", p.display()))?;
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(n) = std::env::var("GTKIT_THREADS").ok().and_then(|v| v.parse::<usize>().ok()) {
        let _ = rayon::ThreadPoolBuilder::new().num_threads(n.max(1)).build_global();
    }
    let start = std::time::Instant::now();
    let echo = json!({ "command": format!("{:?}", cli.cmd), "flags": cli.run });
    let (value, code) = match run(&cli) {
        Ok(Output::Report(mut rep)) => {
            let inner = std::mem::take(&mut rep.config);
            rep.config = json!({ "run": echo, "suite": inner });
            rep.wall_time_s = start.elapsed().as_secs_f64();
            let code = match (rep.pass(), rep.warnings.is_empty()) {
                (true, true) => 0,
                (true, false) => 2,
                _ => 1,
            };
            (serde_json::to_value(&rep).unwrap_or(Value::Null), code)
        }
        Ok(Output::Value(v, warn)) => (json!({ "run": echo, "result": v }), if warn { 2 } else { 0 }),
        Err(e) => {
            eprintln!("gtkit: {e}");
            (json!({ "run": echo, "error": e }), 1)
        }
    };
    if let Err(e) = emit(&value, &cli.run.out) {
        eprintln!("gtkit: {e}");
        return ExitCode::from(1);
    }
    ExitCode::from(code)
}
