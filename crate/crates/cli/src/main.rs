//! Command-line front end: builds tessellations and lattices, runs Lloyd
//! optimization and the audit/lemma/boundary/Zador suites, and minimizes the
//! constrained second moment, writing JSON/CSV artifacts.
//!
//! All randomness derives from `--seed` (default 0), every number is printed
//! with 17 significant digits, and reductions are order-fixed, so identical
//! commands produce byte-identical output files regardless of `--threads`.
//!
//! Exit codes: 0 success, 2 flag/validation error, 1 computation error.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use cvt3d::bounds::{self, Subcube, ZadorConfig};
use cvt3d::geom::Vec3;
use cvt3d::gfunc;
use cvt3d::lattice::{self, LatticeKind};
use cvt3d::lloyd::{self, OptimizeConfig};
use cvt3d::rng::SplitMix64;
use cvt3d::voronoi::{build_tessellation, cell_summaries, Domain, GeneratorSet, Tessellation};
use cvt3d::{fmt_f64, Error};

#[derive(Parser)]
#[command(
    name = "cvt3d",
    version,
    about = "3D centroidal Voronoi tessellation laboratory"
)]
struct Cli {
    /// Output directory; all artifacts are written here and nowhere else.
    #[arg(long, global = true, default_value = ".")]
    out: PathBuf,
    /// Worker-thread cap (falls back to the CVT3D_THREADS env var, then to
    /// the number of cores). Results never depend on it.
    #[arg(long, global = true)]
    threads: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct TessArgs {
    /// Random generator count (Lloyd-optimized before use unless --iters 0).
    #[arg(long, conflicts_with = "kind")]
    n: Option<usize>,
    /// Lattice kind (sc, bcc, fcc) instead of random generators.
    #[arg(long)]
    kind: Option<String>,
    /// Lattice replication factor.
    #[arg(long, default_value_t = 3)]
    k: usize,
    /// Domain: cube or torus.
    #[arg(long, default_value = "torus")]
    domain: String,
    /// Seed for random starts.
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Lloyd iterations applied to random starts.
    #[arg(long, default_value_t = 100)]
    iters: usize,
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate every derived constant and cross-report the printed decimals.
    Constants,
    /// Generate a lattice, tessellate the torus, and summarize the cells.
    Lattice {
        #[arg(long)]
        kind: String,
        #[arg(long, default_value_t = 3)]
        k: usize,
        /// Also dump the full tessellation JSON under this file name.
        #[arg(long)]
        dump: Option<String>,
    },
    /// Lloyd-optimize a seeded random configuration.
    Lloyd {
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value = "torus")]
        domain: String,
        #[arg(long, default_value_t = 10_000)]
        iters: usize,
    },
    /// Audit a tessellation against the diameter/volume/face-count bounds.
    Audit(TessArgs),
    /// Insertion-gain oracle on every cell of a tessellation.
    LemmaD {
        #[command(flatten)]
        tess: TessArgs,
        /// Halton candidate budget per cell.
        #[arg(long, default_value_t = 64)]
        budget: usize,
    },
    /// Nearest-neighbor lower-bound oracle on every cell.
    LemmaBelow(TessArgs),
    /// Boundary/interior energy split over a subcube, swept over SC lattices.
    Boundary {
        /// Subcube as "lo,hi" applied to all three axes.
        #[arg(long, default_value = "0.25,0.75")]
        omega: String,
        /// Single replication factor (used when no sweep range is given).
        #[arg(long, default_value_t = 4)]
        k: usize,
        #[arg(long)]
        kmin: Option<usize>,
        #[arg(long)]
        kmax: Option<usize>,
    },
    /// Multi-start Lloyd sweep over a list of generator counts.
    Zador {
        /// Comma-separated generator counts, e.g. "8,27,64".
        #[arg(long)]
        n: String,
        #[arg(long, default_value = "torus")]
        domain: String,
        #[arg(long, default_value_t = 4)]
        restarts: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 200)]
        iters: usize,
    },
    /// Minimize the second moment over polytopes with at most m faces.
    Gmin {
        #[arg(long, default_value_t = 1.0)]
        a: f64,
        #[arg(long)]
        m: usize,
        #[arg(long, default_value_t = 16)]
        restarts: usize,
        #[arg(long, default_value_t = 20_000)]
        budget: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Sweep G(a, m) over a face-count range with discrete differences.
    Gprobe {
        #[arg(long, default_value_t = 1.0)]
        a: f64,
        #[arg(long, default_value_t = 4)]
        mmin: usize,
        #[arg(long, default_value_t = 20)]
        mmax: usize,
        #[arg(long, default_value_t = 16)]
        restarts: usize,
        #[arg(long, default_value_t = 8_000)]
        budget: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let threads = cli.threads.or_else(|| {
        std::env::var("CVT3D_THREADS")
            .ok()
            .and_then(|s| s.parse().ok())
    });
    match run_with_threads(threads, cli.out, cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code_for(&e))
        }
    }
}

/// Validation problems exit 2, computation failures exit 1.
fn exit_code_for(e: &CliError) -> u8 {
    match e {
        CliError::Compute(err) => match err {
            Error::InvalidParameter(_)
            | Error::OutOfDomain(_)
            | Error::DuplicateGenerators(..)
            | Error::IndexOutOfRange { .. }
            | Error::TooFewGenerators { .. }
            | Error::PointNotInterior => 2,
            _ => 1,
        },
        CliError::Validation(_) => 2,
        CliError::Io(_) => 1,
    }
}

#[derive(Debug)]
enum CliError {
    Validation(String),
    Compute(Error),
    Io(std::io::Error),
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Validation(msg) => write!(f, "{msg}"),
            CliError::Compute(e) => write!(f, "{e}"),
            CliError::Io(e) => write!(f, "{e}"),
        }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        CliError::Compute(e)
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Io(e)
    }
}

type CliResult = Result<(), CliError>;

#[cfg(feature = "parallel")]
fn run_with_threads(threads: Option<usize>, out: PathBuf, command: Command) -> CliResult {
    match threads {
        Some(t) if t >= 1 => {
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(t)
                .build()
                .map_err(|e| CliError::Validation(format!("thread pool: {e}")))?;
            pool.install(|| run(out, command))
        }
        Some(_) => Err(CliError::Validation("--threads must be ≥ 1".into())),
        None => run(out, command),
    }
}

#[cfg(not(feature = "parallel"))]
fn run_with_threads(_threads: Option<usize>, out: PathBuf, command: Command) -> CliResult {
    run(out, command)
}

fn parse_domain(s: &str) -> Result<Domain, CliError> {
    match s {
        "cube" => Ok(Domain::UnitCube),
        "torus" => Ok(Domain::UnitTorus),
        other => Err(CliError::Validation(format!(
            "unknown domain {other:?} (expected cube or torus)"
        ))),
    }
}

fn parse_kind(s: &str) -> Result<LatticeKind, CliError> {
    s.parse::<LatticeKind>().map_err(CliError::from)
}

fn random_generators(n: usize, seed: u64, domain: Domain) -> Result<GeneratorSet, CliError> {
    if n == 0 {
        return Err(CliError::Validation("--n must be ≥ 1".into()));
    }
    let mut rng = SplitMix64::new(seed);
    let pts: Vec<Vec3> = (0..n).map(|_| rng.point_in_unit_cube()).collect();
    GeneratorSet::new(pts, domain).map_err(CliError::from)
}

/// Builds the tessellation a `TessArgs` describes: a lattice, or a random
/// configuration run through a fixed number of Lloyd iterations.
fn tessellation_from_args(args: &TessArgs) -> Result<Tessellation, CliError> {
    if let Some(kind) = &args.kind {
        let kind = parse_kind(kind)?;
        let gens = lattice::generate(kind, args.k)?;
        return build_tessellation(&gens).map_err(CliError::from);
    }
    let n = args
        .n
        .ok_or_else(|| CliError::Validation("either --kind or --n is required".into()))?;
    let domain = parse_domain(&args.domain)?;
    let gens = random_generators(n, args.seed, domain)?;
    let gens = if args.iters > 0 {
        let cfg = OptimizeConfig {
            max_iters: args.iters,
            ..OptimizeConfig::default()
        };
        lloyd::optimize(&gens, &cfg)?.generators
    } else {
        gens
    };
    build_tessellation(&gens).map_err(CliError::from)
}

fn write_file(out: &Path, name: &str, contents: &str) -> CliResult {
    std::fs::create_dir_all(out)?;
    std::fs::write(out.join(name), contents)?;
    Ok(())
}

fn fmt_opt(x: Option<f64>) -> String {
    x.map(fmt_f64).unwrap_or_else(|| "na".to_string())
}

fn run(out: PathBuf, command: Command) -> CliResult {
    match command {
        Command::Constants => cmd_constants(&out),
        Command::Lattice { kind, k, dump } => cmd_lattice(&out, &kind, k, dump.as_deref()),
        Command::Lloyd {
            n,
            seed,
            domain,
            iters,
        } => cmd_lloyd(&out, n, seed, &domain, iters),
        Command::Audit(args) => cmd_audit(&out, &args),
        Command::LemmaD { tess, budget } => cmd_lemma_d(&out, &tess, budget),
        Command::LemmaBelow(args) => cmd_lemma_below(&out, &args),
        Command::Boundary {
            omega,
            k,
            kmin,
            kmax,
        } => cmd_boundary(&out, &omega, k, kmin, kmax),
        Command::Zador {
            n,
            domain,
            restarts,
            seed,
            iters,
        } => cmd_zador(&out, &n, &domain, restarts, seed, iters),
        Command::Gmin {
            a,
            m,
            restarts,
            budget,
            seed,
        } => cmd_gmin(&out, a, m, restarts, budget, seed),
        Command::Gprobe {
            a,
            mmin,
            mmax,
            restarts,
            budget,
            seed,
        } => cmd_gprobe(&out, a, mmin, mmax, restarts, budget, seed),
    }
}

fn cmd_constants(out: &Path) -> CliResult {
    let rows = bounds::constants_report();
    let json = serde_json::to_string_pretty(&rows).map_err(Error::from)?;
    write_file(out, "constants.json", &json)?;
    for row in &rows {
        println!(
            "{:>8}  {}  printed={}  rel_dev={}",
            row.name,
            row.formula_value,
            fmt_opt(row.paper_decimal),
            fmt_opt(row.rel_deviation),
        );
    }
    Ok(())
}

fn cells_csv(t: &Tessellation) -> Result<String, CliError> {
    let mut csv = String::from("index,volume,diameter,faces,second_moment,sigma\n");
    for row in cell_summaries(t)? {
        let _ = writeln!(
            csv,
            "{},{},{},{},{},{}",
            row.index,
            fmt_f64(row.volume),
            fmt_f64(row.diameter),
            row.faces,
            fmt_f64(row.second_moment),
            fmt_opt(row.sigma),
        );
    }
    Ok(csv)
}

fn cmd_lattice(out: &Path, kind: &str, k: usize, dump: Option<&str>) -> CliResult {
    let kind = parse_kind(kind)?;
    let gens = lattice::generate(kind, k)?;
    let t = build_tessellation(&gens)?;
    write_file(out, "cells.csv", &cells_csv(&t)?)?;
    if let Some(name) = dump {
        let json = serde_json::to_string(&t.dump()).map_err(Error::from)?;
        write_file(out, name, &json)?;
    }
    println!(
        "{kind:?} k={k}: n={} energy={} density={}",
        gens.len(),
        fmt_f64(t.energy),
        fmt_f64(t.energy_density())
    );
    Ok(())
}

fn cmd_lloyd(out: &Path, n: usize, seed: u64, domain: &str, iters: usize) -> CliResult {
    let domain = parse_domain(domain)?;
    let gens = random_generators(n, seed, domain)?;
    let cfg = OptimizeConfig {
        max_iters: iters.max(1),
        ..OptimizeConfig::default()
    };
    let result = lloyd::optimize(&gens, &cfg)?;
    let mut csv = String::from("iter,energy,max_move\n");
    for (i, (e, mv)) in result
        .energy_trace
        .iter()
        .zip(&result.move_trace)
        .enumerate()
    {
        let _ = writeln!(csv, "{},{},{}", i, fmt_f64(*e), fmt_f64(*mv));
    }
    write_file(out, "trace.csv", &csv)?;
    let gens_json = serde_json::to_string(result.generators.points()).map_err(Error::from)?;
    write_file(out, "generators.json", &gens_json)?;
    println!(
        "n={n} converged={} iterations={} energy={}",
        result.converged,
        result.iterations,
        fmt_f64(result.final_energy())
    );
    Ok(())
}

fn cmd_audit(out: &Path, args: &TessArgs) -> CliResult {
    let t = tessellation_from_args(args)?;
    let report = bounds::audit(&t)?;
    let mut csv = String::from(
        "index,volume,diameter,faces,sigma,volume_scaled,diam_scaled,diam_scaled_nm2,\
         sigma_scaled,ball_floor_slack,pass_diam_low,pass_vol_low,pass_diam_high,pass_faces\n",
    );
    for c in &report.cells {
        let _ = writeln!(
            csv,
            "{},{},{},{},{},{},{},{},{},{},{},{},{},{}",
            c.index,
            fmt_f64(c.volume),
            fmt_f64(c.diameter),
            c.faces,
            fmt_opt(c.sigma),
            fmt_f64(c.volume_scaled),
            fmt_f64(c.diam_scaled),
            fmt_opt(c.diam_scaled_nm2),
            fmt_opt(c.sigma_scaled),
            fmt_f64(c.ball_floor_slack),
            c.pass_diam_low,
            c.pass_vol_low,
            c.pass_diam_high
                .map(|b| b.to_string())
                .unwrap_or_else(|| "na".into()),
            c.pass_faces,
        );
    }
    let _ = writeln!(
        csv,
        "summary,n={},energy={},density={},floor_margin={},delone_min={},delone_max={},\
         max_faces={},energy_floor={},all_pass={}",
        report.n,
        fmt_f64(report.energy),
        fmt_f64(report.density),
        fmt_f64(report.floor_margin),
        fmt_opt(report.delone_min),
        fmt_opt(report.delone_max),
        report.max_faces,
        report.pass_energy_floor,
        report.all_pass,
    );
    write_file(out, "audit.csv", &csv)?;
    println!(
        "n={} density={} all_pass={}",
        report.n,
        fmt_f64(report.density),
        report.all_pass
    );
    Ok(())
}

fn cmd_lemma_d(out: &Path, args: &TessArgs, budget: usize) -> CliResult {
    let t = tessellation_from_args(args)?;
    let pts = t.generators.points();
    let mut csv = String::from("index,gain,r,volume,bound_r,bound_vol,pass\n");
    let mut all_pass = true;
    for (k, cell) in t.cells.iter().enumerate() {
        let check = bounds::lemma_d_check(cell, pts[k], budget)?;
        all_pass &= check.pass;
        let _ = writeln!(
            csv,
            "{},{},{},{},{},{},{}",
            k,
            fmt_f64(check.gain),
            fmt_f64(check.r),
            fmt_f64(check.volume),
            fmt_f64(check.bound_r),
            fmt_f64(check.bound_vol),
            check.pass,
        );
    }
    write_file(out, "lemma_d.csv", &csv)?;
    println!("cells={} all_pass={all_pass}", t.cells.len());
    Ok(())
}

fn cmd_lemma_below(out: &Path, args: &TessArgs) -> CliResult {
    let t = tessellation_from_args(args)?;
    let mut csv =
        String::from("index,sigma,r,bound_r,bound_vol,bound_r_quadratic_variant,satisfied\n");
    let mut all = true;
    for k in 0..t.cells.len() {
        let check = bounds::lemma_below_check(&t, k)?;
        all &= check.satisfied;
        let _ = writeln!(
            csv,
            "{},{},{},{},{},{},{}",
            k,
            fmt_f64(check.sigma),
            fmt_f64(check.r),
            fmt_f64(check.bound_r),
            fmt_f64(check.bound_vol),
            fmt_f64(check.bound_r_quadratic_variant),
            check.satisfied,
        );
    }
    write_file(out, "lemma_below.csv", &csv)?;
    println!("cells={} all_satisfied={all}", t.cells.len());
    Ok(())
}

fn cmd_boundary(
    out: &Path,
    omega: &str,
    k: usize,
    kmin: Option<usize>,
    kmax: Option<usize>,
) -> CliResult {
    let parts: Vec<&str> = omega.split(',').collect();
    if parts.len() != 2 {
        return Err(CliError::Validation(format!(
            "--omega expects \"lo,hi\", got {omega:?}"
        )));
    }
    let lo: f64 = parts[0]
        .trim()
        .parse()
        .map_err(|_| CliError::Validation(format!("bad omega bound {:?}", parts[0])))?;
    let hi: f64 = parts[1]
        .trim()
        .parse()
        .map_err(|_| CliError::Validation(format!("bad omega bound {:?}", parts[1])))?;
    let subcube = Subcube::new(lo, hi)?;
    let (k_lo, k_hi) = match (kmin, kmax) {
        (Some(a), Some(b)) if a <= b => (a, b),
        (None, None) => (k, k),
        _ => {
            return Err(CliError::Validation(
                "--kmin/--kmax must be given together with kmin ≤ kmax".into(),
            ))
        }
    };
    let mut csv =
        String::from("k,n,energy_boundary,energy_interior,n_boundary,n_contained,n_outside\n");
    let mut rows_b = Vec::new();
    let mut rows_i = Vec::new();
    for k in k_lo..=k_hi {
        let gens = lattice::generate(LatticeKind::Sc, k)?;
        let cube_gens = GeneratorSet::new(gens.points().to_vec(), Domain::UnitCube)?;
        let t = build_tessellation(&cube_gens)?;
        let split = bounds::boundary_split(&t, subcube)?;
        let n = cube_gens.len();
        rows_b.push((n as f64, split.energy_boundary));
        rows_i.push((n as f64, split.energy_interior));
        let _ = writeln!(
            csv,
            "{},{},{},{},{},{},{}",
            k,
            n,
            fmt_f64(split.energy_boundary),
            fmt_f64(split.energy_interior),
            split.n_boundary,
            split.n_contained,
            split.n_outside,
        );
    }
    let slope_b = bounds::log_log_slope(&rows_b);
    let slope_i = bounds::log_log_slope(&rows_i);
    let _ = writeln!(csv, "slopes,,{},{},,,", fmt_opt(slope_b), fmt_opt(slope_i));
    write_file(out, "boundary.csv", &csv)?;
    println!(
        "omega=[{lo},{hi}]^3 slope_boundary={} slope_interior={}",
        fmt_opt(slope_b),
        fmt_opt(slope_i)
    );
    Ok(())
}

fn cmd_zador(
    out: &Path,
    n_list: &str,
    domain: &str,
    restarts: usize,
    seed: u64,
    iters: usize,
) -> CliResult {
    let domain = parse_domain(domain)?;
    let ns: Result<Vec<usize>, _> = n_list
        .split(',')
        .map(|s| s.trim().parse::<usize>())
        .collect();
    let ns = ns.map_err(|_| CliError::Validation(format!("bad --n list {n_list:?}")))?;
    let cfg = ZadorConfig {
        restarts,
        seed,
        lloyd: OptimizeConfig {
            max_iters: iters.max(1),
            ..OptimizeConfig::default()
        },
    };
    let rows = bounds::zador_sweep(&ns, domain, &cfg)?;
    let mut csv = String::from("n,best_energy,density,best_start,floor_cball_ok,floor_tau_ok\n");
    for r in &rows {
        let _ = writeln!(
            csv,
            "{},{},{},{},{},{}",
            r.n,
            fmt_f64(r.best_energy),
            fmt_f64(r.density),
            r.best_start,
            r.floor_cball_ok,
            r.floor_tau_ok,
        );
        println!(
            "n={} density={} start={}",
            r.n,
            fmt_f64(r.density),
            r.best_start
        );
    }
    write_file(out, "zador.csv", &csv)?;
    Ok(())
}

fn cmd_gmin(out: &Path, a: f64, m: usize, restarts: usize, budget: usize, seed: u64) -> CliResult {
    let r = gfunc::minimize_g(a, m, restarts, budget, seed)?;
    let poly_json = serde_json::to_string(&r.polytope).map_err(Error::from)?;
    write_file(out, "gmin_polytope.json", &poly_json)?;
    let mut summary = String::new();
    let _ = writeln!(summary, "a,m,value,effective_faces,restarts");
    let _ = writeln!(
        summary,
        "{},{},{},{},{}",
        fmt_f64(a),
        m,
        fmt_f64(r.value),
        r.effective_faces,
        r.restarts_used
    );
    write_file(out, "gmin.csv", &summary)?;
    println!(
        "G({a}, {m}) = {} effective_faces={}",
        fmt_f64(r.value),
        r.effective_faces
    );
    Ok(())
}

fn cmd_gprobe(
    out: &Path,
    a: f64,
    mmin: usize,
    mmax: usize,
    restarts: usize,
    budget: usize,
    seed: u64,
) -> CliResult {
    let rows = gfunc::convexity_probe(a, mmin, mmax, restarts, budget, seed)?;
    let mut csv = String::from("m,value,d1,d2,sigma\n");
    for r in &rows {
        let _ = writeln!(
            csv,
            "{},{},{},{},{}",
            r.m,
            fmt_f64(r.value),
            fmt_opt(r.d1),
            fmt_opt(r.d2),
            fmt_f64(r.sigma),
        );
        println!(
            "m={} G={} d2={} sigma={}",
            r.m,
            fmt_f64(r.value),
            fmt_opt(r.d2),
            fmt_f64(r.sigma)
        );
    }
    write_file(out, "gprobe.csv", &csv)?;
    Ok(())
}
