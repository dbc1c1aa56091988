//! Command-line entry point: `solve`, `validate`, `export` and `sweep`
//! over JSON run configurations.
//!
//! Exit codes: 0 success, 1 configuration error, 2 scorecard failure or
//! inconclusive claim, 3 solver divergence, 4 assembly error.

mod config;

use clap::{Parser, Subcommand};
use config::RunConfig;
use gsod_core::constants::{make_constants, ProblemConstants};
use gsod_core::euler::{assemble, write_csv, write_vtk, AxiField, GridSpec, SolutionBundle};
use gsod_core::fourier::{FourierSeries, FourierTriples};
use gsod_core::grid::DiskGrid;
use gsod_core::gs::{solve_dirichlet, SolverOptions};
use gsod_core::profile::{Family, ProfileFunctions};
use gsod_core::shape::{solve_shape, ShapeOptions, ShapeState};
use gsod_core::validate::{run_all_claims, scorecard};
use gsod_core::GsError;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use std::collections::hash_map::DefaultHasher;
use std::fs;
use std::hash::{Hash, Hasher};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

#[derive(Parser, Debug)]
#[command(name = "gsod", version, about = "Grad-Shafranov overdetermined workbench")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
    /// JSON run configuration.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Override the configured epsilon.
    #[arg(long, global = true)]
    eps: Option<f64>,
    /// Override the configured major radius.
    #[arg(long = "R", global = true)]
    big_r: Option<f64>,
    /// Output directory (default: current directory).
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Rayon worker threads.
    #[arg(long, global = true)]
    threads: Option<usize>,
    /// Use the thorough epsilon list for validate/sweep.
    #[arg(long, global = true)]
    thorough: bool,
    /// Override the configured seed.
    #[arg(long, global = true)]
    seed: Option<u64>,
}

#[derive(Subcommand, Debug)]
enum Cmd {
    /// Solve one equilibrium and write solution + field files.
    Solve,
    /// Run the asymptotic-claims scorecard over an epsilon sweep.
    Validate,
    /// Re-assemble field files from an existing solution JSON.
    Export {
        /// Path to a solution JSON written by `solve` or `sweep`.
        solution: PathBuf,
    },
    /// Fan out solves over the (eps, R) lists.
    Sweep,
}

/// On-disk solution record; everything needed to re-assemble fields.
#[derive(Debug, Serialize, Deserialize)]
struct SolutionFile {
    config: RunConfig,
    eps: f64,
    #[serde(rename = "R")]
    big_r: f64,
    family: Family,
    a0: f64,
    a1: f64,
    kappa: f64,
    f_r: f64,
    /// Boundary shape as `[n, re, im]` Fourier triples.
    b: FourierTriples<f64>,
    c_eps_b: f64,
    c_phys: f64,
    f0: f64,
    outside_pressure: f64,
    iterations: usize,
}

fn fail(code: u8, msg: &str) -> ExitCode {
    eprintln!("error: {msg}");
    ExitCode::from(code)
}

fn solver_exit_code(e: &GsError) -> u8 {
    match e {
        GsError::NewtonDiverged { .. }
        | GsError::ShapeDiverged { .. }
        | GsError::MapDegenerate { .. } => 3,
        GsError::NegativeRadicand { .. }
        | GsError::GridTooCoarse { .. }
        | GsError::DegenerateDenominator { .. } => 4,
        _ => 1,
    }
}

fn init_logging() -> Result<(), String> {
    let level = match std::env::var("GSOD_LOG") {
        Ok(v) => match v.as_str() {
            "error" => log::LevelFilter::Error,
            "info" => log::LevelFilter::Info,
            "debug" => log::LevelFilter::Debug,
            other => return Err(format!("GSOD_LOG must be error|info|debug, got {other}")),
        },
        Err(_) => log::LevelFilter::Error,
    };
    env_logger::Builder::new().filter_level(level).init();
    Ok(())
}

fn load_config(cli: &Cli) -> Result<RunConfig, String> {
    let path = cli
        .config
        .as_ref()
        .ok_or_else(|| "--config PATH is required".to_string())?;
    let text = fs::read_to_string(path).map_err(|e| format!("reading {}: {e}", path.display()))?;
    let mut cfg: RunConfig =
        serde_json::from_str(&text).map_err(|e| format!("parsing {}: {e}", path.display()))?;
    if let Some(e) = cli.eps {
        cfg.eps = Some(e);
    }
    if let Some(r) = cli.big_r {
        cfg.big_r = r;
    }
    if let Some(out) = &cli.out {
        cfg.out_dir = Some(out.clone());
    }
    if let Some(seed) = cli.seed {
        cfg.seed = seed;
    }
    cfg.validate()?;
    Ok(cfg)
}

fn out_dir(cfg: &RunConfig) -> Result<PathBuf, String> {
    let dir = cfg.out_dir.clone().unwrap_or_else(|| PathBuf::from("."));
    fs::create_dir_all(&dir).map_err(|e| format!("creating {}: {e}", dir.display()))?;
    Ok(dir)
}

struct Solved {
    consts: ProblemConstants<f64>,
    bundle: SolutionBundle<f64>,
    field: AxiField<f64>,
}

fn run_solve(cfg: &RunConfig, eps: f64, big_r: f64) -> Result<Solved, GsError> {
    let profile = ProfileFunctions::new(
        cfg.profile.h.build(),
        cfg.profile.ftilde.build(),
        cfg.profile.family,
    )?;
    let consts = make_constants(&profile, big_r, eps)?;
    let grid = DiskGrid::new(cfg.n_theta, cfg.n_rho);
    let solver_opts = SolverOptions {
        tol_newton: cfg.tol_newton,
        ..SolverOptions::default()
    };
    let shape_opts = ShapeOptions {
        tol_shape: cfg.tol_shape,
        verbose: log::log_enabled!(log::Level::Info),
        ..ShapeOptions::default()
    };
    let state = solve_shape(&consts, &profile, grid, &solver_opts, &shape_opts)?;
    let spec = GridSpec {
        n_r: cfg.grid.n_r,
        n_z: cfg.grid.n_z,
        margin: cfg.grid.margin,
    };
    let (bundle, field) = assemble(state, consts, profile, &spec)?;
    Ok(Solved {
        consts,
        bundle,
        field,
    })
}

fn solution_record(cfg: &RunConfig, s: &Solved) -> SolutionFile {
    SolutionFile {
        config: cfg.clone(),
        eps: s.consts.eps,
        big_r: s.consts.big_r,
        family: s.consts.family,
        a0: s.consts.a0,
        a1: s.consts.a1,
        kappa: s.consts.kappa,
        f_r: s.consts.f_r,
        b: s.bundle.shape.b.to_triples(),
        c_eps_b: s.bundle.shape.c_eps_b,
        c_phys: s.bundle.c_phys,
        f0: s.bundle.f0,
        outside_pressure: s.bundle.outside_pressure,
        iterations: s.bundle.shape.iter,
    }
}

fn write_field_files(
    cfg: &RunConfig,
    dir: &Path,
    bundle: &SolutionBundle<f64>,
    field: &AxiField<f64>,
) -> Result<(), String> {
    let csv_path = dir.join("field.csv");
    let mut csv = Vec::new();
    write_csv(field, &mut csv).map_err(|e| e.to_string())?;
    fs::write(&csv_path, csv).map_err(|e| format!("writing {}: {e}", csv_path.display()))?;
    if let Some(n) = cfg.vtk {
        let vtk_path = dir.join("field.vtk");
        let mut vtk = Vec::new();
        write_vtk(field, bundle.outside_pressure, n, &mut vtk).map_err(|e| e.to_string())?;
        fs::write(&vtk_path, vtk).map_err(|e| format!("writing {}: {e}", vtk_path.display()))?;
    }
    Ok(())
}

fn constants_table(s: &Solved) -> String {
    let family = match s.consts.family {
        Family::Generic => "generic",
        Family::Degenerate => "degenerate",
    };
    format!(
        "family  {}\nR       {}\neps     {}\nA0      {}\nA1      {}\nkappa   {}\nF_R     {}\nc       {}\n",
        family,
        s.consts.big_r,
        s.consts.eps,
        s.consts.a0,
        s.consts.a1,
        s.consts.kappa,
        s.consts.f_r,
        s.bundle.c_phys,
    )
}

fn cmd_solve(cli: &Cli) -> ExitCode {
    let cfg = match load_config(cli) {
        Ok(c) => c,
        Err(e) => return fail(1, &e),
    };
    let Some(eps) = cfg.eps else {
        return fail(1, "solve needs an eps (config field or --eps)");
    };
    let dir = match out_dir(&cfg) {
        Ok(d) => d,
        Err(e) => return fail(1, &e),
    };
    let solved = match run_solve(&cfg, eps, cfg.big_r) {
        Ok(s) => s,
        Err(e) => return fail(solver_exit_code(&e), &e.to_string()),
    };
    let record = solution_record(&cfg, &solved);
    let json = serde_json::to_string_pretty(&record).unwrap();
    let sol_path = dir.join("solution.json");
    if let Err(e) = fs::write(&sol_path, json + "\n") {
        return fail(1, &format!("writing {}: {e}", sol_path.display()));
    }
    if let Err(e) = write_field_files(&cfg, &dir, &solved.bundle, &solved.field) {
        return fail(1, &e);
    }
    print!("{}", constants_table(&solved));
    println!("wrote {}", sol_path.display());
    ExitCode::SUCCESS
}

fn cmd_validate(cli: &Cli) -> ExitCode {
    let cfg = match load_config(cli) {
        Ok(c) => c,
        Err(e) => return fail(1, &e),
    };
    let eps_list = cfg.sweep_eps(cli.thorough);
    if eps_list.len() < 3 {
        return fail(1, "need >=3 epsilons spanning a factor of 4 for order fits");
    }
    let span = eps_list.iter().cloned().fold(f64::MIN, f64::max)
        / eps_list.iter().cloned().fold(f64::MAX, f64::min);
    if span < 4.0 {
        return fail(1, "epsilon list must span a factor >= 4");
    }
    let profile = match cfg.profile_functions() {
        Ok(p) => p,
        Err(e) => return fail(1, &e),
    };
    let dir = match out_dir(&cfg) {
        Ok(d) => d,
        Err(e) => return fail(1, &e),
    };
    let grid = DiskGrid::new(cfg.n_theta, cfg.n_rho);
    let solver_opts = SolverOptions {
        tol_newton: cfg.tol_newton,
        ..SolverOptions::default()
    };
    let shape_opts = ShapeOptions {
        tol_shape: cfg.tol_shape,
        ..ShapeOptions::default()
    };
    let reports = run_all_claims(
        &profile,
        cfg.big_r,
        &eps_list,
        &grid,
        &solver_opts,
        &shape_opts,
    );
    let card = scorecard(reports);
    let path = dir.join("scorecard.json");
    let json = serde_json::to_string_pretty(&card).unwrap();
    if let Err(e) = fs::write(&path, json + "\n") {
        return fail(1, &format!("writing {}: {e}", path.display()));
    }
    print!("{}", card.table());
    println!("wrote {}", path.display());
    if card.all_pass {
        ExitCode::SUCCESS
    } else {
        let ids: Vec<String> = card.failing().iter().map(|c| c.to_string()).collect();
        fail(2, &format!("claims not passing: {}", ids.join(", ")))
    }
}

fn cmd_export(cli: &Cli, solution: &Path) -> ExitCode {
    let cfg = match load_config(cli) {
        Ok(c) => c,
        Err(e) => return fail(1, &e),
    };
    let text = match fs::read_to_string(solution) {
        Ok(t) => t,
        Err(e) => return fail(1, &format!("reading {}: {e}", solution.display())),
    };
    let record: SolutionFile = match serde_json::from_str(&text) {
        Ok(r) => r,
        Err(e) => return fail(1, &format!("corrupt solution file: {e}")),
    };
    let profile = match ProfileFunctions::new(
        record.config.profile.h.build(),
        record.config.profile.ftilde.build(),
        record.config.profile.family,
    ) {
        Ok(p) => p,
        Err(e) => return fail(1, &e.to_string()),
    };
    let consts = match make_constants(&profile, record.big_r, record.eps) {
        Ok(c) => c,
        Err(e) => return fail(1, &e.to_string()),
    };
    let grid = DiskGrid::new(record.config.n_theta, record.config.n_rho);
    let solver_opts = SolverOptions {
        tol_newton: record.config.tol_newton,
        ..SolverOptions::default()
    };
    let b = FourierSeries::from_triples(&record.b);
    // Re-solve the (cheap) Dirichlet problem at the stored shape; this
    // reproduces the converged state deterministically.
    let sol = match solve_dirichlet(&consts, &profile, &b, grid.clone(), &solver_opts) {
        Ok(s) => s,
        Err(e) => return fail(solver_exit_code(&e), &e.to_string()),
    };
    let state = ShapeState {
        b,
        c_eps_b: record.c_eps_b,
        g_residual: FourierSeries::zero(grid.n_theta),
        iter: record.iterations,
        converged: true,
        solution: sol,
    };
    let spec = GridSpec {
        n_r: cfg.grid.n_r,
        n_z: cfg.grid.n_z,
        margin: cfg.grid.margin,
    };
    let (bundle, field) = match assemble(state, consts, profile, &spec) {
        Ok(v) => v,
        Err(e) => return fail(solver_exit_code(&e), &e.to_string()),
    };
    let dir = match out_dir(&cfg) {
        Ok(d) => d,
        Err(e) => return fail(1, &e),
    };
    if let Err(e) = write_field_files(&cfg, &dir, &bundle, &field) {
        return fail(1, &e);
    }
    println!("wrote {}", dir.join("field.csv").display());
    ExitCode::SUCCESS
}

fn param_hash(eps: f64, big_r: f64) -> u64 {
    let mut h = DefaultHasher::new();
    eps.to_bits().hash(&mut h);
    big_r.to_bits().hash(&mut h);
    h.finish()
}

fn cmd_sweep(cli: &Cli) -> ExitCode {
    let cfg = match load_config(cli) {
        Ok(c) => c,
        Err(e) => return fail(1, &e),
    };
    let dir = match out_dir(&cfg) {
        Ok(d) => d,
        Err(e) => return fail(1, &e),
    };
    let eps_list = cfg.sweep_eps(cli.thorough);
    let r_list = cfg.r_list.clone().unwrap_or_else(|| vec![cfg.big_r]);
    let mut jobs = Vec::new();
    for &eps in &eps_list {
        for &r in &r_list {
            jobs.push((eps, r));
        }
    }
    let results: Vec<(f64, f64, Result<PathBuf, GsError>)> = jobs
        .par_iter()
        .map(|&(eps, r)| {
            let out = run_solve(&cfg, eps, r).and_then(|solved| {
                let record = solution_record(&cfg, &solved);
                let path = dir.join(format!("solve_{:016x}.json", param_hash(eps, r)));
                let json = serde_json::to_string_pretty(&record).unwrap();
                fs::write(&path, json + "\n").map_err(|e| {
                    GsError::InvalidProfile(format!("writing {}: {e}", path.display()))
                })?;
                Ok(path)
            });
            (eps, r, out)
        })
        .collect();
    let mut worst: u8 = 0;
    for (eps, r, out) in &results {
        match out {
            Ok(path) => println!("eps={eps} R={r} -> {}", path.display()),
            Err(e) => {
                eprintln!("eps={eps} R={r} failed: {e}");
                worst = worst.max(solver_exit_code(e));
            }
        }
    }
    if worst == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(worst)
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Err(e) = init_logging() {
        return fail(1, &e);
    }
    if let Some(n) = cli.threads {
        if let Err(e) = rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
        {
            return fail(1, &format!("thread pool: {e}"));
        }
    }
    match &cli.cmd {
        Cmd::Solve => cmd_solve(&cli),
        Cmd::Validate => cmd_validate(&cli),
        Cmd::Export { solution } => cmd_export(&cli, &solution.clone()),
        Cmd::Sweep => cmd_sweep(&cli),
    }
}
