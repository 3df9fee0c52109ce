use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Duration;

use anyhow::{bail, Context};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use mublp::fourier::{self, ExponentVector};
use mublp::gamma::GammaSpace;
use mublp::karlsson::{self, Branches, KarlssonParams, ParamGrid};
use mublp::lp::{
    self, mps, CrossVariant, Family, LpProblem, LpSolution, Sense, SolverOptions, Status,
};
use mublp::matrix::{self, PhaseMatrix, TOL_ENTRY, TOL_UNITARY};
use mublp::verify::{self, VerificationReport, DEFAULT_SEED};

mod fmt;
use fmt::{cx, sig};

const EXIT_VERIFY: u8 = 1;
const EXIT_USAGE: u8 = 2;
const EXIT_SOLVER: u8 = 3;

#[derive(Parser, Debug)]
#[command(
    name = "mublp",
    version,
    about = "Karlsson Hadamards, Fourier functionals and MUB linear programs"
)]
struct Cli {
    /// Worker threads for parallel sections (default: all cores).
    #[arg(long, global = true, env = "MUBLP_THREADS")]
    threads: Option<usize>,
    /// Seed for every random draw; echoed in all reports.
    #[arg(long, global = true, default_value_t = DEFAULT_SEED)]
    seed: u64,
    /// Also write the machine-readable report to this file.
    #[arg(long, global = true)]
    json: Option<PathBuf>,
    /// Directory that relative output paths (`--out`, `--export`, `--json`) are written under.
    #[arg(long = "out-dir", global = true)]
    out_dir: Option<PathBuf>,
    /// Log the command, thread count and elapsed time to stderr.
    #[arg(short, long, global = true, action = clap::ArgAction::Count)]
    verbose: u8,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Build one member of the Karlsson family.
    Karlsson(KarlssonArgs),
    /// Evaluate g, G_j, f, F and G at an exponent vector.
    Eval(EvalArgs),
    /// Enumerate the orbit representatives of the exponent ball.
    GammaSpace(GammaArgs),
    /// Assemble a linear program and export it as MPS.
    BuildLp(BuildArgs),
    /// Solve an exported program, or check an external solution against it.
    Solve(SolveArgs),
    /// Numerically certify one of the closed-form claims.
    Verify(VerifyArgs),
    /// Lower bound on F(ρ) (or G(ρ)) for dimension six at a given radius.
    Table1(Table1Args),
}

#[derive(Args, Debug)]
struct KarlssonArgs {
    #[arg(long, allow_negative_numbers = true)]
    theta: f64,
    #[arg(long, allow_negative_numbers = true)]
    phi: f64,
    #[arg(long = "z1-arg", allow_negative_numbers = true)]
    z1_arg: f64,
    /// Square-root branches for z3, z2, z4.
    #[arg(long, default_value = "+++")]
    branches: Branches,
    /// Write the matrix as JSON.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct EvalArgs {
    /// Exponent vector, e.g. `1,1,1,-1,-1,-1`.
    #[arg(long, allow_hyphen_values = true)]
    gamma: ExponentVector,
    /// Matrix JSON files forming the set.
    #[arg(long = "matrix")]
    matrices: Vec<PathBuf>,
    /// Add a Karlsson matrix `theta,phi,z1_arg`.
    #[arg(long, allow_hyphen_values = true)]
    karlsson: Option<String>,
    /// Add the isolated spectral matrix.
    #[arg(long)]
    spectral: bool,
    /// Add the Fourier matrix of this order.
    #[arg(long)]
    fourier: Option<usize>,
    /// Use the explicit complete set of unbiased Hadamards of this order.
    #[arg(long = "mub-set")]
    mub_set: Option<usize>,
}

#[derive(Args, Debug)]
struct GammaArgs {
    #[arg(long)]
    d: usize,
    #[arg(long)]
    l: u32,
    /// Print every representative.
    #[arg(long)]
    list: bool,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum SenseArg {
    Min,
    Max,
}

impl From<SenseArg> for Sense {
    fn from(s: SenseArg) -> Self {
        match s {
            SenseArg::Min => Sense::Min,
            SenseArg::Max => Sense::Max,
        }
    }
}

#[derive(Args, Debug)]
struct ModelArgs {
    #[arg(long, default_value_t = 6)]
    d: usize,
    #[arg(long)]
    l: u32,
    /// Add the rows F(ρ) = G(ρ) = 0 for ρ = (1,1,1,-1,-1,-1).
    #[arg(long = "karlsson-mode")]
    karlsson_mode: bool,
    /// Sign of the second shift in the cross-term rows.
    #[arg(long, default_value = "minus")]
    variant: CrossVariant,
}

#[derive(Args, Debug)]
struct BuildArgs {
    #[command(flatten)]
    model: ModelArgs,
    #[arg(long, value_enum, default_value = "min")]
    sense: SenseArg,
    #[arg(long, default_value = "F")]
    family: Family,
    /// Objective point; defaults to (d,-d,0,…,0).
    #[arg(long, allow_hyphen_values = true)]
    rho: Option<ExponentVector>,
    /// MPS output path (a `.meta.json` sidecar is written next to it).
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum ModeArg {
    Float,
    Exact,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum PivotArg {
    Bland,
    Dantzig,
}

#[derive(Args, Debug)]
struct SolverArgs {
    #[arg(long, value_enum, default_value = "float")]
    mode: ModeArg,
    #[arg(long, value_enum, default_value = "dantzig")]
    pivot: PivotArg,
    #[arg(long, default_value_t = 1e-9)]
    tol: f64,
    #[arg(long = "iteration-cap", default_value_t = 1_000_000)]
    iteration_cap: u64,
    /// Wall-clock cap in seconds.
    #[arg(long = "time-cap")]
    time_cap: Option<f64>,
}

impl SolverArgs {
    fn options(&self) -> anyhow::Result<SolverOptions> {
        let time_cap = match self.time_cap {
            Some(s) if !(s > 0.0 && s.is_finite()) => bail!("--time-cap must be positive"),
            Some(s) => Some(Duration::from_secs_f64(s)),
            None => None,
        };
        Ok(SolverOptions {
            arithmetic: match self.mode {
                ModeArg::Float => lp::Arithmetic::Float64,
                ModeArg::Exact => lp::Arithmetic::ExactRational,
            },
            pivot_rule: match self.pivot {
                PivotArg::Bland => lp::PivotRule::Bland,
                PivotArg::Dantzig => lp::PivotRule::Dantzig,
            },
            feasibility_tol: self.tol,
            iteration_cap: self.iteration_cap,
            time_cap,
        })
    }
}

#[derive(Args, Debug)]
struct SolveArgs {
    /// MPS file written by `build-lp` (its sidecar must sit next to it).
    #[arg(long)]
    model: PathBuf,
    #[command(flatten)]
    solver: SolverArgs,
    /// Write the solution JSON here.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Check this solution file instead of solving.
    #[arg(long)]
    check: Option<PathBuf>,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Claim {
    Theorem1,
    Identities,
    Spectral,
    Constraints,
    Construction,
    Witness,
}

#[derive(Args, Debug)]
struct VerifyArgs {
    #[arg(long, value_enum)]
    claim: Claim,
    /// Grid sizes `n_theta,n_phi,n_z1`.
    #[arg(long, default_value = "20,20,8")]
    grid: String,
    #[arg(long)]
    tol: Option<f64>,
    /// Random exponent vectors for `constraints`.
    #[arg(long, default_value_t = 100)]
    samples: usize,
    /// Dimension for `constraints` (2, 3 or 6) and `witness` (2 or 3).
    #[arg(long, default_value_t = 6)]
    d: usize,
    /// Radius for `witness`.
    #[arg(long)]
    l: Option<u32>,
    /// Cross-term sign for `witness`.
    #[arg(long, default_value = "minus")]
    variant: CrossVariant,
}

#[derive(Clone, Copy, Debug, ValueEnum, PartialEq)]
enum SolveWith {
    None,
    Embedded,
}

#[derive(Args, Debug)]
struct Table1Args {
    #[command(flatten)]
    model: ModelArgs,
    #[arg(long, allow_hyphen_values = true, default_value = "6,-6,0,0,0,0")]
    rho: ExponentVector,
    #[arg(long, default_value = "F")]
    family: Family,
    /// Write the program as MPS.
    #[arg(long)]
    export: Option<PathBuf>,
    #[arg(long, value_enum, default_value = "none")]
    solve: SolveWith,
    #[command(flatten)]
    solver: SolverArgs,
    /// Write the embedded solution JSON here.
    #[arg(long)]
    out: Option<PathBuf>,
}

/// Outcome of a subcommand: the JSON report and the exit code it implies.
struct Outcome {
    report: Value,
    code: u8,
}

impl Outcome {
    fn ok(report: Value) -> Self {
        Self { report, code: 0 }
    }
}

fn main() -> ExitCode {
    let mut cli = Cli::parse();
    if let Err(e) = configure_threads(cli.threads).and_then(|()| resolve_outputs(&mut cli)) {
        eprintln!("error: {e:#}");
        return ExitCode::from(EXIT_USAGE);
    }
    let started = std::time::Instant::now();
    if cli.verbose > 0 {
        eprintln!(
            "[mublp] {:?} on {} threads",
            cli.command,
            rayon::current_num_threads()
        );
    }
    let result = run(&cli);
    if cli.verbose > 0 {
        eprintln!("[mublp] finished in {:.3?}", started.elapsed());
    }
    match result {
        Ok(out) => {
            let mut report = out.report;
            report["seed"] = json!(cli.seed);
            if let Some(path) = &cli.json {
                if let Err(e) = std::fs::write(path, serde_json::to_string_pretty(&report).unwrap())
                {
                    eprintln!("error: writing {}: {e}", path.display());
                    return ExitCode::from(EXIT_USAGE);
                }
            }
            ExitCode::from(out.code)
        }
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(EXIT_USAGE)
        }
    }
}

fn configure_threads(threads: Option<usize>) -> anyhow::Result<()> {
    if let Some(n) = threads {
        if n == 0 {
            bail!("--threads must be positive");
        }
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .context("configuring thread pool")?;
    }
    Ok(())
}

/// Joins relative output paths onto `--out-dir` and checks every output
/// directory before any work starts.
fn resolve_outputs(cli: &mut Cli) -> anyhow::Result<()> {
    if let Some(dir) = &cli.out_dir {
        if !dir.is_dir() {
            bail!("--out-dir {} is not a directory", dir.display());
        }
    }
    let dir = cli.out_dir.clone();
    let place = |p: &mut Option<PathBuf>| {
        if let (Some(dir), Some(path)) = (&dir, p.as_mut()) {
            if path.is_relative() {
                *path = dir.join(&*path);
            }
        }
    };
    place(&mut cli.json);
    match &mut cli.command {
        Command::Karlsson(a) => place(&mut a.out),
        Command::BuildLp(a) => place(&mut a.out),
        Command::Solve(a) => place(&mut a.out),
        Command::Table1(a) => {
            place(&mut a.out);
            place(&mut a.export);
        }
        Command::Eval(_) | Command::GammaSpace(_) | Command::Verify(_) => {}
    }
    if let Some(p) = &cli.json {
        ensure_parent(p)?;
    }
    Ok(())
}

fn run(cli: &Cli) -> anyhow::Result<Outcome> {
    println!("seed: {}", cli.seed);
    match &cli.command {
        Command::Karlsson(a) => karlsson_cmd(a),
        Command::Eval(a) => eval_cmd(a),
        Command::GammaSpace(a) => gamma_cmd(a),
        Command::BuildLp(a) => build_cmd(a),
        Command::Solve(a) => solve_cmd(a),
        Command::Verify(a) => verify_cmd(a, cli.seed),
        Command::Table1(a) => table1_cmd(a),
    }
}

fn ensure_parent(path: &Path) -> anyhow::Result<()> {
    match path.parent() {
        Some(dir) if !dir.as_os_str().is_empty() && !dir.is_dir() => {
            bail!("output directory {} does not exist", dir.display())
        }
        _ => Ok(()),
    }
}

fn ensure_file(path: &Path) -> anyhow::Result<()> {
    if !path.is_file() {
        bail!("input file {} does not exist", path.display());
    }
    Ok(())
}

fn karlsson_cmd(a: &KarlssonArgs) -> anyhow::Result<Outcome> {
    if let Some(out) = &a.out {
        ensure_parent(out)?;
    }
    let params = KarlssonParams::new(a.theta, a.phi, a.z1_arg).with_branches(a.branches);
    let b = karlsson::blocks(&params)?;
    let k = karlsson::build(&params)?;
    let residual = k.unitarity_residual();
    println!("{}", k.label());
    println!("hadamard residual: {}", sig(residual));
    println!("consistency residual: {}", sig(b.zs.consistency_residual));
    for (name, z) in [
        ("z1", b.z1),
        ("z2", b.zs.z2),
        ("z3", b.zs.z3),
        ("z4", b.zs.z4),
    ] {
        println!("{name} = {}", cx(z.re, z.im));
    }
    for row in k.rows() {
        let cells: Vec<String> = row
            .iter()
            .map(|z| format!("{}π", sig(z.arg() / std::f64::consts::PI)))
            .collect();
        println!("  [{}]", cells.join(", "));
    }
    if let Some(out) = &a.out {
        k.save(out)?;
        let back = PhaseMatrix::load(out)?;
        if !matrix::is_hadamard(&back, TOL_UNITARY) {
            bail!("reloaded matrix is not Hadamard");
        }
        println!("wrote {}", out.display());
    }
    Ok(Outcome::ok(json!({
        "command": "karlsson",
        "label": k.label(),
        "theta": a.theta, "phi": a.phi, "z1_arg": a.z1_arg,
        "branches": a.branches.to_string(),
        "hadamard_residual": residual,
        "consistency_residual": b.zs.consistency_residual,
        "matrix": serde_json::from_str::<Value>(&k.to_json()?)?,
    })))
}

fn parse_triple(s: &str) -> anyhow::Result<(f64, f64, f64)> {
    let v: Vec<f64> = s
        .split(',')
        .map(|t| t.trim().parse::<f64>())
        .collect::<Result<_, _>>()?;
    match v[..] {
        [a, b, c] => Ok((a, b, c)),
        _ => bail!("expected three comma-separated numbers, got `{s}`"),
    }
}

fn eval_cmd(a: &EvalArgs) -> anyhow::Result<Outcome> {
    let mut set: Vec<PhaseMatrix> = Vec::new();
    for p in &a.matrices {
        ensure_file(p)?;
        set.push(PhaseMatrix::load(p).with_context(|| format!("loading {}", p.display()))?);
    }
    if let Some(s) = &a.karlsson {
        let (t, p, z) = parse_triple(s)?;
        set.push(karlsson::build(&KarlssonParams::new(t, p, z))?);
    }
    if a.spectral {
        set.push(matrix::spectral_matrix());
    }
    if let Some(d) = a.fourier {
        set.push(matrix::fourier_matrix(d));
    }
    if let Some(d) = a.mub_set {
        set.extend(mublp::mub::complete_mub_set(d)?);
    }
    if set.is_empty() {
        bail!("no matrices given (use --matrix, --karlsson, --spectral, --fourier or --mub-set)");
    }
    for m in &set {
        m.check_phases(TOL_ENTRY)?;
    }
    println!("gamma = {}", a.gamma);
    let mut per = Vec::new();
    for m in &set {
        let g = fourier::g_single(m, &a.gamma)?;
        let gj = fourier::g_norm_single(m, &a.gamma)?;
        println!(
            "{}: g = {}  |g| = {}  G_j = {}",
            m.label(),
            cx(g.re, g.im),
            sig(g.norm()),
            sig(gj)
        );
        per.push(json!({"label": m.label(), "g": [g.re, g.im], "g_abs": g.norm(), "G_j": gj}));
    }
    let f = fourier::f_set(&set, &a.gamma)?;
    let (ff, gg) = fourier::functionals(&set, &a.gamma)?;
    println!(
        "set: f = {}  F = {}  G = {}",
        cx(f.re, f.im),
        sig(ff),
        sig(gg)
    );
    Ok(Outcome::ok(json!({
        "command": "eval",
        "gamma": a.gamma,
        "matrices": per,
        "f": [f.re, f.im],
        "F": ff,
        "G": gg,
    })))
}

fn gamma_cmd(a: &GammaArgs) -> anyhow::Result<Outcome> {
    if a.d == 0 {
        bail!("--d must be positive");
    }
    let space = GammaSpace::new(a.d, a.l);
    let st = space.stats();
    println!("d = {}  l = {}", st.d, st.l);
    println!("orbits: {}", st.orbits);
    println!("raw points: {}", st.raw_points);
    println!(
        "orbit table: {} MB  raw table: {} MB",
        sig(st.orbit_table_mb),
        sig(st.raw_table_mb)
    );
    if a.list {
        for o in &space.orbits {
            println!("  {}  |γ|₁={}  size={}", o.rep, o.l1_norm, o.orbit_size);
        }
    }
    let mut report = json!({ "command": "gamma-space", "stats": st });
    if a.list {
        report["orbits"] = serde_json::to_value(&space.orbits)?;
    }
    Ok(Outcome::ok(report))
}

fn build_model(m: &ModelArgs) -> anyhow::Result<LpProblem> {
    Ok(lp::build_lp(m.d, m.l, m.karlsson_mode, m.variant)?)
}

fn print_stats(p: &LpProblem) -> Value {
    let st = p.stats();
    println!(
        "d = {}  l = {}  karlsson_mode = {}  variant = {}",
        p.d, p.l, p.karlsson_mode, p.cross_variant
    );
    println!(
        "variables: {}  rows: {}  nonzeros: {}",
        st.variables, st.rows, st.nonzeros
    );
    let kinds: Vec<String> = st
        .rows_by_kind
        .iter()
        .map(|(k, n)| format!("{k}={n}"))
        .collect();
    println!("rows by kind: {}", kinds.join(" "));
    println!(
        "memory: sparse {} MB, dense tableau {} MB",
        sig(st.sparse_mb),
        sig(st.dense_mb)
    );
    serde_json::to_value(st).unwrap()
}

fn build_cmd(a: &BuildArgs) -> anyhow::Result<Outcome> {
    if let Some(out) = &a.out {
        ensure_parent(out)?;
    }
    let p = build_model(&a.model)?;
    let stats = print_stats(&p);
    let rho = a
        .rho
        .clone()
        .unwrap_or_else(|| ExponentVector::structural(a.model.d));
    let p = p.set_objective(a.sense.into(), a.family, &rho)?;
    let target = &p.variables[p.objective.unwrap().column];
    println!(
        "objective: {:?} {}{} (column {})",
        a.sense,
        a.family.prefix(),
        target.orbit.rep,
        target.name
    );
    let mut report =
        json!({ "command": "build-lp", "stats": stats, "objective_column": target.name });
    if let Some(out) = &a.out {
        let meta = mps::export_mps(&p, out)?;
        println!("wrote {} and {}", out.display(), meta.display());
        report["mps"] = json!(out);
        report["meta"] = json!(meta);
    }
    Ok(Outcome::ok(report))
}

fn report_solution(p: &LpProblem, s: &LpSolution) -> anyhow::Result<(Value, u8)> {
    println!("status: {:?}", s.status);
    if let Some(v) = s.objective {
        println!("objective: {}", sig(v));
    }
    if let Some(v) = &s.objective_exact {
        println!("objective (exact): {v}");
    }
    println!("iterations: {}", s.iterations);
    let mut report = json!({ "solution": s });
    if s.status == Status::Optimal {
        let c = lp::verify_solution(p, s, 1e-6)?;
        print_check(&c);
        let pass = c.pass;
        report["check"] = serde_json::to_value(c)?;
        return Ok((report, if pass { 0 } else { EXIT_VERIFY }));
    }
    Ok((report, EXIT_SOLVER))
}

fn print_check(c: &lp::SolutionCheck) {
    println!(
        "check: {}  max row violation {}  max bound violation {}",
        if c.pass { "PASS" } else { "FAIL" },
        sig(c.max_row_violation),
        sig(c.max_bound_violation)
    );
    if let Some(b) = c.dual_bound {
        println!(
            "dual bound: {}  (gap {})",
            sig(b),
            sig((c.objective - b).abs())
        );
    }
    if let Some(e) = c.exact_feasible {
        println!("exact feasibility: {e}");
    }
    for v in c.violated_rows.iter().take(20) {
        println!("  violated {}: {}", v.row, sig(v.residual));
    }
}

fn solve_cmd(a: &SolveArgs) -> anyhow::Result<Outcome> {
    ensure_file(&a.model)?;
    if let Some(out) = &a.out {
        ensure_parent(out)?;
    }
    let opts = a.solver.options()?;
    let p = mps::import_mps(&a.model)?;
    if p.objective.is_none() {
        bail!("model has no objective");
    }
    print_stats(&p);
    if let Some(path) = &a.check {
        ensure_file(path)?;
        let s = LpSolution::load(path)?;
        let c = lp::verify_solution(&p, &s, a.solver.tol.max(1e-6))?;
        print_check(&c);
        let code = if c.pass { 0 } else { EXIT_VERIFY };
        return Ok(Outcome {
            report: json!({ "command": "solve", "check": c }),
            code,
        });
    }
    let s = lp::solve(&p, &opts)?;
    if let Some(out) = &a.out {
        s.save(out)?;
        println!("wrote {}", out.display());
    }
    let (mut report, code) = report_solution(&p, &s)?;
    report["command"] = json!("solve");
    Ok(Outcome { report, code })
}

fn parse_grid(s: &str) -> anyhow::Result<ParamGrid> {
    let v: Vec<usize> = s
        .split(',')
        .map(|t| t.trim().parse::<usize>())
        .collect::<Result<_, _>>()?;
    match v[..] {
        [a, b, c] if a > 0 && b > 0 && c > 0 => Ok(ParamGrid {
            n_theta: a,
            n_phi: b,
            n_z1: c,
        }),
        _ => bail!("--grid needs three positive sizes, got `{s}`"),
    }
}

fn print_report(r: &VerificationReport) {
    println!("{}", r.summary());
    for (k, v) in &r.values {
        println!("  {k} = {}", sig(*v));
    }
    for n in &r.notes {
        println!("  {n}");
    }
    for f in &r.failures {
        println!("  failing: {}  residual {}", f.params, sig(f.value));
    }
    if r.singular > 0 {
        println!(
            "  singular points: {} (first: {})",
            r.singular,
            r.singular_points.first().map_or("", |s| s.as_str())
        );
    }
}

fn verify_cmd(a: &VerifyArgs, seed: u64) -> anyhow::Result<Outcome> {
    let grid = parse_grid(&a.grid)?;
    let report = match a.claim {
        Claim::Theorem1 => verify::verify_theorem1(&grid, a.tol.unwrap_or(1e-9), seed)?,
        Claim::Construction => verify::verify_construction(&grid, a.tol.unwrap_or(1e-9))?,
        Claim::Identities => verify::verify_identities(&grid, a.tol.unwrap_or(1e-9))?,
        Claim::Spectral => verify::verify_spectral_counterexample()?,
        Claim::Constraints => {
            let set = match a.d {
                6 => vec![karlsson::build(&KarlssonParams::new(0.3, 1.1, 0.7))?],
                d => mublp::mub::complete_mub_set(d)?,
            };
            verify::verify_constraint_identities(&set, a.samples, seed, a.tol.unwrap_or(1e-7))?
        }
        Claim::Witness => {
            let l = a.l.unwrap_or(2 * a.d as u32);
            verify::verify_lp_witness(a.d, l, a.variant, a.tol.unwrap_or(1e-6))?
        }
    };
    print_report(&report);
    let code = if report.pass { 0 } else { EXIT_VERIFY };
    Ok(Outcome {
        report: json!({ "command": "verify", "report": report }),
        code,
    })
}

fn table1_cmd(a: &Table1Args) -> anyhow::Result<Outcome> {
    for p in a.export.iter().chain(a.out.iter()) {
        ensure_parent(p)?;
    }
    let opts = a.solver.options()?;
    let p = build_model(&a.model)?;
    let stats = print_stats(&p);
    let p = match p.set_objective(Sense::Min, a.family, &a.rho) {
        Ok(p) => p,
        Err(mublp::Error::OutsideSpace { rep, l1, l }) => {
            println!(
                "{}({}): n/a — |ρ|₁ = {l1} lies outside the ball of radius {l} (rep {rep:?})",
                a.family.prefix(),
                a.rho
            );
            return Ok(Outcome::ok(json!({
                "command": "table1", "stats": stats, "rho": a.rho, "value": "n/a", "l1": l1, "l": l,
            })));
        }
        Err(e) => return Err(e.into()),
    };
    let mut report = json!({ "command": "table1", "stats": stats, "rho": a.rho });
    if let Some(path) = &a.export {
        let meta = mps::export_mps(&p, path)?;
        println!("wrote {} and {}", path.display(), meta.display());
        report["mps"] = json!(path);
    }
    if a.solve == SolveWith::None {
        return Ok(Outcome::ok(report));
    }
    if a.model.d == 6 && a.model.l > 12 {
        eprintln!(
            "warning: the embedded dense simplex is slow beyond l = 12 (this instance has {} rows); \
             consider --export with an external solver and `solve --check`",
            p.rows.len()
        );
    }
    let s = lp::solve(&p, &opts)?;
    if let Some(out) = &a.out {
        s.save(out)?;
    }
    let (sol, code) = report_solution(&p, &s)?;
    report["solution"] = sol["solution"].clone();
    if let Some(c) = sol.get("check") {
        report["check"] = c.clone();
    }
    if let Some(v) = s.objective {
        println!("lower bound {}({}) >= {}", a.family.prefix(), a.rho, sig(v));
    }
    Ok(Outcome { report, code })
}
