//! Command-line front end. `smc <command> …`; see `smc --help`.
//!
//! Exit codes: 10 SAT, 20 UNSAT, 30 budget exhausted, 0/2 for verify
//! pass/fail, 1 on any error.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::time::Duration;

use clap::{Args, Parser, Subcommand, ValueEnum};
use rayon::prelude::*;

use crate::circuit::{parse_pc, write_pc, NumericMode};
use crate::compile::{compile, compile_default, parse_uai, write_uai};
use crate::error::{Error, Result};
use crate::formula::{write_dimacs, Lit, Var};
use crate::oracle::{brute_solve_with, verify_with, MarginalRoute, OracleConfig};
use crate::problems::{
    encode_hamiltonian_path, gen_kcolor, gen_random_bn, gen_smc, load_manifest, parse_edge_list,
    shuffle_vars, supply_problem, write_problem, GraphSpec, GridSpec, LayeredNetwork, SmcGenParams,
};
use crate::solver::{solve, Cmp, SmcProblem, SolveResult, SolverConfig, Stats, Status};
use crate::sweep::{sweep, Direction, SweepOptions, DEFAULT_STEP};

pub const EXIT_SAT: i32 = 10;
pub const EXIT_UNSAT: i32 = 20;
pub const EXIT_BUDGET: i32 = 30;
pub const EXIT_ERROR: i32 = 1;
pub const EXIT_VERIFY_FAIL: i32 = 2;

pub const BENCH_HEADER: &str =
    "instance,q,status,decisions,propagations,bool_conflicts,prob_conflicts,learned,restarts,wall_ms";

#[derive(Debug, Parser)]
#[command(name = "smc", version, about = "Exact satisfiability modulo counting")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Solve the problem described by a manifest.
    Solve(SolveArgs),
    /// Check a model file against a manifest.
    Verify { manifest: PathBuf, model: PathBuf },
    /// Solve by exhaustive enumeration.
    Oracle(OracleArgs),
    /// Generate instances.
    #[command(subcommand)]
    Gen(GenCommand),
    /// Compile a UAI network into a circuit file.
    Compile {
        uai: PathBuf,
        /// Comma-separated variable order (default ascending).
        #[arg(long, value_delimiter = ',')]
        order: Option<Vec<u32>>,
        #[arg(short, long)]
        output: PathBuf,
    },
    /// Sweep one predicate's threshold until the problem becomes UNSAT.
    Sweep(SweepArgs),
    /// Solve every manifest in a directory and write per-instance stats.
    Bench(BenchArgs),
    /// Circuit utilities.
    #[command(subcommand)]
    Pc(PcCommand),
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum ModeArg {
    Linear,
    Log,
}

impl From<ModeArg> for NumericMode {
    fn from(m: ModeArg) -> Self {
        match m {
            ModeArg::Linear => NumericMode::Linear,
            ModeArg::Log => NumericMode::Log,
        }
    }
}

#[derive(Debug, Args)]
pub struct SolverArgs {
    /// Disable bound propagation; predicates are checked only once all
    /// their shared variables are assigned.
    #[arg(long)]
    pub no_ulw: bool,
    #[arg(long, value_enum, default_value = "linear")]
    pub mode: ModeArg,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long)]
    pub budget_conflicts: Option<u64>,
    #[arg(long)]
    pub budget_seconds: Option<f64>,
}

impl SolverArgs {
    fn config(&self) -> SolverConfig {
        SolverConfig {
            ulw: !self.no_ulw,
            mode: self.mode.into(),
            seed: self.seed,
            conflict_budget: self.budget_conflicts,
            time_budget: self.budget_seconds.map(Duration::from_secs_f64),
            ..Default::default()
        }
    }
}

#[derive(Debug, Args)]
pub struct SolveArgs {
    pub manifest: PathBuf,
    #[command(flatten)]
    pub solver: SolverArgs,
    /// Print `c stat` lines.
    #[arg(long)]
    pub stats: bool,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum RouteArg {
    Circuit,
    Network,
}

#[derive(Debug, Args)]
pub struct OracleArgs {
    pub manifest: PathBuf,
    #[arg(long, default_value_t = crate::compile::ENUMERATION_CAP)]
    pub cap: usize,
    #[arg(long, value_enum, default_value = "linear")]
    pub mode: ModeArg,
    #[arg(long, value_enum, default_value = "circuit")]
    pub route: RouteArg,
}

#[derive(Debug, Subcommand)]
pub enum GenCommand {
    /// Grid graph k-coloring formula.
    Kcolor {
        #[arg(long)]
        rows: usize,
        #[arg(long)]
        cols: usize,
        #[arg(long, default_value_t = 3)]
        colors: usize,
        /// Rename variables by a seeded permutation.
        #[arg(long)]
        shuffle: bool,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(short, long)]
        output: PathBuf,
    },
    /// Random Bayesian network in UAI format.
    Bn {
        #[arg(long)]
        n: u32,
        #[arg(long, default_value_t = 5)]
        max_parents: usize,
        #[arg(long, default_value_t = 0.5)]
        edge_fraction: f64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(short, long)]
        output: PathBuf,
    },
    /// Layered supply network with a random disaster network; writes a
    /// directory with the formula, networks, circuit and manifest.
    Supply {
        #[arg(long, value_delimiter = ',', required = true)]
        layers: Vec<usize>,
        #[arg(long, default_value_t = 2)]
        k_up: usize,
        #[arg(long, default_value_t = 2)]
        k_down: usize,
        /// Success-probability threshold for the manifest.
        #[arg(long, default_value_t = 0.0)]
        threshold: f64,
        #[arg(long, default_value_t = 5)]
        max_parents: usize,
        #[arg(long, default_value_t = 0.5)]
        edge_fraction: f64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(short, long)]
        output: PathBuf,
    },
    /// Hamiltonian path formula plus manifest; optional random network
    /// predicate over the position variables.
    Hampath {
        /// Edge-list file (`u v` per line).
        #[arg(long, conflicts_with = "complete")]
        graph: Option<PathBuf>,
        /// Use the complete graph on this many nodes.
        #[arg(long)]
        complete: Option<usize>,
        #[arg(long, default_value_t = 0)]
        bn_vars: u32,
        #[arg(long, default_value_t = 0.1)]
        fraction: f64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(short, long)]
        output: PathBuf,
    },
    /// Grid coloring formula with random network predicates.
    Smc {
        #[arg(long, default_value_t = 2)]
        rows: usize,
        #[arg(long, default_value_t = 2)]
        cols: usize,
        #[arg(long, default_value_t = 3)]
        colors: usize,
        #[arg(long, default_value_t = 8)]
        bn_vars: u32,
        #[arg(long, default_value_t = 1)]
        predicates: usize,
        /// Threshold as a fraction of the partition value.
        #[arg(long, default_value_t = 0.1)]
        fraction: f64,
        #[arg(long, default_value = "ge")]
        cmp: Cmp,
        /// Link each predicate to a fresh literal instead of enforcing it.
        #[arg(long)]
        soft: bool,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(short, long)]
        output: PathBuf,
    },
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum DirectionArg {
    Up,
    Down,
}

#[derive(Debug, Args)]
pub struct SweepArgs {
    pub manifest: PathBuf,
    #[arg(long, default_value_t = 0)]
    pub predicate: usize,
    #[arg(long, value_enum, default_value = "up")]
    pub direction: DirectionArg,
    #[arg(long, default_value_t = DEFAULT_STEP)]
    pub step: f64,
    #[arg(long, default_value_t = 0.0)]
    pub lo: f64,
    #[arg(long, default_value_t = 1.0)]
    pub hi: f64,
    #[arg(long)]
    pub trace: Option<PathBuf>,
    #[command(flatten)]
    pub solver: SolverArgs,
}

#[derive(Debug, Args)]
pub struct BenchArgs {
    /// Directory of manifests (`*.json`).
    pub suite: PathBuf,
    #[arg(long, conflicts_with = "without_ulw")]
    pub with_ulw: bool,
    #[arg(long)]
    pub without_ulw: bool,
    #[arg(long)]
    pub csv: Option<PathBuf>,
    #[arg(long, default_value_t = 1)]
    pub jobs: usize,
    #[arg(long, value_enum, default_value = "linear")]
    pub mode: ModeArg,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long)]
    pub budget_conflicts: Option<u64>,
}

#[derive(Debug, Subcommand)]
pub enum PcCommand {
    /// Report smoothness and decomposability.
    Validate { circuit: PathBuf },
    Partition {
        circuit: PathBuf,
        #[arg(long, value_enum, default_value = "linear")]
        mode: ModeArg,
    },
    /// Marginal under a partial assignment like `0=1,3=0`.
    Marginal {
        circuit: PathBuf,
        #[arg(long, default_value = "")]
        assign: String,
        #[arg(long, value_enum, default_value = "linear")]
        mode: ModeArg,
    },
}

/// Parses `args` (including the program name) and runs the command.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_ERROR } else { 0 };
            let _ = if e.use_stderr() {
                write!(err, "{e}")
            } else {
                write!(out, "{e}")
            };
            return code;
        }
    };
    match execute(cli.command, out) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            EXIT_ERROR
        }
    }
}

fn io_err(path: &Path) -> impl FnOnce(std::io::Error) -> Error + '_ {
    move |e| Error::io(path, e)
}

fn write_file(path: &Path, body: &str) -> Result<()> {
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        fs::create_dir_all(dir).map_err(io_err(dir))?;
    }
    fs::write(path, body).map_err(io_err(path))
}

fn read_file(path: &Path) -> Result<String> {
    fs::read_to_string(path).map_err(io_err(path))
}

fn status_code(s: Status) -> i32 {
    match s {
        Status::Sat => EXIT_SAT,
        Status::Unsat => EXIT_UNSAT,
        Status::BudgetExhausted => EXIT_BUDGET,
    }
}

fn status_line(s: Status) -> &'static str {
    match s {
        Status::Sat => "s SATISFIABLE",
        Status::Unsat => "s UNSATISFIABLE",
        Status::BudgetExhausted => "s UNKNOWN",
    }
}

/// `v` line with every variable as a signed DIMACS literal.
pub fn model_line(model: &[bool]) -> String {
    let mut s = String::from("v");
    for (i, &val) in model.iter().enumerate() {
        let l = Var::new(i as u32).lit(val);
        s.push(' ');
        s.push_str(&l.dimacs().to_string());
    }
    s.push_str(" 0");
    s
}

/// Reads a model from `v` lines (or bare literal lines); `s`/`c` lines are
/// skipped. Every variable must appear exactly once.
pub fn parse_model(text: &str, num_vars: usize) -> Result<Vec<bool>> {
    let mut values = vec![None; num_vars];
    for (i, line) in text.lines().enumerate() {
        let line = line.trim();
        let body = match line.split_once(char::is_whitespace) {
            _ if line.is_empty() || line.starts_with('c') || line.starts_with('s') => continue,
            Some(("v", rest)) => rest,
            _ if line == "v" => continue,
            _ => line,
        };
        for tok in body.split_whitespace() {
            let n: i64 = tok
                .parse()
                .map_err(|_| Error::parse(i + 1, format!("bad literal `{tok}`")))?;
            if n == 0 {
                continue;
            }
            let l = Lit::from_dimacs(n).unwrap();
            let slot = values
                .get_mut(l.var().index())
                .ok_or_else(|| Error::parse(i + 1, format!("literal {n} out of range")))?;
            if slot.is_some() {
                return Err(Error::parse(
                    i + 1,
                    format!("variable {} assigned twice", n.abs()),
                ));
            }
            *slot = Some(l.positive());
        }
    }
    values
        .iter()
        .enumerate()
        .map(|(i, v)| {
            v.ok_or_else(|| {
                Error::InvalidArgument(format!("model leaves variable {} unassigned", i + 1))
            })
        })
        .collect()
}

fn print_result(out: &mut dyn Write, r: &SolveResult, stats: bool) -> Result<()> {
    let w = |e: std::io::Error| Error::io("<stdout>", e);
    writeln!(out, "{}", status_line(r.status)).map_err(w)?;
    if let Some(m) = &r.model {
        writeln!(out, "{}", model_line(m)).map_err(w)?;
    }
    if stats {
        print_stats(out, &r.stats)?;
    }
    Ok(())
}

fn print_stats(out: &mut dyn Write, stats: &Stats) -> Result<()> {
    for (name, value) in stats.fields() {
        writeln!(out, "c stat {name} {value}").map_err(|e| Error::io("<stdout>", e))?;
    }
    Ok(())
}

fn execute(cmd: Command, out: &mut dyn Write) -> Result<i32> {
    let w = |e: std::io::Error| Error::io("<stdout>", e);
    match cmd {
        Command::Solve(a) => {
            let p = load_manifest(&a.manifest)?;
            let r = solve(&p, a.solver.config())?;
            print_result(out, &r, a.stats)?;
            Ok(status_code(r.status))
        }
        Command::Verify { manifest, model } => {
            let p = load_manifest(&manifest)?;
            let m = parse_model(&read_file(&model)?, p.cnf.num_vars() as usize)?;
            let rep = verify_with(&p, &m, &OracleConfig::default())?;
            for line in rep.lines() {
                writeln!(out, "c {line}").map_err(w)?;
            }
            let ok = rep.passed();
            writeln!(out, "{}", if ok { "s PASS" } else { "s FAIL" }).map_err(w)?;
            Ok(if ok { 0 } else { EXIT_VERIFY_FAIL })
        }
        Command::Oracle(a) => {
            let p = load_manifest(&a.manifest)?;
            let cfg = OracleConfig {
                cap: a.cap,
                mode: a.mode.into(),
                route: match a.route {
                    RouteArg::Circuit => MarginalRoute::Circuit,
                    RouteArg::Network => MarginalRoute::FactorGraph,
                },
            };
            let r = brute_solve_with(&p, &cfg)?;
            writeln!(out, "{}", status_line(r.status)).map_err(w)?;
            if let Some(m) = r.models.first() {
                writeln!(out, "{}", model_line(m)).map_err(w)?;
            }
            writeln!(out, "c models {}", r.count()).map_err(w)?;
            Ok(status_code(r.status))
        }
        Command::Gen(g) => {
            gen(g, out)?;
            Ok(0)
        }
        Command::Compile { uai, order, output } => {
            let fg = parse_uai(&read_file(&uai)?)?;
            let c = match order {
                Some(o) => compile(&fg, &o)?,
                None => compile_default(&fg)?,
            };
            write_file(&output, &write_pc(&c))?;
            writeln!(out, "c nodes {} vars {}", c.num_nodes(), c.num_vars()).map_err(w)?;
            Ok(0)
        }
        Command::Sweep(a) => {
            let p = load_manifest(&a.manifest)?;
            let opts = SweepOptions {
                predicate: a.predicate,
                direction: match a.direction {
                    DirectionArg::Up => Direction::Up,
                    DirectionArg::Down => Direction::Down,
                },
                step: a.step,
                lo: a.lo,
                hi: a.hi,
                solver: a.solver.config(),
            };
            let r = sweep(&p, &opts)?;
            if let Some(t) = &a.trace {
                write_file(t, &r.trace_csv())?;
            }
            match (r.best_threshold, &r.best_model) {
                (Some(q), Some(m)) => {
                    writeln!(out, "c best_threshold {q}").map_err(w)?;
                    writeln!(out, "s SATISFIABLE").map_err(w)?;
                    writeln!(out, "{}", model_line(m)).map_err(w)?;
                    Ok(EXIT_SAT)
                }
                _ => {
                    writeln!(out, "c no feasible threshold in range").map_err(w)?;
                    writeln!(out, "s UNSATISFIABLE").map_err(w)?;
                    Ok(EXIT_UNSAT)
                }
            }
        }
        Command::Bench(a) => {
            let csv = bench(&a)?;
            match &a.csv {
                Some(path) => write_file(path, &csv)?,
                None => write!(out, "{csv}").map_err(w)?,
            }
            Ok(0)
        }
        Command::Pc(pc) => {
            match pc {
                PcCommand::Validate { circuit } => {
                    let c = parse_pc(&read_file(&circuit)?)?;
                    let rep = c.validation();
                    writeln!(out, "smooth {}", rep.smooth).map_err(w)?;
                    writeln!(out, "decomposable {}", rep.decomposable).map_err(w)?;
                    for v in &rep.violations {
                        writeln!(out, "violation node {} {:?}", v.node, v.kind).map_err(w)?;
                    }
                    return Ok(if rep.is_valid() { 0 } else { EXIT_VERIFY_FAIL });
                }
                PcCommand::Partition { circuit, mode } => {
                    let c = parse_pc(&read_file(&circuit)?)?;
                    writeln!(out, "{}", c.partition_in(mode.into())?).map_err(w)?;
                }
                PcCommand::Marginal {
                    circuit,
                    assign,
                    mode,
                } => {
                    let c = parse_pc(&read_file(&circuit)?)?;
                    let a = parse_assignment(&assign, c.num_vars())?;
                    writeln!(out, "{}", c.marginal_in(&a, mode.into())?).map_err(w)?;
                }
            }
            Ok(0)
        }
    }
}

fn parse_assignment(s: &str, num_vars: u32) -> Result<Vec<Option<bool>>> {
    let mut a = vec![None; num_vars as usize];
    for part in s.split(',').map(str::trim).filter(|p| !p.is_empty()) {
        let bad = || Error::InvalidArgument(format!("bad assignment `{part}`, expected var=0|1"));
        let (v, val) = part.split_once('=').ok_or_else(bad)?;
        let v: usize = v.trim().parse().map_err(|_| bad())?;
        let val = match val.trim() {
            "1" => true,
            "0" => false,
            _ => return Err(bad()),
        };
        *a.get_mut(v).ok_or_else(bad)? = Some(val);
    }
    Ok(a)
}

fn gen(g: GenCommand, out: &mut dyn Write) -> Result<()> {
    let w = |e: std::io::Error| Error::io("<stdout>", e);
    match g {
        GenCommand::Kcolor {
            rows,
            cols,
            colors,
            shuffle,
            seed,
            output,
        } => {
            if colors < 2 {
                return Err(Error::InvalidArgument("need at least two colors".into()));
            }
            let mut f = gen_kcolor(&GridSpec { rows, cols, colors });
            if shuffle {
                f = shuffle_vars(&f, seed);
            }
            write_file(&output, &write_dimacs(&f))?;
        }
        GenCommand::Bn {
            n,
            max_parents,
            edge_fraction,
            seed,
            output,
        } => {
            let bn = gen_random_bn(n, max_parents, edge_fraction, seed)?;
            write_file(&output, &write_uai(&bn))?;
        }
        GenCommand::Supply {
            layers,
            k_up,
            k_down,
            threshold,
            max_parents,
            edge_fraction,
            seed,
            output,
        } => {
            let net = LayeredNetwork::new(layers)?;
            let disaster = gen_random_bn(net.num_edges() as u32, max_parents, edge_fraction, seed)?;
            let p = supply_problem(&net, k_up, k_down, &disaster, threshold)?;
            let path = write_problem(&output, "supply", &p)?;
            write_file(&output.join("disaster.uai"), &write_uai(&disaster))?;
            writeln!(out, "c manifest {}", path.display()).map_err(w)?;
        }
        GenCommand::Hampath {
            graph,
            complete,
            bn_vars,
            fraction,
            seed,
            output,
        } => {
            let g = match (graph, complete) {
                (Some(path), _) => parse_edge_list(&read_file(&path)?)?,
                (None, Some(n)) => GraphSpec::complete(n),
                (None, None) => {
                    return Err(Error::InvalidArgument("give --graph or --complete".into()))
                }
            };
            let cnf = encode_hamiltonian_path(&g)?;
            let p = if bn_vars > 0 {
                gen_smc(
                    cnf,
                    &SmcGenParams {
                        bn_vars,
                        fraction,
                        seed,
                        ..Default::default()
                    },
                )?
            } else {
                SmcProblem::new(cnf, vec![])?
            };
            let path = write_problem(&output, "hampath", &p)?;
            writeln!(out, "c manifest {}", path.display()).map_err(w)?;
        }
        GenCommand::Smc {
            rows,
            cols,
            colors,
            bn_vars,
            predicates,
            fraction,
            cmp,
            soft,
            seed,
            output,
        } => {
            let cnf = gen_kcolor(&GridSpec { rows, cols, colors });
            let params = SmcGenParams {
                bn_vars,
                num_predicates: predicates,
                fraction,
                cmp,
                hard: !soft,
                seed,
                ..Default::default()
            };
            let p = gen_smc(cnf, &params)?;
            let path = write_problem(&output, "smc", &p)?;
            writeln!(out, "c manifest {}", path.display()).map_err(w)?;
        }
    }
    Ok(())
}

/// One CSV row per manifest in the suite directory, in file-name order.
pub fn bench(a: &BenchArgs) -> Result<String> {
    let mut manifests: Vec<PathBuf> = fs::read_dir(&a.suite)
        .map_err(io_err(&a.suite))?
        .filter_map(|e| e.ok().map(|e| e.path()))
        .filter(|p| p.extension().is_some_and(|x| x == "json"))
        .collect();
    manifests.sort();
    let cfg = SolverConfig {
        ulw: !a.without_ulw,
        mode: a.mode.into(),
        seed: a.seed,
        conflict_budget: a.budget_conflicts,
        ..Default::default()
    };
    let run_one = |path: &PathBuf| -> Result<String> {
        let p = load_manifest(path)?;
        let r = solve(&p, cfg)?;
        let q = match p.predicates.first() {
            Some(pred) => pred.resolved_threshold()?.to_string(),
            None => String::new(),
        };
        let s = &r.stats;
        let name = path.file_stem().unwrap_or_default().to_string_lossy();
        Ok(format!(
            "{name},{q},{},{},{},{},{},{},{},{:.3}",
            r.status,
            s.decisions,
            s.boolean_propagations,
            s.boolean_conflicts,
            s.prob_conflicts,
            s.learned_clauses,
            s.restarts,
            s.wall_time.as_secs_f64() * 1e3
        ))
    };
    let rows: Vec<Result<String>> = if a.jobs > 1 {
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(a.jobs)
            .build()
            .map_err(|e| Error::InvalidArgument(e.to_string()))?;
        pool.install(|| manifests.par_iter().map(run_one).collect())
    } else {
        manifests.iter().map(run_one).collect()
    };
    let mut csv = String::from(BENCH_HEADER);
    csv.push('\n');
    for row in rows {
        csv.push_str(&row?);
        csv.push('\n');
    }
    Ok(csv)
}
