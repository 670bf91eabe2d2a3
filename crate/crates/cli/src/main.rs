use std::collections::BTreeMap;
use std::fs;
use std::io::{self, Read, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Duration;

use atsp_core::bench::{append_csv, bench_suite, write_csv, BenchConfig, BenchOptions, BenchRow};
use atsp_core::generate::gen_random;
use atsp_core::oracle::{dp_oracle, INFEASIBLE};
use atsp_core::scheduler::PropagatorStats;
use atsp_core::tsplib::{circuit_to_path, parse_tsplib, path_to_circuit, read_tsplib, write_full_matrix};
use atsp_core::{solve, Heuristic, Instance, Mode, ModelConfig, Relax, SearchResult, SolveConfig, Status};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

#[derive(Parser, Debug)]
#[command(name = "atsp", version, about = "CP branch-and-bound for the asymmetric TSP")]
#[command(args_conflicts_with_subcommands = true, subcommand_negates_reqs = true)]
struct Cli {
    #[command(subcommand)]
    command: Option<Command>,
    #[command(flatten)]
    run: RunArgs,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Write a random instance as a TSPLIB file.
    Gen(GenArgs),
    /// Run every instance of a directory against a set of configurations.
    Bench(BenchArgs),
    /// Print the exact optimum computed by dynamic programming.
    Oracle(OracleArgs),
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Table,
    Csv,
    Json,
}

#[derive(Args, Debug)]
struct RunArgs {
    /// TSPLIB file, `-` for standard input.
    #[arg(long, required = true)]
    instance: Option<PathBuf>,
    #[arg(long, default_value = "enforceSparse")]
    heuristic: Heuristic,
    #[arg(long, default_value = "basic")]
    model: ModelConfig,
    #[arg(long, default_value = "tree")]
    relax: Relax,
    /// Prove that a path of cost at most UB exists.
    #[arg(long, value_name = "UB", conflicts_with = "optimize")]
    prove: Option<i64>,
    /// Minimize (the default when --prove is absent).
    #[arg(long)]
    optimize: bool,
    /// Time limit in seconds.
    #[arg(long, value_name = "S")]
    time_limit: Option<f64>,
    #[arg(long, value_name = "N")]
    node_limit: Option<u64>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// City split into the path endpoints.
    #[arg(long, default_value_t = 0)]
    home: usize,
    #[arg(long, value_enum, default_value_t = Format::Table)]
    format: Format,
    #[arg(long, value_name = "PATH")]
    out: Option<PathBuf>,
    /// Omit timings so that reports are byte-identical across runs.
    #[arg(long)]
    no_timing: bool,
}

#[derive(Args, Debug)]
struct GenArgs {
    #[arg(long)]
    n: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = 1)]
    min_cost: i64,
    #[arg(long, default_value_t = 100)]
    max_cost: i64,
    #[arg(long, default_value_t = 1.0)]
    density: f64,
    #[arg(long, default_value_t = 1)]
    clusters: usize,
    #[arg(long, value_name = "PATH")]
    out: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct BenchArgs {
    /// Directory of .tsp / .atsp files.
    #[arg(long)]
    dir: PathBuf,
    #[arg(long, value_delimiter = ',', default_value = "enforceSparse")]
    heuristics: Vec<Heuristic>,
    #[arg(long, value_delimiter = ',', default_value = "basic")]
    models: Vec<ModelConfig>,
    #[arg(long, value_delimiter = ',', default_value = "tree")]
    relax: Vec<Relax>,
    #[arg(long, value_name = "S", default_value_t = 1800.0)]
    time_limit: f64,
    #[arg(long, value_name = "N")]
    node_limit: Option<u64>,
    #[arg(long, default_value_t = 0)]
    home: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Prove-mode bound for one instance, as NAME=UB. Repeatable.
    #[arg(long = "bound", value_name = "NAME=UB", value_parser = parse_bound)]
    bounds: Vec<(String, i64)>,
    /// Compute prove-mode bounds with the exact oracle where it fits.
    #[arg(long)]
    oracle_bounds: bool,
    /// Append rows to this CSV file instead of writing to standard output.
    #[arg(long, value_name = "PATH")]
    out: Option<PathBuf>,
    #[arg(long)]
    no_timing: bool,
}

#[derive(Args, Debug)]
struct OracleArgs {
    #[arg(long)]
    instance: PathBuf,
    #[arg(long, default_value_t = 0)]
    home: usize,
}

fn parse_bound(s: &str) -> Result<(String, i64), String> {
    let (name, ub) = s.split_once('=').ok_or_else(|| format!("expected NAME=UB, got '{s}'"))?;
    let ub = ub.trim().parse().map_err(|e| format!("bad bound in '{s}': {e}"))?;
    Ok((name.trim().to_string(), ub))
}

#[derive(Serialize)]
struct RunReport<'a> {
    instance: &'a str,
    n: usize,
    heuristic: &'static str,
    model: &'static str,
    relax: &'static str,
    mode: String,
    status: Status,
    objective: Option<i64>,
    nodes: u64,
    time_s: Option<f64>,
    root_lb: i64,
    path: Option<&'a [usize]>,
    propagators: &'a [PropagatorStats],
}

fn load(path: &Path, home: usize) -> Result<Instance, String> {
    let raw = if path == Path::new("-") {
        let mut text = String::new();
        io::stdin().read_to_string(&mut text).map_err(|e| e.to_string())?;
        parse_tsplib(&text)
    } else {
        read_tsplib(path)
    }
    .map_err(|e| format!("{}: {e}", path.display()))?;
    if home >= raw.dimension {
        return Err(format!("--home {home} out of range for dimension {}", raw.dimension));
    }
    Ok(circuit_to_path(&raw, home))
}

fn emit(out: Option<&Path>, text: &str) -> Result<(), String> {
    match out {
        Some(p) => fs::write(p, text).map_err(|e| format!("{}: {e}", p.display())),
        None => io::stdout().write_all(text.as_bytes()).map_err(|e| e.to_string()),
    }
}

fn render(report: &RunReport<'_>, format: Format) -> Result<String, String> {
    match format {
        Format::Json => serde_json::to_string_pretty(report).map(|s| s + "\n").map_err(|e| e.to_string()),
        Format::Csv => {
            let row = BenchRow {
                instance: report.instance.to_string(),
                heuristic: report.heuristic.to_string(),
                model: report.model.to_string(),
                status: report.status.name().to_string(),
                nodes: report.nodes,
                time_s: report.time_s,
            };
            let mut buf = Vec::new();
            write_csv(&mut buf, &[row], report.time_s.is_some()).map_err(|e| e.to_string())?;
            String::from_utf8(buf).map_err(|e| e.to_string())
        }
        Format::Table => {
            let mut s = String::new();
            let obj = report.objective.map_or("-".to_string(), |c| c.to_string());
            let time = report.time_s.map_or("-".to_string(), |t| format!("{t:.3}"));
            for (k, v) in [
                ("instance", report.instance.to_string()),
                ("n", report.n.to_string()),
                ("heuristic", report.heuristic.to_string()),
                ("model", report.model.to_string()),
                ("relax", report.relax.to_string()),
                ("mode", report.mode.clone()),
                ("status", report.status.name().to_string()),
                ("objective", obj),
                ("root_lb", report.root_lb.to_string()),
                ("nodes", report.nodes.to_string()),
                ("time_s", time),
            ] {
                s.push_str(&format!("{k:<10} {v}\n"));
            }
            s.push_str(&format!("{:<22} {:>8} {:>9} {:>9} {:>9}\n", "propagator", "runs", "removals", "enforced", "failures"));
            for p in report.propagators {
                s.push_str(&format!(
                    "{:<22} {:>8} {:>9} {:>9} {:>9}\n",
                    p.name, p.runs, p.removals, p.enforcements, p.failures
                ));
            }
            Ok(s)
        }
    }
}

fn exit_for(status: Status) -> ExitCode {
    if status.is_limit() {
        ExitCode::from(2)
    } else {
        ExitCode::SUCCESS
    }
}

fn run(args: RunArgs) -> Result<ExitCode, String> {
    let path = args.instance.ok_or("--instance is required")?;
    let inst = load(&path, args.home)?;
    let mode = match args.prove {
        Some(ub) => Mode::Prove(ub),
        None => Mode::Optimize,
    };
    let cfg = SolveConfig {
        mode,
        heuristic: args.heuristic,
        model: args.model,
        relax: args.relax,
        time_limit: args.time_limit.map(Duration::from_secs_f64),
        node_limit: args.node_limit,
        seed: args.seed,
    };
    let r: SearchResult = solve(&inst, &cfg);
    let report = RunReport {
        instance: &inst.name,
        n: inst.n,
        heuristic: args.heuristic.name(),
        model: args.model.name(),
        relax: args.relax.name(),
        mode: match mode {
            Mode::Prove(ub) => format!("prove({ub})"),
            Mode::Optimize => "optimize".to_string(),
        },
        status: r.status,
        objective: r.objective,
        nodes: r.nodes,
        time_s: (!args.no_timing).then_some(r.time_s),
        root_lb: r.root_lb,
        path: r.path.as_deref(),
        propagators: &r.propagators,
    };
    emit(args.out.as_deref(), &render(&report, args.format)?)?;
    Ok(exit_for(r.status))
}

fn gen(args: GenArgs) -> Result<ExitCode, String> {
    if args.n < 3 {
        return Err("--n must be at least 3".into());
    }
    if !(args.density > 0.0 && args.density <= 1.0) {
        return Err("--density must lie in (0, 1]".into());
    }
    if args.min_cost > args.max_cost {
        return Err("--min-cost exceeds --max-cost".into());
    }
    let inst = gen_random(args.n, args.seed, (args.min_cost, args.max_cost), args.density, args.clusters);
    emit(args.out.as_deref(), &write_full_matrix(&path_to_circuit(&inst)))?;
    Ok(ExitCode::SUCCESS)
}

fn bench(args: BenchArgs) -> Result<ExitCode, String> {
    let mut configs = Vec::new();
    for &heuristic in &args.heuristics {
        for &model in &args.models {
            for &relax in &args.relax {
                configs.push(BenchConfig { heuristic, model, relax });
            }
        }
    }
    let mut bounds: BTreeMap<String, i64> = args.bounds.into_iter().collect();
    if args.oracle_bounds {
        let mut entries: Vec<PathBuf> = fs::read_dir(&args.dir)
            .map_err(|e| format!("{}: {e}", args.dir.display()))?
            .filter_map(|e| e.ok().map(|e| e.path()))
            .filter(|p| p.extension().is_some_and(|x| x == "tsp" || x == "atsp"))
            .collect();
        entries.sort();
        for p in entries {
            let Ok(inst) = load(&p, args.home) else { continue };
            if let Ok(opt) = dp_oracle(&inst) {
                if opt != INFEASIBLE {
                    bounds.entry(inst.name.clone()).or_insert(opt);
                }
            }
        }
    }
    let opts = BenchOptions {
        time_limit: Some(Duration::from_secs_f64(args.time_limit)),
        node_limit: args.node_limit,
        home: args.home,
        bounds,
        seed: args.seed,
    };
    let rows = bench_suite(&configs, &args.dir, &opts).map_err(|e| format!("{}: {e}", args.dir.display()))?;
    let timing = !args.no_timing;
    match &args.out {
        Some(p) => append_csv(p, &rows, timing).map_err(|e| format!("{}: {e}", p.display()))?,
        None => write_csv(io::stdout(), &rows, timing).map_err(|e| e.to_string())?,
    }
    Ok(ExitCode::SUCCESS)
}

fn oracle(args: OracleArgs) -> Result<ExitCode, String> {
    let inst = load(&args.instance, args.home)?;
    let opt = dp_oracle(&inst).map_err(|e| e.to_string())?;
    if opt == INFEASIBLE {
        println!("infeasible");
    } else {
        println!("{opt}");
    }
    Ok(ExitCode::SUCCESS)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let result = match cli.command {
        Some(Command::Gen(a)) => gen(a),
        Some(Command::Bench(a)) => bench(a),
        Some(Command::Oracle(a)) => oracle(a),
        None => run(cli.run),
    };
    match result {
        Ok(code) => code,
        Err(msg) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
    }
}
