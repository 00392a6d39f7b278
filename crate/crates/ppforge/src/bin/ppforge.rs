//! Command-line front end. Subcommands read a control-flow graph (edge-list
//! JSON or a DOT subset), run the requested pipeline, and print one JSON
//! report to stdout or `--output`.
//!
//! Exit codes: 0 success, 1 parse or check failure, 2 validation rejected
//! the graph, 3 a work budget tripped, 4 the brute-force oracle refused the
//! graph.

use std::fmt::Display;
use std::path::PathBuf;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};

use ppforge::benchgen::{gen_family, gen_random_cfg, Family};
use ppforge::cfg::{parse_cfg, sniff_format, validate_cfg, Cfg, CfgFormat};
use ppforge::compose::{generate_pps, Mode};
use ppforge::metrics::{cyclomatic, npath, MetricsError, MetricsReport, NPATH_STATE_BUDGET};
use ppforge::oracle::{oracle_pps, OracleLimits};
use ppforge::report;
use ppforge::tp::generate_test_paths;
use ppforge::vertexgen::{RunError, Schedule};

#[derive(Parser)]
#[command(name = "ppforge", version, about = "Prime paths and covering test paths for control-flow graphs")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Generate prime paths grouped into endpoint classes.
    Pps(PpsArgs),
    /// Generate start-to-end test paths covering every prime path.
    Tps(IoArgs),
    /// Cross-check pipelines, schedules, and the oracle on one graph.
    Verify(VerifyArgs),
    /// Structural metrics: cyclomatic number, arc-once walk count, prime
    /// path count.
    Metrics(IoArgs),
    /// Emit a generated benchmark graph as edge-list JSON.
    Gen(GenArgs),
    /// Time both pipelines on a generated graph.
    Bench(BenchArgs),
    /// Show strongly connected components and the condensation.
    Scc(IoArgs),
}

#[derive(Args)]
struct IoArgs {
    /// Input graph file.
    input: PathBuf,
    /// Input format; `auto` sniffs DOT by its `digraph` header.
    #[arg(long, value_enum, default_value_t = FormatArg::Auto)]
    format: FormatArg,
    /// Write the JSON report here instead of stdout.
    #[arg(short, long)]
    output: Option<PathBuf>,
}

#[derive(Args)]
struct PpsArgs {
    #[command(flatten)]
    io: IoArgs,
    #[arg(long, value_enum, default_value_t = ModeArg::Direct)]
    mode: ModeArg,
    #[arg(long, value_enum, default_value_t = ScheduleArg::RoundRobin)]
    schedule: ScheduleArg,
    /// Seed for the random schedule.
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Worker threads for the parallel schedule.
    #[arg(long, default_value_t = 4)]
    workers: usize,
}

#[derive(Args)]
struct VerifyArgs {
    #[command(flatten)]
    io: IoArgs,
    /// Random-schedule seeds to sweep.
    #[arg(long, default_value_t = 5)]
    seeds: u64,
    /// Fail (exit 4) instead of skipping the oracle when the graph exceeds
    /// its limits.
    #[arg(long)]
    require_oracle: bool,
}

#[derive(Args)]
struct GenArgs {
    #[arg(long, value_enum)]
    family: FamilyArg,
    /// Size parameter for the fixed families, vertex count for `random`.
    #[arg(long, default_value_t = 3)]
    k: usize,
    /// Cycle length for sequential-loops.
    #[arg(long, default_value_t = 3)]
    n: usize,
    /// Seed for the seeded families.
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Backward-arc attempts for `random`.
    #[arg(long, default_value_t = 3)]
    loop_bias: usize,
    #[arg(short, long)]
    output: Option<PathBuf>,
}

#[derive(Args)]
struct BenchArgs {
    #[command(flatten)]
    gen: GenArgs,
    /// Worker threads for the parallel run.
    #[arg(long, default_value_t = 4)]
    workers: usize,
    /// Also time the direct pipeline (slow on large graphs).
    #[arg(long)]
    direct: bool,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum FormatArg {
    Auto,
    Json,
    Dot,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum ModeArg {
    Direct,
    Compositional,
}

impl From<ModeArg> for Mode {
    fn from(m: ModeArg) -> Mode {
        match m {
            ModeArg::Direct => Mode::Direct,
            ModeArg::Compositional => Mode::Compositional,
        }
    }
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum ScheduleArg {
    RoundRobin,
    Random,
    Parallel,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum FamilyArg {
    NestedIf,
    SequentialIf,
    SingleLoop,
    SequentialLoops,
    NestedLoops,
    MixedRandom,
    Random,
}

fn fail(code: i32, msg: impl Display) -> ! {
    eprintln!("error: {msg}");
    std::process::exit(code)
}

fn load_cfg(io: &IoArgs) -> Cfg {
    let text = match std::fs::read_to_string(&io.input) {
        Ok(t) => t,
        Err(e) => fail(1, format_args!("cannot read {}: {e}", io.input.display())),
    };
    let format = match io.format {
        FormatArg::Auto => sniff_format(&text),
        FormatArg::Json => CfgFormat::EdgeListJson,
        FormatArg::Dot => CfgFormat::DotSubset,
    };
    let cfg = match parse_cfg(&text, format) {
        Ok(c) => c,
        Err(e) => fail(1, e),
    };
    let diagnostics = validate_cfg(&cfg);
    if !diagnostics.is_empty() {
        for d in &diagnostics {
            eprintln!("invalid graph: {d}");
        }
        std::process::exit(2);
    }
    cfg
}

fn emit(output: &Option<PathBuf>, text: &str) {
    match output {
        Some(path) => {
            if let Err(e) = std::fs::write(path, text) {
                fail(1, format_args!("cannot write {}: {e}", path.display()));
            }
        }
        None => print!("{text}"),
    }
}

fn run_exit_code(e: &RunError) -> i32 {
    match e {
        RunError::BudgetExceeded { .. } => 3,
        RunError::Store(_) => 3,
    }
}

fn main() {
    // Usage errors share exit code 1 with input parse errors; 2 is reserved
    // for graphs rejected by validation.
    let cli = Cli::try_parse().unwrap_or_else(|e| {
        use clap::error::ErrorKind;
        let code = match e.kind() {
            ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
            _ => 1,
        };
        let _ = e.print();
        std::process::exit(code)
    });
    match cli.cmd {
        Cmd::Pps(args) => cmd_pps(args),
        Cmd::Tps(args) => cmd_tps(args),
        Cmd::Verify(args) => cmd_verify(args),
        Cmd::Metrics(args) => cmd_metrics(args),
        Cmd::Gen(args) => cmd_gen(args),
        Cmd::Bench(args) => cmd_bench(args),
        Cmd::Scc(args) => cmd_scc(args),
    }
}

fn cmd_pps(args: PpsArgs) {
    let cfg = load_cfg(&args.io);
    let schedule = match args.schedule {
        ScheduleArg::RoundRobin => Schedule::RoundRobin,
        ScheduleArg::Random => Schedule::SeededRandom { seed: args.seed },
        ScheduleArg::Parallel => Schedule::Parallel { workers: args.workers },
    };
    let mode: Mode = args.mode.into();
    let started = Instant::now();
    let (pp, stats) = match generate_pps(&cfg, mode, &schedule, None) {
        Ok(r) => r,
        Err(e) => fail(run_exit_code(&e), e),
    };
    let json = report::pp_report_json(
        &cfg,
        mode,
        &schedule,
        &pp,
        &stats,
        started.elapsed().as_millis() as u64,
    );
    emit(&args.io.output, &report::to_json_string(&json));
}

fn cmd_tps(args: IoArgs) {
    let cfg = load_cfg(&args);
    let (pp, _) = match generate_pps(&cfg, Mode::Direct, &Schedule::RoundRobin, None) {
        Ok(r) => r,
        Err(e) => fail(run_exit_code(&e), e),
    };
    let tp = match generate_test_paths(&cfg, &pp.all_paths()) {
        Ok(t) => t,
        Err(e) => fail(2, e),
    };
    emit(&args.output, &report::to_json_string(&report::tp_report_json(&cfg, &tp)));
}

fn cmd_verify(args: VerifyArgs) {
    let cfg = load_cfg(&args.io);
    let mut checks: Vec<serde_json::Value> = Vec::new();

    let (baseline, _) = match generate_pps(&cfg, Mode::Direct, &Schedule::RoundRobin, None) {
        Ok(r) => r,
        Err(e) => fail(run_exit_code(&e), e),
    };
    let mut check = |name: String, schedule: Schedule, mode: Mode| {
        let same = match generate_pps(&cfg, mode, &schedule, None) {
            Ok((r, _)) => r == baseline,
            Err(e) => fail(run_exit_code(&e), e),
        };
        checks.push(serde_json::json!({ "check": name, "ok": same }));
        same
    };

    let mut all_ok = check("compositional".into(), Schedule::RoundRobin, Mode::Compositional);
    for seed in 0..args.seeds {
        all_ok &= check(
            format!("random schedule, seed {seed}"),
            Schedule::SeededRandom { seed },
            Mode::Direct,
        );
    }
    for workers in [1, 2, 4] {
        all_ok &= check(
            format!("parallel schedule, {workers} workers"),
            Schedule::Parallel { workers },
            Mode::Direct,
        );
        all_ok &= check(
            format!("compositional, parallel, {workers} workers"),
            Schedule::Parallel { workers },
            Mode::Compositional,
        );
    }

    let limits = OracleLimits::default();
    let oracle_check = match oracle_pps(&cfg.graph, &limits) {
        Ok(mut oracle) => {
            oracle.sort();
            let ok = oracle == baseline.all_paths();
            checks.push(serde_json::json!({ "check": "oracle", "ok": ok }));
            Some(ok)
        }
        Err(e) if args.require_oracle => fail(4, e),
        Err(e) => {
            checks.push(serde_json::json!({ "check": "oracle", "skipped": e.to_string() }));
            None
        }
    };
    all_ok &= oracle_check.unwrap_or(true);

    let tp_ok = match generate_test_paths(&cfg, &baseline.all_paths()) {
        Ok(tp) => {
            ppforge::tp::verify_coverage(&cfg, &baseline.all_paths(), &tp).is_ok()
                && tp.coverage == 1.0
        }
        Err(_) => false,
    };
    checks.push(serde_json::json!({ "check": "test path coverage", "ok": tp_ok }));
    all_ok &= tp_ok;

    let verdict = serde_json::json!({
        "schema_version": report::SCHEMA_VERSION,
        "input_digest": cfg.digest(),
        "prime_paths": baseline.total(),
        "checks": checks,
        "all_ok": all_ok,
    });
    emit(
        &args.io.output,
        &format!("{}\n", serde_json::to_string_pretty(&verdict).unwrap()),
    );
    if !all_ok {
        fail(1, "verification found disagreeing results");
    }
}

fn cmd_metrics(args: IoArgs) {
    let cfg = load_cfg(&args);
    let walks = match npath(&cfg, NPATH_STATE_BUDGET) {
        Ok(n) => n,
        Err(e @ MetricsError::StateBudget { .. }) => fail(3, e),
    };
    let (pp, _) = match generate_pps(&cfg, Mode::Compositional, &Schedule::RoundRobin, None) {
        Ok(r) => r,
        Err(e) => fail(run_exit_code(&e), e),
    };
    let report_data = MetricsReport {
        cyclomatic: cyclomatic(&cfg),
        npath: walks,
        prime_paths: pp.total(),
    };
    emit(
        &args.output,
        &report::to_json_string(&report::metrics_report_json(&cfg, &report_data)),
    );
}

fn build_bench_graph(args: &GenArgs) -> Cfg {
    let family = match args.family {
        FamilyArg::NestedIf => Family::NestedIf { k: args.k },
        FamilyArg::SequentialIf => Family::SequentialIf { k: args.k },
        FamilyArg::SingleLoop => Family::SingleLoop { k: args.k },
        FamilyArg::SequentialLoops => Family::SequentialLoops { k: args.k, n: args.n },
        FamilyArg::NestedLoops => Family::NestedLoops { k: args.k },
        FamilyArg::MixedRandom => Family::MixedRandom { seed: args.seed },
        FamilyArg::Random => {
            return match gen_random_cfg(args.k, args.loop_bias, args.seed) {
                Ok(c) => c,
                Err(e) => fail(1, e),
            }
        }
    };
    match gen_family(family) {
        Ok(c) => c,
        Err(e) => fail(1, e),
    }
}

fn cmd_gen(args: GenArgs) {
    let cfg = build_bench_graph(&args);
    emit(&args.output, &cfg.to_json());
}

fn cmd_bench(args: BenchArgs) {
    let cfg = build_bench_graph(&args.gen);
    let mut runs = Vec::new();
    let mut time_one = |name: &str, mode: Mode, schedule: Schedule| {
        let started = Instant::now();
        match generate_pps(&cfg, mode, &schedule, None) {
            Ok((pp, stats)) => runs.push(serde_json::json!({
                "run": name,
                "wall_ms": started.elapsed().as_millis() as u64,
                "prime_paths": pp.total(),
                "stats": stats,
            })),
            Err(e) => fail(run_exit_code(&e), e),
        }
    };
    if args.direct {
        time_one("direct, round-robin", Mode::Direct, Schedule::RoundRobin);
    }
    time_one("compositional, round-robin", Mode::Compositional, Schedule::RoundRobin);
    time_one(
        "compositional, parallel",
        Mode::Compositional,
        Schedule::Parallel { workers: args.workers },
    );
    let out = serde_json::json!({
        "schema_version": report::SCHEMA_VERSION,
        "input_digest": cfg.digest(),
        "vertices": cfg.vertex_count(),
        "arcs": cfg.graph.arcs().len(),
        "runs": runs,
    });
    emit(
        &args.gen.output,
        &format!("{}\n", serde_json::to_string_pretty(&out).unwrap()),
    );
}

fn cmd_scc(args: IoArgs) {
    let cfg = load_cfg(&args);
    emit(&args.output, &report::to_json_string(&report::scc_report_json(&cfg)));
}
