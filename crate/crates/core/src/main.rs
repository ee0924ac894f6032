use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use ramify::blowup::{to_dot, simulate, SimConfig, SimMode};
use ramify::cli::{corpus_run, exit, parse_poly, run_report, CliError, CorpusMode, CorpusParams, InputSpec};
use ramify::euler::{euler_delta, SurfaceConfig};
use ramify::gf::FieldCtx;
use ramify::polygon::PointType;

#[derive(Parser)]
#[command(name = "ramify", version, about = "Ramification invariants of Artin-Schreier characters at points of a surface")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Full pipeline: good representative, staircase, Swan conductors, r', bound, simulation, verdicts.
    Report(InputArgs),
    /// Run only the blow-up simulator.
    Simulate(InputArgs),
    /// Seeded random corpus for the differential checks.
    Corpus(CorpusArgs),
    /// Euler-Poincare characteristic delta from intersection data.
    Euler(EulerArgs),
}

#[derive(Clone, Copy, ValueEnum)]
enum TypeArg {
    #[value(name = "I", alias = "1")]
    One,
    #[value(name = "II", alias = "2")]
    Two,
}

impl From<TypeArg> for PointType {
    fn from(t: TypeArg) -> Self {
        match t {
            TypeArg::One => PointType::One,
            TypeArg::Two => PointType::Two,
        }
    }
}

#[derive(Args, Clone)]
struct SimArgs {
    #[arg(long, value_enum, default_value = "candidates")]
    mode: ModeArg,
    #[arg(long, default_value_t = 6)]
    ext_cap: usize,
    #[arg(long, default_value_t = 2)]
    sweep_degree: usize,
    #[arg(long, default_value_t = 32)]
    depth_cap: usize,
}

#[derive(Clone, Copy, ValueEnum)]
enum ModeArg {
    Candidates,
    Sweep,
}

impl SimArgs {
    fn config(&self) -> SimConfig {
        SimConfig {
            mode: match self.mode {
                ModeArg::Candidates => SimMode::Candidates,
                ModeArg::Sweep => SimMode::Sweep,
            },
            ext_cap: self.ext_cap,
            sweep_degree: self.sweep_degree,
            depth_cap: self.depth_cap,
            ..SimConfig::default()
        }
    }
}

#[derive(Args)]
struct InputArgs {
    /// Polynomial in t1, t2 (and g, the field generator), e.g. "t1^-2*t2".
    expr: String,
    /// Field as "p" or "p^k".
    #[arg(long, default_value = "3")]
    field: String,
    #[arg(long = "type", value_enum, default_value = "II")]
    point_type: TypeArg,
    #[command(flatten)]
    sim: SimArgs,
    #[arg(long)]
    json: bool,
    /// Write the blow-up tree as Graphviz.
    #[arg(long, value_name = "FILE")]
    dot: Option<PathBuf>,
    /// Seed for the perturbation rerun.
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

#[derive(Clone, Copy, ValueEnum)]
enum CorpusModeArg {
    Staircase,
    Algebra,
    Simulate,
}

#[derive(Args)]
struct CorpusArgs {
    #[arg(long, value_enum, default_value = "staircase")]
    kind: CorpusModeArg,
    #[arg(long, default_value_t = 1)]
    seed: u64,
    #[arg(long, default_value_t = 1000)]
    count: usize,
    /// Comma-separated field specs.
    #[arg(long, value_delimiter = ',', default_value = "2,3,5")]
    fields: Vec<String>,
    #[arg(long)]
    max_pole: Option<i64>,
    /// Skip the sweep-mode rerun in simulate corpora.
    #[arg(long)]
    no_sweep: bool,
    #[command(flatten)]
    sim: SimArgs,
    #[arg(long)]
    json: bool,
    #[arg(long, hide = true)]
    mutant: bool,
}

#[derive(Args)]
struct EulerArgs {
    /// JSON config: {components: [{name, sw}], intersections, klog, r_sum}.
    config: Option<PathBuf>,
    /// Built-in surface instead of a file: p2-line or p2-two-lines.
    #[arg(long, conflicts_with = "config")]
    preset: Option<String>,
    /// Swan conductors for the preset's components.
    #[arg(long, value_delimiter = ',')]
    sw: Vec<u64>,
    #[arg(long, default_value_t = 0)]
    r_sum: u64,
    #[arg(long)]
    json: bool,
}

fn print_json(v: &serde_json::Value) {
    println!("{}", serde_json::to_string_pretty(v).expect("serializable"));
}

fn write_dot(path: &Option<PathBuf>, dot: impl FnOnce() -> String) -> Result<(), CliError> {
    if let Some(path) = path {
        std::fs::write(path, dot()).map_err(|e| CliError::Stage("dot", format!("{}: {e}", path.display())))?;
    }
    Ok(())
}

fn report(args: InputArgs) -> Result<i32, CliError> {
    let spec = InputSpec {
        field: args.field,
        t: args.point_type.into(),
        expr: args.expr,
        sim: args.sim.config(),
        seed: args.seed,
    };
    let report = run_report(&spec)?;
    write_dot(&args.dot, || to_dot(&report.simulation))?;
    if args.json {
        print_json(&report.to_json());
    } else {
        print!("{}", report.summary_table());
    }
    Ok(if report.verdicts().all_pass() { exit::OK } else { exit::VERDICT })
}

fn sim(args: InputArgs) -> Result<i32, CliError> {
    let ctx = FieldCtx::parse(&args.field).map_err(|e| CliError::Stage("field", e.to_string()))?;
    let f = parse_poly(&args.expr, &ctx).map_err(|e| CliError::Stage("parse", e.to_string()))?;
    let result =
        simulate(&f, args.point_type.into(), &args.sim.config()).map_err(|e| CliError::Stage("simulate", e.to_string()))?;
    write_dot(&args.dot, || to_dot(&result))?;
    if args.json {
        print_json(&result.to_json());
    } else {
        println!("r_x = {}", result.r_x);
        println!("good regime: {}", result.good_regime());
        for node in result.tree.walk() {
            let indent = "  ".repeat(node.provenance.len());
            println!(
                "{indent}{} type {} pg {} e {} mu {} weight {}{}",
                node.label(),
                node.t,
                node.pg,
                node.e,
                node.mu,
                node.weight,
                if node.clean { " clean" } else { "" }
            );
        }
    }
    Ok(exit::OK)
}

fn corpus(args: CorpusArgs) -> Result<i32, CliError> {
    let mode = match args.kind {
        CorpusModeArg::Staircase => CorpusMode::Staircase,
        CorpusModeArg::Algebra => CorpusMode::Algebra,
        CorpusModeArg::Simulate => CorpusMode::Simulate,
    };
    let mut params = CorpusParams::new(mode, args.seed, args.count);
    params.fields = args.fields;
    if let Some(p) = args.max_pole {
        params.max_pole = p;
    }
    params.sim = args.sim.config();
    params.compare_sweep &= !args.no_sweep;
    params.mutant = args.mutant;
    let summary = corpus_run(&params)?;
    if args.json {
        print_json(&summary.to_json());
    } else {
        print!("{}", summary.table());
    }
    Ok(if summary.all_pass() { exit::OK } else { exit::VERDICT })
}

fn euler(args: EulerArgs) -> Result<i32, CliError> {
    let cfg = match (&args.config, &args.preset) {
        (Some(path), _) => {
            let text = std::fs::read_to_string(path).map_err(|e| CliError::Stage("euler", format!("{}: {e}", path.display())))?;
            serde_json::from_str::<SurfaceConfig>(&text).map_err(|e| CliError::Stage("euler", e.to_string()))?
        }
        (None, Some(name)) => {
            SurfaceConfig::preset(name, &args.sw, args.r_sum).map_err(|e| CliError::Stage("euler", e.to_string()))?
        }
        (None, None) => return Err(CliError::Usage("give a config file or --preset".into())),
    };
    let report = euler_delta(&cfg).map_err(|e| CliError::Stage("euler", e.to_string()))?;
    if args.json {
        print_json(&serde_json::json!({ "config": cfg, "report": report }));
    } else {
        println!("(Sw, Sw)      {}", report.sw_self);
        println!("(Sw, K^log)   {}", report.sw_klog);
        println!("sum r_x       {}", cfg.r_sum);
        println!("delta         {}", report.delta);
    }
    Ok(exit::OK)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Report(a) => report(a),
        Command::Simulate(a) => sim(a),
        Command::Corpus(a) => corpus(a),
        Command::Euler(a) => euler(a),
    };
    match result {
        Ok(code) => ExitCode::from(code as u8),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit::OPERATIONAL as u8)
        }
    }
}
