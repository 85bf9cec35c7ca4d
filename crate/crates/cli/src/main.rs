use std::fs;
use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand};
use serde::{Deserialize, Serialize};

use eagle_core::functions::{lookup_function, registry, registry_json};
use eagle_core::harness::{
    desk_table_rows, emit_report, run_experiment, trace_csv, Algorithm, AlgorithmSettings,
    ExperimentReport, ExperimentSpec, Format, StatsOver, SuccessCriteria, SuccessMode, CSV_HEADER,
};
use eagle_core::{BenchmarkProblem, LocalSearch, NoiseModel};

#[derive(Parser)]
#[command(
    name = "eagle",
    version,
    about = "Eagle Strategy optimizer and benchmark harness"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run repeated seeded trials and print a report.
    Run(RunArgs),
    /// List the registered benchmark functions.
    ListFunctions {
        /// table or json
        #[arg(long, default_value = "table")]
        output: String,
    },
    /// Repeat `run` once per value of one parameter.
    Sweep {
        /// dim, noise-sigma, pop, tol, max-evals, lambda, gamma, alpha,
        /// radius-init, radius-shrink or local-budget
        #[arg(long)]
        param: String,
        /// Comma-separated values.
        #[arg(long, value_delimiter = ',', required = true)]
        values: Vec<String>,
        #[command(flatten)]
        run: RunArgs,
    },
}

#[derive(Args, Clone, Default)]
struct RunArgs {
    /// Comma-separated subset of es, fa, pso, nm.
    #[arg(long, value_delimiter = ',')]
    algorithm: Option<Vec<String>>,
    /// Comma-separated function names, `all`, or `desk` for the ten
    /// comparison rows at desk-scale dimensions.
    #[arg(long, value_delimiter = ',')]
    function: Option<Vec<String>>,
    #[arg(long)]
    dim: Option<usize>,
    #[arg(long)]
    noise_sigma: Option<f64>,
    #[arg(long)]
    runs: Option<usize>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    tol: Option<f64>,
    #[arg(long)]
    pop: Option<usize>,
    #[arg(long)]
    max_evals: Option<u64>,
    /// all or successes
    #[arg(long)]
    stats_over: Option<String>,
    /// value-gap or position-gap
    #[arg(long)]
    success: Option<String>,
    #[arg(long)]
    value_eps: Option<f64>,
    #[arg(long)]
    position_eps: Option<f64>,
    /// json, csv or table
    #[arg(long)]
    output: Option<String>,
    /// Write the convergence trace of each experiment's first trial here.
    #[arg(long)]
    trace: Option<PathBuf>,
    /// JSON file with the same keys as the flags (snake_case) plus
    /// per-algorithm sections; flags win.
    #[arg(long)]
    config: Option<PathBuf>,
}

/// Settings after merging defaults, the config file and flags.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
struct RunConfig {
    algorithm: Vec<String>,
    function: Vec<String>,
    dim: Option<usize>,
    noise_sigma: f64,
    runs: usize,
    seed: u64,
    tol: Option<f64>,
    pop: Option<usize>,
    max_evals: Option<u64>,
    stats_over: String,
    success: SuccessCriteria,
    output: String,
    trace: Option<PathBuf>,
    settings: AlgorithmSettings,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            algorithm: vec!["es".into(), "pso".into()],
            function: vec!["ackley".into()],
            dim: None,
            noise_sigma: 0.025,
            runs: 100,
            seed: 0,
            tol: None,
            pop: None,
            max_evals: None,
            stats_over: "all".into(),
            success: SuccessCriteria::default(),
            output: "table".into(),
            trace: None,
            settings: AlgorithmSettings::default(),
        }
    }
}

impl RunConfig {
    fn resolve(args: &RunArgs) -> Result<Self> {
        let mut cfg = match &args.config {
            Some(path) => {
                let text = fs::read_to_string(path)
                    .with_context(|| format!("reading config {}", path.display()))?;
                serde_json::from_str(&text)
                    .with_context(|| format!("parsing config {}", path.display()))?
            }
            None => RunConfig::default(),
        };
        if let Some(v) = &args.algorithm {
            cfg.algorithm = v.clone();
        }
        if let Some(v) = &args.function {
            cfg.function = v.clone();
        }
        if args.dim.is_some() {
            cfg.dim = args.dim;
        }
        if let Some(v) = args.noise_sigma {
            cfg.noise_sigma = v;
        }
        if let Some(v) = args.runs {
            cfg.runs = v;
        }
        if let Some(v) = args.seed {
            cfg.seed = v;
        }
        if args.tol.is_some() {
            cfg.tol = args.tol;
        }
        if args.pop.is_some() {
            cfg.pop = args.pop;
        }
        if args.max_evals.is_some() {
            cfg.max_evals = args.max_evals;
        }
        if let Some(v) = &args.stats_over {
            cfg.stats_over = v.clone();
        }
        if let Some(v) = &args.success {
            cfg.success.mode = match v.as_str() {
                "value-gap" => SuccessMode::ValueGap,
                "position-gap" => SuccessMode::PositionGap,
                other => bail!("success must be value-gap or position-gap, got `{other}`"),
            };
        }
        if let Some(v) = args.value_eps {
            cfg.success.value_eps = v;
        }
        if args.position_eps.is_some() {
            cfg.success.position_eps = args.position_eps;
        }
        if let Some(v) = &args.output {
            cfg.output = v.clone();
        }
        if args.trace.is_some() {
            cfg.trace = args.trace.clone();
        }
        Ok(cfg)
    }

    fn settings(&self) -> AlgorithmSettings {
        let mut s = self.settings.clone();
        if let Some(n) = self.pop {
            s.set_population(n);
        }
        if let Some(t) = self.tol {
            s.set_tolerance(t);
        }
        if let Some(e) = self.max_evals {
            s.set_max_evals(e);
        }
        s
    }

    /// (problem, seed offset) rows in report order.
    fn problems(&self) -> Result<Vec<(BenchmarkProblem, u64)>> {
        let mut out = Vec::new();
        for name in &self.function {
            match name.trim() {
                "desk" => {
                    for (f, d, offset) in desk_table_rows() {
                        out.push((BenchmarkProblem::new(f, self.dim.unwrap_or(d))?, offset));
                    }
                }
                "all" => {
                    for f in eagle_core::TestFunction::ALL {
                        out.push((
                            BenchmarkProblem::new(f, self.dim.unwrap_or(f.default_dim()))?,
                            0,
                        ));
                    }
                }
                other => {
                    let f = lookup_function(other)?;
                    out.push((
                        BenchmarkProblem::new(f, self.dim.unwrap_or(f.default_dim()))?,
                        0,
                    ));
                }
            }
        }
        Ok(out)
    }
}

struct Outcome {
    reports: Vec<ExperimentReport>,
    traces: Vec<(String, String)>,
}

fn run(cfg: &RunConfig) -> Result<Outcome> {
    let algorithms = cfg
        .algorithm
        .iter()
        .map(|a| a.parse::<Algorithm>())
        .collect::<eagle_core::Result<Vec<_>>>()?;
    let stats_over: StatsOver = cfg.stats_over.parse()?;
    let noise = NoiseModel::additive(cfg.noise_sigma)?;
    let settings = cfg.settings();
    let mut outcome = Outcome {
        reports: Vec::new(),
        traces: Vec::new(),
    };
    for (row, (problem, offset)) in cfg.problems()?.into_iter().enumerate() {
        for &algorithm in &algorithms {
            let spec = ExperimentSpec {
                algorithm,
                problem: problem.clone(),
                noise,
                runs: cfg.runs,
                base_seed: cfg.seed + offset,
                criteria: cfg.success,
                stats_over,
                settings: settings.clone(),
            };
            let exp = run_experiment(&spec)?;
            let label = format!("{algorithm}-{row}-{}-{}", problem.name(), problem.dim());
            outcome
                .traces
                .push((label, trace_csv(&exp.trials[0].trace)));
            outcome.reports.push(exp.report);
        }
    }
    Ok(outcome)
}

fn write_traces(path: &Path, traces: &[(String, String)]) -> Result<()> {
    if let [(_, only)] = traces {
        return fs::write(path, only).with_context(|| format!("writing {}", path.display()));
    }
    let stem = path.file_stem().and_then(|s| s.to_str()).unwrap_or("trace");
    let ext = path.extension().and_then(|s| s.to_str()).unwrap_or("csv");
    for (label, csv) in traces {
        let p = path.with_file_name(format!("{stem}-{label}.{ext}"));
        fs::write(&p, csv).with_context(|| format!("writing {}", p.display()))?;
    }
    Ok(())
}

fn apply_param(cfg: &mut RunConfig, param: &str, value: &str) -> Result<()> {
    let num = || -> Result<f64> {
        value
            .parse::<f64>()
            .with_context(|| format!("sweep value `{value}` is not a number"))
    };
    let int = || -> Result<u64> {
        value
            .parse::<u64>()
            .with_context(|| format!("sweep value `{value}` is not an integer"))
    };
    let s = &mut cfg.settings;
    match param {
        "dim" => cfg.dim = Some(int()? as usize),
        "noise-sigma" => cfg.noise_sigma = num()?,
        "pop" => cfg.pop = Some(int()? as usize),
        "tol" => cfg.tol = Some(num()?),
        "max-evals" => cfg.max_evals = Some(int()?),
        "lambda" => s.es.levy.lambda = num()?,
        "gamma" => {
            let g = num()?;
            s.fa.gamma = g;
            if let LocalSearch::Firefly(fa) = &mut s.es.local {
                fa.gamma = g;
            }
        }
        "alpha" => {
            let a = num()?;
            s.fa.alpha = a;
            if let LocalSearch::Firefly(fa) = &mut s.es.local {
                fa.alpha = a;
            }
        }
        "radius-init" => s.es.radius_init = num()?,
        "radius-shrink" => s.es.radius_shrink = num()?,
        "local-budget" => s.es.local_budget_per_stage = int()?,
        other => bail!("unknown sweep parameter `{other}`"),
    }
    Ok(())
}

#[derive(Serialize)]
struct SweepPoint<'a> {
    param: &'a str,
    value: &'a str,
    reports: &'a [ExperimentReport],
}

fn emit_sweep(param: &str, points: &[(String, Vec<ExperimentReport>)], format: Format) -> String {
    match format {
        Format::Json => {
            let doc: Vec<_> = points
                .iter()
                .map(|(value, reports)| SweepPoint {
                    param,
                    value,
                    reports,
                })
                .collect();
            let mut s = serde_json::to_string_pretty(&doc).expect("sweep serializes");
            s.push('\n');
            s
        }
        Format::Csv => {
            let mut s = format!("param,value,{CSV_HEADER}\n");
            for (value, reports) in points {
                let body = emit_report(reports, Format::Csv);
                for line in body.lines().skip(1) {
                    s.push_str(&format!("{param},{value},{line}\n"));
                }
            }
            s
        }
        Format::Table => points
            .iter()
            .map(|(value, reports)| {
                format!("{param} = {value}\n{}", emit_report(reports, Format::Table))
            })
            .collect::<Vec<_>>()
            .join("\n"),
    }
}

fn list_functions(output: &str) -> Result<String> {
    match output.parse::<Format>()? {
        Format::Json => Ok(registry_json() + "\n"),
        Format::Csv => bail!("list-functions supports table or json"),
        Format::Table => {
            let mut s = String::new();
            for e in registry() {
                s.push_str(&format!(
                    "{:<12} d={:<4} [{}, {}]  f*={}  minima={}  {}\n",
                    e.name, e.default_dim, e.lower, e.upper, e.f_star, e.global_minima, e.formula
                ));
            }
            Ok(s)
        }
    }
}

fn main() -> Result<()> {
    let cli = Cli::parse();
    match cli.command {
        Command::Run(args) => {
            let cfg = RunConfig::resolve(&args)?;
            let format: Format = cfg.output.parse()?;
            let outcome = run(&cfg)?;
            if let Some(path) = &cfg.trace {
                write_traces(path, &outcome.traces)?;
            }
            print!("{}", emit_report(&outcome.reports, format));
        }
        Command::ListFunctions { output } => print!("{}", list_functions(&output)?),
        Command::Sweep {
            param,
            values,
            run: args,
        } => {
            let base = RunConfig::resolve(&args)?;
            let format: Format = base.output.parse()?;
            let mut points = Vec::new();
            for value in &values {
                let mut cfg = base.clone();
                apply_param(&mut cfg, &param, value)?;
                points.push((value.clone(), run(&cfg)?.reports));
            }
            print!("{}", emit_sweep(&param, &points, format));
        }
    }
    Ok(())
}
