use std::fs::File;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{anyhow, Context};
use clap::{Args, Parser, Subcommand, ValueEnum};
use popcolor::bnb::BnbConfig;
use popcolor::lp::{relax, solve_lp};
use popcolor::model::apply_precoloring;
use popcolor::mps::{write_mps, MpsFormat};
use popcolor::pipeline::{self, read_instance, solve_graph, BenchRecord, PipelineError, SolveOptions};
use popcolor::preprocess::{dsatur_upper_bound, preprocess_pipeline, PrecolorPlan};
use popcolor::verify::{run_suite, VerifyOptions};
use popcolor::{build_model, Graph, IlpModel, ModelKind};
use serde_json::json;

#[derive(Parser)]
#[command(name = "popcolor", version, about = "Exact ILP models for graph colouring")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Solve one DIMACS instance.
    Solve {
        file: PathBuf,
        #[arg(long, default_value = "POP2")]
        model: ModelKind,
        #[command(flatten)]
        common: Common,
        #[command(flatten)]
        limits: Limits,
    },
    /// Print the exact LP relaxation value of the unpreprocessed model.
    Relax {
        file: PathBuf,
        #[arg(long, default_value = "POP2")]
        model: ModelKind,
        #[command(flatten)]
        common: Common,
    },
    /// Write the model as MPS.
    Export {
        file: PathBuf,
        #[arg(long, default_value = "POP2")]
        model: ModelKind,
        /// Free-format MPS, for names longer than 8 characters.
        #[arg(long)]
        free_mps: bool,
        #[command(flatten)]
        common: Common,
    },
    /// Solve every .col file of a directory under each model.
    Bench {
        dir: PathBuf,
        /// Comma-separated model kinds.
        #[arg(long, value_delimiter = ',', default_value = "ASS,POP2,POPH2")]
        model: Vec<ModelKind>,
        #[arg(long, default_value_t = 1)]
        jobs: usize,
        #[command(flatten)]
        common: Common,
        #[command(flatten)]
        limits: Limits,
    },
    /// Check the relaxation bounds and print a pass/fail report.
    Verify {
        #[arg(long)]
        colors: Option<usize>,
        #[arg(long, default_value_t = 7)]
        seed: u64,
        #[arg(long, default_value_t = 20)]
        random_graphs: usize,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
    },
}

#[derive(Args)]
struct Common {
    /// Output file (stdout if absent).
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    format: Format,
    /// Skip dominance removal and clique precolouring.
    #[arg(long)]
    no_preprocess: bool,
    /// Colour bound H instead of the DSATUR bound.
    #[arg(long)]
    colors: Option<usize>,
}

#[derive(Args)]
struct Limits {
    /// Seconds; 0 means no limit.
    #[arg(long, default_value_t = 60.0)]
    time_limit: f64,
    #[arg(long)]
    node_limit: Option<u64>,
}

#[derive(Clone, Copy, PartialEq, ValueEnum)]
enum Format {
    Json,
    Csv,
}

/// Error paired with its exit code.
struct Failure(u8, anyhow::Error);

fn input(e: impl Into<anyhow::Error>) -> Failure {
    Failure(1, e.into())
}

fn internal(e: impl Into<anyhow::Error>) -> Failure {
    Failure(2, e.into())
}

fn pipeline_failure(e: PipelineError) -> Failure {
    if e.is_input_error() {
        input(e)
    } else {
        internal(e)
    }
}

fn solve_options(common: &Common, limits: &Limits) -> SolveOptions {
    let time_limit = (limits.time_limit > 0.0).then_some(limits.time_limit);
    SolveOptions {
        bnb: BnbConfig { time_limit, node_limit: limits.node_limit, ..BnbConfig::default() },
        preprocess: !common.no_preprocess,
        colors: common.colors,
    }
}

fn sink(out: &Option<PathBuf>) -> Result<Box<dyn Write>, Failure> {
    match out {
        Some(p) => {
            let f = File::create(p).with_context(|| format!("creating {}", p.display())).map_err(input)?;
            Ok(Box::new(io::BufWriter::new(f)))
        }
        None => Ok(Box::new(io::stdout().lock())),
    }
}

fn emit(out: &Option<PathBuf>, text: &str) -> Result<(), Failure> {
    let mut w = sink(out)?;
    w.write_all(text.as_bytes()).and_then(|_| w.flush()).map_err(input)
}

fn load(file: &Path) -> Result<(String, Graph), Failure> {
    read_instance(file).map_err(pipeline_failure)
}

fn records_text(records: &[BenchRecord], format: Format) -> Result<String, Failure> {
    match format {
        Format::Json => serde_json::to_string_pretty(records).map(|s| s + "\n").map_err(internal),
        Format::Csv => {
            let mut buf = Vec::new();
            pipeline::write_csv(records, &mut buf).map_err(pipeline_failure)?;
            String::from_utf8(buf).map_err(internal)
        }
    }
}

/// The model `export` writes: the precoloured residual model of a connected
/// graph, or the raw model with `--no-preprocess`.
fn export_model(g: &Graph, kind: ModelKind, common: &Common) -> Result<IlpModel, Failure> {
    if common.no_preprocess {
        let h = common.colors.unwrap_or_else(|| dsatur_upper_bound(g).0);
        let q = g.max_degree_vertex().ok_or_else(|| input(anyhow!("graph has no vertices")))?;
        return build_model(g, kind, h, q).map_err(|e| pipeline_failure(e.into()));
    }
    if !g.is_connected() {
        return Err(input(anyhow!("preprocessed export needs a connected graph; pass --no-preprocess")));
    }
    let report = preprocess_pipeline(g);
    let h = common.colors.unwrap_or(report.h);
    let plan = PrecolorPlan { h, ..report.plan.clone() };
    let m = build_model(&report.trace.residual, kind, h, plan.q).map_err(|e| pipeline_failure(e.into()))?;
    apply_precoloring(&m, &plan).map_err(|e| pipeline_failure(e.into()))
}

fn run(cli: Cli) -> Result<(), Failure> {
    match cli.command {
        Command::Solve { file, model, common, limits } => {
            let (name, g) = load(&file)?;
            let opts = solve_options(&common, &limits);
            match common.format {
                Format::Csv => {
                    let records = pipeline::run_graph(&name, &g, &[model], &opts).map_err(pipeline_failure)?;
                    emit(&common.out, &records_text(&records, Format::Csv)?)
                }
                Format::Json => {
                    let sol = solve_graph(&g, model, &opts).map_err(pipeline_failure)?;
                    let mut v = serde_json::to_value(&sol).map_err(internal)?;
                    v["instance"] = json!(name);
                    v["V"] = json!(g.n());
                    v["E"] = json!(g.m());
                    emit(&common.out, &(serde_json::to_string_pretty(&v).map_err(internal)? + "\n"))
                }
            }
        }
        Command::Relax { file, model, common } => {
            let (name, g) = load(&file)?;
            let h = common.colors.unwrap_or_else(|| dsatur_upper_bound(&g).0);
            let q = g.max_degree_vertex().ok_or_else(|| input(anyhow!("graph has no vertices")))?;
            let m = relax(&build_model(&g, model, h, q).map_err(|e| pipeline_failure(e.into()))?);
            let sol = solve_lp(&m).map_err(internal)?;
            let value = sol.value.as_ref().map_or_else(|| format!("{:?}", sol.status), |v| v.to_string());
            let text = match common.format {
                Format::Json => {
                    let mut v = sol.to_json(&m);
                    v["instance"] = json!(name);
                    serde_json::to_string_pretty(&v).map_err(internal)? + "\n"
                }
                Format::Csv => format!("instance,model,H,q,nu\n{name},{model},{h},{q},{value}\n"),
            };
            emit(&common.out, &text)
        }
        Command::Export { file, model, free_mps, common } => {
            let (_, g) = load(&file)?;
            let m = export_model(&g, model, &common)?;
            let format = if free_mps { MpsFormat::Free } else { MpsFormat::Fixed };
            let text = write_mps(&m, format).map_err(input)?;
            emit(&common.out, &text)
        }
        Command::Bench { dir, model, jobs, common, limits } => {
            let opts = solve_options(&common, &limits);
            let report = pipeline::bench(&dir, &model, &opts, jobs.max(1)).map_err(pipeline_failure)?;
            eprint!("{}", pipeline::summary_table(&report.summary));
            emit(&common.out, &records_text(&report.records, common.format)?)
        }
        Command::Verify { colors, seed, random_graphs, out, format } => {
            let checks = run_suite(&VerifyOptions { colors, seed, random_graphs }).map_err(internal)?;
            let text = match format {
                Format::Json => serde_json::to_string_pretty(&checks).map_err(internal)? + "\n",
                Format::Csv => checks.iter().map(|c| format!("{c}\n")).collect(),
            };
            emit(&out, &text)?;
            let failed = checks.iter().filter(|c| !c.passed).count();
            eprintln!("{} checks, {failed} failed", checks.len());
            if failed > 0 {
                return Err(internal(anyhow!("{failed} verification checks failed")));
            }
            Ok(())
        }
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 1 } else { 0 });
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure(code, e)) => {
            eprintln!("error: {e:#}");
            ExitCode::from(code)
        }
    }
}
