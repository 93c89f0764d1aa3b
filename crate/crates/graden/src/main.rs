//! Command-line surface of the entropy toolkit.
//!
//! `compute` evaluates one measure on one image or signal file; `simulate`
//! dumps generator output; the remaining subcommands drive the experiment
//! harness, each writing a CSV/JSON payload plus a JSON run manifest that
//! reproduces the run byte-for-byte (`rerun`).

use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};

use graden::error::Error;
use graden::experiments::{
    self, parse_measure_list, BenchConfig, ClassifyConfig, LogisticConfig, MeasureSpec,
    MixRobustnessConfig, NoiseClassConfig, Pipeline, RobustnessConfig, RunManifest, SweepConfig,
};
use graden::graden::{graden_with_histogram, Thresholds};
use graden::{generators, io, transforms};

#[derive(Parser)]
#[command(
    name = "graden",
    version,
    about = "Gradient entropy and companion 2D entropy measures for images and signals"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Entropy of a single image or signal file.
    Compute(ComputeArgs),
    /// Write generator output (noise, mixed process, logistic series) to a file.
    Simulate(SimulateArgs),
    /// Gradient-entropy value over a grid of quantile thresholds.
    Sweep(SweepArgs),
    /// Entropy distributions over the four colored-noise families.
    NoiseClass(NoiseClassArgs),
    /// Coefficient-of-variation study across image sizes, or of the mixed
    /// process under added noise (--mix).
    Robustness(RobustnessArgs),
    /// Entropy of logistic-map distance matrices across the control parameter.
    Logistic(LogisticArgs),
    /// Wall-time comparison of the measures across image sizes.
    Bench(BenchArgs),
    /// Per-class entropy summaries and pairwise effect sizes for a dataset.
    Classify(ClassifyArgs),
    /// Re-execute an experiment from its manifest.
    Rerun(RerunArgs),
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Csv,
    Json,
}

#[derive(Args)]
struct OutputArgs {
    /// Output file; stdout when omitted.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Payload format.
    #[arg(long, value_enum, default_value = "csv")]
    format: Format,
    /// Manifest path; defaults to `<out>.manifest.json` when --out is set.
    #[arg(long)]
    manifest_out: Option<PathBuf>,
}

#[derive(Args)]
struct ComputeArgs {
    /// Input file: a raster image, or a delimited text signal with --signal.
    path: PathBuf,
    /// Measure name or spec, e.g. `graden`, `sampen2d(m=1)`.
    #[arg(long, default_value = "graden")]
    measure: String,
    /// Quantile level of the dead-band threshold (graden).
    #[arg(long, conflicts_with_all = ["delta", "gamma"])]
    a: Option<f64>,
    /// Quantile level of the extreme-band threshold (graden).
    #[arg(long, conflicts_with_all = ["delta", "gamma"])]
    b: Option<f64>,
    /// Raw dead-band threshold (graden), bypassing the quantile ranges.
    #[arg(long, requires = "gamma")]
    delta: Option<f64>,
    /// Raw extreme-band threshold (graden).
    #[arg(long, requires = "delta")]
    gamma: Option<f64>,
    /// Window side (sampen2d, distren2d).
    #[arg(long)]
    m: Option<usize>,
    /// Tolerance as a fraction of the image std (sampen2d).
    #[arg(long)]
    r: Option<f64>,
    /// Histogram bin count (distren2d).
    #[arg(long)]
    bins: Option<usize>,
    /// Treat the input as a 1D signal and measure its distance matrix.
    #[arg(long)]
    signal: bool,
    /// Embedding dimension of the signal distance matrix.
    #[arg(long, default_value_t = 3)]
    embed: usize,
    /// Optional result file (JSON by default; includes the 125-bin
    /// pattern histogram for graden).
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum, default_value = "json")]
    format: Format,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum SimKind {
    White,
    Pink,
    Blue,
    Red,
    Mix,
    Logistic,
}

#[derive(Args)]
struct SimulateArgs {
    #[arg(long, value_enum)]
    kind: SimKind,
    #[arg(long, default_value_t = 100)]
    height: usize,
    #[arg(long, default_value_t = 100)]
    width: usize,
    /// Spectral exponent override for noise kinds.
    #[arg(long)]
    beta: Option<f64>,
    /// Stochastic-pixel probability (mix).
    #[arg(long, default_value_t = 0.5)]
    p: f64,
    /// Control parameter (logistic).
    #[arg(long, default_value_t = 3.8)]
    a: f64,
    /// Initial value (logistic).
    #[arg(long, default_value_t = 0.3)]
    x0: f64,
    /// Series length (logistic).
    #[arg(long, default_value_t = 150)]
    n: usize,
    /// Discarded leading iterations (logistic).
    #[arg(long, default_value_t = 0)]
    burn_in: usize,
    #[arg(long, env = "GRADEN_SEED", default_value_t = 42)]
    seed: u64,
    /// Output file; stdout when omitted.
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum, default_value = "csv")]
    format: Format,
}

#[derive(Args)]
struct SweepArgs {
    #[arg(long, default_value_t = 100)]
    height: usize,
    #[arg(long, default_value_t = 100)]
    width: usize,
    #[arg(long, default_value_t = 0.0)]
    beta: f64,
    #[arg(long, default_value_t = 0.51)]
    a_min: f64,
    #[arg(long, default_value_t = 0.74)]
    a_max: f64,
    #[arg(long, default_value_t = 0.76)]
    b_min: f64,
    #[arg(long, default_value_t = 0.95)]
    b_max: f64,
    #[arg(long, default_value_t = 0.01)]
    step: f64,
    #[arg(long, env = "GRADEN_SEED", default_value_t = 42)]
    seed: u64,
    #[command(flatten)]
    output: OutputArgs,
}

#[derive(Args)]
struct NoiseClassArgs {
    #[arg(long, default_value_t = 50)]
    samples: usize,
    #[arg(long, default_value_t = 100)]
    height: usize,
    #[arg(long, default_value_t = 100)]
    width: usize,
    /// Comma-separated measure specs, e.g. `distren2d(M=128),graden`.
    #[arg(long, default_value = "distren2d(M=128),graden")]
    measures: String,
    #[arg(long, env = "GRADEN_SEED", default_value_t = 42)]
    seed: u64,
    #[command(flatten)]
    output: OutputArgs,
}

#[derive(Args)]
struct RobustnessArgs {
    /// Run the mixed-process-plus-noise variant instead of the size study.
    #[arg(long)]
    mix: bool,
    /// Image sizes for the size study.
    #[arg(long, value_delimiter = ',', default_value = "20,40,60,80,100")]
    sizes: Vec<usize>,
    /// Samples per size (size study) or per (p, variance) cell (--mix).
    #[arg(long, default_value_t = 30)]
    samples: usize,
    /// Spectral exponent of the noise family (size study).
    #[arg(long, default_value_t = 0.0)]
    beta: f64,
    /// Mixing probabilities (--mix).
    #[arg(long, value_delimiter = ',', default_value = "0.2,0.5,0.8")]
    p_values: Vec<f64>,
    /// Added-noise variances (--mix).
    #[arg(long, value_delimiter = ',', default_value = "0.01,0.02,0.03,0.04,0.05")]
    variances: Vec<f64>,
    #[arg(long, default_value_t = 100)]
    height: usize,
    #[arg(long, default_value_t = 100)]
    width: usize,
    #[arg(long, default_value = "sampen2d(m=1),distren2d(M=128),graden")]
    measures: String,
    #[arg(long, env = "GRADEN_SEED", default_value_t = 42)]
    seed: u64,
    #[command(flatten)]
    output: OutputArgs,
}

#[derive(Args)]
struct LogisticArgs {
    #[arg(long, default_value_t = 3.5)]
    a_min: f64,
    #[arg(long, default_value_t = 4.0)]
    a_max: f64,
    #[arg(long, default_value_t = 0.01)]
    step: f64,
    #[arg(long, default_value_t = 150)]
    n: usize,
    #[arg(long, default_value_t = 3)]
    embed: usize,
    #[arg(long, default_value_t = 0.3)]
    x0: f64,
    #[arg(long, default_value_t = 0)]
    burn_in: usize,
    #[arg(long, default_value = "peren2d,distren2d(M=128),graden")]
    measures: String,
    #[arg(long, env = "GRADEN_SEED", default_value_t = 42)]
    seed: u64,
    #[command(flatten)]
    output: OutputArgs,
}

#[derive(Args)]
struct BenchArgs {
    #[arg(long, value_delimiter = ',', default_value = "40,80,120,160")]
    sizes: Vec<usize>,
    #[arg(long, default_value_t = 5)]
    repeats: usize,
    #[arg(
        long,
        default_value = "sampen2d(m=1),sampen2d(m=2),sampen2d(m=3),distren2d(m=1),distren2d(m=2),distren2d(m=3),graden"
    )]
    measures: String,
    #[arg(long, env = "GRADEN_SEED", default_value_t = 42)]
    seed: u64,
    #[command(flatten)]
    output: OutputArgs,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum PipelineKind {
    /// grayscale -> downsample -> measure
    Image,
    /// sliding windows -> distance matrix -> measure
    SignalWindows,
    /// leading points -> distance matrix -> measure
    SignalPrefix,
}

#[derive(Args)]
struct ClassifyArgs {
    /// Dataset root with one subdirectory per class.
    #[arg(long)]
    dataset: PathBuf,
    #[arg(long, value_enum, default_value = "image")]
    pipeline: PipelineKind,
    #[arg(long, default_value = "graden")]
    measure: String,
    #[arg(long, default_value_t = 128)]
    target_height: usize,
    #[arg(long, default_value_t = 128)]
    target_width: usize,
    /// Window length (signal-windows) or prefix length (signal-prefix).
    #[arg(long, default_value_t = 150)]
    window: usize,
    #[arg(long, default_value_t = 10)]
    step: usize,
    #[arg(long, default_value_t = 3)]
    embed: usize,
    #[arg(long, env = "GRADEN_SEED", default_value_t = 42)]
    seed: u64,
    #[command(flatten)]
    output: OutputArgs,
}

#[derive(Args)]
struct RerunArgs {
    /// Manifest of the run to reproduce.
    #[arg(long)]
    manifest: PathBuf,
    #[command(flatten)]
    output: OutputArgs,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            let usage = matches!(e, Error::MeasureParse(_) | Error::UnknownMeasure(_));
            ExitCode::from(if usage { 2 } else { 1 })
        }
    }
}

fn run(command: Command) -> Result<(), Error> {
    match command {
        Command::Compute(args) => compute(args),
        Command::Simulate(args) => simulate(args),
        Command::Sweep(args) => {
            let cfg = SweepConfig {
                height: args.height,
                width: args.width,
                beta: args.beta,
                a_min: args.a_min,
                a_max: args.a_max,
                b_min: args.b_min,
                b_max: args.b_max,
                step: args.step,
            };
            let started = Instant::now();
            let result = experiments::sweep_thresholds(&cfg, args.seed)?;
            emit_experiment("sweep", &cfg, args.seed, started, &result, result.to_csv()?, &args.output)
        }
        Command::NoiseClass(args) => {
            let cfg = NoiseClassConfig {
                n_samples: args.samples,
                height: args.height,
                width: args.width,
                measures: parse_measure_list(&args.measures)?,
            };
            let started = Instant::now();
            let result = experiments::run_noise_classification(&cfg, args.seed)?;
            for row in &result.summaries {
                eprintln!(
                    "{} {}: median {:.6} iqr [{:.6}, {:.6}]",
                    row.measure, row.group, row.summary.median, row.summary.q1, row.summary.q3
                );
            }
            emit_experiment(
                "noise-class",
                &cfg,
                args.seed,
                started,
                &result,
                result.to_csv()?,
                &args.output,
            )
        }
        Command::Robustness(args) => {
            let started = Instant::now();
            if args.mix {
                let cfg = MixRobustnessConfig {
                    p_values: args.p_values,
                    variances: args.variances,
                    n_samples: args.samples,
                    height: args.height,
                    width: args.width,
                    measures: parse_measure_list(&args.measures)?,
                };
                let result = experiments::run_mix_noise_robustness(&cfg, args.seed)?;
                emit_experiment(
                    "mix-robustness",
                    &cfg,
                    args.seed,
                    started,
                    &result,
                    result.to_csv()?,
                    &args.output,
                )
            } else {
                let cfg = RobustnessConfig {
                    sizes: args.sizes,
                    n_samples: args.samples,
                    beta: args.beta,
                    measures: parse_measure_list(&args.measures)?,
                };
                let result = experiments::run_robustness(&cfg, args.seed)?;
                emit_experiment(
                    "robustness",
                    &cfg,
                    args.seed,
                    started,
                    &result,
                    result.to_csv()?,
                    &args.output,
                )
            }
        }
        Command::Logistic(args) => {
            let cfg = LogisticConfig {
                a_min: args.a_min,
                a_max: args.a_max,
                step: args.step,
                n: args.n,
                embed: args.embed,
                x0: args.x0,
                burn_in: args.burn_in,
                measures: parse_measure_list(&args.measures)?,
            };
            let started = Instant::now();
            let result = experiments::run_logistic_sweep(&cfg)?;
            emit_experiment(
                "logistic",
                &cfg,
                args.seed,
                started,
                &result,
                result.to_csv()?,
                &args.output,
            )
        }
        Command::Bench(args) => {
            let cfg = BenchConfig {
                sizes: args.sizes,
                repeats: args.repeats,
                measures: parse_measure_list(&args.measures)?,
            };
            let started = Instant::now();
            let result = experiments::run_benchmark(&cfg, args.seed)?;
            emit_experiment(
                "bench",
                &cfg,
                args.seed,
                started,
                &result,
                result.to_csv()?,
                &args.output,
            )
        }
        Command::Classify(args) => {
            let pipeline = match args.pipeline {
                PipelineKind::Image => Pipeline::Image {
                    target_height: args.target_height,
                    target_width: args.target_width,
                },
                PipelineKind::SignalWindows => Pipeline::SignalWindows {
                    window: args.window,
                    step: args.step,
                    embed: args.embed,
                },
                PipelineKind::SignalPrefix => Pipeline::SignalPrefix {
                    length: args.window,
                    embed: args.embed,
                },
            };
            let cfg = ClassifyConfig {
                dataset: args.dataset.display().to_string(),
                pipeline,
                measure: args.measure.parse()?,
            };
            let started = Instant::now();
            let result = experiments::run_classification(&cfg)?;
            for failure in &result.failures {
                eprintln!("skipped: {failure}");
            }
            for row in &result.summaries {
                eprintln!(
                    "{} {}: n {} median {:.6} iqr [{:.6}, {:.6}]",
                    row.measure,
                    row.group,
                    row.summary.n,
                    row.summary.median,
                    row.summary.q1,
                    row.summary.q3
                );
            }
            for e in &result.effects {
                eprintln!("hedges g {} vs {}: {:.4}", e.label_a, e.label_b, e.g);
            }
            emit_experiment(
                "classify",
                &cfg,
                args.seed,
                started,
                &result,
                result.to_csv()?,
                &args.output,
            )
        }
        Command::Rerun(args) => {
            let text = std::fs::read_to_string(&args.manifest).map_err(|e| {
                if e.kind() == std::io::ErrorKind::NotFound {
                    Error::NotFound(args.manifest.clone())
                } else {
                    Error::Io(e)
                }
            })?;
            let (manifest, warnings) = RunManifest::parse(&text)?;
            for w in warnings {
                eprintln!("warning: {w}");
            }
            let output = experiments::rerun(&manifest)?;
            let payload = match args.output.format {
                Format::Csv => output.csv,
                Format::Json => output.json,
            };
            write_payload(&args.output.out, payload.as_bytes())
        }
    }
}

fn emit_experiment(
    name: &str,
    cfg: &impl serde::Serialize,
    seed: u64,
    started: Instant,
    result: &impl serde::Serialize,
    csv: String,
    output: &OutputArgs,
) -> Result<(), Error> {
    let payload = match output.format {
        Format::Csv => csv,
        Format::Json => serde_json::to_string_pretty(result)?,
    };
    write_payload(&output.out, payload.as_bytes())?;

    let mut manifest = RunManifest::new(name, seed, cfg)?;
    manifest.duration_secs = Some(started.elapsed().as_secs_f64());
    let manifest_path = output
        .manifest_out
        .clone()
        .or_else(|| output.out.as_ref().map(|p| manifest_sibling(p)));
    if let Some(path) = manifest_path {
        io::write_atomic(&path, manifest.to_json()?.as_bytes())?;
        eprintln!("manifest: {}", path.display());
    }
    Ok(())
}

fn manifest_sibling(out: &Path) -> PathBuf {
    let mut name = out.file_name().unwrap_or_default().to_os_string();
    name.push(".manifest.json");
    out.with_file_name(name)
}

fn write_payload(out: &Option<PathBuf>, bytes: &[u8]) -> Result<(), Error> {
    match out {
        Some(path) => {
            io::write_atomic(path, bytes)?;
            eprintln!("wrote {}", path.display());
            Ok(())
        }
        None => {
            use std::io::Write;
            std::io::stdout().write_all(bytes)?;
            Ok(())
        }
    }
}

fn compute(args: ComputeArgs) -> Result<(), Error> {
    let measure = build_measure(&args)?;
    let image = if args.signal {
        let series = io::load_signal(&args.path)?;
        transforms::distance_matrix(&series, args.embed)?
    } else {
        io::load_image(&args.path)?
    };

    let (value, histogram) = match measure {
        MeasureSpec::Graden { a, b } => {
            let (v, h) = graden_with_histogram(&image, &Thresholds::from_quantiles(a, b)?)?;
            (v, Some(h))
        }
        MeasureSpec::GradenRaw { delta, gamma } => {
            let (v, h) = graden_with_histogram(&image, &Thresholds::from_raw(delta, gamma)?)?;
            (v, Some(h))
        }
        other => (other.evaluate(&image)?, None),
    };

    println!("{value:.6}");

    if let Some(out) = &args.out {
        let payload = match args.format {
            Format::Json => {
                let mut doc = serde_json::json!({
                    "measure": measure.label(),
                    "source": args.path.display().to_string(),
                    "value": value,
                });
                if let Some(h) = &histogram {
                    doc["histogram"] = serde_json::to_value(h)?;
                }
                serde_json::to_string_pretty(&doc)?
            }
            Format::Csv => format!(
                "measure,source,value\n{},{},{}\n",
                measure.label(),
                args.path.display(),
                value
            ),
        };
        io::write_atomic(out, payload.as_bytes())?;
    }
    Ok(())
}

fn build_measure(args: &ComputeArgs) -> Result<MeasureSpec, Error> {
    let base: MeasureSpec = args.measure.parse()?;
    Ok(match base {
        MeasureSpec::Graden { a, b } => {
            if let (Some(delta), Some(gamma)) = (args.delta, args.gamma) {
                MeasureSpec::GradenRaw { delta, gamma }
            } else {
                MeasureSpec::Graden {
                    a: args.a.unwrap_or(a),
                    b: args.b.unwrap_or(b),
                }
            }
        }
        MeasureSpec::GradenRaw { delta, gamma } => MeasureSpec::GradenRaw {
            delta: args.delta.unwrap_or(delta),
            gamma: args.gamma.unwrap_or(gamma),
        },
        MeasureSpec::Sampen2d { m, r } => MeasureSpec::Sampen2d {
            m: args.m.unwrap_or(m),
            r: args.r.unwrap_or(r),
        },
        MeasureSpec::Distren2d { m, bins } => MeasureSpec::Distren2d {
            m: args.m.unwrap_or(m),
            bins: args.bins.unwrap_or(bins),
        },
        MeasureSpec::Peren2d => MeasureSpec::Peren2d,
    })
}

fn simulate(args: SimulateArgs) -> Result<(), Error> {
    enum Payload {
        Image(graden::GrayImage),
        Series(Vec<f64>),
    }

    let payload = match args.kind {
        SimKind::White | SimKind::Pink | SimKind::Blue | SimKind::Red => {
            let beta = args.beta.unwrap_or(match args.kind {
                SimKind::White => 0.0,
                SimKind::Pink => 1.0,
                SimKind::Blue => -1.0,
                SimKind::Red => 2.0,
                _ => unreachable!(),
            });
            Payload::Image(generators::noise_image(
                args.height,
                args.width,
                beta,
                args.seed,
            )?)
        }
        SimKind::Mix => Payload::Image(generators::mix2d(
            args.height,
            args.width,
            args.p,
            args.seed,
        )?),
        SimKind::Logistic => {
            Payload::Series(generators::logistic_series(args.a, args.x0, args.n, args.burn_in)?)
        }
    };

    let bytes = match (&payload, args.format) {
        (Payload::Image(img), Format::Csv) => {
            let mut text = String::new();
            for i in 0..img.height() {
                let row: Vec<String> = img.row(i).iter().map(|v| format!("{v}")).collect();
                text.push_str(&row.join(","));
                text.push('\n');
            }
            text.into_bytes()
        }
        (Payload::Image(img), Format::Json) => serde_json::to_string_pretty(&serde_json::json!({
            "height": img.height(),
            "width": img.width(),
            "data": img.data(),
        }))?
        .into_bytes(),
        (Payload::Series(s), Format::Csv) => {
            let mut text = String::new();
            for v in s {
                text.push_str(&format!("{v}\n"));
            }
            text.into_bytes()
        }
        (Payload::Series(s), Format::Json) => {
            serde_json::to_string_pretty(&serde_json::json!({ "values": s }))?.into_bytes()
        }
    };
    write_payload(&args.out, &bytes)
}
