//! Command-line interface: size installations, sweep parameters, compare
//! technologies, solve break-even points, and run the latency-hiding
//! simulator. Data goes to stdout; diagnostics to stderr. Exit codes:
//! 0 success, 1 evaluation failure, 2 invalid input.

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use hypersizer::bundle::Bundle;
use hypersizer::config::ConfigFile;
use hypersizer::error::{Error, Result};
use hypersizer::explorer::{
    break_even, compare_technologies, run_sweep, BreakEvenMetric, BreakEvenQuery, FreeParameter,
    Spacing, SweepParameter, SweepRange, SweepSpec,
};
use hypersizer::machine::{FormulaVariant, InterconnectTech};
use hypersizer::parallelism::DistanceModel;
use hypersizer::report::{curve_to_csv, FullReport};
use hypersizer::simulator::{find_knee, utilization_curve, SimConfig};

#[derive(Parser)]
#[command(
    name = "hypersizer",
    version,
    about = "Sizing toolkit for petaflops-scale machine installations",
    long_about = "Sizing toolkit for petaflops-scale machine installations.\n\
                  Configs are JSON; every quantity is SI (m, s, Hz, bit/s, W, A, V, \
                  ohm-m, m^2, J/op). Results print to stdout with 6 significant \
                  digits in scientific notation; identical inputs produce \
                  byte-identical output."
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Copy, Clone, PartialEq, Eq, ValueEnum)]
enum VariantArg {
    /// Headline closed forms (traffic factor 1.0, packing sqrt(sigma*N)).
    PaperSimplified,
    /// Full prefactors (traffic factor 1.1, packing sqrt(12*sigma*N)/pi).
    Exact,
}

impl From<VariantArg> for FormulaVariant {
    fn from(arg: VariantArg) -> FormulaVariant {
        match arg {
            VariantArg::PaperSimplified => FormulaVariant::PaperSimplified,
            VariantArg::Exact => FormulaVariant::Exact,
        }
    }
}

#[derive(Copy, Clone, PartialEq, Eq, ValueEnum)]
enum FormatArg {
    Json,
    Csv,
}

#[derive(Copy, Clone, PartialEq, Eq, ValueEnum)]
enum DistanceArg {
    /// Full installation diameter per traversal (conservative).
    Diameter,
    /// Mean chord (2/pi of the diameter) per traversal.
    MeanChord,
}

impl From<DistanceArg> for DistanceModel {
    fn from(arg: DistanceArg) -> DistanceModel {
        match arg {
            DistanceArg::Diameter => DistanceModel::Diameter,
            DistanceArg::MeanChord => DistanceModel::MeanChord,
        }
    }
}

#[derive(Copy, Clone, PartialEq, Eq, ValueEnum)]
enum ParamArg {
    /// Aggregate performance in op/s (adjusts node count at fixed clock).
    Theta,
    /// Clock frequency in Hz.
    F0,
    /// Node count.
    Q,
}

impl From<ParamArg> for SweepParameter {
    fn from(arg: ParamArg) -> SweepParameter {
        match arg {
            ParamArg::Theta => SweepParameter::Theta,
            ParamArg::F0 => SweepParameter::ClockFrequency,
            ParamArg::Q => SweepParameter::NodeCount,
        }
    }
}

#[derive(Copy, Clone, PartialEq, Eq, ValueEnum)]
enum MetricArg {
    /// Packing-core diameter in m.
    Packing,
    /// Installation diameter in m.
    Installation,
    /// Latency-hiding thread count.
    Threads,
}

impl From<MetricArg> for BreakEvenMetric {
    fn from(arg: MetricArg) -> BreakEvenMetric {
        match arg {
            MetricArg::Packing => BreakEvenMetric::PackingCore,
            MetricArg::Installation => BreakEvenMetric::InstallationDiameter,
            MetricArg::Threads => BreakEvenMetric::RequiredThreads,
        }
    }
}

#[derive(Copy, Clone, PartialEq, Eq, ValueEnum)]
enum FreeArg {
    /// Packed per-wire cross-section in m^2 (guided media).
    Sigma,
    /// Emitter footprint in m^2 (open-space media).
    SigmaLe,
    /// Per-link bandwidth in bit/s.
    Bandwidth,
    /// Signal speed in m/s.
    SignalSpeed,
}

impl From<FreeArg> for FreeParameter {
    fn from(arg: FreeArg) -> FreeParameter {
        match arg {
            FreeArg::Sigma => FreeParameter::PackingCrossSection,
            FreeArg::SigmaLe => FreeParameter::EmitterFootprint,
            FreeArg::Bandwidth => FreeParameter::LinkBandwidth,
            FreeArg::SignalSpeed => FreeParameter::SignalSpeed,
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Size an installation: wire count, the four candidate diameters,
    /// the binding constraint, latency, and required threads.
    Size {
        /// JSON configuration file (all values SI).
        config: PathBuf,
        /// Formula family; overrides the config's `variant` key.
        #[arg(long, value_enum)]
        variant: Option<VariantArg>,
        /// Output format.
        #[arg(long, value_enum, default_value_t = FormatArg::Json)]
        format: FormatArg,
        /// Signal path length convention for the propagation term.
        #[arg(long, value_enum, default_value_t = DistanceArg::Diameter)]
        distance: DistanceArg,
    },
    /// Sweep one parameter and emit a CSV table of sizing outputs.
    Sweep {
        /// JSON configuration file providing the base design point.
        config: PathBuf,
        /// Parameter to sweep.
        #[arg(long, value_enum)]
        param: ParamArg,
        /// Lower bound, in the parameter's unit (op/s, Hz, or nodes).
        #[arg(long)]
        min: f64,
        /// Upper bound, in the parameter's unit.
        #[arg(long)]
        max: f64,
        /// Number of grid points (>= 2), endpoints included.
        #[arg(long)]
        points: usize,
        /// Logarithmic spacing (default linear); requires min > 0.
        #[arg(long)]
        log: bool,
        /// Freeze the network diameter at the base config's value to
        /// isolate square-root scaling.
        #[arg(long)]
        pin_diameter: bool,
        /// Comma-separated output columns (default: all).
        #[arg(long, value_delimiter = ',')]
        outputs: Option<Vec<String>>,
        /// Formula family; overrides the config's `variant` key.
        #[arg(long, value_enum)]
        variant: Option<VariantArg>,
    },
    /// Compare interconnect technologies around one machine: absolute
    /// values plus ratios against the first (baseline) config.
    Compare {
        /// Two or more JSON configs. The first supplies the machine,
        /// traffic, cooling, and energy models; each config contributes
        /// its technology section as one comparison column.
        #[arg(required = true, num_args = 2..)]
        configs: Vec<PathBuf>,
        /// Output format.
        #[arg(long, value_enum, default_value_t = FormatArg::Csv)]
        format: FormatArg,
        /// Formula family; overrides the configs' `variant` keys.
        #[arg(long, value_enum)]
        variant: Option<VariantArg>,
    },
    /// Solve for the candidate-technology parameter value at which a
    /// metric matches the baseline's, by bisection.
    Breakeven {
        /// Baseline JSON config (fixed).
        baseline: PathBuf,
        /// Candidate JSON config; its free parameter is varied.
        candidate: PathBuf,
        /// Metric to equalize.
        #[arg(long, value_enum)]
        metric: MetricArg,
        /// The candidate parameter to solve for.
        #[arg(long, value_enum)]
        free: FreeArg,
        /// Bracket lower bound, in the free parameter's unit.
        #[arg(long)]
        lo: f64,
        /// Bracket upper bound, in the free parameter's unit.
        #[arg(long)]
        hi: f64,
        /// Output format.
        #[arg(long, value_enum, default_value_t = FormatArg::Json)]
        format: FormatArg,
        /// Formula family; overrides the configs' `variant` keys.
        #[arg(long, value_enum)]
        variant: Option<VariantArg>,
    },
    /// Run the latency-hiding simulator across a range of thread counts;
    /// emits a threads,utilization CSV plus a trailing knee row.
    Simulate {
        /// Optional JSON config whose `simulation` section supplies
        /// defaults; flags override it.
        config: Option<PathBuf>,
        /// Thread counts to sweep, as LO:HI:STEP (inclusive).
        #[arg(long, value_name = "LO:HI:STEP")]
        threads_range: String,
        /// Mean round-trip memory latency in cycles. Required unless the
        /// config's simulation section sets round_trip_cycles.
        #[arg(long)]
        latency: Option<u32>,
        /// Latency jitter as a fraction of the round trip, in [0, 1).
        #[arg(long)]
        jitter: Option<f64>,
        /// Probability an operation is a blocking memory access, in [0, 1].
        #[arg(long)]
        memory_prob: Option<f64>,
        /// Warm-up cycles before measurement (default 10x latency).
        #[arg(long)]
        warmup: Option<u64>,
        /// Measured cycles (default 100x(1 + latency)).
        #[arg(long)]
        measured: Option<u64>,
        /// Random seed; runs are bit-identical per seed.
        #[arg(long)]
        seed: Option<u64>,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(output) => {
            use std::io::Write;
            match writeln!(std::io::stdout().lock(), "{output}") {
                Ok(()) => ExitCode::SUCCESS,
                // Downstream closed the pipe early (e.g. `| head`).
                Err(e) if e.kind() == std::io::ErrorKind::BrokenPipe => ExitCode::SUCCESS,
                Err(e) => {
                    eprintln!("error: cannot write to stdout: {e}");
                    ExitCode::FAILURE
                }
            }
        }
        Err(error) => {
            eprintln!("error: {error}");
            ExitCode::from(error.exit_code() as u8)
        }
    }
}

fn run(command: Command) -> Result<String> {
    match command {
        Command::Size { config, variant, format, distance } => {
            let (_, bundle) = load_bundle(&config, variant)?;
            let report = FullReport::evaluate(&bundle, distance.into())?;
            Ok(match format {
                FormatArg::Json => report.to_json(),
                FormatArg::Csv => report.to_csv(),
            })
        }
        Command::Sweep { config, param, min, max, points, log, pin_diameter, outputs, variant } => {
            let (_, bundle) = load_bundle(&config, variant)?;
            let spec = SweepSpec {
                parameter: param.into(),
                range: SweepRange {
                    min,
                    max,
                    points,
                    spacing: if log { Spacing::Log } else { Spacing::Linear },
                },
                pin_diameter,
                outputs,
            };
            let table = run_sweep(&bundle, &spec)?;
            Ok(table.to_csv())
        }
        Command::Compare { configs, format, variant } => {
            let (base_cfg, base_bundle) = load_bundle(&configs[0], variant)?;
            let mut technologies: Vec<(String, InterconnectTech)> =
                vec![(base_cfg.display_name(&configs[0]), base_bundle.technology.clone())];
            for path in &configs[1..] {
                let (cfg, bundle) = load_bundle(path, variant)?;
                technologies.push((cfg.display_name(path), bundle.technology));
            }
            let table = compare_technologies(&base_bundle, &technologies)?;
            Ok(match format {
                FormatArg::Json => table.to_json(),
                FormatArg::Csv => table.to_csv(),
            })
        }
        Command::Breakeven { baseline, candidate, metric, free, lo, hi, format, variant } => {
            let (_, baseline) = load_bundle(&baseline, variant)?;
            let (_, candidate) = load_bundle(&candidate, variant)?;
            let query = BreakEvenQuery { metric: metric.into(), free_parameter: free.into(), lo, hi };
            let solution = break_even(&baseline, &candidate, &query)?;
            Ok(match format {
                FormatArg::Json => solution.to_json(&query),
                FormatArg::Csv => solution.to_csv(&query),
            })
        }
        Command::Simulate { config, threads_range, latency, jitter, memory_prob, warmup, measured, seed } => {
            let section = match &config {
                Some(path) => ConfigFile::load(path)?.simulation,
                None => None,
            };
            let round_trip = latency
                .or_else(|| section.as_ref().and_then(|s| s.round_trip_cycles))
                .ok_or_else(|| {
                    Error::invalid(
                        "latency",
                        "required: pass --latency or a config whose simulation section \
                         sets round_trip_cycles",
                    )
                })?;
            let mut base = match &section {
                Some(s) => s.to_sim_config(1, round_trip),
                None => SimConfig::new(1, round_trip),
            };
            if let Some(j) = jitter {
                base.latency_jitter = j;
            }
            if let Some(p) = memory_prob {
                base.memory_op_probability = p;
            }
            if let Some(w) = warmup {
                base.warmup_cycles = w;
            }
            if let Some(m) = measured {
                base.measured_cycles = m;
            }
            if let Some(s) = seed {
                base.seed = s;
            }
            let range = parse_threads_range(&threads_range)?;
            let curve = utilization_curve(&base, &range)?;
            let knee = find_knee(&curve)?;
            Ok(curve_to_csv(&curve, knee))
        }
    }
}

fn load_bundle(path: &Path, variant: Option<VariantArg>) -> Result<(ConfigFile, Bundle)> {
    let cfg = ConfigFile::load(path)?;
    let bundle = cfg.bundle(variant.map(FormulaVariant::from))?;
    Ok((cfg, bundle))
}

/// Parses `LO:HI:STEP` into an inclusive, strictly increasing list.
fn parse_threads_range(text: &str) -> Result<Vec<u32>> {
    let bad = || {
        Error::invalid(
            "threads-range",
            format!("expected LO:HI:STEP with 1 <= LO <= HI and STEP >= 1, got {text:?}"),
        )
    };
    let parts: Vec<&str> = text.split(':').collect();
    if parts.len() != 3 {
        return Err(bad());
    }
    let lo: u32 = parts[0].parse().map_err(|_| bad())?;
    let hi: u32 = parts[1].parse().map_err(|_| bad())?;
    let step: u32 = parts[2].parse().map_err(|_| bad())?;
    if lo < 1 || hi < lo || step < 1 {
        return Err(bad());
    }
    Ok((lo..=hi).step_by(step as usize).collect())
}
