use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{bail, Context};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;

use skrecoup_core::combinatorics::{conjugacy_classes, sk_dimension, CycleType};
use skrecoup_core::experiments::{self, SpectrumEstimationParams};
use skrecoup_core::intertwiner::{cg_isometries, kronecker_coefficient};
use skrecoup_core::recoupling::{parse_six_labels, recoupling_tensor};
use skrecoup_core::repsym::{character, character_row};
use skrecoup_core::schurweyl::{overlap_trace, TripartiteLabels};
use skrecoup_core::{DensityMatrix, ExperimentReport, OutputFormat, Partition, SpectraTuple};

#[derive(Parser)]
#[command(
    name = "skrecoup",
    version,
    about = "Symmetric-group recoupling coefficients and tripartite entropy experiments"
)]
struct Cli {
    /// Base seed for every randomized step.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Write the report to this file instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,
    /// Worker threads; defaults to the number of cores.
    #[arg(long, global = true)]
    threads: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Json,
    Csv,
}

#[derive(Subcommand)]
enum Command {
    /// Character of an irrep on one cycle type, or its whole row.
    Char {
        #[arg(long)]
        lambda: Partition,
        #[arg(long)]
        cycle_type: Option<Partition>,
    },
    /// Kronecker coefficient g(α, β, λ).
    Kron {
        #[arg(long)]
        alpha: Partition,
        #[arg(long)]
        beta: Partition,
        #[arg(long)]
        lambda: Partition,
    },
    /// Orthonormal intertwiners [λ] → [α]⊗[β].
    Cg {
        #[arg(long)]
        alpha: Partition,
        #[arg(long)]
        beta: Partition,
        #[arg(long)]
        lambda: Partition,
    },
    /// Recoupling tensor for labels "α/β/γ/μ/ν/λ", e.g. "2,1/2,1/2,1/3/2,1/2,1".
    Recoupling {
        #[arg(long)]
        labels: String,
    },
    /// Norms and column-swap residuals for every six-tuple at one k.
    ScanRecoupling(ScanArgs),
    /// Sum rule and unitarity of the full recoupling matrices at one k.
    RecouplingUnitarity(ScanArgs),
    /// Concentration of projected traces for a single-system state.
    SpectrumEstimation {
        #[command(flatten)]
        source: SpectrumSource,
        #[arg(long, default_value_t = 30)]
        k_max: usize,
        #[arg(long, default_value_t = 0.3)]
        delta: f64,
    },
    /// tr(P̃ρ^⊗k), tr(Q̃ρ^⊗k) and tr(P̃Q̃ρ^⊗k) for a label tuple or a δ-ball.
    Overlap {
        #[command(flatten)]
        state: StateArg,
        #[arg(long)]
        k: usize,
        #[arg(long, conflicts_with = "delta", required_unless_present = "delta")]
        labels: Option<String>,
        #[arg(long)]
        delta: Option<f64>,
    },
    /// Certifies Σ hs ≥ |tr(P̃Q̃ρ^⊗k)| ≥ tr(P̃ρ^⊗k) − √(1 − tr(Q̃ρ^⊗k)) over a δ-ball.
    Thm1Certificate {
        #[command(flatten)]
        state: StateArg,
        #[arg(long)]
        k: usize,
        #[arg(long)]
        delta: f64,
    },
    /// Random projector pairs against |tr(PQσ)| ≥ tr(Pσ) − √tr((1−Q)σ).
    SkewUnionFuzz {
        #[arg(long, default_value_t = 10_000)]
        n: usize,
    },
    /// Dimension ratio of rounded diagrams against the strong-subadditivity gap.
    DimensionRatio {
        #[command(flatten)]
        state: StateArg,
        #[arg(long, value_delimiter = ',', default_value = "250,500,1000,2000,4000,8000,16000")]
        ks: Vec<usize>,
    },
    /// Recoupling norms of rounded target spectra, with sampled upper-bound surrogates.
    ConverseProbe {
        /// JSON file with fields r_a, r_b, r_c, r_ab, r_bc, r_abc.
        #[arg(long)]
        spectra: PathBuf,
        #[arg(long, value_delimiter = ',', default_value = "2,3,4")]
        ks: Vec<usize>,
        #[arg(long, default_value_t = 16)]
        samples: usize,
    },
    /// Entropy inequalities over random 2×2×2 states plus a GHZ probe.
    SsaScan {
        #[arg(long, default_value_t = 1000)]
        n: usize,
    },
    /// Validates a state file and echoes its residuals.
    ValidateState {
        #[command(flatten)]
        state: StateArg,
    },
}

#[derive(Args)]
struct ScanArgs {
    #[arg(long)]
    k: usize,
    #[arg(long)]
    max_rows: Option<usize>,
}

#[derive(Args)]
struct StateArg {
    /// State file: {"dims": [...], "matrix": [[[re, im], ...], ...]}.
    #[arg(long)]
    state: PathBuf,
}

#[derive(Args)]
#[group(required = true, multiple = false)]
struct SpectrumSource {
    #[arg(long)]
    state: Option<PathBuf>,
    /// Eigenvalues of a diagonal state, e.g. "0.9,0.1".
    #[arg(long, value_delimiter = ',')]
    spectrum: Option<Vec<f64>>,
}

fn read_state(arg: &StateArg) -> anyhow::Result<DensityMatrix> {
    DensityMatrix::read_file(&arg.state).with_context(|| format!("reading state {}", arg.state.display()))
}

fn single_report(name: &str, parameters: serde_json::Value, record: serde_json::Value) -> ExperimentReport {
    let mut report = ExperimentReport::new(name, parameters);
    report.records.push(record);
    report
}

fn run(cli: &Cli) -> anyhow::Result<ExperimentReport> {
    let report = match &cli.command {
        Command::Char { lambda, cycle_type } => match cycle_type {
            Some(t) => {
                let chi = character(lambda, &CycleType::new(t.clone()))?;
                single_report(
                    "char",
                    json!({ "lambda": lambda, "cycle_type": t }),
                    json!({ "cycle_type": t, "character": chi }),
                )
            }
            None => {
                let mut report = ExperimentReport::new("char", json!({ "lambda": lambda }));
                let row = character_row(lambda);
                for (class, chi) in conjugacy_classes(lambda.k()).iter().zip(row.iter()) {
                    report.records.push(json!({
                        "cycle_type": class.cycles,
                        "class_size": class.class_size.to_string(),
                        "character": chi,
                    }));
                }
                report
                    .summary
                    .insert("dimension".into(), json!(sk_dimension(lambda).exact.to_string()));
                report
            }
        },
        Command::Kron { alpha, beta, lambda } => single_report(
            "kron",
            json!({ "alpha": alpha, "beta": beta, "lambda": lambda }),
            json!({ "g": kronecker_coefficient(alpha, beta, lambda)? }),
        ),
        Command::Cg { alpha, beta, lambda } => single_report(
            "cg",
            json!({ "alpha": alpha, "beta": beta, "lambda": lambda }),
            cg_isometries(alpha, beta, lambda)?.to_json(),
        ),
        Command::Recoupling { labels } => {
            let six = parse_six_labels(labels)?;
            single_report(
                "recoupling",
                json!({ "labels": six }),
                recoupling_tensor(&six)?.to_json(),
            )
        }
        Command::ScanRecoupling(args) => experiments::cmd_scan_recoupling(args.k, args.max_rows.unwrap_or(args.k))?,
        Command::RecouplingUnitarity(args) => {
            experiments::cmd_recoupling_unitarity(args.k, args.max_rows.unwrap_or(args.k))?
        }
        Command::SpectrumEstimation { source, k_max, delta } => {
            let rho = match (&source.state, &source.spectrum) {
                (Some(path), _) => read_state(&StateArg { state: path.clone() })?,
                (None, Some(r)) => DensityMatrix::diagonal(r)?,
                (None, None) => bail!("either --state or --spectrum is required"),
            };
            let params = SpectrumEstimationParams {
                k_max: *k_max,
                delta: *delta,
                ..Default::default()
            };
            experiments::cmd_spectrum_estimation(&rho, &params)?
        }
        Command::Overlap {
            state,
            k,
            labels,
            delta,
        } => {
            let rho = read_state(state)?;
            let set = match (labels, delta) {
                (Some(l), _) => TripartiteLabels::single(&parse_six_labels(l)?),
                (None, Some(d)) => {
                    let dims: [usize; 3] = rho
                        .dims()
                        .try_into()
                        .map_err(|_| anyhow::anyhow!("overlap needs a tripartite state"))?;
                    TripartiteLabels::ball(&skrecoup_core::quantumstates::spectra_tuple(&rho)?, dims, *k, *d)?
                }
                (None, None) => bail!("either --labels or --delta is required"),
            };
            let t = overlap_trace(&set, &rho, *k)?;
            single_report(
                "overlap",
                json!({ "dims": rho.dims(), "k": k, "labels": labels, "delta": delta }),
                json!({ "t_p": t.t_p, "t_q": t.t_q, "overlap_re": t.overlap.re, "overlap_im": t.overlap.im }),
            )
        }
        Command::Thm1Certificate { state, k, delta } => {
            experiments::cmd_thm1_certificate(&read_state(state)?, *k, *delta)?
        }
        Command::SkewUnionFuzz { n } => experiments::cmd_skew_union_fuzz(*n, cli.seed)?,
        Command::DimensionRatio { state, ks } => experiments::cmd_dimension_ratio(&read_state(state)?, ks)?,
        Command::ConverseProbe { spectra, ks, samples } => {
            let text = std::fs::read_to_string(spectra).with_context(|| format!("reading {}", spectra.display()))?;
            let tuple: SpectraTuple = serde_json::from_str(&text).context("parsing spectra")?;
            experiments::cmd_converse_probe(&tuple, ks, *samples, cli.seed)?
        }
        Command::SsaScan { n } => experiments::cmd_ssa_scan(*n, cli.seed)?,
        Command::ValidateState { state } => experiments::cmd_validate_state(&read_state(state)?)?,
    };
    Ok(report)
}

fn emit(cli: &Cli, report: &ExperimentReport) -> anyhow::Result<()> {
    let format = match cli.format {
        Format::Json => OutputFormat::Json,
        Format::Csv => OutputFormat::Csv,
    };
    match &cli.out {
        Some(path) => {
            let file = File::create(path).with_context(|| format!("creating {}", path.display()))?;
            let mut w = BufWriter::new(file);
            report.write(format, &mut w)?;
            w.flush()?;
        }
        None => {
            let stdout = io::stdout();
            let mut w = stdout.lock();
            report.write(format, &mut w)?;
            w.flush()?;
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(n) = cli.threads {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(n).build_global() {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    }
    let result = run(&cli).and_then(|report| emit(&cli, &report).map(|_| report));
    match result {
        Ok(report) => {
            for gate in report.gates.iter().filter(|g| !g.passed) {
                eprintln!("gate {} ({:?}) failed: {}", gate.name, gate.kind, gate.detail);
            }
            if report.passed() {
                ExitCode::SUCCESS
            } else {
                ExitCode::FAILURE
            }
        }
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
