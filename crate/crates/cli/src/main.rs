use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use fertaper_cli::tools::{
    self, DecodeConfig, DecodeMethod, GraphGenConfig, GraphTableConfig, HperpConfig, OaConfig,
    RunOptions,
};
use fertaper_cli::{
    run_pipeline, verify, CodeSource, EncodingChoice, Outputs, PipelineConfig, RunReport,
    SectorPolicy, Suite, TaperOptions, VerificationLevel, VerifyConfig,
};
use fertaper_core::mappings::EncodingKind;
use fertaper_core::taper::{PivotPreference, Sector};
use fertaper_core::BitVector;

/// Qubit encodings of fermionic Hamiltonians: standard maps with symmetry
/// tapering, codeword encodings, graph codes and first quantization.
///
/// Every command emits a JSON run report (to --report, or stdout) and exits
/// with 0 iff every enabled check passed, 1 if a check failed and 2 on
/// errors. Dense oracles refuse registers above 14 qubits unless
/// FERTAPER_MAX_DENSE_QUBITS raises the limit.
#[derive(Parser, Debug)]
#[command(name = "fertaper", version)]
struct Cli {
    #[command(flatten)]
    common: Common,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug)]
struct Common {
    /// Write the JSON report here and print a PASS/FAIL summary instead.
    #[arg(long, global = true, value_name = "PATH")]
    report: Option<PathBuf>,
    /// Checks to run: none, structural, or dense-oracle (adds dense
    /// matrix oracles, subject to the size guards).
    #[arg(long, global = true, value_enum, default_value_t = VerificationLevel::Structural)]
    verification: VerificationLevel,
    /// Seed from which every random stream is derived.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Record per-stage wall-clock times in the report (makes reports
    /// differ between runs).
    #[arg(long, global = true)]
    timings: bool,
    /// More log output on stderr (repeat for debug).
    #[arg(short, long, global = true, action = clap::ArgAction::Count)]
    verbose: u8,
}

#[derive(Args, Debug)]
#[group(required = true, multiple = false)]
struct CodeArgs {
    /// Parity-check matrix file (`Q M` header, then Q rows of 0/1).
    #[arg(long, value_name = "PATH")]
    check: Option<PathBuf>,
    /// Bipartite graph file (`Q_left Q_right M` header, then `u v` edges).
    #[arg(long, value_name = "PATH")]
    graph: Option<PathBuf>,
}

impl CodeArgs {
    fn source(&self) -> CodeSource {
        match (&self.check, &self.graph) {
            (Some(p), _) => CodeSource::ParityCheck(p.clone()),
            (_, Some(p)) => CodeSource::Graph(p.clone()),
            _ => unreachable!("clap requires one of --check and --graph"),
        }
    }
}

#[derive(Args, Debug)]
struct SectorArgs {
    /// Symmetry sector as one sign per generator, e.g. `++-`.
    #[arg(long, value_name = "SIGNS", conflicts_with = "enumerate")]
    sector: Option<Sector>,
    /// Diagonalize every sector and keep the lowest (the default).
    #[arg(long)]
    enumerate: bool,
    /// Pivot qubit choice when pairing generators: highest or lowest.
    #[arg(long, default_value = "highest")]
    pivot: PivotPreference,
}

impl SectorArgs {
    fn options(&self) -> TaperOptions {
        TaperOptions {
            policy: match &self.sector {
                Some(s) => SectorPolicy::Fixed(s.clone()),
                None => SectorPolicy::Enumerate,
            },
            pivot: self.pivot,
        }
    }
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Map a fermionic Hamiltonian (JSON) to qubits with a standard encoding.
    Encode {
        /// Fermionic Hamiltonian JSON: {"modes","particles","t","u"}.
        #[arg(long)]
        input: PathBuf,
        /// Encoding: jw, parity or bintree.
        #[arg(long, default_value = "jw")]
        map: EncodingKind,
        /// Encoded Hamiltonian as `re im PAULI` lines.
        #[arg(long)]
        output: Option<PathBuf>,
        /// Also find symmetries and taper them off.
        #[arg(long)]
        taper: bool,
        #[command(flatten)]
        sector: SectorArgs,
        /// Tapered Hamiltonian as `re im PAULI` lines (implies --taper).
        #[arg(long)]
        tapered_output: Option<PathBuf>,
    },
    /// Find Pauli symmetries of a qubit Hamiltonian and taper them off.
    Taper {
        /// Qubit Hamiltonian as `re im PAULI` lines.
        #[arg(long)]
        input: PathBuf,
        #[command(flatten)]
        sector: SectorArgs,
        /// Tapered Hamiltonian of the selected sector.
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Build the codeword-encoded simulator Hamiltonian.
    Codesim {
        #[command(flatten)]
        code: CodeArgs,
        /// Fermionic Hamiltonian JSON; its particle count fixes N.
        #[arg(long)]
        input: PathBuf,
        /// Penalty weight g on states outside the codespace (default:
        /// twice the simulator norm bound plus one).
        #[arg(long)]
        penalty: Option<f64>,
        /// Framed diagonals as JSON.
        #[arg(long)]
        output: Option<PathBuf>,
        /// Never materialize diagonals; they are written as "lazy".
        #[arg(long)]
        lazy: bool,
    },
    /// Greedy search for a high-girth bipartite graph code.
    Graphgen {
        /// Vertices, i.e. qubits.
        #[arg(long)]
        qubits: usize,
        /// Particle number N; the girth is kept at least 2N+2.
        #[arg(long)]
        particles: usize,
        /// Randomized greedy trials; the best is kept.
        #[arg(long, default_value_t = 1000)]
        trials: usize,
        /// Graph file to write.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// CSV table of greedy mode counts over qubit and particle ranges.
    Graphtable {
        /// Smallest qubit count.
        #[arg(long, default_value_t = 4)]
        qmin: usize,
        /// Largest qubit count.
        #[arg(long)]
        qmax: usize,
        /// Largest particle number.
        #[arg(long)]
        nmax: usize,
        /// Greedy trials per cell.
        #[arg(long, default_value_t = 1000)]
        trials: usize,
        /// CSV file to write (default: stdout).
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Decode a syndrome to its unique weight-N occupation vector.
    Decode {
        #[command(flatten)]
        code: CodeArgs,
        /// Particle number N.
        #[arg(long)]
        particles: usize,
        /// Syndrome bits, qubit 1 first, e.g. 0101.
        #[arg(long)]
        syndrome: BitVector,
        /// Decoder to report; the others cross-check it.
        #[arg(long, value_enum, default_value_t = DecodeMethod::Auto)]
        method: DecodeMethod,
    },
    /// First-quantized encoding with measurement bins from an orthogonal array.
    Firstq {
        /// Fermionic Hamiltonian JSON.
        #[arg(long)]
        input: PathBuf,
        /// Measurement bins as JSON.
        #[arg(long)]
        emit_bins: Option<PathBuf>,
        /// Register Hamiltonian as `re im PAULI` lines.
        #[arg(long)]
        output: Option<PathBuf>,
        /// Penalty weight g (default: from the norm bound of T+U).
        #[arg(long)]
        penalty: Option<f64>,
        /// Also report the smallest working penalty on a geometric grid.
        #[arg(long)]
        sweep: bool,
    },
    /// Orthogonal array of strength two over GF(3^m).
    Oa {
        /// Field degree, 1 to 4.
        #[arg(long)]
        m: usize,
        /// Check strength two and the closed-form row lookup.
        #[arg(long)]
        verify: bool,
        /// Array entries, one row per line.
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Spectrum of the antisymmetrizing penalty on N registers of M labels.
    Hperp {
        /// Registers (particles).
        #[arg(long = "N", value_name = "N")]
        particles: usize,
        /// Labels per register (modes).
        #[arg(long = "M", value_name = "M")]
        labels: usize,
        /// Also diagonalize densely and compare.
        #[arg(long)]
        spectrum: bool,
    },
    /// Run a verification suite on generated instances.
    Verify {
        /// h2, spectra, oa, graph, decode, firstq, hperp or all.
        #[arg(long, value_enum, default_value_t = Suite::All)]
        suite: Suite,
        /// Modes for the spectra, firstq and hperp suites.
        #[arg(long = "M", value_name = "M")]
        modes: Option<usize>,
        /// Particles for the spectra, firstq and hperp suites.
        #[arg(long = "N", value_name = "N")]
        particles: Option<usize>,
        /// Field degree for the oa suite.
        #[arg(long)]
        m: Option<usize>,
        /// Random instances per suite.
        #[arg(long, default_value_t = 3)]
        instances: usize,
        /// Greedy trials in the graph suite.
        #[arg(long, default_value_t = 1000)]
        trials: usize,
    },
}

fn pipeline(common: &Common, input: PathBuf, encoding: EncodingChoice) -> PipelineConfig {
    PipelineConfig {
        verification: common.verification,
        seed: common.seed,
        timings: common.timings,
        ..PipelineConfig::new(input, encoding)
    }
}

fn run(cli: Cli) -> fertaper_core::Result<RunReport> {
    let common = &cli.common;
    let opts = RunOptions {
        seed: common.seed,
        verification: common.verification,
        timings: common.timings,
    };
    match cli.command {
        Command::Encode {
            input,
            map,
            output,
            taper,
            sector,
            tapered_output,
        } => {
            let mut cfg = pipeline(common, input, EncodingChoice::Standard(map));
            if taper || tapered_output.is_some() || sector.sector.is_some() || sector.enumerate {
                cfg.taper = Some(sector.options());
            }
            cfg.outputs = Outputs {
                hamiltonian: output,
                tapered: tapered_output,
                ..Outputs::default()
            };
            run_pipeline(&cfg)
        }
        Command::Taper {
            input,
            sector,
            output,
        } => {
            let mut cfg = pipeline(common, input, EncodingChoice::Qubit);
            cfg.taper = Some(sector.options());
            cfg.outputs.tapered = output;
            run_pipeline(&cfg)
        }
        Command::Codesim {
            code,
            input,
            penalty,
            output,
            lazy,
        } => {
            let mut cfg = pipeline(
                common,
                input,
                EncodingChoice::Code {
                    source: code.source(),
                    lazy,
                },
            );
            cfg.penalty = penalty;
            cfg.outputs.framed = output;
            run_pipeline(&cfg)
        }
        Command::Graphgen {
            qubits,
            particles,
            trials,
            out,
        } => tools::graphgen(&GraphGenConfig {
            qubits,
            particles,
            trials,
            output: out,
            run: opts,
        }),
        Command::Graphtable {
            qmin,
            qmax,
            nmax,
            trials,
            output,
        } => {
            let to_stdout = output.is_none();
            let (report, csv) = tools::graphtable(&GraphTableConfig {
                qmin,
                qmax,
                nmax,
                trials,
                output,
                run: opts,
            })?;
            if to_stdout {
                print!("{csv}");
            }
            Ok(report)
        }
        Command::Decode {
            code,
            particles,
            syndrome,
            method,
        } => tools::decode(&DecodeConfig {
            source: code.source(),
            particles,
            syndrome,
            method,
            run: opts,
        }),
        Command::Firstq {
            input,
            emit_bins,
            output,
            penalty,
            sweep,
        } => {
            let mut cfg = pipeline(common, input, EncodingChoice::FirstQuantized { sweep });
            cfg.penalty = penalty;
            cfg.outputs.hamiltonian = output;
            cfg.outputs.bins = emit_bins;
            run_pipeline(&cfg)
        }
        Command::Oa { m, verify, output } => tools::oa(&OaConfig {
            m,
            verify,
            output,
            run: opts,
        }),
        Command::Hperp {
            particles,
            labels,
            spectrum,
        } => tools::hperp(&HperpConfig {
            particles,
            labels,
            spectrum,
            run: opts,
        }),
        Command::Verify {
            suite,
            modes,
            particles,
            m,
            instances,
            trials,
        } => verify(&VerifyConfig {
            suite,
            modes,
            particles,
            m,
            instances,
            trials,
            seed: common.seed,
            timings: common.timings,
        }),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let level = match cli.common.verbose {
        0 => "warn",
        1 => "info",
        _ => "debug",
    };
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or(level)).init();
    let report_path = cli.common.report.clone();
    let csv_on_stdout = matches!(&cli.command, Command::Graphtable { output: None, .. });
    let report = match run(cli) {
        Ok(r) => r,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    };
    match &report_path {
        Some(p) => {
            if let Err(e) = report.write(p) {
                eprintln!("error: cannot write report to {}: {e}", p.display());
                return ExitCode::from(2);
            }
            if csv_on_stdout {
                eprint!("{}", report.summary());
            } else {
                print!("{}", report.summary());
            }
        }
        None if csv_on_stdout => eprint!("{}", report.summary()),
        None => print!("{}", report.to_json()),
    }
    if report.passed() {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
