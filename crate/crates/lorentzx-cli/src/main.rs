//! `lorentzx`: membership, duality, and positive-operator checks for the
//! extended Lorentz cones `L(p,q)` and `M(p,q)` from the command line.
//!
//! Exit codes: 0 for a positive (or successful) outcome, 1 for a refuted
//! one, 2 when the answer lands inside the tolerance band, 3 for input or
//! computation errors.

mod io;

use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::error::ErrorKind;
use clap::{Args, ColorChoice, CommandFactory, FromArgMatches, Parser, Subcommand, ValueEnum};
use lorentzx::cone::ConeDims;
use lorentzx::gen::{gap_study, operator_stream, point_stream, sample_l, sample_m, GapSummary, SampleMode};
use lorentzx::posop::{
    analyze, exp_automorphism_check, lyapunov_like_report, AnalyzeConfig, Status,
};
use lorentzx::rng::RngStream;
use lorentzx::Tolerances;

#[derive(Parser)]
#[command(
    name = "lorentzx",
    version,
    about = "Cone membership and positive-operator checks for L(p,q) and M(p,q)"
)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Args)]
struct TolArgs {
    /// Absolute slack allowed in membership and semidefiniteness tests.
    #[arg(long, default_value_t = 1e-9)]
    tol_abs: f64,
    /// Relative slack when comparing computed quantities.
    #[arg(long, default_value_t = 1e-9)]
    tol_rel: f64,
}

impl TolArgs {
    fn tolerances(&self) -> Tolerances {
        Tolerances {
            abs_tol: self.tol_abs,
            rel_tol: self.tol_rel,
            ..Tolerances::default()
        }
    }
}

#[derive(Args)]
struct DimArgs {
    /// First-block dimension; required for CSV input, checked against JSON.
    #[arg(long)]
    p: Option<usize>,
    /// Second-block dimension; required for CSV input, checked against JSON.
    #[arg(long)]
    q: Option<usize>,
}

#[derive(Copy, Clone, ValueEnum)]
enum GenKind {
    /// A positive operator of M(p,q), one CSV matrix per file.
    Operator,
    /// Points of M(p,q), one flat CSV row per point.
    PointsM,
    /// Points of L(p,q), one flat CSV row per point.
    PointsL,
}

#[derive(Copy, Clone, ValueEnum)]
enum GenMode {
    Interior,
    Boundary,
    Mix,
}

impl GenMode {
    fn sample_mode(self) -> SampleMode {
        match self {
            GenMode::Interior => SampleMode::Interior,
            GenMode::Boundary => SampleMode::Boundary,
            GenMode::Mix => SampleMode::Mix,
        }
    }
}

#[derive(Subcommand)]
enum Cmd {
    /// Reports L- and M-membership with slacks for every point in FILE.
    Membership {
        file: PathBuf,
        #[command(flatten)]
        dims: DimArgs,
        #[command(flatten)]
        tol: TolArgs,
        /// Write the JSON report here instead of stdout.
        #[arg(long)]
        output: Option<PathBuf>,
        /// Omit the generated_at field for byte-reproducible output.
        #[arg(long)]
        no_timestamp: bool,
    },
    /// Decides whether the matrix in FILE maps M(p,q) into itself.
    CheckPositive {
        file: PathBuf,
        #[command(flatten)]
        dims: DimArgs,
        #[command(flatten)]
        tol: TolArgs,
        /// Seed for the sampled condition battery and Monte Carlo sweep.
        #[arg(long, default_value_t = 1729)]
        seed: u64,
        /// Monte Carlo samples cross-validating a positive answer.
        #[arg(long, default_value_t = 2000)]
        samples: u64,
        #[arg(long)]
        output: Option<PathBuf>,
        #[arg(long)]
        no_timestamp: bool,
    },
    /// Tests whether <A z, s> vanishes on sampled complementarity pairs.
    Lyapunov {
        file: PathBuf,
        #[command(flatten)]
        dims: DimArgs,
        #[command(flatten)]
        tol: TolArgs,
        #[arg(long, default_value_t = 1729)]
        seed: u64,
        /// Number of complementarity pairs to sample.
        #[arg(long, default_value_t = 2000)]
        samples: u64,
        #[arg(long)]
        output: Option<PathBuf>,
        #[arg(long)]
        no_timestamp: bool,
    },
    /// Checks positivity of exp(tA) and exp(-tA) at each t.
    Expmap {
        file: PathBuf,
        #[command(flatten)]
        dims: DimArgs,
        #[command(flatten)]
        tol: TolArgs,
        /// Comma-separated evaluation points.
        #[arg(long, value_delimiter = ',', default_values_t = vec![0.5, 1.0, 2.0])]
        t_values: Vec<f64>,
        #[arg(long)]
        output: Option<PathBuf>,
        #[arg(long)]
        no_timestamp: bool,
    },
    /// Generates positive operators or cone points as CSV.
    Gen {
        #[arg(long)]
        p: usize,
        #[arg(long)]
        q: usize,
        #[arg(long, value_enum, default_value_t = GenKind::Operator)]
        kind: GenKind,
        /// Boundary/interior mix for point generation.
        #[arg(long, value_enum, default_value_t = GenMode::Mix)]
        mode: GenMode,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Operators: number of files. Points: number of rows in one file.
        #[arg(long, default_value_t = 1)]
        count: u64,
        /// File for a single output; directory when generating several
        /// operators.
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Tallies how the check layers classify perturbed positive operators.
    Gap {
        #[arg(long)]
        p: usize,
        #[arg(long)]
        q: usize,
        #[command(flatten)]
        tol: TolArgs,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Number of sampled operators.
        #[arg(long, default_value_t = 200)]
        samples: u64,
        /// Scale of the Gaussian noise added to each constructed operator.
        #[arg(long, default_value_t = 0.05)]
        perturbation: f64,
        /// Write the CSV summary here instead of stdout.
        #[arg(long)]
        output: Option<PathBuf>,
    },
}

fn main() -> ExitCode {
    let color = if std::env::var_os("NO_COLOR").is_some() {
        ColorChoice::Never
    } else {
        ColorChoice::Auto
    };
    let matches = match Cli::command().color(color).try_get_matches() {
        Ok(m) => m,
        Err(err) => {
            let code = match err.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => 3,
            };
            let _ = err.print();
            return ExitCode::from(code);
        }
    };
    let cli = match Cli::from_arg_matches(&matches) {
        Ok(cli) => cli,
        Err(err) => {
            let _ = err.print();
            return ExitCode::from(3);
        }
    };
    match run(cli) {
        Ok(code) => code,
        Err(err) => {
            eprintln!("error: {err:#}");
            ExitCode::from(3)
        }
    }
}

fn emit(output: &Option<PathBuf>, content: &str) -> Result<()> {
    match output {
        Some(path) => std::fs::write(path, content)
            .with_context(|| format!("writing {}", path.display())),
        None => {
            print!("{content}");
            Ok(())
        }
    }
}

fn emit_json(
    output: &Option<PathBuf>,
    value: serde_json::Value,
    no_timestamp: bool,
) -> Result<()> {
    let mut value = value;
    if !no_timestamp {
        let now = std::time::SystemTime::now()
            .duration_since(std::time::UNIX_EPOCH)
            .map(|d| d.as_secs())
            .unwrap_or(0);
        value
            .as_object_mut()
            .expect("reports serialize to objects")
            .insert("generated_at".to_string(), now.into());
    }
    emit(output, &format!("{}\n", serde_json::to_string_pretty(&value)?))
}

fn run(cli: Cli) -> Result<ExitCode> {
    match cli.cmd {
        Cmd::Membership {
            file,
            dims,
            tol,
            output,
            no_timestamp,
        } => {
            let tolerances = tol.tolerances();
            let points = io::read_points(&file, dims.p, dims.q)?;
            let effective = points.first().map(|z| z.dims());
            let results: Vec<serde_json::Value> = points
                .iter()
                .enumerate()
                .map(|(k, z)| {
                    serde_json::json!({
                        "index": k + 1,
                        "in_l": z.in_l(&tolerances),
                        "in_m": z.in_m(&tolerances),
                        "l_slack": z.l_slack(),
                        "m_slack": z.m_slack(),
                        "quadratic_form": z.quadratic_form(),
                    })
                })
                .collect();
            let report = serde_json::json!({
                "config": {
                    "p": effective.map(|d| d.p()).or(dims.p),
                    "q": effective.map(|d| d.q()).or(dims.q),
                    "tol_abs": tol.tol_abs,
                    "tol_rel": tol.tol_rel,
                },
                "count": points.len(),
                "points": results,
            });
            emit_json(&output, report, no_timestamp)?;
            Ok(ExitCode::SUCCESS)
        }
        Cmd::CheckPositive {
            file,
            dims,
            tol,
            seed,
            samples,
            output,
            no_timestamp,
        } => {
            let op = io::read_operator(&file, dims.p, dims.q)?;
            let cfg = AnalyzeConfig {
                tol: tol.tolerances(),
                seed,
                mc_samples: samples,
            };
            let verdict = analyze(&op, &cfg)?;
            let mut report = serde_json::to_value(&verdict)?;
            report.as_object_mut().unwrap().insert(
                "config".to_string(),
                serde_json::json!({
                    "p": op.dims().p(),
                    "q": op.dims().q(),
                    "tol_abs": tol.tol_abs,
                    "tol_rel": tol.tol_rel,
                    "seed": seed,
                    "samples": samples,
                }),
            );
            emit_json(&output, report, no_timestamp)?;
            Ok(match verdict.status {
                Status::Positive => ExitCode::SUCCESS,
                Status::NotPositive => ExitCode::from(1),
                Status::Unknown => ExitCode::from(2),
            })
        }
        Cmd::Lyapunov {
            file,
            dims,
            tol,
            seed,
            samples,
            output,
            no_timestamp,
        } => {
            let op = io::read_operator(&file, dims.p, dims.q)?;
            let report = lyapunov_like_report(&op, samples, seed, &tol.tolerances())?;
            let like = report.lyapunov_like;
            let mut value = serde_json::to_value(&report)?;
            value.as_object_mut().unwrap().insert(
                "config".to_string(),
                serde_json::json!({
                    "p": op.dims().p(),
                    "q": op.dims().q(),
                    "tol_abs": tol.tol_abs,
                    "tol_rel": tol.tol_rel,
                    "seed": seed,
                    "samples": samples,
                }),
            );
            emit_json(&output, value, no_timestamp)?;
            Ok(if like { ExitCode::SUCCESS } else { ExitCode::from(1) })
        }
        Cmd::Expmap {
            file,
            dims,
            tol,
            t_values,
            output,
            no_timestamp,
        } => {
            let op = io::read_operator(&file, dims.p, dims.q)?;
            let steps = exp_automorphism_check(&op, &t_values, &tol.tolerances())?;
            let all_auto = steps.iter().all(|s| s.automorphism);
            let report = serde_json::json!({
                "config": {
                    "p": op.dims().p(),
                    "q": op.dims().q(),
                    "tol_abs": tol.tol_abs,
                    "tol_rel": tol.tol_rel,
                    "t_values": t_values,
                },
                "steps": steps,
            });
            emit_json(&output, report, no_timestamp)?;
            Ok(if all_auto { ExitCode::SUCCESS } else { ExitCode::from(1) })
        }
        Cmd::Gen {
            p,
            q,
            kind,
            mode,
            seed,
            count,
            output,
        } => {
            let dims = ConeDims::new(p, q)?;
            match kind {
                GenKind::Operator => {
                    if count == 1 {
                        let mut rng = operator_stream(seed, 0);
                        let op = lorentzx::gen::make_positive_operator(dims, &mut rng);
                        emit(&output, &io::operator_csv(&op))?;
                    } else {
                        let dir = match &output {
                            Some(d) => d,
                            None => bail!("--count > 1 needs --output DIR"),
                        };
                        std::fs::create_dir_all(dir)
                            .with_context(|| format!("creating {}", dir.display()))?;
                        for index in 0..count {
                            let mut rng = operator_stream(seed, index);
                            let op = lorentzx::gen::make_positive_operator(dims, &mut rng);
                            let path = dir.join(format!("operator_{index:03}.csv"));
                            std::fs::write(&path, io::operator_csv(&op))
                                .with_context(|| format!("writing {}", path.display()))?;
                        }
                    }
                }
                GenKind::PointsM | GenKind::PointsL => {
                    let points: Vec<_> = (0..count)
                        .map(|index| {
                            let mut rng = point_stream(seed, index);
                            match kind {
                                GenKind::PointsM => sample_m(dims, &mut rng, mode.sample_mode()),
                                _ => sample_l(dims, &mut rng, mode.sample_mode()),
                            }
                        })
                        .collect();
                    emit(&output, &io::points_csv(&points))?;
                }
            }
            Ok(ExitCode::SUCCESS)
        }
        Cmd::Gap {
            p,
            q,
            tol,
            seed,
            samples,
            perturbation,
            output,
        } => {
            let dims = ConeDims::new(p, q)?;
            let rng = RngStream::new(seed, 0);
            let summary = gap_study(dims, samples, perturbation, &rng, &tol.tolerances())?;
            let csv = format!("{}\n{}\n", GapSummary::CSV_HEADER, summary.csv_row());
            emit(&output, &csv)?;
            Ok(ExitCode::SUCCESS)
        }
    }
}
