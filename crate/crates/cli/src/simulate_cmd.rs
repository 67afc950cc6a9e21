use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::PathBuf;
use std::time::Instant;

use clap::Args;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use thermest_core::bounds::{ThetaPoint, WeightMatrix};
use thermest_core::estimator::{
    compare_to_bounds, monte_carlo_mse, monte_carlo_with_records, BoundComparison,
    ExperimentConfig, MseMatrix, ProtocolKind, TrialRecord,
};

use crate::manifest::{RunManifest, RunRecord, FORMAT_VERSION};
use crate::point::PointArgs;
use crate::{emit, to_json, CliError, CliResult, OutputArgs};

const MIN_TRIALS: usize = 100;
const DEFAULT_TRIALS: usize = 10_000;
const TABLE_N_MEAN: [f64; 3] = [0.5, 1.0, 2.0];
const TABLE_COPIES: [usize; 3] = [10, 100, 1000];

/// Flags of `simulate`. A `--config` JSON file may supply any of them under
/// the same (kebab-case) names; flags given on the command line win.
#[derive(Args, Debug, Clone, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case", default, deny_unknown_fields)]
pub struct SimulateArgs {
    /// collective, separable or known-n.
    #[arg(long)]
    pub protocol: Option<String>,
    #[arg(long)]
    pub n_mean: Option<f64>,
    #[arg(long, allow_hyphen_values = true, conflicts_with_all = ["theta1", "theta2"])]
    pub zeta_re: Option<f64>,
    #[arg(long, allow_hyphen_values = true, conflicts_with_all = ["theta1", "theta2"])]
    pub zeta_im: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    pub theta1: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    pub theta2: Option<f64>,
    #[arg(long)]
    pub n_copies: Option<usize>,
    #[arg(long)]
    pub trials: Option<usize>,
    #[arg(long)]
    pub seed: Option<u64>,
    /// Preset name or weight file; defaults to the identity.
    #[arg(long)]
    pub weight: Option<String>,
    /// Worker threads; results do not depend on this value.
    #[arg(long)]
    pub threads: Option<usize>,
    /// Per-trial CSV output.
    #[arg(long, value_name = "PATH")]
    pub trial_csv: Option<PathBuf>,
    #[arg(long, value_name = "PATH")]
    pub out: Option<PathBuf>,
    /// Clip negative photon-number estimates to zero.
    #[arg(long)]
    #[serde(skip_serializing_if = "std::ops::Not::not")]
    pub clip_nonneg: bool,
    /// Collective-vs-separable ratio table over N in {0.5, 1, 2} and
    /// n in {10, 100, 1000}.
    #[arg(long)]
    #[serde(skip_serializing_if = "std::ops::Not::not")]
    pub ratio_table: bool,
    /// JSON file with default values for the flags above.
    #[arg(long, value_name = "PATH")]
    #[serde(skip)]
    pub config: Option<PathBuf>,
}

impl SimulateArgs {
    fn merged(self) -> CliResult<SimulateArgs> {
        let Some(path) = &self.config else {
            return Ok(self);
        };
        let text = std::fs::read_to_string(path)?;
        let file: SimulateArgs = serde_json::from_str(&text)
            .map_err(|e| thermest_core::Error::Parse(format!("{}: {e}", path.display())))?;
        let point = self.point().or(file.point());
        Ok(SimulateArgs {
            protocol: self.protocol.or(file.protocol),
            n_mean: self.n_mean.or(file.n_mean),
            zeta_re: None,
            zeta_im: None,
            theta1: None,
            theta2: None,
            n_copies: self.n_copies.or(file.n_copies),
            trials: self.trials.or(file.trials),
            seed: self.seed.or(file.seed),
            weight: self.weight.or(file.weight),
            threads: self.threads.or(file.threads),
            trial_csv: self.trial_csv.or(file.trial_csv),
            out: self.out.or(file.out),
            clip_nonneg: self.clip_nonneg || file.clip_nonneg,
            ratio_table: self.ratio_table || file.ratio_table,
            config: self.config,
        }
        .with_point(point))
    }

    fn point(&self) -> PointArgs {
        PointArgs {
            zeta_re: self.zeta_re,
            zeta_im: self.zeta_im,
            theta1: self.theta1,
            theta2: self.theta2,
        }
    }

    fn with_point(self, p: PointArgs) -> Self {
        SimulateArgs {
            zeta_re: p.zeta_re,
            zeta_im: p.zeta_im,
            theta1: p.theta1,
            theta2: p.theta2,
            ..self
        }
    }
}

/// Resolved experiment echoed into the manifest.
#[derive(Debug, Clone, Serialize)]
struct ConfigEcho {
    protocol: ProtocolKind,
    zeta: [f64; 2],
    n_mean: f64,
    n_copies: usize,
    trials: usize,
    weight: Vec<Vec<f64>>,
    clip_nonneg: bool,
}

#[derive(Serialize)]
struct Summary {
    format_version: &'static str,
    protocol: ProtocolKind,
    zeta: [f64; 2],
    n_mean: f64,
    n: usize,
    trials: usize,
    mse_entries: Vec<Vec<f64>>,
    n_trace_gv: f64,
    se: Option<f64>,
    c_r: f64,
    c_r_closed: Option<f64>,
    ratio: f64,
    ratio_se: Option<f64>,
    exact_n_trace_gv: Option<f64>,
    asymptotic_ratio: f64,
    manifest: RunManifest<ConfigEcho>,
}

fn finite(x: f64) -> Option<f64> {
    x.is_finite().then_some(x)
}

fn weight_rows(w: &WeightMatrix) -> Vec<Vec<f64>> {
    let g = w.matrix();
    (0..g.rows())
        .map(|i| (0..g.cols()).map(|j| g[(i, j)]).collect())
        .collect()
}

fn required<T>(value: Option<T>, flag: &str) -> CliResult<T> {
    value.ok_or_else(|| CliError::Usage(format!("missing --{flag}")))
}

fn resolve_weight(name: Option<&str>, dim: usize) -> CliResult<WeightMatrix> {
    Ok(match name {
        Some(name) => WeightMatrix::load(name)?,
        None => WeightMatrix::identity(dim)?,
    })
}

fn install_threads(threads: Option<usize>) -> CliResult<usize> {
    let mut builder = rayon::ThreadPoolBuilder::new();
    if let Some(t) = threads {
        if t == 0 {
            return Err(CliError::Usage("--threads must be at least 1".into()));
        }
        builder = builder.num_threads(t);
    }
    // a pool may already exist when the command runs inside tests
    let _ = builder.build_global();
    Ok(rayon::current_num_threads())
}

pub fn run(args: SimulateArgs) -> CliResult<()> {
    let args = args.merged()?;
    let started = Instant::now();
    let threads = install_threads(args.threads)?;
    let trials = args.trials.unwrap_or(DEFAULT_TRIALS);
    if trials < MIN_TRIALS {
        return Err(CliError::Usage(format!(
            "--trials must be at least {MIN_TRIALS}"
        )));
    }
    let seed = args.seed.unwrap_or(0);
    let zeta = args.point().zeta(Complex64::new(0.0, 0.0))?;
    let output = OutputArgs {
        json: true,
        out: args.out.clone(),
    };

    if args.ratio_table {
        if args.trial_csv.is_some() {
            return Err(CliError::Usage(
                "--trial-csv cannot be combined with --ratio-table".into(),
            ));
        }
        let text = ratio_table(zeta, trials, seed, args.clip_nonneg)?;
        emit(&output, &text)?;
        return write_sidecar(&output, threads, started);
    }

    let protocol: ProtocolKind = required(args.protocol.as_deref(), "protocol")?.parse()?;
    let n_mean = required(args.n_mean, "n-mean")?;
    let n_copies = required(args.n_copies, "n-copies")?;
    let config = ExperimentConfig {
        protocol,
        theta: ThetaPoint::from_zeta(zeta, n_mean)?,
        n_copies,
        trials,
        seed,
        weight: resolve_weight(args.weight.as_deref(), protocol.dim())?,
        clip_nonneg: args.clip_nonneg,
    };
    config.validate()?;

    let mse = match &args.trial_csv {
        Some(path) => {
            let mut w = BufWriter::new(File::create(path)?);
            writeln!(w, "{}", TrialRecord::CSV_HEADER)?;
            let mse = monte_carlo_with_records(&config, |r| {
                writeln!(w, "{}", r.csv_row())?;
                Ok(())
            })?;
            w.flush()?;
            mse
        }
        None => monte_carlo_mse(&config)?,
    };
    let cmp = compare_to_bounds(&mse, &config)?;
    emit(&output, &to_json(&summary(&config, zeta, &mse, &cmp)))?;
    write_sidecar(&output, threads, started)
}

/// `zeta` is echoed as given; `config.theta` holds it in θ coordinates.
fn summary(
    config: &ExperimentConfig,
    zeta: Complex64,
    mse: &MseMatrix,
    cmp: &BoundComparison,
) -> Summary {
    let echo = ConfigEcho {
        protocol: config.protocol,
        zeta: [zeta.re, zeta.im],
        n_mean: config.theta.n_mean,
        n_copies: config.n_copies,
        trials: config.trials,
        weight: weight_rows(&config.weight),
        clip_nonneg: config.clip_nonneg,
    };
    let v = &mse.entries;
    Summary {
        format_version: FORMAT_VERSION,
        protocol: config.protocol,
        zeta: echo.zeta,
        n_mean: echo.n_mean,
        n: config.n_copies,
        trials: mse.trials,
        mse_entries: (0..v.rows())
            .map(|i| (0..v.cols()).map(|j| v[(i, j)]).collect())
            .collect(),
        n_trace_gv: mse.n_trace_gv,
        se: finite(mse.se_trace),
        c_r: cmp.c_r,
        c_r_closed: cmp.c_r_closed,
        ratio: cmp.ratio,
        ratio_se: finite(cmp.ratio_se),
        exact_n_trace_gv: cmp.exact_n_trace,
        asymptotic_ratio: cmp.asymptotic_ratio,
        manifest: RunManifest::new(config.seed, echo),
    }
}

fn write_sidecar(output: &OutputArgs, threads: usize, started: Instant) -> CliResult<()> {
    if let Some(path) = &output.out {
        let record = RunRecord::new(path, threads, started.elapsed().as_secs_f64());
        std::fs::write(RunRecord::sidecar_path(path), to_json(&record))?;
    }
    Ok(())
}

#[derive(Serialize)]
struct TableRow {
    n_mean: f64,
    n_copies: usize,
    c_r: f64,
    collective_ratio: f64,
    collective_ratio_se: f64,
    separable_ratio: f64,
    separable_ratio_se: f64,
    separable_limit_ratio: f64,
}

#[derive(Serialize)]
struct TableConfig {
    zeta: [f64; 2],
    trials: usize,
    weight: &'static str,
    clip_nonneg: bool,
}

#[derive(Serialize)]
struct RatioTable {
    format_version: &'static str,
    description: &'static str,
    rows: Vec<TableRow>,
    manifest: RunManifest<TableConfig>,
}

fn ratio_table(zeta: Complex64, trials: usize, seed: u64, clip_nonneg: bool) -> CliResult<String> {
    let mut rows = Vec::new();
    for &n_mean in &TABLE_N_MEAN {
        for &n_copies in &TABLE_COPIES {
            let run = |protocol| -> CliResult<BoundComparison> {
                let config = ExperimentConfig {
                    protocol,
                    theta: ThetaPoint::from_zeta(zeta, n_mean)?,
                    n_copies,
                    trials,
                    seed,
                    weight: WeightMatrix::identity(3)?,
                    clip_nonneg,
                };
                let mse = monte_carlo_mse(&config)?;
                Ok(compare_to_bounds(&mse, &config)?)
            };
            let c = run(ProtocolKind::CollectiveConcentration)?;
            let s = run(ProtocolKind::SeparableHeterodyne)?;
            rows.push(TableRow {
                n_mean,
                n_copies,
                c_r: c.c_r,
                collective_ratio: c.ratio,
                collective_ratio_se: c.ratio_se,
                separable_ratio: s.ratio,
                separable_ratio_se: s.ratio_se,
                separable_limit_ratio: s.asymptotic_ratio,
            });
        }
    }
    let table = RatioTable {
        format_version: FORMAT_VERSION,
        description: "generated collective-vs-separable ratio table: n Tr V / C_R(I3)",
        rows,
        manifest: RunManifest::new(
            seed,
            TableConfig {
                zeta: [zeta.re, zeta.im],
                trials,
                weight: "identity3",
                clip_nonneg,
            },
        ),
    };
    Ok(to_json(&table))
}
