//! `mrl` — survival, cumulative survival, and mean-residual-life curves
//! from CSV data, plus the simulation and theory tooling behind them.

use mrl_cli::{config, errors, io};

use std::path::{Path, PathBuf};
use std::sync::Arc;

use clap::{Args, Parser, Subcommand, ValueEnum};

use mrl_core::asymptotics::{eval_b, theoretical_bias_variance, EstimatorKind};
use mrl_core::bandwidth::select_bandwidth_lscv;
use mrl_core::estimators::{evaluate_curve, CurveEstimate, EstimatorSpec, Method};
use mrl_core::kernel::Kernel;
use mrl_core::simulation::{
    bias_profile, normality_diagnostic, run_mc, BandwidthPolicy, EstimatorTemplate,
    SimulationConfig, SimulationReport,
};
use mrl_core::transform::{
    ExpTransform, IdentityTransform, ProbitTransform, SupportInterval, Transform,
};
use mrl_core::Sample;

use config::{Mode, SimulationFile};
use errors::{CliError, CliResult};

#[derive(Parser)]
#[command(
    name = "mrl",
    version,
    about = "Mean residual life estimation on bounded and half-bounded supports"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Estimate survival / cumulative survival / MRL curves from a CSV column
    Estimate(EstimateArgs),
    /// Run a Monte-Carlo error study described by a config file
    Simulate(SimulateArgs),
    /// Tabulate leading-order bias/variance expressions for a known distribution
    Theory(TheoryArgs),
    /// Select a cross-validated bandwidth for a dataset
    Bandwidth(BandwidthArgs),
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum KernelArg {
    Epanechnikov,
    Gaussian,
}

impl From<KernelArg> for Kernel {
    fn from(k: KernelArg) -> Self {
        match k {
            KernelArg::Epanechnikov => Kernel::Epanechnikov,
            KernelArg::Gaussian => Kernel::Gaussian,
        }
    }
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum TransformArg {
    Log,
    Probit,
    Identity,
}

#[derive(Args)]
struct EstimateArgs {
    /// CSV file with a header row
    #[arg(long)]
    input: PathBuf,
    /// Column to read observations from
    #[arg(long)]
    column: String,
    /// "all" or a comma list of empirical,naive,transformed1,transformed2
    #[arg(long, default_value = "all")]
    estimator: String,
    #[arg(long, value_enum, default_value_t = KernelArg::Epanechnikov)]
    kernel: KernelArg,
    /// Transform for the boundary-corrected estimators; inferred from the
    /// support when omitted
    #[arg(long, value_enum)]
    transform: Option<TransformArg>,
    /// Support endpoints "a,b" (b may be inf); inferred from the data when
    /// omitted
    #[arg(long)]
    support: Option<String>,
    /// "cv" or a positive number
    #[arg(long, default_value = "cv", allow_hyphen_values = true)]
    bandwidth: String,
    #[arg(long)]
    grid_min: Option<f64>,
    #[arg(long)]
    grid_max: Option<f64>,
    #[arg(long, default_value_t = 200)]
    grid_points: usize,
    /// Output path; with several estimators the label lands before the
    /// extension unless --combined is set
    #[arg(long, default_value = "mrl_curves.csv")]
    output: PathBuf,
    /// Write one wide CSV holding every estimator
    #[arg(long)]
    combined: bool,
}

#[derive(Args)]
struct SimulateArgs {
    /// key = value config file
    config: PathBuf,
    /// Report CSV path (defaults to a mode-specific name)
    #[arg(long)]
    output: Option<PathBuf>,
    /// Override the config seed
    #[arg(long)]
    seed: Option<u64>,
}

#[derive(Args)]
struct TheoryArgs {
    /// Distribution, e.g. gamma(2,3) or absnormal
    #[arg(long)]
    dist: String,
    #[arg(long, value_enum)]
    transform: Option<TransformArg>,
    #[arg(long, value_enum, default_value_t = KernelArg::Epanechnikov)]
    kernel: KernelArg,
    #[arg(long, default_value_t = 0.3)]
    h: f64,
    #[arg(long, default_value_t = 100)]
    n: usize,
    /// survival | cum_survival1 | cum_survival2 | mrl1 | mrl2
    #[arg(long, default_value = "mrl2")]
    target: String,
    #[arg(long)]
    grid_min: Option<f64>,
    #[arg(long)]
    grid_max: Option<f64>,
    #[arg(long, default_value_t = 50)]
    grid_points: usize,
    #[arg(long, default_value = "theory.csv")]
    output: PathBuf,
}

#[derive(Args)]
struct BandwidthArgs {
    #[arg(long)]
    input: PathBuf,
    #[arg(long)]
    column: String,
    #[arg(long, value_enum, default_value_t = KernelArg::Epanechnikov)]
    kernel: KernelArg,
    #[arg(long, value_enum)]
    transform: Option<TransformArg>,
    #[arg(long)]
    support: Option<String>,
}

fn main() {
    let cli = Cli::parse();
    if let Err(e) = run(cli) {
        eprintln!("error: {e}");
        std::process::exit(e.code());
    }
}

fn run(cli: Cli) -> CliResult<()> {
    match cli.command {
        Command::Estimate(args) => run_estimate(args),
        Command::Simulate(args) => run_simulate(args),
        Command::Theory(args) => run_theory(args),
        Command::Bandwidth(args) => run_bandwidth(args),
    }
}

fn parse_support_flag(s: &str) -> CliResult<SupportInterval> {
    let parts: Vec<&str> = s.split(',').map(str::trim).collect();
    if parts.len() != 2 {
        return Err(CliError::Usage(format!(
            "--support expects 'a,b', got '{s}'"
        )));
    }
    let parse_end = |p: &str| -> CliResult<f64> {
        match p.to_ascii_lowercase().as_str() {
            "inf" | "+inf" | "infinity" => Ok(f64::INFINITY),
            "-inf" | "-infinity" => Ok(f64::NEG_INFINITY),
            other => other
                .parse::<f64>()
                .map_err(|_| CliError::Usage(format!("bad support endpoint '{p}'"))),
        }
    };
    let lower = parse_end(parts[0])?;
    let upper = parse_end(parts[1])?;
    SupportInterval::new(lower, upper).map_err(|e| CliError::Usage(e.to_string()))
}

/// Support from the flag, from the transform hint, or from the data:
/// values in [0, 1] pair with (0, 1), nonnegative values with (0, ∞).
fn resolve_support(
    support_flag: &Option<String>,
    transform_flag: Option<TransformArg>,
    values: &[f64],
) -> CliResult<SupportInterval> {
    if let Some(s) = support_flag {
        return parse_support_flag(s);
    }
    let min = values.iter().cloned().fold(f64::INFINITY, f64::min);
    let max = values.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    match transform_flag {
        Some(TransformArg::Identity) => Ok(SupportInterval::real_line()),
        Some(TransformArg::Log) => {
            if min >= 0.0 {
                Ok(SupportInterval::half_line(0.0).expect("static"))
            } else {
                Err(CliError::Data(format!(
                    "data minimum {min} is negative; give --support explicitly for the log transform"
                )))
            }
        }
        Some(TransformArg::Probit) => {
            if min >= 0.0 && max <= 1.0 {
                Ok(SupportInterval::bounded(0.0, 1.0).expect("static"))
            } else {
                Err(CliError::Data(
                    "probit needs a bounded support; give --support a,b".into(),
                ))
            }
        }
        None => {
            if min >= 0.0 && max <= 1.0 {
                Ok(SupportInterval::bounded(0.0, 1.0).expect("static"))
            } else if min >= 0.0 {
                Ok(SupportInterval::half_line(0.0).expect("static"))
            } else {
                Err(CliError::Data(format!(
                    "cannot infer a support for data in [{min}, {max}]; give --support (and --transform)"
                )))
            }
        }
    }
}

fn resolve_transform(
    transform_flag: Option<TransformArg>,
    support: SupportInterval,
) -> CliResult<Arc<dyn Transform>> {
    match transform_flag {
        Some(TransformArg::Identity) => Ok(Arc::new(IdentityTransform)),
        Some(TransformArg::Log) => {
            if !support.lower().is_finite() {
                return Err(CliError::Usage(
                    "the log transform needs a finite lower support endpoint".into(),
                ));
            }
            Ok(Arc::new(
                ExpTransform::new(support.lower()).map_err(CliError::from)?,
            ))
        }
        Some(TransformArg::Probit) => {
            if !support.is_bounded() {
                return Err(CliError::Usage(
                    "the probit transform needs a bounded support (--support a,b)".into(),
                ));
            }
            Ok(Arc::new(
                ProbitTransform::new(support.lower(), support.upper()).map_err(CliError::from)?,
            ))
        }
        None => {
            if support.is_bounded() {
                Ok(Arc::new(
                    ProbitTransform::new(support.lower(), support.upper())
                        .map_err(CliError::from)?,
                ))
            } else if support.lower().is_finite() {
                Ok(Arc::new(
                    ExpTransform::new(support.lower()).map_err(CliError::from)?,
                ))
            } else {
                Ok(Arc::new(IdentityTransform))
            }
        }
    }
}

fn parse_estimator_list(s: &str) -> CliResult<Vec<Method>> {
    if s.trim().eq_ignore_ascii_case("all") {
        return Ok(vec![
            Method::Empirical,
            Method::NaiveKernel,
            Method::Transformed1,
            Method::Transformed2,
        ]);
    }
    s.split(',')
        .map(|part| config::parse_method(part).map_err(|e| CliError::Usage(e.to_string())))
        .collect()
}

fn default_grid(
    support: SupportInterval,
    sample: &Sample,
    grid_min: Option<f64>,
    grid_max: Option<f64>,
    points: usize,
) -> CliResult<Vec<f64>> {
    if points < 2 {
        return Err(CliError::Usage("--grid-points must be at least 2".into()));
    }
    let lower = support.lower();
    let upper = support.upper();
    let span_ref = if upper.is_finite() {
        upper - lower
    } else if lower.is_finite() {
        sample.max() - lower
    } else {
        sample.max() - sample.min()
    };
    let lo = grid_min.unwrap_or_else(|| {
        if lower.is_finite() {
            lower + 1e-3 * span_ref
        } else {
            sample.min()
        }
    });
    let hi = grid_max.unwrap_or_else(|| {
        if upper.is_finite() {
            upper - 1e-3 * span_ref
        } else {
            sample.max()
        }
    });
    if !(lo < hi) {
        return Err(CliError::Usage(format!(
            "grid range [{lo}, {hi}] is empty; check --grid-min/--grid-max"
        )));
    }
    if !support.contains(lo) || !support.contains(hi) {
        return Err(CliError::Usage(format!(
            "grid range [{lo}, {hi}] leaves the support {support}"
        )));
    }
    Ok((0..points)
        .map(|k| lo + (hi - lo) * k as f64 / (points - 1) as f64)
        .collect())
}

fn labelled_output_path(base: &Path, label: &str, multiple: bool) -> PathBuf {
    if !multiple {
        return base.to_path_buf();
    }
    let stem = base
        .file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_else(|| "curves".into());
    let ext = base
        .extension()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_else(|| "csv".into());
    base.with_file_name(format!("{stem}_{label}.{ext}"))
}

fn run_estimate(args: EstimateArgs) -> CliResult<()> {
    let (values, dropped) = io::read_csv_column(&args.input, &args.column)?;
    if dropped > 0 {
        eprintln!(
            "warning: dropped {dropped} row(s) with missing or non-numeric '{}' values",
            args.column
        );
    }
    let methods = parse_estimator_list(&args.estimator)?;
    let support = resolve_support(&args.support, args.transform, &values)?;
    let transform = resolve_transform(args.transform, support)?;
    let kernel: Kernel = args.kernel.into();
    let bandwidth = config::parse_bandwidth(&args.bandwidth)?;
    let sample = Sample::new(values, support).map_err(CliError::from)?;
    let grid = default_grid(
        support,
        &sample,
        args.grid_min,
        args.grid_max,
        args.grid_points,
    )?;

    let identity: Arc<dyn Transform> = Arc::new(IdentityTransform);
    let mut curves: Vec<(String, f64, CurveEstimate)> = Vec::new();
    for method in &methods {
        let tr = match method {
            Method::Transformed1 | Method::Transformed2 => transform.clone(),
            _ => identity.clone(),
        };
        let h = match (*method, bandwidth) {
            (Method::Empirical, _) => 1.0,
            (_, BandwidthPolicy::Fixed(h)) => h,
            (_, BandwidthPolicy::Lscv) => {
                select_bandwidth_lscv(&sample, tr.as_ref(), kernel).map_err(CliError::from)?
            }
        };
        let spec = EstimatorSpec::new(*method, kernel, tr, h).map_err(CliError::from)?;
        let curve = evaluate_curve(&spec, &sample, &grid).map_err(CliError::from)?;
        curves.push((method.label().to_string(), h, curve));
    }

    if args.combined {
        let labelled: Vec<(String, &CurveEstimate)> = curves
            .iter()
            .map(|(label, _, curve)| (label.clone(), curve))
            .collect();
        io::write_combined_csv(&args.output, &grid, &labelled)?;
        println!("wrote {}", args.output.display());
    } else {
        let multiple = curves.len() > 1;
        for (label, _, curve) in &curves {
            let path = labelled_output_path(&args.output, label, multiple);
            io::write_curve_csv(&path, curve)?;
            println!("wrote {}", path.display());
        }
    }
    for (label, h, _) in &curves {
        if label != "empirical" {
            println!("{label}: bandwidth {h}");
        }
    }
    Ok(())
}

fn templates_from(file: &SimulationFile) -> Vec<EstimatorTemplate> {
    file.estimators
        .iter()
        .map(|&method| EstimatorTemplate {
            method,
            kernel: file.kernel,
            bandwidth: file.bandwidth,
        })
        .collect()
}

fn report_header(report: &SimulationReport) -> String {
    format!(
        "# distribution={} n={} reps={} seed={} grid_points={}\n# ise_range=[{}, {}] ase_points=[{}, {}, {}] ase_in_support=[{}, {}, {}]\n",
        report.distribution,
        report.n,
        report.reps,
        report.seed,
        report.grid_points,
        report.ise_range.0,
        report.ise_range.1,
        report.ase_points[0],
        report.ase_points[1],
        report.ase_points[2],
        report.ase_in_support[0],
        report.ase_in_support[1],
        report.ase_in_support[2],
    )
}

fn run_simulate(args: SimulateArgs) -> CliResult<()> {
    let mut file = config::load_simulation_file(&args.config)?;
    if let Some(seed) = args.seed {
        file.seed = seed;
    }
    let templates = templates_from(&file);

    match file.mode {
        Mode::Tables => {
            let output = args
                .output
                .unwrap_or_else(|| PathBuf::from("simulation_report.csv"));
            let mut csv_text = String::new();
            csv_text.push_str("distribution,estimator,metric,value,mc_se,reps_used,failures\n");
            for dist in &file.distributions {
                let mut cfg =
                    SimulationConfig::new(*dist, file.n, file.reps, templates.clone(), file.seed);
                cfg.grid_points = file.grid_points;
                let report = run_mc(&cfg).map_err(CliError::from)?;
                csv_text.push_str(&report_header(&report));
                print_report_table(&report);
                let metrics = ["aise", "ase_boundary", "ase_mean", "ase_tail"];
                for est in &report.estimators {
                    let values = [
                        (est.aise.mean, est.aise.mc_se, est.aise.reps_used),
                        (est.ase[0].mean, est.ase[0].mc_se, est.ase[0].reps_used),
                        (est.ase[1].mean, est.ase[1].mc_se, est.ase[1].reps_used),
                        (est.ase[2].mean, est.ase[2].mc_se, est.ase[2].reps_used),
                    ];
                    for (metric, (value, se, reps_used)) in metrics.iter().zip(values) {
                        csv_text.push_str(&format!(
                            "{},{},{},{},{},{},{}\n",
                            report.distribution, est.label, metric, value, se, reps_used,
                            est.failures
                        ));
                    }
                }
            }
            std::fs::write(&output, csv_text)?;
            println!("wrote {}", output.display());
        }
        Mode::BiasProfile => {
            let output = args
                .output
                .unwrap_or_else(|| PathBuf::from("bias_profile.csv"));
            let mut csv_text = String::new();
            csv_text.push_str("distribution,estimator,t,mean_error,mc_se\n");
            for dist in &file.distributions {
                let mut cfg =
                    SimulationConfig::new(*dist, file.n, file.reps, templates.clone(), file.seed);
                cfg.grid_points = file.grid_points;
                let (lo, hi) = cfg.ise_range();
                let m = file.profile_points.max(2);
                let t_grid: Vec<f64> = (0..m)
                    .map(|k| lo + (hi - lo) * k as f64 / (m - 1) as f64)
                    .collect();
                let profiles = bias_profile(&cfg, &t_grid).map_err(CliError::from)?;
                println!(
                    "{}: bias profile over [{lo:.4}, {hi:.4}] with {} points, {} reps",
                    dist.label(),
                    m,
                    file.reps
                );
                for profile in &profiles {
                    for p in &profile.points {
                        csv_text.push_str(&format!(
                            "{},{},{},{},{}\n",
                            dist.label(),
                            profile.label,
                            p.t,
                            p.mean_error,
                            p.mc_se
                        ));
                    }
                }
            }
            std::fs::write(&output, csv_text)?;
            println!("wrote {}", output.display());
        }
        Mode::Normality => {
            let output = args
                .output
                .unwrap_or_else(|| PathBuf::from("normality.csv"));
            let mut csv_text = String::new();
            csv_text
                .push_str("distribution,estimator,t,skewness,excess_kurtosis,standardized_mean,reps_used\n");
            for dist in &file.distributions {
                let cfg =
                    SimulationConfig::new(*dist, file.n, file.reps, templates.clone(), file.seed);
                let t = file.eval_t.unwrap_or_else(|| dist.mean());
                let diags = normality_diagnostic(&cfg, t).map_err(CliError::from)?;
                for d in &diags {
                    println!(
                        "{} {}: skewness {:+.4}, excess kurtosis {:+.4}, standardized mean {:+.3}",
                        dist.label(),
                        d.label,
                        d.skewness,
                        d.excess_kurtosis,
                        d.standardized_mean
                    );
                    csv_text.push_str(&format!(
                        "{},{},{},{},{},{},{}\n",
                        dist.label(),
                        d.label,
                        t,
                        d.skewness,
                        d.excess_kurtosis,
                        d.standardized_mean,
                        d.reps_used
                    ));
                }
            }
            std::fs::write(&output, csv_text)?;
            println!("wrote {}", output.display());
        }
    }
    Ok(())
}

fn print_report_table(report: &SimulationReport) {
    println!(
        "{} (n={}, reps={}, ise range [{:.4}, {:.4}])",
        report.distribution, report.n, report.reps, report.ise_range.0, report.ise_range.1
    );
    println!(
        "  {:<13} {:>12} {:>10} {:>12} {:>12} {:>12} {:>5}",
        "estimator", "AISE", "±se", "ASE@bnd", "ASE@mean", "ASE@tail", "fail"
    );
    for est in &report.estimators {
        println!(
            "  {:<13} {:>12.5} {:>10.5} {:>12.6} {:>12.6} {:>12.6} {:>5}",
            est.label,
            est.aise.mean,
            est.aise.mc_se,
            est.ase[0].mean,
            est.ase[1].mean,
            est.ase[2].mean,
            est.failures
        );
    }
}

fn run_theory(args: TheoryArgs) -> CliResult<()> {
    let dist = config::parse_distribution(&args.dist)?;
    let support = dist.support();
    let transform: Arc<dyn Transform> = match args.transform {
        None => dist.default_transform(),
        Some(TransformArg::Identity) => Arc::new(IdentityTransform),
        Some(TransformArg::Log) => Arc::new(
            ExpTransform::new(support.lower()).map_err(CliError::from)?,
        ),
        Some(TransformArg::Probit) => {
            if !support.is_bounded() {
                return Err(CliError::Usage(format!(
                    "probit transform needs a bounded support, but {} lives on {}",
                    dist.label(),
                    support
                )));
            }
            Arc::new(
                ProbitTransform::new(support.lower(), support.upper())
                    .map_err(CliError::from)?,
            )
        }
    };
    let kind = EstimatorKind::parse(&args.target).ok_or_else(|| {
        CliError::Usage(format!(
            "unknown --target '{}'; expected survival, cum_survival1, cum_survival2, mrl1, mrl2",
            args.target
        ))
    })?;
    if !(args.h.is_finite() && args.h > 0.0) {
        return Err(CliError::Usage(format!(
            "--h must be positive, got {}",
            args.h
        )));
    }

    let anchor = dist.mean() + 3.0 * dist.std_dev();
    let span = (support.upper() - support.lower()).min(anchor - support.lower());
    let lo = args.grid_min.unwrap_or(support.lower() + 1e-3 * span);
    let hi = args.grid_max.unwrap_or_else(|| {
        if support.upper().is_finite() {
            anchor.min(support.upper() - 1e-3 * span)
        } else {
            anchor
        }
    });
    if !(lo < hi) || !support.contains(lo) || !support.contains(hi) {
        return Err(CliError::Usage(format!(
            "theory grid [{lo}, {hi}] must sit strictly inside {support}"
        )));
    }
    let points = args.grid_points.max(2);

    let mut text = String::from("t,b1,b2,b3,b4,b5,bias,var\n");
    for k in 0..points {
        let t = lo + (hi - lo) * k as f64 / (points - 1) as f64;
        let b = eval_b(&dist, transform.as_ref(), t).map_err(CliError::from)?;
        let moments =
            theoretical_bias_variance(&dist, transform.as_ref(), args.kernel.into(), args.h, args.n, t, kind)
                .map_err(CliError::from)?;
        text.push_str(&format!(
            "{},{},{},{},{},{},{},{}\n",
            t, b.b1, b.b2, b.b3, b.b4, b.b5, moments.bias, moments.variance
        ));
    }
    std::fs::write(&args.output, text)?;
    println!(
        "wrote {} ({} rows, target {}, h={}, n={})",
        args.output.display(),
        points,
        kind.label(),
        args.h,
        args.n
    );
    Ok(())
}

fn run_bandwidth(args: BandwidthArgs) -> CliResult<()> {
    let (values, dropped) = io::read_csv_column(&args.input, &args.column)?;
    if dropped > 0 {
        eprintln!("warning: dropped {dropped} row(s)");
    }
    let support = resolve_support(&args.support, args.transform, &values)?;
    let transform = resolve_transform(args.transform, support)?;
    let sample = Sample::new(values, support).map_err(CliError::from)?;
    let h = select_bandwidth_lscv(&sample, transform.as_ref(), args.kernel.into())
        .map_err(CliError::from)?;
    println!("{h}");
    Ok(())
}
