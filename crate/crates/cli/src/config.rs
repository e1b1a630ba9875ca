//! Flat key = value simulation configs, with line-numbered errors.

use std::path::Path;

use mrl_core::distributions::TrueDistribution;
use mrl_core::estimators::Method;
use mrl_core::kernel::Kernel;
use mrl_core::simulation::BandwidthPolicy;

use crate::errors::{CliError, CliResult};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Mode {
    Tables,
    BiasProfile,
    Normality,
}

#[derive(Debug, Clone)]
pub struct SimulationFile {
    pub mode: Mode,
    pub distributions: Vec<TrueDistribution>,
    pub n: usize,
    pub reps: usize,
    pub seed: u64,
    pub estimators: Vec<Method>,
    pub kernel: Kernel,
    pub bandwidth: BandwidthPolicy,
    pub grid_points: usize,
    pub profile_points: usize,
    pub eval_t: Option<f64>,
}

pub fn parse_distribution(s: &str) -> CliResult<TrueDistribution> {
    let s = s.trim().to_ascii_lowercase();
    let bad = |msg: &str| CliError::Data(format!("cannot parse distribution '{s}': {msg}"));
    if s == "absnormal" || s == "abs.normal" {
        return Ok(TrueDistribution::abs_normal());
    }
    let (name, rest) = s
        .split_once('(')
        .ok_or_else(|| bad("expected name(params)"))?;
    let params = rest
        .strip_suffix(')')
        .ok_or_else(|| bad("missing closing parenthesis"))?;
    let numbers: Vec<f64> = params
        .split(',')
        .map(|p| p.trim().parse::<f64>())
        .collect::<Result<_, _>>()
        .map_err(|_| bad("parameters must be numbers"))?;
    let two = |what: &str| -> CliResult<(f64, f64)> {
        if numbers.len() == 2 {
            Ok((numbers[0], numbers[1]))
        } else {
            Err(bad(&format!("{what} takes two parameters")))
        }
    };
    let dist = match name.trim() {
        "uniform" | "u" => {
            let (a, b) = two("uniform")?;
            TrueDistribution::uniform(a, b)
        }
        "beta" => {
            let (a, b) = two("beta")?;
            TrueDistribution::beta(a, b)
        }
        "gamma" => {
            let (k, theta) = two("gamma")?;
            TrueDistribution::gamma(k, theta)
        }
        "weibull" => {
            let (k, lambda) = two("weibull")?;
            TrueDistribution::weibull(k, lambda)
        }
        "exponential" | "exp" => {
            if numbers.len() != 1 {
                return Err(bad("exponential takes one rate parameter"));
            }
            TrueDistribution::exponential(numbers[0])
        }
        other => return Err(bad(&format!("unknown family '{other}'"))),
    };
    dist.map_err(|e| CliError::Data(e.to_string()))
}

pub fn parse_method(s: &str) -> CliResult<Method> {
    match s.trim().to_ascii_lowercase().as_str() {
        "empirical" => Ok(Method::Empirical),
        "naive" => Ok(Method::NaiveKernel),
        "transformed1" | "t1" => Ok(Method::Transformed1),
        "transformed2" | "t2" => Ok(Method::Transformed2),
        other => Err(CliError::Data(format!(
            "unknown estimator '{other}' (expected empirical, naive, transformed1, transformed2)"
        ))),
    }
}

pub fn parse_kernel(s: &str) -> CliResult<Kernel> {
    match s.trim().to_ascii_lowercase().as_str() {
        "epanechnikov" => Ok(Kernel::Epanechnikov),
        "gaussian" => Ok(Kernel::Gaussian),
        other => Err(CliError::Data(format!(
            "unknown kernel '{other}' (expected epanechnikov or gaussian)"
        ))),
    }
}

pub fn parse_bandwidth(s: &str) -> CliResult<BandwidthPolicy> {
    let s = s.trim();
    if s.eq_ignore_ascii_case("cv") {
        return Ok(BandwidthPolicy::Lscv);
    }
    match s.parse::<f64>() {
        Ok(h) if h.is_finite() && h > 0.0 => Ok(BandwidthPolicy::Fixed(h)),
        _ => Err(CliError::Usage(format!(
            "bandwidth must be 'cv' or a positive number, got '{s}'"
        ))),
    }
}

pub fn load_simulation_file(path: &Path) -> CliResult<SimulationFile> {
    let text = std::fs::read_to_string(path).map_err(|e| {
        CliError::Data(format!("cannot read config {}: {e}", path.display()))
    })?;
    parse_simulation_text(&text, &path.display().to_string())
}

pub fn parse_simulation_text(text: &str, origin: &str) -> CliResult<SimulationFile> {
    let mut mode = None;
    let mut distributions = Vec::new();
    let mut n = None;
    let mut reps = None;
    let mut seed: u64 = 1;
    let mut estimators = Vec::new();
    let mut kernel = Kernel::Epanechnikov;
    let mut bandwidth = BandwidthPolicy::Lscv;
    let mut grid_points = 200usize;
    let mut profile_points = 40usize;
    let mut eval_t = None;

    let mut saw_any = false;
    for (line_no, raw) in text.lines().enumerate() {
        let line_no = line_no + 1;
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        saw_any = true;
        let at = |msg: String| CliError::Data(format!("{origin}:{line_no}: {msg}"));
        let (key, value) = line
            .split_once('=')
            .ok_or_else(|| at(format!("expected key = value, got '{line}'")))?;
        let key = key.trim().to_ascii_lowercase();
        let value = value.trim();
        match key.as_str() {
            "mode" => {
                mode = Some(match value.to_ascii_lowercase().as_str() {
                    "tables" => Mode::Tables,
                    "bias_profile" => Mode::BiasProfile,
                    "normality" => Mode::Normality,
                    other => return Err(at(format!("unknown mode '{other}'"))),
                });
            }
            "distribution" | "distributions" => {
                for part in value.split("),") {
                    let part = part.trim();
                    let part = if part.ends_with(')') || !part.contains('(') {
                        part.to_string()
                    } else {
                        format!("{part})")
                    };
                    distributions
                        .push(parse_distribution(&part).map_err(|e| at(e.to_string()))?);
                }
            }
            "n" => {
                n = Some(
                    value
                        .parse::<usize>()
                        .map_err(|_| at(format!("n must be a positive integer, got '{value}'")))?,
                );
            }
            "reps" => {
                reps = Some(value.parse::<usize>().map_err(|_| {
                    at(format!("reps must be a non-negative integer, got '{value}'"))
                })?);
            }
            "seed" => {
                seed = value
                    .parse::<u64>()
                    .map_err(|_| at(format!("seed must be an integer, got '{value}'")))?;
            }
            "estimators" => {
                for part in value.split(',') {
                    estimators.push(parse_method(part).map_err(|e| at(e.to_string()))?);
                }
            }
            "kernel" => {
                kernel = parse_kernel(value).map_err(|e| at(e.to_string()))?;
            }
            "bandwidth" => {
                bandwidth = parse_bandwidth(value).map_err(|e| at(e.to_string()))?;
            }
            "grid_points" => {
                grid_points = value.parse::<usize>().map_err(|_| {
                    at(format!("grid_points must be an integer, got '{value}'"))
                })?;
            }
            "profile_points" => {
                profile_points = value.parse::<usize>().map_err(|_| {
                    at(format!("profile_points must be an integer, got '{value}'"))
                })?;
            }
            "eval_t" => {
                eval_t = Some(value.parse::<f64>().map_err(|_| {
                    at(format!("eval_t must be a number, got '{value}'"))
                })?);
            }
            other => return Err(at(format!("unknown key '{other}'"))),
        }
    }

    if !saw_any {
        return Err(CliError::Data(format!("{origin}: empty config")));
    }
    let mode = mode.ok_or_else(|| CliError::Data(format!("{origin}: missing 'mode'")))?;
    if distributions.is_empty() {
        return Err(CliError::Data(format!(
            "{origin}: missing 'distributions'"
        )));
    }
    let n = n.ok_or_else(|| CliError::Data(format!("{origin}: missing 'n'")))?;
    let reps = reps.ok_or_else(|| CliError::Data(format!("{origin}: missing 'reps'")))?;
    if estimators.is_empty() {
        estimators = vec![
            Method::Empirical,
            Method::NaiveKernel,
            Method::Transformed1,
            Method::Transformed2,
        ];
    }
    Ok(SimulationFile {
        mode,
        distributions,
        n,
        reps,
        seed,
        estimators,
        kernel,
        bandwidth,
        grid_points,
        profile_points,
        eval_t,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_a_full_config() {
        let text = "\
# study
mode = tables
distributions = uniform(0,1), gamma(2,3), absnormal
n = 50
reps = 200
estimators = empirical, transformed2
kernel = epanechnikov
bandwidth = cv
seed = 7
";
        let cfg = parse_simulation_text(text, "test.cfg").unwrap();
        assert_eq!(cfg.mode, Mode::Tables);
        assert_eq!(cfg.distributions.len(), 3);
        assert_eq!(cfg.estimators.len(), 2);
        assert_eq!(cfg.seed, 7);
    }

    #[test]
    fn reports_the_offending_line() {
        let text = "mode = tables\nn = fifty\n";
        let err = parse_simulation_text(text, "bad.cfg").unwrap_err();
        assert!(err.to_string().contains("bad.cfg:2"), "{err}");
    }

    #[test]
    fn empty_config_is_an_error() {
        let err = parse_simulation_text("\n# nothing\n", "empty.cfg").unwrap_err();
        assert!(err.to_string().contains("empty"), "{err}");
    }

    #[test]
    fn distribution_grammar() {
        assert!(parse_distribution("weibull(3,2)").is_ok());
        assert!(parse_distribution("exp(0.5)").is_ok());
        assert!(parse_distribution("absnormal").is_ok());
        assert!(parse_distribution("gamma(2)").is_err());
        assert!(parse_distribution("cauchy(0,1)").is_err());
    }
}
