//! Experiment configuration: a TOML file with nested sections for the grid,
//! solver, smoothing-operator parameters, initial data, bookkeeping inputs,
//! and convergence-study levels. Validation collects every violated
//! constraint instead of stopping at the first.

use std::str::FromStr;
use std::sync::Arc;

use num_rational::Rational64;
use serde::{Deserialize, Serialize};

use fnls_core::dynamics::SolverConfig;
use fnls_core::grid::{is_dyadic, Grid};

use crate::error::HarnessError;
use crate::experiments::ExperimentKind;

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GridSection {
    pub dimension: usize,
    pub points_per_axis: usize,
    /// Defaults to 2π.
    pub box_length: Option<f64>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SolverSection {
    pub dt: f64,
    pub steps: usize,
    pub sample_stride: usize,
    pub nonlinearity: Option<bool>,
    pub spectral_filter: Option<bool>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct IMethodSection {
    pub gamma: f64,
    pub delta: f64,
    pub n_values: Vec<f64>,
    /// Smallness constant the space-time norm is compared against.
    pub mu: Option<f64>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PlaneWave {
    /// Integer wavevector, one entry per axis.
    pub k: Vec<i64>,
    pub re: f64,
    pub im: f64,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DataSection {
    /// `band_limited_random` | `gaussian_bump` | `plane_wave_sum`
    pub family: String,
    pub seed: Option<u64>,
    pub band: Option<f64>,
    /// Target `‖u₀‖_{H²}` for the random family, plain amplitude otherwise.
    pub amplitude: Option<f64>,
    pub width: Option<f64>,
    pub waves: Option<Vec<PlaneWave>>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BudgetSection {
    pub dimension: usize,
    /// Decimal or `p/q` string, parsed exactly.
    pub gamma: String,
    pub delta: String,
    pub t_horizon: f64,
    pub k_const: Option<f64>,
    pub mu: Option<f64>,
    pub smallness: Option<f64>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConvergenceSection {
    /// At least three levels, each half the previous.
    pub dt_levels: Vec<f64>,
    pub horizon: f64,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    /// Optional echo of the experiment kind; must match the subcommand.
    pub kind: Option<String>,
    pub grid: Option<GridSection>,
    pub solver: Option<SolverSection>,
    pub imethod: Option<IMethodSection>,
    pub data: Option<DataSection>,
    pub budget: Option<BudgetSection>,
    pub convergence: Option<ConvergenceSection>,
}

/// Parse a decimal or `p/q` string into an exact rational.
pub fn parse_rational(text: &str) -> Result<Rational64, String> {
    let t = text.trim();
    if let Some((num, den)) = t.split_once('/') {
        let n = i64::from_str(num.trim()).map_err(|e| format!("bad numerator {num:?}: {e}"))?;
        let d = i64::from_str(den.trim()).map_err(|e| format!("bad denominator {den:?}: {e}"))?;
        if d == 0 {
            return Err(format!("zero denominator in {t:?}"));
        }
        return Ok(Rational64::new(n, d));
    }
    let (mantissa, scale) = match t.split_once('.') {
        None => (t.to_string(), 0u32),
        Some((int, frac)) => (format!("{int}{frac}"), frac.len() as u32),
    };
    let n = i64::from_str(&mantissa).map_err(|e| format!("bad decimal {t:?}: {e}"))?;
    let d = 10i64
        .checked_pow(scale)
        .ok_or_else(|| format!("too many decimals in {t:?}"))?;
    Ok(Rational64::new(n, d))
}

impl ExperimentConfig {
    pub fn from_toml(text: &str) -> Result<ExperimentConfig, HarnessError> {
        toml::from_str(text).map_err(|e| HarnessError::Validation(vec![e.to_string()]))
    }

    /// Validate against the experiment kind; collects every violation.
    pub fn validate(&self, kind: ExperimentKind) -> Result<(), HarnessError> {
        let mut errors = Vec::new();

        if let Some(k) = &self.kind {
            match ExperimentKind::from_str(k) {
                Ok(parsed) if parsed == kind => {}
                Ok(parsed) => errors.push(format!(
                    "config kind {parsed} does not match requested {kind}"
                )),
                Err(e) => errors.push(e),
            }
        }

        let needs_run = matches!(
            kind,
            ExperimentKind::Run
                | ExperimentKind::Almost
                | ExperimentKind::Morawetz
                | ExperimentKind::Convergence
        );

        let grid = if needs_run {
            match &self.grid {
                None => {
                    errors.push("missing [grid] section".into());
                    None
                }
                Some(g) => match Grid::new(
                    g.dimension,
                    g.points_per_axis,
                    g.box_length.unwrap_or(fnls_core::TAU),
                ) {
                    Ok(grid) => Some(grid),
                    Err(e) => {
                        errors.push(format!("grid: {e}"));
                        None
                    }
                },
            }
        } else {
            None
        };

        if needs_run {
            match &self.solver {
                None => errors.push("missing [solver] section".into()),
                Some(s) => {
                    if let Err(e) = s.to_core() {
                        errors.push(format!("solver: {e}"));
                    }
                }
            }
            match &self.data {
                None => errors.push("missing [data] section".into()),
                Some(d) => d.collect_errors(grid.as_deref(), &mut errors),
            }
        }

        if kind == ExperimentKind::Almost {
            match &self.imethod {
                None => errors.push("missing [imethod] section".into()),
                Some(im) => im.collect_errors(grid.as_deref(), &mut errors),
            }
        } else if let (Some(im), Some(_)) = (&self.imethod, &grid) {
            // optional elsewhere, but if present it must still be coherent
            im.collect_errors(grid.as_deref(), &mut errors);
        }

        if kind == ExperimentKind::Budget {
            match &self.budget {
                None => errors.push("missing [budget] section".into()),
                Some(b) => b.collect_errors(&mut errors),
            }
        }

        if kind == ExperimentKind::Convergence {
            match &self.convergence {
                None => errors.push("missing [convergence] section".into()),
                Some(c) => c.collect_errors(self.solver.as_ref(), &mut errors),
            }
        }

        if errors.is_empty() {
            Ok(())
        } else {
            Err(HarnessError::Validation(errors))
        }
    }

    pub fn build_grid(&self) -> Result<Arc<Grid>, HarnessError> {
        let g = self
            .grid
            .as_ref()
            .ok_or_else(|| HarnessError::one("missing [grid] section"))?;
        Ok(Grid::new(
            g.dimension,
            g.points_per_axis,
            g.box_length.unwrap_or(fnls_core::TAU),
        )?)
    }
}

impl SolverSection {
    pub fn to_core(&self) -> Result<SolverConfig, fnls_core::Error> {
        Ok(SolverConfig::new(self.dt, self.steps, self.sample_stride)?
            .with_nonlinearity(self.nonlinearity.unwrap_or(true))
            .with_spectral_filter(self.spectral_filter.unwrap_or(false)))
    }
}

impl IMethodSection {
    fn collect_errors(&self, grid: Option<&Grid>, errors: &mut Vec<String>) {
        if !(self.gamma > 1.0 && self.gamma < 2.0) {
            errors.push(format!("imethod: gamma = {} outside (1, 2)", self.gamma));
        }
        if !(self.delta > 0.0) {
            errors.push(format!("imethod: delta = {} must be positive", self.delta));
        }
        if self.n_values.is_empty() {
            errors.push("imethod: n_values must be non-empty".into());
        }
        for &n in &self.n_values {
            if !(n >= 1.0) || !is_dyadic(n) {
                errors.push(format!("imethod: N = {n} is not a dyadic value >= 1"));
            } else if let Some(g) = grid {
                if 2.0 * n > g.nyquist_per_axis() {
                    errors.push(format!(
                        "imethod: N = {n} unresolved (2N = {} beyond per-axis Nyquist {})",
                        2.0 * n,
                        g.nyquist_per_axis()
                    ));
                }
            }
        }
        if let Some(mu) = self.mu {
            if !(mu > 0.0) {
                errors.push(format!("imethod: mu = {mu} must be positive"));
            }
        }
    }
}

impl DataSection {
    fn collect_errors(&self, grid: Option<&Grid>, errors: &mut Vec<String>) {
        match self.family.as_str() {
            "band_limited_random" => {
                if self.seed.is_none() {
                    errors.push("data: random family requires a seed".into());
                }
                match self.band {
                    None => errors.push("data: band_limited_random requires band".into()),
                    Some(b) if !(b > 0.0) => {
                        errors.push(format!("data: band = {b} must be positive"))
                    }
                    Some(b) => {
                        if let Some(g) = grid {
                            if b > g.nyquist_per_axis() {
                                errors.push(format!(
                                    "data: band = {b} beyond per-axis Nyquist {}",
                                    g.nyquist_per_axis()
                                ));
                            }
                        }
                    }
                }
                if self.amplitude.is_none() {
                    errors.push("data: band_limited_random requires amplitude".into());
                }
            }
            "gaussian_bump" => {
                match self.width {
                    None => errors.push("data: gaussian_bump requires width".into()),
                    Some(w) if !(w > 0.0) => {
                        errors.push(format!("data: width = {w} must be positive"))
                    }
                    _ => {}
                }
                if self.amplitude.is_none() {
                    errors.push("data: gaussian_bump requires amplitude".into());
                }
            }
            "plane_wave_sum" => match &self.waves {
                None => errors.push("data: plane_wave_sum requires waves".into()),
                Some(waves) if waves.is_empty() => {
                    errors.push("data: waves must be non-empty".into())
                }
                Some(waves) => {
                    if let Some(g) = grid {
                        for (i, w) in waves.iter().enumerate() {
                            if g.index_of_wavevector(&w.k).is_none() {
                                errors.push(format!(
                                    "data: waves[{i}].k = {:?} outside the lattice",
                                    w.k
                                ));
                            }
                        }
                    }
                }
            },
            other => errors.push(format!("data: unknown family {other:?}")),
        }
    }
}

impl BudgetSection {
    fn collect_errors(&self, errors: &mut Vec<String>) {
        if !(5..=7).contains(&self.dimension) {
            errors.push(format!(
                "budget: dimension = {} outside 5..=7",
                self.dimension
            ));
        }
        if let Err(e) = parse_rational(&self.gamma) {
            errors.push(format!("budget: gamma: {e}"));
        }
        if let Err(e) = parse_rational(&self.delta) {
            errors.push(format!("budget: delta: {e}"));
        }
        if !(self.t_horizon > 0.0) {
            errors.push(format!(
                "budget: t_horizon = {} must be positive",
                self.t_horizon
            ));
        }
        for (name, v) in [
            ("k_const", self.k_const),
            ("mu", self.mu),
            ("smallness", self.smallness),
        ] {
            if let Some(x) = v {
                if !(x > 0.0) {
                    errors.push(format!("budget: {name} = {x} must be positive"));
                }
            }
        }
    }
}

impl ConvergenceSection {
    fn collect_errors(&self, solver: Option<&SolverSection>, errors: &mut Vec<String>) {
        if self.dt_levels.len() < 3 {
            errors.push(format!(
                "convergence: need at least 3 dt levels, got {}",
                self.dt_levels.len()
            ));
        }
        for w in self.dt_levels.windows(2) {
            if (w[0] / w[1] - 2.0).abs() > 1e-12 {
                errors.push(format!(
                    "convergence: levels {} and {} are not a dyadic halving",
                    w[0], w[1]
                ));
            }
        }
        if !(self.horizon > 0.0) {
            errors.push(format!(
                "convergence: horizon = {} must be positive",
                self.horizon
            ));
        }
        for &dt in &self.dt_levels {
            if !(dt > 0.0) {
                errors.push(format!("convergence: dt level {dt} must be positive"));
                continue;
            }
            let steps = self.horizon / dt;
            if (steps - steps.round()).abs() > 1e-9 * steps.max(1.0) {
                errors.push(format!(
                    "convergence: horizon {} is not an integer number of steps at dt = {dt}",
                    self.horizon
                ));
            }
        }
        let _ = solver;
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const MINIMAL_ALMOST: &str = r#"
kind = "almost"
[grid]
dimension = 5
points_per_axis = 16
[solver]
dt = 1e-3
steps = 100
sample_stride = 10
[imethod]
gamma = 1.8
delta = 0.1
n_values = [2.0, 4.0]
[data]
family = "band_limited_random"
seed = 1
band = 2.0
amplitude = 1.0
"#;

    #[test]
    fn minimal_almost_config_parses() {
        let cfg = ExperimentConfig::from_toml(MINIMAL_ALMOST).unwrap();
        cfg.validate(ExperimentKind::Almost).unwrap();
    }

    #[test]
    fn unresolved_cutoff_is_named() {
        let text = MINIMAL_ALMOST.replace("n_values = [2.0, 4.0]", "n_values = [32.0]");
        let cfg = ExperimentConfig::from_toml(&text).unwrap();
        let err = cfg.validate(ExperimentKind::Almost).unwrap_err();
        assert!(err.to_string().contains("unresolved"), "{err}");
    }

    #[test]
    fn missing_seed_is_reported() {
        let text = MINIMAL_ALMOST.replace("seed = 1\n", "");
        let cfg = ExperimentConfig::from_toml(&text).unwrap();
        let err = cfg.validate(ExperimentKind::Almost).unwrap_err();
        assert!(err.to_string().contains("seed"), "{err}");
    }

    #[test]
    fn violations_are_collected_together() {
        let text = MINIMAL_ALMOST
            .replace("seed = 1\n", "")
            .replace("gamma = 1.8", "gamma = 2.5")
            .replace("n_values = [2.0, 4.0]", "n_values = [32.0]");
        let cfg = ExperimentConfig::from_toml(&text).unwrap();
        match cfg.validate(ExperimentKind::Almost).unwrap_err() {
            HarnessError::Validation(list) => assert!(list.len() >= 3, "{list:?}"),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn unknown_keys_are_rejected() {
        let text = format!("{MINIMAL_ALMOST}\nunknown_key = 3\n");
        assert!(ExperimentConfig::from_toml(&text).is_err());
    }

    #[test]
    fn kind_mismatch_is_rejected() {
        let cfg = ExperimentConfig::from_toml(MINIMAL_ALMOST).unwrap();
        assert!(cfg.validate(ExperimentKind::Run).is_err());
    }

    #[test]
    fn rational_parsing_is_exact() {
        assert_eq!(parse_rational("1.8").unwrap(), Rational64::new(9, 5));
        assert_eq!(parse_rational("9/5").unwrap(), Rational64::new(9, 5));
        assert_eq!(parse_rational("0.1").unwrap(), Rational64::new(1, 10));
        assert_eq!(parse_rational("2").unwrap(), Rational64::new(2, 1));
        assert!(parse_rational("1/0").is_err());
        assert!(parse_rational("abc").is_err());
    }

    #[test]
    fn budget_config_validates() {
        let text = r#"
kind = "budget"
[budget]
dimension = 5
gamma = "1.8"
delta = "0.1"
t_horizon = 1.0
"#;
        let cfg = ExperimentConfig::from_toml(text).unwrap();
        cfg.validate(ExperimentKind::Budget).unwrap();
    }

    #[test]
    fn convergence_levels_must_halve() {
        let text = r#"
[grid]
dimension = 1
points_per_axis = 16
[solver]
dt = 4e-4
steps = 100
sample_stride = 100
[data]
family = "gaussian_bump"
width = 0.5
amplitude = 0.3
[convergence]
dt_levels = [4e-4, 3e-4, 1e-4]
horizon = 0.04
"#;
        let cfg = ExperimentConfig::from_toml(text).unwrap();
        let err = cfg.validate(ExperimentKind::Convergence).unwrap_err();
        assert!(err.to_string().contains("halving"));
    }
}
