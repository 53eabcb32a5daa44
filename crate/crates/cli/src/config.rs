//! Flags, the JSON config file, and their validated merge.

use std::path::{Path, PathBuf};

use clap::{Args, ValueEnum};
use exciton_sae::sae::{deficiency_data, ExtensionAngle, MatchingMode};
use exciton_sae::specfun::{check_degenerate, DEGENERACY_TOL};
use exciton_sae::PhysicalParams;
use serde::Deserialize;

use crate::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    Paper,
    Rigorous,
}

impl From<Mode> for MatchingMode {
    fn from(m: Mode) -> Self {
        match m {
            Mode::Paper => MatchingMode::Paper,
            Mode::Rigorous => MatchingMode::Rigorous,
        }
    }
}

/// Every setting, as given on the command line or in a config file. The
/// file uses the flag names as keys.
#[derive(Debug, Clone, Default, Args, Deserialize)]
#[serde(rename_all = "kebab-case", deny_unknown_fields)]
pub struct Flags {
    #[arg(long)]
    pub kappa: Option<f64>,
    #[arg(long)]
    pub a: Option<f64>,
    /// Barrier strength A.
    #[arg(long = "A")]
    #[serde(rename = "A")]
    pub big_a: Option<f64>,
    /// Extension angle in radians.
    #[arg(long, allow_hyphen_values = true)]
    pub sigma: Option<f64>,
    /// Use the angle for which the boundary ratio vanishes.
    #[arg(long)]
    #[serde(default)]
    pub sigma_rhs_zero: bool,
    /// Use the angle for which the boundary ratio is infinite.
    #[arg(long)]
    #[serde(default)]
    pub sigma_rhs_inf: bool,
    /// Number of branches, starting from branch 0.
    #[arg(long)]
    pub nmax: Option<usize>,
    #[arg(long)]
    pub tol: Option<f64>,
    /// Rows in fplot and eigenfunction tables.
    #[arg(long)]
    pub samples: Option<usize>,
    #[arg(long)]
    pub alpha_min: Option<f64>,
    #[arg(long)]
    pub alpha_max: Option<f64>,
    #[arg(long)]
    pub emin: Option<f64>,
    #[arg(long)]
    pub emax: Option<f64>,
    #[arg(long)]
    pub epoints: Option<usize>,
    /// Index of the state tabulated by `eigenfunction`, deepest first.
    #[arg(long)]
    pub state: Option<usize>,
    /// Upper end of the `eigenfunction` z grid.
    #[arg(long)]
    pub zmax: Option<f64>,
    #[arg(long, value_enum)]
    pub format: Option<Format>,
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long, value_enum)]
    pub mode: Option<Mode>,
    /// JSON file with any of the settings above; flags take precedence.
    #[arg(long)]
    #[serde(skip)]
    pub config: Option<PathBuf>,
}

impl Flags {
    fn sigma_given(&self) -> bool {
        self.sigma.is_some() || self.sigma_rhs_zero || self.sigma_rhs_inf
    }

    /// `self` over `file`, field by field. The three ways of giving Σ are
    /// one setting: any of them on the command line replaces the file's.
    pub fn over(self, file: Flags) -> Flags {
        let (sigma, zero, inf) = if self.sigma_given() {
            (self.sigma, self.sigma_rhs_zero, self.sigma_rhs_inf)
        } else {
            (file.sigma, file.sigma_rhs_zero, file.sigma_rhs_inf)
        };
        Flags {
            kappa: self.kappa.or(file.kappa),
            a: self.a.or(file.a),
            big_a: self.big_a.or(file.big_a),
            sigma,
            sigma_rhs_zero: zero,
            sigma_rhs_inf: inf,
            nmax: self.nmax.or(file.nmax),
            tol: self.tol.or(file.tol),
            samples: self.samples.or(file.samples),
            alpha_min: self.alpha_min.or(file.alpha_min),
            alpha_max: self.alpha_max.or(file.alpha_max),
            emin: self.emin.or(file.emin),
            emax: self.emax.or(file.emax),
            epoints: self.epoints.or(file.epoints),
            state: self.state.or(file.state),
            zmax: self.zmax.or(file.zmax),
            format: self.format.or(file.format),
            out: self.out.or(file.out),
            mode: self.mode.or(file.mode),
            config: None,
        }
    }
}

pub fn load_file(path: &Path) -> Result<Flags, CliError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::Config(format!("cannot read config {}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| CliError::Config(format!("config {}: {e}", path.display())))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum SigmaChoice {
    Value(f64),
    RhsZero,
    RhsInf,
}

/// Validated settings shared by all subcommands.
#[derive(Debug, Clone)]
pub struct RunConfig {
    pub params: PhysicalParams,
    pub sigma: Option<SigmaChoice>,
    pub n_max: usize,
    pub tol: f64,
    pub samples: usize,
    pub alpha_range: (f64, f64),
    pub energy_grid: (f64, f64, usize),
    pub state: usize,
    pub z_max: f64,
    pub output_format: Format,
    pub output_path: Option<PathBuf>,
    pub mode: MatchingMode,
}

fn bad(msg: impl Into<String>) -> CliError {
    CliError::Config(msg.into())
}

fn require(v: Option<f64>, name: &str) -> Result<f64, CliError> {
    v.ok_or_else(|| bad(format!("--{name} is required")))
}

impl RunConfig {
    pub fn from_flags(f: Flags) -> Result<Self, CliError> {
        let params = PhysicalParams::new(
            require(f.kappa, "kappa")?,
            require(f.a, "a")?,
            require(f.big_a, "A")?,
        )
        .map_err(|e| bad(e.to_string()))?;
        check_degenerate(params.whittaker_index(), DEGENERACY_TOL).map_err(|e| bad(e.to_string()))?;

        let sigma = match (f.sigma, f.sigma_rhs_zero, f.sigma_rhs_inf) {
            (None, false, false) => None,
            (Some(s), false, false) if s.is_finite() => Some(SigmaChoice::Value(s)),
            (Some(s), false, false) => return Err(bad(format!("sigma must be finite, got {s}"))),
            (None, true, false) => Some(SigmaChoice::RhsZero),
            (None, false, true) => Some(SigmaChoice::RhsInf),
            _ => {
                return Err(bad(
                    "give at most one of --sigma, --sigma-rhs-zero, --sigma-rhs-inf",
                ))
            }
        };

        let tol = f.tol.unwrap_or(1e-12);
        if !(tol > 0.0 && tol < 1.0) {
            return Err(bad(format!("tol must lie in (0, 1), got {tol}")));
        }
        let samples = f.samples.unwrap_or(1000);
        if samples < 2 {
            return Err(bad(format!("samples must be at least 2, got {samples}")));
        }
        let alpha_range = (f.alpha_min.unwrap_or(0.01), f.alpha_max.unwrap_or(6.0));
        if !(alpha_range.0 > 0.0 && alpha_range.1 > alpha_range.0 && alpha_range.1.is_finite()) {
            return Err(bad(format!(
                "need 0 < alpha-min < alpha-max, got {} and {}",
                alpha_range.0, alpha_range.1
            )));
        }
        let energy_grid = (
            f.emin.unwrap_or(1e-3),
            f.emax.unwrap_or(1e2),
            f.epoints.unwrap_or(100),
        );
        let (emin, emax, epoints) = energy_grid;
        if !(emin > 0.0 && emax.is_finite() && emax >= emin) || epoints == 0 || (epoints > 1 && emax == emin)
        {
            return Err(bad(format!(
                "need 0 < emin < emax and epoints >= 1, got {emin}, {emax}, {epoints}"
            )));
        }
        let z_max = f.zmax.unwrap_or(20.0);
        if !(z_max > 0.0 && z_max.is_finite()) {
            return Err(bad(format!("zmax must be positive, got {z_max}")));
        }
        Ok(RunConfig {
            params,
            sigma,
            n_max: f.nmax.unwrap_or(5),
            tol,
            samples,
            alpha_range,
            energy_grid,
            state: f.state.unwrap_or(0),
            z_max,
            output_format: f.format.unwrap_or(Format::Csv),
            output_path: f.out,
            mode: f.mode.unwrap_or(Mode::Paper).into(),
        })
    }

    /// The extension angle, resolving the analytic specials for the mode.
    pub fn extension_angle(&self) -> Result<ExtensionAngle, CliError> {
        let choice = self
            .sigma
            .ok_or_else(|| bad("one of --sigma, --sigma-rhs-zero, --sigma-rhs-inf is required"))?;
        let data = || deficiency_data(&self.params, self.mode).map_err(|e| bad(e.to_string()));
        Ok(match choice {
            SigmaChoice::Value(s) => ExtensionAngle::new(s).map_err(|e| bad(e.to_string()))?,
            SigmaChoice::RhsZero => data()?.sigma_rhs_zero(),
            SigmaChoice::RhsInf => data()?.sigma_rhs_infinite(),
        })
    }

    /// Log-spaced energies from `emin` to `emax`.
    pub fn energies(&self) -> Vec<f64> {
        let (lo, hi, n) = self.energy_grid;
        if n == 1 {
            return vec![lo];
        }
        let (l0, l1) = (lo.ln(), hi.ln());
        (0..n)
            .map(|i| match i {
                0 => lo,
                _ if i == n - 1 => hi,
                _ => (l0 + (l1 - l0) * i as f64 / (n - 1) as f64).exp(),
            })
            .collect()
    }
}
