use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::error::CliError;

#[derive(Debug, Parser)]
#[command(name = "photonic-bell-lab", version, about = "Weak-field homodyne Bell tests: probabilities, LHV models, inequalities")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    #[command(flatten)]
    pub params: Params,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Detection probabilities: Fock-space oracle next to the closed forms.
    Prob { setup: Setup },
    /// Local hidden-variable models.
    Lhv { action: LhvAction },
    /// Bell inequalities.
    Bell { inequality: InequalityArg, mode: Mode },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Setup {
    /// Single photon split between the parties.
    Twc,
    /// Two-mode squeezed vacuum.
    Gpy,
    /// Single photon with two-term truncated oscillators (CH only).
    TwoTerm,
}

impl Setup {
    pub fn name(self) -> &'static str {
        match self {
            Setup::Twc => "twc",
            Setup::Gpy => "gpy",
            Setup::TwoTerm => "two-term",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum LhvAction {
    Verify,
    Sample,
    Threshold,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum InequalityArg {
    Chsh,
    Ch,
    Cglmp,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Mode {
    Eval,
    Optimize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, ValueEnum)]
pub enum Format {
    #[default]
    Json,
    Csv,
}

/// Flags shared by every subcommand. Angles are in radians; oscillator
/// strength is always given as the mean photon number α².
#[derive(Debug, Clone, Default, Args)]
pub struct Params {
    #[arg(long, global = true)]
    pub setup: Option<Setup>,
    #[arg(long, global = true, allow_hyphen_values = true)]
    pub alpha2: Option<f64>,
    #[arg(long, global = true, allow_hyphen_values = true)]
    pub gamma: Option<f64>,
    #[arg(long, global = true, allow_hyphen_values = true)]
    pub transmittivity: Option<f64>,
    /// Alice's oscillator phase.
    #[arg(long, global = true, allow_hyphen_values = true)]
    pub theta1: Option<f64>,
    /// Bob's oscillator phase.
    #[arg(long, global = true, allow_hyphen_values = true)]
    pub theta2: Option<f64>,
    /// Alice's second CHSH setting.
    #[arg(long, global = true, allow_hyphen_values = true)]
    pub theta1p: Option<f64>,
    /// Bob's second CHSH setting.
    #[arg(long, global = true, allow_hyphen_values = true)]
    pub theta2p: Option<f64>,
    /// Phase difference θ1 − θ2 (sets θ1, with θ2 = 0).
    #[arg(long, global = true, allow_hyphen_values = true)]
    pub theta12: Option<f64>,
    /// Angle sum in the convention of the squeezed-vacuum tables.
    #[arg(long, global = true, allow_hyphen_values = true)]
    pub theta_sum: Option<f64>,
    #[arg(long, global = true, allow_hyphen_values = true)]
    pub lambda: Option<f64>,
    #[arg(long, global = true)]
    pub cutoff: Option<u32>,
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    /// Number of Monte Carlo trials.
    #[arg(long, global = true)]
    pub n: Option<u64>,
    /// Output file; standard output when absent.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    pub format: Format,
    /// Record the wall-clock duration in the output.
    #[arg(long, global = true)]
    pub timing: bool,
}

fn invalid(msg: impl Into<String>) -> CliError {
    CliError::Invalid(msg.into())
}

impl Params {
    pub fn require_alpha2(&self) -> Result<f64, CliError> {
        let a2 = self.alpha2.ok_or_else(|| invalid("--alpha2 is required"))?;
        if !a2.is_finite() || a2 <= 0.0 {
            return Err(invalid(format!("--alpha2 must be a finite number > 0, got {a2}")));
        }
        Ok(a2)
    }

    pub fn require_gamma(&self) -> Result<f64, CliError> {
        let g = self.gamma.ok_or_else(|| invalid("--gamma is required"))?;
        if !(0.0..1.0).contains(&g) {
            return Err(invalid(format!("--gamma must lie in [0, 1), got {g}")));
        }
        Ok(g)
    }

    pub fn transmittivity_or(&self, default: f64) -> Result<f64, CliError> {
        let t = self.transmittivity.unwrap_or(default);
        if !(0.0..=1.0).contains(&t) {
            return Err(invalid(format!("--transmittivity must lie in [0, 1], got {t}")));
        }
        Ok(t)
    }

    pub fn setup(&self, allowed: &[Setup]) -> Result<Setup, CliError> {
        let s = self.setup.ok_or_else(|| invalid("--setup is required"))?;
        if !allowed.contains(&s) {
            let names: Vec<_> = allowed.iter().map(|a| a.name()).collect();
            return Err(invalid(format!("--setup {} not supported here (use {})", s.name(), names.join(" or "))));
        }
        Ok(s)
    }

    pub fn cutoff_or(&self, default: u32) -> Result<u32, CliError> {
        let c = self.cutoff.unwrap_or(default);
        if c == 0 || c > 40 {
            return Err(invalid(format!("--cutoff must lie in 1..=40, got {c}")));
        }
        Ok(c)
    }

    fn check_angle(name: &str, v: f64) -> Result<f64, CliError> {
        if v.is_finite() {
            Ok(v)
        } else {
            Err(invalid(format!("--{name} must be finite")))
        }
    }

    /// Oscillator phases `(θ1, θ2)` from `--theta12` or `--theta1/--theta2`.
    pub fn lo_phases(&self) -> Result<(f64, f64), CliError> {
        if self.theta_sum.is_some() {
            return Err(invalid("--theta-sum applies to the squeezed-vacuum setup only"));
        }
        match self.theta12 {
            Some(d) => {
                if self.theta1.is_some() || self.theta2.is_some() {
                    return Err(invalid("give either --theta12 or --theta1/--theta2, not both"));
                }
                Ok((Self::check_angle("theta12", d)?, 0.0))
            }
            None => Ok((
                Self::check_angle("theta1", self.theta1.unwrap_or(0.0))?,
                Self::check_angle("theta2", self.theta2.unwrap_or(0.0))?,
            )),
        }
    }

    /// Table-convention angles `(θ1, θ2)` for the squeezed-vacuum rows, from
    /// `--theta-sum` or from oscillator phases.
    pub fn table_angles(&self) -> Result<(f64, f64), CliError> {
        match self.theta_sum {
            Some(s) => {
                if self.theta1.is_some() || self.theta2.is_some() || self.theta12.is_some() {
                    return Err(invalid("give either --theta-sum or oscillator phases, not both"));
                }
                Ok((Self::check_angle("theta-sum", s)?, 0.0))
            }
            None => {
                let (t1, t2) = self.lo_phases()?;
                Ok(pbl_core::closed_form::gpy_table_angles(t1, t2))
            }
        }
    }
}
