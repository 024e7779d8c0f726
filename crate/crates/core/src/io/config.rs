use serde::{Deserialize, Serialize};

use crate::autodiff::GradientScheme;
use crate::error::{Error, Result};
use crate::optimize::{AdaptOptions, CisPair, Method, MinimizeOptions, PoolKind};
use crate::sim::Branch;

/// Declarative run configuration, read from TOML. Every section is optional.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RunConfig {
    /// Gradient scheme: `qubit`, `exact4`, `real2`, `approx`, optionally
    /// suffixed with `+` or `-`.
    pub scheme: Option<String>,
    pub reference: ReferenceConfig,
    pub ansatz: AnsatzConfig,
    pub optimizer: OptimizerConfig,
    pub pool: PoolConfig,
    pub layout: LayoutConfig,
    pub adapt: AdaptConfig,
    pub excited: ExcitedConfig,
    pub grad: GradConfig,
    pub spectrum: SpectrumConfig,
}

impl RunConfig {
    pub fn parse(text: &str) -> Result<Self> {
        toml::from_str(text).map_err(|e| Error::Config(e.to_string()))
    }

    pub fn load(path: &str) -> Result<Self> {
        Self::parse(&std::fs::read_to_string(path)?)
    }
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ReferenceConfig {
    /// Occupied spin orbitals; defaults to the lowest `n_electrons`.
    pub occupied: Option<Vec<usize>>,
    pub cis: Option<CisPair>,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct AnsatzConfig {
    /// Circuit lines in the circuit file format; when absent the ansatz is
    /// built from `[layout]`.
    pub gates: Option<Vec<String>>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct OptimizerConfig {
    /// `lbfgs` or `gd`.
    pub method: String,
    pub step: f64,
    pub line_search: bool,
    pub memory: usize,
    pub tol: f64,
    pub max_iters: usize,
    /// `zero` or `random` (uniform in `[-init_scale, init_scale]`, seeded).
    pub init: String,
    pub init_scale: f64,
}

impl Default for OptimizerConfig {
    fn default() -> Self {
        Self {
            method: "lbfgs".into(),
            step: 0.1,
            line_search: true,
            memory: 10,
            tol: 1e-6,
            max_iters: 200,
            init: "zero".into(),
            init_scale: 0.1,
        }
    }
}

impl OptimizerConfig {
    pub fn options(&self, scheme: GradientScheme) -> Result<MinimizeOptions> {
        let method = match self.method.as_str() {
            "lbfgs" | "bfgs" | "qn" => Method::Lbfgs {
                memory: self.memory,
            },
            "gd" => Method::GradientDescent {
                step: self.step,
                line_search: self.line_search,
            },
            other => {
                return Err(Error::Config(format!(
                    "unknown optimizer method `{other}` (expected lbfgs or gd)"
                )))
            }
        };
        if !(self.tol > 0.0) {
            return Err(Error::Config("optimizer.tol must be positive".into()));
        }
        Ok(MinimizeOptions {
            method,
            scheme,
            tol: self.tol,
            max_iters: self.max_iters,
        })
    }
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct PoolConfig {
    pub kind: PoolKind,
    /// Spatial orbitals excluded from every pool operator.
    pub freeze: Vec<usize>,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct LayoutConfig {
    /// `A` adaptive point, `D` paired-double block, `S` singles block.
    /// Defaults to `D` for fixed-ansatz runs and `A` for adaptive ones.
    pub pattern: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct AdaptConfig {
    pub screen_tol: f64,
    pub energy_tol: f64,
    pub max_ops: usize,
}

impl Default for AdaptConfig {
    fn default() -> Self {
        let d = AdaptOptions::default();
        Self {
            screen_tol: d.screen_tol,
            energy_tol: d.energy_tol,
            max_ops: d.max_ops,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ExcitedConfig {
    pub states: usize,
    /// `vqe` (fixed ansatz) or `adapt`.
    pub method: String,
    /// One reference per state; missing entries default to the ground
    /// reference for state 0 and a HOMO→LUMO+k−1 singlet for state k.
    pub references: Vec<ReferenceConfig>,
    /// Penalty weights per solved state; missing entries use `−E_i`.
    pub penalties: Vec<f64>,
}

impl Default for ExcitedConfig {
    fn default() -> Self {
        Self {
            states: 2,
            method: "vqe".into(),
            references: Vec::new(),
            penalties: Vec::new(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct GradConfig {
    /// Parameter to scan; may be omitted when the circuit has exactly one.
    pub param: Option<String>,
    pub theta_min: f64,
    pub theta_max: f64,
    pub points: usize,
    /// Scheme columns; defaults to the run's scheme.
    pub schemes: Vec<String>,
    /// Central-difference step of the `fd` column.
    pub fd_step: f64,
}

impl Default for GradConfig {
    fn default() -> Self {
        Self {
            param: None,
            theta_min: 0.0,
            theta_max: std::f64::consts::TAU,
            points: 101,
            schemes: Vec::new(),
            fd_step: crate::autodiff::DEFAULT_FD_STEP,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SpectrumConfig {
    pub k: usize,
    pub electrons: Option<usize>,
    pub singlet: bool,
}

impl Default for SpectrumConfig {
    fn default() -> Self {
        Self {
            k: 4,
            electrons: None,
            singlet: false,
        }
    }
}

/// Parses `exact4`, `real2-`, `approx+`, …; a missing sign uses `alpha`.
pub fn parse_scheme(text: &str, alpha: Branch) -> Result<GradientScheme> {
    let (name, branch) = match text.strip_suffix('+') {
        Some(n) => (n, Branch::Plus),
        None => match text.strip_suffix('-') {
            Some(n) => (n, Branch::Minus),
            None => (text, alpha),
        },
    };
    GradientScheme::parse(name, branch).ok_or_else(|| {
        Error::Config(format!(
            "unknown gradient scheme `{text}` (expected qubit, exact4, real2 or approx)"
        ))
    })
}
