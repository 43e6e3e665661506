//! Experiment configuration: a single JSON document with fail-fast parsing.
//! Every section has defaults, so `{}` is a complete config; unknown keys are
//! rejected to keep experiment records auditable.

use curl_homog_core::coeff::{make_family, CoefficientField};
use curl_homog_core::grid::StaggeredGrid;
use serde::Deserialize;
use std::fmt;
use std::str::FromStr;

use crate::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    Cell,
    Solve,
    Sweep,
    Converge,
    Reduce,
    Verify,
}

impl FromStr for Mode {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "cell" => Ok(Mode::Cell),
            "solve" => Ok(Mode::Solve),
            "sweep" => Ok(Mode::Sweep),
            "converge" => Ok(Mode::Converge),
            "reduce" => Ok(Mode::Reduce),
            "verify" => Ok(Mode::Verify),
            other => Err(format!(
                "unknown mode '{other}' (expected cell|solve|sweep|converge|reduce|verify)"
            )),
        }
    }
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Mode::Cell => "cell",
            Mode::Solve => "solve",
            Mode::Sweep => "sweep",
            Mode::Converge => "converge",
            Mode::Reduce => "reduce",
            Mode::Verify => "verify",
        };
        f.write_str(s)
    }
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Domain {
    #[serde(default = "zero3")]
    pub origin: [f64; 3],
    #[serde(default = "one3")]
    pub extent: [f64; 3],
}

fn zero3() -> [f64; 3] {
    [0.0; 3]
}
fn one3() -> [f64; 3] {
    [1.0; 3]
}

impl Default for Domain {
    fn default() -> Self {
        Domain {
            origin: zero3(),
            extent: one3(),
        }
    }
}

/// How the mesh resolution is chosen for each ε of a sweep.
#[derive(Debug, Clone, Deserialize)]
#[serde(tag = "policy", rename_all = "snake_case", deny_unknown_fields)]
pub enum GridPolicy {
    /// The same cell counts for every ε.
    Fixed { cells: [usize; 3] },
    /// `cells = min(round(factor/ε), max_cells)` per axis, so each period of
    /// the coefficient receives `factor` cells until the cap bites.
    EpsCoupled {
        #[serde(default = "default_factor")]
        factor: usize,
        #[serde(default = "default_max_cells")]
        max_cells: usize,
    },
}

fn default_factor() -> usize {
    8
}
fn default_max_cells() -> usize {
    64
}

impl Default for GridPolicy {
    fn default() -> Self {
        GridPolicy::EpsCoupled {
            factor: default_factor(),
            max_cells: default_max_cells(),
        }
    }
}

impl GridPolicy {
    pub fn cells_for(&self, eps: f64) -> [usize; 3] {
        match *self {
            GridPolicy::Fixed { cells } => cells,
            GridPolicy::EpsCoupled { factor, max_cells } => {
                let n = ((factor as f64 / eps).round() as usize)
                    .clamp(4, max_cells.max(4));
                [n, n, n]
            }
        }
    }

    pub fn describe(&self) -> String {
        match *self {
            GridPolicy::Fixed { cells } => {
                format!("fixed {}x{}x{}", cells[0], cells[1], cells[2])
            }
            GridPolicy::EpsCoupled { factor, max_cells } => {
                format!("eps-coupled factor {factor} capped at {max_cells}")
            }
        }
    }
}

/// Named coefficient family plus its parameters.
#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FamilySpec {
    pub name: String,
    #[serde(default)]
    pub params: Vec<f64>,
}

impl FamilySpec {
    pub fn new(name: &str, params: &[f64]) -> Self {
        FamilySpec {
            name: name.to_string(),
            params: params.to_vec(),
        }
    }

    pub fn build(&self) -> Result<CoefficientField, CliError> {
        Ok(make_family(&self.name, &self.params)?)
    }

    /// Compact comma-free label for CSV cells and file names.
    pub fn label(&self) -> String {
        if self.params.is_empty() {
            self.name.clone()
        } else {
            let ps: Vec<String> = self.params.iter().map(|v| format!("{v}")).collect();
            format!("{}[{}]", self.name, ps.join(";"))
        }
    }
}

/// Exponent entry: a finite number or the string "inf".
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PValue(pub f64);

impl<'de> Deserialize<'de> for PValue {
    fn deserialize<D>(deserializer: D) -> Result<Self, D::Error>
    where
        D: serde::Deserializer<'de>,
    {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Raw {
            Num(f64),
            Text(String),
        }
        match Raw::deserialize(deserializer)? {
            Raw::Num(v) => Ok(PValue(v)),
            Raw::Text(s) if s == "inf" => Ok(PValue(f64::INFINITY)),
            Raw::Text(s) => Err(serde::de::Error::custom(format!(
                "exponent must be a number or \"inf\", got \"{s}\""
            ))),
        }
    }
}

/// Named data generator selection for (F, G, f).
#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DataSpec {
    pub name: String,
    #[serde(default)]
    pub seed: u64,
    #[serde(default = "one")]
    pub amplitude: f64,
}

fn one() -> f64 {
    1.0
}

impl Default for DataSpec {
    fn default() -> Self {
        DataSpec {
            name: "trig_smooth".to_string(),
            seed: 0,
            amplitude: 1.0,
        }
    }
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Config {
    /// Default mode when the command line omits the positional mode.
    #[serde(default)]
    pub mode: Option<Mode>,
    #[serde(default)]
    pub domain: Domain,
    #[serde(default)]
    pub grid: GridPolicy,
    #[serde(default = "default_family_a")]
    pub family_a: FamilySpec,
    #[serde(default = "default_family_b")]
    pub family_b: FamilySpec,
    #[serde(default = "default_eps")]
    pub eps: Vec<f64>,
    #[serde(default = "default_p")]
    pub p: Vec<PValue>,
    #[serde(default)]
    pub data: DataSpec,
    /// Relative Krylov tolerance for the boundary-value solves.
    #[serde(default = "default_tol")]
    pub tol: f64,
    /// Cells per axis for the periodic cell problems.
    #[serde(default = "default_cell_resolution")]
    pub cell_resolution: usize,
    /// Hölder exponent for the sup-norm data ratios.
    #[serde(default = "default_gamma")]
    pub holder_gamma: f64,
    /// Negative control: swap the two effective matrices in converge mode.
    #[serde(default)]
    pub swap_effective: bool,
    /// Record wall time in the `seconds` column (forfeits byte-identical
    /// reruns; off by default).
    #[serde(default)]
    pub record_timings: bool,
    #[serde(default = "default_out_dir")]
    pub out_dir: String,
}

fn default_family_a() -> FamilySpec {
    FamilySpec::new("laminate", &[2.0, 1.0])
}
fn default_family_b() -> FamilySpec {
    FamilySpec::new("laminate", &[1.5, 0.5])
}
fn default_eps() -> Vec<f64> {
    vec![0.25, 0.125, 0.0625]
}
fn default_p() -> Vec<PValue> {
    vec![PValue(2.0), PValue(4.0)]
}
fn default_tol() -> f64 {
    1e-10
}
fn default_cell_resolution() -> usize {
    64
}
fn default_gamma() -> f64 {
    0.5
}
fn default_out_dir() -> String {
    "out".to_string()
}

impl Default for Config {
    fn default() -> Self {
        serde_json::from_str("{}").expect("empty config must deserialize")
    }
}

impl Config {
    pub fn from_json(text: &str) -> Result<Self, CliError> {
        let cfg: Config =
            serde_json::from_str(text).map_err(|e| CliError::Config(e.to_string()))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<(), CliError> {
        if self.eps.is_empty() {
            return Err(CliError::Config("eps list must not be empty".into()));
        }
        for &e in &self.eps {
            if !(e > 0.0 && e <= 1.0) {
                return Err(CliError::Config(format!(
                    "eps values must lie in (0, 1], got {e}"
                )));
            }
        }
        if self.p.is_empty() {
            return Err(CliError::Config("p list must not be empty".into()));
        }
        for &PValue(p) in &self.p {
            if !(p > 1.0) {
                return Err(CliError::Config(format!(
                    "exponents must lie in (1, inf], got {p}"
                )));
            }
        }
        if !(self.tol > 0.0 && self.tol < 1.0) {
            return Err(CliError::Config(format!(
                "tol must lie in (0, 1), got {}",
                self.tol
            )));
        }
        if self.cell_resolution < 4 {
            return Err(CliError::Config(format!(
                "cell_resolution must be at least 4, got {}",
                self.cell_resolution
            )));
        }
        if !(self.holder_gamma > 0.0 && self.holder_gamma <= 1.0) {
            return Err(CliError::Config(format!(
                "holder_gamma must lie in (0, 1], got {}",
                self.holder_gamma
            )));
        }
        if let GridPolicy::Fixed { cells } = self.grid {
            if cells.iter().any(|&c| c < 2) {
                return Err(CliError::Config(format!(
                    "fixed grid needs at least 2 cells per axis, got {cells:?}"
                )));
            }
        }
        for e in self.domain.extent {
            if !(e > 0.0) {
                return Err(CliError::Config(format!(
                    "domain extent must be positive, got {:?}",
                    self.domain.extent
                )));
            }
        }
        Ok(())
    }

    pub fn make_grid(&self, eps: f64) -> Result<StaggeredGrid, CliError> {
        let cells = self.grid.cells_for(eps);
        Ok(StaggeredGrid::new(
            self.domain.origin,
            self.domain.extent,
            cells,
        )?)
    }

    /// Effective settings, one per line, for report headers. Records the
    /// applied defaults when config sections were omitted.
    pub fn describe(&self) -> String {
        let ps: Vec<String> = self
            .p
            .iter()
            .map(|&PValue(p)| crate::report::p_label(p))
            .collect();
        let eps: Vec<String> = self.eps.iter().map(|e| format!("{e}")).collect();
        format!(
            "domain origin {:?} extent {:?}\n\
             grid {}\n\
             family_A {}\n\
             family_B {}\n\
             eps [{}]\n\
             p [{}]\n\
             data {} (seed {}, amplitude {})\n\
             tol {:e}\n\
             cell_resolution {}\n\
             holder_gamma {}\n\
             swap_effective {}\n\
             record_timings {}",
            self.domain.origin,
            self.domain.extent,
            self.grid.describe(),
            self.family_a.label(),
            self.family_b.label(),
            eps.join(", "),
            ps.join(", "),
            self.data.name,
            self.data.seed,
            self.data.amplitude,
            self.tol,
            self.cell_resolution,
            self.holder_gamma,
            self.swap_effective,
            self.record_timings,
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn empty_document_yields_full_defaults() {
        let cfg = Config::from_json("{}").unwrap();
        assert_eq!(cfg.eps, vec![0.25, 0.125, 0.0625]);
        assert_eq!(cfg.family_a.name, "laminate");
        assert!(!cfg.record_timings);
        assert!(cfg.mode.is_none());
        let d = cfg.describe();
        assert!(d.contains("eps-coupled factor 8"));
    }

    #[test]
    fn unknown_keys_are_rejected() {
        let err = Config::from_json("{\"grid_policy\": \"fixed\"}").unwrap_err();
        let msg = format!("{err}");
        assert!(msg.contains("grid_policy"), "message: {msg}");
    }

    #[test]
    fn inf_exponent_parses_from_string() {
        let cfg = Config::from_json("{\"p\": [2, \"inf\"]}").unwrap();
        assert_eq!(cfg.p[0], PValue(2.0));
        assert!(cfg.p[1].0.is_infinite());
    }

    #[test]
    fn out_of_range_values_are_rejected() {
        assert!(Config::from_json("{\"eps\": [1.5]}").is_err());
        assert!(Config::from_json("{\"eps\": []}").is_err());
        assert!(Config::from_json("{\"p\": [1.0]}").is_err());
        assert!(Config::from_json("{\"tol\": 0.0}").is_err());
        assert!(Config::from_json("{\"cell_resolution\": 2}").is_err());
    }

    #[test]
    fn eps_coupled_policy_caps_the_grid() {
        let cfg = Config::from_json(
            "{\"grid\": {\"policy\": \"eps_coupled\", \"factor\": 8, \"max_cells\": 64}}",
        )
        .unwrap();
        assert_eq!(cfg.grid.cells_for(0.25), [32, 32, 32]);
        assert_eq!(cfg.grid.cells_for(0.125), [64, 64, 64]);
        assert_eq!(cfg.grid.cells_for(0.0625), [64, 64, 64]);
    }
}
