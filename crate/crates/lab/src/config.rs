use crate::LabError;
use cocycle_core::ball::BallGrid;
use serde::{Deserialize, Serialize};
use std::fmt;
use std::str::FromStr;

pub const MAX_CIRCLE: usize = 4096;
pub const MAX_BALL: usize = 96;
pub const MAX_STEPS: usize = 2000;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "lowercase")]
pub enum Suite {
    Oned,
    Threed,
    Symbolic,
    Crossed,
    Converge,
    #[default]
    All,
}

impl Suite {
    pub const NAMES: [&'static str; 6] = ["oned", "threed", "symbolic", "crossed", "converge", "all"];
}

impl FromStr for Suite {
    type Err = LabError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        serde_json::from_value(serde_json::Value::String(s.to_owned()))
            .map_err(|_| LabError::Config(format!("unknown suite '{s}', expected one of {}", Suite::NAMES.join(", "))))
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(Suite::NAMES[*self as usize])
    }
}

/// Which normalization of the 3D cocycle the reported values use.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "lowercase")]
pub enum Prefactor {
    /// `i/24π`.
    #[default]
    Standard,
    /// `i/24π²`.
    Literature,
}

/// Flat run configuration. Every field has a default, so a config file
/// only lists what it changes.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SuiteConfig {
    pub suite: Suite,
    /// Circle samples.
    pub n: usize,
    /// Time steps of the path quadrature.
    pub steps: usize,
    /// Ball grid `[Nr, Nθ, Nφ]` of the single-resolution 3D suite.
    pub grid: [usize; 3],
    /// Cube sizes of the refinement study, coarse to fine.
    pub converge: Vec<usize>,
    pub seed: u64,
    /// Seeds of the circle conjugation identity.
    pub circle_seeds: usize,
    /// Seeded triples of the circle cocycle law.
    pub triples: usize,
    /// Seeds of the 3D invariance refinement.
    pub ball_seeds: usize,
    /// Samples per crossed-module axiom.
    pub samples: usize,
    pub prefactor: Prefactor,
    pub tol_sigma3: f64,
    pub tol_path: f64,
    pub tol_conjugation: f64,
    pub tol_cocycle: f64,
    pub tol_reality: f64,
    pub tol_axiom: f64,
    /// Relative tolerance of single-grid 3D comparisons.
    pub tol_relative: f64,
    /// Relative level below which a quantity counts as rounding noise.
    pub tol_floor: f64,
    pub min_order: f64,
}

impl Default for SuiteConfig {
    fn default() -> Self {
        SuiteConfig {
            suite: Suite::All,
            n: 128,
            steps: 400,
            grid: [32, 32, 32],
            converge: vec![16, 24, 32],
            seed: 7,
            circle_seeds: 20,
            triples: 50,
            ball_seeds: 5,
            samples: 200,
            prefactor: Prefactor::Standard,
            tol_sigma3: 1e-6,
            tol_path: 1e-8,
            tol_conjugation: 1e-8,
            tol_cocycle: 1e-10,
            tol_reality: 1e-9,
            tol_axiom: 1e-10,
            tol_relative: 1e-2,
            tol_floor: 1e-10,
            min_order: 1.8,
        }
    }
}

impl SuiteConfig {
    pub fn from_json(text: &str) -> Result<Self, LabError> {
        serde_json::from_str(text).map_err(|e| LabError::Config(e.to_string()))
    }

    pub fn ball_grid(&self) -> Result<BallGrid, LabError> {
        let [nr, nt, np] = self.grid;
        BallGrid::new(nr, nt, np).map_err(|e| LabError::Config(e.to_string()))
    }

    /// Apply a `--grid` override. The meaning follows the suite: the sample
    /// count for `oned`, the refinement ladder for `converge`, otherwise one
    /// cube size or an explicit `Nr,Nθ,Nφ` triple.
    pub fn apply_grid(&mut self, values: &[usize]) -> Result<(), LabError> {
        match (self.suite, values) {
            (Suite::Oned, [n]) => self.n = *n,
            (Suite::Converge, v) => self.converge = v.to_vec(),
            (_, [n]) => self.grid = [*n; 3],
            (_, [nr, nt, np]) => self.grid = [*nr, *nt, *np],
            _ => return Err(LabError::Config(format!("--grid takes 1 or 3 sizes for suite {}, got {}", self.suite, values.len()))),
        }
        Ok(())
    }

    pub fn validate(&self) -> Result<(), LabError> {
        let bad = |msg: String| Err(LabError::Config(msg));
        if self.n < 16 || self.n > MAX_CIRCLE || !self.n.is_multiple_of(2) {
            return bad(format!("n = {} must be even and within 16..={MAX_CIRCLE}", self.n));
        }
        if self.steps < 8 || self.steps > MAX_STEPS || !self.steps.is_multiple_of(2) {
            return bad(format!("steps = {} must be even and within 8..={MAX_STEPS}", self.steps));
        }
        if self.grid.iter().any(|&s| s > MAX_BALL) {
            return bad(format!("grid {:?} exceeds {MAX_BALL}", self.grid));
        }
        self.ball_grid()?;
        if self.converge.len() < 2 || self.converge.windows(2).any(|w| w[0] >= w[1]) {
            return bad(format!("converge {:?} needs two or more increasing sizes", self.converge));
        }
        for &s in &self.converge {
            if s > MAX_BALL {
                return bad(format!("converge size {s} exceeds {MAX_BALL}"));
            }
            BallGrid::cube(s).map_err(|e| LabError::Config(e.to_string()))?;
        }
        for (name, v) in [
            ("circle_seeds", self.circle_seeds),
            ("triples", self.triples),
            ("ball_seeds", self.ball_seeds),
            ("samples", self.samples),
        ] {
            if v == 0 || v > 100_000 {
                return bad(format!("{name} = {v} must be within 1..=100000"));
            }
        }
        let tols = [
            self.tol_sigma3,
            self.tol_path,
            self.tol_conjugation,
            self.tol_cocycle,
            self.tol_reality,
            self.tol_axiom,
            self.tol_relative,
            self.tol_floor,
            self.min_order,
        ];
        if tols.iter().any(|t| !t.is_finite() || *t <= 0.0) {
            return bad("tolerances must be positive and finite".into());
        }
        Ok(())
    }
}
