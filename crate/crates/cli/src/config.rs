//! TOML scenario description.
//!
//! A config names a deformation profile, a coherent preparation, a time
//! grid, and optionally a truncation policy:
//!
//! ```toml
//! [profile]
//! kind = "self-collision"   # identity | self-collision | cross-collision
//! kappa = 0.25              #   | q-oscillator | table
//!
//! [scenario]
//! alpha_sq = 1.0
//! phi = 0.0
//! fringe_phase = 0.0
//!
//! [time]
//! start = 0.0
//! end = 100.0
//! points = 1000
//!
//! [truncation]
//! epsilon = 1e-12
//! n_cap = 4096
//! ```
//!
//! Unknown keys are rejected so that a typo cannot silently fall back to a
//! default. The time grid is inclusive: the last point lands exactly on
//! `end`, never one step short of it.

use fdint::{CoherentScenario, DeformationSpec, EntangledRule, TruncationPolicy};
use serde::Deserialize;

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioConfig {
    pub profile: ProfileSection,
    pub scenario: ScenarioSection,
    #[serde(default)]
    pub time: TimeSection,
    #[serde(default)]
    pub truncation: TruncationSection,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProfileSection {
    pub kind: String,
    pub kappa: Option<f64>,
    pub lambda: Option<f64>,
    pub table: Option<Vec<Vec<f64>>>,
    pub symmetric: Option<bool>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioSection {
    pub alpha_sq: f64,
    #[serde(default)]
    pub phi: f64,
    #[serde(default)]
    pub fringe_phase: f64,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TimeSection {
    pub start: f64,
    pub end: f64,
    pub points: usize,
}

impl Default for TimeSection {
    fn default() -> Self {
        Self { start: 0.0, end: 100.0, points: 1000 }
    }
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TruncationSection {
    #[serde(default = "default_epsilon")]
    pub epsilon: f64,
    #[serde(default = "default_n_cap")]
    pub n_cap: usize,
}

fn default_epsilon() -> f64 {
    TruncationPolicy::default().epsilon
}

fn default_n_cap() -> usize {
    TruncationPolicy::default().n_cap
}

impl Default for TruncationSection {
    fn default() -> Self {
        Self { epsilon: default_epsilon(), n_cap: default_n_cap() }
    }
}

impl ScenarioConfig {
    /// Parses TOML text; `origin` only labels diagnostics. Reading the file
    /// is the caller's job so read failures keep their I/O classification.
    pub fn parse(text: &str, origin: &std::path::Path) -> Result<Self, String> {
        toml::from_str(text).map_err(|e| format!("{}: {e}", origin.display()))
    }

    pub fn spec(&self) -> Result<DeformationSpec, String> {
        let p = &self.profile;
        let reject = |field: &str, present: bool| -> Result<(), String> {
            if present {
                Err(format!("`{field}` does not apply to kind \"{}\"", p.kind))
            } else {
                Ok(())
            }
        };
        // Built-in profiles are exchange symmetric by construction; declaring
        // them otherwise is a contradiction, not an option.
        let builtin_symmetry = || -> Result<(), String> {
            if p.symmetric == Some(false) {
                Err(format!("kind \"{}\" is exchange symmetric; symmetric = false is invalid", p.kind))
            } else {
                Ok(())
            }
        };
        match p.kind.as_str() {
            "identity" => {
                reject("kappa", p.kappa.is_some())?;
                reject("lambda", p.lambda.is_some())?;
                reject("table", p.table.is_some())?;
                builtin_symmetry()?;
                Ok(DeformationSpec::Identity)
            }
            "self-collision" | "cross-collision" => {
                reject("lambda", p.lambda.is_some())?;
                reject("table", p.table.is_some())?;
                builtin_symmetry()?;
                let kappa = p.kappa.ok_or_else(|| format!("kind \"{}\" needs `kappa`", p.kind))?;
                Ok(if p.kind == "self-collision" {
                    DeformationSpec::SelfCollision { kappa }
                } else {
                    DeformationSpec::CrossCollision { kappa }
                })
            }
            "q-oscillator" => {
                reject("kappa", p.kappa.is_some())?;
                reject("table", p.table.is_some())?;
                builtin_symmetry()?;
                let lambda = p.lambda.ok_or_else(|| "kind \"q-oscillator\" needs `lambda`".to_string())?;
                Ok(DeformationSpec::QOscillator { lambda })
            }
            "table" => {
                reject("kappa", p.kappa.is_some())?;
                reject("lambda", p.lambda.is_some())?;
                let table = p
                    .table
                    .clone()
                    .ok_or_else(|| "kind \"table\" needs `table`".to_string())?;
                Ok(DeformationSpec::CustomEntangled {
                    rule: EntangledRule::Table(table),
                    symmetric: p.symmetric.unwrap_or(true),
                })
            }
            other => Err(format!(
                "unknown profile kind \"{other}\"; expected identity, self-collision, cross-collision, q-oscillator, or table"
            )),
        }
    }

    pub fn times(&self) -> Result<Vec<f64>, String> {
        let t = &self.time;
        if !(t.start.is_finite() && t.end.is_finite()) {
            return Err("time bounds must be finite".into());
        }
        if t.points < 2 {
            return Err(format!("time grid needs at least 2 points, got {}", t.points));
        }
        if !(t.end > t.start) {
            return Err(format!("time grid needs end > start, got [{}, {}]", t.start, t.end));
        }
        Ok(linspace(t.start, t.end, t.points))
    }

    pub fn policy(&self, epsilon_override: Option<f64>) -> TruncationPolicy {
        TruncationPolicy {
            epsilon: epsilon_override.unwrap_or(self.truncation.epsilon),
            n_cap: self.truncation.n_cap,
        }
    }

    pub fn coherent(&self, times: Vec<f64>) -> CoherentScenario {
        CoherentScenario {
            alpha_sq: self.scenario.alpha_sq,
            phi: self.scenario.phi,
            fringe_phase: self.scenario.fringe_phase,
            times,
        }
    }
}

/// Inclusive uniform grid; the endpoint is exact, not `start + (n−1)·step`.
pub fn linspace(start: f64, end: f64, points: usize) -> Vec<f64> {
    (0..points)
        .map(|k| {
            if k == points - 1 {
                end
            } else {
                start + (end - start) * k as f64 / (points - 1) as f64
            }
        })
        .collect()
}
