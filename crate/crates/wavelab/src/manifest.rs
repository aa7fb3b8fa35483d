//! Run manifests: the single machine-readable record written into every
//! run directory. A manifest echoes the fully resolved configuration (so
//! the run reproduces from the manifest alone given the same binary),
//! records the derived exponent quantities, and carries the subcommand's
//! outcome summary plus the list of artifact files written next to it.

use std::collections::BTreeMap;
use std::io;
use std::path::{Path, PathBuf};
use std::time::{SystemTime, UNIX_EPOCH};

use serde::Serialize;
use serde_json::Value;

use crate::config::{PairSetChoice, RunConfig};
use crate::exponents::{theta1, theta2, to_f64, AdmissiblePair, PairClass};
use crate::norms::default_pairs;
use crate::picard::working_pairs;

/// One exponent pair with its exact classification, in display form.
#[derive(Clone, Debug, Serialize)]
pub struct PairRow {
    pub q: String,
    pub r: String,
    /// The spatial Lebesgue exponent the mixed norm actually uses (`3r`).
    pub space_exponent: String,
    pub class: String,
}

pub fn pair_row(pair: &AdmissiblePair) -> PairRow {
    let class = match pair.classify() {
        PairClass::Optimal => "optimal".to_string(),
        PairClass::Admissible => "admissible".to_string(),
        PairClass::NotAdmissible { violations } => {
            let texts: Vec<String> = violations.iter().map(|v| v.to_string()).collect();
            format!("not admissible: {}", texts.join("; "))
        }
    };
    PairRow {
        q: pair.q.to_string(),
        r: pair.r.to_string(),
        space_exponent: pair.norm_space_exponent().to_string(),
        class,
    }
}

/// Exponent quantities derived from the configuration at run time.
#[derive(Clone, Debug, Serialize)]
pub struct Derived {
    /// First smallness exponent `(4-α)/2`, when the parameters admit it.
    pub theta1: Option<f64>,
    /// Second smallness exponent for the configured split exponent.
    pub theta2: Option<f64>,
    /// The run's pair set with exact classifications.
    pub pairs: Vec<PairRow>,
}

/// The pair set a config resolves to (constant pairs, optionally extended
/// by the optimal contraction pairs for the run's exponents).
pub fn resolved_pairs(cfg: &RunConfig) -> Vec<AdmissiblePair> {
    match cfg.picard.pair_set {
        PairSetChoice::Default => default_pairs(),
        PairSetChoice::Working => {
            working_pairs(&cfg.eq.alpha, &cfg.eq.gamma, &cfg.eq.b).unwrap_or_else(|_| default_pairs())
        }
    }
}

pub fn derived_for(cfg: &RunConfig) -> Derived {
    Derived {
        theta1: theta1(&cfg.eq.alpha, &cfg.eq.b).ok().map(|v| to_f64(&v)),
        theta2: theta2(&cfg.eq.alpha, &cfg.eq.gamma, &cfg.eq.b).ok().map(|v| to_f64(&v)),
        pairs: resolved_pairs(cfg).iter().map(pair_row).collect(),
    }
}

pub fn now_unix_ms() -> u64 {
    SystemTime::now()
        .duration_since(UNIX_EPOCH)
        .map(|d| d.as_millis() as u64)
        .unwrap_or(0)
}

/// The per-run record. Exactly one `manifest.json` per run directory.
#[derive(Clone, Debug, Serialize)]
pub struct Manifest {
    pub command: String,
    pub version: String,
    pub started_unix_ms: u64,
    pub finished_unix_ms: u64,
    /// Fully resolved config in grammar form (`section.key` to value).
    pub config: BTreeMap<String, String>,
    pub derived: Derived,
    /// Subcommand-specific summary.
    pub outcome: Value,
    /// Files written into the run directory, relative names.
    pub artifacts: Vec<String>,
    /// True when the run aborted and the artifact set may be incomplete.
    pub partial: bool,
}

impl Manifest {
    pub fn begin(command: &str, cfg: &RunConfig) -> Manifest {
        Manifest {
            command: command.to_string(),
            version: env!("CARGO_PKG_VERSION").to_string(),
            started_unix_ms: now_unix_ms(),
            finished_unix_ms: 0,
            config: cfg.echo().into_iter().collect(),
            derived: derived_for(cfg),
            outcome: Value::Null,
            artifacts: Vec::new(),
            partial: false,
        }
    }

    pub fn finish(&mut self, outcome: Value, artifacts: Vec<String>) {
        self.finished_unix_ms = now_unix_ms();
        self.outcome = outcome;
        self.artifacts = artifacts;
    }

    /// Write `manifest.json` into `dir` and return its path.
    pub fn write(&self, dir: &Path) -> io::Result<PathBuf> {
        let path = dir.join("manifest.json");
        let mut text = serde_json::to_string_pretty(self)
            .map_err(|e| io::Error::new(io::ErrorKind::InvalidData, e))?;
        text.push('\n');
        std::fs::write(&path, text)?;
        Ok(path)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::config::parse_config;

    #[test]
    fn derived_quantities_match_the_exponent_calculus() {
        let cfg = parse_config("eq.alpha = 1\neq.b = 1/4\neq.gamma = 4\n").unwrap();
        let d = derived_for(&cfg);
        assert_eq!(d.theta1, Some(1.5));
        assert_eq!(d.theta2, Some(0.875));
        assert_eq!(d.pairs.len(), 2);
        assert!(d.pairs.iter().all(|p| p.class == "optimal"));
    }

    #[test]
    fn working_pair_set_appears_in_the_manifest() {
        let cfg = parse_config("eq.alpha = 1\neq.b = 1/4\neq.gamma = 4\npicard.pair_set = working\n")
            .unwrap();
        let d = derived_for(&cfg);
        assert!(d.pairs.len() > 2, "contraction pairs missing: {:?}", d.pairs);
        // The mixed norm's spatial exponent is three times the pair's r.
        let sup = d.pairs.iter().find(|p| p.q == "inf").unwrap();
        assert_eq!(sup.space_exponent, "6");
    }

    #[test]
    fn manifest_round_trips_as_json() {
        let cfg = parse_config("").unwrap();
        let mut m = Manifest::begin("norms", &cfg);
        m.finish(serde_json::json!({"status": "ok"}), vec!["norms.csv".into()]);
        let dir = tempfile::tempdir().unwrap();
        let path = m.write(dir.path()).unwrap();
        let text = std::fs::read_to_string(path).unwrap();
        let back: Value = serde_json::from_str(&text).unwrap();
        assert_eq!(back["command"], "norms");
        assert_eq!(back["outcome"]["status"], "ok");
        assert_eq!(back["config"]["grid.mode"], "radial1d");
        // Default parameters sit on the energy-window boundary, so the first
        // time gain is honestly absent while the second is still defined.
        assert!(back["derived"]["theta1"].is_null());
        assert!(back["derived"]["theta2"].as_f64().unwrap() > 0.0);
        assert_eq!(back["artifacts"][0], "norms.csv");
        assert_eq!(back["partial"], false);
    }
}
