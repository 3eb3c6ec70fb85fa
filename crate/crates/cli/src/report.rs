//! Machine-readable verification reports and their text rendering.

use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
    Skip,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CheckRecord {
    pub name: String,
    pub anchor: String,
    pub status: Status,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub witness: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Report {
    pub scene: String,
    /// sha256 of the canonical scene printing.
    pub scene_hash: String,
    pub suite: String,
    pub seed: u64,
    pub checks: Vec<CheckRecord>,
}

impl Report {
    /// Checks are kept sorted by name so the output does not depend on
    /// execution order.
    pub fn new(scene: String, scene_hash: String, suite: String, seed: u64, mut checks: Vec<CheckRecord>) -> Self {
        checks.sort_by(|a, b| a.name.cmp(&b.name));
        Self { scene, scene_hash, suite, seed, checks }
    }

    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.status != Status::Fail)
    }

    pub fn get(&self, name: &str) -> Option<&CheckRecord> {
        self.checks.iter().find(|c| c.name == name)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    pub fn from_json(s: &str) -> serde_json::Result<Self> {
        serde_json::from_str(s)
    }

    pub fn render(&self) -> String {
        let mut s = String::new();
        let short = &self.scene_hash[..self.scene_hash.len().min(12)];
        let _ = writeln!(s, "scene {} ({short}), suite {}, seed {}", self.scene, self.suite, self.seed);
        for c in &self.checks {
            let tag = match c.status {
                Status::Pass => "PASS",
                Status::Fail => "FAIL",
                Status::Skip => "SKIP",
            };
            let _ = writeln!(s, "  {tag}  {:<32} {}", c.name, c.anchor);
            if let Some(w) = &c.witness {
                let _ = writeln!(s, "        {w}");
            }
        }
        let failed = self.checks.iter().filter(|c| c.status == Status::Fail).count();
        let _ = writeln!(s, "{} checks, {failed} failed", self.checks.len());
        s
    }
}
