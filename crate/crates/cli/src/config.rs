//! Experiment configuration: a single TOML file with nested sections.
//! Command-line flags override file values; the `CODEDMM_SEED` environment
//! variable supplies the default seed when neither is given.

use std::path::Path;

use codedmm_core::scheme::SchemeParams;
use codedmm_core::{PartitionPlan, Scheme, SpeedModel};
use serde::Deserialize;

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub plan: PlanSection,
    pub n_workers: usize,
    #[serde(default)]
    pub schemes: Vec<String>,
    #[serde(default)]
    pub budgets: Vec<usize>,
    pub model: ModelSection,
    #[serde(default)]
    pub sim: SimSection,
    #[serde(default)]
    pub bproc: Option<GridSection>,
    #[serde(default)]
    pub zigzag: Option<ZigzagSection>,
    #[serde(default)]
    pub exec: Option<ExecSection>,
    #[serde(default)]
    pub regularity: Option<RegularitySection>,
}

#[derive(Debug, Clone, Copy, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PlanSection {
    pub k: usize,
    pub l: usize,
    pub r: usize,
    pub s: usize,
    pub c: usize,
}

#[derive(Debug, Clone, Copy, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ModelSection {
    pub nu: f64,
    pub lambda: f64,
}

#[derive(Debug, Clone, Copy, Deserialize, Default)]
#[serde(deny_unknown_fields)]
pub struct SimSection {
    #[serde(default = "default_trials")]
    pub trials: usize,
    pub seed: Option<u64>,
    #[serde(default)]
    pub optimistic_stop: bool,
}

fn default_trials() -> usize {
    10_000
}

#[derive(Debug, Clone, Copy, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GridSection {
    pub n_a: usize,
    pub n_b: usize,
}

#[derive(Debug, Clone, Copy, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ZigzagSection {
    pub mu_a: Option<usize>,
    pub mu_b: Option<usize>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExecSection {
    pub scheme: String,
    pub budget: usize,
    #[serde(default)]
    pub time_scale: f64,
    #[serde(default)]
    pub parallelism: usize,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RegularitySection {
    #[serde(default = "default_profiles")]
    pub profiles: usize,
    #[serde(default = "default_draws")]
    pub draws: usize,
    /// Profile families: scheme names plus "grid" and "violating".
    #[serde(default)]
    pub kinds: Vec<String>,
}

fn default_profiles() -> usize {
    50
}
fn default_draws() -> usize {
    50
}

impl ExperimentConfig {
    /// Reads and validates a config file; errors carry toml's line/column
    /// diagnostics.
    pub fn load(path: &Path) -> Result<Self, String> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| format!("cannot read {}: {e}", path.display()))?;
        let cfg: ExperimentConfig = toml::from_str(&text)
            .map_err(|e| format!("config parse error in {}:\n{e}", path.display()))?;
        cfg.validate()?;
        Ok(cfg)
    }

    fn validate(&self) -> Result<(), String> {
        self.plan()?;
        self.speed_model()?;
        for name in &self.schemes {
            name.parse::<Scheme>().map_err(|e| e.to_string())?;
        }
        Ok(())
    }

    pub fn plan(&self) -> Result<PartitionPlan, String> {
        PartitionPlan::new(self.plan.r, self.plan.s, self.plan.c, self.plan.k, self.plan.l)
            .map_err(|e| format!("[plan] section invalid: {e}"))
    }

    pub fn speed_model(&self) -> Result<SpeedModel, String> {
        SpeedModel::new(self.model.nu, self.model.lambda)
            .map_err(|e| format!("[model] section invalid: {e}"))
    }

    pub fn scheme_params(&self) -> SchemeParams {
        SchemeParams {
            mu_a: self.zigzag.and_then(|z| z.mu_a),
            mu_b: self.zigzag.and_then(|z| z.mu_b),
            grid: self.bproc.map(|g| (g.n_a, g.n_b)),
        }
    }

    pub fn schemes(&self) -> Result<Vec<Scheme>, String> {
        self.schemes
            .iter()
            .map(|s| s.parse::<Scheme>().map_err(|e| e.to_string()))
            .collect()
    }

    /// Seed precedence: flag > file > CODEDMM_SEED env > 0.
    pub fn seed(&self, flag: Option<u64>) -> u64 {
        flag.or(self.sim.seed)
            .or_else(|| {
                std::env::var("CODEDMM_SEED")
                    .ok()
                    .and_then(|v| v.parse().ok())
            })
            .unwrap_or(0)
    }
}
