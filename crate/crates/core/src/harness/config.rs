use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::analytics::Method;
use crate::channel::DEFAULT_TRUNCATION;
use crate::montecarlo::{BerMode, McSpec};
use crate::special::QuadratureSpec;
use crate::system::{LinkBudget, SystemConfig, Topology, TurbulenceParams};

use super::HarnessError;

/// Quantity plotted on a figure's vertical axis.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Quantity {
    Outage,
    Ber,
}

/// Built-in configurations mirroring the published figures.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Preset {
    Fig2,
    Fig3,
    Fig4,
    Fig5,
    Fig6,
    Fig7,
}

impl Preset {
    pub const ALL: [Preset; 6] = [Preset::Fig2, Preset::Fig3, Preset::Fig4, Preset::Fig5, Preset::Fig6, Preset::Fig7];

    pub fn as_str(self) -> &'static str {
        match self {
            Preset::Fig2 => "fig2",
            Preset::Fig3 => "fig3",
            Preset::Fig4 => "fig4",
            Preset::Fig5 => "fig5",
            Preset::Fig6 => "fig6",
            Preset::Fig7 => "fig7",
        }
    }

    pub fn parse(text: &str) -> Option<Self> {
        Self::ALL.into_iter().find(|p| p.as_str() == text)
    }

    fn source(self) -> &'static str {
        match self {
            Preset::Fig2 => include_str!("../../presets/fig2.json"),
            Preset::Fig3 => include_str!("../../presets/fig3.json"),
            Preset::Fig4 => include_str!("../../presets/fig4.json"),
            Preset::Fig5 => include_str!("../../presets/fig5.json"),
            Preset::Fig6 => include_str!("../../presets/fig6.json"),
            Preset::Fig7 => include_str!("../../presets/fig7.json"),
        }
    }

    /// The embedded configuration.
    pub fn config(self) -> RunConfig {
        let mut cfg: RunConfig = serde_json::from_str(self.source()).expect("embedded preset parses");
        cfg.preset = Some(self);
        cfg
    }
}

impl std::fmt::Display for Preset {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SweepVariable {
    GammaAvgDb,
}

/// Sweep of the common average SNR `γ_avg = γ̄_FSO = γ̄_RF` in dB.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepSpec {
    pub variable: SweepVariable,
    pub start_db: f64,
    pub stop_db: f64,
    pub step_db: f64,
}

impl SweepSpec {
    pub fn validate(&self) -> Result<(), HarnessError> {
        if !(self.start_db.is_finite() && self.stop_db.is_finite() && self.step_db.is_finite()) {
            return Err(HarnessError::config("sweep", "start_db, stop_db and step_db must be finite"));
        }
        if self.start_db > self.stop_db {
            return Err(HarnessError::config("sweep", "start_db must not exceed stop_db"));
        }
        if !(self.step_db > 0.0) {
            return Err(HarnessError::config("sweep.step_db", "must be positive"));
        }
        Ok(())
    }

    /// Sweep abscissae; the stop value is included when the step lands on it.
    pub fn points(&self) -> Vec<f64> {
        let count = ((self.stop_db - self.start_db) / self.step_db + 1e-9).floor() as usize;
        (0..=count).map(|i| self.start_db + i as f64 * self.step_db).collect()
    }
}

/// One curve of a figure: a system whose average SNR is swept.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CurveSpec {
    pub id: String,
    pub n_antennas: u32,
    pub n_relays: u32,
    /// Required for outage curves, ignored by the BER.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub gamma_th_db: Option<f64>,
    pub turbulence: TurbulenceParams,
}

impl CurveSpec {
    /// The curve's system at `γ_avg = 10^(dB/10)` on both branches, η = 1.
    pub fn system(&self, gamma_avg_db: f64) -> crate::Result<SystemConfig> {
        let threshold = self.gamma_th_db.map_or(0.0, crate::db_to_linear);
        SystemConfig::new(
            Topology::new(self.n_antennas, self.n_relays, threshold)?,
            LinkBudget::equal(crate::db_to_linear(gamma_avg_db))?,
            self.turbulence,
        )
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MonteCarloSettings {
    pub trials: u64,
    pub seed: u64,
    pub ber_mode: BerMode,
    #[serde(default = "default_batch")]
    pub batch: u64,
}

fn default_batch() -> u64 {
    McSpec::DEFAULT_BATCH
}

impl MonteCarloSettings {
    pub const MIN_TRIALS: u64 = 10_000;

    pub fn spec(&self) -> McSpec {
        McSpec { trials: self.trials, seed: self.seed, ber_mode: self.ber_mode, batch: self.batch }
    }
}

fn default_series_terms() -> usize {
    DEFAULT_TRUNCATION
}

/// A run description as read from a JSON config file.
///
/// When `preset` is set the preset's `name`, `quantity` and `curves` replace
/// the file's; `sweep`, `methods`, `monte_carlo`, `series_terms` and
/// `quadrature` fall back to the preset's values when absent from the file.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub preset: Option<Preset>,
    #[serde(default)]
    pub name: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub quantity: Option<Quantity>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sweep: Option<SweepSpec>,
    #[serde(default)]
    pub methods: Vec<Method>,
    #[serde(default)]
    pub curves: Vec<CurveSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub monte_carlo: Option<MonteCarloSettings>,
    #[serde(default = "default_series_terms")]
    pub series_terms: usize,
    #[serde(default)]
    pub quadrature: QuadratureSpec,
}

/// Command-line overrides applied on top of a config file.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Overrides {
    pub preset: Option<Preset>,
    pub methods: Option<Vec<Method>>,
    pub seed: Option<u64>,
    pub trials: Option<u64>,
}

impl RunConfig {
    pub fn from_json(text: &str) -> Result<Self, HarnessError> {
        serde_json::from_str(text).map_err(|e| HarnessError::Config(e.to_string()))
    }

    pub fn load(path: &Path) -> Result<Self, HarnessError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| HarnessError::Config(format!("cannot read {}: {e}", path.display())))?;
        Self::from_json(&text).map_err(|e| HarnessError::Config(format!("{}: {e}", path.display())))
    }

    /// Applies the preset and command-line overrides, then validates.
    pub fn resolve(mut self, overrides: &Overrides) -> Result<Self, HarnessError> {
        if let Some(p) = overrides.preset {
            self.preset = Some(p);
        }
        if let Some(p) = self.preset {
            let base = p.config();
            self.name = base.name;
            self.quantity = base.quantity;
            self.curves = base.curves;
            self.sweep = self.sweep.or(base.sweep);
            if self.methods.is_empty() {
                self.methods = base.methods;
            }
            self.monte_carlo = self.monte_carlo.or(base.monte_carlo);
        }
        if let Some(methods) = &overrides.methods {
            self.methods = methods.clone();
        }
        if overrides.seed.is_some() || overrides.trials.is_some() {
            let mc = self.monte_carlo.as_mut().ok_or_else(|| {
                HarnessError::config("monte_carlo", "--seed/--trials need Monte-Carlo settings in the config")
            })?;
            mc.seed = overrides.seed.unwrap_or(mc.seed);
            mc.trials = overrides.trials.unwrap_or(mc.trials);
        }
        self.validate()?;
        Ok(self)
    }

    pub fn validate(&self) -> Result<(), HarnessError> {
        if self.name.is_empty() {
            return Err(HarnessError::config("name", "missing"));
        }
        if self.name.contains(['/', ',', '\\']) {
            return Err(HarnessError::config("name", "must not contain '/', ',' or '\\'"));
        }
        let quantity = self.quantity.ok_or_else(|| HarnessError::config("quantity", "missing"))?;
        self.sweep.ok_or_else(|| HarnessError::config("sweep", "missing"))?.validate()?;
        if self.methods.is_empty() {
            return Err(HarnessError::config("methods", "at least one method is required"));
        }
        if self.curves.is_empty() {
            return Err(HarnessError::config("curves", "at least one curve is required"));
        }
        for (i, c) in self.curves.iter().enumerate() {
            let field = |f: &str| format!("curves[{i}].{f}");
            if c.id.is_empty() || c.id.contains(',') {
                return Err(HarnessError::config(&field("id"), "must be non-empty and contain no ','"));
            }
            if self.curves[..i].iter().any(|d| d.id == c.id) {
                return Err(HarnessError::config(&field("id"), &format!("duplicate curve id {:?}", c.id)));
            }
            if quantity == Quantity::Outage && c.gamma_th_db.is_none() {
                return Err(HarnessError::config(&field("gamma_th_db"), "required for outage curves"));
            }
            if let Some(th) = c.gamma_th_db {
                if !th.is_finite() {
                    return Err(HarnessError::config(&field("gamma_th_db"), "must be finite"));
                }
            }
            c.system(0.0).map_err(|e| HarnessError::config(&format!("curves[{i}]"), &e.to_string()))?;
        }
        if self.methods.contains(&Method::MonteCarlo) {
            let mc = self
                .monte_carlo
                .ok_or_else(|| HarnessError::config("monte_carlo", "required when method \"mc\" is selected"))?;
            if mc.trials < MonteCarloSettings::MIN_TRIALS {
                return Err(HarnessError::config(
                    "monte_carlo.trials",
                    &format!("must be at least {}", MonteCarloSettings::MIN_TRIALS),
                ));
            }
            if mc.batch == 0 {
                return Err(HarnessError::config("monte_carlo.batch", "must be positive"));
            }
        }
        if self.series_terms == 0 {
            return Err(HarnessError::config("series_terms", "must be positive"));
        }
        self.quadrature.validate().map_err(|e| HarnessError::config("quadrature", &e.to_string()))?;
        Ok(())
    }

    /// Quantity of a validated config.
    pub fn quantity(&self) -> Quantity {
        self.quantity.expect("validated config")
    }

    /// Sweep of a validated config.
    pub fn sweep(&self) -> SweepSpec {
        self.sweep.expect("validated config")
    }
}
