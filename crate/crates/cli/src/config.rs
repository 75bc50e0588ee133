use std::path::{Path, PathBuf};

use eldershare_core::accumulation::{GrowthParams, PathSetup, PathSolverOptions};
use eldershare_core::property_rights::LandEconomy;
use eldershare_core::static_economy::{PreferenceParams, StaticIncomes};
use serde::Deserialize;

use crate::error::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Model {
    Static,
    PropertyRights,
    #[default]
    Accumulation,
}

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioConfig {
    /// Model used by `steady-state`.
    #[serde(default)]
    pub model: Model,
    #[serde(default, rename = "static")]
    pub static_: StaticSection,
    #[serde(default)]
    pub property_rights: PropertyRightsSection,
    #[serde(default)]
    pub accumulation: AccumulationSection,
    #[serde(default)]
    pub sweep: SweepSection,
    #[serde(default)]
    pub oracle: OracleSection,
    #[serde(default)]
    pub ethno: EthnoSection,
    #[serde(skip)]
    pub base_dir: PathBuf,
}

#[derive(Debug, Clone, Copy, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct StaticSection {
    pub eta: f64,
    pub beta: f64,
    pub delta: f64,
    pub n: f64,
    pub y_m: f64,
    pub y_e: f64,
}

impl Default for StaticSection {
    fn default() -> Self {
        Self {
            eta: 0.5,
            beta: 1.0,
            delta: 0.2,
            n: 0.0,
            y_m: 1.0,
            y_e: 1.0,
        }
    }
}

#[derive(Debug, Clone, Copy, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct PropertyRightsSection {
    pub alpha: f64,
    pub a_m: f64,
    pub a_e: f64,
    pub land: f64,
    pub n: f64,
    pub rho: f64,
    pub phi: f64,
    /// Preferences for the inculcation overlay.
    pub eta: f64,
    pub beta: f64,
    pub delta: f64,
}

impl Default for PropertyRightsSection {
    fn default() -> Self {
        Self {
            alpha: 0.5,
            a_m: 1.0,
            a_e: 0.025,
            land: 1.0,
            n: 0.0,
            rho: 1.0,
            phi: 0.0,
            eta: 0.25,
            beta: 1.0,
            delta: 0.2,
        }
    }
}

#[derive(Debug, Clone, Copy, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct AccumulationSection {
    pub n: f64,
    pub a: f64,
    pub alpha: f64,
    pub beta: f64,
    pub delta: f64,
    pub tau_e: f64,
    /// Initial capital per effective labor; half the steady state when absent.
    pub k0: Option<f64>,
    pub horizon: usize,
    pub eta0: Option<f64>,
    pub damping: f64,
    pub max_iterations: usize,
    pub tolerance: f64,
}

impl Default for AccumulationSection {
    fn default() -> Self {
        let opts = PathSolverOptions::default();
        Self {
            n: 0.0,
            a: 0.0,
            alpha: 0.5,
            beta: 1.0,
            delta: 0.2,
            tau_e: 0.0,
            k0: None,
            horizon: 200,
            eta0: None,
            damping: opts.damping,
            max_iterations: opts.max_iterations,
            tolerance: opts.tolerance,
        }
    }
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct SweepSection {
    pub phi_points: usize,
    pub intensity_min: f64,
    pub intensity_max: f64,
    pub intensity_points: usize,
    /// Elderly labor endowments swept alongside capital intensity.
    pub tau_e: Vec<f64>,
}

impl Default for SweepSection {
    fn default() -> Self {
        Self {
            phi_points: 101,
            intensity_min: 0.8,
            intensity_max: 3.0,
            intensity_points: 221,
            tau_e: vec![0.0],
        }
    }
}

#[derive(Debug, Clone, Copy, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct OracleSection {
    pub draws: usize,
    pub instances: usize,
    pub resolution: usize,
    pub refinement_rounds: usize,
}

impl Default for OracleSection {
    fn default() -> Self {
        let o = eldershare_core::verify::SuiteOptions::default();
        Self {
            draws: o.draws,
            instances: o.oracle_instances,
            resolution: o.resolution,
            refinement_rounds: o.refinement_rounds,
        }
    }
}

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct EthnoSection {
    pub table: Option<PathBuf>,
    /// Index definitions; the bundled ones when absent.
    pub indices: Option<PathBuf>,
    pub pairs: Option<Vec<(String, String)>>,
}

impl ScenarioConfig {
    pub fn load(path: Option<&Path>) -> Result<Self, CliError> {
        let mut cfg = match path {
            None => ScenarioConfig::default(),
            Some(p) => {
                let text = std::fs::read_to_string(p).map_err(|e| CliError::io(p, e))?;
                let mut cfg: ScenarioConfig = toml::from_str(&text)
                    .map_err(|e| CliError::Config(format!("{}: {e}", p.display())))?;
                cfg.base_dir = p.parent().map(Path::to_path_buf).unwrap_or_default();
                cfg
            }
        };
        if cfg.base_dir.as_os_str().is_empty() {
            cfg.base_dir = PathBuf::from(".");
        }
        Ok(cfg)
    }

    pub fn resolve(&self, p: &Path) -> PathBuf {
        if p.is_absolute() {
            p.to_path_buf()
        } else {
            self.base_dir.join(p)
        }
    }

    pub fn static_prefs(&self) -> Result<PreferenceParams, CliError> {
        let s = &self.static_;
        Ok(PreferenceParams::new(s.eta, s.beta, s.delta)?)
    }

    pub fn static_incomes(&self) -> Result<StaticIncomes, CliError> {
        let s = &self.static_;
        Ok(StaticIncomes::new(s.y_m, s.y_e, s.n)?)
    }

    pub fn land_economy(&self) -> Result<LandEconomy, CliError> {
        let p = &self.property_rights;
        Ok(LandEconomy::from_growth(
            p.alpha, p.a_m, p.a_e, p.land, p.n,
        )?)
    }

    pub fn overlay_prefs(&self) -> Result<PreferenceParams, CliError> {
        let p = &self.property_rights;
        Ok(PreferenceParams::new(p.eta, p.beta, p.delta)?)
    }

    pub fn growth(&self) -> Result<GrowthParams, CliError> {
        let a = &self.accumulation;
        Ok(GrowthParams::new(
            a.n, a.a, a.alpha, a.beta, a.delta, a.tau_e,
        )?)
    }

    pub fn path_setup(&self, steady_k: f64) -> PathSetup {
        let a = &self.accumulation;
        PathSetup {
            k0: a.k0.unwrap_or(0.5 * steady_k),
            horizon: a.horizon,
            eta0: a.eta0,
        }
    }

    pub fn solver(&self) -> PathSolverOptions {
        let a = &self.accumulation;
        PathSolverOptions {
            damping: a.damping,
            max_iterations: a.max_iterations,
            tolerance: a.tolerance,
        }
    }

    pub fn intensity_grid(&self) -> Result<Vec<f64>, CliError> {
        let s = &self.sweep;
        if !(s.intensity_min > 0.0 && s.intensity_max >= s.intensity_min) {
            return Err(CliError::Config(format!(
                "sweep.intensity_min = {} and sweep.intensity_max = {} must satisfy 0 < min <= max",
                s.intensity_min, s.intensity_max
            )));
        }
        if s.intensity_points < 2 {
            return Err(CliError::Config(format!(
                "sweep.intensity_points = {} must be at least 2",
                s.intensity_points
            )));
        }
        let step = (s.intensity_max - s.intensity_min) / (s.intensity_points - 1) as f64;
        Ok((0..s.intensity_points)
            .map(|i| s.intensity_min + step * i as f64)
            .collect())
    }
}
