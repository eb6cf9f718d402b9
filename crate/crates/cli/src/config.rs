//! JSON configuration file: five sections with reference defaults for every field.
//! Quantities quoted in dB/dBm/dBi are converted to linear exactly once, in
//! [`FileConfig::scenario`].

use std::path::Path;

use anyhow::{Context, Result};
use irsfactory_core::blockage::BlockageModel;
use irsfactory_core::channel::{BandwidthUnit, RadioConfig};
use irsfactory_core::engine::{EngineMode, SampleBudget, ScenarioConfig};
use irsfactory_core::geometry::{ue_grid, ue_subgrid, FactoryLayout, IrsDeployment, Point3};
use irsfactory_core::units::loss_db_to_ratio;
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct FactorySection {
    pub length_m: f64,
    pub width_m: f64,
    pub height_m: f64,
    /// Distance of the shelf from the back wall.
    pub shelf_x_m: f64,
    pub ue_height_m: f64,
}

impl Default for FactorySection {
    fn default() -> Self {
        Self { length_m: 40.0, width_m: 50.0, height_m: 5.0, shelf_x_m: 19.5, ue_height_m: 0.5 }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct DeploymentSection {
    pub num_irs: usize,
    pub total_elements: usize,
    pub irs_height_m: f64,
    /// Defaults to half a wavelength.
    pub element_spacing_m: Option<f64>,
}

impl Default for DeploymentSection {
    fn default() -> Self {
        Self { num_irs: 8, total_elements: 960, irs_height_m: 4.0, element_spacing_m: None }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct BlockageSection {
    pub density_per_m2: f64,
    pub screen_width_m: f64,
    pub max_height_m: f64,
    /// Power loss per penetrated screen, dB.
    pub penetration_loss_db: f64,
    /// Power loss of the shelf on the direct link, dB.
    pub shelf_loss_db: f64,
}

impl Default for BlockageSection {
    fn default() -> Self {
        Self {
            density_per_m2: 0.2,
            screen_width_m: 2.5,
            max_height_m: 1.7,
            penetration_loss_db: 20.0,
            shelf_loss_db: 20.0,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RadioSection {
    pub frequency_hz: f64,
    pub tx_power_dbm: f64,
    pub tx_gain_dbi: f64,
    pub rx_gain_dbi: f64,
    pub noise_figure_db: f64,
    pub bandwidth: f64,
    /// Unit of `bandwidth` inside the noise formula.
    pub bandwidth_unit: BandwidthUnit,
    /// Nats.
    pub blocklength: f64,
    pub decode_error: f64,
    pub rate_threshold_bps_hz: f64,
}

impl Default for RadioSection {
    fn default() -> Self {
        Self {
            frequency_hz: 28e9,
            tx_power_dbm: 30.0,
            tx_gain_dbi: 24.0,
            rx_gain_dbi: 10.0,
            noise_figure_db: 9.0,
            bandwidth: 400e6,
            bandwidth_unit: BandwidthUnit::Hz,
            blocklength: 200.0,
            decode_error: 1e-9,
            rate_threshold_bps_hz: 0.1,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct EngineSection {
    pub mode: EngineMode,
    /// Realizations per UE position; split into drops and draws automatically
    /// unless both are given.
    pub samples: usize,
    pub drops: Option<usize>,
    pub draws: Option<usize>,
    pub seed: u64,
    pub grid_resolution_m: f64,
    /// `[nx, ny]` cell-centred points instead of the regular grid.
    pub subgrid: Option<[usize; 2]>,
}

impl Default for EngineSection {
    fn default() -> Self {
        Self {
            mode: EngineMode::Geometric,
            samples: SampleBudget::DESK_TOTAL,
            drops: None,
            draws: None,
            seed: 0,
            grid_resolution_m: 2.0,
            subgrid: None,
        }
    }
}

impl EngineSection {
    pub fn budget(&self) -> SampleBudget {
        match (self.drops, self.draws) {
            (Some(drops), Some(draws)) => SampleBudget { drops, draws },
            _ => SampleBudget::from_total(self.samples),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct FileConfig {
    pub factory: FactorySection,
    pub deployment: DeploymentSection,
    pub blockage: BlockageSection,
    pub radio: RadioSection,
    pub engine: EngineSection,
}

impl FileConfig {
    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).context("invalid configuration")
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .with_context(|| format!("cannot read config {}", path.display()))?;
        Self::from_json(&text).with_context(|| format!("in {}", path.display()))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("config serializes")
    }

    /// Compact serialization used for hashing.
    pub fn canonical_json(&self) -> String {
        serde_json::to_string(self).expect("config serializes")
    }

    pub fn layout(&self) -> Result<FactoryLayout> {
        let f = &self.factory;
        Ok(FactoryLayout::new(f.length_m, f.width_m, f.height_m, f.shelf_x_m, f.ue_height_m)?)
    }

    pub fn radio(&self) -> Result<RadioConfig> {
        let r = &self.radio;
        let mut radio = RadioConfig::new(
            r.frequency_hz,
            r.tx_gain_dbi,
            r.rx_gain_dbi,
            r.tx_power_dbm,
            r.noise_figure_db,
            r.bandwidth,
            r.blocklength,
            r.decode_error,
            r.rate_threshold_bps_hz,
        )?;
        radio.bandwidth_unit = r.bandwidth_unit;
        Ok(radio)
    }

    pub fn blockage(&self) -> Result<BlockageModel> {
        let b = &self.blockage;
        Ok(BlockageModel::new(
            b.density_per_m2,
            b.screen_width_m,
            b.max_height_m,
            self.factory.ue_height_m,
            loss_db_to_ratio(b.penetration_loss_db),
            loss_db_to_ratio(b.shelf_loss_db),
        )?)
    }

    /// Deployment with `num_irs` panels and the configured height and elements.
    pub fn deployment_with(&self, num_irs: usize) -> Result<IrsDeployment> {
        let layout = self.layout()?;
        let spacing = match self.deployment.element_spacing_m {
            Some(s) => s,
            None => self.radio()?.half_wavelength(),
        };
        Ok(IrsDeployment::new(
            &layout,
            num_irs,
            self.deployment.total_elements,
            self.deployment.irs_height_m,
            spacing,
            self.blockage.max_height_m,
        )?)
    }

    /// UE positions to evaluate.
    pub fn ue_points(&self) -> Result<Vec<Point3>> {
        let layout = self.layout()?;
        Ok(match self.engine.subgrid {
            Some([nx, ny]) => ue_subgrid(&layout, nx, ny)?,
            None => ue_grid(&layout, self.engine.grid_resolution_m)?,
        })
    }

    /// Validated scenario in linear units.
    pub fn scenario(&self) -> Result<ScenarioConfig> {
        let cfg = ScenarioConfig {
            layout: self.layout()?,
            deployment: self.deployment_with(self.deployment.num_irs)?,
            blockage: self.blockage()?,
            radio: self.radio()?,
            mode: self.engine.mode,
            budget: self.engine.budget(),
            seed: self.engine.seed,
            grid_resolution: self.engine.grid_resolution_m,
        };
        cfg.validate()?;
        Ok(cfg)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn defaults_are_reference_values() {
        let cfg = FileConfig::default().scenario().unwrap();
        assert_eq!(cfg.layout, FactoryLayout::reference());
        assert_eq!(cfg.radio, RadioConfig::reference());
        assert!((cfg.blockage.penetration - 0.01).abs() < 1e-15);
        assert_eq!(cfg.deployment.num_irs, 8);
        assert_eq!(cfg.budget, SampleBudget { drops: 5000, draws: 20 });
        assert!((cfg.radio.noise_power_dbm() + 78.97940008672038).abs() < 1e-9);
    }

    #[test]
    fn partial_file_fills_defaults() {
        let cfg = FileConfig::from_json(r#"{"blockage": {"density_per_m2": 1.0}, "engine": {"seed": 7}}"#)
            .unwrap();
        assert_eq!(cfg.blockage.density_per_m2, 1.0);
        assert_eq!(cfg.blockage.screen_width_m, 2.5);
        assert_eq!(cfg.engine.seed, 7);
        assert_eq!(cfg.radio, RadioSection::default());
    }

    #[test]
    fn unknown_fields_are_rejected() {
        assert!(FileConfig::from_json(r#"{"radio": {"power": 3}}"#).is_err());
        assert!(FileConfig::from_json(r#"{"extra": {}}"#).is_err());
    }

    #[test]
    fn explicit_drops_and_draws_win() {
        let mut cfg = FileConfig::default();
        cfg.engine.drops = Some(3);
        cfg.engine.draws = Some(5);
        assert_eq!(cfg.engine.budget(), SampleBudget { drops: 3, draws: 5 });
        cfg.engine.draws = None;
        assert_eq!(cfg.engine.budget(), SampleBudget::desk());
    }

    #[test]
    fn point_sets() {
        let mut cfg = FileConfig::default();
        assert_eq!(cfg.ue_points().unwrap().len(), 250);
        cfg.engine.subgrid = Some([5, 5]);
        assert_eq!(cfg.ue_points().unwrap().len(), 25);
    }

    #[test]
    fn megahertz_noise_floor() {
        let mut cfg = FileConfig::default();
        cfg.radio.bandwidth_unit = BandwidthUnit::Mhz;
        let radio = cfg.radio().unwrap();
        assert!((radio.noise_power_dbm() + 138.97940008672038).abs() < 1e-9);
    }
}
