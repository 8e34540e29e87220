//! Run configuration. Lengths are given in millimetres in the file and
//! converted to metres on load.

use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::{Layer, StackGeometry};
use crate::inverse::ReconstructionConfig;
use crate::scenarios::{GridSpec, StripSpec};

use super::gridfile::GridFormat;

const MM: f64 = 1e-3;

/// Stack placement, either as separations (a centred stack) or as absolute
/// heights. Absolute heights may put both planes on one side, which only
/// `diagnose` accepts.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum GeometryConfig {
    Separations(Separations),
    Absolute(AbsolutePlacement),
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Separations {
    /// Centre-to-centre distance between S1 and S2.
    pub spacing_mm: f64,
    /// M1 to the centre of S1.
    pub dist1_mm: f64,
    /// M2 to the centre of S2.
    pub dist2_mm: f64,
    pub delta1_mm: f64,
    pub delta2_mm: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AbsolutePlacement {
    pub z_s1_mm: f64,
    pub z_s2_mm: f64,
    pub z_m1_mm: f64,
    pub z_m2_mm: f64,
    pub delta1_mm: f64,
    pub delta2_mm: f64,
}

impl GeometryConfig {
    pub fn to_geometry(&self) -> StackGeometry<f64> {
        match *self {
            GeometryConfig::Separations(s) => StackGeometry::from_separations(
                s.spacing_mm * MM,
                s.dist1_mm * MM,
                s.dist2_mm * MM,
                s.delta1_mm * MM,
                s.delta2_mm * MM,
            ),
            GeometryConfig::Absolute(a) => StackGeometry {
                z_s1: a.z_s1_mm * MM,
                z_s2: a.z_s2_mm * MM,
                z_m1: a.z_m1_mm * MM,
                z_m2: a.z_m2_mm * MM,
                delta1: a.delta1_mm * MM,
                delta2: a.delta2_mm * MM,
            },
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct GridConfig {
    pub nx: usize,
    pub ny: usize,
    pub extent_x_mm: f64,
    pub extent_y_mm: f64,
}

impl Default for GridConfig {
    fn default() -> Self {
        GridConfig {
            nx: 256,
            ny: 256,
            extent_x_mm: 400.0,
            extent_y_mm: 400.0,
        }
    }
}

impl GridConfig {
    pub fn to_grid(&self) -> GridSpec<f64> {
        GridSpec {
            nx: self.nx,
            ny: self.ny,
            extent_x: self.extent_x_mm * MM,
            extent_y: self.extent_y_mm * MM,
        }
    }

    fn validate(&self) -> Result<()> {
        if self.nx < 2 || self.ny < 2 {
            return Err(Error::Config(format!("grid must be at least 2×2 (got {}×{})", self.nx, self.ny)));
        }
        if !(self.extent_x_mm > 0.0 && self.extent_y_mm > 0.0) || !self.extent_x_mm.is_finite() || !self.extent_y_mm.is_finite() {
            return Err(Error::Config("grid extents must be positive".into()));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StripConfig {
    pub layer: Layer,
    pub current_a: f64,
    pub width_mm: f64,
    /// Defaults to 60% of the grid's y extent.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub length_mm: Option<f64>,
    #[serde(default)]
    pub center_x_mm: f64,
    #[serde(default)]
    pub center_y_mm: f64,
    #[serde(default = "default_smoothing")]
    pub edge_smoothing_mm: f64,
}

fn default_smoothing() -> f64 {
    5.0
}

impl StripConfig {
    pub fn to_strip(&self, grid: &GridConfig) -> StripSpec<f64> {
        StripSpec {
            layer: self.layer,
            total_current: self.current_a,
            width_x: self.width_mm * MM,
            length_y: self.length_mm.unwrap_or(0.6 * grid.extent_y_mm) * MM,
            center: (self.center_x_mm * MM, self.center_y_mm * MM),
            edge_smoothing: self.edge_smoothing_mm * MM,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct ScenarioConfig {
    pub strips: Vec<StripConfig>,
    /// Standard deviation of additive field noise (T).
    pub noise_sigma_t: f64,
    /// Noise seed of plane M1; M2 uses `seed + 1`.
    pub seed: u64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct DiagnoseConfig {
    pub k_min: f64,
    pub k_max: f64,
    pub samples: usize,
}

impl Default for DiagnoseConfig {
    fn default() -> Self {
        DiagnoseConfig {
            k_min: 1.0,
            k_max: 1e4,
            samples: 25,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct OutputConfig {
    /// Not recorded in manifests, so a replay may write elsewhere.
    #[serde(skip_serializing)]
    pub dir: PathBuf,
    pub format: GridFormat,
}

impl Default for OutputConfig {
    fn default() -> Self {
        OutputConfig {
            dir: PathBuf::from("out"),
            format: GridFormat::Binary,
        }
    }
}

/// Everything a run needs, as read from TOML or from a run manifest.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub geometry: GeometryConfig,
    #[serde(default)]
    pub grid: GridConfig,
    #[serde(default)]
    pub scenario: ScenarioConfig,
    #[serde(default)]
    pub reconstruction: ReconstructionConfig,
    #[serde(default)]
    pub diagnose: DiagnoseConfig,
    #[serde(default)]
    pub output: OutputConfig,
}

/// Manifest wrapper: only the `config` member is read back.
#[derive(Deserialize)]
struct ManifestConfig {
    config: RunConfig,
}

impl RunConfig {
    pub fn from_toml_str(text: &str) -> Result<Self> {
        let cfg: RunConfig = toml::from_str(text).map_err(|e| Error::Config(e.to_string()))?;
        cfg.validate()?;
        Ok(cfg)
    }

    /// Accepts the `config` member of a run manifest.
    pub fn from_manifest_str(text: &str) -> Result<Self> {
        let m: ManifestConfig = serde_json::from_str(text).map_err(|e| Error::Config(e.to_string()))?;
        m.config.validate()?;
        Ok(m.config)
    }

    /// Loads a `.toml` file, or a `.json` run manifest for replays.
    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        match path.extension().and_then(|e| e.to_str()) {
            Some("json") => Self::from_manifest_str(&text),
            _ => Self::from_toml_str(&text),
        }
    }

    pub fn validate(&self) -> Result<()> {
        self.grid.validate()?;
        self.reconstruction.validate()?;
        let s = &self.scenario;
        if !(s.noise_sigma_t >= 0.0 && s.noise_sigma_t.is_finite()) {
            return Err(Error::Config(format!("noise_sigma_t must be non-negative (got {})", s.noise_sigma_t)));
        }
        let d = &self.diagnose;
        if !(d.k_min > 0.0 && d.k_max > d.k_min && d.k_max.is_finite()) || d.samples == 0 {
            return Err(Error::Config("diagnose needs 0 < k_min < k_max and samples ≥ 1".into()));
        }
        Ok(())
    }

    pub fn strips(&self) -> Vec<StripSpec<f64>> {
        self.scenario.strips.iter().map(|s| s.to_strip(&self.grid)).collect()
    }
}
