use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::spectral::{Taper, WindowSpec};

/// Low-pass cutoff for the downward-continuation step.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
#[serde(into = "KCutRepr", try_from = "KCutRepr")]
pub enum KCut {
    /// Derived from the geometry and `max_gain`.
    #[default]
    Auto,
    /// Fixed cutoff in rad/m.
    Fixed(f64),
}

#[derive(Serialize, Deserialize)]
#[serde(untagged)]
enum KCutRepr {
    Word(String),
    Value(f64),
}

impl From<KCut> for KCutRepr {
    fn from(k: KCut) -> Self {
        match k {
            KCut::Auto => KCutRepr::Word("auto".into()),
            KCut::Fixed(v) => KCutRepr::Value(v),
        }
    }
}

impl TryFrom<KCutRepr> for KCut {
    type Error = String;

    fn try_from(r: KCutRepr) -> std::result::Result<Self, String> {
        match r {
            KCutRepr::Word(w) if w == "auto" => Ok(KCut::Auto),
            KCutRepr::Word(w) => Err(format!("k_cut must be \"auto\" or a number, got {w:?}")),
            KCutRepr::Value(v) => Ok(KCut::Fixed(v)),
        }
    }
}

/// Treatment of the `k = 0` bin, where the continuation matrix has rank one.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum DcPolicy {
    /// Minimum-norm solution of `(δ₁/2)Ĵ₁ + (δ₂/2)Ĵ₂ = r̄`.
    #[default]
    MinimumNorm,
    /// Both DC bins set to zero.
    Zero,
    /// Offsets chosen so each reconstructed layer averages to zero over the
    /// border frame (the padding region, or the outer band of an unpadded
    /// grid).
    ZeroBorder,
}

/// Knobs of the two-layer reconstruction (and the padding used by the
/// spectral forward model).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct ReconstructionConfig {
    pub window: WindowSpec,
    pub pad_factor: usize,
    pub k_cut: KCut,
    pub rolloff: f64,
    pub k_taper: Taper,
    pub max_gain: f64,
    pub dc_policy: DcPolicy,
}

impl Default for ReconstructionConfig {
    fn default() -> Self {
        ReconstructionConfig {
            window: WindowSpec::Hann,
            pad_factor: 2,
            k_cut: KCut::Auto,
            rolloff: 0.2,
            k_taper: Taper::Cosine,
            max_gain: 1e4,
            dc_policy: DcPolicy::default(),
        }
    }
}

impl ReconstructionConfig {
    pub fn validate(&self) -> Result<()> {
        self.window.validate()?;
        if self.pad_factor < 1 {
            return Err(Error::InvalidParameter("pad_factor must be at least 1".into()));
        }
        if !(self.max_gain > 1.0) {
            return Err(Error::InvalidParameter(format!(
                "max_gain must exceed 1 (got {})",
                self.max_gain
            )));
        }
        if !(0.0..1.0).contains(&self.rolloff) {
            return Err(Error::InvalidParameter(format!(
                "rolloff must lie in [0, 1) (got {})",
                self.rolloff
            )));
        }
        if let KCut::Fixed(k) = self.k_cut {
            if !(k > 0.0 && k.is_finite()) {
                return Err(Error::InvalidParameter(format!("k_cut must be positive (got {k})")));
            }
        }
        Ok(())
    }
}
