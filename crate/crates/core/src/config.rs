//! Pipeline configuration, read from and written to TOML.
//!
//! ```toml
//! [input]
//! kind = "organized"          # "unorganized", "organized" or "mesh"
//! fixed_normals = [[0.0, 0.0, 1.0]]   # optional, skips normal estimation
//!
//! [laplacian]                 # optional, organized input only
//! lambda = 1.0
//! kernel_size = 3
//! iterations = 2
//!
//! [bilateral]                 # optional, organized input only
//! sigma_length = 0.1
//! sigma_angle = 0.1
//! kernel_size = 3
//! iterations = 2
//!
//! [fastga]
//! level = 4
//! sample_pct = 1.0
//! v_min = 15
//! d_peak = 0.1
//! refine = true              # peak = mean of the votes around it
//!
//! [segmentation]
//! l_max = 0.1
//! ang_min = 0.94
//! ptp_max = 0.08
//! tri_min = 200
//! vertices_hole_min = 10
//!
//! [postprocess]
//! alpha = 0.0
//! beta_pos = 0.0
//! beta_neg = 0.0
//! gamma = 0.0
//! delta = 0.0
//!
//! [runtime]
//! threads = 0                 # 0 uses every core
//! ```
//!
//! Sections other than `[input]` may be left out or given in part; missing
//! keys take the defaults shown. Unknown keys are rejected.

use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::fastga::FastGaParams;
use crate::geometry::Vec3;
use crate::postprocess::PostprocessParams;
use crate::segmentation::SegmentationParams;
use crate::smoothing::{BilateralParams, LaplacianParams};
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum InputKind {
    Unorganized,
    Organized,
    Mesh,
}

impl std::fmt::Display for InputKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            InputKind::Unorganized => "unorganized",
            InputKind::Organized => "organized",
            InputKind::Mesh => "mesh",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InputConfig {
    pub kind: InputKind,
    /// Dominant normals to use instead of estimating them.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub fixed_normals: Option<Vec<[f64; 3]>>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RuntimeConfig {
    /// Worker threads; 0 lets the pool pick one per core.
    pub threads: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PipelineConfig {
    pub input: InputConfig,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub laplacian: Option<LaplacianParams>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub bilateral: Option<BilateralParams>,
    #[serde(default)]
    pub fastga: FastGaParams,
    #[serde(default)]
    pub segmentation: SegmentationParams,
    #[serde(default)]
    pub postprocess: PostprocessParams,
    #[serde(default)]
    pub runtime: RuntimeConfig,
}

impl PipelineConfig {
    /// Defaults for an input kind. Unorganized input gets the single
    /// upward normal it requires.
    pub fn new(kind: InputKind) -> Self {
        PipelineConfig {
            input: InputConfig {
                kind,
                fixed_normals: (kind == InputKind::Unorganized).then(|| vec![[0.0, 0.0, 1.0]]),
            },
            laplacian: None,
            bilateral: None,
            fastga: FastGaParams::default(),
            segmentation: SegmentationParams::default(),
            postprocess: PostprocessParams::default(),
            runtime: RuntimeConfig::default(),
        }
    }

    pub fn fixed_normals(&self) -> Option<Vec<Vec3>> {
        self.input
            .fixed_normals
            .as_ref()
            .map(|ns| ns.iter().map(|&n| Vec3::from_array(n).normalized()).collect())
    }

    pub fn validate(&self) -> Result<()> {
        if let Some(p) = &self.laplacian {
            p.validate()?;
        }
        if let Some(p) = &self.bilateral {
            p.validate()?;
        }
        self.fastga.validate()?;
        self.segmentation.validate()?;
        self.postprocess.validate()?;
        if self.input.kind != InputKind::Organized && (self.laplacian.is_some() || self.bilateral.is_some()) {
            return Err(Error::InvalidParameter(format!(
                "smoothing applies to organized input only, not {}",
                self.input.kind
            )));
        }
        if let Some(ns) = &self.input.fixed_normals {
            if ns.iter().any(|n| !(Vec3::from_array(*n).norm() > 0.0 && Vec3::from_array(*n).is_finite())) {
                return Err(Error::InvalidParameter("fixed normals must be finite and non-zero".into()));
            }
        }
        if self.input.kind == InputKind::Unorganized {
            let up = matches!(self.fixed_normals().as_deref(), Some([n]) if n.distance(Vec3::Z) < 1e-12);
            if !up {
                return Err(Error::InvalidParameter(
                    "unorganized input needs exactly one fixed normal [0, 0, 1]; rotate the cloud so its planes face +z".into(),
                ));
            }
        }
        Ok(())
    }

    pub fn from_toml(text: &str) -> Result<Self> {
        let config: PipelineConfig = toml::from_str(text).map_err(|e| {
            let location = match e.span() {
                Some(span) => format!("line {}", text[..span.start].matches('\n').count() + 1),
                None => "config".to_string(),
            };
            Error::parse(location, e.message().to_string())
        })?;
        config.validate()?;
        Ok(config)
    }

    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("configuration always serializes")
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)?;
        PipelineConfig::from_toml(&text).map_err(|e| match e {
            Error::Parse { location, message } => Error::Parse {
                location: format!("{}: {location}", path.display()),
                message,
            },
            other => other,
        })
    }
}
