//! TOML run configuration.

use std::path::Path;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::map_model::{parse_decimal, DomainDisk, ExactComplex, MapError, PolynomialMap};
use crate::puzzle_tree::ResolutionPolicy;

#[derive(Debug, Error)]
pub enum ConfigError {
    #[error("cannot read {path}: {source}")]
    Io {
        path: String,
        source: std::io::Error,
    },
    #[error("bad config: {0}")]
    Toml(#[from] toml::de::Error),
    #[error(transparent)]
    Map(#[from] MapError),
    #[error("invalid config: {0}")]
    Invalid(String),
}

/// A coefficient written either as `"re"` or `["re", "im"]`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Coefficient {
    Real(String),
    Complex([String; 2]),
}

impl Coefficient {
    fn parse(&self) -> Result<ExactComplex, MapError> {
        match self {
            Coefficient::Real(re) => ExactComplex::parse(re, "0"),
            Coefficient::Complex([re, im]) => ExactComplex::parse(re, im),
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BudgetConfig {
    pub base_resolution: Option<u32>,
    pub max_boxes: Option<usize>,
    pub max_refine: Option<u32>,
    pub tighten: Option<u32>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MapConfig {
    /// Ascending order: constant term first, leading coefficient last.
    pub coefficients: Vec<Coefficient>,
    #[serde(default)]
    pub disk_center: Option<Coefficient>,
    /// A decimal, or `"auto"` for the escape radius.
    #[serde(default = "auto")]
    pub disk_radius: String,
    #[serde(default)]
    pub depth: Option<usize>,
    #[serde(default)]
    pub horizon: Option<usize>,
    #[serde(default)]
    pub budget: BudgetConfig,
    /// Radius factor for retries while `U'` touches the boundary of `U`.
    #[serde(default)]
    pub shrink: Option<String>,
    #[serde(default)]
    pub shrink_attempts: Option<usize>,
}

fn auto() -> String {
    "auto".into()
}

impl MapConfig {
    pub fn from_toml_str(text: &str) -> Result<Self, ConfigError> {
        let cfg: MapConfig = toml::from_str(text)?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn load(path: &Path) -> Result<Self, ConfigError> {
        let text = std::fs::read_to_string(path).map_err(|source| ConfigError::Io {
            path: path.display().to_string(),
            source,
        })?;
        Self::from_toml_str(&text)
    }

    fn validate(&self) -> Result<(), ConfigError> {
        let b = &self.budget;
        if b.max_boxes == Some(0) || b.max_refine == Some(0) {
            return Err(ConfigError::Invalid("budgets must be positive".into()));
        }
        if self.depth == Some(0) {
            return Err(ConfigError::Invalid("depth must be positive".into()));
        }
        if let Some(f) = &self.shrink {
            let f = parse_decimal(f)?;
            let zero = num_rational::BigRational::from_integer(0.into());
            let one = num_rational::BigRational::from_integer(1.into());
            if f <= zero || f >= one {
                return Err(ConfigError::Invalid("shrink must lie in (0, 1)".into()));
            }
        }
        self.map()?;
        Ok(())
    }

    pub fn map(&self) -> Result<PolynomialMap, MapError> {
        let coeffs = self
            .coefficients
            .iter()
            .map(Coefficient::parse)
            .collect::<Result<Vec<_>, _>>()?;
        PolynomialMap::new(coeffs)
    }

    pub fn disk(&self, map: &PolynomialMap) -> Result<DomainDisk, MapError> {
        let center = match &self.disk_center {
            Some(c) => c.parse()?,
            None => ExactComplex::zero(),
        };
        if self.disk_radius.trim().eq_ignore_ascii_case("auto") {
            let auto = DomainDisk::default_for(map);
            DomainDisk::new(center, auto.radius)
        } else {
            DomainDisk::new(center, parse_decimal(&self.disk_radius)?)
        }
    }

    pub fn policy(&self) -> ResolutionPolicy {
        let mut p = ResolutionPolicy::default();
        let b = &self.budget;
        if let Some(x) = b.base_resolution {
            p.base_resolution = x;
        }
        if let Some(x) = b.max_boxes {
            p.max_boxes = x;
        }
        if let Some(x) = b.max_refine {
            p.max_refine = x;
        }
        if let Some(x) = b.tighten {
            p.tighten = x;
        }
        if let Some(h) = self.horizon {
            p.horizon = h;
        }
        p
    }

    pub fn shrink_factor(&self) -> Option<num_rational::BigRational> {
        self.shrink.as_deref().and_then(|s| parse_decimal(s).ok())
    }
}

/// `z^2 - 6` on `D(0, 4)`.
pub const QUADRATIC_TOML: &str = r#"coefficients = ["-6", "0", "1"]
disk_radius = "4"
depth = 10
"#;

/// `z^3 - 6.75 z + 3.75` on `D(0, 6)`; the critical point 1.5 maps to the
/// fixed point -3.
pub const CUBIC_TOML: &str = r#"coefficients = ["3.75", "-6.75", "0", "1"]
disk_radius = "6"
depth = 8

[budget]
max_boxes = 16000000
"#;
