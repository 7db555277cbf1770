use super::SynthError;
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DimMode {
    UniformRange,
    Bcdstab,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ContentMode {
    Deterministic,
    External,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct UniformDims {
    pub min_dim: usize,
    pub max_dim: usize,
}

impl Default for UniformDims {
    fn default() -> Self {
        UniformDims { min_dim: 4, max_dim: 20 }
    }
}

/// Rejection-sampled dimensions: a cell count from a rounded normal, a
/// uniform row count, and columns by integer division.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct BcdstabDims {
    /// No canonical value; configurable.
    pub cell_count_mean: f64,
    pub cell_count_sd: f64,
    pub cell_bounds: [usize; 2],
    pub row_bounds: [usize; 2],
    pub col_bounds: [usize; 2],
    pub max_retries: usize,
}

impl Default for BcdstabDims {
    fn default() -> Self {
        BcdstabDims {
            cell_count_mean: 300.0,
            cell_count_sd: 250.0,
            cell_bounds: [4, 1000],
            row_bounds: [2, 100],
            col_bounds: [2, 15],
            max_retries: 10_000,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SynthConfig {
    pub dim_mode: DimMode,
    pub uniform: UniformDims,
    pub bcdstab: BcdstabDims,
    pub n_blocks: usize,
    pub merge_injections: usize,
    pub content_mode: ContentMode,
    pub max_validation_retries: usize,
    /// Fraction of cells the offline filler leaves empty.
    pub empty_fraction: f64,
    /// Block draws per table before giving up on a splice without implicit
    /// lines.
    pub clean_splice_retries: usize,
    pub seed: u64,
}

impl Default for SynthConfig {
    fn default() -> Self {
        SynthConfig {
            dim_mode: DimMode::UniformRange,
            uniform: UniformDims::default(),
            bcdstab: BcdstabDims::default(),
            n_blocks: 4,
            merge_injections: 2,
            content_mode: ContentMode::Deterministic,
            max_validation_retries: 3,
            empty_fraction: 0.1,
            clean_splice_retries: 64,
            seed: 0,
        }
    }
}

impl SynthConfig {
    pub fn from_toml_str(text: &str) -> Result<Self, SynthError> {
        let cfg: SynthConfig = toml::from_str(text).map_err(|e| SynthError::Config(e.to_string()))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn to_toml_string(&self) -> String {
        toml::to_string(self).expect("config serializes")
    }

    pub fn validate(&self) -> Result<(), SynthError> {
        let bad = |m: String| Err(SynthError::Config(m));
        let u = &self.uniform;
        if u.min_dim < 4 || u.min_dim > u.max_dim {
            return bad(format!("uniform dims need 4 <= min_dim <= max_dim, got {}..{}", u.min_dim, u.max_dim));
        }
        let b = &self.bcdstab;
        for (name, [lo, hi]) in [("cell", b.cell_bounds), ("row", b.row_bounds), ("col", b.col_bounds)] {
            if lo == 0 || lo > hi {
                return bad(format!("{name}_bounds [{lo}, {hi}] must be positive and ordered"));
            }
        }
        if !b.cell_count_mean.is_finite() || !b.cell_count_sd.is_finite() || b.cell_count_sd < 0.0 {
            return bad("cell count mean and sd must be finite with sd >= 0".into());
        }
        if b.max_retries == 0 {
            return bad("bcdstab.max_retries must be positive".into());
        }
        if self.n_blocks == 0 {
            return bad("n_blocks must be positive".into());
        }
        if !(0.0..=1.0).contains(&self.empty_fraction) {
            return bad(format!("empty_fraction {} outside [0, 1]", self.empty_fraction));
        }
        if self.clean_splice_retries == 0 {
            return bad("clean_splice_retries must be positive".into());
        }
        Ok(())
    }
}
