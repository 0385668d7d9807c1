use std::fs;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::modem::{LlrMode, Pam};
use crate::pc::SabmParams;
use crate::scc::DecoderKind;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize, Default)]
#[serde(rename_all = "lowercase")]
pub enum Scheme {
    #[default]
    Pc,
    Scc,
}

impl Scheme {
    pub fn as_str(self) -> &'static str {
        match self {
            Self::Pc => "pc",
            Self::Scc => "scc",
        }
    }
}

/// Staircase decoding window.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SccSettings {
    /// Window size L in blocks.
    pub window: usize,
    /// Sweeps ℓ per window.
    pub iterations: usize,
    /// Blocks counted per simulated chain; each chain also carries L − 1
    /// trailing blocks that only serve to close the last windows.
    pub chain_blocks: usize,
}

impl Default for SccSettings {
    fn default() -> Self {
        Self {
            window: 5,
            iterations: 4,
            chain_blocks: 16,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct StopRule {
    /// Stop a point once this many blocks were decoded in error.
    pub min_word_errors: u64,
    /// ... or once this many blocks were simulated.
    pub max_blocks: u64,
}

impl Default for StopRule {
    fn default() -> Self {
        Self {
            min_word_errors: 100,
            max_blocks: 1_000_000,
        }
    }
}

/// Everything that determines a simulation run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SimConfig {
    pub scheme: Scheme,
    /// PAM order M.
    pub mod_order: usize,
    pub snr_points: Vec<f64>,
    pub decoder: DecoderKind,
    pub llr_mode: LlrMode,
    pub sabm: SabmParams,
    pub scc: SccSettings,
    pub stop: StopRule,
    pub master_seed: u64,
    pub out_path: Option<PathBuf>,
    /// Worker threads; `None` uses all cores. Results do not depend on it.
    pub workers: Option<usize>,
    /// Fill the `wall_seconds` CSV column. Off by default so CSVs are reproducible.
    pub record_timing: bool,
}

impl Default for SimConfig {
    fn default() -> Self {
        Self {
            scheme: Scheme::Pc,
            mod_order: 2,
            snr_points: Vec::new(),
            decoder: DecoderKind::Sabm,
            llr_mode: LlrMode::Exact,
            sabm: SabmParams::default(),
            scc: SccSettings::default(),
            stop: StopRule::default(),
            master_seed: 1,
            out_path: None,
            workers: None,
            record_timing: false,
        }
    }
}

impl SimConfig {
    pub fn from_toml_str(text: &str) -> Result<Self> {
        Ok(toml::from_str(text)?)
    }

    pub fn from_file(path: &Path) -> Result<Self> {
        Self::from_toml_str(&fs::read_to_string(path)?)
    }

    pub fn to_toml_string(&self) -> String {
        toml::to_string(self).expect("config serializes")
    }

    pub fn validate(&self) -> Result<()> {
        Pam::new(self.mod_order)?;
        if self.snr_points.is_empty() {
            return Err(Error::Config("at least one SNR point is required".into()));
        }
        if let Some(bad) = self.snr_points.iter().find(|s| !s.is_finite()) {
            return Err(Error::Config(format!("SNR point {bad} is not finite")));
        }
        if self.stop.min_word_errors < 1 {
            return Err(Error::Config("min_word_errors must be >= 1".into()));
        }
        if self.stop.max_blocks < 1 {
            return Err(Error::Config("max_blocks must be >= 1".into()));
        }
        if self.workers == Some(0) {
            return Err(Error::Config("workers must be >= 1".into()));
        }
        self.sabm.validate()?;
        if self.scheme == Scheme::Scc {
            if self.scc.window < 2 {
                return Err(Error::Config(format!(
                    "window size L={} must be >= 2",
                    self.scc.window
                )));
            }
            if self.scc.iterations == 0 || self.scc.chain_blocks == 0 {
                return Err(Error::Config(
                    "scc iterations and chain_blocks must be >= 1".into(),
                ));
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn toml_round_trip_and_partial_files() {
        let cfg = SimConfig {
            snr_points: vec![5.5, 6.0],
            out_path: Some("out.csv".into()),
            ..SimConfig::default()
        };
        let back = SimConfig::from_toml_str(&cfg.to_toml_string()).unwrap();
        assert_eq!(back, cfg);

        let partial = SimConfig::from_toml_str(
            "scheme = \"scc\"\nsnr_points = [4.0]\nllr_mode = \"maxlog\"\n[sabm]\ndelta = 3.5\n[scc]\nwindow = 7\n",
        )
        .unwrap();
        assert_eq!(partial.scheme, Scheme::Scc);
        assert_eq!(partial.llr_mode, LlrMode::MaxLog);
        assert_eq!(partial.sabm.delta, 3.5);
        assert_eq!(partial.sabm.total_iters, 10);
        assert_eq!(partial.scc.window, 7);
        assert_eq!(partial.scc.iterations, 4);
        assert!(SimConfig::from_toml_str("bogus = 1").is_err());
    }

    #[test]
    fn validation() {
        let ok = SimConfig {
            snr_points: vec![6.0],
            ..SimConfig::default()
        };
        assert!(ok.validate().is_ok());
        assert!(SimConfig::default().validate().is_err());
        for bad in [
            SimConfig { mod_order: 3, ..ok.clone() },
            SimConfig { snr_points: vec![f64::NAN], ..ok.clone() },
            SimConfig { stop: StopRule { min_word_errors: 0, max_blocks: 1 }, ..ok.clone() },
            SimConfig { stop: StopRule { min_word_errors: 1, max_blocks: 0 }, ..ok.clone() },
            SimConfig { scheme: Scheme::Scc, scc: SccSettings { window: 1, ..SccSettings::default() }, ..ok.clone() },
            SimConfig { workers: Some(0), ..ok.clone() },
        ] {
            assert!(matches!(bad.validate(), Err(Error::Config(_))), "{bad:?}");
        }
    }
}
