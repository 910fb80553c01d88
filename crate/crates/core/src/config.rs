//! Experiment files.
//!
//! An experiment file is TOML with an optional `[output]` table and one
//! `[experiment.<name>]` table per curve:
//!
//! ```toml
//! [output]
//! dir = "results"
//!
//! [experiment.tx2_qpsk_r4]
//! t = 2
//! r = 4
//! modulation = "QPSK"     # BPSK, QPSK, 8PSK, 16QAM
//! rule = "Rule1"          # Rule1, Rule2, Random (default Rule1)
//! metric = "mean_amplitude"  # or combining_gain
//! snr_db = [0, 5, 10, 15, 20]
//! beta1 = 1.0             # default 1.0
//! beta2 = 1.0             # default 1.0
//! trials = 200000
//! max_errors = 200        # default 200, 0 disables early stop
//! seed = 1
//! ```
//!
//! The resolved form, with every default written out, doubles as the run
//! manifest and can be fed back to reproduce a run.

use std::collections::BTreeMap;
use std::path::PathBuf;

use serde::{Deserialize, Serialize};

use crate::simulator::SimConfig;
use crate::{Error, Result};

fn default_dir() -> PathBuf {
    PathBuf::from("results")
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutputSettings {
    #[serde(default = "default_dir")]
    pub dir: PathBuf,
}

impl Default for OutputSettings {
    fn default() -> Self {
        Self { dir: default_dir() }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentFile {
    #[serde(default)]
    pub output: OutputSettings,
    /// Experiments by name; TOML rejects duplicate names.
    pub experiment: BTreeMap<String, SimConfig>,
}

impl ExperimentFile {
    pub fn parse(text: &str) -> Result<Self> {
        let file: Self = toml::from_str(text).map_err(|e| Error::InvalidConfig(e.to_string()))?;
        file.validate()?;
        Ok(file)
    }

    pub fn validate(&self) -> Result<()> {
        if self.experiment.is_empty() {
            return Err(Error::InvalidConfig("no [experiment.<name>] tables".into()));
        }
        for (name, cfg) in &self.experiment {
            if name.is_empty() || name.contains(['/', '\\']) {
                return Err(Error::InvalidConfig(format!(
                    "experiment name '{name}' cannot be used as a file name"
                )));
            }
            cfg.validate()
                .map_err(|e| Error::InvalidConfig(format!("experiment '{name}': {e}")))?;
        }
        Ok(())
    }

    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("experiment files always serialize")
    }
}
