//! Study configuration: one field, three networks, and every tuning knob.
//!
//! ```toml
//! field = "statistics"
//! seed = 1              # base seed for permutation tests and Louvain
//! permutations = 99999
//! alpha = 0.01
//! family_size = 3
//! centering = "classical"   # or "unbiased"
//! empty_policy = "maximal"  # or "identical"
//! restarts = 10
//!
//! [ie]
//! path = "ie.csv"
//! kind = "bipartite"        # bipartite | net | edges
//! resolution = 1.0
//!
//! [ia]
//! path = "ia.net"
//! kind = "net"
//! sizes = "ia_sizes.csv"    # journal,size; needed for Jaccard on one-mode input
//! resolution = 0.8
//!
//! [cc]
//! path = "cc.csv"
//! kind = "bipartite"
//! ```
//!
//! Relative paths resolve against the config file's directory.

use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::dcor::Centering;
use crate::dissim::EmptyPolicy;
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum InputKind {
    /// `journal,entity` CSV, projected by this tool.
    Bipartite,
    /// Pajek `.net` one-mode network.
    Net,
    /// `source,target,weight` CSV one-mode network.
    Edges,
}

/// The three journal networks of a field.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Network {
    Ie,
    Ia,
    Cc,
}

impl Network {
    pub const ALL: [Network; 3] = [Network::Ie, Network::Ia, Network::Cc];

    /// Lower-case file stem, e.g. `ie`.
    pub fn key(self) -> &'static str {
        match self {
            Network::Ie => "ie",
            Network::Ia => "ia",
            Network::Cc => "cc",
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Network::Ie => "IE",
            Network::Ia => "IA",
            Network::Cc => "CC",
        }
    }
}

impl std::str::FromStr for Network {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "ie" => Ok(Network::Ie),
            "ia" => Ok(Network::Ia),
            "cc" => Ok(Network::Cc),
            other => Err(Error::Invalid(format!("unknown network kind {other:?}"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct NetworkInput {
    pub path: PathBuf,
    pub kind: InputKind,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sizes: Option<PathBuf>,
    #[serde(default = "default_resolution")]
    pub resolution: f64,
    /// Louvain seed; falls back to the study seed.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub restarts: Option<usize>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StudyConfig {
    pub field: String,
    #[serde(default = "default_seed")]
    pub seed: u64,
    #[serde(default = "default_permutations")]
    pub permutations: u64,
    #[serde(default = "default_alpha")]
    pub alpha: f64,
    #[serde(default = "default_family_size")]
    pub family_size: usize,
    #[serde(default)]
    pub centering: Centering,
    #[serde(default)]
    pub empty_policy: EmptyPolicy,
    #[serde(default = "default_restarts")]
    pub restarts: usize,
    pub ie: NetworkInput,
    pub ia: NetworkInput,
    pub cc: NetworkInput,
    /// Directory that relative input paths are resolved against.
    #[serde(skip)]
    pub base_dir: PathBuf,
}

fn default_resolution() -> f64 {
    1.0
}
fn default_seed() -> u64 {
    1
}
fn default_permutations() -> u64 {
    99_999
}
fn default_alpha() -> f64 {
    0.01
}
fn default_family_size() -> usize {
    3
}
fn default_restarts() -> usize {
    10
}

impl StudyConfig {
    pub fn from_toml(text: &str) -> Result<Self> {
        let cfg: StudyConfig = toml::from_str(text).map_err(|e| Error::Config(e.to_string()))?;
        cfg.check()?;
        Ok(cfg)
    }

    /// Reads a config file; relative input paths will resolve against its
    /// directory.
    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let text = crate::ingest::read_text(path)?;
        let mut cfg = Self::from_toml(&text)?;
        cfg.base_dir = path.parent().unwrap_or(Path::new("")).to_path_buf();
        Ok(cfg)
    }

    /// `path` as seen from the working directory.
    pub fn resolve(&self, path: &Path) -> PathBuf {
        self.base_dir.join(path)
    }

    pub fn input(&self, net: Network) -> &NetworkInput {
        match net {
            Network::Ie => &self.ie,
            Network::Ia => &self.ia,
            Network::Cc => &self.cc,
        }
    }

    pub fn louvain_seed(&self, net: Network) -> u64 {
        self.input(net).seed.unwrap_or(self.seed)
    }

    pub fn louvain_restarts(&self, net: Network) -> usize {
        self.input(net).restarts.unwrap_or(self.restarts)
    }

    pub fn check(&self) -> Result<()> {
        if !(self.alpha > 0.0 && self.alpha < 1.0) {
            return Err(Error::Config(format!(
                "alpha must lie in (0,1), got {}",
                self.alpha
            )));
        }
        if self.permutations < 1 {
            return Err(Error::Config("permutations must be ≥ 1".into()));
        }
        if self.family_size < 1 {
            return Err(Error::Config("family_size must be ≥ 1".into()));
        }
        for net in Network::ALL {
            let input = self.input(net);
            if !input.resolution.is_finite() || input.resolution <= 0.0 {
                return Err(Error::Config(format!(
                    "{}: resolution must be > 0, got {}",
                    net.key(),
                    input.resolution
                )));
            }
            if self.louvain_restarts(net) < 1 {
                return Err(Error::Config(format!(
                    "{}: restarts must be ≥ 1",
                    net.key()
                )));
            }
            if input.sizes.is_some() && input.kind == InputKind::Bipartite {
                return Err(Error::Config(format!(
                    "{}: sizes only apply to one-mode inputs",
                    net.key()
                )));
            }
        }
        Ok(())
    }
}
