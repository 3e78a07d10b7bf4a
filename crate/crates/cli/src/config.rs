//! Layered settings: compiled defaults, then `pcglab.toml`, then `PCGLAB_*`
//! environment variables, then command-line flags. Later layers win.

use std::path::{Path, PathBuf};

use anyhow::{Context, Result, bail};
use serde::Deserialize;

/// Tunables shared by the searching commands. Each field is the *effective*
/// value after all layers are applied.
#[derive(Clone, Debug)]
pub struct Settings {
    /// Weight cap: single-shot bound for `--max-weight`, escalation ceiling
    /// otherwise.
    pub max_weight: u64,
    pub min_weight: u64,
    pub workers: usize,
    pub deterministic: bool,
    /// Catalog directory for `reproduce`.
    pub data_dir: PathBuf,
}

impl Default for Settings {
    fn default() -> Self {
        Settings {
            max_weight: 8,
            min_weight: 1,
            workers: 1,
            deterministic: true,
            data_dir: PathBuf::from("data/nonpcg8"),
        }
    }
}

/// The optional config-file layer (all keys optional).
#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct FileLayer {
    max_weight: Option<u64>,
    min_weight: Option<u64>,
    workers: Option<usize>,
    deterministic: Option<bool>,
    data_dir: Option<PathBuf>,
}

/// Flag-level overrides, filled by clap (`None` = flag not given).
#[derive(Clone, Copy, Debug, Default)]
pub struct Overrides<'a> {
    pub max_weight: Option<u64>,
    pub min_weight: Option<u64>,
    pub workers: Option<usize>,
    pub deterministic: Option<bool>,
    pub data_dir: Option<&'a Path>,
}

fn file_layer(explicit: Option<&Path>) -> Result<FileLayer> {
    let path = match explicit {
        Some(p) => p.to_path_buf(),
        None => {
            let default = PathBuf::from("pcglab.toml");
            if !default.exists() {
                return Ok(FileLayer::default());
            }
            default
        }
    };
    let text = std::fs::read_to_string(&path)
        .with_context(|| format!("reading config file {}", path.display()))?;
    toml::from_str(&text).with_context(|| format!("parsing config file {}", path.display()))
}

fn env_u64(key: &str) -> Result<Option<u64>> {
    match std::env::var(key) {
        Ok(v) => Ok(Some(
            v.parse().with_context(|| format!("parsing {key}={v}"))?,
        )),
        Err(_) => Ok(None),
    }
}

fn env_usize(key: &str) -> Result<Option<usize>> {
    match std::env::var(key) {
        Ok(v) => Ok(Some(
            v.parse().with_context(|| format!("parsing {key}={v}"))?,
        )),
        Err(_) => Ok(None),
    }
}

fn env_bool(key: &str) -> Result<Option<bool>> {
    match std::env::var(key) {
        Ok(v) => match v.as_str() {
            "1" | "true" | "yes" => Ok(Some(true)),
            "0" | "false" | "no" => Ok(Some(false)),
            other => bail!("{key} must be a boolean, got {other:?}"),
        },
        Err(_) => Ok(None),
    }
}

/// Resolve the effective settings. `config_path` is the `--config` flag.
pub fn resolve(config_path: Option<&Path>, flags: Overrides<'_>) -> Result<Settings> {
    let mut s = Settings::default();

    let file = file_layer(config_path)?;
    if let Some(v) = file.max_weight {
        s.max_weight = v;
    }
    if let Some(v) = file.min_weight {
        s.min_weight = v;
    }
    if let Some(v) = file.workers {
        s.workers = v;
    }
    if let Some(v) = file.deterministic {
        s.deterministic = v;
    }
    if let Some(v) = file.data_dir {
        s.data_dir = v;
    }

    if let Some(v) = env_u64("PCGLAB_MAX_WEIGHT")? {
        s.max_weight = v;
    }
    if let Some(v) = env_u64("PCGLAB_MIN_WEIGHT")? {
        s.min_weight = v;
    }
    if let Some(v) = env_usize("PCGLAB_WORKERS")? {
        s.workers = v;
    }
    if let Some(v) = env_bool("PCGLAB_DETERMINISTIC")? {
        s.deterministic = v;
    }
    if let Ok(v) = std::env::var("PCGLAB_DATA_DIR") {
        s.data_dir = PathBuf::from(v);
    }

    if let Some(v) = flags.max_weight {
        s.max_weight = v;
    }
    if let Some(v) = flags.min_weight {
        s.min_weight = v;
    }
    if let Some(v) = flags.workers {
        s.workers = v;
    }
    if let Some(v) = flags.deterministic {
        s.deterministic = v;
    }
    if let Some(v) = flags.data_dir {
        s.data_dir = v.to_path_buf();
    }

    if s.min_weight > s.max_weight {
        bail!(
            "min weight {} exceeds max weight {}",
            s.min_weight,
            s.max_weight
        );
    }
    if s.workers == 0 {
        bail!("workers must be at least 1");
    }
    Ok(s)
}
