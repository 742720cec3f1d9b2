use std::io::Write;

use super::config::LoadedConfig;
use super::{SampleArgs, EXIT_OK};
use crate::ensembles::RngState;
use crate::error::{Error, Result};

pub(super) fn command(a: &SampleArgs, out: &mut dyn Write) -> Result<i32> {
    let loaded = LoadedConfig::from_path(&a.config)?;
    let ens = match &a.ensemble {
        Some(name) => loaded
            .config
            .ensembles
            .iter()
            .find(|e| &e.name == name)
            .ok_or_else(|| Error::Config(format!("no ensemble named `{name}`")))?,
        None => loaded
            .config
            .ensembles
            .first()
            .ok_or_else(|| Error::Config("config has no ensembles".into()))?,
    };
    let e = loaded.resolve_spec(ens)?.prepare()?;
    let seed = a.seed.or(ens.seed).unwrap_or(loaded.config.seed);
    if let Some(dir) = &a.out_dir {
        std::fs::create_dir_all(dir)?;
    }
    for k in 0..a.count {
        let draw = e.sample(RngState::new(seed, k as u64))?;
        match &a.out_dir {
            Some(dir) => draw.write_pair(&dir.join(format!("draw_{k}")))?,
            None => writeln!(out, "{}", serde_json::to_string(&draw)?)?,
        }
    }
    Ok(EXIT_OK)
}
