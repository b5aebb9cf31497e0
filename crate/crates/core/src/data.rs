//! Bundled data files. Setting `K3LAT_DATA` to a directory makes every
//! lookup read from that directory instead.

use std::path::{Path, PathBuf};

use serde_json::Value;

use crate::{Error, Result};

pub const DATA_ENV: &str = "K3LAT_DATA";

macro_rules! bundle {
    ($($name:literal),* $(,)?) => {
        &[$(($name, include_str!(concat!("../data/", $name)))),*]
    };
}

const BUNDLED: &[(&str, &str)] = bundle!(
    "table1.json",
    "table2.json",
    "mp1.json",
    "mp9.json",
    "mp29.json",
    "mp30.json",
    "mp39.json",
    "mp64.json",
    "mp108.json",
    "ivstar_cover.json",
    "ex2_2.json",
    "mp9_relation.json",
    "mp30_relation.json",
    "ivstar_cover_relation.json",
    "enriques_p3.json",
    "enriques_p5.json",
    "enriques_mod2.json",
    "kummer.json",
    "ag23.json",
);

/// Names of the bundled files.
pub fn bundled_names() -> Vec<&'static str> {
    BUNDLED.iter().map(|(n, _)| *n).collect()
}

pub fn override_dir() -> Option<PathBuf> {
    std::env::var_os(DATA_ENV).filter(|v| !v.is_empty()).map(PathBuf::from)
}

/// Contents of a data file by bare name (`"mp108.json"`), honouring the
/// override directory.
pub fn read(name: &str) -> Result<String> {
    if let Some(dir) = override_dir() {
        return read_path(&dir.join(name));
    }
    BUNDLED
        .iter()
        .find(|(n, _)| *n == name)
        .map(|(_, text)| text.to_string())
        .ok_or_else(|| Error::UnknownName(name.to_string()))
}

pub fn read_json(name: &str) -> Result<Value> {
    Ok(serde_json::from_str(&read(name)?)?)
}

pub fn read_path(path: &Path) -> Result<String> {
    std::fs::read_to_string(path).map_err(|source| Error::Io {
        path: path.display().to_string(),
        source,
    })
}

/// Resolves a user-supplied reference: an existing file path, or a bundled
/// name with an optional `data/` prefix.
pub fn resolve(reference: &str) -> Result<String> {
    let path = Path::new(reference);
    if path.is_file() {
        return read_path(path);
    }
    let bare = reference.strip_prefix("data/").unwrap_or(reference);
    read(bare)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn every_bundled_file_parses() {
        for (name, text) in BUNDLED {
            serde_json::from_str::<Value>(text).unwrap_or_else(|e| panic!("{name}: {e}"));
        }
    }

    #[test]
    fn unknown_name() {
        if override_dir().is_none() {
            assert!(matches!(read("nope.json"), Err(Error::UnknownName(_))));
            assert!(resolve("data/mp108.json").is_ok());
        }
    }
}
