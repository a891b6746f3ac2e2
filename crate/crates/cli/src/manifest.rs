//! Corpus manifest: one TOML file listing the dApps to analyse.
//!
//! ```toml
//! [[dapp]]
//! name = "toy-auction"
//! blockchain = "Ethereum"
//! category = "Marketplaces"
//! source_root = "auction"        # relative to the manifest file
//! notes = "optional free text"
//! ```

use std::fs;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum ManifestError {
    #[error("cannot read manifest {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("cannot parse manifest: {0}")]
    Parse(#[from] toml::de::Error),
    #[error("manifest lists no dApps")]
    Empty,
    #[error("duplicate dApp name `{0}`")]
    DuplicateName(String),
    #[error("dApp `{name}`: source root {root} does not exist")]
    MissingRoot { name: String, root: PathBuf },
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct DappManifest {
    pub name: String,
    pub blockchain: String,
    pub category: String,
    pub source_root: PathBuf,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub notes: Option<String>,
}

impl DappManifest {
    /// Directory-safe form of the dApp name.
    pub fn dir_name(&self) -> String {
        self.name
            .chars()
            .map(|c| if c.is_ascii_alphanumeric() || matches!(c, '-' | '_' | '.') { c } else { '_' })
            .collect()
    }
}

#[derive(Debug, Clone, Deserialize)]
struct ManifestFile {
    #[serde(default, rename = "dapp")]
    dapps: Vec<DappManifest>,
}

/// Load and validate a manifest; relative source roots are resolved against
/// the manifest's directory. Source roots are only required to exist when
/// `require_roots` is set (extraction needs them, later stages do not).
pub fn load_manifest(path: &Path, require_roots: bool) -> Result<Vec<DappManifest>, ManifestError> {
    let text = fs::read_to_string(path).map_err(|source| ManifestError::Io {
        path: path.to_path_buf(),
        source,
    })?;
    let parsed: ManifestFile = toml::from_str(&text)?;
    if parsed.dapps.is_empty() {
        return Err(ManifestError::Empty);
    }
    let base = path.parent().unwrap_or(Path::new("."));
    let mut dapps = parsed.dapps;
    for d in &mut dapps {
        if d.source_root.is_relative() {
            d.source_root = base.join(&d.source_root);
        }
    }
    let mut seen = std::collections::HashSet::new();
    for d in &dapps {
        if !seen.insert(d.name.clone()) {
            return Err(ManifestError::DuplicateName(d.name.clone()));
        }
        if require_roots && !d.source_root.is_dir() {
            return Err(ManifestError::MissingRoot {
                name: d.name.clone(),
                root: d.source_root.clone(),
            });
        }
    }
    Ok(dapps)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::fs;

    #[test]
    fn loads_and_resolves_relative_roots() {
        let dir = tempfile::tempdir().unwrap();
        fs::create_dir(dir.path().join("src")).unwrap();
        let manifest = dir.path().join("corpus.toml");
        fs::write(
            &manifest,
            "[[dapp]]\nname = \"a\"\nblockchain = \"Ethereum\"\ncategory = \"DeFi\"\nsource_root = \"src\"\n",
        )
        .unwrap();
        let dapps = load_manifest(&manifest, true).unwrap();
        assert_eq!(dapps.len(), 1);
        assert!(dapps[0].source_root.is_dir());
    }

    #[test]
    fn empty_manifest_is_an_error() {
        let dir = tempfile::tempdir().unwrap();
        let manifest = dir.path().join("corpus.toml");
        fs::write(&manifest, "").unwrap();
        assert!(matches!(load_manifest(&manifest, false), Err(ManifestError::Empty)));
    }

    #[test]
    fn duplicate_names_rejected() {
        let dir = tempfile::tempdir().unwrap();
        let manifest = dir.path().join("corpus.toml");
        fs::write(
            &manifest,
            "[[dapp]]\nname = \"a\"\nblockchain = \"E\"\ncategory = \"C\"\nsource_root = \"x\"\n\
             [[dapp]]\nname = \"a\"\nblockchain = \"E\"\ncategory = \"C\"\nsource_root = \"y\"\n",
        )
        .unwrap();
        assert!(matches!(
            load_manifest(&manifest, false),
            Err(ManifestError::DuplicateName(_))
        ));
    }

    #[test]
    fn missing_root_only_fails_when_required() {
        let dir = tempfile::tempdir().unwrap();
        let manifest = dir.path().join("corpus.toml");
        fs::write(
            &manifest,
            "[[dapp]]\nname = \"a\"\nblockchain = \"E\"\ncategory = \"C\"\nsource_root = \"gone\"\n",
        )
        .unwrap();
        assert!(load_manifest(&manifest, false).is_ok());
        assert!(matches!(
            load_manifest(&manifest, true),
            Err(ManifestError::MissingRoot { .. })
        ));
    }

    #[test]
    fn dir_name_sanitizes() {
        let d = DappManifest {
            name: "1inch Network".into(),
            blockchain: "Ethereum".into(),
            category: "DeFi".into(),
            source_root: PathBuf::from("."),
            notes: None,
        };
        assert_eq!(d.dir_name(), "1inch_Network");
    }
}
