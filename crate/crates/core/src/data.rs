//! Locating and reading the shipped data files.
//!
//! Files are embedded at compile time. Setting `GWVERIFY_DATA_DIR` (or
//! building a [`DataSource::dir`]) reads them from disk instead, with the
//! same relative layout: `tables/*.json` and `diagrams/*.json`.

use std::path::{Path, PathBuf};

use thiserror::Error;

pub const ENV_DATA_DIR: &str = "GWVERIFY_DATA_DIR";

pub const DM_TABLE: &str = "tables/dm_intersections.json";
pub const RUBBER_TABLE: &str = "tables/rubber.json";
pub const CITATIONS: &str = "citations.json";

const EMBEDDED: &[(&str, &str)] = &[
    (DM_TABLE, include_str!("../data/tables/dm_intersections.json")),
    (RUBBER_TABLE, include_str!("../data/tables/rubber.json")),
    (CITATIONS, include_str!("../data/citations.json")),
    (
        "diagrams/pushforward_degree_g2.json",
        include_str!("../data/diagrams/pushforward_degree_g2.json"),
    ),
    (
        "diagrams/pushforward_degree_g3.json",
        include_str!("../data/diagrams/pushforward_degree_g3.json"),
    ),
    (
        "diagrams/p1_genus2_absolute.json",
        include_str!("../data/diagrams/p1_genus2_absolute.json"),
    ),
    (
        "diagrams/p1_genus2_relative.json",
        include_str!("../data/diagrams/p1_genus2_relative.json"),
    ),
    (
        "diagrams/p4_genus3_absolute.json",
        include_str!("../data/diagrams/p4_genus3_absolute.json"),
    ),
    (
        "diagrams/p4_genus3_relative.json",
        include_str!("../data/diagrams/p4_genus3_relative.json"),
    ),
];

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DataError {
    #[error("{path}: {message}")]
    Io { path: String, message: String },
    #[error("{origin}: parse error: {message}")]
    Parse { origin: String, message: String },
    #[error("{origin}: {location}: {message}")]
    Schema {
        origin: String,
        location: String,
        message: String,
    },
}

impl DataError {
    pub fn schema(origin: &str, location: impl Into<String>, message: impl Into<String>) -> Self {
        DataError::Schema {
            origin: origin.to_string(),
            location: location.into(),
            message: message.into(),
        }
    }
}

/// Where data files are read from.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct DataSource {
    root: Option<PathBuf>,
}

impl DataSource {
    pub fn embedded() -> Self {
        DataSource { root: None }
    }

    pub fn dir(root: impl AsRef<Path>) -> Self {
        DataSource {
            root: Some(root.as_ref().to_path_buf()),
        }
    }

    /// The directory named by `GWVERIFY_DATA_DIR`, else the embedded copies.
    pub fn from_env() -> Self {
        match std::env::var_os(ENV_DATA_DIR) {
            Some(d) if !d.is_empty() => DataSource::dir(PathBuf::from(d)),
            _ => DataSource::embedded(),
        }
    }

    pub fn root(&self) -> Option<&Path> {
        self.root.as_deref()
    }

    /// Returns `(origin, text)` where origin names the file for diagnostics.
    pub fn read(&self, rel: &str) -> Result<(String, String), DataError> {
        match &self.root {
            Some(root) => {
                let path = root.join(rel);
                let origin = path.display().to_string();
                std::fs::read_to_string(&path)
                    .map(|t| (origin.clone(), t))
                    .map_err(|e| DataError::Io {
                        path: origin,
                        message: e.to_string(),
                    })
            }
            None => EMBEDDED
                .iter()
                .find(|(name, _)| *name == rel)
                .map(|(name, text)| (format!("<embedded>/{name}"), text.to_string()))
                .ok_or_else(|| DataError::Io {
                    path: format!("<embedded>/{rel}"),
                    message: "no such embedded file".into(),
                }),
        }
    }
}

/// Every shipped file, for copying or inspection.
pub fn embedded_files() -> impl Iterator<Item = (&'static str, &'static str)> {
    EMBEDDED.iter().copied()
}
