use std::fs;
use std::path::{Path, PathBuf};

use freebound::experiment::output::{config_from_header, metadata_header};
use serde::de::DeserializeOwned;
use serde::Serialize;

use crate::Failure;

pub fn config_toml<T: Serialize>(cfg: &T) -> Result<String, Failure> {
    toml::to_string(cfg).map_err(|e| Failure::Runtime(format!("cannot serialize config: {e}")))
}

/// Reads a TOML config file or the header of an earlier output file.
pub fn load_config<T: DeserializeOwned>(path: &Path) -> Result<T, Failure> {
    let text = fs::read_to_string(path)
        .map_err(|e| Failure::Usage(format!("cannot read {}: {e}", path.display())))?;
    toml::from_str(&config_from_header(&text))
        .map_err(|e| Failure::Usage(format!("invalid config {}: {e}", path.display())))
}

pub struct OutDir {
    root: PathBuf,
}

impl OutDir {
    pub fn new(root: PathBuf) -> Self {
        Self { root }
    }

    fn prepare(&self, name: &str) -> Result<PathBuf, Failure> {
        fs::create_dir_all(&self.root)
            .map_err(|e| Failure::Runtime(format!("cannot create {}: {e}", self.root.display())))?;
        Ok(self.root.join(name))
    }

    fn write(&self, name: &str, text: &str) -> Result<PathBuf, Failure> {
        let path = self.prepare(name)?;
        fs::write(&path, text)
            .map_err(|e| Failure::Runtime(format!("cannot write {}: {e}", path.display())))?;
        Ok(path)
    }

    /// CSV table preceded by the metadata header.
    pub fn csv(
        &self,
        name: &str,
        config: &str,
        columns: &[&str],
        rows: &[Vec<f64>],
    ) -> Result<PathBuf, Failure> {
        let mut w = csv::Writer::from_writer(Vec::new());
        let io = |e: csv::Error| Failure::Runtime(format!("csv: {e}"));
        w.write_record(columns).map_err(io)?;
        for row in rows {
            w.write_record(row.iter().map(|v| v.to_string()))
                .map_err(io)?;
        }
        let body = w
            .into_inner()
            .map_err(|e| Failure::Runtime(format!("csv: {e}")))?;
        let text = metadata_header(config) + &String::from_utf8_lossy(&body);
        self.write(name, &text)
    }

    /// Plain text preceded by the metadata header.
    pub fn text(&self, name: &str, config: &str, body: &str) -> Result<PathBuf, Failure> {
        self.write(name, &(metadata_header(config) + body))
    }
}
