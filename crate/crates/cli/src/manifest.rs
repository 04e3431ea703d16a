//! Run manifests: flat `key: value` text written next to a command's outputs.

use std::fmt::Write as _;
use std::fs;
use std::io;
use std::path::{Path, PathBuf};

use sha2::{Digest, Sha256};

pub const MANIFEST_SUFFIX: &str = ".manifest";

pub fn sha256_hex(bytes: &[u8]) -> String {
    hex::encode(Sha256::digest(bytes))
}

/// Keys keep their insertion order; values are single lines.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct RunManifest {
    entries: Vec<(String, String)>,
}

impl RunManifest {
    pub fn new(command: &str) -> Self {
        let mut m = Self::default();
        m.set("tool", env!("CARGO_PKG_NAME"));
        m.set("version", env!("CARGO_PKG_VERSION"));
        m.set("command", command);
        m
    }

    /// Sets `key`, replacing an earlier value. Line breaks in `value` become spaces.
    pub fn set(&mut self, key: &str, value: impl ToString) {
        let value = value.to_string().replace(['\n', '\r'], " ");
        match self.entries.iter_mut().find(|(k, _)| k == key) {
            Some(entry) => entry.1 = value,
            None => self.entries.push((key.to_string(), value)),
        }
    }

    pub fn get(&self, key: &str) -> Option<&str> {
        self.entries
            .iter()
            .find(|(k, _)| k == key)
            .map(|(_, v)| v.as_str())
    }

    pub fn entries(&self) -> &[(String, String)] {
        &self.entries
    }

    pub fn input(&mut self, name: &str, path: &Path, bytes: &[u8]) {
        self.set(&format!("input.{name}.path"), path.display());
        self.set(&format!("input.{name}.sha256"), sha256_hex(bytes));
    }

    pub fn output(&mut self, name: &str, path: &Path, bytes: &[u8]) {
        self.set(&format!("output.{name}.path"), path.display());
        self.set(&format!("output.{name}.sha256"), sha256_hex(bytes));
    }

    /// Output digests only, in order, for comparing repeated runs.
    pub fn output_digests(&self) -> Vec<(&str, &str)> {
        self.entries
            .iter()
            .filter(|(k, _)| k.starts_with("output.") && k.ends_with(".sha256"))
            .map(|(k, v)| (k.as_str(), v.as_str()))
            .collect()
    }

    pub fn render(&self) -> String {
        let mut out = String::new();
        for (k, v) in &self.entries {
            let _ = writeln!(out, "{k}: {v}");
        }
        out
    }

    pub fn parse(text: &str) -> Result<Self, String> {
        let mut m = Self::default();
        for (n, line) in text.lines().enumerate() {
            let Some((k, v)) = line.split_once(": ") else {
                return Err(format!("manifest line {} is not \"key: value\"", n + 1));
            };
            m.entries.push((k.to_string(), v.to_string()));
        }
        Ok(m)
    }

    pub fn write(&self, path: &Path) -> io::Result<()> {
        fs::write(path, self.render())
    }
}

/// `a1.txt` becomes `a1.txt.manifest`.
pub fn manifest_path(output: &Path) -> PathBuf {
    let mut name = output.as_os_str().to_owned();
    name.push(MANIFEST_SUFFIX);
    PathBuf::from(name)
}
