//! Run manifests: flat `key = value` text listing the parameters of a run
//! and a CRC-32 for every file it wrote.

use std::fmt::Write as _;
use std::path::Path;

use crate::error::{WbError, WbResult};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RunManifest {
    pub tool_version: String,
    /// Seconds since the Unix epoch.
    pub timestamp: u64,
    /// Parameter echo in insertion order. Reals use 17 significant digits.
    pub params: Vec<(String, String)>,
    /// File name (relative to the manifest) and its CRC-32.
    pub files: Vec<(String, u32)>,
}

pub const MANIFEST_NAME: &str = "manifest.txt";

impl RunManifest {
    pub fn new(timestamp: u64) -> Self {
        RunManifest {
            tool_version: env!("CARGO_PKG_VERSION").to_string(),
            timestamp,
            params: Vec::new(),
            files: Vec::new(),
        }
    }

    pub fn param(&mut self, key: &str, value: impl Into<String>) -> &mut Self {
        self.params.push((key.to_string(), value.into()));
        self
    }

    pub fn get(&self, key: &str) -> Option<&str> {
        self.params.iter().find(|(k, _)| k == key).map(|(_, v)| v.as_str())
    }

    pub fn render(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "tool_version = {}", self.tool_version);
        let _ = writeln!(s, "timestamp = {}", self.timestamp);
        for (k, v) in &self.params {
            let _ = writeln!(s, "param.{k} = {v}");
        }
        for (f, c) in &self.files {
            let _ = writeln!(s, "file.{f} = {c:08x}");
        }
        s
    }

    pub fn parse(text: &str) -> WbResult<Self> {
        let mut m = RunManifest {
            tool_version: String::new(),
            timestamp: 0,
            params: Vec::new(),
            files: Vec::new(),
        };
        let bad = |l: &str| WbError::Invalid(format!("bad manifest line: {l}"));
        let (mut have_version, mut have_time) = (false, false);
        for line in text.lines().filter(|l| !l.trim().is_empty()) {
            let (k, v) = line.split_once(" = ").ok_or_else(|| bad(line))?;
            if k == "tool_version" {
                m.tool_version = v.to_string();
                have_version = true;
            } else if k == "timestamp" {
                m.timestamp = v.parse().map_err(|_| bad(line))?;
                have_time = true;
            } else if let Some(p) = k.strip_prefix("param.") {
                m.params.push((p.to_string(), v.to_string()));
            } else if let Some(f) = k.strip_prefix("file.") {
                let c = u32::from_str_radix(v, 16).map_err(|_| bad(line))?;
                m.files.push((f.to_string(), c));
            } else {
                return Err(bad(line));
            }
        }
        if !(have_version && have_time) {
            return Err(WbError::Invalid("manifest lacks tool_version or timestamp".into()));
        }
        Ok(m)
    }

    /// Every listed file exists next to the manifest and matches its CRC.
    pub fn verify(&self, dir: &Path) -> WbResult<()> {
        for (f, c) in &self.files {
            let bytes = std::fs::read(dir.join(f))?;
            let got = crc32fast::hash(&bytes);
            if got != *c {
                return Err(WbError::Numerical(format!(
                    "checksum mismatch for {f}: {got:08x} != {c:08x}"
                )));
            }
        }
        Ok(())
    }
}

/// Current time, or `SOURCE_DATE_EPOCH` when set, so that reruns can be made
/// byte-identical.
pub fn now_timestamp() -> u64 {
    if let Some(t) = std::env::var("SOURCE_DATE_EPOCH").ok().and_then(|v| v.parse().ok()) {
        return t;
    }
    std::time::SystemTime::now()
        .duration_since(std::time::UNIX_EPOCH)
        .map(|d| d.as_secs())
        .unwrap_or(0)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trip() {
        let mut m = RunManifest::new(1_700_000_000);
        m.param("system", "period-doubling")
            .param("omega", crate::fmt17(qpforce::maps::golden_omega()));
        m.files.push(("phi_n.csv".into(), 0xdeadbeef));
        m.files.push(("mu.csv".into(), 7));
        assert_eq!(RunManifest::parse(&m.render()).unwrap(), m);
        let w: f64 = m.get("omega").unwrap().parse().unwrap();
        assert_eq!(w, qpforce::maps::golden_omega());
    }

    #[test]
    fn rejects_garbage() {
        assert!(RunManifest::parse("tool_version = 1\nwhat\n").is_err());
        assert!(RunManifest::parse("param.a = 1\n").is_err());
    }
}
