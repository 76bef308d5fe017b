//! Sweep configuration: flat `key = value` lines, `#` comments. The keys
//! are the long names of the `sweep` command-line flags, and pairs given
//! later (flags after the file) win.

use std::path::PathBuf;
use std::str::FromStr;

use qpforce::maps::golden_omega;
use qpforce::{SystemKind, TrigPoly};

use crate::error::{WbError, WbResult};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum Diagnostic {
    CriticalB,
    Lyapunov,
    Area,
    Lipschitz,
    Capture,
    Regime,
}

impl Diagnostic {
    pub fn name(self) -> &'static str {
        match self {
            Diagnostic::CriticalB => "critical_b",
            Diagnostic::Lyapunov => "lyapunov",
            Diagnostic::Area => "area",
            Diagnostic::Lipschitz => "lipschitz",
            Diagnostic::Capture => "capture",
            Diagnostic::Regime => "regime",
        }
    }
}

impl FromStr for Diagnostic {
    type Err = WbError;
    fn from_str(s: &str) -> WbResult<Self> {
        Ok(match s.trim() {
            "critical_b" | "critical-b" => Diagnostic::CriticalB,
            "lyapunov" => Diagnostic::Lyapunov,
            "area" => Diagnostic::Area,
            "lipschitz" => Diagnostic::Lipschitz,
            "capture" => Diagnostic::Capture,
            "regime" => Diagnostic::Regime,
            other => return Err(WbError::Invalid(format!("unknown diagnostic {other:?}"))),
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum BMode {
    Absolute(Vec<f64>),
    /// Multiples of `b*`, computed per `a`.
    Relative(Vec<f64>),
}

impl BMode {
    pub fn values(&self) -> &[f64] {
        match self {
            BMode::Absolute(v) | BMode::Relative(v) => v,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepConfig {
    pub kind: SystemKind,
    pub a_values: Vec<f64>,
    pub b_mode: BMode,
    pub delta: f64,
    pub omega: f64,
    pub g: TrigPoly,
    /// Sorted, without repeats.
    pub diagnostics: Vec<Diagnostic>,
    pub grid: usize,
    pub n_max: usize,
    pub seed: u64,
    pub output_dir: PathBuf,
}

fn list<T: FromStr>(key: &str, v: &str) -> WbResult<Vec<T>> {
    v.split(',')
        .filter(|s| !s.trim().is_empty())
        .map(|s| {
            s.trim()
                .parse()
                .map_err(|_| WbError::Invalid(format!("{key}: cannot parse {s:?}")))
        })
        .collect()
}

fn one<T: FromStr>(key: &str, v: &str) -> WbResult<T> {
    v.trim()
        .parse()
        .map_err(|_| WbError::Invalid(format!("{key}: cannot parse {v:?}")))
}

pub fn parse_omega(v: &str) -> WbResult<f64> {
    if v.trim() == "golden" {
        Ok(golden_omega())
    } else {
        one("omega", v)
    }
}

/// Splits `key = value` lines; blank lines and `#` comments are skipped.
pub fn parse_pairs(text: &str) -> WbResult<Vec<(String, String)>> {
    text.lines()
        .map(|l| l.split('#').next().unwrap_or("").trim())
        .filter(|l| !l.is_empty())
        .map(|l| {
            l.split_once('=')
                .map(|(k, v)| (k.trim().to_string(), v.trim().to_string()))
                .ok_or_else(|| WbError::Invalid(format!("expected key = value, got {l:?}")))
        })
        .collect()
}

impl SweepConfig {
    /// Builds a config from pairs; later pairs override earlier ones.
    pub fn from_pairs(pairs: &[(String, String)]) -> WbResult<Self> {
        let mut kind = None;
        let mut a_values = None;
        let mut b_mode = None;
        let mut delta = 1.0;
        let mut omega = golden_omega();
        let mut g = TrigPoly::default_forcing();
        let mut diagnostics: Option<Vec<Diagnostic>> = None;
        let mut grid = 1024;
        let mut n_max = 40;
        let mut seed = 1;
        let mut output_dir = PathBuf::from(".");
        for (k, v) in pairs {
            match k.as_str() {
                "system" => kind = Some(v.parse::<SystemKind>().map_err(WbError::from)?),
                "a" => a_values = Some(list("a", v)?),
                "b" => b_mode = Some(BMode::Absolute(list("b", v)?)),
                "b-rel" => b_mode = Some(BMode::Relative(list("b-rel", v)?)),
                "delta" => delta = one("delta", v)?,
                "omega" => omega = parse_omega(v)?,
                "g" => g = v.parse::<TrigPoly>().map_err(WbError::from)?,
                "diagnostics" => diagnostics = Some(list("diagnostics", v)?),
                "grid" => grid = one("grid", v)?,
                "n-max" => n_max = one("n-max", v)?,
                "seed" => seed = one("seed", v)?,
                "out" => output_dir = PathBuf::from(v),
                other => return Err(WbError::Invalid(format!("unknown key {other:?}"))),
            }
        }
        let kind = kind.ok_or_else(|| WbError::Invalid("system is required".into()))?;
        let a_values = a_values.unwrap_or_default();
        let b_mode = b_mode.ok_or_else(|| WbError::Invalid("b or b-rel is required".into()))?;
        let mut diagnostics = diagnostics.unwrap_or_default();
        diagnostics.sort();
        diagnostics.dedup();
        if a_values.is_empty() || b_mode.values().is_empty() {
            return Err(WbError::Invalid("a and b lists must be nonempty".into()));
        }
        if diagnostics.is_empty() {
            return Err(WbError::Invalid("at least one diagnostic is required".into()));
        }
        if grid < 16 {
            return Err(WbError::Invalid("grid must be at least 16".into()));
        }
        Ok(SweepConfig {
            kind,
            a_values,
            b_mode,
            delta,
            omega,
            g,
            diagnostics,
            grid,
            n_max,
            seed,
            output_dir,
        })
    }

    pub fn parse(text: &str) -> WbResult<Self> {
        SweepConfig::from_pairs(&parse_pairs(text)?)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_file_and_overrides() {
        let text = "# F4 sweep\nsystem = period-doubling\na = -3, -2\nb-rel = 0.5,1\ndiagnostics = critical_b, area\n";
        let mut pairs = parse_pairs(text).unwrap();
        let c = SweepConfig::from_pairs(&pairs).unwrap();
        assert_eq!(c.a_values, vec![-3.0, -2.0]);
        assert_eq!(c.b_mode, BMode::Relative(vec![0.5, 1.0]));
        assert_eq!(c.diagnostics, vec![Diagnostic::CriticalB, Diagnostic::Area]);
        pairs.push(("b".into(), "0.1".into()));
        let c = SweepConfig::from_pairs(&pairs).unwrap();
        assert_eq!(c.b_mode, BMode::Absolute(vec![0.1]));
    }

    #[test]
    fn rejects_missing_and_unknown() {
        assert!(SweepConfig::parse("system = saddle-node\na = 2\nb = 0.1\n").is_err());
        assert!(
            SweepConfig::parse("system = saddle-node\na = 2\nb = 0.1\ndiagnostics = area\ncolour = red\n").is_err()
        );
        assert!(SweepConfig::parse("system = saddle-node\na =\nb = 0.1\ndiagnostics = area\n").is_err());
    }
}
