//! Curve CSVs: header `theta,value`, one row per grid angle in ascending
//! order, reals with 17 significant digits.

use std::io::Write;
use std::path::Path;

use qpforce::curves::{sample_curve, CurveEvaluator, CurveKind, CurveSample};
use qpforce::MapParams;

use crate::error::{WbError, WbResult};
use crate::fmt17;
use crate::manifest::{RunManifest, MANIFEST_NAME};

/// Writes `bytes` to a temporary file in the target directory and renames
/// it into place, so readers see either the old file or the whole new one.
pub fn write_atomic(path: &Path, bytes: &[u8]) -> WbResult<()> {
    let dir = match path.parent() {
        Some(d) if !d.as_os_str().is_empty() => d,
        _ => Path::new("."),
    };
    let mut tmp = tempfile::NamedTempFile::new_in(dir)?;
    tmp.write_all(bytes)?;
    tmp.as_file().sync_all()?;
    tmp.persist(path).map_err(|e| WbError::Io(e.error))?;
    Ok(())
}

pub fn curve_csv(s: &CurveSample) -> String {
    let mut out = String::with_capacity(48 * s.grid_size + 16);
    out.push_str("theta,value\n");
    for (j, t) in s.thetas().enumerate() {
        out.push_str(&fmt17(t));
        out.push(',');
        out.push_str(&fmt17(s.values[j]));
        out.push('\n');
    }
    out
}

/// Adds the parameters of `p` to a manifest.
pub fn echo_params(m: &mut RunManifest, p: &MapParams) {
    m.param("system", p.kind().name())
        .param("a", fmt17(p.a()))
        .param("b", fmt17(p.b()))
        .param("delta", fmt17(p.delta()))
        .param("omega", fmt17(p.omega()))
        .param("g", p.g().to_string());
}

/// Samples every requested curve, then writes one CSV per curve and a
/// manifest into `out`. Nothing is written if a curve fails to evaluate.
pub fn export_curves(
    params: &MapParams,
    n: usize,
    m: usize,
    which: &[CurveKind],
    out: &Path,
    timestamp: u64,
) -> WbResult<RunManifest> {
    if which.is_empty() {
        return Err(WbError::Invalid("no curve requested".into()));
    }
    let ev = CurveEvaluator::new(params, n)?;
    let samples = which
        .iter()
        .map(|&k| sample_curve(&ev, k, m, k.name()).map(|s| (k, s)))
        .collect::<Result<Vec<_>, _>>()?;
    let mut man = RunManifest::new(timestamp);
    echo_params(&mut man, params);
    man.param("n", n.to_string())
        .param("grid", m.to_string())
        .param("which", which.iter().map(|k| k.name()).collect::<Vec<_>>().join(","));
    for (k, s) in &samples {
        let name = format!("{}.csv", k.name());
        let text = curve_csv(s);
        write_atomic(&out.join(&name), text.as_bytes())?;
        man.files.push((name, crc32fast::hash(text.as_bytes())));
    }
    write_atomic(&out.join(MANIFEST_NAME), man.render().as_bytes())?;
    Ok(man)
}

/// Reads back a curve CSV written by [`export_curves`].
pub fn read_curve_csv(path: &Path) -> WbResult<Vec<(f64, f64)>> {
    let text = std::fs::read_to_string(path)?;
    let mut lines = text.lines();
    if lines.next() != Some("theta,value") {
        return Err(WbError::Invalid(format!("{}: missing header", path.display())));
    }
    lines
        .map(|l| {
            let (t, v) = l
                .split_once(',')
                .ok_or_else(|| WbError::Invalid(format!("bad row: {l}")))?;
            let p = |x: &str| {
                x.parse::<f64>()
                    .map_err(|_| WbError::Invalid(format!("bad number: {x}")))
            };
            Ok((p(t)?, p(v)?))
        })
        .collect()
}
