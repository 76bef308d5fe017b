//! Parameter sweeps over an `(a, b)` grid. Cells run in parallel; rows come
//! out in `(a index, b index)` order whatever the schedule.

use std::f64::consts::TAU;

use rayon::prelude::*;

use qpforce::analysis::{area_estimate, capture_experiment, lyapunov_curve, regime_classify, CurveChoice, Regime};
use qpforce::cohomology::critical_b;
use qpforce::curves::{lipschitz_estimate, sample_curve, CurveEvaluator, CurveKind};
use qpforce::rng::draw_unit;
use qpforce::MapParams;

use crate::config::{BMode, Diagnostic, SweepConfig};
use crate::error::{WbError, WbResult};
use crate::export::write_atomic;
use crate::fmt17;
use crate::manifest::{RunManifest, MANIFEST_NAME};

pub const SWEEP_FILE: &str = "sweep.csv";
const CAPTURE_TRIALS: u64 = 200;
const CAPTURE_ITERS: u64 = 10_000;
const LYAPUNOV_STEPS: usize = 10_000;
const LYAPUNOV_BURN_IN: usize = 1000;

#[derive(Debug, Clone, PartialEq)]
pub struct SweepRecord {
    pub a_index: usize,
    pub b_index: usize,
    pub a: f64,
    /// Absolute `b`; `None` when it could not be derived.
    pub b: Option<f64>,
    pub b_star: Option<f64>,
    /// `"ok"` or the tag of the first error in the cell.
    pub status: String,
    pub detail: String,
    /// One entry per requested diagnostic column, empty when it failed.
    pub values: Vec<(&'static str, String)>,
}

#[derive(Debug, Clone)]
pub struct SweepOutput {
    pub rows: Vec<SweepRecord>,
    pub csv: String,
    pub manifest: RunManifest,
}

fn columns(d: Diagnostic) -> &'static [&'static str] {
    match d {
        Diagnostic::CriticalB => &["b_star"],
        Diagnostic::Lyapunov => &["lyapunov", "flat_fraction"],
        Diagnostic::Area => &["area"],
        Diagnostic::Lipschitz => &["lipschitz"],
        Diagnostic::Capture => &["capture_fraction"],
        Diagnostic::Regime => &["regime"],
    }
}

fn regime_name(r: Regime) -> &'static str {
    match r {
        Regime::Before => "before",
        Regime::At => "at",
        Regime::After => "after",
    }
}

fn diagnostic(cfg: &SweepConfig, p: &MapParams, bs: Option<f64>, d: Diagnostic) -> WbResult<Vec<String>> {
    Ok(match d {
        Diagnostic::CriticalB => {
            let bs = match bs {
                Some(b) => b,
                None => critical_b(p)?.b_star,
            };
            vec![fmt17(bs)]
        }
        Diagnostic::Lyapunov => {
            let t = TAU * draw_unit(cfg.seed, 0);
            let r = lyapunov_curve(p, CurveChoice::Attracting, LYAPUNOV_STEPS, LYAPUNOV_BURN_IN, t)?;
            vec![fmt17(r.value), fmt17(r.flat_fraction)]
        }
        Diagnostic::Area => vec![fmt17(area_estimate(p, cfg.n_max, cfg.grid)?)],
        Diagnostic::Lipschitz => {
            let ev = CurveEvaluator::new(p, cfg.n_max)?;
            let s = sample_curve(&ev, CurveKind::Phi, cfg.grid, "phi_n")?;
            vec![fmt17(lipschitz_estimate(&s, 0.0, TAU)?)]
        }
        Diagnostic::Capture => {
            let c = capture_experiment(p, CAPTURE_TRIALS, CAPTURE_ITERS, cfg.seed)?;
            vec![fmt17(c.fraction())]
        }
        Diagnostic::Regime => vec![regime_name(regime_classify(p)?.regime).to_string()],
    })
}

struct Row {
    base: WbResult<MapParams>,
    b_star: Option<WbResult<f64>>,
}

fn run_cell(cfg: &SweepConfig, row: &Row, a_index: usize, b_index: usize) -> SweepRecord {
    let a = cfg.a_values[a_index];
    let mut rec = SweepRecord {
        a_index,
        b_index,
        a,
        b: None,
        b_star: None,
        status: "ok".into(),
        detail: String::new(),
        values: Vec::new(),
    };
    let fail = |rec: &mut SweepRecord, e: &WbError| {
        if rec.status == "ok" {
            rec.status = e.status().into();
            rec.detail = e.to_string().replace([',', '\n'], ";");
        }
    };
    let blank = |rec: &mut SweepRecord| {
        for d in &cfg.diagnostics {
            for c in columns(*d) {
                rec.values.push((c, String::new()));
            }
        }
    };
    let base = match &row.base {
        Ok(p) => p,
        Err(e) => {
            fail(&mut rec, e);
            blank(&mut rec);
            return rec;
        }
    };
    rec.b_star = row.b_star.as_ref().and_then(|r| r.as_ref().ok().copied());
    let v = cfg.b_mode.values()[b_index];
    let b = match (&cfg.b_mode, &row.b_star) {
        (BMode::Absolute(_), _) => v,
        (BMode::Relative(_), Some(Ok(bs))) => v * bs,
        (BMode::Relative(_), Some(Err(e))) => {
            fail(&mut rec, e);
            blank(&mut rec);
            return rec;
        }
        (BMode::Relative(_), None) => unreachable!(),
    };
    rec.b = Some(b);
    let p = match base.with_b(b) {
        Ok(p) => p,
        Err(e) => {
            fail(&mut rec, &e.into());
            blank(&mut rec);
            return rec;
        }
    };
    for &d in &cfg.diagnostics {
        match diagnostic(cfg, &p, rec.b_star, d) {
            Ok(vals) => {
                for (c, v) in columns(d).iter().zip(vals) {
                    rec.values.push((c, v));
                }
            }
            Err(e) => {
                fail(&mut rec, &e);
                for c in columns(d) {
                    rec.values.push((c, String::new()));
                }
            }
        }
    }
    rec
}

fn opt(x: Option<f64>) -> String {
    x.map(fmt17).unwrap_or_default()
}

pub fn render_csv(cfg: &SweepConfig, rows: &[SweepRecord]) -> String {
    let mut head = vec!["a_index", "b_index", "a", "b", "b_over_b_star", "status"];
    for d in &cfg.diagnostics {
        head.extend_from_slice(columns(*d));
    }
    head.push("detail");
    let mut out = head.join(",");
    out.push('\n');
    for r in rows {
        let rel = match (r.b, r.b_star) {
            (Some(b), Some(bs)) => Some(b / bs),
            _ => None,
        };
        let mut f = vec![
            r.a_index.to_string(),
            r.b_index.to_string(),
            fmt17(r.a),
            opt(r.b),
            opt(rel),
            r.status.clone(),
        ];
        f.extend(r.values.iter().map(|(_, v)| v.clone()));
        f.push(r.detail.clone());
        out.push_str(&f.join(","));
        out.push('\n');
    }
    out
}

/// Evaluates the sweep without touching the file system.
pub fn evaluate_sweep(cfg: &SweepConfig) -> Vec<SweepRecord> {
    let need_bs = matches!(cfg.b_mode, BMode::Relative(_)) || cfg.diagnostics.contains(&Diagnostic::CriticalB);
    let rows: Vec<Row> = cfg
        .a_values
        .par_iter()
        .map(|&a| {
            let base = MapParams::new(cfg.kind, a, 0.0, cfg.delta, cfg.omega, cfg.g.clone()).map_err(WbError::from);
            let b_star = match (&base, need_bs) {
                (Ok(p), true) => Some(critical_b(p).map(|c| c.b_star).map_err(WbError::from)),
                _ => None,
            };
            Row { base, b_star }
        })
        .collect();
    let nb = cfg.b_mode.values().len();
    (0..cfg.a_values.len() * nb)
        .into_par_iter()
        .map(|k| run_cell(cfg, &rows[k / nb], k / nb, k % nb))
        .collect()
}

/// Runs the sweep and writes `sweep.csv` and its manifest to
/// `cfg.output_dir`. Cell errors go to the status column.
pub fn run_sweep(cfg: &SweepConfig, timestamp: u64) -> WbResult<SweepOutput> {
    let rows = evaluate_sweep(cfg);
    let csv = render_csv(cfg, &rows);
    let mut man = RunManifest::new(timestamp);
    man.param("system", cfg.kind.name()).param(
        "a",
        cfg.a_values.iter().map(|&a| fmt17(a)).collect::<Vec<_>>().join(","),
    );
    match &cfg.b_mode {
        BMode::Absolute(v) => man.param("b", v.iter().map(|&b| fmt17(b)).collect::<Vec<_>>().join(",")),
        BMode::Relative(v) => man.param("b-rel", v.iter().map(|&b| fmt17(b)).collect::<Vec<_>>().join(",")),
    };
    let nb = cfg.b_mode.values().len();
    if matches!(cfg.b_mode, BMode::Relative(_)) {
        for (i, chunk) in rows.chunks(nb).enumerate() {
            man.param(&format!("b_star.{i}"), opt(chunk[0].b_star));
            man.param(
                &format!("b.{i}"),
                chunk.iter().map(|r| opt(r.b)).collect::<Vec<_>>().join(","),
            );
        }
    }
    man.param("delta", fmt17(cfg.delta))
        .param("omega", fmt17(cfg.omega))
        .param("g", cfg.g.to_string())
        .param(
            "diagnostics",
            cfg.diagnostics.iter().map(|d| d.name()).collect::<Vec<_>>().join(","),
        )
        .param("grid", cfg.grid.to_string())
        .param("n-max", cfg.n_max.to_string())
        .param("seed", cfg.seed.to_string());
    std::fs::create_dir_all(&cfg.output_dir)?;
    write_atomic(&cfg.output_dir.join(SWEEP_FILE), csv.as_bytes())?;
    man.files.push((SWEEP_FILE.into(), crc32fast::hash(csv.as_bytes())));
    write_atomic(&cfg.output_dir.join(MANIFEST_NAME), man.render().as_bytes())?;
    Ok(SweepOutput {
        rows,
        csv,
        manifest: man,
    })
}
