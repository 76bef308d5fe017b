use qpforce_workbench::config::Diagnostic;
use qpforce_workbench::sweep::{evaluate_sweep, SWEEP_FILE};
use qpforce_workbench::{run_sweep, RunManifest, SweepConfig};

fn cfg(text: &str) -> SweepConfig {
    SweepConfig::parse(text).unwrap()
}

#[test]
fn single_cell_critical_b() {
    let dir = tempfile::tempdir().unwrap();
    let mut c = cfg("system = period-doubling\na = -3\nb-rel = 1\ndiagnostics = critical_b\n");
    c.output_dir = dir.path().to_path_buf();
    let out = run_sweep(&c, 0).unwrap();
    assert_eq!(out.rows.len(), 1);
    let r = &out.rows[0];
    assert_eq!(r.status, "ok");
    let bs: f64 = r.values[0].1.parse().unwrap();
    assert!((bs - 0.4949).abs() < 1e-4);
    assert_eq!(r.b, Some(bs));
    let man = RunManifest::parse(&std::fs::read_to_string(dir.path().join("manifest.txt")).unwrap()).unwrap();
    man.verify(dir.path()).unwrap();
    assert_eq!(man.get("b_star.0").unwrap().parse::<f64>().unwrap(), bs);
    assert_eq!(std::fs::read_to_string(dir.path().join(SWEEP_FILE)).unwrap(), out.csv);
}

#[test]
fn rows_do_not_depend_on_thread_count() {
    let c = cfg("system = period-doubling\na = -3, -2\nb-rel = 0.3, 0.7, 1\n\
         diagnostics = critical_b, lyapunov, area, lipschitz, capture, regime\ngrid = 256\nn-max = 20\n");
    assert_eq!(c.diagnostics.len(), 6);
    let run = |k| {
        rayon::ThreadPoolBuilder::new()
            .num_threads(k)
            .build()
            .unwrap()
            .install(|| evaluate_sweep(&c))
    };
    let (one, eight) = (run(1), run(8));
    assert_eq!(one, eight);
    let order: Vec<(usize, usize)> = one.iter().map(|r| (r.a_index, r.b_index)).collect();
    assert_eq!(order, vec![(0, 0), (0, 1), (0, 2), (1, 0), (1, 1), (1, 2)]);
    assert!(one.iter().all(|r| r.status == "ok"), "{one:?}");
}

#[test]
fn bad_cell_is_reported_not_fatal() {
    let mut c = cfg("system = period-doubling\na = -3, 1\nb = 0.2\ndiagnostics = critical_b, area\n");
    c.diagnostics.retain(|d| *d != Diagnostic::Area);
    let rows = evaluate_sweep(&c);
    assert_eq!(rows[0].status, "ok");
    assert_eq!(rows[1].status, "invalid-params");
    assert!(rows[1].values.iter().all(|(_, v)| v.is_empty()));
}
