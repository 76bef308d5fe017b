//! Measures the frozen thresholds used by the test suites. Slow; run with
//! `cargo run --release --example calibrate`.

use std::f64::consts::{PI, TAU};
use std::time::Instant;

use qpforce::analysis::{
    area_estimate, capture_experiment, fractal_scan, log_psi_integral, lyapunov_curve, CurveChoice,
};
use qpforce::cohomology::critical_b;
use qpforce::curves::{zero_count, CurveEvaluator};
use qpforce::{MapParams, SystemKind};

fn main() {
    let base = MapParams::standard(SystemKind::PeriodDoubling, -3.0, 0.0).unwrap();
    let bs = critical_b(&base).unwrap().b_star;
    let p = base.with_b(bs).unwrap();
    println!("b* = {bs:.17}");

    let t = Instant::now();
    let area = area_estimate(&p, 80, 1 << 15).unwrap();
    println!("area n=80 M=2^15: {area:.10}  ({:?})", t.elapsed());
    for n in [10, 20, 40] {
        println!("  area n={n}: {:.10}", area_estimate(&p, n, 1 << 15).unwrap());
    }

    let r = lyapunov_curve(&p, CurveChoice::Attracting, 1_000_000, 1000, 0.1).unwrap();
    println!("flat fraction N=1e6: {:.6}", r.flat_fraction);

    for (kind, a) in [(SystemKind::PeriodDoubling, -3.0), (SystemKind::PitchforkSub, 3.0)] {
        let q = MapParams::standard(kind, a, 0.0).unwrap();
        let b = critical_b(&q).unwrap().b_star;
        for frac in [1.0, 0.5] {
            let c = capture_experiment(&q.with_b(frac * b).unwrap(), 1000, 100_000, 1).unwrap();
            let late = c.iteration_histogram.range(10_000..).map(|(_, v)| v).sum::<u64>();
            let last = c.iteration_histogram.keys().last().copied();
            println!(
                "capture {kind} b={frac}b*: {}/{} late(>=1e4)={late} last={last:?}",
                c.captured, c.trials
            );
        }
    }

    for n in [0usize, 3, 7] {
        for (kind, a) in [(SystemKind::PeriodDoubling, -3.0), (SystemKind::PitchforkSuper, 2.0)] {
            let q = MapParams::standard(kind, a, 0.0).unwrap();
            let b = critical_b(&q).unwrap().b_star;
            let ev = CurveEvaluator::new(&q.with_b(b).unwrap(), n).unwrap();
            let z = zero_count(&ev, 1e-9, 0.0, 1 << 14, 1e-3).unwrap();
            println!("zeros {kind} n={n}: count={} min_off={:.3e}", z.count, z.min_off);
        }
    }

    for (m, r) in [(1 << 13, 2e-3), (1 << 15, 1e-3), (1 << 16, 5e-4), (1 << 17, 2.5e-4)] {
        println!("log psi n=5 M={m} r={r}: {:.6}", log_psi_integral(&p, 5, m, r).unwrap());
    }

    let t = Instant::now();
    let bl: Vec<f64> = [0.5, 0.9, 0.99, 0.999].iter().map(|f| f * bs).collect();
    for k in 0..8 {
        let lo = k as f64 * PI / 4.0;
        let s = fractal_scan(&base, &bl, (lo, lo + PI / 4.0), 80, 1 << 16).unwrap();
        let l: Vec<f64> = s.entries.iter().map(|e| e.l_estimate).collect();
        let n: Vec<(usize, bool)> = s.entries.iter().map(|e| (e.n_used, e.converged)).collect();
        println!(
            "fractal I{k}: L={l:.3?} ratio={:.2} n={n:?} mono={} region={}",
            l[3] / l[0],
            s.monotonicity_violations,
            s.region_violations
        );
    }
    println!("fractal time {:?}", t.elapsed());

    let ev = CurveEvaluator::new(&p, 0).unwrap();
    let mut z = ev.predicted_zeros(10_000).unwrap();
    z.sort_by(f64::total_cmp);
    let mut gap = TAU - z[z.len() - 1] + z[0];
    for w in z.windows(2) {
        gap = gap.max(w[1] - w[0]);
    }
    println!("largest gap K=1e4: {gap:.4e}, fill distance {:.4e}", gap / 2.0);
}
