//! One-command run of the invariant batteries of every module.

use std::f64::consts::TAU;
use std::time::{Duration, Instant};

use qpforce::analysis::{
    area_estimate, capture_experiment, lyapunov_curve, regime_classify, symmetry_check, uniform_contraction_solve,
    CurveChoice, Regime, SymmetryReport,
};
use qpforce::cohomology::{critical_b, critical_b_bisect, min_seed_gap, mu_residual, solve_bold_mu, Side};
use qpforce::curves::{convergence_report, shifted_angle, zero_count, CurveEvaluator};
use qpforce::forcing::grid_angle;
use qpforce::maps::{golden_omega, reduce_angle};
use qpforce::rng::draw_unit;
use qpforce::{MapParams, SystemKind, TrigPoly, Variant};

use crate::error::WbResult;

/// Thresholds measured once and frozen; see `examples/calibrate.rs` in the
/// core crate.
pub mod thresholds {
    /// Half the attractor area bound at `n = 80`, `M = 2¹⁵` (measured 0.4990251).
    pub const FLOOR_A: f64 = 0.2495;
    /// Half the flat fraction along the attracting orbit at `N = 10⁶` (measured 0.3797).
    pub const FLAT_FRACTION_MIN: f64 = 0.1898;
    /// Floor for `λₙ` off `10⁻³`-windows of the predicted zeros, `M = 2¹⁴`
    /// (measured minima 3.2e-7 and 2.3e-7).
    pub const ZERO_FLOOR: f64 = 1e-7;
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Level {
    Quick,
    Full,
}

impl std::str::FromStr for Level {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "quick" => Ok(Level::Quick),
            "full" => Ok(Level::Full),
            _ => Err(format!("unknown level {s:?}")),
        }
    }
}

/// Deliberate faults for negative controls.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct CheckHooks {
    /// Moves the period doubling breakpoint away from the point where the
    /// linear and flat pieces meet.
    pub breakpoint_shift: f64,
}

#[derive(Debug, Clone)]
pub struct CheckItem {
    pub name: &'static str,
    pub pass: bool,
    pub detail: String,
    pub elapsed: Duration,
}

#[derive(Debug, Clone)]
pub struct CheckReport {
    pub level: Level,
    pub items: Vec<CheckItem>,
}

impl CheckReport {
    pub fn pass(&self) -> bool {
        self.items.iter().all(|i| i.pass)
    }

    pub fn item(&self, name: &str) -> Option<&CheckItem> {
        self.items.iter().find(|i| i.name == name)
    }

    pub fn render(&self) -> String {
        let mut s = String::new();
        for i in &self.items {
            s.push_str(&format!(
                "{} {:<28} {:>8.2}s  {}\n",
                if i.pass { "PASS" } else { "FAIL" },
                i.name,
                i.elapsed.as_secs_f64(),
                i.detail
            ));
        }
        s
    }
}

struct Sizes {
    grid: usize,
    n: usize,
    lyap_steps: usize,
    zero_grid: usize,
    area_grid: usize,
}

fn sizes(level: Level) -> Sizes {
    match level {
        Level::Quick => Sizes {
            grid: 1024,
            n: 40,
            lyap_steps: 100_000,
            zero_grid: 4096,
            area_grid: 4096,
        },
        Level::Full => Sizes {
            grid: 4096,
            n: 80,
            lyap_steps: 1_000_000,
            zero_grid: 1 << 14,
            area_grid: 1 << 15,
        },
    }
}

type Outcome = WbResult<(bool, String)>;
type Check<'a> = (&'static str, Box<dyn Fn() -> Outcome + 'a>);

fn pd(b: f64) -> MapParams {
    MapParams::standard(SystemKind::PeriodDoubling, -3.0, b).expect("valid")
}

fn pd_at_b_star() -> WbResult<MapParams> {
    let p = pd(0.0);
    let bs = critical_b(&p)?.b_star;
    Ok(p.with_b(bs)?)
}

fn ulp(x: f64) -> f64 {
    let x = x.abs().max(f64::MIN_POSITIVE);
    f64::from_bits(x.to_bits() + 1) - x
}

fn next_up(x: f64) -> f64 {
    if x >= 0.0 {
        f64::from_bits(x.to_bits() + 1)
    } else {
        f64::from_bits(x.to_bits() - 1)
    }
}

fn next_down(x: f64) -> f64 {
    -next_up(-x)
}

fn piecewise_examples() -> Vec<MapParams> {
    [
        (SystemKind::PitchforkSuper, 2.0),
        (SystemKind::PitchforkSub, 3.0),
        (SystemKind::SaddleNode, 2.0),
        (SystemKind::PeriodDoubling, -3.0),
    ]
    .iter()
    .map(|&(k, a)| MapParams::standard(k, a, 0.3).expect("valid"))
    .collect()
}

fn continuity(hooks: CheckHooks) -> Outcome {
    let mut worst = 0.0f64;
    for p in piecewise_examples() {
        let p = if p.kind() == SystemKind::PeriodDoubling {
            p.with_breakpoint_shift(hooks.breakpoint_shift)
        } else {
            p
        };
        for x0 in p.breakpoints() {
            let (l, m, r) = (p.h(next_down(x0)), p.h(x0), p.h(next_up(x0)));
            let unit = ulp(l.abs().max(m.abs()).max(r.abs()).max((p.a() * x0).abs()));
            worst = worst.max((l - m).abs() / unit).max((r - m).abs() / unit);
        }
    }
    Ok((worst <= 2.0, format!("max jump {worst:.1} ulps")))
}

fn monotonicity() -> Outcome {
    let mut bad = 0;
    for p in piecewise_examples() {
        let xs: Vec<f64> = (0..100_000).map(|k| -5.0 + 10.0 * k as f64 / 99_999.0).collect();
        let dec = p.kind() == SystemKind::PeriodDoubling;
        for w in xs.windows(2) {
            let (h0, h1) = (p.h(w[0]), p.h(w[1]));
            let ok = if dec { h1 <= h0 } else { h1 >= h0 };
            let hh_ok = !dec || p.h(h1) >= p.h(h0);
            if !ok || !hh_ok {
                bad += 1;
            }
        }
    }
    Ok((bad == 0, format!("{bad} order violations")))
}

fn rotation() -> Outcome {
    let p = pd(0.3);
    let (mut x, mut t) = (0.2, 0.1);
    for _ in 0..1_000_000 {
        (x, t) = p.step(x, t);
    }
    let exact = shifted_angle(0.1, -1_000_000, p.omega());
    let d = qpforce_angle_dist(t, exact);
    Ok((d <= 1e-7 && x.is_finite(), format!("drift {d:.2e} rad")))
}

fn qpforce_angle_dist(x: f64, y: f64) -> f64 {
    let d = (x - y).rem_euclid(TAU);
    d.min(TAU - d)
}

fn residuals() -> Outcome {
    let mut worst = 0.0f64;
    for (kind, a) in [
        (SystemKind::PitchforkSuper, 2.0),
        (SystemKind::PitchforkSuper, 3.0),
        (SystemKind::PitchforkSub, 2.0),
        (SystemKind::PitchforkSub, 3.0),
        (SystemKind::SaddleNode, 2.0),
        (SystemKind::SaddleNode, 3.0),
        (SystemKind::PeriodDoubling, -2.0),
        (SystemKind::PeriodDoubling, -3.0),
    ] {
        for g in [TrigPoly::default_forcing(), TrigPoly::sine(1)] {
            let p = MapParams::new(kind, a, 0.0, 1.0, golden_omega(), g.clone())?;
            let bs = critical_b(&p)?.b_star;
            for &v in qpforce_variants(kind) {
                let sol = solve_bold_mu(&p, v)?;
                worst = worst.max(mu_residual(&sol, 0.5 * bs, &g, 4096)?);
            }
        }
    }
    Ok((worst <= 1e-10, format!("max residual {worst:.2e}")))
}

fn qpforce_variants(kind: SystemKind) -> &'static [Variant] {
    if kind == SystemKind::PitchforkSub {
        &[Variant::Main, Variant::Hat]
    } else {
        &[Variant::Main]
    }
}

fn b_star_agreement() -> Outcome {
    let mut worst = 0.0f64;
    for (kind, sign) in [
        (SystemKind::PitchforkSuper, 1.0),
        (SystemKind::SaddleNode, 1.0),
        (SystemKind::PeriodDoubling, -1.0),
    ] {
        for m in [1.5, 2.0, 3.0, 5.0] {
            let p = MapParams::standard(kind, sign * m, 0.0)?;
            let c = critical_b(&p)?.b_star;
            let b = critical_b_bisect(&p, 1e-14)?.b_star;
            worst = worst.max((c - b).abs() / c);
        }
    }
    Ok((worst <= 1e-9, format!("max relative gap {worst:.2e}")))
}

/// Dense scan with a parabola through the best node and its neighbours.
fn dense_max<F: Fn(f64) -> f64>(f: F, m: usize) -> f64 {
    let v: Vec<f64> = (0..m).map(|j| f(grid_angle(j, m))).collect();
    let (j, _) = v
        .iter()
        .enumerate()
        .fold((0, f64::NEG_INFINITY), |b, (j, &x)| if x > b.1 { (j, x) } else { b });
    let (l, c, r) = (v[(j + m - 1) % m], v[j], v[(j + 1) % m]);
    let den = l - 2.0 * c + r;
    if den == 0.0 {
        c
    } else {
        c - (r - l) * (r - l) / (8.0 * den)
    }
}

fn distance_identity() -> Outcome {
    let p = pd(0.0);
    let bs = critical_b(&p)?.b_star;
    let mu = solve_bold_mu(&p, Variant::Main)?;
    let a = p.a();
    let mut worst = 0.0f64;
    for f in [0.3, 0.8, 1.0] {
        let b = f * bs;
        let (_, lhs) = min_seed_gap(&p, Side::Upper, b)?;
        // a < 0: the minimum of a·X is a times the maximum of X
        let rhs = a * dense_max(|t| 1.0 / a - mu.eval(b, t - p.omega()), 1 << 18);
        worst = worst.max((lhs - rhs).abs());
    }
    Ok((worst <= 1e-9, format!("max deviation {worst:.2e}")))
}

fn monotone_lambda(sz: &Sizes) -> Outcome {
    let ev = CurveEvaluator::new(&pd_at_b_star()?, 0)?;
    let mut neg = 0.0f64;
    let mut up = 0.0f64;
    for j in 0..sz.grid {
        let t = grid_angle(j, sz.grid);
        let mut prev = ev.lambda_at(t, 0);
        neg = neg.min(prev);
        for n in 1..=sz.n {
            let l = ev.lambda_at(t, n);
            neg = neg.min(l);
            up = up.max(l - prev);
            prev = l;
        }
    }
    Ok((
        neg >= -1e-10 && up <= 1e-10,
        format!("min λ {neg:.2e}, max increase {up:.2e}"),
    ))
}

fn psi_bounds() -> Outcome {
    let ev0 = CurveEvaluator::new(&pd_at_b_star()?, 0)?;
    let cap = ev0.psi_cap();
    let mut bad = 0;
    for i in 0..1024u64 {
        let t = TAU * draw_unit(7, i);
        let mut prev = ev0.eval_psi_n(t);
        for n in 0..=10 {
            let v = ev0.with_n(n).eval_psi_n(t);
            if !(0.0..=cap + 1e-9).contains(&v) || (n > 0 && prev > v + 1e-9) {
                bad += 1;
            }
            prev = v;
        }
    }
    Ok((bad == 0, format!("{bad} bound or order violations")))
}

fn zeros(sz: &Sizes) -> Outcome {
    let mut detail = Vec::new();
    let mut ok = true;
    for (kind, a) in [(SystemKind::PeriodDoubling, -3.0), (SystemKind::PitchforkSuper, 2.0)] {
        let p = MapParams::standard(kind, a, 0.0)?;
        let p = p.with_b(critical_b(&p)?.b_star)?;
        for n in [0usize, 3, 7] {
            let ev = CurveEvaluator::new(&p, n)?;
            match zero_count(&ev, 1e-9, thresholds::ZERO_FLOOR, sz.zero_grid, 1e-3) {
                Ok(z) => {
                    ok &= z.count == n + 1;
                    detail.push(format!("{}:{}", n, z.count));
                }
                Err(e) => {
                    ok = false;
                    detail.push(format!("{n}: {e}"));
                }
            }
        }
    }
    Ok((ok, format!("n:count {}", detail.join(" "))))
}

fn convergence(sz: &Sizes) -> Outcome {
    let p = pd(0.0);
    let bs = critical_b(&p)?.b_star;
    let below = convergence_report(&CurveEvaluator::new(&p.with_b(0.9 * bs)?, 0)?, sz.n, sz.grid)?.cauchy_uniform;
    let at = convergence_report(&CurveEvaluator::new(&p.with_b(bs)?, 0)?, sz.n, sz.grid)?.cauchy_uniform;
    let mut regimes = true;
    for (kind, a) in [
        (SystemKind::PitchforkSuper, 2.0),
        (SystemKind::PitchforkSub, 3.0),
        (SystemKind::SaddleNode, 2.0),
        (SystemKind::PeriodDoubling, -3.0),
    ] {
        let q = MapParams::standard(kind, a, 0.0)?;
        let b = critical_b(&q)?.b_star;
        regimes &= regime_classify(&q.with_b(0.5 * b)?)?.regime == Regime::Before;
        regimes &= regime_classify(&q.with_b(b)?)?.regime == Regime::At;
        regimes &= regime_classify(&q.with_b(1.5 * b)?)?.regime == Regime::After;
    }
    Ok((
        below && !at && regimes,
        format!("uniform at 0.9b*: {below}, at b*: {at}, regimes ok: {regimes}"),
    ))
}

fn lyapunov(sz: &Sizes) -> Outcome {
    let p = pd(0.0);
    let bs = critical_b(&p)?.b_star;
    let rep = lyapunov_curve(&p.with_b(0.5 * bs)?, CurveChoice::Repelling, 100_000, 0, 0.1)?;
    let att = lyapunov_curve(&p.with_b(bs)?, CurveChoice::Attracting, sz.lyap_steps, 1000, 0.1)?;
    let ok = (rep.value - 3f64.ln()).abs() <= 1e-6
        && rep.flat_fraction == 0.0
        && att.is_neg_infinity()
        && att.flat_fraction > thresholds::FLAT_FRACTION_MIN;
    Ok((
        ok,
        format!(
            "repelling {:.9}, attracting flat fraction {:.4}",
            rep.value, att.flat_fraction
        ),
    ))
}

fn capture() -> Outcome {
    let mut ok = true;
    let mut detail = Vec::new();
    for (kind, a) in [(SystemKind::PeriodDoubling, -3.0), (SystemKind::PitchforkSub, 3.0)] {
        let p = MapParams::standard(kind, a, 0.0)?;
        let p = p.with_b(critical_b(&p)?.b_star)?;
        let s = capture_experiment(&p, 1000, 10_000, 1)?;
        let one = rayon::ThreadPoolBuilder::new()
            .num_threads(1)
            .build()
            .map_err(|e| crate::error::WbError::Numerical(e.to_string()))?;
        let s1 = one.install(|| capture_experiment(&p, 1000, 10_000, 1))?;
        ok &= s.fraction() >= 0.99 && s == s1;
        detail.push(format!("{} {:.3}", kind.name(), s.fraction()));
    }
    Ok((ok, detail.join(", ")))
}

/// Half the largest gap of `{θ₀ + s·k·ω : 0 ≤ k ≤ K}` on the circle.
pub fn fill_distance(theta0: f64, step: i64, omega: f64, k_max: usize) -> f64 {
    let mut z: Vec<f64> = (0..=k_max as i64)
        .map(|k| shifted_angle(theta0, -k * step, omega))
        .collect();
    z.sort_by(f64::total_cmp);
    let mut gap = TAU - z[z.len() - 1] + z[0];
    for w in z.windows(2) {
        gap = gap.max(w[1] - w[0]);
    }
    gap / 2.0
}

fn area(sz: &Sizes) -> Outcome {
    let p = pd_at_b_star()?;
    let a = area_estimate(&p, sz.n, sz.area_grid)?;
    let t0 = CurveEvaluator::new(&p, 0)?.collision_theta()?;
    let fd = fill_distance(t0, 2, p.omega(), 10_000);
    Ok((
        a >= thresholds::FLOOR_A && fd < 1e-3,
        format!("area {a:.6}, fill distance {fd:.3e}"),
    ))
}

fn contraction() -> Outcome {
    let p = MapParams::standard(SystemKind::PeriodDoubling, -0.5, 0.3)?;
    let s0 = uniform_contraction_solve(&p, 1e-10, 256, &[0.0; 256])?;
    let s1 = uniform_contraction_solve(&p, 1e-10, 256, &[10.0; 256])?;
    let d = s0
        .curve
        .values
        .iter()
        .zip(&s1.curve.values)
        .fold(0.0f64, |m, (x, y)| m.max((x - y).abs()));
    let worst = s1.changes[1..].windows(2).map(|w| w[1] / w[0]).fold(0.0f64, f64::max);
    Ok((
        d <= 2e-10 && worst <= 0.501,
        format!("distance {d:.2e}, worst ratio {worst:.4}"),
    ))
}

fn symmetry() -> Outcome {
    let w = golden_omega();
    let sine = MapParams::new(SystemKind::PitchforkSuper, 2.0, 0.0, 1.0, w, TrigPoly::sine(1))?;
    let pos = MapParams::standard(SystemKind::PitchforkSuper, 2.0, 0.0)?;
    let c2 = pos.with_g(TrigPoly::cosine(2))?;
    let a = matches!(symmetry_check(&sine)?, SymmetryReport::Antisymmetric { pass: true, .. });
    let b = matches!(symmetry_check(&pos)?, SymmetryReport::Nonnegative { pass: true, .. });
    let c = symmetry_check(&c2)? == SymmetryReport::NotApplicable;
    Ok((
        a && b && c,
        format!("antisymmetric {a}, nonnegative {b}, not applicable {c}"),
    ))
}

fn invariant_region() -> Outcome {
    let p = pd(0.0);
    let bs = critical_b(&p)?.b_star;
    let q = p.with_b(0.8 * bs)?;
    let ev = CurveEvaluator::new(&q, 0)?;
    let mut bad = 0;
    for i in 0..10_000u64 {
        let t = TAU * draw_unit(11, 2 * i);
        let s = draw_unit(11, 2 * i + 1);
        let (lo, hi) = (ev.mu(t), ev.seed(t));
        let x = lo + s * (hi - lo);
        let (x2, t2) = q.step2(x, t);
        let t2 = reduce_angle(t2);
        if x2 < ev.mu(t2) - 1e-12 || x2 > ev.seed(t2) + 1e-12 {
            bad += 1;
        }
    }
    Ok((bad == 0, format!("{bad} of 10000 points left the region")))
}

/// Runs every battery at the given level.
pub fn check_suite(level: Level, hooks: CheckHooks) -> CheckReport {
    let sz = sizes(level);
    let checks: Vec<Check> = vec![
        ("h continuity", Box::new(move || continuity(hooks))),
        ("h monotonicity", Box::new(monotonicity)),
        ("rotation accuracy", Box::new(rotation)),
        ("mu residual", Box::new(residuals)),
        ("b* closed form vs bisection", Box::new(b_star_agreement)),
        ("distance identity", Box::new(distance_identity)),
        ("monotone lambda", Box::new(|| monotone_lambda(&sz))),
        ("psi bounds", Box::new(psi_bounds)),
        ("zero count", Box::new(|| zeros(&sz))),
        ("convergence and regimes", Box::new(|| convergence(&sz))),
        ("lyapunov", Box::new(|| lyapunov(&sz))),
        ("capture", Box::new(capture)),
        ("area and zero density", Box::new(|| area(&sz))),
        ("uniform contraction", Box::new(contraction)),
        ("symmetry", Box::new(symmetry)),
        ("invariant region", Box::new(invariant_region)),
    ];
    let items = checks
        .into_iter()
        .map(|(name, f)| {
            let t = Instant::now();
            let (pass, detail) = match f() {
                Ok(r) => r,
                Err(e) => (false, e.to_string()),
            };
            CheckItem {
                name,
                pass,
                detail,
                elapsed: t.elapsed(),
            }
        })
        .collect();
    CheckReport { level, items }
}
