//! Scalar diagnostics built on the curve evaluators.

use std::collections::BTreeMap;
use std::f64::consts::{PI, TAU};

use rayon::prelude::*;

use crate::cohomology::{critical_b, min_seed_gap, side_critical_b, solve_bold_mu, Side};
use crate::curves::{
    convergence_report, lipschitz_estimate, sample_curve, shifted_angle, CurveEvaluator, CurveKind, CurveSample,
    SampleMeta,
};
use crate::error::{invalid, Error, Result};
use crate::forcing::{grid_angle, TrigPoly};
use crate::maps::{reduce_angle, MapParams, Mode, SystemKind, Variant};
use crate::numeric::angle_dist;
use crate::rng::draw_unit;

fn require_at_b_star(params: &MapParams) -> Result<f64> {
    let bs = critical_b(params)?.b_star;
    if (params.b() - bs).abs() > 1e-12 * bs {
        return invalid(format!("needs b = b* = {bs:.17}, got {}", params.b()));
    }
    Ok(bs)
}

/// `(1/2π)∫ log ψₙ` over the grid, leaving out windows of `radius` around
/// `θ₀ + k·s·ω`, `k = −1..=n`, where `ψₙ` vanishes or takes its zero-case
/// value. Sums in index order; the excluded windows contribute nothing.
pub fn log_psi_integral(params: &MapParams, n: usize, m: usize, radius: f64) -> Result<f64> {
    require_at_b_star(params)?;
    let ev = CurveEvaluator::new(params, n)?;
    let t0 = ev.collision_theta()?;
    let s = ev.steps() as i64;
    let windows: Vec<f64> = (-1..=n as i64)
        .map(|k| shifted_angle(t0, -k * s, params.omega()))
        .collect();
    let terms: Vec<(f64, f64)> = (0..m)
        .into_par_iter()
        .map(|j| {
            let t = grid_angle(j, m);
            if windows.iter().any(|&z| angle_dist(t, z) <= radius) {
                (t, 0.0)
            } else {
                (t, ev.eval_psi_n(t).ln())
            }
        })
        .collect();
    let mut sum = 0.0;
    for (t, v) in terms {
        if !v.is_finite() {
            return Err(Error::NumericalFailure(format!("log psi = {v} at theta = {t}")));
        }
        sum += v;
    }
    Ok(sum / m as f64)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CurveChoice {
    Repelling,
    Attracting,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LyapunovReport {
    /// Mean of `log|h′|` along the orbit; `−∞` as soon as one multiplier is 0.
    pub value: f64,
    /// Fraction of orbit points on a flat piece.
    pub flat_fraction: f64,
    pub orbit_length: usize,
    pub burn_in: usize,
}

impl LyapunovReport {
    pub fn is_neg_infinity(&self) -> bool {
        self.value == f64::NEG_INFINITY
    }
}

/// Lyapunov exponent along the repelling curve (`x_k = μ(θ_k)` exactly) or
/// along the orbit of the attracting object started on `φ₀` after
/// `burn_in ≥ 1000` steps. Multipliers use `h′ = a` at breakpoints.
pub fn lyapunov_curve(
    params: &MapParams,
    which: CurveChoice,
    steps: usize,
    burn_in: usize,
    theta_seed: f64,
) -> Result<LyapunovReport> {
    if steps == 0 {
        return invalid("orbit length must be positive");
    }
    let w = params.omega();
    let theta = |k: usize| reduce_angle(theta_seed + k as f64 * w);
    let mut flat = 0usize;
    let mut sum = 0.0;
    match which {
        CurveChoice::Repelling => {
            params.require_nonuniform()?;
            let bs = critical_b(params)?.b_star;
            if !(params.b() > 0.0 && params.b() < bs) {
                return invalid(format!("the repelling curve needs 0 < b < b* = {bs}"));
            }
            let mu = solve_bold_mu(params, Variant::Main)?;
            for k in 0..steps {
                let x = mu.eval(params.b(), theta(k));
                if params.piece_excess(Variant::Main, x) > 0.0 {
                    return Err(Error::NumericalFailure(format!(
                        "repelling orbit left the linear piece at theta = {}",
                        theta(k)
                    )));
                }
                sum += params.h_prime(x).abs().ln();
            }
        }
        CurveChoice::Attracting => {
            if burn_in < 1000 {
                return invalid("burn-in of at least 1000 steps required");
            }
            let ev = CurveEvaluator::new(params, 0)?;
            let mut x = ev.seed(theta_seed);
            for k in 0..burn_in {
                x = params.fiber_step(x, theta(k));
            }
            for k in burn_in..burn_in + steps {
                let d = params.h_prime(x).abs();
                if d == 0.0 {
                    flat += 1;
                } else {
                    sum += d.ln();
                }
                x = params.fiber_step(x, theta(k));
            }
        }
    }
    let value = if flat > 0 {
        f64::NEG_INFINITY
    } else {
        sum / steps as f64
    };
    let r = LyapunovReport {
        value,
        flat_fraction: flat as f64 / steps as f64,
        orbit_length: steps,
        burn_in,
    };
    assert_eq!(r.is_neg_infinity(), r.flat_fraction > 0.0);
    Ok(r)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CaptureStats {
    pub trials: u64,
    pub captured: u64,
    /// Step index of the first visit to a flat piece → number of trials.
    pub iteration_histogram: BTreeMap<u64, u64>,
    pub max_iters: u64,
    pub seed: u64,
}

impl CaptureStats {
    pub fn fraction(&self) -> f64 {
        self.captured as f64 / self.trials as f64
    }
}

/// First step `k < max_iters` at which the orbit of `(x₀, θ₀)` lands on a
/// flat piece of `h`. The orbit is tracked as its gap to `μ`, so a start on
/// `μ` stays there.
pub fn capture_orbit(params: &MapParams, theta0: f64, x0: f64, max_iters: u64) -> Result<Option<u64>> {
    let mu = solve_bold_mu(params, Variant::Main)?;
    let (a, b, w, sg) = (params.a(), params.b(), params.omega(), params.sigma());
    let ang = |k: u64| theta0 + k as f64 * w;
    let mut mu_k = mu.eval(b, theta0);
    let mut d = x0 - mu_k;
    for k in 0..max_iters {
        let x = mu_k + d;
        let he = params.h_eval(x);
        if he.branch.is_flat() {
            return Ok(Some(k));
        }
        let mu_next = mu.eval(b, ang(k + 1));
        if params.piece_excess(Variant::Main, x) <= 0.0 {
            d *= a;
        } else {
            d = he.value + sg * b * params.g().eval(ang(k)) - mu_next;
        }
        mu_k = mu_next;
    }
    Ok(None)
}

/// Seeded capture experiment. Trial `i` uses draws `2i` (angle, uniform on
/// `[0, 2π)`) and `2i + 1` (position `s ∈ [0.01, 1]`, `x₀ = μ + s·(φ₀ − μ)`)
/// of the splitmix64 stream, so results do not depend on thread count.
pub fn capture_experiment(params: &MapParams, trials: u64, max_iters: u64, seed: u64) -> Result<CaptureStats> {
    params.require_nonuniform()?;
    if trials == 0 {
        return invalid("at least one trial");
    }
    let bs = critical_b(params)?.b_star;
    if params.b() > bs * (1.0 + 1e-12) {
        return invalid(format!("capture needs b <= b* = {bs}"));
    }
    let ev = CurveEvaluator::new(params, 0)?;
    let hits: Vec<Option<u64>> = (0..trials)
        .into_par_iter()
        .map(|i| {
            let t0 = TAU * draw_unit(seed, 2 * i);
            let s = 0.01 + 0.99 * draw_unit(seed, 2 * i + 1);
            let m = ev.mu(t0);
            let x0 = m + s * (ev.seed(t0) - m);
            capture_orbit(params, t0, x0, max_iters)
        })
        .collect::<Result<_>>()?;
    let mut hist = BTreeMap::new();
    for k in hits.iter().flatten() {
        *hist.entry(*k).or_insert(0) += 1;
    }
    let captured = hist.values().sum();
    Ok(CaptureStats {
        trials,
        captured,
        iteration_histogram: hist,
        max_iters,
        seed,
    })
}

/// Mean of `λₙ` over the grid: the area of the region between `μ` and `φₙ`
/// per unit angle. Nonincreasing in `n`.
pub fn area_estimate(params: &MapParams, n: usize, m: usize) -> Result<f64> {
    params.require_nonuniform()?;
    if params.b() > 0.0 {
        let bs = critical_b(params)?.b_star;
        if params.b() > bs * (1.0 + 1e-12) {
            return invalid(format!("area needs b <= b* = {bs}"));
        }
    }
    let ev = CurveEvaluator::new(params, n)?;
    let vals: Vec<f64> = (0..m)
        .into_par_iter()
        .map(|j| ev.eval_lambda_n(grid_angle(j, m)))
        .collect();
    Ok(vals.iter().sum::<f64>() / m as f64)
}

#[derive(Debug, Clone, PartialEq)]
pub struct FractalEntry {
    pub b: f64,
    pub n_used: usize,
    pub converged: bool,
    pub l_estimate: f64,
    pub sup_norm: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct FractalScan {
    pub entries: Vec<FractalEntry>,
    /// Grid points where `φ(b_{i+1}) > φ(b_i) + 1e-9`.
    pub monotonicity_violations: usize,
    /// Grid points where a curve leaves `[μ, φ₀]` by more than `1e-9`.
    pub region_violations: usize,
}

/// First `n` from which [`convergence_report`] keeps `|φ_{n+1} − φ_n|`
/// below its tolerance, on a grid of at most 4096 points plus the collision
/// orbit; `n_max` and `false` when the tail never settles.
pub fn converge_n(ev: &CurveEvaluator, n_max: usize, m: usize) -> Result<(usize, bool)> {
    let r = convergence_report(ev, n_max, m.min(4096))?;
    if !r.cauchy_uniform {
        return Ok((n_max, false));
    }
    let n0 = r.sup_gaps.iter().rposition(|&g| g >= r.tol).map_or(0, |k| k + 1);
    Ok((n0, true))
}

/// Lipschitz growth of the attracting curve as `b → b*`, for forcing
/// `g ≥ 0` and increasing `b_list` below `b*`.
pub fn fractal_scan(
    params: &MapParams,
    b_list: &[f64],
    interval: (f64, f64),
    n_converge: usize,
    m: usize,
) -> Result<FractalScan> {
    params.require_nonuniform()?;
    if !params.g().classify(4096.max(2 * params.g().degree() + 2))?.nonnegative {
        return invalid("fractalization scan needs g >= 0");
    }
    let bs = critical_b(params)?.b_star;
    if b_list.is_empty() || b_list.windows(2).any(|w| w[1] <= w[0]) {
        return invalid("b_list must be nonempty and strictly increasing");
    }
    if b_list.iter().any(|&b| !(b >= 0.0 && b < bs)) {
        return invalid(format!("every b must lie in [0, b* = {bs})"));
    }
    let mut entries = Vec::new();
    let mut curves: Vec<Vec<f64>> = Vec::new();
    let mut region_violations = 0;
    let mono_grid = 1024;
    for &b in b_list {
        let p = params.with_b(b)?;
        let ev0 = CurveEvaluator::new(&p, 0)?;
        let (n, converged) = converge_n(&ev0, n_converge, m)?;
        let ev = ev0.with_n(n);
        let s = sample_curve(&ev, CurveKind::Phi, m, "phi_n")?;
        for (j, t) in s.thetas().enumerate() {
            let v = s.values[j];
            let (lo, hi) = (ev.mu(t), ev.seed(t));
            let (lo, hi) = (lo.min(hi), lo.max(hi));
            if v < lo - 1e-9 || v > hi + 1e-9 {
                region_violations += 1;
            }
        }
        entries.push(FractalEntry {
            b,
            n_used: n,
            converged,
            l_estimate: lipschitz_estimate(&s, interval.0, interval.1)?,
            sup_norm: s.sup_norm(),
        });
        curves.push(
            (0..mono_grid)
                .into_par_iter()
                .map(|j| ev.eval_phi_n(grid_angle(j, mono_grid)))
                .collect(),
        );
    }
    let monotonicity_violations = curves
        .windows(2)
        .map(|w| {
            w[1].iter()
                .zip(&w[0])
                .filter(|(hi_b, lo_b)| **hi_b > **lo_b + 1e-9)
                .count()
        })
        .sum();
    Ok(FractalScan {
        entries,
        monotonicity_violations,
        region_violations,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Regime {
    Before,
    At,
    After,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RegimeReport {
    pub regime: Regime,
    pub b_star: f64,
    /// Continuous attracting curves (two-periodic ones counted singly).
    pub attracting: u32,
    pub repelling: u32,
    pub two_periodic: bool,
    pub expected_curves: &'static str,
}

/// Places `b` relative to `b*` (relative tolerance `1e-9`) and returns the
/// curve inventory of that regime.
pub fn regime_classify(params: &MapParams) -> Result<RegimeReport> {
    params.require_nonuniform()?;
    let bs = critical_b(params)?.b_star;
    let rel = (params.b() - bs) / bs;
    let regime = if rel.abs() <= 1e-9 {
        Regime::At
    } else if rel < 0.0 {
        Regime::Before
    } else {
        Regime::After
    };
    use SystemKind::*;
    let (attracting, repelling, two_periodic, expected_curves) = match (regime, params.kind()) {
        (Regime::Before, PitchforkSuper) => (2, 1, false, "2 attracting + 1 repelling invariant"),
        (Regime::Before, PitchforkSub) => (1, 2, false, "1 attracting + 2 repelling invariant"),
        (Regime::Before, SaddleNode) => (1, 1, false, "1 attracting + 1 repelling invariant"),
        (Regime::Before, PeriodDoubling) => (2, 1, true, "2 attracting two-periodic + 1 repelling invariant"),
        (Regime::At, _) => (
            0,
            0,
            false,
            "attractor and repeller collide; the attracting curve is semicontinuous, not continuous",
        ),
        (Regime::After, SaddleNode) => (0, 0, false, "no continuous invariant curve"),
        (Regime::After, _) => (1, 0, false, "unique continuous invariant curve"),
        (_, SmoothPD) => unreachable!(),
    };
    Ok(RegimeReport {
        regime,
        b_star: bs,
        attracting,
        repelling,
        two_periodic,
        expected_curves,
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct UniformSolution {
    pub curve: CurveSample,
    pub sweeps: usize,
    /// Sup change of each sweep.
    pub changes: Vec<f64>,
}

/// Fixed point of the curve operator for `|a| < 1`. Each sweep projects
/// the current samples to degree `M/4`, evaluates that polynomial at
/// `θ_j − ω` and applies the map once.
pub fn uniform_contraction_solve(
    params: &MapParams,
    tol: f64,
    m: usize,
    seed_curve: &[f64],
) -> Result<UniformSolution> {
    if params.mode() != Mode::Uniform {
        return invalid("uniform contraction needs |a| < 1");
    }
    if seed_curve.len() != m || m < 16 {
        return invalid("seed curve must have M >= 16 samples");
    }
    if !(tol > 0.0) {
        return invalid("tolerance must be positive");
    }
    let max_sweeps = (10.0 * tol.ln() / params.a().abs().ln()).ceil() as usize;
    let w = params.omega();
    let deg = m / 4;
    let mut cur = seed_curve.to_vec();
    let mut changes = Vec::new();
    for sweep in 1..=max_sweeps {
        let prev = TrigPoly::project_samples(&cur, deg)?.sample_shifted(m, w)?;
        let next: Vec<f64> = prev
            .iter()
            .enumerate()
            .map(|(j, &x)| params.fiber_step(x, grid_angle(j, m) - w))
            .collect();
        let change = next.iter().zip(&cur).fold(0.0f64, |s, (x, y)| s.max((x - y).abs()));
        cur = next;
        changes.push(change);
        if change < tol {
            let meta = SampleMeta {
                kind: params.kind(),
                a: params.a(),
                b: params.b(),
                n: sweep,
                label: "invariant".into(),
            };
            return Ok(UniformSolution {
                curve: CurveSample {
                    grid_size: m,
                    values: cur,
                    meta,
                },
                sweeps: sweep,
                changes,
            });
        }
    }
    Err(Error::NumericalFailure(format!(
        "no convergence to {tol:e} in {max_sweeps} sweeps (last change {:e})",
        changes.last().copied().unwrap_or(f64::NAN)
    )))
}

#[derive(Debug, Clone, PartialEq)]
pub enum SymmetryReport {
    /// `g(θ + π) = −g(θ)`: `μ` is odd under the half turn and both pairs
    /// collide at the same `b`.
    Antisymmetric {
        max_sum: f64,
        b_upper: f64,
        b_lower: f64,
        rel_diff: f64,
        pass: bool,
    },
    /// `g ≥ 0`: only the upper pair collides; the lower one keeps a margin.
    Nonnegative {
        b_upper: f64,
        b_test: f64,
        margin: f64,
        pass: bool,
    },
    NotApplicable,
}

/// Symmetry cases of the supercritical pitchfork.
pub fn symmetry_check(params: &MapParams) -> Result<SymmetryReport> {
    if params.kind() != SystemKind::PitchforkSuper || params.a() <= 1.0 {
        return invalid("symmetry check applies to the supercritical pitchfork with a > 1");
    }
    let class = params.g().classify(4096.max(2 * params.g().degree() + 2))?;
    if class.pi_antisymmetric {
        let mu = solve_bold_mu(params, Variant::Main)?;
        let max_sum = (0..4096)
            .map(|j| {
                let t = grid_angle(j, 4096);
                (mu.unit(t + PI) + mu.unit(t)).abs()
            })
            .fold(0.0, f64::max);
        let (b_upper, _) = side_critical_b(params, Side::Upper)?;
        let (b_lower, _) = side_critical_b(params, Side::Lower)?;
        let rel_diff = (b_upper - b_lower).abs() / b_upper.min(b_lower);
        Ok(SymmetryReport::Antisymmetric {
            max_sum,
            b_upper,
            b_lower,
            rel_diff,
            pass: max_sum <= 1e-12 && rel_diff <= 1e-9,
        })
    } else if class.nonnegative {
        let (b_upper, _) = side_critical_b(params, Side::Upper)?;
        let b_test = 0.99 * b_upper;
        let margin = min_seed_gap(params, Side::Lower, b_test)?.1;
        Ok(SymmetryReport::Nonnegative {
            b_upper,
            b_test,
            margin,
            pass: margin > 1e-3 * PI,
        })
    } else {
        Ok(SymmetryReport::NotApplicable)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::maps::golden_omega;

    fn pd(b: f64) -> MapParams {
        MapParams::standard(SystemKind::PeriodDoubling, -3.0, b).unwrap()
    }

    fn b_star() -> f64 {
        critical_b(&pd(0.0)).unwrap().b_star
    }

    #[test]
    fn log_psi_precheck() {
        assert!(log_psi_integral(&pd(0.3), 0, 256, 1e-3).is_err());
    }

    #[test]
    fn log_psi_nonpositive_up_to_slack() {
        let v = log_psi_integral(&pd(b_star()), 5, 1 << 13, 1e-3).unwrap();
        assert!(v <= 0.05, "{v}");
    }

    #[test]
    fn lyapunov_repelling_is_log_a() {
        let r = lyapunov_curve(&pd(b_star() / 2.0), CurveChoice::Repelling, 100_000, 0, 0.1).unwrap();
        assert!((r.value - 3f64.ln()).abs() < 1e-6);
        assert_eq!(r.flat_fraction, 0.0);
        assert!(lyapunov_curve(&pd(b_star()), CurveChoice::Repelling, 10, 0, 0.1).is_err());
    }

    #[test]
    fn lyapunov_attracting_at_b_star() {
        let r = lyapunov_curve(&pd(b_star()), CurveChoice::Attracting, 100_000, 1000, 0.1).unwrap();
        assert!(r.is_neg_infinity());
        assert!(r.flat_fraction > 0.01);
        assert!(lyapunov_curve(&pd(b_star()), CurveChoice::Attracting, 10, 10, 0.1).is_err());
    }

    #[test]
    fn lyapunov_uniform_bound() {
        let p = MapParams::standard(SystemKind::PeriodDoubling, -0.5, 0.3).unwrap();
        let r = lyapunov_curve(&p, CurveChoice::Attracting, 10_000, 1000, 0.0).unwrap();
        assert!(r.value <= 0.5f64.ln() + 1e-3);
    }

    #[test]
    fn capture_on_mu_never_happens() {
        let p = pd(b_star());
        let mu = solve_bold_mu(&p, Variant::Main).unwrap();
        for k in 0..20 {
            let t = 0.3 * k as f64;
            assert_eq!(capture_orbit(&p, t, mu.eval(p.b(), t), 10_000).unwrap(), None);
        }
    }

    #[test]
    fn capture_is_reproducible() {
        let p = pd(b_star());
        let a = capture_experiment(&p, 200, 10_000, 1).unwrap();
        let b = capture_experiment(&p, 200, 10_000, 1).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.iteration_histogram.values().sum::<u64>(), a.captured);
        let one = rayon::ThreadPoolBuilder::new().num_threads(1).build().unwrap();
        let c = one.install(|| capture_experiment(&p, 200, 10_000, 1).unwrap());
        assert_eq!(a, c);
    }

    #[test]
    fn area_examples() {
        assert_eq!(area_estimate(&pd(0.0), 7, 256).unwrap(), 1.0);
        let p = pd(b_star());
        let a10 = area_estimate(&p, 10, 2048).unwrap();
        let a11 = area_estimate(&p, 11, 2048).unwrap();
        let a20 = area_estimate(&p, 20, 2048).unwrap();
        assert!(a11 <= a10 + 1e-10 && a20 <= a11 + 1e-10 && a20 > 0.0);
    }

    #[test]
    fn regime_examples() {
        let bs = b_star();
        let r = regime_classify(&pd(0.5 * bs)).unwrap();
        assert_eq!(r.regime, Regime::Before);
        assert_eq!(r.expected_curves, "2 attracting two-periodic + 1 repelling invariant");
        assert_eq!(regime_classify(&pd(bs)).unwrap().regime, Regime::At);
        let f3 = MapParams::standard(SystemKind::SaddleNode, 2.0, 0.0).unwrap();
        let b3 = critical_b(&f3).unwrap().b_star;
        let r = regime_classify(&f3.with_b(1.5 * b3).unwrap()).unwrap();
        assert_eq!(r.regime, Regime::After);
        assert_eq!(r.expected_curves, "no continuous invariant curve");
        assert!(regime_classify(&pd(0.0).with_b(0.1).unwrap().with_g(TrigPoly::default()).unwrap()).is_ok());
        let u = MapParams::standard(SystemKind::PeriodDoubling, -0.5, 0.1).unwrap();
        assert!(regime_classify(&u).is_err());
    }

    #[test]
    fn uniform_contraction_examples() {
        let p = MapParams::standard(SystemKind::SaddleNode, 0.5, 0.0).unwrap();
        let s = uniform_contraction_solve(&p, 1e-10, 256, &[0.3; 256]).unwrap();
        assert!(s.curve.sup_norm() <= 1e-10);
        let p = MapParams::standard(SystemKind::PeriodDoubling, -0.5, 0.3).unwrap();
        let a = uniform_contraction_solve(&p, 1e-10, 256, &[0.0; 256]).unwrap();
        let b = uniform_contraction_solve(&p, 1e-10, 256, &[10.0; 256]).unwrap();
        let d = a
            .curve
            .values
            .iter()
            .zip(&b.curve.values)
            .fold(0.0f64, |m, (x, y)| m.max((x - y).abs()));
        assert!(d <= 2e-10);
        for w in b.changes[1..].windows(2) {
            assert!(w[1] <= (0.5 + 1e-3) * w[0]);
        }
    }

    #[test]
    fn symmetry_examples() {
        let w = golden_omega();
        let sine = MapParams::new(SystemKind::PitchforkSuper, 2.0, 0.0, 1.0, w, TrigPoly::sine(1)).unwrap();
        match symmetry_check(&sine).unwrap() {
            SymmetryReport::Antisymmetric { pass, rel_diff, .. } => assert!(pass && rel_diff <= 1e-9),
            r => panic!("{r:?}"),
        }
        let pos = MapParams::standard(SystemKind::PitchforkSuper, 2.0, 0.0).unwrap();
        match symmetry_check(&pos).unwrap() {
            SymmetryReport::Nonnegative { pass, margin, .. } => assert!(pass && margin > 1e-3 * PI),
            r => panic!("{r:?}"),
        }
        let c2 = pos.with_g(TrigPoly::cosine(2)).unwrap();
        assert_eq!(symmetry_check(&c2).unwrap(), SymmetryReport::NotApplicable);
    }
}
