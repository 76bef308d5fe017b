//! Pullback evaluation of the monotone curve sequences.
//!
//! The curve operator is `𝓕(φ)(θ) = h(φ(θ − ω)) + σ·b·g(θ − ω)`, applied
//! twice per iterate for the period doubling system. `φₙ(θ)` is evaluated
//! by starting from the seed `φ₀ = φ̃` at `θ − n·s·ω` and stepping the map
//! forward `n·s` times. Every intermediate angle is `θ − j·ω` for an
//! integer `j`, so nothing depends on a grid and rotation error does not
//! accumulate.
//!
//! The gap `λₙ = ε·(φₙ − μ)` is computed along the same orbit in gap
//! coordinates: while the orbit stays on the linear piece of `μ` the gap is
//! multiplied by `a` exactly, which keeps tiny gaps free of cancellation.

use std::f64::consts::TAU;

use rayon::prelude::*;

use crate::cohomology::{collision_extremizer, side_spec, solve_bold_mu, MuSolution, Side, SideSpec};
use crate::error::{invalid, Error, Result};
use crate::forcing::grid_angle;
use crate::maps::{reduce_angle, MapParams, Mode, SystemKind, Variant};
use crate::numeric::angle_dist;

/// Evaluates `φₙ`, `λₙ`, `ψₙ` and related curves of one system.
#[derive(Debug, Clone)]
pub struct CurveEvaluator {
    params: MapParams,
    side: Side,
    spec: SideSpec,
    mu: Option<MuSolution>,
    n: usize,
    scale: f64,
}

impl CurveEvaluator {
    /// Upper side, `n` applications of the operator.
    pub fn new(params: &MapParams, n: usize) -> Result<Self> {
        CurveEvaluator::with_side(params, Side::Upper, n)
    }

    /// Evaluator for one bounding pair. The repelling curve is solved when
    /// `|a| > 1`; in the uniform regime only `φₙ` is available.
    pub fn with_side(params: &MapParams, side: Side, n: usize) -> Result<Self> {
        let spec = match side_spec(params, side) {
            Ok(s) => s,
            Err(_) if params.kind() == SystemKind::SmoothPD && side == Side::Upper => SideSpec {
                variant: Variant::Main,
                flat: 1.0,
                eps: 1.0,
            },
            Err(e) => return Err(e),
        };
        let mu = if params.mode() == Mode::Nonuniform && params.kind().is_piecewise() {
            Some(solve_bold_mu(params, spec.variant)?)
        } else {
            None
        };
        let mut ev = CurveEvaluator {
            params: params.clone(),
            side,
            spec,
            mu,
            n,
            scale: 1.0,
        };
        if ev.mu.is_some() {
            let max0 = (0..4096)
                .map(|j| ev.lambda_seed(grid_angle(j, 4096)))
                .fold(f64::NEG_INFINITY, f64::max);
            ev.scale = max0.max(1.0);
        }
        Ok(ev)
    }

    /// Same evaluator at another iteration count.
    pub fn with_n(&self, n: usize) -> Self {
        CurveEvaluator { n, ..self.clone() }
    }

    pub fn params(&self) -> &MapParams {
        &self.params
    }
    pub fn side(&self) -> Side {
        self.side
    }
    pub fn n(&self) -> usize {
        self.n
    }
    pub fn mu_solution(&self) -> Option<&MuSolution> {
        self.mu.as_ref()
    }

    /// Map steps per iterate: 2 for the period doubling system.
    pub fn steps(&self) -> usize {
        self.params.kind().steps_per_iterate()
    }

    /// Orientation `ε` of the gap, `λ = ε·(φ − μ)`.
    pub fn orientation(&self) -> f64 {
        self.spec.eps
    }

    /// `max(1, max λ₀)` over a 4096-point grid; the unit for relative
    /// zero thresholds.
    pub fn scale(&self) -> f64 {
        self.scale
    }

    #[inline]
    fn angle(&self, theta: f64, j: i64) -> f64 {
        shifted_angle(theta, j, self.params.omega())
    }

    #[inline]
    fn forcing_at(&self, theta: f64, j: i64) -> f64 {
        self.params.sigma() * self.params.b() * self.params.g().eval(self.angle(theta, j))
    }

    /// `φ₀(θ) = flat + σ·b·g(θ − ω)`.
    pub fn seed(&self, theta: f64) -> f64 {
        self.spec.flat + self.forcing_at(theta, 1)
    }

    /// `μ(θ)`, or NaN in the uniform regime.
    pub fn mu(&self, theta: f64) -> f64 {
        match &self.mu {
            Some(m) => m.eval(self.params.b(), theta),
            None => f64::NAN,
        }
    }

    /// `φₙ(θ)`.
    pub fn eval_phi_n(&self, theta: f64) -> f64 {
        self.phi_pullback(theta, 0, self.n)
    }

    /// `φ_n` evaluated at `θ − offset·ω`, with every angle written as
    /// `θ − j·ω`. Evaluating `φ_{n−1}` at offset `s` and applying the
    /// operator once reproduces `φ_n(θ)` bit for bit.
    pub fn phi_pullback(&self, theta: f64, offset: i64, n: usize) -> f64 {
        let t = (n * self.steps()) as i64;
        let mut x = self.spec.flat + self.forcing_at(theta, offset + t + 1);
        for j in (offset + 1..=offset + t).rev() {
            x = self.params.h(x) + self.forcing_at(theta, j);
        }
        x
    }

    /// `φ_0(θ), …, φ_{n_max}(θ)`, sharing one table of forcing values.
    pub fn phi_all(&self, theta: f64, n_max: usize) -> Vec<f64> {
        let s = self.steps();
        let top = n_max * s + 1;
        let gv: Vec<f64> = (0..=top as i64).map(|j| self.forcing_at(theta, j)).collect();
        (0..=n_max)
            .map(|n| {
                let t = n * s;
                let mut x = self.spec.flat + gv[t + 1];
                for j in (1..=t).rev() {
                    x = self.params.h(x) + gv[j];
                }
                x
            })
            .collect()
    }

    /// The two-periodic partner `𝓕₄(φₙ)(θ) = h₄(φₙ(θ − ω)) − b·g(θ − ω)`.
    pub fn eval_phi_image(&self, theta: f64) -> Result<f64> {
        if self.params.kind() != SystemKind::PeriodDoubling {
            return invalid("the partner curve exists for the period doubling system only");
        }
        let x = self.phi_pullback(theta, 1, self.n);
        Ok(self.params.h(x) + self.forcing_at(theta, 1))
    }

    /// `λ₀(θ)` straight from the two closed-form curves.
    fn lambda_seed(&self, theta: f64) -> f64 {
        self.spec.eps * (self.seed(theta) - self.mu(theta))
    }

    /// Runs the gap `d = x − μ` from index `start` down to each index in
    /// `stops` (descending) and returns `d` there.
    fn gap_orbit(&self, theta: f64, start: i64, stops: &[i64]) -> Vec<f64> {
        self.gap_orbit_snapped(theta, start, stops, 0.0)
    }

    /// As [`gap_orbit`](Self::gap_orbit), with a seed gap below `snap` set
    /// to exactly zero.
    fn gap_orbit_snapped(&self, theta: f64, start: i64, stops: &[i64], snap: f64) -> Vec<f64> {
        let mu = self.mu.as_ref().expect("gap needs the repelling curve");
        let p = &self.params;
        let b = p.b();
        let a = p.a();
        let v = self.spec.variant;
        let mut mu_j = mu.eval(b, self.angle(theta, start));
        let mut d = self.spec.flat + self.forcing_at(theta, start + 1) - mu_j;
        if d.abs() < snap {
            d = 0.0;
        }
        let mut out = Vec::with_capacity(stops.len());
        let mut next = 0;
        let mut j = start;
        loop {
            if next < stops.len() && stops[next] == j {
                out.push(d);
                next += 1;
                if next == stops.len() {
                    return out;
                }
            }
            let x = mu_j + d;
            let mu_next = mu.eval(b, self.angle(theta, j - 1));
            if p.piece_excess(v, x) <= 0.0 {
                d *= a;
            } else {
                d = p.h(x) + self.forcing_at(theta, j) - mu_next;
            }
            mu_j = mu_next;
            j -= 1;
        }
    }

    /// `λₙ(θ)`, oriented so that it is nonnegative for `b ≤ b*`. NaN in the
    /// uniform regime.
    pub fn eval_lambda_n(&self, theta: f64) -> f64 {
        self.lambda_at(theta, self.n)
    }

    pub fn lambda_at(&self, theta: f64, n: usize) -> f64 {
        if self.mu.is_none() {
            return f64::NAN;
        }
        let t = (n * self.steps()) as i64;
        self.spec.eps * self.gap_orbit(theta, t, &[0])[0]
    }

    /// Zero-case value of `ψ`: `a²` for the period doubling system, `a`
    /// for the others.
    pub fn psi_cap(&self) -> f64 {
        self.params.a().powi(self.steps() as i32)
    }

    /// `ψₙ(θ) = λₙ₊₁(θ + s·ω) / λₙ(θ)`, or [`psi_cap`](Self::psi_cap) where
    /// `λₙ(θ) < 1e-13·scale`. Both gaps come from one orbit.
    pub fn eval_psi_n(&self, theta: f64) -> f64 {
        if self.mu.is_none() {
            return f64::NAN;
        }
        let s = self.steps() as i64;
        let t = self.n as i64 * s;
        let d = self.gap_orbit(theta, t, &[0, -s]);
        if self.spec.eps * d[0] < 1e-13 * self.scale {
            self.psi_cap()
        } else {
            d[1] / d[0]
        }
    }

    /// `min` (down) or `max` (up) of `φ_0(θ), …, φ_m(θ)`.
    pub fn envelope_eval(&self, m: usize, theta: f64, dir: Direction) -> f64 {
        let all = self.phi_all(theta, m);
        match dir {
            Direction::Down => all.into_iter().fold(f64::INFINITY, f64::min),
            Direction::Up => all.into_iter().fold(f64::NEG_INFINITY, f64::max),
        }
    }

    /// Angle where `λ₀` vanishes at `b*` for this side.
    pub fn collision_theta(&self) -> Result<f64> {
        Ok(collision_extremizer(&self.params, self.side)?.1)
    }

    /// `θ₀ + k·s·ω` for `k = 0..=k_max`, reduced to `[0, 2π)`.
    pub fn predicted_zeros(&self, k_max: usize) -> Result<Vec<f64>> {
        let t0 = self.collision_theta()?;
        let s = self.steps() as i64;
        Ok((0..=k_max as i64)
            .map(|k| shifted_angle(t0, -k * s, self.params.omega()))
            .collect())
    }
}

/// `θ − j·ω` reduced to `[0, 2π)` with an error of about one ulp of `2π`.
/// A plain `θ − j·ω` carries the rounding of the unreduced magnitude,
/// which the gap amplifies by `|a|ⁿ` near the collision orbit.
pub fn shifted_angle(theta: f64, j: i64, omega: f64) -> f64 {
    const TAU_LO: f64 = 2.449_293_598_294_706_4e-16;
    let jf = j as f64;
    let p = jf * omega;
    let pe = jf.mul_add(omega, -p);
    let s = theta - p;
    let bb = s - theta;
    let se = (theta - (s - bb)) + (-p - bb);
    let k = (s / TAU).floor();
    let kt = k * TAU;
    let kte = k.mul_add(TAU, -kt);
    let r = s - kt;
    let rb = r - s;
    let re = (s - (r - rb)) + (-kt - rb);
    let out = r + (re + se - pe - kte - k * TAU_LO);
    reduce_angle(out)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Direction {
    Down,
    Up,
}

/// Which curve to sample.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CurveKind {
    Phi,
    PhiImage,
    Mu,
    Lambda,
    Psi,
    Envelope(Direction),
}

impl CurveKind {
    pub fn name(self) -> &'static str {
        match self {
            CurveKind::Phi => "phi_n",
            CurveKind::PhiImage => "phi_image",
            CurveKind::Mu => "mu",
            CurveKind::Lambda => "lambda_n",
            CurveKind::Psi => "psi_n",
            CurveKind::Envelope(Direction::Down) => "envelope",
            CurveKind::Envelope(Direction::Up) => "envelope_up",
        }
    }
}

impl std::str::FromStr for CurveKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Ok(match s.trim() {
            "phi_n" | "phi" => CurveKind::Phi,
            "phi_image" => CurveKind::PhiImage,
            "mu" => CurveKind::Mu,
            "lambda_n" | "lambda" => CurveKind::Lambda,
            "psi_n" | "psi" => CurveKind::Psi,
            "envelope" | "envelope_down" => CurveKind::Envelope(Direction::Down),
            "envelope_up" => CurveKind::Envelope(Direction::Up),
            other => return invalid(format!("unknown curve {other:?}")),
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SampleMeta {
    pub kind: SystemKind,
    pub a: f64,
    pub b: f64,
    pub n: usize,
    pub label: String,
}

/// A curve on the grid `θ_j = 2πj/M`.
#[derive(Debug, Clone, PartialEq)]
pub struct CurveSample {
    pub grid_size: usize,
    pub values: Vec<f64>,
    pub meta: SampleMeta,
}

impl CurveSample {
    /// Samples `f` in index order; evaluation runs in parallel.
    pub fn from_fn<F>(m: usize, meta: SampleMeta, f: F) -> Result<Self>
    where
        F: Fn(f64) -> f64 + Sync,
    {
        if m < 16 {
            return invalid(format!("grid of {m} points; at least 16 needed"));
        }
        let values: Vec<f64> = (0..m).into_par_iter().map(|j| f(grid_angle(j, m))).collect();
        if let Some(j) = values.iter().position(|v| !v.is_finite()) {
            return Err(Error::NumericalFailure(format!(
                "{} is not finite at theta = {}",
                meta.label,
                grid_angle(j, m)
            )));
        }
        Ok(CurveSample {
            grid_size: m,
            values,
            meta,
        })
    }

    pub fn theta(&self, j: usize) -> f64 {
        grid_angle(j, self.grid_size)
    }

    pub fn thetas(&self) -> impl Iterator<Item = f64> + '_ {
        (0..self.grid_size).map(|j| self.theta(j))
    }

    pub fn sup_norm(&self) -> f64 {
        self.values.iter().fold(0.0, |m, v| m.max(v.abs()))
    }
}

/// Samples the selected curve. `Envelope` uses `m = n`.
pub fn sample_curve(ev: &CurveEvaluator, which: CurveKind, m: usize, label: &str) -> Result<CurveSample> {
    let p = ev.params();
    let meta = SampleMeta {
        kind: p.kind(),
        a: p.a(),
        b: p.b(),
        n: ev.n(),
        label: label.to_string(),
    };
    if which != CurveKind::Phi
        && which != CurveKind::PhiImage
        && !matches!(which, CurveKind::Envelope(_))
        && ev.mu.is_none()
    {
        return invalid(format!("{} needs |a| > 1", which.name()));
    }
    if which == CurveKind::PhiImage && p.kind() != SystemKind::PeriodDoubling {
        return invalid("the partner curve exists for the period doubling system only");
    }
    match which {
        CurveKind::Phi => CurveSample::from_fn(m, meta, |t| ev.eval_phi_n(t)),
        CurveKind::PhiImage => CurveSample::from_fn(m, meta, |t| ev.eval_phi_image(t).unwrap_or(f64::NAN)),
        CurveKind::Mu => CurveSample::from_fn(m, meta, |t| ev.mu(t)),
        CurveKind::Lambda => CurveSample::from_fn(m, meta, |t| ev.eval_lambda_n(t)),
        CurveKind::Psi => CurveSample::from_fn(m, meta, |t| ev.eval_psi_n(t)),
        CurveKind::Envelope(d) => CurveSample::from_fn(m, meta, |t| ev.envelope_eval(ev.n(), t, d)),
    }
}

/// Largest `|Δvalue|/Δθ` over adjacent grid nodes inside `[lo, hi)`. A lower
/// bound on the Lipschitz constant of the underlying curve there.
pub fn lipschitz_estimate(s: &CurveSample, lo: f64, hi: f64) -> Result<f64> {
    let m = s.grid_size;
    let h = TAU / m as f64;
    let inside: Vec<usize> = (0..m)
        .filter(|&j| {
            let t = s.theta(j);
            t >= lo && t < hi
        })
        .collect();
    if inside.len() < 2 {
        return invalid(format!("[{lo}, {hi}) holds fewer than two grid nodes"));
    }
    let mut l: f64 = 0.0;
    for w in inside.windows(2) {
        if w[1] == w[0] + 1 {
            l = l.max((s.values[w[1]] - s.values[w[0]]).abs() / h);
        }
    }
    Ok(l)
}

#[derive(Debug, Clone, PartialEq)]
pub struct ZeroReport {
    /// Predicted zeros where `λₙ < eps_zero·scale`.
    pub count: usize,
    pub locations: Vec<f64>,
    /// All `n + 1` predicted zeros `θ₀ + k·s·ω`.
    pub predicted: Vec<f64>,
    /// Smallest `λₙ` on the grid away from the predicted zeros.
    pub min_off: f64,
}

/// Checks the zero set of `λₙ` at `b = b*`: counts the predicted zeros that
/// are numerically zero, and fails with [`Error::UnexpectedZero`] if `λₙ`
/// drops below `eps_floor` on the grid outside `radius` of every predicted
/// zero.
pub fn zero_count(ev: &CurveEvaluator, eps_zero: f64, eps_floor: f64, m: usize, radius: f64) -> Result<ZeroReport> {
    if ev.mu.is_none() {
        return invalid("zero counting needs |a| > 1");
    }
    let predicted = ev.predicted_zeros(ev.n())?;
    let thresh = eps_zero * ev.scale();
    let locations: Vec<f64> = predicted
        .iter()
        .copied()
        .filter(|&t| ev.eval_lambda_n(t) < thresh)
        .collect();
    let off: Vec<(f64, f64)> = (0..m)
        .into_par_iter()
        .filter_map(|j| {
            let t = grid_angle(j, m);
            if predicted.iter().any(|&z| angle_dist(t, z) <= radius) {
                None
            } else {
                Some((t, ev.eval_lambda_n(t)))
            }
        })
        .collect();
    let (t_min, min_off) = off
        .iter()
        .copied()
        .fold((f64::NAN, f64::INFINITY), |acc, x| if x.1 < acc.1 { x } else { acc });
    if min_off < eps_floor {
        return Err(Error::UnexpectedZero {
            theta: t_min,
            value: min_off,
            floor: eps_floor,
        });
    }
    Ok(ZeroReport {
        count: locations.len(),
        locations,
        predicted,
        min_off,
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct ConvergenceReport {
    /// `sup_gaps[n] = max |φ_{n+1} − φ_n|` over the test points.
    pub sup_gaps: Vec<f64>,
    pub cauchy_uniform: bool,
    pub tol: f64,
}

/// Uniform convergence of `φₙ`, judged on the grid together with the orbit
/// `θ₀ + k·s·ω`, `k ≤ n_max + 1`, of the collision angle.
///
/// On a grid alone every point is eventually captured by a flat piece, so
/// the grid would certify convergence even at `b*`. The orbit points are
/// where uniformity fails.
pub fn convergence_report(ev: &CurveEvaluator, n_max: usize, m: usize) -> Result<ConvergenceReport> {
    if n_max < 2 {
        return invalid("n_max must be at least 2");
    }
    let grid: Vec<f64> = (0..m).map(|j| grid_angle(j, m)).collect();
    let mut per_point: Vec<Vec<f64>> = grid
        .par_iter()
        .map(|&t| {
            let all = ev.phi_all(t, n_max);
            all.windows(2).map(|w| (w[1] - w[0]).abs()).collect()
        })
        .collect();
    // Along the collision orbit the seed gap is zero in exact arithmetic;
    // as rounding noise it would grow by |a|^s per iterate until a flat
    // piece swallows it, so these points run in gap coordinates with the
    // noise snapped to zero.
    if ev.mu.is_some() {
        if let Ok(z) = ev.predicted_zeros(n_max + 1) {
            let s = ev.steps() as i64;
            let snap = 1e-13 * ev.scale();
            per_point.par_extend(z.par_iter().map(|&t| {
                let lam: Vec<f64> = (0..=n_max as i64)
                    .map(|n| ev.gap_orbit_snapped(t, n * s, &[0], snap)[0])
                    .collect();
                lam.windows(2).map(|w| (w[1] - w[0]).abs()).collect()
            }));
        }
    }
    let mut sup_gaps = vec![0.0f64; n_max];
    for g in &per_point {
        for (s, v) in sup_gaps.iter_mut().zip(g) {
            *s = s.max(*v);
        }
    }
    let tol = 1e-8;
    let cauchy_uniform = uniform_tail(&sup_gaps, tol);
    Ok(ConvergenceReport {
        sup_gaps,
        cauchy_uniform,
        tol,
    })
}

/// Tail below `tol` before the end and nonincreasing from there on.
pub(crate) fn uniform_tail(gaps: &[f64], tol: f64) -> bool {
    let Some(n0) = gaps.iter().position(|&g| g < tol) else {
        return false;
    };
    if n0 + 1 >= gaps.len() {
        return false;
    }
    let tail = &gaps[n0..];
    tail.iter().all(|&g| g < tol) && tail.windows(2).all(|w| w[1] <= w[0] + 4.0 * f64::EPSILON * tol)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cohomology::critical_b;
    use crate::rng::draw_unit;

    fn pd(b: f64) -> MapParams {
        MapParams::standard(SystemKind::PeriodDoubling, -3.0, b).unwrap()
    }

    fn b_star() -> f64 {
        critical_b(&pd(0.0)).unwrap().b_star
    }

    #[test]
    fn phi_examples() {
        let p = pd(0.2);
        let ev = CurveEvaluator::new(&p, 0).unwrap();
        assert!((ev.eval_phi_n(p.omega()) - 0.6).abs() < 1e-15);
        let ev0 = CurveEvaluator::new(&pd(0.0), 7).unwrap();
        for k in 0..20 {
            assert_eq!(ev0.eval_phi_n(0.3 * k as f64), 1.0);
        }
        let bs = b_star();
        let ev = CurveEvaluator::new(&pd(bs / 2.0), 0).unwrap();
        let ev1 = ev.with_n(1);
        for j in 0..1024 {
            let t = grid_angle(j, 1024);
            assert!(ev1.eval_phi_n(t) <= ev.eval_phi_n(t) + 1e-12);
        }
    }

    #[test]
    fn pullback_exactness() {
        for kind in [
            SystemKind::PeriodDoubling,
            SystemKind::PitchforkSuper,
            SystemKind::SaddleNode,
        ] {
            let a = if kind == SystemKind::PeriodDoubling { -3.0 } else { 2.0 };
            let p = MapParams::standard(kind, a, 0.3).unwrap();
            let ev = CurveEvaluator::new(&p, 0).unwrap();
            let s = ev.steps() as i64;
            for n in 1..=60 {
                for k in 0..5 {
                    let t = 0.37 + 1.3 * k as f64;
                    let direct = ev.phi_pullback(t, 0, n);
                    let mut x = ev.phi_pullback(t, s, n - 1);
                    for j in (1..=s).rev() {
                        x = p.h(x) + ev.forcing_at(t, j);
                    }
                    assert_eq!(direct.to_bits(), x.to_bits());
                    assert_eq!(ev.phi_all(t, n)[n].to_bits(), direct.to_bits());
                }
            }
        }
    }

    #[test]
    fn phi_image_examples() {
        let ev = CurveEvaluator::new(&pd(0.0), 5).unwrap();
        assert_eq!(ev.eval_phi_image(1.0).unwrap(), -3.0);
        let f1 = MapParams::standard(SystemKind::PitchforkSuper, 2.0, 0.1).unwrap();
        assert!(CurveEvaluator::new(&f1, 1).unwrap().eval_phi_image(0.0).is_err());

        let p = pd(0.3);
        let ev = CurveEvaluator::new(&p, 6).unwrap();
        let next = ev.with_n(7);
        for k in 0..256u64 {
            let t = TAU * draw_unit(3, k);
            // 𝓕₄ applied to the partner curve at θ − ω
            let partner = CurveEvaluator::new(&p, 6).unwrap();
            let y = partner.phi_pullback(t, 2, 6);
            let y = p.h(y) + partner.forcing_at(t, 2);
            let z = p.h(y) + partner.forcing_at(t, 1);
            assert!((z - next.eval_phi_n(t)).abs() < 1e-10);
        }

        let bs = b_star();
        let ev = CurveEvaluator::new(&pd(bs / 2.0), 40).unwrap();
        let gap = (0..4096)
            .map(|j| {
                let t = grid_angle(j, 4096);
                ev.eval_phi_n(t) - ev.eval_phi_image(t).unwrap()
            })
            .fold(f64::INFINITY, f64::min);
        assert!(gap > 0.0);
    }

    #[test]
    fn lambda_examples() {
        let ev = CurveEvaluator::new(&pd(0.0), 0).unwrap();
        assert_eq!(ev.eval_lambda_n(2.0), 1.0);
        let bs = b_star();
        let ev = CurveEvaluator::new(&pd(bs), 0).unwrap();
        let t0 = ev.collision_theta().unwrap();
        assert!(ev.eval_lambda_n(t0) <= 1e-9);
        let ev = CurveEvaluator::new(&pd(bs / 2.0), 10).unwrap();
        for j in 0..1024 {
            assert!(ev.eval_lambda_n(grid_angle(j, 1024)) >= -1e-10);
        }
    }

    #[test]
    fn lambda_matches_phi_minus_mu() {
        let bs = b_star();
        let ev = CurveEvaluator::new(&pd(0.7 * bs), 12).unwrap();
        for j in 0..512 {
            let t = grid_angle(j, 512);
            let direct = ev.eval_phi_n(t) - ev.mu(t);
            assert!((direct - ev.eval_lambda_n(t)).abs() < 1e-12);
        }
    }

    #[test]
    fn psi_bounds_and_monotonicity() {
        let bs = b_star();
        let ev = CurveEvaluator::new(&pd(bs), 0).unwrap();
        let ev5 = ev.with_n(5);
        let ev6 = ev.with_n(6);
        for k in 0..1024u64 {
            let t = TAU * draw_unit(11, k);
            for e in [&ev, &ev5] {
                let v = e.eval_psi_n(t);
                assert!((0.0..=9.0 + 1e-9).contains(&v), "{v}");
            }
            assert!(ev5.eval_psi_n(t) <= ev6.eval_psi_n(t) + 1e-9);
        }
        // zero case
        let t0 = ev.collision_theta().unwrap();
        assert_eq!(CurveEvaluator::new(&pd(bs), 0).unwrap().eval_psi_n(t0), 9.0);
    }

    #[test]
    fn psi_is_a_squared_on_linear_orbit() {
        // near the collision orbit both steps of the gap stay on μ's piece
        let bs = b_star();
        let ev = CurveEvaluator::new(&pd(bs), 3).unwrap();
        let p = ev.params().clone();
        let mut checked = 0;
        for z in ev.predicted_zeros(6).unwrap() {
            for off in [-3e-3, -1e-3, -1e-4, 1e-4, 1e-3, 3e-3] {
                let t = z + off;
                let phi = ev.eval_phi_n(t);
                let y = p.h(phi) - p.b() * p.g().eval(t);
                let lam = ev.eval_lambda_n(t);
                if lam > 1e-13 * ev.scale() && phi >= 1.0 / p.a() && y >= 1.0 / p.a() {
                    assert!((ev.eval_psi_n(t) / 9.0 - 1.0).abs() < 1e-9, "{t}");
                    checked += 1;
                }
            }
        }
        assert!(checked > 0);
    }

    #[test]
    fn sample_examples() {
        let ev = CurveEvaluator::new(&pd(0.0), 3).unwrap();
        let s = sample_curve(&ev, CurveKind::Mu, 64, "mu").unwrap();
        assert!(s.values.iter().all(|&v| v == 0.0));
        let p = pd(0.25);
        let ev = CurveEvaluator::new(&p, 0).unwrap();
        let s = sample_curve(&ev, CurveKind::Phi, 16, "phi0").unwrap();
        for (j, t) in s.thetas().enumerate() {
            assert!((s.values[j] - (1.0 - 0.25 * p.g().eval(t - p.omega()))).abs() <= 1e-15);
        }
        assert!(sample_curve(&ev, CurveKind::Phi, 4, "x").is_err());
        let ev = ev.with_n(9);
        let s1 = sample_curve(&ev, CurveKind::Phi, 512, "a").unwrap();
        let s2 = sample_curve(&ev, CurveKind::Phi, 1024, "b").unwrap();
        for j in 0..512 {
            assert_eq!(s1.values[j].to_bits(), s2.values[2 * j].to_bits());
        }
    }

    #[test]
    fn lipschitz_examples() {
        let b = 0.3;
        let ev = CurveEvaluator::new(&pd(b), 0).unwrap();
        let s = sample_curve(&ev, CurveKind::Phi, 8192, "phi0").unwrap();
        let l = lipschitz_estimate(&s, 0.0, TAU).unwrap();
        assert!((l / b - 1.0).abs() < 1e-3, "{l}");
        let meta = s.meta.clone();
        let c = CurveSample {
            grid_size: 64,
            values: vec![2.0; 64],
            meta: meta.clone(),
        };
        assert_eq!(lipschitz_estimate(&c, 0.0, TAU).unwrap(), 0.0);
        let h = TAU / 64.0;
        let saw: Vec<f64> = (0..64).map(|j| if j % 2 == 0 { 0.0 } else { 7.0 * h }).collect();
        let c = CurveSample {
            grid_size: 64,
            values: saw,
            meta,
        };
        let l = lipschitz_estimate(&c, 0.0, TAU).unwrap();
        assert!((l - 7.0).abs() <= 7.0 * f64::EPSILON);
        assert!(lipschitz_estimate(&c, 0.0, 0.05).is_err());
    }

    #[test]
    fn zero_count_period_doubling() {
        let bs = b_star();
        for n in [0usize, 5] {
            let ev = CurveEvaluator::new(&pd(bs), n).unwrap();
            let r = zero_count(&ev, 1e-9, 0.0, 1024, 1e-3).unwrap();
            assert_eq!(r.count, n + 1);
            let t0 = ev.collision_theta().unwrap();
            for (k, z) in r.locations.iter().enumerate() {
                let want = (t0 + 2.0 * k as f64 * ev.params().omega()).rem_euclid(TAU);
                assert!(angle_dist(*z, want) < 1e-12);
            }
        }
    }

    #[test]
    fn zero_count_pitchfork_sine() {
        let p = MapParams::new(
            SystemKind::PitchforkSuper,
            2.0,
            0.0,
            1.0,
            crate::maps::golden_omega(),
            crate::forcing::TrigPoly::sine(1),
        )
        .unwrap();
        let bs = critical_b(&p).unwrap().b_star;
        let ev = CurveEvaluator::new(&p.with_b(bs).unwrap(), 5).unwrap();
        let r = zero_count(&ev, 1e-9, 0.0, 1024, 1e-3).unwrap();
        assert_eq!(r.count, 6);
    }

    #[test]
    fn envelope_examples() {
        let bs = b_star();
        let ev = CurveEvaluator::new(&pd(bs), 0).unwrap();
        for k in 0..512u64 {
            let t = TAU * draw_unit(5, k);
            let m = 7;
            let down = ev.envelope_eval(m, t, Direction::Down);
            assert_eq!(down, ev.with_n(m).eval_phi_n(t));
            assert_eq!(ev.envelope_eval(0, t, Direction::Down), ev.eval_phi_n(t));
            assert!(down <= ev.envelope_eval(m - 1, t, Direction::Down));
        }
    }

    #[test]
    fn convergence_regimes() {
        let bs = b_star();
        let ev = CurveEvaluator::new(&pd(bs / 2.0), 0).unwrap();
        assert!(convergence_report(&ev, 80, 1024).unwrap().cauchy_uniform);
        let ev = CurveEvaluator::new(&pd(bs), 0).unwrap();
        assert!(!convergence_report(&ev, 80, 1024).unwrap().cauchy_uniform);
        let u = MapParams::standard(SystemKind::SaddleNode, 0.5, 0.4).unwrap();
        let ev = CurveEvaluator::new(&u, 0).unwrap();
        let r = convergence_report(&ev, 30, 4096).unwrap();
        for w in r.sup_gaps[1..].windows(2) {
            if w[0] > 1e-300 {
                assert!(w[1] <= (0.5 + 1e-6) * w[0]);
            }
        }
    }

    #[test]
    fn invariant_region_is_kept() {
        let bs = b_star();
        for frac in [0.3, 0.8, 1.0] {
            let p = pd(frac * bs);
            let ev = CurveEvaluator::new(&p, 0).unwrap();
            for k in 0..10_000u64 {
                let t = TAU * draw_unit(9, 2 * k);
                let (lo, hi) = (ev.mu(t), ev.seed(t));
                let x = lo + (hi - lo) * draw_unit(9, 2 * k + 1);
                let (x2, _) = p.step2(x, t);
                let t2 = t + 2.0 * p.omega();
                assert!(x2 >= ev.mu(t2) - 1e-12 && x2 <= ev.seed(t2) + 1e-12);
            }
        }
    }

    #[test]
    fn ordering_against_mu() {
        let bs = b_star();
        for (kind, a) in [
            (SystemKind::PeriodDoubling, -3.0),
            (SystemKind::PitchforkSuper, 2.0),
            (SystemKind::SaddleNode, 2.0),
            (SystemKind::PitchforkSub, 2.0),
        ] {
            let p0 = MapParams::standard(kind, a, 0.0).unwrap();
            let b = if kind == SystemKind::PeriodDoubling {
                bs
            } else {
                critical_b(&p0).unwrap().b_star
            };
            let ev = CurveEvaluator::new(&p0.with_b(b).unwrap(), 0).unwrap();
            for n in [0usize, 10, 30, 60] {
                let e = ev.with_n(n);
                for j in 0..256 {
                    let t = grid_angle(j, 256);
                    let d = e.orientation() * (e.eval_phi_n(t) - e.mu(t));
                    assert!(d >= -1e-10, "{kind} n={n} {d}");
                }
            }
        }
    }
}
