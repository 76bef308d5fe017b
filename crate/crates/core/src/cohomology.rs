//! The repelling invariant curve and the critical forcing `b*`.
//!
//! On its linear piece the repelling curve `μ` solves
//!
//! ```text
//! μ(θ + ω) = a·μ(θ) + c + σ·b·g(θ)
//! ```
//!
//! (`c = ∓aδ` for the subcritical pitchfork, 0 otherwise). Harmonic `n`
//! decouples into a 2×2 system with determinant
//! `D(n) = 1 − 2a·cos(nω) + a² > (|a| − 1)²`, so the solution is a
//! trigonometric polynomial of the same degree as `g`, linear in `b`:
//! `μ = b·(shape + affine_b0) + affine_const`.
//!
//! The attracting object starts from a curve `φ̃` lying on a flat piece of
//! `h`. It collides with `μ` exactly when `μ` reaches a breakpoint, which
//! turns `b*` into an extremum of `shape`.

use std::f64::consts::FRAC_PI_2;

use crate::error::{invalid, Error, Result};
use crate::forcing::{grid_angle, TrigPoly};
use crate::maps::{reduce_angle, MapParams, SystemKind, Variant};
use crate::numeric::circle_min;

/// The repelling curve, factored by its dependence on `b`.
#[derive(Debug, Clone, PartialEq)]
pub struct MuSolution {
    params: MapParams,
    pub variant: Variant,
    /// `b`-independent factor.
    pub shape: TrigPoly,
    /// Constant multiplying `b` beyond `shape`; nonzero only for the
    /// subcritical pitchfork, where the mean of `g` is kept out of `shape`.
    pub affine_b0: f64,
    /// `b`-independent constant `±aδ/(a − 1)` of the subcritical pitchfork.
    pub affine_const: f64,
}

impl MuSolution {
    pub fn kind(&self) -> SystemKind {
        self.params.kind()
    }

    pub fn a(&self) -> f64 {
        self.params.a()
    }

    pub fn omega(&self) -> f64 {
        self.params.omega()
    }

    /// Parameters the curve was solved for; `b` in there is irrelevant.
    pub fn params(&self) -> &MapParams {
        &self.params
    }

    /// `shape(θ) + affine_b0`, the curve per unit of `b`.
    pub fn unit(&self, theta: f64) -> f64 {
        self.shape.eval(theta) + self.affine_b0
    }

    /// `μ(a, b, ω, θ)`.
    pub fn eval(&self, b: f64, theta: f64) -> f64 {
        b * self.unit(theta) + self.affine_const
    }
}

/// Solves for the repelling curve of `params` (its `b` is ignored).
///
/// `variant` only matters for the subcritical pitchfork: `Main` lies on
/// `x ≥ δ`, `Hat` on `x ≤ −δ`.
///
/// ```
/// use qpforce::{cohomology::solve_bold_mu, MapParams, SystemKind, Variant};
///
/// let p = MapParams::standard(SystemKind::PeriodDoubling, -3.0, 0.0)?;
/// let mu = solve_bold_mu(&p, Variant::Main)?;
/// assert_eq!(mu.shape.constant_term(), -0.25);
/// # Ok::<(), qpforce::Error>(())
/// ```
pub fn solve_bold_mu(params: &MapParams, variant: Variant) -> Result<MuSolution> {
    params.require_nonuniform()?;
    let a = params.a();
    let w = params.omega();
    let sigma = params.sigma();
    let g = params.g();
    let mut shape = TrigPoly::zero(g.degree());
    let mut cos = shape.cos_coeffs().to_vec();
    let mut sin = shape.sin_coeffs().to_vec();
    let c0 = sigma * g.constant_term() / (1.0 - a);
    for n in 1..=g.degree() {
        let (s, c) = (n as f64 * w).sin_cos();
        let d = 1.0 - 2.0 * a * c + a * a;
        assert!(d > (a.abs() - 1.0).powi(2) * (1.0 - 1e-12));
        if d < 1e-12 {
            return Err(Error::NumericalFailure(format!("D({n}) = {d:e} is singular")));
        }
        let (gc, gs) = g.coeff(n);
        let (r1, r2) = (sigma * gs, sigma * gc);
        sin[n] = ((c - a) * r1 + s * r2) / d;
        cos[n] = (-s * r1 + (c - a) * r2) / d;
    }
    let (affine_b0, affine_const) = if params.kind() == SystemKind::PitchforkSub {
        let k = a * params.delta() / (a - 1.0);
        let k = if variant == Variant::Main { k } else { -k };
        (c0, k)
    } else {
        cos[0] = c0;
        (0.0, 0.0)
    };
    shape = TrigPoly::from_parts(cos, sin)?;
    Ok(MuSolution {
        params: params.clone(),
        variant,
        shape,
        affine_b0,
        affine_const,
    })
}

/// Largest defect of the functional equation on the grid `θ_j = 2πj/M`:
/// `max |μ(θ + ω) − L(μ(θ)) − σ·b·g(θ)|` with `L` the linear piece.
///
/// Fails with [`Error::BranchViolation`] if `μ` leaves the linear piece
/// anywhere on the grid, which happens once `b > b*`.
pub fn mu_residual(sol: &MuSolution, b: f64, g: &TrigPoly, m: usize) -> Result<f64> {
    if m == 0 {
        return invalid("grid must be nonempty");
    }
    let p = &sol.params;
    let w = p.omega();
    let mut worst = (0.0, f64::NEG_INFINITY);
    let mut res: f64 = 0.0;
    for j in 0..m {
        let t = grid_angle(j, m);
        let x = sol.eval(b, t);
        let ex = p.piece_excess(sol.variant, x);
        if ex > worst.1 {
            worst = (t, ex);
        }
        let lhs = sol.eval(b, t + w);
        let rhs = p.piece_image(sol.variant, x) + p.sigma() * b * g.eval(t);
        res = res.max((lhs - rhs).abs());
    }
    if worst.1 > 0.0 {
        return Err(Error::BranchViolation {
            theta: worst.0,
            image_theta: reduce_angle(worst.0 + w),
            excess: worst.1,
        });
    }
    Ok(res)
}

/// Global extremizers of `shape + affine_b0`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Extremum {
    pub theta_min: f64,
    pub val_min: f64,
    pub theta_max: f64,
    pub val_max: f64,
}

/// Dense scan on 4096 points, then golden section until the bracket is
/// below `refine_tol`. Ties go to the smallest angle.
pub fn extremum(sol: &MuSolution, refine_tol: f64) -> Extremum {
    let (theta_min, val_min) = circle_min(&|t| sol.unit(t), 4096, refine_tol);
    let (theta_max, neg) = circle_min(&|t| -sol.unit(t), 4096, refine_tol);
    Extremum {
        theta_min,
        val_min,
        theta_max,
        val_max: -neg,
    }
}

/// One of the bounding curves of the attracting region.
///
/// `Upper` is `φ̃` for every system: the seed on the upper flat piece for the
/// supercritical pitchfork and the period doubling, the plateau seed against
/// `μ₂` for the subcritical pitchfork, the seed below `μ₃` for the saddle
/// node. `Lower` is the second pair of the pitchforks: `γ̃₁` against `μ₁`,
/// and the plateau seed against `μ̂₂`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum Side {
    #[default]
    Upper,
    Lower,
}

/// Which pair meets at `b*`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Colliding {
    Upper,
    Lower,
    Both,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Method {
    ClosedForm,
    Bisection,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CriticalB {
    pub b_star: f64,
    /// Extremizer of `μ` that reaches the breakpoint (`θ_m` or `θ_M`).
    pub theta_star: f64,
    /// `theta_star + ω`: where the bounding curve touches `μ`.
    pub collision_theta: f64,
    pub colliding: Colliding,
    pub method: Method,
}

/// How a side is laid out: which repelling curve, which flat value seeds
/// the bounding curve, and the orientation `ε` with `λ = ε·(φ − μ) ≥ 0`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub(crate) struct SideSpec {
    pub variant: Variant,
    pub flat: f64,
    pub eps: f64,
}

pub(crate) fn side_spec(params: &MapParams, side: Side) -> Result<SideSpec> {
    use SystemKind::*;
    let (variant, lower_flat, eps) = match (params.kind(), side) {
        (PitchforkSuper, Side::Upper) => (Variant::Main, false, 1.0),
        (PitchforkSuper, Side::Lower) => (Variant::Main, true, -1.0),
        (PitchforkSub, Side::Upper) => (Variant::Main, false, -1.0),
        (PitchforkSub, Side::Lower) => (Variant::Hat, false, 1.0),
        (SaddleNode, Side::Upper) => (Variant::Main, false, -1.0),
        (PeriodDoubling, Side::Upper) => (Variant::Main, false, 1.0),
        (k, s) => return invalid(format!("{k} has no {s:?} pair")),
    };
    Ok(SideSpec {
        variant,
        flat: params.flat_value(lower_flat),
        eps,
    })
}

/// Sides that exist for a system.
pub fn sides(kind: SystemKind) -> &'static [Side] {
    match kind {
        SystemKind::PitchforkSuper | SystemKind::PitchforkSub => &[Side::Upper, Side::Lower],
        SystemKind::SaddleNode | SystemKind::PeriodDoubling => &[Side::Upper],
        SystemKind::SmoothPD => &[],
    }
}

/// Extremizer of `μ` that reaches the breakpoint on `side`, and its image
/// under the rotation, where `λ₀` of that side vanishes at `b*`.
pub fn collision_extremizer(params: &MapParams, side: Side) -> Result<(f64, f64)> {
    let spec = side_spec(params, side)?;
    let sol = solve_bold_mu(params, spec.variant)?;
    let ex = extremum(&sol, 1e-12);
    let use_max = matches!(
        (params.kind(), side),
        (SystemKind::PitchforkSuper, Side::Upper) | (SystemKind::PitchforkSub, Side::Lower)
    );
    let t = if use_max { ex.theta_max } else { ex.theta_min };
    Ok((t, reduce_angle(t + params.omega())))
}

const DEGENERATE: f64 = 1e-14;

/// Closed-form `b*` of one side, with the extremizer of `μ` that reaches the
/// breakpoint. Not available for the subcritical pitchfork.
pub fn side_critical_b(params: &MapParams, side: Side) -> Result<(f64, f64)> {
    let spec = side_spec(params, side)?;
    let sol = solve_bold_mu(params, spec.variant)?;
    let ex = extremum(&sol, 1e-12);
    let a = params.a();
    // breakpoint / extremum of the side that hits it
    let (target, val, theta) = match (params.kind(), side) {
        (SystemKind::PeriodDoubling, _) => (1.0 / a, ex.val_min, ex.theta_min),
        (SystemKind::SaddleNode, _) => (-1.0 / a, ex.val_min, ex.theta_min),
        (SystemKind::PitchforkSuper, Side::Upper) => (FRAC_PI_2 / a, ex.val_max, ex.theta_max),
        (SystemKind::PitchforkSuper, Side::Lower) => (-FRAC_PI_2 / a, ex.val_min, ex.theta_min),
        (k, _) => return invalid(format!("no closed form for {k}")),
    };
    if val.abs() < DEGENERATE || val.signum() != target.signum() {
        return Err(Error::DegenerateForcing { value: val });
    }
    Ok((target / val, theta))
}

/// `b*` from the closed form (bisection for the subcritical pitchfork).
///
/// ```
/// use qpforce::{cohomology::critical_b, MapParams, SystemKind};
///
/// let p = MapParams::standard(SystemKind::PeriodDoubling, -3.0, 0.0)?;
/// let cb = critical_b(&p)?;
/// assert!((cb.b_star - 0.4949).abs() < 1e-4);
/// # Ok::<(), qpforce::Error>(())
/// ```
pub fn critical_b(params: &MapParams) -> Result<CriticalB> {
    params.require_nonuniform()?;
    if params.g().is_zero() {
        return Err(Error::DegenerateForcing { value: 0.0 });
    }
    let w = params.omega();
    let done = |b_star: f64, theta_star: f64, colliding| CriticalB {
        b_star,
        theta_star,
        collision_theta: reduce_angle(theta_star + w),
        colliding,
        method: Method::ClosedForm,
    };
    match params.kind() {
        SystemKind::PitchforkSub => {
            let scale = params.delta() / (params.a() - 1.0);
            critical_b_bisect(params, 1e-13 * scale.max(1e-3))
        }
        SystemKind::PitchforkSuper => {
            let up = side_critical_b(params, Side::Upper);
            let lo = side_critical_b(params, Side::Lower);
            match (up, lo) {
                (Ok(u), Ok(l)) => {
                    let rel = (u.0 - l.0).abs() / u.0.min(l.0);
                    Ok(if rel <= 1e-9 {
                        done(u.0.min(l.0), u.1, Colliding::Both)
                    } else if u.0 < l.0 {
                        done(u.0, u.1, Colliding::Upper)
                    } else {
                        done(l.0, l.1, Colliding::Lower)
                    })
                }
                (Ok(u), Err(_)) => Ok(done(u.0, u.1, Colliding::Upper)),
                (Err(_), Ok(l)) => Ok(done(l.0, l.1, Colliding::Lower)),
                (Err(e), Err(_)) => Err(e),
            }
        }
        _ => {
            let (b, t) = side_critical_b(params, Side::Upper)?;
            Ok(done(b, t, Colliding::Upper))
        }
    }
}

/// Fiber distance `λ₀ = ε·(φ̃ − μ)` between the bounding curve of `side` and
/// its repelling curve, evaluated directly from both curves.
pub fn seed_gap(params: &MapParams, sol: &MuSolution, side: Side, b: f64, theta: f64) -> Result<f64> {
    let spec = side_spec(params, side)?;
    Ok(seed_gap_spec(params, sol, spec, b, theta))
}

pub(crate) fn seed_gap_spec(p: &MapParams, sol: &MuSolution, spec: SideSpec, b: f64, theta: f64) -> f64 {
    let seed = spec.flat + p.sigma() * b * p.g().eval(theta - p.omega());
    spec.eps * (seed - sol.eval(b, theta))
}

/// Minimum over the circle of the direct fiber distance of one side:
/// 8192-point scan plus golden refinement. Returns `(θ, distance)`.
pub fn min_seed_gap(params: &MapParams, side: Side, b: f64) -> Result<(f64, f64)> {
    let spec = side_spec(params, side)?;
    let sol = solve_bold_mu(params, spec.variant)?;
    Ok(circle_min(&|t| seed_gap_spec(params, &sol, spec, b, t), 8192, 1e-11))
}

fn bisect_side(params: &MapParams, side: Side, tol: f64) -> Result<(f64, f64)> {
    let spec = side_spec(params, side)?;
    let sol = solve_bold_mu(params, spec.variant)?;
    let obj = |b: f64| circle_min(&|t| seed_gap_spec(params, &sol, spec, b, t), 8192, 1e-11);
    let mut hi = 1.0;
    let mut doublings = 0;
    while obj(hi).1 > 0.0 {
        if doublings == 60 {
            return Err(Error::BracketFailure { b_hi: hi });
        }
        hi *= 2.0;
        doublings += 1;
    }
    let mut lo = 0.0;
    while hi - lo > tol {
        let mid = 0.5 * (lo + hi);
        if obj(mid).1 > 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let b = 0.5 * (lo + hi);
    Ok((b, obj(b).0))
}

/// `b*` by bisection on the minimum fiber distance between the bounding
/// curve and `μ`, independent of the closed form.
pub fn critical_b_bisect(params: &MapParams, tol: f64) -> Result<CriticalB> {
    params.require_nonuniform()?;
    if !(tol > 0.0) {
        return invalid("tolerance must be positive");
    }
    let w = params.omega();
    let mut found: Vec<(Side, f64, f64)> = Vec::new();
    let mut last_err = None;
    for &side in sides(params.kind()) {
        match bisect_side(params, side, tol) {
            Ok((b, t)) => found.push((side, b, t)),
            Err(e) => last_err = Some(e),
        }
    }
    if found.is_empty() {
        return Err(last_err.unwrap_or(Error::DegenerateForcing { value: 0.0 }));
    }
    found.sort_by(|x, y| x.1.total_cmp(&y.1));
    let (side, b, t) = found[0];
    let colliding = match found.get(1) {
        Some(&(_, b2, _)) if (b2 - b) <= 1e-9 * b.max(tol) => Colliding::Both,
        _ if side == Side::Upper => Colliding::Upper,
        _ => Colliding::Lower,
    };
    Ok(CriticalB {
        b_star: b,
        theta_star: reduce_angle(t - w),
        collision_theta: t,
        colliding,
        method: Method::Bisection,
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct DecayRow {
    pub n: usize,
    /// `√(ãₙ² + b̃ₙ²)`.
    pub mu_mag: f64,
    pub g_mag: f64,
    /// `mu_mag / g_mag`; `None` where `g` has no harmonic `n`.
    pub ratio: Option<f64>,
    /// `(|cos nω| + |a| + 1)/(|a| − 1)²`.
    pub bound: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct DecayReport {
    pub rows: Vec<DecayRow>,
    pub note: &'static str,
}

impl DecayReport {
    pub fn within_bound(&self) -> bool {
        self.rows.iter().all(|r| r.ratio.is_none_or(|q| q <= r.bound))
    }
}

/// Per-harmonic magnitudes of `μ` against those of `g`. The mean of `g`
/// enters the constant row (for the subcritical pitchfork through
/// `affine_b0`).
pub fn coefficient_decay_report(sol: &MuSolution, g: &TrigPoly) -> DecayReport {
    let note = "harmonic 0 uses the mean c_0 of g";
    if g.is_zero() {
        return DecayReport { rows: Vec::new(), note };
    }
    let a = sol.a();
    let w = sol.omega();
    let deg = g.degree().max(sol.shape.degree());
    let rows = (0..=deg)
        .map(|n| {
            let (c, s) = sol.shape.coeff(n);
            let mu_mag = if n == 0 { (c + sol.affine_b0).abs() } else { c.hypot(s) };
            let (gc, gs) = g.coeff(n);
            let g_mag = gc.hypot(gs);
            let ratio = (g_mag > 0.0).then(|| mu_mag / g_mag);
            let bound = ((n as f64 * w).cos().abs() + a.abs() + 1.0) / (a.abs() - 1.0).powi(2);
            DecayRow {
                n,
                mu_mag,
                g_mag,
                ratio,
                bound,
            }
        })
        .collect();
    DecayReport { rows, note }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::maps::golden_omega;
    use nalgebra::{Matrix2, Vector2};

    fn pd() -> MapParams {
        MapParams::standard(SystemKind::PeriodDoubling, -3.0, 0.0).unwrap()
    }

    #[test]
    fn constant_mode_oracle() {
        // c = a·c − 1 with a = −3
        let sol = solve_bold_mu(&pd(), Variant::Main).unwrap();
        assert_eq!(sol.shape.constant_term(), -0.25);
    }

    #[test]
    fn first_harmonic_against_dense_solve() {
        let a = -3.0;
        let w = golden_omega();
        let (c, s) = (w.cos(), w.sin());
        // rows: sin and cos coefficients of u(θ+ω) − a·u(θ) = −(1 + cos θ)
        let m = Matrix2::new(c - a, -s, s, c - a);
        let x = m.lu().solve(&Vector2::new(0.0, -1.0)).unwrap();
        let sol = solve_bold_mu(&pd(), Variant::Main).unwrap();
        let (bc, bs) = sol.shape.coeff(1);
        assert!((bs - x[0]).abs() < 1e-14);
        assert!((bc - x[1]).abs() < 1e-14);
        assert!((bs - 0.1212).abs() < 1e-4, "{bs}");
        assert!((bc + 0.4058).abs() < 1e-4, "{bc}");
    }

    #[test]
    fn zero_forcing_gives_zero_shape() {
        for kind in SystemKind::PIECEWISE {
            let a = if kind == SystemKind::PeriodDoubling { -2.0 } else { 2.0 };
            let p = MapParams::new(kind, a, 0.0, 1.0, golden_omega(), TrigPoly::zero(3)).unwrap();
            let sol = solve_bold_mu(&p, Variant::Main).unwrap();
            assert!(sol.shape.is_zero());
            assert_eq!(sol.affine_b0, 0.0);
            if kind == SystemKind::PitchforkSub {
                assert_eq!(sol.affine_const, 2.0);
            }
        }
    }

    #[test]
    fn rejects_uniform_mode() {
        let p = MapParams::standard(SystemKind::PeriodDoubling, -0.5, 0.0).unwrap();
        assert!(solve_bold_mu(&p, Variant::Main).is_err());
    }

    #[test]
    fn residual_small_and_zero_at_b0() {
        let p = pd();
        let sol = solve_bold_mu(&p, Variant::Main).unwrap();
        assert!(mu_residual(&sol, 0.1, p.g(), 4096).unwrap() <= 1e-10);
        assert_eq!(mu_residual(&sol, 0.0, p.g(), 4096).unwrap(), 0.0);
    }

    #[test]
    fn residual_branch_violation_past_b_star() {
        let p = pd();
        let sol = solve_bold_mu(&p, Variant::Main).unwrap();
        let cb = critical_b(&p).unwrap();
        match mu_residual(&sol, cb.b_star * (1.0 + 1e-3), p.g(), 4096) {
            Err(Error::BranchViolation {
                theta,
                image_theta,
                excess,
            }) => {
                assert!(excess > 0.0);
                assert!(crate::numeric::angle_dist(image_theta, cb.collision_theta) < 1e-3);
                assert!(crate::numeric::angle_dist(theta, cb.theta_star) < 1e-3);
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn extremum_examples() {
        let sol = solve_bold_mu(&pd(), Variant::Main).unwrap();
        let ex = extremum(&sol, 1e-12);
        let (c, s) = sol.shape.coeff(1);
        let amp = c.hypot(s);
        assert!((ex.val_min - (-0.25 - amp)).abs() < 1e-12);
        assert!((ex.val_max - (-0.25 + amp)).abs() < 1e-12);
        assert!((ex.val_min + 0.6735).abs() < 1e-4);
        // amplitude form: minimum where (c, s)·(cos θ, sin θ) = −amp
        let t = (-s).atan2(-c).rem_euclid(std::f64::consts::TAU);
        assert!(crate::numeric::angle_dist(ex.theta_min, t) < 1e-6);

        let mut flat = sol.clone();
        flat.shape = TrigPoly::constant(0.7);
        let e = extremum(&flat, 1e-12);
        assert_eq!((e.val_min, e.val_max), (0.7, 0.7));

        let mut sine = sol;
        sine.shape = TrigPoly::sine(1);
        let e = extremum(&sine, 1e-12);
        assert!((e.val_min + 1.0).abs() < 1e-14 && (e.theta_min - 1.5 * std::f64::consts::PI).abs() < 1e-6);
        assert!((e.val_max - 1.0).abs() < 1e-14 && (e.theta_max - FRAC_PI_2).abs() < 1e-6);
    }

    #[test]
    fn b_star_period_doubling() {
        let p = pd();
        let cb = critical_b(&p).unwrap();
        assert_eq!(cb.method, Method::ClosedForm);
        assert_eq!(cb.colliding, Colliding::Upper);
        // grid oracle: b* = (1/a)/min shape on a fine grid
        let sol = solve_bold_mu(&p, Variant::Main).unwrap();
        let vmin = (0..1 << 20)
            .map(|j| sol.unit(grid_angle(j, 1 << 20)))
            .fold(f64::INFINITY, f64::min);
        assert!((cb.b_star - (-1.0 / 3.0) / vmin).abs() < 1e-9);
        assert!((cb.b_star - 0.4949).abs() < 5e-5);
        let p2 = p.with_g(p.g().scale(2.0)).unwrap();
        let cb2 = critical_b(&p2).unwrap();
        assert!((cb2.b_star / cb.b_star - 0.5).abs() < 1e-12);
    }

    #[test]
    fn b_star_bisection_agrees() {
        let p = pd();
        let cf = critical_b(&p).unwrap();
        let bi = critical_b_bisect(&p, 1e-10).unwrap();
        assert_eq!(bi.method, Method::Bisection);
        assert!((cf.b_star - bi.b_star).abs() < 1e-9);
        assert!(crate::numeric::angle_dist(cf.collision_theta, bi.collision_theta) < 1e-4);
    }

    #[test]
    fn saddle_node_half_b_star_is_separated() {
        let p = MapParams::standard(SystemKind::SaddleNode, 2.0, 0.0).unwrap();
        let cb = critical_b_bisect(&p, 1e-10).unwrap();
        assert!(cb.b_star > 0.0);
        assert!(min_seed_gap(&p, Side::Upper, 0.5 * cb.b_star).unwrap().1 > 0.0);
        for kind in SystemKind::PIECEWISE {
            let a = if kind == SystemKind::PeriodDoubling { -2.0 } else { 2.0 };
            let q = MapParams::standard(kind, a, 0.0).unwrap();
            for &side in sides(kind) {
                assert!(min_seed_gap(&q, side, 0.0).unwrap().1 > 0.0);
            }
        }
    }

    #[test]
    fn simultaneous_collision_for_sine() {
        let p = MapParams::new(
            SystemKind::PitchforkSuper,
            2.0,
            0.0,
            1.0,
            golden_omega(),
            TrigPoly::sine(1),
        )
        .unwrap();
        let cb = critical_b(&p).unwrap();
        assert_eq!(cb.colliding, Colliding::Both);
        let (bu, _) = side_critical_b(&p, Side::Upper).unwrap();
        let (bl, _) = side_critical_b(&p, Side::Lower).unwrap();
        assert!((bu - bl).abs() <= 1e-9 * bu);
    }

    #[test]
    fn pitchfork_sub_bisection_matches_breakpoint_formula() {
        // μ₂ ≥ δ  ⇔  b·min(unit) ≥ −δ/(a−1)
        let p = MapParams::standard(SystemKind::PitchforkSub, 2.0, 0.0).unwrap();
        let sol = solve_bold_mu(&p, Variant::Main).unwrap();
        let ex = extremum(&sol, 1e-12);
        let want = (-1.0 / (2.0 - 1.0)) / ex.val_min;
        let cb = critical_b(&p).unwrap();
        assert_eq!(cb.method, Method::Bisection);
        assert!((cb.b_star - want).abs() < 1e-9 * want, "{} vs {want}", cb.b_star);
    }

    #[test]
    fn fiber_distance_constants() {
        let p = MapParams::standard(SystemKind::PitchforkSub, 3.0, 0.0).unwrap();
        let m = solve_bold_mu(&p, Variant::Main).unwrap();
        let h = solve_bold_mu(&p, Variant::Hat).unwrap();
        for j in 0..256 {
            let t = grid_angle(j, 256);
            assert!((m.eval(0.2, t) - h.eval(0.2, t) - 2.0 * 3.0 / 2.0).abs() < 1e-10);
        }
    }

    #[test]
    fn degenerate_forcing() {
        // positive mean-free forcing that keeps μ₃ above zero: sign mismatch
        let p = MapParams::new(
            SystemKind::SaddleNode,
            2.0,
            0.0,
            1.0,
            golden_omega(),
            TrigPoly::constant(-1.0),
        )
        .unwrap();
        assert!(matches!(critical_b(&p), Err(Error::DegenerateForcing { .. })));
        let z = MapParams::new(
            SystemKind::PeriodDoubling,
            -3.0,
            0.0,
            1.0,
            golden_omega(),
            TrigPoly::zero(1),
        )
        .unwrap();
        assert!(matches!(critical_b(&z), Err(Error::DegenerateForcing { .. })));
    }

    #[test]
    fn decay_report() {
        let p = pd();
        let sol = solve_bold_mu(&p, Variant::Main).unwrap();
        let r = coefficient_decay_report(&sol, p.g());
        assert!(r.within_bound());
        for row in &r.rows {
            if let Some(q) = row.ratio {
                assert!(q <= 1.25);
            }
        }
        let g: TrigPoly = "cos:1,0.5,0.25,0,0,0;sin:0.3,0.1".parse().unwrap();
        let q = p.with_g(g.clone()).unwrap();
        let sol = solve_bold_mu(&q, Variant::Main).unwrap();
        let r = coefficient_decay_report(&sol, &g);
        for row in &r.rows[3..] {
            assert!(row.mu_mag <= 1e-14);
        }
        let z = p.with_g(TrigPoly::zero(4)).unwrap();
        let sol = solve_bold_mu(&z, Variant::Main).unwrap();
        assert!(coefficient_decay_report(&sol, z.g()).rows.is_empty());
    }
}
