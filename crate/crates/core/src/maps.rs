//! The piecewise-linear fiber maps and the skew product they drive.
//!
//! Every system has the form
//!
//! ```text
//! x̄ = h(x) + σ·b·g(θ),   θ̄ = θ + ω
//! ```
//!
//! with `σ = −1` for the supercritical pitchfork, the period doubling and
//! the smooth comparison map, `σ = +1` for the subcritical pitchfork and the
//! saddle node.

use std::f64::consts::{FRAC_PI_2, PI, TAU};
use std::fmt;
use std::str::FromStr;

use crate::error::{invalid, Error, Result};
use crate::forcing::TrigPoly;

/// `ω = π(√5 − 1)`, the golden rotation.
pub fn golden_omega() -> f64 {
    PI * (5f64.sqrt() - 1.0)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum SystemKind {
    /// `h₁`: `ax` clipped to `[−π/2, π/2]`.
    PitchforkSuper,
    /// `h₂`: slope `a` outside a flat plateau `[−δ, δ]`.
    PitchforkSub,
    /// `h₃`: `ax` for `x > −1/a`, `−1` below.
    SaddleNode,
    /// `h₄`: `ax` for `x > 1/a`, `1` below, with `a < −1`.
    PeriodDoubling,
    /// `1 − exp(ax)`.
    SmoothPD,
}

impl SystemKind {
    pub const ALL: [SystemKind; 5] = [
        SystemKind::PitchforkSuper,
        SystemKind::PitchforkSub,
        SystemKind::SaddleNode,
        SystemKind::PeriodDoubling,
        SystemKind::SmoothPD,
    ];

    /// The four piecewise-linear systems.
    pub const PIECEWISE: [SystemKind; 4] = [
        SystemKind::PitchforkSuper,
        SystemKind::PitchforkSub,
        SystemKind::SaddleNode,
        SystemKind::PeriodDoubling,
    ];

    /// Sign in front of `b·g(θ)`.
    pub fn sigma(self) -> f64 {
        match self {
            SystemKind::PitchforkSub | SystemKind::SaddleNode => 1.0,
            _ => -1.0,
        }
    }

    /// Map steps per application of the curve operator: 2 for the period
    /// doubling system (its attractor is two-periodic), 1 otherwise.
    pub fn steps_per_iterate(self) -> usize {
        match self {
            SystemKind::PeriodDoubling => 2,
            _ => 1,
        }
    }

    /// Sign of `a` required outside the uniform-contraction regime.
    pub fn slope_sign(self) -> f64 {
        match self {
            SystemKind::PeriodDoubling => -1.0,
            _ => 1.0,
        }
    }

    pub fn is_piecewise(self) -> bool {
        self != SystemKind::SmoothPD
    }

    pub fn name(self) -> &'static str {
        match self {
            SystemKind::PitchforkSuper => "pitchfork-super",
            SystemKind::PitchforkSub => "pitchfork-sub",
            SystemKind::SaddleNode => "saddle-node",
            SystemKind::PeriodDoubling => "period-doubling",
            SystemKind::SmoothPD => "smooth-pd",
        }
    }
}

impl fmt::Display for SystemKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for SystemKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        SystemKind::ALL
            .into_iter()
            .find(|k| k.name() == s.trim())
            .ok_or_else(|| Error::InvalidArgument(format!("unknown system {s:?}")))
    }
}

/// Which piece of the map a point falls on. Breakpoints count as `Linear`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Branch {
    Linear,
    /// Constant piece to the right of the linear one.
    ConstUpper,
    /// Constant piece to the left of the linear one.
    ConstLower,
    /// The flat middle piece `(−δ, δ)` of the subcritical pitchfork.
    Plateau,
}

impl Branch {
    pub fn is_flat(self) -> bool {
        self != Branch::Linear
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HEval {
    pub value: f64,
    pub branch: Branch,
}

/// Which repelling curve of the subcritical pitchfork: `Main` lives on
/// `x ≥ δ`, `Hat` on `x ≤ −δ`. The other systems have one, reported as
/// `Main`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum Variant {
    #[default]
    Main,
    Hat,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Mode {
    /// `|a| > 1`: the linear piece expands, the constant pieces contract.
    Nonuniform,
    /// `|a| < 1`: the whole fiber map contracts.
    Uniform,
}

/// Validated parameters of one system.
#[derive(Debug, Clone, PartialEq)]
pub struct MapParams {
    kind: SystemKind,
    a: f64,
    b: f64,
    delta: f64,
    omega: f64,
    g: TrigPoly,
    bp_shift: f64,
}

impl MapParams {
    /// Validates and normalizes.
    ///
    /// * `|a| = 1` is rejected. `|a| > 1` needs the sign the system expects
    ///   (`a < 0` for the period doubling, `a > 0` otherwise); `|a| < 1` is
    ///   the uniform regime and accepts either sign. The smooth map needs
    ///   `a > 0`.
    /// * `ω` is reduced to `[0, 2π)`. Values with `ω/2π` within `1e-9/q` of
    ///   some `p/q`, `q ≤ 1000`, are rejected as rational.
    /// * Negative `b` is rewritten as `(b, g) → (−b, −g)` for every system
    ///   but the saddle node, which keeps it.
    pub fn new(kind: SystemKind, a: f64, b: f64, delta: f64, omega: f64, g: TrigPoly) -> Result<Self> {
        if !a.is_finite() || a == 0.0 {
            return invalid(format!("slope a = {a} must be finite and nonzero"));
        }
        if (a.abs() - 1.0).abs() < f64::EPSILON {
            return invalid("|a| = 1 is excluded");
        }
        if kind == SystemKind::SmoothPD && a <= 0.0 {
            return invalid("the smooth map needs a > 0");
        }
        if a.abs() > 1.0 && a.signum() != kind.slope_sign() {
            return invalid(format!("{kind} with |a| > 1 needs a of sign {}", kind.slope_sign()));
        }
        if !b.is_finite() {
            return invalid("forcing amplitude b must be finite");
        }
        if !(delta.is_finite() && delta > 0.0) {
            return invalid("plateau half-width delta must be positive");
        }
        let omega = reduce_omega(omega)?;
        let (b, g) = if b < 0.0 && kind != SystemKind::SaddleNode {
            (-b, g.scale(-1.0))
        } else {
            (b, g)
        };
        Ok(MapParams {
            kind,
            a,
            b,
            delta,
            omega,
            g,
            bp_shift: 0.0,
        })
    }

    /// Test hook for negative controls: moves the period doubling
    /// breakpoint by `shift` while the flat value stays 1, which makes `h`
    /// discontinuous.
    #[doc(hidden)]
    pub fn with_breakpoint_shift(&self, shift: f64) -> Self {
        MapParams {
            bp_shift: shift,
            ..self.clone()
        }
    }

    /// Golden rotation, `g = 1 + cos θ`, `δ = 1`.
    pub fn standard(kind: SystemKind, a: f64, b: f64) -> Result<Self> {
        MapParams::new(kind, a, b, 1.0, golden_omega(), TrigPoly::default_forcing())
    }

    /// Same system with another forcing amplitude.
    pub fn with_b(&self, b: f64) -> Result<Self> {
        MapParams::new(self.kind, self.a, b, self.delta, self.omega, self.g.clone())
    }

    pub fn with_g(&self, g: TrigPoly) -> Result<Self> {
        MapParams::new(self.kind, self.a, self.b, self.delta, self.omega, g)
    }

    pub fn kind(&self) -> SystemKind {
        self.kind
    }
    pub fn a(&self) -> f64 {
        self.a
    }
    pub fn b(&self) -> f64 {
        self.b
    }
    pub fn delta(&self) -> f64 {
        self.delta
    }
    pub fn omega(&self) -> f64 {
        self.omega
    }
    pub fn g(&self) -> &TrigPoly {
        &self.g
    }
    pub fn sigma(&self) -> f64 {
        self.kind.sigma()
    }

    pub fn mode(&self) -> Mode {
        if self.a.abs() > 1.0 {
            Mode::Nonuniform
        } else {
            Mode::Uniform
        }
    }

    pub(crate) fn require_nonuniform(&self) -> Result<()> {
        if self.mode() != Mode::Nonuniform || !self.kind.is_piecewise() {
            return invalid(format!(
                "needs a piecewise system with |a| > 1, got {} with a = {}",
                self.kind, self.a
            ));
        }
        Ok(())
    }

    /// `h(x)` and the branch it was taken from.
    pub fn h_eval(&self, x: f64) -> HEval {
        let a = self.a;
        let (value, branch) = match self.kind {
            SystemKind::PitchforkSuper => {
                let bp = FRAC_PI_2 / a.abs();
                let top = FRAC_PI_2.copysign(a);
                if x > bp {
                    (top, Branch::ConstUpper)
                } else if x < -bp {
                    (-top, Branch::ConstLower)
                } else {
                    (a * x, Branch::Linear)
                }
            }
            SystemKind::PitchforkSub => {
                let d = self.delta;
                if x > d {
                    (a * (x - d), Branch::Linear)
                } else if x < -d {
                    (a * (x + d), Branch::Linear)
                } else if x == d || x == -d {
                    (0.0, Branch::Linear)
                } else {
                    (0.0, Branch::Plateau)
                }
            }
            SystemKind::SaddleNode => {
                if x >= -1.0 / a {
                    (a * x, Branch::Linear)
                } else {
                    (-1.0, Branch::ConstLower)
                }
            }
            SystemKind::PeriodDoubling => {
                if x >= 1.0 / a + self.bp_shift {
                    (a * x, Branch::Linear)
                } else {
                    (1.0, Branch::ConstLower)
                }
            }
            SystemKind::SmoothPD => (1.0 - (a * x).exp(), Branch::Linear),
        };
        HEval { value, branch }
    }

    #[inline]
    pub fn h(&self, x: f64) -> f64 {
        self.h_eval(x).value
    }

    /// `h′(x)`; `a` at breakpoints, 0 on flat pieces.
    pub fn h_prime(&self, x: f64) -> f64 {
        match self.kind {
            SystemKind::SmoothPD => -self.a * (self.a * x).exp(),
            _ => match self.h_eval(x).branch {
                Branch::Linear => self.a,
                _ => 0.0,
            },
        }
    }

    /// `x̄ = h(x) + σ·b·g(θ)` with `θ` the angle of the current point.
    #[inline]
    pub fn fiber_step(&self, x: f64, theta: f64) -> f64 {
        self.h(x) + self.sigma() * self.b * self.g.eval(theta)
    }

    /// One step of the skew product. `θ̄` is reduced to `[0, 2π)`.
    pub fn step(&self, x: f64, theta: f64) -> (f64, f64) {
        (self.fiber_step(x, theta), reduce_angle(theta + self.omega))
    }

    /// Two steps; the primitive for the two-periodic objects of the period
    /// doubling system.
    pub fn step2(&self, x: f64, theta: f64) -> (f64, f64) {
        let (x1, t1) = self.step(x, theta);
        self.step(x1, t1)
    }

    /// The breakpoints of `h`, in increasing order.
    pub fn breakpoints(&self) -> Vec<f64> {
        let a = self.a;
        match self.kind {
            SystemKind::PitchforkSuper => {
                let bp = FRAC_PI_2 / a.abs();
                vec![-bp, bp]
            }
            SystemKind::PitchforkSub => vec![-self.delta, self.delta],
            SystemKind::SaddleNode => vec![-1.0 / a],
            SystemKind::PeriodDoubling => vec![1.0 / a + self.bp_shift],
            SystemKind::SmoothPD => vec![],
        }
    }

    /// How far `x` lies outside the linear piece carrying the repelling
    /// curve `variant`; nonpositive inside.
    pub(crate) fn piece_excess(&self, variant: Variant, x: f64) -> f64 {
        let a = self.a;
        match (self.kind, variant) {
            (SystemKind::PitchforkSuper, _) => x.abs() - FRAC_PI_2 / a.abs(),
            (SystemKind::PitchforkSub, Variant::Main) => self.delta - x,
            (SystemKind::PitchforkSub, Variant::Hat) => x + self.delta,
            (SystemKind::SaddleNode, _) => -1.0 / a - x,
            (SystemKind::PeriodDoubling, _) => 1.0 / a - x,
            (SystemKind::SmoothPD, _) => f64::INFINITY,
        }
    }

    /// The affine extension of the linear piece carrying `variant`.
    pub(crate) fn piece_image(&self, variant: Variant, x: f64) -> f64 {
        match (self.kind, variant) {
            (SystemKind::PitchforkSub, Variant::Main) => self.a * (x - self.delta),
            (SystemKind::PitchforkSub, Variant::Hat) => self.a * (x + self.delta),
            _ => self.a * x,
        }
    }

    /// Value of `h` on its flat pieces that seeds the bounding curve:
    /// `π/2` (upper) or `−π/2` (lower) for the supercritical pitchfork,
    /// the plateau 0, `−1` for the saddle node and `1` for the period
    /// doubling.
    pub(crate) fn flat_value(&self, lower: bool) -> f64 {
        match self.kind {
            SystemKind::PitchforkSuper => {
                if lower {
                    -FRAC_PI_2
                } else {
                    FRAC_PI_2
                }
            }
            SystemKind::PitchforkSub => 0.0,
            SystemKind::SaddleNode => -1.0,
            SystemKind::PeriodDoubling => 1.0,
            SystemKind::SmoothPD => 1.0,
        }
    }
}

/// `θ mod 2π` in `[0, 2π)`.
#[inline]
pub fn reduce_angle(theta: f64) -> f64 {
    let r = theta.rem_euclid(TAU);
    if r >= TAU {
        0.0
    } else {
        r
    }
}

fn reduce_omega(omega: f64) -> Result<f64> {
    if !omega.is_finite() {
        return invalid("rotation omega must be finite");
    }
    let w = reduce_angle(omega);
    let r = w / TAU;
    for q in 1..=1000u32 {
        let rq = r * q as f64;
        let p = rq.round();
        if (rq - p).abs() < 1e-9 {
            return invalid(format!(
                "omega/2pi = {r} is within 1e-9/q of {p}/{q}; an irrational rotation is required"
            ));
        }
    }
    Ok(w)
}
