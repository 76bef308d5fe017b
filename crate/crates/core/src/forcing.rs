//! Finite trigonometric polynomials.
//!
//! The forcing `g` and the shape of the repelling curve are both stored as
//!
//! ```text
//! p(θ) = Σ_{n=0}^{N} c_n cos(nθ) + s_n sin(nθ),    s_0 = 0
//! ```
//!
//! Evaluation sums in ascending `n` with no compensation, so results are
//! reproducible bit for bit.

use std::f64::consts::TAU;
use std::fmt;
use std::str::FromStr;

use rustfft::num_complex::Complex;
use rustfft::FftPlanner;

use crate::error::{invalid, Error, Result};

/// A real trigonometric polynomial of degree `N`.
#[derive(Debug, Clone, PartialEq)]
pub struct TrigPoly {
    cos: Vec<f64>,
    sin: Vec<f64>,
}

/// Result of [`TrigPoly::classify`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ForcingClass {
    pub nonnegative: bool,
    pub pi_antisymmetric: bool,
}

impl TrigPoly {
    /// Builds a polynomial from cosine coefficients `c_0..c_N` and sine
    /// coefficients `s_1..s_N`. The shorter list is padded with zeros.
    pub fn new(cos: &[f64], sin: &[f64]) -> Result<Self> {
        if cos.iter().chain(sin).any(|c| !c.is_finite()) {
            return invalid("trigonometric coefficients must be finite");
        }
        let deg = cos.len().saturating_sub(1).max(sin.len());
        let mut c = vec![0.0; deg + 1];
        let mut s = vec![0.0; deg + 1];
        c[..cos.len()].copy_from_slice(cos);
        s[1..=sin.len()].copy_from_slice(sin);
        Ok(TrigPoly { cos: c, sin: s })
    }

    /// Same as [`new`](Self::new) but `sin` includes the unused index 0,
    /// which must be zero.
    pub fn from_parts(cos: Vec<f64>, sin: Vec<f64>) -> Result<Self> {
        if cos.len() != sin.len() || cos.is_empty() {
            return invalid("cos and sin coefficient vectors must have equal nonzero length");
        }
        if sin[0] != 0.0 {
            return invalid("sin_coeffs[0] must be exactly 0");
        }
        if cos.iter().chain(&sin).any(|c| !c.is_finite()) {
            return invalid("trigonometric coefficients must be finite");
        }
        Ok(TrigPoly { cos, sin })
    }

    pub fn zero(degree: usize) -> Self {
        TrigPoly {
            cos: vec![0.0; degree + 1],
            sin: vec![0.0; degree + 1],
        }
    }

    pub fn constant(c: f64) -> Self {
        TrigPoly {
            cos: vec![c],
            sin: vec![0.0],
        }
    }

    /// `g(θ) = 1 + cos θ`.
    pub fn default_forcing() -> Self {
        TrigPoly {
            cos: vec![1.0, 1.0],
            sin: vec![0.0, 0.0],
        }
    }

    /// `sin(nθ)` alone.
    pub fn sine(n: usize) -> Self {
        let mut p = TrigPoly::zero(n);
        if n > 0 {
            p.sin[n] = 1.0;
        }
        p
    }

    /// `cos(nθ)` alone.
    pub fn cosine(n: usize) -> Self {
        let mut p = TrigPoly::zero(n);
        p.cos[n] = 1.0;
        p
    }

    pub fn degree(&self) -> usize {
        self.cos.len() - 1
    }

    /// Index `n` holds the coefficient of `cos(nθ)`.
    pub fn cos_coeffs(&self) -> &[f64] {
        &self.cos
    }

    /// Index `n` holds the coefficient of `sin(nθ)`; index 0 is always 0.
    pub fn sin_coeffs(&self) -> &[f64] {
        &self.sin
    }

    /// The mean value `c_0`.
    pub fn constant_term(&self) -> f64 {
        self.cos[0]
    }

    pub fn is_zero(&self) -> bool {
        self.cos.iter().chain(&self.sin).all(|&c| c == 0.0)
    }

    pub fn eval(&self, theta: f64) -> f64 {
        let mut acc = self.cos[0];
        for n in 1..self.cos.len() {
            let (s, c) = (n as f64 * theta).sin_cos();
            acc += self.sin[n] * s + self.cos[n] * c;
        }
        acc
    }

    /// Termwise derivative; the degree is kept.
    pub fn derivative(&self) -> TrigPoly {
        let mut out = TrigPoly::zero(self.degree());
        for n in 1..self.cos.len() {
            let k = n as f64;
            out.cos[n] = k * self.sin[n];
            out.sin[n] = -k * self.cos[n];
        }
        out
    }

    pub fn scale(&self, k: f64) -> TrigPoly {
        TrigPoly {
            cos: self.cos.iter().map(|c| k * c).collect(),
            sin: self.sin.iter().map(|c| k * c).collect(),
        }
    }

    /// `α·self + β·other`.
    pub fn lin_comb(&self, alpha: f64, other: &TrigPoly, beta: f64) -> TrigPoly {
        let deg = self.degree().max(other.degree());
        let mut out = TrigPoly::zero(deg);
        for n in 0..=deg {
            let (c1, s1) = self.coeff(n);
            let (c2, s2) = other.coeff(n);
            out.cos[n] = alpha * c1 + beta * c2;
            out.sin[n] = alpha * s1 + beta * s2;
        }
        out
    }

    /// `(cos, sin)` coefficients of harmonic `n`, zero past the degree.
    pub fn coeff(&self, n: usize) -> (f64, f64) {
        if n < self.cos.len() {
            (self.cos[n], self.sin[n])
        } else {
            (0.0, 0.0)
        }
    }

    /// Bound on `|p(θ + 2π) − p(θ)|` caused by rounding of the argument
    /// `θ + 2π` and of `nθ` (4 ulps of each argument, times the slope).
    pub fn periodicity_tolerance(&self, theta: f64) -> f64 {
        let ulp = |x: f64| {
            let x = x.abs().max(f64::MIN_POSITIVE);
            f64::from_bits(x.to_bits() + 1) - x
        };
        let mut tol = 4.0 * ulp(self.eval(theta).abs().max(self.cos[0].abs()));
        let arg = theta.abs() + TAU;
        for n in 1..self.cos.len() {
            let k = n as f64;
            let amp = self.cos[n].abs() + self.sin[n].abs();
            tol += amp * (k * 4.0 * ulp(arg) + 4.0 * ulp(k * arg));
        }
        tol
    }

    /// Sign and symmetry classes used by the collision results.
    ///
    /// `nonnegative` looks at a uniform grid of `grid_size` points with slack
    /// `1e-12`. `pi_antisymmetric` means every even harmonic, the mean
    /// included, is below `1e-12` in magnitude.
    pub fn classify(&self, grid_size: usize) -> Result<ForcingClass> {
        if grid_size < 2 * self.degree() + 2 {
            return invalid(format!(
                "grid of {grid_size} points cannot resolve degree {}",
                self.degree()
            ));
        }
        let min = (0..grid_size)
            .map(|j| self.eval(TAU * j as f64 / grid_size as f64))
            .fold(f64::INFINITY, f64::min);
        let pi_antisymmetric = (0..=self.degree())
            .step_by(2)
            .all(|n| self.cos[n].abs() <= 1e-12 && self.sin[n].abs() <= 1e-12);
        Ok(ForcingClass {
            nonnegative: min >= -1e-12,
            pi_antisymmetric,
        })
    }

    /// Degree-`n` discrete Fourier projection of samples taken on the grid
    /// `θ_j = 2πj/M`.
    pub fn project_samples(samples: &[f64], degree: usize) -> Result<TrigPoly> {
        let m = samples.len();
        if m < 2 * degree + 2 {
            return invalid(format!(
                "{m} samples cannot resolve degree {degree} (need at least {})",
                2 * degree + 2
            ));
        }
        if samples.iter().any(|v| !v.is_finite()) {
            return Err(Error::NumericalFailure("non-finite sample".into()));
        }
        let mut buf: Vec<Complex<f64>> = samples.iter().map(|&v| Complex::new(v, 0.0)).collect();
        FftPlanner::new().plan_fft_forward(m).process(&mut buf);
        let inv = 1.0 / m as f64;
        let mut out = TrigPoly::zero(degree);
        out.cos[0] = buf[0].re * inv;
        for n in 1..=degree {
            out.cos[n] = 2.0 * buf[n].re * inv;
            out.sin[n] = -2.0 * buf[n].im * inv;
        }
        Ok(out)
    }

    /// Values of `p(θ_j − shift)` on the grid `θ_j = 2πj/M`, by one inverse
    /// FFT.
    pub fn sample_shifted(&self, m: usize, shift: f64) -> Result<Vec<f64>> {
        let deg = self.degree();
        if m < 2 * deg + 2 {
            return invalid(format!("grid of {m} cannot carry degree {deg}"));
        }
        let mut buf = vec![Complex::new(0.0, 0.0); m];
        buf[0] = Complex::new(self.cos[0], 0.0);
        for n in 1..=deg {
            // cₙ cos nθ + sₙ sin nθ = Re((cₙ − i sₙ) e^{inθ})
            let (s, c) = (n as f64 * shift).sin_cos();
            let z = Complex::new(self.cos[n], -self.sin[n]) * Complex::new(c, -s) * 0.5;
            buf[n] += z;
            buf[m - n] += z.conj();
        }
        FftPlanner::new().plan_fft_inverse(m).process(&mut buf);
        Ok(buf.into_iter().map(|z| z.re).collect())
    }

    /// Values on the grid `θ_j = 2πj/M`.
    pub fn sample(&self, m: usize) -> Vec<f64> {
        (0..m).map(|j| self.eval(grid_angle(j, m))).collect()
    }
}

/// `θ_j = 2πj/M`. Nodes shared by grids `M` and `2M` are bitwise equal.
#[inline]
pub fn grid_angle(j: usize, m: usize) -> f64 {
    TAU * j as f64 / m as f64
}

impl Default for TrigPoly {
    fn default() -> Self {
        TrigPoly::default_forcing()
    }
}

impl fmt::Display for TrigPoly {
    /// Writes the coefficient string `cos:c0,c1,...;sin:s1,s2,...`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let join = |v: &[f64]| v.iter().map(|c| format!("{c:?}")).collect::<Vec<_>>().join(",");
        write!(f, "cos:{}", join(&self.cos))?;
        if self.degree() > 0 {
            write!(f, ";sin:{}", join(&self.sin[1..]))?;
        }
        Ok(())
    }
}

impl FromStr for TrigPoly {
    type Err = Error;

    /// Parses `cos:c0,c1,...;sin:s1,s2,...`. A missing `sin:` part means all
    /// sine terms vanish. `default` gives `1 + cos θ`.
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if s.eq_ignore_ascii_case("default") {
            return Ok(TrigPoly::default_forcing());
        }
        let mut cos = Vec::new();
        let mut sin = Vec::new();
        let mut seen_cos = false;
        for part in s.split(';').map(str::trim).filter(|p| !p.is_empty()) {
            let (key, list) = part
                .split_once(':')
                .ok_or_else(|| Error::InvalidArgument(format!("missing ':' in {part:?}")))?;
            let vals = list
                .split(',')
                .map(str::trim)
                .filter(|v| !v.is_empty())
                .map(|v| {
                    v.parse::<f64>()
                        .map_err(|_| Error::InvalidArgument(format!("bad coefficient {v:?}")))
                })
                .collect::<Result<Vec<_>>>()?;
            match key.trim() {
                "cos" if !seen_cos => {
                    cos = vals;
                    seen_cos = true;
                }
                "sin" if sin.is_empty() => sin = vals,
                k => return invalid(format!("unexpected or repeated key {k:?}")),
            }
        }
        if !seen_cos {
            return invalid("coefficient string needs a cos: part");
        }
        if cos.is_empty() {
            cos.push(0.0);
        }
        TrigPoly::new(&cos, &sin)
    }
}
