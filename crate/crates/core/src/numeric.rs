//! Minimization on the circle: dense scan, then golden section on the cells
//! around every near-minimal grid point.

use std::f64::consts::TAU;

use crate::maps::reduce_angle;

const INV_PHI: f64 = 0.618_033_988_749_894_9;

/// Golden-section search for a minimum of `f` on `[lo, hi]`. Stops once the
/// bracket is shorter than `tol`.
pub fn golden_min<F: Fn(f64) -> f64>(f: &F, mut lo: f64, mut hi: f64, tol: f64) -> (f64, f64) {
    let mut x1 = hi - INV_PHI * (hi - lo);
    let mut x2 = lo + INV_PHI * (hi - lo);
    let mut f1 = f(x1);
    let mut f2 = f(x2);
    let mut iters = 0;
    while hi - lo > tol && iters < 200 {
        if f1 <= f2 {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - INV_PHI * (hi - lo);
            f1 = f(x1);
        } else {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + INV_PHI * (hi - lo);
            f2 = f(x2);
        }
        iters += 1;
    }
    if f1 <= f2 {
        (x1, f1)
    } else {
        (x2, f2)
    }
}

/// Global minimum of a 2π-periodic `f`.
///
/// Every grid point that is a local minimum and lies within `margin` of the
/// grid minimum gets refined on its two neighbouring cells. Ties (within
/// `1e-15` relative) go to the smallest angle in `[0, 2π)`.
pub fn circle_min<F: Fn(f64) -> f64>(f: &F, grid: usize, refine_tol: f64) -> (f64, f64) {
    let h = TAU / grid as f64;
    let vals: Vec<f64> = (0..grid).map(|j| f(TAU * j as f64 / grid as f64)).collect();
    let (lo, hi) = vals
        .iter()
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(l, u), &v| (l.min(v), u.max(v)));
    let margin = 1e-3 * (hi - lo) + 1e-14 * (1.0 + lo.abs());
    let mut cands: Vec<(f64, f64)> = Vec::new();
    for j in 0..grid {
        let v = vals[j];
        let prev = vals[(j + grid - 1) % grid];
        let next = vals[(j + 1) % grid];
        if v <= prev && v <= next && v <= lo + margin {
            let t = TAU * j as f64 / grid as f64;
            let (tr, vr) = golden_min(f, t - h, t + h, refine_tol);
            if vr < v {
                cands.push((reduce_angle(tr), vr));
            } else {
                cands.push((t, v));
            }
        }
    }
    cands.sort_by(|x, y| x.0.total_cmp(&y.0));
    let mut best = cands[0];
    for &c in &cands[1..] {
        if c.1 < best.1 - 1e-15 * (1.0 + best.1.abs()) {
            best = c;
        }
    }
    best
}

/// Circular distance between two angles.
pub fn angle_dist(x: f64, y: f64) -> f64 {
    let d = (x - y).rem_euclid(TAU);
    d.min(TAU - d)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn finds_global_min_of_two_wells() {
        // wells at 1 and 4, the one at 4 slightly deeper
        let f = |t: f64| {
            -(-(angle_dist(t, 1.0)).powi(2) * 20.0).exp() - 1.01 * (-(angle_dist(t, 4.0)).powi(2) * 20.0).exp()
        };
        let (t, v) = circle_min(&f, 512, 1e-12);
        assert!((t - 4.0).abs() < 1e-6, "{t}");
        assert!(v < -1.0);
    }

    #[test]
    fn tie_goes_to_smallest_angle() {
        let f = |t: f64| (2.0 * t).cos();
        let (t, v) = circle_min(&f, 1000, 1e-12);
        assert!((t - std::f64::consts::FRAC_PI_2).abs() < 1e-6);
        assert!((v + 1.0).abs() < 1e-14);
    }

    #[test]
    fn wraps_around_zero() {
        let f = |t: f64| -t.cos();
        let (t, _) = circle_min(&f, 333, 1e-12);
        assert!(angle_dist(t, 0.0) < 1e-6);
    }
}
