//! Real roots of cubics with three real roots, by the trigonometric form.
//!
//! The extents of the Hill regions and the circular-orbit momenta are all
//! roots of cubics whose discriminant vanishes exactly at a critical energy.
//! The trigonometric solution stays well conditioned up to that double root,
//! where Cardano's formula loses half the digits.

use std::f64::consts::PI;

/// Relative slack allowed on the `acos` argument before a cubic is declared
/// to have a single real root.
const ACOS_SLACK: f64 = 1e-12;

/// The three real roots of `x^3 + p x + q = 0`, ascending.
///
/// Returns `None` when the cubic has one real root (positive discriminant
/// beyond rounding slack). Requires `p < 0`.
pub fn depressed_real_roots(p: f64, q: f64) -> Option<[f64; 3]> {
    if p >= 0.0 {
        return None;
    }
    let m = 2.0 * (-p / 3.0).sqrt();
    let arg = 3.0 * q / (p * m);
    if arg.abs() > 1.0 + ACOS_SLACK {
        return None;
    }
    let phi = arg.clamp(-1.0, 1.0).acos() / 3.0;
    let mut roots = [
        m * phi.cos(),
        m * (phi - 2.0 * PI / 3.0).cos(),
        m * (phi - 4.0 * PI / 3.0).cos(),
    ];
    roots.sort_by(f64::total_cmp);
    Some(roots)
}

/// One Newton step on `f`, skipped when the derivative is too small to be
/// trusted (near a double root the trigonometric value is already better).
pub fn newton_polish(x: f64, f: impl Fn(f64) -> f64, df: impl Fn(f64) -> f64) -> f64 {
    let d = df(x);
    let fx = f(x);
    if d.abs() < 1e-6 || !d.is_finite() {
        return x;
    }
    let step = fx / d;
    // refuse steps that would leave the neighborhood of the root
    if step.abs() > 1e-6 * x.abs().max(1.0) {
        return x;
    }
    x - step
}

/// Plain bisection for a sign change of `f` on `[lo, hi]`.
pub fn bisect(f: impl Fn(f64) -> f64, mut lo: f64, mut hi: f64, tol: f64) -> Option<f64> {
    let mut flo = f(lo);
    let fhi = f(hi);
    if flo == 0.0 {
        return Some(lo);
    }
    if fhi == 0.0 {
        return Some(hi);
    }
    if flo.signum() == fhi.signum() {
        return None;
    }
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if hi - lo <= tol || mid <= lo || mid >= hi {
            return Some(mid);
        }
        let fm = f(mid);
        if fm == 0.0 {
            return Some(mid);
        }
        if fm.signum() == flo.signum() {
            lo = mid;
            flo = fm;
        } else {
            hi = mid;
        }
    }
    Some(0.5 * (lo + hi))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn factored_cubic() {
        // (x-1)(x-2)(x+3) = x^3 - 7x + 6
        let r = depressed_real_roots(-7.0, 6.0).unwrap();
        assert!((r[0] + 3.0).abs() < 1e-14);
        assert!((r[1] - 1.0).abs() < 1e-14);
        assert!((r[2] - 2.0).abs() < 1e-14);
    }

    #[test]
    fn double_root_boundary() {
        // (x-1)^2 (x+2) = x^3 - 3x + 2
        let r = depressed_real_roots(-3.0, 2.0).unwrap();
        assert!((r[0] + 2.0).abs() < 1e-14);
        assert!((r[1] - 1.0).abs() < 1e-7);
        assert!((r[2] - 1.0).abs() < 1e-7);
    }

    #[test]
    fn single_real_root_is_rejected() {
        assert!(depressed_real_roots(-1.0, 5.0).is_none());
        assert!(depressed_real_roots(1.0, 0.0).is_none());
    }

    #[test]
    fn bisection_finds_sqrt2() {
        let r = bisect(|x| x * x - 2.0, 0.0, 2.0, 1e-15).unwrap();
        assert!((r - 2f64.sqrt()).abs() < 1e-14);
        assert!(bisect(|x| x * x + 1.0, 0.0, 2.0, 1e-15).is_none());
    }
}
