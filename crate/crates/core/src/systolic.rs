//! Contact volume and systolic ratio of the rotating Kepler hypersurfaces.
//!
//! The volume of `Sigma_R^c` equals the symplectic volume of the enclosed
//! domain. Three evaluators are provided:
//!
//! - a closed form obtained by slicing the domain in `q`: over a fixed `q`
//!   the momentum fiber is a shifted disk of area `2 pi (1/|q| + |q|^2/2 - c)`,
//!   which integrates to `8 pi^2 (rho + rho^4/8 - c rho^2/2)`;
//! - adaptive quadrature of the double integral over momentum polar
//!   coordinates `(r, theta)` with the fiber radius in closed form;
//! - Monte Carlo over momenta with exact fiber areas and an analytic tail.

use std::f64::consts::{PI, TAU};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::hamiltonians::{hill_region_extent, ProblemKind};
use crate::moser::RKP_DISCRIMINANT_GUARD;
use crate::quadrature::{integrate, integrate_2d, QuadOptions};
use crate::rkp_spectrum::{circular_roots, RKP_CRITICAL};

/// Momentum radius of the Monte Carlo sampling disk.
pub const MC_P_RADIUS: f64 = 4.0;
/// Trapezoid nodes per fiber-area evaluation.
pub const MC_FIBER_NODES: usize = 128;
const MC_BATCH: usize = 4096;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum VolumeMethod {
    Quadrature,
    ClosedForm,
    MonteCarlo,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct VolumeResult {
    pub value: f64,
    pub method: VolumeMethod,
    pub error_estimate: f64,
    pub samples_or_evals: u64,
    pub seed: Option<u64>,
}

fn check_guarded(c: f64) -> Result<()> {
    let floor = RKP_CRITICAL + RKP_DISCRIMINANT_GUARD;
    if !(c >= floor) {
        return Err(Error::BelowCritical { c, critical: floor });
    }
    Ok(())
}

/// `8 pi^2 (rho + rho^4/8 - c rho^2/2)` with `rho` the Hill region radius.
pub fn contact_volume_closed_form(c: f64) -> Result<VolumeResult> {
    let rho = hill_region_extent(ProblemKind::RotatingKepler, c)?;
    let value = 8.0 * PI * PI * (rho + rho.powi(4) / 8.0 - 0.5 * c * rho * rho);
    Ok(VolumeResult { value, method: VolumeMethod::ClosedForm, error_estimate: 0.0, samples_or_evals: 1, seed: None })
}

/// `32 pi r / ((r^2 + 2c) + sqrt((r^2 + 2c)^2 + 16 r cos theta))^2`.
fn integrand(c: f64, r: f64, theta: f64) -> (f64, bool) {
    let a = r * r + 2.0 * c;
    let disc = a * a + 16.0 * r * theta.cos();
    let d = a + disc.max(0.0).sqrt();
    (32.0 * PI * r / (d * d), disc >= 0.0)
}

/// Adaptive iterated Gauss–Kronrod over `u in (0, 1)`, `r = u/(1-u)`, and
/// `theta in (0, 2 pi)`.
pub fn contact_volume_quadrature(c: f64, rel_tol: f64) -> Result<VolumeResult> {
    check_guarded(c)?;
    if !(rel_tol >= 1e-10) {
        return Err(Error::InvalidArgument(format!("relative tolerance {rel_tol:e} is below 1e-10")));
    }
    let bad = std::sync::atomic::AtomicBool::new(false);
    let res = integrate_2d(
        |u, theta| {
            let w = 1.0 - u;
            let r = u / w;
            let (v, ok) = integrand(c, r, theta);
            if !ok {
                bad.store(true, std::sync::atomic::Ordering::Relaxed);
            }
            v / (w * w)
        },
        (0.0, 1.0),
        (0.0, TAU),
        QuadOptions { rel_tol: 0.1 * rel_tol, abs_tol: 0.0, max_intervals: 4000 },
        QuadOptions { rel_tol: 0.01 * rel_tol, abs_tol: 0.0, max_intervals: 4000 },
    );
    if bad.load(std::sync::atomic::Ordering::Relaxed) {
        return Err(Error::NegativeDiscriminant { value: -0.0 });
    }
    let achieved = res.error / res.value.abs();
    if !res.converged || achieved > rel_tol {
        return Err(Error::ToleranceNotMet { achieved, requested: rel_tol });
    }
    Ok(VolumeResult {
        value: res.value,
        method: VolumeMethod::Quadrature,
        error_estimate: res.error,
        samples_or_evals: res.evals as u64,
        seed: None,
    })
}

/// `1/2 oint r(theta)^2 dtheta` for the fiber over a momentum of norm `pr`;
/// the fiber shape depends on `|p|` only up to a rotation.
pub fn fiber_area(c: f64, pr: f64, nodes: usize) -> f64 {
    let a = pr * pr + 2.0 * c;
    let mut acc = 0.0;
    for j in 0..nodes {
        let th = TAU * (j as f64 + 0.5) / nodes as f64;
        let r = 4.0 / (a + (a * a + 16.0 * pr * th.cos()).sqrt());
        acc += r * r;
    }
    0.5 * acc * TAU / nodes as f64
}

/// Volume carried by momenta with `|p| > r_max`, to second order in
/// `1/A`, `A = r_max^2 + 2c`.
pub fn mc_tail(c: f64, r_max: f64) -> f64 {
    let a = r_max * r_max + 2.0 * c;
    8.0 * PI * PI * (1.0 / a + (10.0 * r_max * r_max + 4.0 * c) / a.powi(5))
}

/// Monte Carlo with `n` uniform momenta on `|p| <= MC_P_RADIUS`.
///
/// Batch `b` draws from a ChaCha stream keyed by `(seed, b)`, and batch sums
/// are combined in index order, so the result is independent of the thread
/// count.
pub fn contact_volume_mc(c: f64, n: usize, seed: u64) -> Result<VolumeResult> {
    check_guarded(c)?;
    if n < 10_000 {
        return Err(Error::InvalidArgument(format!("Monte Carlo needs at least 10^4 samples, got {n}")));
    }
    let disk = PI * MC_P_RADIUS * MC_P_RADIUS;
    let batches = n.div_ceil(MC_BATCH);
    let sums: Vec<(f64, f64)> = (0..batches)
        .into_par_iter()
        .map(|b| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(b as u64);
            let count = MC_BATCH.min(n - b * MC_BATCH);
            let mut s = 0.0;
            let mut s2 = 0.0;
            for _ in 0..count {
                let u: f64 = rng.random();
                let pr = MC_P_RADIUS * u.sqrt();
                // the angle of p only rotates the fiber; draw it to keep streams aligned
                let _angle: f64 = rng.random();
                let x = disk * 2.0 * fiber_area(c, pr, MC_FIBER_NODES);
                s += x;
                s2 += x * x;
            }
            (s, s2)
        })
        .collect();
    let (s, s2) = sums.iter().fold((0.0, 0.0), |acc, v| (acc.0 + v.0, acc.1 + v.1));
    let nf = n as f64;
    let mean = s / nf;
    let var = (s2 / nf - mean * mean).max(0.0) * nf / (nf - 1.0);
    Ok(VolumeResult {
        value: mean + mc_tail(c, MC_P_RADIUS),
        method: VolumeMethod::MonteCarlo,
        error_estimate: (var / nf).sqrt(),
        samples_or_evals: n as u64,
        seed: Some(seed),
    })
}

/// `Vol / (2 pi L_R(c))^2`, using the closed-form volume.
pub fn systolic_ratio(c: f64) -> Result<f64> {
    if !(c > RKP_CRITICAL) {
        return Err(Error::BelowCritical { c, critical: RKP_CRITICAL });
    }
    let sys = TAU * circular_roots(c)?.l_r;
    Ok(contact_volume_closed_form(c)?.value / (sys * sys))
}

/// Fiber area by adaptive quadrature, the reference for [`fiber_area`].
pub fn fiber_area_adaptive(c: f64, pr: f64) -> f64 {
    let a = pr * pr + 2.0 * c;
    0.5 * integrate(
        |th| {
            let r = 4.0 / (a + (a * a + 16.0 * pr * th.cos()).sqrt());
            r * r
        },
        0.0,
        TAU,
        QuadOptions { rel_tol: 1e-14, abs_tol: 0.0, max_intervals: 2000 },
    )
    .value
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn closed_form_values() {
        let v = contact_volume_closed_form(1.5).unwrap().value;
        assert!((v - 3.0 * PI * PI).abs() < 1e-12);
        let v = contact_volume_closed_form(2.0).unwrap().value;
        assert!((v - 20.45213646).abs() < 1e-7);
        let v = contact_volume_closed_form(5.0).unwrap().value;
        assert!((v - 7.9116028).abs() < 1e-6);
    }

    #[test]
    fn slicing_oracle() {
        // integrate the momentum-disk area 2 pi (1/s + s^2/2 - c) over |q| = s <= rho
        for c in [1.6, 2.0, 5.0] {
            let rho = hill_region_extent(ProblemKind::RotatingKepler, c).unwrap();
            let r = integrate(
                |s| 2.0 * TAU * s * TAU * (1.0 / s + 0.5 * s * s - c),
                0.0,
                rho,
                QuadOptions { rel_tol: 1e-13, ..Default::default() },
            );
            let v = contact_volume_closed_form(c).unwrap().value;
            assert!((r.value - v).abs() < 1e-10 * v);
        }
    }

    #[test]
    fn quadrature_matches_closed_form() {
        let q = contact_volume_quadrature(2.0, 1e-8).unwrap();
        let v = contact_volume_closed_form(2.0).unwrap().value;
        assert!((q.value - v).abs() < 1e-7 * v, "{} vs {v}", q.value);
        assert!(contact_volume_quadrature(1.5, 1e-8).is_err());
        assert!(contact_volume_quadrature(2.0, 1e-12).is_err());
    }

    #[test]
    fn trapezoid_fiber_area_is_spectral() {
        for pr in [0.0, 0.5, 2.0, 4.0] {
            let a = fiber_area(2.0, pr, MC_FIBER_NODES);
            let b = fiber_area_adaptive(2.0, pr);
            assert!((a - b).abs() < 1e-12 * b, "{pr}: {a} vs {b}");
        }
    }

    #[test]
    fn tail_matches_quadrature() {
        let c = 2.0;
        let exact = integrate(
            |u| {
                let w = 1.0 - u;
                let r = MC_P_RADIUS + u / w;
                TAU * r * 2.0 * fiber_area_adaptive(c, r) / (w * w)
            },
            0.0,
            1.0,
            QuadOptions { rel_tol: 1e-11, ..Default::default() },
        );
        assert!((mc_tail(c, MC_P_RADIUS) - exact.value).abs() < 1e-5 * exact.value, "{} vs {}", mc_tail(c, MC_P_RADIUS), exact.value);
    }

    #[test]
    fn monte_carlo_is_deterministic() {
        let a = contact_volume_mc(2.0, 20_000, 7).unwrap();
        let b = contact_volume_mc(2.0, 20_000, 7).unwrap();
        assert_eq!(a.value.to_bits(), b.value.to_bits());
        assert_eq!(a.seed, Some(7));
        assert!(contact_volume_mc(2.0, 100, 7).is_err());
    }

    #[test]
    fn ratio_limits() {
        assert!((systolic_ratio(2.0).unwrap() - 2.5401514).abs() < 1e-6);
        assert!((systolic_ratio(1.5001).unwrap() - 3.0).abs() < 0.02);
        assert!((systolic_ratio(200.0).unwrap() - 2.0).abs() < 0.01);
    }
}
