//! Inclusion thresholds between rotating Kepler and Hill domains and their
//! fiberwise numerical verification.
//!
//! Both families are fiberwise star-shaped around the collision, so one
//! domain contains another exactly when, over every momentum `p` and in
//! every direction `theta`, the outer fiber radius dominates the inner one.
//! The equivalent energy criterion `H_outer(r_inner u, p) + c_outer <= 0` is
//! evaluated alongside and the two must agree at every sample.

use std::f64::consts::TAU;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::hamiltonians::{critical_value, eval_hamiltonian, PhaseState, ProblemKind};
use crate::moser::{radial_fiber_point, FiberRay, RKP_DISCRIMINANT_GUARD};
use crate::rkp_spectrum::threshold_c_r;

/// Margin below zero still accepted as an inclusion (root-solver noise at
/// exactly tangent pairs).
pub const MARGIN_TOL: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DomainSpec {
    pub kind: ProblemKind,
    pub c: f64,
}

impl DomainSpec {
    pub fn new(kind: ProblemKind, c: f64) -> Result<Self> {
        let critical = critical_value(kind)?;
        let floor = match kind {
            ProblemKind::RotatingKepler => critical + RKP_DISCRIMINANT_GUARD,
            _ => critical * (1.0 - 1e-14),
        };
        if !(c >= floor) {
            return Err(Error::BelowCritical { c, critical });
        }
        Ok(Self { kind, c })
    }

    pub fn rkp(c: f64) -> Result<Self> {
        Self::new(ProblemKind::RotatingKepler, c)
    }

    pub fn hill(c: f64) -> Result<Self> {
        Self::new(ProblemKind::HillLunar, c)
    }
}

#[derive(Debug, Clone, Copy)]
pub struct GridOptions {
    /// Number of momentum rings, including `|p| = 0`.
    pub n_p: usize,
    /// Momentum directions per ring.
    pub n_p_angles: usize,
    pub n_theta: usize,
    pub p_max: f64,
    /// Require `worst_margin >= 0` instead of `>= -MARGIN_TOL`.
    pub strict: bool,
}

impl Default for GridOptions {
    fn default() -> Self {
        Self { n_p: 64, n_p_angles: 16, n_theta: 256, p_max: 12.0, strict: false }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InclusionReport {
    pub holds: bool,
    /// `min(r_outer - r_inner)` over all samples.
    pub worst_margin: f64,
    /// `(p1, p2, theta)` where the worst margin occurs.
    pub worst_at: [f64; 3],
    pub kappa_min: f64,
    pub kappa_max: f64,
    /// `(momentum samples, theta samples)`.
    pub samples: (usize, usize),
    /// Worst margin on each of the three outermost momentum rings, inward first.
    pub ring_trend: Vec<f64>,
    /// Samples where the radial and energy criteria disagreed away from tangency.
    pub disagreements: usize,
}

#[derive(Debug, Clone, Copy)]
struct RingStats {
    worst: f64,
    worst_at: [f64; 3],
    kmin: f64,
    kmax: f64,
    disagree: usize,
}

impl RingStats {
    fn empty() -> Self {
        Self { worst: f64::INFINITY, worst_at: [0.0; 3], kmin: f64::INFINITY, kmax: f64::NEG_INFINITY, disagree: 0 }
    }

    fn merge(mut self, o: Self) -> Self {
        if o.worst < self.worst {
            self.worst = o.worst;
            self.worst_at = o.worst_at;
        }
        self.kmin = self.kmin.min(o.kmin);
        self.kmax = self.kmax.max(o.kmax);
        self.disagree += o.disagree;
        self
    }
}

/// `c_H^P = (2P + 8 - sqrt((P+1)(P+9))) / (2 (P+1)^(1/3))` for any `P`;
/// `P = 0` gives the formula value, not the critical energy.
pub fn threshold_c_h_formula(p: u32) -> f64 {
    let q = p as f64 + 1.0;
    (2.0 * p as f64 + 8.0 - (q * (q + 8.0)).sqrt()) / (2.0 * q.cbrt())
}

/// `c_H^P` for `P >= 2`, and the critical energy `3^(4/3)/2` for `P = 0`.
///
/// `P = 1` is refused: its formula value exceeds `c_H^2`, so it does not
/// belong to the increasing sequence of thresholds.
pub fn threshold_c_h(p: u32) -> Result<f64> {
    match p {
        0 => Ok(crate::hill_critical()),
        1 => Err(Error::InvalidArgument(format!(
            "c_H^1 = {} exceeds c_H^2 and is not an inclusion threshold",
            threshold_c_h_formula(1)
        ))),
        _ => Ok(threshold_c_h_formula(p)),
    }
}

fn check_hill(c: f64) -> Result<()> {
    let critical = crate::hill_critical();
    if !(c >= critical * (1.0 - 1e-14)) {
        return Err(Error::BelowCritical { c, critical });
    }
    Ok(())
}

/// `c - 3^(-2/3)`: the rotating Kepler level enclosing the Hill domain at `c`.
pub fn outer_rkp_level(c: f64) -> Result<f64> {
    check_hill(c)?;
    Ok(c - crate::hill_shift())
}

/// `c + 1/(2c^2)`: the rotating Kepler level enclosed by the Hill domain at `c`.
pub fn inner_rkp_level(c: f64) -> Result<f64> {
    check_hill(c)?;
    Ok(c + 0.5 / (c * c))
}

/// `P = 1` below `c_H^2`, otherwise the largest `P >= 2` with `c >= c_H^P`.
pub fn select_cover_order(c: f64) -> Result<u32> {
    check_hill(c)?;
    if c < threshold_c_h_formula(2) {
        return Ok(1);
    }
    let mut p = 2;
    while threshold_c_h_formula(p + 1) <= c {
        p += 1;
    }
    Ok(p)
}

/// Extremal ratios `r_outer / r_inner` over paired fiber radii.
pub fn kappa_bounds(pairs: impl IntoIterator<Item = (f64, f64)>) -> (f64, f64) {
    pairs.into_iter().fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), (ri, ro)| {
        let k = ro / ri;
        (lo.min(k), hi.max(k))
    })
}

fn ring_stats(inner: DomainSpec, outer: DomainSpec, rho: f64, opts: &GridOptions) -> Result<RingStats> {
    let n_ang = if rho == 0.0 { 1 } else { opts.n_p_angles };
    let mut stats = RingStats::empty();
    for a in 0..n_ang {
        let phi = TAU * a as f64 / n_ang as f64;
        let p = [rho * phi.cos(), rho * phi.sin()];
        for j in 0..opts.n_theta {
            let ray = FiberRay::new(p, TAU * j as f64 / opts.n_theta as f64);
            let ri = radial_fiber_point(inner.kind, inner.c, ray)?;
            let ro = radial_fiber_point(outer.kind, outer.c, ray)?;
            let margin = ro - ri;
            let u = ray.direction();
            let h = eval_hamiltonian(outer.kind, &PhaseState::from_qp([ri * u[0], ri * u[1]], p))? + outer.c;
            let radial_in = margin >= 0.0;
            let energy_in = h <= 0.0;
            if radial_in != energy_in && margin.abs() > MARGIN_TOL * ri.max(1.0) {
                stats.disagree += 1;
            }
            if margin < stats.worst {
                stats.worst = margin;
                stats.worst_at = [p[0], p[1], ray.theta];
            }
            let k = ro / ri;
            stats.kmin = stats.kmin.min(k);
            stats.kmax = stats.kmax.max(k);
        }
    }
    Ok(stats)
}

/// Fiberwise check that the domain `inner` lies inside `outer`.
pub fn verify_fiber_inclusion(inner: DomainSpec, outer: DomainSpec, opts: &GridOptions) -> Result<InclusionReport> {
    let inner = DomainSpec::new(inner.kind, inner.c)?;
    let outer = DomainSpec::new(outer.kind, outer.c)?;
    if opts.n_p < 8 || opts.n_theta < 8 || opts.n_p_angles < 1 || !(opts.p_max > 0.0) {
        return Err(Error::InvalidArgument(format!(
            "grid {}x{} (p_max {}) is too coarse; both sizes must be at least 8",
            opts.n_p, opts.n_theta, opts.p_max
        )));
    }
    let rings: Vec<RingStats> = (0..opts.n_p)
        .into_par_iter()
        .map(|i| ring_stats(inner, outer, opts.p_max * i as f64 / (opts.n_p - 1) as f64, opts))
        .collect::<Result<_>>()?;
    let total = rings.iter().copied().fold(RingStats::empty(), RingStats::merge);
    let ring_trend = rings[rings.len() - 3..].iter().map(|r| r.worst).collect();
    let floor = if opts.strict { 0.0 } else { -MARGIN_TOL };
    let momenta = 1 + (opts.n_p - 1) * opts.n_p_angles;
    Ok(InclusionReport {
        holds: total.worst >= floor && total.disagree == 0,
        worst_margin: total.worst,
        worst_at: total.worst_at,
        kappa_min: total.kmin,
        kappa_max: total.kmax,
        samples: (momenta, opts.n_theta),
        ring_trend,
        disagreements: total.disagree,
    })
}

/// `|qbar^2 - (c_H^P - c_R^P)|` with `qbar = (sqrt(P+9) - sqrt(P+1)) / (2 (P+1)^(1/6))`.
pub fn tangency_identity_residual(p: u32) -> Result<f64> {
    if p < 2 {
        return Err(Error::InvalidArgument(format!("the tangency identity needs P >= 2, got {p}")));
    }
    let q = p as f64 + 1.0;
    let qbar = ((q + 8.0).sqrt() - q.sqrt()) / (2.0 * q.powf(1.0 / 6.0));
    Ok((qbar * qbar - (threshold_c_h_formula(p) - threshold_c_r(p))).abs())
}

/// Largest `|q|` found on `Sigma_R^{c + 1/(2c^2)}` over a sample of about
/// `n_samples` fiber points, including the fibers through the extremal
/// configurations `p = |q| (-sin theta, cos theta)`.
pub fn inner_level_sup_radius(c: f64, n_samples: usize) -> Result<f64> {
    let level = inner_rkp_level(c)?;
    let rho = crate::hamiltonians::hill_region_extent(ProblemKind::RotatingKepler, level)?;
    let n_theta = ((n_samples as f64).sqrt().ceil() as usize).max(8);
    let n_p = (n_samples / n_theta).max(8);
    let mut sup: f64 = 0.0;
    for i in 0..n_p {
        // spiral through a disk of radius 3 in momentum
        let t = i as f64 / n_p as f64;
        let pr = 3.0 * t.sqrt();
        let pa = 2.399963229728653 * i as f64;
        for j in 0..n_theta {
            let th = TAU * j as f64 / n_theta as f64;
            let r = radial_fiber_point(ProblemKind::RotatingKepler, level, FiberRay::new([pr * pa.cos(), pr * pa.sin()], th))?;
            sup = sup.max(r);
        }
    }
    for j in 0..n_theta {
        let th = TAU * j as f64 / n_theta as f64;
        let p = [-rho * th.sin(), rho * th.cos()];
        sup = sup.max(radial_fiber_point(ProblemKind::RotatingKepler, level, FiberRay::new(p, th))?);
    }
    Ok(sup)
}

/// Every sampled point of `Sigma_R^{c + 1/(2c^2)}` satisfies `|q| <= 1/c`.
pub fn verify_inner_level_radius(c: f64, n_samples: usize) -> Result<bool> {
    Ok(inner_level_sup_radius(c, n_samples)? <= 1.0 / c + 1e-12)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn small() -> GridOptions {
        GridOptions { n_p: 16, n_p_angles: 8, n_theta: 64, p_max: 12.0, strict: false }
    }

    #[test]
    fn hill_thresholds() {
        assert!((threshold_c_h(0).unwrap() - 2.163374355).abs() < 1e-9);
        assert!((threshold_c_h(2).unwrap() - 2.168639008).abs() < 1e-9);
        assert!((threshold_c_h(3).unwrap() - 2.227476403).abs() < 1e-9);
        assert!(threshold_c_h(1).is_err());
        assert!(threshold_c_h_formula(1) > threshold_c_h_formula(2));
        for p in 2..60 {
            assert!(threshold_c_h_formula(p + 1) > threshold_c_h_formula(p));
        }
    }

    #[test]
    fn levels() {
        let c0 = crate::hill_critical();
        assert!((outer_rkp_level(c0).unwrap() - 1.682624499).abs() < 1e-9);
        assert!((outer_rkp_level(2.2).unwrap() - 1.719250143).abs() < 1e-8);
        assert!(outer_rkp_level(c0).unwrap() > crate::hekuba());
        assert!((inner_rkp_level(2.2).unwrap() - 2.303305785).abs() < 1e-8);
        assert!((inner_rkp_level(c0).unwrap() - 2.270207657).abs() < 1e-9);
        assert!(inner_rkp_level(2.0).is_err());
    }

    #[test]
    fn cover_order() {
        assert_eq!(select_cover_order(2.165).unwrap(), 1);
        assert_eq!(select_cover_order(2.2).unwrap(), 2);
        assert_eq!(select_cover_order(2.3).unwrap(), 3);
        // c_H^5 = 2.43100 <= 2.5 < c_H^6
        assert_eq!(select_cover_order(2.5).unwrap(), 5);
    }

    #[test]
    fn tangency_identity() {
        for p in 2..=50 {
            assert!(tangency_identity_residual(p).unwrap() < 1e-12);
        }
        let q = 3f64;
        let qbar = ((q + 8.0).sqrt() - q.sqrt()) / (2.0 * q.powf(1.0 / 6.0));
        assert!((qbar * qbar - 0.4352358216).abs() < 1e-9);
    }

    #[test]
    fn nesting_same_kind() {
        let r = verify_fiber_inclusion(DomainSpec::rkp(1.7).unwrap(), DomainSpec::rkp(1.6).unwrap(), &small()).unwrap();
        assert!(r.holds && r.worst_margin > 0.0 && r.kappa_min >= 1.0);
        let r = verify_fiber_inclusion(DomainSpec::rkp(1.6).unwrap(), DomainSpec::rkp(1.7).unwrap(), &small()).unwrap();
        assert!(!r.holds && r.kappa_max <= 1.0);
        let r = verify_fiber_inclusion(DomainSpec::hill(2.5).unwrap(), DomainSpec::hill(2.2).unwrap(), &small()).unwrap();
        assert!(r.holds);
        assert_eq!(r.disagreements, 0);
    }

    #[test]
    fn kappa_scaling() {
        let radii: Vec<f64> = (0..100).map(|i| 0.3 + 0.01 * (i as f64).sin().abs()).collect();
        for k in [0.5, 2.0, 3.7] {
            let (lo, hi) = kappa_bounds(radii.iter().map(|&r| (r, k * r)));
            assert!((lo - k).abs() < 1e-12 && (hi - k).abs() < 1e-12);
        }
    }

    #[test]
    fn grid_errors() {
        let g = GridOptions { n_p: 4, ..small() };
        assert!(verify_fiber_inclusion(DomainSpec::rkp(1.7).unwrap(), DomainSpec::rkp(1.6).unwrap(), &g).is_err());
        assert!(DomainSpec::rkp(1.5).is_err());
        assert!(DomainSpec::hill(2.0).is_err());
    }

    #[test]
    fn inner_level_radius_bound() {
        assert!(verify_inner_level_radius(2.2, 10_000).unwrap());
        assert!(verify_inner_level_radius(3.0, 10_000).unwrap());
    }
}
