//! Capacities of the rotating Kepler domains, bounds for Hill's lunar
//! problem and the resulting spectral-gap intervals.
//!
//! The Hill bounds come from the inclusions in [`crate::inclusions`]
//! combined with monotonicity: a Hill domain sandwiched between two rotating
//! Kepler domains inherits their capacities as lower and upper bounds.

use std::f64::consts::{PI, TAU};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::inclusions::{inner_rkp_level, outer_rkp_level, select_cover_order};
use crate::rkp_spectrum::{circular_roots, generator_order, Family};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct OrbitClassLabel {
    pub family: Family,
    pub n: u32,
}

impl OrbitClassLabel {
    pub fn new(family: Family, n: u32) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidArgument("orbit class iterate must be at least 1".into()));
        }
        Ok(Self { family, n })
    }

    pub fn retrograde(n: u32) -> Self {
        Self { family: Family::Retrograde, n: n.max(1) }
    }

    pub fn direct(n: u32) -> Self {
        Self { family: Family::Direct, n: n.max(1) }
    }

    /// `2N - 1` for retrograde classes, `2N + 1` for direct ones.
    pub fn cz_index(&self) -> i64 {
        match self.family {
            Family::Retrograde => 2 * self.n as i64 - 1,
            Family::Direct => 2 * self.n as i64 + 1,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CapacityInterval {
    pub lo: f64,
    pub hi: f64,
    pub cz_index: i64,
    pub label: OrbitClassLabel,
    /// Cover order `P` the interval was derived from.
    pub p: u32,
    /// The upper endpoint is a strict bound (a limit at `c_R^1`).
    pub hi_open: bool,
}

/// `|L(c)|` for the family: `L_R` or `-L_D`.
fn momentum(family: Family, c: f64) -> Result<f64> {
    let r = circular_roots(c)?;
    Ok(match family {
        Family::Retrograde => r.l_r,
        Family::Direct => -r.l_d,
    })
}

/// `2 pi N L_R(c)` resp. `-2 pi N L_D(c)` for classes alive at `c`.
pub fn capacity_rkp(c: f64, label: OrbitClassLabel) -> Result<f64> {
    let order = generator_order(c)?.p;
    if label.n == 0 || label.n > order {
        return Err(Error::UndefinedClass { n: label.n, c, order });
    }
    Ok(TAU * label.n as f64 * momentum(label.family, c)?)
}

fn check_hill_label(c: f64, label: OrbitClassLabel) -> Result<u32> {
    let p = select_cover_order(c)?;
    if label.n == 0 || (label.n >= 2 && label.n > p) || (label.n >= 2 && p < 2) {
        return Err(Error::UndefinedClass { n: label.n, c, order: p });
    }
    Ok(p)
}

/// `2 pi N (-+1 + sqrt(1 + 8c^3)) / (4c^2)`, the capacity of the rotating
/// Kepler domain at `c + 1/(2c^2)` sitting inside the Hill domain.
pub fn hill_lower_bound(c: f64, label: OrbitClassLabel) -> Result<f64> {
    check_hill_label(c, label)?;
    let sign = match label.family {
        Family::Retrograde => -1.0,
        Family::Direct => 1.0,
    };
    let surd = TAU * label.n as f64 * (sign + (1.0 + 8.0 * c * c * c).sqrt()) / (4.0 * c * c);
    debug_assert!({
        let via_roots = TAU * label.n as f64 * momentum(label.family, inner_rkp_level(c).unwrap_or(f64::NAN)).unwrap_or(f64::NAN);
        (via_roots - surd).abs() < 1e-12 * surd.max(1.0)
    });
    Ok(surd)
}

/// `L_R(c_R^P)` resp. `-L_D(c_R^P)` in closed form.
pub fn cover_coefficient(family: Family, p: u32) -> f64 {
    let q = p as f64 + 1.0;
    match family {
        Family::Retrograde => (-q + (q * (q + 8.0)).sqrt()) / (4.0 * q.cbrt()),
        Family::Direct => q.powf(-1.0 / 3.0),
    }
}

/// Limit of the first-iterate upper bound as the outer level tends to `2^(2/3)`.
pub fn global_cap(family: Family) -> f64 {
    TAU * cover_coefficient(family, 1)
}

/// Upper bound from the enclosing rotating Kepler domains.
///
/// First iterates use the level `c - 3^(-2/3)`; higher iterates use the
/// threshold `c_R^P` of the cover order `P` selected at `c`.
pub fn hill_upper_bound(c: f64, label: OrbitClassLabel) -> Result<f64> {
    let p = check_hill_label(c, label)?;
    if label.n == 1 {
        let v = TAU * momentum(label.family, outer_rkp_level(c)?)?;
        return Ok(v.min(global_cap(label.family)));
    }
    Ok(TAU * label.n as f64 * cover_coefficient(label.family, p))
}

/// Action intervals that must each contain a closed Reeb orbit of the Hill
/// hypersurface at `c`, labelled by index.
///
/// Below `c_H^2` only first iterates are covered and the upper ends are the
/// strict limits at `c_R^1`; above it iterates `1..=P` are emitted with the
/// closed upper ends at `c_R^P`.
pub fn spectral_gaps(c: f64) -> Result<Vec<CapacityInterval>> {
    let p = select_cover_order(c)?;
    let mut out = Vec::new();
    for family in [Family::Retrograde, Family::Direct] {
        let n_max = if p == 1 { 1 } else { p };
        for n in 1..=n_max {
            let label = OrbitClassLabel { family, n };
            let lo = hill_lower_bound(c, label)?;
            let hi = TAU * n as f64 * cover_coefficient(family, p);
            debug_assert!(lo <= hi, "empty interval at c = {c}: {lo} > {hi}");
            out.push(CapacityInterval { lo, hi, cz_index: label.cz_index(), label, p, hi_open: p == 1 });
        }
    }
    Ok(out)
}

/// `2 pi L_R(c - 3^(-2/3))`, an upper bound for the Hill systole; below `pi`.
pub fn hill_systole_upper(c: f64) -> Result<f64> {
    let v = TAU * circular_roots(outer_rkp_level(c)?)?.l_r;
    debug_assert!(v < PI);
    Ok(v)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::inclusions::threshold_c_h;

    #[test]
    fn rkp_capacities() {
        let r1 = capacity_rkp(2.0, OrbitClassLabel::retrograde(1)).unwrap();
        assert!((r1 - 2.8375239511).abs() < 1e-9);
        let d3 = capacity_rkp(2.0, OrbitClassLabel::direct(3)).unwrap();
        assert!((d3 - 11.2525870383).abs() < 1e-9);
        assert!(matches!(capacity_rkp(2.0, OrbitClassLabel::retrograde(5)), Err(Error::UndefinedClass { order: 3, .. })));
    }

    #[test]
    fn lower_bounds_at_critical_energy() {
        let c0 = threshold_c_h(0).unwrap();
        let r = hill_lower_bound(c0, OrbitClassLabel::retrograde(1)).unwrap() / TAU;
        let d = hill_lower_bound(c0, OrbitClassLabel::direct(1)).unwrap() / TAU;
        assert!((r - 0.4302916946).abs() < 1e-9);
        assert!((d - 0.5371249961).abs() < 1e-9);
        // closed surds of the displayed gap
        let s82 = 82f64.sqrt();
        assert!((r - (-1.0 + s82) / 3f64.powf(8.0 / 3.0)).abs() < 1e-12);
        assert!((d - (1.0 + s82) / 3f64.powf(8.0 / 3.0)).abs() < 1e-12);
    }

    #[test]
    fn bounds_at_two_point_two() {
        let lo = hill_lower_bound(2.2, OrbitClassLabel::retrograde(1)).unwrap() / TAU;
        let hi = hill_upper_bound(2.2, OrbitClassLabel::retrograde(1)).unwrap() / TAU;
        assert!((lo - 0.4278684819).abs() < 1e-9);
        assert!((hi - 0.4771245731).abs() < 1e-9);
        let hi2 = hill_upper_bound(2.2, OrbitClassLabel::retrograde(2)).unwrap() / TAU;
        assert!((hi2 - 2.0 * 0.4757433635).abs() < 1e-9);
        assert!(hill_upper_bound(2.2, OrbitClassLabel::retrograde(3)).is_err());
        assert!(hill_lower_bound(2.165, OrbitClassLabel::direct(2)).is_err());
    }

    #[test]
    fn caps() {
        assert!((global_cap(Family::Retrograde) / TAU - 0.4905339).abs() < 5e-7);
        assert!((global_cap(Family::Direct) / TAU - 0.7937005).abs() < 5e-7);
        for family in [Family::Retrograde, Family::Direct] {
            let at = TAU * momentum(family, crate::hekuba()).unwrap();
            assert!((at - global_cap(family)).abs() < 1e-12);
        }
    }

    #[test]
    fn gaps() {
        let g = spectral_gaps(threshold_c_h(0).unwrap()).unwrap();
        assert_eq!(g.len(), 2);
        assert!((g[0].lo / TAU - 0.43029).abs() < 5e-5 && (g[0].hi / TAU - 0.49053).abs() < 5e-6);
        assert!((g[1].lo / TAU - 0.53713).abs() < 5e-5 && (g[1].hi / TAU - 0.79370).abs() < 5e-6);
        assert_eq!((g[0].cz_index, g[1].cz_index), (1, 3));
        assert!(g.iter().all(|i| i.hi_open));
        let g = spectral_gaps(2.2).unwrap();
        assert_eq!(g.len(), 4);
        assert!(g.iter().all(|i| !i.hi_open && i.lo <= i.hi));
    }

    #[test]
    fn monotonicity_transfer() {
        for c in [2.17, 2.2, 2.5, 3.0, 6.0] {
            let p = select_cover_order(c).unwrap();
            for family in [Family::Retrograde, Family::Direct] {
                for n in 1..=p.max(1) {
                    let label = OrbitClassLabel { family, n };
                    let inner = capacity_rkp(inner_rkp_level(c).unwrap(), label).unwrap();
                    let lo = hill_lower_bound(c, label).unwrap();
                    assert!((inner - lo).abs() < 1e-12 * lo.max(1.0));
                }
            }
        }
    }

    #[test]
    fn systole_bound_below_pi() {
        let c0 = threshold_c_h(0).unwrap();
        let v0 = hill_systole_upper(c0).unwrap();
        assert!(v0 < PI && (v0 / TAU - 0.4807498568).abs() < 1e-9);
        let v3 = hill_systole_upper(3.0).unwrap();
        assert!(v3 < v0);
        assert!(hill_systole_upper(1e6).unwrap() < 1e-2);
    }
}
