//! Action spectrum and Conley–Zehnder indices of the regularized rotating
//! Kepler problem.
//!
//! Circular orbits at energy `-c` have angular momenta `L_R(c) > 0` and
//! `L_D(c) < 0`, the two roots of `f(x) = 1/(2x^2) - x = c` in `[-1, 1/2]`.
//! Torus orbits `T_{k,l}` exist on the window `L_R^3 < l/k < -L_D^3`.

use std::f64::consts::{PI, TAU};

use serde::{Deserialize, Serialize};

use crate::cubic::{bisect, newton_polish};
use crate::error::{Error, Result};

pub const RKP_CRITICAL: f64 = 1.5;

/// Distance of `N alpha` from an integer below which an orbit counts as
/// degenerate.
pub const DEGENERACY_TOL: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Family {
    Retrograde,
    Direct,
}

impl Family {
    pub fn letter(self) -> char {
        match self {
            Family::Retrograde => 'R',
            Family::Direct => 'D',
        }
    }
}

impl std::fmt::Display for Family {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Family::Retrograde => "retrograde",
            Family::Direct => "direct",
        })
    }
}

impl std::str::FromStr for Family {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "r" | "retrograde" => Ok(Family::Retrograde),
            "d" | "direct" => Ok(Family::Direct),
            other => Err(Error::InvalidArgument(format!("unknown family {other:?}"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CircularRootPair {
    pub c: f64,
    pub l_r: f64,
    pub l_d: f64,
}

impl CircularRootPair {
    pub fn get(&self, family: Family) -> f64 {
        match family {
            Family::Retrograde => self.l_r,
            Family::Direct => self.l_d,
        }
    }

    /// `alpha = 1 / (1 + L^3)`, the rotation number entering the index.
    pub fn alpha(&self, family: Family) -> f64 {
        let l = self.get(family);
        1.0 / (1.0 + l * l * l)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TorusOrbit {
    pub k: u32,
    pub l: u32,
    pub energy: f64,
    pub c_minus: f64,
    pub c_plus: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum SpectrumFamily {
    RetrogradeIterate { n: u32 },
    DirectIterate { n: u32 },
    Torus { k: u32, l: u32 },
}

impl SpectrumFamily {
    fn order_key(&self) -> (u8, u32, u32) {
        match *self {
            SpectrumFamily::RetrogradeIterate { n } => (0, n, 0),
            SpectrumFamily::DirectIterate { n } => (1, n, 0),
            SpectrumFamily::Torus { k, l } => (2, l, k),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SpectrumEntry {
    pub family: SpectrumFamily,
    pub action: f64,
    /// Absent for resonant circular iterates.
    pub cz_index: Option<i64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub struct GeneratorOrder {
    pub p: u32,
}

/// `f(x) = 1/(2x^2) - x`; circular orbits at energy `-c` solve `f(L) = c`.
pub fn circular_energy(x: f64) -> f64 {
    0.5 / (x * x) - x
}

fn check_c(c: f64) -> Result<()> {
    if !(c >= RKP_CRITICAL) {
        return Err(Error::BelowCritical { c, critical: RKP_CRITICAL });
    }
    Ok(())
}

fn check_open(c: f64) -> Result<()> {
    if !(c > RKP_CRITICAL) {
        return Err(Error::BelowCritical { c, critical: RKP_CRITICAL });
    }
    Ok(())
}

/// `L_R(c)` and `L_D(c)` from the secant/arccos closed form, polished by one
/// Newton step on `2x^3 + 2cx^2 - 1`.
pub fn circular_roots(c: f64) -> Result<CircularRootPair> {
    check_c(c)?;
    let s = 3.0 / (2.0 * c);
    let phi = s.powf(1.5).min(1.0).acos() / 3.0;
    let amp = 0.5 * s.sqrt();
    let g = |x: f64| (2.0 * x + 2.0 * c) * x * x - 1.0;
    let dg = |x: f64| (6.0 * x + 4.0 * c) * x;
    let l_r = newton_polish(amp / phi.cos(), g, dg);
    let l_d = newton_polish(amp / (phi + 2.0 * PI / 3.0).cos(), g, dg);
    debug_assert!({
        let b_r = bisect(g, 0.0, 0.5, 1e-15).unwrap_or(f64::NAN);
        let b_d = bisect(g, -1.0, 0.0, 1e-15).unwrap_or(f64::NAN);
        (b_r - l_r).abs() < 1e-10 && (b_d - l_d).abs() < 1e-7
    });
    Ok(CircularRootPair { c, l_r, l_d })
}

/// Action `2 pi N L_R(c)` of the N-th iterate of the retrograde orbit.
pub fn retrograde_action(c: f64, n: u32) -> Result<f64> {
    check_iterate(n)?;
    Ok(TAU * n as f64 * circular_roots(c)?.l_r)
}

/// Action `-2 pi N L_D(c)` of the N-th iterate of the direct orbit.
pub fn direct_action(c: f64, n: u32) -> Result<f64> {
    check_iterate(n)?;
    Ok(-TAU * n as f64 * circular_roots(c)?.l_d)
}

pub fn circular_action(family: Family, c: f64, n: u32) -> Result<f64> {
    match family {
        Family::Retrograde => retrograde_action(c, n),
        Family::Direct => direct_action(c, n),
    }
}

fn check_iterate(n: u32) -> Result<()> {
    if n == 0 {
        return Err(Error::InvalidArgument("iterate count must be at least 1".into()));
    }
    Ok(())
}

fn check_kl(k: u32, l: u32) -> Result<()> {
    if l == 0 || k <= l {
        return Err(Error::InvalidArgument(format!("torus orbit needs k > l >= 1, got ({k},{l})")));
    }
    Ok(())
}

pub fn torus_orbit(k: u32, l: u32) -> Result<TorusOrbit> {
    check_kl(k, l)?;
    let ratio = k as f64 / l as f64;
    let a = 0.5 * ratio.powf(2.0 / 3.0);
    let b = ratio.powf(-1.0 / 3.0);
    Ok(TorusOrbit { k, l, energy: -a, c_minus: a - b, c_plus: a + b })
}

/// Strict window test `L_R^3 < l/k < -L_D^3`.
pub fn torus_exists(k: u32, l: u32, c: f64) -> Result<bool> {
    check_kl(k, l)?;
    let roots = circular_roots(c)?;
    Ok(window_contains(&roots, k, l))
}

fn window_contains(roots: &CircularRootPair, k: u32, l: u32) -> bool {
    let ratio = l as f64 / k as f64;
    roots.l_r.powi(3) < ratio && ratio < -roots.l_d.powi(3)
}

/// `2 pi (-l c + 3/2 k^(2/3) l^(1/3))` without any window check.
pub fn torus_action_unchecked(k: u32, l: u32, c: f64) -> f64 {
    let (k, l) = (k as f64, l as f64);
    TAU * (-l * c + 1.5 * k.powf(2.0 / 3.0) * l.powf(1.0 / 3.0))
}

/// Action of `T_{k,l}` at energy `-c`; window endpoints are admitted.
pub fn torus_action(k: u32, l: u32, c: f64) -> Result<f64> {
    let t = torus_orbit(k, l)?;
    let slack = 1e-12 * c.abs().max(1.0);
    let inside = c >= RKP_CRITICAL && torus_exists(k, l, c)?;
    let at_end = c >= RKP_CRITICAL && ((c - t.c_minus).abs() <= slack || (c - t.c_plus).abs() <= slack);
    if !(inside || at_end) {
        return Err(Error::NotInWindow { k, l, c, lo: t.c_minus, hi: t.c_plus });
    }
    Ok(torus_action_unchecked(k, l, c))
}

/// `1 + 2 floor(N alpha)`; refuses energies where `N alpha` is resonant.
pub fn cz_index_circular(family: Family, n: u32, c: f64) -> Result<i64> {
    check_iterate(n)?;
    check_open(c)?;
    let x = n as f64 * circular_roots(c)?.alpha(family);
    if (x - x.round()).abs() < DEGENERACY_TOL {
        return Err(Error::Degenerate { value: x, tol: DEGENERACY_TOL });
    }
    Ok(1 + 2 * x.floor() as i64)
}

pub fn cz_index_torus(k: u32, l: u32) -> Result<i64> {
    check_kl(k, l)?;
    Ok(2 * k as i64 - 1)
}

/// Every closed Reeb orbit class with action at most `cutoff`, ascending.
///
/// A torus orbit in the window satisfies `(l/k)^(1/3) < -L_D`, hence its
/// action exceeds `2 pi l (1/L_D^2 + L_D)`; this bounds `l`, and the window
/// bounds `k`, so the enumeration is complete.
pub fn enumerate_spectrum(c: f64, cutoff: f64) -> Result<Vec<SpectrumEntry>> {
    check_open(c)?;
    if !(cutoff > 0.0 && cutoff.is_finite()) {
        return Err(Error::InvalidArgument(format!("action cutoff must be positive, got {cutoff}")));
    }
    let roots = circular_roots(c)?;
    let mut out = Vec::new();
    for (family, l) in [(Family::Retrograde, roots.l_r), (Family::Direct, -roots.l_d)] {
        let mut n = 1u32;
        while TAU * n as f64 * l <= cutoff {
            let fam = match family {
                Family::Retrograde => SpectrumFamily::RetrogradeIterate { n },
                Family::Direct => SpectrumFamily::DirectIterate { n },
            };
            let cz = cz_index_circular(family, n, c).ok();
            out.push(SpectrumEntry { family: fam, action: TAU * n as f64 * l, cz_index: cz });
            n += 1;
        }
    }

    let per_l = TAU * (1.0 / (roots.l_d * roots.l_d) + roots.l_d);
    let l_max = (cutoff / per_l).floor();
    if !(l_max < 1e6) {
        return Err(Error::InvalidArgument(format!(
            "torus enumeration at c = {c} needs l up to {l_max:e}; raise c or lower the cutoff"
        )));
    }
    let lo_ratio = -roots.l_d.powi(3);
    let hi_ratio = roots.l_r.powi(3);
    for l in 1..=l_max as u32 {
        let k_lo = (l as f64 / lo_ratio).floor().max(l as f64) as u32;
        let k_hi = (l as f64 / hi_ratio).ceil() as u32;
        for k in k_lo..=k_hi {
            if k <= l || !window_contains(&roots, k, l) {
                continue;
            }
            let action = torus_action_unchecked(k, l, c);
            if action <= cutoff {
                out.push(SpectrumEntry {
                    family: SpectrumFamily::Torus { k, l },
                    action,
                    cz_index: Some(2 * k as i64 - 1),
                });
            }
        }
    }
    out.sort_by(|a, b| a.action.total_cmp(&b.action).then(a.family.order_key().cmp(&b.family.order_key())));
    Ok(out)
}

/// Smallest action `2 pi L_R(c)`.
pub fn systole_rkp(c: f64) -> Result<f64> {
    let s = TAU * circular_roots(c)?.l_r;
    debug_assert!(c <= RKP_CRITICAL || {
        let spec = enumerate_spectrum(c, 3.0 * s).unwrap_or_default();
        spec.first().map(|e| e.action) == Some(s)
    });
    Ok(s)
}

/// `c_R^P = (P + 3) / (2 (P + 1)^(1/3))`; `c_R^0 = 3/2`.
pub fn threshold_c_r(p: u32) -> f64 {
    let p = p as f64;
    (p + 3.0) / (2.0 * (p + 1.0).cbrt())
}

/// Largest `P` with `c >= c_R^P`, cross-checked against `-L_D^3 < 1/(P+1)`.
pub fn generator_order(c: f64) -> Result<GeneratorOrder> {
    check_open(c)?;
    let mut p = 0u32;
    while threshold_c_r(p + 1) <= c {
        p += 1;
    }
    debug_assert!({
        let near = (c - threshold_c_r(p)).abs() < 1e-9 || (c - threshold_c_r(p + 1)).abs() < 1e-9;
        let ld3 = -circular_roots(c).map(|r| r.l_d.powi(3)).unwrap_or(f64::NAN);
        near || (ld3 < 1.0 / (p as f64 + 1.0) && ld3 >= 1.0 / (p as f64 + 2.0))
    });
    Ok(GeneratorOrder { p })
}

/// Rank of `SH_*` in degree `0..=2P`: one in degrees 0 and 1, two above.
pub fn sh_rank(degree: u32, p: u32) -> Result<u32> {
    if degree > 2 * p {
        return Err(Error::InvalidArgument(format!("degree {degree} outside 0..={}", 2 * p)));
    }
    Ok(if degree <= 1 { 1 } else { 2 })
}
