//! The Kepler, rotating Kepler and Hill's lunar Hamiltonians.
//!
//! All three are written in the rotating frame convention
//!
//! ```text
//! H_KP = |p|^2/2 - 1/|q|
//! H_R  = H_KP + p1 q2 - p2 q1
//! H_H  = H_R  - q1^2 + q2^2/2
//! ```
//!
//! so the frame rotates counter-clockwise with unit angular velocity and a
//! retrograde circular orbit through `(r, 0)` carries momentum `(0, -r^-1/2)`.

use serde::{Deserialize, Serialize};

use crate::cubic::{depressed_real_roots, newton_polish};
use crate::error::{Error, Result};

/// Evaluations closer than this to the collision are refused.
pub const COLLISION_GUARD: f64 = 1e-12;

/// A point of phase space, rotating-frame position and conjugate momentum.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PhaseState {
    pub q1: f64,
    pub q2: f64,
    pub p1: f64,
    pub p2: f64,
}

impl PhaseState {
    pub const fn new(q1: f64, q2: f64, p1: f64, p2: f64) -> Self {
        Self { q1, q2, p1, p2 }
    }

    pub fn from_qp(q: [f64; 2], p: [f64; 2]) -> Self {
        Self::new(q[0], q[1], p[0], p[1])
    }

    pub fn from_array(y: [f64; 4]) -> Self {
        Self::new(y[0], y[1], y[2], y[3])
    }

    pub fn to_array(self) -> [f64; 4] {
        [self.q1, self.q2, self.p1, self.p2]
    }

    pub fn q(&self) -> [f64; 2] {
        [self.q1, self.q2]
    }

    pub fn p(&self) -> [f64; 2] {
        [self.p1, self.p2]
    }

    pub fn radius(&self) -> f64 {
        self.q1.hypot(self.q2)
    }

    /// The radius, or a collision error inside the guard.
    fn checked_radius(&self) -> Result<f64> {
        let r = self.radius();
        if !(r >= COLLISION_GUARD) {
            return Err(Error::Collision { radius: r });
        }
        Ok(r)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum ProblemKind {
    Kepler,
    RotatingKepler,
    HillLunar,
}

/// The energy parameter `c` of the level set `H = -c`.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd, Serialize, Deserialize)]
pub struct EnergyParam(pub f64);

impl EnergyParam {
    /// Wraps `c`, refusing energies below the critical value of `kind`.
    pub fn checked(kind: ProblemKind, c: f64) -> Result<Self> {
        let critical = critical_value(kind)?;
        if !(c >= critical * (1.0 - 1e-14)) {
            return Err(Error::BelowCritical { c, critical });
        }
        Ok(Self(c))
    }

    pub fn value(self) -> f64 {
        self.0
    }
}

/// Kepler energy `E` and the rotating-frame coupling `L = p1 q2 - p2 q1`.
///
/// With this sign `E + L = H_R`, and `L = +sqrt(r)` on the retrograde circular
/// orbit of radius `r`, `L = -sqrt(r)` on the direct one.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct KeplerIntegrals {
    pub energy: f64,
    pub angular_momentum: f64,
}

pub fn eval_hamiltonian(kind: ProblemKind, s: &PhaseState) -> Result<f64> {
    let r = s.checked_radius()?;
    let kepler = 0.5 * (s.p1 * s.p1 + s.p2 * s.p2) - 1.0 / r;
    let coupling = s.p1 * s.q2 - s.p2 * s.q1;
    Ok(match kind {
        ProblemKind::Kepler => kepler,
        ProblemKind::RotatingKepler => kepler + coupling,
        ProblemKind::HillLunar => kepler + coupling - s.q1 * s.q1 + 0.5 * s.q2 * s.q2,
    })
}

/// Canonical vector field `(dH/dp, -dH/dq)`.
pub fn vector_field(kind: ProblemKind, s: &PhaseState) -> Result<[f64; 4]> {
    let r = s.checked_radius()?;
    let r3 = r * r * r;
    let (gq1, gq2) = (-s.q1 / r3, -s.q2 / r3);
    Ok(match kind {
        ProblemKind::Kepler => [s.p1, s.p2, gq1, gq2],
        ProblemKind::RotatingKepler => [s.p1 + s.q2, s.p2 - s.q1, gq1 + s.p2, gq2 - s.p1],
        ProblemKind::HillLunar => [
            s.p1 + s.q2,
            s.p2 - s.q1,
            gq1 + s.p2 + 2.0 * s.q1,
            gq2 - s.p1 - s.q2,
        ],
    })
}

/// The critical energy parameter: `3/2` for the rotating Kepler problem and
/// `3^(4/3)/2` for Hill's lunar problem.
pub fn critical_value(kind: ProblemKind) -> Result<f64> {
    match kind {
        ProblemKind::RotatingKepler => Ok(1.5),
        ProblemKind::HillLunar => Ok(crate::hill_critical()),
        ProblemKind::Kepler => Err(Error::UnsupportedKind { kind, op: "critical_value" }),
    }
}

/// Effective potential whose superlevel set `{U >= c}` is the Hill region.
fn effective_potential(kind: ProblemKind, q: [f64; 2]) -> Result<f64> {
    let r = q[0].hypot(q[1]);
    if !(r >= COLLISION_GUARD) {
        return Err(Error::Collision { radius: r });
    }
    match kind {
        ProblemKind::RotatingKepler => Ok(1.0 / r + 0.5 * r * r),
        ProblemKind::HillLunar => Ok(1.0 / r + 1.5 * q[0] * q[0]),
        ProblemKind::Kepler => Err(Error::UnsupportedKind { kind, op: "hill region" }),
    }
}

/// Open Hill region: strict potential inequality together with the a-priori
/// extent bounds (`|q| < 1`, resp. `|q1| < 3^(-1/3)` and `|q2| < 2 3^(-4/3)`).
///
/// The potential inequality is oriented so that the set is the projection of
/// the bounded component of `{H <= -c}`.
pub fn hill_region_contains(kind: ProblemKind, c: EnergyParam, q: [f64; 2]) -> Result<bool> {
    let c = EnergyParam::checked(kind, c.0)?.0;
    let u = effective_potential(kind, q)?;
    Ok(match kind {
        ProblemKind::RotatingKepler => u > c && q[0].hypot(q[1]) < 1.0,
        ProblemKind::HillLunar => {
            u > c && q[0].abs() < 3f64.powf(-1.0 / 3.0) && q[1].abs() < 2.0 * 3f64.powf(-4.0 / 3.0)
        }
        ProblemKind::Kepler => unreachable!(),
    })
}

/// Closed bounded Hill region `{U >= c} ∩ {|q| <= extent}`, with a relative
/// slack of `1e-12` so boundary points evaluate as members.
pub fn hill_region_contains_closed(
    kind: ProblemKind,
    c: EnergyParam,
    q: [f64; 2],
) -> Result<bool> {
    let c = EnergyParam::checked(kind, c.0)?.0;
    let u = effective_potential(kind, q)?;
    let extent = hill_region_extent(kind, c)?;
    Ok(u >= c * (1.0 - 1e-12) && q[0].hypot(q[1]) <= extent * (1.0 + 1e-12))
}

/// Largest distance from the origin reached by the bounded Hill region.
///
/// This is the smaller positive root of `(3/2) x^3 - c x + 1` for Hill's
/// lunar problem (attained on the `q1` axis) and of `x^3 - 2 c x + 2` for the
/// rotating Kepler problem. At the critical value the two positive roots
/// merge and the double root is returned.
pub fn hill_region_extent(kind: ProblemKind, c: f64) -> Result<f64> {
    let critical = critical_value(kind)?;
    type Poly = fn(f64, f64) -> f64;
    let (p, q, f, df): (f64, f64, Poly, Poly) = match kind {
        ProblemKind::HillLunar => (
            -2.0 * c / 3.0,
            2.0 / 3.0,
            |x, c| 1.5 * x * x * x - c * x + 1.0,
            |x, c| 4.5 * x * x - c,
        ),
        ProblemKind::RotatingKepler => (
            -2.0 * c,
            2.0,
            |x, c| x * x * x - 2.0 * c * x + 2.0,
            |x, c| 3.0 * x * x - 2.0 * c,
        ),
        ProblemKind::Kepler => unreachable!("rejected by critical_value"),
    };
    let roots = depressed_real_roots(p, q).ok_or(Error::BelowCritical { c, critical })?;
    let x = roots[1];
    if !(x > 0.0) {
        return Err(Error::NoRoot(format!("no positive Hill-region extent at c = {c}")));
    }
    Ok(newton_polish(x, |x| f(x, c), |x| df(x, c)))
}

pub fn integrals(s: &PhaseState) -> Result<KeplerIntegrals> {
    let r = s.checked_radius()?;
    Ok(KeplerIntegrals {
        energy: 0.5 * (s.p1 * s.p1 + s.p2 * s.p2) - 1.0 / r,
        angular_momentum: s.p1 * s.q2 - s.p2 * s.q1,
    })
}
