//! Moser regularization charts and fiber radial functions.
//!
//! After the switch `(q, p) -> (p, -q)` the momentum plane becomes the base
//! of `T*S^2` (through stereographic projection) and each energy hypersurface
//! meets the fiber over a fixed momentum `p` in a closed curve around the
//! collision. In the original coordinates that curve is the bounded component
//! of `{q : H(q, p) = -c}`, described here by its polar radius `r(theta)`.

use std::f64::consts::TAU;

use serde::{Deserialize, Serialize};

use crate::cubic::bisect;
use crate::error::{Error, Result};
use crate::hamiltonians::{critical_value, hill_region_extent, PhaseState, ProblemKind};

/// Minimum distance above `c = 3/2` accepted by the closed-form rotating
/// Kepler fiber, where the discriminant touches zero.
pub const RKP_DISCRIMINANT_GUARD: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SpherePoint {
    pub x: f64,
    pub y: f64,
    pub z: f64,
}

impl SpherePoint {
    pub fn as_array(&self) -> [f64; 3] {
        [self.x, self.y, self.z]
    }
}

/// A point of `T*S^2`: the covector is stored as an ambient vector
/// orthogonal to the base point.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CotangentSpherePoint {
    pub base: SpherePoint,
    pub eta: [f64; 3],
}

/// A fixed momentum and a polar direction in the position plane.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FiberRay {
    pub p: [f64; 2],
    pub theta: f64,
}

impl FiberRay {
    pub fn new(p: [f64; 2], theta: f64) -> Self {
        Self { p, theta: theta.rem_euclid(TAU) }
    }

    pub fn direction(&self) -> [f64; 2] {
        [self.theta.cos(), self.theta.sin()]
    }
}

/// Stereographic projection from the north pole, `R^2 -> S^2 \ {N}`.
pub fn stereographic(x: [f64; 2]) -> SpherePoint {
    let s = x[0] * x[0] + x[1] * x[1];
    let d = s + 1.0;
    SpherePoint { x: 2.0 * x[0] / d, y: 2.0 * x[1] / d, z: (s - 1.0) / d }
}

pub fn stereographic_inv(q: SpherePoint) -> Result<[f64; 2]> {
    let d = 1.0 - q.z;
    if d <= 1e-15 {
        return Err(Error::InvalidArgument("the north pole has no stereographic preimage".into()));
    }
    Ok([q.x / d, q.y / d])
}

/// Jacobian of [`stereographic`] as three rows of partial derivatives.
fn stereographic_jacobian(x: [f64; 2]) -> [[f64; 2]; 3] {
    let d = x[0] * x[0] + x[1] * x[1] + 1.0;
    let d2 = d * d;
    [
        [2.0 / d - 4.0 * x[0] * x[0] / d2, -4.0 * x[0] * x[1] / d2],
        [-4.0 * x[0] * x[1] / d2, 2.0 / d - 4.0 * x[1] * x[1] / d2],
        [4.0 * x[0] / d2, 4.0 * x[1] / d2],
    ]
}

/// The momentum/position switch `(x, y) -> (y, -x)`.
pub fn switch_map(x: [f64; 2], y: [f64; 2]) -> ([f64; 2], [f64; 2]) {
    (y, [-x[0], -x[1]])
}

/// Cotangent lift of stereographic projection.
///
/// The chart covector `y` becomes the unique tangent vector `eta` with
/// `eta . (Dphi u) = y . u`; conformality of the projection gives
/// `eta = Dphi(x) y (|x|^2 + 1)^2 / 4`.
pub fn cotangent_lift(x: [f64; 2], y: [f64; 2]) -> CotangentSpherePoint {
    let j = stereographic_jacobian(x);
    let s = x[0] * x[0] + x[1] * x[1] + 1.0;
    let scale = s * s / 4.0;
    let eta = [
        scale * (j[0][0] * y[0] + j[0][1] * y[1]),
        scale * (j[1][0] * y[0] + j[1][1] * y[1]),
        scale * (j[2][0] * y[0] + j[2][1] * y[1]),
    ];
    CotangentSpherePoint { base: stereographic(x), eta }
}

/// `|q| (H_KP + c) = (|p|^2 + 2c)|q|/2 - 1`, whose zero set is `H_KP = -c`.
pub fn shifted_kepler(c: f64, s: &PhaseState) -> Result<f64> {
    let r = s.radius();
    if !(r >= crate::hamiltonians::COLLISION_GUARD) {
        return Err(Error::Collision { radius: r });
    }
    Ok(0.5 * (s.p1 * s.p1 + s.p2 * s.p2 + 2.0 * c) * r - 1.0)
}

/// `<p_perp, v>` with `p_perp = (-p2, p1)`.
#[inline]
pub fn perp_dot(p: [f64; 2], v: [f64; 2]) -> f64 {
    -p[1] * v[0] + p[0] * v[1]
}

/// Dual Finsler function of the rotating Kepler level `-c` in the switched
/// chart; equals one exactly on the bounded component of `H_R = -c`.
pub fn finsler_dual_rkp(c: f64, q: [f64; 2], p: [f64; 2]) -> Result<f64> {
    let r = q[0].hypot(q[1]);
    if !(r >= crate::hamiltonians::COLLISION_GUARD) {
        return Err(Error::Collision { radius: r });
    }
    let a = p[0] * p[0] + p[1] * p[1] + 2.0 * c;
    let disc = 1.0 + 16.0 * perp_dot(p, q) / (r * a * a);
    if disc < 0.0 {
        return Err(Error::NegativeDiscriminant { value: disc });
    }
    Ok(0.25 * a * r * (1.0 + disc.sqrt()))
}

/// Polar radius of the fiber curve over `ray.p` in direction `ray.theta`.
///
/// Rotating Kepler: closed form `4 / (A + sqrt(A^2 + 16 <p_perp, u>))` with
/// `A = |p|^2 + 2c`. Hill: smallest positive root of
/// `a r^3 + b r^2 + d r - 1` with `a = sin^2/2 - cos^2`, `b = <p_perp, u>`
/// and `d = |p|^2/2 + c`, located on `(0, 1.05 * extent]`.
pub fn radial_fiber_point(kind: ProblemKind, c: f64, ray: FiberRay) -> Result<f64> {
    let critical = critical_value(kind)?;
    let (sin, cos) = ray.theta.sin_cos();
    let b = perp_dot(ray.p, [cos, sin]);
    let p2 = ray.p[0] * ray.p[0] + ray.p[1] * ray.p[1];
    let fail = |reason: String| Error::FiberSolve { p1: ray.p[0], p2: ray.p[1], theta: ray.theta, reason };
    match kind {
        ProblemKind::RotatingKepler => {
            if c < critical + RKP_DISCRIMINANT_GUARD {
                return Err(Error::BelowCritical { c, critical: critical + RKP_DISCRIMINANT_GUARD });
            }
            let a = p2 + 2.0 * c;
            let disc = a * a + 16.0 * b;
            if disc < 0.0 {
                return Err(fail(format!("negative discriminant {disc:e}")));
            }
            Ok(4.0 / (a + disc.sqrt()))
        }
        ProblemKind::HillLunar => {
            if c < critical * (1.0 - 1e-14) {
                return Err(Error::BelowCritical { c, critical });
            }
            let a = 0.5 * sin * sin - cos * cos;
            let d = 0.5 * p2 + c;
            let upper = 1.05 * hill_region_extent(kind, c)?;
            smallest_positive_cubic_root(a, b, d, upper).map_err(fail)
        }
        ProblemKind::Kepler => Err(Error::UnsupportedKind { kind, op: "radial_fiber_point" }),
    }
}

/// Smallest root in `(0, upper]` of `g(r) = a r^3 + b r^2 + d r - 1`.
///
/// `g(0) = -1`. The stationary points of `g` split `(0, upper]` into pieces on
/// which `g` is monotone, so the first piece whose right end is non-negative
/// brackets the smallest root exactly once.
fn smallest_positive_cubic_root(
    a: f64,
    b: f64,
    d: f64,
    upper: f64,
) -> std::result::Result<f64, String> {
    let g = |r: f64| ((a * r + b) * r + d) * r - 1.0;
    let dg = |r: f64| (3.0 * a * r + 2.0 * b) * r + d;

    let mut breaks = Vec::with_capacity(4);
    // stationary points: 3a r^2 + 2b r + d = 0
    if a.abs() > 1e-300 {
        let disc = b * b - 3.0 * a * d;
        if disc >= 0.0 {
            let sq = disc.sqrt();
            // stable quadratic roots
            let qq = -(b + b.signum() * sq);
            let mut cands = Vec::new();
            if qq != 0.0 {
                cands.push(qq / (3.0 * a));
                cands.push(d / qq);
            } else {
                cands.push(0.0);
            }
            for r in cands {
                if r > 0.0 && r < upper {
                    breaks.push(r);
                }
            }
        }
    } else if b < 0.0 {
        let r = -d / (2.0 * b);
        if r > 0.0 && r < upper {
            breaks.push(r);
        }
    }
    breaks.sort_by(f64::total_cmp);
    breaks.push(upper);

    let mut lo = 0.0;
    let mut best = (f64::NEG_INFINITY, upper);
    for &hi in &breaks {
        let ghi = g(hi);
        if ghi >= 0.0 {
            let root = bisect(g, lo, hi, 1e-13 * hi).ok_or("bracket lost")?;
            return Ok(polish_in_bracket(root, lo, hi, g, dg));
        }
        if ghi > best.0 {
            best = (ghi, hi);
        }
        lo = hi;
    }
    // a tangency exactly at the critical energy leaves g touching zero
    if best.0 > -1e-12 {
        return Ok(best.1);
    }
    Err(format!("no positive root below {upper}"))
}

fn polish_in_bracket(
    mut r: f64,
    lo: f64,
    hi: f64,
    g: impl Fn(f64) -> f64,
    dg: impl Fn(f64) -> f64,
) -> f64 {
    for _ in 0..3 {
        let d = dg(r);
        if d == 0.0 || !d.is_finite() {
            break;
        }
        let next = r - g(r) / d;
        if !(next > lo && next <= hi) {
            break;
        }
        if (next - r).abs() <= 1e-16 * r {
            r = next;
            break;
        }
        r = next;
    }
    r
}
