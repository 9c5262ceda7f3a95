//! Symmetric periodic orbits by shooting on the section `q2 = 0`.
//!
//! Both equations of motion are invariant under the reversal
//! `(q1, q2, p1, p2, t) -> (q1, -q2, -p1, p2, -t)`. An orbit that leaves the
//! section perpendicularly (`p1 = 0`) and returns to it perpendicularly is
//! therefore closed after twice the return time. The shooting unknown is the
//! starting abscissa `q1`; `p2` follows from the energy.

use std::f64::consts::TAU;

use serde::{Deserialize, Serialize};

use crate::capacity::{hill_lower_bound, hill_upper_bound, OrbitClassLabel};
use crate::error::{Error, Result};
use crate::hamiltonians::{critical_value, eval_hamiltonian, hill_region_extent, vector_field, PhaseState, ProblemKind};
use crate::integrator::{self, Event, Options, Solution, State};
use crate::quadrature::{integrate as quad, QuadOptions};
use crate::rkp_spectrum::{circular_roots, Family};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ShootingConfig {
    pub family: Family,
    pub c: f64,
    pub q1_bracket: (f64, f64),
    pub integrator_tol: f64,
    pub max_newton_iters: usize,
}

impl ShootingConfig {
    /// Bracket seeded at the rotating Kepler circular radius `L(c)^2` and
    /// widened by 30% each way, clipped to the Hill region.
    pub fn seeded(kind: ProblemKind, family: Family, c: f64) -> Result<Self> {
        let critical = critical_value(kind)?;
        if !(c > critical) {
            return Err(Error::BelowCritical { c, critical });
        }
        let l = circular_roots(c)?.get(family);
        let r = l * l;
        let extent = hill_region_extent(kind, c)?;
        Ok(Self {
            family,
            c,
            q1_bracket: (0.7 * r, (1.3 * r).min(0.999 * extent)),
            integrator_tol: 1e-12,
            max_newton_iters: 60,
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PeriodicOrbit {
    pub kind: ProblemKind,
    pub family: Family,
    pub c: f64,
    pub initial: PhaseState,
    pub period: f64,
    /// `oint p . dq`.
    pub action: f64,
    /// `oint -q . dp`; equal to `action` on a closed loop.
    pub action_dual: f64,
    pub energy_drift: f64,
    /// `|p1|` at the half-period crossing.
    pub crossing_residual: f64,
    pub samples: Vec<(f64, PhaseState)>,
}

#[derive(Debug, Clone)]
pub struct Trajectory {
    pub solution: Solution,
    pub energy_drift: f64,
}

impl Trajectory {
    pub fn state(&self, t: f64) -> PhaseState {
        PhaseState::from_array(self.solution.eval(t))
    }
}

fn rhs(kind: ProblemKind) -> impl Fn(&State) -> Result<State> {
    move |y: &State| vector_field(kind, &PhaseState::from_array(*y))
}

fn drift(kind: ProblemKind, sol: &Solution, h0: f64) -> Result<f64> {
    let mut worst: f64 = 0.0;
    for (_, y) in sol.nodes() {
        worst = worst.max((eval_hamiltonian(kind, &PhaseState::from_array(y))? - h0).abs());
    }
    Ok(worst)
}

/// Integrates the flow of `kind` from `s0` for time `t_end` at tolerance `tol`.
pub fn integrate(kind: ProblemKind, s0: PhaseState, t_end: f64, tol: f64) -> Result<Trajectory> {
    let h0 = eval_hamiltonian(kind, &s0)?;
    let solution = integrator::solve(rhs(kind), s0.to_array(), t_end, &Options::with_tol(tol), None)?;
    let energy_drift = drift(kind, &solution, h0)?;
    Ok(Trajectory { solution, energy_drift })
}

/// `(q1, 0, 0, p2)` on the level `H = -c`; retrograde takes the smaller root.
pub fn initial_state(kind: ProblemKind, family: Family, c: f64, q1: f64) -> Result<PhaseState> {
    if !(q1 > 0.0) {
        return Err(Error::InvalidArgument(format!("shooting abscissa must be positive, got {q1}")));
    }
    let tidal = match kind {
        ProblemKind::HillLunar => q1 * q1,
        ProblemKind::RotatingKepler => 0.0,
        ProblemKind::Kepler => return Err(Error::UnsupportedKind { kind, op: "initial_state" }),
    };
    let disc = q1 * q1 + 2.0 * (1.0 / q1 + tidal - c);
    if disc < 0.0 {
        return Err(Error::NoRoot(format!("q1 = {q1} lies outside the Hill region at c = {c}")));
    }
    let p2 = match family {
        Family::Retrograde => q1 - disc.sqrt(),
        Family::Direct => q1 + disc.sqrt(),
    };
    Ok(PhaseState::new(q1, 0.0, 0.0, p2))
}

/// Flow up to the first return to `q2 = 0` in the family's crossing direction.
fn half_orbit(kind: ProblemKind, family: Family, c: f64, q1: f64, tol: f64) -> Result<Solution> {
    let s0 = initial_state(kind, family, c, q1)?;
    let direction = match family {
        Family::Retrograde => 1,
        Family::Direct => -1,
    };
    let ev = Event { component: 1, direction, after: 0.0 };
    let sol = integrator::solve(rhs(kind), s0.to_array(), 50.0, &Options::with_tol(tol), Some(ev))?;
    if sol.event_time.is_none() {
        return Err(Error::NoRoot(format!("no return to the section from q1 = {q1}")));
    }
    Ok(sol)
}

fn residual(kind: ProblemKind, family: Family, c: f64, q1: f64, tol: f64) -> Result<f64> {
    Ok(half_orbit(kind, family, c, q1, tol)?.y_end[2])
}

/// Perpendicular-crossing shooting in the configured bracket.
pub fn find_symmetric_orbit(kind: ProblemKind, cfg: &ShootingConfig) -> Result<PeriodicOrbit> {
    if !(1e-14..=1e-6).contains(&cfg.integrator_tol) {
        return Err(Error::InvalidArgument(format!("integrator tolerance {} outside [1e-14, 1e-6]", cfg.integrator_tol)));
    }
    let (lo, hi) = cfg.q1_bracket;
    if !(0.0 < lo && lo < hi) {
        return Err(Error::InvalidArgument(format!("bad bracket ({lo}, {hi})")));
    }
    let res = |q1: f64| residual(kind, cfg.family, cfg.c, q1, cfg.integrator_tol);

    // scan for sign changes and keep the one closest to the bracket center
    const SCAN: usize = 12;
    let center = 0.5 * (lo + hi);
    let grid: Vec<(f64, Option<f64>)> = (0..=SCAN)
        .map(|i| {
            let q = lo + (hi - lo) * i as f64 / SCAN as f64;
            (q, res(q).ok())
        })
        .collect();
    let mut best: Option<((f64, f64), (f64, f64))> = None;
    for w in grid.windows(2) {
        if let ((qa, Some(ra)), (qb, Some(rb))) = (w[0], w[1]) {
            if ra == 0.0 || ra.signum() != rb.signum() {
                let d = (0.5 * (qa + qb) - center).abs();
                if best.is_none_or(|((a, b), _)| d < (0.5 * (a + b) - center).abs()) {
                    best = Some(((qa, qb), (ra, rb)));
                }
            }
        }
    }
    let ((mut a, mut b), (mut fa, mut fb)) = best.ok_or(Error::NoBracket { lo, hi })?;

    // Illinois-modified regula falsi, with plain bisection while the bracket is wide
    let mut q = a;
    let mut fq = fa;
    let mut side = 0i8;
    let mut iters = 0;
    while iters < cfg.max_newton_iters {
        iters += 1;
        q = if (b - a) > 1e-3 * b {
            0.5 * (a + b)
        } else {
            (a * fb - b * fa) / (fb - fa)
        };
        fq = res(q)?;
        if fq.abs() < 1e-13 || (b - a) < 4.0 * f64::EPSILON * b {
            break;
        }
        if fq.signum() == fa.signum() {
            a = q;
            fa = fq;
            if side == -1 {
                fb *= 0.5;
            }
            side = -1;
        } else {
            b = q;
            fb = fq;
            if side == 1 {
                fa *= 0.5;
            }
            side = 1;
        }
    }
    if fq.abs() > 1e-10 {
        return Err(Error::NoConvergence { iters, residual: fq.abs() });
    }
    assemble(kind, cfg.family, cfg.c, q, cfg.integrator_tol)
}

/// Builds the full orbit from the converged half orbit by reflection.
fn assemble(kind: ProblemKind, family: Family, c: f64, q1: f64, tol: f64) -> Result<PeriodicOrbit> {
    let sol = half_orbit(kind, family, c, q1, tol)?;
    let initial = PhaseState::from_array(sol.nodes()[0].1);
    let half = sol.t_end;
    let h0 = eval_hamiltonian(kind, &initial)?;
    let energy_drift = drift(kind, &sol, h0)?;

    let opts = QuadOptions { rel_tol: 1e-13, abs_tol: 1e-15, max_intervals: 4000 };
    let mut fail = None;
    let mut one_forms = |dual: bool| {
        let r = quad(
            |t| {
                let s = PhaseState::from_array(sol.eval(t));
                match vector_field(kind, &s) {
                    Ok(v) if dual => -(s.q1 * v[2] + s.q2 * v[3]),
                    Ok(v) => s.p1 * v[0] + s.p2 * v[1],
                    Err(e) => {
                        fail = Some(e);
                        0.0
                    }
                }
            },
            0.0,
            half,
            opts,
        );
        2.0 * r.value
    };
    let action = one_forms(false);
    let action_dual = one_forms(true);
    if let Some(e) = fail {
        return Err(e);
    }

    let nodes = sol.nodes();
    let mut samples: Vec<(f64, PhaseState)> = nodes.iter().map(|&(t, y)| (t, PhaseState::from_array(y))).collect();
    for &(t, y) in nodes.iter().rev().skip(1) {
        samples.push((2.0 * half - t, PhaseState::new(y[0], -y[1], -y[2], y[3])));
    }
    Ok(PeriodicOrbit {
        kind,
        family,
        c,
        initial,
        period: 2.0 * half,
        action,
        action_dual,
        energy_drift,
        crossing_residual: sol.y_end[2].abs(),
        samples,
    })
}

/// `oint p . dq` over one period, from a fresh full-period integration;
/// cross-checked against `oint -q . dp`.
pub fn orbit_action(orbit: &PeriodicOrbit, tol: f64) -> Result<f64> {
    let traj = integrate(orbit.kind, orbit.initial, orbit.period, tol)?;
    let end = traj.solution.y_end;
    let start = orbit.initial.to_array();
    let gap = (0..4).map(|i| (end[i] - start[i]).abs()).fold(0.0, f64::max);
    if gap > 1e-9 {
        return Err(Error::OpenLoop { gap });
    }
    let opts = QuadOptions { rel_tol: 1e-13, abs_tol: 1e-15, max_intervals: 8000 };
    let form = |dual: bool| {
        quad(
            |t| {
                let s = traj.state(t);
                let v = vector_field(orbit.kind, &s).unwrap_or([f64::NAN; 4]);
                if dual {
                    -(s.q1 * v[2] + s.q2 * v[3])
                } else {
                    s.p1 * v[0] + s.p2 * v[1]
                }
            },
            0.0,
            orbit.period,
            opts,
        )
        .value
    };
    let a = form(false);
    let b = form(true);
    if !a.is_finite() || (a - b).abs() > 1e-9 * a.abs().max(1.0) {
        return Err(Error::OpenLoop { gap: (a - b).abs() });
    }
    Ok(a)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConjectureReport {
    pub c: f64,
    pub family: Family,
    pub action: f64,
    pub lo: f64,
    pub hi: f64,
    pub inside: bool,
    pub orbit: PeriodicOrbit,
}

/// Locates the Hill orbit of `family` at `c` and compares its action with
/// the first-iterate capacity interval. A diagnostic, never a hard check.
pub fn conjecture_check(c: f64, family: Family) -> Result<ConjectureReport> {
    let cfg = ShootingConfig::seeded(ProblemKind::HillLunar, family, c)?;
    let orbit = find_symmetric_orbit(ProblemKind::HillLunar, &cfg)?;
    let label = OrbitClassLabel { family, n: 1 };
    let lo = hill_lower_bound(c, label)?;
    let hi = hill_upper_bound(c, label)?;
    Ok(ConjectureReport { c, family, action: orbit.action, lo, hi, inside: lo <= orbit.action && orbit.action <= hi, orbit })
}

/// Analytic circular orbit of the rotating Kepler problem at radius `r`:
/// `(state at t = 0, period)`.
pub fn rkp_circular(family: Family, r: f64) -> (PhaseState, f64) {
    let v = r.powf(-0.5);
    let w = r.powf(-1.5);
    match family {
        Family::Retrograde => (PhaseState::new(r, 0.0, 0.0, -v), TAU / (w + 1.0)),
        Family::Direct => (PhaseState::new(r, 0.0, 0.0, v), TAU / (w - 1.0)),
    }
}
