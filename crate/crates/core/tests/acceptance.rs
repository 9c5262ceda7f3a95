//! Acceptance run: one PASS/FAIL line per criterion, exit status 1 if any
//! gating criterion fails. Criterion 10 is reported but never gates.
//!
//! Reference values are either published constants or computed here by
//! independent means (bisection roots, slicing integrals), never by calling
//! the routine under test twice.

use std::f64::consts::{PI, TAU};
use std::process::ExitCode;
use std::time::Instant;

use celestial_core::capacity::{global_cap, hill_lower_bound, hill_systole_upper, hill_upper_bound, spectral_gaps};
use celestial_core::hill_orbits::{conjecture_check, find_symmetric_orbit, rkp_circular};
use celestial_core::inclusions::{inner_rkp_level, threshold_c_h, verify_fiber_inclusion, tangency_identity_residual, GridOptions};
use celestial_core::rkp_spectrum::{
    circular_energy, circular_roots, direct_action, retrograde_action, threshold_c_r, torus_action, torus_action_unchecked, torus_orbit,
};
use celestial_core::systolic::{contact_volume_closed_form, contact_volume_mc, contact_volume_quadrature, systolic_ratio};
use celestial_core::{hekuba, hill_critical, DomainSpec, Family, OrbitClassLabel, ProblemKind, ShootingConfig};

type Criterion = (&'static str, fn() -> Outcome, bool);

struct Outcome {
    pass: bool,
    detail: String,
}

fn check(pass: bool, detail: impl Into<String>) -> Outcome {
    Outcome { pass, detail: detail.into() }
}

/// Root of `f(x) = c` on `[lo, hi]`, where `f` is monotone.
fn bisect_energy(c: f64, lo: f64, hi: f64) -> f64 {
    let g = |x: f64| circular_energy(x) - c;
    let (mut a, mut b) = (lo, hi);
    let sa = g(a) > 0.0;
    for _ in 0..200 {
        let m = 0.5 * (a + b);
        if (g(m) > 0.0) == sa {
            a = m;
        } else {
            b = m;
        }
    }
    0.5 * (a + b)
}

/// Volume by slicing in `q`: over `|q| = s` the momentum fiber is a disk of
/// area `2 pi (1/s + s^2/2 - c)`, and the symplectic volume carries a factor 2.
fn slicing_volume(c: f64) -> f64 {
    // outer radius of the Hill region: 1/s + s^2/2 = c on (0, 1)
    let g = |s: f64| 1.0 / s + 0.5 * s * s - c;
    let (mut a, mut b) = (1e-12, 1.0);
    for _ in 0..200 {
        let m = 0.5 * (a + b);
        if g(m) > 0.0 {
            a = m;
        } else {
            b = m;
        }
    }
    let rho = 0.5 * (a + b);
    // antiderivative of 2 * 2 pi s * 2 pi (1/s + s^2/2 - c)
    8.0 * PI * PI * (rho + rho.powi(4) / 8.0 - 0.5 * c * rho * rho)
}

fn criterion_1() -> Outcome {
    let r_cap = global_cap(Family::Retrograde) / TAU;
    let d_cap = global_cap(Family::Direct) / TAU;
    let c0 = hill_critical();
    let r_lo = hill_lower_bound(c0, OrbitClassLabel::retrograde(1)).unwrap() / TAU;
    let d_lo = hill_lower_bound(c0, OrbitClassLabel::direct(1)).unwrap() / TAU;
    // the first-iterate upper bound never exceeds the cap
    let capped = [Family::Retrograde, Family::Direct]
        .iter()
        .all(|&f| hill_upper_bound(c0, OrbitClassLabel { family: f, n: 1 }).unwrap() <= global_cap(f));
    let gaps = spectral_gaps(c0).unwrap();
    let gap_hi = (gaps[0].hi / TAU - 0.490534).abs() < 5e-6 && (gaps[1].hi / TAU - 0.793701).abs() < 5e-6;
    let pass = (r_cap - 0.490534).abs() < 5e-6
        && (d_cap - 0.793701).abs() < 5e-6
        && (r_lo - 0.43029).abs() < 5e-5
        && (d_lo - 0.53713).abs() < 5e-5
        && capped
        && gap_hi;
    check(pass, format!("caps/2pi = {r_cap:.7}, {d_cap:.7}; lower/2pi at c_H^0 = {r_lo:.7}, {d_lo:.7}"))
}

fn criterion_2() -> Outcome {
    let r = circular_roots(1.5).unwrap();
    let t = threshold_c_r(1);
    let e = (r.l_r - 0.5).abs().max((r.l_d + 1.0).abs()).max((t - 2f64.powf(2.0 / 3.0)).abs());
    check(e < 1e-12 && (hekuba() - t).abs() < 1e-12, format!("max deviation {e:.1e}"))
}

fn criterion_3() -> Outcome {
    let mut worst_f: f64 = 0.0;
    let mut worst_b: f64 = 0.0;
    for i in 1..=200 {
        let c = 1.5 + 98.5 * i as f64 / 200.0;
        let r = circular_roots(c).unwrap();
        worst_f = worst_f.max((circular_energy(r.l_r) - c).abs()).max((circular_energy(r.l_d) - c).abs());
        let br = bisect_energy(c, 1e-9, 0.5);
        let bd = bisect_energy(c, -1.0, -1e-9);
        worst_b = worst_b.max((r.l_r - br).abs()).max((r.l_d - bd).abs());
    }
    check(worst_f < 1e-12 && worst_b < 1e-10, format!("|f(L)-c| <= {worst_f:.1e}, closed vs bisection <= {worst_b:.1e}"))
}

fn criterion_4() -> Outcome {
    let mut worst: f64 = 0.0;
    let mut ok = true;
    for (k, l) in [(2u32, 1u32), (3, 1), (3, 2), (5, 3)] {
        let t = torus_orbit(k, l).unwrap();
        // death into the direct family at c_plus
        let a = torus_action(k, l, t.c_plus).unwrap();
        let b = (k - l) as f64 * direct_action(t.c_plus, 1).unwrap();
        worst = worst.max((a - b).abs());
        // birth from the retrograde family at c_minus; below 3/2 the identity
        // holds for the positive root of f, continued past the critical energy
        let (a, b) = if t.c_minus > 1.5 {
            (torus_action(k, l, t.c_minus).unwrap(), (k + l) as f64 * retrograde_action(t.c_minus, 1).unwrap())
        } else {
            let x = bisect_energy(t.c_minus, 1e-9, 10.0);
            (torus_action_unchecked(k, l, t.c_minus), (k + l) as f64 * TAU * x)
        };
        worst = worst.max((a - b).abs());
        ok &= torus_action(k, l, t.c_plus + 1e-6).is_err();
    }
    check(ok && worst < 1e-9, format!("max endpoint mismatch {worst:.1e} over (2,1),(3,1),(3,2),(5,3)"))
}

fn criterion_5() -> Outcome {
    let worst = (2..=50).map(|p| tangency_identity_residual(p).unwrap()).fold(0.0, f64::max);
    check(worst < 1e-12, format!("max residual {worst:.1e} for P = 2..50"))
}

fn criterion_6() -> Outcome {
    let opts = GridOptions { n_p: 64, n_p_angles: 16, n_theta: 256, p_max: 12.0, strict: false };
    let mut pairs = vec![(DomainSpec::hill(hill_critical()).unwrap(), DomainSpec::rkp(hekuba()).unwrap())];
    for p in 2..=4 {
        pairs.push((DomainSpec::hill(threshold_c_h(p).unwrap()).unwrap(), DomainSpec::rkp(threshold_c_r(p)).unwrap()));
    }
    for c in [hill_critical(), 2.2, 2.5, 3.0] {
        pairs.push((DomainSpec::rkp(inner_rkp_level(c).unwrap()).unwrap(), DomainSpec::hill(c).unwrap()));
    }
    let mut failures = Vec::new();
    let mut worst = f64::INFINITY;
    for (inner, outer) in &pairs {
        let r = verify_fiber_inclusion(*inner, *outer, &opts).unwrap();
        worst = worst.min(r.worst_margin);
        if !r.holds {
            failures.push(format!("{:?}:{} in {:?}:{} (margin {:.2e})", inner.kind, inner.c, outer.kind, outer.c, r.worst_margin));
        }
    }
    let detail = if failures.is_empty() {
        format!("{} inclusions hold, smallest margin {worst:.2e}", pairs.len())
    } else {
        failures.join("; ")
    };
    check(failures.is_empty(), detail)
}

fn criterion_7() -> Outcome {
    let mut worst: f64 = 0.0;
    let mut drift: f64 = 0.0;
    for c in [1.6, 2.0, 3.0] {
        for family in [Family::Retrograde, Family::Direct] {
            let l = if family == Family::Retrograde { bisect_energy(c, 1e-9, 0.5) } else { bisect_energy(c, -1.0, -1e-9) };
            let cfg = ShootingConfig::seeded(ProblemKind::RotatingKepler, family, c).unwrap();
            let o = match find_symmetric_orbit(ProblemKind::RotatingKepler, &cfg) {
                Ok(o) => o,
                Err(e) => return check(false, format!("{family} at c = {c}: {e}")),
            };
            let (_, period) = rkp_circular(family, l * l);
            worst = worst.max((o.initial.q1 - l * l).abs()).max((o.action - TAU * l.abs()).abs()).max((o.period - period).abs());
            drift = drift.max(o.energy_drift);
        }
    }
    check(worst < 1e-8 && drift < 1e-10, format!("radius/action/period error {worst:.1e}, energy drift {drift:.1e}"))
}

fn criterion_8() -> Outcome {
    let mut quad_err: f64 = 0.0;
    let mut oracle_err: f64 = 0.0;
    let mut mc_sigmas: f64 = 0.0;
    for c in [1.6, 2.0, 5.0, 20.0] {
        let exact = slicing_volume(c);
        let closed = contact_volume_closed_form(c).unwrap().value;
        oracle_err = oracle_err.max((closed - exact).abs() / exact);
        let q = contact_volume_quadrature(c, 1e-8).unwrap().value;
        quad_err = quad_err.max((q - exact).abs() / exact);
        let mc = contact_volume_mc(c, 100_000, 42).unwrap();
        mc_sigmas = mc_sigmas.max((mc.value - exact).abs() / mc.error_estimate);
    }
    let s2 = systolic_ratio(2.0).unwrap();
    let s_low = systolic_ratio(1.5001).unwrap();
    let s_high = systolic_ratio(200.0).unwrap();
    let pass = oracle_err < 1e-12
        && quad_err < 1e-6
        && mc_sigmas < 3.0
        && (s2 - 2.5400).abs() < 1e-3
        && (s_low - 3.0).abs() < 0.02
        && (s_high - 2.0).abs() < 0.01;
    check(
        pass,
        format!(
            "quadrature rel err {quad_err:.1e}, Monte Carlo within {mc_sigmas:.2} SE, ratio(2) = {s2:.5}, ratio(1.5001) = {s_low:.4}, ratio(200) = {s_high:.4}"
        ),
    )
}

fn criterion_9() -> Outcome {
    let c0 = hill_critical() + 1e-6;
    let n = 20_000;
    let mut max: f64 = 0.0;
    for i in 0..=n {
        let c = c0 + (10.0 - c0) * i as f64 / n as f64;
        max = max.max(hill_systole_upper(c).unwrap());
    }
    check(max < PI, format!("max over {} energies = {max:.7} < pi", n + 1))
}

fn criterion_10() -> Outcome {
    let mut parts = Vec::new();
    let mut all = true;
    for family in [Family::Retrograde, Family::Direct] {
        match conjecture_check(2.2, family) {
            Ok(r) => {
                all &= r.inside;
                parts.push(format!(
                    "{family} action/2pi = {:.6} in [{:.6}, {:.6}]: {}",
                    r.action / TAU,
                    r.lo / TAU,
                    r.hi / TAU,
                    if r.inside { "inside" } else { "OUTSIDE" }
                ));
            }
            Err(e) => {
                all = false;
                parts.push(format!("{family}: {e}"));
            }
        }
    }
    check(all, parts.join("; "))
}

fn main() -> ExitCode {
    let criteria: [Criterion; 10] = [
        ("capacity constants", criterion_1, true),
        ("exact root identities", criterion_2, true),
        ("root-pair grid", criterion_3, true),
        ("torus degeneration identities", criterion_4, true),
        ("tangency identity", criterion_5, true),
        ("inclusion battery", criterion_6, true),
        ("shooting oracle", criterion_7, true),
        ("volume triple agreement", criterion_8, true),
        ("Hill systole below pi", criterion_9, true),
        ("conjecture report (non-gating)", criterion_10, false),
    ];
    let mut failed = 0;
    for (i, (name, run, gating)) in criteria.iter().enumerate() {
        let t = Instant::now();
        let o = run();
        let status = match (o.pass, gating) {
            (true, _) => "PASS",
            (false, true) => "FAIL",
            (false, false) => "FLAG",
        };
        if !o.pass && *gating {
            failed += 1;
        }
        println!("criterion {:>2} {status} {name} [{:.2}s]: {}", i + 1, t.elapsed().as_secs_f64(), o.detail);
    }
    println!("acceptance: {} of 9 gating criteria passed", 9 - failed);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
