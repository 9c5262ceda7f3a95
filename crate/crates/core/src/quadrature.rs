//! Globally adaptive Gauss–Kronrod (7/15) quadrature.
//!
//! The interval with the largest error estimate is bisected until the summed
//! estimate meets `max(abs_tol, rel_tol * |value|)`. Endpoints are never
//! evaluated, which lets callers integrate up to a mapped infinity.

// nodes and weights are quoted digit for digit from the published tables
#![allow(clippy::excessive_precision)]

use std::cmp::Ordering;
use std::collections::BinaryHeap;

const XGK: [f64; 8] = [
    0.991455371120812639206854697526329,
    0.949107912342758524526189684047851,
    0.864864423359769072789712788640926,
    0.741531185599394439863864773280788,
    0.586087235467691130294144845693013,
    0.405845151377397166906606412076961,
    0.207784955007898467600689403773245,
    0.0,
];

const WGK: [f64; 8] = [
    0.022935322010529224963732008058970,
    0.063092092629978553290700663189204,
    0.104790010322250183839876322541518,
    0.140653259715525918745189590510238,
    0.169004726639267902826583426598550,
    0.190350578064785409913256402421014,
    0.204432940075298892414161999234649,
    0.209482141084727828012999174891714,
];

const WG: [f64; 4] = [
    0.129484966168869693270611432679082,
    0.279705391489276667901467771423780,
    0.381830050505118944950369775488975,
    0.417959183673469387755102040816327,
];

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadResult {
    pub value: f64,
    pub error: f64,
    pub evals: usize,
    pub converged: bool,
}

#[derive(Debug, Clone, Copy)]
pub struct QuadOptions {
    pub abs_tol: f64,
    pub rel_tol: f64,
    pub max_intervals: usize,
}

impl Default for QuadOptions {
    fn default() -> Self {
        Self { abs_tol: 0.0, rel_tol: 1e-10, max_intervals: 2000 }
    }
}

struct Panel {
    a: f64,
    b: f64,
    value: f64,
    error: f64,
}

impl PartialEq for Panel {
    fn eq(&self, other: &Self) -> bool {
        self.error == other.error
    }
}
impl Eq for Panel {}
impl PartialOrd for Panel {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for Panel {
    fn cmp(&self, other: &Self) -> Ordering {
        self.error.total_cmp(&other.error)
    }
}

fn gk15(f: &mut impl FnMut(f64) -> f64, a: f64, b: f64) -> (f64, f64) {
    let center = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let fc = f(center);
    let mut kronrod = fc * WGK[7];
    let mut gauss = fc * WG[3];
    for j in 0..7 {
        let dx = half * XGK[j];
        let s = f(center - dx) + f(center + dx);
        kronrod += WGK[j] * s;
        if j % 2 == 1 {
            gauss += WG[j / 2] * s;
        }
    }
    (kronrod * half, ((kronrod - gauss) * half).abs())
}

/// Integrates `f` over `(a, b)`.
pub fn integrate(mut f: impl FnMut(f64) -> f64, a: f64, b: f64, opts: QuadOptions) -> QuadResult {
    let (value, error) = gk15(&mut f, a, b);
    let mut heap = BinaryHeap::new();
    heap.push(Panel { a, b, value, error });
    let mut total = value;
    let mut err = error;
    let mut evals = 15;
    while err > opts.abs_tol.max(opts.rel_tol * total.abs()) {
        if heap.len() >= opts.max_intervals {
            return QuadResult { value: total, error: err, evals, converged: false };
        }
        let Some(worst) = heap.pop() else { break };
        let mid = 0.5 * (worst.a + worst.b);
        if mid <= worst.a || mid >= worst.b {
            heap.push(worst);
            return QuadResult { value: total, error: err, evals, converged: false };
        }
        let (v1, e1) = gk15(&mut f, worst.a, mid);
        let (v2, e2) = gk15(&mut f, mid, worst.b);
        evals += 30;
        total += v1 + v2 - worst.value;
        err += e1 + e2 - worst.error;
        heap.push(Panel { a: worst.a, b: mid, value: v1, error: e1 });
        heap.push(Panel { a: mid, b: worst.b, value: v2, error: e2 });
    }
    // re-sum to shed the drift of the running updates
    let total: f64 = heap.iter().map(|p| p.value).sum();
    let err: f64 = heap.iter().map(|p| p.error).sum();
    QuadResult { value: total, error: err, evals, converged: true }
}

/// Iterated integral `int_a^b int_c^d f(x, y) dy dx` with the inner integral
/// solved adaptively at every outer node.
pub fn integrate_2d(
    f: impl Fn(f64, f64) -> f64,
    (a, b): (f64, f64),
    (c, d): (f64, f64),
    outer: QuadOptions,
    inner: QuadOptions,
) -> QuadResult {
    let mut inner_err = 0.0;
    let mut inner_evals = 0;
    let mut inner_ok = true;
    let res = integrate(
        |x| {
            let r = integrate(|y| f(x, y), c, d, inner);
            inner_err += r.error.abs();
            inner_evals += r.evals;
            inner_ok &= r.converged;
            r.value
        },
        a,
        b,
        outer,
    );
    let width = (b - a).abs();
    QuadResult {
        value: res.value,
        // inner errors enter through the outer weights, bounded by width * mean
        error: res.error + width * inner_err / (res.evals.max(1) as f64),
        evals: inner_evals,
        converged: res.converged && inner_ok,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn polynomial_exact() {
        let r = integrate(|x| x.powi(7) - 3.0 * x * x, 0.0, 2.0, QuadOptions::default());
        assert!((r.value - (32.0 - 8.0)).abs() < 1e-12);
        assert!(r.converged);
    }

    #[test]
    fn endpoint_singularity() {
        let r = integrate(|x| 1.0 / x.sqrt(), 0.0, 1.0, QuadOptions { rel_tol: 1e-10, ..Default::default() });
        assert!((r.value - 2.0).abs() < 1e-9);
    }

    #[test]
    fn mapped_infinite_range() {
        // int_0^inf dx / (1 + x^2) = pi/2 with x = u / (1 - u)
        let r = integrate(
            |u| {
                let x = u / (1.0 - u);
                1.0 / (1.0 + x * x) / ((1.0 - u) * (1.0 - u))
            },
            0.0,
            1.0,
            QuadOptions::default(),
        );
        assert!((r.value - PI / 2.0).abs() < 1e-10);
    }

    #[test]
    fn iterated_gaussian() {
        let r = integrate_2d(
            |x, y| (-(x * x + y * y)).exp(),
            (-6.0, 6.0),
            (-6.0, 6.0),
            QuadOptions { rel_tol: 1e-11, ..Default::default() },
            QuadOptions { rel_tol: 1e-12, ..Default::default() },
        );
        assert!((r.value - PI).abs() < 1e-9);
    }

    #[test]
    fn budget_exhaustion_is_reported() {
        let r = integrate(|x| (1.0 / x).sin(), 0.0, 1.0, QuadOptions { rel_tol: 1e-14, abs_tol: 0.0, max_intervals: 10 });
        assert!(!r.converged);
    }
}
