//! Explicit Runge–Kutta 8(5,3) after Dormand and Prince (Hairer's DOP853)
//! with seventh-order dense output and event location.
//!
//! Systems are autonomous with a four-dimensional state. Step control
//! follows the reference implementation with `beta = 0`.

// coefficients are quoted digit for digit from the published tables
#![allow(clippy::excessive_precision)]

use crate::error::{Error, Result};

pub type State = [f64; 4];

#[derive(Debug, Clone, Copy)]
pub struct Options {
    pub rtol: f64,
    pub atol: f64,
    pub max_steps: usize,
    pub h_max: f64,
    /// Integration aborts once `|(y[0], y[1])|` drops below this radius.
    pub collision_radius: f64,
}

impl Options {
    pub fn with_tol(tol: f64) -> Self {
        Self { rtol: tol, atol: tol, ..Self::default() }
    }
}

impl Default for Options {
    fn default() -> Self {
        Self { rtol: 1e-12, atol: 1e-12, max_steps: 1_000_000, h_max: f64::INFINITY, collision_radius: 1e-6 }
    }
}

/// Stop condition: the first zero of `y[component]` crossed in `direction`
/// (`+1` increasing, `-1` decreasing, `0` either) after time `after`.
#[derive(Debug, Clone, Copy)]
pub struct Event {
    pub component: usize,
    pub direction: i8,
    pub after: f64,
}

/// Dense output of one accepted step.
#[derive(Debug, Clone)]
pub struct Segment {
    pub t0: f64,
    pub h: f64,
    pub y0: State,
    cont: [State; 8],
}

impl Segment {
    pub fn t1(&self) -> f64 {
        self.t0 + self.h
    }

    pub fn eval(&self, t: f64) -> State {
        let s = (t - self.t0) / self.h;
        let s1 = 1.0 - s;
        let c = &self.cont;
        let mut out = [0.0; 4];
        for i in 0..4 {
            let conpar = c[4][i] + s * (c[5][i] + s1 * (c[6][i] + s * c[7][i]));
            out[i] = c[0][i] + s * (c[1][i] + s1 * (c[2][i] + s * (c[3][i] + s1 * conpar)));
        }
        out
    }
}

#[derive(Debug, Clone)]
pub struct Solution {
    pub segments: Vec<Segment>,
    pub t_end: f64,
    pub y_end: State,
    pub accepted: usize,
    pub rejected: usize,
    pub evals: usize,
    /// Set when an [`Event`] stopped the integration.
    pub event_time: Option<f64>,
}

impl Solution {
    /// Dense-output evaluation anywhere in `[0, t_end]`.
    pub fn eval(&self, t: f64) -> State {
        let idx = self.segments.partition_point(|s| s.t1() < t).min(self.segments.len() - 1);
        let seg = &self.segments[idx];
        if t >= self.t_end {
            return self.y_end;
        }
        seg.eval(t)
    }

    /// Step endpoints, including the initial point.
    pub fn nodes(&self) -> Vec<(f64, State)> {
        let mut out = Vec::with_capacity(self.segments.len() + 1);
        for s in &self.segments {
            out.push((s.t0, s.y0));
        }
        out.push((self.t_end, self.y_end));
        out
    }
}

struct Stages {
    k: [State; 16],
}

fn axpy(y: &State, h: f64, terms: &[(f64, &State)]) -> State {
    let mut out = *y;
    for i in 0..4 {
        let mut acc = 0.0;
        for (a, k) in terms {
            acc += a * k[i];
        }
        out[i] += h * acc;
    }
    out
}

fn lin(terms: &[(f64, &State)]) -> State {
    let mut out = [0.0; 4];
    for i in 0..4 {
        for (a, k) in terms {
            out[i] += a * k[i];
        }
    }
    out
}

/// The twelve stages of one step. `k[0]` must hold `f(y)`; returns the
/// eighth-order solution and fills `k[1..12]`.
fn twelve_stages<F>(f: &F, y: &State, h: f64, st: &mut Stages) -> Result<State>
where
    F: Fn(&State) -> Result<State>,
{
    let k = &mut st.k;
    k[1] = f(&axpy(y, h, &[(A21, &k[0])]))?;
    k[2] = f(&axpy(y, h, &[(A31, &k[0]), (A32, &k[1])]))?;
    k[3] = f(&axpy(y, h, &[(A41, &k[0]), (A43, &k[2])]))?;
    k[4] = f(&axpy(y, h, &[(A51, &k[0]), (A53, &k[2]), (A54, &k[3])]))?;
    k[5] = f(&axpy(y, h, &[(A61, &k[0]), (A64, &k[3]), (A65, &k[4])]))?;
    k[6] = f(&axpy(y, h, &[(A71, &k[0]), (A74, &k[3]), (A75, &k[4]), (A76, &k[5])]))?;
    k[7] = f(&axpy(y, h, &[(A81, &k[0]), (A84, &k[3]), (A85, &k[4]), (A86, &k[5]), (A87, &k[6])]))?;
    k[8] = f(&axpy(y, h, &[(A91, &k[0]), (A94, &k[3]), (A95, &k[4]), (A96, &k[5]), (A97, &k[6]), (A98, &k[7])]))?;
    k[9] = f(&axpy(
        y,
        h,
        &[(A101, &k[0]), (A104, &k[3]), (A105, &k[4]), (A106, &k[5]), (A107, &k[6]), (A108, &k[7]), (A109, &k[8])],
    ))?;
    k[10] = f(&axpy(
        y,
        h,
        &[
            (A111, &k[0]),
            (A114, &k[3]),
            (A115, &k[4]),
            (A116, &k[5]),
            (A117, &k[6]),
            (A118, &k[7]),
            (A119, &k[8]),
            (A1110, &k[9]),
        ],
    ))?;
    k[11] = f(&axpy(
        y,
        h,
        &[
            (A121, &k[0]),
            (A124, &k[3]),
            (A125, &k[4]),
            (A126, &k[5]),
            (A127, &k[6]),
            (A128, &k[7]),
            (A129, &k[8]),
            (A1210, &k[9]),
            (A1211, &k[10]),
        ],
    ))?;
    Ok(axpy(
        y,
        h,
        &[
            (B1, &k[0]),
            (B6, &k[5]),
            (B7, &k[6]),
            (B8, &k[7]),
            (B9, &k[8]),
            (B10, &k[9]),
            (B11, &k[10]),
            (B12, &k[11]),
        ],
    ))
}

fn error_norm(y: &State, y_new: &State, k: &[State; 16], h: f64, opts: &Options) -> f64 {
    let mut err = 0.0;
    let mut err2 = 0.0;
    for i in 0..4 {
        let sk = opts.atol + opts.rtol * y[i].abs().max(y_new[i].abs());
        let b8i = B1 * k[0][i]
            + B6 * k[5][i]
            + B7 * k[6][i]
            + B8 * k[7][i]
            + B9 * k[8][i]
            + B10 * k[9][i]
            + B11 * k[10][i]
            + B12 * k[11][i];
        let e2 = b8i - BHH1 * k[0][i] - BHH2 * k[8][i] - BHH3 * k[11][i];
        err2 += (e2 / sk).powi(2);
        let e = ER1 * k[0][i]
            + ER6 * k[5][i]
            + ER7 * k[6][i]
            + ER8 * k[7][i]
            + ER9 * k[8][i]
            + ER10 * k[9][i]
            + ER11 * k[10][i]
            + ER12 * k[11][i];
        err += (e / sk).powi(2);
    }
    let mut deno = err + 0.01 * err2;
    if deno <= 0.0 {
        deno = 1.0;
    }
    h.abs() * err * (1.0 / (4.0 * deno)).sqrt()
}

/// Dense-output coefficients; needs `k[12] = f(y_new)` and evaluates the
/// three extra stages.
fn dense<F>(f: &F, y: &State, y_new: &State, h: f64, st: &mut Stages) -> Result<[State; 8]>
where
    F: Fn(&State) -> Result<State>,
{
    let k = &mut st.k;
    k[13] = f(&axpy(
        y,
        h,
        &[
            (A141, &k[0]),
            (A147, &k[6]),
            (A148, &k[7]),
            (A149, &k[8]),
            (A1410, &k[9]),
            (A1411, &k[10]),
            (A1412, &k[11]),
            (A1413, &k[12]),
        ],
    ))?;
    k[14] = f(&axpy(
        y,
        h,
        &[
            (A151, &k[0]),
            (A156, &k[5]),
            (A157, &k[6]),
            (A158, &k[7]),
            (A1511, &k[10]),
            (A1512, &k[11]),
            (A1513, &k[12]),
            (A1514, &k[13]),
        ],
    ))?;
    k[15] = f(&axpy(
        y,
        h,
        &[
            (A161, &k[0]),
            (A166, &k[5]),
            (A167, &k[6]),
            (A168, &k[7]),
            (A169, &k[8]),
            (A1613, &k[12]),
            (A1614, &k[13]),
            (A1615, &k[14]),
        ],
    ))?;
    let mut cont = [[0.0; 4]; 8];
    for i in 0..4 {
        let ydiff = y_new[i] - y[i];
        let bspl = h * k[0][i] - ydiff;
        cont[0][i] = y[i];
        cont[1][i] = ydiff;
        cont[2][i] = bspl;
        cont[3][i] = ydiff - h * k[12][i] - bspl;
    }
    let rows: [[f64; 12]; 4] = [
        [D41, D46, D47, D48, D49, D410, D411, D412, D413, D414, D415, D416],
        [D51, D56, D57, D58, D59, D510, D511, D512, D513, D514, D515, D516],
        [D61, D66, D67, D68, D69, D610, D611, D612, D613, D614, D615, D616],
        [D71, D76, D77, D78, D79, D710, D711, D712, D713, D714, D715, D716],
    ];
    let idx = [0usize, 5, 6, 7, 8, 9, 10, 11, 12, 13, 14, 15];
    for (r, d) in rows.iter().enumerate() {
        let terms: Vec<(f64, &State)> = d.iter().zip(idx).map(|(&w, j)| (w, &k[j])).collect();
        let v = lin(&terms);
        for i in 0..4 {
            cont[4 + r][i] = h * v[i];
        }
    }
    Ok(cont)
}

fn initial_step<F>(f: &F, y: &State, f0: &State, opts: &Options) -> Result<f64>
where
    F: Fn(&State) -> Result<State>,
{
    let mut dnf = 0.0;
    let mut dny = 0.0;
    for i in 0..4 {
        let sk = opts.atol + opts.rtol * y[i].abs();
        dnf += (f0[i] / sk).powi(2);
        dny += (y[i] / sk).powi(2);
    }
    let mut h = if dnf <= 1e-10 || dny <= 1e-10 { 1e-6 } else { 0.01 * (dny / dnf).sqrt() };
    h = h.min(opts.h_max);
    let f1 = f(&axpy(y, h, &[(1.0, f0)]))?;
    let mut der2 = 0.0;
    for i in 0..4 {
        let sk = opts.atol + opts.rtol * y[i].abs();
        der2 += ((f1[i] - f0[i]) / sk).powi(2);
    }
    let der2 = der2.sqrt() / h;
    let der12 = der2.abs().max(dnf.sqrt());
    let h1 = if der12 <= 1e-15 { (h * 1e-3).max(1e-6) } else { (0.01 / der12).powf(1.0 / 8.0) };
    Ok((100.0 * h).min(h1).min(opts.h_max))
}

/// Integrates `y' = f(y)` from `t = 0` to `t_end`, or until `event` fires.
pub fn solve<F>(f: F, y0: State, t_end: f64, opts: &Options, event: Option<Event>) -> Result<Solution>
where
    F: Fn(&State) -> Result<State>,
{
    if !(t_end > 0.0 && t_end.is_finite()) {
        return Err(Error::InvalidArgument(format!("integration end time must be positive, got {t_end}")));
    }
    let mut t = 0.0;
    let mut y = y0;
    // stage failures are collisions: the vector field refuses |q| ~ 0
    let guard = |t: f64, e: Error| match e {
        Error::Collision { .. } => Error::CollisionAbort { t },
        other => other,
    };
    let mut st = Stages { k: [[0.0; 4]; 16] };
    st.k[0] = f(&y).map_err(|e| guard(t, e))?;
    let mut evals = 1;
    let mut h = initial_step(&f, &y, &st.k[0], opts).map_err(|e| guard(t, e))?;
    evals += 1;
    let mut segments = Vec::new();
    let mut accepted = 0;
    let mut rejected = 0;
    let mut last_rejected = false;
    let mut g_prev = event.map(|e| y[e.component]);

    loop {
        if accepted + rejected >= opts.max_steps {
            return Err(Error::StepFailure { t, reason: format!("step budget {} exhausted", opts.max_steps) });
        }
        if h.abs() <= 1e-14 * t.abs().max(1.0) {
            return Err(Error::StepFailure { t, reason: format!("step size underflow h = {h:e}") });
        }
        let last = t + h >= t_end;
        if last {
            h = t_end - t;
        }
        let y_new = match twelve_stages(&f, &y, h, &mut st) {
            Ok(v) => v,
            Err(Error::Collision { .. }) => {
                // a stage probed the singularity; retry with a smaller step
                rejected += 1;
                h *= 0.25;
                last_rejected = true;
                continue;
            }
            Err(e) => return Err(e),
        };
        evals += 11;
        let err = error_norm(&y, &y_new, &st.k, h, opts);
        let fac11 = err.powf(1.0 / 8.0);
        let fac = (1.0 / 6.0f64).max((1.0 / 0.333f64).min(fac11 / 0.9));
        let mut h_new = h / fac;
        if !err.is_finite() || err > 1.0 {
            rejected += 1;
            h /= (1.0 / 0.333f64).min(fac11 / 0.9).max(1.0);
            if !err.is_finite() {
                h *= 0.1;
            }
            last_rejected = true;
            continue;
        }
        st.k[12] = f(&y_new).map_err(|e| guard(t + h, e))?;
        let cont = dense(&f, &y, &y_new, h, &mut st).map_err(|e| guard(t, e))?;
        evals += 4;
        accepted += 1;
        let seg = Segment { t0: t, h, y0: y, cont };
        let t_new = if last { t_end } else { t + h };

        if let (Some(ev), Some(gp)) = (event, g_prev) {
            if let Some(te) = locate_event(&seg, ev, gp, y_new[ev.component]) {
                // re-take the step exactly to the event for full accuracy
                let ye = twelve_stages(&f, &y, te - t, &mut st).map_err(|e| guard(t, e))?;
                segments.push(seg);
                return Ok(Solution {
                    segments,
                    t_end: te,
                    y_end: ye,
                    accepted,
                    rejected,
                    evals: evals + 11,
                    event_time: Some(te),
                });
            }
            g_prev = Some(y_new[ev.component]);
        }
        segments.push(seg);
        st.k[0] = st.k[12];
        t = t_new;
        y = y_new;
        if y[0].hypot(y[1]) < opts.collision_radius {
            return Err(Error::CollisionAbort { t });
        }
        if last {
            return Ok(Solution { segments, t_end: t, y_end: y, accepted, rejected, evals, event_time: None });
        }
        if last_rejected {
            h_new = h_new.min(h);
        }
        last_rejected = false;
        h = h_new.min(opts.h_max);
    }
}

fn crosses(a: f64, b: f64, direction: i8) -> bool {
    match direction {
        d if d > 0 => a < 0.0 && b >= 0.0,
        d if d < 0 => a > 0.0 && b <= 0.0,
        _ => (a < 0.0 && b >= 0.0) || (a > 0.0 && b <= 0.0),
    }
}

fn locate_event(seg: &Segment, ev: Event, g0: f64, g1: f64) -> Option<f64> {
    if seg.t1() <= ev.after {
        return None;
    }
    // probe the interior so that a pair of crossings inside one step is not missed
    const PROBES: usize = 8;
    let mut ta = seg.t0;
    let mut ga = g0;
    for j in 1..=PROBES {
        let tb = seg.t0 + seg.h * j as f64 / PROBES as f64;
        let gb = if j == PROBES { g1 } else { seg.eval(tb)[ev.component] };
        if tb > ev.after && crosses(ga, gb, ev.direction) {
            let (mut lo, mut hi) = (ta.max(ev.after), tb);
            let mut glo = seg.eval(lo)[ev.component];
            if !crosses(glo, gb, ev.direction) {
                lo = ta;
                glo = ga;
            }
            for _ in 0..200 {
                let mid = 0.5 * (lo + hi);
                if mid <= lo || mid >= hi {
                    break;
                }
                let gm = seg.eval(mid)[ev.component];
                if (gm < 0.0) == (glo < 0.0) && gm != 0.0 {
                    lo = mid;
                    glo = gm;
                } else {
                    hi = mid;
                }
            }
            return Some(hi);
        }
        ta = tb;
        ga = gb;
    }
    None
}

// Dormand–Prince 8(5,3) coefficients (Hairer, Norsett and Wanner). The stage
// nodes are omitted: every system here is autonomous.
const A21: f64 = 5.26001519587677318785587544488E-2;
const A31: f64 = 1.97250569845378994544595329183E-2;
const A32: f64 = 5.91751709536136983633785987549E-2;
const A41: f64 = 2.95875854768068491816892993775E-2;
const A43: f64 = 8.87627564304205475450678981324E-2;
const A51: f64 = 2.41365134159266685502369798665E-1;
const A53: f64 = -8.84549479328286085344864962717E-1;
const A54: f64 = 9.24834003261792003115737966543E-1;
const A61: f64 = 3.7037037037037037037037037037E-2;
const A64: f64 = 1.70828608729473871279604482173E-1;
const A65: f64 = 1.25467687566822425016691814123E-1;
const A71: f64 = 3.7109375E-2;
const A74: f64 = 1.70252211019544039314978060272E-1;
const A75: f64 = 6.02165389804559606850219397283E-2;
const A76: f64 = -1.7578125E-2;
const A81: f64 = 3.70920001185047927108779319836E-2;
const A84: f64 = 1.70383925712239993810214054705E-1;
const A85: f64 = 1.07262030446373284651809199168E-1;
const A86: f64 = -1.53194377486244017527936158236E-2;
const A87: f64 = 8.27378916381402288758473766002E-3;
const A91: f64 = 6.24110958716075717114429577812E-1;
const A94: f64 = -3.36089262944694129406857109825E0;
const A95: f64 = -8.68219346841726006818189891453E-1;
const A96: f64 = 2.75920996994467083049415600797E1;
const A97: f64 = 2.01540675504778934086186788979E1;
const A98: f64 = -4.34898841810699588477366255144E1;
const A101: f64 = 4.77662536438264365890433908527E-1;
const A104: f64 = -2.48811461997166764192642586468E0;
const A105: f64 = -5.90290826836842996371446475743E-1;
const A106: f64 = 2.12300514481811942347288949897E1;
const A107: f64 = 1.52792336328824235832596922938E1;
const A108: f64 = -3.32882109689848629194453265587E1;
const A109: f64 = -2.03312017085086261358222928593E-2;
const A111: f64 = -9.3714243008598732571704021658E-1;
const A114: f64 = 5.18637242884406370830023853209E0;
const A115: f64 = 1.09143734899672957818500254654E0;
const A116: f64 = -8.14978701074692612513997267357E0;
const A117: f64 = -1.85200656599969598641566180701E1;
const A118: f64 = 2.27394870993505042818970056734E1;
const A119: f64 = 2.49360555267965238987089396762E0;
const A1110: f64 = -3.0467644718982195003823669022E0;
const A121: f64 = 2.27331014751653820792359768449E0;
const A124: f64 = -1.05344954667372501984066689879E1;
const A125: f64 = -2.00087205822486249909675718444E0;
const A126: f64 = -1.79589318631187989172765950534E1;
const A127: f64 = 2.79488845294199600508499808837E1;
const A128: f64 = -2.85899827713502369474065508674E0;
const A129: f64 = -8.87285693353062954433549289258E0;
const A1210: f64 = 1.23605671757943030647266201528E1;
const A1211: f64 = 6.43392746015763530355970484046E-1;
const A141: f64 = 5.61675022830479523392909219681E-2;
const A147: f64 = 2.53500210216624811088794765333E-1;
const A148: f64 = -2.46239037470802489917441475441E-1;
const A149: f64 = -1.24191423263816360469010140626E-1;
const A1410: f64 = 1.5329179827876569731206322685E-1;
const A1411: f64 = 8.20105229563468988491666602057E-3;
const A1412: f64 = 7.56789766054569976138603589584E-3;
const A1413: f64 = -8.298E-3;
const A151: f64 = 3.18346481635021405060768473261E-2;
const A156: f64 = 2.83009096723667755288322961402E-2;
const A157: f64 = 5.35419883074385676223797384372E-2;
const A158: f64 = -5.49237485713909884646569340306E-2;
const A1511: f64 = -1.08347328697249322858509316994E-4;
const A1512: f64 = 3.82571090835658412954920192323E-4;
const A1513: f64 = -3.40465008687404560802977114492E-4;
const A1514: f64 = 1.41312443674632500278074618366E-1;
const A161: f64 = -4.28896301583791923408573538692E-1;
const A166: f64 = -4.69762141536116384314449447206E0;
const A167: f64 = 7.68342119606259904184240953878E0;
const A168: f64 = 4.06898981839711007970213554331E0;
const A169: f64 = 3.56727187455281109270669543021E-1;
const A1613: f64 = -1.39902416515901462129418009734E-3;
const A1614: f64 = 2.9475147891527723389556272149E0;
const A1615: f64 = -9.15095847217987001081870187138E0;
const B1: f64 = 5.42937341165687622380535766363E-2;
const B6: f64 = 4.45031289275240888144113950566E0;
const B7: f64 = 1.89151789931450038304281599044E0;
const B8: f64 = -5.8012039600105847814672114227E0;
const B9: f64 = 3.1116436695781989440891606237E-1;
const B10: f64 = -1.52160949662516078556178806805E-1;
const B11: f64 = 2.01365400804030348374776537501E-1;
const B12: f64 = 4.47106157277725905176885569043E-2;
const BHH1: f64 = 0.244094488188976377952755905512E+00;
const BHH2: f64 = 0.733846688281611857341361741547E+00;
const BHH3: f64 = 0.220588235294117647058823529412E-01;
const ER1: f64 = 0.1312004499419488073250102996E-01;
const ER6: f64 = -0.1225156446376204440720569753E+01;
const ER7: f64 = -0.4957589496572501915214079952E+00;
const ER8: f64 = 0.1664377182454986536961530415E+01;
const ER9: f64 = -0.3503288487499736816886487290E+00;
const ER10: f64 = 0.3341791187130174790297318841E+00;
const ER11: f64 = 0.8192320648511571246570742613E-01;
const ER12: f64 = -0.2235530786388629525884427845E-01;
const D41: f64 = -0.84289382761090128651353491142E+01;
const D46: f64 = 0.56671495351937776962531783590E+00;
const D47: f64 = -0.30689499459498916912797304727E+01;
const D48: f64 = 0.23846676565120698287728149680E+01;
const D49: f64 = 0.21170345824450282767155149946E+01;
const D410: f64 = -0.87139158377797299206789907490E+00;
const D411: f64 = 0.22404374302607882758541771650E+01;
const D412: f64 = 0.63157877876946881815570249290E+00;
const D413: f64 = -0.88990336451333310820698117400E-01;
const D414: f64 = 0.18148505520854727256656404962E+02;
const D415: f64 = -0.91946323924783554000451984436E+01;
const D416: f64 = -0.44360363875948939664310572000E+01;
const D51: f64 = 0.10427508642579134603413151009E+02;
const D56: f64 = 0.24228349177525818288430175319E+03;
const D57: f64 = 0.16520045171727028198505394887E+03;
const D58: f64 = -0.37454675472269020279518312152E+03;
const D59: f64 = -0.22113666853125306036270938578E+02;
const D510: f64 = 0.77334326684722638389603898808E+01;
const D511: f64 = -0.30674084731089398182061213626E+02;
const D512: f64 = -0.93321305264302278729567221706E+01;
const D513: f64 = 0.15697238121770843886131091075E+02;
const D514: f64 = -0.31139403219565177677282850411E+02;
const D515: f64 = -0.93529243588444783865713862664E+01;
const D516: f64 = 0.35816841486394083752465898540E+02;
const D61: f64 = 0.19985053242002433820987653617E+02;
const D66: f64 = -0.38703730874935176555105901742E+03;
const D67: f64 = -0.18917813819516756882830838328E+03;
const D68: f64 = 0.52780815920542364900561016686E+03;
const D69: f64 = -0.11573902539959630126141871134E+02;
const D610: f64 = 0.68812326946963000169666922661E+01;
const D611: f64 = -0.10006050966910838403183860980E+01;
const D612: f64 = 0.77771377980534432092869265740E+00;
const D613: f64 = -0.27782057523535084065932004339E+01;
const D614: f64 = -0.60196695231264120758267380846E+02;
const D615: f64 = 0.84320405506677161018159903784E+02;
const D616: f64 = 0.11992291136182789328035130030E+02;
const D71: f64 = -0.25693933462703749003312586129E+02;
const D76: f64 = -0.15418974869023643374053993627E+03;
const D77: f64 = -0.23152937917604549567536039109E+03;
const D78: f64 = 0.35763911791061412378285349910E+03;
const D79: f64 = 0.93405324183624310003907691704E+02;
const D710: f64 = -0.37458323136451633156875139351E+02;
const D711: f64 = 0.10409964950896230045147246184E+03;
const D712: f64 = 0.29840293426660503123344363579E+02;
const D713: f64 = -0.43533456590011143754432175058E+02;
const D714: f64 = 0.96324553959188282948394950600E+02;
const D715: f64 = -0.39177261675615439165231486172E+02;
const D716: f64 = -0.14972683625798562581422125276E+03;

#[cfg(test)]
mod tests {
    use super::*;

    fn oscillator(y: &State) -> Result<State> {
        Ok([y[2], y[3], -y[0], -y[1]])
    }

    #[test]
    fn harmonic_oscillator_period() {
        let y0 = [1.0, 0.0, 0.0, 1.0];
        let sol = solve(oscillator, y0, std::f64::consts::TAU, &Options::with_tol(1e-13), None).unwrap();
        for (a, b) in sol.y_end.iter().zip(y0) {
            assert!((a - b).abs() < 1e-11, "{:?}", sol.y_end);
        }
    }

    #[test]
    fn dense_output_matches_exact_solution() {
        let y0 = [1.0, 0.0, 0.0, 1.0];
        let sol = solve(oscillator, y0, 10.0, &Options::with_tol(1e-12), None).unwrap();
        for j in 0..1000 {
            let t = 10.0 * j as f64 / 999.0;
            let y = sol.eval(t);
            assert!((y[0] - t.cos()).abs() < 1e-9);
            assert!((y[1] - t.sin()).abs() < 1e-9);
        }
    }

    #[test]
    fn event_location() {
        // y[1] = sin t increases through zero at 2 pi
        let y0 = [1.0, 0.0, 0.0, 1.0];
        let ev = Event { component: 1, direction: 1, after: 1e-3 };
        let sol = solve(oscillator, y0, 20.0, &Options::with_tol(1e-12), Some(ev)).unwrap();
        let te = sol.event_time.unwrap();
        assert!((te - std::f64::consts::TAU).abs() < 1e-11);
        let ev = Event { component: 1, direction: -1, after: 1e-3 };
        let sol = solve(oscillator, y0, 20.0, &Options::with_tol(1e-12), Some(ev)).unwrap();
        assert!((sol.event_time.unwrap() - std::f64::consts::PI).abs() < 1e-11);
        assert!(sol.y_end[1].abs() < 1e-11);
    }

    #[test]
    fn collision_aborts() {
        // radial infall toward the origin
        let f = |y: &State| -> Result<State> {
            let r = y[0].hypot(y[1]);
            if r < 1e-12 {
                return Err(Error::Collision { radius: r });
            }
            let r3 = r * r * r;
            Ok([y[2], y[3], -y[0] / r3, -y[1] / r3])
        };
        let res = solve(f, [1.0, 0.0, 0.0, 0.0], 5.0, &Options::with_tol(1e-10), None);
        assert!(matches!(res, Err(Error::CollisionAbort { .. }) | Err(Error::StepFailure { .. })), "{res:?}");
    }
}
