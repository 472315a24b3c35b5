//! Brute-force reference solvers for the traveling-wave problem.
//!
//! Everything here is deliberately naive: classical fixed-step RK4 in the
//! time variable, plain bisection on the overshoot/undershoot dichotomy, and
//! an exhaustive grid for the coupled closure. Nothing is shared with the
//! `flamewave` crate so that agreement between the two is meaningful.

use std::fmt;
use std::io::{self, Write};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OracleParams {
    pub alpha: f64,
    pub lambda: f64,
    pub theta: f64,
}

impl OracleParams {
    pub fn new(alpha: f64, lambda: f64, theta: f64) -> Self {
        Self { alpha, lambda, theta }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum OracleError {
    StepBudget { c: f64, v0: f64 },
    NoOvershoot { c: f64 },
}

impl fmt::Display for OracleError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            OracleError::StepBudget { c, v0 } => {
                write!(f, "step budget exceeded (c = {c}, v0 = {v0})")
            }
            OracleError::NoOvershoot { c } => write!(f, "no overshoot found up to c = {c}"),
        }
    }
}

impl std::error::Error for OracleError {}

/// Which side of the origin a shot exits through.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Outcome {
    /// v' reached 0 while v > 0: the speed was too small.
    Undershoot,
    /// v reached 0 while v' < 0: the speed was too large.
    Overshoot,
}

#[derive(Debug, Clone, Copy)]
pub struct Shot {
    pub outcome: Outcome,
    /// Distance from the origin at the stopping event.
    pub defect: f64,
    /// |y²/2 − x^{1+α}/(Λ(1+α))| at the stopping event. Vanishes only at the
    /// origin and, unlike `defect`, varies linearly with the speed error.
    pub energy_defect: f64,
    pub time: f64,
    /// Estimated arrival time at the origin: first passage below
    /// `ARRIVAL_X` plus the leading-order remaining time from there.
    /// Infinite if the shot never got that close. Shooting cannot resolve
    /// c finely enough to follow the manifold into the origin, so this is
    /// good to about 1e-3 relative only.
    pub arrival: f64,
    /// ∫ e^{−cs} (−v') ds up to the event.
    pub k_integral: f64,
    /// ∫ e^{−cs} v ds up to the event.
    pub m_integral: f64,
}

#[derive(Debug, Clone)]
pub struct OracleResult {
    pub method: String,
    pub params: OracleParams,
    pub c: f64,
    pub v0: f64,
    pub r: f64,
    pub defect: f64,
    /// Spacing of the last refinement grid (zero for shooting results).
    pub cell_v0: f64,
    pub cell_c: f64,
}

const MAX_TIME: f64 = 5.0e3;
const ARRIVAL_X: f64 = 1.0e-6;

fn rhs(p: &OracleParams, c: f64, s: f64, z: &[f64; 4]) -> [f64; 4] {
    let (x, y) = (z[0], z[1]);
    let reaction = x.max(0.0).powf(p.alpha);
    let w = (-c * s).exp();
    [y, (c * y + reaction) / p.lambda, -w * y, w * x]
}

fn rk4_step(p: &OracleParams, c: f64, s: f64, z: &[f64; 4], dt: f64) -> [f64; 4] {
    let add = |a: &[f64; 4], k: &[f64; 4], h: f64| {
        [a[0] + h * k[0], a[1] + h * k[1], a[2] + h * k[2], a[3] + h * k[3]]
    };
    let k1 = rhs(p, c, s, z);
    let k2 = rhs(p, c, s + 0.5 * dt, &add(z, &k1, 0.5 * dt));
    let k3 = rhs(p, c, s + 0.5 * dt, &add(z, &k2, 0.5 * dt));
    let k4 = rhs(p, c, s + dt, &add(z, &k3, dt));
    let mut out = *z;
    for i in 0..4 {
        out[i] += dt / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
    }
    out
}

fn energy(p: &OracleParams, x: f64, y: f64) -> f64 {
    0.5 * y * y - x.max(0.0).powf(1.0 + p.alpha) / (p.lambda * (1.0 + p.alpha))
}

/// Integrates Λv'' − cv' = v^α from (v0, −(c/Λ)(1−v0)) with fixed steps
/// until v ≤ 0 or v' ≥ 0, locating the event by linear interpolation
/// inside the last step.
pub fn shoot_time_domain(p: &OracleParams, v0: f64, c: f64, dt: f64) -> Result<Shot, OracleError> {
    let mut z = [v0, -(c / p.lambda) * (1.0 - v0), 0.0, 0.0];
    if z[1] >= 0.0 {
        return Ok(Shot {
            outcome: Outcome::Undershoot,
            defect: v0,
            energy_defect: energy(p, v0, 0.0).abs(),
            time: 0.0,
            arrival: f64::INFINITY,
            k_integral: 0.0,
            m_integral: 0.0,
        });
    }
    let mut s = 0.0;
    let mut arrival = f64::INFINITY;
    while s < MAX_TIME {
        let next = rk4_step(p, c, s, &z, dt);
        if arrival.is_infinite() && next[0] < ARRIVAL_X && next[0] > 0.0 {
            let rest = (2.0 * (1.0 + p.alpha) * p.lambda).sqrt() / (1.0 - p.alpha)
                * next[0].powf(0.5 * (1.0 - p.alpha));
            arrival = s + dt + rest;
        }
        let crossed_x = next[0] <= 0.0;
        let crossed_y = next[1] >= 0.0;
        if crossed_x || crossed_y {
            // Fraction of the step at which each coordinate hits zero; take
            // whichever happens first.
            let fx = if crossed_x { z[0] / (z[0] - next[0]) } else { f64::INFINITY };
            let fy = if crossed_y { -z[1] / (next[1] - z[1]) } else { f64::INFINITY };
            let f = fx.min(fy);
            let lerp = |i: usize| z[i] + f * (next[i] - z[i]);
            let (x, y) = if fx <= fy { (0.0, lerp(1)) } else { (lerp(0), 0.0) };
            return Ok(Shot {
                outcome: if fx <= fy { Outcome::Overshoot } else { Outcome::Undershoot },
                defect: x.hypot(y),
                energy_defect: energy(p, x, y).abs(),
                time: s + f * dt,
                arrival,
                k_integral: lerp(2),
                m_integral: lerp(3),
            });
        }
        z = next;
        s += dt;
    }
    Err(OracleError::StepBudget { c, v0 })
}

/// Bisection on c over the overshoot/undershoot classification.
pub fn speed_by_shooting(
    p: &OracleParams,
    v0: f64,
    dt: f64,
    tol: f64,
) -> Result<OracleResult, OracleError> {
    let mut lo = 0.0;
    let mut hi = 1.0;
    while shoot_time_domain(p, v0, hi, dt)?.outcome == Outcome::Undershoot {
        lo = hi;
        hi *= 2.0;
        if hi > 1.0e6 {
            return Err(OracleError::NoOvershoot { c: hi });
        }
    }
    while hi - lo > tol * hi {
        let mid = 0.5 * (lo + hi);
        match shoot_time_domain(p, v0, mid, dt)?.outcome {
            Outcome::Undershoot => lo = mid,
            Outcome::Overshoot => hi = mid,
        }
    }
    let c = 0.5 * (lo + hi);
    let shot = shoot_time_domain(p, v0, c, dt)?;
    Ok(OracleResult {
        method: "shooting".into(),
        params: *p,
        c,
        v0,
        r: shot.arrival,
        defect: shot.defect,
        cell_v0: 0.0,
        cell_c: 0.0,
    })
}

/// The closure residual evaluated along a shot: zero exactly when the
/// temperature reconstructed from the trajectory equals θ at the front.
pub fn closure_residual(p: &OracleParams, v0: f64, c: f64, shot: &Shot) -> f64 {
    let (th, l) = (p.theta, p.lambda);
    if l == 1.0 {
        1.0 - th - v0
    } else if l < 1.0 {
        1.0 - th + (1.0 - l) * shot.k_integral - v0
    } else {
        (1.0 - th - c * (1.0 - l) * shot.m_integral) / l - v0
    }
}

fn search_window(p: &OracleParams) -> ((f64, f64), (f64, f64)) {
    let (a, l, th) = (p.alpha, p.lambda, p.theta);
    let (vlo, vhi) = if l < 1.0 {
        (1.0 - th, 1.0 - l * th)
    } else if l > 1.0 {
        ((1.0 - th) / l, 1.0 - th / l)
    } else {
        (0.5 * (1.0 - th), 1.0 - 0.5 * th)
    };
    let lower = |v: f64| (2.0 * l / (1.0 + a)).sqrt() * v.powf(0.5 * (1.0 + a));
    let upper = |v: f64| (lower(v) / (1.0 - v)).min((l / (1.0 - v)).sqrt() * v.powf(0.5 * a));
    ((vlo, vhi), (lower(vlo), upper(vhi)))
}

fn median(mut v: Vec<f64>) -> f64 {
    v.sort_by(|a, b| a.partial_cmp(b).expect("finite defects"));
    v[v.len() / 2].max(f64::MIN_POSITIVE)
}

struct Stage {
    vs: Vec<f64>,
    cs: Vec<f64>,
    h: Vec<Vec<f64>>,
    g: Vec<Vec<f64>>,
    best: OracleResult,
}

fn run_stage(
    p: &OracleParams,
    n: usize,
    dt: f64,
    (vlo, vhi): (f64, f64),
    (clo, chi): (f64, f64),
) -> Result<Stage, OracleError> {
    let dv = (vhi - vlo) / (n - 1) as f64;
    let dc = (chi - clo) / (n - 1) as f64;
    let vs: Vec<f64> = (0..n).map(|i| (vlo + dv * i as f64).clamp(1e-9, 1.0 - 1e-9)).collect();
    let cs: Vec<f64> = (0..n).map(|j| (clo + dc * j as f64).max(1e-9)).collect();
    let mut h = vec![vec![0.0; n]; n];
    let mut g = vec![vec![0.0; n]; n];
    let mut t = vec![vec![0.0; n]; n];
    for i in 0..n {
        for j in 0..n {
            let shot = shoot_time_domain(p, vs[i], cs[j], dt)?;
            h[i][j] = match shot.outcome {
                Outcome::Overshoot => shot.energy_defect,
                Outcome::Undershoot => -shot.energy_defect,
            };
            g[i][j] = closure_residual(p, vs[i], cs[j], &shot);
            t[i][j] = shot.arrival.min(shot.time);
        }
    }
    let mut dh = Vec::new();
    let mut dg = Vec::new();
    for i in 0..n - 1 {
        for j in 0..n - 1 {
            dh.push((h[i][j + 1] - h[i][j]).abs());
            dg.push((g[i + 1][j] - g[i][j]).abs());
        }
    }
    let (sh, sg) = (median(dh), median(dg));
    let mut best = (f64::INFINITY, 0, 0);
    for i in 0..n {
        for j in 0..n {
            let d = h[i][j].abs() / sh + g[i][j].abs() / sg;
            if d < best.0 {
                best = (d, i, j);
            }
        }
    }
    let (_, i, j) = best;
    let best = OracleResult {
        method: "grid".into(),
        params: *p,
        c: cs[j],
        v0: vs[i],
        r: t[i][j],
        defect: h[i][j].abs() + g[i][j].abs(),
        cell_v0: dv,
        cell_c: dc,
    };
    Ok(Stage { vs, cs, h, g, best })
}

/// Exhaustive search over an `n × n` grid of (v0, c), then two zooms onto
/// a window of ±2 cells around the incumbent. Returns the stage results in
/// order.
///
/// The two defects live on very different scales and the grid is far from
/// isotropic in their units, so each is divided by its median
/// cell-to-cell variation before they are added: the combined defect is
/// then roughly the distance to the solution counted in grid cells.
pub fn grid_search_stages(p: &OracleParams, n: usize, dt: f64) -> Result<Vec<OracleResult>, OracleError> {
    Ok(stages(p, n, dt)?.into_iter().map(|s| s.best).collect())
}

fn stages(p: &OracleParams, n: usize, dt: f64) -> Result<Vec<Stage>, OracleError> {
    assert!(n >= 3 && n % 2 == 1, "grid size must be odd and at least 3");
    let (mut vw, mut cw) = search_window(p);
    let mut out: Vec<Stage> = Vec::with_capacity(3);
    for _ in 0..3 {
        let mut stage = run_stage(p, n, dt, vw, cw)?;
        // Keep the previous incumbent if the zoomed grid did not improve on it.
        if let Some(prev) = out.last() {
            if stage.best.defect > prev.best.defect {
                stage.best = OracleResult { cell_v0: stage.best.cell_v0, cell_c: stage.best.cell_c, ..prev.best.clone() };
            }
        }
        let b = &stage.best;
        vw = (b.v0 - 2.0 * b.cell_v0, b.v0 + 2.0 * b.cell_v0);
        cw = (b.c - 2.0 * b.cell_c, b.c + 2.0 * b.cell_c);
        out.push(stage);
    }
    Ok(out)
}

/// Zero crossing of `f` between consecutive samples, as (index, fraction).
fn crossing(f: &[f64]) -> Option<(usize, f64)> {
    for k in 0..f.len() - 1 {
        if f[k] == 0.0 {
            return Some((k, 0.0));
        }
        if f[k].signum() != f[k + 1].signum() {
            return Some((k, f[k] / (f[k] - f[k + 1])));
        }
    }
    None
}

/// Grid search followed by a polish on the finest grid.
///
/// Along each v0 row the speed is placed where the signed energy defect H
/// changes sign. Neither H nor the closure residual G is smooth in c across
/// that point, but on either side G is very nearly an affine function of H,
/// so G on the curve is obtained by extrapolating G against H to H = 0 from
/// the two samples on the side nearer the crossing. The zero of that G is
/// then located between rows. Falls back to the grid optimum if a sign
/// change is missing. The reported cell widths are those of the finest
/// grid.
pub fn grid_search_closure(p: &OracleParams, n: usize, dt: f64) -> Result<OracleResult, OracleError> {
    let st = stages(p, n, dt)?;
    let last = st.last().expect("three stages");
    let mut curve: Vec<(f64, f64, f64)> = Vec::with_capacity(n);
    for i in 0..n {
        let (h, g) = (&last.h[i], &last.g[i]);
        let Some((j, s)) = crossing(h) else { continue };
        let c = last.cs[j] + s * (last.cs[j + 1] - last.cs[j]);
        let same = |a: usize, b: usize| h[a].signum() == h[b].signum() && h[a] != h[b];
        let extrapolate = |near: usize, far: usize| g[near] - h[near] * (g[near] - g[far]) / (h[near] - h[far]);
        let left = (j >= 1 && same(j, j - 1)).then(|| (h[j].abs(), extrapolate(j, j - 1)));
        let right = (j + 2 < n && same(j + 1, j + 2)).then(|| (h[j + 1].abs(), extrapolate(j + 1, j + 2)));
        let g_star = match (left, right) {
            (Some(l), Some(r)) => if l.0 <= r.0 { l.1 } else { r.1 },
            (Some(l), None) => l.1,
            (None, Some(r)) => r.1,
            (None, None) => continue,
        };
        curve.push((last.vs[i], c, g_star));
    }
    let gs: Vec<f64> = curve.iter().map(|e| e.2).collect();
    let Some((k, s)) = (if gs.len() >= 2 { crossing(&gs) } else { None }) else {
        return Ok(last.best.clone());
    };
    let (a, b) = (curve[k], curve[(k + 1).min(curve.len() - 1)]);
    let v0 = a.0 + s * (b.0 - a.0);
    let c = a.1 + s * (b.1 - a.1);
    let shot = shoot_time_domain(p, v0, c, dt)?;
    Ok(OracleResult {
        method: "grid".into(),
        params: *p,
        c,
        v0,
        r: shot.arrival.min(shot.time),
        defect: shot.energy_defect + closure_residual(p, v0, c, &shot).abs(),
        cell_v0: last.best.cell_v0,
        cell_c: last.best.cell_c,
    })
}

/// Nested bisection: the outer loop bisects the closure residual in v0,
/// the inner one finds c(v0) by shooting. Slow, but every number it
/// produces comes from the same fixed-step trajectories.
pub fn shooting_closure(p: &OracleParams, dt: f64, tol: f64) -> Result<OracleResult, OracleError> {
    let residual = |v0: f64| -> Result<(f64, OracleResult), OracleError> {
        let s = speed_by_shooting(p, v0, dt, 1e-13)?;
        let shot = shoot_time_domain(p, v0, s.c, dt)?;
        Ok((closure_residual(p, v0, s.c, &shot), s))
    };
    let ((mut lo, mut hi), _) = search_window(p);
    if p.lambda == 1.0 {
        lo = 1.0 - p.theta;
        hi = lo;
    }
    let (mut g_lo, _) = residual(lo)?;
    while hi - lo > tol {
        let mid = 0.5 * (lo + hi);
        let (g, _) = residual(mid)?;
        if (g > 0.0) == (g_lo > 0.0) {
            lo = mid;
            g_lo = g;
        } else {
            hi = mid;
        }
    }
    let v0 = 0.5 * (lo + hi);
    let (g, s) = residual(v0)?;
    Ok(OracleResult { method: "shooting-closure".into(), defect: g.abs(), ..s })
}


pub const FIXTURE_HEADER: &str = "method,alpha,lambda,theta,v0,c,R,defect,cell_v0,cell_c";

pub fn write_fixture<W: Write>(out: &mut W, rows: &[OracleResult]) -> io::Result<()> {
    writeln!(out, "{FIXTURE_HEADER}")?;
    for r in rows {
        writeln!(
            out,
            "{},{:.16e},{:.16e},{:.16e},{:.16e},{:.16e},{:.16e},{:.16e},{:.16e},{:.16e}",
            r.method,
            r.params.alpha,
            r.params.lambda,
            r.params.theta,
            r.v0,
            r.c,
            r.r,
            r.defect,
            r.cell_v0,
            r.cell_c
        )?;
    }
    Ok(())
}

pub fn read_fixture(text: &str) -> Vec<OracleResult> {
    text.lines()
        .skip(1)
        .filter(|l| !l.trim().is_empty())
        .map(|line| {
            let f: Vec<&str> = line.split(',').collect();
            let num = |i: usize| f[i].parse::<f64>().expect("numeric fixture field");
            OracleResult {
                method: f[0].to_string(),
                params: OracleParams::new(num(1), num(2), num(3)),
                v0: num(4),
                c: num(5),
                r: num(6),
                defect: num(7),
                cell_v0: num(8),
                cell_c: num(9),
            }
        })
        .collect()
}

/// Reference (α, Λ, v0) triples for the speed comparison. θ is irrelevant
/// to the speed at fixed v0 and is recorded as 1 − v0.
pub const SPEED_REFERENCES: [(f64, f64, f64); 5] = [
    (0.5, 1.0, 0.5),
    (0.25, 0.5, 0.6),
    (0.75, 2.0, 0.4),
    (0.5, 2.0, 0.3),
    (0.9, 1.0, 0.7),
];

/// Reference (α, Λ, θ) triples for the closure comparison.
pub const CLOSURE_REFERENCES: [(f64, f64, f64); 3] =
    [(0.5, 2.0, 0.5), (0.5, 0.5, 0.5), (0.5, 1.0, 0.5)];

pub const SHOOT_DT: f64 = 1.0e-5;
pub const GRID_DT: f64 = 1.0e-4;
pub const GRID_N: usize = 21;

pub fn pin_all() -> Result<Vec<OracleResult>, OracleError> {
    let mut rows = Vec::new();
    for &(a, l, v0) in &SPEED_REFERENCES {
        rows.push(speed_by_shooting(&OracleParams::new(a, l, 1.0 - v0), v0, SHOOT_DT, 1e-13)?);
    }
    for &(a, l, th) in &CLOSURE_REFERENCES {
        rows.push(grid_search_closure(&OracleParams::new(a, l, th), GRID_N, GRID_DT)?);
    }
    for &(a, l, th) in &CLOSURE_REFERENCES {
        rows.push(shooting_closure(&OracleParams::new(a, l, th), GRID_DT, 1e-10)?);
    }
    Ok(rows)
}
