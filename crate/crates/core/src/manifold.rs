//! The stable manifold y = y_c(x) of X_c at the origin.
//!
//! The manifold leaves the origin like −k x^{(1+α)/2}, which is not smooth
//! in x. Writing
//!
//! ```text
//!     y = −x^{(1+α)/2} g(z),    z = x^{(1−α)/2},
//! ```
//!
//! turns the graph equation Λ y dy/dx = c y + x^α into the regular problem
//! Λ g (p g + q z g') = 1 − c z g with p = (1+α)/2 and q = (1−α)/2, whose
//! solution is analytic at z = 0 with g(0) = k. Near the origin we sum its
//! power series; beyond the point where the series stops being accurate to
//! machine precision we integrate g in t = ln x, where
//!
//! ```text
//!     dg/dt = (1 − c z g)/(Λ g) − p g,    dT/dt = z/g,
//! ```
//!
//! and T is the settling time ∫₀ˣ ds/|y_c(s)|. Increasing t contracts
//! neighbouring solutions at rate ≈ 2p, so errors in the hand-off decay.
//! Storing t rather than x keeps everything finite as α → 1, where the
//! hand-off point x underflows long before z does.

use crate::error::{Error, Result};
use crate::interp::quintic_hermite;
use crate::model::{field_extended, curve_l0, PhaseState, PhysicalParams, SolverConfig};
use crate::ode::{Dopri5, Flow};
use crate::real::Real;

const SERIES_TERMS: usize = 64;

/// Power series of g(z) and 1/g(z) about z = 0.
#[derive(Debug, Clone)]
pub struct TailSeries<T> {
    g: Vec<T>,
    inv: Vec<T>,
    q: T,
    /// Largest z at which both truncated series are accurate to roughly
    /// machine precision (infinite when they terminate, i.e. c = 0).
    pub z_valid: T,
}

impl<T: Real> TailSeries<T> {
    pub fn new(p: &PhysicalParams<T>, c: T) -> Self {
        let (pe, q, l) = (p.p_exp(), p.q_exp(), p.lambda);
        let mut g = vec![T::zero(); SERIES_TERMS];
        g[0] = p.tail_coefficient();
        for n in 1..SERIES_TERMS {
            let mut acc = -c * g[n - 1];
            for m in 1..n {
                acc = acc - l * g[m] * g[n - m] * (pe + q * T::from_usize(n - m).unwrap());
            }
            g[n] = acc / (l * g[0] * (pe + pe + q * T::from_usize(n).unwrap()));
        }
        let mut inv = vec![T::zero(); SERIES_TERMS];
        inv[0] = T::one() / g[0];
        for n in 1..SERIES_TERMS {
            let mut acc = T::zero();
            for m in 1..=n {
                acc = acc + g[m] * inv[n - m];
            }
            inv[n] = -acc / g[0];
        }
        let z_valid = Self::radius_for(&g).min(Self::radius_for(&inv));
        Self { g, inv, q, z_valid }
    }

    fn radius_for(a: &[T]) -> T {
        let eps = T::epsilon();
        let mut z = T::infinity();
        for n in SERIES_TERMS - 3..SERIES_TERMS {
            if a[n] != T::zero() {
                let r = (eps * a[0].abs() / a[n].abs()).powf(T::one() / T::from_usize(n).unwrap());
                z = z.min(r);
            }
        }
        z
    }

    fn horner(a: &[T], z: T) -> T {
        a.iter().rev().fold(T::zero(), |acc, &c| acc * z + c)
    }

    pub fn g(&self, z: T) -> T {
        Self::horner(&self.g, z)
    }

    /// dg/dz.
    pub fn dg(&self, z: T) -> T {
        let mut acc = T::zero();
        for n in (1..SERIES_TERMS).rev() {
            acc = acc * z + self.g[n] * T::from_usize(n).unwrap();
        }
        acc
    }

    /// Settling time from the origin to x = z^{1/q}: (1/q) ∫₀^z dζ/g(ζ).
    pub fn settling(&self, z: T) -> T {
        let mut acc = T::zero();
        for n in (0..SERIES_TERMS).rev() {
            acc = acc * z + self.inv[n] / T::from_usize(n + 1).unwrap();
        }
        acc * z / self.q
    }

    pub fn coefficients(&self) -> &[T] {
        &self.g
    }
}

#[derive(Debug, Clone, Copy)]
pub(crate) struct Node<T> {
    pub t: T,
    pub g: [T; 3],
    pub time: [T; 3],
}

/// A sampled stable manifold, queryable anywhere on [0, x_max].
#[derive(Debug, Clone)]
pub struct ManifoldCurve<T> {
    pub c: T,
    pub params: PhysicalParams<T>,
    /// Where the series hands off to integration. Zero if that point is
    /// below the smallest positive value of `T`.
    pub seed_x: T,
    /// k = (2/((1+α)Λ))^{1/2}, the leading coefficient of the tail.
    pub tail_coefficient: T,
    /// Integration nodes as (x, y) with x strictly increasing.
    pub samples: Vec<PhaseState<T>>,
    pub(crate) series: TailSeries<T>,
    pub(crate) nodes: Vec<Node<T>>,
    pub(crate) first_step: T,
}

fn node_from<T: Real>(p: &PhysicalParams<T>, c: T, t: T, g: T, time: T) -> Node<T> {
    let (pe, q, l) = (p.p_exp(), p.q_exp(), p.lambda);
    let z = (q * t).exp();
    let n = T::one() - c * z * g;
    let dg = n / (l * g) - pe * g;
    let dn = -c * (q * z * g + z * dg);
    let ddg = dn / (l * g) - n * dg / (l * g * g) - pe * dg;
    let dtime = z / g;
    let ddtime = z * (q * g - dg) / (g * g);
    Node { t, g: [g, dg, ddg], time: [time, dtime, ddtime] }
}

impl<T: Real> ManifoldCurve<T> {
    /// ln of the hand-off point.
    pub fn log_seed(&self) -> T {
        self.nodes[0].t
    }

    pub fn log_x_max(&self) -> T {
        self.nodes[self.nodes.len() - 1].t
    }

    pub fn x_max(&self) -> T {
        self.log_x_max().exp()
    }

    pub fn series(&self) -> &TailSeries<T> {
        &self.series
    }

    fn locate(&self, t: T) -> usize {
        let i = self.nodes.partition_point(|n| n.t <= t);
        i.clamp(1, self.nodes.len() - 1) - 1
    }

    fn check_log(&self, t: T) -> Result<()> {
        let hi = self.log_x_max();
        if t > hi || t.is_nan() {
            return Err(Error::OutOfRange {
                what: "x",
                x: t.exp().as_f64(),
                lo: 0.0,
                hi: hi.exp().as_f64(),
            });
        }
        Ok(())
    }

    /// (g, dg/dt) at t = ln x.
    pub(crate) fn g_at_log(&self, t: T) -> (T, T) {
        if t <= self.log_seed() {
            let q = self.params.q_exp();
            let z = (q * t).exp();
            return (self.series.g(z), q * z * self.series.dg(z));
        }
        if self.nodes.len() == 1 {
            return (self.nodes[0].g[0], self.nodes[0].g[1]);
        }
        let i = self.locate(t);
        let (a, b) = (&self.nodes[i], &self.nodes[i + 1]);
        quintic_hermite(a.t, b.t, a.g, b.g, t)
    }

    /// Settling time T at t = ln x.
    pub(crate) fn settling_at_log(&self, t: T) -> T {
        if t <= self.log_seed() {
            return self.series.settling((self.params.q_exp() * t).exp());
        }
        if self.nodes.len() == 1 {
            return self.nodes[0].time[0];
        }
        let i = self.locate(t);
        let (a, b) = (&self.nodes[i], &self.nodes[i + 1]);
        quintic_hermite(a.t, b.t, a.time, b.time, t).0
    }

    /// Settling time from the origin to x, as co-integrated with the curve.
    pub fn settling_time_at(&self, x: T) -> Result<T> {
        if x <= T::zero() {
            return Ok(T::zero());
        }
        let t = x.ln();
        self.check_log(t)?;
        Ok(self.settling_at_log(t))
    }

    /// ln x at which the settling time from the origin equals `tau`, so that
    /// the point sits at distance `tau` behind the trailing interface.
    /// Clamped to the far end of the curve; −∞ for `tau` ≤ 0.
    pub fn log_x_at_time(&self, tau: T) -> T {
        if !(tau > T::zero()) {
            return T::neg_infinity();
        }
        let q = self.params.q_exp();
        let first = &self.nodes[0];
        if tau <= first.time[0] {
            let z_seed = (q * first.t).exp();
            let s = &self.series;
            let z = newton_bracketed(
                |z| (s.settling(z) - tau, T::one() / (q * s.g(z))),
                T::zero(),
                z_seed,
                (q * s.g(T::zero()) * tau).min(z_seed),
            );
            return z.ln() / q;
        }
        let last = self.nodes.len() - 1;
        if tau >= self.nodes[last].time[0] {
            return self.nodes[last].t;
        }
        let i = self.nodes.partition_point(|n| n.time[0] <= tau) - 1;
        let (a, b) = (&self.nodes[i], &self.nodes[i + 1]);
        let guess = a.t + (b.t - a.t) * (tau - a.time[0]) / (b.time[0] - a.time[0]);
        newton_bracketed(
            |t| {
                let (v, d) = quintic_hermite(a.t, b.t, a.time, b.time, t);
                (v - tau, d)
            },
            a.t,
            b.t,
            guess,
        )
    }

    /// y_c(x) for 0 ≤ x ≤ x_max.
    pub fn eval(&self, x: T) -> Result<T> {
        if x < T::zero() {
            return Err(Error::Domain { what: "x", value: x.as_f64() });
        }
        if x == T::zero() {
            return Ok(T::zero());
        }
        let t = x.ln();
        self.check_log(t)?;
        Ok(-(self.params.p_exp() * t).exp() * self.g_at_log(t).0)
    }

    /// y_c at the far end, exactly as integrated (no interpolation).
    pub fn end_state(&self) -> PhaseState<T> {
        let n = &self.nodes[self.nodes.len() - 1];
        PhaseState::new(n.t.exp(), -(self.params.p_exp() * n.t).exp() * n.g[0])
    }

    /// Settling time to the far end, exactly as integrated.
    pub fn end_settling_time(&self) -> T {
        self.nodes[self.nodes.len() - 1].time[0]
    }

    /// Largest relative residual |Λ y dy/dx − c y − x^α| / max(|c y|, x^α)
    /// over interior samples, with dy/dx from a five-point central
    /// difference of the interpolated curve.
    pub fn max_ode_residual(&self) -> T {
        let p = &self.params;
        let mut worst = T::zero();
        let n = self.samples.len();
        for s in self.samples.iter().take(n.saturating_sub(1)).skip(1) {
            let h = s.x * T::lit(1e-3);
            let f = |x: T| self.eval(x).unwrap_or(T::nan());
            let dy = (f(s.x - h - h) - T::lit(8.0) * f(s.x - h) + T::lit(8.0) * f(s.x + h) - f(s.x + h + h))
                / (T::lit(12.0) * h);
            if !dy.is_finite() {
                continue;
            }
            let reaction = s.x.powf(p.alpha);
            let res = (p.lambda * s.y * dy - self.c * s.y - reaction).abs();
            let scale = (self.c * s.y).abs().max(reaction);
            worst = worst.max(res / scale);
        }
        worst
    }
}

/// Newton's method for an increasing function on [lo, hi], falling back to
/// bisection whenever a step would leave the current bracket.
fn newton_bracketed<T: Real>(f: impl Fn(T) -> (T, T), mut lo: T, mut hi: T, guess: T) -> T {
    let mut x = guess;
    for _ in 0..100 {
        let (fx, dfx) = f(x);
        if fx == T::zero() {
            return x;
        }
        if fx < T::zero() {
            lo = x;
        } else {
            hi = x;
        }
        let mut next = x - fx / dfx;
        if !(next > lo && next < hi) {
            next = (lo + hi) / T::lit(2.0);
        }
        if (next - x).abs() <= T::lit(4.0) * T::epsilon() * x.abs().max(T::min_positive_value()) {
            return next;
        }
        x = next;
    }
    x
}

/// Midpoint of the envelope [y0(eps), y0(eps) + (c/Λ) eps].
pub fn manifold_seed<T: Real>(p: &PhysicalParams<T>, c: T, eps: T) -> Result<PhaseState<T>> {
    if !(eps > T::zero()) || c < T::zero() {
        return Err(Error::Precondition(format!("seed needs eps > 0 and c >= 0 (eps = {eps}, c = {c})")));
    }
    let y = curve_l0(p, eps)? + c / (T::lit(2.0) * p.lambda) * eps;
    Ok(PhaseState::new(eps, y))
}

pub fn grow_manifold<T: Real>(p: &PhysicalParams<T>, c: T, x_max: T, cfg: &SolverConfig<T>) -> Result<ManifoldCurve<T>> {
    grow_manifold_warm(p, c, x_max, cfg, None)
}

/// As [`grow_manifold`], optionally starting the integrator with a known
/// good step size.
pub fn grow_manifold_warm<T: Real>(
    p: &PhysicalParams<T>,
    c: T,
    x_max: T,
    cfg: &SolverConfig<T>,
    h_init: Option<T>,
) -> Result<ManifoldCurve<T>> {
    p.validate()?;
    if !(c >= T::zero()) || !c.is_finite() {
        return Err(Error::Domain { what: "c", value: c.as_f64() });
    }
    let seed = cfg.seed_x * x_max.max(T::one());
    if !(x_max > seed) || !x_max.is_finite() {
        return Err(Error::Precondition(format!("x_max = {x_max} must exceed seed_x = {seed}")));
    }
    let (q, l, pe) = (p.q_exp(), p.lambda, p.p_exp());
    let series = TailSeries::new(p, c);
    let t_valid = series.z_valid.ln() / q;
    let t0 = seed.ln().min(t_valid);
    let t1 = x_max.ln();
    let z0 = (q * t0).exp();
    let g0 = series.g(z0);
    let time0 = series.settling(z0);

    let mut nodes = vec![node_from(p, c, t0, g0, time0)];
    let mut left_quadrant = None;
    let rhs = |t: T, s: &[T; 2]| {
        let z = (q * t).exp();
        let g = s[0];
        [(T::one() - c * z * g) / (l * g) - pe * g, z / g]
    };
    let solver = Dopri5::new(cfg.ode_rel_tol, cfg.ode_abs_tol)
        .with_h_max(T::lit(0.125))
        .with_h_init(h_init);
    let sol = solver.integrate(rhs, t0, [g0, time0], t1, |t, s, _| {
        if t == t0 {
            return Flow::Continue;
        }
        if !(s[0] > T::zero()) {
            left_quadrant = Some(t);
            return Flow::Stop;
        }
        nodes.push(node_from(p, c, t, s[0], s[1]));
        Flow::Continue
    })?;
    if let Some(t) = left_quadrant {
        return Err(Error::LeftQuadrant { x: t.exp().as_f64() });
    }
    let mut samples = Vec::with_capacity(nodes.len());
    for n in &nodes {
        let x = n.t.exp();
        if x > T::zero() && samples.last().map_or(true, |s: &PhaseState<T>| x > s.x) {
            samples.push(PhaseState::new(x, -(pe * n.t).exp() * n.g[0]));
        }
    }
    Ok(ManifoldCurve {
        c,
        params: *p,
        seed_x: t0.exp(),
        tail_coefficient: p.tail_coefficient(),
        samples,
        series,
        nodes,
        first_step: sol.first_step,
    })
}

pub fn eval_manifold<T: Real>(m: &ManifoldCurve<T>, x: T) -> Result<T> {
    m.eval(x)
}

/// Integrates the graph equation dy/dx = c/Λ + x^α/(Λ y) directly in x
/// from an arbitrary starting state, returning the accepted steps.
pub fn integrate_graph<T: Real>(
    p: &PhysicalParams<T>,
    c: T,
    start: PhaseState<T>,
    x_end: T,
    cfg: &SolverConfig<T>,
) -> Result<Vec<PhaseState<T>>> {
    if !(start.y < T::zero()) || !(start.x > T::zero()) {
        return Err(Error::Precondition("graph integration starts inside the open quadrant".into()));
    }
    let (a, l) = (p.alpha, p.lambda);
    let mut out = Vec::new();
    let mut left = None;
    Dopri5::new(cfg.ode_rel_tol, cfg.ode_abs_tol).integrate(
        |x: T, y: &[T; 1]| [c / l + x.powf(a) / (l * y[0])],
        start.x,
        [start.y],
        x_end,
        |x, y, _| {
            if !(y[0] < T::zero()) {
                left = Some(x);
                return Flow::Stop;
            }
            out.push(PhaseState::new(x, y[0]));
            Flow::Continue
        },
    )?;
    match left {
        Some(x) => Err(Error::LeftQuadrant { x: x.as_f64() }),
        None => Ok(out),
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BoundingBox<T> {
    pub x_min: T,
    pub x_max: T,
    pub y_min: T,
    pub y_max: T,
}

impl<T: Real> BoundingBox<T> {
    pub fn square(half_width: T) -> Self {
        Self { x_min: -half_width, x_max: half_width, y_min: -half_width, y_max: half_width }
    }

    pub fn contains(&self, s: PhaseState<T>) -> bool {
        self.x_min <= s.x && s.x <= self.x_max && self.y_min <= s.y && s.y <= self.y_max
    }
}

/// One trajectory of the extended field, ordered by time.
#[derive(Debug, Clone, PartialEq)]
pub struct Polyline<T> {
    pub seed: PhaseState<T>,
    pub points: Vec<(T, PhaseState<T>)>,
}

fn half_trajectory<T: Real>(
    p: &PhysicalParams<T>,
    c: T,
    seed: PhaseState<T>,
    t_end: T,
    bbox: &BoundingBox<T>,
    cfg: &SolverConfig<T>,
) -> Vec<(T, PhaseState<T>)> {
    let mut out = Vec::new();
    let solver = Dopri5::new(cfg.ode_rel_tol, cfg.ode_abs_tol).with_h_max(t_end.abs() / T::lit(256.0));
    // Failures (step underflow at the non-Lipschitz axis, say) simply end the
    // polyline where it got to.
    let _ = solver.integrate(
        |_, s: &[T; 2]| {
            let (dx, dy) = field_extended(p, c, PhaseState::new(s[0], s[1]));
            [dx, dy]
        },
        T::zero(),
        [seed.x, seed.y],
        t_end,
        |t, s, _| {
            let st = PhaseState::new(s[0], s[1]);
            if !bbox.contains(st) {
                return Flow::Stop;
            }
            out.push((t, st));
            Flow::Continue
        },
    );
    out
}

/// Trajectories of the extended field through each seed over
/// [−t_span, t_span], truncated where they leave `bbox`.
pub fn sample_phase_portrait<T: Real>(
    p: &PhysicalParams<T>,
    c: T,
    seeds: &[PhaseState<T>],
    t_span: T,
    bbox: BoundingBox<T>,
    cfg: &SolverConfig<T>,
) -> Vec<Polyline<T>> {
    seeds
        .iter()
        .map(|&seed| {
            if !bbox.contains(seed) || !(t_span > T::zero()) {
                return Polyline { seed, points: Vec::new() };
            }
            let mut back = half_trajectory(p, c, seed, -t_span, &bbox, cfg);
            let fwd = half_trajectory(p, c, seed, t_span, &bbox, cfg);
            back.reverse();
            back.pop();
            back.extend(fwd);
            Polyline { seed, points: back }
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn params() -> PhysicalParams<f64> {
        PhysicalParams::new(0.5, 1.0, 0.5).unwrap()
    }

    #[test]
    fn series_solves_the_regular_equation() {
        let p = params();
        let c = 0.8;
        let s = TailSeries::new(&p, c);
        let (pe, q) = (p.p_exp(), p.q_exp());
        for &z in &[0.01, 0.1, 0.5] {
            let (g, dg) = (s.g(z), s.dg(z));
            let res = p.lambda * g * (pe * g + q * z * dg) - (1.0 - c * z * g);
            assert!(res.abs() < 1e-14, "z = {z}: residual {res}");
        }
        assert!((s.coefficients()[1] + 2.0 * c / (p.lambda * (3.0 + p.alpha))).abs() < 1e-15);
    }

    #[test]
    fn zero_speed_is_exactly_the_power_curve() {
        let p = params();
        let cfg = SolverConfig::default();
        let m = grow_manifold(&p, 0.0, 2.0, &cfg).unwrap();
        for &x in &[1e-12, 1e-3, 0.3, 1.0, 1.7, 2.0] {
            let exact = curve_l0(&p, x).unwrap();
            assert!((m.eval(x).unwrap() / exact - 1.0).abs() < 10.0 * cfg.ode_rel_tol);
        }
        assert_eq!(m.eval(0.0).unwrap(), 0.0);
        assert!(m.eval(2.5).is_err());
        assert!(m.eval(-1.0).is_err());
    }

    #[test]
    fn midpoint_seed() {
        let p = params();
        let s = manifold_seed(&p, 1.0, 1e-6).unwrap();
        let lo = curve_l0(&p, 1e-6).unwrap();
        assert!((s.y - (lo + 0.5e-6)).abs() < 1e-18);
        assert_eq!(manifold_seed(&p, 0.0, 1e-6).unwrap().y, lo);
        assert!(manifold_seed(&p, 1.0, 0.0).is_err());
    }

    #[test]
    fn interpolant_residual_is_small() {
        let p = params();
        let cfg = SolverConfig::default();
        let m = grow_manifold(&p, 0.9, 1.0, &cfg).unwrap();
        assert!(m.max_ode_residual() < 1e-8, "{}", m.max_ode_residual());
    }

    #[test]
    fn single_precision_curve() {
        let p = PhysicalParams::new(0.5f32, 1.0, 0.5).unwrap();
        let cfg = SolverConfig {
            ode_rel_tol: 1e-5f32,
            ode_abs_tol: 1e-7,
            ..SolverConfig::default()
        };
        let m = grow_manifold(&p, 0.9, 1.0, &cfg).unwrap();
        let y = m.eval(0.5).unwrap();
        assert!(y < 0.0 && y > curve_l0(&p, 0.5).unwrap());
    }
}
