//! Settling time T(x, c) = ∫₀ˣ ds/|y_c(s)| and the trailing interface
//! R(v0) = T(v0, c(v0)).
//!
//! Integrals against the manifold are taken in t = ln x, where the
//! singular 1/|y| ~ x^{−(1+α)/2} behaviour at the origin becomes a
//! decaying exponential. The piece below the series hand-off is mapped to
//! z = x^{(1−α)/2} ∈ (0, z_seed] so the domain is finite.

use crate::error::{Error, Result};
use crate::manifold::{grow_manifold, ManifoldCurve};
use crate::model::{PhysicalParams, SolverConfig};
use crate::quad::Quadrature;
use crate::real::Real;
use crate::speed::{solve_speed, SpeedResult};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SettlingResult<T> {
    /// T(x, c).
    pub time: T,
    /// Contribution of [0, seed_x], summed from the series.
    pub tail_part: T,
    /// Contribution of [seed_x, x] by adaptive quadrature.
    pub numeric_part: T,
    pub quad_error_estimate: T,
}

/// Point on the manifold handed to integrand closures.
#[derive(Debug, Clone, Copy)]
pub struct CurvePoint<T> {
    /// ln x.
    pub t: T,
    pub x: T,
    /// |y| = x^{(1+α)/2} g.
    pub g: T,
    /// Settling time from the origin.
    pub time: T,
}

fn quadrature<T: Real>(cfg: &SolverConfig<T>) -> Quadrature<T> {
    let mut q = Quadrature::new(cfg.quad_tol, T::zero());
    q.max_intervals = 20_000;
    q
}

/// ∫ F dt over t ∈ (−∞, t_end], for an integrand F(point) in the log
/// variable that decays at least like x^{(1−α)/2} at the origin.
pub fn manifold_integral<T, F>(m: &ManifoldCurve<T>, t_end: T, f: F, cfg: &SolverConfig<T>) -> Result<(T, T)>
where
    T: Real,
    F: Fn(CurvePoint<T>) -> T,
{
    manifold_integral_over(m, T::neg_infinity(), t_end, f, cfg)
}

/// ∫ F dt over t ∈ [t_lo, t_hi]; `t_lo` may be −∞.
pub fn manifold_integral_over<T, F>(m: &ManifoldCurve<T>, t_lo: T, t_hi: T, f: F, cfg: &SolverConfig<T>) -> Result<(T, T)>
where
    T: Real,
    F: Fn(CurvePoint<T>) -> T,
{
    if !(t_hi > t_lo) {
        return Ok((T::zero(), T::zero()));
    }
    let q = m.params.q_exp();
    let t_seed = m.log_seed();
    let series = m.series();
    let point_at = |t: T, from_series: bool| {
        let (g, time) = if from_series {
            let z = (q * t).exp();
            (series.g(z), series.settling(z))
        } else {
            (m.g_at_log(t).0, m.settling_at_log(t))
        };
        CurvePoint { t, x: t.exp(), g, time }
    };
    let quad = quadrature(cfg);
    let mut value = T::zero();
    let mut error = T::zero();
    if t_lo < t_seed {
        let z_lo = (q * t_lo).exp();
        let z_hi = (q * t_hi.min(t_seed)).exp();
        let tail = quad.integrate(
            |z: T| {
                if z <= T::zero() {
                    return T::zero();
                }
                f(point_at(z.ln() / q, true)) / (q * z)
            },
            z_lo,
            z_hi,
        )?;
        value = tail.value;
        error = tail.error;
    }
    if t_hi > t_seed {
        let start = t_lo.max(t_seed);
        let mut breaks: Vec<T> = vec![start];
        breaks.extend(m.nodes.iter().map(|n| n.t).filter(|&t| t > start && t < t_hi));
        breaks.push(t_hi);
        let body = quad.integrate_with_breaks(|t| f(point_at(t, false)), &breaks)?;
        value = value + body.value;
        error = error + body.error;
    }
    Ok((value, error))
}

pub fn settling_time<T: Real>(m: &ManifoldCurve<T>, x: T, cfg: &SolverConfig<T>) -> Result<SettlingResult<T>> {
    if !(x > T::zero()) || x > m.x_max() * (T::one() + T::epsilon()) {
        return Err(Error::OutOfRange { what: "x", x: x.as_f64(), lo: 0.0, hi: m.x_max().as_f64() });
    }
    let q = m.params.q_exp();
    let t = x.ln().min(m.log_x_max());
    let t_seed = m.log_seed();
    let tail_part = m.series().settling((q * t.min(t_seed)).exp());
    if t <= t_seed {
        return Ok(SettlingResult { time: tail_part, tail_part, numeric_part: T::zero(), quad_error_estimate: T::zero() });
    }
    let mut breaks: Vec<T> = vec![t_seed];
    breaks.extend(m.nodes.iter().map(|n| n.t).filter(|&s| s > t_seed && s < t));
    breaks.push(t);
    let numeric = quadrature(cfg).integrate_with_breaks(|s| (q * s).exp() / m.g_at_log(s).0, &breaks)?;
    Ok(SettlingResult {
        time: tail_part + numeric.value,
        tail_part,
        numeric_part: numeric.value,
        quad_error_estimate: numeric.error,
    })
}

#[derive(Debug, Clone)]
pub struct Interface<T> {
    pub r: T,
    pub c: T,
    pub manifold: ManifoldCurve<T>,
    pub speed: SpeedResult<T>,
}

/// Speed, manifold and trailing interface for a given v0.
pub fn trailing_interface<T: Real>(p: &PhysicalParams<T>, v0: T, cfg: &SolverConfig<T>) -> Result<Interface<T>> {
    let speed = solve_speed(p, v0, cfg)?;
    let manifold = grow_manifold(p, speed.c, v0, cfg)?;
    let r = settling_time(&manifold, v0, cfg)?.time;
    Ok(Interface { r, c: speed.c, manifold, speed })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::settling_lower_bound;

    #[test]
    fn zero_speed_settling_is_closed_form() {
        let p = PhysicalParams::new(0.5, 2.0, 0.5).unwrap();
        let cfg = SolverConfig::default();
        let m = grow_manifold(&p, 0.0, 1.0, &cfg).unwrap();
        for &x in &[1e-10f64, 1e-3, 0.25, 1.0] {
            let exact = settling_lower_bound(&p, x);
            let s = settling_time(&m, x, &cfg).unwrap();
            assert!((s.time / exact - 1.0).abs() < 1e-10, "x = {x}");
            assert!((s.tail_part + s.numeric_part - s.time).abs() <= 1e-15 * s.time);
            assert!((m.settling_time_at(x).unwrap() / exact - 1.0).abs() < 1e-10);
        }
    }

    #[test]
    fn integral_of_settling_derivative() {
        // ∫ dT = T(x): the generic integral routine must agree with the
        // dedicated settling-time quadrature.
        let p = PhysicalParams::new(0.3, 0.7, 0.5).unwrap();
        let cfg = SolverConfig::default();
        let m = grow_manifold(&p, 0.8, 0.6, &cfg).unwrap();
        let q = p.q_exp();
        let (v, _) = manifold_integral(&m, 0.6f64.ln(), |pt| (q * pt.t).exp() / pt.g, &cfg).unwrap();
        let s = settling_time(&m, 0.6, &cfg).unwrap();
        assert!((v / s.time - 1.0).abs() < 1e-10);
        assert!((m.end_settling_time() / s.time - 1.0).abs() < 1e-9);
    }
}
