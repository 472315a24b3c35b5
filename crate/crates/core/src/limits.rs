//! Boundary cases with closed or nearly closed forms, and the α-sweep that
//! approaches them.
//!
//! * α → 1: c = (r + Λ r²)^{−1/2} with r = θ/(1−θ).
//! * α → 0: c solves θ = (1 − e^{−c²})/c², and R = c.
//! * Λ = 0: v = (1 − ξ(1−α)/c)^{1/(1−α)}, R = c/(1−α), and c is the root of
//!
//! ```text
//!     f(c) = θ − 1 + ∫₀^{c²/(1−α)} e^{−z} (1 − (1−α) z/c²)^{1/(1−α)} dz,
//! ```
//!
//!   which increases from θ − 1 at c = 0 to θ as c → ∞.
//! * Λ = 1: the closure is explicit, v0 = 1 − θ.

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::fixedpoint::{solve_wave, ClosureResult};
use crate::model::{PhysicalParams, SolverConfig};
use crate::profiles::{solve_full, WaveSolution};
use crate::quad::Quadrature;
use crate::real::Real;
use crate::roots::{find_root, RootOptions};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LimitKind {
    AlphaOne,
    AlphaZero,
    LambdaZero,
    LambdaOne,
}

impl LimitKind {
    pub fn as_str(self) -> &'static str {
        match self {
            LimitKind::AlphaOne => "alpha-one",
            LimitKind::AlphaZero => "alpha-zero",
            LimitKind::LambdaZero => "lambda-zero",
            LimitKind::LambdaOne => "lambda-one",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LimitCase<T> {
    pub kind: LimitKind,
    pub params: PhysicalParams<T>,
}

/// Speed, and where finite the trailing interface and front value v0, of a
/// limit case.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LimitSolution<T> {
    pub c: T,
    pub r: Option<T>,
    pub v0: Option<T>,
}

impl<T: Real> LimitCase<T> {
    /// Checks that `params` actually sit on the named boundary.
    pub fn new(kind: LimitKind, params: PhysicalParams<T>) -> Result<Self> {
        let p = PhysicalParams::for_limits(params.alpha, params.lambda, params.theta)?;
        let (a, l) = (p.alpha, p.lambda);
        let ok = match kind {
            LimitKind::AlphaOne => a == T::one(),
            LimitKind::AlphaZero => a == T::zero(),
            LimitKind::LambdaZero => l == T::zero() && a < T::one(),
            LimitKind::LambdaOne => l == T::one() && a > T::zero() && a < T::one(),
        };
        if !ok {
            return Err(Error::InvalidParams(format!(
                "{} does not match alpha = {a}, lambda = {l}",
                kind.as_str()
            )));
        }
        Ok(Self { kind, params: p })
    }

    pub fn solve(&self, cfg: &SolverConfig<T>) -> Result<LimitSolution<T>> {
        let p = &self.params;
        match self.kind {
            LimitKind::AlphaOne => Ok(LimitSolution { c: speed_alpha_one(p.theta, p.lambda), r: None, v0: None }),
            LimitKind::AlphaZero => {
                let (c, r) = speed_alpha_zero(p.theta, cfg)?;
                Ok(LimitSolution { c, r: Some(r), v0: None })
            }
            LimitKind::LambdaZero => {
                let s = lambda_zero_solution(p, cfg)?;
                Ok(LimitSolution { c: s.c, r: Some(s.r), v0: Some(T::one()) })
            }
            LimitKind::LambdaOne => {
                let s = solve_wave(p, cfg)?;
                Ok(LimitSolution { c: s.c, r: Some(s.r), v0: Some(s.v0_star) })
            }
        }
    }
}

pub fn speed_alpha_one<T: Real>(theta: T, lambda: T) -> T {
    let r = theta / (T::one() - theta);
    (r + lambda * r * r).powf(T::lit(-0.5))
}

/// (1 − e^{−c²})/c², decreasing from 1 at c = 0.
pub fn theta_alpha_zero<T: Real>(c: T) -> T {
    if c == T::zero() {
        return T::one();
    }
    -(-c * c).exp_m1() / (c * c)
}

fn root_options<T: Real>(cfg: &SolverConfig<T>, scale: T) -> RootOptions<T> {
    RootOptions::new(T::lit(4.0) * T::epsilon() * scale, T::zero(), cfg.max_iter.max(200))
}

/// Speed and trailing interface (equal) for α = 0.
pub fn speed_alpha_zero<T: Real>(theta: T, cfg: &SolverConfig<T>) -> Result<(T, T)> {
    if !(theta > T::zero() && theta < T::one()) {
        return Err(Error::InvalidParams(format!("theta = {theta} must lie in (0, 1)")));
    }
    // 1 − c²θ > 0 bounds the root.
    let hi = T::one() / theta.sqrt();
    let lo = T::zero();
    let f = |c: T| theta_alpha_zero(c) - theta;
    let root = find_root(|c| Ok(f(c)), lo, hi, f(lo), f(hi), root_options(cfg, hi))?;
    Ok((root.x, root.x))
}

/// θ(c) at α = 1/2, Λ = 0: c⁻² − ½c⁻⁴(1 − e^{−2c²}).
pub fn theta_alpha_half<T: Real>(c: T) -> T {
    let c2 = c * c;
    let half = T::lit(0.5);
    T::one() / c2 + half * (-(T::lit(2.0) * c2)).exp_m1() / (c2 * c2)
}

pub fn lambda_zero_f<T: Real>(c: T, alpha: T, theta: T, cfg: &SolverConfig<T>) -> Result<T> {
    if !(alpha >= T::zero() && alpha < T::one()) {
        return Err(Error::InvalidParams(format!("alpha = {alpha} must lie in [0, 1)")));
    }
    if !(c > T::zero()) {
        return Ok(theta - T::one());
    }
    let one = T::one();
    let s = one - alpha;
    let c2 = c * c;
    // Past the underflow point of e^{−z} the integrand is exactly zero; a
    // wider range only lets the rule step over the peak at z = 0.
    let upper = (c2 / s).min(-T::min_positive_value().ln());
    let q = Quadrature::new(cfg.quad_tol.min(T::lit(1e-13)), T::zero());
    let r = q.integrate(
        |z: T| {
            let base = (one - s * z / c2).max(T::zero());
            (-z).exp() * base.powf(one / s)
        },
        T::zero(),
        upper,
    )?;
    Ok(theta - one + r.value)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LambdaZeroSolution<T> {
    pub c: T,
    pub r: T,
    pub alpha: T,
}

impl<T: Real> LambdaZeroSolution<T> {
    /// (1 − ξ(1−α)/c)^{1/(1−α)} on [0, R], zero beyond.
    pub fn v(&self, xi: T) -> T {
        let s = T::one() - self.alpha;
        (T::one() - xi * s / self.c).max(T::zero()).powf(T::one() / s)
    }

    pub fn vp(&self, xi: T) -> T {
        let s = T::one() - self.alpha;
        -(T::one() - xi * s / self.c).max(T::zero()).powf(self.alpha / s) / self.c
    }
}

pub fn lambda_zero_solution<T: Real>(p: &PhysicalParams<T>, cfg: &SolverConfig<T>) -> Result<LambdaZeroSolution<T>> {
    let (a, th) = (p.alpha, p.theta);
    let f = |c: T| lambda_zero_f(c, a, th, cfg);
    let two = T::lit(2.0);
    let (mut lo, mut hi) = (T::one(), T::one());
    let mut f_lo = f(lo)?;
    let mut f_hi = f_lo;
    for _ in 0..200 {
        if f_lo < T::zero() {
            break;
        }
        hi = lo;
        f_hi = f_lo;
        lo = lo / two;
        f_lo = f(lo)?;
    }
    for _ in 0..200 {
        if f_hi > T::zero() {
            break;
        }
        lo = hi;
        f_lo = f_hi;
        hi = hi * two;
        f_hi = f(hi)?;
    }
    let root = find_root(f, lo, hi, f_lo, f_hi, root_options(cfg, hi))?;
    let c = root.x;
    Ok(LambdaZeroSolution { c, r: c / (T::one() - a), alpha: a })
}

#[derive(Debug)]
pub struct SweepRow<T, R> {
    pub alpha: T,
    pub outcome: Result<R>,
}

fn sweep_with<T, R, F>(p_base: &PhysicalParams<T>, alphas: &[T], f: F) -> Vec<SweepRow<T, R>>
where
    T: Real,
    R: Send,
    F: Fn(&PhysicalParams<T>) -> Result<R> + Sync,
{
    let mut sorted = alphas.to_vec();
    sorted.sort_by(|a, b| a.partial_cmp(b).unwrap_or(std::cmp::Ordering::Equal));
    sorted
        .par_iter()
        .map(|&alpha| {
            let outcome = PhysicalParams::new(alpha, p_base.lambda, p_base.theta).and_then(|p| f(&p));
            SweepRow { alpha, outcome }
        })
        .collect()
}

/// Closure results at each α, sorted by α. A failing row is recorded and
/// the others still run.
pub fn sweep_alpha<T: Real>(
    p_base: &PhysicalParams<T>,
    alphas: &[T],
    cfg: &SolverConfig<T>,
) -> Vec<SweepRow<T, ClosureResult<T>>> {
    sweep_with(p_base, alphas, |p| solve_wave(p, cfg))
}

/// As [`sweep_alpha`], with profiles and diagnostics for every row.
pub fn sweep_alpha_full<T: Real>(
    p_base: &PhysicalParams<T>,
    alphas: &[T],
    cfg: &SolverConfig<T>,
) -> Vec<SweepRow<T, WaveSolution<T>>> {
    sweep_with(p_base, alphas, |p| solve_full(p, cfg))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn alpha_one_closed_form() {
        assert!((speed_alpha_one(0.5, 1.0) - 0.5f64.sqrt()).abs() < 1e-16);
        assert!((speed_alpha_one(0.5f64, 0.0) - 1.0).abs() < 1e-16);
    }

    #[test]
    fn alpha_zero_inverts_theta() {
        let cfg = SolverConfig::default();
        let theta = -(-1.0f64).exp_m1();
        let (c, r) = speed_alpha_zero(theta, &cfg).unwrap();
        assert!((c - 1.0).abs() < 1e-14);
        assert_eq!(c, r);
        assert!(1.0 - c * c * theta > 0.0);
    }

    #[test]
    fn lambda_zero_profile_endpoints() {
        let s = LambdaZeroSolution { c: 1.3f64, r: 2.6, alpha: 0.5 };
        assert_eq!(s.v(0.0), 1.0);
        assert!(s.v(s.r).abs() < 1e-15);
        assert!(s.vp(s.r).abs() < 1e-15);
    }

    #[test]
    fn mismatched_limit_kind_is_rejected() {
        let p = PhysicalParams::for_limits(0.5, 1.0, 0.5).unwrap();
        assert!(LimitCase::new(LimitKind::AlphaZero, p).is_err());
        assert!(LimitCase::new(LimitKind::LambdaOne, p).is_ok());
    }
}
