//! Problem parameters, the planar vector fields, and the closed-form curves
//! and brackets that the solver stages lean on.
//!
//! Writing x = v and y = v' turns the traveling-wave equation
//! Λv'' − cv' = v^α into the planar system
//!
//! ```text
//!     x' = y,    Λ y' = c y + x^α,
//! ```
//!
//! posed in the quadrant Q = {x ≥ 0, y ≤ 0}. Its stable manifold at the
//! origin is the graph y = v'(v) of the wave profile.

use crate::error::{Error, Result};
use crate::real::Real;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhysicalParams<T> {
    /// Reaction order.
    pub alpha: T,
    /// Inverse Lewis number.
    pub lambda: T,
    /// Ignition temperature.
    pub theta: T,
}

impl<T: Real> PhysicalParams<T> {
    /// Parameters for the main solver path: 0 < α < 1, Λ > 0, 0 < θ < 1.
    pub fn new(alpha: T, lambda: T, theta: T) -> Result<Self> {
        let p = Self { alpha, lambda, theta };
        p.validate()?;
        Ok(p)
    }

    /// Parameters for the limit oracles, which also accept α ∈ {0, 1}
    /// and Λ = 0.
    pub fn for_limits(alpha: T, lambda: T, theta: T) -> Result<Self> {
        let p = Self { alpha, lambda, theta };
        if !(alpha >= T::zero() && alpha <= T::one()) {
            return Err(Error::InvalidParams(format!("alpha = {alpha} must lie in [0, 1]")));
        }
        if !(lambda >= T::zero()) || !lambda.is_finite() {
            return Err(Error::InvalidParams(format!("lambda = {lambda} must be finite and >= 0")));
        }
        p.check_theta()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.alpha > T::zero() && self.alpha < T::one()) {
            return Err(Error::InvalidParams(format!("alpha = {} must lie in (0, 1)", self.alpha)));
        }
        if !(self.lambda > T::zero()) || !self.lambda.is_finite() {
            return Err(Error::InvalidParams(format!(
                "lambda = {} must be finite and > 0",
                self.lambda
            )));
        }
        self.check_theta()
    }

    fn check_theta(&self) -> Result<()> {
        if !(self.theta > T::zero() && self.theta < T::one()) {
            return Err(Error::InvalidParams(format!("theta = {} must lie in (0, 1)", self.theta)));
        }
        Ok(())
    }

    /// (1+α)/2, the growth exponent of the manifold at the origin.
    pub fn p_exp(&self) -> T {
        (T::one() + self.alpha) / T::lit(2.0)
    }

    /// (1−α)/2, the exponent of the settling time.
    pub fn q_exp(&self) -> T {
        (T::one() - self.alpha) / T::lit(2.0)
    }

    /// k = (2/((1+α)Λ))^{1/2}, so that y ≈ −k x^{(1+α)/2} near the origin.
    pub fn tail_coefficient(&self) -> T {
        (T::lit(2.0) / ((T::one() + self.alpha) * self.lambda)).sqrt()
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SolverConfig<T> {
    pub ode_rel_tol: T,
    pub ode_abs_tol: T,
    /// Where the series expansion of the manifold hands off to numerical
    /// integration. The solver may hand off earlier if the series has not
    /// converged to machine precision there.
    pub seed_x: T,
    pub c_bisect_tol: T,
    pub v0_bisect_tol: T,
    pub quad_tol: T,
    pub max_iter: usize,
    /// Number of ξ-grid points in a reconstructed profile.
    pub profile_points: usize,
    pub closure_mode: ClosureMode,
}

/// How the outer closure equation is solved.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum ClosureMode {
    #[default]
    Bisection,
    /// Projected fixed-point iteration v0 ← P(Φ(v0)). Experimental: the
    /// map is not known to be a contraction.
    Picard,
}

impl<T: Real> Default for SolverConfig<T> {
    fn default() -> Self {
        Self {
            ode_rel_tol: T::lit(1e-10),
            ode_abs_tol: T::lit(1e-14),
            seed_x: T::lit(1e-8),
            c_bisect_tol: T::lit(1e-13),
            v0_bisect_tol: T::lit(1e-10),
            quad_tol: T::lit(1e-10),
            max_iter: 200,
            profile_points: 2048,
            closure_mode: ClosureMode::Bisection,
        }
    }
}

impl<T: Real> SolverConfig<T> {
    pub fn validate(&self) -> Result<()> {
        let positive = [
            ("ode_rel_tol", self.ode_rel_tol),
            ("ode_abs_tol", self.ode_abs_tol),
            ("seed_x", self.seed_x),
            ("c_bisect_tol", self.c_bisect_tol),
            ("v0_bisect_tol", self.v0_bisect_tol),
            ("quad_tol", self.quad_tol),
        ];
        for (name, v) in positive {
            if !(v > T::zero()) || !v.is_finite() {
                return Err(Error::InvalidParams(format!("{name} = {v} must be positive")));
            }
        }
        if self.max_iter == 0 {
            return Err(Error::InvalidParams("max_iter must be positive".into()));
        }
        if self.profile_points < 16 {
            return Err(Error::InvalidParams("profile_points must be at least 16".into()));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct PhaseState<T> {
    pub x: T,
    pub y: T,
}

impl<T> PhaseState<T> {
    pub fn new(x: T, y: T) -> Self {
        Self { x, y }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Bracket<T> {
    pub lo: T,
    pub hi: T,
}

impl<T: Real> Bracket<T> {
    pub fn new(lo: T, hi: T) -> Result<Self> {
        if lo < hi {
            Ok(Self { lo, hi })
        } else {
            Err(Error::Precondition(format!("bracket [{lo}, {hi}] is empty")))
        }
    }

    pub fn width(&self) -> T {
        self.hi - self.lo
    }

    pub fn midpoint(&self) -> T {
        self.lo + (self.hi - self.lo) / T::lit(2.0)
    }

    pub fn contains(&self, x: T) -> bool {
        self.lo <= x && x <= self.hi
    }

    pub fn contains_strictly(&self, x: T) -> bool {
        self.lo < x && x < self.hi
    }

    pub fn clamp(&self, x: T) -> T {
        x.max(self.lo).min(self.hi)
    }
}

/// The admissible set for v0 = v(0): an interval when Λ ≠ 1, a single
/// point when Λ = 1.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ClosureInterval<T> {
    Range(Bracket<T>),
    Point(T),
}

impl<T: Real> ClosureInterval<T> {
    pub fn contains(&self, v: T) -> bool {
        match self {
            ClosureInterval::Range(b) => b.contains(v),
            ClosureInterval::Point(x) => v == *x,
        }
    }

    pub fn lo(&self) -> T {
        match self {
            ClosureInterval::Range(b) => b.lo,
            ClosureInterval::Point(x) => *x,
        }
    }

    pub fn hi(&self) -> T {
        match self {
            ClosureInterval::Range(b) => b.hi,
            ClosureInterval::Point(x) => *x,
        }
    }
}

fn check_nonneg<T: Real>(what: &'static str, x: T) -> Result<()> {
    if x >= T::zero() {
        Ok(())
    } else {
        Err(Error::Domain { what, value: x.as_f64() })
    }
}

/// X_c(x, y) = (y, (c y + x^α)/Λ) on the quadrant.
pub fn field_xc<T: Real>(p: &PhysicalParams<T>, c: T, s: PhaseState<T>) -> Result<(T, T)> {
    check_nonneg("x", s.x)?;
    check_nonneg("c", c)?;
    Ok((s.y, (c * s.y + s.x.powf(p.alpha)) / p.lambda))
}

/// The odd extension of X_c to the whole plane, with sign(0) = 0.
pub fn field_extended<T: Real>(p: &PhysicalParams<T>, c: T, s: PhaseState<T>) -> (T, T) {
    let reaction = if s.x > T::zero() {
        s.x.powf(p.alpha)
    } else if s.x < T::zero() {
        -(-s.x).powf(p.alpha)
    } else {
        T::zero()
    };
    (s.y, (c * s.y + reaction) / p.lambda)
}

/// y0(x) = −k x^{(1+α)/2}: the stable manifold at c = 0 and a lower
/// envelope for every c > 0.
pub fn curve_l0<T: Real>(p: &PhysicalParams<T>, x: T) -> Result<T> {
    check_nonneg("x", x)?;
    Ok(-p.tail_coefficient() * x.powf(p.p_exp()))
}

/// y0(x) + (c/Λ)x: the upper envelope of the manifold.
pub fn curve_lc<T: Real>(p: &PhysicalParams<T>, c: T, x: T) -> Result<T> {
    check_nonneg("c", c)?;
    Ok(curve_l0(p, x)? + c / p.lambda * x)
}

/// Where the upper envelope returns to y = 0. Infinite at c = 0.
pub fn crossing_x1<T: Real>(p: &PhysicalParams<T>, c: T) -> T {
    if c <= T::zero() {
        return T::infinity();
    }
    let base = T::lit(2.0) * p.lambda / ((T::one() + p.alpha) * c * c);
    base.powf(T::one() / (T::one() - p.alpha))
}

/// −x^α/c, below which the manifold never dips for c > 0.
pub fn lower_estimate<T: Real>(p: &PhysicalParams<T>, c: T, x: T) -> T {
    -x.powf(p.alpha) / c
}

fn lower_speed<T: Real>(p: &PhysicalParams<T>, v0: T) -> T {
    (T::lit(2.0) * p.lambda / (T::one() + p.alpha)).sqrt() * v0.powf(p.p_exp())
}

/// Proven bounds [c−, c+] on the speed c(v0), with c+ the smaller of the
/// two available upper bounds.
pub fn c_brackets<T: Real>(p: &PhysicalParams<T>, v0: T) -> Result<Bracket<T>> {
    if !(v0 > T::zero() && v0 < T::one()) {
        return Err(Error::Precondition(format!("v0 = {v0} must lie in (0, 1)")));
    }
    let lo = lower_speed(p, v0);
    let first = lo / (T::one() - v0);
    let second = (p.lambda / (T::one() - v0)).sqrt() * v0.powf(p.alpha / T::lit(2.0));
    Bracket::new(lo, first.min(second))
}

pub fn interval_i<T: Real>(p: &PhysicalParams<T>) -> ClosureInterval<T> {
    let (one, th, l) = (T::one(), p.theta, p.lambda);
    if l < one {
        ClosureInterval::Range(Bracket { lo: one - th, hi: one - l * th })
    } else if l > one {
        ClosureInterval::Range(Bracket { lo: (one - th) / l, hi: one - th / l })
    } else {
        ClosureInterval::Point(one - th)
    }
}

/// Settling time along y0, which bounds T(x, c) from below:
/// ((2(1+α)Λ)^{1/2}/(1−α)) x^{(1−α)/2}.
pub fn settling_lower_bound<T: Real>(p: &PhysicalParams<T>, x: T) -> T {
    let two = T::lit(2.0);
    (two * (T::one() + p.alpha) * p.lambda).sqrt() / (T::one() - p.alpha) * x.powf(p.q_exp())
}

/// Upper bound on T(x, c), valid only below the crossing x1(c).
pub fn settling_upper_bound<T: Real>(p: &PhysicalParams<T>, c: T, x: T) -> Option<T> {
    if x >= crossing_x1(p, c) {
        return None;
    }
    let shrink = T::one() - c / p.lambda / p.tail_coefficient() * x.powf(p.q_exp());
    Some(settling_lower_bound(p, x) / shrink)
}

/// A(α) = 2^{3/2}/(1+α)^{1/2}.
pub fn a_alpha<T: Real>(alpha: T) -> T {
    T::lit(2.0).powf(T::lit(1.5)) / (T::one() + alpha).sqrt()
}

/// Bounds (lower, upper) on the trailing interface R(v0).
pub fn r_bounds<T: Real>(p: &PhysicalParams<T>, v0: T) -> (T, T) {
    let one = T::one();
    let lower = settling_lower_bound(p, v0);
    let upper = T::lit(2.0) * p.lambda.sqrt() * a_alpha(p.alpha) / (one - p.alpha)
        * v0.powf(p.q_exp())
        / (one - v0);
    (lower, upper)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn params(a: f64, l: f64) -> PhysicalParams<f64> {
        PhysicalParams { alpha: a, lambda: l, theta: 0.5 }
    }

    #[test]
    fn field_values() {
        let p = params(0.5, 2.0);
        assert_eq!(field_xc(&p, 1.0, PhaseState::new(4.0, 0.0)).unwrap(), (0.0, 1.0));
        assert_eq!(field_xc(&p, 1.0, PhaseState::new(0.0, 0.0)).unwrap(), (0.0, 0.0));
        let lin = params(1.0, 1.0);
        assert_eq!(field_xc(&lin, 0.0, PhaseState::new(1.0, -1.0)).unwrap(), (-1.0, 1.0));
        assert!(field_xc(&p, 1.0, PhaseState::new(-1.0, 0.0)).is_err());
        let half = params(0.5, 1.0);
        assert_eq!(field_extended(&half, 0.0, PhaseState::new(-4.0, 0.0)), (0.0, -2.0));
        assert_eq!(field_extended(&half, 3.0, PhaseState::new(0.0, 0.0)), (0.0, 0.0));
    }

    #[test]
    fn curves() {
        let lin = params(1.0, 1.0);
        assert_eq!(curve_l0(&lin, 1.0).unwrap(), -1.0);
        assert_eq!(curve_l0(&lin, 0.0).unwrap(), 0.0);
        let p = params(0.5, 2.0);
        assert!((curve_l0(&p, 1.0).unwrap() + (2.0f64 / 3.0).sqrt()).abs() < 1e-15);
        assert!(curve_l0(&p, -1.0).is_err());
        let q = params(0.5, 1.0);
        let x1 = crossing_x1(&q, 1.0);
        assert!((x1 - 16.0 / 9.0).abs() < 1e-14);
        assert!(curve_lc(&q, 1.0, x1).unwrap().abs() < 1e-14);
        assert!(crossing_x1(&q, 0.0).is_infinite());
        assert_eq!(curve_lc(&q, 0.0, 0.3).unwrap(), curve_l0(&q, 0.3).unwrap());
    }

    #[test]
    fn brackets_and_intervals() {
        let lin = params(1.0, 1.0);
        let b = c_brackets(&lin, 0.5).unwrap();
        assert!((b.lo - 0.5).abs() < 1e-15 && (b.hi - 1.0).abs() < 1e-15);
        let q = params(0.5, 1.0);
        let b = c_brackets(&q, 0.5).unwrap();
        assert!((b.lo - 0.686589047).abs() < 1e-8);
        assert!(c_brackets(&q, 1.0).is_err());

        let with = |l: f64| PhysicalParams { alpha: 0.5, lambda: l, theta: 0.5 };
        assert_eq!(interval_i(&with(0.5)), ClosureInterval::Range(Bracket { lo: 0.5, hi: 0.75 }));
        assert_eq!(interval_i(&with(2.0)), ClosureInterval::Range(Bracket { lo: 0.25, hi: 0.75 }));
        assert_eq!(interval_i(&with(1.0)), ClosureInterval::Point(0.5));
    }

    #[test]
    fn validation() {
        assert!(PhysicalParams::new(1.5, 1.0, 0.5).is_err());
        assert!(PhysicalParams::new(0.5, 0.0, 0.5).is_err());
        assert!(PhysicalParams::new(0.5, 1.0, 1.0).is_err());
        assert!(PhysicalParams::for_limits(0.0, 0.0, 0.5).is_ok());
        assert!(PhysicalParams::for_limits(1.0, 2.0, 0.5).is_ok());
        assert!(SolverConfig::<f64>::default().validate().is_ok());
    }

    #[test]
    fn settling_bounds_at_zero_speed_coincide() {
        let p = params(0.5, 1.0);
        let lo = settling_lower_bound(&p, 0.3);
        assert_eq!(settling_upper_bound(&p, 0.0, 0.3), Some(lo));
        assert!(settling_upper_bound(&p, 1.0, 2.0).is_none());
    }
}
