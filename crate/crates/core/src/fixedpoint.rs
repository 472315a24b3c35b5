//! Closing the coupled system: choose v0 so that the temperature
//! reconstructed from v equals θ at the ignition front.
//!
//! With K = ∫₀^R e^{−cs}(−v') ds and M = ∫₀^R e^{−cs} v ds (related by
//! K = v0 − cM), the defect whose root we seek is
//!
//! ```text
//!     Λ < 1:  G(v0) = 1 − θ + (1 − Λ) K − v0
//!     Λ > 1:  G(v0) = (1 − θ − c (1 − Λ) M)/Λ − v0
//!     Λ = 1:  G(v0) = 1 − θ − v0
//! ```
//!
//! G changes sign across the admissible interval I, so plain bracketing
//! converges. Both integrals are taken over the manifold in x, where
//! s = R − T(x).

use crate::error::{Error, Result};
use crate::model::{interval_i, Bracket, ClosureInterval, ClosureMode, PhysicalParams, SolverConfig};
use crate::manifold::ManifoldCurve;
use crate::real::Real;
use crate::roots::{find_root, RootOptions};
use crate::settling::{manifold_integral, trailing_interface};
use crate::speed::SpeedResult;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Branch {
    LambdaBelowOne,
    LambdaAboveOne,
    LambdaEqualOne,
}

impl Branch {
    pub fn of<T: Real>(p: &PhysicalParams<T>) -> Self {
        if p.lambda < T::one() {
            Branch::LambdaBelowOne
        } else if p.lambda > T::one() {
            Branch::LambdaAboveOne
        } else {
            Branch::LambdaEqualOne
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ClosureResult<T> {
    pub v0_star: T,
    pub c: T,
    pub r: T,
    pub residual: T,
    pub branch: Branch,
    pub iterations: usize,
}

/// Everything determined by v0 alone: the scalar free-boundary solution
/// and the two weighted integrals that enter the closure.
#[derive(Debug, Clone)]
pub struct ScalarWave<T> {
    pub v0: T,
    pub c: T,
    pub r: T,
    pub speed: SpeedResult<T>,
    pub manifold: ManifoldCurve<T>,
    /// ∫₀^R e^{−cs} (−v'(s)) ds.
    pub k_integral: T,
    /// ∫₀^R e^{−cs} v(s) ds.
    pub m_integral: T,
}

/// K and M for a manifold grown to v0 with settling time `r` to v0.
pub fn weighted_integrals<T: Real>(m: &ManifoldCurve<T>, r: T, cfg: &SolverConfig<T>) -> Result<(T, T)> {
    let (c, q) = (m.c, m.params.q_exp());
    let t_end = m.log_x_max();
    let (k, _) = manifold_integral(m, t_end, |pt| (-c * (r - pt.time)).exp() * pt.x, cfg)?;
    let (mm, _) = manifold_integral(
        m,
        t_end,
        |pt| (-c * (r - pt.time)).exp() * ((T::one() + q) * pt.t).exp() / pt.g,
        cfg,
    )?;
    Ok((k, mm))
}

pub fn scalar_wave<T: Real>(p: &PhysicalParams<T>, v0: T, cfg: &SolverConfig<T>) -> Result<ScalarWave<T>> {
    let iface = trailing_interface(p, v0, cfg)?;
    let (k_integral, m_integral) = weighted_integrals(&iface.manifold, iface.r, cfg)?;
    Ok(ScalarWave {
        v0,
        c: iface.c,
        r: iface.r,
        speed: iface.speed,
        manifold: iface.manifold,
        k_integral,
        m_integral,
    })
}

/// G(v0) from an already solved scalar wave, dispatching on Λ.
pub fn defect_of<T: Real>(p: &PhysicalParams<T>, w: &ScalarWave<T>) -> T {
    closure_defect(p, w.v0, w.c, w.k_integral, w.m_integral)
}

/// G from its ingredients: v0, c and the two weighted integrals K, M.
pub fn closure_defect<T: Real>(p: &PhysicalParams<T>, v0: T, c: T, k: T, m: T) -> T {
    let one = T::one();
    match Branch::of(p) {
        Branch::LambdaBelowOne => one - p.theta + (one - p.lambda) * k - v0,
        Branch::LambdaAboveOne => (one - p.theta - c * (one - p.lambda) * m) / p.lambda - v0,
        Branch::LambdaEqualOne => one - p.theta - v0,
    }
}

/// Unprojected fixed-point defect for Λ < 1.
pub fn residual_phi<T: Real>(p: &PhysicalParams<T>, v0: T, cfg: &SolverConfig<T>) -> Result<T> {
    if Branch::of(p) != Branch::LambdaBelowOne {
        return Err(Error::Precondition("residual_phi needs lambda < 1".into()));
    }
    Ok(defect_of(p, &scalar_wave(p, v0, cfg)?))
}

/// Unprojected fixed-point defect for Λ > 1.
pub fn residual_psi<T: Real>(p: &PhysicalParams<T>, v0: T, cfg: &SolverConfig<T>) -> Result<T> {
    if Branch::of(p) != Branch::LambdaAboveOne {
        return Err(Error::Precondition("residual_psi needs lambda > 1".into()));
    }
    Ok(defect_of(p, &scalar_wave(p, v0, cfg)?))
}

/// The projection onto I.
pub fn project<T: Real>(p: &PhysicalParams<T>, v: T) -> T {
    match interval_i(p) {
        ClosureInterval::Range(b) => b.clamp(v),
        ClosureInterval::Point(x) => x,
    }
}

fn finish<T: Real>(p: &PhysicalParams<T>, w: &ScalarWave<T>, residual: T, iterations: usize) -> ClosureResult<T> {
    ClosureResult { v0_star: w.v0, c: w.c, r: w.r, residual, branch: Branch::of(p), iterations }
}

/// Bracketed solve of G(v0) = 0 on a sub-interval of I. Exposed so that
/// callers can restart from perturbed brackets.
pub fn solve_closure_in<T: Real>(
    p: &PhysicalParams<T>,
    bracket: Bracket<T>,
    cfg: &SolverConfig<T>,
) -> Result<(ClosureResult<T>, ScalarWave<T>)> {
    let lo = scalar_wave(p, bracket.lo, cfg)?;
    let hi = scalar_wave(p, bracket.hi, cfg)?;
    let (g_lo, g_hi) = (defect_of(p, &lo), defect_of(p, &hi));
    let opts = RootOptions::new(cfg.v0_bisect_tol * T::lit(1e-3), cfg.v0_bisect_tol / T::lit(2.0), cfg.max_iter);
    let root = find_root(|v| Ok(defect_of(p, &scalar_wave(p, v, cfg)?)), bracket.lo, bracket.hi, g_lo, g_hi, opts)?;
    let w = if root.x == bracket.lo {
        lo
    } else if root.x == bracket.hi {
        hi
    } else {
        scalar_wave(p, root.x, cfg)?
    };
    Ok((finish(p, &w, root.fx, root.iterations), w))
}

fn picard<T: Real>(p: &PhysicalParams<T>, cfg: &SolverConfig<T>) -> Result<(ClosureResult<T>, ScalarWave<T>)> {
    let i = interval_i(p);
    let mut v = (i.lo() + i.hi()) / T::lit(2.0);
    for it in 1..=cfg.max_iter {
        let w = scalar_wave(p, v, cfg)?;
        let g = defect_of(p, &w);
        let next = project(p, v + g);
        if (next - v).abs() <= cfg.v0_bisect_tol {
            return Ok((finish(p, &w, g, it), w));
        }
        v = next;
    }
    Err(Error::NoConvergence { what: "projected fixed-point iteration", iterations: cfg.max_iter })
}

/// Solves the closure and also returns the scalar wave at v0*.
pub fn solve_closure<T: Real>(p: &PhysicalParams<T>, cfg: &SolverConfig<T>) -> Result<(ClosureResult<T>, ScalarWave<T>)> {
    p.validate()?;
    cfg.validate()?;
    match interval_i(p) {
        ClosureInterval::Point(v0) => {
            let w = scalar_wave(p, v0, cfg)?;
            Ok((finish(p, &w, defect_of(p, &w), 0), w))
        }
        ClosureInterval::Range(b) => match cfg.closure_mode {
            ClosureMode::Bisection => solve_closure_in(p, b, cfg),
            ClosureMode::Picard => picard(p, cfg),
        },
    }
}

pub fn solve_wave<T: Real>(p: &PhysicalParams<T>, cfg: &SolverConfig<T>) -> Result<ClosureResult<T>> {
    Ok(solve_closure(p, cfg)?.0)
}
