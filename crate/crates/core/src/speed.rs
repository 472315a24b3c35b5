//! The speed c(v0): the unique c at which the stable manifold passes
//! through the initial state (v0, −(c/Λ)(1 − v0)).

use std::cell::Cell;

use crate::error::{Error, Result};
use crate::manifold::grow_manifold_warm;
use crate::model::{c_brackets, Bracket, PhysicalParams, SolverConfig};
use crate::real::Real;
use crate::roots::{find_root, RootOptions};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpeedResult<T> {
    pub c: T,
    pub psi_residual: T,
    pub iterations: usize,
    pub bracket_used: Bracket<T>,
}

fn check_v0<T: Real>(v0: T) -> Result<()> {
    if v0 > T::zero() && v0 < T::one() {
        Ok(())
    } else {
        Err(Error::Precondition(format!("v0 = {v0} must lie in (0, 1)")))
    }
}

fn psi_warm<T: Real>(p: &PhysicalParams<T>, v0: T, c: T, cfg: &SolverConfig<T>, warm: &Cell<Option<T>>) -> Result<T> {
    let m = grow_manifold_warm(p, c, v0, cfg, warm.get())?;
    warm.set(Some(m.first_step));
    Ok(m.end_state().y + c / p.lambda * (T::one() - v0))
}

/// ψ(v0, c) = y_c(v0) + (c/Λ)(1 − v0), increasing in c.
pub fn psi<T: Real>(p: &PhysicalParams<T>, v0: T, c: T, cfg: &SolverConfig<T>) -> Result<T> {
    check_v0(v0)?;
    psi_warm(p, v0, c, cfg, &Cell::new(None))
}

pub fn solve_speed<T: Real>(p: &PhysicalParams<T>, v0: T, cfg: &SolverConfig<T>) -> Result<SpeedResult<T>> {
    check_v0(v0)?;
    let bracket = c_brackets(p, v0)?;
    let warm = Cell::new(None);
    let f_lo = psi_warm(p, v0, bracket.lo, cfg, &warm)?;
    let f_hi = psi_warm(p, v0, bracket.hi, cfg, &warm)?;
    let scale = (T::one() - v0) / p.lambda;
    let opts = RootOptions::new(cfg.c_bisect_tol * bracket.hi, cfg.c_bisect_tol * scale, cfg.max_iter);
    let root = find_root(|c| psi_warm(p, v0, c, cfg, &warm), bracket.lo, bracket.hi, f_lo, f_hi, opts)?;
    Ok(SpeedResult { c: root.x, psi_residual: root.fx, iterations: root.iterations, bracket_used: bracket })
}
