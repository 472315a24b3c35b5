//! Bracketed scalar root finding: bisection until the bracket is narrow,
//! then the Illinois variant of regula falsi.

use crate::error::{Error, Result};
use crate::model::Bracket;
use crate::real::Real;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RootResult<T> {
    pub x: T,
    pub fx: T,
    pub iterations: usize,
    /// Final bracket, still straddling the sign change.
    pub bracket: Bracket<T>,
}

#[derive(Debug, Clone, Copy)]
pub struct RootOptions<T> {
    /// Stop once the bracket is narrower than this.
    pub xtol: T,
    /// Stop once |f| at the newest iterate is at most this.
    pub ftol: T,
    pub max_iter: usize,
    /// Relative bracket width below which regula falsi replaces bisection.
    pub switch_rel: T,
}

impl<T: Real> RootOptions<T> {
    pub fn new(xtol: T, ftol: T, max_iter: usize) -> Self {
        Self { xtol, ftol, max_iter, switch_rel: T::lit(1e-3) }
    }
}

/// Finds a zero of `f` in `[lo, hi]` given the endpoint values, which must
/// have opposite signs (or one of them be zero).
pub fn find_root<T: Real, F>(
    mut f: F,
    mut lo: T,
    mut hi: T,
    mut f_lo: T,
    mut f_hi: T,
    opts: RootOptions<T>,
) -> Result<RootResult<T>>
where
    F: FnMut(T) -> Result<T>,
{
    if f_lo == T::zero() || f_hi == T::zero() {
        let (x, fx) = if f_lo == T::zero() { (lo, f_lo) } else { (hi, f_hi) };
        return Ok(RootResult { x, fx, iterations: 0, bracket: Bracket { lo, hi } });
    }
    if (f_lo > T::zero()) == (f_hi > T::zero()) || f_lo.is_nan() || f_hi.is_nan() {
        return Err(Error::NoSignChange {
            lo: lo.as_f64(),
            hi: hi.as_f64(),
            f_lo: f_lo.as_f64(),
            f_hi: f_hi.as_f64(),
        });
    }
    let two = T::lit(2.0);
    // Which endpoint survived the previous regula falsi step (-1 lo, 1 hi).
    let mut kept = 0i8;
    let mut best = if f_lo.abs() <= f_hi.abs() { (lo, f_lo) } else { (hi, f_hi) };
    for it in 1..=opts.max_iter {
        let width = hi - lo;
        let scale = lo.abs().max(hi.abs()).max(T::min_positive_value());
        let mid = lo + width / two;
        let x = if width > opts.switch_rel * scale {
            kept = 0;
            mid
        } else {
            let s = (lo * f_hi - hi * f_lo) / (f_hi - f_lo);
            if s > lo && s < hi {
                s
            } else {
                mid
            }
        };
        let fx = f(x)?;
        if fx.is_nan() {
            return Err(Error::Domain { what: "root function value", value: f64::NAN });
        }
        if fx.abs() < best.1.abs() {
            best = (x, fx);
        }
        if fx == T::zero() {
            return Ok(RootResult { x, fx, iterations: it, bracket: Bracket { lo, hi } });
        }
        if (fx > T::zero()) == (f_lo > T::zero()) {
            lo = x;
            f_lo = fx;
            if kept == 1 {
                f_hi = f_hi / two;
            }
            kept = 1;
        } else {
            hi = x;
            f_hi = fx;
            if kept == -1 {
                f_lo = f_lo / two;
            }
            kept = -1;
        }
        if fx.abs() <= opts.ftol || hi - lo <= opts.xtol {
            return Ok(RootResult { x: best.0, fx: best.1, iterations: it, bracket: Bracket { lo, hi } });
        }
    }
    Err(Error::NoConvergence { what: "bracketed root", iterations: opts.max_iter })
}
