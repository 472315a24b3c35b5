//! Dormand–Prince 5(4) with FSAL and standard step-size control.

use crate::error::{Error, Result};
use crate::real::Real;

#[derive(Debug, Clone, Copy)]
pub struct Dopri5<T> {
    pub rtol: T,
    pub atol: T,
    pub h_init: Option<T>,
    pub h_max: T,
    pub max_steps: usize,
}

impl<T: Real> Dopri5<T> {
    pub fn new(rtol: T, atol: T) -> Self {
        Self { rtol, atol, h_init: None, h_max: T::infinity(), max_steps: 1_000_000 }
    }

    pub fn with_h_max(mut self, h_max: T) -> Self {
        self.h_max = h_max;
        self
    }

    pub fn with_h_init(mut self, h: Option<T>) -> Self {
        self.h_init = h;
        self
    }
}

pub struct Solution<T, const N: usize> {
    pub y: [T; N],
    /// First accepted step size, useful to warm-start a neighbouring solve.
    pub first_step: T,
    pub steps: usize,
}

/// Control returned by the step observer.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Flow {
    Continue,
    Stop,
}

fn axpy<T: Real, const N: usize>(y: &[T; N], terms: &[(T, &[T; N])]) -> [T; N] {
    let mut out = *y;
    for (c, k) in terms {
        for i in 0..N {
            out[i] = out[i] + *c * k[i];
        }
    }
    out
}

impl<T: Real> Dopri5<T> {
    fn error_norm<const N: usize>(&self, y0: &[T; N], y1: &[T; N], err: &[T; N]) -> T {
        let mut acc = T::zero();
        for i in 0..N {
            let sc = self.atol + self.rtol * y0[i].abs().max(y1[i].abs());
            let e = err[i] / sc;
            acc = acc + e * e;
        }
        (acc / T::from_usize(N).unwrap()).sqrt()
    }

    fn initial_step<const N: usize, F>(&self, f: &mut F, t0: T, y0: &[T; N], f0: &[T; N], dir: T) -> T
    where
        F: FnMut(T, &[T; N]) -> [T; N],
    {
        // Hairer, Nørsett & Wanner's starting-step heuristic.
        let mut d0 = T::zero();
        let mut d1 = T::zero();
        for i in 0..N {
            let sc = self.atol + self.rtol * y0[i].abs();
            d0 = d0 + (y0[i] / sc).powi(2);
            d1 = d1 + (f0[i] / sc).powi(2);
        }
        let n = T::from_usize(N).unwrap();
        let (d0, d1) = ((d0 / n).sqrt(), (d1 / n).sqrt());
        let tiny = T::lit(1e-5);
        let h0 = if d0 < tiny || d1 < tiny { T::lit(1e-6) } else { T::lit(0.01) * d0 / d1 };
        let h0 = h0.min(self.h_max);
        let y1 = axpy(y0, &[(dir * h0, f0)]);
        let f1 = f(t0 + dir * h0, &y1);
        let mut d2 = T::zero();
        for i in 0..N {
            let sc = self.atol + self.rtol * y0[i].abs();
            d2 = d2 + ((f1[i] - f0[i]) / sc).powi(2);
        }
        let d2 = (d2 / n).sqrt() / h0;
        let h1 = if d1.max(d2) <= T::lit(1e-15) {
            (h0 * T::lit(1e-3)).max(T::lit(1e-6))
        } else {
            (T::lit(0.01) / d1.max(d2)).powf(T::lit(0.2))
        };
        (T::lit(100.0) * h0).min(h1).min(self.h_max)
    }

    /// Integrates y' = f(t, y) from `t0` to `t1` (either direction). The
    /// observer sees `(t, y, y')` at the start point and after every
    /// accepted step and may stop the integration early.
    pub fn integrate<const N: usize, F, O>(
        &self,
        mut f: F,
        t0: T,
        y0: [T; N],
        t1: T,
        mut observe: O,
    ) -> Result<Solution<T, N>>
    where
        F: FnMut(T, &[T; N]) -> [T; N],
        O: FnMut(T, &[T; N], &[T; N]) -> Flow,
    {
        let l = |x: f64| T::lit(x);
        let (c2, c3, c4, c5) = (l(1.0 / 5.0), l(3.0 / 10.0), l(4.0 / 5.0), l(8.0 / 9.0));
        let a21 = l(1.0 / 5.0);
        let (a31, a32) = (l(3.0 / 40.0), l(9.0 / 40.0));
        let (a41, a42, a43) = (l(44.0 / 45.0), l(-56.0 / 15.0), l(32.0 / 9.0));
        let (a51, a52, a53, a54) =
            (l(19372.0 / 6561.0), l(-25360.0 / 2187.0), l(64448.0 / 6561.0), l(-212.0 / 729.0));
        let (a61, a62, a63, a64, a65) = (
            l(9017.0 / 3168.0),
            l(-355.0 / 33.0),
            l(46732.0 / 5247.0),
            l(49.0 / 176.0),
            l(-5103.0 / 18656.0),
        );
        let (b1, b3, b4, b5, b6) =
            (l(35.0 / 384.0), l(500.0 / 1113.0), l(125.0 / 192.0), l(-2187.0 / 6784.0), l(11.0 / 84.0));
        let (e1, e3, e4, e5, e6, e7) = (
            l(71.0 / 57600.0),
            l(-71.0 / 16695.0),
            l(71.0 / 1920.0),
            l(-17253.0 / 339200.0),
            l(22.0 / 525.0),
            l(-1.0 / 40.0),
        );

        let span = t1 - t0;
        let dir = if span >= T::zero() { T::one() } else { -T::one() };
        let mut t = t0;
        let mut y = y0;
        let mut k1 = f(t, &y);
        if observe(t, &y, &k1) == Flow::Stop || span == T::zero() {
            return Ok(Solution { y, first_step: T::zero(), steps: 0 });
        }
        let mut h = match self.h_init {
            Some(h) => h.abs().min(self.h_max),
            None => self.initial_step(&mut f, t0, &y0, &k1, dir),
        };
        let mut first_step = None;
        let mut steps = 0usize;
        let mut rejected_last = false;
        let eps = T::epsilon();
        loop {
            let remaining = (t1 - t) * dir;
            if remaining <= eps * (T::one() + t.abs()) {
                break;
            }
            if steps >= self.max_steps {
                return Err(Error::StepBudget { steps });
            }
            let last = h >= remaining;
            if last {
                h = remaining;
            }
            if h <= T::lit(16.0) * eps * t.abs().max(T::one()) {
                return Err(Error::StepUnderflow { t: t.as_f64() });
            }
            let hs = dir * h;
            let k2 = f(t + c2 * hs, &axpy(&y, &[(hs * a21, &k1)]));
            let k3 = f(t + c3 * hs, &axpy(&y, &[(hs * a31, &k1), (hs * a32, &k2)]));
            let k4 = f(t + c4 * hs, &axpy(&y, &[(hs * a41, &k1), (hs * a42, &k2), (hs * a43, &k3)]));
            let k5 = f(
                t + c5 * hs,
                &axpy(&y, &[(hs * a51, &k1), (hs * a52, &k2), (hs * a53, &k3), (hs * a54, &k4)]),
            );
            let k6 = f(
                t + hs,
                &axpy(
                    &y,
                    &[(hs * a61, &k1), (hs * a62, &k2), (hs * a63, &k3), (hs * a64, &k4), (hs * a65, &k5)],
                ),
            );
            let y_new = axpy(
                &y,
                &[(hs * b1, &k1), (hs * b3, &k3), (hs * b4, &k4), (hs * b5, &k5), (hs * b6, &k6)],
            );
            let t_new = if last { t1 } else { t + hs };
            let k7 = f(t_new, &y_new);
            let mut err = [T::zero(); N];
            for i in 0..N {
                err[i] = hs * (e1 * k1[i] + e3 * k3[i] + e4 * k4[i] + e5 * k5[i] + e6 * k6[i] + e7 * k7[i]);
            }
            let en = self.error_norm(&y, &y_new, &err);
            let finite = y_new.iter().all(|v| v.is_finite()) && en.is_finite();
            if finite && en <= T::one() {
                steps += 1;
                first_step.get_or_insert(h);
                t = t_new;
                y = y_new;
                k1 = k7;
                if observe(t, &y, &k1) == Flow::Stop {
                    break;
                }
                let mut fac = if en == T::zero() {
                    T::lit(5.0)
                } else {
                    T::lit(0.9) * en.powf(T::lit(-0.2))
                };
                fac = fac.min(T::lit(5.0)).max(T::lit(0.2));
                if rejected_last {
                    fac = fac.min(T::one());
                }
                rejected_last = false;
                h = (h * fac).min(self.h_max);
            } else {
                rejected_last = true;
                let fac = if finite {
                    (T::lit(0.9) * en.powf(T::lit(-0.2))).max(T::lit(0.2))
                } else {
                    T::lit(0.25)
                };
                h = h * fac;
            }
        }
        Ok(Solution { y, first_step: first_step.unwrap_or(h), steps })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exponential_decay() {
        let solver = Dopri5::new(1e-12, 1e-14);
        let sol = solver
            .integrate(|_, y: &[f64; 1]| [-y[0]], 0.0, [1.0], 5.0, |_, _, _| Flow::Continue)
            .unwrap();
        assert!((sol.y[0] - (-5.0f64).exp()).abs() < 1e-12);
    }

    #[test]
    fn harmonic_backwards() {
        let solver = Dopri5::new(1e-11, 1e-13);
        let sol = solver
            .integrate(|_, y: &[f64; 2]| [y[1], -y[0]], 0.0, [0.0, 1.0], -2.0, |_, _, _| Flow::Continue)
            .unwrap();
        assert!((sol.y[0] - (-2.0f64).sin()).abs() < 1e-10);
        assert!((sol.y[1] - (-2.0f64).cos()).abs() < 1e-10);
    }

    #[test]
    fn observer_can_stop() {
        let solver = Dopri5::new(1e-8, 1e-10).with_h_max(0.1);
        let mut last_t = 0.0;
        solver
            .integrate(
                |_, _: &[f64; 1]| [1.0],
                0.0,
                [0.0],
                10.0,
                |t, y, _| {
                    last_t = t;
                    if y[0] > 1.0 {
                        Flow::Stop
                    } else {
                        Flow::Continue
                    }
                },
            )
            .unwrap();
        assert!(last_t > 1.0 && last_t <= 1.1 + 1e-12);
    }

    #[test]
    fn works_in_single_precision() {
        let solver = Dopri5::new(1e-5f32, 1e-7);
        let sol = solver
            .integrate(|_, y: &[f32; 1]| [y[0]], 0.0, [1.0], 1.0, |_, _, _| Flow::Continue)
            .unwrap();
        assert!((sol.y[0] - std::f32::consts::E).abs() < 1e-4);
    }
}
