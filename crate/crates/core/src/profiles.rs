//! Profiles v, v′, u, u′ of the travelling wave.
//!
//! On [0, R] the wave is read off the manifold: the point at distance
//! τ = R − ξ behind the trailing interface is the x with T(x, c) = τ, and
//! v′ = y_c(x). The grid is Chebyshev in ξ, clustered at both interfaces.
//! Temperature follows from the enthalpy w = u + v, which solves
//! w′ − c w = (1 − Λ) v′ − c with w(R) = 1, i.e.
//!
//! ```text
//!     w(ξ) = 1 + (1 − Λ) K(ξ),    K(ξ) = ∫_ξ^R e^{−c(s−ξ)} (−v′(s)) ds,
//! ```
//!
//! and K is accumulated panel by panel from ξ = R.

use std::f64::consts::PI;

use crate::diagnostics::{run_diagnostics, DiagnosticsReport};
use crate::error::{Error, Result};
use crate::fixedpoint::{solve_closure, ClosureResult};
use crate::manifold::ManifoldCurve;
use crate::model::{PhysicalParams, SolverConfig};
use crate::real::Real;
use crate::settling::manifold_integral_over;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Region {
    /// ξ < 0, ahead of the ignition front.
    Pre,
    Reaction,
    /// ξ > R, burnt.
    Post,
}

impl Region {
    pub fn as_str(self) -> &'static str {
        match self {
            Region::Pre => "pre",
            Region::Reaction => "reaction",
            Region::Post => "post",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Profile<T> {
    pub xi: Vec<T>,
    pub v: Vec<T>,
    pub vp: Vec<T>,
    pub u: Vec<T>,
    pub up: Vec<T>,
    pub region: Vec<Region>,
    pub c: T,
    pub r: T,
    pub v0: T,
    pub params: PhysicalParams<T>,
}

/// Concentration on [0, R] before the temperature is known.
#[derive(Debug, Clone, PartialEq)]
pub struct VProfile<T> {
    pub xi: Vec<T>,
    pub v: Vec<T>,
    pub vp: Vec<T>,
    /// ln v, exact even where v underflows.
    pub log_v: Vec<T>,
}

/// Absolute mismatch between the closed-form outer solutions and the
/// interior profile at the two interfaces.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct InterfaceJumps<T> {
    pub v_front: T,
    pub vp_front: T,
    pub u_front: T,
    pub up_front: T,
    pub v_back: T,
    pub vp_back: T,
    pub u_back: T,
    pub up_back: T,
}

impl<T: Real> InterfaceJumps<T> {
    pub fn max(&self) -> T {
        [
            self.v_front,
            self.vp_front,
            self.u_front,
            self.up_front,
            self.v_back,
            self.vp_back,
            self.u_back,
            self.up_back,
        ]
        .into_iter()
        .fold(T::zero(), T::max)
    }
}

#[derive(Debug, Clone)]
pub struct WaveSolution<T> {
    pub closure: ClosureResult<T>,
    pub profile: Profile<T>,
    pub diagnostics: DiagnosticsReport,
}

/// ξ_j = R (1 − cos(πj/(n−1)))/2.
pub fn chebyshev_grid<T: Real>(r: T, n: usize) -> Vec<T> {
    let half = r / T::lit(2.0);
    let last = n - 1;
    (0..n)
        .map(|j| match j {
            0 => T::zero(),
            j if j == last => r,
            j => half * (T::one() - T::lit((PI * j as f64 / last as f64).cos())),
        })
        .collect()
}

/// Clenshaw–Curtis weights for the grid of [`chebyshev_grid`].
pub fn clenshaw_curtis_weights<T: Real>(r: T, n: usize) -> Vec<T> {
    let big_n = n - 1;
    let mut w = vec![0.0f64; n];
    for (j, wj) in w.iter_mut().enumerate() {
        let theta = PI * j as f64 / big_n as f64;
        let mut s = 1.0;
        for k in 1..=big_n / 2 {
            let b = if 2 * k == big_n { 1.0 } else { 2.0 };
            s -= b / (4.0 * (k * k) as f64 - 1.0) * (2.0 * k as f64 * theta).cos();
        }
        let cj = if j == 0 || j == big_n { 1.0 } else { 2.0 };
        *wj = cj * s / big_n as f64;
    }
    let half = r / T::lit(2.0);
    w.into_iter().map(|x| half * T::lit(x)).collect()
}

impl<T: Real> Profile<T> {
    /// ∫₀^R f dξ by Clenshaw–Curtis over the reaction region, with `f`
    /// evaluated at each grid index.
    pub fn integrate(&self, f: impl Fn(usize) -> T) -> Result<T> {
        let idx: Vec<usize> = (0..self.xi.len()).filter(|&i| self.region[i] == Region::Reaction).collect();
        let n = idx.len();
        if n < 3 {
            return Err(Error::Precondition("profile has fewer than three interior points".into()));
        }
        let w = clenshaw_curtis_weights(self.r, n);
        Ok(idx.iter().zip(&w).fold(T::zero(), |acc, (&i, &wi)| acc + wi * f(i)))
    }

    fn reaction_ends(&self) -> (usize, usize) {
        let first = self.region.iter().position(|&r| r == Region::Reaction).unwrap_or(0);
        let last = self.region.iter().rposition(|&r| r == Region::Reaction).unwrap_or(0);
        (first, last)
    }

    pub fn interface_jumps(&self) -> InterfaceJumps<T> {
        let (a, b) = self.reaction_ends();
        let p = &self.params;
        let one = T::one();
        InterfaceJumps {
            v_front: (self.v[a] - self.v0).abs(),
            vp_front: (self.vp[a] + self.c / p.lambda * (one - self.v0)).abs(),
            u_front: (self.u[a] - p.theta).abs(),
            up_front: (self.up[a] - self.c * p.theta).abs(),
            v_back: self.v[b].abs(),
            vp_back: self.vp[b].abs(),
            u_back: (self.u[b] - one).abs(),
            up_back: self.up[b].abs(),
        }
    }
}

/// Concentration profile on an `n_points` Chebyshev grid over [0, R].
pub fn build_v_profile<T: Real>(
    m: &ManifoldCurve<T>,
    c: T,
    v0: T,
    r: T,
    n_points: usize,
    _cfg: &SolverConfig<T>,
) -> Result<VProfile<T>> {
    if c != m.c {
        return Err(Error::Precondition(format!("speed {c} differs from the manifold's {}", m.c)));
    }
    if n_points < 3 || !(r > T::zero()) {
        return Err(Error::Precondition(format!("need n_points >= 3 and R > 0 (n = {n_points}, R = {r})")));
    }
    let log_v0 = v0.ln();
    if v0 > m.x_max() * (T::one() + T::lit(4.0) * T::epsilon()) {
        return Err(Error::OutOfRange { what: "v0", x: v0.as_f64(), lo: 0.0, hi: m.x_max().as_f64() });
    }
    let pe = m.params.p_exp();
    let xi = chebyshev_grid(r, n_points);
    let last = n_points - 1;
    let mut v = Vec::with_capacity(n_points);
    let mut vp = Vec::with_capacity(n_points);
    let mut log_v = Vec::with_capacity(n_points);
    for (j, &s) in xi.iter().enumerate() {
        let t = if j == 0 {
            log_v0
        } else if j == last {
            T::neg_infinity()
        } else {
            m.log_x_at_time(r - s).min(log_v0)
        };
        if let Some(&prev) = log_v.last() {
            if t > prev {
                return Err(Error::Precondition(format!("settling time not monotone near xi = {s}")));
            }
        }
        let (x, y) = if t == T::neg_infinity() {
            (T::zero(), T::zero())
        } else {
            (t.exp(), -(pe * t).exp() * m.g_at_log(t).0)
        };
        v.push(x);
        vp.push(y);
        log_v.push(t);
    }
    Ok(VProfile { xi, v, vp, log_v })
}

/// Temperature and its derivative on the grid of `prof_v`, from the
/// enthalpy recursion. Needs the manifold the profile was read from.
pub fn build_u_profile<T: Real>(
    prof_v: &VProfile<T>,
    m: &ManifoldCurve<T>,
    r: T,
    cfg: &SolverConfig<T>,
) -> Result<(Vec<T>, Vec<T>)> {
    let p = &m.params;
    let (c, one) = (m.c, T::one());
    let n = prof_v.xi.len();
    let mut k = vec![T::zero(); n];
    for j in (0..n - 1).rev() {
        let tau = r - prof_v.xi[j];
        let (panel, _) = manifold_integral_over(
            m,
            prof_v.log_v[j + 1],
            prof_v.log_v[j],
            |pt| (-c * (tau - pt.time)).exp() * pt.x,
            cfg,
        )?;
        k[j] = (-c * (prof_v.xi[j + 1] - prof_v.xi[j])).exp() * k[j + 1] + panel;
    }
    let mix = one - p.lambda;
    let u = k.iter().zip(&prof_v.v).map(|(&kj, &vj)| one + mix * kj - vj).collect();
    let up = k.iter().zip(&prof_v.vp).map(|(&kj, &vpj)| c * mix * kj - p.lambda * vpj).collect();
    Ok((u, up))
}

/// Solves the closure and assembles profiles and diagnostics.
pub fn solve_full<T: Real>(p: &PhysicalParams<T>, cfg: &SolverConfig<T>) -> Result<WaveSolution<T>> {
    let (closure, wave) = solve_closure(p, cfg)?;
    let prof_v = build_v_profile(&wave.manifold, wave.c, wave.v0, wave.r, cfg.profile_points, cfg)?;
    let (u, up) = build_u_profile(&prof_v, &wave.manifold, wave.r, cfg)?;
    let n = prof_v.xi.len();
    let profile = Profile {
        xi: prof_v.xi,
        v: prof_v.v,
        vp: prof_v.vp,
        u,
        up,
        region: vec![Region::Reaction; n],
        c: wave.c,
        r: wave.r,
        v0: wave.v0,
        params: *p,
    };
    let mut sol = WaveSolution { closure, profile, diagnostics: DiagnosticsReport::default() };
    sol.diagnostics = run_diagnostics(&sol, cfg);
    Ok(sol)
}

/// The profile on [xi_min, xi_max] ⊃ [0, R]: the reaction region plus
/// uniform samples of the closed-form outer solutions
/// u = θ e^{cξ}, v = 1 − (1 − v0) e^{cξ/Λ} for ξ < 0 and u = 1, v = 0 for
/// ξ > R.
pub fn extend_full_line<T: Real>(sol: &WaveSolution<T>, xi_min: T, xi_max: T) -> Result<Profile<T>> {
    let pr = &sol.profile;
    if !(xi_min < T::zero() && xi_max > pr.r) {
        return Err(Error::Precondition(format!(
            "need xi_min < 0 < R < xi_max (got {xi_min}, {}, {xi_max})",
            pr.r
        )));
    }
    let inner: Vec<usize> = (0..pr.xi.len()).filter(|&i| pr.region[i] == Region::Reaction).collect();
    let n_outer = (inner.len() / 8).max(16);
    let (c, l, th, v0) = (pr.c, pr.params.lambda, pr.params.theta, pr.v0);
    let one = T::one();
    let mut out = Profile {
        xi: Vec::new(),
        v: Vec::new(),
        vp: Vec::new(),
        u: Vec::new(),
        up: Vec::new(),
        region: Vec::new(),
        ..pr.clone()
    };
    let push = |out: &mut Profile<T>, xi: T, v: T, vp: T, u: T, up: T, region: Region| {
        out.xi.push(xi);
        out.v.push(v);
        out.vp.push(vp);
        out.u.push(u);
        out.up.push(up);
        out.region.push(region);
    };
    let step = -xi_min / T::from_usize(n_outer).unwrap();
    for i in 0..n_outer {
        let xi = xi_min + step * T::from_usize(i).unwrap();
        let eu = (c * xi).exp();
        let ev = (c * xi / l).exp();
        push(&mut out, xi, one - (one - v0) * ev, -(c / l) * (one - v0) * ev, th * eu, c * th * eu, Region::Pre);
    }
    for &i in &inner {
        push(&mut out, pr.xi[i], pr.v[i], pr.vp[i], pr.u[i], pr.up[i], Region::Reaction);
    }
    let step = (xi_max - pr.r) / T::from_usize(n_outer).unwrap();
    for i in 1..=n_outer {
        let xi = if i == n_outer { xi_max } else { pr.r + step * T::from_usize(i).unwrap() };
        push(&mut out, xi, T::zero(), T::zero(), one, T::zero(), Region::Post);
    }
    Ok(out)
}
