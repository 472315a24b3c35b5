//! Checks every identity and bound a computed wave must satisfy.
//!
//! Equalities report `residual = |lhs − rhs|` (divided by |rhs| for
//! relative checks) and pass when it is within `tolerance`. Inequalities
//! report a signed margin, positive when satisfied, and pass only when it
//! is strictly positive. The manifold is regrown from (c, v0) rather than
//! taken from the solver, so a corrupted speed shows up here.

use crate::fixedpoint::{closure_defect, weighted_integrals, Branch};
use crate::manifold::{grow_manifold, ManifoldCurve};
use crate::model::{
    c_brackets, crossing_x1, curve_l0, curve_lc, interval_i, lower_estimate, r_bounds, settling_lower_bound,
    settling_upper_bound, ClosureInterval, PhysicalParams, SolverConfig,
};
use crate::profiles::{Region, WaveSolution};
use crate::real::Real;
use crate::settling::manifold_integral;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CheckKind {
    Equality,
    Margin,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Check {
    pub name: String,
    pub kind: CheckKind,
    pub lhs: f64,
    pub rhs: f64,
    pub residual: f64,
    pub tolerance: f64,
    pub pass: bool,
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct DiagnosticsReport {
    pub checks: Vec<Check>,
}

impl DiagnosticsReport {
    pub fn all_pass(&self) -> bool {
        !self.checks.is_empty() && self.checks.iter().all(|c| c.pass)
    }

    pub fn get(&self, name: &str) -> Option<&Check> {
        self.checks.iter().find(|c| c.name == name)
    }

    pub fn failures(&self) -> impl Iterator<Item = &Check> {
        self.checks.iter().filter(|c| !c.pass)
    }

    fn push(&mut self, check: Check) {
        debug_assert!(self.get(&check.name).is_none(), "duplicate check {}", check.name);
        self.checks.push(check);
    }

    /// |lhs − rhs| ≤ tol.
    fn absolute<T: Real>(&mut self, name: &str, lhs: T, rhs: T, tol: f64) {
        let (l, r) = (lhs.as_f64(), rhs.as_f64());
        let residual = (l - r).abs();
        self.push(Check {
            name: name.into(),
            kind: CheckKind::Equality,
            lhs: l,
            rhs: r,
            residual,
            tolerance: tol,
            pass: residual <= tol,
        });
    }

    /// |lhs − rhs| ≤ tol·|rhs|.
    fn relative<T: Real>(&mut self, name: &str, lhs: T, rhs: T, tol: f64) {
        let (l, r) = (lhs.as_f64(), rhs.as_f64());
        let residual = (l - r).abs() / r.abs();
        self.push(Check {
            name: name.into(),
            kind: CheckKind::Equality,
            lhs: l,
            rhs: r,
            residual,
            tolerance: tol,
            pass: residual <= tol,
        });
    }

    /// lhs < rhs strictly; the residual is the margin rhs − lhs.
    fn less<T: Real>(&mut self, name: &str, lhs: T, rhs: T) {
        self.margin(name, lhs.as_f64(), rhs.as_f64(), (rhs - lhs).as_f64());
    }

    fn margin(&mut self, name: &str, lhs: f64, rhs: f64, margin: f64) {
        self.push(Check {
            name: name.into(),
            kind: CheckKind::Margin,
            lhs,
            rhs,
            residual: margin,
            tolerance: 0.0,
            pass: margin > 0.0,
        });
    }

    fn failed(&mut self, name: &str) {
        self.push(Check {
            name: name.into(),
            kind: CheckKind::Equality,
            lhs: f64::NAN,
            rhs: f64::NAN,
            residual: f64::NAN,
            tolerance: 0.0,
            pass: false,
        });
    }
}

/// Tolerance on |ψ| relative to the speed scale c(1 − v0)/Λ. The speed is
/// bracketed far tighter, so this measures how well an independently grown
/// manifold reproduces the initial state.
const PSI_TOL: f64 = 1e-9;
const IDENTITY_TOL: f64 = 1e-8;
const BOUNDARY_TOL: f64 = 1e-7;
const HOLDER_REL_TOL: f64 = 0.05;
const TAIL_CONSTANT_TOL: f64 = 1e-2;
const SETTLING_TOL: f64 = 1e-9;
/// Allowed truncation of the three-point differences, in units of
/// (βh/d)² times the local size of the terms.
const ODE_RESIDUAL_FACTOR: f64 = 10.0;
const ENVELOPE_SAMPLES: usize = 1000;

pub fn run_diagnostics<T: Real>(sol: &WaveSolution<T>, cfg: &SolverConfig<T>) -> DiagnosticsReport {
    let mut rep = DiagnosticsReport::default();
    let pr = &sol.profile;
    let p = &pr.params;
    let (c, v0, r) = (pr.c, pr.v0, pr.r);
    let one = T::one();

    let m = match grow_manifold(p, c, v0, cfg) {
        Ok(m) => m,
        Err(_) => {
            rep.failed("manifold");
            return rep;
        }
    };
    let end = m.end_state();
    let scale = c * (one - v0) / p.lambda;
    rep.absolute("psi_residual", end.y + scale, T::zero(), PSI_TOL * scale.as_f64().max(1.0));

    identities(&mut rep, &m, p, c, v0, cfg);
    bounds(&mut rep, p, c, v0, r);
    envelope(&mut rep, &m, p, c, v0);
    holder(&mut rep, sol, &m);
    shape(&mut rep, sol);
    boundary(&mut rep, sol);
    ode_residuals(&mut rep, sol, cfg);
    closure(&mut rep, sol, &m, cfg);

    rep.relative("settling_routes", r, m.end_settling_time(), SETTLING_TOL);
    if v0 < crossing_x1(p, c) {
        rep.less("settling_lower", settling_lower_bound(p, v0), r);
        if let Some(upper) = settling_upper_bound(p, c, v0) {
            rep.less("settling_upper", r, upper);
        }
    }
    rep
}

fn identities<T: Real>(
    rep: &mut DiagnosticsReport,
    m: &ManifoldCurve<T>,
    p: &PhysicalParams<T>,
    c: T,
    v0: T,
    cfg: &SolverConfig<T>,
) {
    let one = T::one();
    let (a, q, pe) = (p.alpha, p.q_exp(), p.p_exp());
    let t_end = m.log_x_max();
    let ints: crate::error::Result<(T, T, T)> = (|| {
        let (iv, _) = manifold_integral(m, t_end, |pt| ((a + q) * pt.t).exp() / pt.g, cfg)?;
        let (ivp2, _) = manifold_integral(m, t_end, |pt| ((one + pe) * pt.t).exp() * pt.g, cfg)?;
        let (iv1a, _) = manifold_integral(m, t_end, |pt| ((one + a + q) * pt.t).exp() / pt.g, cfg)?;
        Ok((iv, ivp2, iv1a))
    })();
    let Ok((iv, ivp2, iv1a)) = ints else {
        rep.failed("integral_v");
        return;
    };
    rep.relative("integral_v", iv, c, IDENTITY_TOL);
    let two = T::lit(2.0);
    let first = c * c / (two * p.lambda) * (one - v0) * (one - v0) + c * ivp2;
    rep.relative("energy_first", first, v0.powf(one + a) / (one + a), IDENTITY_TOL);
    let second = -c * v0 * (v0 - one) - p.lambda * ivp2 + c / two * v0 * v0;
    rep.relative("energy_second", second, iv1a, IDENTITY_TOL);
}

fn bounds<T: Real>(rep: &mut DiagnosticsReport, p: &PhysicalParams<T>, c: T, v0: T, r: T) {
    match c_brackets(p, v0) {
        Ok(b) => {
            rep.less("c_lower", b.lo, c);
            rep.less("c_upper", c, b.hi);
        }
        Err(_) => rep.failed("c_bracket"),
    }
    let (lo, hi) = r_bounds(p, v0);
    rep.less("r_lower", lo, r);
    rep.less("r_upper", r, hi);
}

/// Signed margins of the manifold against its envelope and the lower
/// estimate at log-spaced x, each normalized by the local envelope width
/// (c/Λ)x or by x^α/c. The worst sample is reported.
fn envelope<T: Real>(rep: &mut DiagnosticsReport, m: &ManifoldCurve<T>, p: &PhysicalParams<T>, c: T, v0: T) {
    if !(c > T::zero()) {
        return;
    }
    let lo = (v0 * T::lit(1e-8)).max(m.seed_x).ln();
    let hi = v0.ln();
    let n = ENVELOPE_SAMPLES;
    let (mut below, mut above, mut est) = ((f64::INFINITY, 0.0, 0.0), (f64::INFINITY, 0.0, 0.0), (f64::INFINITY, 0.0, 0.0));
    for i in 0..n {
        let t = lo + (hi - lo) * T::from_usize(i).unwrap() / T::from_usize(n - 1).unwrap();
        let x = t.exp().min(m.x_max());
        let (Ok(y), Ok(y0), Ok(yl)) = (m.eval(x), curve_l0(p, x), curve_lc(p, c, x)) else {
            rep.failed("envelope");
            return;
        };
        let width = c / p.lambda * x;
        let ye = lower_estimate(p, c, x);
        let cand = [
            ((y - y0) / width, y0, y),
            ((yl - y) / width, y, yl),
            ((y - ye) / -ye, ye, y),
        ];
        for (slot, (mg, l, r)) in [&mut below, &mut above, &mut est].into_iter().zip(cand) {
            if mg.as_f64() < slot.0 {
                *slot = (mg.as_f64(), l.as_f64(), r.as_f64());
            }
        }
    }
    rep.margin("envelope_lower", below.1, below.2, below.0);
    rep.margin("envelope_upper", above.1, above.2, above.0);
    rep.margin("lower_estimate", est.1, est.2, est.0);
}

/// Least-squares slope of ln v against ln(R − ξ) over the decade of
/// R − ξ nearest the trailing interface, skipping the last three grid
/// points, and the tail constant at the innermost point of that decade.
fn holder<T: Real>(rep: &mut DiagnosticsReport, sol: &WaveSolution<T>, m: &ManifoldCurve<T>) {
    let pr = &sol.profile;
    let p = &pr.params;
    let taus: Vec<T> = pr
        .xi
        .iter()
        .zip(&pr.region)
        .filter(|(_, &reg)| reg == Region::Reaction)
        .map(|(&x, _)| pr.r - x)
        .filter(|&t| t > T::zero())
        .collect();
    if taus.len() < 8 {
        rep.failed("holder_slope");
        return;
    }
    let inner = taus[taus.len() - 4];
    let pts: Vec<(f64, f64)> = taus
        .iter()
        .filter(|&&t| t >= inner && t <= inner * T::lit(10.0))
        .map(|&t| (t.ln().as_f64(), m.log_x_at_time(t).as_f64()))
        .collect();
    let expected = 2.0 / (1.0 - p.alpha.as_f64());
    if pts.len() < 3 {
        rep.failed("holder_slope");
        return;
    }
    let n = pts.len() as f64;
    let (sx, sy) = pts.iter().fold((0.0, 0.0), |a, &(x, y)| (a.0 + x, a.1 + y));
    let (mx, my) = (sx / n, sy / n);
    let (sxy, sxx) = pts.iter().fold((0.0, 0.0), |a, &(x, y)| (a.0 + (x - mx) * (y - my), a.1 + (x - mx) * (x - mx)));
    let slope = sxy / sxx;
    rep.relative("holder_slope", slope, expected, HOLDER_REL_TOL);

    // v ≈ (q k τ)^{1/q}; compare in logs to stay clear of underflow.
    let q = p.q_exp();
    let predicted = (q * p.tail_coefficient() * inner).ln() / q;
    let actual = m.log_x_at_time(inner);
    rep.absolute("tail_constant", actual, predicted, TAIL_CONSTANT_TOL);
}

/// Monotone decrease of v and convexity, the latter as a non-decreasing v′
/// on the grid.
fn shape<T: Real>(rep: &mut DiagnosticsReport, sol: &WaveSolution<T>) {
    let pr = &sol.profile;
    let idx: Vec<usize> = (0..pr.xi.len()).filter(|&i| pr.region[i] == Region::Reaction).collect();
    let mut mono = f64::INFINITY;
    let mut convex = f64::INFINITY;
    for w in idx.windows(2) {
        let (a, b) = (w[0], w[1]);
        if pr.v[a] > T::zero() {
            mono = mono.min((pr.v[a] - pr.v[b]).as_f64());
        }
        if pr.vp[a] < T::zero() {
            convex = convex.min((pr.vp[b] - pr.vp[a]).as_f64());
        }
    }
    rep.margin("monotone", 0.0, mono, mono);
    rep.margin("convexity", 0.0, convex, convex);
}

fn boundary<T: Real>(rep: &mut DiagnosticsReport, sol: &WaveSolution<T>) {
    let j = sol.profile.interface_jumps();
    let pairs = [
        ("bc_v_front", j.v_front),
        ("bc_vp_front", j.vp_front),
        ("bc_u_front", j.u_front),
        ("bc_up_front", j.up_front),
        ("bc_v_back", j.v_back),
        ("bc_vp_back", j.vp_back),
        ("bc_u_back", j.u_back),
        ("bc_up_back", j.up_back),
    ];
    for (name, val) in pairs {
        rep.absolute(name, val, T::zero(), BOUNDARY_TOL);
    }
    if sol.profile.params.lambda == T::one() {
        let pr = &sol.profile;
        let worst = pr
            .u
            .iter()
            .zip(&pr.v)
            .map(|(&u, &v)| (u + v - T::one()).abs().as_f64())
            .fold(0.0, f64::max);
        rep.absolute("w_identity", worst, 0.0, IDENTITY_TOL);
    }
}

/// Λv″ − cv′ − v^α and u″ − cu′ + v^α with v″, u″ from three-point
/// differences of v′, u′. Each point is allowed a truncation error of
/// (βh/d)² times the local size of the terms, d being the distance to the
/// nearer interface and β = 2/(1−α) the tail exponent (v ~ (R−ξ)^β, so
/// each further pair of derivatives grows by about β²/d²), plus the differentiated noise of
/// v′, u′ themselves, which are only accurate to the ODE tolerance. The
/// residual reported is the worst ratio to that allowance.
fn ode_residuals<T: Real>(rep: &mut DiagnosticsReport, sol: &WaveSolution<T>, cfg: &SolverConfig<T>) {
    let pr = &sol.profile;
    let p = &pr.params;
    let idx: Vec<usize> = (0..pr.xi.len()).filter(|&i| pr.region[i] == Region::Reaction).collect();
    if idx.len() < 3 {
        rep.failed("ode_residual_v");
        rep.failed("ode_residual_u");
        return;
    }
    let f = |x: T| x.as_f64();
    let r = f(pr.r);
    let rtol = f(cfg.ode_rel_tol);
    let (lam, c) = (f(p.lambda), f(pr.c));
    let beta = 2.0 / (1.0 - f(p.alpha));
    let (mut rv, mut ru) = (0.0f64, 0.0f64);
    for w in idx.windows(3) {
        let (a, b, cc) = (w[0], w[1], w[2]);
        let (h1, h2) = (f(pr.xi[b] - pr.xi[a]), f(pr.xi[cc] - pr.xi[b]));
        // Second-order derivative on unequal spacing.
        let d = |g: &[T]| {
            -h2 / (h1 * (h1 + h2)) * f(g[a]) + (h2 - h1) / (h1 * h2) * f(g[b]) + h1 / (h2 * (h1 + h2)) * f(g[cc])
        };
        if pr.v[b] == T::zero() {
            continue;
        }
        let react = f(pr.v[b].powf(p.alpha));
        let xb = f(pr.xi[b]);
        let dist = xb.min(r - xb);
        let trunc = ODE_RESIDUAL_FACTOR * (beta * h1.max(h2) / dist).powi(2);
        let noise = |g: &[T]| 100.0 * rtol * f(g[a]).abs().max(f(g[cc]).abs()) / h1.min(h2);
        let (vpp, upp) = (d(&pr.vp), d(&pr.up));
        let (cv, cu) = (c * f(pr.vp[b]), c * f(pr.up[b]));
        let res_v = (lam * vpp - cv - react).abs();
        let res_u = (upp - cu + react).abs();
        let mag_v = (lam * vpp).abs() + cv.abs() + react;
        let mag_u = upp.abs() + cu.abs() + react;
        rv = rv.max(res_v / (trunc * mag_v + lam * noise(&pr.vp)));
        ru = ru.max(res_u / (trunc * mag_u + noise(&pr.up)));
    }
    rep.absolute("ode_residual_v", rv, 0.0, 1.0);
    rep.absolute("ode_residual_u", ru, 0.0, 1.0);
}

fn closure<T: Real>(rep: &mut DiagnosticsReport, sol: &WaveSolution<T>, m: &ManifoldCurve<T>, cfg: &SolverConfig<T>) {
    let pr = &sol.profile;
    let p = &pr.params;
    let Ok((k, mm)) = weighted_integrals(m, pr.r, cfg) else {
        rep.failed("equiv_cross");
        return;
    };
    rep.absolute("equiv_cross", k, pr.v0 - pr.c * mm, IDENTITY_TOL);
    let g = closure_defect(p, pr.v0, pr.c, k, mm);
    let tol = 10.0 * cfg.v0_bisect_tol.as_f64();
    rep.absolute("closure_residual", g, T::zero(), tol);
    match interval_i(p) {
        ClosureInterval::Range(b) => {
            rep.less("closure_interval_lower", b.lo, pr.v0);
            rep.less("closure_interval_upper", pr.v0, b.hi);
        }
        ClosureInterval::Point(x) => rep.absolute("closure_interval", pr.v0, x, 0.0),
    }
    if Branch::of(p) != sol.closure.branch {
        rep.failed("closure_branch");
    }
}
