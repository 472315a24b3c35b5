use flamewave::fixedpoint::{residual_phi, residual_psi};
use flamewave::profiles::clenshaw_curtis_weights;
use flamewave::{
    extend_full_line, run_diagnostics, solve_closure, solve_full, solve_wave, Branch, ClosureMode, Config, Params,
    Region,
};

fn solve(a: f64, l: f64, t: f64) -> flamewave::Wave {
    solve_full(&Params::new(a, l, t).unwrap(), &Config::default()).unwrap()
}

#[test]
fn unit_lewis_wave_has_constant_enthalpy() {
    let s = solve(0.5, 1.0, 0.5);
    assert_eq!(s.closure.v0_star, 0.5);
    assert_eq!(s.closure.branch, Branch::LambdaEqualOne);
    let pr = &s.profile;
    for i in 0..pr.xi.len() {
        assert!((pr.u[i] + pr.v[i] - 1.0).abs() < 1e-12);
    }
    assert!(s.diagnostics.get("w_identity").unwrap().pass);
}

#[test]
fn profiles_are_monotone_and_meet_the_interfaces() {
    for (a, l, t) in [(0.25, 0.5, 0.3), (0.75, 2.0, 0.7), (0.5, 2.0, 0.5)] {
        let s = solve(a, l, t);
        let pr = &s.profile;
        assert_eq!(pr.xi[0], 0.0);
        assert_eq!(*pr.xi.last().unwrap(), pr.r);
        assert!(pr.v.windows(2).all(|w| w[1] <= w[0]));
        assert!(pr.u.windows(2).all(|w| w[1] >= w[0] - 1e-12));
        assert!(pr.interface_jumps().max() < 1e-7);
        assert!(s.diagnostics.all_pass(), "{:?}", s.diagnostics.failures().collect::<Vec<_>>());
    }
}

#[test]
fn reaction_integral_equals_speed() {
    let s = solve(0.5, 2.0, 0.5);
    let pr = &s.profile;
    let a = pr.params.alpha;
    let lhs = pr.integrate(|i| pr.v[i].powf(a)).unwrap();
    assert!((lhs - pr.c).abs() / pr.c < 1e-8, "{lhs} vs {}", pr.c);
}

#[test]
fn clenshaw_curtis_weights_sum_to_length() {
    let w = clenshaw_curtis_weights(3.0f64, 33);
    assert!((w.iter().sum::<f64>() - 3.0).abs() < 1e-14);
}

#[test]
fn wrong_speed_is_caught() {
    let cfg = Config::default();
    let mut s = solve(0.5, 2.0, 0.5);
    s.closure.c *= 1.01;
    s.profile.c *= 1.01;
    let rep = run_diagnostics(&s, &cfg);
    assert!(!rep.get("psi_residual").unwrap().pass);
    assert!(!rep.get("integral_v").unwrap().pass);
    assert!(!rep.all_pass());
}

#[test]
fn full_line_extension_has_all_regions() {
    let s = solve(0.5, 0.5, 0.5);
    let full = extend_full_line(&s, -10.0, 1.5 * s.profile.r).unwrap();
    assert!(full.xi.windows(2).all(|w| w[1] > w[0]));
    assert_eq!(full.region[0], Region::Pre);
    assert_eq!(*full.region.last().unwrap(), Region::Post);
    assert!(full.region.contains(&Region::Reaction));
    // u decays ahead of the front and v saturates.
    assert!(full.u[0] < 1e-3 && full.v[0] > 0.99);
    let last = full.xi.len() - 1;
    assert_eq!((full.u[last], full.v[last]), (1.0, 0.0));
}

#[test]
fn closure_residual_vanishes_at_the_solution() {
    let p = Params::new(0.25, 2.0, 0.3).unwrap();
    let cfg = Config::default();
    let (c, _) = solve_closure(&p, &cfg).unwrap();
    assert_eq!(c.branch, Branch::LambdaAboveOne);
    assert!(residual_psi(&p, c.v0_star, &cfg).unwrap().abs() < 1e-9);
    let q = Params::new(0.25, 0.5, 0.3).unwrap();
    let (d, _) = solve_closure(&q, &cfg).unwrap();
    assert_eq!(d.branch, Branch::LambdaBelowOne);
    assert!(residual_phi(&q, d.v0_star, &cfg).unwrap().abs() < 1e-9);
}

#[test]
fn picard_mode_agrees_when_it_converges() {
    let p = Params::new(0.5, 2.0, 0.5).unwrap();
    let bisect = solve_wave(&p, &Config::default()).unwrap();
    let cfg = Config { closure_mode: ClosureMode::Picard, ..Config::default() };
    if let Ok(w) = solve_wave(&p, &cfg) {
        assert!((w.v0_star - bisect.v0_star).abs() < 1e-8);
    }
}

#[test]
fn invalid_parameters_are_rejected() {
    assert!(Params::new(1.0, 1.0, 0.5).is_err());
    assert!(Params::new(0.5, 0.0, 0.5).is_err());
    assert!(Params::new(0.5, 1.0, 1.0).is_err());
    assert!(Params::new(f64::NAN, 1.0, 0.5).is_err());
}
