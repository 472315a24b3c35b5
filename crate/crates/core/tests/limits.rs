use flamewave::limits::{
    lambda_zero_f, lambda_zero_solution, speed_alpha_one, speed_alpha_zero, sweep_alpha, theta_alpha_half,
    theta_alpha_zero,
};
use flamewave::{Config, LimitCase, LimitKind, Params};

#[test]
fn alpha_zero_root_satisfies_its_equation() {
    let cfg = Config::default();
    for theta in [0.1, 0.5, 0.9] {
        let (c, r) = speed_alpha_zero(theta, &cfg).unwrap();
        assert!((theta_alpha_zero(c) - theta).abs() < 1e-14);
        assert_eq!(c, r);
    }
}

#[test]
fn lambda_zero_root_function_changes_sign() {
    let cfg = Config::default();
    let f0 = lambda_zero_f(0.0, 0.3, 0.6, &cfg).unwrap();
    let f_big = lambda_zero_f(1e3, 0.3, 0.6, &cfg).unwrap();
    assert!((f0 + 0.4).abs() < 1e-15);
    // The integral approaches 1 like 1 − O(c⁻²).
    assert!((f_big - 0.6).abs() < 1e-5);
    let p = Params::for_limits(0.3, 0.0, 0.6).unwrap();
    let s = lambda_zero_solution(&p, &cfg).unwrap();
    assert!(lambda_zero_f(s.c, 0.3, 0.6, &cfg).unwrap().abs() < 1e-12);
    assert!((s.r - s.c / 0.7).abs() < 1e-14);
}

#[test]
fn half_order_closed_form_matches_quadrature() {
    let cfg = Config::default();
    for c in [0.3, 0.8, 1.5, 3.0] {
        let via_f = lambda_zero_f(c, 0.5, 0.0, &cfg).unwrap() + 1.0;
        // f + 1 − θ with θ = 0 is the integral, which equals 1 − θ(c).
        assert!((1.0 - via_f - theta_alpha_half(c)).abs() < 1e-12, "c = {c}");
    }
}

#[test]
fn lambda_zero_speed_tends_to_the_alpha_zero_speed() {
    let cfg = Config::default();
    let p = Params::for_limits(0.0, 0.0, 0.45).unwrap();
    let c0 = lambda_zero_solution(&p, &cfg).unwrap().c;
    assert!((c0 - speed_alpha_zero(0.45, &cfg).unwrap().0).abs() < 1e-12);
}

#[test]
fn limit_cases_dispatch() {
    let cfg = Config::default();
    let one = LimitCase::new(LimitKind::AlphaOne, Params::for_limits(1.0, 2.0, 0.5).unwrap()).unwrap();
    let s = one.solve(&cfg).unwrap();
    assert_eq!(s.c, speed_alpha_one(0.5, 2.0));
    assert!(s.r.is_none());
    let unit = LimitCase::new(LimitKind::LambdaOne, Params::for_limits(0.5, 1.0, 0.5).unwrap()).unwrap();
    assert_eq!(unit.solve(&cfg).unwrap().v0, Some(0.5));
    assert!(LimitCase::new(LimitKind::LambdaZero, Params::for_limits(0.5, 1.0, 0.5).unwrap()).is_err());
}

#[test]
fn sweep_is_sorted_and_keeps_failures() {
    let cfg = Config::default();
    let base = Params::new(0.5, 1.0, 0.5).unwrap();
    let rows = sweep_alpha(&base, &[0.7, 0.3, 1.5, 0.5], &cfg);
    let alphas: Vec<f64> = rows.iter().map(|r| r.alpha).collect();
    assert_eq!(alphas, vec![0.3, 0.5, 0.7, 1.5]);
    assert!(rows[3].outcome.is_err());
    let c: Vec<f64> = rows[..3].iter().map(|r| r.outcome.as_ref().unwrap().c).collect();
    assert!(c.windows(2).all(|w| w[1] < w[0]));
}
