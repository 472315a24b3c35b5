use flamewave::cli::parse_values;
use flamewave::model::{curve_l0, curve_lc, field_extended, lower_estimate};
use flamewave::{grow_manifold, psi, Config, Params, PhaseState};
use proptest::prelude::*;

fn params() -> impl Strategy<Value = Params> {
    (0.05f64..0.95, 0.2f64..4.0, 0.1f64..0.9).prop_map(|(a, l, t)| Params::new(a, l, t).unwrap())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn extended_field_is_odd(p in params(), c in 0.0f64..3.0, x in -5.0f64..5.0, y in -5.0f64..5.0) {
        let (a, b) = field_extended(&p, c, PhaseState::new(x, y));
        let (ma, mb) = field_extended(&p, c, PhaseState::new(-x, -y));
        prop_assert_eq!(a, -ma);
        prop_assert_eq!(b, -mb);
    }

    #[test]
    fn manifold_stays_in_its_envelope(p in params(), c in 0.05f64..2.0, frac in 0.0f64..1.0) {
        let cfg = Config::default();
        let m = grow_manifold(&p, c, 1.0, &cfg).unwrap();
        let x = (frac * 1e-6f64.ln()).exp().min(m.x_max());
        let y = m.eval(x).unwrap();
        prop_assert!(y > curve_l0(&p, x).unwrap());
        prop_assert!(y < curve_lc(&p, c, x).unwrap());
        prop_assert!(y > lower_estimate(&p, c, x));
        prop_assert!(y < 0.0);
    }

    #[test]
    fn psi_increases_with_speed(p in params(), v0 in 0.05f64..0.95, c in 0.05f64..2.0, dc in 1e-3f64..0.5) {
        let cfg = Config::default();
        let a = psi(&p, v0, c, &cfg).unwrap();
        let b = psi(&p, v0, c + dc, &cfg).unwrap();
        prop_assert!(b > a, "psi({c}) = {a}, psi({}) = {b}", c + dc);
    }

    #[test]
    fn settling_time_inverts(p in params(), c in 0.05f64..2.0, frac in 0.01f64..0.99) {
        let cfg = Config::default();
        let m = grow_manifold(&p, c, 0.8, &cfg).unwrap();
        let tau = frac * m.end_settling_time();
        let x = m.log_x_at_time(tau).exp();
        let back = m.settling_time_at(x).unwrap();
        prop_assert!((back - tau).abs() <= 1e-9 * tau.max(1.0), "tau {tau}, back {back}");
    }

    #[test]
    fn ranges_hit_both_ends(start in 0.0f64..1.0, n in 1usize..40) {
        let step = 0.05;
        let stop = start + step * (n - 1) as f64;
        let v = parse_values(&format!("{start}:{stop}:{step}")).unwrap();
        prop_assert_eq!(v.len(), n);
        prop_assert!((v[n - 1] - stop).abs() < 1e-9);
    }
}

#[test]
fn log_x_at_time_reaches_both_pieces() {
    let p = Params::new(0.5, 1.0, 0.5).unwrap();
    let cfg = Config::default();
    let m = grow_manifold(&p, 0.9, 0.5, &cfg).unwrap();
    // Deep in the series region and near the far end.
    for tau in [1e-6, 1e-3, 0.5 * m.end_settling_time(), 0.999 * m.end_settling_time()] {
        let x = m.log_x_at_time(tau).exp();
        assert!((m.settling_time_at(x).unwrap() - tau).abs() <= 1e-10 * tau.max(1.0));
    }
    assert_eq!(m.log_x_at_time(0.0), f64::NEG_INFINITY);
    assert_eq!(m.log_x_at_time(2.0 * m.end_settling_time()), m.x_max().ln());
}
