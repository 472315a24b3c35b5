use flamewave_oracle::*;

const FIXTURE: &str = include_str!("../../core/tests/fixtures/oracle_golden.csv");

fn params() -> OracleParams {
    OracleParams::new(0.5, 1.0, 0.5)
}

#[test]
fn zero_speed_undershoots_and_large_speed_overshoots() {
    let p = params();
    for &v0 in &[0.2, 0.5, 0.8] {
        assert_eq!(shoot_time_domain(&p, v0, 0.0, 1e-3).unwrap().outcome, Outcome::Undershoot);
        assert_eq!(shoot_time_domain(&p, v0, 0.3, 1e-3).unwrap().outcome, Outcome::Undershoot);
        assert_eq!(shoot_time_domain(&p, v0, 5.0, 1e-3).unwrap().outcome, Outcome::Overshoot);
    }
}

#[test]
fn shots_report_the_stopping_event() {
    let p = params();
    let under = shoot_time_domain(&p, 0.5, 0.5, 1e-3).unwrap();
    assert!(under.time > 0.0 && under.defect > 0.0);
    let over = shoot_time_domain(&p, 0.5, 3.0, 1e-3).unwrap();
    assert!(over.time > 0.0 && over.k_integral > 0.0 && over.m_integral > 0.0);
}

#[test]
fn shooting_converges_as_the_step_shrinks() {
    let p = params();
    let c: Vec<f64> = [4e-2, 2e-2, 1e-2]
        .iter()
        .map(|&dt| speed_by_shooting(&p, 0.5, dt, 1e-12).unwrap().c)
        .collect();
    let (d1, d2) = ((c[1] - c[0]).abs(), (c[2] - c[1]).abs());
    assert!(d2 < d1, "changes {d1:e} then {d2:e}");
}

#[test]
fn fixture_round_trips() {
    let rows = read_fixture(FIXTURE);
    let mut buf = Vec::new();
    write_fixture(&mut buf, &rows).unwrap();
    assert_eq!(String::from_utf8(buf).unwrap(), FIXTURE);
    let n_speed = rows.iter().filter(|r| r.method == "shooting").count();
    assert_eq!(n_speed, SPEED_REFERENCES.len());
    assert_eq!(rows.len(), SPEED_REFERENCES.len() + 2 * CLOSURE_REFERENCES.len());
}

#[test]
fn fixture_speed_row_is_reproducible() {
    let rows = read_fixture(FIXTURE);
    let (a, l, v0) = SPEED_REFERENCES[3];
    let fresh = speed_by_shooting(&OracleParams::new(a, l, 1.0 - v0), v0, SHOOT_DT, 1e-13).unwrap();
    let pinned = rows
        .iter()
        .find(|r| r.method == "shooting" && r.params.alpha == a && r.params.lambda == l && r.v0 == v0)
        .unwrap();
    assert_eq!(fresh.c.to_bits(), pinned.c.to_bits());
}

#[test]
fn grid_defect_never_increases_across_stages() {
    let p = OracleParams::new(0.5, 2.0, 0.5);
    let stages = grid_search_stages(&p, 11, 1e-3).unwrap();
    assert_eq!(stages.len(), 3);
    for w in stages.windows(2) {
        assert!(w[1].defect <= w[0].defect);
        assert!(w[1].cell_v0 < w[0].cell_v0 && w[1].cell_c < w[0].cell_c);
    }
}

#[test]
fn unit_lewis_closure_is_exact() {
    let p = OracleParams::new(0.5, 1.0, 0.3);
    let g = grid_search_closure(&p, 11, 1e-3).unwrap();
    assert_eq!(g.v0, 0.7);
    let s = shooting_closure(&p, 1e-3, 1e-8).unwrap();
    assert!((s.v0 - 0.7).abs() < 1e-8);
}

#[test]
fn closure_residual_branches() {
    let shot = Shot {
        outcome: Outcome::Overshoot,
        defect: 0.0,
        energy_defect: 0.0,
        time: 1.0,
        arrival: 1.0,
        k_integral: 0.2,
        m_integral: 0.1,
    };
    let r = |l: f64| closure_residual(&OracleParams::new(0.5, l, 0.5), 0.4, 2.0, &shot);
    assert!((r(1.0) - 0.1).abs() < 1e-15);
    assert!((r(0.5) - (0.5 + 0.5 * 0.2 - 0.4)).abs() < 1e-15);
    assert!((r(2.0) - ((0.5 + 2.0 * 0.1) / 2.0 - 0.4)).abs() < 1e-15);
}
