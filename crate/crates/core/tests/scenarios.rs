use ccva_core::scenarios::{
    run_midpoint, run_slowest_uniform, run_transition, GridMarket, MidpointConfig, SlowestUniformConfig,
    TransitionConfig,
};

fn small_midpoint() -> MidpointConfig {
    MidpointConfig { widths: vec![1.0, 30.0, 70.0], irs: vec![20.0, 40.0], ..Default::default() }
}

#[test]
fn parallel_equals_serial() {
    let gm = GridMarket::default();
    let su = SlowestUniformConfig::default();
    assert_eq!(run_slowest_uniform(&gm, &su, Some(1)).unwrap(), run_slowest_uniform(&gm, &su, Some(4)).unwrap());
    let mp = small_midpoint();
    assert_eq!(run_midpoint(&gm, &mp, Some(1)).unwrap(), run_midpoint(&gm, &mp, Some(3)).unwrap());
    let tr = TransitionConfig::default();
    assert_eq!(run_transition(&gm, &tr, Some(1)).unwrap(), run_transition(&gm, &tr, None).unwrap());
}

#[test]
fn repeated_runs_are_identical() {
    let gm = GridMarket::default();
    let mp = small_midpoint();
    let a = run_midpoint(&gm, &mp, None).unwrap();
    let b = run_midpoint(&gm, &mp, None).unwrap();
    assert_eq!(a, b);
}

#[test]
fn transition_impact_fades_with_later_midpoints() {
    let grid = run_transition(&GridMarket::default(), &TransitionConfig::default(), None).unwrap();
    for r in 0..grid.rows.len() {
        let mut prev = f64::INFINITY;
        for c in 0..grid.cols.len() {
            let rep = &grid.cell(r, c).outcome.as_ref().unwrap().report;
            assert!(rep.cd_cva.abs() <= prev);
            prev = rep.cd_cva.abs();
        }
    }
}

#[test]
fn invalid_cells_fail_without_aborting_the_grid() {
    let cfg = MidpointConfig { widths: vec![10.0, 90.0], irs: vec![20.0], ..Default::default() };
    let grid = run_midpoint(&GridMarket::default(), &cfg, None).unwrap();
    assert!(grid.find(10.0, 20.0).unwrap().outcome.is_ok());
    assert_eq!(grid.failures().count(), 1);
}

#[test]
fn slowest_uniform_diagnostics() {
    let grid = run_slowest_uniform(&GridMarket::default(), &SlowestUniformConfig::default(), None).unwrap();
    let slopes: Vec<f64> = (0..grid.rows.len())
        .map(|r| grid.cell(r, 0).outcome.as_ref().unwrap().diagnostics.cds_slope_bps_per_year.unwrap().round())
        .collect();
    assert_eq!(slopes, [125.0, 83.0, 63.0, 50.0, 42.0, 36.0]);
}
