use std::fs;

use peridisp::dispersion::PeridynamicParams;
use peridisp::experiments::{
    count_extrema, field_csv, first_moment, loglog_slope, peak_position, run_all, run_figure8,
    run_scenario, summarize, ExperimentConfig, Scenario,
};
use peridisp::spectral::{gaussian_v0, SpectralGrid};

#[test]
fn full_run_passes_every_validator() {
    let dir = tempfile::tempdir().unwrap();
    let reports = run_all(&ExperimentConfig::new(dir.path())).unwrap();
    let summary = summarize(&reports);
    assert!(!summary.contains("FAIL"), "{summary}");
    let names: Vec<&str> = reports.iter().map(|r| r.scenario.as_str()).collect();
    for expected in [
        "fig7",
        "fig8",
        "fig9",
        "fig10",
        "dispersion",
        "conservation",
    ] {
        assert!(
            names.iter().any(|n| n.starts_with(expected)),
            "missing {expected} in {names:?}"
        );
    }
    for r in &reports {
        for a in &r.artifacts {
            assert!(a.exists(), "{}", a.display());
        }
    }
    assert!(dir.path().join("gamma_check.csv").exists());
    assert!(dir.path().join("conservation.csv").exists());
}

#[test]
fn output_is_byte_identical_across_runs() {
    let (a, b) = (tempfile::tempdir().unwrap(), tempfile::tempdir().unwrap());
    let ra = run_figure8(&ExperimentConfig::new(a.path())).unwrap();
    let rb = run_figure8(&ExperimentConfig::new(b.path())).unwrap();
    assert_eq!(ra.artifacts.len(), rb.artifacts.len());
    for (pa, pb) in ra.artifacts.iter().zip(&rb.artifacts) {
        assert_eq!(pa.file_name(), pb.file_name());
        assert_eq!(fs::read(pa).unwrap(), fs::read(pb).unwrap());
    }
}

#[test]
fn field_csv_layout() {
    let grid = SpectralGrid::new(10.0, 64).unwrap();
    let mut sc = Scenario::new(
        "tiny",
        PeridynamicParams::default(),
        0.5,
        grid,
        vec![0.0, 1.0],
    );
    sc.x_window = 5.0;
    let text = field_csv(&run_scenario(&sc).unwrap()).unwrap();
    let mut lines = text.lines();
    let meta = lines.next().unwrap();
    let json = meta.strip_prefix("# tiny,").unwrap();
    let parsed: serde_json::Value = serde_json::from_str(json).unwrap();
    assert_eq!(parsed["v"], 0.5);
    assert_eq!(parsed["grid"]["n_modes"], 64);
    assert_eq!(lines.next().unwrap(), "t,x,u,u_t");
    let rows: Vec<Vec<f64>> = lines
        .map(|l| l.split(',').map(|f| f.parse().unwrap()).collect())
        .collect();
    let inside = grid.positions().iter().filter(|x| x.abs() <= 5.0).count();
    assert_eq!(rows.len(), 2 * inside);
    assert!(rows.iter().all(|r| r.len() == 4 && r[1].abs() <= 5.0));
}

#[test]
fn rejects_unordered_times() {
    let grid = SpectralGrid::new(10.0, 64).unwrap();
    let sc = Scenario::new(
        "bad",
        PeridynamicParams::default(),
        0.0,
        grid,
        vec![1.0, 0.5],
    );
    assert!(run_scenario(&sc).is_err());
}

#[test]
fn profile_diagnostics_on_known_shapes() {
    let grid = SpectralGrid::new(10.0, 1024).unwrap();
    let shifted: Vec<f64> = grid
        .positions()
        .iter()
        .map(|&x| gaussian_v0(x - 1.3))
        .collect();
    assert!((peak_position(&shifted, &grid) - 1.3).abs() < 1e-3);
    assert_eq!(count_extrema(&shifted, &grid, 10.0), 1);
    // ∫ x v₀(x − a) dx = a ∫ v₀ = a π.
    assert!((first_moment(&shifted, &grid) - 1.3 * std::f64::consts::PI).abs() < 1e-10);
    let wave: Vec<f64> = grid
        .positions()
        .iter()
        .map(|&x| (x).sin() * gaussian_v0(0.1 * x))
        .collect();
    assert!(count_extrema(&wave, &grid, 10.0) >= 6);
}

#[test]
fn loglog_slopes_follow_the_two_regimes() {
    let p = PeridynamicParams::with_alpha(0.5, 1.0, 1.0, 0.3).unwrap();
    assert!((loglog_slope(&p, 1e-3, 1e-2, 20).unwrap() - 1.0).abs() < 1e-3);
    assert!((loglog_slope(&p, 1e11, 1e13, 20).unwrap() - 0.3).abs() < 1e-2);
}
