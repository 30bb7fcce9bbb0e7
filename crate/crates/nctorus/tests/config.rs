use nctorus::config::{box_side, ConfigError, ExperimentConfig};
use nctorus::OutputFormat;

#[test]
fn defaults_fill_missing_fields() {
    let cfg = ExperimentConfig::from_json(r#"{"seed": 9, "format": "json"}"#).unwrap();
    assert_eq!(cfg.seed, 9);
    assert_eq!(cfg.format, OutputFormat::Json);
    assert_eq!(cfg.n_grid, vec![4, 6, 8, 10]);
    assert_eq!(cfg.s_margin, 0.5);
    cfg.validate().unwrap();
    let rs = cfg.effective_r_grid();
    assert_eq!(rs.len(), 3);
    assert!((rs[0] - 1.1 * 2.0 / 3.0).abs() < 1e-15);
    assert!(ExperimentConfig::from_json(r#"{"sed": 9}"#).is_err());
}

#[test]
fn full_document() {
    let cfg = ExperimentConfig::from_json(
        r#"{"d": 3, "theta": [[0, 0.1, 0.2], [-0.1, 0, 0.3], [-0.2, -0.3, 0]],
            "N_grid": [1, 2], "alpha1": 0.5, "alpha2": 0, "r_grid": [1.5],
            "s_margin": 0.25, "seed": 3, "out": "x.csv", "format": "csv"}"#,
    )
    .unwrap();
    let theta = cfg.validate().unwrap();
    assert_eq!(theta.dim(), 3);
    assert_eq!(cfg.effective_r_grid(), vec![1.5]);
    assert_eq!(cfg.r_star(), 6.0 / 4.0);
}

#[test]
fn invalid_configs() {
    let base = ExperimentConfig::default();
    let check = |f: &dyn Fn(&mut ExperimentConfig)| {
        let mut c = base.clone();
        f(&mut c);
        c.validate().unwrap_err()
    };
    assert!(matches!(
        check(&|c| c.n_grid = vec![4, 2]),
        ConfigError::GridOrder { prev: 4, next: 2 }
    ));
    assert!(matches!(
        check(&|c| c.n_grid = vec![4, 4]),
        ConfigError::GridOrder { .. }
    ));
    assert!(matches!(
        check(&|c| c.n_grid.clear()),
        ConfigError::EmptyGrid
    ));
    assert!(matches!(
        check(&|c| c.r_grid = vec![1.0, 0.0]),
        ConfigError::BadR(_)
    ));
    assert!(matches!(
        check(&|c| c.r_grid = vec![f64::NAN]),
        ConfigError::BadR(_)
    ));
    assert!(matches!(
        check(&|c| c.alpha2 = -0.1),
        ConfigError::BadAlpha { what: "alpha2", .. }
    ));
    assert!(matches!(check(&|c| c.d = 1), ConfigError::Dimension(1)));
    assert!(matches!(
        check(&|c| c.d = 3),
        ConfigError::ThetaDimension { d: 3, found: 2 }
    ));
    assert!(matches!(
        check(&|c| c.theta[0][1] = 0.2),
        ConfigError::Theta(_)
    ));
}

#[test]
fn size_guard() {
    assert_eq!(box_side(2, 10).unwrap(), 441);
    assert!(box_side(2, 34).is_ok());
    assert!(matches!(
        box_side(2, 35),
        Err(ConfigError::TooLarge { side: 5041, .. })
    ));
    assert!(box_side(3, 8).is_ok());
    assert!(box_side(3, 9).is_err());
    assert!(box_side(40, 100).is_err());
}
