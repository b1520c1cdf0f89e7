use ehybrid_core::par::Exec;
use ehybrid_core::scenario::{builtin, parse_value, run_scenario, set_parameter, sweep, ScenarioSpec, SCENARIOS};
use ehybrid_core::Error;

#[test]
fn sweeps_agree_across_execution_modes() {
    for (name, path, values) in [
        ("rates", "a_d", vec!["100 nm", "350 nm", "1 um"]),
        ("appendixC-pickup", "v_d", vec!["0.1", "0.2", "0.4"]),
        ("noise-ring-factor", "diameter", vec!["50 um", "100 um"]),
    ] {
        let spec = builtin(name).unwrap();
        let values: Vec<_> = values.into_iter().map(parse_value).collect();
        let (par, rec) = sweep(Exec::Parallel, &spec, path, &values).unwrap();
        let (seq, _) = sweep(Exec::Sequential, &spec, path, &values).unwrap();
        assert_eq!(par.to_csv().unwrap(), seq.to_csv().unwrap(), "{name}");
        assert_eq!(par.rows.len(), values.len());
        assert!(rec.path.starts_with("experiment."));
    }
}

#[test]
fn sweep_values_are_in_si_and_ordered() {
    let spec = builtin("rates").unwrap();
    let values: Vec<_> = ["100 nm", "350 nm", "1 um"].into_iter().map(parse_value).collect();
    let (table, rec) = sweep(Exec::Parallel, &spec, "a_d", &values).unwrap();
    assert_eq!(rec.values, vec![100e-9, 350e-9, 1e-6]);
    let g: Vec<f64> = table.column("g_p").unwrap().iter().map(|c| c.as_f64().unwrap()).collect();
    assert!((g[1] / g[0] - 3.5).abs() < 1e-9 && (g[2] / g[0] - 10.0).abs() < 1e-9);
}

#[test]
fn resolved_specs_are_fixed_points() {
    for name in SCENARIOS {
        let r = builtin(name).unwrap().resolve().unwrap();
        assert_eq!(r.resolve().unwrap(), r, "{name}");
    }
}

#[test]
fn closed_form_scenarios_are_deterministic_across_modes() {
    for name in ["rates", "impedance", "appendixE-reduction", "appendixC-pickup", "appendixD-coupling", "heating-rates"] {
        let spec = builtin(name).unwrap();
        let a = run_scenario(&spec, Exec::Parallel).unwrap();
        let b = run_scenario(&spec, Exec::Sequential).unwrap();
        assert_eq!(a, b, "{name}");
    }
}

#[test]
fn config_errors_name_line_and_field() {
    let text = r#"
name = "custom"

[experiment.rates]
omega_x = "1 GHz"
omega_y = "500 MHz"
omega_z = "1 GHz"
b0 = "0.1 T"
omega = "7 GHz"
z = "1 kohm"
a_d = "350 nm"
d2_y = "7.3 um"
calibration = 1.0
magic_orders = [0, 1]
"#;
    let spec = ScenarioSpec::from_toml_str(text).unwrap();
    assert_eq!(spec.name, "custom");

    let bad = text.replace("\"500 MHz\"", "\"500 meters\"");
    match ScenarioSpec::from_toml_str(&bad) {
        Err(Error::Config { line, field, .. }) => {
            assert_eq!(line, Some(6));
            assert_eq!(field.as_deref(), Some("omega_y"));
        }
        other => panic!("{other:?}"),
    }
    let missing = text.replace("z = \"1 kohm\"\n", "");
    match ScenarioSpec::from_toml_str(&missing) {
        Err(Error::Config { field, .. }) => assert_eq!(field.as_deref(), Some("z")),
        other => panic!("{other:?}"),
    }
    let extra = text.replace("calibration = 1.0", "calibration = 1.0\nspeed = 3");
    assert!(matches!(ScenarioSpec::from_toml_str(&extra), Err(Error::Config { .. })));
}

#[test]
fn bad_inputs_are_validation_errors() {
    assert!(matches!(builtin("fig9"), Err(Error::UnknownScenario(_))));
    let spec = builtin("impedance").unwrap();
    assert!(matches!(set_parameter(&spec, "nonsense", parse_value("1")), Err(Error::UnresolvedPath(_))));
    let neg = set_parameter(&spec, "target", parse_value("-5")).unwrap();
    let err = run_scenario(&neg, Exec::Parallel).unwrap_err();
    assert!(matches!(err, Error::InvalidParameter { .. }) && !err.is_numerical(), "{err:?}");
    let chain = set_parameter(&builtin("fig3-swap-n0").unwrap(), "g_p", parse_value("0")).unwrap();
    assert!(run_scenario(&chain, Exec::Parallel).is_err());
}
