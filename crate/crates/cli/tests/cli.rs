use std::path::Path;
use std::process::{Command, Output};

fn ehybrid(out: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_ehybrid"))
        .arg("--out")
        .arg(out)
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

#[test]
fn lists_scenarios() {
    let dir = tempfile::tempdir().unwrap();
    let o = ehybrid(dir.path(), &["scenarios"]);
    assert!(o.status.success());
    let text = stdout(&o);
    for name in ["fig3-swap-n1", "cooling", "trap-stability", "appendixD-coupling", "impedance"] {
        assert!(text.contains(name), "{name} missing");
    }
}

#[test]
fn design_writes_csv_with_units_and_manifest() {
    let dir = tempfile::tempdir().unwrap();
    let o = ehybrid(dir.path(), &["design", "rates"]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    assert!(stdout(&o).contains("g_p"));
    let summary = std::fs::read_to_string(dir.path().join("rates-summary.csv")).unwrap();
    let header = summary.lines().next().unwrap();
    assert!(header.starts_with("y0 [m],q0 [C],g [rad/s],g_p [rad/s]"), "{header}");
    let manifest = std::fs::read_to_string(dir.path().join("manifest.toml")).unwrap();
    assert!(manifest.contains("tool_version") && manifest.contains("rates-magic.csv"));
}

#[test]
fn manifest_reruns_to_identical_files() {
    let a = tempfile::tempdir().unwrap();
    let b = tempfile::tempdir().unwrap();
    assert!(ehybrid(a.path(), &["simulate", "appendixE-reduction", "--set", "g_lc=7 MHz"]).status.success());
    let manifest = a.path().join("manifest.toml");
    let o = ehybrid(b.path(), &["--sequential", "simulate", "--config", manifest.to_str().unwrap()]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    for file in ["appendixE-reduction-eigenvalues.csv", "appendixE-reduction-summary.csv"] {
        assert_eq!(std::fs::read(a.path().join(file)).unwrap(), std::fs::read(b.path().join(file)).unwrap(), "{file}");
    }
    // the override travelled through the manifest
    let shown = ehybrid(b.path(), &["show", "--config", manifest.to_str().unwrap()]);
    assert!(stdout(&shown).contains("g_lc = 43982297.15"), "{}", stdout(&shown));
}

#[test]
fn sweep_writes_one_row_per_value() {
    let dir = tempfile::tempdir().unwrap();
    let o = ehybrid(dir.path(), &["sweep", "impedance", "--param", "target", "--values", "500 ohm,1 kohm,2 kohm"]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let csv = std::fs::read_to_string(dir.path().join("impedance-sweep-target.csv")).unwrap();
    let lines: Vec<&str> = csv.lines().collect();
    assert_eq!(lines.len(), 4);
    assert!(lines[0].starts_with("target [SI],required_z_cpw_mode_1 [ohm]"), "{}", lines[0]);
    assert!(lines[2].starts_with("1000.0,"));
}

#[test]
fn invalid_input_exits_with_two() {
    let dir = tempfile::tempdir().unwrap();
    for args in [
        vec!["simulate", "no-such-scenario"],
        vec!["design", "impedance", "--set", "target=-5"],
        vec!["design", "rates", "--set", "a_d=3 GHz"],
        vec!["sweep", "rates", "--param", "bogus", "--values", "1,2"],
        vec!["simulate", "rates", "--set", "novalue"],
    ] {
        let o = ehybrid(dir.path(), &args);
        assert_eq!(o.status.code(), Some(2), "{args:?}: {}", String::from_utf8_lossy(&o.stderr));
        assert!(String::from_utf8_lossy(&o.stderr).starts_with("error:"));
    }
}

#[test]
fn config_error_reports_line_and_field() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("bad.toml");
    std::fs::write(
        &path,
        "name = \"x\"\n\n[experiment.impedance]\nz_cpw = [\"50 ohm\"]\nmodes = [1]\ntarget = \"1 GHz\"\n",
    )
    .unwrap();
    let o = ehybrid(dir.path(), &["simulate", "--config", path.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    let err = String::from_utf8_lossy(&o.stderr);
    assert!(err.contains("line 6") && err.contains("target"), "{err}");
}

#[test]
fn missing_config_file_is_io_error() {
    let dir = tempfile::tempdir().unwrap();
    let o = ehybrid(dir.path(), &["simulate", "--config", "/nonexistent/spec.toml"]);
    assert_eq!(o.status.code(), Some(1));
}
