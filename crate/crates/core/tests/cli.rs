use std::process::Command;

fn wavecrit(args: &[&str]) -> (i32, String, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_wavecrit")).args(args).output().unwrap();
    (
        out.status.code().unwrap_or(-1),
        String::from_utf8_lossy(&out.stdout).into_owned(),
        String::from_utf8_lossy(&out.stderr).into_owned(),
    )
}

#[test]
fn kappa_table() {
    let (code, out, _) = wavecrit(&["kappa", "--s", "0,2.5"]);
    assert_eq!(code, 0);
    let lines: Vec<&str> = out.lines().collect();
    assert_eq!(lines[0], "s,regime,kappa,exponent,log_power");
    assert!(lines[1].starts_with("0,sub_half,0.288675"), "{}", lines[1]);
    assert!(lines[2].starts_with("2.5,five_half,0.49733"), "{}", lines[2]);
}

#[test]
fn help_and_validation_exit_codes() {
    assert_eq!(wavecrit(&["--help"]).0, 0);
    assert_eq!(wavecrit(&["no-such-command"]).0, 1);
    let (code, _, err) = wavecrit(&["simulate", "--s", "0", "--R", "0.2", "--grid-density", "2"]);
    assert_eq!(code, 1);
    // every problem reported at once
    assert!(err.contains("grid_density") && err.contains("r_min"), "{err}");
    assert_eq!(wavecrit(&["bench", "--reps", "2"]).0, 1);
    assert_eq!(wavecrit(&["farfield", "--s", "3"]).0, 1);
}

#[test]
fn series_methods_agree_at_large_radius() {
    let (code, out, _) = wavecrit(&["series", "--s", "1", "--m", "0", "--mprime", "2", "--r", "100"]);
    assert_eq!(code, 0);
    let values: Vec<f64> = out.lines().skip(1).map(|l| l.split(',').nth(5).unwrap().parse().unwrap()).collect();
    assert_eq!(values.len(), 2);
    assert!((values[0] / values[1] - 1.0).abs() < 0.05, "{values:?}");
}

#[test]
fn simulate_is_reproducible_and_writes_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("counts.csv");
    let args = ["simulate", "--s", "0", "--R", "8", "--samples", "3", "--seed", "4"];
    let mut with_out = args.to_vec();
    with_out.extend(["--out", path.to_str().unwrap()]);
    assert_eq!(wavecrit(&with_out).0, 0);
    let (_, stdout, _) = wavecrit(&args);
    let counts = |text: &str| -> Vec<String> {
        text.lines().skip(1).map(|l| l.split(',').take(7).collect::<Vec<_>>().join(",")).collect()
    };
    let file = std::fs::read_to_string(&path).unwrap();
    assert_eq!(counts(&file).len(), 3);
    assert_eq!(counts(&file), counts(&stdout));
}

#[test]
fn config_file_supplies_defaults() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("run.conf");
    std::fs::write(&path, "# kappa settings\ns = 1.5\n").unwrap();
    let (code, out, _) = wavecrit(&["kappa", "--config", path.to_str().unwrap()]);
    assert_eq!(code, 0);
    assert!(out.lines().nth(1).unwrap().starts_with("1.5,three_half,"));
    // command-line values win
    let (_, out, _) = wavecrit(&["kappa", "--s", "0", "--config", path.to_str().unwrap()]);
    assert!(out.lines().nth(1).unwrap().starts_with("0,sub_half"));
}

#[test]
fn selftest_passes() {
    let (code, out, _) = wavecrit(&["selftest"]);
    assert_eq!(code, 0, "{out}");
    assert!(out.lines().skip(1).all(|l| l.ends_with(",true")));
}
