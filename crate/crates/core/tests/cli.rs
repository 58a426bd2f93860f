use std::path::Path;
use std::process::Command;

fn floquet(dir: &Path, args: &[&str]) -> (i32, String, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_floquet"))
        .current_dir(dir)
        .args(args)
        .output()
        .expect("binary runs");
    (
        out.status.code().unwrap_or(-1),
        String::from_utf8(out.stdout).unwrap(),
        String::from_utf8(out.stderr).unwrap(),
    )
}

const SPIN_ONE: &str = "spin = 1.0\ng_factor = 1.0\nomega = 1.0\n";

#[test]
fn fig2_writes_csv_and_is_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    std::fs::write(
        dir.path().join("run.toml"),
        format!("{SPIN_ONE}[fig2]\na_grid = [0.0, 1.0]\nrho = 0.3\n"),
    )
    .unwrap();
    let (code, _, err) = floquet(dir.path(), &["fig2", "--config", "run.toml", "--out", "a.csv"]);
    assert_eq!(code, 0, "{err}");
    let (code, stdout, _) = floquet(dir.path(), &["fig2", "--config", "run.toml"]);
    assert_eq!(code, 0);
    let written = std::fs::read_to_string(dir.path().join("a.csv")).unwrap();
    assert_eq!(written, stdout);
    assert!(written.starts_with("a,gamma,p1_exact,p0_exact,pm1_exact,p1_analytic,p0_analytic,pm1_analytic,max_dev\n"));
    assert_eq!(written.lines().count(), 3);
}

#[test]
fn echo_output_reparses_to_same_experiment() {
    let dir = tempfile::tempdir().unwrap();
    let text = format!(
        "{SPIN_ONE}theta = 0.5\n\n[[segment]]\nkind = \"ramp_up\"\nduration = 40.0\ntarget = [0.0, 0.0, 1.0]\n\n\
         [[segment]]\nkind = \"rotate_loop\"\naxis = [1.0, 0.0, 0.0]\nomega = 0.2\nedge = 6.0\n\n\
         [[segment]]\nkind = \"ramp_down\"\nduration = 40.0\n"
    );
    std::fs::write(dir.path().join("in.toml"), &text).unwrap();
    let (code, echoed, _) = floquet(dir.path(), &["echo", "--config", "in.toml"]);
    assert_eq!(code, 0);
    std::fs::write(dir.path().join("echo.toml"), &echoed).unwrap();
    let (_, again, _) = floquet(dir.path(), &["echo", "--config", "echo.toml"]);
    assert_eq!(echoed, again);

    let (_, a, _) = floquet(dir.path(), &["evolve", "--config", "in.toml", "--steps", "128"]);
    let (_, b, _) = floquet(dir.path(), &["evolve", "--config", "echo.toml", "--steps", "128"]);
    assert_eq!(a, b);
}

#[test]
fn exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    std::fs::write(dir.path().join("ok.toml"), SPIN_ONE).unwrap();
    std::fs::write(dir.path().join("bad.toml"), "spin = 0.3\ng_factor = 1.0\nomega = 1.0\n").unwrap();
    std::fs::write(
        dir.path().join("overlap.toml"),
        format!(
            "{SPIN_ONE}[[segment]]\nkind = \"ramp_up\"\nduration = 10.0\ntarget = [0.0, 0.0, 1.0]\n\
             [[segment]]\nkind = \"ramp_down\"\nstart = 4.0\nduration = 10.0\n"
        ),
    )
    .unwrap();

    assert_eq!(floquet(dir.path(), &["evolve", "--config", "ok.toml"]).0, 0);
    assert_eq!(floquet(dir.path(), &["evolve", "--config", "bad.toml"]).0, 2);
    let (code, _, err) = floquet(dir.path(), &["evolve", "--config", "overlap.toml"]);
    assert_eq!(code, 2);
    assert!(err.contains("segment 1"), "{err}");
    assert_eq!(floquet(dir.path(), &["evolve", "--config", "ok.toml", "--steps", "16"]).0, 3);
    assert_eq!(floquet(dir.path(), &["evolve", "--config", "missing.toml"]).0, 4);
    assert_eq!(
        floquet(dir.path(), &["evolve", "--config", "ok.toml", "--out", "no/such/dir/x.csv"]).0,
        4
    );
}

#[test]
fn wcheck_runs_without_config_and_honours_seed() {
    let dir = tempfile::tempdir().unwrap();
    let (code, a, _) = floquet(dir.path(), &["wcheck", "--seed", "11"]);
    assert_eq!(code, 0);
    let (_, b, _) = floquet(dir.path(), &["wcheck", "--seed", "11"]);
    let (_, c, _) = floquet(dir.path(), &["wcheck", "--seed", "12"]);
    assert_eq!(a, b);
    assert_ne!(a, c);
    for line in a.lines().skip(1) {
        let worst: f64 = line.rsplit(',').next().unwrap().parse().unwrap();
        assert!(worst < 1e-6);
    }
}

#[test]
fn holonomy_warns_on_non_unit_axis() {
    let dir = tempfile::tempdir().unwrap();
    std::fs::write(
        dir.path().join("h.toml"),
        "spin = 0.5\ng_factor = 1.0\nomega = 1.0\n[holonomy]\naxes = [[0.0, 0.0, 3.0]]\na = 1.0\n",
    )
    .unwrap();
    let (code, out, err) = floquet(dir.path(), &["holonomy", "--config", "h.toml"]);
    assert_eq!(code, 0);
    assert!(err.contains("normalized"));
    assert!(out.lines().nth(1).unwrap().starts_with("loop,0,,0.0000000000000000e0,0.0000000000000000e0,1.0000000000000000e0,"));
}
