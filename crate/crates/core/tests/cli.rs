use std::fs;
use std::path::Path;
use std::process::{Command, Output};

fn surfembed(args: &[&str], out: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_surfembed"))
        .args(args)
        .arg("--out")
        .arg(out)
        .env_remove("SURFEMBED_OUT")
        .env("RUST_LOG", "warn")
        .output()
        .expect("binary runs")
}

fn read(dir: &Path, name: &str) -> String {
    fs::read_to_string(dir.join(name)).unwrap_or_else(|e| panic!("{name}: {e}"))
}

fn report(dir: &Path) -> serde_json::Value {
    serde_json::from_str(&read(dir, "report.json")).unwrap()
}

#[test]
fn list_prints_every_experiment() {
    let out = Command::new(env!("CARGO_BIN_EXE_surfembed")).arg("list").output().unwrap();
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    let ids: Vec<&str> = text.lines().filter_map(|l| l.split_whitespace().next()).collect();
    assert_eq!(ids, ["A1", "A2", "A3", "A4", "B1", "B2u1", "B2u2", "B2u3", "B3", "M1", "M2"]);
}

#[test]
fn single_grid_run_writes_outputs() {
    let dir = tempfile::tempdir().unwrap();
    let out = surfembed(&["run", "A1", "--n", "81", "--order", "1"], dir.path());
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let errors = read(dir.path(), "errors.csv");
    let lines: Vec<&str> = errors.lines().collect();
    assert_eq!(lines[0], "dx,n,l1,l2,linf");
    assert_eq!(lines.len(), 2);
    assert!(lines[1].starts_with("0.05,81,"));
    assert_eq!(read(dir.path(), "rates.csv"), "norm,rate\n");
    let r = report(dir.path());
    assert_eq!(r["config"]["order"], 1);
    assert_eq!(r["t_final"], 0.5);
    assert!(dir.path().join("timing.json").exists());
    assert!(dir.path().join("n81/snapshot_0001.txt").exists());
    assert!(!dir.path().join("n81/snapshot_0002.txt").exists());
}

#[test]
fn first_order_sweep_reports_rate_near_one() {
    let dir = tempfile::tempdir().unwrap();
    let out = surfembed(&["run", "A1", "--n", "41,81,161", "--order", "1"], dir.path());
    assert!(out.status.success());
    let rates = read(dir.path(), "rates.csv");
    let l1: f64 = rates
        .lines()
        .find_map(|l| l.strip_prefix("l1,"))
        .unwrap()
        .parse()
        .unwrap();
    assert!((0.8..=1.2).contains(&l1), "{l1}");
    assert_eq!(read(dir.path(), "errors.csv").lines().count(), 4);
}

#[test]
fn mass_series_has_one_row_per_output_time() {
    let dir = tempfile::tempdir().unwrap();
    let out = surfembed(&["run", "M1", "--n", "81", "--snapshots", "8", "--t-final", "1"], dir.path());
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let mass = read(dir.path(), "n81/mass.csv");
    let rows: Vec<&str> = mass.lines().skip(1).collect();
    assert_eq!(rows.len(), 8);
    assert!(rows[7].starts_with("1,"));
    assert!(dir.path().join("n81/snapshot_0008.txt").exists());
    let snap = read(dir.path(), "n81/snapshot_0004.txt");
    assert!(snap.lines().any(|l| l == "time 0.5"));
    assert_eq!(report(dir.path())["meshes"][0]["exact_mass"], std::f64::consts::FRAC_PI_2);
}

#[test]
fn identical_runs_give_identical_files() {
    let dir = tempfile::tempdir().unwrap();
    let names = ["errors.csv", "report.json", "n81/mass.csv", "n81/snapshot_0001.txt"];
    let mut runs = Vec::new();
    for _ in 0..2 {
        assert!(surfembed(&["run", "B1", "--n", "81"], dir.path()).status.success());
        runs.push(names.map(|n| read(dir.path(), n)));
    }
    assert_eq!(runs[0], runs[1]);
}

#[test]
fn config_file_is_overridden_by_flags() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.conf");
    fs::write(&cfg, "experiment = A1\nn = 81\norder = 3\ncfl = 0.4\n").unwrap();
    let out_dir = dir.path().join("out");
    let out = surfembed(&["run", "--config", cfg.to_str().unwrap(), "--order", "1"], &out_dir);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let r = report(&out_dir);
    assert_eq!(r["config"]["order"], 1);
    assert_eq!(r["config"]["cfl"], 0.4);
    assert_eq!(r["config"]["n"][0], 81);
}

#[test]
fn invalid_input_fails_with_message() {
    let dir = tempfile::tempdir().unwrap();
    for args in [
        &["run", "A1", "--n", "21"][..],
        &["run", "Z9"],
        &["run", "A1", "--order", "2"],
        &["run", "A1", "--cfl", "0"],
    ] {
        let out = surfembed(args, dir.path());
        assert!(!out.status.success(), "{args:?}");
        assert!(!out.stderr.is_empty(), "{args:?}");
    }
}
