use std::fs;
use std::path::PathBuf;
use std::process::{Command, Output};

use skl::kernels::{heat_kernel, KernelQuery};

fn skl(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_skl")).args(args).output().expect("run skl")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn scratch(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("skl-cli-test-{}-{name}", std::process::id()));
    fs::create_dir_all(&dir).unwrap();
    dir
}

#[test]
fn eval_matches_library_bits() {
    let o = skl(&["eval", "--kernel", "heat", "--n", "3", "--k", "0.5", "--t", "0.5", "--r", "0.7"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("n,k,t,r,value,branch,est_error"));
    let row: Vec<&str> = lines.next().unwrap().split(',').collect();
    let value: f64 = row[4].parse().unwrap();
    let direct = heat_kernel(KernelQuery::new(3, 0.5, 0.5, 0.7)).unwrap();
    assert_eq!(value.to_bits(), direct.to_bits());
}

#[test]
fn eval_from_points() {
    let o = skl(&["eval", "--kernel", "heat", "--n", "2", "--k", "0.5", "--t", "1", "--x", "0.3,0.4", "--y", "0,0"]);
    assert_eq!(o.status.code(), Some(0));
    let row = stdout(&o).lines().nth(1).unwrap().to_string();
    assert!(row.starts_with("2,0.5,1.0,0.5,"), "{row}");
}

#[test]
fn wave_table_stays_inside_cone() {
    let o = skl(&["table", "--kernel", "wave", "--n", "2", "--k", "0.5", "--t", "1", "--r", "0:0.99:0.01"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    let rows: Vec<&str> = text.lines().skip(1).collect();
    assert_eq!(rows.len(), 100);
    for row in rows {
        let f: Vec<&str> = row.split(',').collect();
        let (t, r): (f64, f64) = (f[2].parse().unwrap(), f[3].parse().unwrap());
        assert!(r < t);
        let v: f64 = f[4].parse().unwrap();
        // logarithmic singularity on the axis
        assert!(if r == 0.0 { v == f64::INFINITY } else { v.is_finite() }, "{row}");
    }
}

#[test]
fn config_file_runs_and_is_reproducible() {
    let dir = scratch("table");
    let conf = dir.join("table.conf");
    fs::write(&conf, "subcommand=table\nkernel=heat\nn=2..3\nk=0.25,0.5\nt=0.5:1.5:0.5\nr=0.1:0.5:0.2\n").unwrap();
    let (a, b) = (dir.join("a.csv"), dir.join("b.csv"));
    for out in [&a, &b] {
        let o = skl(&["--config", conf.to_str().unwrap(), "--output", out.to_str().unwrap()]);
        assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    }
    let (a, b) = (fs::read(&a).unwrap(), fs::read(&b).unwrap());
    assert_eq!(a, b);
    assert_eq!(String::from_utf8(a).unwrap().lines().count(), 1 + 2 * 2 * 3 * 3);
    fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn flags_override_config_values() {
    let dir = scratch("override");
    let conf = dir.join("eval.conf");
    fs::write(&conf, "kernel=classical-heat\nn=3\nk=0.5\nt=0.5\nr=0.7\n").unwrap();
    let o = skl(&["eval", "--config", conf.to_str().unwrap(), "--t", "2"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).lines().nth(1).unwrap().starts_with("3,0.5,2.0,0.7,"));
    fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn solve_constant_wave_datum() {
    let o = skl(&["solve", "--problem", "wave", "--n", "3", "--k", "0.5", "--t", "0.8", "--x", "0.1,0,0", "--datum", "constant"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    let value: f64 = text.lines().find_map(|l| l.strip_prefix("value=")).unwrap().parse().unwrap();
    assert!((value - 0.8).abs() < 1e-6, "{text}");
    assert!(text.contains("branch=wave_odd"));
}

#[test]
fn limits_prints_ladder() {
    let o = skl(&["limits", "--target", "heat_k0", "--n", "3", "--j", "6..9"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    assert_eq!(text.lines().next(), Some("parameter,distance,ratio"));
    assert_eq!(text.lines().filter(|l| !l.starts_with('#')).count(), 5);
}

#[test]
fn verify_certified_range_passes() {
    let dir = scratch("verify");
    let summary = dir.join("summary.csv");
    let o = skl(&["verify", "--suite", "all", "--n", "2..5", "--output", summary.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    assert!(stdout(&o).lines().any(|l| l.starts_with("PASS")));
    let csv = fs::read_to_string(&summary).unwrap();
    assert!(csv.starts_with("check,status,detail"));
    assert!(csv.lines().count() > 10);
    fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn validation_errors_exit_two() {
    for args in [
        &["eval", "--kernel", "heat", "--n", "9", "--k", "0.5", "--t", "1", "--r", "0.5"][..],
        &["eval", "--kernel", "wave", "--n", "3", "--k", "0.5", "--t", "1", "--r", "1.5"],
        &["solve", "--problem", "heat", "--n", "3", "--k", "-1", "--t", "1"],
        &["eval", "--kernel", "nope", "--n", "3", "--k", "0.5", "--t", "1", "--r", "0.5"],
        &["verify", "--suite", "bogus"],
    ] {
        let o = skl(args);
        assert_eq!(o.status.code(), Some(2), "{args:?}");
    }
}
