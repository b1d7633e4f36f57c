use std::fs;
use std::path::Path;
use std::process::{Command, Output};

const UNSTABLE: [&str; 8] = ["--alpha", "2", "--epsilon", "0.1", "--c", "1", "--d", "1"];

fn ecofire(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_ecofire"))
        .args(args)
        .env_remove(ecofire_cli::OUT_DIR_ENV)
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn rows(csv: &str) -> Vec<Vec<String>> {
    csv.lines()
        .skip(1)
        .map(|l| l.split(',').map(str::to_string).collect())
        .collect()
}

fn with_unstable<'a>(args: &[&'a str]) -> Vec<&'a str> {
    args.iter().copied().chain(UNSTABLE).collect()
}

#[test]
fn equilibria_all_ones() {
    let out = ecofire(&["equilibria"]);
    assert!(out.status.success());
    let r = rows(&stdout(&out));
    assert_eq!(r[0][0], "E0");
    let e0: Vec<f64> = r[0][1..].iter().map(|x| x.parse().unwrap()).collect();
    assert_eq!(e0, vec![0.0, 0.0, 1.0]);
    let golden = (5f64.sqrt() - 1.0) / 2.0;
    for x in &r[1][1..] {
        assert!((x.parse::<f64>().unwrap() - golden).abs() < 1e-15);
    }
}

#[test]
fn wavetrain_without_instability_fails_numerically() {
    let out = ecofire(&["wavetrain"]);
    assert_eq!(out.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&out.stderr).contains("no wave train: Upsilon >= 0"));
}

#[test]
fn wavetrain_unstable_params() {
    let out = ecofire(&with_unstable(&["wavetrain"]));
    assert!(out.status.success());
    let r = rows(&stdout(&out));
    let mu: f64 = r[0][0].parse().unwrap();
    let sigma: f64 = r[0][1].parse().unwrap();
    assert!((mu - 0.1374128021540243).abs() < 1e-10);
    assert!((sigma - 1.6516166768020915).abs() < 1e-9);
}

#[test]
fn dispersion_changes_sign_once() {
    let out = ecofire(&with_unstable(&["dispersion", "--mu-max", "2", "--samples", "201"]));
    assert!(out.status.success());
    let r = rows(&stdout(&out));
    assert_eq!(r.len(), 201);
    let phi: Vec<f64> = r.iter().map(|row| row[4].parse().unwrap()).collect();
    let changes: Vec<usize> = (1..phi.len()).filter(|&i| (phi[i] > 0.0) != (phi[i - 1] > 0.0)).collect();
    assert_eq!(changes.len(), 1);
    let mu: f64 = r[changes[0]][0].parse().unwrap();
    assert!((mu - 0.137).abs() < 0.011, "{mu}");
}

#[test]
fn exit_codes() {
    assert_eq!(ecofire(&["equilibria", "--alpha", "-1"]).status.code(), Some(2));
    assert_eq!(ecofire(&["dispersion", "--samples", "1"]).status.code(), Some(2));
    assert_eq!(ecofire(&["competition", "--mu", "0.1"]).status.code(), Some(2));
    assert_eq!(ecofire(&["nonsense"]).status.code(), Some(2));
    let out = ecofire(&["simulate-pde", "--mu", "0.5", "--c", "1", "--grid", "4"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("`grid`"));
    let out = ecofire(&["simulate-pde", "--mu", "0.5", "--c", "1", "--method", "rk4", "--dt", "1", "--no-clamp"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn outputs_are_deterministic() {
    let args = with_unstable(&["sweep", "--axis", "alpha", "--from", "0.5", "--to", "5", "--samples", "33"]);
    let a = ecofire(&args);
    let b = ecofire(&args);
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
    let args = ["simulate-ode", "--t-final", "5"];
    assert_eq!(ecofire(&args).stdout, ecofire(&args).stdout);
}

#[test]
fn sweep_upsilon_crosses_zero_once() {
    let out = ecofire(&["sweep", "--epsilon", "0.1", "--axis", "alpha", "--from", "0.1", "--to", "20", "--samples", "400"]);
    assert!(out.status.success());
    let ups: Vec<f64> = rows(&stdout(&out)).iter().map(|r| r[1].parse().unwrap()).collect();
    assert!(ups[0] > 0.0 && *ups.last().unwrap() < 0.0);
    let changes = ups.windows(2).filter(|w| (w[0] > 0.0) != (w[1] > 0.0)).count();
    assert_eq!(changes, 1);
}

#[test]
fn sweep_with_stable_range_has_zero_threshold() {
    for extra in [&[][..], &["--c", "1", "--d", "1"][..]] {
        let mut args = vec!["sweep", "--axis", "alpha", "--from", "0.1", "--to", "1", "--samples", "10"];
        args.extend_from_slice(extra);
        let out = ecofire(&args);
        for r in rows(&stdout(&out)) {
            assert!(r[1].parse::<f64>().unwrap() > 0.0);
            assert_eq!(r[3].parse::<f64>().unwrap(), 0.0);
            assert!(r[4].is_empty() && r[5].is_empty());
        }
    }
}

#[test]
fn dump_config_round_trips() {
    let dir = tempfile::tempdir().unwrap();
    let args = with_unstable(&["simulate-pde", "--mu", "0.05", "--times", "0,1.5,3", "--t-final", "3", "--grid", "32"]);
    let mut dump_args = args.clone();
    dump_args.push("--dump-config");
    let dumped = ecofire(&dump_args);
    assert!(dumped.status.success());
    let path = dir.path().join("run.cfg");
    fs::write(&path, &dumped.stdout).unwrap();
    let path_str = path.to_str().unwrap();

    // Re-parsing the dump reproduces the same configuration.
    let again = ecofire(&["--config", path_str, "--dump-config"]);
    assert_eq!(again.stdout, dumped.stdout);
    let parsed = ecofire_cli::RunConfig::from_config_str(&stdout(&dumped)).unwrap();
    assert_eq!(parsed.to_config_string(), stdout(&dumped));

    // And runs identically to the flag form.
    assert_eq!(ecofire(&["--config", path_str]).stdout, ecofire(&args).stdout);
}

#[test]
fn flags_override_config_values() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("c.cfg");
    fs::write(&path, "command = equilibria\n[params]\ngamma = 2\n").unwrap();
    let p = path.to_str().unwrap();
    let out = ecofire(&["--config", p, "--gamma", "1"]);
    assert_eq!(stdout(&out), stdout(&ecofire(&["equilibria"])));
    let out = ecofire(&["stability", "--config", p]);
    assert!(stdout(&out).starts_with("label,classification"));
}

#[test]
fn output_directory_from_environment() {
    let dir = tempfile::tempdir().unwrap();
    let run = |extra: &[&str]| {
        Command::new(env!("CARGO_BIN_EXE_ecofire"))
            .arg("kernel-moments")
            .args(extra)
            .env(ecofire_cli::OUT_DIR_ENV, dir.path())
            .output()
            .unwrap()
    };
    assert!(run(&[]).status.success());
    let default = dir.path().join("kernel-moments.csv");
    assert!(default.exists());
    assert!(run(&["-o", "sub/k.csv"]).status.success());
    let nested = dir.path().join("sub/k.csv");
    assert_eq!(fs::read(&default).unwrap(), fs::read(Path::new(&nested)).unwrap());
}

#[test]
fn simulate_pde_writes_long_form_snapshots() {
    let out = ecofire(&with_unstable(&["simulate-pde", "--mu", "0.5", "--grid", "16", "--t-final", "2", "--times", "0,1,2"]));
    assert!(out.status.success());
    let text = stdout(&out);
    assert!(text.starts_with("t,x,f,v,w\n"));
    assert_eq!(rows(&text).len(), 3 * 16);
}

#[test]
fn clamped_step_warns() {
    let out = ecofire(&with_unstable(&["simulate-pde", "--mu", "0.5", "--grid", "64", "--method", "rk4", "--dt", "0.5", "--t-final", "1"]));
    assert!(out.status.success());
    assert!(String::from_utf8_lossy(&out.stderr).contains("warning: dt reduced"));
}
