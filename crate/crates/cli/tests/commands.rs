use std::process::Command;

use cyclosrg::{critical_group, Bounds, Method, Params};
use cyclosrg_cli::{report, run};
use serde_json::Value;

fn cli(args: &[&str]) -> (String, String, i32) {
    let out = Command::new(env!("CARGO_BIN_EXE_cyclosrg")).args(args).output().expect("binary runs");
    (String::from_utf8(out.stdout).unwrap(), String::from_utf8(out.stderr).unwrap(), out.status.code().unwrap())
}

fn with_name<'a>(args: &[&'a str]) -> Vec<&'a str> {
    std::iter::once("cyclosrg").chain(args.iter().copied()).collect()
}

#[test]
fn compute_both_reports_order() {
    let (stdout, _, code) = cli(&["compute", "--p", "2", "--ell", "3", "--t", "2", "--method", "both"]);
    assert_eq!(code, 0);
    let v: Value = serde_json::from_str(&stdout).unwrap();
    assert_eq!(v["order_factorization"]["2"], 31);
    assert_eq!(v["schema"], 1);
    assert_eq!(v["free_rank"], 1);
    assert_eq!(v["bruteforce_mode"], "full_snf");
    assert!(v["checks"].as_array().unwrap().iter().all(|c| c["passed"] == true));
}

#[test]
fn compute_g234_formula_lists_two_part() {
    let (stdout, _, code) = cli(&["compute", "--p", "2", "--ell", "3", "--t", "4", "--method", "formula"]);
    assert_eq!(code, 0);
    let v: Value = serde_json::from_str(&stdout).unwrap();
    let e: Vec<u64> = (1..=9).map(|j| v["p_multiplicities"][j.to_string()].as_u64().unwrap()).collect();
    assert_eq!(e, [32, 8, 16, 84, 1, 16, 8, 32, 28]);
    assert_eq!(v["order_factorization"]["3"], 85);
    assert_eq!(v["order_factorization"]["5"], 170);
}

#[test]
fn usage_errors_exit_one() {
    let (_, stderr, code) = cli(&["compute", "--p", "7", "--ell", "3", "--t", "1"]);
    assert_eq!(code, 1);
    assert!(stderr.contains("not primitive"), "{stderr}");
    let (_, stderr, code) = cli(&["verify", "--p", "2", "--ell", "3", "--t", "1", "--which", "srg"]);
    assert_eq!(code, 1);
    assert!(stderr.contains("disconnected"), "{stderr}");
    let (_, _, code) = cli(&["table", "--t", "2", "--p-list", ""]);
    assert_eq!(code, 1);
    let (_, _, code) = cli(&["table", "--t", "2"]);
    assert_eq!(code, 1);
    let (_, stderr, code) = cli(&["table", "--t", "2", "--p-list", "5,7"]);
    assert_eq!(code, 1);
    assert!(stderr.contains('7'), "{stderr}");
    let (_, _, code) = cli(&["compute", "--p", "2", "--ell", "3"]);
    assert_eq!(code, 1);
    let (_, _, code) = cli(&["verify", "--p", "3", "--ell", "5", "--t", "1", "--which", "walks"]);
    assert_eq!(code, 1);
    let (stdout, _, code) = cli(&["--help"]);
    assert_eq!(code, 0);
    assert!(stdout.contains("compute"));
}

#[test]
fn brute_force_bound_from_environment() {
    let out = Command::new(env!("CARGO_BIN_EXE_cyclosrg"))
        .args(["compute", "--p", "5", "--ell", "3", "--t", "1", "--method", "bruteforce"])
        .env("CYCLO_MAX_Q", "16")
        .output()
        .unwrap();
    // q = 25 is now above the full Smith form bound
    assert_eq!(out.status.code(), Some(0));
    let v: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["bruteforce_mode"], "local_snf");
}

#[test]
fn verify_suites_pass() {
    for (p, ell, t, which) in [("5", "3", "1", "stickelberger"), ("2", "3", "2", "blocks"), ("2", "3", "3", "all"), ("3", "5", "1", "all")] {
        let (stdout, stderr, code) = cli(&["verify", "--p", p, "--ell", ell, "--t", t, "--which", which]);
        assert_eq!(code, 0, "{p} {ell} {t} {which}: {stderr}");
        let v: Value = serde_json::from_str(&stdout).unwrap();
        assert!(v["checks"].as_array().unwrap().iter().all(|c| c["passed"] == true));
    }
}

#[test]
fn verify_precision_too_small() {
    let (stdout, stderr, code) = cli(&["verify", "--p", "5", "--ell", "3", "--t", "1", "--which", "blocks", "--precision", "2"]);
    assert_eq!(code, 1, "{stderr}");
    let v: Value = serde_json::from_str(&stdout).unwrap();
    assert_eq!(v["checks"][0]["passed"], false);
}

#[test]
fn table_rows() {
    let (stdout, _, code) = cli(&["table", "--t", "1", "--p-list", "5"]);
    assert_eq!(code, 0);
    let v: Value = serde_json::from_str(&stdout).unwrap();
    assert_eq!(v["rows"][0]["p_multiplicities"], serde_json::json!({"0": 8, "1": 10, "2": 6}));
    let (stdout, _, _) = cli(&["table", "--t", "4", "--p-list", "5,11", "--format", "text"]);
    assert_eq!(stdout.lines().count(), 2);
    assert!(stdout.starts_with("p = 5: e_0 = 7680,"), "{stdout}");
}

#[test]
fn text_format() {
    let (stdout, _, code) = cli(&["compute", "--p", "5", "--ell", "3", "--t", "1", "--method", "both", "--format", "text"]);
    assert_eq!(code, 0);
    for line in ["Z x 1", "2^1 x 16", "5^1 x 10", "5^2 x 6", "order: 2^16 * 5^22"] {
        assert!(stdout.lines().any(|l| l == line), "missing {line:?} in\n{stdout}");
    }
}

#[test]
fn laplacian_export() {
    let dir = std::env::temp_dir().join(format!("cyclosrg-export-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("l.txt");
    let (_, _, code) = cli(&["compute", "--p", "2", "--ell", "3", "--t", "2", "--export-laplacian", path.to_str().unwrap()]);
    assert_eq!(code, 0);
    let text = std::fs::read_to_string(&path).unwrap();
    let rows: Vec<Vec<i64>> =
        text.lines().map(|l| l.split(' ').map(|x| x.parse().unwrap()).collect()).collect();
    assert_eq!(rows.len(), 16);
    for (i, row) in rows.iter().enumerate() {
        assert_eq!(row.len(), 16);
        assert_eq!(row[i], 5);
        assert_eq!(row.iter().sum::<i64>(), 0);
    }
    std::fs::remove_dir_all(dir).unwrap();
}

#[test]
fn json_round_trips() {
    for (p, ell, t, method) in [(2, 3, 2, "both"), (5, 3, 1, "bruteforce"), (3, 5, 1, "formula"), (2, 3, 40, "formula")] {
        let args = ["compute", "--p", &p.to_string(), "--ell", &ell.to_string(), "--t", &t.to_string(), "--method", method]
            .map(str::to_string);
        let out = run(with_name(&args.iter().map(String::as_str).collect::<Vec<_>>()), Bounds::default());
        assert_eq!(out.code, 0, "{}", out.stderr);
        let parsed = report::result_from_json(&serde_json::from_str(&out.stdout).unwrap()).unwrap();
        let direct = critical_group(&Params::new(p, ell, t).unwrap(), method.parse::<Method>().unwrap(), &Bounds::default()).unwrap();
        assert_eq!(parsed, direct);
        assert_eq!(serde_json::to_string_pretty(&report::result_to_json(&parsed)).unwrap() + "\n", out.stdout);
    }
}

#[test]
fn output_is_deterministic() {
    let runs = [
        with_name(&["compute", "--p", "5", "--ell", "3", "--t", "1", "--method", "both"]),
        with_name(&["compute", "--p", "5", "--ell", "3", "--t", "1", "--method", "both", "--threads", "1"]),
        with_name(&["compute", "--p", "5", "--ell", "3", "--t", "1", "--method", "both", "--threads", "3"]),
    ];
    let outs: Vec<_> = runs.iter().map(|a| run(a.clone(), Bounds::default())).collect();
    assert!(outs.windows(2).all(|w| w[0] == w[1]));
    let sampled = with_name(&["verify", "--p", "2", "--ell", "3", "--t", "5", "--which", "stickelberger", "--seed", "7"]);
    let a = run(sampled.clone(), Bounds::default());
    assert_eq!(a.code, 0, "{}", a.stderr);
    assert!(a.stdout.contains("sampled 20000 pairs"), "{}", a.stdout);
    assert_eq!(a, run(sampled, Bounds::default()));
    let (first, _, _) = cli(&["table", "--t", "6", "--p-list", "2,5,11"]);
    let (second, _, _) = cli(&["table", "--t", "6", "--p-list", "2,5,11"]);
    assert_eq!(first, second);
}
