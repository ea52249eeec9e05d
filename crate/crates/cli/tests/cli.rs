use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use ndschaos::distchaos::{fraction_at, pair_profile};
use ndschaos::system::ExpandingFamily;

const BIN: &str = env!("CARGO_BIN_EXE_ndschaos");

fn write(dir: &Path, name: &str, body: &str) -> PathBuf {
    let p = dir.join(name);
    std::fs::write(&p, body).unwrap();
    p
}

fn run(args: &[&str]) -> Output {
    Command::new(BIN).args(args).output().unwrap()
}

fn run_config(cmd: &[&str], config: &Path, out: &Path, extra: &[&str]) -> Output {
    let mut args: Vec<&str> = cmd.to_vec();
    args.extend(["--config", config.to_str().unwrap(), "--out", out.to_str().unwrap()]);
    args.extend(extra);
    run(&args)
}

/// `(params, header, rows)` of an artifact.
type Table = (Vec<(String, String)>, Vec<String>, Vec<Vec<String>>);

fn parse(text: &str) -> Table {
    let mut params = Vec::new();
    let mut body = String::new();
    for line in text.lines() {
        if let Some(p) = line.strip_prefix("# ") {
            let (k, v) = p.split_once('=').unwrap();
            params.push((k.to_string(), v.to_string()));
        } else {
            body.push_str(line);
            body.push('\n');
        }
    }
    let mut rd = csv::Reader::from_reader(body.as_bytes());
    let header = rd.headers().unwrap().iter().map(String::from).collect();
    let rows = rd
        .records()
        .map(|r| r.unwrap().iter().map(String::from).collect())
        .collect();
    (params, header, rows)
}

fn param<'a>(params: &'a [(String, String)], key: &str) -> &'a str {
    &params.iter().find(|(k, _)| k == key).unwrap_or_else(|| panic!("no {key}")).1
}

#[test]
fn density_of_multiples_of_three() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(
        dir.path(),
        "d.json",
        r#"{"kind":"relative","p":{"kind":"arithmetic","a":0,"step":3},"q":{"kind":"arithmetic","a":0,"step":1},"horizon":30000}"#,
    );
    let out = dir.path().join("d.csv");
    let o = run_config(&["density"], &cfg, &out, &[]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let (params, header, rows) = parse(&std::fs::read_to_string(&out).unwrap());
    assert_eq!(param(&params, "command"), "density");
    assert_eq!(header, ["horizon", "window", "upper", "lower"]);
    let last = rows.last().unwrap();
    assert_eq!(last[0], "30000");
    // exact count of multiples of 3 in [0, n), maximized over the window
    let w: usize = last[1].parse().unwrap();
    let best = (30000 - w..=30000)
        .map(|n| ((n - 1) / 3 + 1) as f64 / n as f64)
        .fold(f64::NEG_INFINITY, f64::max);
    assert_eq!(last[2].parse::<f64>().unwrap(), best);
    assert!((best - 1.0 / 3.0).abs() < 1e-3);
}

#[test]
fn malformed_json_exits_1_without_output() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(dir.path(), "bad.json", "{\"system\": ");
    let out = dir.path().join("o.csv");
    let o = run_config(&["orbit"], &cfg, &out, &[]);
    assert_eq!(o.status.code(), Some(1));
    assert!(!out.exists());
}

#[test]
fn schema_errors_exit_1() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("o.csv");
    let unknown_field = write(
        dir.path(),
        "a.json",
        r#"{"system":{"gallery":"tent"},"x0":0.1,"horizon":3,"colour":1}"#,
    );
    assert_eq!(run_config(&["orbit"], &unknown_field, &out, &[]).status.code(), Some(1));
    let unknown_gallery = write(dir.path(), "b.json", r#"{"system":{"gallery":"henon"},"x0":0.1,"horizon":3}"#);
    assert_eq!(run_config(&["orbit"], &unknown_gallery, &out, &[]).status.code(), Some(1));
    let unseeded = write(
        dir.path(),
        "c.json",
        r#"{"system":{"gallery":"tent"},"sample":{"random":4},"horizon":100,"delta":0.1}"#,
    );
    assert_eq!(run_config(&["scan-pairs"], &unseeded, &out, &[]).status.code(), Some(1));
    assert_eq!(run(&["orbit"]).status.code(), Some(1));
    assert!(!out.exists());
}

#[test]
fn usage_errors_exit_1_and_help_exits_0() {
    assert_eq!(run(&["no-such-command"]).status.code(), Some(1));
    assert_eq!(run(&["scan-pairs", "--threads", "0"]).status.code(), Some(1));
    assert_eq!(run(&["probe", "weak-mixing", "--u1", "0.1"]).status.code(), Some(1));
    let help = run(&["--help"]);
    assert_eq!(help.status.code(), Some(0));
    assert!(String::from_utf8_lossy(&help.stdout).contains("scan-pairs"));
}

#[test]
fn numeric_validation_exits_2_without_output() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("o.csv");
    let bad_delta = write(
        dir.path(),
        "p.json",
        r#"{"system":{"gallery":"tent"},"x":0.1,"y":0.2,"horizon":100,"delta":-1.0}"#,
    );
    assert_eq!(run_config(&["pair-stats"], &bad_delta, &out, &[]).status.code(), Some(2));
    let shared = write(
        dir.path(),
        "m.json",
        r#"{"p":{"kind":"arithmetic","a":0,"step":2},"q":{"kind":"arithmetic","a":0,"step":3},"k_max":4}"#,
    );
    assert_eq!(run_config(&["construct", "merge"], &shared, &out, &[]).status.code(), Some(2));
    assert!(!out.exists());
}

#[test]
fn reruns_are_byte_identical() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(
        dir.path(),
        "s.json",
        r#"{"system":{"gallery":"logistic-autonomous"},"sample":{"random":6},"horizon":500,"delta":0.1,"seed":9}"#,
    );
    let (a, b) = (dir.path().join("a.csv"), dir.path().join("b.csv"));
    assert!(run_config(&["scan-pairs"], &cfg, &a, &[]).status.success());
    assert!(run_config(&["scan-pairs"], &cfg, &b, &["--threads", "4"]).status.success());
    let (ta, tb) = (std::fs::read(&a).unwrap(), std::fs::read(&b).unwrap());
    assert_eq!(ta, tb);
    let (params, header, rows) = parse(&String::from_utf8(ta).unwrap());
    assert_eq!(param(&params, "seed"), "9");
    assert!(!params.iter().any(|(k, _)| k == "threads"));
    assert_eq!(rows.len(), 15);
    for col in ["x", "y", "horizon", "window", "eps", "upper_F", "lower_F", "delta", "dc_pair"] {
        assert!(header.iter().any(|h| h == col), "missing {col}");
    }
}

#[test]
fn header_echoes_every_config_key() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(
        dir.path(),
        "p.json",
        r#"{"system":{"kind":"logistic","r":4.0},"x":0.1,"y":0.2,"horizon":2000,"window":150,"eps_grid":[0.1,0.05],"delta":0.3,"tolerances":{"tau_hi":0.1,"tau_lo":0.1,"tau_prox":0.05},"dual":true}"#,
    );
    let out = dir.path().join("p.csv");
    assert!(run_config(&["pair-stats"], &cfg, &out, &[]).status.success());
    let (params, header, rows) = parse(&std::fs::read_to_string(&out).unwrap());
    assert_eq!(param(&params, "window"), "150");
    assert_eq!(param(&params, "tau_prox").parse::<f64>().unwrap(), 0.05);
    assert!(param(&params, "config").contains("\"eps_grid\":[0.1,0.05]"));
    assert_eq!(rows.len(), 2);
    assert!(header.iter().any(|h| h == "dual_agreement"));
}

#[test]
fn default_tolerances_follow_the_grid() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(
        dir.path(),
        "d.json",
        r#"{"system":{"gallery":"logistic-autonomous"},"x":0.1,"y":0.2,"horizon":5000,"eps_grid":[0.1,0.05],"delta":0.3}"#,
    );
    let out = dir.path().join("d.csv");
    assert!(run_config(&["pair-stats"], &cfg, &out, &[]).status.success());
    let (params, header, rows) = parse(&std::fs::read_to_string(&out).unwrap());
    assert_eq!(param(&params, "tau_prox").parse::<f64>().unwrap(), 0.05);
    let col = |name: &str| header.iter().position(|h| h == name).unwrap();
    let (up, lo) = (col("upper_F"), col("lower_F"));
    for r in &rows {
        assert!(r[lo].parse::<f64>().unwrap() <= r[up].parse::<f64>().unwrap());
    }
}

#[test]
fn construct_expanding_matches_a_distchaos_rerun() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(
        dir.path(),
        "e.json",
        r#"{"system":{"gallery":"expanding-family"},
            "alpha":{"tail":{"kind":"lemma213","member":1,"label_bits":4,"seed":0}},
            "beta":{"tail":{"kind":"lemma213","member":5,"label_bits":4,"seed":0}},
            "depth":151470}"#,
    );
    let out = dir.path().join("e.csv");
    let o = run_config(&["construct", "expanding"], &cfg, &out, &[]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let (params, _, rows) = parse(&std::fs::read_to_string(&out).unwrap());
    let x: f64 = param(&params, "x").parse().unwrap();
    let y: f64 = param(&params, "y").parse().unwrap();
    let sys = ExpandingFamily::new();
    let idx: Vec<u64> = (0..151470).collect();
    let p = pair_profile(&sys, x, y, &idx).unwrap();
    assert!(!rows.is_empty());
    for r in &rows {
        let n: usize = r[0].parse().unwrap();
        let eps: f64 = r[4].parse().unwrap();
        let f: f64 = r[5].parse().unwrap();
        assert_eq!(fraction_at(&p, eps, &[n]).unwrap()[0], f, "row {r:?}");
    }
}

#[test]
fn merge_blocks_follow_the_schedule() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(
        dir.path(),
        "m.json",
        r#"{"p":{"kind":"arithmetic","a":0,"step":2},"q":{"kind":"arithmetic","a":1,"step":2},"k_max":5}"#,
    );
    let out = dir.path().join("m.csv");
    assert!(run_config(&["construct", "merge"], &cfg, &out, &[]).status.success());
    let (_, _, rows) = parse(&std::fs::read_to_string(&out).unwrap());
    // n_1 = 1, n_{k+1} = 2k n_k
    let n = [1usize, 2, 8, 48, 384];
    assert_eq!(rows.len(), n[4]);
    for (i, r) in rows.iter().enumerate() {
        let block = n.iter().position(|&m| i < m).unwrap();
        assert_eq!(r[3], block.to_string());
        let t: u64 = r[1].parse().unwrap();
        let expected = if block == 0 || block % 2 == 1 { "P" } else { "Q" };
        assert_eq!(r[2], expected, "row {r:?}");
        assert_eq!(t % 2 == 0, expected == "P");
    }
}

#[test]
fn weak_mixing_flags_find_a_verified_witness() {
    let o = run(&[
        "probe",
        "weak-mixing",
        "--gallery",
        "logistic-autonomous",
        "--u1",
        "0.1,0.12",
        "--v1",
        "0.6,0.62",
        "--u2",
        "0.4,0.42",
        "--v2",
        "0.9,0.92",
    ]);
    assert!(o.status.success());
    let (_, _, rows) = parse(&String::from_utf8(o.stdout).unwrap());
    assert_eq!(rows[0][0], "true");
    let n: u64 = rows[0][1].parse().unwrap();
    let (mut a, mut b): (f64, f64) = (rows[0][2].parse().unwrap(), rows[0][3].parse().unwrap());
    for _ in 0..n {
        a = 4.0 * a * (1.0 - a);
        b = 4.0 * b * (1.0 - b);
    }
    assert!(0.6 < a && a < 0.62 && 0.9 < b && b < 0.92);
}

#[test]
fn aapo_on_the_full_shift_reports_the_tracer() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(
        dir.path(),
        "a.json",
        r#"{"system":{"gallery":"full-shift"},"code":{"tail":{"kind":"lemma213","member":3,"label_bits":4,"seed":0}},"depth":5,"horizon":4589,"tracer":true}"#,
    );
    let out = dir.path().join("a.csv");
    assert!(run_config(&["construct", "aapo"], &cfg, &out, &[]).status.success());
    let (_, header, rows) = parse(&std::fs::read_to_string(&out).unwrap());
    assert_eq!(header, ["checkpoint", "block", "aapo", "shadowing"]);
    let cps: Vec<&str> = rows.iter().map(|r| r[0].as_str()).collect();
    assert_eq!(cps, ["2", "6", "30", "270"]);
    for r in &rows {
        assert!(r[3].parse::<f64>().unwrap() <= 0.05);
    }
    let real = write(
        dir.path(),
        "b.json",
        r#"{"system":{"gallery":"tent"},"code":{"tail":{"kind":"constant","bit":1}},"depth":4,"horizon":200,"tracer":true}"#,
    );
    assert_eq!(run_config(&["construct", "aapo"], &real, &out, &[]).status.code(), Some(1));
}

#[test]
fn orbit_of_a_symbol_sequence() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(
        dir.path(),
        "o.json",
        r#"{"system":{"gallery":"full-shift"},"x0":{"prefix":"110","tail":{"kind":"constant","bit":0}},"horizon":4}"#,
    );
    let out = dir.path().join("o.csv");
    assert!(run_config(&["orbit"], &cfg, &out, &[]).status.success());
    let (_, _, rows) = parse(&std::fs::read_to_string(&out).unwrap());
    let xs: Vec<&str> = rows.iter().map(|r| r[1].as_str()).collect();
    assert_eq!(xs, ["110+(0)", "10+(0)", "0+(0)", "+(0)"]);
}
