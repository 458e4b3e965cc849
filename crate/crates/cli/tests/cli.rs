use std::fs;
use std::path::Path;
use std::process::{Command, Output};

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_vlc-beacon"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

#[test]
fn encode_produces_frame_of_expected_length() {
    let out = run(&["encode", "--ml", "16", "--cl", "32", "--rll", "manchester", "--message-hex", "0001"]);
    assert_eq!(out.status.code(), Some(0));
    let frame = stdout(&out);
    assert_eq!(frame.trim().len(), 64);

    let out = run(&["encode", "--ml", "16", "--rll", "4b6b", "--message-hex", "0001"]);
    assert_eq!(stdout(&out).trim().len(), 48);
}

#[test]
fn encode_decode_round_trip() {
    for rll in ["manchester", "4b6b"] {
        let out = run(&["encode", "--ml", "64", "--rll", rll, "--message-hex", "0123456789abcdef", "--format", "hex"]);
        assert_eq!(out.status.code(), Some(0));
        let frame = stdout(&out);
        let out = run(&["decode", "--ml", "64", "--rll", rll, "--frame-hex", frame.trim()]);
        assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
        assert_eq!(stdout(&out).trim(), "0123456789abcdef");
    }
}

#[test]
fn invalid_code_length_exits_2() {
    let out = run(&["encode", "--ml", "16", "--cl", "33", "--message-hex", "0001"]);
    assert_eq!(out.status.code(), Some(2));
    let out = run(&["encode", "--ml", "16", "--message-hex", "zz"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn line_code_violation_exits_3() {
    let ones = "1".repeat(64);
    let out = run(&["decode", "--ml", "16", "--rll", "manchester", "--frame-bits", &ones]);
    assert_eq!(out.status.code(), Some(3));
    let ones = "1".repeat(48);
    let out = run(&["decode", "--ml", "16", "--rll", "4b6b", "--frame-bits", &ones]);
    assert_eq!(out.status.code(), Some(3));
}

#[test]
fn frozen_prints_designed_list() {
    let out = run(&["frozen", "--ml", "2", "--cl", "4"]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    let indices: Vec<&str> = text.lines().filter(|l| !l.starts_with('#')).collect();
    assert_eq!(indices, ["0", "1"]);
}

fn write_network(dir: &Path, front_ends: usize) -> std::path::PathBuf {
    let conf = dir.join("net.conf");
    fs::write(&conf, format!("front_ends = {front_ends}\nml = 128\ncl = 256\nrll = manchester\n")).unwrap();
    conf
}

fn write_schedule(dir: &Path, entries: &[(u64, usize, u128)]) -> std::path::PathBuf {
    let path = dir.join("schedule.csv");
    let mut text = String::from("cycle,address,payload_hex\n");
    for (c, a, p) in entries {
        text.push_str(&format!("{c},{a},{p:032x}\n"));
    }
    fs::write(&path, text).unwrap();
    path
}

#[test]
fn simulate_verifies_every_anchor_and_is_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let conf = write_network(dir.path(), 100);
    let entries: Vec<_> = (0..100).map(|a| (a as u64, a, 0x1000_0000_0000_0000_0000_0000_0000_0000u128 + a as u128 * 7919)).collect();
    let schedule = write_schedule(dir.path(), &entries);

    let mut runs = Vec::new();
    for name in ["a", "b"] {
        let out_dir = dir.path().join(name);
        let out = run(&[
            "simulate",
            "--config",
            conf.to_str().unwrap(),
            "--schedule",
            schedule.to_str().unwrap(),
            "--out-dir",
            out_dir.to_str().unwrap(),
        ]);
        assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
        assert!(stdout(&out).contains("100 verified"), "{}", stdout(&out));
        runs.push(out_dir);
    }
    for file in ["fe_0.bits", "fe_99.bits", "events.csv", "verify.csv"] {
        assert_eq!(
            fs::read(runs[0].join(file)).unwrap(),
            fs::read(runs[1].join(file)).unwrap(),
            "{file} differs between runs"
        );
    }
}

#[test]
fn empty_schedule_leaves_every_anchor_dark() {
    let dir = tempfile::tempdir().unwrap();
    let conf = write_network(dir.path(), 3);
    let schedule = write_schedule(dir.path(), &[]);
    let out_dir = dir.path().join("out");
    let out = run(&[
        "simulate",
        "--config",
        conf.to_str().unwrap(),
        "--schedule",
        schedule.to_str().unwrap(),
        "--cycles",
        "5000",
        "--out-dir",
        out_dir.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0));
    for a in 0..3 {
        let wave = fs::read_to_string(out_dir.join(format!("fe_{a}.bits"))).unwrap();
        assert!(!wave.trim().is_empty());
        assert!(wave.trim().chars().all(|c| c == '0'));
    }
}

#[test]
fn simulate_rejects_bad_config_and_address() {
    let dir = tempfile::tempdir().unwrap();
    let conf = dir.path().join("bad.conf");
    fs::write(&conf, "ml = 128\ncl = 300\n").unwrap();
    let schedule = write_schedule(dir.path(), &[(0, 0, 1)]);
    let out = run(&["simulate", "--config", conf.to_str().unwrap(), "--schedule", schedule.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));

    let conf = write_network(dir.path(), 4);
    let schedule = write_schedule(dir.path(), &[(0, 4, 1)]);
    let out_dir = dir.path().join("out");
    let out = run(&[
        "simulate",
        "--config",
        conf.to_str().unwrap(),
        "--schedule",
        schedule.to_str().unwrap(),
        "--out-dir",
        out_dir.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(4));
}

#[test]
fn bench_writes_one_row_per_k() {
    let dir = tempfile::tempdir().unwrap();
    let out = run(&["bench", "--mode", "modeled", "--seed", "7", "--out-dir", dir.path().to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let gains = fs::read_to_string(dir.path().join("gains.csv")).unwrap();
    let rows: Vec<&str> = gains.lines().skip(1).collect();
    assert_eq!(rows.len(), 7);
    assert!(rows[0].starts_with("1,"));
    assert!(rows[6].starts_with("100,"));

    let out = run(&["bench", "--k", "0"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn footprint_reports_array_bytes() {
    let out = run(&["footprint", "--ml", "128", "--rll", "4b6b"]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    let row = text.lines().nth(1).unwrap();
    assert_eq!(row, "128,256,4b6b,1024,0,1024");

    let out = run(&["footprint"]);
    assert_eq!(stdout(&out).lines().count(), 9);
}
