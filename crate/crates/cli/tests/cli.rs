use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn root() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../..")
}

fn fixture(name: &str) -> String {
    root().join("fixtures").join(name).display().to_string()
}

fn tango(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_tango"))
        .args(args)
        .output()
        .expect("run tango")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn scratch(name: &str) -> PathBuf {
    let dir = Path::new(env!("CARGO_TARGET_TMPDIR")).join("cli");
    fs::create_dir_all(&dir).unwrap();
    dir.join(name)
}

#[test]
fn golden_outputs() {
    let p5 = fixture("printed_p5.txt");
    let n4 = fixture("tango_n4.txt");
    let cases: Vec<(&str, Vec<&str>, i32)> = vec![
        ("chern_4_0_1", vec!["chern", "--n", "4", "--alpha", "0", "--gamma", "1"], 0),
        ("chern_4_1_5", vec!["chern", "--n", "4", "--alpha", "1", "--gamma", "5"], 0),
        ("stability_4_1_6", vec!["stability", "--n", "4", "--alpha", "1", "--gamma", "6"], 1),
        ("stability_5_1_9", vec!["stability", "--n", "5", "--alpha", "1", "--gamma", "9"], 0),
        ("certify_n4", vec!["certify", "--n", "4"], 0),
        ("decompose_n6", vec!["decompose", "--n", "6"], 0),
        ("orbit_printed_p5", vec!["orbit-dim", "--subspace", &p5], 0),
        ("construct_n5", vec!["construct", "--n", "5"], 0),
        ("scan_n4", vec!["scan", "--subspace", &n4, "--primes", "7,11"], 0),
    ];
    let dir = Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/golden");
    for (name, args, code) in cases {
        let expected = fs::read_to_string(dir.join(format!("{name}.txt"))).unwrap();
        let first = tango(&args);
        assert_eq!(first.status.code(), Some(code), "{name}");
        assert_eq!(stdout(&first), expected, "{name}");
        // byte-identical on rerun and with a single worker thread
        let mut single = vec!["--threads", "1"];
        single.extend(&args);
        assert_eq!(stdout(&tango(&args)), expected, "{name}");
        assert_eq!(stdout(&tango(&single)), expected, "{name} --threads 1");
    }
}

#[test]
fn construct_then_certify() {
    for n in 3..=8 {
        let path = scratch(&format!("w{n}.txt"));
        let out = tango(&["construct", "--n", &n.to_string(), "--out", path.to_str().unwrap()]);
        assert_eq!(out.status.code(), Some(0), "construct n = {n}");
        let cert = tango(&["certify", "--subspace", path.to_str().unwrap()]);
        assert_eq!(cert.status.code(), Some(0), "certify n = {n}");
        assert!(stdout(&cert).starts_with(&format!("certificate for n = {n}")));
        assert!(stdout(&cert).contains("VALID"));
    }
}

#[test]
fn negative_results_exit_one() {
    let mut text = fs::read_to_string(fixture("tango_n4.txt")).unwrap();
    text = text.replacen("4 3", "4 4", 1);
    text.push_str("1 0 0 0 0 0 0 0 0 0\n");
    let path = scratch("planted.txt");
    fs::write(&path, text).unwrap();
    let p = path.to_str().unwrap();

    let scan = tango(&["scan", "--subspace", p, "--primes", "7"]);
    assert_eq!(scan.status.code(), Some(1));
    assert!(stdout(&scan).contains("v_{0,1}") || stdout(&scan).contains("decomposable"));

    let cert = tango(&["certify", "--subspace", p]);
    assert_eq!(cert.status.code(), Some(1));
    assert!(stdout(&cert).contains("FAILED"));

    let printed = tango(&["scan", "--subspace", &fixture("printed_p5.txt"), "--primes", "7"]);
    assert_eq!(printed.status.code(), Some(1));
}

#[test]
fn usage_errors_exit_two() {
    let bad = scratch("bad.txt");
    fs::write(&bad, "3 1\n0 0 1 x 0 0\n").unwrap();
    let bad = bad.to_str().unwrap();
    let cases: Vec<Vec<&str>> = vec![
        vec!["orbit-dim", "--subspace", bad],
        vec!["orbit-dim", "--subspace", "/nonexistent/file.txt"],
        vec!["certify", "--subspace", bad],
        vec!["chern", "--n", "4", "--alpha", "1", "--gamma", "4"],
        vec!["stability", "--n", "4", "--alpha", "-1", "--gamma", "4"],
        vec!["construct", "--n", "2"],
        vec!["frobnicate"],
        vec!["certify"],
    ];
    for args in cases {
        let out = tango(&args);
        assert_eq!(out.status.code(), Some(2), "{args:?}");
        assert!(out.stdout.is_empty(), "{args:?}");
    }
    let err = String::from_utf8(tango(&["orbit-dim", "--subspace", bad]).stderr).unwrap();
    assert!(err.contains("line 2"), "{err}");
}

#[test]
fn eval_scripts() {
    let golden = root().join("crates/core/tests/golden");
    let out = tango(&["eval", golden.join("euler_tango.seq").to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(
        stdout(&out),
        fs::read_to_string(golden.join("euler_tango.out")).unwrap()
    );

    let broken = scratch("broken.seq");
    fs::write(&broken, "let n = 3\nquery chern(Q\n").unwrap();
    let out = tango(&["eval", broken.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8(out.stderr).unwrap().contains("2:14"));
}

#[test]
fn json_outputs_parse() {
    let p5 = fixture("printed_p5.txt");
    let n3 = fixture("tango_n3.txt");
    let cases: Vec<Vec<&str>> = vec![
        vec!["orbit-dim", "--subspace", &p5, "--json"],
        vec!["certify", "--n", "5", "--json"],
        vec!["scan", "--subspace", &n3, "--primes", "5,7", "--json"],
        vec!["decompose", "--n", "5", "--json"],
        vec!["chern", "--n", "5", "--alpha", "1", "--gamma", "6", "--json"],
        vec!["stability", "--n", "5", "--alpha", "1", "--gamma", "6", "--json"],
        vec!["construct", "--n", "4", "--format", "json"],
    ];
    for args in cases {
        let out = tango(&args);
        let v: serde_json::Value = serde_json::from_slice(&out.stdout)
            .unwrap_or_else(|e| panic!("{args:?}: {e}"));
        assert!(v.is_object() || v.is_array(), "{args:?}");
    }
    let orbit: serde_json::Value =
        serde_json::from_slice(&tango(&["orbit-dim", "--subspace", &p5, "--json"]).stdout).unwrap();
    assert_eq!(orbit["orbit_dim"], 34);
}
