use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use tempfile::TempDir;

fn vpf(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_vpf")).args(args).output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn write(dir: &TempDir, name: &str, text: &str) -> PathBuf {
    let p = dir.path().join(name);
    fs::write(&p, text).unwrap();
    p
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

const A2: &str = "# positive roots of A2\n2 3\n1 0 1\n0 1 1\n";

#[test]
fn a2_text_output() {
    let dir = TempDir::new().unwrap();
    let m = write(&dir, "a2.txt", A2);
    let o = vpf(&["compute", s(&m)]);
    assert!(o.status.success());
    let text = stdout(&o);
    for piece in ["a+1", "a >= 0", "-(a-b)", "a-b-1 >= 0", "b >= 0"] {
        assert!(text.contains(piece), "missing {piece:?} in\n{text}");
    }
}

#[test]
fn one_by_two() {
    let dir = TempDir::new().unwrap();
    let m = write(&dir, "m.txt", "1 2\n1 1\n");
    let text = stdout(&vpf(&["compute", s(&m)]));
    assert!(text.contains("b+1 if b >= 0"), "{text}");
}

#[test]
fn exit_codes() {
    let dir = TempDir::new().unwrap();
    let cases = [
        ("2 2\n0 1\n0 1\n", 2),
        ("1 2\n1 -1\n", 2),
        ("2 3\n1 1 2\n1 1 1\n", 3),
        ("1 2\n1 x\n", 4),
        ("1 2\n3\n", 4),
        ("2 2\n1 2\n", 4),
    ];
    for (i, (text, code)) in cases.iter().enumerate() {
        let m = write(&dir, &format!("m{i}.txt"), text);
        assert_eq!(vpf(&["compute", s(&m)]).status.code(), Some(*code), "{text:?}");
    }
    let m = write(&dir, "a2.txt", A2);
    assert_eq!(vpf(&["eval", s(&m), "1,z"]).status.code(), Some(4));
    assert_eq!(vpf(&["eval", s(&m), "1,2,3"]).status.code(), Some(4));
    assert_eq!(vpf(&["frobnicate"]).status.code(), Some(4));
    assert_eq!(vpf(&["--help"]).status.code(), Some(0));
}

#[test]
fn eval_matches_counts() {
    let dir = TempDir::new().unwrap();
    let m = write(&dir, "a2.txt", A2);
    for (b, want) in [("2,5", "3"), ("0,0", "1"), ("-1,4", "0"), ("7,7", "8")] {
        let o = vpf(&["eval", s(&m), b]);
        assert!(o.status.success());
        assert_eq!(stdout(&o).trim(), want, "b = {b}");
        let oracle = vpf(&["oracle", s(&m), b]);
        assert_eq!(stdout(&oracle).trim(), want, "oracle at {b}");
    }
}

#[test]
fn verify_region() {
    let dir = TempDir::new().unwrap();
    let m = write(&dir, "a2.txt", A2);
    let o = vpf(&["verify", s(&m), "-3..8,-3..8"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("0 mismatches"));
}

#[test]
fn json_expression_round_trip_and_corruption() {
    let dir = TempDir::new().unwrap();
    let m = write(&dir, "a2.txt", A2);
    let o = vpf(&["compute", s(&m), "--format", "json"]);
    assert!(o.status.success());
    let json = stdout(&o);
    let e = write(&dir, "a2.json", &json);
    assert_eq!(stdout(&vpf(&["eval", s(&e), "4,2"])).trim(), "3");
    assert_eq!(vpf(&["verify", s(&e), "-2..6,-2..6"]).status.code(), Some(0));

    let mut value: serde_json::Value = serde_json::from_str(&json).unwrap();
    let scalar = &mut value["terms"][0]["scalar"];
    *scalar = serde_json::to_value(vpf_core::arith::Cyclotomic::from_int(2)).unwrap();
    let bad = write(&dir, "bad.json", &value.to_string());
    let o = vpf(&["verify", s(&bad), "0..5,0..5"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).contains("mismatch"));
}

#[test]
fn row_order_and_latex() {
    let dir = TempDir::new().unwrap();
    let m = write(&dir, "a2.txt", A2);
    let o = vpf(&["compute", s(&m), "--order", "1,0"]);
    assert!(o.status.success());
    assert!(stdout(&o).contains("where"));
    let e = write(&dir, "swapped.json", &stdout(&vpf(&["compute", s(&m), "--order", "1,0", "--format", "json"])));
    assert_eq!(stdout(&vpf(&["eval", s(&e), "2,5"])).trim(), "3");
    let latex = stdout(&vpf(&["compute", s(&m), "--format", "latex"]));
    assert!(latex.contains("\\varphi"), "{latex}");
    assert!(latex.contains("\\geq 0"), "{latex}");
}

#[test]
fn dedekind_command() {
    let o = vpf(&["dedekind", "--n", "2", "--factor", "1/2"]);
    assert!(o.status.success());
    assert_eq!(stdout(&o).trim(), "4/3");
    let o = vpf(&["dedekind", "--n", "1", "--factor", "1"]);
    assert_eq!(o.status.code(), Some(5));
}
