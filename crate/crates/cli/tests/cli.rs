use std::fs;
use std::path::Path;
use std::process::{Command, Output};

fn northcott(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_northcott")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn code(o: &Output) -> i32 {
    o.status.code().unwrap_or(-1)
}

#[test]
fn field_table() {
    let o = northcott(&["field", "--modulus", "7", "--subgroup", "6", "--primes-to", "20"]);
    assert_eq!(code(&o), 0);
    let out = stdout(&o);
    assert!(out.contains("degree 3, conductor 7"));
    let row13 = out.lines().find(|l| l.split_whitespace().next() == Some("13")).unwrap();
    assert_eq!(row13.split_whitespace().collect::<Vec<_>>(), ["13", "1", "1", "3", "totally"]);
    let row7 = out.lines().find(|l| l.split_whitespace().next() == Some("7")).unwrap();
    assert_eq!(row7.split_whitespace().collect::<Vec<_>>(), ["7", "3", "1", "1"]);

    assert!(stdout(&northcott(&["field", "--modulus", "1"])).starts_with("degree 1, conductor 1"));
    assert!(stdout(&northcott(&["field", "--modulus", "7", "--subgroup", "3"])).starts_with("degree 1,"));
}

#[test]
fn sums() {
    let o = northcott(&["shsum", "--modulus", "1", "--X", "3"]);
    assert_eq!(code(&o), 0);
    // (log 2)/3 + (log 3)/4 = 0.5057021...
    assert!(stdout(&o).contains("sum 0.505702"));
    let o = northcott(&["q2bound", "--X", "10"]);
    assert!(stdout(&o).contains("sum 0.349310"));
    let o = northcott(&["fili", "--tolerance", "1e-4"]);
    assert!(stdout(&o).starts_with("T = 0.9375"));
    let o = northcott(&["fili", "--data", "2:1:2,3:2:1"]);
    assert_eq!(code(&o), 0);
}

#[test]
fn exit_codes() {
    assert_eq!(code(&northcott(&["field", "--modulus"])), 2);
    assert_eq!(code(&northcott(&["no-such-command"])), 2);
    assert_eq!(code(&northcott(&["construct", "cyclic", "--split", "2", "--degree", "6"])), 2);
    let limited = northcott(&["construct", "cyclic", "--split", "2", "--degree", "3", "--cap-sieve", "10"]);
    assert_eq!(code(&limited), 3);
    assert_eq!(code(&northcott(&["shsum", "--modulus", "1", "--X", "1000", "--cap-sieve", "100"])), 3);
    assert_eq!(code(&northcott(&["height", "--poly", "1,x"])), 2);
    assert_eq!(code(&northcott(&["verify", "/nonexistent/certificate.json"])), 2);
}

fn build(dir: &Path, name: &str, args: &[&str]) -> String {
    let path = dir.join(name);
    let mut all: Vec<&str> = args.to_vec();
    let p = path.to_str().unwrap().to_string();
    all.extend(["--cert", &p]);
    let o = northcott(&all);
    assert_eq!(code(&o), 0, "{args:?}: {}", String::from_utf8_lossy(&o.stderr));
    p
}

#[test]
fn certificates_round_trip_and_are_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let a = build(dir.path(), "a.json", &["construct", "cyclic", "--split", "2", "--degree", "3"]);
    let b = build(dir.path(), "b.json", &["construct", "cyclic", "--split", "2", "--degree", "3", "--sequential"]);
    let (ta, tb) = (fs::read(&a).unwrap(), fs::read(&b).unwrap());
    assert_eq!(ta, tb);
    let json = northcott(&["construct", "cyclic", "--split", "2", "--degree", "3", "--json"]);
    assert_eq!(json.stdout, ta);
    assert_eq!(code(&northcott(&["verify", &a])), 0);
    // no temporary files are left behind
    let names: Vec<String> =
        fs::read_dir(dir.path()).unwrap().map(|e| e.unwrap().file_name().into_string().unwrap()).collect();
    assert_eq!(names.len(), 2, "{names:?}");

    let cmds: &[&[&str]] = &[
        &["field", "--modulus", "91", "--subgroup", "3", "--primes-to", "100"],
        &["shsum", "--modulus", "13", "--subgroup", "3", "--X", "200"],
        &["bogomolov", "--modulus", "5", "--X", "100"],
        &["window", "--modulus", "1", "--kmin", "5", "--kmax", "8"],
        &["fili", "--tolerance", "1e-3"],
        &["q2bound", "--X", "50"],
        &["construct", "cyclic", "--degree", "4", "--split", "2"],
        &["construct", "tower", "--kind", "product", "--orders", "2,2", "--depth", "2"],
        &["widmer", "--modulus", "91", "--subgroup", "1", "--prev-subgroup", "3,9"],
        &["height", "--poly", "-1,-1,1"],
        &["enumerate", "--dmax", "2", "--bound", "0.5"],
        &["scan", "--modulus", "5", "--subgroup", "4", "--dmax", "2", "--bound", "0.25"],
    ];
    for (i, c) in cmds.iter().enumerate() {
        let p = build(dir.path(), &format!("c{i}.json"), c);
        let v = northcott(&["verify", &p]);
        assert_eq!(code(&v), 0, "{c:?}: {}", stdout(&v));
    }
}

#[test]
fn verifier_rejects_damage() {
    let dir = tempfile::tempdir().unwrap();
    let p = build(dir.path(), "c.json", &["construct", "cyclic", "--split", "2", "--degree", "3"]);
    let text = fs::read_to_string(&p).unwrap();

    let truncated = dir.path().join("t.json");
    fs::write(&truncated, &text[..text.len() / 2]).unwrap();
    assert_eq!(code(&northcott(&["verify", truncated.to_str().unwrap()])), 2);

    let bumped = dir.path().join("d.json");
    fs::write(&bumped, text.replace("\"8281\"", "\"8282\"")).unwrap();
    let o = northcott(&["verify", bumped.to_str().unwrap()]);
    assert_eq!(code(&o), 4);
    assert!(stdout(&o).contains("conductor-discriminant"));
}
