use std::fs;
use std::process::{Command, Output};

fn tfsym(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_tfsym")).args(args).output().expect("run tfsym")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

#[test]
fn usage_errors_exit_two() {
    let o = tfsym(&["feasible", "--bogus"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("--bogus"));
    assert_eq!(tfsym(&["verify", "nope"]).status.code(), Some(2));
    assert_eq!(tfsym(&["--help"]).status.code(), Some(0));
}

#[test]
fn feasible_on_a_profile_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("p.json");
    let profile = |p0: &str| {
        format!(
            r#"{{"m":2,"p0":"{p0}","p":["10/9","10/9"],"q":[2,2],"q_last":2,"r0":1,"r":[2,2],"s":[2,2],"s_last":2}}"#
        )
    };
    fs::write(&path, profile("5")).unwrap();
    let p = path.to_str().unwrap();
    let o = tfsym(&["feasible", "--profile", p]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o).trim(), "infeasible");

    fs::write(&path, profile("1")).unwrap();
    let o = tfsym(&["feasible", "--profile", p, "--fixed-perms", "--search-tilde", "--max-p0"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("max_p0 = 2"), "{}", stdout(&o));
    let o = tfsym(&["feasible", "--profile", p, "--fixed-perms", "--max-p0"]);
    assert_eq!(stdout(&o).trim(), "infeasible");
}

#[test]
fn norm_and_operators_round_trip_through_csv() {
    let dir = tempfile::tempdir().unwrap();
    let input = dir.path().join("f.csv");
    let mut text = String::from("x,re,im\n");
    for j in 0..32 {
        let x = -4.0 + j as f64 * 0.25;
        text.push_str(&format!("{x},{},0\n", (-x * x).exp()));
    }
    fs::write(&input, text).unwrap();
    let f = input.to_str().unwrap();
    let o = tfsym(&["norm", "--input", f, "--p", "2", "--q", "2"]);
    assert_eq!(o.status.code(), Some(0));
    let v: f64 = stdout(&o).trim().parse().unwrap();
    assert!(v > 0.0 && v.is_finite());

    let out = dir.path().join("bh.csv");
    let o = tfsym(&["bht", "--inputs", f, f, "--out", out.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let written = fs::read_to_string(&out).unwrap();
    assert!(written.starts_with("#{"));
    assert_eq!(written.lines().count(), 34);
    assert!(dir.path().join("bh.json").exists());
    // wrong arity is an input error
    assert_eq!(tfsym(&["tht", "--inputs", f, f]).status.code(), Some(2));
}

#[test]
fn verify_writes_a_passing_report() {
    let dir = tempfile::tempdir().unwrap();
    let json = dir.path().join("y.json");
    let o = tfsym(&["verify", "young-time", "--trials", "20", "--seed", "3", "--json", json.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    let v: serde_json::Value = serde_json::from_str(&fs::read_to_string(&json).unwrap()).unwrap();
    assert_eq!(v["suite"], "young-time");
    assert_eq!(v["failed"], 0);
}

#[test]
fn report_is_deterministic() {
    let a = tempfile::tempdir().unwrap();
    let b = tempfile::tempdir().unwrap();
    for d in [&a, &b] {
        let o = tfsym(&["report", "--out", d.path().to_str().unwrap(), "--seed", "11"]);
        assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    }
    for name in ["summary.csv", "CONVENTIONS.md", "lemma21.json", "young-freq.csv", "bht.json"] {
        assert_eq!(
            fs::read(a.path().join(name)).unwrap(),
            fs::read(b.path().join(name)).unwrap(),
            "{name} differs between runs"
        );
    }
}
