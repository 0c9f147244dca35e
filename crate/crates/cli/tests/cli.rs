use std::process::{Command, Output};

fn shgraver(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_shgraver"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(args: &[&str]) -> String {
    let out = shgraver(args);
    assert!(
        out.status.success(),
        "{args:?}: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    String::from_utf8(out.stdout).unwrap()
}

fn code(args: &[&str]) -> i32 {
    shgraver(args).status.code().unwrap()
}

#[test]
fn params_lines() {
    assert_eq!(
        stdout(&["params", "--gens", "77,79,82"]),
        "t=79 a=2 b=3 d=1 rho=30 B+=4 B+-=6 B-=5 B=6 h=(3,-5,2) t0=19 k=2\n"
    );
    assert!(stdout(&["params", "--gens", "94157,94159,94162"]).ends_with("t0=19 k=3138\n"));
    let small = stdout(&["params", "--gens", "4,6,9"]);
    assert!(small.starts_with("t=6 a=2 b=3 d=1 "));
    assert!(small.contains("note: t <= B = 6"));
}

#[test]
fn graver_matrix_m19() {
    let text = stdout(&["graver", "--gens", "17,19,22", "--format", "4ti2"]);
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("13 3"));
    assert_eq!(lines.next(), Some("-19 17 0"));
    assert_eq!(text.lines().last(), Some("0 -22 19"));
    assert!(text.ends_with('\n'));
    let both = stdout(&["graver", "--gens", "17,19,22", "--both-signs"]);
    assert!(both.starts_with("26 3\n"));
}

#[test]
fn methods_agree_byte_for_byte() {
    let shift = stdout(&["graver", "--gens", "77,79,82", "--method", "shift"]);
    let oracle = stdout(&["graver", "--gens", "77,79,82", "--method", "oracle"]);
    assert_eq!(shift, oracle);
    assert_eq!(
        shift,
        stdout(&[
            "graver",
            "--gens",
            "77,79,82",
            "--method",
            "fast",
            "--sequential"
        ])
    );
    assert!(shift.starts_with("23 3\n"));
}

#[test]
fn output_is_deterministic() {
    let args = ["graver", "--gens", "107,109,112", "--format", "json"];
    assert_eq!(stdout(&args), stdout(&args));
}

#[test]
fn json_and_csv_documents() {
    let json = stdout(&["graver", "--gens", "77,79,82", "--format", "json"]);
    assert!(json.contains("\"method\": \"shift\""));
    assert!(json.contains("\"plusMinus\": 6"));
    assert!(json.contains("\"count\": 23"));
    let csv = stdout(&["graver", "--gens", "17,19,22", "--format", "csv"]);
    assert!(csv.starts_with("v0,v1,v2\n-19,17,0\n"));
    assert_eq!(csv.lines().count(), 14);
}

#[test]
fn output_file() {
    let dir = std::env::temp_dir().join(format!("shgraver-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("gr19.mat");
    let printed = stdout(&["graver", "--gens", "17,19,22"]);
    assert_eq!(
        stdout(&[
            "graver",
            "--gens",
            "17,19,22",
            "--output",
            path.to_str().unwrap()
        ]),
        ""
    );
    assert_eq!(std::fs::read_to_string(&path).unwrap(), printed);
    std::fs::remove_dir_all(dir).unwrap();
}

#[test]
fn hilbert_orthants() {
    let pnp = stdout(&["hilbert", "--gens", "17,19,22", "--orthant", "pnp"]);
    assert_eq!(pnp, "5 3\n19 -17 0\n11 -11 1\n3 -5 2\n1 -9 7\n0 -22 19\n");
    let npp = stdout(&["hilbert", "--gens", "17,19,22", "--orthant", "npp"]);
    assert!(npp.starts_with("4 3\n") && npp.contains("-8 6 1\n") && npp.contains("-5 1 3\n"));
    let ppn = stdout(&["hilbert", "--gens", "77,79,82", "--orthant", "ppn"]);
    assert!(ppn.starts_with("11 3\n"));
    for row in ["2 24 -25", "5 19 -23", "8 14 -21", "11 9 -19", "14 4 -17"] {
        assert!(ppn.contains(row), "{row}");
    }
}

#[test]
fn reports() {
    assert_eq!(
        stdout(&["count", "--family", "2,3,1", "--t-range", "19..19"]),
        "t,graver,h_pnp,h_ppn,h_npp,method\n19,26,5,7,4,oracle\n"
    );
    let verify = stdout(&["verify", "--family", "2,3,1", "--t-range", "7..96"]);
    assert!(verify
        .lines()
        .skip(1)
        .all(|l| l.split(',').nth(1) == Some("10") && l.ends_with(",0,2,3,true")));
    let out = shgraver(&["scan-bounds", "--family", "2,3,1", "--t-max", "60"]);
    assert!(out.status.success());
    let err = String::from_utf8(out.stderr).unwrap();
    for line in [
        "B+-: formula=6 last_failure=6",
        "B+: formula=4 last_failure=4",
        "B-: formula=5 last_failure=5",
    ] {
        assert!(err.contains(line), "{err}");
    }
    let diff = stdout(&["difftest", "--families", "1,1,1;2,3,1", "--periods", "1"]);
    assert!(diff.starts_with("a,b,d,t,fast,oracle,equal\n"));
    assert!(diff.lines().skip(1).all(|l| l.ends_with(",true")));
    assert_eq!(
        stdout(&["difftest", "--families", "", "--format", "json"])
            .matches("[]")
            .count(),
        2
    );
}

#[test]
fn augmentation() {
    let out = stdout(&[
        "augment",
        "--gens",
        "17,19,22",
        "--start",
        "0,6,13",
        "--objective",
        "1,0,-1",
        "--sense",
        "max",
    ]);
    assert_eq!(
        out,
        "element=400 start=(0,6,13) optimum=(20,2,1) value=19\n"
    );
    let out = stdout(&[
        "augment",
        "--gens",
        "17,19,22",
        "--element",
        "400",
        "--objective",
        "1/2,1,1",
    ]);
    assert!(out.starts_with("element=400 start=(0,6,13) "));
}

#[test]
fn exit_codes() {
    assert_eq!(code(&["graver", "--gens", "2,3"]), 1);
    assert_eq!(code(&["graver", "--gens", "17,19,x"]), 1);
    assert_eq!(code(&["graver", "--gens", "4,6,8"]), 1);
    assert_eq!(
        code(&["graver", "--gens", "17,19,22", "--method", "magic"]),
        1
    );
    assert_eq!(
        code(&["count", "--family", "2,4,1", "--t-range", "1..5"]),
        1
    );
    assert_eq!(code(&["count", "--family", "2,3,1", "--t-range", "5"]), 1);
    assert_eq!(
        code(&[
            "augment",
            "--gens",
            "17,19,22",
            "--element",
            "5",
            "--objective",
            "1,1,1"
        ]),
        1
    );
    assert_eq!(
        code(&[
            "augment",
            "--gens",
            "17,19,22",
            "--start",
            "-1,0,0",
            "--objective",
            "1,1,1"
        ]),
        1
    );
    assert_eq!(code(&["bogus"]), 1);
    assert_eq!(code(&["--help"]), 0);
    assert_eq!(code(&["--version"]), 0);
}
