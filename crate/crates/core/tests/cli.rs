use std::process::Command;

fn sixterm(args: &[&str]) -> (i32, String, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_sixterm"))
        .args(args)
        .output()
        .expect("binary runs");
    (
        out.status.code().unwrap_or(-1),
        String::from_utf8_lossy(&out.stdout).into_owned(),
        String::from_utf8_lossy(&out.stderr).into_owned(),
    )
}

#[test]
fn seq_and_bounds() {
    let (code, text, _) = sixterm(&["seq", "--A", "6", "--n", "4"]);
    assert_eq!(code, 0);
    assert!(text.contains("x[4] = 204"));
    assert!(text.contains("0,1,6,35,204"));

    let (code, text, _) = sixterm(&["bounds", "--X", "1"]);
    assert_eq!(code, 0);
    assert!(text.contains("a_cap = 308"));
    assert!(text.contains("(26, 23, 17, 12, 7, 2)"));
}

#[test]
fn exit_codes() {
    let (code, _, err) = sixterm(&["search", "--coeffs", "0,1,1,1,1,1"]);
    assert_eq!(code, 2, "{err}");
    let (code, _, _) = sixterm(&["search", "--bogus"]);
    assert_eq!(code, 2);
    let (code, _, err) = sixterm(&[
        "search",
        "--raw",
        "1,-1,-1,-1,-1,-1",
        "--A-range",
        "400..500",
    ]);
    assert_eq!(code, 2, "{err}");
    let (code, _, err) = sixterm(&["repro", "--budget", "10"]);
    assert_eq!(code, 3);
    assert!(err.contains("budget"));
    let (code, _, err) = sixterm(&["search", "--raw", "1,-1,-1,-1,-1,-1", "--X", "40"]);
    assert_eq!(code, 3, "{err}");
    let (code, _, err) = sixterm(&["bounds", "--out", "/nonexistent-dir/out.jsonl"]);
    assert_eq!(code, 1);
    assert!(err.contains("cannot write"));
}

#[test]
fn repro_report() {
    let (code, text, _) = sixterm(&["repro", "--workers", "1"]);
    assert_eq!(code, 0);
    assert!(text.contains("PASS A=5 x[2] = x[1] + x[1] + x[1] + x[1] + x[1]"));
    assert!(text.contains("A=3 m=(2, 1, 1, 1, 0, 0)"));
    assert!(text.contains("m3 stops at 17"));
}

#[test]
fn written_records_verify() {
    let dir = tempfile::tempdir().unwrap();
    let repro = dir.path().join("repro.jsonl");
    let fam = dir.path().join("fam.jsonl");
    let search = dir.path().join("search.jsonl");
    let p = |p: &std::path::Path| p.to_str().unwrap().to_string();

    assert_eq!(sixterm(&["repro", "--out", &p(&repro)]).0, 0);
    assert_eq!(
        sixterm(&[
            "families",
            "--A-range",
            "3..12",
            "--coeffs",
            "1,-3,1",
            "--coeffs",
            "1,-7,1",
            "--coeffs",
            "1,-11,1",
            "--out",
            &p(&fam)
        ])
        .0,
        0
    );
    assert_eq!(
        sixterm(&[
            "search",
            "--coeffs",
            "2,1,1,1,1,1",
            "--collide",
            "--A-range",
            "3..20",
            "--out",
            &p(&search)
        ])
        .0,
        0
    );
    for file in [&repro, &fam, &search] {
        let (code, text, err) = sixterm(&["verify", "--in", &p(file)]);
        assert_eq!(code, 0, "{text}{err}");
        assert!(text.contains("verified"));
    }
    let fam_text = std::fs::read_to_string(&fam).unwrap();
    assert_eq!(
        fam_text
            .lines()
            .filter(|l| l.contains("\"family\""))
            .count(),
        4
    );
    assert!(fam_text.contains(r#""offsets":[4,2,0],"coefficients":[1,-7,1],"form":"three-term""#));

    // flip one coefficient
    let text = std::fs::read_to_string(&repro).unwrap();
    let tampered = text.replacen(
        r#""indices":[2,1,1,1,1,1],"coefficients":[1,-1,-1,-1,-1,-1]"#,
        r#""indices":[2,1,1,1,1,1],"coefficients":[1,-1,-1,-1,-1,1]"#,
        1,
    );
    assert_ne!(text, tampered);
    let bad = dir.path().join("bad.jsonl");
    std::fs::write(&bad, tampered).unwrap();
    let (code, text, _) = sixterm(&["verify", "--in", &p(&bad)]);
    assert_eq!(code, 1);
    assert!(text.contains("FAIL line"));
}

#[test]
fn worker_count_leaves_files_identical() {
    let dir = tempfile::tempdir().unwrap();
    let a = dir.path().join("a.jsonl");
    let b = dir.path().join("b.jsonl");
    let args = |w: &str, path: &std::path::Path| {
        vec![
            "families".to_string(),
            "--A-range".into(),
            "3..60".into(),
            "--workers".into(),
            w.into(),
            "--out".into(),
            path.to_str().unwrap().into(),
        ]
    };
    for (w, path) in [("1", &a), ("6", &b)] {
        let owned = args(w, path);
        let refs: Vec<&str> = owned.iter().map(String::as_str).collect();
        assert_eq!(sixterm(&refs).0, 0);
    }
    assert_eq!(std::fs::read(a).unwrap(), std::fs::read(b).unwrap());
}
