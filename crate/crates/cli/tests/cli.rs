use std::path::{Path, PathBuf};
use std::process::Command;

use serde_json::Value;

use nullity_cli::{run, Workbench, SCHEMA_VERSION};

fn corpus(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("../../corpus")
        .join(name)
}

fn nullity(file: &Path, args: &[&str]) -> (Value, i32) {
    let mut full = vec![
        "nullity".to_string(),
        "--file".into(),
        file.display().to_string(),
    ];
    full.extend(args.iter().map(|s| s.to_string()));
    let (out, _, code) = run(full);
    let out = out.expect("a report");
    let v: Value = serde_json::from_str(&out).unwrap_or_else(|e| panic!("{e}: {out}"));
    assert_eq!(v["schema_version"], SCHEMA_VERSION, "{v}");
    (v, code)
}

fn with_text(text: &str, args: &[&str]) -> (Value, i32) {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("w.toml");
    std::fs::write(&path, text).unwrap();
    nullity(&path, args)
}

const MINIMAL: &str = r#"
[ring]
vars = ["x"]

[complexes.K]
koszul = ["x"]
"#;

#[test]
fn minimal_file_validates() {
    let (v, code) = with_text(MINIMAL, &["validate"]);
    assert_eq!(code, 0);
    assert_eq!(v["status"], "computed");
    assert_eq!(v["complexes"]["K"]["ranks"], serde_json::json!([1, 1]));
}

#[test]
fn nonzero_square_is_located() {
    let text = r#"[ring]
vars = ["x"]

[complexes.C]
lo = 0
ranks = [1, 1, 1]
d.1 = [["x"]]
d.2 = [["x"]]
"#;
    let (v, code) = with_text(text, &["validate"]);
    assert_eq!(code, 2);
    assert_eq!(v["error"]["kind"], "invariant");
    assert!(
        v["error"]["message"].as_str().unwrap().contains("degree 1"),
        "{v}"
    );
    assert_eq!(v["error"]["line"], 4);
}

#[test]
fn undefined_prime_is_unresolved() {
    let text = r#"[ring]
vars = ["x"]

[tables.T]
x = ["x"]

[perversity.f]
table = "T"
values = [["y"]]
"#;
    let (v, code) = with_text(text, &["validate"]);
    assert_eq!(code, 2);
    assert_eq!(v["error"]["kind"], "unresolved-reference");
    assert_eq!(v["error"]["line"], 9);
    assert_eq!(v["error"]["column"], 12);
}

#[test]
fn syntax_errors_have_locations() {
    let (v, code) = with_text("[ring]\nvars = [\"x\"\n", &["validate"]);
    assert_eq!(code, 2);
    assert_eq!(v["error"]["kind"], "syntax");
    assert!(v["error"]["line"].as_u64().is_some());
    let bad_poly = "[ring]\nvars = [\"x\"]\n[complexes.K]\nkoszul = [\"x +* 1\"]\n";
    let (v, _) = with_text(bad_poly, &["validate"]);
    assert_eq!(v["error"]["kind"], "syntax");
    assert_eq!(v["error"]["line"], 4);
}

#[test]
fn unknown_fields_and_cycles_are_rejected() {
    let (v, code) = with_text("[ring]\nvars = [\"x\"]\ncolour = 1\n", &["validate"]);
    assert_eq!((code, v["error"]["kind"].as_str()), (2, Some("syntax")));
    let cyclic =
        "[ring]\nvars = [\"x\"]\n[complexes.A]\nsum = [\"B\"]\n[complexes.B]\ntensor = [\"A\"]\n";
    let (v, code) = with_text(cyclic, &["validate"]);
    assert_eq!(code, 2);
    assert!(
        v["error"]["message"].as_str().unwrap().contains("itself"),
        "{v}"
    );
}

#[test]
fn supp_lists_primes_per_degree() {
    let (v, code) = nullity(
        &corpus("plane.toml"),
        &["supp", "--complex", "K", "--table", "T"],
    );
    assert_eq!(code, 0);
    assert_eq!(v["support"]["0"], serde_json::json!(["x,y"]));
    assert_eq!(v["support"]["1"], serde_json::json!([]));
    let (v, _) = nullity(
        &corpus("plane.toml"),
        &["supp", "--complex", "Mixed", "--table", "T"],
    );
    assert_eq!(v["support"]["0"], serde_json::json!(["x", "x,y"]));
}

#[test]
fn computations_exit_zero() {
    let file = corpus("plane.toml");
    let runs: &[&[&str]] = &[
        &["homology", "--complex", "KRx"],
        &["homology", "--complex", "K2", "--degree", "0"],
        &["koszul", "--gens", "x,y", "--powers", "1,3"],
        &[
            "koszul", "--table", "T", "--prime", "x-1,y", "--check", "Mixed",
        ],
        &["tensor", "--left", "K", "--right", "Rx2"],
        &["cone", "--map", "sq"],
        &["cone", "--map", "idK"],
        &["truncate", "--complex", "Mixed", "--degree", "1"],
        &["phi", "--table", "T", "--complexes", "Rx,Shifted"],
        &["build-s", "--pf", "f"],
        &["roundtrip", "--pf", "f"],
    ];
    for args in runs {
        let (v, code) = nullity(&file, args);
        assert_eq!(code, 0, "{args:?}: {v}");
    }
    let (v, _) = nullity(&file, &["phi", "--table", "T", "--complexes", "Rx,Shifted"]);
    assert_eq!(v["perversity"]["window"], serde_json::json!([0, 2]));
    let (v, _) = nullity(&file, &["build-s", "--pf", "f"]);
    assert_eq!(v["summands"].as_array().unwrap().len(), 6);
}

#[test]
fn koszul_annihilation_report() {
    let (v, code) = nullity(
        &corpus("plane.toml"),
        &[
            "koszul", "--gens", "x,y", "--powers", "2,1", "--check", "Mixed",
        ],
    );
    assert_eq!(code, 0);
    assert_eq!(v["status"], "pass");
    assert_eq!(v["annihilation"]["passed"], true);
}

#[test]
fn certificates_accept_and_reject() {
    for name in ["square-extension.toml", "koszul-replacement.toml"] {
        let (v, code) = nullity(
            &corpus(name),
            &["check-cert", "--cert", "c", "--generator", "E"],
        );
        assert_eq!(
            (code, v["status"].as_str()),
            (0, Some("pass")),
            "{name}: {v}"
        );
    }
    let (v, code) = nullity(
        &corpus("corrupted-square-extension.toml"),
        &["check-cert", "--cert", "c", "--generator", "E"],
    );
    assert_eq!(code, 1);
    assert_eq!(v["rejection"]["node"], "y");
    assert!(v["rejection"]["reason"].as_str().is_some());
}

#[test]
fn cellular_certificates_are_written_and_recheck() {
    let dir = tempfile::tempdir().unwrap();
    for (extra, generator) in [(None, "generator"), (Some("Rx"), "generator")] {
        let out = dir.path().join("cell.toml");
        let mut args = vec![
            "cellular-cert",
            "--complex",
            "KRx",
            "--out",
            out.to_str().unwrap(),
        ];
        if let Some(n) = extra {
            args.extend(["--tensor", n]);
        }
        let (v, code) = nullity(&corpus("plane.toml"), &args);
        assert_eq!(code, 0, "{v}");
        let (v, code) = nullity(
            &out,
            &["check-cert", "--cert", "cellular", "--generator", generator],
        );
        assert_eq!(code, 0, "{v}");
        let wb = Workbench::parse(&std::fs::read_to_string(&out).unwrap()).unwrap();
        assert_eq!(
            Workbench::parse(&wb.to_toml()).unwrap().to_toml(),
            wb.to_toml()
        );
    }
}

#[test]
fn verifiers_report_statuses() {
    let file = corpus("plane.toml");
    let cases: &[(&[&str], &str, i32)] = &[
        (
            &[
                "verify",
                "transit",
                "--complex",
                "Rx",
                "--table",
                "M",
                "--prime",
                "x-1,y",
                "--degree",
                "0",
            ],
            "pass",
            0,
        ),
        (
            &[
                "verify",
                "transit",
                "--complex",
                "Rx",
                "--table",
                "M",
                "--prime",
                "x,y",
                "--degree",
                "0",
            ],
            "vacuous",
            0,
        ),
        (
            &[
                "verify",
                "transit",
                "--complex",
                "Rx",
                "--table",
                "T",
                "--prime",
                "x",
                "--degree",
                "0",
            ],
            "precondition-failed",
            1,
        ),
        (
            &[
                "verify",
                "localcase",
                "--complex",
                "Mixed",
                "--table",
                "T",
                "--degree",
                "0",
            ],
            "pass",
            0,
        ),
        (
            &[
                "verify",
                "localcase",
                "--complex",
                "K",
                "--table",
                "T",
                "--degree",
                "1",
            ],
            "precondition-failed",
            1,
        ),
        (
            &[
                "verify",
                "killkp",
                "--complex",
                "Res",
                "--table",
                "M",
                "--prime",
                "x,y",
                "--degree",
                "0",
            ],
            "pass",
            0,
        ),
        (
            &[
                "verify",
                "thereismap",
                "--complex",
                "Mixed",
                "--table",
                "T",
                "--prime",
                "x",
                "--degree",
                "0",
            ],
            "pass",
            0,
        ),
        (
            &["verify", "annihilation", "--complex", "Rx2", "--gens", "x"],
            "pass",
            0,
        ),
        (
            &["verify", "homologyann", "--map", "idK", "--element", "x"],
            "pass",
            0,
        ),
        (
            &[
                "verify",
                "minsupp",
                "--complex",
                "Rx2",
                "--table",
                "T",
                "--prime",
                "x",
                "--degree",
                "0",
            ],
            "pass",
            0,
        ),
        (
            &[
                "verify",
                "minsupp",
                "--complex",
                "Rx2",
                "--table",
                "T",
                "--prime",
                "y",
                "--degree",
                "0",
            ],
            "precondition-failed",
            1,
        ),
    ];
    for (args, status, code) in cases {
        let (v, c) = nullity(&file, args);
        assert_eq!(v["status"], *status, "{args:?}: {v}");
        assert_eq!(c, *code, "{args:?}");
        assert_eq!(v["lemma"], args[1]);
    }
}

const RESIDUES: &str = r#"
[ring]
vars = ["x", "y"]

[tables.T]
x = ["x"]
"x,y" = ["x", "y"]
"x-1,y" = ["x - 1", "y"]

[complexes.Q]
residue = ["x", "y"]

[certificates.trivial]
root = "g"

[certificates.trivial.nodes.g]
kind = "generator"
complex = "Q"
"#;

#[test]
fn certificate_verifiers() {
    let (v, code) = with_text(
        RESIDUES,
        &[
            "verify", "kil", "--table", "T", "--prime", "x,y", "--q", "x,y", "--cert", "trivial",
        ],
    );
    assert_eq!((code, v["status"].as_str()), (0, Some("pass")), "{v}");
    assert_eq!(v["witness"]["dim"], "0");
    let (v, code) = with_text(
        RESIDUES,
        &[
            "verify", "kil", "--table", "T", "--prime", "x", "--q", "x", "--cert", "trivial",
        ],
    );
    assert_eq!((code, v["status"].as_str()), (0, Some("unchecked")), "{v}");
    let (v, code) = with_text(
        RESIDUES,
        &[
            "verify",
            "crucial",
            "--complex",
            "Q",
            "--table",
            "T",
            "--prime",
            "x,y",
            "--degree",
            "0",
            "--cert",
            "trivial",
        ],
    );
    assert_eq!((code, v["status"].as_str()), (0, Some("pass")), "{v}");
    let (v, code) = nullity(
        &corpus("corrupted-square-extension.toml"),
        &[
            "verify",
            "genkilling",
            "--complex",
            "c.claim",
            "--table",
            "T",
            "--cert",
            "c",
        ],
    );
    assert_eq!((code, v["status"].as_str()), (1, Some("fail")), "{v}");
}

#[test]
fn usage_errors_exit_two() {
    let (out, _, code) = run(["nullity", "supp", "--complex", "K"]);
    assert_eq!(code, 2);
    assert!(out.is_none());
    let (out, _, code) = run(["nullity", "validate"]);
    assert_eq!(code, 2);
    let v: Value = serde_json::from_str(&out.unwrap()).unwrap();
    assert_eq!(v["error"]["kind"], "usage");
    let (v, code) = nullity(
        &corpus("plane.toml"),
        &["koszul", "--gens", "x", "--table", "T", "--prime", "x"],
    );
    assert_eq!((code, v["error"]["kind"].as_str()), (2, Some("usage")));
    let (_, code) = nullity(Path::new("/nonexistent/file.toml"), &["validate"]);
    assert_eq!(code, 2);
}

#[test]
fn format_is_canonical() {
    let (text, _, code) = run([
        "nullity",
        "--file",
        corpus("plane.toml").to_str().unwrap(),
        "format",
    ]);
    assert_eq!(code, 0);
    let text = text.unwrap();
    let wb = Workbench::parse(&text).unwrap();
    assert_eq!(wb.to_toml().trim_end(), text.trim_end());
}

#[test]
fn binary_exit_codes() {
    let bin = env!("CARGO_BIN_EXE_nullity");
    let status = |args: &[&str]| {
        Command::new(bin)
            .args(args)
            .output()
            .unwrap()
            .status
            .code()
            .unwrap()
    };
    let plane = corpus("plane.toml");
    let p = plane.to_str().unwrap();
    assert_eq!(status(&["--file", p, "roundtrip", "--pf", "f"]), 0);
    let bad = corpus("corrupted-square-extension.toml");
    assert_eq!(
        status(&[
            "--file",
            bad.to_str().unwrap(),
            "check-cert",
            "--cert",
            "c",
            "--generator",
            "E"
        ]),
        1
    );
    assert_eq!(status(&["--file", p, "frobnicate"]), 2);
    assert_eq!(status(&["--help"]), 0);
}
