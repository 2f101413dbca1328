use std::path::{Path, PathBuf};
use std::process::Command;

use purederive_cli::{LoadError, Workspace};

fn data(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("data").join(name)
}

fn purederive(args: &[&str]) -> (i32, String, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_purederive")).args(args).output().expect("binary runs");
    (out.status.code().unwrap_or(-1), String::from_utf8(out.stdout).unwrap(), String::from_utf8(out.stderr).unwrap())
}

const MINIMAL: &str = r#"{
  "ring": { "kind": "integers" },
  "modules": { "Z2": { "generators": 1, "relations": [[2]] } },
  "complexes": { "S": { "terms": [{ "degree": 0, "module": "Z2" }] } }
}"#;

#[test]
fn minimal_workspace_loads() {
    let w = Workspace::parse(MINIMAL).unwrap();
    assert_eq!(w.complexes.len(), 1);
    assert_eq!(w.complexes["S"].term(0).canonical_form().to_string(), "Z/2");
}

#[test]
fn non_complex_names_the_degree() {
    let text = r#"{
      "ring": { "kind": "integers" },
      "modules": { "Z": { "generators": 1 } },
      "maps": { "one": { "domain": "Z", "codomain": "Z", "matrix": [[1]] } },
      "complexes": { "bad": {
        "terms": [{ "degree": 0, "module": "Z" }, { "degree": 1, "module": "Z" }, { "degree": 2, "module": "Z" }],
        "differentials": [{ "degree": 0, "map": "one" }, { "degree": 1, "map": "one" }]
      } }
    }"#;
    match Workspace::parse(text) {
        Err(LoadError::Validation { name, reason }) => {
            assert_eq!(name, "bad");
            assert!(reason.contains("degree 1"), "{reason}");
        }
        other => panic!("{other:?}"),
    }
}

#[test]
fn unknown_reference_is_named() {
    let text = MINIMAL.replace(r#""module": "Z2""#, r#""module": "Z3""#);
    match Workspace::parse(&text) {
        Err(LoadError::Validation { name, reason }) => {
            assert_eq!(name, "S");
            assert!(reason.contains("Z3"));
        }
        other => panic!("{other:?}"),
    }
}

#[test]
fn parse_errors_carry_position_and_field() {
    let text = "{\n  \"ring\": { \"kind\": \"integers\" },\n  \"modules\": { \"A\": { \"gens\": 1 } }\n}";
    match Workspace::parse(text) {
        Err(LoadError::Parse { line, message, .. }) => {
            assert_eq!(line, 3);
            assert!(message.contains("gens"), "{message}");
        }
        other => panic!("{other:?}"),
    }
}

#[test]
fn emit_round_trips() {
    let w = Workspace::load(&data("example.json")).unwrap();
    let once = w.emit();
    let twice = Workspace::parse(&once).unwrap().emit();
    assert_eq!(once, twice);
    let minimal = Workspace::parse(MINIMAL).unwrap().emit();
    assert_eq!(Workspace::parse(&minimal).unwrap().emit(), minimal);
}

#[test]
fn exit_codes() {
    let ws = data("example.json");
    let ws = ws.to_str().unwrap();
    assert_eq!(purederive(&["profile", "X", "--workspace", ws]).0, 0);
    assert_eq!(purederive(&["frobnicate", "--workspace", ws]).0, 2);
    assert_eq!(purederive(&["profile", "nope", "--workspace", ws]).0, 2);
    assert_eq!(purederive(&["profile", "X", "--workspace", "/nonexistent.json"]).0, 2);
    let (code, _, err) = purederive(&["resolve", "X", "injective", "--workspace", ws]);
    assert_eq!(code, 3, "{err}");
    assert_eq!(purederive(&["pid", "X", "--workspace", ws]).0, 3);
}

/// Commands whose reports are pinned byte for byte.
const GOLDEN: &[(&str, &[&str])] = &[
    ("profile_X", &["profile", "X"]),
    ("ppd_X", &["ppd", "X"]),
    ("resolve_E", &["resolve", "E"]),
    ("pext_X_S2_1", &["pext", "X", "S2", "1"]),
    ("roof_r", &["roof", "r"]),
    ("tower_Q", &["tower", "Q"]),
    ("tower_P2", &["tower", "P2"]),
    ("tower_J2", &["tower", "J2"]),
    ("probe_1", &["probe", "1"]),
    ("verify_wellknown", &["verify", "wellknown"]),
    ("verify_thm45", &["verify", "thm45"]),
    ("verify_prop34", &["verify", "prop34"]),
];

#[test]
fn golden_reports() {
    let ws = data("example.json");
    let dir = Path::new(env!("CARGO_MANIFEST_DIR")).join("tests").join("golden");
    let update = std::env::var_os("UPDATE_GOLDEN").is_some();
    for (name, args) in GOLDEN {
        let mut full: Vec<&str> = args.to_vec();
        full.extend(["--workspace", ws.to_str().unwrap()]);
        let (code, out, err) = purederive(&full);
        assert_eq!(code, 0, "{name}: {err}");
        let (_, again, _) = purederive(&full);
        assert_eq!(out, again, "{name}: report differs between runs");
        let path = dir.join(format!("{name}.json"));
        if update {
            std::fs::write(&path, &out).unwrap();
        } else {
            let want = std::fs::read_to_string(&path).unwrap_or_else(|_| panic!("missing golden file {}", path.display()));
            assert!(out == want, "{name}: report differs from {}", path.display());
        }
    }
}

#[test]
fn seed_changes_harness_output() {
    let a = purederive(&["verify", "prop34", "--count", "6", "--seed", "1"]).1;
    let b = purederive(&["verify", "prop34", "--count", "6", "--seed", "2"]).1;
    assert_ne!(a, b);
    assert_eq!(a, purederive(&["verify", "prop34", "--count", "6", "--seed", "1"]).1);
}
