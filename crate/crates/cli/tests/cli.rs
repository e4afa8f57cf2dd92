//! End-to-end tests of the `weylsig` binary: golden tables, scalar commands,
//! and the rule that every CLI path is a thin adapter over the library.

use std::process::Command;

use weylsig_core::partitions::Partition;
use weylsig_core::tableaux::CoefficientCache;

fn weylsig(args: &[&str]) -> (String, String, Option<i32>) {
    let out = Command::new(env!("CARGO_BIN_EXE_weylsig"))
        .args(args)
        .env_remove("WEYLSIG_CACHE_DIR")
        .output()
        .expect("binary runs");
    (
        String::from_utf8(out.stdout).expect("utf8 stdout"),
        String::from_utf8(out.stderr).expect("utf8 stderr"),
        out.status.code(),
    )
}

#[test]
fn kostka_and_lr_match_library() {
    let (out, _, code) = weylsig(&["kostka", "[2,1]", "(1,1,1)"]);
    assert_eq!(code, Some(0));
    assert_eq!(out.trim(), "2");
    let cache = CoefficientCache::new();
    let shape: Partition = "[2,1]".parse().unwrap();
    assert_eq!(
        out.trim(),
        cache
            .kostka(&shape, &"(1,1,1)".parse().unwrap())
            .to_string()
    );

    let (out, _, code) = weylsig(&["lr", "[2,1]", "[1,1]", "[1]"]);
    assert_eq!(code, Some(0));
    assert_eq!(out.trim(), "1");
}

#[test]
fn table_b3_matches_golden_bytes() {
    let (out, _, code) = weylsig(&["table", "B3", "--format", "tsv"]);
    assert_eq!(code, Some(0));
    assert_eq!(out, include_str!("golden/table_b3.tsv"));
}

#[test]
fn table_g2_extended_matches_golden_bytes() {
    let (out, _, code) = weylsig(&["table", "G2-extended", "--format", "tsv"]);
    assert_eq!(code, Some(0));
    assert_eq!(out, include_str!("golden/table_g2_extended.tsv"));
}

#[test]
fn sig_matches_direct_library_call() {
    let (out, _, code) = weylsig(&["sig", "A", "[2,1]"]);
    assert_eq!(code, Some(0));
    let value: serde_json::Value = serde_json::from_str(&out).unwrap();
    let result = value["result"].as_object().unwrap();
    let cache = CoefficientCache::new();
    let sig =
        weylsig_core::type_a::sign_signature_a(&cache, &"[2,1]".parse().unwrap()).unwrap();
    for (p, m) in sig.entries().unwrap() {
        let key = p.to_composition().to_string();
        assert_eq!(
            result[&key].as_i64().unwrap().to_string(),
            m.to_string(),
            "at {key}"
        );
    }
    assert_eq!(result.len(), 3);
    // Deterministic key order: the canonical enumeration order.
    let keys: Vec<&String> = result.keys().collect();
    assert_eq!(keys, ["(1,1,1)", "(2,1)", "(3)"]);
}

#[test]
fn recover_round_trip_through_cli() {
    let (out, _, code) = weylsig(&["recover", "A", r#"{"(1,1,1)":2,"(2,1)":1}"#]);
    assert_eq!(code, Some(0));
    assert_eq!(out.trim(), "[2,1]");

    let (sig_out, _, _) = weylsig(&["sig", "B", "[1,1]|[1]"]);
    let value: serde_json::Value = serde_json::from_str(&sig_out).unwrap();
    let payload = serde_json::to_string(&value["result"]).unwrap();
    let (out, _, code) = weylsig(&["recover", "B", &payload]);
    assert_eq!(code, Some(0));
    assert_eq!(out.trim(), "[1,1]|[1]");

    let (sig_out, _, _) = weylsig(&["sig", "D", "[1,1]+"]);
    let value: serde_json::Value = serde_json::from_str(&sig_out).unwrap();
    let payload = serde_json::to_string(&value["result"]).unwrap();
    let (out, _, code) = weylsig(&["recover", "D", &payload]);
    assert_eq!(code, Some(0));
    assert_eq!(out.trim(), "[1,1]+");
}

#[test]
fn decompose_inverts_sums() {
    let cache = CoefficientCache::new();
    let a = weylsig_core::type_a::sign_signature_a(&cache, &"[3]".parse().unwrap()).unwrap();
    let b =
        weylsig_core::type_a::sign_signature_a(&cache, &"[1,1,1]".parse().unwrap()).unwrap();
    let total = a.add(&b).unwrap();
    let mut payload = serde_json::Map::new();
    for (p, m) in total.entries().unwrap() {
        payload.insert(
            p.to_composition().to_string(),
            serde_json::json!(i64::try_from(m).unwrap()),
        );
    }
    let text = serde_json::to_string(&serde_json::Value::Object(payload)).unwrap();
    let (out, _, code) = weylsig(&["decompose", "A", &text]);
    assert_eq!(code, Some(0));
    let value: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert_eq!(value["result"]["[3]"], 1);
    assert_eq!(value["result"]["[1,1,1]"], 1);
}

#[test]
fn branch_command() {
    let (out, _, code) = weylsig(&["branch", "B", "[1]|[1]", "--to", "bb:1"]);
    assert_eq!(code, Some(0));
    let value: serde_json::Value = serde_json::from_str(&out).unwrap();
    let result = value["result"].as_object().unwrap();
    assert_eq!(result.len(), 2);
    assert_eq!(result["[1]|[] * []|[1]"], 1);
    assert_eq!(result["[]|[1] * [1]|[]"], 1);

    let (out, _, code) = weylsig(&["branch", "B", "[1]|[1]", "--to", "sn"]);
    assert_eq!(code, Some(0));
    let value: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert_eq!(value["result"]["[2]"], 1);
    assert_eq!(value["result"]["[1,1]"], 1);
}

#[test]
fn wcell_report() {
    let path = concat!(env!("CARGO_MANIFEST_DIR"), "/tests/golden/g2_wcell.txt");
    let (out, _, code) = weylsig(&["wcell", path, "--type", "G2"]);
    assert_eq!(code, Some(0));
    let value: serde_json::Value = serde_json::from_str(&out).unwrap();
    let cells = value["result"]["cells"].as_array().unwrap();
    assert_eq!(cells.len(), 4);
    let sizes: Vec<u64> = cells.iter().map(|c| c["size"].as_u64().unwrap()).collect();
    assert_eq!(sizes, [1, 5, 5, 1]);
    let orbits: Vec<&str> = cells.iter().map(|c| c["orbit"].as_str().unwrap()).collect();
    assert_eq!(orbits, ["G_2", "G_2(a_1)", "G_2(a_1)", "0"]);
    assert!(cells.iter().all(|c| c["valid"] == serde_json::json!(true)));
}

#[test]
fn usage_and_domain_error_exit_codes() {
    // Unknown subcommand: usage error, exit 2.
    let (_, _, code) = weylsig(&["frobnicate"]);
    assert_eq!(code, Some(2));
    // Domain error: structured JSON on stderr, exit 1.
    let (out, err, code) = weylsig(&["kostka", "[2,1", "(1)"]);
    assert_eq!(code, Some(1));
    assert!(out.is_empty());
    let value: serde_json::Value = serde_json::from_str(err.trim()).unwrap();
    assert!(value["error"].as_str().unwrap().contains("partition"));
}

#[test]
fn persistent_cache_round_trip() {
    let dir = std::env::temp_dir().join(format!("weylsig-cache-{}", std::process::id()));
    let _ = std::fs::remove_dir_all(&dir);
    let run = |args: &[&str]| {
        let out = Command::new(env!("CARGO_BIN_EXE_weylsig"))
            .args(args)
            .env("WEYLSIG_CACHE_DIR", &dir)
            .output()
            .expect("binary runs");
        String::from_utf8(out.stdout).unwrap()
    };
    assert_eq!(run(&["kostka", "[2,1]", "(1,1,1)"]).trim(), "2");
    let cached = std::fs::read_to_string(dir.join("coefficients.tsv")).unwrap();
    assert!(cached.contains("K|[2,1]|[1,1,1]\t2"));
    // Second run reads the cache and still answers correctly.
    assert_eq!(run(&["kostka", "[2,1]", "(1,1,1)"]).trim(), "2");
    let _ = std::fs::remove_dir_all(&dir);
}

#[test]
fn parallel_table_is_deterministic() {
    let (seq, _, _) = weylsig(&["table", "B3", "--format", "tsv"]);
    let (par, _, code) = weylsig(&["table", "B3", "--format", "tsv", "--parallel", "4"]);
    assert_eq!(code, Some(0));
    assert_eq!(seq, par);
}

#[test]
fn oracle_check_small() {
    let (out, _, code) = weylsig(&["oracle-check", "--type", "B", "--n", "2"]);
    assert_eq!(code, Some(0));
    assert!(out.contains("PASS: 0 mismatches"));
}
