use serde_json::Value;

use fgcoh_cli::{run, Outcome, EXIT_CAP, EXIT_INPUT, EXIT_OK, EXIT_VERIFY};

fn fgcoh(args: &[&str]) -> Outcome {
    run(std::iter::once("fgcoh").chain(args.iter().copied()))
}

fn json(args: &[&str]) -> Value {
    let out = fgcoh(args);
    assert_eq!(out.code, EXIT_OK, "{}", out.stderr);
    serde_json::from_str(&out.stdout).unwrap()
}

#[test]
fn ring_reports() {
    let v = json(&["ring", "--group", "D8", "--maxdeg", "10"]);
    assert_eq!(v["schema_version"], 1);
    assert_eq!(v["command"], "ring");
    assert_eq!(v["config"]["maxdeg"], 10);
    assert_eq!(v["config"]["max_m"], 4);
    assert_eq!(v["config"]["rank_ceiling"], 4096);
    let hilbert: Vec<u64> = serde_json::from_value(v["result"]["hilbert"].clone()).unwrap();
    assert_eq!(hilbert, (1..=11).collect::<Vec<u64>>());
    let v = json(&["ring", "--group", "Z2"]);
    assert_eq!(v["result"]["generator_degrees"], serde_json::json!([1]));
    assert_eq!(fgcoh(&["ring", "--group", "missing"]).code, EXIT_INPUT);
    assert_eq!(fgcoh(&["ring"]).code, EXIT_INPUT);
    assert_eq!(fgcoh(&["ring", "--group", "Z2", "--maxdeg", "0"]).code, EXIT_INPUT);
}

#[test]
fn witness_reports() {
    assert_eq!(json(&["witness", "--group", "Q8"])["result"]["witness"]["m"], 2);
    assert_eq!(json(&["witness", "--group", "Z4"])["result"]["witness"]["m"], 1);
    let v = json(&["witness", "--group", "V4"]);
    assert_eq!(v["result"]["found"], false);
    assert_eq!(v["result"]["message"], "none ≤ 4");
    assert_eq!(fgcoh(&["witness", "--group", "S3"]).code, EXIT_INPUT);
}

#[test]
fn splice_report() {
    let v = json(&["splice", "--group", "D8", "--module", "radical"]);
    let r = &v["result"];
    assert_eq!(r["n"], 4);
    assert_eq!(r["term_dims"], serde_json::json!([2, 2, 2, 2]));
    assert_eq!(r["exactness"]["pass"], true);
    assert_eq!(r["zero_class"]["is_zero"], true);
    assert_eq!(r["tensored"]["term_dims"], serde_json::json!([7, 14, 14, 14, 14, 7]));
    assert_eq!(r["tensored"]["ext_class_is_zero"], true);
}

#[test]
fn certify_and_verify_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("d8.json");
    let p = path.to_str().unwrap();
    let out = fgcoh(&["certify", "--group", "D8", "--module", "k", "--out", p]);
    assert_eq!(out.code, EXIT_OK, "{}", out.stderr);
    let cert = fgcoh_cli::parse_certificate(&std::fs::read_to_string(&path).unwrap()).unwrap();
    assert!(cert.is_complete());
    assert!(cert.leaves_are_induced_trivial().unwrap());
    let v = json(&["verify", p]);
    assert_eq!(v["result"]["report"]["pass"], true);

    let mut doc: Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    let entry = &mut doc["result"]["root"]["sequence"][0][0][0];
    let flipped = 1 - entry.as_u64().unwrap();
    *entry = flipped.into();
    let bad = dir.path().join("bad.json");
    std::fs::write(&bad, serde_json::to_string(&doc).unwrap()).unwrap();
    let out = fgcoh(&["verify", bad.to_str().unwrap()]);
    assert_eq!(out.code, EXIT_VERIFY);
    let v: Value = serde_json::from_str(&out.stdout).unwrap();
    let failures = v["result"]["report"]["failures"].to_string();
    assert!(failures.contains("root.sequence") && failures.contains("maps[0][0][0]"), "{failures}");

    std::fs::write(&bad, "{").unwrap();
    assert_eq!(fgcoh(&["verify", bad.to_str().unwrap()]).code, EXIT_INPUT);
}

#[test]
fn certify_caps_mark_unproven() {
    let out = fgcoh(&["certify", "--group", "Q8", "--max-m", "1"]);
    assert_eq!(out.code, EXIT_CAP);
    let v: Value = serde_json::from_str(&out.stdout).unwrap();
    assert_eq!(v["result"]["root"]["kind"], "unproven");
}

#[test]
fn fingen_reports() {
    let v = json(&["fingen", "--group", "Q8"]);
    assert_eq!(v["result"]["pass"], true);
    assert_eq!(v["result"]["certified_through"], 10);
    let v = json(&["fingen", "--group", "D8", "--module", "regular"]);
    assert_eq!(v["result"]["generator_degrees"], serde_json::json!([0]));
    let v = json(&["fingen", "--group", "Z2", "--maxdeg", "3"]);
    assert_eq!(v["result"]["inconclusive"], true);
}

#[test]
fn betti_and_oracle() {
    let v = json(&["betti", "--group", "Q8", "--maxdeg", "7"]);
    assert_eq!(v["result"]["ranks"], serde_json::json!([1, 2, 2, 1, 1, 2, 2, 1]));
    let v = json(&["betti", "--group", "S3", "--maxdeg", "4"]);
    assert_eq!(v["result"]["minimal"], false);
    assert_eq!(v["result"]["cohomology"], serde_json::json!([1, 0, 0, 1, 1]));
    let v = json(&["oracle", "--group", "D8", "--maxdeg", "4"]);
    assert_eq!(v["result"]["agree"], true);
    assert_eq!(v["result"]["bar"], serde_json::json!([1, 2, 3, 4, 5]));
    assert_eq!(fgcoh(&["oracle", "--group", "D8", "--maxdeg", "10"]).code, EXIT_CAP);
}

#[test]
fn group_and_module_files() {
    let dir = tempfile::tempdir().unwrap();
    let g = dir.path().join("z2.json");
    std::fs::write(&g, r#"{"name":"C2","p":2,"degree":2,"generators":[[2,1]]}"#).unwrap();
    let m = dir.path().join("m.json");
    std::fs::write(&m, r#"{"group":"C2","dim":2,"generators":[[[0,1],[1,0]]]}"#).unwrap();
    let gs = g.to_str().unwrap();
    let v = json(&["betti", "--group-file", gs, "--module-file", m.to_str().unwrap(), "--maxdeg", "3"]);
    assert_eq!(v["result"]["ranks"], serde_json::json!([1, 0, 0, 0]));
    std::fs::write(&m, r#"{"group":"C2","dim":2,"generators":[[[1,1],[1,0]]]}"#).unwrap();
    assert_eq!(fgcoh(&["betti", "--group-file", gs, "--module-file", m.to_str().unwrap()]).code, EXIT_INPUT);
    assert_eq!(fgcoh(&["ring", "--group", "D8", "--group-file", gs]).code, EXIT_INPUT);
    assert_eq!(fgcoh(&["ring", "--group", "S3", "--p", "4"]).code, EXIT_INPUT);
}

#[test]
fn text_format_and_cache_dir() {
    let out = fgcoh(&["ring", "--group", "Z2", "--maxdeg", "4", "--format", "text", "--cache-dir", "/tmp/x"]);
    assert_eq!(out.code, EXIT_OK);
    assert!(out.stdout.starts_with("ring\n"));
    assert!(out.stdout.contains("hilbert: [1,1,1,1,1]"));
    let v = json(&["ring", "--group", "Z2", "--maxdeg", "4", "--cache-dir", "/tmp/x"]);
    assert_eq!(v["config"]["cache_dir"], "/tmp/x");
}
