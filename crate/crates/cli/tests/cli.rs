use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use fleetmatch_cli::{make_rng, sweep};
use fleetmatch_core::paillier::{KeyFile, KeyPair};
use fleetmatch_core::{InterestSet, World};
use rand::Rng;
use tempfile::TempDir;

fn fleetmatch(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_fleetmatch"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    assert!(
        out.status.success(),
        "stderr: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn write(dir: &Path, name: &str, body: &str) -> String {
    let path = dir.join(name);
    fs::write(&path, body).unwrap();
    path.to_str().unwrap().to_string()
}

#[test]
fn keygen_toy_file_and_overwrite_guard() {
    let dir = TempDir::new().unwrap();
    let path = dir.path().join("toy.json");
    let path = path.to_str().unwrap();
    stdout(&fleetmatch(&[
        "keygen", "--bits", "3", "--primes", "5,7", "--out", path,
    ]));
    let file = KeyFile::from_json(&fs::read_to_string(path).unwrap()).unwrap();
    let keys = file.keypair().unwrap();
    assert_eq!(keys.public.modulus(), &35u32.into());
    assert_eq!(keys.private.lambda(), &12u32.into());
    assert_eq!(keys.private.mu(), &3u32.into());

    let again = fleetmatch(&["keygen", "--primes", "5,7", "--out", path]);
    assert!(!again.status.success());
    assert!(String::from_utf8_lossy(&again.stderr).contains("--force"));
    stdout(&fleetmatch(&[
        "keygen", "--primes", "3,5", "--out", path, "--force",
    ]));
    let file = KeyFile::from_json(&fs::read_to_string(path).unwrap()).unwrap();
    assert_eq!(file.public_key().unwrap().modulus(), &15u32.into());
}

#[test]
fn keygen_modulus_size() {
    let out = stdout(&fleetmatch(&["--seed", "9", "keygen", "--bits", "128"]));
    let keys = KeyFile::from_json(&out).unwrap().keypair().unwrap();
    let bits = keys.public.modulus().bits();
    assert!((255..=256).contains(&bits), "{bits}");
    let public = stdout(&fleetmatch(&[
        "--seed",
        "9",
        "keygen",
        "--bits",
        "128",
        "--public-only",
    ]));
    assert!(KeyFile::from_json(&public).unwrap().is_public_only());
}

#[test]
fn demo_rows() {
    let out = stdout(&fleetmatch(&[
        "--seed",
        "1",
        "demo",
        "--roads",
        "2",
        "--slots",
        "3",
        "--interests",
        "",
        "--bits",
        "32",
    ]));
    let rows: Vec<&str> = out.lines().skip(2).collect();
    assert_eq!(rows.len(), 6);
    assert!(rows.iter().all(|r| r.ends_with(",false")));

    let out = stdout(&fleetmatch(&[
        "--seed",
        "1",
        "demo",
        "--roads",
        "1",
        "--slots",
        "1",
        "--interests",
        "1",
        "--bits",
        "32",
    ]));
    assert_eq!(out, "# fleetmatch sweep v1\nw,answered\n1,true\n");
}

#[test]
fn demo_is_byte_stable_under_a_seed() {
    let args = [
        "--seed",
        "77",
        "demo",
        "--roads",
        "2",
        "--slots",
        "4",
        "--interests",
        "2,7",
        "--bits",
        "48",
    ];
    assert_eq!(stdout(&fleetmatch(&args)), stdout(&fleetmatch(&args)));
}

#[test]
fn demo_rejects_bad_interests() {
    let out = fleetmatch(&[
        "demo",
        "--roads",
        "1",
        "--slots",
        "4",
        "--interests",
        "5",
        "--bits",
        "32",
    ]);
    assert!(!out.status.success());
    let out = fleetmatch(&["demo", "--roads", "1", "--slots", "4", "--interests", "x"]);
    assert!(!out.status.success());
}

#[test]
fn demo_with_key_file() {
    let dir = TempDir::new().unwrap();
    let keys = dir.path().join("k.json");
    let keys = keys.to_str().unwrap();
    stdout(&fleetmatch(&["keygen", "--primes", "5,7", "--out", keys]));
    let out = stdout(&fleetmatch(&[
        "--keys",
        keys,
        "demo",
        "--roads",
        "1",
        "--slots",
        "3",
        "--interests",
        "3",
    ]));
    assert!(out.ends_with("1,false\n2,false\n3,true\n"));
    stdout(&fleetmatch(&[
        "keygen",
        "--primes",
        "5,7",
        "--public-only",
        "--out",
        keys,
        "--force",
    ]));
    assert!(
        !fleetmatch(&["--keys", keys, "demo", "--roads", "1", "--slots", "1"])
            .status
            .success()
    );
}

#[test]
fn sweep_true_set_matches_interests() {
    let keys = KeyPair::from_primes(5u32.into(), 7u32.into()).unwrap();
    let mut rng = make_rng(Some(5));
    for _ in 0..100 {
        let world = World::new(rng.gen_range(1..=4), rng.gen_range(1..=6)).unwrap();
        let members: Vec<usize> = (1..=world.size()).filter(|_| rng.gen_bool(0.3)).collect();
        let interests = InterestSet::new(world, members.iter().copied()).unwrap();
        let rows = sweep(&keys, &interests, &mut rng).unwrap();
        let answered: Vec<usize> = rows.iter().filter(|r| r.answered).map(|r| r.w).collect();
        assert_eq!(answered, members);
    }
}

#[test]
fn bench_single_key_size() {
    let out = stdout(&fleetmatch(&[
        "--seed",
        "3",
        "bench",
        "--bits",
        "64",
        "--trials",
        "3",
        "--world-size",
        "4",
    ]));
    let lines: Vec<&str> = out.lines().collect();
    assert_eq!(lines[0], "# fleetmatch bench v1");
    let records: Vec<&&str> = lines
        .iter()
        .filter(|l| !l.starts_with('#'))
        .skip(1)
        .collect();
    assert_eq!(records.len(), 1);
    assert!(records[0].starts_with("64,") && records[0].ends_with(",3"));
    assert!(lines.iter().any(|l| l.starts_with("# fit bytes_exponent=")));
    assert!(!fleetmatch(&["bench", "--bits", "16"]).status.success());
    assert!(!fleetmatch(&["bench", "--bits", "64", "--trials", "2"])
        .status
        .success());
}

const C4: &str = r#"{"vertices": [1, 2, 3, 4], "edges": [[1, 2], [2, 3], [3, 4], [4, 1]]}"#;
const SCENARIO: &str = r#"{"roads": 1, "slots": 4, "fleets": [
    {"id": 1, "interests": [4]},
    {"id": 2, "interests": [1]},
    {"id": 3, "interests": [3]},
    {"id": 4, "interests": []}
]}"#;

#[test]
fn dist_demo_answers_and_transcript() {
    let dir = TempDir::new().unwrap();
    let graph = write(dir.path(), "g.json", C4);
    let scenario = write(dir.path(), "s.json", SCENARIO);
    let transcript = dir.path().join("t.jsonl");
    let transcript = transcript.to_str().unwrap();
    let run = |w: &str, out: Option<&str>| {
        let mut args = vec![
            "--seed",
            "4",
            "dist-demo",
            "--graph",
            &graph,
            "--scenario",
            &scenario,
            "--enquirer",
            "1",
            "--w",
            w,
            "--bits",
            "32",
        ];
        if let Some(o) = out {
            args.extend(["--out", o, "--force"]);
        }
        stdout(&fleetmatch(&args))
    };
    let summary: serde_json::Value =
        serde_json::from_str(run("3", Some(transcript)).lines().next().unwrap()).unwrap();
    assert_eq!(summary["answer"], true);
    let hops = summary["hops"].as_u64().unwrap();
    let lines = fs::read_to_string(transcript).unwrap();
    assert_eq!(lines.lines().count() as u64, hops);
    for line in lines.lines() {
        let v: serde_json::Value = serde_json::from_str(line).unwrap();
        for key in ["from", "to", "bytes", "elapsed_ns"] {
            assert!(v[key].is_u64(), "{line}");
        }
    }
    // Only the enquirer is interested in 4.
    let summary: serde_json::Value =
        serde_json::from_str(run("4", None).lines().next().unwrap()).unwrap();
    assert_eq!(summary["answer"], false);
}

#[test]
fn dist_demo_names_cut_vertex() {
    let dir = TempDir::new().unwrap();
    let graph = write(
        dir.path(),
        "p3.json",
        r#"{"vertices": [1, 2, 3], "edges": [[1, 2], [2, 3]]}"#,
    );
    let scenario = write(dir.path(), "s.json", SCENARIO);
    let out = fleetmatch(&[
        "dist-demo",
        "--graph",
        &graph,
        "--scenario",
        &scenario,
        "--enquirer",
        "1",
        "--w",
        "1",
    ]);
    assert!(!out.status.success());
    assert!(String::from_utf8_lossy(&out.stderr).contains("removing fleet 2"));
}

#[test]
fn attack_bezout_report() {
    let out = stdout(&fleetmatch(&[
        "--seed",
        "6",
        "attack",
        "--mode",
        "bezout",
        "--bits",
        "128",
        "--slots",
        "4",
        "--interests",
        "1,4",
        "--w1",
        "1",
        "--w2",
        "2",
    ]));
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["mode"], "bezout");
    assert_eq!(v["targets"], serde_json::json!([1, 2]));
    assert_eq!(v["decoded"], serde_json::json!([true, false]));
    assert_eq!(v["ground_truth"], serde_json::json!([true, false]));
    assert_eq!(v["key_bits"], 128);
    let same = fleetmatch(&[
        "attack", "--mode", "bezout", "--bits", "32", "--w1", "2", "--w2", "2",
    ]);
    assert!(!same.status.success());
}

#[test]
fn attack_bezout_from_scenario() {
    let dir = TempDir::new().unwrap();
    let scenario = write(dir.path(), "s.json", SCENARIO);
    let out = stdout(&fleetmatch(&[
        "--seed",
        "8",
        "attack",
        "--mode",
        "bezout",
        "--bits",
        "64",
        "--scenario",
        &scenario,
        "--fleet",
        "3",
        "--w1",
        "3",
        "--w2",
        "1",
    ]));
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["decoded"], serde_json::json!([true, false]));
    let ambiguous = fleetmatch(&[
        "attack",
        "--mode",
        "bezout",
        "--bits",
        "32",
        "--scenario",
        &scenario,
        "--w1",
        "3",
        "--w2",
        "1",
    ]);
    assert!(!ambiguous.status.success());
}

#[test]
fn attack_freevar() {
    let out = stdout(&fleetmatch(&[
        "attack",
        "--mode",
        "freevar",
        "--primes",
        "3,5",
        "--coefficients",
        "1,1",
        "--target",
        "7",
    ]));
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["count"], 15);
    assert_eq!(v["bound"], 14);
    assert_eq!(v["bound_holds"], true);

    let refused = fleetmatch(&[
        "attack",
        "--mode",
        "freevar",
        "--bits",
        "128",
        "--coefficients",
        "1,1",
        "--target",
        "7",
    ]);
    assert!(!refused.status.success());
    assert!(String::from_utf8_lossy(&refused.stderr).contains("enumeration budget"));
}
