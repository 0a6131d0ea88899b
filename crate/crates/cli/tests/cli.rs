use std::path::PathBuf;
use std::process::{Command, Output};

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_cluster-forge")).args(args).output().expect("spawn cluster-forge")
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exit code")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).expect("utf-8 stdout")
}

fn json(o: &Output) -> serde_json::Value {
    serde_json::from_slice(&o.stdout).expect("json stdout")
}

fn scratch(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("cluster-forge-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    dir.join(name)
}

fn golden(name: &str) -> String {
    let p = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../core/fixtures/golden").join(format!("{name}.txt"));
    std::fs::read_to_string(p).unwrap()
}

#[test]
fn tables_match_goldens() {
    for name in ["a2", "a2-principal", "gr25", "dp5"] {
        let o = run(&["table", name]);
        assert_eq!(code(&o), 0, "{name}");
        assert_eq!(stdout(&o), golden(name), "{name}");
    }
}

#[test]
fn empty_path_echoes_the_seed() {
    let o = run(&["--json", "mutate", "--seed", "a2", "--path", ""]);
    assert_eq!(code(&o), 0);
    let v = json(&o);
    assert_eq!(v["path"], serde_json::json!([]));
    assert_eq!(v["seed"]["B"], serde_json::json!([[0, 1], [-1, 0]]));
    assert_eq!(v["variables"], serde_json::json!(["y1", "y2"]));
}

#[test]
fn mutation_along_pentagon_returns_swapped_seed() {
    let o = run(&["--json", "mutate", "--seed", "a2", "--path", "1,2,1,2,1"]);
    assert_eq!(code(&o), 0);
    assert_eq!(json(&o)["variables"], serde_json::json!(["y2", "y1"]));
}

#[test]
fn duality_on_a3_passes_for_all_cones() {
    let o = run(&["--json", "verify", "duality", "--seed", "a3.json"]);
    assert_eq!(code(&o), 0);
    let v = json(&o);
    assert_eq!(v["total"], 14);
    assert_eq!(v["failed"], 0);
}

#[test]
fn input_errors_exit_2() {
    let bad = scratch("bad.json");
    std::fs::write(&bad, "{ not json").unwrap();
    assert_eq!(code(&run(&["mutate", "--seed", bad.to_str().unwrap()])), 2);
    assert_eq!(code(&run(&["mutate", "--seed", "no-such-seed"])), 2);
    assert_eq!(code(&run(&["mutate", "--seed", "a2", "--path", "1,x"])), 2);
    assert_eq!(code(&run(&["table", "nope"])), 2);
    assert_eq!(code(&run(&["frobnicate"])), 2);
}

#[test]
fn frozen_direction_exits_3() {
    assert_eq!(code(&run(&["mutate", "--seed", "gr25", "--path", "3"])), 3);
}

#[test]
fn truncated_atlas_exits_4() {
    assert_eq!(code(&run(&["verify", "duality", "--seed", "markov", "--depth", "4"])), 4);
}

#[test]
fn fan_round_trips_through_star_and_verify() {
    let fan = scratch("a2-fan.json");
    let o = run(&["fan", "--seed", "a2", "--out", fan.to_str().unwrap()]);
    assert_eq!(code(&o), 0);
    let f = fan.to_str().unwrap();
    let s = run(&["--json", "star", "--fan", f, "--tau", "ray:0"]);
    assert_eq!(code(&s), 0, "{}", String::from_utf8_lossy(&s.stderr));
    let v = run(&["--json", "verify", "glue", "--fan", f]);
    assert_eq!(code(&v), 0);
    assert_eq!(json(&v)["failed"], 0);
}

#[test]
fn rng_seed_makes_batches_reproducible() {
    let a = run(&["--json", "verify", "separation", "--seed", "b2", "--paths", "random:5", "--rng-seed", "7"]);
    let b = run(&["--json", "verify", "separation", "--seed", "b2", "--paths", "random:5", "--rng-seed", "7"]);
    let c = run(&["--json", "verify", "separation", "--seed", "b2", "--paths", "random:5", "--rng-seed", "8"]);
    assert_eq!(code(&a), 0);
    assert_eq!(a.stdout, b.stdout);
    assert_ne!(a.stdout, c.stdout);
}

#[test]
fn degenerate_at_origin_prints_monomial_maps() {
    let o = run(&["degenerate", "--seed", "a2", "--at", "0,0"]);
    assert_eq!(code(&o), 0);
    assert!(!stdout(&o).is_empty());
}
