use std::path::Path;
use std::process::{Command, Output};

use serde_json::{json, Value};

fn hesslab(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_hesslab")).args(args).env_remove("HESSLAB_CACHE").output().expect("binary runs")
}

fn json_of(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("exited normally")
}

#[test]
fn analyze_hexagon() {
    let out = hesslab(&["analyze", "--h", "2,3,3", "--gkm", "--symbolic"]);
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    let r = json_of(&out);
    assert_eq!(r["betti"], json!([1, 4, 1]));
    assert_eq!(r["lambdaH"], "2,1");
    assert_eq!(r["lambdaH_symbolic"], "2,1");
    assert_eq!(r["mult"], json!({"3": [1, 2, 1], "21": [0, 1, 0], "111": [0, 0, 0]}));
    assert_eq!(r["support"]["allowed_irreps"], json!(["3", "2,1"]));
    assert_eq!(r["gkm"]["morse_betti"], json!([1, 4, 1]));
    let peterson = r["regular"].as_array().unwrap().iter().find(|v| v["J"] == "1,2").unwrap();
    assert_eq!(peterson["betti"], json!([1, 2, 1]));
    assert_eq!(r["violations"], json!([]));
    assert!(r.get("timing_ms").is_none());
}

#[test]
fn analyze_points_and_line() {
    let r = json_of(&hesslab(&["analyze", "--h", "1,2,3"]));
    assert_eq!(r["betti"], json!([6]));
    assert_eq!(r["mult"], json!({"3": [1], "21": [2], "111": [1]}));
    let r = json_of(&hesslab(&["analyze", "--h", "2,2"]));
    assert_eq!(r["betti"], json!([1, 1]));
    assert_eq!(r["mult"]["2"], json!([1, 1]));
}

#[test]
fn usage_errors_exit_2() {
    for args in [
        vec!["analyze", "--h", "2,1,3"],
        vec!["analyze", "--h", "3,3"],
        vec!["analyze", "--h", "x"],
        vec!["analyze"],
        vec!["verify", "--n", "9"],
        vec!["verify", "--n", "8"],
        vec!["analyze", "--h", "2,3,4,5,6,7,8,8"],
        vec!["verify", "--n", "3", "--gkm-max-n", "6"],
        vec!["kahler", "--h", "2,3,3", "--J", "5"],
        vec!["kahler", "--h", "2,3,3", "--lambda", "1,1,0"],
        vec!["kahler", "--h", "2,3,3", "--lambda", "1,0"],
        vec!["kahler", "--h", "2,3,4,5,5"],
        vec!["frobnicate"],
    ] {
        assert_eq!(code(&hesslab(&args)), 2, "{args:?}");
    }
}

#[test]
fn verify_small_sweeps() {
    let out = hesslab(&["verify", "--n", "3"]);
    assert_eq!(code(&out), 0);
    let r = json_of(&out);
    assert_eq!(r["functions"], 5);
    assert_eq!(r["gkm_checked"], 5);
    assert_eq!(r["violation_count"], 0);
    let hs: Vec<&str> = r["results"].as_array().unwrap().iter().map(|x| x["h"].as_str().unwrap()).collect();
    assert_eq!(hs, ["1,2,3", "1,3,3", "2,2,3", "2,3,3", "3,3,3"]);

    let r = json_of(&hesslab(&["verify", "--n", "4", "--indecomposable"]));
    assert_eq!(r["functions"], 5);
    assert_eq!(r["violation_count"], 0);
}

#[test]
fn verify_n6() {
    let out = hesslab(&["verify", "--n", "6"]);
    assert_eq!(code(&out), 0);
    let r = json_of(&out);
    assert_eq!(r["functions"], 132);
    assert_eq!(r["violation_count"], 0);
}

#[test]
fn convention_control_exits_3_with_witness() {
    let out = hesslab(&["verify", "--n", "3", "--convention-control"]);
    assert_eq!(code(&out), 3);
    let r = json_of(&out);
    assert_eq!(r["convention"], "unconjugated");
    let witnesses = r["violations"].as_array().unwrap();
    assert!(witnesses.iter().any(|w| w["h"] == "2,3,3" && w["check"] == "support"));
    assert!(String::from_utf8_lossy(&out.stderr).contains("2,3,3 [support]"));
}

#[test]
fn kahler_examples() {
    let r = json_of(&hesslab(&["kahler", "--h", "2,3,3", "--J", ""]));
    assert_eq!(r["invariant_dims"], json!([1, 4, 1]));
    assert!(r["poincare_ok"] == true && r["hard_lefschetz_ok"] == true && r["hodge_riemann_ok"] == true);

    let out = hesslab(&["kahler", "--h", "2,3,3", "--J", "1,2", "--lambda", "1,0,-1"]);
    assert_eq!(code(&out), 0);
    let r = json_of(&out);
    assert_eq!(r["invariant_dims"], json!([1, 2, 1]));
    assert_eq!(r["lambda"], json!([1, 0, -1]));
    assert_eq!(r["witnesses"], json!([]));

    let out = hesslab(&["kahler", "--h", "2,3,4,4"]);
    assert_eq!(code(&out), 0);
    let r = json_of(&out);
    assert_eq!(r["invariant_dims"], json!([1, 11, 11, 1]));
    // rationals are strings
    assert!(r["pairing"][0]["det"].is_string());
}

#[test]
fn reports_are_byte_stable_and_cache_transparent() {
    let dir = tempfile::tempdir().unwrap();
    let cache = dir.path().to_str().unwrap();
    let cold = hesslab(&["analyze", "--h", "2,3,4,4", "--gkm"]);
    let first = hesslab(&["analyze", "--h", "2,3,4,4", "--gkm", "--cache-dir", cache]);
    let warm = hesslab(&["analyze", "--h", "2,3,4,4", "--gkm", "--cache-dir", cache]);
    assert_eq!(cold.stdout, first.stdout);
    assert_eq!(cold.stdout, warm.stdout);
    assert!(Path::new(cache).join("dotchar").is_dir());
    assert!(Path::new(cache).join("springer").is_dir());

    let env_cached = Command::new(env!("CARGO_BIN_EXE_hesslab"))
        .args(["verify", "--n", "4", "--jobs", "3"])
        .env("HESSLAB_CACHE", cache)
        .output()
        .unwrap();
    let serial = hesslab(&["verify", "--n", "4", "--jobs", "1"]);
    assert_eq!(env_cached.stdout, serial.stdout);

    let other_seed = hesslab(&["analyze", "--h", "2,3,4,4", "--seed", "7"]);
    assert_eq!(json_of(&other_seed)["seed"], 7);
    assert_eq!(json_of(&other_seed)["lambdaH"], json_of(&cold)["lambdaH"]);
}

#[test]
fn corrupt_cache_entries_are_recomputed() {
    let dir = tempfile::tempdir().unwrap();
    let cache = dir.path().to_str().unwrap();
    let good = hesslab(&["analyze", "--h", "2,3,3", "--cache-dir", cache]);
    for sub in ["dotchar", "springer"] {
        for entry in std::fs::read_dir(dir.path().join(sub)).unwrap() {
            std::fs::write(entry.unwrap().path(), "{not json").unwrap();
        }
    }
    let again = hesslab(&["analyze", "--h", "2,3,3", "--cache-dir", cache]);
    assert_eq!(good.stdout, again.stdout);
}

#[test]
fn formats_and_out_file() {
    let csv = hesslab(&["analyze", "--h", "2,3,3", "--format", "csv"]);
    assert_eq!(
        String::from_utf8(csv.stdout).unwrap(),
        "irrep,H0,H2,H4\n3,1,2,1\n\"2,1\",0,1,0\n\"1,1,1\",0,0,0\nbetti,1,4,1\n"
    );
    let table = String::from_utf8(hesslab(&["verify", "--n", "3", "--format", "table"]).stdout).unwrap();
    assert!(table.contains("functions = 5") && table.contains("violations   none"));
    let kcsv = String::from_utf8(hesslab(&["kahler", "--h", "2,3,3", "--format", "csv"]).stdout).unwrap();
    assert!(kcsv.starts_with("check,k,dim,value,ok\npairing,0,1,"));

    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("r.json");
    let out = hesslab(&["analyze", "--h", "2,3,3", "--out", path.to_str().unwrap()]);
    assert_eq!(code(&out), 0);
    assert!(out.stdout.is_empty());
    let r: Value = serde_json::from_str(&std::fs::read_to_string(path).unwrap()).unwrap();
    assert_eq!(r["h"], "2,3,3");
}

#[test]
fn force_lifts_the_size_guard() {
    let out = hesslab(&["analyze", "--h", "1,2,3,4,5,6,7,8", "--force"]);
    assert_eq!(code(&out), 0);
    assert_eq!(json_of(&out)["betti"], json!([40320]));
}

#[test]
fn timing_is_opt_in() {
    let r = json_of(&hesslab(&["analyze", "--h", "2,3,3", "--timing"]));
    assert!(r["timing_ms"]["dotchar"].is_u64());
}
