use serde_json::{json, Value};
use std::path::{Path, PathBuf};

struct Scratch(PathBuf);

impl Scratch {
    fn new(tag: &str) -> Scratch {
        let d = std::env::temp_dir().join(format!("gapforge-cli-{tag}-{}", std::process::id()));
        std::fs::create_dir_all(&d).unwrap();
        Scratch(d)
    }

    fn file(&self, name: &str, v: &Value) -> String {
        let p = self.0.join(name);
        std::fs::write(&p, v.to_string()).unwrap();
        p.to_str().unwrap().to_string()
    }

    fn path(&self, name: &str) -> String {
        self.0.join(name).to_str().unwrap().to_string()
    }

    /// Runs with `--out` and returns the exit code and the report, if any.
    fn run(&self, args: &[&str]) -> (i32, Option<Value>) {
        let out = self.path("out.json");
        let _ = std::fs::remove_file(&out);
        let mut argv = vec!["gapforge", "--out", &out];
        argv.extend_from_slice(args);
        let code = gapforge_cli::run(argv);
        let report = std::fs::read_to_string(&out).ok().map(|s| serde_json::from_str(&s).unwrap());
        (code, report)
    }
}

impl Drop for Scratch {
    fn drop(&mut self) {
        let _ = std::fs::remove_dir_all(&self.0);
    }
}

fn five_adic_set() -> Value {
    json!({"elements": [
        [["1", "0"], ["0", "1"]],
        [["5", "0"], ["0", "1/5"]],
        [["1/5", "0"], ["0", "5"]],
        [["1", "1"], ["1", "2"]],
        [["2", "-1"], ["-1", "1"]]
    ]})
}

fn approx(v: &Value) -> f64 {
    v["approx"].as_f64().unwrap()
}

#[test]
fn height_of_a_rational() {
    let s = Scratch::new("height");
    let (code, r) = s.run(&["height", "--rational", "-9/4"]);
    assert_eq!(code, 0);
    let r = r.unwrap();
    assert_eq!(r["schema"], "gapforge/1");
    assert!((approx(&r["height"]) - 9f64.ln()).abs() < 1e-9);
}

#[test]
fn usage_errors_exit_one() {
    let s = Scratch::new("usage");
    assert_eq!(s.run(&["frobnicate"]).0, 1);
    assert_eq!(s.run(&["height", "--rational", "1/x"]).0, 1);
    assert_eq!(s.run(&["height", "--rational", "1/0"]).0, 1);
    assert_eq!(s.run(&["jsr", "--set", "/nonexistent.json", "--place", "inf"]).0, 1);
    let bad = s.file("bad.json", &json!({"elements": [[["1", "0"], ["0", "1"]]], "extra": 1}));
    assert_eq!(s.run(&["jsr", "--set", &bad, "--place", "p:4"]).0, 1);
    assert_eq!(s.run(&["--tol", "0", "height", "--rational", "2"]).0, 1);
}

#[test]
fn help_exits_zero() {
    assert_eq!(gapforge_cli::run(["gapforge", "--help"]), 0);
    assert_eq!(gapforge_cli::run(["gapforge", "--version"]), 0);
}

#[test]
fn certify_verify_and_tamper() {
    let s = Scratch::new("cert");
    let set = s.file("set.json", &five_adic_set());
    let cert = s.path("cert.json");
    let code = gapforge_cli::run(["gapforge", "--out", &cert, "certify", "--set", &set]);
    assert_eq!(code, 0);
    let doc: Value = serde_json::from_str(&std::fs::read_to_string(&cert).unwrap()).unwrap();
    assert_eq!(doc["kind"], "pingpong_certificate");
    assert_eq!(doc["place"], "p:5");
    assert_eq!(doc["n"], 1);
    assert_eq!(doc["annotations"]["min_n"], 1);

    let (code, r) = s.run(&["verify", &cert, "--sample", "200"]);
    assert_eq!(code, 0);
    assert_eq!(r.unwrap()["accepted"], true);

    let mut bad = doc.clone();
    bad["n"] = json!(2);
    let bad_path = s.file("bad.json", &bad);
    let (code, r) = s.run(&["verify", &bad_path]);
    assert_eq!(code, 2);
    let r = r.unwrap();
    assert_eq!(r["accepted"], false);
    let failed: Vec<&str> = r["checks"]
        .as_array()
        .unwrap()
        .iter()
        .filter(|c| c["passed"] == false)
        .map(|c| c["check"].as_str().unwrap())
        .collect();
    assert_eq!(failed, vec!["n is least"]);

    let mut bad = doc.clone();
    bad["conjugators"][1]["rows"][0][0] = json!("7");
    let (code, _) = s.run(&["verify", &s.file("bad2.json", &bad)]);
    assert_eq!(code, 2);

    let mut bad = doc;
    bad["delta"]["lo"] = json!("1/x");
    let (code, _) = s.run(&["verify", &s.file("bad3.json", &bad)]);
    assert_eq!(code, 1);
}

#[test]
fn direct_certificate_needs_a_place() {
    let s = Scratch::new("direct");
    let gamma = s.file("g.json", &json!([["2", "0"], ["0", "1/2"]]));
    let conj = s.file("c.json", &json!([[["1", "0"], ["0", "1"]], [["1", "2"], ["2", "5"]]]));
    assert_eq!(s.run(&["certify", "--gamma", &gamma, "--conjugators", &conj, "--omega", "1"]).0, 1);
    let (code, r) = s.run(&["certify", "--gamma", &gamma, "--conjugators", &conj, "--omega", "1", "--place", "p:2"]);
    assert_eq!(code, 0);
    let r = r.unwrap();
    assert_eq!(r["n"], 3);
    assert_eq!(r["delta"]["exact"]["radicand"], "1/2");
}

#[test]
fn search_failure_is_a_domain_error() {
    let s = Scratch::new("rot");
    let set = s.file(
        "rot.json",
        &json!([[["1", "0"], ["0", "1"]], [["0", "-1"], ["1", "0"]], [["0", "1"], ["-1", "0"]]]),
    );
    let (code, r) = s.run(&["certify", "--set", &set]);
    assert_eq!(code, 2);
    assert!(r.unwrap()["error"]["kind"].is_string());
}

#[test]
fn jsr_and_distances() {
    let s = Scratch::new("jsr");
    let set = s.file("set.json", &five_adic_set());
    let (code, r) = s.run(&["jsr", "--set", &set, "--place", "p:5", "--kmax", "2", "--n", "2"]);
    assert_eq!(code, 0);
    let r = r.unwrap();
    assert_eq!(r["lower"]["value"]["exact"]["radicand"], "5/1");
    assert_eq!(r["upper"]["value"]["exact"]["radicand"], "5/1");

    let u = s.file("u.json", &json!({"ambient": 2, "basis": [["1", "0"]]}));
    let w = s.file("w.json", &json!({"ambient": 2, "basis": [["1", "5"]]}));
    let (code, r) = s.run(&["distances", "--u", &u, "--w", &w, "--place", "p:5"]);
    assert_eq!(code, 0);
    assert!(r.unwrap().to_string().contains("1/5"));
}

fn walk_config(s: &Scratch, extra: Value) -> String {
    let mut cfg = json!({
        "schema": "gapforge/1",
        "experiment": "anticoncentration",
        "steps": [{"support": [
            [["1", "2"], ["0", "1"]], [["1", "-2"], ["0", "1"]],
            [["1", "0"], ["2", "1"]], [["1", "0"], ["-2", "1"]]
        ]}],
        "n_values": [2, 4, 6],
        "variety": [
            {"nvars": 4, "terms": [{"exp": [1, 0, 0, 0], "coef": "1"}, {"exp": [0, 0, 0, 0], "coef": "-1"}]},
            {"nvars": 4, "terms": [{"exp": [0, 1, 0, 0], "coef": "1"}]},
            {"nvars": 4, "terms": [{"exp": [0, 0, 1, 0], "coef": "1"}]},
            {"nvars": 4, "terms": [{"exp": [0, 0, 0, 1], "coef": "1"}, {"exp": [0, 0, 0, 0], "coef": "-1"}]}
        ],
        "trials": 2000,
        "seed": 3
    });
    for (k, v) in extra.as_object().unwrap() {
        cfg[k] = v.clone();
    }
    s.file("walk.json", &cfg)
}

#[test]
fn walk_is_reproducible() {
    let s = Scratch::new("walk");
    let cfg = walk_config(&s, json!({}));
    let csv = s.path("w.csv");
    let svg = s.path("w.svg");
    let (code, a) = s.run(&["walk", "--config", &cfg, "--csv", &csv, "--svg", &svg]);
    assert_eq!(code, 0);
    let (_, b) = s.run(&["walk", "--config", &cfg]);
    assert_eq!(a, b);
    let a = a.unwrap();
    let est = a["report"]["estimates"].as_array().unwrap();
    assert_eq!(est.len(), 3);
    // two steps return with probability 1/4
    let f = est[0]["freq"].as_f64().unwrap();
    assert!((f - 0.25).abs() < 0.04, "{f}");
    assert_eq!(std::fs::read_to_string(&csv).unwrap().lines().count(), 4);
    assert!(std::fs::read_to_string(&svg).unwrap().starts_with("<svg"));
    let (_, c) = s.run(&["walk", "--config", &cfg, "--seed", "4"]);
    assert_ne!(c.unwrap()["report"]["estimates"], a["report"]["estimates"]);
}

#[test]
fn walk_rejects_unknown_keys_and_echoes_constants() {
    let s = Scratch::new("walkcfg");
    let cfg = walk_config(&s, json!({"colour": "blue"}));
    assert_eq!(s.run(&["walk", "--config", &cfg]).0, 1);
    let cfg = walk_config(&s, json!({"constants": {"gap_d": "1/100"}}));
    let (code, r) = s.run(&["walk", "--config", &cfg, "--trials", "100"]);
    assert_eq!(code, 0);
    let r = r.unwrap();
    assert_eq!(r["constants"]["used"], false);
    assert_eq!(r["report"]["trials"], 100);
}

#[test]
fn selftest_passes() {
    let s = Scratch::new("self");
    let (code, r) = s.run(&["selftest"]);
    assert_eq!(code, 0);
    assert_eq!(r.unwrap()["passed"], true);
}

#[test]
fn report_goes_to_the_requested_file() {
    let s = Scratch::new("out");
    let (code, r) = s.run(&["height", "--minpoly", "-1,-1,1"]);
    assert_eq!(code, 0);
    let h = approx(&r.unwrap()["height"]);
    // golden ratio: h = log(φ)/2
    assert!((h - ((1.0 + 5f64.sqrt()) / 2.0).ln() / 2.0).abs() < 1e-9);
    assert!(Path::new(&s.path("out.json")).exists());
}
