use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

fn fixture(name: &str) -> String {
    format!("{}/fixtures/{name}", env!("CARGO_MANIFEST_DIR"))
}

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_homforge")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn json_report(args: &[&str]) -> (i32, Value) {
    let mut a = args.to_vec();
    a.extend(["--format", "json"]);
    let o = run(&a);
    (o.status.code().unwrap(), serde_json::from_slice(&o.stdout).expect("json report"))
}

fn write(dir: &tempfile::TempDir, name: &str, body: &str) -> PathBuf {
    let p = dir.path().join(name);
    std::fs::write(&p, body).unwrap();
    p
}

#[test]
fn validate_koszul() {
    let o = run(&["validate", "--complex", &fixture("koszul_xy.json")]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o), "ok\n");
}

#[test]
fn ar_connecting_map_is_x_id() {
    let o = run(&["ar", "--complex", &fixture("stalkA.json"), "--ring", &fixture("kx2.json")]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).lines().any(|l| l == "connecting map: x·id"), "{}", stdout(&o));
}

#[test]
fn tate_betti_line() {
    let o = run(&["tate", "--ring", &fixture("kx2.json"), "--bound", "8"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o).lines().next(), Some("1 1 1 1 1 1 1 1 1"));
}

#[test]
fn betti_vectors_are_json_arrays() {
    let o = run(&["resolve", "--module", &fixture("residue_field.json"), "--ring", &fixture("kxy.json"), "--bound", "3"]);
    assert_eq!(stdout(&o), "betti: [1,2,3,4]\n");
    let o = run(&["koszul", "--ring", &fixture("kxy.json"), "--elems", "x,y"]);
    assert_eq!(stdout(&o), "betti: [1,2,1]\n");
}

#[test]
fn unknown_suite_is_a_user_error() {
    assert_eq!(run(&["suite", "everything"]).status.code(), Some(2));
}

#[test]
fn quick_suite_passes() {
    let (code, r) = json_report(&["suite", "quick"]);
    assert_eq!(code, 0);
    assert_eq!(r["result"]["failed"], 0);
    assert_eq!(r["result"]["items"].as_array().unwrap().len(), 5);
}

#[test]
fn malformed_input_reports_location() {
    let dir = tempfile::tempdir().unwrap();
    let p = write(&dir, "c.json", "{\"support\": [0, 0],\n \"terms\": {\"0\": {\"rank\": 1}");
    let o = run(&["validate", "--complex", p.to_str().unwrap(), "--ring", &fixture("kx2.json")]);
    assert_eq!(o.status.code(), Some(2));
    let err = String::from_utf8(o.stderr).unwrap();
    assert!(err.contains("c.json") && err.contains("line 2"), "{err}");
}

#[test]
fn unsupported_backend_is_a_user_error() {
    let dir = tempfile::tempdir().unwrap();
    let r = write(&dir, "r.json", r#"{"field": "Q", "vars": ["x"], "backend": "sheaf"}"#);
    let o = run(&["validate", "--complex", &fixture("stalkA.json"), "--ring", r.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn d_squared_violation_is_refuted() {
    let dir = tempfile::tempdir().unwrap();
    let c = write(
        &dir,
        "c.json",
        r#"{"support": [0, 2], "terms": {"0": {"rank": 1}, "1": {"rank": 1}, "2": {"rank": 1}},
            "differentials": {"0": [["x"]], "1": [["x"]]}}"#,
    );
    let (code, r) = json_report(&["validate", "--complex", c.to_str().unwrap(), "--ring", &fixture("kx3.json")]);
    assert_eq!(code, 1);
    assert_eq!(r["status"], "refuted");
    assert_eq!(r["result"]["violation"]["entry"], "x^2");
}

#[test]
fn reports_are_byte_stable_and_record_seeds() {
    let dir = tempfile::tempdir().unwrap();
    let outs: Vec<String> = ["a.json", "b.json"]
        .iter()
        .map(|n| {
            let p = dir.path().join(n);
            let o = run(&[
                "miyata",
                "--triangle",
                &fixture("cone_zero.json"),
                "--ring",
                &fixture("kx2.json"),
                "--disguise",
                "--seed",
                "17",
                "--out",
                p.to_str().unwrap(),
            ]);
            assert_eq!(o.status.code(), Some(0));
            std::fs::read_to_string(p).unwrap()
        })
        .collect();
    assert_eq!(outs[0], outs[1]);
    let r: Value = serde_json::from_str(&outs[0]).unwrap();
    assert_eq!(r["seed"], 17);
    assert_eq!(r["result"]["verdict"], "split");
    assert_eq!(r["inputs"].as_object().unwrap().len(), 2);
    assert!(r["inputs"].as_object().unwrap().values().all(|d| d.as_str().unwrap().starts_with("sha256:")));
}

#[test]
fn miyata_hypothesis_not_met() {
    let (code, r) = json_report(&["miyata", "--triangle", &fixture("cone_x.json"), "--ring", &fixture("kx2.json")]);
    assert_eq!(code, 0);
    assert_eq!(r["result"]["verdict"], "hypothesis-not-met");
}

#[test]
fn iso_refutation_exits_1() {
    let args = ["iso", "--complex", &fixture("stalkA.json"), "--other", &fixture("two_term_x.json"), "--ring", &fixture("kx2.json")];
    assert_eq!(run(&args).status.code(), Some(1));
    let same = ["iso", "--complex", &fixture("stalkA.json"), "--other", &fixture("stalkA.json"), "--ring", &fixture("kx2.json")];
    assert_eq!(run(&same).status.code(), Some(0));
}

#[test]
fn emitted_filtration_verifies_and_mutation_fails() {
    let ring = fixture("kxy_m2.json");
    let (code, r) = json_report(&["tate", "--ring", &ring, "--bound", "4", "--emit-filtration"]);
    assert_eq!(code, 0);
    let mut f = r["result"]["filtration"].clone();
    let dir = tempfile::tempdir().unwrap();
    let p = write(&dir, "f.json", &f.to_string());
    let args = ["filtration-verify", "--ring", &ring, "--bound", "4", "--filtration", p.to_str().unwrap()];
    assert_eq!(run(&args).status.code(), Some(0));

    let last = (f.as_object().unwrap().len() - 2).to_string();
    f[&last]["-1"].as_array_mut().unwrap().remove(0);
    std::fs::write(&p, f.to_string()).unwrap();
    let (code, r) = json_report(&args);
    assert_eq!(code, 1);
    assert_eq!(r["result"]["check"]["passed"], false);
}

#[test]
fn graded_cone_family() {
    let (code, r) = json_report(&[
        "cone-family",
        "--complex",
        &fixture("stalkA_graded.json"),
        "--ring",
        &fixture("kx_graded.json"),
        "--r",
        "x",
        "--max-n",
        "4",
    ]);
    assert_eq!(code, 0);
    assert_eq!(r["result"]["pairwise_non_isomorphic"], true);
    assert_eq!(r["result"]["finite_length"]["result"], "refuted-within-window");
    assert_eq!(r["result"]["members"][3]["cohomology"]["0"].as_object().unwrap().len(), 4);
}

#[test]
fn serre_and_hom() {
    let (code, r) = json_report(&["serre", "--complex", &fixture("koszul_xy.json")]);
    assert_eq!(code, 0);
    assert_eq!(r["result"]["pairing"]["hom_x_x"], r["result"]["pairing"]["hom_x_fx"]);
    let (_, h) = json_report(&["hom", "--complex", &fixture("koszul_xy.json"), "--shift", "2"]);
    assert_eq!(h["result"]["mu"], 1);
}

#[test]
fn ring_mismatch_is_a_user_error() {
    let o = run(&["validate", "--complex", &fixture("koszul_xy.json"), "--ring", &fixture("kx2.json")]);
    assert_eq!(o.status.code(), Some(2));
}
