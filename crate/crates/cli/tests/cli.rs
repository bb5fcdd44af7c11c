use std::path::PathBuf;
use std::process::{Command, Output};

fn data(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../data").join(format!("{name}.json"))
}

fn qbb(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_qbb")).args(args).output().expect("binary runs")
}

fn qbb_on(datum: &str, args: &[&str]) -> Output {
    let path = data(datum);
    let mut all = vec!["--datum", path.to_str().unwrap()];
    all.extend_from_slice(args);
    qbb(&all)
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

fn machine(o: &Output) -> serde_json::Value {
    serde_json::from_slice(&o.stdout).expect("machine output is JSON")
}

fn temp_file(name: &str, body: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("qbb-cli-tests-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let p = dir.join(name);
    std::fs::write(&p, body).unwrap();
    p
}

#[test]
fn validate_shipped_data() {
    for name in ["sl2", "sl3", "iso1", "imag1", "rank2"] {
        let o = qbb_on(name, &["validate", "--cutoff", "8"]);
        assert_eq!(o.status.code(), Some(0), "{name}: {}", stderr(&o));
    }
}

#[test]
fn validate_reports_violated_condition() {
    let odd = temp_file("odd.json", r#"{"a": [[1]], "s": [1]}"#);
    let o = qbb(&["validate", "--datum", odd.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("condition (i)"));

    let nonsym = temp_file("nonsym.json", r#"{"a": [[2, -1], [-2, 2]], "s": [1, 1]}"#);
    let o = qbb(&["validate", "--datum", nonsym.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("symmetrizer"));
}

#[test]
fn imaginary_nodes_need_explicit_tau() {
    let bare = temp_file("bare.json", r#"{"a": [[-2]], "s": [1]}"#);
    let o = qbb(&["validate", "--datum", bare.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("no tau value"));

    let table = temp_file("tau.json", r#"{"1,1": "1/(1-q^2)", "1,2": "1/(1-q^4)"}"#);
    let o = qbb(&["validate", "--datum", bare.to_str().unwrap(), "--cutoff", "2", "--tau", table.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
}

#[test]
fn tau_override_must_satisfy_series_condition() {
    let table = temp_file("neg.json", r#"{"1,1": "1 - q"}"#);
    let o = qbb_on("sl2", &["validate", "--tau", table.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn normal_form_real_commutator() {
    let o = qbb_on("sl2", &["normal-form", "e[1,1] f[1,1]", "--format", "machine"]);
    assert_eq!(o.status.code(), Some(0));
    let v = machine(&o);
    assert_eq!(v["normal_form"], "(1/(q^2 - 1)) K[1]^-1 + (-1/(q^2 - 1)) K[1] + f[1,1] e[1,1]");
    assert_eq!(v["terms"].as_array().unwrap().len(), 3);
}

#[test]
fn normal_form_cross_node_commutes() {
    let o = qbb_on("rank2", &["normal-form", "f[1,1] e[2,1]"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("= f[1,1] e[2,1]\n"));
    let swapped = qbb_on("rank2", &["normal-form", "e[2,1] f[1,1]"]);
    assert!(stdout(&swapped).contains("= f[1,1] e[2,1]\n"));
}

#[test]
fn normal_form_torus_shift() {
    // <h_1, alpha_2> = a_12 = -1, so q^{h_1} f_{2,2} = q^2 f_{2,2} q^{h_1}.
    let o = qbb_on("rank2", &["normal-form", "q[1,0] f[2,2]"]);
    assert!(stdout(&o).contains("= (q^2) f[2,2] K[1]\n"), "{}", stdout(&o));
}

#[test]
fn normal_form_rejects_bad_input() {
    assert_eq!(qbb_on("sl2", &["normal-form", "e[1,1"]).status.code(), Some(1));
    assert_eq!(qbb_on("sl2", &["normal-form", "e[7,1]"]).status.code(), Some(1));
    assert_eq!(qbb_on("sl2", &["normal-form", "f[1,1]^5"]).status.code(), Some(1));
}

#[test]
fn root_mult_imaginary_rank_one() {
    let o = qbb_on("imag1", &["root-mult", "--cutoff", "5", "--format", "machine"]);
    assert_eq!(o.status.code(), Some(0));
    let v = machine(&o);
    let mults: Vec<i64> = v["roots"].as_array().unwrap().iter().map(|r| r["multiplicity"].as_i64().unwrap()).collect();
    assert_eq!(mults, vec![1, 1, 2, 3, 6]);
}

#[test]
fn weight_mult_isotropic_partition_count() {
    let o = qbb_on("iso1", &["weight-mult", "--lambda", "1", "--beta", "2", "--format", "machine"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let v = machine(&o);
    assert_eq!(v["gram_rank"], 2);
    assert_eq!(v["character_formula"], 2);
}

#[test]
fn character_sl2() {
    let o = qbb_on("sl2", &["character", "--lambda", "2", "--format", "machine"]);
    let v = machine(&o);
    let mults: Vec<i64> = v["multiplicities"].as_array().unwrap().iter().map(|r| r["multiplicity"].as_i64().unwrap()).collect();
    assert_eq!(mults, vec![1, 1, 1]);
    assert_eq!(qbb_on("sl2", &["character", "--lambda", "-1"]).status.code(), Some(1));
    assert_eq!(qbb_on("sl2", &["character", "--lambda", "1,1"]).status.code(), Some(1));
}

#[test]
fn check_relations_all_vanish() {
    for name in ["sl2", "iso1", "imag1", "rank2"] {
        let o = qbb_on(name, &["check-relations", "--cutoff", "3", "--delta", "--format", "machine"]);
        assert_eq!(o.status.code(), Some(0), "{name}");
        assert_eq!(machine(&o)["all_vanish"], true);
    }
}

#[test]
fn decompose_clebsch_gordan() {
    let o = qbb_on("sl2", &["decompose", "--lambda", "2", "--mu", "1", "--cutoff", "3", "--format", "machine"]);
    assert_eq!(o.status.code(), Some(0));
    let v = machine(&o);
    let hw: Vec<i64> = v["components"].as_array().unwrap().iter().map(|c| c["highest_weight"][0].as_i64().unwrap()).collect();
    assert_eq!(hw, vec![3, 1]);
    assert_eq!(v["characters_match"], true);
}

#[test]
fn cutoff_limit_enforced() {
    assert_eq!(qbb_on("sl2", &["root-mult", "--cutoff", "9"]).status.code(), Some(1));
    assert_eq!(qbb_on("sl2", &["root-mult", "--cutoff", "9", "--max-cutoff", "9"]).status.code(), Some(0));
    assert_eq!(qbb(&["root-mult"]).status.code(), Some(1));
}

#[test]
fn machine_output_is_deterministic() {
    let args = ["decompose", "--lambda", "1,0", "--mu", "0,1", "--cutoff", "3", "--format", "machine"];
    let a = qbb_on("rank2", &args);
    let b = qbb_on("rank2", &args);
    assert_eq!(a.status.code(), Some(0), "{}", stderr(&a));
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn form_ranks_match_basis_dimensions() {
    let o = qbb_on("rank2", &["form-ranks", "--format", "machine"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let v = machine(&o);
    assert_eq!(v["all_match"], true);
    let degrees = v["degrees"].as_array().unwrap();
    let d13 = degrees.iter().find(|d| d["beta"] == serde_json::json!([1, 3])).unwrap();
    assert_eq!(d13["words"], 12);
    assert_eq!(d13["gram_rank"], 10);
    assert_eq!(d13["dim"], 10);
}
