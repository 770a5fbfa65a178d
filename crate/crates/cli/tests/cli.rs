use std::path::PathBuf;
use std::process::{Command, Output};

use onevar_tl::embedding::{gadget_formula, Flavor};
use onevar_tl::kripke::KripkeModel;
use onevar_tl::AgentSet;

fn bin() -> Command {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_onevar-tl"));
    cmd.env_remove("ONEVAR_TL_SEED");
    cmd
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn scratch(name: &str, contents: &str) -> PathBuf {
    let dir = PathBuf::from(env!("CARGO_TARGET_TMPDIR")).join("cli-tests");
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join(name);
    std::fs::write(&path, contents).unwrap();
    path
}

fn gadget_file(name: &str, extra: &[&str]) -> PathBuf {
    let mut args = vec!["gadget"];
    args.extend_from_slice(extra);
    let o = run(&args);
    assert!(o.status.success());
    scratch(name, &stdout(&o))
}

#[test]
fn translate_yields_single_variable_json() {
    let o = run(&["translate", "--logic", "ctl", "p1"]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["guard"], "p2");
    assert_eq!(v["out_var"], "p1");
    let star = v["star"].as_str().unwrap();
    assert!(star.contains("p1") && !star.contains("p2"));
    assert!(v["sizes"]["star"].as_u64().unwrap() > 0);
}

#[test]
fn translate_alternating() {
    let o = run(&["translate", "--logic", "atlstar", "--agents", "2", "<<1>> G p1"]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert!(v["star"].as_str().unwrap().contains("<<1,2>> X"));
    assert_eq!(v["sigma"].as_object().unwrap().len(), 2);
}

#[test]
fn translate_reads_files_and_rejects_bad_input() {
    let f = scratch("formula.txt", "AG (p3 -> EF p5)\n");
    let o = bin().args(["translate", "--file"]).arg(&f).output().unwrap();
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(run(&["translate", "p1 &&"]).status.code(), Some(2));
    // path formula in CTL
    assert_eq!(run(&["translate", "E (F p1 & G p2)"]).status.code(), Some(2));
    assert_eq!(run(&["translate", "--logic", "ltl", "p1"]).status.code(), Some(2));
}

#[test]
fn gadget_formula_picks_out_its_root() {
    let model = gadget_file("g1.json", &["1", "--json"]);
    let text = gadget_formula(1, Flavor::Branching, 1, AgentSet::new(1).unwrap()).to_string();
    let o = bin().arg("modelcheck").arg(&model).arg(&text).output().unwrap();
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o).lines().collect::<Vec<_>>(), vec!["r_1"]);
}

#[test]
fn modelcheck_true_lists_every_state() {
    let model = gadget_file("g2.json", &["2"]);
    let o = bin().arg("modelcheck").arg(&model).arg("true").output().unwrap();
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o).lines().count(), 6);
}

#[test]
fn modelcheck_exit_reflects_designated_state() {
    let model = gadget_file("g1b.json", &["1"]);
    let check = |f: &str, state: &str| {
        bin()
            .arg("modelcheck")
            .arg(&model)
            .args([f, "--state", state])
            .output()
            .unwrap()
            .status
            .code()
    };
    assert_eq!(check("EX p1", "r_1"), Some(0));
    assert_eq!(check("EX p1", "b_1"), Some(1));
    assert_eq!(check("EX p1", "1"), Some(1));
    assert_eq!(check("EX p1", "nowhere"), Some(2));
}

#[test]
fn modelcheck_rejects_mismatched_inputs() {
    let game = gadget_file("c1.json", &["1", "--flavor", "alternating", "--agents", "2"]);
    let kripke = gadget_file("k1.json", &["1"]);
    // non-ATL formula on a game
    let o = bin()
        .args(["modelcheck", "--logic", "atl"])
        .arg(&game)
        .arg("<<1>> F G p1")
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(2));
    // game read as a Kripke model and vice versa
    let o = bin()
        .args(["modelcheck", "--logic", "ctl"])
        .arg(&game)
        .arg("true")
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(2));
    let o = bin()
        .args(["modelcheck", "--logic", "atl"])
        .arg(&kripke)
        .arg("true")
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(2));
    let garbage = scratch("garbage.json", "{ nope");
    let o = bin()
        .arg("modelcheck")
        .arg(&garbage)
        .arg("true")
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn modelcheck_games_in_json() {
    let game = gadget_file("c2.json", &["1", "--flavor", "alternating", "--agents", "2"]);
    let o = bin()
        .args(["modelcheck", "--logic", "atl", "--json"])
        .arg(&game)
        .arg("<<1,2>> X p1")
        .output()
        .unwrap();
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["designated"], "r_1");
    assert_eq!(o.status.code(), Some(if v["holds"] == true { 0 } else { 1 }));
}

#[test]
fn gadget_outputs() {
    let dot = stdout(&run(&["gadget", "1", "--dot"]));
    assert!(dot.starts_with("digraph"));
    assert_eq!(dot.lines().filter(|l| l.contains("[label=")).count(), 4);
    let json = stdout(&run(&["gadget", "2", "--json"]));
    let (m, designated) = KripkeModel::from_json(&json).unwrap();
    assert!(m.validate().is_ok());
    assert_eq!(designated, Some(0));
    // p1 at the root and at the even chain states
    let marked: Vec<String> = m.holds(1).iter().map(|s| m.state_name(s)).collect();
    assert_eq!(marked, ["r_2", "a2_2", "a4_2"]);
    assert_eq!(run(&["gadget", "0"]).status.code(), Some(2));
}

#[test]
fn sat_verdicts_and_exit_codes() {
    let o = run(&["sat", "EX p1 & EX !p1", "--max-states", "2", "--json"]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["status"], "SAT");
    assert_eq!(v["witness"]["state"], 0);
    let o = run(&["sat", "p1 & !p1", "--max-states", "2"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).starts_with("UNKNOWN"));
    let o = run(&[
        "sat",
        "AG EF p1 & EF AG !p1",
        "--max-states",
        "3",
        "--budget",
        "5",
    ]);
    assert_eq!(o.status.code(), Some(3));
    let o = run(&[
        "sat",
        "--logic",
        "atl",
        "--agents",
        "2",
        "<<1>> X p1 & !<<2>> X p1",
        "--max-states",
        "2",
    ]);
    assert_eq!(o.status.code(), Some(0));
}

#[test]
fn sat_is_independent_of_jobs() {
    let args = ["sat", "AG EX p1 & EF !p1 & AF p2", "--max-states", "3", "--json"];
    let one = run(&[&args[..], &["--jobs", "1"]].concat());
    let two = run(&[&args[..], &["--jobs", "2"]].concat());
    let strip = |o: &Output| {
        let mut v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
        v.as_object_mut().unwrap().remove("elapsed_ms");
        v
    };
    assert_eq!(strip(&one), strip(&two));
}

#[test]
fn verify_examples() {
    let o = run(&["verify", "E3", "--max-m", "5"]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    assert!(stdout(&o).starts_with("E3 PASS"));
    let o = run(&["verify", "E1", "--seed", "42", "--cases", "100"]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    assert_eq!(run(&["verify", "E7"]).status.code(), Some(2));
}

#[test]
fn verify_all_passes() {
    let o = run(&["verify", "all", "--cases", "30", "--json"]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v.as_array().unwrap().len(), 6);
}

#[test]
fn seed_comes_from_the_environment() {
    let args = ["verify", "E2", "--cases", "20", "--json"];
    let strip = |o: Output| {
        let mut v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
        v[0].as_object_mut().unwrap().remove("elapsed_ms");
        v
    };
    let by_flag = strip(bin().args(args).args(["--seed", "7"]).output().unwrap());
    let by_env = strip(bin().args(args).env("ONEVAR_TL_SEED", "7").output().unwrap());
    let again = strip(bin().args(args).env("ONEVAR_TL_SEED", "7").output().unwrap());
    assert_eq!(by_flag, by_env);
    assert_eq!(by_env, again);
}
