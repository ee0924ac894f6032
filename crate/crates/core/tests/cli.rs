use std::process::{Command, Output};

use serde_json::Value;

fn ramify(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_ramify")).args(args).output().expect("binary runs")
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).unwrap_or_else(|e| panic!("{e}: {}", String::from_utf8_lossy(&out.stdout)))
}

#[test]
fn report_worked_example() {
    let out = ramify(&["report", "--field", "3", "--type", "II", "--json", "t1^-2*t2"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["r_prime"]["total"], 2);
    assert_eq!(v["simulation"]["r_x"], 2);
    assert_eq!(v["kato_bound"], 2);
    assert_eq!(v["pg"], serde_json::json!([[0, 0], [2, 1]]));
    for key in ["closed_form", "e_identity", "oracle", "bound_simulation", "bound_recursion", "perturbation"] {
        assert_eq!(v["verdicts"][key], true, "{key}");
    }
}

#[test]
fn report_type_one_singleton() {
    let out = ramify(&["report", "--field", "5", "--type", "I", "--json", "t1^-1"]);
    let v = json(&out);
    assert_eq!(v["r_prime"]["total"], 0);
    assert_eq!(v["simulation"]["r_x"], 0);
    assert_eq!(v["simulation"]["tree"]["clean"], true);
    // the bound is -1 here, so the bound verdict fails and the exit code says so
    assert_eq!(v["kato_bound"], -1);
    assert_eq!(v["verdicts"]["bound_simulation"], false);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn report_of_zero() {
    let out = ramify(&["report", "--field", "2", "--json", "0"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["r_prime"]["total"], 0);
    assert_eq!(v["r_prime_closed"], 0);
    assert_eq!(v["simulation"]["r_x"], 0);
    assert_eq!(v["kato_bound"], 0);
    assert_eq!(v["swan"]["t1"]["value"], 0);
    assert_eq!(v["swan"]["e"]["value"], 0);
}

#[test]
fn human_table_is_default() {
    let out = ramify(&["report", "--field", "3", "t1^-2*t2"]);
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("r' recursion    2"));
    assert!(text.contains("beta-perturbed rerun       pass"));
}

#[test]
fn operational_errors_exit_one() {
    let out = ramify(&["report", "--field", "3", "t1^-2 * x"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("parse: at position 8"));
    assert_eq!(ramify(&["report", "--field", "6", "t1"]).status.code(), Some(1));
    assert_eq!(ramify(&["report", "--type", "I", "t2^-1"]).status.code(), Some(1));
}

#[test]
fn simulate_modes_and_dot() {
    let dir = std::env::temp_dir().join(format!("ramify-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let dot = dir.join("tree.dot");
    let out = ramify(&["simulate", "--field", "2", "--mode", "sweep", "--dot", dot.to_str().unwrap(), "t1^-2*t2"]);
    assert_eq!(out.status.code(), Some(0));
    assert!(String::from_utf8_lossy(&out.stdout).starts_with("r_x = 2"));
    let g = std::fs::read_to_string(&dot).unwrap();
    assert!(g.starts_with("digraph blowup {"));
    assert!(g.contains("r_x = 2"));
    let v = json(&ramify(&["simulate", "--field", "2", "--json", "t1^-2*t2"]));
    assert_eq!(v["tree"]["children"].as_array().unwrap().len(), 2);
    std::fs::remove_dir_all(&dir).ok();
}

#[test]
fn corpus_is_deterministic() {
    let args = ["corpus", "--kind", "algebra", "--seed", "1", "--count", "60", "--json"];
    let (a, b) = (ramify(&args), ramify(&args));
    assert_eq!(a.stdout, b.stdout);
    let s = ["corpus", "--kind", "staircase", "--seed", "1", "--count", "1000", "--json"];
    let out = ramify(&s);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["checks"]["closed_form"]["pass"], 1000);
    assert_eq!(ramify(&s).stdout, out.stdout);
}

#[test]
fn mutant_flag_finds_known_counterexample() {
    let out = ramify(&["corpus", "--kind", "staircase", "--seed", "1", "--count", "50", "--json", "--mutant"]);
    assert_eq!(out.status.code(), Some(2));
    let v = json(&out);
    let cx = v["counterexamples"].as_array().unwrap();
    let closed: Vec<&Value> = cx.iter().filter(|c| c["check"] == "closed_form").collect();
    assert!(!closed.is_empty());
    assert!(closed.iter().all(|c| c["minimized"].as_str().unwrap().starts_with("((0,0),(1,2))")));
}

#[test]
fn euler_config_and_presets() {
    let dir = std::env::temp_dir().join(format!("ramify-euler-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let cfg = dir.join("surface.json");
    std::fs::write(&cfg, r#"{"components":[{"name":"L","sw":2}],"intersections":[[1]],"klog":[-3],"r_sum":0}"#).unwrap();
    let v = json(&ramify(&["euler", "--json", cfg.to_str().unwrap()]));
    assert_eq!(v["report"]["delta"], -2);
    let v = json(&ramify(&["euler", "--preset", "p2-two-lines", "--sw", "0,0", "--json"]));
    assert_eq!(v["report"]["delta"], 0);
    let text = String::from_utf8(ramify(&["euler", "--preset", "p2-line", "--sw", "1"]).stdout).unwrap();
    assert!(text.contains("delta         -1"));
    std::fs::write(&cfg, r#"{"components":[{"name":"L","sw":2}],"intersections":[[1,2]],"klog":[-3],"r_sum":0}"#).unwrap();
    assert_eq!(ramify(&["euler", cfg.to_str().unwrap()]).status.code(), Some(1));
    assert_eq!(ramify(&["euler"]).status.code(), Some(1));
    std::fs::remove_dir_all(&dir).ok();
}
