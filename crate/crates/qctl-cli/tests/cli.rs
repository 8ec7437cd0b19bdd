use std::path::PathBuf;
use std::process::{Command, Output};

use qctl::kripke::parse_structure;
use qctl::logic::parse_formula;
use qctl::mc_tree::check_tree;
use serde_json::Value;

const S0: &str = "state q0 { r }\nstate q1\nedge q0 q0\nedge q0 q1\nedge q1 q0\nedge q1 q1\ninit q0\n";

fn qctl(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_qctl")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn scratch(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("qctl-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    dir.join(name)
}

fn s0_file() -> String {
    let path = scratch("s0.ks");
    std::fs::write(&path, S0).unwrap();
    path.display().to_string()
}

#[test]
fn both_semantics_on_selfloop() {
    let s = s0_file();
    let o = qctl(&["mc", "--semantics", "both", "--struct", &s, "--formula", "selfloop"]);
    let text = stdout(&o);
    let rows: Vec<&str> = text.lines().collect();
    assert_eq!(rows.len(), 3, "{text}");
    assert!(rows[1].starts_with("structure") && rows[1].ends_with("true"));
    assert!(rows[2].starts_with("tree") && rows[2].ends_with("false"));
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn single_semantics_exit_codes() {
    let s = s0_file();
    let yes = qctl(&["mc", "--struct", &s, "--formula", "selfloop"]);
    assert_eq!((stdout(&yes).trim(), yes.status.code()), ("true", Some(0)));
    let no = qctl(&["mc", "--semantics", "tree", "--struct", &s, "--state", "q1", "--formula", "r"]);
    assert_eq!((stdout(&no).trim(), no.status.code()), ("false", Some(1)));
}

#[test]
fn sat_writes_a_verified_witness() {
    let path = scratch("acyclic.ks");
    let o = qctl(&["sat", "--semantics", "tree", "--formula", "acyclic", "--witness", path.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    let w = parse_structure(&std::fs::read_to_string(&path).unwrap()).unwrap();
    let f = qctl::corpus::acyclic();
    assert!(check_tree(&w, w.init().unwrap(), &f).unwrap());
}

#[test]
fn sat_verdicts_and_undecidable_request() {
    assert_eq!(qctl(&["sat", "--formula", "p & A G !p"]).status.code(), Some(1));
    assert_eq!(qctl(&["sat", "--semantics", "structure", "--formula", "p"]).status.code(), Some(4));
}

#[test]
fn usage_errors() {
    assert_eq!(qctl(&["parse", "--formula", "EX p"]).status.code(), Some(2));
    assert_eq!(qctl(&["mc", "--formula", "p"]).status.code(), Some(2));
    assert_eq!(qctl(&["corpus", "nope"]).status.code(), Some(2));
    let s = s0_file();
    assert_eq!(qctl(&["mc", "--struct", &s, "--state", "zz", "--formula", "p"]).status.code(), Some(2));
}

#[test]
fn budget_exit_code() {
    let path = scratch("line.ks");
    let mut text = String::new();
    for i in 0..9 {
        text.push_str(&format!("state s{i}\nedge s{i} s{}\n", (i + 1) % 9));
    }
    std::fs::write(&path, text).unwrap();
    let f = "exists a, b, c. (E X a | E X b | E X c)";
    let mut args = vec!["mc", "--struct", path.to_str().unwrap(), "--formula", f];
    // 27 labelling bits in one block, beyond the default cap of 2^24
    assert_eq!(qctl(&args).status.code(), Some(3));
    args.push("--json");
    let v: Value = serde_json::from_str(&stdout(&qctl(&args))).unwrap();
    assert_eq!(v["exitCode"], 3);
}

#[test]
fn json_fields() {
    let s = s0_file();
    let o = qctl(&["--json", "mc", "--semantics", "tree", "--struct", &s, "--formula", "E X r"]);
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["query"], "E X r");
    assert_eq!(v["semantics"], "tree");
    assert_eq!(v["result"], true);
    let stats = &v["stats"];
    assert_eq!(stats["states"], 2);
    assert!(stats["automatonStates"].as_u64().unwrap() > 0);
    assert!(stats["gamePositions"].as_u64().unwrap() > 0);
    assert!(stats["millis"].is_u64());
}

#[test]
fn outputs_are_deterministic() {
    let s = s0_file();
    let runs = [
        vec!["mc", "--semantics", "both", "--struct", &s, "--formula", "uniq(r)"],
        vec!["sat", "--formula", "uniq(p)"],
        vec!["prenex", "--formula", "E X (forall p. (E F p -> p))"],
        vec!["corpus", "grid", "2", "3"],
    ];
    for args in runs {
        assert_eq!(stdout(&qctl(&args)), stdout(&qctl(&args)), "{args:?}");
        let mut json = args.clone();
        json.insert(0, "--json");
        let strip = |o: Output| {
            let mut v: Value = serde_json::from_str(&stdout(&o)).unwrap();
            v["stats"]["millis"] = Value::Null;
            v
        };
        assert_eq!(strip(qctl(&json)), strip(qctl(&json)), "{json:?}");
    }
}

#[test]
fn emits_dot_artifacts() {
    let s = s0_file();
    let (a, g) = (scratch("a.dot"), scratch("g.dot"));
    let o = qctl(&[
        "mc",
        "--semantics",
        "tree",
        "--struct",
        &s,
        "--formula",
        "A G E F r",
        "--emit-automaton",
        a.to_str().unwrap(),
        "--emit-game",
        g.to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(0));
    for p in [a, g] {
        assert!(std::fs::read_to_string(p).unwrap().starts_with("digraph"));
    }
}

#[test]
fn witness_labels_guide_the_grid_check() {
    let o = qctl(&["corpus", "grid", "2", "2"]);
    let text = stdout(&o);
    let (listing, labels) = text.split_once("# witness labels\n").unwrap();
    let structure = listing.split_once("\n\n").unwrap().1;
    let (sp, lp) = (scratch("grid.ks"), scratch("grid.labels"));
    std::fs::write(&sp, structure).unwrap();
    std::fs::write(&lp, labels).unwrap();
    let o = qctl(&[
        "mc",
        "--struct",
        sp.to_str().unwrap(),
        "--formula",
        "grid2d",
        "--witness-labels",
        lp.to_str().unwrap(),
    ]);
    assert_eq!((stdout(&o).trim(), o.status.code()), ("true", Some(0)));
}

#[test]
fn transforms_print_formulas() {
    let o = qctl(&["prenex", "--formula", "E X (forall p. (E F p -> p))"]);
    let g = parse_formula(stdout(&o).trim()).unwrap();
    assert!(qctl::logic::is_prenex(&g));
    let o = qctl(&["translate-mso", "--mode", "structure", "--formula", "exists y. (edg(x, y) & lab(r, y))"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(parse_formula(stdout(&o).trim()).is_ok());
    let o = qctl(&["classify", "--formula", "yardstick(1, 3)"]);
    assert!(stdout(&o).contains("prefix=EQ^1"));
}
