//! `qctl`: parse, classify, transform, model check and decide QCTL formulas.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use qctl::corpus::{build_grid, circuit_to_mc, formula_or_named, named_formula, Circuit, NAMES};
use qctl::kripke::{parse_structure, Kripke, StateId};
use qctl::logic::{classify, dag_size, parse_formula_with_warnings, size, Formula, Prop};
use qctl::mc_structure::{check, labelling_from_names, CheckOptions, McError};
use qctl::mc_tree::{check_tree_with, TreeError, TreeOptions};
use qctl::sat_tree::{sat_with, SatError, SatOptions, SatResult};
use qctl::transforms::{mso_to_qctl, parse_mso, prenex, MsoSemantics};

/// Exit codes shared by every subcommand.
mod exit {
    pub const TRUE: u8 = 0;
    pub const FALSE: u8 = 1;
    pub const USAGE: u8 = 2;
    pub const BUDGET: u8 = 3;
    pub const UNDECIDABLE: u8 = 4;
}

#[derive(Parser)]
#[command(name = "qctl", version, about = "CTL with propositional quantification")]
struct Cli {
    /// Print one JSON object instead of text.
    #[arg(long, global = true)]
    json: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Semantics {
    Structure,
    Tree,
    Both,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum SatSemantics {
    Structure,
    Tree,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum MsoMode {
    Structure,
    Tree,
}

#[derive(Subcommand)]
enum Command {
    /// Parse a formula and print it back with its sizes.
    Parse {
        #[arg(short, long)]
        formula: String,
    },
    /// Report the fragment a formula belongs to.
    Classify {
        #[arg(short, long)]
        formula: String,
    },
    /// Model check a formula at a state of a structure.
    Mc {
        #[arg(long, value_enum, default_value = "structure")]
        semantics: Semantics,
        /// Structure file (`state`, `edge`, `init` lines).
        #[arg(long = "struct")]
        structure: PathBuf,
        /// State to check at; defaults to the `init` state, then the first one.
        #[arg(long)]
        state: Option<String>,
        #[arg(short, long)]
        formula: String,
        /// Labelling tried first for quantifier blocks (`STATE PROP...` lines).
        #[arg(long)]
        witness_labels: Option<PathBuf>,
        /// Write the tree automaton as DOT.
        #[arg(long)]
        emit_automaton: Option<PathBuf>,
        /// Write the membership game as DOT.
        #[arg(long)]
        emit_game: Option<PathBuf>,
    },
    /// Rewrite a formula into prenex form.
    Prenex {
        #[arg(short, long)]
        formula: String,
    },
    /// Translate an MSO formula with free vertex variable `x`.
    TranslateMso {
        #[arg(long, value_enum)]
        mode: MsoMode,
        #[arg(short, long)]
        formula: String,
    },
    /// Decide satisfiability and print a witness structure.
    Sat {
        #[arg(long, value_enum, default_value = "tree")]
        semantics: SatSemantics,
        #[arg(short, long)]
        formula: String,
        /// Write the witness structure here instead of standard output.
        #[arg(long)]
        witness: Option<PathBuf>,
        /// Skip re-checking the witness.
        #[arg(long)]
        no_verify: bool,
    },
    /// Print a corpus formula (and its structure, for `grid` and `circuit`).
    /// `list` shows every name.
    Corpus { name: String, args: Vec<String> },
}

/// A failure with its exit code.
struct Failure {
    code: u8,
    message: String,
}

impl Failure {
    fn usage(message: impl ToString) -> Self {
        Failure {
            code: exit::USAGE,
            message: message.to_string(),
        }
    }
}

impl From<McError> for Failure {
    fn from(e: McError) -> Self {
        let code = match e {
            McError::Budget { .. } => exit::BUDGET,
            McError::NotQctl(_) => exit::USAGE,
        };
        Failure {
            code,
            message: e.to_string(),
        }
    }
}

impl From<TreeError> for Failure {
    fn from(e: TreeError) -> Self {
        let code = match &e {
            _ if e.is_blowup() => exit::BUDGET,
            TreeError::AlphabetTooLarge(_) => exit::BUDGET,
            _ => exit::USAGE,
        };
        Failure {
            code,
            message: e.to_string(),
        }
    }
}

impl From<SatError> for Failure {
    fn from(e: SatError) -> Self {
        let code = match &e {
            SatError::Tree(t) => return Failure::from(t.clone()),
            SatError::Undecidable => exit::UNDECIDABLE,
            SatError::Unverified => exit::FALSE,
            SatError::Hat(_) => exit::USAGE,
        };
        Failure {
            code,
            message: e.to_string(),
        }
    }
}

/// What a command prints and how it exits.
struct Outcome {
    text: String,
    json: Value,
    code: u8,
}

fn formula_arg(text: &str) -> Result<Formula, Failure> {
    formula_or_named(text).map_err(Failure::usage)
}

fn read(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| Failure::usage(format!("{}: {e}", path.display())))
}

fn write(path: &Path, contents: &str) -> Result<(), Failure> {
    fs::write(path, contents).map_err(|e| Failure::usage(format!("{}: {e}", path.display())))
}

fn verdict(b: bool) -> u8 {
    if b {
        exit::TRUE
    } else {
        exit::FALSE
    }
}

fn stats(states: usize, automaton: Option<usize>, positions: Option<usize>, start: Instant) -> Value {
    json!({
        "states": states,
        "automatonStates": automaton,
        "gamePositions": positions,
        "millis": start.elapsed().as_millis() as u64,
    })
}

fn run(cmd: Command) -> Result<Outcome, Failure> {
    let start = Instant::now();
    match cmd {
        Command::Parse { formula } => {
            let (f, warnings) = parse_formula_with_warnings(&formula).map_err(Failure::usage)?;
            for w in &warnings {
                log::warn!("{w}");
            }
            let (n, d) = (size(&f), dag_size(&f));
            Ok(Outcome {
                text: format!("{f}\nsize {n}, dag size {d}\n"),
                json: json!({
                    "query": formula,
                    "semantics": null,
                    "result": f.to_string(),
                    "size": n,
                    "dagSize": d,
                    "warnings": warnings.iter().map(ToString::to_string).collect::<Vec<_>>(),
                    "stats": stats(0, None, None, start),
                }),
                code: exit::TRUE,
            })
        }
        Command::Classify { formula } => {
            let f = formula_arg(&formula)?;
            let c = classify(&f);
            Ok(Outcome {
                text: format!("{c}\n"),
                json: json!({
                    "query": formula,
                    "semantics": null,
                    "result": c.to_string(),
                    "prefix": c.prefix_class.to_string(),
                    "class": c.overall.to_string(),
                    "prenex": c.prenex,
                    "quantifierDepth": c.quantifier_depth,
                    "stats": stats(0, None, None, start),
                }),
                code: exit::TRUE,
            })
        }
        Command::Prenex { formula } => {
            let f = formula_arg(&formula)?;
            let g = prenex(&f).map_err(Failure::usage)?;
            Ok(Outcome {
                text: format!("{g}\n"),
                json: json!({
                    "query": formula,
                    "semantics": null,
                    "result": g.to_string(),
                    "stats": stats(0, None, None, start),
                }),
                code: exit::TRUE,
            })
        }
        Command::TranslateMso { mode, formula } => {
            let phi = parse_mso(&formula).map_err(Failure::usage)?;
            let (semantics, name) = match mode {
                MsoMode::Structure => (MsoSemantics::Structure, "structure"),
                MsoMode::Tree => (MsoSemantics::Tree, "tree"),
            };
            let g = mso_to_qctl(&phi, semantics).map_err(Failure::usage)?;
            Ok(Outcome {
                text: format!("{g}\n"),
                json: json!({
                    "query": formula,
                    "semantics": name,
                    "result": g.to_string(),
                    "stats": stats(0, None, None, start),
                }),
                code: exit::TRUE,
            })
        }
        Command::Mc {
            semantics,
            structure,
            state,
            formula,
            witness_labels,
            emit_automaton,
            emit_game,
        } => {
            let s = parse_structure(&read(&structure)?).map_err(Failure::usage)?;
            let q = pick_state(&s, state.as_deref())?;
            let f = formula_arg(&formula)?;
            let mut opts = CheckOptions::default();
            if let Some(path) = &witness_labels {
                opts.hints.push(read_labels(&s, &read(path)?)?);
            }
            let mut rows: Vec<(&str, bool)> = Vec::new();
            let (mut automaton, mut positions) = (None, None);
            if semantics != Semantics::Tree {
                rows.push(("structure", check(&s, q, &f, &opts)?));
            }
            if semantics != Semantics::Structure {
                let report = check_tree_with(&s, q, &f, &TreeOptions::default())?;
                automaton = Some(report.automaton_states());
                positions = Some(report.game_positions());
                if let Some(path) = &emit_automaton {
                    let dot = report
                        .automaton_dot(&s, 100_000)
                        .map_err(|e| Failure::from(TreeError::Automaton { level: 0, source: e }))?;
                    write(path, &dot)?;
                }
                if let Some(path) = &emit_game {
                    write(path, &report.game_dot())?;
                }
                rows.push(("tree", report.holds));
            } else if emit_automaton.is_some() || emit_game.is_some() {
                return Err(Failure::usage("automata and games exist only under --semantics tree or both"));
            }
            let mut text = String::new();
            if rows.len() == 1 {
                let _ = writeln!(text, "{}", rows[0].1);
            } else {
                let _ = writeln!(text, "{:<10} {:<6} result", "semantics", "state");
                for (name, b) in &rows {
                    let _ = writeln!(text, "{name:<10} {:<6} {b}", s.name(q));
                }
            }
            let result = if rows.len() == 1 {
                json!(rows[0].1)
            } else {
                Value::Object(rows.iter().map(|(n, b)| (n.to_string(), json!(b))).collect())
            };
            let sem = match semantics {
                Semantics::Structure => "structure",
                Semantics::Tree => "tree",
                Semantics::Both => "both",
            };
            Ok(Outcome {
                text,
                json: json!({
                    "query": formula,
                    "state": s.name(q),
                    "semantics": sem,
                    "result": result,
                    "stats": stats(s.len(), automaton, positions, start),
                }),
                code: verdict(rows.iter().all(|r| r.1)),
            })
        }
        Command::Sat {
            semantics,
            formula,
            witness,
            no_verify,
        } => {
            let f = formula_arg(&formula)?;
            if semantics == SatSemantics::Structure {
                return Err(SatError::Undecidable.into());
            }
            let opts = SatOptions {
                verify: !no_verify,
                ..SatOptions::default()
            };
            let (result, st) = sat_with(&f, &opts)?;
            let mut text = String::new();
            let (sat, states) = match &result {
                SatResult::Unsat => {
                    text.push_str("unsat\n");
                    (false, 0)
                }
                SatResult::Sat(w) => {
                    let mut structure = w.structure.clone();
                    structure.set_init(Some(w.root));
                    let listing = structure.to_string();
                    text.push_str("sat\n");
                    match &witness {
                        Some(path) => write(path, &listing)?,
                        None => text.push_str(&listing),
                    }
                    (true, structure.len())
                }
            };
            Ok(Outcome {
                text,
                json: json!({
                    "query": formula,
                    "semantics": "tree",
                    "result": if sat { "sat" } else { "unsat" },
                    "witness": witness.as_ref().map(|p| p.display().to_string()),
                    "stats": {
                        "states": states,
                        "automatonStates": st.automaton_states,
                        "gamePositions": st.game_positions,
                        "millis": start.elapsed().as_millis() as u64,
                    },
                }),
                code: verdict(sat),
            })
        }
        Command::Corpus { name, args } => corpus(&name, &args, start),
    }
}

fn corpus(name: &str, args: &[String], start: Instant) -> Result<Outcome, Failure> {
    let (formula, structure, labels) = match name {
        "list" => {
            let mut text = String::new();
            for (n, shape) in NAMES {
                let _ = writeln!(text, "{}", format!("{n} {shape}").trim_end());
            }
            text.push_str("grid M N\ncircuit\n");
            return Ok(Outcome {
                json: json!({
                    "query": "list",
                    "semantics": null,
                    "result": text.lines().collect::<Vec<_>>(),
                    "stats": stats(0, None, None, start),
                }),
                text,
                code: exit::TRUE,
            });
        }
        "grid" => {
            let [m, n] = args else {
                return Err(Failure::usage("`grid` takes M N"));
            };
            let dim = |a: &String| match a.parse::<usize>() {
                Ok(v) if v >= 2 => Ok(v),
                _ => Err(Failure::usage(format!("grid dimension `{a}` must be an integer of at least 2"))),
            };
            let (s, witness) = build_grid(dim(m)?, dim(n)?);
            let mut labels = String::new();
            for q in s.states() {
                let props: Vec<&str> = witness
                    .iter()
                    .filter(|(_, set)| set.contains(q))
                    .map(|(p, _)| p.name())
                    .collect();
                let _ = writeln!(labels, "{} {}", s.name(q), props.join(" "));
            }
            (named_formula::<&str>("grid2d", &[]).expect("fixed entry"), Some(s), Some(labels))
        }
        "circuit" => {
            if !args.is_empty() {
                return Err(Failure::usage("`circuit` takes no arguments"));
            }
            let (s, f) = circuit_to_mc(&Circuit::example()).expect("the example circuit is monotone");
            (f, Some(s), None)
        }
        _ => (named_formula(name, args).map_err(Failure::usage)?, None, None),
    };
    let mut text = format!("{formula}\n");
    if let Some(s) = &structure {
        text.push('\n');
        text.push_str(&s.to_string());
    }
    if let Some(l) = &labels {
        text.push_str("\n# witness labels\n");
        text.push_str(l);
    }
    Ok(Outcome {
        json: json!({
            "query": std::iter::once(name).chain(args.iter().map(String::as_str)).collect::<Vec<_>>().join(" "),
            "semantics": null,
            "result": formula.to_string(),
            "structure": structure.as_ref().map(ToString::to_string),
            "witnessLabels": labels,
            "stats": stats(structure.as_ref().map_or(0, Kripke::len), None, None, start),
        }),
        text,
        code: exit::TRUE,
    })
}

fn pick_state(s: &Kripke, name: Option<&str>) -> Result<StateId, Failure> {
    match name {
        Some(n) => s.state_id(n).ok_or_else(|| Failure::usage(format!("unknown state `{n}`"))),
        None => Ok(s.init().unwrap_or(0)),
    }
}

/// Reads `STATE PROP...` lines; `#` starts a comment.
fn read_labels(s: &Kripke, text: &str) -> Result<qctl::mc_structure::Labelling, Failure> {
    let mut entries = Vec::new();
    for line in text.lines() {
        let mut words = line.split('#').next().unwrap_or("").split_whitespace();
        if let Some(state) = words.next() {
            entries.extend(words.map(|p| (state, Prop::new(p))));
        }
    }
    labelling_from_names(s, entries).map_err(Failure::usage)
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { exit::USAGE } else { exit::TRUE });
        }
    };
    match run(cli.command) {
        Ok(out) => {
            if cli.json {
                println!("{}", out.json);
            } else {
                print!("{}", out.text);
            }
            ExitCode::from(out.code)
        }
        Err(fail) => {
            if cli.json {
                println!("{}", json!({ "error": fail.message, "exitCode": fail.code }));
            } else {
                eprintln!("error: {}", fail.message);
            }
            ExitCode::from(fail.code)
        }
    }
}
