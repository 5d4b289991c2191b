//! Command-line front end.
//!
//! Exit status: 0 valid (for `check-model`: the model falsifies the
//! formula; for `fragment`: accepted), 1 invalid (the model satisfies the
//! formula), 2 malformed input or usage, 3 outside the fragment, 4 a
//! resource cap was hit.
//!
//! With `--json` a verdict is a single object, keys in this order:
//!
//! ```json
//! {"verdict": "valid" | "invalid",
//!  "proof": <tree> | null,
//!  "countermodel": <model file> | null,
//!  "stats": {"steps": 3, "branches": 2, "variables": 2},
//!  "encoded": "...",        // entail only
//!  "translated": "...",     // modal only
//!  "verification": {...}}   // with --verify only
//! ```
//!
//! `<tree>` is [`TreeExport`](crate::engine::export::TreeExport) and
//! `<model file>` the [`ModelFile`] exchange form. Errors print
//! `{"error": {"kind": ..., "message": ...}}` instead.

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use serde::Serialize;
use serde_json::Value;

use crate::engine::export::tree_to_json;
use crate::engine::{run_procedure_traced, EngineError, Limits, SearchReport, Stats, TraceEvent, Verdict};
use crate::formulas::{parse_formula, RelFormula};
use crate::frontends::{
    encode_entailment, kripke_countermodel, parse_modal, translate_modal, EncodeError, EntailmentProblem,
};
use crate::relterm::{fragment_check, nf_cmpl, parse_term, simplify_ones, FragmentVerdict, RelTerm};
use crate::semantics::{brute_force_countermodel, falsifies_branch, satisfies, ModelFile};

pub const EXIT_VALID: i32 = 0;
pub const EXIT_INVALID: i32 = 1;
pub const EXIT_MALFORMED: i32 = 2;
pub const EXIT_FRAGMENT: i32 = 3;
pub const EXIT_RESOURCES: i32 = 4;

#[derive(Debug, Parser)]
#[command(name = "reltab", version, about = "Decide validity of relational terms by dual-tableau proof search")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    #[command(flatten)]
    config: RunConfig,
}

#[derive(Debug, Clone, Args)]
pub struct RunConfig {
    /// Print machine-readable JSON.
    #[arg(long, global = true)]
    pub json: bool,
    /// Stream rule applications to stderr.
    #[arg(long, global = true)]
    pub trace: bool,
    /// Cap on rule applications.
    #[arg(long, global = true, default_value_t = 1_000_000, value_parser = clap::value_parser!(u64).range(1..))]
    pub max_steps: u64,
    /// Largest universe (or number of worlds) tried by the cross-checks.
    #[arg(long, global = true, default_value_t = 3, value_parser = clap::value_parser!(u8).range(1..=4))]
    pub oracle_size: u8,
    /// Re-check the verdict: countermodels against the branch and input,
    /// proofs against an exhaustive search of small models.
    #[arg(long, global = true)]
    pub verify: bool,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Decide validity of `x TERM y`.
    Prove {
        #[arg(allow_hyphen_values = true)]
        term: String,
    },
    /// Decide whether the premises (each read as `R = 1`) entail the conclusion.
    Entail {
        #[arg(long = "premise", required = true, allow_hyphen_values = true)]
        premises: Vec<String>,
        #[arg(long, allow_hyphen_values = true)]
        conclusion: String,
    },
    /// Decide a multi-modal K formula through its relational translation.
    Modal {
        #[arg(allow_hyphen_values = true)]
        formula: String,
    },
    /// Exit 0 if the model falsifies the formula, 1 if it satisfies it.
    CheckModel {
        /// A term (read as `x TERM y`) or a formula `u TERM v`.
        #[arg(allow_hyphen_values = true)]
        formula: String,
        /// Model file, or `-` for stdin.
        #[arg(long)]
        model: PathBuf,
    },
    /// Check membership in the decidable fragment.
    Fragment {
        #[arg(allow_hyphen_values = true)]
        term: String,
    },
    /// Apply the one-identities and, for Boolean terms, the complement normal form.
    Simplify {
        #[arg(allow_hyphen_values = true)]
        term: String,
    },
}

#[derive(Debug)]
struct Failure {
    code: i32,
    kind: &'static str,
    message: String,
}

impl Failure {
    fn malformed(message: impl ToString) -> Self {
        Failure {
            code: EXIT_MALFORMED,
            kind: "malformed-input",
            message: message.to_string(),
        }
    }
}

impl From<EngineError> for Failure {
    fn from(e: EngineError) -> Self {
        let (code, kind) = match e {
            EngineError::Fragment(_) => (EXIT_FRAGMENT, "fragment-violation"),
            EngineError::ResourceExhausted { .. } => (EXIT_RESOURCES, "resource-exhausted"),
        };
        Failure {
            code,
            kind,
            message: e.to_string(),
        }
    }
}

#[derive(Serialize)]
struct Report {
    verdict: &'static str,
    proof: Option<Value>,
    countermodel: Option<ModelFile>,
    stats: Stats,
    #[serde(skip_serializing_if = "Option::is_none")]
    encoded: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    translated: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    verification: Option<Verification>,
}

#[derive(Serialize, Default)]
struct Verification {
    #[serde(skip_serializing_if = "Option::is_none")]
    falsifies_branch: Option<bool>,
    #[serde(skip_serializing_if = "Option::is_none")]
    falsifies_input: Option<bool>,
    /// Size of the largest model searched, when the search ran.
    #[serde(skip_serializing_if = "Option::is_none")]
    oracle_size: Option<u8>,
    /// `None` when the search space was over budget.
    #[serde(skip_serializing_if = "Option::is_none")]
    oracle_refutation: Option<Option<bool>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    kripke_refutation: Option<Option<bool>>,
}

/// Runs the command line `args` (program name first) and returns the exit
/// status.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_MALFORMED } else { EXIT_VALID };
            let text = e.render().to_string();
            if e.use_stderr() {
                let _ = write!(err, "{text}");
            } else {
                let _ = write!(out, "{text}");
            }
            return code;
        }
    };
    let config = cli.config;
    match dispatch(&cli.command, &config, out, err) {
        Ok(code) => code,
        Err(f) => {
            let _ = writeln!(err, "error: {}", f.message);
            if config.json {
                let v = serde_json::json!({"error": {"kind": f.kind, "message": f.message}});
                let _ = writeln!(out, "{v}");
            }
            f.code
        }
    }
}

fn dispatch(cmd: &Command, config: &RunConfig, out: &mut dyn Write, err: &mut dyn Write) -> Result<i32, Failure> {
    match cmd {
        Command::Prove { term } => {
            let t = parse_term(term).map_err(Failure::malformed)?;
            prove(&t, config, out, err, Extras::default())
        }
        Command::Entail { premises, conclusion } => {
            let problem = EntailmentProblem {
                premises: premises
                    .iter()
                    .map(|p| parse_term(p))
                    .collect::<Result<_, _>>()
                    .map_err(Failure::malformed)?,
                conclusion: parse_term(conclusion).map_err(Failure::malformed)?,
            };
            let encoded = encode_entailment(&problem).map_err(|e| match e {
                EncodeError::EmptyPremises => Failure::malformed(e),
                EncodeError::FragmentViolation(_) => Failure {
                    code: EXIT_FRAGMENT,
                    kind: "fragment-violation",
                    message: e.to_string(),
                },
            })?;
            let extras = Extras {
                encoded: Some(encoded.to_string()),
                ..Extras::default()
            };
            prove(&encoded, config, out, err, extras)
        }
        Command::Modal { formula } => {
            let f = parse_modal(formula).map_err(Failure::malformed)?;
            let t = translate_modal(&f);
            let kripke = config.verify.then(|| {
                kripke_countermodel(&f, config.oracle_size as usize)
                    .ok()
                    .map(|r| r.is_some())
            });
            let extras = Extras {
                translated: Some(t.to_string()),
                kripke,
                ..Extras::default()
            };
            prove(&t, config, out, err, extras)
        }
        Command::CheckModel { formula, model } => check_model(formula, model, config, out),
        Command::Fragment { term } => {
            let t = simplify_ones(&parse_term(term).map_err(Failure::malformed)?);
            let (code, v) = match fragment_check(&t) {
                FragmentVerdict::Accept => (EXIT_VALID, serde_json::json!({"fragment": true, "term": t.to_string()})),
                FragmentVerdict::Reject(r) => (
                    EXIT_FRAGMENT,
                    serde_json::json!({"fragment": false, "term": t.to_string(), "clause": r.clause, "subterm": r.subterm.to_string(), "message": r.to_string()}),
                ),
            };
            if config.json {
                writeln!(out, "{v}").map_err(io)?;
            } else if code == EXIT_VALID {
                writeln!(out, "in fragment: {t}").map_err(io)?;
            } else {
                writeln!(out, "not in fragment: {}", v["message"].as_str().unwrap_or_default()).map_err(io)?;
            }
            Ok(code)
        }
        Command::Simplify { term } => {
            let t = simplify_ones(&parse_term(term).map_err(Failure::malformed)?);
            let nf = nf_cmpl(&t).ok().map(|n| simplify_ones(&n));
            if config.json {
                let v = serde_json::json!({"term": t.to_string(), "normal_form": nf.as_ref().map(|n| n.to_string())});
                writeln!(out, "{v}").map_err(io)?;
            } else {
                writeln!(out, "{t}").map_err(io)?;
                if let Some(n) = nf.filter(|n| *n != t) {
                    writeln!(out, "normal form: {n}").map_err(io)?;
                }
            }
            Ok(EXIT_VALID)
        }
    }
}

fn io(e: std::io::Error) -> Failure {
    Failure::malformed(format!("output failed: {e}"))
}

#[derive(Default)]
struct Extras {
    encoded: Option<String>,
    translated: Option<String>,
    kripke: Option<Option<bool>>,
}

fn prove(t: &RelTerm, config: &RunConfig, out: &mut dyn Write, err: &mut dyn Write, extras: Extras) -> Result<i32, Failure> {
    let limits = Limits {
        max_steps: usize::try_from(config.max_steps).unwrap_or(usize::MAX),
        ..Limits::default()
    };
    let mut observer = |e: &TraceEvent| {
        if !config.trace {
            return;
        }
        let _ = match e {
            TraceEvent::Applied { node, rule, premise, var } => match var {
                Some(v) => writeln!(err, "apply {rule} to {premise} with {v} -> node {node}"),
                None => writeln!(err, "apply {rule} to {premise} -> node {node}"),
            },
            TraceEvent::Closed { node } => writeln!(err, "node {node} is axiomatic"),
            TraceEvent::Saturated { node } => writeln!(err, "node {node} is open and saturated"),
        };
    };
    let rep = run_procedure_traced(t, &limits, &mut observer)?;
    let verification = config.verify.then(|| verify(&rep, config.oracle_size, extras.kripke));
    if let Some(v) = &verification {
        let suspicious = v.falsifies_branch == Some(false)
            || v.falsifies_input == Some(false)
            || (rep.verdict.is_proof() && (v.oracle_refutation == Some(Some(true)) || v.kripke_refutation == Some(Some(true))));
        if suspicious {
            let _ = writeln!(err, "warning: verification disagrees with the verdict");
        }
    }
    let code = if rep.verdict.is_proof() { EXIT_VALID } else { EXIT_INVALID };
    let report = Report {
        verdict: if rep.verdict.is_proof() { "valid" } else { "invalid" },
        proof: rep.verdict.is_proof().then(|| tree_to_json(&rep.tree)),
        countermodel: match &rep.verdict {
            Verdict::Countermodel(cm) => Some(ModelFile::from_model(&cm.model, &cm.valuation)),
            Verdict::Proof => None,
        },
        stats: rep.stats,
        encoded: extras.encoded,
        translated: extras.translated,
        verification,
    };
    if config.json {
        let text = serde_json::to_string(&report).expect("report serializes");
        writeln!(out, "{text}").map_err(io)?;
    } else {
        write_human(&rep, &report, out).map_err(io)?;
    }
    Ok(code)
}

fn verify(rep: &SearchReport, oracle_size: u8, kripke: Option<Option<bool>>) -> Verification {
    let mut v = Verification {
        kripke_refutation: kripke,
        ..Verification::default()
    };
    match &rep.verdict {
        Verdict::Countermodel(cm) => {
            v.falsifies_branch = Some(falsifies_branch(&cm.model, &cm.valuation, &cm.branch));
            let goal = RelFormula::new(crate::formulas::ObjVar::x(), rep.term.clone(), crate::formulas::ObjVar::y());
            v.falsifies_input = Some(satisfies(&cm.model, &cm.valuation, &goal) == Ok(false));
        }
        Verdict::Proof => {
            v.oracle_size = Some(oracle_size);
            v.oracle_refutation = Some(
                brute_force_countermodel(&rep.term, oracle_size as usize)
                    .ok()
                    .map(|r| r.is_some()),
            );
        }
    }
    v
}

fn write_human(rep: &SearchReport, report: &Report, out: &mut dyn Write) -> std::io::Result<()> {
    if let Some(e) = &report.encoded {
        writeln!(out, "encoded: {e}")?;
    }
    if let Some(t) = &report.translated {
        writeln!(out, "translated: {t}")?;
    }
    writeln!(out, "{}", report.verdict)?;
    match &rep.verdict {
        Verdict::Proof => {
            for node in &rep.tree.nodes {
                let depth = rep.tree.path_to(node.id).len() - 1;
                let step = match (&node.rule, &node.premise) {
                    (Some(r), Some(p)) => match &node.var {
                        Some(v) => format!("{r} on {p} with {v}: "),
                        None => format!("{r} on {p}: "),
                    },
                    _ => String::new(),
                };
                let formulas: Vec<String> = node.formulas.iter().map(|f| f.to_string()).collect();
                let mark = if node.closed { "  [closed]" } else { "" };
                writeln!(out, "{:indent$}{step}{{{}}}{mark}", "", formulas.join(", "), indent = 2 * depth)?;
            }
        }
        Verdict::Countermodel(_) => {
            let m = report.countermodel.as_ref().expect("countermodel present");
            writeln!(out, "universe: {}", m.universe.join(" "))?;
            for (r, pairs) in &m.relations {
                let pairs: Vec<String> = pairs.iter().map(|[a, b]| format!("({a},{b})")).collect();
                writeln!(out, "{r} = {{{}}}", pairs.join(", "))?;
            }
        }
    }
    let s = &report.stats;
    writeln!(out, "steps {}, branches {}, variables {}", s.steps, s.branches, s.variables)?;
    if let Some(v) = &report.verification {
        writeln!(out, "verification: {}", serde_json::to_string(v).expect("serializes"))?;
    }
    Ok(())
}

fn check_model(formula: &str, model: &PathBuf, config: &RunConfig, out: &mut dyn Write) -> Result<i32, Failure> {
    let f = match parse_formula(formula) {
        Ok(f) => f,
        Err(_) => {
            let t = parse_term(formula).map_err(Failure::malformed)?;
            RelFormula::new(crate::formulas::ObjVar::x(), t, crate::formulas::ObjVar::y())
        }
    };
    let text = if model.as_os_str() == "-" {
        let mut s = String::new();
        std::io::Read::read_to_string(&mut std::io::stdin(), &mut s).map_err(Failure::malformed)?;
        s
    } else {
        std::fs::read_to_string(model).map_err(|e| Failure::malformed(format!("{}: {e}", model.display())))?
    };
    let (m, v) = ModelFile::from_json(&text)
        .and_then(|file| file.to_model())
        .map_err(Failure::malformed)?;
    let holds = satisfies(&m, &v, &f).map_err(Failure::malformed)?;
    if config.json {
        let j = serde_json::json!({"formula": f.to_string(), "satisfied": holds});
        writeln!(out, "{j}").map_err(io)?;
    } else {
        writeln!(out, "{} {f}", if holds { "satisfies" } else { "falsifies" }).map_err(io)?;
    }
    Ok(if holds { EXIT_INVALID } else { EXIT_VALID })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn call(args: &[&str]) -> (i32, String) {
        let mut out = Vec::new();
        let mut err = Vec::new();
        let argv = std::iter::once("reltab").chain(args.iter().copied());
        let code = run(argv, &mut out, &mut err);
        (code, String::from_utf8(out).unwrap())
    }

    #[test]
    fn prove_exit_codes() {
        assert_eq!(call(&["prove", "r | -r"]).0, EXIT_VALID);
        assert_eq!(call(&["prove", "r"]).0, EXIT_INVALID);
        assert_eq!(call(&["prove", "r ^"]).0, EXIT_FRAGMENT);
        assert_eq!(call(&["prove", "-r | r"]).0, EXIT_VALID);
        assert_eq!(call(&["prove", "r |"]).0, EXIT_MALFORMED);
        assert_eq!(call(&["prove", "(r | s) | (p | q)", "--max-steps", "1"]).0, EXIT_RESOURCES);
        assert_eq!(call(&["prove"]).0, EXIT_MALFORMED);
        assert_eq!(call(&["prove", "r", "--oracle-size", "5"]).0, EXIT_MALFORMED);
    }

    #[test]
    fn json_key_order() {
        let (_, out) = call(&["--json", "prove", "r"]);
        let keys: Vec<usize> = ["\"verdict\"", "\"proof\"", "\"countermodel\"", "\"stats\""]
            .iter()
            .map(|k| out.find(k).unwrap())
            .collect();
        assert!(keys.windows(2).all(|w| w[0] < w[1]), "{out}");
        let v: Value = serde_json::from_str(&out).unwrap();
        assert_eq!(v["countermodel"]["universe"], serde_json::json!(["x", "y"]));
        assert_eq!(v["proof"], Value::Null);
    }

    #[test]
    fn fragment_and_simplify() {
        let (code, out) = call(&["fragment", "--json", "r ^"]);
        assert_eq!(code, EXIT_FRAGMENT);
        assert!(out.contains("\"converse\""), "{out}");
        let (code, out) = call(&["simplify", "(1 & r) | -(s | -1)"]);
        assert_eq!(code, EXIT_VALID);
        assert_eq!(out.lines().next(), Some("(r | -s)"));
    }
}
