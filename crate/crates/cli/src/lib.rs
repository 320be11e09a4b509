//! Scenario runner for exact kernel pipelines, plus front ends for the law
//! checks and the guarded-choice term tools.

pub mod report;
pub mod run;
pub mod scenario;

use serde_json::json;
use thiserror::Error;

use sesqui::json::BOTTOM_KEY;
use sesqui::laws::{self, LawReport, Outcome};
use sesqui::tricocycloid::dh::Instance;
use sesqui::tricocycloid::term::{
    eval_interval, eval_terminal, normal_form, normal_form_merged, normalize_term,
    parse_interval_term, parse_terminal_term, GuardedTerm, Normalized,
};
use sesqui::tricocycloid::{check_axioms, check_derived_equations, Interval, Terminal, Tricocycloid, Verdict};

pub use report::{emit_report, Format};
pub use run::{run_scenario, RunOptions, RunResult};
pub use scenario::{parse_scenario, Arrow, Assoc, Scenario, Semantics};

/// Errors carry their process exit code: 2 for unreadable input, 3 for input
/// that reads fine but does not make sense.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CliError {
    #[error("parse error: {0}")]
    Parse(String),
    #[error("validation error: {0}")]
    Validation(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Parse(_) => 2,
            CliError::Validation(_) => 3,
        }
    }

    pub fn message(&self) -> &str {
        match self {
            CliError::Parse(m) | CliError::Validation(m) => m,
        }
    }
}

impl From<sesqui::Error> for CliError {
    fn from(e: sesqui::Error) -> Self {
        match e {
            sesqui::Error::Rational(_) | sesqui::Error::TermParse { .. } => CliError::Parse(e.to_string()),
            other => CliError::Validation(other.to_string()),
        }
    }
}

/// Reads, runs and renders a scenario file's contents.
pub fn run_text(text: &str, opts: &RunOptions, format: Format) -> Result<String, CliError> {
    let s = parse_scenario(text)?;
    let r = run_scenario(&s, opts)?;
    Ok(emit_report(&r, format))
}

fn verdict_text(name: &str, v: &Verdict, out: &mut String) {
    match v {
        Verdict::Pass { samples } => out.push_str(&format!("  {name}: pass ({samples} samples)\n")),
        Verdict::Fail(f) => {
            out.push_str(&format!("  {name}: fail at equation {} ({})\n", f.index, f.equation));
            out.push_str(&format!("    p = {}, q = {}, r = {}\n", f.p, f.q, f.r));
            out.push_str(&format!("    lhs = {}, rhs = {}\n", f.lhs, f.rhs));
        }
    }
}

fn tricocycloid_report<T: Tricocycloid>(t: &T, samples: usize, seed: u64, format: Format) -> String {
    let ax = check_axioms(t, samples, seed);
    let derived = check_derived_equations(t, samples, seed);
    match format {
        Format::Json => {
            let v = json!({"instance": t.name(), "axioms": ax, "derived": derived});
            serde_json::to_string_pretty(&v).expect("serializable") + "\n"
        }
        Format::Text => {
            let mut out = format!("{} tricocycloid\n", t.name());
            verdict_text("axioms", &ax, &mut out);
            verdict_text("derived equations", &derived, &mut out);
            out
        }
    }
}

fn law_reports_text(reports: &[LawReport]) -> String {
    let mut out = String::new();
    for r in reports {
        out.push_str(&format!("{} {}\n", r.instance, r.check));
        for a in &r.axioms {
            match (&a.verdict, &a.witness) {
                (Outcome::Pass, _) => out.push_str(&format!("  {}: pass\n", a.name)),
                (Outcome::Fail, w) => {
                    out.push_str(&format!("  {}: fail\n", a.name));
                    if let Some(w) = w {
                        out.push_str(&format!("    input: {}\n", w.input));
                        out.push_str(&format!("    lhs: {}\n", w.lhs));
                        out.push_str(&format!("    rhs: {}\n", w.rhs));
                    }
                }
            }
        }
    }
    out
}

/// Names accepted by the `laws` command.
pub fn law_instance_names() -> Vec<&'static str> {
    let mut v = laws::INSTANCE_NAMES.to_vec();
    v.extend(["interval", "terminal"]);
    v
}

/// Runs the law checks for a named instance: the four sesquilaw candidates
/// or one of the two tricocycloids.
pub fn laws_text(instance: &str, samples: usize, seed: u64, format: Format) -> Result<String, CliError> {
    if samples == 0 {
        return Err(CliError::Validation("--samples must be at least 1".into()));
    }
    match instance {
        "interval" => return Ok(tricocycloid_report(&Interval::default(), samples, seed, format)),
        "terminal" => return Ok(tricocycloid_report(&Terminal, samples, seed, format)),
        _ => {}
    }
    let reports = laws::run_named(instance, samples, seed).ok_or_else(|| {
        CliError::Validation(format!(
            "unknown law instance {instance:?} (expected one of {})",
            law_instance_names().join(", ")
        ))
    })?;
    Ok(match format {
        Format::Text => law_reports_text(&reports),
        Format::Json => serde_json::to_string_pretty(&reports).expect("serializable") + "\n",
    })
}

fn normalized_text<G: std::fmt::Display>(n: &Normalized<G>) -> String {
    match n {
        Normalized::Bottom => "bottom\n".into(),
        Normalized::Total(t) => format!("term: {t}\nvalidity: total\n"),
        Normalized::Partial { term, validity } => format!("term: {term}\nvalidity: {validity}\n"),
    }
}

/// `term normalize`: splits a term as `n(t) ⊕_v _|_`.
pub fn term_normalize(src: &str, instance: Instance) -> Result<String, CliError> {
    Ok(match instance {
        Instance::Interval => normalized_text(&normalize_term(&Interval::default(), &parse_interval_term(src)?)?),
        Instance::Terminal => normalized_text(&normalize_term(&Terminal, &parse_terminal_term(src)?)?),
    })
}

/// `term eval`: the meaning of a term.
pub fn term_eval(src: &str, instance: Instance) -> Result<String, CliError> {
    Ok(match instance {
        Instance::Interval => {
            let d = eval_interval(&parse_interval_term(src)?);
            let mut lines: Vec<String> = d.iter().map(|(v, w)| format!("{v}: {w}")).collect();
            if d.bottom().is_positive() {
                lines.push(format!("{BOTTOM_KEY}: {}", d.bottom()));
            }
            lines.join("\n") + "\n"
        }
        Instance::Terminal => {
            let s = eval_terminal(&parse_terminal_term(src)?);
            let parts: Vec<String> = s
                .iter()
                .map(|o| o.clone().unwrap_or_else(|| BOTTOM_KEY.to_string()))
                .collect();
            format!("{{{}}}\n", parts.join(", "))
        }
    })
}

fn order_or_default<G>(t: &GuardedTerm<G>, order: Option<Vec<String>>) -> Vec<String> {
    order.unwrap_or_else(|| {
        let mut v = t.variables();
        v.sort();
        v
    })
}

/// `term normal-form`: sorted right comb; `merged` also merges repeated
/// variables (interval only).
pub fn term_normal_form(
    src: &str,
    instance: Instance,
    order: Option<Vec<String>>,
    merged: bool,
) -> Result<String, CliError> {
    Ok(match instance {
        Instance::Interval => {
            let t = parse_interval_term(src)?;
            let order = order_or_default(&t, order);
            if merged {
                format!("{}\n", normal_form_merged(&t, &order)?)
            } else {
                format!("{}\n", normal_form(&Interval::default(), &t, &order)?)
            }
        }
        Instance::Terminal => {
            if merged {
                return Err(CliError::Validation("--merged applies to the interval instance".into()));
            }
            let t = parse_terminal_term(src)?;
            let order = order_or_default(&t, order);
            format!("{}\n", normal_form(&Terminal, &t, &order)?)
        }
    })
}
