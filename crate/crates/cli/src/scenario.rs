//! Scenario files: named sets, named kernels or relations, and a pipeline.
//!
//! ```json
//! {
//!   "sets": {"One": ["*"], "Coin": ["H", "T"]},
//!   "kernels": {
//!     "flip": {"flavor": "stoch", "domain": "One", "codomain": "Coin",
//!              "rows": {"*": {"H": "1/2", "T": "1/2"}}}
//!   },
//!   "pipeline": ["flip"],
//!   "semantics": "norm",
//!   "assoc": "left"
//! }
//! ```
//!
//! `domain` and `codomain` name a set or list labels inline. `assocTree`
//! brackets the pipeline with nested two-element arrays of kernel names (or
//! pipeline positions) and implies `"assoc": "tree"`.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use serde_json::{Map, Value};

use sesqui::kernel::AssocTree;
use sesqui::possibilistic::{RelFlavor, Relation};
use sesqui::{FinSet, Kernel, KernelFlavor};

use crate::CliError;

/// The category (or magmoid) a pipeline is composed in.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Semantics {
    Prob(KernelFlavor),
    Rel(RelFlavor),
}

impl Semantics {
    pub const ALL: [Semantics; 8] = [
        Semantics::Prob(KernelFlavor::Stoch),
        Semantics::Prob(KernelFlavor::Sub),
        Semantics::Prob(KernelFlavor::Par),
        Semantics::Prob(KernelFlavor::Norm),
        Semantics::Rel(RelFlavor::Ne),
        Semantics::Rel(RelFlavor::Mm),
        Semantics::Rel(RelFlavor::Dk),
        Semantics::Rel(RelFlavor::Rel),
    ];

    /// True unless composition is the non-associative normalized one.
    pub fn is_category(self) -> bool {
        self != Semantics::Prob(KernelFlavor::Norm)
    }
}

impl fmt::Display for Semantics {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Semantics::Prob(k) => write!(f, "{k}"),
            Semantics::Rel(r) => write!(f, "{r}"),
        }
    }
}

impl FromStr for Semantics {
    type Err = CliError;

    fn from_str(s: &str) -> Result<Self, CliError> {
        if let Ok(k) = s.parse::<KernelFlavor>() {
            return Ok(Semantics::Prob(k));
        }
        if let Ok(r) = s.parse::<RelFlavor>() {
            return Ok(Semantics::Rel(r));
        }
        Err(CliError::Validation(format!(
            "unknown semantics {s:?} (expected stoch, sub, par, norm, ne, mm, dk or rel)"
        )))
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Assoc {
    Left,
    Right,
    Tree,
}

impl FromStr for Assoc {
    type Err = CliError;

    fn from_str(s: &str) -> Result<Self, CliError> {
        match s {
            "left" => Ok(Assoc::Left),
            "right" => Ok(Assoc::Right),
            "tree" => Ok(Assoc::Tree),
            _ => Err(CliError::Validation(format!(
                "unknown association {s:?} (expected left, right or tree)"
            ))),
        }
    }
}

/// A pipeline stage.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Arrow {
    Kernel(Kernel),
    Relation(Relation),
}

impl Arrow {
    pub fn domain(&self) -> &FinSet {
        match self {
            Arrow::Kernel(k) => k.domain(),
            Arrow::Relation(r) => r.domain(),
        }
    }

    pub fn codomain(&self) -> &FinSet {
        match self {
            Arrow::Kernel(k) => k.codomain(),
            Arrow::Relation(r) => r.codomain(),
        }
    }
}

#[derive(Debug, Clone)]
pub struct Scenario {
    pub sets: BTreeMap<String, FinSet>,
    pub kernels: BTreeMap<String, Arrow>,
    pub pipeline: Vec<String>,
    pub semantics: Semantics,
    pub assoc: Assoc,
    pub tree: Option<AssocTree>,
    /// Domain labels to report; all rows when absent.
    pub query: Option<Vec<String>>,
}

impl Scenario {
    pub fn arrows(&self) -> Vec<&Arrow> {
        self.pipeline.iter().map(|n| &self.kernels[n]).collect()
    }
}

fn invalid(path: &str, msg: impl fmt::Display) -> CliError {
    CliError::Validation(format!("{path}: {msg}"))
}

fn core_at(path: &str, e: sesqui::Error) -> CliError {
    match CliError::from(e) {
        CliError::Parse(m) => CliError::Parse(format!("{path}: {m}")),
        CliError::Validation(m) => CliError::Validation(format!("{path}: {m}")),
    }
}

fn str_at<'a>(v: &'a Value, path: &str) -> Result<&'a str, CliError> {
    v.as_str().ok_or_else(|| invalid(path, "expected a string"))
}

fn carrier(
    v: Option<&Value>,
    sets: &BTreeMap<String, FinSet>,
    path: &str,
) -> Result<FinSet, CliError> {
    match v {
        Some(Value::String(name)) => sets
            .get(name)
            .cloned()
            .ok_or_else(|| invalid(path, format!("unknown set {name:?}"))),
        Some(Value::Array(items)) => {
            let labels = items
                .iter()
                .enumerate()
                .map(|(i, l)| str_at(l, &format!("{path}[{i}]")))
                .collect::<Result<Vec<_>, _>>()?;
            FinSet::new(labels).map_err(|e| core_at(path, e))
        }
        Some(_) => Err(invalid(path, "expected a set name or a list of labels")),
        None => Err(invalid(path, "missing")),
    }
}

fn parse_arrow(
    name: &str,
    v: &Value,
    sets: &BTreeMap<String, FinSet>,
) -> Result<Arrow, CliError> {
    let path = format!("kernels.{name}");
    let obj = v
        .as_object()
        .ok_or_else(|| invalid(&path, "expected an object"))?;
    let flavor = str_at(
        obj.get("flavor").ok_or_else(|| invalid(&path, "missing flavor"))?,
        &format!("{path}.flavor"),
    )?;
    let domain = carrier(obj.get("domain"), sets, &format!("{path}.domain"))?;
    let codomain = carrier(obj.get("codomain"), sets, &format!("{path}.codomain"))?;
    let rows = obj
        .get("rows")
        .ok_or_else(|| invalid(&path, "missing rows"))?;
    let rows_path = format!("{path}.rows");
    match flavor.parse::<Semantics>() {
        Ok(Semantics::Prob(k)) => Kernel::from_json_rows(k, domain, codomain, rows)
            .map(Arrow::Kernel)
            .map_err(|e| core_at(&rows_path, e)),
        Ok(Semantics::Rel(r)) => Relation::from_json_rows(r, domain, codomain, rows)
            .map(Arrow::Relation)
            .map_err(|e| core_at(&rows_path, e)),
        Err(_) => Err(invalid(&format!("{path}.flavor"), format!("unknown flavor {flavor:?}"))),
    }
}

fn parse_tree(v: &Value, pipeline: &[String], next: &mut usize, path: &str) -> Result<AssocTree, CliError> {
    match v {
        Value::Array(items) if items.len() == 2 => {
            let l = parse_tree(&items[0], pipeline, next, &format!("{path}[0]"))?;
            let r = parse_tree(&items[1], pipeline, next, &format!("{path}[1]"))?;
            Ok(AssocTree::node(l, r))
        }
        Value::Array(_) => Err(invalid(path, "tree nodes must have exactly two children")),
        Value::String(name) => {
            let i = *next;
            if pipeline.get(i) != Some(name) {
                return Err(invalid(
                    path,
                    format!("expected pipeline stage {i} ({:?}), found {name:?}", pipeline.get(i)),
                ));
            }
            *next += 1;
            Ok(AssocTree::Leaf(i))
        }
        Value::Number(n) => {
            let i = n
                .as_u64()
                .ok_or_else(|| invalid(path, "positions must be non-negative integers"))?
                as usize;
            if i != *next {
                return Err(invalid(path, format!("expected pipeline position {}, found {i}", *next)));
            }
            *next += 1;
            Ok(AssocTree::Leaf(i))
        }
        _ => Err(invalid(path, "expected a kernel name, a position, or a pair")),
    }
}

/// Parses and validates a scenario. JSON syntax errors and malformed
/// rationals are parse errors; everything else is a validation error.
pub fn parse_scenario(text: &str) -> Result<Scenario, CliError> {
    let v: Value = serde_json::from_str(text).map_err(|e| CliError::Parse(format!("invalid JSON: {e}")))?;
    let obj = v
        .as_object()
        .ok_or_else(|| CliError::Validation("scenario must be a JSON object".into()))?;
    const KNOWN: [&str; 8] = ["comment", "sets", "kernels", "pipeline", "semantics", "assoc", "assocTree", "query"];
    if let Some(k) = obj.keys().find(|k| !KNOWN.contains(&k.as_str())) {
        return Err(invalid(k, "unknown field"));
    }

    let empty = Map::new();
    let sets_obj = match obj.get("sets") {
        None => &empty,
        Some(s) => s.as_object().ok_or_else(|| invalid("sets", "expected an object"))?,
    };
    let mut sets = BTreeMap::new();
    for (name, labels) in sets_obj {
        let path = format!("sets.{name}");
        if !labels.is_array() {
            return Err(invalid(&path, "expected a list of labels"));
        }
        sets.insert(name.clone(), carrier(Some(labels), &BTreeMap::new(), &path)?);
    }

    let kernels_obj = obj
        .get("kernels")
        .ok_or_else(|| invalid("kernels", "missing"))?
        .as_object()
        .ok_or_else(|| invalid("kernels", "expected an object"))?;
    let mut kernels = BTreeMap::new();
    for (name, k) in kernels_obj {
        kernels.insert(name.clone(), parse_arrow(name, k, &sets)?);
    }

    let pipeline: Vec<String> = obj
        .get("pipeline")
        .ok_or_else(|| invalid("pipeline", "missing"))?
        .as_array()
        .ok_or_else(|| invalid("pipeline", "expected a list of kernel names"))?
        .iter()
        .enumerate()
        .map(|(i, n)| str_at(n, &format!("pipeline[{i}]")).map(String::from))
        .collect::<Result<_, _>>()?;
    if pipeline.is_empty() {
        return Err(invalid("pipeline", "must name at least one kernel"));
    }
    for (i, name) in pipeline.iter().enumerate() {
        if !kernels.contains_key(name) {
            return Err(invalid(&format!("pipeline[{i}]"), format!("unknown kernel {name:?}")));
        }
    }
    for (i, pair) in pipeline.windows(2).enumerate() {
        let (a, b) = (&kernels[&pair[0]], &kernels[&pair[1]]);
        if a.codomain() != b.domain() {
            return Err(invalid(
                &format!("pipeline[{}]", i + 1),
                format!(
                    "{:?} has domain {} but {:?} has codomain {}",
                    pair[1],
                    b.domain(),
                    pair[0],
                    a.codomain()
                ),
            ));
        }
    }

    let semantics = match obj.get("semantics") {
        None => Semantics::Prob(KernelFlavor::Norm),
        Some(s) => str_at(s, "semantics")?
            .parse()
            .map_err(|e: CliError| invalid("semantics", e.message()))?,
    };
    let tree = obj
        .get("assocTree")
        .map(|t| {
            let mut next = 0;
            let tree = parse_tree(t, &pipeline, &mut next, "assocTree")?;
            if next != pipeline.len() {
                return Err(invalid("assocTree", format!("covers {next} of {} stages", pipeline.len())));
            }
            Ok(tree)
        })
        .transpose()?;
    let assoc = match obj.get("assoc") {
        Some(a) => str_at(a, "assoc")?
            .parse()
            .map_err(|e: CliError| invalid("assoc", e.message()))?,
        None if tree.is_some() => Assoc::Tree,
        None => Assoc::Left,
    };
    if assoc == Assoc::Tree && tree.is_none() {
        return Err(invalid("assoc", "\"tree\" needs an assocTree"));
    }
    let query = obj
        .get("query")
        .map(|q| {
            q.as_array()
                .ok_or_else(|| invalid("query", "expected a list of labels"))?
                .iter()
                .enumerate()
                .map(|(i, l)| str_at(l, &format!("query[{i}]")).map(String::from))
                .collect::<Result<Vec<_>, _>>()
        })
        .transpose()?;
    let scenario = Scenario {
        sets,
        kernels,
        pipeline,
        semantics,
        assoc,
        tree,
        query,
    };
    if let Some(q) = &scenario.query {
        let domain = scenario.arrows()[0].domain();
        if let Some(l) = q.iter().find(|l| !domain.contains(l)) {
            return Err(invalid("query", format!("label {l:?} is not in {domain}")));
        }
    }
    Ok(scenario)
}
