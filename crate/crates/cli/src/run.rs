//! Folding a scenario's pipeline under a semantics and a bracketing.

use sesqui::kernel::{self, AssocTree};
use sesqui::possibilistic::{self, supp_kernel, RelFlavor, Relation};
use sesqui::{Kernel, KernelFlavor};

use crate::scenario::{Arrow, Assoc, Scenario, Semantics};
use crate::CliError;

#[derive(Debug, Clone, Default)]
pub struct RunOptions {
    pub semantics: Option<Semantics>,
    pub assoc: Option<Assoc>,
    pub trace: bool,
    /// Normalize the final subdistribution kernel rowwise.
    pub normalize: bool,
}

/// One composite formed during the fold.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Step {
    pub tree: String,
    pub value: Arrow,
}

#[derive(Debug, Clone)]
pub struct RunResult {
    pub semantics: Semantics,
    pub tree: AssocTree,
    pub normalized: bool,
    pub result: Arrow,
    pub trace: Vec<Step>,
    pub query: Option<Vec<String>>,
}

/// The probabilistic flavor whose support lands in `r`.
fn prob_for(r: RelFlavor) -> KernelFlavor {
    match r {
        RelFlavor::Ne => KernelFlavor::Stoch,
        RelFlavor::Mm => KernelFlavor::Sub,
        RelFlavor::Dk => KernelFlavor::Par,
        RelFlavor::Rel => KernelFlavor::Norm,
    }
}

fn stage_error(name: &str, e: sesqui::Error) -> CliError {
    CliError::Validation(format!("kernel {name:?} under this semantics: {e}"))
}

/// Brings a stage into the chosen semantics. Kernels coerce by content;
/// under a relational semantics a kernel is first read in the matching
/// probabilistic flavor and then replaced by its support.
fn coerce(name: &str, a: &Arrow, semantics: Semantics) -> Result<Arrow, CliError> {
    match (a, semantics) {
        (Arrow::Kernel(k), Semantics::Prob(f)) => {
            k.coerce(f).map(Arrow::Kernel).map_err(|e| stage_error(name, e))
        }
        (Arrow::Kernel(k), Semantics::Rel(r)) => k
            .coerce(prob_for(r))
            .map(|k| Arrow::Relation(supp_kernel(&k)))
            .map_err(|e| stage_error(name, e)),
        (Arrow::Relation(rel), Semantics::Rel(r)) => {
            rel.coerce(r).map(Arrow::Relation).map_err(|e| stage_error(name, e))
        }
        (Arrow::Relation(_), Semantics::Prob(f)) => Err(CliError::Validation(format!(
            "relation {name:?} cannot be used under the probabilistic semantics {f}"
        ))),
    }
}

fn compose(a: Arrow, b: Arrow) -> Result<Arrow, CliError> {
    let out = match (a, b) {
        (Arrow::Kernel(f), Arrow::Kernel(g)) => kernel::compose(&f, &g).map(Arrow::Kernel),
        (Arrow::Relation(f), Arrow::Relation(g)) => possibilistic::compose(&f, &g).map(Arrow::Relation),
        _ => unreachable!("stages share one semantics"),
    };
    out.map_err(CliError::from)
}

pub fn run_scenario(s: &Scenario, opts: &RunOptions) -> Result<RunResult, CliError> {
    let semantics = opts.semantics.unwrap_or(s.semantics);
    let assoc = opts.assoc.clone().unwrap_or_else(|| s.assoc.clone());
    let n = s.pipeline.len();
    let tree = match assoc {
        Assoc::Left => AssocTree::left(n),
        Assoc::Right => AssocTree::right(n),
        Assoc::Tree => s
            .tree
            .clone()
            .ok_or_else(|| CliError::Validation("assoc: \"tree\" needs an assocTree in the scenario".into()))?,
    };
    if opts.normalize && semantics != Semantics::Prob(KernelFlavor::Sub) {
        return Err(CliError::Validation(format!(
            "--normalize applies to sub semantics, not {semantics}"
        )));
    }
    let stages = s
        .pipeline
        .iter()
        .zip(s.arrows())
        .map(|(name, a)| coerce(name, a, semantics))
        .collect::<Result<Vec<_>, _>>()?;

    let mut trace = Vec::new();
    let result = fold(&tree, &stages, &mut trace)?.1;
    let result = match result {
        Arrow::Kernel(k) if opts.normalize => Arrow::Kernel(kernel::normalize_rowwise(&k)?),
        other => other,
    };
    Ok(RunResult {
        semantics,
        tree,
        normalized: opts.normalize,
        result,
        trace: if opts.trace { trace } else { Vec::new() },
        query: s.query.clone(),
    })
}

fn fold(tree: &AssocTree, stages: &[Arrow], trace: &mut Vec<Step>) -> Result<(String, Arrow), CliError> {
    match tree {
        AssocTree::Leaf(i) => Ok((i.to_string(), stages[*i].clone())),
        AssocTree::Node(l, r) => {
            let (ls, la) = fold(l, stages, trace)?;
            let (rs, ra) = fold(r, stages, trace)?;
            let label = format!("({ls} {rs})");
            let value = compose(la, ra)?;
            trace.push(Step {
                tree: label.clone(),
                value: value.clone(),
            });
            Ok((label, value))
        }
    }
}

/// Convenience for tests and the acceptance suite.
pub fn final_kernel(r: &RunResult) -> Option<&Kernel> {
    match &r.result {
        Arrow::Kernel(k) => Some(k),
        Arrow::Relation(_) => None,
    }
}

pub fn final_relation(r: &RunResult) -> Option<&Relation> {
    match &r.result {
        Arrow::Relation(rel) => Some(rel),
        Arrow::Kernel(_) => None,
    }
}
