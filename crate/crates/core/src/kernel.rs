//! Finite kernels in four flavors and their compositions.
//!
//! Every kernel stores one [`SubDist`] per domain element, indexed into the
//! codomain. The flavor constrains what a row may look like:
//!
//! | flavor  | row contract                    | composition            |
//! |---------|---------------------------------|------------------------|
//! | `Stoch` | no failure mass                 | Kleisli in `D`         |
//! | `Sub`   | any subdistribution             | Kleisli in `DM`        |
//! | `Par`   | failure mass is `0` or `1`      | black-hole composition |
//! | `Norm`  | failure mass is `0` or `1`      | normalized composition |
//!
//! `Par` and `Norm` share their hom-sets (`X → MDY`); only composition differs.
//! Normalized composition is not associative, so [`fold_pipeline`] takes an
//! explicit [`AssocTree`].

use std::fmt;

use serde::{Deserialize, Serialize};
use serde_json::{Map, Value};

use crate::dist::{Dist, MaybeDist, SubDist};
use crate::error::{Error, Result};
use crate::finset::FinSet;
use crate::json::{subdist_from_json, subdist_to_json, BOTTOM_ROW};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum KernelFlavor {
    Stoch,
    Sub,
    Par,
    Norm,
}

impl KernelFlavor {
    pub const ALL: [KernelFlavor; 4] = [
        KernelFlavor::Stoch,
        KernelFlavor::Sub,
        KernelFlavor::Par,
        KernelFlavor::Norm,
    ];

    pub fn name(self) -> &'static str {
        match self {
            KernelFlavor::Stoch => "stoch",
            KernelFlavor::Sub => "sub",
            KernelFlavor::Par => "par",
            KernelFlavor::Norm => "norm",
        }
    }

    /// Whether `row` satisfies this flavor's contract.
    pub fn admits(self, row: &SubDist<usize>) -> bool {
        match self {
            KernelFlavor::Stoch => row.is_total(),
            KernelFlavor::Sub => true,
            KernelFlavor::Par | KernelFlavor::Norm => row.is_total() || row.is_failure(),
        }
    }

    /// Associativity of composition holds for every flavor but `Norm`.
    pub fn is_category(self) -> bool {
        self != KernelFlavor::Norm
    }
}

impl fmt::Display for KernelFlavor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl std::str::FromStr for KernelFlavor {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        KernelFlavor::ALL
            .into_iter()
            .find(|k| k.name() == s)
            .ok_or_else(|| Error::Invalid(format!("unknown kernel flavor {s:?}")))
    }
}

#[derive(Clone, PartialEq, Eq)]
pub struct Kernel {
    flavor: KernelFlavor,
    domain: FinSet,
    codomain: FinSet,
    rows: Vec<SubDist<usize>>,
}

impl Kernel {
    pub fn new(
        flavor: KernelFlavor,
        domain: FinSet,
        codomain: FinSet,
        rows: Vec<SubDist<usize>>,
    ) -> Result<Self> {
        if rows.len() != domain.len() {
            return Err(Error::Invalid(format!(
                "kernel has {} rows but its domain has {} elements",
                rows.len(),
                domain.len()
            )));
        }
        for (i, row) in rows.iter().enumerate() {
            if let Some(&y) = row.support().find(|&&y| y >= codomain.len()) {
                return Err(Error::Invalid(format!(
                    "row {:?} mentions index {y} outside codomain {codomain}",
                    domain.label(i)
                )));
            }
            if !flavor.admits(row) {
                return Err(Error::RowContract {
                    row: domain.label(i).to_string(),
                    flavor: flavor.to_string(),
                    reason: format!("failure mass {} not allowed", row.bottom()),
                });
            }
        }
        Ok(Kernel {
            flavor,
            domain,
            codomain,
            rows,
        })
    }

    fn from_rows_unchecked(
        flavor: KernelFlavor,
        domain: FinSet,
        codomain: FinSet,
        rows: Vec<SubDist<usize>>,
    ) -> Self {
        debug_assert!(rows.iter().all(|r| flavor.admits(r)));
        Kernel {
            flavor,
            domain,
            codomain,
            rows,
        }
    }

    pub fn stoch(domain: FinSet, codomain: FinSet, rows: Vec<Dist<usize>>) -> Result<Self> {
        let rows = rows.into_iter().map(Dist::into_sub).collect();
        Kernel::new(KernelFlavor::Stoch, domain, codomain, rows)
    }

    /// A `Par` or `Norm` kernel from rows in `MD`.
    pub fn partial(
        flavor: KernelFlavor,
        domain: FinSet,
        codomain: FinSet,
        rows: Vec<MaybeDist<usize>>,
    ) -> Result<Self> {
        let rows = rows.iter().map(crate::dist::include).collect();
        Kernel::new(flavor, domain, codomain, rows)
    }

    pub fn identity(flavor: KernelFlavor, set: FinSet) -> Self {
        let rows = (0..set.len()).map(SubDist::dirac).collect();
        Kernel::from_rows_unchecked(flavor, set.clone(), set, rows)
    }

    pub fn flavor(&self) -> KernelFlavor {
        self.flavor
    }

    pub fn domain(&self) -> &FinSet {
        &self.domain
    }

    pub fn codomain(&self) -> &FinSet {
        &self.codomain
    }

    pub fn rows(&self) -> &[SubDist<usize>] {
        &self.rows
    }

    pub fn row(&self, x: usize) -> &SubDist<usize> {
        &self.rows[x]
    }

    /// The row as an element of `MD`. Only meaningful for rows whose failure
    /// mass is `0` or `1`; a genuinely partial row maps to `None`.
    pub fn maybe_row(&self, x: usize) -> MaybeDist<usize> {
        self.rows[x].cast_blackhole()
    }

    pub fn row_by_label(&self, label: &str) -> Result<&SubDist<usize>> {
        Ok(&self.rows[self.domain.require(label)?])
    }

    /// Reinterprets the kernel in another flavor. Succeeds exactly when every
    /// row satisfies the target contract; for `Par`/`Norm` into `Sub` this is
    /// the inclusion `MD → DM`.
    pub fn coerce(&self, flavor: KernelFlavor) -> Result<Kernel> {
        if let Some(i) = self.rows.iter().position(|r| !flavor.admits(r)) {
            return Err(Error::RowContract {
                row: self.domain.label(i).to_string(),
                flavor: flavor.to_string(),
                reason: format!(
                    "{} kernel row has failure mass {}",
                    self.flavor,
                    self.rows[i].bottom()
                ),
            });
        }
        Ok(Kernel {
            flavor,
            ..self.clone()
        })
    }

    /// True when every row is failure or a point mass.
    pub fn is_deterministic_partial(&self) -> bool {
        self.rows
            .iter()
            .all(|r| r.is_failure() || (r.is_total() && r.support().count() == 1))
    }

    /// Equality that ignores labels: same flavor, same carrier sizes, same
    /// rows by index. Products are laid out row-major, so `(X×Y)×Z` and
    /// `X×(Y×Z)` compare equal here.
    pub fn eq_up_to_relabeling(&self, other: &Kernel) -> bool {
        self.flavor == other.flavor
            && self.domain.len() == other.domain.len()
            && self.codomain.len() == other.codomain.len()
            && self.rows == other.rows
    }

    fn require(&self, flavor: KernelFlavor) -> Result<()> {
        if self.flavor != flavor {
            return Err(Error::Flavor {
                expected: flavor.to_string(),
                found: self.flavor.to_string(),
            });
        }
        Ok(())
    }

    pub fn to_json(&self) -> Value {
        let mut rows = Map::new();
        for (i, row) in self.rows.iter().enumerate() {
            let v = match self.flavor {
                KernelFlavor::Par | KernelFlavor::Norm if row.is_failure() => {
                    Value::String(BOTTOM_ROW.into())
                }
                _ => subdist_to_json(row, &self.codomain),
            };
            rows.insert(self.domain.label(i).to_string(), v);
        }
        let mut obj = Map::new();
        obj.insert("flavor".into(), Value::String(self.flavor.to_string()));
        obj.insert("domain".into(), serde_json::to_value(&self.domain).unwrap());
        obj.insert("codomain".into(), serde_json::to_value(&self.codomain).unwrap());
        obj.insert("rows".into(), Value::Object(rows));
        Value::Object(obj)
    }

    /// Parses the `rows` object of a kernel whose carriers are already known.
    /// Every domain label must have exactly one row.
    pub fn from_json_rows(
        flavor: KernelFlavor,
        domain: FinSet,
        codomain: FinSet,
        rows: &Value,
    ) -> Result<Kernel> {
        let obj = rows
            .as_object()
            .ok_or_else(|| Error::Invalid("kernel rows must be an object".into()))?;
        let mut parsed: Vec<Option<SubDist<usize>>> = vec![None; domain.len()];
        for (label, v) in obj {
            let x = domain.require(label)?;
            let row = match v {
                Value::String(s) if s == BOTTOM_ROW => match flavor {
                    KernelFlavor::Par | KernelFlavor::Norm | KernelFlavor::Sub => {
                        SubDist::failure()
                    }
                    KernelFlavor::Stoch => {
                        return Err(Error::RowContract {
                            row: label.clone(),
                            flavor: flavor.to_string(),
                            reason: "stochastic rows cannot fail".into(),
                        })
                    }
                },
                other => subdist_from_json(other, &codomain).map_err(|e| match e {
                    Error::BadTotal(t) => Error::RowContract {
                        row: label.clone(),
                        flavor: flavor.to_string(),
                        reason: format!("masses sum to {t}, expected 1"),
                    },
                    e => e,
                })?,
            };
            parsed[x] = Some(row);
        }
        let rows = parsed
            .into_iter()
            .enumerate()
            .map(|(i, r)| {
                r.ok_or_else(|| Error::Invalid(format!("missing row for {:?}", domain.label(i))))
            })
            .collect::<Result<Vec<_>>>()?;
        Kernel::new(flavor, domain, codomain, rows)
    }

    /// Parses the standalone form `{"flavor", "domain", "codomain", "rows"}`
    /// with carriers given as label arrays.
    pub fn from_json(v: &Value) -> Result<Kernel> {
        let obj = v
            .as_object()
            .ok_or_else(|| Error::Invalid("kernel must be an object".into()))?;
        let field = |k: &str| {
            obj.get(k)
                .ok_or_else(|| Error::Invalid(format!("kernel is missing {k:?}")))
        };
        let flavor: KernelFlavor = field("flavor")?
            .as_str()
            .ok_or_else(|| Error::Invalid("flavor must be a string".into()))?
            .parse()?;
        let domain: FinSet = serde_json::from_value(field("domain")?.clone())
            .map_err(|e| Error::Invalid(format!("domain: {e}")))?;
        let codomain: FinSet = serde_json::from_value(field("codomain")?.clone())
            .map_err(|e| Error::Invalid(format!("codomain: {e}")))?;
        Kernel::from_json_rows(flavor, domain, codomain, field("rows")?)
    }
}

impl fmt::Debug for Kernel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_json())
    }
}

fn check_composable(f: &Kernel, g: &Kernel) -> Result<()> {
    if f.codomain != g.domain {
        return Err(Error::Mismatch {
            left: f.codomain.to_string(),
            right: g.domain.to_string(),
        });
    }
    Ok(())
}

fn sub_rows(f: &Kernel, g: &Kernel) -> Vec<SubDist<usize>> {
    f.rows
        .iter()
        .map(|row| row.bind(|&y| g.rows[y].clone()))
        .collect()
}

/// Composition in the category of subdistributions:
/// `(f;g)(x;z) = Σ_y f(x;y)·g(y;z)` and
/// `(f;g)(x;⊥) = f(x;⊥) + Σ_y f(x;y)·g(y;⊥)`.
pub fn compose_sub(f: &Kernel, g: &Kernel) -> Result<Kernel> {
    f.require(KernelFlavor::Sub)?;
    g.require(KernelFlavor::Sub)?;
    check_composable(f, g)?;
    Ok(Kernel::from_rows_unchecked(
        KernelFlavor::Sub,
        f.domain.clone(),
        g.codomain.clone(),
        sub_rows(f, g),
    ))
}

/// Composition of stochastic kernels.
pub fn compose_stoch(f: &Kernel, g: &Kernel) -> Result<Kernel> {
    f.require(KernelFlavor::Stoch)?;
    g.require(KernelFlavor::Stoch)?;
    check_composable(f, g)?;
    Ok(Kernel::from_rows_unchecked(
        KernelFlavor::Stoch,
        f.domain.clone(),
        g.codomain.clone(),
        sub_rows(f, g),
    ))
}

/// Black-hole composition: the row fails if `f(x)` fails or any `y` it can
/// reach has `g(y)` failing; otherwise it is the ordinary total composite.
pub fn compose_par(f: &Kernel, g: &Kernel) -> Result<Kernel> {
    f.require(KernelFlavor::Par)?;
    g.require(KernelFlavor::Par)?;
    check_composable(f, g)?;
    let rows = f
        .rows
        .iter()
        .map(|row| {
            if row.is_failure() || row.support().any(|&y| g.rows[y].is_failure()) {
                SubDist::failure()
            } else {
                row.bind(|&y| g.rows[y].clone())
            }
        })
        .collect();
    Ok(Kernel::from_rows_unchecked(
        KernelFlavor::Par,
        f.domain.clone(),
        g.codomain.clone(),
        rows,
    ))
}

fn normalize_rows(rows: Vec<SubDist<usize>>) -> Vec<SubDist<usize>> {
    rows.iter()
        .map(|r| crate::dist::include(&r.normalize()))
        .collect()
}

/// Normalized composition: the rowwise normalization of the composite of the
/// included subdistribution kernels. A failing row stays failing.
pub fn compose_norm(f: &Kernel, g: &Kernel) -> Result<Kernel> {
    f.require(KernelFlavor::Norm)?;
    g.require(KernelFlavor::Norm)?;
    check_composable(f, g)?;
    Ok(Kernel::from_rows_unchecked(
        KernelFlavor::Norm,
        f.domain.clone(),
        g.codomain.clone(),
        normalize_rows(sub_rows(f, g)),
    ))
}

/// Composition under the kernels' common flavor.
pub fn compose(f: &Kernel, g: &Kernel) -> Result<Kernel> {
    match f.flavor {
        KernelFlavor::Stoch => compose_stoch(f, g),
        KernelFlavor::Sub => compose_sub(f, g),
        KernelFlavor::Par => compose_par(f, g),
        KernelFlavor::Norm => compose_norm(f, g),
    }
}

/// Rowwise normalization of a subdistribution kernel into a `Norm` kernel.
pub fn normalize_rowwise(f: &Kernel) -> Result<Kernel> {
    f.require(KernelFlavor::Sub)?;
    Ok(Kernel::from_rows_unchecked(
        KernelFlavor::Norm,
        f.domain.clone(),
        f.codomain.clone(),
        normalize_rows(f.rows.clone()),
    ))
}

/// Rowwise black-hole cast of a subdistribution kernel into a `Par` kernel.
pub fn cast_rowwise(f: &Kernel) -> Result<Kernel> {
    f.require(KernelFlavor::Sub)?;
    let rows = f
        .rows
        .iter()
        .map(|r| crate::dist::include(&r.cast_blackhole()))
        .collect();
    Ok(Kernel::from_rows_unchecked(
        KernelFlavor::Par,
        f.domain.clone(),
        f.codomain.clone(),
        rows,
    ))
}

/// Inclusion of a `Norm` or `Par` kernel into subdistribution kernels.
pub fn include_kernel(f: &Kernel) -> Result<Kernel> {
    match f.flavor {
        KernelFlavor::Norm | KernelFlavor::Par => f.coerce(KernelFlavor::Sub),
        other => Err(Error::Flavor {
            expected: "norm or par".into(),
            found: other.to_string(),
        }),
    }
}

/// Action of subdistribution kernels on normalized ones:
/// `p ≺ f = n(p• ; f)`.
pub fn act(p: &Kernel, f: &Kernel) -> Result<Kernel> {
    p.require(KernelFlavor::Norm)?;
    f.require(KernelFlavor::Sub)?;
    check_composable(p, f)?;
    Ok(Kernel::from_rows_unchecked(
        KernelFlavor::Norm,
        p.domain.clone(),
        f.codomain.clone(),
        normalize_rows(sub_rows(p, f)),
    ))
}

/// Parallel product of two kernels of the same flavor. Row `(x1,x2)` is the
/// independent joint of the factor rows; failure mass combines as
/// `1 - (1-b1)(1-b2)`, so a failing factor row makes the product row fail.
pub fn tensor(f1: &Kernel, f2: &Kernel) -> Result<Kernel> {
    if f1.flavor != f2.flavor {
        return Err(Error::Flavor {
            expected: f1.flavor.to_string(),
            found: f2.flavor.to_string(),
        });
    }
    let n2 = f2.codomain.len();
    let mut rows = Vec::with_capacity(f1.rows.len() * f2.rows.len());
    for r1 in &f1.rows {
        for r2 in &f2.rows {
            rows.push(r1.tensor(r2).map(|&(a, b)| a * n2 + b));
        }
    }
    Ok(Kernel::from_rows_unchecked(
        f1.flavor,
        f1.domain.product(&f2.domain),
        f1.codomain.product(&f2.codomain),
        rows,
    ))
}

/// Tensor of normalized kernels: `(f1⊗f2)(x1,x2;y1,y2) = f1(x1;y1)·f2(x2;y2)`,
/// failure-absorbing.
pub fn tensor_norm(f1: &Kernel, f2: &Kernel) -> Result<Kernel> {
    f1.require(KernelFlavor::Norm)?;
    tensor(f1, f2)
}

/// Outcome of [`check_associating`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Associating {
    Holds,
    Fails(Box<AssociatingWitness>),
}

/// A pair `(f, g)` for which `(f⊛h)⊛g ≠ f⊛(h⊛g)`, with both composites.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AssociatingWitness {
    pub pair_index: usize,
    pub left_assoc: Kernel,
    pub right_assoc: Kernel,
}

impl Associating {
    pub fn holds(&self) -> bool {
        matches!(self, Associating::Holds)
    }
}

/// Tests `f⊛(h⊛g) = (f⊛h)⊛g` for each given pair, reporting the first
/// failure with both composites.
pub fn check_associating(h: &Kernel, pairs: &[(Kernel, Kernel)]) -> Result<Associating> {
    h.require(KernelFlavor::Norm)?;
    for (i, (f, g)) in pairs.iter().enumerate() {
        let left_assoc = compose_norm(&compose_norm(f, h)?, g)?;
        let right_assoc = compose_norm(f, &compose_norm(h, g)?)?;
        if left_assoc != right_assoc {
            return Ok(Associating::Fails(Box::new(AssociatingWitness {
                pair_index: i,
                left_assoc,
                right_assoc,
            })));
        }
    }
    Ok(Associating::Holds)
}

/// A bracketing of a pipeline; leaves are pipeline positions.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum AssocTree {
    Leaf(usize),
    Node(Box<AssocTree>, Box<AssocTree>),
}

impl AssocTree {
    pub fn node(l: AssocTree, r: AssocTree) -> Self {
        AssocTree::Node(Box::new(l), Box::new(r))
    }

    /// `((0 1) 2) ...`
    pub fn left(n: usize) -> Self {
        assert!(n > 0, "empty pipeline");
        (1..n).fold(AssocTree::Leaf(0), |acc, i| {
            AssocTree::node(acc, AssocTree::Leaf(i))
        })
    }

    /// `0 (1 (2 ...))`
    pub fn right(n: usize) -> Self {
        assert!(n > 0, "empty pipeline");
        (0..n - 1).rev().fold(AssocTree::Leaf(n - 1), |acc, i| {
            AssocTree::node(AssocTree::Leaf(i), acc)
        })
    }

    pub fn leaves(&self) -> Vec<usize> {
        let mut out = Vec::new();
        self.collect_leaves(&mut out);
        out
    }

    fn collect_leaves(&self, out: &mut Vec<usize>) {
        match self {
            AssocTree::Leaf(i) => out.push(*i),
            AssocTree::Node(l, r) => {
                l.collect_leaves(out);
                r.collect_leaves(out);
            }
        }
    }

    /// Folds bottom-up, left subtree before right.
    pub fn fold<T, E>(
        &self,
        leaf: &mut impl FnMut(usize) -> std::result::Result<T, E>,
        node: &mut impl FnMut(T, T) -> std::result::Result<T, E>,
    ) -> std::result::Result<T, E> {
        match self {
            AssocTree::Leaf(i) => leaf(*i),
            AssocTree::Node(l, r) => {
                let a = l.fold(leaf, node)?;
                let b = r.fold(leaf, node)?;
                node(a, b)
            }
        }
    }
}

impl fmt::Display for AssocTree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            AssocTree::Leaf(i) => write!(f, "{i}"),
            AssocTree::Node(l, r) => write!(f, "({l} {r})"),
        }
    }
}

/// Composes a chain of kernels in the bracketing given by `tree`, after
/// coercing each to `flavor`.
pub fn fold_pipeline(kernels: &[Kernel], tree: &AssocTree, flavor: KernelFlavor) -> Result<Kernel> {
    let leaves = tree.leaves();
    if leaves != (0..kernels.len()).collect::<Vec<_>>() {
        return Err(Error::Invalid(format!(
            "association tree leaves {leaves:?} do not match a pipeline of length {}",
            kernels.len()
        )));
    }
    let coerced = kernels
        .iter()
        .map(|k| k.coerce(flavor))
        .collect::<Result<Vec<_>>>()?;
    tree.fold(&mut |i| Ok(coerced[i].clone()), &mut |a, b| compose(&a, &b))
}
