//! Relations with failure: the possibilistic side of each kernel flavor.
//!
//! | kernel flavor | relation flavor | rows                                  |
//! |---------------|-----------------|---------------------------------------|
//! | `Stoch`       | `Ne`            | non-empty subsets of `Y`              |
//! | `Sub`         | `Mm` (may-must) | non-empty subsets of `Y + ⊥`          |
//! | `Par`         | `Dk` (Dijkstra) | failure, or a non-empty subset of `Y` |
//! | `Norm`        | `Rel`           | any subset of `Y`; `∅` plays failure  |
//!
//! A `Rel` row never sets the failure flag: `MNY` is isomorphic to the
//! powerset of `Y` with failure sent to `∅`, and that encoding makes
//! `compose_rel` ordinary relational composition. [`supp_kernel`] maps each
//! kernel flavor to its relation flavor rowwise.

use std::collections::BTreeSet;
use std::fmt;

use serde::{Deserialize, Serialize};
use serde_json::{Map, Value};

use crate::dist::Dist;
use crate::error::{Error, Result};
use crate::finset::FinSet;
use crate::json::{BOTTOM_KEY, BOTTOM_ROW};
use crate::kernel::{Kernel, KernelFlavor};
use crate::show::Show;

/// A non-empty finite set: an element of `NX`.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct NeSet<A: Ord>(BTreeSet<A>);

impl<A: Ord + Clone> NeSet<A> {
    pub fn new(items: impl IntoIterator<Item = A>) -> Option<Self> {
        let s: BTreeSet<A> = items.into_iter().collect();
        if s.is_empty() {
            None
        } else {
            Some(NeSet(s))
        }
    }

    pub fn singleton(a: A) -> Self {
        NeSet(BTreeSet::from([a]))
    }

    pub fn iter(&self) -> impl Iterator<Item = &A> {
        self.0.iter()
    }

    pub fn contains(&self, a: &A) -> bool {
        self.0.contains(a)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn as_set(&self) -> &BTreeSet<A> {
        &self.0
    }

    pub fn map<B: Ord + Clone>(&self, f: impl Fn(&A) -> B) -> NeSet<B> {
        NeSet(self.0.iter().map(f).collect())
    }

    pub fn bind<B: Ord + Clone>(&self, f: impl Fn(&A) -> NeSet<B>) -> NeSet<B> {
        NeSet(self.0.iter().flat_map(|a| f(a).0).collect())
    }

    /// Removes one element; `None` if it was the only one.
    pub fn without(&self, a: &A) -> Option<Self> {
        let mut s = self.0.clone();
        s.remove(a);
        NeSet::new(s)
    }
}

impl<A: Ord + Show> Show for NeSet<A> {
    fn show(&self) -> String {
        self.0.show()
    }
}

impl<A: Ord + Show> fmt::Debug for NeSet<A> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.show())
    }
}

/// Support of a distribution; never empty.
pub fn supp_dist<A: Ord + Clone>(d: &Dist<A>) -> NeSet<A> {
    NeSet(d.support().cloned().collect())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum RelFlavor {
    Ne,
    Mm,
    Dk,
    Rel,
}

impl RelFlavor {
    pub const ALL: [RelFlavor; 4] = [RelFlavor::Ne, RelFlavor::Mm, RelFlavor::Dk, RelFlavor::Rel];

    pub fn name(self) -> &'static str {
        match self {
            RelFlavor::Ne => "ne",
            RelFlavor::Mm => "mm",
            RelFlavor::Dk => "dk",
            RelFlavor::Rel => "rel",
        }
    }

    pub fn admits(self, row: &RelRow) -> bool {
        match self {
            RelFlavor::Ne => !row.fails && !row.may.is_empty(),
            RelFlavor::Mm => row.fails || !row.may.is_empty(),
            RelFlavor::Dk => row.fails != !row.may.is_empty(),
            RelFlavor::Rel => !row.fails,
        }
    }

    /// The support target of each kernel flavor.
    pub fn of_kernel(k: KernelFlavor) -> RelFlavor {
        match k {
            KernelFlavor::Stoch => RelFlavor::Ne,
            KernelFlavor::Sub => RelFlavor::Mm,
            KernelFlavor::Par => RelFlavor::Dk,
            KernelFlavor::Norm => RelFlavor::Rel,
        }
    }
}

impl fmt::Display for RelFlavor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl std::str::FromStr for RelFlavor {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        RelFlavor::ALL
            .into_iter()
            .find(|k| k.name() == s)
            .ok_or_else(|| Error::Invalid(format!("unknown relation flavor {s:?}")))
    }
}

/// One row: the reachable outputs and whether failure is reachable.
#[derive(Debug, Clone, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct RelRow {
    pub may: BTreeSet<usize>,
    pub fails: bool,
}

impl RelRow {
    pub fn new(may: impl IntoIterator<Item = usize>, fails: bool) -> Self {
        RelRow {
            may: may.into_iter().collect(),
            fails,
        }
    }

    pub fn failure() -> Self {
        RelRow {
            may: BTreeSet::new(),
            fails: true,
        }
    }

    pub fn empty() -> Self {
        RelRow::default()
    }

    pub fn singleton(y: usize) -> Self {
        RelRow::new([y], false)
    }

    /// Pure failure in the flavor's own encoding.
    pub fn is_bottom_in(&self, flavor: RelFlavor) -> bool {
        match flavor {
            RelFlavor::Rel => self.may.is_empty(),
            _ => self.fails && self.may.is_empty(),
        }
    }
}

#[derive(Clone, PartialEq, Eq)]
pub struct Relation {
    flavor: RelFlavor,
    domain: FinSet,
    codomain: FinSet,
    rows: Vec<RelRow>,
}

impl Relation {
    pub fn new(flavor: RelFlavor, domain: FinSet, codomain: FinSet, rows: Vec<RelRow>) -> Result<Self> {
        if rows.len() != domain.len() {
            return Err(Error::Invalid(format!(
                "relation has {} rows but its domain has {} elements",
                rows.len(),
                domain.len()
            )));
        }
        for (i, row) in rows.iter().enumerate() {
            if row.may.iter().any(|&y| y >= codomain.len()) {
                return Err(Error::Invalid(format!(
                    "row {:?} leaves codomain {codomain}",
                    domain.label(i)
                )));
            }
            if !flavor.admits(row) {
                return Err(Error::RowContract {
                    row: domain.label(i).to_string(),
                    flavor: flavor.to_string(),
                    reason: "row shape not allowed".into(),
                });
            }
        }
        Ok(Relation {
            flavor,
            domain,
            codomain,
            rows,
        })
    }

    fn from_rows_unchecked(flavor: RelFlavor, domain: FinSet, codomain: FinSet, rows: Vec<RelRow>) -> Self {
        debug_assert!(rows.iter().all(|r| flavor.admits(r)));
        Relation {
            flavor,
            domain,
            codomain,
            rows,
        }
    }

    pub fn identity(flavor: RelFlavor, set: FinSet) -> Self {
        let rows = (0..set.len()).map(RelRow::singleton).collect();
        Relation::from_rows_unchecked(flavor, set.clone(), set, rows)
    }

    pub fn flavor(&self) -> RelFlavor {
        self.flavor
    }

    pub fn domain(&self) -> &FinSet {
        &self.domain
    }

    pub fn codomain(&self) -> &FinSet {
        &self.codomain
    }

    pub fn rows(&self) -> &[RelRow] {
        &self.rows
    }

    pub fn row(&self, x: usize) -> &RelRow {
        &self.rows[x]
    }

    /// Reinterprets the relation in another flavor, reading every row as a
    /// subset of `Y + ⊥` (a `Rel` row `∅` reads as `{⊥}`). Fails when some
    /// row has no counterpart in the target.
    pub fn coerce(&self, flavor: RelFlavor) -> Result<Relation> {
        let mut rows = Vec::with_capacity(self.rows.len());
        for (i, row) in self.rows.iter().enumerate() {
            let mut r = row.clone();
            if self.flavor == RelFlavor::Rel && r.may.is_empty() {
                r.fails = true;
            }
            if flavor == RelFlavor::Rel && r.fails {
                if r.may.is_empty() {
                    r.fails = false;
                } else {
                    return Err(Error::RowContract {
                        row: self.domain.label(i).to_string(),
                        flavor: flavor.to_string(),
                        reason: "failure mixed with outcomes".into(),
                    });
                }
            }
            if !flavor.admits(&r) {
                return Err(Error::RowContract {
                    row: self.domain.label(i).to_string(),
                    flavor: flavor.to_string(),
                    reason: format!("{} row does not fit", self.flavor),
                });
            }
            rows.push(r);
        }
        Ok(Relation {
            flavor,
            domain: self.domain.clone(),
            codomain: self.codomain.clone(),
            rows,
        })
    }

    fn require(&self, flavor: RelFlavor) -> Result<()> {
        if self.flavor != flavor {
            return Err(Error::Flavor {
                expected: flavor.to_string(),
                found: self.flavor.to_string(),
            });
        }
        Ok(())
    }

    pub fn row_text(&self, x: usize) -> String {
        let row = &self.rows[x];
        if self.flavor == RelFlavor::Dk && row.fails {
            return BOTTOM_ROW.into();
        }
        let mut parts: Vec<&str> = row.may.iter().map(|&y| self.codomain.label(y)).collect();
        if row.fails {
            parts.push(BOTTOM_KEY);
        }
        format!("{{{}}}", parts.join(", "))
    }

    pub fn to_json(&self) -> Value {
        let mut rows = Map::new();
        for (i, row) in self.rows.iter().enumerate() {
            let v = if self.flavor == RelFlavor::Dk && row.fails {
                Value::String(BOTTOM_ROW.into())
            } else {
                let mut items: Vec<Value> = row
                    .may
                    .iter()
                    .map(|&y| Value::String(self.codomain.label(y).to_string()))
                    .collect();
                if row.fails {
                    items.push(Value::String(BOTTOM_KEY.into()));
                }
                Value::Array(items)
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

    pub fn from_json_rows(flavor: RelFlavor, domain: FinSet, codomain: FinSet, rows: &Value) -> Result<Relation> {
        let obj = rows
            .as_object()
            .ok_or_else(|| Error::Invalid("relation rows must be an object".into()))?;
        let mut parsed: Vec<Option<RelRow>> = vec![None; domain.len()];
        for (label, v) in obj {
            let x = domain.require(label)?;
            let row = match v {
                Value::String(s) if s == BOTTOM_ROW => RelRow::failure(),
                Value::Array(items) => {
                    let mut row = RelRow::empty();
                    for item in items {
                        let l = item.as_str().ok_or_else(|| {
                            Error::Invalid(format!("row {label:?}: labels must be strings"))
                        })?;
                        if l == BOTTOM_KEY {
                            row.fails = true;
                        } else {
                            row.may.insert(codomain.require(l)?);
                        }
                    }
                    row
                }
                other => {
                    return Err(Error::Invalid(format!(
                        "row {label:?}: expected a list of labels or \"bottom\", found {other}"
                    )))
                }
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
        Relation::new(flavor, domain, codomain, rows)
    }

    pub fn from_json(v: &Value) -> Result<Relation> {
        let obj = v
            .as_object()
            .ok_or_else(|| Error::Invalid("relation must be an object".into()))?;
        let field = |k: &str| {
            obj.get(k)
                .ok_or_else(|| Error::Invalid(format!("relation is missing {k:?}")))
        };
        let flavor: RelFlavor = field("flavor")?
            .as_str()
            .ok_or_else(|| Error::Invalid("flavor must be a string".into()))?
            .parse()?;
        let domain: FinSet = serde_json::from_value(field("domain")?.clone())
            .map_err(|e| Error::Invalid(format!("domain: {e}")))?;
        let codomain: FinSet = serde_json::from_value(field("codomain")?.clone())
            .map_err(|e| Error::Invalid(format!("codomain: {e}")))?;
        Relation::from_json_rows(flavor, domain, codomain, field("rows")?)
    }
}

impl fmt::Debug for Relation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_json())
    }
}

fn check_composable(f: &Relation, g: &Relation) -> Result<()> {
    if f.codomain != g.domain {
        return Err(Error::Mismatch {
            left: f.codomain.to_string(),
            right: g.domain.to_string(),
        });
    }
    Ok(())
}

fn union_through(row: &RelRow, g: &Relation) -> BTreeSet<usize> {
    row.may
        .iter()
        .flat_map(|&y| g.rows[y].may.iter().copied())
        .collect()
}

fn composed(f: &Relation, g: &Relation, rows: Vec<RelRow>) -> Relation {
    Relation::from_rows_unchecked(f.flavor, f.domain.clone(), g.codomain.clone(), rows)
}

/// May-must composition: `(f;g)(x;z) = ∃y. f(x;y) ∧ g(y;z)` and
/// `(f;g)(x;⊥) = f(x;⊥) ∨ ∃y. f(x;y) ∧ g(y;⊥)`.
pub fn compose_mm(f: &Relation, g: &Relation) -> Result<Relation> {
    f.require(RelFlavor::Mm)?;
    g.require(RelFlavor::Mm)?;
    check_composable(f, g)?;
    let rows = f
        .rows
        .iter()
        .map(|row| RelRow {
            may: union_through(row, g),
            fails: row.fails || row.may.iter().any(|&y| g.rows[y].fails),
        })
        .collect();
    Ok(composed(f, g, rows))
}

/// Dijkstra composition: failure whenever failure is reachable, otherwise the
/// union of the continuations.
pub fn compose_dk(f: &Relation, g: &Relation) -> Result<Relation> {
    f.require(RelFlavor::Dk)?;
    g.require(RelFlavor::Dk)?;
    check_composable(f, g)?;
    let rows = f
        .rows
        .iter()
        .map(|row| {
            if row.fails || row.may.iter().any(|&y| g.rows[y].fails) {
                RelRow::failure()
            } else {
                RelRow::new(union_through(row, g), false)
            }
        })
        .collect();
    Ok(composed(f, g, rows))
}

/// Relational composition, `(f;g)(x) = ⋃_{y∈f(x)} g(y)`.
pub fn compose_rel(f: &Relation, g: &Relation) -> Result<Relation> {
    f.require(RelFlavor::Rel)?;
    g.require(RelFlavor::Rel)?;
    check_composable(f, g)?;
    let rows = f
        .rows
        .iter()
        .map(|row| RelRow::new(union_through(row, g), false))
        .collect();
    Ok(composed(f, g, rows))
}

/// Composition of total non-empty relations.
pub fn compose_ne(f: &Relation, g: &Relation) -> Result<Relation> {
    f.require(RelFlavor::Ne)?;
    g.require(RelFlavor::Ne)?;
    check_composable(f, g)?;
    let rows = f
        .rows
        .iter()
        .map(|row| RelRow::new(union_through(row, g), false))
        .collect();
    Ok(composed(f, g, rows))
}

pub fn compose(f: &Relation, g: &Relation) -> Result<Relation> {
    match f.flavor {
        RelFlavor::Ne => compose_ne(f, g),
        RelFlavor::Mm => compose_mm(f, g),
        RelFlavor::Dk => compose_dk(f, g),
        RelFlavor::Rel => compose_rel(f, g),
    }
}

/// Rowwise support: `Stoch → Ne`, `Sub → Mm`, `Par → Dk`, `Norm → Rel`.
/// Failure mass shows up as `⊥` in the set, except for `Norm`, where a
/// failing row becomes `∅`.
pub fn supp_kernel(k: &Kernel) -> Relation {
    let flavor = RelFlavor::of_kernel(k.flavor());
    let rows = k
        .rows()
        .iter()
        .map(|row| {
            let may: BTreeSet<usize> = row.support().copied().collect();
            let fails = row.bottom().is_positive() && flavor != RelFlavor::Rel;
            RelRow { may, fails }
        })
        .collect();
    Relation::from_rows_unchecked(flavor, k.domain().clone(), k.codomain().clone(), rows)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dist::SubDist;
    use crate::rational::q;

    fn set(labels: &[&str]) -> FinSet {
        FinSet::new(labels.iter().copied()).unwrap()
    }

    #[test]
    fn mm_composition_clauses() {
        let x = set(&["x"]);
        let y = set(&["y"]);
        let z = set(&["z"]);
        let f = Relation::new(RelFlavor::Mm, x.clone(), y.clone(), vec![RelRow::new([0], true)]).unwrap();
        let g = Relation::new(RelFlavor::Mm, y, z.clone(), vec![RelRow::new([0], false)]).unwrap();
        let fg = compose_mm(&f, &g).unwrap();
        assert_eq!(fg.row(0), &RelRow::new([0], true));

        let only_bot = Relation::new(RelFlavor::Mm, x, f.codomain().clone(), vec![RelRow::failure()]).unwrap();
        assert_eq!(compose_mm(&only_bot, &g).unwrap().row(0), &RelRow::failure());
    }

    #[test]
    fn dk_failure_clause() {
        let x = set(&["x"]);
        let yz = set(&["y", "z"]);
        let w = set(&["w"]);
        let f = Relation::new(RelFlavor::Dk, x, yz.clone(), vec![RelRow::new([0, 1], false)]).unwrap();
        let g = Relation::new(RelFlavor::Dk, yz, w, vec![RelRow::new([0], false), RelRow::failure()]).unwrap();
        let fg = compose_dk(&f, &g).unwrap();
        assert_eq!(fg.row_text(0), "bottom");
    }

    #[test]
    fn rel_empty_propagates() {
        let x = set(&["x"]);
        let y = set(&["y"]);
        let f = Relation::new(RelFlavor::Rel, x, y.clone(), vec![RelRow::singleton(0)]).unwrap();
        let g = Relation::new(RelFlavor::Rel, y.clone(), y, vec![RelRow::empty()]).unwrap();
        let fg = compose_rel(&f, &g).unwrap();
        assert_eq!(fg.row_text(0), "{}");
    }

    #[test]
    fn contracts() {
        assert!(!RelFlavor::Ne.admits(&RelRow::empty()));
        assert!(!RelFlavor::Mm.admits(&RelRow::empty()));
        assert!(RelFlavor::Mm.admits(&RelRow::failure()));
        assert!(!RelFlavor::Dk.admits(&RelRow::new([0], true)));
        assert!(RelFlavor::Dk.admits(&RelRow::failure()));
        assert!(!RelFlavor::Rel.admits(&RelRow::failure()));
        assert!(RelFlavor::Rel.admits(&RelRow::empty()));
    }

    #[test]
    fn coerce_rel_and_dk_are_isomorphic() {
        let s = set(&["a", "b"]);
        let r = Relation::new(RelFlavor::Rel, s.clone(), s.clone(), vec![RelRow::empty(), RelRow::singleton(1)]).unwrap();
        let dk = r.coerce(RelFlavor::Dk).unwrap();
        assert_eq!(dk.row(0), &RelRow::failure());
        assert_eq!(dk.coerce(RelFlavor::Rel).unwrap(), r);
        let mm = Relation::new(RelFlavor::Mm, s.clone(), s, vec![RelRow::new([0], true), RelRow::singleton(1)]).unwrap();
        assert!(mm.coerce(RelFlavor::Dk).is_err());
        assert!(mm.coerce(RelFlavor::Rel).is_err());
    }

    #[test]
    fn support_examples() {
        let d = Dist::uniform(["L", "M", "R"]).unwrap();
        assert_eq!(supp_dist(&d), NeSet::new(["L", "M", "R"]).unwrap());

        let x = set(&["x"]);
        let sub = Kernel::new(
            KernelFlavor::Sub,
            x.clone(),
            x.clone(),
            vec![SubDist::new([(0, q(1, 2))], q(1, 2)).unwrap()],
        )
        .unwrap();
        let r = supp_kernel(&sub);
        assert_eq!(r.flavor(), RelFlavor::Mm);
        assert_eq!(r.row_text(0), "{x, _bottom}");

        let norm = Kernel::partial(KernelFlavor::Norm, x.clone(), x, vec![None]).unwrap();
        assert_eq!(supp_kernel(&norm).row(0), &RelRow::empty());
    }

    #[test]
    fn json_round_trip() {
        let s = set(&["a", "b"]);
        let mm = Relation::new(RelFlavor::Mm, s.clone(), s.clone(), vec![RelRow::new([1, 0], true), RelRow::singleton(1)]).unwrap();
        let v = mm.to_json();
        assert_eq!(
            serde_json::to_string(&v["rows"]).unwrap(),
            r#"{"a":["a","b","_bottom"],"b":["b"]}"#
        );
        assert_eq!(Relation::from_json(&v).unwrap(), mm);
        let dk = Relation::new(RelFlavor::Dk, s.clone(), s, vec![RelRow::failure(), RelRow::singleton(0)]).unwrap();
        assert_eq!(Relation::from_json(&dk.to_json()).unwrap(), dk);
    }
}
