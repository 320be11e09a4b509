//! Finite distributions, subdistributions, and the maps between `DM` and `MD`.
//!
//! Weights live in a `BTreeMap` keyed by the outcome; zero weights are never
//! stored, so the key set is exactly the support and structural equality is
//! exact equality of distributions. Failure (`⊥`) is never a key: for
//! [`SubDist`] it is the separate `bottom` field, and for [`MaybeDist`] it is
//! `None`.

use std::collections::BTreeMap;
use std::fmt;

use crate::error::{Error, Result};
use crate::finset::FinSet;
use crate::rational::Rational;
use crate::show::Show;

/// A finite probability distribution with positive weights summing to one.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Dist<A: Ord> {
    weights: BTreeMap<A, Rational>,
}

/// Either failure (`None`) or a full distribution: an element of `MDX`.
pub type MaybeDist<A> = Option<Dist<A>>;

/// A distribution on `X` plus failure mass: an element of `DMX`.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct SubDist<A: Ord> {
    weights: BTreeMap<A, Rational>,
    bottom: Rational,
}

fn accumulate<A: Ord>(
    pairs: impl IntoIterator<Item = (A, Rational)>,
    show: impl Fn(&A) -> String,
) -> Result<BTreeMap<A, Rational>> {
    let mut weights: BTreeMap<A, Rational> = BTreeMap::new();
    for (a, w) in pairs {
        if w.is_negative() {
            return Err(Error::NonPositiveWeight {
                label: show(&a),
                weight: w.to_string(),
            });
        }
        if w.is_zero() {
            continue;
        }
        let slot = weights.entry(a).or_insert_with(Rational::zero);
        *slot = &*slot + &w;
    }
    Ok(weights)
}

impl<A: Ord + Clone> Dist<A> {
    /// Builds a distribution from `(outcome, weight)` pairs. Repeated outcomes
    /// are summed and zero weights dropped; the total must be exactly one.
    pub fn new(pairs: impl IntoIterator<Item = (A, Rational)>) -> Result<Self>
    where
        A: fmt::Debug,
    {
        let weights = accumulate(pairs, |a| format!("{a:?}"))?;
        let total: Rational = weights.values().sum();
        if !total.is_one() {
            return Err(Error::BadTotal(total.to_string()));
        }
        Ok(Dist { weights })
    }

    pub fn dirac(a: A) -> Self {
        let mut weights = BTreeMap::new();
        weights.insert(a, Rational::one());
        Dist { weights }
    }

    /// Uniform over the distinct items; `None` if there are none.
    pub fn uniform(items: impl IntoIterator<Item = A>) -> Option<Self> {
        let keys: std::collections::BTreeSet<A> = items.into_iter().collect();
        if keys.is_empty() {
            return None;
        }
        let w = Rational::new(1, keys.len() as i64);
        Some(Dist {
            weights: keys.into_iter().map(|k| (k, w.clone())).collect(),
        })
    }

    /// Weight of `a`, zero outside the support.
    pub fn weight(&self, a: &A) -> Rational {
        self.weights.get(a).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&A, &Rational)> {
        self.weights.iter()
    }

    pub fn support(&self) -> impl Iterator<Item = &A> {
        self.weights.keys()
    }

    pub fn len(&self) -> usize {
        self.weights.len()
    }

    pub fn is_empty(&self) -> bool {
        self.weights.is_empty()
    }

    pub fn is_point_mass(&self) -> bool {
        self.weights.len() == 1
    }

    /// Pushforward along `f`: preimage masses are summed.
    pub fn map<B: Ord + Clone>(&self, f: impl Fn(&A) -> B) -> Dist<B> {
        let mut out: BTreeMap<B, Rational> = BTreeMap::new();
        for (a, w) in &self.weights {
            let slot = out.entry(f(a)).or_insert_with(Rational::zero);
            *slot = &*slot + w;
        }
        Dist { weights: out }
    }

    /// Kleisli extension: `Σ_a d(a) · f(a)`.
    pub fn bind<B: Ord + Clone>(&self, f: impl Fn(&A) -> Dist<B>) -> Dist<B> {
        let mut out: BTreeMap<B, Rational> = BTreeMap::new();
        for (a, w) in &self.weights {
            for (b, v) in f(a).weights {
                let slot = out.entry(b).or_insert_with(Rational::zero);
                *slot = &*slot + &(w * &v);
            }
        }
        Dist { weights: out }
    }

    /// Independent joint distribution.
    pub fn tensor<B: Ord + Clone>(&self, other: &Dist<B>) -> Dist<(A, B)> {
        let mut weights = BTreeMap::new();
        for (a, w) in &self.weights {
            for (b, v) in &other.weights {
                weights.insert((a.clone(), b.clone()), w * v);
            }
        }
        Dist { weights }
    }

    /// Drops one support point and renormalizes the rest. `None` when that
    /// would leave nothing.
    pub fn without(&self, a: &A) -> Option<Self> {
        let w = self.weights.get(a)?;
        if self.weights.len() == 1 {
            return None;
        }
        let rest = w.complement();
        let weights = self
            .weights
            .iter()
            .filter(|(k, _)| *k != a)
            .map(|(k, v)| (k.clone(), v / &rest))
            .collect();
        Some(Dist { weights })
    }

    pub fn into_sub(self) -> SubDist<A> {
        SubDist {
            weights: self.weights,
            bottom: Rational::zero(),
        }
    }
}

impl<A: Ord + Clone> Dist<Dist<A>> {
    /// Monad multiplication: flattens a distribution of distributions.
    pub fn join(&self) -> Dist<A> {
        self.bind(Clone::clone)
    }
}

impl<A: Ord + Clone> SubDist<A> {
    /// Builds a subdistribution from weights on `X` and an explicit failure
    /// mass. Everything must sum to exactly one.
    pub fn new(pairs: impl IntoIterator<Item = (A, Rational)>, bottom: Rational) -> Result<Self>
    where
        A: fmt::Debug,
    {
        if bottom.is_negative() {
            return Err(Error::NonPositiveWeight {
                label: "_bottom".into(),
                weight: bottom.to_string(),
            });
        }
        let weights = accumulate(pairs, |a| format!("{a:?}"))?;
        let total: Rational = weights.values().sum::<Rational>() + &bottom;
        if !total.is_one() {
            return Err(Error::BadTotal(total.to_string()));
        }
        Ok(SubDist { weights, bottom })
    }

    /// All mass on failure.
    pub fn failure() -> Self {
        SubDist {
            weights: BTreeMap::new(),
            bottom: Rational::one(),
        }
    }

    pub fn dirac(a: A) -> Self {
        Dist::dirac(a).into_sub()
    }

    pub fn bottom(&self) -> &Rational {
        &self.bottom
    }

    /// Non-failure mass, `1 - bottom`.
    pub fn mass(&self) -> Rational {
        self.bottom.complement()
    }

    pub fn weight(&self, a: &A) -> Rational {
        self.weights.get(a).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&A, &Rational)> {
        self.weights.iter()
    }

    pub fn support(&self) -> impl Iterator<Item = &A> {
        self.weights.keys()
    }

    pub fn is_total(&self) -> bool {
        self.bottom.is_zero()
    }

    pub fn is_failure(&self) -> bool {
        self.bottom.is_one()
    }

    /// Kleisli extension in `DM`: failure stays failure, and each outcome
    /// continues through `f`.
    pub fn bind<B: Ord + Clone>(&self, f: impl Fn(&A) -> SubDist<B>) -> SubDist<B> {
        let mut out: BTreeMap<B, Rational> = BTreeMap::new();
        let mut bottom = self.bottom.clone();
        for (a, w) in &self.weights {
            let next = f(a);
            bottom = bottom + &(w * &next.bottom);
            for (b, v) in next.weights {
                let slot = out.entry(b).or_insert_with(Rational::zero);
                *slot = &*slot + &(w * &v);
            }
        }
        SubDist {
            weights: out,
            bottom,
        }
    }

    pub fn map<B: Ord + Clone>(&self, f: impl Fn(&A) -> B) -> SubDist<B> {
        self.bind(|a| SubDist::dirac(f(a)))
    }

    /// Views this as a distribution on `X + ⊥`, with `None` for `⊥`.
    pub fn to_option_dist(&self) -> Dist<Option<A>> {
        let mut weights: BTreeMap<Option<A>, Rational> = self
            .weights
            .iter()
            .map(|(k, v)| (Some(k.clone()), v.clone()))
            .collect();
        if self.bottom.is_positive() {
            weights.insert(None, self.bottom.clone());
        }
        Dist { weights }
    }

    pub fn from_option_dist(d: &Dist<Option<A>>) -> Self {
        let mut weights = BTreeMap::new();
        let mut bottom = Rational::zero();
        for (k, v) in d.iter() {
            match k {
                Some(a) => {
                    weights.insert(a.clone(), v.clone());
                }
                None => bottom = v.clone(),
            }
        }
        SubDist { weights, bottom }
    }

    /// Rescales the non-failure part to total mass one; `None` when there is
    /// no non-failure mass.
    pub fn normalize(&self) -> MaybeDist<A> {
        if self.bottom.is_one() {
            return None;
        }
        if self.bottom.is_zero() {
            return Some(Dist {
                weights: self.weights.clone(),
            });
        }
        let mass = self.mass();
        Some(Dist {
            weights: self
                .weights
                .iter()
                .map(|(k, v)| (k.clone(), v / &mass))
                .collect(),
        })
    }

    /// Black-hole cast: any failure mass at all means failure.
    pub fn cast_blackhole(&self) -> MaybeDist<A> {
        if self.bottom.is_zero() {
            Some(Dist {
                weights: self.weights.clone(),
            })
        } else {
            None
        }
    }

    /// Independent joint; a failure in either coordinate is a failure.
    pub fn tensor<B: Ord + Clone>(&self, other: &SubDist<B>) -> SubDist<(A, B)> {
        let mut weights = BTreeMap::new();
        for (a, w) in &self.weights {
            for (b, v) in &other.weights {
                weights.insert((a.clone(), b.clone()), w * v);
            }
        }
        let bottom = (self.mass() * other.mass()).complement();
        SubDist { weights, bottom }
    }
}

/// `n : DM → MD`.
pub fn normalize<A: Ord + Clone>(s: &SubDist<A>) -> MaybeDist<A> {
    s.normalize()
}

/// `(-)• : MD → DM`: failure goes to the failure point mass, a distribution to
/// itself.
pub fn include<A: Ord + Clone>(m: &MaybeDist<A>) -> SubDist<A> {
    match m {
        None => SubDist::failure(),
        Some(d) => d.clone().into_sub(),
    }
}

/// `(-)^⊥ : DM → MD`.
pub fn cast_blackhole<A: Ord + Clone>(s: &SubDist<A>) -> MaybeDist<A> {
    s.cast_blackhole()
}

pub fn tensor_sub<A: Ord + Clone, B: Ord + Clone>(
    s1: &SubDist<A>,
    s2: &SubDist<B>,
) -> SubDist<(A, B)> {
    s1.tensor(s2)
}

/// Tensor in `MD`: failure on either side absorbs.
pub fn tensor_maybe<A: Ord + Clone, B: Ord + Clone>(
    m1: &MaybeDist<A>,
    m2: &MaybeDist<B>,
) -> MaybeDist<(A, B)> {
    match (m1, m2) {
        (Some(a), Some(b)) => Some(a.tensor(b)),
        _ => None,
    }
}

/// Point mass on `label`, which must belong to `carrier`.
pub fn dirac(label: &str, carrier: &FinSet) -> Result<Dist<usize>> {
    Ok(Dist::dirac(carrier.require(label)?))
}

/// Pushforward along a total function.
pub fn pushforward<A: Ord + Clone, B: Ord + Clone>(d: &Dist<A>, f: impl Fn(&A) -> B) -> Dist<B> {
    d.map(f)
}

impl<A: Ord + Show> fmt::Debug for Dist<A> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.show())
    }
}

impl<A: Ord + Show> fmt::Debug for SubDist<A> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.show())
    }
}

impl<A: Ord + Show> Show for Dist<A> {
    fn show(&self) -> String {
        let parts: Vec<String> = self
            .weights
            .iter()
            .map(|(k, v)| format!("{}: {}", k.show(), v))
            .collect();
        format!("{{{}}}", parts.join(", "))
    }
}

impl<A: Ord + Show> Show for SubDist<A> {
    fn show(&self) -> String {
        let mut parts: Vec<String> = self
            .weights
            .iter()
            .map(|(k, v)| format!("{}: {}", k.show(), v))
            .collect();
        if self.bottom.is_positive() {
            parts.push(format!("⊥: {}", self.bottom));
        }
        format!("{{{}}}", parts.join(", "))
    }
}
