//! JSON forms for distributions over a labelled carrier.
//!
//! A distribution is an object from label to rational string, in the
//! carrier's order. A subdistribution may add the reserved key `"_bottom"`
//! for its failure mass.

use serde_json::{Map, Value};

use crate::dist::{Dist, SubDist};
use crate::error::{Error, Result};
use crate::finset::FinSet;
use crate::rational::Rational;

pub const BOTTOM_KEY: &str = "_bottom";
pub const BOTTOM_ROW: &str = "bottom";

fn weights_object<'a>(
    iter: impl Iterator<Item = (&'a usize, &'a Rational)>,
    carrier: &FinSet,
) -> Map<String, Value> {
    let mut pairs: Vec<(&usize, &Rational)> = iter.collect();
    pairs.sort_by_key(|(i, _)| **i);
    pairs
        .into_iter()
        .map(|(i, w)| (carrier.label(*i).to_string(), Value::String(w.to_string())))
        .collect()
}

pub fn dist_to_json(d: &Dist<usize>, carrier: &FinSet) -> Value {
    Value::Object(weights_object(d.iter(), carrier))
}

pub fn subdist_to_json(s: &SubDist<usize>, carrier: &FinSet) -> Value {
    let mut obj = weights_object(s.iter(), carrier);
    if s.bottom().is_positive() {
        obj.insert(BOTTOM_KEY.into(), Value::String(s.bottom().to_string()));
    }
    Value::Object(obj)
}

pub fn rational_from_json(v: &Value) -> Result<Rational> {
    match v {
        Value::String(s) => Ok(s.parse()?),
        other => Err(Error::Rational(crate::error::ParseRationalError::Malformed(
            other.to_string(),
        ))),
    }
}

/// Parses a (sub)distribution object. Without a `"_bottom"` key the weights
/// alone must sum to one.
pub fn subdist_from_json(v: &Value, carrier: &FinSet) -> Result<SubDist<usize>> {
    let obj = v
        .as_object()
        .ok_or_else(|| Error::Invalid(format!("expected an object of weights, found {v}")))?;
    let mut pairs = Vec::with_capacity(obj.len());
    let mut bottom = Rational::zero();
    for (k, w) in obj {
        let w = rational_from_json(w)?;
        if k == BOTTOM_KEY {
            bottom = w;
        } else {
            let i = carrier.require(k)?;
            if !w.is_positive() && !w.is_zero() {
                return Err(Error::NonPositiveWeight {
                    label: k.clone(),
                    weight: w.to_string(),
                });
            }
            pairs.push((i, w));
        }
    }
    SubDist::new(pairs, bottom)
}

pub fn dist_from_json(v: &Value, carrier: &FinSet) -> Result<Dist<usize>> {
    let s = subdist_from_json(v, carrier)?;
    s.cast_blackhole()
        .ok_or_else(|| Error::Invalid("a distribution cannot carry failure mass".into()))
}
