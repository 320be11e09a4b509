//! The three maps between `M D_H` and `D_H M` for the two tricocycloid
//! instances: `sub` embeds, `quas` fails on any failure, `norm` renormalizes.
//!
//! Over the interval `D_H` is finite distributions and the maps are the
//! exact-core ones. Over the one-point tricocycloid `D_H` is non-empty sets.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::dist::{self, MaybeDist, SubDist};
use crate::error::{Error, Result};
use crate::possibilistic::NeSet;
use crate::show::Show;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Instance {
    Interval,
    Terminal,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Construction {
    Sub,
    Quas,
    Norm,
}

impl fmt::Display for Instance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Instance::Interval => "interval",
            Instance::Terminal => "terminal",
        })
    }
}

impl FromStr for Instance {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "interval" => Ok(Instance::Interval),
            "terminal" => Ok(Instance::Terminal),
            _ => Err(Error::Invalid(format!("unknown tricocycloid instance {s:?}"))),
        }
    }
}

impl fmt::Display for Construction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Construction::Sub => "sub",
            Construction::Quas => "quas",
            Construction::Norm => "norm",
        })
    }
}

impl FromStr for Construction {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "sub" => Ok(Construction::Sub),
            "quas" => Ok(Construction::Quas),
            "norm" => Ok(Construction::Norm),
            _ => Err(Error::Invalid(format!("unknown construction {s:?}"))),
        }
    }
}

/// A value on either side of the maps, for either instance.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum DhValue<A: Ord + Show> {
    /// `D M A`: a subdistribution.
    Interval(SubDist<A>),
    /// `M D A`.
    IntervalMaybe(MaybeDist<A>),
    /// `N M A`: a non-empty set that may contain `⊥`.
    Terminal(NeSet<Option<A>>),
    /// `M N A`.
    TerminalMaybe(Option<NeSet<A>>),
}

impl<A: Ord + Show> DhValue<A> {
    fn shape(&self) -> &'static str {
        match self {
            DhValue::Interval(_) => "interval subdistribution",
            DhValue::IntervalMaybe(_) => "interval maybe-distribution",
            DhValue::Terminal(_) => "terminal set",
            DhValue::TerminalMaybe(_) => "terminal maybe-set",
        }
    }
}

/// `N M → M N`, dropping `⊥`.
pub fn terminal_normalize<A: Ord + Clone>(s: &NeSet<Option<A>>) -> Option<NeSet<A>> {
    NeSet::new(s.iter().flatten().cloned())
}

/// `N M → M N`, failing whenever `⊥` is possible.
pub fn terminal_blackhole<A: Ord + Clone>(s: &NeSet<Option<A>>) -> Option<NeSet<A>> {
    if s.contains(&None) {
        None
    } else {
        terminal_normalize(s)
    }
}

/// `M N → N M`.
pub fn terminal_include<A: Ord + Clone>(m: &Option<NeSet<A>>) -> NeSet<Option<A>> {
    match m {
        None => NeSet::singleton(None),
        Some(s) => s.map(|a| Some(a.clone())),
    }
}

pub fn dh_apply<A: Ord + Clone + Show>(
    instance: Instance,
    construction: Construction,
    input: &DhValue<A>,
) -> Result<DhValue<A>> {
    use Construction::*;
    use DhValue::*;
    let out = match (instance, construction, input) {
        (Instance::Interval, Sub, IntervalMaybe(m)) => Interval(dist::include(m)),
        (Instance::Interval, Quas, Interval(s)) => IntervalMaybe(dist::cast_blackhole(s)),
        (Instance::Interval, Norm, Interval(s)) => IntervalMaybe(dist::normalize(s)),
        (Instance::Terminal, Sub, TerminalMaybe(m)) => Terminal(terminal_include(m)),
        (Instance::Terminal, Quas, Terminal(s)) => TerminalMaybe(terminal_blackhole(s)),
        (Instance::Terminal, Norm, Terminal(s)) => TerminalMaybe(terminal_normalize(s)),
        (_, _, v) => {
            let expected = match (instance, construction) {
                (Instance::Interval, Sub) => "interval maybe-distribution",
                (Instance::Interval, _) => "interval subdistribution",
                (Instance::Terminal, Sub) => "terminal maybe-set",
                (Instance::Terminal, _) => "terminal set",
            };
            return Err(Error::Flavor {
                expected: format!("{expected} for {instance} {construction}"),
                found: v.shape().into(),
            });
        }
    };
    Ok(out)
}
