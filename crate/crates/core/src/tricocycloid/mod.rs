//! Symmetric tricocycloids: the guard algebras of binary guarded choice.
//!
//! A tricocycloid supplies a commutator `p*` and two jointly invertible
//! associators `•`, `∘` so that guarded choice `x ⊕_p y` can be rewritten by
//! `x ⊕_p y = y ⊕_{p*} x` and `(x ⊕_q y) ⊕_p z = x ⊕_{p•q} (y ⊕_{p∘q} z)`.
//! Two instances are provided: the open interval `(0, 1)` of probabilities
//! and the one-point set of pure non-determinism.
//!
//! Axioms are never assumed. [`check_axioms`] and [`check_derived_equations`]
//! evaluate them exactly on sampled guards.

pub mod dh;
pub mod term;

use std::fmt;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::random::{self, TestRng};
use crate::rational::Rational;

pub trait Tricocycloid {
    type Guard: Clone + Eq + fmt::Debug + fmt::Display;

    fn name(&self) -> &str;
    fn star(&self, p: &Self::Guard) -> Self::Guard;
    fn bullet(&self, p: &Self::Guard, q: &Self::Guard) -> Self::Guard;
    fn circ(&self, p: &Self::Guard, q: &Self::Guard) -> Self::Guard;
    fn bullet_inv(&self, a: &Self::Guard, b: &Self::Guard) -> Self::Guard;
    fn circ_inv(&self, a: &Self::Guard, b: &Self::Guard) -> Self::Guard;
    fn sample_guard(&self, rng: &mut TestRng) -> Self::Guard;
}

/// A probability strictly between 0 and 1.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct IntervalGuard(Rational);

impl IntervalGuard {
    pub fn new(p: Rational) -> Result<Self> {
        if p.in_open_unit() {
            Ok(IntervalGuard(p))
        } else {
            Err(Error::GuardDomain(p.to_string()))
        }
    }

    pub fn value(&self) -> &Rational {
        &self.0
    }

    pub fn into_value(self) -> Rational {
        self.0
    }
}

impl fmt::Display for IntervalGuard {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(&self.0, f)
    }
}

impl fmt::Debug for IntervalGuard {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(&self.0, f)
    }
}

/// The interval tricocycloid: `p* = 1-p`, `p•q = pq`,
/// `p∘q = p(1-q)/(1-pq)`.
///
/// The inverses solve `a = pq`, `b = p(1-q)/(1-pq)` for `(p, q)`:
/// `p = a + b(1-a)` and `q = a / (a + b(1-a))`.
#[derive(Debug, Clone, Copy)]
pub struct Interval {
    /// Guards are sampled from `{1/N, ..., (N-1)/N}`.
    pub grid: u64,
}

impl Default for Interval {
    fn default() -> Self {
        Interval { grid: 64 }
    }
}

impl Tricocycloid for Interval {
    type Guard = IntervalGuard;

    fn name(&self) -> &str {
        "interval"
    }

    fn star(&self, p: &IntervalGuard) -> IntervalGuard {
        IntervalGuard(p.0.complement())
    }

    fn bullet(&self, p: &IntervalGuard, q: &IntervalGuard) -> IntervalGuard {
        IntervalGuard(&p.0 * &q.0)
    }

    fn circ(&self, p: &IntervalGuard, q: &IntervalGuard) -> IntervalGuard {
        let num = &p.0 * &q.0.complement();
        let den = (&p.0 * &q.0).complement();
        IntervalGuard(num / den)
    }

    fn bullet_inv(&self, a: &IntervalGuard, b: &IntervalGuard) -> IntervalGuard {
        IntervalGuard(&a.0 + &(&b.0 * &a.0.complement()))
    }

    fn circ_inv(&self, a: &IntervalGuard, b: &IntervalGuard) -> IntervalGuard {
        let p = &a.0 + &(&b.0 * &a.0.complement());
        IntervalGuard(&a.0 / &p)
    }

    fn sample_guard(&self, rng: &mut TestRng) -> IntervalGuard {
        IntervalGuard(random::grid_guard(rng, self.grid))
    }
}

/// The single guard of the terminal tricocycloid.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Star;

impl fmt::Display for Star {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("*")
    }
}

/// The one-point tricocycloid; every operation returns `*`.
#[derive(Debug, Clone, Copy, Default)]
pub struct Terminal;

impl Tricocycloid for Terminal {
    type Guard = Star;

    fn name(&self) -> &str {
        "terminal"
    }

    fn star(&self, _: &Star) -> Star {
        Star
    }

    fn bullet(&self, _: &Star, _: &Star) -> Star {
        Star
    }

    fn circ(&self, _: &Star, _: &Star) -> Star {
        Star
    }

    fn bullet_inv(&self, _: &Star, _: &Star) -> Star {
        Star
    }

    fn circ_inv(&self, _: &Star, _: &Star) -> Star {
        Star
    }

    fn sample_guard(&self, _: &mut TestRng) -> Star {
        Star
    }
}

/// A failed equation with the guards that break it.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct EquationFailure {
    /// 1-based index into the checked list.
    pub index: usize,
    pub equation: &'static str,
    pub p: String,
    pub q: String,
    pub r: String,
    pub lhs: String,
    pub rhs: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "verdict", rename_all = "lowercase")]
pub enum Verdict {
    Pass { samples: usize },
    Fail(Box<EquationFailure>),
}

impl Verdict {
    pub fn passed(&self) -> bool {
        matches!(self, Verdict::Pass { .. })
    }

    pub fn failure(&self) -> Option<&EquationFailure> {
        match self {
            Verdict::Pass { .. } => None,
            Verdict::Fail(f) => Some(f),
        }
    }
}

type Equation<T> = (
    &'static str,
    fn(&T, &<T as Tricocycloid>::Guard, &<T as Tricocycloid>::Guard, &<T as Tricocycloid>::Guard)
        -> (<T as Tricocycloid>::Guard, <T as Tricocycloid>::Guard),
);

/// The eight axioms, in order, each as `(lhs, rhs)` of `(p, q, r)`.
pub fn axioms<T: Tricocycloid>() -> Vec<Equation<T>> {
    vec![
        ("p** = p", |t, p, _, _| (t.star(&t.star(p)), p.clone())),
        ("(p • q) •⁻¹ (p ∘ q) = p", |t, p, q, _| {
            (t.bullet_inv(&t.bullet(p, q), &t.circ(p, q)), p.clone())
        }),
        ("(p • q) ∘⁻¹ (p ∘ q) = q", |t, p, q, _| {
            (t.circ_inv(&t.bullet(p, q), &t.circ(p, q)), q.clone())
        }),
        ("(p • q)* • (p ∘ q) = p • q*", |t, p, q, _| {
            (
                t.bullet(&t.star(&t.bullet(p, q)), &t.circ(p, q)),
                t.bullet(p, &t.star(q)),
            )
        }),
        ("(p • q)* ∘ (p ∘ q) = (p ∘ q*)*", |t, p, q, _| {
            (
                t.circ(&t.star(&t.bullet(p, q)), &t.circ(p, q)),
                t.star(&t.circ(p, &t.star(q))),
            )
        }),
        ("p • (q • r) = (p • q) • r", |t, p, q, r| {
            (t.bullet(p, &t.bullet(q, r)), t.bullet(&t.bullet(p, q), r))
        }),
        ("(p • q) ∘ r = (p ∘ (q • r)) • (q ∘ r)", |t, p, q, r| {
            (
                t.circ(&t.bullet(p, q), r),
                t.bullet(&t.circ(p, &t.bullet(q, r)), &t.circ(q, r)),
            )
        }),
        ("p ∘ q = (p ∘ (q • r)) ∘ (q ∘ r)", |t, p, q, r| {
            (
                t.circ(p, q),
                t.circ(&t.circ(p, &t.bullet(q, r)), &t.circ(q, r)),
            )
        }),
    ]
}

/// The critical-pair equations read off the pentagon (first three) and the
/// hexagon (last two) rewrites of bracketed choice terms.
pub fn derived_equations<T: Tricocycloid>() -> Vec<Equation<T>> {
    vec![
        ("pentagon: p • (q • r) = (p • q) • r", |t, p, q, r| {
            (t.bullet(p, &t.bullet(q, r)), t.bullet(&t.bullet(p, q), r))
        }),
        ("pentagon: (p • q) ∘ r = (p ∘ (q • r)) • (q ∘ r)", |t, p, q, r| {
            (
                t.circ(&t.bullet(p, q), r),
                t.bullet(&t.circ(p, &t.bullet(q, r)), &t.circ(q, r)),
            )
        }),
        ("pentagon: p ∘ q = (p ∘ (q • r)) ∘ (q ∘ r)", |t, p, q, r| {
            (
                t.circ(p, q),
                t.circ(&t.circ(p, &t.bullet(q, r)), &t.circ(q, r)),
            )
        }),
        ("hexagon: (p • q)* • (p ∘ q) = p • q*", |t, p, q, _| {
            (
                t.bullet(&t.star(&t.bullet(p, q)), &t.circ(p, q)),
                t.bullet(p, &t.star(q)),
            )
        }),
        ("hexagon: (p • q)* ∘ (p ∘ q) = (p ∘ q*)*", |t, p, q, _| {
            (
                t.circ(&t.star(&t.bullet(p, q)), &t.circ(p, q)),
                t.star(&t.circ(p, &t.star(q))),
            )
        }),
    ]
}

/// Indices (1-based) of the equations that fail at `(p, q, r)`.
pub fn failing_at<T: Tricocycloid>(
    t: &T,
    equations: &[Equation<T>],
    p: &T::Guard,
    q: &T::Guard,
    r: &T::Guard,
) -> Vec<usize> {
    equations
        .iter()
        .enumerate()
        .filter(|(_, (_, eq))| {
            let (l, rr) = eq(t, p, q, r);
            l != rr
        })
        .map(|(i, _)| i + 1)
        .collect()
}

fn run_equations<T: Tricocycloid>(
    t: &T,
    equations: &[Equation<T>],
    samples: usize,
    seed: u64,
) -> Verdict {
    let samples = samples.max(1);
    let mut rng = random::rng(seed);
    for _ in 0..samples {
        let p = t.sample_guard(&mut rng);
        let q = t.sample_guard(&mut rng);
        let r = t.sample_guard(&mut rng);
        if let Some(f) = check_triple(t, equations, &p, &q, &r) {
            return Verdict::Fail(Box::new(f));
        }
    }
    Verdict::Pass { samples }
}

fn check_triple<T: Tricocycloid>(
    t: &T,
    equations: &[Equation<T>],
    p: &T::Guard,
    q: &T::Guard,
    r: &T::Guard,
) -> Option<EquationFailure> {
    equations.iter().enumerate().find_map(|(i, (name, eq))| {
        let (lhs, rhs) = eq(t, p, q, r);
        (lhs != rhs).then(|| EquationFailure {
            index: i + 1,
            equation: name,
            p: p.to_string(),
            q: q.to_string(),
            r: r.to_string(),
            lhs: lhs.to_string(),
            rhs: rhs.to_string(),
        })
    })
}

/// Evaluates all eight axioms on `samples` random triples, reporting the
/// first failure.
pub fn check_axioms<T: Tricocycloid>(t: &T, samples: usize, seed: u64) -> Verdict {
    run_equations(t, &axioms::<T>(), samples, seed)
}

/// Evaluates the pentagon and hexagon equations on `samples` random triples.
pub fn check_derived_equations<T: Tricocycloid>(t: &T, samples: usize, seed: u64) -> Verdict {
    run_equations(t, &derived_equations::<T>(), samples, seed)
}

/// Checks the axioms on one explicit triple.
pub fn check_axioms_at<T: Tricocycloid>(
    t: &T,
    p: &T::Guard,
    q: &T::Guard,
    r: &T::Guard,
) -> Verdict {
    match check_triple(t, &axioms::<T>(), p, q, r) {
        None => Verdict::Pass { samples: 1 },
        Some(f) => Verdict::Fail(Box::new(f)),
    }
}
