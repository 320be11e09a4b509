//! Executable checks of distributive laws and sesquilaws between the maybe
//! monad `M` and a finitary monad `T`.
//!
//! A [`LawInstance`] pairs the forward map `M T → T M` (always the inclusion
//! [`monad::sub`]) with a backward candidate `T M → M T`. Every check samples
//! concrete elements over carriers of at most four points, compares both
//! sides exactly, and on failure shrinks the counterexample by dropping
//! support points while it keeps failing.

use rand::Rng;
use serde::Serialize;

use crate::dist::{Dist, SubDist};
use crate::monad::{self, join_maybe, nested_shrinks, Distributions, Elem, FiniteMonad, NonEmptySets};
use crate::possibilistic::NeSet;
use crate::random::{self, TestRng};
use crate::show::Show;
use crate::tricocycloid::dh;

/// Largest carrier used by the checks.
pub const MAX_CARRIER: usize = 4;
/// Largest weight denominator used by the checks.
pub const MAX_DENOM: u64 = 6;

type Of<T, A> = <T as FiniteMonad>::Of<A>;

pub trait LawInstance {
    type T: FiniteMonad;

    fn name(&self) -> &'static str;

    fn backward<A: Elem>(&self, t: &Of<Self::T, Option<A>>) -> Option<Of<Self::T, A>>;

    fn forward<A: Elem>(&self, m: &Option<Of<Self::T, A>>) -> Of<Self::T, Option<A>> {
        monad::sub::<Self::T, A>(m)
    }
}

/// Inclusion and renormalization on distributions.
#[derive(Debug, Clone, Copy, Default)]
pub struct Renormalize;

/// Inclusion and the black-hole cast on distributions.
#[derive(Debug, Clone, Copy, Default)]
pub struct BlackHole;

/// Inclusion and dropping `⊥` on non-empty sets.
#[derive(Debug, Clone, Copy, Default)]
pub struct TerminalRenormalize;

/// Inclusion and failing on any possible `⊥`, on non-empty sets.
#[derive(Debug, Clone, Copy, Default)]
pub struct TerminalBlackHole;

impl LawInstance for Renormalize {
    type T = Distributions;

    fn name(&self) -> &'static str {
        "include-normalize"
    }

    fn backward<A: Elem>(&self, t: &Dist<Option<A>>) -> Option<Dist<A>> {
        SubDist::from_option_dist(t).normalize()
    }
}

impl LawInstance for BlackHole {
    type T = Distributions;

    fn name(&self) -> &'static str {
        "include-blackhole"
    }

    fn backward<A: Elem>(&self, t: &Dist<Option<A>>) -> Option<Dist<A>> {
        SubDist::from_option_dist(t).cast_blackhole()
    }
}

impl LawInstance for TerminalRenormalize {
    type T = NonEmptySets;

    fn name(&self) -> &'static str {
        "terminal-normalize"
    }

    fn backward<A: Elem>(&self, t: &NeSet<Option<A>>) -> Option<NeSet<A>> {
        dh::terminal_normalize(t)
    }
}

impl LawInstance for TerminalBlackHole {
    type T = NonEmptySets;

    fn name(&self) -> &'static str {
        "terminal-blackhole"
    }

    fn backward<A: Elem>(&self, t: &NeSet<Option<A>>) -> Option<NeSet<A>> {
        dh::terminal_blackhole(t)
    }
}

/// Names accepted by [`run_named`].
pub const INSTANCE_NAMES: [&str; 4] = [
    "include-normalize",
    "include-blackhole",
    "terminal-normalize",
    "terminal-blackhole",
];

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Direction {
    Forward,
    Backward,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Outcome {
    Pass,
    Fail,
}

/// A minimized counterexample, rendered for humans.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Witness {
    pub carrier: usize,
    pub input: String,
    pub lhs: String,
    pub rhs: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct AxiomResult {
    pub name: String,
    pub verdict: Outcome,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<Witness>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct LawReport {
    pub instance: String,
    pub check: String,
    pub axioms: Vec<AxiomResult>,
}

impl LawReport {
    pub fn axiom(&self, name: &str) -> Option<&AxiomResult> {
        self.axioms.iter().find(|a| a.name == name)
    }

    pub fn passed(&self, name: &str) -> bool {
        self.axiom(name).is_some_and(|a| a.verdict == Outcome::Pass)
    }

    pub fn all_pass(&self) -> bool {
        self.axioms.iter().all(|a| a.verdict == Outcome::Pass)
    }

    pub fn failing(&self) -> Vec<&str> {
        self.axioms
            .iter()
            .filter(|a| a.verdict == Outcome::Fail)
            .map(|a| a.name.as_str())
            .collect()
    }
}

/// Shrinks `v` greedily while `fails` keeps holding.
pub fn minimize<V: Clone>(mut v: V, fails: impl Fn(&V) -> bool, shrinks: impl Fn(&V) -> Vec<V>) -> V {
    while let Some(smaller) = shrinks(&v).into_iter().find(|s| fails(s)) {
        v = smaller;
    }
    v
}

type Sampler<'a, V> = Box<dyn FnMut(&mut TestRng, usize) -> V + 'a>;
type Side<'a, V, O> = Box<dyn Fn(&V) -> O + 'a>;

/// One axiom `lhs(v) = rhs(v)` over sampled `v`.
struct Axiom<'a, V, O> {
    name: &'static str,
    sample: Sampler<'a, V>,
    lhs: Side<'a, V, O>,
    rhs: Side<'a, V, O>,
    shrink: Side<'a, V, Vec<V>>,
}

impl<V: Clone + Show, O: PartialEq + Show> Axiom<'_, V, O> {
    fn run(mut self, samples: usize, rng: &mut TestRng) -> AxiomResult {
        for _ in 0..samples {
            let n = rng.gen_range(1..=MAX_CARRIER);
            let v = (self.sample)(rng, n);
            if (self.lhs)(&v) != (self.rhs)(&v) {
                let fails = |v: &V| (self.lhs)(v) != (self.rhs)(v);
                let v = minimize(v, fails, &self.shrink);
                return AxiomResult {
                    name: self.name.into(),
                    verdict: Outcome::Fail,
                    witness: Some(Witness {
                        carrier: n,
                        input: v.show(),
                        lhs: (self.lhs)(&v).show(),
                        rhs: (self.rhs)(&v).show(),
                    }),
                };
            }
        }
        AxiomResult {
            name: self.name.into(),
            verdict: Outcome::Pass,
            witness: None,
        }
    }
}

fn pool(n: usize) -> Vec<usize> {
    (0..n).collect()
}

fn pool_maybe(n: usize) -> Vec<Option<usize>> {
    std::iter::once(None).chain((0..n).map(Some)).collect()
}

fn sample_maybe<A>(rng: &mut TestRng, mut f: impl FnMut(&mut TestRng) -> A) -> Option<A> {
    if rng.gen_ratio(1, 5) {
        None
    } else {
        Some(f(rng))
    }
}

fn sample_t<T: FiniteMonad, A: Elem>(rng: &mut TestRng, pool: &[A]) -> Of<T, A> {
    T::sample(rng, pool, MAX_DENOM)
}

fn sample_tt<T: FiniteMonad, A: Elem>(rng: &mut TestRng, pool: &[A]) -> Of<T, Of<T, A>> {
    let k = rng.gen_range(1..=3);
    let inner: Vec<Of<T, A>> = (0..k).map(|_| sample_t::<T, A>(rng, pool)).collect();
    sample_t::<T, Of<T, A>>(rng, &inner)
}

fn shrink_some<A: Clone>(m: &Option<A>, f: impl Fn(&A) -> Vec<A>) -> Vec<Option<A>> {
    m.as_ref().map(|a| f(a).into_iter().map(Some).collect()).unwrap_or_default()
}

/// The four Beck axioms for the forward or backward map of `inst`.
pub fn check_beck<I: LawInstance>(inst: &I, direction: Direction, samples: usize, seed: u64) -> LawReport {
    let mut rng = random::rng(seed);
    let axioms = match direction {
        Direction::Forward => beck_forward(inst, samples, &mut rng),
        Direction::Backward => beck_backward(inst, samples, &mut rng),
    };
    LawReport {
        instance: inst.name().into(),
        check: match direction {
            Direction::Forward => "beck-forward",
            Direction::Backward => "beck-backward",
        }
        .into(),
        axioms,
    }
}

fn beck_forward<I: LawInstance>(inst: &I, samples: usize, rng: &mut TestRng) -> Vec<AxiomResult> {
    let fw = |m: &Option<Of<I::T, usize>>| inst.forward(m);
    vec![
        Axiom {
            name: "unit-S",
            sample: Box::new(|rng: &mut TestRng, n| sample_t::<I::T, usize>(rng, &pool(n))),
            lhs: Box::new(|t| fw(&Some(t.clone()))),
            rhs: Box::new(|t| I::T::map(t, |a| Some(*a))),
            shrink: Box::new(I::T::shrinks),
        }
        .run(samples, rng),
        Axiom {
            name: "unit-T",
            sample: Box::new(|rng: &mut TestRng, n| sample_maybe(rng, |r| r.gen_range(0..n))),
            lhs: Box::new(|m: &Option<usize>| fw(&m.map(I::T::unit))),
            rhs: Box::new(|m| I::T::unit(*m)),
            shrink: Box::new(|_| Vec::new()),
        }
        .run(samples, rng),
        Axiom {
            name: "mult-S",
            sample: Box::new(|rng: &mut TestRng, n| {
                sample_maybe(rng, |r| sample_maybe(r, |r| sample_t::<I::T, usize>(r, &pool(n))))
            }),
            lhs: Box::new(|x| fw(&join_maybe(x))),
            rhs: Box::new(|x| {
                let inner = x.as_ref().map(&fw);
                I::T::map(&inst.forward(&inner), join_maybe)
            }),
            shrink: Box::new(|x| shrink_some(x, |m| shrink_some(m, I::T::shrinks))),
        }
        .run(samples, rng),
        Axiom {
            name: "mult-T",
            sample: Box::new(|rng: &mut TestRng, n| {
                sample_maybe(rng, |r| sample_tt::<I::T, usize>(r, &pool(n)))
            }),
            lhs: Box::new(|x| fw(&x.as_ref().map(I::T::join))),
            rhs: Box::new(|x| {
                let outer = inst.forward(x);
                I::T::join(&I::T::map(&outer, |m| fw(m)))
            }),
            shrink: Box::new(|x| shrink_some(x, nested_shrinks::<I::T, usize>)),
        }
        .run(samples, rng),
    ]
}

fn beck_backward<I: LawInstance>(inst: &I, samples: usize, rng: &mut TestRng) -> Vec<AxiomResult> {
    let bw = |t: &Of<I::T, Option<usize>>| inst.backward(t);
    vec![
        Axiom {
            name: "unit-S",
            sample: Box::new(|rng: &mut TestRng, n| sample_t::<I::T, usize>(rng, &pool(n))),
            lhs: Box::new(|t| bw(&I::T::map(t, |a| Some(*a)))),
            rhs: Box::new(|t| Some(t.clone())),
            shrink: Box::new(I::T::shrinks),
        }
        .run(samples, rng),
        Axiom {
            name: "unit-T",
            sample: Box::new(|rng: &mut TestRng, n| sample_maybe(rng, |r| r.gen_range(0..n))),
            lhs: Box::new(|m: &Option<usize>| bw(&I::T::unit(*m))),
            rhs: Box::new(|m| m.map(I::T::unit)),
            shrink: Box::new(|_| Vec::new()),
        }
        .run(samples, rng),
        Axiom {
            name: "mult-S",
            sample: Box::new(|rng: &mut TestRng, n| {
                let mm: Vec<Option<Option<usize>>> = std::iter::once(None)
                    .chain(std::iter::once(Some(None)))
                    .chain((0..n).map(|i| Some(Some(i))))
                    .collect();
                sample_t::<I::T, Option<Option<usize>>>(rng, &mm)
            }),
            lhs: Box::new(|x| bw(&I::T::map(x, join_maybe))),
            rhs: Box::new(|x| {
                let outer = inst.backward(x);
                join_maybe(&outer.as_ref().map(&bw))
            }),
            shrink: Box::new(I::T::shrinks),
        }
        .run(samples, rng),
        Axiom {
            name: "mult-T",
            sample: Box::new(|rng: &mut TestRng, n| sample_tt::<I::T, Option<usize>>(rng, &pool_maybe(n))),
            lhs: Box::new(|x| bw(&I::T::join(x))),
            rhs: Box::new(|x| {
                let inner = I::T::map(x, |t| bw(t));
                inst.backward(&inner).map(|tt| I::T::join(&tt))
            }),
            shrink: Box::new(nested_shrinks::<I::T, Option<usize>>),
        }
        .run(samples, rng),
    ]
}

/// A Kleisli arrow `X → T M Y` stored as one row per input.
pub type Arrow<T> = Vec<Of<T, Option<usize>>>;

/// A normalized arrow `X → M T Y`.
pub type NormArrow<T> = Vec<Option<Of<T, usize>>>;

/// Kleisli composition for `T M`: failure stays failure.
pub fn kleisli<T: FiniteMonad>(f: &Arrow<T>, g: &Arrow<T>) -> Arrow<T> {
    f.iter()
        .map(|row| {
            T::bind(row, |y| match y {
                None => T::unit(None),
                Some(y) => g[*y].clone(),
            })
        })
        .collect()
}

fn backward_rows<I: LawInstance>(inst: &I, f: &Arrow<I::T>) -> NormArrow<I::T> {
    f.iter().map(|r| inst.backward(r)).collect()
}

fn forward_rows<I: LawInstance>(inst: &I, p: &NormArrow<I::T>) -> Arrow<I::T> {
    p.iter().map(|r| inst.forward(r)).collect()
}

/// `p ≺ f`: embed, compose, and map back.
pub fn act<I: LawInstance>(inst: &I, p: &NormArrow<I::T>, f: &Arrow<I::T>) -> NormArrow<I::T> {
    backward_rows(inst, &kleisli::<I::T>(&forward_rows(inst, p), f))
}

fn identity_arrow<T: FiniteMonad>(n: usize) -> Arrow<T> {
    (0..n).map(|y| T::unit(Some(y))).collect()
}

fn sample_arrow<T: FiniteMonad>(rng: &mut TestRng, dom: usize, cod: usize) -> Arrow<T> {
    let p = pool_maybe(cod);
    (0..dom).map(|_| sample_t::<T, Option<usize>>(rng, &p)).collect()
}

fn sample_norm_arrow<T: FiniteMonad>(rng: &mut TestRng, dom: usize, cod: usize) -> NormArrow<T> {
    let p = pool(cod);
    (0..dom)
        .map(|_| sample_maybe(rng, |r| sample_t::<T, usize>(r, &p)))
        .collect()
}

fn shrink_rows<R: Clone>(rows: &[R], f: impl Fn(&R) -> Vec<R>) -> Vec<Vec<R>> {
    let mut out = Vec::new();
    for (i, r) in rows.iter().enumerate() {
        for s in f(r) {
            let mut v = rows.to_vec();
            v[i] = s;
            out.push(v);
        }
    }
    out
}

fn shrink_pair<A: Clone, B: Clone>(
    (a, b): &(A, B),
    fa: impl Fn(&A) -> Vec<A>,
    fb: impl Fn(&B) -> Vec<B>,
) -> Vec<(A, B)> {
    let mut out: Vec<(A, B)> = fa(a).into_iter().map(|a| (a, b.clone())).collect();
    out.extend(fb(b).into_iter().map(|b| (a.clone(), b)));
    out
}

/// Consequences of a distributive sesquilaw: the section law, the induced
/// idempotent, left absorption, and the two action laws.
pub fn check_sesquilaw<I: LawInstance>(inst: &I, samples: usize, seed: u64) -> LawReport {
    let mut rng = random::rng(seed);
    let rng = &mut rng;
    let e = |t: &Of<I::T, Option<usize>>| inst.forward(&inst.backward(t));
    let shrink_arrow = |f: &Arrow<I::T>| shrink_rows(f, I::T::shrinks);
    let shrink_norm = |p: &NormArrow<I::T>| shrink_rows(p, |r| shrink_some(r, I::T::shrinks));
    let dims = |rng: &mut TestRng, n: usize| (n, rng.gen_range(1..=MAX_CARRIER), rng.gen_range(1..=MAX_CARRIER));

    let axioms = vec![
        Axiom {
            name: "sesquilaw",
            sample: Box::new(|rng: &mut TestRng, n| sample_maybe(rng, |r| sample_t::<I::T, usize>(r, &pool(n)))),
            lhs: Box::new(|m| inst.backward(&inst.forward(m))),
            rhs: Box::new(|m| m.clone()),
            shrink: Box::new(|m| shrink_some(m, I::T::shrinks)),
        }
        .run(samples, rng),
        Axiom {
            name: "idempotent",
            sample: Box::new(|rng: &mut TestRng, n| sample_t::<I::T, Option<usize>>(rng, &pool_maybe(n))),
            lhs: Box::new(|t| e(&e(t))),
            rhs: Box::new(|t| e(t)),
            shrink: Box::new(I::T::shrinks),
        }
        .run(samples, rng),
        Axiom {
            name: "left-absorption",
            sample: Box::new(|rng: &mut TestRng, n| {
                let (x, y, z) = dims(rng, n);
                (sample_arrow::<I::T>(rng, x, y), sample_arrow::<I::T>(rng, y, z))
            }),
            lhs: Box::new(|(f, g)| backward_rows(inst, &kleisli::<I::T>(f, g))),
            rhs: Box::new(|(f, g)| {
                let ef: Arrow<I::T> = f.iter().map(&e).collect();
                backward_rows(inst, &kleisli::<I::T>(&ef, g))
            }),
            shrink: Box::new(|fg| shrink_pair(fg, shrink_arrow, shrink_arrow)),
        }
        .run(samples, rng),
        Axiom {
            name: "action-unit",
            sample: Box::new(|rng: &mut TestRng, n| {
                let y = rng.gen_range(1..=MAX_CARRIER);
                sample_norm_arrow::<I::T>(rng, n, y)
            }),
            lhs: Box::new(|p| {
                let cod = p.iter().flatten().flat_map(I::T::support).max().map_or(1, |m| m + 1);
                act(inst, p, &identity_arrow::<I::T>(cod))
            }),
            rhs: Box::new(|p| p.clone()),
            shrink: Box::new(shrink_norm),
        }
        .run(samples, rng),
        Axiom {
            name: "action-mult",
            sample: Box::new(|rng: &mut TestRng, n| {
                let (x, y, z) = dims(rng, n);
                let w = rng.gen_range(1..=MAX_CARRIER);
                (
                    (sample_norm_arrow::<I::T>(rng, x, y), sample_arrow::<I::T>(rng, y, z)),
                    sample_arrow::<I::T>(rng, z, w),
                )
            }),
            lhs: Box::new(|((p, f), g)| act(inst, p, &kleisli::<I::T>(f, g))),
            rhs: Box::new(|((p, f), g)| act(inst, &act(inst, p, f), g)),
            shrink: Box::new(|pfg| {
                shrink_pair(pfg, |pf| shrink_pair(pf, shrink_norm, shrink_arrow), shrink_arrow)
            }),
        }
        .run(samples, rng),
    ];
    LawReport {
        instance: inst.name().into(),
        check: "sesquilaw".into(),
        axioms,
    }
}

/// Both maps commute with relabeling the carrier by a random permutation.
pub fn check_naturality<I: LawInstance>(inst: &I, samples: usize, seed: u64) -> LawReport {
    use rand::seq::SliceRandom;
    let mut rng = random::rng(seed);
    let rng = &mut rng;
    let perm = |rng: &mut TestRng, n: usize| {
        let mut p = pool(n);
        p.shuffle(rng);
        p
    };
    let axioms = vec![
        Axiom {
            name: "naturality-forward",
            sample: Box::new(|rng: &mut TestRng, n| {
                let m = sample_maybe(rng, |r| sample_t::<I::T, usize>(r, &pool(n)));
                (m, perm(rng, n))
            }),
            lhs: Box::new(|(m, s)| {
                I::T::map(&inst.forward(m), |o: &Option<usize>| o.map(|a| s[a]))
            }),
            rhs: Box::new(|(m, s)| {
                let relabeled = m.as_ref().map(|t| I::T::map(t, |a| s[*a]));
                inst.forward(&relabeled)
            }),
            shrink: Box::new(|(m, s)| {
                shrink_some(m, I::T::shrinks).into_iter().map(|m| (m, s.clone())).collect()
            }),
        }
        .run(samples, rng),
        Axiom {
            name: "naturality-backward",
            sample: Box::new(|rng: &mut TestRng, n| {
                (sample_t::<I::T, Option<usize>>(rng, &pool_maybe(n)), perm(rng, n))
            }),
            lhs: Box::new(|(t, s)| inst.backward(t).map(|d| I::T::map(&d, |a| s[*a]))),
            rhs: Box::new(|(t, s)| inst.backward(&I::T::map(t, |o| o.map(|a| s[a])))),
            shrink: Box::new(|(t, s)| I::T::shrinks(t).into_iter().map(|t| (t, s.clone())).collect()),
        }
        .run(samples, rng),
    ];
    LawReport {
        instance: inst.name().into(),
        check: "naturality".into(),
        axioms,
    }
}

/// Every check for one instance, in a fixed order.
pub fn run_all<I: LawInstance>(inst: &I, samples: usize, seed: u64) -> Vec<LawReport> {
    vec![
        check_beck(inst, Direction::Forward, samples, seed),
        check_beck(inst, Direction::Backward, samples, seed),
        check_sesquilaw(inst, samples, seed),
        check_naturality(inst, samples, seed),
    ]
}

/// [`run_all`] for an instance given by name, or `None` if the name is unknown.
pub fn run_named(name: &str, samples: usize, seed: u64) -> Option<Vec<LawReport>> {
    match name {
        "include-normalize" => Some(run_all(&Renormalize, samples, seed)),
        "include-blackhole" => Some(run_all(&BlackHole, samples, seed)),
        "terminal-normalize" => Some(run_all(&TerminalRenormalize, samples, seed)),
        "terminal-blackhole" => Some(run_all(&TerminalBlackHole, samples, seed)),
        _ => None,
    }
}
