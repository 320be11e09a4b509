//! Seeded generators for exact random test data.
//!
//! All weights are multiples of `1/D` for a denominator `D` drawn per row, so
//! every generated rational has denominator at most the configured bound.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::dist::{Dist, MaybeDist, SubDist};
use crate::finset::FinSet;
use crate::kernel::{Kernel, KernelFlavor};
use crate::rational::Rational;
use crate::tricocycloid::term::GuardedTerm;
use crate::tricocycloid::IntervalGuard;

pub type TestRng = ChaCha8Rng;

pub fn rng(seed: u64) -> TestRng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Splits `total` into `parts` non-negative integers, uniformly over cut
/// positions.
pub fn composition(rng: &mut impl Rng, parts: usize, total: u64) -> Vec<u64> {
    assert!(parts > 0);
    let mut cuts: Vec<u64> = (0..parts - 1).map(|_| rng.gen_range(0..=total)).collect();
    cuts.sort_unstable();
    let mut out = Vec::with_capacity(parts);
    let mut prev = 0;
    for c in cuts {
        out.push(c - prev);
        prev = c;
    }
    out.push(total - prev);
    out
}

/// `parts` non-negative rationals summing to one, all with denominators
/// dividing some `D <= max_denom`.
pub fn simplex_point(rng: &mut impl Rng, parts: usize, max_denom: u64) -> Vec<Rational> {
    let d = rng.gen_range(1..=max_denom.max(1));
    composition(rng, parts, d)
        .into_iter()
        .map(|k| Rational::new(k as i64, d as i64))
        .collect()
}

/// A random distribution on `0..n`.
pub fn dist(rng: &mut impl Rng, n: usize, max_denom: u64) -> Dist<usize> {
    loop {
        let w = simplex_point(rng, n, max_denom);
        if w.iter().any(Rational::is_positive) {
            return Dist::new(w.into_iter().enumerate()).expect("simplex point");
        }
    }
}

/// A random subdistribution on `0..n`. One draw in eight is pure failure,
/// one in eight is total, the rest are generic.
pub fn subdist(rng: &mut impl Rng, n: usize, max_denom: u64) -> SubDist<usize> {
    match rng.gen_range(0..8) {
        0 => SubDist::failure(),
        1 => dist(rng, n, max_denom).into_sub(),
        _ => {
            let mut w = simplex_point(rng, n + 1, max_denom);
            let bottom = w.pop().expect("n + 1 parts");
            SubDist::new(w.into_iter().enumerate(), bottom).expect("simplex point")
        }
    }
}

/// Failure one time in five, else a random distribution.
pub fn maybe_dist(rng: &mut impl Rng, n: usize, max_denom: u64) -> MaybeDist<usize> {
    if rng.gen_range(0..5) == 0 {
        None
    } else {
        Some(dist(rng, n, max_denom))
    }
}

/// A row admitted by `flavor`.
pub fn row(rng: &mut impl Rng, flavor: KernelFlavor, n: usize, max_denom: u64) -> SubDist<usize> {
    match flavor {
        KernelFlavor::Stoch => dist(rng, n, max_denom).into_sub(),
        KernelFlavor::Sub => subdist(rng, n, max_denom),
        KernelFlavor::Par | KernelFlavor::Norm => {
            crate::dist::include(&maybe_dist(rng, n, max_denom))
        }
    }
}

pub fn kernel(
    rng: &mut impl Rng,
    flavor: KernelFlavor,
    domain: &FinSet,
    codomain: &FinSet,
    max_denom: u64,
) -> Kernel {
    let rows = (0..domain.len())
        .map(|_| row(rng, flavor, codomain.len(), max_denom))
        .collect();
    Kernel::new(flavor, domain.clone(), codomain.clone(), rows).expect("generated rows")
}

/// A deterministic partial kernel: each row is failure or a point mass.
pub fn deterministic_partial(
    rng: &mut impl Rng,
    flavor: KernelFlavor,
    domain: &FinSet,
    codomain: &FinSet,
) -> Kernel {
    let rows = (0..domain.len())
        .map(|_| {
            if rng.gen_range(0..4) == 0 {
                None
            } else {
                Some(Dist::dirac(rng.gen_range(0..codomain.len())))
            }
        })
        .collect();
    Kernel::partial(flavor, domain.clone(), codomain.clone(), rows).expect("generated rows")
}

/// A set of `1..=max_size` labels `prefix0, prefix1, ...`.
pub fn finset(rng: &mut impl Rng, max_size: usize, prefix: &str) -> FinSet {
    let n = rng.gen_range(1..=max_size);
    FinSet::new((0..n).map(|i| format!("{prefix}{i}"))).expect("distinct")
}

/// A guard from the grid `{1/N, ..., (N-1)/N}`.
pub fn grid_guard(rng: &mut impl Rng, grid: u64) -> Rational {
    let grid = grid.max(2);
    Rational::new(rng.gen_range(1..grid) as i64, grid as i64)
}

/// A random non-empty subset of `items`.
pub fn nonempty_subset<T: Clone>(rng: &mut impl Rng, items: &[T]) -> Vec<T> {
    assert!(!items.is_empty());
    let k = rng.gen_range(1..=items.len());
    let mut v: Vec<T> = items.to_vec();
    v.shuffle(rng);
    v.truncate(k);
    v
}

/// A random interval term of depth at most `max_depth` over `vars`, with
/// `_|_` at roughly one leaf in six.
pub fn interval_term(
    rng: &mut impl Rng,
    max_depth: usize,
    vars: &[&str],
    grid: u64,
) -> GuardedTerm<IntervalGuard> {
    if max_depth == 0 || rng.gen_range(0..4) == 0 {
        return if rng.gen_range(0..6) == 0 {
            GuardedTerm::Bot
        } else {
            GuardedTerm::var(*vars.choose(rng).expect("at least one variable"))
        };
    }
    let g = IntervalGuard::new(grid_guard(rng, grid)).expect("grid guard");
    let l = interval_term(rng, max_depth - 1, vars, grid);
    let r = interval_term(rng, max_depth - 1, vars, grid);
    GuardedTerm::choice(g, l, r)
}
