#![allow(dead_code)]

use sesqui::dist::{Dist, SubDist};
use sesqui::rational::{q, Rational};
use sesqui::{FinSet, Kernel, KernelFlavor};

pub fn set(labels: &[&str]) -> FinSet {
    FinSet::new(labels.iter().copied()).unwrap()
}

pub fn row(pairs: &[(usize, Rational)]) -> Option<Dist<usize>> {
    Some(Dist::new(pairs.iter().cloned()).unwrap())
}

pub fn sub(pairs: &[(usize, Rational)], bottom: Rational) -> SubDist<usize> {
    SubDist::new(pairs.iter().cloned(), bottom).unwrap()
}

/// `f: 1 → {a,b}`, `g: {a,b} → {x,y,z}`, `h: {x,y,z} → {x,y}` where the
/// middle kernel does not associate.
pub fn nonassoc_chain() -> (Kernel, Kernel, Kernel) {
    let ab = set(&["a", "b"]);
    let xyz = set(&["x", "y", "z"]);
    let xy = set(&["x", "y"]);
    let f = Kernel::partial(
        KernelFlavor::Norm,
        FinSet::unit(),
        ab.clone(),
        vec![row(&[(0, q(1, 2)), (1, q(1, 2))])],
    )
    .unwrap();
    let g = Kernel::partial(
        KernelFlavor::Norm,
        ab,
        xyz.clone(),
        vec![row(&[(0, q(1, 3)), (2, q(2, 3))]), row(&[(1, q(1, 2)), (2, q(1, 2))])],
    )
    .unwrap();
    let h = Kernel::partial(
        KernelFlavor::Norm,
        xyz,
        xy,
        vec![row(&[(0, q(1, 1))]), row(&[(1, q(1, 1))]), None],
    )
    .unwrap();
    (f, g, h)
}

/// Prior over the prize door, the host's opening, and observing that the
/// host opened the left door.
pub fn monty_hall() -> (Kernel, Kernel, Kernel) {
    let prize = set(&["L", "M", "R"]);
    let outcome = set(&["LR", "ML", "MR", "RL"]);
    let prior = Kernel::stoch(
        FinSet::unit(),
        prize.clone(),
        vec![Dist::uniform([0, 1, 2]).unwrap()],
    )
    .unwrap();
    let host = Kernel::stoch(
        prize,
        outcome.clone(),
        vec![
            Dist::dirac(0),
            Dist::new([(1, q(1, 2)), (2, q(1, 2))]).unwrap(),
            Dist::dirac(3),
        ],
    )
    .unwrap();
    let observe = Kernel::partial(
        KernelFlavor::Norm,
        outcome.clone(),
        outcome,
        vec![None, row(&[(1, q(1, 1))]), None, row(&[(3, q(1, 1))])],
    )
    .unwrap();
    (prior, host, observe)
}
