//! The two finitary monads the laws are checked on, behind one interface.
//!
//! [`Distributions`] is `D` (finite distributions) and [`NonEmptySets`] is `N`
//! (finite non-empty subsets), the monads of the interval and terminal
//! tricocycloids. The maybe monad `M` is plain `Option`, with `None` as `⊥`.

use rand::Rng;

use crate::dist::Dist;
use crate::possibilistic::NeSet;
use crate::random;
use crate::show::Show;

/// Values that can sit inside the monads: comparable, cloneable, printable.
pub trait Elem: Clone + Ord + Show {}

impl<T: Clone + Ord + Show> Elem for T {}

pub trait FiniteMonad {
    type Of<A: Elem>: Elem;

    const NAME: &'static str;

    fn unit<A: Elem>(a: A) -> Self::Of<A>;

    fn map<A: Elem, B: Elem>(t: &Self::Of<A>, f: impl Fn(&A) -> B) -> Self::Of<B>;

    fn join<A: Elem>(tt: &Self::Of<Self::Of<A>>) -> Self::Of<A>;

    fn bind<A: Elem, B: Elem>(t: &Self::Of<A>, f: impl Fn(&A) -> Self::Of<B>) -> Self::Of<B> {
        Self::join(&Self::map(t, f))
    }

    fn support<A: Elem>(t: &Self::Of<A>) -> Vec<A>;

    /// A random element whose support is drawn from `pool`.
    fn sample<A: Elem>(rng: &mut impl Rng, pool: &[A], max_denom: u64) -> Self::Of<A>;

    /// Every value obtained by dropping one support point.
    fn shrinks<A: Elem>(t: &Self::Of<A>) -> Vec<Self::Of<A>>;
}

/// The finite distribution monad `D`.
#[derive(Debug, Clone, Copy, Default)]
pub struct Distributions;

impl FiniteMonad for Distributions {
    type Of<A: Elem> = Dist<A>;

    const NAME: &'static str = "D";

    fn unit<A: Elem>(a: A) -> Dist<A> {
        Dist::dirac(a)
    }

    fn map<A: Elem, B: Elem>(t: &Dist<A>, f: impl Fn(&A) -> B) -> Dist<B> {
        t.map(f)
    }

    fn join<A: Elem>(tt: &Dist<Dist<A>>) -> Dist<A> {
        tt.join()
    }

    fn support<A: Elem>(t: &Dist<A>) -> Vec<A> {
        t.support().cloned().collect()
    }

    fn sample<A: Elem>(rng: &mut impl Rng, pool: &[A], max_denom: u64) -> Dist<A> {
        let picked = random::nonempty_subset(rng, pool);
        let d = random::dist(rng, picked.len(), max_denom);
        d.map(|&i| picked[i].clone())
    }

    fn shrinks<A: Elem>(t: &Dist<A>) -> Vec<Dist<A>> {
        t.support().filter_map(|a| t.without(a)).collect()
    }
}

/// The finite non-empty powerset monad `N`.
#[derive(Debug, Clone, Copy, Default)]
pub struct NonEmptySets;

impl FiniteMonad for NonEmptySets {
    type Of<A: Elem> = NeSet<A>;

    const NAME: &'static str = "N";

    fn unit<A: Elem>(a: A) -> NeSet<A> {
        NeSet::singleton(a)
    }

    fn map<A: Elem, B: Elem>(t: &NeSet<A>, f: impl Fn(&A) -> B) -> NeSet<B> {
        t.map(f)
    }

    fn join<A: Elem>(tt: &NeSet<NeSet<A>>) -> NeSet<A> {
        tt.bind(Clone::clone)
    }

    fn support<A: Elem>(t: &NeSet<A>) -> Vec<A> {
        t.iter().cloned().collect()
    }

    fn sample<A: Elem>(rng: &mut impl Rng, pool: &[A], _max_denom: u64) -> NeSet<A> {
        NeSet::new(random::nonempty_subset(rng, pool)).expect("non-empty pick")
    }

    fn shrinks<A: Elem>(t: &NeSet<A>) -> Vec<NeSet<A>> {
        t.iter().filter_map(|a| t.without(a)).collect()
    }
}

/// The inclusion `MT → TM` that exists for every monad `T`: failure goes to
/// the unit at `⊥`, anything else is mapped into `Some`.
pub fn sub<T: FiniteMonad, A: Elem>(m: &Option<T::Of<A>>) -> T::Of<Option<A>> {
    match m {
        None => T::unit(None),
        Some(t) => T::map(t, |a| Some(a.clone())),
    }
}

/// Monad multiplication of `M`.
pub fn join_maybe<A: Clone>(mm: &Option<Option<A>>) -> Option<A> {
    mm.clone().flatten()
}

/// Replaces, one at a time, each inner value of a nested `T T A` by one of
/// its shrinks, and also shrinks the outer layer.
pub fn nested_shrinks<T: FiniteMonad, A: Elem>(tt: &T::Of<T::Of<A>>) -> Vec<T::Of<T::Of<A>>> {
    let mut out = T::shrinks(tt);
    for inner in T::support(tt) {
        for smaller in T::shrinks(&inner) {
            out.push(T::map(tt, |e| if *e == inner { smaller.clone() } else { e.clone() }));
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::q;

    #[test]
    fn dist_monad_laws_on_an_example() {
        let d = Dist::new([(0usize, q(1, 3)), (1, q(2, 3))]).unwrap();
        let k = |a: &usize| Dist::new([(*a, q(1, 2)), (a + 10, q(1, 2))]).unwrap();
        assert_eq!(Distributions::bind(&Distributions::unit(0usize), k), k(&0));
        assert_eq!(Distributions::bind(&d, |a| Distributions::unit(*a)), d);
    }

    #[test]
    fn nonempty_join_is_union() {
        let a = NeSet::new([1usize, 2]).unwrap();
        let b = NeSet::new([2usize, 3]).unwrap();
        let ab = NeSet::new([a, b]).unwrap();
        assert_eq!(NonEmptySets::join(&ab), NeSet::new([1, 2, 3]).unwrap());
    }

    #[test]
    fn sub_sends_failure_to_unit() {
        let none: Option<Dist<usize>> = None;
        assert_eq!(sub::<Distributions, usize>(&none), Dist::dirac(None));
        let d = Dist::uniform([0usize, 1]).unwrap();
        assert_eq!(
            sub::<Distributions, usize>(&Some(d)),
            Dist::uniform([Some(0), Some(1)]).unwrap()
        );
    }
}
