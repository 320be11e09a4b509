mod common;

use common::{monty_hall, nonassoc_chain, set, sub};
use num_rational::BigRational;
use num_traits::Zero;
use proptest::prelude::*;
use sesqui::kernel::{
    self, act, check_associating, compose, compose_norm, compose_sub, fold_pipeline,
    include_kernel, normalize_rowwise, tensor, Associating,
};
use sesqui::random::{self, TestRng};
use sesqui::rational::q;
use sesqui::{AssocTree, FinSet, Kernel, KernelFlavor, Rational, SubDist};

fn big(r: &Rational) -> BigRational {
    r.to_string().parse().unwrap()
}

/// Normalized composition written directly as a ratio of path sums.
fn oracle_norm(f: &Kernel, g: &Kernel) -> Vec<Option<Vec<BigRational>>> {
    let ny = f.codomain().len();
    let nz = g.codomain().len();
    (0..f.domain().len())
        .map(|x| {
            let mut num = vec![BigRational::zero(); nz];
            for (y, num_z) in (0..ny).flat_map(|y| (0..nz).map(move |z| (y, z))) {
                let w = big(&f.row(x).weight(&y)) * big(&g.row(y).weight(&num_z));
                num[num_z] += w;
            }
            let total: BigRational = num.iter().cloned().sum();
            if total.is_zero() {
                None
            } else {
                Some(num.into_iter().map(|n| n / total.clone()).collect())
            }
        })
        .collect()
}

fn as_vectors(k: &Kernel) -> Vec<Option<Vec<BigRational>>> {
    (0..k.domain().len())
        .map(|x| {
            let r = k.row(x);
            if r.is_failure() {
                None
            } else {
                Some((0..k.codomain().len()).map(|z| big(&r.weight(&z))).collect())
            }
        })
        .collect()
}

fn random_kernels(rng: &mut TestRng, flavor: KernelFlavor, n: usize, denom: u64) -> Vec<Kernel> {
    let sets: Vec<FinSet> = (0..=n).map(|i| random::finset(rng, 4, &format!("s{i}_"))).collect();
    (0..n)
        .map(|i| random::kernel(rng, flavor, &sets[i], &sets[i + 1], denom))
        .collect()
}

#[test]
fn nonassociating_chain_matches_by_hand() {
    let (f, g, h) = nonassoc_chain();
    let left = compose_norm(&compose_norm(&f, &g).unwrap(), &h).unwrap();
    let right = compose_norm(&f, &compose_norm(&g, &h).unwrap()).unwrap();
    assert_eq!(left.row(0), &sub(&[(0, q(2, 5)), (1, q(3, 5))], q(0, 1)));
    assert_eq!(right.row(0), &sub(&[(0, q(1, 2)), (1, q(1, 2))], q(0, 1)));

    match check_associating(&g, &[(f.clone(), h.clone())]).unwrap() {
        Associating::Fails(w) => {
            assert_eq!(w.left_assoc, left);
            assert_eq!(w.right_assoc, right);
        }
        Associating::Holds => panic!("middle kernel should not associate"),
    }
    assert!(check_associating(&h, &[(compose_norm(&f, &g).unwrap(), Kernel::identity(KernelFlavor::Norm, set(&["x", "y"])))])
        .unwrap()
        .holds());
}

#[test]
fn monty_hall_three_ways() {
    let (prior, host, observe) = monty_hall();
    let chain = [prior, host, observe];
    let tree = AssocTree::left(3);
    let norm = fold_pipeline(&chain, &tree, KernelFlavor::Norm).unwrap();
    assert_eq!(norm.row(0), &sub(&[(1, q(1, 3)), (3, q(2, 3))], q(0, 1)));
    let sub_run = fold_pipeline(&chain, &tree, KernelFlavor::Sub).unwrap();
    assert_eq!(sub_run.row(0), &sub(&[(1, q(1, 6)), (3, q(1, 3))], q(1, 2)));
    let par = fold_pipeline(&chain, &tree, KernelFlavor::Par).unwrap();
    assert!(par.row(0).is_failure());
    assert_eq!(normalize_rowwise(&sub_run).unwrap(), norm);
}

#[test]
fn stochastic_kernels_refuse_partial_flavors() {
    let (_, _, observe) = monty_hall();
    assert!(observe.coerce(KernelFlavor::Stoch).is_err());
    assert!(observe.coerce(KernelFlavor::Sub).is_ok());
}

#[test]
fn norm_composition_matches_path_sum_oracle() {
    let mut rng = random::rng(11);
    for _ in 0..300 {
        let ks = random_kernels(&mut rng, KernelFlavor::Norm, 2, 12);
        let c = compose_norm(&ks[0], &ks[1]).unwrap();
        assert_eq!(as_vectors(&c), oracle_norm(&ks[0], &ks[1]));
    }
}

#[test]
fn categories_associate_and_norm_is_unital() {
    let mut rng = random::rng(12);
    for flavor in [KernelFlavor::Stoch, KernelFlavor::Sub, KernelFlavor::Par] {
        for _ in 0..200 {
            let ks = random_kernels(&mut rng, flavor, 3, 8);
            let l = compose(&compose(&ks[0], &ks[1]).unwrap(), &ks[2]).unwrap();
            let r = compose(&ks[0], &compose(&ks[1], &ks[2]).unwrap()).unwrap();
            assert_eq!(l, r, "{flavor}");
        }
    }
    for _ in 0..200 {
        let ks = random_kernels(&mut rng, KernelFlavor::Norm, 1, 8);
        let f = &ks[0];
        let id_l = Kernel::identity(KernelFlavor::Norm, f.domain().clone());
        let id_r = Kernel::identity(KernelFlavor::Norm, f.codomain().clone());
        assert_eq!(&compose_norm(&id_l, f).unwrap(), f);
        assert_eq!(&compose_norm(f, &id_r).unwrap(), f);
    }
}

#[test]
fn left_fold_is_normalized_subdistribution_chain() {
    let mut rng = random::rng(13);
    for len in 1..=5 {
        for _ in 0..40 {
            let ks = random_kernels(&mut rng, KernelFlavor::Norm, len, 6);
            let folded = fold_pipeline(&ks, &AssocTree::left(len), KernelFlavor::Norm).unwrap();
            let as_sub = fold_pipeline(&ks, &AssocTree::left(len), KernelFlavor::Sub).unwrap();
            assert_eq!(folded, normalize_rowwise(&as_sub).unwrap());
        }
    }
}

#[test]
fn renormalization_and_action() {
    let mut rng = random::rng(14);
    for _ in 0..200 {
        let ks = random_kernels(&mut rng, KernelFlavor::Sub, 3, 16);
        let (f, g, k) = (&ks[0], &ks[1], &ks[2]);
        let nf = include_kernel(&normalize_rowwise(f).unwrap()).unwrap();
        assert_eq!(
            normalize_rowwise(&compose_sub(f, g).unwrap()).unwrap(),
            normalize_rowwise(&compose_sub(&nf, g).unwrap()).unwrap()
        );
        let p = normalize_rowwise(f).unwrap();
        let id = Kernel::identity(KernelFlavor::Sub, p.codomain().clone());
        assert_eq!(act(&p, &id).unwrap(), p);
        assert_eq!(
            act(&p, &compose_sub(g, k).unwrap()).unwrap(),
            act(&act(&p, g).unwrap(), k).unwrap()
        );
    }
}

#[test]
fn tensor_of_normalized_kernels() {
    let mut rng = random::rng(15);
    let unit = Kernel::identity(KernelFlavor::Norm, FinSet::unit());
    for _ in 0..150 {
        let a = random_kernels(&mut rng, KernelFlavor::Norm, 2, 6);
        let b = random_kernels(&mut rng, KernelFlavor::Norm, 2, 6);
        let c = random_kernels(&mut rng, KernelFlavor::Norm, 1, 6);
        let (f, g, f2, g2, h) = (&a[0], &a[1], &b[0], &b[1], &c[0]);

        assert!(tensor(f, &unit).unwrap().eq_up_to_relabeling(f));
        assert!(tensor(&unit, f).unwrap().eq_up_to_relabeling(f));
        let l = tensor(f, &tensor(f2, h).unwrap()).unwrap();
        let r = tensor(&tensor(f, f2).unwrap(), h).unwrap();
        assert!(l.eq_up_to_relabeling(&r));
        let ids = tensor(
            &Kernel::identity(KernelFlavor::Norm, f.domain().clone()),
            &Kernel::identity(KernelFlavor::Norm, f2.domain().clone()),
        )
        .unwrap();
        assert_eq!(ids, Kernel::identity(KernelFlavor::Norm, f.domain().product(f2.domain())));
        let lhs = tensor(&compose_norm(f, g).unwrap(), &compose_norm(f2, g2).unwrap()).unwrap();
        let rhs = compose_norm(&tensor(f, f2).unwrap(), &tensor(g, g2).unwrap()).unwrap();
        assert_eq!(lhs, rhs);
    }
}

#[test]
fn normalization_is_monoidal() {
    let mut rng = random::rng(16);
    for _ in 0..300 {
        let s = random::subdist(&mut rng, 3, 12);
        let t = random::subdist(&mut rng, 2, 12);
        let lhs = s.tensor(&t).normalize();
        let rhs = sesqui::dist::tensor_maybe(&s.normalize(), &t.normalize());
        assert_eq!(lhs, rhs);
    }
}

fn arb_seed() -> impl Strategy<Value = u64> {
    any::<u64>()
}

proptest! {
    #[test]
    fn deterministic_partial_kernels_associate(seed in arb_seed()) {
        let mut rng = random::rng(seed);
        let x = random::finset(&mut rng, 4, "x");
        let y = random::finset(&mut rng, 4, "y");
        let z = random::finset(&mut rng, 4, "z");
        let w = random::finset(&mut rng, 4, "w");
        let h = random::deterministic_partial(&mut rng, KernelFlavor::Norm, &y, &z);
        let f = random::kernel(&mut rng, KernelFlavor::Norm, &x, &y, 8);
        let g = random::kernel(&mut rng, KernelFlavor::Norm, &z, &w, 8);
        prop_assert!(check_associating(&h, &[(f, g)]).unwrap().holds());
    }

    #[test]
    fn composition_rejects_mismatched_carriers(seed in arb_seed()) {
        let mut rng = random::rng(seed);
        let a = FinSet::range(2);
        let b = FinSet::range(3);
        let f = random::kernel(&mut rng, KernelFlavor::Sub, &a, &a, 4);
        let g = random::kernel(&mut rng, KernelFlavor::Sub, &b, &a, 4);
        prop_assert!(compose_sub(&f, &g).is_err());
    }

    #[test]
    fn failure_row_absorbs_in_tensor(seed in arb_seed()) {
        let mut rng = random::rng(seed);
        let s = random::dist(&mut rng, 3, 8).into_sub();
        prop_assert!(s.tensor(&SubDist::<usize>::failure()).is_failure());
    }
}

#[test]
fn json_round_trip_keeps_kernels() {
    let (prior, host, observe) = monty_hall();
    for k in [prior, host, observe] {
        assert_eq!(kernel::Kernel::from_json(&k.to_json()).unwrap(), k);
    }
}
