mod common;

use common::{nonassoc_chain, set};
use sesqui::dist::SubDist;
use sesqui::kernel::compose;
use sesqui::possibilistic::{self, supp_kernel, RelFlavor, RelRow, Relation};
use sesqui::random;
use sesqui::rational::q;
use sesqui::{FinSet, Kernel, KernelFlavor, Rational};

/// Every `k/d` in `[0, 1]` with `d <= 4`.
fn grid() -> Vec<Rational> {
    let mut g: Vec<Rational> = (1..=4)
        .flat_map(|d| (0..=d).map(move |k| q(k, d)))
        .collect();
    g.sort();
    g.dedup();
    g
}

/// All rows on a two-point carrier admitted by `flavor`, with grid weights.
fn grid_rows(flavor: KernelFlavor) -> Vec<SubDist<usize>> {
    let g = grid();
    let mut out = Vec::new();
    for a in &g {
        for b in &g {
            let total = a.clone() + b;
            if total > Rational::one() {
                continue;
            }
            let row = SubDist::new([(0, a.clone()), (1, b.clone())], total.complement()).unwrap();
            if flavor.admits(&row) {
                out.push(row);
            }
        }
    }
    out
}

fn check_pair(f: &Kernel, g: &Kernel) {
    let lhs = supp_kernel(&compose(f, g).unwrap());
    let rhs = possibilistic::compose(&supp_kernel(f), &supp_kernel(g)).unwrap();
    assert_eq!(lhs, rhs, "f = {f:?}\ng = {g:?}");
}

#[test]
fn support_intertwines_composition_on_random_pairs() {
    let mut rng = random::rng(21);
    for flavor in KernelFlavor::ALL {
        for _ in 0..1000 {
            let x = random::finset(&mut rng, 4, "x");
            let y = random::finset(&mut rng, 4, "y");
            let z = random::finset(&mut rng, 4, "z");
            let f = random::kernel(&mut rng, flavor, &x, &y, 64);
            let g = random::kernel(&mut rng, flavor, &y, &z, 64);
            check_pair(&f, &g);
        }
    }
}

#[test]
fn support_intertwines_composition_exhaustively_on_two_points() {
    let two = FinSet::range(2);
    for flavor in [KernelFlavor::Sub, KernelFlavor::Par, KernelFlavor::Norm] {
        let rows = grid_rows(flavor);
        assert!(rows.len() > 5);
        let mut checked = 0usize;
        for fr in &rows {
            let f = Kernel::new(flavor, FinSet::unit(), two.clone(), vec![fr.clone()]).unwrap();
            for g0 in &rows {
                for g1 in &rows {
                    let g = Kernel::new(flavor, two.clone(), two.clone(), vec![g0.clone(), g1.clone()]).unwrap();
                    check_pair(&f, &g);
                    checked += 1;
                }
            }
        }
        assert_eq!(checked, rows.len().pow(3));
    }
}

#[test]
fn support_of_identity_is_identity() {
    let s = set(&["a", "b", "c"]);
    for flavor in KernelFlavor::ALL {
        let rel = supp_kernel(&Kernel::identity(flavor, s.clone()));
        assert_eq!(rel, Relation::identity(RelFlavor::of_kernel(flavor), s.clone()));
    }
}

#[test]
fn support_of_the_nonassociating_chain() {
    let (f, g, h) = nonassoc_chain();
    let (sf, sg, sh) = (supp_kernel(&f), supp_kernel(&g), supp_kernel(&h));
    let l = possibilistic::compose(&possibilistic::compose(&sf, &sg).unwrap(), &sh).unwrap();
    let r = possibilistic::compose(&sf, &possibilistic::compose(&sg, &sh).unwrap()).unwrap();
    assert_eq!(l, r);
    assert_eq!(l.row(0), &RelRow::new([0, 1], false));
    assert_eq!(sh.row(2), &RelRow::empty());
}

#[test]
fn relational_categories_associate() {
    let mut rng = random::rng(22);
    for flavor in KernelFlavor::ALL {
        for _ in 0..300 {
            let sets: Vec<FinSet> = (0..4).map(|i| random::finset(&mut rng, 4, &format!("s{i}"))).collect();
            let ks: Vec<Relation> = (0..3)
                .map(|i| supp_kernel(&random::kernel(&mut rng, flavor, &sets[i], &sets[i + 1], 6)))
                .collect();
            let l = possibilistic::compose(&possibilistic::compose(&ks[0], &ks[1]).unwrap(), &ks[2]).unwrap();
            let r = possibilistic::compose(&ks[0], &possibilistic::compose(&ks[1], &ks[2]).unwrap()).unwrap();
            assert_eq!(l, r);
        }
    }
}
