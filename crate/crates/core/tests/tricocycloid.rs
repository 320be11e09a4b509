use std::collections::BTreeSet;

use sesqui::random::{self, TestRng};
use sesqui::rational::q;
use sesqui::tricocycloid::term::{
    eval_interval, normal_form, normal_form_merged, normalize_term, parse_interval_term, rewrite,
    GuardedTerm, Normalized, Rule,
};
use sesqui::tricocycloid::{
    axioms, check_axioms, check_derived_equations, failing_at, Interval, IntervalGuard, Terminal,
    Tricocycloid,
};

fn g(n: i64, d: i64) -> IntervalGuard {
    IntervalGuard::new(q(n, d)).unwrap()
}

/// Every guard `k/d` with `d <= max`.
fn guard_grid(max: i64) -> Vec<IntervalGuard> {
    let set: BTreeSet<IntervalGuard> = (2..=max)
        .flat_map(|d| (1..d).map(move |k| g(k, d)))
        .collect();
    set.into_iter().collect()
}

/// Interval operations with the second associator replaced by projection.
struct Projecting;

impl Tricocycloid for Projecting {
    type Guard = IntervalGuard;

    fn name(&self) -> &str {
        "projecting"
    }
    fn star(&self, p: &IntervalGuard) -> IntervalGuard {
        Interval::default().star(p)
    }
    fn bullet(&self, p: &IntervalGuard, q: &IntervalGuard) -> IntervalGuard {
        Interval::default().bullet(p, q)
    }
    fn circ(&self, p: &IntervalGuard, _: &IntervalGuard) -> IntervalGuard {
        p.clone()
    }
    fn bullet_inv(&self, a: &IntervalGuard, b: &IntervalGuard) -> IntervalGuard {
        Interval::default().bullet_inv(a, b)
    }
    fn circ_inv(&self, a: &IntervalGuard, b: &IntervalGuard) -> IntervalGuard {
        Interval::default().circ_inv(a, b)
    }
    fn sample_guard(&self, rng: &mut TestRng) -> IntervalGuard {
        Interval::default().sample_guard(rng)
    }
}

#[test]
fn interval_satisfies_every_axiom() {
    let t = Interval::default();
    assert!(check_axioms(&t, 1000, 31).passed());
    assert!(check_derived_equations(&t, 1000, 32).passed());
    assert!(check_axioms(&Terminal, 10, 0).passed());
    assert!(check_derived_equations(&Terminal, 10, 0).passed());
}

#[test]
fn inverse_formulas_round_trip_on_a_grid() {
    let t = Interval::default();
    let grid = guard_grid(12);
    for p in &grid {
        for q in &grid {
            let (a, b) = (t.bullet(p, q), t.circ(p, q));
            assert_eq!(&t.bullet_inv(&a, &b), p);
            assert_eq!(&t.circ_inv(&a, &b), q);
            let (pp, qq) = (t.bullet_inv(p, q), t.circ_inv(p, q));
            assert_eq!(&t.bullet(&pp, &qq), p);
            assert_eq!(&t.circ(&pp, &qq), q);
        }
    }
}

#[test]
fn projecting_associator_is_caught() {
    let t = Projecting;
    let verdict = check_axioms(&t, 200, 33);
    let failure = verdict.failure().expect("must fail");
    assert_eq!(failure.index, 2);

    let grid = guard_grid(6);
    let mut failing = BTreeSet::new();
    for p in &grid {
        for q in &grid {
            for r in &grid {
                failing.extend(failing_at(&t, &axioms::<Projecting>(), p, q, r));
            }
        }
    }
    assert_eq!(failing, BTreeSet::from([2, 3, 4, 5]));
    let half = g(1, 2);
    assert!(!failing_at(&t, &axioms::<Projecting>(), &half, &half, &half).contains(&7));
}

fn random_term(rng: &mut TestRng) -> GuardedTerm<IntervalGuard> {
    random::interval_term(rng, 6, &["x", "y", "z", "w"], 12)
}

#[test]
fn every_single_rewrite_preserves_meaning() {
    let t = Interval::default();
    let mut rng = random::rng(34);
    let mut applied = 0usize;
    for _ in 0..1000 {
        let term = random_term(&mut rng);
        let meaning = eval_interval(&term);
        for path in term.positions() {
            for rule in [Rule::Commute, Rule::AssocRight, Rule::AssocLeft, Rule::Idempotent] {
                if let Ok(out) = rewrite(&t, &term, rule, &path) {
                    assert_eq!(eval_interval(&out), meaning, "{rule} at {path:?} on {term}");
                    applied += 1;
                }
            }
        }
    }
    assert!(applied > 1000);
}

#[test]
fn normal_forms_preserve_meaning() {
    let t = Interval::default();
    let order: Vec<String> = ["w", "x", "y", "z"].iter().map(|s| s.to_string()).collect();
    let mut rng = random::rng(35);
    for _ in 0..1000 {
        let term = random_term(&mut rng);
        let meaning = eval_interval(&term);
        if term.all_bot() {
            assert!(normal_form(&t, &term, &order).is_err());
            assert_eq!(normalize_term(&t, &term).unwrap(), Normalized::Bottom);
            continue;
        }
        let nf = normal_form(&t, &term, &order).unwrap();
        assert_eq!(eval_interval(&nf), meaning);
        let merged = normal_form_merged(&term, &order).unwrap();
        assert_eq!(eval_interval(&merged), meaning);
        assert_eq!(normal_form_merged(&nf, &order).unwrap(), merged);

        let n = normalize_term(&t, &term).unwrap();
        assert_eq!(eval_interval(&n.reconstruct().unwrap()), meaning);
        if let Normalized::Partial { term: inner, validity } = &n {
            assert!(!inner.has_bot());
            assert_eq!(validity.value(), &meaning.mass());
        }
    }
}

#[test]
fn interchange_holds_semantically() {
    let t = Interval::default();
    let mut rng = random::rng(36);
    for _ in 0..500 {
        let p = t.sample_guard(&mut rng);
        let qq = t.sample_guard(&mut rng);
        let lhs = parse_interval_term(&format!("((x <{p}> y) <{qq}> (u <{p}> v))")).unwrap();
        let rhs = parse_interval_term(&format!("((x <{qq}> u) <{p}> (y <{qq}> v))")).unwrap();
        assert_eq!(eval_interval(&lhs), eval_interval(&rhs));
    }
}

#[test]
fn printing_round_trips() {
    let mut rng = random::rng(37);
    for _ in 0..300 {
        let term = random_term(&mut rng);
        assert_eq!(parse_interval_term(&term.to_string()).unwrap(), term);
    }
}
