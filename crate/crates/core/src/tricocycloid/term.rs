//! Guarded-choice terms, their rewriting, and normal forms.
//!
//! Text format: a variable is `[A-Za-z0-9_]+`, failure is `_|_`, and a choice
//! is `(t1 <g> t2)`. For the interval instance `g` is a rational `p/q`
//! strictly between 0 and 1, and `x ⊕_p y` puts mass `p` on the left branch.

use std::collections::BTreeSet;
use std::fmt;

use crate::dist::SubDist;
use crate::error::{Error, Result};
use crate::possibilistic::NeSet;
use crate::rational::Rational;
use crate::tricocycloid::{IntervalGuard, Star, Tricocycloid};

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum GuardedTerm<G> {
    Var(String),
    Bot,
    Choice(G, Box<GuardedTerm<G>>, Box<GuardedTerm<G>>),
}

impl<G> GuardedTerm<G> {
    pub fn var(name: impl Into<String>) -> Self {
        GuardedTerm::Var(name.into())
    }

    pub fn choice(g: G, l: GuardedTerm<G>, r: GuardedTerm<G>) -> Self {
        GuardedTerm::Choice(g, Box::new(l), Box::new(r))
    }

    pub fn depth(&self) -> usize {
        match self {
            GuardedTerm::Choice(_, l, r) => 1 + l.depth().max(r.depth()),
            _ => 0,
        }
    }

    pub fn leaves(&self) -> Vec<&GuardedTerm<G>> {
        let mut out = Vec::new();
        self.collect_leaves(&mut out);
        out
    }

    fn collect_leaves<'a>(&'a self, out: &mut Vec<&'a GuardedTerm<G>>) {
        match self {
            GuardedTerm::Choice(_, l, r) => {
                l.collect_leaves(out);
                r.collect_leaves(out);
            }
            leaf => out.push(leaf),
        }
    }

    pub fn has_bot(&self) -> bool {
        self.leaves().iter().any(|l| matches!(l, GuardedTerm::Bot))
    }

    pub fn all_bot(&self) -> bool {
        self.leaves().iter().all(|l| matches!(l, GuardedTerm::Bot))
    }

    /// Distinct variables in order of first appearance.
    pub fn variables(&self) -> Vec<String> {
        let mut seen = BTreeSet::new();
        let mut out = Vec::new();
        for leaf in self.leaves() {
            if let GuardedTerm::Var(v) = leaf {
                if seen.insert(v.clone()) {
                    out.push(v.clone());
                }
            }
        }
        out
    }

    /// Paths to every choice node, outermost first.
    pub fn positions(&self) -> Vec<Vec<Dir>> {
        let mut out = Vec::new();
        let mut stack = vec![(self, Vec::new())];
        while let Some((t, path)) = stack.pop() {
            if let GuardedTerm::Choice(_, l, r) = t {
                let mut lp = path.clone();
                lp.push(Dir::Left);
                let mut rp = path.clone();
                rp.push(Dir::Right);
                out.push(path);
                stack.push((r, rp));
                stack.push((l, lp));
            }
        }
        out
    }

    pub fn subterm(&self, path: &[Dir]) -> Option<&GuardedTerm<G>> {
        match (path.split_first(), self) {
            (None, t) => Some(t),
            (Some((Dir::Left, rest)), GuardedTerm::Choice(_, l, _)) => l.subterm(rest),
            (Some((Dir::Right, rest)), GuardedTerm::Choice(_, _, r)) => r.subterm(rest),
            _ => None,
        }
    }
}

impl<G: fmt::Display> fmt::Display for GuardedTerm<G> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GuardedTerm::Var(v) => f.write_str(v),
            GuardedTerm::Bot => f.write_str("_|_"),
            GuardedTerm::Choice(g, l, r) => write!(f, "({l} <{g}> {r})"),
        }
    }
}

struct Parser<'a> {
    src: &'a str,
    pos: usize,
}

impl<'a> Parser<'a> {
    fn err(&self, msg: impl Into<String>) -> Error {
        Error::TermParse {
            pos: self.pos,
            msg: msg.into(),
        }
    }

    fn skip_ws(&mut self) {
        while let Some(c) = self.src[self.pos..].chars().next() {
            if c.is_whitespace() {
                self.pos += c.len_utf8();
            } else {
                break;
            }
        }
    }

    fn peek(&self) -> Option<char> {
        self.src[self.pos..].chars().next()
    }

    fn expect(&mut self, c: char) -> Result<()> {
        self.skip_ws();
        if self.peek() == Some(c) {
            self.pos += c.len_utf8();
            Ok(())
        } else {
            Err(self.err(format!("expected {c:?}")))
        }
    }

    fn term<G>(&mut self, guard: &mut impl FnMut(&str) -> Result<G>) -> Result<GuardedTerm<G>> {
        self.skip_ws();
        if self.src[self.pos..].starts_with("_|_") {
            self.pos += 3;
            return Ok(GuardedTerm::Bot);
        }
        match self.peek() {
            Some('(') => {
                self.pos += 1;
                let l = self.term(guard)?;
                self.expect('<')?;
                let start = self.pos;
                let end = self.src[start..]
                    .find('>')
                    .map(|i| start + i)
                    .ok_or_else(|| self.err("unterminated guard"))?;
                let g = guard(self.src[start..end].trim()).map_err(|e| match e {
                    Error::TermParse { .. } => e,
                    other => Error::TermParse {
                        pos: start,
                        msg: other.to_string(),
                    },
                })?;
                self.pos = end + 1;
                let r = self.term(guard)?;
                self.expect(')')?;
                Ok(GuardedTerm::choice(g, l, r))
            }
            Some(c) if c.is_ascii_alphanumeric() || c == '_' => {
                let start = self.pos;
                while matches!(self.peek(), Some(c) if c.is_ascii_alphanumeric() || c == '_') {
                    self.pos += 1;
                }
                Ok(GuardedTerm::Var(self.src[start..self.pos].to_string()))
            }
            _ => Err(self.err("expected a variable, _|_, or '('")),
        }
    }
}

/// Parses a term, reading each guard with `guard`.
pub fn parse_term<G>(src: &str, mut guard: impl FnMut(&str) -> Result<G>) -> Result<GuardedTerm<G>> {
    let mut p = Parser { src, pos: 0 };
    let t = p.term(&mut guard)?;
    p.skip_ws();
    if p.pos != src.len() {
        return Err(p.err("trailing input"));
    }
    Ok(t)
}

pub fn parse_interval_term(src: &str) -> Result<GuardedTerm<IntervalGuard>> {
    parse_term(src, |g| IntervalGuard::new(g.parse::<Rational>()?))
}

pub fn parse_terminal_term(src: &str) -> Result<GuardedTerm<Star>> {
    parse_term(src, |g| {
        if g == "*" {
            Ok(Star)
        } else {
            Err(Error::Invalid(format!("terminal guard must be *, found {g:?}")))
        }
    })
}

/// Meaning of a term over the interval: the left branch of `⊕_p` gets `p`,
/// the right branch `1-p`; `_|_` leaves feed the failure mass.
pub fn eval_interval(t: &GuardedTerm<IntervalGuard>) -> SubDist<String> {
    let mut weights: Vec<(String, Rational)> = Vec::new();
    let mut bottom = Rational::zero();
    let mut stack = vec![(t, Rational::one())];
    while let Some((t, w)) = stack.pop() {
        match t {
            GuardedTerm::Var(v) => weights.push((v.clone(), w)),
            GuardedTerm::Bot => bottom = bottom + &w,
            GuardedTerm::Choice(p, l, r) => {
                stack.push((r, &w * &p.value().complement()));
                stack.push((l, &w * p.value()));
            }
        }
    }
    SubDist::new(weights, bottom).expect("leaf weights sum to one")
}

/// Meaning of a term over the one-point tricocycloid: the set of reachable
/// leaves, with `None` for `_|_`.
pub fn eval_terminal<G>(t: &GuardedTerm<G>) -> NeSet<Option<String>> {
    NeSet::new(t.leaves().into_iter().map(|l| match l {
        GuardedTerm::Var(v) => Some(v.clone()),
        _ => None,
    }))
    .expect("a term has at least one leaf")
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Dir {
    Left,
    Right,
}

/// Single-step rewrites.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Rule {
    /// `x ⊕_p y → y ⊕_{p*} x`
    Commute,
    /// `(x ⊕_q y) ⊕_p z → x ⊕_{p•q} (y ⊕_{p∘q} z)`
    AssocRight,
    /// `x ⊕_a (y ⊕_b z) → (x ⊕_{a∘⁻¹b} y) ⊕_{a•⁻¹b} z`
    AssocLeft,
    /// `x ⊕_p x → x` for syntactically equal branches.
    Idempotent,
}

impl fmt::Display for Rule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Rule::Commute => "commute",
            Rule::AssocRight => "assoc-right",
            Rule::AssocLeft => "assoc-left",
            Rule::Idempotent => "idempotent",
        })
    }
}

fn path_string(path: &[Dir]) -> String {
    if path.is_empty() {
        return "root".into();
    }
    path.iter()
        .map(|d| match d {
            Dir::Left => "L",
            Dir::Right => "R",
        })
        .collect()
}

fn rewrite_here<T: Tricocycloid>(
    tc: &T,
    t: GuardedTerm<T::Guard>,
    rule: Rule,
) -> std::result::Result<GuardedTerm<T::Guard>, GuardedTerm<T::Guard>> {
    use GuardedTerm::Choice;
    match (rule, t) {
        (Rule::Commute, Choice(p, l, r)) => Ok(Choice(tc.star(&p), r, l)),
        (Rule::AssocRight, Choice(p, l, z)) => match *l {
            Choice(q, x, y) => {
                let outer = tc.bullet(&p, &q);
                let inner = tc.circ(&p, &q);
                Ok(Choice(outer, x, Box::new(Choice(inner, y, z))))
            }
            l => Err(Choice(p, Box::new(l), z)),
        },
        (Rule::AssocLeft, Choice(a, x, r)) => match *r {
            Choice(b, y, z) => {
                let p = tc.bullet_inv(&a, &b);
                let q = tc.circ_inv(&a, &b);
                Ok(Choice(p, Box::new(Choice(q, x, y)), z))
            }
            r => Err(Choice(a, x, Box::new(r))),
        },
        (Rule::Idempotent, Choice(p, l, r)) => {
            if l == r {
                Ok(*l)
            } else {
                Err(Choice(p, l, r))
            }
        }
        (_, t) => Err(t),
    }
}

fn rewrite_owned<T: Tricocycloid>(
    tc: &T,
    t: GuardedTerm<T::Guard>,
    rule: Rule,
    path: &[Dir],
) -> std::result::Result<GuardedTerm<T::Guard>, GuardedTerm<T::Guard>> {
    match path.split_first() {
        None => rewrite_here(tc, t, rule),
        Some((dir, rest)) => match t {
            GuardedTerm::Choice(p, l, r) => match dir {
                Dir::Left => match rewrite_owned(tc, *l, rule, rest) {
                    Ok(l) => Ok(GuardedTerm::Choice(p, Box::new(l), r)),
                    Err(l) => Err(GuardedTerm::Choice(p, Box::new(l), r)),
                },
                Dir::Right => match rewrite_owned(tc, *r, rule, rest) {
                    Ok(r) => Ok(GuardedTerm::Choice(p, l, Box::new(r))),
                    Err(r) => Err(GuardedTerm::Choice(p, l, Box::new(r))),
                },
            },
            leaf => Err(leaf),
        },
    }
}

/// Applies `rule` at the subterm reached by `path`.
pub fn rewrite<T: Tricocycloid>(
    tc: &T,
    t: &GuardedTerm<T::Guard>,
    rule: Rule,
    path: &[Dir],
) -> Result<GuardedTerm<T::Guard>> {
    rewrite_owned(tc, t.clone(), rule, path).map_err(|_| Error::Rewrite {
        rule: rule.to_string(),
        path: path_string(path),
    })
}

fn must<T: Tricocycloid>(
    tc: &T,
    t: GuardedTerm<T::Guard>,
    rule: Rule,
    path: &[Dir],
) -> GuardedTerm<T::Guard> {
    rewrite_owned(tc, t, rule, path)
        .unwrap_or_else(|_| unreachable!("{rule} must apply at {}", path_string(path)))
}

/// Re-brackets into a right comb `l1 ⊕ (l2 ⊕ (... ⊕ ln))` using only
/// right-association.
pub fn right_comb<T: Tricocycloid>(tc: &T, t: &GuardedTerm<T::Guard>) -> GuardedTerm<T::Guard> {
    let mut t = t.clone();
    let mut path = Vec::new();
    loop {
        match t.subterm(&path) {
            Some(GuardedTerm::Choice(_, l, _)) if matches!(**l, GuardedTerm::Choice(..)) => {
                t = must(tc, t, Rule::AssocRight, &path);
            }
            Some(GuardedTerm::Choice(..)) => path.push(Dir::Right),
            _ => return t,
        }
    }
}

fn comb_leaf<G>(t: &GuardedTerm<G>, i: usize, n: usize) -> &GuardedTerm<G> {
    let path: Vec<Dir> = std::iter::repeat_n(Dir::Right, i).collect();
    let node = t.subterm(&path).expect("comb position");
    if i + 1 == n {
        node
    } else {
        match node {
            GuardedTerm::Choice(_, l, _) => l,
            _ => unreachable!("comb node"),
        }
    }
}

/// Swaps comb leaves `i` and `i+1` by rewriting.
fn swap_adjacent<T: Tricocycloid>(
    tc: &T,
    t: GuardedTerm<T::Guard>,
    i: usize,
    n: usize,
) -> GuardedTerm<T::Guard> {
    let mut path: Vec<Dir> = std::iter::repeat_n(Dir::Right, i).collect();
    if i + 2 == n {
        return must(tc, t, Rule::Commute, &path);
    }
    let t = must(tc, t, Rule::AssocLeft, &path);
    path.push(Dir::Left);
    let t = must(tc, t, Rule::Commute, &path);
    path.pop();
    must(tc, t, Rule::AssocRight, &path)
}

fn leaf_key<G>(leaf: &GuardedTerm<G>, order: &[String]) -> Result<usize> {
    match leaf {
        GuardedTerm::Var(v) => order
            .iter()
            .position(|o| o == v)
            .ok_or_else(|| Error::NoNormalForm(format!("variable {v:?} is not in the order"))),
        _ => Ok(order.len()),
    }
}

/// Syntactic normal form: a right comb whose leaves follow `order`, with
/// `_|_` leaves last. Built by commutation and association rewrites only,
/// so it works for any tricocycloid; repeated variables are kept.
pub fn normal_form<T: Tricocycloid>(
    tc: &T,
    t: &GuardedTerm<T::Guard>,
    order: &[String],
) -> Result<GuardedTerm<T::Guard>> {
    if t.all_bot() {
        return Err(Error::NoNormalForm("every leaf is _|_".into()));
    }
    let mut comb = right_comb(tc, t);
    let n = comb.leaves().len();
    let mut keys = comb
        .leaves()
        .into_iter()
        .map(|l| leaf_key(l, order))
        .collect::<Result<Vec<_>>>()?;
    // bubble sort keeps equal keys in place
    for pass in 0..n {
        let mut swapped = false;
        for i in 0..n.saturating_sub(1 + pass) {
            if keys[i] > keys[i + 1] {
                comb = swap_adjacent(tc, comb, i, n);
                keys.swap(i, i + 1);
                swapped = true;
            }
        }
        if !swapped {
            break;
        }
    }
    debug_assert!((0..n).all(|i| leaf_key(comb_leaf(&comb, i, n), order).ok() == Some(keys[i])));
    Ok(comb)
}

/// Normal form over the interval, computed from the meaning of the term:
/// each variable appears once, in `order`, then `_|_` if it has mass.
pub fn normal_form_merged(
    t: &GuardedTerm<IntervalGuard>,
    order: &[String],
) -> Result<GuardedTerm<IntervalGuard>> {
    if t.all_bot() {
        return Err(Error::NoNormalForm("every leaf is _|_".into()));
    }
    let meaning = eval_interval(t);
    for v in meaning.support() {
        if !order.contains(v) {
            return Err(Error::NoNormalForm(format!("variable {v:?} is not in the order")));
        }
    }
    let mut leaves: Vec<(GuardedTerm<IntervalGuard>, Rational)> = order
        .iter()
        .filter_map(|v| {
            let w = meaning.weight(v);
            w.is_positive().then(|| (GuardedTerm::Var(v.clone()), w))
        })
        .collect();
    if meaning.bottom().is_positive() {
        leaves.push((GuardedTerm::Bot, meaning.bottom().clone()));
    }
    let (last, _) = leaves.pop().expect("non-failure mass exists");
    // guard i is w_i over the mass still to place from leaf i onwards
    let mut rest = Rational::one();
    let mut spine = Vec::with_capacity(leaves.len());
    for (leaf, w) in leaves {
        let p = IntervalGuard::new(&w / &rest)?;
        rest = rest - &w;
        spine.push((leaf, p));
    }
    Ok(spine
        .into_iter()
        .rev()
        .fold(last, |acc, (leaf, p)| GuardedTerm::choice(p, leaf, acc)))
}

/// Result of splitting a term as `n(t) ⊕_v _|_`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Normalized<G> {
    /// Every leaf is `_|_`.
    Bottom,
    /// No `_|_` leaf: the term is its own normalization.
    Total(GuardedTerm<G>),
    /// `t = term ⊕_validity _|_`, with `term` free of `_|_`.
    Partial { term: GuardedTerm<G>, validity: G },
}

impl<G: Clone> Normalized<G> {
    /// Rebuilds `n(t) ⊕_v _|_` (or `n(t)` when total).
    pub fn reconstruct(&self) -> Option<GuardedTerm<G>> {
        match self {
            Normalized::Bottom => None,
            Normalized::Total(t) => Some(t.clone()),
            Normalized::Partial { term, validity } => Some(GuardedTerm::choice(
                validity.clone(),
                term.clone(),
                GuardedTerm::Bot,
            )),
        }
    }
}

/// Splits off failure: moves every `_|_` to the end of a comb, merges them by
/// idempotency, then re-associates leftwards until the term has the shape
/// `n(t) ⊕_v _|_`.
pub fn normalize_term<T: Tricocycloid>(
    tc: &T,
    t: &GuardedTerm<T::Guard>,
) -> Result<Normalized<T::Guard>> {
    if t.all_bot() {
        return Ok(Normalized::Bottom);
    }
    if !t.has_bot() {
        return Ok(Normalized::Total(t.clone()));
    }
    // every variable shares one key, so the sort only moves `_|_` right
    let all_vars_first = |leaf: &GuardedTerm<T::Guard>| match leaf {
        GuardedTerm::Var(_) => 0,
        _ => 1,
    };
    let mut comb = right_comb(tc, t);
    let n = comb.leaves().len();
    let mut keys: Vec<u8> = comb.leaves().into_iter().map(all_vars_first).collect();
    for pass in 0..n {
        let mut swapped = false;
        for i in 0..n.saturating_sub(1 + pass) {
            if keys[i] > keys[i + 1] {
                comb = swap_adjacent(tc, comb, i, n);
                keys.swap(i, i + 1);
                swapped = true;
            }
        }
        if !swapped {
            break;
        }
    }
    let vars = keys.iter().filter(|&&k| k == 0).count();
    let bots = n - vars;

    // collapse the trailing `_|_ ⊕ ... ⊕ _|_`
    for k in (0..bots - 1).rev() {
        let path: Vec<Dir> = std::iter::repeat_n(Dir::Right, vars + k).collect();
        comb = must(tc, comb, Rule::Idempotent, &path);
    }

    // now `x1 ⊕ (x2 ⊕ ... (xk ⊕_v _|_))`; pull `_|_` out one level at a time
    for depth in (0..vars - 1).rev() {
        let path: Vec<Dir> = std::iter::repeat_n(Dir::Right, depth).collect();
        comb = must(tc, comb, Rule::AssocLeft, &path);
    }
    match comb {
        GuardedTerm::Choice(v, term, bot) if *bot == GuardedTerm::Bot => Ok(Normalized::Partial {
            term: *term,
            validity: v,
        }),
        other => unreachable!("normalization ended in {other:?}"),
    }
}
