//! Dominions relative to finitely generated quasivarieties, the strong
//! epimorphism surjectivity property, absolutely closed checks, and the
//! monoid zigzag engine.

use std::collections::BTreeMap;
use std::ops::ControlFlow;

use rayon::prelude::*;
use serde::Serialize;

use crate::algebra::{
    all_subuniverses, for_each_hom, product, product_coords, FiniteAlgebra, Homomorphism, Term,
};
use crate::budget::{Meter, SearchBudget, Verdict};
use crate::classops::{membership, rsi_members, ClassSpec};
use crate::error::{Error, Result};
use crate::formula::{Formula, PartialFunctionTable};
use crate::gallery::{isbell_formula, monoid_signature, small_monoids};
use crate::termcond::{condition_failure, TermCondition, TermWitness};
use crate::algebra::term_table;

/// Two homomorphisms into `codomain` that agree on the subalgebra and
/// differ at `element`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SeparatingPair {
    pub element: usize,
    pub codomain: String,
    pub g: Homomorphism,
    pub h: Homomorphism,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DominionReport {
    pub sub: Vec<usize>,
    pub big: String,
    pub class: String,
    /// d_K(A, B), sorted.
    pub result: Vec<usize>,
    /// One separating pair for every element outside the dominion.
    pub witnesses: Vec<SeparatingPair>,
    /// Set when the budget ran out: `result` is then only an upper bound.
    pub incomplete: Option<String>,
}

impl DominionReport {
    pub fn is_trivial(&self) -> bool {
        self.incomplete.is_none() && self.result == self.sub
    }

    /// Elements of the dominion outside the subalgebra.
    pub fn extra(&self) -> Vec<usize> {
        self.result.iter().copied().filter(|e| self.sub.binary_search(e).is_err()).collect()
    }
}

fn normalized(set: &[usize]) -> Vec<usize> {
    let mut s = set.to_vec();
    s.sort_unstable();
    s.dedup();
    s
}

/// Per-element separating pairs found among homomorphisms `b -> c`.
/// Homomorphisms are grouped by their restriction to `sub`; within a group
/// the first map is compared with each later one.
fn separations(
    b: &FiniteAlgebra,
    sub: &[usize],
    c: &FiniteAlgebra,
    meter: &Meter,
) -> Result<Vec<Option<(Homomorphism, Homomorphism)>>> {
    let mut groups: BTreeMap<Vec<usize>, Vec<usize>> = BTreeMap::new();
    let mut out: Vec<Option<(Homomorphism, Homomorphism)>> = vec![None; b.size()];
    let mut open = b.size() - sub.len();
    for_each_hom(b, c, meter, None, false, |m| {
        let key: Vec<usize> = sub.iter().map(|&a| m[a]).collect();
        match groups.get(&key) {
            None => {
                groups.insert(key, m.to_vec());
            }
            Some(first) => {
                for e in 0..m.len() {
                    if out[e].is_none() && first[e] != m[e] {
                        out[e] = Some((Homomorphism::new(first.clone()), Homomorphism::new(m.to_vec())));
                        open -= 1;
                    }
                }
            }
        }
        if open == 0 {
            ControlFlow::Break(())
        } else {
            ControlFlow::Continue(())
        }
    })?;
    Ok(out)
}

/// The equalizer dominion over an explicit list of codomains. No
/// membership check is made on `b`.
pub fn dominion_over(
    sub: &[usize],
    b: &FiniteAlgebra,
    codomains: &[&FiniteAlgebra],
    budget: &SearchBudget,
) -> Result<DominionReport> {
    let class = format!("Q({})", codomains.iter().map(|c| c.name()).collect::<Vec<_>>().join(", "));
    let sub = normalized(sub);
    if sub.iter().any(|&e| e >= b.size()) || !b.is_subuniverse(&sub) {
        return Err(Error::Invalid(format!("{sub:?} is not a subuniverse of `{}`", b.name())));
    }
    let meter = budget.meter();
    let found: Vec<Result<Vec<Option<(Homomorphism, Homomorphism)>>>> =
        codomains.par_iter().map(|c| separations(b, &sub, c, &meter)).collect();
    let mut witnesses: Vec<Option<SeparatingPair>> = vec![None; b.size()];
    let mut incomplete = None;
    for (c, r) in codomains.iter().zip(found) {
        match r {
            Ok(seps) => {
                for (e, s) in seps.into_iter().enumerate() {
                    if let (None, Some((g, h))) = (&witnesses[e], s) {
                        witnesses[e] = Some(SeparatingPair { element: e, codomain: c.name().to_string(), g, h });
                    }
                }
            }
            Err(Error::Budget(msg)) => incomplete = Some(msg),
            Err(e) => return Err(e),
        }
    }
    let result = (0..b.size()).filter(|&e| witnesses[e].is_none()).collect();
    Ok(DominionReport {
        sub,
        big: b.name().to_string(),
        class,
        result,
        witnesses: witnesses.into_iter().flatten().collect(),
        incomplete,
    })
}

/// d_K(A, B) for K = Q(generators): the elements on which every pair of
/// homomorphisms into a generator agreeing on A agrees.
pub fn dominion(sub: &[usize], b: &FiniteAlgebra, k: &ClassSpec, budget: &SearchBudget) -> Result<DominionReport> {
    k.require_signature(b)?;
    if let Verdict::Refuted(why) = membership(b, &k.with_op(crate::classops::ClassOp::Q), budget)? {
        return Err(Error::Invalid(format!("`{}` is not in Q({}): {why:?}", b.name(), names(k))));
    }
    let codomains: Vec<&FiniteAlgebra> = k.generators().collect();
    dominion_over(sub, b, &codomains, budget)
}

fn names(k: &ClassSpec) -> String {
    k.generators().map(|g| g.name()).collect::<Vec<_>>().join(", ")
}

/// How `check_ses` scans for failures.
#[derive(Clone, Debug)]
pub enum SesStrategy {
    /// Complete under a near-unanimity term of arity n: every subalgebra of
    /// every product of n-1 relatively subdirectly irreducible members.
    Unanimity(TermWitness),
    /// Bounded scan over products of at most `max_width` members with at
    /// most `max_size` elements. Never proves the property.
    Stratum { max_width: usize, max_size: usize },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SesProof {
    pub arity: usize,
    pub products: usize,
    pub subalgebras: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SesFailure {
    pub factors: Vec<String>,
    pub sub: Vec<usize>,
    pub element: usize,
    pub coordinates: Vec<usize>,
}

/// Multisets of `width` indices below `n`, in lexicographic order.
fn multisets(n: usize, width: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = Vec::new();
    fn go(n: usize, width: usize, from: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == width {
            out.push(cur.clone());
            return;
        }
        for i in from..n {
            cur.push(i);
            go(n, width, i, cur, out);
            cur.pop();
        }
    }
    go(n, width, 0, &mut cur, &mut out);
    out
}

/// Looks for A ≤ B with d_K(A, B) ≠ A among subalgebras of products of
/// relatively subdirectly irreducible members.
pub fn check_ses(k: &ClassSpec, strategy: &SesStrategy, budget: &SearchBudget) -> Result<Verdict<SesProof, SesFailure>> {
    let (widths, max_size, complete) = match strategy {
        SesStrategy::Unanimity(w) => {
            let n = match w.condition {
                TermCondition::Majority => 3,
                TermCondition::Nu(n) => n,
                _ => return Err(Error::Invalid("the unanimity strategy needs a near-unanimity term".into())),
            };
            for g in k.generators() {
                let table = term_table(g, &w.term, &w.variables)?;
                if condition_failure(g, w.condition, &table).is_some() {
                    return Err(Error::Invalid(format!("`{}` is not a near-unanimity term of `{}`", w.text, g.name())));
                }
            }
            (vec![n - 1], usize::MAX, Some(n))
        }
        SesStrategy::Stratum { max_width, max_size } => ((1..=*max_width).collect(), *max_size, None),
    };
    Verdict::from_result((|| {
        let members = rsi_members(k, budget)?;
        let meter = budget.meter();
        let codomains: Vec<&FiniteAlgebra> = k.generators().collect();
        let (mut products, mut subalgebras) = (0, 0);
        let mut skipped = false;
        for &w in &widths {
            for pick in multisets(members.len(), w) {
                let factors: Vec<&FiniteAlgebra> = pick.iter().map(|&i| &members[i]).collect();
                let size = factors.iter().map(|f| f.size()).product::<usize>();
                if size > max_size {
                    skipped = true;
                    continue;
                }
                let (b, _) = product(k.signature(), &factors)?;
                products += 1;
                for s in all_subuniverses(&b, &meter)? {
                    if s.is_empty() {
                        continue;
                    }
                    subalgebras += 1;
                    meter.tick(1)?;
                    let d = dominion_over(&s, &b, &codomains, budget)?;
                    if let Some(m) = d.incomplete {
                        return Err(Error::Budget(m));
                    }
                    if let Some(&e) = d.extra().first() {
                        return Ok(Verdict::Refuted(SesFailure {
                            factors: factors.iter().map(|f| f.name().to_string()).collect(),
                            sub: s,
                            element: e,
                            coordinates: product_coords(&factors, e),
                        }));
                    }
                }
            }
        }
        match complete {
            Some(arity) if !skipped => Ok(Verdict::Proven(SesProof { arity, products, subalgebras })),
            _ => Ok(Verdict::Unknown(format!(
                "no failure among {subalgebras} subalgebras of {products} products (widths {widths:?}, size <= {max_size})"
            ))),
        }
    })())
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ClosedOnCorpus {
    pub extensions: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct NotClosed {
    pub extension: usize,
    pub big: String,
    pub image: Vec<usize>,
    pub element: usize,
}

/// Whether the embedded image of `a` equals its dominion in every listed
/// extension. Only the corpus is covered.
pub fn check_absolutely_closed(
    a: &FiniteAlgebra,
    k: &ClassSpec,
    extensions: &[(FiniteAlgebra, Homomorphism)],
    budget: &SearchBudget,
) -> Result<Verdict<ClosedOnCorpus, NotClosed>> {
    for (i, (b, e)) in extensions.iter().enumerate() {
        if !e.is_homomorphism(a, b) || !e.is_injective() {
            return Err(Error::Invalid(format!("extension {i}: not an embedding of `{}` into `{}`", a.name(), b.name())));
        }
    }
    Verdict::from_result((|| {
        for (i, (b, e)) in extensions.iter().enumerate() {
            let image = e.image();
            let d = dominion(&image, b, k, budget)?;
            if let Some(m) = d.incomplete {
                return Err(Error::Budget(m));
            }
            if let Some(&x) = d.extra().first() {
                return Ok(Verdict::Refuted(NotClosed { extension: i, big: b.name().to_string(), image, element: x }));
            }
        }
        Ok(Verdict::Proven(ClosedOnCorpus { extensions: extensions.len() }))
    })())
}

/// A witness of B ⊨ φ_n(x1, ..., x(2n+1), b) with the x's in A.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Zigzag {
    pub length: usize,
    pub target: usize,
    pub x: Vec<usize>,
    pub z: Vec<usize>,
    pub w: Vec<usize>,
}

impl Zigzag {
    /// Re-checks every equation of φ_n in `b`.
    pub fn holds_in(&self, b: &FiniteAlgebra, sub: &[usize]) -> Result<bool> {
        if self.x.iter().any(|e| !sub.contains(e)) {
            return Ok(false);
        }
        let def = isbell_formula(self.length);
        let mut asg: BTreeMap<String, usize> = BTreeMap::new();
        asg.insert("y".into(), self.target);
        for (i, &v) in self.x.iter().enumerate() {
            asg.insert(format!("x{}", i + 1), v);
        }
        for i in 0..self.length {
            asg.insert(format!("z{}", i + 1), self.z[i]);
            asg.insert(format!("w{}", i + 1), self.w[i]);
        }
        let body = match &def.formula {
            Formula::Exists(_, body) => body.as_ref().clone(),
            f => f.clone(),
        };
        crate::formula::eval_formula(b, &body, &asg)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct MonoidSeparation {
    pub codomain: String,
    pub g: Homomorphism,
    pub h: Homomorphism,
    /// Largest codomain size tried.
    pub bound: usize,
}

fn require_monoid(b: &FiniteAlgebra) -> Result<()> {
    if b.signature() != &monoid_signature() {
        return Err(Error::Invalid(format!("`{}` does not have the monoid signature", b.name())));
    }
    let n = b.size();
    let e = b.table(1)[0];
    let m = |x: usize, y: usize| b.op(0, &[x, y]);
    let unit = (0..n).all(|x| m(e, x) == x && m(x, e) == x);
    let assoc = (0..n).all(|x| (0..n).all(|y| (0..n).all(|z| m(m(x, y), z) == m(x, m(y, z)))));
    if !unit || !assoc {
        return Err(Error::Invalid(format!("`{}` is not a monoid", b.name())));
    }
    Ok(())
}

#[derive(Clone, Copy)]
enum Slot {
    Var(usize),
    Mul(usize, usize),
}

fn slot(t: &Term, index: &BTreeMap<String, usize>) -> Slot {
    match t {
        Term::Var(v) => Slot::Var(index[v]),
        Term::App(_, args) => match (&args[0], &args[1]) {
            (Term::Var(a), Term::Var(b)) => Slot::Mul(index[a], index[b]),
            _ => unreachable!("Isbell equations are flat"),
        },
    }
}

/// Searches for a zigzag of length exactly `n` over `b` ending in `target`.
fn find_zigzag(b: &FiniteAlgebra, sub: &[usize], target: usize, n: usize, meter: &Meter) -> Result<Option<Zigzag>> {
    let def = isbell_formula(n);
    let (bound, body) = match &def.formula {
        Formula::Exists(vs, body) => (vs.clone(), body.as_ref().clone()),
        _ => unreachable!("n > 0"),
    };
    // assignment order: x1 z1 w1 x2, then x(2i+1) z(i+1) w(i+1) x(2i+2), then x(2n+1)
    let mut order: Vec<String> = vec!["y".into(), "x1".into(), "z1".into(), "w1".into(), "x2".into()];
    for i in 1..n {
        order.extend([format!("x{}", 2 * i + 1), format!("z{}", i + 1), format!("w{}", i + 1), format!("x{}", 2 * i + 2)]);
    }
    order.push(format!("x{}", 2 * n + 1));
    debug_assert_eq!(order.len(), 1 + def.inputs.len() + bound.len());
    let index: BTreeMap<String, usize> = order.iter().enumerate().map(|(i, v)| (v.clone(), i)).collect();
    let eqs: Vec<(Slot, Slot)> = body.equations().iter().map(|(s, t)| (slot(s, &index), slot(t, &index))).collect();
    let last = |s: Slot| match s {
        Slot::Var(a) => a,
        Slot::Mul(a, b) => a.max(b),
    };
    let mut due: Vec<Vec<(Slot, Slot)>> = vec![Vec::new(); order.len()];
    for &(s, t) in &eqs {
        due[last(s).max(last(t))].push((s, t));
    }
    let domains: Vec<Vec<usize>> = order
        .iter()
        .map(|v| if v.starts_with('x') { sub.to_vec() } else { (0..b.size()).collect() })
        .collect();
    let mut val = vec![0usize; order.len()];
    val[0] = target;
    let ev = |s: Slot, val: &[usize]| match s {
        Slot::Var(a) => val[a],
        Slot::Mul(a, c) => b.op(0, &[val[a], val[c]]),
    };
    fn dfs(
        i: usize,
        val: &mut Vec<usize>,
        domains: &[Vec<usize>],
        due: &[Vec<(Slot, Slot)>],
        ev: &dyn Fn(Slot, &[usize]) -> usize,
        meter: &Meter,
    ) -> Result<bool> {
        if i == val.len() {
            return Ok(true);
        }
        for &v in &domains[i] {
            meter.tick(1)?;
            val[i] = v;
            if due[i].iter().all(|&(s, t)| ev(s, val) == ev(t, val)) && dfs(i + 1, val, domains, due, ev, meter)? {
                return Ok(true);
            }
        }
        Ok(false)
    }
    if !dfs(1, &mut val, &domains, &due, &ev, meter)? {
        return Ok(None);
    }
    let get = |name: String| val[index[&name]];
    Ok(Some(Zigzag {
        length: n,
        target,
        x: (1..=2 * n + 1).map(|i| get(format!("x{i}"))).collect(),
        z: (1..=n).map(|i| get(format!("z{i}"))).collect(),
        w: (1..=n).map(|i| get(format!("w{i}"))).collect(),
    }))
}

/// Decides whether `target` lies in the monoid dominion of `sub` in `b`:
/// Proven by a zigzag of length at most `max_length`, Refuted by two
/// homomorphisms into a monoid of size at most `codomain_bound` (B itself
/// is tried first), Unknown otherwise.
pub fn zigzag_membership(
    b: &FiniteAlgebra,
    sub: &[usize],
    target: usize,
    max_length: usize,
    codomain_bound: usize,
    budget: &SearchBudget,
) -> Result<Verdict<Zigzag, MonoidSeparation>> {
    require_monoid(b)?;
    let sub = normalized(sub);
    if target >= b.size() {
        return Err(Error::Invalid(format!("element {target} is outside `{}`", b.name())));
    }
    if !b.is_subuniverse(&sub) {
        return Err(Error::Invalid(format!("{sub:?} is not a submonoid of `{}`", b.name())));
    }
    if sub.contains(&target) {
        return Ok(Verdict::Proven(Zigzag { length: 0, target, x: vec![target], z: vec![], w: vec![] }));
    }
    let meter = budget.meter();
    Verdict::from_result((|| {
        let mut codomains = vec![b.clone()];
        codomains.extend(small_monoids(codomain_bound));
        for c in &codomains {
            if let Some((g, h)) = separations(b, &sub, c, &meter)?.swap_remove(target) {
                return Ok(Verdict::Refuted(MonoidSeparation { codomain: c.name().to_string(), g, h, bound: codomain_bound }));
            }
        }
        for n in 1..=max_length {
            if let Some(z) = find_zigzag(b, &sub, target, n, &meter)? {
                return Ok(Verdict::Proven(z));
            }
        }
        Ok(Verdict::Unknown(format!(
            "no zigzag of length <= {max_length} and no separation into monoids of size <= {codomain_bound}"
        )))
    })())
}

/// Smallest (l, r), ordered by l + r and then l, with a^l · f(a) = a^r on
/// every domain point of every table.
pub fn unary_monoid_law(tables: &[PartialFunctionTable], bound: usize) -> Result<Option<(usize, usize)>> {
    for t in tables {
        if t.arity() != 1 {
            return Err(Error::Invalid("unary tables only".into()));
        }
        require_monoid(t.carrier())?;
    }
    let power = |m: &FiniteAlgebra, a: usize, k: usize| (0..k).fold(m.table(1)[0], |acc, _| m.op(0, &[acc, a]));
    for total in 0..=2 * bound {
        for l in total.saturating_sub(bound)..=total.min(bound) {
            let r = total - l;
            let ok = tables.iter().all(|t| {
                let m = t.carrier();
                t.entries().iter().all(|(args, &v)| m.op(0, &[power(m, args[0], l), v]) == power(m, args[0], r))
            });
            if ok {
                return Ok(Some((l, r)));
            }
        }
    }
    Ok(None)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gallery::{cyclic_group, d2_bdl, d2_rcdl, make_algebra, monoid_inverse, monoid_square};
    use crate::formula::implicit_table;
    use std::sync::Arc;

    fn d2sq(d2: &FiniteAlgebra) -> FiniteAlgebra {
        product(d2.signature(), &[d2, d2]).unwrap().0
    }

    fn oracle(sub: &[usize], b: &FiniteAlgebra, c: &FiniteAlgebra) -> Vec<usize> {
        crate::oracle::dominion(b, sub, &[c]).into_iter().collect()
    }

    #[test]
    fn bdl_three_element_sub_has_full_dominion() {
        let d2 = d2_bdl();
        let b = d2sq(&d2);
        let k = ClassSpec::q(vec![d2.clone()]).unwrap();
        let a = vec![0, 1, 3];
        let r = dominion(&a, &b, &k, &SearchBudget::default()).unwrap();
        assert_eq!(r.result, vec![0, 1, 2, 3]);
        assert_eq!(r.result, oracle(&a, &b, &d2));
        assert!(r.witnesses.is_empty());
    }

    #[test]
    fn rcdl_dominions_are_trivial_and_match_oracle() {
        let d2 = d2_rcdl();
        let b = d2sq(&d2);
        let k = ClassSpec::q(vec![d2.clone()]).unwrap();
        for s in all_subuniverses(&b, &SearchBudget::default().meter()).unwrap() {
            if s.is_empty() {
                continue;
            }
            let r = dominion(&s, &b, &k, &SearchBudget::default()).unwrap();
            assert_eq!(r.result, s);
            assert_eq!(oracle(&s, &b, &d2), s);
            for w in &r.witnesses {
                assert!(s.iter().all(|&a| w.g.apply(a) == w.h.apply(a)));
                assert_ne!(w.g.apply(w.element), w.h.apply(w.element));
            }
        }
    }

    #[test]
    fn dominion_of_whole_algebra() {
        let d2 = d2_bdl();
        let b = d2sq(&d2);
        let k = ClassSpec::q(vec![d2]).unwrap();
        assert_eq!(dominion(&[0, 1, 2, 3], &b, &k, &SearchBudget::default()).unwrap().result, vec![0, 1, 2, 3]);
    }

    #[test]
    fn c5_gadget_dominion() {
        let (c5, d, _) = crate::gallery::c5_counterexample();
        let b = product(c5.signature(), &[&c5, &c5]).unwrap().0;
        let k = ClassSpec::q(vec![c5.clone()]).unwrap();
        let r = dominion(&d, &b, &k, &SearchBudget::default()).unwrap();
        assert!(r.result.contains(&(4 * 5 + 3)));
        assert!(!d.contains(&23));
    }

    #[test]
    fn rcdl_ses_proven_bdl_refuted() {
        let b = SearchBudget::default();
        for (alg, expect_proven) in [(d2_rcdl(), true), (d2_bdl(), false)] {
            let k = ClassSpec::q(vec![alg]).unwrap();
            let w = crate::termcond::term_condition_search_class(&k, TermCondition::Majority, &b).unwrap().proven().unwrap();
            let v = check_ses(&k, &SesStrategy::Unanimity(w), &b).unwrap();
            assert_eq!(v.is_proven(), expect_proven, "{v:?}");
        }
    }

    #[test]
    fn absolutely_closed_examples() {
        let d2 = d2_bdl();
        let b = d2sq(&d2);
        let k = ClassSpec::q(vec![d2.clone()]).unwrap();
        let diag = Homomorphism::new(vec![0, 3]);
        let v = check_absolutely_closed(&d2, &k, &[(b.clone(), diag)], &SearchBudget::default()).unwrap();
        assert!(v.is_proven());
        let (a3, _) = crate::algebra::subalgebra(&b, &[0, 1, 3]).unwrap();
        let v = check_absolutely_closed(&a3, &k, &[(b, Homomorphism::new(vec![0, 1, 3]))], &SearchBudget::default()).unwrap();
        assert_eq!(v.refuted().unwrap().element, 2);
        let v = check_absolutely_closed(&d2, &k, &[(d2.clone(), Homomorphism::identity(2))], &SearchBudget::default()).unwrap();
        assert!(v.is_proven());
    }

    #[test]
    fn zigzag_examples() {
        let z2 = cyclic_group(2).unwrap();
        let b = SearchBudget::default();
        let v = zigzag_membership(&z2, &[0], 1, 2, 4, &b).unwrap();
        let sep = v.refuted().unwrap();
        assert!(sep.g.is_homomorphism(&z2, &z2) && sep.h.is_homomorphism(&z2, &z2));
        let v = zigzag_membership(&z2, &[0], 0, 2, 4, &b).unwrap();
        assert_eq!(v.proven().unwrap().length, 0);
    }

    #[test]
    fn zigzag_verdicts_agree_with_equalizer_oracle() {
        let b = SearchBudget::default();
        let codomains = small_monoids(4);
        let refs: Vec<&FiniteAlgebra> = codomains.iter().collect();
        let mut nontrivial = 0;
        for m in small_monoids(3) {
            for s in all_subuniverses(&m, &b.meter()).unwrap() {
                let d = dominion_over(&s, &m, &refs, &b).unwrap();
                for t in 0..m.size() {
                    match zigzag_membership(&m, &s, t, 2, 4, &b).unwrap() {
                        Verdict::Proven(z) => {
                            assert!(d.result.contains(&t));
                            nontrivial += usize::from(z.length > 0);
                        }
                        Verdict::Refuted(_) => assert!(!d.result.contains(&t)),
                        Verdict::Unknown(_) => {}
                    }
                }
            }
        }
        println!("nontrivial zigzags: {nontrivial}");
    }

    #[test]
    fn found_zigzags_satisfy_the_equations() {
        let b = SearchBudget::default();
        for m in small_monoids(4) {
            for s in all_subuniverses(&m, &b.meter()).unwrap() {
                for t in 0..m.size() {
                    if let Verdict::Proven(z) = zigzag_membership(&m, &s, t, 2, 3, &b).unwrap() {
                        assert!(z.holds_in(&m, &s).unwrap());
                    }
                }
            }
        }
    }

    #[test]
    fn unary_laws() {
        let groups: Vec<PartialFunctionTable> = [2, 3]
            .iter()
            .map(|&n| implicit_table(&cyclic_group(n).unwrap(), &monoid_inverse()).unwrap())
            .collect();
        assert_eq!(unary_monoid_law(&groups, 4).unwrap(), Some((1, 0)));
        let id: Vec<PartialFunctionTable> =
            groups.iter().map(|t| PartialFunctionTable::identity(Arc::new(t.carrier().clone()))).collect();
        assert_eq!(unary_monoid_law(&id, 4).unwrap(), Some((0, 1)));
        let sq = vec![implicit_table(&make_algebra("monoid_c(3)").unwrap(), &monoid_square()).unwrap()];
        assert_eq!(unary_monoid_law(&sq, 4).unwrap(), Some((0, 2)));
    }

    #[test]
    fn non_monoid_rejected() {
        assert!(zigzag_membership(&d2_bdl(), &[0], 0, 1, 2, &SearchBudget::default()).is_err());
    }
}
