//! Term conditions (near-unanimity, Mal'cev, Pixley, discriminator),
//! rigidity, primality and interpolant search.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::str::FromStr;

use serde::Serialize;

use crate::algebra::{automorphisms, odometer, sg, term_table, FiniteAlgebra, Homomorphism, Term};
use crate::budget::{Meter, SearchBudget, Verdict};
use crate::classops::{assignment_coordinates, corpus, ClassSpec};
use crate::closure::{close, Closure};
use crate::congruence::cg;
use crate::error::{Error, Result};
use crate::formula::{classify, eval_formula, implicit_relation, Formula, FormulaClass, ImplicitDef};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum TermCondition {
    /// t(y,x,..,x) = t(x,y,x,..,x) = .. = t(x,..,x,y) = x
    Nu(usize),
    Majority,
    /// p(x,y,y) = x = p(y,y,x)
    Malcev,
    /// p(x,y,y) = p(x,y,x) = p(y,y,x) = x
    Pixley,
    /// The quaternary discriminator: d(a,b,c,d) = c if a = b, else d.
    Discriminator,
}

impl TermCondition {
    pub fn arity(&self) -> usize {
        match self {
            TermCondition::Nu(n) => *n,
            TermCondition::Majority | TermCondition::Malcev | TermCondition::Pixley => 3,
            TermCondition::Discriminator => 4,
        }
    }

    /// The value the condition prescribes at a tuple, if any.
    pub fn required(&self, t: &[usize]) -> Option<usize> {
        match self {
            TermCondition::Nu(_) | TermCondition::Majority => {
                let n = t.len();
                for &cand in t.iter().take(2) {
                    if t.iter().filter(|&&v| v == cand).count() >= n - 1 {
                        return Some(cand);
                    }
                }
                None
            }
            TermCondition::Malcev => {
                if t[1] == t[2] {
                    Some(t[0])
                } else if t[0] == t[1] {
                    Some(t[2])
                } else {
                    None
                }
            }
            TermCondition::Pixley => {
                if t[1] == t[2] {
                    Some(t[0])
                } else if t[0] == t[2] {
                    Some(t[0])
                } else if t[0] == t[1] {
                    Some(t[2])
                } else {
                    None
                }
            }
            TermCondition::Discriminator => Some(if t[0] == t[1] { t[2] } else { t[3] }),
        }
    }

    pub fn variables(&self) -> Vec<String> {
        let n = self.arity();
        if n <= 3 {
            ["x", "y", "z"][..n].iter().map(|s| s.to_string()).collect()
        } else {
            (1..=n).map(|i| format!("x{i}")).collect()
        }
    }
}

impl fmt::Display for TermCondition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TermCondition::Nu(n) => write!(f, "nu({n})"),
            TermCondition::Majority => f.write_str("majority"),
            TermCondition::Malcev => f.write_str("malcev"),
            TermCondition::Pixley => f.write_str("pixley"),
            TermCondition::Discriminator => f.write_str("discriminator"),
        }
    }
}

impl FromStr for TermCondition {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim().to_ascii_lowercase();
        Ok(match s.as_str() {
            "majority" => TermCondition::Majority,
            "malcev" | "maltsev" => TermCondition::Malcev,
            "pixley" => TermCondition::Pixley,
            "discriminator" => TermCondition::Discriminator,
            _ => {
                let n = s
                    .strip_prefix("nu(")
                    .and_then(|r| r.strip_suffix(')'))
                    .or_else(|| s.strip_prefix("nu"))
                    .and_then(|r| r.parse::<usize>().ok())
                    .ok_or_else(|| Error::Invalid(format!("unknown term condition `{s}`")))?;
                if n < 3 {
                    return Err(Error::Invalid("near-unanimity needs arity at least 3".into()));
                }
                TermCondition::Nu(n)
            }
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TermWitness {
    pub condition: TermCondition,
    pub term: Term,
    pub text: String,
    pub variables: Vec<String>,
    /// How the term was found: "closure" or "shannon".
    pub route: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct NoTerm {
    pub condition: TermCondition,
    /// Number of distinct term operations on the constrained tuples.
    pub closure_size: usize,
    pub coordinates: usize,
}

/// Tuples constrained by the condition over each algebra, with required values.
fn condition_coordinates<'a>(algebras: &[&'a FiniteAlgebra], cond: TermCondition) -> (Vec<&'a FiniteAlgebra>, Vec<Vec<u8>>, Vec<u8>) {
    let n = cond.arity();
    let mut coords = Vec::new();
    let mut vectors = vec![Vec::new(); n];
    let mut target = Vec::new();
    for &a in algebras {
        let mut t = vec![0usize; n];
        loop {
            if let Some(v) = cond.required(&t) {
                coords.push(a);
                for (vec, &x) in vectors.iter_mut().zip(&t) {
                    vec.push(x as u8);
                }
                target.push(v as u8);
            }
            if !odometer(&mut t, a.size()) {
                break;
            }
        }
    }
    (coords, vectors, target)
}

/// First tuple where the term table violates the condition.
pub fn condition_failure(a: &FiniteAlgebra, cond: TermCondition, table: &[usize]) -> Option<Vec<usize>> {
    let n = cond.arity();
    let mut t = vec![0usize; n];
    let mut i = 0;
    loop {
        if let Some(v) = cond.required(&t) {
            if table[i] != v {
                return Some(t);
            }
        }
        i += 1;
        if !odometer(&mut t, a.size()) {
            return None;
        }
    }
}

/// Searches for a term satisfying the condition in `a`.
pub fn term_condition_search(a: &FiniteAlgebra, cond: TermCondition, budget: &SearchBudget) -> Result<Verdict<TermWitness, NoTerm>> {
    term_condition_search_all(&[a], cond, budget)
}

/// Searches for one term satisfying the condition in every generator of `k`.
pub fn term_condition_search_class(k: &ClassSpec, cond: TermCondition, budget: &SearchBudget) -> Result<Verdict<TermWitness, NoTerm>> {
    let gens: Vec<&FiniteAlgebra> = k.generators().collect();
    term_condition_search_all(&gens, cond, budget)
}

fn term_condition_search_all(algebras: &[&FiniteAlgebra], cond: TermCondition, budget: &SearchBudget) -> Result<Verdict<TermWitness, NoTerm>> {
    let sig = algebras[0].signature().clone();
    for a in algebras {
        algebras[0].require_same_signature(a)?;
    }
    let vars = cond.variables();
    let (coords, vectors, target) = condition_coordinates(algebras, cond);
    let gens: Vec<(String, Vec<u8>)> = vars.iter().cloned().zip(vectors).collect();
    let mut shannon: Option<BinaryClone> = None;
    let stop = |v: &[u8]| v == &target[..];
    let found = match close(&sig, &coords, &gens, &budget.meter(), Some(&stop)) {
        Ok(cl) => Some(cl),
        // A single algebra whose binary clone is complete is primal, so the
        // term exists and can be assembled from binary term operations.
        Err(Error::Budget(msg)) => match algebras {
            [a] => match binary_clone(a, budget)? {
                Some(b) if b.is_complete() => {
                    shannon = Some(b);
                    None
                }
                _ => return Ok(Verdict::Unknown(msg)),
            },
            _ => return Ok(Verdict::Unknown(msg)),
        },
        Err(e) => return Err(e),
    };
    let (term, route) = match found {
        Some(cl) => match cl.found {
            Some(i) => (cl.term(i), "closure"),
            None => {
                return Ok(Verdict::Refuted(NoTerm { condition: cond, closure_size: cl.len(), coordinates: coords.len() }));
            }
        },
        None => {
            let a = algebras[0];
            let n = cond.arity();
            let mut t = vec![0usize; n];
            let mut table = Vec::new();
            loop {
                table.push(cond.required(&t).unwrap_or(t[0]));
                if !odometer(&mut t, a.size()) {
                    break;
                }
            }
            (shannon.unwrap().term_for(a, &table, &vars)?, "shannon")
        }
    };
    for a in algebras {
        let table = term_table(a, &term, &vars)?;
        if let Some(t) = condition_failure(a, cond, &table) {
            return Err(Error::Invalid(format!("internal: witness fails at {t:?} in `{}`", a.name())));
        }
    }
    Ok(Verdict::Proven(TermWitness {
        condition: cond,
        text: term.to_string(),
        term,
        variables: vars,
        route: route.into(),
    }))
}

/// The binary term operations of a small algebra.
pub struct BinaryClone {
    closure: Closure,
    size: usize,
}

impl BinaryClone {
    pub fn len(&self) -> usize {
        self.closure.len()
    }

    pub fn is_empty(&self) -> bool {
        self.closure.is_empty()
    }

    /// Whether every binary operation is a term operation.
    pub fn is_complete(&self) -> bool {
        Some(self.closure.len()) == all_binary_count(self.size)
    }

    fn lookup(&self, table: &[usize], x: &Term, y: &Term) -> Result<Term> {
        let v: Vec<u8> = table.iter().map(|&e| e as u8).collect();
        let i = self
            .closure
            .find(&v)
            .ok_or_else(|| Error::Invalid("binary operation is not a term operation".into()))?;
        let map: BTreeMap<String, Term> = [("x".to_string(), x.clone()), ("y".to_string(), y.clone())].into();
        Ok(self.closure.term(i).substitute(&map))
    }

    /// A term for an arbitrary operation given by its row-major table, by
    /// expansion in the first variable:
    /// F(x1,..) = max_a min(chi_a(x1), F(a, x2, ..)) with the index order.
    pub fn term_for(&self, a: &FiniteAlgebra, table: &[usize], vars: &[String]) -> Result<Term> {
        let k = a.size();
        let v: Vec<Term> = vars.iter().map(|s| Term::Var(s.clone())).collect();
        match vars.len() {
            0 => Err(Error::Invalid("nullary targets are not supported".into())),
            1 => {
                let t: Vec<usize> = (0..k * k).map(|i| table[i / k]).collect();
                self.lookup(&t, &v[0], &v[0])
            }
            2 => self.lookup(table, &v[0], &v[1]),
            n => {
                let top = k - 1;
                let max: Vec<usize> = (0..k * k).map(|i| (i / k).max(i % k)).collect();
                let min: Vec<usize> = (0..k * k).map(|i| (i / k).min(i % k)).collect();
                let stride = table.len() / k;
                let mut acc: Option<Term> = None;
                for c in 0..k {
                    let chi: Vec<usize> = (0..k * k).map(|i| if i / k == c { top } else { 0 }).collect();
                    let chi_t = self.lookup(&chi, &v[0], &v[0])?;
                    let rest = self.term_for(a, &table[c * stride..(c + 1) * stride], &vars[1..n])?;
                    let piece = self.lookup(&min, &chi_t, &rest)?;
                    acc = Some(match acc {
                        None => piece,
                        Some(prev) => self.lookup(&max, &prev, &piece)?,
                    });
                }
                Ok(acc.unwrap())
            }
        }
    }
}

fn all_binary_count(k: usize) -> Option<usize> {
    k.checked_pow((k * k) as u32)
}

/// Closure of the two binary projections, when k^(k²) fits the budget.
pub fn binary_clone(a: &FiniteAlgebra, budget: &SearchBudget) -> Result<Option<BinaryClone>> {
    let k = a.size();
    match all_binary_count(k) {
        Some(c) if c <= budget.max_elements && k <= 256 => {}
        _ => return Ok(None),
    }
    let coords: Vec<&FiniteAlgebra> = vec![a; k * k];
    let x: Vec<u8> = (0..k * k).map(|i| (i / k) as u8).collect();
    let y: Vec<u8> = (0..k * k).map(|i| (i % k) as u8).collect();
    let gens = vec![("x".to_string(), x), ("y".to_string(), y)];
    match close(a.signature(), &coords, &gens, &budget.meter(), None) {
        Ok(closure) => Ok(Some(BinaryClone { closure, size: k })),
        Err(Error::Budget(_)) => Ok(None),
        Err(e) => Err(e),
    }
}

/// No automorphism other than the identity.
pub fn is_rigid(a: &FiniteAlgebra) -> Result<bool> {
    Ok(automorphisms(a, &SearchBudget::default().meter())?.len() == 1)
}

/// Which argument decides primality.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum PrimalRoute {
    /// Cheap refutations, then the unary clone, then the majority
    /// criterion, then the binary clone, then the reference test.
    Auto,
    /// On three or more elements: all unary operations are term operations
    /// and some basic operation is onto and depends on two arguments.
    UnaryClone,
    /// Every binary operation is a term operation.
    BinaryClone,
    /// A majority term plus: every subuniverse of A² is the diagonal or A².
    Majority,
    /// Pixley term, simple, rigid, no proper subalgebras.
    Reference,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub enum PrimalProof {
    Trivial,
    UnaryClone { operation: String },
    BinaryClone { operations: usize },
    Majority { term: String },
    Reference { pixley: String },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub enum NotPrimal {
    ProperSubuniverse(Vec<usize>),
    Automorphism(Homomorphism),
    Congruence(String),
    /// Only this many of the unary operations are term operations.
    UnaryClone { operations: usize, all: usize },
    /// Only this many of the binary operations are term operations.
    BinaryClone { operations: usize, all: usize },
    /// Sg of this pair of A² is neither the diagonal nor A².
    Subpower { pair: (usize, usize), size: usize },
    NoPixley { closure_size: usize },
}

/// Decides primality. All routes agree where they terminate.
pub fn is_primal(a: &FiniteAlgebra, budget: &SearchBudget) -> Result<Verdict<PrimalProof, NotPrimal>> {
    is_primal_via(a, budget, PrimalRoute::Auto)
}

pub fn is_primal_via(a: &FiniteAlgebra, budget: &SearchBudget, route: PrimalRoute) -> Result<Verdict<PrimalProof, NotPrimal>> {
    if a.is_trivial() {
        return Ok(Verdict::Proven(PrimalProof::Trivial));
    }
    let k = a.size();
    let cheap = |a: &FiniteAlgebra| -> Result<Option<NotPrimal>> {
        for x in 0..k {
            let s = sg(a, &[x]);
            if s.len() < k {
                return Ok(Some(NotPrimal::ProperSubuniverse(s)));
            }
        }
        let auts = automorphisms(a, &budget.meter())?;
        if let Some(h) = auts.into_iter().find(|h| h.map.iter().enumerate().any(|(i, &v)| i != v)) {
            return Ok(Some(NotPrimal::Automorphism(h)));
        }
        for x in 0..k {
            for y in x + 1..k {
                let th = cg(a, &[(x, y)]);
                if !th.is_total() {
                    return Ok(Some(NotPrimal::Congruence(th.to_string())));
                }
            }
        }
        Ok(None)
    };
    Verdict::from_result((|| match route {
        PrimalRoute::BinaryClone => binary_route(a, budget),
        PrimalRoute::UnaryClone => unary_route(a, budget),
        PrimalRoute::Majority => {
            if let Some(r) = cheap(a)? {
                return Ok(Verdict::Refuted(r));
            }
            majority_route(a, budget)
        }
        PrimalRoute::Reference => reference_route(a, budget, &cheap),
        PrimalRoute::Auto => {
            if let Some(r) = cheap(a)? {
                return Ok(Verdict::Refuted(r));
            }
            let v = unary_route(a, budget)?;
            if !v.is_unknown() {
                return Ok(v);
            }
            if k <= 2 {
                let v = binary_route(a, budget)?;
                if !v.is_unknown() {
                    return Ok(v);
                }
            }
            let v = majority_route(a, budget)?;
            if !v.is_unknown() {
                return Ok(v);
            }
            let v = binary_route(a, budget)?;
            if !v.is_unknown() {
                return Ok(v);
            }
            reference_route(a, budget, &cheap)
        }
    })())
}

/// Słupecki's criterion: on k >= 3 elements a clone with every unary
/// operation and an onto operation depending on two arguments is full.
fn unary_route(a: &FiniteAlgebra, budget: &SearchBudget) -> Result<Verdict<PrimalProof, NotPrimal>> {
    let k = a.size();
    let all = match k.checked_pow(k as u32) {
        Some(c) if k >= 3 && c <= budget.max_elements && k <= 256 => c,
        _ => return Ok(Verdict::Unknown("unary clone route needs 3 <= k and k^k within the budget".into())),
    };
    let coords: Vec<&FiniteAlgebra> = vec![a; k];
    let x: Vec<u8> = (0..k).map(|i| i as u8).collect();
    let cl = close(a.signature(), &coords, &[("x".to_string(), x)], &budget.meter(), None)?;
    if cl.len() < all {
        return Ok(Verdict::Refuted(NotPrimal::UnaryClone { operations: cl.len(), all }));
    }
    let sig = a.signature();
    for s in 0..sig.len() {
        let r = sig.arity(s);
        if r < 2 {
            continue;
        }
        let table = a.table(s);
        let onto = (0..k).all(|v| table.contains(&v));
        let essential = (0..r).filter(|&i| depends_on(table, k, r, i)).count();
        if onto && essential >= 2 {
            return Ok(Verdict::Proven(PrimalProof::UnaryClone { operation: sig.name(s).to_string() }));
        }
    }
    Ok(Verdict::Unknown("no basic operation is onto and essentially at least binary".into()))
}

fn depends_on(table: &[usize], k: usize, r: usize, i: usize) -> bool {
    let stride = k.pow((r - 1 - i) as u32);
    (0..table.len()).any(|idx| {
        let digit = (idx / stride) % k;
        (0..k).any(|d| d != digit && table[idx - digit * stride + d * stride] != table[idx])
    })
}

fn binary_route(a: &FiniteAlgebra, budget: &SearchBudget) -> Result<Verdict<PrimalProof, NotPrimal>> {
    let k = a.size();
    match binary_clone(a, budget)? {
        None => Ok(Verdict::Unknown("binary clone exceeds the budget".into())),
        Some(b) if b.is_complete() => Ok(Verdict::Proven(PrimalProof::BinaryClone { operations: b.len() })),
        Some(b) => Ok(Verdict::Refuted(NotPrimal::BinaryClone { operations: b.len(), all: all_binary_count(k).unwrap() })),
    }
}

fn majority_route(a: &FiniteAlgebra, budget: &SearchBudget) -> Result<Verdict<PrimalProof, NotPrimal>> {
    let w = match term_condition_search(a, TermCondition::Majority, budget)? {
        Verdict::Proven(w) => w,
        Verdict::Refuted(_) => return Ok(Verdict::Unknown("no majority term; the criterion does not apply".into())),
        Verdict::Unknown(m) => return Ok(Verdict::Unknown(m)),
    };
    let k = a.size();
    let (sq, _) = crate::algebra::product(a.signature(), &[a, a])?;
    for x in 0..k {
        for y in 0..k {
            if x == y {
                continue;
            }
            let s = sg(&sq, &[x * k + y]);
            if s.len() < k * k {
                return Ok(Verdict::Refuted(NotPrimal::Subpower { pair: (x, y), size: s.len() }));
            }
        }
    }
    Ok(Verdict::Proven(PrimalProof::Majority { term: w.text }))
}

fn reference_route(
    a: &FiniteAlgebra,
    budget: &SearchBudget,
    cheap: &dyn Fn(&FiniteAlgebra) -> Result<Option<NotPrimal>>,
) -> Result<Verdict<PrimalProof, NotPrimal>> {
    if let Some(r) = cheap(a)? {
        return Ok(Verdict::Refuted(r));
    }
    match term_condition_search(a, TermCondition::Pixley, budget)? {
        Verdict::Proven(w) => Ok(Verdict::Proven(PrimalProof::Reference { pixley: w.text })),
        Verdict::Refuted(n) => Ok(Verdict::Refuted(NotPrimal::NoPixley { closure_size: n.closure_size })),
        Verdict::Unknown(m) => Ok(Verdict::Unknown(m)),
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Interpolant {
    pub term: Term,
    pub text: String,
    /// Algebras on which agreement was verified.
    pub checked: Vec<String>,
}

/// Domain of the operation on `a` with values; None when not functional.
fn graph(a: &FiniteAlgebra, def: &ImplicitDef, meter: &Meter) -> Result<BTreeMap<Vec<usize>, usize>> {
    let rel = implicit_relation(a, def, meter)?;
    let mut out = BTreeMap::new();
    for (x, ys) in rel {
        if ys.len() != 1 {
            return Err(Error::NotFunctional(format!("`{}` at {x:?}", a.name())));
        }
        out.insert(x, *ys.iter().next().unwrap());
    }
    Ok(out)
}

/// Looks for a term agreeing with the implicit operation on its domain in
/// every generator, breadth-first over the free algebra on the inputs, then
/// verifies it on the corpus (generators, their subalgebras, binary products).
pub fn search_interpolant_term(k: &ClassSpec, def: &ImplicitDef, budget: &SearchBudget) -> Result<Verdict<Interpolant, String>> {
    def.validate()?;
    let meter = budget.meter();
    Verdict::from_result((|| {
        let n = def.arity();
        let (coords, vectors) = assignment_coordinates(k, n, &meter)?;
        // required value at each coordinate (255 = unconstrained)
        let mut target = Vec::with_capacity(coords.len());
        for g in k.generators() {
            let gr = graph(g, def, &meter)?;
            let mut t = vec![0usize; n];
            loop {
                target.push(gr.get(&t).map_or(u8::MAX, |&v| v as u8));
                if !odometer(&mut t, g.size()) {
                    break;
                }
            }
        }
        if n == 0 {
            return Ok(Verdict::Unknown("nullary operations are not searched".into()));
        }
        let gens: Vec<(String, Vec<u8>)> = def.inputs.iter().cloned().zip(vectors).collect();
        let stop = |v: &[u8]| v.iter().zip(&target).all(|(&x, &t)| t == u8::MAX || x == t);
        let cl = close(k.signature(), &coords, &gens, &meter, Some(&stop))?;
        let Some(i) = cl.found else {
            return Ok(Verdict::Refuted(format!(
                "none of the {} term operations of {k} in {:?} agrees with the operation",
                cl.len(),
                def.inputs
            )));
        };
        let term = cl.term(i);
        let mut checked = Vec::new();
        for c in corpus(k, budget)? {
            let gr = graph(&c, def, &meter)?;
            let table = term_table(&c, &term, &def.inputs)?;
            let mut t = vec![0usize; n];
            let mut idx = 0;
            loop {
                if let Some(&v) = gr.get(&t) {
                    if table[idx] != v {
                        return Ok(Verdict::Unknown(format!(
                            "candidate `{term}` disagrees on `{}` at {t:?}",
                            c.name()
                        )));
                    }
                }
                idx += 1;
                if !odometer(&mut t, c.size()) {
                    break;
                }
            }
            checked.push(c.name().to_string());
        }
        Ok(Verdict::Proven(Interpolant { text: term.to_string(), term, checked }))
    })())
}

/// Searches conjunctions of at most `max_eqs` equations between terms in the
/// inputs and the output that define a functional relation containing the
/// graph of the operation on every generator; the result is verified on the
/// corpus. Candidates are ordered by conjunction length, then by the
/// breadth-first order of the free algebra.
pub fn search_eq_interpolant(
    k: &ClassSpec,
    def: &ImplicitDef,
    max_eqs: usize,
    budget: &SearchBudget,
) -> Result<Verdict<Formula, String>> {
    def.validate()?;
    if classify(&def.formula) == FormulaClass::EqConjunction {
        return Ok(Verdict::Proven(def.formula.clone()));
    }
    let meter = budget.meter();
    Verdict::from_result((|| {
        let n = def.arity();
        let mut vars = def.inputs.clone();
        vars.push(def.output.clone());
        let (coords, vectors) = assignment_coordinates(k, n + 1, &meter)?;
        let gens: Vec<(String, Vec<u8>)> = vars.iter().cloned().zip(vectors).collect();
        let cl = close(k.signature(), &coords, &gens, &meter, None)?;
        let width = coords.len();
        // coordinate -> (generator block, input tuple id, output value)
        let mut graph_bits = vec![false; width];
        let mut blocks: Vec<(usize, usize)> = Vec::new(); // (start, size) per generator
        let mut start = 0;
        for g in k.generators() {
            let gr = graph(g, def, &meter)?;
            let m = g.size();
            let len = crate::algebra::table_len(m, n + 1).unwrap();
            let mut t = vec![0usize; n + 1];
            for i in 0..len {
                if gr.get(&t[..n]) == Some(&t[n]) {
                    graph_bits[start + i] = true;
                }
                odometer(&mut t, m);
            }
            blocks.push((start, m));
            start += len;
        }
        // equation (i, j) holds where the two vectors agree
        let m = cl.len();
        let mut cands: Vec<(usize, usize, Vec<bool>)> = Vec::new();
        for j in 0..m {
            for i in 0..j {
                let (a, b) = (cl.element(i), cl.element(j));
                let holds: Vec<bool> = (0..width).map(|c| a[c] == b[c]).collect();
                // must contain the graph
                if graph_bits.iter().zip(&holds).all(|(&g, &h)| !g || h) {
                    cands.push((i, j, holds));
                }
            }
        }
        meter.tick(cands.len() as u64)?;
        let functional = |bits: &[bool]| -> bool {
            for &(s, sz) in &blocks {
                let len = crate::algebra::table_len(sz, n + 1).unwrap();
                for row in (0..len).step_by(sz) {
                    if bits[s + row..s + row + sz].iter().filter(|&&b| b).count() > 1 {
                        return false;
                    }
                }
            }
            true
        };
        let mut choice = vec![0usize; 0];
        for size in 1..=max_eqs.max(1) {
            choice.clear();
            choice.extend(0..size);
            if size > cands.len() {
                break;
            }
            loop {
                meter.tick(1)?;
                let mut bits = cands[choice[0]].2.clone();
                for &c in &choice[1..] {
                    for (b, &h) in bits.iter_mut().zip(&cands[c].2) {
                        *b &= h;
                    }
                }
                if functional(&bits) {
                    let f = Formula::and(
                        choice
                            .iter()
                            .map(|&c| Formula::Eq(cl.term(cands[c].0), cl.term(cands[c].1)))
                            .collect(),
                    );
                    if verify_eq_interpolant(k, def, &f, budget, &meter)? {
                        return Ok(Verdict::Proven(f));
                    }
                }
                if !next_combination(&mut choice, cands.len()) {
                    break;
                }
            }
        }
        Ok(Verdict::Refuted(format!(
            "no conjunction of at most {max_eqs} equations over {} terms works",
            m
        )))
    })())
}

fn next_combination(c: &mut [usize], n: usize) -> bool {
    let k = c.len();
    for i in (0..k).rev() {
        if c[i] < n - k + i {
            c[i] += 1;
            for j in i + 1..k {
                c[j] = c[j - 1] + 1;
            }
            return true;
        }
    }
    false
}

fn verify_eq_interpolant(k: &ClassSpec, def: &ImplicitDef, f: &Formula, budget: &SearchBudget, meter: &Meter) -> Result<bool> {
    let cand = ImplicitDef { formula: f.clone(), inputs: def.inputs.clone(), output: def.output.clone() };
    for c in corpus(k, budget)? {
        let gr = graph(&c, def, meter)?;
        let rel = implicit_relation(&c, &cand, meter)?;
        for (x, y) in &gr {
            if rel.get(x).map(|ys| ys.len() == 1 && ys.contains(y)) != Some(true) {
                return Ok(false);
            }
        }
        if rel.values().any(|ys| ys.len() > 1) {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Checks a set of identities (pairs of terms) in an algebra; returns the
/// first failing assignment.
pub fn identity_failure(a: &FiniteAlgebra, lhs: &Term, rhs: &Term) -> Result<Option<BTreeMap<String, usize>>> {
    let vars: Vec<String> = lhs.vars().union(&rhs.vars()).cloned().collect::<BTreeSet<_>>().into_iter().collect();
    let f = Formula::Eq(lhs.clone(), rhs.clone());
    let mut t = vec![0usize; vars.len()];
    loop {
        let asg: BTreeMap<String, usize> = vars.iter().cloned().zip(t.iter().copied()).collect();
        if !eval_formula(a, &f, &asg)? {
            return Ok(Some(asg));
        }
        if vars.is_empty() || !odometer(&mut t, a.size()) {
            return Ok(None);
        }
    }
}
