//! Congruences, full and relative congruence lattices, and congruence equations.

use std::collections::{BTreeSet, HashSet};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::algebra::{for_each_tuple, homs_metered, FiniteAlgebra};
use crate::budget::{Meter, SearchBudget, Verdict};
use crate::classops::ClassSpec;
use crate::error::{Error, Result};

/// An equivalence relation stored as a canonical block index per element:
/// blocks are numbered in order of their least element.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Congruence {
    blocks: Vec<usize>,
}

struct UnionFind(Vec<usize>);

impl UnionFind {
    fn new(n: usize) -> Self {
        UnionFind((0..n).collect())
    }

    fn find(&mut self, x: usize) -> usize {
        let mut r = x;
        while self.0[r] != r {
            r = self.0[r];
        }
        let mut y = x;
        while self.0[y] != r {
            let next = self.0[y];
            self.0[y] = r;
            y = next;
        }
        r
    }

    fn union(&mut self, a: usize, b: usize) -> bool {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra == rb {
            return false;
        }
        let (lo, hi) = if ra < rb { (ra, rb) } else { (rb, ra) };
        self.0[hi] = lo;
        true
    }

    fn into_congruence(mut self) -> Congruence {
        let n = self.0.len();
        let roots: Vec<usize> = (0..n).map(|i| self.find(i)).collect();
        Congruence::from_labels(&roots)
    }
}

impl Congruence {
    /// Canonicalises arbitrary block labels.
    pub fn from_labels(labels: &[usize]) -> Self {
        let mut map = std::collections::HashMap::new();
        let blocks = labels
            .iter()
            .map(|l| {
                let next = map.len();
                *map.entry(*l).or_insert(next)
            })
            .collect();
        Congruence { blocks }
    }

    pub fn from_blocks(n: usize, blocks: &[Vec<usize>]) -> Result<Self> {
        let mut labels = vec![usize::MAX; n];
        for (i, b) in blocks.iter().enumerate() {
            for &e in b {
                if e >= n || labels[e] != usize::MAX {
                    return Err(Error::Invalid(format!("bad block element {e}")));
                }
                labels[e] = i;
            }
        }
        if labels.contains(&usize::MAX) {
            return Err(Error::Invalid("blocks do not cover the universe".into()));
        }
        Ok(Congruence::from_labels(&labels))
    }

    pub fn identity(n: usize) -> Self {
        Congruence {
            blocks: (0..n).collect(),
        }
    }

    pub fn total(n: usize) -> Self {
        Congruence { blocks: vec![0; n] }
    }

    /// The kernel of a map.
    pub fn kernel(map: &[usize]) -> Self {
        Congruence::from_labels(map)
    }

    pub fn size(&self) -> usize {
        self.blocks.len()
    }

    pub fn blocks(&self) -> &[usize] {
        &self.blocks
    }

    pub fn block_count(&self) -> usize {
        self.blocks.iter().max().map_or(0, |m| m + 1)
    }

    pub fn block_sets(&self) -> Vec<Vec<usize>> {
        let mut out = vec![Vec::new(); self.block_count()];
        for (e, &b) in self.blocks.iter().enumerate() {
            out[b].push(e);
        }
        out
    }

    pub fn related(&self, a: usize, b: usize) -> bool {
        self.blocks[a] == self.blocks[b]
    }

    pub fn is_identity(&self) -> bool {
        self.block_count() == self.size()
    }

    pub fn is_total(&self) -> bool {
        self.block_count() <= 1
    }

    /// Rank in the partition lattice: number of merges from the identity.
    pub fn rank(&self) -> usize {
        self.size() - self.block_count()
    }

    pub fn le(&self, other: &Congruence) -> bool {
        // every block of self lies inside a block of other
        let mut img = vec![usize::MAX; self.block_count()];
        self.blocks.iter().zip(&other.blocks).all(|(&b, &o)| {
            if img[b] == usize::MAX {
                img[b] = o;
                true
            } else {
                img[b] == o
            }
        })
    }

    pub fn meet(&self, other: &Congruence) -> Congruence {
        let labels: Vec<usize> = self
            .blocks
            .iter()
            .zip(&other.blocks)
            .map(|(&a, &b)| a * other.size() + b)
            .collect();
        Congruence::from_labels(&labels)
    }

    /// Join in the lattice of equivalence relations (also the join of congruences).
    pub fn join(&self, other: &Congruence) -> Congruence {
        let mut uf = UnionFind::new(self.size());
        for rel in [self, other] {
            let mut first = vec![usize::MAX; rel.block_count()];
            for (e, &b) in rel.blocks.iter().enumerate() {
                if first[b] == usize::MAX {
                    first[b] = e;
                } else {
                    uf.union(first[b], e);
                }
            }
        }
        uf.into_congruence()
    }

    pub fn pairs(&self) -> Vec<(usize, usize)> {
        let n = self.size();
        let mut out = Vec::new();
        for a in 0..n {
            for b in 0..n {
                if a != b && self.related(a, b) {
                    out.push((a, b));
                }
            }
        }
        out
    }

    /// Describes a compatibility failure, if any.
    pub fn compatibility_failure(&self, a: &FiniteAlgebra) -> Option<String> {
        let sig = a.signature();
        for s in 0..sig.len() {
            let k = sig.arity(s);
            for i in 0..k {
                let mut bad = None;
                for_each_tuple(a.size(), k, |args| {
                    if bad.is_some() {
                        return;
                    }
                    let x = args[i];
                    let base = a.op(s, args);
                    let mut other = args.to_vec();
                    for y in 0..a.size() {
                        if y != x && self.related(x, y) {
                            other[i] = y;
                            let v = a.op(s, &other);
                            if !self.related(base, v) {
                                bad = Some(format!(
                                    "`{}` at {:?} and {:?} gives {} and {}",
                                    sig.name(s),
                                    args,
                                    other,
                                    base,
                                    v
                                ));
                                return;
                            }
                        }
                    }
                });
                if bad.is_some() {
                    return bad;
                }
            }
        }
        None
    }

    pub fn is_congruence_of(&self, a: &FiniteAlgebra) -> bool {
        self.size() == a.size() && self.compatibility_failure(a).is_none()
    }
}

impl fmt::Display for Congruence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .block_sets()
            .iter()
            .map(|b| b.iter().map(|e| e.to_string()).collect::<Vec<_>>().join(","))
            .collect();
        write!(f, "{{{}}}", parts.join("|"))
    }
}

/// The least congruence containing the pairs: union-find closure driven by a
/// worklist of merged pairs, each pushed through every unary translation.
pub fn cg(a: &FiniteAlgebra, pairs: &[(usize, usize)]) -> Congruence {
    let n = a.size();
    let mut uf = UnionFind::new(n);
    let mut work: Vec<(usize, usize)> = Vec::new();
    for &(x, y) in pairs {
        if x < n && y < n && uf.union(x, y) {
            work.push((x, y));
        }
    }
    let sig = a.signature();
    while let Some((x, y)) = work.pop() {
        for s in 0..sig.len() {
            let k = sig.arity(s);
            if k == 0 {
                continue;
            }
            for i in 0..k {
                for_each_tuple(n, k - 1, |rest| {
                    let mut args: Vec<usize> = Vec::with_capacity(k);
                    args.extend_from_slice(&rest[..i]);
                    args.push(x);
                    args.extend_from_slice(&rest[i..]);
                    let u = a.op(s, &args);
                    args[i] = y;
                    let v = a.op(s, &args);
                    if uf.union(u, v) {
                        work.push((u, v));
                    }
                });
            }
        }
    }
    uf.into_congruence()
}

/// A finite lattice of congruences, sorted by rank then block vector, with
/// its covering pairs (lower index, upper index).
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ConLattice {
    pub elements: Vec<Congruence>,
    pub covers: Vec<(usize, usize)>,
}

impl ConLattice {
    fn from_set(set: HashSet<Congruence>) -> Self {
        let mut elements: Vec<Congruence> = set.into_iter().collect();
        elements.sort_by(|x, y| x.rank().cmp(&y.rank()).then_with(|| x.cmp(y)));
        let m = elements.len();
        let mut covers = Vec::new();
        for i in 0..m {
            for j in 0..m {
                if i != j
                    && elements[i].le(&elements[j])
                    && !(0..m).any(|k| {
                        k != i
                            && k != j
                            && elements[i].le(&elements[k])
                            && elements[k].le(&elements[j])
                    })
                {
                    covers.push((i, j));
                }
            }
        }
        ConLattice { elements, covers }
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn contains(&self, c: &Congruence) -> bool {
        self.elements.contains(c)
    }

    pub fn index_of(&self, c: &Congruence) -> Option<usize> {
        self.elements.iter().position(|x| x == c)
    }

    pub fn upper_covers(&self, i: usize) -> Vec<usize> {
        self.covers.iter().filter(|c| c.0 == i).map(|c| c.1).collect()
    }

    /// Whether the lattice is a chain.
    pub fn is_chain(&self) -> bool {
        self.elements
            .iter()
            .all(|x| self.elements.iter().all(|y| x.le(y) || y.le(x)))
    }

    /// Least element above both (exists in a lattice).
    pub fn join_of(&self, x: &Congruence, y: &Congruence) -> Option<Congruence> {
        self.elements
            .iter()
            .filter(|z| x.le(z) && y.le(z))
            .min_by_key(|z| z.rank())
            .cloned()
    }

    /// Completely meet-irreducible members: exactly one upper cover.
    pub fn meet_irreducibles(&self) -> Vec<Congruence> {
        (0..self.len())
            .filter(|&i| self.upper_covers(i).len() == 1)
            .map(|i| self.elements[i].clone())
            .collect()
    }
}

/// Every congruence of `a`, from principal congruences closed under joins.
pub fn con(a: &FiniteAlgebra, meter: &Meter) -> Result<ConLattice> {
    let n = a.size();
    let mut principals: Vec<Congruence> = Vec::new();
    let mut seen_p = HashSet::new();
    for x in 0..n {
        for y in x + 1..n {
            meter.tick(1)?;
            let c = cg(a, &[(x, y)]);
            if seen_p.insert(c.clone()) {
                principals.push(c);
            }
        }
    }
    let mut all: HashSet<Congruence> = HashSet::new();
    let id = Congruence::identity(n);
    all.insert(id.clone());
    let mut work = vec![id];
    while let Some(t) = work.pop() {
        for p in &principals {
            meter.tick(1)?;
            let j = t.join(p);
            if !all.contains(&j) {
                meter.check_elements(all.len() + 1)?;
                all.insert(j.clone());
                work.push(j);
            }
        }
    }
    Ok(ConLattice::from_set(all))
}

/// Kernels of all homomorphisms from `a` into the generators, deduplicated.
pub fn generator_kernels(a: &FiniteAlgebra, k: &ClassSpec, meter: &Meter) -> Result<Vec<Congruence>> {
    let mut set = BTreeSet::new();
    for g in k.generators() {
        for h in homs_metered(a, g, meter, None)? {
            set.insert(Congruence::kernel(&h.map));
        }
    }
    Ok(set.into_iter().collect())
}

/// Least K-congruence containing the pairs: the meet of all generator
/// kernels containing them, or the total relation if there are none.
pub fn cg_k(a: &FiniteAlgebra, k: &ClassSpec, pairs: &[(usize, usize)], budget: &SearchBudget) -> Result<Congruence> {
    let meter = budget.meter();
    let kernels = generator_kernels(a, k, &meter)?;
    Ok(cg_k_from(a.size(), &kernels, pairs))
}

fn cg_k_from(n: usize, kernels: &[Congruence], pairs: &[(usize, usize)]) -> Congruence {
    kernels
        .iter()
        .filter(|t| pairs.iter().all(|&(x, y)| t.related(x, y)))
        .fold(Congruence::total(n), |acc, t| acc.meet(t))
}

/// The K-congruences of `a`: meets of generator kernels, plus the total relation.
pub fn con_k(a: &FiniteAlgebra, k: &ClassSpec, meter: &Meter) -> Result<ConLattice> {
    let kernels = generator_kernels(a, k, meter)?;
    let mut all: HashSet<Congruence> = HashSet::new();
    all.insert(Congruence::total(a.size()));
    let mut work: Vec<Congruence> = all.iter().cloned().collect();
    while let Some(t) = work.pop() {
        for kk in &kernels {
            meter.tick(1)?;
            let m = t.meet(kk);
            if !all.contains(&m) {
                all.insert(m.clone());
                work.push(m);
            }
        }
    }
    Ok(ConLattice::from_set(all))
}

fn lattice_for(a: &FiniteAlgebra, k: Option<&ClassSpec>, meter: &Meter) -> Result<ConLattice> {
    match k {
        Some(k) => con_k(a, k, meter),
        None => con(a, meter),
    }
}

/// The monolith of the identity in the chosen lattice, if the identity is in
/// the lattice and is completely meet-irreducible.
pub fn monolith(a: &FiniteAlgebra, k: Option<&ClassSpec>, budget: &SearchBudget) -> Result<Option<Congruence>> {
    if a.is_trivial() {
        return Ok(None);
    }
    let lat = lattice_for(a, k, &budget.meter())?;
    let id = Congruence::identity(a.size());
    let i = match lat.index_of(&id) {
        Some(i) => i,
        None => return Ok(None),
    };
    let ups = lat.upper_covers(i);
    Ok(if ups.len() == 1 {
        Some(lat.elements[ups[0]].clone())
    } else {
        None
    })
}

/// Relative finite subdirect irreducibility. For finite algebras meet- and
/// complete meet-irreducibility of the identity coincide.
pub fn is_rfsi(a: &FiniteAlgebra, k: Option<&ClassSpec>, budget: &SearchBudget) -> Result<bool> {
    Ok(monolith(a, k, budget)?.is_some())
}

pub fn is_rsi(a: &FiniteAlgebra, k: Option<&ClassSpec>, budget: &SearchBudget) -> Result<bool> {
    is_rfsi(a, k, budget)
}

/// Simple relative to K: the lattice is exactly {identity, total}.
pub fn is_simple(a: &FiniteAlgebra, k: Option<&ClassSpec>, budget: &SearchBudget) -> Result<bool> {
    if a.is_trivial() {
        return Ok(false);
    }
    let lat = lattice_for(a, k, &budget.meter())?;
    Ok(lat.len() == 2 && lat.contains(&Congruence::identity(a.size())))
}

/// Terms over ∧ (intersection), ∨ (join) and ∘ (relational composition).
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub enum CongTerm {
    Var(String),
    Meet(Box<CongTerm>, Box<CongTerm>),
    Join(Box<CongTerm>, Box<CongTerm>),
    Comp(Box<CongTerm>, Box<CongTerm>),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CongruenceEquation {
    pub lhs: CongTerm,
    pub rhs: CongTerm,
}

impl fmt::Display for CongTerm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CongTerm::Var(v) => write!(f, "{v}"),
            CongTerm::Meet(a, b) => write!(f, "({a} /\\ {b})"),
            CongTerm::Join(a, b) => write!(f, "({a} \\/ {b})"),
            CongTerm::Comp(a, b) => write!(f, "({a} o {b})"),
        }
    }
}

impl fmt::Display for CongruenceEquation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} = {}", self.lhs, self.rhs)
    }
}

impl CongTerm {
    fn vars(&self, out: &mut Vec<String>) {
        match self {
            CongTerm::Var(v) => {
                if !out.contains(v) {
                    out.push(v.clone())
                }
            }
            CongTerm::Meet(a, b) | CongTerm::Join(a, b) | CongTerm::Comp(a, b) => {
                a.vars(out);
                b.vars(out);
            }
        }
    }
}

impl CongruenceEquation {
    /// Parses `lhs = rhs` with `o` binding tighter than `/\`, which binds
    /// tighter than `\/`; all are left-associative.
    pub fn parse(text: &str) -> Result<Self> {
        let toks = cong_tokens(text)?;
        let mut p = CongParser { toks, pos: 0 };
        let lhs = p.join()?;
        p.expect("=")?;
        let rhs = p.join()?;
        if p.pos != p.toks.len() {
            return Err(Error::Syntax {
                line: 1,
                col: p.pos + 1,
                msg: format!("unexpected `{}`", p.toks[p.pos]),
            });
        }
        Ok(CongruenceEquation { lhs, rhs })
    }

    pub fn vars(&self) -> Vec<String> {
        let mut v = Vec::new();
        self.lhs.vars(&mut v);
        self.rhs.vars(&mut v);
        v
    }
}

fn cong_tokens(text: &str) -> Result<Vec<String>> {
    let chars: Vec<char> = text.chars().collect();
    let mut out = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        if c.is_whitespace() {
            i += 1;
        } else if c == '/' && chars.get(i + 1) == Some(&'\\') {
            out.push("/\\".into());
            i += 2;
        } else if c == '\\' && chars.get(i + 1) == Some(&'/') {
            out.push("\\/".into());
            i += 2;
        } else if "()=".contains(c) {
            out.push(c.to_string());
            i += 1;
        } else if c.is_alphanumeric() || c == '_' {
            let s = i;
            while i < chars.len() && (chars[i].is_alphanumeric() || chars[i] == '_') {
                i += 1;
            }
            out.push(chars[s..i].iter().collect());
        } else {
            return Err(Error::Syntax {
                line: 1,
                col: i + 1,
                msg: format!("unexpected character `{c}`"),
            });
        }
    }
    Ok(out)
}

struct CongParser {
    toks: Vec<String>,
    pos: usize,
}

impl CongParser {
    fn peek(&self) -> Option<&str> {
        self.toks.get(self.pos).map(|s| s.as_str())
    }

    fn expect(&mut self, t: &str) -> Result<()> {
        if self.peek() == Some(t) {
            self.pos += 1;
            Ok(())
        } else {
            Err(Error::Syntax {
                line: 1,
                col: self.pos + 1,
                msg: format!("expected `{t}`"),
            })
        }
    }

    fn join(&mut self) -> Result<CongTerm> {
        let mut l = self.meet()?;
        while self.peek() == Some("\\/") {
            self.pos += 1;
            l = CongTerm::Join(Box::new(l), Box::new(self.meet()?));
        }
        Ok(l)
    }

    fn meet(&mut self) -> Result<CongTerm> {
        let mut l = self.comp()?;
        while self.peek() == Some("/\\") {
            self.pos += 1;
            l = CongTerm::Meet(Box::new(l), Box::new(self.comp()?));
        }
        Ok(l)
    }

    fn comp(&mut self) -> Result<CongTerm> {
        let mut l = self.atom()?;
        while self.peek() == Some("o") {
            self.pos += 1;
            l = CongTerm::Comp(Box::new(l), Box::new(self.atom()?));
        }
        Ok(l)
    }

    fn atom(&mut self) -> Result<CongTerm> {
        match self.peek() {
            Some("(") => {
                self.pos += 1;
                let t = self.join()?;
                self.expect(")")?;
                Ok(t)
            }
            Some(t) if t != "o" && t.chars().all(|c| c.is_alphanumeric() || c == '_') => {
                let v = t.to_string();
                self.pos += 1;
                Ok(CongTerm::Var(v))
            }
            _ => Err(Error::Syntax {
                line: 1,
                col: self.pos + 1,
                msg: "expected a variable or `(`".into(),
            }),
        }
    }
}

/// A binary relation as a bit matrix.
#[derive(Clone, Debug, PartialEq, Eq)]
struct Relation {
    n: usize,
    bits: Vec<bool>,
}

impl Relation {
    fn of(c: &Congruence) -> Self {
        let n = c.size();
        let mut bits = vec![false; n * n];
        for a in 0..n {
            for b in 0..n {
                bits[a * n + b] = c.related(a, b);
            }
        }
        Relation { n, bits }
    }

    fn pairs(&self) -> Vec<(usize, usize)> {
        (0..self.n * self.n)
            .filter(|&i| self.bits[i])
            .map(|i| (i / self.n, i % self.n))
            .collect()
    }

    fn compose(&self, other: &Relation) -> Relation {
        let n = self.n;
        let mut bits = vec![false; n * n];
        for a in 0..n {
            for b in 0..n {
                if self.bits[a * n + b] {
                    for c in 0..n {
                        if other.bits[b * n + c] {
                            bits[a * n + c] = true;
                        }
                    }
                }
            }
        }
        Relation { n, bits }
    }
}

/// Witness that a congruence equation fails: the assignment and both sides.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct EquationFailure {
    pub assignment: Vec<(String, Congruence)>,
    pub lhs_pairs: Vec<(usize, usize)>,
    pub rhs_pairs: Vec<(usize, usize)>,
}

/// Checks the equation at every assignment of members of Con_K(a) (or Con(a)
/// when `k` is `None`), up to `tuple_cap` assignments.
pub fn check_congruence_equation(
    a: &FiniteAlgebra,
    k: Option<&ClassSpec>,
    e: &CongruenceEquation,
    tuple_cap: usize,
    budget: &SearchBudget,
) -> Result<Verdict<usize, EquationFailure>> {
    let meter = budget.meter();
    let lat = match lattice_for(a, k, &meter) {
        Err(Error::Budget(m)) => return Ok(Verdict::Unknown(m)),
        r => r?,
    };
    let kernels = match k {
        Some(k) => Some(generator_kernels(a, k, &meter)?),
        None => None,
    };
    let vars = e.vars();
    let m = lat.len();
    let total = (m as u128).saturating_pow(vars.len() as u32);
    if total > tuple_cap as u128 {
        return Ok(Verdict::Unknown(format!(
            "{total} assignments exceed the cap {tuple_cap}"
        )));
    }
    let rels: Vec<Relation> = lat.elements.iter().map(Relation::of).collect();
    let n = a.size();
    let join = |x: &Relation, y: &Relation| -> Relation {
        let mut pairs = x.pairs();
        pairs.extend(y.pairs());
        let c = match &kernels {
            Some(ks) => cg_k_from(n, ks, &pairs),
            None => cg(a, &pairs),
        };
        Relation::of(&c)
    };
    fn eval(t: &CongTerm, vars: &[String], env: &[&Relation], join: &dyn Fn(&Relation, &Relation) -> Relation) -> Relation {
        match t {
            CongTerm::Var(v) => env[vars.iter().position(|x| x == v).unwrap()].clone(),
            CongTerm::Meet(x, y) => {
                let (p, q) = (eval(x, vars, env, join), eval(y, vars, env, join));
                Relation {
                    n: p.n,
                    bits: p.bits.iter().zip(&q.bits).map(|(a, b)| *a && *b).collect(),
                }
            }
            CongTerm::Join(x, y) => join(&eval(x, vars, env, join), &eval(y, vars, env, join)),
            CongTerm::Comp(x, y) => eval(x, vars, env, join).compose(&eval(y, vars, env, join)),
        }
    }
    let mut checked = 0usize;
    let mut failure = None;
    for_each_tuple(m, vars.len(), |idx| {
        if failure.is_some() {
            return;
        }
        checked += 1;
        let env: Vec<&Relation> = idx.iter().map(|&i| &rels[i]).collect();
        let l = eval(&e.lhs, &vars, &env, &join);
        let r = eval(&e.rhs, &vars, &env, &join);
        if l != r {
            failure = Some(EquationFailure {
                assignment: vars
                    .iter()
                    .zip(idx)
                    .map(|(v, &i)| (v.clone(), lat.elements[i].clone()))
                    .collect(),
                lhs_pairs: l.pairs(),
                rhs_pairs: r.pairs(),
            });
        }
    });
    Ok(match failure {
        Some(f) => Verdict::Refuted(f),
        None => Verdict::Proven(checked),
    })
}

#[cfg(test)]
mod tests {
    use std::collections::{BTreeMap, BTreeSet};

    use super::*;
    use crate::algebra::{quotient, trivial};
    use crate::classops::{membership, ClassSpec};
    use crate::gallery::*;
    use crate::oracle;

    fn budget() -> SearchBudget {
        SearchBudget::default()
    }

    fn q(gens: Vec<FiniteAlgebra>) -> ClassSpec {
        ClassSpec::q(gens).unwrap()
    }

    fn blocks(n: usize, b: &[&[usize]]) -> Congruence {
        Congruence::from_blocks(n, &b.iter().map(|x| x.to_vec()).collect::<Vec<_>>()).unwrap()
    }

    #[test]
    fn principal_examples() {
        let c3 = chain_heyting(3).unwrap();
        assert!(cg(&c3, &[]).is_identity());
        assert_eq!(cg(&c3, &[(1, 2)]), blocks(3, &[&[0], &[1, 2]]));
        assert!(cg(&c3, &[(0, 1)]).is_total());
    }

    #[test]
    fn cg_is_least_congruence_containing_pairs() {
        for id in ["gallery:chain_heyting(4)", "gallery:chain_meet(4)", "gallery:lukasiewicz(3)", "gallery:monoid_c(2)", "gallery:zmod_ring(4)"] {
            let a = crate::gallery::make_algebra(id).unwrap();
            let all = oracle::congruences(&a);
            for x in 0..a.size() {
                for y in x + 1..a.size() {
                    let got = oracle::pairs_of(&labels(&cg(&a, &[(x, y)])));
                    let least = all
                        .iter()
                        .map(|p| oracle::pairs_of(p))
                        .filter(|s| s.contains(&(x, y)))
                        .min_by_key(|s| s.len())
                        .unwrap();
                    assert_eq!(got, least, "{id} ({x},{y})");
                }
            }
        }
    }

    fn labels(c: &Congruence) -> Vec<usize> {
        c.blocks().to_vec()
    }

    #[test]
    fn con_matches_partition_enumeration() {
        for id in [
            "gallery:chain_heyting(3)",
            "gallery:chain_heyting(5)",
            "gallery:d2_bdl",
            "gallery:chain_meet(4)",
            "gallery:lukasiewicz(3)",
            "gallery:power(d2_bdl,2)",
            "gallery:zmod_ring(6)",
            "gallery:monoid_c(3)",
        ] {
            let a = crate::gallery::make_algebra(id).unwrap();
            let lat = con(&a, &budget().meter()).unwrap();
            let got: BTreeSet<BTreeSet<(usize, usize)>> =
                lat.elements.iter().map(|c| oracle::pairs_of(&labels(c))).collect();
            let want: BTreeSet<BTreeSet<(usize, usize)>> =
                oracle::congruences(&a).iter().map(|p| oracle::pairs_of(p)).collect();
            assert_eq!(got, want, "{id}");
        }
        let c3 = chain_heyting(3).unwrap();
        let lat = con(&c3, &budget().meter()).unwrap();
        assert_eq!(lat.len(), 3);
        assert!(lat.is_chain());
        assert_eq!(con(&d2_bdl(), &budget().meter()).unwrap().len(), 2);
        assert_eq!(con(&trivial(&bdl_signature()), &budget().meter()).unwrap().len(), 1);
    }

    #[test]
    fn relative_congruences() {
        let b = budget();
        let c2 = chain_heyting(2).unwrap();
        let c3 = chain_heyting(3).unwrap();
        let mid = blocks(3, &[&[0], &[1, 2]]);
        assert_eq!(cg_k(&c3, &q(vec![c2.clone()]), &[], &b).unwrap(), mid);
        assert!(cg(&c3, &[]).is_identity());
        assert!(cg_k(&c3, &q(vec![c3.clone()]), &[(0, 2)], &b).unwrap().is_total());

        let all = con_k(&c3, &q(vec![c3.clone()]), &b.meter()).unwrap();
        assert_eq!(all.len(), 3);
        let two = con_k(&c3, &q(vec![c2.clone()]), &b.meter()).unwrap();
        assert_eq!(two.elements, vec![mid, Congruence::total(3)]);
        let one = trivial(c3.signature());
        assert_eq!(con_k(&one, &q(vec![c2]), &b.meter()).unwrap().len(), 1);
    }

    #[test]
    fn relative_lattice_members_give_members() {
        let b = budget();
        let k = q(vec![chain_heyting(3).unwrap()]);
        for id in ["gallery:chain_heyting(4)", "gallery:power(chain_heyting(2),2)", "gallery:product(chain_heyting(2),chain_heyting(3))"] {
            let a = crate::gallery::make_algebra(id).unwrap();
            let lat = con_k(&a, &k, &b.meter()).unwrap();
            let full = con(&a, &b.meter()).unwrap();
            for (i, t) in lat.elements.iter().enumerate() {
                assert!(full.contains(t));
                let (qa, _) = quotient(&a, t).unwrap();
                assert!(membership(&qa, &k, &b).unwrap().is_proven(), "{id} {t:?}");
                for s in &lat.elements[i..] {
                    assert!(lat.contains(&t.meet(s)));
                }
            }
            // every pair generates its least relative congruence
            for x in 0..a.size() {
                for y in x + 1..a.size() {
                    let c = cg_k(&a, &k, &[(x, y)], &b).unwrap();
                    let least = lat.elements.iter().filter(|t| t.related(x, y)).min_by_key(|t| t.rank()).unwrap();
                    assert_eq!(&c, least);
                }
            }
        }
    }

    #[test]
    fn irreducibility() {
        let b = budget();
        let d2r = d2_rcdl();
        assert!(is_rfsi(&d2r, Some(&q(vec![d2r.clone()])), &b).unwrap());
        assert!(!is_rfsi(&trivial(&bdl_signature()), None, &b).unwrap());
        let c5 = chain_heyting(5).unwrap();
        let k = q(vec![c5.clone()]);
        assert!(is_rsi(&c5, Some(&k), &b).unwrap());
        assert!(monolith(&c5, Some(&k), &b).unwrap().is_some());
        let sq = crate::gallery::make_algebra("gallery:power(chain_heyting(2),2)").unwrap();
        assert!(!is_rfsi(&sq, None, &b).unwrap());
    }

    /// Evaluates a congruence term on relations given as pair sets.
    fn rel(t: &CongTerm, asg: &BTreeMap<String, BTreeSet<(usize, usize)>>, n: usize) -> BTreeSet<(usize, usize)> {
        match t {
            CongTerm::Var(v) => asg[v].clone(),
            CongTerm::Meet(a, b) => rel(a, asg, n).intersection(&rel(b, asg, n)).copied().collect(),
            CongTerm::Comp(a, b) => {
                let (r, s) = (rel(a, asg, n), rel(b, asg, n));
                r.iter().flat_map(|&(x, y)| s.iter().filter(move |p| p.0 == y).map(move |p| (x, p.1))).collect()
            }
            CongTerm::Join(a, b) => {
                let mut j: BTreeSet<_> = rel(a, asg, n).union(&rel(b, asg, n)).copied().collect();
                loop {
                    let next: BTreeSet<_> = j
                        .iter()
                        .flat_map(|&(x, y)| j.iter().filter(move |p| p.0 == y).map(move |p| (x, p.1)))
                        .chain(j.iter().copied())
                        .collect();
                    if next == j {
                        return j;
                    }
                    j = next;
                }
            }
        }
    }

    fn brute_equation(a: &FiniteAlgebra, e: &CongruenceEquation) -> bool {
        let cons: Vec<BTreeSet<(usize, usize)>> = oracle::congruences(a).iter().map(|p| oracle::pairs_of(p)).collect();
        let vars = e.vars();
        oracle::all_tuples(cons.len(), vars.len()).into_iter().all(|t| {
            let asg: BTreeMap<_, _> = vars.iter().cloned().zip(t.iter().map(|&i| cons[i].clone())).collect();
            rel(&e.lhs, &asg, a.size()) == rel(&e.rhs, &asg, a.size())
        })
    }

    #[test]
    fn congruence_equations() {
        let b = budget();
        let dist = CongruenceEquation::parse("(x \\/ y) /\\ (x \\/ z) = x \\/ (y /\\ z)").unwrap();
        let perm = CongruenceEquation::parse("x o y = y o x").unwrap();
        let comm = CongruenceEquation::parse("x /\\ y = y /\\ x").unwrap();
        let c5 = chain_heyting(5).unwrap();
        let k = q(vec![c5.clone()]);
        assert!(check_congruence_equation(&c5, Some(&k), &dist, 1 << 20, &b).unwrap().is_proven());
        let m3 = chain_meet(3).unwrap();
        assert!(check_congruence_equation(&m3, None, &perm, 1 << 20, &b).unwrap().is_refuted());
        assert!(check_congruence_equation(&m3, None, &comm, 1 << 20, &b).unwrap().is_proven());
        for id in ["gallery:chain_heyting(4)", "gallery:power(chain_heyting(2),2)", "gallery:pdl_heyting(1)"] {
            let a = crate::gallery::make_algebra(id).unwrap();
            assert!(check_congruence_equation(&a, None, &perm, 1 << 20, &b).unwrap().is_proven(), "{id}");
        }
        let modular = CongruenceEquation::parse("x /\\ (y \\/ (x /\\ z)) = (x /\\ y) \\/ (x /\\ z)").unwrap();
        for id in ["gallery:chain_meet(3)", "gallery:chain_meet(4)", "gallery:monoid_c(2)", "gallery:zmod_ring(4)", "gallery:d2_bdl"] {
            let a = crate::gallery::make_algebra(id).unwrap();
            for e in [&dist, &perm, &comm, &modular] {
                let got = check_congruence_equation(&a, None, e, 1 << 20, &b).unwrap().is_proven();
                assert_eq!(got, brute_equation(&a, e), "{id}: {e}");
            }
        }
    }
}
