use std::ops::ControlFlow;

use serde::{Deserialize, Serialize};

use super::construct::{for_new_tuples, sg};
use super::finite::FiniteAlgebra;
use crate::budget::{Meter, SearchBudget, Verdict};
use crate::error::{Error, Result};

/// A map between universes; `is_homomorphism` re-checks it against a pair of
/// algebras.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Homomorphism {
    pub map: Vec<usize>,
}

impl Homomorphism {
    pub fn new(map: Vec<usize>) -> Self {
        Homomorphism { map }
    }

    pub fn identity(n: usize) -> Self {
        Homomorphism {
            map: (0..n).collect(),
        }
    }

    pub fn apply(&self, a: usize) -> usize {
        self.map[a]
    }

    pub fn is_injective(&self) -> bool {
        let mut seen = std::collections::HashSet::new();
        self.map.iter().all(|v| seen.insert(*v))
    }

    pub fn image(&self) -> Vec<usize> {
        let mut v = self.map.clone();
        v.sort_unstable();
        v.dedup();
        v
    }

    pub fn compose(&self, then: &Homomorphism) -> Homomorphism {
        Homomorphism::new(self.map.iter().map(|&x| then.map[x]).collect())
    }

    /// Checks the homomorphism law at every symbol and tuple.
    pub fn is_homomorphism(&self, a: &FiniteAlgebra, b: &FiniteAlgebra) -> bool {
        if self.map.len() != a.size() || self.map.iter().any(|&v| v >= b.size()) {
            return false;
        }
        if !a.same_signature(b) {
            return false;
        }
        let sig = a.signature();
        let mut img = vec![0; sig.max_arity()];
        for s in 0..sig.len() {
            let k = sig.arity(s);
            let mut ok = true;
            super::construct::for_each_tuple(a.size(), k, |args| {
                if !ok {
                    return;
                }
                for j in 0..k {
                    img[j] = self.map[args[j]];
                }
                if self.map[a.op(s, args)] != b.op(s, &img[..k]) {
                    ok = false;
                }
            });
            if !ok {
                return false;
            }
        }
        true
    }
}

/// Greedy generating set: scan elements in order, keep those not yet generated.
pub fn generating_set(a: &FiniteAlgebra) -> Vec<usize> {
    let mut gens = Vec::new();
    let mut cur = sg(a, &[]);
    for e in 0..a.size() {
        if cur.binary_search(&e).is_err() {
            gens.push(e);
            cur = sg(a, &gens);
        }
    }
    gens
}

#[derive(Clone)]
struct State {
    map: Vec<usize>,
    inverse: Vec<usize>,
    list: Vec<usize>,
    done: usize,
}

struct Search<'a> {
    a: &'a FiniteAlgebra,
    b: &'a FiniteAlgebra,
    injective: bool,
    gens: Vec<usize>,
    meter: &'a Meter,
}

const UNSET: usize = usize::MAX;

impl Search<'_> {
    fn assign(&self, st: &mut State, x: usize, v: usize) -> bool {
        if st.map[x] != UNSET {
            return st.map[x] == v;
        }
        if self.injective {
            if st.inverse[v] != UNSET {
                return false;
            }
            st.inverse[v] = x;
        }
        st.map[x] = v;
        st.list.push(x);
        true
    }

    /// Propagates the operation tables from the assigned elements.
    fn close(&self, st: &mut State) -> Result<bool> {
        let sig = self.a.signature();
        let mut args = vec![0; sig.max_arity()];
        let mut img = vec![0; sig.max_arity()];
        loop {
            let len = st.list.len();
            let old = st.done;
            for s in 0..sig.len() {
                let k = sig.arity(s);
                let mut ok = true;
                let mut pending = Vec::new();
                for_new_tuples(k, old, len, |idx| {
                    for j in 0..k {
                        args[j] = st.list[idx[j]];
                        img[j] = st.map[args[j]];
                    }
                    pending.push((self.a.op(s, &args[..k]), self.b.op(s, &img[..k])));
                    Ok(())
                })?;
                self.meter.tick(pending.len() as u64 + 1)?;
                for (r, v) in pending {
                    if !self.assign(st, r, v) {
                        ok = false;
                        break;
                    }
                }
                if !ok {
                    return Ok(false);
                }
            }
            st.done = len;
            if st.list.len() == len {
                return Ok(true);
            }
        }
    }

    fn run(
        &self,
        st: State,
        g: usize,
        f: &mut dyn FnMut(&[usize]) -> ControlFlow<()>,
    ) -> Result<ControlFlow<()>> {
        let mut g = g;
        while g < self.gens.len() && st.map[self.gens[g]] != UNSET {
            g += 1;
        }
        if g == self.gens.len() {
            debug_assert!(st.map.iter().all(|&v| v != UNSET));
            return Ok(f(&st.map));
        }
        let x = self.gens[g];
        for v in 0..self.b.size() {
            let mut next = st.clone();
            if !self.assign(&mut next, x, v) {
                continue;
            }
            if self.close(&mut next)? && self.run(next, g + 1, f)?.is_break() {
                return Ok(ControlFlow::Break(()));
            }
        }
        Ok(ControlFlow::Continue(()))
    }
}

/// Streams homomorphisms `a -> b` extending `constraint` in search order.
/// Returns false when `f` stopped the search early.
pub fn for_each_hom(
    a: &FiniteAlgebra,
    b: &FiniteAlgebra,
    meter: &Meter,
    constraint: Option<&[Option<usize>]>,
    injective: bool,
    mut f: impl FnMut(&[usize]) -> ControlFlow<()>,
) -> Result<bool> {
    a.require_same_signature(b)?;
    if injective && a.size() > b.size() {
        return Ok(true);
    }
    let search = Search {
        a,
        b,
        injective,
        gens: generating_set(a),
        meter,
    };
    let mut st = State {
        map: vec![UNSET; a.size()],
        inverse: vec![UNSET; b.size()],
        list: Vec::new(),
        done: 0,
    };
    if let Some(c) = constraint {
        if c.len() != a.size() {
            return Err(Error::Invalid("constraint length differs from the source size".into()));
        }
        for (x, v) in c.iter().enumerate() {
            if let Some(v) = *v {
                if v >= b.size() {
                    return Err(Error::Invalid(format!("constraint value {v} out of range")));
                }
                if !search.assign(&mut st, x, v) {
                    return Ok(true);
                }
            }
        }
    }
    if !search.close(&mut st)? {
        return Ok(true);
    }
    Ok(search.run(st, 0, &mut f)?.is_continue())
}

fn collect(
    a: &FiniteAlgebra,
    b: &FiniteAlgebra,
    meter: &Meter,
    constraint: Option<&[Option<usize>]>,
    injective: bool,
) -> Result<Vec<Homomorphism>> {
    let mut out = Vec::new();
    for_each_hom(a, b, meter, constraint, injective, |m| {
        out.push(Homomorphism::new(m.to_vec()));
        ControlFlow::Continue(())
    })?;
    meter.check_elements(out.len())?;
    out.sort();
    Ok(out)
}

/// Every homomorphism `a -> b` extending the constraint, sorted by value vector.
pub fn enumerate_homs(
    a: &FiniteAlgebra,
    b: &FiniteAlgebra,
    budget: &SearchBudget,
    constraint: Option<&[Option<usize>]>,
) -> Result<Vec<Homomorphism>> {
    collect(a, b, &budget.meter(), constraint, false)
}

pub fn homs_metered(
    a: &FiniteAlgebra,
    b: &FiniteAlgebra,
    meter: &Meter,
    constraint: Option<&[Option<usize>]>,
) -> Result<Vec<Homomorphism>> {
    collect(a, b, meter, constraint, false)
}

pub fn enumerate_embeddings(
    a: &FiniteAlgebra,
    b: &FiniteAlgebra,
    budget: &SearchBudget,
) -> Result<Vec<Homomorphism>> {
    collect(a, b, &budget.meter(), None, true)
}

pub fn embeddings_metered(a: &FiniteAlgebra, b: &FiniteAlgebra, meter: &Meter) -> Result<Vec<Homomorphism>> {
    collect(a, b, meter, None, true)
}

/// First embedding found, if any.
pub fn find_embedding(a: &FiniteAlgebra, b: &FiniteAlgebra, meter: &Meter) -> Result<Option<Homomorphism>> {
    let mut found = None;
    for_each_hom(a, b, meter, None, true, |m| {
        found = Some(Homomorphism::new(m.to_vec()));
        ControlFlow::Break(())
    })?;
    Ok(found)
}

/// Proven carries a bijective homomorphism; Refuted carries the reason.
pub fn is_isomorphic(
    a: &FiniteAlgebra,
    b: &FiniteAlgebra,
    budget: &SearchBudget,
) -> Result<Verdict<Homomorphism, String>> {
    a.require_same_signature(b)?;
    if a.size() != b.size() {
        return Ok(Verdict::Refuted(format!("sizes differ: {} vs {}", a.size(), b.size())));
    }
    Verdict::from_result((|| {
        Ok(match find_embedding(a, b, &budget.meter())? {
            Some(h) => Verdict::Proven(h),
            None => Verdict::Refuted("no bijective homomorphism exists".into()),
        })
    })())
}

pub fn isomorphic(a: &FiniteAlgebra, b: &FiniteAlgebra, meter: &Meter) -> Result<bool> {
    Ok(a.same_signature(b) && a.size() == b.size() && find_embedding(a, b, meter)?.is_some())
}

/// Automorphisms, sorted.
pub fn automorphisms(a: &FiniteAlgebra, meter: &Meter) -> Result<Vec<Homomorphism>> {
    collect(a, a, meter, None, true)
}
