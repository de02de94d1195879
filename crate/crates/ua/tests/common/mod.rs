//! Brute-force checks shared by the integration tests. Nothing here calls the
//! library's search code: only table lookups on `FiniteAlgebra`.
#![allow(dead_code)]

use std::collections::{BTreeMap, BTreeSet};

use ua::algebra::{FiniteAlgebra, Term};
use ua::formula::Formula;

pub fn all_tuples(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = vec![vec![]];
    for _ in 0..k {
        out = out
            .into_iter()
            .flat_map(|t| {
                (0..n).map(move |x| {
                    let mut t = t.clone();
                    t.push(x);
                    t
                })
            })
            .collect();
    }
    out
}

pub fn sg(a: &FiniteAlgebra, x: &[usize]) -> BTreeSet<usize> {
    let mut s: BTreeSet<usize> = x.iter().copied().collect();
    loop {
        let cur: Vec<usize> = s.iter().copied().collect();
        let mut grew = false;
        for sym in 0..a.signature().len() {
            for t in all_tuples(cur.len(), a.signature().arity(sym)) {
                let args: Vec<usize> = t.iter().map(|&i| cur[i]).collect();
                grew |= s.insert(a.op(sym, &args));
            }
        }
        if !grew {
            return s;
        }
    }
}

pub fn is_closed(a: &FiniteAlgebra, s: &BTreeSet<usize>) -> bool {
    (0..a.signature().len()).all(|sym| {
        let cur: Vec<usize> = s.iter().copied().collect();
        all_tuples(cur.len(), a.signature().arity(sym))
            .into_iter()
            .all(|t| s.contains(&a.op(sym, &t.iter().map(|&i| cur[i]).collect::<Vec<_>>())))
    })
}

/// Every subuniverse, including the empty one when there are no constants.
pub fn subuniverses(a: &FiniteAlgebra) -> Vec<BTreeSet<usize>> {
    assert!(a.size() <= 16);
    (0u32..1 << a.size())
        .map(|mask| (0..a.size()).filter(|i| mask >> i & 1 == 1).collect::<BTreeSet<usize>>())
        .filter(|s| is_closed(a, s))
        .collect()
}

pub fn is_hom(map: &[usize], a: &FiniteAlgebra, b: &FiniteAlgebra) -> bool {
    (0..a.signature().len()).all(|sym| {
        all_tuples(a.size(), a.signature().arity(sym)).into_iter().all(|t| {
            let img: Vec<usize> = t.iter().map(|&x| map[x]).collect();
            map[a.op(sym, &t)] == b.op(sym, &img)
        })
    })
}

/// A generating set found greedily.
pub fn generators(a: &FiniteAlgebra) -> Vec<usize> {
    let mut gens = Vec::new();
    let mut reach = sg(a, &[]);
    for x in 0..a.size() {
        if !reach.contains(&x) {
            gens.push(x);
            reach = sg(a, &gens);
        }
    }
    gens
}

/// All homomorphisms, by guessing images of a generating set and closing.
pub fn homs(a: &FiniteAlgebra, b: &FiniteAlgebra) -> Vec<Vec<usize>> {
    let gens = generators(a);
    let mut out = Vec::new();
    'guess: for img in all_tuples(b.size(), gens.len()) {
        let mut map: Vec<Option<usize>> = vec![None; a.size()];
        for (&g, &v) in gens.iter().zip(&img) {
            map[g] = Some(v);
        }
        loop {
            let mut grew = false;
            for sym in 0..a.signature().len() {
                let known: Vec<usize> = (0..a.size()).filter(|&x| map[x].is_some()).collect();
                for t in all_tuples(known.len(), a.signature().arity(sym)) {
                    let args: Vec<usize> = t.iter().map(|&i| known[i]).collect();
                    let imgs: Vec<usize> = args.iter().map(|&x| map[x].unwrap()).collect();
                    let (x, y) = (a.op(sym, &args), b.op(sym, &imgs));
                    match map[x] {
                        None => {
                            map[x] = Some(y);
                            grew = true;
                        }
                        Some(z) if z != y => continue 'guess,
                        _ => {}
                    }
                }
            }
            if !grew {
                break;
            }
        }
        let map: Vec<usize> = map.into_iter().map(|v| v.expect("generators reach everything")).collect();
        if is_hom(&map, a, b) {
            out.push(map);
        }
    }
    out
}

pub fn isomorphic(a: &FiniteAlgebra, b: &FiniteAlgebra) -> bool {
    a.size() == b.size()
        && homs(a, b).into_iter().any(|m| m.iter().collect::<BTreeSet<_>>().len() == a.size())
}

/// Elements of `b` on which every pair of homomorphisms into a codomain
/// that agree on `sub` also agree.
pub fn dominion(b: &FiniteAlgebra, sub: &[usize], codomains: &[&FiniteAlgebra]) -> BTreeSet<usize> {
    let mut d: BTreeSet<usize> = (0..b.size()).collect();
    for c in codomains {
        let hs = homs(b, c);
        for g in &hs {
            for h in &hs {
                if sub.iter().all(|&x| g[x] == h[x]) {
                    d.retain(|&x| g[x] == h[x]);
                }
            }
        }
    }
    d
}

pub fn term(a: &FiniteAlgebra, t: &Term, asg: &BTreeMap<String, usize>) -> usize {
    match t {
        Term::Var(v) => asg[v],
        Term::App(f, args) => {
            let vals: Vec<usize> = args.iter().map(|s| term(a, s, asg)).collect();
            a.apply(f, &vals).expect("symbol in signature")
        }
    }
}

pub fn sat(a: &FiniteAlgebra, f: &Formula, asg: &BTreeMap<String, usize>) -> bool {
    match f {
        Formula::Eq(s, t) => term(a, s, asg) == term(a, t, asg),
        Formula::True => true,
        Formula::False => false,
        Formula::And(ps) => ps.iter().all(|p| sat(a, p, asg)),
        Formula::Or(ps) => ps.iter().any(|p| sat(a, p, asg)),
        Formula::Implies(p, q) => !sat(a, p, asg) || sat(a, q, asg),
        Formula::Not(p) => !sat(a, p, asg),
        Formula::Exists(vs, body) => all_tuples(a.size(), vs.len()).into_iter().any(|vals| {
            let mut b = asg.clone();
            b.extend(vs.iter().cloned().zip(vals));
            sat(a, body, &b)
        }),
    }
}

pub fn assignment(names: &[String], vals: &[usize]) -> BTreeMap<String, usize> {
    names.iter().cloned().zip(vals.iter().copied()).collect()
}

/// Input tuple to the set of outputs satisfying the formula.
pub fn relation(a: &FiniteAlgebra, f: &Formula, inputs: &[String], output: &str) -> BTreeMap<Vec<usize>, BTreeSet<usize>> {
    let mut out = BTreeMap::new();
    for t in all_tuples(a.size(), inputs.len()) {
        let ys: BTreeSet<usize> = (0..a.size())
            .filter(|&y| {
                let mut asg = assignment(inputs, &t);
                asg.insert(output.to_string(), y);
                sat(a, f, &asg)
            })
            .collect();
        out.insert(t, ys);
    }
    out
}

/// The relation as a total function table, if it is one.
pub fn function_table(rel: &BTreeMap<Vec<usize>, BTreeSet<usize>>) -> Option<Vec<usize>> {
    rel.values().map(|ys| if ys.len() == 1 { ys.iter().next().copied() } else { None }).collect()
}

/// Binary product, first factor most significant.
pub fn square(a: &FiniteAlgebra, b: &FiniteAlgebra) -> FiniteAlgebra {
    let n = b.size();
    let sig = a.signature().clone();
    let tables = (0..sig.len())
        .map(|sym| {
            all_tuples(a.size() * n, sig.arity(sym))
                .into_iter()
                .map(|t| {
                    let l: Vec<usize> = t.iter().map(|x| x / n).collect();
                    let r: Vec<usize> = t.iter().map(|x| x % n).collect();
                    a.op(sym, &l) * n + b.op(sym, &r)
                })
                .collect()
        })
        .collect();
    FiniteAlgebra::new(format!("{}x{}", a.name(), b.name()), sig, a.size() * n, tables).expect("valid product")
}

/// The Heyting implication of a finite lattice given by its meet table.
pub fn relative_pseudocomplement(a: &FiniteAlgebra) -> Vec<usize> {
    let n = a.size();
    let m = a.symbol("/\\").unwrap();
    let le = |x: usize, y: usize| a.op(m, &[x, y]) == x;
    all_tuples(n, 2)
        .into_iter()
        .map(|t| {
            let cands: Vec<usize> = (0..n).filter(|&c| le(a.op(m, &[c, t[0]]), t[1])).collect();
            *cands.iter().find(|&&c| cands.iter().all(|&d| le(d, c))).expect("Heyting lattice")
        })
        .collect()
}
