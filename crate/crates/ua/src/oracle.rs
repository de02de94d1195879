//! Brute-force reference implementations used only by tests. Each one
//! follows the textbook definition with no pruning, so it can be trusted on
//! algebras of a handful of elements.

use std::collections::{BTreeMap, BTreeSet};

use crate::algebra::{FiniteAlgebra, Term};
use crate::formula::Formula;

/// Every tuple of length `k` over `0..n`, lexicographically.
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

/// Applies every operation to every tuple until nothing new appears.
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

pub fn is_hom(map: &[usize], a: &FiniteAlgebra, b: &FiniteAlgebra) -> bool {
    (0..a.signature().len()).all(|sym| {
        all_tuples(a.size(), a.signature().arity(sym)).into_iter().all(|t| {
            let img: Vec<usize> = t.iter().map(|&x| map[x]).collect();
            map[a.op(sym, &t)] == b.op(sym, &img)
        })
    })
}

/// All homomorphisms by trying every map.
pub fn homs(a: &FiniteAlgebra, b: &FiniteAlgebra) -> Vec<Vec<usize>> {
    all_tuples(b.size(), a.size()).into_iter().filter(|m| is_hom(m, a, b)).collect()
}

/// Set partitions of `0..n` as restricted growth strings.
pub fn partitions(n: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    fn go(i: usize, n: usize, max: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if i == n {
            out.push(cur.clone());
            return;
        }
        for b in 0..=max {
            cur.push(b);
            go(i + 1, n, if b == max { max + 1 } else { max }, cur, out);
            cur.pop();
        }
    }
    go(0, n, 0, &mut Vec::new(), &mut out);
    out
}

/// Partitions compatible with every operation, as block labels.
pub fn congruences(a: &FiniteAlgebra) -> Vec<Vec<usize>> {
    partitions(a.size())
        .into_iter()
        .filter(|p| {
            (0..a.signature().len()).all(|sym| {
                let k = a.signature().arity(sym);
                all_tuples(a.size(), k).iter().all(|s| {
                    all_tuples(a.size(), k)
                        .iter()
                        .filter(|t| s.iter().zip(t.iter()).all(|(&x, &y)| p[x] == p[y]))
                        .all(|t| p[a.op(sym, s)] == p[a.op(sym, t)])
                })
            })
        })
        .collect()
}

/// Pairs of a labelled partition.
pub fn pairs_of(p: &[usize]) -> BTreeSet<(usize, usize)> {
    let n = p.len();
    (0..n).flat_map(|x| (0..n).map(move |y| (x, y))).filter(|&(x, y)| p[x] == p[y]).collect()
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

/// Tarskian satisfaction, quantifiers by enumeration.
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

/// The relation {(inputs, output)} defined by a formula, by enumeration.
pub fn relation(a: &FiniteAlgebra, f: &Formula, inputs: &[String], output: &str) -> BTreeMap<Vec<usize>, BTreeSet<usize>> {
    let mut out: BTreeMap<Vec<usize>, BTreeSet<usize>> = BTreeMap::new();
    for t in all_tuples(a.size(), inputs.len()) {
        for y in 0..a.size() {
            let mut asg: BTreeMap<String, usize> = inputs.iter().cloned().zip(t.iter().copied()).collect();
            asg.insert(output.to_string(), y);
            if sat(a, f, &asg) {
                out.entry(t.clone()).or_default().insert(y);
            }
        }
    }
    out
}

/// Equalizer dominion: elements on which every pair of homomorphisms into
/// one of `codomains` agreeing on `sub` also agrees.
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
