//! Invariants checked on random inputs against the brute-force routines in
//! `common`.

mod common;

use std::collections::{BTreeMap, BTreeSet};

use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use common::*;
use ua::algebra::{enumerate_homs, product, quotient, sg as lib_sg, FiniteAlgebra};
use ua::classops::ClassSpec;
use ua::congruence::cg;
use ua::dominion::{dominion, dominion_over, zigzag_membership};
use ua::expansion::{defining_axiom, expand, ExpansionOp};
use ua::formula::{check_functional, eval_formula, implicit_table, ImplicitDef};
use ua::gallery::*;
use ua::repro::random_pp;
use ua::{SearchBudget, Verdict};

fn families() -> Vec<Vec<FiniteAlgebra>> {
    vec![
        vec![d2_bdl(), chain_heyting(3).unwrap().reduct(&["/\\", "\\/", "0", "1"]).unwrap()],
        vec![chain_heyting(2).unwrap(), chain_heyting(3).unwrap(), chain_heyting(4).unwrap()],
        vec![lukasiewicz(1).unwrap(), lukasiewicz(2).unwrap()],
        vec![zmod_ring(2).unwrap(), zmod_ring(3).unwrap(), zmod_ring(4).unwrap()],
        small_monoids(3),
        vec![chain_meet(2).unwrap(), chain_meet(3).unwrap()],
    ]
}

fn pick<T>(xs: &[T], i: usize) -> &T {
    &xs[i % xs.len()]
}

fn budget() -> SearchBudget {
    SearchBudget::default()
}

fn asg(t: &[usize]) -> BTreeMap<String, usize> {
    t.iter().enumerate().map(|(i, &v)| (format!("x{}", i + 1), v)).collect()
}

fn subset_of(x: &BTreeSet<usize>, n: usize) -> Vec<usize> {
    x.iter().map(|&e| e % n).collect()
}

/// Pure pp formulas with one chosen variable as output.
fn pp_def(seed: u64, a: &FiniteAlgebra) -> ImplicitDef {
    let f = random_pp(&mut ChaCha8Rng::seed_from_u64(seed), a.signature());
    ImplicitDef { formula: f, inputs: vec!["x1".into(), "x2".into()], output: "x3".into() }
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 256, failure_persistence: None, ..ProptestConfig::default() })]

    #[test]
    fn pp_formulas_survive_homomorphisms(fam in 0usize..6, i in 0usize..8, j in 0usize..8, seed in any::<u64>(), t in prop::collection::vec(0usize..16, 3), h in 0usize..64) {
        let fams = families();
        let fam = pick(&fams, fam);
        let (a, b) = (pick(fam, i), pick(fam, j));
        let phi = random_pp(&mut ChaCha8Rng::seed_from_u64(seed), a.signature());
        let t: Vec<usize> = t.iter().map(|x| x % a.size()).collect();
        let holds = eval_formula(a, &phi, &asg(&t)).unwrap();
        prop_assert_eq!(holds, sat(a, &phi, &asg(&t)));
        let homs = enumerate_homs(a, b, &budget(), None).unwrap();
        if let Some(hom) = homs.get(h % homs.len().max(1)) {
            prop_assert!(is_hom(&hom.map, a, b));
            let img: Vec<usize> = t.iter().map(|&x| hom.apply(x)).collect();
            prop_assert!(!holds || eval_formula(b, &phi, &asg(&img)).unwrap());
        }
    }

    #[test]
    fn pp_formulas_hold_in_products_coordinatewise(fam in 0usize..6, i in 0usize..8, j in 0usize..8, seed in any::<u64>(), t in prop::collection::vec(0usize..16, 3), s in prop::collection::vec(0usize..16, 3)) {
        let fams = families();
        let fam = pick(&fams, fam);
        let (a, b) = (pick(fam, i), pick(fam, j));
        let phi = random_pp(&mut ChaCha8Rng::seed_from_u64(seed), a.signature());
        let t: Vec<usize> = t.iter().map(|x| x % a.size()).collect();
        let s: Vec<usize> = s.iter().map(|x| x % b.size()).collect();
        let (p, proj) = product(a.signature(), &[a, b]).unwrap();
        let pt: Vec<usize> = t.iter().zip(&s).map(|(&x, &y)| x * b.size() + y).collect();
        prop_assert!(proj[0].is_homomorphism(&p, a) && proj[1].is_homomorphism(&p, b));
        prop_assert_eq!(proj[0].image().len(), a.size());
        prop_assert_eq!(proj[1].image().len(), b.size());
        let both = eval_formula(a, &phi, &asg(&t)).unwrap() && eval_formula(b, &phi, &asg(&s)).unwrap();
        prop_assert_eq!(eval_formula(&p, &phi, &asg(&pt)).unwrap(), both);
    }

    #[test]
    fn implicit_tables_commute_with_homomorphisms(fam in 0usize..6, i in 0usize..8, j in 0usize..8, seed in any::<u64>()) {
        let fams = families();
        let fam = pick(&fams, fam);
        let (a, b) = (pick(fam, i), pick(fam, j));
        let def = pp_def(seed, a);
        let (ta, tb) = (implicit_table(a, &def), implicit_table(b, &def));
        if let (Ok(ta), Ok(tb)) = (ta, tb) {
            let rel = relation(a, &def.formula, &def.inputs, &def.output);
            for (x, ys) in &rel {
                prop_assert_eq!(ta.get(x), if ys.len() == 1 { ys.iter().next().copied() } else { None });
            }
            for hom in enumerate_homs(a, b, &budget(), None).unwrap() {
                for (x, &y) in ta.entries() {
                    let hx: Vec<usize> = x.iter().map(|&e| hom.apply(e)).collect();
                    if let Some(z) = tb.get(&hx) {
                        prop_assert_eq!(z, hom.apply(y));
                    }
                }
            }
        }
    }

    #[test]
    fn proven_functionality_holds_in_small_products(fam in 0usize..6, i in 0usize..8, j in 0usize..8, seed in any::<u64>()) {
        let fams = families();
        let fam = pick(&fams, fam);
        let (a, b) = (pick(fam, i), pick(fam, j));
        let def = pp_def(seed, a);
        let k = ClassSpec::q(fam.clone()).unwrap();
        if let Verdict::Proven(_) = check_functional(&k, &def, &budget()).unwrap() {
            let mut checked = vec![a.clone(), b.clone()];
            if a.size() * b.size() <= 6 {
                checked.push(square(a, b));
            }
            for x in checked {
                let rel = relation(&x, &def.formula, &def.inputs, &def.output);
                prop_assert!(rel.values().all(|ys| ys.len() <= 1), "{}", x.name());
            }
        }
    }

    #[test]
    fn sg_is_the_least_closed_superset(fam in 0usize..6, i in 0usize..8, x in prop::collection::btree_set(0usize..16, 0..4), y in prop::collection::btree_set(0usize..16, 0..3)) {
        let fams = families();
        let a = pick(pick(&fams, fam), i);
        let x = subset_of(&x, a.size());
        let s = lib_sg(a, &x);
        prop_assert_eq!(s.iter().copied().collect::<BTreeSet<_>>(), sg(a, &x));
        prop_assert_eq!(lib_sg(a, &s), s.clone());
        let mut more = x.clone();
        more.extend(subset_of(&y, a.size()));
        let t = lib_sg(a, &more);
        prop_assert!(s.iter().all(|e| t.contains(e)));
    }

    #[test]
    fn quotient_maps_have_the_congruence_as_kernel(fam in 0usize..6, i in 0usize..8, pairs in prop::collection::vec((0usize..16, 0usize..16), 0..3)) {
        let fams = families();
        let a = pick(pick(&fams, fam), i);
        let n = a.size();
        let pairs: Vec<(usize, usize)> = pairs.iter().map(|&(x, y)| (x % n, y % n)).collect();
        let theta = cg(a, &pairs);
        prop_assert!(pairs.iter().all(|&(x, y)| theta.related(x, y)));
        let labels: Vec<usize> = theta.blocks().to_vec();
        prop_assert!(congruence_oracle(a, &labels));
        let (q, nat) = quotient(a, &theta).unwrap();
        prop_assert!(is_hom(&nat.map, a, &q));
        prop_assert_eq!(nat.image().len(), q.size());
        for x in 0..n {
            for y in 0..n {
                prop_assert_eq!(nat.apply(x) == nat.apply(y), theta.related(x, y));
            }
        }
    }

    #[test]
    fn dominions_sit_between_the_subalgebra_and_the_whole(c in 0usize..4, x in prop::collection::btree_set(0usize..16, 0..3), y in prop::collection::btree_set(0usize..16, 0..2)) {
        let gens = [d2_bdl(), d2_rcdl(), chain_heyting(3).unwrap(), lukasiewicz(2).unwrap()];
        let g = &gens[c];
        let b = square(g, g);
        let k = ClassSpec::q(vec![g.clone()]).unwrap();
        let a = lib_sg(&b, &subset_of(&x, b.size()));
        prop_assume!(!a.is_empty());
        let d = dominion(&a, &b, &k, &budget()).unwrap();
        prop_assert!(a.iter().all(|e| d.result.contains(e)));
        prop_assert!(b.is_subuniverse(&d.result));
        let want: Vec<usize> = common::dominion(&b, &a, &[g]).into_iter().collect();
        prop_assert_eq!(&d.result, &want);
        let mut more = a.clone();
        more.extend(subset_of(&y, b.size()));
        let a2 = lib_sg(&b, &more);
        let d2 = dominion(&a2, &b, &k, &budget()).unwrap();
        prop_assert!(d.result.iter().all(|e| d2.result.contains(e)));
    }

    #[test]
    fn proven_zigzags_land_in_the_dominion(m in 0usize..64, x in prop::collection::btree_set(0usize..16, 0..3), t in 0usize..16) {
        let monoids = small_monoids(3);
        let b = pick(&monoids, m);
        let s = lib_sg(b, &subset_of(&x, b.size()));
        let t = t % b.size();
        let codomains: Vec<&FiniteAlgebra> = monoids.iter().collect();
        let d = common::dominion(b, &s, &codomains);
        prop_assert_eq!(dominion_over(&s, b, &codomains, &budget()).unwrap().result, d.iter().copied().collect::<Vec<_>>());
        match zigzag_membership(b, &s, t, 2, 3, &budget()).unwrap() {
            Verdict::Proven(z) => {
                prop_assert!(d.contains(&t));
                prop_assert!(z.holds_in(b, &s).unwrap());
            }
            Verdict::Refuted(sep) => {
                prop_assert!(!d.contains(&t));
                prop_assert_ne!(sep.g.apply(t), sep.h.apply(t));
                prop_assert!(s.iter().all(|&e| sep.g.apply(e) == sep.h.apply(e)));
            }
            Verdict::Unknown(_) => {}
        }
    }

    #[test]
    fn expansions_reduct_back_and_satisfy_their_axiom(k in 0usize..3) {
        let d2 = d2_bdl();
        let cases: Vec<(FiniteAlgebra, ExpansionOp)> = vec![
            (d2.clone(), ExpansionOp::new("~", complement())),
            (zmod_ring(3).unwrap(), ExpansionOp::new("w", weak_inverse())),
            (heyting_implication_reduct(&chain_heyting(4).unwrap()).unwrap(), ExpansionOp::new("/\\", hilbert_meet())),
        ];
        let (a, op) = &cases[k];
        let e = expand(a, std::slice::from_ref(op)).unwrap();
        let sig = a.signature();
        let base: Vec<&str> = (0..sig.len()).map(|s| sig.name(s)).collect();
        let r = e.reduct(&base).unwrap();
        prop_assert_eq!(r.tables(), a.tables());
        let ax = defining_axiom(op);
        for t in all_tuples(e.size(), ax.free_vars().len()) {
            let names: Vec<String> = ax.free_vars().into_iter().collect();
            prop_assert!(sat(&e, &ax, &assignment(&names, &t)));
        }
        for h in enumerate_homs(&e, &e, &budget(), None).unwrap() {
            prop_assert!(is_hom(&h.map, a, a));
        }
    }
}

fn congruence_oracle(a: &FiniteAlgebra, labels: &[usize]) -> bool {
    // relabel as a restricted growth string to compare with the enumeration
    let mut seen = Vec::new();
    let rgs: Vec<usize> = labels
        .iter()
        .map(|l| match seen.iter().position(|x| x == l) {
            Some(i) => i,
            None => {
                seen.push(*l);
                seen.len() - 1
            }
        })
        .collect();
    all_congruences(a).contains(&rgs)
}

fn all_congruences(a: &FiniteAlgebra) -> Vec<Vec<usize>> {
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
    let mut parts = Vec::new();
    go(0, a.size(), 0, &mut Vec::new(), &mut parts);
    parts
        .into_iter()
        .filter(|p| {
            (0..a.signature().len()).all(|sym| {
                let k = a.signature().arity(sym);
                let ts = all_tuples(a.size(), k);
                ts.iter().all(|s| {
                    ts.iter()
                        .filter(|t| s.iter().zip(t.iter()).all(|(&x, &y)| p[x] == p[y]))
                        .all(|t| p[a.op(sym, s)] == p[a.op(sym, t)])
                })
            })
        })
        .collect()
}
