//! Scripted reproductions of the worked examples, addressable from the
//! command line as `ua repro <id>`. Every report is deterministic in the
//! seed and budget.

use std::collections::BTreeMap;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use serde_json::{json, Value};

use crate::algebra::{
    all_subuniverses, enumerate_homs, is_isomorphic, product, sg, subalgebra, term_table, FiniteAlgebra,
    Homomorphism, Signature, Term,
};
use crate::budget::{SearchBudget, Verdict};
use crate::classops::ClassSpec;
use crate::congruence::{check_congruence_equation, CongruenceEquation};
use crate::dominion::{dominion, dominion_over, unary_monoid_law, zigzag_membership};
use crate::error::{Error, Result};
use crate::expansion::{beth_primal_witness, expand, ExpansionOp};
use crate::formula::{check_functional, eval_formula, implicit_table, Formula};
use crate::gallery::*;
use crate::termcond::{is_primal, search_interpolant_term, NotPrimal};

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    pub detail: Value,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ReproReport {
    pub id: String,
    pub title: String,
    pub checks: Vec<Check>,
}

impl ReproReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }
}

pub const REPRO_IDS: &[(&str, &str)] = &[
    ("boolean-expansion", "complement on D2, its expansion, and the interpolating term"),
    ("rcdl-dominions", "dominions in D2 x D2 with and without relative complements"),
    ("c5-gadget", "the nontrivial dominion of D in C5 x C5"),
    ("pdl-implication", "the implication formula on the subdirectly irreducible PDLs"),
    ("lukasiewicz", "constants in finite MV chains and primality of L2 with a constant"),
    ("finite-fields", "the weak inverse on Z_p"),
    ("monoid-gadgets", "C_r, Isbell's first formula and the inverse power law"),
    ("hilbert-meet", "meet defined in implication reducts of Heyting chains"),
    ("property-suites", "randomized checks of preservation, dominion and congruence laws"),
];

struct Checks(Vec<Check>);

impl Checks {
    fn add(&mut self, name: impl Into<String>, passed: bool, detail: Value) {
        self.0.push(Check { name: name.into(), passed, detail });
    }
}

/// Runs one reproduction.
pub fn run(id: &str, seed: u64, budget: &SearchBudget) -> Result<ReproReport> {
    let title = REPRO_IDS
        .iter()
        .find(|(i, _)| *i == id)
        .map(|(_, t)| t.to_string())
        .ok_or_else(|| Error::Invalid(format!("unknown repro id `{id}`")))?;
    let mut c = Checks(Vec::new());
    match id {
        "boolean-expansion" => boolean_expansion(&mut c, budget)?,
        "rcdl-dominions" => rcdl_dominions(&mut c, budget)?,
        "c5-gadget" => c5_gadget(&mut c, budget)?,
        "pdl-implication" => pdl(&mut c)?,
        "lukasiewicz" => lukasiewicz_suite(&mut c, budget)?,
        "finite-fields" => finite_fields(&mut c, budget)?,
        "monoid-gadgets" => monoid_gadgets(&mut c, budget)?,
        "hilbert-meet" => hilbert(&mut c)?,
        "property-suites" => {
            for s in property_suites(seed, 200, budget)? {
                c.add(s.name.clone(), s.violations == 0, serde_json::to_value(&s)?);
            }
        }
        _ => unreachable!(),
    }
    Ok(ReproReport { id: id.to_string(), title, checks: c.0 })
}

fn boolean_expansion(c: &mut Checks, budget: &SearchBudget) -> Result<()> {
    let d2 = d2_bdl();
    let k = ClassSpec::q(vec![d2.clone()])?;
    let f = check_functional(&k, &complement(), budget)?;
    let table = implicit_table(&d2, &complement())?;
    c.add("complement functional in Q(D2)", f.is_proven(), json!(f.label()));
    c.add("complement total on D2", table.is_total(), json!(table.to_table()));
    let e = expand(&d2, &[ExpansionOp::new("~", complement())])?;
    let iso = is_isomorphic(&e, &bool2(), budget)?;
    c.add("D2[~] isomorphic to B2", iso.is_proven(), serde_json::to_value(&iso)?);
    let m = ClassSpec::q(vec![e.clone()])?;
    match search_interpolant_term(&m, &complement(), budget)? {
        Verdict::Proven(t) => {
            let tt = term_table(&e, &t.term, &complement().inputs)?;
            let ok = t.term.vars().len() == 1 && Some(tt.clone()) == table.to_table();
            c.add("interpolating term computes complement", ok, json!({ "term": t.text, "table": tt }));
        }
        v => c.add("interpolating term computes complement", false, json!(v.label())),
    }
    Ok(())
}

fn d2_square(d2: &FiniteAlgebra) -> Result<FiniteAlgebra> {
    Ok(product(d2.signature(), &[d2, d2])?.0)
}

fn rcdl_dominions(c: &mut Checks, budget: &SearchBudget) -> Result<()> {
    let d2 = d2_rcdl();
    let b = d2_square(&d2)?;
    let k = ClassSpec::q(vec![d2])?;
    let mut rows = Vec::new();
    let mut all = true;
    for a in all_subuniverses(&b, &budget.meter())? {
        if a.is_empty() {
            continue;
        }
        let d = dominion(&a, &b, &k, budget)?;
        all &= d.is_trivial();
        rows.push(json!({ "sub": a, "dominion": d.result }));
    }
    c.add("relatively complemented: d(A, D2^2) = A for every A", all, json!(rows));
    let d2 = d2_bdl();
    let b = d2_square(&d2)?;
    let k = ClassSpec::q(vec![d2])?;
    let d = dominion(&[0, 1, 3], &b, &k, budget)?;
    c.add(
        "bounded lattices: d({00,01,11}, D2^2) = D2^2",
        d.result == vec![0, 1, 2, 3],
        json!({ "sub": d.sub, "dominion": d.result }),
    );
    Ok(())
}

fn c5_gadget(c: &mut Checks, budget: &SearchBudget) -> Result<()> {
    let (c5, d, kmap) = c5_counterexample();
    let b = product(c5.signature(), &[&c5, &c5])?.0;
    c.add("D is a subuniverse of C5^2", b.is_subuniverse(&d), json!(d));
    let hom = kmap.is_homomorphism(&c5, &b) && kmap.image() == d;
    c.add("k is a homomorphism onto D", hom, json!(kmap.map));
    let k = ClassSpec::q(vec![c5])?;
    let r = dominion(&d, &b, &k, budget)?;
    let pair = 4 * 5 + 3;
    c.add(
        "<c5,c4> in d(D, C5^2) - D",
        r.result.contains(&pair) && !d.contains(&pair),
        json!({ "dominion": r.result, "element": pair }),
    );
    Ok(())
}

fn pdl(c: &mut Checks) -> Result<()> {
    let def = pdl_implication();
    for k in 0..=2 {
        let a = bool_top_pdl(k)?;
        let imp = heyting_implication(&a)?;
        let n = a.size();
        let mut mismatches = Vec::new();
        for x in 0..n {
            for y in 0..n {
                for z in 0..n {
                    let asg = BTreeMap::from([("x1".to_string(), x), ("x2".to_string(), y), ("y".to_string(), z)]);
                    if eval_formula(&a, &def.formula, &asg)? != (imp[x * n + y] == z) {
                        mismatches.push((x, y, z));
                    }
                }
            }
        }
        c.add(format!("{}: phi(a, b, c) iff a => b = c", a.name()), mismatches.is_empty(), json!({ "size": n, "mismatches": mismatches }));
    }
    Ok(())
}

fn lukasiewicz_suite(c: &mut Checks, budget: &SearchBudget) -> Result<()> {
    for n in 1..=4 {
        let l = lukasiewicz(n)?;
        let f = check_functional(&ClassSpec::q(vec![l.clone()])?, &mv_constant(n), budget)?;
        let t = implicit_table(&l, &mv_constant(n))?;
        let ok = f.is_proven() && t.is_total() && t.entries().values().all(|&v| v == 1);
        c.add(format!("psi_{n} functional and total on L{n} with value 1/{n}"), ok, json!(t.to_table()));
    }
    let p = is_primal(&make_algebra("lukasiewicz_const(2)")?, budget)?;
    c.add("L2 with constant 1/2 is primal", p.is_proven(), serde_json::to_value(&p)?);
    let p = is_primal(&lukasiewicz(2)?, budget)?;
    let ok = matches!(&p, Verdict::Refuted(NotPrimal::ProperSubuniverse(s)) if s == &vec![0, 2]);
    c.add("L2 is not primal: {0, 1} is a subuniverse", ok, serde_json::to_value(&p)?);
    let w = beth_primal_witness(&lukasiewicz(2)?, &[ExpansionOp::new("c", mv_constant(2))], budget)?;
    let claim = match &w {
        Verdict::Proven(b) => json!(b.claim),
        v => json!(v.label()),
    };
    c.add("Beth companion of Q(L2) through primality", w.is_proven(), claim);
    Ok(())
}

fn finite_fields(c: &mut Checks, budget: &SearchBudget) -> Result<()> {
    for p in [2, 3, 5] {
        let z = zmod_ring(p)?;
        let f = check_functional(&ClassSpec::q(vec![z.clone()])?, &weak_inverse(), budget)?;
        let t = implicit_table(&z, &weak_inverse())?;
        let expected: Vec<usize> = (0..p).map(|x| (0..p).find(|&y| x * y % p == 1).unwrap_or(0)).collect();
        let ok = f.is_proven() && t.to_table() == Some(expected.clone());
        c.add(format!("weak inverse on Z{p}"), ok, json!(expected));
    }
    Ok(())
}

fn monoid_gadgets(c: &mut Checks, budget: &SearchBudget) -> Result<()> {
    let m = monoid_c(3)?;
    let pow = |k: usize| (0..k).fold(m.constant("1").unwrap(), |acc, _| m.op(0, &[acc, 1]));
    let ok = pow(3) != pow(4) && pow(4) == pow(5);
    c.add("C_3: c^3 != c^4 and c^4 = c^5", ok, json!([pow(3), pow(4), pow(5)]));
    let corpus = commutative_monoids(4);
    let k = ClassSpec::q(corpus.clone())?;
    let f = check_functional(&k, &isbell_formula(1), budget)?;
    c.add(
        "Isbell phi_1 functional on commutative monoids of size <= 4",
        f.is_proven(),
        json!({ "monoids": corpus.len(), "verdict": f.label() }),
    );
    let tables = [2, 3]
        .iter()
        .map(|&n| implicit_table(&cyclic_group(n)?, &monoid_inverse()))
        .collect::<Result<Vec<_>>>()?;
    let law = unary_monoid_law(&tables, 4)?;
    c.add("inverse satisfies a^1 f(a) = a^0", law == Some((1, 0)), json!(law));
    Ok(())
}

fn hilbert(c: &mut Checks) -> Result<()> {
    for n in 2..=5 {
        let h = chain_heyting(n)?;
        let r = heyting_implication_reduct(&h)?;
        let t = implicit_table(&r, &hilbert_meet())?;
        let meet: Vec<usize> = h.table(h.symbol("/\\").unwrap()).to_vec();
        c.add(format!("C{n}: defined operation is meet"), t.to_table() == Some(meet), json!(t.len()));
    }
    Ok(())
}

/// Outcome of one randomized suite.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SuiteResult {
    pub name: String,
    pub cases: usize,
    pub violations: usize,
    /// Cases whose premise held or whose answer was not vacuous.
    pub informative: usize,
    pub first_violation: Option<String>,
}

impl SuiteResult {
    fn new(name: &str) -> Self {
        SuiteResult { name: name.into(), cases: 0, violations: 0, informative: 0, first_violation: None }
    }

    fn record(&mut self, ok: bool, informative: bool, what: impl FnOnce() -> String) {
        self.cases += 1;
        self.informative += usize::from(informative);
        if !ok {
            self.violations += 1;
            if self.first_violation.is_none() {
                self.first_violation = Some(what());
            }
        }
    }
}

/// The randomized suites, each with at least `cases` cases.
pub fn property_suites(seed: u64, cases: usize, budget: &SearchBudget) -> Result<Vec<SuiteResult>> {
    Ok(vec![
        pp_preservation(seed, cases, budget)?,
        dominion_laws(seed, cases, budget)?,
        zigzag_agreement(seed, cases, budget)?,
        congruence_equations(seed, cases, budget)?,
    ])
}

fn random_term(rng: &mut ChaCha8Rng, sig: &Signature, vars: &[String], depth: usize) -> Term {
    let ops: Vec<usize> = (0..sig.len()).filter(|&s| sig.arity(s) > 0).collect();
    if depth == 0 || ops.is_empty() || rng.gen_bool(0.35) {
        if rng.gen_bool(0.15) {
            if let Some(c) = sig.constants().collect::<Vec<_>>().choose(rng) {
                return Term::constant(sig.name(*c));
            }
        }
        return Term::var(vars.choose(rng).unwrap());
    }
    let s = *ops.choose(rng).unwrap();
    Term::app(sig.name(s), (0..sig.arity(s)).map(|_| random_term(rng, sig, vars, depth - 1)).collect())
}

/// A random pp formula in x1..x3 with up to two bound variables.
pub fn random_pp(rng: &mut ChaCha8Rng, sig: &Signature) -> Formula {
    let bound: Vec<String> = (1..=rng.gen_range(0..=2)).map(|i| format!("z{i}")).collect();
    let mut vars: Vec<String> = (1..=3).map(|i| format!("x{i}")).collect();
    vars.extend(bound.iter().cloned());
    let eqs = (0..rng.gen_range(1..=3))
        .map(|_| Formula::eq(random_term(rng, sig, &vars, 2), random_term(rng, sig, &vars, 2)))
        .collect();
    Formula::exists(bound, Formula::and(eqs))
}

fn pool() -> Result<Vec<Vec<FiniteAlgebra>>> {
    let small: Vec<FiniteAlgebra> = small_monoids(3).into_iter().collect();
    Ok(vec![
        vec![d2_bdl(), chain_heyting(3)?.reduct(&["/\\", "\\/", "0", "1"])?],
        vec![chain_heyting(2)?, chain_heyting(3)?, chain_heyting(4)?],
        vec![lukasiewicz(1)?, lukasiewicz(2)?, lukasiewicz(3)?],
        vec![zmod_ring(2)?, zmod_ring(3)?, zmod_ring(4)?],
        small,
    ])
}

fn asg_of(t: &[usize]) -> BTreeMap<String, usize> {
    t.iter().enumerate().map(|(i, &v)| (format!("x{}", i + 1), v)).collect()
}

fn pp_preservation(seed: u64, cases: usize, budget: &SearchBudget) -> Result<SuiteResult> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = SuiteResult::new("pp formulas are preserved by homomorphisms and products");
    let families = pool()?;
    while out.cases < cases {
        let fam = families.choose(&mut rng).unwrap();
        let a = fam.choose(&mut rng).unwrap();
        let b = fam.choose(&mut rng).unwrap();
        let phi = random_pp(&mut rng, a.signature());
        let t: Vec<usize> = (0..3).map(|_| rng.gen_range(0..a.size())).collect();
        let holds_a = eval_formula(a, &phi, &asg_of(&t))?;
        if rng.gen_bool(0.5) {
            let homs = enumerate_homs(a, b, budget, None)?;
            if let Some(h) = homs.choose(&mut rng) {
                let img: Vec<usize> = t.iter().map(|&x| h.apply(x)).collect();
                let ok = !holds_a || eval_formula(b, &phi, &asg_of(&img))?;
                out.record(ok, holds_a, || format!("{phi} at {t:?} in {} under {:?} into {}", a.name(), h.map, b.name()));
            }
        } else {
            let (p, _) = product(a.signature(), &[a, b])?;
            let s: Vec<usize> = (0..3).map(|_| rng.gen_range(0..b.size())).collect();
            let pt: Vec<usize> = t.iter().zip(&s).map(|(&x, &y)| x * b.size() + y).collect();
            let ok = eval_formula(&p, &phi, &asg_of(&pt))? == (holds_a && eval_formula(b, &phi, &asg_of(&s))?);
            out.record(ok, holds_a, || format!("{phi} at {t:?}, {s:?} in {} x {}", a.name(), b.name()));
        }
    }
    Ok(out)
}

fn random_subset(rng: &mut ChaCha8Rng, n: usize, max: usize) -> Vec<usize> {
    (0..rng.gen_range(0..=max)).map(|_| rng.gen_range(0..n)).collect()
}

fn subset(x: &[usize], y: &[usize]) -> bool {
    x.iter().all(|e| y.contains(e))
}

fn dominion_laws(seed: u64, cases: usize, budget: &SearchBudget) -> Result<SuiteResult> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed.wrapping_add(1));
    let mut out = SuiteResult::new("dominions: sandwich, monotonicity and homomorphic images");
    let classes = vec![vec![d2_bdl()], vec![d2_rcdl()], vec![chain_heyting(3)?], vec![lukasiewicz(2)?], vec![chain_heyting(2)?, chain_heyting(3)?]];
    while out.cases < cases {
        let gens = classes.choose(&mut rng).unwrap();
        let k = ClassSpec::q(gens.clone())?;
        let g1 = gens.choose(&mut rng).unwrap();
        let g2 = gens.choose(&mut rng).unwrap();
        let b = match rng.gen_range(0..3) {
            0 => g1.clone(),
            1 => product(k.signature(), &[g1, g2])?.0,
            _ => {
                let p = product(k.signature(), &[g1, g2])?.0;
                let s = sg(&p, &random_subset(&mut rng, p.size(), 2));
                if s.is_empty() {
                    p
                } else {
                    subalgebra(&p, &s)?.0
                }
            }
        };
        let a = sg(&b, &random_subset(&mut rng, b.size(), 2));
        if a.is_empty() {
            continue;
        }
        let d = dominion(&a, &b, &k, budget)?;
        let ok = subset(&a, &d.result) && b.is_subuniverse(&d.result);
        out.record(ok, !d.is_trivial(), || format!("sandwich: A = {a:?} in {}", b.name()));

        let mut more = a.clone();
        more.extend(random_subset(&mut rng, b.size(), 1));
        let a2 = sg(&b, &more);
        let d2 = dominion(&a2, &b, &k, budget)?;
        out.record(subset(&d.result, &d2.result), a2 != a, || format!("monotone: {a:?} <= {a2:?} in {}", b.name()));

        let targets = [b.clone(), g1.clone(), product(k.signature(), &[&b, g2])?.0];
        let b2 = targets.choose(&mut rng).unwrap();
        let homs: Vec<Homomorphism> = enumerate_homs(&b, b2, budget, None)?;
        if let Some(h) = homs.choose(&mut rng) {
            let mut img: Vec<usize> = a.iter().map(|&x| h.apply(x)).collect();
            img.extend(random_subset(&mut rng, b2.size(), 1));
            let a3 = sg(b2, &img);
            let d3 = dominion(&a3, b2, &k, budget)?;
            let moved: Vec<usize> = d.result.iter().map(|&x| h.apply(x)).collect();
            out.record(subset(&moved, &d3.result), !d.is_trivial(), || format!("image: {:?} of {a:?} in {}", h.map, b.name()));
        }
    }
    Ok(out)
}

fn zigzag_agreement(seed: u64, cases: usize, budget: &SearchBudget) -> Result<SuiteResult> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed.wrapping_add(2));
    let mut out = SuiteResult::new("zigzag verdicts agree with equalizer dominions over monoids of size <= 4");
    let monoids = small_monoids(4);
    let codomains: Vec<&FiniteAlgebra> = monoids.iter().collect();
    while out.cases < cases {
        let m = monoids.choose(&mut rng).unwrap();
        let s = sg(m, &random_subset(&mut rng, m.size(), 2));
        let t = rng.gen_range(0..m.size());
        let d = dominion_over(&s, m, &codomains, budget)?;
        let inside = d.result.contains(&t);
        let v = zigzag_membership(m, &s, t, 2, 4, budget)?;
        let informative = !v.is_unknown();
        let ok = match v {
            Verdict::Proven(z) => inside && z.holds_in(m, &s)?,
            Verdict::Refuted(sep) => {
                !inside && sep.g.is_homomorphism(m, monoids.iter().chain([m]).find(|c| c.name() == sep.codomain).unwrap())
            }
            Verdict::Unknown(_) => true,
        };
        out.record(ok, informative, || format!("{} with submonoid {s:?} at {t}", m.name()));
    }
    Ok(out)
}

fn congruence_equations(seed: u64, cases: usize, budget: &SearchBudget) -> Result<SuiteResult> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed.wrapping_add(3));
    let mut out = SuiteResult::new("congruence equations: distributivity for Heyting algebras, permutability fails for the 3-chain semilattice");
    let dist = CongruenceEquation::parse("x /\\ (y \\/ z) = (x /\\ y) \\/ (x /\\ z)")?;
    let perm = CongruenceEquation::parse("x o y = y o x")?;
    let m3 = chain_meet(3)?;
    let v = check_congruence_equation(&m3, None, &perm, 1 << 20, budget)?;
    out.record(v.is_refuted(), true, || "permutability held in the 3-chain semilattice".into());
    while out.cases < cases {
        let sizes: Vec<usize> = (0..rng.gen_range(1..=2)).map(|_| rng.gen_range(2..=4)).collect();
        let chains = sizes.iter().map(|&n| chain_heyting(n)).collect::<Result<Vec<_>>>()?;
        let refs: Vec<&FiniteAlgebra> = chains.iter().collect();
        // an ordered sum of chains is a chain; products of chains lie in Q of the largest
        let (a, top) = if rng.gen_bool(0.3) && refs.len() == 2 {
            let a = ordered_sum(refs[0], refs[1])?;
            let n = a.size();
            (a, n)
        } else {
            (product(&heyting_signature(), &refs)?.0, *sizes.iter().max().unwrap())
        };
        let k = Some(ClassSpec::q(vec![chain_heyting(top)?])?);
        let v = check_congruence_equation(&a, k.as_ref(), &dist, 1 << 20, budget)?;
        out.record(v.is_proven(), true, || format!("distributivity failed in {}", a.name()));
    }
    Ok(out)
}
