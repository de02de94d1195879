//! Finitely generated classes: membership, subdirect decomposition, relative
//! subdirectly irreducible members, free and finitely presented algebras.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::ops::ControlFlow;
use std::sync::Arc;

use serde::Serialize;

use crate::algebra::{
    all_subuniverses, find_embedding, for_each_hom, generating_set, homs_metered, isomorphic, odometer,
    subalgebra, FiniteAlgebra, Homomorphism, Signature, Term,
};
use crate::budget::{Meter, SearchBudget, Verdict};
use crate::closure::{close, Closure};
use crate::congruence::{con_k, is_rsi, Congruence};
use crate::error::{Error, Result};
use crate::formula::{Formula, PpSystem};

/// Closure operator applied to the generators.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum ClassOp {
    /// Quasivariety: ISP of the generators (ultraproducts add nothing here).
    Q,
    /// Universal class: IS of the generators.
    U,
    /// Variety, decided through free algebras within a budget.
    V,
}

/// A class given by finitely many finite generators and a closure operator.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ClassSpec {
    generators: Vec<Arc<FiniteAlgebra>>,
    op: ClassOp,
}

impl ClassSpec {
    pub fn new(generators: Vec<FiniteAlgebra>, op: ClassOp) -> Result<Self> {
        let first = generators
            .first()
            .ok_or_else(|| Error::Invalid("a class needs at least one generator".into()))?;
        for g in &generators[1..] {
            first.require_same_signature(g)?;
        }
        Ok(ClassSpec {
            generators: generators.into_iter().map(Arc::new).collect(),
            op,
        })
    }

    pub fn q(generators: Vec<FiniteAlgebra>) -> Result<Self> {
        ClassSpec::new(generators, ClassOp::Q)
    }

    pub fn generators(&self) -> impl Iterator<Item = &FiniteAlgebra> + '_ {
        self.generators.iter().map(|g| g.as_ref())
    }

    pub fn generator(&self, i: usize) -> &FiniteAlgebra {
        &self.generators[i]
    }

    pub fn generator_count(&self) -> usize {
        self.generators.len()
    }

    pub fn op(&self) -> ClassOp {
        self.op
    }

    pub fn with_op(&self, op: ClassOp) -> ClassSpec {
        ClassSpec { generators: self.generators.clone(), op }
    }

    pub fn signature(&self) -> &Signature {
        self.generators[0].signature()
    }

    pub fn require_signature(&self, a: &FiniteAlgebra) -> Result<()> {
        self.generators[0].require_same_signature(a)
    }
}

impl fmt::Display for ClassSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let names: Vec<&str> = self.generators.iter().map(|g| g.name()).collect();
        write!(f, "{:?}({})", self.op, names.join(", "))
    }
}

/// A quasiequation: a conjunction of premises implying an equation.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Quasiequation {
    pub premises: Vec<(Term, Term)>,
    pub conclusion: (Term, Term),
}

impl Quasiequation {
    pub fn to_formula(&self) -> Formula {
        Formula::implies(
            Formula::and(self.premises.iter().map(|(s, t)| Formula::Eq(s.clone(), t.clone())).collect()),
            Formula::Eq(self.conclusion.0.clone(), self.conclusion.1.clone()),
        )
    }
}

impl fmt::Display for Quasiequation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let prem: Vec<String> = self.premises.iter().map(|(s, t)| format!("{s} = {t}")).collect();
        let prem = if prem.is_empty() { "true".to_string() } else { prem.join(" & ") };
        write!(f, "{prem} -> {} = {}", self.conclusion.0, self.conclusion.1)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub enum MembershipProof {
    /// Homomorphisms into generators (generator index, map) separating all pairs.
    Separating(Vec<(usize, Homomorphism)>),
    /// An embedding into a generator.
    Embedding(usize, Homomorphism),
    /// The algebra is a homomorphic image of the free algebra on `rank`
    /// generators; `images` lists the generator images.
    FreeImage { rank: usize, free_size: usize, images: Vec<usize> },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub enum MembershipFailure {
    /// A quasiequation valid in the generators, failing in B at `assignment`
    /// (variable `x<i>` is element i).
    Quasi {
        law: Quasiequation,
        text: String,
        unseparated: (usize, usize),
    },
    /// B embeds into no generator.
    NoEmbedding,
    /// An identity valid in the generators that fails in B.
    Identity { lhs: Term, rhs: Term, text: String, assignment: Vec<usize> },
}

fn elem_var(e: usize) -> Term {
    Term::Var(format!("x{e}"))
}

/// The positive diagram of `b`: one flat equation per symbol and tuple.
fn diagram(b: &FiniteAlgebra) -> Vec<(Term, Term)> {
    let sig = b.signature();
    let mut out = Vec::new();
    for s in 0..sig.len() {
        let k = sig.arity(s);
        crate::algebra::for_each_tuple(b.size(), k, |args| {
            out.push((
                Term::App(sig.name(s).to_string(), args.iter().map(|&a| elem_var(a)).collect()),
                elem_var(b.op(s, args)),
            ));
        });
    }
    out
}

/// Whether the quasiequation holds in `c`: no assignment satisfies the
/// premises while violating the conclusion.
fn quasi_holds(c: &FiniteAlgebra, q: &Quasiequation, meter: &Meter) -> Result<bool> {
    let sys = PpSystem::new(c, &q.premises, &[])?;
    let mut conc = q.conclusion.0.vars();
    conc.extend(q.conclusion.1.vars());
    let mut holds = true;
    let names = sys.names.clone();
    sys.solve(c, &[], &[], meter, &mut |env| {
        let asg: BTreeMap<String, usize> = names.iter().cloned().zip(env.iter().copied()).collect();
        // unconstrained conclusion variables range freely
        let free: Vec<String> = conc.iter().filter(|v| !asg.contains_key(*v)).cloned().collect();
        let mut vals = vec![0; free.len()];
        loop {
            let mut a = asg.clone();
            for (v, &x) in free.iter().zip(&vals) {
                a.insert(v.clone(), x);
            }
            let l = crate::algebra::eval_term(c, &q.conclusion.0, &a).unwrap_or(usize::MAX);
            let r = crate::algebra::eval_term(c, &q.conclusion.1, &a).unwrap_or(usize::MAX);
            if l != r {
                holds = false;
                return ControlFlow::Break(());
            }
            if free.is_empty() || !odometer(&mut vals, c.size()) {
                break;
            }
        }
        ControlFlow::Continue(())
    })?;
    Ok(holds)
}

fn separating(
    b: &FiniteAlgebra,
    k: &ClassSpec,
    meter: &Meter,
) -> Result<(Vec<(usize, Homomorphism)>, Option<(usize, usize)>)> {
    let n = b.size();
    let mut kernel = Congruence::total(n);
    let mut chosen: Vec<(usize, Homomorphism)> = Vec::new();
    for (gi, g) in k.generators().enumerate() {
        for h in homs_metered(b, g, meter, None)? {
            let next = kernel.meet(&Congruence::kernel(&h.map));
            if next != kernel {
                kernel = next;
                chosen.push((gi, h));
            }
        }
    }
    let bad = (0..n)
        .flat_map(|a| (a + 1..n).map(move |c| (a, c)))
        .find(|&(a, c)| kernel.related(a, c));
    Ok((chosen, bad))
}

/// Decides B ∈ K. For Q and U the answer is exact; for V it is exact when
/// the free-algebra closure fits the budget and Unknown otherwise.
pub fn membership(
    b: &FiniteAlgebra,
    k: &ClassSpec,
    budget: &SearchBudget,
) -> Result<Verdict<MembershipProof, MembershipFailure>> {
    k.require_signature(b)?;
    let meter = budget.meter();
    Verdict::from_result(match k.op() {
        ClassOp::Q => q_membership(b, k, &meter),
        ClassOp::U => {
            for (gi, g) in k.generators().enumerate() {
                if let Some(e) = find_embedding(b, g, &meter)? {
                    return Ok(Verdict::Proven(MembershipProof::Embedding(gi, e)));
                }
            }
            Ok(Verdict::Refuted(MembershipFailure::NoEmbedding))
        }
        ClassOp::V => v_membership(b, k, &meter),
    })
}

fn q_membership(
    b: &FiniteAlgebra,
    k: &ClassSpec,
    meter: &Meter,
) -> Result<Verdict<MembershipProof, MembershipFailure>> {
    let (chosen, bad) = separating(b, k, meter)?;
    let (x, y) = match bad {
        None => return Ok(Verdict::Proven(MembershipProof::Separating(chosen))),
        Some(p) => p,
    };
    let mut law = Quasiequation {
        premises: diagram(b),
        conclusion: (elem_var(y), elem_var(x)),
    };
    // Drop premises greedily while the law stays valid in every generator.
    let mut i = 0;
    while i < law.premises.len() {
        let removed = law.premises.remove(i);
        let valid = (|| -> Result<bool> {
            for g in k.generators() {
                if !quasi_holds(g, &law, meter)? {
                    return Ok(false);
                }
            }
            Ok(true)
        })();
        match valid {
            Ok(true) => {}
            Ok(false) => {
                law.premises.insert(i, removed);
                i += 1;
            }
            Err(Error::Budget(_)) => {
                law.premises.insert(i, removed);
                break;
            }
            Err(e) => return Err(e),
        }
    }
    let text = law.to_string();
    Ok(Verdict::Refuted(MembershipFailure::Quasi {
        law,
        text,
        unseparated: (x, y),
    }))
}

/// Free algebra of `K` on `rank` generators realised inside the power of the
/// generators indexed by all assignments; the extra coordinates hold the
/// chosen images in B so that well-definedness of the induced map can be read off.
fn v_membership(
    b: &FiniteAlgebra,
    k: &ClassSpec,
    meter: &Meter,
) -> Result<Verdict<MembershipProof, MembershipFailure>> {
    let gens = generating_set(b);
    let rank = gens.len();
    let (mut coords, mut vectors) = assignment_coordinates(k, rank, meter)?;
    let kcoords = coords.len();
    coords.push(b);
    for (v, &g) in vectors.iter_mut().zip(&gens) {
        v.push(g as u8);
    }
    let names: Vec<(String, Vec<u8>)> =
        vectors.into_iter().enumerate().map(|(i, v)| (format!("x{}", i + 1), v)).collect();
    let cl = close(k.signature(), &coords, &names, meter, None)?;
    let mut seen: BTreeMap<Vec<u8>, usize> = BTreeMap::new();
    for i in 0..cl.len() {
        let e = cl.element(i);
        if let Some(&j) = seen.get(&e[..kcoords]) {
            let (lhs, rhs) = (cl.term(j), cl.term(i));
            let text = format!("{lhs} = {rhs}");
            return Ok(Verdict::Refuted(MembershipFailure::Identity { lhs, rhs, text, assignment: gens }));
        }
        seen.insert(e[..kcoords].to_vec(), i);
    }
    Ok(Verdict::Proven(MembershipProof::FreeImage { rank, free_size: cl.len(), images: gens }))
}

/// Coordinates for a free algebra on `rank` generators: one per generator
/// algebra and assignment of the variables, in lexicographic order.
pub(crate) fn assignment_coordinates<'a>(
    k: &'a ClassSpec,
    rank: usize,
    meter: &Meter,
) -> Result<(Vec<&'a FiniteAlgebra>, Vec<Vec<u8>>)> {
    let mut coords = Vec::new();
    let mut vectors = vec![Vec::new(); rank];
    for g in k.generators() {
        let count = crate::algebra::table_len(g.size(), rank)
            .ok_or_else(|| Error::Budget("too many coordinates".into()))?;
        meter.check_elements(coords.len() + count)?;
        let mut asg = vec![0usize; rank];
        for _ in 0..count {
            coords.push(g);
            for (v, &x) in vectors.iter_mut().zip(&asg) {
                v.push(x as u8);
            }
            odometer(&mut asg, g.size());
        }
    }
    Ok((coords, vectors))
}

/// A finite algebra built as a subpower, with the images of the named
/// variables and a witness term for each element.
#[derive(Clone, Debug)]
pub struct Presented {
    pub algebra: FiniteAlgebra,
    pub variables: Vec<(String, usize)>,
    pub terms: Vec<Term>,
}

impl Presented {
    pub fn image(&self, v: &str) -> Option<usize> {
        self.variables.iter().find(|(n, _)| n == v).map(|p| p.1)
    }
}

fn presented_from(cl: &Closure, name: &str, vars: &[(String, Vec<u8>)]) -> Result<Presented> {
    let algebra = cl.to_algebra(name)?;
    let variables = vars
        .iter()
        .map(|(n, v)| (n.clone(), cl.find(v).expect("generator present")))
        .collect();
    let terms = (0..cl.len()).map(|i| cl.term(i)).collect();
    Ok(Presented { algebra, variables, terms })
}

/// The free algebra of Q(K) on `rank` generators named `x1..`.
pub fn free_algebra(k: &ClassSpec, rank: usize, budget: &SearchBudget) -> Result<Presented> {
    let vars: Vec<String> = (1..=rank).map(|i| format!("x{i}")).collect();
    free_algebra_on(k, &vars, budget)
}

pub fn free_algebra_on(k: &ClassSpec, vars: &[String], budget: &SearchBudget) -> Result<Presented> {
    let meter = budget.meter();
    if vars.is_empty() && k.signature().constants().next().is_none() {
        return Err(Error::Invalid("a free algebra on no generators needs constants".into()));
    }
    let (coords, vectors) = assignment_coordinates(k, vars.len(), &meter)?;
    let named: Vec<(String, Vec<u8>)> = vars.iter().cloned().zip(vectors).collect();
    let cl = close(k.signature(), &coords, &named, &meter, None)?;
    presented_from(&cl, &format!("F({})", vars.len()), &named)
}

/// T_K(φ) for a pp formula: the subpower generated by the variable vectors
/// over all satisfying assignments of the matrix into the generators.
pub fn finitely_presented(f: &Formula, k: &ClassSpec, budget: &SearchBudget) -> Result<Presented> {
    let class = crate::formula::classify(f);
    if class > crate::formula::FormulaClass::Pp {
        return Err(Error::FormulaClass { expected: "pp".into(), found: class.to_string() });
    }
    let meter = budget.meter();
    let forms = crate::formula::pp_disjuncts(f, 1).expect("pp formula");
    let form = &forms[0];
    let mut vars: Vec<String> = f.free_vars().into_iter().collect();
    vars.extend(form.bound.iter().cloned());
    let mut coords: Vec<&FiniteAlgebra> = Vec::new();
    let mut vectors = vec![Vec::new(); vars.len()];
    for g in k.generators() {
        let sys = PpSystem::from_form(g, form, &vars)?;
        let mut err = None;
        sys.solve(g, &[], &[], &meter, &mut |env| {
            if coords.len() >= meter.budget().max_elements {
                err = Some(Error::Budget("too many satisfying assignments".into()));
                return ControlFlow::Break(());
            }
            coords.push(g);
            for (v, &x) in vectors.iter_mut().zip(env) {
                v.push(x as u8);
            }
            ControlFlow::Continue(())
        })?;
        if let Some(e) = err {
            return Err(e);
        }
    }
    if coords.is_empty() {
        let algebra = crate::algebra::trivial(k.signature()).renamed("T");
        return Ok(Presented {
            algebra,
            variables: vars.iter().map(|v| (v.clone(), 0)).collect(),
            terms: vec![vars.first().map(|v| Term::Var(v.clone())).unwrap_or_else(|| Term::Var("x".into()))],
        });
    }
    let named: Vec<(String, Vec<u8>)> = vars.into_iter().zip(vectors).collect();
    let cl = close(k.signature(), &coords, &named, &meter, None)?;
    presented_from(&cl, "T", &named)
}

/// Irredundant family of K-congruences meeting in the identity, each with a
/// relatively subdirectly irreducible quotient.
pub fn subdirect_decomposition(a: &FiniteAlgebra, k: &ClassSpec, budget: &SearchBudget) -> Result<Vec<Congruence>> {
    let meter = budget.meter();
    let lat = con_k(a, k, &meter)?;
    let id = Congruence::identity(a.size());
    if !lat.contains(&id) {
        return Err(Error::Invalid(format!("`{}` is not in {k}", a.name())));
    }
    if a.is_trivial() {
        return Ok(Vec::new());
    }
    let mut parts = lat.meet_irreducibles();
    let meet = |ps: &[Congruence]| ps.iter().fold(Congruence::total(a.size()), |m, p| m.meet(p));
    let mut i = 0;
    while i < parts.len() {
        let mut rest = parts.clone();
        rest.remove(i);
        if meet(&rest) == id {
            parts = rest;
        } else {
            i += 1;
        }
    }
    Ok(parts)
}

/// Relatively subdirectly irreducible members of Q(K) up to isomorphism:
/// the nontrivial subalgebras of generators that are RSI relative to K.
pub fn rsi_members(k: &ClassSpec, budget: &SearchBudget) -> Result<Vec<FiniteAlgebra>> {
    let meter = budget.meter();
    let mut out: Vec<FiniteAlgebra> = Vec::new();
    for g in k.generators() {
        for s in all_subuniverses(g, &meter)? {
            if s.len() < 2 {
                continue;
            }
            let (sub, _) = subalgebra(g, &s)?;
            if !is_rsi(&sub, Some(k), budget)? {
                continue;
            }
            let mut dup = false;
            for o in &out {
                if isomorphic(o, &sub, &meter)? {
                    dup = true;
                    break;
                }
            }
            if !dup {
                let name = format!("{}[{}]", g.name(), s.iter().map(|e| e.to_string()).collect::<Vec<_>>().join(","));
                out.push(sub.renamed(name));
            }
        }
    }
    out.sort_by(|x, y| x.size().cmp(&y.size()).then_with(|| x.tables().cmp(y.tables())));
    Ok(out)
}

/// Checks that every map from the free generators into a generator algebra
/// extends to exactly one homomorphism.
pub fn check_universal_property(free: &Presented, k: &ClassSpec, budget: &SearchBudget) -> Result<bool> {
    let meter = budget.meter();
    let gens: Vec<usize> = free.variables.iter().map(|v| v.1).collect();
    for c in k.generators() {
        let mut asg = vec![0usize; gens.len()];
        loop {
            let mut constraint = vec![None; free.algebra.size()];
            let mut consistent = true;
            for (&g, &x) in gens.iter().zip(&asg) {
                match constraint[g] {
                    Some(y) if y != x => consistent = false,
                    _ => constraint[g] = Some(x),
                }
            }
            let mut count = 0;
            if consistent {
                for_each_hom(&free.algebra, c, &meter, Some(&constraint), false, |_| {
                    count += 1;
                    ControlFlow::Continue(())
                })?;
            }
            if count != 1 {
                return Ok(false);
            }
            if gens.is_empty() || !odometer(&mut asg, c.size()) {
                break;
            }
        }
    }
    Ok(true)
}

/// Distinct subalgebras of the generators (as sets), for corpus checks.
pub fn generator_subalgebras(k: &ClassSpec, budget: &SearchBudget) -> Result<Vec<FiniteAlgebra>> {
    let meter = budget.meter();
    let mut out = Vec::new();
    let mut seen = BTreeSet::new();
    for (gi, g) in k.generators().enumerate() {
        for s in all_subuniverses(g, &meter)? {
            if s.is_empty() || s.len() == g.size() || !seen.insert((gi, s.clone())) {
                continue;
            }
            let (sub, _) = subalgebra(g, &s)?;
            out.push(sub);
        }
    }
    Ok(out)
}

/// Generators, their proper subalgebras, and all products of two generators.
pub fn corpus(k: &ClassSpec, budget: &SearchBudget) -> Result<Vec<FiniteAlgebra>> {
    let mut out: Vec<FiniteAlgebra> = k.generators().cloned().collect();
    out.extend(generator_subalgebras(k, budget)?);
    let n = k.generator_count();
    for i in 0..n {
        for j in i..n {
            let (p, _) = crate::algebra::product(k.signature(), &[k.generator(i), k.generator(j)])?;
            out.push(p);
        }
    }
    Ok(out)
}
