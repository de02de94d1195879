//! pp expansions: adding implicit operations as new basic operations, the
//! axioms of the expanded class, congruence preservation, interpolation
//! checks and Beth companions through primality.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::Serialize;

use crate::algebra::{eval_term, FiniteAlgebra, Term};
use crate::budget::{SearchBudget, Verdict};
use crate::classops::{corpus, membership, ClassSpec};
use crate::congruence::{con_k, Congruence};
use crate::error::{Error, Result};
use crate::formula::{
    check_functional, classify, implicit_relation, implicit_table, Formula, FormulaClass, ImplicitDef,
    PartialFunctionTable,
};
use crate::termcond::{is_primal, NotPrimal, PrimalProof};

/// A new symbol interpreted by an implicit operation.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ExpansionOp {
    pub symbol: String,
    pub def: ImplicitDef,
}

impl ExpansionOp {
    pub fn new(symbol: &str, def: ImplicitDef) -> Self {
        ExpansionOp { symbol: symbol.to_string(), def }
    }

    /// Inputs that occur in the formula. With none, the symbol is a constant.
    pub fn arity(&self) -> usize {
        if self.used_inputs() { self.def.arity() } else { 0 }
    }

    fn used_inputs(&self) -> bool {
        let free = self.def.formula.free_vars();
        self.def.inputs.iter().any(|v| free.contains(v))
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExpansionSpec {
    pub base: ClassSpec,
    pub ops: Vec<ExpansionOp>,
}

impl ExpansionSpec {
    /// Checks that the new symbols are fresh and distinct and that every
    /// defining formula is pp over the base signature.
    pub fn new(base: ClassSpec, ops: Vec<ExpansionOp>) -> Result<Self> {
        let mut seen = BTreeSet::new();
        for op in &ops {
            if base.signature().index_of(&op.symbol).is_some() || !seen.insert(op.symbol.clone()) {
                return Err(Error::DuplicateSymbol(op.symbol.clone()));
            }
            op.def.validate()?;
            op.def.formula.check(base.signature())?;
            let class = classify(&op.def.formula);
            if class > FormulaClass::Pp {
                return Err(Error::FormulaClass { expected: "pp".into(), found: class.to_string() });
            }
        }
        Ok(ExpansionSpec { base, ops })
    }

    pub fn base_symbols(&self) -> Vec<&str> {
        self.base.signature().symbols().iter().map(|s| s.name.as_str()).collect()
    }
}

impl fmt::Display for ExpansionSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let syms: Vec<&str> = self.ops.iter().map(|o| o.symbol.as_str()).collect();
        write!(f, "{}[{}]", self.base, syms.join(", "))
    }
}

fn expanded_name(a: &FiniteAlgebra, ops: &[ExpansionOp]) -> String {
    if ops.is_empty() {
        return a.name().to_string();
    }
    let syms: Vec<&str> = ops.iter().map(|o| o.symbol.as_str()).collect();
    format!("{}[{}]", a.name(), syms.join(","))
}

/// A[L_F]: `a` with every implicit operation added as a basic operation.
pub fn expand(a: &FiniteAlgebra, ops: &[ExpansionOp]) -> Result<FiniteAlgebra> {
    let mut out = a.clone();
    for op in ops {
        let t = implicit_table(a, &op.def)?;
        if let Some(missing) = t.missing() {
            return Err(Error::NotTotal(missing));
        }
        let table = t.to_table().expect("total");
        let table = if op.arity() == 0 { vec![table[0]] } else { table };
        out = out.expanded(&op.symbol, op.arity(), table)?;
    }
    Ok(out.renamed(expanded_name(a, ops)))
}

/// The expanded class and its axioms.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExpandedClass {
    pub class: ClassSpec,
    /// The base class whose quasiequational theory is the first part of
    /// the axiomatization.
    pub base: String,
    /// φ_f(x1, .., xn, g_f(x1, .., xn)) for each new symbol g_f.
    pub axioms: Vec<Formula>,
    /// Generators left out because an operation was not total on them.
    pub dropped: Vec<String>,
}

impl ExpandedClass {
    /// Axioms as lines of the formula grammar.
    pub fn axiom_lines(&self) -> Vec<String> {
        let mut out = vec![format!("# the quasiequations valid in {}", self.base)];
        out.extend(self.axioms.iter().map(|f| f.to_string()));
        out
    }
}

/// The defining formula with the output replaced by the new symbol applied
/// to the inputs.
pub fn defining_axiom(op: &ExpansionOp) -> Formula {
    let args: Vec<Term> = if op.arity() == 0 {
        Vec::new()
    } else {
        op.def.inputs.iter().map(|v| Term::var(v)).collect()
    };
    let mut map = BTreeMap::new();
    map.insert(op.def.output.clone(), Term::app(&op.symbol, args));
    op.def.formula.rename_apart().substitute(&map)
}

/// Expands every generator. Each operation must be functional in the base
/// class and total on every generator; with `allow_nontotal`, generators
/// where some operation is partial are dropped instead.
pub fn expand_class(spec: &ExpansionSpec, allow_nontotal: bool, budget: &SearchBudget) -> Result<ExpandedClass> {
    for op in &spec.ops {
        match check_functional(&spec.base, &op.def, budget)? {
            Verdict::Proven(_) => {}
            Verdict::Refuted(w) => {
                return Err(Error::NotFunctional(format!(
                    "`{}` on `{}` at {:?} has values {} and {}",
                    op.symbol, w.generator_name, w.inputs, w.outputs.0, w.outputs.1
                )))
            }
            Verdict::Unknown(m) => return Err(Error::Budget(m)),
        }
    }
    let mut gens = Vec::new();
    let mut dropped = Vec::new();
    for g in spec.base.generators() {
        match expand(g, &spec.ops) {
            Ok(e) => gens.push(e),
            Err(Error::NotTotal(_)) if allow_nontotal => dropped.push(g.name().to_string()),
            Err(Error::NotTotal(t)) => {
                return Err(Error::Invalid(format!("an operation is not total on `{}`: no value at {t:?}", g.name())))
            }
            Err(e) => return Err(e),
        }
    }
    if gens.is_empty() {
        return Err(Error::Invalid("no generator supports every operation".into()));
    }
    Ok(ExpandedClass {
        class: ClassSpec::new(gens, spec.base.op())?,
        base: spec.base.to_string(),
        axioms: spec.ops.iter().map(defining_axiom).collect(),
        dropped,
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Preserving {
    pub congruences: usize,
}

/// A congruence in one lattice and not the other.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Differing {
    pub congruence: Congruence,
    /// True when it is a K-congruence of the reduct only.
    pub reduct_only: bool,
}

/// Compares Con_M(A) with Con_K of the base reduct.
pub fn check_congruence_preserving(
    spec: &ExpansionSpec,
    a: &FiniteAlgebra,
    budget: &SearchBudget,
) -> Result<Verdict<Preserving, Differing>> {
    let reduct = a.reduct(&spec.base_symbols())?;
    if let Verdict::Refuted(f) = membership(&reduct, &spec.base, budget)? {
        return Err(Error::Invalid(format!("the reduct of `{}` is not in {}: {f:?}", a.name(), spec.base)));
    }
    let m = expand_class(spec, false, budget)?;
    m.class.require_signature(a)?;
    Verdict::from_result((|| {
        let meter = budget.meter();
        let big = con_k(a, &m.class, &meter)?;
        let small = con_k(&reduct, &spec.base, &meter)?;
        if let Some(c) = big.elements.iter().find(|c| !small.contains(c)) {
            return Ok(Verdict::Refuted(Differing { congruence: c.clone(), reduct_only: false }));
        }
        if let Some(c) = small.elements.iter().find(|c| !big.contains(c)) {
            return Ok(Verdict::Refuted(Differing { congruence: c.clone(), reduct_only: true }));
        }
        Ok(Verdict::Proven(Preserving { congruences: big.len() }))
    })())
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Interpolated {
    pub checked: Vec<String>,
    pub points: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct NotInterpolated {
    pub algebra: String,
    pub inputs: Vec<usize>,
    pub value: usize,
}

fn domain_graph(a: &FiniteAlgebra, def: &ImplicitDef, budget: &SearchBudget) -> Result<BTreeMap<Vec<usize>, usize>> {
    let rel = implicit_relation(a, def, &budget.meter())?;
    let mut out = BTreeMap::new();
    for (x, ys) in rel {
        if ys.len() != 1 {
            return Err(Error::NotFunctional(format!("`{}` at {x:?}", a.name())));
        }
        out.insert(x, *ys.iter().next().unwrap());
    }
    Ok(out)
}

/// Whether each value of the implicit operation, on the generators of `m`,
/// their subalgebras and binary products, is the value of one of `terms`.
pub fn check_interpolation(
    m: &ClassSpec,
    def: &ImplicitDef,
    terms: &[Term],
    budget: &SearchBudget,
) -> Result<Verdict<Interpolated, NotInterpolated>> {
    def.validate()?;
    for t in terms {
        t.check(m.signature())?;
        if let Some(v) = t.vars().into_iter().find(|v| !def.inputs.contains(v)) {
            return Err(Error::UnboundVariable(v));
        }
    }
    Verdict::from_result((|| {
        let mut checked = Vec::new();
        let mut points = 0;
        for c in corpus(m, budget)? {
            for (x, v) in domain_graph(&c, def, budget)? {
                let asg: BTreeMap<String, usize> = def.inputs.iter().cloned().zip(x.iter().copied()).collect();
                let mut hit = false;
                for t in terms {
                    if eval_term(&c, t, &asg)? == v {
                        hit = true;
                        break;
                    }
                }
                if !hit {
                    return Ok(Verdict::Refuted(NotInterpolated { algebra: c.name().to_string(), inputs: x, value: v }));
                }
                points += 1;
            }
            checked.push(c.name().to_string());
        }
        Ok(Verdict::Proven(Interpolated { checked, points }))
    })())
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BethCompanion {
    pub expanded: String,
    pub route: PrimalProof,
    pub claim: String,
}

/// If A[L_F] is primal then V(A[L_F]) is a Beth companion of Q(A).
pub fn beth_primal_witness(
    a: &FiniteAlgebra,
    ops: &[ExpansionOp],
    budget: &SearchBudget,
) -> Result<Verdict<BethCompanion, NotPrimal>> {
    let base = ClassSpec::q(vec![a.clone()])?;
    let spec = ExpansionSpec::new(base, ops.to_vec())?;
    let m = expand_class(&spec, false, budget)?;
    let e = m.class.generator(0).clone();
    Ok(match is_primal(&e, budget)? {
        Verdict::Proven(route) => Verdict::Proven(BethCompanion {
            claim: format!("V({}) is a Beth companion of Q({})", e.name(), a.name()),
            expanded: e.name().to_string(),
            route,
        }),
        Verdict::Refuted(r) => Verdict::Refuted(r),
        Verdict::Unknown(m) => Verdict::Unknown(m),
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CompositionFailure {
    pub algebra: String,
    pub inputs: Vec<usize>,
    pub expected: usize,
    /// None when g is undefined at the term values.
    pub found: Option<usize>,
}

/// Checks pointwise on each table's carrier that g(t1, .., tm) agrees with
/// the implicit operation on its domain. `g` holds one table per corpus
/// algebra.
pub fn compose_interpolation_check(
    g: &[PartialFunctionTable],
    terms: &[Term],
    def: &ImplicitDef,
    budget: &SearchBudget,
) -> Result<Verdict<usize, CompositionFailure>> {
    def.validate()?;
    Verdict::from_result((|| {
        let mut points = 0;
        for table in g {
            if table.arity() != terms.len() {
                return Err(Error::Arity { symbol: "g".into(), expected: table.arity(), found: terms.len() });
            }
            let c = table.carrier();
            for (x, v) in domain_graph(c, def, budget)? {
                let asg: BTreeMap<String, usize> = def.inputs.iter().cloned().zip(x.iter().copied()).collect();
                let args = terms.iter().map(|t| eval_term(c, t, &asg)).collect::<Result<Vec<_>>>()?;
                let found = table.get(&args);
                if found != Some(v) {
                    return Ok(Verdict::Refuted(CompositionFailure { algebra: c.name().to_string(), inputs: x, expected: v, found }));
                }
                points += 1;
            }
        }
        Ok(Verdict::Proven(points))
    })())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{enumerate_homs, is_isomorphic};
    use crate::formula::parse_term;
    use crate::gallery::*;

    fn b() -> SearchBudget {
        SearchBudget::default()
    }

    fn comp() -> Vec<ExpansionOp> {
        vec![ExpansionOp::new("~", complement())]
    }

    #[test]
    fn d2_with_complement_is_boolean() {
        let e = expand(&d2_bdl(), &comp()).unwrap();
        assert!(is_isomorphic(&e, &bool2(), &b()).unwrap().is_proven());
        assert_eq!(e.reduct(&["/\\", "\\/", "0", "1"]).unwrap().tables(), d2_bdl().tables());
    }

    #[test]
    fn lukasiewicz_constant() {
        let l2 = lukasiewicz(2).unwrap();
        let e = expand(&l2, &[ExpansionOp::new("c", mv_constant(2))]).unwrap();
        assert_eq!(e.constant("c"), Some(1));
    }

    #[test]
    fn partial_table_reports_tuple() {
        let c3 = chain_heyting(3).unwrap().reduct(&["/\\", "\\/", "0", "1"]).unwrap();
        assert_eq!(c3.signature(), &bdl_signature());
        assert_eq!(expand(&c3, &comp()), Err(Error::NotTotal(vec![1])));
    }

    #[test]
    fn class_expansions() {
        let spec = ExpansionSpec::new(ClassSpec::q(vec![d2_bdl()]).unwrap(), comp()).unwrap();
        let m = expand_class(&spec, false, &b()).unwrap();
        assert!(is_isomorphic(m.class.generator(0), &bool2(), &b()).unwrap().is_proven());
        assert_eq!(m.axioms[0].to_string(), "x /\\ ~x = 0 & x \\/ ~x = 1");

        let pdls: Vec<FiniteAlgebra> = (0..=2).map(|k| bool_top_pdl(k).unwrap()).collect();
        let spec = ExpansionSpec::new(ClassSpec::q(pdls).unwrap(), vec![ExpansionOp::new("=>", pdl_implication())]).unwrap();
        let m = expand_class(&spec, false, &b()).unwrap();
        for g in m.class.generators() {
            let (meet, imp) = (g.symbol("/\\").unwrap(), g.symbol("=>").unwrap());
            let n = g.size();
            let le = |x: usize, y: usize| g.op(meet, &[x, y]) == x;
            for x in 0..n {
                for y in 0..n {
                    for z in 0..n {
                        assert_eq!(le(g.op(meet, &[x, y]), z), le(x, g.op(imp, &[y, z])));
                    }
                }
            }
        }

        let spec = ExpansionSpec::new(ClassSpec::q(vec![d2_bdl()]).unwrap(), vec![]).unwrap();
        let m = expand_class(&spec, false, &b()).unwrap();
        assert_eq!(m.class, spec.base);
    }

    #[test]
    fn nontotal_generators_dropped_only_on_request() {
        let c3 = chain_heyting(3).unwrap().reduct(&["/\\", "\\/", "0", "1"]).unwrap();
        let spec = ExpansionSpec::new(ClassSpec::q(vec![d2_bdl(), c3]).unwrap(), comp()).unwrap();
        // the 3-chain has no complement for its middle element
        let m = expand_class(&spec, true, &b()).unwrap();
        assert_eq!(m.class.generator_count(), 1);
        assert_eq!(m.dropped, vec!["C3".to_string()]);
        assert!(expand_class(&spec, false, &b()).is_err());
    }

    #[test]
    fn congruence_preservation() {
        let spec = ExpansionSpec::new(ClassSpec::q(vec![d2_bdl()]).unwrap(), comp()).unwrap();
        let e = expand(&d2_bdl(), &comp()).unwrap();
        assert!(check_congruence_preserving(&spec, &e, &b()).unwrap().is_proven());

        let ops = vec![ExpansionOp::new("c", mv_constant(2))];
        let l2 = lukasiewicz(2).unwrap();
        let spec = ExpansionSpec::new(ClassSpec::q(vec![l2.clone()]).unwrap(), ops.clone()).unwrap();
        let e = expand(&l2, &ops).unwrap();
        let v = check_congruence_preserving(&spec, &e, &b()).unwrap();
        assert_eq!(v.proven().unwrap().congruences, 2);

        let spec = ExpansionSpec::new(ClassSpec::q(vec![l2.clone()]).unwrap(), vec![]).unwrap();
        assert!(check_congruence_preserving(&spec, &l2, &b()).unwrap().is_proven());
    }

    #[test]
    fn interpolation_checks() {
        let m = ClassSpec::q(vec![bool2()]).unwrap();
        let not_x = parse_term("~(x)", m.signature()).unwrap();
        assert!(check_interpolation(&m, &complement(), &[not_x], &b()).unwrap().is_proven());
        let x = parse_term("x", m.signature()).unwrap();
        let v = check_interpolation(&m, &complement(), &[x], &b()).unwrap();
        assert!(v.is_refuted());

        let ops = vec![ExpansionOp::new("/\\", hilbert_meet())];
        let gens: Vec<FiniteAlgebra> = (2..=5)
            .map(|n| expand(&heyting_implication_reduct(&chain_heyting(n).unwrap()).unwrap(), &ops).unwrap())
            .collect();
        let m = ClassSpec::q(gens).unwrap();
        let t = parse_term("x1 /\\ x2", m.signature()).unwrap();
        assert!(check_interpolation(&m, &hilbert_meet(), &[t], &b()).unwrap().is_proven());
    }

    #[test]
    fn beth_witnesses() {
        let l2 = lukasiewicz(2).unwrap();
        let v = beth_primal_witness(&l2, &[ExpansionOp::new("c", mv_constant(2))], &b()).unwrap();
        assert_eq!(v.proven().unwrap().claim, "V(L2[c]) is a Beth companion of Q(L2)");
        assert!(beth_primal_witness(&d2_bdl(), &comp(), &b()).unwrap().is_proven());
        let any = ImplicitDef::new(crate::formula::parse("y = y & x = x", &bdl_signature()).unwrap(), &["x"], "y");
        assert!(beth_primal_witness(&d2_bdl(), &[ExpansionOp::new("f", any)], &b()).is_err());
    }

    #[test]
    fn composition_checks() {
        let groups: Vec<FiniteAlgebra> = (2..=3).map(|n| cyclic_group(n).unwrap()).collect();
        let inv: Vec<PartialFunctionTable> = groups.iter().map(|g| implicit_table(g, &monoid_inverse()).unwrap()).collect();
        let x = parse_term("x", &monoid_signature()).unwrap();
        assert_eq!(compose_interpolation_check(&inv, &[x.clone()], &monoid_inverse(), &b()).unwrap(), Verdict::Proven(5));

        let cm = monoid_c(3).unwrap();
        let id = vec![PartialFunctionTable::identity(std::sync::Arc::new(cm))];
        let sq = parse_term("x*x", &monoid_signature()).unwrap();
        assert!(compose_interpolation_check(&id, &[sq], &monoid_square(), &b()).unwrap().is_proven());
        assert!(compose_interpolation_check(&id, &[x.clone()], &monoid_square(), &b()).unwrap().is_refuted());
        assert!(compose_interpolation_check(&id, &[x.clone(), x], &monoid_square(), &b()).is_err());
    }

    #[test]
    fn small_homs_are_big_homs() {
        let pdls: Vec<FiniteAlgebra> = (0..=2).map(|k| bool_top_pdl(k).unwrap()).collect();
        let ops = vec![ExpansionOp::new("=>", pdl_implication())];
        let big: Vec<FiniteAlgebra> = pdls.iter().map(|p| expand(p, &ops).unwrap()).collect();
        for (i, p) in pdls.iter().enumerate() {
            for (j, q) in pdls.iter().enumerate() {
                for h in enumerate_homs(p, q, &b(), None).unwrap() {
                    assert!(h.is_homomorphism(&big[i], &big[j]));
                }
            }
        }
    }
}
