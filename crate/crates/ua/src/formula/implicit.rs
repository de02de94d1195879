use std::collections::{BTreeMap, BTreeSet};
use std::ops::ControlFlow;
use std::sync::Arc;

use serde::ser::{SerializeStruct, Serializer};
use serde::Serialize;

use crate::algebra::{embeddings_metered, odometer, product, FiniteAlgebra, Term};
use crate::budget::{Meter, SearchBudget, Verdict};
use crate::classops::{rsi_members, ClassSpec};
use crate::error::{Error, Result};

use super::ast::{Formula, ImplicitDef};
use super::classify::{classify, pp_disjuncts, FormulaClass, PpForm, DISJUNCT_CAP};
use super::eval::{Compiled, PpSystem};

/// A partial n-ary operation on the universe of a finite algebra.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PartialFunctionTable {
    arity: usize,
    carrier: Arc<FiniteAlgebra>,
    entries: BTreeMap<Vec<usize>, usize>,
}

impl PartialFunctionTable {
    pub fn new(carrier: Arc<FiniteAlgebra>, arity: usize, entries: BTreeMap<Vec<usize>, usize>) -> Result<Self> {
        let n = carrier.size();
        for (args, &v) in &entries {
            if args.len() != arity || args.iter().any(|&a| a >= n) || v >= n {
                return Err(Error::Invalid(format!("entry {args:?} -> {v} does not fit an arity-{arity} table on {n} elements")));
            }
        }
        Ok(PartialFunctionTable { arity, carrier, entries })
    }

    /// The total identity operation.
    pub fn identity(carrier: Arc<FiniteAlgebra>) -> Self {
        let entries = (0..carrier.size()).map(|a| (vec![a], a)).collect();
        PartialFunctionTable { arity: 1, carrier, entries }
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn carrier(&self) -> &FiniteAlgebra {
        &self.carrier
    }

    pub fn get(&self, args: &[usize]) -> Option<usize> {
        self.entries.get(args).copied()
    }

    pub fn entries(&self) -> &BTreeMap<Vec<usize>, usize> {
        &self.entries
    }

    pub fn domain(&self) -> impl Iterator<Item = &Vec<usize>> {
        self.entries.keys()
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn is_total(&self) -> bool {
        Some(self.entries.len()) == crate::algebra::table_len(self.carrier.size(), self.arity)
    }

    /// First tuple (in lexicographic order) outside the domain.
    pub fn missing(&self) -> Option<Vec<usize>> {
        let mut t = vec![0; self.arity];
        loop {
            if !self.entries.contains_key(&t) {
                return Some(t);
            }
            if !odometer(&mut t, self.carrier.size()) {
                return None;
            }
        }
    }

    /// Row-major table when total.
    pub fn to_table(&self) -> Option<Vec<usize>> {
        self.is_total().then(|| self.entries.values().copied().collect())
    }
}

impl Serialize for PartialFunctionTable {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let pairs: Vec<(&Vec<usize>, usize)> = self.entries.iter().map(|(k, &v)| (k, v)).collect();
        let mut st = s.serialize_struct("PartialFunctionTable", 4)?;
        st.serialize_field("carrier", self.carrier.name())?;
        st.serialize_field("arity", &self.arity)?;
        st.serialize_field("total", &self.is_total())?;
        st.serialize_field("entries", &pairs)?;
        st.end()
    }
}

/// The formula with bound variables renamed away from every declared variable.
fn prepared(def: &ImplicitDef) -> Formula {
    let map: BTreeMap<String, Term> = def
        .inputs
        .iter()
        .chain(std::iter::once(&def.output))
        .map(|v| (v.clone(), Term::Var(v.clone())))
        .collect();
    def.formula.substitute(&map)
}

fn order(def: &ImplicitDef) -> Vec<String> {
    let mut v = def.inputs.clone();
    v.push(def.output.clone());
    v
}

/// Graph of one pp disjunct: input tuple -> set of outputs.
fn disjunct_graph(a: &FiniteAlgebra, def: &ImplicitDef, form: &PpForm, meter: &Meter) -> Result<BTreeMap<Vec<usize>, BTreeSet<usize>>> {
    let n = def.arity();
    let sys = PpSystem::from_form(a, form, &order(def))?;
    let mut graph: BTreeMap<Vec<usize>, BTreeSet<usize>> = BTreeMap::new();
    sys.solve(a, &[], &[], meter, &mut |env| {
        graph.entry(env[..n].to_vec()).or_default().insert(env[n]);
        ControlFlow::Continue(())
    })?;
    Ok(graph)
}

/// The relation defined by the formula on `a`: input tuple -> outputs.
pub fn implicit_relation(a: &FiniteAlgebra, def: &ImplicitDef, meter: &Meter) -> Result<BTreeMap<Vec<usize>, BTreeSet<usize>>> {
    def.validate()?;
    def.formula.check(a.signature())?;
    let f = prepared(def);
    if classify(&f) <= FormulaClass::ExistentialPositive {
        if let Some(forms) = pp_disjuncts(&f, DISJUNCT_CAP) {
            let mut rel: BTreeMap<Vec<usize>, BTreeSet<usize>> = BTreeMap::new();
            for form in &forms {
                for (k, ys) in disjunct_graph(a, def, form, meter)? {
                    rel.entry(k).or_default().extend(ys);
                }
            }
            return Ok(rel);
        }
    }
    let c = Compiled::new(a, &f, &order(def))?;
    let n = def.arity();
    let mut env = c.env();
    let mut rel: BTreeMap<Vec<usize>, BTreeSet<usize>> = BTreeMap::new();
    let mut t = vec![0; n + 1];
    loop {
        meter.tick(1)?;
        env[..=n].copy_from_slice(&t);
        if c.eval(a, &mut env) {
            rel.entry(t[..n].to_vec()).or_default().insert(t[n]);
        }
        if !odometer(&mut t, a.size()) {
            break;
        }
    }
    Ok(rel)
}

/// The partial operation induced on `a`; fails when some input tuple has
/// two outputs.
pub fn implicit_table(a: &FiniteAlgebra, def: &ImplicitDef) -> Result<PartialFunctionTable> {
    implicit_table_metered(a, def, &SearchBudget::default().meter())
}

pub(crate) fn implicit_table_metered(a: &FiniteAlgebra, def: &ImplicitDef, meter: &Meter) -> Result<PartialFunctionTable> {
    let rel = implicit_relation(a, def, meter)?;
    let mut entries = BTreeMap::new();
    for (k, ys) in rel {
        if ys.len() > 1 {
            let ys: Vec<usize> = ys.into_iter().take(2).collect();
            return Err(Error::NotFunctional(format!(
                "in `{}` the inputs {k:?} have outputs {} and {}",
                a.name(),
                ys[0],
                ys[1]
            )));
        }
        entries.insert(k, *ys.iter().next().unwrap());
    }
    PartialFunctionTable::new(Arc::new(a.clone()), def.arity(), entries)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FunctionalProof {
    pub disjuncts: usize,
    /// Domain size of the induced operation on each generator.
    pub domain_sizes: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct NonFunctional {
    pub generator: usize,
    pub generator_name: String,
    pub inputs: Vec<usize>,
    pub outputs: (usize, usize),
    /// Indices of the pp disjuncts producing the two outputs.
    pub disjuncts: (usize, usize),
}

/// Functionality throughout Q(K): every cross-pair quasiequation between pp
/// disjuncts is checked in every generator.
pub fn check_functional(k: &ClassSpec, def: &ImplicitDef, budget: &SearchBudget) -> Result<Verdict<FunctionalProof, NonFunctional>> {
    def.validate()?;
    def.formula.check(k.signature())?;
    let f = prepared(def);
    let class = classify(&f);
    let forms = match pp_disjuncts(&f, DISJUNCT_CAP) {
        Some(fs) if class <= FormulaClass::ExistentialPositive => fs,
        _ => {
            return Err(Error::FormulaClass { expected: "existential-positive".into(), found: class.to_string() });
        }
    };
    let meter = budget.meter();
    Verdict::from_result((|| {
        let mut sizes = Vec::new();
        for (gi, g) in k.generators().enumerate() {
            let graphs = forms
                .iter()
                .map(|form| disjunct_graph(g, def, form, &meter))
                .collect::<Result<Vec<_>>>()?;
            let mut dom = BTreeSet::new();
            for (i, gi_graph) in graphs.iter().enumerate() {
                for (j, gj_graph) in graphs.iter().enumerate().skip(i) {
                    for (x, ys) in gi_graph {
                        dom.insert(x.clone());
                        let Some(ys2) = gj_graph.get(x) else { continue };
                        let y = *ys.iter().next().unwrap();
                        let other = ys.iter().chain(ys2.iter()).find(|&&v| v != y);
                        if let Some(&y2) = other {
                            let from_j = !ys.contains(&y2);
                            return Ok(Verdict::Refuted(NonFunctional {
                                generator: gi,
                                generator_name: g.name().to_string(),
                                inputs: x.clone(),
                                outputs: (y, y2),
                                disjuncts: (i, if from_j { j } else { i }),
                            }));
                        }
                    }
                }
            }
            sizes.push(dom.len());
        }
        Ok(Verdict::Proven(FunctionalProof { disjuncts: forms.len(), domain_sizes: sizes }))
    })())
}

/// Composition g(f1, .., fm): defined where every fi is defined and g is
/// defined at the resulting values.
pub fn compose_tables(g: &PartialFunctionTable, fs: &[PartialFunctionTable]) -> Result<PartialFunctionTable> {
    if fs.len() != g.arity {
        return Err(Error::Arity { symbol: "g".into(), expected: g.arity, found: fs.len() });
    }
    let n = fs.first().map_or(0, |f| f.arity);
    for f in fs {
        if f.arity != n {
            return Err(Error::Arity { symbol: "f".into(), expected: n, found: f.arity });
        }
        if f.carrier != g.carrier {
            return Err(Error::Invalid("tables live on different algebras".into()));
        }
    }
    let mut entries = BTreeMap::new();
    if fs.is_empty() {
        if let Some(&v) = g.entries.get(&Vec::new()) {
            crate::algebra::for_each_tuple(g.carrier.size(), 0, |t| {
                entries.insert(t.to_vec(), v);
            });
        }
        return PartialFunctionTable::new(g.carrier.clone(), 0, entries);
    }
    'outer: for x in fs[0].entries.keys() {
        let mut vals = Vec::with_capacity(fs.len());
        for f in fs {
            match f.get(x) {
                Some(v) => vals.push(v),
                None => continue 'outer,
            }
        }
        if let Some(v) = g.get(&vals) {
            entries.insert(x.clone(), v);
        }
    }
    PartialFunctionTable::new(g.carrier.clone(), n, entries)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Extendable {
    /// For each relatively subdirectly irreducible member: its name and the
    /// algebras whose embeddings cover its tuples.
    pub members: Vec<(String, Vec<String>)>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct NonExtendable {
    pub member: String,
    pub inputs: Vec<usize>,
    pub stratum: String,
}

/// For every RSI member A of Q(K) and every tuple over A, looks for an
/// extension A ≤ B inside a product of at most `max_width` generators where
/// the operation is defined at the tuple. Refuted is relative to that stratum.
pub fn check_extendable(
    k: &ClassSpec,
    def: &ImplicitDef,
    budget: &SearchBudget,
    max_width: usize,
) -> Result<Verdict<Extendable, NonExtendable>> {
    def.validate()?;
    let class = classify(&def.formula);
    if class > FormulaClass::Pp {
        return Err(Error::FormulaClass { expected: "pp".into(), found: class.to_string() });
    }
    let meter = budget.meter();
    Verdict::from_result((|| {
        let members = rsi_members(k, budget)?;
        let mut report = Vec::new();
        let mut products: Option<Vec<(FiniteAlgebra, PartialFunctionTable)>> = None;
        for a in &members {
            let own = implicit_table_metered(a, def, &meter)?;
            if own.is_total() {
                report.push((a.name().to_string(), vec![a.name().to_string()]));
                continue;
            }
            if products.is_none() {
                products = Some(stratum(k, def, max_width, &meter)?);
            }
            let mut covered: BTreeSet<Vec<usize>> = own.domain().cloned().collect();
            let mut used = vec![a.name().to_string()];
            for (p, table) in products.as_ref().unwrap() {
                let before = covered.len();
                for e in embeddings_metered(a, p, &meter)? {
                    for x in crate::algebra::tuples(a.size(), def.arity()) {
                        if covered.contains(&x) {
                            continue;
                        }
                        let ex: Vec<usize> = x.iter().map(|&v| e.apply(v)).collect();
                        if table.get(&ex).is_some() {
                            covered.insert(x);
                        }
                    }
                }
                if covered.len() > before {
                    used.push(p.name().to_string());
                }
            }
            if let Some(x) = crate::algebra::tuples(a.size(), def.arity()).find(|x| !covered.contains(x)) {
                return Ok(Verdict::Refuted(NonExtendable {
                    member: a.name().to_string(),
                    inputs: x,
                    stratum: format!("products of at most {max_width} generators of {k}"),
                }));
            }
            report.push((a.name().to_string(), used));
        }
        Ok(Verdict::Proven(Extendable { members: report }))
    })())
}

fn stratum(k: &ClassSpec, def: &ImplicitDef, max_width: usize, meter: &Meter) -> Result<Vec<(FiniteAlgebra, PartialFunctionTable)>> {
    let mut out = Vec::new();
    let n = k.generator_count();
    for w in 1..=max_width {
        // multisets of generator indices of size w
        let mut idx = vec![0usize; w];
        loop {
            if idx.windows(2).all(|p| p[0] <= p[1]) {
                let factors: Vec<&FiniteAlgebra> = idx.iter().map(|&i| k.generator(i)).collect();
                let size = factors.iter().try_fold(1usize, |acc, f| acc.checked_mul(f.size()));
                if size.is_some_and(|s| s <= meter.budget().max_elements) {
                    let (p, _) = product(k.signature(), &factors)?;
                    let table = implicit_table_metered(&p, def, meter)?;
                    out.push((p, table));
                }
            }
            if !odometer(&mut idx, n) {
                break;
            }
        }
    }
    Ok(out)
}
