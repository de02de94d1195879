use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::algebra::{Signature, Term};
use crate::error::{Error, Result};

/// First-order formulas over a signature. Negated equations are written
/// `Not(Eq(..))`; there is no separate inequality node.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Formula {
    Eq(Term, Term),
    True,
    False,
    And(Vec<Formula>),
    Or(Vec<Formula>),
    Implies(Box<Formula>, Box<Formula>),
    Not(Box<Formula>),
    Exists(Vec<String>, Box<Formula>),
}

impl Formula {
    pub fn eq(s: Term, t: Term) -> Formula {
        Formula::Eq(s, t)
    }

    /// Conjunction, flattening nested conjunctions; one conjunct stays bare.
    pub fn and(parts: Vec<Formula>) -> Formula {
        let mut out = Vec::new();
        for p in parts {
            match p {
                Formula::And(inner) => out.extend(inner),
                other => out.push(other),
            }
        }
        if out.len() == 1 {
            out.pop().unwrap()
        } else {
            Formula::And(out)
        }
    }

    pub fn or(parts: Vec<Formula>) -> Formula {
        let mut out = Vec::new();
        for p in parts {
            match p {
                Formula::Or(inner) => out.extend(inner),
                other => out.push(other),
            }
        }
        if out.len() == 1 {
            out.pop().unwrap()
        } else {
            Formula::Or(out)
        }
    }

    pub fn implies(a: Formula, b: Formula) -> Formula {
        Formula::Implies(Box::new(a), Box::new(b))
    }

    pub fn negate(a: Formula) -> Formula {
        Formula::Not(Box::new(a))
    }

    pub fn exists(vars: Vec<String>, body: Formula) -> Formula {
        if vars.is_empty() {
            body
        } else {
            Formula::Exists(vars, Box::new(body))
        }
    }

    pub fn free_vars(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        self.collect_free(&mut Vec::new(), &mut out);
        out
    }

    fn collect_free(&self, bound: &mut Vec<String>, out: &mut BTreeSet<String>) {
        match self {
            Formula::Eq(s, t) => {
                let mut vs = BTreeSet::new();
                s.collect_vars(&mut vs);
                t.collect_vars(&mut vs);
                out.extend(vs.into_iter().filter(|v| !bound.contains(v)));
            }
            Formula::True | Formula::False => {}
            Formula::And(fs) | Formula::Or(fs) => fs.iter().for_each(|f| f.collect_free(bound, out)),
            Formula::Implies(a, b) => {
                a.collect_free(bound, out);
                b.collect_free(bound, out);
            }
            Formula::Not(a) => a.collect_free(bound, out),
            Formula::Exists(vs, body) => {
                let n = bound.len();
                bound.extend(vs.iter().cloned());
                body.collect_free(bound, out);
                bound.truncate(n);
            }
        }
    }

    /// Every variable name, free or bound.
    pub fn all_vars(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        self.walk(&mut |f| match f {
            Formula::Eq(s, t) => {
                s.collect_vars(&mut out);
                t.collect_vars(&mut out);
            }
            Formula::Exists(vs, _) => out.extend(vs.iter().cloned()),
            _ => {}
        });
        out
    }

    pub fn walk(&self, visit: &mut dyn FnMut(&Formula)) {
        visit(self);
        match self {
            Formula::And(fs) | Formula::Or(fs) => fs.iter().for_each(|f| f.walk(visit)),
            Formula::Implies(a, b) => {
                a.walk(visit);
                b.walk(visit);
            }
            Formula::Not(a) | Formula::Exists(_, a) => a.walk(visit),
            _ => {}
        }
    }

    pub fn equations(&self) -> Vec<(Term, Term)> {
        let mut out = Vec::new();
        self.walk(&mut |f| {
            if let Formula::Eq(s, t) = f {
                out.push((s.clone(), t.clone()));
            }
        });
        out
    }

    pub fn symbols(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        for (s, t) in self.equations() {
            out.extend(s.symbols());
            out.extend(t.symbols());
        }
        out
    }

    pub fn check(&self, sig: &Signature) -> Result<()> {
        self.equations().iter().try_for_each(|(s, t)| {
            s.check(sig)?;
            t.check(sig)
        })
    }

    /// Renames bound variables so that they are pairwise distinct and
    /// distinct from the free variables. Names already unique are kept.
    pub fn rename_apart(&self) -> Formula {
        let mut used: BTreeSet<String> = self.free_vars();
        self.rename_inner(&BTreeMap::new(), &mut used)
    }

    fn rename_inner(&self, env: &BTreeMap<String, Term>, used: &mut BTreeSet<String>) -> Formula {
        match self {
            Formula::Eq(s, t) => Formula::Eq(s.substitute(env), t.substitute(env)),
            Formula::True => Formula::True,
            Formula::False => Formula::False,
            Formula::And(fs) => Formula::And(fs.iter().map(|f| f.rename_inner(env, used)).collect()),
            Formula::Or(fs) => Formula::Or(fs.iter().map(|f| f.rename_inner(env, used)).collect()),
            Formula::Implies(a, b) => Formula::implies(a.rename_inner(env, used), b.rename_inner(env, used)),
            Formula::Not(a) => Formula::negate(a.rename_inner(env, used)),
            Formula::Exists(vs, body) => {
                let mut env2 = env.clone();
                let mut names = Vec::new();
                for v in vs {
                    let fresh = fresh_name(v, used);
                    used.insert(fresh.clone());
                    if &fresh != v {
                        env2.insert(v.clone(), Term::Var(fresh.clone()));
                    } else {
                        env2.remove(v);
                    }
                    names.push(fresh);
                }
                Formula::Exists(names, Box::new(body.rename_inner(&env2, used)))
            }
        }
    }

    /// Substitutes terms for free variables, renaming bound variables that
    /// would capture.
    pub fn substitute(&self, map: &BTreeMap<String, Term>) -> Formula {
        let mut used: BTreeSet<String> = self.free_vars();
        for t in map.values() {
            used.extend(t.vars());
        }
        self.rename_inner(map, &mut used)
    }
}

pub(crate) fn fresh_name(base: &str, used: &BTreeSet<String>) -> String {
    if !used.contains(base) {
        return base.to_string();
    }
    (1..)
        .map(|i| format!("{base}_{i}"))
        .find(|n| !used.contains(n))
        .unwrap()
}

fn needs_parens_in_conj(f: &Formula) -> bool {
    matches!(f, Formula::Or(_) | Formula::Implies(..) | Formula::Exists(..))
        || matches!(f, Formula::And(v) if v.is_empty())
}

impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Formula::Eq(s, t) => write!(f, "{s} = {t}"),
            Formula::True => write!(f, "true"),
            Formula::False => write!(f, "false"),
            Formula::And(fs) if fs.is_empty() => write!(f, "true"),
            Formula::Or(fs) if fs.is_empty() => write!(f, "false"),
            Formula::And(fs) => {
                for (i, g) in fs.iter().enumerate() {
                    if i > 0 {
                        write!(f, " & ")?;
                    }
                    if needs_parens_in_conj(g) || matches!(g, Formula::And(_)) {
                        write!(f, "({g})")?;
                    } else {
                        write!(f, "{g}")?;
                    }
                }
                Ok(())
            }
            Formula::Or(fs) => {
                for (i, g) in fs.iter().enumerate() {
                    if i > 0 {
                        write!(f, " | ")?;
                    }
                    if matches!(g, Formula::Or(_) | Formula::Implies(..) | Formula::Exists(..)) {
                        write!(f, "({g})")?;
                    } else {
                        write!(f, "{g}")?;
                    }
                }
                Ok(())
            }
            Formula::Implies(a, b) => {
                if matches!(**a, Formula::Implies(..) | Formula::Exists(..)) {
                    write!(f, "({a})")?;
                } else {
                    write!(f, "{a}")?;
                }
                write!(f, " -> ")?;
                if matches!(**b, Formula::Exists(..)) {
                    write!(f, "({b})")
                } else {
                    write!(f, "{b}")
                }
            }
            Formula::Not(a) => match **a {
                Formula::Eq(..) | Formula::True | Formula::False | Formula::Not(_) => write!(f, "!{a}"),
                _ => write!(f, "!({a})"),
            },
            Formula::Exists(vs, body) => write!(f, "exists {}. {body}", vs.join(", ")),
        }
    }
}

/// A formula together with its designated input variables and output
/// variable: the description of an implicit operation.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ImplicitDef {
    pub formula: Formula,
    pub inputs: Vec<String>,
    pub output: String,
}

impl ImplicitDef {
    pub fn new(formula: Formula, inputs: &[&str], output: &str) -> Self {
        ImplicitDef {
            formula,
            inputs: inputs.iter().map(|s| s.to_string()).collect(),
            output: output.to_string(),
        }
    }

    pub fn arity(&self) -> usize {
        self.inputs.len()
    }

    /// Inputs must be nonempty and distinct, the output must not be an
    /// input, and every free variable must be declared.
    pub fn validate(&self) -> Result<()> {
        if self.inputs.is_empty() {
            return Err(Error::Invalid("an implicit operation needs at least one input".into()));
        }
        let mut seen = BTreeSet::new();
        for v in &self.inputs {
            if !seen.insert(v) {
                return Err(Error::Invalid(format!("input `{v}` listed twice")));
            }
        }
        if self.inputs.contains(&self.output) {
            return Err(Error::Invalid(format!("output `{}` is also an input", self.output)));
        }
        for v in self.formula.free_vars() {
            if v != self.output && !self.inputs.contains(&v) {
                return Err(Error::Invalid(format!(
                    "free variable `{v}` is neither an input nor the output"
                )));
            }
        }
        Ok(())
    }
}

impl fmt::Display for ImplicitDef {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}; {}] {}", self.inputs.join(", "), self.output, self.formula)
    }
}
