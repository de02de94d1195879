use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::{Deserialize, Serialize};

use super::finite::FiniteAlgebra;
use super::signature::Signature;
use crate::error::{Error, Result};

/// Terms refer to symbols by name so they survive reducts and expansions.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Term {
    Var(String),
    App(String, Vec<Term>),
}

pub(crate) const INFIX: [&str; 5] = ["*", "+", "/\\", "\\/", "=>"];
pub(crate) const PREFIX: [&str; 2] = ["~", "-"];

impl Term {
    pub fn var(name: &str) -> Term {
        Term::Var(name.to_string())
    }

    pub fn constant(name: &str) -> Term {
        Term::App(name.to_string(), Vec::new())
    }

    pub fn app(name: &str, args: Vec<Term>) -> Term {
        Term::App(name.to_string(), args)
    }

    pub fn bin(name: &str, a: Term, b: Term) -> Term {
        Term::App(name.to_string(), vec![a, b])
    }

    pub fn un(name: &str, a: Term) -> Term {
        Term::App(name.to_string(), vec![a])
    }

    pub fn size(&self) -> usize {
        match self {
            Term::Var(_) => 1,
            Term::App(_, args) => 1 + args.iter().map(Term::size).sum::<usize>(),
        }
    }

    pub fn depth(&self) -> usize {
        match self {
            Term::Var(_) => 0,
            Term::App(_, args) => 1 + args.iter().map(Term::depth).max().unwrap_or(0),
        }
    }

    pub fn vars(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        self.collect_vars(&mut out);
        out
    }

    pub(crate) fn collect_vars(&self, out: &mut BTreeSet<String>) {
        match self {
            Term::Var(v) => {
                out.insert(v.clone());
            }
            Term::App(_, args) => args.iter().for_each(|a| a.collect_vars(out)),
        }
    }

    pub fn symbols(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        fn go(t: &Term, out: &mut BTreeSet<String>) {
            if let Term::App(f, args) = t {
                out.insert(f.clone());
                args.iter().for_each(|a| go(a, out));
            }
        }
        go(self, &mut out);
        out
    }

    /// Simultaneous substitution of variables.
    pub fn substitute(&self, map: &BTreeMap<String, Term>) -> Term {
        match self {
            Term::Var(v) => map.get(v).cloned().unwrap_or_else(|| self.clone()),
            Term::App(f, args) => {
                Term::App(f.clone(), args.iter().map(|a| a.substitute(map)).collect())
            }
        }
    }

    /// Checks symbols and arities against a signature.
    pub fn check(&self, sig: &Signature) -> Result<()> {
        match self {
            Term::Var(_) => Ok(()),
            Term::App(f, args) => {
                let i = sig.index_of(f).ok_or_else(|| Error::UnknownSymbol(f.clone()))?;
                if sig.arity(i) != args.len() {
                    return Err(Error::Arity {
                        symbol: f.clone(),
                        expected: sig.arity(i),
                        found: args.len(),
                    });
                }
                args.iter().try_for_each(|a| a.check(sig))
            }
        }
    }

    fn is_infix(&self) -> bool {
        matches!(self, Term::App(f, a) if a.len() == 2 && INFIX.contains(&f.as_str()))
    }
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Term::Var(v) => write!(f, "{v}"),
            Term::App(s, args) if args.is_empty() => write!(f, "{s}"),
            Term::App(s, args) if args.len() == 2 && INFIX.contains(&s.as_str()) => {
                let side = |t: &Term, f: &mut fmt::Formatter<'_>| {
                    if t.is_infix() {
                        write!(f, "({t})")
                    } else {
                        write!(f, "{t}")
                    }
                };
                side(&args[0], f)?;
                write!(f, " {s} ")?;
                side(&args[1], f)
            }
            Term::App(s, args) if args.len() == 1 && PREFIX.contains(&s.as_str()) => {
                if args[0].is_infix() {
                    write!(f, "{s}({})", args[0])
                } else {
                    write!(f, "{s}{}", args[0])
                }
            }
            Term::App(s, args) => {
                write!(f, "{s}(")?;
                for (i, a) in args.iter().enumerate() {
                    if i > 0 {
                        write!(f, ", ")?;
                    }
                    write!(f, "{a}")?;
                }
                write!(f, ")")
            }
        }
    }
}

/// Evaluates `t` in `a` under `asg`.
pub fn eval_term(a: &FiniteAlgebra, t: &Term, asg: &BTreeMap<String, usize>) -> Result<usize> {
    match t {
        Term::Var(v) => {
            let x = *asg.get(v).ok_or_else(|| Error::UnboundVariable(v.clone()))?;
            if x >= a.size() {
                return Err(Error::Invalid(format!("value {x} of `{v}` is outside the universe")));
            }
            Ok(x)
        }
        Term::App(f, args) => {
            let s = a.symbol(f).ok_or_else(|| Error::UnknownSymbol(f.clone()))?;
            let k = a.signature().arity(s);
            if k != args.len() {
                return Err(Error::Arity {
                    symbol: f.clone(),
                    expected: k,
                    found: args.len(),
                });
            }
            let vals = args
                .iter()
                .map(|x| eval_term(a, x, asg))
                .collect::<Result<Vec<_>>>()?;
            Ok(a.op(s, &vals))
        }
    }
}

/// Term compiled against one signature, with variables replaced by slots.
#[derive(Clone, Debug)]
pub(crate) enum CTerm {
    Var(usize),
    App(usize, Vec<CTerm>),
}

impl CTerm {
    pub(crate) fn compile(
        t: &Term,
        sig: &Signature,
        slot: &mut impl FnMut(&str) -> usize,
    ) -> Result<CTerm> {
        match t {
            Term::Var(v) => Ok(CTerm::Var(slot(v))),
            Term::App(f, args) => {
                let s = sig.index_of(f).ok_or_else(|| Error::UnknownSymbol(f.clone()))?;
                if sig.arity(s) != args.len() {
                    return Err(Error::Arity {
                        symbol: f.clone(),
                        expected: sig.arity(s),
                        found: args.len(),
                    });
                }
                Ok(CTerm::App(
                    s,
                    args.iter()
                        .map(|a| CTerm::compile(a, sig, slot))
                        .collect::<Result<_>>()?,
                ))
            }
        }
    }

    #[inline]
    pub(crate) fn eval(&self, a: &FiniteAlgebra, env: &[usize]) -> usize {
        match self {
            CTerm::Var(i) => env[*i],
            CTerm::App(s, args) => match args.len() {
                0 => a.table(*s)[0],
                1 => a.table(*s)[args[0].eval(a, env)],
                2 => {
                    let n = a.size();
                    a.table(*s)[args[0].eval(a, env) * n + args[1].eval(a, env)]
                }
                _ => {
                    let vals: Vec<usize> = args.iter().map(|x| x.eval(a, env)).collect();
                    a.op(*s, &vals)
                }
            },
        }
    }

    pub(crate) fn slots(&self, out: &mut Vec<usize>) {
        match self {
            CTerm::Var(i) => {
                if !out.contains(i) {
                    out.push(*i)
                }
            }
            CTerm::App(_, args) => args.iter().for_each(|a| a.slots(out)),
        }
    }
}

/// The term function of `t` on `a` over the listed variables, as a table.
pub fn term_table(a: &FiniteAlgebra, t: &Term, vars: &[String]) -> Result<Vec<usize>> {
    let ct = CTerm::compile(t, a.signature(), &mut |v| {
        vars.iter().position(|x| x == v).unwrap_or(usize::MAX)
    })?;
    let mut used = Vec::new();
    ct.slots(&mut used);
    if used.contains(&usize::MAX) {
        let missing = t.vars().into_iter().find(|v| !vars.contains(v)).unwrap_or_default();
        return Err(Error::UnboundVariable(missing));
    }
    let n = a.size();
    let k = vars.len();
    let len = super::finite::table_len(n, k).ok_or_else(|| Error::Invalid("table too large".into()))?;
    let mut env = vec![0; k];
    let mut out = Vec::with_capacity(len);
    for idx in 0..len {
        super::finite::decode(n, k, idx, &mut env);
        out.push(ct.eval(a, &env));
    }
    Ok(out)
}
