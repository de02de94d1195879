use std::fmt;

use serde::{Deserialize, Serialize};

use crate::algebra::Term;

use super::ast::Formula;

/// Syntactic classes, from most to least specific.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum FormulaClass {
    EqConjunction,
    Pp,
    ExistentialPositive,
    Universal,
    General,
}

impl fmt::Display for FormulaClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            FormulaClass::EqConjunction => "eq-conjunction",
            FormulaClass::Pp => "pp",
            FormulaClass::ExistentialPositive => "existential-positive",
            FormulaClass::Universal => "universal",
            FormulaClass::General => "general",
        })
    }
}

/// Cap on the number of pp disjuncts produced by distribution.
pub const DISJUNCT_CAP: usize = 256;

/// One pp formula in normal form: `exists bound. s1 = t1 & ... & sk = tk`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct PpForm {
    pub bound: Vec<String>,
    pub equations: Vec<(Term, Term)>,
}

impl PpForm {
    pub fn to_formula(&self) -> Formula {
        Formula::exists(
            self.bound.clone(),
            Formula::And(self.equations.iter().map(|(s, t)| Formula::Eq(s.clone(), t.clone())).collect()),
        )
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Classification {
    pub class: FormulaClass,
    pub note: Option<String>,
}

fn is_eq_conjunction(f: &Formula) -> bool {
    match f {
        Formula::Eq(..) | Formula::True => true,
        Formula::And(fs) => fs.iter().all(is_eq_conjunction),
        _ => false,
    }
}

fn is_pp(f: &Formula) -> bool {
    match f {
        Formula::Eq(..) | Formula::True => true,
        Formula::And(fs) => fs.iter().all(is_pp),
        Formula::Exists(_, b) => is_pp(b),
        _ => false,
    }
}

fn is_ep_syntax(f: &Formula) -> bool {
    match f {
        Formula::Eq(..) | Formula::True | Formula::False => true,
        Formula::And(fs) | Formula::Or(fs) => fs.iter().all(is_ep_syntax),
        Formula::Exists(_, b) => is_ep_syntax(b),
        _ => false,
    }
}

/// True when every existential quantifier sits under an odd number of
/// negations (counting antecedents of implications).
fn is_universal(f: &Formula, positive: bool) -> bool {
    match f {
        Formula::Eq(..) | Formula::True | Formula::False => true,
        Formula::And(fs) | Formula::Or(fs) => fs.iter().all(|g| is_universal(g, positive)),
        Formula::Implies(a, b) => is_universal(a, !positive) && is_universal(b, positive),
        Formula::Not(a) => is_universal(a, !positive),
        Formula::Exists(_, b) => !positive && is_universal(b, positive),
    }
}

fn dnf(f: &Formula, cap: usize) -> Option<Vec<PpForm>> {
    match f {
        Formula::Eq(s, t) => Some(vec![PpForm {
            bound: vec![],
            equations: vec![(s.clone(), t.clone())],
        }]),
        Formula::True => Some(vec![PpForm { bound: vec![], equations: vec![] }]),
        Formula::False => Some(vec![]),
        Formula::Or(fs) => {
            let mut out = Vec::new();
            for g in fs {
                out.extend(dnf(g, cap)?);
                if out.len() > cap {
                    return None;
                }
            }
            Some(out)
        }
        Formula::And(fs) => {
            let mut acc = vec![PpForm { bound: vec![], equations: vec![] }];
            for g in fs {
                let parts = dnf(g, cap)?;
                if acc.len().saturating_mul(parts.len()) > cap {
                    return None;
                }
                let mut next = Vec::new();
                for a in &acc {
                    for p in &parts {
                        let mut m = a.clone();
                        m.bound.extend(p.bound.iter().cloned());
                        m.equations.extend(p.equations.iter().cloned());
                        next.push(m);
                    }
                }
                acc = next;
            }
            Some(acc)
        }
        Formula::Exists(vs, b) => {
            let mut parts = dnf(b, cap)?;
            for p in &mut parts {
                let mut bound = vs.clone();
                bound.extend(p.bound.drain(..));
                p.bound = bound;
            }
            Some(parts)
        }
        _ => None,
    }
}

/// The pp disjuncts of an existential-positive formula, with bound
/// variables renamed apart; `None` if the formula is not existential
/// positive or distribution exceeds `cap`.
pub fn pp_disjuncts(f: &Formula, cap: usize) -> Option<Vec<PpForm>> {
    if !is_ep_syntax(f) {
        return None;
    }
    dnf(&f.rename_apart(), cap)
}

/// Most specific class, with a note when distribution hit the cap.
pub fn classify_with_note(f: &Formula) -> Classification {
    let plain = |class| Classification { class, note: None };
    if is_eq_conjunction(f) {
        return plain(FormulaClass::EqConjunction);
    }
    if is_pp(f) {
        return plain(FormulaClass::Pp);
    }
    if is_ep_syntax(f) {
        return match pp_disjuncts(f, DISJUNCT_CAP) {
            Some(_) => plain(FormulaClass::ExistentialPositive),
            None => Classification {
                class: FormulaClass::General,
                note: Some(format!(
                    "existential-positive, but distribution exceeds {DISJUNCT_CAP} pp disjuncts"
                )),
            },
        };
    }
    if is_universal(f, true) {
        return plain(FormulaClass::Universal);
    }
    plain(FormulaClass::General)
}

pub fn classify(f: &Formula) -> FormulaClass {
    classify_with_note(f).class
}
