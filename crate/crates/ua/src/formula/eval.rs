use std::collections::BTreeMap;
use std::ops::ControlFlow;

use crate::algebra::{CTerm, FiniteAlgebra, Term};
use crate::budget::Meter;
use crate::error::{Error, Result};

use super::ast::Formula;
use super::classify::PpForm;

enum CF {
    Eq(CTerm, CTerm),
    Const(bool),
    And(Vec<CF>),
    Or(Vec<CF>),
    Implies(Box<CF>, Box<CF>),
    Not(Box<CF>),
    Exists(Vec<usize>, Box<CF>),
}

/// A formula compiled against one algebra: variables become slots of an
/// environment vector. Free variables come first, in the given order.
pub(crate) struct Compiled {
    root: CF,
    slots: usize,
}

fn slot_of(names: &mut Vec<String>, v: &str) -> usize {
    match names.iter().position(|x| x == v) {
        Some(i) => i,
        None => {
            names.push(v.to_string());
            names.len() - 1
        }
    }
}

impl Compiled {
    pub(crate) fn new(a: &FiniteAlgebra, f: &Formula, free: &[String]) -> Result<Compiled> {
        let f = f.rename_apart();
        let mut names: Vec<String> = free.to_vec();
        for v in f.free_vars() {
            if !names.contains(&v) {
                return Err(Error::UnboundVariable(v));
            }
        }
        let root = Self::go(a, &f, &mut names)?;
        Ok(Compiled { root, slots: names.len() })
    }

    fn go(a: &FiniteAlgebra, f: &Formula, names: &mut Vec<String>) -> Result<CF> {
        let sig = a.signature();
        Ok(match f {
            Formula::Eq(s, t) => CF::Eq(
                CTerm::compile(s, sig, &mut |v| slot_of(names, v))?,
                CTerm::compile(t, sig, &mut |v| slot_of(names, v))?,
            ),
            Formula::True => CF::Const(true),
            Formula::False => CF::Const(false),
            Formula::And(fs) => CF::And(fs.iter().map(|g| Self::go(a, g, names)).collect::<Result<_>>()?),
            Formula::Or(fs) => CF::Or(fs.iter().map(|g| Self::go(a, g, names)).collect::<Result<_>>()?),
            Formula::Implies(x, y) => CF::Implies(Box::new(Self::go(a, x, names)?), Box::new(Self::go(a, y, names)?)),
            Formula::Not(x) => CF::Not(Box::new(Self::go(a, x, names)?)),
            Formula::Exists(vs, body) => {
                let slots = vs.iter().map(|v| slot_of(names, v)).collect();
                CF::Exists(slots, Box::new(Self::go(a, body, names)?))
            }
        })
    }

    pub(crate) fn env(&self) -> Vec<usize> {
        vec![0; self.slots]
    }

    pub(crate) fn eval(&self, a: &FiniteAlgebra, env: &mut [usize]) -> bool {
        Self::ev(&self.root, a, env)
    }

    fn ev(f: &CF, a: &FiniteAlgebra, env: &mut [usize]) -> bool {
        match f {
            CF::Eq(s, t) => s.eval(a, env) == t.eval(a, env),
            CF::Const(b) => *b,
            CF::And(fs) => fs.iter().all(|g| Self::ev(g, a, env)),
            CF::Or(fs) => fs.iter().any(|g| Self::ev(g, a, env)),
            CF::Implies(x, y) => !Self::ev(x, a, env) || Self::ev(y, a, env),
            CF::Not(x) => !Self::ev(x, a, env),
            CF::Exists(vs, body) => Self::exists(vs, 0, body, a, env),
        }
    }

    fn exists(vs: &[usize], i: usize, body: &CF, a: &FiniteAlgebra, env: &mut [usize]) -> bool {
        if i == vs.len() {
            return Self::ev(body, a, env);
        }
        for x in 0..a.size() {
            env[vs[i]] = x;
            if Self::exists(vs, i + 1, body, a, env) {
                return true;
            }
        }
        false
    }
}

/// Tarskian truth of `f` in `a` under `asg`; extra assignments are ignored.
pub fn eval_formula(a: &FiniteAlgebra, f: &Formula, asg: &BTreeMap<String, usize>) -> Result<bool> {
    let free: Vec<String> = f.free_vars().into_iter().collect();
    for v in &free {
        match asg.get(v) {
            None => return Err(Error::UnboundVariable(v.clone())),
            Some(&x) if x >= a.size() => {
                return Err(Error::Invalid(format!("value {x} of `{v}` is outside the universe")))
            }
            _ => {}
        }
    }
    let c = Compiled::new(a, f, &free)?;
    let mut env = c.env();
    for (i, v) in free.iter().enumerate() {
        env[i] = asg[v];
    }
    Ok(c.eval(a, &mut env))
}

enum Step {
    Branch(usize),
    Determined(usize, usize, bool),
}

/// Conjunction of equations over numbered variables, solved by backtracking
/// with forward propagation of equations of the form `v = t`.
pub(crate) struct PpSystem {
    pub(crate) names: Vec<String>,
    eqs: Vec<(CTerm, CTerm)>,
    eq_vars: Vec<Vec<usize>>,
}

impl PpSystem {
    /// Variables listed in `order` get the first slots; the rest follow in
    /// order of appearance.
    pub(crate) fn new(a: &FiniteAlgebra, eqs: &[(Term, Term)], order: &[String]) -> Result<PpSystem> {
        let mut names: Vec<String> = order.to_vec();
        let sig = a.signature();
        let mut ceqs = Vec::new();
        for (s, t) in eqs {
            ceqs.push((
                CTerm::compile(s, sig, &mut |v| slot_of(&mut names, v))?,
                CTerm::compile(t, sig, &mut |v| slot_of(&mut names, v))?,
            ));
        }
        let eq_vars = ceqs
            .iter()
            .map(|(s, t)| {
                let mut v = Vec::new();
                s.slots(&mut v);
                t.slots(&mut v);
                v
            })
            .collect();
        Ok(PpSystem { names, eqs: ceqs, eq_vars })
    }

    pub(crate) fn from_form(a: &FiniteAlgebra, p: &PpForm, order: &[String]) -> Result<PpSystem> {
        let mut sys = PpSystem::new(a, &p.equations, order)?;
        for b in &p.bound {
            slot_of(&mut sys.names, b);
        }
        Ok(sys)
    }

    fn plan(&self, fixed: &[bool]) -> (Vec<Step>, Vec<Vec<usize>>, Vec<usize>) {
        let n = self.names.len();
        let mut assigned = fixed.to_vec();
        assigned.resize(n, false);
        let mut steps = Vec::new();
        let mut checks: Vec<Vec<usize>> = Vec::new();
        let mut done = vec![false; self.eqs.len()];
        let ready = |e: usize, assigned: &[bool]| self.eq_vars[e].iter().all(|&v| assigned[v]);
        let mut initial = Vec::new();
        for e in 0..self.eqs.len() {
            if ready(e, &assigned) {
                done[e] = true;
                initial.push(e);
            }
        }
        while assigned.iter().any(|b| !b) {
            let mut pick = None;
            'find: for e in 0..self.eqs.len() {
                if done[e] {
                    continue;
                }
                let (s, t) = &self.eqs[e];
                for (side, this, other) in [(false, s, t), (true, t, s)] {
                    if let CTerm::Var(v) = this {
                        if !assigned[*v] {
                            let mut ov = Vec::new();
                            other.slots(&mut ov);
                            if ov.iter().all(|&x| assigned[x]) {
                                pick = Some(Step::Determined(*v, e, side));
                                break 'find;
                            }
                        }
                    }
                }
            }
            let step = pick.unwrap_or_else(|| Step::Branch(assigned.iter().position(|b| !b).unwrap()));
            let v = match step {
                Step::Branch(v) | Step::Determined(v, _, _) => v,
            };
            if let Step::Determined(_, e, _) = step {
                done[e] = true;
            }
            assigned[v] = true;
            let mut here = Vec::new();
            for e in 0..self.eqs.len() {
                if !done[e] && ready(e, &assigned) {
                    done[e] = true;
                    here.push(e);
                }
            }
            steps.push(step);
            checks.push(here);
        }
        (steps, checks, initial)
    }

    /// Calls `f` with every solution extending `fixed`. Each variable ranges
    /// over its domain (the whole universe when `None`).
    pub(crate) fn solve(
        &self,
        a: &FiniteAlgebra,
        fixed: &[Option<usize>],
        domains: &[Option<&[usize]>],
        meter: &Meter,
        f: &mut dyn FnMut(&[usize]) -> ControlFlow<()>,
    ) -> Result<bool> {
        let n = self.names.len();
        let mask: Vec<bool> = (0..n).map(|i| fixed.get(i).copied().flatten().is_some()).collect();
        let (steps, checks, initial) = self.plan(&mask);
        let mut env = vec![0; n];
        for i in 0..n {
            if let Some(Some(x)) = fixed.get(i) {
                env[i] = *x;
            }
        }
        if !initial.iter().all(|&e| self.eqs[e].0.eval(a, &env) == self.eqs[e].1.eval(a, &env)) {
            return Ok(true);
        }
        let all: Vec<usize> = (0..a.size()).collect();
        let dom = |v: usize| -> &[usize] { domains.get(v).copied().flatten().unwrap_or(&all) };
        let in_dom = |v: usize, x: usize| domains.get(v).copied().flatten().map_or(true, |d| d.contains(&x));
        let mut flow = ControlFlow::Continue(());
        self.rec(a, &steps, &checks, 0, &mut env, &dom, &in_dom, meter, f, &mut flow)?;
        Ok(flow.is_continue())
    }

    #[allow(clippy::too_many_arguments)]
    fn rec<'d>(
        &self,
        a: &FiniteAlgebra,
        steps: &[Step],
        checks: &[Vec<usize>],
        depth: usize,
        env: &mut Vec<usize>,
        dom: &dyn Fn(usize) -> &'d [usize],
        in_dom: &dyn Fn(usize, usize) -> bool,
        meter: &Meter,
        f: &mut dyn FnMut(&[usize]) -> ControlFlow<()>,
        flow: &mut ControlFlow<()>,
    ) -> Result<()> {
        if depth == steps.len() {
            *flow = f(env);
            return Ok(());
        }
        meter.tick(1)?;
        let ok = |env: &[usize]| {
            checks[depth]
                .iter()
                .all(|&e| self.eqs[e].0.eval(a, env) == self.eqs[e].1.eval(a, env))
        };
        match steps[depth] {
            Step::Determined(v, e, side) => {
                let other = if side { &self.eqs[e].0 } else { &self.eqs[e].1 };
                let x = other.eval(a, env);
                if !in_dom(v, x) {
                    return Ok(());
                }
                env[v] = x;
                if ok(env) {
                    self.rec(a, steps, checks, depth + 1, env, dom, in_dom, meter, f, flow)?;
                }
            }
            Step::Branch(v) => {
                for &x in dom(v) {
                    env[v] = x;
                    if ok(env) {
                        self.rec(a, steps, checks, depth + 1, env, dom, in_dom, meter, f, flow)?;
                        if flow.is_break() {
                            return Ok(());
                        }
                    }
                }
            }
        }
        Ok(())
    }
}
