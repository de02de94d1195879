//! The `ua` command line: argument parsing, dispatch, reports and caching.
//!
//! Exit codes: 0 proven or success, 1 refuted, 2 unknown (budget), 3 usage
//! error, 4 input error.

mod input;
mod report;

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};
use std::time::{Duration, Instant};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::{json, Value};

use crate::algebra::{to_raw, FiniteAlgebra};
use crate::budget::{SearchBudget, Verdict};
use crate::classops::{membership, ClassOp, ClassSpec};
use crate::congruence::{check_congruence_equation, con, con_k, is_rfsi, monolith, CongruenceEquation};
use crate::dominion::{check_ses, dominion, zigzag_membership, SesStrategy};
use crate::error::{Error, Result};
use crate::expansion::{beth_primal_witness, check_interpolation, expand_class, ExpansionSpec};
use crate::formula::{check_extendable, check_functional, classify_with_note, eval_formula, implicit_table, parse_term};
use crate::gallery::{make_algebra, make_formula, ALGEBRA_IDS, FORMULA_IDS};
use crate::repro::{self, REPRO_IDS};
use crate::termcond::{is_primal_via, search_eq_interpolant, search_interpolant_term, term_condition_search_class, PrimalRoute, TermCondition};

pub use input::{elements, Inputs};
pub use report::{BudgetEcho, Cache, Report};

pub const EXIT_USAGE: i32 = 3;
pub const EXIT_INPUT: i32 = 4;

#[derive(Parser, Debug)]
#[command(name = "ua", version, about = "Implicit operations, dominions and term conditions over finite algebras")]
struct Cli {
    #[command(flatten)]
    global: Global,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug)]
struct Global {
    /// Output format on stdout.
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,
    /// Search limits, e.g. `elements=100000,steps=1e9,seconds=60`.
    #[arg(long, global = true)]
    budget: Option<String>,
    /// Seed for sampled checks.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Worker threads (default: all cores).
    #[arg(long, global = true)]
    jobs: Option<usize>,
    /// Also write the JSON report to this file.
    #[arg(long, global = true)]
    report: Option<PathBuf>,
    /// Directory of cached reports.
    #[arg(long, global = true)]
    cache: Option<PathBuf>,
    /// Include wall time in the report.
    #[arg(long, global = true)]
    timing: bool,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Format {
    Json,
    Text,
}

#[derive(Clone, Copy, Debug, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
enum OpArg {
    Q,
    U,
    V,
}

impl From<OpArg> for ClassOp {
    fn from(o: OpArg) -> ClassOp {
        match o {
            OpArg::Q => ClassOp::Q,
            OpArg::U => ClassOp::U,
            OpArg::V => ClassOp::V,
        }
    }
}

#[derive(Args, Debug, Serialize)]
struct ClassArgs {
    /// A generator (`gallery:<id>` or a JSON file); repeat for several.
    #[arg(long = "class", required = true)]
    class: Vec<String>,
    /// Closure operator applied to the generators.
    #[arg(long, value_enum, default_value_t = OpArg::Q)]
    op: OpArg,
}

#[derive(Args, Debug, Serialize)]
struct OptClassArgs {
    /// Work relative to the class generated by these algebras.
    #[arg(long = "class")]
    class: Vec<String>,
    #[arg(long, value_enum, default_value_t = OpArg::Q)]
    op: OpArg,
}

#[derive(Args, Debug, Serialize)]
struct FormulaArgs {
    /// `gallery:<id>`, a file, or formula text.
    #[arg(long)]
    formula: String,
    /// Input variables, comma separated.
    #[arg(long, value_delimiter = ',')]
    inputs: Vec<String>,
    /// Output variable.
    #[arg(long)]
    out: Option<String>,
}

#[derive(Clone, Copy, Debug, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
enum RouteArg {
    Auto,
    UnaryClone,
    BinaryClone,
    Majority,
    Reference,
}

#[derive(Clone, Copy, Debug, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
enum SesArg {
    Auto,
    Unanimity,
    Stratum,
}

#[derive(Subcommand, Debug, Serialize)]
#[serde(rename_all = "kebab-case")]
enum Command {
    /// Load an algebra, and optionally parse a formula in its signature.
    Validate {
        algebra: String,
        #[arg(long)]
        formula: Option<String>,
    },
    /// Evaluate a formula in an algebra. Variables not fixed by --assign
    /// range over all elements; the verdict is whether it always holds.
    Eval {
        #[arg(long)]
        algebra: String,
        #[arg(long)]
        formula: String,
        /// `x=0,y=2`
        #[arg(long, default_value = "")]
        assign: String,
    },
    /// Is the formula functional in the class?
    Functional {
        #[command(flatten)]
        class: ClassArgs,
        #[command(flatten)]
        formula: FormulaArgs,
    },
    /// Tabulate the operation a formula defines on an algebra.
    ImplicitTable {
        #[arg(long)]
        algebra: String,
        #[command(flatten)]
        formula: FormulaArgs,
        /// Also check extendability within products of at most this many
        /// generators of Q(algebra).
        #[arg(long)]
        extendable: Option<usize>,
    },
    /// The congruence lattice, optionally relative to a class.
    Conlat {
        algebra: String,
        #[command(flatten)]
        class: OptClassArgs,
        /// A congruence equation to test, e.g. `x o y = y o x`.
        #[arg(long)]
        equation: Option<String>,
        #[arg(long, default_value_t = 1_000_000)]
        tuple_cap: usize,
    },
    /// Relative finite subdirect irreducibility.
    Rfsi {
        algebra: String,
        #[command(flatten)]
        class: OptClassArgs,
    },
    /// Is the algebra in the class?
    Membership {
        #[command(flatten)]
        class: ClassArgs,
        #[arg(long)]
        algebra: String,
    },
    /// The dominion of a subuniverse.
    Dominion {
        #[command(flatten)]
        class: ClassArgs,
        #[arg(long)]
        big: String,
        /// Subuniverse elements, comma separated.
        #[arg(long)]
        sub: String,
        /// Refute (exit 1) when the dominion is larger than the subuniverse.
        #[arg(long)]
        expect_closed: bool,
    },
    /// The strong epimorphism surjectivity property.
    Ses {
        #[command(flatten)]
        class: ClassArgs,
        #[arg(long, value_enum, default_value_t = SesArg::Auto)]
        strategy: SesArg,
        #[arg(long, default_value = "majority")]
        term: String,
        #[arg(long, default_value_t = 2)]
        max_width: usize,
        #[arg(long, default_value_t = 64)]
        max_size: usize,
    },
    /// Search for a term satisfying a Mal'cev condition.
    TermSearch {
        #[command(flatten)]
        class: ClassArgs,
        /// majority, malcev, pixley, discriminator or nu(n).
        #[arg(long)]
        condition: String,
    },
    /// Primality.
    Primal {
        algebra: String,
        #[arg(long, value_enum, default_value_t = RouteArg::Auto)]
        route: RouteArg,
    },
    /// Check given interpolating terms, or search for one.
    Interpolate {
        #[command(flatten)]
        class: ClassArgs,
        #[command(flatten)]
        formula: FormulaArgs,
        /// A candidate term; repeat for several.
        #[arg(long)]
        term: Vec<String>,
        /// Without --term, search conjunctions of at most this many
        /// equations instead of a single term.
        #[arg(long)]
        eq_max: Option<usize>,
    },
    /// Expand the class by implicitly defined operations.
    Expand {
        #[command(flatten)]
        class: ClassArgs,
        /// `SYM=FORMULA`; repeat for several.
        #[arg(long = "define", required = true)]
        define: Vec<String>,
        #[arg(long)]
        allow_nontotal: bool,
        /// Directory receiving the expanded generators and the axioms.
        #[arg(long)]
        emit: Option<PathBuf>,
    },
    /// Primality of an expansion.
    BethWitness {
        #[arg(long)]
        algebra: String,
        #[arg(long = "define", required = true)]
        define: Vec<String>,
    },
    /// Monoid dominion membership through zigzags.
    Zigzag {
        #[arg(long)]
        algebra: String,
        #[arg(long)]
        sub: String,
        #[arg(long)]
        element: usize,
        #[arg(long, default_value_t = 3)]
        max_length: usize,
        #[arg(long, default_value_t = 4)]
        codomain_bound: usize,
    },
    /// List gallery ids, or print one.
    Gallery { id: Option<String> },
    /// Run a reproduction script.
    Repro {
        id: Option<String>,
        #[arg(long)]
        list: bool,
    },
}

impl Command {
    fn name(&self) -> &'static str {
        match self {
            Command::Validate { .. } => "validate",
            Command::Eval { .. } => "eval",
            Command::Functional { .. } => "functional",
            Command::ImplicitTable { .. } => "implicit-table",
            Command::Conlat { .. } => "conlat",
            Command::Rfsi { .. } => "rfsi",
            Command::Membership { .. } => "membership",
            Command::Dominion { .. } => "dominion",
            Command::Ses { .. } => "ses",
            Command::TermSearch { .. } => "term-search",
            Command::Primal { .. } => "primal",
            Command::Interpolate { .. } => "interpolate",
            Command::Expand { .. } => "expand",
            Command::BethWitness { .. } => "beth-witness",
            Command::Zigzag { .. } => "zigzag",
            Command::Gallery { .. } => "gallery",
            Command::Repro { .. } => "repro",
        }
    }
}

/// A verdict label with its JSON payload.
struct Outcome {
    verdict: String,
    result: Value,
}

impl Outcome {
    fn ok(result: Value) -> Outcome {
        Outcome { verdict: "ok".into(), result }
    }

    fn of<P: Serialize, R: Serialize>(v: Verdict<P, R>) -> Result<Outcome> {
        let verdict = v.label().to_string();
        let result = match v {
            Verdict::Proven(p) => json!({ "proof": p }),
            Verdict::Refuted(r) => json!({ "counterexample": r }),
            Verdict::Unknown(m) => json!({ "reason": m }),
        };
        Ok(Outcome { verdict, result })
    }

    fn with(mut self, key: &str, v: Value) -> Outcome {
        if let Value::Object(m) = &mut self.result {
            m.insert(key.to_string(), v);
        }
        self
    }
}

fn exit_code(verdict: &str) -> i32 {
    match verdict {
        "refuted" => 1,
        "unknown" => 2,
        _ => 0,
    }
}

/// Per-invocation state: inputs read so far and the cache lookup.
struct Ctx {
    inputs: Inputs,
    budget: SearchBudget,
    seed: u64,
    command: &'static str,
    args: Value,
    cache: Option<Cache>,
    digest: Option<String>,
}

impl Ctx {
    fn echo(&self) -> BudgetEcho {
        BudgetEcho {
            elements: self.budget.max_elements,
            steps: self.budget.max_steps,
            seconds: self.budget.wall_time.as_secs(),
        }
    }

    /// Runs `f` unless the cache already holds the answer for the inputs
    /// read so far.
    fn run(&mut self, f: impl FnOnce(&SearchBudget) -> Result<Outcome>) -> Result<Outcome> {
        let digest = std::mem::take(&mut self.inputs).digest();
        self.digest = Some(digest.clone());
        let key = Cache::key(self.command, &self.args, &digest, &self.echo(), self.seed);
        if let Some(hit) = self.cache.as_ref().and_then(|c| c.get(&key)) {
            return Ok(Outcome { verdict: hit.verdict, result: hit.result });
        }
        let out = match f(&self.budget) {
            Err(Error::Budget(m)) => Outcome { verdict: "unknown".into(), result: json!({ "reason": m }) },
            r => r?,
        };
        if let Some(c) = &self.cache {
            c.put(&key, &self.report(&out, None))?;
        }
        Ok(out)
    }

    fn report(&self, out: &Outcome, wall_ms: Option<u64>) -> Report {
        Report {
            command: self.command.to_string(),
            args: self.args.clone(),
            inputs_digest: self.digest.clone().unwrap_or_default(),
            budget: self.echo(),
            seed: self.seed,
            verdict: out.verdict.clone(),
            exit_code: exit_code(&out.verdict),
            result: out.result.clone(),
            wall_ms,
        }
    }
}

/// Parses `elements=..,steps=..,seconds=..`; missing keys keep their defaults.
pub fn parse_budget(text: &str) -> Result<SearchBudget> {
    let mut b = SearchBudget::default();
    for part in text.split(',').map(str::trim).filter(|s| !s.is_empty()) {
        let (k, v) = part
            .split_once('=')
            .ok_or_else(|| Error::Invalid(format!("budget entry `{part}` is not key=value")))?;
        let n: f64 = v
            .trim()
            .parse()
            .map_err(|_| Error::Invalid(format!("budget value `{v}` is not a number")))?;
        if !(n > 0.0) {
            return Err(Error::Invalid("budget limits must be positive".into()));
        }
        match k.trim() {
            "elements" => b.max_elements = n as usize,
            "steps" => b.max_steps = n as u64,
            "seconds" => b.wall_time = Duration::from_secs_f64(n),
            other => return Err(Error::Invalid(format!("unknown budget key `{other}`"))),
        }
    }
    Ok(b)
}

fn class_of(inputs: &mut Inputs, c: &ClassArgs) -> Result<ClassSpec> {
    inputs.class(&c.class, c.op.into())
}

fn opt_class(inputs: &mut Inputs, c: &OptClassArgs) -> Result<Option<ClassSpec>> {
    if c.class.is_empty() {
        Ok(None)
    } else {
        inputs.class(&c.class, c.op.into()).map(Some)
    }
}

fn algebra_json(a: &FiniteAlgebra) -> Value {
    serde_json::to_value(to_raw(a)).expect("algebras serialize")
}

fn blocks(c: &crate::congruence::Congruence) -> Value {
    json!(c.block_sets())
}

fn dispatch(cmd: &Command, ctx: &mut Ctx) -> Result<Outcome> {
    match cmd {
        Command::Validate { algebra, formula } => {
            let a = ctx.inputs.algebra(algebra)?;
            let f = formula
                .as_ref()
                .map(|f| -> Result<_> {
                    let def = ctx.inputs.formula(f, a.signature(), &[], None)?;
                    Ok(def)
                })
                .transpose()?;
            ctx.run(|_| {
                let mut r = json!({
                    "name": a.name(),
                    "size": a.size(),
                    "signature": a.signature().describe(),
                });
                if let Some(def) = f {
                    let c = classify_with_note(&def.formula);
                    r["formula"] = json!({ "text": def.to_string(), "class": c.class.to_string(), "note": c.note });
                }
                Ok(Outcome::ok(r))
            })
        }
        Command::Eval { algebra, formula, assign } => {
            let a = ctx.inputs.algebra(algebra)?;
            let text = if Path::new(formula).is_file() {
                std::fs::read_to_string(formula)?
            } else {
                formula.clone()
            };
            ctx.inputs.note("formula", &text);
            let f = crate::formula::parse(&text, a.signature())?;
            let mut fixed = BTreeMap::new();
            for part in assign.split(',').map(str::trim).filter(|s| !s.is_empty()) {
                let (v, x) = part
                    .split_once('=')
                    .ok_or_else(|| Error::Invalid(format!("assignment `{part}` is not var=element")))?;
                let x: usize = x.trim().parse().map_err(|_| Error::Invalid(format!("`{x}` is not an element")))?;
                if x >= a.size() {
                    return Err(Error::Invalid(format!("element {x} is outside `{}`", a.name())));
                }
                fixed.insert(v.trim().to_string(), x);
            }
            ctx.run(|budget| {
                let meter = budget.meter();
                let free: Vec<String> = f.free_vars().into_iter().filter(|v| !fixed.contains_key(v)).collect();
                let mut vals = vec![0usize; free.len()];
                let (mut total, mut sat) = (0u64, 0u64);
                let mut failure = None;
                loop {
                    meter.tick(1)?;
                    let mut asg = fixed.clone();
                    asg.extend(free.iter().cloned().zip(vals.iter().copied()));
                    total += 1;
                    if eval_formula(&a, &f, &asg)? {
                        sat += 1;
                    } else if failure.is_none() {
                        failure = Some(asg);
                    }
                    if free.is_empty() || !crate::algebra::odometer(&mut vals, a.size()) {
                        break;
                    }
                }
                let out = Outcome {
                    verdict: if failure.is_none() { "proven" } else { "refuted" }.into(),
                    result: json!({ "assignments": total, "satisfied": sat, "failure": failure }),
                };
                Ok(out)
            })
        }
        Command::Functional { class, formula } => {
            let k = class_of(&mut ctx.inputs, class)?;
            let def = ctx.inputs.formula(&formula.formula, k.signature(), &formula.inputs, formula.out.as_deref())?;
            ctx.run(|b| Outcome::of(check_functional(&k, &def, b)?))
        }
        Command::ImplicitTable { algebra, formula, extendable } => {
            let a = ctx.inputs.algebra(algebra)?;
            let def = ctx.inputs.formula(&formula.formula, a.signature(), &formula.inputs, formula.out.as_deref())?;
            ctx.run(|b| {
                let t = match implicit_table(&a, &def) {
                    Err(Error::NotFunctional(m)) => {
                        return Ok(Outcome { verdict: "refuted".into(), result: json!({ "not_functional": m }) })
                    }
                    r => r?,
                };
                let entries: Vec<Value> =
                    t.entries().iter().map(|(x, y)| json!({ "args": x, "value": y })).collect();
                let mut out = Outcome::ok(json!({
                    "algebra": a.name(),
                    "definition": def.to_string(),
                    "arity": t.arity(),
                    "total": t.is_total(),
                    "missing": t.missing(),
                    "entries": entries,
                }));
                if let Some(w) = extendable {
                    let k = ClassSpec::q(vec![a.clone()])?;
                    let v = check_extendable(&k, &def, b, *w)?;
                    let e = Outcome::of(v)?;
                    out.verdict = e.verdict;
                    out = out.with("extendable", e.result);
                }
                Ok(out)
            })
        }
        Command::Conlat { algebra, class, equation, tuple_cap } => {
            let a = ctx.inputs.algebra(algebra)?;
            let k = opt_class(&mut ctx.inputs, class)?;
            let eq = equation.as_deref().map(CongruenceEquation::parse).transpose()?;
            ctx.run(|b| {
                let meter = b.meter();
                let lat = match &k {
                    Some(k) => con_k(&a, k, &meter)?,
                    None => con(&a, &meter)?,
                };
                let elems: Vec<Value> = lat.elements.iter().map(blocks).collect();
                let mut out = Outcome::ok(json!({
                    "algebra": a.name(),
                    "relative_to": k.as_ref().map(|k| k.to_string()),
                    "size": lat.len(),
                    "chain": lat.is_chain(),
                    "congruences": elems,
                    "covers": lat.covers,
                }));
                if let Some(e) = &eq {
                    let v = Outcome::of(check_congruence_equation(&a, k.as_ref(), e, *tuple_cap, b)?)?;
                    out.verdict = v.verdict;
                    out = out.with("equation", v.result);
                }
                Ok(out)
            })
        }
        Command::Rfsi { algebra, class } => {
            let a = ctx.inputs.algebra(algebra)?;
            let k = opt_class(&mut ctx.inputs, class)?;
            ctx.run(|b| {
                let m = monolith(&a, k.as_ref(), b)?;
                let rfsi = is_rfsi(&a, k.as_ref(), b)?;
                Ok(Outcome {
                    verdict: if rfsi { "proven" } else { "refuted" }.into(),
                    result: json!({ "algebra": a.name(), "rfsi": rfsi, "monolith": m.as_ref().map(blocks) }),
                })
            })
        }
        Command::Membership { class, algebra } => {
            let k = class_of(&mut ctx.inputs, class)?;
            let a = ctx.inputs.algebra(algebra)?;
            ctx.run(|b| Outcome::of(membership(&a, &k, b)?))
        }
        Command::Dominion { class, big, sub, expect_closed } => {
            let k = class_of(&mut ctx.inputs, class)?;
            let b = ctx.inputs.algebra(big)?;
            let sub = elements(sub)?;
            ctx.run(|budget| {
                let d = dominion(&sub, &b, &k, budget)?;
                let verdict = if d.incomplete.is_some() {
                    "unknown"
                } else if !expect_closed {
                    "ok"
                } else if d.is_trivial() {
                    "proven"
                } else {
                    "refuted"
                };
                let extra = d.extra();
                Ok(Outcome { verdict: verdict.into(), result: json!({ "dominion": d, "extra": extra }) })
            })
        }
        Command::Ses { class, strategy, term, max_width, max_size } => {
            let k = class_of(&mut ctx.inputs, class)?;
            let cond: TermCondition = term.parse()?;
            ctx.run(|b| {
                let stratum = SesStrategy::Stratum { max_width: *max_width, max_size: *max_size };
                let strat = match strategy {
                    SesArg::Stratum => stratum,
                    SesArg::Unanimity | SesArg::Auto => match term_condition_search_class(&k, cond, b)? {
                        Verdict::Proven(w) => SesStrategy::Unanimity(w),
                        _ if matches!(strategy, SesArg::Auto) => stratum,
                        other => {
                            let o = Outcome::of(other)?;
                            return Ok(Outcome {
                                verdict: "unknown".into(),
                                result: json!({ "reason": format!("no {cond} term"), "search": o.result }),
                            });
                        }
                    },
                };
                let name = match &strat {
                    SesStrategy::Unanimity(w) => format!("unanimity via {}", w.text),
                    SesStrategy::Stratum { .. } => format!("products of at most {max_width} generators"),
                };
                Ok(Outcome::of(check_ses(&k, &strat, b)?)?.with("strategy", json!(name)))
            })
        }
        Command::TermSearch { class, condition } => {
            let k = class_of(&mut ctx.inputs, class)?;
            let cond: TermCondition = condition.parse()?;
            ctx.run(|b| Outcome::of(term_condition_search_class(&k, cond, b)?))
        }
        Command::Primal { algebra, route } => {
            let a = ctx.inputs.algebra(algebra)?;
            let route = match route {
                RouteArg::Auto => PrimalRoute::Auto,
                RouteArg::UnaryClone => PrimalRoute::UnaryClone,
                RouteArg::BinaryClone => PrimalRoute::BinaryClone,
                RouteArg::Majority => PrimalRoute::Majority,
                RouteArg::Reference => PrimalRoute::Reference,
            };
            ctx.run(|b| Outcome::of(is_primal_via(&a, b, route)?))
        }
        Command::Interpolate { class, formula, term, eq_max } => {
            let k = class_of(&mut ctx.inputs, class)?;
            let def = ctx.inputs.formula(&formula.formula, k.signature(), &formula.inputs, formula.out.as_deref())?;
            let terms = term.iter().map(|t| parse_term(t, k.signature())).collect::<Result<Vec<_>>>()?;
            ctx.run(|b| {
                if !terms.is_empty() {
                    return Outcome::of(check_interpolation(&k, &def, &terms, b)?);
                }
                match eq_max {
                    Some(m) => {
                        let v = search_eq_interpolant(&k, &def, *m, b)?;
                        Outcome::of(match v {
                            Verdict::Proven(f) => Verdict::Proven(f.to_string()),
                            Verdict::Refuted(r) => Verdict::Refuted(r),
                            Verdict::Unknown(u) => Verdict::Unknown(u),
                        })
                    }
                    None => Outcome::of(search_interpolant_term(&k, &def, b)?),
                }
            })
        }
        Command::Expand { class, define, allow_nontotal, emit } => {
            let k = class_of(&mut ctx.inputs, class)?;
            let ops = define
                .iter()
                .map(|d| ctx.inputs.definition(d, k.signature()))
                .collect::<Result<Vec<_>>>()?;
            let spec = ExpansionSpec::new(k, ops)?;
            let out = ctx.run(|b| {
                let e = expand_class(&spec, *allow_nontotal, b)?;
                let gens: Vec<Value> = e.class.generators().map(algebra_json).collect();
                Ok(Outcome::ok(json!({
                    "class": e.class.to_string(),
                    "generators": gens,
                    "axioms": e.axiom_lines(),
                    "dropped": e.dropped,
                })))
            })?;
            if let Some(dir) = emit {
                emit_expansion(dir, &out.result)?;
            }
            Ok(out)
        }
        Command::BethWitness { algebra, define } => {
            let a = ctx.inputs.algebra(algebra)?;
            let ops = define
                .iter()
                .map(|d| ctx.inputs.definition(d, a.signature()))
                .collect::<Result<Vec<_>>>()?;
            ctx.run(|b| Outcome::of(beth_primal_witness(&a, &ops, b)?))
        }
        Command::Zigzag { algebra, sub, element, max_length, codomain_bound } => {
            let a = ctx.inputs.algebra(algebra)?;
            let sub = elements(sub)?;
            ctx.run(|b| Outcome::of(zigzag_membership(&a, &sub, *element, *max_length, *codomain_bound, b)?))
        }
        Command::Gallery { id } => {
            let id = id.clone();
            ctx.run(|_| {
                Ok(Outcome::ok(match id.as_deref().filter(|s| *s != "list") {
                    None => json!({ "algebras": ALGEBRA_IDS, "formulas": FORMULA_IDS }),
                    Some(id) => {
                        let spec = if id.starts_with("gallery:") { id.to_string() } else { format!("gallery:{id}") };
                        match make_algebra(&spec) {
                            Ok(a) => json!({ "algebra": algebra_json(&a) }),
                            Err(e) => match make_formula(&spec) {
                                Ok(d) => json!({ "formula": d.to_string() }),
                                Err(_) => return Err(e),
                            },
                        }
                    }
                }))
            })
        }
        Command::Repro { id, list } => {
            let id = id.clone();
            let list = *list;
            let seed = ctx.seed;
            ctx.run(|b| match (id, list) {
                (None, _) | (_, true) => {
                    let ids: Vec<Value> = REPRO_IDS.iter().map(|(i, t)| json!({ "id": i, "title": t })).collect();
                    Ok(Outcome::ok(json!({ "repro": ids })))
                }
                (Some(id), false) => {
                    let r = repro::run(&id, seed, b)?;
                    Ok(Outcome {
                        verdict: if r.passed() { "proven" } else { "refuted" }.into(),
                        result: serde_json::to_value(&r)?,
                    })
                }
            })
        }
    }
}

fn emit_expansion(dir: &Path, result: &Value) -> Result<()> {
    std::fs::create_dir_all(dir)?;
    if let Some(gens) = result["generators"].as_array() {
        for g in gens {
            let name: String = g["name"]
                .as_str()
                .unwrap_or("algebra")
                .chars()
                .map(|c| if c.is_ascii_alphanumeric() || c == '_' { c } else { '_' })
                .collect();
            std::fs::write(dir.join(format!("{name}.json")), serde_json::to_string_pretty(g)? + "\n")?;
        }
    }
    if let Some(lines) = result["axioms"].as_array() {
        let text: String = lines.iter().filter_map(Value::as_str).map(|l| format!("{l}\n")).collect();
        std::fs::write(dir.join("axioms.txt"), text)?;
    }
    Ok(())
}

/// Parses `argv` (including the program name), runs the command, prints the
/// report and returns the exit code.
pub fn run<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_USAGE } else { 0 };
        }
    };
    match execute(&cli) {
        Ok((report, code)) => {
            let text = match cli.global.format {
                Format::Json => report.to_json(),
                Format::Text => report.to_text(),
            };
            print!("{text}");
            code
        }
        Err(e) => {
            eprintln!("error: {e}");
            EXIT_INPUT
        }
    }
}

/// Runs a parsed command and returns its report. Only input errors escape.
fn execute(cli: &Cli) -> Result<(Report, i32)> {
    let g = &cli.global;
    let budget = match &g.budget {
        Some(t) => parse_budget(t)?,
        None => SearchBudget::default(),
    };
    let cache = g.cache.as_deref().map(Cache::open).transpose()?;
    let mut ctx = Ctx {
        inputs: Inputs::default(),
        budget,
        seed: g.seed,
        command: cli.command.name(),
        args: serde_json::to_value(&cli.command)?,
        cache,
        digest: None,
    };
    let start = Instant::now();
    let out = match g.jobs {
        Some(n) => {
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(n.max(1))
                .build()
                .map_err(|e| Error::Invalid(format!("thread pool: {e}")))?;
            pool.install(|| dispatch(&cli.command, &mut ctx))?
        }
        None => dispatch(&cli.command, &mut ctx)?,
    };
    let wall = g.timing.then(|| start.elapsed().as_millis() as u64);
    let report = ctx.report(&out, wall);
    if let Some(path) = &g.report {
        std::fs::write(path, report.to_json())?;
    }
    Ok((report.clone(), report.exit_code))
}

/// Entry point of the `ua` binary.
pub fn main() -> i32 {
    run(std::env::args_os())
}
