//! Named algebras, formulas and counterexample gadgets, addressable by ids
//! such as `lukasiewicz(2)` or `ordered_sum(chain_heyting(3),chain_heyting(5))`.

use std::fmt;
use std::sync::OnceLock;

use crate::algebra::{product, FiniteAlgebra, Homomorphism, Signature, Term};
use crate::error::{Error, Result};
use crate::formula::{parse, Formula, ImplicitDef};

pub fn heyting_signature() -> Signature {
    Signature::new([("/\\", 2), ("\\/", 2), ("=>", 2), ("0", 0), ("1", 0)]).unwrap()
}

pub fn bdl_signature() -> Signature {
    Signature::new([("/\\", 2), ("\\/", 2), ("0", 0), ("1", 0)]).unwrap()
}

pub fn boolean_signature() -> Signature {
    bdl_signature().with_symbol("~", 1).unwrap()
}

pub fn rcdl_signature() -> Signature {
    Signature::new([("/\\", 2), ("\\/", 2), ("r", 3)]).unwrap()
}

pub fn pdl_signature() -> Signature {
    Signature::new([("/\\", 2), ("\\/", 2), ("~", 1), ("0", 0), ("1", 0)]).unwrap()
}

pub fn mv_signature() -> Signature {
    Signature::new([("+", 2), ("*", 2), ("~", 1), ("0", 0), ("1", 0)]).unwrap()
}

pub fn ring_signature() -> Signature {
    Signature::new([("+", 2), ("*", 2), ("-", 1), ("0", 0), ("1", 0)]).unwrap()
}

pub fn monoid_signature() -> Signature {
    Signature::new([("*", 2), ("1", 0)]).unwrap()
}

pub fn meet_signature() -> Signature {
    Signature::new([("/\\", 2)]).unwrap()
}

/// A bounded distributive lattice given by its order, with meet, join and
/// relative pseudocomplement read off by search.
struct Lattice {
    n: usize,
    leq: Vec<Vec<bool>>,
}

impl Lattice {
    fn new(n: usize, leq: impl Fn(usize, usize) -> bool) -> Self {
        Lattice { n, leq: (0..n).map(|a| (0..n).map(|b| leq(a, b)).collect()).collect() }
    }

    fn le(&self, a: usize, b: usize) -> bool {
        self.leq[a][b]
    }

    fn greatest(&self, set: impl Iterator<Item = usize> + Clone) -> Option<usize> {
        set.clone().find(|&c| set.clone().all(|d| self.le(d, c)))
    }

    fn least(&self, set: impl Iterator<Item = usize> + Clone) -> Option<usize> {
        set.clone().find(|&c| set.clone().all(|d| self.le(c, d)))
    }

    fn meet(&self, a: usize, b: usize) -> usize {
        self.greatest((0..self.n).filter(move |&c| self.le(c, a) && self.le(c, b))).expect("lattice")
    }

    fn join(&self, a: usize, b: usize) -> usize {
        self.least((0..self.n).filter(move |&c| self.le(a, c) && self.le(b, c))).expect("lattice")
    }

    fn bottom(&self) -> usize {
        self.least(0..self.n).expect("bounded")
    }

    fn top(&self) -> usize {
        self.greatest(0..self.n).expect("bounded")
    }

    fn imp(&self, a: usize, b: usize) -> usize {
        self.greatest((0..self.n).filter(move |&c| self.le(self.meet(a, c), b))).expect("Heyting")
    }

    fn heyting(&self, name: String) -> Result<FiniteAlgebra> {
        let (bot, top) = (self.bottom(), self.top());
        FiniteAlgebra::from_fn(name, heyting_signature(), self.n, |s, x| match s {
            0 => self.meet(x[0], x[1]),
            1 => self.join(x[0], x[1]),
            2 => self.imp(x[0], x[1]),
            3 => bot,
            _ => top,
        })
    }
}

fn order_of(a: &FiniteAlgebra) -> Result<Lattice> {
    let meet = a
        .symbol("/\\")
        .ok_or_else(|| Error::Invalid(format!("`{}` has no meet", a.name())))?;
    Ok(Lattice::new(a.size(), |x, y| a.op(meet, &[x, y]) == x))
}

/// Heyting implication of the lattice reduct of `a` (which must have `/\`
/// and be a finite distributive lattice).
pub fn heyting_implication(a: &FiniteAlgebra) -> Result<Vec<usize>> {
    let l = order_of(a)?;
    let mut t = Vec::with_capacity(a.size() * a.size());
    for x in 0..a.size() {
        for y in 0..a.size() {
            t.push(l.imp(x, y));
        }
    }
    Ok(t)
}

fn need(cond: bool, msg: &str) -> Result<()> {
    if cond {
        Ok(())
    } else {
        Err(Error::Invalid(msg.into()))
    }
}

/// The n-element Heyting chain 0 < 1 < ... < n-1.
pub fn chain_heyting(n: usize) -> Result<FiniteAlgebra> {
    need(n >= 1, "chain_heyting needs n >= 1")?;
    Lattice::new(n, |a, b| a <= b).heyting(format!("C{n}"))
}

/// A + B: A below B with the top of A glued to the bottom of B.
pub fn ordered_sum(a: &FiniteAlgebra, b: &FiniteAlgebra) -> Result<FiniteAlgebra> {
    let sig = heyting_signature();
    need(a.signature() == &sig && b.signature() == &sig, "ordered_sum takes Heyting algebras")?;
    let (la, lb) = (order_of(a)?, order_of(b)?);
    let a_top = la.top();
    let lower: Vec<usize> = (0..a.size()).filter(|&x| x != a_top).collect();
    let k = lower.len();
    let l = Lattice::new(k + b.size(), |x, y| match (x < k, y < k) {
        (true, true) => la.le(lower[x], lower[y]),
        (true, false) => true,
        (false, true) => false,
        (false, false) => lb.le(x - k, y - k),
    });
    l.heyting(format!("{}+{}", a.name(), b.name()))
}

/// The Boolean lattice 2^k with a new top adjoined, as a pseudocomplemented
/// distributive lattice. Elements 0..2^k are bitmasks, 2^k is the new top.
pub fn bool_top_pdl(k: usize) -> Result<FiniteAlgebra> {
    need(k <= 4, "bool_top_pdl supports k <= 4")?;
    let top = 1usize << k;
    let l = Lattice::new(top + 1, |a, b| b == top || (a != top && a & b == a));
    let bot = l.bottom();
    // pseudocomplement: the largest element disjoint from a
    let neg: Vec<usize> = (0..=top)
        .map(|a| l.greatest((0..=top).filter(|&c| l.meet(a, c) == bot)).expect("pseudocomplement"))
        .collect();
    for a in 0..=top {
        for x in 0..=top {
            need((l.meet(a, x) == bot) == l.le(x, neg[a]), "pseudocomplement law fails")?;
        }
    }
    FiniteAlgebra::from_fn(format!("PDL{k}"), pdl_signature(), top + 1, |s, x| match s {
        0 => l.meet(x[0], x[1]),
        1 => l.join(x[0], x[1]),
        2 => neg[x[0]],
        3 => bot,
        _ => l.top(),
    })
}

/// Heyting algebra on the lattice of a pseudocomplemented lattice.
pub fn heyting_of_lattice(a: &FiniteAlgebra) -> Result<FiniteAlgebra> {
    order_of(a)?.heyting(format!("H({})", a.name()))
}

/// The MV chain Ł_n on {0, 1/n, ..., 1}; element m stands for m/n.
pub fn lukasiewicz(n: usize) -> Result<FiniteAlgebra> {
    need(n >= 1, "lukasiewicz needs n >= 1")?;
    FiniteAlgebra::from_fn(format!("L{n}"), mv_signature(), n + 1, |s, x| match s {
        0 => (x[0] + x[1]).min(n),
        1 => (x[0] + x[1]).saturating_sub(n),
        2 => n - x[0],
        3 => 0,
        _ => n,
    })
}

/// The ring of integers modulo m.
pub fn zmod_ring(m: usize) -> Result<FiniteAlgebra> {
    need(m >= 2, "zmod_ring needs m >= 2")?;
    FiniteAlgebra::from_fn(format!("Z{m}"), ring_signature(), m, |s, x| match s {
        0 => (x[0] + x[1]) % m,
        1 => (x[0] * x[1]) % m,
        2 => (m - x[0]) % m,
        3 => 0,
        _ => 1 % m,
    })
}

/// The commutative monoid {c^0, ..., c^(r+1)} where products saturate at c^(r+1).
pub fn monoid_c(r: usize) -> Result<FiniteAlgebra> {
    need(r >= 1, "monoid_c needs r >= 1")?;
    FiniteAlgebra::from_fn(format!("Cmon{r}"), monoid_signature(), r + 2, |s, x| match s {
        0 => (x[0] + x[1]).min(r + 1),
        _ => 0,
    })
}

/// The cyclic group Z_n as a monoid; element 0 is the identity.
pub fn cyclic_group(n: usize) -> Result<FiniteAlgebra> {
    need(n >= 1, "cyclic_group needs n >= 1")?;
    FiniteAlgebra::from_fn(format!("G{n}"), monoid_signature(), n, |s, x| match s {
        0 => (x[0] + x[1]) % n,
        _ => 0,
    })
}

pub fn d2_bdl() -> FiniteAlgebra {
    FiniteAlgebra::from_fn("D2", bdl_signature(), 2, |s, x| match s {
        0 => x[0] & x[1],
        1 => x[0] | x[1],
        2 => 0,
        _ => 1,
    })
    .unwrap()
}

/// D2 with the relative complement r(a, b, c) of a in [a∧b∧c, a∨b∨c].
pub fn d2_rcdl() -> FiniteAlgebra {
    FiniteAlgebra::from_fn("D2r", rcdl_signature(), 2, |s, x| match s {
        0 => x[0] & x[1],
        1 => x[0] | x[1],
        _ if x[0] == 0 => x[1] | x[2],
        _ => x[1] & x[2],
    })
    .unwrap()
}

/// The two-element Boolean algebra, with complement listed last.
pub fn bool2() -> FiniteAlgebra {
    FiniteAlgebra::from_fn("B2", boolean_signature(), 2, |s, x| match s {
        0 => x[0] & x[1],
        1 => x[0] | x[1],
        2 => 0,
        3 => 1,
        _ => 1 - x[0],
    })
    .unwrap()
}

/// The n-element chain as a meet semilattice.
pub fn chain_meet(n: usize) -> Result<FiniteAlgebra> {
    need(n >= 1, "chain_meet needs n >= 1")?;
    FiniteAlgebra::from_fn(format!("M{n}"), meet_signature(), n, |_, x| x[0].min(x[1]))
}

/// The implication reduct of a Heyting algebra.
pub fn heyting_implication_reduct(a: &FiniteAlgebra) -> Result<FiniteAlgebra> {
    Ok(a.reduct(&["=>"])?.renamed(format!("{}->", a.name())))
}

/// The C5 gadget: D = {(c1,c1), (c2,c3), (c4,c4), (c5,c5)} inside C5², and
/// the homomorphism k: C5 -> C5² with image D. Pairs are encoded as i*5+j.
pub fn c5_counterexample() -> (FiniteAlgebra, Vec<usize>, Homomorphism) {
    let c5 = chain_heyting(5).unwrap();
    let pair = |i: usize, j: usize| i * 5 + j;
    let d = vec![pair(0, 0), pair(1, 2), pair(3, 3), pair(4, 4)];
    let k = Homomorphism::new(vec![pair(0, 0), pair(1, 2), pair(3, 3), pair(4, 4), pair(4, 4)]);
    (c5, d, k)
}

/// All monoids with universe {0..n-1} and identity 0, for n <= `max`.
/// Sizes up to 4 are cached.
pub fn small_monoids(max: usize) -> Vec<FiniteAlgebra> {
    static CACHE: OnceLock<Vec<FiniteAlgebra>> = OnceLock::new();
    if max <= 4 {
        let all = CACHE.get_or_init(|| (1..=4).flat_map(monoids_of_size).collect());
        return all.iter().filter(|m| m.size() <= max).cloned().collect();
    }
    (1..=max).flat_map(monoids_of_size).collect()
}

fn monoids_of_size(n: usize) -> Vec<FiniteAlgebra> {
    let mut out = Vec::new();
    let mut t = vec![0usize; n * n];
    for a in 0..n {
        t[a] = a;
        t[a * n] = a;
    }
    let free: Vec<usize> = (1..n).flat_map(|a| (1..n).map(move |b| a * n + b)).collect();
    fill(n, &free, 0, &mut t, &mut out);
    out
}

fn fill(n: usize, free: &[usize], i: usize, t: &mut Vec<usize>, out: &mut Vec<FiniteAlgebra>) {
    if i == free.len() {
        let assoc = (0..n).all(|a| (0..n).all(|b| (0..n).all(|c| t[t[a * n + b] * n + c] == t[a * n + t[b * n + c]])));
        if assoc {
            let name = format!("Mon{n}_{}", out.len());
            out.push(FiniteAlgebra::new(name, monoid_signature(), n, vec![t.clone(), vec![0]]).unwrap());
        }
        return;
    }
    for v in 0..n {
        t[free[i]] = v;
        // prune: associativity among already fixed entries
        if partial_assoc(n, t, &free[..=i]) {
            fill(n, free, i + 1, t, out);
        }
    }
}

fn partial_assoc(n: usize, t: &[usize], fixed: &[usize]) -> bool {
    let known = |p: usize| p < n || p % n == 0 || fixed.contains(&p);
    for a in 0..n {
        for b in 0..n {
            if !known(a * n + b) {
                continue;
            }
            let ab = t[a * n + b];
            for c in 0..n {
                if !known(b * n + c) || !known(ab * n + c) {
                    continue;
                }
                let bc = t[b * n + c];
                if !known(a * n + bc) {
                    continue;
                }
                if t[ab * n + c] != t[a * n + bc] {
                    return false;
                }
            }
        }
    }
    true
}

/// Commutative monoids of size at most 4.
pub fn commutative_monoids(max: usize) -> Vec<FiniteAlgebra> {
    small_monoids(max)
        .into_iter()
        .filter(|m| (0..m.size()).all(|a| (0..m.size()).all(|b| m.op(0, &[a, b]) == m.op(0, &[b, a]))))
        .collect()
}

fn def(text: &str, sig: &Signature, inputs: &[&str], output: &str) -> ImplicitDef {
    ImplicitDef::new(parse(text, sig).expect("gallery formula parses"), inputs, output)
}

/// (x ∧ y = 0) & (x ∨ y = 1).
pub fn complement() -> ImplicitDef {
    def("x /\\ y = 0 & x \\/ y = 1", &bdl_signature(), &["x"], "y")
}

pub fn relative_complement() -> ImplicitDef {
    def(
        "x1 /\\ y = x1 /\\ x2 /\\ x3 & x1 \\/ y = x1 \\/ x2 \\/ x3",
        &meet_signature().with_symbol("\\/", 2).unwrap(),
        &["x1", "x2", "x3"],
        "y",
    )
}

pub fn monoid_inverse() -> ImplicitDef {
    def("x*y = 1 & y*x = 1", &monoid_signature(), &["x"], "y")
}

pub fn weak_inverse() -> ImplicitDef {
    def("x^2*y = x & x*y^2 = y", &ring_signature(), &["x"], "y")
}

/// y = x^2 in a monoid.
pub fn monoid_square() -> ImplicitDef {
    def("y = x*x", &monoid_signature(), &["x"], "y")
}

/// Meet defined from implication; `y => y` stands for the top element.
pub fn hilbert_meet() -> ImplicitDef {
    let sig = Signature::new([("=>", 2)]).unwrap();
    def(
        "y => x1 = y => y & y => x2 = y => y & x1 => (x2 => y) = y => y",
        &sig,
        &["x1", "x2"],
        "y",
    )
}

/// The four conditions defining implication in finite SI PDLs, with each
/// inequality s <= t written as s ∧ t = s.
pub fn pdl_implication() -> ImplicitDef {
    def(
        "(x1 /\\ y) /\\ x2 = x1 /\\ y \
         & (~x1 \\/ x2) /\\ y = ~x1 \\/ x2 \
         & ~(~x1 \\/ x2) = ~y \
         & y \\/ x1 = ~~y \\/ x1",
        &pdl_signature(),
        &["x1", "x2"],
        "y",
    )
}

fn mv_multiple(k: usize) -> String {
    format!("{k}.y")
}

/// (n.y = x) & (y ⊙ (n-1).y = 0): division by n.
pub fn mv_division(n: usize) -> ImplicitDef {
    let text = format!("{} = x & y * ({}) = 0", mv_multiple(n), mv_multiple(n.saturating_sub(1)));
    def(&text, &mv_signature(), &["x"], "y")
}

/// (n.y = 1) & (y ⊙ (n-1).y = 0), with a dummy input x: the constant 1/n.
pub fn mv_constant(n: usize) -> ImplicitDef {
    let text = format!("{} = 1 & y * ({}) = 0", mv_multiple(n), mv_multiple(n.saturating_sub(1)));
    def(&text, &mv_signature(), &["x"], "y")
}

/// The n-th Isbell formula with inputs x1..x(2n+1), output y and
/// existentials z1..zn, w1..wn.
pub fn isbell_formula(n: usize) -> ImplicitDef {
    let v = |s: &str, i: usize| Term::Var(format!("{s}{i}"));
    let y = Term::Var("y".into());
    let m = |a: Term, b: Term| Term::bin("*", a, b);
    let inputs: Vec<String> = (1..=2 * n + 1).map(|i| format!("x{i}")).collect();
    let formula = if n == 0 {
        Formula::Eq(v("x", 1), y)
    } else {
        let mut eqs = vec![
            (y.clone(), m(v("x", 1), v("z", 1))),
            (v("x", 1), m(v("w", 1), v("x", 2))),
        ];
        for i in 1..n {
            eqs.push((m(v("x", 2 * i), v("z", i)), m(v("x", 2 * i + 1), v("z", i + 1))));
            eqs.push((m(v("w", i), v("x", 2 * i + 1)), m(v("w", i + 1), v("x", 2 * i + 2))));
        }
        eqs.push((m(v("x", 2 * n), v("z", n)), v("x", 2 * n + 1)));
        eqs.push((m(v("w", n), v("x", 2 * n + 1)), y));
        let bound = (1..=n).map(|i| format!("z{i}")).chain((1..=n).map(|i| format!("w{i}"))).collect();
        Formula::exists(bound, Formula::and(eqs.into_iter().map(|(s, t)| Formula::Eq(s, t)).collect()))
    };
    ImplicitDef { formula, inputs, output: "y".into() }
}

/// A parsed gallery id: a name with integer or nested arguments.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum GalleryArg {
    Int(usize),
    Id(GalleryId),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GalleryId {
    pub name: String,
    pub args: Vec<GalleryArg>,
}

impl fmt::Display for GalleryId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.name)?;
        if !self.args.is_empty() {
            let parts: Vec<String> = self
                .args
                .iter()
                .map(|a| match a {
                    GalleryArg::Int(n) => n.to_string(),
                    GalleryArg::Id(id) => id.to_string(),
                })
                .collect();
            write!(f, "({})", parts.join(","))?;
        }
        Ok(())
    }
}

impl GalleryId {
    pub fn parse(text: &str) -> Result<GalleryId> {
        let text = text.trim();
        let text = text.strip_prefix("gallery:").unwrap_or(text);
        let chars: Vec<char> = text.chars().filter(|c| !c.is_whitespace()).collect();
        let mut pos = 0;
        let id = parse_id(&chars, &mut pos)?;
        if pos != chars.len() {
            return Err(Error::Invalid(format!("trailing input in gallery id `{text}`")));
        }
        Ok(id)
    }

    fn int(&self, i: usize) -> Result<usize> {
        match self.args.get(i) {
            Some(GalleryArg::Int(n)) => Ok(*n),
            _ => Err(Error::Invalid(format!("`{self}`: argument {} must be an integer", i + 1))),
        }
    }

    fn sub(&self, i: usize) -> Result<&GalleryId> {
        match self.args.get(i) {
            Some(GalleryArg::Id(id)) => Ok(id),
            _ => Err(Error::Invalid(format!("`{self}`: argument {} must be a gallery id", i + 1))),
        }
    }

    fn arity(&self, n: usize) -> Result<()> {
        if self.args.len() == n {
            Ok(())
        } else {
            Err(Error::Invalid(format!("`{}` takes {n} arguments, found {}", self.name, self.args.len())))
        }
    }
}

fn parse_id(c: &[char], pos: &mut usize) -> Result<GalleryId> {
    let start = *pos;
    while *pos < c.len() && (c[*pos].is_ascii_alphanumeric() || c[*pos] == '_') {
        *pos += 1;
    }
    if start == *pos || c[start].is_ascii_digit() {
        return Err(Error::Invalid(format!("expected a gallery name at offset {start}")));
    }
    let name: String = c[start..*pos].iter().collect();
    let mut args = Vec::new();
    if *pos < c.len() && c[*pos] == '(' {
        *pos += 1;
        if *pos < c.len() && c[*pos] == ')' {
            *pos += 1;
            return Ok(GalleryId { name, args });
        }
        loop {
            if *pos < c.len() && c[*pos].is_ascii_digit() {
                let s = *pos;
                while *pos < c.len() && c[*pos].is_ascii_digit() {
                    *pos += 1;
                }
                let n: String = c[s..*pos].iter().collect();
                args.push(GalleryArg::Int(n.parse().map_err(|_| Error::Invalid(format!("bad integer `{n}`")))?));
            } else {
                args.push(GalleryArg::Id(parse_id(c, pos)?));
            }
            match c.get(*pos) {
                Some(',') => *pos += 1,
                Some(')') => {
                    *pos += 1;
                    break;
                }
                _ => return Err(Error::Invalid(format!("expected `,` or `)` at offset {}", *pos))),
            }
        }
    }
    Ok(GalleryId { name, args })
}

pub const ALGEBRA_IDS: &[&str] = &[
    "chain_heyting(n)",
    "ordered_sum(A,B)",
    "bool_top_pdl(k)",
    "pdl_heyting(k)",
    "lukasiewicz(n)",
    "lukasiewicz_const(n)",
    "zmod_ring(m)",
    "monoid_c(r)",
    "cyclic_group(n)",
    "d2_bdl",
    "d2_rcdl",
    "bool2",
    "chain_meet(n)",
    "implication_reduct(A)",
    "product(A,B,...)",
    "power(A,k)",
];

pub const FORMULA_IDS: &[&str] = &[
    "complement",
    "relative_complement",
    "monoid_inverse",
    "weak_inverse",
    "monoid_square",
    "hilbert_meet",
    "pdl_implication",
    "mv_division(n)",
    "mv_constant(n)",
    "isbell(n)",
];

/// Builds a gallery algebra from its id.
pub fn make_algebra(id: &str) -> Result<FiniteAlgebra> {
    algebra_from(&GalleryId::parse(id)?)
}

pub fn algebra_from(id: &GalleryId) -> Result<FiniteAlgebra> {
    let a = match id.name.as_str() {
        "chain_heyting" => {
            id.arity(1)?;
            chain_heyting(id.int(0)?)?
        }
        "ordered_sum" => {
            id.arity(2)?;
            ordered_sum(&algebra_from(id.sub(0)?)?, &algebra_from(id.sub(1)?)?)?
        }
        "bool_top_pdl" => {
            id.arity(1)?;
            bool_top_pdl(id.int(0)?)?
        }
        "pdl_heyting" => {
            id.arity(1)?;
            heyting_of_lattice(&bool_top_pdl(id.int(0)?)?)?
        }
        "lukasiewicz" => {
            id.arity(1)?;
            lukasiewicz(id.int(0)?)?
        }
        "lukasiewicz_const" => {
            id.arity(1)?;
            let n = id.int(0)?;
            let l = lukasiewicz(n)?;
            l.expanded("c", 0, vec![1])?.renamed(format!("L{n}[c]"))
        }
        "zmod_ring" => {
            id.arity(1)?;
            zmod_ring(id.int(0)?)?
        }
        "monoid_c" => {
            id.arity(1)?;
            monoid_c(id.int(0)?)?
        }
        "cyclic_group" => {
            id.arity(1)?;
            cyclic_group(id.int(0)?)?
        }
        "d2_bdl" => {
            id.arity(0)?;
            d2_bdl()
        }
        "d2_rcdl" => {
            id.arity(0)?;
            d2_rcdl()
        }
        "bool2" => {
            id.arity(0)?;
            bool2()
        }
        "chain_meet" => {
            id.arity(1)?;
            chain_meet(id.int(0)?)?
        }
        "implication_reduct" => {
            id.arity(1)?;
            heyting_implication_reduct(&algebra_from(id.sub(0)?)?)?
        }
        "product" => {
            let parts = (0..id.args.len())
                .map(|i| algebra_from(id.sub(i)?))
                .collect::<Result<Vec<_>>>()?;
            let first = parts.first().ok_or_else(|| Error::Invalid("product needs a factor".into()))?;
            let refs: Vec<&FiniteAlgebra> = parts.iter().collect();
            product(first.signature(), &refs)?.0
        }
        "power" => {
            id.arity(2)?;
            let a = algebra_from(id.sub(0)?)?;
            let refs = vec![&a; id.int(1)?];
            product(a.signature(), &refs)?.0
        }
        other => return Err(Error::Invalid(format!("unknown gallery algebra `{other}`"))),
    };
    Ok(a)
}

/// Builds a gallery formula (with its inputs and output) from its id.
pub fn make_formula(id: &str) -> Result<ImplicitDef> {
    let id = GalleryId::parse(id)?;
    let nullary = |d: ImplicitDef| -> Result<ImplicitDef> {
        id.arity(0)?;
        Ok(d)
    };
    match id.name.as_str() {
        "complement" => nullary(complement()),
        "relative_complement" => nullary(relative_complement()),
        "monoid_inverse" => nullary(monoid_inverse()),
        "weak_inverse" => nullary(weak_inverse()),
        "monoid_square" => nullary(monoid_square()),
        "hilbert_meet" => nullary(hilbert_meet()),
        "pdl_implication" => nullary(pdl_implication()),
        "mv_division" => {
            id.arity(1)?;
            Ok(mv_division(id.int(0)?))
        }
        "mv_constant" => {
            id.arity(1)?;
            Ok(mv_constant(id.int(0)?))
        }
        "isbell" => {
            id.arity(1)?;
            Ok(isbell_formula(id.int(0)?))
        }
        other => Err(Error::Invalid(format!("unknown gallery formula `{other}`"))),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{isomorphic, to_raw, validate_algebra, DEFAULT_SIZE_CAP};
    use crate::budget::SearchBudget;
    use crate::classops::ClassSpec;
    use crate::formula::{check_functional, implicit_table};
    use crate::oracle;

    fn meter() -> crate::budget::Meter {
        SearchBudget::default().meter()
    }

    fn sample_ids() -> Vec<&'static str> {
        vec![
            "chain_heyting(4)",
            "ordered_sum(chain_heyting(2),chain_heyting(3))",
            "bool_top_pdl(2)",
            "pdl_heyting(1)",
            "lukasiewicz(3)",
            "lukasiewicz_const(2)",
            "zmod_ring(6)",
            "monoid_c(3)",
            "cyclic_group(5)",
            "d2_bdl",
            "d2_rcdl",
            "bool2",
            "chain_meet(4)",
            "implication_reduct(chain_heyting(4))",
            "product(d2_bdl,d2_bdl,d2_bdl)",
            "power(chain_heyting(3),2)",
        ]
    }

    #[test]
    fn every_id_builds_and_validates() {
        for id in sample_ids() {
            let a = make_algebra(id).unwrap();
            let back = validate_algebra(&to_raw(&a), DEFAULT_SIZE_CAP).unwrap();
            assert_eq!(back.tables(), a.tables(), "{id}");
            assert_eq!(make_algebra(&format!("gallery:{id}")).unwrap().tables(), a.tables());
        }
        assert_eq!(ALGEBRA_IDS.len(), sample_ids().len());
        assert!(make_algebra("nosuch(2)").is_err());
        assert!(make_algebra("chain_heyting(3").is_err());
        assert!(make_algebra("chain_heyting(d2_bdl)").is_err());
        assert!(make_algebra("lukasiewicz(0)").is_err());
        for f in ["complement", "relative_complement", "monoid_inverse", "weak_inverse", "monoid_square", "hilbert_meet", "pdl_implication", "mv_division(3)", "mv_constant(2)", "isbell(2)"] {
            make_formula(f).unwrap();
        }
        assert_eq!(FORMULA_IDS.len(), 10);
    }

    #[test]
    fn heyting_residuation() {
        for id in ["chain_heyting(5)", "pdl_heyting(2)", "power(chain_heyting(3),2)", "ordered_sum(power(chain_heyting(2),2),chain_heyting(3))"] {
            let a = make_algebra(id).unwrap();
            let (m, j, imp) = (a.symbol("/\\").unwrap(), a.symbol("\\/").unwrap(), a.symbol("=>").unwrap());
            let le = |x: usize, y: usize| a.op(m, &[x, y]) == x;
            for t in oracle::all_tuples(a.size(), 3) {
                let (x, y, z) = (t[0], t[1], t[2]);
                assert_eq!(le(a.op(m, &[x, y]), z), le(x, a.op(imp, &[y, z])), "{id} {t:?}");
                assert_eq!(a.op(j, &[x, y]) == y, le(x, y));
            }
        }
    }

    #[test]
    fn mv_axioms() {
        for n in 1..=5 {
            let a = lukasiewicz(n).unwrap();
            let (p, neg) = (a.symbol("+").unwrap(), a.symbol("~").unwrap());
            let f = |x, y| a.op(p, &[x, y]);
            let g = |x| a.op(neg, &[x]);
            for t in oracle::all_tuples(n + 1, 3) {
                let (x, y, z) = (t[0], t[1], t[2]);
                assert_eq!(f(x, f(y, z)), f(f(x, y), z));
                assert_eq!(f(x, y), f(y, x));
                assert_eq!(f(x, 0), x);
                assert_eq!(g(g(x)), x);
                assert_eq!(f(x, g(0)), g(0));
                assert_eq!(f(g(f(g(x), y)), y), f(g(f(g(y), x)), x));
                assert_eq!(a.op(a.symbol("*").unwrap(), &[x, y]), g(f(g(x), g(y))));
            }
        }
        let l2 = lukasiewicz(2).unwrap();
        assert_eq!(l2.apply("+", &[1, 1]), Some(2));
        assert_eq!(l2.apply("*", &[1, 1]), Some(0));
    }

    #[test]
    fn ordered_sums() {
        let c = |n| chain_heyting(n).unwrap();
        let m = meter();
        assert!(isomorphic(&ordered_sum(&c(3), &c(5)).unwrap(), &c(7), &m).unwrap());
        let sq = make_algebra("power(chain_heyting(2),2)").unwrap();
        let triples = [(c(2), sq.clone(), c(3)), (sq.clone(), c(3), sq.clone()), (c(3), c(4), c(2))];
        for (x, y, z) in triples {
            let l = ordered_sum(&ordered_sum(&x, &y).unwrap(), &z).unwrap();
            let r = ordered_sum(&x, &ordered_sum(&y, &z).unwrap()).unwrap();
            assert!(isomorphic(&l, &r, &m).unwrap());
        }
    }

    #[test]
    fn monoid_gadget() {
        let a = monoid_c(3).unwrap();
        let pow = |k: usize| (0..k).fold(0, |acc, _| a.op(0, &[acc, 1]));
        assert_ne!(pow(3), pow(4));
        assert_eq!(pow(4), pow(5));
    }

    #[test]
    fn formula_shapes() {
        assert_eq!(monoid_inverse().formula.to_string(), "x * y = 1 & y * x = 1");
        assert_eq!(isbell_formula(0).formula, Formula::Eq(Term::var("x1"), Term::var("y")));
        let i1 = isbell_formula(1);
        assert_eq!(i1.inputs.len(), 3);
        match &i1.formula {
            Formula::Exists(vs, _) => assert_eq!(vs.len(), 2),
            f => panic!("{f}"),
        }
    }

    #[test]
    fn mv_division_on_l4() {
        // at the top element, y with 2.y = 1 and y * y = 0 is 1/2
        let t = implicit_table(&lukasiewicz(4).unwrap(), &mv_division(2)).unwrap();
        assert_eq!(t.get(&[4]), Some(2));
        let t = implicit_table(&lukasiewicz(4).unwrap(), &mv_division(4)).unwrap();
        assert_eq!(t.get(&[4]), Some(1));
    }

    #[test]
    fn pdl_implication_matches_heyting() {
        let a = bool_top_pdl(2).unwrap();
        let imp = heyting_implication(&a).unwrap();
        let def = pdl_implication();
        for (x, ys) in oracle::relation(&a, &def.formula, &def.inputs, &def.output) {
            assert_eq!(ys.into_iter().collect::<Vec<_>>(), vec![imp[x[0] * a.size() + x[1]]]);
        }
        assert_eq!(oracle::relation(&a, &def.formula, &def.inputs, &def.output).len(), a.size() * a.size());
    }

    #[test]
    fn isbell_functional_on_monoids() {
        let b = SearchBudget::default();
        let corpus = vec![monoid_c(1).unwrap(), monoid_c(2).unwrap(), cyclic_group(2).unwrap(), cyclic_group(3).unwrap()];
        let mut all = corpus.clone();
        all.extend(small_monoids(3));
        let k = ClassSpec::q(all).unwrap();
        assert!(check_functional(&k, &isbell_formula(1), &b).unwrap().is_proven());
    }

    #[test]
    fn c5_gadget() {
        let (c5, d, k) = c5_counterexample();
        assert_eq!(d.len(), 4);
        assert_eq!(k.apply(1), 1 * 5 + 2);
        let (sq, _) = product(c5.signature(), &[&c5, &c5]).unwrap();
        assert!(sq.is_subuniverse(&d));
        assert!(k.is_homomorphism(&c5, &sq));
        assert_eq!(oracle::sg(&sq, &d).into_iter().collect::<Vec<_>>(), d);
    }

    #[test]
    fn small_monoid_census() {
        // monoids of order 1, 2, 3, 4 up to isomorphism number 1, 2, 7, 35;
        // here with a fixed identity, counted up to relabelling of the rest
        let m = meter();
        let ms = small_monoids(3);
        for x in &ms {
            let a = x.table(0);
            let n = x.size();
            for t in oracle::all_tuples(n, 3) {
                assert_eq!(a[a[t[0] * n + t[1]] * n + t[2]], a[t[0] * n + a[t[1] * n + t[2]]]);
            }
        }
        let mut classes: Vec<&FiniteAlgebra> = Vec::new();
        for x in &ms {
            if !classes.iter().any(|c| isomorphic(c, x, &m).unwrap()) {
                classes.push(x);
            }
        }
        assert_eq!(classes.len(), 1 + 2 + 7);
    }
}
