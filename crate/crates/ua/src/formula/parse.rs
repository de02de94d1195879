use crate::algebra::{Signature, Term};
use crate::error::{Error, Result};

use super::ast::Formula;

#[derive(Clone, Debug, PartialEq, Eq)]
enum Tok {
    Ident(String),
    Num(usize),
    Punct(&'static str),
    End,
}

#[derive(Clone, Debug)]
struct Token {
    tok: Tok,
    line: usize,
    col: usize,
}

const PUNCT: [&str; 19] = [
    "->", "=>", "/\\", "\\/", "(", ")", ",", ".", "=", "&", "|", "!", "*", "+", "^", "~", "-", ";", ":",
];

fn lex(text: &str) -> Result<Vec<Token>> {
    let chars: Vec<char> = text.chars().collect();
    let mut out = Vec::new();
    let (mut line, mut col) = (1, 1);
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        if c == '\n' {
            line += 1;
            col = 1;
            i += 1;
            continue;
        }
        if c.is_whitespace() {
            i += 1;
            col += 1;
            continue;
        }
        if c == '#' {
            while i < chars.len() && chars[i] != '\n' {
                i += 1;
            }
            continue;
        }
        let start_col = col;
        if c.is_ascii_alphabetic() || c == '_' {
            let s = i;
            while i < chars.len() && (chars[i].is_ascii_alphanumeric() || chars[i] == '_' || chars[i] == '\'') {
                i += 1;
            }
            let word: String = chars[s..i].iter().collect();
            col += i - s;
            out.push(Token { tok: Tok::Ident(word), line, col: start_col });
            continue;
        }
        if c.is_ascii_digit() {
            let s = i;
            while i < chars.len() && chars[i].is_ascii_digit() {
                i += 1;
            }
            let word: String = chars[s..i].iter().collect();
            col += i - s;
            let n = word.parse().map_err(|_| Error::Syntax {
                line,
                col: start_col,
                msg: format!("number `{word}` too large"),
            })?;
            out.push(Token { tok: Tok::Num(n), line, col: start_col });
            continue;
        }
        let rest: String = chars[i..chars.len().min(i + 2)].iter().collect();
        match PUNCT.iter().find(|p| rest.starts_with(*p)) {
            Some(p) => {
                i += p.chars().count();
                col += p.chars().count();
                out.push(Token { tok: Tok::Punct(p), line, col: start_col });
            }
            None => {
                return Err(Error::Syntax {
                    line,
                    col,
                    msg: format!("unexpected character `{c}`"),
                })
            }
        }
    }
    out.push(Token { tok: Tok::End, line, col });
    Ok(out)
}

fn later(a: Error, b: Error) -> Error {
    match (&a, &b) {
        (Error::Syntax { line: l1, col: c1, .. }, Error::Syntax { line: l2, col: c2, .. }) => {
            if (l2, c2) > (l1, c1) {
                b
            } else {
                a
            }
        }
        (Error::Syntax { .. }, _) => b,
        _ => a,
    }
}

struct Parser<'a> {
    toks: Vec<Token>,
    pos: usize,
    sig: &'a Signature,
}

/// Parses a formula over `sig`. See the crate documentation for the grammar.
pub fn parse(text: &str, sig: &Signature) -> Result<Formula> {
    let mut p = Parser { toks: lex(text)?, pos: 0, sig };
    let f = p.formula()?;
    p.expect_end()?;
    f.check(sig)?;
    Ok(f)
}

/// Parses a term over `sig`.
pub fn parse_term(text: &str, sig: &Signature) -> Result<Term> {
    let mut p = Parser { toks: lex(text)?, pos: 0, sig };
    let t = p.term()?;
    p.expect_end()?;
    Ok(t)
}

impl Parser<'_> {
    fn peek(&self) -> &Tok {
        &self.toks[self.pos].tok
    }

    fn peek_at(&self, k: usize) -> &Tok {
        &self.toks[(self.pos + k).min(self.toks.len() - 1)].tok
    }

    fn err<T>(&self, msg: impl Into<String>) -> Result<T> {
        let t = &self.toks[self.pos];
        Err(Error::Syntax { line: t.line, col: t.col, msg: msg.into() })
    }

    fn is_punct(&self, p: &str) -> bool {
        matches!(self.peek(), Tok::Punct(q) if *q == p)
    }

    fn eat(&mut self, p: &str) -> bool {
        if self.is_punct(p) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expect(&mut self, p: &str) -> Result<()> {
        if self.eat(p) {
            Ok(())
        } else {
            self.err(format!("expected `{p}`{}", self.found()))
        }
    }

    fn found(&self) -> String {
        match self.peek() {
            Tok::End => ", found end of input".into(),
            Tok::Ident(s) => format!(", found `{s}`"),
            Tok::Num(n) => format!(", found `{n}`"),
            Tok::Punct(p) => format!(", found `{p}`"),
        }
    }

    fn expect_end(&self) -> Result<()> {
        if *self.peek() == Tok::End {
            Ok(())
        } else {
            self.err(format!("unexpected trailing input{}", self.found()))
        }
    }

    fn is_keyword(&self, k: &str) -> bool {
        matches!(self.peek(), Tok::Ident(s) if s == k)
    }

    fn formula(&mut self) -> Result<Formula> {
        if self.is_keyword("exists") {
            return self.quant();
        }
        self.implication()
    }

    fn quant(&mut self) -> Result<Formula> {
        self.pos += 1;
        let mut vars = Vec::new();
        loop {
            match self.peek().clone() {
                Tok::Ident(v) if self.sig.index_of(&v).is_none() => {
                    self.pos += 1;
                    vars.push(v);
                }
                _ => return self.err(format!("expected a variable{}", self.found())),
            }
            if !self.eat(",") {
                break;
            }
        }
        self.expect(".")?;
        let body = self.formula()?;
        Ok(Formula::Exists(vars, Box::new(body)))
    }

    fn implication(&mut self) -> Result<Formula> {
        let lhs = self.disjunction()?;
        if self.eat("->") {
            let rhs = if self.is_keyword("exists") { self.quant()? } else { self.implication()? };
            return Ok(Formula::implies(lhs, rhs));
        }
        Ok(lhs)
    }

    fn disjunction(&mut self) -> Result<Formula> {
        let mut parts = vec![self.conjunction()?];
        while self.eat("|") {
            parts.push(self.conjunction()?);
        }
        Ok(if parts.len() == 1 { parts.pop().unwrap() } else { Formula::Or(parts) })
    }

    fn conjunction(&mut self) -> Result<Formula> {
        let mut parts = vec![self.atom()?];
        while self.eat("&") {
            parts.push(self.atom()?);
        }
        Ok(if parts.len() == 1 { parts.pop().unwrap() } else { Formula::And(parts) })
    }

    fn atom(&mut self) -> Result<Formula> {
        if self.is_keyword("true") {
            self.pos += 1;
            return Ok(Formula::True);
        }
        if self.is_keyword("false") {
            self.pos += 1;
            return Ok(Formula::False);
        }
        if self.is_keyword("exists") {
            return self.quant();
        }
        if self.eat("!") {
            return Ok(Formula::negate(self.atom()?));
        }
        if self.is_punct("(") {
            let save = self.pos;
            match self.equation() {
                Ok(f) => return Ok(f),
                Err(eq_err) => {
                    self.pos = save + 1;
                    match self.formula().and_then(|f| self.expect(")").map(|_| f)) {
                        Ok(f) => return Ok(f),
                        Err(inner) => {
                            self.pos = save;
                            return Err(later(eq_err, inner));
                        }
                    }
                }
            }
        }
        self.equation()
    }

    fn equation(&mut self) -> Result<Formula> {
        let s = self.term()?;
        self.expect("=")?;
        let t = self.term()?;
        Ok(Formula::Eq(s, t))
    }

    fn symbol(&self, name: &str, arity: usize) -> Result<()> {
        let i = self.sig.index_of(name).ok_or_else(|| Error::UnknownSymbol(name.to_string()))?;
        if self.sig.arity(i) != arity {
            return Err(Error::Arity {
                symbol: name.to_string(),
                expected: self.sig.arity(i),
                found: arity,
            });
        }
        Ok(())
    }

    pub(crate) fn term(&mut self) -> Result<Term> {
        let lhs = self.sum()?;
        if self.eat("=>") {
            self.symbol("=>", 2)?;
            let rhs = self.term()?;
            return Ok(Term::bin("=>", lhs, rhs));
        }
        Ok(lhs)
    }

    fn sum(&mut self) -> Result<Term> {
        let mut l = self.product()?;
        loop {
            let op = if self.is_punct("+") {
                "+"
            } else if self.is_punct("\\/") {
                "\\/"
            } else {
                break;
            };
            self.pos += 1;
            self.symbol(op, 2)?;
            l = Term::bin(op, l, self.product()?);
        }
        Ok(l)
    }

    fn product(&mut self) -> Result<Term> {
        let mut l = self.power()?;
        loop {
            let op = if self.is_punct("*") {
                "*"
            } else if self.is_punct("/\\") {
                "/\\"
            } else {
                break;
            };
            self.pos += 1;
            self.symbol(op, 2)?;
            l = Term::bin(op, l, self.power()?);
        }
        Ok(l)
    }

    fn power(&mut self) -> Result<Term> {
        let mut t = self.unary()?;
        while self.eat("^") {
            let k = match self.peek() {
                Tok::Num(k) => *k,
                _ => return self.err(format!("expected an exponent{}", self.found())),
            };
            self.pos += 1;
            t = self.repeat("*", "1", t, k)?;
        }
        Ok(t)
    }

    /// `t op t op ... op t` with `k` copies, left-associated; `k = 0` gives
    /// the unit constant.
    fn repeat(&self, op: &str, unit: &str, t: Term, k: usize) -> Result<Term> {
        if k == 0 {
            self.symbol(unit, 0)?;
            return Ok(Term::constant(unit));
        }
        if k > 1 {
            self.symbol(op, 2)?;
        }
        let mut acc = t.clone();
        for _ in 1..k {
            acc = Term::bin(op, acc, t.clone());
        }
        Ok(acc)
    }

    fn unary(&mut self) -> Result<Term> {
        for op in ["~", "-"] {
            if self.eat(op) {
                self.symbol(op, 1)?;
                return Ok(Term::un(op, self.unary()?));
            }
        }
        self.primary()
    }

    fn primary(&mut self) -> Result<Term> {
        match self.peek().clone() {
            Tok::Num(k) => {
                if matches!(self.peek_at(1), Tok::Punct(".")) {
                    self.pos += 2;
                    let t = self.unary()?;
                    return self.repeat("+", "0", t, k);
                }
                self.pos += 1;
                let name = k.to_string();
                self.symbol(&name, 0)?;
                Ok(Term::constant(&name))
            }
            Tok::Ident(name) => {
                if ["exists", "true", "false"].contains(&name.as_str()) {
                    return self.err(format!("keyword `{name}` cannot start a term"));
                }
                self.pos += 1;
                if self.eat("(") {
                    let mut args = Vec::new();
                    if !self.eat(")") {
                        loop {
                            args.push(self.term()?);
                            if self.eat(")") {
                                break;
                            }
                            self.expect(",")?;
                        }
                    }
                    self.symbol(&name, args.len())?;
                    return Ok(Term::App(name, args));
                }
                match self.sig.index_of(&name) {
                    Some(i) if self.sig.arity(i) == 0 => Ok(Term::constant(&name)),
                    Some(i) => Err(Error::Arity {
                        symbol: name,
                        expected: self.sig.arity(i),
                        found: 0,
                    }),
                    None => Ok(Term::Var(name)),
                }
            }
            Tok::Punct("(") => {
                self.pos += 1;
                let t = self.term()?;
                self.expect(")")?;
                Ok(t)
            }
            // operator symbols in call position: `*(x, y)`
            Tok::Punct(op) if self.sig.index_of(op).is_some() && matches!(self.peek_at(1), Tok::Punct("(")) => {
                self.pos += 2;
                let mut args = Vec::new();
                if !self.eat(")") {
                    loop {
                        args.push(self.term()?);
                        if self.eat(")") {
                            break;
                        }
                        self.expect(",")?;
                    }
                }
                self.symbol(op, args.len())?;
                Ok(Term::App(op.to_string(), args))
            }
            _ => self.err(format!("expected a term{}", self.found())),
        }
    }
}
