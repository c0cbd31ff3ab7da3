//! Canonical text: `G`, `D(G)`, `d(x)` for ∂, `:a b c:` for right-nested products, `|0>`.
//! Λ-brackets print with `l` for λ and `x` for χ.

use num_traits::Signed;

use super::engine::Algebra;
use super::lambda::LambdaPoly;
use super::state::{Atom, Monomial, State};
use super::VaError;
use crate::scalars::RatFunc;

pub fn atom_text(alg: &Algebra, a: &Atom) -> String {
    let mut s = alg.generators()[a.gen as usize].name.clone();
    if a.d == 1 {
        s = format!("D({})", s);
    }
    for _ in 0..a.p {
        s = format!("d({})", s);
    }
    s
}

pub fn monomial_text(alg: &Algebra, m: &Monomial) -> String {
    match m.atoms() {
        [] => "|0>".to_string(),
        [a] => atom_text(alg, a),
        atoms => {
            let parts: Vec<String> = atoms.iter().map(|a| atom_text(alg, a)).collect();
            format!(":{}:", parts.join(" "))
        }
    }
}

/// Splits a coefficient into (negative, text of the absolute value or None for 1).
pub(crate) fn coeff_parts(c: &RatFunc) -> (bool, Option<String>) {
    if let Some(r) = c.as_rational() {
        let a = r.abs();
        let neg = r.is_negative();
        if a == num_traits::One::one() {
            return (neg, None);
        }
        let t = a.to_string();
        return (neg, Some(if t.contains('/') { format!("({})", t) } else { t }));
    }
    if c.is_compound() {
        return (false, Some(format!("({})", c.to_text())));
    }
    let t = c.to_text();
    match t.strip_prefix('-') {
        Some(rest) => (true, Some(rest.to_string())),
        None => (false, Some(t)),
    }
}

pub(crate) fn join_terms(terms: Vec<(bool, String)>) -> String {
    if terms.is_empty() {
        return "0".to_string();
    }
    let mut s = String::new();
    for (i, (neg, body)) in terms.into_iter().enumerate() {
        match (i, neg) {
            (0, true) => s.push('-'),
            (0, false) => {}
            (_, true) => s.push_str(" - "),
            (_, false) => s.push_str(" + "),
        }
        s.push_str(&body);
    }
    s
}

pub fn state_text(alg: &Algebra, s: &State) -> String {
    let terms = s
        .terms()
        .map(|(m, c)| {
            let (neg, ct) = coeff_parts(c);
            let mt = monomial_text(alg, m);
            let body = match ct {
                None => mt,
                Some(ct) => format!("{} {}", ct, mt),
            };
            (neg, body)
        })
        .collect();
    join_terms(terms)
}

fn lambda_factor(n: usize, chi: bool) -> Vec<String> {
    let mut f = Vec::new();
    match n {
        0 => {}
        1 => f.push("l".to_string()),
        _ => f.push(format!("l^{}", n)),
    }
    if chi {
        f.push("x".to_string());
    }
    f
}

fn lambda_term(alg: &Algebra, n: usize, chi: bool, m: &Monomial, c: &RatFunc) -> (bool, String) {
    let (neg, ct) = coeff_parts(c);
    let lf = lambda_factor(n, chi);
    if lf.is_empty() {
        let body = match (ct, m.is_empty()) {
            (None, true) => "1".to_string(),
            (None, false) => monomial_text(alg, m),
            (Some(ct), true) => ct,
            (Some(ct), false) => format!("{} {}", ct, monomial_text(alg, m)),
        };
        return (neg, body);
    }
    let mut parts: Vec<String> = Vec::new();
    if let Some(ct) = ct {
        parts.push(ct);
    }
    parts.extend(lf);
    if !m.is_empty() {
        parts.push(monomial_text(alg, m));
    }
    (neg, parts.join("*"))
}

pub fn lambda_text(alg: &Algebra, lp: &LambdaPoly) -> String {
    let mut main = Vec::new();
    let mut central = Vec::new();
    for (n, chi, s) in lp.entries() {
        for (m, c) in s.terms() {
            let t = lambda_term(alg, n, chi, m, c);
            if m.is_empty() {
                central.push(t);
            } else {
                main.push(t);
            }
        }
    }
    if main.is_empty() || central.is_empty() {
        main.extend(central);
        return join_terms(main);
    }
    let head = format!("({})", join_terms(main));
    let mut out = vec![(false, head)];
    out.extend(central);
    join_terms(out)
}

// ---- parser ----

enum Val {
    Scalar(RatFunc),
    State(State),
}

impl Val {
    fn into_state(self) -> State {
        match self {
            Val::Scalar(c) => State::constant(c),
            Val::State(s) => s,
        }
    }
}

struct Parser<'a> {
    alg: &'a Algebra,
    s: &'a [u8],
    pos: usize,
}

fn is_ident_start(c: u8) -> bool {
    c.is_ascii_alphabetic()
}

fn is_ident_char(c: u8) -> bool {
    c.is_ascii_alphanumeric() || c == b'_' || c == b'^' || c == b'\''
}

impl<'a> Parser<'a> {
    fn err(&self, msg: impl Into<String>) -> VaError {
        VaError::Parse { pos: self.pos, msg: msg.into() }
    }

    fn ws(&mut self) {
        while self.pos < self.s.len() && self.s[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.ws();
        self.s.get(self.pos).copied()
    }

    fn expect(&mut self, c: u8) -> Result<(), VaError> {
        if self.peek() == Some(c) {
            self.pos += 1;
            Ok(())
        } else {
            Err(self.err(format!("expected '{}'", c as char)))
        }
    }

    fn add(&self, a: Val, b: Val, sub: bool) -> Val {
        match (a, b) {
            (Val::Scalar(x), Val::Scalar(y)) => Val::Scalar(if sub { x - y } else { x + y }),
            (a, b) => {
                let (x, y) = (a.into_state(), b.into_state());
                Val::State(if sub { x - y } else { x + y })
            }
        }
    }

    fn mul(&self, a: Val, b: Val, at: usize) -> Result<Val, VaError> {
        Ok(match (a, b) {
            (Val::Scalar(x), Val::Scalar(y)) => Val::Scalar(x * y),
            (Val::Scalar(x), Val::State(s)) | (Val::State(s), Val::Scalar(x)) => Val::State(s.scale(&x)),
            (Val::State(_), Val::State(_)) => {
                return Err(VaError::Parse { pos: at, msg: "products of states need :..:".into() })
            }
        })
    }

    fn expr(&mut self) -> Result<Val, VaError> {
        let mut acc = match self.peek() {
            Some(b'-') => {
                self.pos += 1;
                let t = self.term()?;
                self.mul(Val::Scalar(-RatFunc::one()), t, self.pos)?
            }
            Some(b'+') => {
                self.pos += 1;
                self.term()?
            }
            _ => self.term()?,
        };
        loop {
            match self.peek() {
                Some(b'+') => {
                    self.pos += 1;
                    let t = self.term()?;
                    acc = self.add(acc, t, false);
                }
                Some(b'-') => {
                    self.pos += 1;
                    let t = self.term()?;
                    acc = self.add(acc, t, true);
                }
                _ => return Ok(acc),
            }
        }
    }

    fn starts_primary(c: u8) -> bool {
        c.is_ascii_alphanumeric() || c == b'(' || c == b':' || c == b'|'
    }

    fn term(&mut self) -> Result<Val, VaError> {
        let mut acc = self.power()?;
        loop {
            let at = self.pos;
            match self.peek() {
                Some(b'*') => {
                    self.pos += 1;
                    let f = self.power()?;
                    acc = self.mul(acc, f, at)?;
                }
                Some(b'/') => {
                    self.pos += 1;
                    let at = self.pos;
                    match self.power()? {
                        Val::Scalar(d) => {
                            let inv = d.inv().map_err(|_| VaError::Parse { pos: at, msg: "division by zero".into() })?;
                            acc = self.mul(acc, Val::Scalar(inv), at)?;
                        }
                        Val::State(_) => return Err(VaError::Parse { pos: at, msg: "division by a state".into() }),
                    }
                }
                Some(c) if Self::starts_primary(c) => {
                    let f = self.power()?;
                    acc = self.mul(acc, f, at)?;
                }
                _ => return Ok(acc),
            }
        }
    }

    fn power(&mut self) -> Result<Val, VaError> {
        let base = self.primary()?;
        if self.peek() == Some(b'^') {
            let at = self.pos;
            self.pos += 1;
            let e = self.uint()?;
            return match base {
                Val::Scalar(c) => Ok(Val::Scalar(c.pow(e as u32))),
                Val::State(_) => Err(VaError::Parse { pos: at, msg: "power of a state".into() }),
            };
        }
        Ok(base)
    }

    fn uint(&mut self) -> Result<u64, VaError> {
        self.ws();
        let start = self.pos;
        while self.pos < self.s.len() && self.s[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(self.err("expected digits"));
        }
        let t = std::str::from_utf8(&self.s[start..self.pos]).unwrap();
        t.parse().map_err(|_| VaError::Parse { pos: start, msg: "number too large".into() })
    }

    fn primary(&mut self) -> Result<Val, VaError> {
        let Some(c) = self.peek() else {
            return Err(self.err("unexpected end of input"));
        };
        match c {
            b'(' => {
                self.pos += 1;
                let v = self.expr()?;
                self.expect(b')')?;
                Ok(v)
            }
            b'|' => {
                if self.s[self.pos..].starts_with(b"|0>") {
                    self.pos += 3;
                    Ok(Val::State(State::vacuum()))
                } else {
                    Err(self.err("expected '|0>'"))
                }
            }
            b':' => {
                self.pos += 1;
                let mut items = Vec::new();
                loop {
                    self.ws();
                    match self.s.get(self.pos).copied() {
                        None => return Err(self.err("unterminated ':'")),
                        Some(b':') => {
                            let next = self.s.get(self.pos + 1).copied();
                            if next.is_some_and(|n| n.is_ascii_alphanumeric() || n == b'(' || n == b'|') {
                                items.push(self.power()?.into_state());
                            } else {
                                self.pos += 1;
                                break;
                            }
                        }
                        Some(_) => items.push(self.power()?.into_state()),
                    }
                }
                if items.is_empty() {
                    return Err(self.err("empty product"));
                }
                Ok(Val::State(self.alg.product(&items)))
            }
            c if c.is_ascii_digit() => Ok(Val::Scalar(RatFunc::from_rational(crate::scalars::Rational::from_integer(self.uint()?.into())))),
            c if is_ident_start(c) => {
                let start = self.pos;
                while self.pos < self.s.len() && is_ident_char(self.s[self.pos]) {
                    self.pos += 1;
                }
                let mut name = std::str::from_utf8(&self.s[start..self.pos]).unwrap();
                if name.len() > 2 && name.starts_with("v^") && name[2..].bytes().all(|b| b.is_ascii_digit()) {
                    self.pos = start + 1;
                    name = "v";
                }
                if (name == "D" || name == "d") && self.peek() == Some(b'(') {
                    self.pos += 1;
                    let inner = self.expr()?.into_state();
                    self.expect(b')')?;
                    return Ok(Val::State(if name == "D" {
                        self.alg.apply_d(&inner)
                    } else {
                        self.alg.apply_partial(&inner)
                    }));
                }
                if name == "v" {
                    return Ok(Val::Scalar(RatFunc::nu()));
                }
                self.alg
                    .gen_by_name(name)
                    .map(Val::State)
                    .map_err(|_| VaError::Parse { pos: start, msg: format!("unknown generator '{}'", name) })
            }
            _ => Err(self.err(format!("unexpected '{}'", c as char))),
        }
    }
}

/// Parses an expression in the canonical text format into a canonical state.
pub fn parse_state(alg: &Algebra, text: &str) -> Result<State, VaError> {
    let mut p = Parser { alg, s: text.as_bytes(), pos: 0 };
    let v = p.expr()?;
    p.ws();
    if p.pos != p.s.len() {
        return Err(p.err("unexpected trailing input"));
    }
    Ok(v.into_state())
}
