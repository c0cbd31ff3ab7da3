//! Recursive-descent reader for scalar expressions in v, e.g. "(2*v^2+3)/(v-1)".

use num_bigint::BigInt;

use super::{RatFunc, ScalarError};

pub fn parse_ratfunc(src: &str) -> Result<RatFunc, ScalarError> {
    let mut p = ScalarParser { s: src.as_bytes(), pos: 0 };
    let v = p.expr()?;
    p.ws();
    if p.pos != p.s.len() {
        return Err(p.err("unexpected trailing input"));
    }
    Ok(v)
}

pub(crate) struct ScalarParser<'a> {
    pub s: &'a [u8],
    pub pos: usize,
}

impl<'a> ScalarParser<'a> {
    pub fn err(&self, msg: &str) -> ScalarError {
        ScalarError::Parse { pos: self.pos, msg: msg.to_string() }
    }

    pub fn ws(&mut self) {
        while self.pos < self.s.len() && self.s[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    pub fn peek(&mut self) -> Option<u8> {
        self.ws();
        self.s.get(self.pos).copied()
    }

    pub fn expr(&mut self) -> Result<RatFunc, ScalarError> {
        let mut acc = self.term()?;
        loop {
            match self.peek() {
                Some(b'+') => {
                    self.pos += 1;
                    acc = acc + self.term()?;
                }
                Some(b'-') => {
                    self.pos += 1;
                    acc = acc - self.term()?;
                }
                _ => return Ok(acc),
            }
        }
    }

    fn term(&mut self) -> Result<RatFunc, ScalarError> {
        let mut acc = self.factor()?;
        loop {
            match self.peek() {
                Some(b'*') => {
                    self.pos += 1;
                    acc = acc * self.factor()?;
                }
                Some(b'/') => {
                    self.pos += 1;
                    let at = self.pos;
                    let d = self.factor()?;
                    acc = acc
                        .checked_div(&d)
                        .map_err(|_| ScalarError::Parse { pos: at, msg: "division by zero".into() })?;
                }
                _ => return Ok(acc),
            }
        }
    }

    pub fn factor(&mut self) -> Result<RatFunc, ScalarError> {
        match self.peek() {
            Some(b'-') => {
                self.pos += 1;
                Ok(-self.factor()?)
            }
            Some(b'+') => {
                self.pos += 1;
                self.factor()
            }
            _ => {
                let base = self.atom()?;
                if self.peek() == Some(b'^') {
                    self.pos += 1;
                    let e = self.uint()?;
                    let e = u32::try_from(e).map_err(|_| self.err("exponent too large"))?;
                    Ok(base.pow(e))
                } else {
                    Ok(base)
                }
            }
        }
    }

    fn atom(&mut self) -> Result<RatFunc, ScalarError> {
        match self.peek() {
            Some(b'(') => {
                self.pos += 1;
                let v = self.expr()?;
                if self.peek() != Some(b')') {
                    return Err(self.err("expected ')'"));
                }
                self.pos += 1;
                Ok(v)
            }
            Some(b'v') => {
                self.pos += 1;
                Ok(RatFunc::nu())
            }
            Some(c) if c.is_ascii_digit() => {
                let n = self.uint()?;
                Ok(RatFunc::from_rational(n.into()))
            }
            _ => Err(self.err("expected a number, 'v' or '('")),
        }
    }

    pub fn uint(&mut self) -> Result<BigInt, ScalarError> {
        self.ws();
        let start = self.pos;
        while self.pos < self.s.len() && self.s[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(self.err("expected digits"));
        }
        let txt = std::str::from_utf8(&self.s[start..self.pos]).unwrap();
        Ok(txt.parse().unwrap())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reads_canonical_forms() {
        for t in ["0", "1/6", "(v+1)/2", "(2*v^2-3)/2", "(2*v^2+3)/(v-1)", "-v", "3/(2*v)", "-1/v^2"] {
            assert_eq!(parse_ratfunc(t).unwrap().to_text(), t);
        }
    }

    #[test]
    fn position_of_error() {
        match parse_ratfunc("2*(v+") {
            Err(ScalarError::Parse { pos, .. }) => assert_eq!(pos, 5),
            other => panic!("{:?}", other),
        }
    }
}
