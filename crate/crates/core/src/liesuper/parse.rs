//! Reader for the `.alg` algebra-definition format.

use std::collections::HashMap;

use num_traits::{One, Zero};

use super::LieError;
use crate::scalars::{parse_rational, Rational};

#[derive(Debug, Default)]
pub(crate) struct RawAlgebra {
    pub names: Vec<String>,
    pub parity: Vec<u8>,
    /// (x, y, line, combination)
    pub brackets: Vec<(usize, usize, usize, Vec<(usize, Rational)>)>,
    pub form: Vec<(usize, usize, usize, Rational)>,
    pub osp: HashMap<String, Vec<(usize, Rational)>>,
    pub cartan: Vec<usize>,
}

fn perr(line: usize, msg: impl Into<String>) -> LieError {
    LieError::Parse { line, msg: msg.into() }
}

pub(crate) fn parse_document(text: &str) -> Result<RawAlgebra, LieError> {
    let mut raw = RawAlgebra::default();
    let mut index: HashMap<String, usize> = HashMap::new();
    let mut section = String::new();
    for (lno, line) in text.lines().enumerate() {
        let lno = lno + 1;
        let line = line.split('#').next().unwrap().trim();
        if line.is_empty() {
            continue;
        }
        if line.starts_with('[') {
            if !line.ends_with(']') {
                return Err(perr(lno, "unterminated section header"));
            }
            section = line[1..line.len() - 1].trim().to_string();
            continue;
        }
        match section.as_str() {
            "basis" => {
                let (name, par) = line
                    .split_once('=')
                    .ok_or_else(|| perr(lno, "expected name = parity"))?;
                let name = name.trim();
                check_ident(name, lno)?;
                let p = match par.trim() {
                    "even" | "0" => 0,
                    "odd" | "1" => 1,
                    other => return Err(perr(lno, format!("unknown parity '{}'", other))),
                };
                if index.insert(name.to_string(), raw.names.len()).is_some() {
                    return Err(perr(lno, format!("duplicate basis element '{}'", name)));
                }
                raw.names.push(name.to_string());
                raw.parity.push(p);
            }
            "bracket" => {
                let (lhs, rhs) = line
                    .split_once("->")
                    .ok_or_else(|| perr(lno, "expected x,y -> combination"))?;
                let (x, y) = pair(lhs, &index, lno)?;
                let comb = parse_comb(rhs, &index, lno)?;
                raw.brackets.push((x, y, lno, comb));
            }
            "form" => {
                let (lhs, rhs) = line
                    .split_once('=')
                    .ok_or_else(|| perr(lno, "expected x,y = value"))?;
                let (x, y) = pair(lhs, &index, lno)?;
                let v = parse_rational(rhs).ok_or_else(|| perr(lno, "bad rational"))?;
                raw.form.push((x, y, lno, v));
            }
            "osp" => {
                let (key, rhs) = line
                    .split_once('=')
                    .ok_or_else(|| perr(lno, "expected slot = combination"))?;
                let key = key.trim();
                if !["E", "e", "H", "f", "F"].contains(&key) {
                    return Err(perr(lno, format!("unknown osp slot '{}'", key)));
                }
                raw.osp.insert(key.to_string(), parse_comb(rhs, &index, lno)?);
            }
            "cartan" => {
                for tok in line.split(|c: char| c == ',' || c.is_whitespace()).filter(|t| !t.is_empty()) {
                    let i = *index
                        .get(tok)
                        .ok_or_else(|| perr(lno, format!("unknown basis element '{}'", tok)))?;
                    raw.cartan.push(i);
                }
            }
            "" => return Err(perr(lno, "content before the first section")),
            other => return Err(perr(lno, format!("unknown section [{}]", other))),
        }
    }
    for key in ["E", "e", "H", "f", "F"] {
        if !raw.osp.contains_key(key) {
            return Err(perr(0, format!("missing osp slot '{}'", key)));
        }
    }
    Ok(raw)
}

fn check_ident(name: &str, lno: usize) -> Result<(), LieError> {
    let mut chars = name.chars();
    let ok = chars.next().is_some_and(|c| c.is_ascii_alphabetic())
        && chars.all(|c| c.is_ascii_alphanumeric() || c == '_' || c == '\'' || c == '^');
    if ok {
        Ok(())
    } else {
        Err(perr(lno, format!("bad identifier '{}'", name)))
    }
}

fn pair(lhs: &str, index: &HashMap<String, usize>, lno: usize) -> Result<(usize, usize), LieError> {
    let (x, y) = lhs.split_once(',').ok_or_else(|| perr(lno, "expected x,y"))?;
    let look = |s: &str| {
        index
            .get(s.trim())
            .copied()
            .ok_or_else(|| perr(lno, format!("unknown basis element '{}'", s.trim())))
    };
    Ok((look(x)?, look(y)?))
}

/// "2 E - 1/2 F + h1" style combinations; a lone "0" is the empty combination.
fn parse_comb(src: &str, index: &HashMap<String, usize>, lno: usize) -> Result<Vec<(usize, Rational)>, LieError> {
    let src = src.trim();
    if src == "0" {
        return Ok(Vec::new());
    }
    let mut out: Vec<(usize, Rational)> = Vec::new();
    let bytes = src.as_bytes();
    let mut i = 0;
    let mut first = true;
    while i < bytes.len() {
        while i < bytes.len() && bytes[i].is_ascii_whitespace() {
            i += 1;
        }
        if i >= bytes.len() {
            break;
        }
        let mut sign = Rational::one();
        if bytes[i] == b'+' || bytes[i] == b'-' {
            if bytes[i] == b'-' {
                sign = -sign;
            }
            i += 1;
        } else if !first {
            return Err(perr(lno, "expected '+' or '-' between terms"));
        }
        first = false;
        while i < bytes.len() && bytes[i].is_ascii_whitespace() {
            i += 1;
        }
        let start = i;
        while i < bytes.len() && (bytes[i].is_ascii_digit() || bytes[i] == b'/') {
            i += 1;
        }
        let coeff = if start == i {
            Rational::one()
        } else {
            parse_rational(&src[start..i]).ok_or_else(|| perr(lno, "bad coefficient"))?
        };
        while i < bytes.len() && (bytes[i].is_ascii_whitespace() || bytes[i] == b'*') {
            i += 1;
        }
        let nstart = i;
        while i < bytes.len() && !bytes[i].is_ascii_whitespace() && bytes[i] != b'+' && bytes[i] != b'-' {
            i += 1;
        }
        let name = &src[nstart..i];
        let k = *index
            .get(name)
            .ok_or_else(|| perr(lno, format!("unknown basis element '{}'", name)))?;
        let c = sign * coeff;
        if let Some(slot) = out.iter_mut().find(|(j, _)| *j == k) {
            slot.1 += c;
        } else {
            out.push((k, c));
        }
    }
    out.retain(|(_, c)| !c.is_zero());
    Ok(out)
}
