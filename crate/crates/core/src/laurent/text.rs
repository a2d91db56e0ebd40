use std::str::FromStr;

use malachite::num::basic::traits::One;
use malachite::Integer;

use super::{LaurentError, LaurentPoly};

fn render_monomial(e: &[i64], prefix: char) -> String {
    let mut parts = Vec::new();
    for (i, &k) in e.iter().enumerate() {
        match k {
            0 => {}
            1 => parts.push(format!("{prefix}{}", i + 1)),
            _ => parts.push(format!("{prefix}{}^{k}", i + 1)),
        }
    }
    parts.join("*")
}

pub(super) fn render(p: &LaurentPoly, prefix: char) -> String {
    if p.is_zero() {
        return "0".to_string();
    }
    let mut out = String::new();
    for (i, (e, c)) in p.terms().enumerate() {
        let mono = render_monomial(e, prefix);
        let term = if mono.is_empty() {
            c.to_string()
        } else if *c == 1 {
            mono
        } else if *c == -1 {
            format!("-{mono}")
        } else {
            format!("{c}*{mono}")
        };
        if i == 0 {
            out.push_str(&term);
        } else if let Some(rest) = term.strip_prefix('-') {
            out.push_str(" - ");
            out.push_str(rest);
        } else {
            out.push_str(" + ");
            out.push_str(&term);
        }
    }
    out
}

struct Parser<'a> {
    s: &'a [u8],
    pos: usize,
    nvars: usize,
}

impl Parser<'_> {
    fn err(&self, msg: &str) -> LaurentError {
        LaurentError::Parse {
            pos: self.pos,
            msg: msg.to_string(),
        }
    }

    fn skip_ws(&mut self) {
        while self.pos < self.s.len() && self.s[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.s.get(self.pos).copied()
    }

    fn digits(&mut self) -> Result<&str, LaurentError> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.s.len() && self.s[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(self.err("expected digits"));
        }
        Ok(std::str::from_utf8(&self.s[start..self.pos]).unwrap())
    }

    fn signed_int(&mut self) -> Result<i64, LaurentError> {
        let neg = if self.peek() == Some(b'-') {
            self.pos += 1;
            true
        } else {
            false
        };
        let d = self.digits()?;
        let v: i64 = d.parse().map_err(|_| self.err("exponent out of range"))?;
        Ok(if neg { -v } else { v })
    }

    fn term(&mut self) -> Result<(Vec<i64>, Integer), LaurentError> {
        let mut coeff = Integer::ONE;
        let mut exps = vec![0i64; self.nvars];
        loop {
            match self.peek() {
                Some(c) if c.is_ascii_digit() => {
                    let d = self.digits()?;
                    coeff *= Integer::from_str(d).map_err(|_| self.err("bad integer"))?;
                }
                Some(c) if c.is_ascii_alphabetic() => {
                    self.pos += 1;
                    let d = self.digits()?;
                    let idx: usize = d.parse().map_err(|_| self.err("bad variable index"))?;
                    if idx == 0 || idx > self.nvars {
                        return Err(self.err("variable index out of range"));
                    }
                    let k = if self.peek() == Some(b'^') {
                        self.pos += 1;
                        self.signed_int()?
                    } else {
                        1
                    };
                    exps[idx - 1] += k;
                }
                _ => return Err(self.err("expected a factor")),
            }
            if self.peek() == Some(b'*') {
                self.pos += 1;
            } else {
                return Ok((exps, coeff));
            }
        }
    }
}

pub(super) fn parse(s: &str, nvars: usize) -> Result<LaurentPoly, LaurentError> {
    let mut p = Parser {
        s: s.as_bytes(),
        pos: 0,
        nvars,
    };
    let mut terms = Vec::new();
    let mut negate = false;
    if p.peek() == Some(b'-') {
        p.pos += 1;
        negate = true;
    }
    loop {
        let (e, c) = p.term()?;
        terms.push((e, if negate { -c } else { c }));
        match p.peek() {
            None => break,
            Some(b'+') => negate = false,
            Some(b'-') => negate = true,
            Some(_) => return Err(p.err("expected '+' or '-'")),
        }
        p.pos += 1;
    }
    Ok(LaurentPoly::from_terms(nvars, terms))
}
