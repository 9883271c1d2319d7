//! Text form of a recurrence:
//!
//! ```text
//! recurrence := "T(n)" "=" [number] "T(n/" number ")" "+" expr ";" "base(" scale ")" "=" expr
//! scale      := "M" | "sqrtM" | "sqrt(M)" | number
//! expr       := term ("+" term)*
//! term       := factor (("*" | "/" | "·")? factor)*
//! factor     := atom ["^" power]
//! atom       := number | "n" | "M" | "B" | "sqrtM" | "sqrt(M)" | "(" term ")"
//!             | "log(n)" | "log_{M/B}(n)" | "log(n/M)" | "log(n/sqrtM)"
//! power      := ["-"] number | "(" ["-"] number "/" number ")"
//! ```
//!
//! Whitespace is ignored. Errors carry the 1-based column of the offending
//! character.

use super::expr::{CostExpr, LogKind, Monomial};
use super::{BaseScale, RecurrenceSpec};
use crate::error::{Error, Result};

struct Parser<'a> {
    chars: Vec<(usize, char)>,
    pos: usize,
    src: &'a str,
}

impl<'a> Parser<'a> {
    fn new(src: &'a str) -> Self {
        let chars = src.chars().enumerate().filter(|(_, c)| !c.is_whitespace()).collect();
        Parser { chars, pos: 0, src }
    }

    fn column(&self) -> usize {
        self.chars.get(self.pos).map_or(self.src.chars().count() + 1, |&(i, _)| i + 1)
    }

    fn err<T>(&self, msg: impl Into<String>) -> Result<T> {
        Err(Error::Parse { pos: self.column(), msg: msg.into() })
    }

    fn peek(&self) -> Option<char> {
        self.chars.get(self.pos).map(|&(_, c)| c)
    }

    fn rest_starts_with(&self, s: &str) -> bool {
        let mut i = self.pos;
        for c in s.chars() {
            match self.chars.get(i) {
                Some(&(_, d)) if d == c => i += 1,
                _ => return false,
            }
        }
        true
    }

    fn eat(&mut self, s: &str) -> bool {
        if self.rest_starts_with(s) {
            self.pos += s.chars().count();
            true
        } else {
            false
        }
    }

    fn expect(&mut self, s: &str) -> Result<()> {
        if self.eat(s) {
            Ok(())
        } else {
            self.err(format!("expected `{s}`"))
        }
    }

    fn number(&mut self) -> Result<f64> {
        let start = self.pos;
        while matches!(self.peek(), Some(c) if c.is_ascii_digit() || c == '.') {
            self.pos += 1;
        }
        if start == self.pos {
            return self.err("expected a number");
        }
        let text: String = self.chars[start..self.pos].iter().map(|&(_, c)| c).collect();
        text.parse().or_else(|_| {
            self.pos = start;
            self.err(format!("bad number `{text}`"))
        })
    }

    fn power(&mut self) -> Result<f64> {
        if self.eat("(") {
            let neg = self.eat("-");
            let a = self.number()?;
            let v = if self.eat("/") { a / self.number()? } else { a };
            self.expect(")")?;
            Ok(if neg { -v } else { v })
        } else {
            let neg = self.eat("-");
            let v = self.number()?;
            Ok(if neg { -v } else { v })
        }
    }

    fn atom(&mut self) -> Result<Monomial> {
        const LOGS: [(&str, LogKind); 4] = [
            ("log(n)", LogKind::N),
            ("log_{M/B}(n)", LogKind::NBaseMB),
            ("log(n/M)", LogKind::NOverM),
            ("log(n/sqrtM)", LogKind::NOverSqrtM),
        ];
        for (text, kind) in LOGS {
            if self.eat(text) {
                return Ok(Monomial::constant(1.0).with_log(kind, 1));
            }
        }
        if self.eat("sqrtM") || self.eat("sqrt(M)") || self.eat("√M") {
            return Ok(Monomial::new(1.0, 0.0, 0.5, 0.0));
        }
        match self.peek() {
            Some('n') => {
                self.pos += 1;
                Ok(Monomial::new(1.0, 1.0, 0.0, 0.0))
            }
            Some('M') => {
                self.pos += 1;
                Ok(Monomial::new(1.0, 0.0, 1.0, 0.0))
            }
            Some('B') => {
                self.pos += 1;
                Ok(Monomial::new(1.0, 0.0, 0.0, 1.0))
            }
            Some('(') => {
                self.pos += 1;
                let t = self.term()?;
                self.expect(")")?;
                Ok(t)
            }
            Some(c) if c.is_ascii_digit() => Ok(Monomial::constant(self.number()?)),
            Some(c) => self.err(format!("unexpected `{c}`")),
            None => self.err("unexpected end of input"),
        }
    }

    fn factor(&mut self) -> Result<Monomial> {
        let a = self.atom()?;
        if self.eat("^") {
            let p = self.power()?;
            Ok(a.pow(p))
        } else {
            Ok(a)
        }
    }

    fn term(&mut self) -> Result<Monomial> {
        let mut acc = self.factor()?;
        loop {
            if self.eat("/") {
                let d = self.factor()?;
                if d.has_logs() {
                    return self.err("log factors cannot appear in a denominator");
                }
                acc = acc.mul(&d.pow(-1.0));
            } else if self.eat("*") || self.eat("·") {
                acc = acc.mul(&self.factor()?);
            } else if matches!(self.peek(), Some(c) if c == 'n' || c == 'M' || c == 'B' || c == '(' || c == 'l' || c == 's' || c == '√')
            {
                acc = acc.mul(&self.factor()?);
            } else {
                return Ok(acc);
            }
        }
    }

    fn expr(&mut self) -> Result<CostExpr> {
        let mut terms = vec![self.term()?];
        while self.eat("+") {
            terms.push(self.term()?);
        }
        Ok(CostExpr::new(terms))
    }

    fn scale(&mut self) -> Result<BaseScale> {
        if self.eat("sqrtM") || self.eat("sqrt(M)") || self.eat("√M") {
            Ok(BaseScale::SqrtM)
        } else if self.eat("M") {
            Ok(BaseScale::M)
        } else {
            let c = self.number()?;
            if c < 1.0 {
                return self.err("constant base size must be at least 1");
            }
            Ok(BaseScale::Const(c))
        }
    }

    fn recurrence(&mut self) -> Result<RecurrenceSpec> {
        self.expect("T(n)")?;
        self.expect("=")?;
        let alpha = if matches!(self.peek(), Some(c) if c.is_ascii_digit()) { self.number()? } else { 1.0 };
        self.eat("*");
        self.expect("T(n/")?;
        let beta_col = self.column();
        let beta = self.number()?;
        self.expect(")")?;
        self.expect("+")?;
        let f = self.expr()?;
        self.expect(";")?;
        self.expect("base(")?;
        let base = self.scale()?;
        self.expect(")")?;
        self.expect("=")?;
        let base_cost = self.expr()?;
        if self.pos != self.chars.len() {
            return self.err("trailing input");
        }
        if beta <= 1.0 {
            return Err(Error::Parse { pos: beta_col, msg: "β must exceed 1".into() });
        }
        if alpha < 1.0 {
            return Err(Error::Parse { pos: 1, msg: "α must be at least 1".into() });
        }
        RecurrenceSpec::new(alpha, beta, f, base, base_cost)
    }
}

pub fn parse_recurrence(src: &str) -> Result<RecurrenceSpec> {
    Parser::new(src).recurrence()
}

/// Parse a standalone cost expression such as `n^2/(M*B) + n/B`.
pub fn parse_cost(src: &str) -> Result<CostExpr> {
    let mut p = Parser::new(src);
    let e = p.expr()?;
    if p.pos != p.chars.len() {
        return p.err("trailing input");
    }
    Ok(e)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::recurrence::classify;

    #[test]
    fn mm_text() {
        let s = parse_recurrence("T(n)=8T(n/2)+n^2/B; base(sqrtM)=M/B").unwrap();
        assert_eq!(s.alpha, 8.0);
        assert_eq!(s.base, BaseScale::SqrtM);
        assert_eq!(s.f.to_string(), "n^2/B");
    }

    #[test]
    fn ov_text() {
        let s = parse_recurrence("T(n) = 4T(n/2) + n/B; base(M) = M/B").unwrap();
        let r = classify(&s).unwrap();
        assert_eq!(r.to_string(), "Case 1, Θ(n^2/(M·B) + n/B)");
    }

    #[test]
    fn compound_terms() {
        let e = parse_cost("n^2/(M*B) + 3n log(n) + n^(1/2)").unwrap();
        assert_eq!(e.terms().len(), 3);
    }

    #[test]
    fn errors_have_positions() {
        match parse_recurrence("T(n)=8T(n/2)+n^2/Q; base(M)=M/B") {
            Err(Error::Parse { pos, .. }) => assert_eq!(pos, 18),
            other => panic!("{other:?}"),
        }
        match parse_recurrence("T(n)=2T(n/1)+n/B; base(M)=M/B") {
            Err(Error::Parse { pos, .. }) => assert_eq!(pos, 11),
            other => panic!("{other:?}"),
        }
        assert!(parse_recurrence("T(n)=2T(n/2)+n/B").is_err());
    }
}
