//! Algebra-term grammar used for differential entries.
//!
//! ```text
//! expr   := term (('+' | '-') term)*
//! term   := ['-'] factor ('*' factor)*
//! factor := atom ['^' int]
//! atom   := int ['/' int] | 'x' int | 'psi' int | 's' int
//!         | 'e(' int (',' int)* ')' | '[' int (',' int)* ']' | '(' expr ')'
//! ```
//!
//! Indices of `x`, `psi` and `s` are 1-based strand positions; `e(...)` lists vertex labels
//! (0-based); `[...]` is a permutation in 1-based one-line notation.

use num_bigint::BigInt;

use crate::error::{Error, Result};
use crate::linalg::Q;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Term {
    Num(Q),
    X(usize),
    Psi(usize),
    S(usize),
    E(Vec<usize>),
    Perm(Vec<usize>),
    Sum(Vec<Term>),
    Product(Vec<Term>),
    Neg(Box<Term>),
    Pow(Box<Term>, u32),
}

pub fn parse_term(input: &str) -> Result<Term> {
    let chars: Vec<char> = input.chars().filter(|c| !c.is_whitespace()).collect();
    let mut p = Parser {
        chars: &chars,
        pos: 0,
        input,
    };
    if chars.is_empty() {
        return Err(p.err("empty expression"));
    }
    let t = p.expr()?;
    if p.pos != chars.len() {
        return Err(p.err("trailing input"));
    }
    Ok(t)
}

struct Parser<'a> {
    chars: &'a [char],
    pos: usize,
    input: &'a str,
}

impl Parser<'_> {
    fn err(&self, what: &str) -> Error {
        Error::Term(format!("{what} at offset {} in `{}`", self.pos, self.input))
    }

    fn peek(&self) -> Option<char> {
        self.chars.get(self.pos).copied()
    }

    fn eat(&mut self, c: char) -> bool {
        if self.peek() == Some(c) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expect(&mut self, c: char) -> Result<()> {
        if self.eat(c) {
            Ok(())
        } else {
            Err(self.err(&format!("expected `{c}`")))
        }
    }

    fn expr(&mut self) -> Result<Term> {
        let mut terms = vec![self.term()?];
        loop {
            if self.eat('+') {
                terms.push(self.term()?);
            } else if self.eat('-') {
                terms.push(Term::Neg(Box::new(self.term()?)));
            } else {
                break;
            }
        }
        Ok(if terms.len() == 1 { terms.pop().unwrap() } else { Term::Sum(terms) })
    }

    fn term(&mut self) -> Result<Term> {
        if self.eat('-') {
            return Ok(Term::Neg(Box::new(self.term()?)));
        }
        let mut factors = vec![self.factor()?];
        while self.eat('*') {
            factors.push(self.factor()?);
        }
        Ok(if factors.len() == 1 { factors.pop().unwrap() } else { Term::Product(factors) })
    }

    fn factor(&mut self) -> Result<Term> {
        let a = self.atom()?;
        if self.eat('^') {
            let k = self.int()?;
            let k = u32::try_from(k).map_err(|_| self.err("exponent too large"))?;
            return Ok(Term::Pow(Box::new(a), k));
        }
        Ok(a)
    }

    fn atom(&mut self) -> Result<Term> {
        match self.peek() {
            Some(c) if c.is_ascii_digit() => {
                let num = self.bigint()?;
                if self.eat('/') {
                    let den = self.bigint()?;
                    if den == BigInt::from(0) {
                        return Err(self.err("zero denominator"));
                    }
                    return Ok(Term::Num(Q::new(num, den)));
                }
                Ok(Term::Num(Q::from_integer(num)))
            }
            Some('(') => {
                self.pos += 1;
                let e = self.expr()?;
                self.expect(')')?;
                Ok(e)
            }
            Some('[') => {
                self.pos += 1;
                let list = self.list(']')?;
                Ok(Term::Perm(list))
            }
            Some(c) if c.is_ascii_alphabetic() => {
                let start = self.pos;
                while self.peek().is_some_and(|c| c.is_ascii_alphabetic()) {
                    self.pos += 1;
                }
                let name: String = self.chars[start..self.pos].iter().collect();
                match name.as_str() {
                    "x" => Ok(Term::X(self.index()?)),
                    "psi" => Ok(Term::Psi(self.index()?)),
                    "s" => Ok(Term::S(self.index()?)),
                    "e" => {
                        self.expect('(')?;
                        Ok(Term::E(self.list(')')?))
                    }
                    _ => {
                        self.pos = start;
                        Err(self.err(&format!("unknown symbol `{name}`")))
                    }
                }
            }
            _ => Err(self.err("expected an atom")),
        }
    }

    fn index(&mut self) -> Result<usize> {
        let k = self.int()?;
        if k == 0 {
            return Err(self.err("indices start at 1"));
        }
        Ok(k)
    }

    fn list(&mut self, close: char) -> Result<Vec<usize>> {
        let mut out = Vec::new();
        if self.eat(close) {
            return Ok(out);
        }
        loop {
            out.push(self.int()?);
            if self.eat(close) {
                return Ok(out);
            }
            self.expect(',')?;
        }
    }

    fn digits(&mut self) -> Result<String> {
        let start = self.pos;
        while self.peek().is_some_and(|c| c.is_ascii_digit()) {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(self.err("expected a number"));
        }
        Ok(self.chars[start..self.pos].iter().collect())
    }

    fn int(&mut self) -> Result<usize> {
        let s = self.digits()?;
        s.parse().map_err(|_| self.err("number too large"))
    }

    fn bigint(&mut self) -> Result<BigInt> {
        let s = self.digits()?;
        s.parse().map_err(|_| self.err("malformed number"))
    }
}

/// Evaluates a term through the supplied atom interpretation and ring operations.
pub(crate) fn fold<T: Clone>(
    t: &Term,
    atom: &dyn Fn(&Term) -> Result<T>,
    one: &T,
    add: &dyn Fn(&T, &T) -> T,
    mul: &dyn Fn(&T, &T) -> T,
    scale: &dyn Fn(&T, &Q) -> T,
) -> Result<T> {
    let rec = |t: &Term| fold(t, atom, one, add, mul, scale);
    match t {
        Term::Num(c) => Ok(scale(one, c)),
        Term::Sum(ts) => {
            let mut acc = rec(&ts[0])?;
            for t in &ts[1..] {
                acc = add(&acc, &rec(t)?);
            }
            Ok(acc)
        }
        Term::Product(ts) => {
            let mut acc = rec(&ts[0])?;
            for t in &ts[1..] {
                acc = mul(&acc, &rec(t)?);
            }
            Ok(acc)
        }
        Term::Neg(t) => Ok(scale(&rec(t)?, &Q::from_integer(BigInt::from(-1)))),
        Term::Pow(t, k) => {
            let base = rec(t)?;
            let mut acc = one.clone();
            for _ in 0..*k {
                acc = mul(&acc, &base);
            }
            Ok(acc)
        }
        other => atom(other),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::q;

    #[test]
    fn parses_products_and_sums() {
        let t = parse_term("2*psi1*x2^2*e(0,1) - 1/2").unwrap();
        assert_eq!(
            t,
            Term::Sum(vec![
                Term::Product(vec![
                    Term::Num(q(2)),
                    Term::Psi(1),
                    Term::Pow(Box::new(Term::X(2)), 2),
                    Term::E(vec![0, 1]),
                ]),
                Term::Neg(Box::new(Term::Num(Q::new(1.into(), 2.into())))),
            ])
        );
        assert_eq!(parse_term(" [2, 1] ").unwrap(), Term::Perm(vec![2, 1]));
        assert_eq!(parse_term("-(s1)").unwrap(), Term::Neg(Box::new(Term::S(1))));
    }

    #[test]
    fn rejects_garbage() {
        for bad in ["", "x0", "y1", "x1 +", "e(0", "1/0", "(x1", "x1 x2", "2^"] {
            assert!(parse_term(bad).is_err(), "{bad}");
        }
    }
}
