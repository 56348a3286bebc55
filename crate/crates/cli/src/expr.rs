//! Rational-function expressions over named parameters, e.g. `110/t` or `-2*t*n + 1/3`.

use logconn_core::param::RatFun;
use logconn_core::rational::Q;

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Num(Q),
    Ident(String),
    Op(char),
}

fn tokenize(src: &str) -> Result<Vec<Tok>, String> {
    let chars: Vec<char> = src.chars().collect();
    let mut out = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        if c.is_whitespace() {
            i += 1;
        } else if c.is_ascii_digit() {
            let start = i;
            while i < chars.len() && chars[i].is_ascii_digit() {
                i += 1;
            }
            let s: String = chars[start..i].iter().collect();
            let q = logconn_core::rational::parse(&s).ok_or_else(|| format!("bad number {s:?}"))?;
            out.push(Tok::Num(q));
        } else if c.is_ascii_alphabetic() || c == '_' {
            let start = i;
            while i < chars.len() && (chars[i].is_ascii_alphanumeric() || chars[i] == '_') {
                i += 1;
            }
            out.push(Tok::Ident(chars[start..i].iter().collect()));
        } else if "+-*/^()".contains(c) {
            out.push(Tok::Op(c));
            i += 1;
        } else {
            return Err(format!("unexpected character {c:?} in {src:?}"));
        }
    }
    Ok(out)
}

struct Parser<'a> {
    toks: Vec<Tok>,
    pos: usize,
    names: &'a [String],
}

impl Parser<'_> {
    fn peek_op(&self) -> Option<char> {
        match self.toks.get(self.pos) {
            Some(Tok::Op(c)) => Some(*c),
            _ => None,
        }
    }

    fn nvars(&self) -> usize {
        self.names.len()
    }

    // expr := term (('+' | '-') term)*
    fn expr(&mut self) -> Result<RatFun, String> {
        let mut acc = self.term()?;
        while let Some(op @ ('+' | '-')) = self.peek_op() {
            self.pos += 1;
            let rhs = self.term()?;
            acc = if op == '+' { acc.add(&rhs) } else { acc.sub(&rhs) };
        }
        Ok(acc)
    }

    // term := unary (('*' | '/') unary)*
    fn term(&mut self) -> Result<RatFun, String> {
        let mut acc = self.unary()?;
        while let Some(op @ ('*' | '/')) = self.peek_op() {
            self.pos += 1;
            let rhs = self.unary()?;
            acc = if op == '*' { acc.mul(&rhs) } else { acc.div(&rhs).ok_or("division by zero")? };
        }
        Ok(acc)
    }

    fn unary(&mut self) -> Result<RatFun, String> {
        if self.peek_op() == Some('-') {
            self.pos += 1;
            return Ok(self.unary()?.neg());
        }
        if self.peek_op() == Some('+') {
            self.pos += 1;
        }
        self.power()
    }

    // power := atom ('^' ['-'] integer)?
    fn power(&mut self) -> Result<RatFun, String> {
        let base = self.atom()?;
        if self.peek_op() != Some('^') {
            return Ok(base);
        }
        self.pos += 1;
        let neg = self.peek_op() == Some('-');
        if neg {
            self.pos += 1;
        }
        let k = match self.toks.get(self.pos) {
            Some(Tok::Num(q)) if q.is_integer() => {
                u32::try_from(q.numer()).map_err(|_| "exponent too large".to_string())?
            }
            _ => return Err("exponent must be an integer literal".into()),
        };
        self.pos += 1;
        let mut acc = RatFun::constant(self.nvars(), Q::from_integer(1.into()));
        for _ in 0..k {
            acc = acc.mul(&base);
        }
        if neg {
            acc = RatFun::constant(self.nvars(), Q::from_integer(1.into())).div(&acc).ok_or("division by zero")?;
        }
        Ok(acc)
    }

    fn atom(&mut self) -> Result<RatFun, String> {
        let tok = self.toks.get(self.pos).cloned().ok_or("unexpected end of expression")?;
        self.pos += 1;
        match tok {
            Tok::Num(q) => Ok(RatFun::constant(self.nvars(), q)),
            Tok::Ident(name) => match self.names.iter().position(|n| *n == name) {
                Some(k) => Ok(RatFun::var(self.nvars(), k)),
                None => Err(format!("unknown parameter {name:?}")),
            },
            Tok::Op('(') => {
                let inner = self.expr()?;
                if self.peek_op() != Some(')') {
                    return Err("missing ')'".into());
                }
                self.pos += 1;
                Ok(inner)
            }
            Tok::Op(c) => Err(format!("unexpected {c:?}")),
        }
    }
}

/// Parses `src` as a rational function of the parameters `names`.
pub fn parse(src: &str, names: &[String]) -> Result<RatFun, String> {
    let mut p = Parser { toks: tokenize(src)?, pos: 0, names };
    if p.toks.is_empty() {
        return Err("empty expression".into());
    }
    let r = p.expr()?;
    if p.pos != p.toks.len() {
        return Err(format!("trailing input in {src:?}"));
    }
    if r.den.is_zero() {
        return Err("division by zero".into());
    }
    Ok(r)
}

#[cfg(test)]
mod tests {
    use super::*;
    use logconn_core::rational::{q, qi};

    fn names() -> Vec<String> {
        vec!["t".into(), "n".into()]
    }

    #[test]
    fn precedence_and_powers() {
        let f = parse("1 + 2*t^2 - n/3", &names()).unwrap();
        assert_eq!(f.eval(&[qi(2), qi(3)]), Some(qi(8)));
        let g = parse("-(t + n)^2", &names()).unwrap();
        assert_eq!(g.eval(&[qi(1), qi(2)]), Some(qi(-9)));
        let h = parse("t^-2", &names()).unwrap();
        assert_eq!(h.eval(&[qi(2), qi(0)]), Some(q(1, 4)));
    }

    #[test]
    fn rational_function_poles() {
        let f = parse("110/t", &names()).unwrap();
        assert_eq!(f.eval(&[qi(10), qi(0)]), Some(qi(11)));
        assert_eq!(f.eval(&[qi(0), qi(0)]), None);
    }

    #[test]
    fn rejects_bad_input() {
        for bad in ["", "t +", "x", "1/0", "(t", "t^n", "2 $ 3", "t t"] {
            assert!(parse(bad, &names()).is_err(), "{bad}");
        }
    }
}
