//! Recursive-descent parser for formulas.
//!
//! ```text
//! formula := ("sup" | "inf") ident "." formula | expr
//! expr    := term { ("+" | "-") term }
//! term    := rational [ "*" term ] | primary
//! primary := "len(" word ")" | "max(" formula {"," formula} ")"
//!          | "min(" formula {"," formula} ")" | "abs(" formula ")"
//!          | "clamp(" formula ")" | "(" formula ")" | quantified formula
//! word    := "1" | factor { "*" factor }
//! factor  := ident [ "^" ["-"] int ]
//! rational:= ["-"] number [ "/" number ]       number: digits [ "." digits ]
//! ```

use num_traits::{CheckedAdd, CheckedMul, Zero};

use crate::error::{Error, Result};
use crate::scalar::Ratio;

use super::ast::{Formula, TermWord};

const KEYWORDS: [&str; 7] = ["sup", "inf", "len", "max", "min", "abs", "clamp"];

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Ident(String),
    Num(Ratio),
    Sym(char),
    End,
}

#[derive(Debug, Clone)]
struct Token {
    tok: Tok,
    line: usize,
    col: usize,
}

fn lex(text: &str) -> Result<Vec<Token>> {
    let chars: Vec<char> = text.chars().collect();
    let mut out = Vec::new();
    let (mut line, mut col) = (1, 1);
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        let (tl, tc) = (line, col);
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
        if c.is_ascii_alphabetic() {
            let start = i;
            while i < chars.len() && (chars[i].is_ascii_alphanumeric() || chars[i] == '_') {
                i += 1;
            }
            col += i - start;
            out.push(Token { tok: Tok::Ident(chars[start..i].iter().collect()), line: tl, col: tc });
            continue;
        }
        if c.is_ascii_digit() {
            let start = i;
            while i < chars.len() && chars[i].is_ascii_digit() {
                i += 1;
            }
            let int: String = chars[start..i].iter().collect();
            let mut frac = String::new();
            if i + 1 < chars.len() && chars[i] == '.' && chars[i + 1].is_ascii_digit() {
                i += 1;
                let fs = i;
                while i < chars.len() && chars[i].is_ascii_digit() {
                    i += 1;
                }
                frac = chars[fs..i].iter().collect();
            }
            col += i - start;
            let value = decimal(&int, &frac).ok_or_else(|| Error::parse(tl, tc, "number too large"))?;
            out.push(Token { tok: Tok::Num(value), line: tl, col: tc });
            continue;
        }
        if "()*^,.+-/".contains(c) {
            out.push(Token { tok: Tok::Sym(c), line: tl, col: tc });
            i += 1;
            col += 1;
            continue;
        }
        return Err(Error::parse(tl, tc, format!("unexpected character `{c}`")));
    }
    out.push(Token { tok: Tok::End, line, col });
    Ok(out)
}

fn decimal(int: &str, frac: &str) -> Option<Ratio> {
    let ten = Ratio::from_integer(10);
    let mut v = Ratio::zero();
    for d in int.chars() {
        v = v.checked_mul(&ten)?.checked_add(&Ratio::from_integer(d.to_digit(10)? as i64))?;
    }
    let mut scale = Ratio::from_integer(1);
    for d in frac.chars() {
        scale = scale.checked_mul(&Ratio::new(1, 10))?;
        v = v.checked_add(&scale.checked_mul(&Ratio::from_integer(d.to_digit(10)? as i64))?)?;
    }
    Some(v)
}

struct Parser<'a> {
    toks: Vec<Token>,
    pos: usize,
    params: &'a [&'a str],
    bound: Vec<String>,
}

impl Parser<'_> {
    fn peek(&self) -> &Tok {
        &self.toks[self.pos].tok
    }

    fn peek_at(&self, k: usize) -> &Tok {
        &self.toks[(self.pos + k).min(self.toks.len() - 1)].tok
    }

    fn here(&self) -> (usize, usize) {
        let t = &self.toks[self.pos];
        (t.line, t.col)
    }

    fn error<T>(&self, msg: impl Into<String>) -> Result<T> {
        let (l, c) = self.here();
        Err(Error::parse(l, c, msg))
    }

    fn bump(&mut self) -> Tok {
        let t = self.toks[self.pos].tok.clone();
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        t
    }

    fn expect(&mut self, c: char) -> Result<()> {
        if *self.peek() == Tok::Sym(c) {
            self.bump();
            Ok(())
        } else {
            self.error(format!("expected `{c}`, found {}", describe(self.peek())))
        }
    }

    fn is_sym(&self, c: char) -> bool {
        *self.peek() == Tok::Sym(c)
    }

    fn formula(&mut self) -> Result<Formula> {
        if let Tok::Ident(kw) = self.peek() {
            if kw == "sup" || kw == "inf" {
                let sup = kw == "sup";
                self.bump();
                let var = match self.bump() {
                    Tok::Ident(v) if !KEYWORDS.contains(&v.as_str()) => v,
                    other => {
                        self.pos -= 1;
                        return self.error(format!("expected a variable name, found {}", describe(&other)));
                    }
                };
                if self.bound.contains(&var) || self.params.contains(&var.as_str()) {
                    return Err(Error::DuplicateBinder(var));
                }
                self.expect('.')?;
                self.bound.push(var.clone());
                let body = self.formula();
                self.bound.pop();
                let body = Box::new(body?);
                return Ok(if sup { Formula::Sup(var, body) } else { Formula::Inf(var, body) });
            }
        }
        self.expr()
    }

    fn expr(&mut self) -> Result<Formula> {
        let mut acc = self.term()?;
        loop {
            if self.is_sym('+') {
                self.bump();
                acc = Formula::Sum(Box::new(acc), Box::new(self.term()?));
            } else if self.is_sym('-') {
                self.bump();
                acc = Formula::Diff(Box::new(acc), Box::new(self.term()?));
            } else {
                return Ok(acc);
            }
        }
    }

    fn starts_rational(&self) -> bool {
        matches!(self.peek(), Tok::Num(_)) || (self.is_sym('-') && matches!(self.peek_at(1), Tok::Num(_)))
    }

    fn rational(&mut self) -> Result<Ratio> {
        let negative = self.is_sym('-');
        if negative {
            self.bump();
        }
        let Tok::Num(mut v) = self.bump() else {
            self.pos -= 1;
            return self.error("expected a number");
        };
        if self.is_sym('/') {
            self.bump();
            let Tok::Num(d) = self.bump() else {
                self.pos -= 1;
                return self.error("expected a denominator");
            };
            if d.is_zero() {
                self.pos -= 1;
                return self.error("zero denominator");
            }
            v /= d;
        }
        Ok(if negative { -v } else { v })
    }

    fn term(&mut self) -> Result<Formula> {
        if self.starts_rational() {
            let r = self.rational()?;
            if self.is_sym('*') {
                self.bump();
                return Ok(Formula::Scale(r, Box::new(self.term()?)));
            }
            return Ok(Formula::Const(r));
        }
        self.primary()
    }

    fn args(&mut self) -> Result<Vec<Formula>> {
        self.expect('(')?;
        let mut v = vec![self.formula()?];
        while self.is_sym(',') {
            self.bump();
            v.push(self.formula()?);
        }
        self.expect(')')?;
        Ok(v)
    }

    fn single_arg(&mut self, name: &str) -> Result<Box<Formula>> {
        let mut args = self.args()?;
        if args.len() != 1 {
            return self.error(format!("{name} takes one argument"));
        }
        Ok(Box::new(args.pop().expect("one argument")))
    }

    fn primary(&mut self) -> Result<Formula> {
        match self.peek().clone() {
            Tok::Sym('(') => {
                self.bump();
                let f = self.formula()?;
                self.expect(')')?;
                Ok(f)
            }
            Tok::Ident(kw) => match kw.as_str() {
                "sup" | "inf" => self.formula(),
                "len" => {
                    self.bump();
                    self.expect('(')?;
                    let w = self.word()?;
                    self.expect(')')?;
                    Ok(Formula::Len(w))
                }
                "max" | "min" => {
                    self.bump();
                    let args = self.args()?;
                    Ok(if kw == "max" { Formula::Max(args) } else { Formula::Min(args) })
                }
                "abs" => {
                    self.bump();
                    Ok(Formula::Abs(self.single_arg("abs")?))
                }
                "clamp" => {
                    self.bump();
                    Ok(Formula::Clamp(self.single_arg("clamp")?))
                }
                _ => self.error(format!("unexpected identifier `{kw}` (words only appear inside len(...))")),
            },
            other => self.error(format!("unexpected {}", describe(&other))),
        }
    }

    fn word(&mut self) -> Result<TermWord> {
        if let Tok::Num(n) = self.peek() {
            if *n == Ratio::from_integer(1) {
                self.bump();
                return Ok(vec![]);
            }
            return self.error("only `1` may stand for the unit in a word");
        }
        let mut w = vec![self.factor()?];
        while self.is_sym('*') {
            self.bump();
            w.push(self.factor()?);
        }
        Ok(w)
    }

    fn factor(&mut self) -> Result<(String, i64)> {
        let name = match self.peek().clone() {
            Tok::Ident(n) if !KEYWORDS.contains(&n.as_str()) => n,
            other => return self.error(format!("expected a variable, found {}", describe(&other))),
        };
        if !self.bound.contains(&name) && !self.params.contains(&name.as_str()) {
            return Err(Error::UnboundVariable(name));
        }
        self.bump();
        let mut exp = 1i64;
        if self.is_sym('^') {
            self.bump();
            let negative = self.is_sym('-');
            if negative {
                self.bump();
            }
            match self.peek().clone() {
                Tok::Num(r) if r.is_integer() => {
                    self.bump();
                    exp = if negative { -r.to_integer() } else { r.to_integer() };
                }
                other => return self.error(format!("expected an integer exponent, found {}", describe(&other))),
            }
        }
        Ok((name, exp))
    }
}

fn describe(t: &Tok) -> String {
    match t {
        Tok::Ident(s) => format!("`{s}`"),
        Tok::Num(r) => format!("`{r}`"),
        Tok::Sym(c) => format!("`{c}`"),
        Tok::End => "end of input".into(),
    }
}

/// Parse `text`; `params` are names usable in words without a binder.
pub fn parse_formula(text: &str, params: &[&str]) -> Result<Formula> {
    let toks = lex(text)?;
    let mut p = Parser { toks, pos: 0, params, bound: Vec::new() };
    let f = p.formula()?;
    if *p.peek() != Tok::End {
        return p.error(format!("unexpected {} after formula", describe(p.peek())));
    }
    Ok(f)
}

/// Parse a sentence (no parameters).
pub fn parse_sentence(text: &str) -> Result<Formula> {
    parse_formula(text, &[])
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::ratio;

    #[test]
    fn commutator_sentence() {
        let f = parse_sentence("sup x . sup y . len(x*y*x^-1*y^-1)").unwrap();
        let expect = Formula::sup("x", Formula::sup("y", Formula::len(&[("x", 1), ("y", 1), ("x", -1), ("y", -1)])));
        assert_eq!(f, expect);
    }

    #[test]
    fn unit_word() {
        assert_eq!(parse_sentence("len(1)").unwrap(), Formula::Len(vec![]));
    }

    #[test]
    fn min_abs_sentence() {
        let f = parse_sentence("sup x . min(abs(len(x) - 1), len(x))").unwrap();
        let lx = Formula::len(&[("x", 1)]);
        let expect = Formula::sup(
            "x",
            Formula::Min(vec![Formula::Abs(Box::new(Formula::diff(lx.clone(), Formula::Const(ratio(1, 1))))), lx]),
        );
        assert_eq!(f, expect);
    }

    #[test]
    fn rationals_and_scaling() {
        let f = parse_sentence("1/2 * 0.5 * len(1) + -3").unwrap();
        let expect = Formula::sum(
            Formula::Scale(ratio(1, 2), Box::new(Formula::Scale(ratio(1, 2), Box::new(Formula::Len(vec![]))))),
            Formula::Const(ratio(-3, 1)),
        );
        assert_eq!(f, expect);
        // scaling binds tighter than +
        let f = parse_sentence("2 * len(1) + 1").unwrap();
        assert!(matches!(f, Formula::Sum(..)));
    }

    #[test]
    fn binding_errors() {
        assert_eq!(parse_sentence("len(x)"), Err(Error::UnboundVariable("x".into())));
        assert_eq!(parse_sentence("sup x . sup x . len(x)"), Err(Error::DuplicateBinder("x".into())));
        assert_eq!(parse_formula("sup g . len(g)", &["g"]), Err(Error::DuplicateBinder("g".into())));
        assert!(parse_formula("len(g*g)", &["g"]).is_ok());
        // siblings may reuse a name
        assert!(parse_sentence("max(sup x . len(x), inf x . len(x))").is_ok());
    }

    #[test]
    fn syntax_errors_carry_positions() {
        match parse_sentence("sup x .\n  len(x * )") {
            Err(Error::Parse { line, column, .. }) => assert_eq!((line, column), (2, 11)),
            other => panic!("{other:?}"),
        }
        match parse_sentence("len(1) len(1)") {
            Err(Error::Parse { line, column, .. }) => assert_eq!((line, column), (1, 8)),
            other => panic!("{other:?}"),
        }
        assert!(matches!(parse_sentence("abs(len(1), len(1))"), Err(Error::Parse { .. })));
        assert!(matches!(parse_sentence("1/0"), Err(Error::Parse { .. })));
        assert!(matches!(parse_sentence("sup len . len(1)"), Err(Error::Parse { .. })));
        assert!(matches!(parse_sentence("len(2)"), Err(Error::Parse { .. })));
        assert!(matches!(parse_sentence("sup x . len(x^y)"), Err(Error::Parse { .. })));
        assert!(matches!(parse_sentence("#"), Err(Error::Parse { .. })));
    }

    #[test]
    fn quantifier_inside_parentheses() {
        let f = parse_sentence("1 - (sup x . len(x))").unwrap();
        assert_eq!(f, Formula::diff(Formula::Const(ratio(1, 1)), Formula::sup("x", Formula::len(&[("x", 1)]))));
    }

    #[test]
    fn printer_round_trip_examples() {
        for text in [
            "sup x . sup y . len(x*y*x^-1*y^-1)",
            "sup x . min(abs(len(x) - 1), len(x))",
            "1 - (sup x . len(x)) + -1/2 * clamp(len(1) - 2)",
            "inf x . max(len(x), 1 - len(x))",
        ] {
            let f = parse_sentence(text).unwrap();
            assert_eq!(parse_sentence(&f.to_string()).unwrap(), f, "{f}");
        }
    }
}
