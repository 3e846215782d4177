use std::fmt;

use crate::scalar::Ratio;

/// A word over variable or parameter names; empty means the unit.
pub type TermWord = Vec<(String, i64)>;

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Formula {
    Len(TermWord),
    Max(Vec<Formula>),
    Min(Vec<Formula>),
    Sum(Box<Formula>, Box<Formula>),
    Diff(Box<Formula>, Box<Formula>),
    Scale(Ratio, Box<Formula>),
    Abs(Box<Formula>),
    Clamp(Box<Formula>),
    Const(Ratio),
    Sup(String, Box<Formula>),
    Inf(String, Box<Formula>),
}

impl Formula {
    pub fn len(word: &[(&str, i64)]) -> Formula {
        Formula::Len(word.iter().map(|&(n, e)| (n.to_string(), e)).collect())
    }

    pub fn sup(var: &str, body: Formula) -> Formula {
        Formula::Sup(var.into(), Box::new(body))
    }

    pub fn inf(var: &str, body: Formula) -> Formula {
        Formula::Inf(var.into(), Box::new(body))
    }

    pub fn sum(a: Formula, b: Formula) -> Formula {
        Formula::Sum(Box::new(a), Box::new(b))
    }

    pub fn diff(a: Formula, b: Formula) -> Formula {
        Formula::Diff(Box::new(a), Box::new(b))
    }

    pub fn children(&self) -> Vec<&Formula> {
        match self {
            Formula::Len(_) | Formula::Const(_) => vec![],
            Formula::Max(v) | Formula::Min(v) => v.iter().collect(),
            Formula::Sum(a, b) | Formula::Diff(a, b) => vec![a, b],
            Formula::Scale(_, a) | Formula::Abs(a) | Formula::Clamp(a) => vec![a],
            Formula::Sup(_, a) | Formula::Inf(_, a) => vec![a],
        }
    }

    /// Names used in `len(...)` that no enclosing quantifier binds.
    pub fn free_names(&self) -> Vec<String> {
        fn walk(f: &Formula, bound: &mut Vec<String>, out: &mut Vec<String>) {
            match f {
                Formula::Len(w) => {
                    for (n, _) in w {
                        if !bound.contains(n) && !out.contains(n) {
                            out.push(n.clone());
                        }
                    }
                }
                Formula::Sup(v, body) | Formula::Inf(v, body) => {
                    bound.push(v.clone());
                    walk(body, bound, out);
                    bound.pop();
                }
                _ => {
                    for c in f.children() {
                        walk(c, bound, out);
                    }
                }
            }
        }
        let mut out = Vec::new();
        walk(self, &mut Vec::new(), &mut out);
        out
    }

    pub fn is_sentence(&self) -> bool {
        self.free_names().is_empty()
    }

    pub fn quantifier_count(&self) -> usize {
        let own = usize::from(matches!(self, Formula::Sup(..) | Formula::Inf(..)));
        own + self.children().into_iter().map(Formula::quantifier_count).sum::<usize>()
    }

    fn write(&self, f: &mut fmt::Formatter<'_>, operand: bool) -> fmt::Result {
        match self {
            Formula::Len(w) => {
                write!(f, "len(")?;
                if w.is_empty() {
                    write!(f, "1")?;
                }
                for (i, (name, e)) in w.iter().enumerate() {
                    if i > 0 {
                        write!(f, "*")?;
                    }
                    if *e == 1 {
                        write!(f, "{name}")?;
                    } else {
                        write!(f, "{name}^{e}")?;
                    }
                }
                write!(f, ")")
            }
            Formula::Max(args) | Formula::Min(args) => {
                write!(f, "{}(", if matches!(self, Formula::Max(_)) { "max" } else { "min" })?;
                for (i, a) in args.iter().enumerate() {
                    if i > 0 {
                        write!(f, ", ")?;
                    }
                    a.write(f, false)?;
                }
                write!(f, ")")
            }
            Formula::Sum(a, b) | Formula::Diff(a, b) => {
                write!(f, "(")?;
                a.write(f, true)?;
                write!(f, " {} ", if matches!(self, Formula::Sum(..)) { "+" } else { "-" })?;
                b.write(f, true)?;
                write!(f, ")")
            }
            Formula::Scale(r, a) => {
                write!(f, "{r} * ")?;
                a.write(f, true)
            }
            Formula::Abs(a) | Formula::Clamp(a) => {
                write!(f, "{}(", if matches!(self, Formula::Abs(_)) { "abs" } else { "clamp" })?;
                a.write(f, false)?;
                write!(f, ")")
            }
            Formula::Const(r) => write!(f, "{r}"),
            Formula::Sup(v, body) | Formula::Inf(v, body) => {
                let q = if matches!(self, Formula::Sup(..)) { "sup" } else { "inf" };
                if operand {
                    write!(f, "(")?;
                }
                write!(f, "{q} {v} . ")?;
                body.write(f, false)?;
                if operand {
                    write!(f, ")")?;
                }
                Ok(())
            }
        }
    }
}

/// Canonical text; parsing it gives back the same tree.
impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.write(f, false)
    }
}
