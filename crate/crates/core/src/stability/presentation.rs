//! Finite presentations: generator names and relator words.
//!
//! Text format:
//!
//! ```text
//! gens: a b
//! rel: a b a^-1 b^-1
//! ```

use std::fmt;

use crate::error::{Error, Result};
use crate::metric::word::Word;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Presentation {
    pub name: String,
    pub names: Vec<String>,
    /// Freely reduced and nonempty.
    pub relators: Vec<Word>,
}

fn commutator(x: &Word, y: &Word) -> Word {
    x.concat(y).concat(&x.inverse()).concat(&y.inverse()).reduced()
}

fn names(list: &[&str]) -> Vec<String> {
    list.iter().map(|s| s.to_string()).collect()
}

impl Presentation {
    /// Relators are reduced and empty ones dropped.
    pub fn new(name: impl Into<String>, names: Vec<String>, relators: Vec<Word>) -> Result<Self> {
        if names.is_empty() {
            return Err(Error::Precondition("a presentation needs at least one generator".into()));
        }
        for (i, n) in names.iter().enumerate() {
            if n.is_empty() || n.contains(|c: char| c.is_whitespace() || c == '^') {
                return Err(Error::Precondition(format!("bad generator name `{n}`")));
            }
            if names[..i].contains(n) {
                return Err(Error::Precondition(format!("generator `{n}` listed twice")));
            }
        }
        let mut rels = Vec::with_capacity(relators.len());
        for r in relators {
            if let Some(m) = r.max_index() {
                if m >= names.len() {
                    return Err(Error::LetterOutOfRange { index: m, available: names.len() });
                }
            }
            let r = r.reduced();
            if !r.is_empty() {
                rels.push(r);
            }
        }
        Ok(Presentation { name: name.into(), names, relators: rels })
    }

    /// `a_{i+1} a_i a_{i+1}^-1 a_i^-2` for `i` mod 4.
    pub fn higman() -> Self {
        let relators =
            (0..4).map(|i| Word::from_pairs(&[((i + 1) % 4, 1), (i, 1), ((i + 1) % 4, -1), (i, -2)])).collect();
        Presentation::new("higman", names(&["a0", "a1", "a2", "a3"]), relators).expect("valid")
    }

    /// `[a b^-1, a^-1 b a]` and `[a b^-1, a^-2 b a^2]`.
    pub fn thompson_f() -> Self {
        let x = Word::from_pairs(&[(0, 1), (1, -1)]);
        let y1 = Word::from_pairs(&[(0, -1), (1, 1), (0, 1)]);
        let y2 = Word::from_pairs(&[(0, -2), (1, 1), (0, 2)]);
        Presentation::new("thompsonF", names(&["a", "b"]), vec![commutator(&x, &y1), commutator(&x, &y2)])
            .expect("valid")
    }

    /// `a b^m a^-1 b^-n`.
    pub fn baumslag_solitar(m: i64, n: i64) -> Self {
        let r = Word::from_pairs(&[(0, 1), (1, m), (0, -1), (1, -n)]);
        Presentation::new(format!("bs({m},{n})"), names(&["a", "b"]), vec![r]).expect("valid")
    }

    /// `[x, y]`.
    pub fn commutator() -> Self {
        let r = Word::from_pairs(&[(0, 1), (1, 1), (0, -1), (1, -1)]);
        Presentation::new("commutator", names(&["x", "y"]), vec![r]).expect("valid")
    }

    /// `higman`, `thompsonF`, `commutator` or `bs(m,n)`.
    pub fn builtin(name: &str) -> Result<Self> {
        let compact: String = name.chars().filter(|c| !c.is_whitespace()).collect();
        match compact.as_str() {
            "higman" => Ok(Self::higman()),
            "thompsonF" | "thompson" => Ok(Self::thompson_f()),
            "commutator" => Ok(Self::commutator()),
            _ => {
                let args = compact
                    .strip_prefix("bs(")
                    .or_else(|| compact.strip_prefix("baumslag_solitar("))
                    .and_then(|s| s.strip_suffix(')'))
                    .and_then(|s| s.split_once(','))
                    .and_then(|(m, n)| Some((m.parse::<i64>().ok()?, n.parse::<i64>().ok()?)));
                match args {
                    Some((m, n)) => Ok(Self::baumslag_solitar(m, n)),
                    None => Err(Error::Precondition(format!("unknown presentation `{name}`"))),
                }
            }
        }
    }

    pub fn parse(text: &str) -> Result<Self> {
        let mut gens: Option<Vec<String>> = None;
        let mut rels = Vec::new();
        let mut name = String::from("presentation");
        for (i, raw) in text.lines().enumerate() {
            let line_no = i + 1;
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (key, rest) =
                line.split_once(':').ok_or_else(|| Error::parse(line_no, 1, "expected `gens:`, `rel:` or `name:`"))?;
            match key.trim() {
                "name" => name = rest.trim().to_string(),
                "gens" => {
                    if gens.is_some() {
                        return Err(Error::parse(line_no, 1, "second `gens:` line"));
                    }
                    gens = Some(rest.split_whitespace().map(String::from).collect());
                }
                "rel" => {
                    let g = gens.as_ref().ok_or_else(|| Error::parse(line_no, 1, "`rel:` before `gens:`"))?;
                    let w = Word::parse_spaced(rest, g).map_err(|e| match e {
                        Error::Parse { message, .. } => Error::parse(line_no, key.len() + 2, message),
                        other => other,
                    })?;
                    rels.push(w);
                }
                other => return Err(Error::parse(line_no, 1, format!("unknown key `{other}`"))),
            }
        }
        let gens = gens.ok_or_else(|| Error::parse(1, 1, "missing `gens:` line"))?;
        Presentation::new(name, gens, rels)
    }

    pub fn to_text(&self) -> String {
        let mut s = format!("name: {}\ngens: {}\n", self.name, self.names.join(" "));
        for r in &self.relators {
            s.push_str(&format!("rel: {}\n", r.render(&self.names, " ")));
        }
        s
    }

    pub fn generator_count(&self) -> usize {
        self.names.len()
    }
}

impl fmt::Display for Presentation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let rels: Vec<String> = self.relators.iter().map(|r| r.render(&self.names, " ")).collect();
        write!(f, "<{} | {}>", self.names.join(", "), rels.join(", "))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn builtins() {
        let h = Presentation::higman();
        assert_eq!(h.relators.len(), 4);
        assert_eq!(h.relators[0].render(&h.names, " "), "a1 a0 a1^-1 a0^-2");
        assert_eq!(h.relators[3].render(&h.names, " "), "a0 a3 a0^-1 a3^-2");
        let t = Presentation::thompson_f();
        // [ab^-1, a^-1 b a] = a b^-1 a^-1 b a b a^-1 a^-1 b^-1 a, reduced
        assert_eq!(t.relators[0].render(&t.names, " "), "a b^-1 a^-1 b a b a^-2 b^-1 a");
        assert_eq!(t.relators[1].render(&t.names, " "), "a b^-1 a^-2 b a^2 b a^-3 b^-1 a^2");
        assert_eq!(Presentation::builtin("bs(1, 1)").unwrap().relators[0], Presentation::commutator().relators[0]);
        assert!(Presentation::builtin("nope").is_err());
    }

    #[test]
    fn text_round_trip() {
        for p in [Presentation::higman(), Presentation::thompson_f(), Presentation::baumslag_solitar(2, 3)] {
            assert_eq!(Presentation::parse(&p.to_text()).unwrap(), p);
        }
    }

    #[test]
    fn parse_errors() {
        assert!(matches!(Presentation::parse("rel: a\n"), Err(Error::Parse { line: 1, .. })));
        assert!(matches!(Presentation::parse("gens: a\nrel: a b\n"), Err(Error::Parse { line: 2, .. })));
        assert!(matches!(Presentation::parse("gens: a\nfoo\n"), Err(Error::Parse { line: 2, .. })));
        assert!(Presentation::parse("gens:\n").is_err());
        let p = Presentation::parse("# comment\ngens: a b\nrel: a a^-1\nrel: a^2 b^-3\n").unwrap();
        assert_eq!(p.relators.len(), 1);
    }
}
