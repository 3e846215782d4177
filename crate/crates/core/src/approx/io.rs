//! Text formats for group models and morphisms.
//!
//! Model files start with `lattice d`, `table` or `presentation`. Morphism
//! files start with `target sym n` or `target unitary n`, followed by lines
//! `map <element> -> perm n: ...` (or `map <element> -> mat n:` and `n`
//! matrix rows).

use std::sync::Arc;

use crate::error::{Error, Result};
use crate::metric::group::FiniteGroup;
use crate::metric::matrix::ComplexMatrix;
use crate::metric::perm::Permutation;
use crate::stability::Presentation;

use super::model::{GroupModel, Lattice, PresentedModel, TableModel};
use super::morphism::{ApproxMorphism, TargetElem};

/// Words longer than this are reported unresolved in presented models.
pub const PRESENTED_MAX_LEN: usize = 64;

#[derive(Debug, Clone)]
pub enum ModelFile {
    Lattice(Lattice),
    Table(TableModel),
    Presented(PresentedModel),
}

pub fn parse_model(text: &str) -> Result<ModelFile> {
    let first = text
        .lines()
        .map(str::trim)
        .find(|l| !l.is_empty() && !l.starts_with('#'))
        .ok_or_else(|| Error::parse(1, 1, "empty model file"))?;
    if let Some(d) = first.strip_prefix("lattice") {
        let d: usize = d.trim().parse().map_err(|_| Error::parse(1, 1, "expected `lattice d`"))?;
        return Ok(ModelFile::Lattice(Lattice(d)));
    }
    if first.starts_with("table") {
        return Ok(ModelFile::Table(TableModel(Arc::new(text.parse::<FiniteGroup>()?))));
    }
    if first.starts_with("presentation") {
        let body: String =
            text.lines().skip_while(|l| !l.trim().starts_with("presentation")).skip(1).collect::<Vec<_>>().join("\n");
        let p = Presentation::parse(&body)?;
        return Ok(ModelFile::Presented(PresentedModel::new(p.names, p.relators, PRESENTED_MAX_LEN)));
    }
    Err(Error::parse(1, 1, "expected `lattice`, `table` or `presentation`"))
}

#[derive(Debug, Clone)]
pub enum MorphismFile<M: GroupModel> {
    Sym(ApproxMorphism<M, Permutation>),
    Unitary(ApproxMorphism<M, ComplexMatrix>),
}

pub fn parse_morphism<M: GroupModel>(model: M, text: &str) -> Result<MorphismFile<M>> {
    let lines: Vec<(usize, &str)> = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'))
        .collect();
    let (hl, header) = *lines.first().ok_or_else(|| Error::parse(1, 1, "empty morphism file"))?;
    let words: Vec<&str> = header.split_whitespace().collect();
    let (unitary, dim) = match words.as_slice() {
        ["target", "sym", n] => (false, n.parse::<usize>()),
        ["target", "unitary", n] => (true, n.parse::<usize>()),
        _ => return Err(Error::parse(hl, 1, "expected `target sym n` or `target unitary n`")),
    };
    let dim = dim.map_err(|_| Error::parse(hl, 1, "bad dimension"))?;
    let mut perms = Vec::new();
    let mut mats = Vec::new();
    let mut k = 1;
    while k < lines.len() {
        let (ln, line) = lines[k];
        let rest = line.strip_prefix("map").ok_or_else(|| Error::parse(ln, 1, "expected `map <element> -> ...`"))?;
        let (name, image) = rest.split_once("->").ok_or_else(|| Error::parse(ln, 1, "missing `->`"))?;
        let g = model.parse(name).map_err(|e| relocate(e, ln))?;
        if unitary {
            let block: Vec<&str> =
                std::iter::once(image.trim()).chain(lines[k + 1..].iter().take(dim).map(|l| l.1)).collect();
            let m: ComplexMatrix = block.join("\n").parse().map_err(|e| relocate(e, ln))?;
            check_dim(m.dim(), dim, ln)?;
            mats.push((g, m));
            k += 1 + dim;
        } else {
            let p: Permutation = image.trim().parse().map_err(|e| relocate(e, ln))?;
            check_dim(p.degree(), dim, ln)?;
            perms.push((g, p));
            k += 1;
        }
    }
    Ok(if unitary {
        MorphismFile::Unitary(ApproxMorphism::new(model, mats)?)
    } else {
        MorphismFile::Sym(ApproxMorphism::new(model, perms)?)
    })
}

fn check_dim(found: usize, expected: usize, line: usize) -> Result<()> {
    if found == expected {
        Ok(())
    } else {
        Err(Error::parse(line, 1, format!("image has dimension {found}, header says {expected}")))
    }
}

fn relocate(e: Error, line: usize) -> Error {
    match e {
        Error::Parse { column, message, .. } => Error::Parse { line, column, message },
        other => other,
    }
}

pub fn write_morphism<M: GroupModel, T: TargetElem + std::fmt::Display>(phi: &ApproxMorphism<M, T>) -> String {
    let mut s = format!("target {} {}\n", T::kind(), phi.dim());
    for (g, t) in phi.entries() {
        s.push_str(&format!("map {} -> {}\n", phi.model().display(g), t));
    }
    s
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trip_sym() {
        let text = "target sym 3\nmap 0 -> perm 3: 0 1 2\nmap 1 -> 3: 1 2 0\nmap -1 -> perm 3: 2 0 1\n";
        let MorphismFile::Sym(phi) = parse_morphism(Lattice(1), text).unwrap() else { panic!() };
        assert_eq!(phi.len(), 3);
        let again = write_morphism(&phi);
        let MorphismFile::Sym(back) = parse_morphism(Lattice(1), &again).unwrap() else { panic!() };
        assert_eq!(back.entries(), phi.entries());
    }

    #[test]
    fn unitary_file() {
        let text = "target unitary 2\nmap 0 -> mat 2:\n1+0i 0+0i\n0+0i 1+0i\nmap 1 -> mat 2:\n0+0i 1+0i\n1+0i 0+0i\n";
        let MorphismFile::Unitary(phi) = parse_morphism(Lattice(1), text).unwrap() else { panic!() };
        assert_eq!(phi.len(), 2);
        assert!((phi.get(&vec![1]).unwrap().hs_length() - 0.5f64.sqrt()).abs() < 1e-12);
    }

    #[test]
    fn errors_have_lines() {
        let text = "target sym 3\nmap 0 -> perm 3: 0 1 2\nmap 1 -> perm 2: 1 0\n";
        assert!(matches!(parse_morphism(Lattice(1), text), Err(Error::Parse { line: 3, .. })));
        assert!(matches!(parse_morphism(Lattice(1), "target foo 3"), Err(Error::Parse { line: 1, .. })));
    }

    #[test]
    fn model_files() {
        assert!(matches!(parse_model("lattice 2").unwrap(), ModelFile::Lattice(Lattice(2))));
        let t = FiniteGroup::cyclic(3).to_text();
        assert!(matches!(parse_model(&t).unwrap(), ModelFile::Table(_)));
        let p = parse_model("presentation\ngens: a b\nrel: a b a^-1 b^-1\n").unwrap();
        match p {
            ModelFile::Presented(m) => assert_eq!(m.relators.len(), 1),
            _ => panic!(),
        }
        assert!(parse_model("group").is_err());
    }
}
