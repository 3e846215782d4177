//! Group algebras `F_p[G]` of finite groups, the traces `τ_n`, and the
//! trace identities for `p`-th powers and idempotents.
//!
//! Text format:
//!
//! ```text
//! galg p=3 group=S3
//! e 1
//! (0,1,2) 2
//! ```
//!
//! The last token of each line is the coefficient; the rest is the element
//! name.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use rand::Rng;

use crate::error::{Error, Result};
use crate::metric::group::FiniteGroup;

use super::field;

#[derive(Clone)]
pub struct GroupAlgebraElement {
    group: Arc<FiniteGroup>,
    p: u64,
    /// Nonzero coefficients only.
    coeffs: BTreeMap<usize, u64>,
}

impl PartialEq for GroupAlgebraElement {
    fn eq(&self, other: &Self) -> bool {
        self.same_algebra(other) && self.coeffs == other.coeffs
    }
}

impl fmt::Debug for GroupAlgebraElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for GroupAlgebraElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.coeffs.is_empty() {
            return write!(f, "0");
        }
        let terms: Vec<String> =
            self.coeffs.iter().map(|(&g, &c)| format!("{c}*[{}]", self.group.element_name(g))).collect();
        write!(f, "{}", terms.join(" + "))
    }
}

impl GroupAlgebraElement {
    pub fn zero(group: Arc<FiniteGroup>, p: u64) -> Result<Self> {
        field::check_prime(p)?;
        Ok(GroupAlgebraElement { group, p, coeffs: BTreeMap::new() })
    }

    pub fn from_terms(group: Arc<FiniteGroup>, p: u64, terms: &[(usize, i64)]) -> Result<Self> {
        let mut a = GroupAlgebraElement::zero(group, p)?;
        for &(g, c) in terms {
            if g >= a.group.order() {
                return Err(Error::Precondition(format!("no element with index {g} in {}", a.group.name())));
            }
            a.add_term(g, field::reduce(c, p));
        }
        Ok(a)
    }

    pub fn one(group: Arc<FiniteGroup>, p: u64) -> Result<Self> {
        let e = group.identity();
        GroupAlgebraElement::from_terms(group, p, &[(e, 1)])
    }

    /// Random element with about `terms` nonzero coefficients.
    pub fn random<R: Rng + ?Sized>(group: Arc<FiniteGroup>, p: u64, terms: usize, rng: &mut R) -> Result<Self> {
        let n = group.order();
        let pairs: Vec<(usize, i64)> = (0..terms).map(|_| (rng.gen_range(0..n), rng.gen_range(1..p) as i64)).collect();
        GroupAlgebraElement::from_terms(group, p, &pairs)
    }

    fn add_term(&mut self, g: usize, c: u64) {
        let entry = self.coeffs.entry(g).or_insert(0);
        *entry = field::add(*entry, c, self.p);
        if *entry == 0 {
            self.coeffs.remove(&g);
        }
    }

    pub fn group(&self) -> &Arc<FiniteGroup> {
        &self.group
    }

    pub fn prime(&self) -> u64 {
        self.p
    }

    pub fn coeff(&self, g: usize) -> u64 {
        self.coeffs.get(&g).copied().unwrap_or(0)
    }

    pub fn terms(&self) -> impl Iterator<Item = (usize, u64)> + '_ {
        self.coeffs.iter().map(|(&g, &c)| (g, c))
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    fn same_algebra(&self, other: &Self) -> bool {
        self.p == other.p && (Arc::ptr_eq(&self.group, &other.group) || *self.group == *other.group)
    }

    fn check(&self, other: &Self) -> Result<()> {
        if self.same_algebra(other) {
            Ok(())
        } else {
            Err(Error::MismatchedAlgebra(format!(
                "F_{}[{}] vs F_{}[{}]",
                self.p,
                self.group.name(),
                other.p,
                other.group.name()
            )))
        }
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        let mut out = self.clone();
        for (g, c) in other.terms() {
            out.add_term(g, c);
        }
        Ok(out)
    }

    pub fn scale(&self, c: u64) -> Self {
        let mut out = GroupAlgebraElement { coeffs: BTreeMap::new(), ..self.clone() };
        for (g, a) in self.terms() {
            out.add_term(g, field::mul(a, c % self.p, self.p));
        }
        out
    }

    /// `(ab)_γ = Σ_{ρρ' = γ} a_ρ b_ρ'`.
    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        let mut out = GroupAlgebraElement { coeffs: BTreeMap::new(), ..self.clone() };
        for (g, a) in self.terms() {
            for (h, b) in other.terms() {
                out.add_term(self.group.mul(g, h), field::mul(a, b, self.p));
            }
        }
        Ok(out)
    }

    pub fn pow(&self, mut e: u64) -> Self {
        let mut acc = GroupAlgebraElement::one(self.group.clone(), self.p).expect("prime checked");
        let mut base = self.clone();
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base).expect("same algebra");
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base).expect("same algebra");
            }
        }
        acc
    }

    /// Sum of the coefficients at elements of order exactly `p^n`.
    pub fn tau(&self, n: u32) -> u64 {
        let Some(target) = self.p.checked_pow(n) else { return 0 };
        self.terms()
            .filter(|&(g, _)| self.group.element_order(g) == target)
            .fold(0, |acc, (_, c)| field::add(acc, c, self.p))
    }

    /// Largest `m` with `p^m` at most the exponent of the group.
    pub fn tau_levels(&self) -> u32 {
        let exp = self.group.exponent();
        let mut m = 0;
        while self.p.checked_pow(m + 1).is_some_and(|q| q <= exp) {
            m += 1;
        }
        m
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FrobeniusReport {
    /// `τ_n((a+b)^p) = τ_n(a^p) + τ_n(b^p)` for `n = 0..=m`.
    pub additive: Vec<bool>,
    /// `τ_n(a^p) = Σ_γ a_γ^p τ_n(γ^p)` for `n = 0..=m`.
    pub termwise: Vec<bool>,
}

impl FrobeniusReport {
    pub fn passed(&self) -> bool {
        self.additive.iter().chain(&self.termwise).all(|&b| b)
    }
}

pub fn frobenius_trace_check(a: &GroupAlgebraElement, b: &GroupAlgebraElement) -> Result<FrobeniusReport> {
    a.check(b)?;
    let p = a.p;
    let m = a.tau_levels();
    let sum_p = a.add(b)?.pow(p);
    let (ap, bp) = (a.pow(p), b.pow(p));
    let g = &a.group;
    let mut additive = Vec::new();
    let mut termwise = Vec::new();
    for n in 0..=m {
        additive.push(sum_p.tau(n) == field::add(ap.tau(n), bp.tau(n), p));
        let target = p.pow(n);
        let rhs = a
            .terms()
            .filter(|&(x, _)| g.element_order(g.pow(x, p as i64)) == target)
            .fold(0, |acc, (_, c)| field::add(acc, field::pow(c, p, p), p));
        termwise.push(ap.tau(n) == rhs);
    }
    Ok(FrobeniusReport { additive, termwise })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IdempotentReport {
    /// `τ_0(e), ..., τ_{m+1}(e)`.
    pub taus: Vec<u64>,
    /// `τ_0(e) = τ_0(e)^p + τ_1(e)^p`.
    pub base: bool,
    /// `τ_n(e) = τ_{n+1}(e)^p` for `n = 1..=m`.
    pub chain: Vec<bool>,
    /// `τ_0(e) = τ_0(e)^p + τ_n(e)^(p^n)` for `n = 1..=m+1`.
    pub telescoped: Vec<bool>,
    /// `τ_0(e)^p = τ_0(e)`.
    pub conclusion: bool,
}

impl IdempotentReport {
    pub fn passed(&self) -> bool {
        self.base && self.conclusion && self.chain.iter().chain(&self.telescoped).all(|&b| b)
    }
}

pub fn idempotent_trace_check(e: &GroupAlgebraElement) -> Result<IdempotentReport> {
    if e.mul(e)? != *e {
        return Err(Error::NotIdempotent);
    }
    let p = e.p;
    let m = e.tau_levels();
    let taus: Vec<u64> = (0..=m + 1).map(|n| e.tau(n)).collect();
    let base = taus[0] == field::add(field::pow(taus[0], p, p), field::pow(taus[1], p, p), p);
    let chain = (1..=m as usize).map(|n| taus[n] == field::pow(taus[n + 1], p, p)).collect();
    let t0p = field::pow(taus[0], p, p);
    let telescoped = (1..=m as usize + 1)
        .map(|n| {
            // x^(p^n) by n successive p-th powers
            let lifted = (0..n).fold(taus[n], |x, _| field::pow(x, p, p));
            taus[0] == field::add(t0p, lifted, p)
        })
        .collect();
    Ok(IdempotentReport { taus: taus.clone(), base, chain, telescoped, conclusion: t0p == taus[0] })
}

/// `|H|^-1 Σ_{h ∈ H} h` for the subgroup `h` (sorted element indices).
pub fn averaging_idempotent(group: Arc<FiniteGroup>, subgroup: &[usize], p: u64) -> Result<GroupAlgebraElement> {
    field::check_prime(p)?;
    let size = subgroup.len() as u64;
    let inv = field::inv(size % p, p)
        .ok_or_else(|| Error::Precondition(format!("p = {p} divides |H| = {size}; the average is not defined")))?;
    let terms: Vec<(usize, i64)> = subgroup.iter().map(|&h| (h, inv as i64)).collect();
    GroupAlgebraElement::from_terms(group, p, &terms)
}

/// Built-in groups by name: `C<n>`, `D<m>`, `S<n>` (`n <= 5`), `A4`, `Q8`,
/// `C<p>xC<p>`.
pub fn builtin_group(name: &str) -> Option<FiniteGroup> {
    if let Some((a, b)) = name.split_once('x') {
        let p: usize = a.strip_prefix('C')?.parse().ok()?;
        let q: usize = b.strip_prefix('C')?.parse().ok()?;
        return (p == q && p > 0).then(|| FiniteGroup::cyclic_square(p));
    }
    match name {
        "A4" => return Some(FiniteGroup::alternating4()),
        "Q8" => return Some(FiniteGroup::quaternion()),
        _ => {}
    }
    let (kind, num) = name.split_at(1);
    let k: usize = num.parse().ok()?;
    match kind {
        "C" if k > 0 => Some(FiniteGroup::cyclic(k)),
        "D" if k >= 3 => Some(FiniteGroup::dihedral(k)),
        "S" if (1..=5).contains(&k) => Some(FiniteGroup::symmetric(k)),
        _ => None,
    }
}

/// Parse a `galg` file; `resolve` turns the `group=` value into a group.
pub fn parse_galg(text: &str, resolve: impl Fn(&str) -> Result<FiniteGroup>) -> Result<GroupAlgebraElement> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.split('#').next().unwrap_or("").trim()))
        .filter(|(_, l)| !l.is_empty());
    let (hl, header) = lines.next().ok_or_else(|| Error::parse(1, 1, "empty file"))?;
    let mut words = header.split_whitespace();
    if words.next() != Some("galg") {
        return Err(Error::parse(hl, 1, "expected `galg p=<p> group=<group>`"));
    }
    let (mut p, mut gname) = (None, None);
    for w in words {
        match w.split_once('=') {
            Some(("p", v)) => p = Some(v.parse::<u64>().map_err(|_| Error::parse(hl, 1, format!("bad prime `{v}`")))?),
            Some(("group", v)) => gname = Some(v.to_string()),
            _ => return Err(Error::parse(hl, 1, format!("unexpected `{w}`"))),
        }
    }
    let (p, gname) = match (p, gname) {
        (Some(p), Some(g)) => (p, g),
        _ => return Err(Error::parse(hl, 1, "header needs `p=` and `group=`")),
    };
    let group = Arc::new(resolve(&gname)?);
    let mut terms = Vec::new();
    for (ln, line) in lines {
        let (name, coeff) =
            line.rsplit_once(char::is_whitespace).ok_or_else(|| Error::parse(ln, 1, "expected `<element> <coeff>`"))?;
        let c: i64 =
            coeff.parse().map_err(|_| Error::parse(ln, name.len() + 2, format!("bad coefficient `{coeff}`")))?;
        let g = group
            .index_of(name.trim())
            .ok_or_else(|| Error::parse(ln, 1, format!("no element `{}` in {}", name.trim(), group.name())))?;
        terms.push((g, c));
    }
    GroupAlgebraElement::from_terms(group, p, &terms)
}

pub fn write_galg(a: &GroupAlgebraElement, group_ref: &str) -> String {
    let mut s = format!("galg p={} group={group_ref}\n", a.p);
    for (g, c) in a.terms() {
        s.push_str(&format!("{} {c}\n", a.group.element_name(g)));
    }
    s
}

#[cfg(test)]
mod tests {
    use super::*;

    fn s3() -> Arc<FiniteGroup> {
        Arc::new(FiniteGroup::symmetric(3))
    }

    fn of_order(g: &FiniteGroup, k: u64) -> usize {
        (0..g.order()).find(|&x| g.element_order(x) == k).unwrap()
    }

    #[test]
    fn traces() {
        let g = s3();
        let one = GroupAlgebraElement::one(g.clone(), 3).unwrap();
        assert_eq!((one.tau(0), one.tau(1)), (1, 0));
        let c = of_order(&g, 3);
        let a = GroupAlgebraElement::from_terms(g.clone(), 3, &[(c, 1), (g.mul(c, c), 1)]).unwrap();
        assert_eq!(a.tau(1), 2);
        let c4 = Arc::new(FiniteGroup::cyclic(4));
        let x = GroupAlgebraElement::from_terms(c4.clone(), 2, &[(1, 1)]).unwrap();
        let y = GroupAlgebraElement::from_terms(c4.clone(), 2, &[(3, 1)]).unwrap();
        assert_eq!(x.mul(&y).unwrap(), GroupAlgebraElement::one(c4, 2).unwrap());
        assert_eq!(a.tau(9), 0);
    }

    #[test]
    fn no_zero_coefficients_stored() {
        let g = s3();
        let a = GroupAlgebraElement::from_terms(g.clone(), 2, &[(1, 1), (1, 1), (2, 4)]).unwrap();
        assert!(a.is_zero());
        assert_eq!(a.terms().count(), 0);
    }

    #[test]
    fn mismatched_algebras() {
        let a = GroupAlgebraElement::one(s3(), 2).unwrap();
        let b = GroupAlgebraElement::one(s3(), 3).unwrap();
        assert!(matches!(a.add(&b), Err(Error::MismatchedAlgebra(_))));
        let c = GroupAlgebraElement::one(Arc::new(FiniteGroup::cyclic(6)), 2).unwrap();
        assert!(matches!(a.mul(&c), Err(Error::MismatchedAlgebra(_))));
    }

    #[test]
    fn frobenius_examples() {
        let g = Arc::new(FiniteGroup::dihedral(4));
        let e = g.identity();
        let a = GroupAlgebraElement::from_terms(g.clone(), 2, &[(e, 1)]).unwrap();
        assert!(frobenius_trace_check(&a, &a).unwrap().passed());
        let mut r = crate::rng::rng(2);
        for _ in 0..20 {
            let a = GroupAlgebraElement::random(g.clone(), 2, 4, &mut r).unwrap();
            let b = GroupAlgebraElement::random(g.clone(), 2, 4, &mut r).unwrap();
            let rep = frobenius_trace_check(&a, &b).unwrap();
            assert_eq!(rep.additive.len(), 3);
            assert!(rep.passed());
        }
        let x = of_order(&g, 4);
        let single = GroupAlgebraElement::from_terms(g.clone(), 2, &[(x, 1)]).unwrap();
        // (λγ)^p = λ^p γ^p
        assert_eq!(single.pow(2).tau(1), 1);
    }

    #[test]
    fn idempotents() {
        let g = s3();
        let one = GroupAlgebraElement::one(g.clone(), 2).unwrap();
        let rep = idempotent_trace_check(&one).unwrap();
        assert_eq!(rep.taus[0], 1);
        assert!(rep.passed());
        assert!(idempotent_trace_check(&GroupAlgebraElement::zero(g.clone(), 2).unwrap()).unwrap().passed());

        let c = of_order(&g, 3);
        let h = g.generated(&[c]);
        let e = averaging_idempotent(g.clone(), &h, 2).unwrap();
        assert_eq!(e.mul(&e).unwrap(), e);
        let rep = idempotent_trace_check(&e).unwrap();
        assert_eq!(rep.taus[0], 1);
        assert!(rep.passed());
        assert!(averaging_idempotent(g.clone(), &h, 3).is_err());
        let not = GroupAlgebraElement::from_terms(g, 2, &[(c, 1)]).unwrap();
        assert_eq!(idempotent_trace_check(&not), Err(Error::NotIdempotent));
    }

    #[test]
    fn galg_files() {
        let resolve = |n: &str| builtin_group(n).ok_or_else(|| Error::Precondition(n.into()));
        let g = Arc::new(builtin_group("S3").unwrap());
        let a = GroupAlgebraElement::from_terms(g.clone(), 5, &[(0, 2), (3, 4), (5, 1)]).unwrap();
        let text = write_galg(&a, "S3");
        assert_eq!(parse_galg(&text, resolve).unwrap(), a);
        assert!(matches!(parse_galg("galg p=5 group=S3\nzzz 1\n", resolve), Err(Error::Parse { line: 2, .. })));
        assert!(matches!(parse_galg("galg p=4 group=S3\n", resolve), Err(Error::NotPrime(4))));
        assert_eq!(builtin_group("C3xC3").unwrap().order(), 9);
        assert_eq!(builtin_group("D4").unwrap().order(), 8);
        assert!(builtin_group("X9").is_none());
    }
}
