//! Finite groups given by multiplication tables, and length groups.

use std::collections::{BTreeSet, HashMap, VecDeque};
use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use rand::Rng;

use crate::error::{Error, Result};
use crate::rng;
use crate::scalar::{Ratio, Scalar};

use super::matrix::ComplexMatrix;
use super::perm::{factorial, Permutation};
use super::word::GroupOps;

/// Largest group built by closure before giving up.
pub const CLOSURE_CAP: usize = 50_000;
const ASSOCIATIVITY_CHECK_LIMIT: usize = 128;

/// A finite group as a multiplication table over indices `0..order`.
#[derive(Clone, PartialEq, Eq)]
pub struct FiniteGroup {
    name: String,
    names: Vec<String>,
    table: Vec<usize>,
    identity: usize,
    inverses: Vec<usize>,
    orders: Vec<u64>,
}

impl FiniteGroup {
    /// Validate and wrap a table; `table[a][b]` is the index of `a * b`.
    pub fn from_table(name: impl Into<String>, names: Vec<String>, table: Vec<Vec<usize>>) -> Result<Self> {
        let n = names.len();
        if n == 0 || table.len() != n || table.iter().any(|r| r.len() != n) {
            return Err(Error::Precondition("table must be |G| x |G| with one name per element".into()));
        }
        if table.iter().flatten().any(|&x| x >= n) {
            return Err(Error::Precondition("table entry out of range".into()));
        }
        let flat: Vec<usize> = table.into_iter().flatten().collect();
        let identity = (0..n)
            .find(|&e| (0..n).all(|a| flat[e * n + a] == a && flat[a * n + e] == a))
            .ok_or_else(|| Error::Precondition("table has no identity".into()))?;
        let mut inverses = vec![usize::MAX; n];
        for a in 0..n {
            let b = (0..n)
                .find(|&b| flat[a * n + b] == identity && flat[b * n + a] == identity)
                .ok_or_else(|| Error::Precondition(format!("element {} has no inverse", names[a])))?;
            inverses[a] = b;
        }
        if n <= ASSOCIATIVITY_CHECK_LIMIT {
            for a in 0..n {
                for b in 0..n {
                    let ab = flat[a * n + b];
                    for c in 0..n {
                        if flat[ab * n + c] != flat[a * n + flat[b * n + c]] {
                            return Err(Error::Precondition("table is not associative".into()));
                        }
                    }
                }
            }
        }
        let mut g = FiniteGroup { name: name.into(), names, table: flat, identity, inverses, orders: vec![] };
        g.orders = (0..n).map(|a| g.compute_order(a)).collect();
        Ok(g)
    }

    fn compute_order(&self, a: usize) -> u64 {
        let mut k = 1;
        let mut x = a;
        while x != self.identity {
            x = self.mul(x, a);
            k += 1;
        }
        k
    }

    /// Closure of a generating set under products; lengths and names come
    /// from the elements, index 0 is the identity.
    pub fn closure<T, M, I>(name: &str, identity: T, gens: &[T], mul: M, eq_key: I) -> Result<(Self, Vec<T>)>
    where
        T: Clone,
        M: Fn(&T, &T) -> T,
        I: Fn(&T) -> String,
    {
        let mut elems = vec![identity.clone()];
        let mut index: HashMap<String, usize> = HashMap::new();
        index.insert(eq_key(&identity), 0);
        let mut queue = VecDeque::from([0usize]);
        while let Some(i) = queue.pop_front() {
            for g in gens {
                let x = mul(&elems[i], g);
                let k = eq_key(&x);
                if let std::collections::hash_map::Entry::Vacant(slot) = index.entry(k) {
                    if elems.len() >= CLOSURE_CAP {
                        return Err(Error::EnumerationCap { order: elems.len() as u128 + 1, cap: CLOSURE_CAP as u128 });
                    }
                    slot.insert(elems.len());
                    queue.push_back(elems.len());
                    elems.push(x);
                }
            }
        }
        let n = elems.len();
        let mut table = vec![vec![0; n]; n];
        for a in 0..n {
            for b in 0..n {
                let k = eq_key(&mul(&elems[a], &elems[b]));
                table[a][b] =
                    *index.get(&k).ok_or_else(|| Error::Precondition("generated set is not closed".into()))?;
            }
        }
        let names = (0..n).map(|i| if i == 0 { "e".to_string() } else { format!("g{i}") }).collect();
        Ok((FiniteGroup::from_table(name, names, table)?, elems))
    }

    /// The subgroup of `S_n` generated by `gens`, with cycle-notation names.
    pub fn from_permutations(name: &str, gens: &[Permutation]) -> Result<(Self, Vec<Permutation>)> {
        let n = gens.first().map(Permutation::degree).ok_or(Error::EmptyDomain)?;
        if let Some(g) = gens.iter().find(|g| g.degree() != n) {
            return Err(Error::DegreeMismatch(n, g.degree()));
        }
        let (mut g, perms) = FiniteGroup::closure(
            name,
            Permutation::identity(n),
            gens,
            |a, b| a.compose(b),
            |p| format!("{:?}", p.images()),
        )?;
        g.names = perms.iter().map(cycle_notation).collect();
        Ok((g, perms))
    }

    /// The group generated by unitaries, identifying matrices within `tol`
    /// (entries rounded on a grid of that size).
    pub fn from_unitaries(name: &str, gens: &[ComplexMatrix], tol: f64) -> Result<(Self, Vec<ComplexMatrix>)> {
        let n = gens.first().map(ComplexMatrix::dim).ok_or(Error::EmptyDomain)?;
        for g in gens {
            if g.dim() != n {
                return Err(Error::DegreeMismatch(n, g.dim()));
            }
            g.ensure_unitary()?;
        }
        let key = |m: &ComplexMatrix| {
            m.inner()
                .iter()
                .map(|z| format!("{},{}", (z.re / tol).round() as i64, (z.im / tol).round() as i64))
                .collect::<Vec<_>>()
                .join(";")
        };
        FiniteGroup::closure(name, ComplexMatrix::identity(n), gens, |a, b| a.mul(b), key)
    }

    pub fn trivial() -> Self {
        FiniteGroup::from_table("C1", vec!["e".into()], vec![vec![0]]).expect("trivial table")
    }

    pub fn cyclic(n: usize) -> Self {
        let names = (0..n).map(|k| if k == 0 { "e".to_string() } else { format!("r{k}") }).collect();
        let table = (0..n).map(|a| (0..n).map(|b| (a + b) % n).collect()).collect();
        FiniteGroup::from_table(format!("C{n}"), names, table).expect("cyclic table")
    }

    /// `C_p x C_p` with element `(a, b)` at index `a p + b`.
    pub fn cyclic_square(p: usize) -> Self {
        let n = p * p;
        let names = (0..n).map(|k| format!("({},{})", k / p, k % p)).collect();
        let table = (0..n).map(|x| (0..n).map(|y| ((x / p + y / p) % p) * p + (x % p + y % p) % p).collect()).collect();
        FiniteGroup::from_table(format!("C{p}xC{p}"), names, table).expect("product table")
    }

    /// Dihedral group of order `2m` acting on the `m`-gon.
    pub fn dihedral(m: usize) -> Self {
        let rot = Permutation::shift(m);
        let refl = Permutation::new((0..m).map(|i| (m - i) % m).collect()).expect("reflection");
        let (mut g, _) = FiniteGroup::from_permutations(&format!("D{m}"), &[rot, refl]).expect("dihedral");
        g.name = format!("D{m}");
        g
    }

    pub fn symmetric(n: usize) -> Self {
        let mut gens = vec![Permutation::shift(n)];
        if n > 1 {
            gens.push(Permutation::transposition(n, 0, 1).expect("transposition"));
        }
        FiniteGroup::from_permutations(&format!("S{n}"), &gens).expect("symmetric").0
    }

    pub fn alternating4() -> Self {
        let a = Permutation::from_cycles(4, &[&[0, 1, 2]]).expect("3-cycle");
        let b = Permutation::from_cycles(4, &[&[1, 2, 3]]).expect("3-cycle");
        FiniteGroup::from_permutations("A4", &[a, b]).expect("A4").0
    }

    /// Quaternion group through its regular representation in `S_8`.
    pub fn quaternion() -> Self {
        FiniteGroup::from_permutations("Q8", &quaternion_regular_generators()).expect("Q8").0
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn order(&self) -> usize {
        self.names.len()
    }

    pub fn identity(&self) -> usize {
        self.identity
    }

    #[inline]
    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.table[a * self.order() + b]
    }

    pub fn inv(&self, a: usize) -> usize {
        self.inverses[a]
    }

    pub fn element_order(&self, a: usize) -> u64 {
        self.orders[a]
    }

    pub fn exponent(&self) -> u64 {
        self.orders.iter().fold(1, |acc, &o| num_integer::lcm(acc, o))
    }

    pub fn element_name(&self, a: usize) -> &str {
        &self.names[a]
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.names.iter().position(|n| n == name)
    }

    pub fn pow(&self, a: usize, exp: i64) -> usize {
        GroupOps::power(self, &a, exp)
    }

    pub fn is_abelian(&self) -> bool {
        let n = self.order();
        (0..n).all(|a| (0..n).all(|b| self.mul(a, b) == self.mul(b, a)))
    }

    /// Sorted element indices of the subgroup generated by `gens`.
    pub fn generated(&self, gens: &[usize]) -> Vec<usize> {
        let mut seen = BTreeSet::from([self.identity]);
        let mut queue = VecDeque::from([self.identity]);
        while let Some(x) = queue.pop_front() {
            for &g in gens {
                let y = self.mul(x, g);
                if seen.insert(y) {
                    queue.push_back(y);
                }
            }
        }
        seen.into_iter().collect()
    }

    /// Every subgroup generated by at most two elements, which is all
    /// subgroups for the small groups this crate works with.
    pub fn two_generated_subgroups(&self) -> Vec<Vec<usize>> {
        let n = self.order();
        let mut found = BTreeSet::new();
        for a in 0..n {
            for b in a..n {
                found.insert(self.generated(&[a, b]));
            }
        }
        found.into_iter().collect()
    }

    /// Text form: `table`, `names: ...`, then `|G|` rows of indices.
    pub fn to_text(&self) -> String {
        let n = self.order();
        let mut s = format!("table {}\nnames: {}\n", self.name, self.names.join(" "));
        for a in 0..n {
            let row: Vec<String> = (0..n).map(|b| self.mul(a, b).to_string()).collect();
            s.push_str(&row.join(" "));
            s.push('\n');
        }
        s
    }
}

impl FromStr for FiniteGroup {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let mut lines =
            s.lines().enumerate().map(|(i, l)| (i + 1, l.trim())).filter(|(_, l)| !l.is_empty() && !l.starts_with('#'));
        let (ln, header) = lines.next().ok_or_else(|| Error::parse(1, 1, "empty group file"))?;
        let name = header.strip_prefix("table").ok_or_else(|| Error::parse(ln, 1, "expected `table`"))?.trim();
        let (ln, names_line) = lines.next().ok_or_else(|| Error::parse(ln, 1, "missing names line"))?;
        let names: Vec<String> = names_line
            .strip_prefix("names:")
            .ok_or_else(|| Error::parse(ln, 1, "expected `names:`"))?
            .split_whitespace()
            .map(String::from)
            .collect();
        let mut table = Vec::new();
        for (ln, line) in lines {
            let row = line
                .split_whitespace()
                .map(|t| t.parse::<usize>().map_err(|_| Error::parse(ln, 1, format!("bad index `{t}`"))))
                .collect::<Result<Vec<_>>>()?;
            table.push(row);
        }
        FiniteGroup::from_table(if name.is_empty() { "G" } else { name }, names, table)
    }
}

impl fmt::Debug for FiniteGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "FiniteGroup({}, order {})", self.name, self.order())
    }
}

impl GroupOps for FiniteGroup {
    type Elem = usize;

    fn identity(&self) -> usize {
        self.identity
    }

    fn multiply(&self, a: &usize, b: &usize) -> usize {
        self.mul(*a, *b)
    }

    fn inverse(&self, a: &usize) -> usize {
        self.inv(*a)
    }

    fn check(&self, a: &usize) -> Result<()> {
        if *a < self.order() {
            Ok(())
        } else {
            Err(Error::MixedCarriers(format!("index {a} not in {}", self.name)))
        }
    }
}

fn cycle_notation(p: &Permutation) -> String {
    let cycles: Vec<String> = p
        .cycles()
        .into_iter()
        .filter(|c| c.len() > 1)
        .map(|c| format!("({})", c.iter().map(usize::to_string).collect::<Vec<_>>().join(",")))
        .collect();
    if cycles.is_empty() {
        "e".into()
    } else {
        cycles.concat()
    }
}

/// Left-regular action of `i` and `j` on `Q8 = {±1, ±i, ±j, ±k}`.
fn quaternion_regular_generators() -> Vec<Permutation> {
    // index = 2 * unit + sign, units 1,i,j,k = 0..4, sign 0 = +, 1 = -
    let mul_units = |a: usize, b: usize| -> (usize, bool) {
        // returns (unit, negate)
        match (a, b) {
            (0, x) | (x, 0) => (x, false),
            (x, y) if x == y => (0, true),
            (1, 2) => (3, false),
            (2, 3) => (1, false),
            (3, 1) => (2, false),
            (2, 1) => (3, true),
            (3, 2) => (1, true),
            (1, 3) => (2, true),
            _ => unreachable!(),
        }
    };
    let left = |g: usize| {
        let images = (0..8)
            .map(|x| {
                let (u, neg) = mul_units(g / 2, x / 2);
                let sign = (g % 2) ^ (x % 2) ^ usize::from(neg);
                2 * u + sign
            })
            .collect();
        Permutation::new(images).expect("regular action")
    };
    vec![left(2), left(4)]
}

/// Which length to put on a group of unitaries.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum UnitaryLength {
    /// `||1 - x||_2 / 2`.
    HilbertSchmidt,
    /// `||1 - x||_op / 2`, by power iteration.
    Operator,
}

/// An element of a [`LengthGroup`].
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum GroupElem {
    Perm(Permutation),
    Index(usize),
}

#[derive(Clone)]
enum Carrier {
    Symmetric(usize),
    Finite { group: Arc<FiniteGroup>, lengths: Vec<Scalar> },
}

/// A finite group together with an invariant length function.
#[derive(Clone)]
pub struct LengthGroup {
    name: String,
    carrier: Carrier,
}

impl fmt::Debug for LengthGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "LengthGroup({})", self.name)
    }
}

impl LengthGroup {
    /// `S_n` with the Hamming length.
    pub fn symmetric(n: usize) -> Self {
        LengthGroup { name: format!("S{n}/hamming"), carrier: Carrier::Symmetric(n) }
    }

    pub fn finite(group: Arc<FiniteGroup>, lengths: Vec<Scalar>) -> Result<Self> {
        if lengths.len() != group.order() {
            return Err(Error::Precondition("one length per element required".into()));
        }
        Ok(LengthGroup { name: group.name().to_string(), carrier: Carrier::Finite { group, lengths } })
    }

    /// The trivial length: 0 at the identity, 1 elsewhere.
    pub fn trivial_length(group: Arc<FiniteGroup>) -> Self {
        let lengths =
            (0..group.order()).map(|a| if a == group.identity() { Scalar::zero() } else { Scalar::one() }).collect();
        let name = format!("{}/trivial", group.name());
        LengthGroup { name, carrier: Carrier::Finite { group, lengths } }
    }

    /// The subgroup of `S_N` generated by `gens`, with Hamming lengths from `S_N`.
    pub fn from_permutations(name: &str, gens: &[Permutation]) -> Result<Self> {
        let (group, perms) = FiniteGroup::from_permutations(name, gens)?;
        let lengths = perms.iter().map(|p| Scalar::Exact(p.hamming_length())).collect();
        Ok(LengthGroup {
            name: format!("{name}/hamming"),
            carrier: Carrier::Finite { group: Arc::new(group), lengths },
        })
    }

    pub fn from_unitaries(name: &str, gens: &[ComplexMatrix], kind: UnitaryLength) -> Result<Self> {
        let (group, mats) = FiniteGroup::from_unitaries(name, gens, 1e-9)?;
        let lengths = mats
            .iter()
            .map(|m| match kind {
                UnitaryLength::HilbertSchmidt => Scalar::Approx(m.hs_length()),
                UnitaryLength::Operator => Scalar::Approx(m.op_length()),
            })
            .collect();
        let suffix = match kind {
            UnitaryLength::HilbertSchmidt => "hs",
            UnitaryLength::Operator => "op",
        };
        Ok(LengthGroup {
            name: format!("{name}/{suffix}"),
            carrier: Carrier::Finite { group: Arc::new(group), lengths },
        })
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn table(&self) -> Option<&FiniteGroup> {
        match &self.carrier {
            Carrier::Finite { group, .. } => Some(group),
            Carrier::Symmetric(_) => None,
        }
    }

    pub fn order(&self) -> u128 {
        match &self.carrier {
            Carrier::Symmetric(n) => factorial(*n),
            Carrier::Finite { group, .. } => group.order() as u128,
        }
    }

    pub fn length(&self, x: &GroupElem) -> Scalar {
        match (&self.carrier, x) {
            (Carrier::Symmetric(_), GroupElem::Perm(p)) => Scalar::Exact(p.hamming_length()),
            (Carrier::Finite { lengths, .. }, GroupElem::Index(i)) => lengths[*i],
            _ => panic!("element does not belong to {}", self.name),
        }
    }

    /// Every element, identity first. Fails above `cap`.
    pub fn elements(&self, cap: u128) -> Result<Vec<GroupElem>> {
        let order = self.order();
        if order > cap {
            return Err(Error::EnumerationCap { order, cap });
        }
        Ok(match &self.carrier {
            Carrier::Symmetric(n) => Permutation::all(*n).map(GroupElem::Perm).collect(),
            Carrier::Finite { group, .. } => {
                let e = group.identity();
                std::iter::once(e).chain((0..group.order()).filter(|&a| a != e)).map(GroupElem::Index).collect()
            }
        })
    }

    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> GroupElem {
        match &self.carrier {
            Carrier::Symmetric(n) => GroupElem::Perm(Permutation::random(*n, rng)),
            Carrier::Finite { group, .. } => GroupElem::Index(rng.gen_range(0..group.order())),
        }
    }

    pub fn distance(&self, x: &GroupElem, y: &GroupElem) -> Scalar {
        self.length(&self.multiply(x, &self.inverse(y)))
    }

    /// Check the invariant-length axioms: exhaustively on table-backed
    /// groups, on `samples` seeded triples otherwise. Doubles compare
    /// with the power-iteration tolerance as slack.
    pub fn check_length_axioms(&self, samples: usize, seed: u64) -> Result<()> {
        const SLACK: f64 = crate::metric::matrix::OP_NORM_TOL;
        let le = |a: Scalar, b: Scalar| match (a, b) {
            (Scalar::Exact(x), Scalar::Exact(y)) => x <= y,
            _ => a.to_f64() <= b.to_f64() + SLACK,
        };
        let eq = |a: Scalar, b: Scalar| le(a, b) && le(b, a);
        let check_pair = |x: &GroupElem, y: &GroupElem| -> Result<()> {
            let lx = self.length(x);
            let ly = self.length(y);
            let xy = self.multiply(x, y);
            if !le(self.length(&xy), lx.add(ly)) {
                return Err(Error::LengthAxiom(format!("subadditivity at ({x:?}, {y:?})")));
            }
            let conj = self.multiply(&self.multiply(x, y), &self.inverse(x));
            if !eq(self.length(&conj), ly) {
                return Err(Error::LengthAxiom(format!("conjugation invariance at ({x:?}, {y:?})")));
            }
            Ok(())
        };
        let check_one = |x: &GroupElem| -> Result<()> {
            let l = self.length(x);
            if l.to_f64() < -SLACK || l.to_f64() > 1.0 + SLACK {
                return Err(Error::LengthAxiom(format!("range at {x:?}")));
            }
            if !eq(self.length(&self.inverse(x)), l) {
                return Err(Error::LengthAxiom(format!("inverse symmetry at {x:?}")));
            }
            let is_id = self.is_identity(x);
            let zero = match l {
                Scalar::Exact(r) => r == Ratio::from_integer(0),
                Scalar::Approx(v) => v.abs() <= SLACK,
            };
            if is_id != zero {
                return Err(Error::LengthAxiom(format!("faithfulness at {x:?}")));
            }
            Ok(())
        };
        match &self.carrier {
            Carrier::Finite { group, .. } => {
                let all: Vec<GroupElem> = (0..group.order()).map(GroupElem::Index).collect();
                for x in &all {
                    check_one(x)?;
                    for y in &all {
                        check_pair(x, y)?;
                    }
                }
            }
            Carrier::Symmetric(_) => {
                let mut r = rng::rng(seed);
                for _ in 0..samples {
                    let x = self.sample(&mut r);
                    let y = self.sample(&mut r);
                    check_one(&x)?;
                    check_pair(&x, &y)?;
                }
                check_one(&self.identity())?;
            }
        }
        Ok(())
    }

    pub fn is_identity(&self, x: &GroupElem) -> bool {
        match (&self.carrier, x) {
            (Carrier::Symmetric(_), GroupElem::Perm(p)) => p.is_identity(),
            (Carrier::Finite { group, .. }, GroupElem::Index(i)) => *i == group.identity(),
            _ => false,
        }
    }

    pub fn describe(&self, x: &GroupElem) -> String {
        match (&self.carrier, x) {
            (Carrier::Finite { group, .. }, GroupElem::Index(i)) => group.element_name(*i).to_string(),
            (_, GroupElem::Perm(p)) => p.to_string(),
            (_, GroupElem::Index(i)) => format!("#{i}"),
        }
    }
}

impl GroupOps for LengthGroup {
    type Elem = GroupElem;

    fn identity(&self) -> GroupElem {
        match &self.carrier {
            Carrier::Symmetric(n) => GroupElem::Perm(Permutation::identity(*n)),
            Carrier::Finite { group, .. } => GroupElem::Index(group.identity()),
        }
    }

    fn multiply(&self, a: &GroupElem, b: &GroupElem) -> GroupElem {
        match (&self.carrier, a, b) {
            (Carrier::Symmetric(_), GroupElem::Perm(x), GroupElem::Perm(y)) => GroupElem::Perm(x.compose(y)),
            (Carrier::Finite { group, .. }, GroupElem::Index(x), GroupElem::Index(y)) => {
                GroupElem::Index(group.mul(*x, *y))
            }
            _ => panic!("mixed carriers in {}", self.name),
        }
    }

    fn inverse(&self, a: &GroupElem) -> GroupElem {
        match (&self.carrier, a) {
            (Carrier::Symmetric(_), GroupElem::Perm(x)) => GroupElem::Perm(x.inverse()),
            (Carrier::Finite { group, .. }, GroupElem::Index(x)) => GroupElem::Index(group.inv(*x)),
            _ => panic!("mixed carriers in {}", self.name),
        }
    }

    fn check(&self, a: &GroupElem) -> Result<()> {
        let ok = match (&self.carrier, a) {
            (Carrier::Symmetric(n), GroupElem::Perm(p)) => p.degree() == *n,
            (Carrier::Finite { group, .. }, GroupElem::Index(i)) => *i < group.order(),
            _ => false,
        };
        if ok {
            Ok(())
        } else {
            Err(Error::MixedCarriers(format!("{a:?} is not an element of {}", self.name)))
        }
    }
}

/// Small groups with natural lengths, used as a test and demo corpus.
/// Every entry has order at most 24.
pub fn catalog() -> Vec<LengthGroup> {
    let mut out = Vec::new();
    for n in [1usize, 2, 3, 4, 5, 6] {
        out.push(LengthGroup::from_permutations(&format!("C{n}"), &[Permutation::shift(n)]).expect("cyclic"));
        out.push(LengthGroup::trivial_length(Arc::new(FiniteGroup::cyclic(n))));
    }
    let klein = [
        Permutation::from_cycles(4, &[&[0, 1], &[2, 3]]).expect("klein"),
        Permutation::from_cycles(4, &[&[0, 2], &[1, 3]]).expect("klein"),
    ];
    out.push(LengthGroup::from_permutations("V4", &klein).expect("klein"));
    out.push(LengthGroup::trivial_length(Arc::new(FiniteGroup::cyclic_square(3))));
    for m in [3usize, 4, 5, 6] {
        let rot = Permutation::shift(m);
        let refl = Permutation::new((0..m).map(|i| (m - i) % m).collect()).expect("reflection");
        out.push(LengthGroup::from_permutations(&format!("D{m}"), &[rot, refl]).expect("dihedral"));
    }
    out.push(LengthGroup::trivial_length(Arc::new(FiniteGroup::dihedral(4))));
    out.push(LengthGroup::symmetric(3));
    out.push(LengthGroup::symmetric(4));
    out.push(LengthGroup::trivial_length(Arc::new(FiniteGroup::symmetric(3))));
    let a4 = [
        Permutation::from_cycles(4, &[&[0, 1, 2]]).expect("A4"),
        Permutation::from_cycles(4, &[&[1, 2, 3]]).expect("A4"),
    ];
    out.push(LengthGroup::from_permutations("A4", &a4).expect("A4"));
    out.push(LengthGroup::from_permutations("Q8", &quaternion_regular_generators()).expect("Q8"));
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::metric::word::word_eval;
    use crate::metric::word::Word;

    #[test]
    fn standard_groups_have_expected_orders() {
        assert_eq!(FiniteGroup::cyclic(6).order(), 6);
        assert_eq!(FiniteGroup::symmetric(3).order(), 6);
        assert_eq!(FiniteGroup::symmetric(4).order(), 24);
        assert_eq!(FiniteGroup::dihedral(4).order(), 8);
        assert_eq!(FiniteGroup::alternating4().order(), 12);
        assert_eq!(FiniteGroup::quaternion().order(), 8);
        assert_eq!(FiniteGroup::cyclic_square(3).order(), 9);
        assert_eq!(FiniteGroup::trivial().order(), 1);
    }

    #[test]
    fn quaternion_is_not_dihedral() {
        // Q8 has a single involution, D4 has five
        let inv = |g: &FiniteGroup| (0..g.order()).filter(|&a| g.element_order(a) == 2).count();
        assert_eq!(inv(&FiniteGroup::quaternion()), 1);
        assert_eq!(inv(&FiniteGroup::dihedral(4)), 5);
    }

    #[test]
    fn orders_and_exponent() {
        let s3 = FiniteGroup::symmetric(3);
        let mut orders: Vec<u64> = (0..6).map(|a| s3.element_order(a)).collect();
        orders.sort();
        assert_eq!(orders, vec![1, 2, 2, 2, 3, 3]);
        assert_eq!(s3.exponent(), 6);
        assert_eq!(FiniteGroup::dihedral(4).exponent(), 4);
    }

    #[test]
    fn rejects_bad_tables() {
        let names = vec!["a".to_string(), "b".to_string()];
        assert!(FiniteGroup::from_table("x", names.clone(), vec![vec![0, 0], vec![0, 0]]).is_err());
        assert!(FiniteGroup::from_table("x", names, vec![vec![0, 1]]).is_err());
    }

    #[test]
    fn text_round_trip() {
        let g = FiniteGroup::symmetric(3);
        let back: FiniteGroup = g.to_text().parse().unwrap();
        assert_eq!(back, g);
    }

    #[test]
    fn length_axioms_hold_on_catalog() {
        for g in catalog() {
            g.check_length_axioms(200, 1).unwrap_or_else(|e| panic!("{}: {e}", g.name()));
            assert!(g.order() <= 24);
        }
        LengthGroup::symmetric(7).check_length_axioms(500, 2).unwrap();
    }

    #[test]
    fn broken_length_is_reported() {
        let g = Arc::new(FiniteGroup::cyclic(3));
        let lengths = vec![Scalar::zero(), Scalar::from(crate::scalar::ratio(1, 2)), Scalar::one()];
        let lg = LengthGroup::finite(g, lengths).unwrap();
        assert!(matches!(lg.check_length_axioms(0, 0), Err(Error::LengthAxiom(_))));
    }

    #[test]
    fn unitary_groups() {
        use num_complex::Complex64;
        let i = Complex64::new(0.0, 1.0);
        let z = Complex64::new(0.0, 0.0);
        let one = Complex64::new(1.0, 0.0);
        let qi = ComplexMatrix::from_rows(&[vec![i, z], vec![z, -i]]).unwrap();
        let qj = ComplexMatrix::from_rows(&[vec![z, one], vec![-one, z]]).unwrap();
        let g = LengthGroup::from_unitaries("Q8", &[qi, qj], UnitaryLength::Operator).unwrap();
        assert_eq!(g.order(), 8);
        g.check_length_axioms(0, 0).unwrap();
    }

    #[test]
    fn word_eval_in_length_group() {
        let g = LengthGroup::symmetric(3);
        let x = GroupElem::Perm(Permutation::transposition(3, 0, 1).unwrap());
        let y = GroupElem::Perm(Permutation::transposition(3, 1, 2).unwrap());
        let w = Word::from_pairs(&[(0, 1), (1, 1), (0, -1), (1, -1)]);
        let c = word_eval(&g, &w, &[x, y]).unwrap();
        assert_eq!(g.length(&c), Scalar::one());
        let bad = word_eval(&g, &w, &[GroupElem::Index(0), GroupElem::Index(1)]);
        assert!(matches!(bad, Err(Error::MixedCarriers(_))));
    }

    #[test]
    fn subgroups_of_s3() {
        let s3 = FiniteGroup::symmetric(3);
        // trivial, three of order 2, one of order 3, whole group
        assert_eq!(s3.two_generated_subgroups().len(), 6);
    }
}
