//! Evaluation of formulas in a length group.

use std::collections::BTreeMap;
use std::sync::Arc;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::metric::group::{GroupElem, LengthGroup};
use crate::metric::word::GroupOps;
use crate::rng;
use crate::scalar::{Ratio, Scalar};

use super::ast::Formula;

pub const DEFAULT_ENUM_CAP: u128 = 5040;
pub const DEFAULT_WORK_CAP: u128 = 100_000_000;

/// Values of parameters and free variables.
pub type Assignment = BTreeMap<String, GroupElem>;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Mode {
    Exact,
    /// Each quantifier ranges over `samples` seeded uniform draws.
    Sampled {
        samples: usize,
        seed: u64,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct EvalConfig {
    pub mode: Mode,
    pub enum_cap: u128,
    pub work_cap: u128,
}

impl EvalConfig {
    pub fn exact() -> Self {
        EvalConfig { mode: Mode::Exact, enum_cap: DEFAULT_ENUM_CAP, work_cap: DEFAULT_WORK_CAP }
    }

    pub fn sampled(samples: usize, seed: u64) -> Self {
        EvalConfig { mode: Mode::Sampled { samples, seed }, ..EvalConfig::exact() }
    }
}

impl Default for EvalConfig {
    fn default() -> Self {
        EvalConfig::exact()
    }
}

/// What the returned value is known to be relative to the true value.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum BoundKind {
    Exact,
    Lower,
    Upper,
    Mixed,
}

impl BoundKind {
    fn join(self, other: BoundKind) -> BoundKind {
        use BoundKind::*;
        match (self, other) {
            (Exact, k) | (k, Exact) => k,
            (a, b) if a == b => a,
            _ => Mixed,
        }
    }

    fn flip(self) -> BoundKind {
        match self {
            BoundKind::Lower => BoundKind::Upper,
            BoundKind::Upper => BoundKind::Lower,
            k => k,
        }
    }

    pub fn as_str(&self) -> &'static str {
        match self {
            BoundKind::Exact => "exact",
            BoundKind::Lower => "lower",
            BoundKind::Upper => "upper",
            BoundKind::Mixed => "mixed",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Evaluation {
    pub value: Scalar,
    pub kind: BoundKind,
}

enum Slot {
    Bound(usize),
    Fixed(GroupElem),
}

enum Plan {
    Len(Vec<(Slot, i64)>),
    Max(Vec<Plan>),
    Min(Vec<Plan>),
    Sum(Box<Plan>, Box<Plan>),
    Diff(Box<Plan>, Box<Plan>),
    Scale(Ratio, Box<Plan>),
    Abs(Box<Plan>),
    Clamp(Box<Plan>),
    Const(Ratio),
    Quant { sup: bool, domain: Arc<Vec<GroupElem>>, body: Box<Plan> },
}

struct Compiler<'a> {
    group: &'a LengthGroup,
    assignment: &'a Assignment,
    config: EvalConfig,
    all: Option<Arc<Vec<GroupElem>>>,
    preorder: u64,
    scope: Vec<String>,
    work: u128,
}

impl Compiler<'_> {
    fn domain(&mut self, node: u64) -> Result<Arc<Vec<GroupElem>>> {
        match self.config.mode {
            Mode::Exact => {
                if self.all.is_none() {
                    self.all = Some(Arc::new(self.group.elements(self.config.enum_cap)?));
                }
                Ok(self.all.clone().expect("enumerated"))
            }
            Mode::Sampled { samples, seed } => {
                let mut r = rng::stream(seed, node);
                Ok(Arc::new((0..samples).map(|_| self.group.sample(&mut r)).collect()))
            }
        }
    }

    /// `mult` is the number of environments the node is evaluated in.
    fn compile(&mut self, f: &Formula, mult: u128) -> Result<Plan> {
        let node = self.preorder;
        self.preorder += 1;
        let boxed = |p: Plan| Box::new(p);
        Ok(match f {
            Formula::Len(w) => {
                self.work = self.work.saturating_add(mult);
                if self.work > self.config.work_cap {
                    return Err(Error::WorkCap { work: self.work, cap: self.config.work_cap });
                }
                let mut slots = Vec::with_capacity(w.len());
                for (name, e) in w {
                    let slot = match self.scope.iter().rposition(|v| v == name) {
                        Some(i) => Slot::Bound(i),
                        None => {
                            let x = self.assignment.get(name).ok_or_else(|| Error::MissingAssignment(name.clone()))?;
                            self.group.check(x)?;
                            Slot::Fixed(x.clone())
                        }
                    };
                    slots.push((slot, *e));
                }
                Plan::Len(slots)
            }
            Formula::Max(v) => Plan::Max(v.iter().map(|c| self.compile(c, mult)).collect::<Result<_>>()?),
            Formula::Min(v) => Plan::Min(v.iter().map(|c| self.compile(c, mult)).collect::<Result<_>>()?),
            Formula::Sum(a, b) => Plan::Sum(boxed(self.compile(a, mult)?), boxed(self.compile(b, mult)?)),
            Formula::Diff(a, b) => Plan::Diff(boxed(self.compile(a, mult)?), boxed(self.compile(b, mult)?)),
            Formula::Scale(r, a) => Plan::Scale(*r, boxed(self.compile(a, mult)?)),
            Formula::Abs(a) => Plan::Abs(boxed(self.compile(a, mult)?)),
            Formula::Clamp(a) => Plan::Clamp(boxed(self.compile(a, mult)?)),
            Formula::Const(r) => Plan::Const(*r),
            Formula::Sup(v, body) | Formula::Inf(v, body) => {
                let domain = self.domain(node)?;
                if domain.is_empty() {
                    return Err(Error::EmptyDomain);
                }
                self.scope.push(v.clone());
                let inner = self.compile(body, mult.saturating_mul(domain.len() as u128));
                self.scope.pop();
                Plan::Quant { sup: matches!(f, Formula::Sup(..)), domain, body: boxed(inner?) }
            }
        })
    }
}

struct Runner<'a> {
    group: &'a LengthGroup,
    sampled: bool,
}

impl Runner<'_> {
    fn run(&self, p: &Plan, env: &mut Vec<GroupElem>) -> Evaluation {
        let exact = |value| Evaluation { value, kind: BoundKind::Exact };
        match p {
            Plan::Len(w) => {
                let mut x = self.group.identity();
                for (slot, e) in w {
                    let base = match slot {
                        Slot::Bound(i) => &env[*i],
                        Slot::Fixed(g) => g,
                    };
                    x = self.group.multiply(&x, &self.group.power(base, *e));
                }
                exact(self.group.length(&x))
            }
            Plan::Max(v) | Plan::Min(v) => {
                let is_max = matches!(p, Plan::Max(_));
                let mut it = v.iter().map(|c| self.run(c, env));
                let first = it.next().expect("parser guarantees an argument");
                it.fold(first, |acc, e| Evaluation {
                    value: if is_max { acc.value.max(e.value) } else { acc.value.min(e.value) },
                    kind: acc.kind.join(e.kind),
                })
            }
            Plan::Sum(a, b) => {
                let (x, y) = (self.run(a, env), self.run(b, env));
                Evaluation { value: x.value.add(y.value), kind: x.kind.join(y.kind) }
            }
            Plan::Diff(a, b) => {
                let (x, y) = (self.run(a, env), self.run(b, env));
                Evaluation { value: x.value.sub(y.value), kind: x.kind.join(y.kind.flip()) }
            }
            Plan::Scale(r, a) => {
                let x = self.run(a, env);
                let kind = if *r < Ratio::from_integer(0) { x.kind.flip() } else { x.kind };
                Evaluation { value: Scalar::Exact(*r).mul(x.value), kind }
            }
            Plan::Abs(a) => {
                let x = self.run(a, env);
                let kind = if x.kind == BoundKind::Exact { BoundKind::Exact } else { BoundKind::Mixed };
                Evaluation { value: x.value.abs(), kind }
            }
            Plan::Clamp(a) => {
                let x = self.run(a, env);
                Evaluation { value: x.value.clamp01(), kind: x.kind }
            }
            Plan::Const(r) => exact(Scalar::Exact(*r)),
            Plan::Quant { sup, domain, body } => {
                let mut best: Option<Evaluation> = None;
                for g in domain.iter() {
                    env.push(g.clone());
                    let e = self.run(body, env);
                    env.pop();
                    best = Some(self.pick(*sup, best, e));
                }
                self.finish(*sup, best.expect("nonempty domain"))
            }
        }
    }

    fn pick(&self, sup: bool, best: Option<Evaluation>, e: Evaluation) -> Evaluation {
        match best {
            None => e,
            Some(b) => Evaluation {
                value: if sup { b.value.max(e.value) } else { b.value.min(e.value) },
                kind: b.kind.join(e.kind),
            },
        }
    }

    fn finish(&self, sup: bool, e: Evaluation) -> Evaluation {
        if self.sampled {
            let k = if sup { BoundKind::Lower } else { BoundKind::Upper };
            Evaluation { value: e.value, kind: e.kind.join(k) }
        } else {
            e
        }
    }

    /// Top level: spread the outermost quantifier over the thread pool.
    fn run_top(&self, p: &Plan) -> Evaluation {
        match p {
            Plan::Quant { sup, domain, body } if domain.len() >= 64 => {
                let best = domain
                    .par_iter()
                    .map(|g| {
                        let mut env = vec![g.clone()];
                        self.run(body, &mut env)
                    })
                    .reduce_with(|a, b| self.pick(*sup, Some(a), b))
                    .expect("nonempty domain");
                self.finish(*sup, best)
            }
            _ => self.run(p, &mut Vec::new()),
        }
    }
}

/// Evaluate `f` in `group`. Free names must be given in `assignment`.
pub fn evaluate(f: &Formula, group: &LengthGroup, assignment: &Assignment, config: EvalConfig) -> Result<Evaluation> {
    let mut c = Compiler { group, assignment, config, all: None, preorder: 0, scope: vec![], work: 0 };
    let plan = c.compile(f, 1)?;
    let runner = Runner { group, sampled: matches!(config.mode, Mode::Sampled { .. }) };
    Ok(runner.run_top(&plan))
}

#[derive(Debug, Clone, PartialEq)]
pub struct SeriesPoint {
    pub n: usize,
    pub value: Scalar,
    pub kind: BoundKind,
    /// Value minus the previous point's value.
    pub step: Option<Scalar>,
}

/// Values of a sentence on `S_n` with the Hamming length, one per degree.
pub fn sentence_series(f: &Formula, degrees: &[usize], config: EvalConfig) -> Result<Vec<SeriesPoint>> {
    if !f.is_sentence() {
        return Err(Error::MissingAssignment(f.free_names().join(", ")));
    }
    let mut out: Vec<SeriesPoint> = Vec::with_capacity(degrees.len());
    for &n in degrees {
        let e = evaluate(f, &LengthGroup::symmetric(n), &Assignment::new(), config)?;
        let step = out.last().map(|p| e.value.sub(p.value));
        out.push(SeriesPoint { n, value: e.value, kind: e.kind, step });
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::formula::parse::{parse_formula, parse_sentence};
    use crate::metric::group::FiniteGroup;
    use crate::metric::perm::Permutation;
    use crate::scalar::ratio;

    fn exact(text: &str, g: &LengthGroup) -> Evaluation {
        evaluate(&parse_sentence(text).unwrap(), g, &Assignment::new(), EvalConfig::exact()).unwrap()
    }

    const COMM: &str = "sup x . sup y . len(x*y*x^-1*y^-1)";

    #[test]
    fn commutator_sentence_detects_abelian() {
        let c6 = LengthGroup::trivial_length(Arc::new(FiniteGroup::cyclic(6)));
        assert_eq!(exact(COMM, &c6).value, Scalar::zero());
        let s3 = LengthGroup::symmetric(3);
        let e = exact(COMM, &s3);
        assert_eq!(e.value, Scalar::one());
        assert_eq!(e.kind, BoundKind::Exact);
    }

    #[test]
    fn min_abs_sentence_in_s3() {
        let e = exact("sup x . min(abs(len(x) - 1), len(x))", &LengthGroup::symmetric(3));
        assert_eq!(e.value, Scalar::Exact(ratio(1, 3)));
    }

    #[test]
    fn unit_has_length_zero() {
        assert_eq!(exact("len(1)", &LengthGroup::symmetric(4)).value, Scalar::zero());
    }

    #[test]
    fn parameters() {
        let f = parse_formula("len(g) + sup x . len(x*g*x^-1) - len(g)", &["g"]).unwrap();
        let mut a = Assignment::new();
        a.insert("g".into(), GroupElem::Perm(Permutation::transposition(4, 0, 1).unwrap()));
        let e = evaluate(&f, &LengthGroup::symmetric(4), &a, EvalConfig::exact()).unwrap();
        assert_eq!(e.value, Scalar::Exact(ratio(1, 2)));
        let missing = evaluate(&f, &LengthGroup::symmetric(4), &Assignment::new(), EvalConfig::exact());
        assert_eq!(missing, Err(Error::MissingAssignment("g".into())));
        a.insert("g".into(), GroupElem::Index(0));
        let mixed = evaluate(&f, &LengthGroup::symmetric(4), &a, EvalConfig::exact());
        assert!(matches!(mixed, Err(Error::MixedCarriers(_))));
    }

    #[test]
    fn caps() {
        let f = parse_sentence("sup x . len(x)").unwrap();
        let r = evaluate(&f, &LengthGroup::symmetric(8), &Assignment::new(), EvalConfig::exact());
        assert!(matches!(r, Err(Error::EnumerationCap { order: 40320, cap: 5040 })));
        let f = parse_sentence(COMM).unwrap();
        let cfg = EvalConfig { work_cap: 500, ..EvalConfig::exact() };
        assert!(matches!(
            evaluate(&f, &LengthGroup::symmetric(4), &Assignment::new(), cfg),
            Err(Error::WorkCap { work: 576, cap: 500 })
        ));
    }

    #[test]
    fn sampled_bound_kinds() {
        let s = LengthGroup::symmetric(9);
        let run = |t: &str| {
            evaluate(&parse_sentence(t).unwrap(), &s, &Assignment::new(), EvalConfig::sampled(50, 7)).unwrap()
        };
        assert_eq!(run("sup x . len(x)").kind, BoundKind::Lower);
        assert_eq!(run("inf x . len(x)").kind, BoundKind::Upper);
        assert_eq!(run("1 - (sup x . len(x))").kind, BoundKind::Upper);
        assert_eq!(run("-1 * sup x . len(x)").kind, BoundKind::Upper);
        assert_eq!(run("sup x . inf y . len(x*y)").kind, BoundKind::Mixed);
        assert_eq!(run("abs(sup x . len(x))").kind, BoundKind::Mixed);
        assert_eq!(run("len(1)").kind, BoundKind::Exact);
        // same seed, same value
        assert_eq!(run("sup x . sup y . len(x*y)"), run("sup x . sup y . len(x*y)"));
    }

    #[test]
    fn series_examples() {
        let f = parse_sentence("sup x . len(x)").unwrap();
        let s = sentence_series(&f, &[2, 3, 4, 5, 6], EvalConfig::exact()).unwrap();
        assert!(s.iter().all(|p| p.value == Scalar::one()));
        assert_eq!(s[1].step, Some(Scalar::zero()));
        let f = parse_sentence(COMM).unwrap();
        let s = sentence_series(&f, &[3, 4, 5], EvalConfig::exact()).unwrap();
        assert!(s.iter().all(|p| p.value == Scalar::one()));
        // max(l, 1 - l) minimised over the Hamming spectrum {0} U {k/n : 2 <= k <= n}
        let f = parse_sentence("inf x . max(len(x), 1 - len(x))").unwrap();
        let s = sentence_series(&f, &[2, 3, 4, 5], EvalConfig::exact()).unwrap();
        for p in &s {
            let n = p.n as i64;
            let oracle =
                std::iter::once(0).chain(2..=n).map(|k| std::cmp::max(ratio(k, n), ratio(n - k, n))).min().unwrap();
            assert_eq!(p.value, Scalar::Exact(oracle), "n = {}", p.n);
        }
        let free = parse_formula("len(g)", &["g"]).unwrap();
        assert!(sentence_series(&free, &[2], EvalConfig::exact()).is_err());
    }
}
