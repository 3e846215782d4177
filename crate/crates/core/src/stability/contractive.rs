//! Commutator-contractive lengths and the small-defect check for the
//! Higman relations.

use crate::error::{Error, Result};
use crate::metric::group::{GroupElem, LengthGroup};
use crate::metric::word::{word_eval, GroupOps};
use crate::scalar::{ratio, Scalar};

use super::presentation::Presentation;

/// Slack for comparisons that involve floating-point lengths.
pub const FLOAT_SLACK: f64 = 1e-9;

/// Relator defects up to this bound force short generators.
pub fn higman_threshold() -> Scalar {
    Scalar::Exact(ratio(1, 176))
}

fn le(a: Scalar, b: Scalar) -> bool {
    match (a, b) {
        (Scalar::Exact(x), Scalar::Exact(y)) => x <= y,
        _ => a.to_f64() <= b.to_f64() + FLOAT_SLACK,
    }
}

fn lt(a: Scalar, b: Scalar) -> bool {
    match (a, b) {
        (Scalar::Exact(x), Scalar::Exact(y)) => x < y,
        _ => a.to_f64() < b.to_f64() + FLOAT_SLACK,
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Violation {
    pub x: String,
    pub y: String,
    pub commutator_length: Scalar,
    pub bound: Scalar,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ContractiveReport {
    pub group: String,
    pub pairs_checked: usize,
    /// Pairs with `l([x, y]) > 4 l(x) l(y)`.
    pub violations: Vec<Violation>,
    /// `l(a_{i+1} a_i a_{i+1}^-1 a_i^-2)` for `i` mod 4.
    pub relator_defects: Vec<Scalar>,
    pub lengths: Vec<Scalar>,
    /// `eps < 1/176` and every relator defect is at most `eps`.
    pub hypothesis: bool,
    /// Whether every `l(a_i) < 4 eps`; `None` when the hypothesis fails.
    pub conclusion: Option<bool>,
}

impl ContractiveReport {
    pub fn contractive(&self) -> bool {
        self.violations.is_empty()
    }

    /// No violations, and the conclusion holds whenever the hypothesis does.
    pub fn passed(&self) -> bool {
        self.contractive() && self.conclusion != Some(false)
    }
}

/// (a) `l([x, y]) <= 4 l(x) l(y)` over all pairs of `g`; (b) for the tuple
/// `a`, whether small Higman relator defects force `l(a_i) < 4 eps`.
pub fn commutator_contractive_suite(
    g: &LengthGroup,
    a: &[GroupElem; 4],
    eps: Scalar,
    cap: u128,
) -> Result<ContractiveReport> {
    g.check_length_axioms(256, 0)?;
    for x in a {
        g.check(x)?;
    }
    let all = g.elements(cap)?;
    let lengths_all: Vec<Scalar> = all.iter().map(|x| g.length(x)).collect();
    let four = Scalar::Exact(ratio(4, 1));
    let mut violations = Vec::new();
    let mut pairs = 0;
    for (x, lx) in all.iter().zip(&lengths_all) {
        let xi = g.inverse(x);
        for (y, ly) in all.iter().zip(&lengths_all) {
            pairs += 1;
            let c = g.multiply(&g.multiply(&g.multiply(x, y), &xi), &g.inverse(y));
            let lc = g.length(&c);
            let bound = four.mul(*lx).mul(*ly);
            if !le(lc, bound) {
                violations.push(Violation { x: g.describe(x), y: g.describe(y), commutator_length: lc, bound });
            }
        }
    }
    let h = Presentation::higman();
    let relator_defects =
        h.relators.iter().map(|w| word_eval(g, w, a).map(|v| g.length(&v))).collect::<Result<Vec<_>>>()?;
    let lengths: Vec<Scalar> = a.iter().map(|x| g.length(x)).collect();
    let small = match eps {
        Scalar::Exact(e) => e < ratio(1, 176) && e > ratio(0, 1),
        Scalar::Approx(e) => e < 1.0 / 176.0 && e > 0.0,
    };
    if eps.to_f64().is_nan() {
        return Err(Error::Precondition("epsilon is not a number".into()));
    }
    let hypothesis = small && relator_defects.iter().all(|d| le(*d, eps));
    let conclusion = hypothesis.then(|| lengths.iter().all(|l| lt(*l, four.mul(eps))));
    Ok(ContractiveReport {
        group: g.name().to_string(),
        pairs_checked: pairs,
        violations,
        relator_defects,
        lengths,
        hypothesis,
        conclusion,
    })
}
