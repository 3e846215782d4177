//! Rank identities and inequalities for permutation matrices.

use crate::error::{Error, Result};
use crate::metric::perm::Permutation;
use crate::scalar::Ratio;

use super::field;
use super::matrix::PrimeFieldMatrix;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PermRankIdentity {
    /// `N(P_σ - I)`.
    pub lhs: Ratio,
    /// `1 - c(σ)/n` with `c` counting cycles, fixed points included.
    pub rhs: Ratio,
    pub equal: bool,
}

pub fn perm_rank_identity(s: &Permutation, p: u64) -> Result<PermRankIdentity> {
    let n = s.degree();
    let m = PrimeFieldMatrix::permutation(s, p)?.sub(&PrimeFieldMatrix::identity(p, n)?)?;
    let lhs = m.normalized_rank();
    let rhs = Ratio::from_integer(1) - Ratio::new(s.cycle_count() as i64, n as i64);
    Ok(PermRankIdentity { lhs, rhs, equal: lhs == rhs })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RankBoundReport {
    /// `N(Σ λ_i P_{σ_i})`.
    pub value: Ratio,
    /// `min_i (1 - l(σ_i))`.
    pub epsilon: Ratio,
    /// `(1 - ε k) / k^2`.
    pub bound: Ratio,
    pub holds: bool,
    /// `max_{i<j} (1 - l(σ_i^-1 σ_j))`, zero when `k = 1`.
    pub pair_epsilon: Ratio,
    /// `(1 - ε' k(k-1)/2) / k^2`, which the independent-set argument gives.
    pub pair_bound: Ratio,
    pub pair_holds: bool,
}

/// Compare `N(Σ λ_i P_{σ_i})` with the two lower bounds above.
///
/// The first bound only sees the fixed points of each `σ_i`, and fails when
/// two of the `σ_i` agree: `σ_1 = σ_2` fixed-point free with `λ = (1, -1)`
/// gives value 0 against bound 1/4. The second bound accounts for
/// coincidences `σ_i(s) = σ_j(s)` and always holds.
pub fn rank_lower_bound_probe(sigmas: &[Permutation], lambdas: &[u64], p: u64) -> Result<RankBoundReport> {
    field::check_prime(p)?;
    let k = sigmas.len();
    if k == 0 {
        return Err(Error::Precondition("at least one permutation".into()));
    }
    if lambdas.len() != k {
        return Err(Error::Precondition(format!("{k} permutations but {} coefficients", lambdas.len())));
    }
    if let Some(i) = lambdas.iter().position(|&l| l % p == 0) {
        return Err(Error::ZeroCoefficient(i));
    }
    let n = sigmas[0].degree();
    if let Some(s) = sigmas.iter().find(|s| s.degree() != n) {
        return Err(Error::DegreeMismatch(n, s.degree()));
    }
    let mut sum = PrimeFieldMatrix::zero(p, n)?;
    for (s, &l) in sigmas.iter().zip(lambdas) {
        sum = sum.add(&PrimeFieldMatrix::permutation(s, p)?.scale(l))?;
    }
    let value = sum.normalized_rank();
    let one = Ratio::from_integer(1);
    let kr = Ratio::from_integer(k as i64);
    let epsilon = sigmas.iter().map(|s| one - s.hamming_length()).min().expect("k >= 1");
    let bound = (one - epsilon * kr) / (kr * kr);
    let mut pair_epsilon = Ratio::from_integer(0);
    for i in 0..k {
        for j in i + 1..k {
            pair_epsilon = pair_epsilon.max(one - sigmas[i].hamming_distance(&sigmas[j]));
        }
    }
    let pairs = Ratio::from_integer((k * (k - 1) / 2) as i64);
    let pair_bound = (one - pair_epsilon * pairs) / (kr * kr);
    Ok(RankBoundReport {
        value,
        epsilon,
        bound,
        holds: value >= bound,
        pair_epsilon,
        pair_bound,
        pair_holds: value >= pair_bound,
    })
}

/// `max |N(xy - 1) - N(yx - 1)|` over the samples.
pub fn finite_rank_ring_probe(samples: &[(PrimeFieldMatrix, PrimeFieldMatrix)]) -> Result<Ratio> {
    let mut worst = Ratio::from_integer(0);
    for (x, y) in samples {
        let id = PrimeFieldMatrix::identity(x.prime(), x.dim())?;
        let a = x.mul(y)?.sub(&id)?.normalized_rank();
        let b = y.mul(x)?.sub(&id)?.normalized_rank();
        worst = worst.max(if a > b { a - b } else { b - a });
    }
    Ok(worst)
}

/// The rank-function axioms on one pair: `N(1) = 1`, `N(x) = 0` iff
/// `x = 0`, `N(xy) <= min(N(x), N(y))`, `N(x + y) <= N(x) + N(y)`.
pub fn rank_axioms_hold(x: &PrimeFieldMatrix, y: &PrimeFieldMatrix) -> Result<bool> {
    let id = PrimeFieldMatrix::identity(x.prime(), x.dim())?;
    let (nx, ny) = (x.normalized_rank(), y.normalized_rank());
    let zero = Ratio::from_integer(0);
    Ok(id.normalized_rank() == Ratio::from_integer(1)
        && (nx == zero) == x.is_zero()
        && (ny == zero) == y.is_zero()
        && x.mul(y)?.normalized_rank() <= nx.min(ny)
        && x.add(y)?.normalized_rank() <= nx + ny)
}
