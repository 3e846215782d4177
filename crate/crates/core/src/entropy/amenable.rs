//! Window restrictions `Y_F` of subshifts over `Z` and the tiling bound on
//! `(1/|F|) log |Y_F|`.

use std::collections::BTreeSet;

use num_bigint::BigUint;

use crate::approx::model::Lattice;
use crate::error::{Error, Result};

use super::subshift::{ln_big, Subshift, DEFAULT_MEMO_CAP};
use super::tiling::{boundary_ops, difference_set};

/// Default cap on words enumerated for a non-contiguous window.
pub const DEFAULT_WORD_CAP: u128 = 1 << 22;

fn as_lattice(s: &BTreeSet<i64>) -> BTreeSet<Vec<i64>> {
    s.iter().map(|&x| vec![x]).collect()
}

/// The patterns of `Y_F`: restrictions of points of `Y` to the window, with
/// symbols listed in increasing window order.
pub fn restrictions(
    y: &Subshift,
    window: &BTreeSet<i64>,
    memo_cap: usize,
    word_cap: u128,
) -> Result<BTreeSet<Vec<u8>>> {
    let (Some(&lo), Some(&hi)) = (window.first(), window.last()) else {
        return Err(Error::EmptyDomain);
    };
    let span = (hi - lo + 1) as usize;
    let words = y.graph(memo_cap)?.words(span, word_cap)?;
    Ok(words.iter().map(|w| window.iter().map(|&x| w[(x - lo) as usize]).collect()).collect())
}

/// `|Y_F|`; contiguous windows are counted without enumeration.
pub fn restriction_count(y: &Subshift, window: &BTreeSet<i64>, memo_cap: usize, word_cap: u128) -> Result<BigUint> {
    let (Some(&lo), Some(&hi)) = (window.first(), window.last()) else {
        return Err(Error::EmptyDomain);
    };
    if (hi - lo + 1) as usize == window.len() {
        return Ok(y.graph(memo_cap)?.count(window.len()));
    }
    Ok(BigUint::from(restrictions(y, window, memo_cap, word_cap)?.len()))
}

#[derive(Debug, Clone)]
pub struct AmenableBound {
    pub y_e: BigUint,
    pub y_f: BigUint,
    pub e_prime: usize,
    /// `|∂_{E'} F|`.
    pub boundary: usize,
    /// `(1/|F|) log |Y_F|`.
    pub lhs: f64,
    /// `log k - (1/|E'| - |∂_{E'}F|/|F|) log(k^|E| / (k^|E| - 1))`; `None`
    /// when `Y_E` is all of `A^E`.
    pub rhs: Option<f64>,
    pub holds: Option<bool>,
}

impl AmenableBound {
    pub fn vacuous(&self) -> bool {
        self.rhs.is_none()
    }
}

pub const BOUND_SLACK: f64 = 1e-12;

pub fn amenable_bound_check(y: &Subshift, e: &BTreeSet<i64>, f: &BTreeSet<i64>) -> Result<AmenableBound> {
    if f.is_empty() {
        return Err(Error::EmptyDomain);
    }
    if !e.contains(&0) {
        return Err(Error::Precondition("E must contain 0".into()));
    }
    let z = Lattice(1);
    let (el, fl) = (as_lattice(e), as_lattice(f));
    let e_prime = difference_set(&z, &el)?;
    let boundary = boundary_ops(&z, &fl, &e_prime)?.boundary.len();
    let y_e = restriction_count(y, e, DEFAULT_MEMO_CAP, DEFAULT_WORD_CAP)?;
    let y_f = restriction_count(y, f, DEFAULT_MEMO_CAP, DEFAULT_WORD_CAP)?;
    let lhs = ln_big(&y_f) / f.len() as f64;
    let k = y.alphabet() as f64;
    let full = BigUint::from(y.alphabet()).pow(e.len() as u32);
    let rhs = (y_e < full).then(|| {
        let c = 1.0 / e_prime.len() as f64 - boundary as f64 / f.len() as f64;
        // log(K / (K - 1)) = -log(1 - 1/K)
        let gain = -(-k.powi(e.len() as i32).recip()).ln_1p();
        k.ln() - c * gain
    });
    let holds = rhs.map(|r| lhs <= r + BOUND_SLACK);
    Ok(AmenableBound { y_e, y_f, e_prime: e_prime.len(), boundary, lhs, rhs, holds })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn iv(a: i64, b: i64) -> BTreeSet<i64> {
        (a..b).collect()
    }

    #[test]
    fn golden_mean_bound() {
        let r = amenable_bound_check(&Subshift::golden_mean(), &iv(0, 2), &iv(0, 12)).unwrap();
        assert_eq!(r.y_e, BigUint::from(3u32));
        assert_eq!(r.y_f, BigUint::from(377u32));
        assert_eq!((r.e_prime, r.boundary), (3, 4));
        assert_eq!(r.holds, Some(true));
        assert!((r.rhs.unwrap() - 2f64.ln()).abs() < 1e-15);
    }

    #[test]
    fn no_000_bound() {
        let y = Subshift::no_zero_run(3);
        let r = amenable_bound_check(&y, &iv(0, 3), &iv(0, 15)).unwrap();
        assert_eq!(r.y_e, BigUint::from(7u32));
        assert_eq!(r.holds, Some(true));
        // a long window where the bound has content
        let r = amenable_bound_check(&y, &iv(0, 3), &iv(0, 200)).unwrap();
        assert!(r.rhs.unwrap() < 2f64.ln());
        assert_eq!(r.holds, Some(true));
    }

    #[test]
    fn full_shift_is_vacuous() {
        let r = amenable_bound_check(&Subshift::full(2).unwrap(), &iv(0, 2), &iv(0, 10)).unwrap();
        assert!(r.vacuous());
        assert_eq!(r.holds, None);
    }

    #[test]
    fn gapped_windows() {
        let y = Subshift::golden_mean();
        let w: BTreeSet<i64> = [0, 2].into_iter().collect();
        // x_0 and x_2 are independent in the golden mean shift
        assert_eq!(restriction_count(&y, &w, DEFAULT_MEMO_CAP, DEFAULT_WORD_CAP).unwrap(), BigUint::from(4u32));
        let w: BTreeSet<i64> = [-1, 0].into_iter().collect();
        assert_eq!(restrictions(&y, &w, DEFAULT_MEMO_CAP, DEFAULT_WORD_CAP).unwrap().len(), 3);
    }
}
