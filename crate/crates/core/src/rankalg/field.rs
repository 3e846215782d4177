//! Arithmetic in prime fields `F_p`, `p < 2^31`.

use crate::error::{Error, Result};

pub const MAX_PRIME: u64 = 1 << 31;

pub fn is_prime(p: u64) -> bool {
    if p < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= p {
        if p.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

pub fn check_prime(p: u64) -> Result<()> {
    if p < MAX_PRIME && is_prime(p) {
        Ok(())
    } else {
        Err(Error::NotPrime(p))
    }
}

/// Residue of a signed integer.
pub fn reduce(x: i64, p: u64) -> u64 {
    x.rem_euclid(p as i64) as u64
}

pub fn add(a: u64, b: u64, p: u64) -> u64 {
    (a + b) % p
}

pub fn sub(a: u64, b: u64, p: u64) -> u64 {
    (a + p - b) % p
}

pub fn mul(a: u64, b: u64, p: u64) -> u64 {
    a * b % p
}

pub fn pow(mut a: u64, mut e: u64, p: u64) -> u64 {
    let mut acc = 1 % p;
    a %= p;
    while e > 0 {
        if e & 1 == 1 {
            acc = mul(acc, a, p);
        }
        a = mul(a, a, p);
        e >>= 1;
    }
    acc
}

/// Inverse of a nonzero residue, by Fermat.
pub fn inv(a: u64, p: u64) -> Option<u64> {
    (!a.is_multiple_of(p)).then(|| pow(a, p - 2, p))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn primes() {
        let small: Vec<u64> = (0..30).filter(|&p| is_prime(p)).collect();
        assert_eq!(small, vec![2, 3, 5, 7, 11, 13, 17, 19, 23, 29]);
        assert!(check_prime(2_147_483_647).is_ok());
        assert_eq!(check_prime(1 << 31), Err(Error::NotPrime(1 << 31)));
        assert_eq!(check_prime(9), Err(Error::NotPrime(9)));
    }

    #[test]
    fn inverses() {
        for p in [2u64, 3, 5, 7, 2_147_483_647] {
            for a in 1..p.min(50) {
                assert_eq!(mul(a, inv(a, p).unwrap(), p), 1);
            }
            assert_eq!(inv(0, p), None);
        }
        assert_eq!(reduce(-1, 5), 4);
    }
}
