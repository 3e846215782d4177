//! Square matrices over `F_p` and the normalized rank `N(x) = rank(x) / n`.

use std::fmt;
use std::str::FromStr;

use rand::Rng;

use crate::error::{Error, Result};
use crate::metric::perm::Permutation;
use crate::scalar::Ratio;

use super::field;

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct PrimeFieldMatrix {
    p: u64,
    n: usize,
    /// Row-major, reduced mod `p`.
    entries: Vec<u64>,
}

impl PrimeFieldMatrix {
    pub fn new(p: u64, n: usize, entries: Vec<i64>) -> Result<Self> {
        field::check_prime(p)?;
        if n == 0 {
            return Err(Error::Precondition("dimension must be positive".into()));
        }
        if entries.len() != n * n {
            return Err(Error::NonSquare { rows: n, cols: entries.len() / n });
        }
        Ok(PrimeFieldMatrix { p, n, entries: entries.into_iter().map(|x| field::reduce(x, p)).collect() })
    }

    pub fn from_rows(p: u64, rows: &[Vec<i64>]) -> Result<Self> {
        let n = rows.len();
        if let Some(r) = rows.iter().find(|r| r.len() != n) {
            return Err(Error::NonSquare { rows: n, cols: r.len() });
        }
        PrimeFieldMatrix::new(p, n, rows.concat())
    }

    pub fn zero(p: u64, n: usize) -> Result<Self> {
        PrimeFieldMatrix::new(p, n, vec![0; n * n])
    }

    pub fn identity(p: u64, n: usize) -> Result<Self> {
        let mut m = PrimeFieldMatrix::zero(p, n)?;
        for i in 0..n {
            m.entries[i * n + i] = 1;
        }
        Ok(m)
    }

    /// `P_σ e_j = e_{σ(j)}`.
    pub fn permutation(s: &Permutation, p: u64) -> Result<Self> {
        let n = s.degree();
        let mut m = PrimeFieldMatrix::zero(p, n)?;
        for j in 0..n {
            m.entries[s.apply(j) * n + j] = 1;
        }
        Ok(m)
    }

    pub fn random<R: Rng + ?Sized>(p: u64, n: usize, rng: &mut R) -> Result<Self> {
        field::check_prime(p)?;
        let entries = (0..n * n).map(|_| rng.gen_range(0..p) as i64).collect();
        PrimeFieldMatrix::new(p, n, entries)
    }

    pub fn prime(&self) -> u64 {
        self.p
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn get(&self, i: usize, j: usize) -> u64 {
        self.entries[i * self.n + j]
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(|&x| x == 0)
    }

    fn check_same(&self, other: &Self) -> Result<()> {
        if self.p != other.p {
            return Err(Error::Precondition(format!("fields F_{} and F_{} differ", self.p, other.p)));
        }
        if self.n != other.n {
            return Err(Error::DegreeMismatch(self.n, other.n));
        }
        Ok(())
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check_same(other)?;
        let entries = self.entries.iter().zip(&other.entries).map(|(&a, &b)| field::add(a, b, self.p)).collect();
        Ok(PrimeFieldMatrix { entries, ..self.clone() })
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.check_same(other)?;
        let entries = self.entries.iter().zip(&other.entries).map(|(&a, &b)| field::sub(a, b, self.p)).collect();
        Ok(PrimeFieldMatrix { entries, ..self.clone() })
    }

    pub fn scale(&self, c: u64) -> Self {
        let c = c % self.p;
        PrimeFieldMatrix { entries: self.entries.iter().map(|&a| field::mul(a, c, self.p)).collect(), ..self.clone() }
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.check_same(other)?;
        let n = self.n;
        let p = self.p;
        let mut out = vec![0u64; n * n];
        for i in 0..n {
            for k in 0..n {
                let a = self.entries[i * n + k];
                if a == 0 {
                    continue;
                }
                for j in 0..n {
                    out[i * n + j] = (out[i * n + j] + a * other.entries[k * n + j]) % p;
                }
            }
        }
        Ok(PrimeFieldMatrix { p, n, entries: out })
    }

    pub fn transpose(&self) -> Self {
        let n = self.n;
        let entries = (0..n * n).map(|k| self.entries[(k % n) * n + k / n]).collect();
        PrimeFieldMatrix { entries, ..self.clone() }
    }

    /// Gaussian elimination; the pivot is the first nonzero entry of the
    /// column, columns taken left to right.
    pub fn rank(&self) -> usize {
        let n = self.n;
        let p = self.p;
        let mut m = self.entries.clone();
        let mut rank = 0;
        for col in 0..n {
            let Some(piv) = (rank..n).find(|&r| m[r * n + col] != 0) else { continue };
            if piv != rank {
                for j in 0..n {
                    m.swap(piv * n + j, rank * n + j);
                }
            }
            let inv = field::inv(m[rank * n + col], p).expect("pivot is nonzero");
            for r in rank + 1..n {
                let f = field::mul(m[r * n + col], inv, p);
                if f == 0 {
                    continue;
                }
                for j in col..n {
                    m[r * n + j] = field::sub(m[r * n + j], field::mul(f, m[rank * n + j], p), p);
                }
            }
            rank += 1;
        }
        rank
    }

    pub fn normalized_rank(&self) -> Ratio {
        Ratio::new(self.rank() as i64, self.n as i64)
    }
}

impl fmt::Debug for PrimeFieldMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for PrimeFieldMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "matrix p={} n={}", self.p, self.n)?;
        for i in 0..self.n {
            let row: Vec<String> = (0..self.n).map(|j| self.get(i, j).to_string()).collect();
            writeln!(f, "{}", row.join(" "))?;
        }
        Ok(())
    }
}

impl FromStr for PrimeFieldMatrix {
    type Err = Error;

    /// `matrix p=<p> n=<n>` followed by `n` rows of integers.
    fn from_str(s: &str) -> Result<Self> {
        let mut lines = s
            .lines()
            .enumerate()
            .map(|(i, l)| (i + 1, l.split('#').next().unwrap_or("").trim()))
            .filter(|(_, l)| !l.is_empty());
        let (hl, header) = lines.next().ok_or_else(|| Error::parse(1, 1, "empty matrix"))?;
        let mut p = None;
        let mut n = None;
        let mut words = header.split_whitespace();
        if words.next() != Some("matrix") {
            return Err(Error::parse(hl, 1, "expected `matrix p=<p> n=<n>`"));
        }
        for w in words {
            match w.split_once('=') {
                Some(("p", v)) => p = v.parse::<u64>().ok(),
                Some(("n", v)) => n = v.parse::<usize>().ok(),
                _ => return Err(Error::parse(hl, 1, format!("unexpected `{w}`"))),
            }
        }
        let (p, n) = match (p, n) {
            (Some(p), Some(n)) => (p, n),
            _ => return Err(Error::parse(hl, 1, "header needs `p=` and `n=`")),
        };
        let mut rows = Vec::with_capacity(n);
        for (ln, line) in lines {
            let row = line
                .split_whitespace()
                .map(|t| t.parse::<i64>().map_err(|_| Error::parse(ln, 1, format!("bad entry `{t}`"))))
                .collect::<Result<Vec<i64>>>()?;
            if row.len() != n {
                return Err(Error::parse(ln, 1, format!("expected {n} entries, found {}", row.len())));
            }
            rows.push(row);
        }
        if rows.len() != n {
            return Err(Error::parse(hl, 1, format!("expected {n} rows, found {}", rows.len())));
        }
        PrimeFieldMatrix::from_rows(p, &rows)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::ratio;

    #[test]
    fn simple_ranks() {
        assert_eq!(PrimeFieldMatrix::identity(7, 4).unwrap().normalized_rank(), ratio(1, 1));
        assert_eq!(PrimeFieldMatrix::zero(7, 4).unwrap().normalized_rank(), ratio(0, 1));
        // two independent rows, the others combinations of them
        let rows = vec![
            vec![1, 0, 2, 1, 0],
            vec![0, 1, 1, 2, 2],
            vec![1, 1, 0, 0, 2],
            vec![2, 0, 1, 2, 0],
            vec![2, 2, 0, 0, 1],
        ];
        let m = PrimeFieldMatrix::from_rows(3, &rows).unwrap();
        assert_eq!(m.normalized_rank(), ratio(2, 5));
        assert_eq!(m.transpose().rank(), 2);
    }

    #[test]
    fn errors() {
        assert_eq!(PrimeFieldMatrix::identity(4, 2), Err(Error::NotPrime(4)));
        assert!(PrimeFieldMatrix::from_rows(3, &[vec![1, 2], vec![1]]).is_err());
        let a = PrimeFieldMatrix::identity(3, 2).unwrap();
        let b = PrimeFieldMatrix::identity(5, 2).unwrap();
        assert!(a.mul(&b).is_err());
    }

    #[test]
    fn text_round_trip() {
        let m = PrimeFieldMatrix::from_rows(5, &[vec![1, -1], vec![7, 0]]).unwrap();
        assert_eq!(m.to_string().parse::<PrimeFieldMatrix>().unwrap(), m);
        assert!(matches!("matrix p=5 n=2\n1 2\n3\n".parse::<PrimeFieldMatrix>(), Err(Error::Parse { line: 3, .. })));
    }

    #[test]
    fn permutation_matrices_multiply() {
        let s = Permutation::shift(5);
        let t = Permutation::transposition(5, 1, 3).unwrap();
        let ps = PrimeFieldMatrix::permutation(&s, 2).unwrap();
        let pt = PrimeFieldMatrix::permutation(&t, 2).unwrap();
        assert_eq!(ps.mul(&pt).unwrap(), PrimeFieldMatrix::permutation(&s.compose(&t), 2).unwrap());
    }
}
