//! Complex matrices with the normalized trace and Hilbert–Schmidt length.
//!
//! `tau(x) = tr(x) / n`, `||x||_2 = tau(x* x)^{1/2}`, `l(x) = ||x - 1||_2 / 2`.

use std::fmt;
use std::str::FromStr;

use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::Rng;
use rand_distr::StandardNormal;

use crate::error::{Error, Result};
use crate::scalar::Ratio;

use super::perm::Permutation;
use super::word::GroupOps;

pub const UNITARY_TOL: f64 = 1e-9;
pub const POLAR_STEP_TOL: f64 = 1e-13;
pub const POLAR_MAX_ITERS: usize = 60;
pub const POLAR_MIN_SINGULAR: f64 = 1e-8;
pub const OP_NORM_TOL: f64 = 1e-9;
pub const OP_NORM_MAX_ITERS: usize = 500;

#[derive(Clone, PartialEq)]
pub struct ComplexMatrix(DMatrix<Complex64>);

/// Normalized trace, Hilbert–Schmidt norm and length of one matrix.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HsMetrics {
    pub trace: Complex64,
    pub hs_norm: f64,
    pub hs_length: f64,
}

impl ComplexMatrix {
    pub fn from_dmatrix(m: DMatrix<Complex64>) -> Result<Self> {
        if m.nrows() != m.ncols() || m.nrows() == 0 {
            return Err(Error::NonSquare { rows: m.nrows(), cols: m.ncols() });
        }
        Ok(ComplexMatrix(m))
    }

    pub fn from_rows(rows: &[Vec<Complex64>]) -> Result<Self> {
        let n = rows.len();
        if let Some(bad) = rows.iter().find(|r| r.len() != n) {
            return Err(Error::NonSquare { rows: n, cols: bad.len() });
        }
        ComplexMatrix::from_dmatrix(DMatrix::from_fn(n, n, |i, j| rows[i][j]))
    }

    pub fn identity(n: usize) -> Self {
        ComplexMatrix(DMatrix::identity(n, n))
    }

    pub fn diagonal(d: &[Complex64]) -> Self {
        let n = d.len();
        ComplexMatrix(DMatrix::from_fn(n, n, |i, j| if i == j { d[i] } else { Complex64::new(0.0, 0.0) }))
    }

    pub fn scaled(&self, s: Complex64) -> Self {
        ComplexMatrix(&self.0 * s)
    }

    pub fn dim(&self) -> usize {
        self.0.nrows()
    }

    pub fn inner(&self) -> &DMatrix<Complex64> {
        &self.0
    }

    pub fn get(&self, i: usize, j: usize) -> Complex64 {
        self.0[(i, j)]
    }

    pub fn adjoint(&self) -> Self {
        ComplexMatrix(self.0.adjoint())
    }

    pub fn mul(&self, other: &ComplexMatrix) -> Self {
        ComplexMatrix(&self.0 * &other.0)
    }

    pub fn add(&self, other: &ComplexMatrix) -> Self {
        ComplexMatrix(&self.0 + &other.0)
    }

    pub fn sub(&self, other: &ComplexMatrix) -> Self {
        ComplexMatrix(&self.0 - &other.0)
    }

    pub fn try_inverse(&self) -> Option<Self> {
        self.0.clone().try_inverse().map(ComplexMatrix)
    }

    pub fn kron(&self, other: &ComplexMatrix) -> Self {
        ComplexMatrix(self.0.kronecker(&other.0))
    }

    /// `tau(x) = tr(x) / n`.
    pub fn trace(&self) -> Complex64 {
        self.0.trace() / self.dim() as f64
    }

    /// `||x||_2 = tau(x* x)^{1/2}`, i.e. Frobenius norm over `sqrt(n)`.
    pub fn hs_norm(&self) -> f64 {
        let s: f64 = self.0.iter().map(|z| z.norm_sqr()).sum();
        (s / self.dim() as f64).sqrt()
    }

    pub fn hs_distance(&self, other: &ComplexMatrix) -> f64 {
        self.sub(other).hs_norm()
    }

    pub fn hs_length(&self) -> f64 {
        0.5 * self.hs_distance(&ComplexMatrix::identity(self.dim()))
    }

    pub fn hs_metrics(&self) -> HsMetrics {
        HsMetrics { trace: self.trace(), hs_norm: self.hs_norm(), hs_length: self.hs_length() }
    }

    /// `max{||x* x - 1||_2, ||x x* - 1||_2}`.
    pub fn unitarity_residual(&self) -> f64 {
        let id = ComplexMatrix::identity(self.dim());
        let a = self.adjoint().mul(self).sub(&id).hs_norm();
        let b = self.mul(&self.adjoint()).sub(&id).hs_norm();
        a.max(b)
    }

    pub fn is_unitary(&self, tol: f64) -> bool {
        self.unitarity_residual() <= tol
    }

    pub fn ensure_unitary(&self) -> Result<()> {
        let r = self.unitarity_residual();
        if r <= UNITARY_TOL {
            Ok(())
        } else {
            Err(Error::NotUnitary(r))
        }
    }

    /// `u^{(x)k}` as an `n^k`-dimensional unitary.
    pub fn tensor_power(&self, k: u32, cap: usize) -> Result<Self> {
        self.ensure_unitary()?;
        if k == 0 {
            return Err(Error::Precondition("tensor power needs k >= 1".into()));
        }
        let total = (self.dim() as u128).checked_pow(k).unwrap_or(u128::MAX);
        if total > cap as u128 {
            return Err(Error::DegreeOverflow { requested: total, cap });
        }
        let mut acc = self.clone();
        for _ in 1..k {
            acc = acc.kron(self);
        }
        Ok(acc)
    }

    /// `diag(u, 1_n)`; its trace has modulus below one unless `u = 1`.
    pub fn corner_pad(&self) -> Result<Self> {
        self.ensure_unitary()?;
        let n = self.dim();
        let mut m = DMatrix::identity(2 * n, 2 * n);
        m.view_mut((0, 0), (n, n)).copy_from(&self.0);
        Ok(ComplexMatrix(m))
    }

    /// Unitary polar factor of an invertible matrix via the Newton iteration
    /// `X <- (X + X^{-*}) / 2`.
    pub fn polar_repair(&self) -> Result<PolarReport> {
        let n = self.dim();
        let mut x = self.clone();
        let mut step = f64::INFINITY;
        for it in 1..=POLAR_MAX_ITERS {
            let inv = x.try_inverse().ok_or(Error::Singular(POLAR_MIN_SINGULAR))?;
            // smallest singular value >= 1 / ||X^-1||_F
            let frob_inv = inv.hs_norm() * (n as f64).sqrt();
            if !frob_inv.is_finite() || 1.0 / frob_inv < POLAR_MIN_SINGULAR {
                return Err(Error::Singular(1.0 / frob_inv));
            }
            let next = ComplexMatrix((&x.0 + inv.adjoint().0) * Complex64::new(0.5, 0.0));
            step = next.hs_distance(&x);
            x = next;
            if step < POLAR_STEP_TOL {
                let residual = x.unitarity_residual();
                return Ok(PolarReport { unitary: x, iterations: it, last_step: step, residual });
            }
        }
        Err(Error::NoConvergence { iterations: POLAR_MAX_ITERS, step, residual: x.unitarity_residual() })
    }

    /// `||x||_op` by power iteration on `x* x`.
    pub fn op_norm(&self) -> f64 {
        let m = self.adjoint().mul(self).0;
        let n = self.dim();
        // fixed, generic start vector
        let mut v =
            nalgebra::DVector::from_fn(n, |i, _| Complex64::new(1.0 + 0.37 * i as f64, 0.11 * (i as f64 + 1.0).sin()));
        v /= Complex64::new(v.norm(), 0.0);
        let mut lambda = 0.0f64;
        for _ in 0..OP_NORM_MAX_ITERS {
            let w = &m * &v;
            let norm = w.norm();
            if norm == 0.0 {
                return 0.0;
            }
            let next = norm;
            v = w / Complex64::new(norm, 0.0);
            let done = (next - lambda).abs() <= OP_NORM_TOL * next.max(1.0);
            lambda = next;
            if done {
                break;
            }
        }
        lambda.sqrt()
    }

    /// `l(x) = ||1 - x||_op / 2`.
    pub fn op_length(&self) -> f64 {
        0.5 * ComplexMatrix::identity(self.dim()).sub(self).op_norm()
    }

    /// Random unitary from the QR factor of a complex Gaussian matrix.
    pub fn random_unitary<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Self {
        let g = DMatrix::from_fn(n, n, |_, _| Complex64::new(rng.sample(StandardNormal), rng.sample(StandardNormal)));
        let qr = g.qr();
        let q = qr.q();
        let r = qr.r();
        // fix phases so the distribution does not depend on the QR sign convention
        let phases = DMatrix::from_fn(n, n, |i, j| {
            if i == j {
                let d = r[(i, i)];
                if d.norm() > 0.0 {
                    d / d.norm()
                } else {
                    Complex64::new(1.0, 0.0)
                }
            } else {
                Complex64::new(0.0, 0.0)
            }
        });
        ComplexMatrix(q * phases)
    }

    /// Random Hermitian matrix with standard Gaussian entries.
    pub fn random_hermitian<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Self {
        let g = DMatrix::from_fn(n, n, |_, _| Complex64::new(rng.sample(StandardNormal), rng.sample(StandardNormal)));
        ComplexMatrix((&g + g.adjoint()) * Complex64::new(0.5, 0.0))
    }

    fn approx_eq(&self, other: &ComplexMatrix, tol: f64) -> bool {
        self.dim() == other.dim() && self.hs_distance(other) <= tol
    }

    pub fn close_to(&self, other: &ComplexMatrix, tol: f64) -> bool {
        self.approx_eq(other, tol)
    }
}

/// Unitary polar factor together with convergence data.
#[derive(Debug, Clone)]
pub struct PolarReport {
    pub unitary: ComplexMatrix,
    pub iterations: usize,
    pub last_step: f64,
    pub residual: f64,
}

/// `P_s e_i = e_{s(i)}`.
pub fn permutation_matrix(p: &Permutation) -> ComplexMatrix {
    let n = p.degree();
    let mut m = DMatrix::from_element(n, n, Complex64::new(0.0, 0.0));
    for i in 0..n {
        m[(p.apply(i), i)] = Complex64::new(1.0, 0.0);
    }
    ComplexMatrix(m)
}

/// `tau(P_s)` read off the 0/1 diagonal as an exact rational.
pub fn permutation_matrix_trace_exact(m: &ComplexMatrix) -> Option<Ratio> {
    let n = m.dim();
    let mut ones = 0i64;
    for i in 0..n {
        let d = m.get(i, i);
        if d == Complex64::new(1.0, 0.0) {
            ones += 1;
        } else if d != Complex64::new(0.0, 0.0) {
            return None;
        }
    }
    Some(Ratio::new(ones, n as i64))
}

/// `U_n` as a carrier for word evaluation.
#[derive(Debug, Clone, Copy)]
pub struct UnitaryGroup(pub usize);

impl GroupOps for UnitaryGroup {
    type Elem = ComplexMatrix;

    fn identity(&self) -> ComplexMatrix {
        ComplexMatrix::identity(self.0)
    }

    fn multiply(&self, a: &ComplexMatrix, b: &ComplexMatrix) -> ComplexMatrix {
        a.mul(b)
    }

    /// Adjoint; elements are assumed unitary.
    fn inverse(&self, a: &ComplexMatrix) -> ComplexMatrix {
        a.adjoint()
    }

    fn check(&self, a: &ComplexMatrix) -> Result<()> {
        if a.dim() != self.0 {
            return Err(Error::MixedCarriers(format!("{}-dimensional matrix in U_{}", a.dim(), self.0)));
        }
        a.ensure_unitary()
    }
}

fn format_complex(z: Complex64) -> String {
    let im = if z.im == 0.0 { 0.0 } else { z.im };
    if im.is_sign_negative() {
        format!("{}-{}i", z.re, -im)
    } else {
        format!("{}+{}i", z.re, im)
    }
}

fn parse_complex(tok: &str) -> Option<Complex64> {
    let Some(body) = tok.strip_suffix('i') else {
        return tok.parse::<f64>().ok().map(|re| Complex64::new(re, 0.0));
    };
    let bytes = body.as_bytes();
    let split = (1..bytes.len())
        .rev()
        .find(|&k| (bytes[k] == b'+' || bytes[k] == b'-') && !matches!(bytes[k - 1], b'e' | b'E'))?;
    let re: f64 = body[..split].parse().ok()?;
    let im_text = &body[split..];
    let im: f64 = match im_text {
        "+" => 1.0,
        "-" => -1.0,
        t => t.parse().ok()?,
    };
    Some(Complex64::new(re, im))
}

impl fmt::Debug for ComplexMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for ComplexMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let n = self.dim();
        write!(f, "mat {n}:")?;
        for i in 0..n {
            writeln!(f)?;
            let row: Vec<String> = (0..n).map(|j| format_complex(self.0[(i, j)])).collect();
            write!(f, "{}", row.join(" "))?;
        }
        Ok(())
    }
}

impl FromStr for ComplexMatrix {
    type Err = Error;

    /// `mat n:` followed by `n` lines of `n` tokens `re+imi`.
    fn from_str(s: &str) -> Result<Self> {
        let mut lines = s.lines().enumerate().filter(|(_, l)| !l.trim().is_empty());
        let (hl, header) = lines.next().ok_or_else(|| Error::parse(1, 1, "empty matrix text"))?;
        let n: usize = header
            .trim()
            .strip_prefix("mat")
            .and_then(|r| r.trim().strip_suffix(':'))
            .and_then(|d| d.trim().parse().ok())
            .ok_or_else(|| Error::parse(hl + 1, 1, "expected `mat n:`"))?;
        let mut rows = Vec::with_capacity(n);
        for _ in 0..n {
            let (ln, line) = lines.next().ok_or_else(|| Error::parse(hl + 1, 1, "missing matrix rows"))?;
            let row = line
                .split_whitespace()
                .map(|t| parse_complex(t).ok_or_else(|| Error::parse(ln + 1, 1, format!("bad entry `{t}`"))))
                .collect::<Result<Vec<_>>>()?;
            if row.len() != n {
                return Err(Error::parse(ln + 1, 1, format!("expected {n} entries, found {}", row.len())));
            }
            rows.push(row);
        }
        ComplexMatrix::from_rows(&rows)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng;
    use crate::scalar::ratio;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn hs_metric_examples() {
        let m = ComplexMatrix::identity(3).hs_metrics();
        assert_eq!(m.trace, c(1.0, 0.0));
        assert_eq!(m.hs_norm, 1.0);
        assert_eq!(m.hs_length, 0.0);

        let neg = ComplexMatrix::identity(2).scaled(c(-1.0, 0.0)).hs_metrics();
        assert_eq!(neg.trace, c(-1.0, 0.0));
        assert!((neg.hs_length - 1.0).abs() < 1e-15);

        let d = ComplexMatrix::diagonal(&[c(0.0, 1.0), c(1.0, 0.0)]);
        let m = d.hs_metrics();
        assert_eq!(m.trace, c(0.5, 0.5));
        let closed_form = 0.5 * (1.0 - m.trace.re);
        assert!((m.hs_length.powi(2) - 0.25).abs() < 1e-12);
        assert!((m.hs_length.powi(2) - closed_form).abs() < 1e-12);
    }

    #[test]
    fn non_square_rejected() {
        let rows = vec![vec![c(1.0, 0.0), c(0.0, 0.0)]];
        assert!(matches!(ComplexMatrix::from_rows(&rows), Err(Error::NonSquare { .. })));
    }

    #[test]
    fn permutation_matrix_examples() {
        let id = permutation_matrix(&Permutation::identity(4));
        assert_eq!(id, ComplexMatrix::identity(4));
        let t = Permutation::transposition(4, 0, 1).unwrap();
        let pt = permutation_matrix(&t);
        assert_eq!(permutation_matrix_trace_exact(&pt), Some(ratio(1, 2)));
        assert!((pt.hs_length().powi(2) - 0.25).abs() < 1e-12);
        let cyc = permutation_matrix(&Permutation::shift(5));
        assert_eq!(permutation_matrix_trace_exact(&cyc), Some(ratio(0, 1)));
        assert!((cyc.hs_length() - 0.5f64.sqrt()).abs() < 1e-12);
    }

    #[test]
    fn permutation_matrix_is_homomorphism() {
        let mut r = rng::rng(3);
        for _ in 0..20 {
            let s = Permutation::random(6, &mut r);
            let t = Permutation::random(6, &mut r);
            assert_eq!(permutation_matrix(&s.compose(&t)), permutation_matrix(&s).mul(&permutation_matrix(&t)));
        }
    }

    #[test]
    fn tensor_power_and_corner_pad() {
        let id = ComplexMatrix::identity(2);
        assert!((id.tensor_power(3, 1000).unwrap().trace() - c(1.0, 0.0)).norm() < 1e-12);
        let u = ComplexMatrix::diagonal(&[c(-1.0, 0.0), c(1.0, 0.0)]);
        let t = u.tensor_power(2, 1000).unwrap().trace();
        assert!((t - u.trace() * u.trace()).norm() < 1e-10);
        assert!(t.norm() < 1e-12);
        let pad = id.scaled(c(-1.0, 0.0)).corner_pad().unwrap();
        assert_eq!(pad.dim(), 4);
        assert!(pad.trace().norm() < 1e-12);
        let bad = ComplexMatrix::identity(2).scaled(c(2.0, 0.0));
        assert!(matches!(bad.tensor_power(2, 100), Err(Error::NotUnitary(_))));
        assert!(matches!(bad.corner_pad(), Err(Error::NotUnitary(_))));
        assert!(matches!(u.tensor_power(20, 1000), Err(Error::DegreeOverflow { .. })));
    }

    #[test]
    fn polar_fixed_point_and_scalar() {
        let mut r = rng::rng(11);
        let u = ComplexMatrix::random_unitary(4, &mut r);
        assert!(u.is_unitary(1e-12));
        let w = u.polar_repair().unwrap().unitary;
        assert!(w.hs_distance(&u) < 1e-12);

        let a = ComplexMatrix::identity(3).scaled(c(2.0, 0.0));
        let w = a.polar_repair().unwrap().unitary;
        assert!(w.hs_distance(&ComplexMatrix::identity(3)) < 1e-12);
    }

    #[test]
    fn polar_beats_planted_unitary() {
        let mut r = rng::rng(5);
        for _ in 0..10 {
            let u = ComplexMatrix::random_unitary(4, &mut r);
            let h = ComplexMatrix::random_hermitian(4, &mut r);
            let a = u.mul(&ComplexMatrix::identity(4).add(&h.scaled(c(0.01, 0.0))));
            let rep = a.polar_repair().unwrap();
            assert!(rep.residual <= 1e-10);
            assert!(a.hs_distance(&rep.unitary) <= a.hs_distance(&u) + 1e-12);
        }
    }

    #[test]
    fn polar_singular() {
        let a = ComplexMatrix::diagonal(&[c(1.0, 0.0), c(0.0, 0.0)]);
        assert!(matches!(a.polar_repair(), Err(Error::Singular(_))));
        let a = ComplexMatrix::diagonal(&[c(1.0, 0.0), c(1e-12, 0.0)]);
        assert!(matches!(a.polar_repair(), Err(Error::Singular(_))));
    }

    #[test]
    fn op_norm_matches_svd() {
        let mut r = rng::rng(9);
        for n in 1..5 {
            let u = ComplexMatrix::random_unitary(n, &mut r);
            let x = ComplexMatrix::identity(n).sub(&u);
            let svd_max = x.inner().clone().singular_values().max();
            assert!((x.op_norm() - svd_max).abs() < 1e-6, "n={n}");
        }
    }

    #[test]
    fn text_round_trip() {
        let m =
            ComplexMatrix::from_rows(&[vec![c(1.0, 0.0), c(-0.5, 2.5e-3)], vec![c(0.0, -1.0), c(3.0, 1e-20)]]).unwrap();
        let text = m.to_string();
        assert!(text.starts_with("mat 2:\n"));
        let back: ComplexMatrix = text.parse().unwrap();
        assert_eq!(back, m);
        assert!("mat 2:\n1+0i 0+0i\n".parse::<ComplexMatrix>().is_err());
    }
}
