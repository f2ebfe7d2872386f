//! Dense row-major complex matrices.

use std::fmt;
use std::ops::{Add, Index, IndexMut, Mul, Sub};

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::layout::MAX_DIM;

pub const C0: Complex64 = Complex64::new(0.0, 0.0);
pub const C1: Complex64 = Complex64::new(1.0, 0.0);

/// Hermiticity slack accepted by [`hermitian_eigenvalues`].
pub const HERMITIAN_INPUT_TOL: f64 = 1e-8;

#[derive(Clone, PartialEq)]
pub struct ComplexMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Complex64>,
}

impl ComplexMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            data: vec![C0; rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for k in 0..n {
            m[(k, k)] = C1;
        }
        m
    }

    pub fn from_vec(rows: usize, cols: usize, data: Vec<Complex64>) -> Result<Self> {
        if rows == 0 || cols == 0 {
            return Err(Error::Argument("matrix dimensions must be positive".into()));
        }
        if data.len() != rows * cols {
            return Err(Error::Argument(format!(
                "{} entries for a {rows}x{cols} matrix",
                data.len()
            )));
        }
        Ok(Self { rows, cols, data })
    }

    pub fn from_rows(rows: &[Vec<Complex64>]) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|row| row.len() != c) {
            return Err(Error::Argument("ragged rows".into()));
        }
        Self::from_vec(r, c, rows.concat())
    }

    pub fn from_real_rows(rows: &[&[f64]]) -> Result<Self> {
        let rows: Vec<Vec<Complex64>> = rows
            .iter()
            .map(|r| r.iter().map(|&x| Complex64::new(x, 0.0)).collect())
            .collect();
        Self::from_rows(&rows)
    }

    pub fn diagonal(values: &[Complex64]) -> Self {
        let mut m = Self::zeros(values.len(), values.len());
        for (k, &v) in values.iter().enumerate() {
            m[(k, k)] = v;
        }
        m
    }

    /// `|u⟩⟨v|`.
    pub fn outer(u: &[Complex64], v: &[Complex64]) -> Self {
        let mut m = Self::zeros(u.len(), v.len());
        for (i, &ui) in u.iter().enumerate() {
            for (j, &vj) in v.iter().enumerate() {
                m.data[i * v.len() + j] = ui * vj.conj();
            }
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn as_slice(&self) -> &[Complex64] {
        &self.data
    }

    pub(crate) fn as_mut_slice(&mut self) -> &mut [Complex64] {
        &mut self.data
    }

    pub fn row(&self, r: usize) -> &[Complex64] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn trace(&self) -> Complex64 {
        (0..self.rows.min(self.cols)).map(|k| self[(k, k)]).sum()
    }

    pub fn adjoint(&self) -> Self {
        let mut out = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out[(j, i)] = self[(i, j)].conj();
            }
        }
        out
    }

    pub fn transpose(&self) -> Self {
        let mut out = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out[(j, i)] = self[(i, j)];
            }
        }
        out
    }

    pub fn conj(&self) -> Self {
        self.map(|z| z.conj())
    }

    pub fn map(&self, f: impl Fn(Complex64) -> Complex64) -> Self {
        Self {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|&z| f(z)).collect(),
        }
    }

    pub fn scale(&self, s: Complex64) -> Self {
        self.map(|z| z * s)
    }

    pub fn matmul(&self, rhs: &Self) -> Result<Self> {
        if self.cols != rhs.rows {
            return Err(Error::Argument(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows, self.cols, rhs.rows, rhs.cols
            )));
        }
        let mut out = Self::zeros(self.rows, rhs.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self[(i, k)];
                if a == C0 {
                    continue;
                }
                let src = rhs.row(k);
                let dst = &mut out.data[i * rhs.cols..(i + 1) * rhs.cols];
                for (d, &b) in dst.iter_mut().zip(src) {
                    *d += a * b;
                }
            }
        }
        Ok(out)
    }

    pub fn apply(&self, v: &[Complex64]) -> Result<Vec<Complex64>> {
        if v.len() != self.cols {
            return Err(Error::Argument(format!(
                "vector of length {} against {} columns",
                v.len(),
                self.cols
            )));
        }
        Ok((0..self.rows)
            .map(|i| self.row(i).iter().zip(v).map(|(&a, &b)| a * b).sum())
            .collect())
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.data.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    /// Largest entrywise `|m_ij - conj(m_ji)|`.
    pub fn hermitian_deviation(&self) -> f64 {
        if !self.is_square() {
            return f64::INFINITY;
        }
        let mut worst: f64 = 0.0;
        for i in 0..self.rows {
            for j in i..self.cols {
                worst = worst.max((self[(i, j)] - self[(j, i)].conj()).norm());
            }
        }
        worst
    }

    pub fn is_hermitian(&self, tol: f64) -> bool {
        self.hermitian_deviation() <= tol
    }

    pub fn is_unitary(&self, tol: f64) -> bool {
        self.is_square()
            && self
                .adjoint()
                .matmul(self)
                .map(|p| frobenius_distance(&p, &Self::identity(self.rows)).unwrap_or(f64::INFINITY) <= tol)
                .unwrap_or(false)
    }

}

impl Index<(usize, usize)> for ComplexMatrix {
    type Output = Complex64;

    fn index(&self, (r, c): (usize, usize)) -> &Complex64 {
        &self.data[r * self.cols + c]
    }
}

impl IndexMut<(usize, usize)> for ComplexMatrix {
    fn index_mut(&mut self, (r, c): (usize, usize)) -> &mut Complex64 {
        &mut self.data[r * self.cols + c]
    }
}

fn zip_entries(a: &ComplexMatrix, b: &ComplexMatrix, f: impl Fn(Complex64, Complex64) -> Complex64) -> ComplexMatrix {
    assert_eq!(
        (a.rows, a.cols),
        (b.rows, b.cols),
        "entrywise operation on mismatched shapes"
    );
    ComplexMatrix {
        rows: a.rows,
        cols: a.cols,
        data: a.data.iter().zip(&b.data).map(|(&x, &y)| f(x, y)).collect(),
    }
}

impl Add for &ComplexMatrix {
    type Output = ComplexMatrix;

    fn add(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        zip_entries(self, rhs, |x, y| x + y)
    }
}

impl Sub for &ComplexMatrix {
    type Output = ComplexMatrix;

    fn sub(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        zip_entries(self, rhs, |x, y| x - y)
    }
}

/// Panics on mismatched inner dimensions; use [`ComplexMatrix::matmul`] for a checked product.
impl Mul for &ComplexMatrix {
    type Output = ComplexMatrix;

    fn mul(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        self.matmul(rhs).expect("matrix product dimension mismatch")
    }
}

impl fmt::Debug for ComplexMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "ComplexMatrix {}x{} [", self.rows, self.cols)?;
        for r in 0..self.rows {
            let row: Vec<String> = self
                .row(r)
                .iter()
                .map(|z| format!("{:+.4}{:+.4}i", z.re, z.im))
                .collect();
            writeln!(f, "  {}", row.join(" "))?;
        }
        write!(f, "]")
    }
}

/// Kronecker product `a ⊗ b`.
pub fn kron(a: &ComplexMatrix, b: &ComplexMatrix) -> Result<ComplexMatrix> {
    let rows = a.rows * b.rows;
    let cols = a.cols * b.cols;
    if rows > MAX_DIM || cols > MAX_DIM {
        return Err(Error::Capacity(format!(
            "{rows}x{cols} Kronecker product exceeds cap of {MAX_DIM}"
        )));
    }
    let mut out = ComplexMatrix::zeros(rows, cols);
    for ar in 0..a.rows {
        for ac in 0..a.cols {
            let s = a[(ar, ac)];
            if s == C0 {
                continue;
            }
            for br in 0..b.rows {
                let dst = (ar * b.rows + br) * cols + ac * b.cols;
                for (d, &x) in out.data[dst..dst + b.cols].iter_mut().zip(b.row(br)) {
                    *d = s * x;
                }
            }
        }
    }
    Ok(out)
}

/// Kronecker product of two vectors.
pub fn kron_vec(a: &[Complex64], b: &[Complex64]) -> Vec<Complex64> {
    a.iter()
        .flat_map(|&x| b.iter().map(move |&y| x * y))
        .collect()
}

pub fn frobenius_distance(a: &ComplexMatrix, b: &ComplexMatrix) -> Result<f64> {
    if (a.rows, a.cols) != (b.rows, b.cols) {
        return Err(Error::Argument(format!(
            "cannot compare {}x{} with {}x{}",
            a.rows, a.cols, b.rows, b.cols
        )));
    }
    Ok(a.data
        .iter()
        .zip(&b.data)
        .map(|(x, y)| (x - y).norm_sqr())
        .sum::<f64>()
        .sqrt())
}

/// Real eigenvalues of a Hermitian matrix, in descending order.
///
/// Backed by nalgebra's Hermitian (complex symmetric) eigensolver. The input
/// is symmetrized as `(m + m†)/2` first so that deviations below
/// [`HERMITIAN_INPUT_TOL`] do not leak into the spectrum.
pub fn hermitian_eigenvalues(m: &ComplexMatrix) -> Result<Vec<f64>> {
    if !m.is_square() {
        return Err(Error::Argument(format!(
            "eigenvalues of a non-square {}x{} matrix",
            m.rows, m.cols
        )));
    }
    let dev = m.hermitian_deviation();
    if dev > HERMITIAN_INPUT_TOL {
        return Err(Error::Argument(format!(
            "matrix is not Hermitian (deviation {dev:.3e})"
        )));
    }
    let sym = (&m.clone() + &m.adjoint()).scale(Complex64::new(0.5, 0.0));
    let mut values = Vec::with_capacity(sym.rows);
    for block in nonzero_blocks(&sym) {
        values.extend(block_eigenvalues(&sym, &block)?);
    }
    values.sort_by(|a, b| b.total_cmp(a));
    Ok(values)
}

/// Connected components of the nonzero pattern. A Hermitian matrix is
/// unitarily a direct sum over these, so each block can be solved alone.
fn nonzero_blocks(m: &ComplexMatrix) -> Vec<Vec<usize>> {
    let n = m.rows;
    let mut component = vec![usize::MAX; n];
    let mut blocks = Vec::new();
    for seed in 0..n {
        if component[seed] != usize::MAX {
            continue;
        }
        let id = blocks.len();
        component[seed] = id;
        let mut members = vec![seed];
        let mut k = 0;
        while k < members.len() {
            let r = members[k];
            for (c, z) in m.row(r).iter().enumerate() {
                if component[c] == usize::MAX && (z.re != 0.0 || z.im != 0.0) {
                    component[c] = id;
                    members.push(c);
                }
            }
            k += 1;
        }
        members.sort_unstable();
        blocks.push(members);
    }
    blocks
}

fn block_eigenvalues(m: &ComplexMatrix, block: &[usize]) -> Result<Vec<f64>> {
    if let [i] = block {
        return Ok(vec![m[(*i, *i)].re]);
    }
    let sub = DMatrix::from_fn(block.len(), block.len(), |r, c| m[(block[r], block[c])]);
    let values: Vec<f64> = nalgebra::linalg::SymmetricEigen::new(sub.clone())
        .eigenvalues
        .iter()
        .copied()
        .collect();
    if values.iter().all(|x| x.is_finite()) {
        return Ok(values);
    }
    // The tridiagonal QR iteration occasionally breaks down on very sparse
    // input; Schur form is slower but has not been seen to.
    let values: Vec<f64> = nalgebra::linalg::Schur::new(sub)
        .eigenvalues()
        .map(|ev| ev.iter().map(|z| z.re).collect())
        .unwrap_or_default();
    if values.len() == block.len() && values.iter().all(|x| x.is_finite()) {
        Ok(values)
    } else {
        Err(Error::Invariant(format!(
            "eigensolver did not converge on a {}x{} block",
            block.len(),
            block.len()
        )))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    /// Characteristic-polynomial coefficients via Faddeev–LeVerrier:
    /// det(λI - M) = λⁿ + c₁λⁿ⁻¹ + ... + cₙ.
    fn char_poly(m: &ComplexMatrix) -> Vec<Complex64> {
        let n = m.rows();
        let mut coeffs = vec![C1];
        let mut mk = ComplexMatrix::zeros(n, n);
        for k in 1..=n {
            let shifted = &mk + &ComplexMatrix::identity(n).scale(*coeffs.last().unwrap());
            mk = m * &shifted;
            coeffs.push(-mk.trace() / k as f64);
        }
        coeffs
    }

    /// Elementary symmetric polynomials of the eigenvalues must match the
    /// characteristic polynomial coefficients up to sign.
    fn assert_matches_char_poly(m: &ComplexMatrix, eig: &[f64]) {
        let poly = char_poly(m);
        let mut e = vec![1.0];
        for &lam in eig {
            let mut next = vec![0.0; e.len() + 1];
            for (k, &ek) in e.iter().enumerate() {
                next[k] += ek;
                next[k + 1] += ek * lam;
            }
            e = next;
        }
        for k in 1..poly.len() {
            let expected = if k % 2 == 0 { e[k] } else { -e[k] };
            assert!(
                (poly[k] - c(expected, 0.0)).norm() < 1e-9,
                "coefficient {k}: {} vs {}",
                poly[k],
                expected
            );
        }
    }

    #[test]
    fn kron_examples() {
        let i2 = ComplexMatrix::identity(2);
        assert_eq!(kron(&i2, &i2).unwrap(), ComplexMatrix::identity(4));
        let x = ComplexMatrix::from_real_rows(&[&[0.0, 1.0], &[1.0, 0.0]]).unwrap();
        let one = ComplexMatrix::identity(1);
        assert_eq!(kron(&x, &one).unwrap(), x);
        let k = kron(&ComplexMatrix::identity(4), &ComplexMatrix::identity(4)).unwrap();
        assert_eq!((k.rows(), k.cols()), (16, 16));
    }

    #[test]
    fn kron_ordering_is_big_endian() {
        let a = ComplexMatrix::from_real_rows(&[&[1.0, 2.0], &[3.0, 4.0]]).unwrap();
        let b = ComplexMatrix::from_real_rows(&[&[0.0, 5.0], &[6.0, 7.0]]).unwrap();
        let k = kron(&a, &b).unwrap();
        assert_eq!(k[(0, 1)], c(5.0, 0.0));
        assert_eq!(k[(3, 2)], c(24.0, 0.0));
        assert_eq!(k[(2, 3)], c(20.0, 0.0));
    }

    #[test]
    fn kron_capacity() {
        let big = ComplexMatrix::identity(128);
        assert!(matches!(kron(&big, &big), Err(Error::Capacity(_))));
    }

    #[test]
    fn frobenius_examples() {
        let m = ComplexMatrix::from_rows(&[vec![c(1.0, 2.0), c(0.0, -1.0)]]).unwrap();
        assert_eq!(frobenius_distance(&m, &m).unwrap(), 0.0);
        let d = frobenius_distance(&ComplexMatrix::identity(2), &ComplexMatrix::zeros(2, 2)).unwrap();
        assert!((d - 2f64.sqrt()).abs() < 1e-15);
        let n = ComplexMatrix::zeros(1, 2);
        assert_eq!(
            frobenius_distance(&m, &n).unwrap(),
            frobenius_distance(&n, &m).unwrap()
        );
        assert!(frobenius_distance(&m, &ComplexMatrix::zeros(2, 1)).is_err());
    }

    #[test]
    fn eigenvalues_identity_and_projector() {
        assert_eq!(
            hermitian_eigenvalues(&ComplexMatrix::identity(4))
                .unwrap()
                .iter()
                .map(|x| (x * 1e12).round() / 1e12)
                .collect::<Vec<_>>(),
            vec![1.0; 4]
        );
        let h = 0.5f64.sqrt();
        let phi = [c(h, 0.0), C0, C0, c(h, 0.0)];
        let ev = hermitian_eigenvalues(&ComplexMatrix::outer(&phi, &phi)).unwrap();
        for (got, want) in ev.iter().zip([1.0, 0.0, 0.0, 0.0]) {
            assert!((got - want).abs() < 1e-12);
        }
    }

    #[test]
    fn eigenvalues_reject_non_hermitian() {
        let m = ComplexMatrix::from_real_rows(&[&[0.0, 1.0], &[0.0, 0.0]]).unwrap();
        assert!(matches!(hermitian_eigenvalues(&m), Err(Error::Argument(_))));
        assert!(hermitian_eigenvalues(&ComplexMatrix::zeros(2, 3)).is_err());
    }

    #[test]
    fn eigenvalues_against_characteristic_polynomial() {
        let cases = [
            ComplexMatrix::from_rows(&[
                vec![c(2.0, 0.0), c(1.0, -1.0)],
                vec![c(1.0, 1.0), c(-1.0, 0.0)],
            ])
            .unwrap(),
            ComplexMatrix::from_rows(&[
                vec![c(1.0, 0.0), c(0.5, 0.2), c(0.0, -0.3)],
                vec![c(0.5, -0.2), c(0.0, 0.0), c(0.7, 0.0)],
                vec![c(0.0, 0.3), c(0.7, 0.0), c(-2.0, 0.0)],
            ])
            .unwrap(),
            ComplexMatrix::from_rows(&[
                vec![c(0.3, 0.0), c(0.1, 0.1), c(0.0, 0.0), c(0.2, -0.1)],
                vec![c(0.1, -0.1), c(0.2, 0.0), c(0.05, 0.0), c(0.0, 0.0)],
                vec![c(0.0, 0.0), c(0.05, 0.0), c(0.4, 0.0), c(0.0, 0.1)],
                vec![c(0.2, 0.1), c(0.0, 0.0), c(0.0, -0.1), c(0.1, 0.0)],
            ])
            .unwrap(),
        ];
        for m in &cases {
            let ev = hermitian_eigenvalues(m).unwrap();
            assert!(ev.windows(2).all(|w| w[0] >= w[1]));
            assert!((ev.iter().sum::<f64>() - m.trace().re).abs() < 1e-8);
            assert_matches_char_poly(m, &ev);
        }
    }

    #[test]
    fn interleaved_blocks_split_cleanly() {
        // two 2x2 blocks on indices {0,3} and {1,4}, index 2 isolated
        let mut m = ComplexMatrix::zeros(5, 5);
        m[(0, 0)] = c(1.0, 0.0);
        m[(0, 3)] = c(0.0, 1.0);
        m[(3, 0)] = c(0.0, -1.0);
        m[(3, 3)] = c(1.0, 0.0);
        m[(1, 1)] = c(3.0, 0.0);
        m[(1, 4)] = c(1.0, 0.0);
        m[(4, 1)] = c(1.0, 0.0);
        m[(4, 4)] = c(3.0, 0.0);
        m[(2, 2)] = c(-0.5, 0.0);
        let blocks = nonzero_blocks(&m);
        assert_eq!(blocks, vec![vec![0, 3], vec![1, 4], vec![2]]);
        let ev = hermitian_eigenvalues(&m).unwrap();
        let expected = [4.0, 2.0, 2.0, 0.0, -0.5];
        for (x, y) in ev.iter().zip(expected) {
            assert!((x - y).abs() < 1e-12, "{ev:?}");
        }
        assert_matches_char_poly(&m, &ev);
    }

    #[test]
    fn sparse_rank_one_projector() {
        let n = 256;
        let mut v = vec![C0; n];
        for k in [3, 60, 129, 250] {
            v[k] = c(0.5, 0.0);
        }
        let ev = hermitian_eigenvalues(&ComplexMatrix::outer(&v, &v)).unwrap();
        assert!(ev.iter().all(|x| x.is_finite()));
        assert!((ev[0] - 1.0).abs() < 1e-12);
        assert!(ev[1..].iter().all(|x| x.abs() < 1e-12));
    }
}
