//! Dense matrices over Q(i) with exact Gauss-Jordan elimination. Sizes here
//! are tiny (ambient dimension at most 64), so dense row-major storage and
//! cubic elimination are entirely adequate.

use crate::error::Error;
use crate::scalar::Scalar;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

pub type Vector = Vec<Scalar>;

pub fn vec_is_zero(v: &[Scalar]) -> bool {
    v.iter().all(Scalar::is_zero)
}

/// Hermitian inner product `<u, v> = sum_k u_k * conj(v_k)` in the standard
/// coordinates. Basis vectors are declared orthonormal for this pairing.
pub fn inner(u: &[Scalar], v: &[Scalar]) -> Scalar {
    assert_eq!(u.len(), v.len());
    let mut acc = Scalar::zero();
    for (a, b) in u.iter().zip(v) {
        acc += &a.mul(&b.conj());
    }
    acc
}

#[derive(Clone, PartialEq, Eq)]
pub struct Matrix {
    pub rows: usize,
    pub cols: usize,
    data: Vec<Scalar>,
}

impl Matrix {
    pub fn zero(rows: usize, cols: usize) -> Self {
        Matrix { rows, cols, data: vec![Scalar::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Matrix::zero(n, n);
        for k in 0..n {
            m.set(k, k, Scalar::one());
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<Scalar>>) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, |row| row.len());
        assert!(rows.iter().all(|row| row.len() == c), "ragged rows");
        Matrix { rows: r, cols: c, data: rows.into_iter().flatten().collect() }
    }

    pub fn from_columns(ambient: usize, cols: Vec<Vector>) -> Self {
        let mut m = Matrix::zero(ambient, cols.len());
        for (j, col) in cols.iter().enumerate() {
            assert_eq!(col.len(), ambient, "column length mismatch");
            for (i, x) in col.iter().enumerate() {
                m.set(i, j, x.clone());
            }
        }
        m
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> &Scalar {
        &self.data[i * self.cols + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: Scalar) {
        self.data[i * self.cols + j] = v;
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Scalar::is_zero)
    }

    pub fn column(&self, j: usize) -> Vector {
        (0..self.rows).map(|i| self.get(i, j).clone()).collect()
    }

    pub fn columns(&self) -> Vec<Vector> {
        (0..self.cols).map(|j| self.column(j)).collect()
    }

    /// Conjugate transpose. With the standard orthonormal pairing this is the
    /// adjoint: `<A u, v> = <u, A† v>`.
    pub fn dagger(&self) -> Matrix {
        let mut m = Matrix::zero(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                m.set(j, i, self.get(i, j).conj());
            }
        }
        m
    }

    /// Entrywise complex conjugate (no transpose).
    pub fn entrywise_conj(&self) -> Matrix {
        let mut m = self.clone();
        for x in &mut m.data {
            *x = x.conj();
        }
        m
    }

    pub fn scale(&self, c: &Scalar) -> Matrix {
        let mut m = self.clone();
        for x in &mut m.data {
            *x = (&*x).mul(c);
        }
        m
    }

    pub fn hstack(&self, other: &Matrix) -> Matrix {
        assert_eq!(self.rows, other.rows);
        let mut m = Matrix::zero(self.rows, self.cols + other.cols);
        for i in 0..self.rows {
            for j in 0..self.cols {
                m.set(i, j, self.get(i, j).clone());
            }
            for j in 0..other.cols {
                m.set(i, self.cols + j, other.get(i, j).clone());
            }
        }
        m
    }

    pub fn apply(&self, v: &[Scalar]) -> Vector {
        assert_eq!(v.len(), self.cols, "apply: dimension mismatch");
        (0..self.rows)
            .map(|i| {
                let mut acc = Scalar::zero();
                for j in 0..self.cols {
                    let e = self.get(i, j);
                    if !e.is_zero() && !v[j].is_zero() {
                        acc += &e.mul(&v[j]);
                    }
                }
                acc
            })
            .collect()
    }

    /// Reduced row echelon form together with the pivot column indices.
    pub fn rref(&self) -> (Matrix, Vec<usize>) {
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut row = 0;
        for col in 0..m.cols {
            if row == m.rows {
                break;
            }
            // find a pivot in this column at or below `row`
            let Some(p) = (row..m.rows).find(|&r| !m.get(r, col).is_zero()) else {
                continue;
            };
            if p != row {
                for j in 0..m.cols {
                    let a = m.get(row, j).clone();
                    let b = m.get(p, j).clone();
                    m.set(row, j, b);
                    m.set(p, j, a);
                }
            }
            let inv = m.get(row, col).inv();
            for j in col..m.cols {
                let v = m.get(row, j).mul(&inv.clone());
                m.set(row, j, v);
            }
            for r in 0..m.rows {
                if r != row && !m.get(r, col).is_zero() {
                    let f = m.get(r, col).clone();
                    for j in col..m.cols {
                        let v = m.get(r, j).clone() - m.get(row, j).mul(&f);
                        m.set(r, j, v);
                    }
                }
            }
            pivots.push(col);
            row += 1;
        }
        (m, pivots)
    }

    pub fn rank(&self) -> usize {
        self.rref().1.len()
    }

    /// Basis of the null space, one column per free variable, in the standard
    /// back-substituted form (free variable set to 1).
    pub fn kernel_basis(&self) -> Vec<Vector> {
        let (r, pivots) = self.rref();
        let mut basis = Vec::new();
        let mut pivot_of_col = vec![None; self.cols];
        for (row_idx, &pc) in pivots.iter().enumerate() {
            pivot_of_col[pc] = Some(row_idx);
        }
        for free in 0..self.cols {
            if pivot_of_col[free].is_some() {
                continue;
            }
            let mut v = vec![Scalar::zero(); self.cols];
            v[free] = Scalar::one();
            for (row_idx, &pc) in pivots.iter().enumerate() {
                v[pc] = -r.get(row_idx, free).clone();
            }
            basis.push(v);
        }
        basis
    }

    /// Solve `A x = b`; returns one solution or `Error::Inconsistent`.
    pub fn solve(&self, b: &[Scalar]) -> Result<Vector, Error> {
        assert_eq!(b.len(), self.rows);
        let rhs = Matrix::from_columns(self.rows, vec![b.to_vec()]);
        let aug = self.hstack(&rhs);
        let (r, pivots) = aug.rref();
        if pivots.contains(&self.cols) {
            return Err(Error::Inconsistent);
        }
        let mut x = vec![Scalar::zero(); self.cols];
        for (row_idx, &pc) in pivots.iter().enumerate() {
            x[pc] = r.get(row_idx, self.cols).clone();
        }
        Ok(x)
    }

    /// Inverse of a square matrix, or `Error::Singular`.
    pub fn inverse(&self) -> Result<Matrix, Error> {
        assert_eq!(self.rows, self.cols);
        let n = self.rows;
        let aug = self.hstack(&Matrix::identity(n));
        let (r, pivots) = aug.rref();
        if pivots.len() < n {
            return Err(Error::Singular);
        }
        let mut inv = Matrix::zero(n, n);
        for i in 0..n {
            for j in 0..n {
                inv.set(i, j, r.get(i, n + j).clone());
            }
        }
        Ok(inv)
    }

    /// `A^k` by repeated multiplication (exponents here are tiny).
    pub fn pow(&self, k: usize) -> Matrix {
        assert_eq!(self.rows, self.cols);
        let mut acc = Matrix::identity(self.rows);
        for _ in 0..k {
            acc = &acc * self;
        }
        acc
    }

    /// Anticommutator `AB + BA`.
    pub fn anticommutator(&self, other: &Matrix) -> Matrix {
        &(self * other) + &(other * self)
    }
}

impl<'a, 'b> Add<&'b Matrix> for &'a Matrix {
    type Output = Matrix;
    fn add(self, rhs: &Matrix) -> Matrix {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols));
        let mut m = self.clone();
        for (x, y) in m.data.iter_mut().zip(&rhs.data) {
            *x = x.clone() + y;
        }
        m
    }
}

impl<'a, 'b> Sub<&'b Matrix> for &'a Matrix {
    type Output = Matrix;
    fn sub(self, rhs: &Matrix) -> Matrix {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols));
        let mut m = self.clone();
        for (x, y) in m.data.iter_mut().zip(&rhs.data) {
            let mut v = x.clone();
            v -= y;
            *x = v;
        }
        m
    }
}

impl<'a, 'b> Mul<&'b Matrix> for &'a Matrix {
    type Output = Matrix;
    fn mul(self, rhs: &Matrix) -> Matrix {
        assert_eq!(self.cols, rhs.rows, "matrix product shape mismatch");
        let mut m = Matrix::zero(self.rows, rhs.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..rhs.cols {
                    let b = rhs.get(k, j);
                    if b.is_zero() {
                        continue;
                    }
                    let mut v = m.get(i, j).clone();
                    v += &a.mul(b);
                    m.set(i, j, v);
                }
            }
        }
        m
    }
}

impl<'a> Neg for &'a Matrix {
    type Output = Matrix;
    fn neg(self) -> Matrix {
        self.scale(&Scalar::from_int(-1))
    }
}

impl fmt::Debug for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "Matrix {}x{} [", self.rows, self.cols)?;
        for i in 0..self.rows {
            let row: Vec<String> = (0..self.cols).map(|j| self.get(i, j).to_string()).collect();
            writeln!(f, "  [{}]", row.join(", "))?;
        }
        write!(f, "]")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn s(n: i64) -> Scalar {
        Scalar::from_int(n)
    }

    #[test]
    fn rref_complex_pivot() {
        // [[1, i], [i, -1]] has rank 1: row2 = i * row1.
        let m = Matrix::from_rows(vec![
            vec![s(1), Scalar::i()],
            vec![Scalar::i(), s(-1)],
        ]);
        let (r, pivots) = m.rref();
        assert_eq!(pivots, vec![0]);
        assert_eq!(*r.get(0, 0), s(1));
        assert_eq!(*r.get(0, 1), Scalar::i());
        assert!(r.get(1, 0).is_zero() && r.get(1, 1).is_zero());
    }

    #[test]
    fn kernel_of_complex_row() {
        // ker [1, i] = span{(-i, 1)}.
        let m = Matrix::from_rows(vec![vec![s(1), Scalar::i()]]);
        let k = m.kernel_basis();
        assert_eq!(k.len(), 1);
        assert_eq!(k[0], vec![-Scalar::i(), s(1)]);
    }

    #[test]
    fn solve_and_inverse() {
        let m = Matrix::from_rows(vec![vec![s(1), s(2)], vec![s(3), s(5)]]);
        let x = m.solve(&[s(1), s(2)]).unwrap();
        assert_eq!(m.apply(&x), vec![s(1), s(2)]);
        let inv = m.inverse().unwrap();
        assert_eq!(&m * &inv, Matrix::identity(2));
    }

    #[test]
    fn dagger_is_adjoint() {
        let m = Matrix::from_rows(vec![
            vec![Scalar::i(), s(2)],
            vec![s(0), Scalar::gauss(1, -1, 1)],
        ]);
        let u = [s(1), Scalar::i()];
        let v = [Scalar::gauss(0, 2, 1), s(3)];
        let lhs = inner(&m.apply(&u), &v);
        let rhs = inner(&u, &m.dagger().apply(&v));
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn inconsistent_solve() {
        let m = Matrix::from_rows(vec![vec![s(1), s(1)], vec![s(1), s(1)]]);
        assert!(m.solve(&[s(0), s(1)]).is_err());
    }
}
