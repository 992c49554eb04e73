//! Subspaces of a fixed coordinate space, held in a canonical basis so that
//! equality of subspaces is equality of representations.
//!
//! The canonical form is the reduced column echelon basis: transpose the
//! spanning set, run reduced row echelon form, keep the nonzero rows. Two
//! spanning sets generate the same subspace exactly when they produce the
//! same canonical basis.

use crate::error::Error;
use crate::matrix::{inner, vec_is_zero, Matrix, Vector};
use crate::scalar::Scalar;
use std::fmt;

#[derive(Clone, PartialEq, Eq)]
pub struct Subspace {
    ambient: usize,
    /// Canonical basis, one column per basis vector. May have zero columns.
    basis: Matrix,
}

impl Subspace {
    pub fn zero(ambient: usize) -> Self {
        Subspace { ambient, basis: Matrix::zero(ambient, 0) }
    }

    pub fn full(ambient: usize) -> Self {
        Subspace { ambient, basis: Matrix::identity(ambient) }
    }

    /// Canonicalize an arbitrary spanning set.
    pub fn from_columns(ambient: usize, cols: Vec<Vector>) -> Self {
        let m = Matrix::from_columns(ambient, cols);
        Subspace::from_matrix_columns(&m)
    }

    /// Span of the columns of `m`.
    pub fn from_matrix_columns(m: &Matrix) -> Self {
        let (r, pivots) = m.dagger().entrywise_conj().rref(); // plain transpose via dagger+conj
        let mut cols = Vec::new();
        for row_idx in 0..pivots.len() {
            cols.push((0..m.rows).map(|j| r.get(row_idx, j).clone()).collect());
        }
        Subspace { ambient: m.rows, basis: Matrix::from_columns(m.rows, cols) }
    }

    pub fn kernel_of(m: &Matrix) -> Self {
        Subspace::from_columns(m.cols, m.kernel_basis())
    }

    pub fn image_of(m: &Matrix) -> Self {
        Subspace::from_matrix_columns(m)
    }

    pub fn ambient(&self) -> usize {
        self.ambient
    }

    pub fn dim(&self) -> usize {
        self.basis.cols
    }

    /// Canonical basis vectors.
    pub fn basis_vectors(&self) -> Vec<Vector> {
        self.basis.columns()
    }

    pub fn basis_matrix(&self) -> &Matrix {
        &self.basis
    }

    pub fn contains(&self, v: &[Scalar]) -> bool {
        assert_eq!(v.len(), self.ambient);
        if vec_is_zero(v) {
            return true;
        }
        self.basis.solve(v).is_ok()
    }

    pub fn contains_subspace(&self, other: &Subspace) -> bool {
        other.basis_vectors().iter().all(|v| self.contains(v))
    }

    pub fn sum(&self, other: &Subspace) -> Subspace {
        assert_eq!(self.ambient, other.ambient);
        Subspace::from_matrix_columns(&self.basis.hstack(&other.basis))
    }

    /// Intersection via the kernel of the stacked system `U x = V y`.
    pub fn intersect(&self, other: &Subspace) -> Subspace {
        assert_eq!(self.ambient, other.ambient);
        let k = self.dim();
        if k == 0 || other.dim() == 0 {
            return Subspace::zero(self.ambient);
        }
        let stacked = self.basis.hstack(&other.basis.scale(&Scalar::from_int(-1)));
        let null = stacked.kernel_basis();
        let cols: Vec<Vector> = null
            .iter()
            .map(|sol| self.basis.apply(&sol[..k]))
            .collect();
        Subspace::from_columns(self.ambient, cols)
    }

    /// Image of this subspace under `m`.
    pub fn map_by(&self, m: &Matrix) -> Subspace {
        assert_eq!(m.cols, self.ambient);
        Subspace::from_matrix_columns(&(m * &self.basis))
    }

    /// Orthogonal complement with respect to the standard Hermitian pairing:
    /// all `w` with `<w, u> = 0` for every basis vector `u`. Since the
    /// pairing is positive definite, `V = S ⊕ S^perp` always.
    pub fn orthogonal_complement(&self) -> Subspace {
        // <w, u> = 0  <=>  (conj of u) . w = 0, i.e. B† w = 0.
        Subspace::kernel_of(&self.basis.dagger())
    }

    /// Orthogonal complement of `inner_sub` inside `self`:
    /// `{ v in self : v ⟂ inner_sub }`.
    pub fn complement_of_within(&self, inner_sub: &Subspace) -> Subspace {
        self.intersect(&inner_sub.orthogonal_complement())
    }

    /// Matrix of the orthogonal projection onto this subspace.
    pub fn projection_matrix(&self) -> Matrix {
        if self.dim() == 0 {
            return Matrix::zero(self.ambient, self.ambient);
        }
        let b = &self.basis;
        let gram = &b.dagger() * b;
        let gram_inv = gram.inverse().expect("Gram matrix of independent set is invertible");
        &(b * &gram_inv) * &b.dagger()
    }

    /// Express `v` in the canonical basis; error if `v` is outside.
    pub fn coordinates_of(&self, v: &[Scalar]) -> Result<Vector, Error> {
        self.basis.solve(v).map_err(|_| Error::NotInSubspace)
    }
}

/// Solve `m x = rhs` with `x` constrained to `domain`, requiring the solution
/// to be unique there. This is the workhorse for Green-operator style inverses
/// on a complement of the kernel.
pub fn solve_in(m: &Matrix, rhs: &[Scalar], domain: &Subspace) -> Result<Vector, Error> {
    if m.cols != domain.ambient() {
        return Err(Error::AmbientMismatch(m.cols, domain.ambient()));
    }
    let b = domain.basis_matrix();
    let restricted = m * b;
    if !restricted.kernel_basis().is_empty() {
        return Err(Error::NotInjective);
    }
    let coeffs = restricted.solve(rhs)?;
    Ok(b.apply(&coeffs))
}

/// Check orthogonality of two subspaces under the standard pairing.
pub fn orthogonal(a: &Subspace, b: &Subspace) -> bool {
    a.basis_vectors()
        .iter()
        .all(|u| b.basis_vectors().iter().all(|v| inner(u, v).is_zero()))
}

impl fmt::Debug for Subspace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Subspace(dim {} in {})", self.dim(), self.ambient)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use std::ops::Mul;

    fn s(n: i64) -> Scalar {
        Scalar::from_int(n)
    }

    #[test]
    fn canonical_equality() {
        // Same plane through two different spanning sets.
        let u = Subspace::from_columns(3, vec![
            vec![s(1), s(0), s(1)],
            vec![s(0), s(1), s(1)],
        ]);
        let v = Subspace::from_columns(3, vec![
            vec![s(1), s(1), s(2)],
            vec![s(2), s(-1), s(1)],
            vec![s(3), s(0), s(3)],
        ]);
        assert_eq!(u, v);
        assert_eq!(u.dim(), 2);
    }

    #[test]
    fn lattice_ops() {
        let x = Subspace::from_columns(3, vec![vec![s(1), s(0), s(0)], vec![s(0), s(1), s(0)]]);
        let y = Subspace::from_columns(3, vec![vec![s(0), s(1), s(0)], vec![s(0), s(0), s(1)]]);
        let meet = x.intersect(&y);
        assert_eq!(meet.dim(), 1);
        assert!(meet.contains(&[s(0), s(1), s(0)]));
        assert_eq!(x.sum(&y), Subspace::full(3));
    }

    #[test]
    fn complement_and_projection() {
        let line = Subspace::from_columns(2, vec![vec![s(1), Scalar::i()]]);
        let perp = line.orthogonal_complement();
        assert_eq!(perp.dim(), 1);
        assert!(orthogonal(&line, &perp));
        assert_eq!(line.sum(&perp), Subspace::full(2));
        let p = line.projection_matrix();
        // Projection is idempotent and self-adjoint; fixes the line.
        assert_eq!(&p * &p, p);
        assert_eq!(p.dagger(), p);
        let v = vec![s(1), Scalar::i()];
        assert_eq!(p.apply(&v), v);
    }

    #[test]
    fn solve_in_restricted_domain() {
        // m has a kernel, but restricted to the x-axis it is injective.
        let m = Matrix::from_rows(vec![vec![s(1), s(0)], vec![s(0), s(0)]]);
        let axis = Subspace::from_columns(2, vec![vec![s(1), s(0)]]);
        let x = solve_in(&m, &[s(3), s(0)], &axis).unwrap();
        assert_eq!(x, vec![s(3), s(0)]);
        assert_eq!(solve_in(&m, &[s(3), s(0)], &Subspace::full(2)), Err(Error::NotInjective));
    }

    fn arb_vec(dim: usize) -> impl Strategy<Value = Vector> {
        proptest::collection::vec((-3i64..=3, -3i64..=3), dim)
            .prop_map(|xs| xs.into_iter().map(|(a, b)| Scalar::gauss(a, b, 1)).collect())
    }

    fn arb_subspace(dim: usize) -> impl Strategy<Value = Subspace> {
        proptest::collection::vec(arb_vec(dim), 0..=3)
            .prop_map(move |cols| Subspace::from_columns(dim, cols))
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]

        #[test]
        fn dim_formula(u in arb_subspace(4), v in arb_subspace(4)) {
            // dim(U + V) + dim(U ∩ V) = dim U + dim V
            prop_assert_eq!(
                u.sum(&v).dim() + u.intersect(&v).dim(),
                u.dim() + v.dim()
            );
        }

        #[test]
        fn rank_nullity(rows in proptest::collection::vec(arb_vec(4), 1..=4)) {
            let m = Matrix::from_rows(rows);
            prop_assert_eq!(m.rank() + m.kernel_basis().len(), m.cols);
        }

        #[test]
        fn complement_is_complement(u in arb_subspace(4)) {
            let c = u.orthogonal_complement();
            prop_assert_eq!(u.intersect(&c).dim(), 0);
            prop_assert_eq!(u.sum(&c), Subspace::full(4));
        }

        #[test]
        fn canonical_form_is_spanning_invariant(u in arb_subspace(4)) {
            // Re-canonicalizing the basis (in reversed order, scaled) is a no-op.
            let mut cols = u.basis_vectors();
            cols.reverse();
            let two = Scalar::from_int(2);
            for c in &mut cols {
                for x in c.iter_mut() { *x = (&*x).mul(&two); }
            }
            prop_assert_eq!(Subspace::from_columns(4, cols), u);
        }
    }
}
