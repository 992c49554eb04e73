//! A *model* is a finite monomial-spanned subcomplex of a free algebra: a
//! chosen subset of the monomial basis, closed under the operators we care
//! about. Elements become coordinate vectors, operators become matrices, and
//! everything downstream (Hodge theory, BV checks, filtrations) is exact
//! linear algebra in these coordinates.

use crate::cdga::{Derivation, Element, Mask, Presentation};
use crate::error::Error;
use crate::matrix::{Matrix, Vector};
use crate::scalar::Scalar;
use crate::subspace::Subspace;
use std::collections::BTreeMap;
use std::sync::Arc;

#[derive(Clone)]
pub struct Model {
    pres: Arc<Presentation>,
    basis: Vec<Mask>,
    pos: BTreeMap<Mask, usize>,
}

impl Model {
    /// The full algebra on its presentation: all `2^g` monomials.
    pub fn full(pres: &Arc<Presentation>) -> Self {
        let n = 1u64 << pres.n_gens();
        let basis: Vec<Mask> = (0..n).map(|m| m as Mask).collect();
        Model::from_masks(pres, basis)
    }

    /// A model spanned by the given monomials. The mask list is sorted and
    /// deduplicated; monomial order is ascending mask order.
    pub fn from_masks(pres: &Arc<Presentation>, mut basis: Vec<Mask>) -> Self {
        basis.sort_unstable();
        basis.dedup();
        let pos = basis.iter().enumerate().map(|(i, &m)| (m, i)).collect();
        Model { pres: pres.clone(), basis, pos }
    }

    pub fn presentation(&self) -> &Arc<Presentation> {
        &self.pres
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn basis_masks(&self) -> &[Mask] {
        &self.basis
    }

    pub fn basis_element(&self, idx: usize) -> Element {
        Element::monomial(&self.pres, self.basis[idx])
    }

    pub fn basis_bidegree(&self, idx: usize) -> (i64, i64) {
        self.pres.monomial_bidegree(self.basis[idx])
    }

    pub fn basis_degree(&self, idx: usize) -> i64 {
        self.pres.monomial_degree(self.basis[idx])
    }

    pub fn index_of(&self, m: Mask) -> Option<usize> {
        self.pos.get(&m).copied()
    }

    /// Coordinates of an element; error if it has support outside the basis.
    pub fn to_coords(&self, e: &Element) -> Result<Vector, Error> {
        let mut v = vec![Scalar::zero(); self.dim()];
        for (&m, c) in e.terms() {
            let i = self.index_of(m).ok_or(Error::OutsideModel)?;
            v[i] = c.clone();
        }
        Ok(v)
    }

    pub fn from_coords(&self, v: &[Scalar]) -> Element {
        assert_eq!(v.len(), self.dim());
        Element::from_terms(
            &self.pres,
            v.iter()
                .enumerate()
                .filter(|(_, c)| !c.is_zero())
                .map(|(i, c)| (self.basis[i], c.clone()))
                .collect(),
        )
    }

    /// Product in coordinates; error if the model is not closed under it.
    pub fn wedge_coords(&self, u: &[Scalar], v: &[Scalar]) -> Result<Vector, Error> {
        let prod = self.from_coords(u).wedge(&self.from_coords(v))?;
        self.to_coords(&prod)
    }

    /// Is the monomial span closed under the wedge product?
    pub fn closed_under_wedge(&self) -> bool {
        for &a in &self.basis {
            for &b in &self.basis {
                if a & b == 0 && self.index_of(a | b).is_none() {
                    return false;
                }
            }
        }
        true
    }

    /// Matrix of a derivation on this model; error if the image of any basis
    /// monomial escapes the span.
    pub fn operator_from_derivation(&self, d: &Derivation, name: &str) -> Result<Matrix, Error> {
        let mut m = Matrix::zero(self.dim(), self.dim());
        for j in 0..self.dim() {
            let img = d.apply(&self.basis_element(j));
            let col = self.to_coords(&img).map_err(|_| Error::NotClosed(name.to_string()))?;
            for (i, c) in col.into_iter().enumerate() {
                if !c.is_zero() {
                    m.set(i, j, c);
                }
            }
        }
        Ok(m)
    }

    /// Matrix of any element-level map, e.g. conjugation or a Hodge star.
    pub fn operator_from_fn(
        &self,
        name: &str,
        f: impl Fn(&Element) -> Result<Element, Error>,
    ) -> Result<Matrix, Error> {
        let mut m = Matrix::zero(self.dim(), self.dim());
        for j in 0..self.dim() {
            let img = f(&self.basis_element(j))?;
            let col = self.to_coords(&img).map_err(|_| Error::NotClosed(name.to_string()))?;
            for (i, c) in col.into_iter().enumerate() {
                if !c.is_zero() {
                    m.set(i, j, c);
                }
            }
        }
        Ok(m)
    }

    /// Coordinate subspace of basis monomials selected by a predicate.
    pub fn coordinate_subspace(&self, pred: impl Fn(Mask) -> bool) -> Subspace {
        let cols: Vec<Vector> = (0..self.dim())
            .filter(|&i| pred(self.basis[i]))
            .map(|i| {
                let mut v = vec![Scalar::zero(); self.dim()];
                v[i] = Scalar::one();
                v
            })
            .collect();
        Subspace::from_columns(self.dim(), cols)
    }

    /// The span of all monomials of total degree `n`.
    pub fn degree_block(&self, n: i64) -> Subspace {
        self.coordinate_subspace(|m| self.pres.monomial_degree(m) == n)
    }

    pub fn bidegree_block(&self, p: i64, q: i64) -> Subspace {
        self.coordinate_subspace(|m| self.pres.monomial_bidegree(m) == (p, q))
    }

    /// All total degrees occurring in the basis, ascending.
    pub fn degrees(&self) -> Vec<i64> {
        let mut ds: Vec<i64> = self.basis.iter().map(|&m| self.pres.monomial_degree(m)).collect();
        ds.sort_unstable();
        ds.dedup();
        ds
    }

    /// All bidegrees occurring in the basis, ascending lexicographically.
    pub fn bidegrees(&self) -> Vec<(i64, i64)> {
        let mut ds: Vec<(i64, i64)> =
            self.basis.iter().map(|&m| self.pres.monomial_bidegree(m)).collect();
        ds.sort_unstable();
        ds.dedup();
        ds
    }
}

/// Bidegree decomposition of an operator matrix on a model: the component of
/// bidegree `(r, s)` consists of the entries mapping `(p, q)` monomials to
/// `(p + r, q + s)` monomials.
pub fn bidegree_components(model: &Model, m: &Matrix) -> BTreeMap<(i64, i64), Matrix> {
    let mut out: BTreeMap<(i64, i64), Matrix> = BTreeMap::new();
    for j in 0..model.dim() {
        let (pj, qj) = model.basis_bidegree(j);
        for i in 0..model.dim() {
            let e = m.get(i, j);
            if e.is_zero() {
                continue;
            }
            let (pi, qi) = model.basis_bidegree(i);
            let key = (pi - pj, qi - qj);
            out.entry(key)
                .or_insert_with(|| Matrix::zero(model.dim(), model.dim()))
                .set(i, j, e.clone());
        }
    }
    out
}

/// `Some((r, s))` if the operator is homogeneous of a single bidegree,
/// `None` if it is zero, error if mixed.
pub fn homogeneous_bidegree(model: &Model, m: &Matrix) -> Result<Option<(i64, i64)>, Error> {
    let comps = bidegree_components(model, m);
    match comps.len() {
        0 => Ok(None),
        1 => Ok(comps.keys().next().copied()),
        _ => Err(Error::NotHomogeneous),
    }
}
