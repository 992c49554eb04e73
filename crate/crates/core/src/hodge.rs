//! Hodge-theoretic machinery on a model: adjoints, Laplacians, harmonic
//! spaces, the Green operator, and the induced homotopy transfer diagram.
//!
//! The primary adjoint is the conjugate transpose in the monomial basis
//! (monomials are declared orthonormal). A combinatorial Hodge star is
//! provided as an independent cross-check on adjoints; it is never used to
//! *define* them.

use crate::cdga::{merge_sign, Element};
use crate::error::Error;
use crate::matrix::{Matrix, Vector};
use crate::model::Model;
use crate::scalar::Scalar;
use crate::subspace::{solve_in, Subspace};

/// Adjoint with respect to the orthonormal monomial pairing.
pub fn adjoint(m: &Matrix) -> Matrix {
    m.dagger()
}

/// Hodge-style Laplacian `D D* + D* D`.
pub fn laplacian(d: &Matrix) -> Matrix {
    let da = adjoint(d);
    &(d * &da) + &(&da * d)
}

/// Kernel of the Laplacian. For a square-zero `d` this equals
/// `ker d ∩ ker d*`, one harmonic representative per cohomology class.
pub fn harmonic_subspace(lap: &Matrix) -> Subspace {
    Subspace::kernel_of(lap)
}

/// Combinatorial Hodge star: `star(g) = sum_mu <mu, conj(g)> mu_c` where
/// `mu ^ mu_c` is the volume monomial (the product of all generators in
/// presentation order). Requires a conjugation on the presentation.
pub fn hodge_star(e: &Element) -> Result<Element, Error> {
    let pres = e.presentation().clone();
    let vol = pres.volume_mask();
    let conj = e.conjugate()?;
    let mut out = Element::zero(&pres);
    for (&mu, c) in conj.terms() {
        // <mu, conj(g)> = conj(coefficient of mu in conj(g))
        let coeff = c.conj();
        let comp = vol & !mu;
        let sign = merge_sign(mu, comp).expect("complement masks are disjoint");
        let signed = if sign < 0 { -coeff } else { coeff };
        out = out.add(&Element::monomial(&pres, comp).scale(&signed))?;
    }
    Ok(out)
}

/// Matrix of the conjugated operator `conj . D . conj` given the matrix `c`
/// of the (antilinear) conjugation, written `c * x_bar` in coordinates.
pub fn conjugated_operator(c: &Matrix, m: &Matrix) -> Matrix {
    &(c * &m.entrywise_conj()) * &c.entrywise_conj()
}

/// Cross-check `D* == -star . conj(D) . star` as matrices on a model.
/// This ties the combinatorial star to the conjugate-transpose adjoint.
pub fn star_adjoint_crosscheck(model: &Model, d: &Matrix) -> Result<bool, Error> {
    let star = model.operator_from_fn("star", hodge_star)?;
    let conj = model.operator_from_fn("conj", |e| e.conjugate())?;
    let dbar = conjugated_operator(&conj, d);
    let rhs = -&(&(&star * &dbar) * &star);
    Ok(adjoint(d) == rhs)
}

/// A homotopy transfer diagram onto harmonic representatives:
/// `rho . iota = id`, `d . iota = 0`, `rho . d = 0`, and
/// `d h + h d = id - iota rho`.
#[derive(Clone)]
pub struct TransferDiagram {
    /// `n x k` inclusion of the cohomology model.
    pub iota: Matrix,
    /// `k x n` projection onto the cohomology model.
    pub rho: Matrix,
    /// `n x n` homotopy.
    pub h: Matrix,
    /// `n x n` differential on the big complex.
    pub d: Matrix,
}

impl TransferDiagram {
    pub fn new(iota: Matrix, rho: Matrix, h: Matrix, d: Matrix) -> Result<Self, Error> {
        let n = d.rows;
        let k = iota.cols;
        if iota.rows != n || rho.rows != k || rho.cols != n || h.rows != n || h.cols != n {
            return Err(Error::TransferInvariant("shape mismatch"));
        }
        let t = TransferDiagram { iota, rho, h, d };
        if &t.rho * &t.iota != Matrix::identity(k) {
            return Err(Error::TransferInvariant("rho . iota != id"));
        }
        if !(&t.d * &t.iota).is_zero() {
            return Err(Error::TransferInvariant("d . iota != 0"));
        }
        if !(&t.rho * &t.d).is_zero() {
            return Err(Error::TransferInvariant("rho . d != 0"));
        }
        let lhs = &(&t.d * &t.h) + &(&t.h * &t.d);
        let rhs = &Matrix::identity(n) - &(&t.iota * &t.rho);
        if lhs != rhs {
            return Err(Error::TransferInvariant("d h + h d != id - iota rho"));
        }
        Ok(t)
    }

    pub fn cohomology_dim(&self) -> usize {
        self.iota.cols
    }

    /// Projection `iota . rho` onto harmonic representatives.
    pub fn harmonic_projection(&self) -> Matrix {
        &self.iota * &self.rho
    }
}

/// Green operator of a Laplacian: zero on the harmonic space, and on its
/// orthogonal complement the exact inverse of the Laplacian. Computed by
/// solving `lap x = (id - P) e_j` with `x` constrained to the image of the
/// Laplacian — never by eigendecomposition.
pub fn green_operator(lap: &Matrix) -> Result<Matrix, Error> {
    let n = lap.rows;
    let harm = harmonic_subspace(lap);
    let p = harm.projection_matrix();
    let image = Subspace::image_of(lap);
    let mut cols: Vec<Vector> = Vec::with_capacity(n);
    for j in 0..n {
        let mut e = vec![Scalar::zero(); n];
        e[j] = Scalar::one();
        let rhs = (&Matrix::identity(n) - &p).apply(&e);
        cols.push(solve_in(lap, &rhs, &image)?);
    }
    Ok(Matrix::from_columns(n, cols))
}

/// Build the Hodge transfer diagram for a square-zero operator `d`:
/// `iota` includes the harmonic subspace, `rho` is the harmonic projection
/// co-restricted to it, and `h = d* G` with `G` the Green operator.
pub fn build_transfer(model: &Model, d: &Matrix) -> Result<TransferDiagram, Error> {
    assert_eq!(d.rows, model.dim());
    if !(d * d).is_zero() {
        return Err(Error::Invalid("differential does not square to zero".into()));
    }
    let lap = laplacian(d);
    let harm = harmonic_subspace(&lap);
    let b = harm.basis_matrix().clone();
    let gram_inv = (&b.dagger() * &b).inverse().expect("Gram matrix invertible");
    let rho = &gram_inv * &b.dagger();
    let g = green_operator(&lap)?;
    let h = &adjoint(d) * &g;
    TransferDiagram::new(b, rho, h, d.clone())
}

/// The three side conditions of an ideal transfer with respect to a second
/// operator `delta`. None of them is required for the machinery downstream;
/// they are reported, not enforced.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SideConditions {
    /// `delta . iota = 0`
    pub delta_iota: bool,
    /// `rho . delta = 0`
    pub rho_delta: bool,
    /// `h delta + delta h = 0`
    pub h_delta_anticommute: bool,
}

impl SideConditions {
    pub fn all(&self) -> bool {
        self.delta_iota && self.rho_delta && self.h_delta_anticommute
    }
}

pub fn verify_side_conditions(t: &TransferDiagram, delta: &Matrix) -> SideConditions {
    SideConditions {
        delta_iota: (delta * &t.iota).is_zero(),
        rho_delta: (&t.rho * delta).is_zero(),
        h_delta_anticommute: t.h.anticommutator(delta).is_zero(),
    }
}

/// Hodge-to-de-Rham style degeneration conditions:
/// `rho (delta h)^{k-1} delta iota = 0` for `k = 1..=kmax`.
/// Returns the per-`k` verdicts.
pub fn verify_hodge_de_rham(t: &TransferDiagram, delta: &Matrix, kmax: usize) -> Vec<bool> {
    let dh = delta * &t.h;
    (1..=kmax)
        .map(|k| (&(&t.rho * &dh.pow(k - 1)) * &(delta * &t.iota)).is_zero())
        .collect()
}
