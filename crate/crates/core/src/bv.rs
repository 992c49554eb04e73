//! Batalin-Vilkovisky structure checks: the derived bracket, the seven-term
//! relation, the d-delta condition, the four cohomologies with their
//! comparison maps, and the transfer diagram built from the five-summand
//! decomposition that the d-delta condition provides.

use crate::cdga::Element;
use crate::error::Error;
use crate::hodge::TransferDiagram;
use crate::matrix::{Matrix, Vector};
use crate::model::Model;
use crate::scalar::Scalar;
use crate::subspace::Subspace;
use std::collections::BTreeMap;

/// A cochain complex with a commutative product, a degree `+1` differential
/// `d`, and a degree `-1` operator `delta`, all acting on one model.
#[derive(Clone)]
pub struct BVAlgebra {
    pub model: Model,
    pub d: Matrix,
    pub delta: Matrix,
}

fn sign_pow(k: i64) -> Scalar {
    if k.rem_euclid(2) == 0 {
        Scalar::one()
    } else {
        Scalar::from_int(-1)
    }
}

impl BVAlgebra {
    pub fn new(model: Model, d: Matrix, delta: Matrix) -> Result<Self, Error> {
        let n = model.dim();
        if d.rows != n || d.cols != n || delta.rows != n || delta.cols != n {
            return Err(Error::AmbientMismatch(d.rows, n));
        }
        Ok(BVAlgebra { model, d, delta })
    }

    pub fn apply(&self, op: &Matrix, e: &Element) -> Result<Element, Error> {
        Ok(self.model.from_coords(&op.apply(&self.model.to_coords(e)?)))
    }

    /// The derived bracket
    /// `[x, y] = (-1)^{|x|} ( delta(x y) - delta(x) y - (-1)^{|x|} x delta(y) )`.
    pub fn bracket(&self, x: &Element, y: &Element) -> Result<Element, Error> {
        if x.is_zero() || y.is_zero() {
            return Ok(x.scale(&Scalar::zero()));
        }
        let dx = x.homogeneous_degree().ok_or(Error::InhomogeneousElement)?;
        if y.homogeneous_degree().is_none() {
            return Err(Error::InhomogeneousElement);
        }
        let xy = x.wedge(y)?;
        let t1 = self.apply(&self.delta, &xy)?;
        let t2 = self.apply(&self.delta, x)?.wedge(y)?;
        let t3 = x.wedge(&self.apply(&self.delta, y)?)?.scale(&sign_pow(dx));
        t1.sub(&t2)?.sub(&t3).map(|e| e.scale(&sign_pow(dx)))
    }

    /// Degree of a basis element.
    fn deg(&self, i: usize) -> i64 {
        self.model.basis_degree(i)
    }

    fn basis_el(&self, i: usize) -> Element {
        self.model.basis_element(i)
    }
}

/// Per-axiom verdicts for the BV structure, each checked exhaustively on
/// basis elements (pairs, triples) — report-valued, never panicking.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BvReport {
    pub d_squared_zero: bool,
    pub delta_squared_zero: bool,
    pub d_delta_anticommute: bool,
    pub d_leibniz: bool,
    /// Getzler's seven-term relation on all basis triples.
    pub seven_term: bool,
    /// Bracket-derivation axiom on all basis triples (independent check).
    pub bracket_derivation: bool,
    /// Graded antisymmetry of the bracket on all basis pairs.
    pub bracket_antisymmetric: bool,
}

impl BvReport {
    pub fn all(&self) -> bool {
        self.d_squared_zero
            && self.delta_squared_zero
            && self.d_delta_anticommute
            && self.d_leibniz
            && self.seven_term
            && self.bracket_derivation
            && self.bracket_antisymmetric
    }

    /// The seven-term relation and the bracket-derivation axiom are
    /// equivalent reformulations; the two sweeps must agree.
    pub fn reformulations_agree(&self) -> bool {
        self.seven_term == self.bracket_derivation
    }
}

pub fn check_bv(a: &BVAlgebra) -> BvReport {
    let n = a.model.dim();
    let d_squared_zero = (&a.d * &a.d).is_zero();
    let delta_squared_zero = (&a.delta * &a.delta).is_zero();
    let d_delta_anticommute = a.d.anticommutator(&a.delta).is_zero();

    let mut d_leibniz = true;
    'leib: for i in 0..n {
        for j in 0..n {
            let x = a.basis_el(i);
            let y = a.basis_el(j);
            let xy = x.wedge(&y).unwrap();
            let lhs = a.apply(&a.d, &xy).unwrap();
            let rhs = a
                .apply(&a.d, &x)
                .unwrap()
                .wedge(&y)
                .unwrap()
                .add(&x.wedge(&a.apply(&a.d, &y).unwrap()).unwrap().scale(&sign_pow(a.deg(i))))
                .unwrap();
            if lhs != rhs {
                d_leibniz = false;
                break 'leib;
            }
        }
    }

    let mut seven_term = true;
    let mut bracket_derivation = true;
    for i in 0..n {
        for j in 0..n {
            for k in 0..n {
                let (x, y, z) = (a.basis_el(i), a.basis_el(j), a.basis_el(k));
                let (dx, dy) = (a.deg(i), a.deg(j));
                if seven_term && !seven_term_holds(a, &x, &y, &z, dx, dy) {
                    seven_term = false;
                }
                if bracket_derivation && !bracket_derivation_holds(a, &x, &y, &z, dx, dy) {
                    bracket_derivation = false;
                }
                if !seven_term && !bracket_derivation {
                    break;
                }
            }
        }
    }

    let mut bracket_antisymmetric = true;
    'anti: for i in 0..n {
        for j in 0..n {
            let (x, y) = (a.basis_el(i), a.basis_el(j));
            let lhs = a.bracket(&x, &y).unwrap();
            // [x,y] = -(-1)^{(|x|-1)(|y|-1)} [y,x]
            let s = -sign_pow((a.deg(i) - 1) * (a.deg(j) - 1));
            let rhs = a.bracket(&y, &x).unwrap().scale(&s);
            if lhs != rhs {
                bracket_antisymmetric = false;
                break 'anti;
            }
        }
    }

    BvReport {
        d_squared_zero,
        delta_squared_zero,
        d_delta_anticommute,
        d_leibniz,
        seven_term,
        bracket_derivation,
        bracket_antisymmetric,
    }
}

/// `delta(xyz) = delta(xy)z + (-1)^{|x|} x delta(yz) + (-1)^{(|x|-1)|y|} y delta(xz)
///             - delta(x)yz - (-1)^{|x|} x delta(y) z - (-1)^{|x|+|y|} x y delta(z)`
fn seven_term_holds(a: &BVAlgebra, x: &Element, y: &Element, z: &Element, dx: i64, dy: i64) -> bool {
    let dl = |e: &Element| a.apply(&a.delta, e).unwrap();
    let w = |u: &Element, v: &Element| u.wedge(v).unwrap();
    let xyz = w(&w(x, y), z);
    let lhs = dl(&xyz);
    let rhs = w(&dl(&w(x, y)), z)
        .add(&w(x, &dl(&w(y, z))).scale(&sign_pow(dx)))
        .unwrap()
        .add(&w(y, &dl(&w(x, z))).scale(&sign_pow((dx - 1) * dy)))
        .unwrap()
        .sub(&w(&w(&dl(x), y), z))
        .unwrap()
        .sub(&w(&w(x, &dl(y)), z).scale(&sign_pow(dx)))
        .unwrap()
        .sub(&w(&w(x, y), &dl(z)).scale(&sign_pow(dx + dy)))
        .unwrap();
    lhs == rhs
}

/// `[x, yz] = [x,y] z + (-1)^{(|x|-1)|y|} y [x,z]`
fn bracket_derivation_holds(
    a: &BVAlgebra,
    x: &Element,
    y: &Element,
    z: &Element,
    dx: i64,
    dy: i64,
) -> bool {
    let yz = y.wedge(z).unwrap();
    let lhs = a.bracket(x, &yz).unwrap();
    let rhs = a
        .bracket(x, y)
        .unwrap()
        .wedge(z)
        .unwrap()
        .add(&y.wedge(&a.bracket(x, z).unwrap()).unwrap().scale(&sign_pow((dx - 1) * dy)))
        .unwrap();
    lhs == rhs
}

/// True iff the derived bracket vanishes identically, i.e. `delta` is a
/// derivation of the product (a BV_1 algebra).
pub fn is_order_one(a: &BVAlgebra) -> bool {
    let n = a.model.dim();
    for i in 0..n {
        for j in i..n {
            if !a.bracket(&a.basis_el(i), &a.basis_el(j)).unwrap().is_zero() {
                return false;
            }
        }
    }
    true
}

/// One graded cohomology: cocycles and coboundaries per total degree.
#[derive(Clone)]
pub struct GradedCohomology {
    /// degree -> (cocycles, coboundaries), with coboundaries ⊆ cocycles.
    pub per_degree: BTreeMap<i64, (Subspace, Subspace)>,
}

impl GradedCohomology {
    pub fn dim(&self, n: i64) -> usize {
        self.per_degree.get(&n).map_or(0, |(z, b)| z.dim() - b.dim())
    }

    pub fn total_dim(&self) -> usize {
        self.per_degree.keys().map(|&n| self.dim(n)).sum()
    }
}

fn graded_quotient(
    model: &Model,
    cocycles: &Subspace,
    coboundaries: &Subspace,
) -> GradedCohomology {
    let mut per_degree = BTreeMap::new();
    for n in model.degrees() {
        let block = model.degree_block(n);
        per_degree.insert(n, (cocycles.intersect(&block), coboundaries.intersect(&block)));
    }
    GradedCohomology { per_degree }
}

/// The four cohomologies of a double complex `(A, d, delta)`:
/// `H_d`, `H_delta`, the Bott-Chern-style `H_BC = (Ker d ∩ Ker delta)/Im(d delta)`
/// and the Aeppli-style `H_A = Ker(d delta)/(Im d + Im delta)`.
#[derive(Clone)]
pub struct CohomologyDiamond {
    pub h_d: GradedCohomology,
    pub h_delta: GradedCohomology,
    pub h_bc: GradedCohomology,
    pub h_a: GradedCohomology,
}

/// Verdicts for one comparison map between two graded quotients, induced by
/// the identity on representatives.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ComparisonVerdict {
    pub well_defined: bool,
    pub injective: bool,
    pub surjective: bool,
}

impl ComparisonVerdict {
    pub fn iso(&self) -> bool {
        self.well_defined && self.injective && self.surjective
    }
}

/// The identity-on-representatives map `(Z1/B1) -> (Z2/B2)` per degree.
/// Well-defined iff Z1 ⊆ Z2 and B1 ⊆ B2; injective iff Z1 ∩ B2 ⊆ B1;
/// surjective iff Z1 + B2 ⊇ Z2.
pub fn compare_quotients(a: &GradedCohomology, b: &GradedCohomology) -> ComparisonVerdict {
    let mut v = ComparisonVerdict { well_defined: true, injective: true, surjective: true };
    let degrees: std::collections::BTreeSet<i64> =
        a.per_degree.keys().chain(b.per_degree.keys()).copied().collect();
    for n in degrees {
        let (z1, b1) = match a.per_degree.get(&n) {
            Some(p) => p.clone(),
            None => continue,
        };
        let Some((z2, b2)) = b.per_degree.get(&n).cloned() else { continue };
        if !(z2.contains_subspace(&z1) && b2.contains_subspace(&b1)) {
            v.well_defined = false;
        }
        if !b1.contains_subspace(&z1.intersect(&b2)) {
            v.injective = false;
        }
        if !z1.sum(&b2).contains_subspace(&z2) {
            v.surjective = false;
        }
    }
    v
}

pub fn cohomology_diamond(a: &BVAlgebra) -> CohomologyDiamond {
    let model = &a.model;
    let ker_d = Subspace::kernel_of(&a.d);
    let im_d = Subspace::image_of(&a.d);
    let ker_dl = Subspace::kernel_of(&a.delta);
    let im_dl = Subspace::image_of(&a.delta);
    let ddelta = &a.d * &a.delta;
    let ker_dd = Subspace::kernel_of(&ddelta);
    let im_dd = Subspace::image_of(&ddelta);

    CohomologyDiamond {
        h_d: graded_quotient(model, &ker_d, &im_d),
        h_delta: graded_quotient(model, &ker_dl, &im_dl),
        h_bc: graded_quotient(model, &ker_d.intersect(&ker_dl), &im_dd),
        h_a: graded_quotient(model, &ker_dd, &im_d.sum(&im_dl)),
    }
}

/// The four comparison maps of the diamond:
/// `H_BC -> H_d`, `H_BC -> H_delta`, `H_d -> H_A`, `H_delta -> H_A`.
pub fn diamond_comparisons(d: &CohomologyDiamond) -> [ComparisonVerdict; 4] {
    [
        compare_quotients(&d.h_bc, &d.h_d),
        compare_quotients(&d.h_bc, &d.h_delta),
        compare_quotients(&d.h_d, &d.h_a),
        compare_quotients(&d.h_delta, &d.h_a),
    ]
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DdeltaReport {
    /// degree -> the three subspaces agree there.
    pub per_degree: BTreeMap<i64, bool>,
    pub holds: bool,
    /// Cross-check: the diamond's four comparison maps are all isomorphisms
    /// exactly when the subspace criterion holds.
    pub diamond_agrees: bool,
}

/// The d-delta condition: `Ker d ∩ Im delta = Ker delta ∩ Im d = Im(d delta)`,
/// compared canonically per degree, cross-checked against the diamond.
pub fn check_ddelta(a: &BVAlgebra) -> DdeltaReport {
    let ker_d = Subspace::kernel_of(&a.d);
    let im_d = Subspace::image_of(&a.d);
    let ker_dl = Subspace::kernel_of(&a.delta);
    let im_dl = Subspace::image_of(&a.delta);
    let im_dd = Subspace::image_of(&(&a.d * &a.delta));

    let s1 = ker_d.intersect(&im_dl);
    let s2 = ker_dl.intersect(&im_d);

    let mut per_degree = BTreeMap::new();
    let mut holds = true;
    for n in a.model.degrees() {
        let block = a.model.degree_block(n);
        let a1 = s1.intersect(&block);
        let a2 = s2.intersect(&block);
        let a3 = im_dd.intersect(&block);
        let ok = a1 == a3 && a2 == a3;
        holds &= ok;
        per_degree.insert(n, ok);
    }

    let diamond = cohomology_diamond(a);
    let all_iso = diamond_comparisons(&diamond).iter().all(ComparisonVerdict::iso);
    DdeltaReport { per_degree, holds, diamond_agrees: all_iso == holds }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum QuasiIsoReport {
    /// The d-delta condition fails, so the lemma's hypotheses are not met.
    Inapplicable,
    Checked {
        /// `(Ker delta, d) -> (A, d)` induces a cohomology bijection.
        ker_delta_into_a: bool,
        /// `(Ker d, delta) -> (A, delta)` induces a cohomology bijection.
        ker_d_into_a: bool,
    },
}

/// The quasi-isomorphism checks for the kernel inclusions under the d-delta
/// condition. Comparisons are identity-on-representatives maps of graded
/// quotients.
pub fn quasi_iso_kernel_checks(a: &BVAlgebra) -> QuasiIsoReport {
    if !check_ddelta(a).holds {
        return QuasiIsoReport::Inapplicable;
    }
    let model = &a.model;
    let ker_d = Subspace::kernel_of(&a.d);
    let ker_dl = Subspace::kernel_of(&a.delta);

    // H(Ker delta, d): cocycles Ker d ∩ Ker delta, coboundaries d(Ker delta).
    let sub_d = graded_quotient(model, &ker_d.intersect(&ker_dl), &ker_dl.map_by(&a.d));
    let amb_d = graded_quotient(model, &ker_d, &Subspace::image_of(&a.d));
    let v1 = compare_quotients(&sub_d, &amb_d);

    let sub_dl = graded_quotient(model, &ker_dl.intersect(&ker_d), &ker_d.map_by(&a.delta));
    let amb_dl = graded_quotient(model, &ker_dl, &Subspace::image_of(&a.delta));
    let v2 = compare_quotients(&sub_dl, &amb_dl);

    QuasiIsoReport::Checked { ker_delta_into_a: v1.iso(), ker_d_into_a: v2.iso() }
}

/// The five-summand decomposition `A = H ⊕ S ⊕ dS ⊕ deltaS ⊕ d delta S`
/// available under the d-delta condition, with the complements fixed by the
/// monomial inner product:
/// `H` = orthogonal complement of `Im d + Im delta` inside `Ker d ∩ Ker delta`,
/// `S` = orthogonal complement of `Ker d + Ker delta`.
pub struct DdeltaDecomposition {
    pub h: Subspace,
    pub s: Subspace,
    pub ds: Subspace,
    pub delta_s: Subspace,
    pub d_delta_s: Subspace,
}

pub fn ddelta_decomposition(a: &BVAlgebra) -> Result<DdeltaDecomposition, Error> {
    let ker_d = Subspace::kernel_of(&a.d);
    let ker_dl = Subspace::kernel_of(&a.delta);
    let im_sum = Subspace::image_of(&a.d).sum(&Subspace::image_of(&a.delta));
    let h = ker_d.intersect(&ker_dl).intersect(&im_sum.orthogonal_complement());
    let s = ker_d.sum(&ker_dl).orthogonal_complement();
    let ds = s.map_by(&a.d);
    let delta_s = s.map_by(&a.delta);
    let d_delta_s = delta_s.map_by(&a.d);
    let dec = DdeltaDecomposition { h, s, ds, delta_s, d_delta_s };

    // Verify directness and exhaustiveness.
    let n = a.model.dim();
    let parts = [&dec.h, &dec.s, &dec.ds, &dec.delta_s, &dec.d_delta_s];
    let total: usize = parts.iter().map(|p| p.dim()).sum();
    let mut sum = Subspace::zero(n);
    for p in parts {
        sum = sum.sum(p);
    }
    if total != n || sum != Subspace::full(n) {
        return Err(Error::Invalid(format!(
            "five-summand decomposition failed: parts sum to dim {} of {}",
            sum.dim(),
            n
        )));
    }
    Ok(dec)
}

/// Transfer diagram from the five-summand decomposition:
/// `iota` includes `H`, `rho` projects onto `H` along the other summands,
/// and `h(x, y, dz, delta w, d delta t) = (0, z, 0, delta t, 0)`.
pub fn transfer_from_ddelta(a: &BVAlgebra) -> Result<TransferDiagram, Error> {
    if !check_ddelta(a).holds {
        return Err(Error::Invalid("d-delta condition does not hold".into()));
    }
    let dec = ddelta_decomposition(a)?;
    let n = a.model.dim();
    let bh = dec.h.basis_matrix().clone();
    let bs = dec.s.basis_matrix().clone();
    let k = bh.cols;
    let m = bs.cols;

    // Columns of the change-of-basis matrix, ordered H | S | dS | deltaS | d delta S,
    // with the last three given by images of the S basis so that h is a
    // simple shift in these coordinates.
    let d_bs = &a.d * &bs;
    let dl_bs = &a.delta * &bs;
    let ddl_bs = &a.d * &dl_bs;
    let basis_all = bh.hstack(&bs).hstack(&d_bs).hstack(&dl_bs).hstack(&ddl_bs);
    let inv = basis_all.inverse().map_err(|_| {
        Error::Invalid("decomposition basis is not invertible".into())
    })?;

    // h sends the dS block to the S basis and the d delta S block to delta S.
    let mut h_targets = Matrix::zero(n, basis_all.cols);
    for j in 0..m {
        for i in 0..n {
            h_targets.set(i, k + m + j, bs.get(i, j).clone()); // dS -> S
            h_targets.set(i, k + 3 * m + j, dl_bs.get(i, j).clone()); // d delta S -> delta S
        }
    }
    let h = &h_targets * &inv;

    // rho: the first k rows of the inverse (coordinates along H).
    let mut rho = Matrix::zero(k, n);
    for i in 0..k {
        for j in 0..n {
            rho.set(i, j, inv.get(i, j).clone());
        }
    }

    TransferDiagram::new(bh, rho, h, a.d.clone())
}

/// Convenience: coordinates of a wedge of coordinate vectors.
pub fn wedge_vec(model: &Model, u: &[Scalar], v: &[Scalar]) -> Result<Vector, Error> {
    model.wedge_coords(u, v)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cdga::{Derivation, Generator, Presentation};

    /// Zero differentials: everything holds trivially.
    #[test]
    fn zero_operators_pass() {
        let p = Presentation::new(vec![
            Generator { name: "x".into(), p: 1, q: 0 },
            Generator { name: "y".into(), p: 0, q: 1 },
        ])
        .unwrap();
        let model = Model::full(&p);
        let z = Matrix::zero(4, 4);
        let a = BVAlgebra::new(model, z.clone(), z).unwrap();
        let rep = check_bv(&a);
        assert!(rep.all());
        assert!(is_order_one(&a));
        let dd = check_ddelta(&a);
        assert!(dd.holds && dd.diamond_agrees);
        let t = transfer_from_ddelta(&a).unwrap();
        assert_eq!(t.cohomology_dim(), 4);
        assert!(t.h.is_zero());
        match quasi_iso_kernel_checks(&a) {
            QuasiIsoReport::Checked { ker_delta_into_a, ker_d_into_a } => {
                assert!(ker_delta_into_a && ker_d_into_a);
            }
            _ => panic!("applicable"),
        }
    }

    /// A derivation delta gives a vanishing bracket (order one), and the
    /// seven-term relation then holds for degree reasons.
    #[test]
    fn derivation_delta_is_order_one() {
        let p = Presentation::new(vec![
            Generator { name: "a".into(), p: 1, q: 0 },
            Generator { name: "b".into(), p: 1, q: 0 },
            Generator { name: "c".into(), p: 1, q: 0 },
        ])
        .unwrap();
        let model = Model::full(&p);
        // delta: c -> 1 would be degree -1 but images must be homogeneous of
        // bidegree (0,0): the scalar 1 qualifies (empty monomial).
        let delta_der = Derivation::new(
            &p,
            (-1, 0),
            vec![Element::zero(&p), Element::zero(&p), Element::one(&p)],
        )
        .unwrap();
        let delta = model.operator_from_derivation(&delta_der, "delta").unwrap();
        let a = BVAlgebra::new(model, Matrix::zero(8, 8), delta).unwrap();
        let rep = check_bv(&a);
        assert!(rep.all(), "{rep:?}");
        assert!(is_order_one(&a));
    }
}
