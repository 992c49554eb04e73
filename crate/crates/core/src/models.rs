//! The shipped models: the Kodaira-Thurston surface, the Iwasawa manifold
//! (full and sigma-invariant), complex tori, a general nilmanifold-style
//! constructor, and the eta-twist that transports operators onto the
//! polyvector-field side.

use crate::bv::BVAlgebra;
use crate::cdga::{Derivation, Element, Generator, Mask, Presentation};
use crate::error::Error;
use crate::hodge::conjugated_operator;
use crate::matrix::Matrix;
use crate::model::Model;
use crate::scalar::Scalar;
use std::collections::BTreeMap;
use std::sync::Arc;

/// A model together with its named operators (as matrices on the model).
#[derive(Clone)]
pub struct ModelBundle {
    pub name: String,
    pub model: Model,
    pub ops: BTreeMap<String, Matrix>,
    pub notes: Vec<String>,
}

impl ModelBundle {
    pub fn op(&self, name: &str) -> Result<&Matrix, Error> {
        self.ops.get(name).ok_or_else(|| Error::Invalid(format!("unknown operator `{name}`")))
    }
}

fn gen(name: &str, p: i64, q: i64) -> Generator {
    Generator { name: name.into(), p, q }
}

/// The Kodaira-Thurston model: generators a, b of bidegree (1,0) and their
/// conjugates, with `del(bbar) = -i a abar` and `dbar(b) = i a abar`.
pub fn kodaira_thurston() -> Result<ModelBundle, Error> {
    let pres = Presentation::with_conjugation(
        vec![gen("a", 1, 0), gen("b", 1, 0), gen("abar", 0, 1), gen("bbar", 0, 1)],
        vec![2, 3, 0, 1],
        2,
    )?;
    let a_abar = Element::monomial(&pres, 0b0101); // a ^ abar
    let zero = Element::zero(&pres);
    let del = Derivation::new(
        &pres,
        (1, 0),
        vec![zero.clone(), zero.clone(), zero.clone(), a_abar.scale(&-Scalar::i())],
    )?;
    let dbar = Derivation::new
        (&pres, (0, 1), vec![zero.clone(), a_abar.scale(&Scalar::i()), zero.clone(), zero])?;
    let model = Model::full(&pres);
    let mut ops = BTreeMap::new();
    ops.insert("del".into(), model.operator_from_derivation(&del, "del")?);
    ops.insert("dbar".into(), model.operator_from_derivation(&dbar, "dbar")?);
    Ok(ModelBundle { name: "kodaira-thurston".into(), model, ops, notes: vec![] })
}

fn iwasawa_presentation() -> Result<Arc<Presentation>, Error> {
    Presentation::with_conjugation(
        vec![
            gen("a", 1, 0),
            gen("b", 1, 0),
            gen("c", 1, 0),
            gen("abar", 0, 1),
            gen("bbar", 0, 1),
            gen("cbar", 0, 1),
        ],
        vec![3, 4, 5, 0, 1, 2],
        3,
    )
}

fn iwasawa_derivations(pres: &Arc<Presentation>) -> Result<(Derivation, Derivation), Error> {
    let zero = Element::zero(pres);
    let ab = Element::monomial(pres, 0b000011);
    let abar_bbar = Element::monomial(pres, 0b011000);
    let del = Derivation::new(
        pres,
        (1, 0),
        vec![zero.clone(), zero.clone(), ab.scale(&Scalar::from_int(-1)), zero.clone(), zero.clone(), zero.clone()],
    )?;
    let dbar = Derivation::new(
        pres,
        (0, 1),
        vec![
            zero.clone(),
            zero.clone(),
            zero.clone(),
            zero.clone(),
            zero.clone(),
            abar_bbar.scale(&Scalar::from_int(-1)),
        ],
    )?;
    Ok((del, dbar))
}

/// The full Iwasawa model: `del(c) = -ab`, `dbar(cbar) = -abar bbar`,
/// all 64 monomials.
pub fn iwasawa_full() -> Result<ModelBundle, Error> {
    let pres = iwasawa_presentation()?;
    let (del, dbar) = iwasawa_derivations(&pres)?;
    let model = Model::full(&pres);
    let mut ops = BTreeMap::new();
    ops.insert("del".into(), model.operator_from_derivation(&del, "del")?);
    ops.insert("dbar".into(), model.operator_from_derivation(&dbar, "dbar")?);
    Ok(ModelBundle { name: "iwasawa-full".into(), model, ops, notes: vec![] })
}

/// Quarter-turn weight of an Iwasawa monomial: a, b carry weight 1, their
/// conjugates weight 3, c and cbar weight 2, all mod 4. The sigma-invariant
/// subalgebra is the weight-zero part.
fn iwasawa_sigma_weight(m: Mask) -> u32 {
    const WEIGHTS: [u32; 6] = [1, 1, 2, 3, 3, 2];
    let mut w = 0;
    for (k, wk) in WEIGHTS.iter().enumerate() {
        if m >> k & 1 == 1 {
            w += wk;
        }
    }
    w % 4
}

/// The sigma-invariant Iwasawa model (the orbifold quotient): the span of
/// the 16 monomials of quarter-turn weight zero, closed under the product
/// and under both differentials.
pub fn iwasawa_sigma_invariant() -> Result<ModelBundle, Error> {
    let pres = iwasawa_presentation()?;
    let (del, dbar) = iwasawa_derivations(&pres)?;
    let masks: Vec<Mask> = (0..64).filter(|&m| iwasawa_sigma_weight(m) == 0).collect();
    let model = Model::from_masks(&pres, masks);
    if !model.closed_under_wedge() {
        return Err(Error::Invalid("sigma-invariant span not closed under wedge".into()));
    }
    let mut ops = BTreeMap::new();
    ops.insert("del".into(), model.operator_from_derivation(&del, "del")?);
    ops.insert("dbar".into(), model.operator_from_derivation(&dbar, "dbar")?);
    Ok(ModelBundle {
        name: "iwasawa-orbifold".into(),
        model,
        ops,
        notes: vec!["span of the 16 quarter-turn-invariant monomials".into()],
    })
}

/// The complex m-torus model: m holomorphic generators and their conjugates,
/// zero differentials.
pub fn complex_torus(m: usize) -> Result<ModelBundle, Error> {
    assert!(m >= 1 && m <= 4, "torus dimension out of the supported range");
    let mut gens = Vec::new();
    for k in 1..=m {
        gens.push(gen(&format!("a{k}"), 1, 0));
    }
    for k in 1..=m {
        gens.push(gen(&format!("a{k}bar"), 0, 1));
    }
    let pairs: Vec<usize> = (0..2 * m).map(|k| (k + m) % (2 * m)).collect();
    let pres = Presentation::with_conjugation(gens, pairs, m)?;
    let model = Model::full(&pres);
    let n = model.dim();
    let mut ops = BTreeMap::new();
    ops.insert("del".into(), Matrix::zero(n, n));
    ops.insert("dbar".into(), Matrix::zero(n, n));
    Ok(ModelBundle { name: format!("torus-{m}"), model, ops, notes: vec![] })
}

/// General constructor: a presentation plus named derivations, each checked
/// square-zero, with every pair of distinct odd-degree derivations checked
/// to anticommute. Returns the full model with operator matrices.
pub fn nilmanifold_from_structure(
    name: &str,
    pres: &Arc<Presentation>,
    derivations: Vec<(String, Derivation)>,
) -> Result<ModelBundle, Error> {
    let model = Model::full(pres);
    let mut ops = BTreeMap::new();
    for (op_name, der) in &derivations {
        let m = model.operator_from_derivation(der, op_name)?;
        if !(&m * &m).is_zero() {
            return Err(Error::Invalid(format!("derivation `{op_name}` does not square to zero")));
        }
        ops.insert(op_name.clone(), m);
    }
    let names: Vec<&String> = ops.keys().collect();
    for i in 0..names.len() {
        for j in i + 1..names.len() {
            let a = &ops[names[i]];
            let b = &ops[names[j]];
            if !a.anticommutator(b).is_zero() {
                return Err(Error::Invalid(format!(
                    "derivations `{}` and `{}` do not anticommute",
                    names[i], names[j]
                )));
            }
        }
    }
    Ok(ModelBundle { name: name.into(), model, ops, notes: vec![] })
}

/// The eta-twisted bundle: the polyvector-valued side `L` with its transported
/// operators. `L` replaces each holomorphic generator by a tangent-direction
/// generator `t_<name>`; `eta` contracts the tangent part into the volume-like
/// form `Omega` (the product of all holomorphic generators) and keeps the
/// antiholomorphic part.
pub struct EtaTwist {
    pub source: ModelBundle,
    pub l_bundle: ModelBundle,
    /// Matrix of eta: L -> A in model coordinates.
    pub eta: Matrix,
    /// The involution g on L, swapping tangent and antiholomorphic directions.
    pub g: Matrix,
}

/// Interior product of the tangent monomial `t_I` into the form monomial `w`,
/// contracting the *last* tangent factor first. Returns the signed remaining
/// mask, or None when some factor of `I` is missing from `w`.
fn contract(i_mask: Mask, w: Mask, n_gens: usize) -> Option<(i32, Mask)> {
    let mut sign = 1i32;
    let mut w = w;
    // factors of I in descending order = contract the last one first
    for k in (0..n_gens).rev() {
        if i_mask >> k & 1 == 0 {
            continue;
        }
        if w >> k & 1 == 0 {
            return None;
        }
        // ι_k picks up (-1)^{position of k within w}
        let pos = (w & ((1 << k) - 1)).count_ones();
        if pos % 2 == 1 {
            sign = -sign;
        }
        w &= !(1 << k);
    }
    Some((sign, w))
}

pub fn eta_twist(source: &ModelBundle) -> Result<EtaTwist, Error> {
    let pres = source.model.presentation().clone();
    let m = pres
        .complex_dim()
        .ok_or_else(|| Error::Invalid("eta twist needs a conjugation-equipped model".into()))?;
    let gens = pres.gens();
    let holo: Vec<usize> = (0..gens.len()).filter(|&k| gens[k].p == 1 && gens[k].q == 0).collect();
    let anti: Vec<usize> = (0..gens.len()).filter(|&k| gens[k].q == 1 && gens[k].p == 0).collect();
    if holo.len() != m || anti.len() != m || gens.len() != 2 * m {
        return Err(Error::Invalid("eta twist expects m (1,0)-generators and m (0,1)-generators".into()));
    }

    // L presentation: tangent generators first (bidegree (1,0) in the L
    // grading), then the antiholomorphic generators unchanged.
    let mut l_gens = Vec::new();
    for &k in &holo {
        l_gens.push(gen(&format!("t_{}", gens[k].name), 1, 0));
    }
    for &k in &anti {
        l_gens.push(gen(&gens[k].name.clone(), 0, 1));
    }
    let l_pres = Presentation::new(l_gens)?;
    let l_model = Model::full(&l_pres);

    if source.model.dim() != l_model.dim() {
        return Err(Error::Invalid("eta twist needs the full source model".into()));
    }

    // Omega = product of the holomorphic generators, in presentation order.
    let omega: Mask = holo.iter().map(|&k| 1 << k).sum();

    // eta(t_I ^ wbar_J) = (iota_{t_I} Omega) ^ wbar_J.
    let n = l_model.dim();
    let mut eta = Matrix::zero(n, n);
    for (j, &lm) in l_model.basis_masks().iter().enumerate() {
        // split the L monomial into tangent part and antiholomorphic part
        let mut i_mask_a: Mask = 0; // tangent factors, as a mask over A's generators
        let mut bar_mask_a: Mask = 0;
        for (pos, &k) in holo.iter().enumerate() {
            if lm >> pos & 1 == 1 {
                i_mask_a |= 1 << k;
            }
        }
        for (pos, &k) in anti.iter().enumerate() {
            if lm >> (m + pos) & 1 == 1 {
                bar_mask_a |= 1 << k;
            }
        }
        let Some((sign, rest)) = contract(i_mask_a, omega, gens.len()) else {
            continue;
        };
        let form = Element::monomial(&pres, rest)
            .wedge(&Element::monomial(&pres, bar_mask_a))?
            .scale(&Scalar::from_int(sign as i64));
        let col = source.model.to_coords(&form)?;
        for (i, c) in col.into_iter().enumerate() {
            if !c.is_zero() {
                eta.set(i, j, c);
            }
        }
    }
    let eta_inv = eta.inverse().map_err(|_| Error::Invalid("eta is not invertible".into()))?;

    // g: algebra involution of L exchanging t_k with the antiholomorphic
    // partner of generator k, extended multiplicatively (Koszul signs from
    // the fold).
    let conj_pairs = pres.conj_pairs().expect("conjugation present");
    let mut g_images: Vec<usize> = vec![0; 2 * m];
    for (pos, &k) in holo.iter().enumerate() {
        let partner = conj_pairs[k];
        let bar_pos = anti.iter().position(|&x| x == partner).expect("partner is antiholomorphic");
        g_images[pos] = m + bar_pos;
        g_images[m + bar_pos] = pos;
    }
    let g = l_model.operator_from_fn("g", |e| {
        let mut out = Element::zero(&l_pres);
        for (&mask, c) in e.terms() {
            let mut term = Element::one(&l_pres);
            for k in 0..2 * m {
                if mask >> k & 1 == 1 {
                    term = term.wedge(&Element::generator(&l_pres, g_images[k]))?;
                }
            }
            out = out.add(&term.scale(c))?;
        }
        Ok(out)
    })?;

    // Transported operators: X_eta = eta^{-1} . X . eta, plus transported
    // adjoints of del and dbar.
    let mut ops = BTreeMap::new();
    for (name, mat) in &source.ops {
        ops.insert(format!("{name}_eta"), &(&eta_inv * mat) * &eta);
        ops.insert(format!("{name}_star_eta"), &(&eta_inv * &mat.dagger()) * &eta);
    }
    let l_bundle = ModelBundle {
        name: format!("{}-eta", source.name),
        model: l_model,
        ops,
        notes: vec!["operators transported through eta; adjoints taken upstairs".into()],
    };
    Ok(EtaTwist { source: source.clone(), l_bundle, eta, g })
}

impl EtaTwist {
    /// The two involution identities tying conjugation-by-g to adjoints:
    /// `del_star_eta = -g . dbar_eta . g` and `del_eta = -g . dbar_star_eta . g`.
    pub fn involution_identities(&self) -> Result<(bool, bool), Error> {
        let g = &self.g;
        let del_eta = self.l_bundle.op("del_eta")?;
        let dbar_eta = self.l_bundle.op("dbar_eta")?;
        let del_star = self.l_bundle.op("del_star_eta")?;
        let dbar_star = self.l_bundle.op("dbar_star_eta")?;
        let conj_by_g = |x: &Matrix| -&(&(g * x) * g);
        Ok((*del_star == conj_by_g(dbar_eta), *del_eta == conj_by_g(dbar_star)))
    }

    /// g is an involution on the nose.
    pub fn g_is_involution(&self) -> bool {
        (&self.g * &self.g) == Matrix::identity(self.g.rows)
    }

    /// eta is bigraded: it sends the L-bidegree (p,q) block to the A-bidegree
    /// (m-p, q) block.
    pub fn eta_is_bigraded(&self) -> bool {
        let m = self.source.model.presentation().complex_dim().unwrap() as i64;
        let l = &self.l_bundle.model;
        let a = &self.source.model;
        for j in 0..l.dim() {
            let (p, q) = l.basis_bidegree(j);
            for i in 0..a.dim() {
                if !self.eta.get(i, j).is_zero() && a.basis_bidegree(i) != (m - p, q) {
                    return false;
                }
            }
        }
        true
    }

    /// The three BV-algebra candidates carried by the twist:
    /// Dolbeault `(L, dbar_eta, del_eta)`, its conjugate-adjoint partner
    /// `(L, del_star_eta, -dbar_star_eta)`, and the de Rham style
    /// `(L, dbar_eta + del_star_eta, del_eta - dbar_star_eta)`.
    pub fn bv_triples(&self) -> Result<Vec<(String, BVAlgebra)>, Error> {
        let l = &self.l_bundle;
        let del_eta = l.op("del_eta")?.clone();
        let dbar_eta = l.op("dbar_eta")?.clone();
        let del_star = l.op("del_star_eta")?.clone();
        let dbar_star = l.op("dbar_star_eta")?.clone();
        let model = l.model.clone();
        Ok(vec![
            (
                "L_Dol".into(),
                BVAlgebra::new(model.clone(), dbar_eta.clone(), del_eta.clone())?,
            ),
            (
                "L_Dol_star".into(),
                BVAlgebra::new(model.clone(), del_star.clone(), -&dbar_star)?,
            ),
            (
                "L_dR".into(),
                BVAlgebra::new(model, &dbar_eta + &del_star, &del_eta - &dbar_star)?,
            ),
        ])
    }

    /// For the de Rham triple, `d delta + delta d` equals the transported
    /// difference of Laplacians `eta^{-1} (lap_del - lap_dbar) eta`; the
    /// identity holds on any bicomplex source and shows exactly when the
    /// double-complex axiom survives the twist.
    pub fn de_rham_obstruction_identity(&self) -> Result<bool, Error> {
        let l = &self.l_bundle;
        let d = &(l.op("dbar_eta")?.clone()) + l.op("del_star_eta")?;
        let delta = &(l.op("del_eta")?.clone()) - l.op("dbar_star_eta")?;
        let lhs = d.anticommutator(&delta);
        let del = self.source.op("del")?;
        let dbar = self.source.op("dbar")?;
        let diff = &crate::hodge::laplacian(del) - &crate::hodge::laplacian(dbar);
        let eta_inv = self.eta.inverse().expect("eta invertible");
        let rhs = &(&eta_inv * &diff) * &self.eta;
        Ok(lhs == rhs)
    }
}

/// Conjugated operator on a bundle's model (helper for cross-checks).
pub fn conjugate_op(bundle: &ModelBundle, m: &Matrix) -> Result<Matrix, Error> {
    let c = bundle.model.operator_from_fn("conj", |e| e.conjugate())?;
    Ok(conjugated_operator(&c, m))
}
