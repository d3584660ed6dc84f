//! Classification of reduced singular points: resonance analysis, formal
//! linearization probe, Camacho-Sad indices via exact residues, saddle-node
//! alignment, and bounded first-integral certificates.

use std::collections::BTreeMap;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::factor::factor_univariate;
use crate::field::{FieldDescriptor, FieldElem};
use crate::linalg::Mat;
use crate::milnor::{milnor_along_axis, milnor_number, Milnor};
use crate::poly1::Poly1;
use crate::poly2::{Axis, OneForm, Poly2, RatioClass};
use crate::reduction::{Config, ReductionTree};

/// Where an attribute's value came from.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Provenance {
    Certified,
    Probed(usize),
    Annotated,
    Assumed,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum FirstIntegral {
    Yes { p: u64, q: u64 },
    No,
    UnknownAtDepth(usize),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Alignment {
    Transverse,
    Tangent,
    NotApplicable,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Periodicity {
    Yes,
    No,
    Unknown,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum CsIndex {
    Exact(FieldElem),
    Unknown,
}

impl CsIndex {
    pub fn exact(&self) -> Option<&FieldElem> {
        match self {
            CsIndex::Exact(e) => Some(e),
            CsIndex::Unknown => None,
        }
    }
}

/// Kind of a reduced singularity, following the four formal normal forms.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Kind {
    /// Eigenvalue ratio irrational or non-real; witness s = trace²/det when
    /// rational.
    NonResonant { witness: Option<String> },
    /// Resonant ratio −p/q, no obstruction found within the probe depth.
    ResonantProbed { p: u64, q: u64, depth: usize },
    /// Resonant with a nonzero resonant residue at order k.
    ResonantObstructed { p: u64, q: u64, k: usize, residue: String },
    /// One zero eigenvalue; `weak_order` = Milnor number along the weak
    /// variety = local Milnor number.
    SaddleNode { weak_order: usize },
}

impl Kind {
    pub fn is_saddle_node(&self) -> bool {
        matches!(self, Kind::SaddleNode { .. })
    }
}

/// Classification record of one reduced singular point.
#[derive(Clone, Debug)]
pub struct ReducedSingularity {
    pub kind: Kind,
    pub corner: bool,
    /// Camacho-Sad index along each divisor branch.
    pub cs_index: BTreeMap<Axis, CsIndex>,
    /// Saddle-node alignment per divisor branch.
    pub alignment: BTreeMap<Axis, Alignment>,
    /// Milnor number of the form along each divisor branch.
    pub mu_along: BTreeMap<Axis, usize>,
    pub first_integral: (FirstIntegral, Provenance),
    /// Weak-holonomy periodicity, meaningful for tangent saddle-nodes.
    pub weak_periodic: (Periodicity, Provenance),
}

impl ReducedSingularity {
    /// Tangent saddle-node at this point (along any divisor branch)?
    pub fn is_tangent_saddle_node(&self) -> bool {
        self.kind.is_saddle_node()
            && self
                .alignment
                .values()
                .any(|a| *a == Alignment::Tangent)
    }
}

// ---------------------------------------------------------------------------
// Camacho-Sad index by exact residue
// ---------------------------------------------------------------------------

/// Residue at 0 of g(t)/h(t) dt, with ord(h) = m ≥ 1: the coefficient of
/// t^{m-1} in g·(h/t^m)^{-1}.
fn residue_at_zero(g: &Poly1, h: &Poly1) -> Option<FieldElem> {
    if h.is_zero() {
        return None;
    }
    let field = Arc::clone(&g.field);
    let m = h.coeffs.iter().position(|c| !c.is_zero()).unwrap();
    if m == 0 {
        return Some(FieldElem::zero(&field)); // h a unit: no pole
    }
    if g.is_zero() {
        return Some(FieldElem::zero(&field));
    }
    // power series inverse of h/t^m to m terms
    let unit: Vec<FieldElem> = (0..m).map(|i| h.coeff(m + i)).collect();
    let u0_inv = unit[0].inv().unwrap();
    let mut inv = vec![FieldElem::zero(&field); m];
    inv[0] = u0_inv.clone();
    for k in 1..m {
        let mut acc = FieldElem::zero(&field);
        for j in 1..=k {
            acc = acc.add(&unit[j].mul(&inv[k - j]));
        }
        inv[k] = acc.mul(&u0_inv).neg();
    }
    // coefficient of t^{m-1} in g·inv
    let mut res = FieldElem::zero(&field);
    for j in 0..m {
        res = res.add(&g.coeff(j).mul(&inv[m - 1 - j]));
    }
    Some(res)
}

/// Camacho-Sad index of the form along an invariant coordinate axis.
///
/// For the branch {y=0} with a = y·ā this is −Res₀ ā(x,0)/b(x,0) dx; the
/// symmetric formula serves {x=0}. Exact in the point's field.
pub fn camacho_sad_index(form: &OneForm, axis: Axis) -> Result<FieldElem> {
    if !form.axis_invariant(axis) {
        return Err(Error::BranchNotInvariant);
    }
    let (g, h) = match axis {
        Axis::X => {
            let abar = form.a.div_y_pow(1);
            (abar.restrict_y0(), form.b.restrict_y0())
        }
        Axis::Y => {
            let bbar = form.b.div_x_pow(1);
            (bbar.restrict_x0(), form.a.restrict_x0())
        }
    };
    residue_at_zero(&g, &h)
        .map(|r| r.neg())
        .ok_or(Error::BranchNotInvariant)
}

/// Milnor number along a smooth invariant branch given as an axis.
pub fn milnor_along_branch(form: &OneForm, axis: Axis) -> Result<usize> {
    milnor_along_axis(form, axis).ok_or(Error::BranchNotInvariant)
}

/// Saddle-node alignment relative to an invariant divisor branch: transverse
/// iff the divisor is smooth at the point (non-corner) and is the strong
/// variety, i.e. the Milnor number along the branch is 1.
pub fn saddle_node_tangency(form: &OneForm, axis: Axis, corner: bool) -> Result<Alignment> {
    let mu = milnor_along_branch(form, axis)?;
    if corner || mu > 1 {
        Ok(Alignment::Tangent)
    } else {
        Ok(Alignment::Transverse)
    }
}

// ---------------------------------------------------------------------------
// linearizability probe
// ---------------------------------------------------------------------------

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ProbeResult {
    LinearizableUpTo(usize),
    /// First non-removable resonant block at order k in (z1^p z2^q); the
    /// residue is the coset difference of the resonant coefficient pair,
    /// reported in the probe's normalized coordinates.
    ObstructedAt { k: usize, residue: FieldElem },
}

/// Brings the linear part to q·x dy + p·y dx, then removes non-resonant terms
/// degree by degree, reporting the first nonzero resonant residue within
/// depth K (orders k = 1..K in the resonant monomial).
pub fn linearizability_probe(form: &OneForm, p: u64, q: u64, depth: usize) -> ProbeResult {
    if depth == 0 {
        return ProbeResult::LinearizableUpTo(0);
    }
    let mut omega = diagonalize_resonant(form, p, q);
    let field = Arc::clone(omega.field());
    let dmax = (depth as u32) * (p + q) as u32 + 1;
    omega = OneForm::new(
        omega.a.truncate_below(dmax + 1),
        omega.b.truncate_below(dmax + 1),
    );
    for d in 2..=dmax {
        let target_a = omega.a.homogeneous_part(d).neg();
        let target_b = omega.b.homogeneous_part(d).neg();
        if target_a.is_zero() && target_b.is_zero() {
            continue;
        }
        let sol = solve_homological(&field, p, q, d, &target_a, &target_b);
        let k_order = ((d as u64 - 1) / (p + q)) as usize;
        match sol {
            HomologicalOutcome::Removable { xi, eta, w } => {
                omega = apply_normalization(&omega, &xi, &eta, &w, dmax);
            }
            HomologicalOutcome::Obstructed { residue } => {
                debug_assert_eq!((d as u64 - 1) % (p + q), 0);
                return ProbeResult::ObstructedAt {
                    k: k_order,
                    residue,
                };
            }
        }
    }
    ProbeResult::LinearizableUpTo(depth)
}

enum HomologicalOutcome {
    Removable { xi: Poly2, eta: Poly2, w: Poly2 },
    Obstructed { residue: FieldElem },
}

/// Solves the degree-d homological equation for the linear part
/// q·x dy + p·y dx. Corrections available: coordinate shifts (ξ, η) of
/// homogeneous degree d and a unit part w of degree d−1, acting by
///   dx side: p·η + p·y·ξ_x + q·x·η_x + p·y·w
///   dy side: q·ξ + p·y·ξ_y + q·x·η_y + q·x·w.
///
/// Writing ξ_j, η_j, w_j for the coefficients at y-exponent j, the system is
///   A_j = (p + q(d−j))·η_j + p(d−j+1)·ξ_{j−1} + p·w_{j−1}
///   B_j = (q + pj)·ξ_j + q(j+1)·η_{j+1} + q·w_j,
/// solved in one ascending pass: the A-row always determines η_j, and after
/// eliminating η_{j+1} the B-row determines ξ_j (or w_j when the ξ
/// coefficient vanishes). Both coefficients vanish together exactly at the
/// resonant slot j = qk of degrees d = k(p+q)+1, where the invariant
/// functional B_{qk} − (q/p)·A_{qk+1} is the obstruction.
fn solve_homological(
    field: &Arc<FieldDescriptor>,
    p: u64,
    q: u64,
    d: u32,
    target_a: &Poly2,
    target_b: &Poly2,
) -> HomologicalOutcome {
    let rat_of = |n: i64, m: i64| crate::rat::rat(n, m);
    let a_at = |j: u32| target_a.coeff(d - j, j);
    let b_at = |j: u32| target_b.coeff(d - j, j);
    let (pi, qi) = (p as i64, q as i64);
    let di = d as i64;
    let mut xi = Poly2::zero(field);
    let mut eta = Poly2::zero(field);
    let mut w = Poly2::zero(field);
    let mut xi_prev = FieldElem::zero(field);
    let mut w_prev = FieldElem::zero(field);
    for j in 0..=d {
        let ji = j as i64;
        // η_j from the A-row.
        let denom_eta = rat_of(pi + qi * (di - ji), 1);
        let eta_j = a_at(j)
            .sub(&xi_prev.mul_rat(&rat_of(pi * (di - ji + 1), 1)))
            .sub(&w_prev.mul_rat(&rat_of(pi, 1)))
            .mul_rat(&denom_eta.recip());
        eta.add_term(d - j, j, eta_j);
        // ξ_j / w_j from the B-row with η_{j+1} eliminated.
        let (c_xi, c_w, rhs) = if j == d {
            (rat_of(qi + pi * di, 1), rat_of(0, 1), b_at(d))
        } else {
            let den = pi + qi * (di - ji - 1);
            let c_xi = rat_of(qi + pi * ji, 1)
                - rat_of(qi * (ji + 1) * pi * (di - ji), den);
            let c_w = rat_of(qi, 1) - rat_of(qi * (ji + 1) * pi, den);
            let rhs = b_at(j).sub(&a_at(j + 1).mul_rat(&rat_of(qi * (ji + 1), den)));
            (c_xi, c_w, rhs)
        };
        use num_traits::Zero;
        let (xi_j, w_j) = if !c_xi.is_zero() {
            (rhs.mul_rat(&c_xi.recip()), FieldElem::zero(field))
        } else if !c_w.is_zero() {
            (FieldElem::zero(field), rhs.mul_rat(&c_w.recip()))
        } else {
            // Resonant slot: rhs is the cokernel functional.
            if !rhs.is_zero() {
                return HomologicalOutcome::Obstructed { residue: rhs };
            }
            (FieldElem::zero(field), FieldElem::zero(field))
        };
        xi.add_term(d - j, j, xi_j.clone());
        if j < d {
            w.add_term(d - 1 - j, j, w_j.clone());
        }
        xi_prev = xi_j;
        w_prev = w_j;
    }
    HomologicalOutcome::Removable { xi, eta, w }
}

/// Applies x → x+ξ, y → y+η and multiplies by (1 + w), truncating above the
/// working degree.
fn apply_normalization(form: &OneForm, xi: &Poly2, eta: &Poly2, w: &Poly2, dmax: u32) -> OneForm {
    let field = Arc::clone(form.field());
    let x_img = Poly2::monomial(&field, FieldElem::one(&field), 1, 0).add(xi);
    let y_img = Poly2::monomial(&field, FieldElem::one(&field), 0, 1).add(eta);
    let a_sub = form.a.subst_truncated(&x_img, &y_img, dmax);
    let b_sub = form.b.subst_truncated(&x_img, &y_img, dmax);
    // φ*ω = a(φ) dφ1 + b(φ) dφ2, everything capped at the working degree
    let cap = |p: Poly2| p.truncate_below(dmax + 1);
    let new_a = cap(a_sub.mul(&x_img.deriv_x())).add(&cap(b_sub.mul(&y_img.deriv_x())));
    let new_b = cap(a_sub.mul(&x_img.deriv_y())).add(&cap(b_sub.mul(&y_img.deriv_y())));
    let unit = Poly2::constant(FieldElem::one(&field)).add(w);
    OneForm::new(cap(new_a.mul(&unit)), cap(new_b.mul(&unit)))
}

/// Linear change bringing the dual linear part to diag(λ1, λ2) with
/// (λ1, λ2) = c·(q, −p), then scales the form so its linear truncation is
/// exactly q·x dy + p·y dx.
fn diagonalize_resonant(form: &OneForm, p: u64, q: u64) -> OneForm {
    let lp = form.linear_part();
    let field = Arc::clone(form.field());
    // characteristic polynomial λ² − T λ + Δ
    let charpoly = Poly1::from_coeffs(
        &field,
        vec![lp.det.clone(), lp.trace.neg(), FieldElem::one(&field)],
    );
    let (work_field, l1, l2) = {
        let factors = factor_univariate(&charpoly);
        if factors[0].0.degree() == 1 {
            let r1 = factors[0].0.coeff(0).neg();
            let r2 = if factors.len() > 1 {
                factors[1].0.coeff(0).neg()
            } else {
                r1.clone() // double root cannot happen for a resonant saddle
            };
            (Arc::clone(&field), r1, r2)
        } else {
            let ext = crate::factor::extend_field(&field, "l", &charpoly)
                .expect("characteristic polynomial irreducible");
            let r1 = FieldElem::generator(&ext, ext.levels.len() - 1);
            let r2 = lp.trace.embed(&ext).sub(&r1);
            (ext, r1, r2)
        }
    };
    // Orient so λ1/q = −λ2/p.
    let pe = FieldElem::from_int(&work_field, p as i64);
    let qe = FieldElem::from_int(&work_field, q as i64);
    let (l1, l2) = if l1.mul(&pe).add(&l2.mul(&qe)).is_zero() {
        (l1, l2)
    } else {
        (l2.clone(), l1.clone())
    };
    debug_assert!(l1.mul(&pe).add(&l2.mul(&qe)).is_zero());
    let form = form.embed(&work_field);
    let lp = form.linear_part();
    let m = [
        [lp.neg_b10.clone(), lp.neg_b01.clone()],
        [lp.a10.clone(), lp.a01.clone()],
    ];
    let eigvec = |l: &FieldElem| -> (FieldElem, FieldElem) {
        // kernel of (M − λI)
        let r1 = (m[0][0].sub(l), m[0][1].clone());
        if !r1.0.is_zero() || !r1.1.is_zero() {
            (r1.1.neg(), r1.0.clone())
        } else {
            let r2 = (m[1][0].clone(), m[1][1].sub(l));
            (r2.1.neg(), r2.0.clone())
        }
    };
    let v1 = eigvec(&l1);
    let v2 = eigvec(&l2);
    // (x, y) = (m11 x' + m12 y', m21 x' + m22 y')
    let (m11, m21) = v1;
    let (m12, m22) = v2;
    let x_img = {
        let mut t = Poly2::monomial(&work_field, m11.clone(), 1, 0);
        t.add_term(0, 1, m12.clone());
        t
    };
    let y_img = {
        let mut t = Poly2::monomial(&work_field, m21.clone(), 1, 0);
        t.add_term(0, 1, m22.clone());
        t
    };
    let a_sub = form.a.subst(&x_img, &y_img);
    let b_sub = form.b.subst(&x_img, &y_img);
    let new_a = a_sub.scale(&m11).add(&b_sub.scale(&m21));
    let new_b = a_sub.scale(&m12).add(&b_sub.scale(&m22));
    // The transformed linear part is α(p·y dx + q·x dy) for some unit α
    // depending on the eigenvector normalization; read α off and divide.
    let alpha = new_a.coeff(0, 1).div(&pe);
    debug_assert_eq!(new_b.coeff(1, 0), alpha.mul(&qe));
    debug_assert!(new_a.coeff(1, 0).is_zero() && new_b.coeff(0, 1).is_zero());
    let scale = alpha.inv().unwrap();
    OneForm::new(new_a.scale(&scale), new_b.scale(&scale))
}

// ---------------------------------------------------------------------------
// bounded first-integral search
// ---------------------------------------------------------------------------

/// Searches for a nonconstant polynomial first integral of the form, i.e.
/// f with b·f_x − a·f_y ≡ 0 and f(0,0) = 0, of total degree ≤ dmax.
pub fn polynomial_first_integral(form: &OneForm, dmax: u32) -> Option<Poly2> {
    let field = Arc::clone(form.field());
    let unknowns: Vec<(u32, u32)> = (0..=dmax)
        .flat_map(|d| (0..=d).map(move |j| (d - j, j)))
        .filter(|&(i, j)| i + j >= 1)
        .collect();
    let prod_deg = dmax + form.a.total_degree().unwrap_or(0).max(form.b.total_degree().unwrap_or(0));
    let rows: Vec<(u32, u32)> = (0..=prod_deg)
        .flat_map(|d| (0..=d).map(move |j| (d - j, j)))
        .collect();
    let row_idx: BTreeMap<(u32, u32), usize> =
        rows.iter().enumerate().map(|(k, &m)| (m, k)).collect();
    let mut mat = Mat::zero(&field, rows.len(), unknowns.len());
    for (col, &(i, j)) in unknowns.iter().enumerate() {
        // contribution of f = x^i y^j to b·f_x − a·f_y
        let mut contrib = Poly2::zero(&field);
        if i >= 1 {
            contrib = contrib.add(
                &form
                    .b
                    .mul_monomial(i - 1, j)
                    .scale(&FieldElem::from_int(&field, i as i64)),
            );
        }
        if j >= 1 {
            contrib = contrib.sub(
                &form
                    .a
                    .mul_monomial(i, j - 1)
                    .scale(&FieldElem::from_int(&field, j as i64)),
            );
        }
        for (&(mi, mj), c) in &contrib.terms {
            let r = row_idx[&(mi, mj)];
            let cur = mat.at(r, col).add(c);
            mat.set(r, col, cur);
        }
    }
    let kernel = mat.kernel();
    let v = kernel.into_iter().next()?;
    let mut f = Poly2::zero(&field);
    for (col, &(i, j)) in unknowns.iter().enumerate() {
        f.add_term(i, j, v[col].clone());
    }
    if f.is_zero() {
        None
    } else {
        Some(f)
    }
}

// ---------------------------------------------------------------------------
// the classification entry points
// ---------------------------------------------------------------------------

/// Classifies one reduced singular point given its local form and the divisor
/// branches through it.
pub fn classify_reduced(
    form: &OneForm,
    branches: &[(usize, Axis)],
    config: &Config,
) -> Result<ReducedSingularity> {
    let rc = form.linear_part().ratio_class();
    if !rc.is_reduced() || form.order() == 0 {
        return Err(Error::NotReduced);
    }
    let corner = branches.len() == 2;
    let mut cs_index = BTreeMap::new();
    let mut alignment = BTreeMap::new();
    let mut mu_along = BTreeMap::new();
    for &(_, axis) in branches {
        if !form.axis_invariant(axis) {
            return Err(Error::BranchNotInvariant);
        }
        cs_index.insert(axis, CsIndex::Exact(camacho_sad_index(form, axis)?));
        mu_along.insert(axis, milnor_along_branch(form, axis)?);
    }
    let kind;
    let first_integral;
    let mut weak_periodic = (Periodicity::Unknown, Provenance::Assumed);
    match &rc {
        RatioClass::IrrationalOrComplexRatio { witness } => {
            kind = Kind::NonResonant {
                witness: witness.as_ref().map(crate::rat::fmt_rat),
            };
            first_integral = (FirstIntegral::No, Provenance::Certified);
            weak_periodic = (Periodicity::No, Provenance::Certified);
            for &(_, axis) in branches {
                alignment.insert(axis, Alignment::NotApplicable);
            }
        }
        RatioClass::RationalRatio { .. } => {
            let (p, q) = rc.resonance().expect("negative rational ratio");
            for &(_, axis) in branches {
                alignment.insert(axis, Alignment::NotApplicable);
            }
            // A certified polynomial first integral settles linearizability
            // at every depth, so it is tried before the iterative probe.
            if polynomial_first_integral(form, config.search_degree as u32).is_some() {
                kind = Kind::ResonantProbed {
                    p,
                    q,
                    depth: config.probe_depth,
                };
                first_integral = (FirstIntegral::Yes { p, q }, Provenance::Certified);
                weak_periodic = (Periodicity::Yes, Provenance::Certified);
            } else {
                match linearizability_probe(form, p, q, config.probe_depth) {
                    ProbeResult::ObstructedAt { k, residue } => {
                        kind = Kind::ResonantObstructed {
                            p,
                            q,
                            k,
                            residue: format!("{}", residue),
                        };
                        first_integral = (FirstIntegral::No, Provenance::Certified);
                        weak_periodic = (Periodicity::No, Provenance::Certified);
                    }
                    ProbeResult::LinearizableUpTo(depth) => {
                        kind = Kind::ResonantProbed { p, q, depth };
                        first_integral =
                            (FirstIntegral::UnknownAtDepth(depth), Provenance::Probed(depth));
                    }
                }
            }
        }
        RatioClass::SaddleNodeCandidate => {
            let weak_order = match milnor_number(&form.a, &form.b, config.milnor_cap) {
                Milnor::Finite(m) => m,
                Milnor::NotIsolated => return Err(Error::NotReduced),
                Milnor::CapExceeded => return Err(Error::CapExceeded(config.milnor_cap)),
            };
            kind = Kind::SaddleNode { weak_order };
            first_integral = (FirstIntegral::No, Provenance::Certified);
            for &(_, axis) in branches {
                alignment.insert(axis, saddle_node_tangency(form, axis, corner)?);
            }
        }
        RatioClass::BothZeroEigen => unreachable!("excluded by is_reduced"),
    }
    Ok(ReducedSingularity {
        kind,
        corner,
        cs_index,
        alignment,
        mu_along,
        first_integral,
        weak_periodic,
    })
}

/// Classifies every cime singular point of a completed tree.
pub fn classify_tree(tree: &mut ReductionTree, config: &Config) -> Result<()> {
    let mut records = BTreeMap::new();
    for p in tree.cime_points() {
        let rec = classify_reduced(&p.form, &p.branches, config)?;
        records.insert(p.id, rec);
    }
    tree.classifications = records;
    Ok(())
}
