//! The blow-up reduction loop and its tree bookkeeping.
//!
//! Points are blown up level by level until every singular point of the
//! strict transform, together with the exceptional divisor through it, is
//! reduced. Conjugate singular directions are processed once per irreducible
//! factor; the factor degree multiplies the orbit size and the local field
//! grows by exactly that factor when it is nontrivial.

use std::collections::BTreeMap;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::factor::{extend_field, factor_univariate};
use crate::field::{FieldDescriptor, FieldElem};
use crate::localclass::ReducedSingularity;
use crate::poly1::Poly1;
use crate::poly2::{Axis, OneForm, Poly2};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum DicriticalPolicy {
    /// Error out on the first dicritical blow-up.
    Abort,
    /// Mark the component non-invariant and keep reducing; invariant
    /// pipelines downstream refuse marked trees.
    Mark,
}

#[derive(Clone, Debug)]
pub struct Config {
    pub dicritical: DicriticalPolicy,
    pub max_height: usize,
    pub milnor_cap: usize,
    /// Depth K of the resonant linearizability probe.
    pub probe_depth: usize,
    /// Degree bound of the polynomial first-integral / integrating-factor /
    /// basic-field searches.
    pub search_degree: usize,
}

impl Default for Config {
    fn default() -> Self {
        Config {
            dicritical: DicriticalPolicy::Abort,
            max_height: 64,
            milnor_cap: crate::milnor::DEFAULT_MILNOR_CAP,
            probe_depth: 10,
            search_degree: 12,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum ChartKind {
    /// x = u, y = u·w; divisor {u = 0}.
    X,
    /// x = t·v, y = v; divisor {v = 0}.
    Y,
}

/// Chart ancestry entry: which chart was taken below this point and, for the
/// X chart, at which divisor abscissa the point sits.
#[derive(Clone, Debug)]
pub struct ChartStep {
    pub kind: ChartKind,
    /// Root of the defining irreducible factor in the child's field
    /// (zero for the Y-chart origin).
    pub root: FieldElem,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PointStatus {
    /// Blown up at `height + 1`.
    Blown,
    /// Reduced couple; a leaf of the tree.
    Reduced,
}

/// An infinitely-near point: one representative per Galois orbit.
#[derive(Clone, Debug)]
pub struct InfNearPoint {
    pub id: usize,
    pub height: usize,
    pub parent: Option<usize>,
    /// Deterministic construction path, e.g. "/X[v^2-2]/Y".
    pub path: String,
    pub field: Arc<FieldDescriptor>,
    /// Absolute orbit size over Q (= product of factor degrees on the path).
    pub orbit: usize,
    pub chart: Option<ChartStep>,
    /// Local strict 1-form with the point at the origin.
    pub form: OneForm,
    /// Divisor components through the point, each one being a coordinate
    /// axis of the local chart. At most two.
    pub branches: Vec<(usize, Axis)>,
    /// Creating points of the components through this point.
    pub proximate_to: Vec<usize>,
    pub status: PointStatus,
    /// Algebraic multiplicity of the strict form at the point.
    pub nu: u32,
}

impl InfNearPoint {
    pub fn is_corner(&self) -> bool {
        self.branches.len() == 2
    }

    pub fn branch_component(&self, axis: Axis) -> Option<usize> {
        self.branches
            .iter()
            .find(|&&(_, a)| a == axis)
            .map(|&(c, _)| c)
    }
}

#[derive(Clone, Debug)]
pub struct DivisorComp {
    pub id: usize,
    pub creator: usize,
    /// Absolute orbit size of the component (= orbit of its creator).
    pub orbit: usize,
    pub self_int: i64,
    /// Multiplicity of the form along the component, accumulated from the
    /// division exponents.
    pub m_omega: u64,
    /// Division exponent of the blow-up that created the component.
    pub k_division: u32,
    /// Pullback weight of the maximal ideal (x, y).
    pub m_ideal: u64,
    /// Pullback weight of the separatrix equation; filled by the separatrix
    /// pass.
    pub m_sep: Option<u64>,
    pub dicritical: bool,
    /// Cime singular points on the component (point id, axis that realizes
    /// the component in the point's local coordinates).
    pub residents: Vec<(usize, Axis)>,
}

/// Intersection of two components, remembered at blow-up time.
#[derive(Clone, Debug)]
pub struct CornerRec {
    pub newer: usize,
    pub older: usize,
    /// The blown point at whose exceptional line the corner sits; the corner
    /// has one copy per orbit member of this point.
    pub at_point: usize,
    /// Singular point occupying the corner, when there is one.
    pub occupied_by: Option<usize>,
}

#[derive(Clone, Debug)]
pub struct ReductionTree {
    pub points: Vec<InfNearPoint>,
    pub comps: Vec<DivisorComp>,
    pub corners: Vec<CornerRec>,
    pub height: usize,
    pub dicritical_events: Vec<(usize, usize)>,
    /// Warning text when a common factor was divided out of the input.
    pub saturation: Option<String>,
    /// The (saturated) input form.
    pub original: OneForm,
    /// Built with the pre-reduction stopping predicate.
    pub pre_reduction: bool,
    /// Classification records of the cime singular points; filled by the
    /// local classification pass.
    pub classifications: BTreeMap<usize, ReducedSingularity>,
}

impl ReductionTree {
    pub fn cime_points(&self) -> impl Iterator<Item = &InfNearPoint> {
        self.points
            .iter()
            .filter(|p| p.status == PointStatus::Reduced && p.nu >= 1)
    }

    pub fn is_dicritical(&self) -> bool {
        !self.dicritical_events.is_empty()
    }

    /// Relative orbit of a point over a component's creating field.
    pub fn rel_orbit(&self, point: usize, comp: usize) -> usize {
        let po = self.points[point].orbit;
        let co = self.comps[comp].orbit;
        debug_assert!(po % co == 0);
        po / co
    }
}

// ---------------------------------------------------------------------------
// elementary blow-up operations
// ---------------------------------------------------------------------------

/// Lowest homogeneous part of ω·(x∂x + y∂y): P = x·a_ν + y·b_ν with
/// ν = min(ord a, ord b). Zero exactly when the blow-up is dicritical.
pub fn tangent_cone(form: &OneForm) -> Poly2 {
    let nu = form.order();
    let a_nu = form.a.homogeneous_part(nu);
    let b_nu = form.b.homogeneous_part(nu);
    a_nu.mul_monomial(1, 0).add(&b_nu.mul_monomial(0, 1))
}

/// Pulls the form back through one blow-up chart and divides by the maximal
/// divisor power; returns the strict form and the division exponent.
pub fn blow_up(form: &OneForm, chart: ChartKind) -> (OneForm, u32) {
    match chart {
        ChartKind::X => {
            let a = form.a.subst_x_chart();
            let b = form.b.subst_x_chart();
            // E*ω = [a + w·b] du + u·b dw  (x = u, y = uw)
            let du = a.add(&b.mul_monomial(0, 1));
            let dw = b.mul_monomial(1, 0);
            let k = du
                .order_x()
                .into_iter()
                .chain(dw.order_x())
                .min()
                .unwrap_or(0);
            (
                OneForm::new(du.div_x_pow(k), dw.div_x_pow(k)),
                k,
            )
        }
        ChartKind::Y => {
            let a = form.a.subst_y_chart();
            let b = form.b.subst_y_chart();
            // E*ω = v·a dt + [t·a + b] dv  (x = tv, y = v)
            let dt = a.mul_monomial(0, 1);
            let dv = a.mul_monomial(1, 0).add(&b);
            let k = dt
                .order_y()
                .into_iter()
                .chain(dv.order_y())
                .min()
                .unwrap_or(0);
            (
                OneForm::new(dt.div_y_pow(k), dv.div_y_pow(k)),
                k,
            )
        }
    }
}

/// One singular (or couple-singular) cluster on a fresh exceptional line.
#[derive(Clone, Debug)]
pub struct DivisorCluster {
    pub chart: ChartKind,
    /// Monic irreducible factor cutting out the cluster in the chart
    /// coordinate along the divisor; for the Y-chart origin this is the
    /// coordinate itself.
    pub factor: Poly1,
    pub orbit: usize,
}

/// Couple-singular clusters on the new divisor from the two strict charts.
/// `divisor_invariant` tells whether the last blow-up was non-dicritical.
pub fn singular_points_on_divisor(
    strict_x: &OneForm,
    strict_y: &OneForm,
    divisor_invariant: bool,
) -> Result<Vec<DivisorCluster>> {
    // X chart covers the whole line except the Y-chart origin.
    let ax0 = strict_x.a.restrict_x0();
    let bx0 = strict_x.b.restrict_x0();
    let locus = if divisor_invariant {
        debug_assert!(bx0.is_zero());
        ax0.clone()
    } else {
        // tangency locus of a non-invariant divisor: zeros of the dw side
        bx0.clone()
    };
    if locus.is_zero() && (divisor_invariant || bx0.is_zero()) && ax0.is_zero() {
        return Err(Error::NonIsolatedOnDivisor);
    }
    if locus.is_zero() {
        return Err(Error::NonIsolatedOnDivisor);
    }
    let mut clusters = Vec::new();
    for (factor, _mult) in factor_univariate(&locus) {
        clusters.push(DivisorCluster {
            chart: ChartKind::X,
            orbit: factor.degree(),
            factor,
        });
    }
    // Y-chart origin: singular iff both strict coefficients vanish there (or,
    // for a non-invariant divisor, the tangency side does).
    let at_origin = |p: &Poly2| p.coeff(0, 0);
    let y_origin_flag = if divisor_invariant {
        at_origin(&strict_y.a).is_zero() && at_origin(&strict_y.b).is_zero()
    } else {
        at_origin(&strict_y.a).is_zero()
    };
    if y_origin_flag {
        let field = Arc::clone(strict_y.field());
        clusters.push(DivisorCluster {
            chart: ChartKind::Y,
            orbit: 1,
            factor: Poly1::from_coeffs(
                &field,
                vec![FieldElem::zero(&field), FieldElem::one(&field)],
            ),
        });
    }
    Ok(clusters)
}

// ---------------------------------------------------------------------------
// the reduction loop
// ---------------------------------------------------------------------------

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum CoupleStatus {
    Regular,
    ReducedSingular,
    NonReduced,
}

fn couple_status(form: &OneForm, branches: &[(usize, Axis)]) -> CoupleStatus {
    let nu = form.order();
    if nu == 0 {
        for &(_, axis) in branches {
            let invariant = form.axis_invariant(axis);
            let transverse = match axis {
                Axis::X => !form.a.coeff(0, 0).is_zero(),
                Axis::Y => !form.b.coeff(0, 0).is_zero(),
            };
            if !invariant && !transverse {
                return CoupleStatus::NonReduced;
            }
        }
        return CoupleStatus::Regular;
    }
    let rc = form.linear_part().ratio_class();
    if rc.is_reduced() && branches.iter().all(|&(_, a)| form.axis_invariant(a)) {
        CoupleStatus::ReducedSingular
    } else {
        CoupleStatus::NonReduced
    }
}

fn pre_reduced(form: &OneForm) -> bool {
    form.order() == 0 || form.linear_part().has_distinct_eigenvalues()
}

/// Saturates the form: divides out a common factor of the coefficients.
/// Returns the saturated form and a warning when something was divided out.
pub fn saturate(form: &OneForm) -> (OneForm, Option<String>) {
    let g = form.a.gcd(&form.b);
    if g.total_degree().unwrap_or(0) == 0 {
        return (form.clone(), None);
    }
    let a = form.a.div_exact(&g).expect("gcd divides");
    let b = form.b.div_exact(&g).expect("gcd divides");
    (
        OneForm::new(a, b),
        Some(format!("divided out common factor ({})", g)),
    )
}

pub fn reduce(form: &OneForm, config: &Config) -> Result<ReductionTree> {
    reduce_with(form, config, false)
}

/// Same loop as [`reduce`] but stopping at points whose linear part has
/// distinct eigenvalues.
pub fn pre_reduce(form: &OneForm, config: &Config) -> Result<ReductionTree> {
    reduce_with(form, config, true)
}

fn reduce_with(form: &OneForm, config: &Config, pre: bool) -> Result<ReductionTree> {
    let (saturated, warning) = saturate(form);
    if saturated.order() == 0 {
        return Err(Error::NotSingular);
    }
    let root = InfNearPoint {
        id: 0,
        height: 0,
        parent: None,
        path: String::new(),
        field: Arc::clone(saturated.field()),
        orbit: 1,
        chart: None,
        nu: saturated.order(),
        form: saturated.clone(),
        branches: Vec::new(),
        proximate_to: Vec::new(),
        status: PointStatus::Reduced,
    };
    let mut tree = ReductionTree {
        points: vec![root],
        comps: Vec::new(),
        corners: Vec::new(),
        height: 0,
        dicritical_events: Vec::new(),
        saturation: warning,
        original: saturated.clone(),
        pre_reduction: pre,
        classifications: BTreeMap::new(),
    };

    let needs_blowup = |t: &ReductionTree, id: usize| -> bool {
        let p = &t.points[id];
        if pre {
            !pre_reduced(&p.form)
        } else {
            couple_status(&p.form, &p.branches) == CoupleStatus::NonReduced
        }
    };

    let mut active: Vec<usize> = if needs_blowup(&tree, 0) { vec![0] } else { vec![] };
    while !active.is_empty() {
        if tree.height >= config.max_height {
            return Err(Error::HeightLimitExceeded(config.max_height));
        }
        let mut next = Vec::new();
        for pid in active {
            let found = blow_up_point(&mut tree, pid, config)?;
            for q in found {
                if needs_blowup(&tree, q) {
                    next.push(q);
                }
            }
        }
        tree.height += 1;
        active = next;
    }

    // Residents: cime singular points per component.
    for p in &tree.points {
        if p.status == PointStatus::Reduced && p.nu >= 1 {
            for &(comp, axis) in &p.branches {
                tree.comps[comp].residents.push((p.id, axis));
            }
            // Occupied corners.
            if p.is_corner() {
                let (c0, c1) = (p.branches[0].0, p.branches[1].0);
                for rec in tree.corners.iter_mut() {
                    if rec.occupied_by.is_none()
                        && ((rec.newer == c0 && rec.older == c1)
                            || (rec.newer == c1 && rec.older == c0))
                        && rec.at_point == p.parent.unwrap()
                    {
                        rec.occupied_by = Some(p.id);
                        break;
                    }
                }
            }
        }
    }
    Ok(tree)
}

/// Blows up one point; returns the ids of the couple-singular points found on
/// the new exceptional line.
fn blow_up_point(tree: &mut ReductionTree, pid: usize, config: &Config) -> Result<Vec<usize>> {
    let (form, branches, height, field, orbit, path) = {
        let p = &tree.points[pid];
        (
            p.form.clone(),
            p.branches.clone(),
            p.height,
            Arc::clone(&p.field),
            p.orbit,
            p.path.clone(),
        )
    };
    tree.points[pid].status = PointStatus::Blown;
    // Blowing a corner separates the two components meeting there.
    if branches.len() == 2 {
        let (c0, c1) = (branches[0].0, branches[1].0);
        let parent = tree.points[pid].parent;
        if let Some(par) = parent {
            if let Some(pos) = tree.corners.iter().position(|r| {
                r.at_point == par
                    && ((r.newer == c0 && r.older == c1) || (r.newer == c1 && r.older == c0))
            }) {
                tree.corners.remove(pos);
            }
        }
    }
    let nu = form.order();
    let dicritical = tangent_cone(&form).is_zero();
    if dicritical {
        tree.dicritical_events.push((pid, height));
        if config.dicritical == DicriticalPolicy::Abort {
            return Err(Error::Dicritical { point: pid, height });
        }
    }
    let (strict_x, kx) = blow_up(&form, ChartKind::X);
    let (strict_y, ky) = blow_up(&form, ChartKind::Y);
    debug_assert_eq!(kx, ky, "division exponents must agree across charts");
    debug_assert_eq!(kx, if dicritical { nu + 1 } else { nu });

    // New component: multiplicities accumulate over the adjacent components.
    let comp_id = tree.comps.len();
    let m_omega = kx as u64
        + branches
            .iter()
            .map(|&(c, _)| tree.comps[c].m_omega)
            .sum::<u64>();
    let m_ideal = if pid == 0 { 1 } else { 0 }
        + branches
            .iter()
            .map(|&(c, _)| tree.comps[c].m_ideal)
            .sum::<u64>();
    tree.comps.push(DivisorComp {
        id: comp_id,
        creator: pid,
        orbit,
        self_int: -1,
        m_omega,
        k_division: kx,
        m_ideal,
        m_sep: None,
        dicritical,
        residents: Vec::new(),
    });
    // Every old component through the point loses it: self-intersection drops
    // by the number of orbit members sitting on one copy.
    for &(c, _) in &branches {
        let drop = (orbit / tree.comps[c].orbit) as i64;
        tree.comps[c].self_int -= drop;
        tree.corners.push(CornerRec {
            newer: comp_id,
            older: c,
            at_point: pid,
            occupied_by: None,
        });
    }

    let clusters = singular_points_on_divisor(&strict_x, &strict_y, !dicritical)?;
    let mut created = Vec::new();
    for cluster in clusters {
        let qid = tree.points.len();
        match cluster.chart {
            ChartKind::X => {
                let deg = cluster.factor.degree();
                let (child_field, root) = if deg == 1 {
                    // monic v + c: root is −c
                    (Arc::clone(&field), cluster.factor.coeff(0).neg())
                } else {
                    let name = format!("g{}", qid);
                    let ext = extend_field(&field, &name, &cluster.factor)?;
                    let root = FieldElem::generator(&ext, ext.levels.len() - 1);
                    (ext, root)
                };
                let local = OneForm::new(
                    strict_x.a.embed(&child_field).shift_y(&root),
                    strict_x.b.embed(&child_field).shift_y(&root),
                );
                // New divisor {u = 0} is the y-axis of (u, w−root).
                let mut qbranches = vec![(comp_id, Axis::Y)];
                // The old x-axis branch {y=0} persists at the w = 0 point.
                if root.is_zero() {
                    if let Some(&(old, _)) =
                        branches.iter().find(|&&(_, a)| a == Axis::X)
                    {
                        qbranches.push((old, Axis::X));
                    }
                }
                push_point(
                    tree,
                    qid,
                    pid,
                    height + 1,
                    format!("{}/X[{}]", path, cluster.factor),
                    child_field,
                    orbit * deg,
                    ChartStep {
                        kind: ChartKind::X,
                        root,
                    },
                    local,
                    qbranches,
                );
            }
            ChartKind::Y => {
                let local = strict_y.clone();
                // New divisor {v = 0} is the x-axis of (t, v).
                let mut qbranches = vec![(comp_id, Axis::X)];
                if let Some(&(old, _)) = branches.iter().find(|&&(_, a)| a == Axis::Y) {
                    qbranches.push((old, Axis::Y));
                }
                push_point(
                    tree,
                    qid,
                    pid,
                    height + 1,
                    format!("{}/Y", path),
                    Arc::clone(&field),
                    orbit,
                    ChartStep {
                        kind: ChartKind::Y,
                        root: FieldElem::zero(&field),
                    },
                    local,
                    qbranches,
                );
            }
        }
        created.push(qid);
    }
    Ok(created)
}

#[allow(clippy::too_many_arguments)]
fn push_point(
    tree: &mut ReductionTree,
    id: usize,
    parent: usize,
    height: usize,
    path: String,
    field: Arc<FieldDescriptor>,
    orbit: usize,
    chart: ChartStep,
    form: OneForm,
    branches: Vec<(usize, Axis)>,
) {
    let proximate_to = branches
        .iter()
        .map(|&(c, _)| tree.comps[c].creator)
        .collect();
    let nu = form.order();
    tree.points.push(InfNearPoint {
        id,
        height,
        parent: Some(parent),
        path,
        field,
        orbit,
        chart: Some(chart),
        nu,
        form,
        branches,
        proximate_to,
        status: PointStatus::Reduced,
    });
}

// ---------------------------------------------------------------------------
// consistency checks and derived quantities
// ---------------------------------------------------------------------------

#[derive(Clone, Debug, Serialize)]
pub struct RecurrenceReport {
    pub ok: bool,
    /// (component id, recurrence value, stored value)
    pub diffs: Vec<(usize, u64, u64)>,
}

/// Recomputes every m_D by the adjacency recurrence from the ν values and
/// compares with the division-exponent accumulation stored in the tree.
pub fn multiplicity_recurrence_check(tree: &ReductionTree) -> RecurrenceReport {
    let mut recomputed: Vec<u64> = vec![0; tree.comps.len()];
    let mut diffs = Vec::new();
    for comp in &tree.comps {
        let creator = &tree.points[comp.creator];
        let nu = creator.nu as u64;
        let sum: u64 = creator
            .branches
            .iter()
            .map(|&(c, _)| recomputed[c])
            .sum();
        recomputed[comp.id] = nu + sum;
        if recomputed[comp.id] != comp.m_omega || comp.k_division as u64 != nu {
            diffs.push((comp.id, recomputed[comp.id], comp.m_omega));
        }
    }
    RecurrenceReport {
        ok: diffs.is_empty(),
        diffs,
    }
}

/// Jet order sufficient for pre-reduction determinacy:
/// σ(v,1) = v+1, σ(v,2) = 2v+1, σ(v,h+2) = σ(v,h+1) + σ(v,h) + v + h.
pub fn determinacy_bound(v: u64, h: u64) -> u64 {
    assert!(v >= 1 && h >= 1);
    if h == 1 {
        return v + 1;
    }
    if h == 2 {
        return 2 * v + 1;
    }
    let mut prev = v + 1;
    let mut cur = 2 * v + 1;
    for step in 1..=(h - 2) {
        // computing σ(v, step+2)
        let next = cur
            .checked_add(prev)
            .and_then(|s| s.checked_add(v))
            .and_then(|s| s.checked_add(step))
            .expect("determinacy bound overflow");
        prev = cur;
        cur = next;
    }
    cur
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::FieldElem;

    fn q() -> Arc<FieldDescriptor> {
        FieldDescriptor::rationals()
    }

    fn mono(c: i64, i: u32, j: u32) -> Poly2 {
        Poly2::monomial(&q(), FieldElem::from_int(&q(), c), i, j)
    }

    fn cusp() -> OneForm {
        // 2y dy − 3x² dx
        OneForm::new(mono(-3, 2, 0), mono(2, 0, 1))
    }

    #[test]
    fn tangent_cone_examples() {
        // radial: dicritical
        let radial = OneForm::new(mono(-1, 0, 1), mono(1, 1, 0));
        assert!(tangent_cone(&radial).is_zero());
        // cusp: ν = 1, P = 2y²
        assert_eq!(tangent_cone(&cusp()), mono(2, 0, 2));
        // d(xy): P = 2xy
        let dxy = OneForm::new(mono(1, 0, 1), mono(1, 1, 0));
        assert_eq!(tangent_cone(&dxy), mono(2, 1, 1));
    }

    #[test]
    fn blow_up_examples() {
        // cusp X-chart: strict = (2w²−3u) du + 2uw dw, k = 1
        let (strict, k) = blow_up(&cusp(), ChartKind::X);
        assert_eq!(k, 1);
        let expect_a = mono(2, 0, 2).add(&mono(-3, 1, 0));
        assert_eq!(strict.a, expect_a);
        assert_eq!(strict.b, mono(2, 1, 1));
        // d(xy) X-chart: 2w du + u dw, k = 1
        let dxy = OneForm::new(mono(1, 0, 1), mono(1, 1, 0));
        let (strict, k) = blow_up(&dxy, ChartKind::X);
        assert_eq!(k, 1);
        assert_eq!(strict.a, mono(2, 0, 1));
        assert_eq!(strict.b, mono(1, 1, 0));
        // radial X-chart: strict = dw, k = 2 = ν + 1
        let radial = OneForm::new(mono(-1, 0, 1), mono(1, 1, 0));
        let (strict, k) = blow_up(&radial, ChartKind::X);
        assert_eq!(k, 2);
        assert!(strict.a.is_zero());
        assert_eq!(strict.b, mono(1, 0, 0));
    }

    #[test]
    fn reduce_cusp_golden() {
        let tree = reduce(&cusp(), &Config::default()).unwrap();
        assert_eq!(tree.height, 3);
        assert_eq!(tree.comps.len(), 3);
        let mut es: Vec<i64> = tree.comps.iter().map(|c| c.self_int).collect();
        es.sort();
        assert_eq!(es, vec![-3, -2, -1]);
        let ms: Vec<u64> = tree.comps.iter().map(|c| c.m_omega).collect();
        assert_eq!(ms, vec![1, 2, 5]);
        // ν sequence of the blown points
        let nus: Vec<u32> = tree
            .points
            .iter()
            .filter(|p| p.status == PointStatus::Blown)
            .map(|p| p.nu)
            .collect();
        assert_eq!(nus, vec![1, 1, 2]);
        // three cime singular points, all on the last component
        let cime: Vec<&InfNearPoint> = tree.cime_points().collect();
        assert_eq!(cime.len(), 3);
        assert!(cime
            .iter()
            .all(|p| p.branches.iter().any(|&(c, _)| c == 2)));
        // exactly one non-corner
        assert_eq!(cime.iter().filter(|p| !p.is_corner()).count(), 1);
        let rep = multiplicity_recurrence_check(&tree);
        assert!(rep.ok, "{:?}", rep.diffs);
    }

    #[test]
    fn reduce_terminal_cases() {
        // d(xy) is already reduced: height 0
        let dxy = OneForm::new(mono(1, 0, 1), mono(1, 1, 0));
        let tree = reduce(&dxy, &Config::default()).unwrap();
        assert_eq!(tree.height, 0);
        assert!(tree.comps.is_empty());
        // radial: dicritical abort
        let radial = OneForm::new(mono(-1, 0, 1), mono(1, 1, 0));
        match reduce(&radial, &Config::default()) {
            Err(Error::Dicritical { .. }) => {}
            other => panic!("expected Dicritical, got {:?}", other.map(|_| ())),
        }
    }

    #[test]
    fn already_reduced_saddles() {
        // d(x²−y²) = 2x dx − 2y dy has eigenvalue ratio −1: height 0.
        let form = OneForm::new(mono(2, 1, 0), mono(-2, 0, 1));
        let tree = reduce(&form, &Config::default()).unwrap();
        assert_eq!(tree.height, 0);
        assert!(tree.comps.is_empty());
    }

    #[test]
    fn reduce_triple_point() {
        // d(xy(x+y)) = (2xy + y²) dx + (x² + 2xy) dy: an ordinary triple
        // point; one blow-up, a single component with three free saddles.
        let a = mono(2, 1, 1).add(&mono(1, 0, 2));
        let b = mono(1, 2, 0).add(&mono(2, 1, 1));
        let tree = reduce(&OneForm::new(a, b), &Config::default()).unwrap();
        assert_eq!(tree.height, 1);
        assert_eq!(tree.comps.len(), 1);
        assert_eq!(tree.comps[0].self_int, -1);
        assert_eq!(tree.comps[0].m_omega, 2);
        let cime: Vec<_> = tree.cime_points().collect();
        assert_eq!(cime.len(), 3);
        assert!(cime.iter().all(|p| !p.is_corner()));
    }

    #[test]
    fn orbit_extension() {
        // d(y³ − 2x²y): tangent cone 3y(y² − 2x²); the two irrational
        // directions form one orbit of size 2 over Q(√2).
        let a = mono(-4, 1, 1);
        let b = mono(3, 0, 2).add(&mono(-2, 2, 0));
        let tree = reduce(&OneForm::new(a, b), &Config::default()).unwrap();
        assert_eq!(tree.height, 1);
        let mut orbits: Vec<usize> = tree.cime_points().map(|p| p.orbit).collect();
        orbits.sort();
        assert_eq!(orbits, vec![1, 2]);
        let big = tree.cime_points().find(|p| p.orbit == 2).unwrap();
        assert_eq!(big.field.dim(), 2);
        assert_eq!(tree.comps[0].self_int, -1);
    }

    #[test]
    fn pre_reduce_prefix() {
        // node eigenvalues (1, 2): pre-reduced at height 0, but not reduced
        let node = OneForm::new(mono(2, 0, 1), mono(-1, 1, 0));
        let pre = pre_reduce(&node, &Config::default()).unwrap();
        assert_eq!(pre.height, 0);
        let full = reduce(
            &node,
            &Config {
                dicritical: DicriticalPolicy::Mark,
                ..Config::default()
            },
        )
        .unwrap();
        assert!(full.height > 0);
    }

    #[test]
    fn determinacy_values() {
        assert_eq!(determinacy_bound(2, 1), 3);
        assert_eq!(determinacy_bound(2, 2), 5);
        assert_eq!(determinacy_bound(2, 3), 11);
        for v in 1..=10 {
            for h in 1..=10 {
                let lhs = determinacy_bound(v, h + 2)
                    - determinacy_bound(v, h + 1)
                    - determinacy_bound(v, h);
                assert_eq!(lhs, v + h);
            }
        }
    }
}
