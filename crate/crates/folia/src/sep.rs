//! Combinatorics of the separatrix curve: branch multiplicities through the
//! proximity relation, total-transform multiplicities of the separatrix
//! equation, and the derived quantities feeding the second-kind cross-checks.

use std::collections::BTreeMap;

use serde::Serialize;

use crate::localclass::{Alignment, Kind};
use crate::reduction::ReductionTree;

/// One separatrix branch: ends at a cime singular point, passes through that
/// point's whole ancestry.
#[derive(Clone, Debug, Serialize)]
pub struct SepBranch {
    /// Cime point carrying the branch transversely to the divisor.
    pub cime: usize,
    /// Absolute orbit size of the branch.
    pub orbit: usize,
    /// Multiplicity of the branch at each point of its ancestry chain
    /// (point id → ν) for one orbit member.
    pub nu_at: BTreeMap<usize, u64>,
    /// Flagged when the point is a tangent saddle-node, whose weak curve
    /// coincides with the divisor: the transverse branch is the strong
    /// variety.
    pub tangent_saddle_node: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct SeparatrixModel {
    pub branches: Vec<SepBranch>,
    /// Multiplicity of the full separatrix curve at each infinitely-near
    /// point (summed over branches and their orbit members through the
    /// representative point).
    pub nu_sep: BTreeMap<usize, u64>,
    /// Pullback weight m_D(f̂) per divisor component.
    pub m_sep: Vec<u64>,
    /// ν₀ of the separatrix equation.
    pub nu0_sep: u64,
}

impl SeparatrixModel {
    pub fn nu0_df(&self) -> u64 {
        self.nu0_sep.saturating_sub(1)
    }

    pub fn m_df(&self) -> Vec<u64> {
        self.m_sep.iter().map(|m| m.saturating_sub(1)).collect()
    }
}

/// Enriques proximity pass: every non-corner cime singularity carries exactly
/// one separatrix branch transverse to the divisor; its multiplicity at an
/// ancestor c is the sum of its multiplicities at the chain points proximate
/// to c, seeded with 1 at the cime point.
pub fn branch_multiplicities(tree: &ReductionTree) -> Vec<SepBranch> {
    let mut out = Vec::new();
    for p in tree.cime_points() {
        if p.is_corner() {
            continue;
        }
        if p.branches.is_empty() {
            // Height-0 reduced point: no divisor; both invariant curves of
            // the normal form are separatrices.
            for _ in 0..2 {
                out.push(SepBranch {
                    cime: p.id,
                    orbit: p.orbit,
                    nu_at: BTreeMap::from([(p.id, 1)]),
                    tangent_saddle_node: false,
                });
            }
            continue;
        }
        let tangent_sn = tree
            .classifications
            .get(&p.id)
            .map(|r| {
                r.kind.is_saddle_node()
                    && r.alignment.values().any(|a| *a == Alignment::Tangent)
            })
            .unwrap_or(false);
        // Ancestry chain, cime point first.
        let mut chain = vec![p.id];
        let mut cur = p.parent;
        while let Some(c) = cur {
            chain.push(c);
            cur = tree.points[c].parent;
        }
        let mut nu_at: BTreeMap<usize, u64> = BTreeMap::new();
        nu_at.insert(p.id, 1);
        for (idx, &c) in chain.iter().enumerate().skip(1) {
            // ν_c(B) = Σ over chain points q above c proximate to c of ν_q(B)
            let mut acc = 0u64;
            for &qid in &chain[..idx] {
                if tree.points[qid].proximate_to.contains(&c) {
                    acc += nu_at[&qid];
                }
            }
            nu_at.insert(c, acc);
        }
        out.push(SepBranch {
            cime: p.id,
            orbit: p.orbit,
            nu_at,
            tangent_saddle_node: tangent_sn,
        });
    }
    out
}

/// Assembles the separatrix model: per-point total multiplicities and the
/// divisor weights of the separatrix equation by the adjacency recurrence.
///
/// At a point c, each branch through c contributes once per orbit member of
/// its cime point lying over c's copy, i.e. with weight orbit(B)/orbit(c).
pub fn separatrix_model(tree: &ReductionTree) -> SeparatrixModel {
    let branches = branch_multiplicities(tree);
    let mut nu_sep: BTreeMap<usize, u64> = BTreeMap::new();
    for p in &tree.points {
        let mut acc = 0u64;
        for b in &branches {
            if let Some(&nu) = b.nu_at.get(&p.id) {
                let rel = (b.orbit / tree.points[p.id].orbit) as u64;
                acc += nu * rel;
            }
        }
        if acc > 0 {
            nu_sep.insert(p.id, acc);
        }
    }
    // Curve analogue of the multiplicity recurrence: at a new component,
    // m = ν_c(strict Sep at c) + Σ m over components through c. The strict
    // multiplicity at c counts branches through c; at *blown* points the
    // chain multiplicities already account for it. Height-0 cime points of
    // branches contribute their ν at the blown ancestors only.
    let mut m_sep = vec![0u64; tree.comps.len()];
    for comp in &tree.comps {
        let creator = &tree.points[comp.creator];
        let strict_nu = nu_sep.get(&creator.id).copied().unwrap_or(0);
        let adj: u64 = creator.branches.iter().map(|&(c, _)| m_sep[c]).sum();
        m_sep[comp.id] = strict_nu + adj;
    }
    let nu0_sep = nu_sep.get(&0).copied().unwrap_or(0);
    SeparatrixModel {
        branches,
        nu_sep,
        m_sep,
        nu0_sep,
    }
}

/// Sanity restriction from the design ledger: at a *transverse* saddle-node
/// whose strong variety is the divisor, the weak formal curve is the counted
/// branch; classify records let callers verify the inventory.
pub fn branch_inventory_note(tree: &ReductionTree) -> Vec<String> {
    let mut notes = Vec::new();
    for p in tree.cime_points() {
        if let Some(rec) = tree.classifications.get(&p.id) {
            if let Kind::SaddleNode { .. } = rec.kind {
                if rec.alignment.values().any(|a| *a == Alignment::Tangent) && !p.is_corner() {
                    notes.push(format!(
                        "point {}: tangent saddle-node; the transverse branch is the strong variety",
                        p.id
                    ));
                }
            }
        }
    }
    notes
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::{FieldDescriptor, FieldElem};
    use crate::poly2::{OneForm, Poly2};
    use crate::reduction::{reduce, Config};
    use std::sync::Arc;

    fn q() -> Arc<FieldDescriptor> {
        FieldDescriptor::rationals()
    }

    fn mono(c: i64, i: u32, j: u32) -> Poly2 {
        Poly2::monomial(&q(), FieldElem::from_int(&q(), c), i, j)
    }

    #[test]
    fn cusp_branch_and_weights() {
        let cusp = OneForm::new(mono(-3, 2, 0), mono(2, 0, 1));
        let tree = reduce(&cusp, &Config::default()).unwrap();
        let model = separatrix_model(&tree);
        assert_eq!(model.branches.len(), 1);
        let b = &model.branches[0];
        // multiplicities (2, 1, 1) at the three blown points, 1 at the cime
        assert_eq!(b.nu_at[&0], 2);
        let blown: Vec<u64> = tree
            .points
            .iter()
            .filter(|p| p.status == crate::reduction::PointStatus::Blown)
            .map(|p| b.nu_at.get(&p.id).copied().unwrap_or(0))
            .collect();
        assert_eq!(blown, vec![2, 1, 1]);
        // m(f̂) = (2, 3, 6), so m(df̂) = (1, 2, 5) = m_ω
        assert_eq!(model.m_sep, vec![2, 3, 6]);
        assert_eq!(model.m_df(), vec![1, 2, 5]);
        assert_eq!(model.nu0_sep, 2);
        assert_eq!(model.nu0_df(), 1);
    }

    #[test]
    fn height_zero_two_separatrices() {
        // d(x²−y²): reduced saddle, two smooth separatrices, no divisors
        let form = OneForm::new(mono(2, 1, 0), mono(-2, 0, 1));
        let tree = reduce(&form, &Config::default()).unwrap();
        let model = separatrix_model(&tree);
        assert_eq!(tree.height, 0);
        assert!(model.m_sep.is_empty());
        assert_eq!(model.branches.len(), 2);
        assert_eq!(model.nu0_sep, 2);
        assert_eq!(model.nu0_df(), 1);
    }

    #[test]
    fn triple_point_weights() {
        let a = mono(2, 1, 1).add(&mono(1, 0, 2));
        let b = mono(1, 2, 0).add(&mono(2, 1, 1));
        let tree = reduce(&OneForm::new(a, b), &Config::default()).unwrap();
        let model = separatrix_model(&tree);
        assert_eq!(model.branches.len(), 3);
        assert_eq!(model.nu0_sep, 3);
        // f = xy(x+y): pullback u³·(w(1+w)·…) → m(f̂) = 3, m(df̂) = 2 = m_ω
        assert_eq!(model.m_sep, vec![3]);
        assert_eq!(model.m_df(), vec![2]);
        assert_eq!(tree.comps[0].m_omega, 2);
    }
}
