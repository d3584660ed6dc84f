//! Assembled invariant reports and the JSON mirrors of trees and nerves.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::annot::Annotations;
use crate::dual::unfold;
use crate::error::Result;
use crate::invariants::{
    camacho_sad_sums, delta_hat, epsilon_status, formula46_check, is_second_kind,
    is_semi_hyperbolic, milnor_of_tree, second_kind_crosscheck, EpsilonStatus,
};
use crate::localclass::{classify_tree, Alignment, CsIndex, FirstIntegral, Kind, Periodicity};
use crate::milnor::Milnor;
use crate::nerve::{build_nerve, chain_count, is_tff, Mode, Nerve, TffVerdict};
use crate::poly2::Axis;
use crate::reduction::{multiplicity_recurrence_check, Config, PointStatus, ReductionTree};
use crate::sep::separatrix_model;

// ---------------------------------------------------------------------------
// tree JSON mirror
// ---------------------------------------------------------------------------

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SingularityJson {
    pub kind: String,
    pub corner: bool,
    pub cs_index: BTreeMap<String, String>,
    pub alignment: BTreeMap<String, String>,
    pub mu_along: BTreeMap<String, usize>,
    pub first_integral: String,
    pub weak_holonomy_periodic: String,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PointJson {
    pub id: String,
    pub height: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub parent: Option<String>,
    pub path: String,
    pub orbit: usize,
    pub field_degree: usize,
    pub nu: u32,
    pub status: String,
    pub branches: Vec<(String, String)>,
    pub local_form: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub classification: Option<SingularityJson>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DivisorJson {
    pub id: String,
    pub creator: String,
    pub orbit: usize,
    pub e: i64,
    pub m_omega: u64,
    pub m_ideal: u64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub m_f: Option<u64>,
    pub k_division: u32,
    pub dicritical: bool,
    pub residents: Vec<(String, String)>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BranchJson {
    pub cime: String,
    pub orbit: usize,
    pub nu_at: BTreeMap<String, u64>,
    pub tangent_saddle_node: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TreeJson {
    pub height: usize,
    pub points: Vec<PointJson>,
    pub divisors: Vec<DivisorJson>,
    pub proximity: Vec<(String, Vec<String>)>,
    pub charts: Vec<(String, String)>,
    #[serde(skip_serializing_if = "Vec::is_empty", default)]
    pub branches: Vec<BranchJson>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub saturation: Option<String>,
    pub dicritical_events: Vec<(String, usize)>,
    pub dual_tree_hash: String,
}

fn axis_name(a: Axis) -> String {
    match a {
        Axis::X => "x-axis".into(),
        Axis::Y => "y-axis".into(),
    }
}

fn pid(id: usize) -> String {
    format!("p{}", id)
}

fn did(id: usize) -> String {
    format!("D{}", id + 1)
}

pub fn tree_to_json(tree: &ReductionTree, with_sep: bool) -> TreeJson {
    let sep = if with_sep {
        Some(separatrix_model(tree))
    } else {
        None
    };
    let classification_json = |id: usize| -> Option<SingularityJson> {
        tree.classifications.get(&id).map(|rec| SingularityJson {
            kind: match &rec.kind {
                Kind::NonResonant { witness } => format!(
                    "non-resonant{}",
                    witness
                        .as_ref()
                        .map(|s| format!(" (s={})", s))
                        .unwrap_or_default()
                ),
                Kind::ResonantProbed { p, q, depth } => {
                    format!("resonant {}:{} probed to depth {}", p, q, depth)
                }
                Kind::ResonantObstructed { p, q, k, residue } => {
                    format!("resonant {}:{} obstructed at k={} (residue {})", p, q, k, residue)
                }
                Kind::SaddleNode { weak_order } => {
                    format!("saddle-node (weak order {})", weak_order)
                }
            },
            corner: rec.corner,
            cs_index: rec
                .cs_index
                .iter()
                .map(|(&a, v)| {
                    (
                        axis_name(a),
                        match v {
                            CsIndex::Exact(e) => format!("{}", e),
                            CsIndex::Unknown => "unknown".into(),
                        },
                    )
                })
                .collect(),
            alignment: rec
                .alignment
                .iter()
                .map(|(&a, v)| {
                    (
                        axis_name(a),
                        match v {
                            Alignment::Transverse => "transverse".into(),
                            Alignment::Tangent => "tangent".into(),
                            Alignment::NotApplicable => "n/a".into(),
                        },
                    )
                })
                .collect(),
            mu_along: rec
                .mu_along
                .iter()
                .map(|(&a, &m)| (axis_name(a), m))
                .collect(),
            first_integral: match &rec.first_integral {
                (FirstIntegral::Yes { p, q }, prov) => {
                    format!("yes ({}:{}) [{:?}]", p, q, prov)
                }
                (FirstIntegral::No, prov) => format!("no [{:?}]", prov),
                (FirstIntegral::UnknownAtDepth(k), _) => format!("unknown at depth {}", k),
            },
            weak_holonomy_periodic: match rec.weak_periodic {
                (Periodicity::Yes, prov) => format!("yes [{:?}]", prov),
                (Periodicity::No, prov) => format!("no [{:?}]", prov),
                (Periodicity::Unknown, _) => "unknown".into(),
            },
        })
    };
    TreeJson {
        height: tree.height,
        points: tree
            .points
            .iter()
            .map(|p| PointJson {
                id: pid(p.id),
                height: p.height,
                parent: p.parent.map(pid),
                path: p.path.clone(),
                orbit: p.orbit,
                field_degree: p.field.dim(),
                nu: p.nu,
                status: match p.status {
                    PointStatus::Blown => "blown".into(),
                    PointStatus::Reduced if p.nu >= 1 => "reduced".into(),
                    PointStatus::Reduced => "regular".into(),
                },
                branches: p
                    .branches
                    .iter()
                    .map(|&(c, a)| (did(c), axis_name(a)))
                    .collect(),
                local_form: format!("{:?}", p.form),
                classification: classification_json(p.id),
            })
            .collect(),
        divisors: tree
            .comps
            .iter()
            .map(|c| DivisorJson {
                id: did(c.id),
                creator: pid(c.creator),
                orbit: c.orbit,
                e: c.self_int,
                m_omega: c.m_omega,
                m_ideal: c.m_ideal,
                m_f: sep.as_ref().map(|s| s.m_sep[c.id]),
                k_division: c.k_division,
                dicritical: c.dicritical,
                residents: c
                    .residents
                    .iter()
                    .map(|&(p, a)| (pid(p), axis_name(a)))
                    .collect(),
            })
            .collect(),
        proximity: tree
            .points
            .iter()
            .filter(|p| !p.proximate_to.is_empty())
            .map(|p| (pid(p.id), p.proximate_to.iter().map(|&t| pid(t)).collect()))
            .collect(),
        charts: tree
            .points
            .iter()
            .filter_map(|p| {
                p.chart.as_ref().map(|c| {
                    (
                        pid(p.id),
                        match c.kind {
                            crate::reduction::ChartKind::X => {
                                format!("x = u, y = u(w + {})", c.root)
                            }
                            crate::reduction::ChartKind::Y => "x = t v, y = v".to_string(),
                        },
                    )
                })
            })
            .collect(),
        branches: sep
            .map(|s| {
                s.branches
                    .iter()
                    .map(|b| BranchJson {
                        cime: pid(b.cime),
                        orbit: b.orbit,
                        nu_at: b.nu_at.iter().map(|(&p, &n)| (pid(p), n)).collect(),
                        tangent_saddle_node: b.tangent_saddle_node,
                    })
                    .collect()
            })
            .unwrap_or_default(),
        saturation: tree.saturation.clone(),
        dicritical_events: tree
            .dicritical_events
            .iter()
            .map(|&(p, h)| (pid(p), h))
            .collect(),
        dual_tree_hash: format!("{:016x}", crate::dual::dual_tree_hash(&unfold(tree))),
    }
}

// ---------------------------------------------------------------------------
// invariant report
// ---------------------------------------------------------------------------

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BetaHatJson {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub lo: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub hi: Option<u64>,
    pub epsilon_status: String,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ChecksJson {
    pub recurrence_ok: bool,
    pub formula46_lhs: u64,
    pub formula46_rhs: u64,
    pub formula46_ok: bool,
    pub cs_sums_ok: bool,
    pub crosscheck_ok: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct InvariantReport {
    pub nu0: u64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub mu0: Option<usize>,
    pub m_omega: BTreeMap<String, u64>,
    pub m_ideal: BTreeMap<String, u64>,
    pub dicritical: bool,
    pub second_kind: bool,
    pub second_kind_witnesses: Vec<String>,
    pub semi_hyperbolic: bool,
    pub delta_hat: u64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub sigma_hat: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub tau_hat: Option<u64>,
    pub beta_hat: BetaHatJson,
    pub tff: String,
    pub chain_count: usize,
    pub checks: ChecksJson,
    pub provenance: Vec<String>,
}

/// Runs the full invariant pipeline on a classified tree.
pub fn invariant_report(
    tree: &ReductionTree,
    mode: Mode,
    annotations: &Annotations,
    config: &Config,
) -> Result<(InvariantReport, Option<Nerve>)> {
    let sep = separatrix_model(tree);
    let sk = is_second_kind(tree);
    let rec = multiplicity_recurrence_check(tree);
    let f46 = formula46_check(tree);
    let cs = camacho_sad_sums(tree);
    let cross = second_kind_crosscheck(tree, &sep);
    let dh = delta_hat(tree);
    let eps = epsilon_status(tree, &sep, config);
    let (nerve, tff, sigma, tau) = if tree.is_dicritical() {
        (None, "refused: dicritical tree".to_string(), None, None)
    } else {
        let nerve = build_nerve(tree, mode, annotations)?;
        let verdict = is_tff(&nerve);
        let (s, t, text) = match &verdict {
            TffVerdict::Finite { sigma_hat, tau_hat } => (
                Some(*sigma_hat),
                Some(*tau_hat),
                "finite".to_string(),
            ),
            TffVerdict::Infinite { witness } => (
                None,
                None,
                format!(
                    "infinite (witness type {} through {:?})",
                    witness.kind, witness.vertices
                ),
            ),
            TffVerdict::NotApplicable { reason } => (None, None, format!("n/a: {}", reason)),
            TffVerdict::Unknown { missing } => (None, None, format!("unknown: {}", missing)),
        };
        (Some(nerve), text, s, t)
    };
    let beta = match (sigma, eps) {
        (Some(tau), EpsilonStatus::Zero) => BetaHatJson {
            lo: Some(dh + tau),
            hi: Some(dh + tau),
            epsilon_status: "0 (certified)".into(),
        },
        (Some(tau), EpsilonStatus::One) => BetaHatJson {
            lo: Some((dh + tau).saturating_sub(1)),
            hi: Some((dh + tau).saturating_sub(1)),
            epsilon_status: "1 (certified)".into(),
        },
        (Some(tau), EpsilonStatus::Unknown) => BetaHatJson {
            lo: Some((dh + tau).saturating_sub(1)),
            hi: Some(dh + tau),
            epsilon_status: "unknown".into(),
        },
        (None, e) => BetaHatJson {
            lo: None,
            hi: None,
            epsilon_status: format!("{:?}", e).to_lowercase(),
        },
    };
    let chain = if tree.height > 0 {
        chain_count(&unfold(tree))
    } else {
        0
    };
    let mut provenance = Vec::new();
    for (id, r) in &tree.classifications {
        provenance.push(format!(
            "p{}.first_integral: {:?}",
            id, r.first_integral.1
        ));
    }
    if let Some(n) = &nerve {
        for v in &n.vertices {
            if v.color.value.is_some() {
                provenance.push(format!("{}.color: {:?}", v.backref, v.color.provenance));
            }
        }
    }
    let report = InvariantReport {
        nu0: tree.original.order() as u64,
        mu0: match milnor_of_tree(tree, config.milnor_cap) {
            Milnor::Finite(m) => Some(m),
            _ => None,
        },
        m_omega: tree
            .comps
            .iter()
            .map(|c| (did(c.id), c.m_omega))
            .collect(),
        m_ideal: tree
            .comps
            .iter()
            .map(|c| (did(c.id), c.m_ideal))
            .collect(),
        dicritical: tree.is_dicritical(),
        second_kind: sk.second_kind,
        second_kind_witnesses: sk.witnesses.iter().map(|&w| pid(w)).collect(),
        semi_hyperbolic: is_semi_hyperbolic(tree),
        delta_hat: dh,
        sigma_hat: sigma,
        tau_hat: tau,
        beta_hat: beta,
        tff,
        chain_count: chain,
        checks: ChecksJson {
            recurrence_ok: rec.ok,
            formula46_lhs: f46.lhs,
            formula46_rhs: f46.rhs,
            formula46_ok: f46.ok,
            cs_sums_ok: cs.ok,
            crosscheck_ok: cross.ok,
        },
        provenance,
    };
    Ok((report, nerve))
}

/// Classifies (if needed) and reports; the usual pipeline entry.
pub fn full_pipeline(
    form: &crate::poly2::OneForm,
    mode: Mode,
    annotations: &Annotations,
    config: &Config,
) -> Result<(ReductionTree, InvariantReport, Option<Nerve>)> {
    let mut tree = crate::reduction::reduce(form, config)?;
    classify_tree(&mut tree, config)?;
    let (report, nerve) = invariant_report(&tree, mode, annotations, config)?;
    Ok((tree, report, nerve))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parse::parse_oneform;

    #[test]
    fn cusp_report_round_trip() {
        let form = parse_oneform("2y dy - 3x^2 dx").unwrap();
        let cfg = Config::default();
        let (tree, report, _nerve) = full_pipeline(
            &form,
            Mode::NonDegenerate,
            &Annotations::empty(),
            &cfg,
        )
        .unwrap();
        assert_eq!(report.nu0, 1);
        assert_eq!(report.mu0, Some(2));
        assert_eq!(report.delta_hat, 0);
        assert!(report.second_kind);
        assert!(report.semi_hyperbolic);
        assert_eq!(report.sigma_hat, Some(0));
        assert!(report.checks.recurrence_ok);
        assert!(report.checks.formula46_ok);
        assert!(report.checks.cs_sums_ok);
        assert!(report.checks.crosscheck_ok);
        // JSON round-trips exactly
        let text = serde_json::to_string_pretty(&report).unwrap();
        let back: InvariantReport = serde_json::from_str(&text).unwrap();
        assert_eq!(report, back);
        let tj = tree_to_json(&tree, true);
        let text = serde_json::to_string_pretty(&tj).unwrap();
        let back: TreeJson = serde_json::from_str(&text).unwrap();
        assert_eq!(tj, back);
    }
}
