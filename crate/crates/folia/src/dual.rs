//! The unfolded complex-analytic picture of a reduction tree and its dual
//! graph: Galois orbits are expanded into conjugate copies so that valences,
//! chains, arrow counts and canonical hashes are the true ones.

use std::collections::BTreeMap;

use crate::poly2::Axis;
use crate::reduction::{PointStatus, ReductionTree};

/// One conjugate copy of a divisor component.
#[derive(Clone, Debug)]
pub struct CompCopy {
    pub rep: usize,
    pub copy: usize,
    pub e: i64,
    pub m_omega: u64,
    pub m_ideal: u64,
    pub dicritical: bool,
    /// Free (non-corner) cime singular point copies on this copy.
    pub arrows: Vec<usize>,
}

/// One conjugate copy of a cime singular point.
#[derive(Clone, Debug)]
pub struct PointCopy {
    pub rep: usize,
    pub copy: usize,
    /// Component copies through the point, with the axis realizing each.
    pub on: Vec<(usize, Axis)>,
}

/// Intersection of two component copies; `point` is the occupying singular
/// point copy when the corner is singular.
#[derive(Clone, Debug)]
pub struct EdgeCopy {
    pub comps: (usize, usize),
    pub point: Option<usize>,
}

#[derive(Clone, Debug, Default)]
pub struct CTree {
    pub comps: Vec<CompCopy>,
    pub points: Vec<PointCopy>,
    pub edges: Vec<EdgeCopy>,
}

impl CTree {
    /// Valence of a component copy in the dual graph: edges plus arrows.
    pub fn valence(&self, comp_copy: usize) -> usize {
        let e = self
            .edges
            .iter()
            .filter(|e| e.comps.0 == comp_copy || e.comps.1 == comp_copy)
            .count();
        e + self.comps[comp_copy].arrows.len()
    }

    pub fn copies_of_comp(&self, rep: usize) -> Vec<usize> {
        self.comps
            .iter()
            .enumerate()
            .filter(|(_, c)| c.rep == rep)
            .map(|(i, _)| i)
            .collect()
    }
}

/// Expands the Galois orbits of a completed tree into the full complex
/// picture. Copies of a point biject with copies of its parent times the
/// relative factor degree; a component's copies biject with its creator's.
pub fn unfold(tree: &ReductionTree) -> CTree {
    let mut ct = CTree::default();
    // For every representative point: the flat indices of its copies and,
    // per copy, the component copy carrying each branch.
    struct Copies {
        ids: Vec<usize>,
        branch_of: Vec<BTreeMap<usize, usize>>,
    }
    let mut pcopies: Vec<Copies> = Vec::with_capacity(tree.points.len());
    // comp rep -> copy ids (indexed like the creator's copies)
    let mut ccopies: Vec<Vec<usize>> = vec![Vec::new(); tree.comps.len()];
    let comp_of_creator: BTreeMap<usize, usize> = tree
        .comps
        .iter()
        .map(|c| (c.creator, c.id))
        .collect();

    for p in &tree.points {
        let (parent_ids, parent_branches): (Vec<usize>, Vec<BTreeMap<usize, usize>>) =
            match p.parent {
                None => (vec![usize::MAX], vec![BTreeMap::new()]),
                Some(par) => {
                    let c = &pcopies[par];
                    (c.ids.clone(), c.branch_of.clone())
                }
            };
        let rel = match p.parent {
            None => 1,
            Some(par) => p.orbit / tree.points[par].orbit,
        };
        let mut ids = Vec::new();
        let mut branch_of = Vec::new();
        for (pi, _pid) in parent_ids.iter().enumerate() {
            for _conj in 0..rel {
                let mut map = BTreeMap::new();
                for &(comp, _axis) in &p.branches {
                    let cc = if tree.comps[comp].creator == p.parent.unwrap_or(usize::MAX) {
                        // the fresh exceptional line: its copies are indexed
                        // by the parent's copies
                        ccopies[comp][pi]
                    } else {
                        // an older component: the copy the parent lies on
                        parent_branches[pi][&comp]
                    };
                    map.insert(comp, cc);
                }
                let copy_idx = ids.len();
                if p.status == PointStatus::Reduced && p.nu >= 1 {
                    let flat = ct.points.len();
                    ct.points.push(PointCopy {
                        rep: p.id,
                        copy: copy_idx,
                        on: p
                            .branches
                            .iter()
                            .map(|&(comp, axis)| (map[&comp], axis))
                            .collect(),
                    });
                    ids.push(flat);
                } else {
                    ids.push(usize::MAX);
                }
                branch_of.push(map);
            }
        }
        // a blown point creates its component's copies, one per point copy
        if let Some(&comp) = comp_of_creator.get(&p.id) {
            for copy in 0..branch_of.len() {
                let flat = ct.comps.len();
                ct.comps.push(CompCopy {
                    rep: comp,
                    copy,
                    e: tree.comps[comp].self_int,
                    m_omega: tree.comps[comp].m_omega,
                    m_ideal: tree.comps[comp].m_ideal,
                    dicritical: tree.comps[comp].dicritical,
                    arrows: Vec::new(),
                });
                ccopies[comp].push(flat);
            }
        }
        pcopies.push(Copies { ids, branch_of });
    }

    // arrows: free cime point copies
    for pc_idx in 0..ct.points.len() {
        if ct.points[pc_idx].on.len() == 1 {
            let comp_copy = ct.points[pc_idx].on[0].0;
            ct.comps[comp_copy].arrows.push(pc_idx);
        }
    }
    // edges: corner records expanded over the copies of the blown point
    for rec in &tree.corners {
        let at = &pcopies[rec.at_point];
        for (pi, _) in at.ids.iter().enumerate() {
            let newer_cc = ccopies[rec.newer][pi];
            let older_cc = at.branch_of[pi][&rec.older];
            let point = rec.occupied_by.and_then(|q| {
                // corner points have relative degree 1; copies align with
                // the blown point's copies
                let qc = &pcopies[q];
                qc.ids.get(pi).copied().filter(|&x| x != usize::MAX)
            });
            ct.edges.push(EdgeCopy {
                comps: (newer_cc, older_cc),
                point,
            });
        }
    }
    ct
}

// ---------------------------------------------------------------------------
// canonical tree hashing
// ---------------------------------------------------------------------------

fn fnv64(s: &str) -> u64 {
    let mut h: u64 = 0xcbf29ce484222325;
    for b in s.as_bytes() {
        h ^= *b as u64;
        h = h.wrapping_mul(0x100000001b3);
    }
    h
}

/// Canonical form of a labeled unrooted tree: minimum over center rootings of
/// the AHU encoding with sorted child encodings.
pub fn canonical_tree_encoding(labels: &[String], edges: &[(usize, usize)]) -> String {
    let n = labels.len();
    if n == 0 {
        return "()".to_string();
    }
    let mut adj = vec![Vec::new(); n];
    for &(u, v) in edges {
        adj[u].push(v);
        adj[v].push(u);
    }
    // centers by leaf peeling
    let mut deg: Vec<usize> = adj.iter().map(|a| a.len()).collect();
    let mut removed = vec![false; n];
    let mut layer: Vec<usize> = (0..n).filter(|&v| deg[v] <= 1).collect();
    let mut remaining = n;
    while remaining > 2 {
        let mut next = Vec::new();
        for &v in &layer {
            removed[v] = true;
            remaining -= 1;
            for &u in &adj[v] {
                if !removed[u] {
                    deg[u] -= 1;
                    if deg[u] == 1 {
                        next.push(u);
                    }
                }
            }
        }
        layer = next;
    }
    let centers: Vec<usize> = (0..n).filter(|&v| !removed[v]).collect();

    fn encode(v: usize, parent: Option<usize>, adj: &[Vec<usize>], labels: &[String]) -> String {
        let mut kids: Vec<String> = adj[v]
            .iter()
            .filter(|&&u| Some(u) != parent)
            .map(|&u| encode(u, Some(v), adj, labels))
            .collect();
        kids.sort();
        format!("({}{})", labels[v], kids.concat())
    }

    centers
        .iter()
        .map(|&c| encode(c, None, &adj, labels))
        .min()
        .unwrap()
}

/// Canonical hash of the doubly-weighted arrowed dual tree (unfolded).
pub fn dual_tree_hash(ct: &CTree) -> u64 {
    let labels: Vec<String> = ct
        .comps
        .iter()
        .map(|c| {
            format!(
                "e{}m{}a{}d{}",
                c.e,
                c.m_omega,
                c.arrows.len(),
                u8::from(c.dicritical)
            )
        })
        .collect();
    let edges: Vec<(usize, usize)> = ct.edges.iter().map(|e| e.comps).collect();
    fnv64(&canonical_tree_encoding(&labels, &edges))
}

/// DOT rendering of the dual tree: vertex labels "e=…, m=…", one arrowhead
/// per free singular point, double arrowheads on dicritical components.
pub fn dual_tree_dot(ct: &CTree) -> String {
    let mut out = String::from("digraph dual_tree {\n  node [shape=circle];\n");
    for (i, c) in ct.comps.iter().enumerate() {
        out.push_str(&format!(
            "  v{} [label=\"e={}, m={}\"{}];\n",
            i,
            c.e,
            c.m_omega,
            if c.dicritical { ", shape=doublecircle" } else { "" }
        ));
    }
    for e in &ct.edges {
        out.push_str(&format!("  v{} -> v{} [dir=none];\n", e.comps.0, e.comps.1));
    }
    let mut stub = 0usize;
    for (i, c) in ct.comps.iter().enumerate() {
        for _ in &c.arrows {
            out.push_str(&format!(
                "  s{} [shape=point, width=0.05];\n  v{} -> s{}{};\n",
                stub,
                i,
                stub,
                if c.dicritical { " [arrowhead=normalnormal]" } else { "" }
            ));
            stub += 1;
        }
    }
    out.push_str("}\n");
    out
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
    fn cusp_unfolds_trivially() {
        let cusp = OneForm::new(mono(-3, 2, 0), mono(2, 0, 1));
        let tree = reduce(&cusp, &Config::default()).unwrap();
        let ct = unfold(&tree);
        assert_eq!(ct.comps.len(), 3);
        assert_eq!(ct.points.len(), 3);
        assert_eq!(ct.edges.len(), 2);
        // last component carries the single arrow and both edges: valence 3
        let last = ct
            .comps
            .iter()
            .enumerate()
            .find(|(_, c)| c.e == -1)
            .unwrap()
            .0;
        assert_eq!(ct.valence(last), 3);
    }

    #[test]
    fn orbit_unfolds_to_copies() {
        // d(y³ − 2x²y): three singular directions, one a conjugate pair
        let a = mono(-4, 1, 1);
        let b = mono(3, 0, 2).add(&mono(-2, 2, 0));
        let tree = reduce(&OneForm::new(a, b), &Config::default()).unwrap();
        let ct = unfold(&tree);
        assert_eq!(ct.comps.len(), 1);
        assert_eq!(ct.points.len(), 3); // 1 rational + 2 conjugates
        assert_eq!(ct.comps[0].arrows.len(), 3);
    }

    #[test]
    fn hash_invariance_under_relabeling() {
        // the same labeled path encoded with two different orderings
        let labels1 = vec!["a".into(), "b".into(), "c".into()];
        let edges1 = vec![(0, 1), (1, 2)];
        let labels2 = vec!["c".into(), "b".into(), "a".into()];
        let edges2 = vec![(2, 1), (1, 0)];
        assert_eq!(
            canonical_tree_encoding(&labels1, &edges1),
            canonical_tree_encoding(&labels2, &edges2)
        );
        // a genuinely different labeling differs
        let labels3 = vec!["a".into(), "c".into(), "b".into()];
        assert_ne!(
            canonical_tree_encoding(&labels1, &edges1),
            canonical_tree_encoding(&labels3, &edges1)
        );
    }
}
