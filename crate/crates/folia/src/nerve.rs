//! The complete nerve of a reduced foliation: a bicolored, weighted, arrowed
//! bipartite tree on singular points and divisor components, together with
//! the pruning calculus, the finite-type criterion, and the loop-count σ̂.

use std::collections::{BTreeMap, BTreeSet, VecDeque};

use serde::{Deserialize, Serialize};

use crate::annot::Annotations;
use crate::dual::{unfold, CTree};
use crate::error::{Error, Result};
use crate::field::FieldDescriptor;
use crate::linalg::Mat;
use crate::localclass::{Alignment, FirstIntegral, Kind, Periodicity, Provenance};
use crate::reduction::ReductionTree;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Color {
    Red,
    Green,
}

/// Attribute with provenance; `value = None` means undetermined.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Attr<T> {
    pub value: Option<T>,
    pub provenance: Provenance,
}

impl<T: Copy> Attr<T> {
    pub fn known(value: T, provenance: Provenance) -> Attr<T> {
        Attr {
            value: Some(value),
            provenance,
        }
    }

    pub fn unknown() -> Attr<T> {
        Attr {
            value: None,
            provenance: Provenance::Assumed,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum VType {
    /// Singular point of the strict transform.
    Type0,
    /// Punctured divisor component.
    Type1,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct NerveVertex {
    pub id: usize,
    pub vtype: VType,
    pub color: Attr<Color>,
    /// d_s = dim E_s ∈ {0, 1}; meaningful for red vertices.
    pub weight: Attr<u8>,
    /// Back-reference into the tree: "p{id}#copy" or "D{id}#copy".
    pub backref: String,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct NerveEdge {
    /// Type-0 endpoint.
    pub v0: usize,
    /// Type-1 endpoint.
    pub v1: usize,
    pub color: Attr<Color>,
    /// Whether the restriction from the type-0 / type-1 side is bijective.
    pub bij0: Attr<bool>,
    pub bij1: Attr<bool>,
}

#[derive(Clone, Debug, Default, Serialize, Deserialize)]
pub struct Nerve {
    pub vertices: Vec<NerveVertex>,
    pub edges: Vec<NerveEdge>,
    /// Height-0 convention: a single-vertex nerve carrying only local data.
    pub trivial: bool,
}

impl Nerve {
    pub fn neighbors(&self, v: usize) -> Vec<(usize, usize)> {
        // (edge index, other endpoint)
        let mut out = Vec::new();
        for (i, e) in self.edges.iter().enumerate() {
            if e.v0 == v {
                out.push((i, e.v1));
            } else if e.v1 == v {
                out.push((i, e.v0));
            }
        }
        out
    }

    pub fn valence(&self, v: usize) -> usize {
        self.neighbors(v).len()
    }

    /// Bijectivity of the restriction from the side of vertex `v` on edge `e`.
    pub fn bij_at(&self, e: usize, v: usize) -> Attr<bool> {
        let edge = &self.edges[e];
        if edge.v0 == v {
            edge.bij0
        } else {
            edge.bij1
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Mode {
    /// Attributes only from certificates; verdicts degrade to Unknown.
    CertifiedOnly,
    /// Certified data plus user annotations.
    Annotated,
    /// Generic-holonomy assumption table: everything red, weight 0 exactly
    /// at valence ≥ 3 components (and at tangent saddle-nodes).
    NonDegenerate,
}

// ---------------------------------------------------------------------------
// building the nerve from a tree
// ---------------------------------------------------------------------------

pub fn build_nerve(
    tree: &ReductionTree,
    mode: Mode,
    annotations: &Annotations,
) -> Result<Nerve> {
    if tree.is_dicritical() {
        return Err(Error::DicriticalTree);
    }
    annotations.validate(tree)?;
    if tree.height == 0 {
        return Ok(Nerve {
            vertices: vec![NerveVertex {
                id: 0,
                vtype: VType::Type0,
                color: Attr::unknown(),
                weight: Attr::unknown(),
                backref: "p0#0".into(),
            }],
            edges: Vec::new(),
            trivial: true,
        });
    }
    let ct = unfold(tree);
    let mut nerve = Nerve::default();
    // Type-1 vertices per component copy.
    let mut comp_vertex = Vec::with_capacity(ct.comps.len());
    for (i, c) in ct.comps.iter().enumerate() {
        let valence = ct.valence(i);
        let (color, weight) = type1_attrs(tree, annotations, mode, c.rep, valence);
        let id = nerve.vertices.len();
        nerve.vertices.push(NerveVertex {
            id,
            vtype: VType::Type1,
            color,
            weight,
            backref: format!("D{}#{}", c.rep + 1, c.copy),
        });
        comp_vertex.push(id);
    }
    // Type-0 vertices per singular point copy.
    let mut point_vertex = Vec::with_capacity(ct.points.len());
    for pc in &ct.points {
        let (color, weight) = type0_attrs(tree, annotations, mode, pc.rep);
        let id = nerve.vertices.len();
        nerve.vertices.push(NerveVertex {
            id,
            vtype: VType::Type0,
            color,
            weight,
            backref: format!("p{}#{}", pc.rep, pc.copy),
        });
        point_vertex.push(id);
    }
    // Edges per incidence.
    for (pi, pc) in ct.points.iter().enumerate() {
        for &(comp_copy, axis) in &pc.on {
            let v0 = point_vertex[pi];
            let v1 = comp_vertex[comp_copy];
            let edge = edge_attrs(tree, annotations, mode, pc.rep, axis, &nerve, v0, v1);
            nerve.edges.push(NerveEdge {
                v0,
                v1,
                ..edge
            });
        }
    }
    Ok(nerve)
}

fn type0_attrs(
    tree: &ReductionTree,
    ann: &Annotations,
    mode: Mode,
    rep: usize,
) -> (Attr<Color>, Attr<u8>) {
    let rec = &tree.classifications[&rep];
    let ann_s = ann.singularity(rep);
    if mode == Mode::NonDegenerate {
        let weight = if rec.is_tangent_saddle_node() {
            Attr::known(
                ann_s.and_then(|a| a.transverse_symmetry_weight).unwrap_or(0),
                Provenance::Assumed,
            )
        } else {
            Attr::known(1, Provenance::Assumed)
        };
        return (Attr::known(Color::Red, Provenance::Assumed), weight);
    }
    // certified statuses
    let mut color = match &rec.first_integral {
        (FirstIntegral::Yes { .. }, prov) => Attr::known(Color::Green, *prov),
        (FirstIntegral::No, prov) => Attr::known(Color::Red, *prov),
        (FirstIntegral::UnknownAtDepth(_), _) => Attr::unknown(),
    };
    let mut weight = match &rec.kind {
        Kind::NonResonant { .. } | Kind::ResonantObstructed { .. } => {
            Attr::known(1, Provenance::Certified)
        }
        Kind::SaddleNode { .. } => {
            if rec.is_tangent_saddle_node() {
                Attr::unknown()
            } else {
                Attr::known(1, Provenance::Certified)
            }
        }
        Kind::ResonantProbed { .. } => match color.value {
            Some(Color::Red) => Attr::known(1, Provenance::Certified),
            _ => Attr::unknown(),
        },
    };
    if mode == Mode::Annotated {
        if let Some(a) = ann_s {
            if let Some(fi) = a.first_integral {
                color = Attr::known(
                    if fi { Color::Green } else { Color::Red },
                    Provenance::Annotated,
                );
                if !fi && weight.value.is_none() && !rec.is_tangent_saddle_node() {
                    weight = Attr::known(1, Provenance::Annotated);
                }
            }
            if let Some(w) = a.transverse_symmetry_weight {
                weight = Attr::known(w, Provenance::Annotated);
            }
        }
    }
    (color, weight)
}

fn type1_attrs(
    tree: &ReductionTree,
    ann: &Annotations,
    mode: Mode,
    rep: usize,
    valence: usize,
) -> (Attr<Color>, Attr<u8>) {
    let _ = tree;
    if mode == Mode::NonDegenerate {
        let w = if valence >= 3 { 0 } else { 1 };
        return (
            Attr::known(Color::Red, Provenance::Assumed),
            Attr::known(w, Provenance::Assumed),
        );
    }
    if mode == Mode::Annotated {
        if let Some(h) = ann.divisor(rep).and_then(|d| d.holonomy.as_ref()) {
            use crate::annot::Holonomy;
            return match h {
                Holonomy::Finite { .. } => (
                    Attr::known(Color::Green, Provenance::Annotated),
                    Attr::unknown(),
                ),
                Holonomy::CommutativeInfinite => (
                    Attr::known(Color::Red, Provenance::Annotated),
                    Attr::known(1, Provenance::Annotated),
                ),
                Holonomy::NonCommutative => (
                    Attr::known(Color::Red, Provenance::Annotated),
                    Attr::known(0, Provenance::Annotated),
                ),
            };
        }
    }
    (Attr::unknown(), Attr::unknown())
}

fn edge_attrs(
    tree: &ReductionTree,
    ann: &Annotations,
    mode: Mode,
    point_rep: usize,
    axis: crate::poly2::Axis,
    nerve: &Nerve,
    v0: usize,
    v1: usize,
) -> NerveEdge {
    let rec = &tree.classifications[&point_rep];
    let vx0 = &nerve.vertices[v0];
    let vx1 = &nerve.vertices[v1];
    // Local holonomy of the branch: periodic ⇔ green edge.
    let tangent_branch = rec
        .alignment
        .get(&axis)
        .map_or(false, |a| *a == Alignment::Tangent);
    let mut color: Attr<Color> = match &rec.kind {
        Kind::NonResonant { .. } | Kind::ResonantObstructed { .. } => {
            Attr::known(Color::Red, Provenance::Certified)
        }
        Kind::SaddleNode { .. } if !tangent_branch => {
            Attr::known(Color::Red, Provenance::Certified)
        }
        Kind::SaddleNode { .. } => {
            // tangent saddle-node: the weak-axis holonomy may be periodic
            match rec.weak_periodic {
                (Periodicity::Yes, prov) => Attr::known(Color::Green, prov),
                (Periodicity::No, prov) => Attr::known(Color::Red, prov),
                (Periodicity::Unknown, _) => match (
                    mode,
                    ann.singularity(point_rep).and_then(|a| a.weak_holonomy_periodic),
                ) {
                    (Mode::Annotated, Some(p)) => Attr::known(
                        if p { Color::Green } else { Color::Red },
                        Provenance::Annotated,
                    ),
                    (Mode::NonDegenerate, _) => Attr::known(Color::Red, Provenance::Assumed),
                    _ => Attr::unknown(),
                },
            }
        }
        Kind::ResonantProbed { .. } => match vx0.color.value {
            Some(c) => Attr::known(c, vx0.color.provenance),
            None => Attr::unknown(),
        },
    };
    // An edge touching a green vertex is green.
    if vx1.color.value == Some(Color::Green) || vx0.color.value == Some(Color::Green) {
        color = Attr::known(Color::Green, color.provenance);
    }
    if mode == Mode::NonDegenerate {
        color = Attr::known(Color::Red, Provenance::Assumed);
    }
    let (bij0, bij1);
    match color.value {
        Some(Color::Red) => {
            // red edges: a side is bijective iff its weight is 1
            bij0 = vx0
                .weight
                .value
                .map(|w| Attr::known(w == 1, vx0.weight.provenance))
                .unwrap_or_else(Attr::unknown);
            bij1 = vx1
                .weight
                .value
                .map(|w| Attr::known(w == 1, vx1.weight.provenance))
                .unwrap_or_else(Attr::unknown);
        }
        Some(Color::Green) => {
            // type-0 side: bijective for every non-tangent-saddle-node kind
            bij0 = if rec.kind.is_saddle_node() && tangent_branch {
                Attr::known(false, Provenance::Certified)
            } else {
                Attr::known(true, Provenance::Certified)
            };
            // type-1 side: red component never bijective into an infinite
            // edge space; green component from the extension index.
            bij1 = match vx1.color.value {
                Some(Color::Red) => Attr::known(false, Provenance::Certified),
                Some(Color::Green) => {
                    let a = ann.singularity(point_rep);
                    let d = a.and_then(|s| s.green_edge_index);
                    let corr = a.and_then(|s| s.green_edge_correction);
                    match (d, corr) {
                        (Some(d), corr) => Attr::known(
                            d == 1 && !corr.unwrap_or(false),
                            Provenance::Annotated,
                        ),
                        _ => Attr::unknown(),
                    }
                }
                None => Attr::unknown(),
            };
        }
        None => {
            bij0 = Attr::unknown();
            bij1 = Attr::unknown();
        }
    }
    NerveEdge {
        v0,
        v1,
        color,
        bij0,
        bij1,
    }
}

// ---------------------------------------------------------------------------
// red part, repulsiveness, finite-type criterion
// ---------------------------------------------------------------------------

#[derive(Clone, Debug)]
pub struct RedPart {
    pub vertices: BTreeSet<usize>,
    /// Indices of red edges (both endpoints red and the edge itself red).
    pub edges: Vec<usize>,
    pub connected: bool,
}

/// Extracts the red subgraph; errors on undetermined colors.
pub fn red_part(nerve: &Nerve) -> Result<RedPart> {
    let mut vertices = BTreeSet::new();
    for v in &nerve.vertices {
        match v.color.value {
            Some(Color::Red) => {
                vertices.insert(v.id);
            }
            Some(Color::Green) => {}
            None => return Err(Error::UnknownArrow),
        }
    }
    let mut edges = Vec::new();
    for (i, e) in nerve.edges.iter().enumerate() {
        match e.color.value {
            Some(Color::Red) => edges.push(i),
            Some(Color::Green) => {}
            None => return Err(Error::UnknownArrow),
        }
    }
    // connectivity over red edges
    let connected = {
        let mut seen: BTreeSet<usize> = BTreeSet::new();
        if let Some(&start) = vertices.iter().next() {
            let mut queue = VecDeque::from([start]);
            seen.insert(start);
            while let Some(v) = queue.pop_front() {
                for &ei in &edges {
                    let e = &nerve.edges[ei];
                    let other = if e.v0 == v {
                        e.v1
                    } else if e.v1 == v {
                        e.v0
                    } else {
                        continue;
                    };
                    if vertices.contains(&other) && seen.insert(other) {
                        queue.push_back(other);
                    }
                }
            }
        }
        seen.len() == vertices.len()
    };
    Ok(RedPart {
        vertices,
        edges,
        connected,
    })
}

/// Repulsive: every edge attached to a vertex outside K must have its far
/// (from K) side bijective — a double arrow or a simple arrow outward.
pub fn is_repulsive(nerve: &Nerve, k: &BTreeSet<usize>) -> Result<bool> {
    let dist = distances_from(nerve, k);
    for (ei, e) in nerve.edges.iter().enumerate() {
        if k.contains(&e.v0) && k.contains(&e.v1) {
            continue;
        }
        let far = if dist[e.v0] >= dist[e.v1] { e.v0 } else { e.v1 };
        match nerve.bij_at(ei, far).value {
            Some(true) => {}
            Some(false) => return Ok(false),
            None => return Err(Error::UnknownArrow),
        }
    }
    Ok(true)
}

fn distances_from(nerve: &Nerve, k: &BTreeSet<usize>) -> Vec<usize> {
    let mut dist = vec![usize::MAX; nerve.vertices.len()];
    let mut queue = VecDeque::new();
    for &v in k {
        dist[v] = 0;
        queue.push_back(v);
    }
    while let Some(v) = queue.pop_front() {
        for (_, u) in nerve.neighbors(v) {
            if dist[u] == usize::MAX {
                dist[u] = dist[v] + 1;
                queue.push_back(u);
            }
        }
    }
    dist
}

/// Witness geodesic types of the infinite-dimension lemma.
#[derive(Clone, Debug, Serialize)]
pub struct Witness {
    /// 1: inward simple arrow at the end of a green geodesic;
    /// 2: green geodesic joining two red vertices;
    /// 3: green edge joining two red vertices;
    /// 4: red–green edge with neither restriction bijective.
    pub kind: u8,
    pub vertices: Vec<usize>,
}

#[derive(Clone, Debug, Serialize)]
pub enum TffVerdict {
    /// Height-0 trees or an empty red part: the criterion does not apply.
    NotApplicable { reason: String },
    Finite {
        sigma_hat: u64,
        tau_hat: u64,
    },
    Infinite { witness: Witness },
    Unknown { missing: String },
}

/// The finite-type criterion: finite iff the red part is connected and
/// repulsive; infinite verdicts carry a structural witness.
pub fn is_tff(nerve: &Nerve) -> TffVerdict {
    if nerve.trivial {
        return TffVerdict::NotApplicable {
            reason: "height-0 tree: local normal-form data only".into(),
        };
    }
    let red = match red_part(nerve) {
        Ok(r) => r,
        Err(_) => {
            return TffVerdict::Unknown {
                missing: "vertex or edge colors undetermined".into(),
            }
        }
    };
    if red.vertices.is_empty() {
        return TffVerdict::NotApplicable {
            reason: "red part empty (goodness fails)".into(),
        };
    }
    if !red.connected {
        let witness = disconnection_witness(nerve, &red);
        return TffVerdict::Infinite { witness };
    }
    match is_repulsive(nerve, &red.vertices) {
        Err(_) => TffVerdict::Unknown {
            missing: "boundary arrow undetermined".into(),
        },
        Ok(false) => {
            let witness = repulsion_witness(nerve, &red.vertices);
            TffVerdict::Infinite { witness }
        }
        Ok(true) => {
            let sigma = sigma_hat(nerve) as u64;
            TffVerdict::Finite {
                sigma_hat: sigma,
                tau_hat: sigma,
            }
        }
    }
}

fn disconnection_witness(nerve: &Nerve, red: &RedPart) -> Witness {
    // BFS from one red component through the whole tree to the nearest
    // foreign red vertex: the connecting geodesic has green interior.
    let mut comp: BTreeSet<usize> = BTreeSet::new();
    let start = *red.vertices.iter().next().unwrap();
    let mut queue = VecDeque::from([start]);
    comp.insert(start);
    while let Some(v) = queue.pop_front() {
        for &ei in &red.edges {
            let e = &nerve.edges[ei];
            let other = if e.v0 == v {
                e.v1
            } else if e.v1 == v {
                e.v0
            } else {
                continue;
            };
            if red.vertices.contains(&other) && comp.insert(other) {
                queue.push_back(other);
            }
        }
    }
    // tree BFS with parents
    let mut parent = vec![usize::MAX; nerve.vertices.len()];
    let mut seen: BTreeSet<usize> = comp.clone();
    let mut queue: VecDeque<usize> = comp.iter().copied().collect();
    while let Some(v) = queue.pop_front() {
        for (_, u) in nerve.neighbors(v) {
            if seen.insert(u) {
                parent[u] = v;
                if red.vertices.contains(&u) {
                    // reconstruct path
                    let mut path = vec![u];
                    let mut cur = v;
                    while cur != usize::MAX && !comp.contains(&cur) {
                        path.push(cur);
                        cur = parent[cur];
                    }
                    if cur != usize::MAX {
                        path.push(cur);
                    }
                    path.reverse();
                    let kind = if path.len() == 2 { 3 } else { 2 };
                    return Witness {
                        kind,
                        vertices: path,
                    };
                }
                queue.push_back(u);
            }
        }
    }
    Witness {
        kind: 2,
        vertices: vec![start],
    }
}

fn repulsion_witness(nerve: &Nerve, k: &BTreeSet<usize>) -> Witness {
    let dist = distances_from(nerve, k);
    // the violating edge
    for (ei, e) in nerve.edges.iter().enumerate() {
        if k.contains(&e.v0) && k.contains(&e.v1) {
            continue;
        }
        let (near, far) = if dist[e.v0] >= dist[e.v1] {
            (e.v1, e.v0)
        } else {
            (e.v0, e.v1)
        };
        if nerve.bij_at(ei, far).value == Some(false) {
            // path from the red part to `far` through `near`
            let mut path = vec![far, near];
            let mut cur = near;
            while dist[cur] > 0 {
                let next = nerve
                    .neighbors(cur)
                    .into_iter()
                    .map(|(_, u)| u)
                    .find(|&u| dist[u] + 1 == dist[cur])
                    .unwrap();
                path.push(next);
                cur = next;
            }
            path.reverse();
            let near_bij = nerve.bij_at(ei, near).value == Some(true);
            let kind = if path.len() == 2 && !near_bij { 4 } else { 1 };
            return Witness {
                kind,
                vertices: path,
            };
        }
    }
    Witness {
        kind: 1,
        vertices: Vec::new(),
    }
}

// ---------------------------------------------------------------------------
// σ̂ census, pruning and brute-force cohomology
// ---------------------------------------------------------------------------

/// Active-part census on a red subgraph: weight-1 clusters whose closures
/// end at weight-0 vertices contribute (extremities − 1); so does every edge
/// joining two weight-0 vertices. Meaningful on pruned graphs, where no
/// weight-1 vertex is a leaf.
pub fn census_sigma(nerve: &Nerve, vertices: &BTreeSet<usize>, edge_set: &[usize]) -> usize {
    let w = |v: usize| nerve.vertices[v].weight.value.unwrap_or(1);
    // adjacency over the given edges
    let mut adj: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
    for &ei in edge_set {
        let e = &nerve.edges[ei];
        adj.entry(e.v0).or_default().push(e.v1);
        adj.entry(e.v1).or_default().push(e.v0);
    }
    let empty: Vec<usize> = Vec::new();
    let nbrs = |v: usize, adj: &BTreeMap<usize, Vec<usize>>| -> Vec<usize> {
        adj.get(&v).cloned().unwrap_or_else(|| empty.clone())
    };
    let mut sigma = 0usize;
    // Weight-1 clusters: the closure of a cluster is an active part exactly
    // when every cluster vertex is interior to it (red degree ≥ 2); its
    // extremities are then the weight-0 attachments, of which a tree with an
    // interior vertex always has at least two.
    let mut seen: BTreeSet<usize> = BTreeSet::new();
    for &v in vertices {
        if w(v) != 1 || seen.contains(&v) {
            continue;
        }
        let mut cluster = vec![v];
        let mut queue = VecDeque::from([v]);
        seen.insert(v);
        while let Some(u) = queue.pop_front() {
            for t in nbrs(u, &adj) {
                if w(t) == 1 && seen.insert(t) {
                    cluster.push(t);
                    queue.push_back(t);
                }
            }
        }
        let mut extremities = 0usize;
        let mut active = true;
        for &u in &cluster {
            let neighbors = nbrs(u, &adj);
            if neighbors.len() < 2 {
                active = false;
                break;
            }
            extremities += neighbors.iter().filter(|&&t| w(t) == 0).count();
        }
        if active {
            debug_assert!(extremities >= 2);
            sigma += extremities - 1;
        }
    }
    // Edges joining two weight-0 vertices are active parts of valence 2.
    for &ei in edge_set {
        let e = &nerve.edges[ei];
        if w(e.v0) == 0 && w(e.v1) == 0 {
            sigma += 1;
        }
    }
    sigma
}

/// σ̂ of a nerve: the active-part census of the pruned red part. The census
/// formula presumes every weight-1 vertex is interior, which is exactly what
/// the pruning fixpoint guarantees.
pub fn sigma_hat(nerve: &Nerve) -> usize {
    let pruned = prune(nerve);
    census_sigma(nerve, &pruned.vertices, &pruned.edges)
}

/// One pruning step, for the log.
#[derive(Clone, Debug, Serialize)]
pub struct PruneStep {
    pub kind: &'static str,
    pub removed: Vec<usize>,
    pub attach: usize,
}

/// Output of the pruning calculus: the surviving red subgraph (union of
/// active parts or a single vertex) plus the elision log.
#[derive(Clone, Debug)]
pub struct Pruned {
    pub vertices: BTreeSet<usize>,
    pub edges: Vec<usize>,
    pub log: Vec<PruneStep>,
}

/// Iteratively removes green prunable branches, then red ones, until the
/// fixpoint.
pub fn prune(nerve: &Nerve) -> Pruned {
    let mut alive_v: BTreeSet<usize> = nerve.vertices.iter().map(|v| v.id).collect();
    let mut alive_e: BTreeSet<usize> = (0..nerve.edges.len()).collect();
    let mut log = Vec::new();
    let color = |v: usize| nerve.vertices[v].color.value;
    let w = |v: usize| nerve.vertices[v].weight.value.unwrap_or(1);

    let valence = |v: usize, alive_e: &BTreeSet<usize>| -> usize {
        nerve
            .neighbors(v)
            .iter()
            .filter(|(ei, _)| alive_e.contains(ei))
            .count()
    };
    let alive_neighbors = |v: usize, alive_e: &BTreeSet<usize>| -> Vec<(usize, usize)> {
        nerve
            .neighbors(v)
            .into_iter()
            .filter(|(ei, _)| alive_e.contains(ei))
            .collect()
    };

    // green pass
    loop {
        let mut changed = false;
        let leaves: Vec<usize> = alive_v
            .iter()
            .copied()
            .filter(|&v| color(v) == Some(Color::Green) && valence(v, &alive_e) == 1)
            .collect();
        'leaf: for leaf in leaves {
            if !alive_v.contains(&leaf) || valence(leaf, &alive_e) != 1 {
                continue;
            }
            // walk inward
            let mut path_v = vec![leaf];
            let mut path_e = Vec::new();
            let mut cur = leaf;
            let mut prev_edge = usize::MAX;
            let attach;
            loop {
                let nbrs: Vec<(usize, usize)> = alive_neighbors(cur, &alive_e)
                    .into_iter()
                    .filter(|&(ei, _)| ei != prev_edge)
                    .collect();
                if nbrs.len() != 1 {
                    attach = cur;
                    break;
                }
                let (ei, next) = nbrs[0];
                path_e.push(ei);
                // stop vertex conditions
                let stop = color(next) == Some(Color::Red)
                    || valence(next, &alive_e) != 2
                    || arrows_outward(nerve, next, &alive_e);
                path_v.push(next);
                if stop {
                    attach = next;
                    break;
                }
                if color(next) != Some(Color::Green) {
                    continue 'leaf; // undetermined interior: not prunable
                }
                prev_edge = ei;
                cur = next;
            }
            if path_e.is_empty() {
                continue;
            }
            // repulsive-in-branch: every branch edge bijective on its
            // leaf-ward side
            for (step, &ei) in path_e.iter().enumerate() {
                let leafward = path_v[step];
                if nerve.bij_at(ei, leafward).value != Some(true) {
                    continue 'leaf;
                }
            }
            // prune: drop everything except the attach vertex
            let removed: Vec<usize> = path_v
                .iter()
                .copied()
                .filter(|&v| v != attach)
                .collect();
            for &v in &removed {
                alive_v.remove(&v);
            }
            for &ei in &path_e {
                alive_e.remove(&ei);
            }
            log.push(PruneStep {
                kind: "green",
                removed,
                attach,
            });
            changed = true;
        }
        if !changed {
            break;
        }
    }
    // red pass on the red subgraph
    let mut red_v: BTreeSet<usize> = alive_v
        .iter()
        .copied()
        .filter(|&v| color(v) == Some(Color::Red))
        .collect();
    let mut red_e: BTreeSet<usize> = alive_e
        .iter()
        .copied()
        .filter(|&ei| {
            let e = &nerve.edges[ei];
            nerve.edges[ei].color.value == Some(Color::Red)
                && red_v.contains(&e.v0)
                && red_v.contains(&e.v1)
        })
        .collect();
    loop {
        let mut changed = false;
        let leaves: Vec<usize> = red_v
            .iter()
            .copied()
            .filter(|&v| w(v) == 1 && valence(v, &red_e) == 1)
            .collect();
        for leaf in leaves {
            if !red_v.contains(&leaf) || valence(leaf, &red_e) != 1 || w(leaf) != 1 {
                continue;
            }
            let mut path_v = vec![leaf];
            let mut path_e = Vec::new();
            let mut cur = leaf;
            let mut prev_edge = usize::MAX;
            let attach;
            loop {
                let nbrs: Vec<(usize, usize)> = alive_neighbors(cur, &red_e)
                    .into_iter()
                    .filter(|&(ei, _)| ei != prev_edge)
                    .collect();
                if nbrs.len() != 1 {
                    attach = cur;
                    break;
                }
                let (ei, next) = nbrs[0];
                path_e.push(ei);
                if valence(next, &red_e) != 2 || w(next) == 0 {
                    path_v.push(next);
                    attach = next;
                    break;
                }
                path_v.push(next);
                prev_edge = ei;
                cur = next;
            }
            if path_e.is_empty() {
                continue;
            }
            let removed: Vec<usize> = path_v
                .iter()
                .copied()
                .filter(|&v| v != attach)
                .collect();
            for &v in &removed {
                red_v.remove(&v);
            }
            for &ei in &path_e {
                red_e.remove(&ei);
            }
            log.push(PruneStep {
                kind: "red",
                removed,
                attach,
            });
            changed = true;
        }
        if !changed {
            break;
        }
    }
    Pruned {
        vertices: red_v,
        edges: red_e.into_iter().collect(),
        log,
    }
}

/// Green vertex of the shape ←⋆→: both incident edges simple arrows pointing
/// away from it.
fn arrows_outward(nerve: &Nerve, v: usize, alive_e: &BTreeSet<usize>) -> bool {
    let nbrs: Vec<(usize, usize)> = nerve
        .neighbors(v)
        .into_iter()
        .filter(|(ei, _)| alive_e.contains(ei))
        .collect();
    if nbrs.len() != 2 {
        return false;
    }
    nbrs.iter().all(|&(ei, u)| {
        nerve.bij_at(ei, u).value == Some(true) && nerve.bij_at(ei, v).value == Some(false)
    })
}

/// Exact cokernel dimension of the cohomology map on a red subgraph: rows are
/// edges (one-dimensional spaces), columns the weight-1 vertices.
pub fn cohomology_bruteforce_red(
    nerve: &Nerve,
    vertices: &BTreeSet<usize>,
    edges: &[usize],
) -> usize {
    let field = FieldDescriptor::rationals();
    let cols: Vec<usize> = vertices
        .iter()
        .copied()
        .filter(|&v| nerve.vertices[v].weight.value.unwrap_or(1) == 1)
        .collect();
    let col_of: BTreeMap<usize, usize> =
        cols.iter().enumerate().map(|(i, &v)| (v, i)).collect();
    let mut mat = Mat::zero(&field, edges.len(), cols.len());
    for (r, &ei) in edges.iter().enumerate() {
        let e = &nerve.edges[ei];
        // X_{ss'} = X_{s'} − X_s with s the type-0 endpoint
        if let Some(&c) = col_of.get(&e.v1) {
            mat.set(r, c, crate::field::FieldElem::from_int(&field, 1));
        }
        if let Some(&c) = col_of.get(&e.v0) {
            let cur = mat
                .at(r, c)
                .sub(&crate::field::FieldElem::from_int(&field, 1));
            mat.set(r, c, cur);
        }
    }
    let rank = mat.rank();
    edges.len() - rank
}

/// First-homology rank of the contraction of all weight-0 vertices of a red
/// subgraph to a single point: E − V + C.
pub fn contracted_loop_rank(
    nerve: &Nerve,
    vertices: &BTreeSet<usize>,
    edges: &[usize],
) -> usize {
    if vertices.is_empty() {
        return 0;
    }
    // union-find with all weight-0 vertices unified
    let idx: BTreeMap<usize, usize> = vertices
        .iter()
        .enumerate()
        .map(|(i, &v)| (v, i))
        .collect();
    let mut parent: Vec<usize> = (0..vertices.len()).collect();
    fn find(parent: &mut Vec<usize>, v: usize) -> usize {
        if parent[v] != v {
            let r = find(parent, parent[v]);
            parent[v] = r;
        }
        parent[v]
    }
    let zeros: Vec<usize> = vertices
        .iter()
        .copied()
        .filter(|&v| nerve.vertices[v].weight.value.unwrap_or(1) == 0)
        .map(|v| idx[&v])
        .collect();
    for w in zeros.windows(2) {
        let (a, b) = (find(&mut parent, w[0]), find(&mut parent, w[1]));
        if a != b {
            parent[a] = b;
        }
    }
    let had_zero = !zeros.is_empty();
    let mut v_count: BTreeSet<usize> = BTreeSet::new();
    for i in 0..vertices.len() {
        let r = find(&mut parent, i);
        v_count.insert(r);
    }
    // contract: identified zeros already merged; now count components after
    // adding the edges
    let mut parent2 = parent.clone();
    for &ei in edges {
        let e = &nerve.edges[ei];
        let (a, b) = (
            find(&mut parent2, idx[&e.v0]),
            find(&mut parent2, idx[&e.v1]),
        );
        if a != b {
            parent2[a] = b;
        }
    }
    let mut comps: BTreeSet<usize> = BTreeSet::new();
    for i in 0..vertices.len() {
        let r = find(&mut parent2, i);
        comps.insert(r);
    }
    let v = v_count.len();
    let e = edges.len();
    let c = comps.len();
    let _ = had_zero;
    e + c - v
}

// ---------------------------------------------------------------------------
// chains and the non-degenerate fast path
// ---------------------------------------------------------------------------

/// Number of chains of the dual tree: maximal geodesics joining two
/// valence-≥3 vertices, including single edges between two such vertices.
pub fn chain_count(ct: &CTree) -> usize {
    let n = ct.comps.len();
    let val: Vec<usize> = (0..n).map(|i| ct.valence(i)).collect();
    let mut adj = vec![Vec::new(); n];
    for e in &ct.edges {
        adj[e.comps.0].push(e.comps.1);
        adj[e.comps.1].push(e.comps.0);
    }
    let mut count = 0usize;
    // walk from each valence-≥3 vertex along each edge; a chain is found when
    // the far end of a valence-≤2 run is another valence-≥3 vertex
    let mut seen_pairs: BTreeSet<(usize, usize, usize)> = BTreeSet::new();
    for v in 0..n {
        if val[v] < 3 {
            continue;
        }
        for &u in &adj[v] {
            let mut prev = v;
            let mut cur = u;
            while val[cur] == 2 {
                let next = adj[cur]
                    .iter()
                    .copied()
                    .find(|&t| t != prev);
                match next {
                    Some(t) => {
                        prev = cur;
                        cur = t;
                    }
                    None => break,
                }
            }
            if val[cur] >= 3 {
                // canonical key: endpoints plus first step to avoid double
                // counting direct multi-edges (trees: none) and reverse walks
                let key = if v < cur { (v, cur, u.min(prev)) } else { (cur, v, u.min(prev)) };
                if seen_pairs.insert(key) {
                    count += 1;
                }
            }
        }
    }
    count
}

#[derive(Clone, Debug, Serialize)]
pub struct NondegenerateReport {
    pub verdict: bool,
    pub violations: Vec<String>,
}

/// Checks the non-degeneracy conditions against certified/annotated data:
/// valence-≥3 components must have non-commutative holonomy status and
/// chain points must be free of first integrals.
pub fn nondegenerate_check(
    tree: &ReductionTree,
    ct: &CTree,
    ann: &Annotations,
) -> NondegenerateReport {
    use crate::annot::Holonomy;
    let mut violations = Vec::new();
    let n = ct.comps.len();
    let val: Vec<usize> = (0..n).map(|i| ct.valence(i)).collect();
    for (i, c) in ct.comps.iter().enumerate() {
        if val[i] >= 3 {
            if let Some(h) = ann.divisor(c.rep).and_then(|d| d.holonomy.as_ref()) {
                if !matches!(h, Holonomy::NonCommutative) {
                    violations.push(format!(
                        "component D{} has valence ≥ 3 but holonomy annotated {:?}",
                        c.rep + 1,
                        h
                    ));
                }
            }
        }
    }
    // chain points: singular points all of whose components have valence ≤ 2,
    // or corners of two valence-≥3 components
    for (pi, pc) in ct.points.iter().enumerate() {
        let on_chain = pc.on.iter().all(|&(cc, _)| val[cc] <= 2)
            || (pc.on.len() == 2 && pc.on.iter().all(|&(cc, _)| val[cc] >= 3));
        if !on_chain {
            continue;
        }
        let rec = &tree.classifications[&pc.rep];
        if matches!(rec.first_integral.0, FirstIntegral::Yes { .. }) {
            violations.push(format!(
                "chain point p{} (copy {}) carries a certified first integral",
                pc.rep, pi
            ));
        }
    }
    NondegenerateReport {
        verdict: violations.is_empty(),
        violations,
    }
}

// ---------------------------------------------------------------------------
// DOT export
// ---------------------------------------------------------------------------

pub fn nerve_dot(nerve: &Nerve) -> String {
    let mut out = String::from("digraph nerve {\n");
    for v in &nerve.vertices {
        let shape = match v.vtype {
            VType::Type0 => "circle",
            VType::Type1 => "box",
        };
        let fill = match v.color.value {
            Some(Color::Red) => "indianred1",
            Some(Color::Green) => "palegreen",
            None => "gray",
        };
        let wlabel = v
            .weight
            .value
            .map(|w| format!(" d={}", w))
            .unwrap_or_default();
        out.push_str(&format!(
            "  n{} [shape={}, style=filled, fillcolor={}, label=\"{}{}\"];\n",
            v.id, shape, fill, v.backref, wlabel
        ));
    }
    for e in &nerve.edges {
        let (dir, extra) = match (e.bij0.value, e.bij1.value) {
            (Some(true), Some(true)) => ("both", ""),
            (Some(true), Some(false)) => ("back", ""),
            (Some(false), Some(true)) => ("forward", ""),
            (Some(false), Some(false)) => ("both", ", arrowhead=odot, arrowtail=odot"),
            _ => ("none", ", style=dashed"),
        };
        let color = match e.color.value {
            Some(Color::Red) => "red",
            Some(Color::Green) => "green",
            None => "gray",
        };
        out.push_str(&format!(
            "  n{} -> n{} [dir={}, color={}{}];\n",
            e.v0, e.v1, dir, color, extra
        ));
    }
    out.push_str("}\n");
    out
}

// ---------------------------------------------------------------------------
// deterministic generators and validators for the property suites
// ---------------------------------------------------------------------------

/// Tiny deterministic generator so the property suites reproduce exactly.
pub struct SplitMix64(pub u64);

impl SplitMix64 {
    pub fn next_u64(&mut self) -> u64 {
        self.0 = self.0.wrapping_add(0x9E3779B97F4A7C15);
        let mut z = self.0;
        z = (z ^ (z >> 30)).wrapping_mul(0xBF58476D1CE4E5B9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94D049BB133111EB);
        z ^ (z >> 31)
    }

    pub fn below(&mut self, n: usize) -> usize {
        (self.next_u64() % n.max(1) as u64) as usize
    }

    pub fn chance(&mut self, num: u64, den: u64) -> bool {
        self.next_u64() % den < num
    }
}

/// Random all-red nerve: a random bipartite tree with arbitrary 0/1 weights,
/// arrows derived from the red-edge weight rule.
pub fn random_red_nerve(rng: &mut SplitMix64, max_vertices: usize) -> Nerve {
    let n = 1 + rng.below(max_vertices);
    let mut nerve = Nerve::default();
    let mut depth = vec![0usize; n];
    for v in 0..n {
        let parent = if v == 0 { None } else { Some(rng.below(v)) };
        if let Some(p) = parent {
            depth[v] = depth[p] + 1;
        }
        let weight = (rng.next_u64() % 2) as u8;
        nerve.vertices.push(NerveVertex {
            id: v,
            vtype: if depth[v] % 2 == 0 {
                VType::Type0
            } else {
                VType::Type1
            },
            color: Attr::known(Color::Red, Provenance::Assumed),
            weight: Attr::known(weight, Provenance::Assumed),
            backref: format!("synthetic{}", v),
        });
        if let Some(p) = parent {
            let (v0, v1) = if depth[v] % 2 == 0 { (v, p) } else { (p, v) };
            nerve.edges.push(NerveEdge {
                v0,
                v1,
                color: Attr::known(Color::Red, Provenance::Assumed),
                bij0: Attr::unknown(),
                bij1: Attr::unknown(),
            });
        }
    }
    derive_red_arrows(&mut nerve);
    nerve
}

/// Recomputes red-edge arrows from the endpoint weights: a side is bijective
/// iff its weight is 1.
pub fn derive_red_arrows(nerve: &mut Nerve) {
    let weights: Vec<Option<u8>> = nerve.vertices.iter().map(|v| v.weight.value).collect();
    for e in nerve.edges.iter_mut() {
        if e.color.value == Some(Color::Red) {
            e.bij0 = weights[e.v0]
                .map(|w| Attr::known(w == 1, Provenance::Assumed))
                .unwrap_or_else(Attr::unknown);
            e.bij1 = weights[e.v1]
                .map(|w| Attr::known(w == 1, Provenance::Assumed))
                .unwrap_or_else(Attr::unknown);
        }
    }
}

/// Random bicolored nerve respecting the legal arrow configurations: green
/// edges never bijective on a red side, always bijective on a green type-0
/// side.
pub fn random_mixed_nerve(rng: &mut SplitMix64, max_vertices: usize) -> Nerve {
    let n = 1 + rng.below(max_vertices);
    let mut nerve = Nerve::default();
    let mut depth = vec![0usize; n];
    let mut colors = vec![Color::Red; n];
    for v in 0..n {
        let parent = if v == 0 { None } else { Some(rng.below(v)) };
        if let Some(p) = parent {
            depth[v] = depth[p] + 1;
        }
        let color = if rng.chance(2, 5) {
            Color::Green
        } else {
            Color::Red
        };
        colors[v] = color;
        let weight = (rng.next_u64() % 2) as u8;
        nerve.vertices.push(NerveVertex {
            id: v,
            vtype: if depth[v] % 2 == 0 {
                VType::Type0
            } else {
                VType::Type1
            },
            color: Attr::known(color, Provenance::Assumed),
            weight: if color == Color::Red {
                Attr::known(weight, Provenance::Assumed)
            } else {
                Attr::unknown()
            },
            backref: format!("synthetic{}", v),
        });
        if let Some(p) = parent {
            let (v0, v1) = if depth[v] % 2 == 0 { (v, p) } else { (p, v) };
            let both_red = colors[v] == Color::Red && colors[p] == Color::Red;
            let green_edge = !both_red || rng.chance(1, 8);
            let (c, bij0, bij1);
            if green_edge {
                c = Color::Green;
                let t0_color = colors[if depth[v] % 2 == 0 { v } else { p }];
                let t1_color = colors[if depth[v] % 2 == 0 { p } else { v }];
                bij0 = match t0_color {
                    Color::Green => Attr::known(true, Provenance::Assumed),
                    Color::Red => Attr::known(false, Provenance::Assumed),
                };
                bij1 = match t1_color {
                    Color::Green => Attr::known(rng.chance(1, 2), Provenance::Assumed),
                    Color::Red => Attr::known(false, Provenance::Assumed),
                };
            } else {
                c = Color::Red;
                bij0 = Attr::unknown();
                bij1 = Attr::unknown();
            }
            nerve.edges.push(NerveEdge {
                v0,
                v1,
                color: Attr::known(c, Provenance::Assumed),
                bij0,
                bij1,
            });
        }
    }
    derive_red_arrows(&mut nerve);
    nerve
}

/// Attaches a green prunable branch (interior green valence-2 vertices, every
/// edge a double arrow or a simple arrow toward the free green leaf) at a
/// random vertex. Leaves the finite-type verdict and σ̂ unchanged.
pub fn attach_green_prunable_branch(nerve: &Nerve, rng: &mut SplitMix64) -> Nerve {
    let mut out = nerve.clone();
    let attach = rng.below(nerve.vertices.len());
    let len = 1 + rng.below(3);
    let mut prev = attach;
    let mut prev_type = nerve.vertices[attach].vtype;
    for _ in 0..len {
        let id = out.vertices.len();
        let vtype = match prev_type {
            VType::Type0 => VType::Type1,
            VType::Type1 => VType::Type0,
        };
        out.vertices.push(NerveVertex {
            id,
            vtype,
            color: Attr::known(Color::Green, Provenance::Assumed),
            weight: Attr::unknown(),
            backref: format!("branch{}", id),
        });
        let (v0, v1) = match vtype {
            VType::Type0 => (id, prev),
            VType::Type1 => (prev, id),
        };
        // bijective on the leaf-ward (new) side; inner side: double arrow or
        // simple arrow outward
        let outward_bij = Attr::known(true, Provenance::Assumed);
        let inner_bij = Attr::known(rng.chance(1, 2), Provenance::Assumed);
        let (bij0, bij1) = if v0 == id {
            (outward_bij, inner_bij)
        } else {
            (inner_bij, outward_bij)
        };
        out.edges.push(NerveEdge {
            v0,
            v1,
            color: Attr::known(Color::Green, Provenance::Assumed),
            bij0,
            bij1,
        });
        prev = id;
        prev_type = vtype;
    }
    out
}

/// Structural validation of an infinite-dimension witness against the four
/// geodesic shapes.
pub fn witness_is_valid(nerve: &Nerve, w: &Witness) -> bool {
    let color = |v: usize| nerve.vertices[v].color.value;
    let edge_between = |a: usize, b: usize| -> Option<usize> {
        nerve
            .edges
            .iter()
            .position(|e| (e.v0 == a && e.v1 == b) || (e.v0 == b && e.v1 == a))
    };
    let path_connected = |vs: &[usize]| vs.windows(2).all(|p| edge_between(p[0], p[1]).is_some());
    match w.kind {
        1 => {
            // red, then greens, final edge a simple arrow toward the inside
            if w.vertices.len() < 3 || !path_connected(&w.vertices) {
                return false;
            }
            if color(w.vertices[0]) != Some(Color::Red) {
                return false;
            }
            if !w.vertices[1..].iter().all(|&v| color(v) == Some(Color::Green)) {
                return false;
            }
            let n = w.vertices.len();
            let e = edge_between(w.vertices[n - 2], w.vertices[n - 1]).unwrap();
            nerve.bij_at(e, w.vertices[n - 2]).value == Some(true)
                && nerve.bij_at(e, w.vertices[n - 1]).value == Some(false)
        }
        2 => {
            w.vertices.len() >= 3
                && path_connected(&w.vertices)
                && color(w.vertices[0]) == Some(Color::Red)
                && color(*w.vertices.last().unwrap()) == Some(Color::Red)
                && w.vertices[1..w.vertices.len() - 1]
                    .iter()
                    .all(|&v| color(v) == Some(Color::Green))
        }
        3 => {
            w.vertices.len() == 2
                && color(w.vertices[0]) == Some(Color::Red)
                && color(w.vertices[1]) == Some(Color::Red)
                && edge_between(w.vertices[0], w.vertices[1])
                    .map(|e| nerve.edges[e].color.value == Some(Color::Green))
                    .unwrap_or(false)
        }
        4 => {
            if w.vertices.len() != 2 {
                return false;
            }
            let Some(e) = edge_between(w.vertices[0], w.vertices[1]) else {
                return false;
            };
            color(w.vertices[0]) == Some(Color::Red)
                && color(w.vertices[1]) == Some(Color::Green)
                && nerve.bij_at(e, w.vertices[0]).value == Some(false)
                && nerve.bij_at(e, w.vertices[1]).value == Some(false)
        }
        _ => false,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::{FieldDescriptor, FieldElem};
    use crate::localclass::classify_tree;
    use crate::poly2::{OneForm, Poly2};
    use crate::reduction::{reduce, Config};
    use std::sync::Arc;

    fn q() -> Arc<FieldDescriptor> {
        FieldDescriptor::rationals()
    }

    fn mono(c: i64, i: u32, j: u32) -> Poly2 {
        Poly2::monomial(&q(), FieldElem::from_int(&q(), c), i, j)
    }

    /// All-red path nerve with the given weights.
    fn red_path(weights: &[u8]) -> Nerve {
        let mut nerve = Nerve::default();
        for (v, &w) in weights.iter().enumerate() {
            nerve.vertices.push(NerveVertex {
                id: v,
                vtype: if v % 2 == 0 { VType::Type0 } else { VType::Type1 },
                color: Attr::known(Color::Red, Provenance::Assumed),
                weight: Attr::known(w, Provenance::Assumed),
                backref: format!("s{}", v),
            });
            if v > 0 {
                let (v0, v1) = if v % 2 == 0 { (v, v - 1) } else { (v - 1, v) };
                nerve.edges.push(NerveEdge {
                    v0,
                    v1,
                    color: Attr::known(Color::Red, Provenance::Assumed),
                    bij0: Attr::unknown(),
                    bij1: Attr::unknown(),
                });
            }
        }
        derive_red_arrows(&mut nerve);
        nerve
    }

    #[test]
    fn census_examples() {
        // path 0,1,0 → σ̂ = 1
        let n = red_path(&[0, 1, 0]);
        let red = red_part(&n).unwrap();
        assert_eq!(sigma_hat(&n), 1);
        assert_eq!(cohomology_bruteforce_red(&n, &red.vertices, &red.edges), 1);
        // path 1,1,1 → σ̂ = 0, prunes to a single vertex
        let n = red_path(&[1, 1, 1]);
        let red = red_part(&n).unwrap();
        assert_eq!(sigma_hat(&n), 0);
        assert_eq!(cohomology_bruteforce_red(&n, &red.vertices, &red.edges), 0);
        let pruned = prune(&n);
        assert_eq!(pruned.vertices.len(), 1);
        // single weight-1 vertex → 0; path 1,1 → 0
        let n = red_path(&[1]);
        assert_eq!(sigma_hat(&n), 0);
        let n = red_path(&[1, 1]);
        let red = red_part(&n).unwrap();
        assert_eq!(sigma_hat(&n), 0);
        assert_eq!(cohomology_bruteforce_red(&n, &red.vertices, &red.edges), 0);
        // 0–0 edge is an active part
        let n = red_path(&[0, 0]);
        let red = red_part(&n).unwrap();
        assert_eq!(sigma_hat(&n), 1);
        assert_eq!(cohomology_bruteforce_red(&n, &red.vertices, &red.edges), 1);
    }

    #[test]
    fn star_census() {
        // center weight 0, three legs 1–0: three active parts, σ̂ = 3
        let mut nerve = Nerve::default();
        let mut add_v = |w: u8, t: VType| {
            let id = nerve.vertices.len();
            nerve.vertices.push(NerveVertex {
                id,
                vtype: t,
                color: Attr::known(Color::Red, Provenance::Assumed),
                weight: Attr::known(w, Provenance::Assumed),
                backref: format!("s{}", id),
            });
            id
        };
        let center = add_v(0, VType::Type0);
        for _ in 0..3 {
            let mid = add_v(1, VType::Type1);
            let leaf = add_v(0, VType::Type0);
            nerve.edges.push(NerveEdge {
                v0: center,
                v1: mid,
                color: Attr::known(Color::Red, Provenance::Assumed),
                bij0: Attr::unknown(),
                bij1: Attr::unknown(),
            });
            nerve.edges.push(NerveEdge {
                v0: leaf,
                v1: mid,
                color: Attr::known(Color::Red, Provenance::Assumed),
                bij0: Attr::unknown(),
                bij1: Attr::unknown(),
            });
        }
        derive_red_arrows(&mut nerve);
        let red = red_part(&nerve).unwrap();
        assert_eq!(sigma_hat(&nerve), 3);
        assert_eq!(
            cohomology_bruteforce_red(&nerve, &red.vertices, &red.edges),
            3
        );
        let pruned = prune(&nerve);
        assert_eq!(contracted_loop_rank(&nerve, &pruned.vertices, &pruned.edges), 3);
        match is_tff(&nerve) {
            TffVerdict::Finite { sigma_hat, tau_hat } => {
                assert_eq!(sigma_hat, 3);
                assert_eq!(tau_hat, 3);
            }
            other => panic!("{:?}", other),
        }
    }

    #[test]
    fn repulsiveness_rules() {
        // red core 0–1 (weights 1), green leaf attached ↔ → repulsive
        let mut n = red_path(&[1, 1]);
        let leaf = 2;
        n.vertices.push(NerveVertex {
            id: leaf,
            vtype: VType::Type0,
            color: Attr::known(Color::Green, Provenance::Assumed),
            weight: Attr::unknown(),
            backref: "g".into(),
        });
        n.edges.push(NerveEdge {
            v0: leaf,
            v1: 1,
            color: Attr::known(Color::Green, Provenance::Assumed),
            bij0: Attr::known(true, Provenance::Assumed),
            bij1: Attr::known(false, Provenance::Assumed),
        });
        let red = red_part(&n).unwrap();
        assert!(is_repulsive(&n, &red.vertices).unwrap());
        match is_tff(&n) {
            TffVerdict::Finite { sigma_hat, .. } => assert_eq!(sigma_hat, 0),
            other => panic!("{:?}", other),
        }
        // flip the arrow to point into the core → not repulsive, witness 4
        // (the red endpoint of a green edge is never bijective, so the
        // violating shape adjacent to the core is the ⟷ configuration)
        n.edges.last_mut().unwrap().bij0 = Attr::known(false, Provenance::Assumed);
        n.edges.last_mut().unwrap().bij1 = Attr::known(false, Provenance::Assumed);
        let red = red_part(&n).unwrap();
        assert!(!is_repulsive(&n, &red.vertices).unwrap());
        match is_tff(&n) {
            TffVerdict::Infinite { witness } => {
                assert!(witness_is_valid(&n, &witness), "{:?}", witness);
                assert_eq!(witness.kind, 4);
            }
            other => panic!("{:?}", other),
        }
    }

    #[test]
    fn disconnected_red_part() {
        // red – green – red path: Infinite with a type-2 witness
        let mut nerve = red_path(&[1, 1, 1]);
        nerve.vertices[1].color = Attr::known(Color::Green, Provenance::Assumed);
        nerve.vertices[1].weight = Attr::unknown();
        for e in nerve.edges.iter_mut() {
            e.color = Attr::known(Color::Green, Provenance::Assumed);
            // green side bijective on the green type-1 vertex side; red
            // sides never
            let g = 1;
            if e.v1 == g {
                e.bij1 = Attr::known(true, Provenance::Assumed);
                e.bij0 = Attr::known(false, Provenance::Assumed);
            }
        }
        match is_tff(&nerve) {
            TffVerdict::Infinite { witness } => {
                assert_eq!(witness.kind, 2);
                assert!(witness_is_valid(&nerve, &witness), "{:?}", witness);
            }
            other => panic!("{:?}", other),
        }
    }

    #[test]
    fn cusp_nondegenerate_nerve() {
        let cusp = OneForm::new(mono(-3, 2, 0), mono(2, 0, 1));
        let cfg = Config::default();
        let mut tree = reduce(&cusp, &cfg).unwrap();
        classify_tree(&mut tree, &cfg).unwrap();
        let ann = crate::annot::Annotations::empty();
        let nerve = build_nerve(&tree, Mode::NonDegenerate, &ann).unwrap();
        // 3 components + 3 singular points
        assert_eq!(nerve.vertices.len(), 6);
        assert_eq!(nerve.edges.len(), 5);
        // the valence-3 component is red weight 0, everything else weight 1
        let zero_w: Vec<_> = nerve
            .vertices
            .iter()
            .filter(|v| v.weight.value == Some(0))
            .collect();
        assert_eq!(zero_w.len(), 1);
        assert_eq!(zero_w[0].vtype, VType::Type1);
        match is_tff(&nerve) {
            TffVerdict::Finite { sigma_hat, tau_hat } => {
                assert_eq!(sigma_hat, 0);
                assert_eq!(tau_hat, 0);
            }
            other => panic!("{:?}", other),
        }
        // chain count agrees (no chains in the cusp dual tree)
        let ct = unfold(&tree);
        assert_eq!(chain_count(&ct), 0);
        let nd = nondegenerate_check(&tree, &ct, &ann);
        assert!(nd.verdict, "{:?}", nd.violations);
        // certified-only mode: component colors unknown → verdict unknown
        let nerve2 = build_nerve(&tree, Mode::CertifiedOnly, &ann).unwrap();
        match is_tff(&nerve2) {
            TffVerdict::Unknown { .. } => {}
            other => panic!("{:?}", other),
        }
    }

    #[test]
    fn trivial_nerve_for_height_zero() {
        let dxy = OneForm::new(mono(1, 0, 1), mono(1, 1, 0));
        let cfg = Config::default();
        let mut tree = reduce(&dxy, &cfg).unwrap();
        classify_tree(&mut tree, &cfg).unwrap();
        let nerve =
            build_nerve(&tree, Mode::NonDegenerate, &crate::annot::Annotations::empty()).unwrap();
        assert!(nerve.trivial);
        match is_tff(&nerve) {
            TffVerdict::NotApplicable { .. } => {}
            other => panic!("{:?}", other),
        }
    }

    #[test]
    fn chain_counting() {
        use crate::dual::{CompCopy, CTree, EdgeCopy};
        let comp = |rep: usize, arrows: usize| CompCopy {
            rep,
            copy: 0,
            e: -2,
            m_omega: 1,
            m_ideal: 1,
            dicritical: false,
            arrows: vec![0; arrows],
        };
        // two valence-3 vertices joined through a valence-2 vertex → 1 chain
        let ct = CTree {
            comps: vec![comp(0, 2), comp(1, 0), comp(2, 2)],
            points: Vec::new(),
            edges: vec![
                EdgeCopy { comps: (0, 1), point: None },
                EdgeCopy { comps: (1, 2), point: None },
            ],
        };
        assert_eq!(chain_count(&ct), 1);
        // two valence-3 vertices sharing an edge → 1 chain
        let ct = CTree {
            comps: vec![comp(0, 2), comp(1, 2)],
            points: Vec::new(),
            edges: vec![EdgeCopy { comps: (0, 1), point: None }],
        };
        assert_eq!(chain_count(&ct), 1);
        // single vertex → 0 chains
        let ct = CTree {
            comps: vec![comp(0, 2)],
            points: Vec::new(),
            edges: Vec::new(),
        };
        assert_eq!(chain_count(&ct), 0);
        // a tail (valence-2 run ending at a leaf) is not a chain
        let ct = CTree {
            comps: vec![comp(0, 2), comp(1, 0), comp(2, 0)],
            points: Vec::new(),
            edges: vec![
                EdgeCopy { comps: (0, 1), point: None },
                EdgeCopy { comps: (1, 2), point: None },
            ],
        };
        assert_eq!(chain_count(&ct), 0);
    }

    #[test]
    fn random_red_sigma_equivalences() {
        let mut rng = SplitMix64(0xf01a);
        for _ in 0..300 {
            let nerve = random_red_nerve(&mut rng, 12);
            let red = red_part(&nerve).unwrap();
            let sigma = sigma_hat(&nerve);
            let coker = cohomology_bruteforce_red(&nerve, &red.vertices, &red.edges);
            assert_eq!(sigma, coker, "nerve {:?}", nerve);
            let pruned = prune(&nerve);
            let coker_pruned =
                cohomology_bruteforce_red(&nerve, &pruned.vertices, &pruned.edges);
            assert_eq!(sigma, coker_pruned);
            assert_eq!(
                sigma,
                contracted_loop_rank(&nerve, &pruned.vertices, &pruned.edges)
            );
        }
    }
}
