//! Recursive multi-pyramid construction.
//!
//! Every node of a complete binary tree carries an oriented 4-cycle base;
//! each child blocks two of its parent's base edges by turning them into
//! tip edges. Folding the leaves onto the level-2 nodes removes the last
//! unblocked edges and yields a fully blocked digraph.

use std::collections::{BTreeSet, HashMap};

use thiserror::Error;

use crate::graph::{DirectedGraph, GraphError, MergePlan, VertexId};
use crate::verify::verify_fbd;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum PyramidError {
    #[error("depth {got} is too small, need at least {required}")]
    DepthTooSmall { required: u32, got: u32 },
    #[error("vertex named {0} is not present (already trimmed?)")]
    MissingVertex(VertexName),
    #[error("input graph is not fully blocked")]
    NotFbd,
    #[error(transparent)]
    Graph(#[from] GraphError),
}

/// One step down the pyramid tree.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Step {
    Left,
    Right,
}

/// A node address in the pyramid tree: a path from the root over {L, R}.
/// Ordering is lexicographic with shorter prefixes first.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct TreeAddress(Vec<Step>);

impl TreeAddress {
    pub fn root() -> Self {
        TreeAddress(Vec::new())
    }

    pub fn from_steps(steps: impl IntoIterator<Item = Step>) -> Self {
        TreeAddress(steps.into_iter().collect())
    }

    /// Parses a string of `L`/`R` characters; the empty string is the root.
    pub fn parse(s: &str) -> Option<Self> {
        s.chars()
            .map(|c| match c {
                'L' => Some(Step::Left),
                'R' => Some(Step::Right),
                _ => None,
            })
            .collect::<Option<Vec<_>>>()
            .map(TreeAddress)
    }

    pub fn level(&self) -> u32 {
        self.0.len() as u32
    }

    pub fn is_root(&self) -> bool {
        self.0.is_empty()
    }

    pub fn child(&self, step: Step) -> Self {
        let mut path = self.0.clone();
        path.push(step);
        TreeAddress(path)
    }

    pub fn parent(&self) -> Option<(TreeAddress, Step)> {
        let mut path = self.0.clone();
        let last = path.pop()?;
        Some((TreeAddress(path), last))
    }

    pub fn concat(&self, suffix: &TreeAddress) -> Self {
        let mut path = self.0.clone();
        path.extend_from_slice(&suffix.0);
        TreeAddress(path)
    }
}

impl std::fmt::Display for TreeAddress {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        for s in &self.0 {
            f.write_str(match s {
                Step::Left => "L",
                Step::Right => "R",
            })?;
        }
        Ok(())
    }
}

/// Corner of a pyramid base, in base-cycle order alpha -> beta -> gamma ->
/// delta -> alpha.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Corner {
    Alpha,
    Beta,
    Gamma,
    Delta,
}

pub const CORNERS: [Corner; 4] = [Corner::Alpha, Corner::Beta, Corner::Gamma, Corner::Delta];

impl std::fmt::Display for Corner {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Corner::Alpha => "alpha",
            Corner::Beta => "beta",
            Corner::Gamma => "gamma",
            Corner::Delta => "delta",
        })
    }
}

/// A named pyramid vertex: tree address plus corner tag.
///
/// Consecutive levels share vertices, so not every name is canonical: the
/// alpha corner of a left child *is* its parent's beta corner, and the
/// alpha corner of a right child is its parent's delta corner.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct VertexName {
    pub address: TreeAddress,
    pub corner: Corner,
}

impl VertexName {
    pub fn new(address: TreeAddress, corner: Corner) -> Self {
        VertexName { address, corner }
    }

    /// Resolves the alpha-corner aliases: (x·L, alpha) ≡ (x, beta) and
    /// (x·R, alpha) ≡ (x, delta). The result never has an alpha corner on a
    /// non-root address.
    pub fn canonical(mut self) -> VertexName {
        if self.corner == Corner::Alpha {
            if let Some((parent, step)) = self.address.parent() {
                self.address = parent;
                self.corner = match step {
                    Step::Left => Corner::Beta,
                    Step::Right => Corner::Delta,
                };
            }
        }
        self
    }

    pub fn is_canonical(&self) -> bool {
        self.corner != Corner::Alpha || self.address.is_root()
    }
}

impl std::fmt::Display for VertexName {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{},{}", self.address, self.corner)
    }
}

/// A graph together with its pyramid name map. Vertex ids are assigned by
/// sorting canonical names, so two builds of the same depth are identical.
#[derive(Debug, Clone)]
pub struct PyramidGraph {
    pub graph: DirectedGraph,
    pub depth: u32,
    names: Vec<VertexName>,
    index: HashMap<VertexName, VertexId>,
}

impl PyramidGraph {
    fn new(graph: DirectedGraph, depth: u32, names: Vec<VertexName>) -> Self {
        let index = names
            .iter()
            .enumerate()
            .map(|(id, name)| (name.clone(), id as VertexId))
            .collect();
        PyramidGraph { graph, depth, names, index }
    }

    /// Vertex id for a name; aliases resolve to their canonical form first.
    pub fn id_of(&self, name: &VertexName) -> Option<VertexId> {
        self.index.get(&name.clone().canonical()).copied()
    }

    pub fn name_of(&self, id: VertexId) -> &VertexName {
        &self.names[id as usize]
    }

    pub fn names(&self) -> &[VertexName] {
        &self.names
    }

    /// Sidecar text: one "address,corner,id" line per vertex.
    pub fn name_map_lines(&self) -> String {
        let mut out = String::new();
        for (id, name) in self.names.iter().enumerate() {
            out.push_str(&format!("{},{}\n", name, id));
        }
        out
    }
}

fn addresses_of_level(level: u32) -> Vec<TreeAddress> {
    let mut out = vec![TreeAddress::root()];
    for _ in 0..level {
        out = out
            .iter()
            .flat_map(|a| [a.child(Step::Left), a.child(Step::Right)])
            .collect();
    }
    out
}

fn all_addresses(depth: u32) -> Vec<TreeAddress> {
    let mut out = Vec::new();
    let mut frontier = vec![TreeAddress::root()];
    out.extend(frontier.iter().cloned());
    for _ in 0..depth {
        frontier = frontier
            .iter()
            .flat_map(|a| [a.child(Step::Left), a.child(Step::Right)])
            .collect();
        out.extend(frontier.iter().cloned());
    }
    out
}

/// Source and sink tip of a non-root node, as names on its parent: a left
/// child is fed from the parent's alpha corner and drains into its gamma
/// corner, a right child the other way around. This way the two base edges
/// of the parent that touch the shared corner become tip edges of the
/// child, which blocks them.
fn tips(parent: &TreeAddress, step: Step) -> (VertexName, VertexName) {
    match step {
        Step::Left => (
            VertexName::new(parent.clone(), Corner::Alpha),
            VertexName::new(parent.clone(), Corner::Gamma),
        ),
        Step::Right => (
            VertexName::new(parent.clone(), Corner::Gamma),
            VertexName::new(parent.clone(), Corner::Alpha),
        ),
    }
}

/// Builds the pre-fold pyramid tree: a base 4-cycle for every address up to
/// `depth`, plus source/sink tip edges tying every non-root base to its
/// parent. The root carries no tip.
pub fn build_tree(depth: u32) -> PyramidGraph {
    let addresses = all_addresses(depth);

    let mut names: Vec<VertexName> = Vec::new();
    for corner in CORNERS {
        names.push(VertexName::new(TreeAddress::root(), corner));
    }
    for addr in addresses.iter().filter(|a| !a.is_root()) {
        for corner in [Corner::Beta, Corner::Gamma, Corner::Delta] {
            names.push(VertexName::new(addr.clone(), corner));
        }
    }
    names.sort();
    let index: HashMap<VertexName, VertexId> = names
        .iter()
        .enumerate()
        .map(|(id, name)| (name.clone(), id as VertexId))
        .collect();
    let resolve = |name: VertexName| -> VertexId { index[&name.canonical()] };

    let mut edges: BTreeSet<(VertexId, VertexId)> = BTreeSet::new();
    for addr in &addresses {
        for (a, b) in [
            (Corner::Alpha, Corner::Beta),
            (Corner::Beta, Corner::Gamma),
            (Corner::Gamma, Corner::Delta),
            (Corner::Delta, Corner::Alpha),
        ] {
            edges.insert((
                resolve(VertexName::new(addr.clone(), a)),
                resolve(VertexName::new(addr.clone(), b)),
            ));
        }
        if let Some((parent, step)) = addr.parent() {
            let (source_tip, sink_tip) = tips(&parent, step);
            let (src, snk) = (resolve(source_tip), resolve(sink_tip));
            for corner in CORNERS {
                let c = resolve(VertexName::new(addr.clone(), corner));
                edges.insert((src, c));
                edges.insert((c, snk));
            }
        }
    }

    let graph = DirectedGraph::new(names.len(), edges).expect("ids come from the name index");
    PyramidGraph::new(graph, depth, names)
}

/// The fold: for every suffix pair Δ of two steps and every corner, all
/// level-`depth` leaves whose address ends in Δ merge with the level-2 node
/// Δ at that corner.
pub fn fold_plan(tree: &PyramidGraph) -> Result<MergePlan, PyramidError> {
    if tree.depth < 2 {
        return Err(PyramidError::DepthTooSmall { required: 2, got: tree.depth });
    }
    let suffixes = [
        TreeAddress::from_steps([Step::Left, Step::Left]),
        TreeAddress::from_steps([Step::Left, Step::Right]),
        TreeAddress::from_steps([Step::Right, Step::Left]),
        TreeAddress::from_steps([Step::Right, Step::Right]),
    ];
    let prefixes = addresses_of_level(tree.depth - 2);
    // At small depths the alpha-corner aliases make the raw (Δ, corner)
    // classes overlap, so fold them into a proper partition as we go.
    let mut classes: Vec<Vec<VertexId>> = Vec::with_capacity(16);
    let mut slot_of: HashMap<VertexId, usize> = HashMap::new();
    for suffix in &suffixes {
        for corner in CORNERS {
            let mut class = Vec::with_capacity(prefixes.len() + 1);
            class.push(
                tree.id_of(&VertexName::new(suffix.clone(), corner))
                    .expect("level-2 node exists for depth >= 2"),
            );
            for prefix in &prefixes {
                class.push(
                    tree.id_of(&VertexName::new(prefix.concat(suffix), corner))
                        .expect("leaf exists"),
                );
            }
            class.sort_unstable();
            class.dedup();
            let mut touched: Vec<usize> =
                class.iter().filter_map(|v| slot_of.get(v).copied()).collect();
            touched.sort_unstable();
            touched.dedup();
            let slot = match touched.first() {
                None => {
                    classes.push(Vec::new());
                    classes.len() - 1
                }
                Some(&first) => {
                    for &other in &touched[1..] {
                        let moved = std::mem::take(&mut classes[other]);
                        for &v in &moved {
                            slot_of.insert(v, first);
                        }
                        classes[first].extend(moved);
                    }
                    first
                }
            };
            for &v in &class {
                slot_of.insert(v, slot);
            }
            classes[slot].extend(class);
            classes[slot].sort_unstable();
            classes[slot].dedup();
        }
    }
    classes.retain(|c| !c.is_empty());
    Ok(MergePlan::new(classes)?)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PlanMode {
    /// Check all intra-class distances on the input graph as-is.
    Static,
    /// Apply the plan in rounds: round `i` merges the `i`-th non-anchor
    /// member of every class into the class anchor, checking each such
    /// pair's distance against the partially merged graph first. Merging a
    /// whole class at once would be self-defeating — after the first corner
    /// class of a subtree lands, the sibling corners of the folded leaves sit
    /// two steps apart through the new hub — while merging one member per
    /// class keeps the check meaningful for the whole fold.
    Sequential,
}

/// A pair of same-class vertices closer than the safe merge distance.
/// In sequential mode the ids refer to the partially merged graph.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PlanViolation {
    pub class_index: usize,
    pub pair: (VertexId, VertexId),
    pub distance: u32,
}

const SAFE_MERGE_DISTANCE: u32 = 4;

fn check_classes(
    g: &DirectedGraph,
    classes: &[Vec<VertexId>],
    base_index: usize,
) -> Result<(), PlanViolation> {
    for (i, class) in classes.iter().enumerate() {
        for (k, &u) in class.iter().enumerate() {
            // Only distances below the threshold matter, so a truncated BFS
            // around each member suffices.
            let dist = g.undirected_distances(u, Some(SAFE_MERGE_DISTANCE - 1));
            for &v in &class[k + 1..] {
                if dist[v as usize] != u32::MAX {
                    return Err(PlanViolation {
                        class_index: base_index + i,
                        pair: (u, v),
                        distance: dist[v as usize],
                    });
                }
            }
        }
    }
    Ok(())
}

/// Checks that every pair of vertices merged by the plan sits at undirected
/// distance >= 4, either all at once or round-by-round as the merges land.
///
/// Sequential mode anchors every class at its member closest to the root —
/// the inward fold target — so the rounds replay the fold leaf by leaf.
/// Anchoring at an arbitrary member would merge boundary corners into each
/// other first and manufacture short bridges the real fold never sees.
pub fn validate_plan(
    tree: &PyramidGraph,
    plan: &MergePlan,
    mode: PlanMode,
) -> Result<(), PlanViolation> {
    let anchors: Vec<VertexId> = plan
        .classes()
        .iter()
        .map(|class| {
            *class
                .iter()
                .min_by_key(|&&v| {
                    let name = tree.name_of(v);
                    (name.address.level(), name.clone())
                })
                .expect("classes are non-empty")
        })
        .collect();
    validate_plan_anchored(&tree.graph, plan, &anchors, mode)
}

/// [`validate_plan`] for an arbitrary graph, with the per-class anchors given
/// explicitly. Sequential rounds merge one member per class into its anchor,
/// checking each pair against the partially merged graph first.
pub fn validate_plan_anchored(
    g: &DirectedGraph,
    plan: &MergePlan,
    anchors: &[VertexId],
    mode: PlanMode,
) -> Result<(), PlanViolation> {
    assert_eq!(anchors.len(), plan.classes().len(), "one anchor per class");
    match mode {
        PlanMode::Static => check_classes(g, plan.classes(), 0),
        PlanMode::Sequential => {
            let mut current = g.clone();
            // Current image of each anchor and of the remaining members, in
            // ascending original-id order (class index order is the
            // deterministic (subtree, corner) order of the fold).
            let mut anchors = anchors.to_vec();
            let mut members: Vec<Vec<VertexId>> = plan
                .classes()
                .iter()
                .zip(&anchors)
                .map(|(c, &a)| c.iter().copied().filter(|&v| v != a).collect())
                .collect();
            let rounds = members.iter().map(Vec::len).max().unwrap_or(0);
            for round in 0..rounds {
                let mut step = Vec::new();
                for (i, ms) in members.iter().enumerate() {
                    let Some(&m) = ms.get(round) else { continue };
                    let anchor = anchors[i];
                    if m == anchor {
                        continue;
                    }
                    let dist =
                        current.undirected_distances(anchor, Some(SAFE_MERGE_DISTANCE - 1));
                    if dist[m as usize] != u32::MAX {
                        return Err(PlanViolation {
                            class_index: i,
                            pair: (anchor.min(m), anchor.max(m)),
                            distance: dist[m as usize],
                        });
                    }
                    step.push(vec![anchor, m]);
                }
                if step.is_empty() {
                    continue;
                }
                // Classes are disjoint and merges stay within classes, so the
                // per-round pairs are disjoint too.
                let step = MergePlan::new(step).expect("round pairs are disjoint");
                let (next, old_to_new) =
                    current.identify(&step).expect("plan ids were validated");
                current = next;
                for a in anchors.iter_mut() {
                    *a = old_to_new[*a as usize];
                }
                for ms in members.iter_mut() {
                    for v in ms.iter_mut() {
                        *v = old_to_new[*v as usize];
                    }
                }
            }
            Ok(())
        }
    }
}

/// Builds the tree at the given depth and applies the fold. The result is a
/// genuine FBD-graph for depth 10; the caller inspects `verify_fbd` (depth 9
/// fails, which is part of the point).
pub fn build_fbd(depth: u32) -> Result<PyramidGraph, PyramidError> {
    if depth < 2 {
        return Err(PyramidError::DepthTooSmall { required: 2, got: depth });
    }
    let tree = build_tree(depth);
    let plan = fold_plan(&tree)?;
    let (graph, old_to_new) = tree.graph.identify(&plan)?;
    // Each surviving vertex takes the name of the smallest old id mapped to
    // it, i.e. the class representative's name.
    let mut names: Vec<Option<VertexName>> = vec![None; graph.vertex_count()];
    for (old, &new) in old_to_new.iter().enumerate() {
        let slot = &mut names[new as usize];
        if slot.is_none() {
            *slot = Some(tree.name_of(old as VertexId).clone());
        }
    }
    let names = names.into_iter().map(|n| n.expect("map is onto")).collect();
    Ok(PyramidGraph::new(graph, depth, names))
}

/// Deletes the root base and the gamma corners of the two level-1 nodes
/// (six vertices, 48 incident edges on the folded depth-10 graph). What
/// remains are four separate level-(depth-2) trees, still fully blocked.
pub fn trim_levels01(p: &PyramidGraph) -> Result<PyramidGraph, PyramidError> {
    if p.depth < 3 {
        return Err(PyramidError::DepthTooSmall { required: 3, got: p.depth });
    }
    let mut victim_names: Vec<VertexName> = CORNERS
        .iter()
        .map(|&c| VertexName::new(TreeAddress::root(), c))
        .collect();
    victim_names.push(VertexName::new(TreeAddress::from_steps([Step::Left]), Corner::Gamma));
    victim_names.push(VertexName::new(TreeAddress::from_steps([Step::Right]), Corner::Gamma));

    let mut victims = vec![false; p.graph.vertex_count()];
    for name in &victim_names {
        let id = p
            .id_of(name)
            .ok_or_else(|| PyramidError::MissingVertex(name.clone()))?;
        victims[id as usize] = true;
    }

    let mut new_id = vec![VertexId::MAX; p.graph.vertex_count()];
    let mut names = Vec::new();
    let mut next = 0;
    for v in 0..p.graph.vertex_count() {
        if !victims[v] {
            new_id[v] = next;
            names.push(p.name_of(v as VertexId).clone());
            next += 1;
        }
    }
    let edges: Vec<(VertexId, VertexId)> = p
        .graph
        .edges()
        .filter(|e| !victims[e.source as usize] && !victims[e.target as usize])
        .map(|e| (new_id[e.source as usize], new_id[e.target as usize]))
        .collect();
    let graph = DirectedGraph::new(next as usize, edges)?;
    Ok(PyramidGraph::new(graph, p.depth, names))
}

/// Greedy shrink: scanning vertex pairs in ascending id order, merge any
/// pair whose directed distances in both directions are at least 5 (and
/// finite) and whose merged graph still verifies as fully blocked, until no
/// pair qualifies.
///
/// The distance-5 criterion is directed on purpose. Identifying a pair at
/// undirected distance >= 5 can never raise a block count: a new detour for
/// an edge (a, b) needs the pair to straddle a and b, which puts it within
/// undirected distance 3. Directed-far pairs may sit close together
/// undirectedly, so their merges can stack detours onto one edge ("doubly
/// blocked") while still creating no short directed cycle.
pub fn distance5_minimize(g: &DirectedGraph) -> Result<DirectedGraph, PyramidError> {
    if !verify_fbd(g).is_fbd {
        return Err(PyramidError::NotFbd);
    }

    let mut g = g.clone();
    loop {
        let mut merged_any = false;
        let mut u: VertexId = 0;
        while (u as usize) < g.vertex_count() {
            let forward = directed_distances(&g, u, true);
            let backward = directed_distances(&g, u, false);
            let mut merged_here = false;
            for v in (u + 1)..g.vertex_count() as VertexId {
                let f = forward[v as usize];
                let b = backward[v as usize];
                if !(5..VertexId::MAX).contains(&f) || !(5..VertexId::MAX).contains(&b) {
                    continue;
                }
                let plan = MergePlan::merge_pair(u, v);
                let (merged, _) = g.identify(&plan).expect("pair ids are in range");
                if verify_fbd(&merged).is_fbd {
                    // u < v, so compaction keeps u's id; rescan from u.
                    g = merged;
                    merged_any = true;
                    merged_here = true;
                    break;
                }
            }
            if !merged_here {
                u += 1;
            }
        }
        if !merged_any {
            break;
        }
    }
    Ok(g)
}

fn directed_distances(g: &DirectedGraph, start: VertexId, forward: bool) -> Vec<u32> {
    let mut dist = vec![u32::MAX; g.vertex_count()];
    dist[start as usize] = 0;
    let mut queue = std::collections::VecDeque::from([start]);
    while let Some(u) = queue.pop_front() {
        let step = if forward { g.out_neighbors(u) } else { g.in_neighbors(u) };
        for &w in step {
            if dist[w as usize] == u32::MAX {
                dist[w as usize] = dist[u as usize] + 1;
                queue.push_back(w);
            }
        }
    }
    dist
}

/// Closed-form vertex count of the pre-fold tree.
pub fn tree_vertex_count(depth: u32) -> u64 {
    4 + 3 * (2u64.pow(depth + 1) - 2)
}

/// Closed-form edge count of the pre-fold tree.
pub fn tree_edge_count(depth: u32) -> u64 {
    4 + 10 * (2u64.pow(depth + 1) - 2)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::Edge;

    fn name(addr: &str, corner: Corner) -> VertexName {
        VertexName::new(TreeAddress::parse(addr).unwrap(), corner)
    }

    #[test]
    fn depth0_is_a_bare_4cycle() {
        let p = build_tree(0);
        assert_eq!(p.graph.vertex_count(), 4);
        assert_eq!(p.graph.edge_count(), 4);
        for e in p.graph.edges() {
            assert!(!p.graph.is_blocked(e).unwrap());
        }
    }

    #[test]
    fn closed_form_counts_match() {
        for depth in 0..=5 {
            let p = build_tree(depth);
            assert_eq!(p.graph.vertex_count() as u64, tree_vertex_count(depth));
            assert_eq!(p.graph.edge_count() as u64, tree_edge_count(depth));
        }
    }

    #[test]
    fn depth2_unblocked_edges_are_exactly_the_leaf_bases() {
        let p = build_tree(2);
        assert_eq!(p.graph.vertex_count(), 22);
        assert_eq!(p.graph.edge_count(), 64);
        let mut leaf_base_edges = BTreeSet::new();
        for addr in ["LL", "LR", "RL", "RR"] {
            let a = TreeAddress::parse(addr).unwrap();
            for (c1, c2) in [
                (Corner::Alpha, Corner::Beta),
                (Corner::Beta, Corner::Gamma),
                (Corner::Gamma, Corner::Delta),
                (Corner::Delta, Corner::Alpha),
            ] {
                leaf_base_edges.insert((
                    p.id_of(&VertexName::new(a.clone(), c1)).unwrap(),
                    p.id_of(&VertexName::new(a.clone(), c2)).unwrap(),
                ));
            }
        }
        assert_eq!(leaf_base_edges.len(), 16);
        for e in p.graph.edges() {
            let unblocked = !p.graph.is_blocked(e).unwrap();
            assert_eq!(unblocked, leaf_base_edges.contains(&(e.source, e.target)));
        }
    }

    #[test]
    fn nonleaf_base_edges_are_blocked_through_children() {
        let p = build_tree(3);
        for addr in ["", "L", "R", "LL", "LR", "RL", "RR"] {
            let a = TreeAddress::parse(addr).unwrap();
            for (c1, c2) in [
                (Corner::Alpha, Corner::Beta),
                (Corner::Beta, Corner::Gamma),
                (Corner::Gamma, Corner::Delta),
                (Corner::Delta, Corner::Alpha),
            ] {
                let e = Edge::new(
                    p.id_of(&VertexName::new(a.clone(), c1)).unwrap(),
                    p.id_of(&VertexName::new(a.clone(), c2)).unwrap(),
                );
                assert!(
                    p.graph.block_count(e).unwrap() >= 1,
                    "base edge of {addr} not blocked"
                );
            }
        }
    }

    #[test]
    fn alias_resolution() {
        let n = name("LLR", Corner::Alpha).canonical();
        assert_eq!(n, name("LL", Corner::Delta));
        let n = name("LL", Corner::Alpha).canonical();
        assert_eq!(n, name("L", Corner::Beta));
        assert!(name("", Corner::Alpha).is_canonical());
    }

    #[test]
    fn fold_plan_shape() {
        let tree = build_tree(4);
        let plan = fold_plan(&tree).unwrap();
        assert_eq!(plan.classes().len(), 16);
        // every class holds the 2^(depth-2) leaves plus the level-2 target
        for class in plan.classes() {
            assert_eq!(class.len(), 5);
        }
        // a leaf merges with the level-2 node matching its two-step suffix
        let leaf = tree.id_of(&name("LLRL", Corner::Beta)).unwrap();
        let target = tree.id_of(&name("RL", Corner::Beta)).unwrap();
        assert!(plan
            .classes()
            .iter()
            .any(|c| c.contains(&leaf) && c.contains(&target)));
        // sibling leaves always land in different classes
        let sib_a = tree.id_of(&name("LLRL", Corner::Gamma)).unwrap();
        let sib_b = tree.id_of(&name("LLRR", Corner::Gamma)).unwrap();
        for class in plan.classes() {
            assert!(!(class.contains(&sib_a) && class.contains(&sib_b)));
        }
    }

    #[test]
    fn fold_plan_degenerates_at_depth2() {
        let tree = build_tree(2);
        let plan = fold_plan(&tree).unwrap();
        for class in plan.classes() {
            assert_eq!(class.len(), 1);
        }
    }

    #[test]
    fn fold_plan_rejects_small_depth() {
        let tree = build_tree(1);
        assert!(matches!(
            fold_plan(&tree),
            Err(PyramidError::DepthTooSmall { .. })
        ));
    }

    #[test]
    fn validate_plan_rejects_adjacent_merge() {
        let g = DirectedGraph::from_edge_list([(0, 1), (1, 2), (2, 3)]);
        let plan = MergePlan::merge_pair(0, 1);
        let err = validate_plan_anchored(&g, &plan, &[0], PlanMode::Static).unwrap_err();
        assert_eq!(err.pair, (0, 1));
        assert_eq!(err.distance, 1);
        let close = MergePlan::merge_pair(0, 3);
        assert!(validate_plan_anchored(&g, &close, &[0], PlanMode::Static).is_err());
    }

    #[test]
    fn validate_plan_accepts_distant_merge() {
        let g = DirectedGraph::from_edge_list([(0, 1), (1, 2), (2, 3), (3, 4)]);
        let plan = MergePlan::merge_pair(0, 4);
        assert!(validate_plan_anchored(&g, &plan, &[0], PlanMode::Static).is_ok());
        assert!(validate_plan_anchored(&g, &plan, &[0], PlanMode::Sequential).is_ok());
    }

    #[test]
    fn sequential_mode_sees_shrinking_distances() {
        // Chain 0-1-2-3-4 with 5 hanging off 0 and 10 hanging off 4, plus a
        // path 5-6-7-8-9. Statically every intra-class distance is >= 4, but
        // the first round merges 4 into 0, after which 10 is only two steps
        // from 5 when its turn comes in round two.
        let g = DirectedGraph::from_edge_list([
            (0, 1),
            (1, 2),
            (2, 3),
            (3, 4),
            (0, 5),
            (5, 6),
            (6, 7),
            (7, 8),
            (8, 9),
            (4, 10),
        ]);
        let plan = MergePlan::new(vec![vec![0, 4], vec![5, 9, 10]]).unwrap();
        let anchors = [0, 5];
        assert!(validate_plan_anchored(&g, &plan, &anchors, PlanMode::Static).is_ok());
        let err = validate_plan_anchored(&g, &plan, &anchors, PlanMode::Sequential).unwrap_err();
        assert_eq!(err.class_index, 1);
        // Ids in the violation refer to the partially merged graph, where the
        // round-one compaction has renamed 5 to 4 and 10 to 8.
        assert_eq!(err.pair, (4, 8));
        assert_eq!(err.distance, 2);
    }

    #[test]
    fn build_fbd_small_depths_are_not_fbd() {
        for depth in 2..=4 {
            let p = build_fbd(depth).unwrap();
            assert!(!verify_fbd(&p.graph).is_fbd, "depth {depth}");
        }
        assert!(matches!(
            build_fbd(1),
            Err(PyramidError::DepthTooSmall { .. })
        ));
    }

    #[test]
    fn build_fbd_is_deterministic() {
        let a = build_fbd(5).unwrap();
        let b = build_fbd(5).unwrap();
        assert_eq!(a.graph, b.graph);
        assert_eq!(a.names(), b.names());
    }

    #[test]
    fn trim_requires_depth3() {
        let p = build_fbd(2).unwrap();
        assert!(matches!(
            trim_levels01(&p),
            Err(PyramidError::DepthTooSmall { .. })
        ));
    }

    #[test]
    fn double_trim_reports_missing_vertices() {
        let p = build_fbd(4).unwrap();
        let t = trim_levels01(&p).unwrap();
        assert_eq!(p.graph.vertex_count() - t.graph.vertex_count(), 6);
        assert!(matches!(
            trim_levels01(&t),
            Err(PyramidError::MissingVertex(_))
        ));
    }

    #[test]
    fn minimize_rejects_non_fbd_input() {
        let g = DirectedGraph::from_edge_list([(0, 1), (1, 2), (2, 0)]);
        assert_eq!(distance5_minimize(&g).unwrap_err(), PyramidError::NotFbd);
    }
}
