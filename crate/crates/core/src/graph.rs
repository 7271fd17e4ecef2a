//! Immutable directed-graph value type and its primitive operations:
//! edge-flips, vertex identification (quotients), 3-cycle and 3-clique
//! counting, blocking tests and undirected distances.

use std::collections::BTreeSet;
use thiserror::Error;

pub type VertexId = u32;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum GraphError {
    #[error("edge ({0}, {1}) is not present in the graph")]
    MissingEdge(VertexId, VertexId),
    #[error("flipping ({0}, {1}) would duplicate the existing reverse edge")]
    ReversePresent(VertexId, VertexId),
    #[error("vertex id {0} is out of range (vertex count {1})")]
    UnknownVertex(VertexId, usize),
    #[error("merge classes overlap on vertex {0}")]
    OverlappingClasses(VertexId),
    #[error("merge class {0} is empty")]
    EmptyClass(usize),
    #[error("edge endpoint {0} exceeds the declared vertex count {1}")]
    EndpointOutOfRange(VertexId, usize),
}

/// A directed edge, kept as an ordered pair of vertex ids.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Edge {
    pub source: VertexId,
    pub target: VertexId,
}

impl Edge {
    pub fn new(source: VertexId, target: VertexId) -> Self {
        Edge { source, target }
    }

    pub fn reverse(self) -> Self {
        Edge { source: self.target, target: self.source }
    }
}

impl From<(VertexId, VertexId)> for Edge {
    fn from((source, target): (VertexId, VertexId)) -> Self {
        Edge { source, target }
    }
}

impl std::fmt::Display for Edge {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "({}, {})", self.source, self.target)
    }
}

/// A partition of a vertex subset into disjoint merge classes.
///
/// Each class collapses to its smallest member under [`DirectedGraph::identify`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MergePlan {
    classes: Vec<Vec<VertexId>>,
}

impl MergePlan {
    /// Builds a plan from the given classes. Duplicates inside a class are
    /// collapsed; a vertex appearing in two different classes is an error.
    pub fn new(classes: Vec<Vec<VertexId>>) -> Result<Self, GraphError> {
        let mut seen = BTreeSet::new();
        let mut normalized = Vec::with_capacity(classes.len());
        for (i, class) in classes.into_iter().enumerate() {
            let mut class: Vec<VertexId> = class.into_iter().collect();
            class.sort_unstable();
            class.dedup();
            if class.is_empty() {
                return Err(GraphError::EmptyClass(i));
            }
            for &v in &class {
                if !seen.insert(v) {
                    return Err(GraphError::OverlappingClasses(v));
                }
            }
            normalized.push(class);
        }
        Ok(MergePlan { classes: normalized })
    }

    pub fn merge_pair(a: VertexId, b: VertexId) -> Self {
        MergePlan::new(vec![vec![a, b]]).expect("a two-vertex class is always valid")
    }

    pub fn classes(&self) -> &[Vec<VertexId>] {
        &self.classes
    }

    /// Smallest member of each class, in class order.
    pub fn representatives(&self) -> impl Iterator<Item = VertexId> + '_ {
        self.classes.iter().map(|c| c[0])
    }
}

/// An immutable digraph over contiguous vertex ids `0..vertex_count`.
///
/// Self-loops and antiparallel pairs are representable so that quotients
/// which accidentally create 1- or 2-cycles stay observable; `is_simple`
/// and `is_oriented` report on them.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DirectedGraph {
    vertex_count: usize,
    edges: Vec<(VertexId, VertexId)>, // sorted, deduplicated
    out_adj: Vec<Vec<VertexId>>,      // sorted
    in_adj: Vec<Vec<VertexId>>,       // sorted
    und_adj: Vec<Vec<VertexId>>,      // sorted, deduplicated, no self entries
}

impl DirectedGraph {
    /// Builds a graph with an explicit vertex count (allows isolated vertices).
    pub fn new<I>(vertex_count: usize, pairs: I) -> Result<Self, GraphError>
    where
        I: IntoIterator<Item = (VertexId, VertexId)>,
    {
        let mut edges: Vec<(VertexId, VertexId)> = pairs.into_iter().collect();
        for &(u, v) in &edges {
            if u as usize >= vertex_count {
                return Err(GraphError::EndpointOutOfRange(u, vertex_count));
            }
            if v as usize >= vertex_count {
                return Err(GraphError::EndpointOutOfRange(v, vertex_count));
            }
        }
        edges.sort_unstable();
        edges.dedup();
        Ok(Self::from_sorted_edges(vertex_count, edges))
    }

    /// Builds a graph from an edge list; the vertex count is one past the
    /// largest id seen (zero for an empty list). Duplicate pairs collapse.
    pub fn from_edge_list<I>(pairs: I) -> Self
    where
        I: IntoIterator<Item = (VertexId, VertexId)>,
    {
        let mut edges: Vec<(VertexId, VertexId)> = pairs.into_iter().collect();
        let vertex_count = edges
            .iter()
            .map(|&(u, v)| u.max(v) as usize + 1)
            .max()
            .unwrap_or(0);
        edges.sort_unstable();
        edges.dedup();
        Self::from_sorted_edges(vertex_count, edges)
    }

    fn from_sorted_edges(vertex_count: usize, edges: Vec<(VertexId, VertexId)>) -> Self {
        let mut out_adj = vec![Vec::new(); vertex_count];
        let mut in_adj = vec![Vec::new(); vertex_count];
        let mut und_adj = vec![Vec::new(); vertex_count];
        for &(u, v) in &edges {
            out_adj[u as usize].push(v);
            in_adj[v as usize].push(u);
            if u != v {
                und_adj[u as usize].push(v);
                und_adj[v as usize].push(u);
            }
        }
        for adj in in_adj.iter_mut() {
            adj.sort_unstable();
        }
        for adj in und_adj.iter_mut() {
            adj.sort_unstable();
            adj.dedup();
        }
        // out_adj is already sorted because edges are.
        DirectedGraph { vertex_count, edges, out_adj, in_adj, und_adj }
    }

    pub fn vertex_count(&self) -> usize {
        self.vertex_count
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    /// Edges in ascending `(source, target)` order.
    pub fn edges(&self) -> impl Iterator<Item = Edge> + '_ {
        self.edges.iter().map(|&(u, v)| Edge::new(u, v))
    }

    pub fn edge_pairs(&self) -> &[(VertexId, VertexId)] {
        &self.edges
    }

    pub fn has_edge(&self, u: VertexId, v: VertexId) -> bool {
        (u as usize) < self.vertex_count && self.out_adj[u as usize].binary_search(&v).is_ok()
    }

    pub fn out_neighbors(&self, u: VertexId) -> &[VertexId] {
        &self.out_adj[u as usize]
    }

    pub fn in_neighbors(&self, u: VertexId) -> &[VertexId] {
        &self.in_adj[u as usize]
    }

    pub fn undirected_neighbors(&self, u: VertexId) -> &[VertexId] {
        &self.und_adj[u as usize]
    }

    /// No self-loops.
    pub fn is_simple(&self) -> bool {
        self.edges.iter().all(|&(u, v)| u != v)
    }

    /// No antiparallel edge pairs.
    pub fn is_oriented(&self) -> bool {
        self.edges.iter().all(|&(u, v)| u == v || !self.has_edge(v, u))
    }

    pub fn loop_count(&self) -> u64 {
        self.edges.iter().filter(|&&(u, v)| u == v).count() as u64
    }

    /// Number of unordered antiparallel pairs (tr A² / 2).
    pub fn two_cycle_pairs(&self) -> u64 {
        self.edges
            .iter()
            .filter(|&&(u, v)| u < v && self.has_edge(v, u))
            .count() as u64
    }

    /// Reverses a single edge. The edge must be present and its reverse absent.
    pub fn flip(&self, e: Edge) -> Result<DirectedGraph, GraphError> {
        if !self.has_edge(e.source, e.target) {
            return Err(GraphError::MissingEdge(e.source, e.target));
        }
        if self.has_edge(e.target, e.source) {
            return Err(GraphError::ReversePresent(e.source, e.target));
        }
        let mut edges = self.edges.clone();
        let pos = edges.binary_search(&(e.source, e.target)).expect("edge present");
        edges.remove(pos);
        let rev = (e.target, e.source);
        let pos = edges.binary_search(&rev).expect_err("reverse absent");
        edges.insert(pos, rev);
        Ok(Self::from_sorted_edges(self.vertex_count, edges))
    }

    /// Quotients the graph by the merge plan. Each class collapses to its
    /// smallest member; remaining ids are recompacted in ascending order.
    /// Edges between merged vertices become self-loops and are kept, so an
    /// illegal merge is observable downstream. Returns the quotient together
    /// with the old-id to new-id map.
    pub fn identify(&self, plan: &MergePlan) -> Result<(DirectedGraph, Vec<VertexId>), GraphError> {
        let n = self.vertex_count;
        let mut rep: Vec<VertexId> = (0..n as VertexId).collect();
        for class in plan.classes() {
            let r = class[0];
            for &v in class {
                if v as usize >= n {
                    return Err(GraphError::UnknownVertex(v, n));
                }
                rep[v as usize] = r;
            }
        }
        // Order-preserving compaction of surviving representatives.
        let mut is_rep = vec![false; n];
        for &r in &rep {
            is_rep[r as usize] = true;
        }
        let mut new_id = vec![VertexId::MAX; n];
        let mut next = 0;
        for v in 0..n {
            if is_rep[v] {
                new_id[v] = next;
                next += 1;
            }
        }
        let old_to_new: Vec<VertexId> =
            (0..n).map(|v| new_id[rep[v] as usize]).collect();
        let mut edges: Vec<(VertexId, VertexId)> = self
            .edges
            .iter()
            .map(|&(u, v)| (old_to_new[u as usize], old_to_new[v as usize]))
            .collect();
        edges.sort_unstable();
        edges.dedup();
        Ok((Self::from_sorted_edges(next as usize, edges), old_to_new))
    }

    /// Size of the intersection of two sorted slices.
    fn intersection_size(a: &[VertexId], b: &[VertexId]) -> u64 {
        let (mut i, mut j, mut count) = (0, 0, 0u64);
        while i < a.len() && j < b.len() {
            match a[i].cmp(&b[j]) {
                std::cmp::Ordering::Less => i += 1,
                std::cmp::Ordering::Greater => j += 1,
                std::cmp::Ordering::Equal => {
                    count += 1;
                    i += 1;
                    j += 1;
                }
            }
        }
        count
    }

    /// Number of directed 3-cycles on distinct vertex triples. Each
    /// cyclically oriented triangle is counted once; for a simple oriented
    /// graph this equals tr A³ / 3.
    pub fn count_3cycles(&self) -> u64 {
        let mut ordered = 0u64;
        for &(u, v) in &self.edges {
            if u == v {
                continue;
            }
            // walks v -> w -> u with w distinct from u, v
            let out_v = &self.out_adj[v as usize];
            let in_u = &self.in_adj[u as usize];
            let (mut i, mut j) = (0, 0);
            while i < out_v.len() && j < in_u.len() {
                match out_v[i].cmp(&in_u[j]) {
                    std::cmp::Ordering::Less => i += 1,
                    std::cmp::Ordering::Greater => j += 1,
                    std::cmp::Ordering::Equal => {
                        let w = out_v[i];
                        if w != u && w != v {
                            ordered += 1;
                        }
                        i += 1;
                        j += 1;
                    }
                }
            }
        }
        debug_assert_eq!(ordered % 3, 0);
        ordered / 3
    }

    /// Number of two-step detours source -> c -> target; equals the
    /// (source, target) entry of A². The edge must be present.
    pub fn block_count(&self, e: Edge) -> Result<u64, GraphError> {
        if !self.has_edge(e.source, e.target) {
            return Err(GraphError::MissingEdge(e.source, e.target));
        }
        Ok(Self::intersection_size(
            &self.out_adj[e.source as usize],
            &self.in_adj[e.target as usize],
        ))
    }

    pub fn is_blocked(&self, e: Edge) -> Result<bool, GraphError> {
        Ok(self.block_count(e)? >= 1)
    }

    /// Number of directed 3-cycles the present edge participates in.
    pub fn cycles_through(&self, e: Edge) -> Result<u64, GraphError> {
        if !self.has_edge(e.source, e.target) {
            return Err(GraphError::MissingEdge(e.source, e.target));
        }
        Ok(Self::intersection_size(
            &self.out_adj[e.target as usize],
            &self.in_adj[e.source as usize],
        ))
    }

    /// Number of 3-cliques containing the edge: vertices adjacent (in either
    /// direction) to both endpoints.
    pub fn alpha(&self, e: Edge) -> Result<u64, GraphError> {
        if !self.has_edge(e.source, e.target) {
            return Err(GraphError::MissingEdge(e.source, e.target));
        }
        Ok(Self::intersection_size(
            &self.und_adj[e.source as usize],
            &self.und_adj[e.target as usize],
        ))
    }

    /// Sum of alpha over all edges.
    pub fn alpha_total(&self) -> u64 {
        self.edges()
            .map(|e| {
                Self::intersection_size(
                    &self.und_adj[e.source as usize],
                    &self.und_adj[e.target as usize],
                )
            })
            .sum()
    }

    /// Average alpha over all edges as an exact reduced fraction
    /// (numerator, denominator); `None` for an edgeless graph.
    pub fn alpha_avg(&self) -> Option<(u64, u64)> {
        if self.edges.is_empty() {
            return None;
        }
        let total = self.alpha_total();
        let count = self.edges.len() as u64;
        let g = gcd(total, count);
        Some((total / g.max(1), count / g.max(1)))
    }

    pub fn alpha_max(&self) -> u64 {
        self.edges()
            .map(|e| {
                Self::intersection_size(
                    &self.und_adj[e.source as usize],
                    &self.und_adj[e.target as usize],
                )
            })
            .max()
            .unwrap_or(0)
    }

    /// Hop distances from `start` in the underlying undirected graph, cut
    /// off beyond `max_depth` when given. Unreached vertices hold `u32::MAX`.
    pub fn undirected_distances(&self, start: VertexId, max_depth: Option<u32>) -> Vec<u32> {
        let mut dist = vec![u32::MAX; self.vertex_count];
        if (start as usize) >= self.vertex_count {
            return dist;
        }
        let mut queue = std::collections::VecDeque::new();
        dist[start as usize] = 0;
        queue.push_back(start);
        while let Some(u) = queue.pop_front() {
            let d = dist[u as usize];
            if let Some(cap) = max_depth {
                if d >= cap {
                    continue;
                }
            }
            for &w in &self.und_adj[u as usize] {
                if dist[w as usize] == u32::MAX {
                    dist[w as usize] = d + 1;
                    queue.push_back(w);
                }
            }
        }
        dist
    }

    /// Shortest undirected hop count between two vertices; `None` if they
    /// are in different components.
    pub fn undirected_distance(&self, u: VertexId, v: VertexId) -> Result<Option<u32>, GraphError> {
        if u as usize >= self.vertex_count {
            return Err(GraphError::UnknownVertex(u, self.vertex_count));
        }
        if v as usize >= self.vertex_count {
            return Err(GraphError::UnknownVertex(v, self.vertex_count));
        }
        if u == v {
            return Ok(Some(0));
        }
        let dist = self.undirected_distances(u, None);
        match dist[v as usize] {
            u32::MAX => Ok(None),
            d => Ok(Some(d)),
        }
    }
}

pub(crate) fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a
}
