//! Gluing fully blocked copies into a stuck graph.
//!
//! Six copies of an FBD-graph, with one picked edge per copy and the picked
//! endpoints identified cyclically, yield a graph with exactly one directed
//! 3-cycle whose every flip strictly increases the 3-cycle count. Three
//! copies suffice when the picked edge is already doubly blocked.

use thiserror::Error;

use crate::graph::{DirectedGraph, Edge, GraphError, MergePlan, VertexId};
use crate::verify::verify_fbd;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum GlueError {
    #[error("input graph is not fully blocked")]
    NotFbd,
    #[error("picked edge ({0}, {1}) is not present")]
    EdgeMissing(VertexId, VertexId),
    #[error("three-copy gluing needs a doubly blocked picked edge, found block count {0}")]
    InsufficientBlocks(u64),
    #[error("input graph has no edges")]
    Empty,
    #[error("glued graph is degenerate: expected exactly one 3-cycle, found {0}")]
    Degenerate(u64),
    #[error("graph has loops or antiparallel pairs")]
    NotSimpleOriented,
    #[error(transparent)]
    Graph(#[from] GraphError),
}

/// How many copies to glue.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Copies {
    Six,
    Three,
}

impl Copies {
    pub fn count(self) -> usize {
        match self {
            Copies::Six => 6,
            Copies::Three => 3,
        }
    }
}

#[derive(Debug, Clone)]
pub struct GluedGraph {
    pub graph: DirectedGraph,
    /// The ids of the unique directed 3-cycle (d, e, f).
    pub cycle_vertices: (VertexId, VertexId, VertexId),
    /// Pre-identification id range of each constituent copy.
    pub copy_ranges: Vec<std::ops::Range<VertexId>>,
}

/// Lexicographically smallest edge; the deterministic default pick.
pub fn default_picked_edge(g: &DirectedGraph) -> Option<Edge> {
    g.edges().next()
}

/// Glues disjoint copies of `d` along the picked edge images.
///
/// With six copies the picked endpoints merge as d = a1~a2~b5~b6,
/// e = a3~a4~b1~b2, f = a5~a6~b3~b4; with three copies (picked edge doubly
/// blocked) as d = a1~b3, e = a2~b1, f = a3~b2. Either way the images of
/// the picked edges coincide pairwise on the 3-cycle (d, e, f).
pub fn glue_copies(
    d: &DirectedGraph,
    picked: Edge,
    copies: Copies,
) -> Result<GluedGraph, GlueError> {
    if !verify_fbd(d).is_fbd {
        return Err(GlueError::NotFbd);
    }
    if !d.has_edge(picked.source, picked.target) {
        return Err(GlueError::EdgeMissing(picked.source, picked.target));
    }
    if copies == Copies::Three {
        let blocks = d.block_count(picked)?;
        if blocks < 2 {
            return Err(GlueError::InsufficientBlocks(blocks));
        }
    }

    let n = d.vertex_count() as VertexId;
    let k = copies.count() as VertexId;
    let copy_ranges: Vec<_> = (0..k).map(|i| i * n..(i + 1) * n).collect();
    let mut edges = Vec::with_capacity(d.edge_count() * k as usize);
    for i in 0..k {
        let off = i * n;
        edges.extend(d.edges().map(|e| (e.source + off, e.target + off)));
    }
    let union = DirectedGraph::new((k * n) as usize, edges)?;

    // picked edge endpoints in copy i (0-based)
    let a = |i: VertexId| picked.source + i * n;
    let b = |i: VertexId| picked.target + i * n;
    let classes = match copies {
        Copies::Six => vec![
            vec![a(0), a(1), b(4), b(5)],
            vec![a(2), a(3), b(0), b(1)],
            vec![a(4), a(5), b(2), b(3)],
        ],
        Copies::Three => vec![
            vec![a(0), b(2)],
            vec![a(1), b(0)],
            vec![a(2), b(1)],
        ],
    };
    let reps: Vec<VertexId> = classes.iter().map(|c| *c.iter().min().unwrap()).collect();
    let plan = MergePlan::new(classes)?;
    let (graph, old_to_new) = union.identify(&plan)?;
    let cycle = (
        old_to_new[reps[0] as usize],
        old_to_new[reps[1] as usize],
        old_to_new[reps[2] as usize],
    );

    if !graph.is_simple() || !graph.is_oriented() {
        return Err(GlueError::NotSimpleOriented);
    }
    let cycles = graph.count_3cycles();
    if cycles != 1
        || !graph.has_edge(cycle.0, cycle.1)
        || !graph.has_edge(cycle.1, cycle.2)
        || !graph.has_edge(cycle.2, cycle.0)
    {
        return Err(GlueError::Degenerate(cycles));
    }
    Ok(GluedGraph { graph, cycle_vertices: cycle, copy_ranges })
}

/// Per-edge 3-cycle delta of a flip: detours gained minus cycles destroyed.
/// Only triangles through the flipped edge change, so this is exact.
pub fn flip_deltas(g: &DirectedGraph) -> Result<Vec<(Edge, i64)>, GlueError> {
    if !g.is_simple() || !g.is_oriented() {
        return Err(GlueError::NotSimpleOriented);
    }
    g.edges()
        .map(|e| {
            let gained = g.block_count(e)? as i64;
            let lost = g.cycles_through(e)? as i64;
            Ok((e, gained - lost))
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StuckReport {
    pub stuck: bool,
    pub three_cycle_count: u64,
    /// Smallest per-edge flip delta; stuck means this is >= 1.
    pub min_delta: i64,
    /// An edge whose flip would not increase the count, if any.
    pub counterexample_edge: Option<Edge>,
}

/// A graph is stuck when it has 3-cycles and every single flip strictly
/// increases their number: no weakly monotone flip sequence to zero exists.
pub fn is_stuck(g: &DirectedGraph) -> Result<StuckReport, GlueError> {
    let three_cycle_count = g.count_3cycles();
    let deltas = flip_deltas(g)?;
    let (min_delta, counterexample_edge) = deltas
        .iter()
        .map(|&(e, d)| (d, Some(e)))
        .min()
        .unwrap_or((i64::MAX, None));
    let stuck = three_cycle_count > 0 && min_delta >= 1;
    Ok(StuckReport {
        stuck,
        three_cycle_count,
        min_delta,
        counterexample_edge: if min_delta >= 1 { None } else { counterexample_edge },
    })
}
