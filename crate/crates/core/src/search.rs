//! Exhaustive search for monotone flip sequences, tournament scans, and
//! random-graph probes.
//!
//! States are orientations of the input's underlying graph, encoded as a
//! bitmask over a canonical undirected edge list; breadth-first expansion
//! in ascending edge order makes the first trace found deterministic.

use std::collections::{HashMap, VecDeque};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::graph::{DirectedGraph, Edge, VertexId};
use crate::verify::verify_fbd;

#[derive(Debug, Error, PartialEq)]
pub enum SearchError {
    #[error("graph has loops or antiparallel pairs")]
    NotSimpleOriented,
    #[error("tournament scan supports 1 <= n <= 5, got {0}")]
    TournamentSizeOutOfRange(u32),
    #[error("random probe supports n <= 7, got {0}")]
    ProbeSizeOutOfRange(u32),
    #[error("edge probability {0} is not in [0, 1]")]
    BadProbability(f64),
}

/// Monotonicity regime for a flip sequence.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Mode {
    /// Each flip may leave the 3-cycle count equal or lower.
    Weak,
    /// Each flip must strictly lower the 3-cycle count.
    Strict,
}

/// A successful flip sequence: the edges as flipped (pre-flip orientation)
/// and the 3-cycle count after each flip.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FlipTrace {
    pub start_count: u64,
    pub flips: Vec<Edge>,
    pub counts: Vec<u64>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Outcome {
    Found(FlipTrace),
    /// The monotonicity-constrained component holds no zero-count state.
    None,
    CapExceeded,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SearchResult {
    pub outcome: Outcome,
    pub states_explored: u64,
}

/// Canonical undirected edge list plus the orientation mask of a graph on
/// that skeleton. Bit i set means edge i runs high-to-low.
struct Skeleton {
    vertex_count: usize,
    pairs: Vec<(VertexId, VertexId)>, // u < v, sorted
}

impl Skeleton {
    fn of(g: &DirectedGraph) -> (Skeleton, Vec<u64>) {
        let mut pairs = Vec::with_capacity(g.edge_count());
        for e in g.edges() {
            let (u, v) = (e.source.min(e.target), e.source.max(e.target));
            pairs.push((u, v));
        }
        pairs.sort_unstable();
        let skel = Skeleton { vertex_count: g.vertex_count(), pairs };
        let mut mask = vec![0u64; skel.blocks()];
        for (i, &(u, v)) in skel.pairs.iter().enumerate() {
            if g.has_edge(v, u) {
                mask[i / 64] |= 1 << (i % 64);
            }
        }
        (skel, mask)
    }

    fn blocks(&self) -> usize {
        self.pairs.len().div_ceil(64)
    }

    fn oriented_edge(&self, i: usize, mask: &[u64]) -> Edge {
        let (u, v) = self.pairs[i];
        if mask[i / 64] >> (i % 64) & 1 == 1 {
            Edge::new(v, u)
        } else {
            Edge::new(u, v)
        }
    }

    fn materialize(&self, mask: &[u64]) -> DirectedGraph {
        let edges = (0..self.pairs.len()).map(|i| {
            let e = self.oriented_edge(i, mask);
            (e.source, e.target)
        });
        DirectedGraph::new(self.vertex_count, edges).expect("skeleton ids are in range")
    }
}

/// Orientation mask, its 3-cycle count, and the parent state plus flipped
/// edge index it was reached from (`None` for the root).
type State = (Box<[u64]>, u64, Option<(usize, usize)>);

/// Breadth-first search over mode-admissible orientations, expanding edges
/// in ascending canonical order; returns the first trace reaching a
/// 3-cycle-free orientation.
pub fn monotone_sequence_bfs(
    g: &DirectedGraph,
    mode: Mode,
    state_cap: u64,
) -> Result<SearchResult, SearchError> {
    if !g.is_simple() || !g.is_oriented() {
        return Err(SearchError::NotSimpleOriented);
    }
    let (skel, start) = Skeleton::of(g);
    let start_count = g.count_3cycles();
    if start_count == 0 {
        return Ok(SearchResult {
            outcome: Outcome::Found(FlipTrace {
                start_count,
                flips: Vec::new(),
                counts: Vec::new(),
            }),
            states_explored: 1,
        });
    }

    let mut states: Vec<State> = Vec::new();
    let mut index: HashMap<Box<[u64]>, usize> = HashMap::new();
    let start_mask: Box<[u64]> = start.into();
    index.insert(start_mask.clone(), 0);
    states.push((start_mask, start_count, None));
    let mut queue = VecDeque::from([0usize]);

    while let Some(sid) = queue.pop_front() {
        let (mask, count) = (states[sid].0.clone(), states[sid].1);
        let current = skel.materialize(&mask);
        for i in 0..skel.pairs.len() {
            let e = skel.oriented_edge(i, &mask);
            // only triangles through the flipped edge change
            let gained = current.block_count(e).expect("edge present");
            let lost = current.cycles_through(e).expect("edge present");
            let next_count = count - lost + gained;
            let admissible = match mode {
                Mode::Weak => next_count <= count,
                Mode::Strict => next_count < count,
            };
            if !admissible {
                continue;
            }
            let mut next_mask = mask.clone();
            next_mask[i / 64] ^= 1 << (i % 64);
            if index.contains_key(&next_mask) {
                continue;
            }
            let nid = states.len();
            index.insert(next_mask.clone(), nid);
            states.push((next_mask, next_count, Some((sid, i))));
            if next_count == 0 {
                let trace = reconstruct(&skel, &states, nid, start_count);
                return Ok(SearchResult {
                    outcome: Outcome::Found(trace),
                    states_explored: states.len() as u64,
                });
            }
            if states.len() as u64 > state_cap {
                return Ok(SearchResult {
                    outcome: Outcome::CapExceeded,
                    states_explored: states.len() as u64,
                });
            }
            queue.push_back(nid);
        }
    }
    Ok(SearchResult { outcome: Outcome::None, states_explored: states.len() as u64 })
}

fn reconstruct(
    skel: &Skeleton,
    states: &[State],
    goal: usize,
    start_count: u64,
) -> FlipTrace {
    let mut flips = Vec::new();
    let mut counts = Vec::new();
    let mut cursor = goal;
    while let Some((parent, edge_idx)) = states[cursor].2 {
        counts.push(states[cursor].1);
        // record the pre-flip orientation, i.e. as seen from the parent
        flips.push(skel.oriented_edge(edge_idx, &states[parent].0));
        cursor = parent;
    }
    flips.reverse();
    counts.reverse();
    FlipTrace { start_count, flips, counts }
}

impl FlipTrace {
    /// Re-simulates the trace on `g`, checking every intermediate count.
    pub fn replay(&self, g: &DirectedGraph) -> Result<bool, SearchError> {
        let mut current = g.clone();
        if current.count_3cycles() != self.start_count {
            return Ok(false);
        }
        for (e, &expected) in self.flips.iter().zip(&self.counts) {
            current = match current.flip(*e) {
                Ok(next) => next,
                Err(_) => return Ok(false),
            };
            if current.count_3cycles() != expected {
                return Ok(false);
            }
        }
        Ok(self.counts.last().copied().unwrap_or(self.start_count) == 0)
    }
}

/// Enumerates every orientation of the complete graph K_n and counts how
/// many verify as fully blocked (none do, for any n).
pub fn scan_tournaments(n: u32) -> Result<u64, SearchError> {
    if !(1..=5).contains(&n) {
        return Err(SearchError::TournamentSizeOutOfRange(n));
    }
    let pairs: Vec<(VertexId, VertexId)> = (0..n)
        .flat_map(|i| (i + 1..n).map(move |j| (i, j)))
        .collect();
    let m = pairs.len();
    let mut fbd_count = 0;
    for mask in 0u64..(1 << m) {
        let edges = pairs.iter().enumerate().map(|(i, &(u, v))| {
            if mask >> i & 1 == 1 {
                (v, u)
            } else {
                (u, v)
            }
        });
        let g = DirectedGraph::new(n as usize, edges).expect("ids below n");
        if verify_fbd(&g).is_fbd {
            fbd_count += 1;
        }
    }
    Ok(fbd_count)
}

/// A sampled instance for which no weakly monotone sequence was found.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ProbeFailure {
    pub trial: u64,
    pub edges: Vec<(VertexId, VertexId)>,
    pub cap_exceeded: bool,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ProbeSummary {
    pub n: u32,
    pub trials: u64,
    pub seed: u64,
    pub found: u64,
    pub failures: Vec<ProbeFailure>,
}

impl std::fmt::Display for ProbeSummary {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        writeln!(
            f,
            "probe n={} trials={} seed={}: {} found, {} failures",
            self.n,
            self.trials,
            self.seed,
            self.found,
            self.failures.len()
        )?;
        for fail in &self.failures {
            writeln!(f, "  trial {} stuck (cap_exceeded={})", fail.trial, fail.cap_exceeded)?;
        }
        Ok(())
    }
}

/// Samples random oriented graphs (each undirected edge present with the
/// given probability, orientation uniform) and runs the weak-mode BFS on
/// every instance. Each trial derives its own stream from the seed.
pub fn random_probe(
    n: u32,
    edge_probability: f64,
    trials: u64,
    seed: u64,
) -> Result<ProbeSummary, SearchError> {
    if n > 7 {
        return Err(SearchError::ProbeSizeOutOfRange(n));
    }
    if !(0.0..=1.0).contains(&edge_probability) {
        return Err(SearchError::BadProbability(edge_probability));
    }
    let pairs: Vec<(VertexId, VertexId)> = (0..n)
        .flat_map(|i| (i + 1..n).map(move |j| (i, j)))
        .collect();
    // the full orientation space fits under this cap for n <= 7
    let cap = 1u64 << pairs.len();
    let mut found = 0;
    let mut failures = Vec::new();
    for trial in 0..trials {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(trial);
        let edges: Vec<(VertexId, VertexId)> = pairs
            .iter()
            .filter_map(|&(u, v)| {
                let present = rng.gen_bool(edge_probability);
                let swap = rng.gen_bool(0.5);
                if present {
                    Some(if swap { (v, u) } else { (u, v) })
                } else {
                    None
                }
            })
            .collect();
        let g = DirectedGraph::new(n as usize, edges.iter().copied()).expect("ids below n");
        let result = monotone_sequence_bfs(&g, Mode::Weak, cap)?;
        match result.outcome {
            Outcome::Found(_) => found += 1,
            Outcome::None => failures.push(ProbeFailure { trial, edges, cap_exceeded: false }),
            Outcome::CapExceeded => {
                failures.push(ProbeFailure { trial, edges, cap_exceeded: true })
            }
        }
    }
    Ok(ProbeSummary { n, trials, seed, found, failures })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn single_3cycle_clears_in_one_flip() {
        let g = DirectedGraph::from_edge_list([(0, 1), (1, 2), (2, 0)]);
        let result = monotone_sequence_bfs(&g, Mode::Weak, 1 << 10).unwrap();
        let Outcome::Found(trace) = result.outcome else {
            panic!("expected a trace");
        };
        assert_eq!(trace.flips.len(), 1);
        assert_eq!(trace.counts, vec![0]);
        assert!(trace.replay(&g).unwrap());
    }

    #[test]
    fn zero_count_start_is_trivially_found() {
        let g = DirectedGraph::from_edge_list([(0, 1), (1, 2)]);
        let result = monotone_sequence_bfs(&g, Mode::Strict, 10).unwrap();
        let Outcome::Found(trace) = result.outcome else {
            panic!("expected a trace");
        };
        assert!(trace.flips.is_empty());
    }

    #[test]
    fn every_k4_orientation_admits_a_sequence() {
        let pairs = [(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)];
        for mask in 0u32..64 {
            let edges = pairs.iter().enumerate().map(|(i, &(u, v))| {
                if mask >> i & 1 == 1 {
                    (v, u)
                } else {
                    (u, v)
                }
            });
            let g = DirectedGraph::new(4, edges).unwrap();
            let result = monotone_sequence_bfs(&g, Mode::Weak, 1 << 12).unwrap();
            let Outcome::Found(trace) = result.outcome else {
                panic!("mask {mask} found no sequence");
            };
            assert!(trace.replay(&g).unwrap());
        }
    }

    #[test]
    fn strict_success_implies_weak_success() {
        let g = DirectedGraph::from_edge_list([(0, 1), (1, 2), (2, 0), (0, 3), (3, 1)]);
        let strict = monotone_sequence_bfs(&g, Mode::Strict, 1 << 12).unwrap();
        if matches!(strict.outcome, Outcome::Found(_)) {
            let weak = monotone_sequence_bfs(&g, Mode::Weak, 1 << 12).unwrap();
            assert!(matches!(weak.outcome, Outcome::Found(_)));
        }
    }

    #[test]
    fn cap_is_honored() {
        let g = DirectedGraph::from_edge_list([
            (0, 1),
            (1, 2),
            (2, 0),
            (3, 4),
            (4, 5),
            (5, 3),
            (0, 3),
            (1, 4),
            (2, 5),
        ]);
        let result = monotone_sequence_bfs(&g, Mode::Weak, 1).unwrap();
        assert!(matches!(
            result.outcome,
            Outcome::CapExceeded | Outcome::Found(_)
        ));
    }

    #[test]
    fn bfs_rejects_non_oriented_input() {
        let g = DirectedGraph::from_edge_list([(0, 1), (1, 0)]);
        assert_eq!(
            monotone_sequence_bfs(&g, Mode::Weak, 10).unwrap_err(),
            SearchError::NotSimpleOriented
        );
    }

    #[test]
    fn tournament_scan_small_sizes() {
        assert_eq!(scan_tournaments(1).unwrap(), 0);
        assert_eq!(scan_tournaments(2).unwrap(), 0);
        assert_eq!(scan_tournaments(3).unwrap(), 0);
        assert_eq!(scan_tournaments(4).unwrap(), 0);
        assert!(scan_tournaments(0).is_err());
        assert!(scan_tournaments(6).is_err());
    }

    #[test]
    fn probe_is_deterministic() {
        let a = random_probe(4, 0.5, 50, 7).unwrap();
        let b = random_probe(4, 0.5, 50, 7).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.to_string(), b.to_string());
        assert_eq!(a.found, 50);
    }

    #[test]
    fn probe_n3_never_fails() {
        let summary = random_probe(3, 0.9, 200, 1).unwrap();
        assert!(summary.failures.is_empty());
    }
}
