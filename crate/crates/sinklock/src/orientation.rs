//! Edge orientations, sink sets, and exact sink statistics.
//!
//! An orientation assigns each edge a direction; the *sinks* (vertices with
//! no outgoing arc) always form an independent set, which is what makes
//! "grant every sink" a safe scheduling move. Orienting each edge with an
//! independent fair coin makes the number of sinks `X` a random variable
//! whose exact law this module can compute by enumerating all `2^m`
//! orientations in rational arithmetic.

use std::fmt::Write as _;

use num::{BigInt, BigRational, BigUint, One};

use crate::coins::CoinSchedule;
use crate::graph::Graph;
use crate::{Error, Result};

/// Hard ceiling for exact enumeration; `2^20` orientations is where the
/// default desk-scale budget ends.
pub const ENUMERATION_EDGE_CAP: usize = 20;

/// Cap for the independent-set oracle, which walks all vertex subsets.
pub const INDEPENDENT_SET_VERTEX_CAP: usize = 20;

/// A direction for every edge of a graph.
///
/// The direction of edge `i = (u, v)` (with `u < v`) is stored as one bit:
/// `false` is the arc `u -> v`, `true` is the arc `v -> u`. This matches the
/// coin convention used by every engine: coin bit 0 on `{0, 1}` yields the
/// arc `0 -> 1`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Orientation {
    graph: Graph,
    toward_lower: Vec<bool>,
}

impl Orientation {
    /// Orients `graph` by asking `coin` for each edge index in canonical
    /// order.
    pub fn from_coins(graph: &Graph, coin: impl FnMut(usize) -> bool) -> Orientation {
        let toward_lower = (0..graph.edge_count()).map(coin).collect();
        Orientation {
            graph: graph.clone(),
            toward_lower,
        }
    }

    pub fn graph(&self) -> &Graph {
        &self.graph
    }

    /// The arc of edge `index` as `(from, to)`.
    pub fn arc(&self, index: usize) -> (u32, u32) {
        let (u, v) = self.graph.edge(index);
        if self.toward_lower[index] {
            (v, u)
        } else {
            (u, v)
        }
    }

    pub fn arcs(&self) -> impl Iterator<Item = (u32, u32)> + '_ {
        (0..self.graph.edge_count()).map(|i| self.arc(i))
    }

    fn out_degrees(&self) -> Vec<u32> {
        let mut out = vec![0u32; self.graph.vertex_count()];
        for (from, _) in self.arcs() {
            out[from as usize] += 1;
        }
        out
    }

    /// Serializes as the edge list followed by one `from>to` line per edge,
    /// in canonical edge order.
    pub fn to_text(&self) -> String {
        let mut out = self.graph.to_edge_list();
        for (from, to) in self.arcs() {
            let _ = writeln!(out, "{from}>{to}");
        }
        out
    }

    /// Parses the format written by [`Orientation::to_text`].
    pub fn from_text(text: &str) -> Result<Orientation> {
        let lines: Vec<&str> = text.lines().filter(|l| !l.trim().is_empty()).collect();
        let header = lines
            .first()
            .ok_or_else(|| Error::EdgeList("empty input".into()))?;
        let m: usize = header
            .split_whitespace()
            .nth(1)
            .and_then(|t| t.parse().ok())
            .ok_or_else(|| Error::EdgeList("bad header".into()))?;
        if lines.len() != 1 + 2 * m {
            return Err(Error::EdgeList(format!(
                "expected {} lines for {m} edges, got {}",
                1 + 2 * m,
                lines.len()
            )));
        }
        let graph = Graph::from_edge_list(&lines[..1 + m].join("\n"))?;
        let mut toward_lower = Vec::with_capacity(m);
        for (i, line) in lines[1 + m..].iter().enumerate() {
            let (from, to) = line
                .split_once('>')
                .ok_or_else(|| Error::EdgeList(format!("bad direction line {line:?}")))?;
            let from: u32 = from
                .trim()
                .parse()
                .map_err(|_| Error::EdgeList(format!("bad direction line {line:?}")))?;
            let to: u32 = to
                .trim()
                .parse()
                .map_err(|_| Error::EdgeList(format!("bad direction line {line:?}")))?;
            let (u, v) = graph.edge(i);
            if (from, to) == (u, v) {
                toward_lower.push(false);
            } else if (from, to) == (v, u) {
                toward_lower.push(true);
            } else {
                return Err(Error::EdgeList(format!(
                    "direction line {i} names {from}>{to}, expected edge ({u}, {v})"
                )));
            }
        }
        Ok(Orientation { graph, toward_lower })
    }
}

/// Orients every edge with an independent fair coin from a seeded schedule.
/// The same `(graph, seed)` always yields the same orientation.
pub fn random_orientation(graph: &Graph, seed: u64) -> Orientation {
    random_orientation_in_round(graph, seed, 0)
}

/// The orientation that any engine running on `seed` would draw in `round`.
/// [`random_orientation`] is round 0 of the same schedule.
pub fn random_orientation_in_round(graph: &Graph, seed: u64, round: u64) -> Orientation {
    let coins = CoinSchedule::new(seed).round_coins(round, graph.edge_count());
    Orientation::from_coins(graph, |i| coins[i])
}

/// The vertices with no outgoing arc, in ascending order.
///
/// Sinks of any orientation are pairwise non-adjacent: a shared edge would
/// point out of one endpoint.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SinkSet {
    pub vertices: Vec<u32>,
}

impl SinkSet {
    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    pub fn contains(&self, v: u32) -> bool {
        self.vertices.binary_search(&v).is_ok()
    }
}

pub fn sinks(orientation: &Orientation) -> SinkSet {
    let out = orientation.out_degrees();
    SinkSet {
        vertices: (0..out.len() as u32)
            .filter(|&v| out[v as usize] == 0)
            .collect(),
    }
}

/// Whether the orientation has no directed cycle.
pub fn is_acyclic(orientation: &Orientation) -> bool {
    digraph_is_acyclic(orientation.graph().vertex_count(), orientation.arcs())
}

/// Kahn peeling for an arbitrary arc list on vertices `0..n`: true iff no
/// directed cycle. Parallel arcs are fine.
pub fn digraph_is_acyclic(n: usize, arcs: impl IntoIterator<Item = (u32, u32)>) -> bool {
    let mut in_deg = vec![0u32; n];
    let mut succ = vec![Vec::new(); n];
    for (from, to) in arcs {
        in_deg[to as usize] += 1;
        succ[from as usize].push(to);
    }
    let mut queue: Vec<u32> = (0..n as u32).filter(|&v| in_deg[v as usize] == 0).collect();
    let mut removed = 0usize;
    while let Some(v) = queue.pop() {
        removed += 1;
        for &w in &succ[v as usize] {
            in_deg[w as usize] -= 1;
            if in_deg[w as usize] == 0 {
                queue.push(w);
            }
        }
    }
    removed == n
}

/// Exact sink statistics under the uniform orientation model, as reduced
/// rationals over the `2^m` equally likely orientations.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExactStats {
    /// E[X]: expected number of sinks.
    pub expected_sinks: BigRational,
    /// Pr[X > 0]: probability that at least one sink exists.
    pub prob_positive: BigRational,
    /// Number of orientations enumerated, `2^m`.
    pub orientation_count: BigUint,
}

/// Enumerates all orientations with the default edge cap.
pub fn enumerate_exact(graph: &Graph) -> Result<ExactStats> {
    enumerate_exact_capped(graph, ENUMERATION_EDGE_CAP)
}

/// Enumerates all `2^m` orientations, counting sinks in integer arithmetic
/// and reporting exact rationals. No floating point is involved.
pub fn enumerate_exact_capped(graph: &Graph, cap: usize) -> Result<ExactStats> {
    let m = graph.edge_count();
    if m > cap {
        return Err(Error::EnumerationCap { edges: m, cap });
    }
    let n = graph.vertex_count();
    let edges = graph.edges();
    let mut out_deg = vec![0u32; n];
    let mut total_sinks: u64 = 0;
    let mut with_sink: u64 = 0;
    for mask in 0u64..(1u64 << m) {
        out_deg.fill(0);
        for (i, &(u, v)) in edges.iter().enumerate() {
            let from = if (mask >> i) & 1 == 1 { v } else { u };
            out_deg[from as usize] += 1;
        }
        let sinks = out_deg.iter().filter(|&&d| d == 0).count() as u64;
        total_sinks += sinks;
        with_sink += u64::from(sinks > 0);
    }
    let denom = BigInt::one() << m;
    Ok(ExactStats {
        expected_sinks: BigRational::new(total_sinks.into(), denom.clone()),
        prob_positive: BigRational::new(with_sink.into(), denom),
        orientation_count: BigUint::one() << m,
    })
}

/// All maximal independent sets, each returned in ascending vertex order.
///
/// Every returned set is checked to be realizable as a sink set: orienting
/// each incident edge toward the set makes all of its members sinks.
pub fn maximal_independent_sets(graph: &Graph) -> Result<Vec<Vec<u32>>> {
    let n = graph.vertex_count();
    if n > INDEPENDENT_SET_VERTEX_CAP {
        return Err(Error::SizeCap {
            what: "vertex set",
            size: n,
            cap: INDEPENDENT_SET_VERTEX_CAP,
        });
    }
    let mut adj = vec![0u64; n];
    for &(u, v) in graph.edges() {
        adj[u as usize] |= 1 << v;
        adj[v as usize] |= 1 << u;
    }
    let mut result = Vec::new();
    for mask in 0u64..(1u64 << n) {
        let independent = (0..n).all(|v| mask >> v & 1 == 0 || adj[v] & mask == 0);
        if !independent {
            continue;
        }
        let maximal = (0..n).all(|v| mask >> v & 1 == 1 || adj[v] & mask != 0);
        if !maximal {
            continue;
        }
        let set: Vec<u32> = (0..n as u32).filter(|&v| mask >> v & 1 == 1).collect();
        let o = Orientation::from_coins(graph, |i| {
            let (u, _) = graph.edge(i);
            // Arc points at whichever endpoint is in the set; either way on
            // untouched edges.
            mask >> u & 1 == 1
        });
        let s = sinks(&o);
        debug_assert!(
            set.iter().all(|&v| s.contains(v)),
            "independent set not realizable as sinks"
        );
        result.push(set);
    }
    Ok(result)
}
