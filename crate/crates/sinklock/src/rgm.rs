//! Resource-granting model and the central coin-flipping engine.
//!
//! A workload is a set of resource classes with capacities and, per process,
//! a request vector. A conflict graph induces the canonical edge-backed
//! workload: one capacity-1 class per edge, requested once by each endpoint,
//! so two processes conflict exactly when they share an edge. Deadlock is a
//! cycle in the wait-for digraph (who holds what someone else still needs).
//!
//! The central engine runs the randomized protocol with a global scheduler:
//! each round it orients the live edges by fair coins, and every sink grabs
//! all its classes, runs, releases, and leaves. Sinks are independent, so
//! the grab is conflict-free by construction.

use crate::coins::CoinSchedule;
use crate::graph::{Graph, GraphClassSpec};
use crate::trace::{EngineKind, Trace, TraceEvent, TraceHeader, WorkloadConfig};
use crate::{Error, Result};

/// Capacities, requests, and current grants, with the holding invariants
/// (`granted <= requested` per process, totals within capacity) enforced on
/// every mutation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ResourceModel {
    capacities: Vec<u32>,
    requested: Vec<Vec<u32>>,
    granted: Vec<Vec<u32>>,
    in_use: Vec<u32>,
}

impl ResourceModel {
    pub fn new(capacities: Vec<u32>, requested: Vec<Vec<u32>>) -> Result<ResourceModel> {
        let classes = capacities.len();
        for (p, row) in requested.iter().enumerate() {
            if row.len() != classes {
                return Err(Error::InvalidParameter(format!(
                    "process {p} requests {} classes, model has {classes}",
                    row.len()
                )));
            }
            for (r, (&x, &cap)) in row.iter().zip(&capacities).enumerate() {
                if x > cap {
                    return Err(Error::InvalidParameter(format!(
                        "process {p} requests {x} of class {r}, capacity {cap}"
                    )));
                }
            }
        }
        let granted = requested.iter().map(|row| vec![0; row.len()]).collect();
        Ok(ResourceModel {
            in_use: vec![0; classes],
            capacities,
            requested,
            granted,
        })
    }

    pub fn from_workload(config: &WorkloadConfig) -> Result<ResourceModel> {
        ResourceModel::new(config.capacities.clone(), config.requests.clone())
    }

    pub fn to_workload(&self) -> WorkloadConfig {
        WorkloadConfig {
            capacities: self.capacities.clone(),
            requests: self.requested.clone(),
        }
    }

    /// The edge-backed workload of a conflict graph: class `i` is edge `i`
    /// with capacity 1, requested by both endpoints.
    pub fn from_graph(graph: &Graph) -> ResourceModel {
        let m = graph.edge_count();
        let mut requested = vec![vec![0u32; m]; graph.vertex_count()];
        for (i, &(u, v)) in graph.edges().iter().enumerate() {
            requested[u as usize][i] = 1;
            requested[v as usize][i] = 1;
        }
        ResourceModel::new(vec![1; m], requested).expect("edge workload is always valid")
    }

    pub fn process_count(&self) -> usize {
        self.requested.len()
    }

    pub fn class_count(&self) -> usize {
        self.capacities.len()
    }

    pub fn capacity(&self, class: usize) -> u32 {
        self.capacities[class]
    }

    pub fn requested(&self, process: usize, class: usize) -> u32 {
        self.requested[process][class]
    }

    pub fn granted(&self, process: usize, class: usize) -> u32 {
        self.granted[process][class]
    }

    /// Units of `class` still wanted by `process`.
    pub fn outstanding(&self, process: usize, class: usize) -> u32 {
        self.requested[process][class] - self.granted[process][class]
    }

    pub fn available(&self, class: usize) -> u32 {
        self.capacities[class] - self.in_use[class]
    }

    pub fn is_satisfied(&self, process: usize) -> bool {
        self.requested[process]
            .iter()
            .zip(&self.granted[process])
            .all(|(x, g)| x == g)
    }

    /// Every nonzero holding as `(process, class, units)`, in
    /// (process, class) order; a canonical fingerprint of the grant state.
    pub fn holdings(&self) -> Vec<(u32, u32, u32)> {
        let mut held = Vec::new();
        for (p, row) in self.granted.iter().enumerate() {
            for (r, &g) in row.iter().enumerate() {
                if g > 0 {
                    held.push((p as u32, r as u32, g));
                }
            }
        }
        held
    }

    pub fn grant(&mut self, process: usize, class: usize, units: u32) -> Result<()> {
        if units > self.outstanding(process, class) {
            return Err(Error::InvalidParameter(format!(
                "granting {units} of class {class} to process {process}, \
                 outstanding {}",
                self.outstanding(process, class)
            )));
        }
        if units > self.available(class) {
            return Err(Error::InvalidParameter(format!(
                "granting {units} of class {class}, only {} available",
                self.available(class)
            )));
        }
        self.granted[process][class] += units;
        self.in_use[class] += units;
        Ok(())
    }

    /// Frees everything `process` holds, returning `(class, units)` pairs.
    pub fn release_all(&mut self, process: usize) -> Vec<(usize, u32)> {
        let mut freed = Vec::new();
        for (class, g) in self.granted[process].iter_mut().enumerate() {
            if *g > 0 {
                self.in_use[class] -= *g;
                freed.push((class, *g));
                *g = 0;
            }
        }
        freed
    }

    /// Wait-for arcs: `p -> q` when `p` still needs units of a class `q`
    /// currently holds. A directed cycle here is a deadlock.
    pub fn wait_for_arcs(&self) -> Vec<(u32, u32)> {
        let n = self.process_count();
        let mut arcs = Vec::new();
        for p in 0..n {
            for q in 0..n {
                if p == q {
                    continue;
                }
                let waits = (0..self.class_count())
                    .any(|r| self.outstanding(p, r) > 0 && self.granted[q][r] > 0);
                if waits {
                    arcs.push((p as u32, q as u32));
                }
            }
        }
        arcs
    }
}

/// A finished (or cut off) central-engine run.
#[derive(Clone, Debug, PartialEq)]
pub struct SimRun {
    pub trace: Trace,
    pub completed: bool,
    pub rounds_used: u64,
    /// Round in which each process was granted, if it was.
    pub granted_round: Vec<Option<u64>>,
}

/// Round budget used when the caller does not pick one.
pub fn default_max_rounds(n: usize) -> u64 {
    10 * n as u64
}

/// Runs the central engine: rounds are 1-based and use the matching coin
/// schedule round, so any orientation seen here can be replayed with
/// [`crate::orientation::random_orientation_in_round`].
pub fn simulate_central(
    graph: &Graph,
    seed: u64,
    max_rounds: u64,
    class_spec: Option<GraphClassSpec>,
) -> SimRun {
    let n = graph.vertex_count();
    let schedule = CoinSchedule::new(seed);
    let mut alive = vec![true; n];
    let mut remaining = n as u32;
    let mut granted_round = vec![None; n];
    let mut events = Vec::new();
    let mut rounds_used = 0;

    for round in 1..=max_rounds {
        if remaining == 0 {
            break;
        }
        rounds_used = round;
        events.push(TraceEvent::RoundStart { round, remaining });
        let mut out_deg = vec![0u32; n];
        for (i, &(u, v)) in graph.edges().iter().enumerate() {
            if !(alive[u as usize] && alive[v as usize]) {
                continue;
            }
            let (from, to) = if schedule.coin(round, i) { (v, u) } else { (u, v) };
            out_deg[from as usize] += 1;
            events.push(TraceEvent::OrientationFixed {
                round,
                edge: i as u32,
                from,
                to,
            });
        }
        // Sinks of the live subgraph grab, run, release, and leave. They are
        // pairwise non-adjacent, so all grabs in a round are compatible.
        let sinks: Vec<u32> = (0..n as u32)
            .filter(|&v| alive[v as usize] && out_deg[v as usize] == 0)
            .collect();
        for &v in &sinks {
            events.push(TraceEvent::Granted {
                round,
                process: v,
                class: None,
                units: None,
            });
            granted_round[v as usize] = Some(round);
        }
        for &v in &sinks {
            events.push(TraceEvent::Released { round, process: v });
        }
        for &v in &sinks {
            events.push(TraceEvent::Terminated { round, process: v });
            alive[v as usize] = false;
            remaining -= 1;
        }
    }

    let completed = remaining == 0;
    let header = TraceHeader {
        engine: EngineKind::Central,
        n,
        edges: graph.edges().to_vec(),
        class_spec,
        seed,
        max_rounds: Some(max_rounds),
        delay: None,
        workload: None,
        completed,
        rounds_used,
    };
    SimRun {
        trace: Trace { header, events },
        completed,
        rounds_used,
        granted_round,
    }
}
