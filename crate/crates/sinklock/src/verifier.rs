//! Order families, the priority digraph, and trace verification.
//!
//! The correctness story for every engine reduces to one discipline: a
//! family of partial orders, one per resource class, *drives* a run when
//! (1) each grant goes to a process maximal among the processes still
//! requesting that class, and (2) in every down-set of a class order the
//! maximal elements together demand at most the class capacity. A family
//! whose per-class relations union to an acyclic priority digraph and
//! satisfies (2) under condition-(1) scheduling can never deadlock; a cycle
//! in that digraph is exactly a potential hold-and-wait loop.
//!
//! Orientation runs are driven by their *retrospective* family (for each
//! edge, the endpoint granted later sits below the one granted earlier),
//! which is acyclic by construction for completed runs. The classical
//! engine re-derives, at every step, a linear priority (most-progressed
//! process first; see [`classical_linear_order_rgm`]) whose restrictions to
//! each class drive the run. This module checks all of it from traces, and
//! includes an exhaustive oracle that walks every condition-(1) schedule of
//! a small workload looking for stuck states.
//!
//! Representation: a [`ClassOrder`] keeps its ground set sorted and the
//! strict relation as transitively closed bitmasks (ground capped at 64);
//! down-set enumeration is additionally capped at 20 ground elements.

use std::collections::{BTreeMap, BTreeSet, HashSet};

use serde::{Deserialize, Serialize};

use crate::coins::CoinSchedule;
use crate::graph::Graph;
use crate::orientation::Orientation;
use crate::rgm::ResourceModel;
use crate::trace::{Trace, TraceEvent};
use crate::{Error, Result};

/// Ground-set ceiling imposed by the bitmask representation.
pub const ORDER_GROUND_CAP: usize = 64;

/// Ground-set ceiling for down-set enumeration (2^20 subsets).
pub const IDEAL_GROUND_CAP: usize = 20;

/// Process ceiling for the exhaustive completion oracle.
pub const ORACLE_PROCESS_CAP: usize = 32;

/// A strict partial order on a small ground set of processes, attached to
/// one resource class.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(into = "ClassOrderRepr", try_from = "ClassOrderRepr")]
pub struct ClassOrder {
    class_id: u32,
    /// Sorted, deduplicated process ids.
    ground: Vec<u32>,
    /// `below[i]`: bitmask of ground indices strictly below element i,
    /// transitively closed.
    below: Vec<u64>,
}

/// Wire form: the covering pairs (transitive reduction) instead of the
/// closed relation.
#[derive(Clone, Debug, Serialize, Deserialize)]
struct ClassOrderRepr {
    class_id: u32,
    ground: Vec<u32>,
    covers: Vec<(u32, u32)>,
}

impl ClassOrder {
    /// Builds the order generated by `relations`, each pair `(a, b)` read as
    /// `a` strictly below `b`. Rejects anything that closes into a cycle.
    pub fn new(class_id: u32, mut ground: Vec<u32>, relations: &[(u32, u32)]) -> Result<ClassOrder> {
        ground.sort_unstable();
        ground.dedup();
        let k = ground.len();
        if k > ORDER_GROUND_CAP {
            return Err(Error::SizeCap {
                what: "order ground set",
                size: k,
                cap: ORDER_GROUND_CAP,
            });
        }
        let index = |p: u32| -> Result<usize> {
            ground
                .binary_search(&p)
                .map_err(|_| Error::InvalidParameter(format!("process {p} not in ground set")))
        };
        let mut below = vec![0u64; k];
        for &(a, b) in relations {
            if a == b {
                return Err(Error::InvalidParameter(format!("reflexive relation on {a}")));
            }
            below[index(b)?] |= 1 << index(a)?;
        }
        // Warshall closure over ground indices.
        for mid in 0..k {
            for i in 0..k {
                if below[i] >> mid & 1 == 1 {
                    below[i] |= below[mid];
                }
            }
        }
        for (i, &mask) in below.iter().enumerate() {
            if mask >> i & 1 == 1 {
                return Err(Error::InvalidParameter(format!(
                    "relations for class {class_id} cycle through process {}",
                    ground[i]
                )));
            }
        }
        Ok(ClassOrder { class_id, ground, below })
    }

    /// The linear order listing `ranked` from bottom to top.
    pub fn linear(class_id: u32, ranked: &[u32]) -> Result<ClassOrder> {
        let relations: Vec<(u32, u32)> = ranked.windows(2).map(|w| (w[0], w[1])).collect();
        ClassOrder::new(class_id, ranked.to_vec(), &relations)
    }

    pub fn class_id(&self) -> u32 {
        self.class_id
    }

    pub fn ground(&self) -> &[u32] {
        &self.ground
    }

    fn index_of(&self, p: u32) -> Option<usize> {
        self.ground.binary_search(&p).ok()
    }

    /// Strict comparison; false whenever either side is outside the ground.
    pub fn less(&self, a: u32, b: u32) -> bool {
        match (self.index_of(a), self.index_of(b)) {
            (Some(ai), Some(bi)) => self.below[bi] >> ai & 1 == 1,
            _ => false,
        }
    }

    /// True when nothing in `others` sits strictly above `p`.
    pub fn is_maximal_among<'a>(&self, p: u32, others: impl IntoIterator<Item = &'a u32>) -> bool {
        others.into_iter().all(|&q| q == p || !self.less(p, q))
    }

    /// All strict relations `(a, b)` with `a` below `b`, transitively closed.
    pub fn relation_arcs(&self) -> Vec<(u32, u32)> {
        let mut arcs = Vec::new();
        for (i, &mask) in self.below.iter().enumerate() {
            for j in 0..self.ground.len() {
                if mask >> j & 1 == 1 {
                    arcs.push((self.ground[j], self.ground[i]));
                }
            }
        }
        arcs
    }

    /// Covering pairs: the transitive reduction of the relation.
    pub fn covers(&self) -> Vec<(u32, u32)> {
        let k = self.ground.len();
        let mut covers = Vec::new();
        for i in 0..k {
            for a in 0..k {
                if self.below[i] >> a & 1 != 1 {
                    continue;
                }
                let skipped = (0..k)
                    .any(|c| self.below[i] >> c & 1 == 1 && self.below[c] >> a & 1 == 1);
                if !skipped {
                    covers.push((self.ground[a], self.ground[i]));
                }
            }
        }
        covers
    }

    fn union_below(&self, set: u64) -> u64 {
        let mut acc = 0;
        for i in 0..self.ground.len() {
            if set >> i & 1 == 1 {
                acc |= self.below[i];
            }
        }
        acc
    }

    /// Whether `set` (a ground-index mask) is a down-set.
    pub fn is_ideal(&self, set: u64) -> bool {
        self.union_below(set) & !set == 0
    }

    /// Maximal elements of `set`, as a ground-index mask: members of `set`
    /// with nothing in `set` above them are exactly `set` minus everything
    /// below some member.
    pub fn maxima_mask(&self, set: u64) -> u64 {
        set & !self.union_below(set)
    }

    /// Every down-set, as ground-index masks.
    pub fn ideal_masks(&self) -> Result<Vec<u64>> {
        let k = self.ground.len();
        if k > IDEAL_GROUND_CAP {
            return Err(Error::SizeCap {
                what: "order ground set",
                size: k,
                cap: IDEAL_GROUND_CAP,
            });
        }
        Ok((0u64..1 << k).filter(|&s| self.is_ideal(s)).collect())
    }

    fn mask_to_processes(&self, mask: u64) -> Vec<u32> {
        (0..self.ground.len())
            .filter(|&i| mask >> i & 1 == 1)
            .map(|i| self.ground[i])
            .collect()
    }
}

impl From<ClassOrder> for ClassOrderRepr {
    fn from(order: ClassOrder) -> ClassOrderRepr {
        ClassOrderRepr {
            class_id: order.class_id,
            covers: order.covers(),
            ground: order.ground,
        }
    }
}

impl TryFrom<ClassOrderRepr> for ClassOrder {
    type Error = Error;

    fn try_from(repr: ClassOrderRepr) -> Result<ClassOrder> {
        ClassOrder::new(repr.class_id, repr.ground, &repr.covers)
    }
}

/// One order per class; classes without an entry are treated as antichains.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct OrderFamily {
    pub orders: Vec<ClassOrder>,
}

impl OrderFamily {
    pub fn new(orders: Vec<ClassOrder>) -> OrderFamily {
        OrderFamily { orders }
    }

    pub fn order_for(&self, class: u32) -> Option<&ClassOrder> {
        self.orders.iter().find(|o| o.class_id == class)
    }

    /// Union of all class relations, deduplicated: arc `(a, b)` when `a` is
    /// below `b` in some class.
    pub fn priority_arcs(&self) -> Vec<(u32, u32)> {
        let set: BTreeSet<(u32, u32)> = self
            .orders
            .iter()
            .flat_map(|o| o.relation_arcs())
            .collect();
        set.into_iter().collect()
    }
}

/// Verdict of a cycle search, with a witness when one exists.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "verdict", rename_all = "snake_case")]
pub enum Acyclicity {
    Acyclic,
    /// `cycle[i]` has an arc to `cycle[i + 1]`, and the last entry back to
    /// the first.
    Cyclic { cycle: Vec<u32> },
}

impl Acyclicity {
    pub fn is_acyclic(&self) -> bool {
        matches!(self, Acyclicity::Acyclic)
    }
}

/// Depth-first cycle search over arcs on vertices `0..n`.
pub fn check_acyclic(n: usize, arcs: &[(u32, u32)]) -> Acyclicity {
    let mut succ = vec![Vec::new(); n];
    for &(a, b) in arcs {
        succ[a as usize].push(b);
    }
    // 0 unvisited, 1 on the current path, 2 finished.
    let mut color = vec![0u8; n];
    for start in 0..n {
        if color[start] != 0 {
            continue;
        }
        let mut stack: Vec<(u32, usize)> = vec![(start as u32, 0)];
        color[start] = 1;
        while let Some(top) = stack.last_mut() {
            let (v, idx) = (top.0, top.1);
            if idx == succ[v as usize].len() {
                color[v as usize] = 2;
                stack.pop();
                continue;
            }
            top.1 += 1;
            let w = succ[v as usize][idx];
            match color[w as usize] {
                0 => {
                    color[w as usize] = 1;
                    stack.push((w, 0));
                }
                1 => {
                    let pos = stack.iter().position(|&(x, _)| x == w).unwrap();
                    return Acyclicity::Cyclic {
                        cycle: stack[pos..].iter().map(|&(x, _)| x).collect(),
                    };
                }
                _ => {}
            }
        }
    }
    Acyclicity::Acyclic
}

/// Cycle search over a family's priority digraph.
pub fn family_acyclicity(family: &OrderFamily) -> Acyclicity {
    let arcs = family.priority_arcs();
    let n = family
        .orders
        .iter()
        .flat_map(|o| o.ground.iter())
        .max()
        .map_or(0, |&v| v as usize + 1);
    check_acyclic(n, &arcs)
}

/// The per-round family induced by an orientation: each edge class is the
/// two-element chain with the arc head (the non-sink side pointing in) on
/// top. Its priority digraph *is* the orientation, so the digraph is
/// acyclic exactly when the orientation is.
pub fn orientation_as_order_family(orientation: &Orientation) -> OrderFamily {
    let orders = orientation
        .arcs()
        .enumerate()
        .map(|(i, (from, to))| {
            ClassOrder::linear(i as u32, &[from, to]).expect("two distinct endpoints")
        })
        .collect();
    OrderFamily::new(orders)
}

/// The grant-order family of a trace: for each edge, the endpoint granted
/// later sits below the one granted earlier (a survivor re-contends, so the
/// earlier grant had priority). Endpoints never granted sit below granted
/// ones; edges with neither endpoint granted stay unordered.
pub fn retrospective_family(graph: &Graph, trace: &Trace) -> Result<OrderFamily> {
    let mut grant_round: Vec<Option<u64>> = vec![None; graph.vertex_count()];
    for event in &trace.events {
        if let TraceEvent::Granted { round, process, .. } = *event {
            grant_round[process as usize] = Some(round);
        }
    }
    let mut orders = Vec::new();
    for (i, &(u, v)) in graph.edges().iter().enumerate() {
        let chain: &[u32] = match (grant_round[u as usize], grant_round[v as usize]) {
            (Some(tu), Some(tv)) if tu < tv => &[v, u],
            (Some(tu), Some(tv)) if tv < tu => &[u, v],
            (Some(_), Some(_)) => {
                return Err(Error::Protocol(format!(
                    "adjacent processes {u} and {v} granted in the same round"
                )));
            }
            (Some(_), None) => &[v, u],
            (None, Some(_)) => &[u, v],
            (None, None) => &[u, v][..0],
        };
        if chain.is_empty() {
            orders.push(ClassOrder::new(i as u32, vec![u, v], &[])?);
        } else {
            orders.push(ClassOrder::linear(i as u32, chain)?);
        }
    }
    Ok(OrderFamily::new(orders))
}

/// A grant that went to a non-maximal requester.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GrantViolation {
    pub round: u64,
    pub process: u32,
    pub class: u32,
    /// A still-requesting process sitting strictly above the grantee.
    pub dominated_by: u32,
}

/// A down-set whose maxima jointly demand more than the class offers.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CapacityViolation {
    pub class: u32,
    pub ideal: Vec<u32>,
    pub maxima: Vec<u32>,
    pub demand: u64,
    pub capacity: u32,
}

/// Outcome of the two driven-by conditions.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct DrivenByReport {
    pub grant_violations: Vec<GrantViolation>,
    pub capacity_violations: Vec<CapacityViolation>,
}

impl DrivenByReport {
    pub fn is_clean(&self) -> bool {
        self.grant_violations.is_empty() && self.capacity_violations.is_empty()
    }
}

/// Checks condition (2): every down-set's maxima demand at most the
/// capacity, taking demands and capacities from the callbacks.
pub fn check_ideal_capacity(
    family: &OrderFamily,
    capacity: impl Fn(u32) -> u32,
    demand: impl Fn(u32, u32) -> u32,
) -> Result<Vec<CapacityViolation>> {
    let mut violations = Vec::new();
    for order in &family.orders {
        let cap = capacity(order.class_id);
        for mask in order.ideal_masks()? {
            let maxima = order.maxima_mask(mask);
            let total: u64 = order
                .mask_to_processes(maxima)
                .iter()
                .map(|&p| u64::from(demand(p, order.class_id)))
                .sum();
            if total > u64::from(cap) {
                violations.push(CapacityViolation {
                    class: order.class_id,
                    ideal: order.mask_to_processes(mask),
                    maxima: order.mask_to_processes(maxima),
                    demand: total,
                    capacity: cap,
                });
            }
        }
    }
    Ok(violations)
}

/// Replays a trace against a fixed family, collecting condition-(1)
/// violations. A grant with no class grabs everything the process still
/// wants (edge-backed runs); a classed grant takes the stated units.
/// Grants inconsistent with the model (over capacity, beyond request,
/// after termination) abort with [`Error::Trace`].
fn replay_grants(
    family: &OrderFamily,
    base: &ResourceModel,
    trace: &Trace,
) -> Result<Vec<GrantViolation>> {
    let mut model = base.clone();
    let mut done = vec![false; model.process_count()];
    let mut violations = Vec::new();
    for event in &trace.events {
        match *event {
            TraceEvent::Granted { round, process, class, units } => {
                let p = process as usize;
                if p >= model.process_count() {
                    return Err(Error::Trace(format!("grant to unknown process {process}")));
                }
                if done[p] {
                    return Err(Error::Trace(format!(
                        "round {round}: grant to terminated process {process}"
                    )));
                }
                let draws: Vec<(usize, u32)> = match class {
                    Some(r) => {
                        let r = r as usize;
                        if r >= model.class_count() {
                            return Err(Error::Trace(format!("grant of unknown class {r}")));
                        }
                        vec![(r, units.unwrap_or_else(|| model.outstanding(p, r)))]
                    }
                    None => (0..model.class_count())
                        .filter(|&r| model.outstanding(p, r) > 0)
                        .map(|r| (r, model.outstanding(p, r)))
                        .collect(),
                };
                for (r, u) in draws {
                    if let Some(order) = family.order_for(r as u32) {
                        let dominating = (0..model.process_count() as u32).find(|&q| {
                            q != process
                                && !done[q as usize]
                                && model.outstanding(q as usize, r) > 0
                                && order.less(process, q)
                        });
                        if let Some(q) = dominating {
                            violations.push(GrantViolation {
                                round,
                                process,
                                class: r as u32,
                                dominated_by: q,
                            });
                        }
                    }
                    model
                        .grant(p, r, u)
                        .map_err(|e| Error::Trace(format!("round {round}: {e}")))?;
                }
            }
            TraceEvent::Released { process, .. } => {
                model.release_all(process as usize);
            }
            TraceEvent::Terminated { process, .. } => {
                done[process as usize] = true;
            }
            _ => {}
        }
    }
    Ok(violations)
}

/// Runs both driven-by conditions for a fixed family against a trace over
/// the workload `base` describes.
pub fn check_driven_by(
    family: &OrderFamily,
    base: &ResourceModel,
    trace: &Trace,
) -> Result<DrivenByReport> {
    let grant_violations = replay_grants(family, base, trace)?;
    let capacity_violations = check_ideal_capacity(
        family,
        |r| base.capacity(r as usize),
        |p, r| base.requested(p as usize, r as usize),
    )?;
    Ok(DrivenByReport {
        grant_violations,
        capacity_violations,
    })
}

/// A structural defect found while replaying an orientation trace.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum StructuralViolation {
    /// An edge's recorded direction disagrees with the seeded coin.
    CoinMismatch { round: u64, edge: u32 },
    /// An edge with a departed endpoint was oriented.
    OrientedDeadEdge { round: u64, edge: u32 },
    /// A live edge was left unoriented.
    MissingOrientation { round: u64, edge: u32 },
    /// A grant went to a process with an outgoing arc (or a dead one).
    GrantedNonSink { round: u64, process: u32 },
    /// A sink of the round was not granted.
    UngrantedSink { round: u64, process: u32 },
    /// Grant, release, and termination stopped being one atomic round step.
    LifecycleBroken {
        round: u64,
        process: u32,
        missing: String,
    },
    /// A round's recorded live count contradicts the replay.
    RemainingMismatch { round: u64, claimed: u32, actual: u32 },
    /// Header completion flag contradicts the events.
    CompletionMismatch { claimed: bool, actual: bool },
    /// Header round count contradicts the events.
    RoundCountMismatch { claimed: u64, actual: u64 },
}

/// Full verification of an orientation-engine trace (central or
/// message-passing; both leave the same round skeleton).
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct OrientationReport {
    pub rounds: u64,
    pub completed: bool,
    pub structural: Vec<StructuralViolation>,
    /// Driven-by outcome for the retrospective family. Skipped (None) when
    /// the run is incomplete or structurally broken.
    pub driven_by: Option<DrivenByReport>,
    /// Acyclicity of the retrospective family's priority digraph; skipped
    /// alongside `driven_by`.
    pub acyclicity: Option<Acyclicity>,
}

impl OrientationReport {
    pub fn is_clean(&self) -> bool {
        self.structural.is_empty()
            && self.driven_by.as_ref().is_none_or(|d| d.is_clean())
            && self.acyclicity.as_ref().is_none_or(|a| a.is_acyclic())
    }
}

/// Replays an orientation trace from its header: re-derives every round's
/// coins, checks the recorded arcs against them, recomputes the sink set,
/// and polices the grab-release-leave lifecycle. On completed, structurally
/// clean runs it then builds the retrospective family and checks both
/// driven-by conditions and priority-digraph acyclicity.
pub fn verify_orientation_trace(trace: &Trace) -> Result<OrientationReport> {
    let graph = trace.graph()?;
    let n = graph.vertex_count();
    let schedule = CoinSchedule::new(trace.header.seed);
    let views = trace.rounds()?;
    let mut alive = vec![true; n];
    let mut structural = Vec::new();

    for view in &views {
        let round = view.round;
        let live_count = alive.iter().filter(|&&a| a).count() as u32;
        if view.remaining != live_count {
            structural.push(StructuralViolation::RemainingMismatch {
                round,
                claimed: view.remaining,
                actual: live_count,
            });
        }
        let mut recorded: BTreeMap<u32, (u32, u32)> = BTreeMap::new();
        for &(edge, from, to) in &view.arcs {
            if recorded.insert(edge, (from, to)).is_some() {
                return Err(Error::Trace(format!("round {round}: edge {edge} oriented twice")));
            }
        }
        let mut out_deg = vec![0u32; n];
        for (i, &(u, v)) in graph.edges().iter().enumerate() {
            let live = alive[u as usize] && alive[v as usize];
            match (live, recorded.remove(&(i as u32))) {
                (true, Some((from, to))) => {
                    let expected = if schedule.coin(round, i) { (v, u) } else { (u, v) };
                    if (from, to) == expected {
                        out_deg[from as usize] += 1;
                    } else {
                        structural.push(StructuralViolation::CoinMismatch {
                            round,
                            edge: i as u32,
                        });
                        // Count the claimed arc so sink accounting follows
                        // the trace's own story.
                        out_deg[from as usize] += 1;
                    }
                }
                (true, None) => {
                    structural.push(StructuralViolation::MissingOrientation {
                        round,
                        edge: i as u32,
                    });
                }
                (false, Some(_)) => {
                    structural.push(StructuralViolation::OrientedDeadEdge {
                        round,
                        edge: i as u32,
                    });
                }
                (false, None) => {}
            }
        }
        if let Some((&edge, _)) = recorded.iter().next() {
            return Err(Error::Trace(format!(
                "round {round}: orientation for unknown edge {edge}"
            )));
        }

        let sinks: BTreeSet<u32> = (0..n as u32)
            .filter(|&v| alive[v as usize] && out_deg[v as usize] == 0)
            .collect();
        let granted: BTreeSet<u32> = view.granted.iter().copied().collect();
        for &p in granted.difference(&sinks) {
            structural.push(StructuralViolation::GrantedNonSink { round, process: p });
        }
        for &p in sinks.difference(&granted) {
            structural.push(StructuralViolation::UngrantedSink { round, process: p });
        }

        let released: BTreeSet<u32> = view.released.iter().copied().collect();
        let terminated: BTreeSet<u32> = view.terminated.iter().copied().collect();
        for &p in &granted {
            if !released.contains(&p) {
                structural.push(StructuralViolation::LifecycleBroken {
                    round,
                    process: p,
                    missing: "released".into(),
                });
            }
            if !terminated.contains(&p) {
                structural.push(StructuralViolation::LifecycleBroken {
                    round,
                    process: p,
                    missing: "terminated".into(),
                });
            }
        }
        for &p in released.union(&terminated) {
            if !granted.contains(&p) {
                structural.push(StructuralViolation::LifecycleBroken {
                    round,
                    process: p,
                    missing: "grant".into(),
                });
            }
        }
        for &p in &terminated {
            if alive[p as usize] {
                alive[p as usize] = false;
            } else {
                return Err(Error::Trace(format!(
                    "round {round}: process {p} terminated twice"
                )));
            }
        }
    }

    let actual_completed = alive.iter().all(|&a| !a);
    if trace.header.completed != actual_completed {
        structural.push(StructuralViolation::CompletionMismatch {
            claimed: trace.header.completed,
            actual: actual_completed,
        });
    }
    let actual_rounds = views.last().map_or(0, |v| v.round);
    if trace.header.rounds_used != actual_rounds {
        structural.push(StructuralViolation::RoundCountMismatch {
            claimed: trace.header.rounds_used,
            actual: actual_rounds,
        });
    }

    let (driven_by, acyclicity) = if structural.is_empty() && actual_completed {
        let family = retrospective_family(&graph, trace)?;
        let report = check_driven_by(&family, &ResourceModel::from_graph(&graph), trace)?;
        let acyclicity = family_acyclicity(&family);
        (Some(report), Some(acyclicity))
    } else {
        (None, None)
    };

    Ok(OrientationReport {
        rounds: actual_rounds,
        completed: actual_completed,
        structural,
        driven_by,
        acyclicity,
    })
}

/// Highest-indexed class `p` still wants, or None when satisfied. The
/// classical engine acquires classes top-down, so this is the class `p` is
/// queued on.
fn station(model: &ResourceModel, p: usize) -> Option<u32> {
    (0..model.class_count())
        .rev()
        .find(|&r| model.outstanding(p, r) > 0)
        .map(|r| r as u32)
}

/// Requesters of `class` listed bottom-to-top by the classical priority:
/// lower station outranks higher station (closeness to finishing wins),
/// higher id breaking ties.
fn ranked_requesters(model: &ResourceModel, done: &[bool], class: usize) -> Vec<u32> {
    let mut requesters: Vec<u32> = (0..model.process_count())
        .filter(|&q| !done[q] && model.outstanding(q, class) > 0)
        .map(|q| q as u32)
        .collect();
    requesters.sort_by(|&a, &b| {
        let sa = station(model, a as usize).expect("requesters have a station");
        let sb = station(model, b as usize).expect("requesters have a station");
        sb.cmp(&sa).then(a.cmp(&b))
    });
    requesters
}

/// Priority snapshot: the linear order on each class's current requesters.
fn priority_snapshot(model: &ResourceModel, done: &[bool]) -> Result<OrderFamily> {
    let mut orders = Vec::new();
    for r in 0..model.class_count() {
        let ranked = ranked_requesters(model, done, r);
        if !ranked.is_empty() {
            orders.push(ClassOrder::linear(r as u32, &ranked)?);
        }
    }
    Ok(OrderFamily::new(orders))
}

/// A finished classical-engine run.
#[derive(Clone, Debug, PartialEq)]
pub struct ClassicalRun {
    pub trace: Trace,
    pub completed: bool,
    pub steps_used: u64,
}

/// Runs the classical linear-priority engine over an explicit workload.
///
/// Processes acquire their classes in descending class order, one full
/// class per step. A step grants to some process that is maximal (by the
/// priority of [`ranked_requesters`]) among the requesters of its own
/// station and whose residual fits the free capacity; the seed picks among
/// the simultaneously eligible grants. The process holding the globally
/// lowest station is always eligible, so the engine never sticks.
pub fn classical_linear_order_rgm(
    workload: &crate::trace::WorkloadConfig,
    seed: u64,
) -> Result<ClassicalRun> {
    use rand::{Rng, SeedableRng};
    let mut model = ResourceModel::from_workload(workload)?;
    let n = model.process_count();
    let mut rng = rand_chacha::ChaCha12Rng::seed_from_u64(seed);
    let mut done: Vec<bool> = (0..n).map(|p| model.is_satisfied(p)).collect();
    let mut events = Vec::new();
    let mut step = 0u64;
    let step_budget: u64 = (0..n)
        .map(|p| (0..model.class_count()).filter(|&r| model.requested(p, r) > 0).count() as u64)
        .sum();

    for _ in 0..step_budget {
        let remaining = done.iter().filter(|&&d| !d).count() as u32;
        if remaining == 0 {
            break;
        }
        let mut eligible = Vec::new();
        for p in 0..n {
            if done[p] {
                continue;
            }
            let r = station(&model, p).expect("live process wants something") as usize;
            let ranked = ranked_requesters(&model, &done, r);
            let maximal = *ranked.last().expect("p itself requests r");
            if maximal == p as u32 && model.available(r) >= model.outstanding(p, r) {
                eligible.push((p as u32, r as u32));
            }
        }
        debug_assert!(!eligible.is_empty(), "classical engine stuck");
        if eligible.is_empty() {
            break;
        }
        let (p, r) = eligible[rng.gen_range(0..eligible.len())];
        step += 1;
        events.push(TraceEvent::RoundStart { round: step, remaining });
        let units = model.outstanding(p as usize, r as usize);
        events.push(TraceEvent::Granted {
            round: step,
            process: p,
            class: Some(r),
            units: Some(units),
        });
        model
            .grant(p as usize, r as usize, units)
            .expect("eligible grant fits");
        if model.is_satisfied(p as usize) {
            events.push(TraceEvent::Released { round: step, process: p });
            events.push(TraceEvent::Terminated { round: step, process: p });
            model.release_all(p as usize);
            done[p as usize] = true;
        }
    }

    let completed = done.iter().all(|&d| d);
    let header = crate::trace::TraceHeader {
        engine: crate::trace::EngineKind::Classical,
        n,
        edges: Vec::new(),
        class_spec: None,
        seed,
        max_rounds: None,
        delay: None,
        workload: Some(workload.clone()),
        completed,
        rounds_used: step,
    };
    Ok(ClassicalRun {
        trace: Trace { header, events },
        completed,
        steps_used: step,
    })
}

/// Verification result for a classical trace.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ClassicalReport {
    pub steps: u64,
    pub completed: bool,
    pub driven_by: DrivenByReport,
    /// Whether every per-step priority snapshot had an acyclic digraph
    /// (always true for genuine linear snapshots).
    pub snapshots_acyclic: bool,
}

impl ClassicalReport {
    pub fn is_clean(&self) -> bool {
        self.completed && self.driven_by.is_clean() && self.snapshots_acyclic
    }
}

/// Replays a classical trace against the workload in its header. At every
/// step the verifier re-derives the priority snapshot from the replayed
/// state — no engine internals are trusted — and checks the grant against
/// it (condition 1) plus the snapshot's down-set capacity (condition 2).
/// Bookkeeping that cannot be reconciled at all aborts with
/// [`Error::Trace`].
pub fn verify_classical_trace(trace: &Trace) -> Result<ClassicalReport> {
    let workload = trace
        .header
        .workload
        .as_ref()
        .ok_or_else(|| Error::Trace("classical trace lacks a workload".into()))?;
    let mut model = ResourceModel::from_workload(workload)?;
    let n = model.process_count();
    let mut done: Vec<bool> = (0..n).map(|p| model.is_satisfied(p)).collect();
    let mut report = ClassicalReport {
        steps: 0,
        completed: false,
        driven_by: DrivenByReport::default(),
        snapshots_acyclic: true,
    };

    for view in trace.rounds()? {
        report.steps += 1;
        if view.granted.len() != 1 {
            return Err(Error::Trace(format!(
                "step {}: expected exactly one grant, found {}",
                view.round,
                view.granted.len()
            )));
        }
        let (process, class, units) = view_grant(trace, view.round)?;
        let p = process as usize;
        if p >= n || done[p] {
            return Err(Error::Trace(format!(
                "step {}: grant to unavailable process {process}",
                view.round
            )));
        }
        let r = class as usize;
        if r >= model.class_count() {
            return Err(Error::Trace(format!("step {}: unknown class {class}", view.round)));
        }

        let snapshot = priority_snapshot(&model, &done)?;
        if let Some(order) = snapshot.order_for(class) {
            let dominating = order
                .ground()
                .iter()
                .find(|&&q| q != process && order.less(process, q));
            if let Some(&q) = dominating {
                report.driven_by.grant_violations.push(GrantViolation {
                    round: view.round,
                    process,
                    class,
                    dominated_by: q,
                });
            }
        }
        let mut capacity_violations = check_ideal_capacity(
            &snapshot,
            |c| model.capacity(c as usize),
            |q, c| {
                if done[q as usize] {
                    0
                } else {
                    model.outstanding(q as usize, c as usize)
                }
            },
        )?;
        report.driven_by.capacity_violations.append(&mut capacity_violations);
        if !family_acyclicity(&snapshot).is_acyclic() {
            report.snapshots_acyclic = false;
        }

        model
            .grant(p, r, units)
            .map_err(|e| Error::Trace(format!("step {}: {e}", view.round)))?;
        let satisfied = model.is_satisfied(p);
        let released = view.released.contains(&process);
        let terminated = view.terminated.contains(&process);
        if satisfied != released || satisfied != terminated {
            return Err(Error::Trace(format!(
                "step {}: release/termination disagrees with satisfaction",
                view.round
            )));
        }
        if satisfied {
            model.release_all(p);
            done[p] = true;
        }
    }

    report.completed = done.iter().all(|&d| d);
    Ok(report)
}

fn view_grant(trace: &Trace, round: u64) -> Result<(u32, u32, u32)> {
    for event in &trace.events {
        if let TraceEvent::Granted { round: r, process, class, units } = *event {
            if r == round {
                let class = class
                    .ok_or_else(|| Error::Trace(format!("step {round}: grant without class")))?;
                let units = units
                    .ok_or_else(|| Error::Trace(format!("step {round}: grant without units")))?;
                return Ok((process, class, units));
            }
        }
    }
    Err(Error::Trace(format!("step {round}: no grant event")))
}

/// A reachable state in which live processes exist but no grant is legal.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct StuckState {
    pub done: Vec<u32>,
    /// `(process, class, units)` currently held.
    pub holdings: Vec<(u32, u32, u32)>,
    pub blocked: Vec<u32>,
}

/// Outcome of the exhaustive schedule search.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CompletionCheck {
    pub states_explored: usize,
    pub stuck: Option<StuckState>,
}

/// Walks *every* schedule of atomic full-class grants that respects
/// condition (1) for `family`, releasing processes the moment they are
/// satisfied. Returns the first stuck state found, or None when all
/// schedules drain the workload. States are memoized; exceeding `state_cap`
/// distinct states errs rather than silently truncating.
pub fn exhaustive_completion_check(
    base: &ResourceModel,
    family: &OrderFamily,
    state_cap: usize,
) -> Result<CompletionCheck> {
    let n = base.process_count();
    if n > ORACLE_PROCESS_CAP {
        return Err(Error::SizeCap {
            what: "oracle process set",
            size: n,
            cap: ORACLE_PROCESS_CAP,
        });
    }

    // A state is (done mask, holdings); holdings are canonical because the
    // model reports them in (process, class) order.
    let normalize = |model: &mut ResourceModel, done: &mut u32| {
        loop {
            let next = (0..n).find(|&p| *done >> p & 1 == 0 && model.is_satisfied(p));
            match next {
                Some(p) => {
                    model.release_all(p);
                    *done |= 1 << p;
                }
                None => break,
            }
        }
    };

    let legal_moves = |model: &ResourceModel, done: u32| -> Vec<(usize, usize)> {
        let mut moves = Vec::new();
        for p in 0..n {
            if done >> p & 1 == 1 {
                continue;
            }
            for r in 0..model.class_count() {
                let want = model.outstanding(p, r);
                if want == 0 || model.available(r) < want {
                    continue;
                }
                let maximal = match family.order_for(r as u32) {
                    Some(order) => (0..n as u32).all(|q| {
                        q == p as u32
                            || done >> q & 1 == 1
                            || model.outstanding(q as usize, r) == 0
                            || !order.less(p as u32, q)
                    }),
                    None => true,
                };
                if maximal {
                    moves.push((p, r));
                }
            }
        }
        moves
    };

    let mut initial = base.clone();
    let mut initial_done = 0u32;
    normalize(&mut initial, &mut initial_done);

    // Memo key: done mask plus canonical holdings.
    type OracleKey = (u32, Vec<(u32, u32, u32)>);
    let mut seen: HashSet<OracleKey> = HashSet::new();
    let mut stack = vec![(initial, initial_done)];
    seen.insert((initial_done, stack[0].0.holdings()));

    while let Some((model, done)) = stack.pop() {
        if seen.len() > state_cap {
            return Err(Error::SizeCap {
                what: "oracle state space",
                size: seen.len(),
                cap: state_cap,
            });
        }
        let moves = legal_moves(&model, done);
        let live: Vec<u32> = (0..n as u32).filter(|&p| done >> p & 1 == 0).collect();
        if moves.is_empty() {
            if !live.is_empty() {
                return Ok(CompletionCheck {
                    states_explored: seen.len(),
                    stuck: Some(StuckState {
                        done: (0..n as u32).filter(|&p| done >> p & 1 == 1).collect(),
                        holdings: model.holdings(),
                        blocked: live,
                    }),
                });
            }
            continue;
        }
        for (p, r) in moves {
            let mut next = model.clone();
            let mut next_done = done;
            let units = next.outstanding(p, r);
            next.grant(p, r, units).expect("legal move fits");
            normalize(&mut next, &mut next_done);
            if seen.insert((next_done, next.holdings())) {
                stack.push((next, next_done));
            }
        }
    }

    Ok(CompletionCheck {
        states_explored: seen.len(),
        stuck: None,
    })
}
