//! Message-passing realization of the orientation engine.
//!
//! No process sees the whole graph: each one knows only its incident edges
//! and talks to neighbors over per-edge FIFO channels with arbitrary (but
//! finite) delivery delays. The protocol per round, for each live edge:
//!
//! 1. The lower endpoint draws the round's coin on entering the round and
//!    sends it across; both sides read the arc off the shared bit.
//! 2. Once an endpoint knows all of its live arcs it knows its fate. A sink
//!    sends a leave notice on every live edge and departs; on edges where
//!    it is the higher endpoint it still acks afterwards, so acks are never
//!    missing. A survivor acks the coin on each edge where it is the higher
//!    endpoint.
//! 3. The lower endpoint sends the next round's coin only after the current
//!    ack, so at most one coin per edge is ever in flight beyond the
//!    receiver's round, and FIFO makes an ack with no leave ahead of it a
//!    proof the higher neighbor survived.
//!
//! Because coins come from the shared [`CoinSchedule`] keyed by
//! (seed, round, edge) and fate only ever waits on missing knowledge, every
//! round's sink set equals the centralized engine's for the same seed, for
//! any delay law. Each round costs exactly two messages per live edge (coin
//! plus ack) plus one leave per live edge at each departing sink.
//!
//! Representation: virtual time is a u64 tick counter; the event queue is
//! ordered by (delivery tick, send sequence), and per-channel delivery
//! clamps keep FIFO order under random delays.

use std::cmp::Reverse;
use std::collections::{BTreeMap, BinaryHeap};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha12Rng;

use crate::coins::CoinSchedule;
use crate::graph::{Graph, GraphClassSpec};
use crate::trace::{
    DelayDist, DelaySpec, EngineKind, MessageKind, MessageStats, Trace, TraceEvent, TraceHeader,
};
use crate::Result;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
enum Payload {
    Coin { round: u64, bit: bool },
    Ack { round: u64 },
    Leave { round: u64 },
}

impl Payload {
    fn round(&self) -> u64 {
        match *self {
            Payload::Coin { round, .. } | Payload::Ack { round } | Payload::Leave { round } => {
                round
            }
        }
    }

    fn kind(&self) -> MessageKind {
        match self {
            Payload::Coin { .. } => MessageKind::Coin,
            Payload::Ack { .. } => MessageKind::Ack,
            Payload::Leave { .. } => MessageKind::Leave,
        }
    }
}

/// Heap entries order by (delivery tick, send sequence); the sequence both
/// breaks ties deterministically and preserves send order at equal ticks.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
struct QueuedMessage {
    deliver: u64,
    seq: u64,
    to: u32,
    from: u32,
    edge: u32,
    payload: Payload,
    sent: u64,
}

/// One endpoint's view of an incident edge.
#[derive(Clone, Debug)]
struct LocalEdge {
    id: u32,
    peer: u32,
    /// This process is the edge's lower endpoint (it draws the coins).
    lower: bool,
    /// Peer's final round, once its leave notice has been processed; the
    /// edge is live in round k while `k <= gone_after`.
    gone_after: Option<u64>,
    /// This round's coin, drawn locally (lower side) or received.
    coin: Option<bool>,
    /// Early coin for the next round (higher side only; depth one suffices
    /// because coins are ack-gated).
    buffered: Option<bool>,
    /// This round's coin has been acked (lower side only).
    acked: bool,
}

impl LocalEdge {
    fn live_in(&self, round: u64) -> bool {
        self.gone_after.is_none_or(|g| round <= g)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Mode {
    Running { fated: bool },
    /// Granted and departed.
    Left,
    /// Stopped at the round cap without being granted.
    Halted,
}

#[derive(Clone, Debug)]
struct Proc {
    round: u64,
    time: u64,
    mode: Mode,
    /// Sorted by edge id.
    edges: Vec<LocalEdge>,
}

impl Proc {
    fn slot(&self, edge: u32) -> usize {
        self.edges
            .binary_search_by_key(&edge, |e| e.id)
            .expect("message for a non-incident edge")
    }
}

/// A finished message-passing run.
#[derive(Clone, Debug, PartialEq)]
pub struct DistRun {
    pub trace: Trace,
    pub completed: bool,
    pub rounds_used: u64,
    /// Messages actually sent, by kind.
    pub messages: MessageStats,
    /// Virtual tick of the last delivery.
    pub end_time: u64,
    /// Round in which each process was granted, None for survivors.
    pub granted_round: Vec<Option<u64>>,
}

struct DistSim {
    schedule: CoinSchedule,
    max_rounds: u64,
    delay: DelaySpec,
    procs: Vec<Proc>,
    heap: BinaryHeap<Reverse<QueuedMessage>>,
    /// FIFO clamp per directed channel: index `2 * edge + direction`,
    /// direction 0 lower-to-higher.
    chan_clock: Vec<u64>,
    seq: u64,
    rng: ChaCha12Rng,
    stats: MessageStats,
    msg_log: Vec<TraceEvent>,
    grants: Vec<(u64, u32)>,
    granted_round: Vec<Option<u64>>,
    end_time: u64,
}

impl DistSim {
    fn sample_delay(&mut self) -> u64 {
        match self.delay.dist {
            DelayDist::Zero => 0,
            DelayDist::Fixed { value } => value,
            DelayDist::Uniform { min, max } => self.rng.gen_range(min..=max),
        }
    }

    fn send(&mut self, from: u32, edge: u32, to: u32, payload: Payload) {
        let sent = self.procs[from as usize].time;
        let delay = self.sample_delay();
        let dir = usize::from(from > to);
        let chan = 2 * edge as usize + dir;
        let deliver = self.chan_clock[chan].max(sent + delay);
        self.chan_clock[chan] = deliver;
        self.seq += 1;
        match payload.kind() {
            MessageKind::Coin => self.stats.coins += 1,
            MessageKind::Ack => self.stats.acks += 1,
            MessageKind::Leave => self.stats.leaves += 1,
        }
        self.msg_log.push(TraceEvent::Message {
            round: payload.round(),
            edge,
            kind: payload.kind(),
            from,
            to,
            sent,
            delivered: deliver,
        });
        self.heap.push(Reverse(QueuedMessage {
            deliver,
            seq: self.seq,
            to,
            from,
            edge,
            payload,
            sent,
        }));
    }

    /// Round entry: draw and send this round's coins on live lower-side
    /// edges, then see whether fate is already decidable.
    fn enter_round(&mut self, p: usize) {
        let round = self.procs[p].round;
        if round > self.max_rounds {
            self.procs[p].mode = Mode::Halted;
            return;
        }
        let schedule = self.schedule;
        let mut outgoing = Vec::new();
        for e in &mut self.procs[p].edges {
            if e.lower && e.live_in(round) {
                let bit = schedule.coin(round, e.id as usize);
                e.coin = Some(bit);
                outgoing.push((e.id, e.peer, Payload::Coin { round, bit }));
            }
        }
        for (edge, peer, payload) in outgoing {
            self.send(p as u32, edge, peer, payload);
        }
        self.fate_check(p);
    }

    /// Decide the round once every live edge's arc is known. A coin bit
    /// equal to the "points at the higher endpoint is false" convention
    /// gives this side an out-arc exactly when the bit differs from its
    /// lower flag.
    fn fate_check(&mut self, p: usize) {
        let round = self.procs[p].round;
        if self.procs[p].mode != (Mode::Running { fated: false }) {
            return;
        }
        let mut out_arc = false;
        for e in &self.procs[p].edges {
            if !e.live_in(round) {
                continue;
            }
            match e.coin {
                None => return,
                Some(bit) => out_arc |= bit != e.lower,
            }
        }
        self.procs[p].mode = Mode::Running { fated: true };
        if out_arc {
            let acks: Vec<(u32, u32)> = self.procs[p]
                .edges
                .iter()
                .filter(|e| !e.lower && e.live_in(round))
                .map(|e| (e.id, e.peer))
                .collect();
            for (edge, peer) in acks {
                self.send(p as u32, edge, peer, Payload::Ack { round });
            }
            self.try_advance(p);
        } else {
            // Sink: granted now. Leave notices go out first so that on
            // higher-side edges the following ack certifies the departure.
            self.grants.push((round, p as u32));
            self.granted_round[p] = Some(round);
            let live: Vec<(u32, u32, bool)> = self.procs[p]
                .edges
                .iter()
                .filter(|e| e.live_in(round))
                .map(|e| (e.id, e.peer, e.lower))
                .collect();
            for &(edge, peer, _) in &live {
                self.send(p as u32, edge, peer, Payload::Leave { round });
            }
            for &(edge, peer, lower) in &live {
                if !lower {
                    self.send(p as u32, edge, peer, Payload::Ack { round });
                }
            }
            self.procs[p].mode = Mode::Left;
        }
    }

    /// A fated survivor moves on once every live lower-side coin is acked;
    /// the buffered early coins become the new round's knowledge.
    fn try_advance(&mut self, p: usize) {
        let round = self.procs[p].round;
        if self.procs[p].mode != (Mode::Running { fated: true }) {
            return;
        }
        let ready = self.procs[p]
            .edges
            .iter()
            .all(|e| !e.lower || !e.live_in(round) || e.acked);
        if !ready {
            return;
        }
        let proc = &mut self.procs[p];
        proc.round += 1;
        proc.mode = Mode::Running { fated: false };
        for e in &mut proc.edges {
            e.coin = if e.lower { None } else { e.buffered.take() };
            e.acked = false;
        }
        self.enter_round(p);
    }

    fn deliver(&mut self, msg: QueuedMessage) {
        let p = msg.to as usize;
        self.procs[p].time = self.procs[p].time.max(msg.deliver);
        if !matches!(self.procs[p].mode, Mode::Running { .. }) {
            return;
        }
        let slot = self.procs[p].slot(msg.edge);
        let round = self.procs[p].round;
        match msg.payload {
            Payload::Coin { round: k, bit } => {
                let e = &mut self.procs[p].edges[slot];
                debug_assert!(!e.lower, "coins flow lower to higher");
                if k == round {
                    debug_assert!(e.coin.is_none());
                    e.coin = Some(bit);
                    self.fate_check(p);
                } else {
                    // Ack gating bounds coins to one round ahead.
                    debug_assert_eq!(k, round + 1, "coin outside its window");
                    e.buffered = Some(bit);
                }
            }
            Payload::Ack { round: k } => {
                let e = &mut self.procs[p].edges[slot];
                debug_assert!(e.lower, "acks flow higher to lower");
                debug_assert_eq!(k, round, "ack outside its window");
                if k == round {
                    e.acked = true;
                    self.try_advance(p);
                }
            }
            Payload::Leave { round: g } => {
                self.procs[p].edges[slot].gone_after = Some(g);
                // A dead edge may have been the one blocking fate (higher
                // side waiting on a coin that will never come) or, once
                // fated, the advance is unaffected but harmless to retry.
                self.fate_check(p);
                self.try_advance(p);
            }
        }
    }
}

/// Runs the message-passing engine and reassembles a round-grouped trace
/// identical in skeleton to the centralized engine's, message events
/// included.
pub fn simulate_dist(
    graph: &Graph,
    seed: u64,
    max_rounds: u64,
    delay: &DelaySpec,
    class_spec: Option<GraphClassSpec>,
) -> Result<DistRun> {
    delay.validate()?;
    let n = graph.vertex_count();
    let m = graph.edge_count();
    let procs = (0..n as u32)
        .map(|v| Proc {
            round: 1,
            time: 0,
            mode: Mode::Running { fated: false },
            edges: graph
                .incident_edges(v)
                .iter()
                .map(|&id| {
                    let (a, b) = graph.edge(id as usize);
                    LocalEdge {
                        id,
                        peer: if a == v { b } else { a },
                        lower: a == v,
                        gone_after: None,
                        coin: None,
                        buffered: None,
                        acked: false,
                    }
                })
                .collect(),
        })
        .collect();

    let mut sim = DistSim {
        schedule: CoinSchedule::new(seed),
        max_rounds,
        delay: *delay,
        procs,
        heap: BinaryHeap::new(),
        chan_clock: vec![0; 2 * m],
        seq: 0,
        rng: ChaCha12Rng::seed_from_u64(delay.seed),
        stats: MessageStats::default(),
        msg_log: Vec::new(),
        grants: Vec::new(),
        granted_round: vec![None; n],
        end_time: 0,
    };
    for p in 0..n {
        sim.enter_round(p);
    }
    while let Some(Reverse(msg)) = sim.heap.pop() {
        sim.end_time = sim.end_time.max(msg.deliver);
        sim.deliver(msg);
    }
    debug_assert!(
        sim.procs
            .iter()
            .all(|p| matches!(p.mode, Mode::Left | Mode::Halted)),
        "run drained with a process still waiting"
    );

    let completed = sim.granted_round.iter().all(Option::is_some);
    let rounds_used = if completed {
        sim.grants.iter().map(|&(r, _)| r).max().unwrap_or(0)
    } else {
        max_rounds
    };

    // Reassemble the canonical round grouping. Orientations regenerate from
    // the schedule (they are exactly what the protocol drew) and liveness
    // from the grant log; message events slot into the round they serve.
    let alive_at = |p: usize, k: u64| sim.granted_round[p].is_none_or(|g| g >= k);
    let mut grants_by_round: BTreeMap<u64, Vec<u32>> = BTreeMap::new();
    for &(round, p) in &sim.grants {
        grants_by_round.entry(round).or_default().push(p);
    }
    let mut msgs_by_round: BTreeMap<u64, Vec<TraceEvent>> = BTreeMap::new();
    for ev in sim.msg_log {
        let round = match ev {
            TraceEvent::Message { round, .. } => round,
            _ => unreachable!(),
        };
        msgs_by_round.entry(round).or_default().push(ev);
    }

    let mut events = Vec::new();
    for k in 1..=rounds_used {
        let remaining = (0..n).filter(|&p| alive_at(p, k)).count() as u32;
        events.push(TraceEvent::RoundStart { round: k, remaining });
        for (i, &(u, v)) in graph.edges().iter().enumerate() {
            if alive_at(u as usize, k) && alive_at(v as usize, k) {
                let (from, to) = if sim.schedule.coin(k, i) { (v, u) } else { (u, v) };
                events.push(TraceEvent::OrientationFixed {
                    round: k,
                    edge: i as u32,
                    from,
                    to,
                });
            }
        }
        events.extend(msgs_by_round.remove(&k).unwrap_or_default());
        let mut sinks = grants_by_round.remove(&k).unwrap_or_default();
        sinks.sort_unstable();
        for &s in &sinks {
            events.push(TraceEvent::Granted {
                round: k,
                process: s,
                class: None,
                units: None,
            });
        }
        for &s in &sinks {
            events.push(TraceEvent::Released { round: k, process: s });
        }
        for &s in &sinks {
            events.push(TraceEvent::Terminated { round: k, process: s });
        }
    }
    debug_assert!(msgs_by_round.is_empty(), "message beyond the last round");
    debug_assert!(grants_by_round.is_empty(), "grant beyond the last round");

    let header = TraceHeader {
        engine: EngineKind::Dist,
        n,
        edges: graph.edges().to_vec(),
        class_spec,
        seed,
        max_rounds: Some(max_rounds),
        delay: Some(*delay),
        workload: None,
        completed,
        rounds_used,
    };
    Ok(DistRun {
        trace: Trace { header, events },
        completed,
        rounds_used,
        messages: sim.stats,
        end_time: sim.end_time,
        granted_round: sim.granted_round,
    })
}
