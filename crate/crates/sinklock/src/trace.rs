//! Append-only run traces and their JSONL wire format.
//!
//! Every engine (central, message-passing, classical linear-order) emits the
//! same record stream: one `{"type":"config",...}` header line describing
//! the run, then one internally tagged event object per line. Traces are
//! complete: a verifier can re-derive per-round orientations, grant sets,
//! and message timelines from the file alone, plus the workload description
//! in the header when the run was not edge-backed.

use std::collections::BTreeMap;
use std::io::{BufRead, Write};

use serde::{Deserialize, Serialize};

use crate::graph::{Graph, GraphClassSpec};
use crate::{Error, Result};

/// Which engine produced a trace.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum EngineKind {
    /// One process per vertex, coins flipped by a central scheduler.
    Central,
    /// One process per vertex, coins and grants negotiated by messages.
    Dist,
    /// Linear-priority granting over an explicit workload, no coins.
    Classical,
}

/// Delivery-delay law for the message-passing engine. Delays are in virtual
/// time ticks; channels stay FIFO regardless of the law.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "dist", rename_all = "snake_case")]
pub enum DelayDist {
    /// Every message arrives in the tick after it is sent.
    Zero,
    /// Every message takes the same number of ticks.
    Fixed { value: u64 },
    /// Per-message delay drawn uniformly from `min..=max`.
    Uniform { min: u64, max: u64 },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DelaySpec {
    #[serde(flatten)]
    pub dist: DelayDist,
    /// Seed of the delay draw stream, independent of the coin seed.
    #[serde(default)]
    pub seed: u64,
}

impl DelaySpec {
    pub fn zero() -> DelaySpec {
        DelaySpec {
            dist: DelayDist::Zero,
            seed: 0,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if let DelayDist::Uniform { min, max } = self.dist {
            if min > max {
                return Err(Error::InvalidParameter(format!(
                    "uniform delay needs min <= max, got {min} > {max}"
                )));
            }
        }
        Ok(())
    }
}

/// Explicit workload for classical runs: per-class capacities and the
/// per-process request vector. Edge-backed runs omit this (each edge is a
/// capacity-1 class requested by both endpoints).
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct WorkloadConfig {
    pub capacities: Vec<u32>,
    /// `requests[p][r]` units of class `r` wanted by process `p`.
    pub requests: Vec<Vec<u32>>,
}

/// The `{"type":"config",...}` first line of a trace.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TraceHeader {
    pub engine: EngineKind,
    pub n: usize,
    /// Conflict edges in canonical order; empty for workload-backed runs.
    pub edges: Vec<(u32, u32)>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub class_spec: Option<GraphClassSpec>,
    pub seed: u64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub max_rounds: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub delay: Option<DelaySpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub workload: Option<WorkloadConfig>,
    /// Whether every process terminated within the round budget.
    pub completed: bool,
    pub rounds_used: u64,
}

/// Message kinds spoken by the message-passing engine, one conversation per
/// edge per round: the lower endpoint announces the coin, the higher one
/// acknowledges, and a departing process notifies the neighbors it leaves
/// behind.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MessageKind {
    Coin,
    Ack,
    Leave,
}

/// One trace record. `round` is 1-based and matches the coin schedule round
/// for engines that flip coins; the classical engine uses it as a step
/// counter.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum TraceEvent {
    RoundStart {
        round: u64,
        /// Processes still live when the round begins.
        remaining: u32,
    },
    /// Edge `edge` oriented `from -> to` for this round.
    OrientationFixed {
        round: u64,
        edge: u32,
        from: u32,
        to: u32,
    },
    Granted {
        round: u64,
        process: u32,
        /// Resource class drawn, for workload-backed runs.
        #[serde(default, skip_serializing_if = "Option::is_none")]
        class: Option<u32>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        units: Option<u32>,
    },
    Released {
        round: u64,
        process: u32,
    },
    Terminated {
        round: u64,
        process: u32,
    },
    Message {
        round: u64,
        edge: u32,
        kind: MessageKind,
        from: u32,
        to: u32,
        sent: u64,
        delivered: u64,
    },
}

impl TraceEvent {
    pub fn round(&self) -> u64 {
        match *self {
            TraceEvent::RoundStart { round, .. }
            | TraceEvent::OrientationFixed { round, .. }
            | TraceEvent::Granted { round, .. }
            | TraceEvent::Released { round, .. }
            | TraceEvent::Terminated { round, .. }
            | TraceEvent::Message { round, .. } => round,
        }
    }
}

#[derive(Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case")]
enum HeaderLine {
    Config(TraceHeader),
}

/// A full run: header plus events in emission order.
#[derive(Clone, Debug, PartialEq)]
pub struct Trace {
    pub header: TraceHeader,
    pub events: Vec<TraceEvent>,
}

/// Per-kind message counts for a message-passing run.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct MessageStats {
    pub coins: u64,
    pub acks: u64,
    pub leaves: u64,
}

impl MessageStats {
    pub fn total(&self) -> u64 {
        self.coins + self.acks + self.leaves
    }
}

/// Everything a round did, reassembled from the event stream.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct RoundView {
    pub round: u64,
    pub remaining: u32,
    /// `(edge index, from, to)` in emission order.
    pub arcs: Vec<(u32, u32, u32)>,
    pub granted: Vec<u32>,
    pub released: Vec<u32>,
    pub terminated: Vec<u32>,
}

impl Trace {
    /// Rebuilds the conflict graph recorded in the header.
    pub fn graph(&self) -> Result<Graph> {
        Graph::new(self.header.n, self.header.edges.iter().copied())
            .map_err(|e| Error::Trace(format!("header graph invalid: {e}")))
    }

    pub fn write_jsonl<W: Write>(&self, mut w: W) -> Result<()> {
        serde_json::to_writer(&mut w, &HeaderLine::Config(self.header.clone()))?;
        w.write_all(b"\n")?;
        for event in &self.events {
            serde_json::to_writer(&mut w, event)?;
            w.write_all(b"\n")?;
        }
        Ok(())
    }

    pub fn to_jsonl(&self) -> Result<String> {
        let mut buf = Vec::new();
        self.write_jsonl(&mut buf)?;
        // serde_json writes UTF-8.
        Ok(String::from_utf8(buf).expect("trace output is UTF-8"))
    }

    pub fn read_jsonl<R: BufRead>(r: R) -> Result<Trace> {
        let mut header = None;
        let mut events = Vec::new();
        for (i, line) in r.lines().enumerate() {
            let line = line?;
            if line.trim().is_empty() {
                continue;
            }
            if header.is_none() {
                let HeaderLine::Config(h) = serde_json::from_str(&line).map_err(|e| {
                    Error::Trace(format!("line {}: expected config header: {e}", i + 1))
                })?;
                header = Some(h);
            } else {
                let event: TraceEvent = serde_json::from_str(&line)
                    .map_err(|e| Error::Trace(format!("line {}: {e}", i + 1)))?;
                events.push(event);
            }
        }
        Ok(Trace {
            header: header.ok_or_else(|| Error::Trace("empty trace".into()))?,
            events,
        })
    }

    pub fn from_jsonl(text: &str) -> Result<Trace> {
        Trace::read_jsonl(text.as_bytes())
    }

    /// Splits the event stream into rounds, checking that rounds start with
    /// a `RoundStart`, are strictly increasing, and that every event carries
    /// the round number it sits in.
    pub fn rounds(&self) -> Result<Vec<RoundView>> {
        let mut out: Vec<RoundView> = Vec::new();
        for event in &self.events {
            if let TraceEvent::RoundStart { round, remaining } = *event {
                if out.last().is_some_and(|prev| prev.round >= round) {
                    return Err(Error::Trace(format!(
                        "round {round} starts after round {}",
                        out.last().unwrap().round
                    )));
                }
                out.push(RoundView {
                    round,
                    remaining,
                    ..RoundView::default()
                });
                continue;
            }
            let view = out
                .last_mut()
                .ok_or_else(|| Error::Trace("event before first round_start".into()))?;
            if event.round() != view.round {
                return Err(Error::Trace(format!(
                    "event for round {} inside round {}",
                    event.round(),
                    view.round
                )));
            }
            match *event {
                TraceEvent::OrientationFixed { edge, from, to, .. } => {
                    view.arcs.push((edge, from, to));
                }
                TraceEvent::Granted { process, .. } => view.granted.push(process),
                TraceEvent::Released { process, .. } => view.released.push(process),
                TraceEvent::Terminated { process, .. } => view.terminated.push(process),
                TraceEvent::Message { .. } | TraceEvent::RoundStart { .. } => {}
            }
        }
        Ok(out)
    }

    /// Grant sets per round, each sorted ascending.
    pub fn grants_by_round(&self) -> BTreeMap<u64, Vec<u32>> {
        let mut map: BTreeMap<u64, Vec<u32>> = BTreeMap::new();
        for event in &self.events {
            if let TraceEvent::Granted { round, process, .. } = *event {
                map.entry(round).or_default().push(process);
            }
        }
        for grants in map.values_mut() {
            grants.sort_unstable();
        }
        map
    }

    pub fn message_stats(&self) -> MessageStats {
        let mut stats = MessageStats::default();
        for event in &self.events {
            if let TraceEvent::Message { kind, .. } = event {
                match kind {
                    MessageKind::Coin => stats.coins += 1,
                    MessageKind::Ack => stats.acks += 1,
                    MessageKind::Leave => stats.leaves += 1,
                }
            }
        }
        stats
    }
}
