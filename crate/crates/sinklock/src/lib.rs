//! Deadlock-free resource granting through random acyclic orientations.
//!
//! A set of processes shares single-unit resources; two processes conflict
//! when they request the same resource. The conflict structure is an
//! undirected graph, and each scheduling round orients every remaining edge
//! with an independent fair coin. Vertices with no outgoing arc (sinks) form
//! an independent set, so they can all be granted at once; they run, release
//! everything, and leave, and the next round re-orients whatever remains.
//!
//! This crate provides:
//!
//! * [`graph`] — conflict graphs, seeded generators for the standard
//!   families, and the plain-text edge-list format;
//! * [`coins`] — the deterministic per-(round, edge) coin schedule shared by
//!   every engine, so centralized and distributed runs are replay-identical;
//! * [`orientation`] — orientations, sink sets, and exact (rational)
//!   enumeration of sink statistics over all `2^m` orientations;
//! * [`analytics`] — closed-form values and bounds for the standard graph
//!   families, Monte Carlo estimation, and expected-round-count iteration;
//! * [`rgm`] — the resource model, wait-for digraphs, and the centralized
//!   round-based simulator emitting verifiable traces;
//! * [`verifier`] — priority digraphs built from per-class partial orders,
//!   the driven-by grant conditions, the classical ordered-class scheduler,
//!   and trace verification;
//! * [`distsim`] — a message-passing version of the round protocol on a
//!   virtual-time event queue with seeded delays;
//! * [`cli`] — the `sinklock` command-line tool.
//!
//! Notation note: in this body of work `w(G)` (sometimes written ω(G))
//! denotes the *independence number* of `G` — the size of a largest
//! independent set — not the clique number. Sink sets of orientations are
//! exactly the realizable independent sets, which is why the symbol shows up
//! around sink statistics. Where it matters in code, names say
//! "independent set" outright.
//!
//! Everything is deterministic given its seeds: generators, both simulators,
//! and the Monte Carlo estimators accept explicit 64-bit seeds and never
//! read ambient randomness.

pub mod analytics;
pub mod cli;
pub mod coins;
pub mod distsim;
pub mod graph;
pub mod orientation;
pub mod rgm;
pub mod trace;
pub mod verifier;

use thiserror::Error;

/// Crate-wide error type. Verification *verdicts* are not errors: checkers
/// return reports listing violations, and `Error` is reserved for inputs the
/// library cannot meaningfully process.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("malformed edge list: {0}")]
    EdgeList(String),
    #[error("graph has {edges} edges, above the enumeration cap of {cap}")]
    EnumerationCap { edges: usize, cap: usize },
    #[error("{what} has {size} elements, above the cap of {cap}")]
    SizeCap {
        what: &'static str,
        size: usize,
        cap: usize,
    },
    #[error("no closed form: {0}")]
    NoClosedForm(String),
    #[error("iteration stalled: per-round decrement {decrement:e} fell below {floor:e} at x = {x}")]
    Stalled { x: f64, decrement: f64, floor: f64 },
    #[error("malformed trace: {0}")]
    Trace(String),
    #[error("protocol violation: {0}")]
    Protocol(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error("malformed JSON: {0}")]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
