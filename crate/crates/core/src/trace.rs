//! Solver event streams, serialized one JSON object per line.

use std::io::{self, BufRead, Write};

use serde::{Deserialize, Serialize};

use crate::intersect::ResidualGraph;
use crate::result::Degree;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Side {
    A,
    B,
}

/// The four ways a new tight triple `(i, k, l)` can arise after a potential update.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum EventCase {
    /// `i` in `X`, not reachable: a row operation on `A`.
    A1,
    /// `i` outside `X`, not reachable.
    A2,
    /// `i` in `X`, reachable: a row operation on `B`.
    B1,
    /// `i` outside `X`, reachable.
    B2,
}

/// Exchange graph state at one step, with `dual` the cumulative potential
/// (or splitting) shift since the start of the run.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GraphSnapshot {
    pub x: Vec<usize>,
    pub dual: i64,
    pub sources: Vec<usize>,
    pub sinks: Vec<usize>,
    pub arcs: Vec<(usize, usize)>,
    pub reachable: Vec<usize>,
}

impl GraphSnapshot {
    pub fn new(x: &std::collections::BTreeSet<usize>, dual: i64, g: &ResidualGraph) -> Self {
        GraphSnapshot {
            x: x.iter().copied().collect(),
            dual,
            sources: g.sources.iter().copied().collect(),
            sinks: g.sinks.iter().copied().collect(),
            arcs: g.arcs.iter().copied().collect(),
            reachable: g.reachable.iter().copied().collect(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum TraceEvent {
    Init {
        solver: String,
        n: usize,
        m: usize,
        alpha: Vec<i64>,
        beta: Vec<i64>,
    },
    StepEntry {
        x: Vec<usize>,
        alpha: Vec<i64>,
        beta: Vec<i64>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        a0: Option<Vec<Vec<String>>>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        b0: Option<Vec<Vec<String>>>,
    },
    Eliminate {
        side: Side,
        column: usize,
        target: usize,
        source: usize,
        factor: String,
    },
    Graph(GraphSnapshot),
    KappaIncrease {
        kappa: i64,
        i_rows: Vec<usize>,
        j_rows: Vec<usize>,
        i_star: Vec<usize>,
        j_star: Vec<usize>,
        cumulative: i64,
        alpha: Vec<i64>,
        beta: Vec<i64>,
    },
    EpsilonIncrease {
        epsilon: i64,
        shifted: Vec<usize>,
        cumulative: i64,
    },
    Event {
        i: usize,
        k: usize,
        l: usize,
        case: EventCase,
    },
    Augment {
        path: Vec<usize>,
        x: Vec<usize>,
        k: usize,
    },
    SplitSnapshot {
        c1: Vec<i64>,
        c2: Vec<i64>,
    },
    Terminate {
        degdet: Degree,
    },
}

pub fn write_jsonl<W: Write>(events: &[TraceEvent], mut out: W) -> io::Result<()> {
    for ev in events {
        serde_json::to_writer(&mut out, ev)?;
        out.write_all(b"\n")?;
    }
    out.flush()
}

pub fn read_jsonl<R: BufRead>(input: R) -> io::Result<Vec<TraceEvent>> {
    let mut events = Vec::new();
    for line in input.lines() {
        let line = line?;
        if line.trim().is_empty() {
            continue;
        }
        events.push(serde_json::from_str(&line).map_err(|e| io::Error::new(io::ErrorKind::InvalidData, e))?);
    }
    Ok(events)
}

/// The graph snapshots of a trace, in order.
pub fn graph_snapshots(events: &[TraceEvent]) -> Vec<&GraphSnapshot> {
    events
        .iter()
        .filter_map(|e| match e {
            TraceEvent::Graph(g) => Some(g),
            _ => None,
        })
        .collect()
}
