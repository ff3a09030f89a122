//! Step-by-step comparison of a potential-based trace with a modified
//! weight-splitting trace.
//!
//! Both traces are cut at their change points, the first graph snapshot of
//! every run with the same `X` and reachable set. Change points are paired in
//! order and must agree on `|X|` and on the cumulative dual change. At each
//! pair the working graph of the splitting side, with redundant arcs and
//! isolated sinks removed, must coincide with the top-degree exchange graph.

use std::collections::BTreeSet;
use std::fmt;

use thiserror::Error;

use crate::exactla::{x_diagonalize, RowMap};
use crate::frank::build_bar_graph;
use crate::instance::WmiInstance;
use crate::intersect::{build_residual, ColumnSet};
use crate::scalar::ExactField;
use crate::trace::{GraphSnapshot, TraceEvent};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum Claim {
    /// Arcs agree after dropping arcs that leave a node nothing enters.
    Arcs,
    Sources,
    /// Sinks agree after dropping isolated nodes.
    Sinks,
    /// Same `X` and the same reachable set.
    Reachable,
    /// Same `|X|` and the same cumulative dual change.
    DualSum,
}

impl Claim {
    pub const ALL: [Claim; 5] = [Claim::Arcs, Claim::Sources, Claim::Sinks, Claim::Reachable, Claim::DualSum];

    pub fn number(self) -> usize {
        self as usize + 1
    }
}

impl fmt::Display for Claim {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Claim::Arcs => "arcs",
            Claim::Sources => "sources",
            Claim::Sinks => "sinks",
            Claim::Reachable => "reachable",
            Claim::DualSum => "dual sum",
        };
        write!(f, "({}) {s}", self.number())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CompareError {
    #[error("mismatch at step {step} on claim {claim}: {detail}")]
    MismatchAt { step: usize, claim: Claim, detail: String },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StepCheck {
    pub step: usize,
    pub x: Vec<usize>,
    pub dual: i64,
    /// Failed claims with a short description each.
    pub failures: Vec<(Claim, String)>,
}

impl StepCheck {
    pub fn holds(&self, claim: Claim) -> bool {
        self.failures.iter().all(|(c, _)| *c != claim)
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct TraceComparison {
    pub steps: Vec<StepCheck>,
    /// Set when the traces have different numbers of change points.
    pub length: Option<(usize, usize)>,
    /// Dual steps taken from snapshots without sources, per trace.
    pub idle_steps: (usize, usize),
}

impl TraceComparison {
    pub fn first_mismatch(&self) -> Option<CompareError> {
        for s in &self.steps {
            if let Some((claim, detail)) = s.failures.first() {
                return Some(CompareError::MismatchAt { step: s.step, claim: *claim, detail: detail.clone() });
            }
        }
        self.length.map(|(a, b)| CompareError::MismatchAt {
            step: a.min(b),
            claim: Claim::DualSum,
            detail: format!("{a} change points against {b}"),
        })
    }

    pub fn is_consistent(&self) -> bool {
        self.first_mismatch().is_none()
    }

    pub fn into_result(self) -> Result<Self, CompareError> {
        match self.first_mismatch() {
            Some(e) => Err(e),
            None => Ok(self),
        }
    }
}

/// A change point with its dual sum net of idle steps.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ChangePoint<'a> {
    pub snapshot: &'a GraphSnapshot,
    pub dual: i64,
}

/// Change points of a trace together with the number of idle steps.
///
/// A snapshot without sources is idle: nothing is reachable, the
/// splitting is unaffected by the following dual step, and the snapshot is
/// skipped. Its dual increase is left out of the sums. An idle step that
/// does change the splitting is reported as the index of the offending
/// snapshot.
#[derive(Clone, Debug, Default)]
pub struct ChangePoints<'a> {
    pub points: Vec<ChangePoint<'a>>,
    pub idle_steps: usize,
    pub idle_split_changes: Vec<usize>,
}

pub fn change_points(events: &[TraceEvent]) -> ChangePoints<'_> {
    let mut out = ChangePoints::default();
    let mut idle = 0;
    let mut idle_open = false;
    let mut split: Option<&TraceEvent> = None;
    let mut split_at_idle: Option<&TraceEvent> = None;
    let mut snapshots = 0;
    for ev in events {
        match ev {
            TraceEvent::Graph(g) => {
                snapshots += 1;
                idle_open = g.sources.is_empty();
                if idle_open {
                    split_at_idle = split;
                    continue;
                }
                let last = out.points.last().map(|p| p.snapshot);
                if last.is_none_or(|p| p.x != g.x || p.reachable != g.reachable) {
                    out.points.push(ChangePoint { snapshot: g, dual: g.dual - idle });
                }
            }
            TraceEvent::KappaIncrease { kappa: d, .. } | TraceEvent::EpsilonIncrease { epsilon: d, .. }
                if idle_open =>
            {
                idle += d;
                out.idle_steps += 1;
            }
            TraceEvent::SplitSnapshot { .. } => {
                if idle_open && split_at_idle.is_some_and(|p| p != ev) {
                    out.idle_split_changes.push(snapshots);
                }
                split = Some(ev);
            }
            TraceEvent::Augment { .. } => idle_open = false,
            _ => {}
        }
    }
    out
}

/// Nodes outside `X` and the sources that no arc enters.
fn dead_nodes(g: &GraphSnapshot) -> BTreeSet<usize> {
    let entered: BTreeSet<usize> = g.arcs.iter().map(|&(_, v)| v).collect();
    let nodes: BTreeSet<usize> = g.arcs.iter().flat_map(|&(u, v)| [u, v]).chain(g.sinks.iter().copied()).collect();
    nodes.into_iter().filter(|u| !g.x.contains(u) && !g.sources.contains(u) && !entered.contains(u)).collect()
}

/// Checks the four structural claims of `top` against the working graph `bar`.
pub fn check_snapshot(top: &GraphSnapshot, bar: &GraphSnapshot) -> Vec<(Claim, String)> {
    let dead = dead_nodes(bar);
    let mut failures = Vec::new();
    let arcs: Vec<(usize, usize)> = bar.arcs.iter().copied().filter(|(u, _)| !dead.contains(u)).collect();
    if arcs != top.arcs {
        failures.push((Claim::Arcs, format!("{:?} against {:?}", top.arcs, arcs)));
    }
    if top.sources != bar.sources {
        failures.push((Claim::Sources, format!("{:?} against {:?}", top.sources, bar.sources)));
    }
    let sinks: Vec<usize> = bar.sinks.iter().copied().filter(|u| !dead.contains(u)).collect();
    if sinks != top.sinks {
        failures.push((Claim::Sinks, format!("{:?} against {:?}", top.sinks, sinks)));
    }
    if top.x != bar.x || top.reachable != bar.reachable {
        failures.push((
            Claim::Reachable,
            format!("X {:?} R {:?} against X {:?} R {:?}", top.x, top.reachable, bar.x, bar.reachable),
        ));
    }
    failures
}

/// Pairs the change points of the two traces and checks every claim.
pub fn compare_traces(wmi: &[TraceEvent], frank: &[TraceEvent]) -> TraceComparison {
    let (p, q) = (change_points(wmi), change_points(frank));
    let mut steps: Vec<StepCheck> = p
        .points
        .iter()
        .zip(&q.points)
        .enumerate()
        .map(|(step, (d, f))| {
            let mut failures = check_snapshot(d.snapshot, f.snapshot);
            if d.snapshot.x.len() != f.snapshot.x.len() || d.dual != f.dual {
                let detail = format!(
                    "|X| {} dual {} against |X| {} dual {}",
                    d.snapshot.x.len(),
                    d.dual,
                    f.snapshot.x.len(),
                    f.dual
                );
                failures.push((Claim::DualSum, detail));
            }
            StepCheck { step, x: d.snapshot.x.clone(), dual: d.dual, failures }
        })
        .collect();
    for (side, cp) in [("first", &p), ("second", &q)] {
        if let Some(&at) = cp.idle_split_changes.first() {
            let detail = format!("{side} trace changed its splitting in an idle step at snapshot {at}");
            steps.push(StepCheck {
                step: steps.len(),
                x: Vec::new(),
                dual: 0,
                failures: vec![(Claim::DualSum, detail)],
            });
        }
    }
    let length = (p.points.len() != q.points.len()).then_some((p.points.len(), q.points.len()));
    TraceComparison { steps, length, idle_steps: (p.idle_steps, q.idle_steps) }
}

/// Checks the structural claims at every graph snapshot of a potential-based
/// trace against the working graph built from that run's own splitting.
/// Snapshots without sources are skipped as in [`change_points`].
pub fn check_against_own_splitting<T: ExactField>(inst: &WmiInstance<T>, wmi: &[TraceEvent]) -> TraceComparison {
    let mut steps = Vec::new();
    let mut split = None;
    for ev in wmi {
        match ev {
            TraceEvent::SplitSnapshot { c1, c2 } => split = Some((c1, c2)),
            TraceEvent::Graph(top) => {
                let Some((c1, c2)) = split.filter(|_| !top.sources.is_empty()) else { continue };
                let x: ColumnSet = top.x.iter().copied().collect();
                let failures = match full_graph(inst, &x) {
                    Some(full) => {
                        let bar = build_bar_graph(&full, &x, c1, c2);
                        check_snapshot(top, &GraphSnapshot::new(&x, top.dual, &bar))
                    }
                    None => vec![(Claim::Reachable, "X is not common independent".to_string())],
                };
                steps.push(StepCheck { step: steps.len(), x: top.x.clone(), dual: top.dual, failures });
            }
            _ => {}
        }
    }
    TraceComparison { steps, length: None, idle_steps: (0, 0) }
}

fn full_graph<T: ExactField>(inst: &WmiInstance<T>, x: &ColumnSet) -> Option<crate::intersect::ResidualGraph> {
    let da = x_diagonalize(inst.a(), x, &RowMap::new()).ok()?;
    let db = x_diagonalize(inst.b(), x, &RowMap::new()).ok()?;
    build_residual(&da.matrix, &db.matrix, x, &da.sigma, &db.sigma).ok()
}
