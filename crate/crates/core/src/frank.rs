//! Weight-splitting reference solver.
//!
//! Keeps `c = c1 + c2` such that `X` is `c1`-maximal in `M(A)` and
//! `c2`-maximal in `M(B)` among sets of its size. The full exchange graph is
//! built from X-diagonal forms of `A` and `B`; the working graph keeps only
//! the arcs whose endpoints agree on the relevant part of the splitting.
//! The modified variant also shifts the nodes outside `X` whose every
//! working arc enters `X & R`.

use std::collections::{BTreeMap, BTreeSet};

use crate::degdet::{verify_splitting_certificate, SolveOptions};
use crate::exactla::{x_diagonalize, Matrix, RowMap, RowOp, RowOpLog};
use crate::instance::WmiInstance;
use crate::intersect::{augment, build_residual, ColumnSet, ResidualGraph};
use crate::result::{CardinalityOptimum, Degree, SolveError, SolveResult, Stats, Violation, WeightSplitting};
use crate::scalar::ExactField;
use crate::trace::{GraphSnapshot, Side, TraceEvent};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FrankVariant {
    Classic,
    Modified,
}

impl FrankVariant {
    pub fn name(self) -> &'static str {
        match self {
            FrankVariant::Classic => "frank",
            FrankVariant::Modified => "frank-modified",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FrankState {
    pub c1: Vec<i64>,
    pub c2: Vec<i64>,
    pub x: ColumnSet,
    /// Working graph; its sources and sinks are the argmax slices of `S` and `T`.
    pub gbar: ResidualGraph,
    pub sbar: ColumnSet,
    pub tbar: ColumnSet,
    pub rbar: ColumnSet,
    pub rbar_prime: ColumnSet,
}

fn argmax(set: &ColumnSet, part: &[i64]) -> ColumnSet {
    let Some(best) = set.iter().map(|&i| part[i]).max() else {
        return ColumnSet::new();
    };
    set.iter().copied().filter(|&i| part[i] == best).collect()
}

/// Restricts the full exchange graph to arcs tight under the splitting and
/// runs the BFS from the `c1`-maximal sources.
pub fn build_bar_graph(full: &ResidualGraph, x: &ColumnSet, c1: &[i64], c2: &[i64]) -> ResidualGraph {
    let arcs: BTreeSet<(usize, usize)> = full
        .arcs
        .iter()
        .copied()
        .filter(|&(i, j)| if x.contains(&i) { c1[i] == c1[j] } else { c2[i] == c2[j] })
        .collect();
    ResidualGraph::from_parts(full.nodes, arcs, argmax(&full.sources, c1), argmax(&full.sinks, c2))
}

/// Nodes outside `X + R` with at least one working arc, all of them into `X & R`.
pub fn rbar_prime(gbar: &ResidualGraph, x: &ColumnSet) -> ColumnSet {
    let inner = |j: usize| x.contains(&j) && gbar.reachable.contains(&j);
    (0..gbar.nodes)
        .filter(|i| !x.contains(i) && !gbar.reachable.contains(i))
        .filter(|&i| {
            let mut out = gbar.out_neighbours(i).peekable();
            out.peek().is_some() && out.all(inner)
        })
        .collect()
}

/// Smallest shift at which the reachable set, the sink slice or (in the
/// modified variant) `R'` changes. `None` when no threshold exists.
pub fn next_epsilon(full: &ResidualGraph, st: &FrankState, variant: FrankVariant) -> Option<i64> {
    let (x, r, rp) = (&st.x, &st.rbar, &st.rbar_prime);
    let shifted = |i: usize| r.contains(&i) || (variant == FrankVariant::Modified && rp.contains(&i));
    let mut cand: Vec<i64> = Vec::new();
    for &(i, j) in &full.arcs {
        if x.contains(&i) {
            if r.contains(&i) && !shifted(j) {
                cand.push(st.c1[i] - st.c1[j]);
            }
        } else if !r.contains(&j) {
            if shifted(i) {
                cand.push(st.c2[j] - st.c2[i]);
            }
        } else if variant == FrankVariant::Modified && !shifted(i) {
            cand.push(st.c2[i] - st.c2[j]);
        }
    }
    let best = |it: &mut dyn Iterator<Item = usize>, part: &[i64]| it.map(|i| part[i]).max();
    let s_in = best(&mut full.sources.iter().copied().filter(|i| r.contains(i)), &st.c1);
    let s_out = best(&mut full.sources.iter().copied().filter(|&i| !shifted(i)), &st.c1);
    if let (Some(p), Some(q)) = (s_in, s_out) {
        cand.push(p - q);
    }
    let t_in = best(&mut full.sinks.iter().copied().filter(|i| r.contains(i)), &st.c2);
    let t_out = best(&mut full.sinks.iter().copied().filter(|&i| !shifted(i)), &st.c2);
    let t_prime = best(&mut full.sinks.iter().copied().filter(|&i| shifted(i) && !r.contains(&i)), &st.c2);
    if let (Some(p), Some(q)) = (t_in, t_out) {
        if t_prime.is_none_or(|v| v <= p) {
            cand.push(q - p);
        }
    }
    cand.into_iter().filter(|&d| d > 0).min()
}

pub fn frank_solve<T: ExactField>(
    inst: &WmiInstance<T>,
    variant: FrankVariant,
    opts: SolveOptions,
) -> Result<SolveResult, SolveError> {
    Frank::new(inst, variant, opts).run()
}

pub fn frank_classic<T: ExactField>(inst: &WmiInstance<T>, opts: SolveOptions) -> Result<SolveResult, SolveError> {
    frank_solve(inst, FrankVariant::Classic, opts)
}

pub fn frank_modified<T: ExactField>(inst: &WmiInstance<T>, opts: SolveOptions) -> Result<SolveResult, SolveError> {
    frank_solve(inst, FrankVariant::Modified, opts)
}

struct Frank<'a, T> {
    inst: &'a WmiInstance<T>,
    variant: FrankVariant,
    opts: SolveOptions,
    ka: Matrix<T>,
    lb: Matrix<T>,
    sigma_a: RowMap,
    sigma_b: RowMap,
    c1: Vec<i64>,
    c2: Vec<i64>,
    x: ColumnSet,
    cumulative: i64,
    by_card: Vec<Option<CardinalityOptimum>>,
    stats: Stats,
    violations: Vec<Violation>,
    trace: Vec<TraceEvent>,
}

impl<'a, T: ExactField> Frank<'a, T> {
    fn new(inst: &'a WmiInstance<T>, variant: FrankVariant, opts: SolveOptions) -> Self {
        Frank {
            inst,
            variant,
            opts,
            ka: inst.a().clone(),
            lb: inst.b().clone(),
            sigma_a: RowMap::new(),
            sigma_b: RowMap::new(),
            c1: inst.weights().to_vec(),
            c2: vec![0; inst.m()],
            x: ColumnSet::new(),
            cumulative: 0,
            by_card: vec![None; inst.n() + 1],
            stats: Stats::default(),
            violations: Vec::new(),
            trace: Vec::new(),
        }
    }

    fn splitting(&self) -> WeightSplitting {
        WeightSplitting { c1: self.c1.clone(), c2: self.c2.clone() }
    }

    fn certify(&mut self, when: &str) {
        if self.opts.check_invariants && !verify_splitting_certificate(self.inst, &self.x, &self.splitting()) {
            self.violations.push(Violation::new("splitting optimality", format!("after {when}")));
        }
    }

    fn run(mut self) -> Result<SolveResult, SolveError> {
        let n = self.inst.n();
        self.trace.push(TraceEvent::Init {
            solver: self.variant.name().into(),
            n,
            m: self.inst.m(),
            alpha: Vec::new(),
            beta: Vec::new(),
        });
        loop {
            // Step 1.
            let ws = self.splitting();
            self.by_card[self.x.len()] = Some(CardinalityOptimum {
                x: self.x.clone(),
                weight: self.inst.weight_of(&self.x),
                splitting: ws.clone(),
            });
            self.trace.push(TraceEvent::StepEntry {
                x: self.x.iter().copied().collect(),
                alpha: Vec::new(),
                beta: Vec::new(),
                a0: None,
                b0: None,
            });
            self.trace.push(TraceEvent::SplitSnapshot { c1: ws.c1.clone(), c2: ws.c2.clone() });
            if self.x.len() == n {
                let value = self.inst.weight_of(&self.x);
                return Ok(self.finish(Degree::Finite(value)));
            }
            let da =
                x_diagonalize(&self.ka, &self.x, &self.sigma_a).map_err(|e| SolveError::Internal(format!("A: {e}")))?;
            let db =
                x_diagonalize(&self.lb, &self.x, &self.sigma_b).map_err(|e| SolveError::Internal(format!("B: {e}")))?;
            self.record_ops(Side::A, &da.log, &da.sigma);
            self.record_ops(Side::B, &db.log, &db.sigma);
            (self.ka, self.sigma_a) = (da.matrix, da.sigma);
            (self.lb, self.sigma_b) = (db.matrix, db.sigma);
            let full = build_residual(&self.ka, &self.lb, &self.x, &self.sigma_a, &self.sigma_b)
                .map_err(|e| SolveError::Internal(e.to_string()))?;

            // Steps 2 to 4, repeated on the same X until an augmentation.
            loop {
                let st = self.state(&full);
                self.trace.push(TraceEvent::Graph(GraphSnapshot::new(&self.x, self.cumulative, &st.gbar)));
                if let Some(aug) = augment(&st.gbar, &self.x) {
                    self.x = aug.x;
                    self.stats.augmentations += 1;
                    self.trace.push(TraceEvent::Augment {
                        path: aug.path,
                        x: self.x.iter().copied().collect(),
                        k: self.x.len(),
                    });
                    self.certify("augmentation");
                    break;
                }
                let Some(eps) = next_epsilon(&full, &st, self.variant) else {
                    return Ok(self.finish(Degree::MinusInfinity));
                };
                let shifted: ColumnSet = match self.variant {
                    FrankVariant::Classic => st.rbar.clone(),
                    FrankVariant::Modified => st.rbar.union(&st.rbar_prime).copied().collect(),
                };
                for &i in &shifted {
                    self.c1[i] -= eps;
                    self.c2[i] += eps;
                }
                self.cumulative += eps;
                self.stats.dual_steps += 1;
                self.trace.push(TraceEvent::EpsilonIncrease {
                    epsilon: eps,
                    shifted: shifted.iter().copied().collect(),
                    cumulative: self.cumulative,
                });
                self.certify("shift");
                if self.opts.check_invariants {
                    let next = self.state(&full);
                    if next.rbar == st.rbar && next.rbar_prime == st.rbar_prime && next.gbar.path.is_none() {
                        self.violations
                            .push(Violation::new("shift progress", format!("shift by {eps} changed nothing")));
                    }
                }
            }
        }
    }

    fn state(&self, full: &ResidualGraph) -> FrankState {
        let gbar = build_bar_graph(full, &self.x, &self.c1, &self.c2);
        let rbar_prime = match self.variant {
            FrankVariant::Classic => ColumnSet::new(),
            FrankVariant::Modified => rbar_prime(&gbar, &self.x),
        };
        FrankState {
            c1: self.c1.clone(),
            c2: self.c2.clone(),
            x: self.x.clone(),
            sbar: gbar.sources.clone(),
            tbar: gbar.sinks.clone(),
            rbar: gbar.reachable.clone(),
            rbar_prime,
            gbar,
        }
    }

    fn record_ops(&mut self, side: Side, log: &RowOpLog<T>, sigma: &RowMap) {
        let owner: BTreeMap<usize, usize> = sigma.iter().map(|(&col, &row)| (row, col)).collect();
        for op in log.iter() {
            match op {
                RowOp::AddMultiple { target, source, factor } => {
                    self.stats.row_ops += 1;
                    self.trace.push(TraceEvent::Eliminate {
                        side,
                        column: owner.get(source).copied().unwrap_or(usize::MAX),
                        target: *target,
                        source: *source,
                        factor: factor.to_string(),
                    });
                }
                _ => self.stats.row_scalings += 1,
            }
        }
    }

    fn finish(mut self, degdet: Degree) -> SolveResult {
        self.trace.push(TraceEvent::Terminate { degdet });
        let ws = self.splitting();
        SolveResult::finish(degdet, self.by_card, ws, self.stats, self.violations, self.trace)
    }
}
