use std::collections::{BTreeMap, BTreeSet};

use crate::exactla::{x_diagonalize, Matrix, RowMap, RowOp, RowOpLog};
use crate::instance::WmiInstance;
use crate::intersect::{augment, build_residual, certificate_from_reachable, ColumnSet, RowBlock};
use crate::result::{CardinalityOptimum, Degree, SolveError, SolveResult, Stats, Violation, WeightSplitting};
use crate::scalar::ExactField;
use crate::trace::{EventCase, GraphSnapshot, Side, TraceEvent};

use super::invariants::{check_block_monotone, check_star_maxima, check_tightness, check_top_rows, check_zero_block};
use super::potential::{extract_zero_part, initial_potential, kappa_exhaustive, tight_triples, Potential};
use super::scheduler::KappaScheduler;
use super::splitting::weight_splitting;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Variant {
    Naive,
    Heap,
}

#[derive(Clone, Copy, Debug, Default)]
pub struct SolveOptions {
    /// Run the structural checks at every step and collect violations.
    pub check_invariants: bool,
    /// Attach `A0` and `B0` to each step-entry trace record.
    pub record_matrices: bool,
}

pub fn solve_naive<T: ExactField>(inst: &WmiInstance<T>, opts: SolveOptions) -> Result<SolveResult, SolveError> {
    solve(inst, Variant::Naive, opts)
}

pub fn solve_heap<T: ExactField>(inst: &WmiInstance<T>, opts: SolveOptions) -> Result<SolveResult, SolveError> {
    solve(inst, Variant::Heap, opts)
}

pub fn solve<T: ExactField>(
    inst: &WmiInstance<T>,
    variant: Variant,
    opts: SolveOptions,
) -> Result<SolveResult, SolveError> {
    SolverState::new(inst, variant, opts).run()
}

pub fn classify_event(in_x: bool, reachable: bool) -> EventCase {
    match (in_x, reachable) {
        (true, false) => EventCase::A1,
        (false, false) => EventCase::A2,
        (true, true) => EventCase::B1,
        (false, true) => EventCase::B2,
    }
}

fn internal(msg: impl std::fmt::Display) -> SolveError {
    SolveError::Internal(msg.to_string())
}

/// Bookkeeping that lives between two augmentations.
#[derive(Default)]
struct Phase {
    block: Option<RowBlock>,
    eliminated: BTreeSet<(Side, usize, usize)>,
    extension_stops: usize,
    scheduler: Option<KappaScheduler>,
    after_kappa: bool,
}

struct SolverState<'a, T> {
    inst: &'a WmiInstance<T>,
    variant: Variant,
    opts: SolveOptions,
    a: Matrix<T>,
    b: Matrix<T>,
    pot: Potential,
    x: ColumnSet,
    sigma_a: RowMap,
    sigma_b: RowMap,
    d_star: i64,
    cumulative: i64,
    phase: Phase,
    by_card: Vec<Option<CardinalityOptimum>>,
    stats: Stats,
    violations: Vec<Violation>,
    trace: Vec<TraceEvent>,
}

impl<'a, T: ExactField> SolverState<'a, T> {
    fn new(inst: &'a WmiInstance<T>, variant: Variant, opts: SolveOptions) -> Self {
        let pot = initial_potential(inst.n(), inst.weights());
        SolverState {
            inst,
            variant,
            opts,
            a: inst.a().clone(),
            b: inst.b().clone(),
            d_star: pot.bound(),
            pot,
            x: ColumnSet::new(),
            sigma_a: RowMap::new(),
            sigma_b: RowMap::new(),
            cumulative: 0,
            phase: Phase::default(),
            by_card: vec![None; inst.n() + 1],
            stats: Stats::default(),
            violations: Vec::new(),
            trace: Vec::new(),
        }
    }

    fn flag(&mut self, v: Option<Violation>) {
        if let Some(v) = v {
            self.violations.push(v);
        }
    }

    fn run(mut self) -> Result<SolveResult, SolveError> {
        let n = self.inst.n();
        let c = self.inst.weights().to_vec();
        let floor = n as i64 * c.iter().copied().min().unwrap_or(0);
        let solver = match self.variant {
            Variant::Naive => "degdet-naive",
            Variant::Heap => "degdet-heap",
        };
        self.trace.push(TraceEvent::Init {
            solver: solver.into(),
            n,
            m: self.inst.m(),
            alpha: self.pot.alpha.clone(),
            beta: self.pot.beta.clone(),
        });
        let mut record_x = true;

        loop {
            // Step 1.
            let (a0, b0) = extract_zero_part(&self.a, &self.b, &c, &self.pot).map_err(internal)?;
            let ws = weight_splitting(&self.b, &self.pot.beta, &c);
            if record_x {
                let weight = self.inst.weight_of(&self.x);
                self.by_card[self.x.len()] =
                    Some(CardinalityOptimum { x: self.x.clone(), weight, splitting: ws.clone() });
                record_x = false;
            }
            if self.opts.check_invariants {
                self.step_entry_checks(&a0, &b0, &ws);
            }
            self.trace.push(TraceEvent::StepEntry {
                x: self.x.iter().copied().collect(),
                alpha: self.pot.alpha.clone(),
                beta: self.pot.beta.clone(),
                a0: self.opts.record_matrices.then(|| a0.to_strings()),
                b0: self.opts.record_matrices.then(|| b0.to_strings()),
            });
            self.trace.push(TraceEvent::SplitSnapshot { c1: ws.c1.clone(), c2: ws.c2.clone() });
            if self.x.len() == n {
                let value = self.pot.bound();
                if self.opts.check_invariants && value != self.inst.weight_of(&self.x) {
                    self.flag(Some(Violation::new("terminal bound", format!("{value} vs c(X)"))));
                }
                return Ok(self.finish(Degree::Finite(value), ws));
            }

            let da = x_diagonalize(&a0, &self.x, &self.sigma_a).map_err(|e| internal(format!("A0: {e}")))?;
            let db = x_diagonalize(&b0, &self.x, &self.sigma_b).map_err(|e| internal(format!("B0: {e}")))?;
            if self.phase.after_kappa && self.variant == Variant::Heap && (da.log.len() + db.log.len()) > 0 {
                self.flag(Some(Violation::new("unscheduled elimination", "row operations left after the root passes")));
            }
            self.replay(Side::A, &da.log, &da.sigma);
            self.replay(Side::B, &db.log, &db.sigma);
            self.sigma_a = da.sigma;
            self.sigma_b = db.sigma;
            let (a0, b0) = (da.matrix, db.matrix);

            // Step 2.
            let g = build_residual(&a0, &b0, &self.x, &self.sigma_a, &self.sigma_b).map_err(internal)?;
            self.trace.push(TraceEvent::Graph(GraphSnapshot::new(&self.x, self.cumulative, &g)));
            if let Some(aug) = augment(&g, &self.x) {
                self.x = aug.x;
                self.stats.augmentations += 1;
                self.trace.push(TraceEvent::Augment {
                    path: aug.path,
                    x: self.x.iter().copied().collect(),
                    k: self.x.len(),
                });
                self.phase = Phase::default();
                record_x = true;
                continue;
            }

            let block = certificate_from_reachable(&self.x, &g.reachable, &self.sigma_a, &self.sigma_b, n);
            if self.opts.check_invariants {
                let z = check_zero_block(&a0, &b0, &block, &g.reachable);
                self.flag(z);
                let s = check_star_maxima(&self.pot, &block);
                self.flag(s);
                if let Some(prev) = &self.phase.block {
                    let mono = check_block_monotone(prev, &block);
                    self.flag(mono);
                }
            }
            self.phase.block = Some(block.clone());

            let (kappa, root) = match self.variant {
                Variant::Naive => {
                    (kappa_exhaustive(&self.a, &self.b, &c, &self.pot, &block.i_rows, &block.j_rows), None)
                }
                Variant::Heap => {
                    let sched = self
                        .phase
                        .scheduler
                        .get_or_insert_with(|| KappaScheduler::new(&c, &self.pot.beta, &block.j_rows));
                    sched.add_rows(block.i_rows.iter().copied(), &self.pot.alpha, &block.j_rows);
                    let root = sched.next_root(&self.a, &self.b, &block.j_rows);
                    if self.opts.check_invariants {
                        let expect = kappa_exhaustive(&self.a, &self.b, &c, &self.pot, &block.i_rows, &block.j_rows);
                        if expect != root.as_ref().map(|r| r.kappa) {
                            self.flag(Some(Violation::new(
                                "scheduler",
                                format!("heap gives {:?}, scan gives {expect:?}", root.as_ref().map(|r| r.kappa)),
                            )));
                        }
                    }
                    (root.as_ref().map(|r| r.kappa), root)
                }
            };
            let Some(kappa) = kappa else {
                return Ok(self.finish(Degree::MinusInfinity, ws));
            };
            if self.opts.check_invariants && kappa < 1 {
                self.flag(Some(Violation::new("kappa", format!("non-positive increase {kappa}"))));
            }

            self.pot.shift(kappa, &block.i_rows, &block.j_rows);
            self.d_star -= kappa * (block.i_rows.len() + block.j_rows.len()) as i64 - kappa * n as i64;
            self.cumulative += kappa;
            self.stats.dual_steps += 1;
            if let Some(s) = self.phase.scheduler.as_mut() {
                s.apply(kappa);
            }
            self.trace.push(TraceEvent::KappaIncrease {
                kappa,
                i_rows: block.i_rows.iter().copied().collect(),
                j_rows: block.j_rows.iter().copied().collect(),
                i_star: block.i_star.iter().copied().collect(),
                j_star: block.j_star.iter().copied().collect(),
                cumulative: self.cumulative,
                alpha: self.pot.alpha.clone(),
                beta: self.pot.beta.clone(),
            });
            if self.pot.bound() < floor {
                return Ok(self.finish(Degree::MinusInfinity, ws));
            }

            let triples = match &root {
                None => tight_triples(&self.a, &self.b, &c, &self.pot, &block.i_rows, &block.j_rows),
                Some(r) => {
                    let hits: Vec<_> = r
                        .triples
                        .iter()
                        .copied()
                        .filter(|&(i, k, l)| self.a.is_nonzero(k, i) && self.b.is_nonzero(l, i))
                        .collect();
                    if self.opts.check_invariants {
                        let all = tight_triples(&self.a, &self.b, &c, &self.pot, &block.i_rows, &block.j_rows);
                        if all != hits {
                            self.flag(Some(Violation::new("scheduler", "root misses a tight triple")));
                        }
                    }
                    hits
                }
            };
            let mut extends = false;
            for &(i, k, l) in &triples {
                let case = classify_event(self.x.contains(&i), g.reachable.contains(&i));
                match case {
                    EventCase::A1 => self.stats.a1 += 1,
                    EventCase::A2 => self.stats.a2 += 1,
                    EventCase::B1 => self.stats.b1 += 1,
                    EventCase::B2 => self.stats.b2 += 1,
                }
                extends |= matches!(case, EventCase::A2 | EventCase::B2);
                self.trace.push(TraceEvent::Event { i, k, l, case });
            }
            if extends {
                self.phase.extension_stops += 1;
                if self.opts.check_invariants && self.phase.extension_stops > 2 * n + 2 {
                    self.flag(Some(Violation::new(
                        "event budget",
                        format!("{} extension stops", self.phase.extension_stops),
                    )));
                }
            }
            if let Some(r) = &root {
                self.root_passes(&r.triples, &g.reachable, &block);
            }
            self.phase.after_kappa = true;
        }
    }

    fn step_entry_checks(&mut self, a0: &Matrix<T>, b0: &Matrix<T>, ws: &WeightSplitting) {
        let va = check_top_rows('A', &self.a, a0, &self.pot.alpha);
        self.flag(va);
        let vb = check_top_rows('B', &self.b, b0, &self.pot.beta);
        self.flag(vb);
        let vt = check_tightness(a0, b0, &self.pot, ws);
        self.flag(vt);
        if self.d_star != self.pot.bound() {
            let d = format!("running bound {} vs {}", self.d_star, self.pot.bound());
            self.flag(Some(Violation::new("bound bookkeeping", d)));
        }
    }

    /// Processes the root triples in lexicographic order until a pass needs no
    /// row operation; a third pass with operations is a violation.
    fn root_passes(&mut self, triples: &[(usize, usize, usize)], reachable: &ColumnSet, block: &RowBlock) {
        let mut touched_a = BTreeSet::new();
        let mut touched_b = false;
        for pass in 1.. {
            self.stats.root_passes += 1;
            let mut ops = 0;
            for &(i, k, l) in triples {
                if !self.x.contains(&i) || !self.a.is_nonzero(k, i) || !self.b.is_nonzero(l, i) {
                    continue;
                }
                if !reachable.contains(&i) {
                    let src = self.sigma_a[&i];
                    if k != src {
                        let f = -self.a[(k, i)].clone();
                        self.eliminate(Side::A, i, k, src, f);
                        touched_a.insert(k);
                        ops += 1;
                    }
                } else {
                    let src = self.sigma_b[&i];
                    if l != src {
                        let f = -self.b[(l, i)].clone();
                        self.eliminate(Side::B, i, l, src, f);
                        touched_b = true;
                        ops += 1;
                    }
                }
            }
            if ops == 0 {
                break;
            }
            if pass >= 3 {
                self.flag(Some(Violation::new("root rescans", format!("pass {pass} still eliminating"))));
                if pass >= 8 {
                    break;
                }
            }
        }
        let alpha = self.pot.alpha.clone();
        if let Some(s) = self.phase.scheduler.as_mut() {
            if touched_b {
                s.reset_all(&alpha, &block.j_rows);
                self.stats.head_resets += 1;
            } else {
                for &k in &touched_a {
                    s.reset_row(k, &alpha, &block.j_rows);
                    self.stats.head_resets += 1;
                }
            }
        }
    }

    fn eliminate(&mut self, side: Side, column: usize, target: usize, source: usize, factor: T) {
        let m = match side {
            Side::A => &mut self.a,
            Side::B => &mut self.b,
        };
        m.add_row_multiple(target, source, &factor);
        self.stats.row_ops += 1;
        if !self.phase.eliminated.insert((side, column, target)) && self.opts.check_invariants {
            self.violations
                .push(Violation::new("elimination recurrence", format!("{side:?} column {column} row {target}")));
        }
        self.trace.push(TraceEvent::Eliminate { side, column, target, source, factor: factor.to_string() });
    }

    /// Applies a diagonalization log of `A0` (or `B0`) to the full matrix.
    fn replay(&mut self, side: Side, log: &RowOpLog<T>, sigma: &RowMap) {
        let owner: BTreeMap<usize, usize> = sigma.iter().map(|(&col, &row)| (row, col)).collect();
        for op in log.iter() {
            match op {
                RowOp::AddMultiple { target, source, factor } => {
                    let column = owner.get(source).copied().unwrap_or(usize::MAX);
                    self.eliminate(side, column, *target, *source, factor.clone());
                }
                other => {
                    self.stats.row_scalings += 1;
                    match side {
                        Side::A => self.a.apply(other),
                        Side::B => self.b.apply(other),
                    }
                }
            }
        }
    }

    fn finish(mut self, degdet: Degree, ws: WeightSplitting) -> SolveResult {
        self.trace.push(TraceEvent::Terminate { degdet });
        SolveResult::finish(degdet, self.by_card, ws, self.stats, self.violations, self.trace)
    }
}
