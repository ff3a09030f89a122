//! Timing and elimination counts per solver.

use std::time::{Duration, Instant};

use crate::degdet::SolveOptions;
use crate::gen::{generate, GenError, GenParams};
use crate::instance::WmiInstance;
use crate::result::{Degree, SolveError, Stats};
use crate::scalar::ExactField;
use crate::solvers::Solver;
use crate::Rational;

#[derive(Clone, Debug, PartialEq)]
pub struct BenchRow {
    pub label: String,
    pub n: usize,
    pub m: usize,
    pub solver: Solver,
    pub median: Duration,
    pub degdet: Degree,
    /// Counts from the first repeat; solves are deterministic.
    pub stats: Stats,
}

fn median(mut v: Vec<Duration>) -> Duration {
    v.sort_unstable();
    v[v.len() / 2]
}

/// Solves `inst` `repeats` times with each solver, sequentially.
pub fn bench_instance<T: ExactField>(
    label: &str,
    inst: &WmiInstance<T>,
    solvers: &[Solver],
    repeats: usize,
) -> Result<Vec<BenchRow>, SolveError> {
    let repeats = repeats.max(1);
    let mut rows = Vec::with_capacity(solvers.len());
    for &solver in solvers {
        let mut times = Vec::with_capacity(repeats);
        let mut first = None;
        for _ in 0..repeats {
            let start = Instant::now();
            let r = solver.run(inst, SolveOptions::default())?;
            times.push(start.elapsed());
            first.get_or_insert(r);
        }
        let r = first.expect("at least one repeat");
        rows.push(BenchRow {
            label: label.to_string(),
            n: inst.n(),
            m: inst.m(),
            solver,
            median: median(times),
            degdet: r.degdet,
            stats: r.stats,
        });
    }
    Ok(rows)
}

#[derive(Debug, thiserror::Error)]
pub enum BenchError {
    #[error(transparent)]
    Gen(#[from] GenError),
    #[error(transparent)]
    Solve(#[from] SolveError),
}

/// One seeded instance with `m = 2n` per size.
pub fn bench_sizes(
    sizes: &[usize],
    seed: u64,
    repeats: usize,
    solvers: &[Solver],
) -> Result<Vec<BenchRow>, BenchError> {
    let mut rows = Vec::new();
    for &n in sizes {
        let inst: WmiInstance<Rational> = generate(seed, &GenParams::new(n, 2 * n))?;
        rows.extend(bench_instance(&format!("n={n} m={}", 2 * n), &inst, solvers, repeats)?);
    }
    Ok(rows)
}

/// Ratios of consecutive median times for one solver, in row order.
pub fn growth_factors(rows: &[BenchRow], solver: Solver) -> Vec<f64> {
    let times: Vec<f64> = rows.iter().filter(|r| r.solver == solver).map(|r| r.median.as_secs_f64()).collect();
    times.windows(2).map(|w| w[1] / w[0].max(f64::MIN_POSITIVE)).collect()
}

pub fn render_table(rows: &[BenchRow]) -> String {
    let mut out = format!(
        "{:<14} {:<15} {:>12} {:>8} {:>6} {:>6} {:>6} {:>6} {:>8}\n",
        "instance", "solver", "median", "row ops", "A1", "A2", "B1", "B2", "degdet"
    );
    for r in rows {
        let s = &r.stats;
        out.push_str(&format!(
            "{:<14} {:<15} {:>12} {:>8} {:>6} {:>6} {:>6} {:>6} {:>8}\n",
            r.label,
            r.solver.name(),
            format!("{:.3?}", r.median),
            s.row_ops,
            s.a1,
            s.a2,
            s.b1,
            s.b2,
            r.degdet.to_string()
        ));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn counts_are_deterministic() {
        let a = bench_sizes(&[3], 7, 1, &Solver::ALL).unwrap();
        let b = bench_sizes(&[3], 7, 2, &Solver::ALL).unwrap();
        assert_eq!(a.len(), 4);
        for (x, y) in a.iter().zip(&b) {
            assert_eq!(x.stats, y.stats);
            assert_eq!(x.degdet, y.degdet);
        }
        assert_eq!(growth_factors(&a, Solver::Frank).len(), 0);
    }
}
