//! Exhaustive ground truth for small instances.

use thiserror::Error;

use crate::exactla::{determinant, Matrix};
use crate::instance::WmiInstance;
use crate::intersect::ColumnSet;
use crate::result::Degree;
use crate::scalar::ExactField;

pub const DEFAULT_CAP: usize = 20;

/// Ground-set cap from `WMI_ORACLE_CAP`, falling back to [`DEFAULT_CAP`].
pub fn default_cap() -> usize {
    std::env::var("WMI_ORACLE_CAP").ok().and_then(|v| v.trim().parse().ok()).unwrap_or(DEFAULT_CAP)
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum OracleError {
    #[error("ground set of size {m} exceeds the oracle cap {cap}")]
    TooLarge { m: usize, cap: usize },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OracleResult {
    /// Maximum weight of a common independent set of each cardinality.
    pub best_by_card: Vec<Option<i64>>,
    pub best_sets: Vec<Option<ColumnSet>>,
    /// Maximum of `c(X)` over `|X| = n` with `det A[X] det B[X] != 0`.
    pub degdet_perfect: Degree,
}

impl OracleResult {
    pub fn max_common_rank(&self) -> usize {
        self.best_by_card.iter().rposition(Option::is_some).unwrap_or(0)
    }
}

/// Incrementally reduced row space used for independence tests.
#[derive(Clone)]
struct Basis<T> {
    vectors: Vec<(usize, Vec<T>)>,
}

impl<T: ExactField> Basis<T> {
    fn new() -> Self {
        Basis { vectors: Vec::new() }
    }

    /// Adds `v` if it is independent of the current vectors.
    fn try_add(&self, mut v: Vec<T>) -> Option<Self> {
        for (p, b) in &self.vectors {
            if !v[*p].is_zero() {
                let f = v[*p].clone() / b[*p].clone();
                for (x, y) in v.iter_mut().zip(b) {
                    *x = x.clone() - f.clone() * y.clone();
                }
            }
        }
        let p = v.iter().position(|x| !x.is_zero())?;
        let mut next = self.clone();
        next.vectors.push((p, v));
        Some(next)
    }
}

pub fn brute_force<T: ExactField>(inst: &WmiInstance<T>, cap: usize) -> Result<OracleResult, OracleError> {
    let (n, m) = (inst.n(), inst.m());
    if m > cap {
        return Err(OracleError::TooLarge { m, cap });
    }
    let mut best: Vec<Option<(i64, ColumnSet)>> = vec![None; n + 1];
    let mut stack = Vec::new();
    dfs(inst, 0, Basis::new(), Basis::new(), &mut stack, &mut best);
    Ok(OracleResult {
        best_by_card: best.iter().map(|b| b.as_ref().map(|x| x.0)).collect(),
        best_sets: best.into_iter().map(|b| b.map(|x| x.1)).collect(),
        degdet_perfect: perfect_degree(inst),
    })
}

fn dfs<T: ExactField>(
    inst: &WmiInstance<T>,
    from: usize,
    ba: Basis<T>,
    bb: Basis<T>,
    stack: &mut Vec<usize>,
    best: &mut [Option<(i64, ColumnSet)>],
) {
    let w = inst.weight_of(stack.iter());
    let slot = &mut best[stack.len()];
    if slot.as_ref().is_none_or(|(v, _)| w > *v) {
        *slot = Some((w, stack.iter().copied().collect()));
    }
    if stack.len() == inst.n() {
        return;
    }
    for i in from..inst.m() {
        // Supersets of a dependent set are never visited.
        let Some(na) = ba.try_add(inst.a().column(i)) else { continue };
        let Some(nb) = bb.try_add(inst.b().column(i)) else { continue };
        stack.push(i);
        dfs(inst, i + 1, na, nb, stack, best);
        stack.pop();
    }
}

/// Binet-Cauchy: the degree is the largest `c(X)` over the `n`-subsets whose
/// minors are both nonzero, as each contributes a distinct monomial.
fn perfect_degree<T: ExactField>(inst: &WmiInstance<T>) -> Degree {
    let (n, m) = (inst.n(), inst.m());
    let rows: Vec<usize> = (0..n).collect();
    let mut best = Degree::MinusInfinity;
    let mut comb: Vec<usize> = (0..n).collect();
    if n > m {
        return best;
    }
    loop {
        let minor = |mat: &Matrix<T>| determinant(&mat.submatrix(&rows, &comb)).map(|d| !d.is_zero()).unwrap_or(false);
        if minor(inst.a()) && minor(inst.b()) {
            best = best.max(Degree::Finite(inst.weight_of(comb.iter())));
        }
        // Next combination in lexicographic order.
        let Some(p) = (0..n).rev().find(|&p| comb[p] != p + m - n) else { break };
        comb[p] += 1;
        for q in p + 1..n {
            comb[q] = comb[q - 1] + 1;
        }
    }
    best
}
