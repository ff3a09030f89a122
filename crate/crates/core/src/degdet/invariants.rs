//! Structural checks on solver states. Each returns the first violation found.

use crate::exactla::Matrix;
use crate::intersect::{ColumnSet, RowBlock};
use crate::result::{Violation, WeightSplitting};
use crate::scalar::ExactField;

use super::potential::Potential;

/// If `(m0)_{k,i} != 0` then rows at the same potential agree with `m`, and
/// rows at a higher potential are zero in `m`.
pub fn check_top_rows<T: ExactField>(name: char, m: &Matrix<T>, m0: &Matrix<T>, pot: &[i64]) -> Option<Violation> {
    for i in 0..m.cols() {
        let Some(k) = (0..m.rows()).find(|&k| m0.is_nonzero(k, i)) else {
            continue;
        };
        for r in 0..m.rows() {
            let bad = if pot[r] == pot[k] { m0[(r, i)] != m[(r, i)] } else { pot[r] > pot[k] && m.is_nonzero(r, i) };
            if bad {
                return Some(Violation::new("top-row structure", format!("{name}: column {i}, rows {k} and {r}")));
            }
        }
    }
    None
}

/// Nonzero rows of a surviving column sit at potential `-c1_i` (resp. `-c2_i`).
pub fn check_tightness<T: ExactField>(
    a0: &Matrix<T>,
    b0: &Matrix<T>,
    p: &Potential,
    ws: &WeightSplitting,
) -> Option<Violation> {
    for i in 0..a0.cols() {
        if a0.is_zero_column(i) != b0.is_zero_column(i) {
            return Some(Violation::new("tightness", format!("column {i} survives on one side only")));
        }
        if a0.is_zero_column(i) {
            continue;
        }
        for r in 0..a0.rows() {
            if a0.is_nonzero(r, i) && p.alpha[r] != -ws.c1[i] {
                return Some(Violation::new("tightness", format!("A0 column {i} row {r}")));
            }
            if b0.is_nonzero(r, i) && p.beta[r] != -ws.c2[i] {
                return Some(Violation::new("tightness", format!("B0 column {i} row {r}")));
            }
        }
    }
    None
}

/// The block `I x J` of the top-degree part of `sum a_i b_i^T x_i` vanishes
/// term by term: `A0[I, i] = 0` off `R` and `B0[J, i] = 0` on `R`.
pub fn check_zero_block<T: ExactField>(
    a0: &Matrix<T>,
    b0: &Matrix<T>,
    block: &RowBlock,
    reachable: &ColumnSet,
) -> Option<Violation> {
    for i in 0..a0.cols() {
        if reachable.contains(&i) {
            if let Some(l) = block.j_rows.iter().find(|&&l| b0.is_nonzero(l, i)) {
                return Some(Violation::new("zero block", format!("B0[{l}, {i}] inside J for reachable column")));
            }
        } else if let Some(k) = block.i_rows.iter().find(|&&k| a0.is_nonzero(k, i)) {
            return Some(Violation::new("zero block", format!("A0[{k}, {i}] inside I for unreachable column")));
        }
    }
    None
}

/// The largest `alpha` is attained on every row of `I*`, the largest `beta` on `J*`.
pub fn check_star_maxima(p: &Potential, block: &RowBlock) -> Option<Violation> {
    let amax = p.alpha.iter().copied().max()?;
    let bmax = p.beta.iter().copied().max()?;
    if let Some(k) = block.i_star.iter().find(|&&k| p.alpha[k] != amax) {
        return Some(Violation::new("star maxima", format!("alpha[{k}] below max on I*")));
    }
    if let Some(l) = block.j_star.iter().find(|&&l| p.beta[l] != bmax) {
        return Some(Violation::new("star maxima", format!("beta[{l}] below max on J*")));
    }
    None
}

/// Within one phase `I*`, `J*` stay fixed, `I` only grows and `J` only shrinks.
pub fn check_block_monotone(prev: &RowBlock, next: &RowBlock) -> Option<Violation> {
    if prev.i_star != next.i_star || prev.j_star != next.j_star {
        return Some(Violation::new("frontier monotonicity", "I* or J* changed without augmentation"));
    }
    if !next.i_star.is_subset(&next.i_rows) || !next.j_star.is_subset(&next.j_rows) {
        return Some(Violation::new("frontier monotonicity", "I* or J* not contained in I or J"));
    }
    if !prev.i_rows.is_subset(&next.i_rows) || !next.j_rows.is_subset(&prev.j_rows) {
        return Some(Violation::new("frontier monotonicity", "I shrank or J grew"));
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ExactMatrix;

    #[test]
    fn top_rows_detects_higher_nonzero() {
        let a = ExactMatrix::from_ints(&[[1], [1]]);
        let a0 = ExactMatrix::from_ints(&[[0], [1]]);
        assert!(check_top_rows('A', &a, &a0, &[0, -1]).is_some());
        assert!(check_top_rows('A', &a, &a0, &[-1, 0]).is_none());
    }

    #[test]
    fn star_maxima() {
        let p = Potential { alpha: vec![0, -1], beta: vec![0, 0] };
        let block = RowBlock { i_rows: [0, 1].into(), j_rows: [0].into(), i_star: [1].into(), j_star: [0].into() };
        assert!(check_star_maxima(&p, &block).is_some());
    }
}
