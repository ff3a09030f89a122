//! Weight splittings read off the potential, and their verification.

use thiserror::Error;

use crate::exactla::{x_diagonalize, Matrix, RowMap};
use crate::instance::WmiInstance;
use crate::intersect::ColumnSet;
use crate::result::WeightSplitting;
use crate::scalar::ExactField;

use super::potential::top_row;

/// `c2_i = -max { beta_l : (b_i)_l != 0 }` on the current `B`, `c1 = c - c2`.
pub fn weight_splitting<T: ExactField>(b: &Matrix<T>, beta: &[i64], c: &[i64]) -> WeightSplitting {
    let c2: Vec<i64> = (0..b.cols()).map(|i| -top_row(b, beta, i).map_or(0, |t| t.0)).collect();
    let c1 = c.iter().zip(&c2).map(|(w, s)| w - s).collect();
    WeightSplitting { c1, c2 }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CertificateFailure {
    #[error("splitting does not sum to the weights at column {0}")]
    Sum(usize),
    #[error("splitting has the wrong length")]
    Length,
    #[error("X is dependent in {0}")]
    Dependent(char),
    #[error("exchanging {out} for {into} improves c{side} in M({matroid})", side = if *.matroid == 'A' { 1 } else { 2 })]
    Exchange { matroid: char, into: usize, out: usize },
}

/// Checks that `X` is common independent, `c1 + c2 = c`, and that no single
/// exchange `X + i - j` within either matroid improves the matching part.
pub fn check_splitting_certificate<T: ExactField>(
    inst: &WmiInstance<T>,
    x: &ColumnSet,
    ws: &WeightSplitting,
) -> Result<(), CertificateFailure> {
    let c = inst.weights();
    if ws.c1.len() != c.len() || ws.c2.len() != c.len() {
        return Err(CertificateFailure::Length);
    }
    if let Some(i) = (0..c.len()).find(|&i| ws.c1[i] + ws.c2[i] != c[i]) {
        return Err(CertificateFailure::Sum(i));
    }
    for (name, mat, part) in [('A', inst.a(), &ws.c1), ('B', inst.b(), &ws.c2)] {
        let diag = x_diagonalize(mat, x, &RowMap::new()).map_err(|_| CertificateFailure::Dependent(name))?;
        let used: ColumnSet = diag.sigma.values().copied().collect();
        for i in (0..c.len()).filter(|i| !x.contains(i)) {
            let free = (0..mat.rows()).any(|r| !used.contains(&r) && diag.matrix.is_nonzero(r, i));
            for &j in x {
                // X + i - j is independent iff i is free or j is on the circuit of X + i.
                let exchangeable = free || diag.matrix.is_nonzero(diag.sigma[&j], i);
                if exchangeable && part[i] > part[j] {
                    return Err(CertificateFailure::Exchange { matroid: name, into: i, out: j });
                }
            }
        }
    }
    Ok(())
}

pub fn verify_splitting_certificate<T: ExactField>(inst: &WmiInstance<T>, x: &ColumnSet, ws: &WeightSplitting) -> bool {
    check_splitting_certificate(inst, x, ws).is_ok()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matroid::LinearMatroid;
    use crate::{ExactMatrix, Rational};
    use proptest::prelude::*;

    fn worked() -> WmiInstance<Rational> {
        let a = ExactMatrix::from_ints(&[[0, 0, 1, 0, 1], [1, 1, 0, 0, 0], [0, 0, -1, 1, 1], [0, 1, 0, 1, 0]]);
        let b = ExactMatrix::from_ints(&[[1, 1, 1, 0, 1], [0, 0, 0, 1, 1], [0, 0, 0, 0, -1], [0, 1, 0, 1, 1]]);
        WmiInstance::new(a, b, vec![3, 2, 3, 1, 1]).unwrap()
    }

    #[test]
    fn splitting_at_worked_state() {
        let inst = worked();
        let ws = weight_splitting(inst.b(), &[-1, 0, 0, 0], inst.weights());
        assert_eq!(ws.c2[0], 1);
        assert_eq!(ws.c1[0], 2);
        assert!(verify_splitting_certificate(&inst, &[0, 1].into(), &ws));
    }

    #[test]
    fn zero_weights_split_trivially() {
        let inst = WmiInstance::new(ExactMatrix::identity(2), ExactMatrix::identity(2), vec![0, 0]).unwrap();
        let ws = weight_splitting(inst.b(), &[0, 0], inst.weights());
        assert_eq!(ws, WeightSplitting { c1: vec![0, 0], c2: vec![0, 0] });
        assert!(verify_splitting_certificate(&inst, &ColumnSet::new(), &ws));
    }

    #[test]
    fn mutations_are_caught() {
        let inst = worked();
        let ws = weight_splitting(inst.b(), &[-1, 0, 0, 0], inst.weights());
        let mut bad = ws.clone();
        bad.c1[0] += 1;
        assert_eq!(check_splitting_certificate(&inst, &[0, 1].into(), &bad), Err(CertificateFailure::Sum(0)));
        // Keep the sum but make column 3 look better than column 1 in M(A).
        let mut shifted = ws.clone();
        shifted.c1[2] += 5;
        shifted.c2[2] -= 5;
        assert!(matches!(
            check_splitting_certificate(&inst, &[0, 1].into(), &shifted),
            Err(CertificateFailure::Exchange { matroid: 'A', .. })
        ));
        assert_eq!(
            check_splitting_certificate(&inst, &[0, 1, 2, 3, 4].into(), &ws),
            Err(CertificateFailure::Dependent('A'))
        );
    }

    fn exchange_by_rank(m: &LinearMatroid<Rational>, x: &ColumnSet, i: usize, j: usize) -> bool {
        let mut y = x.clone();
        y.remove(&j);
        y.insert(i);
        m.is_independent(&y)
    }

    proptest! {
        #[test]
        fn exchange_test_matches_rank_oracle(
            rows in prop::collection::vec(prop::collection::vec(-2i64..=2, 6), 3),
            c1 in prop::collection::vec(-3i64..=3, 6),
            mask in 0u32..64,
        ) {
            let a = ExactMatrix::from_ints(&rows);
            prop_assume!((0..6).all(|i| !a.is_zero_column(i)));
            let inst = WmiInstance::new(a.clone(), ExactMatrix::from_ints(&[[1; 6], [0; 6], [0; 6]]), c1.clone()).unwrap();
            let ma = LinearMatroid::new(a);
            let mut x = ColumnSet::new();
            for i in (0..6).filter(|i| mask >> i & 1 == 1) {
                x.insert(i);
                if !ma.is_independent(&x) || x.len() > 1 {
                    x.remove(&i);
                }
            }
            let ws = WeightSplitting { c1: c1.clone(), c2: vec![0; 6] };
            let expected = (0..6).filter(|i| !x.contains(i)).all(|i| {
                x.iter().all(|&j| !exchange_by_rank(&ma, &x, i, j) || c1[i] <= c1[j])
            });
            prop_assert_eq!(verify_splitting_certificate(&inst, &x, &ws), expected);
        }
    }
}
