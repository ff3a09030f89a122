//! Row potentials `(alpha, beta)` and the top-degree parts `A0`, `B0`.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::exactla::Matrix;
use crate::intersect::RowSet;
use crate::scalar::ExactField;

/// Exponent vectors of the diagonal scalings `t^alpha` and `t^beta`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Potential {
    pub alpha: Vec<i64>,
    pub beta: Vec<i64>,
}

impl Potential {
    /// `-sum(alpha + beta)`, an upper bound on the degree of the determinant.
    pub fn bound(&self) -> i64 {
        -(self.alpha.iter().sum::<i64>() + self.beta.iter().sum::<i64>())
    }

    /// `alpha += kappa on I`, `beta -= kappa off J`.
    pub fn shift(&mut self, kappa: i64, i_rows: &RowSet, j_rows: &RowSet) {
        for &k in i_rows {
            self.alpha[k] += kappa;
        }
        for (l, b) in self.beta.iter_mut().enumerate() {
            if !j_rows.contains(&l) {
                *b -= kappa;
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("potential is not proper at column {i}: rows ({k}, {l}) give {value} > 0")]
pub struct NotProper {
    pub i: usize,
    pub k: usize,
    pub l: usize,
    pub value: i64,
}

/// `alpha = -max(c) 1`, `beta = 0`.
pub fn initial_potential(n: usize, c: &[i64]) -> Potential {
    let top = c.iter().copied().max().unwrap_or(0);
    Potential { alpha: vec![-top; n], beta: vec![0; n] }
}

/// Highest potential over the nonzero rows of column `i`, with its row.
pub(crate) fn top_row<T: ExactField>(m: &Matrix<T>, pot: &[i64], i: usize) -> Option<(i64, usize)> {
    (0..m.rows()).filter(|&k| m.is_nonzero(k, i)).map(|k| (pot[k], k)).max_by_key(|&(v, k)| (v, std::cmp::Reverse(k)))
}

/// Top-degree parts of `(t^alpha) A` and `B^T (t^beta)`.
///
/// Column `i` survives exactly when `max alpha + max beta + c_i = 0` over its
/// nonzero rows, and then only on the rows attaining the maxima.
pub fn extract_zero_part<T: ExactField>(
    a: &Matrix<T>,
    b: &Matrix<T>,
    c: &[i64],
    p: &Potential,
) -> Result<(Matrix<T>, Matrix<T>), NotProper> {
    let (n, m) = (a.rows(), a.cols());
    let mut a0 = Matrix::zeros(n, m);
    let mut b0 = Matrix::zeros(n, m);
    for i in 0..m {
        let (Some((ta, k)), Some((tb, l))) = (top_row(a, &p.alpha, i), top_row(b, &p.beta, i)) else {
            continue;
        };
        let value = ta + tb + c[i];
        if value > 0 {
            return Err(NotProper { i, k, l, value });
        }
        if value < 0 {
            continue;
        }
        for r in 0..n {
            if p.alpha[r] == ta && a.is_nonzero(r, i) {
                a0.set(r, i, a[(r, i)].clone());
            }
            if p.beta[r] == tb && b.is_nonzero(r, i) {
                b0.set(r, i, b[(r, i)].clone());
            }
        }
    }
    Ok((a0, b0))
}

/// `-max { c_i + alpha_k + beta_l : k in I, l in J, (a_i)_k (b_i)_l != 0 }`
/// by scanning every triple; `None` when the block has no nonzero product.
pub fn kappa_exhaustive<T: ExactField>(
    a: &Matrix<T>,
    b: &Matrix<T>,
    c: &[i64],
    p: &Potential,
    i_rows: &RowSet,
    j_rows: &RowSet,
) -> Option<i64> {
    let mut best: Option<i64> = None;
    for i in 0..a.cols() {
        for &k in i_rows {
            if !a.is_nonzero(k, i) {
                continue;
            }
            for &l in j_rows {
                if b.is_nonzero(l, i) {
                    let v = c[i] + p.alpha[k] + p.beta[l];
                    best = Some(best.map_or(v, |w| w.max(v)));
                }
            }
        }
    }
    best.map(|v| -v)
}

/// Every `(i, k, l)` with `k in I`, `l in J`, a nonzero product and value 0.
pub fn tight_triples<T: ExactField>(
    a: &Matrix<T>,
    b: &Matrix<T>,
    c: &[i64],
    p: &Potential,
    i_rows: &RowSet,
    j_rows: &RowSet,
) -> Vec<(usize, usize, usize)> {
    let mut out = Vec::new();
    for i in 0..a.cols() {
        for &k in i_rows {
            if !a.is_nonzero(k, i) {
                continue;
            }
            for &l in j_rows {
                if b.is_nonzero(l, i) && c[i] + p.alpha[k] + p.beta[l] == 0 {
                    out.push((i, k, l));
                }
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ExactMatrix;
    use proptest::prelude::*;

    fn worked() -> (ExactMatrix, ExactMatrix, Vec<i64>) {
        let a = ExactMatrix::from_ints(&[[0, 0, 1, 0, 1], [1, 1, 0, 0, 0], [0, 0, -1, 1, 1], [0, 1, 0, 1, 0]]);
        let b = ExactMatrix::from_ints(&[[1, 1, 1, 0, 1], [0, 0, 0, 1, 1], [0, 0, 0, 0, -1], [0, 1, 0, 1, 1]]);
        (a, b, vec![3, 2, 3, 1, 1])
    }

    /// Entry-by-entry definition: keep `(a_i)_k` iff some `l` makes the
    /// triple tight with a nonzero product.
    fn zero_part_literal(a: &ExactMatrix, b: &ExactMatrix, c: &[i64], p: &Potential) -> (ExactMatrix, ExactMatrix) {
        let (n, m) = (a.rows(), a.cols());
        let mut a0 = ExactMatrix::zeros(n, m);
        let mut b0 = ExactMatrix::zeros(n, m);
        for i in 0..m {
            for k in 0..n {
                for l in 0..n {
                    if a.is_nonzero(k, i) && b.is_nonzero(l, i) && p.alpha[k] + p.beta[l] + c[i] == 0 {
                        a0.set(k, i, a[(k, i)].clone());
                        b0.set(l, i, b[(l, i)].clone());
                    }
                }
            }
        }
        (a0, b0)
    }

    #[test]
    fn worked_example_zero_parts() {
        let (a, b, c) = worked();
        let p = Potential { alpha: vec![-2; 4], beta: vec![-1, 0, 0, 0] };
        let (a0, b0) = extract_zero_part(&a, &b, &c, &p).unwrap();
        assert_eq!(a0, ExactMatrix::from_ints(&[[0, 0, 1, 0, 0], [1, 1, 0, 0, 0], [0, 0, -1, 0, 0], [0, 1, 0, 0, 0]]));
        assert_eq!(b0, ExactMatrix::from_ints(&[[1, 0, 1, 0, 0], [0, 0, 0, 0, 0], [0, 0, 0, 0, 0], [0, 1, 0, 0, 0]]));
    }

    #[test]
    fn initial_potential_formula() {
        let (a, b, c) = worked();
        let p = initial_potential(4, &c);
        assert_eq!(p.alpha, vec![-3; 4]);
        assert_eq!(p.beta, vec![0; 4]);
        assert!(extract_zero_part(&a, &b, &c, &p).is_ok());
        assert_eq!(initial_potential(2, &[0, 0]).alpha, vec![0, 0]);
        assert_eq!(initial_potential(3, &[7, 1]).alpha, vec![-7; 3]);
    }

    #[test]
    fn all_tight_and_none_tight() {
        let (a, b, _) = worked();
        let zero = vec![0; 5];
        let p = Potential { alpha: vec![0; 4], beta: vec![0; 4] };
        let (a0, b0) = extract_zero_part(&a, &b, &zero, &p).unwrap();
        assert_eq!((a0, b0), (a.clone(), b.clone()));
        let lowered = Potential { alpha: vec![-1; 4], beta: vec![0; 4] };
        let (a0, b0) = extract_zero_part(&a, &b, &zero, &lowered).unwrap();
        assert!(a0.is_zero() && b0.is_zero());
    }

    #[test]
    fn improper_potential_is_reported() {
        let (a, b, c) = worked();
        let p = Potential { alpha: vec![0; 4], beta: vec![0; 4] };
        let err = extract_zero_part(&a, &b, &c, &p).unwrap_err();
        assert_eq!(err.i, 0);
        assert_eq!(err.value, 3);
    }

    #[test]
    fn worked_example_kappa() {
        let (a, b, c) = worked();
        let mut a = a;
        // Elimination of (a_2)_2 performed by the solver at this state.
        a.add_row_multiple(1, 3, &crate::Rational::from_int(-1));
        let mut p = Potential { alpha: vec![-2; 4], beta: vec![-1, 0, 0, 0] };
        let i: RowSet = [0, 1, 2].into();
        let j: RowSet = [1, 2, 3].into();
        assert_eq!(kappa_exhaustive(&a, &b, &c, &p, &i, &j), Some(1));
        p.shift(1, &i, &j);
        assert_eq!(p.alpha, vec![-1, -1, -1, -2]);
        assert_eq!(p.beta, vec![-2, 0, 0, 0]);
        assert!(extract_zero_part(&a, &b, &c, &p).is_ok());
        let t = tight_triples(&a, &b, &c, &p, &i, &j);
        assert!(t.iter().all(|&(col, _, _)| col == 3 || col == 4), "{t:?}");
    }

    fn proper_state() -> impl Strategy<Value = (ExactMatrix, ExactMatrix, Vec<i64>, Potential)> {
        (1usize..=4, 1usize..=6).prop_flat_map(|(n, m)| {
            let mat = prop::collection::vec(prop::collection::vec(-1i64..=1, m), n)
                .prop_map(|rows| ExactMatrix::from_ints(&rows));
            (
                mat.clone(),
                mat,
                prop::collection::vec(-3i64..=3, m),
                prop::collection::vec(-3i64..=3, n),
                prop::collection::vec(-3i64..=3, n),
            )
                .prop_map(|(a, b, c, alpha, beta)| {
                    // Lower every weight until the potential is proper.
                    let c: Vec<i64> = (0..a.cols())
                        .map(|i| {
                            let ta = top_row(&a, &alpha, i).map_or(0, |t| t.0);
                            let tb = top_row(&b, &beta, i).map_or(0, |t| t.0);
                            c[i].min(-ta - tb)
                        })
                        .collect();
                    (a, b, c, Potential { alpha, beta })
                })
        })
    }

    proptest! {
        #[test]
        fn shortcut_matches_literal_definition((a, b, c, p) in proper_state()) {
            let fast = extract_zero_part(&a, &b, &c, &p).unwrap();
            prop_assert_eq!(fast, zero_part_literal(&a, &b, &c, &p));
        }

        #[test]
        fn kappa_keeps_properness((a, b, c, p) in proper_state(), imask in 0u32..16, jmask in 0u32..16) {
            let n = a.rows();
            let i: RowSet = (0..n).filter(|k| imask >> k & 1 == 1).collect();
            let j: RowSet = (0..n).filter(|k| jmask >> k & 1 == 1).collect();
            // Only blocks that are strictly below tight are admissible.
            prop_assume!(tight_triples(&a, &b, &c, &p, &i, &j).is_empty());
            if let Some(kappa) = kappa_exhaustive(&a, &b, &c, &p, &i, &j) {
                prop_assert!(kappa >= 1);
                let mut q = p.clone();
                q.shift(kappa, &i, &j);
                prop_assert!(!tight_triples(&a, &b, &c, &q, &i, &j).is_empty());
                prop_assert!(extract_zero_part(&a, &b, &c, &q).is_ok());
            }
        }
    }
}
