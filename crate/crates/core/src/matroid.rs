//! Linear matroids represented by the columns of a matrix.

use std::collections::BTreeSet;

use thiserror::Error;

use crate::exactla::{rank, Matrix};
use crate::scalar::ExactField;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MatroidError {
    #[error("X + {0} is independent, so it contains no circuit")]
    NotDependent(usize),
    #[error("column {0} is outside the ground set")]
    OutOfGround(usize),
}

/// The matroid `M(A)` on the column indices of `A`.
#[derive(Clone, Debug)]
pub struct LinearMatroid<T> {
    generator: Matrix<T>,
}

impl<T: ExactField> LinearMatroid<T> {
    pub fn new(generator: Matrix<T>) -> Self {
        LinearMatroid { generator }
    }

    pub fn generator(&self) -> &Matrix<T> {
        &self.generator
    }

    pub fn ground_size(&self) -> usize {
        self.generator.cols()
    }

    pub fn rank_fn(&self, x: &BTreeSet<usize>) -> usize {
        if x.is_empty() {
            return 0;
        }
        let cols: Vec<usize> = x.iter().copied().collect();
        rank(&self.generator.select_columns(&cols))
    }

    pub fn is_independent(&self, x: &BTreeSet<usize>) -> bool {
        x.len() <= self.generator.rows() && self.rank_fn(x) == x.len()
    }

    /// Whether `j` lies on the unique circuit of `X + i`.
    pub fn in_circuit(&self, x: &BTreeSet<usize>, i: usize, j: usize) -> Result<bool, MatroidError> {
        let m = self.ground_size();
        if i >= m {
            return Err(MatroidError::OutOfGround(i));
        }
        if j >= m {
            return Err(MatroidError::OutOfGround(j));
        }
        let mut xi = x.clone();
        xi.insert(i);
        if self.is_independent(&xi) {
            return Err(MatroidError::NotDependent(i));
        }
        if !x.contains(&j) {
            return Ok(j == i);
        }
        xi.remove(&j);
        Ok(self.is_independent(&xi))
    }
}
