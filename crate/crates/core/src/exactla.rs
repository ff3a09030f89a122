//! Dense exact linear algebra: matrices, rank, row-operation logs and
//! X-diagonalization with a persistent column-to-row map.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::ops::Index;

use num_traits::Zero;
use thiserror::Error;

use crate::scalar::ExactField;

/// Injective map from a column of `X` to the row holding its unit entry.
pub type RowMap = BTreeMap<usize, usize>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LinalgError {
    #[error("columns are linearly dependent (column {column} has no pivot)")]
    DependentColumns { column: usize },
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("matrix is not square ({rows}x{cols})")]
    NotSquare { rows: usize, cols: usize },
    #[error("index out of range: {0}")]
    OutOfRange(String),
}

/// Row-major dense matrix over an exact field.
#[derive(Clone, PartialEq)]
pub struct Matrix<T> {
    rows: usize,
    cols: usize,
    data: Vec<T>,
}

impl<T: ExactField> Matrix<T> {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix { rows, cols, data: vec![T::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for k in 0..n {
            m.set(k, k, T::one());
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<T>>) -> Result<Self, LinalgError> {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|row| row.len() != c) {
            return Err(LinalgError::DimensionMismatch("ragged rows".into()));
        }
        Ok(Matrix { rows: r, cols: c, data: rows.into_iter().flatten().collect() })
    }

    /// Convenience constructor for integer matrices.
    pub fn from_ints<R: AsRef<[i64]>>(rows: &[R]) -> Self {
        let v = rows.iter().map(|row| row.as_ref().iter().map(|&x| T::from_int(x)).collect()).collect();
        Self::from_rows(v).expect("integer rows must be rectangular")
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, r: usize, c: usize) -> Option<&T> {
        if r < self.rows && c < self.cols {
            Some(&self.data[r * self.cols + c])
        } else {
            None
        }
    }

    pub fn set(&mut self, r: usize, c: usize, v: T) {
        assert!(r < self.rows && c < self.cols, "entry ({r},{c}) out of {}x{}", self.rows, self.cols);
        self.data[r * self.cols + c] = v;
    }

    pub fn is_nonzero(&self, r: usize, c: usize) -> bool {
        !self[(r, c)].is_zero()
    }

    pub fn row(&self, r: usize) -> &[T] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn column(&self, c: usize) -> Vec<T> {
        (0..self.rows).map(|r| self[(r, c)].clone()).collect()
    }

    pub fn is_zero_column(&self, c: usize) -> bool {
        (0..self.rows).all(|r| self[(r, c)].is_zero())
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Zero::is_zero)
    }

    /// `M[I, J]` with rows and columns in the given order.
    pub fn submatrix(&self, rows: &[usize], cols: &[usize]) -> Matrix<T> {
        let mut out = Matrix::zeros(rows.len(), cols.len());
        for (a, &r) in rows.iter().enumerate() {
            for (b, &c) in cols.iter().enumerate() {
                out.set(a, b, self[(r, c)].clone());
            }
        }
        out
    }

    /// `M[J]`: all rows, selected columns.
    pub fn select_columns(&self, cols: &[usize]) -> Matrix<T> {
        let rows: Vec<usize> = (0..self.rows).collect();
        self.submatrix(&rows, cols)
    }

    pub fn mul(&self, rhs: &Matrix<T>) -> Result<Matrix<T>, LinalgError> {
        if self.cols != rhs.rows {
            return Err(LinalgError::DimensionMismatch(format!(
                "{}x{} times {}x{}",
                self.rows, self.cols, rhs.rows, rhs.cols
            )));
        }
        let mut out = Matrix::<T>::zeros(self.rows, rhs.cols);
        for r in 0..self.rows {
            for k in 0..self.cols {
                let a = &self[(r, k)];
                if a.is_zero() {
                    continue;
                }
                for c in 0..rhs.cols {
                    let v = out[(r, c)].clone() + a.clone() * rhs[(k, c)].clone();
                    out.set(r, c, v);
                }
            }
        }
        Ok(out)
    }

    /// `row[target] += factor * row[source]`.
    pub fn add_row_multiple(&mut self, target: usize, source: usize, factor: &T) {
        assert_ne!(target, source, "add-multiple needs distinct rows");
        if factor.is_zero() {
            return;
        }
        for c in 0..self.cols {
            let s = &self.data[source * self.cols + c];
            if s.is_zero() {
                continue;
            }
            let v = factor.clone() * s.clone();
            let t = std::mem::replace(&mut self.data[target * self.cols + c], T::zero());
            self.data[target * self.cols + c] = t + v;
        }
    }

    pub fn scale_row(&mut self, r: usize, factor: &T) {
        for c in 0..self.cols {
            let v = self.data[r * self.cols + c].clone() * factor.clone();
            self.data[r * self.cols + c] = v;
        }
    }

    pub fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for c in 0..self.cols {
            self.data.swap(a * self.cols + c, b * self.cols + c);
        }
    }

    pub fn apply(&mut self, op: &RowOp<T>) {
        match op {
            RowOp::Swap(a, b) => self.swap_rows(*a, *b),
            RowOp::Scale(r, s) => self.scale_row(*r, s),
            RowOp::AddMultiple { target, source, factor } => self.add_row_multiple(*target, *source, factor),
        }
    }

    pub fn apply_log(&mut self, log: &RowOpLog<T>) {
        for op in log.iter() {
            self.apply(op);
        }
    }

    /// Textual rows, each entry rendered as `p/q` or `p`.
    pub fn to_strings(&self) -> Vec<Vec<String>> {
        (0..self.rows).map(|r| self.row(r).iter().map(ToString::to_string).collect()).collect()
    }
}

impl<T> Index<(usize, usize)> for Matrix<T> {
    type Output = T;

    fn index(&self, (r, c): (usize, usize)) -> &T {
        assert!(r < self.rows && c < self.cols, "entry ({r},{c}) out of {}x{}", self.rows, self.cols);
        &self.data[r * self.cols + c]
    }
}

impl<T: fmt::Display> fmt::Display for Matrix<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "Matrix {}x{} [", self.rows, self.cols)?;
        for r in 0..self.rows {
            let row: Vec<String> = (0..self.cols).map(|c| self.data[r * self.cols + c].to_string()).collect();
            writeln!(f, "  {}", row.join(" "))?;
        }
        write!(f, "]")
    }
}

impl<T: fmt::Debug> fmt::Debug for Matrix<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Matrix").field("rows", &self.rows).field("cols", &self.cols).field("data", &self.data).finish()
    }
}

/// One elementary row operation.
#[derive(Clone, Debug, PartialEq)]
pub enum RowOp<T> {
    Swap(usize, usize),
    /// Multiply a row by a nonzero scalar.
    Scale(usize, T),
    /// `row[target] += factor * row[source]`.
    AddMultiple {
        target: usize,
        source: usize,
        factor: T,
    },
}

impl<T: ExactField> RowOp<T> {
    fn check(&self, rows: usize) -> Result<(), LinalgError> {
        let ok = match self {
            RowOp::Swap(a, b) => *a < rows && *b < rows,
            RowOp::Scale(r, s) => *r < rows && !s.is_zero(),
            RowOp::AddMultiple { target, source, .. } => *target < rows && *source < rows && target != source,
        };
        if ok {
            Ok(())
        } else {
            Err(LinalgError::OutOfRange(format!("invalid row operation {self:?} for {rows} rows")))
        }
    }
}

/// Ordered list of elementary row operations; encodes the left factor `K`.
#[derive(Clone, Debug, PartialEq)]
pub struct RowOpLog<T> {
    ops: Vec<RowOp<T>>,
}

impl<T> Default for RowOpLog<T> {
    fn default() -> Self {
        RowOpLog { ops: Vec::new() }
    }
}

impl<T: ExactField> RowOpLog<T> {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn push(&mut self, op: RowOp<T>) {
        self.ops.push(op);
    }

    pub fn extend(&mut self, other: RowOpLog<T>) {
        self.ops.extend(other.ops);
    }

    pub fn iter(&self) -> impl Iterator<Item = &RowOp<T>> {
        self.ops.iter()
    }

    pub fn len(&self) -> usize {
        self.ops.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ops.is_empty()
    }

    /// The `n x n` matrix obtained by replaying the log on the identity.
    pub fn to_matrix(&self, n: usize) -> Matrix<T> {
        let mut k = Matrix::identity(n);
        k.apply_log(self);
        k
    }
}

/// Left-multiplies `m` by the matrix the log encodes.
pub fn apply_rowops<T: ExactField>(m: &Matrix<T>, log: &RowOpLog<T>) -> Result<Matrix<T>, LinalgError> {
    for op in log.iter() {
        op.check(m.rows())?;
    }
    let mut out = m.clone();
    out.apply_log(log);
    Ok(out)
}

/// Row echelon form by forward elimination; returns the pivot columns.
fn echelon<T: ExactField>(m: &mut Matrix<T>) -> Vec<usize> {
    let mut pivots = Vec::new();
    let mut next = 0;
    for c in 0..m.cols() {
        if next == m.rows() {
            break;
        }
        let Some(p) = (next..m.rows()).find(|&r| m.is_nonzero(r, c)) else {
            continue;
        };
        m.swap_rows(next, p);
        let inv = T::one() / m[(next, c)].clone();
        for r in next + 1..m.rows() {
            if m.is_nonzero(r, c) {
                let f = -(m[(r, c)].clone() * inv.clone());
                m.add_row_multiple(r, next, &f);
            }
        }
        pivots.push(c);
        next += 1;
    }
    pivots
}

/// Exact rank over the field.
pub fn rank<T: ExactField>(m: &Matrix<T>) -> usize {
    let mut w = m.clone();
    echelon(&mut w).len()
}

pub fn determinant<T: ExactField>(m: &Matrix<T>) -> Result<T, LinalgError> {
    if m.rows() != m.cols() {
        return Err(LinalgError::NotSquare { rows: m.rows(), cols: m.cols() });
    }
    let n = m.rows();
    let mut w = m.clone();
    let mut det = T::one();
    for c in 0..n {
        let Some(p) = (c..n).find(|&r| w.is_nonzero(r, c)) else {
            return Ok(T::zero());
        };
        if p != c {
            w.swap_rows(c, p);
            det = -det;
        }
        let piv = w[(c, c)].clone();
        for r in c + 1..n {
            if w.is_nonzero(r, c) {
                let f = -(w[(r, c)].clone() / piv.clone());
                w.add_row_multiple(r, c, &f);
            }
        }
        det = det * piv;
    }
    Ok(det)
}

/// Result of [`x_diagonalize`].
#[derive(Clone, Debug)]
pub struct XDiagonal<T> {
    pub matrix: Matrix<T>,
    pub log: RowOpLog<T>,
    pub sigma: RowMap,
}

/// True iff every column in `x` is the unit vector `e_{sigma(i)}`.
pub fn is_x_diagonal<T: ExactField>(m: &Matrix<T>, x: &BTreeSet<usize>, sigma: &RowMap) -> bool {
    let mut seen = BTreeSet::new();
    x.iter().all(|&i| {
        let Some(&p) = sigma.get(&i) else { return false };
        seen.insert(p) && (0..m.rows()).all(|r| if r == p { m[(r, i)].is_one() } else { m[(r, i)].is_zero() })
    })
}

/// Row-reduces `m` so that the columns in `x` form a permuted identity.
///
/// Existing entries of `sigma` are kept as pivots whenever the pivot entry is
/// still nonzero; remaining columns take the smallest free row with a nonzero
/// entry. Entries of `sigma` for columns outside `x` are dropped.
pub fn x_diagonalize<T: ExactField>(
    m: &Matrix<T>,
    x: &BTreeSet<usize>,
    sigma: &RowMap,
) -> Result<XDiagonal<T>, LinalgError> {
    if let Some(&bad) = x.iter().find(|&&i| i >= m.cols()) {
        return Err(LinalgError::OutOfRange(format!("column {bad} of {}", m.cols())));
    }
    let mut w = m.clone();
    let mut log = RowOpLog::new();
    let mut out = RowMap::new();
    let mut used: BTreeSet<usize> = BTreeSet::new();

    let kept: Vec<(usize, usize)> =
        x.iter().filter_map(|&i| sigma.get(&i).map(|&r| (i, r))).filter(|&(_, r)| r < m.rows()).collect();
    let mut pending: Vec<usize> = x.iter().copied().filter(|i| !sigma.contains_key(i)).collect();

    for (i, r) in kept {
        if used.contains(&r) || w[(r, i)].is_zero() {
            pending.push(i);
            continue;
        }
        pivot_on(&mut w, &mut log, r, i);
        used.insert(r);
        out.insert(i, r);
    }
    pending.sort_unstable();
    for i in pending {
        let Some(r) = (0..w.rows()).find(|r| !used.contains(r) && w.is_nonzero(*r, i)) else {
            return Err(LinalgError::DependentColumns { column: i });
        };
        pivot_on(&mut w, &mut log, r, i);
        used.insert(r);
        out.insert(i, r);
    }
    Ok(XDiagonal { matrix: w, log, sigma: out })
}

fn pivot_on<T: ExactField>(w: &mut Matrix<T>, log: &mut RowOpLog<T>, r: usize, c: usize) {
    let piv = w[(r, c)].clone();
    if !piv.is_one() {
        let s = T::one() / piv;
        w.scale_row(r, &s);
        log.push(RowOp::Scale(r, s));
    }
    for t in 0..w.rows() {
        if t != r && w.is_nonzero(t, c) {
            let f = -w[(t, c)].clone();
            w.add_row_multiple(t, r, &f);
            log.push(RowOp::AddMultiple { target: t, source: r, factor: f });
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::{ExactMatrix, Rational};

    fn example_a() -> ExactMatrix {
        ExactMatrix::from_ints(&[[0, 0, 1, 0, 1], [1, 1, 0, 0, 0], [0, 0, -1, 1, 1], [0, 1, 0, 1, 0]])
    }

    fn set(v: &[usize]) -> BTreeSet<usize> {
        v.iter().copied().collect()
    }

    #[test]
    fn rank_of_small_matrices() {
        assert_eq!(rank(&example_a()), 4);
        assert_eq!(rank(&ExactMatrix::zeros(3, 4)), 0);
        assert_eq!(rank(&ExactMatrix::identity(3)), 3);
        let dep = ExactMatrix::from_ints(&[[1, 2, 3], [2, 4, 6]]);
        assert_eq!(rank(&dep), 1);
    }

    #[test]
    fn determinant_matches_hand_expansion() {
        let m = ExactMatrix::from_ints(&[[2, 1], [7, 4]]);
        assert_eq!(determinant(&m).unwrap(), Rational::from_int(1));
        let p = ExactMatrix::from_ints(&[[0, 1], [1, 0]]);
        assert_eq!(determinant(&p).unwrap(), Rational::from_int(-1));
        assert!(determinant(&ExactMatrix::zeros(2, 3)).is_err());
    }

    #[test]
    fn identity_is_already_diagonal() {
        let id = ExactMatrix::identity(3);
        let d = x_diagonalize(&id, &set(&[0, 1]), &RowMap::new()).unwrap();
        assert_eq!(d.matrix, id);
        assert!(d.log.is_empty());
        assert_eq!(d.sigma, RowMap::from([(0, 0), (1, 1)]));
    }

    #[test]
    fn zero_part_of_worked_example_eliminates_one_entry() {
        // Top-degree part of A at alpha = -2, beta = (-1, 0, 0, 0).
        let a0 = ExactMatrix::from_ints(&[[0, 0, 1, 0, 0], [1, 1, 0, 0, 0], [0, 0, -1, 0, 0], [0, 1, 0, 0, 0]]);
        let d = x_diagonalize(&a0, &set(&[0, 1]), &RowMap::new()).unwrap();
        assert_eq!(d.sigma, RowMap::from([(0, 1), (1, 3)]));
        assert_eq!(d.log.len(), 1);
        assert_eq!(
            d.log.iter().next().unwrap(),
            &RowOp::AddMultiple { target: 1, source: 3, factor: Rational::from_int(-1) }
        );
        assert!(d.matrix[(1, 1)].is_zero());
        assert!(is_x_diagonal(&d.matrix, &set(&[0, 1]), &d.sigma));
    }

    #[test]
    fn dependent_columns_are_reported() {
        let m = ExactMatrix::from_ints(&[[1, 2], [2, 4]]);
        let err = x_diagonalize(&m, &set(&[0, 1]), &RowMap::new()).unwrap_err();
        assert_eq!(err, LinalgError::DependentColumns { column: 1 });
    }

    #[test]
    fn kept_pivots_survive() {
        let m = ExactMatrix::from_ints(&[[1, 1], [1, 0]]);
        let d = x_diagonalize(&m, &set(&[0]), &RowMap::from([(0, 1)])).unwrap();
        assert_eq!(d.sigma[&0], 1);
        assert!(is_x_diagonal(&d.matrix, &set(&[0]), &d.sigma));
    }

    #[test]
    fn rowop_replay_and_bounds() {
        let mut log = RowOpLog::new();
        assert_eq!(apply_rowops(&example_a(), &log).unwrap(), example_a());
        log.push(RowOp::Swap(0, 1));
        let p = apply_rowops(&ExactMatrix::identity(2), &log).unwrap();
        assert_eq!(p, ExactMatrix::from_ints(&[[0, 1], [1, 0]]));
        let mut bad = RowOpLog::new();
        bad.push(RowOp::Swap(0, 9));
        assert!(apply_rowops(&ExactMatrix::identity(2), &bad).is_err());
    }

    #[test]
    fn generic_over_fixed_width_rationals() {
        use num_rational::Rational64;
        let m = Matrix::<Rational64>::from_ints(&[[1, 2], [3, 4], [5, 6]]);
        assert_eq!(rank(&m), 2);
        let d = x_diagonalize(&m, &set(&[0, 1]), &RowMap::new()).unwrap();
        assert!(is_x_diagonal(&d.matrix, &set(&[0, 1]), &d.sigma));
        assert_eq!(apply_rowops(&m, &d.log).unwrap(), d.matrix);
    }
}
