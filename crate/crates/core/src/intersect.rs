//! Unweighted linear matroid intersection on X-diagonal matrices.
//!
//! The residual graph is read off the nonzero pattern of X-diagonal forms
//! `KA` and `LB`: a column outside `X` is a source when it has a nonzero in a
//! row not used by `X` in `KA` (a sink likewise in `LB`), and exchange arcs
//! come from the rows `sigma(i)` of the elements `i` of `X`.
//!
//! Row maps for the two matrices are kept separately. The common map of the
//! textbook presentation is the pairing `i -> (sigma_a(i), sigma_b(i))`.

use std::collections::{BTreeSet, VecDeque};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::exactla::{is_x_diagonal, x_diagonalize, LinalgError, Matrix, RowMap};
use crate::matroid::LinearMatroid;
use crate::scalar::ExactField;

pub type ColumnSet = BTreeSet<usize>;
pub type RowSet = BTreeSet<usize>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GraphError {
    #[error("matrix {0} is not X-diagonal under the supplied row map")]
    NotDiagonal(char),
    #[error("matrix shapes differ")]
    ShapeMismatch,
    #[error(transparent)]
    Linalg(#[from] LinalgError),
}

/// Directed exchange graph on the ground set together with its sources,
/// sinks and the BFS closure of the sources.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ResidualGraph {
    pub nodes: usize,
    pub arcs: BTreeSet<(usize, usize)>,
    pub sources: ColumnSet,
    pub sinks: ColumnSet,
    pub reachable: ColumnSet,
    /// Shortest source-to-sink path found by the BFS, if any.
    pub path: Option<Vec<usize>>,
}

impl ResidualGraph {
    /// Builds the graph and runs a BFS from the sources in increasing index
    /// order, scanning out-neighbours in increasing order.
    pub fn from_parts(nodes: usize, arcs: BTreeSet<(usize, usize)>, sources: ColumnSet, sinks: ColumnSet) -> Self {
        let mut adj = vec![Vec::new(); nodes];
        for &(u, v) in &arcs {
            adj[u].push(v);
        }
        let mut parent: Vec<Option<usize>> = vec![None; nodes];
        let mut seen = vec![false; nodes];
        let mut queue = VecDeque::new();
        for &s in &sources {
            seen[s] = true;
            queue.push_back(s);
        }
        let mut reachable = ColumnSet::new();
        let mut hit = None;
        while let Some(u) = queue.pop_front() {
            reachable.insert(u);
            if hit.is_none() && sinks.contains(&u) {
                hit = Some(u);
            }
            for &v in &adj[u] {
                if !seen[v] {
                    seen[v] = true;
                    parent[v] = Some(u);
                    queue.push_back(v);
                }
            }
        }
        let path = hit.map(|t| {
            let mut p = vec![t];
            let mut cur = t;
            while let Some(u) = parent[cur] {
                p.push(u);
                cur = u;
            }
            p.reverse();
            p
        });
        ResidualGraph { nodes, arcs, sources, sinks, reachable, path }
    }

    pub fn has_augmenting_path(&self) -> bool {
        self.path.is_some()
    }

    pub fn in_degree(&self, v: usize) -> usize {
        self.arcs.iter().filter(|&&(_, w)| w == v).count()
    }

    pub fn out_neighbours(&self, u: usize) -> impl Iterator<Item = usize> + '_ {
        self.arcs.range((u, 0)..(u + 1, 0)).map(|&(_, v)| v)
    }
}

/// Residual graph of `X` from X-diagonal forms of the two matrices.
pub fn build_residual<T: ExactField>(
    a_diag: &Matrix<T>,
    b_diag: &Matrix<T>,
    x: &ColumnSet,
    sigma_a: &RowMap,
    sigma_b: &RowMap,
) -> Result<ResidualGraph, GraphError> {
    if a_diag.rows() != b_diag.rows() || a_diag.cols() != b_diag.cols() {
        return Err(GraphError::ShapeMismatch);
    }
    if !is_x_diagonal(a_diag, x, sigma_a) {
        return Err(GraphError::NotDiagonal('A'));
    }
    if !is_x_diagonal(b_diag, x, sigma_b) {
        return Err(GraphError::NotDiagonal('B'));
    }
    let (n, m) = (a_diag.rows(), a_diag.cols());
    let used_a: RowSet = x.iter().map(|i| sigma_a[i]).collect();
    let used_b: RowSet = x.iter().map(|i| sigma_b[i]).collect();
    let free_nonzero =
        |mat: &Matrix<T>, used: &RowSet, i: usize| (0..n).any(|k| !used.contains(&k) && mat.is_nonzero(k, i));

    let outside: Vec<usize> = (0..m).filter(|i| !x.contains(i)).collect();
    let sources: ColumnSet = outside.iter().copied().filter(|&i| free_nonzero(a_diag, &used_a, i)).collect();
    let sinks: ColumnSet = outside.iter().copied().filter(|&i| free_nonzero(b_diag, &used_b, i)).collect();

    let mut arcs = BTreeSet::new();
    for &i in x {
        for &j in &outside {
            if !sources.contains(&j) && a_diag.is_nonzero(sigma_a[&i], j) {
                arcs.insert((i, j));
            }
            if !sinks.contains(&j) && b_diag.is_nonzero(sigma_b[&i], j) {
                arcs.insert((j, i));
            }
        }
    }
    Ok(ResidualGraph::from_parts(m, arcs, sources, sinks))
}

/// An augmentation `X -> X xor V(P)` along a shortest path.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Augmentation {
    pub path: Vec<usize>,
    pub x: ColumnSet,
}

/// Augments along the BFS shortest path; `None` when `R` misses `T`.
pub fn augment(g: &ResidualGraph, x: &ColumnSet) -> Option<Augmentation> {
    let path = g.path.clone()?;
    let mut next = x.clone();
    for v in &path {
        if !next.remove(v) {
            next.insert(*v);
        }
    }
    Some(Augmentation { path, x: next })
}

/// Row index sets of the maximum zero block certified by a reachable set.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RowBlock {
    /// `I`: rows of `KA` side.
    pub i_rows: RowSet,
    /// `J`: rows of `LB` side.
    pub j_rows: RowSet,
    pub i_star: RowSet,
    pub j_star: RowSet,
}

/// `I* = [n] - sigma_a(X)`, `J* = [n] - sigma_b(X)`,
/// `I = sigma_a(R & X) + I*`, `J = sigma_b(X - R) + J*`.
pub fn certificate_from_reachable(
    x: &ColumnSet,
    reachable: &ColumnSet,
    sigma_a: &RowMap,
    sigma_b: &RowMap,
    n: usize,
) -> RowBlock {
    let used_a: RowSet = x.iter().map(|i| sigma_a[i]).collect();
    let used_b: RowSet = x.iter().map(|i| sigma_b[i]).collect();
    let i_star: RowSet = (0..n).filter(|k| !used_a.contains(k)).collect();
    let j_star: RowSet = (0..n).filter(|k| !used_b.contains(k)).collect();
    let mut i_rows = i_star.clone();
    let mut j_rows = j_star.clone();
    for i in x {
        if reachable.contains(i) {
            i_rows.insert(sigma_a[i]);
        } else {
            j_rows.insert(sigma_b[i]);
        }
    }
    RowBlock { i_rows, j_rows, i_star, j_star }
}

/// Column set `J` with value `rho_A(J) + rho_B([m] - J)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DualCertificate {
    pub columns: ColumnSet,
    pub value: usize,
}

impl DualCertificate {
    pub fn evaluate<T: ExactField>(a: &Matrix<T>, b: &Matrix<T>, columns: ColumnSet) -> Self {
        let rest: ColumnSet = (0..a.cols()).filter(|i| !columns.contains(i)).collect();
        let value = LinearMatroid::new(a.clone()).rank_fn(&columns) + LinearMatroid::new(b.clone()).rank_fn(&rest);
        DualCertificate { columns, value }
    }

    /// The minimizing set for a stuck BFS: everything the sources cannot reach.
    pub fn from_reachable<T: ExactField>(a: &Matrix<T>, b: &Matrix<T>, reachable: &ColumnSet) -> Self {
        let unreachable = (0..a.cols()).filter(|i| !reachable.contains(i)).collect();
        Self::evaluate(a, b, unreachable)
    }
}

/// Dual certificate read off the exchange graph of `x` in the original
/// matrices. Its value equals `|x|` exactly when `x` has maximum size.
pub fn certify_cardinality<T: ExactField>(
    a: &Matrix<T>,
    b: &Matrix<T>,
    x: &ColumnSet,
) -> Result<DualCertificate, GraphError> {
    let da = x_diagonalize(a, x, &RowMap::new())?;
    let db = x_diagonalize(b, x, &RowMap::new())?;
    let g = build_residual(&da.matrix, &db.matrix, x, &da.sigma, &db.sigma)?;
    Ok(DualCertificate::from_reachable(a, b, &g.reachable))
}

/// Edmonds' augmenting path algorithm on `M(A)` and `M(B)`.
pub fn max_common_independent<T: ExactField>(
    a: &Matrix<T>,
    b: &Matrix<T>,
) -> Result<(ColumnSet, DualCertificate), GraphError> {
    if a.rows() != b.rows() || a.cols() != b.cols() {
        return Err(GraphError::ShapeMismatch);
    }
    let mut x = ColumnSet::new();
    let (mut ka, mut lb) = (a.clone(), b.clone());
    let (mut sa, mut sb) = (RowMap::new(), RowMap::new());
    loop {
        let da = x_diagonalize(&ka, &x, &sa)?;
        let db = x_diagonalize(&lb, &x, &sb)?;
        (ka, sa, lb, sb) = (da.matrix, da.sigma, db.matrix, db.sigma);
        let g = build_residual(&ka, &lb, &x, &sa, &sb)?;
        match augment(&g, &x) {
            Some(aug) => x = aug.x,
            None => return Ok((x, DualCertificate::from_reachable(a, b, &g.reachable))),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ExactMatrix;
    use proptest::prelude::*;

    fn set(v: &[usize]) -> ColumnSet {
        v.iter().copied().collect()
    }

    fn worked_zero_parts() -> (ExactMatrix, ExactMatrix) {
        let a0 = ExactMatrix::from_ints(&[[0, 0, 1, 0, 0], [1, 1, 0, 0, 0], [0, 0, -1, 0, 0], [0, 1, 0, 0, 0]]);
        let b0 = ExactMatrix::from_ints(&[[1, 0, 1, 0, 0], [0, 0, 0, 0, 0], [0, 0, 0, 0, 0], [0, 1, 0, 0, 0]]);
        (a0, b0)
    }

    #[test]
    fn empty_x_makes_every_nonzero_column_a_source_and_sink() {
        let a = ExactMatrix::from_ints(&[[1, 2, 0], [0, 1, 1]]);
        let b = ExactMatrix::from_ints(&[[1, 0, 1], [1, 1, 0]]);
        let g = build_residual(&a, &b, &set(&[]), &RowMap::new(), &RowMap::new()).unwrap();
        assert_eq!(g.sources, set(&[0, 1, 2]));
        assert_eq!(g.sinks, set(&[0, 1, 2]));
        assert!(g.arcs.is_empty());
        assert_eq!(g.reachable, set(&[0, 1, 2]));
        assert_eq!(augment(&g, &set(&[])).unwrap().x, set(&[0]));
    }

    #[test]
    fn worked_example_graph_and_block() {
        let (a0, b0) = worked_zero_parts();
        let x = set(&[0, 1]);
        let da = x_diagonalize(&a0, &x, &RowMap::new()).unwrap();
        let db = x_diagonalize(&b0, &x, &RowMap::new()).unwrap();
        assert!(db.log.is_empty());
        let g = build_residual(&da.matrix, &db.matrix, &x, &da.sigma, &db.sigma).unwrap();
        assert_eq!(g.arcs, BTreeSet::from([(2, 0)]));
        assert_eq!(g.sources, set(&[2]));
        assert_eq!(g.sinks, set(&[]));
        assert_eq!(g.reachable, set(&[0, 2]));
        assert!(augment(&g, &x).is_none());
        let block = certificate_from_reachable(&x, &g.reachable, &da.sigma, &db.sigma, 4);
        assert_eq!(block.i_rows, set(&[0, 1, 2]));
        assert_eq!(block.j_rows, set(&[1, 2, 3]));
        assert_eq!(block.i_star, set(&[0, 2]));
        assert_eq!(block.j_star, set(&[1, 2]));
    }

    #[test]
    fn non_diagonal_input_is_rejected() {
        let (a0, b0) = worked_zero_parts();
        let x = set(&[0, 1]);
        let sigma = RowMap::from([(0, 1), (1, 3)]);
        let err = build_residual(&a0, &b0, &x, &sigma, &RowMap::from([(0, 0), (1, 3)])).unwrap_err();
        assert_eq!(err, GraphError::NotDiagonal('A'));
    }

    #[test]
    fn empty_block_covers_everything() {
        let block = certificate_from_reachable(&set(&[]), &set(&[]), &RowMap::new(), &RowMap::new(), 3);
        assert_eq!(block.i_rows.len() + block.j_rows.len(), 6);
    }

    #[test]
    fn identity_intersection() {
        let id = ExactMatrix::identity(3);
        let (x, cert) = max_common_independent(&id, &id).unwrap();
        assert_eq!(x, set(&[0, 1, 2]));
        assert_eq!(cert.value, 3);
    }

    #[test]
    fn worked_example_unweighted_has_perfect_set() {
        let a = ExactMatrix::from_ints(&[[0, 0, 1, 0, 1], [1, 1, 0, 0, 0], [0, 0, -1, 1, 1], [0, 1, 0, 1, 0]]);
        let b = ExactMatrix::from_ints(&[[1, 1, 1, 0, 1], [0, 0, 0, 1, 1], [0, 0, 0, 0, -1], [0, 1, 0, 1, 1]]);
        let (x, cert) = max_common_independent(&a, &b).unwrap();
        assert_eq!(x.len(), brute_max(&a, &b));
        assert_eq!(x.len(), 4);
        assert_eq!(cert.value, 4);
    }

    fn brute_max(a: &ExactMatrix, b: &ExactMatrix) -> usize {
        let m = a.cols();
        let (ma, mb) = (LinearMatroid::new(a.clone()), LinearMatroid::new(b.clone()));
        (0u32..1 << m)
            .map(|mask| (0..m).filter(|i| mask >> i & 1 == 1).collect::<ColumnSet>())
            .filter(|s| ma.is_independent(s) && mb.is_independent(s))
            .map(|s| s.len())
            .max()
            .unwrap_or(0)
    }

    fn pair() -> impl Strategy<Value = (ExactMatrix, ExactMatrix)> {
        (1usize..=4, 1usize..=7).prop_flat_map(|(n, m)| {
            let mat = prop::collection::vec(prop::collection::vec(-2i64..=2, m), n)
                .prop_map(|rows| ExactMatrix::from_ints(&rows));
            (mat.clone(), mat)
        })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(128))]

        #[test]
        fn edmonds_matches_enumeration((a, b) in pair()) {
            let (x, cert) = max_common_independent(&a, &b).unwrap();
            prop_assert!(LinearMatroid::new(a.clone()).is_independent(&x));
            prop_assert!(LinearMatroid::new(b.clone()).is_independent(&x));
            prop_assert_eq!(x.len(), brute_max(&a, &b));
            prop_assert_eq!(cert.value, x.len());
        }

        #[test]
        fn certificate_is_tight_only_at_maximum((a, b) in pair(), mask in 0u32..128) {
            let (ma, mb) = (LinearMatroid::new(a.clone()), LinearMatroid::new(b.clone()));
            let mut x = ColumnSet::new();
            for i in (0..a.cols()).filter(|i| mask >> i & 1 == 1) {
                x.insert(i);
                if !(ma.is_independent(&x) && mb.is_independent(&x)) {
                    x.remove(&i);
                }
            }
            let cert = certify_cardinality(&a, &b, &x).unwrap();
            prop_assert!(cert.value >= x.len());
            prop_assert_eq!(cert.value == x.len(), x.len() == brute_max(&a, &b));
        }

        #[test]
        fn arcs_agree_with_circuits((a, b) in pair(), mask in 0u32..128) {
            // Greedy common independent subset of the mask.
            let m = a.cols();
            let (ma, mb) = (LinearMatroid::new(a.clone()), LinearMatroid::new(b.clone()));
            let mut x = ColumnSet::new();
            for i in (0..m).filter(|i| mask >> i & 1 == 1) {
                x.insert(i);
                if !(ma.is_independent(&x) && mb.is_independent(&x)) {
                    x.remove(&i);
                }
            }
            let da = x_diagonalize(&a, &x, &RowMap::new()).unwrap();
            let db = x_diagonalize(&b, &x, &RowMap::new()).unwrap();
            let g = build_residual(&da.matrix, &db.matrix, &x, &da.sigma, &db.sigma).unwrap();
            for j in (0..m).filter(|j| !x.contains(j)) {
                let mut xj = x.clone();
                xj.insert(j);
                prop_assert_eq!(g.sources.contains(&j), ma.is_independent(&xj));
                prop_assert_eq!(g.sinks.contains(&j), mb.is_independent(&xj));
                for &i in &x {
                    let want_a = !ma.is_independent(&xj) && ma.in_circuit(&x, j, i).unwrap();
                    let want_b = !mb.is_independent(&xj) && mb.in_circuit(&x, j, i).unwrap();
                    prop_assert_eq!(g.arcs.contains(&(i, j)), want_a);
                    prop_assert_eq!(g.arcs.contains(&(j, i)), want_b);
                }
            }
        }
    }
}
