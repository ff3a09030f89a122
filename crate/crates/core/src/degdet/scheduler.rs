//! Heap-driven search for the next potential increase.
//!
//! Within one phase the values `c_i + beta_l` for `l` in `J` are fixed, so a
//! single merged list of pairs `(i, l)` sorted by that value serves every row
//! `k` of `I`; row `k` only keeps a head index into it. Since every `alpha_k`
//! with `k` in `I` moves by the same amount, heap keys are stored relative to
//! a running shift.

use std::cmp::Reverse;
use std::collections::BinaryHeap;

use crate::exactla::Matrix;
use crate::intersect::RowSet;
use crate::scalar::ExactField;

/// Pairs `(i, l)` sharing one value of `c_i + beta_l`.
#[derive(Clone, Debug)]
struct Level {
    value: i64,
    pairs: Vec<(usize, usize)>,
}

#[derive(Clone, Debug)]
pub struct KappaScheduler {
    levels: Vec<Level>,
    head: Vec<Option<usize>>,
    version: Vec<u32>,
    base: Vec<i64>,
    shift: i64,
    heap: BinaryHeap<(i64, Reverse<usize>, u32)>,
    in_i: Vec<bool>,
}

/// The merged root of the heap: the rows attaining the current maximum and
/// the triples of their head levels.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Root {
    pub kappa: i64,
    pub rows: Vec<usize>,
    pub triples: Vec<(usize, usize, usize)>,
}

impl KappaScheduler {
    /// Merges the `|J|` lists `c_i + beta_l` (each already sorted by `c`).
    pub fn new(c: &[i64], beta: &[i64], j_rows: &RowSet) -> Self {
        let n = beta.len();
        let mut by_weight: Vec<usize> = (0..c.len()).collect();
        by_weight.sort_by_key(|&i| (Reverse(c[i]), i));

        let mut cursors: BinaryHeap<(i64, Reverse<usize>, Reverse<usize>)> = BinaryHeap::new();
        let mut pos = vec![0usize; n];
        for &l in j_rows {
            if let Some(&i) = by_weight.first() {
                cursors.push((c[i] + beta[l], Reverse(i), Reverse(l)));
            }
        }
        let mut levels: Vec<Level> = Vec::new();
        while let Some((value, Reverse(i), Reverse(l))) = cursors.pop() {
            match levels.last_mut() {
                Some(last) if last.value == value => last.pairs.push((i, l)),
                _ => levels.push(Level { value, pairs: vec![(i, l)] }),
            }
            pos[l] += 1;
            if let Some(&next) = by_weight.get(pos[l]) {
                cursors.push((c[next] + beta[l], Reverse(next), Reverse(l)));
            }
        }
        for level in &mut levels {
            level.pairs.sort_unstable();
        }
        KappaScheduler {
            levels,
            head: vec![None; n],
            version: vec![0; n],
            base: vec![0; n],
            shift: 0,
            heap: BinaryHeap::new(),
            in_i: vec![false; n],
        }
    }

    /// Registers rows newly added to `I`.
    pub fn add_rows(&mut self, rows: impl IntoIterator<Item = usize>, alpha: &[i64], j_rows: &RowSet) {
        for k in rows {
            if !self.in_i[k] {
                self.in_i[k] = true;
                self.reset_row(k, alpha, j_rows);
            }
        }
    }

    pub fn in_i(&self, k: usize) -> bool {
        self.in_i[k]
    }

    /// Restarts the head of row `k` from the first level strictly below tight.
    pub fn reset_row(&mut self, k: usize, alpha: &[i64], j_rows: &RowSet) {
        self.base[k] = alpha[k] - self.shift;
        let start = self.levels.partition_point(|lv| lv.value + alpha[k] >= 0);
        self.seat(k, start, j_rows);
    }

    pub fn reset_all(&mut self, alpha: &[i64], j_rows: &RowSet) {
        for k in 0..self.in_i.len() {
            if self.in_i[k] {
                self.reset_row(k, alpha, j_rows);
            }
        }
    }

    fn seat(&mut self, k: usize, from: usize, j_rows: &RowSet) {
        self.version[k] += 1;
        let idx = (from..self.levels.len()).find(|&p| self.levels[p].pairs.iter().any(|(_, l)| j_rows.contains(l)));
        self.head[k] = idx;
        if let Some(p) = idx {
            self.heap.push((self.levels[p].value + self.base[k], Reverse(k), self.version[k]));
        }
    }

    /// Records a potential increase applied to every row of `I`.
    pub fn apply(&mut self, kappa: i64) {
        self.shift += kappa;
    }

    /// Finds the next root with a nonzero product, advancing heads past
    /// levels whose products all vanish. `None` means no candidate remains.
    pub fn next_root<T: ExactField>(&mut self, a: &Matrix<T>, b: &Matrix<T>, j_rows: &RowSet) -> Option<Root> {
        loop {
            let top = self.pop_valid()?;
            let mut rows = vec![top.1];
            while let Some(&(key, Reverse(k), ver)) = self.heap.peek() {
                if ver != self.version[k] || !self.in_i[k] {
                    self.heap.pop();
                    continue;
                }
                if key != top.0 {
                    break;
                }
                self.heap.pop();
                rows.push(k);
            }
            rows.sort_unstable();
            let mut live = Vec::new();
            let mut triples = Vec::new();
            for &k in &rows {
                let p = self.head[k].expect("seated row has a head");
                let hits: Vec<(usize, usize, usize)> = self.levels[p]
                    .pairs
                    .iter()
                    .filter(|(i, l)| j_rows.contains(l) && a.is_nonzero(k, *i) && b.is_nonzero(*l, *i))
                    .map(|&(i, l)| (i, k, l))
                    .collect();
                if hits.is_empty() {
                    self.seat(k, p + 1, j_rows);
                } else {
                    live.push(k);
                    triples.extend(
                        self.levels[p].pairs.iter().filter(|(_, l)| j_rows.contains(l)).map(|&(i, l)| (i, k, l)),
                    );
                }
            }
            if !live.is_empty() {
                for &k in &live {
                    let p = self.head[k].expect("seated row has a head");
                    self.seat(k, p + 1, j_rows);
                }
                triples.sort_unstable();
                return Some(Root { kappa: -(top.0 + self.shift), rows: live, triples });
            }
        }
    }

    fn pop_valid(&mut self) -> Option<(i64, usize)> {
        while let Some((key, Reverse(k), ver)) = self.heap.pop() {
            if ver == self.version[k] && self.in_i[k] {
                return Some((key, k));
            }
        }
        None
    }
}
