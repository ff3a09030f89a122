//! Problem instances `(A, B, c)` and the plain-text instance format.
//!
//! ```text
//! WMI 2 3
//! # A
//! 1 0 1/2
//! 0 1 1
//! # B
//! 1 1 0
//! 0 -3 1
//! # c
//! 4 0 -1
//! ```
//!
//! After the header come `n` rows of `A`, `n` rows of `B` and one line of `m`
//! integer weights. Blank lines and `#` comments are ignored.

use std::fmt::Write as _;

use thiserror::Error;

use crate::exactla::{LinalgError, Matrix};
use crate::scalar::{parse_scalar, ExactField};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum InstanceError {
    #[error("A is {0}x{1} but B is {2}x{3}")]
    ShapeMismatch(usize, usize, usize, usize),
    #[error("expected {expected} weights, got {got}")]
    WeightLength { expected: usize, got: usize },
    #[error("column {column} of {matrix} is zero")]
    ZeroColumn { matrix: char, column: usize },
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseError {
    #[error("line {line}: {msg}")]
    Syntax { line: usize, msg: String },
    #[error("unexpected end of input: {0}")]
    Truncated(String),
    #[error("trailing content at line {0}")]
    Trailing(usize),
    #[error(transparent)]
    Invalid(#[from] InstanceError),
}

/// A validated weighted intersection instance.
#[derive(Clone, Debug, PartialEq)]
pub struct WmiInstance<T> {
    a: Matrix<T>,
    b: Matrix<T>,
    c: Vec<i64>,
}

impl<T: ExactField> WmiInstance<T> {
    pub fn new(a: Matrix<T>, b: Matrix<T>, c: Vec<i64>) -> Result<Self, InstanceError> {
        if a.rows() != b.rows() || a.cols() != b.cols() {
            return Err(InstanceError::ShapeMismatch(a.rows(), a.cols(), b.rows(), b.cols()));
        }
        if c.len() != a.cols() {
            return Err(InstanceError::WeightLength { expected: a.cols(), got: c.len() });
        }
        for (name, mat) in [('A', &a), ('B', &b)] {
            if let Some(column) = (0..mat.cols()).find(|&i| mat.is_zero_column(i)) {
                return Err(InstanceError::ZeroColumn { matrix: name, column });
            }
        }
        Ok(WmiInstance { a, b, c })
    }

    pub fn a(&self) -> &Matrix<T> {
        &self.a
    }

    pub fn b(&self) -> &Matrix<T> {
        &self.b
    }

    pub fn weights(&self) -> &[i64] {
        &self.c
    }

    pub fn n(&self) -> usize {
        self.a.rows()
    }

    pub fn m(&self) -> usize {
        self.a.cols()
    }

    pub fn weight_of<'a>(&self, x: impl IntoIterator<Item = &'a usize>) -> i64 {
        x.into_iter().map(|&i| self.c[i]).sum()
    }

    /// Same matrices with `delta` added to every weight.
    pub fn shifted(&self, delta: i64) -> Self {
        WmiInstance { a: self.a.clone(), b: self.b.clone(), c: self.c.iter().map(|w| w + delta).collect() }
    }

    /// Renders in the instance file format; `parse(render(x)) == x`.
    pub fn render(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "WMI {} {}", self.n(), self.m());
        for (tag, mat) in [("A", &self.a), ("B", &self.b)] {
            let _ = writeln!(out, "# {tag}");
            for row in mat.to_strings() {
                let _ = writeln!(out, "{}", row.join(" "));
            }
        }
        let _ = writeln!(out, "# c");
        let w: Vec<String> = self.c.iter().map(i64::to_string).collect();
        let _ = writeln!(out, "{}", w.join(" "));
        out
    }
}

/// Parses the instance file format and validates the result.
pub fn parse_instance<T: ExactField>(text: &str) -> Result<WmiInstance<T>, ParseError> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(no, l)| (no + 1, l.split('#').next().unwrap_or("").trim()))
        .filter(|(_, l)| !l.is_empty());

    let (hline, header) = lines.next().ok_or_else(|| ParseError::Truncated("missing header".into()))?;
    let fields: Vec<&str> = header.split_whitespace().collect();
    let syntax = |line: usize, msg: String| ParseError::Syntax { line, msg };
    if fields.len() != 3 || fields[0] != "WMI" {
        return Err(syntax(hline, format!("expected `WMI n m`, found `{header}`")));
    }
    let dim = |s: &str| s.parse::<usize>().map_err(|e| syntax(hline, format!("bad dimension `{s}`: {e}")));
    let (n, m) = (dim(fields[1])?, dim(fields[2])?);

    let mut read_matrix = |name: char| -> Result<Matrix<T>, ParseError> {
        let mut rows = Vec::with_capacity(n);
        for r in 0..n {
            let (no, line) = lines.next().ok_or_else(|| ParseError::Truncated(format!("row {} of {name}", r + 1)))?;
            let row: Vec<T> = line
                .split_whitespace()
                .map(|tok| parse_scalar(tok).ok_or_else(|| syntax(no, format!("bad rational `{tok}`"))))
                .collect::<Result<_, _>>()?;
            if row.len() != m {
                return Err(syntax(no, format!("row of {name} has {} entries, expected {m}", row.len())));
            }
            rows.push(row);
        }
        if n == 0 {
            return Ok(Matrix::zeros(0, m));
        }
        Matrix::from_rows(rows).map_err(|e: LinalgError| ParseError::Truncated(e.to_string()))
    };
    let a = read_matrix('A')?;
    let b = read_matrix('B')?;

    let (wline, weights) = lines.next().ok_or_else(|| ParseError::Truncated("weight line".into()))?;
    let c: Vec<i64> = weights
        .split_whitespace()
        .map(|tok| tok.parse::<i64>().map_err(|_| syntax(wline, format!("bad weight `{tok}`"))))
        .collect::<Result<_, _>>()?;
    if let Some((no, _)) = lines.next() {
        return Err(ParseError::Trailing(no));
    }
    Ok(WmiInstance::new(a, b, c)?)
}
