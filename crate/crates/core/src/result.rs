//! Output types shared by every solver.

use std::fmt;

use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

use crate::intersect::ColumnSet;
use crate::trace::TraceEvent;

/// `deg_t det M`, with the zero polynomial mapped to minus infinity.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Degree {
    MinusInfinity,
    Finite(i64),
}

impl Degree {
    pub fn finite(self) -> Option<i64> {
        match self {
            Degree::Finite(v) => Some(v),
            Degree::MinusInfinity => None,
        }
    }
}

impl fmt::Display for Degree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Degree::Finite(v) => write!(f, "{v}"),
            Degree::MinusInfinity => write!(f, "-inf"),
        }
    }
}

impl Serialize for Degree {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        match self {
            Degree::Finite(v) => s.serialize_i64(*v),
            Degree::MinusInfinity => s.serialize_str("-inf"),
        }
    }
}

impl<'de> Deserialize<'de> for Degree {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Raw {
            Int(i64),
            Text(String),
        }
        match Raw::deserialize(d)? {
            Raw::Int(v) => Ok(Degree::Finite(v)),
            Raw::Text(t) if t == "-inf" => Ok(Degree::MinusInfinity),
            Raw::Text(t) => Err(serde::de::Error::custom(format!("bad degree `{t}`"))),
        }
    }
}

/// `c = c1 + c2`, certifying a common independent set is weight-maximal at
/// its cardinality when it is maximal for `c1` in `M(A)` and for `c2` in `M(B)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct WeightSplitting {
    pub c1: Vec<i64>,
    pub c2: Vec<i64>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CardinalityOptimum {
    pub x: ColumnSet,
    pub weight: i64,
    pub splitting: WeightSplitting,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Stats {
    /// Add-multiple row operations applied to `A` and `B`.
    pub row_ops: usize,
    pub row_scalings: usize,
    pub a1: usize,
    pub a2: usize,
    pub b1: usize,
    pub b2: usize,
    pub dual_steps: usize,
    pub augmentations: usize,
    pub root_passes: usize,
    pub head_resets: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Violation {
    pub check: String,
    pub detail: String,
}

impl Violation {
    pub fn new(check: &str, detail: impl Into<String>) -> Self {
        Violation { check: check.to_string(), detail: detail.into() }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SolveError {
    #[error("solver reached an inconsistent state: {0}")]
    Internal(String),
}

#[derive(Clone, Debug)]
pub struct SolveResult {
    pub degdet: Degree,
    /// Entry `k` holds a maximum weight common independent set of size `k`.
    pub by_card: Vec<Option<CardinalityOptimum>>,
    pub x_star: ColumnSet,
    pub x_star_weight: i64,
    pub splitting: WeightSplitting,
    pub stats: Stats,
    pub violations: Vec<Violation>,
    pub trace: Vec<TraceEvent>,
}

impl SolveResult {
    pub fn weights_by_card(&self) -> Vec<Option<i64>> {
        self.by_card.iter().map(|o| o.as_ref().map(|c| c.weight)).collect()
    }

    pub(crate) fn finish(
        degdet: Degree,
        by_card: Vec<Option<CardinalityOptimum>>,
        splitting: WeightSplitting,
        stats: Stats,
        violations: Vec<Violation>,
        trace: Vec<TraceEvent>,
    ) -> Self {
        let (x_star, x_star_weight) = by_card.iter().flatten().fold((ColumnSet::new(), 0), |best, o| {
            if o.weight > best.1 {
                (o.x.clone(), o.weight)
            } else {
                best
            }
        });
        SolveResult { degdet, by_card, x_star, x_star_weight, splitting, stats, violations, trace }
    }
}
