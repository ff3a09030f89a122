//! Uniform entry point over the four solvers.

use std::fmt;
use std::str::FromStr;

use crate::degdet::{solve, SolveOptions, Variant};
use crate::frank::{frank_solve, FrankVariant};
use crate::instance::WmiInstance;
use crate::result::{SolveError, SolveResult};
use crate::scalar::ExactField;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Solver {
    DegdetNaive,
    DegdetHeap,
    Frank,
    FrankModified,
}

impl Solver {
    pub const ALL: [Solver; 4] = [Solver::DegdetNaive, Solver::DegdetHeap, Solver::Frank, Solver::FrankModified];

    pub fn name(self) -> &'static str {
        match self {
            Solver::DegdetNaive => "degdet-naive",
            Solver::DegdetHeap => "degdet-heap",
            Solver::Frank => "frank",
            Solver::FrankModified => "frank-modified",
        }
    }

    pub fn run<T: ExactField>(self, inst: &WmiInstance<T>, opts: SolveOptions) -> Result<SolveResult, SolveError> {
        match self {
            Solver::DegdetNaive => solve(inst, Variant::Naive, opts),
            Solver::DegdetHeap => solve(inst, Variant::Heap, opts),
            Solver::Frank => frank_solve(inst, FrankVariant::Classic, opts),
            Solver::FrankModified => frank_solve(inst, FrankVariant::Modified, opts),
        }
    }
}

impl fmt::Display for Solver {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct UnknownSolver(pub String);

impl fmt::Display for UnknownSolver {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "unknown solver `{}`", self.0)
    }
}

impl std::error::Error for UnknownSolver {}

impl FromStr for Solver {
    type Err = UnknownSolver;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Solver::ALL.into_iter().find(|v| v.name() == s).ok_or_else(|| UnknownSolver(s.to_string()))
    }
}
