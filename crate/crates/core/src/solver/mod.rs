pub mod cycle;
pub mod matching;
pub mod path;
pub mod proto;
pub mod segments;

use std::fmt;
use std::str::FromStr;

use crate::bnb::{SolveError, SolveOutcome, SolverConfig};
use crate::graph::Graph;
use crate::oracle::solve_oracle;
use crate::pattern::PatternSpec;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SolverKind {
    /// Tailored solver for M/C/P patterns, generic one otherwise.
    Auto,
    Proto,
    Matching,
    Cycle,
    Path,
    Oracle,
}

impl SolverKind {
    pub const ALL: [SolverKind; 6] = [
        SolverKind::Auto,
        SolverKind::Proto,
        SolverKind::Matching,
        SolverKind::Cycle,
        SolverKind::Path,
        SolverKind::Oracle,
    ];

    pub fn name(self) -> &'static str {
        match self {
            SolverKind::Auto => "auto",
            SolverKind::Proto => "proto",
            SolverKind::Matching => "matching",
            SolverKind::Cycle => "cycle",
            SolverKind::Path => "path",
            SolverKind::Oracle => "oracle",
        }
    }

    /// The solver `Auto` stands for on `h`.
    pub fn resolve(self, h: &PatternSpec) -> SolverKind {
        match (self, h) {
            (SolverKind::Auto, PatternSpec::Matching(_)) => SolverKind::Matching,
            (SolverKind::Auto, PatternSpec::Cycle(_)) => SolverKind::Cycle,
            (SolverKind::Auto, PatternSpec::Path(_)) => SolverKind::Path,
            (SolverKind::Auto, PatternSpec::Explicit(_)) => SolverKind::Proto,
            (other, _) => other,
        }
    }

    pub fn supports(self, h: &PatternSpec) -> bool {
        matches!(
            (self.resolve(h), h),
            (SolverKind::Proto | SolverKind::Oracle, _)
                | (SolverKind::Matching, PatternSpec::Matching(_))
                | (SolverKind::Cycle, PatternSpec::Cycle(_))
                | (SolverKind::Path, PatternSpec::Path(_))
        )
    }
}

impl fmt::Display for SolverKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for SolverKind {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        Self::ALL
            .into_iter()
            .find(|k| k.name().eq_ignore_ascii_case(s))
            .ok_or_else(|| format!("unknown solver {s:?} (expected auto|proto|matching|cycle|path|oracle)"))
    }
}

/// Run the chosen solver; a tailored solver on the wrong pattern kind is an
/// `Unsupported` error.
pub fn solve_with(
    kind: SolverKind,
    g: &Graph,
    h: &PatternSpec,
    cfg: &SolverConfig,
) -> Result<SolveOutcome, SolveError> {
    match (kind.resolve(h), h) {
        (SolverKind::Proto, _) => proto::solve_proto(g, h, cfg),
        (SolverKind::Oracle, _) => solve_oracle(g, h, cfg),
        (SolverKind::Matching, &PatternSpec::Matching(k)) => matching::solve_matching(g, k, cfg),
        (SolverKind::Cycle, &PatternSpec::Cycle(k)) => cycle::solve_cycle(g, k, cfg),
        (SolverKind::Path, &PatternSpec::Path(k)) => path::solve_path(g, k, cfg),
        (other, _) => Err(SolveError::Unsupported(format!(
            "solver {other} does not handle pattern {h}"
        ))),
    }
}
