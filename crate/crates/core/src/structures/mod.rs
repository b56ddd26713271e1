//! Structure families `C_n` optimised over, with their cardinalities and
//! the leading-order values of the optimum.

mod pattern;

use serde::{Deserialize, Serialize};
use std::fmt;

use crate::ratefn::RateFunction;
use crate::{Error, Result};

pub use pattern::{BalancedPattern, GraphPattern, BALANCE_CHECK_MAX_V};

/// Which family, without the scale.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum FamilyTag {
    Matching,
    #[serde(rename = "tree")]
    SpanningTree,
    #[serde(rename = "hamcycle")]
    HamiltonCycle,
    #[serde(rename = "path")]
    PathOneTwo,
    #[serde(rename = "copy")]
    CopyOf,
}

impl FamilyTag {
    pub fn name(self) -> &'static str {
        match self {
            FamilyTag::Matching => "matching",
            FamilyTag::SpanningTree => "tree",
            FamilyTag::HamiltonCycle => "hamcycle",
            FamilyTag::PathOneTwo => "path",
            FamilyTag::CopyOf => "copy",
        }
    }

    pub fn parse(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "matching" => Ok(FamilyTag::Matching),
            "tree" => Ok(FamilyTag::SpanningTree),
            "hamcycle" => Ok(FamilyTag::HamiltonCycle),
            "path" => Ok(FamilyTag::PathOneTwo),
            "copy" => Ok(FamilyTag::CopyOf),
            _ => Err(Error::Parse {
                what: "family",
                input: s.to_string(),
            }),
        }
    }
}

impl fmt::Display for FamilyTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// A family up to the scale `n`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum FamilyKind {
    /// Perfect matchings of `K_{n,n}`.
    Matching,
    /// Spanning trees of `K_n`.
    SpanningTree,
    /// Hamilton cycles of `K_n`.
    HamiltonCycle,
    /// Simple paths of any length from vertex 1 to vertex 2 in `K_n`.
    PathOneTwo,
    /// Copies of a fixed balanced graph in `K_n`.
    CopyOf(BalancedPattern),
}

impl FamilyKind {
    pub fn tag(&self) -> FamilyTag {
        match self {
            FamilyKind::Matching => FamilyTag::Matching,
            FamilyKind::SpanningTree => FamilyTag::SpanningTree,
            FamilyKind::HamiltonCycle => FamilyTag::HamiltonCycle,
            FamilyKind::PathOneTwo => FamilyTag::PathOneTwo,
            FamilyKind::CopyOf(_) => FamilyTag::CopyOf,
        }
    }

    pub fn at(&self, n: usize) -> StructureFamily {
        StructureFamily {
            kind: self.clone(),
            n,
        }
    }
}

/// `log |C_n|`, or an upper bound on it.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct LogCount {
    pub value: f64,
    pub is_upper_bound: bool,
}

/// A concrete family `C_n`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StructureFamily {
    pub kind: FamilyKind,
    pub n: usize,
}

impl StructureFamily {
    pub fn matching(n: usize) -> Self {
        FamilyKind::Matching.at(n)
    }

    pub fn spanning_tree(n: usize) -> Self {
        FamilyKind::SpanningTree.at(n)
    }

    pub fn hamilton_cycle(n: usize) -> Self {
        FamilyKind::HamiltonCycle.at(n)
    }

    pub fn path_one_two(n: usize) -> Self {
        FamilyKind::PathOneTwo.at(n)
    }

    pub fn copy_of(pattern: GraphPattern, n: usize) -> Result<Self> {
        Ok(FamilyKind::CopyOf(BalancedPattern::new(pattern)?).at(n))
    }

    /// Family from its tag; a pattern is required for copies and refused
    /// otherwise.
    pub fn from_tag(tag: FamilyTag, n: usize, pattern: Option<GraphPattern>) -> Result<Self> {
        match (tag, pattern) {
            (FamilyTag::CopyOf, Some(p)) => Self::copy_of(p, n),
            (FamilyTag::CopyOf, None) => Err(Error::invalid("copy family needs a pattern")),
            (_, Some(_)) => Err(Error::invalid(format!("{tag} family takes no pattern"))),
            (FamilyTag::Matching, None) => Ok(Self::matching(n)),
            (FamilyTag::SpanningTree, None) => Ok(Self::spanning_tree(n)),
            (FamilyTag::HamiltonCycle, None) => Ok(Self::hamilton_cycle(n)),
            (FamilyTag::PathOneTwo, None) => Ok(Self::path_one_two(n)),
        }
    }

    pub fn tag(&self) -> FamilyTag {
        self.kind.tag()
    }

    pub fn pattern(&self) -> Option<&BalancedPattern> {
        match &self.kind {
            FamilyKind::CopyOf(p) => Some(p),
            _ => None,
        }
    }

    /// Whether the family lives on `K_{n,n}` rather than `K_n`.
    pub fn is_bipartite(&self) -> bool {
        matches!(self.kind, FamilyKind::Matching)
    }

    /// `l = max_{H ∈ C_n} |E(H)|` as used by the expectation bound:
    /// `n, n−1, n, n, ℓ`. For 1–2 paths this is the customary `n`, one more
    /// than the true maximum.
    pub fn max_edges(&self) -> usize {
        match &self.kind {
            FamilyKind::Matching | FamilyKind::HamiltonCycle | FamilyKind::PathOneTwo => self.n,
            FamilyKind::SpanningTree => self.n - 1,
            FamilyKind::CopyOf(p) => p.edge_count(),
        }
    }

    /// Exact number of edges of every member, when the family is uniform.
    pub fn edge_count(&self) -> Option<usize> {
        match &self.kind {
            FamilyKind::Matching | FamilyKind::HamiltonCycle => Some(self.n),
            FamilyKind::SpanningTree => Some(self.n - 1),
            FamilyKind::PathOneTwo => None,
            FamilyKind::CopyOf(p) => Some(p.edge_count()),
        }
    }

    pub fn log_count(&self) -> LogCount {
        let n = self.n;
        let exact = |value| LogCount {
            value,
            is_upper_bound: false,
        };
        match &self.kind {
            FamilyKind::Matching => exact(ln_factorial(n)),
            FamilyKind::SpanningTree => exact((n as f64 - 2.0) * (n as f64).ln()),
            FamilyKind::HamiltonCycle => exact(ln_factorial(n - 1) - std::f64::consts::LN_2),
            // Σ_l C(n−2, l)·l! ≤ e·(n−2)!
            FamilyKind::PathOneTwo => LogCount {
                value: 1.0 + ln_factorial(n.saturating_sub(2)),
                is_upper_bound: true,
            },
            // C(n, v)·v! ≤ n^v
            FamilyKind::CopyOf(p) => LogCount {
                value: p.vertex_count() as f64 * (n as f64).ln(),
                is_upper_bound: true,
            },
        }
    }

    /// Leading-order value of the optimum: `n·Λ*⁻¹(log n)`, or
    /// `ℓ·Λ*⁻¹(d⁻¹ log n)` for copies of a pattern. Spanning trees use the
    /// same `n` normalisation although they have `n − 1` edges.
    pub fn predict(&self, rate: &RateFunction) -> f64 {
        let ln_n = (self.n as f64).ln();
        match &self.kind {
            FamilyKind::CopyOf(p) => {
                let d = p.density();
                let inv_d = *d.denom() as f64 / *d.numer() as f64;
                p.edge_count() as f64 * rate.rate_inverse(inv_d * ln_n)
            }
            _ => self.n as f64 * rate.rate_inverse(ln_n),
        }
    }

    /// The moment-generating-function bound
    /// `E W_n ≤ l·Λ*⁻¹(l⁻¹ log |C_n|)`.
    pub fn expectation_bound(&self, rate: &RateFunction) -> f64 {
        let l = self.max_edges() as f64;
        l * rate.rate_inverse(self.log_count().value / l)
    }

    /// Largest instance size the exact solver for this family accepts.
    pub fn solver_cap(&self, dp_cap: usize) -> Option<usize> {
        match self.kind {
            FamilyKind::HamiltonCycle | FamilyKind::PathOneTwo => Some(dp_cap),
            FamilyKind::CopyOf(_) => Some(crate::solvers::COPY_MAX_N),
            _ => None,
        }
    }
}

impl fmt::Display for StructureFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.kind {
            FamilyKind::CopyOf(p) => write!(f, "copy[{}](n={})", p.pattern(), self.n),
            k => write!(f, "{}(n={})", k.tag(), self.n),
        }
    }
}

/// `log n!` by direct summation.
pub fn ln_factorial(n: usize) -> f64 {
    (2..=n).map(|k| (k as f64).ln()).sum()
}
