use num_rational::Ratio;
use std::fmt;

use crate::{Error, Result};

/// Largest pattern for which balancedness is checked exhaustively.
pub const BALANCE_CHECK_MAX_V: usize = 12;

/// A small simple graph on vertices `0..v`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GraphPattern {
    v: usize,
    edges: Vec<(usize, usize)>,
}

impl GraphPattern {
    pub fn new(v: usize, edges: impl IntoIterator<Item = (usize, usize)>) -> Result<Self> {
        if v == 0 {
            return Err(Error::invalid("pattern needs at least one vertex"));
        }
        let mut out: Vec<(usize, usize)> = Vec::new();
        for (a, b) in edges {
            if a >= v || b >= v {
                return Err(Error::invalid(format!(
                    "edge ({a}, {b}) out of range for {v} vertices"
                )));
            }
            if a == b {
                return Err(Error::invalid(format!("loop at vertex {a}")));
            }
            let e = (a.min(b), a.max(b));
            if out.contains(&e) {
                return Err(Error::invalid(format!("duplicate edge ({}, {})", e.0, e.1)));
            }
            out.push(e);
        }
        Ok(GraphPattern { v, edges: out })
    }

    pub fn triangle() -> Self {
        Self::cycle(3)
    }

    pub fn cycle(v: usize) -> Self {
        assert!(v >= 3);
        Self::new(v, (0..v).map(|i| (i, (i + 1) % v))).expect("cycle is simple")
    }

    pub fn clique(v: usize) -> Self {
        let edges = (0..v).flat_map(|i| (i + 1..v).map(move |j| (i, j)));
        Self::new(v, edges).expect("clique is simple")
    }

    pub fn single_edge() -> Self {
        Self::new(2, [(0, 1)]).expect("edge is simple")
    }

    pub fn vertex_count(&self) -> usize {
        self.v
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn density(&self) -> Ratio<usize> {
        Ratio::new(self.edges.len(), self.v)
    }

    /// Whether no subgraph is denser than the whole graph.
    ///
    /// Only induced subgraphs are scanned: deleting edges at a fixed vertex
    /// set can only lower the density.
    pub fn is_balanced(&self) -> Result<bool> {
        if self.v > BALANCE_CHECK_MAX_V {
            return Err(Error::PatternTooLarge {
                v: self.v,
                max: BALANCE_CHECK_MAX_V,
            });
        }
        let whole = self.density();
        for mask in 1u32..(1 << self.v) {
            let inside = self
                .edges
                .iter()
                .filter(|&&(a, b)| mask >> a & 1 == 1 && mask >> b & 1 == 1)
                .count();
            if Ratio::new(inside, mask.count_ones() as usize) > whole {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// Adjacency bitmasks, one per vertex.
    pub(crate) fn adjacency_masks(&self) -> Vec<u32> {
        let mut adj = vec![0u32; self.v];
        for &(a, b) in &self.edges {
            adj[a] |= 1 << b;
            adj[b] |= 1 << a;
        }
        adj
    }

    /// Parse `v=4;edges=1-2,2-3,3-1,1-4` (1-indexed) or one of the names
    /// `edge`, `triangle`, `c4`, `k4`.
    pub fn parse(input: &str) -> Result<Self> {
        let s = input.trim().to_ascii_lowercase();
        match s.as_str() {
            "edge" => return Ok(Self::single_edge()),
            "triangle" => return Ok(Self::triangle()),
            "c4" => return Ok(Self::cycle(4)),
            "k4" => return Ok(Self::clique(4)),
            _ => {}
        }
        let err = || Error::Parse {
            what: "pattern",
            input: input.to_string(),
        };
        let mut v = None;
        let mut edges = Vec::new();
        for part in s.split(';').map(str::trim).filter(|p| !p.is_empty()) {
            let (key, val) = part.split_once('=').ok_or_else(err)?;
            match key.trim() {
                "v" => v = Some(val.trim().parse::<usize>().map_err(|_| err())?),
                "edges" => {
                    for e in val.split(',').map(str::trim).filter(|e| !e.is_empty()) {
                        let (a, b) = e.split_once('-').ok_or_else(err)?;
                        let a: usize = a.trim().parse().map_err(|_| err())?;
                        let b: usize = b.trim().parse().map_err(|_| err())?;
                        if a == 0 || b == 0 {
                            return Err(err());
                        }
                        edges.push((a - 1, b - 1));
                    }
                }
                _ => return Err(err()),
            }
        }
        Self::new(v.ok_or_else(err)?, edges)
    }
}

impl fmt::Display for GraphPattern {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "v={};edges=", self.v)?;
        for (i, (a, b)) in self.edges.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{}-{}", a + 1, b + 1)?;
        }
        Ok(())
    }
}

/// A pattern that passed the balancedness check.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BalancedPattern(GraphPattern);

impl BalancedPattern {
    pub fn new(pattern: GraphPattern) -> Result<Self> {
        if pattern.edge_count() == 0 {
            return Err(Error::invalid("pattern must have at least one edge"));
        }
        if !pattern.is_balanced()? {
            return Err(Error::invalid(format!("pattern {pattern} is not balanced")));
        }
        Ok(BalancedPattern(pattern))
    }

    pub fn pattern(&self) -> &GraphPattern {
        &self.0
    }
}

impl std::ops::Deref for BalancedPattern {
    type Target = GraphPattern;
    fn deref(&self) -> &GraphPattern {
        &self.0
    }
}
