//! Brute-force reference implementation: exhaustive simple-path enumeration
//! and the maximality filter, deliberately exponential. Every equivalence
//! test in the workspace treats this module as ground truth, so it stays as
//! close to the definitions as possible and shares no code with the
//! generation pipeline beyond the containment filter.

use crate::graph::Graph;
use crate::path::{maximal_filter, Path, VertexId};
use std::time::{Duration, Instant};

#[derive(Clone, Debug)]
pub struct OracleLimits {
    pub max_vertices: usize,
    pub max_paths: usize,
    pub time_budget: Duration,
}

impl Default for OracleLimits {
    fn default() -> Self {
        OracleLimits {
            max_vertices: 14,
            max_paths: 2_000_000,
            time_budget: Duration::from_secs(30),
        }
    }
}

/// Enumeration always aborts loudly; `enumerated` reports how far it got so a
/// partial run is never mistaken for a complete one.
#[derive(Debug, thiserror::Error)]
pub enum OracleError {
    #[error("graph has {actual} vertices, oracle limit is {limit}")]
    TooManyVertices { actual: usize, limit: usize },
    #[error("path budget {limit} exhausted after enumerating {enumerated} paths")]
    PathBudget { limit: usize, enumerated: usize },
    #[error("time budget {budget:?} exhausted after enumerating {enumerated} paths")]
    TimeBudget { budget: Duration, enumerated: usize },
}

struct Enumerator<'g> {
    g: &'g Graph,
    lim: &'g OracleLimits,
    started: Instant,
    on_path: Vec<bool>,
    stack: Vec<VertexId>,
    out: Vec<Path>,
}

impl Enumerator<'_> {
    fn record(&mut self, seq: Vec<VertexId>) -> Result<(), OracleError> {
        self.out.push(Path::new(seq));
        if self.out.len() >= self.lim.max_paths {
            return Err(OracleError::PathBudget {
                limit: self.lim.max_paths,
                enumerated: self.out.len(),
            });
        }
        if self.out.len() % 4096 == 0 && self.started.elapsed() > self.lim.time_budget {
            return Err(OracleError::TimeBudget {
                budget: self.lim.time_budget,
                enumerated: self.out.len(),
            });
        }
        Ok(())
    }

    fn dfs(&mut self, v: VertexId) -> Result<(), OracleError> {
        self.stack.push(v);
        self.on_path[v as usize] = true;
        self.record(self.stack.clone())?;
        for i in 0..self.g.succs(v).len() {
            let w = self.g.succs(v)[i];
            if w == self.stack[0] {
                // Closing the cycle back to the path's first vertex is the
                // one permitted repeat; the walk cannot continue past it.
                let mut cyclic = self.stack.clone();
                cyclic.push(w);
                self.record(cyclic)?;
            } else if !self.on_path[w as usize] {
                self.dfs(w)?;
            }
        }
        self.on_path[v as usize] = false;
        self.stack.pop();
        Ok(())
    }
}

/// Every simple path of `g`, from every start vertex, including length-1
/// paths and cyclic simple paths.
pub fn enumerate_simple_paths(g: &Graph, lim: &OracleLimits) -> Result<Vec<Path>, OracleError> {
    if g.vertex_count() > lim.max_vertices {
        return Err(OracleError::TooManyVertices {
            actual: g.vertex_count(),
            limit: lim.max_vertices,
        });
    }
    let mut e = Enumerator {
        g,
        lim,
        started: Instant::now(),
        on_path: vec![false; g.vertex_count()],
        stack: Vec::new(),
        out: Vec::new(),
    };
    for v in 0..g.vertex_count() as VertexId {
        e.dfs(v)?;
    }
    Ok(e.out)
}

/// The maximal simple paths of `g`: simple paths that are not proper
/// contiguous subpaths of any other simple path. Canonically sorted.
pub fn oracle_pps(g: &Graph, lim: &OracleLimits) -> Result<Vec<Path>, OracleError> {
    Ok(maximal_filter(enumerate_simple_paths(g, lim)?))
}
