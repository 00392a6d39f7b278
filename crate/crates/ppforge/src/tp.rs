//! Test paths: executable start-to-end walks that cover a set of prime
//! paths. Greedy tour construction, longest prime path first.

use crate::cfg::Cfg;
use crate::path::{contains_contiguous, Path, VertexId};

#[derive(Debug, thiserror::Error, PartialEq, Eq)]
pub enum TpError {
    #[error("no walk from vertex {from} to vertex {to}; is the graph validated?")]
    NoWalk { from: VertexId, to: VertexId },
}

/// One start-to-end walk plus every input prime path it covers as a
/// contiguous subsequence.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TestPath {
    pub walk: Path,
    pub covers: Vec<Path>,
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct TpReport {
    pub test_paths: Vec<TestPath>,
    /// Fraction of the input prime paths covered by at least one walk.
    pub coverage: f64,
}

/// Shortest walk between two vertices by breadth-first search. Deterministic:
/// within a layer, the smallest-id predecessor discovered first wins.
pub fn shortest_walk(cfg: &Cfg, from: VertexId, to: VertexId) -> Option<Vec<VertexId>> {
    let n = cfg.vertex_count();
    if from == to {
        return Some(vec![from]);
    }
    let mut parent: Vec<Option<VertexId>> = vec![None; n];
    let mut seen = vec![false; n];
    seen[from as usize] = true;
    let mut frontier = vec![from];
    while !frontier.is_empty() {
        frontier.sort_unstable();
        let mut next = Vec::new();
        for &u in &frontier {
            let mut succs = cfg.graph.succs(u).to_vec();
            succs.sort_unstable();
            for s in succs {
                if !seen[s as usize] {
                    seen[s as usize] = true;
                    parent[s as usize] = Some(u);
                    if s == to {
                        let mut walk = vec![to];
                        let mut cur = to;
                        while let Some(p) = parent[cur as usize] {
                            walk.push(p);
                            cur = p;
                        }
                        walk.reverse();
                        return Some(walk);
                    }
                    next.push(s);
                }
            }
        }
        frontier = next;
    }
    None
}

/// The canonical tour for one prime path: shortest approach from the start
/// vertex, the path itself, shortest escape to the end vertex, with the
/// junction vertices deduplicated.
pub fn tour_for(cfg: &Cfg, p: &Path) -> Result<Path, TpError> {
    let approach = shortest_walk(cfg, cfg.start, p.first())
        .ok_or(TpError::NoWalk { from: cfg.start, to: p.first() })?;
    let escape = shortest_walk(cfg, p.last(), cfg.end)
        .ok_or(TpError::NoWalk { from: p.last(), to: cfg.end })?;
    let mut walk = approach;
    walk.extend_from_slice(&p.as_slice()[1..]);
    walk.extend_from_slice(&escape[1..]);
    Ok(Path::new(walk))
}

/// Greedy cover: take prime paths longest first (ties by vertex order) and
/// add a tour whenever the path is not already covered by a chosen walk.
pub fn generate_test_paths(cfg: &Cfg, pps: &[Path]) -> Result<TpReport, TpError> {
    let mut order: Vec<&Path> = pps.iter().collect();
    order.sort_by(|a, b| b.len().cmp(&a.len()).then_with(|| a.cmp(b)));

    let mut walks: Vec<Path> = Vec::new();
    for p in order {
        let covered = walks
            .iter()
            .any(|w| contains_contiguous(w.as_slice(), p.as_slice()));
        if !covered {
            walks.push(tour_for(cfg, p)?);
        }
    }

    let mut covered_total = 0usize;
    let test_paths: Vec<TestPath> = walks
        .into_iter()
        .map(|walk| {
            let covers: Vec<Path> = pps
                .iter()
                .filter(|p| contains_contiguous(walk.as_slice(), p.as_slice()))
                .cloned()
                .collect();
            TestPath { walk, covers }
        })
        .collect();
    for p in pps {
        if test_paths
            .iter()
            .any(|t| contains_contiguous(t.walk.as_slice(), p.as_slice()))
        {
            covered_total += 1;
        }
    }
    let coverage = if pps.is_empty() {
        1.0
    } else {
        covered_total as f64 / pps.len() as f64
    };
    Ok(TpReport { test_paths, coverage })
}

/// Check that every walk is a real start-to-end walk of the graph and that
/// every prime path is covered. Returns the offending description on
/// failure.
pub fn verify_coverage(cfg: &Cfg, pps: &[Path], report: &TpReport) -> Result<(), String> {
    for t in &report.test_paths {
        let w = t.walk.as_slice();
        if w.is_empty() || w[0] != cfg.start || w[w.len() - 1] != cfg.end {
            return Err(format!("walk {:?} does not run start to end", t.walk));
        }
        for pair in w.windows(2) {
            if !cfg.graph.has_arc(pair[0], pair[1]) {
                return Err(format!(
                    "walk {:?} uses missing arc {} -> {}",
                    t.walk, pair[0], pair[1]
                ));
            }
        }
    }
    for p in pps {
        if !report
            .test_paths
            .iter()
            .any(|t| contains_contiguous(t.walk.as_slice(), p.as_slice()))
        {
            return Err(format!("prime path {p:?} is not covered"));
        }
    }
    Ok(())
}
