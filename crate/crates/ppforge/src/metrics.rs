//! Structural complexity measures: cyclomatic number, acyclic-walk count
//! (each arc used at most once), and prime path count.

use std::collections::HashMap;

pub use num_bigint::BigUint;

use crate::cfg::Cfg;
use crate::path::VertexId;

/// Human-readable definition embedded in reports so consumers know which
/// walk-counting convention the number uses.
pub const NPATH_DEFINITION: &str =
    "number of start-to-end walks that traverse each arc at most once";

#[derive(Debug, thiserror::Error, PartialEq, Eq)]
pub enum MetricsError {
    #[error("walk counting exceeded the state budget of {budget} memo entries")]
    StateBudget { budget: usize },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MetricsReport {
    pub cyclomatic: u64,
    pub npath: BigUint,
    pub prime_paths: usize,
}

/// E - V + 2P with P the number of weakly connected components.
pub fn cyclomatic(cfg: &Cfg) -> u64 {
    let e = cfg.graph.arcs().len() as i64;
    let v = cfg.vertex_count() as i64;
    let p = cfg.graph.weak_component_count() as i64;
    let cc = e - v + 2 * p;
    // A validated graph always has a start-to-end path, so cc >= 1.
    cc.max(0) as u64
}

/// Default memoization budget for [`npath`].
pub const NPATH_STATE_BUDGET: usize = 2_000_000;

/// Count start-to-end walks that use each arc at most once. Memoized on
/// (vertex, used arcs still reachable from that vertex): arcs behind the
/// walk cannot influence its future, so masking them out collapses states.
pub fn npath(cfg: &Cfg, budget: usize) -> Result<BigUint, MetricsError> {
    let arcs = cfg.graph.arcs();
    let words = arcs.len().div_ceil(64).max(1);

    // arc_relevant[v] = bitmask of arcs whose tail is reachable from v.
    let mut arc_relevant = vec![vec![0u64; words]; cfg.vertex_count()];
    for (v, mask) in arc_relevant.iter_mut().enumerate() {
        let reach = cfg.graph.forward_reachable(v as VertexId);
        for (i, &(a, _)) in arcs.iter().enumerate() {
            if reach[a as usize] {
                mask[i / 64] |= 1 << (i % 64);
            }
        }
    }
    let mut arc_index = HashMap::new();
    for (i, &(a, b)) in arcs.iter().enumerate() {
        arc_index.insert((a, b), i);
    }

    struct Ctx<'a> {
        cfg: &'a Cfg,
        arc_index: HashMap<(VertexId, VertexId), usize>,
        arc_relevant: Vec<Vec<u64>>,
        memo: HashMap<(VertexId, Vec<u64>), BigUint>,
        budget: usize,
    }

    fn walk(ctx: &mut Ctx, v: VertexId, used: &[u64]) -> Result<BigUint, MetricsError> {
        let mut key = used.to_vec();
        for (w, rel) in key.iter_mut().zip(&ctx.arc_relevant[v as usize]) {
            *w &= rel;
        }
        if let Some(hit) = ctx.memo.get(&(v, key.clone())) {
            return Ok(hit.clone());
        }
        let mut total = if v == ctx.cfg.end {
            BigUint::from(1u32)
        } else {
            BigUint::from(0u32)
        };
        for &s in ctx.cfg.graph.succs(v) {
            let i = ctx.arc_index[&(v, s)];
            if used[i / 64] & (1 << (i % 64)) != 0 {
                continue;
            }
            let mut next = used.to_vec();
            next[i / 64] |= 1 << (i % 64);
            total += walk(ctx, s, &next)?;
        }
        if ctx.memo.len() >= ctx.budget {
            return Err(MetricsError::StateBudget { budget: ctx.budget });
        }
        ctx.memo.insert((v, key), total.clone());
        Ok(total)
    }

    let mut ctx = Ctx { cfg, arc_index, arc_relevant, memo: HashMap::new(), budget };
    let used = vec![0u64; words];
    walk(&mut ctx, cfg.start, &used)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cfg::Cfg;
    use crate::testutil::binsearch;

    #[test]
    fn binsearch_measures() {
        let cfg = binsearch();
        assert_eq!(cyclomatic(&cfg), 4);
        assert_eq!(npath(&cfg, NPATH_STATE_BUDGET).unwrap(), BigUint::from(4u32));
    }

    #[test]
    fn straight_line_is_trivial() {
        let cfg = Cfg::from_parts(&["S", "a", "E"], &[("S", "a"), ("a", "E")], "S", &["E"])
            .unwrap();
        assert_eq!(cyclomatic(&cfg), 1);
        assert_eq!(npath(&cfg, NPATH_STATE_BUDGET).unwrap(), BigUint::from(1u32));
    }

    #[test]
    fn diamond_chains_double_per_decision() {
        for k in 1..=10usize {
            let cfg = crate::benchgen::gen_family(crate::benchgen::Family::SequentialIf {
                k,
            })
            .unwrap();
            assert_eq!(cyclomatic(&cfg), k as u64 + 1);
            assert_eq!(
                npath(&cfg, NPATH_STATE_BUDGET).unwrap(),
                BigUint::from(1u32) << k
            );
        }
    }

    #[test]
    fn loops_contribute_arc_once_walks() {
        // S -> a, a -> a (self loop), a -> E: walks are S,a,E and S,a,a,E.
        let cfg = Cfg::from_parts(
            &["S", "a", "E"],
            &[("S", "a"), ("a", "a"), ("a", "E")],
            "S",
            &["E"],
        )
        .unwrap();
        assert_eq!(npath(&cfg, NPATH_STATE_BUDGET).unwrap(), BigUint::from(2u32));
    }

    #[test]
    fn state_budget_trips() {
        let cfg = binsearch();
        assert_eq!(npath(&cfg, 1), Err(MetricsError::StateBudget { budget: 1 }));
    }
}
