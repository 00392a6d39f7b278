//! Deterministic graph generators for tests and benchmarks: seeded random
//! control-flow graphs plus fixed structural families with known measures.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::cfg::Cfg;

#[derive(Debug, thiserror::Error, PartialEq, Eq)]
pub enum BenchError {
    #[error("family parameter out of range: {0}")]
    Param(String),
}

/// Seeded random graph: a start-to-end chain (which keeps every vertex on a
/// start-to-end walk), extra forward arcs, and `loop_bias` attempts at
/// backward arcs. Out-degree never exceeds two, the end vertex keeps
/// out-degree zero, and `loop_bias == 0` yields an acyclic graph.
pub fn gen_random_cfg(v_count: usize, loop_bias: usize, seed: u64) -> Result<Cfg, BenchError> {
    if v_count < 2 {
        return Err(BenchError::Param(format!(
            "need at least 2 vertices, got {v_count}"
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n = v_count;
    let mut arcs: Vec<(usize, usize)> = (0..n - 1).map(|i| (i, i + 1)).collect();
    let mut out_deg = vec![1usize; n];
    out_deg[n - 1] = 0;
    let mut have: std::collections::HashSet<(usize, usize)> = arcs.iter().copied().collect();

    for _ in 0..n {
        let a = rng.random_range(0..n - 1);
        if out_deg[a] >= 2 || a + 2 > n - 1 {
            continue;
        }
        let b = rng.random_range(a + 2..n);
        if have.insert((a, b)) {
            arcs.push((a, b));
            out_deg[a] += 1;
        }
    }
    if n >= 4 {
        for _ in 0..loop_bias {
            let a = rng.random_range(2..n - 1);
            if out_deg[a] >= 2 {
                continue;
            }
            let b = rng.random_range(1..a);
            if have.insert((a, b)) {
                arcs.push((a, b));
                out_deg[a] += 1;
            }
        }
    }

    let names: Vec<String> = (0..n)
        .map(|i| {
            if i == 0 {
                "Start".to_string()
            } else if i == n - 1 {
                "End".to_string()
            } else {
                format!("v{i}")
            }
        })
        .collect();
    Ok(build(&names, &arcs))
}

fn build(names: &[String], arcs: &[(usize, usize)]) -> Cfg {
    let name_refs: Vec<&str> = names.iter().map(|s| s.as_str()).collect();
    let arc_refs: Vec<(&str, &str)> = arcs
        .iter()
        .map(|&(a, b)| (names[a].as_str(), names[b].as_str()))
        .collect();
    let cfg = Cfg::from_parts(&name_refs, &arc_refs, name_refs[0], &[name_refs[names.len() - 1]])
        .expect("generated names are unique and arcs reference them");
    debug_assert!(crate::cfg::validate_cfg(&cfg).is_empty());
    cfg
}

/// Fixed graph families with known complexity measures, used as goldens and
/// benchmark workloads.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Family {
    /// `k` nested decisions sharing one merge: cyclomatic k+1, k+1 walks.
    NestedIf { k: usize },
    /// `k` diamonds in sequence: cyclomatic k+1, 2^k walks, 3k+2 vertices.
    SequentialIf { k: usize },
    /// One `k`-cycle with an entry and an exit at the same vertex: k+3
    /// prime paths.
    SingleLoop { k: usize },
    /// `k` disjoint `n`-cycles chained start to end.
    SequentialLoops { k: usize, n: usize },
    /// A ladder of `k` mutually reachable vertices forming one component.
    NestedLoops { k: usize },
    /// About 200 vertices: a chain interleaving 12 cycles and 5 diamonds,
    /// so the condensation keeps a bounded walk count.
    MixedRandom { seed: u64 },
}

pub fn gen_family(family: Family) -> Result<Cfg, BenchError> {
    match family {
        Family::NestedIf { k } => nested_if(k),
        Family::SequentialIf { k } => sequential_if(k),
        Family::SingleLoop { k } => single_loop(k),
        Family::SequentialLoops { k, n } => sequential_loops(k, n),
        Family::NestedLoops { k } => nested_loops(k),
        Family::MixedRandom { seed } => Ok(mixed_random(seed)),
    }
}

fn nested_if(k: usize) -> Result<Cfg, BenchError> {
    if k == 0 {
        return Err(BenchError::Param("nested-if needs k >= 1".into()));
    }
    let mut names = vec!["Start".to_string()];
    let d0 = 1;
    names.extend((1..=k).map(|i| format!("d{i}")));
    let x0 = names.len();
    names.extend((1..=k).map(|i| format!("x{i}")));
    let y = names.len();
    names.push("y".to_string());
    let m = names.len();
    names.push("m".to_string());
    let end = names.len();
    names.push("End".to_string());

    let mut arcs = vec![(0, d0)];
    for i in 0..k {
        arcs.push((d0 + i, x0 + i));
        arcs.push((d0 + i, if i + 1 < k { d0 + i + 1 } else { y }));
        arcs.push((x0 + i, m));
    }
    arcs.push((y, m));
    arcs.push((m, end));
    Ok(build(&names, &arcs))
}

fn sequential_if(k: usize) -> Result<Cfg, BenchError> {
    if k == 0 {
        return Err(BenchError::Param("sequential-if needs k >= 1".into()));
    }
    let mut names = vec!["Start".to_string()];
    for i in 1..=k {
        names.push(format!("d{i}"));
        names.push(format!("t{i}"));
        names.push(format!("f{i}"));
    }
    names.push("End".to_string());
    let d = |i: usize| 1 + 3 * i;
    let end = 1 + 3 * k;

    let mut arcs = vec![(0, d(0))];
    for i in 0..k {
        let next = if i + 1 < k { d(i + 1) } else { end };
        arcs.push((d(i), d(i) + 1));
        arcs.push((d(i), d(i) + 2));
        arcs.push((d(i) + 1, next));
        arcs.push((d(i) + 2, next));
    }
    Ok(build(&names, &arcs))
}

fn single_loop(k: usize) -> Result<Cfg, BenchError> {
    if k < 2 {
        return Err(BenchError::Param("single-loop needs k >= 2".into()));
    }
    let mut names = vec!["Start".to_string()];
    names.extend((1..=k).map(|i| format!("c{i}")));
    names.push("End".to_string());
    let mut arcs = vec![(0, 1), (1, k + 1)];
    for i in 1..=k {
        arcs.push((i, if i < k { i + 1 } else { 1 }));
    }
    Ok(build(&names, &arcs))
}

fn sequential_loops(k: usize, n: usize) -> Result<Cfg, BenchError> {
    if k == 0 || n < 2 {
        return Err(BenchError::Param("sequential-loops needs k >= 1, n >= 2".into()));
    }
    let mut names = vec!["Start".to_string()];
    for i in 1..=k {
        for j in 0..n {
            names.push(format!("c{i}_{j}"));
        }
    }
    names.push("End".to_string());
    let head = |i: usize| 1 + i * n;
    let end = 1 + k * n;

    let mut arcs = vec![(0, head(0))];
    for i in 0..k {
        for j in 0..n {
            arcs.push((head(i) + j, head(i) + (j + 1) % n));
        }
        arcs.push((head(i), if i + 1 < k { head(i + 1) } else { end }));
    }
    Ok(build(&names, &arcs))
}

fn nested_loops(k: usize) -> Result<Cfg, BenchError> {
    if k < 2 {
        return Err(BenchError::Param("nested-loops needs k >= 2".into()));
    }
    let mut names = vec!["Start".to_string()];
    names.extend((1..=k).map(|i| format!("h{i}")));
    names.push("End".to_string());
    let mut arcs = vec![(0, 1), (k, k + 1)];
    for i in 1..k {
        arcs.push((i, i + 1));
        arcs.push((i + 1, i));
    }
    Ok(build(&names, &arcs))
}

fn mixed_random(seed: u64) -> Cfg {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut names = vec!["Start".to_string()];
    let mut arcs: Vec<(usize, usize)> = Vec::new();
    // prev = exit vertex of the block laid down so far.
    let mut prev = 0usize;

    let loops = 12usize;
    let diamonds = 5usize;
    let mut loop_lens = Vec::new();
    for _ in 0..loops {
        loop_lens.push(rng.random_range(4..=9usize));
    }
    let fixed: usize = 2 + loop_lens.iter().sum::<usize>() + diamonds * 4;
    let filler_total = 200usize.saturating_sub(fixed);
    // Blocks in a fixed interleave; filler spread between them, remainder
    // appended before the end so the total lands on 200 exactly.
    let blocks = loops + diamonds;
    let mut filler_left = filler_total;
    let mut li = 0;
    for b in 0..=blocks {
        let chunk = if b == blocks { filler_left } else { filler_total / blocks };
        for _ in 0..chunk {
            let v = names.len();
            names.push(format!("f{v}"));
            arcs.push((prev, v));
            prev = v;
            filler_left -= 1;
        }
        if b == blocks {
            break;
        }
        if b % 3 == 2 && b / 3 < diamonds {
            // Diamond: d -> {a, b} -> m.
            let d = names.len();
            names.extend([format!("d{d}"), format!("a{d}"), format!("b{d}"), format!("m{d}")]);
            arcs.extend([(d, d + 1), (d, d + 2), (d + 1, d + 3), (d + 2, d + 3)]);
            arcs.push((prev, d));
            prev = d + 3;
        } else if li < loops {
            // Cycle entered and left at its head.
            let len = loop_lens[li];
            li += 1;
            let h = names.len();
            for j in 0..len {
                names.push(format!("c{h}_{j}"));
            }
            for j in 0..len {
                arcs.push((h + j, h + (j + 1) % len));
            }
            arcs.push((prev, h));
            prev = h;
        }
    }
    let end = names.len();
    names.push("End".to_string());
    arcs.push((prev, end));
    build(&names, &arcs)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cfg::validate_cfg;
    use crate::scc::tarjan_scc;

    #[test]
    fn random_graphs_validate_and_respect_degree_caps() {
        for seed in 0..30u64 {
            let cfg = gen_random_cfg(25, 5, seed).unwrap();
            assert!(validate_cfg(&cfg).is_empty());
            for v in 0..cfg.vertex_count() as u32 {
                assert!(cfg.graph.out_degree(v) <= 2);
            }
            assert_eq!(cfg.graph.out_degree(cfg.end), 0);
            assert_eq!(cfg.graph.in_degree(cfg.start), 0);
        }
    }

    #[test]
    fn zero_bias_means_acyclic() {
        for seed in 0..20u64 {
            let cfg = gen_random_cfg(20, 0, seed).unwrap();
            let d = tarjan_scc(&cfg.graph);
            assert!(d.nontrivial.is_empty(), "seed {seed} produced a cycle");
        }
    }

    #[test]
    fn same_seed_same_graph() {
        let a = gen_random_cfg(30, 4, 99).unwrap();
        let b = gen_random_cfg(30, 4, 99).unwrap();
        assert_eq!(a.graph.arcs(), b.graph.arcs());
    }

    #[test]
    fn families_validate_and_hit_size_formulas() {
        for k in 1..=6 {
            let cfg = gen_family(Family::SequentialIf { k }).unwrap();
            assert!(validate_cfg(&cfg).is_empty());
            assert_eq!(cfg.vertex_count(), 3 * k + 2);
            assert_eq!(cfg.graph.arcs().len(), 4 * k + 1);

            let cfg = gen_family(Family::NestedIf { k }).unwrap();
            assert!(validate_cfg(&cfg).is_empty());
            assert_eq!(cfg.vertex_count(), 2 * k + 4);
        }
        for k in 2..=5 {
            for family in [
                Family::SingleLoop { k },
                Family::SequentialLoops { k, n: 3 },
                Family::NestedLoops { k },
            ] {
                let cfg = gen_family(family).unwrap();
                assert!(validate_cfg(&cfg).is_empty(), "{family:?}");
            }
        }
        assert!(gen_family(Family::SingleLoop { k: 1 }).is_err());
    }

    #[test]
    fn mixed_random_has_the_advertised_shape() {
        let cfg = gen_family(Family::MixedRandom { seed: 7 }).unwrap();
        assert!(validate_cfg(&cfg).is_empty());
        assert!((190..=210).contains(&cfg.vertex_count()));
        let d = tarjan_scc(&cfg.graph);
        assert!(d.nontrivial.len() >= 10, "{} cycles", d.nontrivial.len());
        for v in 0..cfg.vertex_count() as u32 {
            assert!(cfg.graph.out_degree(v) <= 2);
        }
    }
}
