//! The asynchronous per-vertex fixed-point runner.
//!
//! Every vertex list starts with the vertex's own length-1 path. A vertex
//! update then does three things, in order:
//!
//! 1. prune: tombstone own records that every successor has consumed and
//!    that are extended or covered by a live record of the same vertex;
//! 2. consume: read each predecessor's records from the vertex's cursor to
//!    the predecessor's published length, appending the extension `q + v`
//!    whenever it is still a simple path;
//! 3. retire: when the vertex's outputs are fully consumed and two
//!    consecutive scans of its upstream region observe no pending reads,
//!    clear the vertex's public flag, permanently.
//!
//! The run reaches its fixed point when every public flag is clear; the
//! live, unextended records are then exactly the maximal simple paths, up to
//! containment handled by the final filter.
//!
//! Cross-thread communication is restricted to single-writer atomic cells:
//! record flags, per-list published lengths, per-reader cursors and the
//! public flags. There is no read-modify-write operation anywhere and no
//! blocking between workers.

use crate::cfg::{build_csr, normalize_outdegree, Cfg, CsrGraph};
use crate::path::{maximal_filter, Path, VertexId};
use crate::pathstore::{
    PathHandle, PathRecord, PathStore, StoreError, StoreStats, SuccessorSide,
};
use crate::scc::backward_reachable;
use crate::trace::{Trace, TraceEvent};
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use std::sync::atomic::{AtomicBool, AtomicU64, Ordering};

/// Env var holding an absolute round cap that overrides the dynamic budget.
pub const ITER_BUDGET_ENV: &str = "PPFORGE_ITER_BUDGET";

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Schedule {
    /// Sweep all still-active vertices in id order until none remain.
    RoundRobin,
    /// Update one uniformly chosen active vertex at a time.
    SeededRandom { seed: u64 },
    /// Split the vertices into contiguous chunks, one busy-looping thread
    /// per chunk.
    Parallel { workers: usize },
}

impl std::fmt::Display for Schedule {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Schedule::RoundRobin => write!(f, "round-robin"),
            Schedule::SeededRandom { seed } => write!(f, "seeded-random(seed={seed})"),
            Schedule::Parallel { workers } => write!(f, "parallel(workers={workers})"),
        }
    }
}

#[derive(Debug, thiserror::Error)]
pub enum RunError {
    #[error("iteration budget exceeded: {rounds} scheduler rounds against a cap of {budget}")]
    BudgetExceeded { rounds: u64, budget: u64 },
    #[error(transparent)]
    Store(#[from] StoreError),
}

#[derive(Clone, Copy, Debug, Default)]
pub struct RunStats {
    /// Scheduler rounds executed (sweeps, or |V| random picks, or per-worker
    /// chunk sweeps summed).
    pub rounds: u64,
    /// Individual vertex updates executed.
    pub update_calls: u64,
    pub store: StoreStats,
}

/// Pads hot atomics to a cache line so neighboring vertices owned by
/// different workers do not false-share.
#[repr(align(64))]
struct CachePadded<T>(T);

/// One quiescence check: the cursor at `cursor` (owned by `owner`) must have
/// consumed everything `source` has published.
#[derive(Clone, Copy)]
struct ScanPair {
    cursor: usize,
    owner: VertexId,
    source: VertexId,
}

struct RunShared<'a> {
    csr: &'a CsrGraph,
    store: &'a PathStore,
    /// Public flags; true while the vertex may still act. Cleared once,
    /// never re-set.
    flags: Box<[CachePadded<AtomicBool>]>,
    /// One cursor per (vertex, predecessor-slot), flat-indexed in parallel
    /// with the CSR predecessor list. Written only by the slot's vertex.
    cursors: Box<[CachePadded<AtomicU64>]>,
    /// For each vertex: its successors paired with the flat index of this
    /// vertex's slot in the successor's cursor table.
    succ_slots: Vec<Vec<(VertexId, usize)>>,
    /// For each vertex: which side of each predecessor's successor list this
    /// vertex sits on.
    pred_sides: Vec<Vec<SuccessorSide>>,
    /// For each vertex: the cursor/source pairs its retirement scan checks,
    /// covering the vertex itself, everything that can reach it, and its own
    /// outputs.
    scan_pairs: Vec<Vec<ScanPair>>,
    /// Set once by a failing worker so the others stop sweeping.
    failed: AtomicBool,
    /// Sequential schedules admit exact rest-state crosschecks. Read only by
    /// the checked-build scan assertions.
    #[cfg_attr(not(debug_assertions), allow(dead_code))]
    exact: bool,
    trace: Option<&'a Trace>,
}

fn cursor_slot(csr: &CsrGraph, v: VertexId, pred_pos: usize) -> usize {
    csr.pred_index[v as usize] as usize + 1 + pred_pos
}

impl<'a> RunShared<'a> {
    fn new(cfg: &Cfg, csr: &'a CsrGraph, store: &'a PathStore, trace: Option<&'a Trace>, exact: bool) -> RunShared<'a> {
        let n = csr.vertex_count();
        let mut flags = Vec::with_capacity(n);
        flags.resize_with(n, || CachePadded(AtomicBool::new(true)));
        let mut cursors = Vec::with_capacity(csr.pred_list.len());
        cursors.resize_with(csr.pred_list.len(), || CachePadded(AtomicU64::new(0)));

        let mut succ_slots = vec![Vec::new(); n];
        let mut pred_sides = vec![Vec::new(); n];
        for v in 0..n as VertexId {
            for &t in csr.succs_of(v) {
                let pos = csr
                    .preds_of(t)
                    .iter()
                    .position(|&p| p == v)
                    .expect("successor lists and predecessor lists must agree");
                succ_slots[v as usize].push((t, cursor_slot(csr, t, pos)));
            }
            for &p in csr.preds_of(v) {
                let side = if csr.succs_of(p)[0] == v {
                    SuccessorSide::Left
                } else {
                    debug_assert_eq!(csr.succs_of(p).get(1), Some(&v));
                    SuccessorSide::Right
                };
                pred_sides[v as usize].push(side);
            }
        }

        let mut scan_pairs = vec![Vec::new(); n];
        for v in 0..n as VertexId {
            let mut pairs = Vec::new();
            let mut region = vec![v];
            region.extend(backward_reachable(&cfg.graph, v));
            for &s in &region {
                for (pos, &p) in csr.preds_of(s).iter().enumerate() {
                    pairs.push(ScanPair { cursor: cursor_slot(csr, s, pos), owner: s, source: p });
                }
            }
            for &(t, slot) in &succ_slots[v as usize] {
                pairs.push(ScanPair { cursor: slot, owner: t, source: v });
            }
            pairs.sort_by_key(|p| p.cursor);
            pairs.dedup_by_key(|p| p.cursor);
            scan_pairs[v as usize] = pairs;
        }

        RunShared {
            csr,
            store,
            flags: flags.into_boxed_slice(),
            cursors: cursors.into_boxed_slice(),
            succ_slots,
            pred_sides,
            scan_pairs,
            failed: AtomicBool::new(false),
            exact,
            trace,
        }
    }

    fn flag(&self, v: VertexId) -> bool {
        self.flags[v as usize].0.load(Ordering::Acquire)
    }
}

/// Tombstone records of `v` that every successor has consumed and that are
/// extended or covered. Returns whether anything was tombstoned. Sinks are
/// skipped: nothing consumes their records, and the final filter drops
/// whatever is non-maximal there.
fn prune_vertex(sh: &RunShared, v: VertexId, record_trace: bool) -> bool {
    let slots = &sh.succ_slots[v as usize];
    if slots.is_empty() {
        return false;
    }
    let consumed = slots
        .iter()
        .map(|&(_, slot)| sh.cursors[slot].0.load(Ordering::Acquire))
        .min()
        .expect("non-empty successor list");
    let mut progressed = false;
    for idx in 0..consumed as u32 {
        let rec = sh.store.record(v, idx);
        if rec.is_tombstoned() || rec.is_cyclic() {
            continue;
        }
        let prunable = rec.is_extended()
            || sh.store.iterate_live(v).any(|(h, other)| {
                h.index != idx && crate::path::contains_contiguous(other.seq(), rec.seq())
            });
        if prunable {
            let handle = PathHandle { vertex: v, index: idx };
            sh.store.tombstone(handle, slots.len());
            if record_trace {
                if let Some(t) = sh.trace {
                    t.record(TraceEvent::Tombstone { handle });
                }
            }
            progressed = true;
        }
    }
    progressed
}

/// Two read-only passes over the vertex's quiescence pairs. Each pair loads
/// the reader cursor first and the published length second; both passes must
/// see every pair caught up and the same cursor total, otherwise something
/// moved in between. Pairs whose cursor owner has already retired are
/// permanently settled and skipped.
fn scan_once(sh: &RunShared, pairs: &[ScanPair]) -> Option<u64> {
    let mut total = 0u64;
    for p in pairs {
        if !sh.flags[p.owner as usize].0.load(Ordering::Acquire) {
            continue;
        }
        let consumed = sh.cursors[p.cursor].0.load(Ordering::Acquire);
        let published = sh.store.list_len(p.source);
        if consumed != published {
            return None;
        }
        total = total.wrapping_add(consumed);
    }
    Some(total)
}

/// One full update of `v`; returns whether any record was appended,
/// consumed or tombstoned. Public-flag retirement does not count as
/// progress.
fn update_vertex(sh: &RunShared, v: VertexId) -> Result<bool, StoreError> {
    let mut progressed = prune_vertex(sh, v, true);

    let preds = sh.csr.preds_of(v);
    for (pos, &p) in preds.iter().enumerate() {
        let cursor = &sh.cursors[cursor_slot(sh.csr, v, pos)].0;
        let side = sh.pred_sides[v as usize][pos];
        let from = cursor.load(Ordering::Relaxed);
        let to = sh.store.list_len(p);
        for i in from..to {
            let source = PathHandle { vertex: p, index: i as u32 };
            let rec = sh.store.record(p, i as u32);
            // A record below a reader's cursor is what prune needs; at or
            // past the cursor it is untouchable.
            debug_assert!(!rec.is_tombstoned(), "live cursor range contains a tombstone");
            sh.store.mark_read(source, side);
            if let Some(t) = sh.trace {
                t.record(TraceEvent::Read { reader: v, source, side });
            }
            let seq = rec.seq();
            // Extending by v keeps the path simple iff v is absent or only
            // at the front (which closes a cycle).
            if !rec.is_cyclic() && (!seq.contains(&v) || seq[0] == v) {
                let mut ext = Vec::with_capacity(seq.len() + 1);
                ext.extend_from_slice(seq);
                ext.push(v);
                let new = PathRecord::new(ext);
                if seq[0] == v {
                    new.set_cyclic_at_creation();
                }
                new.finish_valid();
                let len = new.len();
                let handle = sh.store.append(v, new)?;
                sh.store.mark_extended(source);
                if let Some(t) = sh.trace {
                    t.record(TraceEvent::Append { actor: v, handle, len });
                    t.record(TraceEvent::Extend { reader: v, source, new: handle });
                }
            }
            // The cursor moves only after the extension is visible, so a
            // caught-up cursor always means fully propagated work.
            cursor.store(i + 1, Ordering::Release);
            progressed = true;
        }
    }

    if sh.flag(v) {
        let pending_output = sh.succ_slots[v as usize]
            .iter()
            .any(|&(_, slot)| sh.cursors[slot].0.load(Ordering::Acquire) < sh.store.list_len(v));
        #[cfg(debug_assertions)]
        if sh.exact {
            let succ_count = sh.csr.succs_of(v).len();
            let by_flags = (0..sh.store.list_len(v) as u32)
                .any(|i| !sh.store.record(v, i).read_by_all(succ_count));
            debug_assert_eq!(
                pending_output, by_flags,
                "cursor-derived pending work must match record flags at rest"
            );
        }
        if !pending_output {
            let pairs = &sh.scan_pairs[v as usize];
            if let Some(first) = scan_once(sh, pairs) {
                if scan_once(sh, pairs) == Some(first) {
                    sh.flags[v as usize].0.store(false, Ordering::Release);
                    if let Some(t) = sh.trace {
                        t.record(TraceEvent::FlagCleared { vertex: v });
                    }
                }
            }
        }
    }
    Ok(progressed)
}

/// Round counter with the dynamic cap. The cap is refreshed from the store
/// whenever it trips, since list lengths only grow; a hard override replaces
/// the dynamic rule entirely.
struct BudgetState {
    rounds: u64,
    limit: u64,
    hard: Option<u64>,
    vertices: u64,
}

impl BudgetState {
    fn new(vertices: usize, hard: Option<u64>) -> BudgetState {
        BudgetState {
            rounds: 0,
            // lists start at one record each
            limit: 10 * vertices as u64 * 2,
            hard,
            vertices: vertices as u64,
        }
    }

    fn charge_round(&mut self, store: &PathStore) -> Result<(), RunError> {
        self.rounds += 1;
        if let Some(h) = self.hard {
            if self.rounds > h {
                return Err(RunError::BudgetExceeded { rounds: self.rounds, budget: h });
            }
            return Ok(());
        }
        if self.rounds > self.limit {
            let longest = (0..store.vertex_count() as VertexId)
                .map(|v| store.list_len(v))
                .max()
                .unwrap_or(0);
            self.limit = 10 * self.vertices * (1 + longest);
            if self.rounds > self.limit {
                return Err(RunError::BudgetExceeded { rounds: self.rounds, budget: self.limit });
            }
        }
        Ok(())
    }
}

fn run_round_robin(sh: &RunShared, budget: &mut BudgetState) -> Result<u64, RunError> {
    let n = sh.csr.vertex_count() as VertexId;
    let mut calls = 0u64;
    loop {
        let mut any_active = false;
        budget.charge_round(sh.store)?;
        for v in 0..n {
            if !sh.flag(v) {
                continue;
            }
            any_active = true;
            calls += 1;
            update_vertex(sh, v)?;
        }
        if !any_active {
            return Ok(calls);
        }
    }
}

fn run_seeded(sh: &RunShared, seed: u64, budget: &mut BudgetState) -> Result<u64, RunError> {
    let n = sh.csr.vertex_count();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut calls = 0u64;
    loop {
        let active: Vec<VertexId> = (0..n as VertexId).filter(|&v| sh.flag(v)).collect();
        if active.is_empty() {
            return Ok(calls);
        }
        // One round is |V| picks, making budgets comparable across schedules.
        if calls % n as u64 == 0 {
            budget.charge_round(sh.store)?;
        }
        let v = active[rng.random_range(0..active.len())];
        calls += 1;
        update_vertex(sh, v)?;
    }
}

fn run_parallel(sh: &RunShared, workers: usize, hard: Option<u64>) -> Result<u64, RunError> {
    let n = sh.csr.vertex_count();
    let workers = workers.clamp(1, n);
    let chunk = n.div_ceil(workers);
    std::thread::scope(|scope| {
        let handles: Vec<_> = (0..workers)
            .map(|w| {
                let lo = (w * chunk) as VertexId;
                let hi = (((w + 1) * chunk).min(n)) as VertexId;
                scope.spawn(move || -> Result<u64, RunError> {
                    let mut budget = BudgetState::new(n, hard);
                    let mut calls = 0u64;
                    loop {
                        if sh.failed.load(Ordering::Acquire) {
                            return Ok(calls);
                        }
                        budget.charge_round(sh.store).inspect_err(|_| {
                            sh.failed.store(true, Ordering::Release);
                        })?;
                        let mut any_active = false;
                        let mut any_progress = false;
                        for v in lo..hi {
                            if !sh.flag(v) {
                                continue;
                            }
                            any_active = true;
                            calls += 1;
                            match update_vertex(sh, v) {
                                Ok(p) => any_progress |= p,
                                Err(e) => {
                                    sh.failed.store(true, Ordering::Release);
                                    return Err(e.into());
                                }
                            }
                        }
                        if !any_active {
                            return Ok(calls);
                        }
                        if !any_progress {
                            // Waiting on upstream regions owned by other
                            // workers; don't burn the core.
                            std::thread::yield_now();
                        }
                    }
                })
            })
            .collect();
        let mut calls = 0u64;
        let mut first_err = None;
        for h in handles {
            match h.join().expect("worker panicked") {
                Ok(c) => calls += c,
                Err(e) => first_err = first_err.or(Some(e)),
            }
        }
        first_err.map_or(Ok(calls), Err)
    })
}

/// Drive `cfg` to the fixed point. Requires out-degree at most 2 everywhere;
/// arbitrary graphs go through [`prime_paths`] instead, which normalizes
/// first.
pub fn run_to_fixed_point(
    cfg: &Cfg,
    schedule: &Schedule,
    trace: Option<&Trace>,
    hard_budget: Option<u64>,
) -> Result<(PathStore, RunStats), RunError> {
    let n = cfg.vertex_count();
    for v in 0..n as VertexId {
        assert!(
            cfg.graph.out_degree(v) <= 2,
            "fixed-point runner requires out-degree at most 2; normalize first"
        );
    }
    let csr = build_csr(cfg);
    let store = PathStore::new(n);
    let parallel = matches!(schedule, Schedule::Parallel { .. });
    let sh = RunShared::new(cfg, &csr, &store, trace, !parallel);

    let mut budget = BudgetState::new(n, hard_budget);
    let (rounds, calls) = match schedule {
        Schedule::RoundRobin => {
            let calls = run_round_robin(&sh, &mut budget)?;
            (budget.rounds, calls)
        }
        Schedule::SeededRandom { seed } => {
            let calls = run_seeded(&sh, *seed, &mut budget)?;
            (budget.rounds, calls)
        }
        Schedule::Parallel { workers } => {
            let calls = run_parallel(&sh, *workers, hard_budget)?;
            (0, calls)
        }
    };

    // Concurrent cursor movement can leave fully consumed records behind the
    // final prune of their vertex; sweep them once, synchronously. This is
    // housekeeping outside the traced protocol. Sequential schedules reach
    // the prune fixed point on their own.
    let mut swept = false;
    for v in 0..n as VertexId {
        swept |= prune_vertex(&sh, v, false);
    }
    debug_assert!(parallel || !swept, "sequential run left prunable records behind");

    // At the fixed point no update makes progress; check cheaply in
    // debug builds.
    #[cfg(debug_assertions)]
    for v in 0..n as VertexId {
        debug_assert!(!sh.flag(v), "run finished with an active public flag");
        let progressed = update_vertex(&sh, v).expect("fixed-point update cannot allocate");
        debug_assert!(!progressed, "fixed point admitted further progress at vertex {v}");
    }

    let stats = RunStats { rounds, update_calls: calls, store: store.stats() };
    Ok((store, stats))
}

/// Env-configured wrapper around [`run_to_fixed_point`].
pub fn run_vertex_generation(
    cfg: &Cfg,
    schedule: &Schedule,
    trace: Option<&Trace>,
) -> Result<(PathStore, RunStats), RunError> {
    let hard = std::env::var(ITER_BUDGET_ENV).ok().and_then(|s| s.parse::<u64>().ok());
    run_to_fixed_point(cfg, schedule, trace, hard)
}

/// The fixed point's answer: live unextended records, reduced to the maximal
/// ones.
pub fn finalize_pps(store: &PathStore) -> Vec<Path> {
    let mut out = Vec::new();
    for v in 0..store.vertex_count() as VertexId {
        for (_, rec) in store.iterate_live(v) {
            if !rec.is_extended() {
                out.push(rec.to_path());
            }
        }
    }
    maximal_filter(out)
}

/// All maximal simple paths of an arbitrary graph: normalize out-degrees,
/// run to the fixed point, erase the normalization intermediates and keep
/// the maximal survivors. Exact for any input graph.
pub fn prime_paths(
    cfg: &Cfg,
    schedule: &Schedule,
    trace: Option<&Trace>,
) -> Result<(Vec<Path>, RunStats), RunError> {
    let norm = normalize_outdegree(cfg);
    let (store, stats) = run_vertex_generation(&norm.cfg, schedule, trace)?;
    let raw = finalize_pps(&store);
    if !norm.cfg.has_synthetics() {
        return Ok((raw, stats));
    }
    let erased: Vec<Path> = raw
        .iter()
        .map(|p| norm.cfg.erase_synthetics(p))
        .filter(|p| !p.is_empty())
        .collect();
    Ok((maximal_filter(erased), stats))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oracle::{oracle_pps, OracleLimits};
    use crate::testutil::{assert_path_set_eq, binsearch, path_of};

    fn pps_of(cfg: &Cfg, schedule: &Schedule) -> Vec<Path> {
        prime_paths(cfg, schedule, None).expect("run failed").0
    }

    #[test]
    fn first_update_of_a_join_vertex_extends_both_seed_records() {
        let cfg = binsearch();
        let csr = build_csr(&cfg);
        let store = PathStore::new(cfg.vertex_count());
        let sh = RunShared::new(&cfg, &csr, &store, None, true);
        let two = cfg.find("2").unwrap();
        let one = cfg.find("1").unwrap();
        let eight = cfg.find("8").unwrap();

        assert!(update_vertex(&sh, two).unwrap());
        let recs: Vec<Vec<VertexId>> =
            store.iterate_live(two).map(|(_, r)| r.seq().to_vec()).collect();
        assert_eq!(recs, vec![vec![two], vec![one, two], vec![eight, two]]);

        // Nothing new upstream: the second call neither consumes nor prunes,
        // and the flag stays up because the successors have not caught up.
        assert!(!update_vertex(&sh, two).unwrap());
        assert!(sh.flag(two));
    }

    #[test]
    fn whole_graph_run_matches_oracle_on_binsearch() {
        let cfg = binsearch();
        let got = pps_of(&cfg, &Schedule::RoundRobin);
        let want = oracle_pps(&cfg.graph, &OracleLimits::default()).unwrap();
        assert_eq!(got, want);
        assert_eq!(got.len(), 19);
    }

    #[test]
    fn binsearch_contains_the_expected_complete_paths() {
        let cfg = binsearch();
        let got = pps_of(&cfg, &Schedule::RoundRobin);
        let complete: Vec<Path> = got
            .iter()
            .filter(|p| p.first() == cfg.start && p.last() == cfg.end)
            .cloned()
            .collect();
        assert_eq!(
            complete,
            vec![
                path_of(&cfg, &["Start", "1", "2", "3", "5", "7", "End"]),
                path_of(&cfg, &["Start", "1", "2", "9", "End"]),
            ]
        );
    }

    #[test]
    fn single_vertex_graph_yields_its_singleton() {
        let cfg = Cfg::from_parts(&["S"], &[], "S", &["S"]).unwrap();
        let got = pps_of(&cfg, &Schedule::RoundRobin);
        assert_eq!(got, vec![Path::new(vec![0])]);
    }

    #[test]
    fn self_loop_keeps_its_cycle_and_the_entry() {
        let cfg = Cfg::from_parts(&["S", "A"], &[("S", "A"), ("A", "A")], "S", &["A"]).unwrap();
        let got = pps_of(&cfg, &Schedule::RoundRobin);
        assert_path_set_eq(&cfg, &got, &[vec!["S", "A"], vec!["A", "A"]]);
    }

    #[test]
    fn scc_subgraph_run_produces_all_rotations_and_maximal_chords() {
        let cfg = binsearch();
        let d = crate::scc::tarjan_scc(&cfg.graph);
        let members = &d.members[d.nontrivial[0] as usize];
        let (sub, back) = cfg.graph.induced_subgraph(members);
        let names: Vec<String> = back.iter().map(|&v| cfg.name(v).to_string()).collect();
        let name_refs: Vec<&str> = names.iter().map(String::as_str).collect();
        let mut arcs = Vec::new();
        for v in 0..sub.vertex_count() as VertexId {
            for &w in sub.succs(v) {
                arcs.push((name_refs[v as usize], name_refs[w as usize]));
            }
        }
        let sub_cfg =
            Cfg::from_parts(&name_refs, &arcs, name_refs[0], &[name_refs[0]]).unwrap();
        let got = pps_of(&sub_cfg, &Schedule::RoundRobin);
        let want = oracle_pps(&sub_cfg.graph, &OracleLimits::default()).unwrap();
        assert_eq!(got, want);
        assert_eq!(got.len(), 11);
        let cyclic = got.iter().filter(|p| p.is_cyclic()).count();
        assert_eq!(cyclic, 9);
    }

    #[test]
    fn condensation_run_yields_exactly_the_complete_paths() {
        let cfg = binsearch();
        let d = crate::scc::tarjan_scc(&cfg.graph);
        let ccfg = crate::scc::build_ccfg(&cfg, &d);
        let got = pps_of(&ccfg, &Schedule::RoundRobin);
        assert_path_set_eq(
            &ccfg,
            &got,
            &[
                vec!["Start", "1", "SCC1", "7", "End"],
                vec!["Start", "1", "SCC1", "9", "End"],
            ],
        );
    }

    #[test]
    fn all_schedules_agree_with_the_oracle_on_random_graphs() {
        use rand::Rng;
        let mut rng = ChaCha8Rng::seed_from_u64(23);
        for case in 0..25 {
            let v = rng.random_range(4..=11);
            let bias = rng.random_range(0..=4);
            let cfg = crate::benchgen::gen_random_cfg(v, bias, rng.random()).unwrap();
            let want = oracle_pps(&cfg.graph, &OracleLimits::default()).unwrap();
            for schedule in [
                Schedule::RoundRobin,
                Schedule::SeededRandom { seed: 7 },
                Schedule::SeededRandom { seed: 8 },
                Schedule::Parallel { workers: 4 },
            ] {
                let got = pps_of(&cfg, &schedule);
                assert_eq!(got, want, "case {case} schedule {schedule} diverged");
            }
        }
    }

    #[test]
    fn trace_audits_hold_for_a_traced_run() {
        let cfg = binsearch();
        let norm = normalize_outdegree(&cfg);
        let trace = Trace::new();
        let (store, _) =
            run_vertex_generation(&norm.cfg, &Schedule::RoundRobin, Some(&trace)).unwrap();
        let events = trace.take();
        assert!(!events.is_empty());
        let csr = build_csr(&norm.cfg);
        crate::trace::run_all_audits(&events, &store, &csr).unwrap();
    }

    #[test]
    fn hard_budget_trips_as_exit_condition() {
        let cfg = binsearch();
        let err = run_to_fixed_point(&cfg, &Schedule::RoundRobin, None, Some(1)).unwrap_err();
        match err {
            RunError::BudgetExceeded { rounds, budget } => {
                assert_eq!(budget, 1);
                assert!(rounds > 1);
            }
            other => panic!("unexpected error {other}"),
        }
    }

    #[test]
    fn parallel_run_matches_on_binsearch_for_various_worker_counts() {
        let cfg = binsearch();
        let want = pps_of(&cfg, &Schedule::RoundRobin);
        for workers in [1, 2, 4, 8] {
            let got = pps_of(&cfg, &Schedule::Parallel { workers });
            assert_eq!(got, want, "{workers} workers diverged");
        }
    }

    #[test]
    fn normalization_wrapper_handles_wide_vertices() {
        // A fan-out of 4 forces normalization; results must match the oracle
        // on the original graph.
        let cfg = Cfg::from_parts(
            &["S", "a", "b", "c", "d", "E"],
            &[
                ("S", "a"),
                ("S", "b"),
                ("S", "c"),
                ("S", "d"),
                ("a", "E"),
                ("b", "E"),
                ("c", "E"),
                ("d", "E"),
            ],
            "S",
            &["E"],
        )
        .unwrap();
        let got = pps_of(&cfg, &Schedule::RoundRobin);
        let want = oracle_pps(&cfg.graph, &OracleLimits::default()).unwrap();
        assert_eq!(got, want);
        assert_eq!(got.len(), 4);
    }
}
