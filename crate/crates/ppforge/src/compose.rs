//! Component-wise prime path generation.
//!
//! The graph's prime paths split into four classes by their endpoints:
//! complete (start to end), internal to one nontrivial component, exit
//! (from inside a component to the end vertex) and entry (ending inside a
//! component). The compositional pipeline computes each class from two kinds
//! of much smaller fixed-point runs: one per nontrivial component's induced
//! subgraph, and one over the condensation. The direct pipeline runs the
//! whole graph at once and classifies afterwards; both agree exactly.
//!
//! The glue works on contiguous windows of the subgraph runs' raw paths:
//! windows between component entries and exits substitute into condensation
//! paths (complete class), windows reaching an exit extend completes
//! backwards into a component (exit class), and windows leaving an entry
//! extend complete or exit paths forwards into a component (entry class).
//! Non-maximal leftovers are discarded by suffix/prefix checks against the
//! already-built classes.

use crate::cfg::{Cfg, VertexInfo};
use crate::path::{proper_prefix_of_any, proper_suffix_of_any, Path, VertexId};
use crate::scc::{build_ccfg, entry_exit_vertices, tarjan_scc, SccDecomposition};
use crate::trace::Trace;
use crate::vertexgen::{prime_paths, RunError, RunStats, Schedule};
use std::collections::BTreeMap;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Mode {
    /// One fixed-point run over the whole graph, classified afterwards.
    Direct,
    /// Per-component subgraph runs plus a condensation run, merged.
    Compositional,
}

impl std::fmt::Display for Mode {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Mode::Direct => write!(f, "direct"),
            Mode::Compositional => write!(f, "compositional"),
        }
    }
}

/// The prime paths of a graph, split into the four endpoint classes.
/// `internal` is keyed by component label ("scc1", "scc2", ... in component
/// order).
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct PpReport {
    pub complete: Vec<Path>,
    pub internal: BTreeMap<String, Vec<Path>>,
    pub exit: Vec<Path>,
    pub entry: Vec<Path>,
    /// Labels of components with more than one entry vertex.
    pub multi_entry_sccs: Vec<String>,
}

impl PpReport {
    pub fn total(&self) -> usize {
        self.complete.len()
            + self.internal.values().map(Vec::len).sum::<usize>()
            + self.exit.len()
            + self.entry.len()
    }

    /// Every prime path, across all classes, sorted.
    pub fn all_paths(&self) -> Vec<Path> {
        let mut out = self.complete.clone();
        for paths in self.internal.values() {
            out.extend(paths.iter().cloned());
        }
        out.extend(self.exit.iter().cloned());
        out.extend(self.entry.iter().cloned());
        out.sort();
        out
    }
}

/// Aggregate statistics over every fixed-point run a pipeline performed.
#[derive(Clone, Copy, Debug, Default, serde::Serialize)]
pub struct PipelineStats {
    pub sub_runs: u32,
    pub rounds: u64,
    pub update_calls: u64,
    pub records_allocated: u64,
    pub records_tombstoned: u64,
    pub peak_store_bytes: u64,
}

impl PipelineStats {
    fn absorb(&mut self, s: &RunStats) {
        self.sub_runs += 1;
        self.rounds += s.rounds;
        self.update_calls += s.update_calls;
        self.records_allocated += s.store.records_allocated;
        self.records_tombstoned += s.store.tombstoned;
        self.peak_store_bytes += s.store.peak_bytes;
    }
}

fn scc_label(d: &SccDecomposition, comp: u32) -> String {
    let pos = d
        .nontrivial
        .iter()
        .position(|&c| c == comp)
        .expect("label requested for a trivial component");
    format!("scc{}", pos + 1)
}

fn multi_entry_labels(g: &crate::graph::Graph, d: &SccDecomposition) -> Vec<String> {
    d.nontrivial
        .iter()
        .filter(|&&c| entry_exit_vertices(g, d, c).0.len() > 1)
        .map(|&c| scc_label(d, c))
        .collect()
}

pub fn generate_pps(
    cfg: &Cfg,
    mode: Mode,
    schedule: &Schedule,
    trace: Option<&Trace>,
) -> Result<(PpReport, PipelineStats), RunError> {
    match mode {
        Mode::Direct => generate_pps_direct(cfg, schedule, trace),
        Mode::Compositional => generate_pps_compositional(cfg, schedule, trace),
    }
}

// ---------------------------------------------------------------------------
// Direct mode: one run, classify by endpoints.

pub fn generate_pps_direct(
    cfg: &Cfg,
    schedule: &Schedule,
    trace: Option<&Trace>,
) -> Result<(PpReport, PipelineStats), RunError> {
    let (pps, stats) = prime_paths(cfg, schedule, trace)?;
    let d = tarjan_scc(&cfg.graph);
    let mut report = PpReport {
        multi_entry_sccs: multi_entry_labels(&cfg.graph, &d),
        ..PpReport::default()
    };
    for c in &d.nontrivial {
        report.internal.insert(scc_label(&d, *c), Vec::new());
    }
    for p in pps {
        let comp = d.scc_of[p.first() as usize];
        let one_component =
            p.as_slice().iter().all(|&v| d.scc_of[v as usize] == comp);
        if one_component && d.is_nontrivial(comp) {
            report
                .internal
                .get_mut(&scc_label(&d, comp))
                .expect("labels preallocated")
                .push(p);
        } else if p.first() == cfg.start && p.last() == cfg.end {
            report.complete.push(p);
        } else if p.last() == cfg.end {
            debug_assert!(
                d.is_nontrivial(d.scc_of[p.first() as usize]),
                "a non-complete path ending at the end vertex must begin on a cycle"
            );
            report.exit.push(p);
        } else {
            debug_assert!(
                d.is_nontrivial(d.scc_of[p.last() as usize]),
                "a path that stops early must end on a cycle"
            );
            debug_assert!(
                p.first() == cfg.start || d.is_nontrivial(d.scc_of[p.first() as usize]),
                "a path must begin at the start vertex or on a cycle"
            );
            report.entry.push(p);
        }
    }
    let mut stats_out = PipelineStats::default();
    stats_out.absorb(&stats);
    Ok((report, stats_out))
}

// ---------------------------------------------------------------------------
// Window extraction over a component's raw subgraph paths. All extraction
// inputs are the unfiltered maximal paths of the induced subgraph, because
// windows of excluded acyclic ones are still needed.

fn windows_matching(
    raw: &[Path],
    keep: impl Fn(&[VertexId]) -> bool,
) -> Vec<Path> {
    let mut out = Vec::new();
    for p in raw {
        let s = p.as_slice();
        for i in 0..s.len() {
            for j in i..s.len() {
                let w = &s[i..=j];
                if keep(w) {
                    out.push(Path::new(w.to_vec()));
                }
            }
        }
    }
    out.sort();
    out.dedup();
    out
}

fn acyclic(w: &[VertexId]) -> bool {
    w.len() < 2 || w[0] != w[w.len() - 1]
}

/// Acyclic windows from an entry to an exit. Every one of them, placed
/// between compatible bordering arcs of a condensation path, yields a
/// complete prime path, so no maximality filtering applies here.
pub fn extract_entry_exit_paths(
    raw: &[Path],
    entries: &[VertexId],
    exits: &[VertexId],
) -> Vec<Path> {
    windows_matching(raw, |w| {
        acyclic(w) && entries.contains(&w[0]) && exits.contains(&w[w.len() - 1])
    })
}

/// Acyclic windows from a non-entry to an exit, kept only when maximal among
/// the candidates sharing their exit: a proper suffix of another candidate
/// would merge into a non-maximal path shadowed by the longer one.
pub fn extract_exit_paths(
    raw: &[Path],
    entries: &[VertexId],
    exits: &[VertexId],
) -> Vec<Path> {
    let cands = windows_matching(raw, |w| {
        acyclic(w) && !entries.contains(&w[0]) && exits.contains(&w[w.len() - 1])
    });
    let junk = proper_suffix_of_any(&cands, &cands);
    cands
        .into_iter()
        .zip(junk)
        .filter_map(|(p, j)| (!j).then_some(p))
        .collect()
}

/// Acyclic windows from an entry to a non-exit, kept only when maximal among
/// the candidates sharing their entry (no proper prefix of another).
pub fn extract_entry_paths(
    raw: &[Path],
    entries: &[VertexId],
    exits: &[VertexId],
) -> Vec<Path> {
    let cands = windows_matching(raw, |w| {
        acyclic(w) && entries.contains(&w[0]) && !exits.contains(&w[w.len() - 1])
    });
    let junk = proper_prefix_of_any(&cands, &cands);
    cands
        .into_iter()
        .zip(junk)
        .filter_map(|(p, j)| (!j).then_some(p))
        .collect()
}

// ---------------------------------------------------------------------------
// Merging.

/// Maximal runs of consecutive vertices lying in the same nontrivial
/// component. A simple path enters a component at most once, so each
/// component contributes at most one run.
fn scc_runs(p: &Path, d: &SccDecomposition) -> Vec<(u32, std::ops::Range<usize>)> {
    let s = p.as_slice();
    let mut out = Vec::new();
    let mut i = 0;
    while i < s.len() {
        let comp = d.scc_of[s[i] as usize];
        if !d.is_nontrivial(comp) {
            i += 1;
            continue;
        }
        let mut j = i + 1;
        while j < s.len() && d.scc_of[s[j] as usize] == comp {
            j += 1;
        }
        out.push((comp, i..j));
        i = j;
    }
    debug_assert!(
        {
            let comps: Vec<u32> = out.iter().map(|&(c, _)| c).collect();
            let mut dedup = comps.clone();
            dedup.dedup();
            comps == dedup && {
                let mut sorted = comps.clone();
                sorted.sort();
                sorted.dedup();
                sorted.len() == comps.len()
            }
        },
        "a simple path re-entered a component"
    );
    out
}

/// Substitute every nontrivial component along each condensation path with
/// each of its entry-exit paths whose borders match actual arcs. Every
/// substitution is itself a complete prime path.
pub fn merge_complete_pps(
    cfg: &Cfg,
    d: &SccDecomposition,
    ccfg_pps: &[Path],
    entry_exit: &BTreeMap<u32, Vec<Path>>,
) -> Vec<Path> {
    let mut out = Vec::new();
    for cpath in ccfg_pps {
        let mut partials: Vec<Vec<VertexId>> = vec![Vec::new()];
        for &comp in cpath.as_slice() {
            let mut next = Vec::new();
            if d.is_nontrivial(comp) {
                let choices = entry_exit.get(&comp).map_or(&[] as &[Path], Vec::as_slice);
                for partial in &partials {
                    for choice in choices {
                        if let Some(&last) = partial.last() {
                            if !cfg.graph.has_arc(last, choice.first()) {
                                continue;
                            }
                        }
                        let mut ext = partial.clone();
                        ext.extend_from_slice(choice.as_slice());
                        next.push(ext);
                    }
                }
            } else {
                let v = d.members[comp as usize][0];
                for partial in &partials {
                    if let Some(&last) = partial.last() {
                        if !cfg.graph.has_arc(last, v) {
                            continue;
                        }
                    }
                    let mut ext = partial.clone();
                    ext.push(v);
                    next.push(ext);
                }
            }
            partials = next;
            if partials.is_empty() {
                break;
            }
        }
        out.extend(partials.into_iter().map(Path::new));
    }
    out.sort();
    out.dedup();
    debug_assert!(out.iter().all(|p| {
        p.is_simple() && p.first() == cfg.start && p.last() == cfg.end
    }));
    out
}

/// For every component run of every complete path, splice each exit path
/// ending at the run's leave vertex onto the remainder of the complete path.
/// Candidates that are proper suffixes of a complete path or of another
/// candidate are shadowed, hence dropped.
pub fn merge_exit_pps(
    complete: &[Path],
    d: &SccDecomposition,
    exit_paths: &BTreeMap<u32, Vec<Path>>,
) -> Vec<Path> {
    let mut cands = Vec::new();
    for c in complete {
        for (comp, run) in scc_runs(c, d) {
            let leave = c.as_slice()[run.end - 1];
            let tail = &c.as_slice()[run.end..];
            debug_assert!(!tail.is_empty(), "a run cannot touch the end vertex");
            let Some(paths) = exit_paths.get(&comp) else { continue };
            for p in paths.iter().filter(|p| p.last() == leave) {
                let mut seq = p.as_slice().to_vec();
                seq.extend_from_slice(tail);
                cands.push(Path::new(seq));
            }
        }
    }
    cands.sort();
    cands.dedup();
    let mut universe = cands.clone();
    universe.extend(complete.iter().cloned());
    let junk = proper_suffix_of_any(&cands, &universe);
    cands
        .into_iter()
        .zip(junk)
        .filter_map(|(p, j)| (!j).then_some(p))
        .collect()
}

/// For every entering occurrence along a complete or exit path, splice the
/// path's prefix onto each entry path starting at the entered vertex.
/// Candidates that are proper prefixes of any complete, exit or candidate
/// path are shadowed, hence dropped.
pub fn merge_entry_pps(
    complete: &[Path],
    exit: &[Path],
    d: &SccDecomposition,
    entry_paths: &BTreeMap<u32, Vec<Path>>,
) -> Vec<Path> {
    let mut cands = Vec::new();
    for s in complete.iter().chain(exit) {
        for (comp, run) in scc_runs(s, d) {
            if run.start == 0 {
                // The source starts inside this component; there is no
                // entering arc to extend from.
                continue;
            }
            let enter = s.as_slice()[run.start];
            let prefix = &s.as_slice()[..run.start];
            let Some(paths) = entry_paths.get(&comp) else { continue };
            for p in paths.iter().filter(|p| p.first() == enter) {
                let mut seq = prefix.to_vec();
                seq.extend_from_slice(p.as_slice());
                cands.push(Path::new(seq));
            }
        }
    }
    cands.sort();
    cands.dedup();
    let mut universe = cands.clone();
    universe.extend(complete.iter().cloned());
    universe.extend(exit.iter().cloned());
    let junk = proper_prefix_of_any(&cands, &universe);
    cands
        .into_iter()
        .zip(junk)
        .filter_map(|(p, j)| (!j).then_some(p))
        .collect()
}

// ---------------------------------------------------------------------------
// The compositional pipeline.

struct SubRun {
    /// None marks the condensation job; otherwise the nontrivial component.
    comp: Option<u32>,
    cfg: Cfg,
    /// Subgraph id -> parent id (empty for the condensation job).
    back: Vec<VertexId>,
}

fn subgraph_job(cfg: &Cfg, comp: u32, members: &[VertexId]) -> SubRun {
    let (graph, back) = cfg.graph.induced_subgraph(members);
    let vertices = back
        .iter()
        .map(|&v| VertexInfo { name: cfg.name(v).to_string(), synthetic: false })
        .collect();
    // Start and end are irrelevant for a subgraph fixed-point run.
    SubRun { comp: Some(comp), cfg: Cfg { vertices, graph, start: 0, end: 0 }, back }
}

fn run_job(job: &SubRun, schedule: &Schedule) -> Result<(Option<u32>, Vec<Path>, RunStats), RunError> {
    let (pps, stats) = prime_paths(&job.cfg, schedule, None)?;
    let mapped = if job.back.is_empty() {
        pps
    } else {
        pps.into_iter()
            .map(|p| Path::new(p.as_slice().iter().map(|&v| job.back[v as usize]).collect()))
            .collect()
    };
    Ok((job.comp, mapped, stats))
}

/// Per-component subgraph runs plus one condensation run, merged into the
/// four classes. With a parallel schedule the sub-runs themselves stay
/// sequential and are distributed over the workers instead. Sub-runs are not
/// traced: their record handles would collide across stores.
pub fn generate_pps_compositional(
    cfg: &Cfg,
    schedule: &Schedule,
    _trace: Option<&Trace>,
) -> Result<(PpReport, PipelineStats), RunError> {
    let d = tarjan_scc(&cfg.graph);
    let ccfg = build_ccfg(cfg, &d);

    let mut jobs = vec![SubRun { comp: None, cfg: ccfg, back: Vec::new() }];
    for &c in &d.nontrivial {
        jobs.push(subgraph_job(cfg, c, &d.members[c as usize]));
    }

    let results: Vec<(Option<u32>, Vec<Path>, RunStats)> = match schedule {
        Schedule::Parallel { workers } => {
            let workers = (*workers).clamp(1, jobs.len());
            let sub_schedule = Schedule::RoundRobin;
            std::thread::scope(|scope| {
                let handles: Vec<_> = (0..workers)
                    .map(|w| {
                        let jobs = &jobs;
                        let sub_schedule = &sub_schedule;
                        scope.spawn(move || {
                            let mut out = Vec::new();
                            for job in jobs.iter().skip(w).step_by(workers) {
                                out.push(run_job(job, sub_schedule)?);
                            }
                            Ok::<_, RunError>(out)
                        })
                    })
                    .collect();
                let mut all = Vec::new();
                let mut first_err = None;
                for h in handles {
                    match h.join().expect("job worker panicked") {
                        Ok(mut v) => all.append(&mut v),
                        Err(e) => first_err = first_err.or(Some(e)),
                    }
                }
                first_err.map_or(Ok(all), Err)
            })?
        }
        seq => {
            let mut all = Vec::new();
            for job in &jobs {
                all.push(run_job(job, seq)?);
            }
            all
        }
    };

    let mut stats = PipelineStats::default();
    let mut ccfg_pps = Vec::new();
    let mut raw_by_comp: BTreeMap<u32, Vec<Path>> = BTreeMap::new();
    for (comp, paths, run_stats) in results {
        stats.absorb(&run_stats);
        match comp {
            None => ccfg_pps = paths,
            Some(c) => {
                raw_by_comp.insert(c, paths);
            }
        }
    }
    ccfg_pps.sort();

    let mut entry_exit = BTreeMap::new();
    let mut exit_paths = BTreeMap::new();
    let mut entry_paths = BTreeMap::new();
    let mut internal = BTreeMap::new();
    for (&comp, raw) in &raw_by_comp {
        let (entries, exits) = entry_exit_vertices(&cfg.graph, &d, comp);
        entry_exit.insert(comp, extract_entry_exit_paths(raw, &entries, &exits));
        exit_paths.insert(comp, extract_exit_paths(raw, &entries, &exits));
        entry_paths.insert(comp, extract_entry_paths(raw, &entries, &exits));
        // The component's own contribution: everything except acyclic paths
        // that touch the outside world at an entry start or an exit end;
        // those are never maximal in the whole graph.
        let keep: Vec<Path> = raw
            .iter()
            .filter(|p| {
                p.is_cyclic()
                    || (!entries.contains(&p.first()) && !exits.contains(&p.last()))
            })
            .cloned()
            .collect();
        internal.insert(scc_label(&d, comp), keep);
    }

    let complete = merge_complete_pps(cfg, &d, &ccfg_pps, &entry_exit);
    let exit = merge_exit_pps(&complete, &d, &exit_paths);
    let entry = merge_entry_pps(&complete, &exit, &d, &entry_paths);

    let report = PpReport {
        complete,
        internal,
        exit,
        entry,
        multi_entry_sccs: multi_entry_labels(&cfg.graph, &d),
    };
    Ok((report, stats))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oracle::{oracle_pps, OracleLimits};
    use crate::testutil::{binsearch, path_of};

    fn ids(cfg: &Cfg, names: &[&str]) -> Path {
        path_of(cfg, names)
    }

    fn binsearch_raw_scc_paths(cfg: &Cfg, d: &SccDecomposition) -> Vec<Path> {
        let comp = d.nontrivial[0];
        let (sub, back) = cfg.graph.induced_subgraph(&d.members[comp as usize]);
        oracle_pps(&sub, &OracleLimits::default())
            .unwrap()
            .into_iter()
            .map(|p| Path::new(p.as_slice().iter().map(|&v| back[v as usize]).collect()))
            .collect()
    }

    #[test]
    fn extraction_goldens_on_binsearch() {
        let cfg = binsearch();
        let d = tarjan_scc(&cfg.graph);
        let comp = d.nontrivial[0];
        let raw = binsearch_raw_scc_paths(&cfg, &d);
        assert_eq!(raw.len(), 11);
        let (entries, exits) = entry_exit_vertices(&cfg.graph, &d, comp);

        let mut ee = extract_entry_exit_paths(&raw, &entries, &exits);
        ee.sort();
        assert_eq!(ee, vec![ids(&cfg, &["2"]), ids(&cfg, &["2", "3", "5"])]);

        let mut ex = extract_exit_paths(&raw, &entries, &exits);
        ex.sort();
        let mut want_ex = vec![
            ids(&cfg, &["3", "4", "8", "2"]),
            ids(&cfg, &["3", "5", "6", "8", "2"]),
            ids(&cfg, &["4", "8", "2", "3", "5"]),
            ids(&cfg, &["6", "8", "2", "3", "5"]),
        ];
        want_ex.sort();
        assert_eq!(ex, want_ex);

        let mut en = extract_entry_paths(&raw, &entries, &exits);
        en.sort();
        let mut want_en = vec![
            ids(&cfg, &["2", "3", "4", "8"]),
            ids(&cfg, &["2", "3", "5", "6", "8"]),
        ];
        want_en.sort();
        assert_eq!(en, want_en);
    }

    #[test]
    fn merge_goldens_on_binsearch() {
        let cfg = binsearch();
        let d = tarjan_scc(&cfg.graph);
        let comp = d.nontrivial[0];
        let raw = binsearch_raw_scc_paths(&cfg, &d);
        let (entries, exits) = entry_exit_vertices(&cfg.graph, &d, comp);
        let ccfg = build_ccfg(&cfg, &d);
        let ccfg_pps = oracle_pps(&ccfg.graph, &OracleLimits::default()).unwrap();

        let mut ee = BTreeMap::new();
        ee.insert(comp, extract_entry_exit_paths(&raw, &entries, &exits));
        let complete = merge_complete_pps(&cfg, &d, &ccfg_pps, &ee);
        assert_eq!(
            complete,
            vec![
                ids(&cfg, &["Start", "1", "2", "3", "5", "7", "End"]),
                ids(&cfg, &["Start", "1", "2", "9", "End"]),
            ]
        );

        let mut xp = BTreeMap::new();
        xp.insert(comp, extract_exit_paths(&raw, &entries, &exits));
        let exit = merge_exit_pps(&complete, &d, &xp);
        let mut want_exit = vec![
            ids(&cfg, &["3", "5", "6", "8", "2", "9", "End"]),
            ids(&cfg, &["3", "4", "8", "2", "9", "End"]),
            ids(&cfg, &["4", "8", "2", "3", "5", "7", "End"]),
            ids(&cfg, &["6", "8", "2", "3", "5", "7", "End"]),
        ];
        want_exit.sort();
        assert_eq!(exit, want_exit);

        let mut np = BTreeMap::new();
        np.insert(comp, extract_entry_paths(&raw, &entries, &exits));
        let entry = merge_entry_pps(&complete, &exit, &d, &np);
        let mut want_entry = vec![
            ids(&cfg, &["Start", "1", "2", "3", "4", "8"]),
            ids(&cfg, &["Start", "1", "2", "3", "5", "6", "8"]),
        ];
        want_entry.sort();
        assert_eq!(entry, want_entry);
    }

    #[test]
    fn compositional_equals_direct_on_binsearch() {
        let cfg = binsearch();
        let (direct, _) =
            generate_pps_direct(&cfg, &Schedule::RoundRobin, None).unwrap();
        let (comp, _) =
            generate_pps_compositional(&cfg, &Schedule::RoundRobin, None).unwrap();
        assert_eq!(direct, comp);
        assert_eq!(direct.total(), 19);
        assert_eq!(direct.complete.len(), 2);
        assert_eq!(direct.internal["scc1"].len(), 11);
        assert_eq!(direct.exit.len(), 4);
        assert_eq!(direct.entry.len(), 2);
        assert!(direct.multi_entry_sccs.is_empty());
    }

    #[test]
    fn report_paths_match_the_oracle_on_binsearch() {
        let cfg = binsearch();
        let (report, _) =
            generate_pps_compositional(&cfg, &Schedule::RoundRobin, None).unwrap();
        let want = oracle_pps(&cfg.graph, &OracleLimits::default()).unwrap();
        assert_eq!(report.all_paths(), want);
    }

    #[test]
    fn multi_entry_component_is_reported_and_merged_correctly() {
        // Two arcs from the start region enter the same cycle at different
        // vertices.
        let cfg = Cfg::from_parts(
            &["S", "a", "b", "E"],
            &[("S", "a"), ("S", "b"), ("a", "b"), ("b", "a"), ("a", "E")],
            "S",
            &["E"],
        )
        .unwrap();
        let (direct, _) = generate_pps_direct(&cfg, &Schedule::RoundRobin, None).unwrap();
        let (comp, _) =
            generate_pps_compositional(&cfg, &Schedule::RoundRobin, None).unwrap();
        assert_eq!(direct, comp);
        assert_eq!(comp.multi_entry_sccs, vec!["scc1".to_string()]);
        let want = oracle_pps(&cfg.graph, &OracleLimits::default()).unwrap();
        assert_eq!(comp.all_paths(), want);
    }

    #[test]
    fn chained_components_need_exit_sources_for_entry_merging() {
        // The path b,a,c,d runs from inside the first cycle into the second;
        // its prefix b,a exists only as an exit-class source, never as a
        // prefix of a complete path.
        let cfg = Cfg::from_parts(
            &["S", "a", "b", "c", "d", "E"],
            &[
                ("S", "a"),
                ("a", "b"),
                ("b", "a"),
                ("b", "c"),
                ("a", "c"),
                ("c", "d"),
                ("d", "c"),
                ("c", "E"),
            ],
            "S",
            &["E"],
        )
        .unwrap();
        let (direct, _) = generate_pps_direct(&cfg, &Schedule::RoundRobin, None).unwrap();
        let (comp, _) =
            generate_pps_compositional(&cfg, &Schedule::RoundRobin, None).unwrap();
        assert_eq!(direct, comp);
        let want = oracle_pps(&cfg.graph, &OracleLimits::default()).unwrap();
        assert_eq!(comp.all_paths(), want);
        let b = cfg.find("b").unwrap();
        let d_ = cfg.find("d").unwrap();
        assert!(comp.entry.iter().any(|p| p.first() == b && p.last() == d_));
    }

    #[test]
    fn random_graphs_direct_equals_compositional_and_oracle() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(97);
        for case in 0..40 {
            let v = rng.random_range(4..=12);
            let bias = rng.random_range(0..=5);
            let cfg = crate::benchgen::gen_random_cfg(v, bias, rng.random()).unwrap();
            let (direct, _) =
                generate_pps_direct(&cfg, &Schedule::RoundRobin, None).unwrap();
            let (comp, _) =
                generate_pps_compositional(&cfg, &Schedule::RoundRobin, None).unwrap();
            assert_eq!(direct, comp, "case {case}: classification diverged");
            let want = oracle_pps(&cfg.graph, &OracleLimits::default()).unwrap();
            assert_eq!(comp.all_paths(), want, "case {case}: paths diverged");
        }
    }

    #[test]
    fn parallel_compositional_distributes_jobs_and_agrees() {
        let cfg = binsearch();
        let (seq, _) =
            generate_pps_compositional(&cfg, &Schedule::RoundRobin, None).unwrap();
        let (par, _) =
            generate_pps_compositional(&cfg, &Schedule::Parallel { workers: 4 }, None).unwrap();
        assert_eq!(seq, par);
    }
}
