//! Acceptance gate. Each test covers one shipping criterion and prints a
//! single `ACCEPTANCE n: PASS` line (visible with `--nocapture`); a failed
//! assertion is the corresponding FAIL.

use std::collections::BTreeSet;
use std::time::{Duration, Instant};

use ppforge::benchgen::{gen_family, gen_random_cfg, Family};
use ppforge::cfg::{build_csr, parse_cfg, sniff_format, Cfg};
use ppforge::compose::{
    extract_entry_exit_paths, extract_entry_paths, extract_exit_paths, generate_pps, Mode,
    PpReport,
};
use ppforge::metrics::{cyclomatic, npath, NPATH_STATE_BUDGET};
use ppforge::oracle::{oracle_pps, OracleLimits};
use ppforge::path::Path;
use ppforge::scc::{backward_reachable, build_ccfg, entry_exit_vertices, tarjan_scc};
use ppforge::tp::{generate_test_paths, tour_for, verify_coverage};
use ppforge::trace::{run_all_audits, Trace};
use ppforge::vertexgen::{prime_paths, run_to_fixed_point, Schedule};

fn binsearch() -> Cfg {
    let text = std::fs::read_to_string(concat!(
        env!("CARGO_MANIFEST_DIR"),
        "/tests/golden/binsearch.json"
    ))
    .unwrap();
    parse_cfg(&text, sniff_format(&text)).unwrap()
}

fn path_of(cfg: &Cfg, names: &[&str]) -> Path {
    Path::new(names.iter().map(|n| cfg.find(n).unwrap()).collect())
}

fn name_set(cfg: &Cfg, paths: &[Path]) -> BTreeSet<Vec<String>> {
    paths.iter().map(|p| cfg.names_of(p)).collect()
}

fn want_set(names: &[&[&str]]) -> BTreeSet<Vec<String>> {
    names
        .iter()
        .map(|p| p.iter().map(|s| s.to_string()).collect())
        .collect()
}

/// 200 seeded random graphs within oracle limits plus every benchmark
/// family instance small enough for the oracle.
fn corpus() -> Vec<Cfg> {
    let mut graphs = Vec::new();
    for i in 0..200u64 {
        let v = 4 + (i % 9) as usize; // 4..=12 vertices
        let bias = (i % 6) as usize;
        graphs.push(gen_random_cfg(v, bias, i.wrapping_mul(0x9E37_79B9_7F4A_7C15)).unwrap());
    }
    for k in 1..=4 {
        graphs.push(gen_family(Family::NestedIf { k }).unwrap());
        graphs.push(gen_family(Family::SequentialIf { k }).unwrap());
    }
    for k in 2..=12 {
        graphs.push(gen_family(Family::SingleLoop { k }).unwrap());
    }
    for (k, n) in [(1, 2), (1, 3), (1, 4), (2, 2), (2, 3), (2, 4), (3, 2), (3, 3), (4, 2), (4, 3)]
    {
        graphs.push(gen_family(Family::SequentialLoops { k, n }).unwrap());
    }
    for k in 2..=6 {
        graphs.push(gen_family(Family::NestedLoops { k }).unwrap());
    }
    graphs
}

fn golden_report_names() -> [BTreeSet<Vec<String>>; 4] {
    [
        want_set(&[
            &["Start", "1", "2", "9", "End"],
            &["Start", "1", "2", "3", "5", "7", "End"],
        ]),
        want_set(&[
            &["2", "3", "4", "8", "2"],
            &["3", "4", "8", "2", "3"],
            &["4", "8", "2", "3", "4"],
            &["8", "2", "3", "4", "8"],
            &["2", "3", "5", "6", "8", "2"],
            &["3", "5", "6", "8", "2", "3"],
            &["5", "6", "8", "2", "3", "5"],
            &["6", "8", "2", "3", "5", "6"],
            &["8", "2", "3", "5", "6", "8"],
            &["4", "8", "2", "3", "5", "6"],
            &["5", "6", "8", "2", "3", "4"],
        ]),
        want_set(&[
            &["3", "5", "6", "8", "2", "9", "End"],
            &["3", "4", "8", "2", "9", "End"],
            &["4", "8", "2", "3", "5", "7", "End"],
            &["6", "8", "2", "3", "5", "7", "End"],
        ]),
        want_set(&[
            &["Start", "1", "2", "3", "4", "8"],
            &["Start", "1", "2", "3", "5", "6", "8"],
        ]),
    ]
}

fn assert_golden_report(cfg: &Cfg, report: &PpReport, label: &str) {
    let [complete, internal, exit, entry] = golden_report_names();
    assert_eq!(name_set(cfg, &report.complete), complete, "{label}: complete");
    assert_eq!(report.internal.len(), 1, "{label}: one component");
    assert_eq!(name_set(cfg, &report.internal["scc1"]), internal, "{label}: internal");
    assert_eq!(name_set(cfg, &report.exit), exit, "{label}: exit");
    assert_eq!(name_set(cfg, &report.entry), entry, "{label}: entry");
    assert_eq!(report.total(), 19, "{label}: total");
    assert!(report.multi_entry_sccs.is_empty(), "{label}");
}

#[test]
fn acceptance_1_golden_graph_both_modes() {
    let cfg = binsearch();
    let started = Instant::now();
    let (direct, _) = generate_pps(&cfg, Mode::Direct, &Schedule::RoundRobin, None).unwrap();
    let (comp, _) =
        generate_pps(&cfg, Mode::Compositional, &Schedule::RoundRobin, None).unwrap();
    let elapsed = started.elapsed();
    assert_golden_report(&cfg, &direct, "direct");
    assert_golden_report(&cfg, &comp, "compositional");
    assert_eq!(direct, comp);
    assert!(elapsed < Duration::from_secs(1), "took {elapsed:?}");
    println!(
        "ACCEPTANCE 1: PASS — 19 prime paths (2/11/4/2) in both modes in {elapsed:?}"
    );
}

#[test]
fn acceptance_2_intermediate_goldens() {
    let cfg = binsearch();
    let d = tarjan_scc(&cfg.graph);
    assert_eq!(d.nontrivial.len(), 1);
    let comp = d.nontrivial[0];
    let members: Vec<String> = d.members[comp as usize]
        .iter()
        .map(|&v| cfg.name(v).to_string())
        .collect();
    assert_eq!(members, ["2", "3", "4", "5", "6", "8"]);
    let (entries, exits) = entry_exit_vertices(&cfg.graph, &d, comp);
    assert_eq!(cfg.names_of(&Path::new(entries.clone())), ["2"]);
    assert_eq!(cfg.names_of(&Path::new(exits.clone())), ["2", "5"]);

    // Raw prime paths of the component subgraph, then the three extractions.
    let sub = Cfg::from_parts(
        &["2", "3", "4", "5", "6", "8"],
        &[
            ("2", "3"),
            ("3", "4"),
            ("3", "5"),
            ("4", "8"),
            ("5", "6"),
            ("6", "8"),
            ("8", "2"),
        ],
        "2",
        &["2"],
    )
    .unwrap();
    let (raw, _) = prime_paths(&sub, &Schedule::RoundRobin, None).unwrap();
    let sub_entries = vec![sub.find("2").unwrap()];
    let sub_exits = vec![sub.find("2").unwrap(), sub.find("5").unwrap()];
    assert_eq!(
        name_set(&sub, &extract_entry_exit_paths(&raw, &sub_entries, &sub_exits)),
        want_set(&[&["2"], &["2", "3", "5"]])
    );
    assert_eq!(
        name_set(&sub, &extract_exit_paths(&raw, &sub_entries, &sub_exits)),
        want_set(&[
            &["3", "4", "8", "2"],
            &["3", "5", "6", "8", "2"],
            &["4", "8", "2", "3", "5"],
            &["6", "8", "2", "3", "5"],
        ])
    );
    assert_eq!(
        name_set(&sub, &extract_entry_paths(&raw, &sub_entries, &sub_exits)),
        want_set(&[&["2", "3", "4", "8"], &["2", "3", "5", "6", "8"]])
    );

    // Condensation and its two complete prime paths.
    let ccfg = build_ccfg(&cfg, &d);
    assert_eq!(ccfg.vertex_count(), 6);
    let (ccfg_pps, _) = prime_paths(&ccfg, &Schedule::RoundRobin, None).unwrap();
    assert_eq!(
        name_set(&ccfg, &ccfg_pps),
        want_set(&[
            &["Start", "1", "SCC1", "9", "End"],
            &["Start", "1", "SCC1", "7", "End"],
        ])
    );

    // Store geometry: predecessor block of vertex 2 leads with the vertex.
    let csr = build_csr(&cfg);
    let two = cfg.find("2").unwrap();
    let block: Vec<String> = csr
        .pred_block(two)
        .iter()
        .map(|&v| cfg.name(v).to_string())
        .collect();
    assert_eq!(block, ["2", "1", "8"]);
    let nine = cfg.find("9").unwrap();
    let mut reach = cfg.names_of(&Path::new(backward_reachable(&cfg.graph, nine)));
    reach.sort();
    assert_eq!(reach, ["1", "2", "3", "4", "5", "6", "8", "Start"]);

    println!("ACCEPTANCE 2: PASS — component, extraction, condensation, and store goldens hold");
}

#[test]
fn acceptance_3_oracle_equivalence_over_corpus() {
    let started = Instant::now();
    let limits = OracleLimits::default();
    let graphs = corpus();
    let total = graphs.len();
    for (i, cfg) in graphs.into_iter().enumerate() {
        let mut oracle = oracle_pps(&cfg.graph, &limits).unwrap();
        oracle.sort();
        let (direct, _) =
            generate_pps(&cfg, Mode::Direct, &Schedule::RoundRobin, None).unwrap();
        let (comp, _) =
            generate_pps(&cfg, Mode::Compositional, &Schedule::RoundRobin, None).unwrap();
        assert_eq!(direct.all_paths(), oracle, "graph {i}: direct vs oracle");
        assert_eq!(direct, comp, "graph {i}: direct vs compositional");
    }
    let elapsed = started.elapsed();
    assert!(elapsed < Duration::from_secs(120), "took {elapsed:?}");
    println!(
        "ACCEPTANCE 3: PASS — {total} graphs agree with the oracle in both modes in {elapsed:?}"
    );
}

#[test]
fn acceptance_4_self_stabilization_sweep() {
    let mut runs = 0u32;
    for g in 0..20u64 {
        let v = 5 + (g % 5) as usize;
        let cfg = gen_random_cfg(v, 3, g.wrapping_mul(0xA24B_AED4_963E_E407)).unwrap();
        let (baseline, _) =
            generate_pps(&cfg, Mode::Direct, &Schedule::RoundRobin, None).unwrap();
        for seed in 0..100 {
            let (r, _) =
                generate_pps(&cfg, Mode::Direct, &Schedule::SeededRandom { seed }, None)
                    .unwrap();
            assert_eq!(r, baseline, "graph {g}, seed {seed}");
            runs += 1;
        }
        for workers in [1, 2, 4, 8] {
            let (r, _) =
                generate_pps(&cfg, Mode::Direct, &Schedule::Parallel { workers }, None)
                    .unwrap();
            assert_eq!(r, baseline, "graph {g}, {workers} workers");
            runs += 1;
        }
    }
    println!(
        "ACCEPTANCE 4: PASS — 20 graphs x (100 seeds + 4 worker counts) = {runs} runs, all identical"
    );
}

#[test]
fn acceptance_5_trace_audits_over_fuzz_corpus() {
    let mut audited = 0u32;
    let mut graphs = vec![binsearch()];
    for i in 0..40u64 {
        let v = 4 + (i % 8) as usize;
        graphs.push(gen_random_cfg(v, (i % 5) as usize, i.wrapping_mul(0xD6E8_FEB8_6659_FD93)).unwrap());
    }
    for cfg in &graphs {
        // The runner requires out-degree <= 2, which these graphs satisfy,
        // so the trace refers to the graph as parsed.
        let trace = Trace::new();
        let (store, _) =
            run_to_fixed_point(cfg, &Schedule::RoundRobin, Some(&trace), None).unwrap();
        let csr = build_csr(cfg);
        run_all_audits(&trace.take(), &store, &csr).unwrap();
        audited += 1;
    }
    println!(
        "ACCEPTANCE 5: PASS — read-once, tombstone, and flag audits clean on {audited} traced runs"
    );
}

#[test]
fn acceptance_6_race_discipline_at_scale() {
    // Stable toolchains ship no data-race sanitizer, so this runs the
    // checked build (single-writer and store-discipline assertions active)
    // with the full trace audit suite on the 4-worker run, plus payload
    // equality against the sequential run.
    assert!(cfg!(debug_assertions), "acceptance must run with assertions enabled");
    let cfg = gen_family(Family::MixedRandom { seed: 42 }).unwrap();
    let trace = Trace::new();
    let started = Instant::now();
    let (store, stats) = run_to_fixed_point(
        &cfg,
        &Schedule::Parallel { workers: 4 },
        Some(&trace),
        None,
    )
    .unwrap();
    let parallel_elapsed = started.elapsed();
    let csr = build_csr(&cfg);
    run_all_audits(&trace.take(), &store, &csr).unwrap();

    let parallel_paths = ppforge::vertexgen::finalize_pps(&store);
    let (sequential_paths, _) = prime_paths(&cfg, &Schedule::RoundRobin, None).unwrap();
    assert_eq!(parallel_paths, sequential_paths);
    println!(
        "ACCEPTANCE 6: PASS — checked 4-worker run on {} vertices: {} records, audits clean, \
         payload equals sequential ({parallel_elapsed:?})",
        cfg.vertex_count(),
        stats.store.records_allocated,
    );
}

#[test]
fn acceptance_7_test_path_coverage() {
    let cfg = binsearch();
    let (report, _) = generate_pps(&cfg, Mode::Direct, &Schedule::RoundRobin, None).unwrap();
    let pps = report.all_paths();
    let tp = generate_test_paths(&cfg, &pps).unwrap();
    assert_eq!(tp.coverage, 1.0);
    verify_coverage(&cfg, &pps, &tp).unwrap();
    let golden_tour = tour_for(&cfg, &path_of(&cfg, &["8", "2", "3", "4", "8"])).unwrap();
    assert_eq!(
        cfg.names_of(&golden_tour),
        ["Start", "1", "2", "3", "4", "8", "2", "3", "4", "8", "2", "9", "End"]
    );

    let mut covered = 0u32;
    for cfg in corpus() {
        let (report, _) =
            generate_pps(&cfg, Mode::Direct, &Schedule::RoundRobin, None).unwrap();
        let pps = report.all_paths();
        let tp = generate_test_paths(&cfg, &pps).unwrap();
        assert_eq!(tp.coverage, 1.0);
        verify_coverage(&cfg, &pps, &tp).unwrap();
        covered += 1;
    }
    println!(
        "ACCEPTANCE 7: PASS — full coverage with arc-valid walks on the golden graph and {covered} corpus graphs"
    );
}

#[test]
fn acceptance_8_metrics_goldens() {
    let cfg = binsearch();
    assert_eq!(cyclomatic(&cfg), 4);
    assert_eq!(npath(&cfg, NPATH_STATE_BUDGET).unwrap(), 4u32.into());
    for k in 1..=10usize {
        let cfg = gen_family(Family::SequentialIf { k }).unwrap();
        assert_eq!(cyclomatic(&cfg), k as u64 + 1, "sequential-if {k}");
        assert_eq!(
            npath(&cfg, NPATH_STATE_BUDGET).unwrap(),
            ppforge::metrics::BigUint::from(1u32) << k,
            "sequential-if {k}"
        );
        let cfg = gen_family(Family::NestedIf { k }).unwrap();
        assert_eq!(cyclomatic(&cfg), k as u64 + 1, "nested-if {k}");
        assert_eq!(
            npath(&cfg, NPATH_STATE_BUDGET).unwrap(),
            (k as u32 + 1).into(),
            "nested-if {k}"
        );
    }
    println!(
        "ACCEPTANCE 8: PASS — cyclomatic 4 and 4 arc-once walks on the golden graph; 2^K and K+1 walk counts for K=1..10"
    );
}

#[test]
fn acceptance_9_scale_and_parallel_overhead() {
    let cfg = gen_family(Family::MixedRandom { seed: 42 }).unwrap();
    let d = tarjan_scc(&cfg.graph);
    assert!(cfg.vertex_count() >= 190 && d.nontrivial.len() >= 10);

    let started = Instant::now();
    let (baseline, stats) =
        generate_pps(&cfg, Mode::Compositional, &Schedule::RoundRobin, None).unwrap();
    let sequential = started.elapsed();
    assert!(sequential < Duration::from_secs(300), "took {sequential:?}");

    let best = |workers: usize| {
        let mut best = Duration::MAX;
        let mut last = None;
        for _ in 0..3 {
            let started = Instant::now();
            let (r, _) =
                generate_pps(&cfg, Mode::Compositional, &Schedule::Parallel { workers }, None)
                    .unwrap();
            best = best.min(started.elapsed());
            last = Some(r);
        }
        (best, last.unwrap())
    };
    let (wall1, r1) = best(1);
    let (wall4, r4) = best(4);
    assert_eq!(r1, baseline);
    assert_eq!(r4, baseline);
    // 25% overhead bound, with a small absolute floor so sub-millisecond
    // scheduling jitter cannot fail the gate.
    let allowed = (wall1.mul_f64(1.25)).max(wall1 + Duration::from_millis(50));
    assert!(wall4 <= allowed, "4 workers {wall4:?} vs 1 worker {wall1:?}");
    println!(
        "ACCEPTANCE 9: PASS — {} vertices, {} components: compositional {sequential:?}, \
         peak store {} bytes, 1-worker {wall1:?} vs 4-worker {wall4:?}, {} prime paths",
        cfg.vertex_count(),
        d.nontrivial.len(),
        stats.peak_store_bytes,
        baseline.total(),
    );
}
