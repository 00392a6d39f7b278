//! Stable JSON shapes for CLI output. Paths are emitted as arrays of
//! display names in deterministic order; maps are sorted.

use std::collections::BTreeMap;

use serde::Serialize;

use crate::cfg::Cfg;
use crate::compose::{Mode, PipelineStats, PpReport};
use crate::metrics::MetricsReport;
use crate::path::Path;
use crate::scc::{build_ccfg, entry_exit_vertices, tarjan_scc};
use crate::tp::TpReport;
use crate::vertexgen::Schedule;

pub const SCHEMA_VERSION: &str = "1";

pub fn path_names(cfg: &Cfg, p: &Path) -> Vec<String> {
    p.as_slice().iter().map(|&v| cfg.name(v).to_string()).collect()
}

fn paths_json(cfg: &Cfg, paths: &[Path]) -> Vec<Vec<String>> {
    paths.iter().map(|p| path_names(cfg, p)).collect()
}

#[derive(Debug, Serialize)]
pub struct PpReportJson {
    pub schema_version: &'static str,
    pub input_digest: String,
    pub mode: String,
    pub schedule: String,
    pub vertices: usize,
    pub arcs: usize,
    pub complete: Vec<Vec<String>>,
    pub internal: BTreeMap<String, Vec<Vec<String>>>,
    pub exit: Vec<Vec<String>>,
    pub entry: Vec<Vec<String>>,
    pub multi_entry_sccs: Vec<String>,
    pub total: usize,
    pub stats: PipelineStats,
    pub wall_ms: u64,
}

pub fn pp_report_json(
    cfg: &Cfg,
    mode: Mode,
    schedule: &Schedule,
    report: &PpReport,
    stats: &PipelineStats,
    wall_ms: u64,
) -> PpReportJson {
    PpReportJson {
        schema_version: SCHEMA_VERSION,
        input_digest: cfg.digest(),
        mode: mode.to_string(),
        schedule: schedule.to_string(),
        vertices: cfg.vertex_count(),
        arcs: cfg.graph.arcs().len(),
        complete: paths_json(cfg, &report.complete),
        internal: report
            .internal
            .iter()
            .map(|(label, paths)| (label.clone(), paths_json(cfg, paths)))
            .collect(),
        exit: paths_json(cfg, &report.exit),
        entry: paths_json(cfg, &report.entry),
        multi_entry_sccs: report.multi_entry_sccs.clone(),
        total: report.total(),
        stats: stats.clone(),
        wall_ms,
    }
}

#[derive(Debug, Serialize)]
pub struct TestPathJson {
    pub walk: Vec<String>,
    pub covers: Vec<Vec<String>>,
}

#[derive(Debug, Serialize)]
pub struct TpReportJson {
    pub schema_version: &'static str,
    pub input_digest: String,
    pub test_paths: Vec<TestPathJson>,
    pub coverage: f64,
}

pub fn tp_report_json(cfg: &Cfg, report: &TpReport) -> TpReportJson {
    TpReportJson {
        schema_version: SCHEMA_VERSION,
        input_digest: cfg.digest(),
        test_paths: report
            .test_paths
            .iter()
            .map(|t| TestPathJson {
                walk: path_names(cfg, &t.walk),
                covers: paths_json(cfg, &t.covers),
            })
            .collect(),
        coverage: report.coverage,
    }
}

#[derive(Debug, Serialize)]
pub struct MetricsReportJson {
    pub schema_version: &'static str,
    pub input_digest: String,
    pub cyclomatic: u64,
    pub npath: String,
    pub npath_definition: &'static str,
    pub prime_paths: usize,
}

pub fn metrics_report_json(cfg: &Cfg, report: &MetricsReport) -> MetricsReportJson {
    MetricsReportJson {
        schema_version: SCHEMA_VERSION,
        input_digest: cfg.digest(),
        cyclomatic: report.cyclomatic,
        npath: report.npath.to_string(),
        npath_definition: crate::metrics::NPATH_DEFINITION,
        prime_paths: report.prime_paths,
    }
}

#[derive(Debug, Serialize)]
pub struct ComponentJson {
    pub label: String,
    pub members: Vec<String>,
    pub entries: Vec<String>,
    pub exits: Vec<String>,
}

#[derive(Debug, Serialize)]
pub struct SccReportJson {
    pub schema_version: &'static str,
    pub input_digest: String,
    pub nontrivial_components: Vec<ComponentJson>,
    pub condensation_vertices: Vec<String>,
    pub condensation_arcs: Vec<[String; 2]>,
}

pub fn scc_report_json(cfg: &Cfg) -> SccReportJson {
    let d = tarjan_scc(&cfg.graph);
    let c = build_ccfg(cfg, &d);
    let mut components = Vec::new();
    for (i, &comp) in d.nontrivial.iter().enumerate() {
        let (entries, exits) = entry_exit_vertices(&cfg.graph, &d, comp);
        let sorted = |vs: &[crate::path::VertexId]| {
            let mut out: Vec<String> =
                vs.iter().map(|&v| cfg.name(v).to_string()).collect();
            out.sort();
            out
        };
        components.push(ComponentJson {
            label: format!("scc{}", i + 1),
            members: sorted(&d.members[comp as usize]),
            entries: sorted(&entries),
            exits: sorted(&exits),
        });
    }
    let mut arcs: Vec<[String; 2]> = c
        .graph
        .arcs()
        .iter()
        .map(|&(a, b)| [c.name(a).to_string(), c.name(b).to_string()])
        .collect();
    arcs.sort();
    SccReportJson {
        schema_version: SCHEMA_VERSION,
        input_digest: cfg.digest(),
        nontrivial_components: components,
        condensation_vertices: (0..c.vertex_count())
            .map(|v| c.name(v as crate::path::VertexId).to_string())
            .collect(),
        condensation_arcs: arcs,
    }
}

pub fn to_json_string<T: Serialize>(value: &T) -> String {
    let mut out = serde_json::to_string_pretty(value).expect("report structs serialize");
    out.push('\n');
    out
}
