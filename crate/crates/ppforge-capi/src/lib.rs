//! C ABI over the ppforge library. Handles are opaque, every function is
//! panic-safe, and all returned strings are owned by the caller and freed
//! with `ppf_string_free`. The generated header lives in `include/`.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::time::Instant;

use ppforge::cfg::{parse_cfg, sniff_format, validate_cfg, Cfg};
use ppforge::compose::{generate_pps, Mode};
use ppforge::metrics::{cyclomatic, npath, MetricsReport, NPATH_STATE_BUDGET};
use ppforge::report;
use ppforge::tp::generate_test_paths;
use ppforge::vertexgen::{RunError, Schedule};

/// Result of every fallible call. Non-zero values mirror the CLI exit
/// codes; the message behind a failure is available from `ppf_last_error`.
#[repr(C)]
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum PpfStatus {
    Ok = 0,
    Parse = 1,
    Validation = 2,
    Budget = 3,
    OracleLimit = 4,
    NullArg = 5,
    Utf8 = 6,
    Panic = 7,
}

pub const PPF_MODE_DIRECT: u32 = 0;
pub const PPF_MODE_COMPOSITIONAL: u32 = 1;

pub const PPF_SCHEDULE_ROUND_ROBIN: u32 = 0;
pub const PPF_SCHEDULE_SEEDED_RANDOM: u32 = 1;
pub const PPF_SCHEDULE_PARALLEL: u32 = 2;

/// Opaque handle to a parsed, validated graph.
pub struct PpfGraph {
    cfg: Cfg,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: impl std::fmt::Display) {
    let text = msg.to_string().replace('\0', " ");
    LAST_ERROR.with(|e| *e.borrow_mut() = CString::new(text).ok());
}

fn clear_error() {
    LAST_ERROR.with(|e| *e.borrow_mut() = None);
}

fn guarded(body: impl FnOnce() -> PpfStatus) -> PpfStatus {
    clear_error();
    match catch_unwind(AssertUnwindSafe(body)) {
        Ok(status) => status,
        Err(panic) => {
            let msg = panic
                .downcast_ref::<&str>()
                .map(|s| s.to_string())
                .or_else(|| panic.downcast_ref::<String>().cloned())
                .unwrap_or_else(|| "panic".to_string());
            set_error(msg);
            PpfStatus::Panic
        }
    }
}

fn emit_string(text: String, out: *mut *mut c_char) -> PpfStatus {
    match CString::new(text) {
        Ok(s) => {
            unsafe { *out = s.into_raw() };
            PpfStatus::Ok
        }
        Err(_) => {
            set_error("output contained an interior NUL byte");
            PpfStatus::Panic
        }
    }
}

fn run_status(e: &RunError) -> PpfStatus {
    match e {
        RunError::BudgetExceeded { .. } | RunError::Store(_) => PpfStatus::Budget,
    }
}

fn graph<'a>(g: *const PpfGraph) -> Option<&'a Cfg> {
    unsafe { g.as_ref().map(|h| &h.cfg) }
}

/// Parse edge-list JSON or the DOT subset (sniffed) and validate it. On
/// success `*out` owns the handle; free it with `ppf_graph_free`.
#[no_mangle]
pub extern "C" fn ppf_graph_parse(text: *const c_char, out: *mut *mut PpfGraph) -> PpfStatus {
    guarded(|| {
        if text.is_null() || out.is_null() {
            set_error("null argument");
            return PpfStatus::NullArg;
        }
        let raw = unsafe { CStr::from_ptr(text) };
        let text = match raw.to_str() {
            Ok(t) => t,
            Err(e) => {
                set_error(e);
                return PpfStatus::Utf8;
            }
        };
        let cfg = match parse_cfg(text, sniff_format(text)) {
            Ok(c) => c,
            Err(e) => {
                set_error(e);
                return PpfStatus::Parse;
            }
        };
        let diagnostics = validate_cfg(&cfg);
        if !diagnostics.is_empty() {
            let msgs: Vec<String> = diagnostics.iter().map(|d| d.to_string()).collect();
            set_error(msgs.join("; "));
            return PpfStatus::Validation;
        }
        unsafe { *out = Box::into_raw(Box::new(PpfGraph { cfg })) };
        PpfStatus::Ok
    })
}

#[no_mangle]
pub extern "C" fn ppf_graph_free(g: *mut PpfGraph) {
    if !g.is_null() {
        drop(unsafe { Box::from_raw(g) });
    }
}

/// Vertex count, or 0 for a null handle.
#[no_mangle]
pub extern "C" fn ppf_graph_vertex_count(g: *const PpfGraph) -> u32 {
    graph(g).map_or(0, |c| c.vertex_count() as u32)
}

/// Arc count, or 0 for a null handle.
#[no_mangle]
pub extern "C" fn ppf_graph_arc_count(g: *const PpfGraph) -> u32 {
    graph(g).map_or(0, |c| c.graph.arcs().len() as u32)
}

/// Hex SHA-256 digest of the graph's canonical form.
#[no_mangle]
pub extern "C" fn ppf_graph_digest(g: *const PpfGraph, out: *mut *mut c_char) -> PpfStatus {
    guarded(|| {
        let Some(cfg) = graph(g) else {
            set_error("null graph");
            return PpfStatus::NullArg;
        };
        if out.is_null() {
            set_error("null output pointer");
            return PpfStatus::NullArg;
        }
        emit_string(cfg.digest(), out)
    })
}

/// Prime path report as JSON, shaped exactly like the CLI output. `mode`
/// and `schedule` take the `PPF_MODE_*` / `PPF_SCHEDULE_*` constants; the
/// seed feeds the seeded-random schedule and `workers` the parallel one.
#[no_mangle]
pub extern "C" fn ppf_prime_paths_json(
    g: *const PpfGraph,
    mode: u32,
    schedule: u32,
    seed: u64,
    workers: u32,
    out: *mut *mut c_char,
) -> PpfStatus {
    guarded(|| {
        let Some(cfg) = graph(g) else {
            set_error("null graph");
            return PpfStatus::NullArg;
        };
        if out.is_null() {
            set_error("null output pointer");
            return PpfStatus::NullArg;
        }
        let mode = match mode {
            PPF_MODE_DIRECT => Mode::Direct,
            PPF_MODE_COMPOSITIONAL => Mode::Compositional,
            other => {
                set_error(format_args!("unknown mode {other}"));
                return PpfStatus::Parse;
            }
        };
        let schedule = match schedule {
            PPF_SCHEDULE_ROUND_ROBIN => Schedule::RoundRobin,
            PPF_SCHEDULE_SEEDED_RANDOM => Schedule::SeededRandom { seed },
            PPF_SCHEDULE_PARALLEL => Schedule::Parallel { workers: workers.max(1) as usize },
            other => {
                set_error(format_args!("unknown schedule {other}"));
                return PpfStatus::Parse;
            }
        };
        let started = Instant::now();
        match generate_pps(cfg, mode, &schedule, None) {
            Ok((pp, stats)) => {
                let json = report::pp_report_json(
                    cfg,
                    mode,
                    &schedule,
                    &pp,
                    &stats,
                    started.elapsed().as_millis() as u64,
                );
                emit_string(report::to_json_string(&json), out)
            }
            Err(e) => {
                let status = run_status(&e);
                set_error(e);
                status
            }
        }
    })
}

/// Covering test paths as JSON (direct mode, round-robin schedule).
#[no_mangle]
pub extern "C" fn ppf_test_paths_json(g: *const PpfGraph, out: *mut *mut c_char) -> PpfStatus {
    guarded(|| {
        let Some(cfg) = graph(g) else {
            set_error("null graph");
            return PpfStatus::NullArg;
        };
        if out.is_null() {
            set_error("null output pointer");
            return PpfStatus::NullArg;
        }
        let pp = match generate_pps(cfg, Mode::Direct, &Schedule::RoundRobin, None) {
            Ok((pp, _)) => pp,
            Err(e) => {
                let status = run_status(&e);
                set_error(e);
                return status;
            }
        };
        match generate_test_paths(cfg, &pp.all_paths()) {
            Ok(tp) => emit_string(report::to_json_string(&report::tp_report_json(cfg, &tp)), out),
            Err(e) => {
                set_error(e);
                PpfStatus::Validation
            }
        }
    })
}

/// Structural metrics as JSON.
#[no_mangle]
pub extern "C" fn ppf_metrics_json(g: *const PpfGraph, out: *mut *mut c_char) -> PpfStatus {
    guarded(|| {
        let Some(cfg) = graph(g) else {
            set_error("null graph");
            return PpfStatus::NullArg;
        };
        if out.is_null() {
            set_error("null output pointer");
            return PpfStatus::NullArg;
        }
        let walks = match npath(cfg, NPATH_STATE_BUDGET) {
            Ok(n) => n,
            Err(e) => {
                set_error(e);
                return PpfStatus::Budget;
            }
        };
        let pp = match generate_pps(cfg, Mode::Compositional, &Schedule::RoundRobin, None) {
            Ok((pp, _)) => pp,
            Err(e) => {
                let status = run_status(&e);
                set_error(e);
                return status;
            }
        };
        let data = MetricsReport {
            cyclomatic: cyclomatic(cfg),
            npath: walks,
            prime_paths: pp.total(),
        };
        emit_string(
            report::to_json_string(&report::metrics_report_json(cfg, &data)),
            out,
        )
    })
}

/// Component decomposition as JSON.
#[no_mangle]
pub extern "C" fn ppf_scc_json(g: *const PpfGraph, out: *mut *mut c_char) -> PpfStatus {
    guarded(|| {
        let Some(cfg) = graph(g) else {
            set_error("null graph");
            return PpfStatus::NullArg;
        };
        if out.is_null() {
            set_error("null output pointer");
            return PpfStatus::NullArg;
        }
        emit_string(report::to_json_string(&report::scc_report_json(cfg)), out)
    })
}

/// Message for the most recent failure on this thread, or null. The caller
/// owns the string.
#[no_mangle]
pub extern "C" fn ppf_last_error() -> *mut c_char {
    LAST_ERROR.with(|e| {
        e.borrow()
            .as_ref()
            .map_or(std::ptr::null_mut(), |s| s.clone().into_raw())
    })
}

/// Free a string returned by any `ppf_*` function.
#[no_mangle]
pub extern "C" fn ppf_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(unsafe { CString::from_raw(s) });
    }
}
