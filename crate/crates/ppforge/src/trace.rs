//! Optional event tracing for the vertex runner, plus the audits the test
//! suite runs over a recorded trace and over the finished store.
//!
//! Tracing sits outside the runner's lock-free discipline: the recorder takes
//! a mutex per event. It exists to check behavior, not to measure it.

use crate::cfg::CsrGraph;
use crate::path::VertexId;
use crate::pathstore::{PathHandle, PathStore, SuccessorSide};
use std::collections::{HashMap, HashSet};
use std::sync::Mutex;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TraceEvent {
    /// `actor` published a record of `len` vertices at `handle`.
    Append { actor: VertexId, handle: PathHandle, len: u32 },
    /// `reader` consumed `source` and set its read flag for `side`.
    Read { reader: VertexId, source: PathHandle, side: SuccessorSide },
    /// `reader` extended `source` into the new record `new`.
    Extend { reader: VertexId, source: PathHandle, new: PathHandle },
    /// The owner of `handle.vertex` tombstoned the record.
    Tombstone { handle: PathHandle },
    /// `vertex` cleared its public flag; final, never re-set.
    FlagCleared { vertex: VertexId },
}

/// Mutex order gives one linearization consistent with each worker's program
/// order, which is all the audits below rely on.
#[derive(Default)]
pub struct Trace {
    events: Mutex<Vec<TraceEvent>>,
}

impl Trace {
    pub fn new() -> Trace {
        Trace::default()
    }

    pub fn record(&self, e: TraceEvent) {
        self.events.lock().unwrap().push(e);
    }

    pub fn take(&self) -> Vec<TraceEvent> {
        std::mem::take(&mut *self.events.lock().unwrap())
    }

    pub fn snapshot(&self) -> Vec<TraceEvent> {
        self.events.lock().unwrap().clone()
    }
}

/// Every (record, reader) pair occurs at most once, and so does every
/// (record, side): no record is consumed twice by the same successor.
pub fn audit_read_once(events: &[TraceEvent]) -> Result<(), String> {
    let mut by_reader = HashSet::new();
    let mut by_side = HashSet::new();
    for e in events {
        if let TraceEvent::Read { reader, source, side } = *e {
            if !by_reader.insert((source, reader)) {
                return Err(format!("{source:?} read twice by vertex {reader}"));
            }
            if !by_side.insert((source, side)) {
                return Err(format!("{source:?} read twice on side {side:?}"));
            }
        }
    }
    Ok(())
}

/// Tombstones come after every successor's read of the record, and nothing
/// touches a record once it is tombstoned.
pub fn audit_tombstone_order(events: &[TraceEvent], csr: &CsrGraph) -> Result<(), String> {
    let mut reads: HashMap<PathHandle, usize> = HashMap::new();
    let mut dead: HashSet<PathHandle> = HashSet::new();
    for e in events {
        match *e {
            TraceEvent::Read { source, .. } => {
                if dead.contains(&source) {
                    return Err(format!("{source:?} read after tombstone"));
                }
                *reads.entry(source).or_insert(0) += 1;
            }
            TraceEvent::Extend { source, .. } => {
                if dead.contains(&source) {
                    return Err(format!("{source:?} extended after tombstone"));
                }
            }
            TraceEvent::Tombstone { handle } => {
                let want = csr.succs_of(handle.vertex).len();
                let got = reads.get(&handle).copied().unwrap_or(0);
                if got < want {
                    return Err(format!(
                        "{handle:?} tombstoned after {got} of {want} successor reads"
                    ));
                }
                if !dead.insert(handle) {
                    return Err(format!("{handle:?} tombstoned twice"));
                }
            }
            _ => {}
        }
    }
    Ok(())
}

/// A vertex stops acting once its public flag clears: no append, read,
/// extension or tombstone attributed to it afterwards, and the clear itself
/// happens at most once.
pub fn audit_silence_after_clear(events: &[TraceEvent]) -> Result<(), String> {
    let mut cleared: HashSet<VertexId> = HashSet::new();
    for e in events {
        let actor = match *e {
            TraceEvent::Append { actor, .. } => actor,
            TraceEvent::Read { reader, .. } => reader,
            TraceEvent::Extend { reader, .. } => reader,
            TraceEvent::Tombstone { handle } => handle.vertex,
            TraceEvent::FlagCleared { vertex } => {
                if !cleared.insert(vertex) {
                    return Err(format!("vertex {vertex} cleared its flag twice"));
                }
                continue;
            }
        };
        if cleared.contains(&actor) {
            return Err(format!("vertex {actor} acted after clearing its flag: {e:?}"));
        }
    }
    Ok(())
}

/// Post-run store invariant: a tombstoned record is acyclic, was read by all
/// of its vertex's successors, and is either extended or contained in another
/// record of the same vertex (records stay addressable, so the one that
/// justified the tombstone is still there).
pub fn audit_tombstone_justified(store: &PathStore, csr: &CsrGraph) -> Result<(), String> {
    for v in 0..store.vertex_count() as VertexId {
        let n = store.list_len(v) as u32;
        for i in 0..n {
            let rec = store.record(v, i);
            if !rec.is_tombstoned() {
                continue;
            }
            if rec.is_cyclic() {
                return Err(format!("cyclic record {v}/{i} was tombstoned"));
            }
            if !rec.read_by_all(csr.succs_of(v).len()) {
                return Err(format!("record {v}/{i} tombstoned before all reads"));
            }
            if rec.is_extended() {
                continue;
            }
            let covered = (0..n).any(|j| {
                j != i
                    && crate::path::contains_contiguous(
                        store.record(v, j).seq(),
                        rec.seq(),
                    )
            });
            if !covered {
                return Err(format!("record {v}/{i} tombstoned without extension or cover"));
            }
        }
    }
    Ok(())
}

pub fn run_all_audits(
    events: &[TraceEvent],
    store: &PathStore,
    csr: &CsrGraph,
) -> Result<(), String> {
    audit_read_once(events)?;
    audit_tombstone_order(events, csr)?;
    audit_silence_after_clear(events)?;
    audit_tombstone_justified(store, csr)
}
