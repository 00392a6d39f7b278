//! Hierarchical path store: per-vertex record tables over an append-only
//! record arena, navigated as store -> vertex list -> record.
//!
//! Concurrency discipline, the basis of the race-freedom argument:
//! - every field has exactly one writer: a record's sequence, length,
//!   validity and cyclic flag are written by the creating worker before
//!   publication; the extension and successor-read flags afterwards by the
//!   designated successor's worker; the tombstone by the list owner;
//! - publication is append-only: a record pointer is stored, then the list
//!   length is bumped with release ordering, so any reader that observes the
//!   new length observes the complete record;
//! - flags only ever go false -> true; tombstoned records stay allocated and
//!   addressable for the lifetime of the run (no reclamation, no reuse).
//!
//! Nothing here uses an atomic read-modify-write instruction; ordered stores
//! and loads of single-writer cells are sufficient.

use crate::path::{Path, VertexId};
use std::sync::atomic::{AtomicBool, AtomicPtr, AtomicU64, Ordering};

/// Flag indices, mirroring the record layout: slots 0-4 are the flags,
/// slot 5 the length and the remaining slots the vertex sequence.
pub const FLAG_VALIDITY: usize = 0;
pub const FLAG_EXTENSION: usize = 1;
pub const FLAG_LEFT_READ: usize = 2;
pub const FLAG_RIGHT_READ: usize = 3;
pub const FLAG_CYCLIC: usize = 4;

/// Which successor of the record's vertex performed a read. A vertex has at
/// most two successors after normalization; the left one is the first in arc
/// order.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum SuccessorSide {
    Left,
    Right,
}

/// One stored path. The sequence and length are immutable once the validity
/// flag is observable; the remaining flags are monotonic booleans.
pub struct PathRecord {
    valid: AtomicBool,
    extended: AtomicBool,
    left_read: AtomicBool,
    right_read: AtomicBool,
    cyclic: AtomicBool,
    tombstone: AtomicBool,
    len: u32,
    seq: Box<[VertexId]>,
}

impl PathRecord {
    /// Build an unpublished record. The caller finishes it with
    /// `finish_valid` before handing it to `append`.
    pub fn new(seq: Vec<VertexId>) -> PathRecord {
        let len = seq.len() as u32;
        PathRecord {
            valid: AtomicBool::new(false),
            extended: AtomicBool::new(false),
            left_read: AtomicBool::new(false),
            right_read: AtomicBool::new(false),
            cyclic: AtomicBool::new(false),
            tombstone: AtomicBool::new(false),
            len,
            seq: seq.into_boxed_slice(),
        }
    }

    /// Mark the cyclic flag during construction (first == last). Only the
    /// creating worker calls this, before publication.
    pub fn set_cyclic_at_creation(&self) {
        self.cyclic.store(true, Ordering::Relaxed);
    }

    /// Validity is set last among the creating worker's writes.
    pub fn finish_valid(&self) {
        debug_assert_eq!(self.len as usize, self.seq.len());
        self.valid.store(true, Ordering::Release);
    }

    pub fn seq(&self) -> &[VertexId] {
        &self.seq
    }

    pub fn len(&self) -> u32 {
        self.len
    }

    pub fn to_path(&self) -> Path {
        Path::new(self.seq.to_vec())
    }

    pub fn is_valid(&self) -> bool {
        self.valid.load(Ordering::Acquire)
    }

    pub fn is_extended(&self) -> bool {
        self.extended.load(Ordering::Acquire)
    }

    pub fn is_cyclic(&self) -> bool {
        self.cyclic.load(Ordering::Acquire)
    }

    pub fn is_tombstoned(&self) -> bool {
        self.tombstone.load(Ordering::Acquire)
    }

    pub fn is_read_by(&self, side: SuccessorSide) -> bool {
        match side {
            SuccessorSide::Left => self.left_read.load(Ordering::Acquire),
            SuccessorSide::Right => self.right_read.load(Ordering::Acquire),
        }
    }

    /// Read by every successor the owning vertex actually has; vacuously
    /// true for sinks.
    pub fn read_by_all(&self, successor_count: usize) -> bool {
        match successor_count {
            0 => true,
            1 => self.is_read_by(SuccessorSide::Left),
            2 => self.is_read_by(SuccessorSide::Left) && self.is_read_by(SuccessorSide::Right),
            n => panic!("out-degree {n} after normalization"),
        }
    }

    pub fn flag(&self, which: usize) -> bool {
        match which {
            FLAG_VALIDITY => self.is_valid(),
            FLAG_EXTENSION => self.is_extended(),
            FLAG_LEFT_READ => self.is_read_by(SuccessorSide::Left),
            FLAG_RIGHT_READ => self.is_read_by(SuccessorSide::Right),
            FLAG_CYCLIC => self.is_cyclic(),
            other => panic!("no flag {other}"),
        }
    }
}

struct Segment {
    slots: Box<[AtomicPtr<PathRecord>]>,
}

impl Segment {
    fn new(capacity: usize) -> Segment {
        let mut v = Vec::with_capacity(capacity);
        v.resize_with(capacity, || AtomicPtr::new(std::ptr::null_mut()));
        Segment { slots: v.into_boxed_slice() }
    }
}

const SEG_BASE: usize = 8;
const SEG_COUNT: usize = 32;

/// idx -> (segment, offset) for geometrically sized segments: segment k
/// covers SEG_BASE * (2^k - 1) .. SEG_BASE * (2^(k+1) - 1).
fn locate(idx: usize) -> (usize, usize) {
    let bucket = idx / SEG_BASE + 1;
    let k = (usize::BITS - 1 - bucket.leading_zeros()) as usize;
    (k, idx - SEG_BASE * ((1usize << k) - 1))
}

/// Per-vertex table of record pointers. Only the owning worker appends or
/// installs segments; padding keeps neighboring vertices' hot counters off
/// each other's cache lines.
#[repr(align(64))]
pub struct VertexList {
    len: AtomicU64,
    bytes: AtomicU64,
    segments: Box<[AtomicPtr<Segment>]>,
}

impl VertexList {
    fn new() -> VertexList {
        let mut v = Vec::with_capacity(SEG_COUNT);
        v.resize_with(SEG_COUNT, || AtomicPtr::new(std::ptr::null_mut()));
        VertexList {
            len: AtomicU64::new(0),
            bytes: AtomicU64::new(0),
            segments: v.into_boxed_slice(),
        }
    }
}

impl Drop for VertexList {
    fn drop(&mut self) {
        for seg in self.segments.iter() {
            let seg = seg.swap(std::ptr::null_mut(), Ordering::Acquire);
            if seg.is_null() {
                continue;
            }
            let seg = unsafe { Box::from_raw(seg) };
            for slot in seg.slots.iter() {
                let rec = slot.swap(std::ptr::null_mut(), Ordering::Acquire);
                if !rec.is_null() {
                    drop(unsafe { Box::from_raw(rec) });
                }
            }
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct PathHandle {
    pub vertex: VertexId,
    pub index: u32,
}

#[derive(Debug, thiserror::Error)]
pub enum StoreError {
    #[error("path store capacity exhausted at vertex {vertex}")]
    Overflow { vertex: VertexId },
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct StoreStats {
    pub records_allocated: u64,
    pub live: u64,
    pub tombstoned: u64,
    pub peak_bytes: u64,
}

impl std::fmt::Debug for PathStore {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let s = self.stats();
        f.debug_struct("PathStore")
            .field("vertices", &self.lists.len())
            .field("records", &s.records_allocated)
            .field("live", &s.live)
            .finish()
    }
}

pub struct PathStore {
    lists: Box<[VertexList]>,
    /// Longest representable simple path: |V| + 1 vertices.
    max_path_len: u32,
}

impl PathStore {
    /// A fresh store seeded per the initialization step: every vertex list
    /// holds exactly the length-1 path containing the vertex itself, already
    /// valid, with every other flag clear.
    pub fn new(num_vertices: usize) -> PathStore {
        assert!(num_vertices >= 1, "store needs at least one vertex");
        let mut lists = Vec::with_capacity(num_vertices);
        lists.resize_with(num_vertices, VertexList::new);
        let store = PathStore {
            lists: lists.into_boxed_slice(),
            max_path_len: num_vertices as u32 + 1,
        };
        for v in 0..num_vertices as VertexId {
            let rec = PathRecord::new(vec![v]);
            rec.finish_valid();
            store.append(v, rec).expect("initial record cannot overflow");
        }
        store
    }

    pub fn vertex_count(&self) -> usize {
        self.lists.len()
    }

    /// Published record count for `v`, including tombstoned records. Pair
    /// with `record` to iterate; entries below the returned length are fully
    /// published.
    pub fn list_len(&self, v: VertexId) -> u64 {
        self.lists[v as usize].len.load(Ordering::Acquire)
    }

    pub fn record(&self, v: VertexId, index: u32) -> &PathRecord {
        debug_assert!((index as u64) < self.list_len(v), "record index past published length");
        let (k, off) = locate(index as usize);
        let seg = self.lists[v as usize].segments[k].load(Ordering::Acquire);
        debug_assert!(!seg.is_null());
        let rec = unsafe { (*seg).slots[off].load(Ordering::Acquire) };
        debug_assert!(!rec.is_null());
        unsafe { &*rec }
    }

    /// Append a finished record to `v`'s list. Caller must be `v`'s owning
    /// worker; the record must be a valid simple path ending at `v`.
    pub fn append(&self, v: VertexId, rec: PathRecord) -> Result<PathHandle, StoreError> {
        debug_assert!(rec.is_valid(), "records are completed before publication");
        debug_assert!(!rec.seq.is_empty() && *rec.seq.last().unwrap() == v, "record must end at its vertex");
        debug_assert!(rec.len <= self.max_path_len, "simple path longer than |V|+1");
        debug_assert!(rec.to_path().is_simple(), "stored paths are simple");
        debug_assert_eq!(rec.is_cyclic(), rec.seq.len() >= 2 && rec.seq[0] == v);

        let list = &self.lists[v as usize];
        let n = list.len.load(Ordering::Relaxed) as usize;
        let (k, off) = locate(n);
        if k >= SEG_COUNT {
            return Err(StoreError::Overflow { vertex: v });
        }
        let mut seg = list.segments[k].load(Ordering::Acquire);
        if seg.is_null() {
            // Single appender per vertex: installing without compare-exchange
            // is safe because nobody else writes this slot.
            seg = Box::into_raw(Box::new(Segment::new(SEG_BASE << k)));
            list.segments[k].store(seg, Ordering::Release);
        }
        let bytes = std::mem::size_of::<PathRecord>() + rec.seq.len() * std::mem::size_of::<VertexId>();
        unsafe { (*seg).slots[off].store(Box::into_raw(Box::new(rec)), Ordering::Release) };
        list.bytes.store(list.bytes.load(Ordering::Relaxed) + bytes as u64, Ordering::Relaxed);
        list.len.store(n as u64 + 1, Ordering::Release);
        Ok(PathHandle { vertex: v, index: n as u32 })
    }

    /// Hide a fully read record from live iteration. Owner-only; the record
    /// must have been read by every successor (`successor_count` of them)
    /// and stays addressable for audits.
    pub fn tombstone(&self, h: PathHandle, successor_count: usize) {
        let rec = self.record(h.vertex, h.index);
        debug_assert!(
            rec.read_by_all(successor_count),
            "tombstone requires the record to have been read by all successors"
        );
        debug_assert!(!rec.is_tombstoned(), "tombstone is not reentrant");
        rec.tombstone.store(true, Ordering::Release);
    }

    /// Mark a successor's read of a record. Written only by the worker owning
    /// that successor vertex.
    pub fn mark_read(&self, h: PathHandle, side: SuccessorSide) {
        let rec = self.record(h.vertex, h.index);
        debug_assert!(!rec.is_tombstoned(), "tombstoned records are already fully read");
        debug_assert!(!rec.is_read_by(side), "each successor reads a record at most once");
        match side {
            SuccessorSide::Left => rec.left_read.store(true, Ordering::Release),
            SuccessorSide::Right => rec.right_read.store(true, Ordering::Release),
        }
    }

    /// Mark that some successor extended this record. Idempotent: both
    /// successors may extend the same record.
    pub fn mark_extended(&self, h: PathHandle) {
        let rec = self.record(h.vertex, h.index);
        rec.extended.store(true, Ordering::Release);
    }

    /// Visible records of `v`: published, valid, not tombstoned. Records
    /// published before the call are always observed; concurrent appends may
    /// or may not be.
    pub fn iterate_live(&self, v: VertexId) -> impl Iterator<Item = (PathHandle, &PathRecord)> {
        let n = self.list_len(v);
        (0..n as u32).filter_map(move |index| {
            let rec = self.record(v, index);
            debug_assert!(rec.is_valid());
            (!rec.is_tombstoned()).then_some((PathHandle { vertex: v, index }, rec))
        })
    }

    pub fn live_count(&self, v: VertexId) -> usize {
        self.iterate_live(v).count()
    }

    pub fn stats(&self) -> StoreStats {
        let mut s = StoreStats::default();
        for v in 0..self.vertex_count() as VertexId {
            let n = self.list_len(v);
            s.records_allocated += n;
            s.peak_bytes += self.lists[v as usize].bytes.load(Ordering::Relaxed);
            for i in 0..n as u32 {
                if self.record(v, i).is_tombstoned() {
                    s.tombstoned += 1;
                } else {
                    s.live += 1;
                }
            }
        }
        s
    }
}

// Records are only mutated through their atomics; the raw pointers are
// published with release stores and read with acquire loads.
unsafe impl Send for PathStore {}
unsafe impl Sync for PathStore {}
