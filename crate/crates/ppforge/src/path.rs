//! Vertex paths and the containment filters used throughout the pipeline.
//!
//! A path is a sequence of vertex ids following arcs. A *simple* path repeats
//! no vertex, except that the first and last may coincide (a cyclic simple
//! path). A path `p` is *contained* in `q` when `p` occurs in `q` as a
//! contiguous subsequence; cyclic rotations are distinct paths and are never
//! identified with each other.

use std::collections::{BTreeSet, HashMap};

pub type VertexId = u32;

/// A vertex sequence. Ordering and equality are lexicographic on the ids,
/// which gives reports and filters a canonical order.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Path(pub Vec<VertexId>);

impl Path {
    pub fn new(seq: Vec<VertexId>) -> Self {
        Path(seq)
    }

    pub fn single(v: VertexId) -> Self {
        Path(vec![v])
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn first(&self) -> VertexId {
        self.0[0]
    }

    pub fn last(&self) -> VertexId {
        *self.0.last().expect("empty path")
    }

    pub fn as_slice(&self) -> &[VertexId] {
        &self.0
    }

    /// First == last with at least one arc traversed.
    pub fn is_cyclic(&self) -> bool {
        self.0.len() >= 2 && self.0[0] == *self.0.last().unwrap()
    }

    /// No repeated vertex except possibly first == last.
    pub fn is_simple(&self) -> bool {
        let n = self.0.len();
        if n == 0 {
            return false;
        }
        let interior = if self.is_cyclic() { &self.0[..n - 1] } else { &self.0[..] };
        let mut seen = BTreeSet::new();
        interior.iter().all(|v| seen.insert(*v))
    }

    /// True when `self` occurs in `q` as a contiguous subsequence.
    pub fn contained_in(&self, q: &Path) -> bool {
        contains_contiguous(&q.0, &self.0)
    }
}

impl std::ops::Index<usize> for Path {
    type Output = VertexId;
    fn index(&self, i: usize) -> &VertexId {
        &self.0[i]
    }
}

impl std::fmt::Debug for Path {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "⟨")?;
        for (i, v) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{v}")?;
        }
        write!(f, "⟩")
    }
}

/// Contiguous-subsequence test: does `hay` contain `needle` as a window?
pub fn contains_contiguous(hay: &[VertexId], needle: &[VertexId]) -> bool {
    if needle.is_empty() || needle.len() > hay.len() {
        return false;
    }
    hay.windows(needle.len()).any(|w| w == needle)
}

// Polynomial rolling hash for window lookups. Collisions are tolerated: every
// hit is confirmed by slice comparison.
const HASH_BASE: u64 = 0x100_0000_01b3;

fn full_hash(seq: &[VertexId]) -> u64 {
    seq.iter()
        .fold(0u64, |h, &v| h.wrapping_mul(HASH_BASE).wrapping_add(u64::from(v) + 1))
}

struct RollingHash {
    prefix: Vec<u64>,
    pows: Vec<u64>,
}

impl RollingHash {
    fn new(seq: &[VertexId]) -> Self {
        let mut prefix: Vec<u64> = Vec::with_capacity(seq.len() + 1);
        let mut pows: Vec<u64> = Vec::with_capacity(seq.len() + 1);
        prefix.push(0);
        pows.push(1);
        for &v in seq {
            let h = prefix.last().unwrap().wrapping_mul(HASH_BASE).wrapping_add(u64::from(v) + 1);
            prefix.push(h);
            pows.push(pows.last().unwrap().wrapping_mul(HASH_BASE));
        }
        RollingHash { prefix, pows }
    }

    /// Hash of seq[i..j], equal to `full_hash(&seq[i..j])`.
    fn window(&self, i: usize, j: usize) -> u64 {
        self.prefix[j].wrapping_sub(self.prefix[i].wrapping_mul(self.pows[j - i]))
    }
}

/// Deduplicate and keep only paths that are not proper contiguous
/// subsequences of another path in the set. This is the prime-path filter:
/// applied to the set of all simple paths it yields exactly the maximal ones.
pub fn maximal_filter(mut paths: Vec<Path>) -> Vec<Path> {
    paths.sort_unstable();
    paths.dedup();
    if paths.len() <= 1 {
        return paths;
    }

    let lengths: BTreeSet<usize> = paths.iter().map(Path::len).collect();
    let mut by_hash: HashMap<u64, Vec<u32>> = HashMap::with_capacity(paths.len());
    for (i, p) in paths.iter().enumerate() {
        by_hash.entry(full_hash(&p.0)).or_default().push(i as u32);
    }

    let mut contained = vec![false; paths.len()];
    for q in &paths {
        let roll = RollingHash::new(&q.0);
        // Only strictly shorter paths can be proper subsequences.
        for &len in lengths.range(..q.len()) {
            for start in 0..=q.len() - len {
                let Some(cands) = by_hash.get(&roll.window(start, start + len)) else {
                    continue;
                };
                for &i in cands {
                    let i = i as usize;
                    if !contained[i]
                        && paths[i].len() == len
                        && paths[i].0[..] == q.0[start..start + len]
                    {
                        contained[i] = true;
                    }
                }
            }
        }
    }

    paths
        .into_iter()
        .zip(contained)
        .filter_map(|(p, c)| (!c).then_some(p))
        .collect()
}

/// For each candidate, report whether it is a proper prefix of some path in
/// `universe`. Candidates equal to a universe path are not flagged.
pub fn proper_prefix_of_any(candidates: &[Path], universe: &[Path]) -> Vec<bool> {
    let mut sorted: Vec<&[VertexId]> = universe.iter().map(|p| p.0.as_slice()).collect();
    sorted.sort_unstable();
    sorted.dedup();
    candidates
        .iter()
        .map(|c| {
            // Every universe path strictly between c and an extension of c
            // would itself extend c, so the block of extensions (if any)
            // begins immediately after c's insertion point.
            let pos = match sorted.binary_search(&c.0.as_slice()) {
                Ok(i) => i + 1,
                Err(i) => i,
            };
            sorted
                .get(pos)
                .is_some_and(|next| next.len() > c.len() && next[..c.len()] == c.0[..])
        })
        .collect()
}

/// For each candidate, report whether it is a proper suffix of some path in
/// `universe`.
pub fn proper_suffix_of_any(candidates: &[Path], universe: &[Path]) -> Vec<bool> {
    let rev = |p: &Path| -> Path {
        let mut v = p.0.clone();
        v.reverse();
        Path(v)
    };
    let rev_candidates: Vec<Path> = candidates.iter().map(rev).collect();
    let rev_universe: Vec<Path> = universe.iter().map(rev).collect();
    proper_prefix_of_any(&rev_candidates, &rev_universe)
}
