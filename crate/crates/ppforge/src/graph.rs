//! Plain directed-graph storage shared by the CFG layer, the SCC machinery
//! and the oracle. Vertices are dense ids; successor lists keep arc insertion
//! order, which later fixes each vertex's left/right successor.

use crate::path::VertexId;
use std::collections::HashSet;

#[derive(Clone, Debug, Default)]
pub struct Graph {
    succs: Vec<Vec<VertexId>>,
    preds: Vec<Vec<VertexId>>,
    arcs: Vec<(VertexId, VertexId)>,
    arc_set: HashSet<(VertexId, VertexId)>,
}

impl Graph {
    pub fn new(vertex_count: usize) -> Self {
        Graph {
            succs: vec![Vec::new(); vertex_count],
            preds: vec![Vec::new(); vertex_count],
            arcs: Vec::new(),
            arc_set: HashSet::new(),
        }
    }

    pub fn vertex_count(&self) -> usize {
        self.succs.len()
    }

    pub fn arc_count(&self) -> usize {
        self.arcs.len()
    }

    pub fn add_arc(&mut self, from: VertexId, to: VertexId) {
        assert!((from as usize) < self.vertex_count(), "arc source out of range");
        assert!((to as usize) < self.vertex_count(), "arc target out of range");
        assert!(self.arc_set.insert((from, to)), "duplicate arc {from}->{to}");
        self.succs[from as usize].push(to);
        self.preds[to as usize].push(from);
        self.arcs.push((from, to));
    }

    pub fn has_arc(&self, from: VertexId, to: VertexId) -> bool {
        self.arc_set.contains(&(from, to))
    }

    pub fn succs(&self, v: VertexId) -> &[VertexId] {
        &self.succs[v as usize]
    }

    pub fn preds(&self, v: VertexId) -> &[VertexId] {
        &self.preds[v as usize]
    }

    pub fn arcs(&self) -> &[(VertexId, VertexId)] {
        &self.arcs
    }

    pub fn out_degree(&self, v: VertexId) -> usize {
        self.succs[v as usize].len()
    }

    pub fn in_degree(&self, v: VertexId) -> usize {
        self.preds[v as usize].len()
    }

    /// Vertices reachable from `v` by following arcs forward; includes `v`.
    pub fn forward_reachable(&self, v: VertexId) -> Vec<bool> {
        self.bfs(v, |g, u| g.succs(u))
    }

    /// Vertices that reach `v`; includes `v`.
    pub fn backward_closure(&self, v: VertexId) -> Vec<bool> {
        self.bfs(v, |g, u| g.preds(u))
    }

    fn bfs<'a>(&'a self, v: VertexId, adj: impl Fn(&'a Graph, VertexId) -> &'a [VertexId]) -> Vec<bool> {
        let mut seen = vec![false; self.vertex_count()];
        let mut queue = std::collections::VecDeque::new();
        seen[v as usize] = true;
        queue.push_back(v);
        while let Some(u) = queue.pop_front() {
            for &w in adj(self, u) {
                if !seen[w as usize] {
                    seen[w as usize] = true;
                    queue.push_back(w);
                }
            }
        }
        seen
    }

    /// Number of weakly connected components (arcs treated as undirected).
    pub fn weak_component_count(&self) -> usize {
        let n = self.vertex_count();
        let mut seen = vec![false; n];
        let mut count = 0;
        for start in 0..n {
            if seen[start] {
                continue;
            }
            count += 1;
            let mut queue = std::collections::VecDeque::from([start as VertexId]);
            seen[start] = true;
            while let Some(u) = queue.pop_front() {
                for &w in self.succs(u).iter().chain(self.preds(u)) {
                    if !seen[w as usize] {
                        seen[w as usize] = true;
                        queue.push_back(w);
                    }
                }
            }
        }
        count
    }

    /// Subgraph induced by `members`, with vertices renumbered densely in the
    /// order given. Arc insertion order follows the parent graph so the
    /// left/right successor orientation is inherited. Returns the subgraph
    /// and the local-to-parent id map.
    pub fn induced_subgraph(&self, members: &[VertexId]) -> (Graph, Vec<VertexId>) {
        let mut local_of = vec![u32::MAX; self.vertex_count()];
        for (i, &m) in members.iter().enumerate() {
            local_of[m as usize] = i as u32;
        }
        let mut sub = Graph::new(members.len());
        for &(a, b) in &self.arcs {
            let (la, lb) = (local_of[a as usize], local_of[b as usize]);
            if la != u32::MAX && lb != u32::MAX {
                sub.add_arc(la, lb);
            }
        }
        (sub, members.to_vec())
    }
}
