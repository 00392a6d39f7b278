//! Strongly connected components (iterative Tarjan), the component graph,
//! entry/exit vertex identification and backward-reachability sets.

use crate::cfg::{Cfg, VertexInfo};
use crate::graph::Graph;
use crate::path::VertexId;

#[derive(Clone, Debug)]
pub struct SccDecomposition {
    /// Vertex to component id. Ids are renumbered after Tarjan so that
    /// components are ordered by their smallest member vertex; this keeps
    /// component labels independent of traversal details.
    pub scc_of: Vec<u32>,
    /// Component id to members, ascending vertex order.
    pub members: Vec<Vec<VertexId>>,
    /// Component ids with more than one member or a self-loop, ascending.
    pub nontrivial: Vec<u32>,
}

impl SccDecomposition {
    pub fn component_count(&self) -> usize {
        self.members.len()
    }

    pub fn is_nontrivial(&self, c: u32) -> bool {
        self.nontrivial.binary_search(&c).is_ok()
    }
}

pub fn tarjan_scc(g: &Graph) -> SccDecomposition {
    let n = g.vertex_count();
    const UNVISITED: u32 = u32::MAX;
    let mut index = vec![UNVISITED; n];
    let mut low = vec![0u32; n];
    let mut comp = vec![UNVISITED; n];
    let mut on_stack = vec![false; n];
    let mut stack: Vec<u32> = Vec::new();
    let mut next_index = 0u32;
    let mut comp_count = 0u32;

    // Explicit DFS frames: (vertex, next successor position) so deep graphs
    // cannot overflow the call stack.
    let mut frames: Vec<(u32, usize)> = Vec::new();
    for root in 0..n as u32 {
        if index[root as usize] != UNVISITED {
            continue;
        }
        frames.push((root, 0));
        index[root as usize] = next_index;
        low[root as usize] = next_index;
        next_index += 1;
        stack.push(root);
        on_stack[root as usize] = true;

        while let Some(top) = frames.last_mut() {
            let v = top.0;
            if top.1 < g.succs(v).len() {
                let w = g.succs(v)[top.1];
                top.1 += 1;
                if index[w as usize] == UNVISITED {
                    index[w as usize] = next_index;
                    low[w as usize] = next_index;
                    next_index += 1;
                    stack.push(w);
                    on_stack[w as usize] = true;
                    frames.push((w, 0));
                } else if on_stack[w as usize] {
                    low[v as usize] = low[v as usize].min(index[w as usize]);
                }
            } else {
                frames.pop();
                if let Some(&(parent, _)) = frames.last() {
                    low[parent as usize] = low[parent as usize].min(low[v as usize]);
                }
                if low[v as usize] == index[v as usize] {
                    loop {
                        let w = stack.pop().expect("tarjan stack under-run");
                        on_stack[w as usize] = false;
                        comp[w as usize] = comp_count;
                        if w == v {
                            break;
                        }
                    }
                    comp_count += 1;
                }
            }
        }
    }

    // Renumber components by smallest member for stable public ids.
    let mut min_member = vec![u32::MAX; comp_count as usize];
    for v in 0..n {
        let c = comp[v] as usize;
        min_member[c] = min_member[c].min(v as u32);
    }
    let mut order: Vec<u32> = (0..comp_count).collect();
    order.sort_unstable_by_key(|&c| min_member[c as usize]);
    let mut renumber = vec![0u32; comp_count as usize];
    for (new_id, &old_id) in order.iter().enumerate() {
        renumber[old_id as usize] = new_id as u32;
    }

    let mut scc_of = vec![0u32; n];
    let mut members = vec![Vec::new(); comp_count as usize];
    for v in 0..n {
        let c = renumber[comp[v] as usize];
        scc_of[v] = c;
        members[c as usize].push(v as VertexId);
    }
    let nontrivial = (0..comp_count)
        .filter(|&c| {
            let m = &members[c as usize];
            m.len() > 1 || g.has_arc(m[0], m[0])
        })
        .collect();

    SccDecomposition { scc_of, members, nontrivial }
}

/// Condense `cfg` by its components: one vertex per SCC, one arc per pair of
/// components joined by at least one original arc. Singleton components keep
/// their vertex's name; nontrivial ones are labeled SCC1, SCC2, ... in
/// component order. The result is acyclic.
pub fn build_ccfg(cfg: &Cfg, d: &SccDecomposition) -> Cfg {
    let mut vertices: Vec<VertexInfo> = Vec::with_capacity(d.component_count());
    let mut label = 0usize;
    for (c, members) in d.members.iter().enumerate() {
        let name = if d.is_nontrivial(c as u32) {
            label += 1;
            format!("SCC{label}")
        } else {
            cfg.name(members[0]).to_string()
        };
        vertices.push(VertexInfo { name, synthetic: false });
    }
    // A user vertex could share a name with an SCC label; disambiguate the
    // label, never the original name.
    for i in 0..vertices.len() {
        let clash = vertices.iter().enumerate().any(|(j, v)| j != i && v.name == vertices[i].name);
        if clash && d.is_nontrivial(i as u32) {
            while vertices.iter().enumerate().any(|(j, v)| j != i && v.name == vertices[i].name) {
                vertices[i].name.push('_');
            }
        }
    }

    let mut graph = Graph::new(d.component_count());
    let mut seen = std::collections::HashSet::new();
    for &(a, b) in cfg.graph.arcs() {
        let (ca, cb) = (d.scc_of[a as usize], d.scc_of[b as usize]);
        if ca != cb && seen.insert((ca, cb)) {
            graph.add_arc(ca, cb);
        }
    }

    Cfg {
        vertices,
        graph,
        start: d.scc_of[cfg.start as usize],
        end: d.scc_of[cfg.end as usize],
    }
}

/// Members of component `c` with an incoming arc from outside (entries) and
/// with an outgoing arc to outside (exits).
pub fn entry_exit_vertices(
    g: &Graph,
    d: &SccDecomposition,
    c: u32,
) -> (Vec<VertexId>, Vec<VertexId>) {
    let mut entries = Vec::new();
    let mut exits = Vec::new();
    for &v in &d.members[c as usize] {
        if g.preds(v).iter().any(|&p| d.scc_of[p as usize] != c) {
            entries.push(v);
        }
        if g.succs(v).iter().any(|&s| d.scc_of[s as usize] != c) {
            exits.push(v);
        }
    }
    (entries, exits)
}

/// All vertices with a directed path to `v`, excluding `v` itself even when
/// it lies on a cycle. Precomputed host-side before workers launch; the
/// exclusion keeps a cycle vertex's termination check from waiting on its
/// own flag.
pub fn backward_reachable(g: &Graph, v: VertexId) -> Vec<VertexId> {
    let closure = g.backward_closure(v);
    (0..g.vertex_count() as VertexId)
        .filter(|&u| u != v && closure[u as usize])
        .collect()
}
