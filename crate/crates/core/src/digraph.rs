//! Oriented graphs: simple digraphs without loops or opposite arcs.
//!
//! Vertices are the dense range `0..n`. Both the out- and in-neighbourhood
//! of every vertex are stored as [`BitSet`] rows so that the property
//! searches can intersect neighbourhoods a machine word at a time.

use std::collections::BTreeSet;
use std::fmt;

use crate::bitset::BitSet;
use crate::error::{Error, Result};

pub type Vertex = usize;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Arc {
    pub src: Vertex,
    pub dst: Vertex,
}

impl Arc {
    pub fn new(src: Vertex, dst: Vertex) -> Self {
        Arc { src, dst }
    }
}

impl From<(Vertex, Vertex)> for Arc {
    fn from((src, dst): (Vertex, Vertex)) -> Self {
        Arc { src, dst }
    }
}

impl fmt::Display for Arc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}->{}", self.src, self.dst)
    }
}

#[derive(Clone, PartialEq, Eq)]
pub struct OrientedGraph {
    out_adj: Vec<BitSet>,
    in_adj: Vec<BitSet>,
    arcs: usize,
}

impl fmt::Debug for OrientedGraph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("OrientedGraph")
            .field("n", &self.order())
            .field("arcs", &self.arcs().collect::<Vec<_>>())
            .finish()
    }
}

impl OrientedGraph {
    /// The edgeless graph on `n` vertices.
    pub fn new(n: usize) -> Self {
        OrientedGraph {
            out_adj: vec![BitSet::new(n); n],
            in_adj: vec![BitSet::new(n); n],
            arcs: 0,
        }
    }

    pub fn from_arcs<I: IntoIterator<Item = (Vertex, Vertex)>>(n: usize, arcs: I) -> Result<Self> {
        let mut g = OrientedGraph::new(n);
        for (u, v) in arcs {
            g.add_arc(u, v)?;
        }
        Ok(g)
    }

    /// Adds `u -> v`, rejecting loops, duplicates and opposite arcs.
    pub fn add_arc(&mut self, u: Vertex, v: Vertex) -> Result<()> {
        let n = self.order();
        if u >= n || v >= n {
            return Err(Error::InvalidGraph(format!("arc {u}->{v} out of range for {n} vertices")));
        }
        if u == v {
            return Err(Error::InvalidGraph(format!("loop at vertex {u}")));
        }
        if self.out_adj[u].contains(v) {
            return Err(Error::InvalidGraph(format!("duplicate arc {u}->{v}")));
        }
        if self.out_adj[v].contains(u) {
            return Err(Error::InvalidGraph(format!("arc {u}->{v} opposes existing arc {v}->{u}")));
        }
        self.out_adj[u].insert(v);
        self.in_adj[v].insert(u);
        self.arcs += 1;
        Ok(())
    }

    /// Removes `u -> v` if present.
    pub fn remove_arc(&mut self, u: Vertex, v: Vertex) -> bool {
        if u < self.order() && self.out_adj[u].remove(v) {
            self.in_adj[v].remove(u);
            self.arcs -= 1;
            true
        } else {
            false
        }
    }

    #[inline]
    pub fn order(&self) -> usize {
        self.out_adj.len()
    }

    #[inline]
    pub fn arc_count(&self) -> usize {
        self.arcs
    }

    #[inline]
    pub fn has_arc(&self, u: Vertex, v: Vertex) -> bool {
        self.out_adj[u].contains(v)
    }

    #[inline]
    pub fn adjacent(&self, u: Vertex, v: Vertex) -> bool {
        self.out_adj[u].contains(v) || self.in_adj[u].contains(v)
    }

    /// N^+(v).
    #[inline]
    pub fn out_neighbors(&self, v: Vertex) -> &BitSet {
        &self.out_adj[v]
    }

    /// N^-(v).
    #[inline]
    pub fn in_neighbors(&self, v: Vertex) -> &BitSet {
        &self.in_adj[v]
    }

    /// N(v) = N^+(v) ∪ N^-(v).
    pub fn neighbors(&self, v: Vertex) -> BitSet {
        let mut s = self.out_adj[v].clone();
        s.union_with(&self.in_adj[v]);
        s
    }

    /// Neighbours in ascending order, each tagged `true` when the arc leaves `v`.
    pub fn oriented_neighbors(&self, v: Vertex) -> Vec<(Vertex, bool)> {
        let mut out: Vec<(Vertex, bool)> = self.out_adj[v]
            .iter()
            .map(|w| (w, true))
            .chain(self.in_adj[v].iter().map(|w| (w, false)))
            .collect();
        out.sort_unstable();
        out
    }

    #[inline]
    pub fn out_degree(&self, v: Vertex) -> usize {
        self.out_adj[v].len()
    }

    #[inline]
    pub fn in_degree(&self, v: Vertex) -> usize {
        self.in_adj[v].len()
    }

    #[inline]
    pub fn degree(&self, v: Vertex) -> usize {
        self.out_degree(v) + self.in_degree(v)
    }

    pub fn max_degree(&self) -> usize {
        (0..self.order()).map(|v| self.degree(v)).max().unwrap_or(0)
    }

    pub fn is_regular(&self, d: usize) -> bool {
        (0..self.order()).all(|v| self.degree(v) == d)
    }

    /// All arcs in ascending `(src, dst)` order.
    pub fn arcs(&self) -> impl Iterator<Item = Arc> + '_ {
        self.out_adj
            .iter()
            .enumerate()
            .flat_map(|(u, row)| row.iter().map(move |v| Arc::new(u, v)))
    }

    /// True when every pair of distinct vertices is joined by exactly one arc.
    pub fn is_tournament(&self) -> bool {
        let n = self.order();
        n * n.saturating_sub(1) / 2 == self.arcs
    }

    /// Subgraph induced by `vertices` (ascending), relabelled densely in that order.
    pub fn induced(&self, vertices: &[Vertex]) -> OrientedGraph {
        let mut index = vec![usize::MAX; self.order()];
        for (i, &v) in vertices.iter().enumerate() {
            index[v] = i;
        }
        let mut h = OrientedGraph::new(vertices.len());
        for (i, &v) in vertices.iter().enumerate() {
            for w in self.out_adj[v].iter() {
                if index[w] != usize::MAX {
                    h.out_adj[i].insert(index[w]);
                    h.in_adj[index[w]].insert(i);
                    h.arcs += 1;
                }
            }
        }
        h
    }

    /// Checks the storage invariants: no loops, no opposite arcs, mirrored rows.
    pub fn check_invariants(&self) -> Result<()> {
        let n = self.order();
        let mut count = 0;
        for v in 0..n {
            if self.out_adj[v].contains(v) || self.in_adj[v].contains(v) {
                return Err(Error::InvalidGraph(format!("loop at {v}")));
            }
            for w in self.out_adj[v].iter() {
                count += 1;
                if !self.in_adj[w].contains(v) {
                    return Err(Error::InvalidGraph(format!("arc {v}->{w} missing from in-row")));
                }
                if self.out_adj[w].contains(v) {
                    return Err(Error::InvalidGraph(format!("opposite arcs {v}<->{w}")));
                }
            }
            for w in self.in_adj[v].iter() {
                if !self.out_adj[w].contains(v) {
                    return Err(Error::InvalidGraph(format!("arc {w}->{v} missing from out-row")));
                }
            }
        }
        if count != self.arcs {
            return Err(Error::InvalidGraph("arc counter out of sync".into()));
        }
        Ok(())
    }
}

/// Result of [`degree_profile`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DegreeProfile {
    pub max_degree: usize,
    pub degeneracy: usize,
    pub elimination_order: Vec<Vertex>,
}

/// Repeatedly removes a minimum-degree vertex (lowest index on ties). The
/// degeneracy is the largest degree seen at removal time.
pub fn degree_profile(g: &OrientedGraph) -> DegreeProfile {
    let n = g.order();
    let mut deg: Vec<usize> = (0..n).map(|v| g.degree(v)).collect();
    let mut queue: BTreeSet<(usize, Vertex)> = (0..n).map(|v| (deg[v], v)).collect();
    let mut removed = vec![false; n];
    let mut order = Vec::with_capacity(n);
    let mut degeneracy = 0;
    while let Some((d, v)) = queue.pop_first() {
        degeneracy = degeneracy.max(d);
        removed[v] = true;
        order.push(v);
        for w in g.neighbors(v).iter() {
            if !removed[w] {
                queue.remove(&(deg[w], w));
                deg[w] -= 1;
                queue.insert((deg[w], w));
            }
        }
    }
    DegreeProfile {
        max_degree: g.max_degree(),
        degeneracy,
        elimination_order: order,
    }
}

/// Vertices of degree `k` whose arcs all leave them.
pub fn find_k_sources(g: &OrientedGraph, k: usize) -> Vec<Vertex> {
    (0..g.order())
        .filter(|&v| g.in_degree(v) == 0 && g.out_degree(v) == k)
        .collect()
}

/// Vertices of degree `k` whose arcs all enter them.
pub fn find_k_sinks(g: &OrientedGraph, k: usize) -> Vec<Vertex> {
    (0..g.order())
        .filter(|&v| g.out_degree(v) == 0 && g.in_degree(v) == k)
        .collect()
}

pub fn has_source_adjacent_to_sink(g: &OrientedGraph, k: usize) -> bool {
    let sinks = BitSet::from_indices(g.order(), find_k_sinks(g, k));
    find_k_sources(g, k)
        .into_iter()
        .any(|s| g.out_neighbors(s).intersection_len(&sinks) > 0)
}

/// Weakly connected components, each sorted, listed by minimum vertex.
pub fn connected_components(g: &OrientedGraph) -> Vec<Vec<Vertex>> {
    let n = g.order();
    let mut seen = vec![false; n];
    let mut comps = Vec::new();
    for root in 0..n {
        if seen[root] {
            continue;
        }
        seen[root] = true;
        let mut stack = vec![root];
        let mut comp = Vec::new();
        while let Some(v) = stack.pop() {
            comp.push(v);
            for w in g.out_neighbors(v).iter().chain(g.in_neighbors(v).iter()) {
                if !seen[w] {
                    seen[w] = true;
                    stack.push(w);
                }
            }
        }
        comp.sort_unstable();
        comps.push(comp);
    }
    comps
}

/// A total assignment of source vertices to target vertices.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ColorMap {
    pub assignment: Vec<Vertex>,
    pub target_id: String,
}

impl ColorMap {
    pub fn new(assignment: Vec<Vertex>, target_id: impl Into<String>) -> Self {
        ColorMap {
            assignment,
            target_id: target_id.into(),
        }
    }

    #[inline]
    pub fn color(&self, v: Vertex) -> Vertex {
        self.assignment[v]
    }

    /// Number of distinct colors actually used.
    pub fn colors_used(&self) -> usize {
        self.assignment.iter().collect::<BTreeSet<_>>().len()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum HomCheck {
    Ok,
    Violation(Arc),
}

impl HomCheck {
    pub fn is_ok(&self) -> bool {
        matches!(self, HomCheck::Ok)
    }
}

/// Checks that `c` maps every arc of `g` onto an arc of `t`. The first
/// offending arc in ascending order is reported.
pub fn verify_homomorphism(g: &OrientedGraph, t: &OrientedGraph, c: &ColorMap) -> Result<HomCheck> {
    if c.assignment.len() != g.order() {
        return Err(Error::MalformedMap(format!(
            "map has {} entries for {} vertices",
            c.assignment.len(),
            g.order()
        )));
    }
    if let Some((v, &img)) = c.assignment.iter().enumerate().find(|(_, &x)| x >= t.order()) {
        return Err(Error::MalformedMap(format!(
            "vertex {v} mapped to {img}, target has {} vertices",
            t.order()
        )));
    }
    for a in g.arcs() {
        let (cu, cv) = (c.color(a.src), c.color(a.dst));
        let fwd = t.out_neighbors(cu).contains(cv);
        debug_assert_eq!(fwd, t.in_neighbors(cv).contains(cu));
        if !fwd {
            return Ok(HomCheck::Violation(a));
        }
    }
    Ok(HomCheck::Ok)
}
