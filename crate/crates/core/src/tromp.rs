//! The Tromp construction Tr(G), the augmented target Tr*(QR_p) and T_9.
//!
//! Vertex layout of Tr(G) for |V(G)| = m: `0..m` is G, `m..2m` is the copy
//! G′ (u′ = u + m), `2m` is ∞ and `2m + 1` is ∞′. Tr*(QR_p) appends
//! t₀ = 2p + 2 and t₁ = 2p + 3.

use crate::digraph::{OrientedGraph, Vertex};
use crate::error::{Error, Result};
use crate::paley::{build_paley, is_automorphism, Permutation};
use crate::target::{Landmarks, TargetGraph, TargetKind};
use crate::automorphism::extend_automorphism;

#[derive(Clone, Debug)]
pub struct TrompGraph {
    pub base_order: usize,
    pub graph: OrientedGraph,
    pub anti_twin: Vec<Vertex>,
}

impl TrompGraph {
    pub fn infinity(&self) -> Vertex {
        2 * self.base_order
    }

    pub fn infinity_prime(&self) -> Vertex {
        2 * self.base_order + 1
    }

    /// u ↦ u′ for base vertices.
    pub fn prime(&self, u: Vertex) -> Vertex {
        u + self.base_order
    }
}

pub fn build_tromp(g: &OrientedGraph) -> Result<TrompGraph> {
    g.check_invariants()?;
    let m = g.order();
    let (inf, inf_p) = (2 * m, 2 * m + 1);
    let mut tr = OrientedGraph::new(2 * m + 2);
    for u in 0..m {
        let up = u + m;
        tr.add_arc(u, inf)?;
        tr.add_arc(inf, up)?;
        tr.add_arc(up, inf_p)?;
        tr.add_arc(inf_p, u)?;
    }
    for a in g.arcs() {
        let (u, v) = (a.src, a.dst);
        tr.add_arc(u, v)?;
        tr.add_arc(u + m, v + m)?;
        tr.add_arc(v, u + m)?;
        tr.add_arc(v + m, u)?;
    }
    let anti_twin = (0..2 * m + 2)
        .map(|x| match x {
            x if x < m => x + m,
            x if x < 2 * m => x - m,
            x if x == inf => inf_p,
            _ => inf,
        })
        .collect();
    let t = TrompGraph {
        base_order: m,
        graph: tr,
        anti_twin,
    };
    debug_assert!(check_tromp(&t, g).is_ok());
    Ok(t)
}

/// Re-checks every construction rule of Tr(G) against `g`.
pub fn check_tromp(t: &TrompGraph, g: &OrientedGraph) -> Result<()> {
    let m = g.order();
    let tr = &t.graph;
    let fail = |msg: String| Err(Error::InvalidGraph(msg));
    if tr.order() != 2 * m + 2 {
        return fail("wrong order".into());
    }
    let (inf, inf_p) = (t.infinity(), t.infinity_prime());
    let mut expected = 0;
    for u in 0..m {
        let up = t.prime(u);
        if !(tr.has_arc(u, inf) && tr.has_arc(inf, up) && tr.has_arc(up, inf_p) && tr.has_arc(inf_p, u)) {
            return fail(format!("infinity rules broken at {u}"));
        }
        expected += 4;
    }
    for a in g.arcs() {
        let (u, v) = (a.src, a.dst);
        if !(tr.has_arc(u, v) && tr.has_arc(u + m, v + m) && tr.has_arc(v, u + m) && tr.has_arc(v + m, u)) {
            return fail(format!("arc rules broken at {a}"));
        }
        expected += 4;
    }
    if tr.arc_count() != expected {
        return fail("extra arcs present".into());
    }
    for x in 0..tr.order() {
        let at = t.anti_twin[x];
        if at == x || t.anti_twin[at] != x || tr.adjacent(x, at) {
            return fail(format!("anti-twin rule broken at {x}"));
        }
    }
    Ok(())
}

impl TargetGraph {
    pub fn from_tromp(t: &TrompGraph, p: u64) -> Self {
        TargetGraph {
            kind: TargetKind::Tromp { p },
            graph: t.graph.clone(),
            anti_twin: t.anti_twin.iter().map(|&x| Some(x)).collect(),
            landmarks: Landmarks {
                infinity: Some(t.infinity()),
                infinity_prime: Some(t.infinity_prime()),
                ..Landmarks::default()
            },
            paley: None,
        }
    }
}

/// Tr(QR_p) as a target.
pub fn tromp_target(p: u64) -> Result<TargetGraph> {
    let qr = build_paley(p)?;
    Ok(TargetGraph::from_tromp(&build_tromp(&qr.graph)?, p))
}

#[derive(Clone, Debug)]
pub struct TrStarGraph {
    pub tromp: TrompGraph,
    pub graph: OrientedGraph,
    pub t0: Vertex,
    pub t1: Vertex,
}

/// Tr*(QR_p): Tr(QR_p) plus a twin t₀ of 0, a twin t₁ of 1, and t₁ → t₀.
pub fn build_tromp_star(p: u64) -> Result<TrStarGraph> {
    let qr = build_paley(p)?;
    let tromp = build_tromp(&qr.graph)?;
    let n = tromp.graph.order();
    let (t0, t1) = (n, n + 1);
    let mut g = OrientedGraph::new(n + 2);
    for a in tromp.graph.arcs() {
        g.add_arc(a.src, a.dst)?;
    }
    for (twin, orig) in [(t0, 0), (t1, 1)] {
        for w in tromp.graph.out_neighbors(orig).iter() {
            g.add_arc(twin, w)?;
        }
        for w in tromp.graph.in_neighbors(orig).iter() {
            g.add_arc(w, twin)?;
        }
    }
    g.add_arc(t1, t0)?;
    Ok(TrStarGraph { tromp, graph: g, t0, t1 })
}

impl TrStarGraph {
    pub fn to_target(&self, p: u64) -> TargetGraph {
        let n = self.graph.order();
        let mut anti_twin: Vec<Option<Vertex>> = self.tromp.anti_twin.iter().map(|&x| Some(x)).collect();
        anti_twin.resize(n, None);
        TargetGraph {
            kind: TargetKind::TrompStar { p },
            graph: self.graph.clone(),
            anti_twin,
            landmarks: Landmarks {
                infinity: Some(self.tromp.infinity()),
                infinity_prime: Some(self.tromp.infinity_prime()),
                t0: Some(self.t0),
                t1: Some(self.t1),
            },
            paley: None,
        }
    }
}

pub fn tromp_star_target(p: u64) -> Result<TargetGraph> {
    Ok(build_tromp_star(p)?.to_target(p))
}

/// T_9: QR_7 plus 0→7, 1→7, 7→3, 7→8 and 8→i for 0 ≤ i ≤ 6.
pub fn build_t9() -> OrientedGraph {
    let mut g = OrientedGraph::new(9);
    for a in build_paley(7).expect("QR_7 is valid").graph.arcs() {
        g.add_arc(a.src, a.dst).expect("QR_7 arcs are simple");
    }
    for (u, v) in [(0, 7), (1, 7), (7, 3), (7, 8)] {
        g.add_arc(u, v).expect("T_9 arcs are simple");
    }
    for i in 0..7 {
        g.add_arc(8, i).expect("T_9 arcs are simple");
    }
    debug_assert_eq!(g.arc_count(), 32);
    g
}

pub fn t9_target() -> TargetGraph {
    let mut t = TargetGraph::custom(build_t9());
    t.kind = TargetKind::T9;
    t
}

/// An automorphism of `t` extending `pins`, with the anti-twin rule
/// σ(at(v)) = at(σ(v)) added for each pin.
pub fn find_tromp_automorphism(t: &TrompGraph, pins: &[(Vertex, Vertex)]) -> Option<Permutation> {
    let n = t.graph.order();
    if pins.iter().any(|&(v, c)| v >= n || c >= n) {
        return None;
    }
    let mut all = Vec::with_capacity(2 * pins.len());
    for &(v, c) in pins {
        all.push((v, c));
        all.push((t.anti_twin[v], t.anti_twin[c]));
    }
    let sigma = extend_automorphism(&t.graph, &all)?;
    assert!(is_automorphism(&t.graph, &sigma), "search returned a non-automorphism");
    Some(sigma)
}
