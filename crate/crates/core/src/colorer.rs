//! Constructive oriented colorings of bounded-degree graphs.
//!
//! * [`color_deg3`]: maximum degree 3 into T_9.
//! * [`color_degenerate`]: (Δ−1)-degenerate graphs of maximum degree Δ into
//!   any target with P_{Δ−1,Δ−2} and C_{Δ−2,n(Δ−2)/(Δ−1)+1}.
//! * [`color_general`]: maximum degree Δ ∈ 4..=7 into Tr*(QR_p).
//!
//! Every component is colored into the same target, so none of these need
//! the input to be connected.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use rayon::prelude::*;

use crate::bitset::BitSet;
use crate::digraph::{
    connected_components, degree_profile, find_k_sources, verify_homomorphism, ColorMap, OrientedGraph, Vertex,
};
use crate::error::{Error, Result};
use crate::homsolver::qr7_oracle;
use crate::paley::{build_paley, Permutation};
use crate::properties::{
    certified_properties, check_cnk, check_pnk, is_compatible, select_target, PMode, Ratio, Sign, Verdict,
};
use crate::target::{TargetGraph, TargetKind};
use crate::tromp::{build_tromp_star, find_tromp_automorphism, t9_target, TrStarGraph};

/// Largest exhaustive P-search (in leaves) run to validate a custom target.
const CUSTOM_CHECK_LIMIT: u128 = 2_000_000_000;

/// Which step of which construction handled (part of) a component.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum TraceEvent {
    /// 3-sources removed and colored 8, the rest colored into QR_7.
    Deg3Sources { sources: Vec<Vertex> },
    /// 3-regular without 3-source: arc u→v removed, u ↦ 7, v ↦ 8.
    Deg3Regular {
        u: Vertex,
        v: Vertex,
        u1: Vertex,
        u2: Vertex,
        u_to_u2: bool,
    },
    Degenerate(DegenerateStats),
    /// Δ-regular: arc u→v removed; `twins` when u, v were moved to t₁, t₀.
    RegularRepair { u: Vertex, v: Vertex, twins: bool },
}

impl fmt::Display for TraceEvent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TraceEvent::Deg3Sources { sources } => {
                write!(f, "deg3 sources: removed {} 3-source(s), oracle on the rest", sources.len())
            }
            TraceEvent::Deg3Regular { u, v, u1, u2, u_to_u2 } => {
                let dir = if *u_to_u2 { "u->u2" } else { "u2->u" };
                write!(f, "deg3 regular: removed {u}->{v}, u1={u1} u2={u2} ({dir}), u=7 v=8")
            }
            TraceEvent::Degenerate(s) => write!(
                f,
                "degenerate: {} arc removals, {} vertex removals, min candidates {}",
                s.case1,
                s.case2,
                s.min_candidates.map_or("-".into(), |m| m.to_string())
            ),
            TraceEvent::RegularRepair { u, v, twins } => {
                if *twins {
                    write!(f, "regular: removed {u}->{v}, repaired with twins t1->t0")
                } else {
                    write!(f, "regular: removed {u}->{v}, repaired by recoloring {u}")
                }
            }
        }
    }
}

/// Counters from one run of [`color_degenerate`].
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct DegenerateStats {
    /// Steps that removed an arc inside a neighbourhood.
    pub case1: usize,
    /// Steps that removed a vertex with an independent neighbourhood.
    pub case2: usize,
    /// Arc-removal steps where compatibility removed more options of v₁
    /// than there are neighbours beyond v₁, v₂. Zero on certified targets.
    pub case1_excess: usize,
    /// Vertex-removal steps where the candidate count fell below
    /// n − k(n/(Δ−1) − 1). Zero on certified targets.
    pub case2_short: usize,
    /// Smallest candidate set seen for a removed vertex.
    pub min_candidates: Option<usize>,
}

#[derive(Clone, Debug)]
pub struct ComponentTrace {
    pub vertices: Vec<Vertex>,
    pub target: String,
    pub events: Vec<TraceEvent>,
}

impl fmt::Display for ComponentTrace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "component {} ({} vertices) -> {}", self.vertices[0], self.vertices.len(), self.target)?;
        for e in &self.events {
            write!(f, "\n  {e}")?;
        }
        Ok(())
    }
}

#[derive(Clone, Debug)]
pub struct ColoringResult {
    pub map: ColorMap,
    pub target: TargetGraph,
    /// Order of the target: the bound on the oriented chromatic number.
    pub bound_claimed: usize,
    pub trace: Vec<ComponentTrace>,
}

/// Sign of the constraint a neighbour `w` puts on `x` given the arc x→w or w→x.
#[inline]
fn sign(out: bool) -> Sign {
    Sign::from_out(out)
}

/// Target vertices c with c→φ(w) for out-arcs and φ(w)→c for in-arcs.
fn options(t: &OrientedGraph, constraints: impl IntoIterator<Item = (Vertex, bool)>) -> BitSet {
    let mut s = BitSet::full(t.order());
    for (c, out) in constraints {
        s.intersect_with(if out { t.in_neighbors(c) } else { t.out_neighbors(c) });
    }
    s
}

fn contradiction(msg: impl Into<String>) -> Error {
    Error::TheoremContradiction(msg.into())
}

/// Colors each weak component of `g` independently and in parallel, then
/// merges the local maps in component order.
fn per_component<F>(g: &OrientedGraph, f: F) -> Result<(Vec<Vertex>, Vec<(Vec<Vertex>, Vec<TraceEvent>)>)>
where
    F: Fn(&OrientedGraph, &[Vertex]) -> Result<(Vec<Vertex>, Vec<TraceEvent>)> + Sync,
{
    let comps = connected_components(g);
    let parts: Vec<_> = comps
        .par_iter()
        .map(|comp| {
            let h = g.induced(comp);
            f(&h, comp)
        })
        .collect::<Result<_>>()?;
    let mut assignment = vec![0; g.order()];
    let mut traces = Vec::with_capacity(comps.len());
    for (comp, (local, events)) in comps.into_iter().zip(parts) {
        for (i, &v) in comp.iter().enumerate() {
            assignment[v] = local[i];
        }
        traces.push((comp, events));
    }
    Ok((assignment, traces))
}

fn finish(g: &OrientedGraph, target: TargetGraph, assignment: Vec<Vertex>, traces: Vec<(Vec<Vertex>, Vec<TraceEvent>)>) -> Result<ColoringResult> {
    let name = target.name();
    let map = ColorMap::new(assignment, name.clone());
    if let crate::digraph::HomCheck::Violation(a) = verify_homomorphism(g, &target.graph, &map)? {
        return Err(contradiction(format!("coloring into {name} violates arc {a}")));
    }
    Ok(ColoringResult {
        map,
        bound_claimed: target.order(),
        target,
        trace: traces
            .into_iter()
            .map(|(vertices, events)| ComponentTrace {
                vertices,
                target: name.clone(),
                events,
            })
            .collect(),
    })
}

/// A T_9-coloring of a graph of maximum degree at most 3.
pub fn color_deg3(g: &OrientedGraph) -> Result<ColoringResult> {
    if g.max_degree() > 3 {
        return Err(Error::Precondition(format!("maximum degree {} exceeds 3", g.max_degree())));
    }
    let qr7 = build_paley(7)?;
    let (assignment, traces) = per_component(g, |h, comp| {
        let (local, event) = deg3_component(h, &qr7)?;
        Ok((local, vec![globalize(event, comp)]))
    })?;
    finish(g, t9_target(), assignment, traces)
}

fn globalize(e: TraceEvent, comp: &[Vertex]) -> TraceEvent {
    match e {
        TraceEvent::Deg3Sources { sources } => TraceEvent::Deg3Sources {
            sources: sources.into_iter().map(|s| comp[s]).collect(),
        },
        TraceEvent::Deg3Regular { u, v, u1, u2, u_to_u2 } => TraceEvent::Deg3Regular {
            u: comp[u],
            v: comp[v],
            u1: comp[u1],
            u2: comp[u2],
            u_to_u2,
        },
        TraceEvent::RegularRepair { u, v, twins } => TraceEvent::RegularRepair {
            u: comp[u],
            v: comp[v],
            twins,
        },
        other => other,
    }
}

fn deg3_component(h: &OrientedGraph, qr7: &crate::paley::PaleyTournament) -> Result<(Vec<Vertex>, TraceEvent)> {
    let n = h.order();
    let sources = find_k_sources(h, 3);
    if !h.is_regular(3) || !sources.is_empty() {
        // 3-sources are pairwise non-adjacent; the rest is 2-degenerate
        let keep: Vec<Vertex> = (0..n).filter(|v| !sources.contains(v)).collect();
        let rest = h.induced(&keep);
        let m = qr7_oracle(&rest)?;
        let mut colors = vec![8; n];
        for (i, &v) in keep.iter().enumerate() {
            colors[v] = m.color(i);
        }
        return Ok((colors, TraceEvent::Deg3Sources { sources }));
    }

    // 3-regular, no 3-source: some vertex has out-degree exactly 2
    let v = (0..n)
        .find(|&x| h.out_degree(x) == 2)
        .ok_or_else(|| contradiction("3-regular component without 3-source has no out-degree-2 vertex"))?;
    let u = h.in_neighbors(v).first().expect("v has one in-neighbour");
    let u1 = h
        .in_neighbors(u)
        .first()
        .ok_or_else(|| contradiction("in-neighbour of an out-degree-2 vertex is a 3-source"))?;
    let u2 = h
        .neighbors(u)
        .iter()
        .find(|&w| w != v && w != u1)
        .expect("u has degree 3");
    let u_to_u2 = h.has_arc(u, u2);

    let mut rest = h.clone();
    rest.remove_arc(u, v);
    let mut phi = qr7_oracle(&rest)?.assignment;
    let (a, b) = (phi[u1], phi[u2]);
    let sigma: Permutation = if u_to_u2 {
        // u1 → u → u2 forces distinct colors
        if a == b {
            return Err(contradiction("u1 and u2 share a color across a directed path"));
        }
        if qr7.graph.has_arc(a, b) {
            qr7.map_arc_to_arc((a, b).into(), (1, 3).into())?
        } else {
            qr7.map_arc_to_arc((b, a).into(), (3, 0).into())?
        }
    } else if a == b {
        qr7.affine_automorphism(1, qr7.field.neg(a as u32))?
    } else if qr7.graph.has_arc(a, b) {
        qr7.map_arc_to_arc((a, b).into(), (0, 1).into())?
    } else {
        qr7.map_arc_to_arc((b, a).into(), (0, 1).into())?
    };
    for c in phi.iter_mut() {
        *c = sigma[*c];
    }
    phi[u] = 7;
    phi[v] = 8;
    Ok((
        phi,
        TraceEvent::Deg3Regular {
            u,
            v,
            u1,
            u2,
            u_to_u2,
        },
    ))
}

/// Adjacency lists for the shrinking working graph.
#[derive(Clone)]
struct Work {
    adj: Vec<Vec<(Vertex, bool)>>,
}

impl Work {
    fn from_graph(g: &OrientedGraph) -> Self {
        Work {
            adj: (0..g.order()).map(|v| g.oriented_neighbors(v)).collect(),
        }
    }

    fn empty(n: usize) -> Self {
        Work { adj: vec![Vec::new(); n] }
    }

    fn add_arc(&mut self, u: Vertex, w: Vertex, out: bool) {
        self.adj[u].push((w, out));
        self.adj[w].push((u, !out));
    }

    fn remove_arc(&mut self, u: Vertex, w: Vertex) {
        self.adj[u].retain(|&(x, _)| x != w);
        self.adj[w].retain(|&(x, _)| x != u);
    }

    fn adjacent(&self, a: Vertex, b: Vertex) -> Option<bool> {
        self.adj[a].iter().find(|&&(x, _)| x == b).map(|&(_, out)| out)
    }
}

enum Step {
    /// Arc between u and v1 removed; `out` when it was u→v1.
    ArcRemoved { u: Vertex, v1: Vertex, out: bool },
    /// u removed together with its arcs.
    VertexRemoved { u: Vertex, nbrs: Vec<(Vertex, bool)> },
}

/// Validates that `t` has P_{Δ−1,Δ−2} and C_{Δ−2,n(Δ−2)/(Δ−1)+1}.
pub fn check_target(t: &TargetGraph, delta: usize) -> Result<()> {
    if delta < 2 {
        return Err(Error::Precondition(format!("maximum degree {delta} is below 2")));
    }
    if let TargetKind::Tromp { p } = t.kind {
        if delta >= 4 {
            return match certified_properties(p, delta)? {
                Verdict::Certified(_) => Ok(()),
                Verdict::Uncertified { reason, .. } => Err(Error::Uncertified(reason)),
            };
        }
    }
    let n = t.order() as u128;
    let leaves = (2 * n).saturating_pow(delta as u32 - 1);
    if leaves > CUSTOM_CHECK_LIMIT {
        return Err(Error::Uncertified(format!(
            "{} is too large to validate P({},{}) exhaustively",
            t.name(),
            delta - 1,
            delta - 2
        )));
    }
    let p = check_pnk(t, delta - 1, delta - 2, PMode::Exhaustive)?;
    if !p.holds {
        return Err(Error::Uncertified(format!("{} lacks {}", t.name(), p)));
    }
    if delta >= 3 {
        let need = Ratio {
            num: t.order() as u64 * (delta as u64 - 2) + (delta as u64 - 1),
            den: delta as u64 - 1,
        };
        let c = check_cnk(t, delta - 2, 0)?;
        if c.achieved_min.is_some_and(|m| !need.le_int(m as u64)) {
            return Err(Error::Uncertified(format!("{} lacks C({},{need})", t.name(), delta - 2)));
        }
    }
    Ok(())
}

/// A `t`-coloring of a (Δ−1)-degenerate graph of maximum degree Δ.
pub fn color_degenerate(g: &OrientedGraph, t: &TargetGraph, delta: usize) -> Result<(ColorMap, DegenerateStats)> {
    check_target(t, delta)?;
    color_degenerate_unchecked(g, t, delta)
}

fn color_degenerate_unchecked(g: &OrientedGraph, t: &TargetGraph, delta: usize) -> Result<(ColorMap, DegenerateStats)> {
    let prof = degree_profile(g);
    if prof.max_degree > delta {
        return Err(Error::Precondition(format!(
            "maximum degree {} exceeds {delta}",
            prof.max_degree
        )));
    }
    if prof.degeneracy + 1 > delta {
        return Err(Error::Precondition(format!(
            "degeneracy {} exceeds {}",
            prof.degeneracy,
            delta - 1
        )));
    }
    let n = g.order();
    let tg = &t.graph;
    let mut stats = DegenerateStats::default();

    // Reduction: record steps until the graph is empty.
    let mut work = Work::from_graph(g);
    let mut queue: BTreeSet<(usize, Vertex)> = (0..n).map(|v| (work.adj[v].len(), v)).collect();
    let mut steps = Vec::with_capacity(n + g.arc_count());
    while let Some(&(d, u)) = queue.first() {
        let nbrs = work.adj[u].clone();
        let mut inner: Option<(Vertex, Vertex)> = None;
        for (i, &(a, _)) in nbrs.iter().enumerate() {
            for &(b, _) in &nbrs[i + 1..] {
                let arc = match work.adjacent(a, b) {
                    Some(true) => (a, b),
                    Some(false) => (b, a),
                    None => continue,
                };
                if inner.is_none_or(|cur| arc < cur) {
                    inner = Some(arc);
                }
            }
        }
        match inner {
            Some((v1, _)) => {
                let out = work.adjacent(u, v1).expect("v1 is a neighbour");
                queue.remove(&(d, u));
                queue.remove(&(work.adj[v1].len(), v1));
                work.remove_arc(u, v1);
                queue.insert((work.adj[u].len(), u));
                queue.insert((work.adj[v1].len(), v1));
                steps.push(Step::ArcRemoved { u, v1, out });
            }
            None => {
                queue.remove(&(d, u));
                for &(w, _) in &nbrs {
                    queue.remove(&(work.adj[w].len(), w));
                    work.remove_arc(u, w);
                    queue.insert((work.adj[w].len(), w));
                }
                steps.push(Step::VertexRemoved { u, nbrs });
            }
        }
    }

    // Reconstruction in reverse.
    let mut cur = Work::empty(n);
    let mut phi: Vec<Option<Vertex>> = vec![None; n];
    let constraints = |cur: &Work, phi: &[Option<Vertex>], x: Vertex| -> Vec<(Vertex, bool)> {
        cur.adj[x]
            .iter()
            .map(|&(w, out)| (phi[w].expect("neighbours are colored"), out))
            .collect()
    };
    let delta_m1 = delta as i64 - 1;
    for step in steps.into_iter().rev() {
        match step {
            Step::VertexRemoved { u, nbrs } => {
                let k = nbrs.len();
                let mut opts = Vec::with_capacity(k);
                let mut cand = BitSet::full(tg.order());
                for &(v, out) in &nbrs {
                    let o = options(tg, constraints(&cur, &phi, v));
                    // u→v needs φ(u) ∈ N^-(o) for some option o
                    let mut allowed = BitSet::new(tg.order());
                    for c in o.iter() {
                        allowed.union_with(if out { tg.in_neighbors(c) } else { tg.out_neighbors(c) });
                    }
                    cand.intersect_with(&allowed);
                    opts.push(o);
                }
                let size = cand.len();
                stats.case2 += 1;
                stats.min_candidates = Some(stats.min_candidates.map_or(size, |m| m.min(size)));
                let tn = tg.order() as i64;
                if (size as i64) * delta_m1 < tn * delta_m1 - k as i64 * (tn - delta_m1) {
                    stats.case2_short += 1;
                }
                let c = cand
                    .first()
                    .ok_or_else(|| contradiction(format!("no color left for removed vertex {u}")))?;
                phi[u] = Some(c);
                for (&(v, out), o) in nbrs.iter().zip(&opts) {
                    let fit = if out { tg.out_neighbors(c) } else { tg.in_neighbors(c) };
                    let pick = o
                        .iter()
                        .find(|&x| fit.contains(x))
                        .ok_or_else(|| contradiction(format!("no option of {v} fits the color of {u}")))?;
                    phi[v] = Some(pick);
                }
                for &(w, out) in &nbrs {
                    cur.add_arc(u, w, out);
                }
            }
            Step::ArcRemoved { u, v1, out } => {
                let o = options(tg, constraints(&cur, &phi, v1));
                // the sequence at u: v1 first, then u's other neighbours
                let others: Vec<(Vertex, bool)> = constraints(&cur, &phi, u);
                let mut seq: Vec<Vertex> = Vec::with_capacity(others.len() + 1);
                let mut alpha: Vec<Sign> = Vec::with_capacity(others.len() + 1);
                seq.push(0);
                alpha.push(sign(out));
                for &(c, o2) in &others {
                    seq.push(c);
                    alpha.push(sign(o2));
                }
                let mut chosen = None;
                let mut eliminated = 0;
                for c in o.iter() {
                    seq[0] = c;
                    if is_compatible(t, &seq, &alpha) {
                        if chosen.is_none() {
                            chosen = Some(c);
                        }
                    } else {
                        eliminated += 1;
                    }
                }
                stats.case1 += 1;
                if eliminated > others.len().saturating_sub(1) {
                    stats.case1_excess += 1;
                }
                let c = chosen.ok_or_else(|| contradiction(format!("no compatible option for {v1} next to {u}")))?;
                phi[v1] = Some(c);
                cur.add_arc(u, v1, out);
                let cu = options(tg, constraints(&cur, &phi, u))
                    .first()
                    .ok_or_else(|| contradiction(format!("no successor color for {u}")))?;
                phi[u] = Some(cu);
            }
        }
    }

    let map = ColorMap::new(phi.into_iter().map(|c| c.expect("every vertex colored")).collect(), t.name());
    if let crate::digraph::HomCheck::Violation(a) = verify_homomorphism(g, tg, &map)? {
        return Err(contradiction(format!("degenerate coloring violates arc {a}")));
    }
    Ok((map, stats))
}

/// Tr*(QR_p) for the corollary target of Δ, with Tr(QR_p) as a target too.
struct GeneralTarget {
    p: u64,
    star: TrStarGraph,
    tromp: TargetGraph,
}

impl GeneralTarget {
    fn new(delta: usize) -> Result<Self> {
        let p = select_target(delta)?;
        let star = build_tromp_star(p)?;
        let tromp = TargetGraph::from_tromp(&star.tromp, p);
        Ok(GeneralTarget { p, star, tromp })
    }
}

fn general_component(h: &OrientedGraph, delta: usize, gt: &GeneralTarget) -> Result<(Vec<Vertex>, Vec<TraceEvent>)> {
    if !h.is_regular(delta) {
        let (m, stats) = color_degenerate_unchecked(h, &gt.tromp, delta)?;
        return Ok((m.assignment, vec![TraceEvent::Degenerate(stats)]));
    }
    let a = h.arcs().next().expect("a regular component of positive degree has an arc");
    let (u, v) = (a.src, a.dst);
    let mut rest = h.clone();
    rest.remove_arc(u, v);
    let (m, stats) = color_degenerate_unchecked(&rest, &gt.tromp, delta)?;
    let mut phi = m.assignment;
    let tr = &gt.star.tromp;
    let apply = |phi: &mut Vec<Vertex>, s: &Permutation| {
        for c in phi.iter_mut() {
            *c = s[*c];
        }
    };

    let s1 = find_tromp_automorphism(tr, &[(phi[v], 0)])
        .ok_or_else(|| contradiction("Tromp graph is not vertex-transitive on this instance"))?;
    apply(&mut phi, &s1);
    let zero_p = tr.prime(0);
    let o = options(
        &tr.graph,
        rest.oriented_neighbors(u).into_iter().map(|(w, out)| (phi[w], out)),
    );
    let cu = o
        .iter()
        .find(|&c| c != 0 && c != zero_p)
        .ok_or_else(|| contradiction(format!("every option of {u} is 0 or 0'")))?;
    phi[u] = cu;
    let twins = !tr.graph.has_arc(cu, 0);
    if twins {
        // 0 → φ(u): move that arc to 0 → 1, then use t₁ → t₀
        let s2 = find_tromp_automorphism(tr, &[(0, 0), (cu, 1)])
            .ok_or_else(|| contradiction("Tromp graph is not arc-transitive on this instance"))?;
        apply(&mut phi, &s2);
        phi[u] = gt.star.t1;
        phi[v] = gt.star.t0;
    }
    Ok((phi, vec![TraceEvent::Degenerate(stats), TraceEvent::RegularRepair { u, v, twins }]))
}

/// A Tr*(QR_p)-coloring of a graph of maximum degree at most Δ, 4 ≤ Δ ≤ 7.
pub fn color_general(g: &OrientedGraph, delta: usize) -> Result<ColoringResult> {
    if !(4..=7).contains(&delta) {
        return Err(Error::Unsupported(format!(
            "maximum degree {delta}: certified targets exist only for 4 to 7"
        )));
    }
    if g.max_degree() > delta {
        return Err(Error::Precondition(format!("maximum degree {} exceeds {delta}", g.max_degree())));
    }
    let gt = GeneralTarget::new(delta)?;
    let (assignment, traces) = per_component(g, |h, comp| {
        let (local, events) = general_component(h, delta, &gt)?;
        Ok((local, events.into_iter().map(|e| globalize(e, comp)).collect()))
    })?;
    finish(g, gt.star.to_target(gt.p), assignment, traces)
}

/// The corollary target for maximum degree Δ: T_9 up to 3, Tr*(QR_p) for 4 to 7.
pub fn target_for_delta(delta: usize) -> Result<TargetGraph> {
    if delta <= 3 {
        Ok(t9_target())
    } else {
        let p = select_target(delta)?;
        Ok(build_tromp_star(p)?.to_target(p))
    }
}

/// A coloring where each component may use its own target.
#[derive(Clone, Debug)]
pub struct RoutedColoring {
    /// One entry per target, in order of first use.
    pub parts: Vec<ColoringResult>,
    /// `part_of[v]` indexes `parts`.
    pub part_of: Vec<usize>,
    /// `parts[part_of[v]]` colors v with `assignment[v]`.
    pub assignment: Vec<Vertex>,
}

impl RoutedColoring {
    /// The single result when every component shares one target.
    pub fn uniform(&self) -> Option<&ColoringResult> {
        (self.parts.len() == 1).then(|| &self.parts[0])
    }

    pub fn trace(&self) -> impl Iterator<Item = &ComponentTrace> {
        self.parts.iter().flat_map(|p| p.trace.iter())
    }
}

/// Colors `g` with the smallest certified target per component, or with
/// the single target for Δ when `uniform` is set. `delta` defaults to the
/// maximum degree of `g`.
pub fn color(g: &OrientedGraph, delta: Option<usize>, uniform: bool) -> Result<RoutedColoring> {
    let max = g.max_degree();
    let delta = delta.unwrap_or(max);
    if max > delta {
        return Err(Error::Precondition(format!("maximum degree {max} exceeds the requested {delta}")));
    }
    if delta > 7 {
        return Err(Error::Unsupported(format!(
            "maximum degree {delta}: certified targets exist only up to 7"
        )));
    }
    let single = |r: ColoringResult| RoutedColoring {
        part_of: vec![0; g.order()],
        assignment: r.map.assignment.clone(),
        parts: vec![r],
    };
    if uniform || delta <= 3 {
        return Ok(single(if delta <= 3 {
            color_deg3(g)?
        } else {
            color_general(g, delta)?
        }));
    }

    // group components by their own routing degree
    let comps = connected_components(g);
    let mut groups: BTreeMap<usize, Vec<Vertex>> = BTreeMap::new();
    for comp in &comps {
        let d = comp.iter().map(|&v| g.degree(v)).max().unwrap_or(0);
        let key = if d <= 3 { 3 } else { d };
        groups.entry(key).or_default().extend(comp.iter().copied());
    }
    if groups.len() == 1 {
        let d = *groups.keys().next().unwrap();
        return Ok(single(if d <= 3 { color_deg3(g)? } else { color_general(g, d)? }));
    }
    let mut out = RoutedColoring {
        parts: Vec::new(),
        part_of: vec![0; g.order()],
        assignment: vec![0; g.order()],
    };
    let mut order: Vec<(Vertex, usize)> = groups.iter().map(|(&d, vs)| (*vs.iter().min().unwrap(), d)).collect();
    order.sort_unstable();
    for (_, d) in order {
        let mut vs = groups[&d].clone();
        vs.sort_unstable();
        let h = g.induced(&vs);
        let mut r = if d <= 3 { color_deg3(&h)? } else { color_general(&h, d)? };
        let idx = out.parts.len();
        for (i, &v) in vs.iter().enumerate() {
            out.part_of[v] = idx;
            out.assignment[v] = r.map.color(i);
        }
        for tr in &mut r.trace {
            for x in tr.vertices.iter_mut() {
                *x = vs[*x];
            }
            for e in tr.events.iter_mut() {
                *e = globalize(e.clone(), &vs);
            }
        }
        out.parts.push(r);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generators::{generate, GenSpec, Model};
    use crate::tromp::tromp_target;

    fn verify(g: &OrientedGraph, r: &ColoringResult) {
        assert!(verify_homomorphism(g, &r.target.graph, &r.map).unwrap().is_ok());
        assert!(r.map.colors_used() <= r.bound_claimed);
    }

    #[test]
    fn deg3_examples() {
        let r = color_deg3(&OrientedGraph::new(0)).unwrap();
        assert!(r.map.assignment.is_empty());
        assert_eq!(r.bound_claimed, 9);

        let star = OrientedGraph::from_arcs(4, [(0, 1), (0, 2), (0, 3)]).unwrap();
        let r = color_deg3(&star).unwrap();
        verify(&star, &r);
        assert_eq!(r.map.color(0), 8);
        assert!(matches!(&r.trace[0].events[0], TraceEvent::Deg3Sources { sources } if sources == &vec![0]));
    }

    #[test]
    fn deg3_two_regular_components_share_t9() {
        let spec = GenSpec::new(Model::DisjointRegular, 20, 3, 4).no_sources(true);
        let g = generate(&spec).unwrap();
        let r = color_deg3(&g).unwrap();
        verify(&g, &r);
        assert_eq!(r.trace.len(), 2);
        for tr in &r.trace {
            assert!(matches!(tr.events[0], TraceEvent::Deg3Regular { .. }), "{tr}");
        }
    }

    #[test]
    fn deg3_random_regular() {
        for seed in 0..40 {
            let spec = GenSpec::new(Model::Regular, 16, 3, seed).no_sources(seed % 2 == 0);
            let g = generate(&spec).unwrap();
            verify(&g, &color_deg3(&g).unwrap());
        }
    }

    #[test]
    fn degenerate_examples() {
        let t = tromp_target(11).unwrap();
        let (m, _) = color_degenerate(&OrientedGraph::new(1), &t, 4).unwrap();
        assert_eq!(m.assignment, vec![0]);
        let arc = OrientedGraph::from_arcs(2, [(0, 1)]).unwrap();
        let (m, _) = color_degenerate(&arc, &t, 4).unwrap();
        assert!(t.graph.has_arc(m.color(0), m.color(1)));
        for seed in 0..20 {
            let g = generate(&GenSpec::new(Model::Degenerate, 60, 3, seed)).unwrap();
            let (m, stats) = color_degenerate(&g, &t, 4).unwrap();
            assert!(verify_homomorphism(&g, &t.graph, &m).unwrap().is_ok());
            assert_eq!((stats.case1_excess, stats.case2_short), (0, 0));
        }
    }

    #[test]
    fn degenerate_refuses_uncertified_target() {
        let t = tromp_target(7).unwrap();
        let g = OrientedGraph::from_arcs(2, [(0, 1)]).unwrap();
        assert!(matches!(color_degenerate(&g, &t, 4), Err(Error::Uncertified(_))));
        let qr3 = TargetGraph::from_paley(build_paley(3).unwrap());
        assert!(matches!(color_degenerate(&g, &qr3, 4), Err(Error::Uncertified(_))));
    }

    #[test]
    fn general_examples() {
        let spec = GenSpec::new(Model::DisjointRegular, 20, 4, 9);
        let g = generate(&spec).unwrap();
        let r = color_general(&g, 4).unwrap();
        verify(&g, &r);
        assert_eq!(r.bound_claimed, 26);
        assert_eq!(r.target.name(), "Tr*(QR11)");
        assert_eq!(r.trace.len(), 2);
        assert!(matches!(color_general(&g, 8), Err(Error::Unsupported(_))));
        assert!(matches!(color_general(&g, 3), Err(Error::Unsupported(_))));
    }

    #[test]
    fn general_random_regular_delta5() {
        for seed in 0..5 {
            let g = generate(&GenSpec::new(Model::Regular, 30, 5, seed)).unwrap();
            let r = color_general(&g, 5).unwrap();
            verify(&g, &r);
            assert_eq!(r.bound_claimed, 90);
        }
    }

    #[test]
    fn routing_per_component() {
        // a 4-regular component next to a directed triangle
        let g4 = generate(&GenSpec::new(Model::Regular, 10, 4, 2)).unwrap();
        let mut g = OrientedGraph::new(13);
        for a in g4.arcs() {
            g.add_arc(a.src, a.dst).unwrap();
        }
        for (a, b) in [(10, 11), (11, 12), (12, 10)] {
            g.add_arc(a, b).unwrap();
        }
        let r = color(&g, None, false).unwrap();
        assert_eq!(r.parts.len(), 2);
        assert!(r.uniform().is_none());
        assert_eq!(r.parts[0].target.name(), "Tr*(QR11)");
        assert_eq!(r.parts[1].target.name(), "T9");
        assert_eq!(r.part_of[11], 1);
        let r = color(&g, None, true).unwrap();
        let u = r.uniform().unwrap();
        verify(&g, u);
        assert!(matches!(color(&g, Some(3), false), Err(Error::Precondition(_))));
    }

    #[test]
    fn target_orders() {
        let orders: Vec<usize> = (3..=7).map(|d| target_for_delta(d).unwrap().order()).collect();
        assert_eq!(orders, vec![9, 26, 90, 306, 1322]);
    }
}
