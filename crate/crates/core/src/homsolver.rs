//! Complete backtracking search for digraph homomorphisms.
//!
//! Each source vertex keeps a domain of admissible target vertices. After
//! every assignment the domains are made arc consistent (a value survives
//! only if each neighbour still has a value joined to it by a correctly
//! oriented arc); a wipe-out backtracks. Weak components are solved
//! independently.

use crate::bitset::BitSet;
use crate::digraph::{
    connected_components, degree_profile, has_source_adjacent_to_sink, verify_homomorphism, ColorMap, OrientedGraph,
    Vertex,
};
use crate::error::{Error, Result};
use crate::paley::build_paley;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum VarOrder {
    /// Reverse elimination order: each vertex has few assigned neighbours
    /// when its turn comes. Static, so it can thrash on sparse graphs.
    Degeneracy,
    /// Smallest remaining domain first, lowest index on ties.
    #[default]
    MinRemaining,
}

#[derive(Clone, Debug, Default)]
pub struct SolverConfig {
    pub order: VarOrder,
    /// Maximum number of assignments tried, across all components.
    pub node_budget: Option<u64>,
    pub pins: Vec<(Vertex, Vertex)>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Outcome {
    Found(ColorMap),
    /// The search was complete and found nothing.
    Unsat,
    BudgetExhausted { nodes: u64 },
}

impl Outcome {
    pub fn map(self) -> Option<ColorMap> {
        match self {
            Outcome::Found(m) => Some(m),
            _ => None,
        }
    }
}

/// Fixes `v ↦ c` and restores arc consistency: every remaining value of a
/// vertex keeps a compatible value at each neighbour. Changed domains are
/// pushed to `trail` before they shrink. Returns the first vertex whose
/// domain empties.
fn propagate(
    g: &OrientedGraph,
    t: &OrientedGraph,
    domain: &mut [BitSet],
    v: Vertex,
    c: Vertex,
    trail: &mut Vec<(Vertex, BitSet)>,
) -> std::result::Result<(), Vertex> {
    let m = t.order();
    if domain[v].len() != 1 || !domain[v].contains(c) {
        trail.push((v, domain[v].clone()));
        domain[v] = BitSet::from_indices(m, [c]);
    }
    let mut queue = vec![v];
    let mut support = BitSet::new(m);
    while let Some(w) = queue.pop() {
        for (row_g, out) in [(g.out_neighbors(w), true), (g.in_neighbors(w), false)] {
            if row_g.is_empty() {
                continue;
            }
            // values x may take given the arc w→x (or x→w)
            support.clear();
            for d in domain[w].iter() {
                support.union_with(if out { t.out_neighbors(d) } else { t.in_neighbors(d) });
            }
            for x in row_g.iter() {
                if domain[x].is_subset(&support) {
                    continue;
                }
                trail.push((x, domain[x].clone()));
                domain[x].intersect_with(&support);
                if domain[x].is_empty() {
                    return Err(x);
                }
                if !queue.contains(&x) {
                    queue.push(x);
                }
            }
        }
    }
    Ok(())
}

enum Component {
    Found,
    Unsat,
    Budget,
}

struct Search<'a> {
    g: &'a OrientedGraph,
    t: &'a OrientedGraph,
    domain: Vec<BitSet>,
    assigned: Vec<Option<Vertex>>,
    nodes: u64,
    budget: Option<u64>,
}

impl Search<'_> {
    fn pick(&self, vars: &[Vertex], order: VarOrder, depth: usize) -> Vertex {
        match order {
            VarOrder::Degeneracy => vars[depth],
            VarOrder::MinRemaining => *vars
                .iter()
                .filter(|&&v| self.assigned[v].is_none())
                .min_by_key(|&&v| (self.domain[v].len(), v))
                .expect("an unassigned vertex remains"),
        }
    }

    /// Solves the vertices in `vars` (one component, pinned ones already set).
    fn run(&mut self, vars: &[Vertex], order: VarOrder) -> Component {
        struct Frame {
            var: Vertex,
            values: Vec<Vertex>,
            next: usize,
            trail_len: usize,
        }
        let free: Vec<Vertex> = vars.iter().copied().filter(|&v| self.assigned[v].is_none()).collect();
        if free.is_empty() {
            return Component::Found;
        }
        let mut trail: Vec<(Vertex, BitSet)> = Vec::new();
        let mut stack: Vec<Frame> = Vec::new();
        let open = |s: &Self, depth: usize| {
            let var = s.pick(&free, order, depth);
            Frame {
                var,
                values: s.domain[var].iter().collect(),
                next: 0,
                trail_len: 0,
            }
        };
        stack.push(open(self, 0));
        loop {
            let Some(frame) = stack.last_mut() else {
                return Component::Unsat;
            };
            // undo the previous value of this frame
            if frame.next > 0 {
                self.assigned[frame.var] = None;
                while trail.len() > frame.trail_len {
                    let (w, d) = trail.pop().unwrap();
                    self.domain[w] = d;
                }
            }
            if frame.next >= frame.values.len() {
                stack.pop();
                continue;
            }
            let (var, c) = (frame.var, frame.values[frame.next]);
            frame.next += 1;
            frame.trail_len = trail.len();
            self.nodes += 1;
            if self.budget.is_some_and(|b| self.nodes > b) {
                return Component::Budget;
            }
            self.assigned[var] = Some(c);
            if propagate(self.g, self.t, &mut self.domain, var, c, &mut trail).is_err() {
                continue;
            }
            if stack.len() == free.len() {
                return Component::Found;
            }
            let next = open(self, stack.len());
            stack.push(next);
        }
    }
}

/// Searches for a homomorphism `g → t`. Deterministic for a fixed config.
pub fn solve(g: &OrientedGraph, t: &OrientedGraph, cfg: &SolverConfig) -> Result<Outcome> {
    let n = g.order();
    let m = t.order();
    let mut s = Search {
        g,
        t,
        domain: vec![BitSet::full(m); n],
        assigned: vec![None; n],
        nodes: 0,
        budget: cfg.node_budget,
    };
    let mut scratch = Vec::new();
    for &(v, c) in &cfg.pins {
        if v >= n || c >= m {
            return Err(Error::Precondition(format!("pin {v}={c} is out of range")));
        }
        match s.assigned[v] {
            Some(prev) if prev != c => return Ok(Outcome::Unsat),
            Some(_) => continue,
            None => {}
        }
        if !s.domain[v].contains(c) {
            return Ok(Outcome::Unsat);
        }
        s.assigned[v] = Some(c);
        if propagate(g, t, &mut s.domain, v, c, &mut scratch).is_err() {
            return Ok(Outcome::Unsat);
        }
    }
    for comp in connected_components(g) {
        let vars = match cfg.order {
            VarOrder::Degeneracy => {
                let sub = g.induced(&comp);
                let mut order: Vec<Vertex> = degree_profile(&sub).elimination_order.iter().map(|&i| comp[i]).collect();
                order.reverse();
                order
            }
            VarOrder::MinRemaining => comp,
        };
        match s.run(&vars, cfg.order) {
            Component::Found => {}
            Component::Unsat => return Ok(Outcome::Unsat),
            Component::Budget => return Ok(Outcome::BudgetExhausted { nodes: s.nodes - 1 }),
        }
    }
    let map = ColorMap::new(s.assigned.iter().map(|c| c.expect("all vertices assigned")).collect(), "");
    assert!(verify_homomorphism(g, t, &map)?.is_ok(), "solver returned a non-homomorphism");
    Ok(Outcome::Found(map))
}

/// A QR_7-coloring of a 2-degenerate graph of maximum degree at most 3 with
/// no 3-source adjacent to a 3-sink. Such a coloring always exists, so a
/// failed search is reported as a contradiction.
pub fn qr7_oracle(g: &OrientedGraph) -> Result<ColorMap> {
    let prof = degree_profile(g);
    if prof.max_degree > 3 {
        return Err(Error::Precondition(format!("maximum degree {} exceeds 3", prof.max_degree)));
    }
    if prof.degeneracy > 2 {
        return Err(Error::Precondition(format!("degeneracy {} exceeds 2", prof.degeneracy)));
    }
    if has_source_adjacent_to_sink(g, 3) {
        return Err(Error::Precondition("a 3-source is adjacent to a 3-sink".into()));
    }
    let qr7 = build_paley(7)?.graph;
    match solve(g, &qr7, &SolverConfig::default())? {
        Outcome::Found(mut m) => {
            m.target_id = "QR7".into();
            Ok(m)
        }
        other => Err(Error::TheoremContradiction(format!(
            "no QR7-coloring found for a graph meeting every precondition ({other:?})"
        ))),
    }
}
