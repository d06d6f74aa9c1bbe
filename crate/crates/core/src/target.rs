//! Target digraphs: an oriented graph plus the structure the coloring and
//! property code needs to know about it.

use std::fmt;

use crate::digraph::{OrientedGraph, Vertex};
use crate::paley::PaleyTournament;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum TargetKind {
    Paley { q: u64 },
    Tromp { p: u64 },
    TrompStar { p: u64 },
    T9,
    Custom,
}

impl fmt::Display for TargetKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TargetKind::Paley { q } => write!(f, "QR{q}"),
            TargetKind::Tromp { p } => write!(f, "Tr(QR{p})"),
            TargetKind::TrompStar { p } => write!(f, "Tr*(QR{p})"),
            TargetKind::T9 => write!(f, "T9"),
            TargetKind::Custom => write!(f, "custom"),
        }
    }
}

/// Distinguished vertices of Tromp-derived targets.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct Landmarks {
    pub infinity: Option<Vertex>,
    pub infinity_prime: Option<Vertex>,
    pub t0: Option<Vertex>,
    pub t1: Option<Vertex>,
}

#[derive(Clone, Debug)]
pub struct TargetGraph {
    pub kind: TargetKind,
    pub graph: OrientedGraph,
    /// `anti_twin[v]` is the unique non-neighbour partner of `v`, when `v`
    /// has one by construction.
    pub anti_twin: Vec<Option<Vertex>>,
    pub landmarks: Landmarks,
    /// Present for Paley targets; enables the symmetry-pruned searches.
    pub paley: Option<PaleyTournament>,
}

impl TargetGraph {
    pub fn custom(graph: OrientedGraph) -> Self {
        let n = graph.order();
        TargetGraph {
            kind: TargetKind::Custom,
            graph,
            anti_twin: vec![None; n],
            landmarks: Landmarks::default(),
            paley: None,
        }
    }

    pub fn from_paley(t: PaleyTournament) -> Self {
        let q = t.order();
        TargetGraph {
            kind: TargetKind::Paley { q: q as u64 },
            graph: t.graph.clone(),
            anti_twin: vec![None; q],
            landmarks: Landmarks::default(),
            paley: Some(t),
        }
    }

    pub fn name(&self) -> String {
        self.kind.to_string()
    }

    pub fn order(&self) -> usize {
        self.graph.order()
    }

    #[inline]
    pub fn anti_twin_of(&self, v: Vertex) -> Option<Vertex> {
        self.anti_twin[v]
    }

    pub fn has_anti_twins(&self) -> bool {
        self.anti_twin.iter().any(Option::is_some)
    }

    /// True when every vertex has an anti-twin (plain Tromp graphs).
    pub fn anti_twins_total(&self) -> bool {
        !self.anti_twin.is_empty() && self.anti_twin.iter().all(Option::is_some)
    }
}
