//! Paley tournaments QR_q and their affine automorphisms x ↦ ax + b.

use crate::bitset::BitSet;
use crate::digraph::{Arc, OrientedGraph, Vertex};
use crate::error::{Error, Result};
use crate::field::{Elem, FieldSpec};

/// A vertex permutation: `perm[v]` is the image of `v`.
pub type Permutation = Vec<Vertex>;

#[derive(Clone, Debug)]
pub struct PaleyTournament {
    pub field: FieldSpec,
    pub graph: OrientedGraph,
    /// Non-zero squares of the field.
    pub residues: BitSet,
}

pub fn build_field(q: u64) -> Result<FieldSpec> {
    FieldSpec::new(q)
}

/// QR_q: arc u → v iff v − u is a non-zero square.
pub fn build_paley(q: u64) -> Result<PaleyTournament> {
    let field = FieldSpec::new(q)?;
    let n = field.order() as usize;
    let residues = BitSet::from_indices(n, field.nonzero_squares().into_iter().map(|x| x as usize));
    let mut graph = OrientedGraph::new(n);
    for u in 0..n {
        for r in residues.iter() {
            let v = field.add(u as Elem, r as Elem) as usize;
            graph.add_arc(u, v)?;
        }
    }
    debug_assert!(graph.is_tournament());
    Ok(PaleyTournament { field, graph, residues })
}

impl PaleyTournament {
    pub fn order(&self) -> usize {
        self.graph.order()
    }

    #[inline]
    pub fn is_residue(&self, x: Elem) -> bool {
        self.residues.contains(x as usize)
    }

    /// The smallest non-zero non-square.
    pub fn smallest_nonresidue(&self) -> Elem {
        (1..self.field.order())
            .find(|&x| !self.is_residue(x))
            .expect("a field of odd order has non-squares")
    }

    /// x ↦ a·x + b; `a` must be a non-zero square.
    pub fn affine_automorphism(&self, a: Elem, b: Elem) -> Result<Permutation> {
        let q = self.field.order();
        if b >= q || a >= q {
            return Err(Error::Precondition(format!("({a}, {b}) not field elements of GF({q})")));
        }
        if !self.is_residue(a) {
            return Err(Error::Precondition(format!(
                "multiplier {a} is not a non-zero square of GF({q})"
            )));
        }
        let perm: Permutation = (0..q)
            .map(|x| self.field.add(self.field.mul(a, x), b) as usize)
            .collect();
        debug_assert!(is_automorphism(&self.graph, &perm));
        Ok(perm)
    }

    /// The affine automorphism sending arc `from` onto arc `to`.
    pub fn map_arc_to_arc(&self, from: Arc, to: Arc) -> Result<Permutation> {
        for a in [from, to] {
            if a.src >= self.order() || a.dst >= self.order() || !self.graph.has_arc(a.src, a.dst) {
                return Err(Error::Precondition(format!("{a} is not an arc of QR_{}", self.order())));
            }
        }
        let f = &self.field;
        let (s1, d1, s2, d2) = (from.src as Elem, from.dst as Elem, to.src as Elem, to.dst as Elem);
        // a·s1 + b = s2 and a·d1 + b = d2
        let a = f
            .div(f.sub(d2, s2), f.sub(d1, s1))
            .expect("arc endpoints are distinct");
        let b = f.sub(s2, f.mul(a, s1));
        self.affine_automorphism(a, b)
    }

    /// x ↦ −x, an isomorphism onto the converse tournament.
    pub fn converse_map(&self) -> Permutation {
        let perm: Permutation = (0..self.field.order())
            .map(|x| self.field.neg(x) as usize)
            .collect();
        debug_assert!(reverses_all_arcs(&self.graph, &perm));
        perm
    }
}

pub fn is_automorphism(g: &OrientedGraph, perm: &[Vertex]) -> bool {
    if perm.len() != g.order() {
        return false;
    }
    let mut seen = vec![false; perm.len()];
    for &x in perm {
        if x >= perm.len() || std::mem::replace(&mut seen[x], true) {
            return false;
        }
    }
    g.arcs().all(|a| g.has_arc(perm[a.src], perm[a.dst]))
}

pub fn reverses_all_arcs(g: &OrientedGraph, perm: &[Vertex]) -> bool {
    g.arcs().all(|a| g.has_arc(perm[a.dst], perm[a.src]))
}

pub fn compose(outer: &[Vertex], inner: &[Vertex]) -> Permutation {
    inner.iter().map(|&x| outer[x]).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn qr7_arc_rule() {
        let t = build_paley(7).unwrap();
        for u in 0..7 {
            for v in 0..7 {
                let expect = [1, 2, 4].contains(&((v + 7 - u) % 7));
                assert_eq!(t.graph.has_arc(u, v), expect, "{u}->{v}");
            }
        }
        assert_eq!(t.graph.arc_count(), 21);
    }

    #[test]
    fn qr11_residues() {
        let t = build_paley(11).unwrap();
        let squares: std::collections::BTreeSet<usize> = (1..11usize).map(|x| x * x % 11).collect();
        assert_eq!(t.residues.iter().collect::<Vec<_>>(), squares.into_iter().collect::<Vec<_>>());
        assert_eq!(t.residues.iter().collect::<Vec<_>>(), vec![1, 3, 4, 5, 9]);
    }

    #[test]
    fn qr3_is_directed_triangle() {
        let t = build_paley(3).unwrap();
        let arcs: Vec<_> = t.graph.arcs().map(|a| (a.src, a.dst)).collect();
        assert_eq!(arcs, vec![(0, 1), (1, 2), (2, 0)]);
    }

    #[test]
    fn tournament_and_arc_count() {
        for q in [3u64, 7, 11, 19, 23, 27, 31, 43] {
            let t = build_paley(q).unwrap();
            assert!(t.graph.is_tournament());
            assert_eq!(t.graph.arc_count() as u64, q * (q - 1) / 2);
            t.graph.check_invariants().unwrap();
        }
        assert!(build_paley(9).is_err());
    }

    #[test]
    fn affine_examples() {
        let t = build_paley(7).unwrap();
        assert_eq!(t.affine_automorphism(1, 0).unwrap(), (0..7).collect::<Vec<_>>());
        let p = t.affine_automorphism(2, 0).unwrap();
        assert_eq!((p[0], p[1]), (0, 2));
        assert!(t.graph.has_arc(0, 2));
        assert!(t.affine_automorphism(3, 0).is_err());
    }

    #[test]
    fn arc_to_arc_examples() {
        let t = build_paley(7).unwrap();
        assert_eq!(t.map_arc_to_arc(Arc::new(0, 1), Arc::new(0, 1)).unwrap(), (0..7).collect::<Vec<_>>());
        let p = t.map_arc_to_arc(Arc::new(0, 1), Arc::new(1, 3)).unwrap();
        // a = 2, b = 1
        assert_eq!(p, (0..7).map(|x| (2 * x + 1) % 7).collect::<Vec<_>>());
        assert!(t.map_arc_to_arc(Arc::new(0, 1), Arc::new(1, 0)).is_err());
    }

    #[test]
    fn arc_transitivity_via_affine_maps() {
        for q in [7u64, 11, 27] {
            let t = build_paley(q).unwrap();
            let arcs: Vec<_> = t.graph.arcs().collect();
            for &to in &arcs {
                let p = t.map_arc_to_arc(Arc::new(0, 1), to).unwrap();
                assert_eq!((p[0], p[1]), (to.src, to.dst));
                assert!(is_automorphism(&t.graph, &p));
            }
        }
    }

    #[test]
    fn affine_outputs_closed_under_composition() {
        let t = build_paley(11).unwrap();
        let maps: Vec<_> = t
            .residues
            .iter()
            .flat_map(|a| (0..11).map(move |b| (a as Elem, b)))
            .map(|(a, b)| t.affine_automorphism(a, b).unwrap())
            .collect();
        for f in maps.iter().step_by(7) {
            for g in maps.iter().step_by(5) {
                let h = compose(f, g);
                assert!(maps.contains(&h));
            }
        }
    }

    #[test]
    fn converse_examples() {
        let t3 = build_paley(3).unwrap();
        assert_eq!(t3.converse_map(), vec![0, 2, 1]);
        let t7 = build_paley(7).unwrap();
        let c = t7.converse_map();
        assert_eq!((c[0], c[1]), (0, 6));
        assert!(t7.graph.has_arc(6, 0));
        for q in [3u64, 7, 11, 19, 23, 27, 31, 43] {
            let t = build_paley(q).unwrap();
            let c = t.converse_map();
            assert_eq!(c[0], 0);
            assert!(reverses_all_arcs(&t.graph, &c));
        }
    }
}
