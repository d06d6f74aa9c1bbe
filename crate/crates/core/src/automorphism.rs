//! Backtracking search for an automorphism extending a partial vertex map.
//!
//! Each unmapped vertex keeps a domain of admissible images. Mapping `x ↦ c`
//! restricts every other domain to the out-, in- or non-neighbourhood of `c`
//! matching the relation of that vertex to `x`; singleton domains are mapped
//! immediately. Vertices with the same relations to everything mapped share
//! a domain, and the size of that class must equal the size of its domain.

use std::collections::HashMap;

use crate::bitset::BitSet;
use crate::digraph::{OrientedGraph, Vertex};
use crate::paley::{is_automorphism, Permutation};

const NODE_LIMIT: u64 = 1 << 22;

struct Rows {
    non_adj: Vec<BitSet>,
}

impl Rows {
    fn new(g: &OrientedGraph) -> Self {
        let n = g.order();
        let non_adj = (0..n)
            .map(|v| {
                let mut s = BitSet::full(n);
                s.difference_with(g.out_neighbors(v));
                s.difference_with(g.in_neighbors(v));
                s.remove(v);
                s
            })
            .collect();
        Rows { non_adj }
    }
}

#[derive(Clone)]
struct State {
    image: Vec<Option<Vertex>>,
    domain: Vec<BitSet>,
    mapped: usize,
}

/// Maps `x ↦ c` and propagates to a fixpoint. Returns `false` on a wipe-out.
fn assign(g: &OrientedGraph, rows: &Rows, st: &mut State, x: Vertex, c: Vertex) -> bool {
    let n = g.order();
    let mut queue = vec![(x, c)];
    while let Some((x, c)) = queue.pop() {
        match st.image[x] {
            Some(prev) if prev == c => continue,
            Some(_) => return false,
            None => {}
        }
        if !st.domain[x].contains(c) {
            return false;
        }
        st.image[x] = Some(c);
        st.mapped += 1;
        for y in 0..n {
            if y == x || st.image[y].is_some() {
                continue;
            }
            let row = if g.out_neighbors(x).contains(y) {
                g.out_neighbors(c)
            } else if g.in_neighbors(x).contains(y) {
                g.in_neighbors(c)
            } else {
                &rows.non_adj[c]
            };
            let d = &mut st.domain[y];
            d.intersect_with(row);
            match d.len() {
                0 => return false,
                1 => queue.push((y, d.first().unwrap())),
                _ => {}
            }
        }
    }
    true
}

/// Unmapped vertices with equal domains must be matched onto that domain,
/// so each such class needs exactly as many members as its domain has
/// values. This catches a wrong guess long before a domain runs empty.
fn classes_fit(st: &State) -> bool {
    let mut classes: HashMap<&[u64], usize> = HashMap::new();
    for (v, d) in st.domain.iter().enumerate() {
        if st.image[v].is_none() {
            *classes.entry(d.words()).or_default() += 1;
        }
    }
    let mut seen = 0;
    for (v, d) in st.domain.iter().enumerate() {
        if st.image[v].is_some() {
            continue;
        }
        match classes.remove(d.words()) {
            Some(members) if members != d.len() => return false,
            Some(members) => seen += members,
            None => {}
        }
    }
    debug_assert_eq!(seen, st.image.iter().filter(|c| c.is_none()).count());
    true
}

/// Finds an automorphism `σ` of `g` with `σ(v) = img` for every pin. Values
/// are tried fixed-point first, then ascending, so an empty pin list yields
/// the identity.
pub fn extend_automorphism(g: &OrientedGraph, pins: &[(Vertex, Vertex)]) -> Option<Permutation> {
    let n = g.order();
    if pins.iter().any(|&(v, c)| v >= n || c >= n) {
        return None;
    }
    let rows = Rows::new(g);
    // degree classes are preserved
    let domain = (0..n)
        .map(|v| {
            BitSet::from_indices(
                n,
                (0..n).filter(|&c| {
                    g.out_degree(c) == g.out_degree(v) && g.in_degree(c) == g.in_degree(v)
                }),
            )
        })
        .collect();
    let mut root = State {
        image: vec![None; n],
        domain,
        mapped: 0,
    };
    for &(v, c) in pins {
        if !assign(g, &rows, &mut root, v, c) {
            return None;
        }
    }
    if !classes_fit(&root) {
        return None;
    }

    struct Frame {
        saved: State,
        var: Vertex,
        values: Vec<Vertex>,
        next: usize,
    }

    let pick = |st: &State| -> Option<(Vertex, Vec<Vertex>)> {
        let var = (0..n)
            .filter(|&v| st.image[v].is_none())
            .min_by_key(|&v| (st.domain[v].len(), v))?;
        let mut values: Vec<Vertex> = st.domain[var].iter().collect();
        if let Some(pos) = values.iter().position(|&c| c == var) {
            values.remove(pos);
            values.insert(0, var);
        }
        Some((var, values))
    };

    let mut stack: Vec<Frame> = Vec::new();
    let mut current = root;
    let mut nodes = 0u64;
    loop {
        if current.mapped == n {
            let perm: Permutation = current.image.iter().map(|c| c.unwrap()).collect();
            debug_assert!(is_automorphism(g, &perm));
            return is_automorphism(g, &perm).then_some(perm);
        }
        let (var, values) = pick(&current).expect("unmapped vertex exists");
        stack.push(Frame {
            saved: current.clone(),
            var,
            values,
            next: 0,
        });
        // advance to the next consistent child, backtracking as needed
        loop {
            let frame = stack.last_mut()?;
            if frame.next >= frame.values.len() {
                stack.pop();
                continue;
            }
            let c = frame.values[frame.next];
            frame.next += 1;
            nodes += 1;
            if nodes > NODE_LIMIT {
                return None;
            }
            let mut st = frame.saved.clone();
            if assign(g, &rows, &mut st, frame.var, c) && classes_fit(&st) {
                current = st;
                break;
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::paley::build_paley;

    #[test]
    fn identity_without_pins() {
        let g = build_paley(11).unwrap().graph;
        assert_eq!(extend_automorphism(&g, &[]).unwrap(), (0..11).collect::<Vec<_>>());
    }

    #[test]
    fn paley_pins() {
        let g = build_paley(7).unwrap().graph;
        let s = extend_automorphism(&g, &[(0, 1), (1, 3)]).unwrap();
        assert_eq!(s, (0..7).map(|x| (2 * x + 1) % 7).collect::<Vec<_>>());
        // 0->1 cannot go to the non-arc pair (1, 0)
        assert!(extend_automorphism(&g, &[(0, 1), (1, 0)]).is_none());
    }

    #[test]
    fn rigid_path_has_only_identity() {
        let g = OrientedGraph::from_arcs(3, [(0, 1), (1, 2)]).unwrap();
        assert!(extend_automorphism(&g, &[(0, 1)]).is_none());
        assert!(extend_automorphism(&g, &[(0, 0)]).is_some());
    }
}
