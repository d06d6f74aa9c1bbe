//! Seeded random oriented graphs for property tests and end-to-end runs.
//!
//! All randomness comes from [`XorShift64Star`], a fixed portable generator:
//! the seed is expanded with one SplitMix64 step
//! (`z += 0x9E3779B97F4A7C15; z = (z ^ z>>30) * 0xBF58476D1CE4E5B9;
//! z = (z ^ z>>27) * 0x94D049BB133111EB; z ^= z>>31`), then each draw is
//! `x ^= x>>12; x ^= x<<25; x ^= x>>27; out = x * 0x2545F4914F6CDD1D`.
//! Bounded draws use the multiply-shift map `(out * n) >> 64`. Any
//! implementation following these constants reproduces the same instances.

use std::fmt;
use std::str::FromStr;

use crate::digraph::{
    connected_components, degree_profile, find_k_sources, has_source_adjacent_to_sink, OrientedGraph, Vertex,
};
use crate::error::{Error, Result};

#[derive(Clone, Debug)]
pub struct XorShift64Star {
    state: u64,
}

impl XorShift64Star {
    pub fn new(seed: u64) -> Self {
        let mut z = seed.wrapping_add(0x9E37_79B9_7F4A_7C15);
        z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
        z ^= z >> 31;
        XorShift64Star {
            state: if z == 0 { 0x9E37_79B9_7F4A_7C15 } else { z },
        }
    }

    pub fn next_u64(&mut self) -> u64 {
        let mut x = self.state;
        x ^= x >> 12;
        x ^= x << 25;
        x ^= x >> 27;
        self.state = x;
        x.wrapping_mul(0x2545_F491_4F6C_DD1D)
    }

    /// Uniform-ish draw from `0..n` (multiply-shift, no rejection).
    pub fn below(&mut self, n: usize) -> usize {
        ((self.next_u64() as u128 * n as u128) >> 64) as usize
    }

    pub fn coin(&mut self) -> bool {
        self.next_u64() >> 63 == 1
    }

    pub fn shuffle<T>(&mut self, xs: &mut [T]) {
        for i in (1..xs.len()).rev() {
            let j = self.below(i + 1);
            xs.swap(i, j);
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Model {
    /// Random arcs under a maximum-degree cap `param`.
    BoundedDegree,
    /// `param`-regular via the configuration model.
    Regular,
    /// Degeneracy ≤ `param` and maximum degree ≤ `param + 1`.
    Degenerate,
    /// A 2-degenerate base of maximum degree 3 plus `param` planted 3-sources.
    PlantedSources,
    /// `components` disjoint `param`-regular graphs of `n / components` vertices.
    DisjointRegular,
}

impl Model {
    pub const ALL: [Model; 5] = [
        Model::BoundedDegree,
        Model::Regular,
        Model::Degenerate,
        Model::PlantedSources,
        Model::DisjointRegular,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Model::BoundedDegree => "bounded-degree",
            Model::Regular => "d-regular",
            Model::Degenerate => "k-degenerate",
            Model::PlantedSources => "planted-3-sources",
            Model::DisjointRegular => "disjoint-regular-components",
        }
    }
}

impl fmt::Display for Model {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Model {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Model::ALL
            .into_iter()
            .find(|m| m.name() == s)
            .ok_or_else(|| Error::Precondition(format!("unknown model {s:?}")))
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GenSpec {
    pub model: Model,
    pub n: usize,
    pub param: usize,
    pub seed: u64,
    /// Number of components for [`Model::DisjointRegular`].
    pub components: usize,
    /// Regular models: no `param`-source. Degenerate model: no
    /// `(param+1)`-source adjacent to a `(param+1)`-sink.
    pub no_sources: bool,
}

impl GenSpec {
    pub fn new(model: Model, n: usize, param: usize, seed: u64) -> Self {
        GenSpec {
            model,
            n,
            param,
            seed,
            components: 2,
            no_sources: false,
        }
    }

    pub fn components(mut self, c: usize) -> Self {
        self.components = c;
        self
    }

    pub fn no_sources(mut self, on: bool) -> Self {
        self.no_sources = on;
        self
    }
}

const RESTARTS: usize = 200;

pub fn generate(spec: &GenSpec) -> Result<OrientedGraph> {
    let mut rng = XorShift64Star::new(spec.seed);
    let g = match spec.model {
        Model::BoundedDegree => bounded_degree(&mut rng, spec.n, spec.param),
        Model::Regular => {
            let mut g = regular(&mut rng, spec.n, spec.param)?;
            if spec.no_sources {
                remove_sources(&mut rng, &mut g, spec.param)?;
            }
            g
        }
        Model::Degenerate => {
            let mut g = degenerate(&mut rng, spec.n, spec.param);
            if spec.no_sources {
                break_source_sink(&mut g, spec.param + 1);
            }
            g
        }
        Model::PlantedSources => planted_sources(&mut rng, spec.n, spec.param)?,
        Model::DisjointRegular => {
            let c = spec.components;
            if c < 2 || !spec.n.is_multiple_of(c) {
                return Err(Error::Precondition(format!(
                    "{} vertices cannot be split into {c} equal components (need at least 2)",
                    spec.n
                )));
            }
            let size = spec.n / c;
            let mut g = OrientedGraph::new(spec.n);
            for i in 0..c {
                let mut part = regular(&mut rng, size, spec.param)?;
                if spec.no_sources {
                    remove_sources(&mut rng, &mut part, spec.param)?;
                }
                for a in part.arcs() {
                    g.add_arc(a.src + i * size, a.dst + i * size)?;
                }
            }
            g
        }
    };
    post_check(spec, &g)?;
    Ok(g)
}

fn post_check(spec: &GenSpec, g: &OrientedGraph) -> Result<()> {
    g.check_invariants()?;
    let ok = match spec.model {
        Model::BoundedDegree => g.max_degree() <= spec.param,
        Model::Regular => {
            g.is_regular(spec.param) && (!spec.no_sources || find_k_sources(g, spec.param).is_empty())
        }
        Model::Degenerate => {
            let p = degree_profile(g);
            p.degeneracy <= spec.param
                && p.max_degree <= spec.param + 1
                && (!spec.no_sources || !has_source_adjacent_to_sink(g, spec.param + 1))
        }
        Model::PlantedSources => g.max_degree() <= 3 && find_k_sources(g, 3).len() >= spec.param,
        Model::DisjointRegular => {
            g.is_regular(spec.param)
                && connected_components(g).len() >= spec.components
                && (!spec.no_sources || find_k_sources(g, spec.param).is_empty())
        }
    };
    if ok {
        Ok(())
    } else {
        Err(Error::Precondition(format!("generated graph violates the {} predicate", spec.model)))
    }
}

fn orient(rng: &mut XorShift64Star, g: &mut OrientedGraph, u: Vertex, v: Vertex) {
    let (a, b) = if rng.coin() { (u, v) } else { (v, u) };
    g.add_arc(a, b).expect("edge endpoints are fresh");
}

fn bounded_degree(rng: &mut XorShift64Star, n: usize, cap: usize) -> OrientedGraph {
    let mut g = OrientedGraph::new(n);
    if n < 2 {
        return g;
    }
    for _ in 0..n * cap * 2 {
        let (u, v) = (rng.below(n), rng.below(n));
        if u == v || g.adjacent(u, v) || g.degree(u) >= cap || g.degree(v) >= cap {
            continue;
        }
        g.add_arc(u, v).expect("checked above");
    }
    g
}

/// Configuration-model pairing with local rejection of loops and repeated
/// edges; restarts from scratch when the pairing gets stuck.
fn regular(rng: &mut XorShift64Star, n: usize, d: usize) -> Result<OrientedGraph> {
    if !(n * d).is_multiple_of(2) || (d > 0 && n <= d) {
        return Err(Error::Precondition(format!("no {d}-regular graph on {n} vertices")));
    }
    'restart: for _ in 0..RESTARTS {
        let mut stubs: Vec<Vertex> = (0..n).flat_map(|v| std::iter::repeat_n(v, d)).collect();
        let mut g = OrientedGraph::new(n);
        while !stubs.is_empty() {
            let mut paired = false;
            for _ in 0..64 {
                let i = rng.below(stubs.len());
                let j = rng.below(stubs.len());
                let (u, v) = (stubs[i], stubs[j]);
                if i == j || u == v || g.adjacent(u, v) {
                    continue;
                }
                let (hi, lo) = (i.max(j), i.min(j));
                stubs.swap_remove(hi);
                stubs.swap_remove(lo);
                orient(rng, &mut g, u, v);
                paired = true;
                break;
            }
            if !paired {
                continue 'restart;
            }
        }
        return Ok(g);
    }
    Err(Error::Precondition(format!("rejection budget exhausted for {d}-regular on {n}")))
}

/// Flips one outgoing arc of a `d`-source until none is left.
fn remove_sources(rng: &mut XorShift64Star, g: &mut OrientedGraph, d: usize) -> Result<()> {
    let cap = 100 * g.order().max(1);
    for _ in 0..cap {
        let sources = find_k_sources(g, d);
        let Some(&s) = sources.first() else {
            return Ok(());
        };
        let outs: Vec<Vertex> = g.out_neighbors(s).iter().collect();
        let w = outs[rng.below(outs.len())];
        g.remove_arc(s, w);
        g.add_arc(w, s)?;
    }
    Err(Error::Precondition(format!("could not remove all {d}-sources")))
}

/// Reverses every arc from a `k`-source into a `k`-sink.
/// Reverses one source-to-sink arc per offending source. Both endpoints
/// then have arcs in both directions, so no new source or sink appears.
fn break_source_sink(g: &mut OrientedGraph, k: usize) {
    for s in find_k_sources(g, k) {
        let hit = g
            .out_neighbors(s)
            .iter()
            .find(|&w| g.out_degree(w) == 0 && g.in_degree(w) == k);
        if let Some(w) = hit {
            g.remove_arc(s, w);
            g.add_arc(w, s).expect("arc was just removed");
        }
    }
}

/// Each new vertex attaches to at most `k` earlier vertices that still have
/// room under the cap `k + 1`.
fn degenerate(rng: &mut XorShift64Star, n: usize, k: usize) -> OrientedGraph {
    let mut g = OrientedGraph::new(n);
    for v in 1..n {
        let want = rng.below(k + 1);
        let mut got = 0;
        for _ in 0..4 * want + 8 {
            if got == want {
                break;
            }
            let w = rng.below(v);
            if g.adjacent(v, w) || g.degree(w) > k {
                continue;
            }
            orient(rng, &mut g, v, w);
            got += 1;
        }
    }
    g
}

fn planted_sources(rng: &mut XorShift64Star, n: usize, sources: usize) -> Result<OrientedGraph> {
    if sources > n {
        return Err(Error::Precondition("more planted sources than vertices".into()));
    }
    let base_n = n - sources;
    let mut base = degenerate(rng, base_n, 2);
    break_source_sink(&mut base, 3);
    let mut g = OrientedGraph::new(n);
    for a in base.arcs() {
        g.add_arc(a.src, a.dst)?;
    }
    for s in base_n..n {
        let mut room: Vec<Vertex> = (0..base_n).filter(|&w| g.degree(w) < 3).collect();
        if room.len() < 3 {
            return Err(Error::Precondition("base graph has no room for another 3-source".into()));
        }
        rng.shuffle(&mut room);
        for &w in &room[..3] {
            g.add_arc(s, w)?;
        }
    }
    Ok(g)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rng_is_portable() {
        let mut r = XorShift64Star::new(0);
        let first: Vec<u64> = (0..3).map(|_| r.next_u64()).collect();
        let mut r2 = XorShift64Star::new(0);
        assert_eq!(first, (0..3).map(|_| r2.next_u64()).collect::<Vec<_>>());
        assert_ne!(first[0], first[1]);
        let mut r = XorShift64Star::new(42);
        assert!((0..1000).all(|_| r.below(7) < 7));
    }

    #[test]
    fn regular_example() {
        let g = generate(&GenSpec::new(Model::Regular, 8, 3, 1)).unwrap();
        assert!(g.is_regular(3));
        assert_eq!(g.arc_count(), 12);
    }

    #[test]
    fn bounded_degree_example() {
        let g = generate(&GenSpec::new(Model::BoundedDegree, 100, 4, 7)).unwrap();
        assert!(g.max_degree() <= 4);
        assert!(g.arc_count() > 100);
    }

    #[test]
    fn disjoint_components_example() {
        let g = generate(&GenSpec::new(Model::DisjointRegular, 20, 4, 3)).unwrap();
        assert!(g.is_regular(4));
        let comps = connected_components(&g);
        assert!(comps.len() >= 2);
        assert!(comps.iter().all(|c| !c.iter().any(|&v| v < 10) || c.iter().all(|&v| v < 10)));
    }

    #[test]
    fn no_source_regular() {
        for seed in 0..20 {
            let g = generate(&GenSpec::new(Model::Regular, 200, 3, seed).no_sources(true)).unwrap();
            assert!(find_k_sources(&g, 3).is_empty());
        }
    }

    #[test]
    fn degenerate_and_planted() {
        for seed in 0..20 {
            let g = generate(&GenSpec::new(Model::Degenerate, 60, 2, seed).no_sources(true)).unwrap();
            assert!(degree_profile(&g).degeneracy <= 2 && g.max_degree() <= 3);
            assert!(!has_source_adjacent_to_sink(&g, 3));
            let g = generate(&GenSpec::new(Model::PlantedSources, 60, 4, seed)).unwrap();
            assert!(find_k_sources(&g, 3).len() >= 4);
        }
    }

    #[test]
    fn source_pointing_only_at_sinks() {
        // 3 -> {0, 4, 5}, all sinks; 1 and 2 also feed 0
        let mut g = OrientedGraph::from_arcs(9, [(1, 0), (2, 0), (3, 0), (3, 4), (3, 5), (1, 5), (1, 6), (2, 7), (2, 8), (6, 4), (7, 4), (8, 5)]).unwrap();
        assert!(has_source_adjacent_to_sink(&g, 3));
        break_source_sink(&mut g, 3);
        assert!(!has_source_adjacent_to_sink(&g, 3));
        assert_eq!(g.arc_count(), 12);
    }

    #[test]
    fn infeasible_specs() {
        assert!(generate(&GenSpec::new(Model::Regular, 7, 3, 0)).is_err());
        assert!(generate(&GenSpec::new(Model::Regular, 3, 3, 0)).is_err());
        assert!(generate(&GenSpec::new(Model::DisjointRegular, 21, 4, 0)).is_err());
    }

    #[test]
    fn deterministic_per_seed() {
        for m in Model::ALL {
            let spec = GenSpec::new(m, 40, 3, 99);
            assert_eq!(generate(&spec).unwrap(), generate(&spec).unwrap(), "{m}");
        }
    }
}
