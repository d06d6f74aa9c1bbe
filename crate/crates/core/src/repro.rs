//! Batch jobs: the minimal-Paley table and the seeded color-and-verify corpus.

use std::fmt;
use std::time::{Duration, Instant};

use rayon::prelude::*;

use crate::colorer::{color, target_for_delta};
use crate::digraph::{verify_homomorphism, OrientedGraph};
use crate::error::{Error, Result};
use crate::generators::{generate, GenSpec, Model};
use crate::properties::{search_minimal_paley, MinimalSearch, SearchOptions};

/// Upper end of the scan for each P_{n,n} level.
pub fn prop4_q_max(level: usize) -> Option<u64> {
    match level {
        2 => Some(50),
        3 => Some(100),
        4 => Some(200),
        5 => Some(700),
        _ => None,
    }
}

/// For each level n, the smallest Paley tournament with P_{n,n}. Level 5
/// takes minutes and needs `long_running`.
pub fn reproduce_prop4(levels: &[usize], long_running: bool, opts: &SearchOptions) -> Result<Vec<MinimalSearch>> {
    let mut out = Vec::new();
    for &n in levels {
        let q_max = prop4_q_max(n)
            .ok_or_else(|| Error::Unsupported(format!("level {n}: only levels 2 to 5 are tabulated")))?;
        if n == 5 && !long_running {
            return Err(Error::Precondition(
                "level 5 scans up to QR_659 and takes minutes; pass the long-running flag".into(),
            ));
        }
        let mut o = opts.clone();
        o.leaf_budget = o.leaf_budget.max(if n == 5 { 4_000_000_000 } else { 100_000_000 });
        out.push(search_minimal_paley(n, n, q_max, true, &o)?);
    }
    Ok(out)
}

/// One table line: `P(n,n): q=...` plus the orders that failed on the way.
pub fn prop4_line(s: &MinimalSearch) -> String {
    let failed: Vec<String> = s
        .rows
        .iter()
        .filter(|(_, r)| !r.holds)
        .map(|(q, _)| q.to_string())
        .collect();
    let head = match (s.first, s.truncated_at) {
        (Some(q), _) => format!("P({},{}): q={q}", s.n, s.k),
        (None, Some(q)) => format!("P({},{}): TRUNCATED at q={q}", s.n, s.k),
        (None, None) => format!("P({},{}): none", s.n, s.k),
    };
    if failed.is_empty() {
        head
    } else {
        format!("{head} (fails: {})", failed.join(","))
    }
}

/// The instance mix for a maximum degree.
pub fn corpus_spec(delta: usize, index: usize, base_seed: u64, n: usize) -> GenSpec {
    let seed = base_seed.wrapping_add(index as u64);
    // regular models need an even number of stubs and two equal halves
    let even = n - n % 2;
    let halves = even - even % 4;
    if delta <= 3 {
        match index % 5 {
            0 => GenSpec::new(Model::Degenerate, n, 2, seed),
            1 => GenSpec::new(Model::PlantedSources, n, 1 + index % 4, seed),
            2 => GenSpec::new(Model::Regular, even, 3, seed).no_sources(true),
            3 => GenSpec::new(Model::DisjointRegular, halves, 3, seed).no_sources(true),
            _ => GenSpec::new(Model::BoundedDegree, n, 3, seed),
        }
    } else {
        let even = if (n * delta).is_multiple_of(2) { n } else { n + 1 };
        let halves = even + (4 * delta - even % (4 * delta)) % (4 * delta);
        match index % 4 {
            0 => GenSpec::new(Model::Regular, even, delta, seed),
            1 => GenSpec::new(Model::Degenerate, n, delta - 1, seed),
            2 => GenSpec::new(Model::DisjointRegular, halves, delta, seed),
            _ => GenSpec::new(Model::BoundedDegree, n, delta, seed),
        }
    }
}

#[derive(Clone, Debug)]
pub struct E2eFailure {
    pub spec: GenSpec,
    pub graph: Option<OrientedGraph>,
    pub error: String,
}

#[derive(Clone, Debug)]
pub struct E2eSummary {
    pub delta: usize,
    pub target: String,
    pub bound: usize,
    pub instances: usize,
    pub verified: usize,
    pub max_colors_used: usize,
    pub failures: Vec<E2eFailure>,
    pub elapsed: Duration,
}

impl E2eSummary {
    pub fn all_passed(&self) -> bool {
        self.verified == self.instances && self.failures.is_empty()
    }
}

impl fmt::Display for E2eSummary {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "E2E delta={} target={} bound={} verified={}/{} max_colors={} time={:.1}s",
            self.delta,
            self.target,
            self.bound,
            self.verified,
            self.instances,
            self.max_colors_used,
            self.elapsed.as_secs_f64()
        )
    }
}

/// Generates `count` instances for Δ, colors each into the single target for
/// Δ and verifies the result.
pub fn end_to_end(delta: usize, count: usize, base_seed: u64, n: usize, jobs: usize) -> Result<E2eSummary> {
    let start = Instant::now();
    let target = target_for_delta(delta)?;
    let run = |i: usize| -> std::result::Result<usize, E2eFailure> {
        let spec = corpus_spec(delta, i, base_seed, n);
        let fail = |graph: Option<OrientedGraph>, error: String| E2eFailure {
            spec: spec.clone(),
            graph,
            error,
        };
        let g = generate(&spec).map_err(|e| fail(None, e.to_string()))?;
        let r = color(&g, Some(delta), true).map_err(|e| fail(Some(g.clone()), e.to_string()))?;
        let res = r.uniform().expect("uniform routing yields one target");
        if res.target.name() != target.name() {
            return Err(fail(Some(g), format!("colored into {} instead of {}", res.target.name(), target.name())));
        }
        match verify_homomorphism(&g, &target.graph, &res.map) {
            Ok(h) if h.is_ok() => Ok(res.map.colors_used()),
            Ok(h) => Err(fail(Some(g), format!("{h:?}"))),
            Err(e) => Err(fail(Some(g), e.to_string())),
        }
    };
    let results: Vec<_> = if jobs > 1 {
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(jobs)
            .build()
            .map_err(|e| Error::Precondition(format!("thread pool: {e}")))?;
        pool.install(|| (0..count).into_par_iter().map(run).collect())
    } else {
        (0..count).map(run).collect()
    };
    let mut s = E2eSummary {
        delta,
        target: target.name(),
        bound: target.order(),
        instances: count,
        verified: 0,
        max_colors_used: 0,
        failures: Vec::new(),
        elapsed: Duration::ZERO,
    };
    for r in results {
        match r {
            Ok(c) => {
                s.verified += 1;
                s.max_colors_used = s.max_colors_used.max(c);
            }
            Err(f) => s.failures.push(f),
        }
    }
    s.elapsed = start.elapsed();
    Ok(s)
}
