//! α-successors and the P_{n,k} / C_{n,k} properties of target graphs.
//!
//! P_{n,k}: every sequence of n vertices with a compatible orientation vector
//! has at least k α-successors. C_{n,k}: for every n-clique, the union of the
//! out-neighbourhoods and the union of the in-neighbourhoods both have at
//! least k vertices.
//!
//! The P search enumerates sequences depth-first while carrying the running
//! intersection of neighbourhood rows, so each leaf costs one masked popcount.
//! On Paley tournaments the symmetry-pruned mode fixes the first entry to
//! `(0, +1)` (translations and the converse map x ↦ −x), restricts the second
//! entry to `0`, `1` or the smallest non-residue (the multipliers x ↦ ax act
//! transitively on residues and on non-residues), and enumerates the
//! remaining entries as a multiset since the successor set ignores order.

use std::fmt;
use std::fs;
use std::path::{Path, PathBuf};
use std::sync::atomic::{AtomicUsize, Ordering};

use rayon::prelude::*;

use crate::bitset::BitSet;
use crate::digraph::{OrientedGraph, Vertex};
use crate::error::{Error, Result};
use crate::target::{TargetGraph, TargetKind};

mod certify;

pub use certify::*;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Sign {
    Plus,
    Minus,
}

impl Sign {
    pub fn flip(self) -> Sign {
        match self {
            Sign::Plus => Sign::Minus,
            Sign::Minus => Sign::Plus,
        }
    }

    /// `Plus` when the arc leaves the vertex being colored.
    pub fn from_out(out: bool) -> Sign {
        if out {
            Sign::Plus
        } else {
            Sign::Minus
        }
    }
}

impl fmt::Display for Sign {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Sign::Plus => "+",
            Sign::Minus => "-",
        })
    }
}

/// A sign vector α ∈ {−1, +1}^n.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct OrientationVector(pub Vec<Sign>);

impl OrientationVector {
    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

/// The row a successor of `v` under sign `s` must lie in.
#[inline]
fn successor_row(t: &OrientedGraph, v: Vertex, s: Sign) -> &BitSet {
    match s {
        Sign::Plus => t.in_neighbors(v),
        Sign::Minus => t.out_neighbors(v),
    }
}

/// Vertices u with u → v_i when α_i = +1 and v_i → u when α_i = −1.
pub fn alpha_successors(t: &OrientedGraph, seq: &[Vertex], alpha: &[Sign]) -> BitSet {
    assert_eq!(seq.len(), alpha.len(), "sequence and orientation vector differ in length");
    let mut s = BitSet::full(t.order());
    for (&v, &a) in seq.iter().zip(alpha) {
        s.intersect_with(successor_row(t, v, a));
    }
    s
}

/// Repeated vertices need equal signs; anti-twins need opposite signs.
pub fn is_compatible(t: &TargetGraph, seq: &[Vertex], alpha: &[Sign]) -> bool {
    assert_eq!(seq.len(), alpha.len(), "sequence and orientation vector differ in length");
    for j in 0..seq.len() {
        for i in 0..j {
            if seq[i] == seq[j] && alpha[i] != alpha[j] {
                return false;
            }
            if t.anti_twin_of(seq[j]) == Some(seq[i]) && alpha[i] == alpha[j] {
                return false;
            }
        }
    }
    true
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PropertyKind {
    P,
    C,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SearchMode {
    Exhaustive,
    SymmetryPruned,
    CertifiedByFormula,
}

impl fmt::Display for SearchMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            SearchMode::Exhaustive => "exhaustive",
            SearchMode::SymmetryPruned => "pruned",
            SearchMode::CertifiedByFormula => "certified",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PropertyReport {
    pub kind: PropertyKind,
    pub n: usize,
    pub k: usize,
    pub holds: bool,
    /// Minimum found; `None` when there is nothing to quantify over (for
    /// instance no n-clique exists). In certified mode this is the
    /// guaranteed lower bound, and after an early exit it is the count of
    /// the first failing witness.
    pub achieved_min: Option<usize>,
    pub witness: Vec<Vertex>,
    /// Orientation vector of the witness (P only).
    pub witness_alpha: Option<OrientationVector>,
    pub mode: SearchMode,
    /// False when the search stopped at the first failing witness.
    pub exact: bool,
}

impl PropertyReport {
    fn label(&self) -> String {
        let k = match self.kind {
            PropertyKind::P => "P",
            PropertyKind::C => "C",
        };
        format!("{k}({},{})", self.n, self.k)
    }

    fn witness_text(&self) -> String {
        match &self.witness_alpha {
            Some(alpha) => self
                .witness
                .iter()
                .zip(&alpha.0)
                .map(|(v, s)| format!("{v}{s}"))
                .collect::<Vec<_>>()
                .join(","),
            None => self.witness.iter().map(|v| v.to_string()).collect::<Vec<_>>().join(","),
        }
    }

    fn min_text(&self) -> String {
        match self.achieved_min {
            Some(m) => m.to_string(),
            None => "none".into(),
        }
    }

    /// Tab-separated form for scripts.
    pub fn porcelain(&self) -> String {
        format!(
            "{}\t{}\t{}\t{}\t{}\t{}\t{}\t{}",
            self.label().chars().next().unwrap(),
            self.n,
            self.k,
            if self.holds { "HOLDS" } else { "FAILS" },
            self.min_text(),
            self.witness_text(),
            self.mode,
            if self.exact { "exact" } else { "early-exit" }
        )
    }
}

impl fmt::Display for PropertyReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "PROPERTY {} {} min={} witness={} mode={}",
            self.label(),
            if self.holds { "HOLDS" } else { "FAILS" },
            self.min_text(),
            self.witness_text(),
            self.mode
        )?;
        if !self.exact {
            write!(f, " early-exit")?;
        }
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PMode {
    Exhaustive,
    Pruned,
}

/// Knobs for [`check_pnk_with`].
#[derive(Clone, Debug, Default)]
pub struct PnkOptions {
    /// Worker threads; 0 or 1 runs on the calling thread.
    pub jobs: usize,
    /// Stop at the first sequence with fewer than k successors.
    pub stop_at_failure: bool,
    /// Write a checkpoint file every `checkpoint_every` outer iterations.
    pub checkpoint: Option<PathBuf>,
    pub checkpoint_every: usize,
    /// Resume from an existing checkpoint file.
    pub resume: Option<PathBuf>,
}

/// An entry of a sequence: a vertex and its sign, packed as `2v + (sign == −)`.
type Code = usize;

#[inline]
fn decode(c: Code) -> (Vertex, Sign) {
    (c / 2, if c.is_multiple_of(2) { Sign::Plus } else { Sign::Minus })
}

#[inline]
fn encode(v: Vertex, s: Sign) -> Code {
    2 * v + (s == Sign::Minus) as usize
}

/// Best (minimum) leaf seen by a worker: count, then the codes.
#[derive(Clone, Debug)]
struct Best {
    count: usize,
    codes: Vec<Code>,
}

fn better(a: Option<Best>, b: Option<Best>) -> Option<Best> {
    match (a, b) {
        (None, x) | (x, None) => x,
        // earlier (a) wins ties: reduction order is enumeration order
        (Some(a), Some(b)) => Some(if b.count < a.count { b } else { a }),
    }
}

struct Searcher<'a> {
    t: &'a TargetGraph,
    n: usize,
    k: usize,
    rows: Vec<&'a BitSet>,
    stop_at_failure: bool,
    /// Multiset enumeration for positions ≥ this index (pruned mode).
    sorted_from: usize,
}

impl<'a> Searcher<'a> {
    fn new(t: &'a TargetGraph, n: usize, k: usize, stop_at_failure: bool, sorted_from: usize) -> Self {
        let g = &t.graph;
        let rows = (0..2 * g.order())
            .map(|c| {
                let (v, s) = decode(c);
                successor_row(g, v, s)
            })
            .collect();
        Searcher {
            t,
            n,
            k,
            rows,
            stop_at_failure,
            sorted_from,
        }
    }

    fn compatible_with(&self, prefix: &[Code], c: Code) -> bool {
        let (v, s) = decode(c);
        let at = self.t.anti_twin_of(v);
        prefix.iter().all(|&p| {
            let (w, r) = decode(p);
            !(w == v && r != s) && !(Some(w) == at && r == s)
        })
    }

    /// Depth-first over the remaining positions. `acc` is the intersection
    /// for `prefix`. Returns the minimum leaf in enumeration order.
    fn dfs(&self, prefix: &mut Vec<Code>, acc: &BitSet, cancel: &dyn Fn() -> bool) -> Option<Best> {
        let depth = prefix.len();
        if depth == self.n {
            return Some(Best {
                count: acc.len(),
                codes: prefix.clone(),
            });
        }
        let start = if depth >= self.sorted_from && depth > 0 && self.sorted_from < self.n {
            if depth > self.sorted_from {
                *prefix.last().unwrap()
            } else {
                0
            }
        } else {
            0
        };
        let total = self.rows.len();
        let mut best: Option<Best> = None;
        if depth + 1 == self.n {
            // leaf level: popcount only
            for c in start..total {
                if !self.compatible_with(prefix, c) {
                    continue;
                }
                let count = acc.intersection_len(self.rows[c]);
                if best.as_ref().is_none_or(|b| count < b.count) {
                    let mut codes = prefix.clone();
                    codes.push(c);
                    best = Some(Best { count, codes });
                    if self.stop_at_failure && count < self.k {
                        return best;
                    }
                }
            }
            return best;
        }
        let mut next = BitSet::new(acc.capacity());
        for c in start..total {
            if cancel() {
                return best;
            }
            if !self.compatible_with(prefix, c) {
                continue;
            }
            acc.intersection_into(self.rows[c], &mut next);
            prefix.push(c);
            let sub = self.dfs(prefix, &next, cancel);
            prefix.pop();
            best = better(best, sub);
            if self.stop_at_failure && best.as_ref().is_some_and(|b| b.count < self.k) {
                return best;
            }
        }
        best
    }
}

/// Outer work items: fixed prefixes whose subtrees are searched independently.
fn outer_prefixes(t: &TargetGraph, n: usize, mode: PMode) -> Result<Vec<Vec<Code>>> {
    let total = 2 * t.order();
    match mode {
        PMode::Exhaustive => {
            let mut out: Vec<Vec<Code>> = (0..total).map(|c| vec![c]).collect();
            if n >= 3 {
                // split one level deeper for load balance
                out = out
                    .into_iter()
                    .flat_map(|p| (0..total).map(move |c| vec![p[0], c]))
                    .collect();
            }
            Ok(out)
        }
        PMode::Pruned => {
            let paley = t.paley.as_ref().ok_or_else(|| {
                Error::Precondition("symmetry-pruned mode requires a Paley tournament target".into())
            })?;
            let first = encode(0, Sign::Plus);
            if n == 1 {
                return Ok(vec![vec![first]]);
            }
            let nr = paley.smallest_nonresidue() as usize;
            let seconds = [
                encode(0, Sign::Plus),
                encode(1, Sign::Plus),
                encode(1, Sign::Minus),
                encode(nr, Sign::Plus),
                encode(nr, Sign::Minus),
            ];
            let mut out: Vec<Vec<Code>> = seconds.iter().map(|&s| vec![first, s]).collect();
            if n >= 4 {
                out = out
                    .into_iter()
                    .flat_map(|p| (0..total).map(move |c| vec![p[0], p[1], c]))
                    .collect();
            }
            Ok(out)
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
struct Checkpoint {
    target: String,
    n: usize,
    k: usize,
    mode: String,
    next_outer: usize,
    best: Option<(usize, Vec<Code>)>,
}

impl Checkpoint {
    fn write(&self, path: &Path) -> Result<()> {
        let best = match &self.best {
            Some((c, codes)) => format!(
                "{c} {}",
                codes.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(",")
            ),
            None => "none".into(),
        };
        let body = format!(
            "# property search checkpoint\ntarget {}\nn {}\nk {}\nmode {}\nnext_outer {}\nbest {}\n",
            self.target, self.n, self.k, self.mode, self.next_outer, best
        );
        let tmp = path.with_extension("tmp");
        fs::write(&tmp, body)?;
        fs::rename(tmp, path)?;
        Ok(())
    }

    fn read(path: &Path) -> Result<Self> {
        let text = fs::read_to_string(path)?;
        let mut ck = Checkpoint {
            target: String::new(),
            n: 0,
            k: 0,
            mode: String::new(),
            next_outer: 0,
            best: None,
        };
        let bad = |line: usize, msg: &str| Error::Parse {
            line,
            msg: msg.to_string(),
        };
        for (i, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let (key, val) = line.split_once(' ').ok_or_else(|| bad(i + 1, "expected `key value`"))?;
            let num = |s: &str| s.parse::<usize>().map_err(|_| bad(i + 1, "expected an integer"));
            match key {
                "target" => ck.target = val.to_string(),
                "n" => ck.n = num(val)?,
                "k" => ck.k = num(val)?,
                "mode" => ck.mode = val.to_string(),
                "next_outer" => ck.next_outer = num(val)?,
                "best" if val == "none" => ck.best = None,
                "best" => {
                    let (c, codes) = val.split_once(' ').ok_or_else(|| bad(i + 1, "malformed best"))?;
                    let codes = codes.split(',').map(num).collect::<Result<Vec<_>>>()?;
                    ck.best = Some((num(c)?, codes));
                }
                _ => return Err(bad(i + 1, "unknown checkpoint key")),
            }
        }
        Ok(ck)
    }
}

pub fn check_pnk(t: &TargetGraph, n: usize, k: usize, mode: PMode) -> Result<PropertyReport> {
    check_pnk_with(t, n, k, mode, &PnkOptions::default())
}

/// P_{n,k} by exhaustive or symmetry-pruned enumeration.
pub fn check_pnk_with(t: &TargetGraph, n: usize, k: usize, mode: PMode, opts: &PnkOptions) -> Result<PropertyReport> {
    if n == 0 {
        return Err(Error::Precondition("P_{n,k} needs n ≥ 1".into()));
    }
    let outers = outer_prefixes(t, n, mode)?;
    let sorted_from = match mode {
        PMode::Exhaustive => n,
        PMode::Pruned => 2,
    };
    let searcher = Searcher::new(t, n, k, opts.stop_at_failure, sorted_from);
    let mode_name = match mode {
        PMode::Exhaustive => "exhaustive",
        PMode::Pruned => "pruned",
    };

    let mut start = 0;
    let mut best: Option<Best> = None;
    if let Some(path) = &opts.resume {
        let ck = Checkpoint::read(path)?;
        if ck.target != t.name() || ck.n != n || ck.k != k || ck.mode != mode_name {
            return Err(Error::Precondition(format!(
                "checkpoint {} belongs to a different search",
                path.display()
            )));
        }
        start = ck.next_outer;
        best = ck.best.map(|(count, codes)| Best { count, codes });
    }

    let run_block = |block: &[Vec<Code>], offset: usize| -> Option<Best> {
        // index of the earliest outer item known to fail; later items may stop
        let first_fail = AtomicUsize::new(usize::MAX);
        let eval = |(i, prefix): (usize, &Vec<Code>)| -> Option<(usize, Best)> {
            let idx = offset + i;
            if opts.stop_at_failure && first_fail.load(Ordering::Relaxed) < idx {
                return None;
            }
            // every prefix entry must be compatible with the ones before it
            for j in 1..prefix.len() {
                if !searcher.compatible_with(&prefix[..j], prefix[j]) {
                    return None;
                }
            }
            if prefix.len() > sorted_from
                && prefix[sorted_from..].windows(2).any(|w| w[0] > w[1]) {
                    return None;
                }
            let mut acc = BitSet::full(t.order());
            for &c in prefix.iter() {
                acc.intersect_with(searcher.rows[c]);
            }
            let cancel = || opts.stop_at_failure && first_fail.load(Ordering::Relaxed) < idx;
            let mut pre = prefix.clone();
            let res = if pre.len() == n {
                Some(Best {
                    count: acc.len(),
                    codes: pre,
                })
            } else {
                searcher.dfs(&mut pre, &acc, &cancel)
            };
            if let Some(b) = &res {
                if b.count < k {
                    first_fail.fetch_min(idx, Ordering::Relaxed);
                }
            }
            res.map(|b| (idx, b))
        };
        let mut results: Vec<(usize, Best)> = if opts.jobs > 1 {
            block.par_iter().enumerate().filter_map(eval).collect()
        } else {
            let mut out = Vec::new();
            for item in block.iter().enumerate() {
                if let Some(r) = eval(item) {
                    let failed = r.1.count < k;
                    out.push(r);
                    if opts.stop_at_failure && failed {
                        break;
                    }
                }
            }
            out
        };
        results.sort_by_key(|(i, _)| *i);
        let cut = if opts.stop_at_failure {
            first_fail.load(Ordering::Relaxed)
        } else {
            usize::MAX
        };
        results
            .into_iter()
            .filter(|(i, _)| *i <= cut)
            .map(|(_, b)| b)
            .fold(None, |acc, b| better(acc, Some(b)))
    };

    let pool = if opts.jobs > 1 {
        Some(
            rayon::ThreadPoolBuilder::new()
                .num_threads(opts.jobs)
                .build()
                .map_err(|e| Error::Precondition(format!("thread pool: {e}")))?,
        )
    } else {
        None
    };
    let block = if opts.checkpoint.is_some() && opts.checkpoint_every > 0 {
        opts.checkpoint_every
    } else {
        outers.len().max(1)
    };
    let mut pos = start.min(outers.len());
    while pos < outers.len() {
        if opts.stop_at_failure && best.as_ref().is_some_and(|b| b.count < k) {
            break;
        }
        let end = (pos + block).min(outers.len());
        let slice = &outers[pos..end];
        let res = match &pool {
            Some(p) => p.install(|| run_block(slice, pos)),
            None => run_block(slice, pos),
        };
        best = better(best, res);
        pos = end;
        if let Some(path) = &opts.checkpoint {
            Checkpoint {
                target: t.name(),
                n,
                k,
                mode: mode_name.into(),
                next_outer: pos,
                best: best.as_ref().map(|b| (b.count, b.codes.clone())),
            }
            .write(path)?;
        }
    }

    let exhausted = pos >= outers.len();
    let (achieved_min, witness, alpha) = match &best {
        Some(b) => {
            let (vs, ss): (Vec<_>, Vec<_>) = b.codes.iter().map(|&c| decode(c)).unzip();
            (Some(b.count), vs, Some(OrientationVector(ss)))
        }
        None => (None, Vec::new(), None),
    };
    let holds = achieved_min.is_none_or(|m| m >= k);
    Ok(PropertyReport {
        kind: PropertyKind::P,
        n,
        k,
        holds,
        achieved_min,
        witness,
        witness_alpha: alpha,
        mode: match mode {
            PMode::Exhaustive => SearchMode::Exhaustive,
            PMode::Pruned => SearchMode::SymmetryPruned,
        },
        exact: exhausted && !(opts.stop_at_failure && !holds),
    })
}

/// Default cap on the number of cliques [`check_cnk`] will enumerate.
pub const CLIQUE_BUDGET: u64 = 20_000_000;

/// C_{n,k} by enumerating all n-cliques (orientation ignored).
pub fn check_cnk(t: &TargetGraph, n: usize, k: usize) -> Result<PropertyReport> {
    check_cnk_budget(t, n, k, CLIQUE_BUDGET)
}

pub fn check_cnk_budget(t: &TargetGraph, n: usize, k: usize, budget: u64) -> Result<PropertyReport> {
    if n == 0 {
        return Err(Error::Precondition("C_{n,k} needs n ≥ 1".into()));
    }
    let g = &t.graph;
    let order = g.order();
    let nbr: Vec<BitSet> = (0..order).map(|v| g.neighbors(v)).collect();
    let symmetric = matches!(t.kind, TargetKind::Tromp { .. }) && t.anti_twins_total();

    struct Walk<'a> {
        g: &'a OrientedGraph,
        nbr: &'a [BitSet],
        n: usize,
        budget: u64,
        seen: u64,
        symmetric: bool,
        best: Option<(usize, Vec<Vertex>)>,
        asymmetry: Option<Vec<Vertex>>,
    }

    impl Walk<'_> {
        fn go(&mut self, clique: &mut Vec<Vertex>, cand: &BitSet, out_u: &BitSet, in_u: &BitSet) -> bool {
            if clique.len() == self.n {
                self.seen += 1;
                if self.seen > self.budget {
                    return false;
                }
                let (a, b) = (out_u.len(), in_u.len());
                if self.symmetric && a != b && self.asymmetry.is_none() {
                    self.asymmetry = Some(clique.clone());
                }
                let m = a.min(b);
                if self.best.as_ref().is_none_or(|(c, _)| m < *c) {
                    self.best = Some((m, clique.clone()));
                }
                return true;
            }
            for v in cand.iter() {
                let mut next = cand.clone();
                next.intersect_with(&self.nbr[v]);
                // keep only larger vertices so each clique is seen once
                for w in 0..=v {
                    next.remove(w);
                }
                let mut o = out_u.clone();
                o.union_with(self.g.out_neighbors(v));
                let mut i = in_u.clone();
                i.union_with(self.g.in_neighbors(v));
                clique.push(v);
                let ok = self.go(clique, &next, &o, &i);
                clique.pop();
                if !ok {
                    return false;
                }
            }
            true
        }
    }

    let mut walk = Walk {
        g,
        nbr: &nbr,
        n,
        budget,
        seen: 0,
        symmetric,
        best: None,
        asymmetry: None,
    };
    let empty = BitSet::new(order);
    if !walk.go(&mut Vec::new(), &BitSet::full(order), &empty, &empty) {
        return Err(Error::CliqueBudget(budget));
    }
    if let Some(c) = walk.asymmetry {
        return Err(Error::TheoremContradiction(format!(
            "out- and in-neighbourhood unions differ on clique {c:?} of {}",
            t.name()
        )));
    }
    let (achieved_min, witness) = match walk.best {
        Some((m, w)) => (Some(m), w),
        None => (None, Vec::new()),
    };
    Ok(PropertyReport {
        kind: PropertyKind::C,
        n,
        k,
        holds: achieved_min.is_none_or(|m| m >= k),
        achieved_min,
        witness,
        witness_alpha: None,
        mode: SearchMode::Exhaustive,
        exact: true,
    })
}

/// Transitive triangles x→y, y→z, x→z, each counted once via its arc x→y.
pub fn count_transitive_triangles(g: &OrientedGraph) -> usize {
    g.arcs()
        .map(|a| g.out_neighbors(a.src).intersection_len(g.out_neighbors(a.dst)))
        .sum()
}
