//! Property derivations for Tr(QR_p) without brute force, and the scan for
//! the smallest Paley tournament with P_{n,k}.

use std::fmt;
use std::path::PathBuf;

use crate::error::{Error, Result};
use crate::field::prime_power;
use crate::paley::build_paley;
use crate::target::TargetGraph;

use super::{check_pnk_with, PMode, PnkOptions, PropertyReport};

/// P_{n,k} facts on QR_p established by the pruned search, as `(p, n, k)`.
/// Each entry is re-verified by the test suite (the largest behind a flag).
pub const CACHED_P_FACTS: &[(u64, usize, usize)] = &[(11, 2, 2), (43, 3, 3), (151, 4, 4), (659, 5, 5)];

/// Corollary targets: Δ ↦ p with Tr*(QR_p) certified for maximum degree Δ.
pub fn select_target(delta: usize) -> Result<u64> {
    let p = match delta {
        4 => 11,
        5 => 43,
        6 => 151,
        7 => 659,
        _ => {
            return Err(Error::Unsupported(format!(
                "no certified target for maximum degree {delta} (supported: 4 to 7)"
            )))
        }
    };
    match certified_properties(p, delta)? {
        Verdict::Certified(_) => Ok(p),
        Verdict::Uncertified { reason, .. } => Err(Error::Uncertified(reason)),
    }
}

/// An exact rational `num / den`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Ratio {
    pub num: u64,
    pub den: u64,
}

impl Ratio {
    /// `k ≥ self`, compared without rounding.
    pub fn le_int(&self, k: u64) -> bool {
        k * self.den >= self.num
    }
}

impl fmt::Display for Ratio {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.num.is_multiple_of(self.den) {
            write!(f, "{}", self.num / self.den)
        } else {
            write!(f, "{}/{}", self.num, self.den)
        }
    }
}

/// Where a property fact on QR_p or Tr(QR_p) came from.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Source {
    /// Degree count: every vertex of QR_p has (p−1)/2 out- and in-neighbours.
    DegreeFormula,
    /// Transitive-triangle count over arcs.
    PairFormula,
    Cached,
    /// P_{n−1,k} on QR_p lifts to P_{n,k} on Tr(QR_p).
    Lifted,
    /// C_{2,(3p+1)/2} on Tr(QR_p).
    EdgeFormula,
    /// C_{3,(7p+3)/4} on Tr(QR_p).
    TriangleFormula,
    /// Weakening to fewer vertices / fewer successors (P) or to larger
    /// cliques / smaller unions (C).
    Monotone,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Step {
    pub graph: String,
    pub property: String,
    pub source: Source,
}

impl fmt::Display for Step {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} has {} [{:?}]", self.graph, self.property, self.source)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Derivation {
    pub p: u64,
    pub delta: usize,
    /// Required P_{Δ−1,Δ−2} on Tr(QR_p).
    pub p_need: (usize, usize),
    /// Required C_{Δ−2, t} with t = (2p+2)(Δ−2)/(Δ−1) + 1.
    pub c_need: (usize, Ratio),
    pub steps: Vec<Step>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Verdict {
    Certified(Derivation),
    /// The chain could not be completed; says nothing about falsity.
    Uncertified { partial: Derivation, reason: String },
}

impl Verdict {
    pub fn is_certified(&self) -> bool {
        matches!(self, Verdict::Certified(_))
    }

    pub fn derivation(&self) -> &Derivation {
        match self {
            Verdict::Certified(d) | Verdict::Uncertified { partial: d, .. } => d,
        }
    }
}

/// P facts known for QR_p: formulas plus the cache.
fn qr_p_facts(p: u64) -> Vec<(usize, usize, Source)> {
    let mut out = vec![
        (1, ((p - 1) / 2) as usize, Source::DegreeFormula),
        (2, ((p - 3) / 4) as usize, Source::PairFormula),
    ];
    out.extend(
        CACHED_P_FACTS
            .iter()
            .filter(|f| f.0 == p)
            .map(|&(_, n, k)| (n, k, Source::Cached)),
    );
    out
}

/// Decides whether Tr(QR_p) carries P_{Δ−1,Δ−2} and
/// C_{Δ−2,(2p+2)(Δ−2)/(Δ−1)+1}, recording the chain used.
pub fn certified_properties(p: u64, delta: usize) -> Result<Verdict> {
    if delta < 4 {
        return Err(Error::Precondition(format!("maximum degree {delta} is below 4")));
    }
    // validates p
    crate::paley::build_field(p)?;
    let (pn, pk) = (delta - 1, delta - 2);
    let cn = delta - 2;
    let c_need = Ratio {
        num: (2 * p + 2) * (delta as u64 - 2) + (delta as u64 - 1),
        den: delta as u64 - 1,
    };
    let qr = format!("QR{p}");
    let tr = format!("Tr(QR{p})");
    let mut d = Derivation {
        p,
        delta,
        p_need: (pn, pk),
        c_need: (cn, c_need),
        steps: Vec::new(),
    };

    // P side: need P_{Δ−2,Δ−2} on QR_p, then lift.
    let facts = qr_p_facts(p);
    let p_fact = facts.iter().find(|(n, k, _)| *n >= pn - 1 && *k >= pk);
    let p_ok = match p_fact {
        Some((n, k, src)) => {
            d.steps.push(Step {
                graph: qr.clone(),
                property: format!("P({n},{k})"),
                source: src.clone(),
            });
            if (*n, *k) != (pn - 1, pk) {
                d.steps.push(Step {
                    graph: qr.clone(),
                    property: format!("P({},{pk})", pn - 1),
                    source: Source::Monotone,
                });
            }
            d.steps.push(Step {
                graph: tr.clone(),
                property: format!("P({pn},{pk})"),
                source: Source::Lifted,
            });
            true
        }
        None => false,
    };

    // C side: the strongest formula fact with clique size ≤ Δ−2.
    let c_facts = [
        (2, (3 * p).div_ceil(2), Source::EdgeFormula),
        (3, (7 * p).div_ceil(4), Source::TriangleFormula),
    ];
    let c_fact = c_facts
        .iter()
        .filter(|(n, k, _)| *n <= cn && c_need.le_int(*k))
        .max_by_key(|(_, k, _)| *k);
    let c_ok = match c_fact {
        Some((n, k, src)) => {
            d.steps.push(Step {
                graph: tr.clone(),
                property: format!("C({n},{k})"),
                source: src.clone(),
            });
            d.steps.push(Step {
                graph: tr.clone(),
                property: format!("C({cn},{c_need})"),
                source: Source::Monotone,
            });
            true
        }
        None => false,
    };

    Ok(match (p_ok, c_ok) {
        (true, true) => Verdict::Certified(d),
        (false, _) => Verdict::Uncertified {
            reason: format!("no derivation of P({},{pk}) for {qr}, needed for P({pn},{pk}) on {tr}", pn - 1),
            partial: d,
        },
        (true, false) => Verdict::Uncertified {
            reason: format!("no derivation of C({cn},{c_need}) for {tr}"),
            partial: d,
        },
    })
}

/// Orders q ≡ 3 (mod 4) up to `q_max`, primes only unless `prime_powers`.
pub fn paley_orders(q_max: u64, prime_powers: bool) -> Vec<u64> {
    (3..=q_max)
        .filter(|q| q % 4 == 3)
        .filter(|&q| match prime_power(q) {
            Some((_, k)) => prime_powers || k == 1,
            None => false,
        })
        .collect()
}

/// Leaves visited by the pruned search for P_{n,·} on QR_q.
pub fn pruned_leaf_estimate(q: u64, n: usize) -> u128 {
    if n <= 1 {
        return 1;
    }
    // 5 choices for the second entry, multisets of size n−2 over 2q codes
    let (m, r) = (2 * q as u128, (n - 2) as u128);
    let mut c: u128 = 1;
    for i in 0..r {
        c = c * (m + i) / (i + 1);
    }
    5 * c
}

#[derive(Clone, Debug)]
pub struct SearchOptions {
    pub jobs: usize,
    /// Cap on the estimated leaves of any single q.
    pub leaf_budget: u128,
    /// Compute exact minima for failing q instead of stopping at a witness.
    pub exact_minima: bool,
    /// Directory for per-q checkpoints; existing ones are resumed.
    pub checkpoint_dir: Option<PathBuf>,
    pub checkpoint_every: usize,
}

impl Default for SearchOptions {
    fn default() -> Self {
        SearchOptions {
            jobs: 1,
            leaf_budget: 50_000_000,
            exact_minima: false,
            checkpoint_dir: None,
            checkpoint_every: 256,
        }
    }
}

#[derive(Clone, Debug)]
pub struct MinimalSearch {
    pub n: usize,
    pub k: usize,
    pub rows: Vec<(u64, PropertyReport)>,
    pub first: Option<u64>,
    /// Set when the scan stopped before `q_max` because of the budget.
    pub truncated_at: Option<u64>,
}

impl fmt::Display for MinimalSearch {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (q, r) in &self.rows {
            writeln!(f, "q={q} {r}")?;
        }
        match (self.first, self.truncated_at) {
            (Some(q), _) => write!(f, "P({},{}): q={q}", self.n, self.k),
            (None, Some(q)) => write!(f, "P({},{}): TRUNCATED at q={q}", self.n, self.k),
            (None, None) => write!(f, "P({},{}): none", self.n, self.k),
        }
    }
}

/// Scans Paley tournaments in increasing order and stops at the first with P_{n,k}.
pub fn search_minimal_paley(
    n: usize,
    k: usize,
    q_max: u64,
    prime_powers: bool,
    opts: &SearchOptions,
) -> Result<MinimalSearch> {
    let mut out = MinimalSearch {
        n,
        k,
        rows: Vec::new(),
        first: None,
        truncated_at: None,
    };
    for q in paley_orders(q_max, prime_powers) {
        if pruned_leaf_estimate(q, n) > opts.leaf_budget {
            out.truncated_at = Some(q);
            break;
        }
        let t = TargetGraph::from_paley(build_paley(q)?);
        let ck = opts
            .checkpoint_dir
            .as_ref()
            .map(|d| d.join(format!("P{n}_{k}_q{q}.ckpt")));
        let pnk = PnkOptions {
            jobs: opts.jobs,
            stop_at_failure: !opts.exact_minima,
            checkpoint: ck.clone(),
            checkpoint_every: opts.checkpoint_every,
            resume: ck.filter(|p| p.exists()),
        };
        let r = check_pnk_with(&t, n, k, PMode::Pruned, &pnk)?;
        let holds = r.holds;
        out.rows.push((q, r));
        if holds {
            out.first = Some(q);
            break;
        }
    }
    Ok(out)
}
