//! Arithmetic in GF(q), q = p^k, restricted to the orders q ≡ 3 (mod 4) used
//! for Paley tournaments.
//!
//! Elements are the integers `0..q`, read as base-p coefficient vectors
//! (the digit of weight p^i is the coefficient of x^i). Multiplication goes
//! through discrete exp/log tables built from a primitive element, so every
//! operation is a table lookup or a digit-wise add.

use crate::error::{Error, Result};

/// Largest field order accepted; keeps the exp/log tables and the dense
/// tournament adjacency within a few megabytes.
pub const MAX_ORDER: u64 = 1 << 16;

pub type Elem = u32;

#[derive(Clone, Debug)]
pub struct FieldSpec {
    pub p: u32,
    pub k: u32,
    pub q: u32,
    /// Monic irreducible modulus, coefficients low to high (length k+1).
    /// `None` for prime fields.
    pub modulus: Option<Vec<u32>>,
    exp: Vec<Elem>,
    log: Vec<u32>,
}

/// Returns `(p, k)` with `q = p^k`, or `None` when `q` is not a prime power.
pub fn prime_power(q: u64) -> Option<(u64, u32)> {
    if q < 2 {
        return None;
    }
    let mut p = 2;
    while p * p <= q && !q.is_multiple_of(p) {
        p += 1;
    }
    if !q.is_multiple_of(p) {
        p = q;
    }
    let mut rest = q;
    let mut k = 0;
    while rest.is_multiple_of(p) {
        rest /= p;
        k += 1;
    }
    (rest == 1).then_some((p, k))
}

// Dense polynomials over GF(p), coefficients low to high, no trailing zeros.
fn poly_trim(mut a: Vec<u32>) -> Vec<u32> {
    while a.last() == Some(&0) {
        a.pop();
    }
    a
}

fn poly_rem(a: &[u32], m: &[u32], p: u32) -> Vec<u32> {
    let mut r = a.to_vec();
    let dm = m.len() - 1;
    let lead_inv = inv_mod(m[dm], p);
    while r.len() > dm {
        let lead = *r.last().unwrap();
        if lead != 0 {
            let f = (lead as u64 * lead_inv as u64 % p as u64) as u32;
            let shift = r.len() - 1 - dm;
            for (i, &c) in m.iter().enumerate() {
                let sub = (f as u64 * c as u64 % p as u64) as u32;
                r[shift + i] = (r[shift + i] + p - sub) % p;
            }
        }
        r.pop();
    }
    poly_trim(r)
}

fn poly_mulmod(a: &[u32], b: &[u32], m: &[u32], p: u32) -> Vec<u32> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut prod = vec![0u64; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        for (j, &y) in b.iter().enumerate() {
            prod[i + j] = (prod[i + j] + x as u64 * y as u64) % p as u64;
        }
    }
    let prod: Vec<u32> = prod.into_iter().map(|c| c as u32).collect();
    poly_rem(&poly_trim(prod), m, p)
}

fn inv_mod(a: u32, p: u32) -> u32 {
    // p is prime: a^(p-2)
    let (mut base, mut e, mut acc) = (a as u64 % p as u64, p as u64 - 2, 1u64);
    while e > 0 {
        if e & 1 == 1 {
            acc = acc * base % p as u64;
        }
        base = base * base % p as u64;
        e >>= 1;
    }
    acc as u32
}

fn digits(mut x: u32, p: u32, k: u32) -> Vec<u32> {
    (0..k)
        .map(|_| {
            let d = x % p;
            x /= p;
            d
        })
        .collect()
}

fn undigits(d: &[u32], p: u32) -> u32 {
    d.iter().rev().fold(0, |acc, &c| acc * p + c)
}

/// Monic polynomial of degree `deg` whose lower coefficients are the base-p
/// digits of `code`.
fn monic_from_code(code: u32, p: u32, deg: u32) -> Vec<u32> {
    let mut m = digits(code, p, deg);
    m.push(1);
    m
}

/// Irreducibility by trial division against every monic polynomial of
/// degree 1..=deg/2.
pub fn is_irreducible(m: &[u32], p: u32) -> bool {
    let deg = m.len() as u32 - 1;
    for d in 1..=deg / 2 {
        for code in 0..p.pow(d) {
            let f = monic_from_code(code, p, d);
            if poly_rem(m, &f, p).is_empty() {
                return false;
            }
        }
    }
    true
}

/// The irreducible monic degree-`k` polynomial whose coefficient vector,
/// read from x^(k-1) down to x^0, is lexicographically smallest.
pub fn smallest_irreducible(p: u32, k: u32) -> Vec<u32> {
    (0..p.pow(k))
        .map(|code| monic_from_code(code, p, k))
        .find(|m| is_irreducible(m, p))
        .expect("irreducible polynomials exist in every degree")
}

impl FieldSpec {
    /// Builds GF(q) for a prime power q ≡ 3 (mod 4).
    pub fn new(q: u64) -> Result<Self> {
        let reject = |reason: String| Error::UnsupportedField { q, reason };
        if q < 3 {
            return Err(reject("order must be at least 3".into()));
        }
        if q > MAX_ORDER {
            return Err(reject(format!("order exceeds the supported maximum {MAX_ORDER}")));
        }
        if q % 4 != 3 {
            return Err(reject(format!("q ≡ {} (mod 4); Paley tournaments need q ≡ 3 (mod 4)", q % 4)));
        }
        let (p, k) = prime_power(q).ok_or_else(|| reject("not a prime power".into()))?;
        Ok(Self::build(p as u32, k))
    }

    fn build(p: u32, k: u32) -> Self {
        let q = p.pow(k);
        let modulus = (k > 1).then(|| smallest_irreducible(p, k));
        let mul_slow = |a: u32, b: u32| -> u32 {
            match &modulus {
                None => (a as u64 * b as u64 % p as u64) as u32,
                Some(m) => {
                    let pa = poly_trim(digits(a, p, k));
                    let pb = poly_trim(digits(b, p, k));
                    let r = poly_mulmod(&pa, &pb, m, p);
                    undigits(&r, p)
                }
            }
        };
        // find a primitive element by brute force
        let order = (q - 1) as usize;
        let mut exp = Vec::with_capacity(order);
        for g in 1..q {
            exp.clear();
            let mut x = 1;
            loop {
                exp.push(x);
                x = mul_slow(x, g);
                if x == 1 {
                    break;
                }
            }
            if exp.len() == order {
                break;
            }
        }
        let mut log = vec![0; q as usize];
        for (i, &x) in exp.iter().enumerate() {
            log[x as usize] = i as u32;
        }
        FieldSpec {
            p,
            k,
            q,
            modulus,
            exp,
            log,
        }
    }

    #[inline]
    pub fn order(&self) -> u32 {
        self.q
    }

    #[inline]
    pub fn add(&self, a: Elem, b: Elem) -> Elem {
        if self.k == 1 {
            let s = a + b;
            if s >= self.p {
                s - self.p
            } else {
                s
            }
        } else {
            let (mut a, mut b, mut out, mut w) = (a, b, 0, 1);
            for _ in 0..self.k {
                out += (a % self.p + b % self.p) % self.p * w;
                a /= self.p;
                b /= self.p;
                w *= self.p;
            }
            out
        }
    }

    #[inline]
    pub fn neg(&self, a: Elem) -> Elem {
        if self.k == 1 {
            if a == 0 {
                0
            } else {
                self.p - a
            }
        } else {
            let (mut a, mut out, mut w) = (a, 0, 1);
            for _ in 0..self.k {
                out += (self.p - a % self.p) % self.p * w;
                a /= self.p;
                w *= self.p;
            }
            out
        }
    }

    #[inline]
    pub fn sub(&self, a: Elem, b: Elem) -> Elem {
        self.add(a, self.neg(b))
    }

    #[inline]
    pub fn mul(&self, a: Elem, b: Elem) -> Elem {
        if a == 0 || b == 0 {
            return 0;
        }
        let e = (self.log[a as usize] + self.log[b as usize]) % (self.q - 1);
        self.exp[e as usize]
    }

    /// Multiplicative inverse; `None` for zero.
    pub fn inv(&self, a: Elem) -> Option<Elem> {
        if a == 0 {
            return None;
        }
        let l = self.log[a as usize];
        Some(self.exp[((self.q - 1 - l) % (self.q - 1)) as usize])
    }

    pub fn div(&self, a: Elem, b: Elem) -> Option<Elem> {
        self.inv(b).map(|bi| self.mul(a, bi))
    }

    /// Non-zero squares, ascending.
    pub fn nonzero_squares(&self) -> Vec<Elem> {
        let mut sq: Vec<Elem> = (0..self.q - 1).step_by(2).map(|e| self.exp[e as usize]).collect();
        sq.sort_unstable();
        sq
    }

    /// Spot-checks the field axioms on `samples` pseudo-random triples and
    /// checks that every non-zero element is invertible.
    pub fn check_axioms(&self, samples: usize) -> bool {
        let mut s = 0x9e37_79b9_7f4a_7c15u64;
        let mut next = || {
            s ^= s << 13;
            s ^= s >> 7;
            s ^= s << 17;
            (s % self.q as u64) as Elem
        };
        for _ in 0..samples {
            let (a, b, c) = (next(), next(), next());
            if self.add(self.add(a, b), c) != self.add(a, self.add(b, c))
                || self.mul(self.mul(a, b), c) != self.mul(a, self.mul(b, c))
                || self.mul(a, self.add(b, c)) != self.add(self.mul(a, b), self.mul(a, c))
                || self.add(a, b) != self.add(b, a)
                || self.mul(a, b) != self.mul(b, a)
                || self.add(a, self.neg(a)) != 0
            {
                return false;
            }
        }
        (1..self.q).all(|a| self.inv(a).map(|ai| self.mul(a, ai)) == Some(1))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn prime_power_detection() {
        assert_eq!(prime_power(7), Some((7, 1)));
        assert_eq!(prime_power(27), Some((3, 3)));
        assert_eq!(prime_power(343), Some((7, 3)));
        assert_eq!(prime_power(15), None);
        assert_eq!(prime_power(1), None);
    }

    #[test]
    fn prime_field_mod_7() {
        let f = FieldSpec::new(7).unwrap();
        assert_eq!((f.p, f.k, f.modulus.clone()), (7, 1, None));
        for a in 0..7 {
            for b in 0..7 {
                assert_eq!(f.add(a, b), (a + b) % 7);
                assert_eq!(f.mul(a, b), (a * b) % 7);
                assert_eq!(f.sub(a, b), (a + 7 - b) % 7);
            }
        }
        assert_eq!(f.nonzero_squares(), vec![1, 2, 4]);
    }

    #[test]
    fn gf27() {
        let f = FieldSpec::new(27).unwrap();
        assert_eq!((f.p, f.k), (3, 3));
        let m = f.modulus.clone().unwrap();
        // x^3 + 2x + 1 is the first irreducible cubic over GF(3) in this order
        assert_eq!(m, vec![1, 2, 0, 1]);
        assert!(is_irreducible(&m, 3));
        // every smaller code is reducible (has a root, since degree 3)
        for code in 0..undigits(&m[..3], 3) {
            let cand = monic_from_code(code, 3, 3);
            let has_root = (0..3u64).any(|x| {
                cand.iter().rev().fold(0u64, |acc, &c| (acc * x + c as u64) % 3) == 0
            });
            assert!(has_root, "{cand:?}");
        }
        assert!(f.check_axioms(2000));
        assert_eq!(f.nonzero_squares().len(), 13);
    }

    #[test]
    fn rejects_bad_orders() {
        assert!(FieldSpec::new(9).is_err());
        assert!(FieldSpec::new(15).is_err());
        assert!(FieldSpec::new(1).is_err());
        assert!(FieldSpec::new(5).is_err());
    }

    #[test]
    fn axioms_hold_for_supported_orders() {
        for q in [3, 7, 11, 19, 23, 27, 31, 43, 243, 343] {
            let f = FieldSpec::new(q).unwrap();
            assert!(f.check_axioms(500), "q={q}");
            assert_eq!(f.nonzero_squares().len() as u64, (q - 1) / 2);
            // -1 is never a square when q ≡ 3 (mod 4)
            assert!(!f.nonzero_squares().contains(&f.neg(1)));
        }
    }
}
