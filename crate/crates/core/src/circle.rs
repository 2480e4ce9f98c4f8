//! Exact arithmetic on finite unions of half-open rational subintervals of
//! [0,1), and the transference step between the circle and Z_p.
//!
//! Everything is half-open [a,b) with arbitrary-precision rational
//! endpoints. Endpoint sets have measure zero, so fixing half-open
//! orientation costs nothing, and it makes Boolean algebra, dilation and
//! discretization unambiguous: disjointness claims are decided exactly,
//! never to a tolerance.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::arith::{modinv, reduce_mod};
use crate::error::{Error, Result};
use crate::zp::ZpSet;

pub type Rational = BigRational;

/// r/1 from integers.
pub fn rat(num: i64, den: i64) -> Rational {
    BigRational::new(BigInt::from(num), BigInt::from(den))
}

fn frac(r: &Rational) -> Rational {
    r - r.floor()
}

/// A normalized finite union of disjoint, non-adjacent half-open intervals.
#[derive(Clone, PartialEq, Eq)]
pub struct IntervalSet {
    spans: Vec<(Rational, Rational)>,
}

impl std::fmt::Debug for IntervalSet {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "IntervalSet[")?;
        for (i, (a, b)) in self.spans.iter().enumerate() {
            if i > 0 {
                write!(f, " u ")?;
            }
            write!(f, "[{a},{b})")?;
        }
        write!(f, "]")
    }
}

impl IntervalSet {
    pub fn empty() -> Self {
        IntervalSet { spans: Vec::new() }
    }

    pub fn full() -> Self {
        IntervalSet {
            spans: vec![(Rational::zero(), Rational::one())],
        }
    }

    /// Build from raw spans; validates 0 ≤ a < b ≤ 1 and normalizes
    /// (sorts, merges overlapping and adjacent pieces).
    pub fn new(spans: Vec<(Rational, Rational)>) -> Result<Self> {
        for (a, b) in &spans {
            if a.is_negative() || a >= b || *b > Rational::one() {
                return Err(Error::BadInterval);
            }
        }
        Ok(Self::normalized(spans))
    }

    fn normalized(mut spans: Vec<(Rational, Rational)>) -> Self {
        spans.retain(|(a, b)| a < b);
        spans.sort();
        let mut out: Vec<(Rational, Rational)> = Vec::with_capacity(spans.len());
        for (a, b) in spans {
            match out.last_mut() {
                Some((_, pb)) if a <= *pb => {
                    if b > *pb {
                        *pb = b;
                    }
                }
                _ => out.push((a, b)),
            }
        }
        IntervalSet { spans: out }
    }

    pub fn is_empty(&self) -> bool {
        self.spans.is_empty()
    }

    pub fn span_count(&self) -> usize {
        self.spans.len()
    }

    pub fn spans(&self) -> &[(Rational, Rational)] {
        &self.spans
    }

    pub fn contains(&self, x: &Rational) -> bool {
        self.spans.iter().any(|(a, b)| a <= x && x < b)
    }

    /// Exact Lebesgue measure Σ(b−a).
    pub fn measure(&self) -> Rational {
        self.spans.iter().map(|(a, b)| b - a).sum()
    }

    pub fn union(&self, other: &IntervalSet) -> IntervalSet {
        let mut spans = self.spans.clone();
        spans.extend(other.spans.iter().cloned());
        Self::normalized(spans)
    }

    pub fn intersect(&self, other: &IntervalSet) -> IntervalSet {
        let mut out = Vec::new();
        let (mut i, mut j) = (0, 0);
        while i < self.spans.len() && j < other.spans.len() {
            let (a1, b1) = &self.spans[i];
            let (a2, b2) = &other.spans[j];
            let lo = a1.max(a2);
            let hi = b1.min(b2);
            if lo < hi {
                out.push((lo.clone(), hi.clone()));
            }
            if b1 <= b2 {
                i += 1;
            } else {
                j += 1;
            }
        }
        IntervalSet { spans: out }
    }

    pub fn complement(&self) -> IntervalSet {
        let mut out = Vec::new();
        let mut cursor = Rational::zero();
        for (a, b) in &self.spans {
            if cursor < *a {
                out.push((cursor, a.clone()));
            }
            cursor = b.clone();
        }
        if cursor < Rational::one() {
            out.push((cursor, Rational::one()));
        }
        IntervalSet { spans: out }
    }

    /// self ∖ other.
    pub fn difference(&self, other: &IntervalSet) -> IntervalSet {
        self.intersect(&other.complement())
    }

    pub fn contains_set(&self, other: &IntervalSet) -> bool {
        other.difference(self).is_empty()
    }

    /// Exact image {λx mod 1 : x ∈ S}, λ ≠ 0. An interval whose stretched
    /// length reaches 1 covers the whole circle. Negative λ reflects; the
    /// reflected image (frac(λb), frac(λa)] is normalized to half-open form
    /// (a measure-zero adjustment).
    pub fn dilate_mod1(&self, lambda: i64) -> Result<IntervalSet> {
        if lambda == 0 {
            return Err(Error::InvalidDilate);
        }
        let l = rat(lambda, 1);
        let mut spans = Vec::new();
        for (a, b) in &self.spans {
            let stretched = (b - a) * rat(lambda.abs(), 1);
            if stretched >= Rational::one() {
                return Ok(Self::full());
            }
            let start = if lambda > 0 {
                frac(&(&l * a))
            } else {
                frac(&(&l * b))
            };
            let end = &start + &stretched;
            if end <= Rational::one() {
                spans.push((start, end));
            } else {
                spans.push((start, Rational::one()));
                spans.push((Rational::zero(), end - Rational::one()));
            }
        }
        Ok(Self::normalized(spans))
    }

    /// Minkowski sum with [−r, r] on the circle, r ≥ 0 rational.
    pub fn fatten(&self, r: &Rational) -> Result<IntervalSet> {
        if r.is_negative() {
            return Err(Error::NegativeRadius);
        }
        if r.is_zero() || self.is_empty() {
            return Ok(self.clone());
        }
        let mut spans = Vec::new();
        for (a, b) in &self.spans {
            if b - a + rat(2, 1) * r >= Rational::one() {
                return Ok(Self::full());
            }
            let lo = a - r;
            let hi = b + r;
            if lo.is_negative() {
                spans.push((lo + Rational::one(), Rational::one()));
                spans.push((Rational::zero(), hi));
            } else if hi > Rational::one() {
                spans.push((lo, Rational::one()));
                spans.push((Rational::zero(), hi - Rational::one()));
            } else {
                spans.push((lo, hi));
            }
        }
        Ok(Self::normalized(spans))
    }

    /// Preimage {x : νx mod 1 ∈ S} under multiplication by ν ≥ 2: each span
    /// pulls back to ν shrunken translates.
    pub fn preimage_mul(&self, nu: u64) -> IntervalSet {
        debug_assert!(nu >= 2);
        let n = rat(nu as i64, 1);
        let mut spans = Vec::with_capacity(self.spans.len() * nu as usize);
        for (a, b) in &self.spans {
            for j in 0..nu as i64 {
                spans.push(((a + rat(j, 1)) / &n, (b + rat(j, 1)) / &n));
            }
        }
        Self::normalized(spans)
    }

    /// {x ∈ [0,p) : x/p ∈ S}. Exact: x/p ∈ [a,b) iff ceil(ap) ≤ x < ceil(bp).
    /// The count satisfies μ(S)·p − K ≤ |result| ≤ μ(S)·p + K for K spans.
    pub fn discretize(&self, p: u64) -> Result<ZpSet> {
        let mut out = ZpSet::empty(p)?;
        let pr = rat(p as i64, 1);
        for (a, b) in &self.spans {
            let lo = (a * &pr)
                .ceil()
                .to_integer()
                .to_u64()
                .expect("0 <= lo <= p");
            let hi = (b * &pr)
                .ceil()
                .to_integer()
                .to_u64()
                .expect("0 <= hi <= p");
            for x in lo..hi {
                out.insert(x);
            }
        }
        Ok(out)
    }

    /// One span per line, `num_a/den_a num_b/den_b`, lowest terms, sorted.
    pub fn to_text(&self) -> String {
        let mut s = String::new();
        for (a, b) in &self.spans {
            s.push_str(&format!(
                "{}/{} {}/{}\n",
                a.numer(),
                a.denom(),
                b.numer(),
                b.denom()
            ));
        }
        s
    }

    pub fn from_text(text: &str) -> Result<IntervalSet> {
        let mut spans = Vec::new();
        for line in text.lines() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let mut parts = line.split_whitespace();
            let a = parse_rational(
                parts
                    .next()
                    .ok_or_else(|| Error::Parse("missing endpoint".into()))?,
            )?;
            let b = parse_rational(
                parts
                    .next()
                    .ok_or_else(|| Error::Parse("missing endpoint".into()))?,
            )?;
            spans.push((a, b));
        }
        Self::new(spans)
    }
}

/// Parse `num/den` (or a bare integer) into a rational.
pub fn parse_rational(text: &str) -> Result<Rational> {
    let (n, d) = match text.split_once('/') {
        Some((n, d)) => (n, d),
        None => (text, "1"),
    };
    let n: BigInt = n
        .trim()
        .parse()
        .map_err(|e| Error::Parse(format!("bad rational `{text}`: {e}")))?;
    let d: BigInt = d
        .trim()
        .parse()
        .map_err(|e| Error::Parse(format!("bad rational `{text}`: {e}")))?;
    if d.is_zero() {
        return Err(Error::Parse(format!("zero denominator in `{text}`")));
    }
    Ok(BigRational::new(n, d))
}

/// Remove from A every x with λ₁x ∈ λ₂A + {−t,…,t} (one pass against the
/// original A, which suffices: survivors see only a subset of the original
/// targets). Returns the pruned set and the deletion count. The result
/// satisfies `difference_window(λ₁A', λ₂A', t)`.
pub fn prune_to_avoid(a: &ZpSet, l1: i64, l2: i64, t: u64) -> Result<(ZpSet, u64)> {
    let p = a.modulus();
    if t >= p / 2 {
        return Err(Error::WindowTooLarge { t, p });
    }
    let smeared = smear(&a.dilate(l2), t)?;
    let l1r = reduce_mod(l1, p);
    let mut kept = ZpSet::empty(p)?;
    let mut deleted = 0;
    for x in a.iter() {
        let y = (x as u128 * l1r as u128 % p as u128) as u64;
        if smeared.contains(y) {
            deleted += 1;
        } else {
            kept.insert(x);
        }
    }
    Ok((kept, deleted))
}

/// Like `prune_to_avoid`, but deletes a greedy vertex cover of the collision
/// graph (an edge joins x and a whenever λ₁x − λ₂a lands in the window)
/// instead of the whole violating side. Same window guarantee, far fewer
/// deletions on sets whose collisions concentrate on a few elements.
/// Deterministic: highest degree first, ties by smallest residue.
pub fn prune_min_cover(a: &ZpSet, l1: i64, l2: i64, t: u64) -> Result<(ZpSet, u64)> {
    let p = a.modulus();
    if t >= p / 2 {
        return Err(Error::WindowTooLarge { t, p });
    }
    let l1r = reduce_mod(l1, p);
    let l2r = reduce_mod(l2, p);
    if l1r == 0 {
        return Err(Error::DegenerateDilate(l1));
    }
    let inv1 = modinv(l1r, p);

    let members = a.residues();
    let mut index = vec![u32::MAX; p as usize];
    for (i, &x) in members.iter().enumerate() {
        index[x as usize] = i as u32;
    }

    let n = members.len();
    let mut adj: Vec<Vec<u32>> = vec![Vec::new(); n];
    let mut forced = vec![false; n];
    for (ai, &av) in members.iter().enumerate() {
        let base = (av as u128 * l2r as u128 % p as u128) as u64;
        for w in 0..=2 * t {
            // offsets -t..t
            let target = (base + p - t % p + w) % p;
            let x = (target as u128 * inv1 as u128 % p as u128) as u64;
            let xi = index[x as usize];
            if xi == u32::MAX {
                continue;
            }
            let xi = xi as usize;
            if xi == ai {
                forced[ai] = true;
            } else {
                adj[xi].push(ai as u32);
                adj[ai].push(xi as u32);
            }
        }
    }
    for nbrs in adj.iter_mut() {
        nbrs.sort_unstable();
        nbrs.dedup();
    }

    let mut deleted = vec![false; n];
    let mut degree: Vec<u32> = adj.iter().map(|v| v.len() as u32).collect();
    for (i, _) in forced.iter().enumerate().filter(|(_, f)| **f) {
        delete_vertex(i, &adj, &mut deleted, &mut degree);
    }
    // max-degree-first greedy cover; lazy heap keyed by (degree, smallest residue)
    let mut heap: std::collections::BinaryHeap<(u32, std::cmp::Reverse<u32>)> = (0..n)
        .filter(|&i| !deleted[i] && degree[i] > 0)
        .map(|i| (degree[i], std::cmp::Reverse(i as u32)))
        .collect();
    while let Some((d, std::cmp::Reverse(i))) = heap.pop() {
        let i = i as usize;
        if deleted[i] || degree[i] == 0 {
            continue;
        }
        if degree[i] != d {
            heap.push((degree[i], std::cmp::Reverse(i as u32)));
            continue;
        }
        delete_vertex(i, &adj, &mut deleted, &mut degree);
    }

    let mut kept = ZpSet::empty(p)?;
    let mut count = 0;
    for (i, &x) in members.iter().enumerate() {
        if deleted[i] {
            count += 1;
        } else {
            kept.insert(x);
        }
    }
    debug_assert!(kept
        .dilate(l1)
        .difference_window(&kept.dilate(l2), t)
        .unwrap_or(true));
    Ok((kept, count))
}

fn delete_vertex(i: usize, adj: &[Vec<u32>], deleted: &mut [bool], degree: &mut [u32]) {
    if deleted[i] {
        return;
    }
    deleted[i] = true;
    degree[i] = 0;
    for &j in &adj[i] {
        let j = j as usize;
        if !deleted[j] && degree[j] > 0 {
            degree[j] -= 1;
        }
    }
}

/// λ₂A fattened by t lattice steps on the Z_p side: OR of shifts −t..t.
fn smear(base: &ZpSet, t: u64) -> Result<ZpSet> {
    let p = base.modulus();
    let mut out = base.clone();
    for d in 1..=t {
        for x in base.iter() {
            out.insert((x + d) % p);
            out.insert((x + p - d % p) % p);
        }
    }
    Ok(out)
}
