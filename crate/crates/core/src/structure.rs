//! Arithmetic-progression structure: diameter, rectification to the
//! integers, and a small-scale Freiman-isomorphism oracle.
//!
//! The diameter of A ⊆ Z_p is the length of the shortest AP covering A.
//! A set with diameter l satisfying l * M < p lifts to an integer set on
//! which every sum of dilates with Σ|λᵢ| ≤ M has no wrap-around, so the
//! lift preserves all those sumset cardinalities exactly.

use std::collections::HashSet;

use crate::arith::modinv;
use crate::error::{Error, Result};
use crate::zp::{DilateVector, ZpSet};

/// A covering arithmetic progression {start, start+step, …} of `len` terms.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ApWitness {
    pub start: u64,
    pub step: u64,
    pub len: u64,
}

impl std::fmt::Display for ApWitness {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "x={} d={} l={}", self.start, self.step, self.len)
    }
}

/// Shortest covering AP. Scans d in [1, (p−1)/2]; d and p−d give reflected
/// covers of the same length. Ties broken by smallest step, then smallest
/// start.
pub fn diameter(a: &ZpSet) -> Result<ApWitness> {
    if a.is_empty() {
        return Err(Error::EmptySet);
    }
    let p = a.modulus();
    let members = a.residues();
    if members.len() as u64 == p {
        return Ok(ApWitness {
            start: 0,
            step: 1,
            len: p,
        });
    }
    let d_max = ((p - 1) / 2).max(1);
    let mut best: Option<ApWitness> = None;
    let mut mapped = vec![0u64; members.len()];
    for d in 1..=d_max {
        let dinv = modinv(d, p);
        for (slot, &x) in mapped.iter_mut().zip(&members) {
            *slot = (x as u128 * dinv as u128 % p as u128) as u64;
        }
        mapped.sort_unstable();
        // largest cyclic gap; the cover starts just after it
        let mut gap = p - mapped[mapped.len() - 1] + mapped[0];
        let mut start_mapped = mapped[0];
        for w in mapped.windows(2) {
            let g = w[1] - w[0];
            if g > gap {
                gap = g;
                start_mapped = w[1];
            } else if g == gap {
                // tie on gap: pick the start giving the smallest x
                let cand = (d as u128 * w[1] as u128 % p as u128) as u64;
                let cur = (d as u128 * start_mapped as u128 % p as u128) as u64;
                if cand < cur {
                    start_mapped = w[1];
                }
            }
        }
        let len = p - gap + 1;
        let start = (d as u128 * start_mapped as u128 % p as u128) as u64;
        let cand = ApWitness {
            start,
            step: d,
            len,
        };
        let better = match &best {
            None => true,
            Some(b) => (len, d, start) < (b.len, b.step, b.start),
        };
        if better {
            best = Some(cand);
        }
    }
    let w = best.unwrap();
    debug_assert!(covers(a, &w));
    Ok(w)
}

fn covers(a: &ZpSet, w: &ApWitness) -> bool {
    let p = a.modulus();
    let mut ap = ZpSet::empty(p).expect("modulus already validated");
    let mut x = w.start;
    for _ in 0..w.len {
        ap.insert(x);
        x = (x + w.step) % p;
    }
    a.iter().all(|v| ap.contains(v))
}

/// An integer lift of a Z_p set, Freiman-isomorphic up to the declared weight.
#[derive(Clone, Debug)]
pub struct IntLift {
    elements: Vec<i64>,
    order_map: Vec<(u64, i64)>,
}

impl IntLift {
    pub fn elements(&self) -> &[i64] {
        &self.elements
    }

    /// Bijection from source residues to lifted integers.
    pub fn order_map(&self) -> &[(u64, i64)] {
        &self.order_map
    }
}

/// Lift A to Ã ⊂ Z along its covering AP. Requires diameter(A) * weight < p,
/// which guarantees |λ₁Ã+…+λₖÃ| = |λ₁A+…+λₖA| for every λ̄ with Σ|λᵢ| ≤ weight.
pub fn rectify(a: &ZpSet, weight: u64) -> Result<IntLift> {
    let p = a.modulus();
    let w = diameter(a)?;
    if w.len.saturating_mul(weight) >= p {
        return Err(Error::NotRectifiable {
            diameter: w.len,
            weight,
            p,
        });
    }
    let dinv = modinv(w.step, p);
    let mut order_map: Vec<(u64, i64)> = a
        .iter()
        .map(|x| {
            let j = ((x + p - w.start) % p) as u128 * dinv as u128 % p as u128;
            debug_assert!((j as u64) < w.len);
            (x, j as i64)
        })
        .collect();
    order_map.sort_by_key(|&(_, j)| j);
    let elements = order_map.iter().map(|&(_, j)| j).collect();
    Ok(IntLift {
        elements,
        order_map,
    })
}

/// |λ₁Ã + … + λₖÃ| over the integers, by direct enumeration.
pub fn int_dilate_sum(elements: &[i64], dv: &DilateVector) -> u64 {
    let mut acc: HashSet<i64> = [0i64].into_iter().collect();
    for &c in dv.coeffs() {
        let mut next = HashSet::with_capacity(acc.len() * elements.len());
        for &s in &acc {
            for &e in elements {
                next.insert(s + c * e);
            }
        }
        acc = next;
    }
    acc.len() as u64
}

/// Where a finite set lives for the purposes of m-fold sums.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Ambient {
    Integers,
    /// Z_p, p prime.
    Modular(u64),
}

/// A small set in a declared ambient group.
#[derive(Clone, Debug)]
pub struct AmbientSet {
    ambient: Ambient,
    elements: Vec<i64>,
}

impl AmbientSet {
    pub fn integers(mut elements: Vec<i64>) -> Self {
        elements.sort_unstable();
        elements.dedup();
        AmbientSet {
            ambient: Ambient::Integers,
            elements,
        }
    }

    pub fn modular(p: u64, elements: &[u64]) -> Result<Self> {
        let set = ZpSet::from_residues(p, elements)?;
        Ok(AmbientSet {
            ambient: Ambient::Modular(p),
            elements: set.iter().map(|x| x as i64).collect(),
        })
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    fn sum(&self, idxs: &[usize]) -> i128 {
        let s: i128 = idxs.iter().map(|&i| self.elements[i] as i128).sum();
        match self.ambient {
            Ambient::Integers => s,
            Ambient::Modular(p) => s.rem_euclid(p as i128),
        }
    }
}

const FREIMAN_CAP: usize = 12;

/// Exhaustive m-Freiman-isomorphism oracle: true iff some bijection A → B
/// preserves equality of m-fold sums in both directions. Size mismatch is
/// `false`, not an error. Capped at 12 elements.
pub fn freiman_isomorphic(a: &AmbientSet, b: &AmbientSet, m: u32) -> Result<bool> {
    if a.len() > FREIMAN_CAP || b.len() > FREIMAN_CAP {
        return Err(Error::OracleScale {
            got: a.len().max(b.len()),
            cap: FREIMAN_CAP,
        });
    }
    if a.len() != b.len() {
        return Ok(false);
    }
    if a.is_empty() {
        return Ok(true);
    }
    let n = a.len();
    let mut image = vec![usize::MAX; n]; // image[i] = index into b for a's i-th element
    let mut used = vec![false; n];
    Ok(extend_bijection(a, b, m as usize, &mut image, &mut used, 0))
}

fn extend_bijection(
    a: &AmbientSet,
    b: &AmbientSet,
    m: usize,
    image: &mut Vec<usize>,
    used: &mut Vec<bool>,
    depth: usize,
) -> bool {
    let n = a.len();
    if depth == n {
        return true;
    }
    for cand in 0..n {
        if used[cand] {
            continue;
        }
        image[depth] = cand;
        used[cand] = true;
        if prefix_consistent(a, b, m, image, depth)
            && extend_bijection(a, b, m, image, used, depth + 1)
        {
            return true;
        }
        used[cand] = false;
        image[depth] = usize::MAX;
    }
    false
}

/// Check sum-equality both ways over all m-multisets drawn from the assigned
/// prefix [0..=depth]. Multisets are regenerated per level; the oracle scale
/// keeps this cheap.
fn prefix_consistent(
    a: &AmbientSet,
    b: &AmbientSet,
    m: usize,
    image: &[usize],
    depth: usize,
) -> bool {
    let mut sums: Vec<(i128, i128)> = Vec::new();
    let mut idxs = vec![0usize; m];
    loop {
        let sa = a.sum(&idxs);
        let img: Vec<usize> = idxs.iter().map(|&i| image[i]).collect();
        let sb = b.sum(&img);
        sums.push((sa, sb));
        // next nondecreasing index tuple over 0..=depth
        let mut k = m;
        loop {
            if k == 0 {
                for (sa, sb) in &sums {
                    for (ta, tb) in &sums {
                        if (sa == ta) != (sb == tb) {
                            return false;
                        }
                    }
                }
                return true;
            }
            k -= 1;
            if idxs[k] < depth {
                idxs[k] += 1;
                for j in k + 1..m {
                    idxs[j] = idxs[k];
                }
                break;
            }
        }
    }
}
