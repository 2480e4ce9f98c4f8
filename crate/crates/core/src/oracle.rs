//! Ground truth at desk scale: exhaustive and randomized extremal-set
//! searches, plus exhaustive verification suites (Cauchy-Davenport,
//! Vosper's equality case, the Ruzsa triangle inequality).
//!
//! The exhaustive paths run on u32 bitmask sets (p ≤ 25), which keeps the
//! ~4M-pair suites at p = 11 near-instant; search results are re-verified
//! through the word-packed `ZpSet` kernel as a cross-check.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::arith::reduce_mod;
use crate::error::{Error, Result};
use crate::zp::{DilateVector, ZpSet};

const MASK_CAP: u64 = 25;
const ENUM_BUDGET: u128 = 10_000_000;

/// Cyclic bitmask arithmetic for p ≤ 25.
#[derive(Clone, Copy)]
struct MaskRing {
    p: u32,
    all: u32,
}

impl MaskRing {
    fn new(p: u64) -> Result<Self> {
        if p > MASK_CAP {
            return Err(Error::EnumerationBudget {
                p,
                size: 0,
                count: 1u128 << p.min(127),
                budget: ENUM_BUDGET,
            });
        }
        Ok(MaskRing {
            p: p as u32,
            all: ((1u64 << p) - 1) as u32,
        })
    }

    #[inline]
    fn rot(&self, m: u32, s: u32) -> u32 {
        if s == 0 {
            m
        } else {
            ((m << s) | (m >> (self.p - s))) & self.all
        }
    }

    #[inline]
    fn sumset(&self, a: u32, b: u32) -> u32 {
        let mut out = 0u32;
        let mut rest = a;
        while rest != 0 {
            let x = rest.trailing_zeros();
            rest &= rest - 1;
            out |= self.rot(b, x);
        }
        out
    }

    fn dilate(&self, a: u32, map: &[u32]) -> u32 {
        let mut out = 0u32;
        let mut rest = a;
        while rest != 0 {
            let x = rest.trailing_zeros();
            rest &= rest - 1;
            out |= 1 << map[x as usize];
        }
        out
    }

    /// Per-element dilation table for a coefficient.
    fn dilate_map(&self, c: i64) -> Vec<u32> {
        let p = self.p as u64;
        let r = reduce_mod(c, p);
        (0..p).map(|x| (x * r % p) as u32).collect()
    }

    fn dilate_sum_card(&self, a: u32, maps: &[Vec<u32>]) -> u32 {
        let mut acc = self.dilate(a, &maps[0]);
        for map in &maps[1..] {
            acc = self.sumset(acc, self.dilate(a, map));
        }
        acc.count_ones()
    }

    fn residues(&self, m: u32) -> Vec<u64> {
        (0..self.p)
            .filter(|&i| m >> i & 1 == 1)
            .map(|i| i as u64)
            .collect()
    }

    /// true iff the set is an AP with common difference d (any rotation of
    /// a consecutive run after dividing by d).
    fn is_ap_with_step(&self, m: u32, dinv_map: &[u32]) -> bool {
        let mapped = self.dilate(m, dinv_map);
        // a single cyclic run has exactly one position whose predecessor is absent
        let starts = mapped & !self.rot(mapped, 1);
        starts.count_ones() == 1
    }
}

/// One row of an extremal table: the minimal sumset over a searched family.
#[derive(Clone, Debug)]
pub struct ExtremalRecord {
    pub p: u64,
    pub lambdas: DilateVector,
    pub size: u64,
    pub min_sumset: u64,
    pub ratio: f64,
    pub witness: ZpSet,
    pub mode: SearchMode,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SearchMode {
    Exhaustive,
    /// Upper bound only: best set found by seeded local search.
    Randomized,
}

impl std::fmt::Display for SearchMode {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            SearchMode::Exhaustive => write!(f, "exhaustive"),
            SearchMode::Randomized => write!(f, "randomized"),
        }
    }
}

impl ExtremalRecord {
    /// Re-verifies the witness through the ZpSet kernel; a mismatch is a
    /// search bug, not a data error.
    fn checked(
        p: u64,
        lambdas: DilateVector,
        size: u64,
        min_sumset: u64,
        witness: ZpSet,
        mode: SearchMode,
    ) -> Result<Self> {
        assert_eq!(witness.len(), size, "witness has wrong cardinality");
        let verified = witness.dilate_sum(&lambdas)?.len();
        assert_eq!(
            verified, min_sumset,
            "witness sumset does not match the reported minimum"
        );
        if lambdas.len() == 2 && lambdas.coeffs().iter().all(|&c| reduce_mod(c, p) != 0) {
            debug_assert!(min_sumset >= (2 * size - 1).min(p));
        }
        Ok(ExtremalRecord {
            p,
            lambdas,
            size,
            min_sumset,
            ratio: min_sumset as f64 / size as f64,
            witness,
            mode,
        })
    }
}

fn binomial(n: u64, k: u64) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc * (n - i) as u128 / (i + 1) as u128;
        if acc > ENUM_BUDGET * 2 {
            return acc;
        }
    }
    acc
}

/// Exact minimum of |λ₁A + … + λₖA| over all A of the given size.
/// Enumeration is quotiented by translation (fix 0 ∈ A); sumset cardinality
/// is translation-invariant, so the minimum is unaffected. The witness is
/// the lexicographically least minimizer, recovered by canonicalizing ties
/// over all translates.
pub fn exhaustive_ex(p: u64, lambdas: &DilateVector, size: u64) -> Result<ExtremalRecord> {
    if size == 0 || size > p {
        return Err(Error::InvalidSize { size, p });
    }
    const EXHAUSTIVE_P_CAP: u64 = 23;
    if p > EXHAUSTIVE_P_CAP {
        return Err(Error::OracleScale {
            got: p as usize,
            cap: EXHAUSTIVE_P_CAP as usize,
        });
    }
    let count = binomial(p, size);
    if count > ENUM_BUDGET {
        return Err(Error::EnumerationBudget {
            p,
            size,
            count,
            budget: ENUM_BUDGET,
        });
    }
    let ring = MaskRing::new(p)?;
    let maps: Vec<Vec<u32>> = lambdas
        .coeffs()
        .iter()
        .map(|&c| ring.dilate_map(c))
        .collect();

    let mut best_card = u32::MAX;
    let mut best_canon: Option<Vec<u64>> = None;

    // subsets of {1..p-1} of size-1 elements, plus the anchored 0
    let s = size as usize;
    let mut combo: Vec<u32> = (1..s as u32).collect();
    loop {
        let mut mask = 1u32; // residue 0
        for &e in &combo {
            mask |= 1 << e;
        }
        let card = ring.dilate_sum_card(mask, &maps);
        if card < best_card {
            best_card = card;
            best_canon = Some(canonical_translate(&ring, mask));
        } else if card == best_card {
            let cand = canonical_translate(&ring, mask);
            if Some(&cand) < best_canon.as_ref() {
                best_canon = Some(cand);
            }
        }
        if !next_combination(&mut combo, p as u32) {
            break;
        }
    }

    let witness = ZpSet::from_residues(p, &best_canon.unwrap())?;
    ExtremalRecord::checked(
        p,
        lambdas.clone(),
        size,
        best_card as u64,
        witness,
        SearchMode::Exhaustive,
    )
}

/// Advance a strictly increasing combination over {1..p-1}; false when done.
fn next_combination(combo: &mut [u32], p: u32) -> bool {
    let k = combo.len();
    if k == 0 {
        return false;
    }
    let mut i = k;
    while i > 0 {
        i -= 1;
        if combo[i] < p - (k - i) as u32 {
            combo[i] += 1;
            for j in i + 1..k {
                combo[j] = combo[j - 1] + 1;
            }
            return true;
        }
    }
    false
}

/// Lexicographically least residue vector among all translates of the mask.
fn canonical_translate(ring: &MaskRing, mask: u32) -> Vec<u64> {
    let mut best: Option<Vec<u64>> = None;
    for v in 0..ring.p {
        let cand = ring.residues(ring.rot(mask, v));
        if best.as_ref().is_none_or(|b| &cand < b) {
            best = Some(cand);
        }
    }
    best.unwrap()
}

/// Seeded local search: single-element swaps with first improvement,
/// restarting from a fresh random set after 500 stagnant proposals. The
/// record is an upper bound on the true minimum and says so via its mode.
pub fn randomized_ex(
    p: u64,
    lambdas: &DilateVector,
    size: u64,
    iterations: u64,
    seed: u64,
) -> Result<ExtremalRecord> {
    if size == 0 || size > p {
        return Err(Error::InvalidSize { size, p });
    }
    const STAGNATION_RESTART: u64 = 500;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);

    let random_set = |rng: &mut ChaCha8Rng| -> ZpSet {
        let mut set = ZpSet::empty(p).expect("p validated by caller");
        while set.len() < size {
            set.insert(rng.gen_range(0..p));
        }
        set
    };

    let mut current = random_set(&mut rng);
    let mut current_card = current.dilate_sum(lambdas)?.len();
    let mut best = current.clone();
    let mut best_card = current_card;
    let mut stagnant = 0u64;

    for _ in 0..iterations {
        let members = current.residues();
        let out_elem = members[rng.gen_range(0..members.len())];
        let mut in_elem = rng.gen_range(0..p);
        while current.contains(in_elem) {
            in_elem = rng.gen_range(0..p);
        }
        let mut cand = current.clone();
        cand.remove(out_elem);
        cand.insert(in_elem);
        let card = cand.dilate_sum(lambdas)?.len();
        if card < current_card {
            current = cand;
            current_card = card;
            stagnant = 0;
            if card < best_card {
                best = current.clone();
                best_card = card;
            }
        } else {
            stagnant += 1;
            if stagnant >= STAGNATION_RESTART {
                current = random_set(&mut rng);
                current_card = current.dilate_sum(lambdas)?.len();
                stagnant = 0;
            }
        }
    }
    ExtremalRecord::checked(
        p,
        lambdas.clone(),
        size,
        best_card,
        best,
        SearchMode::Randomized,
    )
}

/// Outcome of an exhaustive pair suite.
#[derive(Clone, Copy, Debug)]
pub struct SuiteReport {
    pub p: u64,
    pub pairs: u64,
    /// Vosper only: equality instances examined.
    pub equality_cases: u64,
    pub violations: u64,
}

/// |A+B| ≥ min(|A|+|B|−1, p) over every ordered pair of nonempty subsets.
pub fn cd_suite(p: u64) -> Result<SuiteReport> {
    let ring = MaskRing::new(p)?;
    if p > 13 {
        return Err(Error::EnumerationBudget {
            p,
            size: 0,
            count: 1u128 << (2 * p),
            budget: ENUM_BUDGET,
        });
    }
    let n = 1u32 << p;
    let mut pairs = 0u64;
    let mut violations = 0u64;
    for a in 1..n {
        let ca = a.count_ones();
        for b in 1..n {
            pairs += 1;
            let s = ring.sumset(a, b).count_ones();
            if s < (ca + b.count_ones() - 1).min(p as u32) {
                violations += 1;
            }
        }
    }
    Ok(SuiteReport {
        p,
        pairs,
        equality_cases: 0,
        violations,
    })
}

/// Every Cauchy-Davenport equality instance with |A|,|B| ≥ 2 and
/// |A+B| ≤ p−2 must have both sets arithmetic progressions with a common
/// difference.
pub fn vosper_suite(p: u64) -> Result<SuiteReport> {
    let ring = MaskRing::new(p)?;
    if p > 13 {
        return Err(Error::EnumerationBudget {
            p,
            size: 0,
            count: 1u128 << (2 * p),
            budget: ENUM_BUDGET,
        });
    }
    let dinv_maps: Vec<Vec<u32>> = (1..p)
        .map(|d| ring.dilate_map(crate::arith::modinv(d, p) as i64))
        .collect();
    let n = 1u32 << p;
    let mut pairs = 0u64;
    let mut equality_cases = 0u64;
    let mut violations = 0u64;
    for a in 1..n {
        let ca = a.count_ones();
        if ca < 2 {
            continue;
        }
        for b in 1..n {
            let cb = b.count_ones();
            if cb < 2 {
                continue;
            }
            pairs += 1;
            let s = ring.sumset(a, b).count_ones();
            if s as u64 == (ca + cb - 1) as u64 && s as u64 <= p - 2 {
                equality_cases += 1;
                let shared_step = dinv_maps
                    .iter()
                    .any(|map| ring.is_ap_with_step(a, map) && ring.is_ap_with_step(b, map));
                if !shared_step {
                    violations += 1;
                }
            }
        }
    }
    Ok(SuiteReport {
        p,
        pairs,
        equality_cases,
        violations,
    })
}

/// Outcome of the randomized Ruzsa suite.
#[derive(Clone, Copy, Debug)]
pub struct RuzsaReport {
    pub p: u64,
    pub trials: u64,
    pub violations: u64,
    /// Violations of the |A+A| ≤ |λ₁A+λ₂A|²/|λ₂A| specialization.
    pub chained_violations: u64,
}

/// Seeded random triples (B, C, D): assert |B+D|·|C| ≤ |B+C|·|C+D|.
/// Each trial also checks the chained form used to bound |A+A| through a
/// sum of dilates (B = D = A, C = 2A).
pub fn ruzsa_suite(p: u64, trials: u64, seed: u64) -> Result<RuzsaReport> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let random_nonempty = |rng: &mut ChaCha8Rng| -> ZpSet {
        loop {
            let mut set = ZpSet::empty(p).expect("validated");
            for x in 0..p {
                if rng.gen_bool(0.5) {
                    set.insert(x);
                }
            }
            if !set.is_empty() {
                return set;
            }
        }
    };
    let mut violations = 0u64;
    let mut chained_violations = 0u64;
    for _ in 0..trials {
        let b = random_nonempty(&mut rng);
        let c = random_nonempty(&mut rng);
        let d = random_nonempty(&mut rng);
        let bd = b.sumset(&d)?.len();
        let bc = b.sumset(&c)?.len();
        let cd = c.sumset(&d)?.len();
        if bd * c.len() > bc * cd {
            violations += 1;
        }

        let a = random_nonempty(&mut rng);
        let two_a = a.dilate(2);
        let aa = a.sumset(&a)?.len();
        let a2a = a.sumset(&two_a)?.len();
        if aa * two_a.len() > a2a * a2a {
            chained_violations += 1;
        }
    }
    Ok(RuzsaReport {
        p,
        trials,
        violations,
        chained_violations,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn dv(coeffs: &[i64]) -> DilateVector {
        DilateVector::new(coeffs.to_vec()).unwrap()
    }

    /// Independent brute force: all C(p, size) subsets, sumset by direct
    /// double loop over elements.
    fn naive_min_sumset(p: u64, coeffs: &[i64], size: u64) -> u64 {
        let mut best = u64::MAX;
        let n = 1u32 << p;
        for mask in 1..n {
            if u64::from(mask.count_ones()) != size {
                continue;
            }
            let elems: Vec<u64> = (0..p).filter(|&i| mask >> i & 1 == 1).collect();
            let mut sums: std::collections::HashSet<u64> = [0].into_iter().collect();
            for &c in coeffs {
                let r = reduce_mod(c, p);
                let mut next = std::collections::HashSet::new();
                for &s in &sums {
                    for &e in &elems {
                        next.insert((s + e * r) % p);
                    }
                }
                sums = next;
            }
            best = best.min(sums.len() as u64);
        }
        best
    }

    #[test]
    fn exhaustive_matches_naive_oracle() {
        // p=7, (1,1), size 3: AP attains the Cauchy-Davenport floor 5
        let r = exhaustive_ex(7, &dv(&[1, 1]), 3).unwrap();
        assert_eq!(r.min_sumset, 5);
        assert_eq!(r.min_sumset, naive_min_sumset(7, &[1, 1], 3));

        // p=7, (1,2), size 2: CD through one pairing gives >= 3; the true
        // enumerated minimum is 4 (the four sums 3a, 3b, a+2b, b+2a are
        // pairwise distinct for a != b mod 7)
        let r = exhaustive_ex(7, &dv(&[1, 2]), 2).unwrap();
        assert_eq!(r.min_sumset, naive_min_sumset(7, &[1, 2], 2));
        assert_eq!(r.min_sumset, 4);

        // p=13, (1,-2), size 3: reported, compared against the naive route
        let r = exhaustive_ex(13, &dv(&[1, -2]), 3).unwrap();
        assert_eq!(r.min_sumset, naive_min_sumset(13, &[1, -2], 3));
        assert_eq!(r.mode, SearchMode::Exhaustive);
    }

    #[test]
    fn exhaustive_witness_is_lex_least() {
        let r = exhaustive_ex(7, &dv(&[1, 1]), 3).unwrap();
        // {0,1,2} is the lexicographically least minimizer
        assert_eq!(r.witness.residues(), vec![0, 1, 2]);
    }

    #[test]
    fn exhaustive_guards() {
        // C(23,12) fits the budget thanks to the translation quotient
        assert!(exhaustive_ex(23, &dv(&[1, 1]), 12).is_ok());
        assert!(matches!(
            exhaustive_ex(29, &dv(&[1, 1]), 3),
            Err(Error::OracleScale { .. })
        ));
        assert!(exhaustive_ex(7, &dv(&[1, 1]), 0).is_err());
    }

    #[test]
    fn randomized_zero_iterations_returns_seed_set() {
        let a = randomized_ex(101, &dv(&[1, 1]), 10, 0, 42).unwrap();
        let b = randomized_ex(101, &dv(&[1, 1]), 10, 0, 42).unwrap();
        assert_eq!(a.witness, b.witness);
        assert_eq!(a.mode, SearchMode::Randomized);
    }

    #[test]
    fn randomized_finds_progressions() {
        let r = randomized_ex(101, &dv(&[1, 1]), 10, 4000, 7).unwrap();
        assert!(
            r.min_sumset <= 21,
            "local search should approach 2s-1 = 19, got {}",
            r.min_sumset
        );
    }

    #[test]
    fn randomized_never_beats_exhaustive() {
        let exact = exhaustive_ex(11, &dv(&[1, 2]), 3).unwrap();
        for seed in 0..5 {
            let heur = randomized_ex(11, &dv(&[1, 2]), 3, 2000, seed).unwrap();
            assert!(heur.min_sumset >= exact.min_sumset);
        }
    }

    #[test]
    fn cd_suite_counts() {
        let r = cd_suite(7).unwrap();
        assert_eq!(r.pairs, 127 * 127);
        assert_eq!(r.violations, 0);
    }

    #[test]
    fn vosper_small() {
        for p in [5, 7] {
            let r = vosper_suite(p).unwrap();
            assert_eq!(r.violations, 0, "p={p}");
            assert!(r.equality_cases > 0);
        }
    }

    #[test]
    fn ruzsa_trivial_and_random() {
        let r = ruzsa_suite(11, 200, 3).unwrap();
        assert_eq!(r.violations, 0);
        assert_eq!(r.chained_violations, 0);
    }
}
