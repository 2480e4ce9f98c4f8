//! Exact set arithmetic over Z_p.
//!
//! Sets are dense word-packed membership vectors: one bit per residue.
//! The sumset kernel ORs cyclically shifted copies of one operand's vector
//! across the other operand's members, so `A + B` costs O(min(|A|,|B|)
//! * p/64) word operations and is exact at any scale we care about.

use crate::arith::{gcd_u64, is_prime, reduce_mod};
use crate::error::{Error, Result};

const WORD: usize = 64;

/// A subset of Z_p, p prime.
#[derive(Clone, PartialEq, Eq)]
pub struct ZpSet {
    p: u64,
    words: Vec<u64>,
    card: u64,
}

impl std::fmt::Debug for ZpSet {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "ZpSet(p={}, |A|={})", self.p, self.card)
    }
}

impl ZpSet {
    /// Empty set; checks that `p` is prime.
    pub fn empty(p: u64) -> Result<Self> {
        if !is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        Ok(Self::empty_unchecked(p))
    }

    fn empty_unchecked(p: u64) -> Self {
        let nwords = (p as usize).div_ceil(WORD);
        ZpSet {
            p,
            words: vec![0; nwords],
            card: 0,
        }
    }

    /// Build from residues; checks primality and range.
    pub fn from_residues(p: u64, residues: &[u64]) -> Result<Self> {
        let mut set = Self::empty(p)?;
        for &x in residues {
            if x >= p {
                return Err(Error::ResidueOutOfRange {
                    residue: x,
                    modulus: p,
                });
            }
            set.insert(x);
        }
        Ok(set)
    }

    /// All of Z_p.
    pub fn full(p: u64) -> Result<Self> {
        let mut set = Self::empty(p)?;
        for w in set.words.iter_mut() {
            *w = !0;
        }
        set.clear_top_bits();
        set.card = p;
        Ok(set)
    }

    fn clear_top_bits(&mut self) {
        let used = self.p as usize % WORD;
        if used != 0 {
            let last = self.words.len() - 1;
            self.words[last] &= (1u64 << used) - 1;
        }
    }

    pub fn modulus(&self) -> u64 {
        self.p
    }

    /// Cardinality.
    pub fn len(&self) -> u64 {
        self.card
    }

    pub fn is_empty(&self) -> bool {
        self.card == 0
    }

    pub fn density(&self) -> f64 {
        self.card as f64 / self.p as f64
    }

    pub fn contains(&self, x: u64) -> bool {
        debug_assert!(x < self.p);
        self.words[x as usize / WORD] >> (x as usize % WORD) & 1 == 1
    }

    pub fn insert(&mut self, x: u64) {
        debug_assert!(x < self.p);
        let w = &mut self.words[x as usize / WORD];
        let bit = 1u64 << (x as usize % WORD);
        if *w & bit == 0 {
            *w |= bit;
            self.card += 1;
        }
    }

    pub fn remove(&mut self, x: u64) {
        debug_assert!(x < self.p);
        let w = &mut self.words[x as usize / WORD];
        let bit = 1u64 << (x as usize % WORD);
        if *w & bit != 0 {
            *w &= !bit;
            self.card -= 1;
        }
    }

    /// Ascending iterator over members.
    pub fn iter(&self) -> impl Iterator<Item = u64> + '_ {
        self.words.iter().enumerate().flat_map(|(i, &w)| {
            let mut w = w;
            std::iter::from_fn(move || {
                if w == 0 {
                    None
                } else {
                    let b = w.trailing_zeros();
                    w &= w - 1;
                    Some((i * WORD) as u64 + b as u64)
                }
            })
        })
    }

    pub fn residues(&self) -> Vec<u64> {
        self.iter().collect()
    }

    /// {λa : a ∈ A}. λ is reduced mod p; λ ≡ 0 collapses a nonempty set to {0}.
    pub fn dilate(&self, lambda: i64) -> ZpSet {
        let l = reduce_mod(lambda, self.p);
        let mut out = Self::empty_unchecked(self.p);
        if l == 0 {
            if !self.is_empty() {
                out.insert(0);
            }
            return out;
        }
        for a in self.iter() {
            out.insert(((a as u128 * l as u128) % self.p as u128) as u64);
        }
        out
    }

    /// A + B = {a + b}. Errors on mismatched moduli; an empty operand gives
    /// the empty set.
    pub fn sumset(&self, other: &ZpSet) -> Result<ZpSet> {
        if self.p != other.p {
            return Err(Error::ModulusMismatch {
                left: self.p,
                right: other.p,
            });
        }
        let (outer, inner) = if self.card <= other.card {
            (self, other)
        } else {
            (other, self)
        };
        let mut out = Self::empty_unchecked(self.p);
        for a in outer.iter() {
            or_rotated(&mut out.words, &inner.words, a, self.p);
        }
        out.card = out.words.iter().map(|w| w.count_ones() as u64).sum();
        Ok(out)
    }

    /// λ₁A + λ₂A + … + λₖA. Errors on empty A (the ratio |X|/|A| would be
    /// undefined downstream).
    pub fn dilate_sum(&self, dv: &DilateVector) -> Result<ZpSet> {
        if self.is_empty() {
            return Err(Error::EmptySet);
        }
        let mut acc = self.dilate(dv.coeffs()[0]);
        for &c in &dv.coeffs()[1..] {
            acc = acc.sumset(&self.dilate(c))?;
        }
        Ok(acc)
    }

    /// true iff (A − B) mod p avoids the window {−t,…,t}.
    pub fn difference_window(&self, other: &ZpSet, t: u64) -> Result<bool> {
        if self.p != other.p {
            return Err(Error::ModulusMismatch {
                left: self.p,
                right: other.p,
            });
        }
        if t >= self.p / 2 {
            return Err(Error::WindowTooLarge { t, p: self.p });
        }
        let diff = self.sumset(&other.dilate(-1))?;
        for w in 0..=t {
            if diff.contains(w) {
                return Ok(false);
            }
            if w > 0 && diff.contains(self.p - w) {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// Render in the set file format: a `p=` line then the sorted residues.
    pub fn to_text(&self) -> String {
        let mut s = format!("p={}\n", self.p);
        let mut first = true;
        for x in self.iter() {
            if !first {
                s.push(' ');
            }
            s.push_str(&x.to_string());
            first = false;
        }
        s.push('\n');
        s
    }

    /// Parse the set file format. Leading `#` lines are provenance comments
    /// and are skipped. Line 1: `p=<prime>`; line 2: strictly increasing
    /// residues (may be empty for the empty set). Duplicates, unsorted input
    /// and out-of-range values are rejected.
    pub fn from_text(text: &str) -> Result<ZpSet> {
        let mut lines = text.lines().filter(|l| !l.trim_start().starts_with('#'));
        let header = lines
            .next()
            .ok_or_else(|| Error::Parse("missing p= line".into()))?;
        let header = header.trim();
        let p: u64 = header
            .strip_prefix("p=")
            .ok_or_else(|| Error::Parse(format!("expected `p=<prime>`, got `{header}`")))?
            .parse()
            .map_err(|e| Error::Parse(format!("bad modulus: {e}")))?;
        let mut set = ZpSet::empty(p)?;
        if let Some(body) = lines.next() {
            let mut prev: Option<u64> = None;
            for tok in body.split_whitespace() {
                let x: u64 = tok
                    .parse()
                    .map_err(|e| Error::Parse(format!("bad residue `{tok}`: {e}")))?;
                if x >= p {
                    return Err(Error::ResidueOutOfRange {
                        residue: x,
                        modulus: p,
                    });
                }
                if let Some(q) = prev {
                    if x <= q {
                        return Err(Error::Parse(format!(
                            "residues must be strictly increasing ({q} then {x})"
                        )));
                    }
                }
                prev = Some(x);
                set.insert(x);
            }
        }
        Ok(set)
    }
}

/// OR `src`, rotated left by `shift` positions within a p-bit window, into `dst`.
fn or_rotated(dst: &mut [u64], src: &[u64], shift: u64, p: u64) {
    let p = p as usize;
    let s = shift as usize % p;
    if s == 0 {
        for (d, x) in dst.iter_mut().zip(src) {
            *d |= x;
        }
        return;
    }
    or_bit_range(dst, s, src, 0, p - s);
    or_bit_range(dst, 0, src, p - s, s);
}

/// OR `len` bits of `src` starting at bit `src_off` into `dst` at `dst_off`.
fn or_bit_range(dst: &mut [u64], dst_off: usize, src: &[u64], src_off: usize, len: usize) {
    let mut remaining = len;
    let mut d = dst_off;
    let mut s = src_off;
    while remaining > 0 {
        let dw = d / WORD;
        let db = d % WORD;
        let take = (WORD - db).min(remaining);
        let sw = s / WORD;
        let sb = s % WORD;
        let mut bits = src[sw] >> sb;
        if sb != 0 && sb + take > WORD {
            bits |= src[sw + 1] << (WORD - sb);
        }
        let mask = if take == WORD { !0 } else { (1u64 << take) - 1 };
        dst[dw] |= (bits & mask) << db;
        d += take;
        s += take;
        remaining -= take;
    }
}

/// An ordered list of nonzero dilate coefficients (λ₁,…,λₖ).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DilateVector {
    coeffs: Vec<i64>,
    weight: u64,
    coprime: bool,
}

impl DilateVector {
    pub fn new(coeffs: Vec<i64>) -> Result<Self> {
        if coeffs.is_empty() || coeffs.contains(&0) {
            return Err(Error::BadDilateVector);
        }
        let weight = coeffs.iter().map(|c| c.unsigned_abs()).sum();
        let g = coeffs
            .iter()
            .fold(0u64, |g, &c| gcd_u64(g, c.unsigned_abs()));
        Ok(DilateVector {
            coeffs,
            weight,
            coprime: g == 1,
        })
    }

    pub fn coeffs(&self) -> &[i64] {
        &self.coeffs
    }

    pub fn len(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// Σ|λᵢ|, the main-term multiplier.
    pub fn weight(&self) -> u64 {
        self.weight
    }

    pub fn is_coprime(&self) -> bool {
        self.coprime
    }

    /// Parse `"1,-2"`.
    pub fn parse(text: &str) -> Result<Self> {
        let coeffs: std::result::Result<Vec<i64>, _> =
            text.split(',').map(|t| t.trim().parse::<i64>()).collect();
        Self::new(coeffs.map_err(|e| Error::Parse(format!("bad dilate vector `{text}`: {e}")))?)
    }
}

impl std::fmt::Display for DilateVector {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let parts: Vec<String> = self.coeffs.iter().map(|c| c.to_string()).collect();
        write!(f, "{}", parts.join(";"))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn set(p: u64, xs: &[u64]) -> ZpSet {
        ZpSet::from_residues(p, xs).unwrap()
    }

    #[test]
    fn dilate_examples() {
        assert_eq!(set(5, &[1, 2]).dilate(1).residues(), vec![1, 2]);
        assert_eq!(set(5, &[1, 2]).dilate(2).residues(), vec![2, 4]);
        assert_eq!(set(5, &[1, 2]).dilate(5).residues(), vec![0]);
        assert_eq!(set(5, &[]).dilate(5).residues(), Vec::<u64>::new());
        // negative coefficient acts through its residue
        assert_eq!(
            set(7, &[1, 2, 4]).dilate(-2).residues(),
            set(7, &[1, 2, 4]).dilate(5).residues()
        );
    }

    #[test]
    fn sumset_examples() {
        let r = set(5, &[0, 1]).sumset(&set(5, &[0, 1])).unwrap();
        assert_eq!(r.residues(), vec![0, 1, 2]);

        let full = ZpSet::full(7).unwrap();
        let r = full.sumset(&set(7, &[3])).unwrap();
        assert_eq!(r.len(), 7);

        let r = set(7, &[1, 3]).sumset(&set(7, &[2, 5])).unwrap();
        assert_eq!(r.residues(), vec![1, 3, 5, 6]);
    }

    #[test]
    fn sumset_empty_and_mismatch() {
        let r = set(7, &[]).sumset(&set(7, &[1, 2])).unwrap();
        assert!(r.is_empty());
        assert!(matches!(
            set(7, &[1]).sumset(&set(5, &[1])),
            Err(Error::ModulusMismatch { .. })
        ));
    }

    #[test]
    fn dilate_sum_examples() {
        let dv = DilateVector::new(vec![1, 2]).unwrap();
        let r = set(11, &[0, 1]).dilate_sum(&dv).unwrap();
        assert_eq!(r.residues(), vec![0, 1, 2, 3]);

        // brute force over all 9 pairwise sums of {1,2,4} + 2*{1,2,4} in Z_7
        let a = set(7, &[1, 2, 4]);
        let mut naive = std::collections::BTreeSet::new();
        for x in a.iter() {
            for y in a.iter() {
                naive.insert((x + 2 * y) % 7);
            }
        }
        let r = a.dilate_sum(&dv).unwrap();
        assert_eq!(r.residues(), naive.into_iter().collect::<Vec<_>>());
        assert_eq!(r.residues(), vec![1, 2, 3, 4, 5, 6]);

        let r = set(11, &[0]).dilate_sum(&dv).unwrap();
        assert_eq!(r.residues(), vec![0]);

        assert!(matches!(set(11, &[]).dilate_sum(&dv), Err(Error::EmptySet)));
    }

    #[test]
    fn difference_window_examples() {
        // 0 not in A + 2A for the cycle witness {1,2,4} in Z_7
        let a = set(7, &[1, 2, 4]);
        assert!(a.dilate(1).difference_window(&a.dilate(-2), 0).unwrap());

        let full = ZpSet::full(7).unwrap();
        assert!(!full.difference_window(&full, 0).unwrap());

        assert!(set(11, &[0]).difference_window(&set(11, &[3]), 2).unwrap());
        assert!(matches!(
            set(7, &[0]).difference_window(&set(7, &[1]), 3),
            Err(Error::WindowTooLarge { .. })
        ));
    }

    #[test]
    fn cauchy_davenport_small_exhaustive() {
        // |A+B| >= min(|A|+|B|-1, p) for all nonempty pairs, p = 7
        let p = 7u64;
        for am in 1u32..1 << p {
            for bm in 1u32..1 << p {
                let a = set(p, &(0..p).filter(|&i| am >> i & 1 == 1).collect::<Vec<_>>());
                let b = set(p, &(0..p).filter(|&i| bm >> i & 1 == 1).collect::<Vec<_>>());
                let s = a.sumset(&b).unwrap();
                assert!(s.len() >= (a.len() + b.len() - 1).min(p));
            }
        }
    }

    #[test]
    fn ruzsa_triangle_small_exhaustive() {
        // |B+D| * |C| <= |B+C| * |C+D| over all nonempty triples, p = 5
        let p = 5u64;
        let sets: Vec<ZpSet> = (1u32..1 << p)
            .map(|m| set(p, &(0..p).filter(|&i| m >> i & 1 == 1).collect::<Vec<_>>()))
            .collect();
        for b in &sets {
            for c in &sets {
                for d in &sets {
                    let bd = b.sumset(d).unwrap().len();
                    let bc = b.sumset(c).unwrap().len();
                    let cd = c.sumset(d).unwrap().len();
                    assert!(bd * c.len() <= bc * cd);
                }
            }
        }
    }

    #[test]
    fn dilate_bijective_for_units() {
        let a = set(11, &[0, 1, 5, 7]);
        for l in 1..11 {
            assert_eq!(a.dilate(l).len(), a.len());
        }
    }

    #[test]
    fn file_roundtrip() {
        let a = set(10007, &[0, 1, 2, 9000, 10006]);
        let text = a.to_text();
        assert_eq!(ZpSet::from_text(&text).unwrap(), a);

        let with_header = format!("# lambda=2 note\n{text}");
        assert_eq!(ZpSet::from_text(&with_header).unwrap(), a);
    }

    #[test]
    fn file_rejects_bad_input() {
        assert!(ZpSet::from_text("p=10\n1 2\n").is_err()); // composite
        assert!(ZpSet::from_text("p=7\n1 1\n").is_err()); // duplicate
        assert!(ZpSet::from_text("p=7\n2 1\n").is_err()); // unsorted
        assert!(ZpSet::from_text("p=7\n7\n").is_err()); // out of range
        assert!(ZpSet::from_text("p=7\n").unwrap().is_empty());
    }

    #[test]
    fn dilate_vector_validation() {
        assert!(DilateVector::new(vec![]).is_err());
        assert!(DilateVector::new(vec![1, 0]).is_err());
        let dv = DilateVector::new(vec![1, -2]).unwrap();
        assert_eq!(dv.weight(), 3);
        assert!(dv.is_coprime());
        let dv = DilateVector::new(vec![2, -4]).unwrap();
        assert!(!dv.is_coprime());
        assert_eq!(DilateVector::parse("1, -2").unwrap().coeffs(), &[1, -2]);
    }
}
