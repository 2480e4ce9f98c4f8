//! Extremal constructions: the digraph cycle picker and the explicit
//! zero-run tower on the circle.
//!
//! The tower: fix a multiplier ν with |ν| ≥ 2 and a window E₀ = [0, W).
//! E_i is the set of circle points whose orbit under x ↦ νx first enters
//! E₀ at step i; equivalently, whose base-ν expansion has its first run of
//! m consecutive zeros starting at position i. The E_i are pairwise
//! disjoint, satisfy ν·E_{i+1} ⊆ E_i, and exhaust the circle up to a
//! residual that decays geometrically in i/m. Taking the odd-indexed
//! levels produces a set disjoint from its own ν-dilate with measure close
//! to 1/2 — which transfers to Z_p sets A of density near 1/2 whose sumset
//! A + λA (λ = −ν) misses a window of residues.

use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};

use crate::arith::{multiplicative_order, reduce_mod};
use crate::circle::{prune_min_cover, rat, IntervalSet, Rational};
use crate::error::{Error, Result};
use crate::zp::{DilateVector, ZpSet};

/// Everything below this modulus is toy scale for the density guarantee.
pub const RECOMMENDED_MIN_P: u64 = 10_000;

/// Default interval cap for the exact-interval pipeline.
pub const DEFAULT_INTERVAL_CAP: usize = 1_000_000;

/// The relative sumset deficit the default pruning window is sized for.
pub const DEFAULT_DEFICIT_TARGET_INV: u64 = 2000;

/// Parameters for the zero-run tower driving A + λA.
#[derive(Clone, Debug)]
pub struct ConstructionParams {
    /// The dilate in A + λA, |λ| ≥ 2.
    pub lambda: i64,
    /// Circle multiplier ν = −λ.
    pub nu: i64,
    /// Zero-run length.
    pub m: u32,
    /// Tower half-height: odd levels up to 2t+1 are kept.
    pub t: u32,
    /// Target density deficit.
    pub epsilon: Rational,
    /// Span budget for the exact-interval pipeline.
    pub interval_cap: usize,
}

impl ConstructionParams {
    pub fn new(lambda: i64, m: u32, t: u32, epsilon: Rational) -> Result<Self> {
        if lambda.unsigned_abs() < 2 {
            return Err(Error::UnsupportedDilate(lambda));
        }
        if !(epsilon > Rational::zero() && epsilon < rat(1, 2)) {
            return Err(Error::EpsilonOutOfRange(epsilon.to_string()));
        }
        if m < 1 || t < 1 {
            return Err(Error::Parse("m and t must be >= 1".into()));
        }
        Ok(ConstructionParams {
            lambda,
            nu: -lambda,
            m,
            t,
            epsilon,
            interval_cap: DEFAULT_INTERVAL_CAP,
        })
    }

    /// Positive multiplier whose powers carry the measure estimate:
    /// ν itself when ν > 0, ν² when ν < 0.
    pub fn nu_eff(&self) -> u64 {
        if self.nu > 0 {
            self.nu as u64
        } else {
            (self.nu * self.nu) as u64
        }
    }

    /// Width of E₀ as an exact rational, ν_eff^{−m}.
    pub fn window_width(&self) -> Rational {
        let mut den = num_bigint::BigInt::one();
        for _ in 0..self.m {
            den *= self.nu_eff();
        }
        BigRational::new(num_bigint::BigInt::one(), den)
    }

    /// How deep the modular membership scan goes: 2t+1 levels of the
    /// ν-tower for ν > 0; doubled (4t+3) for ν < 0, where the measure
    /// guarantee flows through the ν² levels.
    pub fn scan_depth(&self) -> u32 {
        if self.nu > 0 {
            2 * self.t + 1
        } else {
            4 * self.t + 3
        }
    }

    /// The guaranteed density floor 1/2 − (1/2)(1−W)^{(2t+1)/m} − (1/2)W,
    /// as f64 for reporting.
    pub fn density_floor(&self) -> f64 {
        let w = self.window_width().to_f64().unwrap();
        0.5 - 0.5 * (1.0 - w).powf((2.0 * self.t as f64 + 1.0) / self.m as f64) - 0.5 * w
    }
}

/// Smallest (m, t) meeting the explicit inequalities:
/// ν_eff^{−m} ≤ ε/2, then (1 − ν_eff^{−m})^{(2t+1)/m} ≤ ε.
/// Both comparisons are exact (the second via m-th powers).
pub fn choose_params(lambda: i64, epsilon: &Rational) -> Result<ConstructionParams> {
    if lambda.unsigned_abs() < 2 {
        return Err(Error::UnsupportedDilate(lambda));
    }
    if !(epsilon > &Rational::zero() && epsilon < &rat(1, 2)) {
        return Err(Error::EpsilonOutOfRange(epsilon.to_string()));
    }
    let nu = -lambda;
    let nu_eff = if nu > 0 { nu as u64 } else { (nu * nu) as u64 };
    let two = rat(2, 1);

    let mut m = 1u32;
    let mut power = rat(nu_eff as i64, 1); // nu_eff^m
    while &power * epsilon < two {
        m += 1;
        power *= rat(nu_eff as i64, 1);
    }

    // (1-W)^(2t+1) <= eps^m  <=>  (1-W)^((2t+1)/m) <= eps
    let w = Rational::one() / power;
    let shrink = Rational::one() - &w;
    let eps_m = {
        let mut e = Rational::one();
        for _ in 0..m {
            e *= epsilon;
        }
        e
    };
    let mut t = 1u32;
    let mut lhs = &shrink * &shrink * &shrink; // (1-W)^(2t+1) at t=1
    while lhs > eps_m {
        t += 1;
        lhs *= &shrink * &shrink;
    }
    ConstructionParams::new(lambda, m, t.max(m), epsilon.clone())
}

/// Outcome of the cycle construction.
#[derive(Clone, Debug)]
pub struct CycleOutcome {
    pub set: ZpSet,
    /// Common cycle length: the multiplicative order of −λ₁/λ₂ mod p.
    pub cycle_len: u64,
}

/// Decompose Z_p∖{0} into the cycles of x ↦ (−λ₁/λ₂)x and pick alternating
/// vertices: ⌊k/2⌋ per cycle, starting from each cycle's least element and
/// dropping the final pick on odd cycles. The result A has 0 ∉ λ₁A + λ₂A
/// and |A| = ((p−1)/k)·⌊k/2⌋.
pub fn cycle_construction(p: u64, l1: i64, l2: i64) -> Result<CycleOutcome> {
    let mut set = ZpSet::empty(p)?; // validates primality
    let l1r = reduce_mod(l1, p);
    let l2r = reduce_mod(l2, p);
    if l1r == 0 {
        return Err(Error::DegenerateDilate(l1));
    }
    if l2r == 0 {
        return Err(Error::DegenerateDilate(l2));
    }
    let c = ((p - l1r) as u128 * crate::arith::modinv(l2r, p) as u128 % p as u128) as u64;
    if c == 1 {
        return Err(Error::NoValidSet { multiplier: c, p });
    }
    let k = multiplicative_order(c, p);
    let mut visited = vec![false; p as usize];
    for start in 1..p {
        if visited[start as usize] {
            continue;
        }
        // `start` is the least element of its cycle: anything smaller in the
        // cycle would already have been visited.
        let mut x = start;
        let mut pos = 0u64;
        loop {
            visited[x as usize] = true;
            // even walk positions, dropping the final pick on odd cycles
            if pos.is_multiple_of(2) && pos + 1 < k {
                set.insert(x);
            }
            x = (x as u128 * c as u128 % p as u128) as u64;
            pos += 1;
            if x == start {
                break;
            }
        }
        debug_assert_eq!(pos, k);
    }
    debug_assert_eq!(set.len(), (p - 1) / k * (k / 2));
    Ok(CycleOutcome { set, cycle_len: k })
}

/// E_0, …, E_n as exact interval sets, by the preimage recursion
/// E_{i+1} = ν^{-1}(E_i) ∖ E_0. Positive ν only; errors when the span
/// count would exceed the cap.
pub fn zero_run_levels(params: &ConstructionParams, up_to: u32) -> Result<Vec<IntervalSet>> {
    if params.nu < 2 {
        return Err(Error::UnsupportedDilate(params.lambda));
    }
    let nu = params.nu as u64;
    let e0 = IntervalSet::new(vec![(Rational::zero(), params.window_width())])?;
    let mut levels = vec![e0.clone()];
    for _ in 0..up_to {
        let prev = levels.last().unwrap();
        let needed = prev.span_count() * nu as usize;
        if needed > params.interval_cap {
            return Err(Error::IntervalCap {
                needed,
                cap: params.interval_cap,
            });
        }
        let next = prev.preimage_mul(nu).difference(&e0);
        levels.push(next);
    }
    Ok(levels)
}

/// E_i alone (see `zero_run_levels`).
pub fn zero_run_set(params: &ConstructionParams, i: u32) -> Result<IntervalSet> {
    Ok(zero_run_levels(params, i)?.pop().unwrap())
}

/// μ(E_i) by a run-length dynamic program over base-ν digit strings:
/// states track the current trailing zero-run (< m), absorbing once a run
/// of m completes. Exact rationals throughout; independent of the interval
/// pipeline.
pub fn level_measure(params: &ConstructionParams, i: u32) -> Result<Rational> {
    Ok(tower_dp(params, i + 1)?.0[i as usize].clone())
}

/// Exact residual 1 − Σ_{i<n} μ(E_i) (the measure not yet captured by the
/// first n levels).
pub fn residual_measure(params: &ConstructionParams, n: u32) -> Result<Rational> {
    Ok(tower_dp(params, n)?.1)
}

/// Returns (μ(E_0..E_{n-1}), residual after n levels).
fn tower_dp(params: &ConstructionParams, n: u32) -> Result<(Vec<Rational>, Rational)> {
    if params.nu < 2 {
        return Err(Error::UnsupportedDilate(params.lambda));
    }
    let nu = rat(params.nu, 1);
    let zero_p = Rational::one() / &nu;
    let other_p = Rational::one() - &zero_p;
    let m = params.m as usize;

    // alive[s]: measure of prefixes with trailing zero-run s, no run of m yet
    let mut alive = vec![Rational::zero(); m];
    alive[0] = Rational::one();
    let mut levels = Vec::with_capacity(n as usize);
    // absorption at digit step j corresponds to first-hit index j - m
    for _ in 0..m.saturating_sub(1) {
        alive = dp_step(&alive, &zero_p, &other_p, m).0;
    }
    for _ in 0..n {
        let (next, absorbed) = dp_step(&alive, &zero_p, &other_p, m);
        levels.push(absorbed);
        alive = next;
    }
    let residual: Rational = alive.iter().sum();
    Ok((levels, residual))
}

fn dp_step(
    alive: &[Rational],
    zero_p: &Rational,
    other_p: &Rational,
    m: usize,
) -> (Vec<Rational>, Rational) {
    let mut next = vec![Rational::zero(); m];
    let mut absorbed = Rational::zero();
    for (s, mass) in alive.iter().enumerate() {
        if mass.is_zero() {
            continue;
        }
        next[0] += mass * other_p;
        if s + 1 == m {
            absorbed += mass * zero_p;
        } else {
            next[s + 1] += mass * zero_p;
        }
    }
    (next, absorbed)
}

/// A_t = E_1 ⊔ E_3 ⊔ … ⊔ E_{2t+1}: exact union of the odd levels.
/// Disjoint from its own ν-dilate since ν·E_{i+1} ⊆ E_i shifts odd levels
/// to even ones.
pub fn rokhlin_set(params: &ConstructionParams) -> Result<IntervalSet> {
    let levels = zero_run_levels(params, 2 * params.t + 1)?;
    let mut out = IntervalSet::empty();
    for i in (1..=2 * params.t + 1).step_by(2) {
        out = out.union(&levels[i as usize]);
        if out.span_count() > params.interval_cap {
            return Err(Error::IntervalCap {
                needed: out.span_count(),
                cap: params.interval_cap,
            });
        }
    }
    Ok(out)
}

/// Membership in A_t evaluated directly in Z_p: x is kept iff the orbit
/// x, νx, ν²x, … (mod p) first lands in [0, p·W) at an odd index within
/// the scan depth. Agrees element-for-element with discretizing the
/// interval union.
pub fn tower_membership(params: &ConstructionParams, p: u64, workers: usize) -> Result<ZpSet> {
    let mut out = ZpSet::empty(p)?;
    let nu_mod = reduce_mod(params.nu, p);
    if nu_mod == 0 {
        return Err(Error::DegenerateDilate(params.nu));
    }
    // nu_eff^m as u128; the membership test is y * nu_eff^m < p
    let width_den = {
        let mut v: u128 = 1;
        for _ in 0..params.m {
            v = v.saturating_mul(params.nu_eff() as u128);
        }
        v
    };
    let depth = params.scan_depth();
    let chunk = |lo: u64, hi: u64| -> Vec<u64> {
        let mut members = Vec::new();
        for x in lo..hi {
            let mut y = x;
            for i in 0..=depth {
                if (y as u128) * width_den < p as u128 {
                    if i % 2 == 1 {
                        members.push(x);
                    }
                    break;
                }
                y = (y as u128 * nu_mod as u128 % p as u128) as u64;
            }
        }
        members
    };
    let members: Vec<u64> = if workers <= 1 {
        chunk(0, p)
    } else {
        let n = workers.min(p as usize).max(1);
        let step = p.div_ceil(n as u64);
        std::thread::scope(|scope| {
            let handles: Vec<_> = (0..n as u64)
                .map(|i| {
                    let lo = i * step;
                    let hi = ((i + 1) * step).min(p);
                    let chunk = &chunk;
                    scope.spawn(move || chunk(lo, hi))
                })
                .collect();
            handles
                .into_iter()
                .flat_map(|h| h.join().expect("worker panicked"))
                .collect()
        })
    };
    for x in members {
        out.insert(x);
    }
    Ok(out)
}

/// Result of the full construction pipeline.
#[derive(Clone, Debug)]
pub struct ConstructOutcome {
    pub set: ZpSet,
    pub params: ConstructionParams,
    pub p: u64,
    /// Pruning window actually applied.
    pub window: u64,
    pub deletions: u64,
    /// |A| / p.
    pub density: f64,
    /// |A + λA|.
    pub sumset_size: u64,
    /// 1 − |A + λA| / p, the measured δ.
    pub deficit: f64,
    pub below_recommended_scale: bool,
}

/// Default pruning window: sized so the guaranteed missing window
/// {−w..w} has at least p / DEFAULT_DEFICIT_TARGET_INV residues, and at
/// least 1 either way.
pub fn default_window(p: u64) -> u64 {
    let w = p.div_ceil(2 * DEFAULT_DEFICIT_TARGET_INV).max(1);
    w.min((p.saturating_sub(2)) / 2)
}

/// Full pipeline: choose parameters for (λ, ε), evaluate tower membership
/// over Z_p, prune boundary collisions (vertex cover over the collision
/// graph), and measure the resulting density and sumset deficit.
pub fn construct_zp(lambda: i64, epsilon: &Rational, p: u64) -> Result<ConstructOutcome> {
    construct_zp_with(lambda, epsilon, p, None, 1)
}

pub fn construct_zp_with(
    lambda: i64,
    epsilon: &Rational,
    p: u64,
    window: Option<u64>,
    workers: usize,
) -> Result<ConstructOutcome> {
    let params = choose_params(lambda, epsilon)?;
    construct_with_params(&params, p, window, workers)
}

/// Same pipeline with explicit (m, t); used to cross-check against the
/// interval route.
pub fn construct_with_params(
    params: &ConstructionParams,
    p: u64,
    window: Option<u64>,
    workers: usize,
) -> Result<ConstructOutcome> {
    let raw = tower_membership(params, p, workers)?;
    let w = window.unwrap_or_else(|| default_window(p));
    let (set, deletions) = prune_min_cover(&raw, 1, params.nu, w)?;
    let dv = DilateVector::new(vec![1, params.lambda])?;
    let sumset_size = if set.is_empty() {
        0
    } else {
        set.dilate_sum(&dv)?.len()
    };
    Ok(ConstructOutcome {
        density: set.len() as f64 / p as f64,
        deficit: 1.0 - sumset_size as f64 / p as f64,
        set,
        params: params.clone(),
        p,
        window: w,
        deletions,
        sumset_size,
        below_recommended_scale: p < RECOMMENDED_MIN_P,
    })
}
