//! Base-`p` digit expansions modulo `q - 1`, carry counting, and the
//! enumeration formula for the `p`-elementary divisors of the critical group.
//!
//! Every residue `a ≢ 0 (mod q-1)` has a unique expansion with `(ℓ-1)t`
//! digits in `0..p` and not all digits equal to `p - 1`. Adding two such
//! expansions "modulo `q - 1`" means ordinary addition with the carry out of
//! the top digit fed back into the bottom one.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigUint;
use num_traits::{ToPrimitive, Zero};
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::params::{Bounds, Params};

/// Digit arithmetic for a fixed `(p, q)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CarryContext {
    pub p: u64,
    /// Number of digits `(ℓ-1)t`.
    pub width: u32,
    pub q: u64,
}

impl CarryContext {
    pub fn new(params: &Params) -> Result<Self> {
        let q = params
            .q_u64()
            .filter(|q| *q < 1 << 62)
            .ok_or_else(|| Error::Overflow(format!("q = {} is too large for digit arithmetic", params.q)))?;
        Ok(CarryContext { p: params.p, width: params.degree(), q })
    }

    /// The representative of `a` in `0..q-1`.
    pub fn reduce(&self, a: i128) -> u64 {
        a.rem_euclid(self.q as i128 - 1) as u64
    }

    fn nonzero(&self, a: i128) -> Result<u64> {
        match self.reduce(a) {
            0 => Err(Error::ZeroResidue(a)),
            r => Ok(r),
        }
    }

    /// `s(a)` for a reduced residue.
    pub fn digit_sum(&self, mut a: u64) -> u64 {
        let mut s = 0;
        while a > 0 {
            s += a % self.p;
            a /= self.p;
        }
        s
    }

    pub fn digits(&self, a: i128) -> Result<DigitVec> {
        let value = self.nonzero(a)?;
        let mut digits = Vec::with_capacity(self.width as usize);
        let mut x = value;
        for _ in 0..self.width {
            digits.push((x % self.p) as u32);
            x /= self.p;
        }
        Ok(DigitVec { digits, value })
    }

    /// Carries in `a + b` modulo `q - 1`, via digit sums.
    pub fn carries(&self, a: i128, b: i128) -> Result<u32> {
        let (ra, rb) = (self.nonzero(a)?, self.nonzero(b)?);
        let sum = self.reduce(ra as i128 + rb as i128);
        if sum == 0 {
            return Err(Error::UndefinedSum { a, b });
        }
        let total = self.digit_sum(ra) + self.digit_sum(rb) - self.digit_sum(sum);
        debug_assert_eq!(total % (self.p - 1), 0);
        Ok((total / (self.p - 1)) as u32)
    }

    /// Carries in `a + b` modulo `q - 1`, by explicit digit-wise addition with
    /// end-around carry.
    pub fn carries_ripple(&self, a: i128, b: i128) -> Result<u32> {
        let (da, db) = (self.digits(a)?, self.digits(b)?);
        if self.reduce(da.value as i128 + db.value as i128) == 0 {
            return Err(Error::UndefinedSum { a, b });
        }
        let pass = |carry_in: u32| {
            let mut carry = carry_in;
            let mut count = 0;
            for (x, y) in da.digits.iter().zip(&db.digits) {
                carry = u32::from((x + y + carry) as u64 >= self.p);
                count += carry;
            }
            (count, carry)
        };
        let (count, out) = pass(0);
        Ok(if out == 1 { pass(1).0 } else { count })
    }
}

/// The base-`p` expansion of a nonzero residue modulo `q - 1`, least
/// significant digit first.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DigitVec {
    pub digits: Vec<u32>,
    pub value: u64,
}

impl DigitVec {
    pub fn digit_sum(&self) -> u64 {
        self.digits.iter().map(|&d| d as u64).sum()
    }
}

pub fn digits_mod(a: i128, params: &Params) -> Result<DigitVec> {
    CarryContext::new(params)?.digits(a)
}

/// `c(a, b) = (s(a) + s(b) - s(a + b)) / (p - 1)`.
pub fn carry_count(a: i128, b: i128, params: &Params) -> Result<u32> {
    CarryContext::new(params)?.carries(a, b)
}

/// `min c(i + mk, nk)` over `0 ≤ m < ℓ`, `0 < n < ℓ`, computed literally.
pub fn min_profile(i: u64, params: &Params) -> Result<u32> {
    let ctx = CarryContext::new(params)?;
    let k = (ctx.q - 1) / params.ell;
    if i == 0 || i >= k {
        return Err(Error::ZeroResidue(i as i128));
    }
    let mut best = u32::MAX;
    for m in 0..params.ell {
        for n in 1..params.ell {
            best = best.min(ctx.carries((i + m * k) as i128, (n * k) as i128)?);
        }
    }
    Ok(best)
}

/// Same as [`min_profile`], but needs only `ℓ` digit sums: since `ℓk = q - 1`,
/// `(i + mk) + nk ≡ i + ((m + n) mod ℓ)k`.
struct FastProfile {
    ctx: CarryContext,
    ell: u64,
    k: u64,
    s_nk: Vec<u64>,
}

impl FastProfile {
    fn new(params: &Params) -> Result<Self> {
        let ctx = CarryContext::new(params)?;
        let k = (ctx.q - 1) / params.ell;
        let s_nk = (0..params.ell).map(|n| ctx.digit_sum(n * k)).collect();
        Ok(FastProfile { ctx, ell: params.ell, k, s_nk })
    }

    fn eval(&self, i: u64, scratch: &mut Vec<u64>) -> u32 {
        scratch.clear();
        scratch.extend((0..self.ell).map(|m| self.ctx.digit_sum(i + m * self.k)));
        let mut best = u64::MAX;
        for m in 0..self.ell as usize {
            for n in 1..self.ell as usize {
                let j = (m + n) % self.ell as usize;
                best = best.min(scratch[m] + self.s_nk[n] - scratch[j]);
            }
        }
        (best / (self.ctx.p - 1)) as u32
    }
}

/// Histogram of `min_profile(i)` over `1 ≤ i < k`, indexed by value.
///
/// Parallel over `i`; the reduction is a sum of count vectors and hence
/// deterministic.
pub fn min_histogram(params: &Params, bounds: &Bounds) -> Result<Vec<u64>> {
    let k = params.k.to_u64().filter(|&k| k <= bounds.max_enum_k).ok_or_else(|| Error::BoundExceeded {
        what: "k",
        value: params.k.to_string(),
        limit: bounds.max_enum_k.to_string(),
    })?;
    let fp = FastProfile::new(params)?;
    let len = params.degree() as usize + 1;
    let hist = (1..k)
        .into_par_iter()
        .fold(
            || (vec![0u64; len], Vec::new()),
            |(mut h, mut scratch), i| {
                h[fp.eval(i, &mut scratch) as usize] += 1;
                (h, scratch)
            },
        )
        .map(|(h, _)| h)
        .reduce(|| vec![0u64; len], |a, b| a.iter().zip(&b).map(|(x, y)| x + y).collect());
    Ok(hist)
}

/// `p`-elementary divisor multiplicities: `e_j` is the number of invariant
/// factors of exact `p`-valuation `j`, with `e_0` the `p`-rank of the
/// Laplacian. The zero invariant factor (free rank 1) is not counted.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PMultiplicities {
    pub p: u64,
    pub exps: BTreeMap<u32, BigUint>,
}

impl PMultiplicities {
    pub fn from_counts(p: u64, counts: impl IntoIterator<Item = (u32, BigUint)>) -> Self {
        let mut exps = BTreeMap::new();
        for (j, c) in counts {
            if !c.is_zero() {
                *exps.entry(j).or_insert_with(BigUint::zero) += c;
            }
        }
        PMultiplicities { p, exps }
    }

    pub fn get(&self, j: u32) -> BigUint {
        self.exps.get(&j).cloned().unwrap_or_default()
    }

    /// `Σ e_j`.
    pub fn count(&self) -> BigUint {
        self.exps.values().sum()
    }

    /// `Σ j e_j`, the exponent of `p` in the group order.
    pub fn weighted(&self) -> BigUint {
        self.exps.iter().map(|(j, e)| e * *j).sum()
    }

    /// Checks `Σ e_j = q - 1` and `Σ j e_j = v_p(u^k v^{q-k-1} / q)`.
    pub fn check_conservation(&self, params: &Params) -> Result<()> {
        let expected_count = &params.q - 1u32;
        if self.count() != expected_count {
            return Err(Error::ConservationViolation(format!(
                "Σ e_j = {} but q - 1 = {expected_count} for {params}",
                self.count()
            )));
        }
        let expected = params.p_order_exponent();
        if self.weighted() != expected {
            return Err(Error::ConservationViolation(format!(
                "Σ j e_j = {} but v_p(order) = {expected} for {params}",
                self.weighted()
            )));
        }
        Ok(())
    }

    /// Pairs `(j, e_j)` with `j > 0`: the nontrivial Sylow `p`-part.
    pub fn torsion(&self) -> impl Iterator<Item = (u32, &BigUint)> {
        self.exps.iter().filter(|(j, _)| **j > 0).map(|(j, e)| (*j, e))
    }
}

impl fmt::Display for PMultiplicities {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.exps.iter().map(|(j, e)| format!("e_{j} = {e}")).collect();
        write!(f, "{}", parts.join(", "))
    }
}

/// The `p`-part of the critical group from the histogram of `min_profile`.
///
/// With `h = (ℓ-1)t/2`, `d = v_p(ℓ-1)` and `z = |{min = 0}|`:
/// `e_0 = z + 2`, `e_{2h+d} = z`, `e_j = e_{2h+d-j} = |{min = j}|` for
/// `0 < j < h`; the middle is filled from `S = Σ_{j<h} e_j`, as
/// `e_h = q + 1 - 2S` when `d = 0`, and otherwise `e_{h+d} = k + 2 - S`,
/// `e_h = (ℓ-1)k - S`.
pub fn theorem_m(params: &Params, bounds: &Bounds) -> Result<PMultiplicities> {
    let hist = min_histogram(params, bounds)?;
    let h = params.half_degree();
    let top = params.degree() + params.d;
    if let Some(j) = (h as usize + 1..hist.len()).find(|&j| hist[j] > 0) {
        return Err(Error::ConservationViolation(format!("min profile value {j} exceeds (ℓ-1)t/2")));
    }
    let z = hist[0] as i128;
    let mut e: BTreeMap<u32, i128> = BTreeMap::new();
    e.insert(0, z + 2);
    e.insert(top, z);
    for j in 1..h {
        e.insert(j, hist[j as usize] as i128);
        e.insert(top - j, hist[j as usize] as i128);
    }
    let s: i128 = (0..h).map(|j| e[&j]).sum();
    let q = params.q_u64().unwrap() as i128;
    let k = params.k.to_u64().unwrap() as i128;
    if params.d == 0 {
        e.insert(h, q + 1 - 2 * s);
    } else {
        e.insert(h + params.d, k + 2 - s);
        e.insert(h, (params.ell as i128 - 1) * k - s);
    }
    let mut counts = Vec::new();
    for (j, c) in e {
        let c = u64::try_from(c)
            .map_err(|_| Error::ConservationViolation(format!("negative multiplicity e_{j} = {c} for {params}")))?;
        counts.push((j, BigUint::from(c)));
    }
    let out = PMultiplicities::from_counts(params.p, counts);
    out.check_conservation(params)?;
    Ok(out)
}
