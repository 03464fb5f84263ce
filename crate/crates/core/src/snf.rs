//! Smith normal form over the integers and over `Z/p^B`, and the abelian
//! group descriptions built from it.
//!
//! This is the brute-force side of the crate: nothing here knows about the
//! structure of the graphs whose Laplacians it reduces.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::arith;
use crate::carries::PMultiplicities;
use crate::error::{Error, Result};
use crate::field::FieldTable;
use crate::graph::{self, IntMatrix};

/// A finitely generated abelian group `Z^r ⊕ ⊕ (Z/p^e)^{m}`, kept in
/// elementary-divisor form sorted by `(prime, exponent)`.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct AbelianGroupDesc {
    pub free_rank: u64,
    /// `(prime, exponent) → multiplicity`; multiplicities are positive.
    pub divisors: BTreeMap<(BigUint, u32), BigUint>,
    /// Cyclic orders (with multiplicity) that could not be factored.
    pub unfactored: BTreeMap<BigUint, BigUint>,
}

impl AbelianGroupDesc {
    pub fn free(free_rank: u64) -> Self {
        AbelianGroupDesc { free_rank, ..Default::default() }
    }

    /// Adds `mult` copies of the prime-power cyclic group `Z/prime^exponent`.
    pub fn add_prime_power(&mut self, prime: BigUint, exponent: u32, mult: BigUint) {
        if exponent == 0 || mult.is_zero() {
            return;
        }
        *self.divisors.entry((prime, exponent)).or_default() += mult;
    }

    /// Adds `mult` copies of `Z/order`, splitting `order` into prime powers.
    pub fn add_cyclic(&mut self, order: &BigUint, mult: BigUint) {
        if order.is_one() || mult.is_zero() {
            return;
        }
        let f = arith::factor(order);
        for (prime, e) in f.primes {
            self.add_prime_power(prime, e, mult.clone());
        }
        if let Some(rest) = f.unfactored {
            *self.unfactored.entry(rest).or_default() += mult;
        }
    }

    pub fn from_invariant_factors(factors: &[BigUint], free_rank: u64) -> Self {
        let mut g = Self::free(free_rank);
        for f in factors {
            g.add_cyclic(f, BigUint::one());
        }
        g
    }

    pub fn direct_sum(&mut self, other: &AbelianGroupDesc) {
        self.free_rank += other.free_rank;
        for ((prime, e), m) in &other.divisors {
            self.add_prime_power(prime.clone(), *e, m.clone());
        }
        for (n, m) in &other.unfactored {
            *self.unfactored.entry(n.clone()).or_default() += m;
        }
    }

    pub fn is_fully_factored(&self) -> bool {
        self.unfactored.is_empty()
    }

    /// `prime → exponent` of the torsion order.
    pub fn order_factorization(&self) -> BTreeMap<BigUint, BigUint> {
        let mut out: BTreeMap<BigUint, BigUint> = BTreeMap::new();
        for ((prime, e), m) in &self.divisors {
            *out.entry(prime.clone()).or_default() += m * *e;
        }
        out
    }

    /// `exponent → multiplicity` of the Sylow `p`-subgroup.
    pub fn p_part(&self, p: u64) -> BTreeMap<u32, BigUint> {
        let p = BigUint::from(p);
        self.divisors
            .iter()
            .filter(|((q, _), _)| *q == p)
            .map(|((_, e), m)| (*e, m.clone()))
            .collect()
    }

    /// The part of the group prime to `p`.
    pub fn coprime_to(&self, p: u64) -> AbelianGroupDesc {
        let p = BigUint::from(p);
        AbelianGroupDesc {
            free_rank: 0,
            divisors: self.divisors.iter().filter(|((q, _), _)| *q != p).map(|(k, m)| (k.clone(), m.clone())).collect(),
            unfactored: self.unfactored.clone(),
        }
    }

    /// Invariant factors `α_1 | α_2 | …` (all `> 1`), or `None` when the
    /// number of cyclic factors is too large to list.
    pub fn invariant_factors(&self) -> Option<Vec<BigUint>> {
        let mut per_prime: BTreeMap<BigUint, Vec<u32>> = BTreeMap::new();
        let mut total = 0usize;
        for ((prime, e), m) in &self.divisors {
            let m = m.to_usize().filter(|&m| m <= 1 << 22)?;
            total += m;
            if total > 1 << 22 {
                return None;
            }
            per_prime.entry(prime.clone()).or_default().extend(std::iter::repeat_n(*e, m));
        }
        for (n, m) in &self.unfactored {
            // unfactored orders are treated as opaque cyclic factors
            let m = m.to_usize()?;
            per_prime.entry(n.clone()).or_default().extend(std::iter::repeat_n(1, m));
        }
        let len = per_prime.values().map(Vec::len).max().unwrap_or(0);
        let mut out = vec![BigUint::one(); len];
        for (prime, mut exps) in per_prime {
            exps.sort_unstable();
            let offset = len - exps.len();
            for (i, e) in exps.into_iter().enumerate() {
                out[offset + i] *= prime.pow(e);
            }
        }
        Some(out)
    }

    /// The torsion order, if it has at most `max_bits` bits.
    pub fn torsion_order(&self, max_bits: u64) -> Option<BigUint> {
        let mut bits = 0f64;
        for (prime, e) in self.order_factorization() {
            bits += e.to_f64()? * (prime.bits() as f64);
        }
        if bits > max_bits as f64 || !self.unfactored.is_empty() {
            return None;
        }
        let mut n = BigUint::one();
        for (prime, e) in self.order_factorization() {
            n *= prime.pow(e.to_u32()?);
        }
        Some(n)
    }
}

impl fmt::Display for AbelianGroupDesc {
    /// `Z x r` for the free part, then one line per elementary divisor
    /// class, e.g. `2^5 x 4`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.free_rank > 0 {
            writeln!(f, "Z x {}", self.free_rank)?;
        }
        for ((prime, e), m) in &self.divisors {
            writeln!(f, "{prime}^{e} x {m}")?;
        }
        for (n, m) in &self.unfactored {
            writeln!(f, "{n} (unfactored) x {m}")?;
        }
        Ok(())
    }
}

/// Invariant factors of an integer matrix and the rank of its image.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SmithForm {
    pub rows: usize,
    pub cols: usize,
    /// Nonzero diagonal entries, positive, `α_i | α_{i+1}`, units included.
    pub invariant_factors: Vec<BigUint>,
}

impl SmithForm {
    pub fn rank(&self) -> usize {
        self.invariant_factors.len()
    }

    /// Rank of the free part of `Z^rows / image`.
    pub fn free_rank(&self) -> usize {
        self.rows - self.rank()
    }

    pub fn cokernel(&self) -> AbelianGroupDesc {
        AbelianGroupDesc::from_invariant_factors(&self.invariant_factors, self.free_rank() as u64)
    }
}

/// Smith normal form by repeated minimal-pivot elimination over `Z`.
///
/// The pivot is a nonzero entry of least absolute value, ties going to the
/// smallest `(row, col)`. Row and column remainders are reduced until the
/// pivot divides its row and column; divisibility along the diagonal is fixed
/// afterwards with gcd/lcm exchanges.
pub fn smith_normal_form(m: &IntMatrix) -> SmithForm {
    let (rows, cols) = (m.rows(), m.cols());
    let mut a: Vec<BigInt> = (0..rows).flat_map(|r| m.row(r).iter().map(|&x| BigInt::from(x))).collect();
    let diag = diagonalize(&mut a, rows, cols);
    SmithForm { rows, cols, invariant_factors: normalize_diagonal(diag) }
}

fn diagonalize(a: &mut [BigInt], rows: usize, cols: usize) -> Vec<BigUint> {
    let mut diag = Vec::new();
    let at = |r: usize, c: usize| r * cols + c;
    for s in 0..rows.min(cols) {
        let Some((pr, pc)) = min_abs_entry(a, rows, cols, s) else { break };
        swap_rows(a, cols, s, pr);
        swap_cols(a, cols, rows, s, pc);
        loop {
            let piv = a[at(s, s)].clone();
            for r in s + 1..rows {
                if a[at(r, s)].is_zero() {
                    continue;
                }
                let q = round_div(&a[at(r, s)], &piv);
                if !q.is_zero() {
                    row_sub(a, cols, r, s, &q, s);
                }
            }
            for c in s + 1..cols {
                if a[at(s, c)].is_zero() {
                    continue;
                }
                let q = round_div(&a[at(s, c)], &piv);
                if !q.is_zero() {
                    col_sub(a, cols, rows, c, s, &q, s);
                }
            }
            // Remainders in the pivot column or row, if any, are smaller than
            // the pivot; bring the smallest one in and repeat.
            let mut best: Option<(BigInt, bool, usize)> = None;
            for r in s + 1..rows {
                let v = a[at(r, s)].abs();
                if !v.is_zero() && best.as_ref().is_none_or(|b| v < b.0) {
                    best = Some((v, true, r));
                }
            }
            for c in s + 1..cols {
                let v = a[at(s, c)].abs();
                if !v.is_zero() && best.as_ref().is_none_or(|b| v < b.0) {
                    best = Some((v, false, c));
                }
            }
            match best {
                None => break,
                Some((_, true, r)) => swap_rows(a, cols, s, r),
                Some((_, false, c)) => swap_cols(a, cols, rows, s, c),
            }
        }
        diag.push(a[at(s, s)].magnitude().clone());
    }
    diag
}

fn min_abs_entry(a: &[BigInt], rows: usize, cols: usize, s: usize) -> Option<(usize, usize)> {
    let mut best: Option<(&BigInt, usize, usize)> = None;
    for r in s..rows {
        for c in s..cols {
            let x = &a[r * cols + c];
            if x.is_zero() {
                continue;
            }
            if best.is_none_or(|(b, _, _)| x.magnitude() < b.magnitude()) {
                if x.magnitude().is_one() {
                    return Some((r, c));
                }
                best = Some((x, r, c));
            }
        }
    }
    best.map(|(_, r, c)| (r, c))
}

/// Quotient rounded to nearest, so that the remainder is at most half the divisor.
fn round_div(a: &BigInt, b: &BigInt) -> BigInt {
    let (q, r) = a.div_mod_floor(b);
    if (r * 2i32).abs() > b.abs() {
        q + 1
    } else {
        q
    }
}

/// `row[target] -= q * row[src]` on columns `from..`.
fn row_sub(a: &mut [BigInt], cols: usize, target: usize, src: usize, q: &BigInt, from: usize) {
    let (t, s) = if target > src {
        let (lo, hi) = a.split_at_mut(target * cols);
        (&mut hi[..cols], &lo[src * cols..src * cols + cols])
    } else {
        let (lo, hi) = a.split_at_mut(src * cols);
        (&mut lo[target * cols..target * cols + cols], &hi[..cols])
    };
    for c in from..cols {
        if !s[c].is_zero() {
            t[c] -= q * &s[c];
        }
    }
}

/// `col[target] -= q * col[src]` on rows `from..`.
fn col_sub(a: &mut [BigInt], cols: usize, rows: usize, target: usize, src: usize, q: &BigInt, from: usize) {
    for r in from..rows {
        let sv = &a[r * cols + src];
        if !sv.is_zero() {
            let d = q * sv;
            a[r * cols + target] -= d;
        }
    }
}

fn swap_rows<T>(a: &mut [T], cols: usize, i: usize, j: usize) {
    if i == j {
        return;
    }
    let (lo, hi) = (i.min(j), i.max(j));
    let (x, y) = a.split_at_mut(hi * cols);
    x[lo * cols..lo * cols + cols].swap_with_slice(&mut y[..cols]);
}

fn swap_cols<T>(a: &mut [T], cols: usize, rows: usize, i: usize, j: usize) {
    if i == j {
        return;
    }
    for r in 0..rows {
        a.swap(r * cols + i, r * cols + j);
    }
}

/// Turns a diagonal into a divisibility chain with the same cokernel.
fn normalize_diagonal(mut d: Vec<BigUint>) -> Vec<BigUint> {
    d.sort();
    let n = d.len();
    for i in 0..n {
        if d[i].is_one() {
            continue;
        }
        for j in i + 1..n {
            if d[j].is_multiple_of(&d[i]) {
                continue;
            }
            let g = d[i].gcd(&d[j]);
            let l = &d[i] / &g * &d[j];
            d[i] = g;
            d[j] = l;
        }
    }
    d
}

/// Rank of `m` over `F_p`.
pub fn p_rank(m: &IntMatrix, p: u64) -> usize {
    let (rows, cols) = (m.rows(), m.cols());
    let mut a: Vec<u64> = (0..rows)
        .flat_map(|r| m.row(r).iter().map(|&x| x.rem_euclid(p as i64) as u64))
        .collect();
    let mut rank = 0;
    for c in 0..cols {
        let Some(pr) = (rank..rows).find(|&r| a[r * cols + c] != 0) else { continue };
        swap_rows(&mut a, cols, rank, pr);
        let inv = arith::pow_mod(a[rank * cols + c], p - 2, p);
        for r in rank + 1..rows {
            let x = a[r * cols + c];
            if x == 0 {
                continue;
            }
            let f = x * inv % p;
            for cc in c..cols {
                let s = a[rank * cols + cc];
                if s != 0 {
                    a[r * cols + cc] = (a[r * cols + cc] + p - f * s % p) % p;
                }
            }
        }
        rank += 1;
        if rank == rows {
            break;
        }
    }
    rank
}

/// Diagonal valuations of the Smith form of `m` over `Z/p^precision`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LocalSmith {
    pub prime: u64,
    pub precision: u32,
    /// Valuations `< precision`, nondecreasing.
    pub valuations: Vec<u32>,
    /// Diagonal entries that vanish modulo `p^precision`.
    pub vanishing: usize,
}

impl LocalSmith {
    /// `exponent → count`, including exponent 0.
    pub fn histogram(&self) -> BTreeMap<u32, u64> {
        let mut h = BTreeMap::new();
        for &v in &self.valuations {
            *h.entry(v).or_insert(0) += 1;
        }
        h
    }
}

/// Smith form of `m` over the local ring `Z_(p)`, computed modulo `p^precision`
/// with minimal-valuation pivots (ties to smallest `(row, col)`).
///
/// Exact for every invariant factor of valuation `< precision`.
pub fn local_smith(m: &IntMatrix, p: u64, precision: u32) -> Result<LocalSmith> {
    let modulus = p
        .checked_pow(precision)
        .filter(|&x| x < 1 << 32)
        .ok_or(Error::Overflow(format!("{p}^{precision} does not fit the local elimination")))?;
    let (rows, cols) = (m.rows(), m.cols());
    let mut a: Vec<u64> = (0..rows)
        .flat_map(|r| m.row(r).iter().map(|&x| x.rem_euclid(modulus as i64) as u64))
        .collect();
    let val = |x: u64| -> u32 {
        if x == 0 {
            return precision;
        }
        if p == 2 {
            return x.trailing_zeros().min(precision);
        }
        let (mut x, mut v) = (x, 0);
        while x % p == 0 {
            x /= p;
            v += 1;
        }
        v
    };
    let mut valuations = Vec::new();
    let mut floor = 0u32;
    let n = rows.min(cols);
    for s in 0..n {
        // Pivot valuations never decrease, so the scan can stop at `floor`.
        let mut best: Option<(u32, usize, usize)> = None;
        'scan: for r in s..rows {
            for c in s..cols {
                let v = val(a[r * cols + c]);
                if v < precision && best.is_none_or(|b| v < b.0) {
                    best = Some((v, r, c));
                    if v == floor {
                        break 'scan;
                    }
                }
            }
        }
        let Some((v, pr, pc)) = best else { break };
        floor = v;
        swap_rows(&mut a, cols, s, pr);
        swap_cols(&mut a, cols, rows, s, pc);
        let pv = p.pow(v);
        let unit = a[s * cols + s] / pv;
        let inv = mod_inverse(unit % modulus, modulus);
        let mulmod = |x: u64, y: u64| x * y % modulus;
        for r in s + 1..rows {
            let x = a[r * cols + s];
            if x == 0 {
                continue;
            }
            let f = mulmod(x / pv, inv);
            let (lo, hi) = a.split_at_mut(r * cols);
            let src = &lo[s * cols..s * cols + cols];
            let dst = &mut hi[..cols];
            for c in s..cols {
                if src[c] != 0 {
                    dst[c] = (dst[c] + modulus - mulmod(f, src[c])) % modulus;
                }
            }
        }
        // The column is now clear; column operations only touch row `s`.
        for c in s + 1..cols {
            a[s * cols + c] = 0;
        }
        valuations.push(v);
    }
    let vanishing = n - valuations.len();
    Ok(LocalSmith { prime: p, precision, valuations, vanishing })
}

fn mod_inverse(a: u64, m: u64) -> u64 {
    let e = (a as i128).extended_gcd(&(m as i128));
    debug_assert_eq!(e.gcd, 1, "pivot unit must be invertible");
    e.x.rem_euclid(m as i128) as u64
}

/// Critical group of `G(p, ℓ, t)` from the full integer Smith form of its Laplacian.
pub fn critical_group_bruteforce(field: &FieldTable) -> AbelianGroupDesc {
    smith_normal_form(&graph::laplacian(field)).cokernel()
}

/// `p`-elementary divisor multiplicities of `m` (with `e_0` the `p`-rank),
/// from the local Smith form.
pub fn p_multiplicities_local(m: &IntMatrix, p: u64, precision: u32) -> Result<PMultiplicities> {
    let ls = local_smith(m, p, precision)?;
    Ok(PMultiplicities::from_counts(p, ls.histogram().into_iter().map(|(e, c)| (e, BigUint::from(c)))))
}

/// `gcd` of the `i×i` minors for `i = 1..=rank`, by cofactor expansion. Only
/// usable on tiny matrices; serves as an independent check of the Smith form.
pub fn determinantal_divisors(m: &IntMatrix) -> Vec<BigUint> {
    let (rows, cols) = (m.rows(), m.cols());
    let mut out = Vec::new();
    for size in 1..=rows.min(cols) {
        let mut g = BigInt::zero();
        for rs in combinations(rows, size) {
            for cs in combinations(cols, size) {
                let sub: Vec<Vec<BigInt>> =
                    rs.iter().map(|&r| cs.iter().map(|&c| BigInt::from(m.get(r, c))).collect()).collect();
                g = g.gcd(&det(&sub));
            }
        }
        if g.is_zero() {
            break;
        }
        out.push(g.magnitude().clone());
    }
    out
}

fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    use itertools::Itertools;
    (0..n).combinations(k).collect()
}

fn det(m: &[Vec<BigInt>]) -> BigInt {
    let n = m.len();
    if n == 1 {
        return m[0][0].clone();
    }
    let mut acc = BigInt::zero();
    for c in 0..n {
        if m[0][c].is_zero() {
            continue;
        }
        let minor: Vec<Vec<BigInt>> = m[1..]
            .iter()
            .map(|row| row.iter().enumerate().filter(|&(j, _)| j != c).map(|(_, x)| x.clone()).collect())
            .collect();
        let term = &m[0][c] * det(&minor);
        if c % 2 == 0 {
            acc += term;
        } else {
            acc -= term;
        }
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::params::Params;
    use proptest::prelude::*;

    fn b(x: u64) -> BigUint {
        BigUint::from(x)
    }

    #[test]
    fn already_diagonal_and_unimodular() {
        let s = smith_normal_form(&IntMatrix::from_diagonal(&[2, 6]));
        assert_eq!(s.invariant_factors, vec![b(2), b(6)]);
        let s = smith_normal_form(&IntMatrix::from_rows(&[vec![0, 1], vec![1, 0]]));
        assert_eq!(s.invariant_factors, vec![b(1), b(1)]);
        assert_eq!(s.free_rank(), 0);
        let s = smith_normal_form(&IntMatrix::from_diagonal(&[6, 4, 0]));
        assert_eq!(s.invariant_factors, vec![b(2), b(12)]);
        assert_eq!(s.free_rank(), 1);
    }

    #[test]
    fn rectangular_and_zero() {
        let s = smith_normal_form(&IntMatrix::zeros(3, 2));
        assert!(s.invariant_factors.is_empty());
        assert_eq!(s.free_rank(), 3);
        let s = smith_normal_form(&IntMatrix::from_rows(&[vec![2, 4, 4], vec![-6, 6, 12]]));
        // minors: d1 = 2, d2 = gcd(12+24, 24-24, 24+24) = 12
        assert_eq!(s.invariant_factors, vec![b(2), b(6)]);
    }

    #[test]
    fn laplacian_g232() {
        let f = FieldTable::build(&Params::new(2, 3, 2).unwrap(), 1 << 16).unwrap();
        let g = critical_group_bruteforce(&f);
        assert_eq!(g.free_rank, 1);
        let two = b(2);
        let expect: BTreeMap<_, _> =
            [((two.clone(), 2), b(4)), ((two.clone(), 3), b(1)), ((two.clone(), 5), b(4))].into_iter().collect();
        assert_eq!(g.divisors, expect);
        assert_eq!(g.torsion_order(64), Some(b(1 << 31)));
        let l = graph::laplacian(&f);
        assert_eq!(p_rank(&l, 2), 6);
    }

    #[test]
    fn laplacian_g531() {
        let params = Params::new(5, 3, 1).unwrap();
        let f = FieldTable::build(&params, 1 << 16).unwrap();
        let g = critical_group_bruteforce(&f);
        assert_eq!(g.free_rank, 1);
        assert_eq!(g.torsion_order(256), params.critical_order());
        let l = graph::laplacian(&f);
        assert_eq!(p_rank(&l, 5), 8);
        let ls = local_smith(&l, 5, params.vp_uv() + 5).unwrap();
        assert_eq!(ls.vanishing, 1);
        assert_eq!(ls.histogram(), [(0, 8), (1, 10), (2, 6)].into_iter().collect());
        assert_eq!(g.p_part(5), [(1, b(10)), (2, b(6))].into_iter().collect());
        assert_eq!(g.p_part(2), [(1, b(16))].into_iter().collect());
    }

    #[test]
    fn p_rank_identity() {
        assert_eq!(p_rank(&IntMatrix::identity(7), 3), 7);
        assert_eq!(p_rank(&IntMatrix::from_diagonal(&[3, 6, 1]), 3), 1);
    }

    fn small_matrix() -> impl Strategy<Value = IntMatrix> {
        (1usize..5, 1usize..5).prop_flat_map(|(r, c)| {
            prop::collection::vec(-12i64..12, r * c).prop_map(move |d| {
                IntMatrix::from_rows(&d.chunks(c).map(<[i64]>::to_vec).collect::<Vec<_>>())
            })
        })
    }

    proptest! {
        #[test]
        fn permutation_invariance(m in small_matrix(), seed in any::<u64>()) {
            use rand::seq::SliceRandom;
            use rand::SeedableRng;
            let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
            let mut rp: Vec<usize> = (0..m.rows()).collect();
            let mut cp: Vec<usize> = (0..m.cols()).collect();
            rp.shuffle(&mut rng);
            cp.shuffle(&mut rng);
            prop_assert_eq!(smith_normal_form(&m), smith_normal_form(&m.permuted(&rp, &cp)));
        }

        #[test]
        fn agrees_with_determinantal_divisors(m in small_matrix()) {
            let s = smith_normal_form(&m);
            let d = determinantal_divisors(&m);
            prop_assert_eq!(s.rank(), d.len());
            let mut prev = BigUint::one();
            for (alpha, di) in s.invariant_factors.iter().zip(&d) {
                prop_assert_eq!(alpha * &prev, di.clone());
                prev = di.clone();
            }
            for w in s.invariant_factors.windows(2) {
                prop_assert!(w[1].is_multiple_of(&w[0]));
            }
        }

        #[test]
        fn local_form_matches_full(m in small_matrix(), p in prop::sample::select(vec![2u64, 3, 5])) {
            let s = smith_normal_form(&m);
            let ls = local_smith(&m, p, 12).unwrap();
            let mut want: Vec<u32> = s.invariant_factors.iter().map(|a| arith::valuation(a, p)).collect();
            want.sort();
            // valuations beyond the working precision would show up as vanishing
            prop_assume!(want.iter().all(|&v| v < 12));
            prop_assert_eq!(&ls.valuations, &want);
            prop_assert_eq!(ls.vanishing, m.rows().min(m.cols()) - s.rank());
            prop_assert_eq!(p_rank(&m, p), want.iter().filter(|&&v| v == 0).count());
        }
    }

    #[test]
    fn invariant_factor_round_trip() {
        let g = AbelianGroupDesc::from_invariant_factors(&[b(2), b(6), b(12), b(1)], 1);
        assert_eq!(g.invariant_factors().unwrap(), vec![b(2), b(6), b(12)]);
        assert_eq!(g.order_factorization(), [(b(2), b(4)), (b(3), b(2))].into_iter().collect());
        assert_eq!(format!("{g}"), "Z x 1\n2^1 x 2\n2^2 x 1\n3^1 x 2\n");
    }
}
