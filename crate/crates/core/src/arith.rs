//! Small number-theory helpers shared across the crate.

use std::collections::BTreeMap;

use num_bigint::BigUint;
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};

/// Deterministic trial-division primality test.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    if n.is_multiple_of(2) {
        return n == 2;
    }
    let mut d = 3u64;
    while d.saturating_mul(d) <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 2;
    }
    true
}

/// Prime factorization of a machine integer by trial division.
pub fn factor_u64(mut n: u64) -> Vec<(u64, u32)> {
    let mut out = Vec::new();
    let mut d = 2u64;
    while d.saturating_mul(d) <= n {
        if n.is_multiple_of(d) {
            let mut e = 0;
            while n.is_multiple_of(d) {
                n /= d;
                e += 1;
            }
            out.push((d, e));
        }
        d += if d == 2 { 1 } else { 2 };
    }
    if n > 1 {
        out.push((n, 1));
    }
    out
}

/// Multiplicative order of `a` modulo `m` (`gcd(a, m) = 1` assumed).
pub fn multiplicative_order(a: u64, m: u64) -> u64 {
    let a = a % m;
    let mut x = a;
    let mut ord = 1;
    while x != 1 % m {
        x = (x as u128 * a as u128 % m as u128) as u64;
        ord += 1;
        if ord > m {
            return 0;
        }
    }
    ord
}

pub fn pow_mod(mut base: u64, mut exp: u64, m: u64) -> u64 {
    let mut acc = 1 % m;
    base %= m;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = (acc as u128 * base as u128 % m as u128) as u64;
        }
        base = (base as u128 * base as u128 % m as u128) as u64;
        exp >>= 1;
    }
    acc
}

/// `p`-adic valuation of a nonzero integer.
pub fn valuation_u64(mut n: u64, p: u64) -> u32 {
    assert!(n != 0);
    let mut v = 0;
    while n.is_multiple_of(p) {
        n /= p;
        v += 1;
    }
    v
}

/// `p`-adic valuation of a nonzero big integer.
pub fn valuation(n: &BigUint, p: u64) -> u32 {
    assert!(!n.is_zero());
    let p = BigUint::from(p);
    let mut n = n.clone();
    let mut v = 0;
    loop {
        let (q, r) = n.div_rem(&p);
        if !r.is_zero() {
            return v;
        }
        n = q;
        v += 1;
    }
}

/// Removes every factor `p` from `n`.
pub fn strip(n: &BigUint, p: u64) -> BigUint {
    let v = valuation(n, p);
    n / BigUint::from(p).pow(v)
}

const TRIAL_LIMIT: u64 = 1_000_000;
const RHO_ITERATIONS: u64 = 1 << 22;

/// Result of [`factor`]: the factored part plus any cofactor that could not be
/// split within the iteration budget.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Factorization {
    pub primes: BTreeMap<BigUint, u32>,
    pub unfactored: Option<BigUint>,
}

impl Factorization {
    pub fn is_complete(&self) -> bool {
        self.unfactored.is_none()
    }
}

/// Factors `n` by trial division up to 10^6, then Pollard–Brent rho.
pub fn factor(n: &BigUint) -> Factorization {
    let mut out = Factorization::default();
    if n.is_zero() {
        out.unfactored = Some(n.clone());
        return out;
    }
    let mut n = n.clone();
    let mut d = 2u64;
    while d <= TRIAL_LIMIT {
        let db = BigUint::from(d);
        if &db * &db > n {
            break;
        }
        let mut e = 0;
        loop {
            let (q, r) = n.div_rem(&db);
            if !r.is_zero() {
                break;
            }
            n = q;
            e += 1;
        }
        if e > 0 {
            out.primes.insert(db, e);
        }
        d += if d == 2 { 1 } else { 2 };
    }
    let mut stack = vec![n];
    let mut leftover = BigUint::one();
    while let Some(m) = stack.pop() {
        if m.is_one() {
            continue;
        }
        if is_probable_prime(&m) {
            *out.primes.entry(m).or_insert(0) += 1;
            continue;
        }
        match pollard_brent(&m) {
            Some(f) => {
                let g = &m / &f;
                stack.push(f);
                stack.push(g);
            }
            None => leftover *= m,
        }
    }
    if !leftover.is_one() {
        out.unfactored = Some(leftover);
    }
    out
}

/// Miller–Rabin with the first twenty prime bases (deterministic far beyond
/// the sizes produced here).
pub fn is_probable_prime(n: &BigUint) -> bool {
    const BASES: [u32; 20] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53, 59, 61, 67, 71];
    if let Some(small) = n.to_u64() {
        if small < 5000 {
            return is_prime(small);
        }
    }
    let one = BigUint::one();
    if n.is_even() {
        return false;
    }
    let n_minus_1 = n - &one;
    let s = n_minus_1.trailing_zeros().unwrap_or(0);
    let d = &n_minus_1 >> s;
    'outer: for &b in &BASES {
        let mut x = BigUint::from(b).modpow(&d, n);
        if x.is_one() || x == n_minus_1 {
            continue;
        }
        for _ in 1..s {
            x = &x * &x % n;
            if x == n_minus_1 {
                continue 'outer;
            }
        }
        return false;
    }
    true
}

fn pollard_brent(n: &BigUint) -> Option<BigUint> {
    for c in 1u32..20 {
        let c = BigUint::from(c);
        let f = |x: &BigUint| (x * x + &c) % n;
        let mut y = BigUint::from(2u32);
        let mut r: u64 = 1;
        let mut q = BigUint::one();
        let mut g = BigUint::one();
        let mut x = y.clone();
        let mut ys = y.clone();
        let mut steps = 0u64;
        while g.is_one() {
            x = y.clone();
            for _ in 0..r {
                y = f(&y);
            }
            let mut k = 0;
            while k < r && g.is_one() {
                ys = y.clone();
                let m = (r - k).min(128);
                for _ in 0..m {
                    y = f(&y);
                    let diff = if x > y { &x - &y } else { &y - &x };
                    q = q * diff % n;
                }
                g = q.gcd(n);
                k += m;
            }
            r *= 2;
            steps += r;
            if steps > RHO_ITERATIONS {
                break;
            }
        }
        if &g == n {
            loop {
                ys = f(&ys);
                let diff = if x > ys { &x - &ys } else { &ys - &x };
                g = diff.gcd(n);
                if !g.is_one() {
                    break;
                }
            }
        }
        if !g.is_one() && &g != n {
            return Some(g);
        }
    }
    None
}
