//! Admissible parameter triples `(p, ℓ, t)` and the constants derived from them.

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{ToPrimitive, Zero};

use crate::arith;
use crate::error::{Error, Result};

/// Largest `q` (in bits) accepted at validation time. Far beyond anything a
/// pipeline can process; it only keeps big-integer work bounded.
const MAX_Q_BITS: u64 = 1 << 16;

/// A validated triple `(p, ℓ, t)` with `q = p^{(ℓ-1)t}`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Params {
    pub p: u64,
    pub ell: u64,
    pub t: u32,
    pub q: BigUint,
    pub k: BigUint,
    pub sqrt_q: BigUint,
    /// Laplacian eigenvalue of multiplicity `k`.
    pub u: BigUint,
    /// Laplacian eigenvalue of multiplicity `q - k - 1`.
    pub v: BigUint,
    /// `v_p(ℓ - 1)`.
    pub d: u32,
    pub lambda: BigUint,
    pub mu: BigUint,
}

impl Params {
    pub fn new(p: u64, ell: u64, t: u32) -> Result<Self> {
        if !arith::is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        if !arith::is_prime(ell) {
            return Err(Error::NotPrime(ell));
        }
        if ell <= 2 || ell == p {
            return Err(Error::BadEll { p, ell });
        }
        if t == 0 {
            return Err(Error::BadT);
        }
        let order = arith::multiplicative_order(p, ell);
        if order != ell - 1 {
            return Err(Error::NotPrimitive { p, ell, order });
        }
        let n = (ell - 1) * t as u64;
        let bits = n as f64 * (p as f64).log2();
        if bits > MAX_Q_BITS as f64 {
            return Err(Error::Overflow(format!("q = {p}^{n}")));
        }
        // ℓ - 1 is even, so (ℓ-1)t/2 is an integer.
        let half = (n / 2) as u32;
        let pb = BigUint::from(p);
        let q = pb.pow(n as u32);
        let sqrt_q = pb.pow(half);
        let ellb = BigUint::from(ell);
        if t % 2 == 1 && sqrt_q == BigUint::from(ell - 1) {
            return Err(Error::Disconnected);
        }
        let k = (&q - 1u32) / &ellb;

        // v = sqrt_q (sqrt_q + (-1)^{t+1}) / ℓ,  u = v + (-1)^t sqrt_q
        let v_num = if t.is_multiple_of(2) { &sqrt_q * (&sqrt_q - 1u32) } else { &sqrt_q * (&sqrt_q + 1u32) };
        if !v_num.is_multiple_of(&ellb) {
            return Err(Error::ConservationViolation("ℓ does not divide sqrt(q)(sqrt(q) ± 1)".into()));
        }
        let v = v_num / &ellb;
        if t % 2 == 1 && v <= sqrt_q {
            return Err(Error::Disconnected);
        }
        let u = if t.is_multiple_of(2) { &v + &sqrt_q } else { &v - &sqrt_q };

        let sign: i64 = if t.is_multiple_of(2) { 1 } else { -1 };
        let qi = BigInt::from(q.clone());
        let si = BigInt::from(sqrt_q.clone());
        let elli = BigInt::from(ell);
        let ell2 = &elli * &elli;
        // λ = (q - 3ℓ + 1 + (-1)^{t+1}(ℓ-1)(ℓ-2) sqrt_q) / ℓ²
        let lambda_num = &qi - 3 * &elli + 1
            - sign * (&elli - 1) * (&elli - 2) * &si;
        // μ = (q - ℓ + 1 + (-1)^t (ℓ-2) sqrt_q) / ℓ²
        let mu_num = &qi - &elli + 1 + sign * (&elli - 2) * &si;
        let lambda = exact_nonneg(&lambda_num, &ell2, "lambda")?;
        let mu = exact_nonneg(&mu_num, &ell2, "mu")?;

        let d = arith::valuation_u64(ell - 1, p);
        let params = Params { p, ell, t, q, k, sqrt_q, u, v, d, lambda, mu };
        params.check_invariants()?;
        Ok(params)
    }

    /// Number of base-`p` digits, `(ℓ-1)t`.
    pub fn degree(&self) -> u32 {
        (self.ell as u32 - 1) * self.t
    }

    /// `(ℓ-1)t/2`, which is `v_p(v)`.
    pub fn half_degree(&self) -> u32 {
        self.degree() / 2
    }

    pub fn vp_u(&self) -> u32 {
        self.half_degree() + self.d
    }

    pub fn vp_v(&self) -> u32 {
        self.half_degree()
    }

    /// `v_p(uv) = (ℓ-1)t + d`.
    pub fn vp_uv(&self) -> u32 {
        self.degree() + self.d
    }

    /// Multiplicity of the eigenvalue `v`, `q - k - 1`.
    pub fn v_multiplicity(&self) -> BigUint {
        &self.q - &self.k - 1u32
    }

    /// `v_p(u^k v^{q-k-1} / q)`: the exponent of `p` in the critical group order.
    pub fn p_order_exponent(&self) -> BigUint {
        &self.k * self.vp_u() + self.v_multiplicity() * self.vp_v() - self.degree()
    }

    pub fn q_u64(&self) -> Option<u64> {
        self.q.to_u64()
    }

    /// `q` as a `usize` if it is at most `limit`.
    pub fn q_within(&self, what: &'static str, limit: u64) -> Result<usize> {
        match self.q.to_u64() {
            Some(q) if q <= limit => Ok(q as usize),
            _ => Err(Error::BoundExceeded { what, value: self.q.to_string(), limit: limit.to_string() }),
        }
    }

    /// The critical group order `u^k v^{q-k-1} / q`, only for small `q`.
    pub fn critical_order(&self) -> Option<BigUint> {
        let k = self.k.to_u32()?;
        let m = self.v_multiplicity().to_u32()?;
        if self.q.bits() > 20 {
            return None;
        }
        Some(self.u.pow(k) * self.v.pow(m) / &self.q)
    }

    fn check_invariants(&self) -> Result<()> {
        let fail = |m: &str| Err(Error::ConservationViolation(m.to_string()));
        if self.u.is_zero() || self.v.is_zero() {
            return fail("eigenvalues must be positive");
        }
        if arith::valuation(&self.u, self.p) != self.vp_u() {
            return fail("v_p(u) != (ℓ-1)t/2 + d");
        }
        if arith::valuation(&self.v, self.p) != self.vp_v() {
            return fail("v_p(v) != (ℓ-1)t/2");
        }
        if &self.k * self.ell + 1u32 != self.q {
            return fail("ℓk != q - 1");
        }
        Ok(())
    }
}

impl std::fmt::Display for Params {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "G({}, {}, {})", self.p, self.ell, self.t)
    }
}

fn exact_nonneg(num: &BigInt, den: &BigInt, what: &str) -> Result<BigUint> {
    let (quot, rem) = num.div_rem(den);
    if !rem.is_zero() {
        return Err(Error::ConservationViolation(format!("{what} is not an integer")));
    }
    quot.to_biguint()
        .ok_or_else(|| Error::ConservationViolation(format!("{what} is negative")))
}

/// Enumeration and matrix-size limits for the various pipelines.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Bounds {
    /// Largest field that is tabulated explicitly.
    pub max_field_q: u64,
    /// Largest `q` for full integer Smith normal form.
    pub max_full_snf_q: u64,
    /// Largest `q` for the `p`-local Smith form.
    pub max_local_snf_q: u64,
    /// Largest `k` for which `𝔪𝔦𝔫(i)` is enumerated.
    pub max_enum_k: u64,
}

impl Default for Bounds {
    fn default() -> Self {
        Bounds { max_field_q: 1 << 16, max_full_snf_q: 256, max_local_snf_q: 1 << 12, max_enum_k: 1 << 24 }
    }
}

impl Bounds {
    /// Defaults, with `CYCLO_MAX_Q` overriding the full-SNF bound.
    pub fn from_env() -> Self {
        let mut b = Bounds::default();
        if let Some(q) = std::env::var("CYCLO_MAX_Q").ok().and_then(|s| s.trim().parse::<u64>().ok()) {
            b.max_full_snf_q = q;
            b.max_local_snf_q = b.max_local_snf_q.max(q);
            b.max_field_q = b.max_field_q.max(q);
        }
        b
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn b(x: u64) -> BigUint {
        BigUint::from(x)
    }

    #[test]
    fn g232() {
        let p = Params::new(2, 3, 2).unwrap();
        assert_eq!((p.q.clone(), p.k.clone(), p.u.clone(), p.v.clone(), p.d), (b(16), b(5), b(8), b(4), 1));
        assert_eq!((p.lambda.clone(), p.mu.clone()), (b(0), b(2)));
    }

    #[test]
    fn g531() {
        let p = Params::new(5, 3, 1).unwrap();
        assert_eq!((p.q.clone(), p.k.clone(), p.u.clone(), p.v.clone(), p.d), (b(25), b(8), b(5), b(10), 0));
        // λ = (25 - 9 + 1 + 2·1·5)/9 = 3, μ = (25 - 3 + 1 - 5)/9 = 2
        assert_eq!((p.lambda.clone(), p.mu.clone()), (b(3), b(2)));
        assert_eq!(p.critical_order().unwrap(), b(5).pow(8) * b(10).pow(16) / b(25));
    }

    #[test]
    fn rejections() {
        assert_eq!(Params::new(2, 5, 1), Err(Error::Disconnected));
        assert!(matches!(Params::new(7, 3, 1), Err(Error::NotPrimitive { order: 1, .. })));
        assert_eq!(Params::new(4, 3, 1), Err(Error::NotPrime(4)));
        assert_eq!(Params::new(3, 9, 1), Err(Error::NotPrime(9)));
        assert!(matches!(Params::new(3, 2, 1), Err(Error::BadEll { .. })));
        assert_eq!(Params::new(2, 3, 1), Err(Error::Disconnected));
        assert_eq!(Params::new(2, 3, 0), Err(Error::BadT));
    }

    #[test]
    fn large_q_is_exact() {
        let p = Params::new(2, 11, 3).unwrap();
        assert_eq!(p.q, BigUint::from(1u64 << 30));
        let p = Params::new(2, 11, 7).unwrap();
        assert!(p.q.bits() > 64);
        assert_eq!(arith::valuation(&(&p.u * &p.v), 2), p.vp_uv());
    }
}
