//! The `ℓ = 3` closed forms: `p ≡ 2 (mod 3)`, `q = p^{2t}`.
//!
//! The carry counts `c(j, k)`, `c(j, 2k)` of all residues `j` are encoded in
//! the bivariate polynomial `C(2t) = Σ_j x^{c(j,k)} y^{c(j,2k)}` (summed over
//! both walk types), which satisfies a three-term recursion in `t`. From it
//! the `p`-elementary divisors follow without enumerating residues.

pub mod digraph;
pub mod poly;

use num_bigint::{BigInt, BigUint};
use num_traits::{One, Signed, ToPrimitive};

pub use digraph::{threshold_rules_check, transfer_matrix_check, walk_oracle, WeightedDigraph};
pub use poly::BivarPoly;

use crate::carries::PMultiplicities;
use crate::error::{Error, Result};
use crate::params::Params;

/// The digit constants `r = (p+1)/3`, `b = (p-2)/3`, `c = (2p-1)/3`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Digits {
    pub r: u64,
    pub b: u64,
    pub c: u64,
}

impl Digits {
    pub fn new(p: u64) -> Result<Self> {
        if p % 3 != 2 {
            return Err(Error::BadResidue(p));
        }
        Ok(Digits { r: (p + 1) / 3, b: (p - 2) / 3, c: (2 * p - 1) / 3 })
    }
}

/// `P`, `Q`, `R` with `det(zI - M) = z^6 - P z^4 + Q z^2 - R`.
pub fn pqr(p: u64) -> Result<(BivarPoly, BivarPoly, BivarPoly)> {
    let d = Digits::new(p)?;
    let sextic = [(2, 2), (2, 1), (1, 2), (1, 0), (0, 1), (0, 0)]
        .iter()
        .fold(BivarPoly::zero(), |acc, &(a, b)| &acc + &BivarPoly::monomial(1, a, b));
    let r2 = BigInt::from(d.r * d.r);
    let pp = &sextic.scale(&r2) + &BivarPoly::monomial(3 * d.b * d.b, 1, 1);
    let qq = &(&sextic * &BivarPoly::monomial(1, 1, 1)).scale(&r2) + &BivarPoly::monomial(3 * d.c * d.c, 2, 2);
    let rr = BivarPoly::monomial(p * p, 3, 3);
    Ok((pp, qq, rr))
}

/// `C(2t)` from `C(2) = 2P`, `C(4) = 2(P² - 2Q)`, `C(6) = 6R + 2(P³ - 2QP) - 2PQ`
/// and `C(2t) = P C(2t-2) - Q C(2t-4) + R C(2t-6)`.
pub fn c_poly(p: u64, t: u32) -> Result<BivarPoly> {
    if t == 0 {
        return Err(Error::BadT);
    }
    let (pp, qq, rr) = pqr(p)?;
    let two = BigInt::from(2);
    let c2 = pp.scale(&two);
    let c4 = (&(&pp * &pp) - &qq.scale(&two)).scale(&two);
    let p3 = &(&pp * &pp) * &pp;
    let qp = &qq * &pp;
    let c6 = &(&rr.scale(&BigInt::from(6)) + &(&p3 - &qp.scale(&two)).scale(&two)) - &qp.scale(&two);
    let mut seq = vec![c2, c4, c6];
    while seq.len() < t as usize {
        let n = seq.len();
        let next = &(&(&pp * &seq[n - 1]) - &(&qq * &seq[n - 2])) + &(&rr * &seq[n - 3]);
        seq.push(next);
    }
    Ok(seq.swap_remove(t as usize - 1))
}

/// `e_0 = ((p+1)/3)^{2t} (2^{t+1} - 2)`, the `p`-rank of the Laplacian.
pub fn p_rank_closed_form(p: u64, t: u32) -> Result<BigUint> {
    let d = Digits::new(p)?;
    Ok(BigUint::from(d.r).pow(2 * t) * ((BigUint::one() << (t + 1)) - 2u32))
}

/// The `p`-elementary divisor multiplicities of `G(p, 3, t)` from `C(2t)`.
///
/// With `δ = 1` if `p = 2` and `0` otherwise: `e_{2t+δ} = e_0 - 2`;
/// `e_a = e_{2t+δ-a} = Σ_{a<b≤t} [x^a y^b] C(2t)` for `0 < a < t`; and with
/// `S = Σ_{a<t} e_a`, the middle is `e_{t+1} = k + 2 - S`, `e_t = 2k - S`
/// when `p = 2`, and `e_t = 3k + 2 - 2S` otherwise.
pub fn theorem_e3(p: u64, t: u32) -> Result<PMultiplicities> {
    Digits::new(p)?;
    let params = Params::new(p, 3, t)?;
    let c = c_poly(p, t)?;
    let delta = u32::from(p == 2);
    let top = 2 * t + delta;
    let e0 = BigInt::from(p_rank_closed_form(p, t)?);
    let mut e: Vec<(u32, BigInt)> = vec![(0, e0.clone()), (top, &e0 - 2)];
    let mut s = e0;
    for a in 1..t {
        let ea: BigInt = (a + 1..=t).map(|b| c.coeff(a, b)).sum();
        s += &ea;
        e.push((a, ea.clone()));
        e.push((top - a, ea));
    }
    let k = BigInt::from(params.k.clone());
    if p == 2 {
        e.push((t + 1, &k + 2 - &s));
        e.push((t, &k * 2 - &s));
    } else {
        e.push((t, &k * 3 + 2 - &s * 2));
    }
    let mut counts = Vec::with_capacity(e.len());
    for (j, c) in e {
        if c.is_negative() {
            return Err(Error::ConservationViolation(format!("negative multiplicity e_{j} = {c} for {params}")));
        }
        counts.push((j, c.to_biguint().unwrap()));
    }
    let out = PMultiplicities::from_counts(p, counts);
    out.check_conservation(&params)?;
    Ok(out)
}

/// Convenience for tests and reports: `e_j` as `u64` where it fits.
pub fn small_multiplicities(m: &PMultiplicities) -> Vec<(u32, Option<u64>)> {
    m.exps.iter().map(|(j, e)| (*j, e.to_u64())).collect()
}
