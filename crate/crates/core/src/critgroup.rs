//! Assembly of the critical group from the closed forms, the brute-force
//! Smith form, or both with a cross-check.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use num_bigint::BigUint;
use num_traits::{One, ToPrimitive};

use crate::arith;
use crate::carries::{self, PMultiplicities};
use crate::ell3;
use crate::error::{Error, Result};
use crate::field::FieldTable;
use crate::graph::{self, IntMatrix};
use crate::params::{Bounds, Params};
use crate::snf::{self, AbelianGroupDesc};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Method {
    Formula,
    Bruteforce,
    Both,
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Method::Formula => "formula",
            Method::Bruteforce => "bruteforce",
            Method::Both => "both",
        })
    }
}

impl FromStr for Method {
    type Err = String;
    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "formula" => Ok(Method::Formula),
            "bruteforce" => Ok(Method::Bruteforce),
            "both" => Ok(Method::Both),
            _ => Err(format!("unknown method {s:?}")),
        }
    }
}

/// `(Z/u')^k × (Z/v')^{q-k-1}` where `u', v'` are the prime-to-`p` parts of `u, v`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CoprimePart {
    pub u_prime: BigUint,
    pub u_exponent: BigUint,
    pub v_prime: BigUint,
    pub v_exponent: BigUint,
}

impl CoprimePart {
    pub fn group(&self) -> AbelianGroupDesc {
        let mut g = AbelianGroupDesc::default();
        g.add_cyclic(&self.u_prime, self.u_exponent.clone());
        g.add_cyclic(&self.v_prime, self.v_exponent.clone());
        g
    }
}

pub fn coprime_part(params: &Params) -> CoprimePart {
    CoprimePart {
        u_prime: arith::strip(&params.u, params.p),
        u_exponent: params.k.clone(),
        v_prime: arith::strip(&params.v, params.p),
        v_exponent: params.v_multiplicity(),
    }
}

/// One named verification step and its outcome.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

impl Check {
    fn pass(name: &str, detail: impl Into<String>) -> Self {
        Check { name: name.into(), passed: true, detail: detail.into() }
    }
}

/// How the brute-force side was computed.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BruteforceMode {
    /// Integer Smith form of the whole Laplacian.
    FullSnf,
    /// Smith form over `Z/r^B` for each prime `r` of the group order.
    LocalSnf,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CriticalGroupResult {
    pub params: Params,
    pub method: Method,
    /// The whole cokernel of the Laplacian: free rank 1 plus the critical group.
    pub group: AbelianGroupDesc,
    pub p_part: PMultiplicities,
    pub coprime: CoprimePart,
    /// `prime → exponent` of the critical group order.
    pub order: BTreeMap<BigUint, BigUint>,
    pub bruteforce_mode: Option<BruteforceMode>,
    pub checks: Vec<Check>,
}

/// `prime → exponent` of `u^k v^{q-k-1} / q`, from factorizations of `u` and `v`.
pub fn expected_order(params: &Params) -> Result<BTreeMap<BigUint, BigUint>> {
    let mut out: BTreeMap<BigUint, BigUint> = BTreeMap::new();
    for (n, mult) in [(&params.u, params.k.clone()), (&params.v, params.v_multiplicity())] {
        let f = arith::factor(n);
        if let Some(rest) = f.unfactored {
            return Err(Error::BoundExceeded { what: "unfactored part of u or v", value: rest.to_string(), limit: "1".into() });
        }
        for (prime, e) in f.primes {
            *out.entry(prime).or_default() += &mult * e;
        }
    }
    let p = BigUint::from(params.p);
    let slot = out.get_mut(&p).expect("p divides u");
    *slot -= params.degree();
    out.retain(|_, e| *e > BigUint::ZERO);
    Ok(out)
}

fn check_order(group: &AbelianGroupDesc, params: &Params, label: &str) -> Result<Check> {
    let expected = expected_order(params)?;
    let found = group.order_factorization();
    if found != expected || group.free_rank != 1 || !group.is_fully_factored() {
        return Err(Error::ConservationViolation(format!(
            "{label}: order {found:?} with free rank {} differs from u^k v^(q-k-1)/q = {expected:?}",
            group.free_rank
        )));
    }
    Ok(Check::pass("order", format!("{label}: torsion order equals u^k v^(q-k-1)/q")))
}

/// The `p`-part from the closed forms: the `ℓ = 3` recursion when it applies,
/// otherwise enumeration of the carry minima.
pub fn formula_p_part(params: &Params, bounds: &Bounds) -> Result<PMultiplicities> {
    if params.ell == 3 {
        ell3::theorem_e3(params.p, params.t)
    } else {
        carries::theorem_m(params, bounds)
    }
}

fn assemble(params: &Params, p_part: &PMultiplicities, coprime: &CoprimePart) -> AbelianGroupDesc {
    let mut g = AbelianGroupDesc::free(1);
    let p = BigUint::from(params.p);
    for (j, e) in p_part.torsion() {
        g.add_prime_power(p.clone(), j, e.clone());
    }
    g.direct_sum(&coprime.group());
    g
}

fn formula(params: &Params, bounds: &Bounds) -> Result<(AbelianGroupDesc, PMultiplicities, Vec<Check>)> {
    let p_part = formula_p_part(params, bounds)?;
    let route = if params.ell == 3 { "recursion" } else { "carry enumeration" };
    let mut checks = vec![Check::pass("conservation", format!("p-part from {route}: {p_part}"))];
    let group = assemble(params, &p_part, &coprime_part(params));
    checks.push(check_order(&group, params, "formula")?);
    Ok((group, p_part, checks))
}

/// Prime-to-`p` and `p`-local exponent bound: every invariant factor divides `uv`.
fn local_precision(params: &Params, r: u64) -> u32 {
    arith::valuation(&(&params.u * &params.v), r) + 4
}

fn bruteforce(
    params: &Params,
    bounds: &Bounds,
) -> Result<(AbelianGroupDesc, PMultiplicities, BruteforceMode, Vec<Check>)> {
    let q = params.q_within("q (brute force)", bounds.max_local_snf_q.max(bounds.max_full_snf_q))?;
    let field = FieldTable::build(params, bounds.max_field_q)?;
    let report = graph::verify_srg(&field)?;
    let mut checks = vec![Check::pass("srg", report.to_string())];
    let l = graph::laplacian(&field);
    if q as u64 <= bounds.max_full_snf_q {
        let group = snf::smith_normal_form(&l).cokernel();
        let p_rank = snf::p_rank(&l, params.p) as u64;
        let mut counts = vec![(0, BigUint::from(p_rank))];
        counts.extend(group.p_part(params.p));
        let p_part = PMultiplicities::from_counts(params.p, counts);
        checks.push(check_order(&group, params, "bruteforce")?);
        return Ok((group, p_part, BruteforceMode::FullSnf, checks));
    }
    let (group, p_part) = local_group(params, &l)?;
    checks.push(check_order(&group, params, "bruteforce")?);
    Ok((group, p_part, BruteforceMode::LocalSnf, checks))
}

/// Cokernel of `l` assembled from local Smith forms at each prime of the
/// expected group order (the Kirchhoff count `u^k v^{q-k-1}/q` names them).
fn local_group(params: &Params, l: &IntMatrix) -> Result<(AbelianGroupDesc, PMultiplicities)> {
    let primes: Vec<u64> = expected_order(params)?.keys().map(|r| r.to_u64().expect("small prime")).collect();
    let mut group = AbelianGroupDesc::free(1);
    let mut p_part = None;
    for r in primes {
        let ls = snf::local_smith(l, r, local_precision(params, r))?;
        if ls.vanishing != 1 {
            return Err(Error::Mismatch(format!("Laplacian has {} vanishing local invariants at {r}", ls.vanishing)));
        }
        let hist = ls.histogram();
        for (&e, &m) in &hist {
            group.add_prime_power(BigUint::from(r), e, BigUint::from(m));
        }
        if r == params.p {
            p_part = Some(PMultiplicities::from_counts(r, hist.into_iter().map(|(e, m)| (e, BigUint::from(m)))));
        }
    }
    Ok((group, p_part.expect("p divides the group order")))
}

fn describe_difference(a: &AbelianGroupDesc, b: &AbelianGroupDesc) -> String {
    if a.free_rank != b.free_rank {
        return format!("free rank {} vs {}", a.free_rank, b.free_rank);
    }
    let keys: std::collections::BTreeSet<_> = a.divisors.keys().chain(b.divisors.keys()).collect();
    for key in keys {
        let (x, y) = (a.divisors.get(key), b.divisors.get(key));
        if x != y {
            let show = |m: Option<&BigUint>| m.map_or("0".to_string(), BigUint::to_string);
            return format!("{}^{}: multiplicity {} vs {}", key.0, key.1, show(x), show(y));
        }
    }
    "unfactored parts differ".into()
}

/// Computes the critical group of `G(p, ℓ, t)`.
///
/// `Formula` uses only closed forms and scales to large `q`; `Bruteforce`
/// builds the graph; `Both` runs the two concurrently and fails with
/// [`Error::MethodMismatch`] unless they agree divisor by divisor.
pub fn critical_group(params: &Params, method: Method, bounds: &Bounds) -> Result<CriticalGroupResult> {
    let coprime = coprime_part(params);
    let order = expected_order(params)?;
    let base = |group, p_part, mode, checks| CriticalGroupResult {
        params: params.clone(),
        method,
        group,
        p_part,
        coprime: coprime.clone(),
        order: order.clone(),
        bruteforce_mode: mode,
        checks,
    };
    match method {
        Method::Formula => {
            let (g, pp, checks) = formula(params, bounds)?;
            Ok(base(g, pp, None, checks))
        }
        Method::Bruteforce => {
            let (g, pp, mode, checks) = bruteforce(params, bounds)?;
            Ok(base(g, pp, Some(mode), checks))
        }
        Method::Both => {
            let (f, b) = rayon::join(|| formula(params, bounds), || bruteforce(params, bounds));
            let (fg, fp, mut checks) = f?;
            let (bg, bp, mode, bchecks) = b?;
            checks.extend(bchecks);
            if fg != bg {
                return Err(Error::MethodMismatch(describe_difference(&fg, &bg)));
            }
            if fp != bp {
                return Err(Error::MethodMismatch(format!("p-multiplicities {fp} vs {bp}")));
            }
            checks.push(Check::pass("agreement", "formula and brute-force groups agree divisor by divisor"));
            Ok(base(fg, fp, Some(mode), checks))
        }
    }
}

impl CriticalGroupResult {
    /// The torsion order, when it is small enough to write out.
    pub fn order_value(&self, max_bits: u64) -> Option<BigUint> {
        let mut g = self.group.clone();
        g.free_rank = 0;
        g.torsion_order(max_bits)
    }

    /// `true` if the critical group has no elementary divisors.
    pub fn is_trivial(&self) -> bool {
        self.group.divisors.is_empty() && self.group.unfactored.is_empty()
    }

    pub fn exponent_of(&self, prime: u64) -> BigUint {
        self.order.get(&BigUint::from(prime)).cloned().unwrap_or_default()
    }

    pub fn has_unit_coprime_part(&self) -> bool {
        self.coprime.u_prime.is_one() && self.coprime.v_prime.is_one()
    }
}
