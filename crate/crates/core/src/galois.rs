//! Arithmetic in the Galois ring `GR(p^N, n) = R / p^N R`, where `R` is the
//! ring of integers of the unramified extension of `Q_p` of degree
//! `n = (ℓ-1)t`, plus Teichmüller lifts, Jacobi sums, and the isotypic block
//! decomposition of the Laplacian.
//!
//! The ring uses the coefficientwise lift of the modulus chosen by
//! [`FieldTable`], so reducing an element mod `p` lands exactly in that
//! field's representation.

use std::fmt;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::carries::{self, CarryContext, PMultiplicities};
use crate::error::{Error, Result};
use crate::field::FieldTable;
use crate::params::Params;

/// An element of `GR(p^N, n)`: coefficients of a polynomial of degree `< n`,
/// each in `0..p^N`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct GaloisRingElem {
    pub coeffs: Vec<u64>,
}

/// `v_p` of a ring element, or a lower bound when it vanishes mod `p^N`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum Valuation {
    Exact(u32),
    AtLeast(u32),
}

impl Valuation {
    pub fn exact(self) -> Option<u32> {
        match self {
            Valuation::Exact(v) => Some(v),
            Valuation::AtLeast(_) => None,
        }
    }
}

impl fmt::Display for Valuation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Valuation::Exact(v) => write!(f, "{v}"),
            Valuation::AtLeast(n) => write!(f, ">={n}"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GaloisRing {
    p: u64,
    n: usize,
    precision: u32,
    modulus: u64,
    /// Lower coefficients of the monic modulus, lifted to `0..p^N`.
    poly: Vec<u64>,
    q: u64,
}

impl GaloisRing {
    /// `(ℓ-1)t + d + 4`: enough to separate every valuation up to `v_p(uv)`.
    pub fn default_precision(params: &Params) -> u32 {
        params.vp_uv() + 4
    }

    pub fn new(field: &FieldTable, precision: u32) -> Result<Self> {
        let p = field.characteristic();
        let modulus = p
            .checked_pow(precision)
            .filter(|&m| precision >= 1 && m < 1 << 32)
            .ok_or_else(|| Error::Overflow(format!("{p}^{precision} exceeds the Galois ring word size")))?;
        let n = field.degree();
        Ok(GaloisRing {
            p,
            n,
            precision,
            modulus,
            poly: field.modulus()[..n].to_vec(),
            q: field.size() as u64,
        })
    }

    pub fn precision(&self) -> u32 {
        self.precision
    }

    pub fn characteristic(&self) -> u64 {
        self.p
    }

    pub fn zero(&self) -> GaloisRingElem {
        GaloisRingElem { coeffs: vec![0; self.n] }
    }

    pub fn from_int(&self, x: i64) -> GaloisRingElem {
        let mut e = self.zero();
        e.coeffs[0] = x.rem_euclid(self.modulus as i64) as u64;
        e
    }

    pub fn one(&self) -> GaloisRingElem {
        self.from_int(1)
    }

    /// The coefficientwise lift of a field element (not multiplicative).
    pub fn lift(&self, field: &FieldTable, x: usize) -> GaloisRingElem {
        GaloisRingElem { coeffs: field.coeffs(x) }
    }

    /// Reduction mod `p`, as a field index.
    pub fn reduce(&self, field: &FieldTable, e: &GaloisRingElem) -> usize {
        field.from_coeffs(&e.coeffs.iter().map(|c| c % self.p).collect::<Vec<_>>())
    }

    pub fn is_zero(&self, e: &GaloisRingElem) -> bool {
        e.coeffs.iter().all(|&c| c == 0)
    }

    pub fn add(&self, a: &GaloisRingElem, b: &GaloisRingElem) -> GaloisRingElem {
        let m = self.modulus;
        GaloisRingElem { coeffs: a.coeffs.iter().zip(&b.coeffs).map(|(x, y)| (x + y) % m).collect() }
    }

    pub fn neg(&self, a: &GaloisRingElem) -> GaloisRingElem {
        let m = self.modulus;
        GaloisRingElem { coeffs: a.coeffs.iter().map(|x| (m - x) % m).collect() }
    }

    pub fn sub(&self, a: &GaloisRingElem, b: &GaloisRingElem) -> GaloisRingElem {
        self.add(a, &self.neg(b))
    }

    pub fn scale(&self, a: &GaloisRingElem, s: i64) -> GaloisRingElem {
        let m = self.modulus;
        let s = s.rem_euclid(m as i64) as u64;
        GaloisRingElem { coeffs: a.coeffs.iter().map(|x| x * s % m).collect() }
    }

    pub fn mul(&self, a: &GaloisRingElem, b: &GaloisRingElem) -> GaloisRingElem {
        let (n, m) = (self.n, self.modulus);
        let mut prod = vec![0u128; 2 * n - 1];
        for (i, &x) in a.coeffs.iter().enumerate() {
            if x == 0 {
                continue;
            }
            for (j, &y) in b.coeffs.iter().enumerate() {
                prod[i + j] += (x * y) as u128;
            }
        }
        let mut prod: Vec<u64> = prod.into_iter().map(|c| (c % m as u128) as u64).collect();
        for deg in (n..2 * n - 1).rev() {
            let c = prod[deg];
            if c == 0 {
                continue;
            }
            for i in 0..n {
                let t = deg - n + i;
                prod[t] = (prod[t] + m - c * self.poly[i] % m) % m;
            }
        }
        prod.truncate(n);
        GaloisRingElem { coeffs: prod }
    }

    pub fn pow(&self, a: &GaloisRingElem, mut e: u64) -> GaloisRingElem {
        let mut acc = self.one();
        let mut base = a.clone();
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(&acc, &base);
            }
            base = self.mul(&base, &base);
            e >>= 1;
        }
        acc
    }

    pub fn valuation(&self, e: &GaloisRingElem) -> Valuation {
        let mut best = self.precision;
        for &c in &e.coeffs {
            if c == 0 {
                continue;
            }
            let (mut c, mut v) = (c, 0);
            while c % self.p == 0 {
                c /= self.p;
                v += 1;
            }
            best = best.min(v);
        }
        if best == self.precision {
            Valuation::AtLeast(self.precision)
        } else {
            Valuation::Exact(best)
        }
    }

    /// `e / p^v` for `v ≤ v_p(e)`; the result is determined mod `p^{N-v}`.
    pub fn div_p_pow(&self, e: &GaloisRingElem, v: u32) -> GaloisRingElem {
        let d = self.p.pow(v);
        debug_assert!(e.coeffs.iter().all(|c| c % d == 0));
        GaloisRingElem { coeffs: e.coeffs.iter().map(|c| c / d).collect() }
    }

    /// Inverse of a unit: `w^{q-2}` is an inverse mod `p`, then Newton steps
    /// `x ← x(2 - wx)` double the precision each time.
    pub fn inverse_unit(&self, w: &GaloisRingElem) -> Result<GaloisRingElem> {
        if self.valuation(w) != Valuation::Exact(0) {
            return Err(Error::ZeroElement);
        }
        let mut x = self.pow(w, self.q - 2);
        let two = self.from_int(2);
        let mut good = 1;
        while good < self.precision {
            x = self.mul(&x, &self.sub(&two, &self.mul(w, &x)));
            good *= 2;
        }
        debug_assert_eq!(self.mul(w, &x), self.one());
        Ok(x)
    }

    /// The Teichmüller lift of `x ≠ 0`: iterate `y ↦ y^q` from the
    /// coefficientwise lift until it stabilizes.
    pub fn teichmuller(&self, field: &FieldTable, x: usize) -> Result<GaloisRingElem> {
        if x == 0 {
            return Err(Error::ZeroElement);
        }
        let mut y = self.lift(field, x);
        for _ in 0..=self.precision {
            let next = self.pow(&y, self.q);
            if next == y {
                return Ok(y);
            }
            y = next;
        }
        Err(Error::PrecisionInsufficient { n: self.precision, needed: self.precision })
    }
}

/// The Teichmüller character `T` as a table of `ω(α)^j`, with the data needed
/// to evaluate Jacobi sums.
#[derive(Debug, Clone)]
pub struct JacobiContext<'a> {
    pub field: &'a FieldTable,
    pub ring: GaloisRing,
    /// `powers[j] = T(α)^j` for `0 ≤ j < q - 1`.
    powers: Vec<GaloisRingElem>,
    /// `one_minus[x]` is the index of `1 - x`.
    one_minus: Vec<usize>,
}

impl<'a> JacobiContext<'a> {
    pub fn new(field: &'a FieldTable, precision: u32) -> Result<Self> {
        let ring = GaloisRing::new(field, precision)?;
        let omega = ring.teichmuller(field, field.generator())?;
        let q = field.size();
        let mut powers = Vec::with_capacity(q - 1);
        let mut cur = ring.one();
        for _ in 0..q - 1 {
            powers.push(cur.clone());
            cur = ring.mul(&cur, &omega);
        }
        let one_minus = (0..q).map(|x| field.sub(1, x)).collect();
        Ok(JacobiContext { field, ring, powers, one_minus })
    }

    fn order(&self) -> i64 {
        self.field.size() as i64 - 1
    }

    /// `T(x)`, read from the table.
    pub fn teichmuller(&self, x: usize) -> Result<GaloisRingElem> {
        Ok(self.powers[self.field.dlog(x)? as usize].clone())
    }

    /// `T^a(x)`. `T^0` is `1` everywhere, including at `0`; every other
    /// power (including `T^{q-1}`) vanishes at `0`.
    pub fn character(&self, a: i64, x: usize) -> GaloisRingElem {
        if x == 0 {
            return if a == 0 { self.ring.one() } else { self.ring.zero() };
        }
        let e = (a.rem_euclid(self.order()) * self.field.dlog(x).unwrap() as i64) % self.order();
        self.powers[e as usize].clone()
    }

    /// `J(T^a, T^b) = Σ_{x ∈ K} T^a(x) T^b(1 - x)`.
    pub fn jacobi(&self, a: i64, b: i64) -> GaloisRingElem {
        let order = self.order();
        let (ra, rb) = (a.rem_euclid(order), b.rem_euclid(order));
        let n = self.ring.n;
        let mut acc = vec![0u64; n];
        let mut add = |e: &GaloisRingElem| {
            for (s, c) in acc.iter_mut().zip(&e.coeffs) {
                *s += c;
            }
        };
        for x in 0..self.field.size() {
            let y = self.one_minus[x];
            if x == 0 || y == 0 {
                // One factor is evaluated at 0; the other is T^c(1) = 1.
                let c = if x == 0 { a } else { b };
                if c == 0 {
                    add(&self.ring.one());
                }
                continue;
            }
            let e = (ra * self.field.dlog(x).unwrap() as i64 + rb * self.field.dlog(y).unwrap() as i64) % order;
            add(&self.powers[e as usize]);
        }
        let m = self.ring.modulus;
        GaloisRingElem { coeffs: acc.into_iter().map(|c| c % m).collect() }
    }
}

/// Outcome of comparing Jacobi sum valuations with carry counts.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct StickelbergerReport {
    pub checked: u64,
    pub exhaustive: bool,
}

/// How many pairs to test when `q` is too large for an exhaustive sweep.
pub const STICKELBERGER_SAMPLES: usize = 20_000;

/// Checks `v_p(J(T^{-a}, T^{-b})) = c(a, b)` for all admissible pairs when
/// `q ≤ 256`, and for a seeded random sample otherwise.
pub fn stickelberger_check(ctx: &JacobiContext<'_>, seed: u64) -> Result<StickelbergerReport> {
    let params = ctx.field.params();
    if ctx.ring.precision <= params.degree() {
        return Err(Error::PrecisionInsufficient { n: ctx.ring.precision, needed: params.degree() });
    }
    let carry = CarryContext::new(params)?;
    let order = ctx.field.size() as u64 - 1;
    let check = |a: u64, b: u64| -> Option<Error> {
        if (a + b).is_multiple_of(order) {
            return None;
        }
        let c = carry.carries(a as i128, b as i128).ok()?;
        let v = ctx.ring.valuation(&ctx.jacobi(-(a as i64), -(b as i64)));
        (v != Valuation::Exact(c)).then(|| Error::MismatchFound { a, b, valuation: v.to_string(), carries: c })
    };
    if ctx.field.size() <= 256 {
        let failure = (1..order).into_par_iter().find_map_first(|a| (1..order).find_map(|b| check(a, b)));
        if let Some(e) = failure {
            return Err(e);
        }
        let checked = (1..order).map(|a| (1..order).filter(|b| (a + b) % order != 0).count() as u64).sum();
        return Ok(StickelbergerReport { checked, exhaustive: true });
    }
    use rand::RngExt;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut pairs = Vec::with_capacity(STICKELBERGER_SAMPLES);
    while pairs.len() < STICKELBERGER_SAMPLES {
        let (a, b) = (rng.random_range(1..order), rng.random_range(1..order));
        if (a + b) % order != 0 {
            pairs.push((a, b));
        }
    }
    if let Some(e) = pairs.par_iter().find_map_first(|&(a, b)| check(a, b)) {
        return Err(e);
    }
    Ok(StickelbergerReport { checked: pairs.len() as u64, exhaustive: false })
}

/// A square matrix over the Galois ring, row-major.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BlockMatrix {
    pub size: usize,
    pub entries: Vec<GaloisRingElem>,
}

impl BlockMatrix {
    pub fn get(&self, r: usize, c: usize) -> &GaloisRingElem {
        &self.entries[r * self.size + c]
    }
}

/// `ℓ L_i` on the basis `(f_{i+mk})_{0 ≤ m < ℓ}`, where
/// `f_j = Σ_{x ≠ 0} T^{-j}(x) [x]`. Row `m` holds the image of `f_{i+mk}`:
/// `q` on the diagonal and `-J(T^{-(i+mk)}, T^{-m'k})` at column `m + m'`.
pub fn block_l(ctx: &JacobiContext<'_>, i: u64) -> BlockMatrix {
    let params = ctx.field.params();
    let (ell, k) = (params.ell as usize, ctx.field.subgroup_order() as i64);
    let ring = &ctx.ring;
    let q = ctx.field.size() as i64;
    let mut entries = vec![ring.zero(); ell * ell];
    for m in 0..ell {
        entries[m * ell + m] = ring.from_int(q);
        let src = i as i64 + m as i64 * k;
        for step in 1..ell {
            let col = (m + step) % ell;
            entries[m * ell + col] = ring.neg(&ctx.jacobi(-src, -(step as i64) * k));
        }
    }
    BlockMatrix { size: ell, entries }
}

/// `ℓ L_0` on the basis `(1, [0], f_k, …, f_{(ℓ-1)k})`, rows as images.
pub fn block_l0(ctx: &JacobiContext<'_>) -> BlockMatrix {
    let params = ctx.field.params();
    let ell = params.ell as usize;
    let k = ctx.field.subgroup_order() as i64;
    let q = ctx.field.size() as i64;
    let ring = &ctx.ring;
    let size = ell + 1;
    let mut entries = vec![ring.zero(); size * size];
    // row 0: the all-ones vector is in the kernel
    entries[size] = ring.from_int(-1);
    entries[size + 1] = ring.from_int(q);
    for j in 1..ell {
        entries[size + 1 + j] = ring.from_int(-1);
    }
    for j in 1..ell {
        let row = 1 + j;
        entries[row * size] = ring.one();
        entries[row * size + 1] = ring.from_int(-q);
        entries[row * size + row] = ring.from_int(q);
        for m in 1..ell {
            let target = (j + m) % ell;
            if target == 0 {
                continue;
            }
            entries[row * size + 1 + target] = ring.neg(&ctx.jacobi(-(j as i64) * k, -(m as i64) * k));
        }
    }
    BlockMatrix { size, entries }
}

/// Diagonal valuations of the Smith form over the local ring, by elimination
/// with minimal-valuation pivots (ties to smallest `(row, col)`).
pub fn local_smith_block(ring: &GaloisRing, block: &BlockMatrix) -> Result<Vec<Valuation>> {
    let s = block.size;
    let mut a = block.entries.clone();
    let mut out = Vec::with_capacity(s);
    for step in 0..s {
        let mut best: Option<(u32, usize, usize)> = None;
        for r in step..s {
            for c in step..s {
                if let Valuation::Exact(v) = ring.valuation(&a[r * s + c]) {
                    if best.is_none_or(|b| v < b.0) {
                        best = Some((v, r, c));
                    }
                }
            }
        }
        let Some((v, pr, pc)) = best else {
            out.extend(std::iter::repeat_n(Valuation::AtLeast(ring.precision), s - step));
            break;
        };
        for c in 0..s {
            a.swap(step * s + c, pr * s + c);
        }
        for r in 0..s {
            a.swap(r * s + step, r * s + pc);
        }
        let unit = ring.div_p_pow(&a[step * s + step], v);
        let inv = ring.inverse_unit(&unit)?;
        for r in step + 1..s {
            let x = &a[r * s + step];
            if ring.is_zero(x) {
                continue;
            }
            let f = ring.mul(&ring.div_p_pow(x, v), &inv);
            for c in step..s {
                let d = ring.mul(&f, &a[step * s + c]);
                a[r * s + c] = ring.sub(&a[r * s + c], &d);
            }
        }
        out.push(Valuation::Exact(v));
    }
    out.sort();
    Ok(out)
}

fn show(v: &[Valuation]) -> String {
    let parts: Vec<String> = v.iter().map(Valuation::to_string).collect();
    format!("[{}]", parts.join(", "))
}

fn require_precision(ctx: &JacobiContext<'_>) -> Result<()> {
    let needed = ctx.field.params().vp_uv();
    if ctx.ring.precision <= needed {
        return Err(Error::PrecisionInsufficient { n: ctx.ring.precision, needed });
    }
    Ok(())
}

/// Checks that `L_i` (`1 ≤ i < k`) has local Smith form
/// `diag(p^{min(i)}, p^h, …, p^h, p^{v_p(uv) - min(i)})`; returns the valuations.
pub fn block_snf_check(ctx: &JacobiContext<'_>, i: u64) -> Result<Vec<u32>> {
    require_precision(ctx)?;
    let params = ctx.field.params();
    let low = carries::min_profile(i, params)?;
    let h = params.half_degree();
    let mut expected = vec![Valuation::Exact(low), Valuation::Exact(params.vp_uv() - low)];
    expected.extend(std::iter::repeat_n(Valuation::Exact(h), params.ell as usize - 2));
    expected.sort();
    let found = local_smith_block(&ctx.ring, &block_l(ctx, i))?;
    if found != expected {
        return Err(Error::SnfMismatch { block: format!("L_{i}"), expected: show(&expected), found: show(&found) });
    }
    Ok(found.iter().filter_map(|v| v.exact()).collect())
}

/// Checks that `L_0` has local Smith form `diag(1, 1, p^h, …, p^h, p^{v_p(u)}, 0)`
/// and returns the nonzero valuations.
pub fn block_l0_check(ctx: &JacobiContext<'_>) -> Result<Vec<u32>> {
    require_precision(ctx)?;
    let params = ctx.field.params();
    let mut expected = vec![Valuation::Exact(0), Valuation::Exact(0), Valuation::Exact(params.vp_u())];
    expected.extend(std::iter::repeat_n(Valuation::Exact(params.half_degree()), params.ell as usize - 3));
    expected.push(Valuation::AtLeast(ctx.ring.precision));
    expected.sort();
    let found = local_smith_block(&ctx.ring, &block_l0(ctx))?;
    if found != expected {
        return Err(Error::SnfMismatch { block: "L_0".into(), expected: show(&expected), found: show(&found) });
    }
    Ok(found.iter().filter_map(|v| v.exact()).collect())
}

/// The `p`-elementary divisors of the Laplacian assembled block by block,
/// with every block checked against its expected Smith form.
pub fn block_multiplicities(ctx: &JacobiContext<'_>) -> Result<PMultiplicities> {
    let params = ctx.field.params();
    let k = ctx.field.subgroup_order() as u64;
    let per_block: Vec<Vec<u32>> = (1..k).into_par_iter().map(|i| block_snf_check(ctx, i)).collect::<Result<_>>()?;
    let mut counts = vec![0u64; params.vp_uv() as usize + 1];
    for v in block_l0_check(ctx)?.into_iter().chain(per_block.into_iter().flatten()) {
        counts[v as usize] += 1;
    }
    let out = PMultiplicities::from_counts(
        params.p,
        counts.into_iter().enumerate().map(|(j, c)| (j as u32, num_bigint::BigUint::from(c))),
    );
    out.check_conservation(params)?;
    Ok(out)
}
