//! Explicit arithmetic in `K = F_q` through discrete-log tables, and the
//! index-`ℓ` subgroup `S ⊂ K^×`.
//!
//! Elements are indices `0..q`: the element `c_0 + c_1 X + … + c_{n-1} X^{n-1}`
//! of `F_p[X]/(f)` has index `c_0 + c_1 p + … + c_{n-1} p^{n-1}`.

use crate::arith;
use crate::error::{Error, Result};
use crate::params::Params;

/// Dense polynomial over `F_p`, lowest degree first, no trailing zeros.
type Poly = Vec<u64>;

fn trim(mut a: Poly) -> Poly {
    while a.last() == Some(&0) {
        a.pop();
    }
    a
}

/// Remainder of `a` modulo the monic polynomial `m`.
fn poly_rem(a: &[u64], m: &[u64], p: u64) -> Poly {
    let mut r = a.to_vec();
    let dm = m.len() - 1;
    while r.len() > dm {
        let lead = *r.last().unwrap();
        let shift = r.len() - 1 - dm;
        if lead != 0 {
            for (i, &c) in m.iter().enumerate() {
                let idx = shift + i;
                r[idx] = (r[idx] + p - lead * c % p) % p;
            }
        }
        r.pop();
    }
    trim(r)
}

fn poly_mul(a: &[u64], b: &[u64], p: u64) -> Poly {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![0u64; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        if x == 0 {
            continue;
        }
        for (j, &y) in b.iter().enumerate() {
            out[i + j] = (out[i + j] + x * y) % p;
        }
    }
    trim(out)
}

/// Monic polynomial of degree `deg` whose lower coefficients are the base-`p`
/// digits of `code`.
fn monic_from_code(mut code: u64, deg: usize, p: u64) -> Poly {
    let mut f = Vec::with_capacity(deg + 1);
    for _ in 0..deg {
        f.push(code % p);
        code /= p;
    }
    f.push(1);
    f
}

fn is_irreducible(f: &[u64], p: u64) -> bool {
    let n = f.len() - 1;
    for deg in 1..=n / 2 {
        for code in 0..p.pow(deg as u32) {
            let g = monic_from_code(code, deg, p);
            if poly_rem(f, &g, p).is_empty() {
                return false;
            }
        }
    }
    true
}

/// The first monic irreducible polynomial of degree `n` over `F_p`, in order of
/// the base-`p` code of its lower coefficients (compared from `X^{n-1}` down).
pub fn smallest_irreducible(p: u64, n: usize) -> Vec<u64> {
    (0..p.pow(n as u32))
        .map(|code| monic_from_code(code, n, p))
        .find(|f| is_irreducible(f, p))
        .expect("irreducible polynomials of every degree exist")
}

#[derive(Debug, Clone)]
pub struct FieldTable {
    params: Params,
    p: u64,
    n: usize,
    q: usize,
    /// Monic modulus, lowest degree first (length `n + 1`).
    modulus: Vec<u64>,
    generator: usize,
    /// `antilog[j] = α^j` for `0 ≤ j < q - 1`.
    antilog: Vec<u32>,
    /// `log[x]` with `α^{log[x]} = x`; `log[0]` is unused.
    log: Vec<u32>,
}

impl FieldTable {
    pub fn build(params: &Params, max_q: u64) -> Result<Self> {
        let q = params.q_within("q (field table)", max_q)?;
        let p = params.p;
        let n = params.degree() as usize;
        let modulus = smallest_irreducible(p, n);
        let qm1 = (q - 1) as u64;
        let factors = arith::factor_u64(qm1);

        let elem = |x: usize| -> Poly {
            let mut c = Vec::with_capacity(n);
            let mut x = x as u64;
            for _ in 0..n {
                c.push(x % p);
                x /= p;
            }
            trim(c)
        };
        let pow = |base: &Poly, mut e: u64| -> Poly {
            let mut acc = vec![1u64];
            let mut b = base.clone();
            while e > 0 {
                if e & 1 == 1 {
                    acc = poly_rem(&poly_mul(&acc, &b, p), &modulus, p);
                }
                b = poly_rem(&poly_mul(&b, &b, p), &modulus, p);
                e >>= 1;
            }
            acc
        };
        let generator = (1..q)
            .find(|&g| {
                let gp = elem(g);
                factors.iter().all(|&(r, _)| pow(&gp, qm1 / r) != vec![1])
            })
            .expect("F_q^× is cyclic");

        let to_index = |c: &Poly| -> usize {
            c.iter().rev().fold(0u64, |acc, &d| acc * p + d) as usize
        };
        let g = elem(generator);
        let mut antilog = Vec::with_capacity(q - 1);
        let mut log = vec![u32::MAX; q];
        let mut cur: Poly = vec![1];
        for j in 0..q - 1 {
            let idx = to_index(&cur);
            antilog.push(idx as u32);
            log[idx] = j as u32;
            cur = poly_rem(&poly_mul(&cur, &g, p), &modulus, p);
        }
        debug_assert_eq!(cur, vec![1]);

        Ok(FieldTable { params: params.clone(), p, n, q, modulus, generator, antilog, log })
    }

    pub fn params(&self) -> &Params {
        &self.params
    }

    pub fn size(&self) -> usize {
        self.q
    }

    pub fn characteristic(&self) -> u64 {
        self.p
    }

    pub fn degree(&self) -> usize {
        self.n
    }

    pub fn modulus(&self) -> &[u64] {
        &self.modulus
    }

    /// Index of the primitive element `α`.
    pub fn generator(&self) -> usize {
        self.generator
    }

    pub fn subgroup_order(&self) -> usize {
        (self.q - 1) / self.params.ell as usize
    }

    pub fn coeffs(&self, x: usize) -> Vec<u64> {
        let mut x = x as u64;
        (0..self.n)
            .map(|_| {
                let c = x % self.p;
                x /= self.p;
                c
            })
            .collect()
    }

    pub fn from_coeffs(&self, c: &[u64]) -> usize {
        c.iter().rev().fold(0u64, |acc, &d| acc * self.p + d % self.p) as usize
    }

    pub fn add(&self, x: usize, y: usize) -> usize {
        if self.p == 2 {
            return x ^ y;
        }
        let (p, mut x, mut y) = (self.p as usize, x, y);
        let (mut out, mut place) = (0, 1);
        while x > 0 || y > 0 {
            out += ((x % p + y % p) % p) * place;
            x /= p;
            y /= p;
            place *= p;
        }
        out
    }

    pub fn neg(&self, x: usize) -> usize {
        if self.p == 2 {
            return x;
        }
        let (p, mut x) = (self.p as usize, x);
        let (mut out, mut place) = (0, 1);
        while x > 0 {
            out += ((p - x % p) % p) * place;
            x /= p;
            place *= p;
        }
        out
    }

    pub fn sub(&self, x: usize, y: usize) -> usize {
        self.add(x, self.neg(y))
    }

    pub fn mul(&self, x: usize, y: usize) -> usize {
        if x == 0 || y == 0 {
            return 0;
        }
        let e = (self.log[x] as usize + self.log[y] as usize) % (self.q - 1);
        self.antilog[e] as usize
    }

    /// `α^e` for any integer exponent.
    pub fn alpha_pow(&self, e: i64) -> usize {
        self.antilog[e.rem_euclid(self.q as i64 - 1) as usize] as usize
    }

    pub fn dlog(&self, x: usize) -> Result<u32> {
        if x == 0 {
            return Err(Error::ZeroElement);
        }
        Ok(self.log[x])
    }

    /// Which coset of `S` in `K^×` contains `x`: `dlog(x) mod ℓ`.
    pub fn coset_index(&self, x: usize) -> Result<usize> {
        Ok(self.dlog(x)? as usize % self.params.ell as usize)
    }

    pub fn in_subgroup(&self, x: usize) -> Result<bool> {
        Ok(self.coset_index(x)? == 0)
    }

    /// Elements of `S = {α^{ℓj}}` in increasing exponent order.
    pub fn subgroup_elements(&self) -> Vec<usize> {
        let ell = self.params.ell as usize;
        (0..self.subgroup_order()).map(|j| self.antilog[ell * j] as usize).collect()
    }
}
