//! The weighted carry digraph for `ℓ = 3` and its 6×6 transfer matrix.
//!
//! A vertex is `(side, α, γ, δ)` with `α` a digit and `γ, δ ∈ {0, 1}` the
//! incoming carries of the two additions `j + k` and `j + 2k`. Side `A1`
//! handles even digit positions, where the digits of `k` and `2k` are
//! `(2p-1)/3` and `(p-2)/3`; side `A2` handles odd positions with the two
//! swapped. Each vertex has an arc to every vertex on the other side whose
//! carries are the outgoing ones, weighted `x^{γ'} y^{δ'}`.

use num_bigint::BigInt;

use super::poly::BivarPoly;
use super::{pqr, Digits};
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Side {
    A1,
    A2,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Vertex {
    pub side: Side,
    pub alpha: u64,
    pub gamma: u8,
    pub delta: u8,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WeightedDigraph {
    pub p: u64,
    pub vertices: Vec<Vertex>,
}

impl WeightedDigraph {
    pub fn new(p: u64) -> Result<Self> {
        Digits::new(p)?;
        let mut vertices = Vec::with_capacity(8 * p as usize);
        for side in [Side::A1, Side::A2] {
            for alpha in 0..p {
                for gamma in 0..2 {
                    for delta in 0..2 {
                        vertices.push(Vertex { side, alpha, gamma, delta });
                    }
                }
            }
        }
        Ok(WeightedDigraph { p, vertices })
    }

    pub fn index(&self, v: Vertex) -> usize {
        let side = match v.side {
            Side::A1 => 0,
            Side::A2 => 1,
        };
        ((side * self.p + v.alpha) * 4 + 2 * v.gamma as u64 + v.delta as u64) as usize
    }

    /// Outgoing carries `(γ', δ')` of a vertex.
    pub fn carries_out(&self, v: Vertex) -> (u8, u8) {
        let d = Digits::new(self.p).unwrap();
        let (kx, ky) = match v.side {
            Side::A1 => (d.c, d.b),
            Side::A2 => (d.b, d.c),
        };
        let out = |add: u64, carry: u8| u8::from(v.alpha + add + carry as u64 >= self.p);
        (out(kx, v.gamma), out(ky, v.delta))
    }

    /// Arcs as `(target index, (γ', δ'))`.
    pub fn arcs(&self, v: Vertex) -> impl Iterator<Item = (usize, (u8, u8))> + '_ {
        let (g, d) = self.carries_out(v);
        let side = match v.side {
            Side::A1 => Side::A2,
            Side::A2 => Side::A1,
        };
        (0..self.p).map(move |alpha| (self.index(Vertex { side, alpha, gamma: g, delta: d }), (g, d)))
    }
}

/// Compares the carry-derived arcs with the six threshold rules, written in
/// thirds to stay integral: from `A1`, `[·,0,0]` iff `3α < (p+1) - 3γ`,
/// `[·,1,1]` iff `3α ≥ 2(p+1) - 3δ`, `[·,1,0]` in between; from `A2` the
/// same with `γ ↔ δ` and targets `(·,0,0)`, `(·,1,1)`, `(·,0,1)`.
pub fn threshold_rules_check(p: u64) -> Result<()> {
    let g = WeightedDigraph::new(p)?;
    for &v in &g.vertices {
        let (first, second) = match v.side {
            Side::A1 => (v.gamma, v.delta),
            Side::A2 => (v.delta, v.gamma),
        };
        let a3 = 3 * v.alpha as i64;
        let (lo, hi) = ((p + 1) as i64 - 3 * first as i64, 2 * (p + 1) as i64 - 3 * second as i64);
        let middle = match v.side {
            Side::A1 => (1, 0),
            Side::A2 => (0, 1),
        };
        let rule = if a3 < lo {
            (0, 0)
        } else if a3 < hi {
            middle
        } else {
            (1, 1)
        };
        if g.carries_out(v) != rule {
            return Err(Error::Mismatch(format!("arc rule at {v:?}: carries {:?}, rule {rule:?}", g.carries_out(v))));
        }
    }
    Ok(())
}

/// `Σ` of weights of closed walks of length `2t`, i.e. `trace(M^{2t})`,
/// by dynamic programming from each start vertex with dense coefficient
/// arrays. The bipartite structure makes odd lengths vanish.
pub fn walk_oracle(p: u64, t: u32) -> Result<BivarPoly> {
    let g = WeightedDigraph::new(p)?;
    let n = g.vertices.len();
    let len = 2 * t as usize;
    let side = len + 1;
    let overflow = || Error::Overflow(format!("walk count for p = {p}, t = {t}"));
    let mut total = vec![0i128; side * side];
    let targets: Vec<Vec<(usize, (u8, u8))>> = g.vertices.iter().map(|&v| g.arcs(v).collect()).collect();
    for start in 0..n {
        // state[v] = weight polynomial of walks start -> v, dense in (a, b)
        let mut state: Vec<Option<Vec<i128>>> = vec![None; n];
        let mut seed = vec![0i128; side * side];
        seed[0] = 1;
        state[start] = Some(seed);
        for _ in 0..len {
            let mut next: Vec<Option<Vec<i128>>> = vec![None; n];
            for (v, poly) in state.iter().enumerate() {
                let Some(poly) = poly else { continue };
                for &(w, (dx, dy)) in &targets[v] {
                    let slot = next[w].get_or_insert_with(|| vec![0i128; side * side]);
                    for a in 0..side - dx as usize {
                        for b in 0..side - dy as usize {
                            let c = poly[a * side + b];
                            if c != 0 {
                                let cell = &mut slot[(a + dx as usize) * side + b + dy as usize];
                                *cell = cell.checked_add(c).ok_or_else(overflow)?;
                            }
                        }
                    }
                }
            }
            state = next;
        }
        if let Some(poly) = &state[start] {
            for (acc, c) in total.iter_mut().zip(poly) {
                *acc = acc.checked_add(*c).ok_or_else(overflow)?;
            }
        }
    }
    let mut out = BivarPoly::zero();
    for a in 0..side {
        for b in 0..side {
            out.add_term(a as u32, b as u32, BigInt::from(total[a * side + b]));
        }
    }
    Ok(out)
}

/// The 6×6 matrix of `M` restricted to its image, in the basis
/// `(h1, h2, h3, h1', h2', h3')`; column `j` is the image of basis vector `j`.
pub fn transfer_matrix(p: u64) -> Result<[[BivarPoly; 6]; 6]> {
    let d = Digits::new(p)?;
    let (a, b) = (BigInt::from(d.r), BigInt::from(d.b));
    let (x, y, xy) = (BivarPoly::x(), BivarPoly::y(), BivarPoly::monomial(1, 1, 1));
    let mut m: [[BivarPoly; 6]; 6] = Default::default();
    // images of h'_j land in span(h1, h2, h3), weighted 1, x, xy;
    // images of h_j land in span(h1', h2', h3'), weighted 1, y, xy
    let pattern = [[&a, &a, &b], [&a, &b, &a], [&b, &a, &a]];
    for j in 0..3 {
        for i in 0..3 {
            let c = pattern[j][i];
            let (wx, wy) = match i {
                0 => (BivarPoly::constant(1), BivarPoly::constant(1)),
                1 => (x.clone(), y.clone()),
                _ => (xy.clone(), xy.clone()),
            };
            m[i][3 + j] = wx.scale(c);
            m[3 + i][j] = wy.scale(c);
        }
    }
    Ok(m)
}

/// Polynomial in `z` with bivariate coefficients, lowest degree first.
type ZPoly = Vec<BivarPoly>;

fn zmul(f: &ZPoly, g: &ZPoly) -> ZPoly {
    if f.is_empty() || g.is_empty() {
        return Vec::new();
    }
    let mut out = vec![BivarPoly::zero(); f.len() + g.len() - 1];
    for (i, a) in f.iter().enumerate() {
        for (j, b) in g.iter().enumerate() {
            if !a.is_zero() && !b.is_zero() {
                out[i + j] = &out[i + j] + &(a * b);
            }
        }
    }
    out
}

fn zadd(f: &mut ZPoly, g: &ZPoly, sign: i32) {
    if f.len() < g.len() {
        f.resize(g.len(), BivarPoly::zero());
    }
    for (i, c) in g.iter().enumerate() {
        f[i] = if sign > 0 { &f[i] + c } else { &f[i] - c };
    }
}

/// `det(zI - M)` by the Leibniz expansion, as coefficients of `z^0..z^6`.
pub fn char_poly(m: &[[BivarPoly; 6]; 6]) -> Vec<BivarPoly> {
    let entry = |r: usize, c: usize| -> ZPoly {
        let mut e = vec![-&m[r][c]];
        if r == c {
            e.push(BivarPoly::constant(1));
        }
        e
    };
    let mut total: ZPoly = vec![BivarPoly::zero(); 7];
    for perm in permutations(6) {
        let mut term: ZPoly = vec![BivarPoly::constant(1)];
        for (r, &c) in perm.iter().enumerate() {
            let e = entry(r, c);
            if e.iter().all(BivarPoly::is_zero) {
                term.clear();
                break;
            }
            term = zmul(&term, &e);
        }
        if !term.is_empty() {
            zadd(&mut total, &term, parity(&perm));
        }
    }
    total.resize(7, BivarPoly::zero());
    total
}

fn permutations(n: usize) -> Vec<Vec<usize>> {
    use itertools::Itertools;
    (0..n).permutations(n).collect()
}

fn parity(perm: &[usize]) -> i32 {
    let inversions = (0..perm.len()).flat_map(|i| (i + 1..perm.len()).map(move |j| (i, j))).filter(|&(i, j)| perm[i] > perm[j]).count();
    if inversions % 2 == 0 {
        1
    } else {
        -1
    }
}

/// Checks `det(zI - M) = z^6 - P z^4 + Q z^2 - R` and `det M = -p² x³ y³`.
pub fn transfer_matrix_check(p: u64) -> Result<()> {
    let m = transfer_matrix(p)?;
    let (pp, qq, rr) = pqr(p)?;
    let cp = char_poly(&m);
    let zero = BivarPoly::zero();
    let expected = [-&rr, zero.clone(), qq, zero.clone(), -&pp, zero, BivarPoly::constant(1)];
    for (deg, (got, want)) in cp.iter().zip(&expected).enumerate() {
        if got != want {
            return Err(Error::Mismatch(format!("p = {p}: coefficient of z^{deg} is {got}, expected {want}")));
        }
    }
    // det(M) = det(-(0·I - M)) = (-1)^6 · (constant term)
    let det = &cp[0];
    let want = BivarPoly::monomial(-BigInt::from(p * p), 3, 3);
    if *det != want {
        return Err(Error::Mismatch(format!("p = {p}: det M = {det}, expected {want}")));
    }
    Ok(())
}

/// `trace(M^n)` for the 6×6 transfer matrix.
pub fn transfer_trace(p: u64, n: u32) -> Result<BivarPoly> {
    let m = transfer_matrix(p)?;
    let mut acc: Vec<Vec<BivarPoly>> =
        (0..6).map(|i| (0..6).map(|j| if i == j { BivarPoly::constant(1) } else { BivarPoly::zero() }).collect()).collect();
    for _ in 0..n {
        let mut next = vec![vec![BivarPoly::zero(); 6]; 6];
        for i in 0..6 {
            for j in 0..6 {
                let mut s = BivarPoly::zero();
                for l in 0..6 {
                    if !acc[i][l].is_zero() && !m[l][j].is_zero() {
                        s = &s + &(&acc[i][l] * &m[l][j]);
                    }
                }
                next[i][j] = s;
            }
        }
        acc = next;
    }
    Ok((0..6).fold(BivarPoly::zero(), |s, i| &s + &acc[i][i]))
}
