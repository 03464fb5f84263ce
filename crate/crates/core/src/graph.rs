//! The Cayley graph `Cay(K, S)`: adjacency and Laplacian matrices and the
//! strongly-regular identities they satisfy.

use std::fmt;
use std::io::{self, Write};

use num_traits::ToPrimitive;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::field::FieldTable;

/// Dense row-major integer matrix.
///
/// Entries are machine integers: the matrices built here have entries bounded
/// by `q²`. [`crate::snf`] promotes to big integers where growth can occur.
#[derive(Clone, PartialEq, Eq)]
pub struct IntMatrix {
    rows: usize,
    cols: usize,
    data: Vec<i64>,
}

impl IntMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        IntMatrix { rows, cols, data: vec![0; rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, 1);
        }
        m
    }

    pub fn from_rows(rows: &[Vec<i64>]) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, |row| row.len());
        assert!(rows.iter().all(|row| row.len() == c), "ragged rows");
        IntMatrix { rows: r, cols: c, data: rows.concat() }
    }

    pub fn from_diagonal(diag: &[i64]) -> Self {
        let mut m = Self::zeros(diag.len(), diag.len());
        for (i, &d) in diag.iter().enumerate() {
            m.set(i, i, d);
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn get(&self, r: usize, c: usize) -> i64 {
        self.data[r * self.cols + c]
    }

    #[inline]
    pub fn set(&mut self, r: usize, c: usize, v: i64) {
        self.data[r * self.cols + c] = v;
    }

    pub fn row(&self, r: usize) -> &[i64] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn trace(&self) -> i64 {
        (0..self.rows.min(self.cols)).map(|i| self.get(i, i)).sum()
    }

    pub fn row_sums(&self) -> Vec<i64> {
        (0..self.rows).map(|r| self.row(r).iter().sum()).collect()
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows);
        for r in 0..self.rows {
            for c in 0..self.cols {
                t.set(c, r, self.get(r, c));
            }
        }
        t
    }

    /// Matrix product, rows computed in parallel.
    pub fn mul(&self, other: &IntMatrix) -> IntMatrix {
        assert_eq!(self.cols, other.rows);
        let n = other.cols;
        let mut data = vec![0i64; self.rows * n];
        data.par_chunks_mut(n.max(1)).enumerate().for_each(|(r, out)| {
            for (j, &a) in self.row(r).iter().enumerate() {
                if a == 0 {
                    continue;
                }
                for (o, &b) in out.iter_mut().zip(other.row(j)) {
                    *o += a * b;
                }
            }
        });
        IntMatrix { rows: self.rows, cols: n, data }
    }

    /// Permutes rows by `rp` and columns by `cp` (new row `i` is old row `rp[i]`).
    pub fn permuted(&self, rp: &[usize], cp: &[usize]) -> Self {
        let mut m = Self::zeros(self.rows, self.cols);
        for (i, &ri) in rp.iter().enumerate() {
            for (j, &cj) in cp.iter().enumerate() {
                m.set(i, j, self.get(ri, cj));
            }
        }
        m
    }

    /// One line per row, entries in decimal separated by single spaces.
    pub fn write_rows<W: Write>(&self, mut w: W) -> io::Result<()> {
        for r in 0..self.rows {
            let line: Vec<String> = self.row(r).iter().map(|x| x.to_string()).collect();
            writeln!(w, "{}", line.join(" "))?;
        }
        Ok(())
    }
}

impl fmt::Debug for IntMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "IntMatrix {}x{}", self.rows, self.cols)?;
        for r in 0..self.rows.min(12) {
            writeln!(f, "  {:?}", self.row(r))?;
        }
        Ok(())
    }
}

/// Adjacency matrix of `G(p, ℓ, t)`: `x ~ y` iff `x - y ∈ S`. Vertices are
/// ordered by field element index.
pub fn adjacency(field: &FieldTable) -> IntMatrix {
    let q = field.size();
    let mut in_s = vec![false; q];
    for s in field.subgroup_elements() {
        in_s[s] = true;
    }
    let mut a = IntMatrix::zeros(q, q);
    for x in 0..q {
        for y in 0..q {
            if in_s[field.sub(x, y)] {
                a.set(x, y, 1);
            }
        }
    }
    a
}

/// `L = kI - A`.
pub fn laplacian(field: &FieldTable) -> IntMatrix {
    let k = field.subgroup_order() as i64;
    let mut l = adjacency(field);
    for r in 0..l.rows() {
        for c in 0..l.cols() {
            let a = l.get(r, c);
            l.set(r, c, if r == c { k - a } else { -a });
        }
    }
    l
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SrgReport {
    pub vertices: usize,
    pub degree: i64,
    pub lambda: i64,
    pub mu: i64,
    /// `u + v` and `uv` from the Laplacian identity.
    pub eig_sum: i64,
    pub eig_product: i64,
}

impl fmt::Display for SrgReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "srg({}, {}, {}, {}); L(L - {}I) = {}J - {}I",
            self.vertices, self.degree, self.lambda, self.mu, self.eig_sum, self.mu, self.eig_product
        )
    }
}

/// Checks `A² = kI + λA + μ(J - I - A)` and `L(L - (u+v)I) = μJ - uvI`
/// (on the complement of the all-ones vector `L` has eigenvalues `u, v`, and
/// `uv = qμ`).
pub fn verify_srg(field: &FieldTable) -> Result<SrgReport> {
    let params = field.params();
    let small = |x: &num_bigint::BigUint| x.to_i64().expect("desk-scale parameter");
    let (k, lambda, mu) = (small(&params.k), small(&params.lambda), small(&params.mu));
    let (u, v) = (small(&params.u), small(&params.v));
    let a = adjacency(field);
    let n = a.rows();

    let a2 = a.mul(&a);
    for r in 0..n {
        for c in 0..n {
            let expected = if r == c { k } else if a.get(r, c) == 1 { lambda } else { mu };
            if a2.get(r, c) != expected {
                return Err(Error::SrgViolation { identity: "A^2", row: r, col: c, expected, actual: a2.get(r, c) });
            }
        }
    }

    let l = laplacian(field);
    let mut shifted = l.clone();
    for i in 0..n {
        shifted.set(i, i, l.get(i, i) - (u + v));
    }
    let lhs = l.mul(&shifted);
    for r in 0..n {
        for c in 0..n {
            let expected = if r == c { mu - u * v } else { mu };
            if lhs.get(r, c) != expected {
                return Err(Error::SrgViolation { identity: "L(L-(u+v)I)", row: r, col: c, expected, actual: lhs.get(r, c) });
            }
        }
    }
    Ok(SrgReport { vertices: n, degree: k, lambda, mu, eig_sum: u + v, eig_product: u * v })
}
