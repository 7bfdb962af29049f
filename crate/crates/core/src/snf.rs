//! Smith normal form over the integers with transformation matrices.
//!
//! All arithmetic is exact (`BigInt`). The pivot at each step is the entry of
//! smallest nonzero absolute value (first in row-major order on ties), which
//! makes the result deterministic.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

pub type Matrix = Vec<Vec<BigInt>>;

/// `u · m · v = d` with `d` diagonal, `d[0] | d[1] | …`, nonnegative,
/// nonzero entries first. `u_inv` and `v_inv` are the exact inverses.
#[derive(Debug, Clone)]
pub struct Snf {
    pub rows: usize,
    pub cols: usize,
    /// Diagonal of length `min(rows, cols)`.
    pub diag: Vec<BigInt>,
    pub rank: usize,
    pub u: Matrix,
    pub u_inv: Matrix,
    pub v: Matrix,
    pub v_inv: Matrix,
}

pub fn identity(n: usize) -> Matrix {
    (0..n)
        .map(|i| {
            (0..n)
                .map(|j| if i == j { BigInt::one() } else { BigInt::zero() })
                .collect()
        })
        .collect()
}

pub fn from_i64(m: &[Vec<i64>]) -> Matrix {
    m.iter()
        .map(|r| r.iter().map(|&x| BigInt::from(x)).collect())
        .collect()
}

pub fn mul(a: &Matrix, b: &Matrix, inner: usize) -> Matrix {
    let cols = b.first().map_or(0, |r| r.len());
    a.iter()
        .map(|row| {
            (0..cols)
                .map(|j| {
                    let mut acc = BigInt::zero();
                    for k in 0..inner {
                        if !row[k].is_zero() && !b[k][j].is_zero() {
                            acc += &row[k] * &b[k][j];
                        }
                    }
                    acc
                })
                .collect()
        })
        .collect()
}

pub fn mul_vec(a: &Matrix, x: &[BigInt]) -> Vec<BigInt> {
    a.iter()
        .map(|row| {
            row.iter()
                .zip(x)
                .filter(|(r, v)| !r.is_zero() && !v.is_zero())
                .map(|(r, v)| r * v)
                .sum()
        })
        .collect()
}

pub fn to_i64(x: &BigInt) -> i64 {
    x.to_i64().expect("coordinate exceeds i64")
}

fn add_row(m: &mut Matrix, dst: usize, src: usize, q: &BigInt) {
    if q.is_zero() {
        return;
    }
    let src_row = m[src].clone();
    for (d, s) in m[dst].iter_mut().zip(&src_row) {
        if !s.is_zero() {
            *d += q * s;
        }
    }
}

fn add_col(m: &mut Matrix, dst: usize, src: usize, q: &BigInt) {
    if q.is_zero() {
        return;
    }
    for row in m.iter_mut() {
        if !row[src].is_zero() {
            let v = q * &row[src];
            row[dst] += v;
        }
    }
}

fn swap_cols(m: &mut Matrix, a: usize, b: usize) {
    for row in m.iter_mut() {
        row.swap(a, b);
    }
}

pub fn smith_normal_form(m: &Matrix, rows: usize, cols: usize) -> Snf {
    let mut a = m.clone();
    let mut u = identity(rows);
    let mut u_inv = identity(rows);
    let mut v = identity(cols);
    let mut v_inv = identity(cols);
    let mut rank = 0;

    // Elementary row op E on the left: a ← E a, u ← E u, u_inv ← u_inv E⁻¹.
    // Elementary column op E on the right: a ← a E, v ← v E, v_inv ← E⁻¹ v_inv.
    for t in 0..rows.min(cols) {
        loop {
            let mut pivot: Option<(usize, usize)> = None;
            for i in t..rows {
                for j in t..cols {
                    if a[i][j].is_zero() {
                        continue;
                    }
                    if pivot.is_none_or(|(pi, pj)| a[i][j].abs() < a[pi][pj].abs()) {
                        pivot = Some((i, j));
                    }
                }
            }
            let Some((pi, pj)) = pivot else {
                break;
            };
            if pi != t {
                a.swap(pi, t);
                u.swap(pi, t);
                swap_cols(&mut u_inv, pi, t);
            }
            if pj != t {
                swap_cols(&mut a, pj, t);
                swap_cols(&mut v, pj, t);
                v_inv.swap(pj, t);
            }
            let p = a[t][t].clone();
            let mut clean = true;
            for i in t + 1..rows {
                if a[i][t].is_zero() {
                    continue;
                }
                let q = a[i][t].div_floor(&p);
                add_row(&mut a, i, t, &-&q);
                add_row(&mut u, i, t, &-&q);
                add_col(&mut u_inv, t, i, &q);
                if !a[i][t].is_zero() {
                    clean = false;
                }
            }
            for j in t + 1..cols {
                if a[t][j].is_zero() {
                    continue;
                }
                let q = a[t][j].div_floor(&p);
                add_col(&mut a, j, t, &-&q);
                add_col(&mut v, j, t, &-&q);
                add_row(&mut v_inv, t, j, &q);
                if !a[t][j].is_zero() {
                    clean = false;
                }
            }
            if !clean {
                continue;
            }
            let offender = (t + 1..rows)
                .find(|&i| (t + 1..cols).any(|j| !a[i][j].is_multiple_of(&p)));
            if let Some(i) = offender {
                let one = BigInt::one();
                add_row(&mut a, t, i, &one);
                add_row(&mut u, t, i, &one);
                add_col(&mut u_inv, i, t, &-&one);
                continue;
            }
            if p.is_negative() {
                for x in a[t].iter_mut() {
                    *x = -&*x;
                }
                for x in u[t].iter_mut() {
                    *x = -&*x;
                }
                for row in u_inv.iter_mut() {
                    row[t] = -&row[t];
                }
            }
            rank = t + 1;
            break;
        }
        if rank != t + 1 {
            break;
        }
    }
    let diag = (0..rows.min(cols)).map(|i| a[i][i].clone()).collect();
    Snf {
        rows,
        cols,
        diag,
        rank,
        u,
        u_inv,
        v,
        v_inv,
    }
}
