//! Exact elimination kernels: fraction-free (Bareiss) rank and determinant
//! over big integers, and reduced row echelon form over big rationals for
//! null-space extraction. No rounding happens anywhere in this module.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};

/// Rank by fraction-free Gaussian elimination.
///
/// Each row is first scaled by the lcm of its denominators (row scaling does
/// not change rank), then Bareiss elimination runs over integers; every
/// division is exact by Sylvester's identity.
pub fn bareiss_rank(rows: usize, cols: usize, entries: &[BigRational]) -> usize {
    let mut m = clear_denominators(rows, cols, entries);
    let mut prev = BigInt::one();
    let mut rank = 0;
    for col in 0..cols {
        if rank == rows {
            break;
        }
        let Some(p) = (rank..rows).find(|&i| !m[i * cols + col].is_zero()) else {
            continue;
        };
        if p != rank {
            for j in 0..cols {
                m.swap(rank * cols + j, p * cols + j);
            }
        }
        let pivot = m[rank * cols + col].clone();
        for i in rank + 1..rows {
            let head = m[i * cols + col].clone();
            for j in col + 1..cols {
                let t = &pivot * &m[i * cols + j] - &head * &m[rank * cols + j];
                m[i * cols + j] = &t / &prev;
            }
            m[i * cols + col] = BigInt::zero();
        }
        prev = pivot;
        rank += 1;
    }
    rank
}

/// Exact determinant of a square integer matrix by Bareiss elimination.
pub fn bareiss_determinant(n: usize, entries: &[BigInt]) -> BigInt {
    assert_eq!(entries.len(), n * n);
    let mut m = entries.to_vec();
    let mut prev = BigInt::one();
    let mut sign = 1i32;
    for k in 0..n {
        let Some(p) = (k..n).find(|&i| !m[i * n + k].is_zero()) else {
            return BigInt::zero();
        };
        if p != k {
            for j in 0..n {
                m.swap(k * n + j, p * n + j);
            }
            sign = -sign;
        }
        let pivot = m[k * n + k].clone();
        for i in k + 1..n {
            let head = m[i * n + k].clone();
            for j in k + 1..n {
                let t = &pivot * &m[i * n + j] - &head * &m[k * n + j];
                m[i * n + j] = &t / &prev;
            }
            m[i * n + k] = BigInt::zero();
        }
        prev = pivot;
    }
    let det = m[(n - 1) * n + (n - 1)].clone();
    if sign < 0 {
        -det
    } else {
        det
    }
}

fn clear_denominators(rows: usize, cols: usize, entries: &[BigRational]) -> Vec<BigInt> {
    let mut out = Vec::with_capacity(rows * cols);
    for i in 0..rows {
        let row = &entries[i * cols..(i + 1) * cols];
        let mut lcm = BigInt::one();
        for x in row {
            lcm = lcm.lcm(x.denom());
        }
        for x in row {
            out.push(x.numer() * (&lcm / x.denom()));
        }
    }
    out
}

/// Kernel basis from the reduced row echelon form.
///
/// For each free column f (taken in descending order), the basis vector has
/// component 1 at f, 0 at the other free columns, and minus the RREF entry at
/// every pivot column. This reproduces textbook null-space listings such as
/// {(-3, 0, 1), (-2, 1, 0)} verbatim.
pub fn rref_null_basis(rows: usize, cols: usize, entries: &[BigRational]) -> Vec<Vec<BigRational>> {
    let mut m = entries.to_vec();
    let mut pivots: Vec<usize> = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(p) = (r..rows).find(|&i| !m[i * cols + c].is_zero()) else {
            continue;
        };
        if p != r {
            for j in 0..cols {
                m.swap(r * cols + j, p * cols + j);
            }
        }
        let inv = m[r * cols + c].recip();
        for j in c..cols {
            let v = &m[r * cols + j] * &inv;
            m[r * cols + j] = v;
        }
        for i in 0..rows {
            if i == r || m[i * cols + c].is_zero() {
                continue;
            }
            let factor = m[i * cols + c].clone();
            for j in c..cols {
                let v = &m[i * cols + j] - &factor * &m[r * cols + j];
                m[i * cols + j] = v;
            }
        }
        pivots.push(c);
        r += 1;
    }

    let mut basis = Vec::new();
    for f in (0..cols).rev() {
        if pivots.contains(&f) {
            continue;
        }
        let mut v = vec![BigRational::zero(); cols];
        v[f] = BigRational::one();
        for (k, &pc) in pivots.iter().enumerate() {
            v[pc] = -m[k * cols + f].clone();
        }
        basis.push(v);
    }
    basis
}
