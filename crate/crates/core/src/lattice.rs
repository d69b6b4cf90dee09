//! Integer matrix helpers used by the group, chart and transform code.
//!
//! Matrices are row-major `Vec<Vec<i64>>`. Intermediate work is done in
//! `BigInt`/`BigRational` so overflow can only surface when a result is
//! converted back to `i64`.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::GroupError;

pub type IntMatrix = Vec<Vec<i64>>;

pub fn identity(n: usize) -> IntMatrix {
    (0..n)
        .map(|i| (0..n).map(|j| i64::from(i == j)).collect())
        .collect()
}

pub fn to_i64(x: &BigInt) -> Result<i64, GroupError> {
    x.to_i64().ok_or(GroupError::Overflow)
}

/// Determinant by fraction-free (Bareiss) elimination.
pub fn det(m: &[Vec<i64>]) -> BigInt {
    let n = m.len();
    if n == 0 {
        return BigInt::one();
    }
    let mut a: Vec<Vec<BigInt>> = m
        .iter()
        .map(|row| row.iter().map(|&x| BigInt::from(x)).collect())
        .collect();
    let mut sign = BigInt::one();
    let mut prev = BigInt::one();
    for k in 0..n - 1 {
        if a[k][k].is_zero() {
            match (k + 1..n).find(|&i| !a[i][k].is_zero()) {
                Some(i) => {
                    a.swap(i, k);
                    sign = -sign;
                }
                None => return BigInt::zero(),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let v = &a[i][j] * &a[k][k] - &a[i][k] * &a[k][j];
                a[i][j] = v / &prev;
            }
        }
        prev = a[k][k].clone();
    }
    sign * a[n - 1][n - 1].clone()
}

pub fn is_unimodular(m: &[Vec<i64>]) -> bool {
    if m.iter().any(|row| row.len() != m.len()) {
        return false;
    }
    det(m).abs().is_one()
}

/// Solves `c · m = target` for `c` over the rationals. Returns `None` when `m`
/// is singular or not square.
pub fn solve_left_rational(m: &[Vec<i64>], target: &[i64]) -> Option<Vec<BigRational>> {
    let n = m.len();
    if m.iter().any(|row| row.len() != n) || target.len() != n {
        return None;
    }
    // c · m = t  <=>  mᵀ · cᵀ = tᵀ; build the augmented system on mᵀ.
    let mut a: Vec<Vec<BigRational>> = (0..n)
        .map(|i| {
            let mut row: Vec<BigRational> =
                (0..n).map(|j| BigRational::from_integer(m[j][i].into())).collect();
            row.push(BigRational::from_integer(target[i].into()));
            row
        })
        .collect();
    for col in 0..n {
        let pivot = (col..n).find(|&r| !a[r][col].is_zero())?;
        a.swap(pivot, col);
        let inv = a[col][col].recip();
        for x in a[col].iter_mut() {
            *x = &*x * &inv;
        }
        for r in 0..n {
            if r != col && !a[r][col].is_zero() {
                let factor = a[r][col].clone();
                for j in col..=n {
                    let v = &a[col][j] * &factor;
                    a[r][j] -= v;
                }
            }
        }
    }
    Some(a.into_iter().map(|row| row[n].clone()).collect())
}

/// The unique integer vector `c` with `c · u = target`, for unimodular `u`.
pub fn solve_left_unimodular(u: &[Vec<i64>], target: &[i64]) -> Result<Vec<i64>, GroupError> {
    if !is_unimodular(u) {
        return Err(GroupError::NonUnimodular);
    }
    if target.len() != u.len() {
        return Err(GroupError::RankMismatch {
            expected: u.len(),
            found: target.len(),
        });
    }
    let sol = solve_left_rational(u, target).ok_or(GroupError::NonUnimodular)?;
    sol.iter()
        .map(|q| {
            debug_assert!(q.is_integer());
            to_i64(&q.to_integer())
        })
        .collect()
}

/// Inverse of a unimodular matrix.
pub fn unimodular_inverse(u: &[Vec<i64>]) -> Result<IntMatrix, GroupError> {
    let n = u.len();
    // row i of u⁻¹ is the c with c · u = e_i
    let id = identity(n);
    id.iter().map(|e| solve_left_unimodular(u, e)).collect()
}

/// Row vector times matrix.
pub fn vec_mul(c: &[i64], m: &[Vec<i64>]) -> Vec<i64> {
    let cols = m.first().map_or(0, |r| r.len());
    let mut out = vec![0i64; cols];
    for (ci, row) in c.iter().zip(m) {
        if *ci == 0 {
            continue;
        }
        for (o, x) in out.iter_mut().zip(row) {
            *o += ci * x;
        }
    }
    out
}

pub fn mat_mul(a: &[Vec<i64>], b: &[Vec<i64>]) -> IntMatrix {
    a.iter().map(|row| vec_mul(row, b)).collect()
}

/// Column reduction of an integer matrix `c` (`s × n`, rank `k`).
///
/// Returns a unimodular `n × n` matrix `w` such that the last `n − k` columns
/// of `c · w` vanish; those columns of `w` form a basis of the (saturated)
/// integer kernel of `c`.
pub fn column_reduce(c: &[Vec<BigInt>], n: usize) -> (Vec<Vec<BigInt>>, usize) {
    let mut a: Vec<Vec<BigInt>> = c.to_vec();
    let mut w: Vec<Vec<BigInt>> = (0..n)
        .map(|i| (0..n).map(|j| BigInt::from(u8::from(i == j))).collect())
        .collect();
    let mut pivot_col = 0;
    for row in 0..a.len() {
        if pivot_col >= n {
            break;
        }
        // Euclid across the columns pivot_col.. of this row.
        loop {
            let nz: Vec<usize> = (pivot_col..n).filter(|&j| !a[row][j].is_zero()).collect();
            if nz.is_empty() {
                break;
            }
            let best = *nz
                .iter()
                .min_by(|&&x, &&y| a[row][x].abs().cmp(&a[row][y].abs()))
                .unwrap();
            swap_cols(&mut a, &mut w, best, pivot_col);
            let mut done = true;
            for j in pivot_col + 1..n {
                if a[row][j].is_zero() {
                    continue;
                }
                let q = a[row][j].div_floor(&a[row][pivot_col]);
                add_col_multiple(&mut a, &mut w, j, pivot_col, &(-q));
                if !a[row][j].is_zero() {
                    done = false;
                }
            }
            if done {
                break;
            }
        }
        if !a[row][pivot_col].is_zero() {
            pivot_col += 1;
        }
    }
    (w, pivot_col)
}

fn swap_cols(a: &mut [Vec<BigInt>], w: &mut [Vec<BigInt>], i: usize, j: usize) {
    if i == j {
        return;
    }
    for row in a.iter_mut().chain(w.iter_mut()) {
        row.swap(i, j);
    }
}

/// column `dst` += k · column `src`
fn add_col_multiple(a: &mut [Vec<BigInt>], w: &mut [Vec<BigInt>], dst: usize, src: usize, k: &BigInt) {
    for row in a.iter_mut().chain(w.iter_mut()) {
        let v = &row[src] * k;
        row[dst] += v;
    }
}
