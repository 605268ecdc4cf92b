//! Smith and Hermite normal forms over the integers.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::{IntMatrix, LatticeError, UnimodularMatrix};

/// Result of [`snf`]: `u * m * v == d`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SmithDecomposition {
    pub d: IntMatrix,
    pub u: UnimodularMatrix,
    pub v: UnimodularMatrix,
}

impl SmithDecomposition {
    /// Diagonal entries d_1 | d_2 | ... (zeros trail).
    pub fn invariant_factors(&self) -> Vec<BigInt> {
        self.d.diagonal()
    }
}

/// Smith normal form with unimodular transforms.
///
/// Diagonal entries are non-negative and form a divisibility chain; zero
/// entries come last.
pub fn snf(m: &IntMatrix) -> SmithDecomposition {
    let (rows, cols) = (m.rows(), m.cols());
    let mut a = m.clone();
    let mut u = IntMatrix::identity(rows);
    let mut v = IntMatrix::identity(cols);

    for t in 0..rows.min(cols) {
        loop {
            // smallest non-zero entry of the trailing block becomes the pivot
            let mut best: Option<(usize, usize)> = None;
            for i in t..rows {
                for j in t..cols {
                    if a[(i, j)].is_zero() {
                        continue;
                    }
                    if best.is_none_or(|(bi, bj)| a[(i, j)].abs() < a[(bi, bj)].abs()) {
                        best = Some((i, j));
                    }
                }
            }
            let Some((pi, pj)) = best else {
                return finish(a, u, v);
            };
            a.swap_rows(t, pi);
            u.swap_rows(t, pi);
            a.swap_cols(t, pj);
            v.swap_cols(t, pj);

            let pivot = a[(t, t)].clone();
            let mut clean = true;
            for i in t + 1..rows {
                let q = -a[(i, t)].div_floor(&pivot);
                a.add_row_multiple(i, t, &q);
                u.add_row_multiple(i, t, &q);
                clean &= a[(i, t)].is_zero();
            }
            for j in t + 1..cols {
                let q = -a[(t, j)].div_floor(&pivot);
                a.add_col_multiple(j, t, &q);
                v.add_col_multiple(j, t, &q);
                clean &= a[(t, j)].is_zero();
            }
            if !clean {
                continue;
            }
            let offender = (t + 1..rows)
                .find(|&i| (t + 1..cols).any(|j| !a[(i, j)].is_multiple_of(&pivot)));
            match offender {
                Some(i) => {
                    a.add_row_multiple(t, i, &BigInt::one());
                    u.add_row_multiple(t, i, &BigInt::one());
                }
                None => break,
            }
        }
        if a[(t, t)].is_negative() {
            a.negate_row(t);
            u.negate_row(t);
        }
    }
    finish(a, u, v)
}

fn finish(d: IntMatrix, u: IntMatrix, v: IntMatrix) -> SmithDecomposition {
    SmithDecomposition {
        d,
        u: UnimodularMatrix::from_trusted(u),
        v: UnimodularMatrix::from_trusted(v),
    }
}

/// Row Hermite normal form of the row span of `m`, zero rows dropped.
///
/// Convention: lower-triangular echelon. The pivot of each row is its last
/// non-zero entry, pivot columns strictly increase down the rows, pivots are
/// positive, and entries below a pivot lie in `[0, pivot)`.
pub fn hnf(m: &IntMatrix) -> IntMatrix {
    let upper = upper_hnf(&m.reverse_cols());
    let k = upper.rows();
    let mut out = IntMatrix::zeros(k, m.cols());
    for i in 0..k {
        for j in 0..m.cols() {
            out[(k - 1 - i, m.cols() - 1 - j)] = upper[(i, j)].clone();
        }
    }
    out
}

/// Classic upper echelon HNF: pivot = first non-zero, entries above pivots reduced.
fn upper_hnf(m: &IntMatrix) -> IntMatrix {
    let (rows, cols) = (m.rows(), m.cols());
    let mut a = m.clone();
    let mut r = 0;
    for col in 0..cols {
        if r == rows {
            break;
        }
        loop {
            let best = (r..rows)
                .filter(|&i| !a[(i, col)].is_zero())
                .min_by(|&x, &y| a[(x, col)].abs().cmp(&a[(y, col)].abs()));
            let Some(p) = best else { break };
            a.swap_rows(r, p);
            let pivot = a[(r, col)].clone();
            let mut clean = true;
            for i in r + 1..rows {
                let q = -a[(i, col)].div_floor(&pivot);
                a.add_row_multiple(i, r, &q);
                clean &= a[(i, col)].is_zero();
            }
            if clean {
                break;
            }
        }
        if a[(r, col)].is_zero() {
            continue;
        }
        if a[(r, col)].is_negative() {
            a.negate_row(r);
        }
        let pivot = a[(r, col)].clone();
        for i in 0..r {
            let q = -a[(i, col)].div_floor(&pivot);
            a.add_row_multiple(i, r, &q);
        }
        r += 1;
    }
    let kept: Vec<Vec<BigInt>> = (0..r).map(|i| a.row(i).to_vec()).collect();
    IntMatrix::from_rows(cols, &kept).expect("rows have matching width")
}

fn rows_matrix(rows: &[Vec<BigInt>], n: usize) -> Result<IntMatrix, LatticeError> {
    if rows.len() > n {
        return Err(LatticeError::TooManyRows {
            rows: rows.len(),
            dim: n,
        });
    }
    IntMatrix::from_rows(n, rows)
}

/// Whether the given vectors of `Z^n` are part of some basis of `Z^n`.
///
/// Equivalent to every Smith invariant factor of the row matrix being 1.
pub fn extends_to_basis(rows: &[Vec<BigInt>], n: usize) -> Result<bool, LatticeError> {
    let m = rows_matrix(rows, n)?;
    if m.rows() == 0 {
        return Ok(true);
    }
    Ok(snf(&m).invariant_factors().iter().all(|d| d.is_one()))
}

/// Completes `rows` to a unimodular `n x n` matrix whose leading rows are `rows`.
pub fn complete_to_basis(rows: &[Vec<BigInt>], n: usize) -> Result<UnimodularMatrix, LatticeError> {
    let m = rows_matrix(rows, n)?;
    let k = m.rows();
    if k == 0 {
        return Ok(UnimodularMatrix::identity(n));
    }
    let dec = snf(&m);
    if !dec.invariant_factors().iter().all(|d| d.is_one()) {
        return Err(LatticeError::NotCompletable);
    }
    // m = u^-1 [I_k | 0] v^-1, so m is u^-1 times the first k rows of v^-1.
    let u_inv = dec.u.inverse();
    let v_inv = dec.v.inverse();
    let head: Vec<Vec<BigInt>> = (0..k).map(|i| v_inv.matrix().row(i).to_vec()).collect();
    let head = u_inv.matrix() * &IntMatrix::from_rows(n, &head)?;
    debug_assert_eq!(head, m);
    let mut all = head.to_rows();
    all.extend((k..n).map(|i| v_inv.matrix().row(i).to_vec()));
    let out = IntMatrix::from_rows(n, &all)?;
    UnimodularMatrix::new(out)
}
