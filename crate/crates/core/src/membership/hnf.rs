//! Linear Diophantine solving via column Hermite reduction.
//!
//! `solve_integer` finds some z with A z = b over the integers, or reports
//! that b is not in the column lattice of A. Columns are reduced row by row
//! with Euclidean combinations while a unimodular transform is accumulated,
//! so solutions pull back exactly. `solve_rational` is the corresponding
//! exact Gaussian elimination over Q (free variables pinned to zero), used
//! both for the diagnostic Q-mode and as a pre-check.

use num::bigint::BigInt;
use num::rational::BigRational;
use num::{Integer, Signed, Zero};

/// Solve A z = b over Z. `a` is row-major, m x n; `b` has length m.
pub fn solve_integer(a: &[Vec<BigInt>], b: &[BigInt]) -> Option<Vec<BigInt>> {
    let m = a.len();
    let n = if m == 0 { 0 } else { a[0].len() };
    if n == 0 {
        return if b.iter().all(|x| x.is_zero()) { Some(Vec::new()) } else { None };
    }
    // Column-major working copy H and transform U with H = A * U.
    let mut h: Vec<Vec<BigInt>> = (0..n).map(|c| (0..m).map(|r| a[r][c].clone()).collect()).collect();
    let mut u: Vec<Vec<BigInt>> = (0..n)
        .map(|c| (0..n).map(|k| if k == c { BigInt::from(1) } else { BigInt::zero() }).collect())
        .collect();

    let mut piv = 0usize;
    let mut pivots: Vec<(usize, usize)> = Vec::new(); // (row, col)
    for r in 0..m {
        if piv == n {
            break;
        }
        // Euclidean-reduce the active columns until at most one has a
        // nonzero entry in row r.
        loop {
            let mut active: Vec<usize> = (piv..n).filter(|&c| !h[c][r].is_zero()).collect();
            if active.len() <= 1 {
                if let Some(&c) = active.first() {
                    h.swap(piv, c);
                    u.swap(piv, c);
                    if h[piv][r].is_negative() {
                        for x in h[piv].iter_mut() {
                            *x = -std::mem::take(x);
                        }
                        for x in u[piv].iter_mut() {
                            *x = -std::mem::take(x);
                        }
                    }
                    pivots.push((r, piv));
                    piv += 1;
                }
                break;
            }
            active.sort_by_key(|&c| h[c][r].abs());
            let cmin = active[0];
            for &c in &active[1..] {
                let t = &h[c][r] / &h[cmin][r];
                if t.is_zero() {
                    continue;
                }
                for row in 0..m {
                    let sub = &t * &h[cmin][row];
                    h[c][row] -= sub;
                }
                for k in 0..n {
                    let sub = &t * &u[cmin][k];
                    u[c][k] -= sub;
                }
            }
        }
    }

    // Forward-solve H y = b using the pivot structure.
    let mut y = vec![BigInt::zero(); n];
    let mut pivot_of_row: Vec<Option<usize>> = vec![None; m];
    for &(r, c) in &pivots {
        pivot_of_row[r] = Some(c);
    }
    for r in 0..m {
        let mut acc = BigInt::zero();
        for &(pr, pc) in &pivots {
            if pr < r {
                acc += &h[pc][r] * &y[pc];
            }
        }
        match pivot_of_row[r] {
            Some(c) => {
                let num = &b[r] - &acc;
                let (q, rem) = num.div_rem(&h[c][r]);
                if !rem.is_zero() {
                    return None;
                }
                y[c] = q;
            }
            None => {
                if acc != b[r] {
                    return None;
                }
            }
        }
    }

    // Pull back: z = U y.
    let mut z = vec![BigInt::zero(); n];
    for c in 0..n {
        if y[c].is_zero() {
            continue;
        }
        for (k, zk) in z.iter_mut().enumerate() {
            *zk += &u[c][k] * &y[c];
        }
    }
    // Defensive re-check.
    for r in 0..m {
        let mut acc = BigInt::zero();
        for c in 0..n {
            acc += &a[r][c] * &z[c];
        }
        if acc != b[r] {
            return None;
        }
    }
    Some(z)
}

/// Solve A z = b over Q with free variables set to zero.
pub fn solve_rational(a: &[Vec<BigRational>], b: &[BigRational]) -> Option<Vec<BigRational>> {
    let m = a.len();
    let n = if m == 0 { 0 } else { a[0].len() };
    let mut rows: Vec<Vec<BigRational>> = (0..m)
        .map(|r| {
            let mut row = a[r].clone();
            row.push(b[r].clone());
            row
        })
        .collect();
    let mut pivot_cols: Vec<usize> = Vec::new();
    let mut rank = 0usize;
    for col in 0..n {
        let Some(pr) = (rank..m).find(|&r| !rows[r][col].is_zero()) else {
            continue;
        };
        rows.swap(rank, pr);
        let inv = rows[rank][col].recip();
        for x in rows[rank].iter_mut() {
            *x = &*x * &inv;
        }
        for r in 0..m {
            if r != rank && !rows[r][col].is_zero() {
                let factor = rows[r][col].clone();
                for c in col..=n {
                    let sub = &factor * &rows[rank][c];
                    rows[r][c] = &rows[r][c] - &sub;
                }
            }
        }
        pivot_cols.push(col);
        rank += 1;
        if rank == m {
            break;
        }
    }
    // Inconsistent if a zero row has nonzero rhs.
    for r in rank..m {
        if !rows[r][n].is_zero() {
            return None;
        }
    }
    let mut z = vec![BigRational::zero(); n];
    for (i, &col) in pivot_cols.iter().enumerate() {
        z[col] = rows[i][n].clone();
    }
    Some(z)
}
