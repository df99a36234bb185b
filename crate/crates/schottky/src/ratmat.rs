//! Exact integer linear algebra: fraction-free (Bareiss) elimination for
//! matrix ranks over the rationals.

use num::bigint::BigInt;
use num::traits::Zero;

/// Rank of an integer matrix by fraction-free Bareiss elimination with full
/// pivoting. Exact over the rationals (and hence over the reals).
pub fn bareiss_rank(mut m: Vec<Vec<BigInt>>) -> usize {
    let rows = m.len();
    if rows == 0 {
        return 0;
    }
    let cols = m[0].len();
    let mut prev_pivot = BigInt::from(1);
    let mut rank = 0;
    let mut row = 0;
    let mut col = 0;
    while row < rows && col < cols {
        // pick the smallest-magnitude nonzero pivot to limit entry growth
        let mut pivot: Option<(usize, usize)> = None;
        for r in row..rows {
            for c in col..cols {
                if !m[r][c].is_zero() {
                    let better = match &pivot {
                        None => true,
                        Some((pr, pc)) => m[r][c].magnitude() < m[*pr][*pc].magnitude(),
                    };
                    if better {
                        pivot = Some((r, c));
                    }
                }
            }
        }
        let Some((pr, pc)) = pivot else { break };
        m.swap(row, pr);
        if pc != col {
            for r in 0..rows {
                m[r].swap(col, pc);
            }
        }
        let piv = m[row][col].clone();
        for r in (row + 1)..rows {
            for c in (col + 1)..cols {
                let t = &piv * &m[r][c] - &m[r][col] * &m[row][c];
                m[r][c] = &t / &prev_pivot;
            }
            m[r][col] = BigInt::zero();
        }
        prev_pivot = piv;
        rank += 1;
        row += 1;
        col += 1;
    }
    rank
}

/// Rank of the column span of integer vectors via the Gram matrix
/// G = A^T A: over the reals ker(G) = ker(A), so rank(A) = rank(G), and G is
/// only k x k for k columns.
pub fn rank_via_gram(cols: &[Vec<BigInt>]) -> usize {
    let k = cols.len();
    if k == 0 {
        return 0;
    }
    let mut gram = vec![vec![BigInt::zero(); k]; k];
    for i in 0..k {
        for j in i..k {
            let mut dot = BigInt::zero();
            for (a, b) in cols[i].iter().zip(cols[j].iter()) {
                if !a.is_zero() && !b.is_zero() {
                    dot += a * b;
                }
            }
            gram[i][j] = dot.clone();
            gram[j][i] = dot;
        }
    }
    bareiss_rank(gram)
}
