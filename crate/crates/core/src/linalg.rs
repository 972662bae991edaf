//! Exact Gauss-Jordan elimination over `ℚ(ω)`.

use crate::qfield::{Field, FieldVal, QuadInt};

/// Kernel of an integral matrix, as a basis over the fraction field.
#[derive(Clone, Debug)]
pub struct Kernel {
    pub rank: usize,
    pub unknowns: usize,
    pub basis: Vec<Vec<FieldVal>>,
}

impl Kernel {
    pub fn dimension(&self) -> usize {
        self.basis.len()
    }
}

/// Computes the right kernel of `rows` (each of length `ncols`).
///
/// Gauss-Jordan elimination in reduced field fractions. The pivot is the entry
/// of largest float magnitude in its column. Fraction-free elimination in the
/// ring lets unit powers of the coefficients grow without bound, and no
/// rational content removal can see them; reduced fractions stay small because
/// every intermediate is an entry of a reduced echelon form.
pub fn kernel(field: Field, rows: Vec<Vec<QuadInt>>, ncols: usize) -> Kernel {
    let mut rows: Vec<Vec<FieldVal>> = rows
        .into_iter()
        .map(|row| {
            debug_assert_eq!(row.len(), ncols);
            row.into_iter().map(FieldVal::from).collect()
        })
        .collect();
    let mut pivots: Vec<(usize, usize)> = Vec::new(); // (row, col)
    let mut r = 0;
    for c in 0..ncols {
        if r == rows.len() {
            break;
        }
        let best = (r..rows.len())
            .filter(|&k| !rows[k][c].is_zero())
            .max_by(|&x, &y| {
                rows[x][c]
                    .embed()
                    .abs()
                    .total_cmp(&rows[y][c].embed().abs())
            });
        let Some(p) = best else { continue };
        rows.swap(r, p);
        let inv = rows[r][c].inverse().expect("pivot is nonzero");
        for x in rows[r].iter_mut() {
            if !x.is_zero() {
                *x = &*x * &inv;
            }
        }
        let pivot_row = rows[r].clone();
        for (k, row) in rows.iter_mut().enumerate() {
            if k == r || row[c].is_zero() {
                continue;
            }
            let f = row[c].clone();
            for (x, y) in row.iter_mut().zip(&pivot_row) {
                if !y.is_zero() {
                    *x = &*x - &(&f * y);
                }
            }
        }
        pivots.push((r, c));
        r += 1;
    }
    let pivot_cols: Vec<usize> = pivots.iter().map(|&(_, c)| c).collect();
    let free: Vec<usize> = (0..ncols).filter(|c| !pivot_cols.contains(c)).collect();
    let basis = free
        .iter()
        .map(|&f| {
            let mut v = vec![FieldVal::zero(field); ncols];
            v[f] = FieldVal::one(field);
            for &(row, col) in &pivots {
                v[col] = -&rows[row][f];
            }
            v
        })
        .collect();
    Kernel {
        rank: pivots.len(),
        unknowns: ncols,
        basis,
    }
}
