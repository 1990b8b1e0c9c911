//! Smith normal form over ℤ.
//!
//! Elimination always pivots on the entry of least absolute value. The fast
//! path runs in `i64` with checked arithmetic; on overflow the computation is
//! restarted in `BigInt`.

use num::traits::{CheckedAdd, CheckedMul, CheckedSub};
use num::{BigInt, Integer, Signed, ToPrimitive};

/// Dense integer matrix, row-major.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IntMatrix {
    rows: usize,
    cols: usize,
    data: Vec<i64>,
}

impl IntMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            data: vec![0; rows * cols],
        }
    }

    pub fn from_rows(rows: &[Vec<i64>]) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        assert!(rows.iter().all(|row| row.len() == c), "ragged matrix");
        Self {
            rows: r,
            cols: c,
            data: rows.iter().flatten().copied().collect(),
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, 1);
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> i64 {
        self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: i64) {
        self.data[i * self.cols + j] = v;
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|&v| v == 0)
    }

    pub fn to_rows(&self) -> Vec<Vec<i64>> {
        self.data.chunks(self.cols.max(1)).take(self.rows).map(<[i64]>::to_vec).collect()
    }

    /// Matrix product; `None` on shape mismatch or overflow.
    pub fn checked_mul(&self, other: &IntMatrix) -> Option<IntMatrix> {
        if self.cols != other.rows {
            return None;
        }
        let mut out = IntMatrix::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a == 0 {
                    continue;
                }
                for j in 0..other.cols {
                    let v = out.get(i, j).checked_add(a.checked_mul(other.get(k, j))?)?;
                    out.set(i, j, v);
                }
            }
        }
        Some(out)
    }
}

/// Nonzero invariant factors `d_1 | d_2 | …` of `m` (all positive).
pub fn smith_normal_form(m: &IntMatrix) -> Vec<u64> {
    let rows: Vec<Vec<i64>> = m.to_rows();
    if let Some(d) = diagonalise(rows.clone()) {
        return d.into_iter().map(|v| v.unsigned_abs()).collect();
    }
    let big: Vec<Vec<BigInt>> = rows
        .into_iter()
        .map(|r| r.into_iter().map(BigInt::from).collect())
        .collect();
    diagonalise(big)
        .expect("bigint arithmetic does not overflow")
        .into_iter()
        .map(|v| v.abs().to_u64().expect("invariant factor exceeds u64"))
        .collect()
}

trait Ring: Clone + Integer + Signed + CheckedAdd + CheckedSub + CheckedMul {}
impl<T: Clone + Integer + Signed + CheckedAdd + CheckedSub + CheckedMul> Ring for T {}

/// `row_dst -= q * row_src` restricted to columns `from..`.
fn row_axpy<T: Ring>(a: &mut [Vec<T>], dst: usize, src: usize, q: &T, from: usize) -> Option<()> {
    for c in from..a[dst].len() {
        if a[src][c].is_zero() {
            continue;
        }
        let v = a[dst][c].checked_sub(&q.checked_mul(&a[src][c])?)?;
        a[dst][c] = v;
    }
    Some(())
}

fn col_axpy<T: Ring>(a: &mut [Vec<T>], dst: usize, src: usize, q: &T, from: usize) -> Option<()> {
    for row in a.iter_mut().skip(from) {
        if row[src].is_zero() {
            continue;
        }
        let v = row[dst].checked_sub(&q.checked_mul(&row[src])?)?;
        row[dst] = v;
    }
    Some(())
}

fn diagonalise<T: Ring>(mut a: Vec<Vec<T>>) -> Option<Vec<T>> {
    let rows = a.len();
    let cols = a.first().map_or(0, Vec::len);
    let mut diag = Vec::new();
    for t in 0..rows.min(cols) {
        // least nonzero |entry| in the trailing block
        let mut best: Option<(usize, usize)> = None;
        for (i, row) in a.iter().enumerate().skip(t) {
            for (j, v) in row.iter().enumerate().skip(t) {
                if !v.is_zero() && best.map_or(true, |(bi, bj)| v.abs() < a[bi][bj].abs()) {
                    best = Some((i, j));
                }
            }
        }
        let Some((pi, pj)) = best else { break };
        a.swap(t, pi);
        for row in a.iter_mut() {
            row.swap(t, pj);
        }
        loop {
            let mut dirty = false;
            for i in t + 1..rows {
                if a[i][t].is_zero() {
                    continue;
                }
                let q = a[i][t].div_floor(&a[t][t]);
                row_axpy(&mut a, i, t, &q, t)?;
                if !a[i][t].is_zero() {
                    dirty = true;
                }
            }
            for j in t + 1..cols {
                if a[t][j].is_zero() {
                    continue;
                }
                let q = a[t][j].div_floor(&a[t][t]);
                col_axpy(&mut a, j, t, &q, t)?;
                if !a[t][j].is_zero() {
                    dirty = true;
                }
            }
            if dirty {
                // a smaller remainder appeared in row/column t: move it to the pivot
                let mut best = (t, t);
                for i in t..rows {
                    if !a[i][t].is_zero() && a[i][t].abs() < a[best.0][best.1].abs() {
                        best = (i, t);
                    }
                }
                for j in t..cols {
                    if !a[t][j].is_zero() && a[t][j].abs() < a[best.0][best.1].abs() {
                        best = (t, j);
                    }
                }
                a.swap(t, best.0);
                for row in a.iter_mut() {
                    row.swap(t, best.1);
                }
                continue;
            }
            // divisibility: the pivot must divide the whole trailing block
            let offending = (t + 1..rows).find(|&i| {
                a[i][t + 1..].iter().any(|v| !v.is_zero() && !v.is_multiple_of(&a[t][t]))
            });
            match offending {
                Some(i) => {
                    let one = T::one();
                    // row_t += row_i, then continue reducing
                    row_axpy(&mut a, t, i, &-one, t)?;
                }
                None => break,
            }
        }
        diag.push(a[t][t].abs());
    }
    Some(diag)
}
