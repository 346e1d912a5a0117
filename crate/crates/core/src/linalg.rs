//! Dense exact linear algebra: Smith normal form over ℤ with unimodular
//! transforms, and rational row reduction.

use num::{BigInt, Integer, One, Signed, Zero};

use crate::rmodz::Q;

/// Dense integer matrix stored by rows, with explicit shape so that empty
/// matrices keep their dimensions.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IntMatrix {
    pub rows: usize,
    pub cols: usize,
    pub data: Vec<Vec<BigInt>>,
}

impl IntMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        IntMatrix { rows, cols, data: vec![vec![BigInt::zero(); cols]; rows] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.data[i][i] = BigInt::one();
        }
        m
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.data[j][i] = self.data[i][j].clone();
            }
        }
        t
    }

    pub fn mul_vec(&self, v: &[BigInt]) -> Vec<BigInt> {
        assert_eq!(v.len(), self.cols);
        self.data
            .iter()
            .map(|row| row.iter().zip(v).fold(BigInt::zero(), |a, (x, y)| a + x * y))
            .collect()
    }

    pub fn mul_qvec(&self, v: &[Q]) -> Vec<Q> {
        assert_eq!(v.len(), self.cols);
        self.data
            .iter()
            .map(|row| {
                row.iter().zip(v).fold(Q::zero(), |a, (x, y)| {
                    if x.is_zero() {
                        a
                    } else {
                        a + Q::from_integer(x.clone()) * y
                    }
                })
            })
            .collect()
    }

    pub fn mul(&self, o: &IntMatrix) -> IntMatrix {
        assert_eq!(self.cols, o.rows);
        let mut out = Self::zeros(self.rows, o.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = &self.data[i][k];
                if a.is_zero() {
                    continue;
                }
                for j in 0..o.cols {
                    let b = &o.data[k][j];
                    if !b.is_zero() {
                        out.data[i][j] += a * b;
                    }
                }
            }
        }
        out
    }

    pub fn column(&self, j: usize) -> Vec<BigInt> {
        self.data.iter().map(|r| r[j].clone()).collect()
    }

    /// Submatrix of rows `from..`.
    pub fn rows_from(&self, from: usize) -> IntMatrix {
        IntMatrix {
            rows: self.rows - from,
            cols: self.cols,
            data: self.data[from..].to_vec(),
        }
    }
}

/// `P A Q = D` with `P`, `Q` unimodular and `D` diagonal, `d_i | d_{i+1}`.
#[derive(Clone, Debug)]
pub struct Snf {
    pub diag: Vec<BigInt>,
    pub rank: usize,
    pub p: IntMatrix,
    pub p_inv: IntMatrix,
    pub q: IntMatrix,
    pub q_inv: IntMatrix,
}

struct Work {
    a: Vec<Vec<BigInt>>,
    p: Vec<Vec<BigInt>>,
    p_inv: Vec<Vec<BigInt>>,
    q: Vec<Vec<BigInt>>,
    q_inv: Vec<Vec<BigInt>>,
}

impl Work {
    // row_i += c * row_j
    fn row_add(&mut self, i: usize, j: usize, c: &BigInt) {
        if c.is_zero() {
            return;
        }
        for m in [&mut self.a, &mut self.p] {
            let (ri, rj) = two_rows(m, i, j);
            for (x, y) in ri.iter_mut().zip(rj.iter()) {
                if !y.is_zero() {
                    *x += c * y;
                }
            }
        }
        // P^{-1} gets the inverse column operation: col_j -= c * col_i.
        for row in self.p_inv.iter_mut() {
            if !row[i].is_zero() {
                let t = c * &row[i];
                row[j] -= t;
            }
        }
    }

    // col_i += c * col_j
    fn col_add(&mut self, i: usize, j: usize, c: &BigInt) {
        if c.is_zero() {
            return;
        }
        for m in [&mut self.a, &mut self.q] {
            for row in m.iter_mut() {
                if !row[j].is_zero() {
                    let t = c * &row[j];
                    row[i] += t;
                }
            }
        }
        // Q^{-1} gets the inverse row operation: row_j -= c * row_i.
        let (rj, ri) = two_rows(&mut self.q_inv, j, i);
        for (x, y) in rj.iter_mut().zip(ri.iter()) {
            if !y.is_zero() {
                *x -= c * y;
            }
        }
    }

    fn row_swap(&mut self, i: usize, j: usize) {
        if i == j {
            return;
        }
        self.a.swap(i, j);
        self.p.swap(i, j);
        for row in self.p_inv.iter_mut() {
            row.swap(i, j);
        }
    }

    fn col_swap(&mut self, i: usize, j: usize) {
        if i == j {
            return;
        }
        for m in [&mut self.a, &mut self.q] {
            for row in m.iter_mut() {
                row.swap(i, j);
            }
        }
        self.q_inv.swap(i, j);
    }

    fn row_neg(&mut self, i: usize) {
        for x in self.a[i].iter_mut().chain(self.p[i].iter_mut()) {
            *x = -&*x;
        }
        for row in self.p_inv.iter_mut() {
            row[i] = -&row[i];
        }
    }
}

fn two_rows(m: &mut [Vec<BigInt>], i: usize, j: usize) -> (&mut Vec<BigInt>, &Vec<BigInt>) {
    assert_ne!(i, j);
    if i < j {
        let (lo, hi) = m.split_at_mut(j);
        (&mut lo[i], &hi[0])
    } else {
        let (lo, hi) = m.split_at_mut(i);
        (&mut hi[0], &lo[j])
    }
}

pub fn smith(a: &IntMatrix) -> Snf {
    let (m, n) = (a.rows, a.cols);
    let mut w = Work {
        a: a.data.clone(),
        p: IntMatrix::identity(m).data,
        p_inv: IntMatrix::identity(m).data,
        q: IntMatrix::identity(n).data,
        q_inv: IntMatrix::identity(n).data,
    };
    let mut t = 0;
    while t < m.min(n) {
        // Pivot: an entry of least absolute value, taking a unit immediately.
        let mut best: Option<(usize, usize)> = None;
        'scan: for i in t..m {
            for j in t..n {
                let x = &w.a[i][j];
                if x.is_zero() {
                    continue;
                }
                if best.map_or(true, |(bi, bj)| x.abs() < w.a[bi][bj].abs()) {
                    best = Some((i, j));
                    if x.abs().is_one() {
                        break 'scan;
                    }
                }
            }
        }
        let Some((bi, bj)) = best else { break };
        w.row_swap(t, bi);
        w.col_swap(t, bj);
        loop {
            let mut dirty = false;
            for i in t + 1..m {
                if w.a[i][t].is_zero() {
                    continue;
                }
                let (qt, r) = w.a[i][t].div_mod_floor(&w.a[t][t]);
                w.row_add(i, t, &-qt);
                if !r.is_zero() {
                    w.row_swap(t, i);
                    dirty = true;
                }
            }
            for j in t + 1..n {
                if w.a[t][j].is_zero() {
                    continue;
                }
                let (qt, r) = w.a[t][j].div_mod_floor(&w.a[t][t]);
                w.col_add(j, t, &-qt);
                if !r.is_zero() {
                    w.col_swap(t, j);
                    dirty = true;
                }
            }
            if dirty {
                continue;
            }
            // Divisibility: fold any offending row into row t.
            let piv = w.a[t][t].clone();
            let bad = (t + 1..m).find(|&i| (t + 1..n).any(|j| !w.a[i][j].is_multiple_of(&piv)));
            match bad {
                Some(i) => {
                    w.row_add(t, i, &BigInt::one());
                }
                None => break,
            }
        }
        if w.a[t][t].is_negative() {
            w.row_neg(t);
        }
        t += 1;
    }
    let diag: Vec<BigInt> = (0..m.min(n)).map(|i| w.a[i][i].clone()).collect();
    let rank = diag.iter().filter(|d| !d.is_zero()).count();
    Snf {
        diag,
        rank,
        p: IntMatrix { rows: m, cols: m, data: w.p },
        p_inv: IntMatrix { rows: m, cols: m, data: w.p_inv },
        q: IntMatrix { rows: n, cols: n, data: w.q },
        q_inv: IntMatrix { rows: n, cols: n, data: w.q_inv },
    }
}

/// Reduced row echelon form over ℚ of an augmented system; returns a
/// particular solution of `A x = b` or `None` when inconsistent. Free
/// variables are set to zero.
pub fn solve_rational(a: &[Vec<Q>], cols: usize, b: &[Q]) -> Option<Vec<Q>> {
    let rows = a.len();
    let mut m: Vec<Vec<Q>> = a
        .iter()
        .zip(b)
        .map(|(r, x)| {
            let mut r = r.clone();
            r.push(x.clone());
            r
        })
        .collect();
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(pr) = (r..rows).find(|&i| !m[i][c].is_zero()) else { continue };
        m.swap(r, pr);
        let inv = Q::one() / &m[r][c];
        for x in m[r].iter_mut() {
            *x *= &inv;
        }
        let pivot_row = m[r].clone();
        for (i, row) in m.iter_mut().enumerate() {
            if i == r || row[c].is_zero() {
                continue;
            }
            let f = row[c].clone();
            for (x, y) in row.iter_mut().zip(&pivot_row) {
                if !y.is_zero() {
                    *x -= &f * y;
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    if m[r..].iter().any(|row| !row[cols].is_zero()) {
        return None;
    }
    let mut x = vec![Q::zero(); cols];
    for (i, &c) in pivots.iter().enumerate() {
        x[c] = m[i][cols].clone();
    }
    Some(x)
}

/// A rational `r` with `c − A r` integral, where `snf` is the Smith form of
/// `A`; `None` when no such `r` exists.
pub fn integral_lift(snf: &Snf, c: &[Q]) -> Option<Vec<Q>> {
    let w = snf.p.mul_qvec(c);
    if w[snf.rank..].iter().any(|x| !x.is_integer()) {
        return None;
    }
    let mut y = vec![Q::zero(); snf.q.rows];
    for i in 0..snf.rank {
        let frac = &w[i] - w[i].floor();
        y[i] = frac / Q::from_integer(snf.diag[i].clone());
    }
    Some(snf.q.mul_qvec(&y))
}
