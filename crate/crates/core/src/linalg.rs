//! Exact integer and rational linear algebra for small matrices: Smith
//! normal form with unimodular transforms, saturated integral kernels, and
//! rational diagonalization of symmetric forms.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, Zero};

/// Dense row-major integer matrix. Entries stay well inside `i128` for every
/// input in this crate (rank ≤ 4, entries bounded by small multiples of t²).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IntMat {
    pub rows: usize,
    pub cols: usize,
    data: Vec<i128>,
}

impl IntMat {
    pub fn zero(rows: usize, cols: usize) -> Self {
        IntMat { rows, cols, data: vec![0; rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = IntMat::zero(n, n);
        for i in 0..n {
            m[(i, i)] = 1;
        }
        m
    }

    pub fn from_rows(rows: &[Vec<i128>]) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        assert!(rows.iter().all(|row| row.len() == c));
        IntMat {
            rows: r,
            cols: c,
            data: rows.iter().flatten().copied().collect(),
        }
    }

    pub fn column(&self, j: usize) -> Vec<i128> {
        (0..self.rows).map(|i| self[(i, j)]).collect()
    }

    pub fn transpose(&self) -> IntMat {
        let mut t = IntMat::zero(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t[(j, i)] = self[(i, j)];
            }
        }
        t
    }

    pub fn mul(&self, rhs: &IntMat) -> IntMat {
        assert_eq!(self.cols, rhs.rows);
        let mut out = IntMat::zero(self.rows, rhs.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self[(i, k)];
                if a == 0 {
                    continue;
                }
                for j in 0..rhs.cols {
                    out[(i, j)] += a * rhs[(k, j)];
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &[i128]) -> Vec<i128> {
        assert_eq!(self.cols, v.len());
        (0..self.rows)
            .map(|i| (0..self.cols).map(|j| self[(i, j)] * v[j]).sum())
            .collect()
    }

    pub fn det(&self) -> i128 {
        assert_eq!(self.rows, self.cols);
        // fraction-free Gaussian elimination (Bareiss)
        let n = self.rows;
        if n == 0 {
            return 1;
        }
        let mut a = self.clone();
        let mut sign = 1i128;
        let mut prev = 1i128;
        for k in 0..n {
            if a[(k, k)] == 0 {
                let Some(p) = (k + 1..n).find(|&i| a[(i, k)] != 0) else {
                    return 0;
                };
                for j in 0..n {
                    let tmp = a[(k, j)];
                    a[(k, j)] = a[(p, j)];
                    a[(p, j)] = tmp;
                }
                sign = -sign;
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    a[(i, j)] = (a[(i, j)] * a[(k, k)] - a[(i, k)] * a[(k, j)]) / prev;
                }
                a[(i, k)] = 0;
            }
            prev = a[(k, k)];
        }
        sign * a[(n - 1, n - 1)]
    }
}

impl std::ops::Index<(usize, usize)> for IntMat {
    type Output = i128;
    fn index(&self, (i, j): (usize, usize)) -> &i128 {
        &self.data[i * self.cols + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for IntMat {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut i128 {
        &mut self.data[i * self.cols + j]
    }
}

/// Smith normal form `d = u · a · v` with `u`, `v` unimodular and the
/// diagonal nonnegative, each entry dividing the next.
pub struct Smith {
    pub u: IntMat,
    pub d: IntMat,
    pub v: IntMat,
}

pub fn smith_normal_form(a: &IntMat) -> Smith {
    let mut d = a.clone();
    let mut u = IntMat::identity(a.rows);
    let mut v = IntMat::identity(a.cols);

    fn swap_rows(m: &mut IntMat, i: usize, j: usize) {
        for c in 0..m.cols {
            let t = m[(i, c)];
            m[(i, c)] = m[(j, c)];
            m[(j, c)] = t;
        }
    }
    fn swap_cols(m: &mut IntMat, i: usize, j: usize) {
        for r in 0..m.rows {
            let t = m[(r, i)];
            m[(r, i)] = m[(r, j)];
            m[(r, j)] = t;
        }
    }
    fn add_row(m: &mut IntMat, dst: usize, src: usize, c: i128) {
        for col in 0..m.cols {
            m[(dst, col)] += c * m[(src, col)];
        }
    }
    fn add_col(m: &mut IntMat, dst: usize, src: usize, c: i128) {
        for row in 0..m.rows {
            m[(row, dst)] += c * m[(row, src)];
        }
    }

    let n = a.rows.min(a.cols);
    for k in 0..n {
        loop {
            // move a minimal nonzero entry of the trailing block to (k,k)
            let mut pivot: Option<(usize, usize)> = None;
            for i in k..d.rows {
                for j in k..d.cols {
                    if d[(i, j)] != 0
                        && pivot.is_none_or(|(pi, pj)| d[(i, j)].abs() < d[(pi, pj)].abs())
                    {
                        pivot = Some((i, j));
                    }
                }
            }
            let Some((pi, pj)) = pivot else {
                break;
            };
            if pi != k {
                swap_rows(&mut d, pi, k);
                swap_rows(&mut u, pi, k);
            }
            if pj != k {
                swap_cols(&mut d, pj, k);
                swap_cols(&mut v, pj, k);
            }
            let mut dirty = false;
            for i in k + 1..d.rows {
                let q = d[(i, k)].div_euclid(d[(k, k)]);
                if q != 0 {
                    add_row(&mut d, i, k, -q);
                    add_row(&mut u, i, k, -q);
                }
                if d[(i, k)] != 0 {
                    dirty = true;
                }
            }
            for j in k + 1..d.cols {
                let q = d[(k, j)].div_euclid(d[(k, k)]);
                if q != 0 {
                    add_col(&mut d, j, k, -q);
                    add_col(&mut v, j, k, -q);
                }
                if d[(k, j)] != 0 {
                    dirty = true;
                }
            }
            if dirty {
                continue;
            }
            // divisibility pass: fold in any trailing entry the pivot misses
            let mut fixed = true;
            'scan: for i in k + 1..d.rows {
                for j in k + 1..d.cols {
                    if d[(i, j)] % d[(k, k)] != 0 {
                        add_row(&mut d, k, i, 1);
                        add_row(&mut u, k, i, 1);
                        fixed = false;
                        break 'scan;
                    }
                }
            }
            if fixed {
                break;
            }
        }
        if d[(k, k)] < 0 {
            for c in 0..d.cols {
                d[(k, c)] = -d[(k, c)];
            }
            for c in 0..u.cols {
                u[(k, c)] = -u[(k, c)];
            }
        }
    }
    Smith { u, d, v }
}

/// Basis of the saturated kernel lattice `{x ∈ Z^cols : a·x = 0}`, as the
/// columns of `v` matching zero diagonal entries of the Smith form.
pub fn integral_kernel(a: &IntMat) -> Vec<Vec<i128>> {
    let Smith { d, v, .. } = smith_normal_form(a);
    let n = a.cols;
    (0..n)
        .filter(|&j| j >= a.rows.min(n) || d[(j, j)] == 0)
        .map(|j| v.column(j))
        .collect()
}

/// Solve `a·x = b` over the integers, if a solution exists.
pub fn solve_integer(a: &IntMat, b: &[i128]) -> Option<Vec<i128>> {
    let Smith { u, d, v } = smith_normal_form(a);
    let ub = u.mul_vec(b);
    let mut y = vec![0i128; a.cols];
    for i in 0..a.rows {
        let di = if i < a.cols { d[(i, i)] } else { 0 };
        if di == 0 {
            if ub[i] != 0 {
                return None;
            }
        } else {
            if ub[i] % di != 0 {
                return None;
            }
            y[i] = ub[i] / di;
        }
    }
    Some(v.mul_vec(&y))
}

/// Extend a primitive integer vector to the first column of a unimodular
/// matrix.
pub fn complete_to_unimodular(a: &[i128]) -> IntMat {
    let col = IntMat::from_rows(&[a.to_vec()]).transpose();
    let Smith { u, d, v } = smith_normal_form(&col);
    assert_eq!(d[(0, 0)].abs(), 1, "vector must be primitive");
    // a = u^{-1} d v^{-1}; with d = e1 (v = ±1) the first column of
    // u^{-1}·v^{-1} is a.
    let mut w = invert_unimodular(&u);
    if v[(0, 0)] < 0 {
        for i in 0..w.rows {
            w[(i, 0)] = -w[(i, 0)];
        }
    }
    debug_assert_eq!(w.column(0), a.to_vec());
    w
}

/// Inverse of a unimodular integer matrix (det ±1), exactly.
pub fn invert_unimodular(m: &IntMat) -> IntMat {
    let n = m.rows;
    assert_eq!(m.cols, n);
    let det = m.det();
    assert!(det == 1 || det == -1, "matrix is not unimodular");
    let mut adj = IntMat::zero(n, n);
    for i in 0..n {
        for j in 0..n {
            // cofactor expansion; n ≤ 4 so the minors are cheap
            let mut minor = IntMat::zero(n - 1, n - 1);
            let mut mi = 0;
            for r in 0..n {
                if r == i {
                    continue;
                }
                let mut mj = 0;
                for c in 0..n {
                    if c == j {
                        continue;
                    }
                    minor[(mi, mj)] = m[(r, c)];
                    mj += 1;
                }
                mi += 1;
            }
            let sign = if (i + j) % 2 == 0 { 1 } else { -1 };
            adj[(j, i)] = sign * minor.det() * det; // det ∈ {±1}: divide == multiply
        }
    }
    debug_assert_eq!(m.mul(&adj), IntMat::identity(n));
    adj
}

/// Signature `(positive, negative)` of a nondegenerate symmetric integer
/// matrix via exact rational congruence diagonalization.
pub fn signature(g: &IntMat) -> (usize, usize) {
    let n = g.rows;
    assert_eq!(g.cols, n);
    let mut a: Vec<Vec<BigRational>> = (0..n)
        .map(|i| (0..n).map(|j| BigRational::from(BigInt::from(g[(i, j)]))).collect())
        .collect();
    let mut pos = 0;
    let mut neg = 0;
    let mut rows: Vec<usize> = (0..n).collect();
    while !rows.is_empty() {
        // ensure a nonzero diagonal entry among the remaining rows
        if let Some(pos_idx) = rows.iter().position(|&i| !a[i][i].is_zero()) {
            let i = rows[pos_idx];
            rows.swap(0, pos_idx);
            let pivot = a[i][i].clone();
            if pivot.is_positive() {
                pos += 1;
            } else {
                neg += 1;
            }
            let others: Vec<usize> = rows[1..].to_vec();
            for &r in &others {
                let factor = &a[r][i] / &pivot;
                if factor.is_zero() {
                    continue;
                }
                for &c in &others {
                    let sub = &factor * &a[i][c];
                    a[r][c] = &a[r][c] - &sub;
                }
                a[r][i] = BigRational::zero();
                a[i][r] = BigRational::zero();
            }
            rows.remove(0);
        } else {
            // all remaining diagonal entries vanish; find an off-diagonal
            // pairing and fold it onto the diagonal
            let mut found = None;
            'outer: for (x, &i) in rows.iter().enumerate() {
                for &j in rows.iter().skip(x + 1) {
                    if !a[i][j].is_zero() {
                        found = Some((i, j));
                        break 'outer;
                    }
                }
            }
            let (i, j) = found.expect("degenerate symmetric matrix has no signature");
            // row/col operation: e_i ← e_i + e_j makes a[i][i] = 2·a[i][j] ≠ 0
            for c in 0..n {
                let add = a[j][c].clone();
                a[i][c] = &a[i][c] + &add;
            }
            for r in 0..n {
                let add = a[r][j].clone();
                a[r][i] = &a[r][i] + &add;
            }
        }
    }
    (pos, neg)
}
