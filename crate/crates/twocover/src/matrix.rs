//! Dense integer matrices over arbitrary-precision integers, with the exact
//! linear algebra the lattice pipeline needs: multiplication, fraction-free
//! determinants, rational inverses, and a deterministic Smith normal form.

use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

#[derive(Clone, PartialEq, Eq)]
pub struct IntMatrix {
    rows: usize,
    cols: usize,
    data: Vec<BigInt>,
}

impl fmt::Debug for IntMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.display())
    }
}

impl IntMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        IntMatrix {
            rows,
            cols,
            data: vec![BigInt::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, BigInt::one());
        }
        m
    }

    pub fn from_i64_rows(rows: &[Vec<i64>]) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, |x| x.len());
        let mut m = Self::zeros(r, c);
        for (i, row) in rows.iter().enumerate() {
            assert_eq!(row.len(), c, "ragged rows");
            for (j, v) in row.iter().enumerate() {
                m.set(i, j, BigInt::from(*v));
            }
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &BigInt {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: BigInt) {
        self.data[i * self.cols + j] = v;
    }

    pub fn transpose(&self) -> IntMatrix {
        let mut m = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                m.set(j, i, self.get(i, j).clone());
            }
        }
        m
    }

    pub fn mul(&self, other: &IntMatrix) -> IntMatrix {
        assert_eq!(self.cols, other.rows, "dimension mismatch");
        let mut m = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let v = m.get(i, j) + a * other.get(k, j);
                    m.set(i, j, v);
                }
            }
        }
        m
    }

    pub fn diagonal(&self) -> Vec<BigInt> {
        (0..self.rows.min(self.cols))
            .map(|i| self.get(i, i).clone())
            .collect()
    }

    pub fn is_symmetric(&self) -> bool {
        if self.rows != self.cols {
            return false;
        }
        for i in 0..self.rows {
            for j in (i + 1)..self.cols {
                if self.get(i, j) != self.get(j, i) {
                    return false;
                }
            }
        }
        true
    }

    /// Fraction-free Gaussian elimination; exact for integer matrices.
    /// The determinant of the empty matrix is one.
    pub fn det(&self) -> BigInt {
        assert_eq!(self.rows, self.cols, "determinant of a non-square matrix");
        let n = self.rows;
        if n == 0 {
            return BigInt::one();
        }
        let mut a = self.clone();
        let mut sign = BigInt::one();
        let mut prev = BigInt::one();
        for k in 0..n - 1 {
            if a.get(k, k).is_zero() {
                let Some(p) = ((k + 1)..n).find(|&i| !a.get(i, k).is_zero()) else {
                    return BigInt::zero();
                };
                for j in 0..n {
                    let x = a.get(k, j).clone();
                    let y = a.get(p, j).clone();
                    a.set(k, j, y);
                    a.set(p, j, x);
                }
                sign = -sign;
            }
            for i in (k + 1)..n {
                for j in (k + 1)..n {
                    let v = (a.get(i, j) * a.get(k, k) - a.get(i, k) * a.get(k, j)) / &prev;
                    a.set(i, j, v);
                }
                a.set(i, k, BigInt::zero());
            }
            prev = a.get(k, k).clone();
        }
        sign * a.get(n - 1, n - 1).clone()
    }

    /// True when symmetric with every leading principal minor positive.
    pub fn is_positive_definite(&self) -> bool {
        if !self.is_symmetric() {
            return false;
        }
        for k in 1..=self.rows {
            let mut sub = IntMatrix::zeros(k, k);
            for i in 0..k {
                for j in 0..k {
                    sub.set(i, j, self.get(i, j).clone());
                }
            }
            if sub.det() <= BigInt::zero() {
                return false;
            }
        }
        true
    }

    /// Exact inverse over the rationals; errors when singular.
    pub fn inverse_rational(&self) -> Result<RatMatrix> {
        assert_eq!(self.rows, self.cols);
        let n = self.rows;
        let mut a: Vec<Vec<BigRational>> = (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| BigRational::from_integer(self.get(i, j).clone()))
                    .collect()
            })
            .collect();
        let mut inv: Vec<Vec<BigRational>> = (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| {
                        if i == j {
                            BigRational::one()
                        } else {
                            BigRational::zero()
                        }
                    })
                    .collect()
            })
            .collect();
        for col in 0..n {
            let Some(p) = (col..n).find(|&i| !a[i][col].is_zero()) else {
                return Err(Error::InvalidInput("matrix is singular".into()));
            };
            a.swap(col, p);
            inv.swap(col, p);
            let pivot = a[col][col].clone();
            for j in 0..n {
                a[col][j] /= &pivot;
                inv[col][j] /= &pivot;
            }
            for i in 0..n {
                if i == col || a[i][col].is_zero() {
                    continue;
                }
                let f = a[i][col].clone();
                for j in 0..n {
                    let av = &a[col][j] * &f;
                    a[i][j] -= av;
                    let iv = &inv[col][j] * &f;
                    inv[i][j] -= iv;
                }
            }
        }
        Ok(RatMatrix { data: inv })
    }

    pub fn display(&self) -> String {
        let rows: Vec<String> = (0..self.rows)
            .map(|i| {
                let cells: Vec<String> = (0..self.cols).map(|j| self.get(i, j).to_string()).collect();
                format!("[{}]", cells.join(", "))
            })
            .collect();
        format!("[{}]", rows.join(", "))
    }
}

/// Rational matrix used for intermediate inverses.
#[derive(Clone, Debug)]
pub struct RatMatrix {
    data: Vec<Vec<BigRational>>,
}

impl RatMatrix {
    pub fn from_int(m: &IntMatrix) -> Self {
        RatMatrix {
            data: (0..m.rows())
                .map(|i| {
                    (0..m.cols())
                        .map(|j| BigRational::from_integer(m.get(i, j).clone()))
                        .collect()
                })
                .collect(),
        }
    }

    pub fn rows(&self) -> usize {
        self.data.len()
    }

    pub fn cols(&self) -> usize {
        self.data.first().map_or(0, |r| r.len())
    }

    pub fn mul(&self, other: &RatMatrix) -> RatMatrix {
        let (r, k, c) = (self.rows(), self.cols(), other.cols());
        assert_eq!(k, other.rows());
        let mut out = vec![vec![BigRational::zero(); c]; r];
        for i in 0..r {
            for t in 0..k {
                if self.data[i][t].is_zero() {
                    continue;
                }
                for j in 0..c {
                    let v = &self.data[i][t] * &other.data[t][j];
                    out[i][j] += v;
                }
            }
        }
        RatMatrix { data: out }
    }

    /// Integer form, erroring when any entry has a denominator.
    pub fn to_int(&self) -> Result<IntMatrix> {
        let mut m = IntMatrix::zeros(self.rows(), self.cols());
        for i in 0..self.rows() {
            for j in 0..self.cols() {
                let v = &self.data[i][j];
                if !v.is_integer() {
                    return Err(Error::DualActionNotIntegral);
                }
                m.set(i, j, v.to_integer());
            }
        }
        Ok(m)
    }
}

/// U * M * V = D with U, V unimodular and D diagonal with each entry
/// dividing the next.
#[derive(Clone, Debug)]
pub struct Snf {
    pub u: IntMatrix,
    pub d: IntMatrix,
    pub v: IntMatrix,
}

impl Snf {
    /// Diagonal entries, zeros dropped, ones kept.
    pub fn nonzero_diagonal(&self) -> Vec<BigInt> {
        self.d
            .diagonal()
            .into_iter()
            .filter(|x| !x.is_zero())
            .collect()
    }
}

/// Deterministic Smith normal form. Pivots are chosen as the smallest
/// nonzero entry in absolute value (first position on ties), which makes
/// identical inputs give identical transforms. The pivot is made to divide
/// every entry of the remaining submatrix before moving on, so the
/// divisibility chain holds by construction.
pub fn smith_normal_form(m: &IntMatrix) -> Snf {
    let rows = m.rows();
    let cols = m.cols();
    let mut a = m.clone();
    let mut u = IntMatrix::identity(rows);
    let mut v = IntMatrix::identity(cols);

    let mut t = 0usize;
    while t < rows.min(cols) {
        let Some((pi, pj)) = pivot_position(&a, t) else {
            break;
        };
        swap_rows(&mut a, &mut u, t, pi);
        swap_cols(&mut a, &mut v, t, pj);
        loop {
            let mut clean = true;
            for i in (t + 1)..rows {
                if !a.get(i, t).is_zero() {
                    let q = div_nearest(a.get(i, t), a.get(t, t));
                    row_sub(&mut a, &mut u, i, t, &q);
                    if !a.get(i, t).is_zero() {
                        clean = false;
                        // Remainder is strictly smaller; promote it to pivot.
                        swap_rows(&mut a, &mut u, t, i);
                    }
                }
            }
            for j in (t + 1)..cols {
                if !a.get(t, j).is_zero() {
                    let q = div_nearest(a.get(t, j), a.get(t, t));
                    col_sub(&mut a, &mut v, j, t, &q);
                    if !a.get(t, j).is_zero() {
                        clean = false;
                        swap_cols(&mut a, &mut v, t, j);
                    }
                }
            }
            if !clean {
                continue;
            }
            // Pivot must divide the rest of the submatrix.
            let mut offender = None;
            'scan: for i in (t + 1)..rows {
                for j in (t + 1)..cols {
                    if !(a.get(i, j) % a.get(t, t)).is_zero() {
                        offender = Some(i);
                        break 'scan;
                    }
                }
            }
            match offender {
                Some(i) => {
                    row_add(&mut a, &mut u, t, i);
                }
                None => break,
            }
        }
        if a.get(t, t).is_negative() {
            negate_row(&mut a, &mut u, t);
        }
        t += 1;
    }
    debug_assert_eq!(u.mul(m).mul(&v), a);
    Snf { u, d: a, v }
}

fn pivot_position(a: &IntMatrix, t: usize) -> Option<(usize, usize)> {
    let mut best: Option<(BigInt, usize, usize)> = None;
    for i in t..a.rows() {
        for j in t..a.cols() {
            let x = a.get(i, j);
            if x.is_zero() {
                continue;
            }
            let mag = x.abs();
            match &best {
                Some((m, _, _)) if *m <= mag => {}
                _ => best = Some((mag, i, j)),
            }
        }
    }
    best.map(|(_, i, j)| (i, j))
}

/// Quotient rounding toward the nearest integer keeps remainders at most
/// half the pivot, which speeds up the Euclidean descent. With floor
/// semantics the adjustment is q + 1 for either sign of b: it moves the
/// remainder r to r - b, which has smaller absolute value exactly when
/// 2|r| > |b|.
fn div_nearest(a: &BigInt, b: &BigInt) -> BigInt {
    let two = BigInt::from(2);
    let (q, r) = num_integer::Integer::div_mod_floor(a, b);
    if r.abs() * &two > b.abs() {
        q + 1
    } else {
        q
    }
}

fn swap_rows(a: &mut IntMatrix, u: &mut IntMatrix, i: usize, j: usize) {
    if i == j {
        return;
    }
    for c in 0..a.cols() {
        let x = a.get(i, c).clone();
        let y = a.get(j, c).clone();
        a.set(i, c, y);
        a.set(j, c, x);
    }
    for c in 0..u.cols() {
        let x = u.get(i, c).clone();
        let y = u.get(j, c).clone();
        u.set(i, c, y);
        u.set(j, c, x);
    }
}

fn swap_cols(a: &mut IntMatrix, v: &mut IntMatrix, i: usize, j: usize) {
    if i == j {
        return;
    }
    for r in 0..a.rows() {
        let x = a.get(r, i).clone();
        let y = a.get(r, j).clone();
        a.set(r, i, y);
        a.set(r, j, x);
    }
    for r in 0..v.rows() {
        let x = v.get(r, i).clone();
        let y = v.get(r, j).clone();
        v.set(r, i, y);
        v.set(r, j, x);
    }
}

/// row_i -= q * row_t.
fn row_sub(a: &mut IntMatrix, u: &mut IntMatrix, i: usize, t: usize, q: &BigInt) {
    if q.is_zero() {
        return;
    }
    for c in 0..a.cols() {
        let v = a.get(i, c) - q * a.get(t, c);
        a.set(i, c, v);
    }
    for c in 0..u.cols() {
        let v = u.get(i, c) - q * u.get(t, c);
        u.set(i, c, v);
    }
}

/// row_t += row_i.
fn row_add(a: &mut IntMatrix, u: &mut IntMatrix, t: usize, i: usize) {
    for c in 0..a.cols() {
        let v = a.get(t, c) + a.get(i, c);
        a.set(t, c, v);
    }
    for c in 0..u.cols() {
        let v = u.get(t, c) + u.get(i, c);
        u.set(t, c, v);
    }
}

/// col_j -= q * col_t.
fn col_sub(a: &mut IntMatrix, v: &mut IntMatrix, j: usize, t: usize, q: &BigInt) {
    if q.is_zero() {
        return;
    }
    for r in 0..a.rows() {
        let x = a.get(r, j) - q * a.get(r, t);
        a.set(r, j, x);
    }
    for r in 0..v.rows() {
        let x = v.get(r, j) - q * v.get(r, t);
        v.set(r, j, x);
    }
}

fn negate_row(a: &mut IntMatrix, u: &mut IntMatrix, i: usize) {
    for c in 0..a.cols() {
        let x = -a.get(i, c);
        a.set(i, c, x);
    }
    for c in 0..u.cols() {
        let x = -u.get(i, c);
        u.set(i, c, x);
    }
}
