//! Dense matrices over an exact field, row major.  Everything here is
//! elementary Gaussian elimination; dimensions in this crate stay small,
//! so clarity wins over asymptotics.

use num::traits::Num;

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Mat<T> {
    pub rows: usize,
    pub cols: usize,
    data: Vec<T>,
}

impl<T: Num + Clone> Mat<T> {
    pub fn new(rows: usize, cols: usize, data: Vec<T>) -> Self {
        assert_eq!(data.len(), rows * cols, "matrix data length mismatch");
        Mat { rows, cols, data }
    }

    pub fn zero(rows: usize, cols: usize) -> Self {
        Mat::new(rows, cols, vec![T::zero(); rows * cols])
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Mat::zero(n, n);
        for i in 0..n {
            m[(i, i)] = T::one();
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<T>>) -> Self {
        let r = rows.len();
        let c = if r == 0 { 0 } else { rows[0].len() };
        let mut data = Vec::with_capacity(r * c);
        for row in rows {
            assert_eq!(row.len(), c, "ragged rows");
            data.extend(row);
        }
        Mat::new(r, c, data)
    }

    pub fn from_cols(cols: Vec<Vec<T>>) -> Self {
        Mat::from_rows_of(&cols).transpose()
    }

    fn from_rows_of(rows: &[Vec<T>]) -> Self {
        Mat::from_rows(rows.to_vec())
    }

    pub fn from_fn(rows: usize, cols: usize, f: impl Fn(usize, usize) -> T) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Mat::new(rows, cols, data)
    }

    pub fn col(&self, j: usize) -> Vec<T> {
        (0..self.rows).map(|i| self[(i, j)].clone()).collect()
    }

    pub fn row(&self, i: usize) -> Vec<T> {
        self.data[i * self.cols..(i + 1) * self.cols].to_vec()
    }

    pub fn transpose(&self) -> Self {
        Mat::from_fn(self.cols, self.rows, |i, j| self[(j, i)].clone())
    }

    pub fn map<U: Num + Clone>(&self, f: impl Fn(&T) -> U) -> Mat<U> {
        Mat::new(self.rows, self.cols, self.data.iter().map(f).collect())
    }

    pub fn add(&self, other: &Self) -> Self {
        assert!(self.rows == other.rows && self.cols == other.cols);
        Mat::from_fn(self.rows, self.cols, |i, j| {
            self[(i, j)].clone() + other[(i, j)].clone()
        })
    }

    pub fn sub(&self, other: &Self) -> Self {
        assert!(self.rows == other.rows && self.cols == other.cols);
        Mat::from_fn(self.rows, self.cols, |i, j| {
            self[(i, j)].clone() - other[(i, j)].clone()
        })
    }

    pub fn neg(&self) -> Self {
        self.map(|x| T::zero() - x.clone())
    }

    pub fn scale(&self, c: &T) -> Self {
        self.map(|x| c.clone() * x.clone())
    }

    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(self.cols, other.rows, "matrix product shape mismatch");
        Mat::from_fn(self.rows, other.cols, |i, j| {
            let mut acc = T::zero();
            for k in 0..self.cols {
                acc = acc + self[(i, k)].clone() * other[(k, j)].clone();
            }
            acc
        })
    }

    pub fn mul_vec(&self, v: &[T]) -> Vec<T> {
        assert_eq!(self.cols, v.len());
        (0..self.rows)
            .map(|i| {
                let mut acc = T::zero();
                for k in 0..self.cols {
                    acc = acc + self[(i, k)].clone() * v[k].clone();
                }
                acc
            })
            .collect()
    }

    pub fn pow(&self, k: usize) -> Self {
        assert_eq!(self.rows, self.cols);
        let mut acc = Mat::identity(self.rows);
        for _ in 0..k {
            acc = acc.mul(self);
        }
        acc
    }

    /// Entries in row major order.
    pub fn flat(&self) -> &[T] {
        &self.data
    }

    pub fn bracket(&self, other: &Self) -> Self {
        self.mul(other).sub(&other.mul(self))
    }

    pub fn hstack(&self, other: &Self) -> Self {
        assert_eq!(self.rows, other.rows);
        Mat::from_fn(self.rows, self.cols + other.cols, |i, j| {
            if j < self.cols {
                self[(i, j)].clone()
            } else {
                other[(i, j - self.cols)].clone()
            }
        })
    }

    pub fn vstack(&self, other: &Self) -> Self {
        assert_eq!(self.cols, other.cols);
        Mat::from_fn(self.rows + other.rows, self.cols, |i, j| {
            if i < self.rows {
                self[(i, j)].clone()
            } else {
                other[(i - self.rows, j)].clone()
            }
        })
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|x| *x == T::zero())
    }

    pub fn take_cols(&self, idx: &[usize]) -> Self {
        Mat::from_fn(self.rows, idx.len(), |i, j| self[(i, idx[j])].clone())
    }

    /// Nilpotency index: least m with A^m = 0, or None if A^rows != 0.
    pub fn nilpotency_index(&self) -> Option<usize> {
        assert_eq!(self.rows, self.cols);
        let mut p = Mat::identity(self.rows);
        for m in 0..=self.rows {
            if p.is_zero() {
                return Some(m);
            }
            p = p.mul(self);
        }
        if p.is_zero() {
            Some(self.rows)
        } else {
            None
        }
    }

    /// exp(A) for nilpotent A; a polynomial, so exact over the field.
    pub fn exp_nilpotent(&self) -> Self {
        let m = self
            .nilpotency_index()
            .expect("exp_nilpotent on a non-nilpotent matrix");
        let mut acc = Mat::identity(self.rows);
        let mut term = Mat::identity(self.rows);
        let mut fact = T::one();
        for k in 1..m {
            term = term.mul(self);
            let mut kt = T::zero();
            for _ in 0..k {
                kt = kt + T::one();
            }
            fact = fact * kt;
            acc = acc.add(&term.map(|x| x.clone() / fact.clone()));
        }
        acc
    }

    /// In-place reduced row echelon form; returns pivot column indices.
    pub fn rref_in_place(&mut self) -> Vec<usize> {
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..self.cols {
            if r == self.rows {
                break;
            }
            let mut piv = None;
            for i in r..self.rows {
                if self[(i, c)] != T::zero() {
                    piv = Some(i);
                    break;
                }
            }
            let Some(p) = piv else { continue };
            self.swap_rows(r, p);
            let inv = T::one() / self[(r, c)].clone();
            for j in 0..self.cols {
                self[(r, j)] = self[(r, j)].clone() * inv.clone();
            }
            for i in 0..self.rows {
                if i != r && self[(i, c)] != T::zero() {
                    let f = self[(i, c)].clone();
                    for j in 0..self.cols {
                        let s = self[(r, j)].clone() * f.clone();
                        self[(i, j)] = self[(i, j)].clone() - s;
                    }
                }
            }
            pivots.push(c);
            r += 1;
        }
        pivots
    }

    pub fn rref(&self) -> (Self, Vec<usize>) {
        let mut m = self.clone();
        let p = m.rref_in_place();
        (m, p)
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    /// Basis of the null space, as columns of a matrix (may have 0 cols).
    pub fn kernel(&self) -> Self {
        let (r, pivots) = self.rref();
        let free: Vec<usize> = (0..self.cols).filter(|c| !pivots.contains(c)).collect();
        let mut cols = Vec::new();
        for &f in &free {
            let mut v = vec![T::zero(); self.cols];
            v[f] = T::one();
            for (i, &pc) in pivots.iter().enumerate() {
                v[pc] = T::zero() - r[(i, f)].clone();
            }
            cols.push(v);
        }
        if cols.is_empty() {
            Mat::zero(self.cols, 0)
        } else {
            Mat::from_cols(cols)
        }
    }

    pub fn rank(&self) -> usize {
        self.rref().1.len()
    }

    pub fn det(&self) -> T {
        assert_eq!(self.rows, self.cols);
        let n = self.rows;
        let mut m = self.clone();
        let mut det = T::one();
        for c in 0..n {
            let mut piv = None;
            for i in c..n {
                if m[(i, c)] != T::zero() {
                    piv = Some(i);
                    break;
                }
            }
            let Some(p) = piv else { return T::zero() };
            if p != c {
                m.swap_rows(c, p);
                det = T::zero() - det;
            }
            det = det * m[(c, c)].clone();
            let inv = T::one() / m[(c, c)].clone();
            for i in (c + 1)..n {
                if m[(i, c)] != T::zero() {
                    let f = m[(i, c)].clone() * inv.clone();
                    for j in c..n {
                        let s = m[(c, j)].clone() * f.clone();
                        m[(i, j)] = m[(i, j)].clone() - s;
                    }
                }
            }
        }
        det
    }

    pub fn inverse(&self) -> Option<Self> {
        assert_eq!(self.rows, self.cols);
        let n = self.rows;
        let aug = self.hstack(&Mat::identity(n));
        let (r, pivots) = aug.rref();
        if pivots.len() < n || pivots[n - 1] != n - 1 {
            return None;
        }
        Some(Mat::from_fn(n, n, |i, j| r[(i, n + j)].clone()))
    }

    /// Solves A x = b; None if inconsistent.  Free variables are set to 0.
    pub fn solve(&self, b: &[T]) -> Option<Vec<T>> {
        assert_eq!(self.rows, b.len());
        let bm = Mat::new(self.rows, 1, b.to_vec());
        let aug = self.hstack(&bm);
        let (r, pivots) = aug.rref();
        if pivots.contains(&self.cols) {
            return None;
        }
        let mut x = vec![T::zero(); self.cols];
        for (i, &pc) in pivots.iter().enumerate() {
            x[pc] = r[(i, self.cols)].clone();
        }
        Some(x)
    }

    /// Kronecker product, row-major index (i1*r2+i2, j1*c2+j2).
    pub fn kron(&self, other: &Self) -> Self {
        Mat::from_fn(self.rows * other.rows, self.cols * other.cols, |i, j| {
            let (i1, i2) = (i / other.rows, i % other.rows);
            let (j1, j2) = (j / other.cols, j % other.cols);
            self[(i1, j1)].clone() * other[(i2, j2)].clone()
        })
    }

    pub fn max_abs_f64(&self, to_f64: impl Fn(&T) -> f64) -> f64 {
        self.data.iter().map(|x| to_f64(x).abs()).fold(0.0, f64::max)
    }
}

impl<T> std::ops::Index<(usize, usize)> for Mat<T> {
    type Output = T;
    fn index(&self, (i, j): (usize, usize)) -> &T {
        &self.data[i * self.cols + j]
    }
}

impl<T> std::ops::IndexMut<(usize, usize)> for Mat<T> {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut T {
        &mut self.data[i * self.cols + j]
    }
}

use crate::scalar::{Gauss, Rat};

impl Mat<Rat> {
    pub fn lift(&self) -> Mat<Gauss> {
        self.map(crate::scalar::glift)
    }
}

impl Mat<Gauss> {
    pub fn conj(&self) -> Mat<Gauss> {
        self.map(|z| z.conj())
    }

    pub fn is_real(&self) -> bool {
        self.data.iter().all(crate::scalar::is_real)
    }

    pub fn re_part(&self) -> Mat<Rat> {
        self.map(|z| z.re.clone())
    }
}
