//! Subspaces of Q^n or Q(i)^n held in reduced column echelon form.  The
//! echelon basis is a canonical form of the subspace, so equality of
//! subspaces is literal equality of basis matrices.  Sums, intersections,
//! images, preimages and quotient sections all stay exact.

use crate::mat::Mat;
use num::traits::Num;

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Subspace<T> {
    pub ambient: usize,
    basis: Mat<T>,
    pivots: Vec<usize>,
}

impl<T: Num + Clone> Subspace<T> {
    /// Span of the columns of `gens`, canonicalized.
    pub fn span(ambient: usize, gens: &Mat<T>) -> Self {
        assert_eq!(gens.rows, ambient, "generator height mismatch");
        let (r, pivots) = gens.transpose().rref();
        let basis = Mat::from_fn(ambient, pivots.len(), |i, j| r[(j, i)].clone());
        Subspace {
            ambient,
            basis,
            pivots,
        }
    }

    pub fn from_vecs(ambient: usize, vecs: Vec<Vec<T>>) -> Self {
        if vecs.is_empty() {
            return Subspace::zero(ambient);
        }
        Subspace::span(ambient, &Mat::from_cols(vecs))
    }

    pub fn zero(ambient: usize) -> Self {
        Subspace {
            ambient,
            basis: Mat::zero(ambient, 0),
            pivots: vec![],
        }
    }

    pub fn full(ambient: usize) -> Self {
        Subspace::span(ambient, &Mat::identity(ambient))
    }

    pub fn dim(&self) -> usize {
        self.basis.cols
    }

    pub fn basis(&self) -> &Mat<T> {
        &self.basis
    }

    pub fn pivots(&self) -> &[usize] {
        &self.pivots
    }

    pub fn basis_vecs(&self) -> Vec<Vec<T>> {
        (0..self.dim()).map(|j| self.basis.col(j)).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.dim() == 0
    }

    pub fn is_full(&self) -> bool {
        self.dim() == self.ambient
    }

    /// Coordinates of `v` in the echelon basis, if `v` lies in the span.
    pub fn coords(&self, v: &[T]) -> Option<Vec<T>> {
        assert_eq!(v.len(), self.ambient);
        let x: Vec<T> = self.pivots.iter().map(|&p| v[p].clone()).collect();
        let rebuilt = self.basis.mul_vec(&x);
        if rebuilt
            .iter()
            .zip(v.iter())
            .all(|(a, b)| a.clone() == b.clone())
        {
            Some(x)
        } else {
            None
        }
    }

    pub fn contains_vec(&self, v: &[T]) -> bool {
        self.coords(v).is_some()
    }

    pub fn contains(&self, other: &Self) -> bool {
        assert_eq!(self.ambient, other.ambient);
        (0..other.dim()).all(|j| self.contains_vec(&other.basis.col(j)))
    }

    pub fn sum(&self, other: &Self) -> Self {
        assert_eq!(self.ambient, other.ambient);
        if self.is_zero() {
            return other.clone();
        }
        if other.is_zero() {
            return self.clone();
        }
        Subspace::span(self.ambient, &self.basis.hstack(&other.basis))
    }

    pub fn intersect(&self, other: &Self) -> Self {
        assert_eq!(self.ambient, other.ambient);
        if self.is_zero() || other.is_zero() {
            return Subspace::zero(self.ambient);
        }
        let stacked = self.basis.hstack(&other.basis);
        let ker = stacked.kernel();
        let mut gens = Vec::new();
        for j in 0..ker.cols {
            let col = ker.col(j);
            let u = &col[..self.dim()];
            gens.push(self.basis.mul_vec(u));
        }
        Subspace::from_vecs(self.ambient, gens)
    }

    /// Image of this subspace under the linear map `m`.
    pub fn apply(&self, m: &Mat<T>) -> Self {
        assert_eq!(m.cols, self.ambient);
        Subspace::span(m.rows, &m.mul(&self.basis))
    }

    /// Preimage {x : m x in self} inside the domain of `m`.
    pub fn preimage(&self, m: &Mat<T>) -> Self {
        assert_eq!(m.rows, self.ambient);
        if self.is_full() {
            return Subspace::full(m.cols);
        }
        let stacked = if self.is_zero() {
            m.clone()
        } else {
            m.hstack(&self.basis)
        };
        let ker = stacked.kernel();
        let mut gens = Vec::new();
        for j in 0..ker.cols {
            let col = ker.col(j);
            gens.push(col[..m.cols].to_vec());
        }
        Subspace::from_vecs(m.cols, gens)
    }
}

pub fn kernel_of<T: Num + Clone>(m: &Mat<T>) -> Subspace<T> {
    Subspace::span(m.cols, &m.kernel())
}

pub fn image_of<T: Num + Clone>(m: &Mat<T>) -> Subspace<T> {
    Subspace::span(m.rows, m)
}

/// Checks that the listed subspaces form an internal direct sum equal to
/// the whole ambient space.
pub fn is_direct_sum_full<T: Num + Clone>(ambient: usize, parts: &[&Subspace<T>]) -> bool {
    let total: usize = parts.iter().map(|s| s.dim()).sum();
    if total != ambient {
        return false;
    }
    let mut acc = Subspace::zero(ambient);
    for s in parts {
        acc = acc.sum(s);
    }
    acc.is_full()
}

use crate::scalar::{Gauss, Rat};

impl Subspace<Rat> {
    pub fn lift(&self) -> Subspace<Gauss> {
        Subspace::span(self.ambient, &self.basis.lift())
    }
}

impl Subspace<Gauss> {
    /// Entrywise conjugation of the basis in the fixed rational frame.
    pub fn conj(&self) -> Subspace<Gauss> {
        Subspace::span(self.ambient, &self.basis.conj())
    }

    pub fn is_conj_stable(&self) -> bool {
        *self == self.conj()
    }
}

/// Quotient big/small with the explicit section given by the non-pivot
/// coordinates of small inside the echelon basis of big.
#[derive(Clone, Debug)]
pub struct Quot<T> {
    pub big: Subspace<T>,
    small_coords: Mat<T>,
    small_pivots: Vec<usize>,
    pub section_idx: Vec<usize>,
}

impl<T: Num + Clone> Quot<T> {
    pub fn new(big: &Subspace<T>, small: &Subspace<T>) -> Self {
        assert!(big.contains(small), "quotient requires small <= big");
        let mut coord_cols = Vec::new();
        for j in 0..small.dim() {
            coord_cols.push(big.coords(&small.basis().col(j)).unwrap());
        }
        let coords = if coord_cols.is_empty() {
            Mat::zero(big.dim(), 0)
        } else {
            Mat::from_cols(coord_cols)
        };
        let sub = Subspace::span(big.dim(), &coords);
        let small_pivots = sub.pivots().to_vec();
        let section_idx: Vec<usize> = (0..big.dim())
            .filter(|i| !small_pivots.contains(i))
            .collect();
        Quot {
            big: big.clone(),
            small_coords: sub.basis().clone(),
            small_pivots,
            section_idx,
        }
    }

    pub fn dim(&self) -> usize {
        self.section_idx.len()
    }

    /// Class coordinates of an ambient vector lying in big.
    pub fn project_vec(&self, v: &[T]) -> Vec<T> {
        let mut c = self
            .big
            .coords(v)
            .expect("project_vec: vector not in the total space");
        for (j, &p) in self.small_pivots.iter().enumerate() {
            let f = c[p].clone();
            if f != T::zero() {
                for i in 0..c.len() {
                    let s = self.small_coords[(i, j)].clone() * f.clone();
                    c[i] = c[i].clone() - s;
                }
            }
        }
        self.section_idx.iter().map(|&i| c[i].clone()).collect()
    }

    /// Section: class coordinates back to a distinguished ambient lift.
    pub fn include(&self, class: &[T]) -> Vec<T> {
        assert_eq!(class.len(), self.dim());
        let mut c = vec![T::zero(); self.big.dim()];
        for (k, &i) in self.section_idx.iter().enumerate() {
            c[i] = class[k].clone();
        }
        self.big.basis().mul_vec(&c)
    }

    /// Image of (S intersect big) in the quotient.
    pub fn project_subspace(&self, s: &Subspace<T>) -> Subspace<T> {
        let t = s.intersect(&self.big);
        let gens: Vec<Vec<T>> = (0..t.dim())
            .map(|j| self.project_vec(&t.basis().col(j)))
            .collect();
        Subspace::from_vecs(self.dim(), gens)
    }

    /// Matrix of the map induced on the quotient by an ambient map that
    /// preserves both big and small.
    pub fn induced_map(&self, m: &Mat<T>) -> Mat<T> {
        self.map_from(self, m)
    }

    /// Matrix of class -> class of m * (section of class), source `other`.
    pub fn map_from(&self, other: &Quot<T>, m: &Mat<T>) -> Mat<T> {
        let cols: Vec<Vec<T>> = (0..other.dim())
            .map(|k| {
                let mut e = vec![T::zero(); other.dim()];
                e[k] = T::one();
                self.project_vec(&m.mul_vec(&other.include(&e)))
            })
            .collect();
        if cols.is_empty() {
            Mat::zero(self.dim(), 0)
        } else {
            Mat::from_cols(cols)
        }
    }
}
