//! Rational polyhedral cones with both generator and inequality
//! descriptions, kept in sync by a double description pass.  Faces,
//! relative interiors, duals and Hilbert bases are all exact.  Sizes
//! stay tiny here (rank at most four or so), so the classical
//! algorithms are used directly.

use crate::scalar::{rat, Rat};
use crate::subspace::Subspace;
use num::bigint::BigInt;
use num::integer::Integer;
use num::traits::{Signed, Zero};
use std::collections::BTreeSet;

fn dot(a: &[Rat], b: &[Rat]) -> Rat {
    assert_eq!(a.len(), b.len());
    let mut acc = rat(0);
    for i in 0..a.len() {
        acc += &a[i] * &b[i];
    }
    acc
}

fn axpy(y: &mut [Rat], c: &Rat, x: &[Rat]) {
    for i in 0..y.len() {
        y[i] = &y[i] + &(c * &x[i]);
    }
}

/// Scales a rational vector to a primitive integer vector with the same
/// direction.  The zero vector stays zero.
pub fn primitive(v: &[Rat]) -> Vec<Rat> {
    let mut l = BigInt::from(1);
    for x in v {
        l = l.lcm(x.denom());
    }
    let ints: Vec<BigInt> = v.iter().map(|x| x.numer() * (&l / x.denom())).collect();
    let mut g = BigInt::zero();
    for n in &ints {
        g = g.gcd(n);
    }
    if g.is_zero() {
        return vec![rat(0); v.len()];
    }
    ints
        .iter()
        .map(|n| Rat::from_integer(n / &g))
        .collect()
}

#[derive(Clone, Debug)]
struct Ray {
    v: Vec<Rat>,
    tight: BTreeSet<usize>,
}

/// Double description: from the inequality system {x : <a,x> >= 0} to
/// (lineality space, extreme rays of the pointed part).
pub fn dual_description(dim: usize, ineqs: &[Vec<Rat>]) -> (Subspace<Rat>, Vec<Vec<Rat>>) {
    let ineqs: Vec<Vec<Rat>> = ineqs
        .iter()
        .filter(|a| a.iter().any(|x| !x.is_zero()))
        .cloned()
        .collect();
    let mut lin: Vec<Vec<Rat>> = (0..dim)
        .map(|i| {
            let mut e = vec![rat(0); dim];
            e[i] = rat(1);
            e
        })
        .collect();
    let mut rays: Vec<Ray> = Vec::new();
    for (idx, a) in ineqs.iter().enumerate() {
        assert_eq!(a.len(), dim, "inequality in wrong dimension");
        let split = lin.iter().position(|b| !dot(a, b).is_zero());
        if let Some(k) = split {
            let mut l = lin.remove(k);
            let al = dot(a, &l);
            if al.is_negative() {
                for x in l.iter_mut() {
                    *x = -x.clone();
                }
            }
            let al = dot(a, &l);
            for b in lin.iter_mut() {
                let c = -dot(a, b) / &al;
                axpy(b, &c, &l);
            }
            for r in rays.iter_mut() {
                let c = -dot(a, &r.v) / &al;
                axpy(&mut r.v, &c, &l);
                r.tight.insert(idx);
            }
            let tight: BTreeSet<usize> = (0..idx).collect();
            rays.push(Ray { v: l, tight });
        } else {
            let vals: Vec<Rat> = rays.iter().map(|r| dot(a, &r.v)).collect();
            let mut next: Vec<Ray> = Vec::new();
            for (i, r) in rays.iter().enumerate() {
                if vals[i].is_zero() {
                    let mut r2 = r.clone();
                    r2.tight.insert(idx);
                    next.push(r2);
                } else if vals[i].is_positive() {
                    next.push(r.clone());
                }
            }
            for (i, p) in rays.iter().enumerate() {
                if !vals[i].is_positive() {
                    continue;
                }
                for (j, n) in rays.iter().enumerate() {
                    if !vals[j].is_negative() {
                        continue;
                    }
                    let t: BTreeSet<usize> =
                        p.tight.intersection(&n.tight).cloned().collect();
                    let adjacent = rays.iter().enumerate().all(|(k, r)| {
                        k == i || k == j || !t.is_subset(&r.tight)
                    });
                    if !adjacent {
                        continue;
                    }
                    let mut v = vec![rat(0); dim];
                    axpy(&mut v, &vals[i], &n.v);
                    let negj = -vals[j].clone();
                    axpy(&mut v, &negj, &p.v);
                    let mut tight = t;
                    tight.insert(idx);
                    next.push(Ray {
                        v: primitive(&v),
                        tight,
                    });
                }
            }
            rays = next;
        }
    }
    let lin_space = Subspace::from_vecs(dim, lin);
    let mut out: Vec<Vec<Rat>> = rays.iter().map(|r| primitive(&r.v)).collect();
    out.sort();
    out.dedup();
    (lin_space, out)
}

#[derive(Clone, Debug)]
pub struct Cone {
    pub dim: usize,
    pub lin: Subspace<Rat>,
    pub rays: Vec<Vec<Rat>>,
    pub ineqs: Vec<Vec<Rat>>,
}

impl PartialEq for Cone {
    fn eq(&self, other: &Self) -> bool {
        self.dim == other.dim && self.lin == other.lin && self.rays == other.rays
    }
}
impl Eq for Cone {}

impl Cone {
    pub fn from_ineqs(dim: usize, ineqs: Vec<Vec<Rat>>) -> Cone {
        let (lin, rays) = dual_description(dim, &ineqs);
        Cone {
            dim,
            lin,
            rays,
            ineqs,
        }
    }

    pub fn from_gens(dim: usize, gens: Vec<Vec<Rat>>) -> Cone {
        for g in &gens {
            assert_eq!(g.len(), dim, "generator in wrong dimension");
        }
        let (dlin, drays) = dual_description(dim, &gens);
        let mut ineqs = drays;
        for j in 0..dlin.dim() {
            let b = dlin.basis().col(j);
            let nb = b.iter().map(|x| -x.clone()).collect();
            ineqs.push(b);
            ineqs.push(nb);
        }
        Cone::from_ineqs(dim, ineqs)
    }

    pub fn zero(dim: usize) -> Cone {
        Cone::from_gens(dim, vec![])
    }

    pub fn contains(&self, x: &[Rat]) -> bool {
        self.ineqs.iter().all(|a| !dot(a, x).is_negative())
    }

    pub fn contains_cone(&self, other: &Cone) -> bool {
        other.rays.iter().all(|r| self.contains(r))
            && (0..other.lin.dim()).all(|j| {
                let b = other.lin.basis().col(j);
                let nb: Vec<Rat> = b.iter().map(|x| -x.clone()).collect();
                self.contains(&b) && self.contains(&nb)
            })
    }

    pub fn intersect(&self, other: &Cone) -> Cone {
        assert_eq!(self.dim, other.dim);
        let mut ineqs = self.ineqs.clone();
        ineqs.extend(other.ineqs.clone());
        Cone::from_ineqs(self.dim, ineqs)
    }

    pub fn dual(&self) -> Cone {
        Cone::from_gens(self.dim, self.ineqs.clone())
    }

    /// Linear span as a subspace.
    pub fn span(&self) -> Subspace<Rat> {
        let mut gens = self.rays.clone();
        for j in 0..self.lin.dim() {
            gens.push(self.lin.basis().col(j));
        }
        Subspace::from_vecs(self.dim, gens)
    }

    pub fn is_pointed(&self) -> bool {
        self.lin.is_zero()
    }

    /// A point of the relative interior.
    pub fn relint_point(&self) -> Vec<Rat> {
        let mut p = vec![rat(0); self.dim];
        for r in &self.rays {
            axpy(&mut p, &rat(1), r);
        }
        p
    }

    pub fn contains_in_relint(&self, x: &[Rat]) -> bool {
        if !self.contains(x) {
            return false;
        }
        for a in &self.ineqs {
            if dot(a, x).is_zero() {
                let on_all = self.rays.iter().all(|r| dot(a, r).is_zero());
                if !on_all {
                    return false;
                }
            }
        }
        true
    }

    pub fn smallest_face_containing(&self, x: &[Rat]) -> Cone {
        assert!(self.contains(x), "point outside the cone");
        let mut ineqs = self.ineqs.clone();
        for a in &self.ineqs {
            if dot(a, x).is_zero() {
                ineqs.push(a.iter().map(|v| -v.clone()).collect());
            }
        }
        Cone::from_ineqs(self.dim, ineqs)
    }

    /// All faces, including the cone itself and its minimal face.
    pub fn faces(&self) -> Vec<Cone> {
        let mut out: Vec<Cone> = vec![self.clone()];
        let mut frontier: Vec<Cone> = vec![self.clone()];
        while let Some(f) = frontier.pop() {
            for a in &self.ineqs {
                let mut ineqs = f.ineqs.clone();
                ineqs.push(a.clone());
                ineqs.push(a.iter().map(|v| -v.clone()).collect());
                let cut = Cone::from_ineqs(self.dim, ineqs);
                if !out.contains(&cut) {
                    out.push(cut.clone());
                    frontier.push(cut);
                }
            }
        }
        out
    }

    pub fn is_face_of(&self, big: &Cone) -> bool {
        if !big.contains_cone(self) {
            return false;
        }
        let p = self.relint_point();
        *self == big.smallest_face_containing(&p)
    }

    /// Hilbert basis of cone intersect Z^dim; requires a pointed cone.
    pub fn hilbert_basis(&self) -> Vec<Vec<Rat>> {
        assert!(self.is_pointed(), "hilbert basis needs a pointed cone");
        let gens: Vec<Vec<Rat>> = self.rays.iter().map(|r| primitive(r)).collect();
        if gens.is_empty() {
            return vec![];
        }
        let d = self.dim;
        let mut lo = vec![rat(0); d];
        let mut hi = vec![rat(0); d];
        for g in &gens {
            for k in 0..d {
                if g[k].is_negative() {
                    lo[k] += &g[k];
                } else {
                    hi[k] += &g[k];
                }
            }
        }
        let lo: Vec<i64> = lo.iter().map(|x| x.to_integer().try_into().unwrap()).collect();
        let hi: Vec<i64> = hi.iter().map(|x| x.to_integer().try_into().unwrap()).collect();
        let mut candidates: Vec<Vec<Rat>> = Vec::new();
        let mut cursor = lo.clone();
        'outer: loop {
            let x: Vec<Rat> = cursor.iter().map(|&c| rat(c)).collect();
            if self.contains(&x) && x.iter().any(|v| !v.is_zero()) {
                candidates.push(x);
            }
            for k in 0..d {
                if cursor[k] < hi[k] {
                    cursor[k] += 1;
                    continue 'outer;
                }
                cursor[k] = lo[k];
            }
            break;
        }
        let mut basis: Vec<Vec<Rat>> = Vec::new();
        for x in &candidates {
            let mut reducible = false;
            for y in &candidates {
                if y == x {
                    continue;
                }
                let diff: Vec<Rat> = x.iter().zip(y.iter()).map(|(a, b)| a - b).collect();
                if diff.iter().any(|v| !v.is_zero()) && self.contains(&diff) {
                    reducible = true;
                    break;
                }
            }
            if !reducible {
                basis.push(x.clone());
            }
        }
        basis.sort();
        basis.dedup();
        basis
    }
}

/// Feasibility of a system <a,u> + c >= 0 (or > 0 when strict) by
/// Fourier-Motzkin elimination; returns a feasible point if one exists.
pub fn fm_feasible(nvars: usize, cons: &[(Vec<Rat>, Rat, bool)]) -> Option<Vec<Rat>> {
    if nvars == 0 {
        for (_, c, strict) in cons {
            if *strict && !c.is_positive() {
                return None;
            }
            if !strict && c.is_negative() {
                return None;
            }
        }
        return Some(vec![]);
    }
    let k = nvars - 1;
    let mut reduced: Vec<(Vec<Rat>, Rat, bool)> = Vec::new();
    let mut lower: Vec<(Vec<Rat>, Rat, bool)> = Vec::new();
    let mut upper: Vec<(Vec<Rat>, Rat, bool)> = Vec::new();
    for (a, c, strict) in cons {
        let coef = a[k].clone();
        if coef.is_zero() {
            reduced.push((a[..k].to_vec(), c.clone(), *strict));
        } else {
            let inv = rat(1) / &coef;
            let rest: Vec<Rat> = a[..k].iter().map(|x| x * &inv).collect();
            let cc = c * &inv;
            if coef.is_positive() {
                // u_k >= -(rest . u' + cc)
                lower.push((rest, cc, *strict));
            } else {
                // u_k <= -(rest . u' + cc), after sign flip
                upper.push((rest, cc, *strict));
            }
        }
    }
    for (la, lc, ls) in &lower {
        for (ua, uc, us) in &upper {
            let a: Vec<Rat> = la.iter().zip(ua.iter()).map(|(x, y)| x - y).collect();
            let c = lc - uc;
            reduced.push((a, c, *ls || *us));
        }
    }
    let u = fm_feasible(k, &reduced)?;
    let eval = |a: &[Rat], c: &Rat| -> Rat {
        let mut acc = c.clone();
        for i in 0..k {
            acc += &a[i] * &u[i];
        }
        -acc
    };
    let mut lo: Option<(Rat, bool)> = None;
    for (a, c, s) in &lower {
        let b = eval(a, c);
        let replace = match &lo {
            None => true,
            Some((cur, cs)) => b > *cur || (b == *cur && *s && !cs),
        };
        if replace {
            lo = Some((b, *s));
        }
    }
    let mut hi: Option<(Rat, bool)> = None;
    for (a, c, s) in &upper {
        let b = eval(a, c);
        let replace = match &hi {
            None => true,
            Some((cur, cs)) => b < *cur || (b == *cur && *s && !cs),
        };
        if replace {
            hi = Some((b, *s));
        }
    }
    let val = match (&lo, &hi) {
        (None, None) => rat(0),
        (Some((l, ls)), None) => {
            if *ls {
                l + rat(1)
            } else {
                l.clone()
            }
        }
        (None, Some((h, hs))) => {
            if *hs {
                h - rat(1)
            } else {
                h.clone()
            }
        }
        (Some((l, _)), Some((h, _))) => (l + h) / rat(2),
    };
    let mut out = u;
    out.push(val);
    Some(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::ratio;

    fn vq(xs: &[i64]) -> Vec<Rat> {
        xs.iter().map(|&x| rat(x)).collect()
    }

    #[test]
    fn quadrant_round_trip() {
        let c = Cone::from_gens(2, vec![vq(&[1, 0]), vq(&[0, 1]), vq(&[1, 1])]);
        assert!(c.is_pointed());
        assert_eq!(c.rays, vec![vq(&[0, 1]), vq(&[1, 0])]);
        assert!(c.contains(&vq(&[3, 5])));
        assert!(!c.contains(&vq(&[-1, 2])));
        let h = Cone::from_ineqs(2, vec![vq(&[1, 0]), vq(&[0, 1])]);
        assert_eq!(c, h);
    }

    #[test]
    fn lineality_and_duals() {
        let half = Cone::from_ineqs(2, vec![vq(&[1, 0])]);
        assert_eq!(half.lin.dim(), 1);
        assert_eq!(half.rays.len(), 1);
        let d = half.dual();
        assert!(d.is_pointed());
        assert_eq!(d.rays, vec![vq(&[1, 0])]);
        let full = Cone::from_gens(2, vec![vq(&[1, 0]), vq(&[-1, 0]), vq(&[0, 1]), vq(&[0, -1])]);
        assert_eq!(full.lin.dim(), 2);
        assert!(full.rays.is_empty());
        let z = full.dual();
        assert_eq!(z, Cone::zero(2));
    }

    #[test]
    fn faces_of_quadrant() {
        let c = Cone::from_gens(2, vec![vq(&[1, 0]), vq(&[0, 1])]);
        let fs = c.faces();
        assert_eq!(fs.len(), 4);
        let ray = Cone::from_gens(2, vec![vq(&[1, 0])]);
        assert!(ray.is_face_of(&c));
        let diag = Cone::from_gens(2, vec![vq(&[1, 1])]);
        assert!(c.contains_cone(&diag));
        assert!(!diag.is_face_of(&c));
        assert!(Cone::zero(2).is_face_of(&c));
    }

    #[test]
    fn simplicial_3d_faces() {
        let c = Cone::from_gens(
            3,
            vec![vq(&[1, 0, 0]), vq(&[0, 1, 0]), vq(&[0, 0, 1])],
        );
        assert_eq!(c.faces().len(), 8);
    }

    #[test]
    fn relint_and_smallest_face() {
        let c = Cone::from_gens(2, vec![vq(&[1, 0]), vq(&[0, 1])]);
        assert!(c.contains_in_relint(&vq(&[2, 3])));
        assert!(!c.contains_in_relint(&vq(&[2, 0])));
        let f = c.smallest_face_containing(&vq(&[2, 0]));
        assert_eq!(f, Cone::from_gens(2, vec![vq(&[1, 0])]));
        let p = c.relint_point();
        assert!(c.contains_in_relint(&p));
    }

    #[test]
    fn hilbert_basis_examples() {
        let c = Cone::from_gens(2, vec![vq(&[1, 1]), vq(&[1, -1])]);
        let hb = c.hilbert_basis();
        assert_eq!(hb, vec![vq(&[1, -1]), vq(&[1, 0]), vq(&[1, 1])]);
        let ray = Cone::from_gens(2, vec![vq(&[2, 3])]);
        assert_eq!(ray.hilbert_basis(), vec![vq(&[2, 3])]);
        let quad = Cone::from_gens(2, vec![vq(&[1, 0]), vq(&[0, 1])]);
        assert_eq!(quad.hilbert_basis(), vec![vq(&[0, 1]), vq(&[1, 0])]);
    }

    #[test]
    fn primitive_scaling() {
        assert_eq!(primitive(&[ratio(1, 2), ratio(3, 4)]), vq(&[2, 3]));
        assert_eq!(primitive(&[rat(-4), rat(6)]), vq(&[-2, 3]));
        assert_eq!(primitive(&[rat(0), rat(0)]), vq(&[0, 0]));
    }

    #[test]
    fn fm_feasibility() {
        // u >= 1, u <= 3
        let sys = vec![
            (vec![rat(1)], rat(-1), false),
            (vec![rat(-1)], rat(3), false),
        ];
        let u = fm_feasible(1, &sys).unwrap();
        assert!(u[0] >= rat(1) && u[0] <= rat(3));
        // u > 0, u < 0 infeasible
        let bad = vec![
            (vec![rat(1)], rat(0), true),
            (vec![rat(-1)], rat(0), true),
        ];
        assert!(fm_feasible(1, &bad).is_none());
        // strict two-variable system: x > 0, y > 0, x + y < 1
        let sys2 = vec![
            (vec![rat(1), rat(0)], rat(0), true),
            (vec![rat(0), rat(1)], rat(0), true),
            (vec![rat(-1), rat(-1)], rat(1), true),
        ];
        let u2 = fm_feasible(2, &sys2).unwrap();
        assert!(u2[0].is_positive() && u2[1].is_positive());
        assert!(&u2[0] + &u2[1] < rat(1));
    }
}
