//! Mixed Hodge structures on Q^n: validation, the Deligne bigrading,
//! the real splitting obtained by twisting with exp(i*delta), and
//! tangent space dimensions cut out by a Lie algebra action.
//!
//! The weight filtration is increasing over Q, the Hodge filtration
//! decreasing over Q(i).  Complex conjugation always means entrywise
//! conjugation in the fixed rational frame.

use crate::filtration::{DecFiltration, IncFiltration};
use crate::mat::Mat;
use crate::scalar::{gauss, gi, i_pow, rat, ratio, Gauss, Rat};
use crate::subspace::{is_direct_sum_full, Subspace};
use std::collections::BTreeMap;

#[derive(Clone, Debug)]
pub struct MHSInstance {
    pub dim: usize,
    pub w: IncFiltration<Rat>,
    pub f: DecFiltration<Gauss>,
}

#[derive(Clone, Debug)]
pub struct ValidationReport {
    pub ok: bool,
    pub failures: Vec<String>,
}

#[derive(Clone, Debug)]
pub struct Bigrading {
    pub dim: usize,
    pub pieces: BTreeMap<(i64, i64), Subspace<Gauss>>,
    pub r_split: bool,
}

#[derive(Clone, Debug)]
pub struct DeltaSplitting {
    pub delta: Mat<Rat>,
    pub f_split: DecFiltration<Gauss>,
    pub split_bigrading: Bigrading,
}

impl MHSInstance {
    pub fn new(dim: usize, w: IncFiltration<Rat>, f: DecFiltration<Gauss>) -> Self {
        assert_eq!(w.ambient, dim);
        assert_eq!(f.ambient, dim);
        MHSInstance { dim, w, f }
    }

    pub fn pure(dim: usize, weight: i64, f: DecFiltration<Gauss>) -> Self {
        MHSInstance::new(dim, IncFiltration::pure(dim, weight), f)
    }

    /// Weights w where gr^W_w is nonzero.
    pub fn weights(&self) -> Vec<i64> {
        self.w.jumps()
    }
}

/// Checks that each gr^W_w is a pure Hodge structure of weight w with
/// respect to the induced Hodge filtration.
pub fn validate_mhs(x: &MHSInstance) -> ValidationReport {
    let mut failures = Vec::new();
    if let Err(e) = x.w.validate() {
        failures.push(format!("weight filtration: {}", e));
    }
    if let Err(e) = x.f.validate() {
        failures.push(format!("hodge filtration: {}", e));
    }
    if failures.is_empty() {
        let wc = x.w.lift();
        let (pmin, pmax) = hodge_window(&x.f);
        for w in x.w.jumps() {
            let q = wc.graded(w);
            if q.dim() == 0 {
                continue;
            }
            let gf = x.f.in_quot(&q);
            for p in pmin..=pmax + 1 {
                let a = gf.at(p);
                let b = gf.at(w + 1 - p).conj();
                if a.dim() + b.dim() != q.dim() || !a.sum(&b).is_full() {
                    failures.push(format!(
                        "gr_{} not pure of weight {}: F^{} and conj F^{} do not split it",
                        w,
                        w,
                        p,
                        w + 1 - p
                    ));
                }
            }
        }
    }
    ValidationReport {
        ok: failures.is_empty(),
        failures,
    }
}

fn hodge_window(f: &DecFiltration<Gauss>) -> (i64, i64) {
    let lo = f.min_recorded().unwrap_or(0);
    let hi = f.max_recorded().unwrap_or(0);
    (lo, hi)
}

/// The Deligne bigrading I^{p,q} of a valid mixed Hodge structure,
/// computed by the closed formula
///   I^{p,q} = (F^p n W_{p+q}) n (conj F^q n W_{p+q} + sum_j conj F^{q-j} n W_{p+q-j-1}).
pub fn deligne_bigrading(x: &MHSInstance) -> Result<Bigrading, String> {
    let wc = x.w.lift();
    let (pmin, pmax) = hodge_window(&x.f);
    let wjumps = x.w.jumps();
    if wjumps.is_empty() {
        return Err("weight filtration has no jumps".into());
    }
    let (wmin, wmax) = (wjumps[0], *wjumps.last().unwrap());
    let mut pieces = BTreeMap::new();
    for p in pmin..=pmax {
        for q in (wmin - pmax)..=(wmax - pmin) {
            let m = p + q;
            if m < wmin || m > wmax {
                continue;
            }
            let wm = wc.at(m);
            let left = x.f.at(p).intersect(&wm);
            if left.is_zero() {
                continue;
            }
            let mut right = x.f.at(q).conj().intersect(&wm);
            let mut j = 1;
            loop {
                let fq = x.f.at(q - j);
                let wterm = wc.at(m - j - 1);
                if wterm.is_zero() {
                    break;
                }
                right = right.sum(&fq.conj().intersect(&wterm));
                if q - j < pmin {
                    break;
                }
                j += 1;
            }
            let piece = left.intersect(&right);
            if !piece.is_zero() {
                pieces.insert((p, q), piece);
            }
        }
    }
    let bg = Bigrading {
        dim: x.dim,
        r_split: pieces
            .iter()
            .all(|(&(p, q), s)| pieces.get(&(q, p)).map_or(false, |t| s.conj() == *t)),
        pieces,
    };
    verify_bigrading(x, &bg)?;
    Ok(bg)
}

/// The normative checks: the pieces decompose V, recover W and F, and
/// conjugation is compatible up to strictly smaller bidegrees.
pub fn verify_bigrading(x: &MHSInstance, bg: &Bigrading) -> Result<(), String> {
    let parts: Vec<&Subspace<Gauss>> = bg.pieces.values().collect();
    if !is_direct_sum_full(x.dim, &parts) {
        return Err("bigrading pieces do not decompose the ambient space".into());
    }
    let wc = x.w.lift();
    let wjumps = x.w.jumps();
    let (wmin, wmax) = (wjumps[0], *wjumps.last().unwrap());
    for m in (wmin - 1)..=wmax {
        let mut acc = Subspace::zero(x.dim);
        for (&(p, q), s) in &bg.pieces {
            if p + q <= m {
                acc = acc.sum(s);
            }
        }
        if acc != wc.at(m) {
            return Err(format!("W_{} is not the sum of pieces with p+q <= {}", m, m));
        }
    }
    let (pmin, pmax) = hodge_window(&x.f);
    for p0 in pmin..=pmax + 1 {
        let mut acc = Subspace::zero(x.dim);
        for (&(p, _), s) in &bg.pieces {
            if p >= p0 {
                acc = acc.sum(s);
            }
        }
        if acc != x.f.at(p0) {
            return Err(format!("F^{} is not the sum of pieces with p >= {}", p0, p0));
        }
    }
    for (&(p, q), s) in &bg.pieces {
        let mut target = match bg.pieces.get(&(q, p)) {
            Some(t) => t.clone(),
            None => Subspace::zero(x.dim),
        };
        for (&(p2, q2), t) in &bg.pieces {
            if p2 < q && q2 < p {
                target = target.sum(t);
            }
        }
        if !target.contains(&s.conj()) {
            return Err(format!(
                "conj I^{},{} is not inside I^{},{} plus lower bidegrees",
                p, q, q, p
            ));
        }
    }
    Ok(())
}

/// Frame data for a bigrading: the column basis, per-column (p,q), and
/// the inverse base change.  Used for weight projections.
pub struct BigradingFrame {
    pub basis: Mat<Gauss>,
    pub inv: Mat<Gauss>,
    pub types: Vec<(i64, i64)>,
}

impl Bigrading {
    pub fn frame(&self) -> BigradingFrame {
        let mut cols: Vec<Vec<Gauss>> = Vec::new();
        let mut types = Vec::new();
        for (&(p, q), s) in &self.pieces {
            for j in 0..s.dim() {
                cols.push(s.basis().col(j));
                types.push((p, q));
            }
        }
        let basis = Mat::from_cols(cols);
        let inv = basis.inverse().expect("bigrading basis not invertible");
        BigradingFrame { basis, inv, types }
    }

    /// The grading operator acting by p+q on I^{p,q}.
    pub fn weight_operator(&self) -> Mat<Gauss> {
        let fr = self.frame();
        let n = fr.types.len();
        let d = Mat::from_fn(n, n, |i, j| {
            if i == j {
                gi(fr.types[i].0 + fr.types[i].1, 0)
            } else {
                gi(0, 0)
            }
        });
        fr.basis.mul(&d).mul(&fr.inv)
    }
}

impl BigradingFrame {
    /// Projector onto I^{p,q} along the other pieces.
    pub fn projector(&self, p: i64, q: i64) -> Mat<Gauss> {
        let n = self.types.len();
        let d = Mat::from_fn(n, n, |r, c| {
            if r == c && self.types[r] == (p, q) {
                gi(1, 0)
            } else {
                gi(0, 0)
            }
        });
        self.basis.mul(&d).mul(&self.inv)
    }

    /// Acts by i^(p-q) on I^{p,q}.
    pub fn weil_operator(&self) -> Mat<Gauss> {
        let n = self.types.len();
        let d = Mat::from_fn(n, n, |r, c| {
            if r == c {
                i_pow(self.types[r].0 - self.types[r].1)
            } else {
                gi(0, 0)
            }
        });
        self.basis.mul(&d).mul(&self.inv)
    }

    /// Component of z with ad-eigenvalue m for the weight operator.
    pub fn ad_component(&self, z: &Mat<Gauss>, m: i64) -> Mat<Gauss> {
        let zb = self.inv.mul(z).mul(&self.basis);
        let n = self.types.len();
        let masked = Mat::from_fn(n, n, |r, c| {
            let wr = self.types[r].0 + self.types[r].1;
            let wc = self.types[c].0 + self.types[c].1;
            if wr - wc == m {
                zb[(r, c)].clone()
            } else {
                gi(0, 0)
            }
        });
        self.basis.mul(&masked).mul(&self.inv)
    }
}

/// The real nilpotent delta with exp(i delta) F_split = F.  Solved
/// degree by degree against the conjugated weight operator; delta has
/// components only in bidegrees (a,b) with a,b <= -1 for the split
/// structure, which is verified before returning.
pub fn delta_splitting(x: &MHSInstance) -> Result<DeltaSplitting, String> {
    let bg = deligne_bigrading(x)?;
    let fr = bg.frame();
    let y = bg.weight_operator();
    let ybar = y.conj();
    let wts: Vec<i64> = fr.types.iter().map(|&(p, q)| p + q).collect();
    let wmin = *wts.iter().min().unwrap();
    let wmax = *wts.iter().max().unwrap();
    let n = x.dim;
    let mut xx: Mat<Gauss> = Mat::zero(n, n);
    for m in (wmin - wmax..=-2).rev() {
        // series S = Y + sum ad_X^n(Y)/n! with the components found so far
        let mut s = y.clone();
        let mut term = y.clone();
        let mut k = 1i64;
        loop {
            term = xx.bracket(&term).map(|v| v.clone() / gi(k, 0));
            if term.is_zero() {
                break;
            }
            s = s.add(&term);
            k += 1;
            if k > 2 * n as i64 + 4 {
                return Err("delta series failed to terminate".into());
            }
        }
        let e = fr.ad_component(&ybar.sub(&s), m);
        if e.is_zero() {
            continue;
        }
        let xm = e.map(|v| v.clone() / gi(-m, 0));
        xx = xx.add(&xm);
    }
    // X = -2i delta
    let delta_c = xx.map(|v| v.clone() * gauss(rat(0), ratio(1, 2)));
    if !delta_c.is_real() {
        return Err("delta came out non-real".into());
    }
    let delta = delta_c.re_part();
    let exp_minus = delta.lift().map(|v| v.clone() * gi(0, -1)).exp_nilpotent();
    let f_split = x.f.apply(&exp_minus);
    let split = MHSInstance::new(n, x.w.clone(), f_split.clone());
    let sbg = deligne_bigrading(&split)?;
    if !sbg.r_split {
        return Err("split structure is not conjugation stable".into());
    }
    let sfr = sbg.frame();
    let db = sfr.inv.mul(&delta.lift()).mul(&sfr.basis);
    for r in 0..sfr.types.len() {
        for c in 0..sfr.types.len() {
            if db[(r, c)] != gi(0, 0) {
                let (pr, qr) = sfr.types[r];
                let (pc, qc) = sfr.types[c];
                if !(pr < pc && qr < qc) {
                    return Err(format!(
                        "delta has a component outside negative bidegrees: ({},{}) -> ({},{})",
                        pc, qc, pr, qr
                    ));
                }
            }
        }
    }
    let exp_plus = delta.lift().map(|v| v.clone() * gi(0, 1)).exp_nilpotent();
    if f_split.apply(&exp_plus) != x.f {
        return Err("exp(i delta) does not recover F".into());
    }
    Ok(DeltaSplitting {
        delta,
        f_split,
        split_bigrading: sbg,
    })
}

/// dim_C of L_C / F^0 L_C, where F^0 L_C consists of the elements of
/// the complexified span of `lie_gens` preserving every F^p.
/// Weight filtration {0, 2} with W_0 = span e1 and F^1 the line
/// through c e1 + e2.  Split over R exactly when c is real.
pub fn hodge_tate(c: Gauss) -> MHSInstance {
    let mut w = IncFiltration::pure(2, 2);
    w.insert(0, Subspace::from_vecs(2, vec![vec![rat(1), rat(0)]]));
    let mut f = DecFiltration::new(2, BTreeMap::new());
    f.insert(0, Subspace::full(2));
    f.insert(1, Subspace::from_vecs(2, vec![vec![c, gi(1, 0)]]));
    MHSInstance::new(2, w, f)
}

/// Pure weight 1 on Q^2 with F^1 the line through tau e1 + e2.
pub fn elliptic(tau: Gauss) -> MHSInstance {
    let mut f = DecFiltration::new(2, BTreeMap::new());
    f.insert(0, Subspace::full(2));
    f.insert(1, Subspace::from_vecs(2, vec![vec![tau, gi(1, 0)]]));
    MHSInstance::pure(2, 1, f)
}

/// The induced pure structure of weight w on gr^W_w, written in the
/// section coordinates of the quotient W_w / W_{w-1}.
pub fn graded_instance(x: &MHSInstance, w: i64) -> MHSInstance {
    let q = crate::subspace::Quot::new(&x.w.at(w).lift(), &x.w.at(w - 1).lift());
    let f = x.f.in_quot(&q);
    MHSInstance::pure(q.dim(), w, f)
}

pub fn tangent_dim(lie_gens: &[Mat<Rat>], x: &MHSInstance) -> usize {
    let n = x.dim;
    let flat: Vec<Vec<Gauss>> = lie_gens
        .iter()
        .map(|m| {
            let mut v = Vec::with_capacity(n * n);
            for i in 0..n {
                for j in 0..n {
                    v.push(crate::scalar::glift(&m[(i, j)]));
                }
            }
            v
        })
        .collect();
    let l = Subspace::from_vecs(n * n, flat);
    let mut constraint: Option<Mat<Gauss>> = None;
    for p in x.f.recorded() {
        let fp = x.f.at(p);
        if fp.is_zero() || fp.is_full() {
            continue;
        }
        let q = crate::subspace::Quot::new(&Subspace::full(n), &fp);
        let mut proj = Mat::zero(q.dim(), n);
        for j in 0..n {
            let mut e = vec![gi(0, 0); n];
            e[j] = gi(1, 0);
            let cls = q.project_vec(&e);
            for i in 0..q.dim() {
                proj[(i, j)] = cls[i].clone();
            }
        }
        let block = proj.kron(&fp.basis().transpose());
        constraint = Some(match constraint {
            None => block,
            Some(c) => c.vstack(&block),
        });
    }
    let f0 = match constraint {
        None => l.clone(),
        Some(c) => l.intersect(&crate::subspace::kernel_of(&c)),
    };
    l.dim() - f0.dim()
}
