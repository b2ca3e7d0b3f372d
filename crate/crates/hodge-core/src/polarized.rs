//! Bilinear form families, polarization checks, Hodge metrics and the
//! orthogonal (and limiting) splittings they induce.
//!
//! A form family assigns to each occurring weight w a rational bilinear
//! form on gr^W_w, symmetric in even weight and antisymmetric in odd
//! weight.  Everything downstream of the forms stays exact: positive
//! definiteness is decided by leading principal minors, and the limit
//! splitting follows exact iterates with a tolerance used only as a
//! stopping rule.

use crate::filtration::{DecFiltration, IncFiltration};
use crate::mat::Mat;
use crate::mhs::{deligne_bigrading, graded_instance, validate_mhs, MHSInstance};
use crate::scalar::{gi, glift, rat, rat_to_f64, Gauss, Rat};
use crate::subspace::{is_direct_sum_full, kernel_of, Quot, Subspace};
use num::traits::{One, Zero};
use std::collections::BTreeMap;

#[derive(Clone, Debug)]
pub struct FormFamily {
    pub forms: BTreeMap<i64, Mat<Rat>>,
}

impl FormFamily {
    pub fn new(forms: BTreeMap<i64, Mat<Rat>>) -> Self {
        FormFamily { forms }
    }

    pub fn single(w: i64, m: Mat<Rat>) -> Self {
        let mut forms = BTreeMap::new();
        forms.insert(w, m);
        FormFamily { forms }
    }

    pub fn get(&self, w: i64) -> Option<&Mat<Rat>> {
        self.forms.get(&w)
    }

    /// Shape check against a weight filtration: for every weight that
    /// occurs there must be a form of the graded dimension, with the
    /// right symmetry, and nondegenerate.
    pub fn validate(&self, w: &IncFiltration<Rat>) -> Result<(), String> {
        for wt in w.jumps() {
            let d = w.graded_dim(wt);
            let m = self
                .forms
                .get(&wt)
                .ok_or_else(|| format!("no form supplied for weight {}", wt))?;
            if m.rows != d || m.cols != d {
                return Err(format!(
                    "form at weight {} is {}x{}, graded dimension is {}",
                    wt, m.rows, m.cols, d
                ));
            }
            let t = m.transpose();
            let sym_ok = if wt.rem_euclid(2) == 0 {
                t == *m
            } else {
                t == m.neg()
            };
            if !sym_ok {
                return Err(format!("form at weight {} has the wrong symmetry", wt));
            }
            if m.det().is_zero() {
                return Err(format!("form at weight {} is degenerate", wt));
            }
        }
        Ok(())
    }
}

pub fn is_hermitian(h: &Mat<Gauss>) -> bool {
    h.rows == h.cols && h.conj().transpose() == *h
}

fn leading_block(h: &Mat<Gauss>, k: usize) -> Mat<Gauss> {
    Mat::from_fn(k, k, |i, j| h[(i, j)].clone())
}

/// Exact positive definiteness of a Hermitian matrix, by leading
/// principal minors.  On failure returns a vector v (in the same
/// coordinates) whose metric square v^T H conj(v) is <= 0.
pub fn hermitian_definite(h: &Mat<Gauss>) -> Result<(), Vec<Gauss>> {
    assert!(is_hermitian(h), "hermitian_definite needs a hermitian input");
    let n = h.rows;
    for k in 1..=n {
        let hk = leading_block(h, k);
        let d = hk.det();
        assert!(d.im.is_zero(), "hermitian minor came out complex");
        if d.re > Rat::zero() {
            continue;
        }
        let mut v = vec![gi(0, 0); n];
        if d.re.is_zero() {
            // null vector of the leading block squares to zero
            let ker = kernel_of(&hk);
            let kv = ker.basis().col(0);
            for (j, val) in kv.into_iter().enumerate() {
                v[j] = val.conj();
            }
        } else {
            // (H_k^{-1})_{kk} = det H_{k-1} / det H_k < 0 here
            let inv = hk.inverse().expect("nonzero minor but singular block");
            for j in 0..k {
                v[j] = inv[(j, k - 1)].conj();
            }
        }
        return Err(v);
    }
    Ok(())
}

pub fn quadratic_value(h: &Mat<Gauss>, v: &[Gauss]) -> Gauss {
    let n = h.rows;
    let mut acc = gi(0, 0);
    for i in 0..n {
        for j in 0..n {
            acc = acc + v[i].clone() * h[(i, j)].clone() * v[j].conj();
        }
    }
    acc
}

/// <F^p, F^{w+1-p}> = 0 for all p, everything in ambient coordinates
/// of a pure weight-w instance.
fn isotropy_ok(f: &DecFiltration<Gauss>, s: &Mat<Gauss>, w: i64) -> bool {
    let (lo, hi) = match (f.min_recorded(), f.max_recorded()) {
        (Some(a), Some(b)) => (a.min(w + 1 - b) - 1, b.max(w + 1 - a) + 1),
        _ => return true,
    };
    for p in lo..=hi {
        let a = f.at(p);
        let b = f.at(w + 1 - p);
        if a.dim() == 0 || b.dim() == 0 {
            continue;
        }
        let pairing = a.basis().transpose().mul(s).mul(b.basis());
        if !pairing.is_zero() {
            return false;
        }
    }
    true
}

/// Polarization test for a pure instance: isotropy in complementary
/// Hodge degrees together with exact positive definiteness of the
/// associated metric.
pub fn check_polarization(x: &MHSInstance, forms: &FormFamily) -> Result<bool, String> {
    let wts = x.weights();
    if wts.len() != 1 {
        return Err(format!("instance is not pure (weights {:?})", wts));
    }
    let w = wts[0];
    forms.validate(&x.w)?;
    let rep = validate_mhs(x);
    if !rep.ok {
        return Err(format!("not a Hodge structure: {:?}", rep.failures));
    }
    let s = forms.get(w).unwrap().lift();
    if !isotropy_ok(&x.f, &s, w) {
        return Ok(false);
    }
    let bg = deligne_bigrading(x)?;
    let c = bg.frame().weil_operator();
    let h = c.transpose().mul(&s);
    Ok(hermitian_definite(&h).is_ok())
}

/// Metric matrices per weight (in the graded section coordinates) and
/// the assembled ambient matrix used for orthogonal splittings.
#[derive(Clone, Debug)]
pub struct HodgeMetric {
    pub per_weight: BTreeMap<i64, Mat<Gauss>>,
    pub ambient: Mat<Gauss>,
}

#[derive(Clone, Debug)]
pub struct MetricFailure {
    pub weight: Option<i64>,
    pub witness: Option<Vec<Gauss>>,
    pub msg: String,
}

impl MetricFailure {
    fn plain(msg: String) -> Self {
        MetricFailure {
            weight: None,
            witness: None,
            msg,
        }
    }
}

/// The metric (u,v) = <Cu, conj v> weight by weight, C acting as
/// i^(p-q).  Fails with a witness vector when some graded metric is
/// not positive definite.
pub fn hodge_metric(x: &MHSInstance, forms: &FormFamily) -> Result<HodgeMetric, MetricFailure> {
    let rep = validate_mhs(x);
    if !rep.ok {
        return Err(MetricFailure::plain(format!(
            "not a mixed Hodge structure: {:?}",
            rep.failures
        )));
    }
    forms.validate(&x.w).map_err(MetricFailure::plain)?;
    let n = x.dim;
    let bgx = deligne_bigrading(x).map_err(MetricFailure::plain)?;
    let frx = bgx.frame();
    let mut per_weight = BTreeMap::new();
    let mut ambient = Mat::<Gauss>::zero(n, n);
    for wt in x.w.jumps() {
        let g = graded_instance(x, wt);
        let s = forms.get(wt).unwrap().lift();
        if !isotropy_ok(&g.f, &s, wt) {
            return Err(MetricFailure {
                weight: Some(wt),
                witness: None,
                msg: format!("isotropy fails on gr at weight {}", wt),
            });
        }
        let bg = deligne_bigrading(&g).map_err(MetricFailure::plain)?;
        let c = bg.frame().weil_operator();
        let h = c.transpose().mul(&s);
        assert!(is_hermitian(&h), "graded metric not hermitian");
        if let Err(v) = hermitian_definite(&h) {
            return Err(MetricFailure {
                weight: Some(wt),
                witness: Some(v),
                msg: format!("metric indefinite at weight {}", wt),
            });
        }
        // transport to the ambient space through the weight projector
        let mut pw = Mat::<Gauss>::zero(n, n);
        let mut types_seen: Vec<(i64, i64)> = Vec::new();
        for &(p, q) in &frx.types {
            if p + q == wt && !types_seen.contains(&(p, q)) {
                types_seen.push((p, q));
                pw = pw.add(&frx.projector(p, q));
            }
        }
        let q = Quot::new(&x.w.at(wt).lift(), &x.w.at(wt - 1).lift());
        let mut mw = Mat::zero(q.dim(), n);
        for j in 0..n {
            let mut e = vec![gi(0, 0); n];
            e[j] = gi(1, 0);
            let cls = q.project_vec(&pw.mul_vec(&e));
            for i in 0..q.dim() {
                mw[(i, j)] = cls[i].clone();
            }
        }
        ambient = ambient.add(&mw.transpose().mul(&h).mul(&mw.conj()));
        per_weight.insert(wt, h);
    }
    assert!(is_hermitian(&ambient));
    Ok(HodgeMetric { per_weight, ambient })
}

/// A grading of a weight filtration: one rational subspace per jump,
/// direct sum equal to the whole space, partial sums recovering W.
#[derive(Clone, Debug)]
pub struct Splitting {
    pub grading: BTreeMap<i64, Subspace<Rat>>,
    pub approx: bool,
}

impl PartialEq for Splitting {
    fn eq(&self, other: &Self) -> bool {
        self.grading == other.grading
    }
}

impl Splitting {
    pub fn check(&self, w: &IncFiltration<Rat>) -> bool {
        let n = w.ambient;
        if self.grading.keys().cloned().collect::<Vec<_>>() != w.jumps() {
            return false;
        }
        let parts: Vec<&Subspace<Rat>> = self.grading.values().collect();
        if !is_direct_sum_full(n, &parts) {
            return false;
        }
        let mut acc = Subspace::zero(n);
        for (&j, piece) in &self.grading {
            acc = acc.sum(piece);
            if acc != w.at(j) {
                return false;
            }
        }
        true
    }

    /// Basis columns grouped by weight, ascending.
    pub fn basis_matrix(&self) -> Mat<Rat> {
        let mut cols: Vec<Vec<Rat>> = Vec::new();
        for s in self.grading.values() {
            for j in 0..s.dim() {
                cols.push(s.basis().col(j));
            }
        }
        Mat::from_cols(cols)
    }

    fn conjugated_diag(&self, entry: impl Fn(i64) -> Rat) -> Mat<Rat> {
        let b = self.basis_matrix();
        let binv = b.inverse().expect("splitting basis not invertible");
        let mut weights_per_col = Vec::new();
        for (&j, s) in &self.grading {
            for _ in 0..s.dim() {
                weights_per_col.push(j);
            }
        }
        let n = weights_per_col.len();
        let d = Mat::from_fn(n, n, |r, c| {
            if r == c {
                entry(weights_per_col[r])
            } else {
                Rat::zero()
            }
        });
        b.mul(&d).mul(&binv)
    }

    /// Projector onto the piece of weight j along the others.
    pub fn projector(&self, j: i64) -> Mat<Rat> {
        self.conjugated_diag(|w| if w == j { Rat::one() } else { Rat::zero() })
    }

    /// Semisimple operator acting by the weight on each piece.
    pub fn weight_operator(&self) -> Mat<Rat> {
        self.conjugated_diag(|w| rat(w))
    }

    /// Torus element acting by t^(g(j)) on the weight-j piece.
    pub fn torus(&self, t: &Rat, g: impl Fn(i64) -> i64) -> Mat<Rat> {
        self.conjugated_diag(|w| rat_pow(t, g(w)))
    }

    /// Pulls the graded pieces of a Hodge filtration back through the
    /// grading sections: the result F_hat has the same graded data and
    /// is split by this grading.
    pub fn recombine(
        &self,
        w: &IncFiltration<Rat>,
        f: &DecFiltration<Gauss>,
    ) -> DecFiltration<Gauss> {
        let n = w.ambient;
        let mut piece_data = Vec::new();
        for (&j, vj) in &self.grading {
            let q = Quot::new(&w.at(j).lift(), &w.at(j - 1).lift());
            let bj = vj.basis().lift();
            let cols: Vec<Vec<Gauss>> = (0..vj.dim()).map(|c| q.project_vec(&bj.col(c))).collect();
            let phi = Mat::from_cols(cols);
            let phi_inv = phi.inverse().expect("grading piece does not map onto gr");
            piece_data.push((bj, phi_inv, q));
        }
        let mut steps = BTreeMap::new();
        for p in f.recorded() {
            let mut gens: Vec<Vec<Gauss>> = Vec::new();
            for (bj, phi_inv, q) in &piece_data {
                let fp_gr = q.project_subspace(&f.at(p));
                let lifted = bj.mul(phi_inv).mul(fp_gr.basis());
                for c in 0..lifted.cols {
                    gens.push(lifted.col(c));
                }
            }
            steps.insert(p, Subspace::from_vecs(n, gens));
        }
        DecFiltration::new(n, steps)
    }
}

pub fn rat_pow(t: &Rat, e: i64) -> Rat {
    let mut acc = Rat::one();
    for _ in 0..e.unsigned_abs() {
        acc *= t.clone();
    }
    if e < 0 {
        acc = acc.recip();
    }
    acc
}

/// Splits W by orthogonal complements for the real part of the metric,
/// bottom weight first: V_[j] = W_j meet (W_{j-1} perp).
pub fn orth_splitting(
    w_target: &IncFiltration<Rat>,
    metric: &Mat<Gauss>,
) -> Result<Splitting, String> {
    if !is_hermitian(metric) {
        return Err("metric is not hermitian".to_string());
    }
    let g = metric.re_part();
    if hermitian_definite(&g.lift()).is_err() {
        return Err("metric is not positive definite on the real space".to_string());
    }
    let mut grading = BTreeMap::new();
    for j in w_target.jumps() {
        let below = w_target.at(j - 1);
        let perp = kernel_of(&below.basis().transpose().mul(&g));
        grading.insert(j, w_target.at(j).intersect(&perp));
    }
    let spl = Splitting {
        grading,
        approx: false,
    };
    if !spl.check(w_target) {
        return Err("orthogonal complements do not split the filtration".to_string());
    }
    Ok(spl)
}

#[derive(Clone, Debug)]
pub struct LimitReport {
    pub splitting: Splitting,
    pub steps_used: usize,
    pub last_diff: f64,
}

/// Follows the orthogonal splittings of w_target at exp(iyN)F along
/// y = 2^k.  Iterates are exact; tol only decides when two successive
/// splittings are close enough to stop.  The approx flag is cleared
/// only when two successive splittings agree exactly.
pub fn limit_splitting(
    nmat: &Mat<Rat>,
    x: &MHSInstance,
    forms: &FormFamily,
    w_target: &IncFiltration<Rat>,
    tol: f64,
    max_iter: usize,
) -> Result<LimitReport, String> {
    assert!(
        nmat.nilpotency_index().is_some(),
        "limit_splitting direction must be nilpotent"
    );
    let ni = nmat.lift().scale(&gi(0, 1));
    let mut prev: Option<Splitting> = None;
    let mut y = rat(1);
    for k in 0..=max_iter {
        let e = ni.scale(&glift(&y)).exp_nilpotent();
        let fy = x.f.apply(&e);
        let xy = MHSInstance::new(x.dim, x.w.clone(), fy);
        let mut cur: Option<Splitting> = None;
        if validate_mhs(&xy).ok {
            if let Ok(hm) = hodge_metric(&xy, forms) {
                if let Ok(spl) = orth_splitting(w_target, &hm.ambient) {
                    cur = Some(spl);
                }
            }
        }
        match (prev, cur) {
            (Some(p), Some(c)) => {
                if p == c {
                    return Ok(LimitReport {
                        splitting: Splitting {
                            grading: c.grading,
                            approx: false,
                        },
                        steps_used: k,
                        last_diff: 0.0,
                    });
                }
                let d = splitting_diff(&p, &c);
                if d < tol {
                    return Ok(LimitReport {
                        splitting: Splitting {
                            grading: c.grading,
                            approx: true,
                        },
                        steps_used: k,
                        last_diff: d,
                    });
                }
                prev = Some(c);
            }
            (_, c) => prev = c,
        }
        y *= rat(2);
    }
    Err(format!(
        "orthogonal splittings did not converge within {} doublings",
        max_iter
    ))
}

fn splitting_diff(a: &Splitting, b: &Splitting) -> f64 {
    let ka: Vec<i64> = a.grading.keys().cloned().collect();
    let kb: Vec<i64> = b.grading.keys().cloned().collect();
    if ka != kb {
        return f64::INFINITY;
    }
    for k in &ka {
        if a.grading[k].dim() != b.grading[k].dim() {
            return f64::INFINITY;
        }
    }
    let ma = a.basis_matrix();
    let mb = b.basis_matrix();
    ma.sub(&mb).max_abs_f64(rat_to_f64)
}

/// Classical membership data: a weight filtration, forms, and required
/// graded Hodge numbers h^{p,q}.  A filtration F belongs iff the Hodge
/// numbers match and every graded piece is polarized by its form.
pub fn classify_point_dlambda(
    w: &IncFiltration<Rat>,
    forms: &FormFamily,
    hodge_numbers: &BTreeMap<(i64, i64), usize>,
    f: &DecFiltration<Gauss>,
) -> bool {
    if w.validate().is_err() || f.validate().is_err() {
        return false;
    }
    if forms.validate(w).is_err() {
        return false;
    }
    let x = MHSInstance::new(w.ambient, w.clone(), f.clone());
    if !validate_mhs(&x).ok {
        return false;
    }
    let mut seen: BTreeMap<(i64, i64), usize> = BTreeMap::new();
    for wt in x.weights() {
        let g = graded_instance(&x, wt);
        let bg = match deligne_bigrading(&g) {
            Ok(b) => b,
            Err(_) => return false,
        };
        for (&(p, q), s) in &bg.pieces {
            if s.dim() > 0 {
                *seen.entry((p, q)).or_insert(0) += s.dim();
            }
        }
        let fam = FormFamily::single(wt, forms.get(wt).unwrap().clone());
        match check_polarization(&g, &fam) {
            Ok(true) => {}
            _ => return false,
        }
    }
    let want: BTreeMap<(i64, i64), usize> = hodge_numbers
        .iter()
        .filter(|(_, &v)| v > 0)
        .map(|(&k, &v)| (k, v))
        .collect();
    seen == want
}

/// Certificate that the form family is invariant under the given
/// generators and polarizes x.  A generator counts as invariant if it
/// fixes the graded form as a group element (g^T S g = S) or
/// infinitesimally (g^T S + S g = 0); supplied families mix group and
/// Lie elements in practice, so both readings are accepted.
pub fn verify_invariant_polarization(
    forms: &FormFamily,
    gens: &[Mat<Rat>],
    x: &MHSInstance,
) -> Result<bool, String> {
    for g in gens {
        for j in x.w.jumps() {
            let wj = x.w.at(j);
            if !wj.contains(&wj.apply(g)) {
                return Err(format!("a generator does not preserve W_{}", j));
            }
        }
    }
    forms.validate(&x.w)?;
    for wt in x.weights() {
        let s = forms.get(wt).unwrap();
        let q = Quot::new(&x.w.at(wt), &x.w.at(wt - 1));
        for g in gens {
            let gw = q.induced_map(g);
            let fixed = gw.transpose().mul(s).mul(&gw) == *s;
            let inf = gw.transpose().mul(s).add(&s.mul(&gw)).is_zero();
            if !fixed && !inf {
                return Ok(false);
            }
        }
        let gi_inst = graded_instance(x, wt);
        let fam = FormFamily::single(wt, s.clone());
        if !check_polarization(&gi_inst, &fam)? {
            return Ok(false);
        }
    }
    Ok(true)
}
