//! Association of SL(2) data to a degenerating family: the chain of
//! weight filtrations of partial sums, the split filtrations produced
//! by the descending limit splittings, torus gradings, modified
//! generators and the base point.  The numeric content is confined to
//! the stopping rule of the limit splittings; everything stored is
//! exact rational data with an approximation flag.

use crate::filtration::{DecFiltration, IncFiltration};
use crate::mat::Mat;
use crate::mhs::{validate_mhs, MHSInstance};
use crate::monodromy::{rel_monodromy, NilpotentConeInstance, RelMonodromy};
use crate::nilporb::{generates_nilpotent_orbit, Verdict};
use crate::polarized::{limit_splitting, FormFamily, Splitting};
use crate::scalar::{gi, rat, Gauss, Rat};
use num::traits::Zero;
use num::BigRational;

#[derive(Clone, Debug)]
pub struct WeightChain {
    /// W^(0) .. W^(n), where W^(j) is relative to the sum of the first
    /// j generators
    pub filtrations: Vec<IncFiltration<Rat>>,
    pub rank: usize,
    /// 1-based positions j where W^(j) differs from W^(j-1), increasing
    pub s_indices: Vec<usize>,
}

pub fn weight_chain(
    generators: &[Mat<Rat>],
    w: &IncFiltration<Rat>,
) -> Result<WeightChain, String> {
    let dim = w.ambient;
    let mut filtrations = vec![w.clone()];
    let mut partial = Mat::zero(dim, dim);
    let mut s_indices = Vec::new();
    for (j, g) in generators.iter().enumerate() {
        partial = partial.add(g);
        match rel_monodromy(&partial, w)? {
            RelMonodromy::Exists(m) => {
                if m != filtrations[j] {
                    s_indices.push(j + 1);
                }
                filtrations.push(m);
            }
            RelMonodromy::NonExistent { witness } => {
                return Err(format!(
                    "no relative weight filtration at step {}: {}",
                    j + 1,
                    witness
                ));
            }
            RelMonodromy::Undecided { note } => {
                return Err(format!(
                    "relative weight filtration undecided at step {}: {}",
                    j + 1,
                    note
                ));
            }
        }
    }
    Ok(WeightChain {
        rank: s_indices.len(),
        filtrations,
        s_indices,
    })
}

/// Dimension-weighted mean and variance of the graded weights, per
/// chain member, all exact.
#[derive(Clone, Debug)]
pub struct VarianceProfile {
    pub moments: Vec<(Rat, Rat)>,
    pub mean_constant: bool,
    pub monotone: bool,
    /// every pair of distinct consecutive filtrations shows a strict
    /// variance increase
    pub strict_at_jumps: bool,
}

fn filtration_moments(w: &IncFiltration<Rat>) -> (Rat, Rat) {
    let dim = w.ambient as i64;
    assert!(dim > 0, "moments of an empty space");
    let mut first = BigRational::zero();
    let mut second = BigRational::zero();
    for j in w.jumps() {
        let d = w.graded_dim(j) as i64;
        first += BigRational::from_integer((j * d).into());
        second += BigRational::from_integer((j * j * d).into());
    }
    let n = BigRational::from_integer(dim.into());
    let mean = first / n.clone();
    let var = second / n - mean.clone() * mean.clone();
    (mean, var)
}

pub fn variance_profile(chain: &WeightChain, include_w0: bool) -> VarianceProfile {
    let start = if include_w0 { 0 } else { 1 };
    let members = &chain.filtrations[start.min(chain.filtrations.len())..];
    let moments: Vec<(Rat, Rat)> = members.iter().map(filtration_moments).collect();
    let mut mean_constant = true;
    let mut monotone = true;
    let mut strict_at_jumps = true;
    for i in 1..moments.len() {
        if moments[i].0 != moments[0].0 {
            mean_constant = false;
        }
        if moments[i].1 < moments[i - 1].1 {
            monotone = false;
        }
        if members[i] != members[i - 1] && moments[i].1 <= moments[i - 1].1 {
            strict_at_jumps = false;
        }
    }
    VarianceProfile {
        moments,
        mean_constant,
        monotone,
        strict_at_jumps,
    }
}

/// Everything the association produces.  Indexing follows the descent:
/// entry j of f_hat and tau_gradings belongs to W^(j), for j from 0 to
/// the number of generators.
#[derive(Clone, Debug)]
pub struct SL2OrbitData {
    pub w_chain: Vec<IncFiltration<Rat>>,
    pub f_hat: Vec<DecFiltration<Gauss>>,
    pub f_hat_approx: Vec<bool>,
    pub tau_gradings: Vec<Splitting>,
    pub n_hat: Vec<Mat<Rat>>,
    pub rank: usize,
    pub s_indices: Vec<usize>,
    pub r_point: DecFiltration<Gauss>,
    pub r_approx: bool,
    /// true when the first nonzero generator acts trivially on gr^W
    pub b_orbit: bool,
    pub notes: Vec<String>,
}

/// Component of ad-weight c of x with respect to a grading: the part
/// mapping the weight-k piece into the weight-(k+c) piece, summed over k.
pub fn ad_component(x: &Mat<Rat>, spl: &Splitting, c: i64) -> Mat<Rat> {
    let mut acc = Mat::zero(x.rows, x.cols);
    let keys: Vec<i64> = spl.grading.keys().cloned().collect();
    for &k in &keys {
        if !spl.grading.contains_key(&(k + c)) {
            continue;
        }
        acc = acc.add(&spl.projector(k + c).mul(x).mul(&spl.projector(k)));
    }
    acc
}

fn gr_w_vanishes(n: &Mat<Rat>, w: &IncFiltration<Rat>) -> bool {
    for j in w.jumps() {
        let img = w.at(j).apply(n);
        if !w.at(j - 1).contains(&img) {
            return false;
        }
    }
    true
}

/// The descent.  Requires the generators and base filtration to
/// generate a nilpotent orbit; fails with the step index when a limit
/// splitting does not converge within the iteration budget.
pub fn associate_sl2(
    generators: &[Mat<Rat>],
    x: &MHSInstance,
    forms: &FormFamily,
    tol: f64,
    max_iter: usize,
    seed: u64,
) -> Result<SL2OrbitData, String> {
    let dim = x.dim;
    let cone = NilpotentConeInstance::new(dim, generators.to_vec(), "sl2assoc");
    let dec = generates_nilpotent_orbit(&cone, x, forms, seed)?;
    match dec.verdict {
        Verdict::Yes => {}
        Verdict::No => {
            return Err(format!(
                "input does not generate a nilpotent orbit: {}",
                dec.evidence.join(" | ")
            ));
        }
        Verdict::Undecided => {
            return Err("nilpotent orbit precondition undecided".to_string());
        }
    }
    let n = generators.len();
    let chain = weight_chain(generators, &x.w)?;
    let mut partial_sums = vec![Mat::zero(dim, dim)];
    for g in generators {
        let next = partial_sums.last().unwrap().add(g);
        partial_sums.push(next);
    }

    let mut f_hat: Vec<Option<DecFiltration<Gauss>>> = vec![None; n + 1];
    let mut f_hat_approx = vec![false; n + 1];
    let mut tau: Vec<Option<Splitting>> = vec![None; n + 1];
    let mut notes = Vec::new();
    let mut g_cur = x.f.clone();
    for j in (0..=n).rev() {
        let pair = MHSInstance::new(dim, chain.filtrations[j].clone(), g_cur.clone());
        let v = validate_mhs(&pair);
        if !v.ok {
            return Err(format!(
                "descent step {}: pair is not a mixed Hodge structure: {}",
                j,
                v.failures.join("; ")
            ));
        }
        let metric_inst = MHSInstance::new(dim, x.w.clone(), g_cur.clone());
        let rep = limit_splitting(
            &partial_sums[j],
            &metric_inst,
            forms,
            &chain.filtrations[j],
            tol,
            max_iter,
        )
        .map_err(|e| format!("descent step {}: {}", j, e))?;
        let split = rep.splitting;
        let fh = split.recombine(&chain.filtrations[j], &g_cur);
        f_hat_approx[j] = split.approx;
        f_hat[j] = Some(fh.clone());
        tau[j] = Some(split);
        if j > 0 {
            let e = generators[j - 1].lift().scale(&gi(0, 1)).exp_nilpotent();
            g_cur = fh.apply(&e);
        }
    }
    let f_hat: Vec<DecFiltration<Gauss>> = f_hat.into_iter().map(|o| o.unwrap()).collect();
    let tau_gradings: Vec<Splitting> = tau.into_iter().map(|o| o.unwrap()).collect();

    let mut n_hat = Vec::new();
    for j in 1..=n {
        let mut xj = generators[j - 1].clone();
        for s in 1..j {
            xj = ad_component(&xj, &tau_gradings[s], 0);
        }
        let lowers = ad_component(&xj, &tau_gradings[j], -2) == xj;
        notes.push(format!(
            "modified generator {}: pure lowering weight for its grading: {}",
            j, lowers
        ));
        n_hat.push(xj);
    }

    let first_nonzero = generators.iter().position(|g| !g.is_zero());
    let (r_point, r_approx, b_orbit) = match first_nonzero {
        None => (x.f.clone(), false, false),
        Some(k0) => {
            let k = k0 + 1;
            let e = generators[k0].lift().scale(&gi(0, 1)).exp_nilpotent();
            let r = f_hat[k].apply(&e);
            let b = gr_w_vanishes(&generators[k0], &x.w);
            (r, f_hat_approx[k], b)
        }
    };

    Ok(SL2OrbitData {
        w_chain: chain.filtrations,
        f_hat,
        f_hat_approx,
        tau_gradings,
        n_hat,
        rank: chain.rank,
        s_indices: chain.s_indices,
        r_point,
        r_approx,
        b_orbit,
        notes,
    })
}

/// Regroups a torus tuple along the jump indices: the k-th entry of
/// the result is the product of t_j over s(k) <= j < s(k+1), with
/// s(r+1) one past the number of generators.  For the B-orbit shape an
/// extra leading entry collects the factors before the first jump.
pub fn tau_reindex(
    t: &[Rat],
    s_indices: &[usize],
    b_orbit: bool,
) -> Result<Vec<Rat>, String> {
    let n = t.len();
    let r = s_indices.len();
    for win in s_indices.windows(2) {
        if win[0] >= win[1] {
            return Err("jump indices not increasing".to_string());
        }
    }
    if s_indices.iter().any(|&s| s < 1 || s > n) {
        return Err("jump index out of range".to_string());
    }
    let mut out = Vec::new();
    if b_orbit {
        let s1 = s_indices.first().copied().unwrap_or(n + 1);
        let mut acc = rat(1);
        for tj in t.iter().take(s1 - 1) {
            acc *= tj.clone();
        }
        out.push(acc);
    }
    for k in 0..r {
        let lo = s_indices[k];
        let hi = if k + 1 < r { s_indices[k + 1] } else { n + 1 };
        let mut acc = rat(1);
        for tj in t.iter().take(hi - 1).skip(lo - 1) {
            acc *= tj.clone();
        }
        out.push(acc);
    }
    Ok(out)
}
