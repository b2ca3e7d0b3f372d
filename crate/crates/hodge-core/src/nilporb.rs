//! The nilpotent orbit decision.  A commuting cone of nilpotent
//! endomorphisms together with a filtered instance either generates an
//! orbit or it does not, and the answer here is assembled from exact
//! finite checks: transversality of every generator, admissibility of
//! the weight family over all faces, and polarization of the primitive
//! parts in each pure graded piece for an interior element.  Numeric
//! ray sampling is kept separate as a necessary-condition oracle.

use crate::filtration::DecFiltration;
use crate::mat::Mat;
use crate::mhs::{graded_instance, validate_mhs, MHSInstance};
use crate::monodromy::{cone_weight_family, monodromy_filtration, NilpotentConeInstance};
use crate::polarized::{check_polarization, FormFamily};
use crate::scalar::{gauss, rat, Gauss, Rat};
use crate::subspace::Quot;
use rand::prelude::*;
use rand_chacha::ChaCha8Rng;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Verdict {
    Yes,
    No,
    Undecided,
}

impl std::fmt::Display for Verdict {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Verdict::Yes => write!(f, "yes"),
            Verdict::No => write!(f, "no"),
            Verdict::Undecided => write!(f, "undecided"),
        }
    }
}

/// Outcome of the orbit test with one evidence line per sub-check.
#[derive(Clone, Debug)]
pub struct OrbitDecision {
    pub verdict: Verdict,
    pub evidence: Vec<String>,
}

fn transversality_witness(
    cone: &NilpotentConeInstance,
    f: &DecFiltration<Gauss>,
) -> Option<String> {
    for (gi_idx, g) in cone.generators.iter().enumerate() {
        let gg = g.lift();
        for p in f.recorded() {
            let fp = f.at(p);
            if fp.dim() == 0 {
                continue;
            }
            let img = fp.apply(&gg);
            if !f.at(p - 1).contains(&img) {
                return Some(format!(
                    "generator {} does not map F^{} into F^{}",
                    gi_idx,
                    p,
                    p - 1
                ));
            }
        }
    }
    None
}

/// Every generator lowers the Hodge filtration by at most one step.
pub fn griffiths_transversal(cone: &NilpotentConeInstance, f: &DecFiltration<Gauss>) -> bool {
    transversality_witness(cone, f).is_none()
}

/// Per-level record of the pure weight-k test for a single nilpotent.
#[derive(Clone, Debug)]
pub struct PureOrbitReport {
    pub weight: i64,
    pub ok: bool,
    pub notes: Vec<String>,
}

/// Exact orbit criterion in the pure case: the limit filtration pairs
/// with F into a mixed Hodge structure and every primitive part
/// carries a definite twisted form.  The twisted form is evaluated on
/// section representatives, and its independence of the choice is
/// checked against the step below, not assumed.
pub fn pure_orbit_test(
    n: &Mat<Rat>,
    f: &DecFiltration<Gauss>,
    k: i64,
    form: &FormFamily,
) -> PureOrbitReport {
    let dim = n.rows;
    let mut rep = PureOrbitReport {
        weight: k,
        ok: true,
        notes: Vec::new(),
    };
    let s = match form.get(k) {
        Some(s) if s.rows == dim && s.cols == dim => s.clone(),
        Some(_) => {
            rep.ok = false;
            rep.notes.push("form has the wrong size".to_string());
            return rep;
        }
        None => {
            rep.ok = false;
            rep.notes
                .push(format!("no form supplied for weight {}", k));
            return rep;
        }
    };
    if dim == 0 {
        rep.notes.push("zero space, nothing to check".to_string());
        return rep;
    }
    let m = monodromy_filtration(n, k);
    let limit = MHSInstance::new(dim, m.clone(), f.clone());
    let v = validate_mhs(&limit);
    if !v.ok {
        rep.ok = false;
        rep.notes.push(format!(
            "limit filtration does not pair into a mixed Hodge structure: {}",
            v.failures.join("; ")
        ));
        return rep;
    }
    rep.notes
        .push("limit mixed Hodge structure: ok".to_string());
    let top = m.max_recorded().unwrap_or(k);
    let mut npow = Mat::identity(dim);
    for l in 0..=(top - k).max(0) {
        // npow is n^l at this point
        let q_top = Quot::new(&m.at(k + l), &m.at(k + l - 1));
        if q_top.dim() == 0 {
            npow = npow.mul(n);
            continue;
        }
        // well-definedness of <u, n^l v> on classes mod M_{k+l-1}
        let below = m.at(k + l - 1);
        let here = m.at(k + l);
        let s_npow = s.mul(&npow);
        if below.dim() > 0 {
            let a = below.basis().transpose().mul(&s_npow).mul(here.basis());
            let b = here.basis().transpose().mul(&s_npow).mul(below.basis());
            if !a.is_zero() || !b.is_zero() {
                rep.ok = false;
                rep.notes.push(format!(
                    "level {}: twisted pairing not well defined on the graded quotient",
                    l
                ));
                npow = npow.mul(n);
                continue;
            }
        }
        // primitive part: kernel of n^(l+1) from gr_{k+l} to gr_{k-l-2}
        let q_bot = Quot::new(&m.at(k - l - 2), &m.at(k - l - 3));
        let down = q_bot.map_from(&q_top, &npow.mul(n));
        let prim = crate::subspace::kernel_of(&down);
        if prim.dim() == 0 {
            rep.notes
                .push(format!("level {}: primitive part is zero", l));
            npow = npow.mul(n);
            continue;
        }
        // twisted form on the primitive part, via section representatives
        let reps: Vec<Vec<Rat>> = (0..prim.dim())
            .map(|j| q_top.include(&prim.basis().col(j)))
            .collect();
        let rmat = Mat::from_cols(reps);
        let s_prim = rmat.transpose().mul(&s_npow).mul(&rmat);
        // Hodge filtration restricted to the primitive part
        let q_top_c = Quot::new(&m.at(k + l).lift(), &m.at(k + l - 1).lift());
        let f_gr = f.in_quot(&q_top_c);
        let bmat = prim.basis().lift();
        let mut steps = std::collections::BTreeMap::new();
        for p in f_gr.recorded() {
            steps.insert(p, f_gr.at(p).preimage(&bmat));
        }
        let f_prim = DecFiltration::new(prim.dim(), steps);
        let inst = MHSInstance::pure(prim.dim(), k + l, f_prim);
        match check_polarization(&inst, &FormFamily::single(k + l, s_prim)) {
            Ok(true) => {
                rep.notes.push(format!(
                    "level {}: primitive part of dimension {} polarized",
                    l,
                    prim.dim()
                ));
            }
            Ok(false) => {
                rep.ok = false;
                rep.notes.push(format!(
                    "level {}: twisted form on the primitive part is not a polarization",
                    l
                ));
            }
            Err(e) => {
                rep.ok = false;
                rep.notes.push(format!("level {}: {}", l, e));
            }
        }
        npow = npow.mul(n);
    }
    rep
}

/// The full decision: transversality, admissibility of the face weight
/// family, and the pure criterion on each weight graded piece for a few
/// interior elements of the cone.
pub fn generates_nilpotent_orbit(
    cone: &NilpotentConeInstance,
    x: &MHSInstance,
    forms: &FormFamily,
    seed: u64,
) -> Result<OrbitDecision, String> {
    cone.validate(Some(&x.w))?;
    forms.validate(&x.w)?;
    if cone.dim != x.dim {
        return Err("cone and instance dimensions differ".to_string());
    }
    let mut evidence = Vec::new();
    let mut definite_no = false;
    let mut undecided = false;

    match transversality_witness(cone, &x.f) {
        None => evidence.push("transversality: ok".to_string()),
        Some(wit) => {
            definite_no = true;
            evidence.push(format!("transversality: {}", wit));
        }
    }

    let cwf = cone_weight_family(cone, &x.w, seed)?;
    if cwf.admissible {
        evidence.push(format!(
            "weight family: admissible over {} faces",
            cwf.faces.len()
        ));
    } else if cwf.undecided {
        undecided = true;
        evidence.push(format!(
            "weight family: undecided ({})",
            cwf.witness.as_deref().unwrap_or("no note")
        ));
    } else {
        definite_no = true;
        evidence.push(format!(
            "weight family: not admissible ({})",
            cwf.witness.as_deref().unwrap_or("no note")
        ));
    }

    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x6f72_6269);
    for sample in 0..3 {
        let coeffs: Vec<Rat> = (0..cone.generators.len())
            .map(|_| {
                if sample == 0 {
                    rat(1)
                } else {
                    rat(rng.gen_range(1..=7))
                }
            })
            .collect();
        let n = cone.element(&coeffs);
        for w in x.w.jumps() {
            let q = Quot::new(&x.w.at(w), &x.w.at(w - 1));
            if q.dim() == 0 {
                continue;
            }
            let n_gr = q.induced_map(&n);
            let xg = graded_instance(x, w);
            let rep = pure_orbit_test(&n_gr, &xg.f, w, forms);
            if rep.ok {
                if sample == 0 {
                    evidence.push(format!("weight {}: {}", w, rep.notes.join("; ")));
                }
            } else {
                definite_no = true;
                evidence.push(format!(
                    "weight {} (interior sample {}): {}",
                    w,
                    sample,
                    rep.notes.join("; ")
                ));
            }
        }
    }

    let verdict = if definite_no {
        Verdict::No
    } else if undecided {
        Verdict::Undecided
    } else {
        Verdict::Yes
    };
    Ok(OrbitDecision { verdict, evidence })
}

/// Necessary-condition sampler: walk a grid of imaginary displacements
/// along the diagonal direction of the cone and test membership of the
/// translated filtration.  A false is a definitive failure somewhere on
/// the grid; a true is only evidence.
pub fn ray_sample_check(
    cone: &NilpotentConeInstance,
    x: &MHSInstance,
    forms: &FormFamily,
    y_grid: &[Rat],
) -> bool {
    let ngen = cone.generators.len();
    for y in y_grid {
        let coeffs: Vec<Rat> = (0..ngen).map(|_| y.clone()).collect();
        let n = cone.element(&coeffs);
        let ng = n.lift().scale(&gauss(rat(0), rat(1)));
        let e = ng.exp_nilpotent();
        let fy = x.f.apply(&e);
        let inst = MHSInstance::new(x.dim, x.w.clone(), fy);
        if !validate_mhs(&inst).ok {
            return false;
        }
        for w in x.w.jumps() {
            if x.w.graded_dim(w) == 0 {
                continue;
            }
            let xg = graded_instance(&inst, w);
            let s = match forms.get(w) {
                Some(s) => s.clone(),
                None => return false,
            };
            match check_polarization(&xg, &FormFamily::single(w, s)) {
                Ok(true) => {}
                _ => return false,
            }
        }
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::filtration::IncFiltration;
    use crate::mhs::{elliptic, hodge_tate};
    use crate::scalar::gi;
    use crate::subspace::Subspace;
    use std::collections::BTreeMap;

    fn e12(d: usize, i: usize, j: usize) -> Mat<Rat> {
        Mat::from_fn(d, d, |r, c| if r == i && c == j { rat(1) } else { rat(0) })
    }

    fn symp2() -> Mat<Rat> {
        Mat::from_rows(vec![vec![rat(0), rat(-1)], vec![rat(1), rat(0)]])
    }

    #[test]
    fn transversality_cases() {
        let x = elliptic(gi(0, 1));
        let cone = NilpotentConeInstance::new(2, vec![e12(2, 0, 1)], "ell");
        assert!(griffiths_transversal(&cone, &x.f));
        let zero = NilpotentConeInstance::new(2, vec![Mat::zero(2, 2)], "z");
        assert!(griffiths_transversal(&zero, &x.f));

        // two-step filtration dropped by more than one
        let mut steps = BTreeMap::new();
        steps.insert(0, Subspace::full(2));
        steps.insert(
            1,
            Subspace::from_vecs(2, vec![vec![gi(1, 0), gi(0, 0)]]),
        );
        steps.insert(
            2,
            Subspace::from_vecs(2, vec![vec![gi(1, 0), gi(0, 0)]]),
        );
        let f = DecFiltration::new(2, steps);
        let bad = NilpotentConeInstance::new(2, vec![e12(2, 1, 0)], "bad");
        assert!(!griffiths_transversal(&bad, &f));
    }

    #[test]
    fn pure_test_elliptic_and_flip() {
        let x = elliptic(gi(0, 1));
        let forms = FormFamily::single(1, symp2());
        let n = e12(2, 0, 1);
        let rep = pure_orbit_test(&n, &x.f, 1, &forms);
        assert!(rep.ok, "{:?}", rep.notes);
        let rep = pure_orbit_test(&n.neg(), &x.f, 1, &forms);
        assert!(!rep.ok);
    }

    #[test]
    fn pure_test_zero_nilpotent_is_membership() {
        let x = elliptic(gi(0, 1));
        let forms = FormFamily::single(1, symp2());
        let rep = pure_orbit_test(&Mat::zero(2, 2), &x.f, 1, &forms);
        assert!(rep.ok, "{:?}", rep.notes);
        // lower half plane point is an unpolarized Hodge structure
        let y = elliptic(gi(0, -1));
        let rep = pure_orbit_test(&Mat::zero(2, 2), &y.f, 1, &forms);
        assert!(!rep.ok);
    }

    #[test]
    fn decision_elliptic_yes_and_flip_no() {
        let x = elliptic(gi(0, 1));
        let forms = FormFamily::single(1, symp2());
        let cone = NilpotentConeInstance::new(2, vec![e12(2, 0, 1)], "ell");
        let d = generates_nilpotent_orbit(&cone, &x, &forms, 7).unwrap();
        assert_eq!(d.verdict, Verdict::Yes, "{:?}", d.evidence);
        let flip = NilpotentConeInstance::new(2, vec![e12(2, 0, 1).neg()], "flip");
        let d = generates_nilpotent_orbit(&flip, &x, &forms, 7).unwrap();
        assert_eq!(d.verdict, Verdict::No);
    }

    #[test]
    fn decision_invariant_under_presentation() {
        let x = elliptic(gi(0, 1));
        let forms = FormFamily::single(1, symp2());
        let n = e12(2, 0, 1);
        for gens in [
            vec![n.scale(&rat(3))],
            vec![n.clone(), n.scale(&rat(2))],
        ] {
            let cone = NilpotentConeInstance::new(2, gens, "ell");
            let d = generates_nilpotent_orbit(&cone, &x, &forms, 11).unwrap();
            assert_eq!(d.verdict, Verdict::Yes, "{:?}", d.evidence);
        }
    }

    #[test]
    fn decision_mixed_hodge_tate() {
        let x = hodge_tate(gi(2, 5));
        let mut fs = BTreeMap::new();
        fs.insert(0, Mat::from_rows(vec![vec![rat(1)]]));
        fs.insert(2, Mat::from_rows(vec![vec![rat(1)]]));
        let forms = FormFamily::new(fs);
        let cone = NilpotentConeInstance::new(2, vec![e12(2, 0, 1)], "ht");
        let d = generates_nilpotent_orbit(&cone, &x, &forms, 3).unwrap();
        assert_eq!(d.verdict, Verdict::Yes, "{:?}", d.evidence);
    }

    #[test]
    fn decision_product_cone_and_blockwise() {
        // two elliptic blocks, one ray per block
        let n1 = e12(4, 0, 1);
        let n2 = e12(4, 2, 3);
        let f1 = |tau: Gauss| {
            let mut steps = BTreeMap::new();
            steps.insert(0, Subspace::full(4));
            steps.insert(
                1,
                Subspace::from_vecs(
                    4,
                    vec![
                        vec![tau.clone(), gi(1, 0), gi(0, 0), gi(0, 0)],
                        vec![gi(0, 0), gi(0, 0), tau.clone(), gi(1, 0)],
                    ],
                ),
            );
            DecFiltration::new(4, steps)
        };
        let s4 = Mat::from_rows(vec![
            vec![rat(0), rat(-1), rat(0), rat(0)],
            vec![rat(1), rat(0), rat(0), rat(0)],
            vec![rat(0), rat(0), rat(0), rat(-1)],
            vec![rat(0), rat(0), rat(1), rat(0)],
        ]);
        let x = MHSInstance::pure(4, 1, f1(gi(0, 1)));
        let forms = FormFamily::single(1, s4);
        let cone = NilpotentConeInstance::new(4, vec![n1.clone(), n2.clone()], "prod");
        let d = generates_nilpotent_orbit(&cone, &x, &forms, 5).unwrap();
        assert_eq!(d.verdict, Verdict::Yes, "{:?}", d.evidence);

        // flipping one block breaks the conjunction
        let cone_bad = NilpotentConeInstance::new(4, vec![n1, n2.neg()], "prodbad");
        let d = generates_nilpotent_orbit(&cone_bad, &x, &forms, 5).unwrap();
        assert_eq!(d.verdict, Verdict::No);
    }

    #[test]
    fn ray_samples_match_decision() {
        let x = elliptic(gi(0, 1));
        let forms = FormFamily::single(1, symp2());
        let grid: Vec<Rat> = vec![rat(1), rat(2), rat(4), rat(8)];
        let cone = NilpotentConeInstance::new(2, vec![e12(2, 0, 1)], "ell");
        assert!(ray_sample_check(&cone, &x, &forms, &grid));
        let flip = NilpotentConeInstance::new(2, vec![e12(2, 0, 1).neg()], "flip");
        assert!(!ray_sample_check(&flip, &x, &forms, &grid));
    }

    #[test]
    fn zero_cone_reduces_to_membership() {
        let x = elliptic(gi(0, 1));
        let forms = FormFamily::single(1, symp2());
        let zero = NilpotentConeInstance::new(2, vec![Mat::zero(2, 2)], "z");
        let d = generates_nilpotent_orbit(&zero, &x, &forms, 1).unwrap();
        assert_eq!(d.verdict, Verdict::Yes, "{:?}", d.evidence);
        let y = elliptic(gi(0, -1));
        let d = generates_nilpotent_orbit(&zero, &y, &forms, 1).unwrap();
        assert_eq!(d.verdict, Verdict::No);
        assert!(ray_sample_check(&zero, &x, &forms, &[rat(1)]));
        assert!(!ray_sample_check(&zero, &y, &forms, &[rat(1)]));
    }

    #[test]
    fn weight_crossing_cone_not_admissible() {
        // weight filtration crossed by the nilpotent as in the
        // refuted relative case, padded so both graded pieces carry
        // nondegenerate forms of the right symmetry
        let mut wsteps = BTreeMap::new();
        wsteps.insert(0, Subspace::from_vecs(3, vec![vec![rat(1), rat(0), rat(0)]]));
        wsteps.insert(1, Subspace::full(3));
        let w = IncFiltration::new(3, wsteps);
        let mut fsteps = BTreeMap::new();
        fsteps.insert(0, Subspace::full(3));
        fsteps.insert(
            1,
            Subspace::from_vecs(3, vec![vec![gi(0, 0), gi(0, 1), gi(1, 0)]]),
        );
        let f = DecFiltration::new(3, fsteps);
        let x = MHSInstance::new(3, w, f);
        let mut fs = BTreeMap::new();
        fs.insert(0, Mat::from_rows(vec![vec![rat(1)]]));
        fs.insert(1, symp2());
        let forms = FormFamily::new(fs);
        let cone = NilpotentConeInstance::new(3, vec![e12(3, 0, 1)], "cross");
        let d = generates_nilpotent_orbit(&cone, &x, &forms, 2).unwrap();
        assert_eq!(d.verdict, Verdict::No, "{:?}", d.evidence);
        assert!(d
            .evidence
            .iter()
            .any(|e| e.contains("weight family: not admissible")));
    }
}
