//! Monodromy weight filtrations.
//!
//! The pure case is computed from Jordan chain data and re-verified.
//! The relative case builds a candidate by pulling graded monodromy
//! filtrations back through a splitting of W, verifies it exactly, and
//! falls back to a refutation pass and a subspace-lattice search.  A
//! verified return is the answer (the filtration is unique when it
//! exists); refuted means no filtration can exist; everything else is
//! reported undecided rather than guessed.

use crate::cones::Cone;
use crate::filtration::IncFiltration;
use crate::mat::Mat;
use crate::scalar::{rat, Rat};
use crate::subspace::{kernel_of, Quot, Subspace};
use num::traits::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::collections::BTreeMap;

/// Basis vectors of `b` extending a basis of `a` (greedy sweep).
fn complement_in(b: &Subspace<Rat>, a: &Subspace<Rat>) -> Vec<Vec<Rat>> {
    let mut acc = a.clone();
    let mut out = Vec::new();
    for v in b.basis_vecs() {
        if !acc.contains_vec(&v) {
            acc = acc.sum(&Subspace::from_vecs(b.ambient, vec![v.clone()]));
            out.push(v);
        }
    }
    out
}

/// Weight filtration of a nilpotent matrix, centered at `center`:
/// N M_k
/// is in M_{k-2} and N^m maps gr_{center+m} isomorphically onto
/// gr_{center-m}.  Jordan chains of length s contribute weights
/// center+s-1, center+s-3, ..., center-s+1.
pub fn monodromy_filtration(n: &Mat<Rat>, center: i64) -> IncFiltration<Rat> {
    let d = n.rows;
    assert_eq!(n.cols, d);
    let idx = n
        .nilpotency_index()
        .expect("monodromy filtration needs a nilpotent matrix") as i64;
    if d == 0 {
        return IncFiltration::pure(0, center);
    }
    if idx == 0 {
        // zero-dimensional power vanishing happens only for d = 0
        return IncFiltration::pure(d, center);
    }
    let mut kers: Vec<Subspace<Rat>> = vec![Subspace::zero(d)];
    let mut p = Mat::identity(d);
    for _ in 1..=idx {
        p = n.mul(&p);
        kers.push(kernel_of(&p));
    }
    let mut weighted: Vec<(i64, Vec<Rat>)> = Vec::new();
    for s in (1..=idx).rev() {
        let covered = if s < idx {
            kers[(s - 1) as usize].sum(&kers[(s + 1) as usize].apply(n))
        } else {
            kers[(s - 1) as usize].clone()
        };
        for v in complement_in(&kers[s as usize], &covered) {
            let mut cur = v;
            for t in 0..s {
                weighted.push((center + s - 1 - 2 * t, cur.clone()));
                cur = n.mul_vec(&cur);
            }
        }
    }
    let lo = weighted.iter().map(|(w, _)| *w).min().unwrap();
    let hi = weighted.iter().map(|(w, _)| *w).max().unwrap();
    let mut steps = BTreeMap::new();
    for k in lo..=hi {
        let gens: Vec<Vec<Rat>> = weighted
            .iter()
            .filter(|(w, _)| *w <= k)
            .map(|(_, v)| v.clone())
            .collect();
        steps.insert(k, Subspace::from_vecs(d, gens));
    }
    let m = IncFiltration::new(d, steps);
    debug_assert!(verify_rel_conditions(&m, n, &IncFiltration::pure(d, center)).is_ok());
    m
}

/// The two defining conditions of the relative monodromy filtration,
/// checked exactly: N M_k inside M_{k-2}, and N^m inducing
/// isomorphisms gr^M_{j+m} gr^W_j -> gr^M_{j-m} gr^W_j.
pub fn verify_rel_conditions(
    m: &IncFiltration<Rat>,
    n: &Mat<Rat>,
    w: &IncFiltration<Rat>,
) -> Result<(), String> {
    m.validate()?;
    w.validate()?;
    for j in w.jumps() {
        let wj = w.at(j);
        if !wj.contains(&wj.apply(n)) {
            return Err(format!("N does not preserve W_{}", j));
        }
    }
    for k in m.jumps() {
        if !m.at(k - 2).contains(&m.at(k).apply(n)) {
            return Err(format!("N M_{} is not inside M_{}", k, k - 2));
        }
    }
    let mj = m.jumps();
    let span = mj.last().unwrap() - mj.first().unwrap();
    for j in w.jumps() {
        let q = Quot::new(&w.at(j), &w.at(j - 1));
        let m_ind = m.in_quot(&q);
        let n_j = q.induced_map(n);
        for step in 1..=span.max(1) {
            let top = Quot::new(&m_ind.at(j + step), &m_ind.at(j + step - 1));
            let bot = Quot::new(&m_ind.at(j - step), &m_ind.at(j - step - 1));
            if top.dim() != bot.dim() {
                return Err(format!(
                    "graded ranks differ on gr^W_{} at distance {} ({} vs {})",
                    j,
                    step,
                    top.dim(),
                    bot.dim()
                ));
            }
            if top.dim() == 0 {
                continue;
            }
            let map = bot.map_from(&top, &n_j.pow(step as usize));
            if map.rank() != top.dim() {
                return Err(format!(
                    "N^{} is not an isomorphism between gr^M gr^W_{} levels",
                    step, j
                ));
            }
        }
    }
    Ok(())
}

#[derive(Clone, Debug)]
pub enum RelMonodromy {
    Exists(IncFiltration<Rat>),
    NonExistent { witness: String },
    Undecided { note: String },
}

impl RelMonodromy {
    pub fn filtration(&self) -> Option<&IncFiltration<Rat>> {
        match self {
            RelMonodromy::Exists(m) => Some(m),
            _ => None,
        }
    }
}

struct GradedData {
    quot: Quot<Rat>,
    m: IncFiltration<Rat>,
    /// preimage of M^(j)_k inside W_j, per recorded k of m
    preimages: BTreeMap<i64, Subspace<Rat>>,
}

fn graded_monodromies(n: &Mat<Rat>, w: &IncFiltration<Rat>) -> BTreeMap<i64, GradedData> {
    let mut out = BTreeMap::new();
    for j in w.jumps() {
        let quot = Quot::new(&w.at(j), &w.at(j - 1));
        let n_j = quot.induced_map(n);
        let m = monodromy_filtration(&n_j, j);
        let lo = *m.jumps().first().unwrap();
        let hi = *m.jumps().last().unwrap();
        let mut preimages = BTreeMap::new();
        for k in (lo - 1)..=hi {
            // {v in W_j : class(v) in M^(j)_k}
            let cls = m.at(k);
            let wj1 = w.at(j - 1);
            let mut gens = wj1.basis_vecs();
            for c in 0..cls.dim() {
                gens.push(quot.include(&cls.basis().col(c)));
            }
            preimages.insert(k, Subspace::from_vecs(w.ambient, gens));
        }
        out.insert(
            j,
            GradedData {
                quot,
                m,
                preimages,
            },
        );
    }
    out
}

fn graded_range(graded: &BTreeMap<i64, GradedData>) -> (i64, i64) {
    let lo = graded
        .values()
        .map(|g| *g.m.jumps().first().unwrap())
        .min()
        .unwrap();
    let hi = graded
        .values()
        .map(|g| *g.m.jumps().last().unwrap())
        .max()
        .unwrap();
    (lo, hi)
}

fn preimage_at(g: &GradedData, w: &IncFiltration<Rat>, j: i64, k: i64) -> Subspace<Rat> {
    let lo = *g.m.jumps().first().unwrap();
    let hi = *g.m.jumps().last().unwrap();
    if k < lo {
        w.at(j - 1)
    } else if k > hi {
        w.at(j)
    } else {
        g.preimages[&k].clone()
    }
}

/// Candidate built by pulling each graded monodromy filtration back
/// through a coordinate splitting of W.
fn pullback_candidate(
    w: &IncFiltration<Rat>,
    graded: &BTreeMap<i64, GradedData>,
) -> IncFiltration<Rat> {
    let d = w.ambient;
    let (lo, hi) = graded_range(graded);
    let mut pieces: Vec<(i64, Mat<Rat>, Mat<Rat>)> = Vec::new();
    let mut prev = Subspace::zero(d);
    for j in w.jumps() {
        let vecs = complement_in(&w.at(j), &prev);
        prev = w.at(j);
        let bj = Mat::from_cols(vecs);
        let g = &graded[&j];
        let cols: Vec<Vec<Rat>> = (0..bj.cols).map(|c| g.quot.project_vec(&bj.col(c))).collect();
        let phi = Mat::from_cols(cols);
        let phi_inv = phi.inverse().expect("splitting piece must map onto gr");
        pieces.push((j, bj, phi_inv));
    }
    let mut steps = BTreeMap::new();
    for k in lo..=hi {
        let mut gens: Vec<Vec<Rat>> = Vec::new();
        for (j, bj, phi_inv) in &pieces {
            let mk = graded[j].m.at(k);
            let lifted = bj.mul(phi_inv).mul(mk.basis());
            for c in 0..lifted.cols {
                gens.push(lifted.col(c));
            }
        }
        steps.insert(k, Subspace::from_vecs(d, gens));
    }
    IncFiltration::new(d, steps)
}

fn affine_meet(
    point: &[Rat],
    dir: &Subspace<Rat>,
    s: &Subspace<Rat>,
) -> Option<(Vec<Rat>, Subspace<Rat>)> {
    // find x, y with point + dir*x = s*y
    let d = point.len();
    let mix = if dir.dim() > 0 {
        dir.basis().hstack(&s.basis().neg())
    } else {
        s.basis().neg()
    };
    if mix.cols == 0 {
        return if point.iter().all(|c| c.is_zero()) {
            Some((point.to_vec(), dir.intersect(s)))
        } else {
            None
        };
    }
    let rhs: Vec<Rat> = point.iter().map(|c| -c.clone()).collect();
    let sol = mix.solve(&rhs)?;
    let mut pt = point.to_vec();
    for c in 0..dir.dim() {
        let col = dir.basis().col(c);
        for i in 0..d {
            pt[i] = pt[i].clone() + sol[c].clone() * col[i].clone();
        }
    }
    Some((pt, dir.intersect(s)))
}

/// Looks for a finite certificate that no relative filtration can
/// satisfy both defining conditions.  Sound: every deduction follows
/// from conditions any candidate must satisfy.
fn refute(
    n: &Mat<Rat>,
    w: &IncFiltration<Rat>,
    graded: &BTreeMap<i64, GradedData>,
) -> Option<String> {
    let d = w.ambient;
    let (lo, hi) = graded_range(graded);
    let idx = n.nilpotency_index().unwrap() as i64;
    let jmax = *w.jumps().last().unwrap();
    let gtop = &graded[&jmax];
    // upper bounds for the unknown M_t, refined by monotonicity and by
    // pulling the N-step condition backwards
    let tlo = lo - 2 * idx;
    let mut upper: BTreeMap<i64, Subspace<Rat>> = BTreeMap::new();
    for t in tlo..=hi {
        let init = if t < lo {
            // below every graded bottom weight the filtration vanishes
            Subspace::zero(d)
        } else {
            preimage_at(gtop, w, jmax, t)
        };
        upper.insert(t, init);
    }
    for _ in 0..3 {
        for t in (tlo..=hi).rev() {
            let mut cur = upper[&t].clone();
            if t + 1 <= hi {
                cur = cur.intersect(&upper[&(t + 1)]);
            }
            if t - 2 >= tlo {
                cur = cur.intersect(&upper[&(t - 2)].preimage(n));
            }
            upper.insert(t, cur);
        }
    }
    let bound = |t: i64| -> Subspace<Rat> {
        if t < tlo {
            Subspace::zero(d)
        } else if t > hi {
            Subspace::full(d)
        } else {
            upper[&t].clone()
        }
    };
    for (&j, g) in graded {
        let wj1 = w.at(j - 1);
        for k in g.m.jumps() {
            let pre = preimage_at(g, w, j, k);
            for c in 0..pre.dim() {
                let u = pre.basis().col(c);
                let mut npow = Mat::identity(d);
                for m in 0..=idx {
                    let t = k - 2 * m;
                    let a0 = npow.mul_vec(&u);
                    let adir = wj1.apply(&npow);
                    // some element of M_t must lie in a0 + adir
                    match affine_meet(&a0, &adir, &bound(t)) {
                        None => {
                            return Some(format!(
                                "no element of the required coset N^{}(u + W_{}) can lie in M_{} (u from gr^W_{} level {})",
                                m, j - 1, t, j, k
                            ));
                        }
                        Some((pt, bdir)) => {
                            // the meet lives inside some W_j'; its image
                            // there is pinned by the graded filtration
                            for j2 in w.jumps() {
                                let wj2 = w.at(j2);
                                if wj2.contains_vec(&pt) && wj2.contains(&bdir) {
                                    let g2 = &graded[&j2];
                                    let pre2 = preimage_at(g2, w, j2, t);
                                    if affine_meet(&pt, &bdir, &pre2).is_none() {
                                        return Some(format!(
                                            "N^{}(u + W_{}) forces a vector of W_{} into M_{} that gr^W_{} forbids (u from gr^W_{} level {})",
                                            m, j - 1, j2, t, j2, j, k
                                        ));
                                    }
                                    break;
                                }
                            }
                        }
                    }
                    npow = n.mul(&npow);
                }
            }
        }
    }
    None
}

/// Closure of {N^a W_b} under sum and intersection, capped.
fn lattice_candidate(
    n: &Mat<Rat>,
    w: &IncFiltration<Rat>,
    graded: &BTreeMap<i64, GradedData>,
) -> Option<IncFiltration<Rat>> {
    let d = w.ambient;
    let idx = n.nilpotency_index().unwrap();
    let mut lat: Vec<Subspace<Rat>> = vec![Subspace::zero(d), Subspace::full(d)];
    let add = |l: &mut Vec<Subspace<Rat>>, s: Subspace<Rat>| {
        if !l.contains(&s) {
            l.push(s);
        }
    };
    for b in w.jumps() {
        let mut p = Mat::identity(d);
        for _ in 0..=idx {
            add(&mut lat, w.at(b).apply(&p));
            p = n.mul(&p);
        }
    }
    const CAP: usize = 900;
    for _ in 0..3 {
        let snapshot = lat.clone();
        for a in 0..snapshot.len() {
            for b in (a + 1)..snapshot.len() {
                if lat.len() > CAP {
                    break;
                }
                add(&mut lat, snapshot[a].sum(&snapshot[b]));
                add(&mut lat, snapshot[a].intersect(&snapshot[b]));
            }
        }
        if lat.len() == snapshot.len() || lat.len() > CAP {
            break;
        }
    }
    let (lo, hi) = graded_range(graded);
    let mut steps = BTreeMap::new();
    for k in lo..=hi {
        let mut acc = Subspace::zero(d);
        'next: for e in &lat {
            for g in graded.values() {
                let img = g.quot.project_subspace(e);
                if !g.m.at(k).contains(&img) {
                    continue 'next;
                }
            }
            acc = acc.sum(e);
        }
        steps.insert(k, acc);
    }
    if steps[&hi] != Subspace::full(d) {
        return None;
    }
    Some(IncFiltration::new(d, steps))
}

/// Relative monodromy filtration of N with respect to W.  Every
/// existence claim carries a filtration that passed the verifier;
/// non-existence carries a finite refutation certificate.
pub fn rel_monodromy(n: &Mat<Rat>, w: &IncFiltration<Rat>) -> Result<RelMonodromy, String> {
    let d = w.ambient;
    assert_eq!(n.rows, d);
    if n.nilpotency_index().is_none() {
        return Err("input matrix is not nilpotent".to_string());
    }
    w.validate()?;
    for j in w.jumps() {
        let wj = w.at(j);
        if !wj.contains(&wj.apply(n)) {
            return Err(format!("N does not preserve W_{}", j));
        }
    }
    if d == 0 {
        return Ok(RelMonodromy::Exists(w.clone()));
    }
    let graded = graded_monodromies(n, w);
    let cand = pullback_candidate(w, &graded);
    if verify_rel_conditions(&cand, n, w).is_ok() {
        return Ok(RelMonodromy::Exists(cand));
    }
    if let Some(cert) = refute(n, w, &graded) {
        return Ok(RelMonodromy::NonExistent { witness: cert });
    }
    if let Some(cand) = lattice_candidate(n, w, &graded) {
        if verify_rel_conditions(&cand, n, w).is_ok() {
            return Ok(RelMonodromy::Exists(cand));
        }
    }
    Ok(RelMonodromy::Undecided {
        note: "candidate generation and refutation both exhausted".to_string(),
    })
}

/// Commuting nilpotent generators acting on a common space.
#[derive(Clone, Debug)]
pub struct NilpotentConeInstance {
    pub dim: usize,
    pub generators: Vec<Mat<Rat>>,
    pub lattice_tag: String,
}

impl NilpotentConeInstance {
    pub fn new(dim: usize, generators: Vec<Mat<Rat>>, lattice_tag: &str) -> Self {
        NilpotentConeInstance {
            dim,
            generators,
            lattice_tag: lattice_tag.to_string(),
        }
    }

    pub fn validate(&self, w: Option<&IncFiltration<Rat>>) -> Result<(), String> {
        for (i, g) in self.generators.iter().enumerate() {
            if g.rows != self.dim || g.cols != self.dim {
                return Err(format!("generator {} has the wrong shape", i));
            }
            if g.nilpotency_index().is_none() {
                return Err(format!("generator {} is not nilpotent", i));
            }
        }
        for i in 0..self.generators.len() {
            for j in (i + 1)..self.generators.len() {
                if !self.generators[i].bracket(&self.generators[j]).is_zero() {
                    return Err(format!("generators {} and {} do not commute", i, j));
                }
            }
        }
        if let Some(w) = w {
            for (i, g) in self.generators.iter().enumerate() {
                for jw in w.jumps() {
                    let wj = w.at(jw);
                    if !wj.contains(&wj.apply(g)) {
                        return Err(format!("generator {} does not preserve W_{}", i, jw));
                    }
                }
            }
        }
        Ok(())
    }

    pub fn element(&self, coeffs: &[Rat]) -> Mat<Rat> {
        assert_eq!(coeffs.len(), self.generators.len());
        let mut acc = Mat::zero(self.dim, self.dim);
        for (c, g) in coeffs.iter().zip(&self.generators) {
            acc = acc.add(&g.scale(c));
        }
        acc
    }

    /// The generated cone in flattened matrix coordinates.
    pub fn ambient_cone(&self) -> Cone {
        let gens: Vec<Vec<Rat>> = self.generators.iter().map(|g| g.flat().to_vec()).collect();
        Cone::from_gens(self.dim * self.dim, gens)
    }
}

#[derive(Clone, Debug)]
pub struct FaceWeight {
    pub rays: Vec<Mat<Rat>>,
    pub m: Option<IncFiltration<Rat>>,
    pub note: Option<String>,
}

#[derive(Clone, Debug)]
pub struct ConeWeightFamily {
    pub faces: Vec<FaceWeight>,
    pub admissible: bool,
    /// true when some face could not be decided either way, as opposed to
    /// a face with a genuine refutation
    pub undecided: bool,
    pub witness: Option<String>,
}

fn interior_samples(rays: &[Mat<Rat>], rng: &mut ChaCha8Rng, count: usize) -> Vec<Mat<Rat>> {
    let mut out = Vec::new();
    for s in 0..count {
        let mut acc = Mat::zero(rays[0].rows, rays[0].cols);
        for r in rays {
            let c: i64 = if s == 0 { 1 } else { rng.gen_range(1..=7) };
            acc = acc.add(&r.scale(&rat(c)));
        }
        out.push(acc);
    }
    out
}

/// Weight filtrations M(face) over all faces of the cone, with the
/// constancy and tower checks that make the family admissible.
pub fn cone_weight_family(
    cone: &NilpotentConeInstance,
    w: &IncFiltration<Rat>,
    seed: u64,
) -> Result<ConeWeightFamily, String> {
    cone.validate(Some(w))?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let ambient = cone.ambient_cone();
    let mut faces = Vec::new();
    let mut admissible = true;
    let mut undecided = false;
    let mut witness = None;
    let mut computed: Vec<(Vec<Mat<Rat>>, Option<IncFiltration<Rat>>)> = Vec::new();
    for face in ambient.faces() {
        let rays: Vec<Mat<Rat>> = face
            .rays
            .iter()
            .map(|r| Mat::new(cone.dim, cone.dim, r.clone()))
            .collect();
        if rays.is_empty() {
            faces.push(FaceWeight {
                rays,
                m: Some(w.clone()),
                note: None,
            });
            computed.push((Vec::new(), Some(w.clone())));
            continue;
        }
        let mut m_face: Option<IncFiltration<Rat>> = None;
        let mut note = None;
        for sample in interior_samples(&rays, &mut rng, 3) {
            match rel_monodromy(&sample, w)? {
                RelMonodromy::Exists(m) => match &m_face {
                    None => m_face = Some(m),
                    Some(prev) => {
                        if *prev != m {
                            admissible = false;
                            note = Some("filtration varies over the face interior".to_string());
                            witness = witness.or_else(|| note.clone());
                        }
                    }
                },
                RelMonodromy::NonExistent { witness: c } => {
                    admissible = false;
                    note = Some(format!("no relative filtration on this face: {}", c));
                    witness = witness.or_else(|| note.clone());
                    m_face = None;
                    break;
                }
                RelMonodromy::Undecided { note: c } => {
                    admissible = false;
                    undecided = true;
                    note = Some(format!("undecided on this face: {}", c));
                    witness = witness.or_else(|| note.clone());
                    m_face = None;
                    break;
                }
            }
        }
        computed.push((rays.clone(), m_face.clone()));
        faces.push(FaceWeight {
            rays,
            m: m_face,
            note,
        });
    }
    // tower condition between nested faces
    if admissible {
        'outer: for (ra, ma) in &computed {
            for (rb, mb) in &computed {
                if ra.len() >= rb.len() || ra.iter().any(|r| !rb.contains(r)) {
                    continue;
                }
                let (ma, mb) = match (ma, mb) {
                    (Some(a), Some(b)) => (a, b),
                    _ => continue,
                };
                let nb = interior_samples(rb, &mut rng, 1).pop().unwrap();
                match rel_monodromy(&nb, ma)? {
                    RelMonodromy::Exists(tower) => {
                        if tower != *mb {
                            admissible = false;
                            witness = Some(
                                "tower filtration differs from the face filtration".to_string(),
                            );
                            break 'outer;
                        }
                    }
                    RelMonodromy::NonExistent { witness: c } => {
                        admissible = false;
                        witness = Some(format!(
                            "tower relative filtration missing between faces: {}",
                            c
                        ));
                        break 'outer;
                    }
                    RelMonodromy::Undecided { note: c } => {
                        admissible = false;
                        undecided = true;
                        witness = Some(format!("tower filtration undecided between faces: {}", c));
                        break 'outer;
                    }
                }
            }
        }
    }
    Ok(ConeWeightFamily {
        faces,
        admissible,
        undecided,
        witness,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn e12(d: usize, r: usize, c: usize) -> Mat<Rat> {
        let mut m = Mat::zero(d, d);
        m[(r, c)] = rat(1);
        m
    }

    #[test]
    fn pure_small_cases() {
        // N e2 = e1 centered at 1
        let n = e12(2, 0, 1);
        let m = monodromy_filtration(&n, 1);
        assert_eq!(m.jumps(), vec![0, 2]);
        assert_eq!(m.at(0), Subspace::from_vecs(2, vec![vec![rat(1), rat(0)]]));
        assert_eq!(m.at(1), m.at(0));
        assert!(m.at(2).is_full());
        // zero matrix
        let z = Mat::zero(3, 3);
        let m = monodromy_filtration(&z, -1);
        assert_eq!(m.jumps(), vec![-1]);
        assert!(m.at(-1).is_full());
        assert!(m.at(-2).is_zero());
    }

    #[test]
    fn pure_jordan_three() {
        let mut n = Mat::zero(3, 3);
        n[(0, 1)] = rat(1);
        n[(1, 2)] = rat(1);
        let m = monodromy_filtration(&n, 0);
        let nn = n.mul(&n);
        assert_eq!(m.at(-2), crate::subspace::image_of(&nn));
        assert_eq!(m.at(-1), m.at(-2));
        assert_eq!(m.at(0), crate::subspace::image_of(&n));
        assert_eq!(m.at(1), m.at(0));
        assert!(m.at(2).is_full());
        assert!(verify_rel_conditions(&m, &n, &IncFiltration::pure(3, 0)).is_ok());
    }

    #[test]
    fn relative_weight_drop_gives_w() {
        // W_-2 = span e1, W_0 = all, N sends gr_0 into gr_-2
        let n = e12(2, 0, 1);
        let mut w = IncFiltration::pure(2, 0);
        w.insert(-2, Subspace::from_vecs(2, vec![vec![rat(1), rat(0)]]));
        match rel_monodromy(&n, &w).unwrap() {
            RelMonodromy::Exists(m) => assert_eq!(m, w),
            other => panic!("expected existence, got {:?}", other),
        }
    }

    #[test]
    fn relative_weight_crossing_refuted() {
        // W_0 = span e1, W_1 = all, N e2 = e1 crosses weights 1 -> 0
        let n = e12(2, 0, 1);
        let mut w = IncFiltration::pure(2, 1);
        w.insert(0, Subspace::from_vecs(2, vec![vec![rat(1), rat(0)]]));
        match rel_monodromy(&n, &w).unwrap() {
            RelMonodromy::NonExistent { witness } => {
                assert!(!witness.is_empty());
            }
            other => panic!("expected refutation, got {:?}", other),
        }
    }

    #[test]
    fn relative_pure_reduces() {
        let mut n = Mat::zero(3, 3);
        n[(0, 1)] = rat(1);
        n[(1, 2)] = rat(1);
        let w = IncFiltration::pure(3, 2);
        match rel_monodromy(&n, &w).unwrap() {
            RelMonodromy::Exists(m) => assert_eq!(m, monodromy_filtration(&n, 2)),
            other => panic!("expected existence, got {:?}", other),
        }
    }

    #[test]
    fn relative_blockwise() {
        // block diagonal of the weight-drop case and a pure Jordan block
        let mut n = Mat::zero(4, 4);
        n[(0, 1)] = rat(1);
        n[(2, 3)] = rat(1);
        let mut w = IncFiltration::pure(4, 0);
        w.insert(
            -2,
            Subspace::from_vecs(4, vec![vec![rat(1), rat(0), rat(0), rat(0)]]),
        );
        // block two sits purely in weight 0
        let m = match rel_monodromy(&n, &w).unwrap() {
            RelMonodromy::Exists(m) => m,
            other => panic!("expected existence, got {:?}", other),
        };
        assert!(verify_rel_conditions(&m, &n, &w).is_ok());
        // second block contributes the pure string around 0
        assert!(m.at(-1).contains_vec(&[rat(0), rat(0), rat(1), rat(0)]));
        assert!(!m.at(-2).contains_vec(&[rat(0), rat(0), rat(1), rat(0)]));
        assert!(m.at(1).is_full());
    }

    #[test]
    fn cone_family_two_blocks() {
        let n1 = e12(4, 0, 1);
        let n2 = e12(4, 2, 3);
        let cone = NilpotentConeInstance::new(4, vec![n1, n2], "ex2");
        let w = IncFiltration::pure(4, 1);
        let fam = cone_weight_family(&cone, &w, 11).unwrap();
        assert!(fam.admissible);
        assert_eq!(fam.faces.len(), 4);
        let top = fam
            .faces
            .iter()
            .find(|f| f.rays.len() == 2)
            .expect("two dimensional face");
        let m = top.m.as_ref().unwrap();
        assert_eq!(m.jumps(), vec![0, 2]);
        assert_eq!(m.graded_dim(0), 2);
        assert_eq!(m.graded_dim(2), 2);
    }

    #[test]
    fn cone_family_crossing_not_admissible() {
        let n = e12(2, 0, 1);
        let cone = NilpotentConeInstance::new(2, vec![n], "bad");
        let mut w = IncFiltration::pure(2, 1);
        w.insert(0, Subspace::from_vecs(2, vec![vec![rat(1), rat(0)]]));
        let fam = cone_weight_family(&cone, &w, 5).unwrap();
        assert!(!fam.admissible);
        assert!(fam.witness.is_some());
    }

    #[test]
    fn zero_cone_keeps_w() {
        let cone = NilpotentConeInstance::new(2, vec![], "zero");
        let mut w = IncFiltration::pure(2, 3);
        w.insert(1, Subspace::from_vecs(2, vec![vec![rat(1), rat(1)]]));
        let fam = cone_weight_family(&cone, &w, 1).unwrap();
        assert!(fam.admissible);
        assert_eq!(fam.faces.len(), 1);
        assert_eq!(fam.faces[0].m.as_ref().unwrap(), &w);
    }
}
