//! Root sets and the complete fans cut out by their sign patterns.
//!
//! A root set is a finite symmetric collection of nonzero rational
//! characters. Choosing, for each antipodal pair, the plus member, the
//! minus member, or both, and keeping only the choices that are closed
//! under the conical span, produces the parts whose dual cones tile the
//! character space. The torus side of a boundary degeneration is read off
//! from this tiling, so the axioms get their own checker here and the
//! tests lean on it heavily.

use std::collections::{BTreeMap, BTreeSet};

use num::{Signed, Zero};
use rand::prelude::*;
use rand_chacha::ChaCha8Rng;

use crate::cones::Cone;
use crate::mat::Mat;
use crate::scalar::{rat, Rat};
use crate::subspace::Subspace;

fn dot(a: &[Rat], b: &[Rat]) -> Rat {
    let mut s = rat(0);
    for (x, y) in a.iter().zip(b) {
        s += x.clone() * y.clone();
    }
    s
}

fn neg_vec(v: &[Rat]) -> Vec<Rat> {
    v.iter().map(|c| -c.clone()).collect()
}

/// Symmetric set of nonzero characters, kept sorted and deduplicated.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RootSet {
    pub rank: usize,
    pub roots: Vec<Vec<Rat>>,
}

impl RootSet {
    /// Zero vectors are dropped silently; the trivial character sits in
    /// every part anyway and keeping it explicit only clutters the pair
    /// bookkeeping. A root without its opposite is an error.
    pub fn new(rank: usize, vecs: Vec<Vec<Rat>>) -> Result<RootSet, String> {
        let mut set: BTreeSet<Vec<Rat>> = BTreeSet::new();
        for v in vecs {
            if v.len() != rank {
                return Err(format!("root has length {}, expected {}", v.len(), rank));
            }
            if v.iter().all(|c| c.is_zero()) {
                continue;
            }
            set.insert(v);
        }
        for v in &set {
            if !set.contains(&neg_vec(v)) {
                return Err(format!("root set is not symmetric, missing the opposite of {:?}", v));
            }
        }
        Ok(RootSet {
            rank,
            roots: set.into_iter().collect(),
        })
    }

    /// One representative per antipodal pair.
    pub fn pair_reps(&self) -> Vec<Vec<Rat>> {
        let mut reps = Vec::new();
        let mut seen: BTreeSet<Vec<Rat>> = BTreeSet::new();
        for v in &self.roots {
            if seen.contains(v) {
                continue;
            }
            seen.insert(v.clone());
            seen.insert(neg_vec(v));
            reps.push(v.clone());
        }
        reps
    }

    pub fn contains(&self, v: &[Rat]) -> bool {
        self.roots.iter().any(|r| r[..] == *v)
    }
}

/// A part of the root set together with its dual cone.
#[derive(Clone, Debug)]
pub struct FanMember {
    pub part: BTreeSet<Vec<Rat>>,
    pub cone: Cone,
}

#[derive(Clone, Debug)]
pub struct RootFan {
    pub rank: usize,
    pub members: Vec<FanMember>,
}

pub fn same_cone(a: &Cone, b: &Cone) -> bool {
    a.contains_cone(b) && b.contains_cone(a)
}

impl RootFan {
    pub fn find_part(&self, part: &BTreeSet<Vec<Rat>>) -> Option<&FanMember> {
        self.members.iter().find(|m| m.part == *part)
    }

    pub fn find_cone(&self, c: &Cone) -> Option<&FanMember> {
        self.members.iter().find(|m| same_cone(&m.cone, c))
    }
}

/// Enumerates every admissible part of the root set and pairs it with its
/// dual cone. A part takes, from each antipodal pair, the plus member, the
/// minus member, or both; it survives when its conical span picks up no
/// further root. Cost grows as three to the number of pairs, which is fine
/// for the sizes that show up in boundary charts.
pub fn fan_from_roots(roots: &RootSet) -> RootFan {
    let reps = roots.pair_reps();
    let m = reps.len();
    let mut members: Vec<FanMember> = Vec::new();
    let total = 3usize.pow(m as u32);
    for code in 0..total {
        let mut c = code;
        let mut part: BTreeSet<Vec<Rat>> = BTreeSet::new();
        for rep in &reps {
            match c % 3 {
                0 => {
                    part.insert(rep.clone());
                }
                1 => {
                    part.insert(neg_vec(rep));
                }
                _ => {
                    part.insert(rep.clone());
                    part.insert(neg_vec(rep));
                }
            }
            c /= 3;
        }
        let spanned = Cone::from_gens(roots.rank, part.iter().cloned().collect());
        if !roots
            .roots
            .iter()
            .all(|x| part.contains(x) || !spanned.contains(x))
        {
            continue;
        }
        let cone = Cone::from_ineqs(roots.rank, part.iter().cloned().collect());
        members.push(FanMember { part, cone });
    }
    members.sort_by(|a, b| a.part.cmp(&b.part));
    RootFan {
        rank: roots.rank,
        members,
    }
}

fn dual_from_generators(c: &Cone) -> Cone {
    let mut rows = c.rays.clone();
    for j in 0..c.lin.dim() {
        let b = c.lin.basis().col(j);
        rows.push(neg_vec(&b));
        rows.push(b);
    }
    Cone::from_ineqs(c.dim, rows)
}

fn sample_points(rank: usize, fan: &RootFan) -> Vec<Vec<Rat>> {
    let mut pts: Vec<Vec<Rat>> = Vec::new();
    for m in &fan.members {
        pts.push(m.cone.relint_point());
        for r in &m.cone.rays {
            pts.push(r.clone());
        }
    }
    if rank <= 4 {
        let mut idx = vec![0usize; rank];
        loop {
            pts.push(idx.iter().map(|&i| rat(i as i64 - 2)).collect());
            let mut k = 0;
            loop {
                if k == rank {
                    return pts;
                }
                if idx[k] < 4 {
                    idx[k] += 1;
                    break;
                }
                idx[k] = 0;
                k += 1;
            }
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(0x66616e73);
    for _ in 0..400 {
        pts.push((0..rank).map(|_| rat(rng.gen_range(-9..=9))).collect());
    }
    pts
}

/// Checks the fan axioms directly. Faces of members are members,
/// intersections of members are common faces, each part is recovered from
/// the generator description of its cone, and the cones cover the whole
/// space, tested on a grid of sample points plus the rays and interior
/// points of the members themselves.
pub fn fan_axioms(roots: &RootSet, fan: &RootFan) -> Result<(), String> {
    for (i, a) in fan.members.iter().enumerate() {
        for b in fan.members.iter().skip(i + 1) {
            if same_cone(&a.cone, &b.cone) {
                return Err(format!("two parts share a cone: {:?} and {:?}", a.part, b.part));
            }
        }
    }
    for m in &fan.members {
        for f in m.cone.faces() {
            if fan.find_cone(&f).is_none() {
                return Err(format!("face of the cone of {:?} is not a member", m.part));
            }
        }
    }
    for (i, a) in fan.members.iter().enumerate() {
        for b in fan.members.iter().skip(i + 1) {
            let t = a.cone.intersect(&b.cone);
            if !t.is_face_of(&a.cone) || !t.is_face_of(&b.cone) {
                return Err(format!(
                    "intersection of the cones of {:?} and {:?} is not a common face",
                    a.part, b.part
                ));
            }
            if fan.find_cone(&t).is_none() {
                return Err("an intersection of members is not a member".to_string());
            }
        }
    }
    for m in &fan.members {
        let dual = dual_from_generators(&m.cone);
        let back: BTreeSet<Vec<Rat>> = roots
            .roots
            .iter()
            .filter(|x| dual.contains(x))
            .cloned()
            .collect();
        if back != m.part {
            return Err(format!("part {:?} is not recovered from its cone", m.part));
        }
    }
    for y in sample_points(roots.rank, fan) {
        let part: BTreeSet<Vec<Rat>> = roots
            .roots
            .iter()
            .filter(|x| !dot(x, &y).is_negative())
            .cloned()
            .collect();
        match fan.find_part(&part) {
            None => {
                return Err(format!("sign pattern of sample {:?} is not a member", y));
            }
            Some(m) => {
                if !m.cone.contains(&y) {
                    return Err(format!("sample {:?} escapes the cone of its pattern", y));
                }
            }
        }
    }
    Ok(())
}

/// Random symmetric root set with entries in a small box, for stress tests.
pub fn random_root_set(rank: usize, pairs: usize, seed: u64) -> RootSet {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut vecs = Vec::new();
    let mut tries = 0;
    while vecs.len() < 2 * pairs && tries < 200 {
        tries += 1;
        let v: Vec<Rat> = (0..rank).map(|_| rat(rng.gen_range(-3..=3))).collect();
        if v.iter().all(|c| c.is_zero()) {
            continue;
        }
        vecs.push(neg_vec(&v));
        vecs.push(v);
    }
    RootSet::new(rank, vecs).expect("antipodal by construction")
}

#[derive(Clone, Debug)]
pub struct ParabolicData {
    pub msize: usize,
    pub span: Subspace<Rat>,
    pub bracket_closed: bool,
}

/// Lie algebra of the parabolic attached to a part of a root set.
///
/// `weight_spaces` sends each character to matrices spanning its weight
/// space inside some matrix Lie algebra; the nonzero keys form the root
/// set. The zero character carries the reductive part and always enters.
/// The rest follows the inverse indexing: a character chosen into the part
/// contributes the weight space of its opposite. On gl2 graded by the
/// adjoint torus this sends the part {2} to the lower triangular matrices.
pub fn parabolic_lie(
    part: &BTreeSet<Vec<Rat>>,
    weight_spaces: &BTreeMap<Vec<Rat>, Vec<Mat<Rat>>>,
) -> Result<ParabolicData, String> {
    let rank = match weight_spaces.keys().next() {
        Some(k) => k.len(),
        None => return Err("no weight spaces given".to_string()),
    };
    let mut msize = None;
    for (k, mats) in weight_spaces {
        if k.len() != rank {
            return Err("weight space keys of mixed lengths".to_string());
        }
        for m in mats {
            if m.rows != m.cols {
                return Err("weight space matrices must be square".to_string());
            }
            match msize {
                None => msize = Some(m.rows),
                Some(s) if s == m.rows => {}
                _ => return Err("weight space matrices of mixed sizes".to_string()),
            }
        }
    }
    let msize = match msize {
        Some(s) => s,
        None => return Err("weight spaces carry no matrices".to_string()),
    };
    let roots = RootSet::new(
        rank,
        weight_spaces
            .keys()
            .filter(|k| !k.iter().all(|c| c.is_zero()))
            .cloned()
            .collect(),
    )?;
    for chi in part {
        if !roots.contains(chi) {
            return Err(format!("part contains {:?} which is not a root", chi));
        }
    }
    for x in &roots.roots {
        if !part.contains(x) && !part.contains(&neg_vec(x)) {
            return Err(format!("part misses the antipodal pair of {:?}", x));
        }
    }
    let spanned = Cone::from_gens(rank, part.iter().cloned().collect());
    for x in &roots.roots {
        if spanned.contains(x) && !part.contains(x) {
            return Err(format!("part is not closed in its conical span, it picks up {:?}", x));
        }
    }
    let full: Vec<Mat<Rat>> = weight_spaces.values().flatten().cloned().collect();
    let full_span = Subspace::from_vecs(
        msize * msize,
        full.iter().map(|m| m.flat().to_vec()).collect(),
    );
    for a in &full {
        for b in &full {
            if !full_span.contains_vec(a.bracket(b).flat()) {
                return Err("weight spaces do not span a Lie algebra".to_string());
            }
        }
    }
    let zero_key = vec![rat(0); rank];
    let mut gens: Vec<Vec<Rat>> = Vec::new();
    if let Some(mats) = weight_spaces.get(&zero_key) {
        for m in mats {
            gens.push(m.flat().to_vec());
        }
    }
    for chi in part {
        if let Some(mats) = weight_spaces.get(&neg_vec(chi)) {
            for m in mats {
                gens.push(m.flat().to_vec());
            }
        }
    }
    let span = Subspace::from_vecs(msize * msize, gens);
    let basis_mats: Vec<Mat<Rat>> = (0..span.dim())
        .map(|j| Mat::new(msize, msize, span.basis().col(j)))
        .collect();
    let mut closed = true;
    'outer: for a in &basis_mats {
        for b in &basis_mats {
            if !span.contains_vec(a.bracket(b).flat()) {
                closed = false;
                break 'outer;
            }
        }
    }
    Ok(ParabolicData {
        msize,
        span,
        bracket_closed: closed,
    })
}

#[derive(Clone, Debug)]
pub struct PlusPartReport {
    pub plus_part: Vec<Vec<Rat>>,
    pub parabolic: bool,
    pub sigma_plus_matches_faces: bool,
    pub consistent: bool,
}

/// Takes the roots with all coordinates nonnegative as the plus part and
/// compares two readings of it. The set is parabolic when plus and minus
/// parts exhaust the roots, and the members containing the plus part
/// should then run over exactly the faces of its cone. The report records
/// both sides and whether they agree.
pub fn plus_part_test(roots: &RootSet) -> PlusPartReport {
    let plus: Vec<Vec<Rat>> = roots
        .roots
        .iter()
        .filter(|v| v.iter().all(|c| !c.is_negative()))
        .cloned()
        .collect();
    let mut cover: BTreeSet<Vec<Rat>> = plus.iter().cloned().collect();
    for v in &plus {
        cover.insert(neg_vec(v));
    }
    let all: BTreeSet<Vec<Rat>> = roots.roots.iter().cloned().collect();
    let parabolic = cover == all;
    let fan = fan_from_roots(roots);
    let plus_set: BTreeSet<Vec<Rat>> = plus.iter().cloned().collect();
    let sigma_plus: Vec<&Cone> = fan
        .members
        .iter()
        .filter(|m| plus_set.is_subset(&m.part))
        .map(|m| &m.cone)
        .collect();
    let faces = Cone::from_ineqs(roots.rank, plus.clone()).faces();
    let forward = sigma_plus
        .iter()
        .all(|c| faces.iter().any(|f| same_cone(c, f)));
    let backward = faces
        .iter()
        .all(|f| sigma_plus.iter().any(|c| same_cone(c, f)));
    let matches = forward && backward;
    PlusPartReport {
        plus_part: plus,
        parabolic,
        sigma_plus_matches_faces: matches,
        consistent: parabolic == matches,
    }
}

/// Integer weight vectors of a tensor of symmetric powers of the standard
/// plane, written in the cumulative torus coordinates. The entry pattern
/// `r` fixes the symmetric power taken in each slot; each choice of a
/// lowering count per slot gives one weight vector.
pub fn sym_weight_vectors(r: &[i64]) -> Vec<Vec<i64>> {
    assert!(r.iter().all(|&x| x >= 0), "pattern entries must be nonnegative");
    let n = r.len();
    let mut out = Vec::new();
    let mut a = vec![0i64; n];
    loop {
        let mut c = Vec::with_capacity(n);
        let mut acc = 0;
        for k in 0..n {
            acc += r[k] - 2 * a[k];
            c.push(acc);
        }
        out.push(c);
        let mut k = 0;
        loop {
            if k == n {
                return out;
            }
            if a[k] < r[k] {
                a[k] += 1;
                break;
            }
            a[k] = 0;
            k += 1;
        }
    }
}

/// Every weight vector must be sign definite, all entries nonnegative or
/// all entries nonpositive. Mixed signs in a single vector obstruct the
/// bounded realization of the associated symmetric space.
pub fn shimura_weight_test(weights: &[Vec<i64>]) -> bool {
    weights
        .iter()
        .all(|c| c.iter().all(|&v| v >= 0) || c.iter().all(|&v| v <= 0))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rv(v: &[i64]) -> Vec<Rat> {
        v.iter().map(|&x| rat(x)).collect()
    }

    #[test]
    fn root_set_validation() {
        let r = RootSet::new(2, vec![rv(&[0, 0]), rv(&[1, 0]), rv(&[-1, 0]), rv(&[1, 0])]).unwrap();
        assert_eq!(r.roots.len(), 2);
        assert_eq!(r.pair_reps().len(), 1);
        assert!(RootSet::new(2, vec![rv(&[1, 0])]).is_err());
        assert!(RootSet::new(2, vec![rv(&[1, 0, 0]), rv(&[-1, 0, 0])]).is_err());
    }

    #[test]
    fn fan_on_a_line() {
        let r = RootSet::new(1, vec![rv(&[2]), rv(&[-2])]).unwrap();
        let fan = fan_from_roots(&r);
        assert_eq!(fan.members.len(), 3);
        fan_axioms(&r, &fan).unwrap();
        let pos: BTreeSet<Vec<Rat>> = [rv(&[2])].into_iter().collect();
        let m = fan.find_part(&pos).unwrap();
        assert!(m.cone.contains(&rv(&[5])));
        assert!(!m.cone.contains(&rv(&[-5])));
        let both: BTreeSet<Vec<Rat>> = [rv(&[2]), rv(&[-2])].into_iter().collect();
        assert_eq!(fan.find_part(&both).unwrap().cone.span().dim(), 0);
    }

    #[test]
    fn fan_on_the_quadrant_roots() {
        let r = RootSet::new(
            2,
            vec![rv(&[2, 0]), rv(&[-2, 0]), rv(&[0, 2]), rv(&[0, -2])],
        )
        .unwrap();
        let fan = fan_from_roots(&r);
        assert_eq!(fan.members.len(), 9);
        fan_axioms(&r, &fan).unwrap();
        let quad: BTreeSet<Vec<Rat>> = [rv(&[2, 0]), rv(&[0, 2])].into_iter().collect();
        let m = fan.find_part(&quad).unwrap();
        assert!(m.cone.contains(&rv(&[3, 1])));
        assert!(!m.cone.contains(&rv(&[3, -1])));
    }

    #[test]
    fn fan_trivial_root_set() {
        let r = RootSet::new(2, vec![rv(&[0, 0])]).unwrap();
        let fan = fan_from_roots(&r);
        assert_eq!(fan.members.len(), 1);
        assert_eq!(fan.members[0].cone.lin.dim(), 2);
        fan_axioms(&r, &fan).unwrap();
    }

    #[test]
    fn fan_with_a_diagonal_pair() {
        let r = RootSet::new(
            2,
            vec![
                rv(&[2, 0]),
                rv(&[-2, 0]),
                rv(&[0, 2]),
                rv(&[0, -2]),
                rv(&[1, -1]),
                rv(&[-1, 1]),
            ],
        )
        .unwrap();
        let fan = fan_from_roots(&r);
        assert_eq!(fan.members.len(), 13);
        fan_axioms(&r, &fan).unwrap();
    }

    #[test]
    fn random_root_sets_satisfy_the_axioms() {
        for seed in [11u64, 12, 13] {
            let r = random_root_set(3, 4, seed);
            let fan = fan_from_roots(&r);
            fan_axioms(&r, &fan).unwrap();
        }
    }

    fn gl2_weights() -> BTreeMap<Vec<Rat>, Vec<Mat<Rat>>> {
        let e = |i: usize, j: usize| {
            Mat::from_fn(2, 2, |r, c| if (r, c) == (i, j) { rat(1) } else { rat(0) })
        };
        let mut w = BTreeMap::new();
        w.insert(rv(&[2]), vec![e(0, 1)]);
        w.insert(rv(&[-2]), vec![e(1, 0)]);
        w.insert(rv(&[0]), vec![e(0, 0), e(1, 1)]);
        w
    }

    #[test]
    fn parabolic_of_gl2() {
        let w = gl2_weights();
        let part: BTreeSet<Vec<Rat>> = [rv(&[2])].into_iter().collect();
        let p = parabolic_lie(&part, &w).unwrap();
        assert_eq!(p.span.dim(), 3);
        assert!(p.bracket_closed);
        let e21 = Mat::from_fn(2, 2, |r, c| if (r, c) == (1, 0) { rat(1) } else { rat(0) });
        let e12 = e21.transpose();
        assert!(p.span.contains_vec(e21.flat()));
        assert!(!p.span.contains_vec(e12.flat()));
        let all: BTreeSet<Vec<Rat>> = [rv(&[2]), rv(&[-2])].into_iter().collect();
        let q = parabolic_lie(&all, &w).unwrap();
        assert_eq!(q.span.dim(), 4);
        assert!(q.bracket_closed);
        let empty: BTreeSet<Vec<Rat>> = BTreeSet::new();
        assert!(parabolic_lie(&empty, &w).is_err());
    }

    #[test]
    fn plus_part_on_quadrant_roots() {
        let r = RootSet::new(
            2,
            vec![rv(&[2, 0]), rv(&[-2, 0]), rv(&[0, 2]), rv(&[0, -2])],
        )
        .unwrap();
        let rep = plus_part_test(&r);
        assert_eq!(rep.plus_part.len(), 2);
        assert!(rep.parabolic);
        assert!(rep.sigma_plus_matches_faces);
        assert!(rep.consistent);
    }

    #[test]
    fn plus_part_with_diagonal_is_not_parabolic() {
        let r = RootSet::new(
            2,
            vec![
                rv(&[2, 0]),
                rv(&[-2, 0]),
                rv(&[0, 2]),
                rv(&[0, -2]),
                rv(&[1, -1]),
                rv(&[-1, 1]),
            ],
        )
        .unwrap();
        let rep = plus_part_test(&r);
        assert!(!rep.parabolic);
        assert!(!rep.sigma_plus_matches_faces);
        assert!(rep.consistent);
    }

    #[test]
    fn sym_weights_and_sign_definiteness() {
        assert!(shimura_weight_test(&sym_weight_vectors(&[0, 0])));
        assert!(shimura_weight_test(&sym_weight_vectors(&[0, 3])));
        assert!(shimura_weight_test(&sym_weight_vectors(&[2, 1])));
        assert!(shimura_weight_test(&sym_weight_vectors(&[2, 0, 1])));
        assert!(shimura_weight_test(&sym_weight_vectors(&[2, 0, 2])));
        let bad = sym_weight_vectors(&[1, 2]);
        assert!(bad.contains(&vec![1, -1]));
        assert!(!shimura_weight_test(&bad));
        assert!(!shimura_weight_test(&[vec![0, 2, -2]]));
        assert_eq!(sym_weight_vectors(&[1, 1]).len(), 4);
    }
}
