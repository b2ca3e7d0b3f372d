//! Monoids of lattice points in cones, ratio chains, valuative orders and
//! the block coordinates of boundary charts.
//!
//! The lattice side is deliberately coordinate heavy. A monoid is stored
//! with an integer basis of the sublattice its cone spans, and the dual
//! monoid lives in the coordinates dual to that basis, so lower
//! dimensional cones get an honest Hom into N instead of a half plane.

use std::fmt;

use num::{BigInt, Signed, Zero};

use crate::cones::Cone;
use crate::mat::Mat;
use crate::scalar::{rat, Rat};
use crate::subspace::{Quot, Subspace};

fn dot(a: &[Rat], b: &[Rat]) -> Rat {
    let mut s = rat(0);
    for (x, y) in a.iter().zip(b) {
        s += x.clone() * y.clone();
    }
    s
}

fn is_zero_vec(v: &[Rat]) -> bool {
    v.iter().all(|c| c.is_zero())
}

/// Integer column basis of the group generated by the given integral
/// vectors, by Euclidean column reduction row by row.
fn lattice_basis(ambient: usize, vecs: &[Vec<Rat>]) -> Vec<Vec<Rat>> {
    let mut work: Vec<Vec<BigInt>> = Vec::new();
    for v in vecs {
        let mut c = Vec::with_capacity(ambient);
        for x in v {
            assert!(x.is_integer(), "lattice vectors must be integral");
            c.push(x.numer().clone());
        }
        if c.iter().any(|x| !x.is_zero()) {
            work.push(c);
        }
    }
    let mut basis: Vec<Vec<BigInt>> = Vec::new();
    for row in 0..ambient {
        loop {
            let idx: Vec<usize> = (0..work.len())
                .filter(|&c| !work[c][row].is_zero())
                .collect();
            if idx.is_empty() {
                break;
            }
            if idx.len() == 1 {
                let col = work.remove(idx[0]);
                basis.push(col);
                break;
            }
            let &pivot = idx
                .iter()
                .min_by_key(|&&c| work[c][row].magnitude().clone())
                .unwrap();
            let pcol = work[pivot].clone();
            for &c in &idx {
                if c == pivot {
                    continue;
                }
                let q = &work[c][row] / &pcol[row];
                for r in 0..ambient {
                    let sub = &q * &pcol[r];
                    work[c][r] -= sub;
                }
            }
        }
    }
    basis
        .into_iter()
        .map(|c| c.into_iter().map(Rat::from_integer).collect())
        .collect()
}

/// Lattice points of a sharp cone together with the dual monoid.
///
/// `gens` is the Hilbert basis of the points of `cone` in the standard
/// lattice. `span_basis` is an integer basis of the subgroup those points
/// generate, and `dual_gens` generate the monoid of N-valued functionals
/// in the coordinates dual to `span_basis`.
#[derive(Clone, Debug)]
pub struct ConeMonoid {
    pub lattice_tag: String,
    pub cone: Cone,
    pub gens: Vec<Vec<Rat>>,
    pub span_basis: Vec<Vec<Rat>>,
    pub dual_gens: Vec<Vec<Rat>>,
}

impl ConeMonoid {
    /// Coordinates of a monoid element in the span basis.
    pub fn coords(&self, v: &[Rat]) -> Option<Vec<Rat>> {
        let b = Mat::from_cols(self.span_basis.clone());
        b.solve(v)
    }

    /// Value of the `j`-th dual generator on an element.
    pub fn pair(&self, dual_idx: usize, v: &[Rat]) -> Option<Rat> {
        self.coords(v).map(|c| dot(&self.dual_gens[dual_idx], &c))
    }

    /// Values of all dual generators on all Hilbert generators.
    pub fn pairing_table(&self) -> Mat<Rat> {
        Mat::from_fn(self.dual_gens.len(), self.gens.len(), |i, j| {
            self.pair(i, &self.gens[j]).expect("generator outside its own span")
        })
    }
}

/// Hilbert basis of the cone's lattice points and of the dual monoid.
/// The cone must be sharp, otherwise the dual would collapse.
pub fn dual_monoid(cone: &Cone, lattice_tag: &str) -> Result<ConeMonoid, String> {
    if !cone.is_pointed() {
        return Err("cone is not sharp, the dual monoid would not separate its units".to_string());
    }
    let gens = cone.hilbert_basis();
    if gens.is_empty() {
        return Ok(ConeMonoid {
            lattice_tag: lattice_tag.to_string(),
            cone: cone.clone(),
            gens,
            span_basis: vec![],
            dual_gens: vec![],
        });
    }
    let span_basis = lattice_basis(cone.dim, &gens);
    let d = span_basis.len();
    let b = Mat::from_cols(span_basis.clone());
    let mut coords: Vec<Vec<Rat>> = Vec::new();
    for g in &gens {
        let c = b.solve(g).ok_or("generator outside the computed span")?;
        if c.iter().any(|x| !x.is_integer()) {
            return Err("span basis does not generate the point lattice".to_string());
        }
        coords.push(c);
    }
    let dual_gens = Cone::from_gens(d, coords.clone()).dual().hilbert_basis();
    for u in &dual_gens {
        for c in &coords {
            let v = dot(u, c);
            if !v.is_integer() || v.is_negative() {
                return Err("dual generator is not N-valued on the monoid".to_string());
            }
        }
    }
    Ok(ConeMonoid {
        lattice_tag: lattice_tag.to_string(),
        cone: cone.clone(),
        gens,
        span_basis,
        dual_gens,
    })
}

/// Value in the closed interval from 0 to infinity.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum RatioValue {
    Finite(Rat),
    Infinite,
}

impl RatioValue {
    pub fn recip(&self) -> RatioValue {
        match self {
            RatioValue::Infinite => RatioValue::Finite(rat(0)),
            RatioValue::Finite(q) if q.is_zero() => RatioValue::Infinite,
            RatioValue::Finite(q) => RatioValue::Finite(q.recip()),
        }
    }

    /// Product, undefined exactly for zero times infinity.
    pub fn mul(&self, other: &RatioValue) -> Option<RatioValue> {
        match (self, other) {
            (RatioValue::Finite(a), RatioValue::Finite(b)) => {
                Some(RatioValue::Finite(a.clone() * b.clone()))
            }
            (RatioValue::Infinite, RatioValue::Finite(b)) if b.is_zero() => None,
            (RatioValue::Finite(a), RatioValue::Infinite) if a.is_zero() => None,
            _ => Some(RatioValue::Infinite),
        }
    }

    pub fn add(&self, other: &RatioValue) -> RatioValue {
        match (self, other) {
            (RatioValue::Finite(a), RatioValue::Finite(b)) => {
                RatioValue::Finite(a.clone() + b.clone())
            }
            _ => RatioValue::Infinite,
        }
    }
}

impl fmt::Display for RatioValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RatioValue::Finite(q) => write!(f, "{}", q),
            RatioValue::Infinite => write!(f, "inf"),
        }
    }
}

/// Strictly increasing chain of faces of an ambient cone, with a marked
/// interior point on each face and an optional residual tail.
///
/// Two chains are the same boundary point when the faces agree and the
/// interior points agree up to a positive scalar modulo the span of the
/// previous face; `normal_form` computes exactly that invariant.
#[derive(Clone, Debug)]
pub struct RatioChain {
    pub ambient: Cone,
    pub faces: Vec<Cone>,
    pub interiors: Vec<Vec<Rat>>,
    pub tail: Option<Vec<Rat>>,
}

impl RatioChain {
    pub fn new(
        ambient: Cone,
        faces: Vec<Cone>,
        interiors: Vec<Vec<Rat>>,
        tail: Option<Vec<Rat>>,
    ) -> Result<RatioChain, String> {
        if faces.len() != interiors.len() {
            return Err("one interior point per face is required".to_string());
        }
        for (j, f) in faces.iter().enumerate() {
            if !f.is_face_of(&ambient) {
                return Err(format!("chain member {} is not a face of the ambient cone", j));
            }
            if !f.contains_in_relint(&interiors[j]) {
                return Err(format!("marked point {} is not interior to its face", j));
            }
            if j > 0 {
                if !f.contains_cone(&faces[j - 1]) || same_faces(f, &faces[j - 1]) {
                    return Err(format!("chain is not strictly increasing at step {}", j));
                }
            }
        }
        Ok(RatioChain {
            ambient,
            faces,
            interiors,
            tail,
        })
    }

    pub fn depth(&self) -> usize {
        self.faces.len()
    }

    /// Canonical coordinates of each interior point modulo the previous
    /// span, scaled so the first nonzero coordinate has absolute value one.
    pub fn normal_form(&self) -> Vec<Vec<Rat>> {
        let d = self.ambient.dim;
        let mut out = Vec::new();
        for j in 0..self.faces.len() {
            let small = if j == 0 {
                Subspace::zero(d)
            } else {
                self.faces[j - 1].span()
            };
            let q = Quot::new(&Subspace::full(d), &small);
            let mut c = q.project_vec(&self.interiors[j]);
            if let Some(p) = c.iter().position(|x| !x.is_zero()) {
                let s = c[p].clone().abs();
                for x in c.iter_mut() {
                    *x /= s.clone();
                }
            }
            out.push(c);
        }
        out
    }

    pub fn same_class(&self, other: &RatioChain) -> bool {
        if !same_faces(&self.ambient, &other.ambient) || self.depth() != other.depth() {
            return false;
        }
        for (a, b) in self.faces.iter().zip(&other.faces) {
            if !same_faces(a, b) {
                return false;
            }
        }
        self.normal_form() == other.normal_form() && self.tail == other.tail
    }
}

fn same_faces(a: &Cone, b: &Cone) -> bool {
    a.contains_cone(b) && b.contains_cone(a)
}

/// Ratio of two monoid elements along a chain. The level used is the
/// largest one whose predecessor face kills both elements; division by a
/// killed denominator gives infinity. When every face kills both elements
/// the ratio carries no information and this is an error, which cannot
/// happen on nonunit elements once the chain reaches the whole cone.
pub fn ratio_eval(chain: &RatioChain, f: &[Rat], g: &[Rat]) -> Result<RatioValue, String> {
    let dual = chain.ambient.dual();
    if !dual.contains(f) || !dual.contains(g) {
        return Err("element outside the monoid of the chain".to_string());
    }
    let level = |x: &[Rat]| -> Option<usize> {
        chain
            .interiors
            .iter()
            .position(|n| dot(n, x).is_positive())
    };
    let (lf, lg) = (level(f), level(g));
    let j = match (lf, lg) {
        (None, None) => {
            return Err("both elements are killed by the whole chain".to_string());
        }
        (Some(a), Some(b)) => a.min(b),
        (Some(a), None) => a,
        (None, Some(b)) => b,
    };
    let vf = dot(&chain.interiors[j], f);
    let vg = dot(&chain.interiors[j], g);
    if vg.is_zero() {
        Ok(RatioValue::Infinite)
    } else {
        Ok(RatioValue::Finite(vf / vg))
    }
}

/// Valuative order on the group of a cone monoid, restricted to preset
/// families so that membership and ratios have closed forms. A single
/// functional is the order by its sign; a lex order compares a list of
/// functionals lexicographically.
#[derive(Clone, Debug)]
pub enum ValuativeMonoid {
    Functional(Vec<Rat>),
    Lex(Vec<Vec<Rat>>),
}

impl ValuativeMonoid {
    pub fn functionals(&self) -> Vec<Vec<Rat>> {
        match self {
            ValuativeMonoid::Functional(w) => vec![w.clone()],
            ValuativeMonoid::Lex(os) => os.clone(),
        }
    }

    pub fn value_vector(&self, x: &[Rat]) -> Vec<Rat> {
        self.functionals().iter().map(|o| dot(o, x)).collect()
    }

    /// Lex nonnegativity of the value vector.
    pub fn contains(&self, x: &[Rat]) -> bool {
        for v in self.value_vector(x) {
            if v.is_positive() {
                return true;
            }
            if v.is_negative() {
                return false;
            }
        }
        true
    }

    /// The order must contain the monoid of the cone and meet it in no
    /// unit except the origin. Checked by peeling faces: each functional
    /// has to be nonnegative on the part of the cone killed by the
    /// previous ones, and nothing of the cone may survive all of them.
    pub fn validate(&self, primal: &Cone) -> Result<(), String> {
        if !primal.is_pointed() {
            return Err("valuative orders are set up over sharp cones".to_string());
        }
        let mut face = primal.clone();
        for (i, o) in self.functionals().iter().enumerate() {
            if o.len() != primal.dim {
                return Err("functional of wrong length".to_string());
            }
            for r in &face.rays {
                if dot(o, r).is_negative() {
                    return Err(format!(
                        "functional {} is negative on the cone part left by its predecessors",
                        i
                    ));
                }
            }
            let cut = Cone::from_ineqs(
                primal.dim,
                vec![o.clone(), o.iter().map(|c| -c.clone()).collect()],
            );
            face = face.intersect(&cut);
        }
        if !face.rays.is_empty() || face.lin.dim() > 0 {
            return Err("the order meets the monoid in units other than the origin".to_string());
        }
        Ok(())
    }
}

fn lead(v: &[Rat]) -> Option<usize> {
    v.iter().position(|x| !x.is_zero())
}

/// Closed form of the valuative ratio, the supremum of a/b over the pairs
/// with f^b/g^a in the order. Computed by comparing leading values.
pub fn valuative_ratio(
    v: &ValuativeMonoid,
    primal: &Cone,
    f: &[Rat],
    g: &[Rat],
) -> Result<RatioValue, String> {
    v.validate(primal)?;
    if !primal.contains(f) || !primal.contains(g) {
        return Err("element outside the monoid".to_string());
    }
    let u = v.value_vector(f);
    let w = v.value_vector(g);
    match (lead(&u), lead(&w)) {
        (None, None) => Err("ratio of two units is not constrained".to_string()),
        (Some(_), None) => Ok(RatioValue::Infinite),
        (None, Some(_)) => Ok(RatioValue::Finite(rat(0))),
        (Some(a), Some(b)) => {
            if a < b {
                Ok(RatioValue::Infinite)
            } else if a > b {
                Ok(RatioValue::Finite(rat(0)))
            } else {
                Ok(RatioValue::Finite(u[a].clone() / w[b].clone()))
            }
        }
    }
}

/// Two sided search with a denominator cap. Returns the best lower bound
/// from the supremum side and upper bound from the infimum side, after
/// checking they do not cross and that they bracket the closed form.
pub fn valuative_ratio_checked(
    v: &ValuativeMonoid,
    primal: &Cone,
    f: &[Rat],
    g: &[Rat],
    cap: i64,
) -> Result<(RatioValue, RatioValue), String> {
    let closed = valuative_ratio(v, primal, f, g)?;
    let mut lo: Option<Rat> = None;
    let mut hi: Option<Rat> = None;
    for b in 1..=cap {
        for a in 0..=cap {
            let fwd: Vec<Rat> = f
                .iter()
                .zip(g)
                .map(|(x, y)| rat(b) * x.clone() - rat(a) * y.clone())
                .collect();
            if v.contains(&fwd) {
                let q = rat(a) / rat(b);
                if lo.as_ref().map_or(true, |c| q > *c) {
                    lo = Some(q);
                }
            }
            let bwd: Vec<Rat> = f
                .iter()
                .zip(g)
                .map(|(x, y)| rat(a) * y.clone() - rat(b) * x.clone())
                .collect();
            if v.contains(&bwd) {
                let q = rat(a) / rat(b);
                if hi.as_ref().map_or(true, |c| q < *c) {
                    hi = Some(q);
                }
            }
        }
    }
    let lo = lo.map(RatioValue::Finite).unwrap_or(RatioValue::Finite(rat(0)));
    let hi = hi.map(RatioValue::Finite).unwrap_or(RatioValue::Infinite);
    let leq = |x: &RatioValue, y: &RatioValue| match (x, y) {
        (_, RatioValue::Infinite) => true,
        (RatioValue::Infinite, _) => false,
        (RatioValue::Finite(p), RatioValue::Finite(q)) => p <= q,
    };
    if !leq(&lo, &hi) {
        return Err("order oracle inconsistency, the supremum exceeds the infimum".to_string());
    }
    if !leq(&lo, &closed) || !leq(&closed, &hi) {
        return Err("closed form escapes the search bracket".to_string());
    }
    Ok((lo, hi))
}

/// Ratio chain reading off the same ratios as a valuative order. Faces of
/// the dual cone are the annihilators of the parts of the primal cone
/// peeled off by the functionals; interior points are the functionals
/// pushed into the right relative interior.
pub fn induced_chain(v: &ValuativeMonoid, primal: &Cone) -> Result<RatioChain, String> {
    v.validate(primal)?;
    if primal.span().dim() != primal.dim {
        return Err("induced chains need a full dimensional cone".to_string());
    }
    let ambient = primal.dual();
    let mut faces: Vec<Cone> = Vec::new();
    let mut interiors: Vec<Vec<Rat>> = Vec::new();
    let mut peeled = primal.clone();
    for o in v.functionals() {
        let cut = Cone::from_ineqs(
            primal.dim,
            vec![o.clone(), o.iter().map(|c| -c.clone()).collect()],
        );
        let next = peeled.intersect(&cut);
        if same_faces(&next, &peeled) {
            continue;
        }
        let mut rows = ambient.ineqs.clone();
        for r in &next.rays {
            rows.push(r.clone());
            rows.push(r.iter().map(|c| -c.clone()).collect());
        }
        let sigma = Cone::from_ineqs(primal.dim, rows);
        let mut n = o.clone();
        if let Some(last) = faces.last() {
            let p = last.relint_point();
            let mut t = rat(1);
            for r in &primal.rays {
                let num = dot(&o, r);
                let den = dot(&p, r);
                if num.is_negative() && den.is_positive() {
                    let need = rat(1) - num.clone() / den.clone();
                    if need > t {
                        t = need;
                    }
                }
            }
            for (x, y) in n.iter_mut().zip(&p) {
                *x += t.clone() * y.clone();
            }
        }
        if !sigma.contains_in_relint(&n) {
            return Err("functional could not be moved into the face interior".to_string());
        }
        faces.push(sigma);
        interiors.push(n);
        peeled = next;
    }
    if faces.is_empty() || !same_faces(faces.last().unwrap(), &ambient) {
        return Err("the order does not exhaust the cone".to_string());
    }
    RatioChain::new(ambient, faces, interiors, None)
}

/// Base of lattice vectors adapted to a chain, split into one block per
/// level with a distinguished representative in each.
#[derive(Clone, Debug)]
pub struct GoodBase {
    pub vectors: Vec<Vec<Rat>>,
    pub blocks: Vec<Vec<usize>>,
    pub reps: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct ChartCoords {
    pub t: Vec<Rat>,
    pub block_ratios: Vec<Vec<(usize, Rat)>>,
    pub tail: Option<Vec<Rat>>,
}

fn chain_quot(chain: &RatioChain, j: usize) -> Quot<Rat> {
    let d = chain.ambient.dim;
    let small = if j == 0 {
        Subspace::zero(d)
    } else {
        chain.faces[j - 1].span()
    };
    Quot::new(&Subspace::full(d), &small)
}

/// Coefficients of the level `j` interior point in the block vectors,
/// modulo the span of the previous face. They must exist, be unique and
/// be strictly positive for the base to be good.
fn block_solution(chain: &RatioChain, base: &GoodBase, j: usize) -> Result<Vec<Rat>, String> {
    let q = chain_quot(chain, j);
    let target = q.project_vec(&chain.interiors[j]);
    let cols: Vec<Vec<Rat>> = base.blocks[j]
        .iter()
        .map(|&s| q.project_vec(&base.vectors[s]))
        .collect();
    if cols.is_empty() {
        return Err(format!("no base vectors serve level {}", j));
    }
    let m = Mat::from_cols(cols);
    if m.rank() != base.blocks[j].len() {
        return Err(format!("base vectors of level {} are dependent modulo the previous face", j));
    }
    let a = m
        .solve(&target)
        .ok_or(format!("interior point of level {} is not spanned by its block", j))?;
    if a.iter().any(|c| !c.is_positive()) {
        return Err(format!("level {} needs strictly positive coefficients", j));
    }
    Ok(a)
}

/// Checks a supplied base against a chain. Vectors are assigned to the
/// first level whose face contains them.
pub fn validate_base(chain: &RatioChain, vectors: &[Vec<Rat>]) -> Result<GoodBase, String> {
    let n = chain.depth();
    let mut blocks: Vec<Vec<usize>> = vec![Vec::new(); n];
    for (s, v) in vectors.iter().enumerate() {
        if is_zero_vec(v) {
            return Err("zero vector in the base".to_string());
        }
        let j = (0..n)
            .find(|&j| chain.faces[j].contains(v))
            .ok_or("base vector outside the cone chain")?;
        blocks[j].push(s);
    }
    let reps: Vec<usize> = blocks
        .iter()
        .enumerate()
        .map(|(j, b)| b.first().copied().ok_or(format!("level {} has an empty block", j)))
        .collect::<Result<_, _>>()?;
    let base = GoodBase {
        vectors: vectors.to_vec(),
        blocks,
        reps,
    };
    for j in 0..n {
        block_solution(chain, &base, j)?;
    }
    Ok(base)
}

fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    if k == 0 {
        return vec![vec![]];
    }
    if n < k {
        return vec![];
    }
    let mut out = Vec::new();
    for rest in combinations(n - 1, k - 1) {
        let mut c = rest.clone();
        c.push(n - 1);
        out.push(c);
    }
    out.extend(combinations(n - 1, k));
    out
}

/// Builds a good base from the rays of the chain faces, one simplicial
/// block per level containing the marked point positively.
pub fn good_base_for(chain: &RatioChain) -> Result<GoodBase, String> {
    let n = chain.depth();
    let mut vectors: Vec<Vec<Rat>> = Vec::new();
    let mut blocks: Vec<Vec<usize>> = Vec::new();
    let mut reps: Vec<usize> = Vec::new();
    for j in 0..n {
        let q = chain_quot(chain, j);
        let prev_dim = if j == 0 { 0 } else { chain.faces[j - 1].span().dim() };
        let need = chain.faces[j].span().dim() - prev_dim;
        let target = q.project_vec(&chain.interiors[j]);
        let mut cands: Vec<Vec<Rat>> = Vec::new();
        for r in &chain.faces[j].rays {
            if !is_zero_vec(&q.project_vec(r)) {
                cands.push(r.clone());
            }
        }
        let mut found = false;
        'subset: for sel in combinations(cands.len(), need) {
            let cols: Vec<Vec<Rat>> = sel.iter().map(|&i| q.project_vec(&cands[i])).collect();
            let m = Mat::from_cols(cols);
            if m.rank() != need {
                continue;
            }
            if let Some(a) = m.solve(&target) {
                if a.iter().all(|c| c.is_positive()) {
                    let start = vectors.len();
                    for &i in &sel {
                        vectors.push(cands[i].clone());
                    }
                    blocks.push((start..start + need).collect());
                    reps.push(start);
                    found = true;
                    break 'subset;
                }
            }
        }
        if !found {
            return Err(format!("no simplicial block covers the marked point of level {}", j));
        }
    }
    Ok(GoodBase {
        vectors,
        blocks,
        reps,
    })
}

/// Chart coordinates of the boundary point given by a chain. Every cross
/// block ratio is exactly zero there; the surviving data are the within
/// block ratios of the marked points and the tail.
pub fn chart_coords(
    chain: &RatioChain,
    base: Option<&[Vec<Rat>]>,
) -> Result<(GoodBase, ChartCoords), String> {
    let gb = match base {
        Some(v) => validate_base(chain, v)?,
        None => good_base_for(chain)?,
    };
    let n = chain.depth();
    let mut ratios = Vec::new();
    for j in 0..n {
        let a = block_solution(chain, &gb, j)?;
        let rep_pos = gb.blocks[j]
            .iter()
            .position(|&s| s == gb.reps[j])
            .expect("representative inside its block");
        let scale = a[rep_pos].clone();
        ratios.push(
            gb.blocks[j]
                .iter()
                .zip(&a)
                .map(|(&s, c)| (s, c.clone() / scale.clone()))
                .collect(),
        );
    }
    Ok((
        gb,
        ChartCoords {
            t: vec![rat(0); n],
            block_ratios: ratios,
            tail: chain.tail.clone(),
        },
    ))
}

impl GoodBase {
    /// Chart values of an interior point with coordinates `y` over the
    /// base vectors. The last cross block ratio is taken against the unit
    /// scale, so a point deep in the cone has every t close to zero.
    pub fn interior_values(&self, y: &[Rat]) -> Result<(Vec<Rat>, Vec<Vec<(usize, Rat)>>), String> {
        if y.len() != self.vectors.len() {
            return Err("one coordinate per base vector is required".to_string());
        }
        if y.iter().any(|c| !c.is_positive()) {
            return Err("interior coordinates must be positive".to_string());
        }
        let n = self.blocks.len();
        let mut t = Vec::new();
        for j in 0..n {
            let num = if j + 1 < n {
                y[self.reps[j + 1]].clone()
            } else {
                rat(1)
            };
            t.push(num / y[self.reps[j]].clone());
        }
        let ratios = self
            .blocks
            .iter()
            .enumerate()
            .map(|(j, b)| {
                b.iter()
                    .map(|&s| (s, y[s].clone() / y[self.reps[j]].clone()))
                    .collect()
            })
            .collect();
        Ok((t, ratios))
    }
}
