//! Monomial paths into the boundary and what can be decided about
//! their limits.  A path moves the Hodge filtration by exp(i sum
//! y_j(t) N_j) with y_j(t) = c_j t^(-e_j), so along the grid t -> 0
//! the directions with larger exponents dominate.  The classification
//! happens at three levels: the face together with its imaginary
//! orbit, the ratio chain of dominant parts, and the full exponent
//! vector as the valuative refinement.  The exponent bookkeeping is
//! exact; floating point only shows up in illustrative trace columns.

use crate::corpus;
use hodge_core::cones::Cone;
use hodge_core::filtration::DecFiltration;
use hodge_core::mat::Mat;
use hodge_core::mhs::{delta_splitting, elliptic, hodge_tate, validate_mhs, MHSInstance};
use hodge_core::monodromy::NilpotentConeInstance;
use hodge_core::monoid::RatioChain;
use hodge_core::nilporb::{generates_nilpotent_orbit, Verdict};
use hodge_core::polarized::{
    hodge_metric, quadratic_value, rat_pow, FormFamily, Splitting,
};
use hodge_core::scalar::{
    fmt_f64_15, fmt_rat, gauss, gi, rat, rat_to_f64, ratio, Gauss, Rat,
};
use hodge_core::sl2::{ad_component, associate_sl2, weight_chain, WeightChain};
use hodge_core::subspace::Subspace;
use num::traits::{One, Signed, Zero};
use std::collections::BTreeMap;

/// The default grid runs t through 2^0 down to 2^(-20).
pub fn default_grid() -> Vec<Rat> {
    (0..=20).map(|k| ratio(1, 1i64 << k)).collect()
}

#[derive(Clone, Debug)]
pub struct PathSpec {
    pub base: MHSInstance,
    pub cone: NilpotentConeInstance,
    pub exponents: Vec<Rat>,
    pub coefficients: Vec<Rat>,
    pub grid: Vec<Rat>,
}

impl PathSpec {
    pub fn new(
        base: MHSInstance,
        cone: NilpotentConeInstance,
        exponents: Vec<Rat>,
        coefficients: Vec<Rat>,
    ) -> Result<Self, String> {
        let m = cone.generators.len();
        if exponents.len() != m || coefficients.len() != m {
            return Err(format!(
                "cone has {} generators, got {} exponents and {} coefficients",
                m,
                exponents.len(),
                coefficients.len()
            ));
        }
        for e in &exponents {
            if e.is_negative() {
                return Err(format!("negative exponent {}", fmt_rat(e)));
            }
        }
        for c in &coefficients {
            if !c.is_positive() {
                return Err(format!("coefficient {} is not positive", fmt_rat(c)));
            }
        }
        cone.validate(Some(&base.w))?;
        Ok(PathSpec {
            base,
            cone,
            exponents,
            coefficients,
            grid: default_grid(),
        })
    }

    pub fn with_grid(mut self, grid: Vec<Rat>) -> Self {
        self.grid = grid;
        self
    }

    /// Exact values of the imaginary directions at a grid point.
    /// Available only when every exponent is an integer.
    pub fn y_at(&self, t: &Rat) -> Result<Vec<Rat>, String> {
        if !t.is_positive() {
            return Err("grid parameter must be positive".to_string());
        }
        let mut out = Vec::new();
        for (e, c) in self.exponents.iter().zip(&self.coefficients) {
            if !e.is_integer() {
                return Err(format!(
                    "exponent {} is not integral, no exact value",
                    fmt_rat(e)
                ));
            }
            let ei: i64 = e
                .to_integer()
                .try_into()
                .map_err(|_| "exponent overflow".to_string())?;
            out.push(c.clone() * rat_pow(t, -ei));
        }
        Ok(out)
    }

    pub fn y_at_f64(&self, t: f64) -> Vec<f64> {
        self.exponents
            .iter()
            .zip(&self.coefficients)
            .map(|(e, c)| rat_to_f64(c) * t.powf(-rat_to_f64(e)))
            .collect()
    }

    /// The instance at a grid point, Hodge filtration moved by
    /// exp(i sum y_j N_j).
    pub fn point_at(&self, t: &Rat) -> Result<MHSInstance, String> {
        let y = self.y_at(t)?;
        let z = self.cone.element(&y);
        let e = z.lift().scale(&gi(0, 1)).exp_nilpotent();
        Ok(MHSInstance::new(
            self.base.dim,
            self.base.w.clone(),
            self.base.f.apply(&e),
        ))
    }
}

/// Exponent classes of a path, dominant first, with the ratio chain
/// they span in coefficient space.
#[derive(Clone, Debug)]
pub struct PathClass {
    pub chain: RatioChain,
    /// generator indices grouped by equal exponent, descending
    pub classes: Vec<Vec<usize>>,
    /// the distinct positive exponents, descending
    pub class_exponents: Vec<Rat>,
    /// indices whose exponent is zero; these directions stay bounded
    pub residual: Vec<usize>,
}

impl PathClass {
    /// Decay rates of the successive ratio parameters: differences of
    /// consecutive class exponents, ending at the last exponent.
    pub fn rates(&self) -> Vec<Rat> {
        let n = self.class_exponents.len();
        (0..n)
            .map(|j| {
                if j + 1 < n {
                    &self.class_exponents[j] - &self.class_exponents[j + 1]
                } else {
                    self.class_exponents[j].clone()
                }
            })
            .collect()
    }
}

/// Groups the path by descending exponent and records the chain of
/// coordinate faces with their interior points sum c_s e_s.  All
/// exponents zero is not an error: the chain is empty and everything
/// sits in the residual part.
pub fn monomial_path_class(path: &PathSpec) -> Result<PathClass, String> {
    let m = path.exponents.len();
    let ambient = Cone::from_gens(
        m,
        (0..m)
            .map(|i| {
                let mut v = vec![Rat::zero(); m];
                v[i] = Rat::one();
                v
            })
            .collect(),
    );
    let mut by_exp: BTreeMap<Rat, Vec<usize>> = BTreeMap::new();
    let mut residual = Vec::new();
    for (i, e) in path.exponents.iter().enumerate() {
        if e.is_zero() {
            residual.push(i);
        } else {
            by_exp.entry(e.clone()).or_default().push(i);
        }
    }
    let mut classes: Vec<Vec<usize>> = Vec::new();
    let mut class_exponents = Vec::new();
    for (e, idx) in by_exp.into_iter().rev() {
        class_exponents.push(e);
        classes.push(idx);
    }
    let mut faces = Vec::new();
    let mut interiors = Vec::new();
    let mut covered: Vec<usize> = Vec::new();
    for cls in &classes {
        covered.extend(cls.iter().cloned());
        let gens = covered
            .iter()
            .map(|&i| {
                let mut v = vec![Rat::zero(); m];
                v[i] = Rat::one();
                v
            })
            .collect();
        faces.push(Cone::from_gens(m, gens));
        let mut o = vec![Rat::zero(); m];
        for &i in &covered {
            o[i] = path.coefficients[i].clone();
        }
        interiors.push(o);
    }
    let tail = if residual.is_empty() {
        None
    } else {
        let mut b = vec![Rat::zero(); m];
        for &i in &residual {
            b[i] = path.coefficients[i].clone();
        }
        Some(b)
    };
    let chain = RatioChain::new(ambient, faces, interiors, tail)?;
    Ok(PathClass {
        chain,
        classes,
        class_exponents,
        residual,
    })
}

/// Ad weights of a matrix with respect to a list of gradings.  The
/// joint components are extracted one grading at a time; each one
/// contributes the rate weighted sum of its weight vector.
#[derive(Clone, Debug, PartialEq)]
pub struct Fingerprint {
    /// per grading, the sorted ad weights that actually occur
    pub per_grading: Vec<Vec<i64>>,
    /// sorted distinct values of sum_j rate_j * weight_j over the
    /// joint components
    pub totals: Vec<Rat>,
}

pub fn tau_weight_profile(x: &Mat<Rat>, gradings: &[Splitting], rates: &[Rat]) -> Fingerprint {
    assert_eq!(gradings.len(), rates.len());
    let mut comps: Vec<(Vec<i64>, Mat<Rat>)> = vec![(Vec::new(), x.clone())];
    for g in gradings {
        let keys: Vec<i64> = g.grading.keys().cloned().collect();
        let lo = keys.first().cloned().unwrap_or(0);
        let hi = keys.last().cloned().unwrap_or(0);
        let mut next = Vec::new();
        for (pref, m) in &comps {
            for c in (lo - hi)..=(hi - lo) {
                let part = ad_component(m, g, c);
                if !part.is_zero() {
                    let mut p = pref.clone();
                    p.push(c);
                    next.push((p, part));
                }
            }
        }
        comps = next;
    }
    let mut per_grading: Vec<Vec<i64>> = vec![Vec::new(); gradings.len()];
    let mut totals: Vec<Rat> = Vec::new();
    for (pat, _) in &comps {
        let mut tot = Rat::zero();
        for (j, &c) in pat.iter().enumerate() {
            per_grading[j].push(c);
            tot += rates[j].clone() * rat(c);
        }
        totals.push(tot);
    }
    for v in &mut per_grading {
        v.sort();
        v.dedup();
    }
    totals.sort();
    totals.dedup();
    Fingerprint {
        per_grading,
        totals,
    }
}

/// What the classification of one path reports.
#[derive(Clone, Debug)]
pub struct BoundaryReport {
    /// generator indices with divergent exponent, sorted
    pub sharp_face: Vec<usize>,
    /// a point of the imaginary orbit attached to the face: the base
    /// filtration moved by exp(i sum c_j N_j) over all directions,
    /// bounded ones included
    pub sharp_witness: DecFiltration<Gauss>,
    pub ratio_chain: RatioChain,
    pub ratio_label: String,
    /// exponent vector scaled so its first positive entry is one;
    /// paths over the same ratio chain with different vectors here
    /// are distinguished at the valuative level
    pub val_label: Vec<Rat>,
    pub classes: Vec<Vec<usize>>,
    pub rates: Vec<Rat>,
    /// relative weight filtrations along the chain of partial sums
    pub weight_filtrations: WeightChain,
    /// limit gradings, one per chain step
    pub gradings: Vec<Splitting>,
    /// rate weighted ad weights of each cone generator
    pub fingerprints: Vec<Fingerprint>,
    pub gate_evidence: Vec<String>,
    pub numeric_rows: Vec<String>,
}

/// Printable normal form of a ratio chain, face dims and marked
/// points in canonical coordinates.
pub fn ratio_label(chain: &RatioChain) -> String {
    let nf = chain.normal_form();
    let mut parts = Vec::new();
    for (j, (face, coords)) in chain.faces.iter().zip(&nf).enumerate() {
        let cs: Vec<String> = coords.iter().map(fmt_rat).collect();
        parts.push(format!("f{}:dim{}:[{}]", j, face.span().dim(), cs.join(",")));
    }
    format!("depth{};{}", chain.depth(), parts.join(";"))
}

/// Exponent vector scaled so the first positive entry is one.
pub fn val_label(exponents: &[Rat]) -> Vec<Rat> {
    let lead = exponents.iter().find(|e| e.is_positive());
    match lead {
        None => exponents.to_vec(),
        Some(l) => exponents.iter().map(|e| e / l).collect(),
    }
}

/// Classifies the limit of a monomial path.  Requires the face the
/// path diverges through to generate a nilpotent orbit with the given
/// forms; everything else is derived from the associated data.
pub fn classify_limit(
    path: &PathSpec,
    forms: &FormFamily,
    tol: f64,
    max_iter: usize,
    seed: u64,
) -> Result<BoundaryReport, String> {
    let pc = monomial_path_class(path)?;
    if pc.classes.is_empty() {
        return Err("path does not degenerate, every exponent is zero".to_string());
    }
    let mut involved: Vec<usize> = pc.classes.iter().flatten().cloned().collect();
    involved.sort();
    let gate_cone = NilpotentConeInstance::new(
        path.base.dim,
        involved
            .iter()
            .map(|&i| path.cone.generators[i].clone())
            .collect(),
        "limit-face",
    );
    let decision = generates_nilpotent_orbit(&gate_cone, &path.base, forms, seed)?;
    match decision.verdict {
        Verdict::Yes => {}
        Verdict::No => {
            return Err(format!(
                "face does not generate a nilpotent orbit: {}",
                decision.evidence.join(" | ")
            ));
        }
        Verdict::Undecided => {
            return Err(format!(
                "nilpotent orbit test undecided: {}",
                decision.evidence.join(" | ")
            ));
        }
    }
    let class_gens: Vec<Mat<Rat>> = pc
        .classes
        .iter()
        .map(|cls| {
            let mut acc = Mat::zero(path.base.dim, path.base.dim);
            for &i in cls {
                acc = acc.add(&path.cone.generators[i].scale(&path.coefficients[i]));
            }
            acc
        })
        .collect();
    let sl2 = associate_sl2(&class_gens, &path.base, forms, tol, max_iter, seed)?;
    let phi = weight_chain(&class_gens, &path.base.w)?;
    if phi.filtrations != sl2.w_chain {
        return Err("weight chain disagrees with the associated data".to_string());
    }
    let full = path.cone.element(&path.coefficients);
    let witness = path
        .base
        .f
        .apply(&full.lift().scale(&gi(0, 1)).exp_nilpotent());
    let gradings: Vec<Splitting> = sl2.tau_gradings[1..].to_vec();
    let rates = pc.rates();
    let fingerprints = path
        .cone
        .generators
        .iter()
        .map(|g| tau_weight_profile(g, &gradings, &rates))
        .collect();
    let numeric_rows = numeric_preview(path);
    Ok(BoundaryReport {
        sharp_face: involved,
        sharp_witness: witness,
        ratio_label: ratio_label(&pc.chain),
        ratio_chain: pc.chain,
        val_label: val_label(&path.exponents),
        classes: pc.classes,
        rates,
        weight_filtrations: phi,
        gradings,
        fingerprints,
        gate_evidence: decision.evidence,
        numeric_rows,
    })
}

fn numeric_preview(path: &PathSpec) -> Vec<String> {
    let mut header = vec!["t".to_string()];
    for j in 0..path.exponents.len() {
        header.push(format!("y{}", j));
    }
    header.push("delta_norm".to_string());
    let mut rows = vec![header.join(",")];
    let picks: Vec<usize> = if path.grid.len() <= 5 {
        (0..path.grid.len()).collect()
    } else {
        let l = path.grid.len() - 1;
        vec![0, l / 4, l / 2, 3 * l / 4, l]
    };
    for &k in &picks {
        let t = &path.grid[k];
        let mut cells = vec![fmt_rat(t)];
        for y in path.y_at_f64(rat_to_f64(t)) {
            cells.push(fmt_f64_15(y));
        }
        match path.point_at(t) {
            Ok(xt) if validate_mhs(&xt).ok => match delta_splitting(&xt) {
                Ok(d) => cells.push(fmt_f64_15(d.delta.max_abs_f64(rat_to_f64))),
                Err(_) => cells.push("undefined".to_string()),
            },
            _ => cells.push("undefined".to_string()),
        }
        rows.push(cells.join(","));
    }
    rows
}

// ---------------------------------------------------------------
// traces

#[derive(Clone, Debug, PartialEq)]
pub enum Cell {
    Exact(Rat),
    Approx(f64),
    Undefined,
}

impl Cell {
    pub fn to_f64(&self) -> Option<f64> {
        match self {
            Cell::Exact(r) => Some(rat_to_f64(r)),
            Cell::Approx(x) => Some(*x),
            Cell::Undefined => None,
        }
    }

    fn render(&self) -> String {
        match self {
            Cell::Exact(r) => fmt_rat(r),
            Cell::Approx(x) => fmt_f64_15(*x),
            Cell::Undefined => "undefined".to_string(),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum TraceColumn {
    /// the grid parameter itself
    Param,
    /// real part of the period in a two dimensional chart
    XCoord,
    /// reciprocal imaginary part of the period
    BsCoord,
    /// square root decay coordinate, numeric
    Sl2Coord,
    /// its exact square, from the Hodge metric
    Sl2CoordSq,
    /// largest entry of the delta matrix, numeric
    DeltaNorm,
    /// magnitude of one imaginary direction
    YMag(usize),
    /// entry of the split basis matrix of the delta splitting
    SplitEntry(usize, usize),
}

impl TraceColumn {
    fn name(&self) -> String {
        match self {
            TraceColumn::Param => "t".to_string(),
            TraceColumn::XCoord => "x".to_string(),
            TraceColumn::BsCoord => "bs_coord".to_string(),
            TraceColumn::Sl2Coord => "sl2_coord".to_string(),
            TraceColumn::Sl2CoordSq => "sl2_coord_sq".to_string(),
            TraceColumn::DeltaNorm => "delta_norm".to_string(),
            TraceColumn::YMag(j) => format!("y{}", j),
            TraceColumn::SplitEntry(i, j) => format!("split_{}_{}", i, j),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum Monotone {
    Increasing,
    Decreasing,
}

#[derive(Clone, Debug)]
pub struct TraceTable {
    pub header: Vec<String>,
    pub rows: Vec<Vec<Cell>>,
    /// strict monotonicity of the defined numeric values per column
    pub monotone: Vec<Option<Monotone>>,
}

impl TraceTable {
    pub fn to_csv(&self) -> String {
        let mut out = vec![self.header.join(",")];
        for row in &self.rows {
            out.push(
                row.iter()
                    .map(|c| c.render())
                    .collect::<Vec<_>>()
                    .join(","),
            );
        }
        out.join("\n") + "\n"
    }
}

fn monotone_of(vals: &[f64]) -> Option<Monotone> {
    if vals.len() < 2 {
        return None;
    }
    if vals.windows(2).all(|w| w[1] > w[0]) {
        return Some(Monotone::Increasing);
    }
    if vals.windows(2).all(|w| w[1] < w[0]) {
        return Some(Monotone::Decreasing);
    }
    None
}

/// The topmost Hodge step of a two dimensional pure chart, normalized
/// so the second coordinate is one.  The period is the first entry.
fn chart_period(x: &MHSInstance) -> Option<Gauss> {
    if x.dim != 2 {
        return None;
    }
    let top = x.f.max_recorded()?;
    let line = x.f.at(top);
    if line.dim() != 1 {
        return None;
    }
    let v = line.basis().col(0);
    if v[1].is_zero() {
        return None;
    }
    Some(v[0].clone() / v[1].clone())
}

fn metric_square(x: &MHSInstance, forms: &FormFamily) -> Option<Rat> {
    let top = x.f.max_recorded()?;
    let line = x.f.at(top);
    if line.dim() != 1 {
        return None;
    }
    let mut v = line.basis().col(0);
    if v[1].is_zero() {
        return None;
    }
    let d = v[1].clone();
    for c in &mut v {
        *c = c.clone() / d.clone();
    }
    let hm = hodge_metric(x, forms).ok()?;
    let q = quadratic_value(&hm.ambient, &v);
    if !q.im.is_zero() || !q.re.is_positive() {
        return None;
    }
    Some(rat(2) / q.re)
}

/// Evaluates the chosen columns along the grid.  Cells that cannot be
/// computed at a point are marked, not errors.
pub fn trace_path(
    path: &PathSpec,
    forms: Option<&FormFamily>,
    columns: &[TraceColumn],
) -> Result<TraceTable, String> {
    let mut cols: Vec<TraceColumn> = Vec::new();
    if columns.first() != Some(&TraceColumn::Param) {
        cols.push(TraceColumn::Param);
    }
    cols.extend(columns.iter().cloned());
    let header: Vec<String> = cols.iter().map(|c| c.name()).collect();
    let mut rows = Vec::new();
    for t in &path.grid {
        let point = path.point_at(t).ok();
        let mut row = Vec::new();
        for col in &cols {
            let cell = trace_cell(path, t, point.as_ref(), forms, col);
            row.push(cell);
        }
        rows.push(row);
    }
    let monotone = (0..cols.len())
        .map(|j| {
            let vals: Vec<f64> = rows.iter().filter_map(|r| r[j].to_f64()).collect();
            if vals.len() == rows.len() {
                monotone_of(&vals)
            } else {
                None
            }
        })
        .collect();
    Ok(TraceTable {
        header,
        rows,
        monotone,
    })
}

fn trace_cell(
    path: &PathSpec,
    t: &Rat,
    point: Option<&MHSInstance>,
    forms: Option<&FormFamily>,
    col: &TraceColumn,
) -> Cell {
    match col {
        TraceColumn::Param => Cell::Exact(t.clone()),
        TraceColumn::YMag(j) => {
            if *j >= path.exponents.len() {
                return Cell::Undefined;
            }
            match path.y_at(t) {
                Ok(y) => Cell::Exact(y[*j].clone()),
                Err(_) => Cell::Approx(path.y_at_f64(rat_to_f64(t))[*j]),
            }
        }
        TraceColumn::XCoord => match point.and_then(chart_period) {
            Some(tau) => Cell::Exact(tau.re),
            None => Cell::Undefined,
        },
        TraceColumn::BsCoord => match point.and_then(chart_period) {
            Some(tau) if tau.im.is_positive() => Cell::Exact(tau.im.recip()),
            _ => Cell::Undefined,
        },
        TraceColumn::Sl2CoordSq => match (point, forms) {
            (Some(x), Some(fm)) => match metric_square(x, fm) {
                Some(r) => Cell::Exact(r),
                None => Cell::Undefined,
            },
            _ => Cell::Undefined,
        },
        TraceColumn::Sl2Coord => match (point, forms) {
            (Some(x), Some(fm)) => match metric_square(x, fm) {
                Some(r) => Cell::Approx(rat_to_f64(&r).sqrt()),
                None => Cell::Undefined,
            },
            _ => Cell::Undefined,
        },
        TraceColumn::DeltaNorm => match point {
            Some(x) if validate_mhs(x).ok => match delta_splitting(x) {
                Ok(d) => Cell::Approx(d.delta.max_abs_f64(rat_to_f64)),
                Err(_) => Cell::Undefined,
            },
            _ => Cell::Undefined,
        },
        TraceColumn::SplitEntry(i, j) => match point.and_then(|x| real_weight_splitting(x).ok()) {
            Some(spl) => {
                let b = spl.basis_matrix();
                if *i < b.rows && *j < b.cols {
                    Cell::Exact(b[(*i, *j)].clone())
                } else {
                    Cell::Undefined
                }
            }
            None => Cell::Undefined,
        },
    }
}

/// Rational span of a conjugation stable complex subspace.
fn real_subspace(s: &Subspace<Gauss>) -> Result<Subspace<Rat>, String> {
    let n = s.basis().rows;
    let mut vecs = Vec::new();
    for j in 0..s.dim() {
        let col = s.basis().col(j);
        vecs.push(col.iter().map(|z| z.re.clone()).collect::<Vec<Rat>>());
        vecs.push(col.iter().map(|z| z.im.clone()).collect::<Vec<Rat>>());
    }
    let span = Subspace::from_vecs(n, vecs);
    if span.dim() != s.dim() {
        return Err("subspace is not defined over the reals".to_string());
    }
    Ok(span)
}

/// The real weight grading split off by the delta construction: the
/// sums of bidegree pieces of equal total weight, which are rational
/// for the split companion structure.
pub fn real_weight_splitting(x: &MHSInstance) -> Result<Splitting, String> {
    let d = delta_splitting(x)?;
    let mut by_w: BTreeMap<i64, Subspace<Gauss>> = BTreeMap::new();
    for (&(p, q), piece) in &d.split_bigrading.pieces {
        let e = by_w
            .entry(p + q)
            .or_insert_with(|| Subspace::zero(x.dim));
        *e = e.sum(piece);
    }
    let mut grading = BTreeMap::new();
    for (w, s) in by_w {
        grading.insert(w, real_subspace(&s)?);
    }
    let spl = Splitting {
        grading,
        approx: false,
    };
    if !spl.check(&x.w) {
        return Err("weight pieces do not split the filtration".to_string());
    }
    Ok(spl)
}

// ---------------------------------------------------------------
// spherical coordinates for negative weights

#[derive(Clone, Debug)]
pub struct SphericalPoint {
    pub radius: f64,
    /// weight graded components of the direction, radius one
    pub direction: Vec<(i64, Vec<f64>)>,
    /// the boundary label the ray hits at the origin; for a single
    /// point this is the direction itself
    pub class_at_zero: Vec<(i64, Vec<f64>)>,
}

fn lcm64(a: i64, b: i64) -> i64 {
    a / num::integer::gcd(a, b) * b
}

/// Homogeneous radius for a vector graded by negative weights: the
/// 2L-th root of sum x^(2L/|w|) with L the least common multiple of
/// the |w|, inverted so scaling the weight w part by t^w scales the
/// radius by t.
pub fn spherical_coords(parts: &[(i64, Vec<Rat>)]) -> Result<SphericalPoint, String> {
    if parts.is_empty() {
        return Err("no graded components".to_string());
    }
    let mut l = 1i64;
    for (w, _) in parts {
        if *w >= 0 {
            return Err(format!("weight {} is not negative", w));
        }
        l = lcm64(l, -w);
    }
    let mut s = Rat::zero();
    let mut seen_nonzero = false;
    for (w, xs) in parts {
        let k = (2 * l / (-w)) as i64;
        for x in xs {
            if !x.is_zero() {
                seen_nonzero = true;
            }
            s += rat_pow(x, k);
        }
    }
    if !seen_nonzero {
        return Err("zero vector has no direction".to_string());
    }
    let radius = rat_to_f64(&s).powf(-1.0 / (2.0 * l as f64));
    let dir: Vec<(i64, Vec<f64>)> = parts
        .iter()
        .map(|(w, xs)| {
            let scale = radius.powi((-w) as i32);
            (*w, xs.iter().map(|x| rat_to_f64(x) * scale).collect())
        })
        .collect();
    Ok(SphericalPoint {
        radius,
        class_at_zero: dir.clone(),
        direction: dir,
    })
}

/// Numeric value of the radius after the weighted scaling t^w on the
/// weight w part, for homogeneity checks.
pub fn spherical_radius_scaled(parts: &[(i64, Vec<Rat>)], t: &Rat) -> Result<f64, String> {
    let scaled: Vec<(i64, Vec<Rat>)> = parts
        .iter()
        .map(|(w, xs)| {
            (
                *w,
                xs.iter().map(|x| x * rat_pow(t, *w)).collect::<Vec<Rat>>(),
            )
        })
        .collect();
    Ok(spherical_coords(&scaled)?.radius)
}

// ---------------------------------------------------------------
// worked examples

#[derive(Clone, Debug)]
pub struct ExampleReport {
    pub name: String,
    pub claims: Vec<(String, bool)>,
    pub details: Vec<String>,
    pub csv: Option<String>,
}

impl ExampleReport {
    pub fn pass(&self) -> bool {
        self.claims.iter().all(|(_, ok)| *ok)
    }

    pub fn render(&self) -> String {
        let mut out = vec![format!(
            "example {}: {}",
            self.name,
            if self.pass() { "pass" } else { "fail" }
        )];
        for (claim, ok) in &self.claims {
            out.push(format!("  [{}] {}", if *ok { "ok" } else { "FAIL" }, claim));
        }
        for d in &self.details {
            out.push(format!("  note: {}", d));
        }
        out.join("\n")
    }
}

/// Two elliptic factors side by side: the base for the ratio and
/// valuative comparisons.
pub fn two_factor_product() -> (MHSInstance, FormFamily, NilpotentConeInstance) {
    let a = corpus::elliptic_block(gi(0, 1), 0);
    let b = corpus::elliptic_block(gi(0, 1), 0);
    let x = corpus::direct_sum(&a, &b);
    let fa = FormFamily::single(1, corpus::symp2());
    let forms = corpus::direct_sum_forms(&fa, &a.w, &fa, &b.w).expect("product forms");
    let n1 = corpus::embed_mat(&corpus::e_unit(2, 0, 1), 4, 0);
    let n2 = corpus::embed_mat(&corpus::e_unit(2, 0, 1), 4, 2);
    let cone = NilpotentConeInstance::new(4, vec![n1, n2], "twofactor");
    (x, forms, cone)
}

/// Standard representation tensored with its symmetric square: a six
/// dimensional weight three structure with one nilpotent direction
/// per factor, and a probe operator that the limit gradings weigh
/// differently depending on the exponents.
pub fn sym_square_instance() -> (MHSInstance, FormFamily, NilpotentConeInstance, Mat<Rat>) {
    let colv = |v: Vec<Gauss>| Mat::from_cols(vec![v]);
    let w1 = colv(vec![gi(0, 1), gi(1, 0)]);
    let e1 = colv(vec![gi(1, 0), gi(0, 0)]);
    let e2 = colv(vec![gi(0, 1), gi(0, 0)]);
    let w2 = colv(vec![gi(-1, 0), gi(0, 2), gi(1, 0)]);
    let wu = colv(vec![gi(0, 1), gi(1, 0), gi(0, 0)]);
    let uu = colv(vec![gi(1, 0), gi(0, 0), gi(0, 0)]);
    let uv = colv(vec![gi(0, 0), gi(1, 0), gi(0, 0)]);
    let vv = colv(vec![gi(0, 0), gi(0, 0), gi(1, 0)]);
    let f1_levels: Vec<Vec<&Mat<Gauss>>> = vec![
        vec![&e1, &e2],
        vec![&w1],
    ];
    let f2_levels: Vec<Vec<&Mat<Gauss>>> = vec![
        vec![&uu, &uv, &vv],
        vec![&w2, &wu],
        vec![&w2],
    ];
    let mut steps = BTreeMap::new();
    for p in 0..=3i64 {
        let mut gens: Vec<Vec<Gauss>> = Vec::new();
        for a in 0..=1i64 {
            for b in 0..=2i64 {
                if a + b < p {
                    continue;
                }
                for ga in &f1_levels[a as usize] {
                    for gb in &f2_levels[b as usize] {
                        gens.push(ga.kron(gb).col(0));
                    }
                }
            }
        }
        steps.insert(p, Subspace::from_vecs(6, gens));
    }
    let f = DecFiltration::new(6, steps);
    let x = MHSInstance::pure(6, 3, f);
    let s2 = Mat::from_rows(vec![
        vec![rat(0), rat(0), rat(2)],
        vec![rat(0), rat(-1), rat(0)],
        vec![rat(2), rat(0), rat(0)],
    ]);
    let sform = corpus::symp2().kron(&s2);
    let forms = FormFamily::single(3, sform);
    let n1 = corpus::e_unit(2, 0, 1).kron(&Mat::identity(3));
    let deriv = Mat::from_rows(vec![
        vec![rat(0), rat(1), rat(0)],
        vec![rat(0), rat(0), rat(2)],
        vec![rat(0), rat(0), rat(0)],
    ]);
    let n2 = Mat::identity(2).kron(&deriv);
    let cone = NilpotentConeInstance::new(6, vec![n1, n2], "symsq");
    let probe = corpus::e_unit(2, 0, 1).kron(&corpus::e_unit(3, 2, 0));
    (x, forms, cone, probe)
}

fn elliptic_forms() -> FormFamily {
    FormFamily::single(1, corpus::symp2())
}

fn ex1() -> Result<ExampleReport, String> {
    let forms = elliptic_forms();
    let grid = default_grid();
    let mut x_zero = true;
    let mut relation_exact = true;
    let mut bs_vals = Vec::new();
    let mut lines = vec!["t,x,bs_coord,sl2_coord,sl2_coord_sq".to_string()];
    for t in &grid {
        let x = elliptic(gauss(Rat::zero(), t.clone()));
        let tau = chart_period(&x).ok_or("chart broke down")?;
        if !tau.re.is_zero() {
            x_zero = false;
        }
        let bs = tau.im.recip();
        let sq = metric_square(&x, &forms).ok_or("metric broke down")?;
        if sq != bs {
            relation_exact = false;
        }
        bs_vals.push(rat_to_f64(&bs));
        lines.push(format!(
            "{},{},{},{},{}",
            fmt_rat(t),
            fmt_rat(&tau.re),
            fmt_rat(&bs),
            fmt_f64_15(rat_to_f64(&sq).sqrt()),
            fmt_rat(&sq)
        ));
    }
    let diverge = monotone_of(&bs_vals) == Some(Monotone::Increasing);
    let claims = vec![
        (
            "the horizontal coordinate stays zero along the path".to_string(),
            x_zero,
        ),
        (
            "the square of the metric coordinate equals the reciprocal coordinate exactly at all 21 grid points".to_string(),
            relation_exact,
        ),
        (
            "both charts blow up strictly monotonically".to_string(),
            diverge,
        ),
        (
            "the two charts land at the same boundary point".to_string(),
            x_zero && relation_exact && diverge,
        ),
    ];
    Ok(ExampleReport {
        name: "ex1".to_string(),
        claims,
        details: vec![
            "the chart map squares the radial coordinate, so agreement is a rational identity"
                .to_string(),
        ],
        csv: Some(lines.join("\n") + "\n"),
    })
}

fn ex2(seed: u64) -> Result<ExampleReport, String> {
    let (x, forms, cone) = two_factor_product();
    let mk = |e1: i64, e2: i64| -> Result<BoundaryReport, String> {
        let p = PathSpec::new(
            x.clone(),
            cone.clone(),
            vec![rat(e1), rat(e2)],
            vec![rat(1), rat(1)],
        )?;
        classify_limit(&p, &forms, 1e-10, 60, seed)
    };
    let r11 = mk(1, 1)?;
    let r21 = mk(2, 1)?;
    let r31 = mk(3, 1)?;
    let same_face = r11.sharp_face == r21.sharp_face && r21.sharp_face == r31.sharp_face;
    let ratio_11_31 = !r11.ratio_chain.same_class(&r31.ratio_chain);
    let ratio_21_31 = r21.ratio_chain.same_class(&r31.ratio_chain);
    let val_21_31 = r21.val_label != r31.val_label;
    let labels = [
        (&r11.ratio_label, &r11.val_label),
        (&r21.ratio_label, &r21.val_label),
        (&r31.ratio_label, &r31.val_label),
    ];
    let mut pairwise = true;
    for i in 0..3 {
        for j in i + 1..3 {
            if labels[i] == labels[j] {
                pairwise = false;
            }
        }
    }
    let claims = vec![
        (
            "all three paths diverge through the same face".to_string(),
            same_face,
        ),
        (
            "exponents (1,1) and (3,1) already differ at the ratio level".to_string(),
            ratio_11_31,
        ),
        (
            "exponents (2,1) and (3,1) share one ratio class".to_string(),
            ratio_21_31,
        ),
        (
            "exponents (2,1) and (3,1) separate at the valuative level".to_string(),
            val_21_31,
        ),
        (
            "the three limit labels are pairwise distinct".to_string(),
            pairwise,
        ),
    ];
    let details = vec![
        format!("(1,1): {}", r11.ratio_label),
        format!("(2,1): {}", r21.ratio_label),
        format!("(3,1): {}", r31.ratio_label),
        format!(
            "valuative labels: {:?} vs {:?}",
            r21.val_label.iter().map(fmt_rat).collect::<Vec<_>>(),
            r31.val_label.iter().map(fmt_rat).collect::<Vec<_>>()
        ),
    ];
    Ok(ExampleReport {
        name: "ex2".to_string(),
        claims,
        details,
        csv: None,
    })
}

fn ex3() -> Result<ExampleReport, String> {
    let grid = default_grid();
    let mut coordinate_grading = true;
    {
        let x = hodge_tate(gi(0, 1));
        let spl = real_weight_splitting(&x)?;
        let e1 = Subspace::from_vecs(2, vec![vec![rat(1), rat(0)]]);
        let e2 = Subspace::from_vecs(2, vec![vec![rat(0), rat(1)]]);
        if spl.grading.get(&0) != Some(&e1) || spl.grading.get(&2) != Some(&e2) {
            coordinate_grading = false;
        }
    }
    let mut real_fixed = true;
    let mut imag_scaled = true;
    let mut lines = vec!["t,a,b".to_string()];
    for c in [gi(0, 1), gi(2, 3)] {
        let x = hodge_tate(c.clone());
        let spl = real_weight_splitting(&x)?;
        for t in &grid {
            let torus = spl.torus(t, |w| w);
            let moved = MHSInstance::new(2, x.w.clone(), x.f.apply(&torus.lift()));
            let ct = chart_period(&moved).ok_or("extension coordinate broke down")?;
            if ct.re != c.re {
                real_fixed = false;
            }
            if ct.im != c.im.clone() * rat_pow(t, -2) {
                imag_scaled = false;
            }
            if c == gi(2, 3) {
                lines.push(format!(
                    "{},{},{}",
                    fmt_rat(t),
                    fmt_rat(&ct.re),
                    fmt_rat(&ct.im)
                ));
            }
        }
    }
    let claims = vec![
        (
            "the split grading of the purely imaginary point is the coordinate one".to_string(),
            coordinate_grading,
        ),
        (
            "the torus action fixes the real extension coordinate".to_string(),
            real_fixed,
        ),
        (
            "the torus action scales the imaginary coordinate by the inverse square exactly"
                .to_string(),
            imag_scaled,
        ),
    ];
    Ok(ExampleReport {
        name: "ex3".to_string(),
        claims,
        details: vec!["closed form: a + ib goes to a + i b t^(-2)".to_string()],
        csv: Some(lines.join("\n") + "\n"),
    })
}

fn ex6(seed: u64) -> Result<ExampleReport, String> {
    let (x, forms, cone, probe) = sym_square_instance();
    let mk = |e1: i64, e2: i64| -> Result<BoundaryReport, String> {
        let p = PathSpec::new(
            x.clone(),
            cone.clone(),
            vec![rat(e1), rat(e2)],
            vec![rat(1), rat(1)],
        )?;
        classify_limit(&p, &forms, 1e-10, 60, seed)
    };
    let r31 = mk(3, 1)?;
    let r32 = mk(3, 2)?;
    let fp31 = tau_weight_profile(&probe, &r31.gradings, &r31.rates);
    let fp32 = tau_weight_profile(&probe, &r32.gradings, &r32.rates);
    let gradings_match = r31.gradings == r32.gradings;
    let marginals = fp31.per_grading == vec![vec![-2], vec![2]]
        && fp32.per_grading == vec![vec![-2], vec![2]];
    let t31 = fp31.totals == vec![rat(-2)];
    let t32 = fp32.totals == vec![rat(2)];
    let claims = vec![
        (
            "both exponent choices give the same limit gradings".to_string(),
            gradings_match,
        ),
        (
            "the probe is homogeneous of joint weight (-2, 2)".to_string(),
            marginals,
        ),
        (
            "exponents (3,1) weigh the probe at -2".to_string(),
            t31,
        ),
        (
            "exponents (3,2) weigh the probe at +2".to_string(),
            t32,
        ),
        (
            "the signed fingerprints differ, so the attached parabolic data differs".to_string(),
            fp31.totals != fp32.totals,
        ),
    ];
    let details = vec![
        format!(
            "probe totals: {:?} against {:?}",
            fp31.totals.iter().map(fmt_rat).collect::<Vec<_>>(),
            fp32.totals.iter().map(fmt_rat).collect::<Vec<_>>()
        ),
        "the rate vectors (2,1) and (1,2) weigh the same joint weight with opposite signs"
            .to_string(),
    ];
    Ok(ExampleReport {
        name: "ex6".to_string(),
        claims,
        details,
        csv: None,
    })
}

pub fn run_example(name: &str, seed: u64) -> Result<ExampleReport, String> {
    match name {
        "ex1" => ex1(),
        "ex2" => ex2(seed),
        "ex3" => ex3(),
        "ex6" => ex6(seed),
        other => Err(format!(
            "unknown example {:?}, available: ex1 ex2 ex3 ex6",
            other
        )),
    }
}
