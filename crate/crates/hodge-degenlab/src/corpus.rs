//! Instance builders.  Small weighted blocks, direct sums, and seeded
//! random corpora used by the classification tests.  Everything here
//! is valid by construction, so downstream checks exercise the
//! verification code on honest inputs.

use hodge_core::filtration::{DecFiltration, IncFiltration};
use hodge_core::mat::Mat;
use hodge_core::mhs::MHSInstance;
use hodge_core::monodromy::NilpotentConeInstance;
use hodge_core::polarized::FormFamily;
use hodge_core::scalar::{gauss, gi, ratio, Gauss, Rat};
use hodge_core::subspace::Subspace;
use num::traits::{One, Zero};
use num::Num;
use rand::Rng;
use std::collections::BTreeMap;

pub fn e_unit(d: usize, i: usize, j: usize) -> Mat<Rat> {
    Mat::from_fn(d, d, |r, c| {
        if r == i && c == j {
            Rat::one()
        } else {
            Rat::zero()
        }
    })
}

pub fn symp2() -> Mat<Rat> {
    Mat::from_rows(vec![
        vec![Rat::zero(), -Rat::one()],
        vec![Rat::one(), Rat::zero()],
    ])
}

/// One dimensional pure piece of weight 2k, Hodge filtration jumping
/// at k.
pub fn tate_block(k: i64) -> MHSInstance {
    let mut steps = BTreeMap::new();
    steps.insert(k, Subspace::full(1));
    let f = DecFiltration::new(1, steps);
    MHSInstance::pure(1, 2 * k, f)
}

/// Weight 1 + 2s elliptic piece: the usual period line shifted s steps
/// up the Hodge scale.
pub fn elliptic_block(tau: Gauss, s: i64) -> MHSInstance {
    let mut steps = BTreeMap::new();
    steps.insert(s, Subspace::full(2));
    steps.insert(s + 1, Subspace::from_vecs(2, vec![vec![tau, gi(1, 0)]]));
    let f = DecFiltration::new(2, steps);
    MHSInstance::pure(2, 1 + 2 * s, f)
}

/// Two step mixed block with weights 2s and 2s + 2 and extension
/// parameter c.  For s = 0 this is the standard two dimensional
/// mixed Tate example.
pub fn hodge_tate_block(c: Gauss, s: i64) -> MHSInstance {
    let mut w = IncFiltration::pure(2, 2 * s + 2);
    w.insert(
        2 * s,
        Subspace::from_vecs(2, vec![vec![Rat::one(), Rat::zero()]]),
    );
    let mut fsteps = BTreeMap::new();
    fsteps.insert(s, Subspace::full(2));
    fsteps.insert(s + 1, Subspace::from_vecs(2, vec![vec![c, gi(1, 0)]]));
    let f = DecFiltration::new(2, fsteps);
    MHSInstance::new(2, w, f)
}

pub fn embed_vec<T: Num + Clone>(v: &[T], total: usize, off: usize) -> Vec<T> {
    let mut out = vec![T::zero(); total];
    for (i, x) in v.iter().enumerate() {
        out[off + i] = x.clone();
    }
    out
}

/// Square block placed at the diagonal offset, zero elsewhere.
pub fn embed_mat<T: Num + Clone>(m: &Mat<T>, total: usize, off: usize) -> Mat<T> {
    Mat::from_fn(total, total, |r, c| {
        if r >= off && r < off + m.rows && c >= off && c < off + m.cols {
            m[(r - off, c - off)].clone()
        } else {
            T::zero()
        }
    })
}

pub fn embed_sub<T: Num + Clone>(s: &Subspace<T>, total: usize, off: usize) -> Subspace<T> {
    let vecs = s
        .basis_vecs()
        .into_iter()
        .map(|v| embed_vec(&v, total, off))
        .collect();
    Subspace::from_vecs(total, vecs)
}

/// Direct sum of instances, first summand in the low coordinates.
pub fn direct_sum(a: &MHSInstance, b: &MHSInstance) -> MHSInstance {
    let n = a.dim + b.dim;
    let mut wjumps: Vec<i64> = a.w.recorded();
    wjumps.extend(b.w.recorded());
    wjumps.sort();
    wjumps.dedup();
    let mut wsteps = BTreeMap::new();
    for w in wjumps {
        let s = embed_sub(&a.w.at(w), n, 0).sum(&embed_sub(&b.w.at(w), n, a.dim));
        wsteps.insert(w, s);
    }
    // the value of a decreasing filtration drops to zero one step
    // past its last record, a change the union of recorded keys does
    // not see; walk every level in the common range instead
    let pmin = a.f.min_recorded().unwrap().min(b.f.min_recorded().unwrap());
    let pmax = a.f.max_recorded().unwrap().max(b.f.max_recorded().unwrap());
    let mut fsteps = BTreeMap::new();
    for p in pmin..=pmax {
        let s = embed_sub(&a.f.at(p), n, 0).sum(&embed_sub(&b.f.at(p), n, a.dim));
        fsteps.insert(p, s);
    }
    MHSInstance::new(
        n,
        IncFiltration::new(n, wsteps),
        DecFiltration::new(n, fsteps),
    )
}

/// Per weight block diagonal join of two form families, sized by the
/// graded dimensions of the summands.  Weights carried by only one
/// summand keep that summand's form.
pub fn direct_sum_forms(
    fa: &FormFamily,
    wa: &IncFiltration<Rat>,
    fb: &FormFamily,
    wb: &IncFiltration<Rat>,
) -> Result<FormFamily, String> {
    let mut weights: Vec<i64> = wa.jumps();
    weights.extend(wb.jumps());
    weights.sort();
    weights.dedup();
    let mut out = BTreeMap::new();
    for w in weights {
        let da = wa.graded_dim(w);
        let db = wb.graded_dim(w);
        let get = |fam: &FormFamily, d: usize, side: &str| -> Result<Mat<Rat>, String> {
            if d == 0 {
                return Ok(Mat::zero(0, 0));
            }
            fam.get(w)
                .cloned()
                .ok_or_else(|| format!("{} summand has no form at weight {}", side, w))
        };
        let ma = get(fa, da, "first")?;
        let mb = get(fb, db, "second")?;
        let m = Mat::from_fn(da + db, da + db, |r, c| {
            if r < da && c < da {
                ma[(r, c)].clone()
            } else if r >= da && c >= da {
                mb[(r - da, c - da)].clone()
            } else {
                Rat::zero()
            }
        });
        out.insert(w, m);
    }
    Ok(FormFamily::new(out))
}

fn rand_rat(rng: &mut impl Rng) -> Rat {
    ratio(rng.gen_range(-6..=6), rng.gen_range(1..=4))
}

fn rand_tau(rng: &mut impl Rng) -> Gauss {
    gauss(rand_rat(rng), ratio(rng.gen_range(1..=8), rng.gen_range(1..=4)))
}

/// Invertible rational matrix built from a few shear operations, so
/// the determinant is one and entries stay small.
pub fn random_conjugator(rng: &mut impl Rng, n: usize, integral: bool) -> Mat<Rat> {
    let mut g = Mat::identity(n);
    if n < 2 {
        return g;
    }
    for _ in 0..(2 * n) {
        let i = rng.gen_range(0..n);
        let mut j = rng.gen_range(0..n);
        while j == i {
            j = rng.gen_range(0..n);
        }
        let lam = if integral {
            ratio(rng.gen_range(-2..=2), 1)
        } else {
            ratio(rng.gen_range(-2..=2), rng.gen_range(1..=3))
        };
        let mut sh = Mat::identity(n);
        sh[(i, j)] = lam;
        g = g.mul(&sh);
    }
    g
}

/// Random valid mixed instance: a direct sum of shifted blocks with
/// weights kept inside [-2, 3], moved off the coordinate axes by a
/// rational change of basis.
pub fn random_mixed_instance(rng: &mut impl Rng, max_dim: usize) -> MHSInstance {
    assert!(max_dim >= 1);
    let mut acc: Option<MHSInstance> = None;
    let mut dim = 0;
    loop {
        let room = max_dim - dim;
        if room == 0 || (acc.is_some() && rng.gen_bool(0.3)) {
            break;
        }
        let block = if room == 1 {
            tate_block(rng.gen_range(-1..=1))
        } else {
            match rng.gen_range(0..4) {
                0 => tate_block(rng.gen_range(-1..=1)),
                1 => elliptic_block(rand_tau(rng), rng.gen_range(-1..=1)),
                2 => hodge_tate_block(rand_tau(rng), rng.gen_range(-1..=0)),
                _ => hodge_tate_block(gauss(rand_rat(rng), rand_rat(rng)), rng.gen_range(-1..=0)),
            }
        };
        dim += block.dim;
        acc = Some(match acc {
            None => block,
            Some(prev) => direct_sum(&prev, &block),
        });
    }
    let x = acc.unwrap();
    let g = random_conjugator(rng, x.dim, false);
    MHSInstance::new(x.dim, x.w.apply(&g), x.f.apply(&g.lift()))
}

/// A polarized pure instance with a commuting nilpotent cone attached.
#[derive(Clone, Debug)]
pub struct OrbitInstance {
    pub x: MHSInstance,
    pub forms: FormFamily,
    pub cone: NilpotentConeInstance,
}

/// Product of elliptic degenerations, one symplectic block per factor,
/// with the cone generators grouping adjacent blocks at random.  The
/// whole package is optionally conjugated by a unimodular integral
/// matrix; the form is transported along, so the result is polarized
/// with the same answers as the block model.
pub fn random_elliptic_product(
    rng: &mut impl Rng,
    blocks: usize,
    conjugate: bool,
) -> OrbitInstance {
    assert!(blocks >= 1);
    let n = 2 * blocks;
    let mut x: Option<MHSInstance> = None;
    let mut block_ns = Vec::new();
    for b in 0..blocks {
        let piece = elliptic_block(rand_tau(rng), 0);
        block_ns.push(embed_mat(&e_unit(2, 0, 1), n, 2 * b));
        x = Some(match x {
            None => piece,
            Some(prev) => direct_sum(&prev, &piece),
        });
    }
    let x = x.unwrap();
    let mut sform = symp2();
    for _ in 1..blocks {
        let d = sform.rows;
        sform = Mat::from_fn(d + 2, d + 2, |r, c| {
            if r < d && c < d {
                sform[(r, c)].clone()
            } else if r >= d && c >= d {
                symp2()[(r - d, c - d)].clone()
            } else {
                Rat::zero()
            }
        });
    }
    // group adjacent blocks into shared generators
    let mut gens: Vec<Mat<Rat>> = Vec::new();
    let mut i = 0;
    while i < blocks {
        let take = if i + 1 < blocks && rng.gen_bool(0.4) { 2 } else { 1 };
        let mut g = Mat::zero(n, n);
        for b in i..i + take {
            g = g.add(&block_ns[b]);
        }
        gens.push(g);
        i += take;
    }
    if !conjugate {
        return OrbitInstance {
            x,
            forms: FormFamily::single(1, sform),
            cone: NilpotentConeInstance::new(n, gens, "ellprod"),
        };
    }
    let g = random_conjugator(rng, n, true);
    let ginv = g.inverse().expect("shear product is invertible");
    let x2 = MHSInstance::new(x.dim, x.w.clone(), x.f.apply(&g.lift()));
    let gens2 = gens.iter().map(|m| g.mul(m).mul(&ginv)).collect();
    let s2 = ginv.transpose().mul(&sform).mul(&ginv);
    OrbitInstance {
        x: x2,
        forms: FormFamily::single(1, s2),
        cone: NilpotentConeInstance::new(n, gens2, "ellprodc"),
    }
}

pub fn negate_cone(c: &NilpotentConeInstance) -> NilpotentConeInstance {
    NilpotentConeInstance::new(
        c.dim,
        c.generators.iter().map(|g| g.neg()).collect(),
        "negated",
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use hodge_core::mhs::{deligne_bigrading, validate_mhs};
    use hodge_core::nilporb::{generates_nilpotent_orbit, Verdict};
    use hodge_core::polarized::check_polarization;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn blocks_are_valid() {
        for k in -1..=1 {
            assert!(validate_mhs(&tate_block(k)).ok, "tate {}", k);
        }
        for s in -1..=1 {
            let e = elliptic_block(gi(0, 1), s);
            assert!(validate_mhs(&e).ok, "elliptic shift {}", s);
            assert_eq!(e.weights(), vec![1 + 2 * s]);
        }
        let h = hodge_tate_block(gi(2, 5), -1);
        assert!(validate_mhs(&h).ok);
        assert_eq!(h.weights(), vec![-2, 0]);
        deligne_bigrading(&h).unwrap();
    }

    #[test]
    fn direct_sum_adds_graded_dims() {
        let a = elliptic_block(gi(0, 1), 0);
        let b = hodge_tate_block(gi(1, 1), 0);
        let s = direct_sum(&a, &b);
        assert_eq!(s.dim, 4);
        assert!(validate_mhs(&s).ok);
        assert_eq!(s.weights(), vec![0, 1, 2]);
        assert_eq!(s.w.graded_dim(0), 1);
        assert_eq!(s.w.graded_dim(1), 2);
        assert_eq!(s.w.graded_dim(2), 1);
    }

    #[test]
    fn summed_forms_polarize_the_summed_instance() {
        let a = elliptic_block(gi(0, 1), 0);
        let b = elliptic_block(gi(1, 2), 0);
        let s = direct_sum(&a, &b);
        let fa = FormFamily::single(1, symp2());
        let fs = direct_sum_forms(&fa, &a.w, &fa, &b.w).unwrap();
        fs.validate(&s.w).unwrap();
        assert_eq!(check_polarization(&s, &fs), Ok(true));
    }

    #[test]
    fn mixed_corpus_is_valid_and_bounded() {
        let mut rng = ChaCha8Rng::seed_from_u64(1001);
        for _ in 0..40 {
            let x = random_mixed_instance(&mut rng, 6);
            assert!(x.dim >= 1 && x.dim <= 6);
            let rep = validate_mhs(&x);
            assert!(rep.ok, "{:?}", rep.failures);
            for w in x.weights() {
                assert!((-2..=3).contains(&w), "weight {} escapes", w);
            }
            deligne_bigrading(&x).unwrap();
        }
    }

    #[test]
    fn elliptic_products_generate_orbits() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let inst = random_elliptic_product(&mut rng, 2, true);
        inst.cone.validate(Some(&inst.x.w)).unwrap();
        assert_eq!(check_polarization(&inst.x, &inst.forms), Ok(true));
        let d = generates_nilpotent_orbit(&inst.cone, &inst.x, &inst.forms, 3).unwrap();
        assert_eq!(d.verdict, Verdict::Yes, "{:?}", d.evidence);
        let bad = negate_cone(&inst.cone);
        let d2 = generates_nilpotent_orbit(&bad, &inst.x, &inst.forms, 3).unwrap();
        assert_eq!(d2.verdict, Verdict::No);
    }

    #[test]
    fn widely_separated_tate_sum_is_valid() {
        let s = direct_sum(&tate_block(-1), &tate_block(1));
        let rep = validate_mhs(&s);
        assert!(rep.ok, "{:?}", rep.failures);
        // the middle level keeps only the top block
        assert_eq!(s.f.at(0).dim(), 1);
        assert!(s.f.at(0).contains_vec(&embed_vec(&[gi(1, 0)], 2, 1)));
    }

    #[test]
    fn embedding_helpers() {
        let m = e_unit(2, 0, 1);
        let e = embed_mat(&m, 5, 2);
        assert!(e[(2, 3)].is_one());
        assert_eq!(e.rank(), 1);
        let s = Subspace::from_vecs(2, vec![vec![Rat::one(), Rat::one()]]);
        let es = embed_sub(&s, 5, 3);
        assert_eq!(es.dim(), 1);
        assert!(es.contains_vec(&embed_vec(&[Rat::one(), Rat::one()], 5, 3)));
    }
}
