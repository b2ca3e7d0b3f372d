//! Release gate.  One test per checklist item, each printing a single
//! pass or fail line (visible with --nocapture, or on failure).  The
//! numeric knobs are pinned here on purpose and should not drift: the
//! stopping tolerance is 1e-10, iterative splittings get 60 doublings,
//! the bigrading sweep gets 60 seconds of wall clock and the worked
//! example suite 120.  Everything else is exact arithmetic, so "pass"
//! means equality, not closeness.

use hodge_core::cones::Cone;
use hodge_core::fans::{
    fan_axioms, fan_from_roots, plus_part_test, random_root_set, shimura_weight_test,
    sym_weight_vectors, RootSet,
};
use hodge_core::filtration::IncFiltration;
use hodge_core::mat::Mat;
use hodge_core::mhs::{
    delta_splitting, deligne_bigrading, elliptic, verify_bigrading, Bigrading, MHSInstance,
};
use hodge_core::monodromy::{
    monodromy_filtration, rel_monodromy, verify_rel_conditions, NilpotentConeInstance,
    RelMonodromy,
};
use hodge_core::nilporb::{generates_nilpotent_orbit, ray_sample_check, Verdict};
use hodge_core::polarized::{limit_splitting, FormFamily};
use hodge_core::scalar::{gauss, gi, rat, ratio, Rat};
use hodge_core::sl2::{variance_profile, weight_chain};
use hodge_core::subspace::{image_of, kernel_of, Subspace};
use hodge_degenlab::corpus::{
    e_unit, elliptic_block, embed_mat, embed_sub, hodge_tate_block, negate_cone,
    random_conjugator, random_elliptic_product, random_mixed_instance, symp2, tate_block,
};
use hodge_degenlab::degen::run_example;
use num::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::collections::BTreeMap;
use std::time::{Duration, Instant};

fn gate(num: u32, name: &str, ok: bool, detail: String) {
    println!(
        "criterion {:02} ({}): {}  [{}]",
        num,
        name,
        if ok { "pass" } else { "FAIL" },
        detail
    );
    assert!(ok, "criterion {:02} ({}): {}", num, name, detail);
}

#[test]
fn criterion_01_bigrading_corpus() {
    let t0 = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(101);
    let mut errs = Vec::new();
    let total = 200;
    for i in 0..total {
        let x = random_mixed_instance(&mut rng, 6);
        if let Err(e) = deligne_bigrading(&x).and_then(|bg| verify_bigrading(&x, &bg)) {
            errs.push(format!("instance {}: {}", i, e));
        }
    }
    let elapsed = t0.elapsed();
    let within = elapsed < Duration::from_secs(60);
    gate(
        1,
        "bigrading corpus",
        errs.is_empty() && within,
        format!(
            "{} instances, {} failures, {:.1}s of 60",
            total,
            errs.len(),
            elapsed.as_secs_f64()
        ),
    );
}

fn is_r_split(bg: &Bigrading) -> bool {
    bg.pieces.iter().all(|(&(p, q), s)| {
        bg.pieces
            .get(&(q, p))
            .map_or(false, |t| s.conj() == *t)
    })
}

#[test]
fn criterion_02_delta_round_trip() {
    // same seed as the bigrading sweep, so this runs on the same corpus
    let mut rng = ChaCha8Rng::seed_from_u64(101);
    let mut errs = Vec::new();
    let mut r_split_seen = 0;
    for i in 0..200 {
        let x = random_mixed_instance(&mut rng, 6);
        let d = match delta_splitting(&x) {
            Ok(d) => d,
            Err(e) => {
                errs.push(format!("instance {}: {}", i, e));
                continue;
            }
        };
        let e = d.delta.lift().scale(&gi(0, 1)).exp_nilpotent();
        if d.f_split.apply(&e) != x.f {
            errs.push(format!("instance {}: round trip broke", i));
        }
        let bg = deligne_bigrading(&x).expect("corpus instances have bigradings");
        if is_r_split(&bg) {
            r_split_seen += 1;
            if !d.delta.is_zero() {
                errs.push(format!("instance {}: split instance with nonzero delta", i));
            }
        }
    }
    // and on purpose-built split instances, sums of pure or real-split
    // blocks moved off the axes by a real change of basis
    let mut built = 0;
    for i in 0..25 {
        let mut x = tate_block(rng.gen_range(-1..=1));
        for _ in 0..rng.gen_range(1..=2) {
            let tau = gauss(ratio(rng.gen_range(-2..=2), 2), ratio(rng.gen_range(1..=2), 1));
            let block = match rng.gen_range(0..3) {
                0 => tate_block(rng.gen_range(-1..=1)),
                1 => elliptic_block(tau, rng.gen_range(-1..=1)),
                _ => hodge_tate_block(gauss(ratio(rng.gen_range(-3..=3), 2), Rat::zero()), 0),
            };
            x = hodge_degenlab::corpus::direct_sum(&x, &block);
        }
        let g = random_conjugator(&mut rng, x.dim, false);
        let x = MHSInstance::new(x.dim, x.w.apply(&g), x.f.apply(&g.lift()));
        match delta_splitting(&x) {
            Ok(d) if d.delta.is_zero() => built += 1,
            Ok(_) => errs.push(format!("built split instance {} got a nonzero delta", i)),
            Err(e) => errs.push(format!("built split instance {}: {}", i, e)),
        }
    }
    gate(
        2,
        "delta round trip",
        errs.is_empty() && built == 25,
        format!(
            "200 corpus + {} built split instances, {} split in corpus, {} failures",
            built,
            r_split_seen,
            errs.len()
        ),
    );
}

// independent reconstruction of the weight filtration from kernel and
// image lattices alone, shared code is only the subspace arithmetic
fn kerim_oracle(n: &Mat<Rat>, center: i64) -> IncFiltration<Rat> {
    let d = n.rows;
    let idx = n.nilpotency_index().expect("oracle needs nilpotent input") as i64;
    if idx <= 1 {
        return IncFiltration::pure(d, center);
    }
    let mut pows = vec![Mat::identity(d)];
    for _ in 0..idx {
        pows.push(pows.last().unwrap().mul(n));
    }
    let ker = |j: i64| -> Subspace<Rat> {
        if j <= 0 {
            Subspace::zero(d)
        } else if j >= idx {
            Subspace::full(d)
        } else {
            kernel_of(&pows[j as usize])
        }
    };
    let im = |b: i64| -> Subspace<Rat> {
        if b >= idx {
            Subspace::zero(d)
        } else {
            image_of(&pows[b as usize])
        }
    };
    let mut steps = BTreeMap::new();
    for k in (1 - idx)..=(idx - 1) {
        let mut acc = Subspace::zero(d);
        for b in 0.max(-k)..=idx {
            acc = acc.sum(&ker(k + b + 1).intersect(&im(b)));
        }
        steps.insert(center + k, acc);
    }
    IncFiltration::new(d, steps)
}

fn random_strict_upper(rng: &mut ChaCha8Rng, d: usize) -> Mat<Rat> {
    let mut m = Mat::zero(d, d);
    for i in 0..d {
        for j in (i + 1)..d {
            m[(i, j)] = ratio(rng.gen_range(-3..=3), rng.gen_range(1..=2));
        }
    }
    m
}

fn random_jordan_sum(rng: &mut ChaCha8Rng, d: usize) -> Mat<Rat> {
    let mut m = Mat::zero(d, d);
    let mut off = 0;
    while off < d {
        let s = rng.gen_range(1..=(d - off));
        for i in 0..s - 1 {
            m[(off + i, off + i + 1)] = rat(1);
        }
        off += s;
    }
    let g = random_conjugator(rng, d, false);
    let ginv = g.inverse().expect("shear products are invertible");
    g.mul(&m).mul(&ginv)
}

#[test]
fn criterion_03_monodromy_oracle() {
    let mut rng = ChaCha8Rng::seed_from_u64(303);
    let mut errs = Vec::new();
    let total = 110;
    for i in 0..total {
        let d = rng.gen_range(2..=8);
        let n = if i % 2 == 0 {
            random_strict_upper(&mut rng, d)
        } else {
            random_jordan_sum(&mut rng, d)
        };
        let center = rng.gen_range(-2..=2);
        if monodromy_filtration(&n, center) != kerim_oracle(&n, center) {
            errs.push(format!("matrix {} (dim {}, center {})", i, d, center));
        }
    }
    gate(
        3,
        "weight filtration vs kernel image oracle",
        errs.is_empty(),
        format!("{} matrices of dim <= 8, {} disagreements", total, errs.len()),
    );
}

#[test]
fn criterion_04_relative_filtration_verifier() {
    let mut rng = ChaCha8Rng::seed_from_u64(404);
    let mut errs = Vec::new();

    // pure ambient: the relative filtration exists, verifies, and is
    // the centered one
    for i in 0..20 {
        let d = rng.gen_range(2..=6);
        let wt = rng.gen_range(-1..=2);
        let n = random_jordan_sum(&mut rng, d);
        let w = IncFiltration::pure(d, wt);
        match rel_monodromy(&n, &w) {
            Ok(RelMonodromy::Exists(m)) => {
                if let Err(e) = verify_rel_conditions(&m, &n, &w) {
                    errs.push(format!("pure {}: verifier rejected: {}", i, e));
                }
                if m != monodromy_filtration(&n, wt) {
                    errs.push(format!("pure {}: not the centered filtration", i));
                }
            }
            other => errs.push(format!("pure {}: unexpected outcome {:?}", i, other)),
        }
    }

    // two pure blocks of different weights: exists, verifies, and
    // equals the blockwise answer embedded into the sum
    for i in 0..20 {
        let d1 = rng.gen_range(1..=3);
        let d2 = rng.gen_range(1..=3);
        let w1 = rng.gen_range(-1..=0);
        let w2 = w1 + rng.gen_range(2..=3);
        let n1 = random_jordan_sum(&mut rng, d1);
        let n2 = random_jordan_sum(&mut rng, d2);
        let d = d1 + d2;
        let mut steps = BTreeMap::new();
        steps.insert(w1, embed_sub(&Subspace::full(d1), d, 0));
        steps.insert(w2, Subspace::full(d));
        let w = IncFiltration::new(d, steps);
        let n = embed_mat(&n1, d, 0).add(&embed_mat(&n2, d, d1));
        let m1 = monodromy_filtration(&n1, w1);
        let m2 = monodromy_filtration(&n2, w2);
        let lo = m1.min_recorded().unwrap().min(m2.min_recorded().unwrap());
        let hi = m1.max_recorded().unwrap().max(m2.max_recorded().unwrap());
        let mut expect = BTreeMap::new();
        for k in lo..=hi {
            expect.insert(k, embed_sub(&m1.at(k), d, 0).sum(&embed_sub(&m2.at(k), d, d1)));
        }
        let expect = IncFiltration::new(d, expect);
        match rel_monodromy(&n, &w) {
            Ok(RelMonodromy::Exists(m)) => {
                if let Err(e) = verify_rel_conditions(&m, &n, &w) {
                    errs.push(format!("blocks {}: verifier rejected: {}", i, e));
                }
                if m != expect {
                    errs.push(format!("blocks {}: not the blockwise filtration", i));
                }
            }
            other => errs.push(format!("blocks {}: unexpected outcome {:?}", i, other)),
        }
    }

    // adjacent weights joined by a nonzero map admit no relative
    // filtration, and the verifier comes back with a witness
    let mut steps = BTreeMap::new();
    steps.insert(0, Subspace::from_vecs(2, vec![vec![rat(1), rat(0)]]));
    steps.insert(1, Subspace::full(2));
    let w = IncFiltration::new(2, steps);
    let crossing = matches!(
        rel_monodromy(&e_unit(2, 0, 1), &w),
        Ok(RelMonodromy::NonExistent { .. })
    );
    if !crossing {
        errs.push("weight crossing instance was not rejected".to_string());
    }

    gate(
        4,
        "relative filtration verifier",
        errs.is_empty(),
        format!("20 pure + 20 block instances + crossing witness, {} failures", errs.len()),
    );
}

#[test]
fn criterion_05_orbit_decisions() {
    let mut errs = Vec::new();
    let x = elliptic(gi(0, 1));
    let cone = NilpotentConeInstance::new(2, vec![e_unit(2, 0, 1)], "ell");
    let forms = FormFamily::single(1, symp2());
    match generates_nilpotent_orbit(&cone, &x, &forms, 7) {
        Ok(d) if matches!(d.verdict, Verdict::Yes) => {}
        other => errs.push(format!("positive direction: {:?}", other.map(|d| d.verdict))),
    }
    match generates_nilpotent_orbit(&negate_cone(&cone), &x, &forms, 7) {
        Ok(d) if matches!(d.verdict, Verdict::No) => {}
        other => errs.push(format!("negated direction: {:?}", other.map(|d| d.verdict))),
    }

    let mut rng = ChaCha8Rng::seed_from_u64(505);
    let grid: Vec<Rat> = (0..=10).map(|k| rat(1i64 << k)).collect();
    let mut yes = 0;
    let mut contradictions = 0;
    for i in 0..50u64 {
        let blocks = rng.gen_range(1..=3);
        let conj = rng.gen_bool(0.5);
        let inst = random_elliptic_product(&mut rng, blocks, conj);
        match generates_nilpotent_orbit(&inst.cone, &inst.x, &inst.forms, i) {
            Ok(d) if matches!(d.verdict, Verdict::Yes) => {
                yes += 1;
                if !ray_sample_check(&inst.cone, &inst.x, &inst.forms, &grid) {
                    contradictions += 1;
                    errs.push(format!("instance {}: ray samples contradict the verdict", i));
                }
            }
            Ok(d) => errs.push(format!("instance {}: verdict {}", i, d.verdict)),
            Err(e) => errs.push(format!("instance {}: {}", i, e)),
        }
    }
    gate(
        5,
        "orbit decisions",
        errs.is_empty(),
        format!(
            "elliptic yes/no plus {} corpus yes verdicts, {} ray contradictions up to y = 2^10",
            yes, contradictions
        ),
    );
}

#[test]
fn criterion_06_variance_monotonicity() {
    let mut rng = ChaCha8Rng::seed_from_u64(606);
    let mut errs = Vec::new();
    let mut chains = 0;
    for i in 0..50 {
        let blocks = rng.gen_range(1..=3);
        let conj = rng.gen_bool(0.5);
        let inst = random_elliptic_product(&mut rng, blocks, conj);
        let chain = match weight_chain(&inst.cone.generators, &inst.x.w) {
            Ok(c) => c,
            Err(e) => {
                errs.push(format!("instance {}: {}", i, e));
                continue;
            }
        };
        chains += 1;
        let v = variance_profile(&chain, true);
        if !v.mean_constant {
            errs.push(format!("instance {}: mean moved", i));
        }
        if !v.monotone {
            errs.push(format!("instance {}: variance decreased", i));
        }
        if !v.strict_at_jumps {
            errs.push(format!("instance {}: flat variance across a genuine jump", i));
        }
    }
    gate(
        6,
        "variance monotonicity",
        errs.is_empty(),
        format!("{} weight chains, {} failures", chains, errs.len()),
    );
}

#[test]
fn criterion_07_root_fans() {
    let mut errs = Vec::new();

    let iv = |v: &[i64]| -> Vec<Rat> { v.iter().map(|&x| rat(x)).collect() };
    let line = RootSet::new(1, vec![iv(&[2]), iv(&[-2])]).expect("antipodal");
    let line_fan = fan_from_roots(&line);
    if line_fan.members.len() != 3 {
        errs.push(format!("line fan has {} cones, wanted 3", line_fan.members.len()));
    }
    if let Err(e) = fan_axioms(&line, &line_fan) {
        errs.push(format!("line fan axioms: {}", e));
    }
    let quad = RootSet::new(
        2,
        vec![iv(&[2, 0]), iv(&[-2, 0]), iv(&[0, 2]), iv(&[0, -2])],
    )
    .expect("antipodal");
    let quad_fan = fan_from_roots(&quad);
    if quad_fan.members.len() != 9 {
        errs.push(format!("quadrant fan has {} cones, wanted 9", quad_fan.members.len()));
    }
    if let Err(e) = fan_axioms(&quad, &quad_fan) {
        errs.push(format!("quadrant fan axioms: {}", e));
    }
    let plus = plus_part_test(&quad);
    if !(plus.parabolic && plus.sigma_plus_matches_faces && plus.consistent) {
        errs.push("quadrant plus part is not the face set of its cone".to_string());
    }

    let mut swept = 0;
    for seed in 0..60u64 {
        let rank = 1 + (seed % 4) as usize;
        let cap = match rank {
            1 | 2 => 6,
            3 => 5,
            _ => 4,
        };
        let pairs = 1 + (seed as usize % cap);
        let roots = random_root_set(rank, pairs, seed);
        let fan = fan_from_roots(&roots);
        if let Err(e) = fan_axioms(&roots, &fan) {
            errs.push(format!("seed {} (rank {}, {} pairs): {}", seed, rank, pairs, e));
        }
        swept += 1;
    }
    gate(
        7,
        "root fans",
        errs.is_empty(),
        format!("line 3, quadrant 9, {} random sweeps, {} failures", swept, errs.len()),
    );
}

#[test]
fn criterion_08_shimura_weights() {
    let mut errs = Vec::new();
    // trivial patterns
    for r in [vec![0i64], vec![0, 0], vec![0, 0, 0, 0]] {
        if !shimura_weight_test(&sym_weight_vectors(&r)) {
            errs.push(format!("trivial pattern {:?} failed", r));
        }
    }
    // one active slot
    for r in [vec![2i64], vec![0, 3], vec![0, 3, 0], vec![4, 0, 0]] {
        if !shimura_weight_test(&sym_weight_vectors(&r)) {
            errs.push(format!("single slot pattern {:?} failed", r));
        }
    }
    // leading weight followed by trailing small slots
    for r in [vec![2i64, 1], vec![2, 0, 1], vec![2, 0, 2], vec![2, 1, 1]] {
        if !shimura_weight_test(&sym_weight_vectors(&r)) {
            errs.push(format!("leading weight pattern {:?} failed", r));
        }
    }
    // a slot dominated by a later one crosses zero on the way down
    let bad = sym_weight_vectors(&[1, 2]);
    if !bad.contains(&vec![1, -1]) {
        errs.push("the (1,2) pattern lost its mixed sign witness".to_string());
    }
    if shimura_weight_test(&bad) {
        errs.push("the (1,2) pattern passed".to_string());
    }
    if shimura_weight_test(&[vec![0, 2, -2]]) {
        errs.push("an explicitly mixed sign vector passed".to_string());
    }
    gate(
        8,
        "sign definite weights",
        errs.is_empty(),
        format!("11 passing patterns, 2 rejections, {} failures", errs.len()),
    );
}

fn orthant(d: usize) -> Cone {
    let mut gens = Vec::new();
    for j in 0..d {
        let mut e = vec![Rat::zero(); d];
        e[j] = rat(1);
        gens.push(e);
    }
    Cone::from_gens(d, gens)
}

fn coord_face(d: usize, coords: &[usize]) -> Cone {
    let gens = coords
        .iter()
        .map(|&j| {
            let mut e = vec![Rat::zero(); d];
            e[j] = rat(1);
            e
        })
        .collect();
    Cone::from_gens(d, gens)
}

fn random_point_on(rng: &mut ChaCha8Rng, d: usize, coords: &[usize]) -> Vec<Rat> {
    let mut v = vec![Rat::zero(); d];
    for &j in coords {
        v[j] = ratio(rng.gen_range(1..=5), rng.gen_range(1..=3));
    }
    v
}

#[test]
fn criterion_09_ratio_calculus() {
    use hodge_core::monoid::{
        induced_chain, ratio_eval, valuative_ratio, valuative_ratio_checked, RatioChain,
        RatioValue, ValuativeMonoid,
    };
    let mut rng = ChaCha8Rng::seed_from_u64(909);
    let mut errs = Vec::new();

    // ratio axioms on random exhaustive chains over the rank 2 and 3
    // orthants: reciprocal symmetry, the cocycle rule away from the
    // excluded zero times infinity case, and additivity in the first slot
    let mut axiom_checks = 0usize;
    for trial in 0..40 {
        let d = if trial % 2 == 0 { 2 } else { 3 };
        let amb = orthant(d);
        let depth = rng.gen_range(1..=d);
        let mut order: Vec<usize> = (0..d).collect();
        for i in (1..d).rev() {
            let j = rng.gen_range(0..=i);
            order.swap(i, j);
        }
        let mut cuts: Vec<usize> = (1..d).collect();
        for i in (1..cuts.len()).rev() {
            let j = rng.gen_range(0..=i);
            cuts.swap(i, j);
        }
        let mut sizes: Vec<usize> = cuts.into_iter().take(depth - 1).collect();
        sizes.sort();
        sizes.push(d);
        let mut faces = Vec::new();
        let mut interiors = Vec::new();
        for &s in &sizes {
            let coords: Vec<usize> = order[..s].to_vec();
            faces.push(coord_face(d, &coords));
            interiors.push(random_point_on(&mut rng, d, &coords));
        }
        let chain = RatioChain::new(amb, faces, interiors, None).expect("chain is valid");
        let pick = |rng: &mut ChaCha8Rng| -> Vec<Rat> {
            loop {
                let v: Vec<Rat> = (0..d).map(|_| rat(rng.gen_range(0..=4))).collect();
                if v.iter().any(|x| !x.is_zero()) {
                    return v;
                }
            }
        };
        for _ in 0..12 {
            let f = pick(&mut rng);
            let g = pick(&mut rng);
            let h = pick(&mut rng);
            let rfg = ratio_eval(&chain, &f, &g).expect("defined");
            let rgf = ratio_eval(&chain, &g, &f).expect("defined");
            let rgh = ratio_eval(&chain, &g, &h).expect("defined");
            let rfh = ratio_eval(&chain, &f, &h).expect("defined");
            if rfg != rgf.recip() {
                errs.push(format!("trial {}: reciprocal symmetry broke", trial));
            }
            if let Some(p) = rfg.mul(&rgh) {
                if p != rfh {
                    errs.push(format!("trial {}: cocycle rule broke", trial));
                }
            }
            let sum: Vec<Rat> = f.iter().zip(&g).map(|(a, b)| a.clone() + b.clone()).collect();
            let rs = ratio_eval(&chain, &sum, &h).expect("defined");
            if rs != rfh.add(&rgh) {
                errs.push(format!("trial {}: additivity broke", trial));
            }
            if ratio_eval(&chain, &f, &f).expect("defined") != RatioValue::Finite(rat(1)) {
                errs.push(format!("trial {}: self ratio is not one", trial));
            }
            axiom_checks += 4;
        }
    }

    // the order families on the rank 2 orthant and their induced chains
    // read off the same ratios, pair by pair, with the bracketing
    // search agreeing on a subsample
    let amb = orthant(2);
    let presets: Vec<ValuativeMonoid> = vec![
        ValuativeMonoid::Functional(vec![rat(1), rat(2)]),
        ValuativeMonoid::Functional(vec![rat(2), rat(1)]),
        ValuativeMonoid::Functional(vec![rat(1), rat(1)]),
        ValuativeMonoid::Functional(vec![ratio(1, 2), rat(3)]),
        ValuativeMonoid::Functional(vec![ratio(5, 3), ratio(2, 7)]),
        ValuativeMonoid::Lex(vec![vec![rat(1), rat(0)], vec![rat(0), rat(1)]]),
        ValuativeMonoid::Lex(vec![vec![rat(0), rat(1)], vec![rat(1), rat(0)]]),
        ValuativeMonoid::Lex(vec![vec![rat(2), rat(0)], vec![rat(0), rat(3)]]),
        ValuativeMonoid::Lex(vec![vec![rat(1), rat(3)], vec![rat(1), rat(0)]]),
        ValuativeMonoid::Lex(vec![vec![rat(0), rat(2)], vec![rat(5), rat(0)]]),
    ];
    let mut pair_checks = 0usize;
    for (pi, v) in presets.iter().enumerate() {
        if let Err(e) = v.validate(&amb) {
            errs.push(format!("preset {}: {}", pi, e));
            continue;
        }
        let chain = match induced_chain(v, &amb) {
            Ok(c) => c,
            Err(e) => {
                errs.push(format!("preset {}: no induced chain: {}", pi, e));
                continue;
            }
        };
        for a1 in 0..4i64 {
            for a2 in 0..4i64 {
                for b1 in 0..4i64 {
                    for b2 in 0..4i64 {
                        if (a1, a2) == (0, 0) && (b1, b2) == (0, 0) {
                            continue;
                        }
                        let f = vec![rat(a1), rat(a2)];
                        let g = vec![rat(b1), rat(b2)];
                        let lhs = valuative_ratio(v, &amb, &f, &g);
                        let rhs = ratio_eval(&chain, &f, &g);
                        match (lhs, rhs) {
                            (Ok(a), Ok(b)) if a == b => pair_checks += 1,
                            (l, r) => errs.push(format!(
                                "preset {}: ({},{}) vs ({},{}): {:?} against {:?}",
                                pi, a1, a2, b1, b2, l, r
                            )),
                        }
                    }
                }
            }
        }
        for a1 in 0..3i64 {
            for a2 in 0..3i64 {
                for b1 in 0..3i64 {
                    for b2 in 0..3i64 {
                        if (a1, a2) == (0, 0) && (b1, b2) == (0, 0) {
                            continue;
                        }
                        let f = vec![rat(a1), rat(a2)];
                        let g = vec![rat(b1), rat(b2)];
                        if let Err(e) = valuative_ratio_checked(v, &amb, &f, &g, 12) {
                            errs.push(format!("preset {}: bracket search: {}", pi, e));
                        }
                    }
                }
            }
        }
    }
    // the two closed form anchors
    let lex = ValuativeMonoid::Lex(vec![vec![rat(1), rat(0)], vec![rat(0), rat(1)]]);
    if valuative_ratio(&lex, &amb, &[rat(1), rat(0)], &[rat(0), rat(1)])
        != Ok(RatioValue::Infinite)
    {
        errs.push("lex order did not send the dominant pair to infinity".to_string());
    }
    let half = ValuativeMonoid::Functional(vec![rat(1), rat(2)]);
    if valuative_ratio(&half, &amb, &[rat(1), rat(0)], &[rat(0), rat(1)])
        != Ok(RatioValue::Finite(ratio(1, 2)))
    {
        errs.push("slope functional did not give one half".to_string());
    }
    gate(
        9,
        "ratio calculus",
        errs.is_empty(),
        format!(
            "{} axiom checks, {} matched order/chain pairs, {} failures",
            axiom_checks,
            pair_checks,
            errs.len()
        ),
    );
}

#[test]
fn criterion_10_example_corpus() {
    let t0 = Instant::now();
    let mut errs = Vec::new();
    for name in ["ex1", "ex2", "ex3", "ex6"] {
        match run_example(name, 0) {
            Ok(rep) => {
                for (claim, okb) in &rep.claims {
                    if !okb {
                        errs.push(format!("{}: {}", name, claim));
                    }
                }
                if name == "ex1" {
                    let csv = rep.csv.as_deref().unwrap_or("");
                    let rows = csv.lines().count();
                    if rows != 22 {
                        errs.push(format!("ex1 trace has {} lines, wanted header + 21", rows));
                    }
                }
            }
            Err(e) => errs.push(format!("{}: {}", name, e)),
        }
    }
    let elapsed = t0.elapsed();
    let within = elapsed < Duration::from_secs(120);
    gate(
        10,
        "worked example corpus",
        errs.is_empty() && within,
        format!("4 examples, {} failures, {:.1}s of 120", errs.len(), elapsed.as_secs_f64()),
    );
}

#[test]
fn criterion_11_limit_splitting() {
    let mut errs = Vec::new();

    let x = elliptic(gi(0, 1));
    let n = e_unit(2, 0, 1);
    let forms = FormFamily::single(1, symp2());
    let m = monodromy_filtration(&n, 1);
    match limit_splitting(&n, &x, &forms, &m, 1e-10, 60) {
        Ok(rep) => {
            if rep.steps_used != 1 || rep.splitting.approx || rep.last_diff != 0.0 {
                errs.push(format!(
                    "elliptic curve: steps {}, approx {}, last diff {}",
                    rep.steps_used, rep.splitting.approx, rep.last_diff
                ));
            }
        }
        Err(e) => errs.push(format!("elliptic curve: {}", e)),
    }

    let mut rng = ChaCha8Rng::seed_from_u64(1111);
    let mut converged = 0;
    for i in 0..20 {
        let blocks = rng.gen_range(1..=3);
        let conj = rng.gen_bool(0.5);
        let inst = random_elliptic_product(&mut rng, blocks, conj);
        let ones = vec![rat(1); inst.cone.generators.len()];
        let nsum = inst.cone.element(&ones);
        let target = match rel_monodromy(&nsum, &inst.x.w) {
            Ok(RelMonodromy::Exists(m)) => m,
            other => {
                errs.push(format!("instance {}: no limit filtration: {:?}", i, other));
                continue;
            }
        };
        match limit_splitting(&nsum, &inst.x, &inst.forms, &target, 1e-10, 60) {
            Ok(rep) => {
                converged += 1;
                if rep.splitting.approx && rep.last_diff >= 1e-10 {
                    errs.push(format!("instance {}: stopped above tolerance", i));
                }
            }
            Err(e) => errs.push(format!("instance {}: {}", i, e)),
        }
    }
    gate(
        11,
        "limit splitting convergence",
        errs.is_empty(),
        format!(
            "elliptic stabilized at step one, {} corpus limits within 60 doublings, {} failures",
            converged,
            errs.len()
        ),
    );
}
