// Randomized law checks for the combinatorial layers: filtrations,
// cone duality, root set fans, and the ratio calculus.  Everything
// here is a statement that should hold for all inputs, exercised over
// seeded samples.

use hodge_core::cones::{primitive, Cone};
use hodge_core::fans::{fan_axioms, fan_from_roots, random_root_set, same_cone};
use hodge_core::filtration::{DecFiltration, IncFiltration};
use hodge_core::mat::Mat;
use hodge_core::monoid::{ratio_eval, RatioChain, RatioValue};
use hodge_core::scalar::{rat, ratio, Rat};
use hodge_core::subspace::Subspace;
use num::traits::{One, Zero};
use proptest::prelude::*;
use std::collections::BTreeMap;

fn rats(v: &[i64]) -> Vec<Rat> {
    v.iter().map(|&x| rat(x)).collect()
}

/// Increasing filtration spanned by prefixes of a supplied vector
/// list, padded with the standard basis so the top step is full.
fn flag_from(d: usize, raw: &[Vec<i64>], keys: &[i64]) -> IncFiltration<Rat> {
    let mut vecs: Vec<Vec<Rat>> = raw.iter().map(|v| rats(v)).collect();
    for i in 0..d {
        let mut e = vec![Rat::zero(); d];
        e[i] = Rat::one();
        vecs.push(e);
    }
    let m = keys.len();
    let total = vecs.len();
    let mut steps = BTreeMap::new();
    for (j, &k) in keys.iter().enumerate() {
        let cnt = ((j + 1) * total).div_ceil(m);
        steps.insert(k, Subspace::from_vecs(d, vecs[..cnt].to_vec()));
    }
    IncFiltration::new(d, steps)
}

fn arb_flag() -> impl Strategy<Value = (usize, IncFiltration<Rat>)> {
    (1usize..=4)
        .prop_flat_map(|d| {
            (
                Just(d),
                prop::collection::vec(prop::collection::vec(-3i64..=3, d), d),
                prop::collection::btree_set(-6i64..=6, 1..=4),
            )
        })
        .prop_map(|(d, raw, keys)| {
            let keys: Vec<i64> = keys.into_iter().collect();
            (d, flag_from(d, &raw, &keys))
        })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn increasing_filtrations_obey_the_basic_laws((d, f) in arb_flag()) {
        prop_assert!(f.validate().is_ok());
        let lo = f.min_recorded().unwrap();
        let hi = f.max_recorded().unwrap();
        prop_assert!(f.at(lo - 1).is_zero());
        prop_assert!(f.at(hi).is_full());
        for w in (lo - 1)..=hi {
            prop_assert!(f.at(w + 1).contains(&f.at(w)));
        }
        let total: usize = (lo..=hi).map(|w| f.graded_dim(w)).sum();
        prop_assert_eq!(total, d);
        let dims: Vec<usize> = f.normalized().values().map(|s| s.dim()).collect();
        prop_assert!(dims.windows(2).all(|p| p[0] < p[1]));
        let g = f.shift(3);
        let shifted: Vec<i64> = f.jumps().iter().map(|j| j + 3).collect();
        prop_assert_eq!(g.jumps(), shifted);
    }

    #[test]
    fn conjugation_preserves_graded_dimensions(
        (d, f) in arb_flag(),
        i in 0usize..4,
        j in 0usize..4,
        lam in -3i64..=3,
    ) {
        let (i, mut j) = (i % d, j % d);
        if i == j {
            j = (j + 1) % d;
        }
        let mut sh = Mat::identity(d);
        if d > 1 {
            sh[(i, j)] = rat(lam);
        }
        let g = f.apply(&sh);
        prop_assert!(g.validate().is_ok());
        for w in f.jumps() {
            prop_assert_eq!(f.graded_dim(w), g.graded_dim(w));
        }
    }

    #[test]
    fn decreasing_filtrations_mirror_the_increasing_laws((d, f) in arb_flag()) {
        // reuse the flag with reversed keys as a decreasing filtration
        let keys = f.recorded();
        let mut steps = BTreeMap::new();
        for (j, &k) in keys.iter().enumerate() {
            steps.insert(k, f.at(keys[keys.len() - 1 - j]).lift());
        }
        let dec = DecFiltration::new(d, steps);
        prop_assert!(dec.validate().is_ok());
        let lo = dec.min_recorded().unwrap();
        let hi = dec.max_recorded().unwrap();
        prop_assert!(dec.at(lo).is_full());
        prop_assert!(dec.at(hi + 1).is_zero());
        for p in lo..=hi {
            prop_assert!(dec.at(p).contains(&dec.at(p + 1)));
        }
        let dims: Vec<usize> = dec.normalized().values().map(|s| s.dim()).collect();
        prop_assert!(dims.windows(2).all(|p| p[0] > p[1]));
        // real data lifted to the complexification is conjugation stable
        prop_assert_eq!(dec.conj().normalized(), dec.normalized());
    }

    #[test]
    fn dual_of_dual_returns_the_cone(gens in prop::collection::vec(prop::collection::vec(0i64..=3, 3), 1..=4)) {
        let c = Cone::from_gens(3, gens.iter().map(|v| rats(v)).collect());
        prop_assert!(same_cone(&c.dual().dual(), &c));
        for h in c.hilbert_basis() {
            prop_assert!(c.contains(&h));
            prop_assert_eq!(primitive(&h), h.clone());
        }
    }

    #[test]
    fn random_root_fans_satisfy_the_axioms(rank in 2usize..=3, pairs in 1usize..=3, seed in 0u64..400) {
        let roots = random_root_set(rank, pairs, seed);
        let fan = fan_from_roots(&roots);
        prop_assert!(fan_axioms(&roots, &fan).is_ok());
    }

    #[test]
    fn ratio_values_form_an_involutive_commutative_calculus(
        an in 0i64..=6, ad in 1i64..=4, bn in 0i64..=6, bd in 1i64..=4,
        ainf in any::<bool>(), binf in any::<bool>(),
    ) {
        let x = if ainf { RatioValue::Infinite } else { RatioValue::Finite(ratio(an, ad)) };
        let y = if binf { RatioValue::Infinite } else { RatioValue::Finite(ratio(bn, bd)) };
        prop_assert_eq!(x.recip().recip(), x.clone());
        prop_assert_eq!(x.mul(&y), y.mul(&x));
        prop_assert_eq!(x.add(&y), y.add(&x));
        let x_zero = x == RatioValue::Finite(rat(0));
        let y_zero = y == RatioValue::Finite(rat(0));
        let undefined = (x_zero && y == RatioValue::Infinite) || (y_zero && x == RatioValue::Infinite);
        prop_assert_eq!(x.mul(&y).is_none(), undefined);
    }

    #[test]
    fn chain_classes_ignore_positive_scaling_of_markings(
        a in 1i64..=5, b in 1i64..=5, c in 1i64..=5,
        sn in 1i64..=7, sd in 1i64..=7,
    ) {
        let orthant = Cone::from_gens(3, vec![rats(&[1, 0, 0]), rats(&[0, 1, 0]), rats(&[0, 0, 1])]);
        let axis = Cone::from_gens(3, vec![rats(&[1, 0, 0])]);
        let mk = |p: Vec<Rat>| {
            RatioChain::new(
                orthant.clone(),
                vec![axis.clone(), orthant.clone()],
                vec![rats(&[1, 0, 0]), p],
                None,
            )
            .unwrap()
        };
        let base = mk(rats(&[a, b, c]));
        let s = ratio(sn, sd);
        let scaled = mk(vec![rat(a) * s.clone(), rat(b) * s.clone(), rat(c) * s]);
        prop_assert!(base.same_class(&scaled));
        // changing the direction mod the first face changes the class
        let tilted = mk(rats(&[a, b, c + 1]));
        let same_dir = rat(b) * rat(c + 1) == rat(c) * rat(b);
        prop_assert_eq!(base.same_class(&tilted), same_dir);
    }

    #[test]
    fn depth_one_ratios_multiply(
        f in prop::collection::vec(0i64..=5, 3),
        g in prop::collection::vec(0i64..=5, 3),
        h in prop::collection::vec(0i64..=5, 3),
    ) {
        prop_assume!(f.iter().any(|x| *x != 0));
        prop_assume!(g.iter().any(|x| *x != 0));
        prop_assume!(h.iter().any(|x| *x != 0));
        let orthant = Cone::from_gens(3, vec![rats(&[1, 0, 0]), rats(&[0, 1, 0]), rats(&[0, 0, 1])]);
        let chain = RatioChain::new(
            orthant.clone(),
            vec![orthant.clone()],
            vec![rats(&[1, 1, 1])],
            None,
        )
        .unwrap();
        let (f, g, h) = (rats(&f), rats(&g), rats(&h));
        let fg = ratio_eval(&chain, &f, &g).unwrap();
        let gh = ratio_eval(&chain, &g, &h).unwrap();
        let fh = ratio_eval(&chain, &f, &h).unwrap();
        prop_assert_eq!(fg.mul(&gh).unwrap(), fh);
        prop_assert_eq!(ratio_eval(&chain, &g, &f).unwrap(), fg.recip());
    }
}

#[test]
fn deeper_chains_split_ratios_by_killing_level() {
    let orthant = Cone::from_gens(2, vec![rats(&[1, 0]), rats(&[0, 1])]);
    let axis = Cone::from_gens(2, vec![rats(&[1, 0])]);
    let chain = RatioChain::new(
        orthant.clone(),
        vec![axis, orthant],
        vec![rats(&[1, 0]), rats(&[1, 1])],
        None,
    )
    .unwrap();
    let f = rats(&[0, 1]);
    let g = rats(&[1, 0]);
    // g survives the first level while f is killed there, so f/g
    // vanishes and g/f blows up
    assert_eq!(
        ratio_eval(&chain, &f, &g).unwrap(),
        RatioValue::Finite(rat(0))
    );
    assert_eq!(ratio_eval(&chain, &g, &f).unwrap(), RatioValue::Infinite);
    // both killed at the first level, compared at the second
    let f2 = rats(&[0, 2]);
    assert_eq!(
        ratio_eval(&chain, &f2, &f).unwrap(),
        RatioValue::Finite(rat(2))
    );
}
