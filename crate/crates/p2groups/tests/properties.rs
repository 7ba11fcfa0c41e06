use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use p2groups::cayley::{self, CayleyDigraph, CayleyObject, GroupKind};
use p2groups::codes::{hensel_lift, invariant_cyclic_codes, CyclicCode, ModPoly, Submodule, Zn};
use p2groups::perm::{PermGroup, Permutation};
use p2groups::pgroups::{build_p, recognize_p_subgroup, Family};
use p2groups::wreath_cohom::{
    build_g, cohomologous, decompose_g, equivalent_tuples, validate_crossed_hom, CrossedHom, QuotientModule,
    WreathTuple,
};

fn perm(n: usize) -> impl Strategy<Value = Permutation> {
    Just((0..n).collect::<Vec<usize>>())
        .prop_shuffle()
        .prop_map(|v| Permutation::from_images(v).unwrap())
}

fn random_in(g: &PermGroup, seed: u64) -> Permutation {
    g.random_element(&mut ChaCha8Rng::seed_from_u64(seed))
}

fn kind() -> impl Strategy<Value = GroupKind> {
    prop_oneof![Just(GroupKind::Cyclic), Just(GroupKind::Elementary)]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn composition_is_associative_with_inverses(a in perm(9), b in perm(9), c in perm(9)) {
        prop_assert_eq!(a.compose(&b).compose(&c), a.compose(&b.compose(&c)));
        prop_assert!(a.compose(&a.inverse()).is_identity());
        prop_assert_eq!(a.conjugate(&b).conjugate(&c), a.conjugate(&b.compose(&c)));
        prop_assert_eq!(a.compose(&b).inverse(), b.inverse().compose(&a.inverse()));
    }

    #[test]
    fn group_membership_is_closed(s1 in any::<u64>(), s2 in any::<u64>(), x in perm(9)) {
        let g = build_p(3, 2, Family::Elementary).unwrap();
        let (a, b) = (random_in(&g, s1), random_in(&g, s2));
        prop_assert!(g.has(&a.compose(&b)) && g.has(&a.inverse()));
        let h = g.conjugate_by(&x);
        prop_assert_eq!(h.order(), g.order());
        prop_assert!(h.has(&a.conjugate(&x)));
    }

    #[test]
    fn recognition_survives_relabeling(i in 1usize..=5, cyclic in any::<bool>(), x in perm(25)) {
        let fam = if cyclic { Family::Cyclic } else { Family::Elementary };
        let g = build_p(5, i, fam).unwrap();
        let direct = recognize_p_subgroup(&g).unwrap().family;
        let moved = g.conjugate_by(&x);
        let k = recognize_p_subgroup(&moved).unwrap();
        prop_assert_eq!(k.family, direct);
        prop_assert!(moved.conjugate_by(&k.conjugator).same_group(&k.family.standard_group(5).unwrap()));
    }

    #[test]
    fn submodule_reduction_is_canonical(rows in prop::collection::vec(prop::collection::vec(0u64..4, 5), 0..3), v in prop::collection::vec(0u64..4, 5), w in prop::collection::vec(0u64..4, 5)) {
        let m = Submodule::new(4, 5, &rows).unwrap();
        let r = m.reduce(&v);
        prop_assert_eq!(m.reduce(&r), r.clone());
        let diff: Vec<u64> = v.iter().zip(&r).map(|(a, b)| (a + 4 - b) % 4).collect();
        prop_assert!(m.contains(&diff));
        let other = Submodule::new(4, 5, &[w]).unwrap();
        let s = m.sum(&other);
        let i = m.intersect(&other);
        prop_assert!(s.contains_module(&m) && s.contains_module(&other));
        prop_assert!(m.contains_module(&i) && other.contains_module(&i));
        prop_assert_eq!(s.order() * i.order(), m.order() * other.order());
    }

    #[test]
    fn cayley_automorphisms_contain_the_regular_group(k in kind(), mask in 0u64..(1 << 24)) {
        let g = CayleyDigraph::from_mask(5, k, mask).unwrap();
        let aut = g.automorphisms();
        prop_assert!(k.regular_group(5).is_subgroup_of(&aut));
        prop_assert!(aut.same_group(&g.complement().automorphisms()));
        prop_assert!(cayley::two_closure(&aut).unwrap().same_group(&aut));
    }

    #[test]
    fn refinement_matches_full_scan(k in kind(), mask in 0u64..256) {
        let g = CayleyDigraph::from_mask(3, k, mask).unwrap();
        prop_assert!(g.automorphisms().same_group(&g.exhaustive_automorphisms().unwrap()));
    }

    #[test]
    fn normalizer_isomorphism_finds_relabelings(k in kind(), mask in 0u64..256, x in perm(9)) {
        let d = CayleyDigraph::from_mask(3, k, mask).unwrap().digraph();
        let e = d.image(&x);
        let fam = recognize_p_subgroup(&d.automorphism_group().sylow(3, None, 0).unwrap()).unwrap().family;
        let w = cayley::iso_by_normalizer(&d, &e, fam).unwrap().expect("relabeling is an isomorphism");
        prop_assert!(d.image(&w) == e);
    }

    #[test]
    fn principal_cocycles_are_trivial(a in prop::collection::vec(0u64..3, 5)) {
        let h = PermGroup::new(5, vec![
            Permutation::from_fn(5, |x| (x + 1) % 5).unwrap(),
            Permutation::from_fn(5, |x| 4 * x % 5).unwrap(),
        ]).unwrap();
        let m = QuotientModule::free(3, 5);
        let phi = CrossedHom::principal(m.clone(), &h, &a).unwrap();
        prop_assert!(validate_crossed_hom(&phi, &h).unwrap());
        let zero = CrossedHom::zero(m, &h).unwrap();
        prop_assert!(cohomologous(&phi, &zero).unwrap().is_some());
    }

    #[test]
    fn decomposition_is_stable_under_relabeling(a in prop::collection::vec(0u64..2, 3), x in perm(9)) {
        let h = PermGroup::symmetric(3);
        let m = QuotientModule::new(Submodule::repetition(2, 3));
        let phi = CrossedHom::principal(m, &h, &a).unwrap();
        let t = WreathTuple::new(h, PermGroup::cyclic(3), phi).unwrap();
        let g = build_g(&t).unwrap().conjugate_by(&x);
        let d = decompose_g(&g).unwrap();
        prop_assert!(build_g(&d.tuple).unwrap().same_group(&g.conjugate_by(&d.relabel)));
        prop_assert!(equivalent_tuples(&t, &d.tuple).unwrap().is_some());
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn hensel_lifts_divide(idx in 0usize..8, t in 2u32..4) {
        let codes = invariant_cyclic_codes(7, 2, &[]).unwrap();
        let c = codes[idx % codes.len()].to_module().unwrap();
        let f = CyclicCode::from_module(c).unwrap().generator().cloned().unwrap();
        let g = hensel_lift(&f, 7, t).unwrap();
        let big = 2u64.pow(t);
        prop_assert!(g.divides(&ModPoly::x_n_minus_one(Zn::new(big), 7)).unwrap());
        let reduced: Vec<u64> = g.coeffs().iter().map(|x| x % 2).collect();
        prop_assert_eq!(ModPoly::new(Zn::new(2), reduced), f);
    }
}
