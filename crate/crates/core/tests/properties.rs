mod common;

use std::collections::BTreeSet;

use common::*;
use monoqd_core::corpus::words;
use monoqd_core::quantised::omega_level;
use monoqd_core::{
    cenv_gap_check, cenv_verdict, conjugate, correspondence_model, dichotomy_verdict,
    locally_conjugate, operator_norm, unitary_equivalence_of, Dichotomy, FactorAutomaton,
    FockTruncation, GeneratorPattern, Letter, MonomialIdeal, QuantisedSystem, Side, SparseOp, Word,
};
use proptest::prelude::*;

fn arb_ideal(max_d: usize) -> impl Strategy<Value = MonomialIdeal> {
    (
        1..=max_d,
        prop::collection::vec(prop::bool::weighted(0.2), 36),
    )
        .prop_map(|(d, mask)| {
            let gens: Vec<Word> = words(d, 2, 3)
                .into_iter()
                .zip(mask)
                .filter_map(|(x, keep)| keep.then_some(x))
                .collect();
            MonomialIdeal::from_generators(d, gens, vec![]).unwrap()
        })
}

fn arb_word(d: usize, max_len: usize) -> impl Strategy<Value = Word> {
    prop::collection::vec(1..=d as Letter, 0..=max_len).prop_map(Word::new)
}

fn k_of(i: &MonomialIdeal) -> usize {
    i.type_k().finite().unwrap()
}

fn gens(i: &MonomialIdeal) -> Vec<Word> {
    i.basis().iter().cloned().collect()
}

/// A uniformly chosen permutation of `1..=d` from a seed.
fn sigma_from(d: usize, seed: u64) -> Vec<Letter> {
    let all = monoqd_core::corpus::permutations(d);
    all[(seed % all.len() as u64) as usize].clone()
}

/// Applies the letters of `mu` right to left starting from class `c`.
fn push_through(sys: &QuantisedSystem, mu: &Word, mut c: usize) -> Option<usize> {
    for &a in mu.letters().iter().rev() {
        c = sys.phi(a, c)?;
    }
    Some(c)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(96))]

    #[test]
    fn basis_is_an_antichain(i in arb_ideal(3)) {
        for a in i.basis() {
            for b in i.basis() {
                prop_assert!(a == b || !a.contains_factor(b));
            }
        }
    }

    #[test]
    fn basis_is_idempotent(i in arb_ideal(3)) {
        let again = MonomialIdeal::from_generators(i.d(), gens(&i), vec![]).unwrap();
        prop_assert_eq!(again.basis(), i.basis());
        prop_assert_eq!(again.type_k(), i.type_k());
    }

    #[test]
    fn basis_generates_the_language(i in arb_ideal(3), x in arb_word(3, 7)) {
        let x = Word::new(x.letters().iter().map(|&a| (a - 1) % i.d() as Letter + 1).collect());
        prop_assert_eq!(i.is_forbidden(x.letters()), brute_forbidden(&gens(&i), x.letters()));
    }

    #[test]
    fn language_is_factorial(i in arb_ideal(3), x in arb_word(3, 8), cut in 0usize..9) {
        let x = Word::new(x.letters().iter().map(|&a| (a - 1) % i.d() as Letter + 1).collect());
        let a = FactorAutomaton::build(&i).unwrap();
        let cut = cut.min(x.len());
        if a.is_allowable(&x) {
            prop_assert!(a.is_allowable(&x.prefix(cut)));
            prop_assert!(a.is_allowable(&x.suffix(x.len() - cut)));
        }
    }

    #[test]
    fn death_is_permanent(i in arb_ideal(3), x in arb_word(3, 8)) {
        let x = Word::new(x.letters().iter().map(|&a| (a - 1) % i.d() as Letter + 1).collect());
        let a = FactorAutomaton::build(&i).unwrap();
        let mut s = Some(a.initial());
        let mut dead = false;
        for &l in x.letters() {
            s = s.and_then(|s| a.step(s, l));
            if dead {
                prop_assert!(s.is_none());
            }
            dead = s.is_none();
        }
    }

    #[test]
    fn counts_match_enumeration(i in arb_ideal(3)) {
        let a = FactorAutomaton::build(&i).unwrap();
        let all = a.enumerate_allowable(5);
        for n in 0..=5 {
            prop_assert_eq!(a.count_allowable(n).unwrap() as usize, all.iter().filter(|x| x.len() == n).count());
        }
    }

    #[test]
    fn reverse_is_an_involution_and_swaps_sinks(i in arb_ideal(3)) {
        let r = i.reverse();
        prop_assert_eq!(&r.reverse(), &i);
        prop_assert_eq!(i.find_sink(Side::Left).unwrap().is_some(), r.find_sink(Side::Right).unwrap().is_some());
        prop_assert_eq!(i.find_sink(Side::Right).unwrap().is_some(), r.find_sink(Side::Left).unwrap().is_some());
    }

    #[test]
    fn sinks_are_sound(i in arb_ideal(3)) {
        let a = FactorAutomaton::build(&i).unwrap();
        for side in [Side::Left, Side::Right] {
            if let Some(s) = i.find_sink(side).unwrap() {
                prop_assert!(a.is_allowable(&s));
                for l in 1..=i.d() as Letter {
                    let y = match side {
                        Side::Left => s.prepend(l),
                        Side::Right => s.append(l),
                    };
                    prop_assert!(!a.is_allowable(&y));
                }
            }
        }
    }

    #[test]
    fn domain_law(i in arb_ideal(3)) {
        let sys = QuantisedSystem::build(&i).unwrap();
        for c in 0..sys.len() {
            for l in 1..=i.d() as Letter {
                let allowed = i.is_allowable(sys.representative(c).prepend(l).letters());
                prop_assert_eq!(sys.in_domain(l, c), allowed);
                prop_assert_eq!(sys.phi(l, c).is_some(), allowed);
            }
        }
    }

    #[test]
    fn q_supports_partition_the_classes(i in arb_ideal(3)) {
        let sys = QuantisedSystem::build(&i).unwrap();
        let q = sys.q_projection_supports();
        let mut seen = BTreeSet::new();
        for cs in q.nonempty().values() {
            for &c in cs {
                prop_assert!(seen.insert(c));
            }
        }
        prop_assert_eq!(seen.len(), sys.len());
    }

    #[test]
    fn maps_are_well_defined(i in arb_ideal(3)) {
        let sys = QuantisedSystem::build(&i).unwrap();
        sys.check_well_defined(k_of(&i) + 2).unwrap();
    }

    #[test]
    fn dynamics_reconstruct_the_language(i in arb_ideal(3)) {
        let sys = QuantisedSystem::build(&i).unwrap();
        let g = gens(&i);
        for mu in all_words(i.d(), k_of(&i) + 3) {
            prop_assert_eq!(sys.forbidden_via_dynamics(&mu), brute_forbidden(&g, mu.letters()), "{}", mu);
        }
    }

    #[test]
    fn partition_is_stable_past_type(i in arb_ideal(3)) {
        let k = k_of(&i);
        let a = omega_level(&i, k, None).unwrap();
        let b = omega_level(&i, k + 1, None).unwrap();
        prop_assert_eq!(a.classes.len(), b.classes.len());
        let ga = a.grouping();
        let gb = b.grouping();
        for x in ga.keys() {
            for y in ga.keys() {
                prop_assert_eq!(ga[x] == ga[y], gb[x] == gb[y]);
            }
        }
    }

    #[test]
    fn permuted_ideals_are_conjugate(i in arb_ideal(3), seed in any::<u64>()) {
        let sigma = sigma_from(i.d(), seed);
        let j = i.permute(&sigma);
        let si = QuantisedSystem::build(&i).unwrap();
        let sj = QuantisedSystem::build(&j).unwrap();
        let w = conjugate(&si, &sj).expect("permuted ideal is conjugate");
        prop_assert_eq!(w.verify(&si, &sj), Ok(()));
        prop_assert_eq!(w.inverse().verify(&sj, &si), Ok(()));
        let local = w.to_local(&sj);
        prop_assert_eq!(local.verify(&si, &sj), Ok(()));
        prop_assert_eq!(local.inverse().verify(&sj, &si), Ok(()));
        prop_assert!(unitary_equivalence_of(&si, &sj).unwrap().verify(&si, &sj).is_ok());
    }

    #[test]
    fn equivalence_hierarchy(i in arb_ideal(2), j in arb_ideal(2)) {
        let si = QuantisedSystem::build(&i).unwrap();
        let sj = QuantisedSystem::build(&j).unwrap();
        let conj = conjugate(&si, &sj);
        let local = locally_conjugate(&si, &sj);
        if let Some(w) = &conj {
            prop_assert_eq!(w.verify(&si, &sj), Ok(()));
            prop_assert!(local.is_some());
        }
        if let Some(w) = &local {
            prop_assert_eq!(w.verify(&si, &sj), Ok(()));
            prop_assert_eq!(w.inverse().verify(&sj, &si), Ok(()));
        }
        prop_assert_eq!(conjugate(&sj, &si).is_some(), conj.is_some());
        prop_assert_eq!(locally_conjugate(&sj, &si).is_some(), local.is_some());
        let u = unitary_equivalence_of(&si, &sj);
        prop_assert_eq!(u.is_some(), local.is_some());
        if let Some(u) = u {
            prop_assert_eq!(u.verify(&si, &sj), Ok(()));
        }
    }

    #[test]
    fn diagonal_norm_matches_class_data(i in arb_ideal(3)) {
        // Sum of the source projections: at a basis vector x its value is the
        // number of letters l with l x allowable.
        let k = k_of(&i);
        let fock = FockTruncation::new(&i, k + 2).unwrap();
        let mut sum = SparseOp::zeros(fock.dim());
        for l in 1..=i.d() as Letter {
            let t = fock.letter(l);
            sum = sum.add(&t.adjoint().mul(&t).unwrap()).unwrap();
        }
        // The top level is cut off by truncation; compress to the interior.
        let inner = fock.interior(1).unwrap();
        let compressed = SparseOp::from_entries(
            fock.dim(),
            sum.entries().filter(|&(r, c, _)| inner.contains(&r) && inner.contains(&c)),
        ).unwrap();
        let est = operator_norm(&compressed).unwrap();
        let sys = QuantisedSystem::build(&i).unwrap();
        let expect = (0..sys.len()).map(|c| sys.support(c).len() as i64).max().unwrap();
        prop_assert_eq!(est.norm_sq_exact, Some(expect * expect));
    }

    #[test]
    fn dichotomy_branch_matches_blocked_letters(i in arb_ideal(3)) {
        let model = correspondence_model(&i).unwrap();
        let verdict = dichotomy_verdict(&model);
        let g = gens(&i);
        let allow = brute_allowable(&g, i.d(), k_of(&i) + 1);
        let all_blocked = (1..=i.d() as Letter)
            .all(|l| allow.iter().any(|u| brute_forbidden(&g, u.append(l).letters())));
        let expect = if all_blocked { Dichotomy::ToeplitzFock } else { Dichotomy::CuntzQuotient };
        prop_assert_eq!(verdict.branch, expect);
        prop_assert_eq!(verdict.fock_is_toeplitz_pimsner, i.is_zero());
        prop_assert!(!(verdict.fock_is_toeplitz_pimsner && verdict.branch == Dichotomy::ToeplitzFock));
    }

    #[test]
    fn gap_holds_whenever_words_exist(i in arb_ideal(3)) {
        if let Ok(env) = cenv_verdict(&i) {
            let ws = env.gap_words();
            if !ws.is_empty() {
                let g = cenv_gap_check(&i, &ws).unwrap();
                prop_assert!(g.full_norm_sq - g.essential_norm_sq >= 1, "{} {:?}", i, g);
            }
        }
    }

    #[test]
    fn rank_grows_iff_infinitely_many_followers(i in arb_ideal(2), mu in arb_word(2, 3)) {
        let a = FactorAutomaton::build(&i).unwrap();
        prop_assume!(i.d() == 2 && a.is_allowable(&mu));
        let sys = QuantisedSystem::build(&i).unwrap();
        let infinite = (0..sys.len()).any(|c| sys.is_infinite(c) && push_through(&sys, &mu, c).is_some());
        let l = mu.len() + a.num_states() + 1;
        let r0 = FockTruncation::new(&i, l).unwrap().word_operator(&mu).rank().unwrap();
        let r1 = FockTruncation::new(&i, l + 1).unwrap().word_operator(&mu).rank().unwrap();
        prop_assert_eq!(r1 > r0, infinite, "{} mu={}", i, mu);
    }

    #[test]
    fn pattern_scan_matches_instances(
        u in arb_word(2, 2),
        v in arb_word(2, 2),
        w in arb_word(2, 2),
        x in arb_word(2, 10),
    ) {
        prop_assume!(!v.is_empty());
        let p = GeneratorPattern::new(u, v, w).unwrap();
        let brute = (1..=x.len()).any(|n| has_factor(x.letters(), p.instance(n).letters()));
        prop_assert_eq!(p.occurs_in(x.letters()), brute);
        let exact = (1..=x.len()).any(|n| p.instance(n) == x);
        prop_assert_eq!(p.is_instance(x.letters()), exact);
    }
}
