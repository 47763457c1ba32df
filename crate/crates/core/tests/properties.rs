use proptest::prelude::*;

use palg::algebra::{build_chain, build_si, TableAlgebra};
use palg::congruence::{all_congruences, principal_congruence};
use palg::decide::{check_identity, exhaustive, pruned, Variety};
use palg::order::ElementSet;
use palg::term::{meet, rewrite, star, var};
use palg::{build_free, parse, Equation, Limits, Poset, QuasiIdentity, Rank, Term, Valuation};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn lim() -> Limits {
    Limits::default()
}

fn term(vars: u32, depth: u32) -> impl Strategy<Value = Term> {
    let leaf = prop_oneof![
        1 => Just(Term::Zero),
        1 => Just(Term::One),
        6 => (1..=vars).prop_map(var),
    ];
    leaf.prop_recursive(depth, 24, 2, |inner| {
        prop_oneof![
            (inner.clone(), inner.clone()).prop_map(|(a, b)| meet(a, b)),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| palg::term::join(a, b)),
            inner.prop_map(star),
        ]
    })
}

fn small_algebras() -> Vec<(&'static str, TableAlgebra)> {
    vec![
        ("si:1", build_si(1, &lim()).unwrap()),
        ("si:2", build_si(2, &lim()).unwrap()),
        ("chain:4", build_chain(4, &lim()).unwrap()),
        (
            "free:1,1",
            build_free(Rank::Finite(1), 1, &lim())
                .unwrap()
                .to_table(&lim())
                .unwrap()
                .0,
        ),
    ]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(96))]

    #[test]
    fn printing_round_trips(t in term(3, 5)) {
        prop_assert_eq!(parse(&t.to_string()).unwrap(), t.clone());
        prop_assert_eq!(Term::from_json(&t.to_json()).unwrap(), t);
    }

    #[test]
    fn normal_forms_are_sound_and_idempotent(t in term(2, 4), n in 0usize..4) {
        let free = build_free(Rank::Finite(n), 2, &lim()).unwrap();
        let nf = free.normal_form(&t).unwrap();
        prop_assert_eq!(free.eval(&nf).unwrap(), free.eval(&t).unwrap());
        prop_assert_eq!(free.normal_form(&nf).unwrap(), nf);
    }

    #[test]
    fn valid_rewrites_keep_normal_forms(t in term(2, 4), seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let s = rewrite(&mut rng, &t, 2);
        let k = t.max_var().max(s.max_var()).max(1) as usize;
        let free = build_free(Rank::Omega, k, &lim()).unwrap();
        prop_assert_eq!(free.normal_form(&s).unwrap(), free.normal_form(&t).unwrap());
    }

    #[test]
    fn witnesses_refute(l in term(2, 3), r in term(2, 3), n in 0usize..4) {
        let e = Equation::new(l.clone(), r.clone());
        let v = check_identity(&e, Variety::PaN(n), &lim()).unwrap();
        prop_assert_eq!(v.holds, v.witness.is_none());
        if let (Some(w), Some(spec)) = (&v.witness, &v.algebra) {
            let m: usize = spec.trim_start_matches("si:").parse().unwrap();
            let b = build_si(m, &lim()).unwrap();
            let mut full: Valuation<usize> = Valuation::new();
            for i in 1..=2 {
                full.set(i, w.get(i).copied().unwrap_or(0));
            }
            prop_assert_ne!(l.eval(&b, &full).unwrap(), r.eval(&b, &full).unwrap());
        }
    }

    #[test]
    fn pruned_agrees_with_exhaustive(
        prem in prop::collection::vec((term(3, 2), term(3, 2)), 0..3),
        concl in (term(3, 2), term(3, 2)),
        which in 0usize..4,
    ) {
        let q = QuasiIdentity {
            premises: prem.into_iter().map(|(a, b)| Equation::new(a, b)).collect(),
            conclusion: Equation::new(concl.0, concl.1),
        };
        let (_, a) = &small_algebras()[which];
        let e = exhaustive(&q, a, &lim()).unwrap();
        let p = pruned(&q, a, &lim()).unwrap();
        prop_assert_eq!(e.holds, p.holds);
        prop_assert_eq!(e.witness, p.witness);
    }

    #[test]
    fn principal_congruences_are_least(which in 0usize..4, x in 0usize..9, y in 0usize..9) {
        let (_, a) = &small_algebras()[which];
        let (x, y) = (x % a.size(), y % a.size());
        let theta = principal_congruence(a, x, y);
        prop_assert!(theta.is_congruence_of(a));
        prop_assert!(theta.same(x, y));
        for c in all_congruences(a, &lim()).unwrap() {
            if c.same(x, y) {
                prop_assert!(theta.leq(&c));
            }
        }
    }

    #[test]
    fn closures_are_upsets(rel in prop::collection::vec((0usize..7, 0usize..7), 0..10), bits in 0u64..128) {
        let pairs: Vec<(usize, usize)> = rel.into_iter().filter(|(a, b)| a < b).collect();
        let p = Poset::from_covers(7, &pairs).unwrap();
        let s = ElementSet::from_indices(7, (0..7).filter(|i| bits >> i & 1 == 1));
        let up = p.upset_closure(&s);
        prop_assert!(p.is_upset(&up) && s.is_subset(&up));
        prop_assert!(p.is_downset(&p.downset_closure(&s)));
    }
}

#[test]
fn table_and_upset_forms_agree() {
    for (name, a) in small_algebras() {
        let (u, js) = a.to_upset();
        let (back, elems) = u.to_table(&lim()).unwrap();
        assert!(palg::algebra::is_isomorphic(&a, &back).is_some(), "{name}");
        for x in a.elements() {
            let ux = a.upset_of(&js, x);
            assert_eq!(u.star(&ux), a.upset_of(&js, a.star(x)), "{name}");
            assert!(elems.contains(&ux));
        }
    }
}
