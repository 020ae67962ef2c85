use proptest::prelude::*;

use memoria::error::Error;
use memoria::objective::builtin::{letter_alphabet, Params};
use memoria::objective::{graph_satisfies, Objective, SatMode};
use memoria::random::{random_monotone, rng, satisfying_samples};
use memoria::solve::check_universality_sample;
use memoria::universal::{builtin_universal, direct_product, lexico_product, muller_universal, Universal, BUILTIN_UNIVERSAL};
use memoria::zielonka::{build_zielonka, memory_of};

fn family(k: usize, bits: u64) -> Objective {
    let alphabet = letter_alphabet(k);
    let sets: Vec<Vec<String>> = (1u64..1 << k)
        .filter(|s| bits >> s & 1 == 1)
        .map(|s| (0..k).filter(|i| s >> i & 1 == 1).map(|i| alphabet[i].clone()).collect())
        .collect();
    Objective::muller(&alphabet, &sets).unwrap()
}

#[test]
fn builtin_constructions_are_monotone() {
    for name in BUILTIN_UNIVERSAL {
        for bound in 1..=3 {
            let u = builtin_universal(name, &Params::new(), bound).unwrap();
            assert!(u.ordered().check_monotone().is_none(), "{name} at bound {bound}");
            if let Universal::Separated(s) = &u {
                assert_eq!(s.validate(), Ok(()), "{name} at bound {bound}");
            }
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(300))]

    #[test]
    fn muller_graphs_are_monotone_narrow_and_satisfying(k in 1usize..=4, bits in any::<u64>(), bound in 1usize..=3) {
        let obj = family(k, bits);
        let u = muller_universal(&obj, bound).unwrap();
        prop_assert!(u.check_monotone().is_none());
        prop_assert!(u.width().unwrap() <= memory_of(&build_zielonka(&obj).unwrap()));
        prop_assert!(graph_satisfies(u.graph(), &obj, SatMode::AllVertices).unwrap().is_none());
    }

    #[test]
    fn products_of_monotone_graphs_are_monotone(seed in any::<u64>(), n1 in 1usize..=4, n2 in 1usize..=4) {
        let mut r = rng(seed);
        let ab = vec!["a".to_string(), "b".to_string()];
        let cd = vec!["c".to_string(), "d".to_string()];
        let u1 = random_monotone(&mut r, n1, &ab);
        let u2 = random_monotone(&mut r, n2, &cd);
        let u3 = random_monotone(&mut r, n2, &ab);
        prop_assert!(lexico_product(&u1, &u2).unwrap().check_monotone().is_none());
        prop_assert!(direct_product(&u1, &u3).unwrap().check_monotone().is_none());
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(40))]

    #[test]
    fn muller_graphs_embed_small_satisfying_graphs(seed in any::<u64>(), k in 1usize..=3, bits in any::<u64>()) {
        let obj = family(k, bits);
        let size = 6;
        let samples = match satisfying_samples(&mut rng(seed), 10, size, &obj) {
            Ok(s) => s,
            // families that random graphs essentially never satisfy
            Err(Error::Precondition(_)) => return Ok(()),
            Err(e) => panic!("{e}"),
        };
        let u = Universal::Ordered(muller_universal(&obj, size + 1).unwrap());
        prop_assert!(check_universality_sample(&u, &obj, &samples).unwrap().passed());
    }
}
