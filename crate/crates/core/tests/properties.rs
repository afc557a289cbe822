use std::sync::Arc;

use moufang::algebra::{Field, LoopAlgebra};
use moufang::free_loop::FreeMoufangLoop;
use moufang::parse::parse_word;
use moufang::verify::RunConfig;
use moufang::word::Word;
use proptest::prelude::*;

fn word(max_leaves: u32) -> impl Strategy<Value = Word> {
    let leaf = (1u32..=3, any::<bool>()).prop_map(|(g, inv)| if inv { Word::gen_inv(g) } else { Word::gen(g) });
    leaf.prop_recursive(4, max_leaves, 2, |inner| (inner.clone(), inner).prop_map(|(a, b)| Word::product(&a, &b)))
}

proptest! {
    #[test]
    fn display_parses_back(w in word(8)) {
        prop_assert_eq!(parse_word(&w.to_string()).unwrap(), w);
    }

    #[test]
    fn formal_inverse_is_an_involution(w in word(8)) {
        prop_assert_eq!(w.invert().invert(), w.clone());
        prop_assert_eq!(w.invert().len(), w.len());
    }

    #[test]
    fn element_times_inverse_is_identity(w in word(5)) {
        let free = FreeMoufangLoop::default();
        if let Ok(u) = free.element(&w) {
            let i = free.inv(&u);
            prop_assert!(free.mul(&u, &i).unwrap().is_identity());
            prop_assert!(free.mul(&i, &u).unwrap().is_identity());
        }
    }

    #[test]
    fn associator_is_trilinear(a in word(3), b in word(3), c in word(3), d in word(3)) {
        let alg = LoopAlgebra::new(Field::prime(7).unwrap(), Arc::new(FreeMoufangLoop::default()));
        let el = |w: &Word| alg.parse(&w.to_string());
        let (Ok(a), Ok(b), Ok(c), Ok(d)) = (el(&a), el(&b), el(&c), el(&d)) else { return Ok(()) };
        let sum = alg.associator(&a.add(&d).unwrap(), &b, &c);
        let parts = alg.associator(&a, &b, &c).and_then(|x| Ok((x, alg.associator(&d, &b, &c)?)));
        if let (Ok(sum), Ok((x, y))) = (sum, parts) {
            prop_assert_eq!(sum, x.add(&y).unwrap());
        }
    }

    #[test]
    fn run_config_json_round_trip(seed in any::<u64>(), samples in 1usize..500, cap in 1usize..100_000) {
        let c = RunConfig { rng_seed: seed, samples, closure_cap: cap, field: Field::prime(3).unwrap(), ..RunConfig::default() };
        let back: RunConfig = serde_json::from_str(&serde_json::to_string(&c).unwrap()).unwrap();
        prop_assert_eq!(back, c);
    }
}
