use std::sync::OnceLock;

use arith_quandle::arith::{prime_set, rational_prime_below, tower, PrimeSetOptions, QuandleTower};
use arith_quandle::padic::LocalElement;
use arith_quandle::quadfield::{QuadField, QuadIdeal};
use arith_quandle::reconstruct::{
    evaluate_sigma, match_quandles, reciprocity_for_primes, recover_residue_chars, Observation,
    ReconstructParams, Sigma,
};
use num_bigint::BigInt;
use proptest::prelude::*;

const PRECISION: i64 = 20;

fn params() -> ReconstructParams {
    ReconstructParams {
        precision: PRECISION,
        candidate_bound: 100,
        ..ReconstructParams::default()
    }
}

/// `Q`, `p = 5`, `𝓜` the primes up to 40, levels 1..3.
fn rational_tower() -> &'static QuandleTower {
    static T: OnceLock<QuandleTower> = OnceLock::new();
    T.get_or_init(|| {
        let q = QuadField::rational();
        let p = QuadIdeal::from_int(q, 5);
        let m = prime_set(q, &p, 40, &PrimeSetOptions::default()).unwrap();
        tower(&p, &m, 3).unwrap()
    })
}

fn unit(like: &LocalElement, a: u64) -> LocalElement {
    let p = like.field().p();
    let a = if a % p == 0 { a + 1 } else { a };
    LocalElement::from_int(like.field(), BigInt::from(a), like.precision())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn residue_chars_survive_a_unit_change(c in 1u64..1 << 40) {
        let t = rational_tower();
        let data = reciprocity_for_primes(t.prime(), t.prime_set().primes(), PRECISION).unwrap();
        let scaled: Vec<Option<LocalElement>> =
            data.values.iter().map(|v| Some(v.mul(&unit(v, c)).unwrap())).collect();
        let before: Vec<Option<u64>> = recover_residue_chars(
            &data.values.iter().cloned().map(Some).collect::<Vec<_>>(),
            &params(),
        )
        .into_iter()
        .map(|r| r.ok().map(|r| r.l))
        .collect();
        let after: Vec<Option<u64>> =
            recover_residue_chars(&scaled, &params()).into_iter().map(|r| r.ok().map(|r| r.l)).collect();
        prop_assert_eq!(&before, &after);
        for (l, r) in t.prime_set().primes().iter().zip(&after) {
            prop_assert_eq!(*r, Some(rational_prime_below(l)));
        }
    }

    #[test]
    fn self_match_preserves_residue_chars(seed: u64, c in 1u64..1 << 40) {
        let (obs, truth) = Observation::from_tower(rational_tower(), PRECISION).unwrap();
        let mut sh = obs.shuffled(&truth, seed);
        // a unit change on one side only
        if let Some(v) = sh.observation.reciprocity.as_mut() {
            for x in v.iter_mut() {
                *x = x.mul(&unit(x, c)).unwrap();
            }
        }
        let report = match_quandles(&obs, &sh.observation, &params());
        prop_assert!(report.is_ok(), "{:?}", report.diagnostics);
        let ev = evaluate_sigma(&report, &truth, &sh.truth);
        prop_assert!(ev.residue_chars_preserved);
        prop_assert_eq!(ev.sigma, Some(Sigma::Identity));
        let [a, b] = &report.sides;
        for &(i, j) in &report.matching {
            prop_assert_eq!(a.residue_chars[i], b.residue_chars[j]);
        }
    }
}
