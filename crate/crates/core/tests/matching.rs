use arith_quandle::arith::{prime_set, rational_prime_below, tower, PrimeSetOptions, QuandleTower};
use arith_quandle::quadfield::{QuadField, QuadIdeal};
use arith_quandle::reconstruct::{
    evaluate_sigma, match_quandles, Case, Observation, ReconstructParams, Sigma,
};

fn f2(n: u32) -> QuandleTower {
    let k = QuadField::new(5).unwrap();
    let p = QuadIdeal::from_int(k, 3);
    let m = prime_set(k, &p, 100, &PrimeSetOptions::default()).unwrap();
    tower(&p, &m, n).unwrap()
}

fn f3(n: u32) -> QuandleTower {
    let g = QuadField::gaussian();
    let p = QuadIdeal::from_int(g, 3);
    let opts = PrimeSetOptions {
        split_only: true,
        ..Default::default()
    };
    let m = prime_set(g, &p, 100, &opts).unwrap();
    tower(&p, &m, n).unwrap()
}

#[test]
fn f2_against_shuffled_copy() {
    let (obs, truth) = Observation::from_tower(&f2(3), 12).unwrap();
    let sh = obs.shuffled(&truth, 2024);
    let report = match_quandles(&obs, &sh.observation, &ReconstructParams::default());
    assert!(report.is_ok(), "{:#?}", report.diagnostics);
    assert_eq!(report.case, Some(Case::RealQuadratic));
    assert_eq!(report.p, Some(3));
    assert_eq!(report.sigma, Some(Sigma::UndeterminedRealQuadratic));
    let ev = evaluate_sigma(&report, &truth, &sh.truth);
    assert!(ev.residue_chars_preserved, "{:?}", ev.pairs);
    assert_eq!(report.matching.len(), f2(3).prime_set().len());
}

#[test]
fn f3_against_conjugated_copy() {
    let t = f3(3);
    let (obs, truth) = Observation::from_tower(&t, 12).unwrap();
    let sh = obs.shuffled(&truth.conjugated(), 99);
    let report = match_quandles(&obs, &sh.observation, &ReconstructParams::default());
    assert!(report.is_ok(), "{:#?}", report.diagnostics);
    assert_eq!(report.case, Some(Case::ComplexNonSplit));
    let ev = evaluate_sigma(&report, &truth, &sh.truth);
    assert_eq!(ev.sigma, Some(Sigma::Conjugation));
    assert!(ev.allowed_ambiguity && ev.residue_chars_preserved);
    // the pairing recovered from W is complex conjugation
    let side = &report.sides[0];
    let pairing = side.pairing.as_ref().unwrap();
    for (f, &x) in side.fibers.iter().enumerate() {
        let partner = side.fibers[pairing[f].unwrap()];
        assert_eq!(truth.primes[partner], truth.primes[x].conj());
        assert_eq!(
            rational_prime_below(&truth.primes[partner]),
            rational_prime_below(&truth.primes[x])
        );
    }
    assert_eq!(report.alternatives, 1);
}

#[test]
fn f3_self_match_is_identity() {
    let (obs, truth) = Observation::from_tower(&f3(2), 12).unwrap();
    let sh = obs.shuffled(&truth, 5);
    let report = match_quandles(&obs, &sh.observation, &ReconstructParams::default());
    // two levels are too few for recover_p
    assert!(!report.is_ok());
    let (obs, truth) = Observation::from_tower(&f3(3), 12).unwrap();
    let sh = obs.shuffled(&truth, 5);
    let report = match_quandles(&obs, &sh.observation, &ReconstructParams::default());
    assert_eq!(
        evaluate_sigma(&report, &truth, &sh.truth).sigma,
        Some(Sigma::Identity)
    );
}
