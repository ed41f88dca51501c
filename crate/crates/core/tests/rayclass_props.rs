use arith_quandle::arith::{build_abelian_quandle, build_slot_machine, PrimeSet};
use arith_quandle::group::AbelianGroup;
use arith_quandle::ntheory;
use arith_quandle::quadfield::{split_prime, QuadElement, QuadField, QuadIdeal};
use arith_quandle::quandle::QuandleMorphism;
use arith_quandle::rayclass::{level_projection, ray_class_group, residue_unit_group, RayLevel};
use num_bigint::BigInt;
use proptest::prelude::*;

/// `(m, p)` with `m = 1` for `Q`; the modulus is the first prime above `p`.
const CASES: [(i64, u64); 8] = [
    (1, 3),
    (1, 5),
    (1, 7),
    (5, 3),
    (-1, 5),
    (-5, 3),
    (-5, 7),
    (3, 11),
];

fn setup(i: usize) -> (QuadField, QuadIdeal) {
    let (m, p) = CASES[i];
    let k = if m == 1 {
        QuadField::rational()
    } else {
        QuadField::new(m).unwrap()
    };
    (k, split_prime(k, p).unwrap().primes[0].ideal)
}

/// Primes of `K` above rational primes below 60, away from `p`.
fn small_primes(k: QuadField, p: &QuadIdeal) -> Vec<QuadIdeal> {
    ntheory::primes_up_to(60)
        .into_iter()
        .flat_map(|l| split_prime(k, l).unwrap().primes)
        .map(|pa| pa.ideal)
        .filter(|l| l.is_coprime(p))
        .collect()
}

fn add(g: &AbelianGroup, a: &[i128], b: &[i128]) -> Vec<i128> {
    g.reduce(&a.iter().zip(b).map(|(x, y)| x + y).collect::<Vec<_>>())
}

fn class(ray: &RayLevel, i: &QuadIdeal) -> usize {
    ray.index_of(&ray.ideal_class(i).unwrap())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn frobenius_is_a_homomorphism(case in 0..CASES.len(), n in 1u32..=3, a in 0usize..40, b in 0usize..40) {
        let (k, p) = setup(case);
        let ray = ray_class_group(&p, n, true).unwrap();
        let ls = small_primes(k, &p);
        let (x, y) = (&ls[a % ls.len()], &ls[b % ls.len()]);
        let sum = add(ray.group(), &ray.frobenius_class(x).unwrap(), &ray.frobenius_class(y).unwrap());
        prop_assert_eq!(class(&ray, &x.mul(y)), ray.index_of(&sum));
        prop_assert_eq!(class(&ray, &QuadIdeal::unit(k)), 0);
    }

    #[test]
    fn projections_commute_with_frobenius(case in 0..CASES.len(), n in 2u32..=3, a in 0usize..40) {
        let (k, p) = setup(case);
        let top = ray_class_group(&p, n, true).unwrap();
        let ls = small_primes(k, &p);
        let l = &ls[a % ls.len()];
        for m in 1..n {
            let low = ray_class_group(&p, m, true).unwrap();
            let proj = level_projection(&top, &low).unwrap();
            prop_assert!(proj.is_surjective());
            prop_assert_eq!(proj.apply(&top.frobenius_class(l).unwrap()), low.frobenius_class(l).unwrap());
        }
    }

    #[test]
    fn order_divides_units_times_class_number(case in 0..CASES.len(), n in 1u32..=3) {
        let (_, p) = setup(case);
        let ray = ray_class_group(&p, n, true).unwrap();
        let units = residue_unit_group(&p, n).unwrap();
        let bound = units.order() * ray.class_group().order();
        prop_assert_eq!(bound % ray.order(), 0);
        // exact sequence: |G_N| = |(O/𝔭^N)^×| · |Cl⁺| / |image of totally positive units|
        prop_assert_eq!(ray.order() * ray.unit_image_order(), bound);
    }

    #[test]
    fn rational_quandle_is_the_slot_machine(
        p in prop::sample::select(vec![3u64, 5, 7, 11]),
        n in 1u32..=2,
        picks in prop::sample::subsequence(vec![2u64, 3, 5, 7, 11, 13, 17, 19], 1..=4),
    ) {
        let rational: Vec<u64> = picks.into_iter().filter(|&l| l != p).collect();
        prop_assume!(!rational.is_empty());
        let q = QuadField::rational();
        let pi = QuadIdeal::from_int(q, p as i128);
        let ideals: Vec<QuadIdeal> = rational.iter().map(|&l| QuadIdeal::from_int(q, l as i128)).collect();
        let lvl = build_abelian_quandle(&pi, &PrimeSet::from_primes(q, ideals).unwrap(), n).unwrap();
        let slot = build_slot_machine(p, &rational, n).unwrap();
        let ray = lvl.ray();
        prop_assert_eq!(ray.order(), (p - 1) * p.pow(n - 1));
        for &l in &rational {
            let frob = ray.frobenius_class(&QuadIdeal::from_int(q, l as i128)).unwrap();
            let unit = ray.unit_class(&QuadElement::from_int(q, BigInt::from(l))).unwrap();
            prop_assert_eq!(frob, unit);
        }
        // residues ↦ ray classes gives a quandle isomorphism preserving labels
        let images: Vec<Vec<i128>> = slot
            .units()
            .generators()
            .iter()
            .map(|&u| ray.unit_class(&QuadElement::from_int(q, BigInt::from(u))).unwrap())
            .collect();
        let gs = slot.units().group();
        let phi = |x: usize| {
            let mut v = vec![0i128; ray.group().rank()];
            for (c, img) in gs.to_vec(x).iter().zip(&images) {
                for (o, y) in v.iter_mut().zip(img) {
                    *o += c * y;
                }
            }
            ray.index_of(&ray.group().reduce(&v))
        };
        let (ds, dr) = (slot.quandle().coset_data().unwrap(), lvl.quandle().coset_data().unwrap());
        let map = (0..slot.quandle().len()).map(|x| dr.element(ds.fiber_of(x), phi(ds.rep(x)))).collect();
        let f = QuandleMorphism { map, group_map: None };
        prop_assert!(f.is_bijective());
        prop_assert!(f.is_homomorphism(slot.quandle(), lvl.quandle()));
        prop_assert_eq!(slot.quandle().labels(), lvl.quandle().labels());
    }
}
