use arith_quandle::quadfield::{
    fundamental_unit, narrow_class_group, principal_generator, split_prime, BinaryForm, QuadField,
    QuadIdeal, DEFAULT_DISC_BOUND,
};
use arith_quandle::{ntheory, QuadElem};
use num_bigint::BigInt;
use num_traits::Signed;
use proptest::prelude::*;

const MS: [i64; 14] = [-1, -2, -3, -5, -6, -14, -23, 2, 3, 5, 6, 10, 15, 34];

fn field() -> impl Strategy<Value = QuadField> {
    prop::sample::select(MS.to_vec()).prop_map(|m| QuadField::new(m).unwrap())
}

fn nonzero(field: QuadField) -> impl Strategy<Value = QuadElem> {
    (-40i128..=40, -40i128..=40)
        .prop_filter("nonzero", |&(x, y)| x != 0 || y != 0)
        .prop_map(move |(x, y)| QuadElem::integral(field, x, y))
}

fn field_with(k: usize) -> impl Strategy<Value = (QuadField, Vec<QuadElem>)> {
    field().prop_flat_map(move |f| (Just(f), prop::collection::vec(nonzero(f), k)))
}

fn principal(a: &QuadElem) -> QuadIdeal {
    QuadIdeal::principal(a).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn primes_above_l_multiply_to_l(f in field(), i in 0usize..25) {
        let l = ntheory::primes_up_to(100)[i];
        let s = split_prime(f, l).unwrap();
        let product = s.primes.iter().fold(QuadIdeal::unit(f), |acc, pa| acc.mul(&pa.ideal.pow(pa.e)));
        prop_assert_eq!(product, QuadIdeal::from_int(f, l as i128));
        prop_assert_eq!(s.primes.iter().map(|pa| pa.e * pa.f).sum::<u32>(), 2);
        for pa in &s.primes {
            prop_assert!(pa.ideal.is_prime());
            prop_assert_eq!(pa.ideal.norm(), (l as i128).pow(pa.f));
        }
    }

    #[test]
    fn norms_are_multiplicative((f, v) in field_with(2)) {
        let (i, j) = (principal(&v[0]), principal(&v[1]));
        prop_assert_eq!(i.mul(&j).norm(), i.norm() * j.norm());
        prop_assert_eq!(principal(&v[0].mul(&v[1])), i.mul(&j));
        prop_assert_eq!(i.norm(), v[0].norm().to_integer().abs());
        // factorization recovers the ideal
        let back = i.factor().iter().fold(QuadIdeal::unit(f), |acc, (p, e)| acc.mul(&p.pow(*e)));
        prop_assert_eq!(back, i);
    }

    #[test]
    fn principal_generators_generate((_, v) in field_with(1)) {
        let i = principal(&v[0]);
        let g = principal_generator(&i, false).expect("principal");
        prop_assert_eq!(QuadIdeal::principal(&g).unwrap(), i);
        // α² is totally positive, so (α²) is narrowly principal
        let sq = i.pow(2);
        let g = principal_generator(&sq, true).expect("narrowly principal");
        prop_assert!(g.is_totally_positive());
        prop_assert_eq!(QuadIdeal::principal(&g).unwrap(), sq);
    }

    #[test]
    fn class_map_is_a_homomorphism(f in field(), a in 0usize..25, b in 0usize..25) {
        let cl = narrow_class_group(f, DEFAULT_DISC_BOUND).unwrap();
        let g = cl.group();
        let prime = |i: usize| split_prime(f, ntheory::primes_up_to(100)[i]).unwrap().primes[0].ideal;
        let (p, q) = (prime(a), prime(b));
        prop_assert_eq!(cl.class_of_ideal(&p.mul(&q)), g.add(cl.class_of_ideal(&p), cl.class_of_ideal(&q)));
        prop_assert_eq!(cl.class_of_ideal(&QuadIdeal::unit(f)), 0);
        // 𝔭·𝔭̄ = (N𝔭) is narrowly principal
        prop_assert_eq!(cl.class_of_ideal(&p.mul(&p.conj())), 0);
    }

    #[test]
    fn form_composition_is_a_group_law(f in field(), i in 0usize..64, j in 0usize..64, k in 0usize..64) {
        let cl = narrow_class_group(f, DEFAULT_DISC_BOUND).unwrap();
        let forms = cl.forms();
        let n = forms.len();
        let (x, y, z) = (&forms[i % n], &forms[j % n], &forms[k % n]);
        let class = |form: BinaryForm<i128>| cl.class_of_form(&form).unwrap();
        let xy_z = cl.compose(&cl.compose(x, y), z);
        let x_yz = cl.compose(x, &cl.compose(y, z));
        prop_assert_eq!(class(xy_z), class(x_yz));
        prop_assert_eq!(class(cl.compose(x, y)), class(cl.compose(y, x)));
        prop_assert_eq!(class(cl.compose(x, &forms[0])), class(x.clone()));
        let inverse = BinaryForm::new(x.a, -x.b, x.c);
        prop_assert_eq!(class(cl.compose(x, &inverse)), 0);
        prop_assert_eq!(n as u64, cl.order());
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(14))]

    #[test]
    fn fundamental_units_have_norm_one_up_to_sign(m in prop::sample::select(vec![2i64, 3, 5, 6, 7, 10, 13, 15, 21, 34, 46, 94])) {
        let f = QuadField::new(m).unwrap();
        let eps = fundamental_unit(f).unwrap();
        prop_assert!(eps.is_integral());
        prop_assert_eq!(eps.norm().to_integer().abs(), BigInt::from(1));
        prop_assert!(eps.embed_f64(0).unwrap().abs() > 1.0);
    }
}
