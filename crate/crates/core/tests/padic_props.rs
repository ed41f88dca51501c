use arith_quandle::padic::{
    padic_exp, padic_log, padic_log_exact, qp_rank, rational_ratio, working_precision, Ext,
    LocalElement, LocalField,
};
use num_bigint::BigInt;
use proptest::prelude::*;

const N: i64 = 16;

fn fields() -> Vec<LocalField> {
    vec![
        LocalField::rational(5).unwrap(),
        LocalField::rational(3).unwrap(),
        LocalField::new(5, Ext::Ur(2)).unwrap(),
        LocalField::new(3, Ext::Ur(5)).unwrap(),
        LocalField::new(3, Ext::Ram(3)).unwrap(),
        LocalField::new(7, Ext::Ram(-7)).unwrap(),
    ]
}

fn element(field: LocalField, a: u64, b: u64, prec: i64) -> LocalElement {
    let b = if field.is_trivial() { 0 } else { b };
    LocalElement::new(field, BigInt::from(a), BigInt::from(b), prec)
}

/// A unit at working precision: the rational part is prime to `p`.
fn unit(field: LocalField, a: u64, b: u64) -> LocalElement {
    let p = field.p();
    let a = if a % p == 0 { a + 1 } else { a };
    element(field, a, b, working_precision(field, N))
}

fn field_and_pairs(k: usize) -> impl Strategy<Value = (LocalField, Vec<(u64, u64)>)> {
    (
        0..fields().len(),
        prop::collection::vec((1u64..1 << 40, 0u64..1 << 40), k),
    )
        .prop_map(|(i, v)| (fields()[i], v))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn log_is_a_homomorphism((f, v) in field_and_pairs(2)) {
        let (u, w) = (unit(f, v[0].0, v[0].1), unit(f, v[1].0, v[1].1));
        let lhs = padic_log(&u.mul(&w).unwrap(), N).unwrap();
        let rhs = padic_log(&u, N).unwrap().add(&padic_log(&w, N).unwrap()).unwrap();
        prop_assert!(lhs.precision() >= N && rhs.precision() >= N);
        prop_assert!(lhs.congruent(&rhs, N), "{lhs} vs {rhs}");
    }

    #[test]
    fn exp_inverts_log_on_deep_principal_units((f, v) in field_and_pairs(1)) {
        // 1 + p·t has valuation above e/(p−1) for p odd
        let t = element(f, v[0].0, v[0].1, working_precision(f, N));
        let p = BigInt::from(f.p());
        let u = LocalElement::one(f, t.precision()).add(&t.mul_int(&p)).unwrap();
        let x = padic_log(&u, N).unwrap();
        let back = padic_exp(&x, N).unwrap();
        prop_assert!(back.congruent(&u.truncate(N), N), "{back} vs {u}");
    }

    #[test]
    fn log_commutes_with_conjugation((f, v) in field_and_pairs(1)) {
        let u = unit(f, v[0].0, v[0].1);
        let a = padic_log(&u.conj(), N).unwrap();
        let b = padic_log(&u, N).unwrap().conj();
        prop_assert!(a.congruent(&b, N));
    }

    #[test]
    fn exact_log_matches_truncated_log((f, v) in field_and_pairs(1)) {
        let u = unit(f, v[0].0, v[0].1);
        let exact = padic_log_exact(f, u.a(), u.b(), N).unwrap();
        prop_assert!(exact.congruent(&padic_log(&u, N).unwrap(), N));
    }

    #[test]
    fn found_ratios_hold_at_full_precision(
        (f, v) in field_and_pairs(1),
        a in 1i64..=30,
        b in 1i64..=30,
        noise in 0u64..1 << 30,
    ) {
        let x = padic_log(&unit(f, v[0].0, v[0].1), 30).unwrap();
        let y = x.mul_int(&BigInt::from(a));
        let x = x.mul_int(&BigInt::from(b));
        if x.is_zero() || y.is_zero() {
            return Ok(());
        }
        let r = rational_ratio(&x, &y, 100, 2).unwrap().expect("a planted relation is found");
        prop_assert_eq!(r.a * b, r.b * a);
        // any relation reported, planted or not, is re-verified at M
        let z = x.add(&element(f, noise, noise / 3, x.precision())).unwrap();
        if let Ok(Some(r)) = rational_ratio(&z, &y, 100, 2) {
            let m = z.precision().min(y.precision());
            let d = z.mul_int(&BigInt::from(r.a)).sub(&y.mul_int(&BigInt::from(r.b))).unwrap();
            prop_assert!(d.valuation_bound() >= m);
        }
    }

    #[test]
    fn rank_is_invariant_under_row_operations(
        (f, v) in field_and_pairs(12),
        scales in prop::collection::vec((1u64..1 << 20, 0u64..1 << 20), 3),
        dependent in any::<bool>(),
        perm in Just(vec![0usize, 1, 2]).prop_shuffle(),
    ) {
        let prec = 20;
        let mut rows: Vec<Vec<LocalElement>> =
            v.chunks(4).map(|r| r.iter().map(|&(a, b)| element(f, a, b, prec)).collect()).collect();
        if dependent {
            let third: Vec<_> = (0..4).map(|j| rows[0][j].add(&rows[1][j]).unwrap()).collect();
            rows[2] = third;
        }
        let r0 = qp_rank(&rows, prec).unwrap();
        let moved: Vec<Vec<LocalElement>> = perm
            .iter()
            .zip(&scales)
            .map(|(&i, &(a, b))| {
                let s = unit(f, a, b).truncate(prec);
                rows[i].iter().map(|x| x.mul(&s).unwrap()).collect()
            })
            .collect();
        prop_assert_eq!(qp_rank(&moved, prec).unwrap(), r0);
        if dependent {
            prop_assert!(r0 <= 2);
        }
    }
}
