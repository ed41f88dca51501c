use std::sync::OnceLock;

use arith_quandle::arith::{build_slot_machine, prime_set, tower, PrimeSetOptions, QuandleTower};
use arith_quandle::group::FiniteGroup;
use arith_quandle::quadfield::{split_prime, QuadField};
use proptest::prelude::*;

/// `(m, p, bound)` with `m = 1` for `Q`.
const CASES: [(i64, u64, u64); 5] = [(1, 5, 40), (1, 3, 30), (5, 3, 30), (-1, 5, 30), (-5, 7, 20)];

fn towers() -> &'static [QuandleTower] {
    static TOWERS: OnceLock<Vec<QuandleTower>> = OnceLock::new();
    TOWERS.get_or_init(|| {
        CASES
            .iter()
            .map(|&(m, p, bound)| {
                let k = if m == 1 {
                    QuadField::rational()
                } else {
                    QuadField::new(m).unwrap()
                };
                let pi = split_prime(k, p).unwrap().primes[0].ideal;
                let primes = prime_set(k, &pi, bound, &PrimeSetOptions::default()).unwrap();
                tower(&pi, &primes, 3).unwrap()
            })
            .collect()
    })
}

/// Order by repeated multiplication.
fn order(g: &FiniteGroup, z: usize) -> usize {
    let mut x = z;
    let mut k = 1;
    while x != g.identity() {
        x = g.mul(x, z);
        k += 1;
    }
    k
}

fn pick(len: usize, r: u64) -> usize {
    (r % len as u64) as usize
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(96))]

    #[test]
    fn augmentation_law(case in 0..CASES.len(), n in 1u32..=3, rx: u64, ry: u64) {
        let lvl = towers()[case].level(n);
        let q = lvl.quandle();
        let data = q.coset_data().unwrap();
        let g = lvl.group();
        let (x, y) = (pick(q.len(), rx), pick(q.len(), ry));
        let z = q.op(x, y);
        prop_assert_eq!(lvl.augmentation(x), lvl.frobenius()[lvl.fiber_of(x)]);
        // ε(x ▷ y) = ε(x) ε(y) ε(x)⁻¹ = ε(y) in an abelian group
        prop_assert_eq!(lvl.augmentation(z), g.mul(g.mul(lvl.augmentation(x), lvl.augmentation(y)), g.inv(lvl.augmentation(x))));
        // x ▷ y = ε(x)·y inside the fiber of y
        prop_assert_eq!(lvl.fiber_of(z), lvl.fiber_of(y));
        prop_assert_eq!(z, data.element(lvl.fiber_of(y), g.mul(lvl.augmentation(x), data.rep(y))));
    }

    #[test]
    fn fiber_size_law(case in 0..CASES.len(), n in 1u32..=3) {
        let lvl = towers()[case].level(n);
        let g = lvl.group();
        for (lam, &z) in lvl.frobenius().iter().enumerate() {
            prop_assert_eq!(lvl.fiber_size(lam) * order(g, z), g.order());
        }
        prop_assert_eq!(lvl.quandle().len(), (0..lvl.primes().len()).map(|l| lvl.fiber_size(l)).sum::<usize>());
    }

    #[test]
    fn projections_carry_s_maps(case in 0..CASES.len(), n in 2u32..=3, rx: u64, ry: u64) {
        let t = &towers()[case];
        let (top, low) = (t.level(n), t.level(n - 1));
        let pr = &t.projections()[n as usize - 2];
        prop_assert_eq!((pr.from, pr.to), (n, n - 1));
        let q = top.quandle();
        let (x, y) = (pick(q.len(), rx), pick(q.len(), ry));
        // π ∘ s_x = s_{π(x)} ∘ π
        prop_assert_eq!(t.project(n, n - 1, q.op(x, y)), low.quandle().op(t.project(n, n - 1, x), t.project(n, n - 1, y)));
        // ε ∘ π = ρ ∘ ε and Frobenius classes map to Frobenius classes
        prop_assert_eq!(low.augmentation(t.project(n, n - 1, x)), pr.group_map[top.augmentation(x)]);
        for (a, b) in top.frobenius().iter().zip(low.frobenius()) {
            prop_assert_eq!(pr.group_map[*a], *b);
        }
        prop_assert_eq!(low.fiber_of(t.project(n, n - 1, x)), top.fiber_of(x));
    }

    #[test]
    fn slot_machine_formula(
        p in prop::sample::select(vec![3u64, 5, 7]),
        n in 1u32..=3,
        picks in prop::sample::subsequence(vec![2u64, 3, 5, 7, 11, 13], 1..=3),
        rx: u64,
        ry: u64,
    ) {
        let ls: Vec<u64> = picks.into_iter().filter(|&l| l != p).collect();
        prop_assume!(!ls.is_empty());
        let s = build_slot_machine(p, &ls, n).unwrap();
        let q = s.quandle();
        let m = s.modulus();
        let (x, y) = (pick(q.len(), rx), pick(q.len(), ry));
        let z = q.op(x, y);
        // residues of x ▷ y and π(x)·y agree modulo ⟨l_y⟩
        let ly = s.pi(y);
        let target = s.pi(x) * s.residue(y) % m;
        let mut u = s.residue(z);
        let mut hit = false;
        for _ in 0..m {
            hit |= u == target;
            u = u * ly % m;
        }
        prop_assert!(hit);
        prop_assert_eq!(s.pi(z), ly);
    }
}
