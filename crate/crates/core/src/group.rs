//! Finite groups with indexed elements: abelian groups given by invariant
//! factors, and enumerated permutation groups.

use serde::{Deserialize, Serialize};

use crate::perm::{Perm, PermGroup};

/// `Z/d_1 × … × Z/d_r` with `d_1 | d_2 | … | d_r`, all `d_i > 1`.
///
/// Elements are indexed in mixed radix with the first coordinate least
/// significant.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AbelianGroup {
    invariants: Vec<u64>,
}

impl AbelianGroup {
    pub fn new(invariants: Vec<u64>) -> Self {
        let invariants: Vec<u64> = invariants.into_iter().filter(|&d| d != 1).collect();
        assert!(
            invariants.iter().all(|&d| d > 1),
            "invariant factors must be positive"
        );
        AbelianGroup { invariants }
    }

    pub fn trivial() -> Self {
        AbelianGroup { invariants: vec![] }
    }

    pub fn invariants(&self) -> &[u64] {
        &self.invariants
    }

    pub fn rank(&self) -> usize {
        self.invariants.len()
    }

    pub fn order(&self) -> u64 {
        self.invariants.iter().product()
    }

    pub fn exponent(&self) -> u64 {
        self.invariants.last().copied().unwrap_or(1)
    }

    pub fn to_vec(&self, mut idx: usize) -> Vec<i128> {
        self.invariants
            .iter()
            .map(|&d| {
                let c = (idx as u64 % d) as i128;
                idx /= d as usize;
                c
            })
            .collect()
    }

    pub fn from_vec(&self, v: &[i128]) -> usize {
        assert_eq!(v.len(), self.invariants.len());
        let mut idx = 0usize;
        for (c, &d) in v.iter().zip(&self.invariants).rev() {
            idx = idx * d as usize + c.rem_euclid(d as i128) as usize;
        }
        idx
    }

    pub fn reduce(&self, v: &[i128]) -> Vec<i128> {
        v.iter()
            .zip(&self.invariants)
            .map(|(c, &d)| c.rem_euclid(d as i128))
            .collect()
    }

    pub fn add(&self, a: usize, b: usize) -> usize {
        let (va, vb) = (self.to_vec(a), self.to_vec(b));
        let s: Vec<i128> = va.iter().zip(&vb).map(|(x, y)| x + y).collect();
        self.from_vec(&s)
    }

    pub fn neg(&self, a: usize) -> usize {
        let v: Vec<i128> = self.to_vec(a).iter().map(|x| -x).collect();
        self.from_vec(&v)
    }

    pub fn scale(&self, a: usize, k: i128) -> usize {
        let v: Vec<i128> = self.to_vec(a).iter().map(|x| x * k).collect();
        self.from_vec(&v)
    }

    pub fn element_order(&self, a: usize) -> u64 {
        self.to_vec(a)
            .iter()
            .zip(&self.invariants)
            .map(|(&c, &d)| d / crate::ntheory::gcd(c, d as i128) as u64)
            .fold(1, crate::ntheory::lcm)
    }

    /// q-part of the group order.
    pub fn sylow_order(&self, q: u64) -> u64 {
        let mut n = self.order();
        let mut part = 1;
        while n % q == 0 {
            n /= q;
            part *= q;
        }
        part
    }
}

/// A finite group whose elements are indexed `0..order`, identity at 0.
#[derive(Debug, Clone)]
pub enum FiniteGroup {
    Abelian(AbelianGroup),
    Perm(PermGroup),
}

impl FiniteGroup {
    pub fn order(&self) -> usize {
        match self {
            FiniteGroup::Abelian(g) => g.order() as usize,
            FiniteGroup::Perm(g) => g.order(),
        }
    }

    pub fn identity(&self) -> usize {
        0
    }

    pub fn mul(&self, a: usize, b: usize) -> usize {
        match self {
            FiniteGroup::Abelian(g) => g.add(a, b),
            FiniteGroup::Perm(g) => g
                .index_of(&g.element(a).compose(g.element(b)))
                .expect("group is closed under composition"),
        }
    }

    pub fn inv(&self, a: usize) -> usize {
        match self {
            FiniteGroup::Abelian(g) => g.neg(a),
            FiniteGroup::Perm(g) => g
                .index_of(&g.element(a).inverse())
                .expect("group is closed under inversion"),
        }
    }

    pub fn is_abelian(&self) -> bool {
        match self {
            FiniteGroup::Abelian(_) => true,
            FiniteGroup::Perm(g) => g.is_abelian(),
        }
    }

    pub fn conjugate(&self, x: usize, z: usize) -> usize {
        self.mul(self.mul(x, z), self.inv(x))
    }

    /// Sorted element indices of the subgroup generated by `gens`.
    pub fn subgroup(&self, gens: &[usize]) -> Vec<usize> {
        let mut seen = vec![false; self.order()];
        seen[0] = true;
        let mut out = vec![0usize];
        let mut k = 0;
        while k < out.len() {
            let x = out[k];
            for &g in gens {
                let y = self.mul(x, g);
                if !seen[y] {
                    seen[y] = true;
                    out.push(y);
                }
            }
            k += 1;
        }
        out.sort_unstable();
        out
    }

    pub fn element_order(&self, a: usize) -> usize {
        match self {
            FiniteGroup::Abelian(g) => g.element_order(a) as usize,
            FiniteGroup::Perm(g) => g.element(a).order(),
        }
    }

    pub fn as_abelian(&self) -> Option<&AbelianGroup> {
        match self {
            FiniteGroup::Abelian(g) => Some(g),
            FiniteGroup::Perm(_) => None,
        }
    }

    pub fn as_perm(&self) -> Option<&PermGroup> {
        match self {
            FiniteGroup::Perm(g) => Some(g),
            FiniteGroup::Abelian(_) => None,
        }
    }

    /// Serializable description of element `a`.
    pub fn describe(&self, a: usize) -> Vec<i64> {
        match self {
            FiniteGroup::Abelian(g) => g.to_vec(a).iter().map(|&x| x as i64).collect(),
            FiniteGroup::Perm(g) => g.element(a).0.iter().map(|&x| x as i64).collect(),
        }
    }

    pub fn parse(&self, desc: &[i64]) -> Option<usize> {
        match self {
            FiniteGroup::Abelian(g) => {
                if desc.len() != g.rank() {
                    return None;
                }
                let v: Vec<i128> = desc.iter().map(|&x| x as i128).collect();
                if v.iter()
                    .zip(g.invariants())
                    .any(|(&c, &d)| c < 0 || c >= d as i128)
                {
                    return None;
                }
                Some(g.from_vec(&v))
            }
            FiniteGroup::Perm(g) => {
                let p: Vec<u32> = desc.iter().map(|&x| x as u32).collect();
                if p.len() != g.degree() || !Perm::is_bijection(&p) {
                    return None;
                }
                g.index_of(&Perm(p))
            }
        }
    }
}
