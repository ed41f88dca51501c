//! Finite quandles as operation tables or in coset form.

mod augmented;
mod aut;
mod coset;
mod inner;
mod json;

pub use augmented::{from_augmented, AugmentedQuandle, QuandleMorphism, Representation};
pub use aut::{automorphism_group, AutSearch};
pub use coset::{coset_quandle, fiber_translation_action, CosetData, Fiber};
pub use inner::{inner_group, orbits, quotient_by_commutator, CommutatorQuotient, InnerGroup};
pub use json::QuandleJson;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::group::FiniteGroup;
use crate::perm::Perm;

/// Sizes up to this are checked on every triple by [`verify_axioms`].
pub const EXHAUSTIVE_AXIOM_BOUND: usize = 200;
/// Minimum number of random triples checked above the exhaustive bound.
pub const RANDOM_TRIPLES: usize = 10_000;

#[derive(Debug, Clone)]
pub enum Repr {
    /// Row-major `n × n` table, `table[q*n + r] = q ▷ r`.
    Table(Vec<u32>),
    Coset(CosetData),
}

/// A finite quandle on `0..n`.
///
/// An optional relabeling presents the underlying quandle under a permuted
/// numbering without materializing a new table: external element `i` is
/// internal element `relabel[i]`.
#[derive(Debug, Clone)]
pub struct FiniteQuandle {
    n: usize,
    repr: Repr,
    relabel: Option<(Vec<u32>, Vec<u32>)>,
    labels: Option<Vec<String>>,
}

impl FiniteQuandle {
    /// Builds a table quandle without checking the axioms.
    pub fn from_table(n: usize, table: Vec<u32>) -> Self {
        assert_eq!(table.len(), n * n, "table must be n × n");
        FiniteQuandle {
            n,
            repr: Repr::Table(table),
            relabel: None,
            labels: None,
        }
    }

    pub fn trivial(n: usize) -> Self {
        let table = (0..n).flat_map(|_| 0..n as u32).collect();
        Self::from_table(n, table)
    }

    pub(crate) fn from_coset(data: CosetData) -> Self {
        FiniteQuandle {
            n: data.len(),
            repr: Repr::Coset(data),
            relabel: None,
            labels: None,
        }
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    pub fn repr(&self) -> &Repr {
        &self.repr
    }

    pub fn coset_data(&self) -> Option<&CosetData> {
        match &self.repr {
            Repr::Coset(c) if self.relabel.is_none() => Some(c),
            _ => None,
        }
    }

    pub fn labels(&self) -> Option<&[String]> {
        self.labels.as_deref()
    }

    pub fn with_labels(mut self, labels: Vec<String>) -> Self {
        assert_eq!(labels.len(), self.n);
        self.labels = Some(labels);
        self
    }

    pub fn without_labels(mut self) -> Self {
        self.labels = None;
        self
    }

    /// `q ▷ r`.
    pub fn op(&self, q: usize, r: usize) -> usize {
        match &self.relabel {
            None => self.raw_op(q, r),
            Some((to_inner, from_inner)) => {
                let x = self.raw_op(to_inner[q] as usize, to_inner[r] as usize);
                from_inner[x] as usize
            }
        }
    }

    fn raw_op(&self, q: usize, r: usize) -> usize {
        match &self.repr {
            Repr::Table(t) => t[q * self.n + r] as usize,
            Repr::Coset(c) => c.op(q, r),
        }
    }

    /// The map `s_q : r ↦ q ▷ r` as an image array (may fail to be a bijection
    /// for malformed tables).
    pub fn s_images(&self, q: usize) -> Vec<u32> {
        (0..self.n).map(|r| self.op(q, r) as u32).collect()
    }

    /// `s_q` as a permutation. Panics if the row is not a bijection.
    pub fn s_perm(&self, q: usize) -> Perm {
        let img = self.s_images(q);
        assert!(Perm::is_bijection(&img), "s_{q} is not a bijection");
        Perm(img)
    }

    /// Presents the same quandle with element `i` renamed to `perm(i)`.
    pub fn relabeled(&self, perm: &Perm) -> FiniteQuandle {
        assert_eq!(perm.degree(), self.n);
        // external new index j corresponds to old external index perm^{-1}(j)
        let old_of_new = perm.inverse();
        let (to_inner, from_inner) = match &self.relabel {
            None => {
                let to: Vec<u32> = old_of_new.0.clone();
                (to, perm.0.clone())
            }
            Some((to, from)) => {
                let to_new: Vec<u32> = old_of_new.0.iter().map(|&o| to[o as usize]).collect();
                let from_new: Vec<u32> = from.iter().map(|&o| perm.0[o as usize]).collect();
                (to_new, from_new)
            }
        };
        let labels = self.labels.as_ref().map(|l| {
            old_of_new
                .0
                .iter()
                .map(|&o| l[o as usize].clone())
                .collect()
        });
        FiniteQuandle {
            n: self.n,
            repr: self.repr.clone(),
            relabel: Some((to_inner, from_inner)),
            labels,
        }
    }

    /// Materializes the operation table.
    pub fn to_table(&self) -> Vec<u32> {
        let mut t = Vec::with_capacity(self.n * self.n);
        for q in 0..self.n {
            for r in 0..self.n {
                t.push(self.op(q, r) as u32);
            }
        }
        t
    }

    pub fn relabeling(&self) -> Option<&[u32]> {
        self.relabel.as_ref().map(|(to, _)| to.as_slice())
    }
}

/// A violated axiom together with the elements exhibiting it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Counterexample {
    pub axiom: u8,
    pub witness: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AxiomReport {
    pub pass: bool,
    pub exhaustive: bool,
    pub triples_checked: u64,
    pub counterexample: Option<Counterexample>,
}

impl AxiomReport {
    pub fn into_result(self) -> Result<()> {
        match self.counterexample {
            None => Ok(()),
            Some(c) => Err(Error::AxiomViolation {
                axiom: c.axiom,
                witness: format!("{:?}", c.witness),
            }),
        }
    }
}

#[derive(Debug, Clone, Copy)]
pub struct Sampling {
    pub exhaustive_bound: usize,
    pub random_triples: usize,
    pub seed: u64,
}

impl Default for Sampling {
    fn default() -> Self {
        Sampling {
            exhaustive_bound: EXHAUSTIVE_AXIOM_BOUND,
            random_triples: RANDOM_TRIPLES,
            seed: 0,
        }
    }
}

/// Checks idempotency, invertibility of every `s_q`, and self-distributivity.
pub fn verify_axioms(q: &FiniteQuandle, sampling: Sampling) -> AxiomReport {
    let n = q.len();
    let fail = |axiom, witness, checked| AxiomReport {
        pass: false,
        exhaustive: n <= sampling.exhaustive_bound,
        triples_checked: checked,
        counterexample: Some(Counterexample { axiom, witness }),
    };
    let rows = sampled_rows(n, &sampling);
    // axiom 2 first: an out-of-range entry would break the other checks
    for &a in &rows {
        let mut seen = vec![usize::MAX; n];
        for r in 0..n {
            let x = q.op(a, r);
            if x >= n {
                return fail(2, vec![a, r], 0);
            }
            if seen[x] != usize::MAX {
                return fail(2, vec![a, seen[x], r], 0);
            }
            seen[x] = r;
        }
    }
    for a in 0..n {
        if q.op(a, a) != a {
            return fail(1, vec![a], 0);
        }
    }
    let distributes =
        |a: usize, b: usize, c: usize| q.op(a, q.op(b, c)) == q.op(q.op(a, b), q.op(a, c));
    let mut checked = 0u64;
    if n <= sampling.exhaustive_bound {
        for a in 0..n {
            for b in 0..n {
                for c in 0..n {
                    checked += 1;
                    if !distributes(a, b, c) {
                        return fail(3, vec![a, b, c], checked);
                    }
                }
            }
        }
        AxiomReport {
            pass: true,
            exhaustive: true,
            triples_checked: checked,
            counterexample: None,
        }
    } else {
        let mut rng = ChaCha8Rng::seed_from_u64(sampling.seed);
        for _ in 0..sampling.random_triples {
            let (a, b, c) = (
                rng.gen_range(0..n),
                rng.gen_range(0..n),
                rng.gen_range(0..n),
            );
            checked += 1;
            if !distributes(a, b, c) {
                return fail(3, vec![a, b, c], checked);
            }
        }
        AxiomReport {
            pass: true,
            exhaustive: false,
            triples_checked: checked,
            counterexample: None,
        }
    }
}

fn sampled_rows(n: usize, sampling: &Sampling) -> Vec<usize> {
    // bijectivity of every row costs n^2; only very large quandles are sampled
    if n <= 4000 {
        return (0..n).collect();
    }
    let mut rng = ChaCha8Rng::seed_from_u64(sampling.seed ^ 0x5eed);
    (0..256).map(|_| rng.gen_range(0..n)).collect()
}

/// The conjugation quandle of `G`, `g ▷ h = g⁻¹ h g`, or `g h g⁻¹` when
/// `mirrored` is set.
pub fn conjugation_quandle(g: &FiniteGroup, mirrored: bool) -> FiniteQuandle {
    let n = g.order();
    let mut table = Vec::with_capacity(n * n);
    for a in 0..n {
        let ai = g.inv(a);
        for h in 0..n {
            let x = if mirrored {
                g.mul(g.mul(a, h), ai)
            } else {
                g.mul(g.mul(ai, h), a)
            };
            table.push(x as u32);
        }
    }
    FiniteQuandle::from_table(n, table)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::AbelianGroup;
    use crate::perm::PermGroup;

    #[test]
    fn one_element_quandle_passes() {
        assert!(verify_axioms(&FiniteQuandle::trivial(1), Sampling::default()).pass);
    }

    #[test]
    fn conjugation_s3_passes() {
        let s3 = FiniteGroup::Perm(PermGroup::symmetric(3));
        for mirrored in [false, true] {
            let q = conjugation_quandle(&s3, mirrored);
            let rep = verify_axioms(&q, Sampling::default());
            assert!(rep.pass && rep.exhaustive);
            assert_eq!(rep.triples_checked, 216);
        }
    }

    #[test]
    fn abelian_conjugation_is_trivial() {
        let g = FiniteGroup::Abelian(AbelianGroup::new(vec![2, 6]));
        let q = conjugation_quandle(&g, false);
        assert_eq!(q.to_table(), FiniteQuandle::trivial(12).to_table());
    }

    #[test]
    fn non_injective_row_is_axiom_2() {
        let mut t = FiniteQuandle::trivial(3).to_table();
        t[0 * 3 + 1] = 2; // s_0 sends 1 and 2 to 2
        let q = FiniteQuandle::from_table(3, t);
        let rep = verify_axioms(&q, Sampling::default());
        assert!(!rep.pass);
        assert_eq!(
            rep.counterexample,
            Some(Counterexample {
                axiom: 2,
                witness: vec![0, 1, 2]
            })
        );
    }

    #[test]
    fn relabeling_is_an_isomorphism() {
        let s3 = FiniteGroup::Perm(PermGroup::symmetric(3));
        let q = conjugation_quandle(&s3, false);
        let p = Perm(vec![3, 5, 0, 1, 4, 2]);
        let r = q.relabeled(&p);
        for a in 0..6 {
            for b in 0..6 {
                assert_eq!(r.op(p.apply(a), p.apply(b)), p.apply(q.op(a, b)));
            }
        }
        let p2 = Perm(vec![1, 0, 2, 3, 5, 4]);
        let rr = r.relabeled(&p2);
        let both = p.then(&p2);
        for a in 0..6 {
            for b in 0..6 {
                assert_eq!(rr.op(both.apply(a), both.apply(b)), both.apply(q.op(a, b)));
            }
        }
    }
}
