//! Finite abelian groups given by explicit elements, put into Smith normal form.

use std::collections::{HashMap, VecDeque};
use std::hash::Hash;

use crate::error::{Error, Result};
use crate::group::AbelianGroup;
use crate::snf::{mat_vec, smith_form, RelationLattice};

/// Default ceiling on the order of explicitly enumerated groups.
pub const DEFAULT_ORDER_CEILING: u64 = 200_000;

/// A finite abelian group `∏ Z/d_i` (`d_1 | d_2 | …`) with witnesses for the
/// generators and table-driven discrete logarithms.
#[derive(Debug, Clone)]
pub struct AbelianGroupPresentation<E: Clone + Eq + Hash> {
    group: AbelianGroup,
    generators: Vec<E>,
    /// Element at each mixed-radix index of `group`.
    elements: Vec<E>,
    index: HashMap<E, usize>,
}

impl<E: Clone + Eq + Hash> AbelianGroupPresentation<E> {
    /// Discovers the structure of the group generated by `candidates`.
    ///
    /// Generators are picked greedily from `candidates` (in order) whenever a
    /// candidate lies outside the span of those already picked; relations come
    /// from a breadth-first traversal.
    pub fn discover<F>(
        identity: E,
        candidates: impl IntoIterator<Item = E>,
        mul: F,
        ceiling: u64,
    ) -> Result<Self>
    where
        F: Fn(&E, &E) -> E,
    {
        let mut gens: Vec<E> = Vec::new();
        let mut span = Span::new(identity.clone());
        for c in candidates {
            if span.coords.contains_key(&c) {
                continue;
            }
            gens.push(c);
            span = Span::build(identity.clone(), &gens, &mul, ceiling)?;
        }
        let k = gens.len();
        let snf = smith_form(&span.relations.basis(), k);
        // keep the non-trivial cyclic factors
        let keep: Vec<usize> = (0..k).filter(|&i| snf.diagonal[i] != 1).collect();
        let invariants: Vec<u64> = keep.iter().map(|&i| snf.diagonal[i] as u64).collect();
        let group = AbelianGroup::new(invariants.clone());
        let power = |g: &E, e: i128, modulus: i128| -> E {
            let mut acc = identity.clone();
            for _ in 0..e.rem_euclid(modulus) {
                acc = mul(&acc, g);
            }
            acc
        };
        let generators: Vec<E> = keep
            .iter()
            .map(|&i| {
                let mut acc = identity.clone();
                for (j, g) in gens.iter().enumerate() {
                    acc = mul(&acc, &power(g, snf.v_inv[i][j], span.orders[j]));
                }
                acc
            })
            .collect();
        let mut elements = vec![identity.clone(); group.order() as usize];
        let mut index = HashMap::with_capacity(elements.len());
        for (e, x) in span.coords {
            let y = mat_vec(&x, &snf.v);
            let y: Vec<i128> = keep.iter().map(|&i| y[i]).collect();
            let idx = group.from_vec(&y);
            elements[idx] = e.clone();
            index.insert(e, idx);
        }
        if index.len() != elements.len() {
            return Err(Error::GroupMismatch(
                "structure discovery produced an inconsistent table".into(),
            ));
        }
        Ok(AbelianGroupPresentation {
            group,
            generators,
            elements,
            index,
        })
    }

    pub fn group(&self) -> &AbelianGroup {
        &self.group
    }

    pub fn invariants(&self) -> &[u64] {
        self.group.invariants()
    }

    pub fn order(&self) -> u64 {
        self.group.order()
    }

    pub fn generators(&self) -> &[E] {
        &self.generators
    }

    /// Describes how discrete logs are computed.
    pub fn dlog_method(&self) -> &'static str {
        "lookup-table"
    }

    /// Index of `e` in [`group`](Self::group), if `e` belongs to the group.
    pub fn index_of(&self, e: &E) -> Option<usize> {
        self.index.get(e).copied()
    }

    /// Coordinates of `e` on the SNF generators.
    pub fn dlog(&self, e: &E) -> Option<Vec<i128>> {
        self.index_of(e).map(|i| self.group.to_vec(i))
    }

    pub fn element(&self, idx: usize) -> &E {
        &self.elements[idx]
    }

    pub fn elements(&self) -> &[E] {
        &self.elements
    }
}

/// The subgroup spanned by some generators, with exponent vectors.
struct Span<E> {
    coords: HashMap<E, Vec<i128>>,
    relations: RelationLattice,
    orders: Vec<i128>,
}

impl<E: Clone + Eq + Hash> Span<E> {
    fn new(identity: E) -> Self {
        let mut coords = HashMap::new();
        coords.insert(identity, Vec::new());
        Span {
            coords,
            relations: RelationLattice::new(0),
            orders: Vec::new(),
        }
    }

    fn build<F: Fn(&E, &E) -> E>(identity: E, gens: &[E], mul: &F, ceiling: u64) -> Result<Self> {
        let k = gens.len();
        let mut coords: HashMap<E, Vec<i128>> = HashMap::new();
        let mut relations = RelationLattice::new(k);
        coords.insert(identity.clone(), vec![0; k]);
        let mut queue = VecDeque::from([identity]);
        while let Some(e) = queue.pop_front() {
            let x = coords[&e].clone();
            for (i, g) in gens.iter().enumerate() {
                let f = mul(&e, g);
                let mut y = x.clone();
                y[i] += 1;
                match coords.get(&f) {
                    Some(z) => {
                        let rel: Vec<i128> = y.iter().zip(z).map(|(a, b)| a - b).collect();
                        if rel.iter().any(|&r| r != 0) {
                            relations.insert(&rel);
                        }
                    }
                    None => {
                        if coords.len() as u64 >= ceiling {
                            return Err(Error::GroupTooLarge {
                                order: coords.len() as u64 + 1,
                                ceiling,
                            });
                        }
                        coords.insert(f.clone(), y);
                        queue.push_back(f);
                    }
                }
            }
        }
        // order of each generator, used to reduce exponents when forming witnesses
        let orders = gens
            .iter()
            .map(|g| {
                let mut e = g.clone();
                let mut n = 1i128;
                while coords[&e].iter().any(|&c| c != 0) {
                    e = mul(&e, g);
                    n += 1;
                }
                n
            })
            .collect();
        Ok(Span {
            coords,
            relations,
            orders,
        })
    }
}
