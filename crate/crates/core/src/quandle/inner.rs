use std::collections::HashMap;

use crate::perm::{Perm, PermGroup, UnionFind};

use super::{FiniteQuandle, Repr};

/// `Inn(Q) = ⟨s_q⟩` together with the transvection subgroup `Tr(Q)`.
#[derive(Debug, Clone)]
pub struct InnerGroup {
    pub inn: PermGroup,
    pub tr: PermGroup,
    /// Distinct maps `s_q`, in order of first occurrence.
    pub s_maps: Vec<Perm>,
    /// `s_of[q]` indexes into `s_maps`.
    pub s_of: Vec<usize>,
}

impl InnerGroup {
    pub fn s(&self, q: usize) -> &Perm {
        &self.s_maps[self.s_of[q]]
    }
}

/// Distinct `s_q` and the index of each element's map.
pub(crate) fn distinct_s_maps(q: &FiniteQuandle) -> (Vec<Perm>, Vec<usize>) {
    let n = q.len();
    let mut maps: Vec<Perm> = Vec::new();
    let mut s_of = Vec::with_capacity(n);
    match (q.repr(), q.relabeling()) {
        // in coset form s_q depends only on the translating element
        (Repr::Coset(c), None) => {
            let mut by_elem: HashMap<usize, usize> = HashMap::new();
            for e in 0..n {
                let t = c.translation_of(e);
                let k = *by_elem.entry(t).or_insert_with(|| {
                    maps.push(q.s_perm(e));
                    maps.len() - 1
                });
                s_of.push(k);
            }
        }
        _ => {
            let mut index: HashMap<Perm, usize> = HashMap::new();
            for e in 0..n {
                let p = q.s_perm(e);
                let k = match index.get(&p) {
                    Some(&k) => k,
                    None => {
                        index.insert(p.clone(), maps.len());
                        maps.push(p);
                        maps.len() - 1
                    }
                };
                s_of.push(k);
            }
        }
    }
    (maps, s_of)
}

pub fn inner_group(q: &FiniteQuandle) -> InnerGroup {
    let n = q.len();
    let (s_maps, s_of) = distinct_s_maps(q);
    let inn = PermGroup::generate(n, &s_maps);
    let tr_gens: Vec<Perm> = match s_maps.first() {
        Some(s0) => {
            let s0_inv = s0.inverse();
            s_maps.iter().map(|s| s0_inv.then(s)).collect()
        }
        None => Vec::new(),
    };
    let tr = PermGroup::generate(n, &tr_gens);
    InnerGroup {
        inn,
        tr,
        s_maps,
        s_of,
    }
}

/// Orbits of `Inn(Q)`, each sorted, ordered by smallest element.
pub fn orbits(q: &FiniteQuandle) -> Vec<Vec<usize>> {
    let (maps, _) = distinct_s_maps(q);
    let mut uf = UnionFind::new(q.len());
    for s in &maps {
        for i in 0..q.len() {
            uf.union(i, s.apply(i));
        }
    }
    uf.classes()
}

/// `Q` modulo the orbits of `[Inn(Q), Inn(Q)]`.
#[derive(Debug, Clone)]
pub struct CommutatorQuotient {
    pub quandle: FiniteQuandle,
    /// Class of each element of the original quandle.
    pub class_of: Vec<usize>,
    pub classes: Vec<Vec<usize>>,
}

pub fn quotient_by_commutator(q: &FiniteQuandle) -> CommutatorQuotient {
    let inner = inner_group(q);
    let derived = inner.inn.derived_subgroup();
    let classes = derived.orbits();
    let mut class_of = vec![0usize; q.len()];
    for (k, c) in classes.iter().enumerate() {
        for &e in c {
            class_of[e] = k;
        }
    }
    let m = classes.len();
    let mut table = Vec::with_capacity(m * m);
    for a in &classes {
        for b in &classes {
            table.push(class_of[q.op(a[0], b[0])] as u32);
        }
    }
    CommutatorQuotient {
        quandle: FiniteQuandle::from_table(m, table),
        class_of,
        classes,
    }
}
