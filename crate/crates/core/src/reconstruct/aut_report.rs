use std::collections::BTreeSet;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::perm::{Perm, PermGroup};
use crate::quandle::{
    automorphism_group, fiber_translation_action, AutSearch, CosetData, FiniteQuandle,
};

/// Structure of `Aut(Q)` for an abelian coset quandle against the exact
/// sequence `1 → ∏ G/⟨s_a⟩ → Aut(Q) → S_𝓜`.
#[derive(Debug, Clone, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct AutStructureReport {
    pub size: usize,
    pub fiber_sizes: Vec<usize>,
    /// Every fiber translation by a group element is an automorphism.
    pub translations_ok: bool,
    /// `H_λ = ⟨z_λ⟩` for every fiber, so the fiber is `G/⟨s_a⟩`.
    pub fibers_are_quotients_by_s: bool,
    /// `∏ |G/⟨s_a⟩|`.
    pub predicted_kernel: u64,
    /// Fiber transpositions `a ↔ b` with `s_a = s_b` in `Inn(Q)`.
    pub exchanges: Vec<(usize, usize)>,
    pub exchanges_ok: bool,
    /// Order of the group generated by translations and exchanges.
    pub predicted_order: u64,
    /// `None` when the size exceeds the exhaustive bound.
    pub exhaustive: Option<ExhaustiveAut>,
}

#[derive(Debug, Clone, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct ExhaustiveAut {
    pub order: u64,
    /// Automorphisms fixing every fiber setwise.
    pub kernel_order: u64,
    /// Fiber permutations realized by automorphisms.
    pub image_order: u64,
    /// Every realized fiber permutation preserves `s_a`.
    pub image_preserves_s: bool,
    /// `Aut(Q)` equals the group generated by translations and exchanges.
    pub equals_predicted: bool,
}

impl AutStructureReport {
    pub fn holds(&self) -> bool {
        self.translations_ok
            && self.exchanges_ok
            && self.exhaustive.as_ref().is_none_or(|e| {
                e.equals_predicted && e.kernel_order == self.predicted_kernel && e.image_preserves_s
            })
    }
}

pub fn is_automorphism(q: &FiniteQuandle, p: &Perm) -> bool {
    let n = q.len();
    p.degree() == n
        && Perm::is_bijection(&p.0)
        && (0..n).all(|x| (0..n).all(|y| p.apply(q.op(x, y)) == q.op(p.apply(x), p.apply(y))))
}

fn coset(q: &FiniteQuandle) -> Result<&CosetData> {
    let data = q
        .coset_data()
        .ok_or_else(|| Error::Format("the structure report needs a coset-form quandle".into()))?;
    if !data.group().is_abelian() {
        return Err(Error::NonAbelian);
    }
    Ok(data)
}

/// `s` of fiber `l`, as a permutation of `Q`.
fn s_of_fiber(q: &FiniteQuandle, data: &CosetData, l: usize) -> Perm {
    q.s_perm(data.fiber_range(l).start)
}

/// Swap of fibers `a` and `b` by `gH_a ↔ gH_b`; requires `s_a = s_b` in
/// `Inn(Q)` (weaker than `z_a = z_b` once `G → Inn(Q)` has a kernel) and
/// `H_a = H_b`.
fn swap(q: &FiniteQuandle, data: &CosetData, a: usize, b: usize) -> Option<Perm> {
    let (fa, fb) = (&data.fibers()[a], &data.fibers()[b]);
    if fa.h != fb.h || s_of_fiber(q, data, a) != s_of_fiber(q, data, b) {
        return None;
    }
    let mut img: Vec<u32> = (0..data.len() as u32).collect();
    for x in data.fiber_range(a) {
        let y = data.element(b, data.rep(x));
        img[x] = y as u32;
        img[y] = x as u32;
    }
    Some(Perm(img))
}

/// Fiber permutation induced by an automorphism mapping fibers to fibers.
fn induced(data: &CosetData, p: &Perm) -> Option<Vec<usize>> {
    let k = data.fibers().len();
    let mut tau = Vec::with_capacity(k);
    for l in 0..k {
        let targets: BTreeSet<usize> = data
            .fiber_range(l)
            .map(|x| data.fiber_of(p.apply(x)))
            .collect();
        if targets.len() != 1 {
            return None;
        }
        tau.push(*targets.first().expect("nonempty fiber"));
    }
    Some(tau)
}

pub fn aut_structure_report(q: &FiniteQuandle, search: AutSearch) -> Result<AutStructureReport> {
    let data = coset(q)?;
    let g = data.group();
    let k = data.fibers().len();
    let fiber_sizes: Vec<usize> = data.fibers().iter().map(|f| f.size()).collect();
    let fibers_are_quotients_by_s = data.fibers().iter().all(|f| {
        let mut s = g.subgroup(&[f.z]);
        s.sort_unstable();
        s == f.h
    });
    let mut generators = Vec::new();
    let mut translations_ok = true;
    for l in 0..k {
        for x in 0..g.order() {
            let mut u = vec![g.identity(); k];
            u[l] = x;
            let t = fiber_translation_action(q, &u)?;
            translations_ok &= is_automorphism(q, &t);
            generators.push(t);
        }
    }
    let mut exchanges = Vec::new();
    let mut exchanges_ok = true;
    for a in 0..k {
        for b in a + 1..k {
            if let Some(s) = swap(q, data, a, b) {
                exchanges_ok &= is_automorphism(q, &s);
                exchanges.push((a, b));
                generators.push(s);
            }
        }
    }
    let predicted = PermGroup::generate(q.len(), &generators);
    let predicted_kernel = fiber_sizes.iter().map(|&s| s as u64).product();
    let s_maps: Vec<Perm> = (0..k).map(|l| s_of_fiber(q, data, l)).collect();
    let exhaustive = if q.len() <= search.exhaustive_bound {
        let aut = automorphism_group(q, search)?;
        let mut kernel = 0u64;
        let mut image = BTreeSet::new();
        let mut image_preserves_s = true;
        for p in aut.elements() {
            match induced(data, p) {
                Some(tau) => {
                    if tau.iter().enumerate().all(|(l, &m)| l == m) {
                        kernel += 1;
                    }
                    image_preserves_s &=
                        tau.iter().enumerate().all(|(l, &m)| s_maps[l] == s_maps[m]);
                    image.insert(tau);
                }
                None => image_preserves_s = false,
            }
        }
        Some(ExhaustiveAut {
            order: aut.order() as u64,
            kernel_order: kernel,
            image_order: image.len() as u64,
            image_preserves_s,
            equals_predicted: aut.order() == predicted.order() && predicted.is_subgroup_of(&aut),
        })
    } else {
        None
    };
    Ok(AutStructureReport {
        size: q.len(),
        fiber_sizes,
        translations_ok,
        fibers_are_quotients_by_s,
        predicted_kernel,
        exchanges,
        exchanges_ok,
        predicted_order: predicted.order() as u64,
        exhaustive,
    })
}

/// An automorphism exchanging two fibers with equal `s`-values.
#[derive(Debug, Clone, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct FiberExchange {
    pub fibers: (usize, usize),
    pub perm: Perm,
    pub verified: bool,
}

pub fn fiber_exchange(q: &FiniteQuandle, a: usize, b: usize) -> Result<FiberExchange> {
    let data = coset(q)?;
    let perm = swap(q, data, a, b).ok_or_else(|| {
        Error::Format(format!(
            "fibers {a} and {b} have different s-values or stabilizers"
        ))
    })?;
    Ok(FiberExchange {
        fibers: (a, b),
        verified: is_automorphism(q, &perm),
        perm,
    })
}
