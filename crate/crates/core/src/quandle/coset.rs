use crate::error::{Error, Result};
use crate::group::FiniteGroup;
use crate::perm::Perm;

use super::FiniteQuandle;

/// Cayley tables are cached for groups up to this order.
const CAYLEY_BOUND: usize = 1024;

/// One fiber `G/H_λ` of a coset quandle.
#[derive(Debug, Clone)]
pub struct Fiber {
    /// The translation element `z_λ`.
    pub z: usize,
    /// Generators of `H_λ` as given.
    pub h_gens: Vec<usize>,
    /// All elements of `H_λ`, sorted.
    pub h: Vec<usize>,
    /// Smallest group element of each coset, in increasing order.
    pub reps: Vec<usize>,
    coset_of: Vec<u32>,
}

impl Fiber {
    pub fn size(&self) -> usize {
        self.reps.len()
    }

    /// Index of the coset `gH_λ` within this fiber.
    pub fn coset_of(&self, g: usize) -> usize {
        self.coset_of[g] as usize
    }
}

/// Data of `Q(G, {H_λ}, {z_λ}) = ∐ G/H_λ` with `xH_λ ▷ yH_μ = x z_λ x⁻¹ y H_μ`.
#[derive(Debug, Clone)]
pub struct CosetData {
    group: FiniteGroup,
    fibers: Vec<Fiber>,
    offsets: Vec<usize>,
    fiber_of: Vec<u32>,
    /// `x z_λ x⁻¹` for the representative `x` of each element.
    conj: Vec<u32>,
    cayley: Option<Vec<u32>>,
}

impl CosetData {
    pub fn len(&self) -> usize {
        self.fiber_of.len()
    }

    pub fn is_empty(&self) -> bool {
        self.fiber_of.is_empty()
    }

    pub fn group(&self) -> &FiniteGroup {
        &self.group
    }

    pub fn fibers(&self) -> &[Fiber] {
        &self.fibers
    }

    pub fn fiber_range(&self, lambda: usize) -> std::ops::Range<usize> {
        self.offsets[lambda]..self.offsets[lambda] + self.fibers[lambda].size()
    }

    /// `(λ, coset index)` of element `q`.
    pub fn locate(&self, q: usize) -> (usize, usize) {
        let l = self.fiber_of[q] as usize;
        (l, q - self.offsets[l])
    }

    pub fn fiber_of(&self, q: usize) -> usize {
        self.fiber_of[q] as usize
    }

    /// Element index of the coset `g H_λ`.
    pub fn element(&self, lambda: usize, g: usize) -> usize {
        self.offsets[lambda] + self.fibers[lambda].coset_of(g)
    }

    /// Chosen representative in `G` of element `q`.
    pub fn rep(&self, q: usize) -> usize {
        let (l, c) = self.locate(q);
        self.fibers[l].reps[c]
    }

    pub(crate) fn mul(&self, a: usize, b: usize) -> usize {
        match &self.cayley {
            Some(t) => t[a * self.group.order() + b] as usize,
            None => self.group.mul(a, b),
        }
    }

    pub(crate) fn op(&self, q: usize, r: usize) -> usize {
        let (mu, c) = self.locate(r);
        let y = self.fibers[mu].reps[c];
        self.element(mu, self.mul(self.conj[q] as usize, y))
    }

    /// The group element by which `s_q` translates every fiber.
    pub fn translation_of(&self, q: usize) -> usize {
        self.conj[q] as usize
    }
}

/// Builds `Q(G, {H_λ}, {z_λ})` from pairs `(z_λ, generators of H_λ)`.
pub fn coset_quandle(group: FiniteGroup, data: &[(usize, Vec<usize>)]) -> Result<FiniteQuandle> {
    let order = group.order();
    let cayley = (order <= CAYLEY_BOUND).then(|| {
        let mut t = Vec::with_capacity(order * order);
        for a in 0..order {
            for b in 0..order {
                t.push(group.mul(a, b) as u32);
            }
        }
        t
    });
    let mut fibers = Vec::with_capacity(data.len());
    for (index, (z, h_gens)) in data.iter().enumerate() {
        let bad = |reason: &str| Error::InvalidCosetData {
            index,
            reason: reason.to_string(),
        };
        if *z >= order || h_gens.iter().any(|&h| h >= order) {
            return Err(bad("element out of range"));
        }
        let h = group.subgroup(h_gens);
        if h.binary_search(z).is_err() {
            return Err(bad("z is not in H"));
        }
        if h_gens.iter().any(|&x| group.mul(x, *z) != group.mul(*z, x)) {
            return Err(bad("H does not centralize z"));
        }
        let mut coset_of = vec![u32::MAX; order];
        let mut reps = Vec::new();
        for g in 0..order {
            if coset_of[g] == u32::MAX {
                let c = reps.len() as u32;
                reps.push(g);
                for &x in &h {
                    coset_of[group.mul(g, x)] = c;
                }
            }
        }
        fibers.push(Fiber {
            z: *z,
            h_gens: h_gens.clone(),
            h,
            reps,
            coset_of,
        });
    }
    let mut offsets = Vec::with_capacity(fibers.len());
    let mut fiber_of = Vec::new();
    for (l, f) in fibers.iter().enumerate() {
        offsets.push(fiber_of.len());
        fiber_of.extend(std::iter::repeat(l as u32).take(f.size()));
    }
    let mut data = CosetData {
        group,
        fibers,
        offsets,
        fiber_of,
        conj: Vec::new(),
        cayley,
    };
    let conj: Vec<u32> = (0..data.len())
        .map(|q| {
            let (l, c) = data.locate(q);
            let x = data.fibers[l].reps[c];
            let xz = data.mul(x, data.fibers[l].z);
            data.mul(xz, data.group.inv(x)) as u32
        })
        .collect();
    data.conj = conj;
    Ok(FiniteQuandle::from_coset(data))
}

/// The automorphism `(λ, xH_λ) ↦ (λ, u_λ x H_λ)` for `u ∈ ∏ G/H_λ`, given by
/// one representative `u_λ ∈ G` per fiber.
pub fn fiber_translation_action(q: &FiniteQuandle, u: &[usize]) -> Result<Perm> {
    let data = q
        .coset_data()
        .ok_or_else(|| Error::Format("fiber translations need a coset-form quandle".into()))?;
    if !data.group().is_abelian() {
        return Err(Error::NonAbelian);
    }
    if u.len() != data.fibers().len() {
        return Err(Error::Format(format!(
            "expected {} fiber components, got {}",
            data.fibers().len(),
            u.len()
        )));
    }
    let img = (0..data.len())
        .map(|e| {
            let l = data.fiber_of(e);
            data.element(l, data.mul(u[l], data.rep(e))) as u32
        })
        .collect();
    Ok(Perm(img))
}
