use crate::error::{Error, Result};
use crate::group::FiniteGroup;
use crate::perm::Perm;

use super::coset::coset_quandle;
use super::FiniteQuandle;

/// A quandle given by a `G`-action on a finite set and an augmentation
/// `ε : Q → G` with `q ▷ r = ε(q)·r`.
#[derive(Debug, Clone)]
pub struct AugmentedQuandle {
    group: FiniteGroup,
    /// `action[g]` is the permutation of `Q` by group element `g`.
    action: Vec<Perm>,
    eps: Vec<usize>,
}

impl AugmentedQuandle {
    pub fn new(group: FiniteGroup, action: Vec<Perm>, eps: Vec<usize>) -> Result<Self> {
        let bad = |reason: String| Error::Format(format!("augmented quandle: {reason}"));
        if action.len() != group.order() {
            return Err(bad("one permutation per group element required".into()));
        }
        let n = eps.len();
        if action.iter().any(|p| p.degree() != n) {
            return Err(bad("action degree differs from |Q|".into()));
        }
        if !action[0].is_identity() {
            return Err(bad("identity does not act trivially".into()));
        }
        for a in 0..group.order() {
            for b in 0..group.order() {
                if action[group.mul(a, b)] != action[b].then(&action[a]) {
                    return Err(bad(format!("not an action at ({a}, {b})")));
                }
            }
        }
        for q in 0..n {
            if action[eps[q]].apply(q) != q {
                return Err(bad(format!("ε({q}) does not fix {q}")));
            }
            for g in 0..group.order() {
                let gq = action[g].apply(q);
                if eps[gq] != group.conjugate(g, eps[q]) {
                    return Err(bad(format!("ε not equivariant at g={g}, q={q}")));
                }
            }
        }
        Ok(AugmentedQuandle { group, action, eps })
    }

    pub fn group(&self) -> &FiniteGroup {
        &self.group
    }

    pub fn len(&self) -> usize {
        self.eps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.eps.is_empty()
    }

    pub fn act(&self, g: usize, q: usize) -> usize {
        self.action[g].apply(q)
    }

    pub fn augmentation(&self, q: usize) -> usize {
        self.eps[q]
    }

    pub fn quandle(&self) -> FiniteQuandle {
        let n = self.len();
        let mut table = Vec::with_capacity(n * n);
        for q in 0..n {
            let s = &self.action[self.eps[q]];
            table.extend(s.0.iter().copied());
        }
        FiniteQuandle::from_table(n, table)
    }
}

/// A map of quandles, optionally with the accompanying group map.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QuandleMorphism {
    pub map: Vec<usize>,
    pub group_map: Option<Vec<usize>>,
}

impl QuandleMorphism {
    pub fn apply(&self, q: usize) -> usize {
        self.map[q]
    }

    pub fn is_homomorphism(&self, source: &FiniteQuandle, target: &FiniteQuandle) -> bool {
        let n = source.len();
        self.map.len() == n
            && self.map.iter().all(|&x| x < target.len())
            && (0..n).all(|a| {
                (0..n).all(|b| self.map[source.op(a, b)] == target.op(self.map[a], self.map[b]))
            })
    }

    pub fn is_bijective(&self) -> bool {
        let v: Vec<u32> = self.map.iter().map(|&x| x as u32).collect();
        Perm::is_bijection(&v)
    }
}

/// Coset-form model of an augmented quandle.
#[derive(Debug, Clone)]
pub struct Representation {
    pub quandle: FiniteQuandle,
    /// Isomorphism from the augmented quandle onto `quandle`.
    pub iso: QuandleMorphism,
    /// Chosen orbit representatives `q_λ`.
    pub reps: Vec<usize>,
    /// Whether every stabilizer equals `⟨ε(q_λ)⟩`.
    pub stabilizers_cyclic: bool,
}

/// Realizes `A` as `Q(G, {Stab(q_λ)}, {ε(q_λ)})`, taking the smallest
/// element of each orbit as `q_λ`.
///
/// With `require_cyclic_stabilizers`, a stabilizer larger than `⟨ε(q_λ)⟩` is
/// an error.
pub fn from_augmented(
    a: &AugmentedQuandle,
    require_cyclic_stabilizers: bool,
) -> Result<Representation> {
    let g = a.group();
    let n = a.len();
    let mut orbit_of = vec![usize::MAX; n];
    // transporter[q] = some g with g·q_λ = q
    let mut transporter = vec![0usize; n];
    let mut reps = Vec::new();
    for q in 0..n {
        if orbit_of[q] != usize::MAX {
            continue;
        }
        let l = reps.len();
        reps.push(q);
        for x in 0..g.order() {
            let y = a.act(x, q);
            if orbit_of[y] == usize::MAX {
                orbit_of[y] = l;
                transporter[y] = x;
            }
        }
    }
    let mut data = Vec::with_capacity(reps.len());
    let mut cyclic = true;
    for (l, &q) in reps.iter().enumerate() {
        let stab: Vec<usize> = (0..g.order()).filter(|&x| a.act(x, q) == q).collect();
        let z = a.augmentation(q);
        if g.subgroup(&[z]).len() != stab.len() {
            cyclic = false;
            if require_cyclic_stabilizers {
                return Err(Error::InvalidCosetData {
                    index: l,
                    reason: format!(
                        "stabilizer of order {} is not generated by ε(q)",
                        stab.len()
                    ),
                });
            }
        }
        data.push((z, small_generating_set(g, &stab)));
    }
    let quandle = coset_quandle(g.clone(), &data)?;
    let cd = quandle.coset_data().expect("coset form");
    let map: Vec<usize> = (0..n)
        .map(|q| cd.element(orbit_of[q], transporter[q]))
        .collect();
    let iso = QuandleMorphism {
        map,
        group_map: None,
    };
    debug_assert!(iso.is_homomorphism(&a.quandle(), &quandle));
    Ok(Representation {
        quandle,
        iso,
        reps,
        stabilizers_cyclic: cyclic,
    })
}

fn small_generating_set(g: &FiniteGroup, elements: &[usize]) -> Vec<usize> {
    let mut gens: Vec<usize> = Vec::new();
    let mut span = g.subgroup(&[]);
    for &x in elements {
        if span.binary_search(&x).is_err() {
            gens.push(x);
            span = g.subgroup(&gens);
        }
    }
    gens
}
