use crate::error::{Error, Result};
use crate::perm::{Perm, PermGroup};

use super::inner::distinct_s_maps;
use super::{orbits, FiniteQuandle};

/// Limits for [`automorphism_group`].
#[derive(Debug, Clone, Copy)]
pub struct AutSearch {
    /// Largest quandle searched without an explicit node budget.
    pub exhaustive_bound: usize,
    /// Maximum number of search nodes; `None` means unlimited (only allowed
    /// up to `exhaustive_bound`).
    pub node_budget: Option<u64>,
}

impl Default for AutSearch {
    fn default() -> Self {
        AutSearch {
            exhaustive_bound: 24,
            node_budget: Some(5_000_000),
        }
    }
}

/// All automorphisms of `q`, by backtracking over images of a generating
/// sequence with closure propagation.
pub fn automorphism_group(q: &FiniteQuandle, search: AutSearch) -> Result<PermGroup> {
    let n = q.len();
    if n > search.exhaustive_bound && search.node_budget.is_none() {
        return Err(Error::TooLarge {
            size: n,
            bound: search.exhaustive_bound,
        });
    }
    let table = q.to_table();
    let op = |a: usize, b: usize| table[a * n + b] as usize;

    // automorphisms preserve orbit sizes and the cycle data of s_q
    let (maps, s_of) = distinct_s_maps(q);
    let mut orbit_size = vec![0usize; n];
    for o in orbits(q) {
        for &e in &o {
            orbit_size[e] = o.len();
        }
    }
    let invariant: Vec<(usize, usize, usize)> = (0..n)
        .map(|e| {
            let s = &maps[s_of[e]];
            let fixed = (0..n).filter(|&i| s.apply(i) == i).count();
            (orbit_size[e], fixed, s.order())
        })
        .collect();

    let base = generating_sequence(n, &op);
    let mut state = Search {
        n,
        op: &op,
        invariant: &invariant,
        base: &base,
        budget: search.node_budget.unwrap_or(u64::MAX),
        explored: 0,
        found: Vec::new(),
    };
    let mut f = vec![usize::MAX; n];
    let mut used = vec![false; n];
    state.descend(0, &mut f, &mut used)?;
    let found = state.found;
    Ok(PermGroup::from_closed_set(n, found))
}

/// Elements such that each is outside the subquandle generated by the earlier ones.
fn generating_sequence(n: usize, op: &dyn Fn(usize, usize) -> usize) -> Vec<usize> {
    let mut inside = vec![false; n];
    let mut members: Vec<usize> = Vec::new();
    let mut base = Vec::new();
    for x in 0..n {
        if inside[x] {
            continue;
        }
        base.push(x);
        let mut queue = vec![x];
        inside[x] = true;
        while let Some(a) = queue.pop() {
            members.push(a);
            for &b in members.clone().iter() {
                for c in [op(a, b), op(b, a)] {
                    if !inside[c] {
                        inside[c] = true;
                        queue.push(c);
                    }
                }
            }
        }
    }
    base
}

struct Search<'a> {
    n: usize,
    op: &'a dyn Fn(usize, usize) -> usize,
    invariant: &'a [(usize, usize, usize)],
    base: &'a [usize],
    budget: u64,
    explored: u64,
    found: Vec<Perm>,
}

impl Search<'_> {
    fn descend(&mut self, k: usize, f: &mut Vec<usize>, used: &mut Vec<bool>) -> Result<()> {
        if k == self.base.len() {
            if f.iter().all(|&x| x != usize::MAX) {
                self.found.push(Perm(f.iter().map(|&x| x as u32).collect()));
            }
            return Ok(());
        }
        let x = self.base[k];
        for y in 0..self.n {
            if used[y] || self.invariant[y] != self.invariant[x] {
                continue;
            }
            self.explored += 1;
            if self.explored > self.budget {
                return Err(Error::BudgetExceeded {
                    explored: self.explored - 1,
                    found: self.found.len(),
                });
            }
            let (mut f2, mut used2) = (f.clone(), used.clone());
            if self.extend(x, y, &mut f2, &mut used2) {
                self.descend(k + 1, &mut f2, &mut used2)?;
            }
        }
        Ok(())
    }

    /// Sets `f(x) = y` and closes the domain under `▷`; false on conflict.
    fn extend(&self, x: usize, y: usize, f: &mut [usize], used: &mut [bool]) -> bool {
        let op = self.op;
        let mut domain: Vec<usize> = (0..self.n).filter(|&a| f[a] != usize::MAX).collect();
        let mut queue = vec![(x, y)];
        while let Some((a, b)) = queue.pop() {
            if f[a] != usize::MAX {
                if f[a] != b {
                    return false;
                }
                continue;
            }
            if used[b] || self.invariant[a] != self.invariant[b] {
                return false;
            }
            f[a] = b;
            used[b] = true;
            domain.push(a);
            for &c in &domain {
                queue.push((op(a, c), op(b, f[c])));
                queue.push((op(c, a), op(f[c], b)));
            }
        }
        true
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::FiniteGroup;
    use crate::perm::PermGroup;
    use crate::quandle::{conjugation_quandle, inner_group};

    #[test]
    fn one_element() {
        let g = automorphism_group(&FiniteQuandle::trivial(1), AutSearch::default()).unwrap();
        assert_eq!(g.order(), 1);
    }

    #[test]
    fn trivial_quandle_gives_symmetric_group() {
        let g = automorphism_group(&FiniteQuandle::trivial(4), AutSearch::default()).unwrap();
        assert_eq!(g.order(), 24);
    }

    #[test]
    fn contains_inner_group() {
        let s3 = FiniteGroup::Perm(PermGroup::symmetric(3));
        let q = conjugation_quandle(&s3, false);
        let aut = automorphism_group(&q, AutSearch::default()).unwrap();
        // Aut of the S_3 conjugation quandle is S_3 acting by conjugation
        assert_eq!(aut.order(), 6);
        assert!(inner_group(&q).inn.is_subgroup_of(&aut));
    }

    #[test]
    fn budget_is_reported() {
        let q = FiniteQuandle::trivial(8);
        let err = automorphism_group(
            &q,
            AutSearch {
                exhaustive_bound: 24,
                node_budget: Some(100),
            },
        )
        .unwrap_err();
        assert!(matches!(err, Error::BudgetExceeded { explored: 100, .. }));
    }

    #[test]
    fn too_large_without_budget() {
        let q = FiniteQuandle::trivial(30);
        let err = automorphism_group(
            &q,
            AutSearch {
                exhaustive_bound: 24,
                node_budget: None,
            },
        )
        .unwrap_err();
        assert_eq!(
            err,
            Error::TooLarge {
                size: 30,
                bound: 24
            }
        );
    }
}
