//! Permutations of `0..n` and finite permutation groups enumerated by closure.

use std::collections::{HashMap, HashSet, VecDeque};

/// A permutation of `0..n`, stored as its image array.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, serde::Serialize)]
pub struct Perm(pub Vec<u32>);

impl Perm {
    pub fn identity(n: usize) -> Self {
        Perm((0..n as u32).collect())
    }

    pub fn degree(&self) -> usize {
        self.0.len()
    }

    pub fn apply(&self, i: usize) -> usize {
        self.0[i] as usize
    }

    /// `self.then(other)` applies `self` first: `i -> other(self(i))`.
    pub fn then(&self, other: &Perm) -> Perm {
        Perm(self.0.iter().map(|&i| other.0[i as usize]).collect())
    }

    /// Composition `self ∘ other`: apply `other` first.
    pub fn compose(&self, other: &Perm) -> Perm {
        other.then(self)
    }

    pub fn inverse(&self) -> Perm {
        let mut inv = vec![0u32; self.0.len()];
        for (i, &j) in self.0.iter().enumerate() {
            inv[j as usize] = i as u32;
        }
        Perm(inv)
    }

    pub fn is_identity(&self) -> bool {
        self.0.iter().enumerate().all(|(i, &j)| i as u32 == j)
    }

    pub fn is_bijection(v: &[u32]) -> bool {
        let mut seen = vec![false; v.len()];
        for &x in v {
            let x = x as usize;
            if x >= v.len() || seen[x] {
                return false;
            }
            seen[x] = true;
        }
        true
    }

    pub fn order(&self) -> usize {
        let mut seen = vec![false; self.0.len()];
        let mut ord = 1usize;
        for start in 0..self.0.len() {
            if seen[start] {
                continue;
            }
            let mut len = 0;
            let mut i = start;
            while !seen[i] {
                seen[i] = true;
                i = self.0[i] as usize;
                len += 1;
            }
            ord = crate::ntheory::lcm(ord as u64, len as u64) as usize;
        }
        ord
    }

    /// Sign of the permutation (+1 even, -1 odd).
    pub fn sign(&self) -> i32 {
        let mut seen = vec![false; self.0.len()];
        let mut s = 1;
        for start in 0..self.0.len() {
            if seen[start] {
                continue;
            }
            let mut len = 0;
            let mut i = start;
            while !seen[i] {
                seen[i] = true;
                i = self.0[i] as usize;
                len += 1;
            }
            if len % 2 == 0 {
                s = -s;
            }
        }
        s
    }
}

/// A finite permutation group with all elements enumerated.
///
/// Elements are stored in BFS discovery order from the identity, so the
/// ordering is deterministic given the generator list.
#[derive(Debug, Clone)]
pub struct PermGroup {
    degree: usize,
    generators: Vec<Perm>,
    elements: Vec<Perm>,
    index: HashMap<Perm, usize>,
}

impl PermGroup {
    /// Enumerates `⟨generators⟩` by breadth-first closure.
    pub fn generate(degree: usize, generators: &[Perm]) -> Self {
        Self::generate_bounded(degree, generators, usize::MAX).expect("unbounded")
    }

    /// Like [`generate`](Self::generate) but gives up once more than `limit` elements appear.
    pub fn generate_bounded(degree: usize, generators: &[Perm], limit: usize) -> Option<Self> {
        let id = Perm::identity(degree);
        let mut gens: Vec<Perm> = Vec::new();
        for g in generators {
            assert_eq!(g.degree(), degree, "generator degree mismatch");
            if !g.is_identity() && !gens.contains(g) {
                gens.push(g.clone());
            }
        }
        let mut elements = vec![id.clone()];
        let mut index = HashMap::new();
        index.insert(id, 0usize);
        let mut queue = VecDeque::from([0usize]);
        while let Some(i) = queue.pop_front() {
            for g in &gens {
                let next = elements[i].then(g);
                if !index.contains_key(&next) {
                    if elements.len() >= limit {
                        return None;
                    }
                    index.insert(next.clone(), elements.len());
                    queue.push_back(elements.len());
                    elements.push(next);
                }
            }
        }
        Some(PermGroup {
            degree,
            generators: gens,
            elements,
            index,
        })
    }

    /// Wraps a set of permutations already known to form a group, choosing a
    /// small generating set greedily.
    pub fn from_closed_set(degree: usize, mut elements: Vec<Perm>) -> Self {
        elements.sort();
        let mut current = Self::trivial(degree);
        for p in &elements {
            if !current.contains(p) {
                let mut gens = current.generators.clone();
                gens.push(p.clone());
                current = Self::generate(degree, &gens);
            }
        }
        assert_eq!(current.order(), elements.len(), "set is not closed");
        current
    }

    pub fn trivial(degree: usize) -> Self {
        Self::generate(degree, &[])
    }

    pub fn symmetric(n: usize) -> Self {
        let mut gens = Vec::new();
        if n >= 2 {
            let mut t: Vec<u32> = (0..n as u32).collect();
            t.swap(0, 1);
            gens.push(Perm(t));
            let c: Vec<u32> = (0..n as u32).map(|i| (i + 1) % n as u32).collect();
            gens.push(Perm(c));
        }
        Self::generate(n, &gens)
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn generators(&self) -> &[Perm] {
        &self.generators
    }

    pub fn elements(&self) -> &[Perm] {
        &self.elements
    }

    pub fn element(&self, i: usize) -> &Perm {
        &self.elements[i]
    }

    pub fn index_of(&self, p: &Perm) -> Option<usize> {
        self.index.get(p).copied()
    }

    pub fn contains(&self, p: &Perm) -> bool {
        self.index.contains_key(p)
    }

    pub fn is_abelian(&self) -> bool {
        self.generators
            .iter()
            .all(|a| self.generators.iter().all(|b| a.then(b) == b.then(a)))
    }

    pub fn is_subgroup_of(&self, other: &PermGroup) -> bool {
        self.generators.iter().all(|g| other.contains(g))
    }

    /// Orbits of the group on `0..degree`, each sorted, ordered by smallest point.
    pub fn orbits(&self) -> Vec<Vec<usize>> {
        let mut uf = UnionFind::new(self.degree);
        for g in &self.generators {
            for i in 0..self.degree {
                uf.union(i, g.apply(i));
            }
        }
        uf.classes()
    }

    pub fn is_transitive_on(&self, points: &[usize]) -> bool {
        if points.is_empty() {
            return true;
        }
        let orbit = self.orbit(points[0]);
        let set: HashSet<usize> = orbit.into_iter().collect();
        points.iter().all(|p| set.contains(p)) && set.len() == points.len()
    }

    pub fn orbit(&self, point: usize) -> Vec<usize> {
        let mut seen = vec![false; self.degree];
        seen[point] = true;
        let mut out = vec![point];
        let mut k = 0;
        while k < out.len() {
            let x = out[k];
            for g in &self.generators {
                let y = g.apply(x);
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

    /// The derived subgroup `[G, G]`, as the normal closure of generator commutators.
    pub fn derived_subgroup(&self) -> PermGroup {
        let mut gens = Vec::new();
        for a in &self.generators {
            for b in &self.generators {
                let c = a.inverse().then(&b.inverse()).then(a).then(b);
                if !c.is_identity() && !gens.contains(&c) {
                    gens.push(c);
                }
            }
        }
        let mut current = PermGroup::generate(self.degree, &gens);
        loop {
            let mut extra = Vec::new();
            for h in current.generators() {
                for g in &self.generators {
                    let conj = g.inverse().then(h).then(g);
                    if !current.contains(&conj) && !extra.contains(&conj) {
                        extra.push(conj);
                    }
                }
            }
            if extra.is_empty() {
                return current;
            }
            let mut all = current.generators().to_vec();
            all.extend(extra);
            current = PermGroup::generate(self.degree, &all);
        }
    }

    /// Order of the Sylow-q subgroup (the q-part of the group order).
    pub fn sylow_order(&self, q: u64) -> u64 {
        let mut n = self.order() as u64;
        let mut part = 1;
        while n % q == 0 {
            n /= q;
            part *= q;
        }
        part
    }
}

/// Disjoint-set forest used for orbit computations.
#[derive(Debug, Clone)]
pub struct UnionFind {
    parent: Vec<usize>,
}

impl UnionFind {
    pub fn new(n: usize) -> Self {
        UnionFind {
            parent: (0..n).collect(),
        }
    }

    pub fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    pub fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            let (lo, hi) = if ra < rb { (ra, rb) } else { (rb, ra) };
            self.parent[hi] = lo;
        }
    }

    /// Equivalence classes, each sorted, ordered by smallest member.
    pub fn classes(&mut self) -> Vec<Vec<usize>> {
        let n = self.parent.len();
        let mut by_root: HashMap<usize, Vec<usize>> = HashMap::new();
        for i in 0..n {
            let r = self.find(i);
            by_root.entry(r).or_default().push(i);
        }
        let mut out: Vec<Vec<usize>> = by_root.into_values().collect();
        out.sort_by_key(|c| c[0]);
        out
    }
}
