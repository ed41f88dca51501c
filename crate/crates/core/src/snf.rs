//! Integer lattices of relations and Smith normal form with column transforms.

use crate::ntheory::ext_gcd;

/// A sublattice of Z^k held in row-echelon (Hermite-like) form.
///
/// Insertion keeps at most one basis row per pivot column, so a finite
/// abelian group on k generators never needs more than k rows no matter how
/// many relations are fed in.
#[derive(Debug, Clone)]
pub struct RelationLattice {
    dim: usize,
    rows: Vec<Option<Vec<i128>>>,
}

impl RelationLattice {
    pub fn new(dim: usize) -> Self {
        RelationLattice {
            dim,
            rows: vec![None; dim],
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn insert(&mut self, v: &[i128]) {
        assert_eq!(v.len(), self.dim);
        let mut v = v.to_vec();
        for col in 0..self.dim {
            if v[col] == 0 {
                continue;
            }
            match self.rows[col].take() {
                None => {
                    if v[col] < 0 {
                        v.iter_mut().for_each(|x| *x = -*x);
                    }
                    self.rows[col] = Some(v);
                    self.normalize();
                    return;
                }
                Some(row) => {
                    let (g, s, t) = ext_gcd(row[col], v[col]);
                    let (a, b) = (row[col] / g, v[col] / g);
                    // [s t; -b a] is unimodular and sends (row[col], v[col]) to (g, 0)
                    let new_row: Vec<i128> = (0..self.dim).map(|j| s * row[j] + t * v[j]).collect();
                    let rest: Vec<i128> = (0..self.dim).map(|j| -b * row[j] + a * v[j]).collect();
                    self.rows[col] = Some(new_row);
                    self.normalize();
                    v = rest;
                }
            }
        }
    }

    /// Keeps entries small by reducing every row modulo the pivots to its right.
    fn normalize(&mut self) {
        for c in 0..self.dim {
            let Some(pr) = self.rows[c].clone() else {
                continue;
            };
            let p = pr[c];
            for r in 0..c {
                if let Some(row) = self.rows[r].as_mut() {
                    let q = row[c].div_euclid(p);
                    if q != 0 {
                        for j in 0..self.dim {
                            row[j] -= q * pr[j];
                        }
                    }
                }
            }
        }
    }

    pub fn is_full_rank(&self) -> bool {
        self.rows.iter().all(|r| r.is_some())
    }

    /// Index of the lattice in Z^k (product of pivots); `None` if not full rank.
    pub fn index(&self) -> Option<i128> {
        self.rows
            .iter()
            .enumerate()
            .map(|(i, r)| r.as_ref().map(|r| r[i]))
            .product()
    }

    pub fn basis(&self) -> Vec<Vec<i128>> {
        self.rows.iter().flatten().cloned().collect()
    }

    pub fn contains(&self, v: &[i128]) -> bool {
        let mut v = v.to_vec();
        for col in 0..self.dim {
            if v[col] == 0 {
                continue;
            }
            match &self.rows[col] {
                None => return false,
                Some(row) => {
                    if v[col] % row[col] != 0 {
                        return false;
                    }
                    let q = v[col] / row[col];
                    for j in 0..self.dim {
                        v[j] -= q * row[j];
                    }
                }
            }
        }
        true
    }
}

/// Smith normal form `U A V = diag(d)` of a relation matrix; only the column
/// transform `V` and its inverse are kept.
#[derive(Debug, Clone)]
pub struct SmithForm {
    /// Diagonal entries `d_1 | d_2 | ...`, one per column (0 for a free summand).
    pub diagonal: Vec<i128>,
    /// New coordinates are `y = x · v`.
    pub v: Vec<Vec<i128>>,
    /// Row `i` expresses the i-th new generator in the old generators.
    pub v_inv: Vec<Vec<i128>>,
}

pub fn smith_form(relations: &[Vec<i128>], k: usize) -> SmithForm {
    let mut a: Vec<Vec<i128>> = relations
        .iter()
        .filter(|r| r.iter().any(|&x| x != 0))
        .cloned()
        .collect();
    let m = a.len();
    let mut v = identity(k);
    let mut v_inv = identity(k);

    let col_swap = |a: &mut Vec<Vec<i128>>,
                    v: &mut Vec<Vec<i128>>,
                    vi: &mut Vec<Vec<i128>>,
                    i: usize,
                    j: usize| {
        if i == j {
            return;
        }
        for row in a.iter_mut() {
            row.swap(i, j);
        }
        for row in v.iter_mut() {
            row.swap(i, j);
        }
        vi.swap(i, j);
    };
    // col_j -= q * col_t
    let col_sub = |a: &mut Vec<Vec<i128>>,
                   v: &mut Vec<Vec<i128>>,
                   vi: &mut Vec<Vec<i128>>,
                   j: usize,
                   t: usize,
                   q: i128| {
        if q == 0 {
            return;
        }
        for row in a.iter_mut() {
            row[j] -= q * row[t];
        }
        for row in v.iter_mut() {
            row[j] -= q * row[t];
        }
        let rj = vi[j].clone();
        for (x, y) in vi[t].iter_mut().zip(rj) {
            *x += q * y;
        }
    };

    let steps = m.min(k);
    let mut t = 0;
    while t < steps {
        // pivot: smallest nonzero |entry| in the remaining block
        let mut best: Option<(usize, usize)> = None;
        for i in t..m {
            for j in t..k {
                if a[i][j] != 0 && best.is_none_or(|(bi, bj)| a[i][j].abs() < a[bi][bj].abs()) {
                    best = Some((i, j));
                }
            }
        }
        let Some((pi, pj)) = best else { break };
        a.swap(t, pi);
        col_swap(&mut a, &mut v, &mut v_inv, t, pj);

        loop {
            let mut changed = false;
            for i in (t + 1)..m {
                if a[i][t] != 0 {
                    let q = a[i][t].div_euclid(a[t][t]);
                    let rt = a[t].clone();
                    for (x, y) in a[i].iter_mut().zip(rt) {
                        *x -= q * y;
                    }
                    if a[i][t] != 0 {
                        a.swap(t, i);
                        changed = true;
                    }
                }
            }
            for j in (t + 1)..k {
                if a[t][j] != 0 {
                    let q = a[t][j].div_euclid(a[t][t]);
                    col_sub(&mut a, &mut v, &mut v_inv, j, t, q);
                    if a[t][j] != 0 {
                        col_swap(&mut a, &mut v, &mut v_inv, t, j);
                        changed = true;
                    }
                }
            }
            if changed {
                continue;
            }
            // divisibility condition on the remaining block
            let d = a[t][t];
            let bad = (t + 1..m).find(|&i| (t + 1..k).any(|j| a[i][j] % d != 0));
            match bad {
                Some(i) => {
                    let ri = a[i].clone();
                    for (x, y) in a[t].iter_mut().zip(ri) {
                        *x += y;
                    }
                }
                None => break,
            }
        }
        if a[t][t] < 0 {
            a[t].iter_mut().for_each(|x| *x = -*x);
        }
        t += 1;
    }
    let diagonal = (0..k).map(|i| if i < m { a[i][i] } else { 0 }).collect();
    SmithForm { diagonal, v, v_inv }
}

fn identity(k: usize) -> Vec<Vec<i128>> {
    (0..k)
        .map(|i| (0..k).map(|j| i128::from(i == j)).collect())
        .collect()
}

pub fn mat_vec(x: &[i128], m: &[Vec<i128>]) -> Vec<i128> {
    let cols = m.first().map_or(0, |r| r.len());
    (0..cols)
        .map(|j| x.iter().zip(m).map(|(a, row)| a * row[j]).sum())
        .collect()
}
