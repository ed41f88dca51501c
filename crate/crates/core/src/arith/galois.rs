use crate::error::{Error, Result};
use crate::group::FiniteGroup;
use crate::perm::{Perm, PermGroup};
use crate::quandle::{coset_quandle, FiniteQuandle};

use super::element_labels;

/// `∐_l G/⟨z_l⟩` for a finite Galois group `G` with chosen Frobenius
/// elements `z_l`.
#[derive(Debug, Clone)]
pub struct GaloisQuandle {
    group: PermGroup,
    primes: Vec<u64>,
    /// Canonical class representative of each prime, as an element index.
    frobenius: Vec<usize>,
    quandle: FiniteQuandle,
}

impl GaloisQuandle {
    pub fn group(&self) -> &PermGroup {
        &self.group
    }

    pub fn primes(&self) -> &[u64] {
        &self.primes
    }

    pub fn frobenius(&self) -> &[usize] {
        &self.frobenius
    }

    pub fn quandle(&self) -> &FiniteQuandle {
        &self.quandle
    }
}

/// Smallest element index in the conjugacy class of `x`.
fn class_representative(g: &PermGroup, x: usize) -> usize {
    let fg = FiniteGroup::Perm(g.clone());
    (0..g.order())
        .map(|y| fg.conjugate(y, x))
        .min()
        .expect("group is non-empty")
}

/// Builds the quandle from Frobenius classes `(l, element of the class)`,
/// keeping the primes `l ≤ bound`.
pub fn build_finite_galois_quandle(
    group: &PermGroup,
    frobenius: &[(u64, Perm)],
    bound: u64,
) -> Result<GaloisQuandle> {
    let mut primes = Vec::new();
    let mut reps = Vec::new();
    for (l, x) in frobenius.iter().filter(|(l, _)| *l <= bound) {
        let idx = group
            .index_of(x)
            .ok_or_else(|| Error::InvalidClass(format!("{:?} for l = {l} is not in G", x.0)))?;
        primes.push(*l);
        reps.push(class_representative(group, idx));
    }
    let data: Vec<(usize, Vec<usize>)> = reps.iter().map(|&z| (z, vec![z])).collect();
    let quandle = coset_quandle(FiniteGroup::Perm(group.clone()), &data)?;
    let names: Vec<String> = primes.iter().map(u64::to_string).collect();
    let labels = element_labels(&quandle, &names);
    Ok(GaloisQuandle {
        group: group.clone(),
        primes,
        frobenius: reps,
        quandle: quandle.with_labels(labels),
    })
}

/// Discriminant of the monic cubic `x³ + b x² + c x + d`.
fn cubic_disc(b: i128, c: i128, d: i128) -> i128 {
    b * b * c * c - 4 * c * c * c - 4 * b * b * b * d - 27 * d * d + 18 * b * c * d
}

/// Frobenius class in `S_3` of `l` for the splitting field of the monic cubic
/// `x³ + b x² + c x + d`, read off from the number of roots mod `l`:
/// three roots give the identity, one root the transposition `(0 1)`, none
/// the 3-cycle `(0 1 2)`. `None` when `l` divides the discriminant.
pub fn cubic_frobenius_s3(coeffs: [i64; 3], l: u64) -> Option<Perm> {
    let [b, c, d] = coeffs.map(|x| x as i128);
    let li = l as i128;
    if cubic_disc(b, c, d).rem_euclid(li) == 0 {
        return None;
    }
    let roots = (0..li)
        .filter(|&x| (((x + b) * x % li + c) * x % li + d).rem_euclid(li) == 0)
        .count();
    Some(match roots {
        3 => Perm::identity(3),
        1 => Perm(vec![1, 0, 2]),
        0 => Perm(vec![1, 2, 0]),
        _ => unreachable!("a separable cubic mod l has 0, 1 or 3 roots"),
    })
}
