use crate::error::{Error, Result};
use crate::group::FiniteGroup;
use crate::ntheory::{gcd, is_prime};
use crate::presentation::{AbelianGroupPresentation, DEFAULT_ORDER_CEILING};
use crate::quandle::{coset_quandle, FiniteQuandle};

use super::element_labels;

/// The slot-machine quandle `∐_{l∈𝓜} (Z/p^N)^×/⟨l⟩` with `x ▷ y = l_x·y`.
#[derive(Debug, Clone)]
pub struct SlotMachine {
    p: u64,
    n: u32,
    modulus: u64,
    units: AbelianGroupPresentation<u64>,
    primes: Vec<u64>,
    quandle: FiniteQuandle,
}

impl SlotMachine {
    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn exponent(&self) -> u32 {
        self.n
    }

    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    /// `(Z/p^N)^×` with its residues.
    pub fn units(&self) -> &AbelianGroupPresentation<u64> {
        &self.units
    }

    pub fn primes(&self) -> &[u64] {
        &self.primes
    }

    pub fn quandle(&self) -> &FiniteQuandle {
        &self.quandle
    }

    /// Residue of the group element representing `q`.
    pub fn residue(&self, q: usize) -> u64 {
        let data = self.quandle.coset_data().expect("coset form");
        *self.units.element(data.rep(q))
    }

    /// `π(q)`: the residue `l` of the fiber containing `q`.
    pub fn pi(&self, q: usize) -> u64 {
        let data = self.quandle.coset_data().expect("coset form");
        self.primes[data.fiber_of(q)] % self.modulus
    }
}

/// Builds the slot machine for the prime `p`, rational primes `𝓜 ∌ p` and
/// level `N ≥ 1`.
pub fn build_slot_machine(p: u64, primes: &[u64], n: u32) -> Result<SlotMachine> {
    if !is_prime(p) {
        return Err(Error::NotPrime(p as i64));
    }
    if n == 0 {
        return Err(Error::LevelMismatch("level N must be at least 1".into()));
    }
    if let Some(&l) = primes.iter().find(|&&l| l % p == 0) {
        return Err(Error::RamifiedPrime(l.to_string()));
    }
    if let Some(&l) = primes.iter().find(|&&l| !is_prime(l)) {
        return Err(Error::NotPrime(l as i64));
    }
    let modulus = p
        .checked_pow(n)
        .filter(|&m| m <= DEFAULT_ORDER_CEILING)
        .ok_or(Error::GroupTooLarge {
            order: u64::MAX,
            ceiling: DEFAULT_ORDER_CEILING,
        })?;
    let candidates = (1..modulus).filter(|&u| gcd(u as i128, modulus as i128) == 1);
    let units = AbelianGroupPresentation::discover(
        1 % modulus,
        candidates,
        |a, b| ((*a as u128 * *b as u128) % modulus as u128) as u64,
        DEFAULT_ORDER_CEILING,
    )?;
    let z: Vec<usize> = primes
        .iter()
        .map(|&l| units.index_of(&(l % modulus)).expect("l is a unit mod p^N"))
        .collect();
    let data: Vec<(usize, Vec<usize>)> = z.iter().map(|&z| (z, vec![z])).collect();
    let quandle = coset_quandle(FiniteGroup::Abelian(units.group().clone()), &data)?;
    let names: Vec<String> = primes.iter().map(u64::to_string).collect();
    let labels = element_labels(&quandle, &names);
    Ok(SlotMachine {
        p,
        n,
        modulus,
        units,
        primes: primes.to_vec(),
        quandle: quandle.with_labels(labels),
    })
}
