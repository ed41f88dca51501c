//! Arithmetic quandles at finite level: slot machines over `Q`, abelian
//! cover quandles built from ray class levels, finite Galois quandles, and
//! towers of levels.

mod galois;
mod slot;
mod tower;

use crate::error::{Error, Result};
use crate::group::FiniteGroup;
use crate::ntheory::primes_up_to;
use crate::quadfield::{split_prime, QuadField, QuadIdeal, SplitKind};
use crate::quandle::{coset_quandle, FiniteQuandle};
use crate::rayclass::{ray_class_group, RayLevel};

pub use galois::{build_finite_galois_quandle, cubic_frobenius_s3, GaloisQuandle};
pub use slot::{build_slot_machine, SlotMachine};
pub use tower::{faithful_level, tower, QuandleTower, TowerJson, TowerProjection, FAITHFUL_ORDER};

/// Options for the prime set `𝓜`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PrimeSetOptions {
    /// Keep primes ramified in `K/Q`.
    pub include_ramified: bool,
    /// Keep only primes over split rational primes.
    pub split_only: bool,
    /// Rational primes whose primes above are all dropped.
    pub exclude: Vec<u64>,
}

impl Default for PrimeSetOptions {
    fn default() -> Self {
        PrimeSetOptions {
            include_ramified: false,
            split_only: false,
            exclude: Vec::new(),
        }
    }
}

/// The primes of `K` over rational primes `≤ bound`, minus `𝔭` and the
/// excluded ones, ordered by norm and then by HNF.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PrimeSet {
    field: QuadField,
    bound: u64,
    primes: Vec<QuadIdeal>,
    /// Rational primes below which something was dropped.
    exclusions: Vec<u64>,
}

impl PrimeSet {
    pub fn field(&self) -> QuadField {
        self.field
    }

    pub fn bound(&self) -> u64 {
        self.bound
    }

    pub fn primes(&self) -> &[QuadIdeal] {
        &self.primes
    }

    pub fn exclusions(&self) -> &[u64] {
        &self.exclusions
    }

    pub fn len(&self) -> usize {
        self.primes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.primes.is_empty()
    }

    /// An explicit prime set, e.g. a singleton or a hand-picked list.
    pub fn from_primes(field: QuadField, primes: Vec<QuadIdeal>) -> Result<Self> {
        for l in &primes {
            if l.field() != field || !l.is_prime() {
                return Err(Error::NotPrime(l.norm() as i64));
            }
        }
        let bound = primes
            .iter()
            .map(|l| rational_prime_below(l))
            .max()
            .unwrap_or(0);
        Ok(PrimeSet {
            field,
            bound,
            primes,
            exclusions: Vec::new(),
        })
    }
}

/// The rational prime under a prime ideal.
pub fn rational_prime_below(l: &QuadIdeal) -> u64 {
    // the HNF entry a is l for every splitting type
    l.hnf()[0] as u64
}

/// Label of a prime used for fibers and reports.
pub fn prime_label(l: &QuadIdeal) -> String {
    if l.field().is_rational() {
        return l.hnf()[0].to_string();
    }
    let [a, _, b, c] = l.hnf();
    if c == a {
        // (a) = aO_K
        return format!("({a})");
    }
    match b {
        0 => format!("({a}, ω)"),
        _ => format!("({a}, {b}+ω)"),
    }
}

pub fn prime_set(
    field: QuadField,
    p: &QuadIdeal,
    bound: u64,
    options: &PrimeSetOptions,
) -> Result<PrimeSet> {
    if p.field() != field || !p.is_prime() {
        return Err(Error::NotPrime(p.norm() as i64));
    }
    let mut primes = Vec::new();
    let mut exclusions = Vec::new();
    for l in primes_up_to(bound) {
        let s = split_prime(field, l)?;
        let mut dropped = false;
        if options.exclude.contains(&l)
            || (s.kind == SplitKind::Ramified && !options.include_ramified)
            || (options.split_only && s.kind != SplitKind::Split)
        {
            exclusions.push(l);
            continue;
        }
        for pa in s.primes {
            if pa.ideal == *p {
                dropped = true;
            } else {
                primes.push(pa.ideal);
            }
        }
        if dropped {
            exclusions.push(l);
        }
    }
    primes.sort_by_key(|l| (l.norm(), *l));
    Ok(PrimeSet {
        field,
        bound,
        primes,
        exclusions,
    })
}

/// One level of an abelian cover quandle: `∐_{𝔩∈𝓜} G_N/⟨[𝔩]⟩` with
/// `x ▷ y = [𝔩_x]·y`.
#[derive(Debug, Clone)]
pub struct AbelianLevel {
    ray: RayLevel,
    primes: Vec<QuadIdeal>,
    /// Frobenius class of each prime as an element index of `G_N`.
    frobenius: Vec<usize>,
    quandle: FiniteQuandle,
}

impl AbelianLevel {
    pub fn ray(&self) -> &RayLevel {
        &self.ray
    }

    pub fn exponent(&self) -> u32 {
        self.ray.exponent()
    }

    pub fn primes(&self) -> &[QuadIdeal] {
        &self.primes
    }

    pub fn frobenius(&self) -> &[usize] {
        &self.frobenius
    }

    /// The labeled coset quandle.
    pub fn quandle(&self) -> &FiniteQuandle {
        &self.quandle
    }

    pub fn group(&self) -> &FiniteGroup {
        self.quandle
            .coset_data()
            .expect("level quandles are in coset form")
            .group()
    }

    /// `ε(q)`: the Frobenius class of the fiber containing `q`.
    pub fn augmentation(&self, q: usize) -> usize {
        self.quandle
            .coset_data()
            .expect("coset form")
            .translation_of(q)
    }

    /// Fiber index of each element.
    pub fn fiber_of(&self, q: usize) -> usize {
        self.quandle.coset_data().expect("coset form").fiber_of(q)
    }

    /// Number of elements above `𝔩`.
    pub fn fiber_size(&self, lambda: usize) -> usize {
        self.quandle.coset_data().expect("coset form").fibers()[lambda].size()
    }
}

/// Element labels `"<prime>/<coset>"`; coset 0 is the identity coset, the
/// canonical base point of each fiber.
pub(crate) fn element_labels(quandle: &FiniteQuandle, fiber_names: &[String]) -> Vec<String> {
    let data = quandle.coset_data().expect("coset form");
    (0..quandle.len())
        .map(|q| {
            let (l, c) = data.locate(q);
            format!("{}/{}", fiber_names[l], c)
        })
        .collect()
}

/// Splits an element label into fiber name and coset index.
pub fn parse_element_label(label: &str) -> Option<(&str, usize)> {
    let (name, c) = label.rsplit_once('/')?;
    Some((name, c.parse().ok()?))
}

/// Builds the level-`N` quandle from a ray class level and prime set.
pub fn abelian_level(ray: RayLevel, primes: &PrimeSet) -> Result<AbelianLevel> {
    let p = ray.prime();
    let mut frobenius = Vec::with_capacity(primes.len());
    for l in primes.primes() {
        if l == p || !l.is_coprime(p) {
            return Err(Error::RamifiedPrime(prime_label(l)));
        }
        frobenius.push(ray.index_of(&ray.frobenius_class(l)?));
    }
    let group = FiniteGroup::Abelian(ray.group().clone());
    let data: Vec<(usize, Vec<usize>)> = frobenius.iter().map(|&z| (z, vec![z])).collect();
    let names: Vec<String> = primes.primes().iter().map(prime_label).collect();
    let quandle = coset_quandle(group, &data)?;
    let labels = element_labels(&quandle, &names);
    Ok(AbelianLevel {
        ray,
        primes: primes.primes().to_vec(),
        frobenius,
        quandle: quandle.with_labels(labels),
    })
}

/// The abelian cover quandle of level `N` over `K` ramified at `𝔭` only.
pub fn build_abelian_quandle(p: &QuadIdeal, primes: &PrimeSet, n: u32) -> Result<AbelianLevel> {
    if primes.field() != p.field() {
        return Err(Error::LevelMismatch(
            "prime set over a different field".into(),
        ));
    }
    if let Some(l) = primes.primes().iter().find(|l| !l.is_coprime(p)) {
        return Err(Error::RamifiedPrime(prime_label(l)));
    }
    abelian_level(ray_class_group(p, n, true)?, primes)
}
