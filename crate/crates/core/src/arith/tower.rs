use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::quadfield::{FieldJson, IdealJson, QuadField, QuadIdeal};
use crate::quandle::{verify_axioms, AxiomReport, QuandleJson, QuandleMorphism, Sampling};
use crate::rayclass::{level_projection, ray_class_group};

use super::{abelian_level, AbelianLevel, PrimeSet};

/// Target order for the level reported as faithful.
pub const FAITHFUL_ORDER: u64 = 10_000;

/// The reduction `Q_{N+1} → Q_N`, on groups and on elements.
#[derive(Debug, Clone)]
pub struct TowerProjection {
    pub from: u32,
    pub to: u32,
    /// Image of each element index of `G_{from}`.
    pub group_map: Vec<usize>,
    pub morphism: QuandleMorphism,
}

/// Levels `N = 1..N_max` of the abelian cover quandle with their projections.
#[derive(Debug, Clone)]
pub struct QuandleTower {
    prime: QuadIdeal,
    primes: PrimeSet,
    levels: Vec<AbelianLevel>,
    /// `projections[i]` maps level `i + 2` onto level `i + 1`.
    projections: Vec<TowerProjection>,
}

/// Per-level verification outcome.
#[derive(Debug, Clone)]
pub struct LevelReport {
    pub n: u32,
    pub size: usize,
    pub group_order: u64,
    pub axioms: AxiomReport,
    pub fiber_size_law: bool,
}

impl QuandleTower {
    pub fn field(&self) -> QuadField {
        self.prime.field()
    }

    pub fn prime(&self) -> &QuadIdeal {
        &self.prime
    }

    pub fn prime_set(&self) -> &PrimeSet {
        &self.primes
    }

    pub fn max_level(&self) -> u32 {
        self.levels.len() as u32
    }

    pub fn levels(&self) -> &[AbelianLevel] {
        &self.levels
    }

    /// Level `N` (1-based).
    pub fn level(&self, n: u32) -> &AbelianLevel {
        &self.levels[n as usize - 1]
    }

    pub fn projections(&self) -> &[TowerProjection] {
        &self.projections
    }

    /// Image of element `q` of level `from` in level `to ≤ from`.
    pub fn project(&self, from: u32, to: u32, mut q: usize) -> usize {
        assert!(to >= 1 && to <= from && from <= self.max_level());
        for n in (to..from).rev() {
            q = self.projections[n as usize - 1].morphism.apply(q);
        }
        q
    }

    /// Smallest level with `|G_N| ≥ FAITHFUL_ORDER`, if the tower reaches it.
    pub fn faithful_level(&self) -> Option<u32> {
        faithful_level(self.levels.iter().map(|l| l.ray().order()))
    }

    /// Axioms and fiber size law at every level.
    pub fn verify(&self, sampling: Sampling) -> Vec<LevelReport> {
        self.levels
            .iter()
            .map(|lvl| {
                let g = lvl.group();
                let fiber_size_law = lvl
                    .frobenius()
                    .iter()
                    .enumerate()
                    .all(|(lam, &z)| lvl.fiber_size(lam) * g.element_order(z) == g.order());
                LevelReport {
                    n: lvl.exponent(),
                    size: lvl.quandle().len(),
                    group_order: lvl.ray().order(),
                    axioms: verify_axioms(lvl.quandle(), sampling),
                    fiber_size_law,
                }
            })
            .collect()
    }

    pub fn to_json_value(&self) -> TowerJson {
        TowerJson {
            field: self.field().into(),
            p: IdealJson::from(&self.prime),
            bound: self.primes.bound(),
            exclusions: self.primes.exclusions().to_vec(),
            n: self.max_level(),
            faithful_level: self.faithful_level(),
            levels: self
                .levels
                .iter()
                .map(|l| QuandleJson::from_quandle(l.quandle()))
                .collect(),
            projections: self
                .projections
                .iter()
                .map(|p| p.morphism.map.iter().map(|&x| x as u32).collect())
                .collect(),
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(&self.to_json_value()).expect("serializable")
    }
}

/// Exchange form of a tower.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TowerJson {
    #[serde(rename = "K")]
    pub field: FieldJson,
    pub p: IdealJson,
    #[serde(rename = "B")]
    pub bound: u64,
    pub exclusions: Vec<u64>,
    #[serde(rename = "N")]
    pub n: u32,
    #[serde(rename = "faithfulLevel")]
    pub faithful_level: Option<u32>,
    pub levels: Vec<QuandleJson>,
    /// Element map of each projection `N+1 → N`.
    pub projections: Vec<Vec<u32>>,
}

pub fn faithful_level(orders: impl IntoIterator<Item = u64>) -> Option<u32> {
    orders
        .into_iter()
        .position(|o| o >= FAITHFUL_ORDER)
        .map(|i| i as u32 + 1)
}

/// Builds and checks the projection from `upper` onto `lower`.
fn project_levels(upper: &AbelianLevel, lower: &AbelianLevel) -> Result<TowerProjection> {
    let pi = level_projection(upper.ray(), lower.ray())?;
    let (gu, gl) = (upper.ray().group(), lower.ray().group());
    let group_map: Vec<usize> = (0..gu.order() as usize)
        .map(|x| gl.from_vec(&pi.apply(&gu.to_vec(x))))
        .collect();
    let du = upper.quandle().coset_data().expect("coset form");
    let dl = lower.quandle().coset_data().expect("coset form");
    let map: Vec<usize> = (0..upper.quandle().len())
        .map(|q| dl.element(du.fiber_of(q), group_map[du.rep(q)]))
        .collect();
    let mismatch = |what: &str| {
        Error::LevelMismatch(format!(
            "{what} at {} → {}",
            upper.exponent(),
            lower.exponent()
        ))
    };
    // well defined on cosets: H_λ maps into H'_λ
    for (fu, fl) in du.fibers().iter().zip(dl.fibers()) {
        if fu
            .h
            .iter()
            .any(|&h| fl.h.binary_search(&group_map[h]).is_err())
        {
            return Err(mismatch("coset map not well defined"));
        }
    }
    let morphism = QuandleMorphism {
        map,
        group_map: Some(group_map.clone()),
    };
    if !morphism.is_homomorphism(upper.quandle(), lower.quandle()) {
        return Err(mismatch("projection is not a quandle morphism"));
    }
    let commutes = (0..upper.quandle().len())
        .all(|q| lower.augmentation(morphism.apply(q)) == group_map[upper.augmentation(q)]);
    if !commutes {
        return Err(mismatch("projection does not commute with augmentations"));
    }
    Ok(TowerProjection {
        from: upper.exponent(),
        to: lower.exponent(),
        group_map,
        morphism,
    })
}

/// Levels `1..=n_max` with verified projections.
pub fn tower(p: &QuadIdeal, primes: &PrimeSet, n_max: u32) -> Result<QuandleTower> {
    if n_max == 0 {
        return Err(Error::LevelMismatch(
            "a tower needs at least one level".into(),
        ));
    }
    if let Some(l) = primes.primes().iter().find(|l| !l.is_coprime(p)) {
        return Err(Error::RamifiedPrime(super::prime_label(l)));
    }
    let mut levels = Vec::with_capacity(n_max as usize);
    for n in 1..=n_max {
        levels.push(abelian_level(ray_class_group(p, n, true)?, primes)?);
    }
    let projections = levels
        .windows(2)
        .map(|w| project_levels(&w[1], &w[0]))
        .collect::<Result<Vec<_>>>()?;
    Ok(QuandleTower {
        prime: *p,
        primes: primes.clone(),
        levels,
        projections,
    })
}
