//! Reconstruction at finite level: the group and orbits of a quandle, the
//! residue characteristic of the ramified prime, residue characteristics of
//! `𝓜` from reciprocity coordinates, and matchings between two quandles.

mod aut_report;
mod matching;
mod reciprocity;

use std::collections::BTreeSet;
use std::fmt;

use serde::{Serialize, Serializer};

use crate::arith::parse_element_label;
use crate::arith::QuandleTower;
use crate::error::{Error, Result};
use crate::ntheory::factorize;
use crate::perm::PermGroup;
use crate::quadfield::{split_prime, QuadField, QuadIdeal, SplitKind};
use crate::quandle::{inner_group, orbits, FiniteQuandle};

pub use aut_report::{
    aut_structure_report, fiber_exchange, is_automorphism, AutStructureReport, ExhaustiveAut,
    FiberExchange,
};
pub use matching::{
    evaluate_sigma, match_quandles, Diagnostic, GroundTruth, MatchReport, Observation,
    ShuffledObservation, SideSummary, Sigma, SigmaEvaluation,
};
pub use reciprocity::{
    detect_w, independence_demo, local_embedding, norm_sum_coordinates, reciprocity_coordinates,
    reciprocity_for_primes, recover_residue_char, recover_residue_chars, IndependenceDemo,
    LocalEmbedding, ReciprocityData, ResidueChar, WDetection,
};

/// Parameters of the log-based recovery steps.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct ReconstructParams {
    /// p-adic digits certified for every logarithm.
    pub precision: i64,
    /// Digits dropped before relation searches.
    pub guard: i64,
    /// Largest candidate residue characteristic.
    pub candidate_bound: u64,
    /// Height bound for rational relations.
    pub height: u64,
}

impl Default for ReconstructParams {
    fn default() -> Self {
        ReconstructParams {
            precision: 12,
            guard: 0,
            candidate_bound: 500,
            height: 1000,
        }
    }
}

/// The five cases for `(K, 𝔭)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Case {
    /// `K = Q`.
    Rational,
    /// `K` real quadratic, `e = f = 1`: `G` is finite.
    FiniteG,
    /// `K` real quadratic, `ef = 2`.
    RealQuadratic,
    /// `K` imaginary quadratic, `e = f = 1`.
    ComplexSplit,
    /// `K` imaginary quadratic, `ef = 2`.
    ComplexNonSplit,
}

impl Case {
    pub fn tag(&self) -> &'static str {
        match self {
            Case::Rational => "1",
            Case::FiniteG => "2-0",
            Case::RealQuadratic => "2-1",
            Case::ComplexSplit => "2-2",
            Case::ComplexNonSplit => "2-3",
        }
    }

    /// `R = dim V`; zero when `G` is finite.
    pub fn dim(&self) -> u32 {
        match self {
            Case::FiniteG => 0,
            Case::ComplexNonSplit => 2,
            _ => 1,
        }
    }

    pub fn from_tag(tag: &str) -> Option<Case> {
        [
            Case::Rational,
            Case::FiniteG,
            Case::RealQuadratic,
            Case::ComplexSplit,
            Case::ComplexNonSplit,
        ]
        .into_iter()
        .find(|c| c.tag() == tag)
    }
}

impl fmt::Display for Case {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.tag())
    }
}

impl Serialize for Case {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(self.tag())
    }
}

/// Case of `(K, 𝔭)`, read off from the splitting of the rational prime under `𝔭`.
pub fn classify_case(field: QuadField, p: &QuadIdeal) -> Result<Case> {
    if !p.is_prime() {
        return Err(Error::NotPrime(p.norm() as i64));
    }
    case_for_prime(field, crate::arith::rational_prime_below(p))
}

/// Case of `(K, 𝔭)` for any `𝔭` above the rational prime `p`.
pub fn case_for_prime(field: QuadField, p: u64) -> Result<Case> {
    if field.is_rational() {
        return Ok(Case::Rational);
    }
    let split = split_prime(field, p)?.kind == SplitKind::Split;
    Ok(match (field.is_real(), split) {
        (true, true) => Case::FiniteG,
        (true, false) => Case::RealQuadratic,
        (false, true) => Case::ComplexSplit,
        (false, false) => Case::ComplexNonSplit,
    })
}

/// `⟨s_x⟩` with the finite-level density report.
#[derive(Debug, Clone)]
pub struct GroupRecovery {
    /// `Inn(Q)`, generated by the maps `s_x`.
    pub inn: PermGroup,
    /// Sets on which transitivity was tested: the label fibers when the
    /// quandle carries coset data or labels, else the orbits.
    pub fibers: Vec<Vec<usize>>,
    pub transitive: Vec<bool>,
    /// For abelian coset quandles, the subgroup `⟨z_λ⟩` of the structure
    /// group generated by the augmentation.
    pub augmented: Option<AugmentedGroup>,
}

/// `⟨z_λ⟩ ≤ G` and the kernel `⋂ H_λ` of its action on `Q`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AugmentedGroup {
    pub structure_order: u64,
    /// Element indices of `⟨z_λ⟩` in the structure group.
    pub elements: Vec<usize>,
    pub kernel_order: u64,
}

impl AugmentedGroup {
    pub fn order(&self) -> u64 {
        self.elements.len() as u64
    }

    /// `⟨z_λ⟩ = G`.
    pub fn generates(&self) -> bool {
        self.order() == self.structure_order
    }

    /// `Inn(Q) ≅ G`: the Frobenius elements generate and act faithfully.
    pub fn is_isomorphic_to_inn(&self) -> bool {
        self.generates() && self.kernel_order == 1
    }
}

impl GroupRecovery {
    pub fn order(&self) -> usize {
        self.inn.order()
    }

    pub fn is_dense(&self) -> bool {
        self.transitive.iter().all(|&t| t)
    }
}

/// Fibers from coset data, or from `name/index` labels.
fn label_fibers(q: &FiniteQuandle) -> Option<Vec<Vec<usize>>> {
    if let Some(d) = q.coset_data() {
        return Some(
            (0..d.fibers().len())
                .map(|l| d.fiber_range(l).collect())
                .collect(),
        );
    }
    let labels = q.labels()?;
    let mut names: Vec<&str> = Vec::new();
    let mut fibers: Vec<Vec<usize>> = Vec::new();
    for (i, l) in labels.iter().enumerate() {
        let (name, _) = parse_element_label(l)?;
        match names.iter().position(|&n| n == name) {
            Some(k) => fibers[k].push(i),
            None => {
                names.push(name);
                fibers.push(vec![i]);
            }
        }
    }
    Some(fibers)
}

fn augmented_group(q: &FiniteQuandle) -> Option<AugmentedGroup> {
    let d = q.coset_data()?;
    let g = d.group();
    if !g.is_abelian() {
        return None;
    }
    let z: Vec<usize> = d.fibers().iter().map(|f| f.z).collect();
    let elements = g.subgroup(&z);
    let kernel_order = (0..g.order())
        .filter(|&x| d.fibers().iter().all(|f| f.h.binary_search(&x).is_ok()))
        .count() as u64;
    Some(AugmentedGroup {
        structure_order: g.order() as u64,
        elements,
        kernel_order,
    })
}

pub fn recover_group(q: &FiniteQuandle) -> GroupRecovery {
    let inn = inner_group(q).inn;
    let fibers = label_fibers(q).unwrap_or_else(|| orbits(q));
    let transitive = fibers.iter().map(|f| inn.is_transitive_on(f)).collect();
    GroupRecovery {
        inn,
        fibers,
        transitive,
        augmented: augmented_group(q),
    }
}

/// Orbits of `Inn(Q)` and their comparison with the label fibers.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OrbitRecovery {
    pub orbits: Vec<Vec<usize>>,
    /// `None` when the quandle carries no fiber information.
    pub matches_fibers: Option<bool>,
}

pub fn recover_orbits(q: &FiniteQuandle) -> OrbitRecovery {
    let orbits = orbits(q);
    let matches_fibers = label_fibers(q).map(|fibers| {
        let mut fibers: Vec<Vec<usize>> = fibers
            .into_iter()
            .map(|mut f| {
                f.sort_unstable();
                f
            })
            .collect();
        fibers.sort();
        fibers == orbits
    });
    OrbitRecovery {
        orbits,
        matches_fibers,
    }
}

/// One row of the growth table: the order of the group used at a level and
/// its Sylow orders.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct GrowthRow {
    pub level: u32,
    pub order: u64,
    /// `(q, |Sylow-q|)` for every prime `q` dividing some order in the tower.
    pub sylow: Vec<(u64, u64)>,
    /// `|Inn(Q_N)|`, reported alongside when `order` is the augmented group.
    #[serde(rename = "innOrder")]
    pub inn_order: u64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PRecovery {
    pub p: u64,
    pub growth: Vec<GrowthRow>,
    /// First level at which the Sylow-p order stops growing, if it does.
    pub saturation: Option<u32>,
}

impl PRecovery {
    /// `|Sylow-p|` at each level.
    pub fn sylow_orders(&self) -> Vec<u64> {
        self.growth.iter().map(|r| sylow_of(r, self.p)).collect()
    }

    /// `log_p` of the Sylow growth over the last growing step.
    pub fn growth_exponent(&self) -> u32 {
        let s = self.sylow_orders();
        let top = self.saturation.map_or(s.len(), |n| n as usize - 1);
        let (a, b) = (s[top - 2], s[top - 1]);
        let mut k = 0;
        let mut x = b / a;
        while x > 1 {
            x /= self.p;
            k += 1;
        }
        k
    }
}

fn sylow_of(row: &GrowthRow, q: u64) -> u64 {
    row.sylow.iter().find(|(r, _)| *r == q).map_or(1, |s| s.1)
}

fn q_part(mut n: u64, q: u64) -> u64 {
    let mut part = 1;
    while n % q == 0 {
        n /= q;
        part *= q;
    }
    part
}

fn rows(orders: &[(u64, u64)]) -> Vec<GrowthRow> {
    let primes: BTreeSet<u64> = orders
        .iter()
        .flat_map(|&(o, _)| factorize(o).into_iter().map(|(q, _)| q))
        .collect();
    orders
        .iter()
        .enumerate()
        .map(|(i, &(order, inn_order))| GrowthRow {
            level: i as u32 + 1,
            order,
            sylow: primes.iter().map(|&q| (q, q_part(order, q))).collect(),
            inn_order,
        })
        .collect()
}

/// Growth table of `Inn(Q_N)` over the given levels (in increasing order).
pub fn growth_table(levels: &[FiniteQuandle]) -> Vec<GrowthRow> {
    let orders: Vec<(u64, u64)> = levels
        .iter()
        .map(|q| {
            let o = inner_group(q).inn.order() as u64;
            (o, o)
        })
        .collect();
    rows(&orders)
}

fn need_three(n: usize) -> Result<()> {
    if n < 3 {
        return Err(Error::LevelMismatch(format!(
            "recover_p needs at least 3 levels, got {n}"
        )));
    }
    Ok(())
}

/// The unique prime whose Sylow subgroup of `⟨z_λ⟩ ≤ G_N` grows strictly at
/// every level of a built tower.
pub fn recover_p(tower: &QuandleTower) -> Result<PRecovery> {
    need_three(tower.levels().len())?;
    let orders: Vec<(u64, u64)> = tower
        .levels()
        .iter()
        .map(|l| {
            let aug =
                augmented_group(l.quandle()).expect("tower levels are abelian coset quandles");
            (aug.order(), inner_group(l.quandle()).inn.order() as u64)
        })
        .collect();
    let growth = rows(&orders);
    let growing: Vec<u64> = growth[0]
        .sylow
        .iter()
        .map(|s| s.0)
        .filter(|&q| {
            growth
                .windows(2)
                .all(|w| sylow_of(&w[1], q) > sylow_of(&w[0], q))
        })
        .collect();
    match growing.as_slice() {
        [] => Err(Error::FiniteGroup),
        [p] => Ok(PRecovery {
            p: *p,
            growth,
            saturation: None,
        }),
        _ => Err(Error::Inconclusive(format!(
            "several primes grow: {growing:?}"
        ))),
    }
}

/// `recover_p` from unlabeled levels, using `Inn(Q_N)` only.
///
/// With finitely many primes `Inn(Q_N) = G_N/⋂⟨z_λ⟩` stops growing once the
/// kernel becomes visible, so the rule is: exactly one prime grows from
/// level 1 to level 2, its Sylow order never decreases, and no other prime
/// grows afterwards.
pub fn recover_p_unlabeled(levels: &[FiniteQuandle]) -> Result<PRecovery> {
    need_three(levels.len())?;
    let growth = growth_table(levels);
    let starts: Vec<u64> = growth[0]
        .sylow
        .iter()
        .map(|s| s.0)
        .filter(|&q| sylow_of(&growth[1], q) > sylow_of(&growth[0], q))
        .collect();
    let [p] = starts.as_slice() else {
        return match starts.len() {
            0 => Err(Error::FiniteGroup),
            _ => Err(Error::Inconclusive(format!(
                "several primes grow: {starts:?}"
            ))),
        };
    };
    let p = *p;
    let monotone = growth
        .windows(2)
        .all(|w| sylow_of(&w[1], p) >= sylow_of(&w[0], p));
    let others_flat = growth[0].sylow.iter().filter(|s| s.0 != p).all(|s| {
        growth
            .windows(2)
            .all(|w| sylow_of(&w[1], s.0) == sylow_of(&w[0], s.0))
    });
    if !monotone || !others_flat {
        return Err(Error::Inconclusive(
            "growth table is not of p-power type".into(),
        ));
    }
    let saturation = growth
        .windows(2)
        .find(|w| sylow_of(&w[1], p) == sylow_of(&w[0], p))
        .map(|w| w[1].level);
    Ok(PRecovery {
        p,
        growth,
        saturation,
    })
}
