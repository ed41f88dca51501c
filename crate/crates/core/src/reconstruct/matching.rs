use std::collections::BTreeMap;
use std::fmt;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Serialize, Serializer};

use crate::arith::{prime_label, rational_prime_below, QuandleTower};
use crate::error::{Error, Result};
use crate::ntheory::{is_squarefree, kronecker};
use crate::padic::LocalElement;
use crate::perm::Perm;
use crate::quadfield::QuadIdeal;
use crate::quandle::{orbits, FiniteQuandle};

use super::reciprocity::{
    detect_w, norm_sum_coordinates, reciprocity_coordinates, recover_residue_chars,
};
use super::{recover_group, recover_p_unlabeled, Case, GrowthRow, ReconstructParams};

/// What the matcher sees of one side: unlabeled levels `1..N`, the
/// projections between them, and the reciprocity value of every element of
/// the top level.
#[derive(Debug, Clone)]
pub struct Observation {
    pub levels: Vec<FiniteQuandle>,
    /// `projections[i][x]` is the image in level `i + 1` of element `x` of
    /// level `i + 2`.
    pub projections: Vec<Vec<u32>>,
    pub reciprocity: Option<Vec<LocalElement>>,
}

/// The prime of `𝓜` under each top-level element, kept apart from the data.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GroundTruth {
    pub primes: Vec<QuadIdeal>,
}

impl GroundTruth {
    /// The same data under labels `𝔩 ↦ 𝔩̄`.
    pub fn conjugated(&self) -> GroundTruth {
        GroundTruth {
            primes: self.primes.iter().map(|l| l.conj()).collect(),
        }
    }

    fn permuted(&self, perm: &Perm) -> GroundTruth {
        GroundTruth {
            primes: transport(&self.primes, perm),
        }
    }
}

/// `new[perm(i)] = old[i]`.
fn transport<T: Clone>(old: &[T], perm: &Perm) -> Vec<T> {
    let inv = perm.inverse();
    (0..old.len()).map(|j| old[inv.apply(j)].clone()).collect()
}

impl Observation {
    /// Label-stripped observation of a built tower, with reciprocity values
    /// to `precision` digits.
    pub fn from_tower(tower: &QuandleTower, precision: i64) -> Result<(Observation, GroundTruth)> {
        let (mut obs, truth) = Self::without_reciprocity(tower);
        let top = tower.level(tower.max_level());
        let data = reciprocity_coordinates(top, precision)?;
        obs.reciprocity = Some(
            (0..top.quandle().len())
                .map(|q| data.values[top.fiber_of(q)].clone())
                .collect(),
        );
        Ok((obs, truth))
    }

    /// Levels and projections only.
    pub fn without_reciprocity(tower: &QuandleTower) -> (Observation, GroundTruth) {
        let levels = tower
            .levels()
            .iter()
            .map(|l| l.quandle().clone().without_labels())
            .collect();
        let projections = tower
            .projections()
            .iter()
            .map(|pr| {
                let size = tower.level(pr.from).quandle().len();
                (0..size).map(|x| pr.morphism.apply(x) as u32).collect()
            })
            .collect();
        let top = tower.level(tower.max_level());
        let truth = GroundTruth {
            primes: (0..top.quandle().len())
                .map(|q| top.primes()[top.fiber_of(q)])
                .collect(),
        };
        (
            Observation {
                levels,
                projections,
                reciprocity: None,
            },
            truth,
        )
    }

    pub fn top(&self) -> &FiniteQuandle {
        self.levels.last().expect("at least one level")
    }

    /// Renames the elements of every level by a seeded random permutation.
    pub fn shuffled(&self, truth: &GroundTruth, seed: u64) -> ShuffledObservation {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let perms: Vec<Perm> = self
            .levels
            .iter()
            .map(|q| {
                let mut v: Vec<u32> = (0..q.len() as u32).collect();
                v.shuffle(&mut rng);
                Perm(v)
            })
            .collect();
        let levels = self
            .levels
            .iter()
            .zip(&perms)
            .map(|(q, p)| q.relabeled(p))
            .collect();
        let projections = self
            .projections
            .iter()
            .enumerate()
            .map(|(i, proj)| {
                let (upper, lower) = (&perms[i + 1], &perms[i]);
                let moved = transport(proj, upper);
                moved
                    .iter()
                    .map(|&x| lower.apply(x as usize) as u32)
                    .collect()
            })
            .collect();
        let top = perms.last().expect("at least one level");
        ShuffledObservation {
            observation: Observation {
                levels,
                projections,
                reciprocity: self.reciprocity.as_ref().map(|r| transport(r, top)),
            },
            truth: truth.permuted(top),
            perms,
        }
    }
}

/// A shuffled observation with its ground truth moved along.
#[derive(Debug, Clone)]
pub struct ShuffledObservation {
    pub observation: Observation,
    pub truth: GroundTruth,
    /// `perms[i]` renames old element `x` of level `i + 1` to `perms[i](x)`.
    pub perms: Vec<Perm>,
}

/// Which field automorphism induces the matching.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Sigma {
    Identity,
    Conjugation,
    UndeterminedRealQuadratic,
}

impl Sigma {
    pub fn as_str(&self) -> &'static str {
        match self {
            Sigma::Identity => "identity",
            Sigma::Conjugation => "conjugation",
            Sigma::UndeterminedRealQuadratic => "undetermined(real-quadratic)",
        }
    }
}

impl fmt::Display for Sigma {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl Serialize for Sigma {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(self.as_str())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Diagnostic {
    pub kind: String,
    pub message: String,
    /// Errors stop the matching; notes do not.
    pub fatal: bool,
}

impl Diagnostic {
    fn from_error(e: &Error) -> Self {
        let (kind, fatal) = match e {
            Error::GroupMismatch(_) => ("group mismatch", true),
            Error::CaseMismatch(_) => ("case mismatch", true),
            Error::UnmatchedFiber(_) => ("unmatched fiber", true),
            Error::FiniteGroup => ("finite-G", true),
            Error::Inconclusive(_) => ("inconclusive", false),
            _ => ("error", true),
        };
        Diagnostic {
            kind: kind.into(),
            message: e.to_string(),
            fatal,
        }
    }

    fn note(kind: &str, message: String) -> Self {
        Diagnostic {
            kind: kind.into(),
            message,
            fatal: false,
        }
    }
}

/// What the pipeline recovered from one side.
#[derive(Debug, Clone, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct SideSummary {
    pub p: Option<u64>,
    pub growth_table: Vec<GrowthRow>,
    pub saturation: Option<u32>,
    pub dim: Option<u32>,
    pub case: Option<Case>,
    /// Smallest element of each orbit of the top level; fiber ids index this.
    pub fibers: Vec<usize>,
    pub fiber_sizes: Vec<usize>,
    pub transitive: bool,
    pub residue_chars: Vec<Option<u64>>,
    /// Fiber pairing `𝔩 ↦ 𝔩̄` (case 2-3).
    pub pairing: Option<Vec<Option<usize>>>,
    /// Smallest `|D|` fundamental discriminant consistent with the splitting
    /// pattern of the residue characteristics (R = 1 with ties).
    pub discriminant: Option<i64>,
    #[serde(skip)]
    values: Vec<LocalElement>,
}

#[derive(Debug, Clone, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct MatchReport {
    pub case: Option<Case>,
    pub p: Option<u64>,
    pub growth_table: Vec<GrowthRow>,
    pub matching: Vec<(usize, usize)>,
    pub sigma: Option<Sigma>,
    pub diagnostics: Vec<Diagnostic>,
    /// Consistent matchings found besides the reported one.
    pub alternatives: usize,
    /// Fibers whose image was chosen among equal values.
    pub tied_fibers: usize,
    pub sides: [SideSummary; 2],
}

impl MatchReport {
    pub fn is_ok(&self) -> bool {
        self.diagnostics.iter().all(|d| !d.fatal) && !self.matching.is_empty()
    }

    pub fn has(&self, kind: &str) -> bool {
        self.diagnostics.iter().any(|d| d.kind == kind)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }
}

/// Values agree to the known digits, less the guard.
fn agree(x: &LocalElement, y: &LocalElement, guard: i64) -> bool {
    match x.sub(y) {
        Ok(d) => d.precision() - guard >= 3 && d.valuation_bound() >= d.precision() - guard,
        Err(_) => false,
    }
}

/// `Q_p`-coordinates of a value of `V`.
fn coords(x: &LocalElement) -> (LocalElement, LocalElement) {
    if x.field().is_trivial() {
        (x.clone(), LocalElement::zero(x.field(), x.precision()))
    } else {
        x.trace_coordinates()
    }
}

fn det(x: &LocalElement, y: &LocalElement) -> Result<LocalElement> {
    let ((a, b), (c, d)) = (coords(x), coords(y));
    a.mul(&d)?.sub(&b.mul(&c)?)
}

fn summarize(
    obs: &Observation,
    params: &ReconstructParams,
    diags: &mut Vec<Diagnostic>,
    side: &str,
) -> SideSummary {
    let mut s = SideSummary {
        p: None,
        growth_table: Vec::new(),
        saturation: None,
        dim: None,
        case: None,
        fibers: Vec::new(),
        fiber_sizes: Vec::new(),
        transitive: false,
        residue_chars: Vec::new(),
        pairing: None,
        discriminant: None,
        values: Vec::new(),
    };
    let fail = |e: Error, diags: &mut Vec<Diagnostic>| {
        let mut d = Diagnostic::from_error(&e);
        d.message = format!("{side}: {}", d.message);
        diags.push(d);
    };
    for (i, proj) in obs.projections.iter().enumerate() {
        if !is_projection(&obs.levels[i + 1], &obs.levels[i], proj) {
            fail(
                Error::LevelMismatch(format!(
                    "projection {} → {} is not a morphism",
                    i + 2,
                    i + 1
                )),
                diags,
            );
        }
    }
    match recover_p_unlabeled(&obs.levels) {
        Ok(r) => {
            s.p = Some(r.p);
            s.saturation = r.saturation;
            s.growth_table = r.growth;
        }
        Err(e) => {
            s.growth_table = super::growth_table(&obs.levels);
            fail(e, diags);
        }
    }
    let top = obs.top();
    let group = recover_group(top);
    s.transitive = group.is_dense();
    let orbs = orbits(top);
    s.fibers = orbs.iter().map(|o| o[0]).collect();
    s.fiber_sizes = orbs.iter().map(Vec::len).collect();
    let Some(r) = &obs.reciprocity else {
        return s;
    };
    // r is a function of the fiber; equal s_x need not give equal r once
    // G → Inn(Q) has a kernel
    for o in &orbs {
        if let Some(&x) = o.iter().find(|&&x| !agree(&r[x], &r[o[0]], params.guard)) {
            fail(
                Error::Format(format!(
                    "reciprocity value of element {x} is inconsistent with the table"
                )),
                diags,
            );
            return s;
        }
    }
    s.values = s.fibers.iter().map(|&x| r[x].clone()).collect();
    s.dim = Some(if s.values[0].field().is_trivial() {
        1
    } else {
        2
    });
    let scalars: Vec<Option<LocalElement>> = if s.dim == Some(2) {
        match detect_w(&s.values, params).and_then(|w| {
            s.pairing = Some(w.partner.clone());
            norm_sum_coordinates(&s.values, &w)
        }) {
            Ok(ns) => ns,
            Err(e) => {
                fail(e, diags);
                vec![None; s.values.len()]
            }
        }
    } else {
        s.values.iter().cloned().map(Some).collect()
    };
    let chars = recover_residue_chars(&scalars, params);
    let failed = chars.iter().filter(|c| c.is_err()).count();
    if failed > 0 {
        let first = chars
            .iter()
            .find_map(|c| c.as_ref().err())
            .expect("failure");
        diags.push(Diagnostic::note(
            "inconclusive",
            format!("{side}: residue characteristic not determined for {failed} of {} fibers; first: {first}", chars.len()),
        ));
    }
    s.residue_chars = chars.into_iter().map(|c| c.ok().map(|c| c.l)).collect();
    s.case = Some(infer_case(&s, params));
    if s.case == Some(Case::RealQuadratic) {
        s.discriminant = guess_discriminant(&s);
    }
    s
}

fn is_projection(upper: &FiniteQuandle, lower: &FiniteQuandle, proj: &[u32]) -> bool {
    let n = upper.len();
    if proj.len() != n || proj.iter().any(|&x| x as usize >= lower.len()) {
        return false;
    }
    // exhaustive up to 4·10^6 pairs, strided beyond
    let stride = ((n * n) / 4_000_000).max(1);
    (0..n).all(|x| {
        (0..n)
            .step_by(stride)
            .all(|y| proj[upper.op(x, y)] as usize == lower.op(proj[x] as usize, proj[y] as usize))
    })
}

/// Fibers `i` with another fiber carrying an equal value.
fn tie_classes(values: &[LocalElement], guard: i64) -> Vec<Vec<usize>> {
    let mut classes: Vec<Vec<usize>> = Vec::new();
    for (i, x) in values.iter().enumerate() {
        match classes.iter_mut().find(|c| agree(&values[c[0]], x, guard)) {
            Some(c) => c.push(i),
            None => classes.push(vec![i]),
        }
    }
    classes
}

fn infer_case(s: &SideSummary, params: &ReconstructParams) -> Case {
    if s.dim == Some(2) {
        return Case::ComplexNonSplit;
    }
    if tie_classes(&s.values, params.guard)
        .iter()
        .any(|c| c.len() > 1)
    {
        return Case::RealQuadratic;
    }
    if s.residue_chars.iter().all(Option::is_some) {
        Case::Rational
    } else {
        // logs of generators of split primes are not rational multiples of ln l
        Case::ComplexSplit
    }
}

fn guess_discriminant(s: &SideSummary) -> Option<i64> {
    let mut count: BTreeMap<u64, usize> = BTreeMap::new();
    for l in s.residue_chars.iter().flatten() {
        *count.entry(*l).or_default() += 1;
    }
    if count.is_empty() {
        return None;
    }
    let p = s.p?;
    (2i64..1000).find(|&d| {
        is_fundamental(d)
            && kronecker(d as i128, p as i128) != 1
            && count
                .iter()
                .all(|(&l, &c)| (kronecker(d as i128, l as i128) == 1) == (c == 2))
    })
}

fn is_fundamental(d: i64) -> bool {
    match d.rem_euclid(4) {
        1 => is_squarefree(d),
        0 => {
            let m = d / 4;
            matches!(m.rem_euclid(4), 2 | 3) && is_squarefree(m)
        }
        _ => false,
    }
}

/// One consistent fiber matching with the scalar or linear map it came from.
struct Candidate {
    matching: Vec<usize>,
    ties: usize,
    identity: bool,
}

/// Assigns each fiber of `a` a fiber of `b` from the predicate, resolving
/// equal values in order. `None` if some fiber has no partner or the
/// equal-value groups do not correspond.
fn assign(
    n: usize,
    fits: impl Fn(usize, usize) -> bool,
    sizes: (&[usize], &[usize]),
) -> Option<(Vec<usize>, usize)> {
    let mut used = vec![false; n];
    let mut matching = Vec::with_capacity(n);
    let mut ties = 0;
    for f in 0..n {
        let options: Vec<usize> = (0..n)
            .filter(|&g| fits(f, g) && sizes.0[f] == sizes.1[g])
            .collect();
        if options.len() > 1 {
            ties += 1;
        }
        let g = *options.iter().find(|&&g| !used[g])?;
        used[g] = true;
        matching.push(g);
    }
    Some((matching, ties))
}

fn same_class(a: &SideSummary, b: &SideSummary, f: usize, g: usize) -> bool {
    match (a.residue_chars.get(f), b.residue_chars.get(g)) {
        (Some(Some(x)), Some(Some(y))) => x == y,
        _ => true,
    }
}

fn candidates_r1(
    a: &SideSummary,
    b: &SideSummary,
    params: &ReconstructParams,
) -> Result<Vec<Candidate>> {
    let n = a.values.len();
    let f0 = (0..n)
        .filter(|&f| !a.values[f].is_zero())
        .min_by_key(|&f| a.values[f].valuation())
        .ok_or_else(|| Error::Inconclusive("all reciprocity values vanish".into()))?;
    let mut out = Vec::new();
    for g0 in 0..n {
        if !same_class(a, b, f0, g0) || b.values[g0].is_zero() {
            continue;
        }
        // ψ = r'(g0)/r(f0): r'(g)·r(f0) = r(f)·r'(g0)
        let lhs: Vec<LocalElement> = b
            .values
            .iter()
            .map(|y| y.mul(&a.values[f0]))
            .collect::<Result<_>>()?;
        let rhs: Vec<LocalElement> = a
            .values
            .iter()
            .map(|x| x.mul(&b.values[g0]))
            .collect::<Result<_>>()?;
        let fits =
            |f: usize, g: usize| same_class(a, b, f, g) && agree(&lhs[g], &rhs[f], params.guard);
        if let Some((matching, ties)) = assign(n, fits, (&a.fiber_sizes, &b.fiber_sizes)) {
            let identity = agree(&a.values[f0], &b.values[g0], params.guard);
            out.push(Candidate {
                matching,
                ties,
                identity,
            });
        }
    }
    Ok(out)
}

fn candidates_r2(
    a: &SideSummary,
    b: &SideSummary,
    params: &ReconstructParams,
) -> Result<Vec<Candidate>> {
    let n = a.values.len();
    // anchors: the pair with the least det valuation
    let mut best: Option<(i64, usize, usize, LocalElement)> = None;
    for f1 in 0..n {
        for f2 in f1 + 1..n {
            let d = det(&a.values[f1], &a.values[f2])?;
            if let Some(v) = d.valuation() {
                if best.as_ref().is_none_or(|b| v < b.0) {
                    best = Some((v, f1, f2, d));
                }
            }
        }
    }
    let (_, f1, f2, dd) =
        best.ok_or_else(|| Error::Inconclusive("reciprocity values span a line".into()))?;
    // r(f) = (det(r f, r f2)·r(f1) + det(r f1, r f)·r(f2)) / D
    let weights: Vec<(LocalElement, LocalElement)> = a
        .values
        .iter()
        .map(|x| Ok((det(x, &a.values[f2])?, det(&a.values[f1], x)?)))
        .collect::<Result<_>>()?;
    let bc: Vec<(LocalElement, LocalElement)> = b.values.iter().map(coords).collect();
    let scaled: Vec<(LocalElement, LocalElement)> = bc
        .iter()
        .map(|(x, y)| Ok((x.mul(&dd)?, y.mul(&dd)?)))
        .collect::<Result<_>>()?;
    let mut out = Vec::new();
    for g1 in 0..n {
        for g2 in 0..n {
            if g1 == g2 || !same_class(a, b, f1, g1) || !same_class(a, b, f2, g2) {
                continue;
            }
            let image: Vec<(LocalElement, LocalElement)> = weights
                .iter()
                .map(|(w1, w2)| {
                    Ok((
                        w1.mul(&bc[g1].0)?.add(&w2.mul(&bc[g2].0)?)?,
                        w1.mul(&bc[g1].1)?.add(&w2.mul(&bc[g2].1)?)?,
                    ))
                })
                .collect::<Result<_>>()?;
            let fits = |f: usize, g: usize| {
                same_class(a, b, f, g)
                    && agree(&scaled[g].0, &image[f].0, params.guard)
                    && agree(&scaled[g].1, &image[f].1, params.guard)
            };
            if let Some((matching, ties)) = assign(n, fits, (&a.fiber_sizes, &b.fiber_sizes)) {
                let identity = agree(&a.values[f1], &b.values[g1], params.guard)
                    && agree(&a.values[f2], &b.values[g2], params.guard);
                out.push(Candidate {
                    matching,
                    ties,
                    identity,
                });
            }
        }
    }
    Ok(out)
}

/// Runs the recovery pipeline on both sides and matches fibers by the
/// reciprocity relation `r'∘φ = ψ∘r`.
///
/// Fiber ids in the report are orbit indices, orbits being ordered by their
/// smallest element.
pub fn match_quandles(a: &Observation, b: &Observation, params: &ReconstructParams) -> MatchReport {
    let mut diagnostics = Vec::new();
    let sa = summarize(a, params, &mut diagnostics, "Q");
    let sb = summarize(b, params, &mut diagnostics, "Q′");
    let mut report = MatchReport {
        case: sa.case,
        p: sa.p,
        growth_table: sa.growth_table.clone(),
        matching: Vec::new(),
        sigma: None,
        diagnostics,
        alternatives: 0,
        tied_fibers: 0,
        sides: [sa, sb],
    };
    if let Err(e) = compare(&report.sides[0], &report.sides[1]) {
        report.diagnostics.push(Diagnostic::from_error(&e));
    }
    if report.diagnostics.iter().any(|d| d.fatal) {
        return report;
    }
    let [sa, sb] = &report.sides;
    if sa.values.is_empty() {
        report.diagnostics.push(Diagnostic::note(
            "inconclusive",
            "no reciprocity data; fibers not matched".into(),
        ));
        return report;
    }
    let cands = if sa.dim == Some(2) {
        candidates_r2(sa, sb, params)
    } else {
        candidates_r1(sa, sb, params)
    };
    let mut cands = match cands {
        Ok(c) => c,
        Err(e) => {
            report.diagnostics.push(Diagnostic::from_error(&e));
            return report;
        }
    };
    // matchings differing only inside equal-value groups are one candidate
    cands.dedup_by(|x, y| x.matching == y.matching);
    let mut distinct: Vec<Candidate> = Vec::new();
    for c in cands {
        if !distinct.iter().any(|d| d.matching == c.matching) {
            distinct.push(c);
        }
    }
    let Some(pos) = distinct
        .iter()
        .position(|c| c.identity)
        .or(if distinct.is_empty() { None } else { Some(0) })
    else {
        report
            .diagnostics
            .push(Diagnostic::from_error(&Error::UnmatchedFiber(
                "no reciprocity-compatible fiber bijection".into(),
            )));
        return report;
    };
    let chosen = distinct.swap_remove(pos);
    report.alternatives = distinct.len();
    report.tied_fibers = chosen.ties;
    report.matching = chosen
        .matching
        .iter()
        .enumerate()
        .map(|(f, &g)| (f, g))
        .collect();
    if let Some(f) = report.matching.iter().find(|&&(f, g)| {
        matches!((&sa.residue_chars[f], &sb.residue_chars[g]), (Some(x), Some(y)) if x != y)
    }) {
        report.diagnostics.push(Diagnostic::from_error(&Error::UnmatchedFiber(format!(
            "fiber {} matched across residue characteristics",
            f.0
        ))));
    }
    report.sigma = Some(if sa.case == Some(Case::RealQuadratic) && chosen.ties > 0 {
        Sigma::UndeterminedRealQuadratic
    } else {
        Sigma::Identity
    });
    report
}

fn compare(a: &SideSummary, b: &SideSummary) -> Result<()> {
    if a.p != b.p {
        return Err(Error::GroupMismatch(format!(
            "p = {:?} against p′ = {:?}",
            a.p, b.p
        )));
    }
    let orders = |s: &SideSummary| {
        s.growth_table
            .iter()
            .map(|r| r.inn_order)
            .collect::<Vec<_>>()
    };
    if orders(a) != orders(b) {
        return Err(Error::GroupMismatch(format!(
            "Inn orders {:?} against {:?}",
            orders(a),
            orders(b)
        )));
    }
    let mut sizes = (a.fiber_sizes.clone(), b.fiber_sizes.clone());
    sizes.0.sort_unstable();
    sizes.1.sort_unstable();
    if sizes.0 != sizes.1 {
        return Err(Error::GroupMismatch(format!(
            "{} orbits against {}",
            a.fiber_sizes.len(),
            b.fiber_sizes.len()
        )));
    }
    if a.dim != b.dim || a.case != b.case {
        return Err(Error::CaseMismatch(format!(
            "case {} against {}",
            a.case.map_or("?".into(), |c| c.to_string()),
            b.case.map_or("?".into(), |c| c.to_string())
        )));
    }
    Ok(())
}

/// The matching read against ground-truth labels.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct SigmaEvaluation {
    pub sigma: Option<Sigma>,
    pub label_identity: bool,
    pub label_conjugation: bool,
    pub residue_chars_preserved: bool,
    /// The conjugation matching, which the reconstruction cannot exclude.
    pub allowed_ambiguity: bool,
    /// `(label, label′)` for each matched pair.
    pub pairs: Vec<(String, String)>,
}

/// Classifies a report's matching against the labels of both sides.
pub fn evaluate_sigma(report: &MatchReport, a: &GroundTruth, b: &GroundTruth) -> SigmaEvaluation {
    let pairs: Vec<(QuadIdeal, QuadIdeal)> = report
        .matching
        .iter()
        .map(|&(f, g)| {
            (
                a.primes[report.sides[0].fibers[f]],
                b.primes[report.sides[1].fibers[g]],
            )
        })
        .collect();
    let nonempty = !pairs.is_empty();
    let label_identity = nonempty && pairs.iter().all(|(x, y)| x == y);
    let label_conjugation = nonempty && pairs.iter().all(|(x, y)| x.conj() == *y);
    let residue_chars_preserved = nonempty
        && pairs
            .iter()
            .all(|(x, y)| rational_prime_below(x) == rational_prime_below(y));
    let sigma = match report.sigma {
        Some(Sigma::UndeterminedRealQuadratic) => Some(Sigma::UndeterminedRealQuadratic),
        _ if label_identity => Some(Sigma::Identity),
        _ if label_conjugation => Some(Sigma::Conjugation),
        _ => None,
    };
    SigmaEvaluation {
        sigma,
        label_identity,
        label_conjugation,
        residue_chars_preserved,
        allowed_ambiguity: sigma == Some(Sigma::Conjugation),
        pairs: pairs
            .iter()
            .map(|(x, y)| (prime_label(x), prime_label(y)))
            .collect(),
    }
}
