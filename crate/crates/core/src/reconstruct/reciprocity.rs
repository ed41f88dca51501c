use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};
use serde::Serialize;

use crate::arith::{prime_label, rational_prime_below, AbelianLevel};
use crate::error::{Error, Result};
use crate::ntheory::{lcm, primes_up_to};
use crate::padic::{
    padic_log_exact, qp_rank, rational_ratio, working_precision, Ext, LocalElement, LocalField,
};
use crate::quadfield::{ideal_power_class_exponent, QuadElement, QuadField, QuadIdeal};

use super::{classify_case, Case, ReconstructParams};

/// The completion `K_𝔭` with the embedding `O_K → O_𝔭` in coordinates.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LocalEmbedding {
    field: QuadField,
    prime: QuadIdeal,
    local: LocalField,
    /// Image of `ω` modulo `p^digits` when `K_𝔭 = Q_p` and `K ≠ Q`.
    root: Option<BigInt>,
    digits: u32,
}

impl LocalEmbedding {
    pub fn local_field(&self) -> LocalField {
        self.local
    }

    pub fn prime(&self) -> &QuadIdeal {
        &self.prime
    }

    /// Coordinates `(a, b)` of the image of `α` in `K_𝔭 = Q_p(√m)`, or
    /// `(a, 0)` when `K_𝔭 = Q_p`.
    pub fn embed(&self, alpha: &QuadElement<BigInt>) -> Result<(BigInt, BigInt)> {
        let (x, y) = alpha
            .integral_coords()
            .ok_or_else(|| Error::Format(format!("{alpha:?} is not integral")))?;
        let modulus = num_traits::pow(BigInt::from(self.local.p()), self.digits as usize);
        if self.field.is_rational() {
            return Ok((x.mod_floor(&modulus), BigInt::zero()));
        }
        if let Some(r) = &self.root {
            return Ok(((x + y * r).mod_floor(&modulus), BigInt::zero()));
        }
        if self.field.half_integral() {
            // x + y(1+√m)/2 = (x + y/2) + (y/2)√m
            let inv2 = (&modulus + 1u32) / 2u32;
            let half_y = (&y * &inv2).mod_floor(&modulus);
            return Ok(((x + &half_y).mod_floor(&modulus), half_y));
        }
        Ok((x.mod_floor(&modulus), y.mod_floor(&modulus)))
    }

    /// `ln^𝔭 α` to `n` digits.
    pub fn log(&self, alpha: &QuadElement<BigInt>, n: i64) -> Result<LocalElement> {
        let (a, b) = self.embed(alpha)?;
        padic_log_exact(self.local, &a, &b, n)
    }
}

/// Root of `X² − tX + n` modulo `p^k` lifting `r0`, by Newton iteration.
fn hensel_root(t: i64, n: i64, p: u64, r0: i64, k: u32) -> Option<BigInt> {
    let (tb, nb) = (BigInt::from(t), BigInt::from(n));
    let target = num_traits::pow(BigInt::from(p), k as usize);
    let mut r = BigInt::from(r0);
    let mut modulus = BigInt::from(p);
    while modulus < target {
        modulus = (&modulus * &modulus).min(target.clone());
        let f = &r * &r - &tb * &r + &nb;
        let df: BigInt = &r * 2 - &tb;
        let e = df.mod_floor(&modulus).extended_gcd(&modulus);
        if !e.gcd.is_one() {
            return None;
        }
        r = (&r - f * e.x).mod_floor(&modulus);
    }
    Some(r.mod_floor(&target))
}

/// The completion at `𝔭`, with coordinates good for logarithms to `n` digits.
pub fn local_embedding(p: &QuadIdeal, n: i64) -> Result<LocalEmbedding> {
    if !p.is_prime() {
        return Err(Error::NotPrime(p.norm() as i64));
    }
    let field = p.field();
    let l = rational_prime_below(p);
    let case = classify_case(field, p)?;
    let local = match case {
        Case::Rational | Case::FiniteG | Case::ComplexSplit => LocalField::rational(l)?,
        _ if l == 2 => {
            return Err(Error::UnsupportedField(
                "quadratic extensions of Q_2".into(),
            ))
        }
        _ if p.norm() as u64 == l => LocalField::new(l, Ext::Ram(field.m()))?,
        _ => LocalField::new(l, Ext::Ur(field.m()))?,
    };
    // π-digits never exceed p-digits, so this many p-digits is enough
    let digits = (working_precision(local, n) + 2) as u32;
    let root = if !field.is_rational() && local.is_trivial() {
        // 𝔭 = (l, b + ω), so ω ≡ −b mod 𝔭
        let b = p.hnf()[2] as i64;
        Some(
            hensel_root(field.omega_trace(), field.omega_norm(), l, -b, digits)
                .ok_or_else(|| Error::UnsupportedField(format!("no simple root of ω mod {l}")))?,
        )
    } else {
        None
    };
    Ok(LocalEmbedding {
        field,
        prime: *p,
        local,
        root,
        digits,
    })
}

/// The reciprocity map `r : 𝓜 → V` in log coordinates.
///
/// `logs[i]` is `(L/n_i)·ln^𝔭 α_i` with `α_i` a (totally positive) generator
/// of `𝔩_i^{n_i}` and `L = lcm n_i`; the common factor `L` keeps every value
/// integral. `values[i]` is the coordinate in `V`: `logs[i]` itself in cases
/// (1), (2-2) and (2-3), its trace coordinate `ln N(α_i)·L/n_i` in case (2-1).
#[derive(Debug, Clone)]
pub struct ReciprocityData {
    pub case: Case,
    pub prime: QuadIdeal,
    pub embedding: LocalEmbedding,
    pub precision: i64,
    pub primes: Vec<QuadIdeal>,
    pub exponents: Vec<u32>,
    pub generators: Vec<QuadElement<BigInt>>,
    pub scale: u64,
    pub logs: Vec<LocalElement>,
    pub values: Vec<LocalElement>,
}

impl ReciprocityData {
    pub fn dim(&self) -> u32 {
        self.case.dim()
    }

    pub fn p(&self) -> u64 {
        self.embedding.local_field().p()
    }

    pub fn labels(&self) -> Vec<String> {
        self.primes.iter().map(prime_label).collect()
    }
}

/// Value in `V` from the scaled log, by case.
fn v_coordinate(case: Case, log: &LocalElement) -> LocalElement {
    match case {
        Case::RealQuadratic => log.trace_coordinates().0,
        _ => log.clone(),
    }
}

/// [`ReciprocityData`] for the primes of a level.
pub fn reciprocity_coordinates(level: &AbelianLevel, precision: i64) -> Result<ReciprocityData> {
    reciprocity_for_primes(level.ray().prime(), level.primes(), precision)
}

pub fn reciprocity_for_primes(
    p: &QuadIdeal,
    primes: &[QuadIdeal],
    precision: i64,
) -> Result<ReciprocityData> {
    let case = classify_case(p.field(), p)?;
    if case == Case::FiniteG {
        return Err(Error::FiniteGroup);
    }
    if let Some(l) = primes.iter().find(|l| !l.is_coprime(p)) {
        return Err(Error::RamifiedPrime(prime_label(l)));
    }
    let embedding = local_embedding(p, precision)?;
    let (exponents, generators): (Vec<u32>, Vec<QuadElement<BigInt>>) =
        primes.iter().map(ideal_power_class_exponent).unzip();
    let scale = exponents.iter().fold(1u64, |acc, &n| lcm(acc, n as u64));
    let mut logs = Vec::with_capacity(primes.len());
    for (alpha, &n) in generators.iter().zip(&exponents) {
        let x = embedding.log(alpha, precision)?;
        logs.push(x.mul_int(&BigInt::from(scale / n as u64)));
    }
    let values = logs.iter().map(|x| v_coordinate(case, x)).collect();
    Ok(ReciprocityData {
        case,
        prime: *p,
        embedding,
        precision,
        primes: primes.to_vec(),
        exponents,
        generators,
        scale,
        logs,
        values,
    })
}

/// Outcome of the residue-characteristic search for one prime.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ResidueChar {
    pub index: usize,
    pub l: u64,
    /// Auxiliary indices with their matched residue characteristic.
    pub auxiliaries: Vec<(usize, u64)>,
    /// Height bound actually searched.
    pub height: u64,
}

/// Height allowed by `h² ≤ p^{M−g}/100`, capped by `cap`.
fn effective_height(p: u64, digits: i64, cap: u64) -> u64 {
    if digits <= 0 {
        return 0;
    }
    let bound = num_traits::pow(BigInt::from(p), digits as usize) / 100u32;
    let mut h = num_integer::Roots::sqrt(&bound);
    if h > BigInt::from(cap) {
        h = BigInt::from(cap);
    }
    num_traits::ToPrimitive::to_u64(&h).unwrap_or(cap)
}

/// `ln l` over `Q_p` for the candidate primes `l ≤ B_c`, `l ≠ p`.
struct LogTable {
    primes: Vec<u64>,
    logs: Vec<LocalElement>,
}

impl LogTable {
    fn new(p: u64, bound: u64, precision: i64) -> Result<Self> {
        let field = LocalField::rational(p)?;
        let primes: Vec<u64> = primes_up_to(bound)
            .into_iter()
            .filter(|&l| l != p)
            .collect();
        let logs = primes
            .iter()
            .map(|&l| padic_log_exact(field, &BigInt::from(l), &BigInt::zero(), precision))
            .collect::<Result<Vec<_>>>()?;
        Ok(LogTable { primes, logs })
    }
}

fn related(x: &LocalElement, y: &LocalElement, h: u64, guard: i64) -> Result<bool> {
    Ok(rational_ratio(x, y, h, guard)?.is_some())
}

fn inconclusive(
    index: usize,
    found: &[u64],
    params: &ReconstructParams,
    h: u64,
    why: &str,
) -> Error {
    Error::Inconclusive(format!(
        "residue characteristic of prime #{index}: {why} (candidates {found:?}; B_c = {}, H = {}, searched height {h}, precision {}, guard {})",
        params.candidate_bound, params.height, params.precision, params.guard
    ))
}

fn residue_char_with(
    values: &[LocalElement],
    index: usize,
    params: &ReconstructParams,
    table: &LogTable,
) -> Result<ResidueChar> {
    let p = values[index].field().p();
    let h = effective_height(p, params.precision - params.guard, params.height);
    if h == 0 {
        return Err(inconclusive(
            index,
            &[],
            params,
            h,
            "precision below the confidence threshold",
        ));
    }
    let x = &values[index];
    if x.is_zero() {
        return Err(inconclusive(
            index,
            &[],
            params,
            h,
            "zero reciprocity value",
        ));
    }
    // auxiliaries: the first two values not rationally related to x
    let mut aux = Vec::new();
    for (j, y) in values.iter().enumerate() {
        if aux.len() == 2 {
            break;
        }
        if j != index && !y.is_zero() && !related(x, y, h, params.guard)? {
            aux.push(j);
        }
    }
    if aux.len() < 2 {
        return Err(inconclusive(
            index,
            &[],
            params,
            h,
            "fewer than two auxiliary primes",
        ));
    }
    let ys: Vec<LocalElement> = table
        .logs
        .iter()
        .map(|ln| x.mul(ln))
        .collect::<Result<_>>()?;
    let mut found = Vec::new();
    let mut witnesses = Vec::new();
    'candidate: for (k, ln1) in table.logs.iter().enumerate() {
        let mut matched = Vec::new();
        for &j in &aux {
            // r(𝔩_j)/r(𝔩) ≡ ln l₂ / ln l₁ mod Q^×
            let xj = values[j].mul(ln1)?;
            let mut hit = None;
            for (k2, y) in ys.iter().enumerate() {
                if related(&xj, y, h, params.guard)? {
                    hit = Some(table.primes[k2]);
                    break;
                }
            }
            match hit {
                Some(l2) => matched.push((j, l2)),
                None => continue 'candidate,
            }
        }
        found.push(table.primes[k]);
        witnesses.push(matched);
    }
    match found.as_slice() {
        [l] => Ok(ResidueChar {
            index,
            l: *l,
            auxiliaries: witnesses.pop().expect("one witness per candidate"),
            height: h,
        }),
        [] => Err(inconclusive(index, &found, params, h, "no candidate found")),
        _ => Err(inconclusive(
            index,
            &found,
            params,
            h,
            "several candidates found",
        )),
    }
}

/// `c(𝔩)` for the value at `index` among scalar reciprocity values in `Q_p`
/// (`R = 1`, or norm-sum coordinates after W-projection).
pub fn recover_residue_char(
    values: &[LocalElement],
    index: usize,
    params: &ReconstructParams,
) -> Result<ResidueChar> {
    let p = values[index].field().p();
    let table = LogTable::new(p, params.candidate_bound, params.precision)?;
    residue_char_with(values, index, params, &table)
}

/// [`recover_residue_char`] for every index, sharing one log table. Entries
/// that are `None` are skipped.
pub fn recover_residue_chars(
    values: &[Option<LocalElement>],
    params: &ReconstructParams,
) -> Vec<Result<ResidueChar>> {
    let present: Vec<usize> = (0..values.len()).filter(|&i| values[i].is_some()).collect();
    let Some(&first) = present.first() else {
        return Vec::new();
    };
    let p = values[first].as_ref().expect("present").field().p();
    let table = match LogTable::new(p, params.candidate_bound, params.precision) {
        Ok(t) => t,
        Err(e) => return values.iter().map(|_| Err(e.clone())).collect(),
    };
    let dense: Vec<LocalElement> = present
        .iter()
        .map(|&i| values[i].clone().expect("present"))
        .collect();
    let mut out: Vec<Result<ResidueChar>> = values
        .iter()
        .enumerate()
        .map(|(i, _)| {
            Err(Error::Inconclusive(format!(
                "no reciprocity value for prime #{i}"
            )))
        })
        .collect();
    for (k, &i) in present.iter().enumerate() {
        out[i] = residue_char_with(&dense, k, params, &table).map(|mut r| {
            r.index = i;
            r.auxiliaries = r
                .auxiliaries
                .into_iter()
                .map(|(j, l)| (present[j], l))
                .collect();
            r
        });
    }
    out
}

/// The line `W ⊂ V ≅ K_𝔭` and the pairing `𝔩 ↦ 𝔩̄` recovered from it.
#[derive(Debug, Clone)]
pub struct WDetection {
    /// A sum `r(𝔩) + r(𝔩')` spanning `W`.
    pub w: LocalElement,
    /// Pairs `i ≤ j` whose sums lie on `W`.
    pub support: Vec<(usize, usize)>,
    /// `partner[i] = j` when `j` is the unique index with `r_i + r_j ∈ W`.
    pub partner: Vec<Option<usize>>,
}

impl WDetection {
    pub fn pair_count(&self) -> usize {
        self.support.len()
    }
}

/// `x / p^{v(x)}`'s inverse times `y / p^{v(x)}`: the slope `y/x` for `v(x) ≤ v(y)`.
fn slope(x: &LocalElement, y: &LocalElement) -> Result<LocalElement> {
    let v = x.valuation().expect("nonzero");
    let unit = x.div_pi_pow(v)?;
    y.div_pi_pow(v)?.mul(&unit.inverse()?)
}

/// Projective direction of a nonzero vector of `Q_p²`, and the digits known.
fn direction(z: &LocalElement) -> Option<(u8, LocalElement)> {
    let (a, b) = z.trace_coordinates();
    match (a.valuation(), b.valuation()) {
        (None, None) => None,
        (Some(va), Some(vb)) if vb < va => slope(&b, &a).ok().map(|s| (1, s)),
        (None, Some(_)) => slope(&b, &a).ok().map(|s| (1, s)),
        _ => slope(&a, &b).ok().map(|s| (0, s)),
    }
}

fn direction_key(kind: u8, s: &LocalElement, digits: i64) -> (u8, BigInt) {
    let modulus = num_traits::pow(BigInt::from(s.field().p()), digits as usize);
    (kind, s.truncate(digits).a().mod_floor(&modulus))
}

/// `z, w` are `Q_p`-dependent: `rank [[z, w], [z̄, w̄]] ≤ 1` at threshold `t`.
fn qp_dependent(z: &LocalElement, w: &LocalElement, t: i64) -> bool {
    let m = vec![vec![z.clone(), w.clone()], vec![z.conj(), w.conj()]];
    // an exhausted test counts as dependent: the direction keys already agree
    qp_rank(&m, t).map_or(true, |r| r <= 1)
}

/// Finds `W` as the direction shared by the largest family (at least three)
/// of pair sums `r(𝔩) + r(𝔩')`, confirmed by 2×2 rank tests.
pub fn detect_w(values: &[LocalElement], params: &ReconstructParams) -> Result<WDetection> {
    let n = values.len();
    let mut sums: Vec<((usize, usize), LocalElement, (u8, LocalElement))> = Vec::new();
    for i in 0..n {
        for j in i..n {
            let s = values[i].add(&values[j])?;
            if let Some(d) = direction(&s) {
                sums.push(((i, j), s, d));
            }
        }
    }
    let digits = sums
        .iter()
        .map(|(_, _, (_, s))| s.precision())
        .min()
        .unwrap_or(0)
        .min(params.precision - params.guard);
    if digits < 2 {
        return Err(Error::Inconclusive(format!(
            "slopes known to {digits} digits only"
        )));
    }
    let mut buckets: BTreeMap<(u8, BigInt), Vec<usize>> = BTreeMap::new();
    for (k, (_, _, (kind, s))) in sums.iter().enumerate() {
        buckets
            .entry(direction_key(*kind, s, digits))
            .or_default()
            .push(k);
    }
    let (key, members) = buckets
        .iter()
        .max_by(|a, b| a.1.len().cmp(&b.1.len()).then(b.0.cmp(a.0)))
        .ok_or_else(|| Error::Inconclusive("no nonzero pair sums".into()))?;
    let w = sums[members[0]].1.clone();
    let support: Vec<(usize, usize)> = members
        .iter()
        .filter(|&&k| qp_dependent(&sums[k].1, &w, digits))
        .map(|&k| sums[k].0)
        .collect();
    if support.len() < 3 {
        return Err(Error::Inconclusive(format!(
            "only {} pair sums share a direction",
            support.len()
        )));
    }
    let mut partners: Vec<Vec<usize>> = vec![Vec::new(); n];
    for (k, ((i, j), _, (kind, s))) in sums.iter().enumerate() {
        if direction_key(*kind, s, digits) == *key && support.contains(&sums[k].0) {
            partners[*i].push(*j);
            if i != j {
                partners[*j].push(*i);
            }
        }
    }
    let mut partner: Vec<Option<usize>> = partners
        .iter()
        .map(|c| if c.len() == 1 { Some(c[0]) } else { None })
        .collect();
    for i in 0..n {
        if let Some(j) = partner[i] {
            if partner[j] != Some(i) {
                partner[i] = None;
            }
        }
    }
    Ok(WDetection {
        w,
        support,
        partner,
    })
}

/// Coordinates along `W` of the norm sums `r(𝔩) + r(𝔩̄)`, up to one common
/// factor. `None` for unpaired primes.
pub fn norm_sum_coordinates(
    values: &[LocalElement],
    w: &WDetection,
) -> Result<Vec<Option<LocalElement>>> {
    let (wa, wb) = w.w.trace_coordinates();
    let use_a = match (wa.valuation(), wb.valuation()) {
        (Some(va), Some(vb)) => va <= vb,
        (Some(_), None) => true,
        _ => false,
    };
    let wc = if use_a { wa } else { wb };
    let v = wc.valuation().expect("w is nonzero");
    let unit_inv = wc.div_pi_pow(v)?.inverse()?;
    values
        .iter()
        .enumerate()
        .map(|(i, x)| {
            let Some(j) = w.partner[i] else {
                return Ok(None);
            };
            let (ta, tb) = x.add(&values[j])?.trace_coordinates();
            let t = if use_a { ta } else { tb };
            t.mul(&unit_inv).map(Some)
        })
        .collect()
}

/// Rank of a `d × l` log matrix, for the independence demonstration.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct IndependenceDemo {
    pub rows: usize,
    pub cols: usize,
    pub rank: usize,
    /// `d·l/(d+l)`, the rank lower bound for algebraically independent-type
    /// matrices of this shape.
    pub bound: f64,
}

pub fn independence_demo(matrix: &[Vec<LocalElement>], threshold: i64) -> Result<IndependenceDemo> {
    let rows = matrix.len();
    let cols = matrix.first().map_or(0, Vec::len);
    let rank = qp_rank(matrix, threshold)?;
    Ok(IndependenceDemo {
        rows,
        cols,
        rank,
        bound: (rows * cols) as f64 / (rows + cols) as f64,
    })
}
