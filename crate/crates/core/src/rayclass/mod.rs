//! Narrow ray class groups of modulus `𝔭^N` times all real places, with
//! discrete logs and Frobenius classes.

mod json;

use num_bigint::BigInt;

use crate::error::{Error, Result};
use crate::group::AbelianGroup;
use crate::presentation::AbelianGroupPresentation;
use crate::quadfield::{
    narrow_class_group, principal_generator, split_prime, totally_positive_units, NarrowClassGroup,
    QuadElement, QuadField, QuadIdeal, DEFAULT_DISC_BOUND,
};
use crate::snf::{mat_vec, smith_form, RelationLattice, SmithForm};

pub use json::{FrobeniusEntry, LevelJson};

/// Ceiling on the order of explicitly enumerated residue unit groups.
pub const RESIDUE_ORDER_CEILING: u64 = 1_000_000;

/// Residue class `x + yω mod 𝔭^N`, reduced against the HNF of `𝔭^N`.
pub type Residue = (i128, i128);

/// `(O_K/𝔭^N)^×` with its abelian structure.
#[derive(Debug, Clone)]
pub struct ResidueUnitGroup {
    prime: QuadIdeal,
    n: u32,
    modulus: QuadIdeal,
    presentation: AbelianGroupPresentation<Residue>,
}

impl ResidueUnitGroup {
    pub fn prime(&self) -> &QuadIdeal {
        &self.prime
    }

    pub fn exponent(&self) -> u32 {
        self.n
    }

    pub fn modulus(&self) -> &QuadIdeal {
        &self.modulus
    }

    pub fn presentation(&self) -> &AbelianGroupPresentation<Residue> {
        &self.presentation
    }

    pub fn group(&self) -> &AbelianGroup {
        self.presentation.group()
    }

    pub fn order(&self) -> u64 {
        self.presentation.order()
    }

    pub fn reduce(&self, alpha: &QuadElement<BigInt>) -> Option<Residue> {
        let (x, y) = alpha.integral_coords()?;
        Some(self.modulus.reduce(&x, &y))
    }

    pub fn mul(&self, u: &Residue, v: &Residue) -> Residue {
        residue_mul(&self.modulus, u, v)
    }

    /// Discrete log of an integral element prime to `𝔭`.
    pub fn dlog(&self, alpha: &QuadElement<BigInt>) -> Option<Vec<i128>> {
        self.presentation.dlog(&self.reduce(alpha)?)
    }
}

fn residue_mul(modulus: &QuadIdeal, u: &Residue, v: &Residue) -> Residue {
    let k = modulus.field();
    let a = QuadElement::<i128>::integral(k, u.0, u.1);
    let b = QuadElement::<i128>::integral(k, v.0, v.1);
    let (x, y) = a.mul(&b).integral_coords().expect("integral");
    modulus.reduce(&BigInt::from(x), &BigInt::from(y))
}

fn check_prime(p: &QuadIdeal) -> Result<()> {
    if !p.is_prime() {
        return Err(Error::NotPrime(p.norm() as i64));
    }
    Ok(())
}

/// Structure of `(O_K/𝔭^N)^×` by explicit enumeration, generators picked
/// greedily in enumeration order.
pub fn residue_unit_group(p: &QuadIdeal, n: u32) -> Result<ResidueUnitGroup> {
    check_prime(p)?;
    if n == 0 {
        return Err(Error::Config {
            field: "N".into(),
            message: "level must be at least 1".into(),
        });
    }
    let size = (p.norm() as u128).checked_pow(n);
    if size.is_none_or(|s| s > RESIDUE_ORDER_CEILING as u128) {
        return Err(Error::GroupTooLarge {
            order: size.map_or(u64::MAX, |s| s.min(u64::MAX as u128) as u64),
            ceiling: RESIDUE_ORDER_CEILING,
        });
    }
    let modulus = p.pow(n);
    let [a, _, _, c] = modulus.hnf();
    let units: Vec<Residue> = (0..c)
        .flat_map(|y| (0..a).map(move |x| (x, y)))
        .filter(|&(x, y)| !p.contains(x, y))
        .collect();
    let one = modulus.reduce(&BigInt::from(1), &BigInt::from(0));
    let presentation = AbelianGroupPresentation::discover(
        one,
        units,
        |u, v| residue_mul(&modulus, u, v),
        RESIDUE_ORDER_CEILING,
    )?;
    Ok(ResidueUnitGroup {
        prime: *p,
        n,
        modulus,
        presentation,
    })
}

/// A generator of the narrow class group, realized by a prime ideal.
#[derive(Debug, Clone)]
struct ClassGenerator {
    ideal: QuadIdeal,
    order: u64,
    /// `ι(β)` for a totally positive generator `β` of `ideal^order`.
    relation: Vec<i128>,
}

/// One finite level `G_N` of the ray class tower.
///
/// Internally `G_N` is generated by the SNF generators of `(O/𝔭^N)^×`
/// followed by prime ideals realizing the generators of `Cl⁺(K)`; public
/// coordinates are those of the Smith normal form of that presentation.
#[derive(Debug, Clone)]
pub struct RayLevel {
    field: QuadField,
    narrow: bool,
    units: ResidueUnitGroup,
    class_group: NarrowClassGroup,
    class_gens: Vec<ClassGenerator>,
    unit_image_order: u64,
    snf: SmithForm,
    keep: Vec<usize>,
    group: AbelianGroup,
}

/// The ray class group of modulus `𝔭^N` (times all real places when
/// `narrow`). The wide variant exists to test the exact sequence.
pub fn ray_class_group(p: &QuadIdeal, n: u32, narrow: bool) -> Result<RayLevel> {
    let field = p.field();
    let units = residue_unit_group(p, n)?;
    let class_group = narrow_class_group(field, DEFAULT_DISC_BOUND)?;
    let ku = units.group().rank();

    let mut class_gens = Vec::new();
    for (j, &order) in class_group.invariants().iter().enumerate() {
        let idx = class_group
            .group()
            .from_vec(&unit_vector(class_group.invariants().len(), j));
        let ideal = prime_in_class(&class_group, idx, p);
        let beta = principal_generator(&ideal.pow(order as u32), true)
            .expect("class order kills the class");
        let relation = units.dlog(&beta).expect("generator prime to 𝔭");
        class_gens.push(ClassGenerator {
            ideal,
            order,
            relation,
        });
    }
    let kc = class_gens.len();
    let k = ku + kc;

    let mut rows: Vec<Vec<i128>> = Vec::new();
    for (i, &d) in units.group().invariants().iter().enumerate() {
        let mut r = vec![0; k];
        r[i] = d as i128;
        rows.push(r);
    }
    let mut unit_image = RelationLattice::new(ku);
    for (i, &d) in units.group().invariants().iter().enumerate() {
        let mut r = vec![0; ku];
        r[i] = d as i128;
        unit_image.insert(&r);
    }
    for eps in totally_positive_units(field)? {
        let v = units.dlog(&eps).expect("units are prime to 𝔭");
        unit_image.insert(&v);
        rows.push(pad(&v, k));
    }
    for (j, g) in class_gens.iter().enumerate() {
        let mut r: Vec<i128> = pad(&g.relation, k).iter().map(|x| -x).collect();
        r[ku + j] += g.order as i128;
        rows.push(r);
    }
    let unit_image_order = if ku == 0 {
        1
    } else {
        units.order() / unit_image.index().expect("full rank") as u64
    };

    let mut level = RayLevel {
        field,
        narrow: true,
        units,
        class_group,
        class_gens,
        unit_image_order,
        snf: smith_form(&rows, k),
        keep: Vec::new(),
        group: AbelianGroup::trivial(),
    };
    if !narrow {
        // (θ) ≡ ι(θ) for θ = −1 and, for real fields, one θ with N(θ) < 0
        let mut thetas = vec![QuadElement::from_int(field, BigInt::from(-1))];
        if field.is_real() && !field.is_rational() {
            thetas.push(negative_norm_element(p));
        }
        for theta in thetas {
            let ideal = QuadIdeal::principal(&theta)?;
            let mut r = level.x_coords(&ideal)?;
            let iota = level.units.dlog(&theta).expect("prime to 𝔭");
            for (x, y) in r.iter_mut().zip(pad(&iota, k)) {
                *x -= y;
            }
            rows.push(r);
        }
        level.snf = smith_form(&rows, k);
        level.narrow = false;
    }
    level.keep = (0..k).filter(|&i| level.snf.diagonal[i] != 1).collect();
    level.group = AbelianGroup::new(
        level
            .keep
            .iter()
            .map(|&i| level.snf.diagonal[i] as u64)
            .collect(),
    );
    Ok(level)
}

fn unit_vector(k: usize, j: usize) -> Vec<i128> {
    (0..k).map(|i| i128::from(i == j)).collect()
}

fn pad(v: &[i128], k: usize) -> Vec<i128> {
    let mut out = v.to_vec();
    out.resize(k, 0);
    out
}

/// Smallest prime ideal prime to `p` in the given narrow class.
fn prime_in_class(cl: &NarrowClassGroup, idx: usize, p: &QuadIdeal) -> QuadIdeal {
    let field = cl.field();
    for l in 2u64.. {
        if !crate::ntheory::is_prime(l) {
            continue;
        }
        for pa in split_prime(field, l).expect("prime").primes {
            if pa.ideal.is_coprime(p) && cl.class_of_ideal(&pa.ideal) == idx {
                return pa.ideal;
            }
        }
    }
    unreachable!("every class contains primes")
}

/// An integral element of negative norm prime to `p`.
fn negative_norm_element(p: &QuadIdeal) -> QuadElement<BigInt> {
    let field = p.field();
    for h in 1i128.. {
        for x in -h..=h {
            for y in [-h, h] {
                let e = QuadElement::<i128>::integral(field, x, y);
                if e.norm() < num_rational::Ratio::from_integer(0)
                    && QuadIdeal::principal(&e).is_ok_and(|i| i.is_coprime(p))
                {
                    return e.to_big();
                }
            }
        }
    }
    unreachable!()
}

impl RayLevel {
    pub fn field(&self) -> QuadField {
        self.field
    }

    pub fn prime(&self) -> &QuadIdeal {
        self.units.prime()
    }

    pub fn exponent(&self) -> u32 {
        self.units.exponent()
    }

    pub fn is_narrow(&self) -> bool {
        self.narrow
    }

    pub fn group(&self) -> &AbelianGroup {
        &self.group
    }

    pub fn order(&self) -> u64 {
        self.group.order()
    }

    pub fn invariants(&self) -> &[u64] {
        self.group.invariants()
    }

    pub fn residue_units(&self) -> &ResidueUnitGroup {
        &self.units
    }

    pub fn class_group(&self) -> &NarrowClassGroup {
        &self.class_group
    }

    /// Order of the image of the (totally positive) global units in
    /// `(O/𝔭^N)^×`.
    pub fn unit_image_order(&self) -> u64 {
        self.unit_image_order
    }

    /// Prime ideals realizing the generators of `Cl⁺(K)`.
    pub fn class_generator_ideals(&self) -> Vec<QuadIdeal> {
        self.class_gens.iter().map(|g| g.ideal).collect()
    }

    /// Coordinates of `[I]` on the internal generators.
    fn x_coords(&self, i: &QuadIdeal) -> Result<Vec<i128>> {
        if !i.is_coprime(self.prime()) {
            return Err(Error::RamifiedPrime(format!(
                "{i} is not prime to {}",
                self.prime()
            )));
        }
        let ku = self.units.group().rank();
        let cl = &self.class_group;
        let c = cl.group().to_vec(cl.class_of_ideal(i));
        // I · ∏ q_j^(h_j − c_j) = (α) with α totally positive
        let mut j_ideal = *i;
        for (g, &cj) in self.class_gens.iter().zip(&c) {
            j_ideal = j_ideal.mul(&g.ideal.pow((g.order as i128 - cj) as u32));
        }
        let alpha = principal_generator(&j_ideal, true).expect("trivial narrow class");
        let mut x = pad(
            &self.units.dlog(&alpha).expect("prime to 𝔭"),
            ku + self.class_gens.len(),
        );
        for (j, (g, &cj)) in self.class_gens.iter().zip(&c).enumerate() {
            x[ku + j] -= g.order as i128 - cj;
        }
        Ok(x)
    }

    fn to_public(&self, x: &[i128]) -> Vec<i128> {
        let y = mat_vec(x, &self.snf.v);
        self.group
            .reduce(&self.keep.iter().map(|&i| y[i]).collect::<Vec<_>>())
    }

    /// Class of an ideal prime to `𝔭`, as coordinates on the SNF generators.
    pub fn ideal_class(&self, i: &QuadIdeal) -> Result<Vec<i128>> {
        Ok(self.to_public(&self.x_coords(i)?))
    }

    /// Frobenius class of a prime `𝔩 ∤ 𝔭`.
    pub fn frobenius_class(&self, l: &QuadIdeal) -> Result<Vec<i128>> {
        if !l.is_prime() {
            return Err(Error::NotPrime(l.norm() as i64));
        }
        self.ideal_class(l)
    }

    /// Image of a residue unit under `(O/𝔭^N)^× → G_N`.
    pub fn unit_class(&self, alpha: &QuadElement<BigInt>) -> Option<Vec<i128>> {
        let v = self.units.dlog(alpha)?;
        Some(self.to_public(&pad(&v, self.units.group().rank() + self.class_gens.len())))
    }

    /// Index in [`group`](Self::group) of a coordinate vector.
    pub fn index_of(&self, v: &[i128]) -> usize {
        self.group.from_vec(v)
    }

    /// Internal-generator images of the public SNF generators.
    fn generator_x_coords(&self) -> Vec<Vec<i128>> {
        self.keep
            .iter()
            .map(|&i| self.snf.v_inv[i].clone())
            .collect()
    }
}

/// A homomorphism `G_N → G_{N'}` given by the images of the SNF generators.
#[derive(Debug, Clone)]
pub struct LevelProjection {
    images: Vec<Vec<i128>>,
    target: AbelianGroup,
}

impl LevelProjection {
    pub fn apply(&self, v: &[i128]) -> Vec<i128> {
        let mut out = vec![0i128; self.target.rank()];
        for (c, img) in v.iter().zip(&self.images) {
            for (o, x) in out.iter_mut().zip(img) {
                *o += c * x;
            }
        }
        self.target.reduce(&out)
    }

    pub fn images(&self) -> &[Vec<i128>] {
        &self.images
    }

    /// Whether the images generate the target.
    pub fn is_surjective(&self) -> bool {
        let k = self.target.rank();
        if k == 0 {
            return true;
        }
        let mut lat = RelationLattice::new(k);
        for (i, &d) in self.target.invariants().iter().enumerate() {
            lat.insert(
                &unit_vector(k, i)
                    .iter()
                    .map(|x| x * d as i128)
                    .collect::<Vec<_>>(),
            );
        }
        for img in &self.images {
            lat.insert(img);
        }
        lat.index() == Some(1)
    }
}

/// Reduction map between two levels over the same field and prime.
pub fn level_projection(from: &RayLevel, to: &RayLevel) -> Result<LevelProjection> {
    if from.field != to.field || from.prime() != to.prime() || from.narrow != to.narrow {
        return Err(Error::LevelMismatch("levels over different data".into()));
    }
    if from.exponent() < to.exponent() {
        return Err(Error::LevelMismatch(format!(
            "cannot project level {} to level {}",
            from.exponent(),
            to.exponent()
        )));
    }
    if from.class_generator_ideals() != to.class_generator_ideals() {
        return Err(Error::LevelMismatch("class generators differ".into()));
    }
    let ku = from.units.group().rank();
    let ku_to = to.units.group().rank();
    let k_to = ku_to + to.class_gens.len();
    // images of internal generators of `from`, in internal coordinates of `to`
    let mut internal: Vec<Vec<i128>> = Vec::new();
    for g in from.units.presentation().generators() {
        let alpha = QuadElement::<i128>::integral(from.field, g.0, g.1).to_big();
        internal.push(pad(&to.units.dlog(&alpha).expect("unit"), k_to));
    }
    for j in 0..from.class_gens.len() {
        internal.push(unit_vector(k_to, ku_to + j));
    }
    debug_assert_eq!(internal.len(), ku + from.class_gens.len());
    let images = from
        .generator_x_coords()
        .iter()
        .map(|row| {
            let x = mat_vec(row, &internal);
            to.to_public(&x)
        })
        .collect();
    Ok(LevelProjection {
        images,
        target: to.group.clone(),
    })
}
