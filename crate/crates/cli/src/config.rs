use arith_quandle::arith::{prime_set, PrimeSet, PrimeSetOptions};
use arith_quandle::quadfield::{split_prime, QuadField, QuadIdeal};
use arith_quandle::reconstruct::ReconstructParams;
use arith_quandle::{ntheory, Error, Result};
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum FieldSpec {
    Name(String),
    M(i64),
}

/// Second side of a `match` run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum MatchSpec {
    /// "shuffled" or "conjugated": a relabeled copy of the first side.
    Copy(String),
    Other(Box<ExperimentConfig>),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase", deny_unknown_fields)]
pub struct ExperimentConfig {
    /// `"Q"` or the squarefree `m` of `Q(√m)`.
    pub field: FieldSpec,
    /// Rational prime under `𝔭`.
    pub prime: u64,
    /// Which prime above `prime`, in `split_prime` order.
    #[serde(default)]
    pub prime_index: usize,
    /// Prime bound `B` for `𝓜`.
    #[serde(default = "default_bound")]
    pub bound: u64,
    /// Explicit rational primes for `𝓜` (all primes above them), instead of `bound`.
    #[serde(default)]
    pub primes: Option<Vec<u64>>,
    #[serde(default)]
    pub split_only: bool,
    #[serde(default)]
    pub include_ramified: bool,
    #[serde(default)]
    pub exclude: Vec<u64>,
    /// Top level `N_max` of the tower.
    pub level: u32,
    #[serde(default = "default_precision")]
    pub precision: i64,
    #[serde(default)]
    pub guard: i64,
    #[serde(default = "default_candidate_bound")]
    pub candidate_bound: u64,
    #[serde(default = "default_height")]
    pub height: u64,
    #[serde(default)]
    pub seed: Option<u64>,
    #[serde(default)]
    pub output: Option<String>,
    #[serde(default, rename = "match")]
    pub match_with: Option<MatchSpec>,
}

fn default_bound() -> u64 {
    100
}
fn default_precision() -> i64 {
    12
}
fn default_candidate_bound() -> u64 {
    500
}
fn default_height() -> u64 {
    1000
}

fn invalid(field: &str, message: impl Into<String>) -> Error {
    Error::Config {
        field: field.into(),
        message: message.into(),
    }
}

impl ExperimentConfig {
    pub fn from_json(text: &str) -> Result<Self> {
        let c: ExperimentConfig =
            serde_json::from_str(text).map_err(|e| invalid("<document>", e.to_string()))?;
        c.validate()?;
        Ok(c)
    }

    pub fn validate(&self) -> Result<()> {
        self.quad_field()?;
        if !ntheory::is_prime(self.prime) {
            return Err(invalid("prime", format!("{} is not prime", self.prime)));
        }
        self.ideal()?;
        if self.bound < 2 {
            return Err(invalid("bound", "must be at least 2"));
        }
        if let Some(ps) = &self.primes {
            if ps.is_empty() {
                return Err(invalid("primes", "must not be empty"));
            }
            if let Some(l) = ps.iter().find(|&&l| !ntheory::is_prime(l)) {
                return Err(invalid("primes", format!("{l} is not prime")));
            }
        }
        if !(1..=8).contains(&self.level) {
            return Err(invalid("level", "must be in 1..=8"));
        }
        if !(1..=200).contains(&self.precision) {
            return Err(invalid("precision", "must be in 1..=200"));
        }
        if self.guard < 0 || self.guard >= self.precision {
            return Err(invalid("guard", "must be in 0..precision"));
        }
        if self.candidate_bound < 2 || self.height == 0 {
            return Err(invalid(
                "candidateBound",
                "candidateBound ≥ 2 and height ≥ 1 required",
            ));
        }
        match &self.match_with {
            Some(MatchSpec::Copy(s)) if s != "shuffled" && s != "conjugated" => Err(invalid(
                "match",
                format!("expected \"shuffled\", \"conjugated\" or a config, got {s:?}"),
            )),
            Some(MatchSpec::Other(c)) => c.validate(),
            _ => Ok(()),
        }
    }

    pub fn quad_field(&self) -> Result<QuadField> {
        match &self.field {
            FieldSpec::Name(s) if s == "Q" => Ok(QuadField::rational()),
            FieldSpec::Name(s) => Err(invalid(
                "field",
                format!("expected \"Q\" or an integer, got {s:?}"),
            )),
            FieldSpec::M(m) => QuadField::new(*m).map_err(|e| invalid("field", e.to_string())),
        }
    }

    pub fn ideal(&self) -> Result<QuadIdeal> {
        let k = self.quad_field()?;
        let above = split_prime(k, self.prime).map_err(|e| invalid("prime", e.to_string()))?;
        above
            .primes
            .get(self.prime_index)
            .map(|pa| pa.ideal)
            .ok_or_else(|| {
                invalid(
                    "primeIndex",
                    format!("only {} primes above {}", above.primes.len(), self.prime),
                )
            })
    }

    pub fn prime_set(&self) -> Result<PrimeSet> {
        let k = self.quad_field()?;
        match &self.primes {
            Some(ls) => {
                let mut ideals = Vec::new();
                for &l in ls {
                    ideals.extend(split_prime(k, l)?.primes.into_iter().map(|pa| pa.ideal));
                }
                PrimeSet::from_primes(k, ideals)
            }
            None => {
                let opts = PrimeSetOptions {
                    include_ramified: self.include_ramified,
                    split_only: self.split_only,
                    exclude: self.exclude.clone(),
                };
                prime_set(k, &self.ideal()?, self.bound, &opts)
            }
        }
    }

    pub fn params(&self) -> ReconstructParams {
        ReconstructParams {
            precision: self.precision,
            guard: self.guard,
            candidate_bound: self.candidate_bound,
            height: self.height,
        }
    }
}
