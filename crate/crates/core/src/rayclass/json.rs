use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::quadfield::{FieldJson, IdealJson, QuadIdeal};

use super::RayLevel;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FrobeniusEntry {
    pub prime: IdealJson,
    pub dlog: Vec<i64>,
}

/// Exchange form of a level with a Frobenius table.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LevelJson {
    #[serde(rename = "K")]
    pub field: FieldJson,
    pub p_ideal: IdealJson,
    #[serde(rename = "N")]
    pub n: u32,
    pub narrow: bool,
    pub snf: Vec<u64>,
    pub frobenius: Vec<FrobeniusEntry>,
}

impl RayLevel {
    /// Serializes the level together with the Frobenius classes of `primes`.
    pub fn to_json_value(&self, primes: &[QuadIdeal]) -> Result<LevelJson> {
        let frobenius = primes
            .iter()
            .map(|l| {
                Ok(FrobeniusEntry {
                    prime: IdealJson::from(l),
                    dlog: self.frobenius_class(l)?.iter().map(|&x| x as i64).collect(),
                })
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(LevelJson {
            field: self.field().into(),
            p_ideal: IdealJson::from(self.prime()),
            n: self.exponent(),
            narrow: self.is_narrow(),
            snf: self.invariants().to_vec(),
            frobenius,
        })
    }

    pub fn to_json(&self, primes: &[QuadIdeal]) -> Result<String> {
        Ok(serde_json::to_string(&self.to_json_value(primes)?).expect("serializable"))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quadfield::QuadField;
    use crate::rayclass::ray_class_group;

    #[test]
    fn level_json() {
        let k = QuadField::rational();
        let g = ray_class_group(&QuadIdeal::from_int(k, 5), 2, true).unwrap();
        let s = g.to_json(&[QuadIdeal::from_int(k, 7)]).unwrap();
        let j: LevelJson = serde_json::from_str(&s).unwrap();
        assert_eq!(j.snf, vec![20]);
        assert_eq!(j.n, 2);
        assert_eq!(j.frobenius.len(), 1);
        assert_eq!(j.p_ideal.to_ideal().unwrap(), QuadIdeal::from_int(k, 5));
        assert!(s.contains("\"K\":{\"m\":1}"));
    }
}
