use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

use super::{BinaryForm, QuadField, QuadIdeal};

/// Exchange form of a field; `m = 1` stands for `Q`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct FieldJson {
    pub m: i64,
}

impl FieldJson {
    pub fn to_field(self) -> Result<QuadField> {
        if self.m == 1 {
            Ok(QuadField::rational())
        } else {
            QuadField::new(self.m)
        }
    }
}

impl From<QuadField> for FieldJson {
    fn from(k: QuadField) -> Self {
        FieldJson { m: k.m() }
    }
}

/// Exchange form of an ideal: HNF rows `[a, 0, b, c]`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct IdealJson {
    pub m: i64,
    pub ideal: [i64; 4],
}

impl From<&QuadIdeal> for IdealJson {
    fn from(i: &QuadIdeal) -> Self {
        let h = i
            .hnf()
            .map(|v| i64::try_from(v).expect("ideal entries fit in i64"));
        IdealJson {
            m: i.field().m(),
            ideal: h,
        }
    }
}

impl IdealJson {
    pub fn to_ideal(&self) -> Result<QuadIdeal> {
        let field = FieldJson { m: self.m }.to_field()?;
        let [a, zero, b, c] = self.ideal;
        if zero != 0 {
            return Err(Error::Format(
                "HNF rows must have a zero upper-right entry".into(),
            ));
        }
        QuadIdeal::from_hnf(field, a as i128, b as i128, c as i128)
    }
}

impl QuadIdeal {
    pub fn to_json(&self) -> String {
        serde_json::to_string(&IdealJson::from(self)).expect("serializable")
    }

    pub fn from_json(s: &str) -> Result<Self> {
        let j: IdealJson = serde_json::from_str(s).map_err(|e| Error::Format(e.to_string()))?;
        j.to_ideal()
    }
}

impl Serialize for BinaryForm<i128> {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let v = self
            .to_i64_array()
            .ok_or_else(|| serde::ser::Error::custom("form coefficients overflow i64"))?;
        v.serialize(s)
    }
}

impl<'de> Deserialize<'de> for BinaryForm<i128> {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let [a, b, c] = <[i64; 3]>::deserialize(d)?;
        Ok(BinaryForm::new(a as i128, b as i128, c as i128))
    }
}
