use num_bigint::BigInt;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

use super::{Ext, LocalElement, LocalField};

/// Exchange form of a [`LocalElement`]; residues are decimal strings and
/// `v` is `null` for an element that is zero at its precision.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LocalElementJson {
    pub p: u64,
    pub ext: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub m: Option<i64>,
    pub a: String,
    pub b: String,
    #[serde(rename = "N")]
    pub n: i64,
    pub v: Option<i64>,
}

impl From<&LocalElement> for LocalElementJson {
    fn from(x: &LocalElement) -> Self {
        let f = x.field();
        let (ext, m) = match f.ext() {
            Ext::Triv => ("triv", None),
            Ext::Ur(m) => ("ur", Some(m)),
            Ext::Ram(m) => ("ram", Some(m)),
        };
        LocalElementJson {
            p: f.p(),
            ext: ext.into(),
            m,
            a: x.a().to_str_radix(10),
            b: x.b().to_str_radix(10),
            n: x.precision(),
            v: x.valuation(),
        }
    }
}

impl LocalElementJson {
    pub fn to_element(&self) -> Result<LocalElement> {
        let need_m = || {
            self.m
                .ok_or_else(|| Error::Format("quadratic extension without m".into()))
        };
        let ext = match self.ext.as_str() {
            "triv" => Ext::Triv,
            "ur" => Ext::Ur(need_m()?),
            "ram" => Ext::Ram(need_m()?),
            other => return Err(Error::Format(format!("unknown extension type {other:?}"))),
        };
        let field = LocalField::new(self.p, ext)?;
        let parse = |s: &str| {
            BigInt::parse_bytes(s.as_bytes(), 10)
                .ok_or_else(|| Error::Format(format!("not a decimal integer: {s:?}")))
        };
        let x = LocalElement::new(field, parse(&self.a)?, parse(&self.b)?, self.n);
        if x.a().to_str_radix(10) != self.a
            || x.b().to_str_radix(10) != self.b
            || x.valuation() != self.v
        {
            return Err(Error::Format(
                "residues or valuation not in normal form".into(),
            ));
        }
        Ok(x)
    }
}

impl LocalElement {
    pub fn to_json(&self) -> String {
        serde_json::to_string(&LocalElementJson::from(self)).expect("serializable")
    }

    pub fn from_json(s: &str) -> Result<Self> {
        let j: LocalElementJson =
            serde_json::from_str(s).map_err(|e| Error::Format(e.to_string()))?;
        j.to_element()
    }
}
