use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::group::{AbelianGroup, FiniteGroup};
use crate::perm::{Perm, PermGroup};

use super::coset::coset_quandle;
use super::{FiniteQuandle, Repr};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum GroupJson {
    Abelian {
        invariants: Vec<u64>,
    },
    Perm {
        degree: usize,
        generators: Vec<Vec<u32>>,
    },
}

impl GroupJson {
    pub fn from_group(g: &FiniteGroup) -> Self {
        match g {
            FiniteGroup::Abelian(a) => GroupJson::Abelian {
                invariants: a.invariants().to_vec(),
            },
            FiniteGroup::Perm(p) => GroupJson::Perm {
                degree: p.degree(),
                generators: p.generators().iter().map(|g| g.0.clone()).collect(),
            },
        }
    }

    pub fn to_group(&self) -> Result<FiniteGroup> {
        match self {
            GroupJson::Abelian { invariants } => {
                if invariants.contains(&0) {
                    return Err(Error::Format("zero invariant factor".into()));
                }
                Ok(FiniteGroup::Abelian(AbelianGroup::new(invariants.clone())))
            }
            GroupJson::Perm { degree, generators } => {
                let mut gens = Vec::with_capacity(generators.len());
                for g in generators {
                    if g.len() != *degree || !Perm::is_bijection(g) {
                        return Err(Error::Format(
                            "generator is not a permutation of the stated degree".into(),
                        ));
                    }
                    gens.push(Perm(g.clone()));
                }
                Ok(FiniteGroup::Perm(PermGroup::generate(*degree, &gens)))
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FiberJson {
    pub z: Vec<i64>,
    #[serde(rename = "H")]
    pub h: Vec<Vec<i64>>,
    pub size: usize,
}

/// Exchange form of a [`FiniteQuandle`].
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct QuandleJson {
    pub n: usize,
    pub mode: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub table: Option<Vec<Vec<u32>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub group: Option<GroupJson>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub fibers: Option<Vec<FiberJson>>,
    /// For a renumbered coset quandle: internal index of each element.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub relabel: Option<Vec<u32>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub labels: Option<Vec<String>>,
}

impl QuandleJson {
    pub fn from_quandle(q: &FiniteQuandle) -> Self {
        let labels = q.labels().map(<[String]>::to_vec);
        match q.repr() {
            Repr::Coset(c) => {
                let g = c.group();
                let fibers = c
                    .fibers()
                    .iter()
                    .map(|f| FiberJson {
                        z: g.describe(f.z),
                        h: f.h_gens.iter().map(|&x| g.describe(x)).collect(),
                        size: f.size(),
                    })
                    .collect();
                QuandleJson {
                    n: q.len(),
                    mode: "coset".into(),
                    table: None,
                    group: Some(GroupJson::from_group(g)),
                    fibers: Some(fibers),
                    relabel: q.relabeling().map(<[u32]>::to_vec),
                    labels,
                }
            }
            Repr::Table(_) => {
                let flat = q.to_table();
                let n = q.len();
                QuandleJson {
                    n,
                    mode: "table".into(),
                    table: Some(flat.chunks(n.max(1)).map(<[u32]>::to_vec).take(n).collect()),
                    group: None,
                    fibers: None,
                    relabel: None,
                    labels,
                }
            }
        }
    }

    pub fn to_quandle(&self) -> Result<FiniteQuandle> {
        let q = match self.mode.as_str() {
            "table" => {
                let rows = self
                    .table
                    .as_ref()
                    .ok_or_else(|| Error::Format("table mode without table".into()))?;
                if rows.len() != self.n || rows.iter().any(|r| r.len() != self.n) {
                    return Err(Error::Format("table is not n × n".into()));
                }
                FiniteQuandle::from_table(self.n, rows.concat())
            }
            "coset" => {
                let group = self
                    .group
                    .as_ref()
                    .ok_or_else(|| Error::Format("coset mode without group".into()))?
                    .to_group()?;
                let fibers = self
                    .fibers
                    .as_ref()
                    .ok_or_else(|| Error::Format("coset mode without fibers".into()))?;
                let elem = |d: &[i64]| {
                    group
                        .parse(d)
                        .ok_or_else(|| Error::Format(format!("not a group element: {d:?}")))
                };
                let mut data = Vec::with_capacity(fibers.len());
                for f in fibers {
                    let z = elem(&f.z)?;
                    let h = f.h.iter().map(|x| elem(x)).collect::<Result<Vec<_>>>()?;
                    data.push((z, h));
                }
                let q = coset_quandle(group.clone(), &data)?;
                let sizes: Vec<usize> = q
                    .coset_data()
                    .unwrap()
                    .fibers()
                    .iter()
                    .map(|f| f.size())
                    .collect();
                if sizes.iter().zip(fibers).any(|(&s, f)| s != f.size) || q.len() != self.n {
                    return Err(Error::Format(
                        "fiber sizes disagree with the group data".into(),
                    ));
                }
                match &self.relabel {
                    None => q,
                    Some(to_inner) => {
                        if to_inner.len() != self.n || !Perm::is_bijection(to_inner) {
                            return Err(Error::Format("relabel is not a permutation".into()));
                        }
                        q.relabeled(&Perm(to_inner.clone()).inverse())
                    }
                }
            }
            other => return Err(Error::Format(format!("unknown mode {other:?}"))),
        };
        match &self.labels {
            Some(l) if l.len() != self.n => Err(Error::Format("label count differs from n".into())),
            Some(l) => Ok(q.with_labels(l.clone())),
            None => Ok(q),
        }
    }
}

impl FiniteQuandle {
    pub fn to_json(&self) -> String {
        serde_json::to_string(&QuandleJson::from_quandle(self)).expect("serializable")
    }

    pub fn from_json(s: &str) -> Result<Self> {
        let j: QuandleJson = serde_json::from_str(s).map_err(|e| Error::Format(e.to_string()))?;
        j.to_quandle()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quandle::conjugation_quandle;

    #[test]
    fn table_roundtrip() {
        let s3 = FiniteGroup::Perm(PermGroup::symmetric(3));
        let q =
            conjugation_quandle(&s3, false).with_labels((0..6).map(|i| format!("g{i}")).collect());
        let s = q.to_json();
        let back = FiniteQuandle::from_json(&s).unwrap();
        assert_eq!(back.to_table(), q.to_table());
        assert_eq!(back.to_json(), s);
    }

    #[test]
    fn coset_roundtrip_with_relabel() {
        let g = FiniteGroup::Perm(PermGroup::symmetric(3));
        let c3 = g.parse(&[1, 2, 0]).unwrap();
        let t = g.parse(&[1, 0, 2]).unwrap();
        let q = coset_quandle(g, &[(c3, vec![c3]), (t, vec![t])]).unwrap();
        let r = q.relabeled(&Perm(vec![4, 2, 0, 1, 3]));
        for x in [&q, &r] {
            let s = x.to_json();
            let back = FiniteQuandle::from_json(&s).unwrap();
            assert_eq!(back.to_table(), x.to_table());
            assert_eq!(back.to_json(), s);
        }
    }

    #[test]
    fn rejects_ragged_table() {
        let bad = r#"{"n":2,"mode":"table","table":[[0,1],[0]]}"#;
        assert!(FiniteQuandle::from_json(bad).is_err());
    }
}
