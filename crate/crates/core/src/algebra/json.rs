use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::order::Poset;

use super::{PAlgebra, TableAlgebra, UpsetAlgebra};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PosetJson {
    pub size: usize,
    pub covers: Vec<[usize; 2]>,
}

/// Interchange form of an algebra.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum AlgebraJson {
    Table {
        size: usize,
        meet: Vec<Vec<usize>>,
        join: Vec<Vec<usize>>,
        star: Vec<usize>,
        zero: usize,
        one: usize,
    },
    Upset {
        poset: PosetJson,
        #[serde(default)]
        labels: Vec<String>,
    },
}

impl From<&Poset> for PosetJson {
    fn from(p: &Poset) -> Self {
        PosetJson {
            size: p.size(),
            covers: p.covers().into_iter().map(|(a, b)| [a, b]).collect(),
        }
    }
}

impl PosetJson {
    pub fn to_poset(&self) -> Result<Poset> {
        let pairs: Vec<(usize, usize)> = self.covers.iter().map(|&[a, b]| (a, b)).collect();
        Poset::from_covers(self.size, &pairs)
    }
}

impl From<&PAlgebra> for AlgebraJson {
    fn from(a: &PAlgebra) -> Self {
        match a {
            PAlgebra::Table(t) => AlgebraJson::Table {
                size: t.size(),
                meet: t.meet_tables(),
                join: t.join_tables(),
                star: t.star_table(),
                zero: t.zero(),
                one: t.one(),
            },
            PAlgebra::Upset(u) => AlgebraJson::Upset {
                poset: u.base().into(),
                labels: u.labels().to_vec(),
            },
        }
    }
}

impl AlgebraJson {
    /// Builds the algebra, checking the table shape and the p-algebra laws.
    pub fn into_algebra(self) -> Result<PAlgebra> {
        match self {
            AlgebraJson::Table {
                size,
                meet,
                join,
                star,
                zero,
                one,
            } => {
                if star.len() != size {
                    return Err(Error::MalformedTables(format!(
                        "star has {} entries, size is {size}",
                        star.len()
                    )));
                }
                let t = TableAlgebra::from_tables(meet, join, star, zero, one)?;
                if let Some(v) = t.validate().first() {
                    return Err(Error::MalformedTables(format!(
                        "law `{}` fails at {:?}",
                        v.law, v.witness
                    )));
                }
                Ok(PAlgebra::Table(t))
            }
            AlgebraJson::Upset { poset, labels } => {
                let p = poset.to_poset()?;
                let u = UpsetAlgebra::new(p);
                if labels.is_empty() {
                    Ok(PAlgebra::Upset(u))
                } else if labels.len() == poset.size {
                    Ok(PAlgebra::Upset(u.with_labels(labels)))
                } else {
                    Err(Error::Invalid(format!(
                        "{} labels for a poset of size {}",
                        labels.len(),
                        poset.size
                    )))
                }
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::build_si;
    use crate::Limits;

    #[test]
    fn table_round_trip_and_field_order() {
        let b1 = PAlgebra::Table(build_si(1, &Limits::default()).unwrap());
        let j = serde_json::to_string(&AlgebraJson::from(&b1)).unwrap();
        assert!(j.starts_with(r#"{"kind":"table","size":3,"meet":"#));
        let back: AlgebraJson = serde_json::from_str(&j).unwrap();
        let PAlgebra::Table(t) = back.into_algebra().unwrap() else {
            panic!()
        };
        assert_eq!(t.size(), 3);
    }

    #[test]
    fn upset_round_trip() {
        let j = r#"{"kind":"upset","poset":{"size":3,"covers":[[0,1],[0,2]]},"labels":["m","a","b"]}"#;
        let a: AlgebraJson = serde_json::from_str(j).unwrap();
        let alg = a.into_algebra().unwrap();
        assert_eq!(serde_json::to_string(&AlgebraJson::from(&alg)).unwrap(), j);
    }

    #[test]
    fn rejects_bad_tables() {
        let j = r#"{"kind":"table","size":2,"meet":[[0,0],[0,1]],"join":[[0,1],[1,1]],"star":[0,0],"zero":0,"one":1}"#;
        let a: AlgebraJson = serde_json::from_str(j).unwrap();
        assert!(matches!(a.into_algebra(), Err(Error::MalformedTables(_))));
    }
}
