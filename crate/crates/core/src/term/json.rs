use serde::de::Error as _;
use serde::ser::SerializeSeq;
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use serde_json::Value;

use crate::error::{Error, Result};

use super::{join, meet, star, Term};

impl Term {
    /// Nested-array form: `["meet", l, r]`, `["var", 1]`, `["zero"]`, ….
    pub fn to_json(&self) -> Value {
        serde_json::to_value(self).expect("terms always serialise")
    }

    pub fn from_json(v: &Value) -> Result<Term> {
        let bad = || Error::Invalid(format!("not a term: {v}"));
        let arr = v.as_array().ok_or_else(bad)?;
        let tag = arr.first().and_then(Value::as_str).ok_or_else(bad)?;
        let arg = |i: usize| arr.get(i).ok_or_else(bad).and_then(Term::from_json);
        match (tag, arr.len()) {
            ("zero", 1) => Ok(Term::Zero),
            ("one", 1) => Ok(Term::One),
            ("var", 2) => match arr[1].as_u64() {
                Some(i) if i >= 1 && i <= u32::MAX as u64 => Ok(Term::Var(i as u32)),
                _ => Err(bad()),
            },
            ("meet", 3) => Ok(meet(arg(1)?, arg(2)?)),
            ("join", 3) => Ok(join(arg(1)?, arg(2)?)),
            ("star", 2) => Ok(star(arg(1)?)),
            _ => Err(bad()),
        }
    }
}

impl Serialize for Term {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let (tag, len) = match self {
            Term::Zero => ("zero", 1),
            Term::One => ("one", 1),
            Term::Var(_) => ("var", 2),
            Term::Meet(..) => ("meet", 3),
            Term::Join(..) => ("join", 3),
            Term::Star(_) => ("star", 2),
        };
        let mut seq = s.serialize_seq(Some(len))?;
        seq.serialize_element(tag)?;
        match self {
            Term::Zero | Term::One => {}
            Term::Var(i) => seq.serialize_element(i)?,
            Term::Meet(a, b) | Term::Join(a, b) => {
                seq.serialize_element(a)?;
                seq.serialize_element(b)?;
            }
            Term::Star(a) => seq.serialize_element(a)?,
        }
        seq.end()
    }
}

impl<'de> Deserialize<'de> for Term {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let v = Value::deserialize(d)?;
        Term::from_json(&v).map_err(D::Error::custom)
    }
}
