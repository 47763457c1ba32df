//! Deciding identities and quasi-identities.
//!
//! Identities of `Pa_n` are decided by comparing normal forms; a refuting
//! valuation is then searched for in a subdirectly irreducible algebra.
//! Quasi-identities are checked in a concrete finite algebra, either by a
//! full sweep or by a pruned search.

mod report;
mod sweep;

pub use report::{
    b1_subalgebra, b2_subalgebra, oracle_batch, oracle_equivalence, structural_completeness_report, BatchReport,
    CompletenessReport, FreeCheck, OracleOutcome, SubalgebraWitness,
};
pub use sweep::{exhaustive, pruned};

pub use crate::term::{Equation, QuasiIdentity};

use std::fmt;
use std::str::FromStr;

use serde::Serialize;

use crate::algebra::{build_si, TableAlgebra};
use crate::error::{Error, Result};
use crate::free::{build_free, Rank};
use crate::limits::Limits;
use crate::term::Valuation;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Method {
    NormalForm,
    Exhaustive,
    Pruned,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct Verdict {
    pub holds: bool,
    /// Present exactly when `holds` is false.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<Valuation<usize>>,
    /// The algebra the witness lives in, as an algebra specifier.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub algebra: Option<String>,
    pub method: Method,
    pub budget_used: u128,
}

impl Verdict {
    pub fn new(holds: bool, witness: Option<Valuation<usize>>, method: Method, budget_used: u128) -> Self {
        Verdict {
            holds,
            witness,
            algebra: None,
            method,
            budget_used,
        }
    }

    pub fn in_algebra(mut self, spec: impl Into<String>) -> Self {
        if self.witness.is_some() {
            self.algebra = Some(spec.into());
        }
        self
    }
}

/// `Pa` (all p-algebras) or one of its proper subvarieties `Pa_n`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Variety {
    Pa,
    PaN(usize),
}

impl Variety {
    pub fn rank(self) -> Rank {
        match self {
            Variety::Pa => Rank::Omega,
            Variety::PaN(n) => Rank::Finite(n),
        }
    }
}

impl fmt::Display for Variety {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Variety::Pa => write!(f, "Pa"),
            Variety::PaN(n) => write!(f, "Pa{n}"),
        }
    }
}

impl FromStr for Variety {
    type Err = Error;

    /// Accepts `pa`, `pa3`, `pa_3`, `pa:3` and a bare rank (`3`, `omega`).
    fn from_str(s: &str) -> Result<Self> {
        let lower = s.trim().to_ascii_lowercase();
        let rest = lower.strip_prefix("pa").unwrap_or(&lower);
        let rest = rest.trim_start_matches(['_', ':']);
        if rest.is_empty() {
            return Ok(Variety::Pa);
        }
        match rest.parse::<Rank>() {
            Ok(Rank::Omega) => Ok(Variety::Pa),
            Ok(Rank::Finite(n)) => Ok(Variety::PaN(n)),
            Err(_) => Err(Error::Invalid(format!("unknown variety `{s}`"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Strategy {
    Exhaustive,
    #[default]
    Pruned,
}

impl FromStr for Strategy {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "exhaustive" => Ok(Strategy::Exhaustive),
            "pruned" => Ok(Strategy::Pruned),
            _ => Err(Error::Invalid(format!("unknown strategy `{s}`"))),
        }
    }
}

/// Whether both sides have the same normal form in `Pa_n`, computed in the
/// free algebra on the largest variable index of either side.
pub fn identity_holds(e: &Equation, v: Variety, limits: &Limits) -> Result<bool> {
    let k = e.lhs.max_var().max(e.rhs.max_var()) as usize;
    let free = build_free(v.rank(), k, limits)?;
    Ok(free.normal_form(&e.lhs)? == free.normal_form(&e.rhs)?)
}

/// Decides an identity; when it fails, the witness is the first refuting
/// valuation in the smallest `B̄_m` that refutes it.
pub fn check_identity(e: &Equation, v: Variety, limits: &Limits) -> Result<Verdict> {
    if identity_holds(e, v, limits)? {
        return Ok(Verdict::new(true, None, Method::NormalForm, 0));
    }
    let k = e.lhs.max_var().max(e.rhs.max_var()) as usize;
    let top = v.rank().effective(k);
    let sizes: Vec<usize> = match v {
        Variety::Pa => (0..=top).collect(),
        Variety::PaN(_) => vec![top],
    };
    let q = QuasiIdentity {
        premises: vec![],
        conclusion: e.clone(),
    };
    let mut used = 0u128;
    for m in sizes {
        let b = build_si(m, limits)?;
        let left = Limits {
            budget: limits.budget.saturating_sub(used),
            ..*limits
        };
        let r = exhaustive(&q, &b, &left)?;
        used += r.budget_used;
        if !r.holds {
            return Ok(Verdict { budget_used: used, ..r }.in_algebra(format!("si:{m}")));
        }
    }
    Err(Error::Inconsistent(format!(
        "normal forms of `{}` and `{}` differ but no refuting valuation was found",
        e.lhs, e.rhs
    )))
}

/// Checks a quasi-identity in one finite algebra.
pub fn check_quasi_identity(
    q: &QuasiIdentity,
    a: &TableAlgebra,
    strategy: Strategy,
    limits: &Limits,
) -> Result<Verdict> {
    match strategy {
        Strategy::Exhaustive => exhaustive(q, a, limits),
        Strategy::Pruned => pruned(q, a, limits),
    }
}

/// Checks a quasi-identity in `F_n(k + extra)`, `k` the largest variable
/// index. The full sweep is used when it fits the budget.
pub fn admissible_in_free(q: &QuasiIdentity, n: Rank, extra: usize, limits: &Limits) -> Result<Verdict> {
    let k = q.vars().last().copied().unwrap_or(0) as usize + extra;
    let free = build_free(n, k, limits)?;
    let (table, _) = free.to_table(limits)?;
    let needed = (table.size() as u128).checked_pow(q.vars().len() as u32);
    let strategy = match needed {
        Some(v) if v <= limits.budget => Strategy::Exhaustive,
        _ => Strategy::Pruned,
    };
    Ok(check_quasi_identity(q, &table, strategy, limits)?.in_algebra(format!("free:{n},{k}")))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::term::{parse, qb_system, Term};

    fn lim() -> Limits {
        Limits::default()
    }

    fn eq(l: &str, r: &str) -> Equation {
        Equation::new(parse(l).unwrap(), parse(r).unwrap())
    }

    #[test]
    fn varieties_parse() {
        assert_eq!("pa".parse::<Variety>().unwrap(), Variety::Pa);
        assert_eq!("Pa2".parse::<Variety>().unwrap(), Variety::PaN(2));
        assert_eq!("pa_omega".parse::<Variety>().unwrap(), Variety::Pa);
        assert_eq!("1".parse::<Variety>().unwrap(), Variety::PaN(1));
        assert!("pb".parse::<Variety>().is_err());
    }

    #[test]
    fn identities() {
        let stone = eq("x1* | x1**", "1");
        assert!(check_identity(&stone, Variety::PaN(1), &lim()).unwrap().holds);
        let v = check_identity(&stone, Variety::PaN(2), &lim()).unwrap();
        assert!(!v.holds);
        assert_eq!(v.algebra.as_deref(), Some("si:2"));
        assert_eq!(v.witness.as_ref().unwrap().get(1), Some(&1));
        let v = check_identity(&stone, Variety::Pa, &lim()).unwrap();
        assert_eq!(v.algebra.as_deref(), Some("si:2"));
        let json = serde_json::to_string(&v).unwrap();
        assert_eq!(
            json,
            r#"{"holds":false,"witness":{"x1":1},"algebra":"si:2","method":"exhaustive","budgetUsed":7}"#
        );
        let h = check_identity(&eq("x1 & (x1 & x2)*", "x1 & x2*"), Variety::Pa, &lim()).unwrap();
        assert_eq!(
            serde_json::to_string(&h).unwrap(),
            r#"{"holds":true,"method":"normal-form","budgetUsed":0}"#
        );
        assert!(
            check_identity(&eq("x1", "x1**"), Variety::PaN(0), &lim())
                .unwrap()
                .holds
        );
        let closed = Equation::new(Term::Zero, Term::One);
        assert!(!check_identity(&closed, Variety::Pa, &lim()).unwrap().holds);
    }

    #[test]
    fn admissibility() {
        let q = QuasiIdentity {
            premises: vec![eq("x1*", "0")],
            conclusion: eq("x1", "1"),
        };
        let v = admissible_in_free(&q, Rank::Finite(1), 0, &lim()).unwrap();
        assert!(!v.holds);
        assert_eq!(v.algebra.as_deref(), Some("free:1,1"));
        let q3 = qb_system(3);
        let v = admissible_in_free(&q3, Rank::Finite(3), 0, &lim());
        assert!(matches!(v, Err(Error::CapExceeded { .. })));
    }
}
