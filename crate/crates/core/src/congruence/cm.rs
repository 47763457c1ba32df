use rayon::prelude::*;
use serde::ser::SerializeStruct;
use serde::{Serialize, Serializer};

use crate::algebra::{build_si, is_isomorphic, join_irreducibles, quotient, TableAlgebra};
use crate::error::{Error, Result};
use crate::limits::Limits;
use crate::order::ElementSet;

use super::{all_congruences, extend, meet_irreducibles, Congruence};

/// A prime filter of a finite algebra; always of the form `↑p` with `p`
/// join-irreducible.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PrimeFilter {
    pub set: ElementSet,
    /// The least element of the filter.
    pub generator: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Storey {
    I,
    II,
}

impl Serialize for Storey {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(match self {
            Storey::I => "I",
            Storey::II => "II",
        })
    }
}

/// A completely meet-irreducible congruence with its cover and the data
/// attached to it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CmRecord {
    pub mu: Congruence,
    /// The unique cover of `mu` in the congruence lattice.
    pub mu_plus: Congruence,
    pub storey: Storey,
    /// The 1-class of `mu`, a prime filter.
    pub filter: PrimeFilter,
    /// Least element of the 1-class.
    pub psi: usize,
    /// Least element of the class directly below the 1-class.
    pub e_mu: usize,
}

impl Serialize for CmRecord {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut st = s.serialize_struct("CmRecord", 6)?;
        st.serialize_field("mu", &self.mu)?;
        st.serialize_field("storey", &self.storey)?;
        st.serialize_field("oneClass", &self.filter.set.iter().collect::<Vec<_>>())?;
        st.serialize_field("psi", &self.psi)?;
        st.serialize_field("eMu", &self.e_mu)?;
        st.serialize_field("muPlus", &self.mu_plus)?;
        st.end()
    }
}

/// Whether `s` is a proper, nonempty, join-prime filter.
pub fn is_prime_filter(a: &TableAlgebra, s: &ElementSet) -> bool {
    if s.universe() != a.size() || !s.contains(a.one()) || s.contains(a.zero()) {
        return false;
    }
    let members: Vec<usize> = s.iter().collect();
    let up_closed = members
        .iter()
        .all(|&x| a.elements().all(|y| !a.leq(x, y) || s.contains(y)));
    let meet_closed = members
        .iter()
        .all(|&x| members.iter().all(|&y| s.contains(a.meet(x, y))));
    let prime = a
        .elements()
        .all(|x| s.contains(x) || a.elements().all(|y| s.contains(y) || !s.contains(a.join(x, y))));
    up_closed && meet_closed && prime
}

/// `{↑p : p ∈ J(A)}` in index order of `p`.
pub fn prime_filters(a: &TableAlgebra) -> Vec<PrimeFilter> {
    join_irreducibles(a)
        .iter()
        .map(|p| PrimeFilter {
            set: a.principal_filter(p),
            generator: p,
        })
        .collect()
}

fn closed_under_double_star(a: &TableAlgebra, f: &ElementSet) -> bool {
    a.elements().all(|x| !f.contains(a.star(a.star(x))) || f.contains(x))
}

/// Prime filters `F` with `a** ∈ F ⟹ a ∈ F`.
pub fn i_type_filters(a: &TableAlgebra) -> Vec<PrimeFilter> {
    prime_filters(a)
        .into_iter()
        .filter(|f| closed_under_double_star(a, &f.set))
        .collect()
}

/// Builds the unique completely meet-irreducible congruence with 1-class `f`.
///
/// With `F̄ = {a : a** ∈ F}`: if `F̄ = F` the congruence has the two classes
/// `F` and its complement. Otherwise its classes are `F`, `F̄ ∖ F`, and the
/// classes outside `F̄` of the congruence `α` that separates elements by
/// membership in the I-type filters containing `F̄`; `α` is then the cover.
pub fn cm_from_prime_filter(a: &TableAlgebra, f: &ElementSet) -> Result<CmRecord> {
    if !is_prime_filter(a, f) {
        return Err(Error::NotPrime(format!("{:?}", f)));
    }
    let n = a.size();
    let psi = a.meet_all(f.iter());
    let filter = PrimeFilter {
        set: f.clone(),
        generator: psi,
    };
    let fbar = ElementSet::from_indices(n, a.elements().filter(|&x| f.contains(a.star(a.star(x)))));
    let record = if &fbar == f {
        let mu = Congruence::from_key(n, |x| f.contains(x));
        let e_mu = f.complement().first().expect("prime filters are proper");
        CmRecord {
            mu,
            mu_plus: Congruence::full(n),
            storey: Storey::I,
            filter,
            psi,
            e_mu,
        }
    } else {
        let above: Vec<ElementSet> = i_type_filters(a)
            .into_iter()
            .map(|g| g.set)
            .filter(|g| fbar.is_subset(g))
            .collect();
        let alpha = Congruence::from_key(n, |x| above.iter().map(|g| g.contains(x)).collect::<Vec<bool>>());
        // 0: the 1-class, 1: F̄ ∖ F, 2 + c: the α-class c outside F̄
        let mu = Congruence::from_key(n, |x| {
            if f.contains(x) {
                0
            } else if fbar.contains(x) {
                1
            } else {
                2 + alpha.class_of(x)
            }
        });
        let e_mu = fbar.difference(f).first().expect("F̄ ∖ F is nonempty here");
        let cover = extend(a, &mu, e_mu, a.one());
        if cover != alpha {
            return Err(Error::Inconsistent(format!(
                "cover of the congruence for {:?} is not the I-type separation",
                f
            )));
        }
        CmRecord {
            mu,
            mu_plus: alpha,
            storey: Storey::II,
            filter,
            psi,
            e_mu,
        }
    };
    if let Some((x, y)) = record.mu.compatibility_failure(a) {
        return Err(Error::Inconsistent(format!(
            "partition built from {:?} separates images of {x} and {y}",
            f
        )));
    }
    let q = quotient(a, &record.mu)?;
    let rank = si_rank(&q).ok_or_else(|| {
        Error::Inconsistent(format!(
            "quotient by the congruence for {:?} is not subdirectly irreducible",
            f
        ))
    })?;
    if (rank == 0) != (record.storey == Storey::I) {
        return Err(Error::Inconsistent("storey does not match the quotient".into()));
    }
    Ok(record)
}

/// `n` such that `q ≅ B̄_n`, if any.
fn si_rank(q: &TableAlgebra) -> Option<usize> {
    let size = q.size();
    let n = if size == 2 {
        0
    } else if size > 2 && (size - 1).is_power_of_two() {
        (size - 1).trailing_zeros() as usize
    } else {
        return None;
    };
    let si = build_si(
        n,
        &Limits {
            table_cap: size,
            ..Limits::default()
        },
    )
    .ok()?;
    is_isomorphic(q, &si).map(|_| n)
}

/// One record per prime filter, in order of the join-irreducible generating it.
///
/// Small algebras are cross-checked against the meet-irreducibles of the full
/// congruence lattice.
pub fn cm_all(a: &TableAlgebra, limits: &Limits) -> Result<Vec<CmRecord>> {
    let records: Vec<CmRecord> = prime_filters(a)
        .par_iter()
        .map(|f| cm_from_prime_filter(a, &f.set))
        .collect::<Result<_>>()?;
    if a.size() <= limits.oracle_cap {
        let mut oracle = meet_irreducibles(&all_congruences(a, limits)?);
        let mut ours: Vec<Congruence> = records.iter().map(|r| r.mu.clone()).collect();
        oracle.sort();
        ours.sort();
        if oracle != ours {
            return Err(Error::Inconsistent(
                "constructed congruences differ from the meet-irreducibles of Con".into(),
            ));
        }
    }
    Ok(records)
}

/// `μ ≤^Cm ν ⟺ 1/μ ⊆ 1/ν`.
pub fn cm_leq(r: &CmRecord, s: &CmRecord) -> bool {
    r.filter.set.is_subset(&s.filter.set)
}

/// Indices of the records `μ` with `(x, 1) ∈ μ`.
pub fn m_hat(a: &TableAlgebra, records: &[CmRecord], x: usize) -> ElementSet {
    ElementSet::from_indices(
        records.len(),
        (0..records.len()).filter(|&i| records[i].mu.same(x, a.one())),
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{build_chain, build_si};

    fn lim() -> Limits {
        Limits::default()
    }

    #[test]
    fn b1_records() {
        let b1 = build_si(1, &lim()).unwrap();
        assert_eq!(prime_filters(&b1).len(), 2);
        let itype = i_type_filters(&b1);
        assert_eq!(itype.len(), 1);
        assert_eq!(itype[0].generator, 1);
        let up_e = cm_from_prime_filter(&b1, &b1.principal_filter(1)).unwrap();
        assert_eq!(up_e.storey, Storey::I);
        assert_eq!(up_e.mu.class_ids(), [0, 1, 1]);
        let up_1 = cm_from_prime_filter(&b1, &b1.principal_filter(2)).unwrap();
        assert_eq!(up_1.storey, Storey::II);
        assert!(up_1.mu.is_identity());
        assert_eq!(up_1.mu_plus, up_e.mu);
        assert_eq!(up_1.e_mu, 1);
    }

    #[test]
    fn not_prime() {
        let b2 = build_si(2, &lim()).unwrap();
        // ↑e is a filter but not prime: a ∨ b = e
        let err = cm_from_prime_filter(&b2, &b2.principal_filter(3)).unwrap_err();
        assert!(matches!(err, Error::NotPrime(_)));
    }

    #[test]
    fn counts_and_oracle() {
        for n in 1..4 {
            let b = build_si(n, &lim()).unwrap();
            assert_eq!(cm_all(&b, &lim()).unwrap().len(), n + 1);
        }
        let c4 = build_chain(4, &lim()).unwrap();
        let recs = cm_all(&c4, &lim()).unwrap();
        assert_eq!(recs.len(), 3);
        assert_eq!(recs.iter().filter(|r| r.storey == Storey::I).count(), 1);
        // ≤^Cm is a chain on C_4
        for r in &recs {
            for s in &recs {
                assert!(cm_leq(r, s) || cm_leq(s, r));
            }
        }
        // but inclusion is not
        let incomparable = recs
            .iter()
            .flat_map(|r| recs.iter().map(move |s| (r, s)))
            .filter(|(r, s)| !r.mu.leq(&s.mu) && !s.mu.leq(&r.mu))
            .count();
        assert_eq!(incomparable, 2);
    }

    #[test]
    fn m_hat_extremes() {
        let b2 = build_si(2, &lim()).unwrap();
        let recs = cm_all(&b2, &lim()).unwrap();
        assert!(m_hat(&b2, &recs, 4).is_full());
        assert!(m_hat(&b2, &recs, 0).is_empty());
        assert_eq!(m_hat(&b2, &recs, 1).count(), 1);
    }

    #[test]
    fn record_json() {
        let b1 = build_si(1, &lim()).unwrap();
        let r = cm_from_prime_filter(&b1, &b1.principal_filter(2)).unwrap();
        let j = serde_json::to_string(&r).unwrap();
        assert_eq!(
            j,
            r#"{"mu":[0,1,2],"storey":"II","oneClass":[2],"psi":2,"eMu":1,"muPlus":[0,1,1]}"#
        );
    }
}
