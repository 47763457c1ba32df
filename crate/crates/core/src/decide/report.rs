use std::collections::hash_map::Entry;
use std::collections::HashMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::algebra::{build_chain, build_si, is_isomorphic, TableAlgebra};
use crate::error::{Error, Result};
use crate::free::{build_free, FreeAlgebra, Rank};
use crate::limits::Limits;
use crate::order::ElementSet;
use crate::term::{near_miss, qb_system, random_term, rewrite, Equation, QuasiIdentity, Term, Valuation};

use super::{check_quasi_identity, exhaustive, Strategy, Verdict};

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FreeCheck {
    pub algebra: String,
    pub verdict: Verdict,
}

/// A subalgebra isomorphic to `B̄_1` or `B̄_2`, generated by `element`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct SubalgebraWitness {
    pub algebra: String,
    pub element: usize,
    pub carrier: Vec<usize>,
    pub isomorphic_to: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct CompletenessReport {
    pub n: String,
    pub structurally_complete: bool,
    /// Every subquasivariety, smallest first, when they are all varieties.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub subquasivarieties: Option<Vec<String>>,
    /// `qb_3` in `B̄_3`.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub si_check: Option<FreeCheck>,
    /// `qb_3` in small free algebras.
    pub free_checks: Vec<FreeCheck>,
    pub subalgebra_witnesses: Vec<SubalgebraWitness>,
    pub note: String,
}

fn small_subalgebra(
    a: &TableAlgebra,
    name: &str,
    generate: impl Fn(usize) -> Option<Vec<usize>>,
    target: usize,
    limits: &Limits,
) -> Result<Option<SubalgebraWitness>> {
    let Some((element, carrier)) = a.elements().find_map(|x| generate(x).map(|c| (x, c))) else {
        return Ok(None);
    };
    let set = ElementSet::from_indices(a.size(), carrier.iter().copied());
    let (sub, elems) = a.subalgebra(&set)?;
    let b = build_si(target, limits)?;
    if is_isomorphic(&sub, &b).is_none() {
        return Err(Error::Inconsistent(format!(
            "{elems:?} in {name} is not isomorphic to si:{target}"
        )));
    }
    Ok(Some(SubalgebraWitness {
        algebra: name.to_string(),
        element,
        carrier: elems,
        isomorphic_to: format!("si:{target}"),
    }))
}

/// `{0, c ∨ c*, 1}` for the least `c` with `c ∨ c* ≠ 1`.
pub fn b1_subalgebra(a: &TableAlgebra, name: &str, limits: &Limits) -> Result<Option<SubalgebraWitness>> {
    let gen = |c: usize| {
        let d = a.join(c, a.star(c));
        (d != a.one()).then(|| sorted(vec![a.zero(), d, a.one()]))
    };
    small_subalgebra(a, name, gen, 1, limits)
}

/// `{0, d*, d**, d* ∨ d**, 1}` for the least `d` with `d* ∨ d** ≠ 1`.
pub fn b2_subalgebra(a: &TableAlgebra, name: &str, limits: &Limits) -> Result<Option<SubalgebraWitness>> {
    let gen = |d: usize| {
        let s = a.star(d);
        let ss = a.star(s);
        let j = a.join(s, ss);
        (j != a.one()).then(|| sorted(vec![a.zero(), s, ss, j, a.one()]))
    };
    small_subalgebra(a, name, gen, 2, limits)
}

fn sorted(mut v: Vec<usize>) -> Vec<usize> {
    v.sort_unstable();
    v.dedup();
    v
}

/// Whether `Pa_n` is structurally complete, with the evidence checked here.
///
/// For `n ≥ 3` the quasi-identity `qb_3` separates `B̄_3` from the free
/// algebras; it is checked in `F_n(1)` and `F_n(2)` only. For `n < 3` the
/// subquasivarieties are listed and the subalgebras that force them to be
/// varieties are exhibited in sample algebras.
pub fn structural_completeness_report(n: Rank, limits: &Limits) -> Result<CompletenessReport> {
    let small = match n {
        Rank::Finite(m) if m < 3 => Some(m),
        _ => None,
    };
    match small {
        None => {
            let q = qb_system(3);
            let b3 = build_si(3, limits)?;
            let si = exhaustive(&q, &b3, limits)?.in_algebra("si:3");
            let mut free_checks = Vec::new();
            for k in 1..=2 {
                let free = build_free(n, k, limits)?;
                let (table, _) = free.to_table(limits)?;
                let spec = format!("free:{n},{k}");
                let verdict = check_quasi_identity(&q, &table, Strategy::Pruned, limits)?.in_algebra(&spec);
                free_checks.push(FreeCheck { algebra: spec, verdict });
            }
            Ok(CompletenessReport {
                n: n.to_string(),
                structurally_complete: false,
                subquasivarieties: None,
                si_check: Some(FreeCheck {
                    algebra: "si:3".into(),
                    verdict: si,
                }),
                free_checks,
                subalgebra_witnesses: Vec::new(),
                note: "qb_3 is checked only in the free algebras listed".into(),
            })
        }
        Some(m) => {
            let subquasivarieties = (-1..=m as i64).map(|i| format!("Pa_{i}")).collect();
            let mut witnesses = Vec::new();
            let mut samples: Vec<(String, TableAlgebra)> = Vec::new();
            if m >= 1 {
                samples.push(("chain:4".into(), build_chain(4, limits)?));
                samples.push((format!("free:{m},1"), build_free(n, 1, limits)?.to_table(limits)?.0));
            }
            if m >= 2 {
                samples.push(("si:2".into(), build_si(2, limits)?));
            }
            for (name, a) in &samples {
                witnesses.extend(b1_subalgebra(a, name, limits)?);
                if m >= 2 {
                    witnesses.extend(b2_subalgebra(a, name, limits)?);
                }
            }
            Ok(CompletenessReport {
                n: n.to_string(),
                structurally_complete: true,
                subquasivarieties: Some(subquasivarieties),
                si_check: None,
                free_checks: Vec::new(),
                subalgebra_witnesses: witnesses,
                note: "every subquasivariety is a variety".into(),
            })
        }
    }
}

/// Normal-form equality against a full sweep of `B̄_n`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct OracleOutcome {
    pub nf_equal: bool,
    pub sweep_equal: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<Valuation<usize>>,
}

impl OracleOutcome {
    pub fn agree(&self) -> bool {
        self.nf_equal == self.sweep_equal
    }
}

fn compare(free: &FreeAlgebra, si: &TableAlgebra, s: &Term, t: &Term, limits: &Limits) -> Result<OracleOutcome> {
    let nf_equal = free.normal_form(s)? == free.normal_form(t)?;
    let q = QuasiIdentity {
        premises: vec![],
        conclusion: Equation::new(s.clone(), t.clone()),
    };
    let v = exhaustive(&q, si, limits)?;
    Ok(OracleOutcome {
        nf_equal,
        sweep_equal: v.holds,
        witness: v.witness,
    })
}

pub fn oracle_equivalence(s: &Term, t: &Term, n: usize, limits: &Limits) -> Result<OracleOutcome> {
    let k = s.max_var().max(t.max_var()) as usize;
    let free = build_free(Rank::Finite(n), k, limits)?;
    let si = build_si(n, limits)?;
    compare(&free, &si, s, t, limits)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct BatchReport {
    pub seed: u64,
    pub trials: usize,
    pub agreements: usize,
    /// Pairs whose normal forms coincide.
    pub equal: usize,
    /// `(n, s, t)` for each disagreement.
    pub disagreements: Vec<(usize, String, String)>,
}

/// Compares the two routes on seeded random pairs over `n ∈ {1,2,3}` and at
/// most three variables. A third of the pairs are independent, a third are
/// related by a valid rewrite and a third by a rewrite that is valid only in
/// some varieties.
pub fn oracle_batch(seed: u64, trials: usize, limits: &Limits) -> Result<BatchReport> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let cases: Vec<(usize, usize, Term, Term)> = (0..trials)
        .map(|i| {
            let n = rng.random_range(1..=3usize);
            let k = rng.random_range(1..=3u32);
            let s = random_term(&mut rng, 4, k);
            let t = match i % 3 {
                0 => random_term(&mut rng, 4, k),
                1 => rewrite(&mut rng, &s, k),
                _ => near_miss(&mut rng, &s),
            };
            let k = k.max(s.max_var()).max(t.max_var()) as usize;
            (n, k, s, t)
        })
        .collect();
    let mut free: HashMap<(usize, usize), FreeAlgebra> = HashMap::new();
    let mut si: HashMap<usize, TableAlgebra> = HashMap::new();
    for (n, k, _, _) in &cases {
        if let Entry::Vacant(slot) = free.entry((*n, *k)) {
            slot.insert(build_free(Rank::Finite(*n), *k, limits)?);
        }
        if let Entry::Vacant(slot) = si.entry(*n) {
            slot.insert(build_si(*n, limits)?);
        }
    }
    let outcomes = cases
        .par_iter()
        .map(|(n, k, s, t)| compare(&free[&(*n, *k)], &si[n], s, t, limits))
        .collect::<Result<Vec<_>>>()?;
    let mut report = BatchReport {
        seed,
        trials,
        agreements: 0,
        equal: 0,
        disagreements: Vec::new(),
    };
    for ((n, _, s, t), o) in cases.iter().zip(&outcomes) {
        report.equal += o.nf_equal as usize;
        if o.agree() {
            report.agreements += 1;
        } else {
            report.disagreements.push((*n, s.to_string(), t.to_string()));
        }
    }
    Ok(report)
}
