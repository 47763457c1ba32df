//! Free algebras `F_n(k)` built from their join-irreducible skeleton.

mod distributive;
mod h3;

pub use distributive::{
    count_monotone_functions, free_distributive, quotient_to_distributive, stone_decompose, StoneDecomposition,
};
pub use h3::{h3_poset, homomorphism_g, GeneratorMap, H3Posets};

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use itertools::Itertools;
use num_bigint::BigUint;
use serde::{Deserialize, Serialize};

use crate::algebra::{TableAlgebra, UpsetAlgebra};
use crate::error::{Error, Result};
use crate::limits::Limits;
use crate::order::{ElementSet, Poset};
use crate::term::{jirr_term, jirr_term_simplified, join_all, Program, Term};

/// The index `n` of the variety `Pa_n`, possibly `ω`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Rank {
    Finite(usize),
    Omega,
}

impl Rank {
    /// The bound on family sizes that matters for `k` generators: `ω` and
    /// anything above `2^k` saturate at `2^k`.
    pub fn effective(self, k: usize) -> usize {
        let full = if k < usize::BITS as usize - 1 {
            1usize << k
        } else {
            usize::MAX
        };
        match self {
            Rank::Finite(n) => n.min(full),
            Rank::Omega => full,
        }
    }
}

impl fmt::Display for Rank {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Rank::Finite(n) => write!(f, "{n}"),
            Rank::Omega => f.write_str("omega"),
        }
    }
}

impl FromStr for Rank {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "omega" | "ω" | "w" => Ok(Rank::Omega),
            _ => s
                .parse::<usize>()
                .map(Rank::Finite)
                .map_err(|_| Error::Invalid(format!("`{s}` is neither a number nor omega"))),
        }
    }
}

impl From<usize> for Rank {
    fn from(n: usize) -> Self {
        Rank::Finite(n)
    }
}

/// A pair `(𝒯, L)`: a nonempty family of subsets of `{1..k}` and a subset
/// `L` of every member. Subsets are bit masks, bit `i-1` standing for `xi`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct JIndex {
    pub k: usize,
    /// Members of the family, strictly increasing.
    pub family: Vec<u64>,
    pub l: u64,
}

impl JIndex {
    pub fn new(k: usize, mut family: Vec<u64>, l: u64) -> Result<Self> {
        if k > 6 {
            return Err(Error::Invalid(format!("at most 6 generators are supported, got {k}")));
        }
        family.sort_unstable();
        family.dedup();
        if family.is_empty() {
            return Err(Error::BadIndex("empty family".into()));
        }
        let bound = 1u64 << k;
        if let Some(&t) = family.iter().find(|&&t| t >= bound) {
            return Err(Error::BadIndex(format!("subset mask {t} exceeds {k} generators")));
        }
        if l & !family.iter().fold(bound - 1, |a, &t| a & t) != 0 {
            return Err(Error::BadIndex("L is not contained in every member".into()));
        }
        Ok(JIndex { k, family, l })
    }

    /// Whether this names an atom, i.e. `𝒯 = {T}` and `L = T`.
    pub fn is_atom(&self) -> bool {
        self.family.len() == 1 && self.l == self.family[0]
    }

    pub fn contains_subset(&self, t: u64) -> bool {
        self.family.binary_search(&t).is_ok()
    }

    fn family_subset(&self, other: &JIndex) -> bool {
        self.family.iter().all(|t| other.contains_subset(*t))
    }

    /// Order of the base poset: `(𝒯, L) ≤ (𝒮, K)` iff `𝒮 ⊆ 𝒯` and `L ⊆ K`.
    /// Equivalently `p^K_𝒮 ≤ p^L_𝒯` in the algebra.
    pub fn base_leq(&self, other: &JIndex) -> bool {
        other.family_subset(self) && self.l & !other.l == 0
    }

    /// Canonical order: family size, then family masks, then `L`.
    pub fn cmp_canonical(&self, other: &JIndex) -> Ordering {
        self.family
            .len()
            .cmp(&other.family.len())
            .then_with(|| self.family.cmp(&other.family))
            .then_with(|| self.l.cmp(&other.l))
    }

    /// The literal join-irreducible term `(⋁ x_T)** ∧ ⋀_{i∈L} xi`.
    pub fn term(&self) -> Term {
        jirr_term(&self.family, self.l, self.k).expect("validated on construction")
    }

    /// A shorter term denoting the same element.
    pub fn simplified_term(&self) -> Term {
        jirr_term_simplified(&self.family, self.l, self.k).expect("validated on construction")
    }
}

fn mask_to_vars(m: u64) -> Vec<u32> {
    (0..64).filter(|i| m >> i & 1 == 1).map(|i| i + 1).collect()
}

#[derive(Serialize, Deserialize)]
struct JIndexJson {
    #[serde(rename = "T")]
    family: Vec<Vec<u32>>,
    #[serde(rename = "L")]
    l: Vec<u32>,
}

impl Serialize for JIndex {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        JIndexJson {
            family: self.family.iter().map(|&t| mask_to_vars(t)).collect(),
            l: mask_to_vars(self.l),
        }
        .serialize(s)
    }
}

impl JIndex {
    /// Reads the `{"T": [[..]], "L": [..]}` form for `k` generators.
    pub fn from_json(v: &serde_json::Value, k: usize) -> Result<JIndex> {
        let j: JIndexJson = serde_json::from_value(v.clone())
            .map_err(|e| Error::Invalid(format!("not a join-irreducible index: {e}")))?;
        let mask = |vs: &[u32]| -> Result<u64> {
            vs.iter().try_fold(0u64, |m, &i| {
                if i >= 1 && (i as usize) <= k {
                    Ok(m | 1 << (i - 1))
                } else {
                    Err(Error::IndexOutOfRange {
                        index: i as usize,
                        bound: k,
                    })
                }
            })
        };
        let family = j.family.iter().map(|t| mask(t)).collect::<Result<_>>()?;
        JIndex::new(k, family, mask(&j.l)?)
    }
}

/// `∑_ℓ C(k,ℓ) ∑_{m=1}^{n} C(2^{k-ℓ}, m)`, the number of join-irreducibles
/// of `F_n(k)`. For `n = 0` this is `2^k`, the atoms of the free Boolean
/// algebra.
pub fn count_jirr(n: Rank, k: usize) -> BigUint {
    let two = BigUint::from(2u32);
    if n == Rank::Finite(0) {
        return two.pow(k as u32);
    }
    let mut total = BigUint::ZERO;
    for l in 0..=k {
        let outer = binomial(&BigUint::from(k), l);
        let big_n = two.pow((k - l) as u32);
        let saturated = match n {
            Rank::Omega => true,
            Rank::Finite(n) => BigUint::from(n) >= big_n,
        };
        let inner = if saturated {
            // ∑_{m=1}^{N} C(N, m) = 2^N - 1
            two.pow(1u32 << (k - l)) - 1u32
        } else {
            let Rank::Finite(n) = n else { unreachable!() };
            let mut c = BigUint::from(1u32);
            let mut sum = BigUint::ZERO;
            for m in 1..=n {
                c = c * (&big_n - BigUint::from(m - 1)) / BigUint::from(m);
                sum += &c;
            }
            sum
        };
        total += outer * inner;
    }
    total
}

fn binomial(n: &BigUint, m: usize) -> BigUint {
    let mut c = BigUint::from(1u32);
    for i in 0..m {
        let i_big = BigUint::from(i);
        if &i_big >= n {
            return BigUint::ZERO;
        }
        c = c * (n - &i_big) / BigUint::from(i + 1);
    }
    c
}

/// All indices of `F_n(k)` in canonical order.
pub fn enumerate_jindices(n: Rank, k: usize) -> Result<Vec<JIndex>> {
    if k > 6 {
        return Err(Error::Invalid(format!("at most 6 generators are supported, got {k}")));
    }
    let subsets = 1u64 << k;
    let mut out = Vec::new();
    if n == Rank::Finite(0) {
        for t in 0..subsets {
            out.push(JIndex {
                k,
                family: vec![t],
                l: t,
            });
        }
    } else {
        for m in 1..=n.effective(k) {
            for family in (0..subsets).combinations(m) {
                let common = family.iter().fold(subsets - 1, |a, &t| a & t);
                // submasks of `common`, ascending
                let mut subs = Vec::new();
                let mut s = common;
                loop {
                    subs.push(s);
                    if s == 0 {
                        break;
                    }
                    s = (s - 1) & common;
                }
                subs.reverse();
                for l in subs {
                    out.push(JIndex {
                        k,
                        family: family.clone(),
                        l,
                    });
                }
            }
        }
    }
    out.sort_by(|a, b| a.cmp_canonical(b));
    Ok(out)
}

/// `F_n(k)` as the upset algebra over `(J, ≥)`.
#[derive(Debug, Clone)]
pub struct FreeAlgebra {
    n: Rank,
    k: usize,
    index: Vec<JIndex>,
    algebra: UpsetAlgebra,
    generators: Vec<ElementSet>,
}

/// Builds `F_n(k)`; fails when the index set exceeds the poset cap.
pub fn build_free(n: Rank, k: usize, limits: &Limits) -> Result<FreeAlgebra> {
    let count = count_jirr(n, k);
    if count > BigUint::from(limits.poset_cap) {
        let actual = u128::try_from(&count).unwrap_or(u128::MAX);
        return Err(Error::cap(
            "join-irreducibles of the free algebra",
            limits.poset_cap,
            actual,
        ));
    }
    let index = enumerate_jindices(n, k)?;
    let base = Poset::from_leq(index.len(), |i, j| index[i].base_leq(&index[j]))?;
    let labels = index.iter().map(|j| j.simplified_term().to_string()).collect();
    let algebra = UpsetAlgebra::new(base).with_labels(labels);
    let generators = (0..k)
        .map(|i| ElementSet::from_indices(index.len(), (0..index.len()).filter(|&p| index[p].l >> i & 1 == 1)))
        .collect();
    Ok(FreeAlgebra {
        n,
        k,
        index,
        algebra,
        generators,
    })
}

impl FreeAlgebra {
    pub fn n(&self) -> Rank {
        self.n
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn index(&self) -> &[JIndex] {
        &self.index
    }

    pub fn algebra(&self) -> &UpsetAlgebra {
        &self.algebra
    }

    pub fn base(&self) -> &Poset {
        self.algebra.base()
    }

    /// Image of `x_{i+1}`.
    pub fn generator(&self, i: usize) -> &ElementSet {
        &self.generators[i]
    }

    pub fn generators(&self) -> &[ElementSet] {
        &self.generators
    }

    /// Number of elements, if at most `cap`.
    pub fn element_count(&self, cap: u128) -> Option<u128> {
        self.algebra.count(cap)
    }

    /// Position of an index in the canonical list.
    pub fn position(&self, j: &JIndex) -> Option<usize> {
        self.index.binary_search_by(|x| x.cmp_canonical(j)).ok()
    }

    /// Operation tables; element `i` is the `i`-th upset in canonical order.
    pub fn to_table(&self, limits: &Limits) -> Result<(TableAlgebra, Vec<ElementSet>)> {
        self.algebra.to_table(limits)
    }

    /// Evaluates a term at the generators.
    pub fn eval(&self, t: &Term) -> Result<ElementSet> {
        let max = t.max_var() as usize;
        if max > self.k {
            return Err(Error::IndexOutOfRange {
                index: max,
                bound: self.k,
            });
        }
        let p = Program::compile(&[t]);
        let slots: Vec<ElementSet> = p
            .vars()
            .iter()
            .map(|&v| self.generators[v as usize - 1].clone())
            .collect();
        Ok(p.eval(&self.algebra, &slots).pop().expect("one root"))
    }

    /// The join of the simplified terms of the maximal join-irreducibles
    /// below `u`, in canonical order.
    pub fn term_of(&self, u: &ElementSet) -> Term {
        let gens = self.base().min_elements(u);
        join_all(gens.iter().map(|p| self.index[p].simplified_term()))
    }

    /// Normal form of a term whose variables are among `x1..xk`.
    pub fn normal_form(&self, t: &Term) -> Result<Term> {
        Ok(self.term_of(&self.eval(t)?))
    }
}

/// Normal form in `Pa_n`, computed in `F_n(k)` with `k` the largest
/// variable index of `t`.
pub fn normal_form(t: &Term, n: Rank, limits: &Limits) -> Result<Term> {
    normal_form_at(t, n, t.max_var() as usize, limits)
}

/// Normal form computed in `F_n(k)` for a given `k ≥` the largest variable.
pub fn normal_form_at(t: &Term, n: Rank, k: usize, limits: &Limits) -> Result<Term> {
    build_free(n, k, limits)?.normal_form(t)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{build_si, is_isomorphic, join_irreducibles, product};
    use crate::term::parse;

    fn lim() -> Limits {
        Limits::default()
    }

    #[test]
    fn counts_match_enumeration() {
        let expected = [(1, 9u32), (2, 17), (3, 21), (4, 22)];
        for (n, c) in expected {
            assert_eq!(count_jirr(Rank::Finite(n), 2), BigUint::from(c));
        }
        for k in 0..=3 {
            for n in 0..=8 {
                let e = enumerate_jindices(Rank::Finite(n), k).unwrap();
                assert_eq!(BigUint::from(e.len()), count_jirr(Rank::Finite(n), k), "n={n} k={k}");
            }
        }
        assert_eq!(count_jirr(Rank::Omega, 3), BigUint::from(310u32));
        assert_eq!(count_jirr(Rank::Finite(3), 3), BigUint::from(144u32));
    }

    #[test]
    fn one_generator() {
        let f1 = build_free(Rank::Finite(1), 1, &lim()).unwrap();
        let (t1, _) = f1.to_table(&lim()).unwrap();
        assert_eq!(t1.size(), 6);
        let b1 = build_si(1, &lim()).unwrap();
        let b0 = build_si(0, &lim()).unwrap();
        assert!(is_isomorphic(&t1, &product(&b1, &b0, &lim()).unwrap()).is_some());
        let f2 = build_free(Rank::Finite(2), 1, &lim()).unwrap();
        let labels: Vec<&str> = f2.algebra().labels().iter().map(String::as_str).collect();
        assert_eq!(labels, ["x1*", "x1**", "x1", "1"]);
        let (t2, _) = f2.to_table(&lim()).unwrap();
        assert_eq!(t2.size(), 7);
        assert_eq!(join_irreducibles(&t2).count(), 4);
        let f0 = build_free(Rank::Finite(0), 1, &lim()).unwrap();
        assert_eq!(f0.element_count(100), Some(4));
    }

    #[test]
    fn normal_forms() {
        let nf = |s: &str, n: usize| {
            normal_form(&parse(s).unwrap(), Rank::Finite(n), &lim())
                .unwrap()
                .to_string()
        };
        assert_eq!(nf("x1 & x1*", 3), "0");
        assert_eq!(nf("(x1 | x1*)**", 2), "1");
        assert_eq!(nf("x1*", 2), "x1*");
        assert_eq!(nf("x1", 1), "x1");
        assert_eq!(nf("1", 1), "1");
        assert_eq!(nf("x1* | x1**", 1), "x1* | x1**");
        assert_eq!(nf("(x1 | x1*)**", 1), "x1* | x1**");
        let once = normal_form(&parse("x1 & x2* | x2**").unwrap(), Rank::Omega, &lim()).unwrap();
        let twice = normal_form(&once, Rank::Omega, &lim()).unwrap();
        assert_eq!(once, twice);
    }

    #[test]
    fn jindex_json() {
        let j = JIndex::new(2, vec![3, 1], 1).unwrap();
        assert_eq!(serde_json::to_string(&j).unwrap(), r#"{"T":[[1],[1,2]],"L":[1]}"#);
        let back = JIndex::from_json(&serde_json::to_value(&j).unwrap(), 2).unwrap();
        assert_eq!(back, j);
        assert!(JIndex::new(2, vec![1, 2], 1).is_err());
        assert!(JIndex::new(2, vec![], 0).is_err());
    }

    #[test]
    fn rank_parsing() {
        assert_eq!("omega".parse::<Rank>().unwrap(), Rank::Omega);
        assert_eq!("3".parse::<Rank>().unwrap(), Rank::Finite(3));
        assert!("x".parse::<Rank>().is_err());
        assert_eq!(Rank::Omega.effective(2), 4);
        assert_eq!(Rank::Finite(9).effective(2), 4);
    }

    #[test]
    fn cap() {
        let small = Limits { poset_cap: 16, ..lim() };
        assert!(matches!(
            build_free(Rank::Finite(2), 2, &small),
            Err(Error::CapExceeded { .. })
        ));
    }
}
