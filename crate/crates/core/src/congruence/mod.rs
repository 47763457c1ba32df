//! Congruences of finite table algebras and the completely meet-irreducible
//! congruences built from prime filters.

mod cm;

pub use cm::{
    cm_all, cm_from_prime_filter, cm_leq, i_type_filters, is_prime_filter, m_hat, prime_filters, CmRecord, PrimeFilter,
    Storey,
};

use std::collections::{HashMap, HashSet};
use std::fmt;
use std::hash::Hash;

use petgraph::unionfind::UnionFind;
use serde::{Serialize, Serializer};

use crate::algebra::TableAlgebra;
use crate::error::{Error, Result};
use crate::limits::Limits;
use crate::order::ElementSet;

/// A partition of `0..len`, stored as one class id per element.
///
/// Ids are compact and numbered in order of least member, so two equal
/// partitions always have equal id vectors.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Congruence {
    ids: Vec<u32>,
    classes: usize,
}

impl Congruence {
    /// Normalises arbitrary labels into canonical class ids.
    pub fn from_key<K: Hash + Eq>(len: usize, mut key: impl FnMut(usize) -> K) -> Self {
        let mut seen = HashMap::new();
        let ids = (0..len)
            .map(|x| {
                let next = seen.len() as u32;
                *seen.entry(key(x)).or_insert(next)
            })
            .collect();
        Congruence {
            ids,
            classes: seen.len(),
        }
    }

    pub fn from_ids(ids: &[usize]) -> Self {
        Self::from_key(ids.len(), |x| ids[x])
    }

    pub fn identity(len: usize) -> Self {
        Self::from_key(len, |x| x)
    }

    pub fn full(len: usize) -> Self {
        Self::from_key(len, |_| ())
    }

    fn from_union_find(len: usize, mut uf: UnionFind<usize>) -> Self {
        Self::from_key(len, |x| uf.find_mut(x))
    }

    pub fn len(&self) -> usize {
        self.ids.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ids.is_empty()
    }

    pub fn class_ids(&self) -> &[u32] {
        &self.ids
    }

    pub fn num_classes(&self) -> usize {
        self.classes
    }

    pub fn class_of(&self, x: usize) -> usize {
        self.ids[x] as usize
    }

    pub fn same(&self, x: usize, y: usize) -> bool {
        self.ids[x] == self.ids[y]
    }

    /// The class of `x` as a set.
    pub fn class(&self, x: usize) -> ElementSet {
        let c = self.ids[x];
        ElementSet::from_indices(self.len(), (0..self.len()).filter(|&y| self.ids[y] == c))
    }

    /// All classes, in id order.
    pub fn classes(&self) -> Vec<ElementSet> {
        let mut out = vec![ElementSet::empty(self.len()); self.classes];
        for (x, &c) in self.ids.iter().enumerate() {
            out[c as usize].insert(x);
        }
        out
    }

    /// Least member of each class, in id order.
    pub fn representatives(&self) -> Vec<usize> {
        let mut reps = Vec::with_capacity(self.classes);
        for (x, &c) in self.ids.iter().enumerate() {
            if c as usize == reps.len() {
                reps.push(x);
            }
        }
        reps
    }

    pub fn is_identity(&self) -> bool {
        self.classes == self.len()
    }

    pub fn is_full(&self) -> bool {
        self.classes <= 1
    }

    /// Inclusion of congruences as sets of pairs.
    pub fn leq(&self, other: &Congruence) -> bool {
        let reps = self.representatives();
        (0..self.len()).all(|x| other.same(x, reps[self.class_of(x)]))
    }

    pub fn meet(&self, other: &Congruence) -> Congruence {
        Self::from_key(self.len(), |x| (self.ids[x], other.ids[x]))
    }

    pub fn join(&self, other: &Congruence) -> Congruence {
        let mut uf = UnionFind::new(self.len());
        for c in [self, other] {
            let reps = c.representatives();
            for x in 0..self.len() {
                uf.union(x, reps[c.class_of(x)]);
            }
        }
        Self::from_union_find(self.len(), uf)
    }

    /// A related pair whose images under some basic translation are unrelated.
    pub fn compatibility_failure(&self, a: &TableAlgebra) -> Option<(usize, usize)> {
        let reps = self.representatives();
        for x in a.elements() {
            let r = reps[self.class_of(x)];
            if r == x {
                continue;
            }
            if !self.same(a.star(x), a.star(r)) {
                return Some((r, x));
            }
            for z in a.elements() {
                if !self.same(a.meet(x, z), a.meet(r, z)) || !self.same(a.join(x, z), a.join(r, z)) {
                    return Some((r, x));
                }
            }
        }
        None
    }

    pub fn is_congruence_of(&self, a: &TableAlgebra) -> bool {
        self.len() == a.size() && self.compatibility_failure(a).is_none()
    }

    /// Relational image `S/θ = {y : x θ y for some x ∈ S}`.
    pub fn image(&self, s: &ElementSet) -> ElementSet {
        let hit: HashSet<u32> = s.iter().map(|x| self.ids[x]).collect();
        ElementSet::from_indices(self.len(), (0..self.len()).filter(|&y| hit.contains(&self.ids[y])))
    }
}

impl fmt::Debug for Congruence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list().entries(self.classes()).finish()
    }
}

impl Serialize for Congruence {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.ids.serialize(s)
    }
}

/// Closes the union-find under the basic translations, starting from the
/// pairs in `work` (which must already be merged).
fn close(a: &TableAlgebra, uf: &mut UnionFind<usize>, mut work: Vec<(usize, usize)>) {
    while let Some((x, y)) = work.pop() {
        let (sx, sy) = (a.star(x), a.star(y));
        if uf.union(sx, sy) {
            work.push((sx, sy));
        }
        for z in a.elements() {
            let (mx, my) = (a.meet(x, z), a.meet(y, z));
            if uf.union(mx, my) {
                work.push((mx, my));
            }
            let (jx, jy) = (a.join(x, z), a.join(y, z));
            if uf.union(jx, jy) {
                work.push((jx, jy));
            }
        }
    }
}

/// The least congruence containing every pair in `pairs`.
pub fn generated(a: &TableAlgebra, pairs: &[(usize, usize)]) -> Congruence {
    let mut uf = UnionFind::new(a.size());
    let mut work = Vec::new();
    for &(x, y) in pairs {
        if uf.union(x, y) {
            work.push((x, y));
        }
    }
    close(a, &mut uf, work);
    Congruence::from_union_find(a.size(), uf)
}

/// `Θ(x, y)`.
pub fn principal_congruence(a: &TableAlgebra, x: usize, y: usize) -> Congruence {
    generated(a, &[(x, y)])
}

/// The least congruence containing `theta` and the pair `(x, y)`.
pub fn extend(a: &TableAlgebra, theta: &Congruence, x: usize, y: usize) -> Congruence {
    let reps = theta.representatives();
    let mut pairs: Vec<(usize, usize)> = (0..a.size())
        .map(|z| (reps[theta.class_of(z)], z))
        .filter(|(r, z)| r != z)
        .collect();
    pairs.push((x, y));
    generated(a, &pairs)
}

/// Every congruence of a small algebra, identity first and full last.
///
/// Computed as the join-closure of the principal congruences.
pub fn all_congruences(a: &TableAlgebra, limits: &Limits) -> Result<Vec<Congruence>> {
    if a.size() > limits.oracle_cap {
        return Err(Error::cap("congruence lattice", limits.oracle_cap, a.size() as u128));
    }
    let n = a.size();
    let mut principals: Vec<Congruence> = Vec::new();
    let mut found: HashSet<Congruence> = HashSet::new();
    found.insert(Congruence::identity(n));
    for x in 0..n {
        for y in x + 1..n {
            let t = principal_congruence(a, x, y);
            if found.insert(t.clone()) {
                principals.push(t);
            }
        }
    }
    let mut frontier: Vec<Congruence> = principals.clone();
    while !frontier.is_empty() {
        let mut next = Vec::new();
        for t in &frontier {
            for p in &principals {
                let j = t.join(p);
                if found.insert(j.clone()) {
                    next.push(j);
                }
            }
        }
        frontier = next;
    }
    let mut all: Vec<Congruence> = found.into_iter().collect();
    all.sort_by(|s, t| t.num_classes().cmp(&s.num_classes()).then_with(|| s.cmp(t)));
    Ok(all)
}

/// Members of a finite congruence lattice that are meet-irreducible, i.e.
/// differ from the meet of their strict upper bounds.
pub fn meet_irreducibles(cons: &[Congruence]) -> Vec<Congruence> {
    cons.iter()
        .filter(|t| {
            let uppers: Vec<&Congruence> = cons.iter().filter(|u| u != t && t.leq(u)).collect();
            match uppers.split_first() {
                None => false,
                Some((first, rest)) => {
                    let m = rest.iter().fold((*first).clone(), |acc, u| acc.meet(u));
                    &m != *t
                }
            }
        })
        .cloned()
        .collect()
}

/// A pair of congruences whose alternating compositions differ at an element.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PermutabilityWitness {
    pub alpha: Congruence,
    pub beta: Congruence,
    /// `c/(α∘β∘…)` with `n` factors.
    pub forward: Vec<usize>,
    /// `c/(β∘α∘…)` with `n` factors.
    pub backward: Vec<usize>,
}

fn alternate(c: usize, first: &Congruence, second: &Congruence, n: usize) -> ElementSet {
    let mut s = ElementSet::singleton(first.len(), c);
    for step in 0..n {
        s = if step % 2 == 0 {
            first.image(&s)
        } else {
            second.image(&s)
        };
    }
    s
}

/// All pairs `(α, β)` of congruences (unordered, `α` listed first in lattice
/// order) whose `n`-fold alternating compositions starting at `c` differ.
pub fn compose_check_permutability(
    a: &TableAlgebra,
    c: usize,
    n: usize,
    limits: &Limits,
) -> Result<Vec<PermutabilityWitness>> {
    if c >= a.size() {
        return Err(Error::IndexOutOfRange {
            index: c,
            bound: a.size(),
        });
    }
    let cons = all_congruences(a, limits)?;
    let mut out = Vec::new();
    for (i, alpha) in cons.iter().enumerate() {
        for beta in &cons[i + 1..] {
            let f = alternate(c, alpha, beta, n);
            let b = alternate(c, beta, alpha, n);
            if f != b {
                out.push(PermutabilityWitness {
                    alpha: alpha.clone(),
                    beta: beta.clone(),
                    forward: f.iter().collect(),
                    backward: b.iter().collect(),
                });
            }
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{build_chain, build_si};

    fn lim() -> Limits {
        Limits::default()
    }

    #[test]
    fn normalised_ids() {
        let c = Congruence::from_ids(&[5, 5, 2, 5]);
        assert_eq!(c.class_ids(), [0, 0, 1, 0]);
        assert_eq!(c.representatives(), vec![0, 2]);
        assert!(Congruence::identity(4).leq(&c));
        assert!(!c.leq(&Congruence::identity(4)));
        assert_eq!(c.join(&Congruence::from_ids(&[0, 1, 1, 2])), Congruence::full(4));
    }

    #[test]
    fn principal_basics() {
        let b2 = build_si(2, &lim()).unwrap();
        assert!(principal_congruence(&b2, 3, 3).is_identity());
        assert!(principal_congruence(&b2, 0, 4).is_full());
        assert_eq!(principal_congruence(&b2, 0, 3), principal_congruence(&b2, 0, 4));
        let b1 = build_si(1, &lim()).unwrap();
        assert_eq!(principal_congruence(&b1, 1, 2).class_ids(), [0, 1, 1]);
    }

    #[test]
    fn congruence_lattices() {
        let b0 = build_si(0, &lim()).unwrap();
        assert_eq!(all_congruences(&b0, &lim()).unwrap().len(), 2);
        let b1 = build_si(1, &lim()).unwrap();
        let cons = all_congruences(&b1, &lim()).unwrap();
        assert_eq!(cons.len(), 3);
        assert!(cons[0].is_identity() && cons[2].is_full());
        let c4 = build_chain(4, &lim()).unwrap();
        let cons = all_congruences(&c4, &lim()).unwrap();
        for (x, y) in [(1, 3), (2, 3), (1, 2)] {
            assert!(cons.contains(&principal_congruence(&c4, x, y)));
        }
        assert_eq!(meet_irreducibles(&cons).len(), 3);
    }

    #[test]
    fn permutability() {
        let c4 = build_chain(4, &lim()).unwrap();
        let w = compose_check_permutability(&c4, 3, 2, &lim()).unwrap();
        assert!(!w.is_empty());
        assert!(compose_check_permutability(&c4, 0, 2, &lim()).unwrap().is_empty());
        let b0 = build_si(0, &lim()).unwrap();
        assert!(compose_check_permutability(&b0, 1, 2, &lim()).unwrap().is_empty());
    }

    #[test]
    fn oracle_cap() {
        let b4 = build_si(4, &lim()).unwrap();
        assert!(matches!(all_congruences(&b4, &lim()), Err(Error::CapExceeded { .. })));
    }
}
