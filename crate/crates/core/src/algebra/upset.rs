use crate::error::{Error, Result};
use crate::limits::Limits;
use crate::order::{ElementSet, Poset};

use super::{Operations, TableAlgebra};

/// The p-algebra of all upsets of a finite poset.
///
/// Meet and join are intersection and union; `U* = complement of ↓U`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct UpsetAlgebra {
    base: Poset,
    labels: Vec<String>,
}

impl UpsetAlgebra {
    pub fn new(base: Poset) -> Self {
        let labels = (0..base.size()).map(|i| format!("p{i}")).collect();
        UpsetAlgebra { base, labels }
    }

    pub fn with_labels(mut self, labels: Vec<String>) -> Self {
        assert_eq!(labels.len(), self.base.size());
        self.labels = labels;
        self
    }

    pub fn base(&self) -> &Poset {
        &self.base
    }

    /// Labels of the base points.
    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn zero(&self) -> ElementSet {
        ElementSet::empty(self.base.size())
    }

    pub fn one(&self) -> ElementSet {
        ElementSet::full(self.base.size())
    }

    pub fn meet(&self, a: &ElementSet, b: &ElementSet) -> ElementSet {
        a.intersection(b)
    }

    pub fn join(&self, a: &ElementSet, b: &ElementSet) -> ElementSet {
        a.union(b)
    }

    pub fn star(&self, a: &ElementSet) -> ElementSet {
        self.base.downset_closure(a).complement()
    }

    pub fn leq(&self, a: &ElementSet, b: &ElementSet) -> bool {
        a.is_subset(b)
    }

    pub fn is_element(&self, a: &ElementSet) -> bool {
        a.universe() == self.base.size() && self.base.is_upset(a)
    }

    /// The join-irreducible element generated by base point `p`, i.e. `↑p`.
    pub fn point(&self, p: usize) -> ElementSet {
        self.base.principal_up(p).clone()
    }

    /// Number of elements, if it does not exceed `cap`.
    pub fn count(&self, cap: u128) -> Option<u128> {
        self.base.count_upsets(cap)
    }

    /// All elements in canonical order (cardinality, then mask).
    pub fn elements(&self, limits: &Limits) -> Result<Vec<ElementSet>> {
        if self.base.size() > limits.poset_cap {
            return Err(Error::cap("upset base", limits.poset_cap, self.base.size() as u128));
        }
        self.base.enumerate_upsets(limits.table_cap)
    }

    /// Text name of an element: the join of its generating points.
    pub fn element_label(&self, a: &ElementSet) -> String {
        if a.is_empty() {
            return "0".into();
        }
        if a.is_full() {
            return "1".into();
        }
        let gens: Vec<&str> = self
            .base
            .min_elements(a)
            .iter()
            .map(|p| self.labels[p].as_str())
            .collect();
        gens.join("|")
    }

    /// Materialises the operation tables.
    ///
    /// Element `i` of the result is the `i`-th upset in canonical order; the
    /// returned vector lists them.
    pub fn to_table(&self, limits: &Limits) -> Result<(TableAlgebra, Vec<ElementSet>)> {
        let elems = self.elements(limits)?;
        let index = |s: &ElementSet| -> usize {
            elems
                .binary_search_by(|e| e.cmp_canonical(s))
                .expect("upset operations stay inside the carrier")
        };
        let n = elems.len();
        let star: Vec<usize> = elems.iter().map(|a| index(&self.star(a))).collect();
        let mut meet = vec![vec![0; n]; n];
        let mut join = vec![vec![0; n]; n];
        for i in 0..n {
            for j in i..n {
                let m = index(&elems[i].intersection(&elems[j]));
                let u = index(&elems[i].union(&elems[j]));
                meet[i][j] = m;
                meet[j][i] = m;
                join[i][j] = u;
                join[j][i] = u;
            }
        }
        let labels = elems.iter().map(|a| self.element_label(a)).collect();
        let table = TableAlgebra::from_tables(meet, join, star, 0, n - 1)?.with_labels(labels);
        Ok((table, elems))
    }

    /// Position of `a` in the canonical enumeration, given that enumeration.
    pub fn position(elems: &[ElementSet], a: &ElementSet) -> Option<usize> {
        elems.binary_search_by(|e| e.cmp_canonical(a)).ok()
    }
}

impl Operations for UpsetAlgebra {
    type Elem = ElementSet;

    fn zero(&self) -> ElementSet {
        UpsetAlgebra::zero(self)
    }
    fn one(&self) -> ElementSet {
        UpsetAlgebra::one(self)
    }
    fn meet(&self, a: &ElementSet, b: &ElementSet) -> ElementSet {
        a.intersection(b)
    }
    fn join(&self, a: &ElementSet, b: &ElementSet) -> ElementSet {
        a.union(b)
    }
    fn star(&self, a: &ElementSet) -> ElementSet {
        UpsetAlgebra::star(self, a)
    }
}

impl TableAlgebra {
    /// The join-irreducible skeleton `(J, ≥)` as an upset algebra.
    ///
    /// Returns the algebra and, for each base point, the table element it came from.
    pub fn to_upset(&self) -> (UpsetAlgebra, Vec<usize>) {
        let js: Vec<usize> = super::join_irreducibles(self).iter().collect();
        let base = Poset::from_leq(js.len(), |i, j| self.leq(js[j], js[i]))
            .expect("restriction of a lattice order is an order");
        let labels = js.iter().map(|&a| self.label(a).to_string()).collect();
        (UpsetAlgebra::new(base).with_labels(labels), js)
    }

    /// Maps a table element to its upset of join-irreducibles below it.
    pub fn upset_of(&self, js: &[usize], a: usize) -> ElementSet {
        ElementSet::from_indices(js.len(), (0..js.len()).filter(|&i| self.leq(js[i], a)))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn chain_of_two_points() {
        let u = UpsetAlgebra::new(Poset::chain(2));
        let (t, elems) = u.to_table(&Limits::default()).unwrap();
        assert_eq!(t.size(), 3);
        assert!(t.validate().is_empty());
        assert!(elems[0].is_empty());
        // middle element is dense
        assert_eq!(t.star(1), 0);
        assert_eq!(t.star(0), 2);
    }

    #[test]
    fn antichain_is_boolean() {
        let u = UpsetAlgebra::new(Poset::antichain(3));
        let (t, _) = u.to_table(&Limits::default()).unwrap();
        assert_eq!(t.size(), 8);
        for a in t.elements() {
            assert_eq!(t.star(t.star(a)), a);
        }
    }

    #[test]
    fn round_trip_keeps_size() {
        let u = UpsetAlgebra::new(Poset::from_covers(3, &[(0, 2), (1, 2)]).unwrap());
        let (t, _) = u.to_table(&Limits::default()).unwrap();
        let (back, js) = t.to_upset();
        assert_eq!(js.len(), 3);
        assert_eq!(back.to_table(&Limits::default()).unwrap().0.size(), t.size());
    }

    #[test]
    fn cap_is_enforced() {
        let u = UpsetAlgebra::new(Poset::antichain(13));
        let err = u.to_table(&Limits::default()).unwrap_err();
        assert!(matches!(err, Error::CapExceeded { .. }));
    }
}
