use std::fmt;

use crate::error::{Error, Result};
use crate::order::ElementSet;

use super::Operations;

/// A finite p-algebra given by its operation tables.
///
/// Elements are the indices `0..size`. Tables are stored flat and row-major.
#[derive(Clone, PartialEq, Eq)]
pub struct TableAlgebra {
    size: usize,
    meet: Vec<u16>,
    join: Vec<u16>,
    star: Vec<u16>,
    zero: usize,
    one: usize,
    labels: Vec<String>,
}

/// A failed law together with the elements that witness the failure.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Violation {
    pub law: &'static str,
    pub witness: Vec<usize>,
}

impl TableAlgebra {
    /// Builds an algebra from nested tables after checking their shape.
    ///
    /// Only the shape is checked here; use [`TableAlgebra::validate`] for the laws.
    pub fn from_tables(
        meet: Vec<Vec<usize>>,
        join: Vec<Vec<usize>>,
        star: Vec<usize>,
        zero: usize,
        one: usize,
    ) -> Result<Self> {
        let size = star.len();
        if size == 0 {
            return Err(Error::MalformedTables("empty carrier".into()));
        }
        if size > u16::MAX as usize {
            return Err(Error::cap("table algebra", u16::MAX as usize, size as u128));
        }
        let flatten = |name: &str, rows: Vec<Vec<usize>>| -> Result<Vec<u16>> {
            if rows.len() != size || rows.iter().any(|r| r.len() != size) {
                return Err(Error::MalformedTables(format!("{name} table is not {size}x{size}")));
            }
            rows.into_iter()
                .flatten()
                .map(|v| {
                    if v < size {
                        Ok(v as u16)
                    } else {
                        Err(Error::MalformedTables(format!("{name} entry {v} out of range")))
                    }
                })
                .collect()
        };
        let meet = flatten("meet", meet)?;
        let join = flatten("join", join)?;
        if star.iter().any(|&v| v >= size) || zero >= size || one >= size {
            return Err(Error::MalformedTables("star, zero or one out of range".into()));
        }
        Ok(TableAlgebra {
            size,
            meet,
            join,
            star: star.into_iter().map(|v| v as u16).collect(),
            zero,
            one,
            labels: (0..size).map(|i| i.to_string()).collect(),
        })
    }

    /// Builds an algebra from operation closures over `0..size`.
    pub fn from_fns(
        size: usize,
        meet: impl Fn(usize, usize) -> usize,
        join: impl Fn(usize, usize) -> usize,
        star: impl Fn(usize) -> usize,
        zero: usize,
        one: usize,
    ) -> Result<Self> {
        let rows = |f: &dyn Fn(usize, usize) -> usize| -> Vec<Vec<usize>> {
            (0..size).map(|a| (0..size).map(|b| f(a, b)).collect()).collect()
        };
        Self::from_tables(rows(&meet), rows(&join), (0..size).map(star).collect(), zero, one)
    }

    pub fn with_labels(mut self, labels: Vec<String>) -> Self {
        assert_eq!(labels.len(), self.size);
        self.labels = labels;
        self
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn label(&self, a: usize) -> &str {
        &self.labels[a]
    }

    pub fn size(&self) -> usize {
        self.size
    }

    #[inline]
    pub fn meet(&self, a: usize, b: usize) -> usize {
        self.meet[a * self.size + b] as usize
    }

    #[inline]
    pub fn join(&self, a: usize, b: usize) -> usize {
        self.join[a * self.size + b] as usize
    }

    #[inline]
    pub fn star(&self, a: usize) -> usize {
        self.star[a] as usize
    }

    pub fn zero(&self) -> usize {
        self.zero
    }

    pub fn one(&self) -> usize {
        self.one
    }

    #[inline]
    pub fn leq(&self, a: usize, b: usize) -> bool {
        self.meet(a, b) == a
    }

    pub fn elements(&self) -> std::ops::Range<usize> {
        0..self.size
    }

    pub fn meet_tables(&self) -> Vec<Vec<usize>> {
        self.rows(&self.meet)
    }

    pub fn join_tables(&self) -> Vec<Vec<usize>> {
        self.rows(&self.join)
    }

    pub fn star_table(&self) -> Vec<usize> {
        self.star.iter().map(|&v| v as usize).collect()
    }

    fn rows(&self, t: &[u16]) -> Vec<Vec<usize>> {
        t.chunks(self.size)
            .map(|r| r.iter().map(|&v| v as usize).collect())
            .collect()
    }

    /// Join of a family; the empty join is 0.
    pub fn join_all<I: IntoIterator<Item = usize>>(&self, it: I) -> usize {
        it.into_iter().fold(self.zero, |acc, x| self.join(acc, x))
    }

    /// Meet of a family; the empty meet is 1.
    pub fn meet_all<I: IntoIterator<Item = usize>>(&self, it: I) -> usize {
        it.into_iter().fold(self.one, |acc, x| self.meet(acc, x))
    }

    /// `{b : a <= b}` as a set over the carrier.
    pub fn principal_filter(&self, a: usize) -> ElementSet {
        ElementSet::from_indices(self.size, self.elements().filter(|&b| self.leq(a, b)))
    }

    /// `{b : b <= a}` as a set over the carrier.
    pub fn principal_ideal(&self, a: usize) -> ElementSet {
        ElementSet::from_indices(self.size, self.elements().filter(|&b| self.leq(b, a)))
    }

    /// Checks the bounded distributive lattice laws and the three p-algebra
    /// equations `1* = 0`, `0* = 1`, `x ∧ (x ∧ y)* = x ∧ y*`.
    ///
    /// Returns one violation per failed law (the first witness found).
    pub fn validate(&self) -> Vec<Violation> {
        let n = self.size;
        let mut out = Vec::new();
        let mut check2 = |law: &'static str, f: &dyn Fn(usize, usize) -> bool| {
            for a in 0..n {
                for b in 0..n {
                    if !f(a, b) {
                        out.push(Violation {
                            law,
                            witness: vec![a, b],
                        });
                        return;
                    }
                }
            }
        };
        check2("meet idempotent", &|a, _| self.meet(a, a) == a);
        check2("join idempotent", &|a, _| self.join(a, a) == a);
        check2("meet commutative", &|a, b| self.meet(a, b) == self.meet(b, a));
        check2("join commutative", &|a, b| self.join(a, b) == self.join(b, a));
        check2("absorption", &|a, b| {
            self.meet(a, self.join(a, b)) == a && self.join(a, self.meet(a, b)) == a
        });
        check2("zero is bottom", &|a, _| self.meet(self.zero, a) == self.zero);
        check2("one is top", &|a, _| self.join(self.one, a) == self.one);
        check2("x & (x & y)* = x & y*", &|a, b| {
            self.meet(a, self.star(self.meet(a, b))) == self.meet(a, self.star(b))
        });
        let mut check3 = |law: &'static str, f: &dyn Fn(usize, usize, usize) -> bool| {
            for a in 0..n {
                for b in 0..n {
                    for c in 0..n {
                        if !f(a, b, c) {
                            out.push(Violation {
                                law,
                                witness: vec![a, b, c],
                            });
                            return;
                        }
                    }
                }
            }
        };
        check3("meet associative", &|a, b, c| {
            self.meet(a, self.meet(b, c)) == self.meet(self.meet(a, b), c)
        });
        check3("join associative", &|a, b, c| {
            self.join(a, self.join(b, c)) == self.join(self.join(a, b), c)
        });
        check3("distributive", &|a, b, c| {
            self.meet(a, self.join(b, c)) == self.join(self.meet(a, b), self.meet(a, c))
        });
        if self.star(self.one) != self.zero {
            out.push(Violation {
                law: "1* = 0",
                witness: vec![self.one],
            });
        }
        if self.star(self.zero) != self.one {
            out.push(Violation {
                law: "0* = 1",
                witness: vec![self.zero],
            });
        }
        out
    }

    /// Re-indexes the carrier: element `a` of `self` becomes `perm[a]`.
    pub fn permuted(&self, perm: &[usize]) -> TableAlgebra {
        let n = self.size;
        let mut inv = vec![0; n];
        for (a, &p) in perm.iter().enumerate() {
            inv[p] = a;
        }
        let mut labels = vec![String::new(); n];
        for a in 0..n {
            labels[perm[a]] = self.labels[a].clone();
        }
        TableAlgebra::from_fns(
            n,
            |x, y| perm[self.meet(inv[x], inv[y])],
            |x, y| perm[self.join(inv[x], inv[y])],
            |x| perm[self.star(inv[x])],
            perm[self.zero],
            perm[self.one],
        )
        .expect("permutation preserves shape")
        .with_labels(labels)
    }

    /// The subalgebra on a subset closed under all operations.
    ///
    /// Returns the algebra and the embedding (new index -> old index).
    pub fn subalgebra(&self, carrier: &ElementSet) -> Result<(TableAlgebra, Vec<usize>)> {
        let elems: Vec<usize> = carrier.iter().collect();
        let mut pos = vec![usize::MAX; self.size];
        for (i, &a) in elems.iter().enumerate() {
            pos[a] = i;
        }
        let closed = carrier.contains(self.zero)
            && carrier.contains(self.one)
            && elems.iter().all(|&a| {
                carrier.contains(self.star(a))
                    && elems
                        .iter()
                        .all(|&b| carrier.contains(self.meet(a, b)) && carrier.contains(self.join(a, b)))
            });
        if !closed {
            return Err(Error::Invalid("subset is not a subuniverse".into()));
        }
        let sub = TableAlgebra::from_fns(
            elems.len(),
            |x, y| pos[self.meet(elems[x], elems[y])],
            |x, y| pos[self.join(elems[x], elems[y])],
            |x| pos[self.star(elems[x])],
            pos[self.zero],
            pos[self.one],
        )?
        .with_labels(elems.iter().map(|&a| self.labels[a].clone()).collect());
        Ok((sub, elems))
    }
}

impl Operations for TableAlgebra {
    type Elem = usize;

    fn zero(&self) -> usize {
        self.zero
    }
    fn one(&self) -> usize {
        self.one
    }
    fn meet(&self, a: &usize, b: &usize) -> usize {
        TableAlgebra::meet(self, *a, *b)
    }
    fn join(&self, a: &usize, b: &usize) -> usize {
        TableAlgebra::join(self, *a, *b)
    }
    fn star(&self, a: &usize) -> usize {
        TableAlgebra::star(self, *a)
    }
}

impl fmt::Debug for TableAlgebra {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("TableAlgebra")
            .field("size", &self.size)
            .field("labels", &self.labels)
            .finish_non_exhaustive()
    }
}
