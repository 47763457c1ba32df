//! Terms over `(∧, ∨, *, 0, 1)` with variables `x1, x2, …`.

mod compiled;
mod json;
mod parse;
mod print;
mod random;
mod schemes;

pub use compiled::Program;
pub use parse::parse;
pub use print::pretty;
pub use random::{near_miss, random_term, rewrite};
pub use schemes::{
    atom_term, boolean_equiv_term, ib_term, jirr_term, jirr_term_simplified, qb_system, subtraction_term,
};

use std::collections::{BTreeMap, BTreeSet};

use serde::ser::SerializeMap;
use serde::{Serialize, Serializer};

use crate::algebra::Operations;
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Term {
    Zero,
    One,
    Var(u32),
    Meet(Box<Term>, Box<Term>),
    Join(Box<Term>, Box<Term>),
    Star(Box<Term>),
}

pub fn var(i: u32) -> Term {
    assert!(i >= 1, "variables are numbered from 1");
    Term::Var(i)
}

pub fn meet(a: Term, b: Term) -> Term {
    Term::Meet(Box::new(a), Box::new(b))
}

pub fn join(a: Term, b: Term) -> Term {
    Term::Join(Box::new(a), Box::new(b))
}

pub fn star(a: Term) -> Term {
    Term::Star(Box::new(a))
}

/// Left-nested meet; the empty meet is `1`.
pub fn meet_all<I: IntoIterator<Item = Term>>(it: I) -> Term {
    it.into_iter().reduce(meet).unwrap_or(Term::One)
}

/// Left-nested join; the empty join is `0`.
pub fn join_all<I: IntoIterator<Item = Term>>(it: I) -> Term {
    it.into_iter().reduce(join).unwrap_or(Term::Zero)
}

impl Term {
    pub fn vars(&self) -> BTreeSet<u32> {
        let mut out = BTreeSet::new();
        self.collect_vars(&mut out);
        out
    }

    fn collect_vars(&self, out: &mut BTreeSet<u32>) {
        match self {
            Term::Zero | Term::One => {}
            Term::Var(i) => {
                out.insert(*i);
            }
            Term::Meet(a, b) | Term::Join(a, b) => {
                a.collect_vars(out);
                b.collect_vars(out);
            }
            Term::Star(a) => a.collect_vars(out),
        }
    }

    /// Largest variable index, 0 for closed terms.
    pub fn max_var(&self) -> u32 {
        self.vars().last().copied().unwrap_or(0)
    }

    pub fn depth(&self) -> usize {
        match self {
            Term::Zero | Term::One | Term::Var(_) => 0,
            Term::Meet(a, b) | Term::Join(a, b) => 1 + a.depth().max(b.depth()),
            Term::Star(a) => 1 + a.depth(),
        }
    }

    /// Number of nodes.
    pub fn size(&self) -> usize {
        match self {
            Term::Zero | Term::One | Term::Var(_) => 1,
            Term::Meet(a, b) | Term::Join(a, b) => 1 + a.size() + b.size(),
            Term::Star(a) => 1 + a.size(),
        }
    }

    /// Evaluates the term; every variable must be bound.
    pub fn eval<A: Operations>(&self, alg: &A, v: &Valuation<A::Elem>) -> Result<A::Elem> {
        Ok(match self {
            Term::Zero => alg.zero(),
            Term::One => alg.one(),
            Term::Var(i) => v.get(*i).cloned().ok_or(Error::UnboundVariable(*i))?,
            Term::Meet(a, b) => alg.meet(&a.eval(alg, v)?, &b.eval(alg, v)?),
            Term::Join(a, b) => alg.join(&a.eval(alg, v)?, &b.eval(alg, v)?),
            Term::Star(a) => alg.star(&a.eval(alg, v)?),
        })
    }

    /// Replaces each variable `xi` by `f(i)`.
    pub fn substitute(&self, f: &impl Fn(u32) -> Term) -> Term {
        match self {
            Term::Zero => Term::Zero,
            Term::One => Term::One,
            Term::Var(i) => f(*i),
            Term::Meet(a, b) => meet(a.substitute(f), b.substitute(f)),
            Term::Join(a, b) => join(a.substitute(f), b.substitute(f)),
            Term::Star(a) => star(a.substitute(f)),
        }
    }
}

/// An assignment of algebra elements to variables.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Valuation<E>(BTreeMap<u32, E>);

impl<E> Valuation<E> {
    pub fn new() -> Self {
        Valuation(BTreeMap::new())
    }

    pub fn get(&self, i: u32) -> Option<&E> {
        self.0.get(&i)
    }

    pub fn set(&mut self, i: u32, e: E) {
        self.0.insert(i, e);
    }

    pub fn iter(&self) -> impl Iterator<Item = (u32, &E)> {
        self.0.iter().map(|(&i, e)| (i, e))
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

impl<E> FromIterator<(u32, E)> for Valuation<E> {
    fn from_iter<I: IntoIterator<Item = (u32, E)>>(it: I) -> Self {
        Valuation(it.into_iter().collect())
    }
}

impl<E: Serialize> Serialize for Valuation<E> {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut m = s.serialize_map(Some(self.0.len()))?;
        for (i, e) in &self.0 {
            m.serialize_entry(&format!("x{i}"), e)?;
        }
        m.end()
    }
}

/// `lhs = rhs`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Equation {
    pub lhs: Term,
    pub rhs: Term,
}

impl Equation {
    pub fn new(lhs: Term, rhs: Term) -> Self {
        Equation { lhs, rhs }
    }

    pub fn vars(&self) -> BTreeSet<u32> {
        let mut v = self.lhs.vars();
        v.extend(self.rhs.vars());
        v
    }
}

/// `premises ⟹ conclusion`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QuasiIdentity {
    pub premises: Vec<Equation>,
    pub conclusion: Equation,
}

impl QuasiIdentity {
    pub fn vars(&self) -> BTreeSet<u32> {
        let mut v = self.conclusion.vars();
        for p in &self.premises {
            v.extend(p.vars());
        }
        v
    }
}
