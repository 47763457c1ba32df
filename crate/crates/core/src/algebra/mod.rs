//! Finite p-algebras as operation tables or as upsets of a poset.

mod analysis;
mod build;
mod json;
mod table;
mod upset;

pub use analysis::{
    atoms, dense_elements, glivenko, is_homomorphism, is_isomorphic, j_poset, join_irreducibles, lower_cover,
    regular_elements,
};
pub use build::{build_chain, build_si, product, quotient, si_cond_check, si_e, trivial};
pub use json::{AlgebraJson, PosetJson};
pub use table::{TableAlgebra, Violation};
pub use upset::UpsetAlgebra;

use crate::error::Result;
use crate::limits::Limits;

/// The signature `(∧, ∨, *, 0, 1)` over some element type.
pub trait Operations {
    type Elem: Clone + Eq;

    fn zero(&self) -> Self::Elem;
    fn one(&self) -> Self::Elem;
    fn meet(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn join(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn star(&self, a: &Self::Elem) -> Self::Elem;
}

/// A finite p-algebra in either representation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum PAlgebra {
    Table(TableAlgebra),
    Upset(UpsetAlgebra),
}

impl PAlgebra {
    /// Table form; upset algebras are materialised under the caps.
    pub fn to_table(&self, limits: &Limits) -> Result<TableAlgebra> {
        match self {
            PAlgebra::Table(t) => Ok(t.clone()),
            PAlgebra::Upset(u) => Ok(u.to_table(limits)?.0),
        }
    }

    /// Upset form over the join-irreducible skeleton.
    pub fn to_upset(&self) -> UpsetAlgebra {
        match self {
            PAlgebra::Table(t) => t.to_upset().0,
            PAlgebra::Upset(u) => u.clone(),
        }
    }
}

impl From<TableAlgebra> for PAlgebra {
    fn from(t: TableAlgebra) -> Self {
        PAlgebra::Table(t)
    }
}

impl From<UpsetAlgebra> for PAlgebra {
    fn from(u: UpsetAlgebra) -> Self {
        PAlgebra::Upset(u)
    }
}
