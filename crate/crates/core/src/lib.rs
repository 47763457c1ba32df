//! Finite distributive p-algebras (pseudocomplemented distributive lattices).
//!
//! The crate builds finite p-algebras in two interchangeable forms (operation
//! tables and upsets of a finite poset), constructs the free algebras of every
//! variety `Pa_n` from their join-irreducible skeleton, computes normal forms
//! of terms, and decides identities and quasi-identities. The congruence
//! machinery for completely meet-irreducible congruences is exposed together
//! with executable checks of its structural laws in [`audit`].

pub mod algebra;
pub mod audit;
pub mod congruence;
pub mod decide;
pub mod error;
pub mod free;
pub mod limits;
pub mod order;
pub mod term;

pub use algebra::{Operations, PAlgebra, TableAlgebra, UpsetAlgebra};
pub use congruence::{CmRecord, Congruence, Storey};
pub use error::{Error, Result};
pub use free::{build_free, count_jirr, normal_form, FreeAlgebra, JIndex, Rank};
pub use limits::Limits;
pub use order::{ElementSet, Poset};
pub use term::{parse, Equation, QuasiIdentity, Term, Valuation};
