use crate::error::{Error, Result};

use super::{join, join_all, meet, meet_all, star, var, Equation, QuasiIdentity, Term};

/// `(x1 ∨ x2) ∧ (x1 ∧ x2)*`.
pub fn subtraction_term() -> Term {
    meet(join(var(1), var(2)), star(meet(var(1), var(2))))
}

/// `(x1* ∧ x2*) ∨ (x1 ∧ x2)`.
pub fn boolean_equiv_term() -> Term {
    join(meet(star(var(1)), star(var(2))), meet(var(1), var(2)))
}

fn check_mask(mask: u64, k: usize) -> Result<()> {
    if k < 64 && mask >> k != 0 {
        return Err(Error::IndexOutOfRange {
            index: 64 - mask.leading_zeros() as usize,
            bound: k,
        });
    }
    Ok(())
}

/// `⋀_{i∈T} xi ∧ ⋀_{i∉T} xi*` over `x1..xk`; bit `i-1` of `t` stands for `xi`.
pub fn atom_term(t: u64, k: usize) -> Result<Term> {
    check_mask(t, k)?;
    Ok(meet_all((1..=k as u32).map(|i| {
        if t >> (i - 1) & 1 == 1 {
            var(i)
        } else {
            star(var(i))
        }
    })))
}

fn check_family(family: &[u64], l: u64, k: usize) -> Result<()> {
    if family.is_empty() {
        return Err(Error::BadIndex("the family of subsets is empty".into()));
    }
    for &t in family {
        check_mask(t, k)?;
    }
    check_mask(l, k)?;
    let common = family.iter().fold(u64::MAX, |acc, &t| acc & t);
    if l & !common != 0 {
        return Err(Error::BadIndex(
            "L is not contained in every member of the family".into(),
        ));
    }
    Ok(())
}

fn meet_of_vars(l: u64, k: usize) -> Option<Term> {
    let vs: Vec<Term> = (1..=k as u32).filter(|i| l >> (i - 1) & 1 == 1).map(var).collect();
    (!vs.is_empty()).then(|| meet_all(vs))
}

/// `(⋁_{T∈𝒯} x_T)** ∧ ⋀_{i∈L} xi`, omitting the meet when `L` is empty.
pub fn jirr_term(family: &[u64], l: u64, k: usize) -> Result<Term> {
    check_family(family, l, k)?;
    let atoms = family.iter().map(|&t| atom_term(t, k)).collect::<Result<Vec<_>>>()?;
    let head = star(star(join_all(atoms)));
    Ok(match meet_of_vars(l, k) {
        Some(m) => meet(head, m),
        None => head,
    })
}

/// An equivalent and shorter form of [`jirr_term`].
///
/// A one-member family `{T}` gives `⋀_{i∈L} xi ∧ ⋀_{j∉T} xj* ∧ ⋀_{j∈T∖L} xj**`
/// (literals in variable order); the family of all subsets gives `1`.
pub fn jirr_term_simplified(family: &[u64], l: u64, k: usize) -> Result<Term> {
    check_family(family, l, k)?;
    if let [t] = family {
        return Ok(meet_all((1..=k as u32).map(|i| {
            let bit = 1u64 << (i - 1);
            if l & bit != 0 {
                var(i)
            } else if t & bit == 0 {
                star(var(i))
            } else {
                star(star(var(i)))
            }
        })));
    }
    if k < 63 && family.len() as u64 == 1u64 << k {
        return Ok(Term::One);
    }
    jirr_term(family, l, k)
}

/// `⋁_{i=1}^{m+1} (xi ∧ ⋀_{j≠i} xj*)*`.
pub fn ib_term(m: usize) -> Term {
    let n = m as u32 + 1;
    join_all((1..=n).map(|i| {
        star(meet_all(
            std::iter::once(var(i)).chain((1..=n).filter(|&j| j != i).map(|j| star(var(j)))),
        ))
    }))
}

/// Premises `xi* = ⋁_{j≠i} xj` for `i = 1..n`; conclusion `⋁ xi = 1`.
pub fn qb_system(n: usize) -> QuasiIdentity {
    let n = n as u32;
    let premises = (1..=n)
        .map(|i| Equation::new(star(var(i)), join_all((1..=n).filter(|&j| j != i).map(var))))
        .collect();
    QuasiIdentity {
        premises,
        conclusion: Equation::new(join_all((1..=n).map(var)), Term::One),
    }
}
