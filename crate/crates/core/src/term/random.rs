use rand::Rng;

use super::{join, meet, star, Term};

/// A random term of depth at most `depth` over `x1..x_vars`.
///
/// Leaves are mostly variables; constants appear with small probability.
pub fn random_term<R: Rng + ?Sized>(rng: &mut R, depth: usize, vars: u32) -> Term {
    assert!(vars >= 1);
    if depth == 0 || rng.random_ratio(1, 4) {
        return match rng.random_range(0..12) {
            0 => Term::Zero,
            1 => Term::One,
            _ => Term::Var(rng.random_range(1..=vars)),
        };
    }
    match rng.random_range(0..3) {
        0 => star(random_term(rng, depth - 1, vars)),
        1 => meet(random_term(rng, depth - 1, vars), random_term(rng, depth - 1, vars)),
        _ => join(random_term(rng, depth - 1, vars), random_term(rng, depth - 1, vars)),
    }
}

/// Applies one identity valid in every p-algebra at a random position.
pub fn rewrite<R: Rng + ?Sized>(rng: &mut R, t: &Term, vars: u32) -> Term {
    at_random_position(rng, t, &mut |rng, s| valid_step(rng, s, vars))
}

/// Applies one rewrite that holds only in some varieties (for example
/// `x** → x`, valid in Boolean algebras only), at a random position.
pub fn near_miss<R: Rng + ?Sized>(rng: &mut R, t: &Term) -> Term {
    at_random_position(rng, t, &mut |rng, s| risky_step(rng, s))
}

fn at_random_position<R: Rng + ?Sized>(rng: &mut R, t: &Term, step: &mut dyn FnMut(&mut R, &Term) -> Term) -> Term {
    let target = rng.random_range(0..t.size());
    let mut counter = 0;
    replace_nth(t, target, &mut counter, &mut |s| step(rng, s))
}

fn replace_nth(t: &Term, target: usize, counter: &mut usize, f: &mut dyn FnMut(&Term) -> Term) -> Term {
    if *counter == target {
        *counter += t.size();
        return f(t);
    }
    *counter += 1;
    match t {
        Term::Zero | Term::One | Term::Var(_) => t.clone(),
        Term::Meet(a, b) => {
            let a = replace_nth(a, target, counter, f);
            meet(a, replace_nth(b, target, counter, f))
        }
        Term::Join(a, b) => {
            let a = replace_nth(a, target, counter, f);
            join(a, replace_nth(b, target, counter, f))
        }
        Term::Star(a) => star(replace_nth(a, target, counter, f)),
    }
}

fn valid_step<R: Rng + ?Sized>(rng: &mut R, t: &Term, vars: u32) -> Term {
    // structural rules first, falling back to generic ones
    match (t, rng.random_range(0..3)) {
        (Term::Meet(a, b), 0) => return meet((**b).clone(), (**a).clone()),
        (Term::Join(a, b), 0) => return join((**b).clone(), (**a).clone()),
        (Term::Meet(a, b), 1) => {
            if let Term::Star(c) = &**b {
                // x ∧ y* = x ∧ (x ∧ y)*
                return meet((**a).clone(), star(meet((**a).clone(), (**c).clone())));
            }
            if let Term::Join(c, d) = &**b {
                return join(meet((**a).clone(), (**c).clone()), meet((**a).clone(), (**d).clone()));
            }
        }
        (Term::Star(a), 1) => {
            if let Term::Join(c, d) = &**a {
                // de Morgan for the pseudocomplement
                return meet(star((**c).clone()), star((**d).clone()));
            }
            if let Term::Star(b) = &**a {
                if let Term::Meet(c, d) = &**b {
                    return star(star(meet(star(star((**c).clone())), star(star((**d).clone())))));
                }
            }
        }
        _ => {}
    }
    let other = super::random_term(rng, 2, vars);
    match rng.random_range(0..6) {
        0 => meet(t.clone(), t.clone()),
        1 => join(t.clone(), Term::Zero),
        2 => join(t.clone(), meet(t.clone(), other)),
        3 => meet(t.clone(), join(t.clone(), other)),
        4 => meet(t.clone(), star(star(t.clone()))),
        _ => join(t.clone(), meet(t.clone(), star(t.clone()))),
    }
}

fn risky_step<R: Rng + ?Sized>(rng: &mut R, t: &Term) -> Term {
    match t {
        Term::Star(a) => match &**a {
            Term::Star(b) => (**b).clone(),
            Term::Meet(c, d) => join(star((**c).clone()), star((**d).clone())),
            _ => join(star((**a).clone()), star(star(star((**a).clone())))),
        },
        _ => match rng.random_range(0..3) {
            0 => star(star(t.clone())),
            1 => join(t.clone(), star(t.clone())),
            _ => join(star(t.clone()), star(star(t.clone()))),
        },
    }
}
