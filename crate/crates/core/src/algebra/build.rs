use crate::congruence::Congruence;
use crate::error::{Error, Result};
use crate::limits::Limits;

use super::TableAlgebra;

/// The subdirectly irreducible algebra `B̄_n`: a Boolean algebra with `n`
/// atoms and a new top adjoined.
///
/// Indices `0..2^n` are the Boolean masks, `2^n - 1` is `e`, and `2^n` is the top.
pub fn build_si(n: usize, limits: &Limits) -> Result<TableAlgebra> {
    if n >= 32 || (1usize << n) + 1 > limits.table_cap {
        let actual = if n >= 127 { u128::MAX } else { (1u128 << n) + 1 };
        return Err(Error::cap("B̄_n", limits.table_cap, actual));
    }
    let top = 1usize << n;
    let full = top - 1;
    let meet = |a: usize, b: usize| match (a == top, b == top) {
        (true, _) => b,
        (_, true) => a,
        _ => a & b,
    };
    let join = |a: usize, b: usize| if a == top || b == top { top } else { a | b };
    let star = |a: usize| {
        if a == 0 {
            top
        } else if a == top {
            0
        } else {
            !a & full
        }
    };
    let labels = (0..=top).map(|m| si_label(n, m)).collect();
    Ok(TableAlgebra::from_fns(top + 1, meet, join, star, 0, top)?.with_labels(labels))
}

fn si_label(n: usize, mask: usize) -> String {
    let top = 1usize << n;
    if mask == top {
        return "1".into();
    }
    if mask == 0 {
        return "0".into();
    }
    if mask == top - 1 {
        return "e".into();
    }
    if n <= 26 {
        (0..n)
            .filter(|i| mask >> i & 1 == 1)
            .map(|i| (b'a' + i as u8) as char)
            .collect()
    } else {
        format!("m{mask}")
    }
}

/// Index of `e` in `B̄_n` (the top of the Boolean part), or `None` for `n = 0`.
pub fn si_e(n: usize) -> Option<usize> {
    (n > 0).then(|| (1usize << n) - 1)
}

/// Checks `a ∧ b* = 0 ⟺ a ≤ b or (a = 1 and b = e)` for all pairs.
///
/// `e` is the unique lower cover of 1 when that cover is dense and nonzero;
/// otherwise the second disjunct is dropped.
pub fn si_cond_check(a: &TableAlgebra) -> bool {
    let one = a.one();
    let below: Vec<usize> = a.elements().filter(|&x| x != one).collect();
    let cover = a.join_all(below.iter().copied());
    let e = (cover != one && cover != a.zero() && a.star(cover) == a.zero()).then_some(cover);
    a.elements().all(|x| {
        a.elements().all(|y| {
            let lhs = a.meet(x, a.star(y)) == a.zero();
            let rhs = a.leq(x, y) || (x == one && Some(y) == e);
            lhs == rhs
        })
    })
}

/// The chain `0 < c_{m-2} < … < c_1 < 1` with `0* = 1` and `x* = 0` otherwise.
pub fn build_chain(m: usize, limits: &Limits) -> Result<TableAlgebra> {
    if m < 2 {
        return Err(Error::Invalid(format!(
            "a chain algebra needs at least 2 elements, got {m}"
        )));
    }
    if m > limits.table_cap {
        return Err(Error::cap("chain", limits.table_cap, m as u128));
    }
    let labels = (0..m)
        .map(|i| match i {
            0 => "0".to_string(),
            i if i == m - 1 => "1".to_string(),
            i => format!("c{}", m - 1 - i),
        })
        .collect();
    Ok(TableAlgebra::from_fns(
        m,
        |a, b| a.min(b),
        |a, b| a.max(b),
        |a| if a == 0 { m - 1 } else { 0 },
        0,
        m - 1,
    )?
    .with_labels(labels))
}

/// The one-element algebra.
pub fn trivial() -> TableAlgebra {
    TableAlgebra::from_fns(1, |_, _| 0, |_, _| 0, |_| 0, 0, 0).expect("one element")
}

/// Componentwise product; the pair `(i, j)` sits at index `i * |b| + j`.
pub fn product(a: &TableAlgebra, b: &TableAlgebra, limits: &Limits) -> Result<TableAlgebra> {
    let m = b.size();
    let n = a.size() * m;
    if n > limits.table_cap {
        return Err(Error::cap("product", limits.table_cap, n as u128));
    }
    let split = |x: usize| (x / m, x % m);
    let labels = (0..n)
        .map(|x| {
            let (i, j) = split(x);
            format!("({},{})", a.label(i), b.label(j))
        })
        .collect();
    Ok(TableAlgebra::from_fns(
        n,
        |x, y| {
            let ((i, j), (k, l)) = (split(x), split(y));
            a.meet(i, k) * m + b.meet(j, l)
        },
        |x, y| {
            let ((i, j), (k, l)) = (split(x), split(y));
            a.join(i, k) * m + b.join(j, l)
        },
        |x| {
            let (i, j) = split(x);
            a.star(i) * m + b.star(j)
        },
        a.zero() * m + b.zero(),
        a.one() * m + b.one(),
    )?
    .with_labels(labels))
}

/// The quotient by a congruence; class `c` is labelled by its least member.
pub fn quotient(a: &TableAlgebra, theta: &Congruence) -> Result<TableAlgebra> {
    if theta.len() != a.size() {
        return Err(Error::NotACongruence("partition has the wrong carrier size".into()));
    }
    if let Some((x, y)) = theta.compatibility_failure(a) {
        return Err(Error::NotACongruence(format!(
            "elements {x} and {y} are related but their images are not"
        )));
    }
    let reps = theta.representatives();
    let cls = |x: usize| theta.class_of(x);
    let labels = reps.iter().map(|&r| a.label(r).to_string()).collect();
    Ok(TableAlgebra::from_fns(
        reps.len(),
        |x, y| cls(a.meet(reps[x], reps[y])),
        |x, y| cls(a.join(reps[x], reps[y])),
        |x| cls(a.star(reps[x])),
        cls(a.zero()),
        cls(a.one()),
    )?
    .with_labels(labels))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn lim() -> Limits {
        Limits::default()
    }

    #[test]
    fn si_small_cases() {
        let b0 = build_si(0, &lim()).unwrap();
        assert_eq!(b0.size(), 2);
        assert!(b0.validate().is_empty());
        let b1 = build_si(1, &lim()).unwrap();
        assert_eq!(b1.labels(), ["0", "e", "1"]);
        assert_eq!((b1.star(1), b1.star(0), b1.star(2)), (0, 2, 0));
        let b2 = build_si(2, &lim()).unwrap();
        assert_eq!(b2.size(), 5);
        assert_eq!(b2.star(1), 2);
        assert!(b2.validate().is_empty());
    }

    #[test]
    fn si_condition() {
        for n in 0..4 {
            assert!(si_cond_check(&build_si(n, &lim()).unwrap()), "n = {n}");
        }
    }

    #[test]
    fn si_cap() {
        let small = Limits { table_cap: 8, ..lim() };
        assert!(matches!(build_si(3, &small), Err(Error::CapExceeded { .. })));
    }

    #[test]
    fn chains() {
        let c4 = build_chain(4, &lim()).unwrap();
        assert_eq!(c4.labels(), ["0", "c2", "c1", "1"]);
        assert!(c4.validate().is_empty());
        assert!(build_chain(1, &lim()).is_err());
    }

    #[test]
    fn products() {
        let b1 = build_si(1, &lim()).unwrap();
        let b0 = build_si(0, &lim()).unwrap();
        let p = product(&b1, &b0, &lim()).unwrap();
        assert_eq!(p.size(), 6);
        assert!(p.validate().is_empty());
        let q = product(&b1, &trivial(), &lim()).unwrap();
        assert_eq!(q.size(), 3);
    }
}
