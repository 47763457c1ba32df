use crate::congruence::Congruence;
use crate::order::{poset_isomorphic, ElementSet, Poset};

use super::TableAlgebra;

/// Elements with exactly one lower cover.
pub fn join_irreducibles(a: &TableAlgebra) -> ElementSet {
    ElementSet::from_indices(a.size(), a.elements().filter(|&x| lower_cover(a, x).is_some()))
}

/// The unique lower cover of a join-irreducible `x`, or `None` otherwise.
pub fn lower_cover(a: &TableAlgebra, x: usize) -> Option<usize> {
    if x == a.zero() {
        return None;
    }
    let below = a.join_all(a.elements().filter(|&y| y != x && a.leq(y, x)));
    (below != x).then_some(below)
}

/// Covers of 0.
pub fn atoms(a: &TableAlgebra) -> ElementSet {
    let z = a.zero();
    ElementSet::from_indices(
        a.size(),
        a.elements()
            .filter(|&x| x != z && a.elements().all(|y| y == x || y == z || !a.leq(y, x))),
    )
}

/// `D(A) = {a : a* = 0}`.
pub fn dense_elements(a: &TableAlgebra) -> ElementSet {
    ElementSet::from_indices(a.size(), a.elements().filter(|&x| a.star(x) == a.zero()))
}

/// `R(A) = {a : a** = a}`.
pub fn regular_elements(a: &TableAlgebra) -> ElementSet {
    ElementSet::from_indices(a.size(), a.elements().filter(|&x| a.star(a.star(x)) == x))
}

/// The Glivenko congruence `a ~ b ⟺ a** = b**` and the Boolean algebra of
/// regular elements with join `(x ∨ y)**`.
///
/// The second component lists the original index of each element of `R(A)`.
pub fn glivenko(a: &TableAlgebra) -> (Congruence, TableAlgebra, Vec<usize>) {
    let dd = |x: usize| a.star(a.star(x));
    let theta = Congruence::from_key(a.size(), dd);
    let regs: Vec<usize> = regular_elements(a).iter().collect();
    let mut pos = vec![usize::MAX; a.size()];
    for (i, &r) in regs.iter().enumerate() {
        pos[r] = i;
    }
    let boolean = TableAlgebra::from_fns(
        regs.len(),
        |x, y| pos[a.meet(regs[x], regs[y])],
        |x, y| pos[dd(a.join(regs[x], regs[y]))],
        |x| pos[a.star(regs[x])],
        pos[a.zero()],
        pos[a.one()],
    )
    .expect("regular elements are closed under the Boolean operations")
    .with_labels(regs.iter().map(|&r| a.label(r).to_string()).collect());
    (theta, boolean, regs)
}

/// `(J(A), ≤)` with the list of join-irreducibles in index order.
pub fn j_poset(a: &TableAlgebra) -> (Poset, Vec<usize>) {
    let js: Vec<usize> = join_irreducibles(a).iter().collect();
    let p = Poset::from_leq(js.len(), |i, j| a.leq(js[i], js[j])).expect("lattice order");
    (p, js)
}

/// A p-algebra isomorphism `a -> b` as an index map, if one exists.
///
/// Found by matching the join-irreducible posets and then checked on every
/// operation.
pub fn is_isomorphic(a: &TableAlgebra, b: &TableAlgebra) -> Option<Vec<usize>> {
    if a.size() != b.size() {
        return None;
    }
    let (pa, ja) = j_poset(a);
    let (pb, jb) = j_poset(b);
    let f = poset_isomorphic(&pa, &pb)?;
    let map: Vec<usize> = a
        .elements()
        .map(|x| b.join_all((0..ja.len()).filter(|&i| a.leq(ja[i], x)).map(|i| jb[f[i]])))
        .collect();
    is_homomorphism(a, b, &map).then_some(map)
}

/// Checks that `map` preserves all operations and constants.
pub fn is_homomorphism(a: &TableAlgebra, b: &TableAlgebra, map: &[usize]) -> bool {
    map.len() == a.size()
        && map[a.zero()] == b.zero()
        && map[a.one()] == b.one()
        && a.elements().all(|x| {
            map[a.star(x)] == b.star(map[x])
                && a.elements()
                    .all(|y| map[a.meet(x, y)] == b.meet(map[x], map[y]) && map[a.join(x, y)] == b.join(map[x], map[y]))
        })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{build_chain, build_si, product};
    use crate::Limits;

    fn lim() -> Limits {
        Limits::default()
    }

    #[test]
    fn si_join_irreducibles() {
        let b0 = build_si(0, &lim()).unwrap();
        assert_eq!(join_irreducibles(&b0).iter().collect::<Vec<_>>(), vec![1]);
        assert_eq!(atoms(&b0).iter().collect::<Vec<_>>(), vec![1]);
        let b2 = build_si(2, &lim()).unwrap();
        assert_eq!(join_irreducibles(&b2).iter().collect::<Vec<_>>(), vec![1, 2, 4]);
        assert_eq!(atoms(&b2).iter().collect::<Vec<_>>(), vec![1, 2]);
        assert_eq!(lower_cover(&b2, 4), Some(3));
    }

    #[test]
    fn dense_and_regular() {
        let b0 = build_si(0, &lim()).unwrap();
        assert_eq!(dense_elements(&b0).iter().collect::<Vec<_>>(), vec![1]);
        assert!(regular_elements(&b0).is_full());
        let b2 = build_si(2, &lim()).unwrap();
        assert_eq!(dense_elements(&b2).iter().collect::<Vec<_>>(), vec![3, 4]);
        assert_eq!(regular_elements(&b2).iter().collect::<Vec<_>>(), vec![0, 1, 2, 4]);
    }

    #[test]
    fn glivenko_on_b1_and_c4() {
        let b1 = build_si(1, &lim()).unwrap();
        let (theta, r, regs) = glivenko(&b1);
        assert_eq!(theta.class_ids(), [0, 1, 1]);
        assert_eq!(regs, vec![0, 2]);
        assert_eq!(r.size(), 2);
        let c4 = build_chain(4, &lim()).unwrap();
        let (_, r, _) = glivenko(&c4);
        assert!(r.validate().is_empty());
        for x in r.elements() {
            assert_eq!(r.join(x, r.star(x)), r.one());
        }
    }

    #[test]
    fn isomorphism() {
        let b2 = build_si(2, &lim()).unwrap();
        assert!(is_isomorphic(&b2, &b2).is_some());
        let c5 = build_chain(5, &lim()).unwrap();
        assert!(is_isomorphic(&b2, &c5).is_none());
        let b1 = build_si(1, &lim()).unwrap();
        let b0 = build_si(0, &lim()).unwrap();
        let p = product(&b1, &b0, &lim()).unwrap();
        let q = product(&b0, &b1, &lim()).unwrap();
        let f = is_isomorphic(&p, &q).unwrap();
        assert!(is_homomorphism(&p, &q, &f));
    }
}
