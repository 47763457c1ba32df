use crate::algebra::{is_isomorphic, product, quotient, TableAlgebra, UpsetAlgebra};
use crate::congruence::principal_congruence;
use crate::error::{Error, Result};
use crate::limits::Limits;
use crate::order::{poset_isomorphic, Poset};
use crate::term::{atom_term, meet_all, star, var};

use super::{build_free, Rank};

/// The free bounded distributive lattice on `s` generators with its unique
/// pseudocomplement (`0* = 1`, everything else goes to 0).
///
/// Base points are the subsets `S` of `{1..s}` ordered by inclusion; point
/// `S` stands for `⋀_{i∈S} xi`.
pub fn free_distributive(s: usize, limits: &Limits) -> Result<UpsetAlgebra> {
    if s > 6 || (1usize << s) > limits.poset_cap {
        let actual = if s >= 127 { u128::MAX } else { 1u128 << s };
        return Err(Error::cap("free distributive lattice", limits.poset_cap, actual));
    }
    let m = 1usize << s;
    let base = Poset::from_leq(m, |a, b| a & !b == 0)?;
    let labels = (0..m)
        .map(|a| meet_all((1..=s as u32).filter(|i| a >> (i - 1) & 1 == 1).map(var)).to_string())
        .collect();
    Ok(UpsetAlgebra::new(base).with_labels(labels))
}

/// Counts monotone Boolean functions of `s` variables by brute force.
pub fn count_monotone_functions(s: usize) -> Result<u64> {
    if s > 4 {
        return Err(Error::cap("monotone function enumeration", 4, s as u128));
    }
    let points = 1usize << s;
    let mut count = 0;
    for f in 0u64..(1u64 << points) {
        let value = |x: usize| f >> x & 1 == 1;
        let monotone = (0..points).all(|x| (0..points).all(|y| x & !y != 0 || !value(x) || value(y)));
        if monotone {
            count += 1;
        }
    }
    Ok(count)
}

/// `F_n(k) / Θ(1, x_T**)` together with an isomorphism onto `D(|T|)`
/// (`None` when there is none).
pub fn quotient_to_distributive(
    n: Rank,
    k: usize,
    t: u64,
    limits: &Limits,
) -> Result<(TableAlgebra, Option<Vec<usize>>)> {
    let free = build_free(n, k, limits)?;
    let (table, elems) = free.to_table(limits)?;
    let xt = free.eval(&star(star(atom_term(t, k)?)))?;
    let at = UpsetAlgebra::position(&elems, &xt).expect("evaluation stays in the carrier");
    let theta = principal_congruence(&table, at, table.one());
    let q = quotient(&table, &theta)?;
    let d = free_distributive(t.count_ones() as usize, limits)?.to_table(limits)?.0;
    let iso = is_isomorphic(&q, &d);
    Ok((q, iso))
}

/// The decomposition of `F_1(k)` into a product of free distributive
/// lattices, one factor `D(|T|)` per subset `T` of `{1..k}`.
#[derive(Debug, Clone)]
pub struct StoneDecomposition {
    pub k: usize,
    /// The subsets `T`, in canonical order.
    pub factors: Vec<u64>,
    /// Order isomorphism from the join-irreducibles of `F_1(k)` onto the
    /// disjoint union of the factor bases.
    pub point_map: Vec<usize>,
    pub product_size: u128,
    pub free_size: u128,
    /// Isomorphism of the operation tables, when they fit under the cap.
    pub table_iso: Option<Vec<usize>>,
}

pub fn stone_decompose(k: usize, limits: &Limits) -> Result<StoneDecomposition> {
    let free = build_free(Rank::Finite(1), k, limits)?;
    let mut factors: Vec<u64> = (0..1u64 << k).collect();
    factors.sort_by_key(|t| (t.count_ones(), *t));
    let mut dist = Vec::new();
    for s in 0..=k {
        dist.push(free_distributive(s, limits)?);
    }
    let bases: Vec<&Poset> = factors.iter().map(|t| dist[t.count_ones() as usize].base()).collect();
    let union = Poset::disjoint_union(&bases);
    let point_map = poset_isomorphic(free.base(), &union)
        .ok_or_else(|| Error::Inconsistent(format!("F_1({k}) does not split into free distributive factors")))?;
    let sizes: Vec<u128> = dist
        .iter()
        .map(|d| d.count(u128::MAX).expect("unbounded count"))
        .collect();
    let product_size = factors.iter().map(|t| sizes[t.count_ones() as usize]).product();
    let free_size = free
        .element_count(product_size)
        .ok_or_else(|| Error::Inconsistent("F_1(k) is larger than the product".into()))?;
    if free_size != product_size {
        return Err(Error::Inconsistent(format!(
            "|F_1({k})| = {free_size} but the product has {product_size} elements"
        )));
    }
    let table_iso = if product_size <= limits.table_cap as u128 {
        let (ft, _) = free.to_table(limits)?;
        let mut prod = crate::algebra::trivial();
        for t in &factors {
            let d = dist[t.count_ones() as usize].to_table(limits)?.0;
            prod = product(&prod, &d, limits)?;
        }
        let iso = is_isomorphic(&ft, &prod)
            .ok_or_else(|| Error::Inconsistent("tables of F_1(k) and the product are not isomorphic".into()))?;
        Some(iso)
    } else {
        None
    };
    Ok(StoneDecomposition {
        k,
        factors,
        point_map,
        product_size,
        free_size,
        table_iso,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn lim() -> Limits {
        Limits::default()
    }

    #[test]
    fn dedekind_numbers() {
        let expected = [2u64, 3, 6, 20];
        for (s, &e) in expected.iter().enumerate() {
            let d = free_distributive(s, &lim()).unwrap();
            let (t, _) = d.to_table(&lim()).unwrap();
            assert_eq!(t.size() as u64, e);
            assert_eq!(count_monotone_functions(s).unwrap(), e);
            assert!(t.validate().is_empty());
            for x in t.elements().filter(|&x| x != t.zero()) {
                assert_eq!(t.star(x), t.zero());
            }
        }
    }

    #[test]
    fn quotients() {
        let (q, iso) = quotient_to_distributive(Rank::Finite(1), 1, 0, &lim()).unwrap();
        assert_eq!(q.size(), 2);
        assert!(iso.is_some());
        let (q, iso) = quotient_to_distributive(Rank::Finite(1), 1, 1, &lim()).unwrap();
        assert_eq!(q.size(), 3);
        assert!(iso.is_some());
        let (q, iso) = quotient_to_distributive(Rank::Finite(2), 2, 3, &lim()).unwrap();
        assert_eq!(q.size(), 6);
        assert!(iso.is_some());
    }

    #[test]
    fn stone() {
        let d0 = stone_decompose(0, &lim()).unwrap();
        assert_eq!(d0.free_size, 2);
        let d1 = stone_decompose(1, &lim()).unwrap();
        assert_eq!(d1.product_size, 6);
        assert!(d1.table_iso.is_some());
        let d2 = stone_decompose(2, &lim()).unwrap();
        assert_eq!(d2.free_size, 108);
        assert!(d2.table_iso.is_some());
    }
}
