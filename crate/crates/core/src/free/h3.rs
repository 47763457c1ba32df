use crate::algebra::{build_si, TableAlgebra};
use crate::congruence::Congruence;
use crate::error::{Error, Result};
use crate::limits::Limits;
use crate::order::{is_pp_morphism, ElementSet, Poset};
use crate::term::Valuation;

use super::{build_free, enumerate_jindices, FreeAlgebra, JIndex, Rank};

/// The index set of `F_n(k)` under two orders.
#[derive(Debug, Clone)]
pub struct H3Posets {
    pub index: Vec<JIndex>,
    /// Inclusion of congruences: each second-storey index lies below the
    /// atom indices `({T}, T)` with `T` in its family, and nothing else.
    pub inclusion: Poset,
    /// Inclusion of 1-classes, the base order of the free algebra.
    pub cm_order: Poset,
    /// Whether the identity is a pp-morphism from `inclusion` to `cm_order`.
    pub identity_is_pp: bool,
}

pub fn h3_poset(n: Rank, k: usize, limits: &Limits) -> Result<H3Posets> {
    let free = build_free(n, k, limits)?;
    let index = free.index().to_vec();
    let inclusion = Poset::from_leq(index.len(), |i, j| {
        i == j || (!index[i].is_atom() && index[j].is_atom() && index[i].contains_subset(index[j].l))
    })?;
    let cm_order = free.base().clone();
    let id: Vec<usize> = (0..index.len()).collect();
    let identity_is_pp = is_pp_morphism(&inclusion, &cm_order, &id);
    Ok(H3Posets {
        index,
        inclusion,
        cm_order,
        identity_is_pp,
    })
}

/// Images of the generators under the map into `B̄_s`, `s = |𝒯|`: `xi ↦ 1`
/// for `i ∈ L`, otherwise the Boolean element whose `j`-th coordinate says
/// whether `i` lies in the `j`-th member of the family.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GeneratorMap {
    pub s: usize,
    /// Index in `build_si(s)` of the image of `x_{i+1}`.
    pub images: Vec<usize>,
}

pub fn homomorphism_g(n: Rank, j: &JIndex) -> Result<GeneratorMap> {
    let s = j.family.len();
    let allowed = enumerate_jindices(n, j.k)?;
    if !allowed.contains(j) {
        return Err(Error::BadIndex(format!("{:?} does not index F_{n}({})", j, j.k)));
    }
    if s >= usize::BITS as usize {
        return Err(Error::BadIndex("family too large".into()));
    }
    let top = 1usize << s;
    let images = (0..j.k)
        .map(|i| {
            if j.l >> i & 1 == 1 {
                top
            } else {
                (0..s).filter(|&c| j.family[c] >> i & 1 == 1).fold(0, |m, c| m | 1 << c)
            }
        })
        .collect();
    Ok(GeneratorMap { s, images })
}

impl GeneratorMap {
    /// Kernel of the homomorphic extension on the materialised free algebra
    /// (`elems` as returned by [`FreeAlgebra::to_table`]), and whether the
    /// extension is onto `B̄_s`.
    pub fn kernel(&self, free: &FreeAlgebra, elems: &[ElementSet], limits: &Limits) -> Result<(Congruence, bool)> {
        let target: TableAlgebra = build_si(self.s, limits)?;
        let v: Valuation<usize> = self
            .images
            .iter()
            .enumerate()
            .map(|(i, &e)| (i as u32 + 1, e))
            .collect();
        let point_values = free
            .index()
            .iter()
            .map(|p| p.term().eval(&target, &v))
            .collect::<Result<Vec<usize>>>()?;
        let values: Vec<usize> = elems
            .iter()
            .map(|u| target.join_all(u.iter().map(|p| point_values[p])))
            .collect();
        let hit = ElementSet::from_indices(target.size(), values.iter().copied());
        Ok((Congruence::from_key(elems.len(), |x| values[x]), hit.is_full()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::congruence::cm_from_prime_filter;

    fn lim() -> Limits {
        Limits::default()
    }

    #[test]
    fn one_generator_h3() {
        for n in [2, 3] {
            let h = h3_poset(Rank::Finite(n), 1, &lim()).unwrap();
            assert_eq!(h.inclusion.count_upsets(100), Some(8));
            assert_eq!(h.cm_order.count_upsets(100), Some(7));
            assert!(h.identity_is_pp);
        }
    }

    #[test]
    fn generator_maps() {
        let n = Rank::Finite(2);
        let g = homomorphism_g(n, &JIndex::new(1, vec![1], 0).unwrap()).unwrap();
        assert_eq!(g, GeneratorMap { s: 1, images: vec![1] });
        let g = homomorphism_g(n, &JIndex::new(1, vec![0, 1], 0).unwrap()).unwrap();
        assert_eq!(g, GeneratorMap { s: 2, images: vec![2] });
        let g = homomorphism_g(n, &JIndex::new(2, vec![1], 1).unwrap()).unwrap();
        assert_eq!(g.images, vec![2, 0]);
        assert!(homomorphism_g(Rank::Finite(1), &JIndex::new(1, vec![0, 1], 0).unwrap()).is_err());
    }

    #[test]
    fn kernels_are_the_indexed_congruences() {
        let n = Rank::Finite(2);
        let free = build_free(n, 1, &lim()).unwrap();
        let (table, elems) = free.to_table(&lim()).unwrap();
        for (p, j) in free.index().iter().enumerate() {
            let g = homomorphism_g(n, j).unwrap();
            let (ker, onto) = g.kernel(&free, &elems, &lim()).unwrap();
            let filter = crate::algebra::UpsetAlgebra::position(&elems, &free.algebra().point(p)).unwrap();
            let rec = cm_from_prime_filter(&table, &table.principal_filter(filter)).unwrap();
            assert_eq!(ker, rec.mu, "{j:?}");
            assert_eq!(onto, !(j.family.len() == 1 && j.l == j.family[0]) || g.s == 0, "{j:?}");
        }
    }
}
