//! Finite posets with upset/downset machinery.
//!
//! A [`Poset`] stores its order as a full reachability matrix (one
//! [`ElementSet`] row per element in each direction), so `leq` is a single bit
//! probe. Covers are recomputed on demand by transitive reduction.

mod set;

pub use set::ElementSet;

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Poset {
    size: usize,
    /// `up[i]` is the principal upset of `i`.
    up: Vec<ElementSet>,
    /// `down[i]` is the principal downset of `i`.
    down: Vec<ElementSet>,
}

impl Poset {
    /// Builds a poset from an order predicate, checking the partial order laws.
    pub fn from_leq(size: usize, leq: impl Fn(usize, usize) -> bool) -> Result<Self> {
        let mut up = vec![ElementSet::empty(size); size];
        let mut down = vec![ElementSet::empty(size); size];
        for (i, up_i) in up.iter_mut().enumerate() {
            for (j, down_j) in down.iter_mut().enumerate() {
                if leq(i, j) {
                    up_i.insert(j);
                    down_j.insert(i);
                }
            }
        }
        for i in 0..size {
            if !up[i].contains(i) {
                return Err(Error::NotAPoset(format!("{i} <= {i} fails")));
            }
            for j in up[i].iter() {
                if j != i && up[j].contains(i) {
                    return Err(Error::NotAPoset(format!("{i} and {j} are mutually below")));
                }
                if !up[j].is_subset(&up[i]) {
                    return Err(Error::NotAPoset(format!("transitivity fails above {i} <= {j}")));
                }
            }
        }
        Ok(Poset { size, up, down })
    }

    /// Builds the reflexive-transitive closure of a relation given as `(lower, upper)` pairs.
    pub fn from_covers(size: usize, pairs: &[(usize, usize)]) -> Result<Self> {
        let mut up: Vec<ElementSet> = (0..size).map(|i| ElementSet::singleton(size, i)).collect();
        for &(lo, hi) in pairs {
            if lo >= size || hi >= size {
                return Err(Error::IndexOutOfRange {
                    index: lo.max(hi),
                    bound: size,
                });
            }
            up[lo].insert(hi);
        }
        // Warshall over bit rows.
        for k in 0..size {
            let row_k = up[k].clone();
            for row in up.iter_mut() {
                if row.contains(k) {
                    row.union_with(&row_k);
                }
            }
        }
        Self::from_leq(size, |i, j| up[i].contains(j))
    }

    pub fn chain(n: usize) -> Self {
        Self::from_leq(n, |i, j| i <= j).expect("chain is a poset")
    }

    pub fn antichain(n: usize) -> Self {
        Self::from_leq(n, |i, j| i == j).expect("antichain is a poset")
    }

    pub fn size(&self) -> usize {
        self.size
    }

    #[inline]
    pub fn leq(&self, i: usize, j: usize) -> bool {
        self.up[i].contains(j)
    }

    #[inline]
    pub fn lt(&self, i: usize, j: usize) -> bool {
        i != j && self.leq(i, j)
    }

    pub fn principal_up(&self, i: usize) -> &ElementSet {
        &self.up[i]
    }

    pub fn principal_down(&self, i: usize) -> &ElementSet {
        &self.down[i]
    }

    /// The order with every comparison reversed.
    pub fn dual(&self) -> Poset {
        Poset {
            size: self.size,
            up: self.down.clone(),
            down: self.up.clone(),
        }
    }

    /// Disjoint union; the elements of `parts[i]` are shifted past all earlier parts.
    pub fn disjoint_union(parts: &[&Poset]) -> Poset {
        let mut offsets = Vec::with_capacity(parts.len());
        let mut total = 0;
        for p in parts {
            offsets.push(total);
            total += p.size;
        }
        let owner = |x: usize| {
            let idx = offsets.partition_point(|&o| o <= x) - 1;
            (idx, x - offsets[idx])
        };
        Poset::from_leq(total, |i, j| {
            let (pi, li) = owner(i);
            let (pj, lj) = owner(j);
            pi == pj && parts[pi].leq(li, lj)
        })
        .expect("disjoint union of posets is a poset")
    }

    /// Covering pairs `(lower, upper)` in lexicographic order.
    pub fn covers(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for i in 0..self.size {
            for j in self.up[i].iter() {
                if j == i {
                    continue;
                }
                let mut between = self.up[i].intersection(&self.down[j]);
                between.remove(i);
                between.remove(j);
                if between.is_empty() {
                    out.push((i, j));
                }
            }
        }
        out
    }

    pub fn lower_covers(&self, x: usize) -> Vec<usize> {
        self.covers()
            .into_iter()
            .filter(|&(_, hi)| hi == x)
            .map(|(lo, _)| lo)
            .collect()
    }

    pub fn is_upset(&self, s: &ElementSet) -> bool {
        s.iter().all(|x| self.up[x].is_subset(s))
    }

    pub fn is_downset(&self, s: &ElementSet) -> bool {
        s.iter().all(|x| self.down[x].is_subset(s))
    }

    pub fn upset_closure(&self, s: &ElementSet) -> ElementSet {
        let mut out = ElementSet::empty(self.size);
        for x in s.iter() {
            out.union_with(&self.up[x]);
        }
        out
    }

    pub fn downset_closure(&self, s: &ElementSet) -> ElementSet {
        let mut out = ElementSet::empty(self.size);
        for x in s.iter() {
            out.union_with(&self.down[x]);
        }
        out
    }

    /// Maximal elements of `s`.
    pub fn max_elements(&self, s: &ElementSet) -> ElementSet {
        ElementSet::from_indices(self.size, s.iter().filter(|&x| s.iter().all(|y| !self.lt(x, y))))
    }

    /// Minimal elements of `s`.
    pub fn min_elements(&self, s: &ElementSet) -> ElementSet {
        ElementSet::from_indices(self.size, s.iter().filter(|&x| s.iter().all(|y| !self.lt(y, x))))
    }

    /// Elements ordered so that every element precedes everything below it.
    fn top_down_order(&self) -> Vec<usize> {
        let mut order: Vec<usize> = (0..self.size).collect();
        order.sort_by_key(|&i| (self.up[i].count(), i));
        order
    }

    /// All upsets, sorted by cardinality then mask value.
    ///
    /// Fails with `CapExceeded` as soon as more than `cap` upsets are found.
    pub fn enumerate_upsets(&self, cap: usize) -> Result<Vec<ElementSet>> {
        let order = self.top_down_order();
        let mut out = Vec::new();
        let mut current = ElementSet::empty(self.size);
        self.upsets_rec(&order, 0, &mut current, &mut out, cap)?;
        out.sort_by(|a, b| a.cmp_canonical(b));
        Ok(out)
    }

    fn upsets_rec(
        &self,
        order: &[usize],
        pos: usize,
        current: &mut ElementSet,
        out: &mut Vec<ElementSet>,
        cap: usize,
    ) -> Result<()> {
        if pos == order.len() {
            if out.len() >= cap {
                return Err(Error::cap("upset enumeration", cap, out.len() as u128 + 1));
            }
            out.push(current.clone());
            return Ok(());
        }
        let x = order[pos];
        self.upsets_rec(order, pos + 1, current, out, cap)?;
        let mut strict_up = self.up[x].clone();
        strict_up.remove(x);
        if strict_up.is_subset(current) {
            current.insert(x);
            self.upsets_rec(order, pos + 1, current, out, cap)?;
            current.remove(x);
        }
        Ok(())
    }

    /// Number of upsets, counted without materialising them.
    ///
    /// Returns `None` once the count passes `cap`.
    pub fn count_upsets(&self, cap: u128) -> Option<u128> {
        let order = self.top_down_order();
        let mut count = 0u128;
        let mut current = ElementSet::empty(self.size);
        self.count_rec(&order, 0, &mut current, &mut count, cap)
            .then_some(count)
    }

    fn count_rec(&self, order: &[usize], pos: usize, current: &mut ElementSet, count: &mut u128, cap: u128) -> bool {
        if pos == order.len() {
            *count += 1;
            return *count <= cap;
        }
        let x = order[pos];
        if !self.count_rec(order, pos + 1, current, count, cap) {
            return false;
        }
        let mut strict_up = self.up[x].clone();
        strict_up.remove(x);
        if strict_up.is_subset(current) {
            current.insert(x);
            let ok = self.count_rec(order, pos + 1, current, count, cap);
            current.remove(x);
            return ok;
        }
        true
    }

    /// Per-element invariants used to prune isomorphism search.
    fn profiles(&self) -> Vec<(usize, usize, usize, usize)> {
        let mut lower = vec![0; self.size];
        let mut upper = vec![0; self.size];
        for (lo, hi) in self.covers() {
            upper[lo] += 1;
            lower[hi] += 1;
        }
        (0..self.size)
            .map(|x| (self.down[x].count(), self.up[x].count(), lower[x], upper[x]))
            .collect()
    }
}

/// Checks the pp-morphism conditions for `f: P -> Q`: monotone, and
/// `f(max ↑x) = max ↑f(x)` for every `x`.
pub fn is_pp_morphism(p: &Poset, q: &Poset, f: &[usize]) -> bool {
    if f.len() != p.size() || f.iter().any(|&y| y >= q.size()) {
        return false;
    }
    for i in 0..p.size() {
        for j in p.principal_up(i).iter() {
            if !q.leq(f[i], f[j]) {
                return false;
            }
        }
    }
    (0..p.size()).all(|x| {
        let top_above = p.max_elements(p.principal_up(x));
        let image = ElementSet::from_indices(q.size(), top_above.iter().map(|y| f[y]));
        image == q.max_elements(q.principal_up(f[x]))
    })
}

/// Finds an order isomorphism `P -> Q`, if one exists.
///
/// Search is deterministic: P's elements are visited bottom-up by their
/// (downset, upset, cover-degree) profile and candidates are tried in index order.
pub fn poset_isomorphic(p: &Poset, q: &Poset) -> Option<Vec<usize>> {
    let n = p.size();
    if n != q.size() {
        return None;
    }
    let pp = p.profiles();
    let qp = q.profiles();
    let mut ps = pp.clone();
    let mut qs = qp.clone();
    ps.sort();
    qs.sort();
    if ps != qs {
        return None;
    }
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by_key(|&x| (pp[x], x));
    let mut map = vec![usize::MAX; n];
    let mut used = vec![false; n];
    if iso_rec(p, q, &pp, &qp, &order, 0, &mut map, &mut used) {
        Some(map)
    } else {
        None
    }
}

#[allow(clippy::too_many_arguments)]
fn iso_rec(
    p: &Poset,
    q: &Poset,
    pp: &[(usize, usize, usize, usize)],
    qp: &[(usize, usize, usize, usize)],
    order: &[usize],
    pos: usize,
    map: &mut [usize],
    used: &mut [bool],
) -> bool {
    if pos == order.len() {
        return true;
    }
    let v = order[pos];
    for w in 0..q.size() {
        if used[w] || qp[w] != pp[v] {
            continue;
        }
        let consistent = order[..pos]
            .iter()
            .all(|&u| p.leq(u, v) == q.leq(map[u], w) && p.leq(v, u) == q.leq(w, map[u]));
        if !consistent {
            continue;
        }
        map[v] = w;
        used[w] = true;
        if iso_rec(p, q, pp, qp, order, pos + 1, map, used) {
            return true;
        }
        used[w] = false;
        map[v] = usize::MAX;
    }
    false
}

/// Graphviz text for the Hasse diagram: one node per element in index order
/// and one edge per covering pair, pointing from lower to upper.
pub fn export_dot(p: &Poset, labels: &[String]) -> String {
    export_dot_named(p, labels, "P")
}

pub fn export_dot_named(p: &Poset, labels: &[String], name: &str) -> String {
    let mut out = format!("digraph {name} {{\n  rankdir=BT;\n");
    for i in 0..p.size() {
        let label = labels.get(i).map(String::as_str).unwrap_or("");
        out.push_str(&format!("  n{i} [label=\"{}\"];\n", escape(label)));
    }
    for (lo, hi) in p.covers() {
        out.push_str(&format!("  n{lo} -> n{hi};\n"));
    }
    out.push_str("}\n");
    out
}

fn escape(s: &str) -> String {
    s.replace('\\', "\\\\").replace('"', "\\\"")
}

#[cfg(test)]
mod tests {
    use super::*;

    /// One minimum below `n` maxima: the dual of the subdirectly irreducible algebra with n atoms.
    fn si_dual(n: usize) -> Poset {
        let covers: Vec<_> = (1..=n).map(|i| (0, i)).collect();
        Poset::from_covers(n + 1, &covers).unwrap()
    }

    /// (J(F_n(1)), ≤) for n ≥ 2: x < x** < 1 and x* < 1.
    /// Indices: 0 = x, 1 = x*, 2 = x**, 3 = 1.
    fn j_free_one() -> Poset {
        Poset::from_covers(4, &[(0, 2), (2, 3), (1, 3)]).unwrap()
    }

    #[test]
    fn rejects_non_orders() {
        assert!(Poset::from_leq(2, |i, j| i != j || i == 0).is_err());
        assert!(Poset::from_leq(2, |_, _| true).is_err());
        assert!(Poset::from_covers(2, &[(0, 1), (1, 0)]).is_err());
        assert!(matches!(
            Poset::from_covers(2, &[(0, 5)]),
            Err(Error::IndexOutOfRange { .. })
        ));
    }

    #[test]
    fn upset_checks() {
        let p = si_dual(2);
        assert!(p.is_upset(&ElementSet::empty(3)));
        assert!(p.is_upset(&ElementSet::full(3)));
        assert!(!p.is_upset(&ElementSet::singleton(3, 0)));
        assert!(p.is_upset(&ElementSet::from_indices(3, [1, 2])));
    }

    #[test]
    fn closures() {
        let p = si_dual(2);
        assert_eq!(p.upset_closure(&ElementSet::empty(3)), ElementSet::empty(3));
        let maxima = ElementSet::from_indices(3, [1, 2]);
        assert_eq!(p.upset_closure(&maxima), maxima);
        assert_eq!(p.upset_closure(&ElementSet::singleton(3, 0)), ElementSet::full(3));
        assert_eq!(
            p.downset_closure(&ElementSet::singleton(3, 1)),
            ElementSet::from_indices(3, [0, 1])
        );
    }

    #[test]
    fn maxima() {
        let p = j_free_one();
        assert!(p.max_elements(&ElementSet::empty(4)).is_empty());
        let s = ElementSet::from_indices(4, [0, 2]);
        assert_eq!(p.max_elements(&s), ElementSet::singleton(4, 2));
        let c = Poset::chain(5);
        assert_eq!(
            c.max_elements(&ElementSet::from_indices(5, [1, 3, 4])),
            ElementSet::singleton(5, 4)
        );
    }

    #[test]
    fn upset_counts() {
        assert_eq!(Poset::chain(1).enumerate_upsets(10).unwrap().len(), 2);
        assert_eq!(j_free_one().enumerate_upsets(10).unwrap().len(), 7);
        assert_eq!(j_free_one().dual().enumerate_upsets(10).unwrap().len(), 7);
        assert_eq!(Poset::antichain(2).enumerate_upsets(10).unwrap().len(), 4);
        assert_eq!(j_free_one().count_upsets(100), Some(7));
        assert_eq!(Poset::antichain(10).count_upsets(1000), None);
    }

    #[test]
    fn upset_enumeration_is_capped_and_ordered() {
        let err = Poset::antichain(4).enumerate_upsets(15).unwrap_err();
        assert!(matches!(err, Error::CapExceeded { .. }));
        let ups = Poset::antichain(2).enumerate_upsets(4).unwrap();
        let masks: Vec<Vec<usize>> = ups.iter().map(|u| u.iter().collect()).collect();
        assert_eq!(masks, vec![vec![], vec![0], vec![1], vec![0, 1]]);
    }

    #[test]
    fn pp_morphisms() {
        let p = si_dual(3);
        let id: Vec<usize> = (0..4).collect();
        assert!(is_pp_morphism(&p, &p, &id));
        assert!(is_pp_morphism(&Poset::antichain(2), &Poset::chain(1), &[0, 0]));
        // Collapsing the 2-chain onto its bottom breaks the max condition.
        assert!(!is_pp_morphism(&Poset::chain(2), &Poset::chain(2), &[0, 0]));
        // Order reversal is not monotone.
        assert!(!is_pp_morphism(&Poset::chain(2), &Poset::chain(2), &[1, 0]));
    }

    #[test]
    fn isomorphism_search() {
        let p = j_free_one();
        let f = poset_isomorphic(&p, &p).unwrap();
        assert_eq!(f, vec![0, 1, 2, 3]);
        assert!(poset_isomorphic(&Poset::chain(3), &Poset::antichain(3)).is_none());
        // Relabelled copy.
        let q = Poset::from_covers(4, &[(3, 1), (1, 0), (2, 0)]).unwrap();
        let g = poset_isomorphic(&p, &q).unwrap();
        for i in 0..4 {
            for j in 0..4 {
                assert_eq!(p.leq(i, j), q.leq(g[i], g[j]));
            }
        }
    }

    #[test]
    fn dot_export() {
        let one = export_dot(&Poset::chain(1), &["a".into()]);
        assert_eq!(one, "digraph P {\n  rankdir=BT;\n  n0 [label=\"a\"];\n}\n");
        let two = export_dot(&Poset::chain(2), &["a".into(), "b".into()]);
        assert_eq!(two.matches("->").count(), 1);
        let labels: Vec<String> = (0..4).map(|i| i.to_string()).collect();
        let d = export_dot(&si_dual(3), &labels);
        assert_eq!(d.matches("->").count(), 3);
        assert_eq!(d.matches("n0 ->").count(), 3);
    }

    #[test]
    fn covers_are_transitive_reduction() {
        let p = Poset::chain(4);
        assert_eq!(p.covers(), vec![(0, 1), (1, 2), (2, 3)]);
        assert_eq!(p.lower_covers(2), vec![1]);
    }
}
