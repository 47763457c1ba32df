//! Executable checks of the structural laws relating a finite p-algebra to its
//! completely meet-irreducible congruences.
//!
//! [`audit`] runs every law on one algebra and reports each failure with a
//! witness; [`corpus`] is the standard set of small algebras the laws are
//! exercised on.

use std::collections::HashMap;

use serde::Serialize;

use crate::algebra::{
    atoms, build_chain, build_si, dense_elements, glivenko, join_irreducibles, lower_cover, product, quotient,
    regular_elements, TableAlgebra, UpsetAlgebra,
};
use crate::congruence::{
    all_congruences, cm_all, cm_leq, m_hat, meet_irreducibles, prime_filters, principal_congruence, CmRecord,
    Congruence, Storey,
};
use crate::error::Result;
use crate::free::{build_free, Rank};
use crate::limits::Limits;
use crate::order::{ElementSet, Poset};

const KEPT_WITNESSES: usize = 8;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct LawCheck {
    pub law: &'static str,
    pub failures: usize,
    /// The first few failures.
    pub witnesses: Vec<String>,
}

impl LawCheck {
    fn fail(&mut self, msg: String) {
        self.failures += 1;
        if self.witnesses.len() < KEPT_WITNESSES {
            self.witnesses.push(msg);
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct AuditReport {
    pub algebra: String,
    pub size: usize,
    pub checks: Vec<LawCheck>,
}

impl AuditReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.failures == 0)
    }

    pub fn failures(&self) -> usize {
        self.checks.iter().map(|c| c.failures).sum()
    }

    fn law(&mut self, law: &'static str) -> &mut LawCheck {
        self.checks.push(LawCheck {
            law,
            failures: 0,
            witnesses: Vec::new(),
        });
        self.checks.last_mut().expect("just pushed")
    }
}

/// The standard audit corpus: `B̄_0..B̄_3`, `C_3..C_6`, `F_1(1)`, `F_2(1)`,
/// `F_1(2)`, `B̄_1 × B̄_1`, and for each of these its Glivenko quotient and
/// its quotients by `Θ(p, 1)` for join-irreducible `p`.
pub fn corpus(limits: &Limits) -> Result<Vec<(String, TableAlgebra)>> {
    let mut base = Vec::new();
    for n in 0..=3 {
        base.push((format!("si:{n}"), build_si(n, limits)?));
    }
    for m in 3..=6 {
        base.push((format!("chain:{m}"), build_chain(m, limits)?));
    }
    for (n, k) in [(1, 1), (2, 1), (1, 2)] {
        base.push((
            format!("free:{n},{k}"),
            build_free(Rank::Finite(n), k, limits)?.to_table(limits)?.0,
        ));
    }
    let b1 = build_si(1, limits)?;
    base.push(("si:1*si:1".into(), product(&b1, &b1, limits)?));
    let mut out = base.clone();
    for (name, a) in &base {
        let mut seen: Vec<Congruence> = Vec::new();
        let (g, _, _) = glivenko(a);
        let mut cands = vec![("glivenko".to_string(), g)];
        for p in join_irreducibles(a).iter() {
            cands.push((format!("theta({p},1)"), principal_congruence(a, p, a.one())));
        }
        for (what, theta) in cands {
            if theta.is_identity() || theta.is_full() || seen.contains(&theta) {
                continue;
            }
            out.push((format!("{name}/{what}"), quotient(a, &theta)?));
            seen.push(theta);
        }
    }
    Ok(out)
}

fn set_str(s: &ElementSet) -> String {
    format!("{:?}", s.iter().collect::<Vec<_>>())
}

/// Runs every law on `a`.
pub fn audit(a: &TableAlgebra, name: &str, limits: &Limits) -> Result<AuditReport> {
    let records = cm_all(a, limits)?;
    let mut rep = AuditReport {
        algebra: name.to_string(),
        size: a.size(),
        checks: Vec::new(),
    };
    let ctx = Ctx::new(a, &records);
    let oracle = if a.size() <= limits.oracle_cap {
        Some(all_congruences(a, limits)?)
    } else {
        None
    };

    phi_bijection(&ctx, oracle.as_deref(), rep.law("phi-bijection"));
    psi_bijection(&ctx, rep.law("psi-order-inverting-bijection"));
    cm_regular(&ctx, oracle.as_deref(), rep.law("cm-regular"));
    one_orderable(&ctx, rep.law("one-orderable"));
    mu_plus(&ctx, oracle.as_deref(), rep.law("mu-plus"))?;
    storeys(&ctx, rep.law("storey"));
    storey_order(&ctx, rep.law("storey-order"));
    glivenko_storey(&ctx, rep.law("glivenko-is-storey-I"));
    i_is_regular(&ctx, oracle.as_deref(), rep.law("I-is-regular"));
    up_cm(&ctx, limits, rep.law("up-cm-isomorphism"));
    star_for_jirr(&ctx, rep.law("star-for-join-irreducible"));
    atoms_and_cms(&ctx, rep.law("atoms-and-cms"));
    second_storey(&ctx, rep.law("second-storey"));
    tech_for_qid(&ctx, rep.law("regular-by-storeys"));
    super_glivenko(&ctx, rep.law("super-glivenko"));
    dense_filter(&ctx, rep.law("dense-filter"));
    regulars(&ctx, rep.law("regulars-from-atoms"));
    Ok(rep)
}

struct Ctx<'a> {
    a: &'a TableAlgebra,
    r: &'a [CmRecord],
    /// `M̂(x)` for every element.
    hat: Vec<ElementSet>,
    storey_one: ElementSet,
    by_generator: HashMap<usize, usize>,
}

impl<'a> Ctx<'a> {
    fn new(a: &'a TableAlgebra, r: &'a [CmRecord]) -> Self {
        let hat = a.elements().map(|x| m_hat(a, r, x)).collect();
        let storey_one = ElementSet::from_indices(r.len(), (0..r.len()).filter(|&i| r[i].storey == Storey::I));
        let by_generator = r.iter().enumerate().map(|(i, rec)| (rec.psi, i)).collect();
        Ctx {
            a,
            r,
            hat,
            storey_one,
            by_generator,
        }
    }

    /// `M(θ)`: the records containing `θ`.
    fn m_of(&self, theta: &Congruence) -> ElementSet {
        ElementSet::from_indices(self.r.len(), (0..self.r.len()).filter(|&i| theta.leq(&self.r[i].mu)))
    }

    fn storey_two(&self) -> ElementSet {
        self.storey_one.complement()
    }
}

fn phi_bijection(c: &Ctx, oracle: Option<&[Congruence]>, law: &mut LawCheck) {
    let mut ours: Vec<Vec<usize>> = c.r.iter().map(|r| r.filter.set.iter().collect()).collect();
    let mut theirs: Vec<Vec<usize>> = prime_filters(c.a).iter().map(|f| f.set.iter().collect()).collect();
    for r in c.r {
        if r.mu.class(c.a.one()) != r.filter.set {
            law.fail(format!("1-class of record {} is not its filter", r.psi));
        }
    }
    ours.sort();
    theirs.sort();
    let before = ours.len();
    ours.dedup();
    if ours.len() != before {
        law.fail("two records share a 1-class".into());
    }
    if ours != theirs {
        law.fail("1-classes of records are not exactly the prime filters".into());
    }
    if let Some(cons) = oracle {
        let mi = meet_irreducibles(cons);
        let mut ones: Vec<Vec<usize>> = mi.iter().map(|m| m.class(c.a.one()).iter().collect()).collect();
        ones.sort();
        if ones != theirs {
            law.fail("1-classes of meet-irreducibles of Con are not the prime filters".into());
        }
    }
}

fn psi_bijection(c: &Ctx, law: &mut LawCheck) {
    let a = c.a;
    let jirr = join_irreducibles(a);
    let psis = ElementSet::from_indices(a.size(), c.r.iter().map(|r| r.psi));
    if psis != jirr || psis.count() != c.r.len() {
        law.fail(format!(
            "psi values {} are not the join-irreducibles {}",
            set_str(&psis),
            set_str(&jirr)
        ));
    }
    for r in c.r {
        if a.meet_all(r.filter.set.iter()) != r.psi {
            law.fail(format!("psi {} is not the meet of its filter", r.psi));
        }
    }
    for r in c.r {
        for s in c.r {
            if cm_leq(r, s) != a.leq(s.psi, r.psi) {
                law.fail(format!("order between records {} and {} is not inverted", r.psi, s.psi));
            }
        }
    }
}

fn cm_regular(c: &Ctx, oracle: Option<&[Congruence]>, law: &mut LawCheck) {
    for (i, r) in c.r.iter().enumerate() {
        for s in &c.r[i + 1..] {
            if r.filter.set == s.filter.set {
                law.fail(format!("records {} and {} share a 1-class", r.psi, s.psi));
            }
        }
    }
    if let Some(cons) = oracle {
        let mi = meet_irreducibles(cons);
        for (i, m) in mi.iter().enumerate() {
            for n in &mi[i + 1..] {
                if m.class(c.a.one()) == n.class(c.a.one()) {
                    law.fail(format!(
                        "meet-irreducibles {:?} and {:?} share a 1-class",
                        m.class_ids(),
                        n.class_ids()
                    ));
                }
            }
        }
    }
}

fn one_orderable(c: &Ctx, law: &mut LawCheck) {
    let a = c.a;
    let thetas: Vec<Congruence> = a.elements().map(|x| principal_congruence(a, x, a.one())).collect();
    for x in a.elements() {
        for y in a.elements() {
            if thetas[x].same(y, a.one()) != a.leq(x, y) {
                law.fail(format!("(y,1) in Θ(x,1) disagrees with x ≤ y at x={x}, y={y}"));
            }
            if x < y && thetas[x] == thetas[y] {
                law.fail(format!("Θ({x},1) = Θ({y},1)"));
            }
        }
    }
}

fn mu_plus(c: &Ctx, oracle: Option<&[Congruence]>, law: &mut LawCheck) -> Result<()> {
    let a = c.a;
    for r in c.r {
        let one = r.mu.class(a.one());
        let sub = r.mu.class(r.e_mu);
        if !one.is_disjoint(&sub) || r.mu_plus.class(a.one()) != one.union(&sub) {
            law.fail(format!("1-class of the cover of record {} is not 1/μ ∪ e/μ", r.psi));
        }
        if !r.mu.leq(&r.mu_plus) || r.mu == r.mu_plus {
            law.fail(format!("cover of record {} is not strictly above it", r.psi));
        }
        let upper = r.mu_plus.class(a.one());
        for x in a.elements().filter(|&x| !upper.contains(x)) {
            let xx = a.star(a.star(x));
            let classes = [r.mu_plus.class(x), r.mu.class(x), r.mu.class(xx), r.mu_plus.class(xx)];
            if classes.iter().any(|s| *s != classes[0]) {
                law.fail(format!(
                    "classes of {x} and {xx} differ below the cover of record {}",
                    r.psi
                ));
            }
        }
        let q = quotient(a, &r.mu_plus)?;
        if q.elements().any(|x| q.star(q.star(x)) != x) {
            law.fail(format!("quotient by the cover of record {} is not Boolean", r.psi));
        }
        if let Some(cons) = oracle {
            let above: Vec<&Congruence> = cons.iter().filter(|t| r.mu.leq(t) && **t != r.mu).collect();
            let least = above.iter().all(|t| r.mu_plus.leq(t));
            if !least || !above.contains(&&r.mu_plus) {
                law.fail(format!("cover of record {} is not the unique cover in Con", r.psi));
            }
        }
    }
    Ok(())
}

fn storeys(c: &Ctx, law: &mut LawCheck) {
    let at = atoms(c.a);
    for r in c.r {
        let i = r.storey == Storey::I;
        if i != r.mu_plus.is_full() || i != at.contains(r.psi) {
            law.fail(format!(
                "storey of record {} disagrees with its cover or with psi",
                r.psi
            ));
        }
    }
}

fn storey_order(c: &Ctx, law: &mut LawCheck) {
    for r in c.r {
        for s in c.r {
            let incl = r.mu.leq(&s.mu);
            let cm = cm_leq(r, s);
            if incl && !cm {
                law.fail(format!("inclusion without ≤^Cm between {} and {}", r.psi, s.psi));
            }
            if s.storey == Storey::I && incl != cm {
                law.fail(format!("⊆ and ≤^Cm differ between {} and storey-I {}", r.psi, s.psi));
            }
        }
    }
}

fn glivenko_storey(c: &Ctx, law: &mut LawCheck) {
    let (g, _, _) = glivenko(c.a);
    let m = c.m_of(&g);
    if m != c.storey_one {
        law.fail(format!(
            "M(∼_G) = {} but storey I is {}",
            set_str(&m),
            set_str(&c.storey_one)
        ));
    }
}

fn i_is_regular(c: &Ctx, oracle: Option<&[Congruence]>, law: &mut LawCheck) {
    let a = c.a;
    let (g, _, _) = glivenko(a);
    let thetas: Vec<Congruence> = match oracle {
        Some(cons) => cons
            .iter()
            .filter(|t| c.m_of(t).is_subset(&c.storey_one))
            .cloned()
            .collect(),
        None => {
            let mut v = vec![g.clone()];
            v.extend(a.elements().map(|x| crate::congruence::extend(a, &g, x, a.one())));
            v
        }
    };
    for t in &thetas {
        if !c.m_of(t).is_subset(&c.storey_one) {
            law.fail(format!("{:?} has a storey-II record above it", t.class_ids()));
            continue;
        }
        for x in a.elements() {
            for y in a.elements() {
                let equiv = a.join(a.meet(a.star(x), a.star(y)), a.meet(x, y));
                let diff = a.meet(a.join(x, y), a.star(a.meet(x, y)));
                let p = t.same(x, y);
                if p != t.same(equiv, a.one()) || p != t.same(diff, a.zero()) {
                    law.fail(format!("pair ({x},{y}) in {:?}", t.class_ids()));
                }
            }
        }
    }
}

fn up_cm(c: &Ctx, limits: &Limits, law: &mut LawCheck) {
    let a = c.a;
    let n = c.r.len();
    let Ok(cm_order) = Poset::from_leq(n, |i, j| cm_leq(&c.r[i], &c.r[j])) else {
        law.fail("≤^Cm is not a partial order".into());
        return;
    };
    let Ok(incl) = Poset::from_leq(n, |i, j| c.r[i].mu.leq(&c.r[j].mu)) else {
        law.fail("inclusion of records is not a partial order".into());
        return;
    };
    let up = UpsetAlgebra::new(cm_order);
    let up_incl = UpsetAlgebra::new(incl);
    match up.count(limits.table_cap as u128) {
        Some(k) if k == a.size() as u128 => {}
        other => law.fail(format!("Up(Cm, ≤^Cm) has {other:?} elements, the algebra {}", a.size())),
    }
    let mut distinct: Vec<&ElementSet> = c.hat.iter().collect();
    distinct.sort_by_key(|s| s.iter().collect::<Vec<_>>());
    distinct.dedup();
    if distinct.len() != a.size() {
        law.fail("M̂ is not injective".into());
    }
    for x in a.elements() {
        let h = &c.hat[x];
        if !up.is_element(h) || !up_incl.is_element(h) {
            law.fail(format!("M̂({x}) is not an upset"));
        }
        if c.hat[a.star(x)] != up.star(h) {
            law.fail(format!("M̂({x}*) is not the ≤^Cm pseudocomplement"));
        }
        if c.hat[a.star(x)] != up_incl.star(h) {
            law.fail(format!("M̂({x}*) is not the ⊆ pseudocomplement"));
        }
        for y in a.elements() {
            if c.hat[a.meet(x, y)] != h.intersection(&c.hat[y]) || c.hat[a.join(x, y)] != h.union(&c.hat[y]) {
                law.fail(format!("M̂ does not preserve the lattice operations at ({x},{y})"));
            }
        }
    }
}

fn star_for_jirr(c: &Ctx, law: &mut LawCheck) {
    let a = c.a;
    let at = atoms(a);
    for p in join_irreducibles(a).iter().filter(|&p| !at.contains(p)) {
        match lower_cover(a, p) {
            Some(q) if a.star(q) == a.star(p) => {}
            Some(q) => law.fail(format!("{q}* ≠ {p}* for the subcover {q} of {p}")),
            None => law.fail(format!("join-irreducible {p} has no unique subcover")),
        }
    }
}

fn atoms_and_cms(c: &Ctx, law: &mut LawCheck) {
    let a = c.a;
    let two = c.storey_two();
    for x in atoms(a).iter() {
        let Some(&m) = c.by_generator.get(&x) else {
            law.fail(format!("no record generated by the atom {x}"));
            continue;
        };
        let mu = &c.r[m].mu;
        if c.hat[x] != ElementSet::singleton(c.r.len(), m) || principal_congruence(a, x, a.one()) != *mu {
            law.fail(format!("M̂({x}) is not the single record Θ({x},1)"));
        }
        let mut expected = c.storey_one.clone();
        expected.remove(m);
        for i in two.iter().filter(|&i| !c.r[i].mu.leq(mu)) {
            expected.insert(i);
        }
        if c.hat[a.star(x)] != expected {
            law.fail(format!(
                "M̂({x}*) = {} expected {}",
                set_str(&c.hat[a.star(x)]),
                set_str(&expected)
            ));
        }
        let mut expected = ElementSet::singleton(c.r.len(), m);
        for i in two.iter().filter(|&i| c.r[i].mu_plus == *mu) {
            expected.insert(i);
        }
        let xx = a.star(a.star(x));
        if c.hat[xx] != expected {
            law.fail(format!(
                "M̂({x}**) = {} expected {}",
                set_str(&c.hat[xx]),
                set_str(&expected)
            ));
        }
    }
}

fn second_storey(c: &Ctx, law: &mut LawCheck) {
    let a = c.a;
    for x in atoms(a).iter() {
        let Some(&m) = c.by_generator.get(&x) else { continue };
        for nu in c.storey_two().iter() {
            let r = &c.r[nu];
            let p = r.psi;
            let in_m = r.mu_plus.leq(&c.r[m].mu);
            let below = r.mu.leq(&c.r[m].mu) && r.mu != c.r[m].mu;
            if !in_m != a.leq(p, a.star(x)) {
                law.fail(format!("atom {x}, record {p}: outside M(ν⁺) disagrees with p ≤ a*"));
            }
            if in_m != below || in_m != (a.leq(x, p) && x != p) {
                law.fail(format!(
                    "atom {x}, record {p}: inside M(ν⁺) disagrees with ν < μ_a or a < p"
                ));
            }
        }
    }
}

fn tech_for_qid(c: &Ctx, law: &mut LawCheck) {
    let a = c.a;
    let two = c.storey_two();
    let covers_m: Vec<ElementSet> = c.r.iter().map(|r| c.m_of(&r.mu_plus)).collect();
    for x in a.elements() {
        let regular = a.star(a.star(x)) == x;
        let hat_one = c.hat[x].intersection(&c.storey_one);
        let cond = two
            .iter()
            .all(|nu| c.hat[x].contains(nu) == covers_m[nu].is_subset(&hat_one));
        if regular != cond {
            law.fail(format!(
                "element {x}: regular = {regular} but the storey condition gives {cond}"
            ));
        }
    }
}

fn super_glivenko(c: &Ctx, law: &mut LawCheck) {
    let a = c.a;
    for x in a.elements() {
        for y in a.elements().filter(|&y| y > x) {
            let (sx, sy) = (a.star(x), a.star(y));
            if sx != sy && c.hat[sx].intersection(&c.storey_one) == c.hat[sy].intersection(&c.storey_one) {
                law.fail(format!("{x}* ≠ {y}* but their storey-I parts of M̂ agree"));
            }
        }
    }
}

fn dense_filter(c: &Ctx, law: &mut LawCheck) {
    let a = c.a;
    let top = a.join_all(atoms(a).iter());
    let d = dense_elements(a);
    if d != a.principal_filter(top) {
        law.fail(format!("dense elements {} are not ↑{top}", set_str(&d)));
    }
}

fn regulars(c: &Ctx, law: &mut LawCheck) {
    let a = c.a;
    let at: Vec<usize> = atoms(a).iter().collect();
    if at.len() > 20 {
        law.fail(format!("{} atoms, too many subsets to enumerate", at.len()));
        return;
    }
    let from_atoms = ElementSet::from_indices(
        a.size(),
        (0..1usize << at.len()).map(|s| {
            let j = a.join_all((0..at.len()).filter(|i| s >> i & 1 == 1).map(|i| at[i]));
            a.star(a.star(j))
        }),
    );
    let r = regular_elements(a);
    if r != from_atoms {
        law.fail(format!(
            "regular elements {} differ from {}",
            set_str(&r),
            set_str(&from_atoms)
        ));
    }
}
