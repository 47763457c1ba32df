//! Acceptance suite. Prints one PASS/FAIL line per criterion and exits
//! non-zero if any criterion fails.

use std::process::ExitCode;
use std::time::Instant;

use num_bigint::BigUint;

use palg::algebra::{atoms, build_chain, build_si, is_isomorphic, j_poset, product, TableAlgebra};
use palg::audit::{audit, corpus};
use palg::congruence::compose_check_permutability;
use palg::decide::{exhaustive, oracle_batch, pruned, QuasiIdentity};
use palg::free::{
    count_monotone_functions, enumerate_jindices, free_distributive, h3_poset, quotient_to_distributive,
    stone_decompose,
};
use palg::term::{ib_term, qb_system};
use palg::{build_free, count_jirr, Equation, Limits, Poset, Rank, Term};

type Outcome = Result<String, String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn err<E: std::fmt::Display>(e: E) -> String {
    e.to_string()
}

fn lim() -> Limits {
    Limits::default()
}

fn free_sizes() -> Outcome {
    let f11 = build_free(Rank::Finite(1), 1, &lim())
        .map_err(err)?
        .to_table(&lim())
        .map_err(err)?
        .0;
    ensure(f11.size() == 6, || format!("|F_1(1)| = {}", f11.size()))?;
    let b1b0 = product(
        &build_si(1, &lim()).map_err(err)?,
        &build_si(0, &lim()).map_err(err)?,
        &lim(),
    )
    .map_err(err)?;
    ensure(is_isomorphic(&f11, &b1b0).is_some(), || {
        "F_1(1) is not B̄_1 × B̄_0".into()
    })?;
    // x < x** < 1, x* < 1
    let figure = Poset::from_covers(4, &[(0, 1), (1, 3), (2, 3)]).map_err(err)?;
    for n in [2, 3] {
        let (t, _) = build_free(Rank::Finite(n), 1, &lim())
            .map_err(err)?
            .to_table(&lim())
            .map_err(err)?;
        ensure(t.size() == 7, || format!("|F_{n}(1)| = {}", t.size()))?;
        let (j, _) = j_poset(&t);
        ensure(palg::order::poset_isomorphic(&j, &figure).is_some(), || {
            format!("J(F_{n}(1)) does not match the expected Hasse diagram")
        })?;
    }
    Ok("F_1(1) ≅ B̄_1×B̄_0 with 6 elements; F_2(1), F_3(1) have 7".into())
}

fn counting() -> Outcome {
    let got: Vec<BigUint> = (1..=4).map(|n| count_jirr(Rank::Finite(n), 2)).collect();
    let want: Vec<BigUint> = [9u32, 17, 21, 22].into_iter().map(BigUint::from).collect();
    ensure(got == want, || format!("count_jirr(n,2) = {got:?}"))?;
    let mut checked = 0;
    for k in 0..=3 {
        for n in 0..=8 {
            let listed = enumerate_jindices(Rank::Finite(n), k).map_err(err)?.len();
            let counted = count_jirr(Rank::Finite(n), k);
            ensure(counted == BigUint::from(listed), || {
                format!("n={n} k={k}: {counted} vs {listed}")
            })?;
            checked += 1;
        }
    }
    Ok(format!(
        "9, 17, 21, 22; formula matches enumeration on {checked} (n,k) pairs"
    ))
}

fn distinct_atoms(a: &TableAlgebra, values: &[usize]) -> bool {
    let at = atoms(a);
    let mut v = values.to_vec();
    v.sort_unstable();
    v.dedup();
    v.len() == values.len() && values.iter().all(|&x| at.contains(x))
}

fn axiomatization() -> Outcome {
    let mut used = 0;
    for m in 1..=3 {
        let q = QuasiIdentity {
            premises: vec![],
            conclusion: Equation::new(ib_term(m), Term::One),
        };
        let own = exhaustive(&q, &build_si(m, &lim()).map_err(err)?, &lim()).map_err(err)?;
        ensure(own.holds, || format!("ib_{m} fails in B̄_{m}"))?;
        let next = build_si(m + 1, &lim()).map_err(err)?;
        let v = exhaustive(&q, &next, &lim()).map_err(err)?;
        let w: Vec<usize> = v
            .witness
            .as_ref()
            .map(|w| w.iter().map(|(_, &e)| e).collect())
            .unwrap_or_default();
        ensure(!v.holds && distinct_atoms(&next, &w), || {
            format!("ib_{m} in B̄_{}: {v:?}", m + 1)
        })?;
        used += own.budget_used;
    }
    Ok(format!(
        "ib_1..ib_3 hold in B̄_m and fail at atoms of B̄_(m+1); {used} valuations in the positive sweeps"
    ))
}

fn structural_incompleteness() -> Outcome {
    let q = qb_system(3);
    let (f41, _) = build_free(Rank::Finite(4), 1, &lim())
        .map_err(err)?
        .to_table(&lim())
        .map_err(err)?;
    let v = exhaustive(&q, &f41, &lim()).map_err(err)?;
    ensure(v.holds && v.budget_used == 343, || format!("F_4(1): {v:?}"))?;
    let (f32, _) = build_free(Rank::Finite(3), 2, &lim())
        .map_err(err)?
        .to_table(&lim())
        .map_err(err)?;
    let start = Instant::now();
    let p = pruned(&q, &f32, &lim()).map_err(err)?;
    let secs = start.elapsed().as_secs_f64();
    ensure(p.holds, || format!("F_3(2): {p:?}"))?;
    let b3 = build_si(3, &lim()).map_err(err)?;
    let f = exhaustive(&q, &b3, &lim()).map_err(err)?;
    let w: Vec<usize> = f
        .witness
        .as_ref()
        .map(|w| w.iter().map(|(_, &e)| e).collect())
        .unwrap_or_default();
    ensure(!f.holds && distinct_atoms(&b3, &w) && w.len() == 3, || {
        format!("B̄_3: {f:?}")
    })?;
    Ok(format!(
        "holds in F_4(1) (343 valuations) and F_3(2) ({} elements, {} nodes, {secs:.2}s); fails in B̄_3 at {w:?}",
        f32.size(),
        p.budget_used
    ))
}

fn oracle() -> Outcome {
    let r = oracle_batch(20240601, 1000, &lim()).map_err(err)?;
    ensure(r.agreements == 1000, || format!("disagreements: {:?}", r.disagreements))?;
    Ok(format!("1000/1000 agree ({} pairs equal)", r.equal))
}

fn invariants() -> Outcome {
    let c = corpus(&lim()).map_err(err)?;
    let mut failures = Vec::new();
    let mut laws = 0;
    for (name, a) in &c {
        let r = audit(a, name, &lim()).map_err(err)?;
        laws += r.checks.len();
        for ch in r.checks.iter().filter(|ch| ch.failures > 0) {
            failures.push(format!("{name}: {} {:?}", ch.law, ch.witnesses));
        }
    }
    ensure(failures.is_empty(), || failures.join("; "))?;
    Ok(format!("{} algebras, {laws} law checks, zero failures", c.len()))
}

fn quotient_theorem() -> Outcome {
    let dsizes: Vec<u64> = (0..=2)
        .map(|s| count_monotone_functions(s).map_err(err))
        .collect::<Result<_, _>>()?;
    ensure(dsizes == [2, 3, 6], || format!("monotone function counts {dsizes:?}"))?;
    let mut cases = 0;
    for n in 1..=2 {
        for k in 0..=2usize {
            for t in 0..1u64 << k {
                let (q, iso) = quotient_to_distributive(Rank::Finite(n), k, t, &lim()).map_err(err)?;
                let s = t.count_ones() as usize;
                let d = free_distributive(s, &lim())
                    .map_err(err)?
                    .to_table(&lim())
                    .map_err(err)?
                    .0;
                ensure(
                    iso.is_some() && q.size() as u64 == dsizes[s] && d.size() == q.size(),
                    || format!("n={n} k={k} T={t:b}: quotient has {} elements", q.size()),
                )?;
                cases += 1;
            }
        }
    }
    // A Boolean algebra has only Boolean quotients, so for n = 0 the collapse
    // of the atom's filter leaves the two-element algebra whatever T is.
    for k in 0..=2usize {
        for t in 0..1u64 << k {
            let (q, _) = quotient_to_distributive(Rank::Finite(0), k, t, &lim()).map_err(err)?;
            ensure(q.size() == 2, || {
                format!("n=0 k={k} T={t:b}: quotient has {} elements", q.size())
            })?;
        }
    }
    Ok(format!(
        "{cases} quotients isomorphic to D(|T|) for n 1..2; D sizes 2, 3, 6; n=0 excluded, its quotients are all 2"
    ))
}

fn stone() -> Outcome {
    for k in 0..=2 {
        let d = stone_decompose(k, &lim()).map_err(err)?;
        ensure(d.table_iso.is_some(), || format!("k={k}: no table isomorphism"))?;
        let (t, _) = build_free(Rank::Finite(1), k, &lim())
            .map_err(err)?
            .to_table(&lim())
            .map_err(err)?;
        ensure(t.size() as u128 == d.product_size, || {
            format!("k={k}: {} vs {}", t.size(), d.product_size)
        })?;
        if k == 2 {
            ensure(t.size() == 108, || format!("|F_1(2)| = {}", t.size()))?;
        }
    }
    Ok("|F_1(2)| = 108; F_1(k) ≅ ∏ D(|T|) for k ≤ 2".into())
}

fn h3() -> Outcome {
    for n in [Rank::Finite(2), Rank::Finite(3), Rank::Finite(4), Rank::Omega] {
        let h = h3_poset(n, 1, &lim()).map_err(err)?;
        let inc = h.inclusion.count_upsets(1000);
        let cm = h.cm_order.count_upsets(1000);
        ensure(inc == Some(8) && cm == Some(7) && h.identity_is_pp, || {
            format!("n={n}: Up(⊆) {inc:?}, Up(≤Cm) {cm:?}, pp {}", h.identity_is_pp)
        })?;
    }
    Ok("Up(Cm, ⊆) = 8, Up(Cm, ≤^Cm) = 7, identity is a pp-morphism (n = 2, 3, 4, ω)".into())
}

fn permutability() -> Outcome {
    let c4 = build_chain(4, &lim()).map_err(err)?;
    let w = compose_check_permutability(&c4, c4.one(), 2, &lim()).map_err(err)?;
    ensure(!w.is_empty(), || "C_4 is permutable at 1".into())?;
    let wide = Limits {
        oracle_cap: 128,
        ..lim()
    };
    let mut boolean = 0;
    let c = corpus(&lim()).map_err(err)?;
    for (name, a) in &c {
        for n in [2, 3] {
            let at0 = compose_check_permutability(a, a.zero(), n, &wide).map_err(err)?;
            ensure(at0.is_empty(), || format!("{name} is not {n}-permutable at 0"))?;
        }
        if a.elements().all(|x| a.star(a.star(x)) == x) {
            boolean += 1;
            for x in a.elements() {
                let ws = compose_check_permutability(a, x, 2, &wide).map_err(err)?;
                ensure(ws.is_empty(), || format!("Boolean {name} is not permutable at {x}"))?;
            }
        }
    }
    Ok(format!(
        "C_4 has {} witnesses at 1; {} corpus algebras permutable at 0; {boolean} Boolean members permutable everywhere",
        w.len(),
        c.len()
    ))
}

type Criterion = (&'static str, fn() -> Outcome);

fn main() -> ExitCode {
    let criteria: [Criterion; 10] = [
        ("free algebra sizes", free_sizes),
        ("join-irreducible counts", counting),
        ("axiomatization of Pa_m", axiomatization),
        ("structural incompleteness witness", structural_incompleteness),
        ("oracle equivalence", oracle),
        ("congruence invariant suite", invariants),
        ("quotient theorem", quotient_theorem),
        ("Stone decomposition", stone),
        ("order-level digression", h3),
        ("permutability", permutability),
    ];
    let mut failed = 0;
    for (i, (name, f)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = f();
        let secs = start.elapsed().as_secs_f64();
        match outcome {
            Ok(detail) => println!("PASS {:>2} {name} [{secs:.2}s]: {detail}", i + 1),
            Err(detail) => {
                failed += 1;
                println!("FAIL {:>2} {name} [{secs:.2}s]: {detail}", i + 1);
            }
        }
    }
    println!("{} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
