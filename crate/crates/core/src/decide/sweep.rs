use rayon::prelude::*;

use crate::algebra::TableAlgebra;
use crate::error::{Error, Result};
use crate::limits::Limits;
use crate::term::{Program, QuasiIdentity, Term, Valuation};

use super::{Method, Verdict};

/// Roots are laid out as premise sides `2j, 2j+1`, then the conclusion sides.
struct Compiled {
    prog: Program,
    premises: usize,
}

impl Compiled {
    fn new(q: &QuasiIdentity) -> Self {
        let mut roots: Vec<&Term> = Vec::new();
        for p in &q.premises {
            roots.push(&p.lhs);
            roots.push(&p.rhs);
        }
        roots.push(&q.conclusion.lhs);
        roots.push(&q.conclusion.rhs);
        Compiled {
            prog: Program::compile(&roots),
            premises: q.premises.len(),
        }
    }

    fn conclusion_root(&self) -> usize {
        2 * self.premises
    }

    /// Whether the valuation refutes the quasi-identity.
    fn refutes(&self, scratch: &[usize]) -> bool {
        let p = &self.prog;
        (0..self.premises).all(|j| p.root(scratch, 2 * j) == p.root(scratch, 2 * j + 1))
            && p.root(scratch, self.conclusion_root()) != p.root(scratch, self.conclusion_root() + 1)
    }

    fn witness(&self, slots: &[usize]) -> Valuation<usize> {
        self.prog.vars().iter().copied().zip(slots.iter().copied()).collect()
    }
}

fn valuations_needed(size: usize, vars: usize) -> u128 {
    (size as u128).checked_pow(vars as u32).unwrap_or(u128::MAX)
}

/// Visits every valuation in lexicographic order (`x1` most significant).
///
/// The first variable is split across threads; the reported witness is the
/// lexicographically first one regardless of scheduling, and `budgetUsed`
/// is its rank plus one (or the total when the quasi-identity holds).
pub fn exhaustive(q: &QuasiIdentity, a: &TableAlgebra, limits: &Limits) -> Result<Verdict> {
    let c = Compiled::new(q);
    let vars = c.prog.vars().len();
    let size = a.size();
    let needed = valuations_needed(size, vars);
    if needed > limits.budget {
        return Err(Error::BudgetExceeded {
            needed,
            budget: limits.budget,
        });
    }
    if vars == 0 {
        let mut scratch = Vec::new();
        c.prog.eval_table(a, &[], &mut scratch);
        let fails = c.refutes(&scratch);
        return Ok(Verdict::new(!fails, fails.then(Valuation::new), Method::Exhaustive, 1));
    }
    let search = |first: usize| -> Option<Vec<usize>> {
        let mut slots = vec![0usize; vars];
        slots[0] = first;
        let mut scratch = Vec::with_capacity(c.prog.num_nodes());
        loop {
            c.prog.eval_table(a, &slots, &mut scratch);
            if c.refutes(&scratch) {
                return Some(slots);
            }
            // odometer on slots 1.., last slot fastest
            let mut d = vars - 1;
            loop {
                if d == 0 {
                    return None;
                }
                slots[d] += 1;
                if slots[d] < size {
                    break;
                }
                slots[d] = 0;
                d -= 1;
            }
        }
    };
    let found = (0..size).into_par_iter().find_map_first(search);
    Ok(match found {
        None => Verdict::new(true, None, Method::Exhaustive, needed),
        Some(slots) => {
            let rank = slots.iter().fold(0u128, |acc, &s| acc * size as u128 + s as u128);
            Verdict::new(false, Some(c.witness(&slots)), Method::Exhaustive, rank + 1)
        }
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Kind {
    /// `x = value`
    Equal,
    /// `x* = value`
    StarEqual,
    /// `x ≤ value`
    Below,
    /// `x ≥ value`
    Above,
}

#[derive(Debug, Clone)]
struct Constraint {
    kind: Kind,
    /// Root whose value bounds the variable.
    other: usize,
    /// Largest slot the bounding root depends on, if any.
    ready_after: Option<usize>,
}

fn joinands(t: &Term, out: &mut Vec<u32>) {
    match t {
        Term::Join(a, b) => {
            joinands(a, out);
            joinands(b, out);
        }
        Term::Var(i) => out.push(*i),
        _ => {}
    }
}

fn conjuncts(t: &Term, out: &mut Vec<u32>) {
    match t {
        Term::Meet(a, b) => {
            conjuncts(a, out);
            conjuncts(b, out);
        }
        Term::Var(i) => out.push(*i),
        _ => {}
    }
}

/// Reads off, for each premise side, the constraints it places on a single
/// variable once the other side is known.
fn constraints(q: &QuasiIdentity, c: &Compiled) -> Vec<Vec<Constraint>> {
    let vars = c.prog.vars();
    let mut out = vec![Vec::new(); vars.len()];
    for (j, p) in q.premises.iter().enumerate() {
        for (side, other, other_root) in [(&p.lhs, &p.rhs, 2 * j + 1), (&p.rhs, &p.lhs, 2 * j)] {
            let other_vars = other.vars();
            let ready_after = c.prog.slots_of_root(other_root).last().copied();
            let mut push = |v: u32, kind: Kind| {
                if other_vars.contains(&v) {
                    return;
                }
                let slot = c.prog.slot_of(v).expect("premise variable");
                if ready_after.is_none_or(|r| r < slot) {
                    out[slot].push(Constraint {
                        kind,
                        other: other_root,
                        ready_after,
                    });
                }
            };
            match side {
                Term::Var(v) => push(*v, Kind::Equal),
                Term::Star(inner) => {
                    if let Term::Var(v) = &**inner {
                        push(*v, Kind::StarEqual);
                    }
                }
                Term::Join(..) => {
                    let mut vs = Vec::new();
                    joinands(side, &mut vs);
                    for v in vs {
                        push(v, Kind::Below);
                    }
                }
                Term::Meet(..) => {
                    let mut vs = Vec::new();
                    conjuncts(side, &mut vs);
                    for v in vs {
                        push(v, Kind::Above);
                    }
                }
                _ => {}
            }
        }
    }
    out
}

/// Depth-first search over valuations that keeps only values compatible with
/// the premises seen so far.
///
/// Variables are assigned in slot order and candidate values in increasing
/// index order, so the witness found is the same as the exhaustive one.
/// `budgetUsed` counts search nodes.
pub fn pruned(q: &QuasiIdentity, a: &TableAlgebra, limits: &Limits) -> Result<Verdict> {
    let c = Compiled::new(q);
    let vars = c.prog.vars().len();
    let cons = constraints(q, &c);
    // premise j is checked right after its last slot is assigned
    let mut checks: Vec<Vec<usize>> = vec![Vec::new(); vars.max(1)];
    let mut closed_premises = Vec::new();
    for j in 0..c.premises {
        let mut s = c.prog.slots_of_root(2 * j);
        s.extend(c.prog.slots_of_root(2 * j + 1));
        match s.iter().max() {
            Some(&m) => checks[m].push(j),
            None => closed_premises.push(j),
        }
    }
    let mut preimage: Vec<Vec<usize>> = vec![Vec::new(); a.size()];
    for x in a.elements() {
        preimage[a.star(x)].push(x);
    }
    let mut search = Search {
        a,
        c: &c,
        cons: &cons,
        checks: &checks,
        preimage: &preimage,
        slots: vec![0; vars],
        scratch: Vec::new(),
        visited: 0,
        budget: limits.budget,
    };
    search.scratch_eval();
    if closed_premises
        .iter()
        .any(|&j| c.prog.root(&search.scratch, 2 * j) != c.prog.root(&search.scratch, 2 * j + 1))
    {
        return Ok(Verdict::new(true, None, Method::Pruned, 0));
    }
    let found = search.run(0)?;
    let used = search.visited;
    Ok(match found {
        true => Verdict::new(false, Some(c.witness(&search.slots)), Method::Pruned, used),
        false => Verdict::new(true, None, Method::Pruned, used),
    })
}

struct Search<'a> {
    a: &'a TableAlgebra,
    c: &'a Compiled,
    cons: &'a [Vec<Constraint>],
    checks: &'a [Vec<usize>],
    preimage: &'a [Vec<usize>],
    slots: Vec<usize>,
    scratch: Vec<usize>,
    visited: u128,
    budget: u128,
}

impl Search<'_> {
    fn scratch_eval(&mut self) {
        self.c.prog.eval_table(self.a, &self.slots, &mut self.scratch);
    }

    fn candidates(&mut self, d: usize) -> Vec<usize> {
        self.scratch_eval();
        let active: Vec<(Kind, usize)> = self.cons[d]
            .iter()
            .filter(|k| k.ready_after.is_none_or(|r| r < d))
            .map(|k| (k.kind, self.c.prog.root(&self.scratch, k.other)))
            .collect();
        let a = self.a;
        let mut cands: Vec<usize> = if let Some(&(_, v)) = active.iter().find(|(k, _)| *k == Kind::Equal) {
            vec![v]
        } else if let Some(&(_, v)) = active.iter().find(|(k, _)| *k == Kind::StarEqual) {
            self.preimage[v].clone()
        } else {
            a.elements().collect()
        };
        cands.retain(|&x| {
            active.iter().all(|&(k, v)| match k {
                Kind::Equal => x == v,
                Kind::StarEqual => a.star(x) == v,
                Kind::Below => a.leq(x, v),
                Kind::Above => a.leq(v, x),
            })
        });
        cands
    }

    fn run(&mut self, d: usize) -> Result<bool> {
        let vars = self.slots.len();
        if d == vars {
            self.scratch_eval();
            return Ok(self.c.refutes(&self.scratch));
        }
        for x in self.candidates(d) {
            self.visited += 1;
            if self.visited > self.budget {
                return Err(Error::BudgetExceeded {
                    needed: self.visited,
                    budget: self.budget,
                });
            }
            self.slots[d] = x;
            if !self.checks[d].is_empty() {
                self.scratch_eval();
                let p = &self.c.prog;
                let ok = self.checks[d]
                    .iter()
                    .all(|&j| p.root(&self.scratch, 2 * j) == p.root(&self.scratch, 2 * j + 1));
                if !ok {
                    continue;
                }
            }
            if self.run(d + 1)? {
                return Ok(true);
            }
        }
        self.slots[d] = 0;
        Ok(false)
    }
}
