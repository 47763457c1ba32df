use std::collections::HashMap;

use crate::algebra::{Operations, TableAlgebra};

use super::Term;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
enum Node {
    Zero,
    One,
    Var(usize),
    Meet(usize, usize),
    Join(usize, usize),
    Star(usize),
}

/// Several terms compiled into one shared DAG.
///
/// Identical subterms are evaluated once; variables are addressed by slot,
/// in increasing order of variable index.
#[derive(Debug, Clone)]
pub struct Program {
    nodes: Vec<Node>,
    roots: Vec<usize>,
    vars: Vec<u32>,
}

impl Program {
    pub fn compile(terms: &[&Term]) -> Program {
        let mut vars: Vec<u32> = terms.iter().flat_map(|t| t.vars()).collect();
        vars.sort_unstable();
        vars.dedup();
        let mut b = Builder {
            nodes: Vec::new(),
            index: HashMap::new(),
            vars: &vars,
        };
        let roots = terms.iter().map(|t| b.add(t)).collect();
        let nodes = b.nodes;
        Program { nodes, roots, vars }
    }

    /// Variable indices, one per slot.
    pub fn vars(&self) -> &[u32] {
        &self.vars
    }

    pub fn slot_of(&self, var: u32) -> Option<usize> {
        self.vars.binary_search(&var).ok()
    }

    pub fn num_roots(&self) -> usize {
        self.roots.len()
    }

    pub fn num_nodes(&self) -> usize {
        self.nodes.len()
    }

    /// Evaluates every node; `scratch` is resized as needed and afterwards
    /// holds the value of each node. Root values are read with [`Program::root`].
    pub fn eval_table(&self, a: &TableAlgebra, slots: &[usize], scratch: &mut Vec<usize>) {
        scratch.clear();
        for node in &self.nodes {
            let v = match *node {
                Node::Zero => a.zero(),
                Node::One => a.one(),
                Node::Var(s) => slots[s],
                Node::Meet(x, y) => a.meet(scratch[x], scratch[y]),
                Node::Join(x, y) => a.join(scratch[x], scratch[y]),
                Node::Star(x) => a.star(scratch[x]),
            };
            scratch.push(v);
        }
    }

    pub fn root(&self, scratch: &[usize], r: usize) -> usize {
        scratch[self.roots[r]]
    }

    /// Root values in any algebra.
    pub fn eval<A: Operations>(&self, a: &A, slots: &[A::Elem]) -> Vec<A::Elem> {
        let mut vals: Vec<A::Elem> = Vec::with_capacity(self.nodes.len());
        for node in &self.nodes {
            let v = match *node {
                Node::Zero => a.zero(),
                Node::One => a.one(),
                Node::Var(s) => slots[s].clone(),
                Node::Meet(x, y) => a.meet(&vals[x], &vals[y]),
                Node::Join(x, y) => a.join(&vals[x], &vals[y]),
                Node::Star(x) => a.star(&vals[x]),
            };
            vals.push(v);
        }
        self.roots.iter().map(|&r| vals[r].clone()).collect()
    }

    /// Whether root `r` is evaluable from the slots in `known` alone.
    pub fn depends_only_on(&self, r: usize, known: &[bool]) -> bool {
        let mut ok = vec![false; self.nodes.len()];
        for (i, node) in self.nodes.iter().enumerate() {
            ok[i] = match *node {
                Node::Zero | Node::One => true,
                Node::Var(s) => known[s],
                Node::Meet(x, y) | Node::Join(x, y) => ok[x] && ok[y],
                Node::Star(x) => ok[x],
            };
        }
        ok[self.roots[r]]
    }

    /// Slots that root `r` depends on.
    pub fn slots_of_root(&self, r: usize) -> Vec<usize> {
        let mut need = vec![false; self.nodes.len()];
        need[self.roots[r]] = true;
        let mut out = Vec::new();
        for i in (0..self.nodes.len()).rev() {
            if !need[i] {
                continue;
            }
            match self.nodes[i] {
                Node::Zero | Node::One => {}
                Node::Var(s) => out.push(s),
                Node::Meet(x, y) | Node::Join(x, y) => {
                    need[x] = true;
                    need[y] = true;
                }
                Node::Star(x) => need[x] = true,
            }
        }
        out.sort_unstable();
        out.dedup();
        out
    }
}

struct Builder<'a> {
    nodes: Vec<Node>,
    index: HashMap<Node, usize>,
    vars: &'a [u32],
}

impl Builder<'_> {
    fn add(&mut self, t: &Term) -> usize {
        let node = match t {
            Term::Zero => Node::Zero,
            Term::One => Node::One,
            Term::Var(i) => Node::Var(self.vars.binary_search(i).expect("collected above")),
            Term::Meet(a, b) => {
                let (x, y) = (self.add(a), self.add(b));
                Node::Meet(x, y)
            }
            Term::Join(a, b) => {
                let (x, y) = (self.add(a), self.add(b));
                Node::Join(x, y)
            }
            Term::Star(a) => Node::Star(self.add(a)),
        };
        if let Some(&i) = self.index.get(&node) {
            return i;
        }
        self.nodes.push(node);
        self.index.insert(node, self.nodes.len() - 1);
        self.nodes.len() - 1
    }
}
