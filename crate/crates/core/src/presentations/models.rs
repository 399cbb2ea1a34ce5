//! Exhaustive finite-model search: backtracking over operation tables with
//! incremental relation checking.
//!
//! Models are Σ-modules of the presented commutative monad on small
//! carriers, so the search enforces the explicit relations plus the
//! implicit pairwise commutation laws — the same theory the prover uses,
//! keeping refutation and proof sound against each other.

use std::collections::BTreeMap;

use serde::Serialize;

use crate::error::Result;

use super::{Presentation, Relation, Term};

/// A finite carrier {0, …, size−1} with one total table per symbol.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FiniteModel {
    pub size: usize,
    /// Symbol name → row-major table over argument tuples
    /// (index Σ args[i]·size^i).
    pub tables: BTreeMap<String, Vec<usize>>,
}

/// Evaluates a term against partially filled tables; `None` as soon as an
/// unassigned cell is hit.
fn eval_partial(
    size: usize,
    tables: &[Vec<Option<usize>>],
    sym_index: &BTreeMap<String, usize>,
    t: &Term,
    assignment: &[usize],
) -> Option<usize> {
    match t {
        Term::Proj { k, .. } => Some(assignment[*k - 1]),
        Term::Apply { sym, args } => {
            let mut idx = 0;
            let mut stride = 1;
            for a in args {
                let v = eval_partial(size, tables, sym_index, a, assignment)?;
                idx += v * stride;
                stride *= size;
            }
            tables[sym_index[sym]][idx]
        }
    }
}

impl FiniteModel {
    pub fn eval(&self, t: &Term, assignment: &[usize]) -> usize {
        match t {
            Term::Proj { k, .. } => assignment[*k - 1],
            Term::Apply { sym, args } => {
                let mut idx = 0;
                let mut stride = 1;
                for a in args {
                    idx += self.eval(a, assignment) * stride;
                    stride *= self.size;
                }
                self.tables[sym][idx]
            }
        }
    }
}

/// Outcome of the countermodel search.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub enum CountermodelOutcome {
    /// A model of the presentation in which lhs ≠ rhs at the recorded
    /// assignment.
    Found {
        model: FiniteModel,
        assignment: Vec<usize>,
    },
    /// No countermodel on any carrier of size ≤ max_size.
    None,
    /// Node budget exhausted before the search completed.
    Undecided,
}

struct Search<'a> {
    size: usize,
    symbols: Vec<(String, usize)>,
    sym_index: BTreeMap<String, usize>,
    theory: &'a [Relation],
    goal_ctx: usize,
    lhs: &'a Term,
    rhs: &'a Term,
    // tables under construction
    tables: Vec<Vec<Option<usize>>>,
    // flattened cell order: (symbol index, tuple index)
    cells: Vec<(usize, usize)>,
    assignments: Vec<Vec<Vec<usize>>>,
    nodes: u64,
    budget: u64,
}

impl<'a> Search<'a> {
    fn relations_hold_so_far(&self) -> bool {
        for rel in self.theory {
            for asg in &self.assignments[rel.ctx] {
                let l = eval_partial(self.size, &self.tables, &self.sym_index, &rel.lhs, asg);
                let r = eval_partial(self.size, &self.tables, &self.sym_index, &rel.rhs, asg);
                if let (Some(l), Some(r)) = (l, r) {
                    if l != r {
                        return false;
                    }
                }
            }
        }
        true
    }

    fn complete_model(&self) -> FiniteModel {
        let mut tables = BTreeMap::new();
        for ((name, _), tab) in self.symbols.iter().zip(&self.tables) {
            tables.insert(
                name.clone(),
                tab.iter().map(|v| v.expect("table complete")).collect(),
            );
        }
        FiniteModel {
            size: self.size,
            tables,
        }
    }

    /// DFS over cells; returns Some(outcome) when a countermodel is found
    /// or the budget dies.
    fn dfs(&mut self, cell: usize) -> Option<CountermodelOutcome> {
        self.nodes += 1;
        if self.nodes > self.budget {
            return Some(CountermodelOutcome::Undecided);
        }
        if cell == self.cells.len() {
            let model = self.complete_model();
            for asg in &self.assignments[self.goal_ctx] {
                if model.eval(self.lhs, asg) != model.eval(self.rhs, asg) {
                    return Some(CountermodelOutcome::Found {
                        model,
                        assignment: asg.clone(),
                    });
                }
            }
            return None;
        }
        let (sym, tuple) = self.cells[cell];
        for v in 0..self.size {
            self.tables[sym][tuple] = Some(v);
            if self.relations_hold_so_far() {
                if let Some(outcome) = self.dfs(cell + 1) {
                    return Some(outcome);
                }
            }
        }
        self.tables[sym][tuple] = None;
        None
    }
}

/// Exhaustive search for a model of `p` (read as a commutative monad) of
/// carrier size ≤ `max_size` in which `lhs ≠ rhs` somewhere. The
/// enumeration is cut off after `node_budget` search nodes.
pub fn find_countermodel(
    p: &Presentation,
    lhs: &Term,
    rhs: &Term,
    max_size: usize,
    node_budget: u64,
) -> Result<CountermodelOutcome> {
    let goal_ctx = {
        fn mv(t: &Term) -> usize {
            match t {
                Term::Proj { k, .. } => *k,
                Term::Apply { args, .. } => args.iter().map(mv).max().unwrap_or(0),
            }
        }
        mv(lhs).max(mv(rhs))
    };
    let lhs = lhs.retarget(goal_ctx);
    let rhs = rhs.retarget(goal_ctx);
    p.check_term(&lhs, goal_ctx)?;
    p.check_term(&rhs, goal_ctx)?;
    if lhs == rhs {
        return Ok(CountermodelOutcome::None);
    }
    let theory = p.commutative_theory();
    let symbols: Vec<(String, usize)> = p
        .signature()
        .into_iter()
        .map(|s| (s.name, s.arity))
        .collect();
    let max_ctx = theory
        .iter()
        .map(|r| r.ctx)
        .chain(std::iter::once(goal_ctx))
        .max()
        .unwrap_or(0);
    for size in 1..=max_size {
        let sym_index: BTreeMap<String, usize> = symbols
            .iter()
            .enumerate()
            .map(|(i, (n, _))| (n.clone(), i))
            .collect();
        let tables: Vec<Vec<Option<usize>>> = symbols
            .iter()
            .map(|(_, ar)| vec![None; size.pow(*ar as u32)])
            .collect();
        let mut cells = Vec::new();
        for (i, t) in tables.iter().enumerate() {
            for j in 0..t.len() {
                cells.push((i, j));
            }
        }
        // Pre-computed variable assignments per context arity.
        let mut assignments: Vec<Vec<Vec<usize>>> = Vec::with_capacity(max_ctx + 1);
        for ctx in 0..=max_ctx {
            let mut all = vec![vec![]];
            for _ in 0..ctx {
                let mut next = Vec::with_capacity(all.len() * size);
                for prefix in &all {
                    for v in 0..size {
                        let mut p: Vec<usize> = prefix.clone();
                        p.push(v);
                        next.push(p);
                    }
                }
                all = next;
            }
            assignments.push(all);
        }
        let mut search = Search {
            size,
            symbols: symbols.clone(),
            sym_index,
            theory: &theory,
            goal_ctx,
            lhs: &lhs,
            rhs: &rhs,
            tables,
            cells,
            assignments,
            nodes: 0,
            budget: node_budget,
        };
        if let Some(outcome) = search.dfs(0) {
            return Ok(outcome);
        }
    }
    Ok(CountermodelOutcome::None)
}
