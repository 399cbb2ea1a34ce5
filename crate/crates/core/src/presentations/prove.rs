//! Bounded, sound equational proving by congruence closure over ground
//! instances.
//!
//! The search instantiates every relation of the commutative theory with
//! tuples of free terms up to an instantiation depth, asserts the instances
//! in a union-find with congruence propagation, and asks whether the goal
//! sides meet. Depth is iterated from 0 to the budget; `Proven` is sound
//! (every asserted equation is a substitution instance of the theory),
//! `Unknown` says nothing.

use std::collections::HashMap;

use serde::Serialize;

use crate::error::{Error, Result};

use super::{free_terms, Presentation, Relation, Term};

/// Hash-consed terms with union-find and congruence propagation.
struct Congruence {
    // node data
    syms: Vec<NodeSym>,
    children: Vec<Vec<u32>>,
    hashcons: HashMap<(NodeSym, Vec<u32>), u32>,
    // union-find
    parent: Vec<u32>,
    rank: Vec<u32>,
    // congruence bookkeeping: nodes in which each class appears as a child
    uses: Vec<Vec<u32>>,
    // signature table: (sym, canonical children) -> representative node
    sigs: HashMap<(NodeSym, Vec<u32>), u32>,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
enum NodeSym {
    Proj(usize),
    Apply(String),
}

impl Congruence {
    fn new() -> Congruence {
        Congruence {
            syms: Vec::new(),
            children: Vec::new(),
            hashcons: HashMap::new(),
            parent: Vec::new(),
            rank: Vec::new(),
            uses: Vec::new(),
            sigs: HashMap::new(),
        }
    }

    fn intern(&mut self, t: &Term) -> u32 {
        let (sym, kids) = match t {
            Term::Proj { k, .. } => (NodeSym::Proj(*k), Vec::new()),
            Term::Apply { sym, args } => {
                let kids: Vec<u32> = args.iter().map(|a| self.intern(a)).collect();
                (NodeSym::Apply(sym.clone()), kids)
            }
        };
        if let Some(&id) = self.hashcons.get(&(sym.clone(), kids.clone())) {
            return id;
        }
        let id = self.syms.len() as u32;
        self.syms.push(sym.clone());
        self.children.push(kids.clone());
        self.parent.push(id);
        self.rank.push(0);
        self.uses.push(Vec::new());
        for &c in &kids {
            let rc = self.find(c);
            self.uses[rc as usize].push(id);
        }
        self.hashcons.insert((sym.clone(), kids.clone()), id);
        // Insert the signature now; if an equal signature is already
        // present, the two nodes are congruent and must be merged.
        let canon: Vec<u32> = kids.iter().map(|&c| self.find(c)).collect();
        if let Some(&other) = self.sigs.get(&(sym.clone(), canon.clone())) {
            self.merge(id, other);
        } else {
            self.sigs.insert((sym, canon), id);
        }
        id
    }

    fn find(&mut self, mut x: u32) -> u32 {
        while self.parent[x as usize] != x {
            let gp = self.parent[self.parent[x as usize] as usize];
            self.parent[x as usize] = gp;
            x = gp;
        }
        x
    }

    fn same(&mut self, a: u32, b: u32) -> bool {
        self.find(a) == self.find(b)
    }

    fn merge(&mut self, a: u32, b: u32) {
        let mut pending = vec![(a, b)];
        while let Some((a, b)) = pending.pop() {
            let ra = self.find(a);
            let rb = self.find(b);
            if ra == rb {
                continue;
            }
            let (big, small) = if self.rank[ra as usize] >= self.rank[rb as usize] {
                (ra, rb)
            } else {
                (rb, ra)
            };
            if self.rank[big as usize] == self.rank[small as usize] {
                self.rank[big as usize] += 1;
            }
            self.parent[small as usize] = big;
            // Re-canonicalize every node that used the absorbed class.
            let used = std::mem::take(&mut self.uses[small as usize]);
            for node in used {
                let sym = self.syms[node as usize].clone();
                let canon: Vec<u32> = self.children[node as usize]
                    .clone()
                    .iter()
                    .map(|&c| self.find(c))
                    .collect();
                if let Some(&other) = self.sigs.get(&(sym.clone(), canon.clone())) {
                    if !self.same(other, node) {
                        pending.push((other, node));
                    }
                } else {
                    self.sigs.insert((sym, canon), node);
                }
                // The node remains a user of the merged class.
                let rb = self.find(big) as usize;
                self.uses[rb].push(node);
            }
        }
    }
}

/// Outcome of the bounded proof search.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub enum ProofOutcome {
    /// Holds in every model of the presentation (as a commutative monad);
    /// `depth` is the instantiation depth that closed the proof and
    /// `instances` counts the asserted ground equations.
    Proven {
        depth: usize,
        instances: usize,
    },
    Unknown {
        depth: usize,
        instances: usize,
    },
}

impl ProofOutcome {
    pub fn proven(&self) -> bool {
        matches!(self, ProofOutcome::Proven { .. })
    }
}

/// Caps keeping the instantiation finite. `pool` bounds the number of free
/// terms offered to each variable and `instances` bounds the instance count
/// per relation and depth; both truncate in canonical term order, which
/// tries small terms (projections, the constant) first.
#[derive(Clone, Copy, Debug)]
pub struct ProverLimits {
    pub pool: usize,
    pub instances: usize,
}

impl Default for ProverLimits {
    fn default() -> ProverLimits {
        ProverLimits {
            pool: 64,
            instances: 200_000,
        }
    }
}

/// Sound bounded proof of `lhs = rhs` over `p`'s commutative theory.
/// Iterates instantiation depth 0..=budget and stops at the first success.
pub fn derive_equal(
    p: &Presentation,
    lhs: &Term,
    rhs: &Term,
    budget: usize,
) -> Result<ProofOutcome> {
    derive_equal_with(p, lhs, rhs, budget, ProverLimits::default())
}

pub fn derive_equal_with(
    p: &Presentation,
    lhs: &Term,
    rhs: &Term,
    budget: usize,
    limits: ProverLimits,
) -> Result<ProofOutcome> {
    let ctx = max_var_pair(lhs, rhs);
    p.check_term(&lhs.retarget(ctx), ctx)?;
    p.check_term(&rhs.retarget(ctx), ctx)?;
    let theory = p.commutative_theory();
    let mut last_instances = 0;
    for depth in 0..=budget {
        let pool = free_terms(p, ctx, depth, limits.pool).terms;
        let pool: Vec<Term> = pool.into_iter().take(limits.pool).collect();
        let mut cc = Congruence::new();
        let l = cc.intern(&lhs.retarget(ctx));
        let r = cc.intern(&rhs.retarget(ctx));
        let mut instances = 0usize;
        for rel in &theory {
            instances += assert_instances(&mut cc, rel, &pool, limits.instances);
        }
        last_instances = instances;
        if cc.same(l, r) {
            return Ok(ProofOutcome::Proven { depth, instances });
        }
    }
    Ok(ProofOutcome::Unknown {
        depth: budget,
        instances: last_instances,
    })
}

fn max_var_pair(lhs: &Term, rhs: &Term) -> usize {
    fn mv(t: &Term) -> usize {
        match t {
            Term::Proj { k, .. } => *k,
            Term::Apply { args, .. } => args.iter().map(mv).max().unwrap_or(0),
        }
    }
    mv(lhs).max(mv(rhs))
}

/// Asserts every instance of `rel` with variables drawn from `pool`, up to
/// `cap` instances, in canonical (small-first) order. Returns the number of
/// asserted instances.
fn assert_instances(cc: &mut Congruence, rel: &Relation, pool: &[Term], cap: usize) -> usize {
    let vars = rel.ctx;
    if vars == 0 {
        let l = cc.intern(&rel.lhs);
        let r = cc.intern(&rel.rhs);
        cc.merge(l, r);
        return 1;
    }
    if pool.is_empty() {
        return 0;
    }
    let mut count = 0usize;
    let mut idx = vec![0usize; vars];
    loop {
        let mapping: Vec<Term> = idx.iter().map(|&i| pool[i].clone()).collect();
        let l = rel.lhs.subst_vars(&mapping);
        let r = rel.rhs.subst_vars(&mapping);
        let li = cc.intern(&l);
        let ri = cc.intern(&r);
        cc.merge(li, ri);
        count += 1;
        if count >= cap {
            return count;
        }
        // advance odometer
        let mut i = 0;
        loop {
            if i == vars {
                return count;
            }
            idx[i] += 1;
            if idx[i] < pool.len() {
                break;
            }
            idx[i] = 0;
            i += 1;
        }
    }
}

/// Classes of a term set under the congruence generated by the explicit
/// relations (no implicit commutativity): the word-monad style folding.
/// Returns the class representatives (canonical minima), sorted.
pub fn fold_terms(
    p: &Presentation,
    terms: &[Term],
    limits: ProverLimits,
) -> Result<Vec<Vec<Term>>> {
    if terms.is_empty() {
        return Ok(Vec::new());
    }
    let mut cc = Congruence::new();
    let ids: Vec<u32> = terms.iter().map(|t| cc.intern(t)).collect();
    for rel in &p.relations {
        assert_instances(&mut cc, rel, terms, limits.instances);
    }
    let mut classes: HashMap<u32, Vec<Term>> = HashMap::new();
    for (t, &id) in terms.iter().zip(&ids) {
        classes.entry(cc.find(id)).or_default().push(t.clone());
    }
    let mut out: Vec<Vec<Term>> = classes
        .into_values()
        .map(|mut c| {
            c.sort();
            c
        })
        .collect();
    out.sort();
    Ok(out)
}

/// `fold_terms` over the free terms of context `n` at the given depth.
pub fn fold_free_terms(
    p: &Presentation,
    n: usize,
    depth: usize,
    cap: usize,
) -> Result<Vec<Vec<Term>>> {
    let ts = free_terms(p, n, depth, cap);
    if ts.truncated {
        return Err(Error::undecided(format!(
            "free-term enumeration truncated at {cap} terms"
        )));
    }
    fold_terms(p, &ts.terms, ProverLimits::default())
}

#[cfg(test)]
mod cc_tests {
    use super::*;
    use crate::presentations::{parse_presentation, Term};

    fn t(p: &super::super::Presentation, s: &str) -> Term {
        let text = format!("{}rel {s} = {s};", p.to_text());
        parse_presentation(&text).unwrap().relations.last().unwrap().lhs.clone()
    }

    /// Congruence propagates through parents and along chains.
    #[test]
    fn closure_propagates_through_applications() {
        // a = b and b = c are ground relations; f(g(a)) = f(g(c)) follows.
        let p = parse_presentation(
            "base F_empty; gen a/0, b/0, c/0, f/1, g/1; rel a = b; rel b = c;",
        )
        .unwrap();
        let lhs = t(&p, "f(g(a))");
        let rhs = t(&p, "f(g(c))");
        assert!(derive_equal(&p, &lhs, &rhs, 0).unwrap().proven());
        // f(a) = g(a) does follow: constants are fixed by every operation
        // in a commutative monad, so f(a) = a = g(a).
        let lhs = t(&p, "f(a)");
        let rhs = t(&p, "g(a)");
        assert!(derive_equal(&p, &lhs, &rhs, 1).unwrap().proven());
        // On a variable there is no such collapse.
        let lhs = t(&p, "f(x1)");
        let rhs = t(&p, "g(x1)");
        assert!(!derive_equal(&p, &lhs, &rhs, 2).unwrap().proven());
    }

    /// A variable-instantiated rewrite reaches under binders of depth 2.
    #[test]
    fn instantiation_reaches_nested_positions() {
        let p = parse_presentation(
            "base F_empty; gen f/1, g/2; rel f(f(x1)) = x1;",
        )
        .unwrap();
        let lhs = t(&p, "g(f(f(x1)), f(f(f(x2))))");
        let rhs = t(&p, "g(x1, f(x2))");
        assert!(derive_equal(&p, &lhs, &rhs, 1).unwrap().proven());
    }

    /// Unknown stays unknown without relations (soundness smoke).
    #[test]
    fn no_relations_no_proofs() {
        let p = parse_presentation("base F_empty; gen f/1;").unwrap();
        let lhs = t(&p, "f(x1)");
        let rhs = t(&p, "x1");
        assert!(!derive_equal(&p, &lhs, &rhs, 3).unwrap().proven());
    }

    /// The implicit commutation law of a unary generator with the constant
    /// proves neg(0) = 0 without it being written.
    #[test]
    fn implicit_commutation_with_the_constant() {
        let p = parse_presentation("base F1; gen neg/1;").unwrap();
        let lhs = t(&p, "neg(0)");
        let rhs = t(&p, "0");
        assert!(derive_equal(&p, &lhs, &rhs, 0).unwrap().proven());
    }

    /// Folding with an idempotence relation merges towers.
    #[test]
    fn fold_idempotent_tower() {
        let p = parse_presentation("base F_empty; gen f/1; rel f(f(x1)) = f(x1);").unwrap();
        let classes = fold_free_terms(&p, 1, 4, 10_000).unwrap();
        // x1, f(x1) are the only classes: every deeper tower folds down.
        assert_eq!(classes.len(), 2);
    }
}
