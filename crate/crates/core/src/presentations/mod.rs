//! Finitely presented algebraic monads: terms, a text grammar, free-term
//! enumeration, interpretations into concrete monads, bounded equational
//! proving and finite-model counterexample search, and tensor products of
//! presentations.
//!
//! A presentation lives over the base 𝔽_∅ (no constants) or 𝔽_1 (one
//! constant, written `0` in terms). Relations are universally quantified
//! term equations; the presented monad is always read as a *commutative*
//! monad, so the prover and the model finder silently add the pairwise
//! commutation laws of the signature, exactly the relations the written
//! presentations omit.

mod models;
mod parse;
mod prove;

pub use models::{find_countermodel, CountermodelOutcome, FiniteModel};
pub use parse::parse_presentation;
pub use prove::{
    derive_equal, derive_equal_with, fold_free_terms, fold_terms, ProofOutcome, ProverLimits,
};

use std::collections::BTreeSet;
use std::fmt;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::monad::{Handle, Val};

/// An operation symbol with its arity.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize)]
pub struct OpSymbol {
    pub name: String,
    pub arity: usize,
}

/// The name reserved for the base constant of 𝔽_1.
pub const ZERO_SYMBOL: &str = "0";

/// A term over a presentation's signature in a fixed context arity n:
/// either a projection {k}_n or a symbol applied to subterms.
#[derive(Clone, PartialEq, Eq, Hash, Serialize)]
pub enum Term {
    Proj { k: usize, n: usize },
    Apply { sym: String, args: Vec<Term> },
}

impl Term {
    pub fn proj(k: usize, n: usize) -> Term {
        Term::Proj { k, n }
    }

    pub fn apply(sym: impl Into<String>, args: Vec<Term>) -> Term {
        Term::Apply {
            sym: sym.into(),
            args,
        }
    }

    pub fn zero() -> Term {
        Term::apply(ZERO_SYMBOL, Vec::new())
    }

    pub fn size(&self) -> usize {
        match self {
            Term::Proj { .. } => 1,
            Term::Apply { args, .. } => 1 + args.iter().map(Term::size).sum::<usize>(),
        }
    }

    pub fn depth(&self) -> usize {
        match self {
            Term::Proj { .. } => 0,
            Term::Apply { args, .. } => 1 + args.iter().map(Term::depth).max().unwrap_or(0),
        }
    }

    /// Substitutes `mapping[k−1]` for every projection {k}; the results live
    /// in the mapping's context.
    pub fn subst_vars(&self, mapping: &[Term]) -> Term {
        match self {
            Term::Proj { k, .. } => mapping[*k - 1].clone(),
            Term::Apply { sym, args } => Term::Apply {
                sym: sym.clone(),
                args: args.iter().map(|a| a.subst_vars(mapping)).collect(),
            },
        }
    }

    /// Re-targets every projection to context arity n without changing
    /// indices.
    pub fn retarget(&self, n: usize) -> Term {
        match self {
            Term::Proj { k, .. } => Term::Proj { k: *k, n },
            Term::Apply { sym, args } => Term::Apply {
                sym: sym.clone(),
                args: args.iter().map(|a| a.retarget(n)).collect(),
            },
        }
    }

    fn max_var(&self) -> usize {
        match self {
            Term::Proj { k, .. } => *k,
            Term::Apply { args, .. } => args.iter().map(Term::max_var).max().unwrap_or(0),
        }
    }
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Term::Proj { k, .. } => write!(f, "x{k}"),
            Term::Apply { sym, args } => {
                if args.is_empty() {
                    write!(f, "{sym}")
                } else {
                    write!(f, "{sym}(")?;
                    for (i, a) in args.iter().enumerate() {
                        if i > 0 {
                            write!(f, ", ")?;
                        }
                        write!(f, "{a}")?;
                    }
                    write!(f, ")")
                }
            }
        }
    }
}

impl fmt::Debug for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

/// Canonical term order: by size, then structurally (projections before
/// applications, then by symbol name and arguments). Gives deterministic,
/// reproducible enumeration output.
impl Ord for Term {
    fn cmp(&self, other: &Term) -> std::cmp::Ordering {
        use std::cmp::Ordering;
        match self.size().cmp(&other.size()) {
            Ordering::Equal => {}
            o => return o,
        }
        match (self, other) {
            (Term::Proj { k: a, .. }, Term::Proj { k: b, .. }) => a.cmp(b),
            (Term::Proj { .. }, Term::Apply { .. }) => Ordering::Less,
            (Term::Apply { .. }, Term::Proj { .. }) => Ordering::Greater,
            (Term::Apply { sym: s1, args: a1 }, Term::Apply { sym: s2, args: a2 }) => {
                s1.cmp(s2).then_with(|| a1.cmp(a2))
            }
        }
    }
}

impl PartialOrd for Term {
    fn partial_cmp(&self, other: &Term) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Base {
    FEmpty,
    F1,
}

/// A relation: a pair of terms over one shared context arity.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Relation {
    pub ctx: usize,
    pub lhs: Term,
    pub rhs: Term,
}

/// A finitely presented monad: base, generator symbols, relations.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Presentation {
    pub base: Base,
    pub generators: Vec<OpSymbol>,
    pub relations: Vec<Relation>,
}

impl Presentation {
    pub fn new(
        base: Base,
        generators: Vec<OpSymbol>,
        relations: Vec<(Term, Term)>,
    ) -> Result<Presentation> {
        let mut p = Presentation {
            base,
            generators,
            relations: Vec::new(),
        };
        let mut names = BTreeSet::new();
        for g in &p.generators {
            if g.name == ZERO_SYMBOL {
                return Err(Error::input("the name 0 is reserved for the base constant"));
            }
            if !names.insert(g.name.clone()) {
                return Err(Error::input(format!("duplicate generator {}", g.name)));
            }
        }
        for (lhs, rhs) in relations {
            p.push_relation(lhs, rhs)?;
        }
        Ok(p)
    }

    /// Adds a relation, inferring the shared context arity from the
    /// variables used and validating both sides.
    pub fn push_relation(&mut self, lhs: Term, rhs: Term) -> Result<()> {
        let ctx = lhs.max_var().max(rhs.max_var());
        let lhs = lhs.retarget(ctx);
        let rhs = rhs.retarget(ctx);
        self.check_term(&lhs, ctx)?;
        self.check_term(&rhs, ctx)?;
        self.relations.push(Relation { ctx, lhs, rhs });
        Ok(())
    }

    pub fn arity_of(&self, sym: &str) -> Option<usize> {
        if sym == ZERO_SYMBOL && self.base == Base::F1 {
            return Some(0);
        }
        self.generators
            .iter()
            .find(|g| g.name == sym)
            .map(|g| g.arity)
    }

    /// All symbols visible in terms: the base constant (for 𝔽_1) plus the
    /// generators.
    pub fn signature(&self) -> Vec<OpSymbol> {
        let mut out = Vec::new();
        if self.base == Base::F1 {
            out.push(OpSymbol {
                name: ZERO_SYMBOL.into(),
                arity: 0,
            });
        }
        out.extend(self.generators.iter().cloned());
        out
    }

    pub fn check_term(&self, t: &Term, ctx: usize) -> Result<()> {
        match t {
            Term::Proj { k, n } => {
                if *k == 0 || *k > ctx || *n != ctx {
                    return Err(Error::input(format!(
                        "variable x{k} out of context arity {ctx}"
                    )));
                }
                Ok(())
            }
            Term::Apply { sym, args } => {
                let arity = self
                    .arity_of(sym)
                    .ok_or_else(|| Error::input(format!("unknown symbol {sym}")))?;
                if args.len() != arity {
                    return Err(Error::input(format!(
                        "symbol {sym} has arity {arity}, applied to {} arguments",
                        args.len()
                    )));
                }
                for a in args {
                    self.check_term(a, ctx)?;
                }
                Ok(())
            }
        }
    }

    /// Renders the presentation back in the text grammar.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        out.push_str(match self.base {
            Base::FEmpty => "base F_empty;\n",
            Base::F1 => "base F1;\n",
        });
        if !self.generators.is_empty() {
            let gens: Vec<String> = self
                .generators
                .iter()
                .map(|g| format!("{}/{}", g.name, g.arity))
                .collect();
            out.push_str(&format!("gen {};\n", gens.join(", ")));
        }
        for r in &self.relations {
            out.push_str(&format!("rel {} = {};\n", r.lhs, r.rhs));
        }
        out
    }

    /// The pairwise commutation law of two symbols (Def.-10 shape): for
    /// a of arity n and b of arity m, both sides live in context n·m with
    /// the variable grid (i, j) ↦ (i−1)·m + j.
    pub fn commutation_relation(a: &OpSymbol, b: &OpSymbol) -> (Term, Term) {
        let n = a.arity;
        let m = b.arity;
        let ctx = n * m;
        let var = |i: usize, j: usize| Term::proj((i - 1) * m + j, ctx);
        let lhs = Term::apply(
            a.name.clone(),
            (1..=n)
                .map(|i| Term::apply(b.name.clone(), (1..=m).map(|j| var(i, j)).collect()))
                .collect(),
        );
        let rhs = Term::apply(
            b.name.clone(),
            (1..=m)
                .map(|j| Term::apply(a.name.clone(), (1..=n).map(|i| var(i, j)).collect()))
                .collect(),
        );
        (lhs, rhs)
    }

    /// The relations plus the implicit commutation laws of every unordered
    /// signature pair — the equational theory of the presented monad read
    /// as a generalized (commutative) ring.
    pub fn commutative_theory(&self) -> Vec<Relation> {
        let mut out = self.relations.clone();
        let sig = self.signature();
        for (i, a) in sig.iter().enumerate() {
            for b in sig.iter().skip(i) {
                let (lhs, rhs) = Presentation::commutation_relation(a, b);
                if lhs != rhs {
                    let ctx = a.arity * b.arity;
                    out.push(Relation { ctx, lhs, rhs });
                }
            }
        }
        out
    }
}

/// Result of enumerating free terms: the canonical sorted list plus a
/// truncation marker when the explosion guard fired.
#[derive(Debug, Clone, Serialize)]
pub struct TermSet {
    pub terms: Vec<Term>,
    pub truncated: bool,
}

/// All terms reachable from the projections of context arity `n` by at most
/// `depth` applications of signature symbols, deduplicated syntactically and
/// sorted canonically. The result is capped at `cap` terms.
pub fn free_terms(p: &Presentation, n: usize, depth: usize, cap: usize) -> TermSet {
    let mut set: BTreeSet<Term> = (1..=n).map(|k| Term::proj(k, n)).collect();
    let sig = p.signature();
    let mut truncated = false;
    'grow: for _ in 0..depth {
        let snapshot: Vec<Term> = set.iter().cloned().collect();
        let mut new_terms: Vec<Term> = Vec::new();
        for sym in &sig {
            for args in tuples(&snapshot, sym.arity) {
                let t = Term::apply(sym.name.clone(), args);
                if !set.contains(&t) {
                    new_terms.push(t);
                    if set.len() + new_terms.len() > cap {
                        truncated = true;
                        break 'grow;
                    }
                }
            }
        }
        if new_terms.is_empty() {
            break;
        }
        set.extend(new_terms);
    }
    TermSet {
        terms: set.into_iter().collect(),
        truncated,
    }
}

fn tuples(pool: &[Term], arity: usize) -> Vec<Vec<Term>> {
    let mut out = vec![Vec::new()];
    for _ in 0..arity {
        let mut next = Vec::with_capacity(out.len() * pool.len());
        for prefix in &out {
            for t in pool {
                let mut p = prefix.clone();
                p.push(t.clone());
                next.push(p);
            }
        }
        out = next;
    }
    out
}

/// Assignment of concrete monad operations to a presentation's symbols.
#[derive(Clone, Debug)]
pub struct Interpretation {
    pub target: Handle,
    pub assignment: std::collections::BTreeMap<String, Val>,
}

impl Interpretation {
    pub fn new(target: Handle) -> Interpretation {
        Interpretation {
            target,
            assignment: Default::default(),
        }
    }

    pub fn assign(mut self, sym: impl Into<String>, v: Val) -> Interpretation {
        self.assignment.insert(sym.into(), v);
        self
    }
}

/// Evaluates a term bottom-up in the interpretation's target monad.
/// Projections map to coordinates; the base constant defaults to the
/// target's zero when not explicitly assigned.
pub fn interpret(t: &Term, i: &Interpretation, ctx: usize) -> Result<Val> {
    match t {
        Term::Proj { k, .. } => i.target.coordinate(*k, ctx),
        Term::Apply { sym, args } => {
            let op = match i.assignment.get(sym) {
                Some(v) => v.clone(),
                None if sym == ZERO_SYMBOL => i
                    .target
                    .constants()
                    .into_iter()
                    .next()
                    .ok_or_else(|| Error::input("target has no constant for 0"))?,
                None => return Err(Error::input(format!("unassigned symbol {sym}"))),
            };
            if i.target.arity(&op) != args.len() {
                return Err(Error::input(format!(
                    "assignment for {sym} has arity {}, term expects {}",
                    i.target.arity(&op),
                    args.len()
                )));
            }
            if args.is_empty() {
                // Push the constant into the ambient context.
                return i.target.induced(&[], &op, ctx);
            }
            let vals: Vec<Val> = args
                .iter()
                .map(|a| interpret(a, i, ctx))
                .collect::<Result<_>>()?;
            i.target.substitute(&op, &vals)
        }
    }
}

/// Per-relation verdicts of `check_relations`.
#[derive(Debug, Clone, Serialize)]
pub struct RelationCheck {
    pub relation: String,
    pub holds: bool,
    pub lhs: String,
    pub rhs: String,
}

#[derive(Debug, Clone, Serialize)]
pub struct RelationReport {
    pub checks: Vec<RelationCheck>,
    pub all_hold: bool,
}

/// Interprets both sides of every relation and compares them exactly.
pub fn check_relations(p: &Presentation, i: &Interpretation) -> Result<RelationReport> {
    let mut checks = Vec::new();
    for r in &p.relations {
        let lhs = interpret(&r.lhs, i, r.ctx)?;
        let rhs = interpret(&r.rhs, i, r.ctx)?;
        checks.push(RelationCheck {
            relation: format!("{} = {}", r.lhs, r.rhs),
            holds: lhs == rhs,
            lhs: lhs.to_string(),
            rhs: rhs.to_string(),
        });
    }
    let all_hold = checks.iter().all(|c| c.holds);
    Ok(RelationReport { checks, all_hold })
}

/// Tensor product of two presentations over a common base: disjoint union
/// of the (renamed) generators and relations, plus one commutation relation
/// per cross pair of generators. The base constant of 𝔽_1 is shared, not
/// duplicated.
pub fn tensor_presentation(p1: &Presentation, p2: &Presentation) -> Result<Presentation> {
    if p1.base != p2.base {
        return Err(Error::input("tensor factors must share the base"));
    }
    // Rename only where names collide, so small examples keep their names.
    let collide: BTreeSet<&String> = p1
        .generators
        .iter()
        .map(|g| &g.name)
        .filter(|n| p2.generators.iter().any(|g| &&g.name == n))
        .collect();
    let suffix = |side: usize, name: &String| -> String {
        if collide.contains(name) {
            format!("_{side}")
        } else {
            String::new()
        }
    };
    let mut generators = Vec::new();
    for g in &p1.generators {
        generators.push(OpSymbol {
            name: format!("{}{}", g.name, suffix(1, &g.name)),
            arity: g.arity,
        });
    }
    for g in &p2.generators {
        generators.push(OpSymbol {
            name: format!("{}{}", g.name, suffix(2, &g.name)),
            arity: g.arity,
        });
    }
    let mut out = Presentation::new(p1.base, generators, Vec::new())?;
    for (side, p) in [(1usize, p1), (2usize, p2)] {
        for r in &p.relations {
            let sfx: Vec<(String, String)> = p
                .generators
                .iter()
                .map(|g| (g.name.clone(), suffix(side, &g.name)))
                .collect();
            let rename = |t: &Term| rename_with(t, &sfx);
            out.push_relation(rename(&r.lhs), rename(&r.rhs))?;
        }
    }
    for g1 in &p1.generators {
        for g2 in &p2.generators {
            let a = OpSymbol {
                name: format!("{}{}", g1.name, suffix(1, &g1.name)),
                arity: g1.arity,
            };
            let b = OpSymbol {
                name: format!("{}{}", g2.name, suffix(2, &g2.name)),
                arity: g2.arity,
            };
            let (lhs, rhs) = Presentation::commutation_relation(&a, &b);
            if lhs != rhs {
                out.push_relation(lhs, rhs)?;
            }
        }
    }
    Ok(out)
}

fn rename_with(t: &Term, table: &[(String, String)]) -> Term {
    match t {
        Term::Proj { k, n } => Term::Proj { k: *k, n: *n },
        Term::Apply { sym, args } => {
            let sfx = table
                .iter()
                .find(|(n, _)| n == sym)
                .map(|(_, s)| s.as_str())
                .unwrap_or("");
            Term::Apply {
                sym: format!("{sym}{sfx}"),
                args: args.iter().map(|a| rename_with(a, table)).collect(),
            }
        }
    }
}

/// The abelian-group-style presentation of ℤ over 𝔽_1 with negation and
/// addition. Used by the tensor collapse computation and its tests.
pub fn integers_presentation(neg: &str, add: &str) -> Presentation {
    let x1 = || Term::proj(1, 1);
    let mut p = Presentation::new(
        Base::F1,
        vec![
            OpSymbol {
                name: neg.into(),
                arity: 1,
            },
            OpSymbol {
                name: add.into(),
                arity: 2,
            },
        ],
        Vec::new(),
    )
    .unwrap();
    let add2 = |a: Term, b: Term| Term::apply(add, vec![a, b]);
    // x + (−x) = 0, x + 0 = x = 0 + x, associativity, commutativity.
    p.push_relation(add2(x1(), Term::apply(neg, vec![x1()])), Term::zero())
        .unwrap();
    p.push_relation(add2(x1(), Term::zero()), x1()).unwrap();
    p.push_relation(add2(Term::zero(), x1()), x1()).unwrap();
    p.push_relation(
        add2(add2(Term::proj(1, 3), Term::proj(2, 3)), Term::proj(3, 3)),
        add2(Term::proj(1, 3), add2(Term::proj(2, 3), Term::proj(3, 3))),
    )
    .unwrap();
    p.push_relation(
        add2(Term::proj(1, 2), Term::proj(2, 2)),
        add2(Term::proj(2, 2), Term::proj(1, 2)),
    )
    .unwrap();
    p
}

/// The presentation of ℕ over 𝔽_1: addition with two-sided unit 0.
pub fn naturals_presentation() -> Presentation {
    let mut p = Presentation::new(
        Base::F1,
        vec![OpSymbol {
            name: "add".into(),
            arity: 2,
        }],
        Vec::new(),
    )
    .unwrap();
    let x1 = || Term::proj(1, 1);
    p.push_relation(Term::apply("add", vec![Term::zero(), x1()]), x1())
        .unwrap();
    p.push_relation(Term::apply("add", vec![x1(), Term::zero()]), x1())
        .unwrap();
    p
}

/// The finite presentation of A_N over 𝔽_{1²}: negation plus one averaging
/// operation s_p per prime divisor p of N, subject to s_p(x,…,x) = x, full
/// symmetry of s_p, and the cancellation law
/// s_p(x_1,…,x_{p−1},−x_{p−1}) = s_p(x_1,…,x_{p−2},0,0).
pub fn a_n_presentation(n: u64) -> Result<Presentation> {
    use itertools::Itertools;
    let primes: Vec<u64> = crate::exactnum::factorize(n)?
        .into_iter()
        .map(|(p, _)| p)
        .collect();
    if primes.is_empty() {
        return Err(Error::input("A_N presentation requires N > 1"));
    }
    let mut gens = vec![OpSymbol {
        name: "neg".into(),
        arity: 1,
    }];
    for p in &primes {
        gens.push(OpSymbol {
            name: format!("s{p}"),
            arity: *p as usize,
        });
    }
    let mut out = Presentation::new(Base::F1, gens, Vec::new())?;
    out.push_relation(
        Term::apply("neg", vec![Term::apply("neg", vec![Term::proj(1, 1)])]),
        Term::proj(1, 1),
    )?;
    for p in &primes {
        let p = *p as usize;
        let s = format!("s{p}");
        // s_p(x, …, x) = x.
        out.push_relation(Term::apply(&s, vec![Term::proj(1, 1); p]), Term::proj(1, 1))?;
        // Full symmetry.
        let base_args: Vec<Term> = (1..=p).map(|k| Term::proj(k, p)).collect();
        for perm in (1..=p).permutations(p) {
            if perm.iter().enumerate().all(|(i, &v)| v == i + 1) {
                continue;
            }
            let permuted: Vec<Term> = perm.into_iter().map(|k| Term::proj(k, p)).collect();
            out.push_relation(
                Term::apply(&s, base_args.clone()),
                Term::apply(&s, permuted),
            )?;
        }
        // Cancellation of an opposite pair.
        let ctx = p - 1;
        let mut lhs_args: Vec<Term> = (1..=p - 1).map(|k| Term::proj(k, ctx)).collect();
        lhs_args.push(Term::apply("neg", vec![Term::proj(p - 1, ctx)]));
        let mut rhs_args: Vec<Term> = (1..=p.saturating_sub(2))
            .map(|k| Term::proj(k, ctx))
            .collect();
        rhs_args.push(Term::zero());
        rhs_args.push(Term::zero());
        out.push_relation(Term::apply(&s, lhs_args), Term::apply(&s, rhs_args))?;
    }
    Ok(out)
}
