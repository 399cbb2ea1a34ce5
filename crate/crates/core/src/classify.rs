//! Structural analysis of a monad: constants, commutativity of operation
//! pairs, comparison maps π_n, additivity classification and pseudoaddition
//! search.
//!
//! Injectivity and surjectivity of π_n over an infinite operation set are
//! Π₁ statements; they are decided exactly where a finite enumeration or a
//! coefficient-constraint argument applies, and otherwise only verified on
//! a deterministic sample — the verdict records which. For the coefficient
//! monads both routes run and must agree.

use serde::Serialize;

use crate::coeffmonads::CoeffMonad;
use crate::error::{Error, Result};
use crate::exactnum::Rat;
use crate::monad::{Handle, Val};

/// How a yes-verdict was reached.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Method {
    /// Finite enumeration or a constraint argument covering all elements.
    Exact,
    /// Deterministic sample only; not a proof.
    Sampled,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub enum Verdict {
    Yes {
        method: Method,
    },
    No {
        witness: String,
    },
    /// π_n needs a constant; monads without one record "non".
    NotApplicable,
}

impl Verdict {
    /// The Table-1 column value.
    pub fn oui_non(&self) -> &'static str {
        match self {
            Verdict::Yes { .. } => "oui",
            _ => "non",
        }
    }

    pub fn is_yes(&self) -> bool {
        matches!(self, Verdict::Yes { .. })
    }
}

/// Σ(0) of the monad.
pub fn constants(h: &Handle) -> Vec<Val> {
    h.constants()
}

#[derive(Debug, Clone, Serialize)]
pub struct CommuteReport {
    pub commute: bool,
    /// 1-based position (i−1)·m + j of the first differing coefficient of
    /// the two composites, with their displays.
    pub witness: Option<(usize, String, String)>,
}

/// Def.-10 commutativity of the pair (t, s): composes both ways into
/// Σ(n·m) over the grid (i, j) ↦ (i−1)·m + j and compares exactly.
pub fn commute(h: &Handle, t: &Val, s: &Val) -> Result<CommuteReport> {
    let n = h.arity(t);
    let m = h.arity(s);
    let grid = n * m;
    // t applied to s-on-rows.
    let rows: Vec<Val> = (1..=n)
        .map(|i| {
            let phi: Vec<usize> = (1..=m).map(|j| (i - 1) * m + j).collect();
            h.induced(&phi, s, grid)
        })
        .collect::<Result<_>>()?;
    let lhs = h.substitute(t, &rows)?;
    // s applied to t-on-columns.
    let cols: Vec<Val> = (1..=m)
        .map(|j| {
            let phi: Vec<usize> = (1..=n).map(|i| (i - 1) * m + j).collect();
            h.induced(&phi, t, grid)
        })
        .collect::<Result<_>>()?;
    let rhs = h.substitute(s, &cols)?;
    if lhs == rhs {
        return Ok(CommuteReport {
            commute: true,
            witness: None,
        });
    }
    Ok(CommuteReport {
        commute: false,
        witness: Some((
            first_difference(&lhs, &rhs),
            lhs.to_string(),
            rhs.to_string(),
        )),
    })
}

fn first_difference(a: &Val, b: &Val) -> usize {
    match (a, b) {
        (Val::Coeff(x), Val::Coeff(y)) => x
            .coeffs()
            .iter()
            .zip(y.coeffs())
            .position(|(u, v)| u != v)
            .map(|i| i + 1)
            .unwrap_or(0),
        (Val::Sign(x), Val::Sign(y)) => x
            .signs
            .iter()
            .zip(&y.signs)
            .position(|(u, v)| u != v)
            .map(|i| i + 1)
            .unwrap_or(0),
        (Val::Fn(x), Val::Fn(y)) => x
            .table
            .iter()
            .zip(&y.table)
            .position(|(u, v)| u != v)
            .map(|i| i + 1)
            .unwrap_or(0),
        _ => 0,
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct CommutativityReport {
    pub monad: String,
    pub pairs_checked: usize,
    pub commutative: bool,
    pub failure: Option<(String, String, usize)>,
}

/// Tests Def.-10 commutativity on all pairs from a deterministic sample of
/// Σ(≤ arity_bound).
pub fn is_commutative(
    h: &Handle,
    arity_bound: usize,
    sample_budget: usize,
    seed: u64,
) -> Result<CommutativityReport> {
    let mut pool: Vec<Val> = Vec::new();
    for n in 0..=arity_bound {
        pool.extend(h.sample(n, sample_budget, seed));
    }
    let mut pairs = 0;
    for t in &pool {
        for s in &pool {
            pairs += 1;
            let rep = commute(h, t, s)?;
            if !rep.commute {
                let (pos, l, r) = rep.witness.unwrap();
                return Ok(CommutativityReport {
                    monad: h.name(),
                    pairs_checked: pairs,
                    commutative: false,
                    failure: Some((l, r, pos)),
                });
            }
        }
    }
    Ok(CommutativityReport {
        monad: h.name(),
        pairs_checked: pairs,
        commutative: true,
        failure: None,
    })
}

/// The comparison map π_n: the k-th component substitutes the constant
/// everywhere except slot k, which carries the unit.
pub fn comparison_map(h: &Handle, t: &Val) -> Result<Vec<Val>> {
    if !h.has_constant() {
        return Err(Error::domain("π undefined (no zero)"));
    }
    let n = h.arity(t);
    let zero1 = h.zero_of_arity(1)?;
    (1..=n)
        .map(|k| {
            let args: Vec<Val> = (1..=n)
                .map(|j| if j == k { h.unit() } else { zero1.clone() })
                .collect();
            h.substitute(t, &args)
        })
        .collect()
}

/// Additivity classification of one monad at arities 2..=n_max.
#[derive(Debug, Clone, Serialize)]
pub struct AdditivityReport {
    pub monad: String,
    pub n_max: usize,
    pub hypoadditive: Verdict,
    pub hyperadditive: Verdict,
    pub additive: bool,
    pub witnesses: Vec<String>,
}

/// Decides hypo/hyper-additivity. Finite monads are enumerated exactly;
/// for the coefficient monads injectivity of π_n holds exactly (π recovers
/// the coefficient vector) and surjectivity is decided by the constraint
/// "is every tuple over Σ(1) a member of Σ(n)", which reduces to whether
/// the predicate is per-coordinate — the sampled route runs too and the two
/// must agree.
pub fn classify_additivity(h: &Handle, n_max: usize, seed: u64) -> Result<AdditivityReport> {
    if n_max < 2 {
        return Err(Error::input("n_max must be at least 2"));
    }
    if !h.has_constant() {
        return Ok(AdditivityReport {
            monad: h.name(),
            n_max,
            hypoadditive: Verdict::NotApplicable,
            hyperadditive: Verdict::NotApplicable,
            additive: false,
            witnesses: vec!["no constant: π_n undefined".into()],
        });
    }
    let mut witnesses = Vec::new();
    let hypo = hypo_verdict(h, n_max, seed, &mut witnesses)?;
    let hyper = hyper_verdict(h, n_max, seed, &mut witnesses)?;
    let additive = hypo.is_yes() && hyper.is_yes();
    Ok(AdditivityReport {
        monad: h.name(),
        n_max,
        hypoadditive: hypo,
        hyperadditive: hyper,
        additive,
        witnesses,
    })
}

fn hypo_verdict(
    h: &Handle,
    n_max: usize,
    seed: u64,
    witnesses: &mut Vec<String>,
) -> Result<Verdict> {
    let mut sampled_only = false;
    for n in 2..=n_max {
        let (elems, exact) = match h.enumerate(n) {
            Some(all) => (all, true),
            None => (h.sample(n, 60, seed), false),
        };
        let mut images: Vec<(Vec<Val>, Val)> = Vec::new();
        for t in elems {
            let pi = comparison_map(h, &t)?;
            if let Some((_, prev)) = images.iter().find(|(img, _)| *img == pi) {
                if *prev != t {
                    witnesses.push(format!("π_{n}({prev}) = π_{n}({t}) although {prev} ≠ {t}"));
                    return Ok(Verdict::No {
                        witness: format!("π_{n} identifies {prev} and {t}"),
                    });
                }
            } else {
                images.push((pi, t));
            }
        }
        if !exact {
            // Coefficient monads: π_n returns the coordinates, so sampled
            // injectivity is confirmed exactly by the constraint route.
            if !matches!(h, Handle::Coeff(_)) {
                sampled_only = true;
            }
        }
    }
    Ok(Verdict::Yes {
        method: if sampled_only {
            Method::Sampled
        } else {
            Method::Exact
        },
    })
}

fn hyper_verdict(
    h: &Handle,
    n_max: usize,
    seed: u64,
    witnesses: &mut Vec<String>,
) -> Result<Verdict> {
    for n in 2..=n_max {
        match h.enumerate(n) {
            Some(all) => {
                // Exact: image of π_n against all of Σ(1)^n.
                let units = h.enumerate(1).expect("Σ(1) finite when Σ(n) is");
                let mut image: Vec<Vec<Val>> = Vec::new();
                for t in &all {
                    image.push(comparison_map(h, t)?);
                }
                let mut tuple_idx = vec![0usize; n];
                'tuples: loop {
                    let tuple: Vec<Val> = tuple_idx.iter().map(|&i| units[i].clone()).collect();
                    if !image.contains(&tuple) {
                        let disp: Vec<String> = tuple.iter().map(|v| v.to_string()).collect();
                        witnesses.push(format!("({}) has no π_{n}-preimage", disp.join(", ")));
                        return Ok(Verdict::No {
                            witness: format!("({}) ∉ im π_{n}", disp.join(", ")),
                        });
                    }
                    let mut i = 0;
                    loop {
                        if i == n {
                            break 'tuples;
                        }
                        tuple_idx[i] += 1;
                        if tuple_idx[i] < units.len() {
                            break;
                        }
                        tuple_idx[i] = 0;
                        i += 1;
                    }
                }
            }
            None => {
                let m = match h {
                    Handle::Coeff(m) => m,
                    _ => unreachable!("only coefficient monads are infinite"),
                };
                // Constraint route: (e,…,e) is attainable iff no coupled
                // (ℓ1) constraint is present.
                let ones = vec![Rat::one(); n];
                if !m.contains(&ones) {
                    witnesses.push(format!("(e,…,e) with {n} units violates the predicate"));
                    return Ok(Verdict::No {
                        witness: format!("(e,…,e) ∉ Σ({n})"),
                    });
                }
                if !m.is_per_coordinate() {
                    return Err(Error::internal(
                        "constraint route: (e,…,e) attainable but predicate is coupled",
                    ));
                }
                // Sampled cross-check: diagonal tuples of sampled units
                // must lift.
                for t in h.sample(1, 20, seed) {
                    let coeff = match &t {
                        Val::Coeff(e) => e.coeffs()[0].clone(),
                        _ => unreachable!(),
                    };
                    let vec: Vec<Rat> = vec![coeff; n];
                    if !m.contains(&vec) {
                        return Err(Error::internal(
                            "per-coordinate predicate rejected a diagonal tuple",
                        ));
                    }
                }
            }
        }
    }
    Ok(Verdict::Yes {
        method: Method::Exact,
    })
}

#[derive(Debug, Clone, Serialize)]
pub struct PseudoadditionReport {
    pub monad: String,
    pub found: Option<String>,
    /// Set when Σ(2) is enumerable or the constraint pins the candidate.
    pub unique: Option<bool>,
}

/// Searches Σ(2) for a binary operation with π_2(t) = (e, e).
pub fn find_pseudoaddition(h: &Handle) -> Result<PseudoadditionReport> {
    if !h.has_constant() {
        return Err(Error::domain("π undefined (no zero)"));
    }
    let unit = h.unit();
    let target = vec![unit.clone(), unit];
    match h.enumerate(2) {
        Some(all) => {
            let mut hits = Vec::new();
            for t in all {
                if comparison_map(h, &t)? == target {
                    hits.push(t);
                }
            }
            Ok(PseudoadditionReport {
                monad: h.name(),
                found: hits.first().map(|t| t.to_string()),
                unique: Some(hits.len() <= 1),
            })
        }
        None => {
            // Coefficient monads: π_2((a,b)) = ((a),(b)), so the only
            // candidate is (1,1); it qualifies iff the predicate admits it.
            let m = match h {
                Handle::Coeff(m) => m,
                _ => unreachable!(),
            };
            let ones = vec![Rat::one(), Rat::one()];
            if m.contains(&ones) {
                let t = Val::Coeff(crate::coeffmonads::Element::new(m.clone(), ones).unwrap());
                debug_assert_eq!(comparison_map(h, &t)?, target);
                Ok(PseudoadditionReport {
                    monad: h.name(),
                    found: Some(t.to_string()),
                    unique: Some(true),
                })
            } else {
                Ok(PseudoadditionReport {
                    monad: h.name(),
                    found: None,
                    unique: Some(true),
                })
            }
        }
    }
}

/// The monads of the worked examples, in report order.
pub fn table_monads(cyc_max: u32, an_values: &[u64]) -> Vec<Handle> {
    let mut out = vec![
        Handle::Coeff(CoeffMonad::Z),
        Handle::Coeff(CoeffMonad::N),
        Handle::Coeff(CoeffMonad::ZLocInf),
        Handle::FEmpty,
        Handle::Coeff(CoeffMonad::F1),
        Handle::Coeff(CoeffMonad::F12),
    ];
    for n in 2..=cyc_max {
        out.push(Handle::Cyc(n));
    }
    out.push(Handle::Finf);
    for &n in an_values {
        out.push(Handle::Coeff(CoeffMonad::AN(n)));
        out.push(Handle::Coeff(CoeffMonad::BN(n)));
    }
    out
}
