//! A uniform handle over every implemented monad, so that structural
//! analyses (commutativity, comparison maps, spectra of finite monads,
//! interpretations of presentations) can be written once.
//!
//! The handle knows how to produce units, coordinates and constants, to
//! substitute, to push elements along maps of finite sets, to enumerate
//! finite operation sets, and to draw deterministic samples from infinite
//! ones.

use std::fmt;
use std::str::FromStr;

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::coeffmonads::{self, CoeffMonad, Element};
use crate::error::{Error, Result};
use crate::exactnum::{rat, Rat};
use crate::torsionmonads::{self, cyc_enumerate, finf_enumerate, CycElement, SignClass};

/// A finite operation table: a function carrier^arity → carrier, with the
/// carrier {0, …, size−1}.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct TableOp {
    pub size: usize,
    pub arity: usize,
    /// Row-major over argument tuples: index Σ args[i]·size^i.
    pub table: Vec<usize>,
}

impl TableOp {
    pub fn new(size: usize, arity: usize, table: Vec<usize>) -> Result<TableOp> {
        if size == 0 {
            return Err(Error::input("carrier must be non-empty"));
        }
        if table.len() != size.pow(arity as u32) {
            return Err(Error::input("table length must be size^arity"));
        }
        if table.iter().any(|&v| v >= size) {
            return Err(Error::input("table values must lie in the carrier"));
        }
        Ok(TableOp { size, arity, table })
    }

    pub fn projection(size: usize, k: usize, n: usize) -> TableOp {
        let mut table = vec![0; size.pow(n as u32)];
        for (idx, slot) in table.iter_mut().enumerate() {
            *slot = (idx / size.pow((k - 1) as u32)) % size;
        }
        TableOp {
            size,
            arity: n,
            table,
        }
    }

    pub fn eval(&self, args: &[usize]) -> usize {
        let mut idx = 0;
        for (i, &a) in args.iter().enumerate() {
            idx += a * self.size.pow(i as u32);
        }
        self.table[idx]
    }
}

/// A monad defined by a finite carrier and named operation tables; its
/// operation sets are the term-generated function clones.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TableMonad {
    pub name: String,
    pub size: usize,
    pub ops: Vec<(String, TableOp)>,
}

/// Handle to one implemented monad.
#[derive(Clone, Debug, PartialEq)]
pub enum Handle {
    /// The initial monad 𝔽_∅ (projections only, no constants).
    FEmpty,
    Coeff(CoeffMonad),
    /// 𝔽_{1ⁿ}.
    Cyc(u32),
    /// 𝔽_∞.
    Finf,
    Table(TableMonad),
}

/// An operation of whichever monad a `Handle` designates.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Val {
    /// A bare projection {k}_n (used by 𝔽_∅).
    Proj {
        k: usize,
        n: usize,
    },
    Coeff(Element),
    Cyc(CycElement),
    Sign(SignClass),
    Fn(TableOp),
}

impl fmt::Display for Val {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Val::Proj { k, .. } => write!(f, "x{k}"),
            Val::Coeff(e) => {
                let parts: Vec<String> = e.coeffs().iter().map(|c| c.to_string()).collect();
                write!(f, "({})", parts.join(","))
            }
            Val::Cyc(c) => write!(f, "{c}"),
            Val::Sign(s) => write!(f, "({s})"),
            Val::Fn(t) => write!(f, "table{:?}", t.table),
        }
    }
}

impl Handle {
    pub fn name(&self) -> String {
        match self {
            Handle::FEmpty => "Fempty".to_string(),
            Handle::Coeff(m) => m.to_string(),
            Handle::Cyc(n) => format!("F1n:{n}"),
            Handle::Finf => "Finf".to_string(),
            Handle::Table(t) => format!("table:{}", t.name),
        }
    }

    /// Σ(0), which has at most one element for every implemented monad
    /// except hand-built tables.
    pub fn constants(&self) -> Vec<Val> {
        match self {
            Handle::FEmpty => Vec::new(),
            Handle::Coeff(m) => vec![Val::Coeff(Element::zero_constant(m.clone()))],
            Handle::Cyc(n) => vec![Val::Cyc(CycElement::zero(*n, 0).unwrap())],
            Handle::Finf => vec![Val::Sign(SignClass::zero(0))],
            Handle::Table(t) => t
                .ops
                .iter()
                .filter(|(_, op)| op.arity == 0)
                .map(|(_, op)| Val::Fn(op.clone()))
                .collect(),
        }
    }

    pub fn has_constant(&self) -> bool {
        !self.constants().is_empty()
    }

    pub fn unit(&self) -> Val {
        self.coordinate(1, 1).expect("unit always exists")
    }

    /// The coordinate operation {k}_n.
    pub fn coordinate(&self, k: usize, n: usize) -> Result<Val> {
        if k == 0 || k > n {
            return Err(Error::input(format!("coordinate {k} out of range 1..={n}")));
        }
        Ok(match self {
            Handle::FEmpty => Val::Proj { k, n },
            Handle::Coeff(m) => Val::Coeff(Element::coordinate(m.clone(), k, n)?),
            Handle::Cyc(order) => Val::Cyc(CycElement::root(*order, n, k, 0)?),
            Handle::Finf => {
                let mut signs = vec![0i8; n];
                signs[k - 1] = 1;
                Val::Sign(SignClass::new(signs)?)
            }
            Handle::Table(t) => Val::Fn(TableOp::projection(t.size, k, n)),
        })
    }

    /// The all-zero element of arity n, when the monad has a constant.
    pub fn zero_of_arity(&self, n: usize) -> Result<Val> {
        match self {
            Handle::FEmpty => Err(Error::domain("π undefined (no zero)")),
            Handle::Coeff(m) => Ok(Val::Coeff(Element::zero_of_arity(m.clone(), n))),
            Handle::Cyc(order) => Ok(Val::Cyc(CycElement::zero(*order, n)?)),
            Handle::Finf => Ok(Val::Sign(SignClass::zero(n))),
            Handle::Table(t) => {
                let c = self
                    .constants()
                    .into_iter()
                    .next()
                    .ok_or_else(|| Error::domain("π undefined (no zero)"))?;
                match c {
                    Val::Fn(op) => Ok(Val::Fn(TableOp::new(
                        t.size,
                        n,
                        vec![op.table[0]; t.size.pow(n as u32)],
                    )?)),
                    _ => unreachable!(),
                }
            }
        }
    }

    pub fn arity(&self, v: &Val) -> usize {
        match v {
            Val::Proj { n, .. } => *n,
            Val::Coeff(e) => e.arity(),
            Val::Cyc(c) => c.arity,
            Val::Sign(s) => s.arity(),
            Val::Fn(t) => t.arity,
        }
    }

    pub fn substitute(&self, t: &Val, args: &[Val]) -> Result<Val> {
        match (self, t) {
            (Handle::FEmpty, Val::Proj { k, n }) => {
                if args.len() != *n {
                    return Err(Error::input("arity mismatch"));
                }
                Ok(args[*k - 1].clone())
            }
            (Handle::Coeff(_), Val::Coeff(e)) => {
                let args: Vec<Element> = args
                    .iter()
                    .map(|a| match a {
                        Val::Coeff(e) => Ok(e.clone()),
                        _ => Err(Error::input("mixed element kinds")),
                    })
                    .collect::<Result<_>>()?;
                Ok(Val::Coeff(coeffmonads::substitute(e, &args)?))
            }
            (Handle::Cyc(_), Val::Cyc(c)) => {
                let args: Vec<CycElement> = args
                    .iter()
                    .map(|a| match a {
                        Val::Cyc(c) => Ok(c.clone()),
                        _ => Err(Error::input("mixed element kinds")),
                    })
                    .collect::<Result<_>>()?;
                Ok(Val::Cyc(torsionmonads::cyc_substitute(c, &args)?))
            }
            (Handle::Finf, Val::Sign(s)) => {
                let args: Vec<SignClass> = args
                    .iter()
                    .map(|a| match a {
                        Val::Sign(s) => Ok(s.clone()),
                        _ => Err(Error::input("mixed element kinds")),
                    })
                    .collect::<Result<_>>()?;
                Ok(Val::Sign(torsionmonads::finf_substitute(s, &args)?))
            }
            (Handle::Table(tm), Val::Fn(f)) => {
                if args.len() != f.arity {
                    return Err(Error::input("arity mismatch"));
                }
                let fs: Vec<&TableOp> = args
                    .iter()
                    .map(|a| match a {
                        Val::Fn(g) => Ok(g),
                        _ => Err(Error::input("mixed element kinds")),
                    })
                    .collect::<Result<_>>()?;
                let n = fs.first().map_or(0, |g| g.arity);
                if fs.iter().any(|g| g.arity != n) {
                    return Err(Error::input("arguments must share one arity"));
                }
                let size = tm.size;
                let total = size.pow(n as u32);
                let mut table = vec![0; total];
                let mut tuple = vec![0usize; n];
                for (idx, slot) in table.iter_mut().enumerate() {
                    let mut rem = idx;
                    for t in tuple.iter_mut() {
                        *t = rem % size;
                        rem /= size;
                    }
                    let inner: Vec<usize> = fs.iter().map(|g| g.eval(&tuple)).collect();
                    *slot = f.eval(&inner);
                }
                Ok(Val::Fn(TableOp {
                    size,
                    arity: n,
                    table,
                }))
            }
            _ => Err(Error::input("element does not belong to this monad")),
        }
    }

    /// Σ(φ) for φ: {1..arity(t)} → {1..m}, 1-based.
    pub fn induced(&self, phi: &[usize], t: &Val, m: usize) -> Result<Val> {
        match (self, t) {
            (Handle::FEmpty, Val::Proj { k, .. }) => Ok(Val::Proj {
                k: phi[*k - 1],
                n: m,
            }),
            (Handle::Coeff(_), Val::Coeff(e)) => {
                Ok(Val::Coeff(coeffmonads::induced_map(phi, e, m)?))
            }
            (Handle::Cyc(_), Val::Cyc(c)) => Ok(Val::Cyc(torsionmonads::cyc_induced(phi, c, m)?)),
            (Handle::Finf, Val::Sign(s)) => Ok(Val::Sign(torsionmonads::finf_induced(phi, s, m)?)),
            (Handle::Table(tm), Val::Fn(f)) => {
                if phi.len() != f.arity {
                    return Err(Error::input("φ must be total on the element's arity"));
                }
                let size = tm.size;
                let mut table = vec![0; size.pow(m as u32)];
                let mut tuple = vec![0usize; m];
                for (idx, slot) in table.iter_mut().enumerate() {
                    let mut rem = idx;
                    for t in tuple.iter_mut() {
                        *t = rem % size;
                        rem /= size;
                    }
                    let pulled: Vec<usize> = phi.iter().map(|&j| tuple[j - 1]).collect();
                    *slot = f.eval(&pulled);
                }
                Ok(Val::Fn(TableOp {
                    size,
                    arity: m,
                    table,
                }))
            }
            _ => Err(Error::input("element does not belong to this monad")),
        }
    }

    /// Full enumeration of Σ(n) when it is finite; `None` for the infinite
    /// coefficient monads.
    pub fn enumerate(&self, n: usize) -> Option<Vec<Val>> {
        match self {
            Handle::FEmpty => Some((1..=n).map(|k| Val::Proj { k, n }).collect()),
            Handle::Coeff(CoeffMonad::F1) => {
                let mut out = vec![Val::Coeff(Element::zero_of_arity(CoeffMonad::F1, n))];
                for k in 1..=n {
                    out.push(Val::Coeff(
                        Element::coordinate(CoeffMonad::F1, k, n).unwrap(),
                    ));
                }
                Some(out)
            }
            Handle::Coeff(CoeffMonad::F12) => {
                let mut out = vec![Val::Coeff(Element::zero_of_arity(CoeffMonad::F12, n))];
                for k in 1..=n {
                    let mut plus = vec![Rat::zero(); n];
                    plus[k - 1] = Rat::one();
                    let mut minus = vec![Rat::zero(); n];
                    minus[k - 1] = rat(-1, 1);
                    out.push(Val::Coeff(Element::new(CoeffMonad::F12, plus).unwrap()));
                    out.push(Val::Coeff(Element::new(CoeffMonad::F12, minus).unwrap()));
                }
                Some(out)
            }
            Handle::Coeff(_) => None,
            Handle::Cyc(order) => {
                Some(cyc_enumerate(*order, n).into_iter().map(Val::Cyc).collect())
            }
            Handle::Finf => Some(finf_enumerate(n).into_iter().map(Val::Sign).collect()),
            Handle::Table(t) => Some(self.generated_clone(t, n)),
        }
    }

    /// The term-generated operations of a table monad at one arity:
    /// closure of the projections under the named tables.
    fn generated_clone(&self, t: &TableMonad, n: usize) -> Vec<Val> {
        use std::collections::BTreeSet;
        let mut set: BTreeSet<TableOp> =
            (1..=n).map(|k| TableOp::projection(t.size, k, n)).collect();
        loop {
            let snapshot: Vec<TableOp> = set.iter().cloned().collect();
            let mut grew = false;
            for (_, op) in &t.ops {
                let tuples = tuples_of(snapshot.len(), op.arity);
                for tuple in tuples {
                    let args: Vec<Val> = tuple
                        .iter()
                        .map(|&i| Val::Fn(snapshot[i].clone()))
                        .collect();
                    if let Ok(Val::Fn(new_op)) = self.substitute(&Val::Fn(op.clone()), &args) {
                        if set.insert(new_op) {
                            grew = true;
                        }
                    }
                }
            }
            if !grew || set.len() > 4096 {
                return set.into_iter().map(Val::Fn).collect();
            }
        }
    }

    /// Deterministic sample of Σ(n): the full enumeration when finite
    /// (truncated to `count`), a seeded box sample otherwise.
    pub fn sample(&self, n: usize, count: usize, seed: u64) -> Vec<Val> {
        if let Some(all) = self.enumerate(n) {
            return all.into_iter().take(count).collect();
        }
        let m = match self {
            Handle::Coeff(m) => m.clone(),
            _ => unreachable!("only coefficient monads are infinite"),
        };
        let mut rng = ChaCha8Rng::seed_from_u64(seed ^ (n as u64) << 8);
        let mut out = Vec::with_capacity(count);
        // Always include the unit row and the zero element.
        if n >= 1 {
            out.push(self.coordinate(1, n).unwrap());
        }
        out.push(Val::Coeff(Element::zero_of_arity(m.clone(), n)));
        while out.len() < count {
            let v = sample_vector(&m, n, &mut rng);
            out.push(Val::Coeff(
                Element::new(m.clone(), v).expect("sampler respects the predicate"),
            ));
        }
        out
    }
}

fn tuples_of(pool: usize, arity: usize) -> Vec<Vec<usize>> {
    let mut out = vec![Vec::new()];
    for _ in 0..arity {
        let mut next = Vec::with_capacity(out.len() * pool);
        for prefix in &out {
            for i in 0..pool {
                let mut p = prefix.clone();
                p.push(i);
                next.push(p);
            }
        }
        out = next;
    }
    out
}

/// One coefficient vector drawn from a monad's predicate set.
fn sample_vector(m: &CoeffMonad, n: usize, rng: &mut ChaCha8Rng) -> Vec<Rat> {
    for _ in 0..500 {
        let v: Vec<Rat> = match m {
            CoeffMonad::Z => (0..n).map(|_| rat(rng.random_range(-5..=5), 1)).collect(),
            CoeffMonad::N => (0..n).map(|_| rat(rng.random_range(0..=5), 1)).collect(),
            CoeffMonad::BN(b) => {
                let k = rng.random_range(0..=2u32);
                let d = (*b as i64).pow(k);
                (0..n).map(|_| rat(rng.random_range(-9..=9), d)).collect()
            }
            CoeffMonad::ZLocInf => {
                let d = rng.random_range(1..=9i64);
                let mut left = d;
                (0..n)
                    .map(|_| {
                        let a = rng.random_range(-left..=left);
                        left -= a.abs();
                        rat(a, d)
                    })
                    .collect()
            }
            CoeffMonad::AN(b) => {
                let k = rng.random_range(0..=2u32);
                let d = (*b as i64).pow(k);
                let mut left = d;
                (0..n)
                    .map(|_| {
                        let a = rng.random_range(-left..=left);
                        left -= a.abs();
                        rat(a, d)
                    })
                    .collect()
            }
            CoeffMonad::Intersection(ms) => {
                // Sample from the tightest octahedral member and filter.
                let base = ms
                    .iter()
                    .find(|m| matches!(m, CoeffMonad::AN(_) | CoeffMonad::ZLocInf))
                    .unwrap_or(&ms[0]);
                sample_vector(base, n, rng)
            }
            CoeffMonad::F1 | CoeffMonad::F12 => unreachable!("finite monads are enumerated"),
        };
        if m.contains(&v) {
            return v;
        }
    }
    vec![Rat::zero(); n]
}

/// Parses a monad id: the coefficient ids plus `Fempty`, `F1n:k`, `Finf`.
impl FromStr for Handle {
    type Err = Error;

    fn from_str(s: &str) -> Result<Handle> {
        match s {
            "Fempty" => Ok(Handle::FEmpty),
            "Finf" => Ok(Handle::Finf),
            _ => {
                if let Some(arg) = s.strip_prefix("F1n:") {
                    let n: u32 = arg
                        .parse()
                        .map_err(|_| Error::input(format!("bad parameter in monad id {s:?}")))?;
                    if n == 0 {
                        return Err(Error::input("F1n requires order ≥ 1"));
                    }
                    return Ok(Handle::Cyc(n));
                }
                Ok(Handle::Coeff(s.parse::<CoeffMonad>()?))
            }
        }
    }
}

/// Parses an element of the given monad from its CLI syntax: comma-separated
/// rationals for coefficient monads, sign patterns like `+,-,0` for 𝔽_∞,
/// `0` or `slot:exp` for 𝔽_{1ⁿ}, and `xk@n` projections for 𝔽_∅.
pub fn parse_val(h: &Handle, s: &str) -> Result<Val> {
    match h {
        Handle::Coeff(m) => {
            let coeffs: Vec<Rat> = s
                .split(',')
                .map(|p| p.trim().parse())
                .collect::<Result<_>>()?;
            Ok(Val::Coeff(Element::new(m.clone(), coeffs)?))
        }
        Handle::Finf => {
            let signs: Vec<i8> = s
                .split(',')
                .map(|p| match p.trim() {
                    "+" | "+1" | "1" => Ok(1),
                    "-" | "-1" => Ok(-1),
                    "0" => Ok(0),
                    other => Err(Error::input(format!("bad sign {other:?}"))),
                })
                .collect::<Result<_>>()?;
            Ok(Val::Sign(SignClass::new(signs)?))
        }
        Handle::Cyc(order) => {
            let s = s.trim();
            if let Some((ar, rest)) = s.split_once('@') {
                let arity: usize = ar
                    .parse()
                    .map_err(|_| Error::input(format!("bad arity in {s:?}")))?;
                if rest == "0" {
                    return Ok(Val::Cyc(CycElement::zero(*order, arity)?));
                }
                let (i, e) = rest
                    .split_once(':')
                    .ok_or_else(|| Error::input(format!("expected slot:exp in {s:?}")))?;
                let i: usize = i.parse().map_err(|_| Error::input("bad slot"))?;
                let e: u32 = e.parse().map_err(|_| Error::input("bad exponent"))?;
                return Ok(Val::Cyc(CycElement::root(*order, arity, i, e)?));
            }
            Err(Error::input(
                "cyclotomic elements are written arity@slot:exp or arity@0",
            ))
        }
        Handle::FEmpty => {
            let (k, n) = s
                .split_once('@')
                .ok_or_else(|| Error::input("projections are written k@n"))?;
            let k: usize = k.parse().map_err(|_| Error::input("bad projection"))?;
            let n: usize = n.parse().map_err(|_| Error::input("bad projection"))?;
            h.coordinate(k, n)
        }
        Handle::Table(_) => Err(Error::input("table elements cannot be parsed")),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn handles_roundtrip_ids() {
        for id in [
            "Z", "N", "BN:6", "AN:2", "Zinf", "F1", "F12", "F1n:4", "Finf", "Fempty",
        ] {
            let h: Handle = id.parse().unwrap();
            assert_eq!(h.name(), id);
        }
        assert!("BN:1".parse::<Handle>().is_err());
        assert!("nope".parse::<Handle>().is_err());
    }

    #[test]
    fn fempty_is_projections_only() {
        let h = Handle::FEmpty;
        assert!(h.constants().is_empty());
        assert_eq!(h.enumerate(3).unwrap().len(), 3);
        let t = h.coordinate(2, 3).unwrap();
        let args: Vec<Val> = (1..=2).map(|k| h.coordinate(k, 2).unwrap()).collect();
        let args3: Vec<Val> = vec![args[0].clone(), args[1].clone(), args[0].clone()];
        assert_eq!(h.substitute(&t, &args3).unwrap(), args[1]);
    }

    #[test]
    fn table_monad_substitution() {
        // A two-element magma: op(x, y) = x (left projection), plus a constant.
        let size = 2;
        let op = TableOp::new(size, 2, vec![0, 1, 0, 1]).unwrap();
        let c = TableOp::new(size, 0, vec![0]).unwrap();
        let tm = Handle::Table(TableMonad {
            name: "left".into(),
            size,
            ops: vec![("m".into(), op.clone()), ("c".into(), c)],
        });
        let p1 = tm.coordinate(1, 2).unwrap();
        let p2 = tm.coordinate(2, 2).unwrap();
        let r = tm.substitute(&Val::Fn(op), &[p2, p1.clone()]).unwrap();
        // m(x2, x1) = x2.
        assert_eq!(r, tm.coordinate(2, 2).unwrap());
        let ops = tm.enumerate(2).unwrap();
        assert!(ops.len() >= 3); // two projections and the constant at least
    }

    #[test]
    fn samples_are_deterministic_and_valid() {
        for id in ["Z", "N", "BN:6", "AN:2", "Zinf"] {
            let h: Handle = id.parse().unwrap();
            let a = h.sample(3, 50, 17);
            let b = h.sample(3, 50, 17);
            assert_eq!(a, b);
            assert_eq!(a.len(), 50);
        }
    }

    #[test]
    fn parse_val_syntax() {
        let h: Handle = "AN:2".parse().unwrap();
        let v = parse_val(&h, "1/2,-1/2").unwrap();
        assert_eq!(h.arity(&v), 2);
        let h: Handle = "Finf".parse().unwrap();
        let v = parse_val(&h, "+,-,0").unwrap();
        assert_eq!(h.arity(&v), 3);
        let h: Handle = "F1n:4".parse().unwrap();
        let v = parse_val(&h, "2@1:3").unwrap();
        assert_eq!(h.arity(&v), 2);
        assert!(parse_val(&h, "oops").is_err());
    }
}
