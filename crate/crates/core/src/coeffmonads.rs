//! The coefficient monads ℤ, ℕ, B_N, ℤ_(∞), A_N, 𝔽_1 and 𝔽_{1²} as decidable
//! predicate families on rational coefficient vectors.
//!
//! An n-ary operation of one of these monads is a vector (λ_1, …, λ_n) of
//! rationals subject to the monad's membership predicate:
//!
//! * `Z` — integer entries,
//! * `N` — non-negative integer entries,
//! * `BN(N)` — denominators divide a power of N (this is ℤ[1/N]),
//! * `ZLocInf` — octahedral combinations Σ|λ_i| ≤ 1 with rational entries
//!   (the rational subring ℤ_(∞) of the archimedean valuation ring; real
//!   coefficients are out of reach of exact arithmetic and are not modeled),
//! * `AN(N)` — both of the previous two,
//! * `F1` — at most one entry nonzero and equal to 1,
//! * `F12` — at most one entry nonzero and equal to ±1,
//! * `Intersection` — the conjunction of its members.
//!
//! Substitution is ordinary bilinear substitution of linear combinations and
//! never leaves a monad; that closure is checked on every operation.

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};
use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::exactnum::Rat;

/// A coefficient monad, identified by its defining predicate.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum CoeffMonad {
    Z,
    N,
    BN(u64),
    ZLocInf,
    AN(u64),
    F1,
    F12,
    /// Conjunction of predicates; non-empty, deduplicated, sorted.
    Intersection(Vec<CoeffMonad>),
}

impl CoeffMonad {
    pub fn bn(n: u64) -> Result<CoeffMonad> {
        if n <= 1 {
            return Err(Error::input("BN requires N > 1"));
        }
        Ok(CoeffMonad::BN(n))
    }

    pub fn an(n: u64) -> Result<CoeffMonad> {
        if n <= 1 {
            return Err(Error::input("AN requires N > 1"));
        }
        Ok(CoeffMonad::AN(n))
    }

    /// Decides v ∈ Σ(n) for this monad.
    pub fn contains(&self, v: &[Rat]) -> bool {
        match self {
            CoeffMonad::Z => v.iter().all(|x| x.is_integer()),
            CoeffMonad::N => v.iter().all(|x| x.is_integer() && !x.is_negative()),
            CoeffMonad::BN(n) => v.iter().all(|x| denom_divides_power(x, *n)),
            CoeffMonad::ZLocInf => l1_mass(v) <= Rat::one(),
            CoeffMonad::AN(n) => CoeffMonad::BN(*n).contains(v) && CoeffMonad::ZLocInf.contains(v),
            CoeffMonad::F1 => at_most_one_nonzero(v, false),
            CoeffMonad::F12 => at_most_one_nonzero(v, true),
            CoeffMonad::Intersection(ms) => ms.iter().all(|m| m.contains(v)),
        }
    }

    /// True when this monad's predicate is diagonal (a per-coordinate
    /// condition with no coupling across slots). Exactly these monads are
    /// hyperadditive.
    pub fn is_per_coordinate(&self) -> bool {
        match self {
            CoeffMonad::Z | CoeffMonad::N | CoeffMonad::BN(_) => true,
            CoeffMonad::ZLocInf | CoeffMonad::AN(_) | CoeffMonad::F1 | CoeffMonad::F12 => false,
            CoeffMonad::Intersection(ms) => ms.iter().all(|m| m.is_per_coordinate()),
        }
    }

    /// Σ(1) is finite exactly for 𝔽_1 and 𝔽_{1²}.
    pub fn is_finite(&self) -> bool {
        match self {
            CoeffMonad::F1 | CoeffMonad::F12 => true,
            CoeffMonad::Intersection(ms) => ms.iter().any(|m| m.is_finite()),
            _ => false,
        }
    }
}

fn l1_mass(v: &[Rat]) -> Rat {
    v.iter().fold(Rat::zero(), |acc, x| &acc + &x.abs())
}

fn at_most_one_nonzero(v: &[Rat], allow_sign: bool) -> bool {
    let mut seen = false;
    for x in v {
        if x.is_zero() {
            continue;
        }
        let ok = x.is_one() || (allow_sign && x.abs().is_one());
        if !ok || seen {
            return false;
        }
        seen = true;
    }
    true
}

/// Does the reduced denominator of x divide some power of n?
fn denom_divides_power(x: &Rat, n: u64) -> bool {
    let n = BigInt::from(n);
    let mut d = x.denom().clone();
    loop {
        if d.is_one() {
            return true;
        }
        let g = d.gcd(&n);
        if g.is_one() {
            return false;
        }
        while (&d % &g).is_zero() {
            d /= &g;
        }
    }
}

/// An n-ary operation of a concrete coefficient monad.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Element {
    monad: CoeffMonad,
    coeffs: Vec<Rat>,
}

impl Element {
    pub fn new(monad: CoeffMonad, coeffs: Vec<Rat>) -> Result<Element> {
        if !monad.contains(&coeffs) {
            return Err(Error::input(format!(
                "coefficients {:?} do not lie in {monad}",
                coeffs
            )));
        }
        Ok(Element { monad, coeffs })
    }

    /// The unit e ∈ Σ(1).
    pub fn unit(monad: CoeffMonad) -> Element {
        Element {
            monad,
            coeffs: vec![Rat::one()],
        }
    }

    /// The zero constant (arity 0, empty support).
    pub fn zero_constant(monad: CoeffMonad) -> Element {
        Element {
            monad,
            coeffs: Vec::new(),
        }
    }

    /// The all-zero element of arity n (the constant pushed to arity n).
    pub fn zero_of_arity(monad: CoeffMonad, n: usize) -> Element {
        Element {
            monad,
            coeffs: vec![Rat::zero(); n],
        }
    }

    /// The coordinate element {k}_n (1-based k).
    pub fn coordinate(monad: CoeffMonad, k: usize, n: usize) -> Result<Element> {
        if k == 0 || k > n {
            return Err(Error::input(format!("coordinate {k} out of range 1..={n}")));
        }
        let mut coeffs = vec![Rat::zero(); n];
        coeffs[k - 1] = Rat::one();
        Ok(Element { monad, coeffs })
    }

    pub fn monad(&self) -> &CoeffMonad {
        &self.monad
    }

    pub fn arity(&self) -> usize {
        self.coeffs.len()
    }

    pub fn coeffs(&self) -> &[Rat] {
        &self.coeffs
    }
}

impl fmt::Debug for Element {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}(", self.monad)?;
        for (i, c) in self.coeffs.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, ")")
    }
}

/// Bilinear substitution μ: t ∘ (args_1, …, args_k) with t of arity k and
/// every argument of one common arity n.
pub fn substitute(t: &Element, args: &[Element]) -> Result<Element> {
    if args.len() != t.arity() {
        return Err(Error::input(format!(
            "arity mismatch: operation expects {} arguments, got {}",
            t.arity(),
            args.len()
        )));
    }
    let n = args.first().map_or(0, Element::arity);
    for a in args {
        if a.monad != t.monad {
            return Err(Error::input("monad mismatch in substitution"));
        }
        if a.arity() != n {
            return Err(Error::input("arguments must share one arity"));
        }
    }
    let mut coeffs = vec![Rat::zero(); n];
    for (ti, arg) in t.coeffs.iter().zip(args) {
        for (j, aj) in arg.coeffs.iter().enumerate() {
            coeffs[j] = &coeffs[j] + &(ti * aj);
        }
    }
    if !t.monad.contains(&coeffs) {
        return Err(Error::internal(format!(
            "substitution left the monad {}: {:?}",
            t.monad, coeffs
        )));
    }
    Ok(Element {
        monad: t.monad.clone(),
        coeffs,
    })
}

/// The functorial map Σ(φ) for φ: {1..n} → {1..m}, given 1-based. The
/// coefficient at j of the image is the sum of t's coefficients over the
/// fiber φ⁻¹(j).
pub fn induced_map(phi: &[usize], t: &Element, m: usize) -> Result<Element> {
    if phi.len() != t.arity() {
        return Err(Error::input("φ must be total on the element's arity"));
    }
    let mut coeffs = vec![Rat::zero(); m];
    for (i, &j) in phi.iter().enumerate() {
        if j == 0 || j > m {
            return Err(Error::input(format!(
                "φ({}) = {j} out of range 1..={m}",
                i + 1
            )));
        }
        coeffs[j - 1] = &coeffs[j - 1] + &t.coeffs[i];
    }
    if !t.monad.contains(&coeffs) {
        return Err(Error::internal(format!(
            "induced map left the monad {}: {:?}",
            t.monad, coeffs
        )));
    }
    Ok(Element {
        monad: t.monad.clone(),
        coeffs,
    })
}

/// Sound syntactic inclusion between atomic monads (after expansion the
/// atoms are Z, N, BN, ZLocInf only).
fn atom_subset(a: &CoeffMonad, b: &CoeffMonad) -> bool {
    use CoeffMonad::*;
    match (a, b) {
        _ if a == b => true,
        (N, Z) => true,
        (N, BN(_)) | (Z, BN(_)) => true,
        (BN(k), BN(m)) => match crate::exactnum::factorize(*k) {
            Ok(fs) => fs.iter().all(|(p, _)| m % p == 0),
            Err(_) => false,
        },
        _ => false,
    }
}

fn expand(m: &CoeffMonad, out: &mut BTreeSet<CoeffMonad>) {
    use CoeffMonad::*;
    match m {
        F1 => {
            out.insert(N);
            out.insert(ZLocInf);
        }
        F12 => {
            out.insert(Z);
            out.insert(ZLocInf);
        }
        AN(k) => {
            out.insert(BN(*k));
            out.insert(ZLocInf);
        }
        Intersection(ms) => {
            for m in ms {
                expand(m, out);
            }
        }
        other => {
            out.insert(other.clone());
        }
    }
}

/// Intersection of coefficient monads, normalized to a named tag when the
/// conjunction provably coincides with one (𝔽_1 = ℕ ∩ ℤ_(∞),
/// 𝔽_{1²} = ℤ ∩ ℤ_(∞), A_N = B_N ∩ ℤ_(∞), plus idempotent and absorbing
/// cases). Anything else stays a symbolic `Intersection`.
pub fn intersect(ms: &[CoeffMonad]) -> Result<CoeffMonad> {
    if ms.is_empty() {
        return Err(Error::input("intersection of an empty list"));
    }
    let mut atoms = BTreeSet::new();
    for m in ms {
        expand(m, &mut atoms);
    }
    // Absorption: drop any atom that contains another one.
    let atoms: Vec<CoeffMonad> = atoms
        .iter()
        .filter(|b| !atoms.iter().any(|a| a != *b && atom_subset(a, b)))
        .cloned()
        .collect();
    let has_oct = atoms.contains(&CoeffMonad::ZLocInf);
    let rest: Vec<CoeffMonad> = atoms
        .iter()
        .filter(|m| **m != CoeffMonad::ZLocInf)
        .cloned()
        .collect();
    if !has_oct {
        return Ok(if rest.len() == 1 {
            rest.into_iter().next().unwrap()
        } else {
            CoeffMonad::Intersection(rest)
        });
    }
    match rest.as_slice() {
        [] => Ok(CoeffMonad::ZLocInf),
        [CoeffMonad::N] => Ok(CoeffMonad::F1),
        [CoeffMonad::Z] => Ok(CoeffMonad::F12),
        [CoeffMonad::BN(k)] => Ok(CoeffMonad::AN(*k)),
        _ => {
            let mut all = rest;
            all.push(CoeffMonad::ZLocInf);
            all.sort();
            Ok(CoeffMonad::Intersection(all))
        }
    }
}

/// Outcome of a bounded localization-membership search.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub enum Localization {
    /// Smallest k ≤ bound with f^k·v in the monad.
    Member { k: u32 },
    /// Search bound exhausted without a certificate; not a "no".
    Undecided { bound: u32 },
}

/// Does v lie in the localization Σ[f⁻¹]? Searches k = 0..=bound for
/// f^k·v ∈ Σ(n) and returns the certificate.
pub fn in_localization(m: &CoeffMonad, f: &Rat, v: &[Rat], bound: u32) -> Result<Localization> {
    if f.is_zero() {
        return Err(Error::input("cannot localize at zero"));
    }
    if !m.contains(std::slice::from_ref(f)) {
        return Err(Error::input(format!("{f} is not an element of {m}")));
    }
    let mut scaled: Vec<Rat> = v.to_vec();
    for k in 0..=bound {
        if m.contains(&scaled) {
            return Ok(Localization::Member { k });
        }
        for x in &mut scaled {
            *x = &*x * f;
        }
    }
    Ok(Localization::Undecided { bound })
}

impl fmt::Display for CoeffMonad {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CoeffMonad::Z => write!(f, "Z"),
            CoeffMonad::N => write!(f, "N"),
            CoeffMonad::BN(n) => write!(f, "BN:{n}"),
            CoeffMonad::ZLocInf => write!(f, "Zinf"),
            CoeffMonad::AN(n) => write!(f, "AN:{n}"),
            CoeffMonad::F1 => write!(f, "F1"),
            CoeffMonad::F12 => write!(f, "F12"),
            CoeffMonad::Intersection(ms) => {
                for (i, m) in ms.iter().enumerate() {
                    if i > 0 {
                        write!(f, "&")?;
                    }
                    write!(f, "{m}")?;
                }
                Ok(())
            }
        }
    }
}

impl FromStr for CoeffMonad {
    type Err = Error;

    fn from_str(s: &str) -> Result<CoeffMonad> {
        if s.contains('&') {
            let parts: Vec<CoeffMonad> = s.split('&').map(|p| p.parse()).collect::<Result<_>>()?;
            return intersect(&parts);
        }
        match s {
            "Z" => Ok(CoeffMonad::Z),
            "N" => Ok(CoeffMonad::N),
            "Zinf" => Ok(CoeffMonad::ZLocInf),
            "F1" => Ok(CoeffMonad::F1),
            "F12" => Ok(CoeffMonad::F12),
            _ => {
                let (tag, arg) = s
                    .split_once(':')
                    .ok_or_else(|| Error::input(format!("unknown monad id {s:?}")))?;
                let n: u64 = arg
                    .parse()
                    .map_err(|_| Error::input(format!("bad parameter in monad id {s:?}")))?;
                match tag {
                    "BN" => CoeffMonad::bn(n),
                    "AN" => CoeffMonad::an(n),
                    _ => Err(Error::input(format!("unknown monad id {s:?}"))),
                }
            }
        }
    }
}

impl Serialize for CoeffMonad {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for CoeffMonad {
    fn deserialize<D: Deserializer<'de>>(
        deserializer: D,
    ) -> std::result::Result<CoeffMonad, D::Error> {
        String::deserialize(deserializer)?
            .parse()
            .map_err(D::Error::custom)
    }
}

impl Serialize for Element {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        use serde::ser::SerializeStruct;
        let mut s = serializer.serialize_struct("Element", 3)?;
        s.serialize_field("monad", &self.monad)?;
        s.serialize_field("arity", &self.arity())?;
        s.serialize_field("coeffs", &self.coeffs)?;
        s.end()
    }
}

impl<'de> Deserialize<'de> for Element {
    fn deserialize<D: Deserializer<'de>>(
        deserializer: D,
    ) -> std::result::Result<Element, D::Error> {
        #[derive(Deserialize)]
        struct Raw {
            monad: CoeffMonad,
            arity: usize,
            coeffs: Vec<Rat>,
        }
        let raw = Raw::deserialize(deserializer)?;
        if raw.coeffs.len() != raw.arity {
            return Err(D::Error::custom("arity does not match coefficient count"));
        }
        Element::new(raw.monad, raw.coeffs).map_err(D::Error::custom)
    }
}
