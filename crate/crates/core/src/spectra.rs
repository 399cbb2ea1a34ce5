//! Ideals and prime spectra: exhaustive for finite monads, symbolic for the
//! coefficient rings, with the Zariski topology, stalks, sections on
//! principal opens, the glued spaces compactifying Spec ℤ at level N, the
//! morphism system between levels, and the projective-limit space.
//!
//! Infinite spectra are symbolic point families with membership and
//! topology predicates; the finite-monad path re-derives its spectra from
//! first principles by subset enumeration, giving an independent layer that
//! cross-validates the axiomatic one on the 𝔽_1-like cases.

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use serde::Serialize;

use crate::coeffmonads::{self, CoeffMonad, Localization};
use crate::error::{Error, Result};
use crate::exactnum::{abs_at, is_prime, primes_up_to, vp, Rat, Valuation};
use crate::monad::{Handle, Val};

/// A point of one of the symbolic spectra.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub enum SpecPoint {
    /// The generic point ξ = (0).
    Generic,
    /// The prime ideal attached to a finite prime.
    Prime(u64),
    /// The archimedean point ∞.
    Infinity,
}

impl fmt::Display for SpecPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SpecPoint::Generic => write!(f, "xi"),
            SpecPoint::Prime(p) => write!(f, "{p}"),
            SpecPoint::Infinity => write!(f, "inf"),
        }
    }
}

impl FromStr for SpecPoint {
    type Err = Error;

    fn from_str(s: &str) -> Result<SpecPoint> {
        match s {
            "xi" | "generic" | "0" => Ok(SpecPoint::Generic),
            "inf" | "infinity" | "oo" => Ok(SpecPoint::Infinity),
            _ => {
                let p: u64 = s
                    .parse()
                    .map_err(|_| Error::input(format!("bad point {s:?}")))?;
                if !is_prime(p) {
                    return Err(Error::input(format!("{p} is not prime")));
                }
                Ok(SpecPoint::Prime(p))
            }
        }
    }
}

/// A symbolic spectrum.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum SpecSpace {
    SpecZ,
    SpecBN(u64),
    SpecAN(u64),
    /// Spec ℤ glued with Spec A_N along Spec B_N.
    CompactifiedN(u64),
    /// The projective limit over all N, ordered by divisibility.
    CompactifiedLimit,
}

impl SpecSpace {
    pub fn name(&self) -> String {
        match self {
            SpecSpace::SpecZ => "Z".into(),
            SpecSpace::SpecBN(n) => format!("BN:{n}"),
            SpecSpace::SpecAN(n) => format!("AN:{n}"),
            SpecSpace::CompactifiedN(n) => format!("hat:{n}"),
            SpecSpace::CompactifiedLimit => "hat".into(),
        }
    }

    /// Does the point belong to the space (independently of any prime
    /// bound)?
    pub fn contains_point(&self, pt: SpecPoint) -> bool {
        match (self, pt) {
            (_, SpecPoint::Generic) => true,
            (SpecSpace::SpecZ, SpecPoint::Prime(_)) => true,
            (SpecSpace::SpecZ, SpecPoint::Infinity) => false,
            (SpecSpace::SpecBN(n), SpecPoint::Prime(p)) => n % p != 0,
            (SpecSpace::SpecBN(_), SpecPoint::Infinity) => false,
            (SpecSpace::SpecAN(n), SpecPoint::Prime(p)) => n % p != 0,
            (SpecSpace::SpecAN(_), SpecPoint::Infinity) => true,
            (SpecSpace::CompactifiedN(_) | SpecSpace::CompactifiedLimit, _) => true,
        }
    }
}

impl FromStr for SpecSpace {
    type Err = Error;

    fn from_str(s: &str) -> Result<SpecSpace> {
        match s {
            "Z" => Ok(SpecSpace::SpecZ),
            "hat" => Ok(SpecSpace::CompactifiedLimit),
            _ => {
                let (tag, arg) = s
                    .split_once(':')
                    .ok_or_else(|| Error::input(format!("unknown space {s:?}")))?;
                let n: u64 = arg
                    .parse()
                    .map_err(|_| Error::input(format!("bad parameter in space {s:?}")))?;
                if n <= 1 {
                    return Err(Error::input("space parameter must exceed 1"));
                }
                match tag {
                    "BN" => Ok(SpecSpace::SpecBN(n)),
                    "AN" => Ok(SpecSpace::SpecAN(n)),
                    "hat" => Ok(SpecSpace::CompactifiedN(n)),
                    _ => Err(Error::input(format!("unknown space {s:?}"))),
                }
            }
        }
    }
}

/// The points of a space with finite primes cut at `prime_bound`.
pub fn points(s: SpecSpace, prime_bound: u64) -> Result<Vec<SpecPoint>> {
    if prime_bound < 2 {
        return Err(Error::input("prime bound must be at least 2"));
    }
    let mut out = vec![SpecPoint::Generic];
    for p in primes_up_to(prime_bound) {
        if s.contains_point(SpecPoint::Prime(p)) {
            out.push(SpecPoint::Prime(p));
        }
    }
    if s.contains_point(SpecPoint::Infinity) {
        out.push(SpecPoint::Infinity);
    }
    Ok(out)
}

/// Closure of a point: either the whole space or a finite point set.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub enum ClosureSet {
    Whole,
    Points(BTreeSet<SpecPoint>),
}

impl ClosureSet {
    fn of(points: impl IntoIterator<Item = SpecPoint>) -> ClosureSet {
        ClosureSet::Points(points.into_iter().collect())
    }

    pub fn contains(&self, pt: SpecPoint) -> bool {
        match self {
            ClosureSet::Whole => true,
            ClosureSet::Points(s) => s.contains(&pt),
        }
    }
}

/// Topological closure of a point.
pub fn closure(s: SpecSpace, pt: SpecPoint) -> Result<ClosureSet> {
    if !s.contains_point(pt) {
        return Err(Error::domain(format!(
            "{pt} is not a point of {}",
            s.name()
        )));
    }
    Ok(match (s, pt) {
        (_, SpecPoint::Generic) => ClosureSet::Whole,
        (SpecSpace::SpecZ | SpecSpace::SpecBN(_), p) => ClosureSet::of([p]),
        (SpecSpace::SpecAN(_), SpecPoint::Prime(p)) => {
            ClosureSet::of([SpecPoint::Prime(p), SpecPoint::Infinity])
        }
        (SpecSpace::SpecAN(_), SpecPoint::Infinity) => ClosureSet::of([SpecPoint::Infinity]),
        (SpecSpace::CompactifiedN(n), SpecPoint::Prime(p)) => {
            if n % p == 0 {
                ClosureSet::of([SpecPoint::Prime(p)])
            } else {
                ClosureSet::of([SpecPoint::Prime(p), SpecPoint::Infinity])
            }
        }
        (SpecSpace::CompactifiedN(_), SpecPoint::Infinity) => ClosureSet::of([SpecPoint::Infinity]),
        (SpecSpace::CompactifiedLimit, p) => ClosureSet::of([p]),
    })
}

/// An open subset in its cofinite representation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum OpenSubset {
    Empty,
    Full,
    /// The complement: a finite set of excluded points.
    CofiniteAvoiding(BTreeSet<SpecPoint>),
}

impl OpenSubset {
    pub fn avoiding(points: impl IntoIterator<Item = SpecPoint>) -> OpenSubset {
        let set: BTreeSet<SpecPoint> = points.into_iter().collect();
        if set.is_empty() {
            OpenSubset::Full
        } else {
            OpenSubset::CofiniteAvoiding(set)
        }
    }
}

impl Serialize for OpenSubset {
    fn serialize<S: serde::Serializer>(
        &self,
        serializer: S,
    ) -> std::result::Result<S::Ok, S::Error> {
        use serde::ser::SerializeMap;
        let mut m = serializer.serialize_map(Some(1))?;
        match self {
            OpenSubset::Empty => m.serialize_entry("empty", &true)?,
            OpenSubset::Full => m.serialize_entry("complement", &Vec::<String>::new())?,
            OpenSubset::CofiniteAvoiding(c) => {
                let rendered: Vec<String> = c.iter().map(|p| p.to_string()).collect();
                m.serialize_entry("complement", &rendered)?;
            }
        }
        m.end()
    }
}

/// Decides openness by the space's characterization:
/// * Spec ℤ, Spec B_N: nonempty opens are the cofinite sets containing ξ;
/// * Spec A_N: the complement of a proper nonempty open contains ∞ and
///   finitely many primes;
/// * level-N compactification: proper nonempty opens contain ξ, are
///   cofinite, and either avoid ∞ or contain all of Spec B_N;
/// * limit: cofinite sets containing ξ.
pub fn is_open(s: SpecSpace, u: &OpenSubset) -> bool {
    let complement: BTreeSet<SpecPoint> = match u {
        OpenSubset::Empty => return true,
        OpenSubset::Full => return true,
        OpenSubset::CofiniteAvoiding(c) => {
            c.iter().copied().filter(|p| s.contains_point(*p)).collect()
        }
    };
    if complement.is_empty() {
        return true;
    }
    if complement.contains(&SpecPoint::Generic) {
        return false;
    }
    match s {
        SpecSpace::SpecZ | SpecSpace::SpecBN(_) | SpecSpace::CompactifiedLimit => true,
        SpecSpace::SpecAN(_) => complement.contains(&SpecPoint::Infinity),
        SpecSpace::CompactifiedN(n) => {
            complement.contains(&SpecPoint::Infinity)
                || complement.iter().all(|pt| match pt {
                    SpecPoint::Prime(p) => n % p == 0,
                    _ => false,
                })
        }
    }
}

/// A stalk descriptor with an exact rational membership test on |·| ⊂ ℚ.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub enum StalkRing {
    /// ℚ at the generic point.
    RationalField,
    /// ℤ_(p): v_p(x) ≥ 0.
    LocalAt(u64),
    /// A_N, the local ring at ∞ of the level-N space.
    ANLocal(u64),
    /// ℤ_(∞): |x|_∞ ≤ 1, at ∞ in the limit.
    ZLocInfty,
}

impl StalkRing {
    pub fn describe(&self) -> String {
        match self {
            StalkRing::RationalField => "Q".into(),
            StalkRing::LocalAt(p) => format!("Z_({p})"),
            StalkRing::ANLocal(n) => format!("AN:{n}"),
            StalkRing::ZLocInfty => "Zinf".into(),
        }
    }

    pub fn contains(&self, x: &Rat) -> bool {
        if x.is_zero() {
            return true;
        }
        match self {
            StalkRing::RationalField => true,
            StalkRing::LocalAt(p) => vp(*p, x).map(|e| e >= 0).unwrap_or(false),
            StalkRing::ANLocal(n) => CoeffMonad::AN(*n).contains(std::slice::from_ref(x)),
            StalkRing::ZLocInfty => abs_at(Valuation::Infinite, x)
                .map(|a| a <= Rat::one())
                .unwrap_or(false),
        }
    }
}

/// The ring of germs at a point.
pub fn stalk(s: SpecSpace, pt: SpecPoint) -> Result<StalkRing> {
    if !s.contains_point(pt) {
        return Err(Error::domain(format!(
            "{pt} is not a point of {}",
            s.name()
        )));
    }
    Ok(match (s, pt) {
        (_, SpecPoint::Generic) => StalkRing::RationalField,
        (_, SpecPoint::Prime(p)) => StalkRing::LocalAt(p),
        (SpecSpace::SpecAN(n) | SpecSpace::CompactifiedN(n), SpecPoint::Infinity) => {
            StalkRing::ANLocal(n)
        }
        (SpecSpace::CompactifiedLimit, SpecPoint::Infinity) => StalkRing::ZLocInfty,
        (SpecSpace::SpecZ | SpecSpace::SpecBN(_), SpecPoint::Infinity) => unreachable!(),
    })
}

/// Sections over a principal open D(f): a named coefficient monad when the
/// localization is recognized, otherwise a bounded membership test through
/// `in_localization`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub enum SectionsRing {
    Named(CoeffMonad),
    Localized { base: CoeffMonad, f: Rat },
}

impl SectionsRing {
    pub fn describe(&self) -> String {
        match self {
            SectionsRing::Named(m) => m.to_string(),
            SectionsRing::Localized { base, f } => format!("{base}[({f})^-1]"),
        }
    }

    /// Bounded membership for a single unary section.
    pub fn contains(&self, x: &Rat, bound: u32) -> Result<bool> {
        match self {
            SectionsRing::Named(m) => Ok(m.contains(std::slice::from_ref(x))),
            SectionsRing::Localized { base, f } => {
                match coeffmonads::in_localization(base, f, std::slice::from_ref(x), bound)? {
                    Localization::Member { .. } => Ok(true),
                    Localization::Undecided { bound } => Err(Error::undecided(format!(
                        "localization membership unresolved at k ≤ {bound}"
                    ))),
                }
            }
        }
    }
}

/// Γ(D(f)) on an affine symbolic spectrum.
pub fn sections_principal(s: SpecSpace, f: &Rat) -> Result<SectionsRing> {
    if f.is_zero() {
        return Err(Error::input("cannot take sections at D(0)"));
    }
    let global = global_sections(s)?;
    if !global.contains(std::slice::from_ref(f)) {
        return Err(Error::input(format!(
            "{f} is not a global section of {}",
            s.name()
        )));
    }
    Ok(match s {
        SpecSpace::SpecZ => {
            if f.abs().is_one() {
                SectionsRing::Named(CoeffMonad::Z)
            } else {
                // f is a nonzero integer: ℤ[1/f] = B_{|f|}.
                let n = f
                    .numer()
                    .magnitude()
                    .try_into()
                    .map_err(|_| Error::input("localizing integer too large"))?;
                SectionsRing::Named(CoeffMonad::BN(n))
            }
        }
        SpecSpace::SpecAN(n) => {
            if f == &Rat::new(1, n as i64)? {
                // Γ(D(1/N)) = A_N[(1/N)⁻¹] = B_N.
                SectionsRing::Named(CoeffMonad::BN(n))
            } else if f.abs().is_one() {
                SectionsRing::Named(CoeffMonad::AN(n))
            } else {
                SectionsRing::Localized {
                    base: CoeffMonad::AN(n),
                    f: f.clone(),
                }
            }
        }
        SpecSpace::SpecBN(n) => {
            if is_unit_in_bn(f, n) {
                SectionsRing::Named(CoeffMonad::BN(n))
            } else {
                SectionsRing::Localized {
                    base: CoeffMonad::BN(n),
                    f: f.clone(),
                }
            }
        }
        SpecSpace::CompactifiedN(_) | SpecSpace::CompactifiedLimit => {
            // Global sections are 𝔽_{1²}-like: the only nonzero sections
            // are ±1, whose principal open is the whole space.
            SectionsRing::Named(global)
        }
    })
}

fn is_unit_in_bn(f: &Rat, n: u64) -> bool {
    // Units of ℤ[1/N] are ± products of prime divisors of N.
    let m = CoeffMonad::BN(n);
    !f.is_zero()
        && m.contains(std::slice::from_ref(f))
        && f.recip().map(|r| m.contains(&[r])).unwrap_or(false)
}

/// Global sections: the affine spaces return their rings, the glued spaces
/// the predicate intersection of their chart sections.
pub fn global_sections(s: SpecSpace) -> Result<CoeffMonad> {
    Ok(match s {
        SpecSpace::SpecZ => CoeffMonad::Z,
        SpecSpace::SpecBN(n) => CoeffMonad::BN(n),
        SpecSpace::SpecAN(n) => CoeffMonad::AN(n),
        SpecSpace::CompactifiedN(n) => coeffmonads::intersect(&[CoeffMonad::Z, CoeffMonad::AN(n)])?,
        SpecSpace::CompactifiedLimit => {
            coeffmonads::intersect(&[CoeffMonad::Z, CoeffMonad::ZLocInf])?
        }
    })
}

/// The chart decomposition of the level-N space: Spec ℤ and Spec A_N glued
/// along Spec B_N.
pub fn charts(n: u64) -> (SpecSpace, SpecSpace, SpecSpace) {
    (SpecSpace::SpecZ, SpecSpace::SpecAN(n), SpecSpace::SpecBN(n))
}

/// Openness of a subset of the glued space computed chart by chart, for
/// cross-validation against the direct predicate.
pub fn glued_is_open(n: u64, u: &OpenSubset) -> bool {
    let (c1, c2, _) = charts(n);
    let restrict = |chart: SpecSpace| -> OpenSubset {
        match u {
            OpenSubset::Empty => OpenSubset::Empty,
            OpenSubset::Full => OpenSubset::Full,
            OpenSubset::CofiniteAvoiding(c) => {
                OpenSubset::avoiding(c.iter().copied().filter(|p| chart.contains_point(*p)))
            }
        }
    };
    is_open(c1, &restrict(c1)) && is_open(c2, &restrict(c2))
}

/// Diagnostics of the transition morphism from level N·M to level N.
#[derive(Debug, Clone, Serialize)]
pub struct SystemMorphism {
    pub source: String,
    pub target: String,
    /// The underlying map is the identity on Spec ℤ ∪ {∞}.
    pub identity_on_points: bool,
    pub continuous: bool,
    pub opens_checked: usize,
    /// The map is the identity of spaces iff M | N^k for some k.
    pub is_identity: bool,
    pub is_homeomorphism: bool,
    /// A prime closed in the source but not the target, when present.
    pub witness: Option<u64>,
}

/// Builds f: level N·M → level N and checks continuity over a finite basis
/// sample plus the identity/homeomorphism criteria.
pub fn system_morphism(n: u64, m: u64) -> Result<SystemMorphism> {
    if n <= 1 || m <= 1 {
        return Err(Error::input("levels must exceed 1"));
    }
    let source = SpecSpace::CompactifiedN(n * m);
    let target = SpecSpace::CompactifiedN(n);
    // M | N^k for some k iff every prime of M divides N.
    let m_primes: Vec<u64> = crate::exactnum::factorize(m)?
        .into_iter()
        .map(|(p, _)| p)
        .collect();
    let is_identity = m_primes.iter().all(|p| n % p == 0);
    let witness = m_primes.iter().copied().find(|p| n % p != 0);
    // Continuity: the preimage (same point set) of every target open in a
    // finite sample must be open in the source.
    let sample_points: Vec<SpecPoint> = points(target, 13)?;
    let mut opens_checked = 0;
    let mut continuous = true;
    for mask in 0u32..(1 << sample_points.len().min(8)) {
        let complement: BTreeSet<SpecPoint> = sample_points
            .iter()
            .enumerate()
            .filter(|(i, _)| mask & (1 << i) != 0)
            .map(|(_, p)| *p)
            .collect();
        let u = if complement.is_empty() {
            OpenSubset::Full
        } else {
            OpenSubset::CofiniteAvoiding(complement)
        };
        if is_open(target, &u) {
            opens_checked += 1;
            if !is_open(source, &u) {
                continuous = false;
            }
        }
    }
    Ok(SystemMorphism {
        source: source.name(),
        target: target.name(),
        identity_on_points: true,
        continuous,
        opens_checked,
        is_identity,
        is_homeomorphism: is_identity,
        witness,
    })
}

/// An ideal of a finite monad: an A-submodule of the underlying monoid.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FiniteIdeal {
    pub monad: String,
    /// Element displays, sorted.
    pub elements: Vec<String>,
    pub prime: bool,
}

/// All ideals of a finite monad, by subset enumeration over |A| with
/// closure checked against every operation of arity ≤ `arity_bound`.
/// The prime flag asks that the complement contain e and be closed under
/// the monoid multiplication.
pub fn ideals_finite(h: &Handle, arity_bound: usize) -> Result<Vec<FiniteIdeal>> {
    let carrier = h
        .enumerate(1)
        .ok_or_else(|| Error::input("monad has no finite enumeration"))?;
    let size = carrier.len();
    if size > 16 {
        return Err(Error::input("carrier too large for subset enumeration"));
    }
    let ops: Vec<(usize, Vec<Val>)> = (0..=arity_bound)
        .map(|ar| (ar, h.enumerate(ar).unwrap_or_default()))
        .collect();
    let mut out = Vec::new();
    for mask in 0u32..(1 << size) {
        let subset: Vec<&Val> = carrier
            .iter()
            .enumerate()
            .filter(|(i, _)| mask & (1 << i) != 0)
            .map(|(_, v)| v)
            .collect();
        if !ideal_closed(h, &subset, &ops)? {
            continue;
        }
        let prime = prime_flag(h, &carrier, mask)?;
        out.push(FiniteIdeal {
            monad: h.name(),
            elements: subset.iter().map(|v| v.to_string()).collect(),
            prime,
        });
    }
    Ok(out)
}

fn ideal_closed(h: &Handle, subset: &[&Val], ops: &[(usize, Vec<Val>)]) -> Result<bool> {
    let member = |v: &Val| subset.iter().any(|s| *s == v);
    for (arity, elems) in ops {
        if subset.is_empty() && *arity > 0 {
            continue;
        }
        let tuples = index_tuples(subset.len(), *arity);
        for t in elems {
            for tuple in &tuples {
                // The module action on |A| = Σ(1): constants land in |A|
                // through the induced map, everything else by substitution.
                let image = if *arity == 0 {
                    h.induced(&[], t, 1)?
                } else {
                    let args: Vec<Val> = tuple.iter().map(|&i| subset[i].clone()).collect();
                    h.substitute(t, &args)?
                };
                if !member(&image) {
                    return Ok(false);
                }
            }
        }
    }
    Ok(true)
}

fn index_tuples(pool: usize, arity: usize) -> Vec<Vec<usize>> {
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

fn prime_flag(h: &Handle, carrier: &[Val], mask: u32) -> Result<bool> {
    let complement: Vec<&Val> = carrier
        .iter()
        .enumerate()
        .filter(|(i, _)| mask & (1 << i) == 0)
        .map(|(_, v)| v)
        .collect();
    let unit = h.unit();
    if !complement.iter().any(|v| **v == unit) {
        return Ok(false);
    }
    for a in &complement {
        for b in &complement {
            let ab = h.substitute(a, std::slice::from_ref(*b))?;
            if !complement.iter().any(|v| **v == ab) {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// The spectrum of a finite monad, carried by its list of prime ideals.
/// Closure and openness come from the inclusion order: V(p) = {q : p ⊆ q}.
#[derive(Debug, Clone, Serialize)]
pub struct FiniteSpec {
    pub monad: String,
    pub primes: Vec<FiniteIdeal>,
}

impl FiniteSpec {
    /// Builds the spectrum of a finite monad from first principles.
    pub fn of(h: &Handle, arity_bound: usize) -> Result<FiniteSpec> {
        let primes = ideals_finite(h, arity_bound)?
            .into_iter()
            .filter(|i| i.prime)
            .collect();
        Ok(FiniteSpec {
            monad: h.name(),
            primes,
        })
    }

    pub fn len(&self) -> usize {
        self.primes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.primes.is_empty()
    }

    fn subset(&self, a: usize, b: usize) -> bool {
        self.primes[a]
            .elements
            .iter()
            .all(|e| self.primes[b].elements.contains(e))
    }

    /// Closure of the point indexed by `i`: all primes containing it.
    pub fn closure(&self, i: usize) -> Result<Vec<usize>> {
        if i >= self.primes.len() {
            return Err(Error::domain(format!(
                "no point {i} in Spec {}",
                self.monad
            )));
        }
        Ok((0..self.primes.len())
            .filter(|&j| self.subset(i, j))
            .collect())
    }

    /// Openness of a point subset: the complement must be closed upward
    /// under inclusion.
    pub fn is_open(&self, points: &BTreeSet<usize>) -> bool {
        (0..self.primes.len()).all(|j| {
            points.contains(&j)
                || (0..self.primes.len())
                    .filter(|&i| self.subset(i, j))
                    .all(|i| !points.contains(&i))
        })
    }
}


#[cfg(test)]
mod finite_spec_tests {
    use super::*;

    #[test]
    fn f1_spectrum_is_a_point() {
        let spec = FiniteSpec::of(&"F1".parse().unwrap(), 2).unwrap();
        assert_eq!(spec.len(), 1);
        assert_eq!(spec.closure(0).unwrap(), vec![0]);
        assert!(spec.is_open(&BTreeSet::from([0])));
        assert!(spec.is_open(&BTreeSet::new()));
        assert!(spec.closure(3).is_err());
    }

    #[test]
    fn finite_spectra_are_points_for_the_torsion_monads() {
        for id in ["F12", "F1n:3", "F1n:6", "Finf"] {
            let spec = FiniteSpec::of(&id.parse().unwrap(), 2).unwrap();
            assert_eq!(spec.len(), 1, "{id}");
        }
    }

    #[test]
    fn open_subset_json_shape() {
        let u = OpenSubset::avoiding([SpecPoint::Prime(2), SpecPoint::Infinity]);
        assert_eq!(
            serde_json::to_string(&u).unwrap(),
            r#"{"complement":["2","inf"]}"#
        );
        assert_eq!(
            serde_json::to_string(&OpenSubset::Full).unwrap(),
            r#"{"complement":[]}"#
        );
    }
}
