//! The graded ring R with R_d(n) = {λ ∈ ℤⁿ : Σ|λ_i| ≤ N^d}, its degree-zero
//! localizations at f₁ = T, f₂ = N·T and their product, radical-membership
//! witnesses, the Proj construction, projective space over 𝔽_1, and the
//! identification of Proj R with the level-N compactification.

use num_bigint::BigInt;
use num_traits::{Signed, Zero};
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::coeffmonads::CoeffMonad;
use crate::error::{Error, Result};
use crate::exactnum::Rat;
use crate::spectra::{self, OpenSubset, SpecPoint, SpecSpace};

/// The graded ring of octahedral integer combinations of radius N^d.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct GradedRing {
    pub n: u64,
}

impl GradedRing {
    pub fn new(n: u64) -> Result<GradedRing> {
        if n <= 1 {
            return Err(Error::input("graded ring requires N > 1"));
        }
        Ok(GradedRing { n })
    }

    fn radius(&self, d: u32) -> BigInt {
        BigInt::from(self.n).pow(d)
    }

    /// The defining inequality Σ|λ_i| ≤ N^d, exactly.
    pub fn contains(&self, d: u32, v: &[BigInt]) -> bool {
        let mass: BigInt = v.iter().map(|x| x.abs()).sum();
        mass <= self.radius(d)
    }

    /// The degree-1 unary element T.
    pub fn f1(&self) -> GradedElement {
        GradedElement {
            degree: 1,
            coeffs: vec![BigInt::from(1)],
        }
    }

    /// The degree-1 unary element N·T.
    pub fn f2(&self) -> GradedElement {
        GradedElement {
            degree: 1,
            coeffs: vec![BigInt::from(self.n)],
        }
    }
}

/// A homogeneous element (λ)·T^d.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct GradedElement {
    pub degree: u32,
    pub coeffs: Vec<BigInt>,
}

impl GradedElement {
    pub fn new(ring: &GradedRing, degree: u32, coeffs: Vec<BigInt>) -> Result<GradedElement> {
        if !ring.contains(degree, &coeffs) {
            return Err(Error::input(format!("ℓ1 mass exceeds {}^{degree}", ring.n)));
        }
        Ok(GradedElement { degree, coeffs })
    }

    pub fn arity(&self) -> usize {
        self.coeffs.len()
    }

    /// The degree-0 unit e.
    pub fn unit() -> GradedElement {
        GradedElement {
            degree: 0,
            coeffs: vec![BigInt::from(1)],
        }
    }

    pub fn coordinate(k: usize, n: usize) -> GradedElement {
        let mut coeffs = vec![BigInt::zero(); n];
        coeffs[k - 1] = BigInt::from(1);
        GradedElement { degree: 0, coeffs }
    }
}

/// Graded substitution: coefficients substitute bilinearly, degrees add.
/// All arguments must share one degree and one arity.
pub fn graded_substitute(
    ring: &GradedRing,
    t: &GradedElement,
    args: &[GradedElement],
) -> Result<GradedElement> {
    if args.len() != t.arity() {
        return Err(Error::input(format!(
            "arity mismatch: operation expects {} arguments, got {}",
            t.arity(),
            args.len()
        )));
    }
    let n = args.first().map_or(0, GradedElement::arity);
    let b = args.first().map_or(0, |a| a.degree);
    for a in args {
        if a.arity() != n || a.degree != b {
            return Err(Error::input("arguments must share arity and degree"));
        }
    }
    let mut coeffs = vec![BigInt::zero(); n];
    for (ti, arg) in t.coeffs.iter().zip(args) {
        for (j, aj) in arg.coeffs.iter().enumerate() {
            coeffs[j] += ti * aj;
        }
    }
    let degree = t.degree + b;
    if !ring.contains(degree, &coeffs) {
        return Err(Error::internal(
            "graded substitution left the ring".to_string(),
        ));
    }
    Ok(GradedElement { degree, coeffs })
}

/// A localizing element of degree ≥ 1: f₁, f₂, or their product.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Localizer {
    F1,
    F2,
    F1F2,
}

impl Localizer {
    /// (scalar, degree) of the element: f₁ = 1·T, f₂ = N·T, f₁f₂ = N·T².
    fn scalar_degree(&self, ring: &GradedRing) -> (BigInt, u32) {
        match self {
            Localizer::F1 => (BigInt::from(1), 1),
            Localizer::F2 => (BigInt::from(ring.n), 1),
            Localizer::F1F2 => (BigInt::from(ring.n), 2),
        }
    }

    pub fn label(&self) -> &'static str {
        match self {
            Localizer::F1 => "f1",
            Localizer::F2 => "f2",
            Localizer::F1F2 => "f1f2",
        }
    }
}

impl std::str::FromStr for Localizer {
    type Err = Error;

    fn from_str(s: &str) -> Result<Localizer> {
        match s {
            "f1" => Ok(Localizer::F1),
            "f2" => Ok(Localizer::F2),
            "f1f2" => Ok(Localizer::F1F2),
            _ => Err(Error::input(format!("unknown localizer {s:?}"))),
        }
    }
}

/// Outcome of a degree-zero localization membership search.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub enum Deg0Membership {
    /// v = w/f^d with w ∈ R_{d·deg f}; d is the least certificate.
    Member {
        d: u32,
    },
    NotFound {
        bound: u32,
    },
}

/// Is v ∈ R_(f)(n)? Searches d ≤ k_bound for u^d·v integral with ℓ1 mass
/// at most N^(d·deg f), where f = u·T^(deg f).
pub fn deg0_localization_contains(
    ring: &GradedRing,
    f: Localizer,
    v: &[Rat],
    k_bound: u32,
) -> Deg0Membership {
    let (scalar, fdeg) = f.scalar_degree(ring);
    let mut factor = BigInt::from(1);
    for d in 0..=k_bound {
        let mut integral = Vec::with_capacity(v.len());
        let mut ok = true;
        for x in v {
            let num = x.numer() * &factor;
            if (&num % x.denom()).is_zero() {
                integral.push(num / x.denom());
            } else {
                ok = false;
                break;
            }
        }
        if ok && ring.contains(d * fdeg, &integral) {
            return Deg0Membership::Member { d };
        }
        factor *= &scalar;
    }
    Deg0Membership::NotFound { bound: k_bound }
}

/// Two-sided membership agreement between a degree-zero localization and a
/// named coefficient monad on a deterministic sample including ℓ1-boundary
/// vectors.
#[derive(Debug, Clone, Serialize)]
pub struct LocalizationReport {
    pub localizer: &'static str,
    pub target: CoeffMonad,
    pub samples: usize,
    pub agreements: usize,
    pub all_agree: bool,
}

pub fn localization_equals(
    ring: &GradedRing,
    f: Localizer,
    target: &CoeffMonad,
    samples: usize,
    seed: u64,
) -> Result<LocalizationReport> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let k_bound = 48;
    let mut agreements = 0;
    let mut checked = 0;
    let n_i64 = ring.n as i64;
    while checked < samples {
        let len = rng.random_range(1..=3usize);
        // Alternate target-shaped, boundary and arbitrary vectors.
        let v: Vec<Rat> = match checked % 3 {
            0 => match target {
                CoeffMonad::Z => (0..len)
                    .map(|_| Rat::from_int(rng.random_range(-20..=20)))
                    .collect(),
                CoeffMonad::AN(b) => {
                    let k = rng.random_range(0..=2u32);
                    let d = (*b as i64).pow(k);
                    let mut left = d;
                    (0..len)
                        .map(|_| {
                            let a = rng.random_range(-left..=left);
                            left -= a.abs();
                            crate::exactnum::rat(a, d)
                        })
                        .collect()
                }
                CoeffMonad::BN(b) => {
                    let k = rng.random_range(0..=2u32);
                    let d = (*b as i64).pow(k);
                    (0..len)
                        .map(|_| crate::exactnum::rat(rng.random_range(-30..=30), d))
                        .collect()
                }
                _ => return Err(Error::input("unsupported localization target")),
            },
            1 => {
                // ℓ1-boundary vectors: mass exactly N^k over denominator N^k.
                let k = rng.random_range(0..=2u32);
                let d = n_i64.pow(k);
                let mut parts = vec![0i64; len];
                let mut left = d;
                for part in parts.iter_mut().take(len - 1) {
                    let a = rng.random_range(0..=left);
                    *part = a;
                    left -= a;
                }
                parts[len - 1] = left;
                parts
                    .iter()
                    .map(|&a| crate::exactnum::rat(if rng.random_bool(0.5) { a } else { -a }, d))
                    .collect()
            }
            _ => (0..len)
                .map(|_| crate::exactnum::rat(rng.random_range(-24..=24), rng.random_range(1..=24)))
                .collect(),
        };
        checked += 1;
        let in_target = target.contains(&v);
        let in_loc = matches!(
            deg0_localization_contains(ring, f, &v, k_bound),
            Deg0Membership::Member { .. }
        );
        if in_target == in_loc {
            agreements += 1;
        } else {
            return Ok(LocalizationReport {
                localizer: f.label(),
                target: target.clone(),
                samples: checked,
                agreements,
                all_agree: false,
            });
        }
    }
    Ok(LocalizationReport {
        localizer: f.label(),
        target: target.clone(),
        samples: checked,
        agreements,
        all_agree: true,
    })
}

/// A radical-membership witness: the least m ≥ 1 with t^m = f_i · cofactor.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RadicalWitness {
    pub m: u32,
    pub via: Localizer,
    /// u^m/scalar(f_i) placed in degree m·d − 1.
    pub cofactor: GradedElement,
}

/// For a unary homogeneous t = u·T^d with d ≥ 1 and |u| ≤ N^d, finds the
/// least power m with t^m divisible by f₁ or f₂ inside R (f₁ preferred on
/// ties). Termination is guaranteed: |u| < N^d forces |u|^m ≤ N^(dm−1)
/// eventually, and |u| = N^d goes through f₂ at m = 1.
pub fn radical_witness(ring: &GradedRing, u: &BigInt, d: u32) -> Result<RadicalWitness> {
    if d == 0 {
        return Err(Error::input("radical witness needs degree ≥ 1"));
    }
    if u.abs() > ring.radius(d) {
        return Err(Error::input("element outside the graded ring"));
    }
    let n_big = BigInt::from(ring.n);
    let mut power = u.clone();
    // The least witness can be as large as ~N^d·ln N (when |u| = N^d − 1),
    // so the cap only guards against implementation bugs.
    let safety = 1_000_000;
    for m in 1..=safety {
        let cof_degree = m * d - 1;
        // f₁ route: cofactor u^m · T^(md−1), needs |u^m| ≤ N^(md−1).
        if power.abs() <= ring.radius(cof_degree) {
            return Ok(RadicalWitness {
                m,
                via: Localizer::F1,
                cofactor: GradedElement::new(ring, cof_degree, vec![power])?,
            });
        }
        // f₂ route: cofactor (u^m/N) · T^(md−1), needs N | u^m and mass.
        if (&power % &n_big).is_zero() {
            let q = &power / &n_big;
            if q.abs() <= ring.radius(cof_degree) {
                return Ok(RadicalWitness {
                    m,
                    via: Localizer::F2,
                    cofactor: GradedElement::new(ring, cof_degree, vec![q])?,
                });
            }
        }
        power *= u;
    }
    Err(Error::internal(
        "radical witness not found within the safety bound".to_string(),
    ))
}

/// Points of ℙⁿ over 𝔽_1: the homogeneous primes of 𝔽_1[T₀,…,T_n] minus
/// the irrelevant ideal, i.e. proper subsets S ⊊ {0..n} read as the ideal
/// (T_i : i ∈ S). The count is 2^(n+1) − 1.
#[derive(Debug, Clone, Serialize)]
pub struct ProjF1 {
    pub n: u32,
    /// Bitmask of the generating variable set of each point's ideal.
    pub points: Vec<u32>,
    pub count: u64,
}

pub fn proj_points_f1(n: u32) -> Result<ProjF1> {
    if n > 20 {
        return Err(Error::input("projective dimension capped at 20"));
    }
    let full: u32 = (1u32 << (n + 1)) - 1;
    let points: Vec<u32> = (0..=full).filter(|&mask| mask != full).collect();
    let count = points.len() as u64;
    debug_assert_eq!(count, (1u64 << (n + 1)) - 1);
    Ok(ProjF1 { n, points, count })
}

impl ProjF1 {
    /// The chart D₊(T_i): points whose ideal misses T_i.
    pub fn chart(&self, i: u32) -> Vec<u32> {
        self.points
            .iter()
            .copied()
            .filter(|mask| mask & (1 << i) == 0)
            .collect()
    }

    pub fn chart_intersection(&self, i: u32, j: u32) -> Vec<u32> {
        self.points
            .iter()
            .copied()
            .filter(|mask| mask & (1 << i) == 0 && mask & (1 << j) == 0)
            .collect()
    }
}

/// Verdict of the Proj R ≅ level-N compactification comparison.
#[derive(Debug, Clone, Serialize)]
pub struct ProjCompactReport {
    pub n: u64,
    pub prime_bound: u64,
    pub sections_f1_match_z: bool,
    pub sections_f2_match_an: bool,
    pub sections_f1f2_match_bn: bool,
    pub points_match: bool,
    pub opens_checked: usize,
    pub opens_match: bool,
    pub ok: bool,
}

/// Builds Proj R from the charts D₊(f₁) ≅ Spec ℤ, D₊(f₂) ≅ Spec A_N with
/// overlap D₊(f₁f₂) ≅ Spec B_N, and verifies point-set and open-set
/// agreement with the glued space, plus the chart-section identifications
/// on samples.
pub fn proj_is_compactification(n: u64, prime_bound: u64, seed: u64) -> Result<ProjCompactReport> {
    let ring = GradedRing::new(n)?;
    let f1 = localization_equals(&ring, Localizer::F1, &CoeffMonad::Z, 500, seed)?;
    let f2 = localization_equals(&ring, Localizer::F2, &CoeffMonad::AN(n), 500, seed + 1)?;
    let f12 = localization_equals(&ring, Localizer::F1F2, &CoeffMonad::BN(n), 500, seed + 2)?;

    // Point sets: chart union against the glued space.
    use std::collections::BTreeSet;
    let glued: BTreeSet<SpecPoint> = spectra::points(SpecSpace::CompactifiedN(n), prime_bound)?
        .into_iter()
        .collect();
    let chart1: BTreeSet<SpecPoint> = spectra::points(SpecSpace::SpecZ, prime_bound)?
        .into_iter()
        .collect();
    let chart2: BTreeSet<SpecPoint> = spectra::points(SpecSpace::SpecAN(n), prime_bound)?
        .into_iter()
        .collect();
    let overlap: BTreeSet<SpecPoint> = spectra::points(SpecSpace::SpecBN(n), prime_bound)?
        .into_iter()
        .collect();
    let union: BTreeSet<SpecPoint> = chart1.union(&chart2).copied().collect();
    let inter: BTreeSet<SpecPoint> = chart1.intersection(&chart2).copied().collect();
    let points_match = union == glued && inter == overlap;

    // Open sets: glued-chart openness against the direct predicate — all
    // subsets of an 8-point truncation, then seeded cofinite subsets at the
    // full bound.
    let mut opens_checked = 0;
    let mut opens_match = true;
    let small: Vec<SpecPoint> = spectra::points(SpecSpace::CompactifiedN(n), 13)?;
    for mask in 0u32..(1 << small.len()) {
        let complement: BTreeSet<SpecPoint> = small
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
        opens_checked += 1;
        if spectra::glued_is_open(n, &u) != spectra::is_open(SpecSpace::CompactifiedN(n), &u) {
            opens_match = false;
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed + 3);
    let all: Vec<SpecPoint> = glued.iter().copied().collect();
    for _ in 0..200 {
        let complement: BTreeSet<SpecPoint> = all
            .iter()
            .copied()
            .filter(|_| rng.random_bool(0.2))
            .collect();
        let u = OpenSubset::avoiding(complement);
        opens_checked += 1;
        if spectra::glued_is_open(n, &u) != spectra::is_open(SpecSpace::CompactifiedN(n), &u) {
            opens_match = false;
        }
    }

    let ok = f1.all_agree && f2.all_agree && f12.all_agree && points_match && opens_match;
    Ok(ProjCompactReport {
        n,
        prime_bound,
        sections_f1_match_z: f1.all_agree,
        sections_f2_match_an: f2.all_agree,
        sections_f1f2_match_bn: f12.all_agree,
        points_match,
        opens_checked,
        opens_match,
        ok,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactnum::rat;

    fn big(v: &[i64]) -> Vec<BigInt> {
        v.iter().map(|&x| BigInt::from(x)).collect()
    }

    #[test]
    fn contains_examples() {
        let r = GradedRing::new(2).unwrap();
        assert!(r.contains(1, &big(&[1, 1])));
        assert!(!r.contains(1, &big(&[3])));
        assert!(r.contains(0, &big(&[1])));
        assert!(!r.contains(0, &big(&[1, 1])));
    }

    #[test]
    fn substitute_examples() {
        let r = GradedRing::new(2).unwrap();
        // f₁ ∘ [f₂] = N·T².
        let res = graded_substitute(&r, &r.f1(), &[r.f2()]).unwrap();
        assert_eq!(
            res,
            GradedElement {
                degree: 2,
                coeffs: big(&[2])
            }
        );

        // (1,1)T against the degree-1 unit placed on each slot: (1,1)T².
        let t = GradedElement::new(&r, 1, big(&[1, 1])).unwrap();
        let a1 = GradedElement::new(&r, 1, big(&[1, 0])).unwrap();
        let a2 = GradedElement::new(&r, 1, big(&[0, 1])).unwrap();
        let res = graded_substitute(&r, &t, &[a1, a2]).unwrap();
        assert_eq!(
            res,
            GradedElement {
                degree: 2,
                coeffs: big(&[1, 1])
            }
        );

        // Unit law at degree 0.
        let e = GradedElement::unit();
        let res = graded_substitute(&r, &e, &[t.clone()]).unwrap();
        assert_eq!(res, t);
    }

    #[test]
    fn graded_monad_laws_randomized() {
        let mut rng = ChaCha8Rng::seed_from_u64(13);
        for n in [2u64, 3, 6] {
            let ring = GradedRing::new(n).unwrap();
            let sample = |arity: usize, degree: u32, rng: &mut ChaCha8Rng| -> GradedElement {
                let radius = (n as i64).pow(degree);
                let mut left = radius;
                let coeffs: Vec<BigInt> = (0..arity)
                    .map(|_| {
                        let a = rng.random_range(-left..=left);
                        left -= a.abs();
                        BigInt::from(a)
                    })
                    .collect();
                GradedElement::new(&ring, degree, coeffs).unwrap()
            };
            for _ in 0..200 {
                let k = rng.random_range(1..=3usize);
                let m = rng.random_range(1..=3usize);
                let p = rng.random_range(1..=3usize);
                let (da, db, dc) = (
                    rng.random_range(0..=2u32),
                    rng.random_range(0..=2u32),
                    rng.random_range(0..=2u32),
                );
                let t = sample(k, da, &mut rng);
                // Unit and projection laws.
                assert_eq!(
                    graded_substitute(&ring, &GradedElement::unit(), &[t.clone()]).unwrap(),
                    t
                );
                let projs: Vec<GradedElement> =
                    (1..=k).map(|i| GradedElement::coordinate(i, k)).collect();
                assert_eq!(graded_substitute(&ring, &t, &projs).unwrap(), t);
                // Degree-additive associativity.
                let ss: Vec<GradedElement> = (0..k).map(|_| sample(m, db, &mut rng)).collect();
                let rs: Vec<GradedElement> = (0..m).map(|_| sample(p, dc, &mut rng)).collect();
                let lhs =
                    graded_substitute(&ring, &graded_substitute(&ring, &t, &ss).unwrap(), &rs)
                        .unwrap();
                let inner: Vec<GradedElement> = ss
                    .iter()
                    .map(|s| graded_substitute(&ring, s, &rs).unwrap())
                    .collect();
                let rhs = graded_substitute(&ring, &t, &inner).unwrap();
                assert_eq!(lhs, rhs);
                assert_eq!(lhs.degree, da + db + dc);
            }
        }
    }

    #[test]
    fn deg0_examples() {
        let r = GradedRing::new(2).unwrap();
        assert_eq!(
            deg0_localization_contains(&r, Localizer::F1, &[rat(5, 1)], 16),
            Deg0Membership::Member { d: 3 }
        );
        assert_eq!(
            deg0_localization_contains(&r, Localizer::F2, &[rat(1, 2), rat(1, 2)], 16),
            Deg0Membership::Member { d: 1 }
        );
        assert_eq!(
            deg0_localization_contains(&r, Localizer::F1F2, &[rat(5, 4)], 16),
            Deg0Membership::Member { d: 2 }
        );
        // Denominator 3 never clears against N = 2.
        assert_eq!(
            deg0_localization_contains(&r, Localizer::F2, &[rat(1, 3)], 10),
            Deg0Membership::NotFound { bound: 10 }
        );
    }

    #[test]
    fn localizations_identify_the_charts() {
        for n in [2u64, 6] {
            let r = GradedRing::new(n).unwrap();
            let z = localization_equals(&r, Localizer::F1, &CoeffMonad::Z, 500, 9).unwrap();
            assert!(z.all_agree, "R_(f1) vs Z");
            let an = localization_equals(&r, Localizer::F2, &CoeffMonad::AN(n), 500, 10).unwrap();
            assert!(an.all_agree, "R_(f2) vs AN:{n}");
            let bn = localization_equals(&r, Localizer::F1F2, &CoeffMonad::BN(n), 500, 11).unwrap();
            assert!(bn.all_agree, "R_(f1f2) vs BN:{n}");
        }
    }

    #[test]
    fn radical_examples() {
        let r = GradedRing::new(2).unwrap();
        let w = radical_witness(&r, &BigInt::from(1), 1).unwrap();
        assert_eq!((w.m, w.via), (1, Localizer::F1));
        assert_eq!(
            w.cofactor,
            GradedElement {
                degree: 0,
                coeffs: big(&[1])
            }
        );

        let w = radical_witness(&r, &BigInt::from(2), 1).unwrap();
        assert_eq!((w.m, w.via), (1, Localizer::F2));

        let w = radical_witness(&r, &BigInt::from(3), 2).unwrap();
        assert_eq!((w.m, w.via), (3, Localizer::F1));
        assert_eq!(
            w.cofactor,
            GradedElement {
                degree: 5,
                coeffs: big(&[27])
            }
        );
    }

    /// Cofactors always lie in the ring and m is minimal.
    #[test]
    fn radical_minimality() {
        for n in [2u64, 3, 6] {
            let ring = GradedRing::new(n).unwrap();
            for d in 1..=3u32 {
                let radius: i64 = (n as i64).pow(d);
                for u in -radius..=radius {
                    let u = BigInt::from(u);
                    let w = radical_witness(&ring, &u, d).unwrap();
                    assert!(ring.contains(w.m * d - 1, &w.cofactor.coeffs));
                    // Verify t^m = f_i · cofactor over the scalars.
                    let (scalar, fdeg) = w.via.scalar_degree(&ring);
                    assert_eq!(w.cofactor.degree + fdeg, w.m * d);
                    assert_eq!(scalar * &w.cofactor.coeffs[0], u.pow(w.m));
                    // m − 1 admits no witness through either route.
                    for m in 1..w.m {
                        let p = u.pow(m);
                        let deg = m * d - 1;
                        let via_f1 = p.abs() <= ring.radius(deg);
                        let via_f2 = (&p % BigInt::from(n)).is_zero()
                            && (&p / BigInt::from(n)).abs() <= ring.radius(deg);
                        assert!(
                            !via_f1 && !via_f2,
                            "m = {m} already works for u = {u}, d = {d}"
                        );
                    }
                }
            }
        }
    }

    #[test]
    fn proj_f1_counts() {
        assert_eq!(proj_points_f1(1).unwrap().count, 3);
        assert_eq!(proj_points_f1(2).unwrap().count, 7);
        assert_eq!(proj_points_f1(0).unwrap().count, 1);
        for n in 0..=10u32 {
            assert_eq!(proj_points_f1(n).unwrap().count, (1 << (n + 1)) - 1);
        }
        assert!(proj_points_f1(21).is_err());
    }

    /// Chart cover and pairwise intersections by enumeration.
    #[test]
    fn proj_f1_charts() {
        for n in 0..=6u32 {
            let proj = proj_points_f1(n).unwrap();
            let mut covered: std::collections::BTreeSet<u32> = Default::default();
            for i in 0..=n {
                let chart = proj.chart(i);
                assert_eq!(chart.len(), 1 << n);
                covered.extend(chart);
            }
            assert_eq!(covered.len() as u64, proj.count);
            for i in 0..=n {
                for j in 0..=n {
                    if i != j {
                        assert_eq!(proj.chart_intersection(i, j).len(), 1 << (n - 1), "n = {n}");
                    }
                }
            }
        }
    }

    #[test]
    fn proj_matches_compactification() {
        for n in [2u64, 6] {
            let rep = proj_is_compactification(n, 20, 4).unwrap();
            assert!(rep.ok, "{rep:?}");
        }
    }
}
