//! Exact rational arithmetic, p-adic valuations and the norm family on ℚ.
//!
//! Everything downstream compares elements for equality, so this module is
//! exact end to end: absolute values at every place are returned as
//! rationals and the product formula is checked as an identity, not up to a
//! tolerance.

use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

/// An exact rational, always in lowest terms with positive denominator.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Rat(BigRational);

impl Rat {
    pub fn new(num: i64, den: i64) -> Result<Rat> {
        if den == 0 {
            return Err(Error::input("denominator must be nonzero"));
        }
        Ok(Rat(BigRational::new(BigInt::from(num), BigInt::from(den))))
    }

    pub fn from_int(n: i64) -> Rat {
        Rat(BigRational::from_integer(BigInt::from(n)))
    }

    pub fn from_bigint(n: BigInt) -> Rat {
        Rat(BigRational::from_integer(n))
    }

    pub fn from_parts(num: BigInt, den: BigInt) -> Result<Rat> {
        if den.is_zero() {
            return Err(Error::input("denominator must be nonzero"));
        }
        Ok(Rat(BigRational::new(num, den)))
    }

    pub fn zero() -> Rat {
        Rat(BigRational::zero())
    }

    pub fn one() -> Rat {
        Rat(BigRational::one())
    }

    pub fn numer(&self) -> &BigInt {
        self.0.numer()
    }

    pub fn denom(&self) -> &BigInt {
        self.0.denom()
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.0.is_one()
    }

    pub fn is_negative(&self) -> bool {
        self.0.is_negative()
    }

    pub fn is_positive(&self) -> bool {
        self.0.is_positive()
    }

    pub fn is_integer(&self) -> bool {
        self.0.is_integer()
    }

    pub fn abs(&self) -> Rat {
        Rat(self.0.abs())
    }

    pub fn signum(&self) -> i8 {
        if self.0.is_zero() {
            0
        } else if self.0.is_negative() {
            -1
        } else {
            1
        }
    }

    pub fn recip(&self) -> Result<Rat> {
        if self.is_zero() {
            return Err(Error::domain("division by zero"));
        }
        Ok(Rat(self.0.recip()))
    }

    /// Integer power with negative exponents allowed (base must be nonzero
    /// for those).
    pub fn pow(&self, e: i64) -> Result<Rat> {
        if e < 0 && self.is_zero() {
            return Err(Error::domain("zero to a negative power"));
        }
        Ok(Rat(self.0.pow(
            e.to_i32()
                .ok_or_else(|| Error::input("exponent too large"))?,
        )))
    }

    pub fn floor_bigint(&self) -> BigInt {
        self.0.floor().to_integer()
    }
}

impl fmt::Display for Rat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_integer() {
            write!(f, "{}", self.0.numer())
        } else {
            write!(f, "{}/{}", self.0.numer(), self.0.denom())
        }
    }
}

impl fmt::Debug for Rat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self)
    }
}

impl FromStr for Rat {
    type Err = Error;

    fn from_str(s: &str) -> Result<Rat> {
        let s = s.trim();
        let (num, den) = match s.split_once('/') {
            Some((n, d)) => (n.trim(), d.trim()),
            None => (s, "1"),
        };
        let num =
            BigInt::from_str(num).map_err(|_| Error::input(format!("invalid rational {s:?}")))?;
        let den =
            BigInt::from_str(den).map_err(|_| Error::input(format!("invalid rational {s:?}")))?;
        Rat::from_parts(num, den)
    }
}

impl Serialize for Rat {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for Rat {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Rat, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

macro_rules! rat_binop {
    ($trait:ident, $method:ident) => {
        impl $trait for &Rat {
            type Output = Rat;
            fn $method(self, rhs: &Rat) -> Rat {
                Rat((&self.0).$method(&rhs.0))
            }
        }
        impl $trait for Rat {
            type Output = Rat;
            fn $method(self, rhs: Rat) -> Rat {
                Rat(self.0.$method(rhs.0))
            }
        }
    };
}

rat_binop!(Add, add);
rat_binop!(Sub, sub);
rat_binop!(Mul, mul);

impl Div for &Rat {
    type Output = Rat;
    fn div(self, rhs: &Rat) -> Rat {
        assert!(!rhs.is_zero(), "division by zero");
        Rat(&self.0 / &rhs.0)
    }
}

impl Neg for &Rat {
    type Output = Rat;
    fn neg(self) -> Rat {
        Rat(-&self.0)
    }
}

impl Neg for Rat {
    type Output = Rat;
    fn neg(self) -> Rat {
        Rat(-self.0)
    }
}

/// Convenience constructor used pervasively in tests: `rat(3, 2)` is 3/2.
pub fn rat(num: i64, den: i64) -> Rat {
    Rat::new(num, den).expect("nonzero denominator")
}

/// A place of ℚ: a finite prime or the archimedean place.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Valuation {
    #[serde(rename = "finite")]
    Finite(u64),
    #[serde(rename = "infinite")]
    Infinite,
}

impl Valuation {
    pub fn finite(p: u64) -> Result<Valuation> {
        if !is_prime(p) {
            return Err(Error::input(format!("{p} is not prime")));
        }
        Ok(Valuation::Finite(p))
    }
}

impl fmt::Display for Valuation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Valuation::Finite(p) => write!(f, "{p}"),
            Valuation::Infinite => write!(f, "inf"),
        }
    }
}

/// Deterministic trial-division primality test.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    if n % 2 == 0 {
        return n == 2;
    }
    let mut d = 3u64;
    while d.saturating_mul(d) <= n {
        if n % d == 0 {
            return false;
        }
        d += 2;
    }
    true
}

/// Primes up to and including `bound`, ascending.
pub fn primes_up_to(bound: u64) -> Vec<u64> {
    (2..=bound).filter(|&n| is_prime(n)).collect()
}

/// Trial-division factorization of a positive integer into (prime, exponent)
/// pairs, ascending by prime.
pub fn factorize(mut n: u64) -> Result<Vec<(u64, u32)>> {
    if n == 0 {
        return Err(Error::input("cannot factorize zero"));
    }
    let mut out = Vec::new();
    let mut d = 2u64;
    while d.saturating_mul(d) <= n {
        if n % d == 0 {
            let mut e = 0;
            while n % d == 0 {
                n /= d;
                e += 1;
            }
            out.push((d, e));
        }
        d += if d == 2 { 1 } else { 2 };
    }
    if n > 1 {
        out.push((n, 1));
    }
    Ok(out)
}

fn bigint_to_u64(n: &BigInt) -> Result<u64> {
    n.to_u64()
        .ok_or_else(|| Error::input("integer too large for exact factorization"))
}

/// Multiplicity of the prime `p` in the nonzero integer `n`.
fn int_multiplicity(p: u64, n: &BigInt) -> i64 {
    let p = BigInt::from(p);
    let mut n = n.abs();
    let mut e = 0;
    while (&n % &p).is_zero() {
        n /= &p;
        e += 1;
    }
    e
}

/// The p-adic valuation v_p(x): the unique e with x = p^e·(a/b) and
/// gcd(p, ab) = 1.
pub fn vp(p: u64, x: &Rat) -> Result<i64> {
    if !is_prime(p) {
        return Err(Error::input(format!("{p} is not prime")));
    }
    if x.is_zero() {
        return Err(Error::domain("valuation undefined at zero"));
    }
    Ok(int_multiplicity(p, x.numer()) - int_multiplicity(p, x.denom()))
}

/// |x| at a place: p^(−v_p(x)) at a finite prime, the usual absolute value
/// at infinity; |0| = 0 everywhere. Exact in all cases.
pub fn abs_at(place: Valuation, x: &Rat) -> Result<Rat> {
    if x.is_zero() {
        return Ok(Rat::zero());
    }
    match place {
        Valuation::Infinite => Ok(x.abs()),
        Valuation::Finite(p) => {
            let e = vp(p, x)?;
            Rat::from_int(p as i64).pow(-e)
        }
    }
}

/// Per-place factors and verdict of the product formula for one rational.
#[derive(Debug, Clone, Serialize)]
pub struct ProductFormulaReport {
    pub value: Rat,
    /// (p, |x|_p) for each prime dividing numerator·denominator.
    pub factors: Vec<(u64, Rat)>,
    pub finite_product: Rat,
    pub archimedean: Rat,
    pub holds: bool,
}

/// Checks Π_p |x|_p = 1/|x|_∞ exactly, over the primes dividing the
/// numerator and denominator (all other factors are 1).
pub fn product_formula_check(x: &Rat) -> Result<ProductFormulaReport> {
    if x.is_zero() {
        return Err(Error::domain("product formula undefined at zero"));
    }
    let num = bigint_to_u64(&x.numer().abs())?;
    let den = bigint_to_u64(x.denom())?;
    let mut primes: Vec<u64> = factorize(num)?.into_iter().map(|(p, _)| p).collect();
    for (p, _) in factorize(den)? {
        if !primes.contains(&p) {
            primes.push(p);
        }
    }
    primes.sort_unstable();
    let mut factors = Vec::new();
    let mut finite_product = Rat::one();
    for p in primes {
        let f = abs_at(Valuation::Finite(p), x)?;
        finite_product = &finite_product * &f;
        factors.push((p, f));
    }
    let archimedean = abs_at(Valuation::Infinite, x)?;
    let holds = finite_product == archimedean.recip()?;
    Ok(ProductFormulaReport {
        value: x.clone(),
        factors,
        finite_product,
        archimedean,
        holds,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn vp_examples() {
        assert_eq!(vp(2, &rat(12, 1)).unwrap(), 2);
        assert_eq!(vp(3, &rat(6, 5)).unwrap(), 1);
        assert_eq!(vp(5, &rat(6, 5)).unwrap(), -1);
        assert_eq!(vp(7, &rat(3, 1)).unwrap(), 0);
    }

    #[test]
    fn vp_rejects_zero_and_composites() {
        assert!(matches!(vp(2, &Rat::zero()), Err(Error::Domain(_))));
        assert!(matches!(vp(4, &rat(1, 1)), Err(Error::Input(_))));
        assert!(matches!(vp(1, &rat(1, 1)), Err(Error::Input(_))));
    }

    #[test]
    fn abs_examples() {
        assert_eq!(
            abs_at(Valuation::Finite(2), &rat(12, 1)).unwrap(),
            rat(1, 4)
        );
        assert_eq!(abs_at(Valuation::Infinite, &rat(-3, 2)).unwrap(), rat(3, 2));
        assert_eq!(abs_at(Valuation::Finite(7), &rat(3, 1)).unwrap(), rat(1, 1));
        assert_eq!(
            abs_at(Valuation::Finite(5), &Rat::zero()).unwrap(),
            Rat::zero()
        );
    }

    #[test]
    fn product_formula_examples() {
        let unit = product_formula_check(&rat(1, 1)).unwrap();
        assert!(unit.holds);
        assert!(unit.factors.is_empty());

        let r = product_formula_check(&rat(6, 5)).unwrap();
        assert!(r.holds);
        assert_eq!(
            r.factors,
            vec![(2, rat(1, 2)), (3, rat(1, 3)), (5, rat(5, 1))]
        );
        assert_eq!(r.finite_product, rat(5, 6));

        let r = product_formula_check(&rat(-12, 1)).unwrap();
        assert!(r.holds);
        assert_eq!(r.finite_product, rat(1, 12));

        assert!(product_formula_check(&Rat::zero()).is_err());
    }

    #[test]
    fn rat_parse_display_roundtrip() {
        for s in ["3/2", "-7", "0", "22/7", "-5/9"] {
            let r: Rat = s.parse().unwrap();
            assert_eq!(r.to_string(), s);
        }
        assert_eq!("4/6".parse::<Rat>().unwrap(), rat(2, 3));
        assert!("1/0".parse::<Rat>().is_err());
        assert!("x".parse::<Rat>().is_err());
    }

    fn arb_nonzero_rat() -> impl Strategy<Value = Rat> {
        (
            (-1_000_000i64..=1_000_000).prop_filter("nonzero", |n| *n != 0),
            1i64..=1_000_000,
        )
            .prop_map(|(n, d)| rat(n, d))
    }

    proptest! {
        #[test]
        fn vp_is_additive(x in arb_nonzero_rat(), y in arb_nonzero_rat(), pi in 0usize..4) {
            let p = [2u64, 3, 5, 7][pi];
            let xy = &x * &y;
            prop_assert_eq!(vp(p, &xy).unwrap(), vp(p, &x).unwrap() + vp(p, &y).unwrap());
        }

        #[test]
        fn vp_is_ultrametric(x in arb_nonzero_rat(), y in arb_nonzero_rat(), pi in 0usize..4) {
            let p = [2u64, 3, 5, 7][pi];
            let s = &x + &y;
            if !s.is_zero() {
                prop_assert!(vp(p, &s).unwrap() >= vp(p, &x).unwrap().min(vp(p, &y).unwrap()));
            }
        }

        #[test]
        fn product_formula_randomized(x in arb_nonzero_rat()) {
            prop_assert!(product_formula_check(&x).unwrap().holds);
        }
    }
}
