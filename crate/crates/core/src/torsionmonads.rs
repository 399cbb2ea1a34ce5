//! The cyclotomic extensions 𝔽_{1ⁿ} and the residue field 𝔽_∞.
//!
//! 𝔽_{1ⁿ}(m) = {0} ⊔ (μ_n × m): an element is either the zero constant or a
//! root of unity attached to one slot. 𝔽_∞ is the residue field of the
//! archimedean valuation ring; its n-ary operations are sign classes of
//! boundary octahedral combinations, with the interior collapsing to zero.
//!
//! 𝔽_{1^∞} is never materialized — only finite-order truncations and the
//! order-raising embeddings between them exist here.

use std::fmt;

use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::exactnum::Rat;

/// An operation of 𝔽_{1ⁿ}: zero, or ζ_n^exp placed on one slot.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct CycElement {
    /// Order n of the root of unity (n ≥ 1).
    pub n: u32,
    pub arity: usize,
    /// None encodes the zero constant; otherwise (slot, exponent) with the
    /// slot 1-based and the exponent reduced mod n.
    pub value: Option<(usize, u32)>,
}

impl CycElement {
    pub fn zero(n: u32, arity: usize) -> Result<CycElement> {
        if n == 0 {
            return Err(Error::input("order must be ≥ 1"));
        }
        Ok(CycElement {
            n,
            arity,
            value: None,
        })
    }

    pub fn root(n: u32, arity: usize, index: usize, exp: u32) -> Result<CycElement> {
        if n == 0 {
            return Err(Error::input("order must be ≥ 1"));
        }
        if index == 0 || index > arity {
            return Err(Error::input(format!(
                "index {index} out of range 1..={arity}"
            )));
        }
        Ok(CycElement {
            n,
            arity,
            value: Some((index, exp % n)),
        })
    }

    pub fn unit(n: u32) -> CycElement {
        CycElement {
            n,
            arity: 1,
            value: Some((1, 0)),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.value.is_none()
    }
}

impl Serialize for CycElement {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        use serde::ser::SerializeMap;
        let mut m = serializer.serialize_map(None)?;
        m.serialize_entry("n", &self.n)?;
        m.serialize_entry("arity", &self.arity)?;
        match self.value {
            None => m.serialize_entry("zero", &true)?,
            Some((index, exp)) => {
                m.serialize_entry("index", &index)?;
                m.serialize_entry("exp", &exp)?;
            }
        }
        m.end()
    }
}

impl<'de> Deserialize<'de> for CycElement {
    fn deserialize<D: Deserializer<'de>>(
        deserializer: D,
    ) -> std::result::Result<CycElement, D::Error> {
        #[derive(Deserialize)]
        struct Raw {
            n: u32,
            arity: usize,
            #[serde(default)]
            zero: bool,
            index: Option<usize>,
            exp: Option<u32>,
        }
        let raw = Raw::deserialize(deserializer)?;
        if raw.zero {
            return CycElement::zero(raw.n, raw.arity).map_err(D::Error::custom);
        }
        match (raw.index, raw.exp) {
            (Some(i), Some(e)) => {
                CycElement::root(raw.n, raw.arity, i, e).map_err(D::Error::custom)
            }
            _ => Err(D::Error::custom("expected zero:true or index/exp")),
        }
    }
}

impl fmt::Display for CycElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.value {
            None => write!(f, "0"),
            Some((i, e)) => write!(f, "{i}:{e}"),
        }
    }
}

/// Substitution in 𝔽_{1ⁿ}: zero absorbs, otherwise the selected argument is
/// taken and exponents add mod n.
pub fn cyc_substitute(t: &CycElement, args: &[CycElement]) -> Result<CycElement> {
    if args.len() != t.arity {
        return Err(Error::input(format!(
            "arity mismatch: operation expects {} arguments, got {}",
            t.arity,
            args.len()
        )));
    }
    let m = args.first().map_or(0, |a| a.arity);
    for a in args {
        if a.n != t.n {
            return Err(Error::input("order mismatch in substitution"));
        }
        if a.arity != m {
            return Err(Error::input("arguments must share one arity"));
        }
    }
    let (idx, exp) = match t.value {
        None => return CycElement::zero(t.n, m),
        Some(v) => v,
    };
    let chosen = &args[idx - 1];
    match chosen.value {
        None => CycElement::zero(t.n, m),
        Some((j, e)) => CycElement::root(t.n, m, j, (exp + e) % t.n),
    }
}

/// Relabeling along φ: {1..arity} → {1..m}. Well defined for any φ since an
/// element touches a single slot.
pub fn cyc_induced(phi: &[usize], t: &CycElement, m: usize) -> Result<CycElement> {
    if phi.len() != t.arity {
        return Err(Error::input("φ must be total on the element's arity"));
    }
    match t.value {
        None => CycElement::zero(t.n, m),
        Some((i, e)) => {
            let j = phi[i - 1];
            if j == 0 || j > m {
                return Err(Error::input(format!("φ({i}) = {j} out of range 1..={m}")));
            }
            CycElement::root(t.n, m, j, e)
        }
    }
}

/// The embedding 𝔽_{1ⁿ} → 𝔽_{1^{nm}} realizing ζ_n ↦ ζ_{nm}^m.
pub fn f1inf_embed(t: &CycElement, m: u32) -> Result<CycElement> {
    if m == 0 {
        return Err(Error::input("embedding multiplier must be ≥ 1"));
    }
    let order = t.n * m;
    match t.value {
        None => CycElement::zero(order, t.arity),
        Some((i, e)) => CycElement::root(order, t.arity, i, (e * m) % order),
    }
}

/// An operation of 𝔽_∞: the sign class of a boundary octahedral
/// combination. The all-zero vector is the class of 0.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct SignClass {
    /// Entries in {−1, 0, +1}.
    pub signs: Vec<i8>,
}

impl SignClass {
    pub fn new(signs: Vec<i8>) -> Result<SignClass> {
        if signs.iter().any(|s| !(-1..=1).contains(s)) {
            return Err(Error::input("signs must be −1, 0 or +1"));
        }
        Ok(SignClass { signs })
    }

    pub fn zero(arity: usize) -> SignClass {
        SignClass {
            signs: vec![0; arity],
        }
    }

    pub fn unit() -> SignClass {
        SignClass { signs: vec![1] }
    }

    pub fn arity(&self) -> usize {
        self.signs.len()
    }

    pub fn is_zero(&self) -> bool {
        self.signs.iter().all(|&s| s == 0)
    }

    /// The canonical representative: every nonzero sign carries magnitude
    /// 1/(number of nonzero signs), so the ℓ1 mass is exactly 1 for nonzero
    /// classes.
    pub fn canonical_rep(&self) -> Vec<Rat> {
        let nonzero = self.signs.iter().filter(|&&s| s != 0).count() as i64;
        self.signs
            .iter()
            .map(|&s| {
                if s == 0 {
                    Rat::zero()
                } else {
                    crate::exactnum::rat(s as i64, nonzero)
                }
            })
            .collect()
    }
}

impl fmt::Display for SignClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, s) in self.signs.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(
                f,
                "{}",
                match s {
                    -1 => "-",
                    0 => "0",
                    _ => "+",
                }
            )?;
        }
        Ok(())
    }
}

/// The quotient map ℤ_(∞) → 𝔽_∞ on octahedral vectors: interior points
/// (Σ|v| < 1) collapse to zero, boundary points keep their sign pattern.
pub fn finf_classify(v: &[Rat]) -> Result<SignClass> {
    let mass = v.iter().fold(Rat::zero(), |acc, x| &acc + &x.abs());
    if mass > Rat::one() {
        return Err(Error::input(format!(
            "ℓ1 mass {mass} exceeds 1; not an octahedral combination"
        )));
    }
    if mass < Rat::one() {
        return Ok(SignClass::zero(v.len()));
    }
    Ok(SignClass {
        signs: v.iter().map(Rat::signum).collect(),
    })
}

/// Substitution in 𝔽_∞: lift to canonical representatives, substitute
/// exactly, classify the result.
pub fn finf_substitute(t: &SignClass, args: &[SignClass]) -> Result<SignClass> {
    if args.len() != t.arity() {
        return Err(Error::input(format!(
            "arity mismatch: operation expects {} arguments, got {}",
            t.arity(),
            args.len()
        )));
    }
    let m = args.first().map_or(0, SignClass::arity);
    if args.iter().any(|a| a.arity() != m) {
        return Err(Error::input("arguments must share one arity"));
    }
    let tv = t.canonical_rep();
    let mut out = vec![Rat::zero(); m];
    for (ti, arg) in tv.iter().zip(args) {
        let av = arg.canonical_rep();
        for (j, aj) in av.iter().enumerate() {
            out[j] = &out[j] + &(ti * aj);
        }
    }
    finf_classify(&out)
}

/// The induced map Σ(φ) on 𝔽_∞: merge representative coefficients along φ
/// and re-classify.
pub fn finf_induced(phi: &[usize], t: &SignClass, m: usize) -> Result<SignClass> {
    if phi.len() != t.arity() {
        return Err(Error::input("φ must be total on the element's arity"));
    }
    let tv = t.canonical_rep();
    let mut out = vec![Rat::zero(); m];
    for (i, &j) in phi.iter().enumerate() {
        if j == 0 || j > m {
            return Err(Error::input(format!(
                "φ({}) = {j} out of range 1..={m}",
                i + 1
            )));
        }
        out[j - 1] = &out[j - 1] + &tv[i];
    }
    finf_classify(&out)
}

/// All sign classes of a given arity (3^arity of them).
pub fn finf_enumerate(arity: usize) -> Vec<SignClass> {
    let mut out = Vec::with_capacity(3usize.pow(arity as u32));
    let mut current = vec![-1i8; arity];
    loop {
        out.push(SignClass {
            signs: current.clone(),
        });
        let mut i = 0;
        loop {
            if i == arity {
                out.sort();
                return out;
            }
            if current[i] < 1 {
                current[i] += 1;
                break;
            }
            current[i] = -1;
            i += 1;
        }
    }
}

/// All elements of 𝔽_{1ⁿ}(arity): zero plus n·arity roots.
pub fn cyc_enumerate(n: u32, arity: usize) -> Vec<CycElement> {
    let mut out = vec![CycElement::zero(n, arity).unwrap()];
    for i in 1..=arity {
        for e in 0..n {
            out.push(CycElement::root(n, arity, i, e).unwrap());
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coeffmonads::{substitute as coeff_substitute, CoeffMonad, Element};
    use crate::exactnum::rat;
    use rand::Rng;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn cyc_substitute_examples() {
        let t = CycElement::root(4, 1, 1, 1).unwrap();
        let a = CycElement::root(4, 2, 2, 3).unwrap();
        let r = cyc_substitute(&t, &[a]).unwrap();
        assert_eq!(r, CycElement::root(4, 2, 2, 0).unwrap());

        let z = CycElement::zero(4, 2).unwrap();
        let args = [
            CycElement::root(4, 3, 1, 1).unwrap(),
            CycElement::root(4, 3, 2, 2).unwrap(),
        ];
        assert_eq!(
            cyc_substitute(&z, &args).unwrap(),
            CycElement::zero(4, 3).unwrap()
        );

        let bad = CycElement::root(3, 1, 1, 1).unwrap();
        assert!(cyc_substitute(&t, &[bad]).is_err());
    }

    /// The order-2 cyclotomic picture and the coefficient picture of 𝔽_{1²}
    /// (ζ ↦ −1) compute the same substitutions, exhaustively at arity ≤ 3.
    #[test]
    fn order_two_matches_f12() {
        use itertools::Itertools;
        fn to_coeff(c: &CycElement) -> Element {
            let mut v = vec![rat(0, 1); c.arity];
            if let Some((i, e)) = c.value {
                v[i - 1] = if e == 0 { rat(1, 1) } else { rat(-1, 1) };
            }
            Element::new(CoeffMonad::F12, v).unwrap()
        }
        for k in 1..=3usize {
            for m in 1..=3usize {
                let pool = cyc_enumerate(2, m);
                for t in cyc_enumerate(2, k) {
                    for args in (0..k).map(|_| pool.iter()).multi_cartesian_product() {
                        let args: Vec<CycElement> = args.into_iter().cloned().collect();
                        let lhs = to_coeff(&cyc_substitute(&t, &args).unwrap());
                        let cargs: Vec<Element> = args.iter().map(to_coeff).collect();
                        let rhs = coeff_substitute(&to_coeff(&t), &cargs).unwrap();
                        assert_eq!(lhs, rhs);
                    }
                }
            }
        }
    }

    #[test]
    fn embed_examples() {
        let t = CycElement::root(2, 1, 1, 1).unwrap();
        assert_eq!(
            f1inf_embed(&t, 2).unwrap(),
            CycElement::root(4, 1, 1, 2).unwrap()
        );

        let t = CycElement::root(3, 2, 2, 2).unwrap();
        assert_eq!(f1inf_embed(&t, 1).unwrap(), t);
    }

    #[test]
    fn embed_commutes_with_substitution() {
        for n in 1..=4u32 {
            for m in 1..=3u32 {
                for ar in 1..=2usize {
                    for t in cyc_enumerate(n, 1) {
                        for a in cyc_enumerate(n, ar) {
                            let lhs =
                                f1inf_embed(&cyc_substitute(&t, &[a.clone()]).unwrap(), m).unwrap();
                            let rhs = cyc_substitute(
                                &f1inf_embed(&t, m).unwrap(),
                                &[f1inf_embed(&a, m).unwrap()],
                            )
                            .unwrap();
                            assert_eq!(lhs, rhs);
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn cyc_json_shape() {
        let t = CycElement::root(4, 2, 1, 3).unwrap();
        let json = serde_json::to_string(&t).unwrap();
        assert_eq!(json, r#"{"n":4,"arity":2,"index":1,"exp":3}"#);
        assert_eq!(serde_json::from_str::<CycElement>(&json).unwrap(), t);
        let z = CycElement::zero(4, 2).unwrap();
        let json = serde_json::to_string(&z).unwrap();
        assert_eq!(json, r#"{"n":4,"arity":2,"zero":true}"#);
        assert_eq!(serde_json::from_str::<CycElement>(&json).unwrap(), z);
        // SignClass keeps the plain signs array.
        let s = SignClass::new(vec![-1, 0, 1]).unwrap();
        assert_eq!(serde_json::to_string(&s).unwrap(), r#"{"signs":[-1,0,1]}"#);
    }

    #[test]
    fn classify_examples() {
        assert_eq!(
            finf_classify(&[rat(1, 2), rat(1, 2)]).unwrap(),
            SignClass::new(vec![1, 1]).unwrap()
        );
        assert_eq!(
            finf_classify(&[rat(1, 3), rat(1, 3)]).unwrap(),
            SignClass::zero(2)
        );
        assert_eq!(
            finf_classify(&[rat(-1, 1)]).unwrap(),
            SignClass::new(vec![-1]).unwrap()
        );
        assert!(finf_classify(&[rat(2, 1)]).is_err());
    }

    #[test]
    fn star_examples() {
        let star = SignClass::new(vec![1, 1]).unwrap();
        let plus = SignClass::new(vec![1]).unwrap();
        let minus = SignClass::new(vec![-1]).unwrap();
        let zero = SignClass::zero(1);
        assert_eq!(
            finf_substitute(&star, &[plus.clone(), minus]).unwrap(),
            zero
        );
        assert_eq!(
            finf_substitute(&star, &[plus.clone(), plus.clone()]).unwrap(),
            plus
        );
        assert_eq!(finf_substitute(&star, &[plus, zero.clone()]).unwrap(), zero);
    }

    /// The ∗ identities hold exhaustively over sign classes at arity ≤ 3.
    #[test]
    fn star_identities_exhaustive() {
        let star = SignClass::new(vec![1, 1]).unwrap();
        for ar in 0..=3usize {
            let classes = finf_enumerate(ar);
            let neg = |x: &SignClass| SignClass {
                signs: x.signs.iter().map(|s| -s).collect(),
            };
            let s = |x: &SignClass, y: &SignClass| {
                finf_substitute(&star, &[x.clone(), y.clone()]).unwrap()
            };
            let zero = SignClass::zero(ar);
            assert_eq!(s(&zero, &zero), zero);
            for x in &classes {
                assert_eq!(s(x, &zero), zero);
                assert_eq!(s(x, x), *x);
                assert_eq!(s(x, &neg(x)), zero);
                for y in &classes {
                    assert_eq!(s(&neg(x), &neg(y)), neg(&s(x, y)));
                    assert_eq!(s(x, y), s(y, x));
                    for z in &classes {
                        assert_eq!(s(&s(x, y), z), s(x, &s(y, z)));
                    }
                }
            }
        }
    }

    #[test]
    fn induced_examples() {
        let t = SignClass::new(vec![1, -1]).unwrap();
        assert_eq!(finf_induced(&[1, 1], &t, 1).unwrap(), SignClass::zero(1));
        let t = SignClass::new(vec![1, 1]).unwrap();
        assert_eq!(
            finf_induced(&[1, 1], &t, 1).unwrap(),
            SignClass::new(vec![1]).unwrap()
        );
        assert_eq!(finf_induced(&[1, 2], &t, 2).unwrap(), t);
    }

    /// The canonical magnitudes 1/(#nonzero) are immaterial: any positive
    /// rational magnitudes summing to 1 classify substitution results the
    /// same way.
    #[test]
    fn representative_independence() {
        let mut rng = ChaCha8Rng::seed_from_u64(23);
        let random_rep = |s: &SignClass, rng: &mut ChaCha8Rng| -> Vec<Rat> {
            let nz: Vec<usize> = (0..s.arity()).filter(|&i| s.signs[i] != 0).collect();
            if nz.is_empty() {
                return vec![Rat::zero(); s.arity()];
            }
            let weights: Vec<i64> = nz.iter().map(|_| rng.random_range(1..=9i64)).collect();
            let total: i64 = weights.iter().sum();
            let mut v = vec![Rat::zero(); s.arity()];
            for (pos, w) in nz.iter().zip(weights) {
                v[*pos] = rat(s.signs[*pos] as i64 * w, total);
            }
            v
        };
        for _ in 0..200 {
            let k = rng.random_range(1..=3usize);
            let m = rng.random_range(1..=3usize);
            let classes_k = finf_enumerate(k);
            let classes_m = finf_enumerate(m);
            let t = classes_k[rng.random_range(0..classes_k.len())].clone();
            let args: Vec<SignClass> = (0..k)
                .map(|_| classes_m[rng.random_range(0..classes_m.len())].clone())
                .collect();
            let canonical = finf_substitute(&t, &args).unwrap();
            // Substitute with random representatives instead.
            let tv = random_rep(&t, &mut rng);
            let mut out = vec![Rat::zero(); m];
            for (ti, arg) in tv.iter().zip(&args) {
                let av = random_rep(arg, &mut rng);
                for (j, aj) in av.iter().enumerate() {
                    out[j] = &out[j] + &(ti * aj);
                }
            }
            assert_eq!(finf_classify(&out).unwrap(), canonical);

            // Same for merging along a random φ.
            let phi: Vec<usize> = (0..k).map(|_| rng.random_range(1..=m)).collect();
            let canonical = finf_induced(&phi, &t, m).unwrap();
            let tv = random_rep(&t, &mut rng);
            let mut out = vec![Rat::zero(); m];
            for (i, &j) in phi.iter().enumerate() {
                out[j - 1] = &out[j - 1] + &tv[i];
            }
            assert_eq!(finf_classify(&out).unwrap(), canonical);
        }
    }

    #[test]
    fn cyc_monad_laws_exhaustive() {
        for n in 1..=6u32 {
            for k in 1..=3usize {
                for t in cyc_enumerate(n, k) {
                    // Unit and projection laws.
                    let e = CycElement::unit(n);
                    assert_eq!(cyc_substitute(&e, std::slice::from_ref(&t)).unwrap(), t);
                    let projs: Vec<CycElement> = (1..=k)
                        .map(|i| CycElement::root(n, k, i, 0).unwrap())
                        .collect();
                    assert_eq!(cyc_substitute(&t, &projs).unwrap(), t);
                }
            }
            // Associativity, exhaustively over the (2, 2, 1) shape.
            for t in cyc_enumerate(n, 2) {
                for s1 in cyc_enumerate(n, 2) {
                    for s2 in cyc_enumerate(n, 2) {
                        for r1 in cyc_enumerate(n, 1) {
                            for r2 in cyc_enumerate(n, 1) {
                                let ss = [s1.clone(), s2.clone()];
                                let rs = [r1.clone(), r2.clone()];
                                let lhs =
                                    cyc_substitute(&cyc_substitute(&t, &ss).unwrap(), &rs).unwrap();
                                let inner: Vec<CycElement> =
                                    ss.iter().map(|s| cyc_substitute(s, &rs).unwrap()).collect();
                                let rhs = cyc_substitute(&t, &inner).unwrap();
                                assert_eq!(lhs, rhs);
                            }
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn finf_monad_laws_randomized() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        for _ in 0..200 {
            let k = rng.random_range(1..=3usize);
            let n = rng.random_range(1..=3usize);
            let p = rng.random_range(1..=3usize);
            let pick = |ar: usize, rng: &mut ChaCha8Rng| {
                let cs = finf_enumerate(ar);
                cs[rng.random_range(0..cs.len())].clone()
            };
            let t = pick(k, &mut rng);
            assert_eq!(
                finf_substitute(&SignClass::unit(), std::slice::from_ref(&t)).unwrap(),
                t
            );
            let projs: Vec<SignClass> = (1..=k)
                .map(|i| {
                    let mut signs = vec![0i8; k];
                    signs[i - 1] = 1;
                    SignClass { signs }
                })
                .collect();
            assert_eq!(finf_substitute(&t, &projs).unwrap(), t);
            let ss: Vec<SignClass> = (0..k).map(|_| pick(n, &mut rng)).collect();
            let rs: Vec<SignClass> = (0..n).map(|_| pick(p, &mut rng)).collect();
            let lhs = finf_substitute(&finf_substitute(&t, &ss).unwrap(), &rs).unwrap();
            let inner: Vec<SignClass> = ss
                .iter()
                .map(|s| finf_substitute(s, &rs).unwrap())
                .collect();
            let rhs = finf_substitute(&t, &inner).unwrap();
            assert_eq!(lhs, rhs);
        }
    }

    /// π_2 is not injective on 𝔽_∞: the class (+,+) and the zero class have
    /// the same comparison image.
    #[test]
    fn pi2_non_injectivity_witness() {
        let plus_plus = SignClass::new(vec![1, 1]).unwrap();
        let zero2 = SignClass::zero(2);
        let pi = |t: &SignClass| -> Vec<SignClass> {
            (1..=2)
                .map(|k| {
                    let args: Vec<SignClass> = (1..=2)
                        .map(|j| {
                            if j == k {
                                SignClass::unit()
                            } else {
                                SignClass::zero(1)
                            }
                        })
                        .collect();
                    finf_substitute(t, &args).unwrap()
                })
                .collect()
        };
        assert_eq!(pi(&plus_plus), pi(&zero2));
        assert_ne!(plus_plus, zero2);
    }
}
