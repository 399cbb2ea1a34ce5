//! Line bundles and Picard groups of the compactified spectra, archimedean
//! lattices with convex-body norms, lattice-point counting, Minkowski
//! checks, and models of ℚ-varieties over the rational archimedean
//! valuation ring.
//!
//! All bodies are restricted to shapes with exact membership and exactly
//! comparable volume: octahedra and boxes are fully rational, ellipsoid
//! comparisons reduce to comparing a rational against π², which is decided
//! through tight rational bounds on π.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_traits::Signed;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::exactnum::{factorize, Rat};

/// A finitely supported prime → exponent map: the multiplicative notation
/// Π p^e for a positive rational, and the additive notation for Picard
/// classes.
#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize)]
pub struct FactorVec(pub BTreeMap<u64, i64>);

impl FactorVec {
    pub fn zero() -> FactorVec {
        FactorVec(BTreeMap::new())
    }

    pub fn insert(&mut self, p: u64, e: i64) {
        if e == 0 {
            self.0.remove(&p);
        } else {
            self.0.insert(p, e);
        }
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    /// Group law (tensor product of line bundles): exponents add.
    pub fn add(&self, other: &FactorVec) -> FactorVec {
        let mut out = self.clone();
        for (&p, &e) in &other.0 {
            let cur = out.0.get(&p).copied().unwrap_or(0);
            out.insert(p, cur + e);
        }
        out
    }

    /// Inverse (dual bundle): exponents negate.
    pub fn neg(&self) -> FactorVec {
        FactorVec(self.0.iter().map(|(&p, &e)| (p, -e)).collect())
    }

    /// The positive rational Π p^e this vector denotes.
    pub fn value(&self) -> Result<Rat> {
        let mut out = Rat::one();
        for (&p, &e) in &self.0 {
            out = &out * &Rat::from_int(p as i64).pow(e)?;
        }
        Ok(out)
    }
}

impl fmt::Display for FactorVec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return write!(f, "1");
        }
        for (i, (p, e)) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, " * ")?;
            }
            if *e == 1 {
                write!(f, "{p}")?;
            } else {
                write!(f, "{p}^{e}")?;
            }
        }
        Ok(())
    }
}

/// The Picard group of the level-N compactification: free abelian on
/// O(log p) for the primes p dividing N.
#[derive(Debug, Clone, Serialize)]
pub struct PicGroup {
    pub n: u64,
    pub primes: Vec<u64>,
}

impl PicGroup {
    pub fn rank(&self) -> usize {
        self.primes.len()
    }

    pub fn basis(&self) -> Vec<String> {
        self.primes.iter().map(|p| format!("log {p}")).collect()
    }

    /// Validates that a class is supported on the primes dividing N.
    pub fn element(&self, v: FactorVec) -> Result<FactorVec> {
        for p in v.0.keys() {
            if !self.primes.contains(p) {
                return Err(Error::input(format!(
                    "class mentions {p}, which does not divide {}",
                    self.n
                )));
            }
        }
        Ok(v)
    }

    pub fn tensor(&self, a: &FactorVec, b: &FactorVec) -> FactorVec {
        a.add(b)
    }

    pub fn inverse(&self, a: &FactorVec) -> FactorVec {
        a.neg()
    }

    pub fn is_trivial(&self, a: &FactorVec) -> bool {
        a.is_zero()
    }
}

/// Pic of the level-N space.
pub fn pic_group(n: u64) -> Result<PicGroup> {
    if n <= 1 {
        return Err(Error::input("level must exceed 1"));
    }
    let primes: Vec<u64> = factorize(n)?.into_iter().map(|(p, _)| p).collect();
    Ok(PicGroup { n, primes })
}

/// The limit isomorphism: a positive rational as its prime-exponent vector.
pub fn pic_limit_element(x: &Rat) -> Result<FactorVec> {
    if !x.is_positive() {
        return Err(Error::input(
            "Picard classes of the limit are positive rationals",
        ));
    }
    let mut out = FactorVec::zero();
    let num: u64 = x
        .numer()
        .magnitude()
        .try_into()
        .map_err(|_| Error::input("numerator too large for exact factorization"))?;
    let den: u64 = x
        .denom()
        .magnitude()
        .try_into()
        .map_err(|_| Error::input("denominator too large for exact factorization"))?;
    for (p, e) in factorize(num)? {
        out.insert(p, e as i64);
    }
    for (p, e) in factorize(den)? {
        let cur = out.0.get(&p).copied().unwrap_or(0);
        out.insert(p, cur - e as i64);
    }
    Ok(out)
}

/// Rank-1 projective modules over A_N are free, so every rank-1 gluing
/// datum yields the trivial bundle; rank ≠ 1 is rejected.
pub fn line_bundle_trivial_an(_n: u64, rank: usize, _gluing: &Rat) -> Result<bool> {
    if rank != 1 {
        return Err(Error::input(format!(
            "line-bundle triviality applies to rank 1, got rank {rank}"
        )));
    }
    Ok(true)
}

/// A convex compact symmetric body in dimension ≤ 3, in exact arithmetic.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub enum ConvexBody {
    /// Σ|x_i| ≤ r.
    Octahedron { dim: usize, r: Rat },
    /// |x_i| ≤ r_i.
    Box { half_widths: Vec<Rat> },
    /// xᵀQx ≤ 1 with Q symmetric positive-definite.
    Ellipsoid { q: Vec<Vec<Rat>> },
}

impl ConvexBody {
    pub fn octahedron(dim: usize, r: Rat) -> Result<ConvexBody> {
        if dim == 0 || dim > 3 {
            return Err(Error::input("dimension must be 1..=3"));
        }
        if !r.is_positive() {
            return Err(Error::input("radius must be positive"));
        }
        Ok(ConvexBody::Octahedron { dim, r })
    }

    pub fn cuboid(half_widths: Vec<Rat>) -> Result<ConvexBody> {
        if half_widths.is_empty() || half_widths.len() > 3 {
            return Err(Error::input("dimension must be 1..=3"));
        }
        if half_widths.iter().any(|r| !r.is_positive()) {
            return Err(Error::input("half-widths must be positive"));
        }
        Ok(ConvexBody::Box { half_widths })
    }

    pub fn ellipsoid(q: Vec<Vec<Rat>>) -> Result<ConvexBody> {
        let d = q.len();
        if d == 0 || d > 3 {
            return Err(Error::input("dimension must be 1..=3"));
        }
        if q.iter().any(|row| row.len() != d) {
            return Err(Error::input("Q must be square"));
        }
        for i in 0..d {
            for j in 0..d {
                if q[i][j] != q[j][i] {
                    return Err(Error::input("Q must be symmetric"));
                }
            }
        }
        // Positive-definiteness via leading principal minors.
        for k in 1..=d {
            let minor = det(&submatrix(&q, k));
            if !minor.is_positive() {
                return Err(Error::input(format!(
                    "Q is not positive-definite: leading minor {k} is {minor}"
                )));
            }
        }
        Ok(ConvexBody::Ellipsoid { q })
    }

    pub fn dim(&self) -> usize {
        match self {
            ConvexBody::Octahedron { dim, .. } => *dim,
            ConvexBody::Box { half_widths } => half_widths.len(),
            ConvexBody::Ellipsoid { q } => q.len(),
        }
    }
}

fn submatrix(q: &[Vec<Rat>], k: usize) -> Vec<Vec<Rat>> {
    q.iter()
        .take(k)
        .map(|row| row.iter().take(k).cloned().collect())
        .collect()
}

fn det(m: &[Vec<Rat>]) -> Rat {
    match m.len() {
        0 => Rat::one(),
        1 => m[0][0].clone(),
        2 => &(&m[0][0] * &m[1][1]) - &(&m[0][1] * &m[1][0]),
        3 => {
            let a = &m[0][0] * &(&(&m[1][1] * &m[2][2]) - &(&m[1][2] * &m[2][1]));
            let b = &m[0][1] * &(&(&m[1][0] * &m[2][2]) - &(&m[1][2] * &m[2][0]));
            let c = &m[0][2] * &(&(&m[1][0] * &m[2][1]) - &(&m[1][1] * &m[2][0]));
            &(&a - &b) + &c
        }
        _ => unreachable!("dimension capped at 3"),
    }
}

/// Inverse of a matrix of dimension ≤ 3 by adjugate over exact rationals.
fn inverse(q: &[Vec<Rat>]) -> Vec<Vec<Rat>> {
    let d = q.len();
    let dq = det(q);
    let mut inv = vec![vec![Rat::zero(); d]; d];
    for i in 0..d {
        for j in 0..d {
            let mut minor: Vec<Vec<Rat>> = Vec::new();
            for r in 0..d {
                if r == j {
                    continue;
                }
                let mut row = Vec::new();
                for c in 0..d {
                    if c == i {
                        continue;
                    }
                    row.push(q[r][c].clone());
                }
                minor.push(row);
            }
            let sign = if (i + j) % 2 == 0 { 1 } else { -1 };
            inv[i][j] = &(&Rat::from_int(sign) * &det(&minor)) / &dq;
        }
    }
    inv
}

/// A norm value: rational for octahedra and boxes, √q for ellipsoids (kept
/// as the exact square so comparisons against rational thresholds stay
/// exact).
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub enum NormValue {
    Exact(Rat),
    SqrtOf(Rat),
}

impl NormValue {
    pub fn is_zero(&self) -> bool {
        match self {
            NormValue::Exact(r) => r.is_zero(),
            NormValue::SqrtOf(r) => r.is_zero(),
        }
    }

    /// norm ≤ t, exactly.
    pub fn le(&self, t: &Rat) -> bool {
        match self {
            NormValue::Exact(r) => r <= t,
            NormValue::SqrtOf(r) => !t.is_negative() && *r <= t * t,
        }
    }

    pub fn lt(&self, t: &Rat) -> bool {
        match self {
            NormValue::Exact(r) => r < t,
            NormValue::SqrtOf(r) => !t.is_negative() && *r < t * t,
        }
    }

    pub fn display(&self) -> String {
        match self {
            NormValue::Exact(r) => r.to_string(),
            NormValue::SqrtOf(r) => format!("sqrt({r})"),
        }
    }
}

/// The gauge norm of a body: Octahedron(r) gives Σ|x_i|/r, Box the max of
/// |x_i|/r_i, Ellipsoid the square root of xᵀQx (returned as the exact
/// square).
pub fn body_norm(b: &ConvexBody, x: &[Rat]) -> Result<NormValue> {
    if x.len() != b.dim() {
        return Err(Error::input(format!(
            "dimension mismatch: body is {}-dimensional, vector is {}-dimensional",
            b.dim(),
            x.len()
        )));
    }
    Ok(match b {
        ConvexBody::Octahedron { r, .. } => {
            let mass = x.iter().fold(Rat::zero(), |acc, v| &acc + &v.abs());
            NormValue::Exact(&mass / r)
        }
        ConvexBody::Box { half_widths } => {
            let mut best = Rat::zero();
            for (v, r) in x.iter().zip(half_widths) {
                let q = &v.abs() / r;
                if q > best {
                    best = q;
                }
            }
            NormValue::Exact(best)
        }
        ConvexBody::Ellipsoid { q } => {
            let mut total = Rat::zero();
            for (i, xi) in x.iter().enumerate() {
                for (j, xj) in x.iter().enumerate() {
                    total = &total + &(&(xi * xj) * &q[i][j]);
                }
            }
            NormValue::SqrtOf(total)
        }
    })
}

/// A rank-d lattice ℤ^d paired with a convex symmetric body in ℝ^d.
#[derive(Debug, Clone, Serialize)]
pub struct ArakelovBundle {
    pub rank: usize,
    pub body: ConvexBody,
}

impl ArakelovBundle {
    pub fn new(rank: usize, body: ConvexBody) -> Result<ArakelovBundle> {
        if rank != body.dim() {
            return Err(Error::input("rank must equal the body dimension"));
        }
        Ok(ArakelovBundle { rank, body })
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct SectionCount {
    pub count: u64,
    pub points: Vec<Vec<i64>>,
}

fn floor_isqrt(r: &Rat) -> i64 {
    let f = r.floor_bigint();
    if f.is_negative() {
        return 0;
    }
    let root: BigInt = f.sqrt();
    root.try_into().unwrap_or(i64::MAX)
}

fn bounding_box(b: &ConvexBody) -> Vec<i64> {
    match b {
        ConvexBody::Octahedron { dim, r } => {
            let f: i64 = r.floor_bigint().try_into().unwrap_or(i64::MAX);
            vec![f; *dim]
        }
        ConvexBody::Box { half_widths } => half_widths
            .iter()
            .map(|r| r.floor_bigint().try_into().unwrap_or(i64::MAX))
            .collect(),
        ConvexBody::Ellipsoid { q } => {
            // x in the body forces x_k² ≤ (Q⁻¹)_{kk}.
            let inv = inverse(q);
            (0..q.len()).map(|k| floor_isqrt(&inv[k][k])).collect()
        }
    }
}

/// Enumerates the global sections L ∩ A = {x ∈ ℤ^d : ‖x‖ ≤ 1} by scanning
/// the exact bounding box.
pub fn global_sections_count(bundle: &ArakelovBundle) -> Result<SectionCount> {
    let b = &bundle.body;
    let bounds = bounding_box(b);
    let mut total: u64 = 1;
    for &bound in &bounds {
        let width = (bound as u64).saturating_mul(2).saturating_add(1);
        total = total.saturating_mul(width);
        if total > 20_000_000 {
            return Err(Error::input("bounding box too large to enumerate"));
        }
    }
    let one = Rat::one();
    let mut points = Vec::new();
    let mut x: Vec<i64> = bounds.iter().map(|&b| -b).collect();
    loop {
        let vec: Vec<Rat> = x.iter().map(|&v| Rat::from_int(v)).collect();
        if body_norm(b, &vec)?.le(&one) {
            points.push(x.clone());
        }
        let mut i = 0;
        loop {
            if i == x.len() {
                points.sort();
                return Ok(SectionCount {
                    count: points.len() as u64,
                    points,
                });
            }
            x[i] += 1;
            if x[i] <= bounds[i] {
                break;
            }
            x[i] = -bounds[i];
            i += 1;
        }
    }
}

/// Tight rational bounds on π, enough to separate π² from any rational a
/// desk-scale computation produces.
fn pi_bounds() -> (Rat, Rat) {
    let lo: Rat =
        "3141592653589793238462643383279502884197/1000000000000000000000000000000000000000"
            .parse()
            .unwrap();
    let hi: Rat =
        "3141592653589793238462643383279502884198/1000000000000000000000000000000000000000"
            .parse()
            .unwrap();
    (lo, hi)
}

/// Decides π² > q for rational q; errors only if q falls inside the
/// (astronomically thin) uncertainty band.
fn pi_squared_exceeds(q: &Rat) -> Result<bool> {
    let (lo, hi) = pi_bounds();
    if *q < &lo * &lo {
        return Ok(true);
    }
    if *q > &hi * &hi {
        return Ok(false);
    }
    Err(Error::undecided("π² comparison at the precision limit"))
}

/// Exact volume statement of a body, for display.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub enum VolumeValue {
    Exact(Rat),
    /// vol = √r (1-dimensional ellipsoids).
    SqrtOf(Rat),
    /// vol = π·√r (higher-dimensional ellipsoids).
    PiTimesSqrtOf(Rat),
}

impl VolumeValue {
    pub fn display(&self) -> String {
        match self {
            VolumeValue::Exact(r) => r.to_string(),
            VolumeValue::SqrtOf(r) => format!("sqrt({r})"),
            VolumeValue::PiTimesSqrtOf(r) => format!("pi*sqrt({r})"),
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct MinkowskiVerdict {
    pub dim: usize,
    pub volume: VolumeValue,
    /// Exact comparison volume > 2^d.
    pub exceeds: bool,
    /// A nonzero lattice point inside the body, exhibited whenever the
    /// volume exceeds 2^d.
    pub point: Option<Vec<i64>>,
}

fn volume_and_verdict(b: &ConvexBody) -> Result<(VolumeValue, bool)> {
    let d = b.dim();
    let two_d = Rat::from_int(1 << d);
    match b {
        ConvexBody::Octahedron { dim, r } => {
            // 2^d r^d / d!.
            let mut vol = Rat::one();
            for _ in 0..*dim {
                vol = &vol * &(&Rat::from_int(2) * r);
            }
            let fact: i64 = (1..=*dim as i64).product();
            vol = &vol / &Rat::from_int(fact);
            let exceeds = vol > two_d;
            Ok((VolumeValue::Exact(vol), exceeds))
        }
        ConvexBody::Box { half_widths } => {
            let mut vol = Rat::one();
            for r in half_widths {
                vol = &vol * &(&Rat::from_int(2) * r);
            }
            let exceeds = vol > two_d;
            Ok((VolumeValue::Exact(vol), exceeds))
        }
        ConvexBody::Ellipsoid { q } => {
            let dq = det(q);
            match d {
                // vol = 2/√q = √(4/q): exceeds 2 iff q < 1.
                1 => {
                    let exceeds = dq < Rat::one();
                    Ok((VolumeValue::SqrtOf(&Rat::from_int(4) / &dq), exceeds))
                }
                // vol = π/√det = π·√(1/det): exceeds 4 iff π² > 16·det.
                2 => {
                    let exceeds = pi_squared_exceeds(&(&Rat::from_int(16) * &dq))?;
                    Ok((VolumeValue::PiTimesSqrtOf(dq.recip()?), exceeds))
                }
                // vol = (4π/3)/√det = π·√(16/(9·det)): exceeds 8 iff
                // π² > 36·det.
                3 => {
                    let exceeds = pi_squared_exceeds(&(&Rat::from_int(36) * &dq))?;
                    let c = &Rat::new(16, 9)? / &dq;
                    Ok((VolumeValue::PiTimesSqrtOf(c), exceeds))
                }
                _ => unreachable!(),
            }
        }
    }
}

/// Exact volume comparison against 2^d; when the volume exceeds, a nonzero
/// lattice point is found by enumeration (Minkowski guarantees one).
pub fn minkowski_check(b: &ConvexBody) -> Result<MinkowskiVerdict> {
    let (volume, exceeds) = volume_and_verdict(b)?;
    let point = if exceeds {
        let sections = global_sections_count(&ArakelovBundle::new(b.dim(), b.clone())?)?;
        let p = sections
            .points
            .into_iter()
            .find(|p| p.iter().any(|&c| c != 0))
            .ok_or_else(|| {
                Error::internal("volume exceeds 2^d but no nonzero lattice point found")
            })?;
        Some(p)
    } else {
        None
    };
    Ok(MinkowskiVerdict {
        dim: b.dim(),
        volume,
        exceeds,
        point,
    })
}

/// A multivariate polynomial over ℚ in variables T1..Tk, stored sparsely.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PolyQ {
    pub vars: usize,
    /// Exponent vector (length = vars) → nonzero coefficient.
    pub terms: BTreeMap<Vec<u32>, Rat>,
}

impl PolyQ {
    pub fn new(vars: usize, terms: impl IntoIterator<Item = (Vec<u32>, Rat)>) -> Result<PolyQ> {
        let mut map: BTreeMap<Vec<u32>, Rat> = BTreeMap::new();
        for (exp, c) in terms {
            if exp.len() != vars {
                return Err(Error::input("exponent vector length must equal vars"));
            }
            let entry = map.entry(exp).or_insert_with(Rat::zero);
            *entry = &*entry + &c;
        }
        map.retain(|_, v| !v.is_zero());
        Ok(PolyQ { vars, terms: map })
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Σ|c_α| over the monomials.
    pub fn norm(&self) -> Rat {
        self.terms
            .values()
            .fold(Rat::zero(), |acc, c| &acc + &c.abs())
    }

    pub fn scale(&self, factor: &Rat) -> PolyQ {
        PolyQ {
            vars: self.vars,
            terms: self
                .terms
                .iter()
                .map(|(e, c)| (e.clone(), c * factor))
                .collect(),
        }
    }

    pub fn is_homogeneous(&self) -> bool {
        let mut degrees = self.terms.keys().map(|e| e.iter().sum::<u32>());
        match degrees.next() {
            None => true,
            Some(d) => degrees.all(|x| x == d),
        }
    }

    /// Parses one polynomial in the `.poly` line format: monomials
    /// `c T1^a T2^b` joined by `+`/`-`; a bare rational is a constant term
    /// and a bare `Tk` has coefficient 1.
    pub fn parse(line: &str) -> Result<PolyQ> {
        #[derive(Debug)]
        enum Tok {
            Num(Rat),
            Var(usize),
            Caret,
            Plus,
            Minus,
        }
        let mut toks = Vec::new();
        let mut chars = line.chars().peekable();
        while let Some(&c) = chars.peek() {
            if c.is_whitespace() {
                chars.next();
                continue;
            }
            match c {
                '+' => {
                    chars.next();
                    toks.push(Tok::Plus);
                }
                '-' => {
                    chars.next();
                    toks.push(Tok::Minus);
                }
                '^' => {
                    chars.next();
                    toks.push(Tok::Caret);
                }
                'T' => {
                    chars.next();
                    let mut digits = String::new();
                    while let Some(&d) = chars.peek() {
                        if d.is_ascii_digit() {
                            digits.push(d);
                            chars.next();
                        } else {
                            break;
                        }
                    }
                    let k: usize = digits
                        .parse()
                        .map_err(|_| Error::input("variable must be T<k>"))?;
                    if k == 0 {
                        return Err(Error::input("variables are numbered from T1"));
                    }
                    toks.push(Tok::Var(k));
                }
                d if d.is_ascii_digit() => {
                    let mut s = String::new();
                    while let Some(&d) = chars.peek() {
                        if d.is_ascii_digit() || d == '/' {
                            s.push(d);
                            chars.next();
                        } else {
                            break;
                        }
                    }
                    toks.push(Tok::Num(s.parse()?));
                }
                other => {
                    return Err(Error::input(format!(
                        "unexpected character {other:?} in polynomial"
                    )));
                }
            }
        }
        // Split into monomials on top-level +/−.
        let mut monomials: Vec<(Rat, Vec<(usize, u32)>)> = Vec::new();
        let mut sign = Rat::one();
        let mut current: Option<(Rat, Vec<(usize, u32)>)> = None;
        let mut i = 0;
        while i < toks.len() {
            match &toks[i] {
                Tok::Plus | Tok::Minus => {
                    if let Some(m) = current.take() {
                        monomials.push(m);
                    }
                    sign = if matches!(toks[i], Tok::Minus) {
                        -Rat::one()
                    } else {
                        Rat::one()
                    };
                    i += 1;
                }
                Tok::Num(c) => {
                    let m = current.get_or_insert_with(|| (sign.clone(), Vec::new()));
                    m.0 = &m.0 * c;
                    i += 1;
                }
                Tok::Var(k) => {
                    let m = current.get_or_insert_with(|| (sign.clone(), Vec::new()));
                    let mut e = 1u32;
                    if let Some(Tok::Caret) = toks.get(i + 1) {
                        match toks.get(i + 2) {
                            Some(Tok::Num(n)) if n.is_integer() && n.is_positive() => {
                                e = n
                                    .to_string()
                                    .parse()
                                    .map_err(|_| Error::input("exponent out of range"))?;
                                i += 2;
                            }
                            _ => return Err(Error::input("expected exponent after ^")),
                        }
                    }
                    m.1.push((*k, e));
                    i += 1;
                }
                Tok::Caret => return Err(Error::input("dangling ^")),
            }
        }
        if let Some(m) = current.take() {
            monomials.push(m);
        }
        let vars = monomials
            .iter()
            .flat_map(|(_, vs)| vs.iter().map(|(k, _)| *k))
            .max()
            .unwrap_or(0);
        let terms: Vec<(Vec<u32>, Rat)> = monomials
            .into_iter()
            .map(|(c, vs)| {
                let mut exp = vec![0u32; vars];
                for (k, e) in vs {
                    exp[k - 1] += e;
                }
                (exp, c)
            })
            .collect();
        PolyQ::new(vars, terms)
    }
}

impl fmt::Display for PolyQ {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (i, (exp, c)) in self.terms.iter().enumerate() {
            if i > 0 {
                write!(f, " {} ", if c.is_negative() { "-" } else { "+" })?;
            } else if c.is_negative() {
                write!(f, "-")?;
            }
            let ca = c.abs();
            let monomial: Vec<String> = exp
                .iter()
                .enumerate()
                .filter(|(_, &e)| e > 0)
                .map(|(k, &e)| {
                    if e == 1 {
                        format!("T{}", k + 1)
                    } else {
                        format!("T{}^{}", k + 1, e)
                    }
                })
                .collect();
            if monomial.is_empty() {
                write!(f, "{ca}")?;
            } else if ca.is_one() {
                write!(f, "{}", monomial.join(" "))?;
            } else {
                write!(f, "{ca} {}", monomial.join(" "))?;
            }
        }
        Ok(())
    }
}

/// The coefficient norm Σ|c_α|.
pub fn poly_norm(p: &PolyQ) -> Rat {
    p.norm()
}

/// The presentation data of a model over the rational archimedean valuation
/// ring: polynomial generators plus the rescaled relations f_j = 0 with
/// every ‖f_j‖ ≤ 1.
#[derive(Debug, Clone, Serialize)]
pub struct ModelRecord {
    pub generators: Vec<String>,
    pub relations: Vec<PolyQ>,
    /// Whether each input was rescaled by 1/‖f‖.
    pub rescaled: Vec<bool>,
    /// All inputs homogeneous: the Proj variant applies.
    pub homogeneous: bool,
}

/// Builds a model: rescales each f by 1/‖f‖ when ‖f‖ > 1, so every
/// relation lands in the unit ball of the coefficient norm.
pub fn build_model(fs: &[PolyQ]) -> Result<ModelRecord> {
    if fs.is_empty() {
        return Err(Error::input("a model needs at least one polynomial"));
    }
    if fs.iter().any(PolyQ::is_zero) {
        return Err(Error::input("zero polynomials are rejected"));
    }
    let vars = fs.iter().map(|f| f.vars).max().unwrap_or(0);
    let mut relations = Vec::new();
    let mut rescaled = Vec::new();
    for f in fs {
        let norm = f.norm();
        if norm > Rat::one() {
            relations.push(f.scale(&norm.recip()?));
            rescaled.push(true);
        } else {
            relations.push(f.clone());
            rescaled.push(false);
        }
    }
    for r in &relations {
        if r.norm() > Rat::one() {
            return Err(Error::internal(
                "rescaled polynomial still outside the unit ball",
            ));
        }
    }
    let homogeneous = fs.iter().all(PolyQ::is_homogeneous);
    Ok(ModelRecord {
        generators: (1..=vars).map(|k| format!("T{k}")).collect(),
        relations,
        rescaled,
        homogeneous,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactnum::rat;
    use rand::Rng;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn pic_examples() {
        let g = pic_group(12).unwrap();
        assert_eq!(g.rank(), 2);
        assert_eq!(g.basis(), vec!["log 2", "log 3"]);

        let mut two = FactorVec::zero();
        two.insert(2, 1);
        let four = g.tensor(&two, &two);
        assert_eq!(four.0.get(&2), Some(&2));
        assert!(g.is_trivial(&g.tensor(&four, &g.inverse(&four))));

        assert_eq!(pic_group(7).unwrap().rank(), 1);
        assert!(pic_group(1).is_err());
        // Classes must be supported on the divisors of N.
        let mut bad = FactorVec::zero();
        bad.insert(5, 1);
        assert!(g.element(bad).is_err());
    }

    #[test]
    fn limit_element_examples() {
        let v = pic_limit_element(&rat(3, 2)).unwrap();
        assert_eq!(v.0, BTreeMap::from([(2, -1), (3, 1)]));
        assert!(pic_limit_element(&Rat::one()).unwrap().is_zero());
        let v = pic_limit_element(&rat(12, 1)).unwrap();
        assert_eq!(v.0, BTreeMap::from([(2, 2), (3, 1)]));
        assert!(pic_limit_element(&rat(-1, 2)).is_err());
        assert!(pic_limit_element(&Rat::zero()).is_err());
    }

    /// The limit map is a group isomorphism onto finitely supported
    /// vectors: additive on products, with exact round-trips.
    #[test]
    fn limit_element_is_isomorphism() {
        let mut rng = ChaCha8Rng::seed_from_u64(15);
        for _ in 0..1000 {
            let a = rat(rng.random_range(1..=5000), rng.random_range(1..=5000));
            let b = rat(rng.random_range(1..=5000), rng.random_range(1..=5000));
            let va = pic_limit_element(&a).unwrap();
            let vb = pic_limit_element(&b).unwrap();
            assert_eq!(pic_limit_element(&(&a * &b)).unwrap(), va.add(&vb));
            assert_eq!(va.value().unwrap(), a);
        }
    }

    /// For M | N the inclusion Pic(M) → Pic(N) is basis-preserving.
    #[test]
    fn pic_functoriality() {
        for (m, n) in [(2u64, 6u64), (6, 12), (3, 6), (2, 8)] {
            let gm = pic_group(m).unwrap();
            let gn = pic_group(n).unwrap();
            for p in &gm.primes {
                assert!(gn.primes.contains(p));
                let mut v = FactorVec::zero();
                v.insert(*p, 1);
                assert!(gn.element(v).is_ok());
            }
        }
    }

    #[test]
    fn line_bundle_examples() {
        assert!(line_bundle_trivial_an(6, 1, &rat(5, 1)).unwrap());
        assert!(line_bundle_trivial_an(6, 1, &rat(-1, 6)).unwrap());
        assert!(line_bundle_trivial_an(6, 2, &rat(1, 1)).is_err());
    }

    #[test]
    fn body_norm_examples() {
        let oct = ConvexBody::octahedron(2, rat(1, 1)).unwrap();
        assert_eq!(
            body_norm(&oct, &[rat(1, 2), rat(1, 2)]).unwrap(),
            NormValue::Exact(rat(1, 1))
        );
        let bx = ConvexBody::cuboid(vec![rat(1, 1), rat(1, 1)]).unwrap();
        assert_eq!(
            body_norm(&bx, &[rat(1, 2), rat(3, 4)]).unwrap(),
            NormValue::Exact(rat(3, 4))
        );
        assert!(body_norm(&bx, &[Rat::zero(), Rat::zero()])
            .unwrap()
            .is_zero());
        assert!(body_norm(&bx, &[Rat::zero()]).is_err());

        let ell =
            ConvexBody::ellipsoid(vec![vec![rat(1, 1), rat(0, 1)], vec![rat(0, 1), rat(4, 1)]])
                .unwrap();
        let nv = body_norm(&ell, &[rat(1, 2), rat(1, 4)]).unwrap();
        assert_eq!(nv, NormValue::SqrtOf(rat(1, 2)));
        assert!(nv.le(&Rat::one()));
        assert!(!nv.le(&rat(1, 2)));
        assert!(nv.lt(&Rat::one()));
    }

    #[test]
    fn ellipsoid_validation() {
        // Asymmetric.
        assert!(ConvexBody::ellipsoid(vec![
            vec![rat(1, 1), rat(1, 1)],
            vec![rat(0, 1), rat(1, 1)],
        ])
        .is_err());
        // Not positive-definite.
        assert!(ConvexBody::ellipsoid(vec![
            vec![rat(1, 1), rat(2, 1)],
            vec![rat(2, 1), rat(1, 1)],
        ])
        .is_err());
        assert!(ConvexBody::ellipsoid(vec![
            vec![rat(2, 1), rat(1, 1)],
            vec![rat(1, 1), rat(2, 1)],
        ])
        .is_ok());
    }

    #[test]
    fn section_count_examples() {
        let b = ArakelovBundle::new(1, ConvexBody::cuboid(vec![rat(5, 2)]).unwrap()).unwrap();
        let s = global_sections_count(&b).unwrap();
        assert_eq!(s.count, 5);
        assert_eq!(
            s.points,
            vec![vec![-2], vec![-1], vec![0], vec![1], vec![2]]
        );

        let b = ArakelovBundle::new(2, ConvexBody::octahedron(2, rat(1, 1)).unwrap()).unwrap();
        assert_eq!(global_sections_count(&b).unwrap().count, 5);

        let b = ArakelovBundle::new(2, ConvexBody::cuboid(vec![rat(1, 1), rat(1, 1)]).unwrap())
            .unwrap();
        assert_eq!(global_sections_count(&b).unwrap().count, 9);
    }

    /// Counts are symmetric under x ↦ −x and monotone under r ↦ 2r.
    #[test]
    fn section_count_properties() {
        let mut rng = ChaCha8Rng::seed_from_u64(18);
        for _ in 0..60 {
            let d = rng.random_range(1..=3usize);
            let body = match rng.random_range(0..2) {
                0 => {
                    ConvexBody::octahedron(d, rat(rng.random_range(1..=9), rng.random_range(1..=3)))
                        .unwrap()
                }
                _ => ConvexBody::cuboid(
                    (0..d)
                        .map(|_| rat(rng.random_range(1..=9), rng.random_range(1..=3)))
                        .collect(),
                )
                .unwrap(),
            };
            let s = global_sections_count(&ArakelovBundle::new(d, body.clone()).unwrap()).unwrap();
            for p in &s.points {
                let neg: Vec<i64> = p.iter().map(|v| -v).collect();
                assert!(s.points.contains(&neg));
            }
            let doubled = match &body {
                ConvexBody::Octahedron { dim, r } => {
                    ConvexBody::octahedron(*dim, &Rat::from_int(2) * r).unwrap()
                }
                ConvexBody::Box { half_widths } => {
                    ConvexBody::cuboid(half_widths.iter().map(|r| &Rat::from_int(2) * r).collect())
                        .unwrap()
                }
                _ => unreachable!(),
            };
            let s2 = global_sections_count(&ArakelovBundle::new(d, doubled).unwrap()).unwrap();
            assert!(s2.count >= s.count);
        }
    }

    #[test]
    fn minkowski_examples() {
        let v =
            minkowski_check(&ConvexBody::cuboid(vec![rat(21, 20), rat(21, 20)]).unwrap()).unwrap();
        assert_eq!(v.volume, VolumeValue::Exact(rat(441, 100)));
        assert!(v.exceeds);
        assert!(v.point.is_some());

        let v = minkowski_check(&ConvexBody::cuboid(vec![rat(1, 1)]).unwrap()).unwrap();
        assert_eq!(v.volume, VolumeValue::Exact(rat(2, 1)));
        assert!(!v.exceeds);
        assert!(v.point.is_none());

        let v = minkowski_check(&ConvexBody::octahedron(2, rat(2, 1)).unwrap()).unwrap();
        assert_eq!(v.volume, VolumeValue::Exact(rat(8, 1)));
        assert!(v.exceeds);
        assert!(v.point.is_some());

        // The unit disc has area π < 4: no assertion.
        let v = minkowski_check(
            &ConvexBody::ellipsoid(vec![vec![rat(1, 1), rat(0, 1)], vec![rat(0, 1), rat(1, 1)]])
                .unwrap(),
        )
        .unwrap();
        assert!(!v.exceeds);

        // A wide disc: q = (1/9)·I has volume 9π > 4.
        let v = minkowski_check(
            &ConvexBody::ellipsoid(vec![vec![rat(1, 9), rat(0, 1)], vec![rat(0, 1), rat(1, 9)]])
                .unwrap(),
        )
        .unwrap();
        assert!(v.exceeds);
        assert!(v.point.is_some());
    }

    #[test]
    fn poly_norm_examples() {
        let p = PolyQ::parse("3/2 T1^2 - 1/2 T1 T2").unwrap();
        assert_eq!(poly_norm(&p), rat(2, 1));
        let p = PolyQ::parse("T1").unwrap();
        assert_eq!(poly_norm(&p), rat(1, 1));
        let p = PolyQ::new(0, vec![]).unwrap();
        assert_eq!(poly_norm(&p), Rat::zero());
    }

    #[test]
    fn poly_parse_and_display() {
        let p = PolyQ::parse("T1^2 + T2^2 - 1").unwrap();
        assert_eq!(p.vars, 2);
        assert_eq!(p.terms.len(), 3);
        let q = PolyQ::parse(&p.to_string()).unwrap();
        assert_eq!(p, q);
        assert!(PolyQ::parse("T0").is_err());
        assert!(PolyQ::parse("2 ^ 3").is_err());
        // Like terms combine, cancellations drop out.
        let p = PolyQ::parse("T1 + T1 - 2 T1").unwrap();
        assert!(p.is_zero());
    }

    #[test]
    fn build_model_examples() {
        // T1² + T2² − 1 has norm 3 and rescales to coefficient thirds.
        let f = PolyQ::parse("T1^2 + T2^2 - 1").unwrap();
        let m = build_model(std::slice::from_ref(&f)).unwrap();
        assert_eq!(m.generators, vec!["T1", "T2"]);
        assert!(m.rescaled[0]);
        assert_eq!(m.relations[0].norm(), rat(1, 1));
        let coeffs: Vec<Rat> = m.relations[0].terms.values().cloned().collect();
        assert!(coeffs.iter().all(|c| c.abs() == rat(1, 3)));
        assert!(!m.homogeneous);

        let f = PolyQ::parse("T1 - T2").unwrap();
        let m = build_model(std::slice::from_ref(&f)).unwrap();
        assert!(m.rescaled[0]);
        assert_eq!(m.relations[0].norm(), rat(1, 1));
        assert!(m.homogeneous);

        let f = PolyQ::parse("1/2 T1").unwrap();
        let m = build_model(std::slice::from_ref(&f)).unwrap();
        assert!(!m.rescaled[0]);
        assert_eq!(m.relations[0], f);

        assert!(build_model(&[PolyQ::new(0, vec![]).unwrap()]).is_err());
        assert!(build_model(&[]).is_err());
    }

    /// Norm axioms on random vectors per shape, and the unit ball
    /// re-derives the body.
    #[test]
    fn norm_properties() {
        let mut rng = ChaCha8Rng::seed_from_u64(444);
        let bodies: Vec<ConvexBody> = vec![
            ConvexBody::octahedron(3, rat(3, 2)).unwrap(),
            ConvexBody::cuboid(vec![rat(1, 1), rat(2, 1), rat(1, 2)]).unwrap(),
            ConvexBody::ellipsoid(vec![
                vec![rat(2, 1), rat(1, 2), rat(0, 1)],
                vec![rat(1, 2), rat(1, 1), rat(1, 4)],
                vec![rat(0, 1), rat(1, 4), rat(3, 1)],
            ])
            .unwrap(),
        ];
        for body in &bodies {
            let d = body.dim();
            for _ in 0..500 {
                let x: Vec<Rat> = (0..d)
                    .map(|_| rat(rng.random_range(-8..=8), rng.random_range(1..=5)))
                    .collect();
                let y: Vec<Rat> = (0..d)
                    .map(|_| rat(rng.random_range(-8..=8), rng.random_range(1..=5)))
                    .collect();
                let nx = body_norm(body, &x).unwrap();
                let ny = body_norm(body, &y).unwrap();
                // Absolute homogeneity for the rational scalar −3/2.
                let lam = rat(-3, 2);
                let scaled: Vec<Rat> = x.iter().map(|v| v * &lam).collect();
                let ns = body_norm(body, &scaled).unwrap();
                match (&nx, &ns) {
                    (NormValue::Exact(a), NormValue::Exact(b)) => {
                        assert_eq!(*b, &lam.abs() * a);
                    }
                    (NormValue::SqrtOf(a), NormValue::SqrtOf(b)) => {
                        assert_eq!(*b, &(&lam * &lam) * a);
                    }
                    _ => panic!("shape change under scaling"),
                }
                // Triangle inequality.
                let sum: Vec<Rat> = x.iter().zip(&y).map(|(a, b)| a + b).collect();
                let nsum = body_norm(body, &sum).unwrap();
                match (&nx, &ny, &nsum) {
                    (NormValue::Exact(a), NormValue::Exact(b), NormValue::Exact(c)) => {
                        assert!(*c <= a + b);
                    }
                    (NormValue::SqrtOf(a2), NormValue::SqrtOf(b2), NormValue::SqrtOf(c2)) => {
                        // √c² ≤ √a² + √b² ⟺ (c² − a² − b²)₊² ≤ 4·a²·b².
                        let gap = &(c2 - a2) - b2;
                        if gap.is_positive() {
                            assert!(&gap * &gap <= &(&Rat::from_int(4) * a2) * b2);
                        }
                    }
                    _ => panic!("mixed norm shapes"),
                }
                // Unit-ball membership agrees with direct body membership.
                let inside = nx.le(&Rat::one());
                let direct = match body {
                    ConvexBody::Octahedron { r, .. } => {
                        x.iter().fold(Rat::zero(), |acc, v| &acc + &v.abs()) <= *r
                    }
                    ConvexBody::Box { half_widths } => {
                        x.iter().zip(half_widths).all(|(v, r)| v.abs() <= *r)
                    }
                    ConvexBody::Ellipsoid { q } => {
                        let mut total = Rat::zero();
                        for (i, xi) in x.iter().enumerate() {
                            for (j, xj) in x.iter().enumerate() {
                                total = &total + &(&(xi * xj) * &q[i][j]);
                            }
                        }
                        total <= Rat::one()
                    }
                };
                assert_eq!(inside, direct);
            }
        }
    }

    /// 300 random bodies per shape with volume > 2^d each exhibit a
    /// nonzero lattice point.
    #[test]
    fn minkowski_randomized() {
        let mut rng = ChaCha8Rng::seed_from_u64(777);
        let mut per_shape = [0usize; 3];
        while per_shape.iter().any(|&c| c < 300) {
            let d = rng.random_range(1..=3usize);
            let shape = rng.random_range(0..3usize);
            if per_shape[shape] >= 300 {
                continue;
            }
            let body = match shape {
                0 => {
                    let r = rat(rng.random_range(2..=40), rng.random_range(1..=6));
                    ConvexBody::octahedron(d, r).unwrap()
                }
                1 => {
                    let hw: Vec<Rat> = (0..d)
                        .map(|_| rat(rng.random_range(1..=30), rng.random_range(1..=9)))
                        .collect();
                    ConvexBody::cuboid(hw).unwrap()
                }
                _ => {
                    // Q = L·Lᵀ for random lower-triangular L with positive
                    // diagonal; small entries keep det Q below the volume
                    // threshold most of the time.
                    let mut l = vec![vec![Rat::zero(); d]; d];
                    for (i, row) in l.iter_mut().enumerate() {
                        for (j, slot) in row.iter_mut().enumerate().take(i + 1) {
                            *slot = if i == j {
                                rat(rng.random_range(1..=4), rng.random_range(2..=9))
                            } else {
                                rat(rng.random_range(-3..=3), rng.random_range(2..=9))
                            };
                        }
                    }
                    let mut q = vec![vec![Rat::zero(); d]; d];
                    for i in 0..d {
                        for j in 0..d {
                            let mut acc = Rat::zero();
                            for k in 0..d {
                                acc = &acc + &(&l[i][k] * &l[j][k]);
                            }
                            q[i][j] = acc;
                        }
                    }
                    ConvexBody::ellipsoid(q).unwrap()
                }
            };
            match minkowski_check(&body) {
                Ok(v) => {
                    if v.exceeds {
                        per_shape[shape] += 1;
                        let p = v.point.expect("volume > 2^d must yield a point");
                        assert!(p.iter().any(|&c| c != 0));
                        let x: Vec<Rat> = p.iter().map(|&c| Rat::from_int(c)).collect();
                        assert!(body_norm(&body, &x).unwrap().le(&Rat::one()));
                    }
                }
                Err(Error::Input(_)) => continue, // box too large to scan
                Err(e) => panic!("unexpected error {e}"),
            }
        }
    }
}
