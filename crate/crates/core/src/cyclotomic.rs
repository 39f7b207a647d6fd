//! Exact arithmetic in rings of cyclotomic integers Z[ζ_L].
//!
//! Elements are stored canonically: an integer polynomial in ζ_L reduced
//! modulo the L-th cyclotomic polynomial Φ_L, so equality is coefficient
//! equality and no ideal-membership test is ever needed. Coefficients are
//! arbitrary-precision integers; high matrix powers overflow fixed width
//! quickly.
//!
//! The module also provides embeddings between levels, complex conjugation,
//! Galois twists, detection of (scaled) roots of unity, and exact square
//! roots of integers via quadratic Gauss sums.

use num_bigint::BigInt;
use num_complex::Complex64;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use std::collections::HashMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::{Arc, LazyLock, Mutex};
use thiserror::Error;

/// Order of the root of unity generating the ambient ring Z[ζ_L].
pub type Level = u64;

#[derive(Debug, Error, PartialEq, Eq, Clone)]
pub enum CycloError {
    #[error("level mismatch: {left} vs {right}")]
    LevelMismatch { left: Level, right: Level },
    #[error("cannot embed level {from} into level {to}: target must be a multiple")]
    InvalidEmbed { from: Level, to: Level },
    #[error("sqrt({m}) lives at conductor {conductor}, which does not divide level {level}")]
    UnsupportedConductor {
        m: u64,
        conductor: u64,
        level: Level,
    },
    #[error("scale must be nonzero")]
    ZeroScale,
    #[error("exponent map ζ -> ζ^{multiplier} is not invertible at level {level}")]
    NotAUnit { multiplier: u64, level: Level },
}

pub fn gcd(a: u64, b: u64) -> u64 {
    a.gcd(&b)
}

pub fn lcm(a: u64, b: u64) -> u64 {
    a.lcm(&b)
}

/// Euler's totient.
pub fn euler_phi(n: u64) -> u64 {
    assert!(n >= 1);
    let mut result = n;
    let mut m = n;
    let mut p = 2;
    while p * p <= m {
        if m.is_multiple_of(p) {
            while m.is_multiple_of(p) {
                m /= p;
            }
            result -= result / p;
        }
        p += 1;
    }
    if m > 1 {
        result -= result / m;
    }
    result
}

/// Prime factorization by trial division; returns (prime, exponent) pairs.
pub fn factorize(mut n: u64) -> Vec<(u64, u32)> {
    let mut out = Vec::new();
    let mut p = 2;
    while p * p <= n {
        if n.is_multiple_of(p) {
            let mut e = 0;
            while n.is_multiple_of(p) {
                n /= p;
                e += 1;
            }
            out.push((p, e));
        }
        p += 1;
    }
    if n > 1 {
        out.push((n, 1));
    }
    out
}

/// All divisors of n, ascending.
pub fn divisors(n: u64) -> Vec<u64> {
    let mut out = vec![1];
    for (p, e) in factorize(n) {
        let prev = out.clone();
        let mut pe = 1;
        for _ in 0..e {
            pe *= p;
            out.extend(prev.iter().map(|d| d * pe));
        }
    }
    out.sort_unstable();
    out
}

/// Writes m = s * c² with s squarefree; returns (s, c).
pub fn squarefree_part(m: u64) -> (u64, u64) {
    assert!(m >= 1);
    let mut s = 1;
    let mut c = 1;
    for (p, e) in factorize(m) {
        if e % 2 == 1 {
            s *= p;
        }
        for _ in 0..e / 2 {
            c *= p;
        }
    }
    (s, c)
}

/// Conductor of Q(√m): the smallest L with √m ∈ Q(ζ_L).
pub fn sqrt_conductor(m: u64) -> u64 {
    let (s, _) = squarefree_part(m);
    if s == 1 {
        1
    } else if s % 4 == 1 {
        s
    } else {
        4 * s
    }
}

// ---------------------------------------------------------------------------
// Cyclotomic polynomials
// ---------------------------------------------------------------------------

static CYCLO_CACHE: LazyLock<Mutex<HashMap<u64, Arc<Vec<BigInt>>>>> =
    LazyLock::new(|| Mutex::new(HashMap::new()));

/// The L-th cyclotomic polynomial, ascending coefficients, monic of degree φ(L).
///
/// Computed by dividing x^L − 1 by the product of Φ_d over proper divisors d.
pub fn cyclo_poly(level: Level) -> Arc<Vec<BigInt>> {
    assert!(level >= 1);
    if let Some(p) = CYCLO_CACHE.lock().unwrap().get(&level) {
        return p.clone();
    }
    // x^L - 1
    let mut num: Vec<BigInt> = vec![BigInt::zero(); level as usize + 1];
    num[0] = -BigInt::one();
    num[level as usize] = BigInt::one();
    for d in divisors(level) {
        if d < level {
            let phi_d = cyclo_poly(d);
            num = poly_div_exact(&num, &phi_d);
        }
    }
    debug_assert_eq!(num.len() as u64 - 1, euler_phi(level));
    let arc = Arc::new(num);
    CYCLO_CACHE
        .lock()
        .unwrap()
        .entry(level)
        .or_insert_with(|| arc.clone());
    arc
}

/// Exact division of integer polynomials; divisor must be monic and divide evenly.
fn poly_div_exact(num: &[BigInt], den: &[BigInt]) -> Vec<BigInt> {
    assert!(den.last().map(|c| c.is_one()).unwrap_or(false));
    let mut rem = num.to_vec();
    let dn = den.len() - 1;
    assert!(rem.len() > dn);
    let mut quot = vec![BigInt::zero(); rem.len() - dn];
    for i in (dn..rem.len()).rev() {
        let c = std::mem::take(&mut rem[i]);
        if c.is_zero() {
            continue;
        }
        for (j, dj) in den.iter().enumerate().take(dn) {
            let sub = &c * dj;
            rem[i - dn + j] -= sub;
        }
        quot[i - dn] = c;
    }
    assert!(
        rem.iter().take(dn).all(|c| c.is_zero()),
        "non-exact division"
    );
    quot
}

/// Reduces an integer polynomial in ζ_L modulo Φ_L to length φ(L).
fn reduce_mod_cyclo(mut v: Vec<BigInt>, level: Level) -> Vec<BigInt> {
    let phi_poly = cyclo_poly(level);
    let deg = phi_poly.len() - 1;
    if v.len() > deg {
        for i in (deg..v.len()).rev() {
            let c = std::mem::take(&mut v[i]);
            if c.is_zero() {
                continue;
            }
            // subtract c * x^(i-deg) * Φ_L (monic leading term cancels)
            for (j, pj) in phi_poly.iter().enumerate().take(deg) {
                let sub = &c * pj;
                v[i - deg + j] -= sub;
            }
        }
    }
    v.resize(deg, BigInt::zero());
    v
}

// ---------------------------------------------------------------------------
// Roots of unity
// ---------------------------------------------------------------------------

/// A root of unity ζ_k^e, kept in lowest terms: either (1, 0) or gcd(e, k) = 1.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct RootOfUnity {
    order: u64,
    exponent: u64,
}

impl RootOfUnity {
    pub fn new(order: u64, exponent: i64) -> Self {
        assert!(order >= 1);
        let e = exponent.rem_euclid(order as i64) as u64;
        let g = gcd(e, order); // gcd(0, k) = k, so ζ^0 reduces to order 1
        RootOfUnity {
            order: order / g,
            exponent: e / g,
        }
    }

    pub fn one() -> Self {
        RootOfUnity {
            order: 1,
            exponent: 0,
        }
    }

    pub fn order(&self) -> u64 {
        self.order
    }

    pub fn exponent(&self) -> u64 {
        self.exponent
    }

    pub fn is_one(&self) -> bool {
        self.order == 1
    }

    pub fn inverse(&self) -> Self {
        RootOfUnity::new(self.order, -(self.exponent as i64))
    }

    pub fn mul(&self, other: &Self) -> Self {
        let k = lcm(self.order, other.order);
        let e = self.exponent * (k / self.order) + other.exponent * (k / other.order);
        RootOfUnity::new(k, e as i64)
    }

    /// The element ζ_order^exponent of Z[ζ_level]; order must divide level.
    pub fn value(&self, level: Level) -> Result<CycloElement, CycloError> {
        if !level.is_multiple_of(self.order) {
            return Err(CycloError::InvalidEmbed {
                from: self.order,
                to: level,
            });
        }
        Ok(CycloElement::root(
            level,
            self.exponent * (level / self.order),
        ))
    }

    pub fn to_complex(&self) -> Complex64 {
        let theta = 2.0 * std::f64::consts::PI * self.exponent as f64 / self.order as f64;
        Complex64::new(theta.cos(), theta.sin())
    }
}

impl fmt::Display for RootOfUnity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match (self.order, self.exponent) {
            (1, _) => write!(f, "1"),
            (2, _) => write!(f, "-1"),
            (k, e) => write!(f, "zeta_{k}^{e}"),
        }
    }
}

// ---------------------------------------------------------------------------
// Ring elements
// ---------------------------------------------------------------------------

/// An element of Z[ζ_L], canonically reduced modulo Φ_L.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct CycloElement {
    level: Level,
    coeffs: Vec<BigInt>, // length φ(L), index i is the coefficient of ζ_L^i
}

impl CycloElement {
    pub fn zero(level: Level) -> Self {
        CycloElement {
            level,
            coeffs: vec![BigInt::zero(); euler_phi(level) as usize],
        }
    }

    pub fn one(level: Level) -> Self {
        Self::from_int(level, BigInt::one())
    }

    pub fn from_int(level: Level, n: impl Into<BigInt>) -> Self {
        let mut e = Self::zero(level);
        e.coeffs[0] = n.into();
        e
    }

    /// ζ_level^exp, reduced canonically.
    pub fn root(level: Level, exp: u64) -> Self {
        let e = (exp % level) as usize;
        let mut v = vec![BigInt::zero(); e + 1];
        v[e] = BigInt::one();
        CycloElement {
            level,
            coeffs: reduce_mod_cyclo(v, level),
        }
    }

    pub fn from_coeffs(level: Level, coeffs: Vec<BigInt>) -> Self {
        CycloElement {
            level,
            coeffs: reduce_mod_cyclo(coeffs, level),
        }
    }

    pub fn level(&self) -> Level {
        self.level
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_zero())
    }

    /// Some(n) when the element is the rational integer n.
    pub fn as_integer(&self) -> Option<BigInt> {
        if self.coeffs[1..].iter().all(|c| c.is_zero()) {
            Some(self.coeffs[0].clone())
        } else {
            None
        }
    }

    pub fn checked_add(&self, other: &Self) -> Result<Self, CycloError> {
        self.check_level(other)?;
        Ok(self + other)
    }

    pub fn checked_sub(&self, other: &Self) -> Result<Self, CycloError> {
        self.check_level(other)?;
        Ok(self - other)
    }

    pub fn checked_mul(&self, other: &Self) -> Result<Self, CycloError> {
        self.check_level(other)?;
        Ok(self * other)
    }

    fn check_level(&self, other: &Self) -> Result<(), CycloError> {
        if self.level != other.level {
            Err(CycloError::LevelMismatch {
                left: self.level,
                right: other.level,
            })
        } else {
            Ok(())
        }
    }

    pub fn scalar_mul(&self, n: &BigInt) -> Self {
        CycloElement {
            level: self.level,
            coeffs: self.coeffs.iter().map(|c| c * n).collect(),
        }
    }

    /// Exact division by a nonzero integer; None when some coefficient is not divisible.
    pub fn div_exact_int(&self, n: &BigInt) -> Option<Self> {
        assert!(!n.is_zero());
        let mut out = Vec::with_capacity(self.coeffs.len());
        for c in &self.coeffs {
            let (q, r) = c.div_rem(n);
            if !r.is_zero() {
                return None;
            }
            out.push(q);
        }
        Some(CycloElement {
            level: self.level,
            coeffs: out,
        })
    }

    /// Applies the Galois map ζ_L -> ζ_L^u; u must be a unit modulo L.
    pub fn galois(&self, u: u64) -> Result<Self, CycloError> {
        if gcd(u % self.level, self.level) != 1 {
            return Err(CycloError::NotAUnit {
                multiplier: u,
                level: self.level,
            });
        }
        if self.level == 1 {
            return Ok(self.clone());
        }
        let mut v = vec![BigInt::zero(); self.level as usize];
        for (i, c) in self.coeffs.iter().enumerate() {
            if !c.is_zero() {
                let j = ((i as u64) * u % self.level) as usize;
                v[j] += c;
            }
        }
        Ok(CycloElement {
            level: self.level,
            coeffs: reduce_mod_cyclo(v, self.level),
        })
    }

    /// Complex conjugation: ζ_L^j -> ζ_L^(L-j).
    pub fn conjugate(&self) -> Self {
        if self.level <= 2 {
            return self.clone();
        }
        self.galois(self.level - 1).expect("L-1 is a unit mod L")
    }

    /// Ring embedding into Z[ζ_target]; target must be a multiple of the level.
    pub fn embed(&self, target: Level) -> Result<Self, CycloError> {
        if !target.is_multiple_of(self.level) {
            return Err(CycloError::InvalidEmbed {
                from: self.level,
                to: target,
            });
        }
        if target == self.level {
            return Ok(self.clone());
        }
        let d = (target / self.level) as usize;
        let mut v = vec![BigInt::zero(); (self.coeffs.len() - 1) * d + 1];
        for (i, c) in self.coeffs.iter().enumerate() {
            if !c.is_zero() {
                v[i * d] = c.clone();
            }
        }
        Ok(CycloElement {
            level: target,
            coeffs: reduce_mod_cyclo(v, target),
        })
    }

    /// Numeric image under ζ_L -> e^(2πi/L).
    pub fn to_complex(&self) -> Complex64 {
        let mut acc = Complex64::new(0.0, 0.0);
        for (i, c) in self.coeffs.iter().enumerate() {
            if !c.is_zero() {
                let theta = 2.0 * std::f64::consts::PI * i as f64 / self.level as f64;
                let coeff = c.to_f64().unwrap_or(f64::NAN);
                acc += Complex64::new(theta.cos(), theta.sin()) * coeff;
            }
        }
        acc
    }
}

impl fmt::Display for CycloElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut wrote = false;
        for (i, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let mag = c.abs();
            if wrote {
                f.write_str(if c.is_negative() { " - " } else { " + " })?;
            } else {
                if c.is_negative() {
                    write!(f, "-")?;
                }
                wrote = true;
            }
            if i == 0 {
                write!(f, "{mag}")?;
            } else if mag.is_one() {
                write!(f, "z^{i}")?;
            } else {
                write!(f, "{mag}*z^{i}")?;
            }
        }
        if !wrote {
            write!(f, "0")?;
        }
        write!(f, " (L={})", self.level)
    }
}

impl fmt::Debug for CycloElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

macro_rules! binop {
    ($trait:ident, $method:ident, $op:tt) => {
        impl $trait for &CycloElement {
            type Output = CycloElement;
            fn $method(self, rhs: &CycloElement) -> CycloElement {
                assert_eq!(self.level, rhs.level, "cyclotomic level mismatch");
                CycloElement {
                    level: self.level,
                    coeffs: self
                        .coeffs
                        .iter()
                        .zip(rhs.coeffs.iter())
                        .map(|(a, b)| a $op b)
                        .collect(),
                }
            }
        }
    };
}

binop!(Add, add, +);
binop!(Sub, sub, -);

impl Mul for &CycloElement {
    type Output = CycloElement;
    fn mul(self, rhs: &CycloElement) -> CycloElement {
        assert_eq!(self.level, rhs.level, "cyclotomic level mismatch");
        let n = self.coeffs.len();
        let mut v = vec![BigInt::zero(); 2 * n - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                if !b.is_zero() {
                    v[i + j] += a * b;
                }
            }
        }
        CycloElement {
            level: self.level,
            coeffs: reduce_mod_cyclo(v, self.level),
        }
    }
}

impl Neg for &CycloElement {
    type Output = CycloElement;
    fn neg(self) -> CycloElement {
        CycloElement {
            level: self.level,
            coeffs: self.coeffs.iter().map(|c| -c).collect(),
        }
    }
}

// ---------------------------------------------------------------------------
// Square roots and root detection
// ---------------------------------------------------------------------------

fn legendre(a: u64, p: u64) -> i32 {
    // Euler's criterion; p an odd prime, 1 <= a < p
    let mut result = 1u64;
    let mut base = a % p;
    let mut e = (p - 1) / 2;
    while e > 0 {
        if e & 1 == 1 {
            result = result * base % p;
        }
        base = base * base % p;
        e >>= 1;
    }
    if result == 1 {
        1
    } else {
        -1
    }
}

/// An element g of Z[ζ_level] with g² = m, positive under ζ_L -> e^(2πi/L).
///
/// Built as c times a product of quadratic Gauss sums, with √2 = ζ_8 + ζ_8⁻¹
/// and a power-of-i correction for primes ≡ 3 mod 4.
pub fn sqrt_embed(m: u64, level: Level) -> Result<CycloElement, CycloError> {
    assert!(m >= 1);
    let (s, c) = squarefree_part(m);
    let cond = sqrt_conductor(m);
    if !level.is_multiple_of(cond) {
        return Err(CycloError::UnsupportedConductor {
            m,
            conductor: cond,
            level,
        });
    }
    let mut acc = CycloElement::from_int(level, BigInt::from(c));
    if s % 2 == 0 {
        let r8 =
            &CycloElement::root(level, level / 8) + &CycloElement::root(level, level - level / 8);
        acc = &acc * &r8;
    }
    let mut primes_3_mod_4 = 0u64;
    for (p, _) in factorize(s) {
        if p == 2 {
            continue;
        }
        let mut gauss = CycloElement::zero(level);
        for a in 1..p {
            let term = CycloElement::root(level, a * (level / p));
            if legendre(a, p) == 1 {
                gauss = &gauss + &term;
            } else {
                gauss = &gauss - &term;
            }
        }
        acc = &acc * &gauss;
        if p % 4 == 3 {
            primes_3_mod_4 += 1;
        }
    }
    // each Gauss sum at p ≡ 3 mod 4 equals i√p; multiply by (−i)^count
    match primes_3_mod_4 % 4 {
        0 => {}
        1 => acc = &acc * &CycloElement::root(level, 3 * level / 4),
        2 => acc = -&acc,
        3 => acc = &acc * &CycloElement::root(level, level / 4),
        _ => unreachable!(),
    }
    Ok(acc)
}

/// Finds e with x = scale · ζ_L^e at the common level L, testing all L candidates.
pub fn detect_scaled_root(
    x: &CycloElement,
    scale: &CycloElement,
) -> Result<Option<u64>, CycloError> {
    if x.level() != scale.level() {
        return Err(CycloError::LevelMismatch {
            left: x.level(),
            right: scale.level(),
        });
    }
    if scale.is_zero() {
        return Err(CycloError::ZeroScale);
    }
    let level = x.level();
    for e in 0..level {
        let candidate = scale * &CycloElement::root(level, e);
        if candidate == *x {
            return Ok(Some(e));
        }
    }
    Ok(None)
}
