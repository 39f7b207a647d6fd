//! Eigenvalue-order analysis of Butson matrices: match, then certify.
//!
//! Floating point proposes (roots of the exact characteristic polynomial,
//! arguments snapped to rationals by continued fractions); exact algebra
//! disposes (the claimed spectrum is accepted only when the product
//! Π (x − √m·ζ_K^e) reproduces the characteristic polynomial coefficient by
//! coefficient in Z[ζ_L]). No accepted fact rests on a tolerance.

use crate::butson::ButsonMatrix;
use crate::cyclotomic::{self, sqrt_conductor, sqrt_embed, CycloElement, CycloError};
use crate::exact_matrix::MatrixError;
use num_bigint::BigInt;
use num_complex::Complex64;
use serde::Serialize;
use std::collections::BTreeMap;
use std::fmt;
use thiserror::Error;

/// Tolerance (radians) for accepting a rational reconstruction of an argument.
const ARGUMENT_TOLERANCE: f64 = 1e-9;

#[derive(Debug, Error, PartialEq, Clone)]
pub enum SpectraError {
    #[error(transparent)]
    Cyclo(#[from] CycloError),
    #[error(transparent)]
    Matrix(#[from] MatrixError),
    #[error("eigenvalue argument {argument:.12} has no rational form with denominator <= {bound}: not finite order within bound")]
    NotFiniteOrder { argument: f64, bound: u64 },
}

/// Claim: the spectrum of M is √m times the multiset {ζ_K^e} given by
/// `exponents` (exponent -> multiplicity).
#[derive(Clone, PartialEq, Eq, Debug, Serialize)]
pub struct SpectrumClaim {
    pub m: u64,
    pub root_order: u64,
    pub exponents: BTreeMap<u64, usize>,
}

impl SpectrumClaim {
    pub fn new(m: u64, root_order: u64, exponents: impl IntoIterator<Item = u64>) -> Self {
        let mut map = BTreeMap::new();
        for e in exponents {
            *map.entry(e % root_order).or_insert(0) += 1;
        }
        SpectrumClaim {
            m,
            root_order,
            exponents: map,
        }
    }

    pub fn multiplicity_total(&self) -> usize {
        self.exponents.values().sum()
    }

    /// True iff every exponent is coprime to the root order.
    pub fn primitive_only(&self) -> bool {
        self.exponents
            .keys()
            .all(|&e| cyclotomic::gcd(e, self.root_order) == 1)
    }

    /// Rewrites over the smallest root order representing the same multiset.
    pub fn normalized(&self) -> Self {
        let mut g = self.root_order;
        for &e in self.exponents.keys() {
            g = cyclotomic::gcd(g, e);
        }
        if g <= 1 {
            return self.clone();
        }
        SpectrumClaim {
            m: self.m,
            root_order: self.root_order / g,
            exponents: self.exponents.iter().map(|(&e, &c)| (e / g, c)).collect(),
        }
    }

    /// Exponents with multiplicity, ascending.
    pub fn exponent_list(&self) -> Vec<u64> {
        let mut out = Vec::with_capacity(self.multiplicity_total());
        for (&e, &c) in &self.exponents {
            out.extend(std::iter::repeat_n(e, c));
        }
        out
    }

    /// The unitary order of any matrix with this spectrum: the lcm of the
    /// orders of the claimed roots of unity.
    pub fn unitary_order(&self) -> u64 {
        self.exponents
            .keys()
            .map(|&e| {
                let g = cyclotomic::gcd(e, self.root_order);
                self.root_order / g
            })
            .fold(1, cyclotomic::lcm)
    }

    /// Checks closure of the exponent multiset under every Galois
    /// automorphism fixing Q(ζ_k), k the entry root order (√m picks up the
    /// quadratic character sign, shifting exponents by L/2).
    pub fn is_galois_closed(&self, entry_root_order: u64) -> Result<bool, SpectraError> {
        let level = cyclotomic::lcm(
            cyclotomic::lcm(self.root_order, entry_root_order),
            sqrt_conductor(self.m),
        );
        let g = sqrt_embed(self.m, level)?;
        let at_level: BTreeMap<u64, usize> = self
            .exponents
            .iter()
            .map(|(&e, &c)| (e * (level / self.root_order), c))
            .collect();
        for u in 1..level {
            if cyclotomic::gcd(u, level) != 1 || u % entry_root_order != 1 {
                continue;
            }
            let gu = g.galois(u)?;
            let shift = if gu == g {
                0
            } else if gu == -&g {
                if !level.is_multiple_of(2) {
                    return Ok(false);
                }
                level / 2
            } else {
                unreachable!("σ(√m) must be ±√m");
            };
            let mut mapped = BTreeMap::new();
            for (&e, &c) in &at_level {
                *mapped.entry((e * u + shift) % level).or_insert(0) += c;
            }
            if mapped != at_level {
                return Ok(false);
            }
        }
        Ok(true)
    }
}

impl fmt::Display for SpectrumClaim {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let list = self
            .exponent_list()
            .iter()
            .map(|e| e.to_string())
            .collect::<Vec<_>>()
            .join(",");
        write!(f, "sqrt({})*zeta_{}^{{{}}}", self.m, self.root_order, list)
    }
}

/// Default search bound for orders and denominators: torsion in
/// Q[ζ_ℓ, √m] is bounded by 2ℓ (ℓ even) or 4ℓ (ℓ odd), and the splitting
/// field of a small matrix adds at most a small factor.
pub fn default_bound(root_order: u64) -> u64 {
    4 * cyclotomic::lcm(24, root_order)
}

// ---------------------------------------------------------------------------
// Numeric proposal
// ---------------------------------------------------------------------------

/// Durand–Kerner iteration on a monic polynomial (ascending coefficients).
fn polynomial_roots(coeffs: &[Complex64]) -> Vec<Complex64> {
    let n = coeffs.len() - 1;
    if n == 0 {
        return Vec::new();
    }
    let lead = coeffs[n];
    let monic: Vec<Complex64> = coeffs.iter().map(|c| c / lead).collect();
    let radius = 1.0
        + monic
            .iter()
            .take(n)
            .map(|c| c.norm())
            .fold(0.0f64, f64::max);
    let mut roots: Vec<Complex64> = (0..n)
        .map(|j| {
            let theta = 2.0 * std::f64::consts::PI * (j as f64 + 0.25) / n as f64 + 0.3;
            Complex64::from_polar(radius, theta)
        })
        .collect();
    let eval = |x: Complex64| {
        let mut acc = Complex64::new(0.0, 0.0);
        for c in monic.iter().rev() {
            acc = acc * x + c;
        }
        acc
    };
    for _ in 0..600 {
        let mut max_shift = 0.0f64;
        for j in 0..n {
            let mut den = Complex64::new(1.0, 0.0);
            for i in 0..n {
                if i != j {
                    den *= roots[j] - roots[i];
                }
            }
            if den.norm() == 0.0 {
                continue;
            }
            let shift = eval(roots[j]) / den;
            roots[j] -= shift;
            max_shift = max_shift.max(shift.norm());
        }
        if max_shift < 1e-14 * radius {
            break;
        }
    }
    roots
}

/// Groups root estimates that approximate the same (possibly multiple)
/// eigenvalue and averages each group; the mean of a symmetric cluster is
/// accurate to second order.
fn cluster_roots(mut roots: Vec<Complex64>, tol: f64) -> Vec<(Complex64, usize)> {
    let mut out: Vec<(Complex64, usize)> = Vec::new();
    roots.sort_by(|a, b| (a.re, a.im).partial_cmp(&(b.re, b.im)).unwrap());
    let mut used = vec![false; roots.len()];
    for i in 0..roots.len() {
        if used[i] {
            continue;
        }
        let mut sum = roots[i];
        let mut count = 1;
        used[i] = true;
        for j in i + 1..roots.len() {
            if !used[j] && (roots[j] - roots[i]).norm() < tol {
                sum += roots[j];
                count += 1;
                used[j] = true;
            }
        }
        out.push((sum / count as f64, count));
    }
    out
}

/// Best rational approximation p/q to x with q <= max_den, by continued
/// fractions with a final semiconvergent step.
fn best_rational(x: f64, max_den: u64) -> (i64, u64) {
    let (mut p0, mut q0, mut p1, mut q1): (i64, u64, i64, u64) = (1, 0, x.floor() as i64, 1);
    let mut frac = x - x.floor();
    while frac.abs() > 1e-15 {
        let r = 1.0 / frac;
        let a = r.floor();
        if a as u64 > max_den.saturating_mul(4) {
            break;
        }
        let p2 = a as i64 * p1 + p0;
        let q2 = a as u64 * q1 + q0;
        if q2 > max_den {
            // best semiconvergent still within the bound
            let t = (max_den - q0) / q1;
            let ps = t as i64 * p1 + p0;
            let qs = t * q1 + q0;
            let err_conv = (x - p1 as f64 / q1 as f64).abs();
            let err_semi = (x - ps as f64 / qs as f64).abs();
            return if qs > 0 && err_semi < err_conv {
                (ps, qs)
            } else {
                (p1, q1)
            };
        }
        (p0, q0, p1, q1) = (p1, q1, p2, q2);
        frac = r - a;
    }
    (p1, q1)
}

/// Proposes a spectrum claim for M from double-precision roots of the exact
/// characteristic polynomial; arguments are snapped to rationals with
/// denominator at most `bound`.
pub fn estimate_spectrum(m: &ButsonMatrix, bound: u64) -> Result<SpectrumClaim, SpectraError> {
    assert!(bound >= 1);
    let k = m.root_order();
    let cp = m.as_cyclo_matrix(k)?.char_poly()?;
    let coeffs: Vec<Complex64> = cp.coeffs().iter().map(|c| c.to_complex()).collect();
    let roots = polynomial_roots(&coeffs);
    let clusters = cluster_roots(roots, 1e-5);

    let mut fractions: Vec<(i64, u64, usize)> = Vec::new();
    for (center, mult) in clusters {
        let theta = center.arg() / (2.0 * std::f64::consts::PI);
        let theta = theta.rem_euclid(1.0);
        let (p, q) = best_rational(theta, bound);
        let err = (theta - p as f64 / q as f64).abs() * 2.0 * std::f64::consts::PI;
        if err > ARGUMENT_TOLERANCE {
            return Err(SpectraError::NotFiniteOrder {
                argument: theta,
                bound,
            });
        }
        fractions.push((p.rem_euclid(q as i64), q, mult));
    }
    let big_k = fractions
        .iter()
        .map(|&(_, q, _)| q)
        .fold(1, cyclotomic::lcm);
    let exponents = fractions
        .iter()
        .flat_map(|&(p, q, mult)| std::iter::repeat_n(p as u64 * (big_k / q) % big_k, mult))
        .collect::<Vec<_>>();
    Ok(SpectrumClaim::new(m.order() as u64, big_k, exponents).normalized())
}

// ---------------------------------------------------------------------------
// Exact certification
// ---------------------------------------------------------------------------

/// True iff char_poly(M) equals Π (x − √m·ζ_K^e) exactly over Z[ζ_L],
/// L = lcm(k, K, conductor of √m). Exact polynomial identity, no tolerance.
pub fn certify_spectrum(m: &ButsonMatrix, claim: &SpectrumClaim) -> Result<bool, SpectraError> {
    if claim.multiplicity_total() != m.order() {
        return Ok(false);
    }
    let level = cyclotomic::lcm(
        cyclotomic::lcm(m.root_order(), claim.root_order),
        sqrt_conductor(claim.m),
    );
    let g = sqrt_embed(claim.m, level)?;
    // expand Π (x − g·ζ^e), ascending coefficients
    let mut poly = vec![CycloElement::one(level)];
    for e in claim.exponent_list() {
        let root = &g * &CycloElement::root(level, e * (level / claim.root_order));
        let mut next = vec![CycloElement::zero(level); poly.len() + 1];
        for (i, c) in poly.iter().enumerate() {
            next[i + 1] = &next[i + 1] + c;
            next[i] = &next[i] - &(c * &root);
        }
        poly = next;
    }
    let cp = m
        .as_cyclo_matrix(m.root_order())?
        .char_poly()?
        .embed(level)?;
    Ok(cp.coeffs() == &poly[..])
}

/// Smallest N <= bound with M^N = √m^N · I exactly (√m the positive root),
/// i.e. the multiplicative order of the unitary m^(-1/2)·M when it is finite.
pub fn unitary_order(m: &ButsonMatrix, bound: u64) -> Result<Option<u64>, SpectraError> {
    assert!(bound >= 1);
    let n = m.order() as u64;
    let level = cyclotomic::lcm(m.root_order(), sqrt_conductor(n));
    let mat = m.as_cyclo_matrix(level)?;
    let g = sqrt_embed(n, level)?;
    let mut power = mat.clone();
    for exp in 1..=bound {
        if let Some(lambda) = power.as_scalar() {
            let expected = if exp % 2 == 0 {
                CycloElement::from_int(level, BigInt::from(n).pow((exp / 2) as u32))
            } else {
                g.scalar_mul(&BigInt::from(n).pow(((exp - 1) / 2) as u32))
            };
            if *lambda == expected {
                return Ok(Some(exp));
            }
        }
        if exp < bound {
            power = power.mul(&mat)?;
        }
    }
    Ok(None)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m8() -> ButsonMatrix {
        ButsonMatrix::from_rows(2, &[vec![0, 0], vec![1, 0]]).unwrap()
    }

    fn m6() -> ButsonMatrix {
        ButsonMatrix::from_rows(
            2,
            &[
                vec![0, 0, 0, 0],
                vec![1, 0, 1, 0],
                vec![1, 0, 0, 1],
                vec![1, 1, 0, 0],
            ],
        )
        .unwrap()
    }

    fn m5() -> ButsonMatrix {
        ButsonMatrix::from_rows(
            4,
            &[
                vec![2, 2, 2, 2],
                vec![0, 2, 0, 2],
                vec![1, 1, 3, 3],
                vec![1, 3, 3, 1],
            ],
        )
        .unwrap()
    }

    fn m24() -> ButsonMatrix {
        // [[1, 1], [-i, i]]
        ButsonMatrix::from_rows(4, &[vec![0, 0], vec![3, 1]]).unwrap()
    }

    fn f2() -> ButsonMatrix {
        ButsonMatrix::from_rows(2, &[vec![0, 0], vec![0, 1]]).unwrap()
    }

    #[test]
    fn estimate_m8() {
        let claim = estimate_spectrum(&m8(), 24).unwrap();
        assert_eq!(claim, SpectrumClaim::new(2, 8, [1, 7]));
    }

    #[test]
    fn estimate_m6_with_multiplicities() {
        let claim = estimate_spectrum(&m6(), 24).unwrap();
        assert_eq!(claim, SpectrumClaim::new(4, 6, [1, 1, 5, 5]));
    }

    #[test]
    fn estimate_m24() {
        let claim = estimate_spectrum(&m24(), 48).unwrap();
        assert_eq!(claim, SpectrumClaim::new(2, 24, [7, 23]));
    }

    #[test]
    fn estimate_rejects_infinite_order() {
        // [[ζ8, 1], [-ζ8, 1]]-style matrix whose eigenvalue ratio is not a
        // root of unity: entries (0,0)=1,(0,1)=1,(1,0)=?,(1,1)=ζ8 forces
        // (1,0) = -ζ8^... ; use the enumeration identity c = a - b + d + ℓ/2
        let h = ButsonMatrix::from_rows(8, &[vec![0, 0], vec![5, 1]]).unwrap();
        let e = estimate_spectrum(&h, 96).unwrap_err();
        assert!(matches!(e, SpectraError::NotFiniteOrder { .. }));
    }

    #[test]
    fn certify_m8_and_reject_wrong_claim() {
        assert!(certify_spectrum(&m8(), &SpectrumClaim::new(2, 8, [1, 7])).unwrap());
        assert!(!certify_spectrum(&m8(), &SpectrumClaim::new(2, 8, [1, 3])).unwrap());
        // wrong multiplicity shape is simply false
        assert!(!certify_spectrum(&m8(), &SpectrumClaim::new(2, 8, [1, 7, 7])).unwrap());
    }

    #[test]
    fn certify_m5_primitive_fifth_roots() {
        assert!(certify_spectrum(&m5(), &SpectrumClaim::new(4, 5, [1, 2, 3, 4])).unwrap());
    }

    #[test]
    fn estimates_always_certify() {
        for m in [m8(), m6(), m5(), m24(), f2()] {
            let claim = estimate_spectrum(&m, default_bound(m.root_order())).unwrap();
            assert!(certify_spectrum(&m, &claim).unwrap(), "{m:?} -> {claim}");
        }
    }

    #[test]
    fn unitary_orders() {
        assert_eq!(unitary_order(&m8(), 16).unwrap(), Some(8));
        assert_eq!(unitary_order(&f2(), 16).unwrap(), Some(2));
        assert_eq!(unitary_order(&m6(), 16).unwrap(), Some(6));
        assert_eq!(unitary_order(&m5(), 16).unwrap(), Some(5));

        // Gow's 2x2, scaled by ζ8, has unitary order 3
        let gow = ButsonMatrix::from_rows(4, &[vec![2, 1], vec![0, 1]]).unwrap();
        let scaled = gow.scale_by_root(8, 1);
        assert_eq!(unitary_order(&scaled, 12).unwrap(), Some(3));
        // while the unscaled matrix has order 24
        assert_eq!(unitary_order(&gow, 48).unwrap(), Some(24));
    }

    #[test]
    fn unitary_order_is_minimal() {
        // no proper divisor d of 8 has M8^d equal to the matching scalar
        let m = m8().as_cyclo_matrix(8).unwrap();
        for d in [1u32, 2, 4] {
            let p = m.pow(d).unwrap();
            let is_matching_scalar = p
                .as_scalar()
                .map(|l| {
                    let expected = if d % 2 == 0 {
                        CycloElement::from_int(8, BigInt::from(2).pow(d / 2))
                    } else {
                        sqrt_embed(2, 8).unwrap()
                    };
                    *l == expected
                })
                .unwrap_or(false);
            assert!(!is_matching_scalar, "divisor {d}");
        }
    }

    #[test]
    fn unitary_order_out_of_bound_is_none() {
        assert_eq!(unitary_order(&m8(), 7).unwrap(), None);
    }

    #[test]
    fn claim_accessors() {
        let claim = SpectrumClaim::new(4, 6, [1, 1, 5, 5]);
        assert_eq!(claim.multiplicity_total(), 4);
        assert!(claim.primitive_only());
        assert_eq!(claim.unitary_order(), 6);
        assert_eq!(claim.to_string(), "sqrt(4)*zeta_6^{1,1,5,5}");

        let non_prim = SpectrumClaim::new(4, 6, [2, 3, 3, 4]);
        assert!(!non_prim.primitive_only());

        let unnormalized = SpectrumClaim::new(2, 16, [2, 14]);
        assert_eq!(unnormalized.normalized(), SpectrumClaim::new(2, 8, [1, 7]));
    }

    #[test]
    fn galois_closure_of_certified_claims() {
        for (m, claim) in [
            (m8(), SpectrumClaim::new(2, 8, [1, 7])),
            (m24(), SpectrumClaim::new(2, 24, [7, 23])),
            (m6(), SpectrumClaim::new(4, 6, [1, 1, 5, 5])),
            (m5(), SpectrumClaim::new(4, 5, [1, 2, 3, 4])),
        ] {
            assert!(claim.is_galois_closed(m.root_order()).unwrap(), "{claim}");
        }
        // a multiset that certification would reject is also not closed
        let bogus = SpectrumClaim::new(2, 8, [1, 3]);
        assert!(!bogus.is_galois_closed(2).unwrap());
    }

    #[test]
    fn best_rational_reconstruction() {
        assert_eq!(best_rational(7.0 / 24.0 + 1e-13, 48), (7, 24));
        assert_eq!(best_rational(0.5, 8), (1, 2));
        assert_eq!(best_rational(0.0, 8), (0, 1));
        let (p, q) = best_rational(std::f64::consts::FRAC_1_SQRT_2, 10);
        assert!(q <= 10 && (std::f64::consts::FRAC_1_SQRT_2 - p as f64 / q as f64).abs() < 0.01);
    }
}
