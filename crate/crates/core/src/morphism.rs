//! Sound pairs and plug-in morphisms between Butson classes.
//!
//! A seed M ∈ But(m, ℓ) with certified spectrum √m·{ζ_K^e} induces the map
//! φ: ζ_K^i ↦ √m^(1−i)·M^i on the exponents i in its Hadamard-power set T
//! (those i for which the scaled power is again Butson). For a pair (H, M)
//! satisfying the two soundness conditions (every entry exponent of H lies
//! in T, and every entrywise power H^(j) over the eigenvalue exponents j is
//! Butson) the block matrix H^φ is a verified member of But(mn, ℓ*), where
//! ℓ* is computed from the entries actually realized rather than trusted.

use crate::butson::{ButsonError, ButsonMatrix, ExponentGrid};
use crate::cyclotomic::{self, sqrt_conductor, sqrt_embed, CycloElement, CycloError};
use crate::exact_matrix::MatrixError;
use crate::spectra::{self, SpectraError, SpectrumClaim};
use num_bigint::BigInt;
use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Clone)]
pub enum MorphismError {
    #[error(transparent)]
    Cyclo(#[from] CycloError),
    #[error(transparent)]
    Matrix(#[from] MatrixError),
    #[error(transparent)]
    Butson(#[from] ButsonError),
    #[error(transparent)]
    Spectra(#[from] SpectraError),
    #[error("claim {claim} is not the spectrum of the given matrix")]
    ClaimRejected { claim: String },
    #[error("root order {h_root_order} of H is not a multiple of the seed period {seed_period}")]
    IncompatibleOrders { h_root_order: u64, seed_period: u64 },
    #[error("twist parameter {t} is not coprime to the eigenvalue order {period}")]
    TwistNotCoprime { t: u64, period: u64 },
    #[error("tensor lift requires a Hermitian matrix")]
    NotHermitian,
    #[error("tensor lift requires a seed with all-primitive spectrum")]
    NotPrimitiveSpectrum,
    #[error("tensor lift requires 4 | K, got K = {period}")]
    PeriodNotDivisibleBy4 { period: u64 },
    #[error("Hermitian matrix of order {order} cannot have trace {trace}")]
    BadHermitianTrace { order: usize, trace: i64 },
    #[error("sound-pair violation: {0}")]
    Unsound(SoundnessViolation),
    #[error("internal invariant failed: {0}")]
    Internal(String),
}

/// Which soundness condition failed, and where.
#[derive(Debug, PartialEq, Eq, Clone)]
pub enum SoundnessViolation {
    /// An entry exponent of H lies outside the supplied domain X.
    EntryOutsideDomain { exponent: u64 },
    /// A certified eigenvalue exponent lies outside the supplied range Y.
    EigenvalueOutsideRange { exponent: u64 },
    /// Condition 1: ζ_k^i ∈ X but √m^(1−i)·M^i is not Butson.
    PowerNotHadamard { exponent: u64 },
    /// Condition 2: ζ_k^j ∈ Y but H^(j) is not Butson.
    EntrywisePowerNotHadamard {
        exponent: u64,
        row_a: usize,
        row_b: usize,
    },
}

impl fmt::Display for SoundnessViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SoundnessViolation::EntryOutsideDomain { exponent } => {
                write!(f, "entry exponent {exponent} of H is outside X")
            }
            SoundnessViolation::EigenvalueOutsideRange { exponent } => {
                write!(f, "eigenvalue exponent {exponent} is outside Y")
            }
            SoundnessViolation::PowerNotHadamard { exponent } => {
                write!(f, "condition 1 fails at exponent {exponent}: {exponent} is not in the Hadamard-power set")
            }
            SoundnessViolation::EntrywisePowerNotHadamard {
                exponent,
                row_a,
                row_b,
            } => {
                write!(
                    f,
                    "condition 2 fails at exponent {exponent}: H^({exponent}) has non-orthogonal rows {row_a}, {row_b}"
                )
            }
        }
    }
}

/// Computes the Hadamard-power set of M for exponents 1..=period.
///
/// For odd i the candidate is M^i divided by the integer m^((i−1)/2); for
/// even i each entry is matched against √m·m^((i−2)/2)·ζ^e at a level large
/// enough to hold every torsion unit of Q[ζ_ℓ, √m] (2ℓ for even ℓ, 4ℓ for
/// odd ℓ). Recognized powers are returned at their minimal root order.
pub fn hadamard_power_set(
    matrix: &ButsonMatrix,
    period: u64,
) -> Result<BTreeMap<u64, ButsonMatrix>, MorphismError> {
    let m = matrix.order() as u64;
    let ell = matrix.root_order();
    let torsion = if ell.is_multiple_of(2) {
        2 * ell
    } else {
        4 * ell
    };
    let level = cyclotomic::lcm(torsion, sqrt_conductor(m));
    let g = sqrt_embed(m, level)?;
    let base = matrix.as_cyclo_matrix(ell)?;
    let mut out = BTreeMap::new();
    let mut power = base.clone();
    for i in 1..=period {
        if i > 1 {
            power = power.mul(&base)?;
        }
        let scale = if i % 2 == 1 {
            None // divide by the integer m^((i-1)/2) instead
        } else {
            Some(g.scalar_mul(&BigInt::from(m).pow(((i - 2) / 2) as u32)))
        };
        let divisor = BigInt::from(m).pow(((i - 1) / 2) as u32);
        let n = matrix.order();
        let mut exps = Vec::with_capacity(n * n);
        let mut ok = true;
        'entries: for r in 0..n {
            for c in 0..n {
                let entry = power.at(r, c);
                let detected = match &scale {
                    None => match entry.div_exact_int(&divisor) {
                        Some(q) => cyclotomic::detect_scaled_root(
                            &q.embed(level)?,
                            &CycloElement::one(level),
                        )?,
                        None => None,
                    },
                    Some(s) => cyclotomic::detect_scaled_root(&entry.embed(level)?, s)?,
                };
                match detected {
                    Some(e) => exps.push(e),
                    None => {
                        ok = false;
                        break 'entries;
                    }
                }
            }
        }
        if !ok {
            continue;
        }
        // reduce the recognized grid to its minimal root order
        let g_all = exps.iter().fold(level, |acc, &e| cyclotomic::gcd(acc, e));
        let order = level / g_all;
        let reduced: Vec<u64> = exps.iter().map(|&e| e / g_all).collect();
        let grid = ExponentGrid::new(n, order.max(1), reduced)?;
        let verified = ButsonMatrix::verify(grid).map_err(|e| {
            MorphismError::Internal(format!("recognized power {i} failed verification: {e}"))
        })?;
        out.insert(i, verified);
    }
    Ok(out)
}

/// A seed matrix with certified spectrum and fully computed Hadamard-power set.
#[derive(Clone, PartialEq, Debug)]
pub struct MorphismSeed {
    matrix: ButsonMatrix,
    spectrum: SpectrumClaim,
    period: u64,
    powers: BTreeMap<u64, ButsonMatrix>,
}

impl MorphismSeed {
    /// Estimates and certifies the spectrum, then computes the power set.
    pub fn analyze(matrix: ButsonMatrix, bound: u64) -> Result<Self, MorphismError> {
        let claim = spectra::estimate_spectrum(&matrix, bound)?;
        Self::with_claim(matrix, claim)
    }

    /// Builds a seed from an explicit spectrum claim; the claim is certified
    /// exactly before anything is trusted.
    pub fn with_claim(matrix: ButsonMatrix, claim: SpectrumClaim) -> Result<Self, MorphismError> {
        if !spectra::certify_spectrum(&matrix, &claim)? {
            return Err(MorphismError::ClaimRejected {
                claim: claim.to_string(),
            });
        }
        let claim = claim.normalized();
        let period = claim.unitary_order();
        let powers = hadamard_power_set(&matrix, period)?;
        Ok(MorphismSeed {
            matrix,
            spectrum: claim,
            period,
            powers,
        })
    }

    pub fn matrix(&self) -> &ButsonMatrix {
        &self.matrix
    }

    pub fn spectrum(&self) -> &SpectrumClaim {
        &self.spectrum
    }

    /// The modulus for power exponents: the unitary order of m^(-1/2)·M.
    pub fn period(&self) -> u64 {
        self.period
    }

    /// Degree of the induced morphism (the order of M).
    pub fn degree(&self) -> usize {
        self.matrix.order()
    }

    /// Keys are exponents i in 1..=period with √m^(1−i)·M^i Butson.
    pub fn power_set(&self) -> &BTreeMap<u64, ButsonMatrix> {
        &self.powers
    }

    /// T as residues modulo the period (period itself recorded as 0).
    pub fn t_residues(&self) -> BTreeSet<u64> {
        self.powers.keys().map(|&i| i % self.period).collect()
    }

    /// The recognized scaled power for any integer exponent, by residue.
    pub fn power(&self, exponent: u64) -> Option<&ButsonMatrix> {
        let r = exponent % self.period;
        let key = if r == 0 { self.period } else { r };
        self.powers.get(&key)
    }

    pub fn contains_power(&self, exponent: u64) -> bool {
        self.power(exponent).is_some()
    }

    /// lcm of the realized root orders over the whole power set.
    pub fn effective_output_order(&self) -> u64 {
        self.powers
            .values()
            .map(|b| b.root_order())
            .fold(1, cyclotomic::lcm)
    }

    /// lcm of the realized root orders over a chosen set of exponents;
    /// None if some exponent is missing from T.
    pub fn output_order_for(&self, exponents: impl IntoIterator<Item = u64>) -> Option<u64> {
        let mut acc = 1;
        for e in exponents {
            acc = cyclotomic::lcm(acc, self.power(e)?.root_order());
        }
        Some(acc)
    }

    /// Maximal arithmetic progressions (translates of d-th roots) inside T.
    pub fn complete_domains(&self) -> Vec<(u64, Vec<u64>)> {
        complete_domain(&self.t_residues(), self.period)
    }
}

/// All maximal pairs (d, offset) with {offset + j·(k/d) mod k} ⊆ T and d | k,
/// grouped by d, sorted descending by d.
pub fn complete_domain(t: &BTreeSet<u64>, k: u64) -> Vec<(u64, Vec<u64>)> {
    let mut found: Vec<(u64, u64)> = Vec::new(); // (d, offset mod k/d)
    let mut divisors = cyclotomic::divisors(k);
    divisors.reverse();
    for &d in &divisors {
        let step = k / d;
        for c in 0..step {
            if !(0..d).all(|j| t.contains(&((c + j * step) % k))) {
                continue;
            }
            let contained = found
                .iter()
                .any(|&(d_big, c_big)| d_big % d == 0 && c % (k / d_big) == c_big);
            if !contained {
                found.push((d, c));
            }
        }
    }
    let mut grouped: BTreeMap<u64, Vec<u64>> = BTreeMap::new();
    for (d, c) in found {
        grouped.entry(d).or_default().push(c);
    }
    grouped.into_iter().rev().collect()
}

/// d = Π p^(α_p) over primes p | k, with α_p maximal such that p^(α_p + 1) | k.
pub fn cor_d_formula(k: u64) -> u64 {
    cyclotomic::factorize(k)
        .into_iter()
        .map(|(p, e)| p.pow(e - 1))
        .product()
}

/// A pair (H, seed) that passed both soundness conditions for the sets (X, Y).
#[derive(Debug, Clone)]
pub struct SoundPair<'a> {
    h: ButsonMatrix,
    seed: &'a MorphismSeed,
    x: BTreeSet<u64>,
    y: BTreeSet<u64>,
}

impl<'a> SoundPair<'a> {
    pub fn h(&self) -> &ButsonMatrix {
        &self.h
    }

    pub fn seed(&self) -> &MorphismSeed {
        self.seed
    }

    pub fn x(&self) -> &BTreeSet<u64> {
        &self.x
    }

    pub fn y(&self) -> &BTreeSet<u64> {
        &self.y
    }

    /// The plug-in construction H^φ: the (i, j) block is the recognized grid
    /// of √m^(1−h_ij)·M^(h_ij). The output root order is the lcm of the root
    /// orders actually realized by the blocks, and the result is re-verified
    /// before being returned.
    pub fn apply(&self) -> ButsonMatrix {
        let m = self.seed.degree();
        let n = self.h.order();
        let out_order = self
            .seed
            .output_order_for(self.h.entry_set())
            .expect("soundness condition 1 covers every entry");
        let size = m * n;
        let mut exps = vec![0u64; size * size];
        for hr in 0..n {
            for hc in 0..n {
                let block = self
                    .seed
                    .power(self.h.at(hr, hc))
                    .expect("soundness condition 1 covers every entry");
                let f = out_order / block.root_order();
                for br in 0..m {
                    for bc in 0..m {
                        exps[(hr * m + br) * size + (hc * m + bc)] = block.at(br, bc) * f;
                    }
                }
            }
        }
        let grid = ExponentGrid::new(size, out_order, exps).expect("block assembly is square");
        ButsonMatrix::verify(grid)
            .expect("plug-in image of a sound pair must verify; failure is an implementation bug")
    }
}

/// Checks both soundness conditions for (H, seed) exactly.
///
/// X defaults to the entry set of H; Y defaults to the certified eigenvalue
/// exponents expressed at the root order of H. Larger sets may be supplied
/// to probe the conditions independently.
pub fn check_sound<'a>(
    h: &ButsonMatrix,
    seed: &'a MorphismSeed,
    x: Option<BTreeSet<u64>>,
    y: Option<BTreeSet<u64>>,
) -> Result<SoundPair<'a>, MorphismError> {
    let k = h.root_order();
    let period = seed.period();
    if !k.is_multiple_of(period) {
        return Err(MorphismError::IncompatibleOrders {
            h_root_order: k,
            seed_period: period,
        });
    }
    let entries = h.entry_set();
    let x = x.unwrap_or_else(|| entries.clone());
    for &e in &entries {
        if !x.contains(&e) {
            return Err(MorphismError::Unsound(
                SoundnessViolation::EntryOutsideDomain { exponent: e },
            ));
        }
    }
    let claim = seed.spectrum();
    let eigen_at_k: BTreeSet<u64> = claim
        .exponents
        .keys()
        .map(|&e| e * (k / claim.root_order) % k)
        .collect();
    let y = y.unwrap_or_else(|| eigen_at_k.clone());
    for &e in &eigen_at_k {
        if !y.contains(&e) {
            return Err(MorphismError::Unsound(
                SoundnessViolation::EigenvalueOutsideRange { exponent: e },
            ));
        }
    }
    // condition 1: every exponent of X indexes a Hadamard power of the seed
    for &i in &x {
        if !seed.contains_power(i) {
            return Err(MorphismError::Unsound(
                SoundnessViolation::PowerNotHadamard { exponent: i },
            ));
        }
    }
    // condition 2: every entrywise power over Y is Butson
    for &j in &y {
        if let Err(ButsonError::NotHadamard { row_a, row_b }) = ButsonMatrix::verify(h.power_map(j))
        {
            return Err(MorphismError::Unsound(
                SoundnessViolation::EntrywisePowerNotHadamard {
                    exponent: j,
                    row_a,
                    row_b,
                },
            ));
        }
    }
    Ok(SoundPair {
        h: h.clone(),
        seed,
        x,
        y,
    })
}

/// Scales the seed by ζ_t (t coprime to the eigenvalue order), producing the
/// seed of ζ_t·M with eigenvalue order K·t. The new power set is recomputed
/// exactly and checked against the containment the construction predicts:
/// every exponent a ≡ i (mod K) with i ∈ T lands in T'.
pub fn twist(seed: &MorphismSeed, t: u64) -> Result<MorphismSeed, MorphismError> {
    assert!(t >= 1);
    let period = seed.period();
    if cyclotomic::gcd(t, period) != 1 {
        return Err(MorphismError::TwistNotCoprime { t, period });
    }
    let matrix = seed.matrix().scale_by_root(t, 1);
    let claim = seed.spectrum();
    let new_order = claim.root_order * t;
    let exponents: Vec<u64> = claim
        .exponent_list()
        .iter()
        .map(|&e| (e * t + claim.root_order) % new_order)
        .collect();
    let new_claim = SpectrumClaim::new(claim.m, new_order, exponents);
    let twisted = MorphismSeed::with_claim(matrix, new_claim)?;
    for &i in seed.power_set().keys() {
        for a in 1..=twisted.period() {
            if a % period == i % period && !twisted.contains_power(a) {
                return Err(MorphismError::Internal(format!(
                    "twist by {t}: exponent {a} ≡ {i} (mod {period}) missing from the twisted power set"
                )));
            }
        }
    }
    Ok(twisted)
}

/// Lifts a seed through a Hermitian H: the seed of H ⊗ M. Requires 4 | K and
/// an all-primitive spectrum; H contributes eigenvalues ±√n, so each exponent
/// e splits into e and e + K/2 weighted by the signature of H. The lifted
/// claim is re-certified exactly.
pub fn tensor_lift(h: &ButsonMatrix, seed: &MorphismSeed) -> Result<MorphismSeed, MorphismError> {
    if !h.is_hermitian() {
        return Err(MorphismError::NotHermitian);
    }
    if !seed.spectrum().primitive_only() {
        return Err(MorphismError::NotPrimitiveSpectrum);
    }
    let period = seed.period();
    if !period.is_multiple_of(4) {
        return Err(MorphismError::PeriodNotDivisibleBy4 { period });
    }
    let n = h.order();
    let k = h.root_order();
    // Hermitian entries on the diagonal are ±1; the trace is (p − q)·√n for
    // eigenvalue multiplicities p + q = n
    let mut trace: i64 = 0;
    for i in 0..n {
        let e = h.at(i, i);
        trace += if e == 0 {
            1
        } else if k.is_multiple_of(2) && e == k / 2 {
            -1
        } else {
            return Err(MorphismError::Internal(format!(
                "Hermitian matrix has non-real diagonal exponent {e}"
            )));
        };
    }
    let isqrt = (n as f64).sqrt().round() as i64;
    let (p, q) = if isqrt * isqrt == n as i64 {
        let diff_ok = trace % isqrt == 0 && (n as i64 + trace / isqrt) % 2 == 0;
        if !diff_ok {
            return Err(MorphismError::BadHermitianTrace { order: n, trace });
        }
        let p = (n as i64 + trace / isqrt) / 2;
        (p as usize, n - p as usize)
    } else {
        if trace != 0 || !n.is_multiple_of(2) {
            return Err(MorphismError::BadHermitianTrace { order: n, trace });
        }
        (n / 2, n / 2)
    };
    let product = h.kron(seed.matrix());
    let claim = seed.spectrum();
    let mut exponents = Vec::new();
    for (&e, &mult) in &claim.exponents {
        exponents.extend(std::iter::repeat_n(e, mult * p));
        exponents.extend(std::iter::repeat_n(
            (e + claim.root_order / 2) % claim.root_order,
            mult * q,
        ));
    }
    let lifted_claim = SpectrumClaim::new(claim.m * n as u64, claim.root_order, exponents);
    MorphismSeed::with_claim(product, lifted_claim)
}

/// Report of the coprime-power probe: does T contain every exponent coprime
/// to the eigenvalue order? Evidence only; nothing is asserted beyond the
/// checked seed.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ProbeReport {
    pub applicable: bool,
    pub period: u64,
    pub missing: BTreeSet<u64>,
}

impl ProbeReport {
    pub fn confirmed(&self) -> bool {
        self.applicable && self.missing.is_empty()
    }
}

impl fmt::Display for ProbeReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if !self.applicable {
            write!(f, "not applicable: spectrum is not all-primitive")
        } else if self.missing.is_empty() {
            write!(
                f,
                "confirmed: every exponent coprime to {} is in T",
                self.period
            )
        } else {
            let list = self
                .missing
                .iter()
                .map(|e| e.to_string())
                .collect::<Vec<_>>()
                .join(",");
            write!(
                f,
                "counterexample exponents coprime to {}: {{{list}}}",
                self.period
            )
        }
    }
}

/// Checks whether every exponent coprime to K lies in T.
pub fn coprime_conjecture_probe(seed: &MorphismSeed) -> ProbeReport {
    let period = seed.period();
    if !seed.spectrum().primitive_only() {
        return ProbeReport {
            applicable: false,
            period,
            missing: BTreeSet::new(),
        };
    }
    let missing = (1..=period)
        .filter(|&i| cyclotomic::gcd(i, period) == 1 && !seed.contains_power(i))
        .collect();
    ProbeReport {
        applicable: true,
        period,
        missing,
    }
}
