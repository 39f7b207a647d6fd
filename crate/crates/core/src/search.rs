//! Exhaustive and targeted searches: enumeration of But(2, ℓ), classification
//! of the finite-order members against the 2×2 templates, the roots-of-unity
//! brute force behind the Re(α) = √2·Re(λ) constraint, and spectrum-targeted
//! small-matrix search.

use crate::butson::{ButsonMatrix, ExponentGrid};
use crate::cyclotomic::{self, sqrt_embed, CycloElement, RootOfUnity};
use crate::spectra::{self, SpectrumClaim};
use num_bigint::BigInt;
use num_traits::Zero;
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use std::collections::BTreeSet;
use std::fmt;

/// All members of But(2, ℓ): a, b, d range freely over the ℓ-th roots and the
/// remaining entry is forced by orthogonality (c = a − b + d + ℓ/2). Exactly
/// ℓ³ matrices for even ℓ; empty for odd ℓ, where orthogonality would need a
/// factor of −1 outside ⟨ζ_ℓ⟩.
pub fn enumerate_but2(ell: u64) -> Vec<ButsonMatrix> {
    if !ell.is_multiple_of(2) {
        return Vec::new();
    }
    let mut out = Vec::with_capacity((ell * ell * ell) as usize);
    for a in 0..ell {
        for b in 0..ell {
            for d in 0..ell {
                let c = (a + d + ell / 2 + ell - b) % ell;
                let grid = ExponentGrid::new(2, ell, vec![a, b, c, d]).expect("in range");
                out.push(ButsonMatrix::verify(grid).expect("forced entry gives orthogonal rows"));
            }
        }
    }
    out
}

/// Which parametric 2×2 template a finite-order matrix matches.
///
/// Parameters are exponents modulo ℓ: the matrix is
/// [[a, ab], [−ab̄, a]] for M1 and [[a, ab], [∓i·ab̄, ±i·a]] for M2
/// (`conjugated` selects the entrywise-conjugate branch of M2, which swaps
/// the labeling of the two eigenvalues).
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Template {
    Traceless { a: u64, b: u64 },
    M1 { a: u64, b: u64 },
    M2 { a: u64, b: u64, conjugated: bool },
    None,
}

impl Template {
    pub fn name(&self) -> &'static str {
        match self {
            Template::Traceless { .. } => "traceless",
            Template::M1 { .. } => "M1",
            Template::M2 { .. } => "M2",
            Template::None => "none",
        }
    }
}

impl fmt::Display for Template {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Template::Traceless { a, b } => write!(f, "traceless(a={a},b={b})"),
            Template::M1 { a, b } => write!(f, "M1(a={a},b={b})"),
            Template::M2 {
                a,
                b,
                conjugated: false,
            } => write!(f, "M2(a={a},b={b})"),
            Template::M2 {
                a,
                b,
                conjugated: true,
            } => write!(f, "M2*(a={a},b={b})"),
            Template::None => write!(f, "none"),
        }
    }
}

/// Matches the entry pattern of a 2×2 matrix against the templates. Given
/// orthogonality, the class is determined by m22 − m11 (0 for M1, ℓ/4 and
/// 3ℓ/4 for the two M2 branches, ℓ/2 for traceless).
pub fn match_template(m: &ButsonMatrix) -> Template {
    debug_assert_eq!(m.order(), 2);
    let ell = m.root_order();
    let a = m.at(0, 0);
    let b = (m.at(0, 1) + ell - a) % ell;
    let diff = (m.at(1, 1) + ell - a) % ell;
    if diff == 0 {
        Template::M1 { a, b }
    } else if diff == ell / 2 {
        Template::Traceless { a, b }
    } else if ell.is_multiple_of(4) && diff == ell / 4 {
        Template::M2 {
            a,
            b,
            conjugated: false,
        }
    } else if ell.is_multiple_of(4) && diff == 3 * ell / 4 {
        Template::M2 {
            a,
            b,
            conjugated: true,
        }
    } else {
        Template::None
    }
}

/// Classification record for one finite-order member of But(2, ℓ).
#[derive(Clone, Debug)]
pub struct ClassRecord {
    pub matrix: ButsonMatrix,
    pub spectrum: SpectrumClaim,
    /// Multiplicative order of 2^(-1/2)·M.
    pub order: u64,
    /// λ1·λ2⁻¹ in lowest terms (exponents sorted ascending).
    pub ratio: RootOfUnity,
    pub template: Template,
    /// Orders of the two eigenvalue roots of unity.
    pub eigen_orders: (u64, u64),
}

/// Result of classifying But(2, ℓ).
#[derive(Clone, Debug)]
pub struct Classification {
    pub ell: u64,
    pub bound: u64,
    pub total: usize,
    pub records: Vec<ClassRecord>,
    /// Matrices whose unitary has no finite order within the bound.
    pub infinite: Vec<ButsonMatrix>,
}

/// Ratios permitted for finite-order 2×2 matrices: −1, ±i, ±ζ3 and inverses.
pub fn ratio_allowed(r: &RootOfUnity) -> bool {
    matches!(r.order(), 2 | 3 | 4 | 6)
}

impl Classification {
    /// Checks the classification constraints; any violation is returned
    /// loudly rather than silently discarded.
    pub fn violations(&self) -> Vec<String> {
        let mut out = Vec::new();
        for rec in &self.records {
            if !ratio_allowed(&rec.ratio) {
                out.push(format!(
                    "ratio {} of {:?} is outside {{-1, ±i, ±ζ3}}",
                    rec.ratio, rec.matrix
                ));
            }
            let (k1, k2) = rec.eigen_orders;
            if k1 == k2
                && k1 > self.ell
                && !matches!(rec.template, Template::M1 { .. } | Template::M2 { .. })
            {
                out.push(format!(
                    "eigenvalue order {k1} > {} but {:?} matches no template",
                    self.ell, rec.matrix
                ));
            }
        }
        out
    }

    pub fn template_counts(&self) -> Vec<(&'static str, usize)> {
        let mut counts = [("traceless", 0), ("M1", 0), ("M2", 0), ("none", 0)];
        for rec in &self.records {
            let idx = match rec.template {
                Template::Traceless { .. } => 0,
                Template::M1 { .. } => 1,
                Template::M2 { .. } => 2,
                Template::None => 3,
            };
            counts[idx].1 += 1;
        }
        counts.to_vec()
    }
}

fn classify_one(m: &ButsonMatrix, bound: u64) -> Result<ClassRecord, ButsonMatrix> {
    let claim = match spectra::estimate_spectrum(m, bound) {
        Ok(c) => c,
        Err(_) => return Err(m.clone()),
    };
    match spectra::certify_spectrum(m, &claim) {
        Ok(true) => {}
        // a proposed claim the exact check refutes is not finite order
        _ => return Err(m.clone()),
    }
    let exps = claim.exponent_list();
    debug_assert_eq!(exps.len(), 2);
    let (e1, e2) = (exps[0], exps[1]);
    let k = claim.root_order;
    let ratio = RootOfUnity::new(k, e2 as i64 - e1 as i64);
    let orders = (
        RootOfUnity::new(k, e1 as i64).order(),
        RootOfUnity::new(k, e2 as i64).order(),
    );
    Ok(ClassRecord {
        matrix: m.clone(),
        order: claim.unitary_order(),
        ratio,
        template: match_template(m),
        spectrum: claim,
        eigen_orders: orders,
    })
}

/// Classifies every member of But(2, ℓ) with finite unitary order within the
/// default bound 4·lcm(24, ℓ). `jobs` > 1 partitions the enumeration across
/// threads; the output order is deterministic either way.
pub fn classify2(ell: u64, jobs: usize) -> Classification {
    classify2_bounded(ell, jobs, spectra::default_bound(ell))
}

/// `classify2` with an explicit order bound.
pub fn classify2_bounded(ell: u64, jobs: usize, bound: u64) -> Classification {
    let all = enumerate_but2(ell);
    let total = all.len();
    let mut outcomes: Vec<Result<ClassRecord, ButsonMatrix>> = Vec::with_capacity(total);
    if jobs <= 1 || total < 64 {
        outcomes.extend(all.iter().map(|m| classify_one(m, bound)));
    } else {
        let chunk = total.div_ceil(jobs);
        let mut partials: Vec<Vec<Result<ClassRecord, ButsonMatrix>>> = Vec::new();
        std::thread::scope(|scope| {
            let handles: Vec<_> = all
                .chunks(chunk)
                .map(|part| {
                    scope.spawn(move || {
                        part.iter()
                            .map(|m| classify_one(m, bound))
                            .collect::<Vec<_>>()
                    })
                })
                .collect();
            for h in handles {
                partials.push(h.join().expect("classification worker panicked"));
            }
        });
        outcomes.extend(partials.into_iter().flatten());
    }
    let mut records = Vec::new();
    let mut infinite = Vec::new();
    for o in outcomes {
        match o {
            Ok(rec) => records.push(rec),
            Err(m) => infinite.push(m),
        }
    }
    Classification {
        ell,
        bound,
        total,
        records,
        infinite,
    }
}

// ---------------------------------------------------------------------------
// Roots brute force
// ---------------------------------------------------------------------------

/// An exact angle u/k of a root of unity, in lowest terms.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
struct Angle {
    num: u64,
    den: u64,
}

impl Angle {
    fn new(num: u64, den: u64) -> Self {
        let num = num % den;
        let g = cyclotomic::gcd(num, den);
        if num == 0 {
            Angle { num: 0, den: 1 }
        } else {
            Angle {
                num: num / g,
                den: den / g,
            }
        }
    }

    fn conj(self) -> Self {
        Angle::new(self.den - self.num, self.den)
    }

    fn negate(self) -> Self {
        if self.den.is_multiple_of(2) {
            Angle::new(self.num + self.den / 2, self.den)
        } else {
            Angle::new(2 * self.num + self.den, 2 * self.den)
        }
    }

    fn root(self) -> RootOfUnity {
        RootOfUnity::new(self.den, self.num as i64)
    }
}

impl PartialOrd for Angle {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Angle {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        (self.num as u128 * other.den as u128).cmp(&(other.num as u128 * self.den as u128))
    }
}

/// A solution class of Re(α) = √2·Re(λ), canonical up to negation (joint) and
/// complex conjugation (per coordinate).
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct RootPair {
    pub alpha: (u64, u64),
    pub lambda: (u64, u64),
}

impl fmt::Display for RootPair {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let show = |(k, u): (u64, u64)| RootOfUnity::new(k, u as i64).to_string();
        write!(f, "[{}, {}]", show(self.alpha), show(self.lambda))
    }
}

fn canonical_pair(alpha: Angle, lambda: Angle) -> RootPair {
    let mut best: Option<(Angle, Angle)> = None;
    for ca in 0..2 {
        for cl in 0..2 {
            for n in 0..2 {
                let mut a = if ca == 0 { alpha } else { alpha.conj() };
                let mut l = if cl == 0 { lambda } else { lambda.conj() };
                if n == 1 {
                    a = a.negate();
                    l = l.negate();
                }
                if best.map(|(ba, bl)| (a, l) < (ba, bl)).unwrap_or(true) {
                    best = Some((a, l));
                }
            }
        }
    }
    let (a, l) = best.unwrap();
    let (ra, rl) = (a.root(), l.root());
    RootPair {
        alpha: (ra.order(), ra.exponent()),
        lambda: (rl.order(), rl.exponent()),
    }
}

/// Certifies 2·Re(α) = √2·2·Re(λ) as an exact identity in Z[ζ_N].
fn certify_real_relation(alpha: Angle, lambda: Angle) -> bool {
    let level = cyclotomic::lcm(cyclotomic::lcm(alpha.den, lambda.den), 8);
    let two_re = |a: Angle| -> CycloElement {
        let e = a.num * (level / a.den);
        &CycloElement::root(level, e) + &CycloElement::root(level, (level - e) % level)
    };
    let lhs = two_re(alpha);
    let rhs = &sqrt_embed(2, level).expect("8 | level") * &two_re(lambda);
    lhs == rhs
}

/// All pairs of roots of unity (α, λ) of order ≤ bound with
/// Re(α) = √2·Re(λ), deduplicated modulo negation and conjugation.
/// Candidates are matched numerically at 1e−12 and then certified exactly.
pub fn roots_brute_force(bound: u64) -> Vec<RootPair> {
    assert!(bound >= 1);
    let mut roots: Vec<(Angle, f64)> = Vec::new();
    for k in 1..=bound {
        for u in 0..k {
            if (u == 0 && k == 1) || (u > 0 && cyclotomic::gcd(u, k) == 1) {
                let angle = Angle::new(u, k);
                let cos = (2.0 * std::f64::consts::PI * u as f64 / k as f64).cos();
                roots.push((angle, cos));
            }
        }
    }
    let mut by_cos = roots.clone();
    by_cos.sort_by(|a, b| a.1.partial_cmp(&b.1).unwrap());
    let cos_values: Vec<f64> = by_cos.iter().map(|r| r.1).collect();

    let mut classes = BTreeSet::new();
    for &(lambda, cos_l) in &roots {
        let target = std::f64::consts::SQRT_2 * cos_l;
        if target.abs() > 1.0 + 1e-12 {
            continue;
        }
        let lo = cos_values.partition_point(|&c| c < target - 1e-12);
        for idx in lo..cos_values.len() {
            if cos_values[idx] > target + 1e-12 {
                break;
            }
            let alpha = by_cos[idx].0;
            if certify_real_relation(alpha, lambda) {
                classes.insert(canonical_pair(alpha, lambda));
            }
        }
    }
    classes.into_iter().collect()
}

// ---------------------------------------------------------------------------
// Spectrum-targeted search
// ---------------------------------------------------------------------------

#[derive(Debug, Clone)]
pub struct SearchOutcome {
    pub matrix: Option<ButsonMatrix>,
    /// Fully assembled candidates submitted to exact certification.
    pub examined: u64,
}

/// Exact orthogonality of two exponent rows at root order k.
fn rows_orthogonal(a: &[u64], b: &[u64], k: u64) -> bool {
    let mut counts = vec![BigInt::zero(); k as usize];
    for (x, y) in a.iter().zip(b.iter()) {
        counts[((x + k - y) % k) as usize] += 1;
    }
    CycloElement::from_coeffs(k, counts).is_zero()
}

/// Randomized backtracking search over But(n, ℓ) for a matrix whose spectrum
/// certifies against `target`. Rows are chosen in a seeded shuffled order
/// with orthogonality pruning; partial diagonals are pruned against the
/// claimed trace (each remaining diagonal entry has modulus 1). Returns the
/// first certified matrix, or nothing once `budget` full candidates have
/// been examined or the space is exhausted.
pub fn spectrum_search(
    n: usize,
    ell: u64,
    target: &SpectrumClaim,
    budget: u64,
    rng_seed: u64,
) -> SearchOutcome {
    assert!(n <= 6, "search is sized for n <= 6");
    if target.multiplicity_total() != n || target.m != n as u64 {
        return SearchOutcome {
            matrix: None,
            examined: 0,
        };
    }
    // claimed trace, numerically, for the diagonal prune
    let target_trace: num_complex::Complex64 = target
        .exponent_list()
        .iter()
        .map(|&e| {
            RootOfUnity::new(target.root_order, e as i64).to_complex() * (target.m as f64).sqrt()
        })
        .sum();

    let mut all_rows: Vec<Vec<u64>> = Vec::new();
    let mut row = vec![0u64; n];
    loop {
        all_rows.push(row.clone());
        let mut i = 0;
        loop {
            if i == n {
                break;
            }
            row[i] += 1;
            if row[i] < ell {
                break;
            }
            row[i] = 0;
            i += 1;
        }
        if i == n {
            break;
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(rng_seed);
    all_rows.shuffle(&mut rng);

    struct Ctx<'a> {
        n: usize,
        ell: u64,
        rows: &'a [Vec<u64>],
        target: &'a SpectrumClaim,
        target_trace: num_complex::Complex64,
        budget: u64,
        examined: u64,
    }

    fn dfs(ctx: &mut Ctx, chosen: &mut Vec<usize>) -> Option<ButsonMatrix> {
        if chosen.len() == ctx.n {
            ctx.examined += 1;
            let mut exps = Vec::with_capacity(ctx.n * ctx.n);
            for &ri in chosen.iter() {
                exps.extend_from_slice(&ctx.rows[ri]);
            }
            let grid = ExponentGrid::new(ctx.n, ctx.ell, exps).expect("rows sized");
            let m = ButsonMatrix::verify(grid).expect("rows pairwise orthogonal");
            if spectra::certify_spectrum(&m, ctx.target).unwrap_or(false) {
                return Some(m);
            }
            return None;
        }
        let depth = chosen.len();
        for ri in 0..ctx.rows.len() {
            if ctx.examined >= ctx.budget {
                return None;
            }
            let candidate = &ctx.rows[ri];
            if !chosen
                .iter()
                .all(|&prev| rows_orthogonal(&ctx.rows[prev], candidate, ctx.ell))
            {
                continue;
            }
            // partial trace prune
            let mut partial = num_complex::Complex64::new(0.0, 0.0);
            for (d, &prev) in chosen.iter().enumerate() {
                partial += RootOfUnity::new(ctx.ell, ctx.rows[prev][d] as i64).to_complex();
            }
            partial += RootOfUnity::new(ctx.ell, candidate[depth] as i64).to_complex();
            let remaining = (ctx.n - depth - 1) as f64;
            if (ctx.target_trace - partial).norm() > remaining + 1e-6 {
                continue;
            }
            chosen.push(ri);
            if let Some(found) = dfs(ctx, chosen) {
                return Some(found);
            }
            chosen.pop();
        }
        None
    }

    let mut ctx = Ctx {
        n,
        ell,
        rows: &all_rows,
        target,
        target_trace,
        budget,
        examined: 0,
    };
    let mut chosen = Vec::new();
    let matrix = dfs(&mut ctx, &mut chosen);
    SearchOutcome {
        matrix,
        examined: ctx.examined,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn enumeration_counts_are_cubes() {
        for ell in [2u64, 4, 6] {
            let all = enumerate_but2(ell);
            assert_eq!(all.len(), (ell * ell * ell) as usize);
        }
        assert!(enumerate_but2(3).is_empty());
        assert!(enumerate_but2(5).is_empty());
    }

    #[test]
    fn no_member_of_but_2_3_exists() {
        // exhaustive check over every 2x2 grid of cube roots
        let mut found = 0;
        for idx in 0..81u64 {
            let exps = vec![idx % 3, (idx / 3) % 3, (idx / 9) % 3, (idx / 27) % 3];
            if ButsonMatrix::verify(ExponentGrid::new(2, 3, exps).unwrap()).is_ok() {
                found += 1;
            }
        }
        assert_eq!(found, 0);
    }

    #[test]
    fn classify_ell_2_is_all_finite() {
        let c = classify2(2, 1);
        assert_eq!(c.total, 8);
        assert_eq!(c.records.len(), 8);
        assert!(c.infinite.is_empty());
        assert!(c.violations().is_empty());
        // M1 instances over ±1 have both eigenvalues of order 8 > 2
        for rec in &c.records {
            if let Template::M1 { .. } = rec.template {
                assert_eq!(rec.eigen_orders, (8, 8));
                assert_eq!(rec.order, 8);
            }
        }
    }

    #[test]
    fn classify_ell_4_m2_instances_have_order_24_eigenvalues() {
        let c = classify2(4, 1);
        assert_eq!(c.total, 64);
        assert_eq!(c.records.len(), 64);
        assert!(c.violations().is_empty());
        let mut seen_m2 = false;
        for rec in &c.records {
            if let Template::M2 {
                a: 0,
                b: 0,
                conjugated: false,
            } = rec.template
            {
                seen_m2 = true;
                assert_eq!(rec.eigen_orders, (24, 24));
                assert_eq!(rec.order, 24);
            }
        }
        assert!(seen_m2);
    }

    #[test]
    fn classify_ell_8_has_infinite_members_and_mixed_m1_orders() {
        let c = classify2(8, 2);
        assert_eq!(c.total, 512);
        assert_eq!(c.records.len(), 256);
        assert_eq!(c.infinite.len(), 256);
        assert!(c.violations().is_empty());
        // an M1 instance with a a primitive 8th root has one real and one
        // purely imaginary eigenvalue (orders differ)
        let mut seen_split = false;
        for rec in &c.records {
            if let Template::M1 { a, .. } = rec.template {
                if cyclotomic::gcd(a, 8) == 1 {
                    let (k1, k2) = rec.eigen_orders;
                    assert_ne!(k1, k2, "{:?}", rec.matrix);
                    assert!(k1 <= 2 || k1 == 4);
                    assert!(k2 <= 2 || k2 == 4);
                    seen_split = true;
                }
            }
        }
        assert!(seen_split);
    }

    #[test]
    fn classify_is_deterministic_across_job_counts() {
        let a = classify2(4, 1);
        let b = classify2(4, 3);
        let grids = |c: &Classification| {
            c.records
                .iter()
                .map(|r| format!("{:?}|{}|{}", r.matrix, r.order, r.template))
                .collect::<Vec<_>>()
        };
        assert_eq!(grids(&a), grids(&b));
        assert_eq!(a.infinite.len(), b.infinite.len());
    }

    #[test]
    fn every_finite_matrix_at_ell_2_mod_4_has_m1_orders_8_times_odd_part() {
        // at ℓ = 2t with t odd, M1 records have equal eigenvalue orders
        // 8·t' where t' is the odd part of the order of a
        for ell in [2u64, 6] {
            let c = classify2(ell, 1);
            for rec in &c.records {
                if let Template::M1 { a, .. } = rec.template {
                    let ord_a = RootOfUnity::new(ell, a as i64).order();
                    let odd_part = ord_a >> ord_a.trailing_zeros();
                    let (k1, k2) = rec.eigen_orders;
                    assert_eq!(k1, k2);
                    assert_eq!(k1, 8 * odd_part, "a={a} at ell={ell}");
                    // a primitive parameter realizes the full order 8t
                    if ord_a == ell || ord_a == ell / 2 {
                        assert_eq!(k1, 8 * (ell / 2));
                    }
                }
            }
        }
    }

    #[test]
    fn templates_from_the_catalog_shapes() {
        // M8 = [[1,1],[-1,1]] is M1(a=0, b=0) at ℓ=2
        let m8 = ButsonMatrix::from_rows(2, &[vec![0, 0], vec![1, 0]]).unwrap();
        assert_eq!(match_template(&m8), Template::M1 { a: 0, b: 0 });
        // M24 = [[1,1],[-i,i]] is M2(a=0, b=0) at ℓ=4
        let m24 = ButsonMatrix::from_rows(4, &[vec![0, 0], vec![3, 1]]).unwrap();
        assert_eq!(
            match_template(&m24),
            Template::M2 {
                a: 0,
                b: 0,
                conjugated: false
            }
        );
        // its entrywise conjugate matches the conjugate branch
        assert_eq!(
            match_template(&m24.conjugate_entries()),
            Template::M2 {
                a: 0,
                b: 0,
                conjugated: true
            }
        );
        // F2 is traceless
        let f2 = ButsonMatrix::from_rows(2, &[vec![0, 0], vec![0, 1]]).unwrap();
        assert_eq!(match_template(&f2), Template::Traceless { a: 0, b: 0 });
    }

    #[test]
    fn roots_brute_force_finds_exactly_three_classes() {
        let classes = roots_brute_force(24);
        let expected = vec![
            RootPair {
                alpha: (1, 0),
                lambda: (8, 1),
            },
            RootPair {
                alpha: (4, 1),
                lambda: (4, 1),
            },
            RootPair {
                alpha: (8, 1),
                lambda: (6, 1),
            },
        ];
        assert_eq!(classes, expected);
    }

    #[test]
    fn roots_brute_force_small_bound() {
        let classes = roots_brute_force(4);
        assert_eq!(
            classes,
            vec![RootPair {
                alpha: (4, 1),
                lambda: (4, 1)
            }]
        );
    }

    #[test]
    fn roots_brute_force_is_stable_in_the_bound() {
        let at_8 = roots_brute_force(8);
        assert_eq!(at_8.len(), 3);
        for b in [12u64, 30, 48] {
            assert_eq!(roots_brute_force(b), at_8, "bound {b}");
        }
    }

    #[test]
    fn search_finds_turyn_shape_at_order_2() {
        let target = SpectrumClaim::new(2, 8, [1, 7]);
        let out = spectrum_search(2, 2, &target, 100, 7);
        let m = out
            .matrix
            .expect("a 2x2 real matrix with this spectrum exists");
        assert!(spectra::certify_spectrum(&m, &target).unwrap());
    }

    #[test]
    fn search_exhausts_impossible_target() {
        // eigenvalue sum √2(ζ5 + ζ5⁴) is not an integer, so no 2x2 real
        // matrix can have this spectrum; all 8 candidates are refuted
        let target = SpectrumClaim::new(2, 5, [1, 4]);
        let out = spectrum_search(2, 2, &target, 1000, 0);
        assert!(out.matrix.is_none());
        assert!(out.examined <= 8);
    }

    #[test]
    fn search_finds_primitive_fifth_root_spectrum_at_n4() {
        let target = SpectrumClaim::new(4, 5, [1, 2, 3, 4]);
        let out = spectrum_search(4, 4, &target, 500_000, 1);
        let m = out.matrix.expect("witness exists");
        assert!(spectra::certify_spectrum(&m, &target).unwrap());
    }
}
