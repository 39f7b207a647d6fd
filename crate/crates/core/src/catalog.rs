//! Built-in seed matrices with machine-checkable property claims.
//!
//! Claims are data, not code: each entry carries a list of tagged records
//! interpreted by one checking engine, and every claim is re-derived exactly
//! on demand; nothing is trusted because it is written here.

use crate::butson::ButsonMatrix;
use crate::cyclotomic::CycloElement;
use crate::exact_matrix::CycloMatrix;
use crate::morphism::{self, MorphismSeed};
use crate::spectra::{self, SpectrumClaim};
use num_bigint::BigInt;
use std::collections::BTreeSet;
use std::fmt;
use std::sync::LazyLock;

/// One verifiable assertion about a catalog matrix.
#[derive(Clone, Debug)]
pub enum Claim {
    /// Membership in But(n, k).
    IsButson { n: usize, k: u64 },
    /// The certified spectrum √m · {ζ_K^e}.
    Spectrum(SpectrumClaim),
    /// The full Hadamard-power set T modulo the eigenvalue order.
    PowerSet { expected: BTreeSet<u64> },
    /// M^power = scalar · I exactly.
    ScalarPower { power: u32, scalar: i64 },
    /// The recognized scaled power √m^(1−i)·M^i equals this printed matrix.
    PrintedPower { power: u64, expected: ButsonMatrix },
    /// Multiplicative order of m^(-1/2)·M.
    UnitaryOrder { order: u64 },
    /// Multiplicative order of m^(-1/2)·ζ_s^a·M.
    ScaledUnitaryOrder {
        scale_order: u64,
        scale_exp: u64,
        order: u64,
    },
    /// T contains translates of the d-th roots exactly at these offsets, and
    /// the realized image over each translate has this root order: a complete
    /// morphism But(n, d) -> But(degree·n, output_order).
    CompleteSignature {
        d: u64,
        offsets: Vec<u64>,
        output_order: u64,
    },
    /// domain ⊆ T with realized image root order: a partial morphism on
    /// matrices whose entries lie in the domain.
    PartialSignature {
        domain: BTreeSet<u64>,
        output_order: u64,
    },
    /// The spectrum exponent multiset is closed under the Galois action
    /// fixing the entry field.
    GaloisClosed,
}

impl fmt::Display for Claim {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Claim::IsButson { n, k } => write!(f, "member of But({n},{k})"),
            Claim::Spectrum(c) => write!(f, "spectrum {c}"),
            Claim::PowerSet { expected } => {
                write!(f, "Hadamard-power set T = {{{}}}", join(expected.iter()))
            }
            Claim::ScalarPower { power, scalar } => write!(f, "M^{power} = {scalar}·I"),
            Claim::PrintedPower { power, .. } => {
                write!(
                    f,
                    "scaled power at exponent {power} matches the printed matrix"
                )
            }
            Claim::UnitaryOrder { order } => write!(f, "unitary order {order}"),
            Claim::ScaledUnitaryOrder {
                scale_order,
                scale_exp,
                order,
            } => write!(
                f,
                "unitary order {order} after scaling by zeta_{scale_order}^{scale_exp}"
            ),
            Claim::CompleteSignature {
                d,
                offsets,
                output_order,
            } => write!(
                f,
                "complete morphism But(n,{d}) -> But(deg·n,{output_order}) at offsets {{{}}}",
                join(offsets.iter())
            ),
            Claim::PartialSignature {
                domain,
                output_order,
            } => write!(
                f,
                "partial morphism on entries {{{}}} into root order {output_order}",
                join(domain.iter())
            ),
            Claim::GaloisClosed => write!(f, "spectrum closed under the entry-field Galois action"),
        }
    }
}

fn join<'a>(it: impl Iterator<Item = &'a u64>) -> String {
    it.map(|e| e.to_string()).collect::<Vec<_>>().join(",")
}

pub struct CatalogEntry {
    pub name: &'static str,
    pub description: &'static str,
    pub matrix: ButsonMatrix,
    pub claims: Vec<Claim>,
}

impl CatalogEntry {
    /// Builds the fully analyzed seed (certified spectrum + power set).
    pub fn seed(&self) -> Result<MorphismSeed, morphism::MorphismError> {
        MorphismSeed::analyze(
            self.matrix.clone(),
            spectra::default_bound(self.matrix.root_order()),
        )
    }
}

/// Outcome of re-deriving one claim.
#[derive(Debug, Clone)]
pub struct ClaimResult {
    pub claim: String,
    pub outcome: Result<(), String>,
}

#[derive(Debug, Clone)]
pub struct EntryReport {
    pub name: String,
    pub results: Vec<ClaimResult>,
}

impl EntryReport {
    pub fn passed(&self) -> bool {
        self.results.iter().all(|r| r.outcome.is_ok())
    }
}

#[derive(Debug, Clone, Default)]
pub struct CatalogReport {
    pub entries: Vec<EntryReport>,
}

impl CatalogReport {
    pub fn passed(&self) -> bool {
        self.entries.iter().all(|e| e.passed())
    }
}

fn rows(k: u64, rows: &[&[u64]]) -> ButsonMatrix {
    let rows: Vec<Vec<u64>> = rows.iter().map(|r| r.to_vec()).collect();
    ButsonMatrix::from_rows(k, &rows).expect("catalog matrices are Hadamard")
}

static CATALOG: LazyLock<Vec<CatalogEntry>> = LazyLock::new(|| {
    vec![
        CatalogEntry {
            name: "M8",
            description: "Turyn's 2x2 real seed: quaternary-to-real degree-2 morphisms",
            matrix: rows(2, &[&[0, 0], &[1, 0]]),
            claims: vec![
                Claim::IsButson { n: 2, k: 2 },
                Claim::Spectrum(SpectrumClaim::new(2, 8, [1, 7])),
                Claim::PowerSet {
                    expected: [1, 3, 5, 7].into_iter().collect(),
                },
                Claim::ScalarPower {
                    power: 8,
                    scalar: 16,
                },
                Claim::PrintedPower {
                    power: 3,
                    expected: rows(2, &[&[1, 0], &[1, 1]]),
                },
                Claim::UnitaryOrder { order: 8 },
                Claim::CompleteSignature {
                    d: 4,
                    offsets: vec![1],
                    output_order: 2,
                },
                Claim::GaloisClosed,
            ],
        },
        CatalogEntry {
            name: "M6",
            description: "Compton–Craigen–de Launey 4x4 real seed: unreal sextic matrices to real",
            matrix: rows(
                2,
                &[&[0, 0, 0, 0], &[1, 0, 1, 0], &[1, 0, 0, 1], &[1, 1, 0, 0]],
            ),
            claims: vec![
                Claim::IsButson { n: 4, k: 2 },
                Claim::Spectrum(SpectrumClaim::new(4, 6, [1, 1, 5, 5])),
                Claim::PowerSet {
                    expected: [1, 2, 4, 5].into_iter().collect(),
                },
                Claim::ScalarPower {
                    power: 3,
                    scalar: -8,
                },
                Claim::UnitaryOrder { order: 6 },
                Claim::PartialSignature {
                    domain: [1, 2, 4, 5].into_iter().collect(),
                    output_order: 2,
                },
                Claim::GaloisClosed,
            ],
        },
        CatalogEntry {
            name: "M5",
            description: "4x4 quaternary seed with primitive fifth-root spectrum",
            matrix: rows(
                4,
                &[&[2, 2, 2, 2], &[0, 2, 0, 2], &[1, 1, 3, 3], &[1, 3, 3, 1]],
            ),
            claims: vec![
                Claim::IsButson { n: 4, k: 4 },
                Claim::Spectrum(SpectrumClaim::new(4, 5, [1, 2, 3, 4])),
                Claim::PowerSet {
                    expected: [1, 2, 3, 4].into_iter().collect(),
                },
                Claim::UnitaryOrder { order: 5 },
                Claim::PartialSignature {
                    domain: [1, 2, 3, 4].into_iter().collect(),
                    output_order: 4,
                },
                Claim::GaloisClosed,
            ],
        },
        CatalogEntry {
            name: "K12",
            description: "4x4 real seed of unitary order 12 (stored without its 1/2 factor)",
            matrix: rows(
                2,
                &[&[0, 0, 0, 0], &[0, 1, 1, 0], &[0, 0, 1, 1], &[1, 0, 1, 0]],
            ),
            claims: vec![
                Claim::IsButson { n: 4, k: 2 },
                Claim::Spectrum(SpectrumClaim::new(4, 12, [1, 5, 7, 11])),
                Claim::PowerSet {
                    expected: [1, 2, 4, 5, 7, 8, 10, 11].into_iter().collect(),
                },
                Claim::UnitaryOrder { order: 12 },
                Claim::ScalarPower {
                    power: 6,
                    scalar: -64,
                },
                Claim::ScalarPower {
                    power: 12,
                    scalar: 4096,
                },
                Claim::CompleteSignature {
                    d: 4,
                    offsets: vec![1, 2],
                    output_order: 2,
                },
                Claim::GaloisClosed,
            ],
        },
        CatalogEntry {
            name: "M24",
            description: "2x2 quaternary seed with primitive 24th-root spectrum",
            matrix: rows(4, &[&[0, 0], &[3, 1]]),
            claims: vec![
                Claim::IsButson { n: 2, k: 4 },
                Claim::Spectrum(SpectrumClaim::new(2, 24, [7, 23])),
                Claim::PowerSet {
                    expected: (1..=24).filter(|i| i % 3 != 0).collect(),
                },
                Claim::UnitaryOrder { order: 24 },
                Claim::CompleteSignature {
                    d: 8,
                    offsets: vec![1, 2],
                    output_order: 8,
                },
                Claim::GaloisClosed,
            ],
        },
        CatalogEntry {
            name: "GOW2",
            description: "Gow's 2x2 quaternary seed; the zeta_8-scaled unitary has order 3",
            matrix: rows(4, &[&[2, 1], &[0, 1]]),
            claims: vec![
                Claim::IsButson { n: 2, k: 4 },
                Claim::Spectrum(SpectrumClaim::new(2, 24, [5, 13])),
                Claim::PowerSet {
                    expected: (1..=24).filter(|i| i % 3 != 0).collect(),
                },
                Claim::UnitaryOrder { order: 24 },
                Claim::ScaledUnitaryOrder {
                    scale_order: 8,
                    scale_exp: 1,
                    order: 3,
                },
                Claim::CompleteSignature {
                    d: 8,
                    offsets: vec![1, 2],
                    output_order: 8,
                },
                Claim::GaloisClosed,
            ],
        },
    ]
});

pub fn names() -> Vec<&'static str> {
    CATALOG.iter().map(|e| e.name).collect()
}

pub fn get(name: &str) -> Option<&'static CatalogEntry> {
    CATALOG.iter().find(|e| e.name.eq_ignore_ascii_case(name))
}

pub fn entries() -> &'static [CatalogEntry] {
    &CATALOG
}

/// Recomputes one claim from scratch.
fn check_claim(entry: &CatalogEntry, seed: &MorphismSeed, claim: &Claim) -> Result<(), String> {
    let m = &entry.matrix;
    match claim {
        Claim::IsButson { n, k } => {
            // construction already verified HH* = nI; the claim pins n and k
            if m.order() != *n {
                return Err(format!("order is {}, claimed {n}", m.order()));
            }
            if m.root_order() != *k {
                return Err(format!("root order is {}, claimed {k}", m.root_order()));
            }
            Ok(())
        }
        Claim::Spectrum(expected) => {
            if !spectra::certify_spectrum(m, expected).map_err(|e| e.to_string())? {
                return Err(format!("certification failed for {expected}"));
            }
            if seed.spectrum() != &expected.normalized() {
                return Err(format!(
                    "estimated spectrum {} differs from claimed {expected}",
                    seed.spectrum()
                ));
            }
            Ok(())
        }
        Claim::PowerSet { expected } => {
            let got: BTreeSet<u64> = seed.power_set().keys().copied().collect();
            if &got == expected {
                Ok(())
            } else {
                Err(format!(
                    "T = {{{}}}, claimed {{{}}}",
                    join(got.iter()),
                    join(expected.iter())
                ))
            }
        }
        Claim::ScalarPower { power, scalar } => {
            let mat = m
                .as_cyclo_matrix(m.root_order())
                .map_err(|e| e.to_string())?;
            let p = mat.pow(*power).map_err(|e| e.to_string())?;
            let expected = CycloMatrix::scalar(
                m.order(),
                &CycloElement::from_int(m.root_order(), BigInt::from(*scalar)),
            );
            if p == expected {
                Ok(())
            } else {
                Err(format!("M^{power} is not {scalar}·I"))
            }
        }
        Claim::PrintedPower { power, expected } => match seed.power(*power) {
            Some(got) if got == expected => Ok(()),
            Some(got) => Err(format!("power {power} is {got:?}, claimed {expected:?}")),
            None => Err(format!("exponent {power} is not in T")),
        },
        Claim::UnitaryOrder { order } => {
            let got = spectra::unitary_order(m, spectra::default_bound(m.root_order()))
                .map_err(|e| e.to_string())?;
            if got == Some(*order) {
                Ok(())
            } else {
                Err(format!("unitary order is {got:?}, claimed {order}"))
            }
        }
        Claim::ScaledUnitaryOrder {
            scale_order,
            scale_exp,
            order,
        } => {
            let scaled = m.scale_by_root(*scale_order, *scale_exp);
            let got = spectra::unitary_order(&scaled, spectra::default_bound(scaled.root_order()))
                .map_err(|e| e.to_string())?;
            if got == Some(*order) {
                Ok(())
            } else {
                Err(format!("scaled unitary order is {got:?}, claimed {order}"))
            }
        }
        Claim::CompleteSignature {
            d,
            offsets,
            output_order,
        } => {
            let domains = seed.complete_domains();
            let found = domains
                .iter()
                .find(|(dd, _)| dd == d)
                .ok_or_else(|| format!("no translate of the {d}-th roots inside T"))?;
            if &found.1 != offsets {
                return Err(format!(
                    "offsets for d={d} are {{{}}}, claimed {{{}}}",
                    join(found.1.iter()),
                    join(offsets.iter())
                ));
            }
            for &c in offsets {
                let progression = (0..*d).map(|j| c + j * (seed.period() / d));
                match seed.output_order_for(progression) {
                    Some(got) if got == *output_order => {}
                    got => {
                        return Err(format!(
                            "image root order over offset {c} is {got:?}, claimed {output_order}"
                        ))
                    }
                }
            }
            Ok(())
        }
        Claim::PartialSignature {
            domain,
            output_order,
        } => {
            let t = seed.t_residues();
            if let Some(&bad) = domain.iter().find(|e| !t.contains(e)) {
                return Err(format!("domain exponent {bad} is not in T"));
            }
            match seed.output_order_for(domain.iter().copied()) {
                Some(got) if got == *output_order => Ok(()),
                got => Err(format!(
                    "image root order is {got:?}, claimed {output_order}"
                )),
            }
        }
        Claim::GaloisClosed => {
            if seed
                .spectrum()
                .is_galois_closed(m.root_order())
                .map_err(|e| e.to_string())?
            {
                Ok(())
            } else {
                Err("exponent multiset is not Galois-closed".to_string())
            }
        }
    }
}

/// Re-derives every claim of one entry.
pub fn verify_entry(entry: &CatalogEntry) -> EntryReport {
    let mut results = Vec::new();
    match entry.seed() {
        Ok(seed) => {
            for claim in &entry.claims {
                results.push(ClaimResult {
                    claim: claim.to_string(),
                    outcome: check_claim(entry, &seed, claim),
                });
            }
        }
        Err(e) => results.push(ClaimResult {
            claim: "seed analysis".to_string(),
            outcome: Err(e.to_string()),
        }),
    }
    EntryReport {
        name: entry.name.to_string(),
        results,
    }
}

/// Re-derives every claim of every entry.
pub fn verify_all() -> CatalogReport {
    CatalogReport {
        entries: CATALOG.iter().map(verify_entry).collect(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn catalog_names_are_fixed() {
        assert_eq!(names(), vec!["M8", "M6", "M5", "K12", "M24", "GOW2"]);
        assert!(get("m8").is_some());
        assert!(get("nope").is_none());
    }

    #[test]
    fn printed_matrices_match_their_sources() {
        // spot-check entries against the printed grids
        let m8 = &get("M8").unwrap().matrix;
        assert_eq!((m8.at(0, 0), m8.at(1, 0)), (0, 1));
        let m24 = &get("M24").unwrap().matrix;
        assert_eq!((m24.at(1, 0), m24.at(1, 1)), (3, 1)); // -i, i
        let gow = &get("GOW2").unwrap().matrix;
        assert_eq!((gow.at(0, 0), gow.at(0, 1)), (2, 1)); // -1, i
    }

    #[test]
    fn m24_variant_is_the_entrywise_conjugate_of_its_square_form() {
        // the other printed variant [[1,1],[i,-i]] is the entrywise conjugate
        let m24 = &get("M24").unwrap().matrix;
        let conj = m24.conjugate_entries();
        let variant = ButsonMatrix::from_rows(4, &[vec![0, 0], vec![1, 3]]).unwrap();
        assert_eq!(conj, variant);
    }

    #[test]
    fn whole_catalog_verifies() {
        let report = verify_all();
        for entry in &report.entries {
            for r in &entry.results {
                assert!(
                    r.outcome.is_ok(),
                    "{}: {} -> {:?}",
                    entry.name,
                    r.claim,
                    r.outcome
                );
            }
        }
        assert!(report.passed());
    }

    #[test]
    fn gow_unitary_after_scaling_has_order_three() {
        let gow = &get("GOW2").unwrap().matrix;
        let scaled = gow.scale_by_root(8, 1);
        assert_eq!(spectra::unitary_order(&scaled, 12).unwrap(), Some(3));
    }
}
