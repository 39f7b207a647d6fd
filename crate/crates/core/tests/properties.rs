//! Cross-module properties: the plug-in theorem exercised as an executable
//! statement over generated pairs, domain feedback, twist composition, and
//! randomized structural invariants.

use butson_morphisms::butson::ButsonMatrix;
use butson_morphisms::catalog;
use butson_morphisms::cyclotomic::{self, CycloElement};
use butson_morphisms::exact_matrix::CycloMatrix;
use butson_morphisms::morphism::{self, MorphismSeed};
use butson_morphisms::search;
use num_bigint::BigInt;
use proptest::prelude::*;
use std::collections::BTreeSet;

fn seed(name: &str) -> MorphismSeed {
    catalog::get(name).unwrap().seed().unwrap()
}

fn f2() -> ButsonMatrix {
    ButsonMatrix::from_rows(2, &[vec![0, 0], vec![0, 1]]).unwrap()
}

/// The main theorem, run as a test: every sound pair built from catalog
/// seeds and a spread of generated inputs yields a verified Hadamard image
/// of the composed degree.
#[test]
fn plugin_images_verify_for_generated_pairs() {
    let m8 = seed("M8");
    let m6 = seed("M6");
    let m24 = seed("M24");
    let k12 = seed("K12");

    let mut cases: Vec<(&MorphismSeed, ButsonMatrix)> = Vec::new();

    // (zeta_8 H, M8) for H in But(n,4): Fourier inputs and enumerated 2x2s
    cases.push((&m8, f2().lift(4).unwrap().scale_by_root(8, 1)));
    cases.push((&m8, ButsonMatrix::fourier(4).scale_by_root(8, 1)));
    for h in search::enumerate_but2(4).into_iter().step_by(7) {
        cases.push((&m8, h.scale_by_root(8, 1)));
    }

    // (H, M6) for unreal H in But(2,6)
    for h in search::enumerate_but2(6) {
        if h.avoids_real() {
            cases.push((&m6, h));
        }
    }

    // (zeta_24 H, M24) for H in But(n,8)
    cases.push((&m24, f2().lift(8).unwrap().scale_by_root(24, 1)));
    cases.push((&m24, ButsonMatrix::fourier(8).scale_by_root(24, 1)));
    for h in search::enumerate_but2(8).into_iter().step_by(31) {
        cases.push((&m24, h.scale_by_root(24, 1)));
    }

    // (zeta_12 H, K12) for H in But(n,4)
    cases.push((&k12, f2().lift(4).unwrap().scale_by_root(12, 1)));
    cases.push((&k12, ButsonMatrix::fourier(4).scale_by_root(12, 1)));

    let mut applied = 0;
    for (s, h) in cases {
        let pair = morphism::check_sound(&h, s, None, None)
            .unwrap_or_else(|e| panic!("pair with degree-{} seed: {e}", s.degree()));
        let image = pair.apply();
        assert_eq!(image.order(), s.degree() * h.order(), "degree composes");
        applied += 1;
    }
    assert!(applied > 40, "exercised {applied} pairs");
}

/// Feeding a maximal complete domain back through scale_by_root always gives
/// a sound pair on all of But(n, d).
#[test]
fn complete_domains_feed_back_into_sound_pairs() {
    let cases: Vec<MorphismSeed> = vec![
        seed("M8"),
        morphism::twist(&seed("M8"), 3).unwrap(),
        morphism::twist(&seed("K12"), 5).unwrap(),
    ];
    for s in &cases {
        let domains = s.complete_domains();
        let (d, offsets) = &domains[0];
        for &offset in offsets {
            // H in But(n, d) for n = 2, 3 when they exist
            let mut inputs: Vec<ButsonMatrix> = vec![];
            if d % 2 == 0 {
                inputs.push(f2().lift(*d).unwrap());
            }
            if d % 3 == 0 {
                inputs.push(ButsonMatrix::fourier(3).lift(*d).unwrap());
            }
            for h in inputs {
                let scaled = h.scale_by_root(s.period(), offset);
                let x: BTreeSet<u64> = (0..*d)
                    .map(|j| (offset + j * (s.period() / d)) % s.period())
                    .collect();
                let pair = morphism::check_sound(&scaled, s, Some(x), None)
                    .expect("domain progression is sound");
                let image = pair.apply();
                assert_eq!(image.order(), s.degree() * scaled.order());
            }
        }
    }
}

/// A degree-8 seed built by tensoring the symmetric Sylvester matrix with
/// the Turyn seed still induces a complete morphism on But(n, 4); the image
/// of a 2x2 input is a verified 16x16 real Hadamard matrix.
#[test]
fn tensor_lifted_seed_maps_into_but_16_2() {
    let sylvester = f2().kron(&f2());
    let lifted = morphism::tensor_lift(&sylvester, &seed("M8")).unwrap();
    assert_eq!(lifted.degree(), 8);
    assert_eq!(lifted.complete_domains(), vec![(4, vec![1])]);
    let h = f2().lift(4).unwrap().scale_by_root(8, 1);
    let image = morphism::check_sound(&h, &lifted, None, None)
        .unwrap()
        .apply();
    assert_eq!((image.order(), image.root_order()), (16, 2));
}

/// ζ_t·ζ_t' = ζ_tt'^(t+t'), so composing twists does not literally equal the
/// single twist by t·t'; what is preserved: the twisted power set, the
/// eigenvalue order, the effective output order, and the scaling relation.
#[test]
fn twist_composition() {
    let s = seed("M8");
    let composed = morphism::twist(&morphism::twist(&s, 3).unwrap(), 5).unwrap();
    let direct = morphism::twist(&s, 15).unwrap();
    assert_eq!(composed.period(), direct.period());
    assert_eq!(
        composed.power_set().keys().collect::<Vec<_>>(),
        direct.power_set().keys().collect::<Vec<_>>()
    );
    assert_eq!(
        composed.effective_output_order(),
        direct.effective_output_order()
    );
    assert_eq!(composed.spectrum().m, direct.spectrum().m);
    // composed matrix is M8 scaled by ζ3·ζ5 = ζ15^8
    assert_eq!(composed.matrix(), &s.matrix().scale_by_root(15, 8));
    assert_eq!(direct.matrix(), &s.matrix().scale_by_root(15, 1));
}

/// Global equivalence operations preserve membership.
#[test]
fn scaling_and_conjugation_preserve_membership() {
    for entry in catalog::entries() {
        let h = &entry.matrix;
        for (t, a) in [(2u64, 1u64), (3, 1), (8, 3), (12, 5)] {
            let scaled = h.scale_by_root(t, a); // re-verifies internally
            assert_eq!(scaled.order(), h.order());
        }
        let _ = h.conjugate_entries(); // re-verifies internally
    }
}

fn small_level() -> impl Strategy<Value = u64> {
    prop::sample::select(vec![1u64, 2, 3, 4, 6, 8, 12])
}

fn element(level: u64) -> impl Strategy<Value = CycloElement> {
    let width = cyclotomic::euler_phi(level) as usize;
    prop::collection::vec(-9i64..=9, width).prop_map(move |v| {
        CycloElement::from_coeffs(level, v.into_iter().map(BigInt::from).collect())
    })
}

fn element_pair() -> impl Strategy<Value = (CycloElement, CycloElement)> {
    small_level().prop_flat_map(|level| (element(level), element(level)))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn conjugation_is_a_ring_involution((a, b) in element_pair()) {
        prop_assert_eq!((&a * &b).conjugate(), &a.conjugate() * &b.conjugate());
        prop_assert_eq!(a.conjugate().conjugate(), a);
    }

    #[test]
    fn embedding_commutes_with_arithmetic(
        (a, b) in element_pair(),
        factor in prop::sample::select(vec![2u64, 3, 4]),
    ) {
        let target = a.level() * factor;
        let sum = (&a + &b).embed(target).unwrap();
        prop_assert_eq!(sum, &a.embed(target).unwrap() + &b.embed(target).unwrap());
        let prod = (&a * &b).embed(target).unwrap();
        prop_assert_eq!(prod, &a.embed(target).unwrap() * &b.embed(target).unwrap());
    }

    #[test]
    fn cayley_hamilton_for_random_root_matrices(
        n in 2usize..=3,
        exps in prop::collection::vec(0u64..12, 9),
    ) {
        let a = CycloMatrix::from_fn(12, n, n, |r, c| CycloElement::root(12, exps[r * 3 + c]));
        let cp = a.char_poly().unwrap();
        prop_assert!(cp.eval_matrix(&a).unwrap().is_zero());
    }

    #[test]
    fn serialize_round_trips_generated_matrices(
        base in 1usize..=4,
        kron_with in 1usize..=3,
        t in 1u64..=8,
        a in 0u64..8,
        power in 1u64..=11,
    ) {
        let mut h = ButsonMatrix::fourier(base);
        if base * kron_with <= 8 {
            h = h.kron(&ButsonMatrix::fourier(kron_with));
        }
        h = h.scale_by_root(t, a % t.max(1));
        let k = h.root_order();
        if cyclotomic::gcd(power % k, k) == 1 {
            h = ButsonMatrix::verify(h.power_map(power % k)).unwrap();
        }
        let text = h.serialize();
        prop_assert_eq!(ButsonMatrix::parse(&text).unwrap(), h);
    }

    #[test]
    fn row_and_column_permutations_stay_hadamard(
        idx in 0usize..64,
        swap_a in 0usize..2,
        rot in 0usize..2,
    ) {
        let all = search::enumerate_but2(4);
        let h = &all[idx];
        let n = h.order();
        let k = h.root_order();
        let rows: Vec<Vec<u64>> = (0..n)
            .map(|r| {
                let src = if r == swap_a { (swap_a + 1) % n } else if r == (swap_a + 1) % n { swap_a } else { r };
                (0..n).map(|c| h.at(src, (c + rot) % n)).collect()
            })
            .collect();
        prop_assert!(ButsonMatrix::from_rows(k, &rows).is_ok());
        // Hermitian adjoint as well
        let adj: Vec<Vec<u64>> = (0..n)
            .map(|r| (0..n).map(|c| (k - h.at(c, r)) % k).collect())
            .collect();
        prop_assert!(ButsonMatrix::from_rows(k, &adj).is_ok());
    }
}
