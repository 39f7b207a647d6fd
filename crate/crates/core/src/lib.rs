//! Exact tools for Butson Hadamard matrices and the plug-in morphisms
//! between Butson classes.
//!
//! A matrix H of order n with entries in the k-th roots of unity is Butson
//! Hadamard when HH* = nI_n; the set of such matrices is But(n, k). This
//! crate works with these matrices exactly: entries are exponents modulo k,
//! inner products are evaluated in Z[ζ_k], and every spectral or structural
//! claim is certified by an algebraic identity rather than a tolerance.
//! Floating point appears only to *propose* facts (eigenvalue estimates),
//! never to accept them.
//!
//! ```
//! use butson_morphisms::{butson::ButsonMatrix, catalog, morphism};
//!
//! // Turyn's construction: plug the seed M8 into a quaternary matrix
//! let seed = catalog::get("M8").unwrap().seed().unwrap();
//! let h = ButsonMatrix::fourier(4).scale_by_root(8, 1);
//! let image = morphism::check_sound(&h, &seed, None, None).unwrap().apply();
//! assert_eq!((image.order(), image.root_order()), (8, 2)); // real Hadamard
//! ```

pub mod butson;
pub mod catalog;
pub mod cli;
pub mod cyclotomic;
pub mod exact_matrix;
pub mod morphism;
pub mod search;
pub mod spectra;

pub use butson::{ButsonError, ButsonMatrix, ExponentGrid};
pub use cyclotomic::{CycloElement, CycloError, RootOfUnity};
pub use exact_matrix::{CharPoly, CycloMatrix, MatrixError, Permutation};
pub use morphism::{MorphismError, MorphismSeed, SoundPair, SoundnessViolation};
pub use spectra::{SpectraError, SpectrumClaim};
