//! Exact computation in free groups around counting quasi-morphisms and
//! verbal width.
//!
//! The crate provides four layers:
//!
//! - [`word`]: freely reduced words, cyclic reduction, and the tree geometry
//!   (Gromov products) of a free group;
//! - [`counting`]: counting quasi-morphisms, the independent detector family
//!   `a b^2i a b^2i+1`, and audits of their defect and additivity behaviour;
//! - [`wordmap`] and [`certificate`]: word maps in variables, exponent data
//!   with Bézout coefficients, witness words, and machine-checkable
//!   verbal-length lower bounds;
//! - [`oracle`]: independent brute-force recounts and bounded upper-bound
//!   searches that cross-check every certificate.
//!
//! All arithmetic is exact; every randomized audit takes an explicit seed.
//! Values are immutable and the operations are pure functions, so everything
//! is safe to use concurrently.
//!
//! ```
//! use verbal::{certify_vl_lower_bound, witness, Word, WordMap};
//!
//! let map = WordMap::parse("x1 x2 x1 x2^-1")?;
//! let h = witness(&map, 12)?;
//! let cert = certify_vl_lower_bound(&map, &h, 12, 3)?;
//! assert!(cert.lower_bound >= 2);
//! # Ok::<(), verbal::Error>(())
//! ```

pub mod counting;
pub mod error;
mod kmp;
pub mod oracle;
pub mod rng;
pub mod word;
pub mod wordmap;

pub mod certificate;

pub use counting::{
    audit_pair_bounds, certified_defect_bound, count_occurrences, defect_exact,
    exceptional_indices, family_pattern, family_qm, self_overlap_free, CountingQM, DefectBound,
    DefectPolicy, Mode,
};
pub use certificate::{
    certify_svl_positive, certify_vl_lower_bound, cyclically_reduced_verbal_element, witness,
    SvlEvidence, WidthCertificate,
};
pub use error::{Error, Result};
pub use oracle::{
    ball_size, cross_check_certificate, enumerate_ball, naive_count_occurrences,
    verbal_values_bounded, vl_upper_bound, SearchBudget, Verdict,
};
pub use rng::SplitMix64;
pub use word::{commutator, CyclicWord, Letter, Word};
pub use wordmap::{ExponentData, VarLetter, WordMap};
