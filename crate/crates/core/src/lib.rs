//! Exact-arithmetic persistence modules with gaps.
//!
//! Everything here is computed over exact fields — GF(2) or ℚ — with grid
//! values kept as arbitrary-precision rationals, so every result is
//! bit-reproducible: no floats, no tolerances.
//!
//! The objects, bottom up:
//!
//! - [`field`] / [`matrix`]: the two ground fields and dense exact linear
//!   algebra (rank, solving, composition).
//! - [`module`]: finite, totally ordered persistence modules with an explicit
//!   colimit space; barcodes, duality, value shifts, interleaving
//!   verification, and spectral invariants of colimit classes.
//! - [`barcode`]: interval multisets and the exact bottleneck distance
//!   (binary search over candidate costs + bipartite matching).
//! - [`gapped`]: modules indexed by a *partially* ordered grid where maps
//!   exist only across gaps of at least λ; gapped index sequences,
//!   restrictions back to totally ordered modules, normalization, and the
//!   gapped spectral invariant with a restriction-search cross-check.
//! - [`envelope`] / [`fixture`]: piecewise-constant oscillation envelopes
//!   with the arithmetic feeding quasi-state estimates (concatenation,
//!   triangle-inequality checks, Fekete brackets), and the exactly solvable
//!   two-sphere cotangent fixture used as the golden corpus.
//!
//! The crate is `no_std` (with `alloc`); IO and serialization live in the
//! companion CLI crate.

#![no_std]
#![forbid(unsafe_code)]

extern crate alloc;

pub mod barcode;
pub mod envelope;
pub mod error;
pub mod field;
pub mod fixture;
pub mod gapped;
pub mod matching;
pub mod matrix;
pub mod module;
#[cfg(feature = "testkit")]
pub mod testkit;


pub use barcode::{bottleneck_distance, Bar, Barcode, Death};
pub use envelope::{
    check_triangle, concatenate, fekete_limit, m_hg, osc_pair, tilde_c, ConcatConvention,
    ContactEnvelope, FeketeBracket,
};
pub use error::{Error, Violation};
pub use field::{Extended, Field, Gf2, Rational};
pub use fixture::{build_s2_fixture, s2_classes, s2_reference, S2FixtureSpec, S2Reference};
pub use gapped::{leq_gap, GappedModule, GappedSequence, SpectralCrossCheck};
pub use matrix::Matrix;
pub use module::{verify_interleaving, PersistenceModule};

